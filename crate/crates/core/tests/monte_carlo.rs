use dpc_core::estimation::{
    achievable_delta, estimation_quality, posterior_params, required_training_length, ChannelParams,
    EstimationQuality, TrainingConfig,
};
use dpc_core::rates::{capacity_rx, capacity_txrx, mean_alpha, perfect_csi_capacity};
use dpc_core::simulate::{
    mc_capacity_txrx, mc_mean_alpha, mc_perfect_csi, mc_posterior, mc_rate, simulate_training, SimConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q_OVER_P_DB: f64 = 20.0;

fn pilot_only(snr_db: f64, q_db: f64, n: u64, trials: u64, seed: u64) -> SimConfig {
    let ch = ChannelParams::from_snr_db(snr_db, q_db).unwrap();
    let training = TrainingConfig::pilot_only(n, ch.input_power).unwrap();
    SimConfig::new(trials, seed, ch, training).unwrap()
}

fn pilot_plus_state(n: u64, delta: f64, gamma: f64, trials: u64) -> SimConfig {
    let ch = ChannelParams::new(1.0, 1.0, 1.0, dpc_core::db_to_linear(Q_OVER_P_DB)).unwrap();
    let training = TrainingConfig::pilot_plus_state(n, 1.0, delta, gamma).unwrap();
    SimConfig::new(trials, 5, ch, training).unwrap()
}

#[test]
fn mean_alpha_matches_monte_carlo() {
    let cfg = pilot_only(10.0, Q_OVER_P_DB, 10, 1_000_000, 1);
    let q = cfg.quality().unwrap();
    let mc = mc_mean_alpha(&cfg).unwrap();
    assert!(mc.within(mean_alpha(&cfg.channel, &q).unwrap(), 4.0), "{mc:?}");
}

#[test]
fn high_snr_mean_alpha_near_one() {
    let cfg = pilot_only(50.0, Q_OVER_P_DB, 1000, 10_000, 2);
    assert!(mc_mean_alpha(&cfg).unwrap().mean > 0.99);
}

#[test]
fn capacity_rx_matches_sampled_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..10 {
        let cfg = pilot_only(
            rng.random_range(-5.0..40.0),
            rng.random_range(0.0..40.0),
            rng.random_range(1..40),
            200_000,
            100 + i,
        );
        let alpha = rng.random_range(0.0..1.0);
        let q = cfg.quality().unwrap();
        let mc = mc_rate(alpha, &cfg).unwrap();
        let quad = capacity_rx(alpha, &cfg.channel, &q, 64).unwrap();
        assert!(mc.within(quad, 4.0), "config {i}: {mc:?} vs {quad}");
    }
}

#[test]
fn capacity_rx_at_reference_point() {
    let cfg = pilot_only(10.0, 20.0, 10, 1_000_000, 3);
    let q = cfg.quality().unwrap();
    for alpha in [0.2, 0.5] {
        let mc = mc_rate(alpha, &cfg).unwrap();
        assert!(mc.within(capacity_rx(alpha, &cfg.channel, &q, 64).unwrap(), 4.0));
    }
}

#[test]
fn capacity_txrx_matches_monte_carlo() {
    let cfg = pilot_only(15.0, 30.0, 5, 500_000, 4);
    let q = cfg.quality().unwrap();
    let mc = mc_capacity_txrx(&cfg).unwrap();
    assert!(mc.within(capacity_txrx(&cfg.channel, &q, 64).unwrap(), 4.0));

    let louder = {
        let mut ch = cfg.channel;
        ch.state_power *= 2.0;
        SimConfig::new(cfg.trials, cfg.seed, ch, cfg.training).unwrap()
    };
    assert!(mc_capacity_txrx(&louder).unwrap().mean < mc.mean);
}

#[test]
fn degenerate_limit_matches_perfect_csi() {
    let ch = ChannelParams::new(1.0, 1.0, 10.0, 1e-9).unwrap();
    let cfg = SimConfig::new(500_000, 6, ch, TrainingConfig::pilot_only(1, 10.0).unwrap()).unwrap();
    let perfect = perfect_csi_capacity(&ch, 64).unwrap();
    let q = EstimationQuality::perfect();
    for alpha in [0.0, 0.5, 1.0] {
        let mc = dpc_core::simulate::mc_rate_with(alpha, &cfg, &q).unwrap();
        assert!(mc.within(perfect, 4.0), "α {alpha}: {mc:?}");
    }
    assert!(mc_perfect_csi(&cfg).within(perfect, 4.0));
}

#[test]
fn pilot_only_error_variance() {
    for (n, snr_db) in [(1, 0.0), (10, 0.0), (10, 10.0), (50, -5.0)] {
        let cfg = pilot_only(snr_db, Q_OVER_P_DB, n, 200_000, 7);
        let expected = cfg.quality().unwrap().error_var;
        let stats = simulate_training(&cfg);
        assert!(stats.error_var.within(expected, 4.0), "N {n}: {:?} vs {expected}", stats.error_var);
        assert!(stats.bias_re.within(0.0, 4.0) && stats.bias_im.within(0.0, 4.0));
    }
}

#[test]
fn pilot_plus_state_error_variance() {
    let gamma = 1e-2;
    let delta = 0.5;
    let n = required_training_length(delta, gamma, 1.0, dpc_core::db_to_linear(Q_OVER_P_DB)).unwrap();
    let cfg = pilot_plus_state(n, delta, gamma, 50_000);
    let expected = cfg.quality().unwrap().error_var;
    let stats = simulate_training(&cfg);
    assert!(stats.error_var.within(expected, 4.0), "{:?} vs {expected}", stats.error_var);
    let failures = stats.failure_rate();
    assert!(failures.mean <= gamma + 3.0 * (gamma * (1.0 - gamma) / cfg.trials as f64).sqrt());
}

#[test]
fn failure_frequency_respects_tolerance() {
    let gamma = 1e-2;
    let q = dpc_core::db_to_linear(Q_OVER_P_DB);
    let n = 500;
    let delta = achievable_delta(n, gamma, 1.0, q).unwrap().expect("feasible");
    let trials = 100_000;
    let stats = simulate_training(&pilot_plus_state(n, delta, gamma, trials));
    let sigma = (gamma * (1.0 - gamma) / trials as f64).sqrt();
    assert!(stats.failure_rate().mean <= gamma + 3.0 * sigma, "{:?}", stats.failure_rate());
    // halving the length with the same Δ breaks the tolerance
    let short = simulate_training(&pilot_plus_state(n / 2, delta, gamma, trials));
    assert!(short.failure_rate().mean > gamma + 3.0 * sigma);
}

#[test]
fn posterior_statistics() {
    let configs = [
        pilot_only(0.0, Q_OVER_P_DB, 1, 400_000, 8),
        pilot_only(5.0, 10.0, 4, 400_000, 9),
        pilot_only(-5.0, 0.0, 20, 400_000, 10),
        {
            let ch = ChannelParams::new(2.0, 0.5, 1.5, 1.0).unwrap();
            SimConfig::new(400_000, 11, ch, TrainingConfig::pilot_only(3, 1.5).unwrap()).unwrap()
        },
        pilot_plus_state(400, 0.5, 1e-2, 100_000),
    ];
    for cfg in configs {
        let q = estimation_quality(&cfg.training, &cfg.channel).unwrap();
        let (_, posterior_var) = posterior_params(&cfg.channel, &q);
        let stats = mc_posterior(&cfg).unwrap();
        assert!(stats.residual_var.within(posterior_var, 4.0), "{:?} vs {posterior_var}", stats.residual_var);
        assert!(stats.cross_re.within(0.0, 4.0) && stats.cross_im.within(0.0, 4.0));
    }
}
