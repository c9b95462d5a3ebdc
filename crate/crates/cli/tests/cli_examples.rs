//! End-to-end runs of the `dpc` binary.

use std::process::{Command, Output};

fn dpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpc")).args(args).output().unwrap()
}

/// Parses CSV stdout into a header and rows of optional floats.
fn csv(args: &[&str]) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let out = dpc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().ok()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i]).collect()
}

fn snake(name: &str) -> bool {
    name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[test]
fn fig1_orders_tolerances_and_decreases_in_length() {
    let (header, rows) = csv(&["fig1"]);
    assert!(header.iter().all(|h| snake(h)));
    let pilot = column(&header, &rows, "eta_pilot_only");
    let loose = column(&header, &rows, "eta_gamma_0p1");
    let mid = column(&header, &rows, "eta_gamma_0p01");
    let tight = column(&header, &rows, "eta_gamma_0p001");
    for curve in [&pilot, &loose, &mid, &tight] {
        let known: Vec<f64> = curve.iter().flatten().copied().collect();
        assert!(known.windows(2).all(|w| w[1] < w[0]));
    }
    for i in 0..rows.len() {
        // tighter tolerance needs more noise reduction, never less
        if let (Some(a), Some(b)) = (loose[i], mid[i]) {
            assert!(a <= b);
        }
        if let (Some(b), Some(c)) = (mid[i], tight[i]) {
            assert!(b <= c);
        }
        if tight[i].is_some() {
            assert!(mid[i].is_some());
        }
        assert!(loose[i].is_none_or(|a| a > pilot[i].unwrap()));
    }
}

#[test]
fn fig2_alphas_approach_one_and_stay_close() {
    let (header, rows) = csv(&["fig2"]);
    let snr = column(&header, &rows, "snr_db");
    for n in [1, 10, 20] {
        let star = column(&header, &rows, &format!("alpha_star_n{n}"));
        let mean = column(&header, &rows, &format!("alpha_mean_n{n}"));
        assert!(mean.last().unwrap().unwrap() > 0.9);
        for i in 0..rows.len() {
            let (a, m) = (star[i].unwrap(), mean[i].unwrap());
            assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&m));
            let s = snr[i].unwrap();
            if (10.0..=30.0).contains(&s) {
                assert!((a - m).abs() <= 0.15, "n = {n}, snr = {s}: {a} vs {m}");
            }
        }
    }
    let m1 = column(&header, &rows, "alpha_mean_n1");
    let m20 = column(&header, &rows, "alpha_mean_n20");
    assert!(m1.iter().zip(&m20).all(|(a, b)| a.unwrap() <= b.unwrap()));
}

#[test]
fn fig3_more_training_helps() {
    let (header, rows) = csv(&["fig3", "--snr-points", "19"]);
    let perfect = column(&header, &rows, "perfect_csi");
    let n1 = column(&header, &rows, "c_rx_opt_n1");
    let n10 = column(&header, &rows, "c_rx_opt_n10");
    let tx10 = column(&header, &rows, "c_txrx_n10");
    for i in 0..rows.len() {
        let (p, a, b, t) = (perfect[i].unwrap(), n1[i].unwrap(), n10[i].unwrap(), tx10[i].unwrap());
        assert!(a <= b && b <= t && t <= p);
    }
}

#[test]
fn fig4_state_power_hurts_only_without_csi() {
    let (header, rows) = csv(&["fig4", "--snr-points", "19"]);
    for i in 0..rows.len() {
        let opt: Vec<f64> = [20, 30, 40].map(|q| column(&header, &rows, &format!("c_rx_opt_q{q}"))[i].unwrap()).into();
        assert!(opt.windows(2).all(|w| w[1] <= w[0]));
        let perfect: Vec<f64> =
            [20, 30, 40].map(|q| column(&header, &rows, &format!("perfect_csi_q{q}"))[i].unwrap()).into();
        assert!(perfect.iter().all(|p| *p == perfect[0]));
    }
    for name in header.iter().skip(1) {
        let values: Vec<f64> = column(&header, &rows, name).into_iter().flatten().collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{name}");
    }
}

#[test]
fn training_design_reports_the_length() {
    let (header, rows) = csv(&["training-design", "--eta", "0.1"]);
    assert_eq!(column(&header, &rows, "n_star")[0], Some(504.0));
    assert_eq!(column(&header, &rows, "n_pilot_only_same_eta")[0], Some(10.0));
    let delta = column(&header, &rows, "delta")[0].unwrap();
    assert!((delta - 0.98016).abs() < 1e-4);
}

#[test]
fn rates_single_point() {
    let (header, rows) = csv(&["rates", "--snr-db", "18", "--n", "10"]);
    assert_eq!(rows.len(), 1);
    let opt = column(&header, &rows, "c_rx_opt")[0].unwrap();
    assert!((opt - 2.0).abs() < 0.1);
}

#[test]
fn exit_codes() {
    assert_eq!(dpc(&["fig3", "--snr-start", "10", "--snr-stop", "0"]).status.code(), Some(1));
    assert_eq!(dpc(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(dpc(&["--help"]).status.code(), Some(0));
    assert_eq!(dpc(&["fig3", "--quad-order", "2", "--snr-points", "3"]).status.code(), Some(3));
    let out = dpc(&["validate", "--trials", "20000", "--perturb-shrinkage", "0.05"]);
    assert_eq!(out.status.code(), Some(2));
}
