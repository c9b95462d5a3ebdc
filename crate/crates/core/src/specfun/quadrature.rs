//! Quadrature for `∫₀^∞ f(t) e^{-t} dt`.
//!
//! Plain Gauss–Laguerre converges slowly when `f` has a logarithmic or polar
//! singularity just left of the origin, which is exactly what the rate
//! integrands look like at high SNR (`ln(1 + t/ε)` with `ε ≪ 1`). The
//! default rule is therefore composite: geometrically graded Gauss–Legendre
//! panels on `[0, 8]`, each panel no wider than its distance from the origin,
//! followed by a shifted Gauss–Laguerre rule for `[8, ∞)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const HEAD_LENGTH: f64 = 8.0;
/// Halvings of the head interval; the innermost panel ends near 1.8e-15.
const HEAD_LEVELS: i32 = 52;
const MAX_ORDER: usize = 1024;

/// Nodes and weights of a rule for the weight function `e^{-t}` on `[0, ∞)`.
///
/// Nodes are strictly increasing and positive, weights positive and summing
/// to one within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl QuadratureRule {
    /// Classical `order`-point Gauss–Laguerre rule.
    ///
    /// Nodes whose weight underflows `f64` are dropped; they carry no mass
    /// for the log-bounded integrands used here.
    pub fn gauss_laguerre(order: usize) -> Result<Self> {
        check_order(order)?;
        let (nodes, weights) = laguerre_nodes(order)
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .unzip();
        Ok(Self {
            nodes,
            weights,
            order,
        })
    }

    /// Composite rule: `order`-point Gauss–Laguerre on the tail and
    /// `max(order/4, 16)`-point Gauss–Legendre on each graded head panel.
    pub fn exponential(order: usize) -> Result<Self> {
        check_order(order)?;
        let panel_points = (order / 4).max(16);
        let legendre = legendre_nodes(panel_points);

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut push_panel = |lo: f64, hi: f64| {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for &(x, w) in &legendre {
                let t = mid + half * x;
                nodes.push(t);
                weights.push(half * w * (-t).exp());
            }
        };
        let innermost = HEAD_LENGTH * 2f64.powi(-HEAD_LEVELS);
        push_panel(0.0, innermost);
        for level in (0..HEAD_LEVELS).rev() {
            let hi = HEAD_LENGTH * 2f64.powi(-level);
            push_panel(0.5 * hi, hi);
        }

        let tail_scale = (-HEAD_LENGTH).exp();
        for (u, w) in laguerre_nodes(order) {
            let weight = tail_scale * w;
            if weight > 0.0 {
                nodes.push(HEAD_LENGTH + u);
                weights.push(weight);
            }
        }
        Ok(Self {
            nodes,
            weights,
            order,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Σ wᵢ f(tᵢ)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Returns `(Σ wᵢ f(tᵢ), Σ wᵢ |f(tᵢ)|)`.
    fn integrate_with_scale<F: Fn(f64) -> f64>(&self, f: &F) -> (f64, f64) {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold((0.0, 0.0), |(sum, abs), (&t, &w)| {
                let v = w * f(t);
                (sum + v, abs + v.abs())
            })
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "order",
            value: order as f64,
            reason: "quadrature order must lie in 1..=1024",
        })
    }
}

/// Shared composite rules, built once per order.
fn cached_rule(order: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&order) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(QuadratureRule::exponential(order)?);
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(order)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

/// Expectation over `t ~ Exp(1)` with an order-doubling convergence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub order: usize,
    /// Allowed change between `order` and `2·order`, relative to `∫|f|e^{-t}`.
    pub tolerance: f64,
}

impl Default for Expectation {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl Expectation {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            ..Self::default()
        }
    }

    /// `∫₀^∞ f(t) e^{-t} dt`, reported from the doubled-order rule.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let doubled = self.order * 2;
        let (coarse, _) = cached_rule(self.order)?.integrate_with_scale(&f);
        let (fine, scale) = cached_rule(doubled)?.integrate_with_scale(&f);
        if !fine.is_finite() {
            return Err(Error::Degenerate("integrand is not finite on (0, ∞)"));
        }
        let rel_change = if scale > 0.0 {
            (fine - coarse).abs() / scale
        } else {
            0.0
        };
        if rel_change > self.tolerance {
            return Err(Error::NonConvergence {
                order: self.order,
                doubled,
                rel_change,
                tolerance: self.tolerance,
            });
        }
        Ok(fine)
    }
}

/// `∫₀^∞ f(t) e^{-t} dt` at the given order with the default tolerance.
///
/// Callers with a non-unit exponential mean rescale the argument themselves,
/// e.g. `|Ĥ|² = t·(σ_h² + σ_E²)`.
pub fn expect_exponential<F: Fn(f64) -> f64>(f: F, order: usize) -> Result<f64> {
    Expectation::new(order).expect(f)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut derivative = 1.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            derivative = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, x);
        derivative = if p.is_finite() {
            nf * (x * p - p_prev) / (x * x - 1.0)
        } else {
            derivative
        };
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss–Laguerre nodes and weights (`α = 0`), ascending.
///
/// Golub–Welsch eigenvalues seed a Newton polish; weights come from
/// `w = x / (n² (L_n(x) - L_{n-1}(x))²)` evaluated with a tracked exponent so that
/// high orders neither overflow nor lose the small tail weights to rounding.
fn laguerre_nodes(n: usize) -> Vec<(f64, f64)> {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i + 1 == j {
            j as f64
        } else if j + 1 == i {
            i as f64
        } else {
            0.0
        }
    });
    let mut seeds: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    seeds.sort_by(f64::total_cmp);

    let nf = n as f64;
    seeds
        .into_iter()
        .map(|mut x| {
            for _ in 0..50 {
                let (p, p_prev, _) = laguerre_pair(n, x);
                let derivative = nf * (p - p_prev) / x;
                let dx = p / derivative;
                x -= dx;
                if dx.abs() <= 4.0 * f64::EPSILON * x {
                    break;
                }
            }
            // w = 1/(x L_n'(x)²) with L_n' = n(L_n - L_{n-1})/x; keeping the
            // residual L_n makes the weight insensitive to the last ulp of x.
            let (p, p_prev, log_scale) = laguerre_pair(n, x);
            let log_weight = x.ln() - 2.0 * nf.ln() - 2.0 * ((p - p_prev).abs().ln() + log_scale);
            (x, log_weight.exp())
        })
        .collect()
}

/// `(L_n(x), L_{n-1}(x))` scaled by `e^{-log_scale}`.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64, f64) {
    const RESCALE: f64 = 1e100;
    let mut p_prev = 1.0;
    let mut p = 1.0 - x;
    let mut log_scale = 0.0;
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
        if p.abs() > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (p, p_prev, log_scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::exp_scaled_e1;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = legendre_nodes(7);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(12)).sum();
        assert!((integral - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn laguerre_moments_are_factorials() {
        let rule = QuadratureRule::gauss_laguerre(20).unwrap();
        let mut factorial = 1.0;
        for k in 0..20 {
            if k > 0 {
                factorial *= k as f64;
            }
            let m = rule.integrate(|t| t.powi(k));
            assert!(((m - factorial) / factorial).abs() < 1e-11, "moment {k}: {m}");
        }
    }

    #[test]
    fn rule_invariants() {
        for order in [1, 8, 64, 128, 256] {
            for rule in [
                QuadratureRule::gauss_laguerre(order).unwrap(),
                QuadratureRule::exponential(order).unwrap(),
            ] {
                assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
                assert!(rule.nodes().iter().all(|&t| t > 0.0));
                assert!(rule.weights().iter().all(|&w| w > 0.0));
                let total: f64 = rule.weights().iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "order {order}: {total}");
            }
        }
    }

    #[test]
    fn plain_laguerre_struggles_where_composite_does_not() {
        // ∫ ln(1 + t/ε) e^{-t} dt = e^ε E₁(ε)
        let eps = 1e-4;
        let exact = exp_scaled_e1(eps).unwrap();
        let plain = QuadratureRule::gauss_laguerre(64)
            .unwrap()
            .integrate(|t| (t / eps).ln_1p());
        let composite = expect_exponential(|t| (t / eps).ln_1p(), 64).unwrap();
        assert!(((plain - exact) / exact).abs() > 1e-6);
        assert!(((composite - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(QuadratureRule::exponential(0).is_err());
        assert!(expect_exponential(|t| t, 4096).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        // Oscillates far faster than any rule here can resolve.
        let err = expect_exponential(|t| (1e4 * t).sin(), 8).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
