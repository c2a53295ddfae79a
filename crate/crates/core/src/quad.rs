//! Gauss–Legendre quadrature.
//!
//! Only used where exact rational integration is unavailable: non-polynomial
//! integrands and the rational weights produced by Möbius changes of variable.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::legendre;
use crate::scalar::FloatScalar;

pub const MAX_ORDER: usize = 512;
const MAX_NEWTON_STEPS: usize = 100;

/// m-point rule on [−1, 1], exact for polynomials of degree ≤ 2m − 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<F> {
    pub order: usize,
    /// Ascending, in (−1, 1).
    pub nodes: Vec<F>,
    pub weights: Vec<F>,
    pub exact_degree: usize,
}

impl<F: FloatScalar> QuadratureRule<F> {
    /// Σ w_i f(x_i) on [−1, 1].
    pub fn apply(&self, f: impl Fn(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(F::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// ∫_a^b f via the affine map onto [−1, 1].
    pub fn apply_on(&self, f: impl Fn(F) -> F, a: F, b: F) -> F {
        let half = (b - a) / F::lit(2.0);
        let mid = (a + b) / F::lit(2.0);
        half * self.apply(|t| f(half * t + mid))
    }
}

/// Nodes by Newton iteration on L_m from cos(π(4i−1)/(4m+2)); weights
/// 2/((1−x²)L_m'(x)²). Only the positive half is iterated, the rest mirrored.
pub fn gauss_legendre<F: FloatScalar>(m: usize) -> Result<QuadratureRule<F>> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::OutOfRange(format!(
            "quadrature order {m} not in 1..={MAX_ORDER}"
        )));
    }
    let step_tol = F::lit(1e-15).max(F::epsilon() * F::lit(4.0));
    let pi = F::lit(std::f64::consts::PI);
    let half = m / 2;
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 1..=half {
        let mut x = (pi * F::from_count(4 * i - 1) / F::from_count(4 * m + 2)).cos();
        let mut converged = false;
        for _ in 0..MAX_NEWTON_STEPS {
            let (p, d) = legendre::eval_with_derivative(m, x);
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= step_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure { order: m });
        }
        let (_, d) = legendre::eval_with_derivative(m, x);
        pos_nodes.push(x);
        pos_weights.push(F::lit(2.0) / ((F::one() - x * x) * d * d));
    }
    let mut nodes: Vec<F> = pos_nodes.iter().map(|&x| -x).collect();
    let mut weights = pos_weights.clone();
    if m % 2 == 1 {
        let (_, d) = legendre::eval_with_derivative(m, F::zero());
        nodes.push(F::zero());
        weights.push(F::lit(2.0) / (d * d));
    }
    nodes.extend(pos_nodes.iter().rev());
    weights.extend(pos_weights.iter().rev());
    Ok(QuadratureRule {
        order: m,
        nodes,
        weights,
        exact_degree: 2 * m - 1,
    })
}

type RuleCache = RwLock<HashMap<usize, Arc<QuadratureRule<f64>>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached double-precision rule.
pub fn rule(m: usize) -> Result<Arc<QuadratureRule<f64>>> {
    if let Some(r) = cache().read().expect("rule cache poisoned").get(&m) {
        return Ok(Arc::clone(r));
    }
    let built = Arc::new(gauss_legendre::<f64>(m)?);
    let mut w = cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(w.entry(m).or_insert(built)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub est_error: f64,
}

/// ∫_a^b f with orders 16, 32, … until successive values differ by < tol.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
    let mut m = 16;
    let mut prev = rule(m)?.apply_on(&f, a, b);
    loop {
        m *= 2;
        let value = rule(m)?.apply_on(&f, a, b);
        let est_error = (value - prev).abs();
        if est_error < tol {
            return Ok(Integral { value, est_error });
        }
        if m >= MAX_ORDER {
            return Err(Error::NoConvergence { value, est_error });
        }
        prev = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let r1 = gauss_legendre::<f64>(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);

        let r2 = gauss_legendre::<f64>(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[0] + s).abs() < 1e-15 && (r2.nodes[1] - s).abs() < 1e-15);
        assert!(r2.weights.iter().all(|w| (w - 1.0).abs() < 1e-15));

        let r3 = gauss_legendre::<f64>(3).unwrap();
        let s = (0.6f64).sqrt();
        let want_x = [-s, 0.0, s];
        let want_w = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        for i in 0..3 {
            assert!((r3.nodes[i] - want_x[i]).abs() < 1e-14);
            assert!((r3.weights[i] - want_w[i]).abs() < 1e-14);
        }
        assert_eq!(r3.exact_degree, 5);
    }

    #[test]
    fn order_bounds() {
        assert!(gauss_legendre::<f64>(0).is_err());
        assert!(gauss_legendre::<f64>(513).is_err());
        assert!(gauss_legendre::<f64>(512).is_ok());
    }

    #[test]
    fn rule_invariants() {
        for m in [1, 2, 3, 7, 16, 64, 200] {
            let r = gauss_legendre::<f64>(m).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "m={m} sum={total}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for i in 0..m {
                assert_eq!(r.nodes[i], -r.nodes[m - 1 - i]);
                assert_eq!(r.weights[i], r.weights[m - 1 - i]);
                let (p, d) = legendre::eval_with_derivative(m, r.nodes[i]);
                assert!((p / d).abs() < 1e-14);
                if m <= 16 {
                    assert!(p.abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn single_precision_rule() {
        let r = gauss_legendre::<f32>(5).unwrap();
        let total: f32 = r.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-5);
    }

    #[test]
    fn integrate_examples() {
        let v = integrate(|x| x * x, -1.0, 1.0, 1e-12).unwrap();
        assert!((v.value - 2.0 / 3.0).abs() < 1e-14);
        let v = integrate(|x| 1.0 - x * x, -1.0, 1.0, 1e-12).unwrap();
        assert!((v.value - 4.0 / 3.0).abs() < 1e-14);
        // Q_2²/(1−x²) = (1−x²)/4
        let v = integrate(|x| (x * x - 1.0).powi(2) / 4.0 / (1.0 - x * x), -1.0, 1.0, 1e-12).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() < 1e-12);
        let v = integrate(f64::exp, 0.0, 2.0, 1e-13).unwrap();
        assert!((v.value - (2f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn integrate_reports_failure() {
        // |x|^0.5 kink: no 1e-16 agreement at any order
        let r = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-16);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
