//! The integrated Legendre family Q_n, n ≥ 2.
//!
//! Q_n(x) = −∫_x^1 L_{n−1}(t) dt = (L_n − L_{n−2})/(2n−1) = (x²−1)·q_{n−2}(x).
//! Every Q_n vanishes at ±1, and the family is orthogonal for the weight
//! 1/(1−x²) with ‖Q_n‖² = 2/(n(n−1)(2n−1)). Q_0 and Q_1 are not part of the
//! family: the first is undefined and the second has divergent weighted norm.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::legendre::{self, LegendreTable};
use crate::rational::{double_factorial, factorial, int, rat, sign_pow, Rational};
use crate::scalar::FloatScalar;
use crate::verdict::Verdict;
use crate::PolyExact;

/// x² − 1.
pub fn x2_minus_1() -> PolyExact {
    PolyExact::from_i64(&[-1, 0, 1])
}

#[derive(Clone, Debug)]
pub struct QTable {
    // index n − 2
    polys: Vec<PolyExact>,
    interior: Vec<PolyExact>,
    norms_sq: Vec<Rational>,
    leading: Vec<Rational>,
}

impl QTable {
    /// Builds Q_2 ..= Q_max_degree from the Legendre difference form.
    pub fn build(max_degree: usize, legendre: &LegendreTable) -> Result<Self> {
        if max_degree < 2 {
            return Err(Error::OutOfRange("Q table needs max_degree >= 2".into()));
        }
        if legendre.max_degree() < max_degree {
            return Err(Error::OutOfRange(format!(
                "Legendre table of degree {} cannot build Q_{max_degree}",
                legendre.max_degree()
            )));
        }
        let w = x2_minus_1();
        let mut polys = Vec::with_capacity(max_degree - 1);
        let mut interior = Vec::with_capacity(max_degree - 1);
        let mut norms_sq = Vec::with_capacity(max_degree - 1);
        let mut leading = Vec::with_capacity(max_degree - 1);
        for n in 2..=max_degree {
            let q = (legendre.get(n) - legendre.get(n - 2)).scale(&rat(1, 2 * n as i64 - 1));
            interior.push(q.divide_exact(&w)?);
            leading.push(q.leading().cloned().unwrap_or_else(Rational::zero));
            norms_sq.push(q_norm_sq(n));
            polys.push(q);
        }
        Ok(QTable {
            polys,
            interior,
            norms_sq,
            leading,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() + 1
    }

    fn idx(&self, n: usize) -> usize {
        assert!(
            (2..=self.max_degree()).contains(&n),
            "Q_{n} outside table range 2..={}",
            self.max_degree()
        );
        n - 2
    }

    /// Q_n.
    pub fn get(&self, n: usize) -> &PolyExact {
        &self.polys[self.idx(n)]
    }

    /// q_{n−2}, the factor with Q_n = (x²−1)·q_{n−2}.
    pub fn interior(&self, n: usize) -> &PolyExact {
        &self.interior[self.idx(n)]
    }

    /// ‖Q_n‖² under the weight 1/(1−x²).
    pub fn norm_sq(&self, n: usize) -> &Rational {
        &self.norms_sq[self.idx(n)]
    }

    /// Leading coefficient k_n of Q_n.
    pub fn leading(&self, n: usize) -> &Rational {
        &self.leading[self.idx(n)]
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        2..=self.max_degree()
    }
}

/// Legendre and Q tables built to a common degree.
#[derive(Clone, Debug)]
pub struct Family {
    pub legendre: LegendreTable,
    pub q: QTable,
}

impl Family {
    pub fn new(max_degree: usize) -> Result<Self> {
        let legendre = LegendreTable::build(max_degree.max(2))?;
        let q = QTable::build(max_degree, &legendre)?;
        Ok(Family { legendre, q })
    }

    pub fn max_degree(&self) -> usize {
        self.q.max_degree()
    }
}

/// −∫_x^1 L_{n−1}(t) dt built by antidifferentiation.
pub fn q_antiderivative_form(legendre: &LegendreTable, n: usize) -> PolyExact {
    let anti = legendre.get(n - 1).antiderivative();
    let at_one = anti.eval(&Rational::one());
    &anti - &PolyExact::constant(at_one)
}

/// Q_n = (x²−1)/(2^{n−1} n! (n−1)) · [(x²−1)^{n−1}]^(n).
pub fn q_rodrigues(n: usize) -> PolyExact {
    assert!(n >= 2, "Q_n is defined for n >= 2");
    let w = x2_minus_1();
    let den = num_traits::pow(BigInt::from(2), n - 1) * factorial(n as u64) * BigInt::from(n - 1);
    (&w * &w.pow(n - 1).derivative(n)).scale(&Rational::new(BigInt::one(), den))
}

/// 2/(n(n−1)(2n−1)).
pub fn q_norm_sq(n: usize) -> Rational {
    let n = n as i64;
    rat(2, n * (n - 1) * (2 * n - 1))
}

/// k_n = (2n−2)! / (2^{n−1} ((n−1)!)² n).
pub fn q_leading_closed_form(n: usize) -> Rational {
    legendre::leading_closed_form(n - 1) / int(n as i64)
}

/// ∫_{−1}^1 p·q/(1−x²) dx, exact.
///
/// Requires (x²−1) to divide p·q; the factor is cancelled before integrating.
pub fn weighted_inner_product(p: &PolyExact, q: &PolyExact) -> Result<Rational> {
    let w = x2_minus_1();
    let reduced = if let Ok(pp) = p.divide_exact(&w) {
        &pp * q
    } else if let Ok(qq) = q.divide_exact(&w) {
        p * &qq
    } else {
        (p * q).divide_exact(&w)?
    };
    Ok(-reduced.definite_integral(&int(-1), &int(1)))
}

/// Q_n(0): exact value against the printed (−1)^{(n−2)/2}(n−3)!!/n!!.
#[derive(Clone, Debug, PartialEq)]
pub struct QAtZero {
    pub n: usize,
    pub oracle: Rational,
    /// `None` for odd n, where the printed exponent is not an integer.
    pub paper_formula: Option<Rational>,
    pub verdict: Verdict,
}

pub fn q_at_zero_printed(n: usize) -> Option<Rational> {
    if n < 2 || n % 2 == 1 {
        return None;
    }
    let n = n as i64;
    Some(
        sign_pow((n - 2) / 2)
            * Rational::new(double_factorial(n - 3), double_factorial(n)),
    )
}

pub fn q_at_zero(table: &QTable, n: usize) -> QAtZero {
    let oracle = table.get(n).eval(&Rational::zero());
    let paper_formula = q_at_zero_printed(n);
    let verdict = match &paper_formula {
        Some(p) => Verdict::compare(&oracle, p),
        None => Verdict::NotApplicable,
    };
    QAtZero {
        n,
        oracle,
        paper_formula,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QBoundaryDerivatives {
    pub d1_at_plus1: Rational,
    pub d1_at_minus1: Rational,
    pub d2_at_plus1: Rational,
}

pub fn q_boundary_derivatives(table: &QTable, n: usize) -> QBoundaryDerivatives {
    let q = table.get(n);
    let d1 = q.derivative(1);
    let d2 = q.derivative(2);
    QBoundaryDerivatives {
        d1_at_plus1: d1.eval(&int(1)),
        d1_at_minus1: d1.eval(&int(-1)),
        d2_at_plus1: d2.eval(&int(1)),
    }
}

/// (1−x²)Q_n'' + n(n−1)Q_n.
pub fn ode_residual(table: &QTable, n: usize) -> PolyExact {
    let q = table.get(n);
    let one_minus = -x2_minus_1();
    &(&one_minus * &q.derivative(2)) + &q.scale(&int((n * (n - 1)) as i64))
}

/// −2xQ_n'' + (1−x²)Q_n''' + n(n−1)Q_n'.
pub fn differentiated_ode_residual(table: &QTable, n: usize) -> PolyExact {
    let q = table.get(n);
    let one_minus = -x2_minus_1();
    let a = (&PolyExact::x() * &q.derivative(2)).scale(&int(-2));
    let b = &one_minus * &q.derivative(3);
    let c = q.derivative(1).scale(&int((n * (n - 1)) as i64));
    &(&a + &b) + &c
}

/// (x²−1)·v^(n) − n(n−1)·v^(n−2) with v = (x²−1)^{n−1}.
pub fn two_rodrigues_residual(n: usize) -> PolyExact {
    let w = x2_minus_1();
    let v = w.pow(n - 1);
    &(&w * &v.derivative(n)) - &v.derivative(n - 2).scale(&int((n * (n - 1)) as i64))
}

/// Checks ∫_{−1}^x Q_n = (Q_{n+1} − Q_{n−1})/(2n−1) and
/// Q_n = (Q'_{n+1} − Q'_{n−1})/(2n−1) exactly. Needs 3 ≤ n < max degree.
pub fn q_integral_relation_check(table: &QTable, n: usize) -> Verdict {
    if n < 3 || n + 1 > table.max_degree() {
        return Verdict::NotApplicable;
    }
    let scale = rat(1, 2 * n as i64 - 1);
    let anti = table.get(n).antiderivative();
    let lhs = &anti - &PolyExact::constant(anti.eval(&int(-1)));
    let rhs = (table.get(n + 1) - table.get(n - 1)).scale(&scale);
    let deriv_rhs =
        (&table.get(n + 1).derivative(1) - &table.get(n - 1).derivative(1)).scale(&scale);
    // derivative form one order up: Q_n' = (Q''_{n+1} − Q''_{n−1})/(2n−1)
    let second_rhs =
        (&table.get(n + 1).derivative(2) - &table.get(n - 1).derivative(2)).scale(&scale);
    if lhs == rhs && &deriv_rhs == table.get(n) && second_rhs == table.get(n).derivative(1) {
        Verdict::Confirmed
    } else {
        Verdict::Failed
    }
}

/// (Q_n(x), Q_n'(x), Q_n''(x)) in floating point via the Legendre recurrence.
pub fn q_eval<F: FloatScalar>(n: usize, x: F) -> (F, F, F) {
    let (ln, _) = legendre::eval_with_derivative(n, x);
    let (lnm2, _) = legendre::eval_with_derivative(n - 2, x);
    let (lnm1, dlnm1) = legendre::eval_with_derivative(n - 1, x);
    ((ln - lnm2) / F::from_count(2 * n - 1), lnm1, dlnm1)
}

/// q_{n−2}(x) = L'_{n−1}(x)/(n(n−1)) in floating point.
pub fn interior_eval<F: FloatScalar>(n: usize, x: F) -> F {
    legendre::eval_with_derivative(n - 1, x).1 / F::from_count(n * (n - 1))
}

/// All n roots of Q_n, ascending: ±1 and the n−2 interior roots of q_{n−2}.
///
/// Interior roots are bracketed by sign changes on an 8n-point Chebyshev grid,
/// bisected, then polished by Newton on L'_{n−1}.
pub fn q_roots<F: FloatScalar>(n: usize) -> Result<Vec<F>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("Q_{n} is not in the family")));
    }
    let m = n - 1;
    let g = |x: F| legendre::eval_with_derivative(m, x).1;
    // (1−x²)L''_m = 2xL'_m − m(m+1)L_m
    let g_prime = |x: F| {
        let (l, d) = legendre::eval_with_derivative(m, x);
        (F::lit(2.0) * x * d - F::from_count(m * (m + 1)) * l) / (F::one() - x * x)
    };
    let grid_size = 8 * n;
    let pi = F::lit(std::f64::consts::PI);
    let grid: Vec<F> = (0..=grid_size)
        .rev()
        .map(|j| (pi * F::from_count(j) / F::from_count(grid_size)).cos())
        .collect();
    let mut roots = vec![-F::one()];
    let mut interior = Vec::with_capacity(n - 2);
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (glo, ghi) = (g(lo), g(hi));
        if glo == F::zero() && lo.abs() < F::one() {
            interior.push(lo);
            continue;
        }
        if (glo < F::zero()) == (ghi < F::zero()) || ghi == F::zero() {
            continue;
        }
        for _ in 0..200 {
            let mid = (lo + hi) / F::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if (g(mid) < F::zero()) == (glo < F::zero()) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = (lo + hi) / F::lit(2.0);
        for _ in 0..3 {
            let step = g(x) / g_prime(x);
            let next = x - step;
            if next > w[0] && next < w[1] && next.is_finite() {
                x = next;
            }
        }
        interior.push(x);
    }
    if interior.len() != n - 2 {
        return Err(Error::RootCountMismatch {
            n,
            expected: n - 2,
            found: interior.len(),
        });
    }
    let tol = F::lit(1e-12).max(F::epsilon() * F::lit(64.0));
    for &r in &interior {
        if q_eval(n, r).0.abs() >= tol {
            return Err(Error::RootCountMismatch {
                n,
                expected: n - 2,
                found: 0,
            });
        }
    }
    roots.extend(interior);
    roots.push(F::one());
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> Family {
        Family::new(41).unwrap()
    }

    #[test]
    fn first_members() {
        let f = fam();
        assert_eq!(f.q.get(2), &PolyExact::from_coeffs(vec![rat(-1, 2), int(0), rat(1, 2)]));
        assert_eq!(
            f.q.get(3),
            &PolyExact::from_coeffs(vec![int(0), rat(-1, 2), int(0), rat(1, 2)])
        );
        assert_eq!(
            f.q.get(4),
            &PolyExact::from_coeffs(vec![rat(1, 8), int(0), rat(-6, 8), int(0), rat(5, 8)])
        );
        assert_eq!(
            f.q.interior(4),
            &PolyExact::from_coeffs(vec![rat(-1, 8), int(0), rat(5, 8)])
        );
        assert!(Family::new(1).is_err());
    }

    #[test]
    fn three_constructions_agree() {
        let f = fam();
        assert_eq!(q_rodrigues(2), *f.q.get(2));
        for n in 2..=40 {
            assert_eq!(&q_antiderivative_form(&f.legendre, n), f.q.get(n), "n = {n}");
            assert_eq!(&q_rodrigues(n), f.q.get(n), "n = {n}");
        }
    }

    #[test]
    fn structure() {
        let f = fam();
        let w = x2_minus_1();
        for n in 2..=40 {
            let q = f.q.get(n);
            assert!(q.eval(&int(1)).is_zero() && q.eval(&int(-1)).is_zero());
            assert_eq!(&(&w * f.q.interior(n)), q);
            assert_eq!(&q.derivative(1), f.legendre.get(n - 1));
            assert!(ode_residual(&f.q, n).is_zero());
            assert!(differentiated_ode_residual(&f.q, n).is_zero());
            assert_eq!(f.q.leading(n), &q_leading_closed_form(n));
        }
        for n in 2..=20 {
            assert!(two_rodrigues_residual(n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q_norm_sq(2), rat(1, 3));
        assert_eq!(q_norm_sq(3), rat(1, 15));
        assert_eq!(q_norm_sq(5), rat(1, 90));
    }

    #[test]
    fn inner_product_examples() {
        let f = fam();
        assert_eq!(weighted_inner_product(f.q.get(2), f.q.get(3)).unwrap(), int(0));
        assert_eq!(weighted_inner_product(f.q.get(4), f.q.get(4)).unwrap(), rat(1, 42));
        assert_eq!(
            weighted_inner_product(&PolyExact::one(), &PolyExact::one()),
            Err(Error::NotDivisible)
        );
        // (x−1)(x+1) split across the two factors
        let a = PolyExact::from_i64(&[-1, 1]);
        let b = PolyExact::from_i64(&[1, 1]);
        assert_eq!(weighted_inner_product(&a, &b).unwrap(), int(-2));
    }

    #[test]
    fn orthogonality_small() {
        let f = Family::new(12).unwrap();
        for n in 2..=12 {
            for m in 2..=12 {
                let v = weighted_inner_product(f.q.get(n), f.q.get(m)).unwrap();
                let want = if n == m { q_norm_sq(n) } else { int(0) };
                assert_eq!(v, want, "({n},{m})");
            }
        }
    }

    #[test]
    fn values_at_zero() {
        let f = fam();
        let z2 = q_at_zero(&f.q, 2);
        assert_eq!(z2.oracle, rat(-1, 2));
        assert_eq!(z2.paper_formula, Some(rat(1, 2)));
        assert_eq!(z2.verdict, Verdict::ConfirmedUpToSign);
        let z4 = q_at_zero(&f.q, 4);
        assert_eq!(z4.oracle, rat(1, 8));
        assert_eq!(z4.paper_formula, Some(rat(-1, 8)));
        let z5 = q_at_zero(&f.q, 5);
        assert_eq!(z5.oracle, int(0));
        assert_eq!(z5.verdict, Verdict::NotApplicable);
        for n in (2..=40).step_by(2) {
            let z = q_at_zero(&f.q, n);
            let mag = Rational::new(double_factorial(n as i64 - 3), double_factorial(n as i64));
            assert_eq!(z.oracle.clone() * z.oracle.clone(), mag.clone() * mag);
            assert_eq!(z.verdict, Verdict::ConfirmedUpToSign);
        }
    }

    #[test]
    fn boundary_derivatives() {
        let f = fam();
        assert_eq!(q_boundary_derivatives(&f.q, 2).d1_at_plus1, int(1));
        assert_eq!(q_boundary_derivatives(&f.q, 5).d1_at_minus1, int(1));
        assert_eq!(q_boundary_derivatives(&f.q, 4).d2_at_plus1, int(6));
        for n in 2..=40 {
            let b = q_boundary_derivatives(&f.q, n);
            assert_eq!(b.d1_at_plus1, int(1));
            assert_eq!(b.d1_at_minus1, sign_pow(n as i64 - 1));
            assert_eq!(b.d2_at_plus1, rat((n * (n - 1)) as i64, 2));
            assert!((int(-2) * b.d2_at_plus1 + int((n * (n - 1)) as i64) * b.d1_at_plus1).is_zero());
        }
    }

    #[test]
    fn integral_relations() {
        let f = fam();
        for n in [3, 4, 20, 40] {
            assert_eq!(q_integral_relation_check(&f.q, n), Verdict::Confirmed, "n = {n}");
        }
        assert_eq!(q_integral_relation_check(&f.q, 2), Verdict::NotApplicable);
    }

    #[test]
    fn root_examples() {
        assert_eq!(q_roots::<f64>(2).unwrap(), vec![-1.0, 1.0]);
        let r3 = q_roots::<f64>(3).unwrap();
        assert_eq!(r3.len(), 3);
        assert!(r3[1].abs() < 1e-15);
        let r4 = q_roots::<f64>(4).unwrap();
        let s = 1.0 / 5f64.sqrt();
        assert!((r4[1] + s).abs() < 1e-15 && (r4[2] - s).abs() < 1e-15);
        assert!(q_roots::<f64>(1).is_err());
        assert_eq!(q_roots::<f32>(6).unwrap().len(), 6);
    }

    #[test]
    fn roots_are_inflection_points() {
        for n in 2..=40 {
            let roots = q_roots::<f64>(n).unwrap();
            assert_eq!(roots.len(), n);
            assert!(roots.windows(2).all(|w| w[0] < w[1]));
            let scale = (n * (n - 1)) as f64 / 2.0;
            for &r in &roots[1..n - 1] {
                assert!(r > -1.0 && r < 1.0);
                let (q, _, q2) = q_eval(n, r);
                assert!(q.abs() < 1e-12, "n={n} r={r} Q={q}");
                assert!((q2 / scale).abs() < 1e-9);
            }
        }
    }
}
