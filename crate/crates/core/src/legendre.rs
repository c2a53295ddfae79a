//! Legendre polynomials L_n, normalized by L_n(1) = 1.
//!
//! The three-term recurrence builds the exact coefficient table; the Rodrigues
//! formula and the shifted binomial expansion are independent constructions
//! used to cross-check it. Floating-point evaluation always goes through the
//! recurrence, never through monomial coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial_row, factorial, int, pochhammer, rat, sign_pow, Rational};
use crate::scalar::FloatScalar;
use crate::PolyExact;

/// Exact L_0 ..= L_max_degree.
#[derive(Clone, Debug)]
pub struct LegendreTable {
    polys: Vec<PolyExact>,
}

impl LegendreTable {
    /// Builds the table from (n+1)L_{n+1} = (2n+1)x L_n − n L_{n−1}.
    pub fn build(max_degree: usize) -> Result<Self> {
        if max_degree < 1 {
            return Err(Error::OutOfRange("Legendre table needs max_degree >= 1".into()));
        }
        let x = PolyExact::x();
        let mut polys = vec![PolyExact::one(), x.clone()];
        for n in 1..max_degree {
            let n_r = int(n as i64);
            let a = (&x * &polys[n]).scale(&int(2 * n as i64 + 1));
            let b = polys[n - 1].scale(&n_r);
            let next = (&a - &b).scale(&rat(1, n as i64 + 1));
            polys.push(next);
        }
        Ok(LegendreTable { polys })
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    /// L_n. Panics when n exceeds the table.
    pub fn get(&self, n: usize) -> &PolyExact {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[PolyExact] {
        &self.polys
    }

    /// Leading coefficient of L_n.
    pub fn leading(&self, n: usize) -> Rational {
        self.polys[n].leading().cloned().unwrap_or_else(Rational::zero)
    }

    /// True when L_n = (L'_{n+1} − L'_{n−1})/(2n+1) holds exactly.
    pub fn derivative_recurrence_holds(&self, n: usize) -> bool {
        if n == 0 || n + 1 > self.max_degree() {
            return false;
        }
        let rhs = (&self.polys[n + 1].derivative(1) - &self.polys[n - 1].derivative(1))
            .scale(&rat(1, 2 * n as i64 + 1));
        rhs == self.polys[n]
    }
}

/// Leading coefficient (2n)!/(2^n (n!)^2), read off the expanded form.
pub fn leading_closed_form(n: usize) -> Rational {
    let num = factorial(2 * n as u64);
    let den = num_traits::pow(BigInt::from(2), n) * factorial(n as u64).pow(2);
    Rational::new(num, den)
}

/// L_n = 1/(2^n n!) · ((x²−1)^n)^(n).
pub fn legendre_rodrigues(n: usize) -> PolyExact {
    let base = PolyExact::from_i64(&[-1, 0, 1]).pow(n);
    let den = num_traits::pow(BigInt::from(2), n) * factorial(n as u64);
    base.derivative(n).scale(&Rational::new(BigInt::one(), den))
}

/// L_n = 2^{−n} Σ_k C(n,k)² (x−1)^{n−k} (x+1)^k.
pub fn legendre_shifted_expansion(n: usize) -> PolyExact {
    let xm = PolyExact::from_i64(&[-1, 1]);
    let xp = PolyExact::from_i64(&[1, 1]);
    let row = binomial_row(n);
    let sum = row.iter().enumerate().fold(PolyExact::zero(), |acc, (k, c)| {
        let term = &xm.pow(n - k) * &xp.pow(k);
        &acc + &term.scale(&Rational::from_integer(c * c))
    });
    sum.scale(&Rational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(2), n),
    ))
}

/// Special values computed from their closed forms (not from the table).
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreSpecialValues {
    pub at_plus1: Rational,
    pub at_minus1: Rational,
    pub at0: Rational,
    pub deriv_at0: Rational,
    pub deriv_at_plus1: Rational,
    pub deriv_at_minus1: Rational,
    pub second_deriv_at_plus1: Rational,
    pub second_deriv_at_minus1: Rational,
}

pub fn legendre_special_values(n: usize) -> LegendreSpecialValues {
    let ni = n as i64;
    let row = binomial_row(n);
    let two_n = Rational::from_integer(num_traits::pow(BigInt::from(2), n));
    let mut at0 = Rational::zero();
    let mut deriv_at0 = Rational::zero();
    for (k, c) in row.iter().enumerate() {
        let c2 = Rational::from_integer(c * c);
        let s = sign_pow(ni - k as i64);
        at0 += &s * &c2;
        deriv_at0 += s * int(2 * k as i64 - ni) * c2;
    }
    let d1 = rat(ni * (ni + 1), 2);
    let d2 = if n >= 1 {
        rat((ni - 1) * ni * (ni + 1) * (ni + 2), 8)
    } else {
        Rational::zero()
    };
    LegendreSpecialValues {
        at_plus1: Rational::one(),
        at_minus1: sign_pow(ni),
        at0: at0 / &two_n,
        deriv_at0: deriv_at0 / &two_n,
        deriv_at_plus1: d1.clone(),
        deriv_at_minus1: sign_pow(ni - 1) * d1,
        second_deriv_at_plus1: d2.clone(),
        second_deriv_at_minus1: sign_pow(ni) * d2,
    }
}

/// L_{2m}(0) = (−1)^m (1/2)_m / m!.
pub fn even_value_at_zero(m: usize) -> Rational {
    sign_pow(m as i64) * pochhammer(&rat(1, 2), m) / Rational::from_integer(factorial(m as u64))
}

/// L'_{2m+1}(0) = 2(−1)^m (1/2)_{m+1} / m!.
pub fn odd_derivative_at_zero(m: usize) -> Rational {
    int(2) * sign_pow(m as i64) * pochhammer(&rat(1, 2), m + 1)
        / Rational::from_integer(factorial(m as u64))
}

/// (L_n(x), L'_n(x)) by the three-term recurrence and L'_{k+1} = L'_{k−1} + (2k+1)L_k.
pub fn eval_with_derivative<F: FloatScalar>(n: usize, x: F) -> (F, F) {
    let mut p_prev = F::one();
    let mut d_prev = F::zero();
    if n == 0 {
        return (p_prev, d_prev);
    }
    let mut p = x;
    let mut d = F::one();
    for k in 1..n {
        let kf = F::from_count(k);
        let two_k1 = F::from_count(2 * k + 1);
        let p_next = (two_k1 * x * p - kf * p_prev) / (kf + F::one());
        let d_next = d_prev + two_k1 * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

pub fn eval<F: FloatScalar>(n: usize, x: F) -> F {
    eval_with_derivative(n, x).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> LegendreTable {
        LegendreTable::build(40).unwrap()
    }

    #[test]
    fn first_entries() {
        let t = table();
        assert_eq!(t.get(0), &PolyExact::one());
        assert_eq!(t.get(1), &PolyExact::x());
        assert_eq!(t.get(2), &PolyExact::from_coeffs(vec![rat(-1, 2), int(0), rat(3, 2)]));
        assert!(LegendreTable::build(0).is_err());
    }

    #[test]
    fn value_at_one_is_one() {
        let t = table();
        for p in t.polys() {
            assert_eq!(p.eval(&int(1)), int(1));
        }
    }

    #[test]
    fn rodrigues_matches_recurrence() {
        let t = table();
        assert_eq!(legendre_rodrigues(0), PolyExact::one());
        assert_eq!(
            legendre_rodrigues(3),
            PolyExact::from_coeffs(vec![int(0), rat(-3, 2), int(0), rat(5, 2)])
        );
        for n in 0..=40 {
            assert_eq!(&legendre_rodrigues(n), t.get(n), "n = {n}");
        }
    }

    #[test]
    fn shifted_expansion_matches() {
        let t = table();
        assert_eq!(legendre_shifted_expansion(0), PolyExact::one());
        assert_eq!(legendre_shifted_expansion(1), PolyExact::x());
        for n in 0..=40 {
            assert_eq!(&legendre_shifted_expansion(n), t.get(n), "n = {n}");
        }
    }

    #[test]
    fn derivative_recurrence() {
        let t = table();
        for n in [1, 2, 10, 39] {
            assert!(t.derivative_recurrence_holds(n), "n = {n}");
        }
        assert!(!t.derivative_recurrence_holds(0));
    }

    #[test]
    fn special_value_examples() {
        assert_eq!(legendre_special_values(2).at0, rat(-1, 2));
        assert_eq!(legendre_special_values(3).at0, int(0));
        assert_eq!(legendre_special_values(4).deriv_at_plus1, int(10));
        assert_eq!(even_value_at_zero(1), rat(-1, 2));
        assert_eq!(odd_derivative_at_zero(1), rat(-3, 2));
    }

    #[test]
    fn special_values_match_table() {
        let t = table();
        let (zero, one, m_one) = (int(0), int(1), int(-1));
        for n in 0..=40 {
            let p = t.get(n);
            let d1 = p.derivative(1);
            let d2 = p.derivative(2);
            let sv = legendre_special_values(n);
            assert_eq!(sv.at_plus1, p.eval(&one));
            assert_eq!(sv.at_minus1, p.eval(&m_one));
            assert_eq!(sv.at0, p.eval(&zero));
            assert_eq!(sv.deriv_at0, d1.eval(&zero));
            assert_eq!(sv.deriv_at_plus1, d1.eval(&one));
            assert_eq!(sv.deriv_at_minus1, d1.eval(&m_one));
            assert_eq!(sv.second_deriv_at_plus1, d2.eval(&one));
            assert_eq!(sv.second_deriv_at_minus1, d2.eval(&m_one));
            assert_eq!(t.leading(n), leading_closed_form(n));
        }
        for m in 0..=20 {
            assert_eq!(even_value_at_zero(m), t.get(2 * m).eval(&zero));
        }
        for m in 0..=19 {
            assert_eq!(odd_derivative_at_zero(m), t.get(2 * m + 1).derivative(1).eval(&zero));
        }
    }

    #[test]
    fn orthogonality_and_norms() {
        let t = LegendreTable::build(24).unwrap();
        let (lo, hi) = (int(-1), int(1));
        for n in 0..=24 {
            for m in 0..=n {
                let v = (t.get(n) * t.get(m)).definite_integral(&lo, &hi);
                let expect = if n == m { rat(2, 2 * n as i64 + 1) } else { int(0) };
                assert_eq!(v, expect, "({n},{m})");
            }
        }
    }

    #[test]
    fn integral_from_minus_one() {
        let t = table();
        for n in 1..40 {
            let anti = t.get(n).antiderivative();
            let lhs = &anti - &PolyExact::constant(anti.eval(&int(-1)));
            let rhs = (t.get(n + 1) - t.get(n - 1)).scale(&rat(1, 2 * n as i64 + 1));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn float_recurrence_agrees_with_exact() {
        let t = LegendreTable::build(12).unwrap();
        for n in 0..=12 {
            for &x in &[-0.9, -0.3, 0.0, 0.41, 0.77] {
                let (v, d) = eval_with_derivative::<f64>(n, x);
                assert!((v - t.get(n).eval_float(x)).abs() < 1e-13);
                assert!((d - t.get(n).derivative(1).eval_float(x)).abs() < 1e-12);
            }
        }
        let (v, d) = eval_with_derivative::<f32>(3, 0.5);
        assert!((v - -0.4375).abs() < 1e-6 && (d - 0.375).abs() < 1e-6);
    }
}
