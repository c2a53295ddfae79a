//! Dense univariate polynomials with coefficients in ascending degree order.
//!
//! Over [`Rational`](crate::Rational) every operation here is exact; the same
//! code runs over `f64` for the numerical paths. The representation is
//! canonical: no trailing zero coefficients, and the zero polynomial is the
//! empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{FloatScalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate x.
    pub fn x() -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()])
    }

    /// c·x^deg.
    pub fn monomial(c: T, deg: usize) -> Self {
        let mut coeffs = vec![T::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    /// Ascending coefficients; trailing zeros are stripped.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| T::from_i64(c).expect("i64 coefficient representable"))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Order-th derivative; the derivative of a constant is zero.
    pub fn derivative(&self, order: usize) -> Self {
        let mut out = self.coeffs.clone();
        for _ in 0..order {
            if out.is_empty() {
                break;
            }
            out = out
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &T::from_usize(k).expect("index representable"))
                .collect();
        }
        Self::from_coeffs(out)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.clone() / T::from_usize(k + 1).expect("index representable"));
        }
        Self::from_coeffs(out)
    }

    /// ∫_a^b p.
    pub fn definite_integral(&self, a: &T, b: &T) -> T {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// p(q(x)).
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::NotDivisible)?;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(pd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if pd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); pd - dd + 1];
        for i in (0..=pd - dd).rev() {
            let c = rem[i + dd].clone() / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Quotient `p / d` when `d` divides `p` exactly.
    pub fn divide_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Converts coefficients to a floating type.
    pub fn to_float<F: FloatScalar>(&self) -> Poly<F>
    where
        T: ToPrimitive,
    {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| F::lit(c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        )
    }

    /// Horner evaluation in floating point.
    ///
    /// For |x| ≤ 1 the rounding error is bounded by (2·deg+1)·ε·Σ|c_k|, so the
    /// result is accurate to a few ulps only while the monomial coefficients
    /// stay bounded. Use the recurrence evaluators for high-degree families.
    pub fn eval_float<F: FloatScalar>(&self, x: F) -> F
    where
        T: ToPrimitive,
    {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| {
            acc * x + F::lit(c.to_f64().unwrap_or(f64::NAN))
        })
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o = o.clone() + c;
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }

        impl<T: Scalar> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;

            fn $m(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

/// Human-readable form, e.g. `1 - x^2` or `3/2*x^2 - 1/2`.
impl<T: Scalar + Signed + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Rational};
    use crate::PolyExact;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> PolyExact {
        PolyExact::from_i64(c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[-1, 0, 1]) + &p(&[1]), p(&[0, 0, 1]));
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[0, 2]).scale(&rat(1, 2)), p(&[0, 1]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), PolyExact::zero());
        assert_eq!(PolyExact::zero().degree(), None);
    }

    #[test]
    fn derivatives() {
        assert_eq!(p(&[0, 0, 0, 1]).derivative(1), p(&[0, 0, 3]));
        // ((x^2-1)^2)'' = 12x^2 - 4
        assert_eq!(p(&[-1, 0, 1]).pow(2).derivative(2), p(&[-4, 0, 12]));
        assert_eq!(p(&[0, 1]).derivative(5), PolyExact::zero());
        assert_eq!(p(&[7]).derivative(1), PolyExact::zero());
        assert_eq!(p(&[3, 1]).derivative(0), p(&[3, 1]));
    }

    #[test]
    fn antiderivatives() {
        let half_x2 = PolyExact::monomial(rat(1, 2), 2);
        assert_eq!(p(&[0, 1]).antiderivative(), half_x2);
        assert_eq!(PolyExact::zero().antiderivative(), PolyExact::zero());
    }

    #[test]
    fn definite_integrals() {
        let one_minus_x2 = p(&[1, 0, -1]);
        assert_eq!(one_minus_x2.definite_integral(&int(-1), &int(1)), rat(4, 3));
        let l2 = PolyExact::from_coeffs(vec![rat(-1, 2), int(0), rat(3, 2)]);
        assert_eq!((&l2 * &l2).definite_integral(&int(-1), &int(1)), rat(2, 5));
        assert_eq!((&p(&[0, 1]) * &l2).definite_integral(&int(-1), &int(1)), int(0));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[-1, 0, 1]).divide_exact(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        let q4 = PolyExact::from_coeffs(vec![rat(1, 8), int(0), rat(-6, 8), int(0), rat(5, 8)]);
        let q = q4.divide_exact(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(q, PolyExact::from_coeffs(vec![rat(-1, 8), int(0), rat(5, 8)]));
        assert_eq!(p(&[1, 0, 1]).divide_exact(&p(&[-1, 1])), Err(Error::NotDivisible));
        assert_eq!(p(&[1]).divide_exact(&PolyExact::zero()), Err(Error::NotDivisible));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[-1, 0, 1]).eval(&rat(1, 2)), rat(-3, 4));
        assert_eq!(PolyExact::from_coeffs(vec![rat(-1, 2), int(0), rat(1, 2)]).eval(&int(0)), rat(-1, 2));
        let v: f64 = p(&[-1, 0, 1]).eval_float(0.5);
        assert!((v + 0.75).abs() < 1e-16);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -1]).to_string(), "1 - x^2");
        assert_eq!(
            PolyExact::from_coeffs(vec![rat(-1, 2), int(0), rat(3, 2)]).to_string(),
            "-1/2 + 3/2*x^2"
        );
        assert_eq!(PolyExact::zero().to_string(), "0");
    }

    #[test]
    fn compose_shift() {
        // (x+1)^2 composed = x^2 + 2x + 1
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = PolyExact> {
        prop::collection::vec((-9i64..=9, 1i64..=5), 0..=max_deg + 1).prop_map(|cs| {
            PolyExact::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in small_poly(5), b in small_poly(5), c in small_poly(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!((&a * &b).degree(), Some(da + db));
            }
        }

        #[test]
        fn derivative_inverts_antiderivative(a in small_poly(8)) {
            prop_assert_eq!(a.antiderivative().derivative(1), a.clone());
            prop_assert!(a.antiderivative().coeff(0) == Rational::from_integer(0.into()));
        }

        #[test]
        fn division_reconstructs(a in small_poly(8), d in small_poly(3)) {
            prop_assume!(!d.is_zero());
            let (q, r) = a.div_rem(&d).unwrap();
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.degree() < d.degree() || r.is_zero());
        }

        // Repeated integration by parts over [-1, 1].
        #[test]
        fn generalized_integration_by_parts(u in small_poly(8), v in small_poly(8), n in 0usize..=4) {
            let (lo, hi) = (int(-1), int(1));
            let lhs = (&u * &v.derivative(n)).definite_integral(&lo, &hi);
            let mut boundary = int(0);
            for k in 1..=n {
                let term = &u.derivative(k - 1) * &v.derivative(n - k);
                let jump = term.eval(&hi) - term.eval(&lo);
                boundary += if (k - 1) % 2 == 0 { jump } else { -jump };
            }
            let tail = (&u.derivative(n) * &v).definite_integral(&lo, &hi);
            let rhs = boundary + if n % 2 == 0 { tail } else { -tail };
            prop_assert_eq!(lhs, rhs);
        }
    }
}
