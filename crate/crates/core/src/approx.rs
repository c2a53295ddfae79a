//! Constrained least squares under the weight 1/(1−x²) and Fourier–Q
//! expansions.
//!
//! The extremal problem: among polynomials p of degree ≤ n with p(0) = 1,
//! minimize ∫_{−1}^1 p²/(1−x²). Only polynomials vanishing at ±1 give a
//! finite objective, so the feasible set is p = (1−x²)r with r(0) = 1. The
//! kernel solution p = K_n(x,0)/K_n(0,0), M = 1/K_n(0,0) is checked against a
//! brute-force exact quadratic program over the monomial coefficients of r.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::kernel_sum;
use crate::pipcir::{interior_eval, q_eval, weighted_inner_product, QTable};
use crate::quad;
use crate::rational::{binomial_row, double_factorial, factorial, int, rat, sign_pow, to_f64, Rational};
use crate::PolyExact;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSolution {
    pub n: usize,
    /// a_k on Q_k; odd k are absent because Q_k(0) = 0.
    pub q_coeffs: BTreeMap<usize, Rational>,
    pub minimizer: PolyExact,
    pub min_value: Rational,
    pub oracle_value: Rational,
    pub oracle_minimizer: PolyExact,
}

impl ExtremalSolution {
    pub fn oracle_agrees(&self) -> bool {
        self.min_value == self.oracle_value && self.minimizer == self.oracle_minimizer
    }
}

/// Kernel solution, cross-checked by [`brute_force_minimizer`].
pub fn minimize_constrained(table: &QTable, n: usize) -> Result<ExtremalSolution> {
    let section = kernel_sum(table, n, &Rational::zero())?;
    let k00 = section.value_at_y.clone();
    let min_value = Rational::one() / &k00;
    let q_coeffs = (2..=n)
        .filter(|k| k % 2 == 0)
        .map(|k| {
            let a = table.get(k).eval(&Rational::zero()) / table.norm_sq(k) * &min_value;
            (k, a)
        })
        .collect();
    let minimizer = section.poly.scale(&min_value);
    let oracle = brute_force_minimizer(n)?;
    Ok(ExtremalSolution {
        n,
        q_coeffs,
        minimizer,
        min_value,
        oracle_value: oracle.min_value,
        oracle_minimizer: oracle.poly,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    pub min_value: Rational,
    pub poly: PolyExact,
}

/// ∫_{−1}^1 (1−x²) x^k dx.
fn damped_moment(k: usize) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let k = k as i64;
    rat(2, k + 1) - rat(2, k + 3)
}

/// Minimizes ∫(1−x²) r² over r = 1 + c_1 x + … + c_{n−2} x^{n−2} via the
/// exact normal equations.
pub fn brute_force_minimizer(n: usize) -> Result<BruteForce> {
    if n < 2 {
        return Err(Error::OutOfRange("extremal problem needs n >= 2".into()));
    }
    let free = n - 2;
    let gram: Vec<Vec<Rational>> = (1..=free)
        .map(|i| (1..=free).map(|j| damped_moment(i + j)).collect())
        .collect();
    let rhs: Vec<Rational> = (1..=free).map(|i| -damped_moment(i)).collect();
    let c = solve_exact(gram, rhs)?;
    let mut r = vec![Rational::one()];
    r.extend(c);
    let r = PolyExact::from_coeffs(r);
    let one_minus_x2 = PolyExact::from_i64(&[1, 0, -1]);
    let min_value = (&one_minus_x2 * &(&r * &r)).definite_integral(&int(-1), &int(1));
    Ok(BruteForce {
        min_value,
        poly: &one_minus_x2 * &r,
    })
}

/// Gaussian elimination over the rationals.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] / &a[col][col];
            for k in col..n {
                let delta = &f * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &f * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row].clone(), |acc, k| acc - &a[row][k] * &x[k]);
        x[row] = s / &a[row][row];
    }
    Ok(x)
}

/// ∫ p²/(1−x²), exact.
pub fn objective(p: &PolyExact) -> Result<Rational> {
    weighted_inner_product(p, p)
}

/// Printed summand j(j−1)(2j−1)/2 · ((j−3)!!/j!!)², taken literally for
/// every j (zero for j < 2).
pub fn valuem_summand_printed(j: usize) -> Rational {
    if j < 2 {
        return Rational::zero();
    }
    let ji = j as i64;
    let r = Rational::new(double_factorial(ji - 3), double_factorial(ji));
    rat(ji * (ji - 1) * (2 * ji - 1), 2) * &r * &r
}

/// 1/Σ_{j=0}^n of the printed summand, odd j included.
pub fn valuem_printed(n: usize) -> Rational {
    Rational::one() / (0..=n).map(valuem_summand_printed).sum::<Rational>()
}

/// The same sum over even j only.
pub fn valuem_even_terms(n: usize) -> Rational {
    Rational::one()
        / (0..=n)
            .filter(|j| j % 2 == 0)
            .map(valuem_summand_printed)
            .sum::<Rational>()
}

/// a_n = n(n−1)(2n−1)/2 · ∫ f Q_n/(1−x²) = −n(n−1)(2n−1)/2 · ∫ f q_{n−2}.
pub fn fourier_coeff_quadrature(table: &QTable, f: &PolyExact, n: usize) -> Rational {
    let ni = n as i64;
    let c = rat(ni * (ni - 1) * (2 * ni - 1), 2);
    -c * (f * table.interior(n)).definite_integral(&int(-1), &int(1))
}

/// μ_{2k} = ∫_{−1}^1 x^{2k} f^(n)(x) dx for k = 0 … n−1.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    pub n: usize,
    pub entries: Vec<Rational>,
}

pub fn moments(f: &PolyExact, n: usize) -> MomentVector {
    let dn = f.derivative(n);
    let entries = (0..n)
        .map(|k| {
            (&PolyExact::monomial(Rational::one(), 2 * k) * &dn).definite_integral(&int(-1), &int(1))
        })
        .collect();
    MomentVector { n, entries }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentCoefficient {
    /// With the printed (−1)^n prefactor.
    pub paper_value: Rational,
    /// Without it; equals the Fourier coefficient whenever f(±1) = 0.
    pub corrected_value: Rational,
    pub moments: MomentVector,
}

/// (2n−1)/(2^n (n−1)!) Σ_{k=0}^{n−1} (−1)^k C(n−1,k) μ_{2k}, with and
/// without the printed (−1)^n.
pub fn fourier_coeff_moments(f: &PolyExact, n: usize) -> MomentCoefficient {
    let mv = moments(f, n);
    let row = binomial_row(n - 1);
    let sum = mv
        .entries
        .iter()
        .zip(&row)
        .enumerate()
        .fold(Rational::zero(), |acc, (k, (mu, c))| {
            acc + sign_pow(k as i64) * Rational::from_integer(c.clone()) * mu
        });
    let pre = Rational::new(
        BigInt::from(2 * n - 1),
        num_traits::pow(BigInt::from(2), n) * factorial(n as u64 - 1),
    );
    let corrected_value = pre * sum;
    MomentCoefficient {
        paper_value: sign_pow(n as i64) * &corrected_value,
        corrected_value,
        moments: mv,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonomialCoefficient {
    pub k: usize,
    pub paper_value: Rational,
    pub moment_functional_value: Rational,
    pub quadrature_value: Rational,
}

/// (−1)^k k 2^{k−1} ((k−1)!)² / (2k−2)!.
pub fn monomial_coeff_printed(k: usize) -> Rational {
    let num = BigInt::from(k) * num_traits::pow(BigInt::from(2), k - 1) * factorial(k as u64 - 1).pow(2);
    sign_pow(k as i64) * Rational::new(num, factorial(2 * k as u64 - 2))
}

pub fn monomial_coeff_closed_form(table: &QTable, k: usize) -> MonomialCoefficient {
    let f = PolyExact::monomial(Rational::one(), k);
    MonomialCoefficient {
        k,
        paper_value: monomial_coeff_printed(k),
        moment_functional_value: fourier_coeff_moments(&f, k).corrected_value,
        quadrature_value: fourier_coeff_quadrature(table, &f, k),
    }
}

/// Built-in smooth functions, all vanishing at ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedFunction {
    /// (1−x²)eˣ
    OneMinusX2Exp,
    /// sin(πx)
    SinPiX,
    /// (1−x²)/(2+x)
    OneMinusX2Over2PlusX,
}

impl NamedFunction {
    pub const ALL: [NamedFunction; 3] = [
        NamedFunction::OneMinusX2Exp,
        NamedFunction::SinPiX,
        NamedFunction::OneMinusX2Over2PlusX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedFunction::OneMinusX2Exp => "one-minus-x2-exp",
            NamedFunction::SinPiX => "sin-pi-x",
            NamedFunction::OneMinusX2Over2PlusX => "one-minus-x2-over-2-plus-x",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            NamedFunction::OneMinusX2Exp => (1.0 - x * x) * x.exp(),
            NamedFunction::SinPiX => (std::f64::consts::PI * x).sin(),
            NamedFunction::OneMinusX2Over2PlusX => (1.0 - x * x) / (2.0 + x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpansionTarget {
    Poly(PolyExact),
    Named(NamedFunction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMethod {
    /// Exact rational integration of −f·q_{n−2}.
    QuadratureExact,
    /// Sign-corrected moment formula (polynomial input only).
    MomentFormula,
    /// Gauss–Legendre integration of −f·q_{n−2}.
    QuadratureFloat,
}

impl ExpansionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpansionMethod::QuadratureExact => "quadrature_exact",
            ExpansionMethod::MomentFormula => "moment_formula",
            ExpansionMethod::QuadratureFloat => "quadrature_float",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Exact(BTreeMap<usize, Rational>),
    Float(BTreeMap<usize, f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub n_max: usize,
    pub coeffs: Coefficients,
    /// max |f − P_N| on 1001 equispaced points of [−1, 1].
    pub residual_sup: f64,
    /// (∫ (f − P_N)²/(1−x²))^{1/2}; `None` when the residual does not vanish
    /// at ±1 and the integral diverges.
    pub residual_weighted_l2: Option<f64>,
    pub method: ExpansionMethod,
}

const GRID_POINTS: usize = 1001;

fn grid_exact() -> impl Iterator<Item = Rational> {
    (0..GRID_POINTS).map(|i| rat(2 * i as i64 - (GRID_POINTS as i64 - 1), GRID_POINTS as i64 - 1))
}

/// Partial sum Σ_{n=2}^N a_n Q_n with a_n from the chosen method.
pub fn expand(
    table: &QTable,
    target: &ExpansionTarget,
    n_max: usize,
    backend: Backend,
    tol: f64,
) -> Result<ExpansionReport> {
    if n_max < 2 || n_max > table.max_degree() {
        return Err(Error::OutOfRange(format!(
            "expansion order {n_max} outside 2..={}",
            table.max_degree()
        )));
    }
    match (target, backend) {
        (ExpansionTarget::Poly(f), Backend::Exact) => {
            expand_poly_exact(table, f, n_max, ExpansionMethod::QuadratureExact)
        }
        (ExpansionTarget::Poly(f), Backend::Float) => {
            let fp = f.to_float::<f64>();
            expand_float(move |x| fp.eval(&x), n_max, tol)
        }
        (ExpansionTarget::Named(g), _) => {
            let g = *g;
            expand_float(move |x| g.eval(x), n_max, tol)
        }
    }
}

pub fn expand_poly_exact(
    table: &QTable,
    f: &PolyExact,
    n_max: usize,
    method: ExpansionMethod,
) -> Result<ExpansionReport> {
    let coeffs: BTreeMap<usize, Rational> = (2..=n_max)
        .map(|n| {
            let a = match method {
                ExpansionMethod::MomentFormula => fourier_coeff_moments(f, n).corrected_value,
                _ => fourier_coeff_quadrature(table, f, n),
            };
            (n, a)
        })
        .filter(|(_, a)| !a.is_zero())
        .collect();
    let partial = coeffs
        .iter()
        .fold(PolyExact::zero(), |acc, (n, a)| &acc + &table.get(*n).scale(a));
    let residual = f - &partial;
    let residual_sup = if residual.is_zero() {
        0.0
    } else {
        grid_exact()
            .map(|x| residual.eval(&x).abs())
            .max()
            .map(|r| to_f64(&r))
            .unwrap_or(0.0)
    };
    let residual_weighted_l2 = objective(&residual).ok().map(|v| to_f64(&v).sqrt());
    Ok(ExpansionReport {
        n_max,
        coeffs: Coefficients::Exact(coeffs),
        residual_sup,
        residual_weighted_l2,
        method,
    })
}

/// Float coefficients of an arbitrary function via quadrature.
pub fn expand_float(f: impl Fn(f64) -> f64, n_max: usize, tol: f64) -> Result<ExpansionReport> {
    let mut coeffs = BTreeMap::new();
    for n in 2..=n_max {
        let c = (n * (n - 1) * (2 * n - 1)) as f64 / 2.0;
        let integral = quad::integrate(|x| f(x) * interior_eval(n, x), -1.0, 1.0, tol)?;
        coeffs.insert(n, -c * integral.value);
    }
    let partial = |x: f64| -> f64 { coeffs.iter().map(|(&n, &a)| a * q_eval(n, x).0).sum() };
    let residual_sup = (0..GRID_POINTS)
        .map(|i| -1.0 + 2.0 * i as f64 / (GRID_POINTS - 1) as f64)
        .map(|x| (f(x) - partial(x)).abs())
        .fold(0.0, f64::max);
    let vanishes = (f(1.0).abs() < 1e-14) && (f(-1.0).abs() < 1e-14);
    let residual_weighted_l2 = if vanishes {
        let r = quad::integrate(
            |x| {
                let d = f(x) - partial(x);
                d * d / (1.0 - x * x)
            },
            -1.0,
            1.0,
            tol,
        )?;
        Some(r.value.max(0.0).sqrt())
    } else {
        None
    };
    Ok(ExpansionReport {
        n_max,
        coeffs: Coefficients::Float(coeffs),
        residual_sup,
        residual_weighted_l2,
        method: ExpansionMethod::QuadratureFloat,
    })
}

/// ∫f²/(1−x²) − Σ a_n²‖Q_n‖² for f in span{Q_2 … Q_N}.
pub fn parseval_defect(table: &QTable, f: &PolyExact, n_max: usize) -> Result<Rational> {
    let lhs = objective(f)?;
    let rhs = (2..=n_max).fold(Rational::zero(), |acc, n| {
        let a = fourier_coeff_quadrature(table, f, n);
        acc + &a * &a * table.norm_sq(n)
    });
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipcir::Family;

    fn fam() -> Family {
        Family::new(17).unwrap()
    }

    fn p(c: &[i64]) -> PolyExact {
        PolyExact::from_i64(c)
    }

    #[test]
    fn extremal_examples() {
        let f = fam();
        let s2 = minimize_constrained(&f.q, 2).unwrap();
        assert_eq!(s2.minimizer, p(&[1, 0, -1]));
        assert_eq!(s2.min_value, rat(4, 3));
        assert!(s2.oracle_agrees());
        assert_eq!(minimize_constrained(&f.q, 3).unwrap().min_value, rat(4, 3));
        let s4 = minimize_constrained(&f.q, 4).unwrap();
        assert_eq!(s4.min_value, rat(32, 45));
        assert!(s4.oracle_agrees());
        assert_eq!(s4.minimizer.eval(&int(0)), int(1));
    }

    #[test]
    fn brute_force_examples() {
        let b2 = brute_force_minimizer(2).unwrap();
        assert_eq!((b2.min_value, b2.poly), (rat(4, 3), p(&[1, 0, -1])));
        let b4 = brute_force_minimizer(4).unwrap();
        assert_eq!(b4.min_value, rat(32, 45));
        let b5 = brute_force_minimizer(5).unwrap();
        assert_eq!(b5, b4);
        assert!(brute_force_minimizer(1).is_err());
    }

    #[test]
    fn kernel_and_brute_force_agree() {
        let f = fam();
        let mut prev: Option<Rational> = None;
        for n in 2..=16 {
            let s = minimize_constrained(&f.q, n).unwrap();
            assert!(s.oracle_agrees(), "n = {n}");
            assert_eq!(s.minimizer.eval(&int(0)), int(1));
            assert!(s.minimizer.eval(&int(1)).is_zero() && s.minimizer.eval(&int(-1)).is_zero());
            assert_eq!(objective(&s.minimizer).unwrap(), s.min_value);
            if let Some(pm) = prev {
                if n % 2 == 1 {
                    assert_eq!(s.min_value, pm);
                } else {
                    assert!(s.min_value < pm);
                }
            }
            assert_eq!(s.min_value, valuem_even_terms(n));
            prev = Some(s.min_value);
        }
    }

    #[test]
    fn printed_valuem_counts_odd_terms() {
        assert_eq!(valuem_summand_printed(3), rat(5, 3));
        assert_ne!(valuem_printed(3), valuem_even_terms(3));
        assert_eq!(valuem_printed(2), valuem_even_terms(2));
    }

    #[test]
    fn linear_solver() {
        let a = vec![vec![int(0), int(1)], vec![int(2), int(1)]];
        assert_eq!(solve_exact(a, vec![int(3), int(5)]).unwrap(), vec![int(1), int(3)]);
        let s = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(solve_exact(s, vec![int(1), int(1)]), Err(Error::SingularSystem));
    }

    #[test]
    fn fourier_quadrature_examples() {
        let f = fam();
        assert_eq!(fourier_coeff_quadrature(&f.q, &p(&[1, 0, -1]), 2), int(-2));
        assert_eq!(fourier_coeff_quadrature(&f.q, &p(&[0, 1, 0, -1]), 3), int(-2));
        assert_eq!(fourier_coeff_quadrature(&f.q, &p(&[0, 0, 1, 0, -1]), 4), rat(-8, 5));
        assert_eq!(fourier_coeff_quadrature(&f.q, &p(&[0, 0, 1, 0, -1]), 2), rat(-2, 5));
    }

    #[test]
    fn moment_examples() {
        let f = fam();
        let m2 = fourier_coeff_moments(&p(&[1, 0, -1]), 2);
        assert_eq!((m2.corrected_value, m2.paper_value), (int(-2), int(-2)));
        let m3 = fourier_coeff_moments(&p(&[0, 1, 0, -1]), 3);
        assert_eq!((m3.corrected_value, m3.paper_value), (int(-2), int(2)));
        assert_eq!(m3.moments.entries.len(), 3);
        assert_eq!(fourier_coeff_moments(f.q.get(4), 4).corrected_value, int(1));
    }

    #[test]
    fn monomial_examples() {
        let f = fam();
        let k2 = monomial_coeff_closed_form(&f.q, 2);
        assert_eq!(k2.quadrature_value, int(-1));
        assert_eq!(k2.moment_functional_value, int(2));
        assert_eq!(k2.paper_value, int(2));
        let k3 = monomial_coeff_closed_form(&f.q, 3);
        assert_eq!((k3.moment_functional_value, k3.paper_value), (int(2), int(-2)));
        assert_eq!(monomial_coeff_closed_form(&f.q, 4).moment_functional_value, rat(8, 5));
        for k in 2..=12 {
            let m = monomial_coeff_closed_form(&f.q, k);
            assert_eq!(m.paper_value.abs(), m.moment_functional_value.abs());
        }
    }

    #[test]
    fn exact_expansions() {
        let f = Family::new(12).unwrap();
        let r = expand(&f.q, &ExpansionTarget::Poly(p(&[0, 0, 1, 0, -1])), 4, Backend::Exact, 1e-12).unwrap();
        let mut want = BTreeMap::new();
        want.insert(2, rat(-2, 5));
        want.insert(4, rat(-8, 5));
        assert_eq!(r.coeffs, Coefficients::Exact(want));
        assert_eq!(r.residual_sup, 0.0);
        assert_eq!(r.residual_weighted_l2, Some(0.0));

        let r = expand(&f.q, &ExpansionTarget::Poly(f.q.get(10).clone()), 10, Backend::Exact, 1e-12).unwrap();
        let mut want = BTreeMap::new();
        want.insert(10, int(1));
        assert_eq!(r.coeffs, Coefficients::Exact(want));

        // does not vanish at ±1: residual stays, weighted norm diverges
        let r = expand(&f.q, &ExpansionTarget::Poly(p(&[1])), 6, Backend::Exact, 1e-12).unwrap();
        assert!(r.residual_sup > 0.5);
        assert_eq!(r.residual_weighted_l2, None);

        let m = expand_poly_exact(&f.q, &p(&[0, 0, 1, 0, -1]), 4, ExpansionMethod::MomentFormula).unwrap();
        assert_eq!(m.residual_sup, 0.0);
    }

    #[test]
    fn smooth_function_expansion() {
        let f = Family::new(12).unwrap();
        let r = expand(&f.q, &ExpansionTarget::Named(NamedFunction::OneMinusX2Exp), 12, Backend::Float, 1e-14)
            .unwrap();
        assert!(r.residual_sup < 1e-8, "sup = {}", r.residual_sup);
        assert_eq!(NamedFunction::from_name("sin-pi-x"), Some(NamedFunction::SinPiX));
        assert_eq!(NamedFunction::from_name("nope"), None);
    }

    #[test]
    fn float_backend_matches_exact_on_polynomials() {
        let f = Family::new(8).unwrap();
        let g = p(&[0, 3, 1, -3, -1]);
        let exact = expand(&f.q, &ExpansionTarget::Poly(g.clone()), 8, Backend::Exact, 1e-14).unwrap();
        let float = expand(&f.q, &ExpansionTarget::Poly(g), 8, Backend::Float, 1e-14).unwrap();
        let (Coefficients::Exact(e), Coefficients::Float(fl)) = (exact.coeffs, float.coeffs) else {
            panic!("unexpected coefficient kinds");
        };
        for (n, a) in fl {
            let want = e.get(&n).map(to_f64).unwrap_or(0.0);
            assert!((a - want).abs() < 1e-12, "n = {n}");
        }
    }
}
