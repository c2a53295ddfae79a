//! Orthogonal systems carried over by Möbius maps f(x) = (λx+α)/(μx+β) with
//! λβ − μα = 1.
//!
//! If r_n are orthogonal on [−1, 1] under 1−t², then r_n(f(x)) are orthogonal
//! on [a, b] = f^{−1}([−1, 1]) under φ = (1−f²)f′. Everything about the map is
//! exact; the orthogonality integrals on [a, b] are evaluated numerically so
//! they serve as an independent check of the substitution.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quad;
use crate::rational::{fmt_rational, int, to_f64, Rational};
use crate::verdict::Verdict;
use crate::{PolyExact, PolyF64};

#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusMap {
    pub lambda: Rational,
    pub alpha: Rational,
    pub mu: Rational,
    pub beta: Rational,
}

impl MoebiusMap {
    pub fn new(lambda: Rational, alpha: Rational, mu: Rational, beta: Rational) -> Result<Self> {
        let det = &lambda * &beta - &mu * &alpha;
        if !det.is_one() {
            return Err(Error::InvalidMap(format!(
                "determinant λβ − μα = {} (must be 1)",
                fmt_rational(&det)
            )));
        }
        Ok(MoebiusMap { lambda, alpha, mu, beta })
    }

    pub fn identity() -> Self {
        MoebiusMap::new(int(1), int(0), int(0), int(1)).expect("unit determinant")
    }

    /// λx + α.
    pub fn numerator(&self) -> PolyExact {
        PolyExact::from_coeffs(vec![self.alpha.clone(), self.lambda.clone()])
    }

    /// μx + β.
    pub fn denominator(&self) -> PolyExact {
        PolyExact::from_coeffs(vec![self.beta.clone(), self.mu.clone()])
    }

    /// Zero of μx + β, if any.
    pub fn pole(&self) -> Option<Rational> {
        (!self.mu.is_zero()).then(|| -&self.beta / &self.mu)
    }

    /// Exact value; `None` at the pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = &self.mu * x + &self.beta;
        (!d.is_zero()).then(|| (&self.lambda * x + &self.alpha) / d)
    }

    pub fn to_f64(&self) -> MoebiusF64 {
        MoebiusF64 {
            lambda: to_f64(&self.lambda),
            alpha: to_f64(&self.alpha),
            mu: to_f64(&self.mu),
            beta: to_f64(&self.beta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusF64 {
    pub lambda: f64,
    pub alpha: f64,
    pub mu: f64,
    pub beta: f64,
}

impl MoebiusF64 {
    pub fn eval(&self, x: f64) -> f64 {
        (self.lambda * x + self.alpha) / (self.mu * x + self.beta)
    }
}

/// Monic polynomials orthogonal on [−1, 1] under 1−t².
#[derive(Clone, Debug, PartialEq)]
pub struct RFamily {
    pub max_degree: usize,
    pub polys: Vec<PolyExact>,
    /// ∫ r_n² (1−t²).
    pub norms_sq: Vec<Rational>,
}

fn damped_inner(p: &PolyExact, q: &PolyExact) -> Rational {
    let w = PolyExact::from_i64(&[1, 0, -1]);
    (&(p * q) * &w).definite_integral(&int(-1), &int(1))
}

impl RFamily {
    /// Monic Gram–Schmidt on 1, t, t², ….
    pub fn build(max_degree: usize) -> Self {
        let mut polys: Vec<PolyExact> = Vec::with_capacity(max_degree + 1);
        let mut norms_sq: Vec<Rational> = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let t_n = PolyExact::monomial(Rational::one(), n);
            let mut r = t_n.clone();
            for (rk, hk) in polys.iter().zip(&norms_sq) {
                let c = damped_inner(&t_n, rk) / hk;
                r = &r - &rk.scale(&c);
            }
            norms_sq.push(damped_inner(&r, &r));
            polys.push(r);
        }
        RFamily { max_degree, polys, norms_sq }
    }

    pub fn get(&self, n: usize) -> &PolyExact {
        &self.polys[n]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Endpoints {
    pub a: Rational,
    pub b: Rational,
    /// (β−α)/(λ+μ), as printed.
    pub paper_a: Rational,
    /// (β−α)/(λ−μ), as printed.
    pub paper_b: Rational,
}

/// Solves f(a) = −1 and f(b) = 1.
pub fn induced_endpoints(map: &MoebiusMap) -> Result<Endpoints> {
    let sum = &map.lambda + &map.mu;
    let diff = &map.lambda - &map.mu;
    if sum.is_zero() || diff.is_zero() {
        return Err(Error::DegenerateMap("λ = ±μ: f never reaches ±1".into()));
    }
    let beta_minus_alpha = &map.beta - &map.alpha;
    Ok(Endpoints {
        a: -(&map.alpha + &map.beta) / &sum,
        b: &beta_minus_alpha / &diff,
        paper_a: &beta_minus_alpha / &sum,
        paper_b: beta_minus_alpha / diff,
    })
}

/// φ = numerator / (μx+β)⁴.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedWeight {
    pub numerator: PolyExact,
    pub denominator: PolyExact,
}

impl InducedWeight {
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numerator.eval_float(x) / self.denominator.eval_float(x)
    }

    /// Numerator with the denominator cancelled when it is constant.
    pub fn reduced_numerator(&self) -> Option<PolyExact> {
        match self.denominator.degree() {
            Some(0) => Some(self.numerator.scale(&(Rational::one() / self.denominator.coeff(0)))),
            _ => None,
        }
    }

    /// True when φ equals (1−f²)f′ as rational functions, with f′ from the
    /// quotient rule.
    pub fn matches_derivative_form(&self, map: &MoebiusMap) -> bool {
        let p = map.numerator();
        let d = map.denominator();
        let fprime_num = &(&p.derivative(1) * &d) - &(&p * &d.derivative(1));
        let one_minus_f2_num = &(&d * &d) - &(&p * &p);
        let lhs = &self.numerator * &d.pow(4);
        let rhs = &(&one_minus_f2_num * &fprime_num) * &self.denominator;
        lhs == rhs
    }
}

/// ((μ−λ)x + β−α)((μ+λ)x + β+α) / (μx+β)⁴.
pub fn induced_weight(map: &MoebiusMap) -> InducedWeight {
    let f1 = PolyExact::from_coeffs(vec![&map.beta - &map.alpha, &map.mu - &map.lambda]);
    let f2 = PolyExact::from_coeffs(vec![&map.beta + &map.alpha, &map.mu + &map.lambda]);
    InducedWeight {
        numerator: &f1 * &f2,
        denominator: map.denominator().pow(4),
    }
}

#[derive(Clone, Debug)]
pub struct TransformedSystem {
    pub map: MoebiusMap,
    pub endpoints: Endpoints,
    pub weight: InducedWeight,
    pub family: RFamily,
    family_f64: Vec<PolyF64>,
}

impl TransformedSystem {
    /// Rejects maps whose pole lies in [a, b].
    pub fn new(map: MoebiusMap, max_degree: usize) -> Result<Self> {
        let endpoints = induced_endpoints(&map)?;
        if endpoints.a >= endpoints.b {
            return Err(Error::InvalidMap(format!(
                "induced interval [{}, {}] is empty",
                fmt_rational(&endpoints.a),
                fmt_rational(&endpoints.b)
            )));
        }
        if let Some(p) = map.pole() {
            if endpoints.a <= p && p <= endpoints.b {
                return Err(Error::InvalidMap(format!(
                    "pole x = {} inside [{}, {}]",
                    fmt_rational(&p),
                    fmt_rational(&endpoints.a),
                    fmt_rational(&endpoints.b)
                )));
            }
        }
        let weight = induced_weight(&map);
        let family = RFamily::build(max_degree);
        let family_f64 = family.polys.iter().map(|p| p.to_float::<f64>()).collect();
        Ok(TransformedSystem {
            map,
            endpoints,
            weight,
            family,
            family_f64,
        })
    }

    pub fn interval_f64(&self) -> (f64, f64) {
        (to_f64(&self.endpoints.a), to_f64(&self.endpoints.b))
    }

    /// ∫_a^b p(f(x)) q(f(x)) φ(x) dx.
    fn integral(&self, p: &PolyF64, q: &PolyF64, tol: f64) -> Result<f64> {
        let f = self.map.to_f64();
        let (a, b) = self.interval_f64();
        let v = quad::integrate(
            |x| {
                let t = f.eval(x);
                p.eval(&t) * q.eval(&t) * self.weight.eval_f64(x)
            },
            a,
            b,
            tol,
        )?;
        Ok(v.value)
    }

    /// Numerical ⟨r_n∘f, r_m∘f⟩_φ with absolute quadrature tolerance `tol`.
    pub fn inner(&self, n: usize, m: usize, tol: f64) -> Result<f64> {
        self.integral(&self.family_f64[n], &self.family_f64[m], tol)
    }

    fn scale(&self, n: usize, m: usize) -> f64 {
        (to_f64(&self.family.norms_sq[n]) * to_f64(&self.family.norms_sq[m])).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalityCheck {
    pub value: f64,
    pub pass: bool,
}

/// Passes when |⟨r_n∘f, r_m∘f⟩_φ| < tol·(h_n h_m)^{1/2}.
pub fn transformed_orthogonality(
    sys: &TransformedSystem,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<OrthogonalityCheck> {
    if n == m || n.max(m) > sys.family.max_degree {
        return Err(Error::OutOfRange(format!("pair ({n}, {m}) not admissible")));
    }
    let scale = sys.scale(n, m);
    let value = sys.inner(n, m, tol * scale * 0.1)?;
    Ok(OrthogonalityCheck {
        value,
        pass: value.abs() < tol * scale,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub entries: Vec<Vec<f64>>,
    /// max over n ≠ m of |G_nm| / (G_nn G_mm)^{1/2}.
    pub max_offdiag_relative: f64,
    pub max_offdiag: f64,
    /// max |G_nm − ∫ r_n r_m (1−t²)| over all entries.
    pub max_substitution_error: f64,
}

/// Gram matrix of r_0∘f … r_{n_max}∘f under φ.
pub fn gram_matrix(sys: &TransformedSystem, n_max: usize, tol: f64) -> Result<GramMatrix> {
    if n_max > sys.family.max_degree {
        return Err(Error::OutOfRange(format!("Gram size {n_max} exceeds family")));
    }
    let mut entries = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in 0..=n {
            let v = sys.inner(n, m, tol * sys.scale(n, m) * 0.1)?;
            entries[n][m] = v;
            entries[m][n] = v;
        }
    }
    let mut max_offdiag_relative = 0.0f64;
    let mut max_offdiag = 0.0f64;
    let mut max_substitution_error = 0.0f64;
    for n in 0..=n_max {
        for m in 0..=n_max {
            let exact = if n == m { to_f64(&sys.family.norms_sq[n]) } else { 0.0 };
            max_substitution_error = max_substitution_error.max((entries[n][m] - exact).abs());
            if n != m {
                let rel = entries[n][m].abs() / (entries[n][n] * entries[m][m]).sqrt();
                max_offdiag_relative = max_offdiag_relative.max(rel);
                max_offdiag = max_offdiag.max(entries[n][m].abs());
            }
        }
    }
    Ok(GramMatrix {
        entries,
        max_offdiag_relative,
        max_offdiag,
        max_substitution_error,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub j: usize,
    pub epsilon: Rational,
    pub value: f64,
    /// ε²‖r_j‖², the exact increase.
    pub expected_increase: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityReport {
    pub n: usize,
    pub base: f64,
    pub perturbations: Vec<Perturbation>,
    pub verdict: Verdict,
}

pub const PERTURBATIONS: [(i64, i64); 4] = [(1, 4), (-1, 4), (1, 16), (-1, 16)];

/// Compares I_n(r_n) with I_n(r_n + ε r_j) for every j < n.
pub fn minimality_check(sys: &TransformedSystem, n: usize, tol: f64) -> Result<MinimalityReport> {
    if n > sys.family.max_degree {
        return Err(Error::OutOfRange(format!("degree {n} exceeds family")));
    }
    let rn = sys.family.get(n);
    let base = sys.integral(&sys.family_f64[n], &sys.family_f64[n], tol)?;
    let mut perturbations = Vec::new();
    let mut ok = true;
    for j in 0..n {
        for (p, q) in PERTURBATIONS {
            let epsilon = Rational::new(p.into(), q.into());
            let cand = (rn + &sys.family.get(j).scale(&epsilon)).to_float::<f64>();
            let value = sys.integral(&cand, &cand, tol)?;
            ok &= value > base;
            perturbations.push(Perturbation {
                j,
                expected_increase: &epsilon * &epsilon * &sys.family.norms_sq[j],
                epsilon,
                value,
            });
        }
    }
    Ok(MinimalityReport {
        n,
        base,
        perturbations,
        verdict: if ok { Verdict::Confirmed } else { Verdict::Failed },
    })
}

/// The five maps used by the test battery: identity, x+1, 4x, 4x/(x+4),
/// (2x+1)/(x+1).
pub fn test_maps() -> Vec<MoebiusMap> {
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    [
        (r(1, 1), r(0, 1), r(0, 1), r(1, 1)),
        (r(1, 1), r(1, 1), r(0, 1), r(1, 1)),
        (r(2, 1), r(0, 1), r(0, 1), r(1, 2)),
        (r(1, 1), r(0, 1), r(1, 4), r(1, 1)),
        (r(2, 1), r(1, 1), r(1, 1), r(1, 1)),
    ]
    .into_iter()
    .map(|(l, a, m, b)| MoebiusMap::new(l, a, m, b).expect("unit determinant"))
    .collect()
}

/// Exact check that f is increasing on [a, b]: (μx+β)² > 0 there.
pub fn increasing_on_interval(map: &MoebiusMap, e: &Endpoints) -> bool {
    let d = map.denominator();
    let da = d.eval(&e.a);
    let db = d.eval(&e.b);
    !da.is_zero() && !db.is_zero() && da.is_positive() == db.is_positive()
}
