//! Identity registry: every printed identity is checked against an exact
//! oracle and classified.
//!
//! Entries run in parallel and are reported sorted by id, so the report is
//! deterministic. All sample points are fixed rational grids.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{
    brute_force_minimizer, fourier_coeff_moments, fourier_coeff_quadrature, minimize_constrained,
    monomial_coeff_closed_form, objective, parseval_defect, valuem_even_terms, valuem_printed,
    valuem_summand_printed,
};
use crate::error::Result;
use crate::kernel::{
    cd_correction_closed_form, cd_correction_factor, kernel_at_zero_closed_form,
    kernel_at_zero_expected_ratio, kernel_section_coeffs_printed, kernel_sequence_orthogonality,
    kernel_sum, reproducing_check, sections_distinct,
};
use crate::legendre::{
    even_value_at_zero, leading_closed_form, legendre_rodrigues, legendre_shifted_expansion,
    legendre_special_values, odd_derivative_at_zero,
};
use crate::moebius::{
    gram_matrix, induced_endpoints, induced_weight, minimality_check, test_maps, TransformedSystem,
};
use crate::pipcir::{
    differentiated_ode_residual, ode_residual, q_antiderivative_form, q_at_zero, q_boundary_derivatives,
    q_eval, q_integral_relation_check, q_leading_closed_form, q_rodrigues, q_roots,
    two_rodrigues_residual, weighted_inner_product, x2_minus_1, Family,
};
use crate::rational::{factorial, fmt_rational, int, rat, sign_pow, Rational};
use crate::verdict::Verdict;
use crate::PolyExact;

pub const SCHEMA_VERSION: u32 = 1;
pub const MIN_DEGREE: usize = 4;
pub const MAX_DEGREE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRange {
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: Option<usize>,
    pub inputs: BTreeMap<String, String>,
    pub oracle_value: String,
    pub paper_value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub identity_id: String,
    pub degrees_checked: DegreeRange,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl IdentityEntry {
    /// One-line summary, e.g. `NormQn: CONFIRMED (n ≤ 40)`.
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}", self.identity_id, self.verdict);
        if let Some(c) = &self.correction {
            s.push(' ');
            s.push_str(c);
        }
        match &self.witness {
            Some(w) if self.verdict != Verdict::Confirmed => {
                if let Some(n) = w.n {
                    s.push_str(&format!(", witness n={n}"));
                } else {
                    s.push_str(", witness");
                    for (k, v) in &w.inputs {
                        s.push_str(&format!(" {k}={v}"));
                    }
                }
                if self.correction.is_none() {
                    s.push_str(&format!(" oracle {} paper {}", w.oracle_value, w.paper_value));
                }
            }
            _ if self.degrees_checked.to > 0 => {
                s.push_str(&format!(" (n ≤ {})", self.degrees_checked.to))
            }
            _ => {}
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub schema: u32,
    pub max_degree: usize,
    pub entries: Vec<IdentityEntry>,
}

impl IdentityReport {
    pub fn any_failed(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == Verdict::Failed)
    }

    pub fn get(&self, id: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.identity_id == id)
    }
}

/// Running classification of one identity over many cases: the worst verdict
/// seen wins, and the first case that produced it becomes the witness.
struct Tally {
    id: &'static str,
    from: usize,
    to: usize,
    verdict: Verdict,
    witness: Option<Witness>,
    correction: Option<String>,
    details: Vec<String>,
}

fn rank(v: Verdict) -> u8 {
    match v {
        Verdict::NotApplicable => 0,
        Verdict::Confirmed => 1,
        Verdict::ConfirmedUpToSign => 2,
        Verdict::CorrectedFactor => 3,
        Verdict::Failed => 4,
    }
}

impl Tally {
    fn new(id: &'static str, from: usize, to: usize) -> Self {
        Tally {
            id,
            from,
            to,
            verdict: Verdict::Confirmed,
            witness: None,
            correction: None,
            details: Vec::new(),
        }
    }

    fn record(&mut self, v: Verdict, witness: impl FnOnce() -> Witness) {
        if rank(v) > rank(self.verdict) {
            self.verdict = v;
            self.witness = Some(witness());
        }
    }

    /// Exact equality check; a mismatch is a failure.
    fn expect_eq(&mut self, n: usize, what: &str, oracle: &Rational, value: &Rational) {
        if oracle != value {
            self.record(Verdict::Failed, || witness(Some(n), &[("check", what)], oracle, value));
        }
    }

    fn expect(&mut self, n: usize, what: &str, ok: bool) {
        if !ok {
            self.record(Verdict::Failed, || Witness {
                n: Some(n),
                inputs: inputs(&[("check", what)]),
                oracle_value: "true".into(),
                paper_value: "false".into(),
            });
        }
    }

    fn fail_on<T>(&mut self, n: usize, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let msg = e.to_string();
                self.record(Verdict::Failed, || Witness {
                    n: Some(n),
                    inputs: inputs(&[("error", &msg)]),
                    oracle_value: String::new(),
                    paper_value: String::new(),
                });
                None
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn finish(self) -> IdentityEntry {
        IdentityEntry {
            identity_id: self.id.to_string(),
            degrees_checked: DegreeRange {
                from: self.from,
                to: self.to,
            },
            verdict: self.verdict,
            correction: self.correction,
            witness: self.witness,
            details: self.details,
        }
    }
}

fn inputs(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn witness(n: Option<usize>, pairs: &[(&str, &str)], oracle: &Rational, paper: &Rational) -> Witness {
    Witness {
        n,
        inputs: inputs(pairs),
        oracle_value: fmt_rational(oracle),
        paper_value: fmt_rational(paper),
    }
}

/// Fixed rational sample points in (−1, 1).
pub fn sample_points(count: usize) -> Vec<Rational> {
    (0..count)
        .map(|i| rat(2 * i as i64 + 1 - count as i64, count as i64 + 1))
        .collect()
}

/// Pairs (x, y) with x ≠ y, denominators 21 and 13.
pub fn sample_pairs(count: usize) -> Vec<(Rational, Rational)> {
    (0..count as i64)
        .map(|i| (rat(2 * i + 1 - 20, 21), rat(7 - 3 * (i % 9), 13)))
        .collect()
}

/// Deterministic polynomials vanishing at ±1: (1−x²)·h for a few fixed h.
pub fn admissible_battery(max_degree: usize) -> Vec<PolyExact> {
    let one_minus = PolyExact::from_i64(&[1, 0, -1]);
    let hs: Vec<PolyExact> = vec![
        PolyExact::from_i64(&[0, 1]),
        PolyExact::one(),
        PolyExact::from_i64(&[3, -2, 5]),
        PolyExact::from_coeffs(vec![rat(1, 2), rat(-7, 3), int(0), rat(4, 5)]),
        PolyExact::from_i64(&[-1, 0, 2, 1, 0, -3]),
        PolyExact::from_coeffs((0..9).map(|k| rat(if k % 3 == 0 { -1 } else { k + 1 }, k + 2)).collect()),
    ];
    hs.into_iter()
        .map(|h| &one_minus * &h)
        .filter(|g| g.degree().is_some_and(|d| d <= max_degree))
        .collect()
}

/// [Σ_{k=1}^n (−1)^{k−1} u^{(k−1)} v^{(n−k)}]_{−1}^1 + (−1)^n ∫u^{(n)}v − ∫u v^{(n)}.
pub fn integration_by_parts_residual(u: &PolyExact, v: &PolyExact, n: usize) -> Rational {
    let (lo, hi) = (int(-1), int(1));
    let boundary = (1..=n).fold(PolyExact::zero(), |acc, k| {
        let term = &u.derivative(k - 1) * &v.derivative(n - k);
        &acc + &term.scale(&sign_pow(k as i64 - 1))
    });
    let b = boundary.eval(&hi) - boundary.eval(&lo);
    let rhs = b + sign_pow(n as i64) * (&u.derivative(n) * v).definite_integral(&lo, &hi);
    rhs - (u * &v.derivative(n)).definite_integral(&lo, &hi)
}

/// Printed Q_n = −1/(2^{n−1}(n−1)!)·[(x²−1)^{n−1}]^{(n−2)}.
pub fn exp_qnn_printed(n: usize) -> PolyExact {
    let den = num_traits::pow(BigInt::from(2), n - 1) * factorial(n as u64 - 1);
    x2_minus_1()
        .pow(n - 1)
        .derivative(n - 2)
        .scale(&-Rational::new(BigInt::one(), den))
}

struct Ctx {
    fam: Family,
    d: usize,
}

type Check = fn(&Ctx) -> IdentityEntry;

fn difln(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("DifLn", 0, c.d);
    for n in 0..=c.d {
        t.expect(n, "Rodrigues form equals recurrence", &legendre_rodrigues(n) == c.fam.legendre.get(n));
    }
    t.note("also covers the repeated Rodrigues display in the Q_n proposition proof");
    t.finish()
}

fn expp(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("expp", 0, c.d);
    for n in 0..=c.d {
        t.expect(n, "shifted expansion equals recurrence", &legendre_shifted_expansion(n) == c.fam.legendre.get(n));
    }
    t.finish()
}

fn orth_ln(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("orthLn", 0, c.d);
    let (lo, hi) = (int(-1), int(1));
    for n in 0..=c.d {
        for m in 0..=n {
            let v = (c.fam.legendre.get(n) * c.fam.legendre.get(m)).definite_integral(&lo, &hi);
            let want = if n == m { rat(2, 2 * n as i64 + 1) } else { Rational::zero() };
            t.expect_eq(n, &format!("<L_{n}, L_{m}>"), &want, &v);
        }
    }
    t.finish()
}

fn ln_recurrence(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Ln-derivative-recurrence", 1, c.d);
    let l = &c.fam.legendre;
    for n in 1..=c.d {
        t.expect(n, "L_n = (L'_{n+1} − L'_{n−1})/(2n+1)", l.derivative_recurrence_holds(n));
        let anti = l.get(n).antiderivative();
        let lhs = &anti - &PolyExact::constant(anti.eval(&int(-1)));
        let rhs = (l.get(n + 1) - l.get(n - 1)).scale(&rat(1, 2 * n as i64 + 1));
        t.expect(n, "∫_{−1}^x L_n = (L_{n+1} − L_{n−1})/(2n+1)", lhs == rhs);
        t.expect_eq(n, "leading coefficient", &leading_closed_form(n), &l.leading(n));
    }
    t.finish()
}

fn lnat1(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Lnat1", 0, c.d);
    let (one, m_one) = (int(1), int(-1));
    for n in 0..=c.d {
        let p = c.fam.legendre.get(n);
        let sv = legendre_special_values(n);
        let ni = n as i64;
        t.expect_eq(n, "L_n(1)", &int(1), &p.eval(&one));
        t.expect_eq(n, "L_n(−1)", &sign_pow(ni), &p.eval(&m_one));
        let d1 = p.derivative(1);
        let d2 = p.derivative(2);
        t.expect_eq(n, "L_n'(1)", &rat(ni * (ni + 1), 2), &d1.eval(&one));
        t.expect_eq(n, "L_n'(−1)", &sv.deriv_at_minus1, &d1.eval(&m_one));
        t.expect_eq(n, "L_n''(1)", &sv.second_deriv_at_plus1, &d2.eval(&one));
        t.expect_eq(n, "L_n''(−1)", &sv.second_deriv_at_minus1, &d2.eval(&m_one));
    }
    t.note("derivative values at ±1 checked alongside");
    t.finish()
}

fn lnat0(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Lnat0", 0, c.d);
    for n in 0..=c.d {
        let v = c.fam.legendre.get(n).eval(&Rational::zero());
        t.expect_eq(n, "binomial sum", &v, &legendre_special_values(n).at0);
    }
    t.finish()
}

fn l2nat0(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("L2nat0", 0, c.d);
    for m in 0..=c.d / 2 {
        let v = c.fam.legendre.get(2 * m).eval(&Rational::zero());
        t.expect_eq(2 * m, "Pochhammer form", &v, &even_value_at_zero(m));
        let binom = Rational::new(
            sign_pow(m as i64).numer() * crate::rational::binomial(2 * m, m),
            num_traits::pow(BigInt::from(2), 2 * m),
        );
        t.expect_eq(2 * m, "central binomial form", &v, &binom);
    }
    t.finish()
}

fn derilnat0(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("DeriLnat0", 1, c.d);
    for m in 0..=(c.d - 1) / 2 {
        let v = c.fam.legendre.get(2 * m + 1).derivative(1).eval(&Rational::zero());
        t.expect_eq(2 * m + 1, "Pochhammer form", &v, &odd_derivative_at_zero(m));
    }
    t.finish()
}

fn lnderivat0(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Lnderivat0", 0, c.d);
    for n in 0..=c.d {
        let v = c.fam.legendre.get(n).derivative(1).eval(&Rational::zero());
        t.expect_eq(n, "binomial sum", &v, &legendre_special_values(n).deriv_at0);
    }
    t.finish()
}

fn qqn(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Qqn", 2, c.d);
    for n in 2..=c.d {
        t.expect(n, "−∫_x^1 L_{n−1} equals table", &q_antiderivative_form(&c.fam.legendre, n) == c.fam.q.get(n));
    }
    t.finish()
}

fn defi1(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Defi1", 2, c.d);
    for n in 2..=c.d {
        let q = c.fam.q.interior(n);
        t.expect(n, "Q_n = (x²−1)q_{n−2}", &(&x2_minus_1() * q) == c.fam.q.get(n));
        let alt = c.fam.legendre.get(n - 1).derivative(1).scale(&rat(1, (n * (n - 1)) as i64));
        t.expect(n, "q_{n−2} = L'_{n−1}/(n(n−1))", &alt == q);
    }
    t.finish()
}

fn qqn1(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Qqn1", 2, c.d);
    for n in 2..=c.d {
        let q = c.fam.q.get(n);
        t.expect(n, "Q_n(±1) = 0", q.eval(&int(1)).is_zero() && q.eval(&int(-1)).is_zero());
    }
    t.finish()
}

fn qnderiv1(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Qnderiv1", 2, c.d);
    for n in 2..=c.d {
        let b = q_boundary_derivatives(&c.fam.q, n);
        let ni = n as i64;
        t.expect_eq(n, "Q_n'(1)", &int(1), &b.d1_at_plus1);
        t.expect_eq(n, "Q_n'(−1)", &sign_pow(ni - 1), &b.d1_at_minus1);
        t.expect_eq(n, "Q_n''(1)", &rat(ni * (ni - 1), 2), &b.d2_at_plus1);
    }
    t.finish()
}

fn diff2(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Diff2", 2, c.d);
    for n in 2..=c.d {
        t.expect(n, "ODE residual", ode_residual(&c.fam.q, n).is_zero());
    }
    t.note("identical display repeated in the Q_n proposition proof");
    t.finish()
}

fn diff3(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Diff3", 2, c.d);
    for n in 2..=c.d {
        t.expect(n, "differentiated ODE residual", differentiated_ode_residual(&c.fam.q, n).is_zero());
    }
    t.finish()
}

fn rodrigues(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Rodrigues", 2, c.d);
    let mut exp_qnn_negated = true;
    for n in 2..=c.d {
        t.expect(n, "Rodrigues form equals table", &q_rodrigues(n) == c.fam.q.get(n));
        exp_qnn_negated &= exp_qnn_printed(n) == -c.fam.q.get(n);
    }
    if exp_qnn_negated {
        t.note("the (n−2)-fold derivative form in the proof carries a spurious leading minus: it equals −Q_n for every n checked");
    } else {
        t.record(Verdict::Failed, || Witness {
            n: None,
            inputs: inputs(&[("check", "(n−2)-derivative form is −Q_n")]),
            oracle_value: "true".into(),
            paper_value: "false".into(),
        });
    }
    t.finish()
}

const SECOND_MAX: usize = 20;

fn second(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(SECOND_MAX);
    let mut t = Tally::new("Second", 2, to);
    for n in 2..=to {
        t.expect(n, "two-Rodrigues residual", two_rodrigues_residual(n).is_zero());
    }
    t.note("identical display repeated in the Q_n proposition proof");
    t.finish()
}

fn gener_integ_parts(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("GenerIntegParts", 1, c.d);
    let shift = PolyExact::from_coeffs(vec![rat(1, 3), int(-2), rat(5, 7)]);
    for n in 1..=c.d {
        let u = c.fam.legendre.get(n) + &shift;
        let v = c.fam.q.get(n + 1) + &PolyExact::from_i64(&[1, 1]);
        let r = integration_by_parts_residual(&u, &v, n);
        t.expect_eq(n, "repeated integration by parts", &Rational::zero(), &r);
    }
    t.finish()
}

fn pipcirs2(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Pipcirs2", 3, c.d);
    for n in 3..=c.d {
        let v = q_integral_relation_check(&c.fam.q, n);
        t.record(v, || Witness {
            n: Some(n),
            inputs: BTreeMap::new(),
            oracle_value: "CONFIRMED".into(),
            paper_value: v.as_str().into(),
        });
    }
    t.note("checked together with Q_n = (Q'_{n+1} − Q'_{n−1})/(2n−1)");
    t.finish()
}

fn pipcirs3(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Pipcirs3", 3, c.d);
    let q = &c.fam.q;
    for n in 3..=c.d {
        let anti = q.get(n).antiderivative();
        let lhs = &anti - &PolyExact::constant(anti.eval(&int(-1)));
        let rhs = (q.get(n + 1) - q.get(n - 1)).scale(&rat(1, 2 * n as i64 - 1));
        t.expect(n, "∫_{−1}^x Q_n = (Q_{n+1} − Q_{n−1})/(2n−1)", lhs == rhs);
    }
    t.note("integration constant fixed by vanishing at x = −1");
    t.finish()
}

fn orth_qn(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("OrthQn", 2, c.d);
    for n in 2..=c.d {
        for m in 2..n {
            if let Some(v) = t.fail_on(n, weighted_inner_product(c.fam.q.get(n), c.fam.q.get(m))) {
                t.expect_eq(n, &format!("<Q_{n}, Q_{m}>"), &Rational::zero(), &v);
            }
        }
    }
    t.finish()
}

fn norm_qn(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("NormQn", 2, c.d);
    for n in 2..=c.d {
        if let Some(v) = t.fail_on(n, weighted_inner_product(c.fam.q.get(n), c.fam.q.get(n))) {
            let ni = n as i64;
            t.expect_eq(n, "‖Q_n‖²", &rat(2, ni * (ni - 1) * (2 * ni - 1)), &v);
        }
    }
    t.finish()
}

fn q_leading(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Q-leading-coeff", 2, c.d);
    for n in 2..=c.d {
        t.expect_eq(n, "leading coefficient", &q_leading_closed_form(n), c.fam.q.leading(n));
    }
    t.finish()
}

fn pipcir_inflection(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Pipcir-inflection", 2, c.d);
    for n in 2..=c.d {
        if let Some(roots) = t.fail_on(n, q_roots::<f64>(n)) {
            t.expect(n, "n real roots", roots.len() == n);
            let worst = roots[1..roots.len() - 1]
                .iter()
                .map(|&x| {
                    let (_, _, d2) = q_eval(n, x);
                    (d2 / (n * n) as f64).abs()
                })
                .fold(0.0, f64::max);
            t.expect(n, "Q_n'' vanishes at interior roots", worst < 1e-10);
        }
    }
    t.note("interior roots located in double precision; Q_n'' scaled by 1/n²");
    t.finish()
}

fn qnatzero(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Qnatzero", 2, c.d);
    for n in 2..=c.d {
        let z = q_at_zero(&c.fam.q, n);
        match &z.paper_formula {
            Some(p) => t.record(z.verdict, || {
                witness(Some(n), &[("x", "0")], &z.oracle, p)
            }),
            None => t.expect_eq(n, "Q_n(0) at odd n", &Rational::zero(), &z.oracle),
        }
    }
    // the kernel-section coefficients reuse the printed Q_k(0)
    let printed = kernel_section_coeffs_printed(c.d);
    let mut flipped = true;
    for (k, coeff) in &printed {
        let truth = c.fam.q.get(*k).eval(&Rational::zero()) / c.fam.q.norm_sq(*k);
        flipped &= *coeff == -truth;
    }
    if flipped {
        t.note("printed value is the negative of Q_n(0) for every even n; odd n give 0");
        t.note("the printed coefficients of K_n(x,0) and F_n(x) inherit the same sign flip");
    } else {
        t.record(Verdict::Failed, || Witness {
            n: None,
            inputs: inputs(&[("check", "K_n(x,0) coefficients are sign-flipped")]),
            oracle_value: "true".into(),
            paper_value: "false".into(),
        });
    }
    t.finish()
}

const KERNEL_POINTS: usize = 20;

fn cds11(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("CDS11-prefactor", 2, c.d);
    t.correction = Some("(n+1)/(2n-1)".into());
    let q = &c.fam.q;
    let top = c.d + 1;
    for n in 2..=c.d {
        t.expect_eq(n, "k_n/k_{n+1}", &cd_correction_closed_form(n), &cd_correction_factor(q, n));
    }
    let pairs = sample_pairs(KERNEL_POINTS);
    for (x, y) in &pairs {
        let qx: Vec<Rational> = (2..=top).map(|k| q.get(k).eval(x)).collect();
        let qy: Vec<Rational> = (2..=top).map(|k| q.get(k).eval(y)).collect();
        let mut oracle = Rational::zero();
        for n in 2..=c.d {
            let i = n - 2;
            oracle += &qx[i] * &qy[i] / q.norm_sq(n);
            let core = (&qx[i + 1] * &qy[i] - &qy[i + 1] * &qx[i]) / (x - y);
            let printed = &core / q.norm_sq(n);
            let corrected = &printed * cd_correction_closed_form(n);
            let v = Verdict::with_correction(&oracle, &printed, &corrected);
            t.record(v, || {
                let (xs, ys) = (fmt_rational(x), fmt_rational(y));
                witness(Some(n), &[("x", &xs), ("y", &ys)], &oracle, &printed)
            });
        }
    }
    for x in sample_points(7) {
        let mut oracle = Rational::zero();
        for n in 2..=c.d {
            let (qn, qn1) = (q.get(n), q.get(n + 1));
            oracle += qn.eval(&x) * qn.eval(&x) / q.norm_sq(n);
            let core = qn1.derivative(1).eval(&x) * qn.eval(&x) - qn1.eval(&x) * qn.derivative(1).eval(&x);
            let printed = core / q.norm_sq(n);
            let corrected = &printed * cd_correction_closed_form(n);
            let v = Verdict::with_correction(&oracle, &printed, &corrected);
            t.record(v, || {
                let xs = fmt_rational(&x);
                witness(Some(n), &[("x", &xs), ("y", &xs)], &oracle, &printed)
            });
        }
    }
    t.note(format!(
        "{KERNEL_POINTS} point pairs for x ≠ y and 7 diagonal points; printed prefactor exact only at n = 2"
    ));
    t.note("the confluent x = y form carries the same missing factor");
    t.finish()
}

fn kern(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Kern", 2, c.d);
    let q = &c.fam.q;
    let pts = sample_points(5);
    let vals: Vec<Vec<Rational>> = (2..=c.d).map(|k| pts.iter().map(|x| q.get(k).eval(x)).collect()).collect();
    for (j, y) in pts.iter().enumerate() {
        let mut direct = vec![Rational::zero(); pts.len()];
        for n in 2..=c.d {
            let Some(s) = t.fail_on(n, kernel_sum(q, n, y)) else { continue };
            let row = &vals[n - 2];
            for (i, x) in pts.iter().enumerate() {
                direct[i] += &row[i] * &row[j] / q.norm_sq(n);
                t.expect_eq(n, "section equals sum", &direct[i], &s.poly.eval(x));
            }
        }
        for i in 0..pts.len() {
            let swapped = (2..=c.d).fold(Rational::zero(), |acc, k| {
                acc + &vals[k - 2][j] * &vals[k - 2][i] / q.norm_sq(k)
            });
            t.expect_eq(c.d, "symmetry", &direct[i], &swapped);
        }
    }
    t.note("sum starts at k = 2: Q_0 and Q_1 are not part of the family");
    t.finish()
}

const REPR_MAX: usize = 12;

fn reprkernel(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(REPR_MAX);
    let mut t = Tally::new("Reprkernel", 2, to);
    for n in 2..=to {
        for g in admissible_battery(n) {
            if let Some(v) = t.fail_on(n, reproducing_check(&c.fam.q, n, &g)) {
                t.expect(n, "∫K_n(x,t)g(t)dt/(1−t²) = g", v == Verdict::Confirmed);
            }
        }
    }
    t.note("g ranges over fixed polynomials vanishing at ±1 with deg g ≤ n");
    t.finish()
}

fn knn00(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Knn00", 2, c.d);
    t.correction = Some("printed/exact = -(2n-1)/(n+1)".into());
    let mut per_parity = [Verdict::Confirmed; 2];
    for n in 2..=c.d {
        let Some(k) = t.fail_on(n, kernel_at_zero_closed_form(&c.fam.q, n)) else { continue };
        if let (Some(p), Some(r)) = (&k.paper_formula, &k.ratio) {
            t.expect_eq(n, "printed/exact ratio", &kernel_at_zero_expected_ratio(n), r);
            t.record(k.verdict, || witness(Some(n), &[("x", "0"), ("y", "0")], &k.oracle, p));
        } else {
            t.record(Verdict::Failed, || Witness {
                n: Some(n),
                inputs: inputs(&[("check", "printed expression evaluable")]),
                oracle_value: fmt_rational(&k.oracle),
                paper_value: String::new(),
            });
        }
        if n >= 3 && rank(k.verdict) > rank(per_parity[n % 2]) {
            per_parity[n % 2] = k.verdict;
        }
        // the intermediate form with L_n(0), L_{n−1}(0) in place of the binomial sums
        let ni = n as i64;
        let l0 = |m: usize| c.fam.legendre.get(m).eval(&Rational::zero());
        let df = |a: i64, b: i64| {
            Rational::new(crate::rational::double_factorial(a), crate::rational::double_factorial(b))
        };
        let first = if n % 2 == 0 { sign_pow((ni - 2) / 2) * df(ni - 3, ni) * l0(n) } else { Rational::zero() };
        let second = if n % 2 == 1 {
            sign_pow((ni - 1) / 2) * df(ni - 2, ni + 1) * l0(n - 1)
        } else {
            Rational::zero()
        };
        let intermediate = rat(ni * (ni - 1) * (2 * ni - 1), 2) * (first - second);
        if let Some(p) = &k.paper_formula {
            t.expect_eq(n, "L_n(0) form equals binomial form", p, &intermediate);
        }
    }
    t.note("each parity evaluates the term whose sign exponent is an integer; the other term's alternating binomial sum is 0");
    t.note(format!(
        "n = 2: {}; even n ≥ 4: {}; odd n: {}",
        Verdict::ConfirmedUpToSign,
        per_parity[0],
        per_parity[1]
    ));
    t.note("the intermediate form in terms of L_n(0) and L_{n−1}(0) agrees with the binomial form");
    t.finish()
}

const KERNEL_SEQ_MAX: usize = 16;

fn kernel_sections(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(KERNEL_SEQ_MAX);
    let mut t = Tally::new("Kn-sections-orthogonal", 2, to);
    let mut diagonal_zero = true;
    for n in 2..=to {
        for m in n..=to {
            let Some(v) = t.fail_on(n, kernel_sequence_orthogonality(&c.fam.q, n, m)) else { continue };
            if n == m {
                diagonal_zero &= v.is_zero();
            } else if sections_distinct(n, m) {
                t.expect_eq(n, &format!("sections {n}, {m}"), &Rational::zero(), &v);
            }
        }
    }
    if diagonal_zero {
        t.note("K_n(x,0) is even, so the integrand is odd: the integral also vanishes for n = m");
    }
    t.note("K_{2j+1}(x,0) = K_{2j}(x,0), so only distinct sections are compared");
    t.finish()
}

const EXTREMAL_MAX: usize = 16;

fn extremal_range(c: &Ctx) -> usize {
    c.d.min(EXTREMAL_MAX)
}

fn mvalue(c: &Ctx) -> IdentityEntry {
    let to = extremal_range(c);
    let mut t = Tally::new("Mvalue", 2, to);
    for n in 2..=to {
        let Some(b) = t.fail_on(n, brute_force_minimizer(n)) else { continue };
        let s = (2..=n).fold(Rational::zero(), |acc, j| {
            let q0 = c.fam.q.get(j).eval(&Rational::zero());
            acc + &q0 * &q0 / c.fam.q.norm_sq(j)
        });
        t.expect_eq(n, "M = 1/Σ Q_j(0)²/‖Q_j‖²", &b.min_value, &(Rational::one() / s));
        t.expect(n, "minimizer satisfies the constraint", b.poly.eval(&Rational::zero()).is_one());
    }
    t.note("oracle: exact normal equations over p = (1−x²)r, r(0) = 1");
    t.finish()
}

fn solution(c: &Ctx) -> IdentityEntry {
    let to = extremal_range(c);
    let mut t = Tally::new("Solution", 2, to);
    for n in 2..=to {
        let Some(b) = t.fail_on(n, brute_force_minimizer(n)) else { continue };
        let q0 = |j: usize| c.fam.q.get(j).eval(&Rational::zero());
        let s = (2..=n).fold(Rational::zero(), |acc, j| acc + q0(j) * q0(j) / c.fam.q.norm_sq(j));
        let m = Rational::one() / &s;
        let f = (2..=n).fold(PolyExact::zero(), |acc, k| {
            &acc + &c.fam.q.get(k).scale(&(&m * q0(k) / c.fam.q.norm_sq(k)))
        });
        t.expect(n, "f_n equals brute-force minimizer", f == b.poly);
        if let Some(v) = t.fail_on(n, objective(&f)) {
            t.expect_eq(n, "objective at f_n", &m, &v);
        }
    }
    t.note("both printed forms of f_n (with the normalizing sum and with M) coincide");
    t.finish()
}

fn kernelm(c: &Ctx) -> IdentityEntry {
    let to = extremal_range(c);
    let mut t = Tally::new("Kernelm", 2, to);
    for n in 2..=to {
        if let Some(s) = t.fail_on(n, minimize_constrained(&c.fam.q, n)) {
            t.expect_eq(n, "M = 1/K_n(0,0)", &s.oracle_value, &s.min_value);
        }
    }
    t.finish()
}

fn kernelf(c: &Ctx) -> IdentityEntry {
    let to = extremal_range(c);
    let mut t = Tally::new("Kernelf", 2, to);
    for n in 2..=to {
        if let Some(s) = t.fail_on(n, minimize_constrained(&c.fam.q, n)) {
            t.expect(n, "F_n = K_n(x,0)/K_n(0,0)", s.minimizer == s.oracle_minimizer);
        }
    }
    t.finish()
}

fn valuem(c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Valuem-odd-terms", 2, c.d);
    t.correction = Some("sum over even j only".into());
    for n in 2..=c.d {
        let Some(k) = t.fail_on(n, kernel_sum(&c.fam.q, n, &Rational::zero())) else { continue };
        let oracle = Rational::one() / k.value_at_y;
        let printed = valuem_printed(n);
        let corrected = valuem_even_terms(n);
        let v = Verdict::with_correction(&oracle, &printed, &corrected);
        t.record(v, || witness(Some(n), &[("j", "3")], &oracle, &printed));
    }
    t.note(format!(
        "literal double factorials give a nonzero odd-j summand, e.g. j = 3 contributes {}",
        fmt_rational(&valuem_summand_printed(3))
    ));
    t.note("the even-j sum equals K_n(0,0), matching M = 1/K_n(0,0)");
    t.finish()
}

const FOURIER_MAX: usize = 12;

fn fourier_q(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(FOURIER_MAX);
    let mut t = Tally::new("FourierQ", 2, to);
    for g in admissible_battery(to) {
        let n_max = g.degree().unwrap_or(2).max(2);
        let partial = (2..=n_max).fold(PolyExact::zero(), |acc, n| {
            &acc + &c.fam.q.get(n).scale(&fourier_coeff_quadrature(&c.fam.q, &g, n))
        });
        t.expect(n_max, "Σ a_n Q_n reconstructs f", partial == g);
        if let Some(d) = t.fail_on(n_max, parseval_defect(&c.fam.q, &g, n_max)) {
            t.expect_eq(n_max, "Parseval", &Rational::zero(), &d);
        }
    }
    for n in 2..=to {
        for k in 2..=to {
            let a = fourier_coeff_quadrature(&c.fam.q, c.fam.q.get(k), n);
            let want = if n == k { Rational::one() } else { Rational::zero() };
            t.expect_eq(n, &format!("coefficient of Q_{k}"), &want, &a);
        }
    }
    t.finish()
}

fn anex_sign(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(FOURIER_MAX);
    let mut t = Tally::new("anex-sign", 2, to);
    for n in 2..=to {
        for g in admissible_battery(to) {
            let m = fourier_coeff_moments(&g, n);
            let quad = fourier_coeff_quadrature(&c.fam.q, &g, n);
            t.expect_eq(n, "sign-corrected moment formula", &quad, &m.corrected_value);
            let v = Verdict::compare(&quad, &m.paper_value);
            t.record(v, || {
                let gs = g.to_string();
                witness(Some(n), &[("f", &gs)], &quad, &m.paper_value)
            });
        }
    }
    t.note("the printed (−1)^n factor is spurious: the integrated form holds without it whenever f(±1) = 0");
    t.note("the binomial sum runs over k = 0 … n−1; the printed upper limit n adds a vacuous term");
    t.finish()
}

fn akk(c: &Ctx) -> IdentityEntry {
    let to = c.d.min(FOURIER_MAX);
    let mut t = Tally::new("akk", 2, to);
    let mut signs = Vec::new();
    for k in 2..=to {
        let m = monomial_coeff_closed_form(&c.fam.q, k);
        let v = Verdict::compare(&m.moment_functional_value, &m.paper_value);
        if v == Verdict::Failed {
            t.record(v, || witness(Some(k), &[], &m.moment_functional_value, &m.paper_value));
        }
        signs.push(format!("k={k}:{}", if v == Verdict::Confirmed { "+" } else { "-" }));
    }
    let k2 = monomial_coeff_closed_form(&c.fam.q, 2);
    if t.verdict != Verdict::Failed {
        t.verdict = Verdict::ConfirmedUpToSign;
        t.witness = Some(witness(
            Some(2),
            &[
                ("f", "x^2"),
                ("moment_functional", &fmt_rational(&k2.moment_functional_value)),
            ],
            &k2.quadrature_value,
            &k2.paper_value,
        ));
    }
    t.note("|printed| equals the moment-functional value for every k; the printed sign is wrong at odd k");
    t.note(format!("sign of printed relative to moment functional: {}", signs.join(" ")));
    t.note("x^k does not vanish at ±1, so the value is not its Fourier coefficient: at k = 2 the coefficient is -1");
    t.finish()
}

fn wffff(_c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("wffff", 0, 0);
    for m in test_maps() {
        let w = induced_weight(&m);
        t.expect(0, "φ = (1−f²)f′", w.matches_derivative_form(&m));
        if let Ok(e) = induced_endpoints(&m) {
            t.expect(0, "φ(a) = φ(b) = 0", w.numerator.eval(&e.a).is_zero() && w.numerator.eval(&e.b).is_zero());
        }
    }
    t.note("exact cross-multiplied identity on 5 maps; also covers φ/f′ = 1−f²");
    t.finish()
}

const MOEBIUS_MAX: usize = 8;
const GRAM_TOL: f64 = 1e-11;

fn moebius_orthogonality(_c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("Moebius-orthogonality", 0, MOEBIUS_MAX);
    let mut worst_rel = 0.0f64;
    let mut worst_sub = 0.0f64;
    for m in test_maps() {
        let Some(sys) = t.fail_on(0, TransformedSystem::new(m, MOEBIUS_MAX)) else { continue };
        let Some(g) = t.fail_on(0, gram_matrix(&sys, MOEBIUS_MAX, GRAM_TOL * 0.1)) else { continue };
        worst_rel = worst_rel.max(g.max_offdiag_relative);
        worst_sub = worst_sub.max(g.max_substitution_error);
        t.expect(MOEBIUS_MAX, "relative off-diagonal < 1e-11", g.max_offdiag_relative < GRAM_TOL);
        t.expect(MOEBIUS_MAX, "substitution consistency < 1e-11", g.max_substitution_error < GRAM_TOL);
    }
    t.note(format!(
        "5 maps, Gauss–Legendre: max relative off-diagonal {worst_rel:.1e}, max substitution error {worst_sub:.1e}"
    ));
    t.finish()
}

fn minimality(_c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("In", 1, MOEBIUS_MAX);
    for m in test_maps() {
        let Some(sys) = t.fail_on(0, TransformedSystem::new(m, MOEBIUS_MAX)) else { continue };
        for n in 1..=MOEBIUS_MAX {
            if let Some(r) = t.fail_on(n, minimality_check(&sys, n, 1e-14)) {
                t.expect(n, "r_n minimizes I_n among monic perturbations", r.verdict == Verdict::Confirmed);
            }
        }
    }
    t.note("perturbations r_n + ε r_j, j < n, ε ∈ {±1/4, ±1/16}, monic r_n");
    t.finish()
}

fn endpoints(_c: &Ctx) -> IdentityEntry {
    let mut t = Tally::new("endpoints-§4", 0, 0);
    t.correction = Some("lower endpoint -(α+β)/(λ+μ)".into());
    let mut witness_set = false;
    for m in test_maps() {
        let Some(e) = t.fail_on(0, induced_endpoints(&m)) else { continue };
        t.expect(0, "f(a) = −1", m.eval(&e.a) == Some(int(-1)));
        t.expect(0, "f(b) = 1", m.eval(&e.b) == Some(int(1)));
        t.expect(0, "printed upper endpoint", e.paper_b == e.b);
        let shift = m.lambda.is_one() && m.alpha.is_one() && m.mu.is_zero() && m.beta.is_one();
        if shift && e.paper_a != e.a && !witness_set {
            witness_set = true;
            t.record(Verdict::CorrectedFactor, || Witness {
                n: None,
                inputs: inputs(&[("map", "(1,1,0,1)")]),
                oracle_value: fmt_rational(&e.a),
                paper_value: fmt_rational(&e.paper_a),
            });
        }
    }
    if !witness_set {
        t.record(Verdict::Failed, || Witness {
            n: None,
            inputs: inputs(&[("map", "(1,1,0,1)")]),
            oracle_value: "discrepancy".into(),
            paper_value: "none found".into(),
        });
    }
    t.note("the printed upper endpoint (β−α)/(λ−μ) is correct; the printed lower one solves f = +1 only when α = β");
    t.finish()
}

const REGISTRY: &[Check] = &[
    difln,
    expp,
    orth_ln,
    ln_recurrence,
    lnat1,
    lnat0,
    l2nat0,
    derilnat0,
    lnderivat0,
    qqn,
    defi1,
    qqn1,
    qnderiv1,
    diff2,
    diff3,
    rodrigues,
    second,
    gener_integ_parts,
    pipcirs2,
    pipcirs3,
    orth_qn,
    norm_qn,
    q_leading,
    pipcir_inflection,
    qnatzero,
    cds11,
    kern,
    reprkernel,
    knn00,
    kernel_sections,
    mvalue,
    solution,
    kernelm,
    kernelf,
    valuem,
    fourier_q,
    anex_sign,
    akk,
    wffff,
    moebius_orthogonality,
    minimality,
    endpoints,
];

/// Runs every registered identity up to `max_degree` (4 ..= 64).
pub fn run_registry(max_degree: usize) -> Result<IdentityReport> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&max_degree) {
        return Err(crate::Error::OutOfRange(format!(
            "max degree {max_degree} outside {MIN_DEGREE}..={MAX_DEGREE}"
        )));
    }
    let ctx = Ctx {
        fam: Family::new(max_degree + 1)?,
        d: max_degree,
    };
    let mut entries: Vec<IdentityEntry> = REGISTRY.par_iter().map(|check| check(&ctx)).collect();
    entries.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    Ok(IdentityReport {
        schema: SCHEMA_VERSION,
        max_degree,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn integration_by_parts_zero() {
        let u = PolyExact::from_i64(&[1, 2, 0, -1]);
        let v = PolyExact::from_i64(&[0, 3, 1, 1, 2]);
        for n in 0..=5 {
            assert!(integration_by_parts_residual(&u, &v, n).is_zero());
        }
    }

    #[test]
    fn printed_exp_qnn_is_negated() {
        let f = Family::new(8).unwrap();
        for n in 2..=8 {
            assert_eq!(exp_qnn_printed(n), -f.q.get(n));
        }
    }

    #[test]
    fn sample_pairs_are_off_diagonal() {
        assert!(sample_pairs(20).iter().all(|(x, y)| x != y));
        assert!(sample_points(7).iter().all(|x| *x > int(-1) && *x < int(1)));
    }

    #[test]
    fn small_registry() {
        let r = run_registry(6).unwrap();
        let ids: Vec<_> = r.entries.iter().map(|e| e.identity_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(ids.iter().collect::<BTreeSet<_>>().len(), ids.len());
        let non_confirmed: BTreeSet<_> = r
            .entries
            .iter()
            .filter(|e| e.verdict != Verdict::Confirmed)
            .map(|e| e.identity_id.as_str())
            .collect();
        let expected: BTreeSet<_> = [
            "Qnatzero",
            "CDS11-prefactor",
            "anex-sign",
            "akk",
            "Knn00",
            "Valuem-odd-terms",
            "endpoints-§4",
        ]
        .into_iter()
        .collect();
        assert_eq!(non_confirmed, expected, "{:#?}", r.entries);
        assert!(!r.any_failed());
        for e in &r.entries {
            if e.verdict != Verdict::Confirmed {
                assert!(e.witness.is_some(), "{}", e.identity_id);
            }
        }
    }

    #[test]
    fn degree_bounds() {
        assert!(run_registry(3).is_err());
        assert!(run_registry(65).is_err());
    }
}
