use num_traits::{One, Signed, Zero};
use pipcir::approx::{
    fourier_coeff_moments, fourier_coeff_quadrature, minimize_constrained, monomial_coeff_closed_form,
    objective, parseval_defect,
};
use pipcir::kernel::{kernel_cd, kernel_eval, kernel_sum, reproducing_check};
use pipcir::moebius::{induced_endpoints, induced_weight, increasing_on_interval, MoebiusMap, TransformedSystem};
use pipcir::pipcir::{q_at_zero, q_eval, q_roots, weighted_inner_product};
use pipcir::quad::gauss_legendre;
use pipcir::rational::{double_factorial, int, rat, to_f64};
use pipcir::{Family, PolyExact, Rational, Verdict};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn family() -> &'static Family {
    static F: OnceLock<Family> = OnceLock::new();
    F.get_or_init(|| Family::new(41).unwrap())
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn interior_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40).prop_map(|p| rat(p, 41))
}

fn poly(max_deg: usize) -> impl Strategy<Value = PolyExact> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(PolyExact::from_coeffs)
}

/// (1−x²)h, which vanishes at ±1.
fn admissible(max_deg: usize) -> impl Strategy<Value = PolyExact> {
    poly(max_deg - 2).prop_map(|h| &PolyExact::from_i64(&[1, 0, -1]) * &h)
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=9))
}

#[test]
fn legendre_norm_ratio() {
    let l = &family().legendre;
    let norm = |n: usize| (l.get(n) * l.get(n)).definite_integral(&int(-1), &int(1));
    for n in 1..=40 {
        let ni = n as i64;
        assert_eq!(norm(n), rat(2 * ni - 1, 2 * ni + 1) * norm(n - 1), "n = {n}");
    }
}

#[test]
fn q_at_zero_magnitudes() {
    let q = &family().q;
    for n in 2..=40 {
        let z = q_at_zero(q, n);
        if n % 2 == 1 {
            assert!(z.oracle.is_zero());
        } else {
            let ni = n as i64;
            let mag = Rational::new(double_factorial(ni - 3), double_factorial(ni));
            assert_eq!(z.oracle.abs(), mag, "n = {n}");
            assert_eq!(z.verdict, Verdict::ConfirmedUpToSign);
        }
    }
}

#[test]
fn weighted_orthogonality_full_range() {
    let q = &family().q;
    for n in 2..=40 {
        for m in 2..=n {
            let v = weighted_inner_product(q.get(n), q.get(m)).unwrap();
            if n == m {
                let ni = n as i64;
                assert_eq!(v, rat(2, ni * (ni - 1) * (2 * ni - 1)));
            } else {
                assert!(v.is_zero(), "({n},{m})");
            }
        }
    }
}

#[test]
fn interior_roots_are_inflection_points() {
    for n in 2..=40 {
        let r = q_roots::<f64>(n).unwrap();
        assert_eq!(r.len(), n);
        assert_eq!((r[0], r[n - 1]), (-1.0, 1.0));
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        for &x in &r[1..n - 1] {
            let (_, _, d2) = q_eval(n, x);
            assert!((d2 / (n * n) as f64).abs() < 1e-9, "n = {n}, x = {x}");
        }
    }
}

#[test]
fn extremal_competitors_never_win() {
    let q = &family().q;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let one_minus = PolyExact::from_i64(&[1, 0, -1]);
    for n in 2..=10 {
        let m = minimize_constrained(q, n).unwrap().min_value;
        for _ in 0..50 {
            let mut r: Vec<Rational> = (0..=n - 2).map(|_| random_rat(&mut rng)).collect();
            if r[0].is_zero() {
                r[0] = Rational::one();
            }
            let c0 = r[0].clone();
            let p = (&one_minus * &PolyExact::from_coeffs(r)).scale(&(Rational::one() / c0));
            assert!(p.eval(&int(0)).is_one());
            assert!(objective(&p).unwrap() >= m);
        }
    }
}

#[test]
fn monomial_magnitude_identity() {
    let q = &family().q;
    for k in 2..=12 {
        let c = monomial_coeff_closed_form(q, k);
        assert_eq!(c.paper_value.abs(), c.moment_functional_value.abs());
        let same_sign = c.paper_value == c.moment_functional_value;
        assert_eq!(same_sign, k % 2 == 0, "k = {k}");
    }
}

#[test]
fn quadrature_monomial_exactness() {
    for m in [2usize, 3, 8, 32, 128] {
        let rule = gauss_legendre::<f64>(m).unwrap();
        for d in 0..=2 * m - 1 {
            let got = rule.apply(|x| x.powi(d as i32));
            let want = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
            assert!((got - want).abs() <= 1e-13 * want.abs().max(1e-2), "m={m} d={d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_reproduces_exact_integrals(p in poly(15)) {
        let rule = gauss_legendre::<f64>(8).unwrap();
        let pf = p.to_float::<f64>();
        let got = rule.apply(|x| pf.eval(&x));
        let want = to_f64(&p.definite_integral(&int(-1), &int(1)));
        let scale = p.coeffs().iter().map(|c| to_f64(c).abs()).sum::<f64>().max(1.0);
        prop_assert!((got - want).abs() <= 1e-13 * scale);
    }

    #[test]
    fn kernel_symmetry(x in small_rat(), y in small_rat(), n in 2usize..=20) {
        let q = &family().q;
        prop_assert_eq!(kernel_eval(q, n, &x, &y).unwrap(), kernel_eval(q, n, &y, &x).unwrap());
    }

    #[test]
    fn corrected_cd_equals_sum(x in interior_rat(), y in small_rat(), n in 2usize..=20) {
        prop_assume!(x != y);
        let c = kernel_cd(&family().q, n, &x, &y).unwrap();
        prop_assert_eq!(&c.corrected_value, &c.oracle);
        prop_assert_eq!(c.factor, rat(n as i64 + 1, 2 * n as i64 - 1));
    }

    #[test]
    fn shifted_section_is_reproduced(n in 2usize..=12, extra in 1usize..=3) {
        let q = &family().q;
        let k = kernel_sum(q, n, &Rational::zero()).unwrap().poly;
        let g = &PolyExact::x() * &k;
        prop_assert_eq!(reproducing_check(q, n + extra, &g).unwrap(), Verdict::Confirmed);
    }

    #[test]
    fn reproducing_property(g in admissible(12)) {
        let q = &family().q;
        let n = g.degree().unwrap_or(2).max(2);
        prop_assert_eq!(reproducing_check(q, n, &g).unwrap(), Verdict::Confirmed);
    }

    #[test]
    fn parseval_on_span(coeffs in prop::collection::vec(small_rat(), 1..=11)) {
        let q = &family().q;
        let n_max = coeffs.len() + 1;
        let f = coeffs.iter().enumerate().fold(PolyExact::zero(), |acc, (i, a)| &acc + &q.get(i + 2).scale(a));
        prop_assert!(parseval_defect(q, &f, n_max).unwrap().is_zero());
        for (i, a) in coeffs.iter().enumerate() {
            prop_assert_eq!(&fourier_coeff_quadrature(q, &f, i + 2), a);
        }
    }

    #[test]
    fn moment_formula_matches_quadrature(g in admissible(12), n in 2usize..=12) {
        let q = &family().q;
        prop_assert_eq!(fourier_coeff_moments(&g, n).corrected_value, fourier_coeff_quadrature(q, &g, n));
    }

    #[test]
    fn weight_identity_random_maps(l in small_rat(), m in small_rat(), a in small_rat()) {
        prop_assume!(!l.is_zero());
        let b = (Rational::one() + &m * &a) / &l;
        let map = MoebiusMap::new(l, a, m, b).unwrap();
        prop_assert!(induced_weight(&map).matches_derivative_form(&map));
    }

    #[test]
    fn accepted_maps_are_increasing(l in small_rat(), m in small_rat(), a in small_rat()) {
        prop_assume!(!l.is_zero());
        let b = (Rational::one() + &m * &a) / &l;
        let map = MoebiusMap::new(l, a, m, b).unwrap();
        if let Ok(sys) = TransformedSystem::new(map.clone(), 1) {
            let e = induced_endpoints(&map).unwrap();
            prop_assert!(e.a < e.b);
            prop_assert!(increasing_on_interval(&map, &e));
            prop_assert_eq!(sys.endpoints, e);
        }
    }
}
