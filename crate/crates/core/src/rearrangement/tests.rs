use approx::assert_relative_eq;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

type Yf = YoungFunction<f64>;
type Step = StepFunction<f64>;

fn samples(pairs: &[(f64, f64)]) -> MeasureSamples<f64> {
    MeasureSamples::new(pairs.to_vec()).unwrap()
}

fn two_block() -> Step {
    Step::new(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap()
}

fn random_samples(rng: &mut ChaCha8Rng, n: usize) -> MeasureSamples<f64> {
    let pairs = (0..n).map(|_| (rng.gen_range(0.0..5.0), rng.gen_range(0.01..2.0))).collect();
    MeasureSamples::new(pairs).unwrap()
}

fn random_step(rng: &mut ChaCha8Rng) -> Step {
    let n = rng.gen_range(1..40);
    rearrange(&random_samples(rng, n))
}

/// `inf{s ≥ 0 : λ_s ≤ t}` by scanning the candidate levels of the raw samples.
fn brute_mu(s: &MeasureSamples<f64>, t: f64) -> f64 {
    let mut cands: Vec<f64> = s.pairs().iter().map(|p| p.0).collect();
    cands.push(0.0);
    cands.into_iter().filter(|c| distribution(s, *c) <= t).fold(f64::INFINITY, f64::min)
}

#[test]
fn distribution_examples() {
    let s = samples(&[(3.0, 1.0), (1.0, 2.0)]);
    assert_eq!(distribution(&s, 2.0), 1.0);
    assert_eq!(distribution(&s, 0.5), 3.0);
    assert_eq!(distribution(&s, 5.0), 0.0);
}

#[test]
fn rearrange_examples() {
    let mu = rearrange(&samples(&[(3.0, 1.0), (1.0, 2.0)]));
    assert_eq!(mu.values(), &[3.0, 1.0]);
    assert_eq!(mu.breaks(), &[1.0, 3.0]);
    let empty = rearrange(&samples(&[]));
    assert!(empty.is_zero());
    assert_eq!(empty.eval(0.0), 0.0);
    let merged = rearrange(&samples(&[(2.0, 1.0), (2.0, 0.5), (1.0, 1.0)]));
    assert_eq!(merged.values(), &[2.0, 1.0]);
    assert_eq!(merged.breaks(), &[1.5, 2.5]);
}

#[test]
fn rearrange_matches_inf_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = random_samples(&mut rng, 1000);
    let mu = rearrange(&s);
    let total = *mu.breaks().last().unwrap();
    for k in 0..100 {
        let t = total * (k as f64 + 0.5) / 100.0 * 1.05;
        assert_eq!(mu.eval(t), brute_mu(&s, t), "t = {t}");
    }
}

#[test]
fn orlicz_norm_examples() {
    let square = Yf::power(2.0);
    let ind = Step::indicator(4.0, 1.0);
    assert_relative_eq!(orlicz_norm(&ind, &square).unwrap(), 2.0, max_relative = 1e-12);
    assert_relative_eq!(orlicz_norm(&ind, &square).unwrap(), 1.0 / square.left_inverse(0.25), max_relative = 1e-12);
    assert_relative_eq!(orlicz_norm(&two_block(), &square).unwrap(), 5f64.sqrt(), max_relative = 1e-12);

    // (1/c²) log(1 + 1/c) = 1 by bisection on a bracket where the left side decreases.
    let g = |c: f64| (1.0 / c).ln_1p() / (c * c) - 1.0;
    let (mut lo, mut hi) = (0.1f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let got = orlicz_norm(&Step::indicator(1.0, 1.0), &Yf::power_log(2.0, 1.0)).unwrap();
    assert_relative_eq!(got, hi, max_relative = 1e-12);
    assert_eq!(orlicz_norm(&Step::zero(), &square).unwrap(), 0.0);
}

#[test]
fn indicator_closed_form_for_several_families() {
    for phi in [Yf::power(3.0), Yf::power_log(2.0, 1.0), Yf::piecewise_power(1.5, 2.5, 0.7)] {
        for m in [0.25, 1.0, 7.0] {
            let ind = Step::indicator(m, 1.0);
            let closed = 1.0 / phi.left_inverse(1.0 / m);
            assert_relative_eq!(orlicz_norm(&ind, &phi).unwrap(), closed, max_relative = 1e-9);
            assert_relative_eq!(weak_orlicz_norm(&ind, &phi).unwrap(), closed, max_relative = 1e-9);
        }
    }
}

#[test]
fn weak_norm_examples() {
    for m in [0.5, 3.0] {
        let ind = Step::indicator(m, 1.0);
        for p in [1.0, 2.0, 3.5] {
            assert_relative_eq!(weak_orlicz_norm(&ind, &Yf::power(p)).unwrap(), m.powf(1.0 / p), max_relative = 1e-12);
            assert_relative_eq!(weak_lp_norm(&ind, p), m.powf(1.0 / p), max_relative = 1e-15);
        }
    }
    assert_eq!(weak_lp_norm(&two_block(), 1.0), 2.0);
}

#[test]
fn weak_orlicz_matches_blockwise_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = Yf::power_log(2.0, 1.0);
    for _ in 0..50 {
        let mu = random_step(&mut rng);
        let oracle = mu
            .breaks()
            .iter()
            .zip(mu.values())
            .filter(|(_, v)| **v > 0.0)
            .map(|(t, v)| v / phi.left_inverse(1.0 / t))
            .fold(0.0, f64::max);
        assert_relative_eq!(weak_orlicz_norm(&mu, &phi).unwrap(), oracle, max_relative = 1e-12);
    }
}

#[test]
fn lp_norm_examples() {
    assert_relative_eq!(lp_norm(&two_block(), 2.0), 5f64.sqrt(), max_relative = 1e-15);
    assert_eq!(lp_norm(&two_block(), f64::INFINITY), 2.0);
}

#[test]
fn orlicz_power_agrees_with_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let mu = random_step(&mut rng);
        for p in [1.0, 2.0, 3.0] {
            let phi = Yf::power(p);
            assert_relative_eq!(orlicz_norm(&mu, &phi).unwrap(), lp_norm(&mu, p), max_relative = 1e-9);
            assert_relative_eq!(weak_orlicz_norm(&mu, &phi).unwrap(), weak_lp_norm(&mu, p), max_relative = 1e-9);
        }
    }
}

#[test]
fn singular_value_examples() {
    let d = OperatorMatrix::<f64>::diagonal(&[3.0, -1.0]);
    let s = singular_values(&d);
    assert_eq!(s.values(), &[3.0, 1.0]);
    assert_eq!(s.breaks(), &[1.0, 2.0]);
    let mut nil = OperatorMatrix::<f64>::zeros(2);
    nil[(0, 1)] = Complex::new(2.0, 0.0);
    let s = singular_values(&nil);
    assert_eq!(s.values()[0], 2.0);
    assert_eq!(s.eval(1.5), 0.0);
}

/// Faddeev–LeVerrier coefficients of det(λI − G), highest degree first.
fn char_poly(g: &OperatorMatrix<f64>) -> Vec<f64> {
    let n = g.dim();
    let mut coeffs = vec![1.0];
    let mut m = OperatorMatrix::<f64>::zeros(n);
    let id = OperatorMatrix::<f64>::identity(n);
    let mut c = 1.0;
    for k in 1..=n {
        m = &(g * &m) + &id.scale_real(c);
        let gm = g * &m;
        c = -gm.trace().re / k as f64;
        coeffs.push(c);
    }
    coeffs
}

#[test]
fn singular_values_match_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let data = (0..16).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = OperatorMatrix::from_rows(4, data).unwrap();
        let g = &a.adjoint() * &a;
        let poly = char_poly(&g);
        let sigma = a.svd().sigma;
        for s in &sigma {
            let x = s * s;
            let (p, dp) = poly.iter().fold((0.0, 0.0), |(p, dp), c| (p * x + c, dp * x + p));
            // Newton correction is the distance to the nearest root to first order.
            assert!((p / dp).abs() <= 1e-9 * x.max(1e-3), "sigma^2 = {x}, step {}", p / dp);
        }
        let sum: f64 = sigma.iter().map(|s| s * s).sum();
        let prod: f64 = sigma.iter().map(|s| s * s).product();
        assert_relative_eq!(sum, -poly[1], max_relative = 1e-12);
        assert_relative_eq!(prod, poly[4], max_relative = 1e-9);
    }
}

#[test]
fn csv_roundtrip() {
    let mu = two_block();
    let mut buf = Vec::new();
    mu.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with("t_break,value\n"));
    assert_eq!(Step::read_csv(buf.as_slice()).unwrap(), mu);
    assert!(Step::read_csv("t_break,value\n1,1\n2,3\n".as_bytes()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equimeasurable(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..60);
        let s = random_samples(&mut rng, n);
        let mu = rearrange(&s);
        prop_assert!(mu.values().windows(2).all(|w| w[0] > w[1]));
        for _ in 0..100 {
            let a = rng.gen_range(0.0..5.5);
            let d = distribution(&s, a);
            prop_assert!((d - mu.distribution(a)).abs() <= 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn norm_axioms(seed in 0u64..100_000, a in 0.01f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = Yf::power_log(2.0, 1.0);
        let mu = random_step(&mut rng);
        let n = orlicz_norm(&mu, &phi).unwrap();
        let w = weak_orlicz_norm(&mu, &phi).unwrap();
        prop_assert!(w <= n * (1.0 + 1e-12));
        prop_assert!((orlicz_norm(&mu.scale(a), &phi).unwrap() - a * n).abs() <= 1e-10 * a * n);
        prop_assert!(modular(&mu, &phi, n * 0.999) >= modular(&mu, &phi, n * 1.001));
    }

    #[test]
    fn triangle_inequality_on_shared_partition(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..30);
        let cells: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.5)).collect();
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let norm = |vals: Vec<f64>, phi: &Yf| {
            let pairs = vals.iter().zip(&cells).map(|(v, m)| (v.abs(), *m)).collect();
            orlicz_norm(&rearrange(&MeasureSamples::new(pairs).unwrap()), phi).unwrap()
        };
        for phi in [Yf::power(1.5), Yf::power_log(2.0, 1.0), Yf::piecewise_power(1.0, 3.0, 2.0)] {
            let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
            let lhs = norm(sum, &phi);
            let rhs = norm(f.clone(), &phi) + norm(g.clone(), &phi);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
