#![allow(clippy::approx_constant)]

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::solve::log_grid;

type Yf = YoungFunction<f64>;

fn pl21() -> Yf {
    Yf::power_log(2.0, 1.0)
}

/// Plain bisection in t, independent of the library's log-space Newton.
fn bisect_inverse(f: impl Fn(f64) -> f64, s: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi) < s {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= s {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Ratio `t Φ'₊/Φ` by forward differences on a coarse grid of its own.
fn ratio_oracle(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut q, mut p) = (f64::INFINITY, 0.0f64);
    for k in 0..=4000 {
        let t = 10f64.powf(-8.0 + 16.0 * k as f64 / 4000.0);
        let h = t * 1e-6;
        let r = t * (f(t + h) - f(t)) / (h * f(t));
        q = q.min(r);
        p = p.max(r);
    }
    (q, p)
}

#[test]
fn evaluate_examples() {
    assert_eq!(Yf::power(2.0).evaluate(3.0), 9.0);
    assert_eq!(pl21().evaluate(0.0), 0.0);
    assert_relative_eq!(pl21().evaluate(1.0), 2f64.ln(), max_relative = 1e-15);
    assert_relative_eq!(pl21().evaluate(1.0), 0.693147, epsilon = 1e-6);
}

#[test]
fn left_inverse_examples() {
    assert_relative_eq!(Yf::power(2.0).left_inverse(9.0), 3.0, max_relative = 1e-15);
    for phi in [Yf::power(2.0), pl21(), Yf::piecewise_power(2.0, 3.0, 1.0)] {
        assert_eq!(phi.left_inverse(0.0), 0.0);
    }
    let t = pl21().left_inverse(0.693147);
    assert!((t - 1.0).abs() < 1e-6, "{t}");
    let exact = pl21().left_inverse(2f64.ln());
    assert!((exact - 1.0).abs() < 1e-9, "{exact}");
}

#[test]
fn power_log_inverse_matches_bisection() {
    let phi = pl21();
    for s in [1e-12, 1e-6, 0.3, 1.0, 7.5, 1e4, 1e10] {
        let oracle = bisect_inverse(|t| t * t * t.ln_1p(), s);
        assert_relative_eq!(phi.left_inverse(s), oracle, max_relative = 1e-12);
    }
}

#[test]
fn exponent_examples() {
    for p in [1.1, 4.0 / 3.0, 2.0, 3.0, 10.0] {
        assert_eq!(exponents(&Yf::power(p)).unwrap(), (p, p));
    }
    let (q, p) = exponents(&pl21()).unwrap();
    assert!((q - 2.0).abs() < 1e-3 && (p - 3.0).abs() < 1e-3);
    // The ratio 2 + t/((1+t)log(1+t)) only reaches 3 at 0 and 2 at infinity; the
    // grid sees the supremum but the log factor decays too slowly for the infimum,
    // so the oracle checks monotone decrease towards the analytic limit instead.
    let (oq, op) = ratio_oracle(|t| t * t * t.ln_1p());
    assert!((op - 3.0).abs() < 1e-3);
    assert!(oq > 2.0 && oq < 2.06);
    let tail = |t: f64| 2.0 + 1.0 / ((1.0 + 1.0 / t) * t.ln_1p());
    assert!(tail(1e100) < tail(1e8) && tail(1e300) - 2.0 < 2e-3);

    let pw = Yf::piecewise_power(2.0, 3.0, 1.0);
    assert_eq!(exponents(&pw).unwrap(), (2.0, 3.0));
    let (oq, op) = ratio_oracle(|t| if t <= 1.0 { t * t } else { t * t * t });
    assert!((oq - 2.0).abs() < 1e-3 && (op - 3.0).abs() < 1e-3);
}

#[test]
fn sampled_exponents_follow_the_grid() {
    let sampled = to_sampled(&pl21(), 4001).unwrap();
    let (q, p) = exponents(&sampled).unwrap();
    let (oq, op) = ratio_oracle(|t| t * t * t.ln_1p());
    assert!((q - oq).abs() < 1e-3 && (p - op).abs() < 1e-3, "{q} {p}");
}

#[test]
fn delta2_examples() {
    assert!(is_delta2(&Yf::power(2.0)));
    assert!(is_delta2(&pl21()));
    let t: Vec<f64> = log_grid(1e-8, 1e8, 4001);
    let values: Vec<f64> = t.iter().map(|x| x.exp_m1()).collect();
    assert!(values.iter().any(|v| v.is_infinite()));
    let expo = Yf::sampled(t, values).unwrap();
    assert!(!is_delta2(&expo));
    assert_eq!(exponents(&expo).unwrap().1, f64::INFINITY);
}

#[test]
fn scaled_exponents_scale_by_r() {
    let phi = Yf::scaled(pl21(), 0.5);
    assert_eq!(phi.r(), 0.5);
    assert_eq!(exponents(&phi).unwrap(), (1.0, 1.5));
    let (oq, op) = ratio_oracle(|t| t * t.sqrt().ln_1p());
    assert!(oq > 1.0 && (op - 1.5).abs() < 1e-3);
    let (iq, ip) = ratio_oracle(|t| t * t * t.ln_1p());
    let (sq, sp) = ratio_oracle(|t| t * t.sqrt().ln_1p());
    // Same ratio function, seen at t^r; on [1e-8, 1e8] the scaled grid covers less of it.
    assert!((sp - 0.5 * ip).abs() < 1e-3 && sq >= 0.5 * iq - 1e-3);
    assert_eq!(Yf::scaled(Yf::power(3.0), 0.5), Yf::power(1.5));
}

#[test]
fn interpolate_examples() {
    let half = SimplexPoint::new(vec![0.5, 0.5]).unwrap();
    let r = interpolate(&[Yf::power(2.0), Yf::power(4.0)], &half).unwrap();
    assert_eq!(r, Yf::power(8.0 / 3.0));
    let one = SimplexPoint::new(vec![1.0]).unwrap();
    assert_eq!(interpolate(&[pl21()], &one).unwrap(), pl21());
    let w = SimplexPoint::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
    let Family::Power { p } = *interpolate(&[Yf::power(2.0), Yf::power(1.0)], &w)
        .unwrap()
        .family()
    else {
        panic!("expected a power");
    };
    assert_relative_eq!(p, 1.5, max_relative = 1e-15);
    assert!(matches!(
        interpolate(&[Yf::power(2.0)], &half),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn interpolated_inverse_is_product_of_inverses() {
    let phis = [pl21(), Yf::power(3.0), Yf::piecewise_power(1.5, 2.5, 2.0)];
    let theta = SimplexPoint::new(vec![0.2, 0.3, 0.5]).unwrap();
    let r = interpolate(&phis, &theta).unwrap();
    for s in [1e-7, 1e-2, 1.0, 3.0, 1e5] {
        let expect = phis
            .iter()
            .zip(theta.theta())
            .map(|(f, w)| f.left_inverse(s).powf(*w))
            .product::<f64>();
        assert_relative_eq!(r.left_inverse(s), expect, max_relative = 1e-13);
        // Evaluation inverts the product.
        assert_relative_eq!(r.evaluate(r.left_inverse(s)), s, max_relative = 1e-12);
    }
}

#[test]
fn theta_solver_examples() {
    let t = theta_solver(&[Yf::power(4.0 / 3.0), Yf::power(4.0 / 3.0)]).unwrap();
    assert_relative_eq!(t.theta()[0], 0.5, max_relative = 1e-15);
    assert_relative_eq!(t.theta()[1], 0.5, max_relative = 1e-15);
    assert!(matches!(
        theta_solver(&[Yf::power(2.0), Yf::power(2.0)]),
        Err(Error::ConditionViolated { .. })
    ));
    for bad in [[1.5, 3.0, 3.0], [1.5, 6.0, 6.0]] {
        let psis: Vec<Yf> = bad.iter().map(|p| Yf::power(*p)).collect();
        assert!(matches!(
            theta_solver(&psis),
            Err(Error::ConditionViolated { .. })
        ));
    }
    // m = (1/10, 1/5, 1/4), slack 9/20 split by 1/p = (9/10, 4/5, 3/4) / (49/20).
    let psis: Vec<Yf> = [10.0 / 9.0, 1.25, 4.0 / 3.0]
        .iter()
        .map(|p| Yf::power(*p))
        .collect();
    let t = theta_solver(&psis).unwrap();
    for (got, want) in t
        .theta()
        .iter()
        .zip([13.0 / 49.0, 17.0 / 49.0, 19.0 / 49.0])
    {
        assert_relative_eq!(*got, want, max_relative = 1e-14);
    }
    assert!(matches!(
        theta_solver(&[Yf::power(1.0)]),
        Err(Error::ExponentOutOfRange { .. })
    ));
}

#[test]
fn construct_phi_examples() {
    assert_eq!(
        construct_phi(&Yf::power(4.0 / 3.0), 0.5).unwrap(),
        Yf::power(2.0)
    );
    let p = 3.0;
    let eps = 1e-3;
    let theta = 1.0 - 1.0 / p + eps;
    let Family::Power { p: got } = *construct_phi(&Yf::power(p), theta).unwrap().family() else {
        panic!("expected a power");
    };
    assert_relative_eq!(got, theta / eps, max_relative = 1e-9);
    assert!(matches!(
        construct_phi(&Yf::power(2.0), 0.25),
        Err(Error::InfeasibleTheta { .. })
    ));
}

#[test]
fn young_relation_examples() {
    let psis = [Yf::power(4.0 / 3.0), Yf::power(4.0 / 3.0)];
    assert!(verify_young_relation(&Yf::power(2.0), &psis) <= 1e-12);
    let bad = [Yf::power(2.0), Yf::power(2.0)];
    assert!(verify_young_relation(&Yf::power(2.0), &bad) > 1e-3);
}

#[test]
fn pipeline_reproduces_target() {
    let psis = [pl21().clone(), Yf::power(1.2)];
    // p = (3, 1.2): 1/3 + 5/6 > 1.
    let psi0 = young_relation_target(&psis).unwrap();
    assert!(verify_young_relation(&psi0, &psis) <= 1e-12);
    let theta = theta_solver(&psis).unwrap();
    let phis: Vec<Yf> = psis
        .iter()
        .zip(theta.theta())
        .map(|(psi, t)| construct_phi(psi, *t).unwrap())
        .collect();
    for phi in &phis {
        let (q, p) = exponents(phi).unwrap();
        assert!(1.0 < q && q <= p && p.is_finite(), "{q} {p}");
    }
    let back = interpolate(&phis, &theta).unwrap();
    assert!(verify_young_relation(&back, &psis) <= 1e-8);
}

#[test]
fn collapse_identity_examples() {
    assert!(collapse_identity_check(&Yf::power(2.0), 0.5, 0.5).unwrap() <= 1e-12);
    assert!(collapse_identity_check(&pl21(), 0.3, 0.7).unwrap() <= 1e-10);
    let lin = Yf::power(1.0);
    let lim = interpolate_pair(&interpolate_pair(&lin, &pl21(), 0.4).unwrap(), &lin, 0.0).unwrap();
    let direct = interpolate_pair(&lin, &pl21(), 0.4).unwrap();
    assert!(algebra::max_inverse_discrepancy(&lim, &direct) <= 1e-12);
}

#[test]
fn convexify_examples() {
    let (psi, l) = convexify(&Yf::power(2.0)).unwrap();
    assert_relative_eq!(l, 2f64.sqrt(), max_relative = 1e-9);
    for t in [1e-3, 0.5, 1.0, 3.0, 40.0] {
        assert_relative_eq!(psi.evaluate(t), t * t / 2.0, max_relative = 1e-9);
    }
    let (psi, l) = convexify(&Yf::power(1.0)).unwrap();
    assert_relative_eq!(l, 1.0, max_relative = 1e-9);
    assert_relative_eq!(psi.evaluate(2.5), 2.5, max_relative = 1e-9);

    let (psi, l) = convexify(&pl21()).unwrap();
    assert!(l <= 2.0, "{l}");
    // Certified bound holds on an independent probe set.
    for k in 0..200 {
        let t = 10f64.powf(-6.0 + 12.0 * k as f64 / 199.0);
        let v = psi.evaluate(t);
        assert!(
            pl21().evaluate(t / l) <= v * (1.0 + 1e-6)
                && v <= pl21().evaluate(t * l) * (1.0 + 1e-6)
        );
    }
}

#[test]
fn convexify_rejects_concave_slopes() {
    let concave = Yf::power(0.5);
    assert!(matches!(convexify(&concave), Err(Error::NotAInc1 { .. })));
}

#[test]
fn equivalence_examples() {
    let (half_square, _) = convexify(&Yf::power(2.0)).unwrap();
    let l = check_equivalence(&Yf::power(2.0), &half_square).unwrap();
    assert_relative_eq!(l, 2f64.sqrt(), max_relative = 1e-12);
    assert_eq!(check_equivalence(&pl21(), &pl21()), Some(1.0));
    assert_eq!(check_equivalence(&Yf::power(2.0), &Yf::power(3.0)), None);
}

#[test]
fn strong_type_bound_examples() {
    let cor = BoundSpec::weak_strong(1.0, 1.0, 1.0);
    assert_eq!(strong_type_bound(&cor, 2.0, 2.0).unwrap(), 4.0);
    let finite = BoundSpec {
        p0: 1.0,
        p1: 4.0,
        k: 1.0,
        c0: 1.0,
        c1: 1.0,
        c_k: 4.0,
        r: 1.0,
    };
    assert_eq!(strong_type_bound(&finite, 2.0, 2.0).unwrap(), 12.0);
    assert!(matches!(
        strong_type_bound(&cor, 1.0, 2.0),
        Err(Error::ExponentOrderViolated { .. })
    ));
    let (q, p) = exponents(&pl21()).unwrap();
    assert_eq!(strong_type_bound(&cor, q, p).unwrap(), 6.0);
}

#[test]
fn doubling_constant_of_power_is_exact() {
    assert_eq!(doubling_constant(&Yf::power(2.0), 2.0), 4.0);
    let c = doubling_constant(&pl21(), 2.0);
    assert!(c > 4.0 && c <= 8.0 + 1e-9, "{c}");
}

#[test]
fn json_roundtrip_and_params_form() {
    let v = serde_json::json!({"family": "PowerLog", "params": {"p": 2.0, "a": 1.0}});
    assert_eq!(Yf::from_json(&v).unwrap(), pl21());
    let v = serde_json::json!({"family": "Power", "p": 2.0, "r": 0.5});
    assert_eq!(Yf::from_json(&v).unwrap(), Yf::power(1.0));
    let v = serde_json::json!({"family": "PowerLog", "p": 2.0, "a": 1.0, "r": 0.5});
    let phi = Yf::from_json(&v).unwrap();
    assert_eq!(phi.r(), 0.5);
    assert_eq!(Yf::from_json(&phi.to_json()).unwrap(), phi);
    assert!(Yf::from_json(&serde_json::json!({"family": "Power", "p": -1.0})).is_err());
    assert!(Yf::from_json(&serde_json::json!({"family": "Nope"})).is_err());
}

#[test]
fn f32_instances_evaluate() {
    let phi = YoungFunction::<f32>::power_log(2.0, 1.0);
    assert!((phi.evaluate(1.0) - std::f32::consts::LN_2).abs() < 1e-6);
    assert!((phi.left_inverse(phi.evaluate(3.0)) - 3.0).abs() < 1e-4);
    assert_eq!(
        exponents(&YoungFunction::<f32>::power(2.0)).unwrap(),
        (2.0, 2.0)
    );
}

fn family_strategy() -> impl Strategy<Value = Yf> {
    prop_oneof![
        (1.0f64..6.0).prop_map(Yf::power),
        (1.0f64..4.0, 0.0f64..2.0).prop_map(|(p, a)| Yf::power_log(p, a)),
        (1.0f64..3.0, 1.0f64..3.0, 0.1f64..10.0).prop_map(|(a, b, c)| Yf::piecewise_power(
            a.min(b),
            a.max(b),
            c
        )),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponents_are_ordered(phi in family_strategy()) {
        let (q, p) = exponents(&phi).unwrap();
        prop_assert!(q <= p);
        prop_assert_eq!(is_delta2(&phi), p.is_finite());
    }

    #[test]
    fn galois_contract(phi in family_strategy(), lt in -6.0f64..6.0) {
        let t = 10f64.powf(lt);
        prop_assert!(phi.left_inverse(phi.evaluate(t)) <= t * (1.0 + 1e-12));
        let s = t;
        prop_assert!(phi.evaluate(phi.left_inverse(s)) >= s * (1.0 - 1e-10));
    }

    #[test]
    fn monotone_and_convex(phi in family_strategy(), a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let (s, t) = (10f64.powf(a.min(b)), 10f64.powf(a.max(b)));
        prop_assert!(phi.evaluate(s) <= phi.evaluate(t));
        let mid = phi.evaluate(0.5 * (s + t));
        prop_assert!(mid <= 0.5 * (phi.evaluate(s) + phi.evaluate(t)) * (1.0 + 1e-12));
    }

    #[test]
    fn pair_interpolation_is_symmetric(a in family_strategy(), b in family_strategy(), th in 0.01f64..0.99) {
        let x = interpolate_pair(&a, &b, th).unwrap();
        let y = interpolate_pair(&b, &a, 1.0 - th).unwrap();
        for s in [1e-6, 1e-2, 1.0, 10.0, 1e5] {
            let (u, v) = (x.left_inverse(s), y.left_inverse(s));
            prop_assert!(((u - v) / v).abs() <= 1e-12);
        }
    }

    #[test]
    fn collapse_identity_holds(phi in family_strategy(), rho in 0.01f64..0.99, nu in 0.01f64..0.99) {
        prop_assert!(collapse_identity_check(&phi, rho, nu).unwrap() <= 1e-10);
    }

    #[test]
    fn theta_solver_is_feasible(ps in prop::collection::vec(1.05f64..2.5, 2..4)) {
        let psis: Vec<Yf> = ps.iter().map(|p| Yf::power(*p)).collect();
        let sum_inv: f64 = ps.iter().map(|p| 1.0 / p).sum();
        match theta_solver(&psis) {
            Ok(theta) => {
                prop_assert!(sum_inv > (ps.len() - 1) as f64);
                prop_assert!(theta.is_interior());
                let total: f64 = theta.theta().iter().sum();
                prop_assert!((total - 1.0).abs() <= 1e-12);
                for (t, p) in theta.theta().iter().zip(&ps) {
                    prop_assert!(*t > 1.0 - 1.0 / p);
                }
            }
            Err(Error::ConditionViolated { .. }) => prop_assert!(sum_inv <= (ps.len() - 1) as f64 + 1e-12),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
