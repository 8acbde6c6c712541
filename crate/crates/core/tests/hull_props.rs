use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyptile::dyadic::{DyadicInt, LocallyConstFnOmega};
use hyptile::hull::{act, compose, empirical_frequency, normalize, CursorLaw, HullPoint, HullSampler};
use hyptile::subshift::SubshiftSpec;

const TOL: f64 = 1e-9;

fn point() -> impl Strategy<Value = HullPoint> {
    (any::<u64>(), 0.0..1.0f64, -5i64..5, 0.0..1.0f64)
        .prop_map(|(w, t, c, s)| HullPoint::new(DyadicInt::new(w as i128, 64).unwrap(), t, c, s))
}

fn element() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..2.0f64, -4.0..4.0f64).prop_map(|(l, b)| (l.exp2(), b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn action_is_a_left_action(p in point(), g1 in element(), g2 in element()) {
        let lhs = act(g1.0, g1.1, &act(g2.0, g2.1, &p).unwrap()).unwrap();
        let (a, b) = compose(g1, g2);
        let rhs = act(a, b, &p).unwrap();
        prop_assert!(lhs.close_to(&rhs, TOL), "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn identity_acts_trivially(p in point()) {
        prop_assert_eq!(act(1.0, 0.0, &p).unwrap(), p);
    }

    #[test]
    fn normalize_is_idempotent(p in point(), dt in -3.0..3.0f64, ds in -3.0..3.0f64) {
        let q = normalize(&HullPoint { t: p.t + dt, s: p.s + ds, ..p }).unwrap();
        prop_assert!(q.is_normalized());
        prop_assert_eq!(normalize(&q).unwrap(), q);
    }

    #[test]
    fn cr_does_not_change_the_point(p in point()) {
        let n = normalize(&p).unwrap();
        prop_assert!(normalize(&p.apply_cr()).unwrap().close_to(&n, TOL));
        prop_assert!(normalize(&p.apply_cr_inverse().unwrap()).unwrap().close_to(&n, TOL));
    }

    #[test]
    fn suspension_identification(p in point(), k in -8i64..8) {
        let moved = HullPoint { omega: p.omega.odometer_add(k), t: p.t - k as f64, ..p };
        prop_assert!(normalize(&moved).unwrap().close_to(&normalize(&p).unwrap(), TOL));
    }
}

#[test]
fn sampler_marginals() {
    let tm = SubshiftSpec::thue_morse();
    let sampler = HullSampler::new(&tm, CursorLaw::Invariant).unwrap();
    let cyl = LocallyConstFnOmega::indicator(2, 1, 1).unwrap();
    let (m, se) = empirical_frequency(&sampler, 40_000, 5, |p, _| Ok(cyl.eval(&p.omega)? == 1)).unwrap();
    assert!((m - 0.25).abs() < 4.0 * se, "ν(F_2,1) ≈ {m} ± {se}");
    let (m, se) =
        empirical_frequency(&sampler, 40_000, 6, |p, w| Ok(w.get(p.cursor)? == b'1' && w.get(p.cursor + 1)? == b'2'))
            .unwrap();
    assert!((m - 1.0 / 3.0).abs() < 4.0 * se, "μ[12] ≈ {m} ± {se}");
    let (m, se) = empirical_frequency(&sampler, 40_000, 7, |p, _| Ok(p.t < 0.5 && p.s < 0.25)).unwrap();
    assert!((m - 0.125).abs() < 4.0 * se, "Leb ≈ {m} ± {se}");
}

#[test]
fn biased_sampler_fixes_the_cursor_letter() {
    let tm = SubshiftSpec::thue_morse();
    let sampler = HullSampler::new(&tm, CursorLaw::Biased(b'2')).unwrap();
    let (m, _) = empirical_frequency(&sampler, 10_000, 1, |p, w| Ok(w.get(p.cursor)? == b'2')).unwrap();
    assert_eq!(m, 1.0);
    assert!(HullSampler::new(&tm, CursorLaw::Biased(b'7')).is_err());
}

#[test]
fn sampling_is_reproducible() {
    let tm = SubshiftSpec::thue_morse();
    let sampler = HullSampler::new(&tm, CursorLaw::Invariant).unwrap();
    let a: Vec<HullPoint> = (0..5).map(|_| sampler.sample(&mut ChaCha8Rng::seed_from_u64(3))).collect();
    assert!(a.windows(2).all(|p| p[0] == p[1]));
    let (x, _) = empirical_frequency(&sampler, 9000, 11, |p, _| Ok(p.t < 0.3)).unwrap();
    let (y, _) = empirical_frequency(&sampler, 9000, 11, |p, _| Ok(p.t < 0.3)).unwrap();
    assert_eq!(x, y);
}
