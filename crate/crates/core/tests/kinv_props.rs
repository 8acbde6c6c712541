mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use hyptile::kinv::{
    coinvariant_class, coinvariant_relations, coinvariant_relations_unreduced, coinvariants, gap_labels,
    group_invariants, smith_normal_form, transition_is_well_defined, CylinderFunction, IntMatrix, Ring,
};
use hyptile::numeric::DyadicRational;
use hyptile::subshift::{language, MeasureValue, SubshiftSpec, Word};

use common::*;

fn specs() -> Vec<SubshiftSpec> {
    vec![
        SubshiftSpec::periodic("112").unwrap(),
        SubshiftSpec::thue_morse(),
        SubshiftSpec::fibonacci(),
        SubshiftSpec::substitution(&[("1", "12"), ("2", "11")]).unwrap(),
    ]
}

#[test]
fn reduced_and_unreduced_presentations_agree() {
    for spec in specs() {
        for ring in [Ring::Z, Ring::ZHalf] {
            for level in 1..=5 {
                let (_, reduced) = coinvariant_relations(&spec, ring, level).unwrap();
                let full = coinvariant_relations_unreduced(&spec, ring, level).unwrap();
                assert_eq!(
                    group_invariants(&reduced, ring),
                    group_invariants(&full, ring),
                    "{} {ring} N={level}",
                    spec.to_json()
                );
            }
        }
    }
}

#[test]
fn transition_maps_respect_relations() {
    for spec in specs() {
        for ring in [Ring::Z, Ring::ZHalf] {
            for level in 1..=6 {
                assert!(transition_is_well_defined(&spec, ring, level).unwrap(), "{} {ring} N={level}", spec.to_json());
            }
        }
    }
}

/// Edges minus vertices plus one, for the connected graph with
/// vertices the `n`-blocks and edges the `n+1`-blocks.
fn rauzy_betti(word: &[u8], n: usize) -> usize {
    blocks(word, n + 1).len() - blocks(word, n).len() + 1
}

#[test]
fn thue_morse_truncations_do_not_stabilize() {
    let tm = SubshiftSpec::thue_morse();
    let c = coinvariants(&tm, Ring::Z, 8).unwrap();
    assert!(!c.stabilized);
    assert!(c.group.approximate || !c.group.stabilized);
    let long = iterate(&tm_rules(), b'1', 14);
    for rec in &c.chain {
        assert_eq!(rec.rank, rauzy_betti(&long, rec.n), "N={}", rec.n);
    }
    // the limit is not finitely generated, so the ranks keep jumping
    let ranks: Vec<usize> = c.chain.iter().map(|r| r.rank).collect();
    assert!(ranks.iter().max() > ranks.first());
}

#[test]
fn periodic_truncations_stabilize() {
    for w in ["1", "12", "112", "1112"] {
        let spec = SubshiftSpec::periodic(w).unwrap();
        let (r, t) = group_by_minors(&circulant(w.len(), 2), true);
        let c = coinvariants(&spec, Ring::ZHalf, 6).unwrap();
        assert!(c.stabilized);
        assert_eq!((c.group.rank, c.group.torsion.clone()), (r, t), "period {w}");
    }
}

#[test]
fn measures_of_shift_coboundaries_vanish_over_z() {
    // f - f∘σ^{-1} integrates to zero for an invariant measure
    let tm = SubshiftSpec::thue_morse();
    for u in language(&tm, 3).unwrap().iter() {
        let f = CylinderFunction::indicator(Ring::Z, 0, u);
        let g = f.apply_shift(Ring::Z.shift_mode()).unwrap();
        let d = f.sub(&tm, &g).unwrap();
        assert_eq!(d.integrate(&tm).unwrap(), MeasureValue::zero(), "{u}");
    }
}

#[test]
fn psi0_doubles_integrals() {
    // over Z[1/2] the scaled shift multiplies every integral by 2, so the
    // gap-label group is only a Z-module statement
    let tm = SubshiftSpec::thue_morse();
    for u in language(&tm, 3).unwrap().iter() {
        let f = CylinderFunction::indicator(Ring::ZHalf, 0, u);
        let g = f.apply_shift(Ring::ZHalf.shift_mode()).unwrap();
        let twice = f.integrate(&tm).unwrap().add(&f.integrate(&tm).unwrap());
        assert_eq!(g.integrate(&tm).unwrap(), twice, "{u}");
    }
}

#[test]
fn cylinder_integrals_lie_in_gap_group() {
    let tm = SubshiftSpec::thue_morse();
    let g = gap_labels(&tm, 5).unwrap();
    let MeasureValue::Rational(gen) = &g.generators[0] else { panic!("rational field expected") };
    for n in 1..=5 {
        for u in language(&tm, n).unwrap().iter() {
            for start in -2..=2 {
                let f = CylinderFunction::indicator(Ring::Z, start, u);
                let m = f.integrate(&tm).unwrap().as_rational().unwrap();
                assert!((m / gen).is_integer(), "{u} at {start}");
            }
        }
    }
}

fn coefficient_map() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 6)
}

fn function_from(spec: &SubshiftSpec, ring: Ring, start: i64, cs: &[i64]) -> CylinderFunction {
    let words = language(spec, 3).unwrap();
    let coeffs: BTreeMap<Word, DyadicRational> =
        words.iter().zip(cs.iter().cycle()).map(|(w, c)| (w.clone(), DyadicRational::from_int(*c))).collect();
    CylinderFunction::new(ring, start, 3, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coboundaries_have_zero_class(cs in coefficient_map(), start in 1i64..3, half in any::<bool>()) {
        let tm = SubshiftSpec::thue_morse();
        let ring = if half { Ring::ZHalf } else { Ring::Z };
        let group = coinvariants(&tm, ring, 6).unwrap().group;
        let f = function_from(&tm, ring, start, &cs);
        let d = f.sub(&tm, &f.apply_shift(ring.shift_mode()).unwrap()).unwrap();
        prop_assert!(coinvariant_class(&tm, &d, &group).unwrap().is_zero());
    }

    #[test]
    fn classes_are_additive(a in coefficient_map(), b in coefficient_map()) {
        let tm = SubshiftSpec::thue_morse();
        let group = coinvariants(&tm, Ring::Z, 6).unwrap().group;
        let f = function_from(&tm, Ring::Z, 0, &a);
        let g = function_from(&tm, Ring::Z, 0, &b);
        let cf = coinvariant_class(&tm, &f, &group).unwrap().coords;
        let cg = coinvariant_class(&tm, &g, &group).unwrap().coords;
        let sum = coinvariant_class(&tm, &f.add(&tm, &g).unwrap(), &group).unwrap().coords;
        let expect: Vec<DyadicRational> = cf.iter().zip(&cg).map(|(x, y)| x + y).collect();
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn snf_is_sound(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..=9, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
        let im = IntMatrix::from_rows(&m);
        let snf = smith_normal_form(&im);
        prop_assert!(snf.verify(&im));
        let mut want = invariant_factors_by_minors(&m);
        want.truncate(rows.min(cols));
        prop_assert_eq!(snf.diagonal(), want);
    }

    #[test]
    fn group_invariants_match_minors(p in 1usize..6, psi in prop::sample::select(vec![1i64, 2])) {
        let ring = if psi == 2 { Ring::ZHalf } else { Ring::Z };
        let m = circulant(p, psi);
        let (rank, torsion) = group_invariants(&IntMatrix::from_rows(&m), ring);
        let want: (usize, Vec<BigInt>) = group_by_minors(&m, psi == 2);
        prop_assert_eq!((rank, torsion), want);
    }
}
