mod common;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use hyptile::dyadic::{integrate, odometer_add, DyadicInt, LocallyConstFnOmega};
use hyptile::hypgeo::{agreement_radius, tile_contains, tile_vertices, AffineMap, TileIndex};
use hyptile::numeric::DyadicRational;
use hyptile::subshift::{in_language, language, measures, two_sided_window, SubshiftSpec, Word};

use common::*;

/// Primitive two-letter substitutions with images of length 2..=4.
fn substitution() -> impl Strategy<Value = (String, String)> {
    let image = prop::collection::vec(prop::sample::select(vec!['1', '2']), 2..=4);
    (image.clone(), image)
        .prop_map(|(a, b)| (a.into_iter().collect::<String>(), b.into_iter().collect::<String>()))
        .prop_filter("primitive", |(a, b)| a.contains('2') && b.contains('1') && a.starts_with('1'))
}

#[test]
fn languages_match_brute_force() {
    let cases: Vec<(SubshiftSpec, BTreeMap<u8, Vec<u8>>)> = vec![
        (SubshiftSpec::thue_morse(), tm_rules()),
        (SubshiftSpec::fibonacci(), BTreeMap::from([(b'1', b"12".to_vec()), (b'2', b"1".to_vec())])),
    ];
    for (spec, rules) in cases {
        let long = iterate(&rules, b'1', 20);
        for n in 1..=8 {
            let got: Vec<Vec<u8>> = language(&spec, n).unwrap().iter().map(|w| w.0.clone()).collect();
            let want: Vec<Vec<u8>> = blocks(&long, n).into_iter().collect();
            assert_eq!(got, want, "n={n}");
        }
    }
}

#[test]
fn periodic_language_and_measures() {
    let spec = SubshiftSpec::periodic("112").unwrap();
    assert_eq!(language(&spec, 2).unwrap().len(), 3);
    assert!(in_language(&spec, &Word::from("121")).unwrap());
    assert!(!in_language(&spec, &Word::from("22")).unwrap());
    for (_, m) in measures(&spec, 4).unwrap().iter() {
        assert_eq!(m.as_rational().unwrap(), q(1, 3));
    }
}

#[test]
fn rejects_malformed_specs() {
    for bad in [
        "",
        "{}",
        r#"{"type":"periodic","word":""}"#,
        r#"{"type":"periodic","word":"1","extra":1}"#,
        r#"{"type":"substitution","rules":{"1":"13"}}"#,
        r#"{"type":"substitution","rules":{"12":"1"}}"#,
        r#"{"type":"explicit","left":"","right":"12","horizon":0}"#,
        r#"{"type":"cantor"}"#,
    ] {
        assert!(SubshiftSpec::from_json(bad).is_err(), "{bad:?} accepted");
    }
}

#[test]
fn odometer_haar_integral() {
    let f = LocallyConstFnOmega::new(3, vec![1, 0, 2, 0, 0, 5, 0, 0]).unwrap();
    assert_eq!(integrate(&f), DyadicRational::new(8, -3));
    assert_eq!(integrate(&f.compose_odometer_inv()), integrate(&f));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spec_json_roundtrip((a, b) in substitution()) {
        let spec = SubshiftSpec::substitution(&[("1", &a), ("2", &b)]).unwrap();
        prop_assert_eq!(SubshiftSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn languages_are_factorial_and_extendable((a, b) in substitution(), n in 1usize..6) {
        let spec = SubshiftSpec::substitution(&[("1", &a), ("2", &b)]).unwrap();
        let short = language(&spec, n).unwrap();
        let long = language(&spec, n + 1).unwrap();
        for w in long.iter() {
            prop_assert!(short.contains(&Word::new(&w.0[1..])));
            prop_assert!(short.contains(&Word::new(&w.0[..n])));
        }
        for u in short.iter() {
            prop_assert!(long.iter().any(|w| w.0.starts_with(&u.0)));
            prop_assert!(long.iter().any(|w| w.0.ends_with(&u.0)));
        }
    }

    #[test]
    fn constant_length_measures_are_consistent((a, b) in substitution().prop_filter("constant length", |(a, b)| a.len() == b.len()), n in 1usize..4) {
        let spec = SubshiftSpec::substitution(&[("1", &a), ("2", &b)]).unwrap();
        let ms = measures(&spec, n).unwrap();
        let total: BigRational = ms.iter().map(|(_, m)| m.as_rational().unwrap()).sum();
        prop_assert_eq!(total, q(1, 1));
        prop_assert!(ms.iter().all(|(_, m)| m.as_rational().unwrap() > BigRational::zero()));
    }

    #[test]
    fn window_blocks_are_legal(shift in -500i64..500) {
        let tm = SubshiftSpec::thue_morse();
        let w = two_sided_window(&tm, 600).unwrap();
        let u: Vec<u8> = (shift..shift + 5).map(|j| w.get(j).unwrap()).collect();
        prop_assert!(in_language(&tm, &Word::new(u)).unwrap());
    }

    #[test]
    fn odometer_addition_composes(x in any::<u64>(), j in -1000i64..1000, k in -1000i64..1000) {
        let p = DyadicInt::new(x as i128, 64).unwrap();
        prop_assert_eq!(odometer_add(&odometer_add(&p, j), k), odometer_add(&p, j + k));
    }

    #[test]
    fn tiles_contain_their_barycentre(k in -4i64..4, n in -20i64..20) {
        let t = TileIndex::new(k, n);
        let vs = tile_vertices(&t);
        let (x, y) = vs.iter().map(|v| v.to_f64()).fold((0.0, 0.0), |a, b| (a.0 + b.0 / 5.0, a.1 + b.1 / 5.0));
        let img = AffineMap::of_tile(k, n);
        prop_assert_eq!(img.tile_image(0, 0), Some((k, n)));
        let c = hyptile::hypgeo::Point::new(
            DyadicRational::from_rational(&BigRational::from_float(x).unwrap()).unwrap(),
            DyadicRational::from_rational(&BigRational::from_float(y).unwrap()).unwrap(),
        ).unwrap();
        prop_assert!(tile_contains(k, n, &c));
    }

    #[test]
    fn agreement_radius_is_symmetric(n in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assert_eq!(agreement_radius(n, n + d), agreement_radius(n + d, n));
    }
}
