use std::collections::HashSet;

use num_rational::BigRational;
use proptest::prelude::*;

use torus_zp::axiom_lab::{
    coset_model, curve_model, defect_negative_control, pink_negative_control, pythagorean_lines,
    FlatModel, MAX_EXPORT_FLATS,
};
use torus_zp::fuzz::{random_coset_chain, random_curve, random_flat_model, random_param, rng};
use torus_zp::Error;

fn agree_everywhere(m: &FlatModel) -> Result<(), String> {
    for v in 0..m.len() {
        for d in -1..=3 {
            let a = m.check_pink_form(v, d).unwrap();
            let b = m.pink_oracle(v, d).unwrap();
            if a.holds() != b.holds() {
                return Err(format!("v = {v}, d = {d}: {a:?} vs {b:?}"));
            }
        }
    }
    Ok(())
}

fn exported_checks(m: &FlatModel, v: usize) {
    assert!(m.check_defect_condition().unwrap().holds());
    assert_eq!(m.check_optimal_implies_weakly_optimal().unwrap(), None);
    for d in 0..=2 {
        assert!(m.check_pink_form(v, d).unwrap().holds());
    }
}

#[test]
fn negative_controls() {
    assert!(!defect_negative_control()
        .check_defect_condition()
        .unwrap()
        .holds());
    let m = pink_negative_control();
    assert!(!m.check_pink_form(1, 0).unwrap().holds());
    assert!(!m.pink_oracle(1, 0).unwrap().holds());
}

#[test]
fn pythagorean_lines_are_distinct_directions() {
    let lines = pythagorean_lines(10_000);
    assert_eq!(lines.len(), 10_000);
    let mut dirs = HashSet::new();
    for l in &lines {
        let (a, b, c) = (l.a as u128, l.b as u128, l.c as u128);
        assert_eq!(a * a + b * b, c * c);
        assert_eq!(num_integer::gcd(num_integer::gcd(l.a, l.b), l.c), 1);
        // primitive triples are their own reduced direction
        assert!(dirs.insert((l.a, l.b, l.c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pink_check_matches_oracle_on_small_models(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_flat_model(&mut r, 12);
        prop_assert!(agree_everywhere(&m).is_ok(), "{:?}", agree_everywhere(&m));
        // the implication needs only the defect condition
        if m.check_defect_condition().unwrap().holds() {
            prop_assert_eq!(m.check_optimal_implies_weakly_optimal().unwrap(), None);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exported_curve_models(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, n);
        let params: Vec<BigRational> = (0..3).map(|_| random_param(&mut r)).collect();
        let params: Vec<BigRational> = params.into_iter().filter(|t| c.evaluate_point(t).is_ok()).collect();
        match curve_model(&c, &params, MAX_EXPORT_FLATS) {
            Ok((m, v)) => {
                exported_checks(&m, v);
                if m.len() <= 12 {
                    prop_assert!(agree_everywhere(&m).is_ok());
                }
            }
            Err(Error::InvalidArgument(_)) | Err(Error::NotRepresentable(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn exported_coset_models(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let (sub, sup) = random_coset_chain(&mut r, n).unwrap();
        match coset_model(n, &[sub, sup], MAX_EXPORT_FLATS) {
            Ok((m, _)) => {
                for v in 0..m.len() {
                    exported_checks(&m, v);
                }
                if m.len() <= 12 {
                    prop_assert!(agree_everywhere(&m).is_ok());
                }
            }
            Err(Error::InvalidArgument(_)) | Err(Error::NotRepresentable(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
