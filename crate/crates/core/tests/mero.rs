//! Cross-module properties of the meromorphic b-function engines.

use mbfun::ann::{bernstein_sato, sabbah_line};
use mbfun::expr::parse_poly;
use mbfun::mero::{
    b_mero, b_simple, check_witness, reduced_b, Certification, MeroInput, OracleBounds, QuasiHomogeneity,
};
use mbfun::nc::{bound_set, check_thm41, eigenvalue_classes, NCChart};
use mbfun::{EngineConfig, MultiPoly};
use proptest::prelude::*;

fn input(f: &str, g: &str) -> MeroInput {
    MeroInput::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), &EngineConfig::default()).unwrap()
}

fn mono(a: u32, b: u32) -> (String, String) {
    let g = if b == 0 { "1".to_string() } else { format!("y^{b}") };
    (format!("x^{a}"), g)
}

#[test]
fn divisibility_chain_on_small_quotients() {
    let cfg = EngineConfig::default();
    for (f, g, w, d1, d2) in [
        ("x^2", "y", vec![1, 1], 2, 1),
        ("x^3", "y^2", vec![1, 1], 3, 2),
        ("x^2 + y^2", "x", vec![1, 1], 2, 1),
    ] {
        let inp = input(f, g);
        let qh = QuasiHomogeneity::check(&inp, &w, d1, d2).unwrap();
        let red = reduced_b(&inp, &qh, &cfg).unwrap();
        for m in 0..=1 {
            let mero = b_mero(&inp, m, OracleBounds::default(), &cfg).unwrap();
            let simple = b_simple(&inp, m, OracleBounds::default(), &cfg).unwrap();
            let (_, line) = sabbah_line(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), m, &cfg).unwrap();
            assert!(red.b.divides(&mero.b), "{f}/{g} m={m}: reduced {} vs {}", red.b.factored(), mero.b.factored());
            assert!(mero.b.divides(&simple.b), "{f}/{g} m={m}: {} vs simple {}", mero.b.factored(), simple.b.factored());
            let line_b = mbfun::BFunction::from_poly(&parse_poly(&line.b.poly).unwrap());
            assert!(mero.b.divides(&line_b), "{f}/{g} m={m}: {} vs line {}", mero.b.factored(), line.b.factored);
        }
    }
}

#[test]
fn certified_witnesses_apply_directly() {
    let cfg = EngineConfig::default();
    for (a, b) in [(1, 1), (2, 1), (3, 2), (2, 2)] {
        let (f, g) = mono(a, b);
        let inp = input(&f, &g);
        for m in 0..=2 {
            let r = b_mero(&inp, m, OracleBounds::default(), &cfg).unwrap();
            assert_eq!(r.status, Certification::Certified, "{f}/{g} m={m}");
            let one = MultiPoly::one(inp.xs());
            assert!(check_witness(&r.certificate.witness, &r.b, &one, &inp, m).unwrap());
        }
    }
}

#[test]
fn eigenvalue_classes_lie_in_the_bound() {
    let cfg = EngineConfig::default();
    for (a, b) in [(2, 1), (3, 1), (3, 2)] {
        let (f, g) = mono(a, b);
        let inp = input(&f, &g);
        let chart = NCChart::new("origin", vec![a, 0], vec![0, b], vec![0, 0]).unwrap();
        for m in 0..=2 {
            let r = b_mero(&inp, m, OracleBounds::default(), &cfg).unwrap();
            let bound = bound_set(std::slice::from_ref(&chart), m);
            assert!(check_thm41(&r.b, &bound, m));
            let ours = eigenvalue_classes(&r.b.root_set());
            let allowed = eigenvalue_classes(&bound.residues);
            assert!(ours.is_subset(&allowed), "{f}/{g} m={m}: {ours:?} vs {allowed:?}");
        }
    }
}

const NUMERATORS: &[&str] = &["x", "x^2", "x^3", "x*y", "x^2 + y^2", "x*(x + 1)", "x^2*y"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn g_one_is_classical_for_every_m(i in 0..NUMERATORS.len(), m in 0u32..4) {
        let cfg = EngineConfig::default();
        let f = NUMERATORS[i];
        let classical = bernstein_sato(&parse_poly(f).unwrap(), &cfg).unwrap();
        let r = b_mero(&input(f, "1"), m, OracleBounds::default(), &cfg).unwrap();
        prop_assert_eq!(r.b, classical);
    }

    #[test]
    fn scaling_f_and_g_changes_nothing(a in 1u32..4, b in 1u32..3, m in 0u32..3, lf in 1i64..5, lg in 1i64..5) {
        let cfg = EngineConfig::default();
        let (f, g) = mono(a, b);
        let plain = b_mero(&input(&f, &g), m, OracleBounds::default(), &cfg).unwrap();
        let scaled = b_mero(&input(&format!("{lf}*{f}"), &format!("-{lg}*{g}")), m, OracleBounds::default(), &cfg).unwrap();
        prop_assert_eq!(plain.b, scaled.b);
    }

    #[test]
    fn swapping_variable_names_changes_nothing(a in 1u32..4, b in 0u32..3, m in 0u32..3) {
        let cfg = EngineConfig::default();
        let (f, g) = mono(a, b);
        let swapped = |s: &str| s.replace('x', "u").replace('y', "x").replace('u', "y");
        let r1 = b_mero(&input(&f, &g), m, OracleBounds::default(), &cfg).unwrap();
        let r2 = b_mero(&input(&swapped(&f), &swapped(&g)), m, OracleBounds::default(), &cfg).unwrap();
        prop_assert_eq!(r1.b, r2.b);
    }
}
