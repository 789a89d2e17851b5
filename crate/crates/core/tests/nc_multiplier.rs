//! Chart combinatorics against the engines, and multiplier-ideal structure.

use mbfun::expr::parse_poly;
use mbfun::mero::{b_mero, MeroInput, OracleBounds};
use mbfun::multiplier::{check_cor_jump, jumping_numbers_nc, multiplier_ideal_nc, MonomialIdeal};
use mbfun::nc::{roots_nc, NCChart};
use mbfun::{BFunction, EngineConfig, Rational};
use proptest::prelude::*;

fn chart(a: Vec<u32>, b: Vec<u32>) -> NCChart {
    let n = a.len();
    NCChart::new("c", a, b, vec![0; n]).unwrap()
}

/// Multiply every generator by `x^c` (entries of `c` clamped at zero).
fn shifted(ideal: &MonomialIdeal, c: &[i64]) -> MonomialIdeal {
    MonomialIdeal::new(
        ideal
            .generators
            .iter()
            .map(|e| e.iter().zip(c).map(|(x, c)| x + (*c).max(0) as u32).collect::<Vec<_>>()),
    )
}

#[test]
fn monomial_b_function_has_chart_roots_at_m0() {
    // for x^a / y^b the chart roots at m = 0 are those of x^a
    let cfg = EngineConfig::default();
    for (a, b) in [(1, 1), (2, 1), (3, 2)] {
        let inp = MeroInput::new(
            &parse_poly(&format!("x^{a}")).unwrap(),
            &parse_poly(&format!("y^{b}")).unwrap(),
            &cfg,
        )
        .unwrap();
        let r = b_mero(&inp, 0, OracleBounds::default(), &cfg).unwrap();
        let roots: Vec<_> = roots_nc(&chart(vec![a, 0], vec![0, b]), 0).into_iter().map(|r| (r, 1)).collect();
        assert_eq!(r.b, BFunction::from_roots(&roots));
    }
}

#[test]
fn corollary_on_computed_b_functions() {
    let cfg = EngineConfig::default();
    for (a, b) in [(1, 1), (2, 1), (3, 2), (3, 1)] {
        let inp = MeroInput::new(
            &parse_poly(&format!("x^{a}")).unwrap(),
            &parse_poly(&format!("y^{b}")).unwrap(),
            &cfg,
        )
        .unwrap();
        let b0 = b_mero(&inp, 0, OracleBounds::default(), &cfg).unwrap().b;
        let report = jumping_numbers_nc(&chart(vec![a, 0], vec![0, b]), &Rational::from(3)).unwrap();
        assert!(check_cor_jump(&report, &b0), "x^{a}/y^{b}");
    }
}

fn arb_chart() -> impl Strategy<Value = NCChart> {
    (1usize..4)
        .prop_flat_map(|n| (prop::collection::vec(0u32..5, n), prop::collection::vec(0u32..5, n)))
        .prop_filter("some a_i > b_i", |(a, b)| a.iter().zip(b).any(|(a, b)| a > b))
        .prop_map(|(a, b)| chart(a, b))
}

proptest! {
    #[test]
    fn ideals_shrink_with_alpha(c in arb_chart(), n1 in 1i64..30, n2 in 1i64..30, d in 1i64..7) {
        let (lo, hi) = (Rational::new(n1.min(n2), d), Rational::new(n1.max(n2), d));
        let big = multiplier_ideal_nc(&c, &lo).unwrap();
        let small = multiplier_ideal_nc(&c, &hi).unwrap();
        prop_assert!(big.contains_ideal(&small));
    }

    #[test]
    fn shift_by_one_multiplies_by_the_monomial(c in arb_chart(), n in 1i64..30, d in 1i64..7) {
        let alpha = Rational::new(n, d);
        let next = &alpha + &Rational::from(1);
        let here = multiplier_ideal_nc(&c, &alpha).unwrap();
        prop_assert_eq!(multiplier_ideal_nc(&c, &next).unwrap(), shifted(&here, &c.c()));
    }

    #[test]
    fn lct_is_the_first_jump_and_jumps_are_strict(c in arb_chart()) {
        let report = jumping_numbers_nc(&c, &Rational::from(2)).unwrap();
        prop_assert_eq!(report.lct.as_ref(), report.jumps.first());
        for w in report.jumps.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for j in &report.jumps {
            // ideal strictly shrinks at j
            let below = multiplier_ideal_nc(&c, &(j - &Rational::new(1, 1000))).unwrap();
            let at = multiplier_ideal_nc(&c, j).unwrap();
            prop_assert!(below.contains_ideal(&at) && !at.contains_ideal(&below));
        }
    }
}
