//! Multiplier ideals of `f = F/G` on a single normal-crossing chart.
//!
//! `h` is in `I(f)_alpha` iff `|h|^2 |G|^{2 alpha} / |F|^{2 alpha}` is locally
//! integrable. For a monomial `y^u` and `c = a - b` this is
//! `u_i > alpha c_i - 1` for every `c_i > 0`, i.e. `u_i >= floor(alpha c_i)`;
//! coordinates with `c_i <= 0` never obstruct. All comparisons are exact.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bfunction::BFunction;
use crate::error::{Error, Result};
use crate::nc::NCChart;
use crate::poly::{Exponents, MultiPoly};
use crate::rational::Rational;

/// Monomial ideal given by a minimal antichain of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    pub generators: BTreeSet<Exponents>,
}

fn divides(g: &[u32], e: &[u32]) -> bool {
    g.iter().zip(e).all(|(a, b)| a <= b)
}

impl MonomialIdeal {
    /// Drops generators dominated by another generator.
    pub fn new(gens: impl IntoIterator<Item = Exponents>) -> Self {
        let all: BTreeSet<Exponents> = gens.into_iter().collect();
        let generators = all
            .iter()
            .filter(|g| !all.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        MonomialIdeal { generators }
    }

    pub fn contains_monomial(&self, e: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, e))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.generators.iter().all(|g| self.contains_monomial(g))
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.iter().all(|e| *e == 0))
    }
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(Error::Capability(format!("multiplier ideals need alpha > 0, got {alpha}")))
    }
}

/// `I(f)_alpha` for a chart representing `f` itself.
pub fn multiplier_ideal_nc(chart: &NCChart, alpha: &Rational) -> Result<MonomialIdeal> {
    check_alpha(alpha)?;
    let u = chart
        .c()
        .into_iter()
        .map(|c| {
            if c > 0 {
                let t = (alpha * &Rational::from(c)).floor();
                u32::try_from(t).expect("alpha c fits u32")
            } else {
                0
            }
        })
        .collect();
    Ok(MonomialIdeal::new([u]))
}

/// Jumping numbers in `(0, upper]` with the ideal on each interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpReport {
    pub jumps: Vec<Rational>,
    /// `ideals[0]` holds below the first jump, `ideals[k]` on
    /// `[jumps[k-1], jumps[k])`.
    pub ideals: Vec<MonomialIdeal>,
    /// First jump, if any lies in the window.
    pub lct: Option<Rational>,
}

/// Default window `n + max_i c_i`.
pub fn default_upper(chart: &NCChart) -> Rational {
    let cmax = chart.c().into_iter().max().unwrap_or(0).max(0);
    Rational::from(chart.dim() as i64 + cmax)
}

/// Candidates `k / c_i`, each confirmed by comparing the ideal at `alpha`
/// with the ideal just below it.
pub fn jumping_numbers_nc(chart: &NCChart, upper: &Rational) -> Result<JumpReport> {
    check_alpha(upper)?;
    let mut cands = BTreeSet::new();
    for c in chart.c().into_iter().filter(|c| *c > 0) {
        let cr = Rational::from(c);
        let kmax = (upper * &cr).floor();
        let kmax = i64::try_from(kmax).expect("window fits i64");
        for k in 1..=kmax {
            cands.insert(Rational::new(k, c));
        }
    }
    let mut jumps = Vec::new();
    let mut ideals = Vec::new();
    let mut prev_alpha = Rational::zero();
    for alpha in cands {
        // the ideal is constant on [prev, alpha); probe at the midpoint
        let mid = &(&prev_alpha + &alpha) * &Rational::new(1, 2);
        let below = multiplier_ideal_nc(chart, &mid)?;
        let at = multiplier_ideal_nc(chart, &alpha)?;
        if below != at {
            debug_assert!(below.contains_ideal(&at));
            ideals.push(below);
            jumps.push(alpha.clone());
            prev_alpha = alpha;
        }
    }
    let last = if jumps.is_empty() { upper.clone() } else { prev_alpha.clone() };
    ideals.push(multiplier_ideal_nc(chart, &last)?);
    let lct = jumps.first().cloned();
    Ok(JumpReport { jumps, ideals, lct })
}

/// Every jump is `-r + i` for a root `r` of `b0` and `i >= 0`, and the
/// first jump is minus the largest root. `b0` must split over Q.
pub fn check_cor_jump(report: &JumpReport, b0: &BFunction) -> bool {
    let Some(roots) = b0.roots() else {
        return false;
    };
    let split: u32 = roots.iter().map(|(_, k)| *k).sum();
    if split != b0.degree() {
        return false;
    }
    let contained = report.jumps.iter().all(|j| {
        roots.iter().any(|(r, _)| {
            let i = j + r;
            i.is_integer() && !i.is_negative()
        })
    });
    let lct_ok = match (&report.lct, b0.max_root()) {
        (Some(l), Some(r)) => *l == -r,
        _ => false,
    };
    contained && lct_ok
}

/// Every monomial of `h` lies in `I(f)_alpha`. Variables of `h` are matched
/// to chart coordinates by position in `h`'s own variable list.
pub fn is_in_multiplier_ideal(h: &MultiPoly, alpha: &Rational, chart: &NCChart) -> Result<bool> {
    let ideal = multiplier_ideal_nc(chart, alpha)?;
    if h.nvars() > chart.dim() {
        return Err(Error::InvalidChart(format!(
            "polynomial has {} variables, chart has dimension {}",
            h.nvars(),
            chart.dim()
        )));
    }
    Ok(h.terms().all(|(e, _)| {
        let mut full = e.clone();
        full.resize(chart.dim(), 0);
        ideal.contains_monomial(&full)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly_in;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn chart(a: &[u32], b: &[u32]) -> NCChart {
        NCChart::new("c", a.to_vec(), b.to_vec(), vec![0; a.len()]).unwrap()
    }

    fn mono(e: &[u32]) -> MonomialIdeal {
        MonomialIdeal::new([e.to_vec()])
    }

    #[test]
    fn ideal_examples() {
        assert!(multiplier_ideal_nc(&chart(&[2], &[0]), &q(1, 4)).unwrap().is_unit());
        assert_eq!(multiplier_ideal_nc(&chart(&[2], &[0]), &q(1, 2)).unwrap(), mono(&[1]));
        assert_eq!(multiplier_ideal_nc(&chart(&[3, 0], &[0, 2]), &q(2, 3)).unwrap(), mono(&[2, 0]));
        assert!(multiplier_ideal_nc(&chart(&[2], &[0]), &q(0, 1)).is_err());
    }

    #[test]
    fn jump_examples() {
        let r = jumping_numbers_nc(&chart(&[2], &[0]), &q(1, 1)).unwrap();
        assert_eq!(r.jumps, vec![q(1, 2), q(1, 1)]);
        assert_eq!(r.lct, Some(q(1, 2)));
        assert_eq!(r.ideals, vec![mono(&[0]), mono(&[1]), mono(&[2])]);
        let r = jumping_numbers_nc(&chart(&[3, 0], &[0, 2]), &q(1, 1)).unwrap();
        assert_eq!(r.jumps, vec![q(1, 3), q(2, 3), q(1, 1)]);
        let r = jumping_numbers_nc(&chart(&[0, 1], &[1, 0]), &q(2, 1)).unwrap();
        assert_eq!(r.jumps, vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn cor_jump_examples() {
        let report = |j: Vec<Rational>| JumpReport { lct: j.first().cloned(), jumps: j, ideals: vec![] };
        let b = |r: &[Rational]| BFunction::from_roots(&r.iter().map(|x| (x.clone(), 1)).collect::<Vec<_>>());
        assert!(check_cor_jump(&report(vec![q(1, 2), q(1, 1)]), &b(&[q(-1, 2), q(-1, 1)])));
        assert!(check_cor_jump(
            &report(vec![q(1, 3), q(2, 3), q(1, 1)]),
            &b(&[q(-1, 3), q(-2, 3), q(-1, 1)])
        ));
        assert!(!check_cor_jump(&report(vec![q(1, 2)]), &b(&[q(-1, 1)])));
    }

    #[test]
    fn membership_examples() {
        let c1 = chart(&[2], &[0]);
        let x = |s: &str| parse_poly_in(s, &["x"]).unwrap();
        assert!(is_in_multiplier_ideal(&x("x"), &q(1, 2), &c1).unwrap());
        assert!(!is_in_multiplier_ideal(&x("1"), &q(1, 2), &c1).unwrap());
        let c2 = chart(&[0, 1], &[1, 0]);
        let h = parse_poly_in("y^9", &["x", "y"]).unwrap();
        assert!(!is_in_multiplier_ideal(&h, &q(10, 1), &c2).unwrap());
    }

    proptest! {
        #[test]
        fn ideals_shrink(a in prop::collection::vec(0u32..5, 2), b in prop::collection::vec(0u32..5, 2),
                         n1 in 1i64..40, n2 in 1i64..40, d in 1i64..7) {
            prop_assume!(a.iter().chain(&b).any(|e| *e > 0));
            let c = chart(&a, &b);
            let (lo, hi) = (q(n1.min(n2), d), q(n1.max(n2), d));
            let i_lo = multiplier_ideal_nc(&c, &lo).unwrap();
            let i_hi = multiplier_ideal_nc(&c, &hi).unwrap();
            prop_assert!(i_lo.contains_ideal(&i_hi));
        }

        #[test]
        fn jumps_depend_on_positive_part(a in prop::collection::vec(0u32..5, 2), b in prop::collection::vec(0u32..5, 2)) {
            prop_assume!(a.iter().chain(&b).any(|e| *e > 0));
            let c = chart(&a, &b);
            let plus: Vec<u32> = c.c().iter().map(|x| (*x).max(0) as u32).collect();
            prop_assume!(plus.iter().any(|e| *e > 0));
            let c_plus = chart(&plus, &[0, 0]);
            let up = q(3, 1);
            prop_assert_eq!(jumping_numbers_nc(&c, &up).unwrap().jumps, jumping_numbers_nc(&c_plus, &up).unwrap().jumps);
        }
    }
}
