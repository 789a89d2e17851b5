//! Root bounds from normal-crossing resolution data.
//!
//! At a chart point `F∘π = prod y_i^{a_i}`, `G∘π = prod y_i^{b_i}`, the
//! section `G^{-m} f^s` is `prod y_i^{(a_i - b_i)s - m b_i}`, whose local
//! b-function has root set
//! `K_q = ∪_{a_i > b_i} { (m b_i - k) / (a_i - b_i) : 1 <= k <= a_i - b_i }`.
//! Roots of the meromorphic b-function lie in `K - Z_{>=0}`, `K = ∪ K_q`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bfunction::BFunction;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponent data of one chart. `kappa` holds the multiplicities of the
/// relative canonical divisor along the coordinate divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCChart {
    pub label: String,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub kappa: Vec<u32>,
}

/// The chart-file format `{"charts": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartFile {
    pub charts: Vec<NCChart>,
}

impl NCChart {
    pub fn new(label: &str, a: Vec<u32>, b: Vec<u32>, kappa: Vec<u32>) -> Result<Self> {
        let c = NCChart { label: label.to_string(), a, b, kappa };
        c.validate()?;
        Ok(c)
    }

    /// Same length vectors; `a` and `b` not both zero.
    pub fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if self.b.len() != n || self.kappa.len() != n {
            return Err(Error::InvalidChart(format!(
                "chart `{}`: a, b, kappa have lengths {}, {}, {}",
                self.label,
                n,
                self.b.len(),
                self.kappa.len()
            )));
        }
        if self.a.iter().chain(&self.b).all(|e| *e == 0) {
            return Err(Error::InvalidChart(format!("chart `{}`: a and b are both zero", self.label)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `c_i = a_i - b_i`.
    pub fn c(&self) -> Vec<i64> {
        self.a.iter().zip(&self.b).map(|(a, b)| *a as i64 - *b as i64).collect()
    }
}

impl ChartFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChartFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidChart(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if file.charts.is_empty() {
            return Err(Error::InvalidChart("chart list is empty".into()));
        }
        for c in &file.charts {
            c.validate()?;
        }
        Ok(file)
    }
}

/// `K_q` for one chart.
pub fn roots_nc(chart: &NCChart, m: u32) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for (a, b) in chart.a.iter().zip(&chart.b) {
        if a > b {
            let c = (a - b) as i64;
            for k in 1..=c {
                out.insert(Rational::new(m as i64 * *b as i64 - k, c));
            }
        }
    }
    out
}

/// `B = K - Z_{>=0}`, stored by its residues `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSet {
    pub residues: BTreeSet<Rational>,
}

pub fn bound_set(charts: &[NCChart], m: u32) -> BoundSet {
    BoundSet { residues: charts.iter().flat_map(|c| roots_nc(c, m)).collect() }
}

/// `r ∈ K - Z_{>=0}`.
pub fn member(bound: &BoundSet, r: &Rational) -> bool {
    bound.residues.iter().any(|q| {
        let d = q - r;
        d.is_integer() && !d.is_negative()
    })
}

/// Fractional parts in `[0, 1)`; `alpha` stands for `exp(2 pi i alpha)`.
pub fn eigenvalue_classes<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> BTreeSet<Rational> {
    roots.into_iter().map(Rational::fract_part).collect()
}

/// Smallest `l <= l_cap` with `small ⊆ ∪_{i <= l} (big - i)`, or `None`.
pub fn check_lemma4(small: &BTreeSet<Rational>, big: &BTreeSet<Rational>, l_cap: u32) -> Option<u32> {
    let mut l = 0;
    for r in small {
        let shift = big
            .iter()
            .filter_map(|q| {
                let d = q - r;
                (d.is_integer() && !d.is_negative()).then(|| d.to_i64().expect("integer"))
            })
            .min()?;
        l = l.max(shift);
    }
    u32::try_from(l).ok().filter(|l| *l <= l_cap)
}

/// Containment of every root of `b` in the bound set, plus negativity of
/// all roots when `m = 0`. `b` must split over Q.
pub fn check_thm41(b: &BFunction, bound: &BoundSet, m: u32) -> bool {
    let Some(roots) = b.roots() else {
        return false;
    };
    if b.degree() as usize != roots.iter().map(|(_, k)| *k as usize).sum::<usize>() {
        return false;
    }
    roots.iter().all(|(r, _)| member(bound, r) && (m > 0 || r.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn set(v: &[Rational]) -> BTreeSet<Rational> {
        v.iter().cloned().collect()
    }

    fn chart(a: &[u32], b: &[u32]) -> NCChart {
        NCChart::new("c", a.to_vec(), b.to_vec(), vec![0; a.len()]).unwrap()
    }

    #[test]
    fn roots_examples() {
        assert_eq!(roots_nc(&chart(&[3, 0], &[0, 2]), 0), set(&[q(-1, 3), q(-2, 3), q(-1, 1)]));
        assert_eq!(roots_nc(&chart(&[2, 0], &[1, 0]), 2), set(&[q(1, 1)]));
        assert_eq!(roots_nc(&chart(&[0, 1], &[1, 0]), 5), set(&[q(-1, 1)]));
        assert!(roots_nc(&chart(&[1, 1], &[2, 3]), 4).is_empty());
    }

    #[test]
    fn bound_and_member() {
        let b = bound_set(&[chart(&[2], &[1]), chart(&[3], &[0])], 0);
        assert_eq!(b.residues, set(&[q(-1, 1), q(-1, 3), q(-2, 3)]));
        let third = BoundSet { residues: set(&[q(-1, 3)]) };
        assert!(member(&third, &q(-7, 3)));
        assert!(!member(&third, &q(-2, 3)));
        assert!(member(&BoundSet { residues: set(&[q(1, 1)]) }, &q(0, 1)));
        assert!(!member(&BoundSet { residues: BTreeSet::new() }, &q(-1, 1)));
    }

    #[test]
    fn eigenvalue_examples() {
        let roots = [q(-1, 3), q(-2, 3), q(-1, 1)];
        assert_eq!(eigenvalue_classes(&roots), set(&[q(2, 3), q(1, 3), q(0, 1)]));
        assert_eq!(eigenvalue_classes(&[q(1, 1), q(-1, 1)]), set(&[q(0, 1)]));
    }

    #[test]
    fn lemma4_examples() {
        assert_eq!(check_lemma4(&set(&[q(-1, 1)]), &set(&[q(-1, 1)]), 5), Some(0));
        assert_eq!(check_lemma4(&set(&[q(-7, 3)]), &set(&[q(-1, 3)]), 5), Some(2));
        assert_eq!(check_lemma4(&set(&[q(-1, 2)]), &set(&[q(-1, 3)]), 5), None);
        assert_eq!(check_lemma4(&set(&[q(-9, 1)]), &set(&[q(-1, 1)]), 5), None);
    }

    #[test]
    fn chart_file_round_trip() {
        let text = r#"{"charts":[{"label":"origin","a":[3,0],"b":[0,2],"kappa":[0,0]}]}"#;
        let file = ChartFile::from_json(text).unwrap();
        assert_eq!(serde_json::to_string(&file).unwrap(), text);
        assert!(ChartFile::from_json(r#"{"charts":[{"label":"z","a":[0],"b":[0],"kappa":[0]}]}"#).is_err());
        assert!(ChartFile::from_json(r#"{"charts":[{"label":"z","a":[1],"b":[0,1],"kappa":[0]}]}"#).is_err());
    }

    proptest! {
        #[test]
        fn roots_at_m0_lie_in_unit_interval(a in prop::collection::vec(0u32..6, 1..4), b in prop::collection::vec(0u32..6, 1..4)) {
            let n = a.len().min(b.len());
            let (a, b) = (a[..n].to_vec(), b[..n].to_vec());
            prop_assume!(a.iter().chain(&b).any(|e| *e > 0));
            for r in roots_nc(&chart(&a, &b), 0) {
                prop_assert!(r >= q(-1, 1) && r.is_negative());
            }
        }

        #[test]
        fn eigenvalues_shift_invariant(n in -20i64..20, d in 1i64..9, k in -5i64..5) {
            let r = q(n, d);
            let shifted = &r + &Rational::from(k);
            prop_assert_eq!(eigenvalue_classes(&[r]), eigenvalue_classes(&[shifted]));
        }

        #[test]
        fn member_monotone_under_union(n in -20i64..20, d in 1i64..6, extra in -10i64..10) {
            let base = BoundSet { residues: set(&[q(-1, 2)]) };
            let mut bigger = base.clone();
            bigger.residues.insert(q(extra, d));
            let r = q(n, d);
            prop_assert!(!member(&base, &r) || member(&bigger, &r));
        }
    }
}
