use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::signature::{Signature, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tiebreak {
    DegRevLex,
    Lex,
}

/// Weight rows compared in turn, then a term-order tiebreak on the full
/// generator sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    weights: Vec<Vec<i64>>,
    tie: Tiebreak,
}

impl MonomialOrder {
    pub fn degrevlex() -> Self {
        MonomialOrder { weights: vec![], tie: Tiebreak::DegRevLex }
    }

    pub fn lex() -> Self {
        MonomialOrder { weights: vec![], tie: Tiebreak::Lex }
    }

    pub fn weighted(w: Vec<i64>) -> Self {
        MonomialOrder { weights: vec![w], tie: Tiebreak::DegRevLex }
    }

    pub fn with_rows(weights: Vec<Vec<i64>>, tie: Tiebreak) -> Self {
        MonomialOrder { weights, tie }
    }

    /// Weight 1 on every dropped generator, then degrevlex.
    pub fn elimination(nvars: usize, drop: &[usize]) -> Self {
        let mut w = vec![0; nvars];
        for &i in drop {
            w[i] = 1;
        }
        Self::weighted(w)
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn tiebreak(&self) -> Tiebreak {
        self.tie
    }

    /// Same order on a signature with one more (last) generator of weight 0.
    pub fn extended(&self) -> Self {
        MonomialOrder {
            weights: self
                .weights
                .iter()
                .map(|w| {
                    let mut w = w.clone();
                    w.push(0);
                    w
                })
                .collect(),
            tie: self.tie,
        }
    }

    /// Sort key; lexicographic comparison of keys is the order.
    pub fn key(&self, e: &[u32]) -> Vec<i64> {
        let mut k = Vec::with_capacity(self.weights.len() + e.len() + 1);
        for w in &self.weights {
            k.push(w.iter().zip(e).map(|(a, &b)| a * b as i64).sum());
        }
        match self.tie {
            Tiebreak::DegRevLex => {
                k.push(e.iter().map(|&b| b as i64).sum());
                k.extend(e.iter().rev().map(|&b| -(b as i64)));
            }
            Tiebreak::Lex => k.extend(e.iter().map(|&b| b as i64)),
        }
        k
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn has_negative_weight(&self) -> bool {
        self.weights.iter().flatten().any(|&w| w < 0)
    }

    /// Check that the order is a multiplicative well-order usable by the
    /// Buchberger engine on this signature.
    pub fn check_admissible(&self, sig: &Signature) -> Result<()> {
        let n = sig.nvars();
        for w in &self.weights {
            if w.len() != n {
                return Err(Error::InadmissibleWeight(format!(
                    "weight row has {} entries, signature has {n} generators",
                    w.len()
                )));
            }
            for (i, k) in sig.kinds().iter().enumerate() {
                match *k {
                    VarKind::WeylX { partner } if w[i] + w[partner] < 0 => {
                        return Err(Error::InadmissibleWeight(format!(
                            "u({}) + u({}) = {} < 0",
                            sig.names()[i],
                            sig.names()[partner],
                            w[i] + w[partner]
                        )));
                    }
                    VarKind::Homog if w[i] != 0 => {
                        return Err(Error::InadmissibleWeight(
                            "homogenizing generator must have weight 0".into(),
                        ));
                    }
                    VarKind::TwistS { .. } | VarKind::TwistT { .. } if w[i] < 0 => {
                        return Err(Error::InadmissibleWeight(format!(
                            "negative weight on twist generator {}",
                            sig.names()[i]
                        )));
                    }
                    _ => {}
                }
            }
        }
        if self.has_negative_weight() {
            if sig.homog().is_none() {
                return Err(Error::InadmissibleWeight(
                    "negative weights need a homogenized signature".into(),
                ));
            }
            if self.tie != Tiebreak::DegRevLex {
                return Err(Error::InadmissibleWeight(
                    "negative weights need the degree tiebreak".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::degrevlex();
        // x^2 > x*y > y^2 > x > y > 1 in degrevlex with x > y
        let seq = [[2u32, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // revlex: x*z^0*y^2 vs x^2*z (x,y,z): same degree, last var decides
        assert_eq!(o.cmp(&[1, 2, 0], &[2, 0, 1]), Ordering::Greater);
    }

    #[test]
    fn weight_first() {
        let o = MonomialOrder::weighted(vec![-1, 1]);
        assert_eq!(o.cmp(&[0, 1], &[5, 0]), Ordering::Greater);
    }

    #[test]
    fn admissibility() {
        let sig = Signature::weyl(&["t"], &[] as &[&str]).unwrap();
        assert!(MonomialOrder::weighted(vec![-1, 1]).check_admissible(&sig).is_err());
        let h = sig.homogenized("h").unwrap();
        assert!(MonomialOrder::weighted(vec![-1, 1, 0]).check_admissible(&h).is_ok());
        assert!(MonomialOrder::weighted(vec![-1, 0, 0]).check_admissible(&h).is_err());
    }
}
