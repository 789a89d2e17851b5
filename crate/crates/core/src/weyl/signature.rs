use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{add_exp, Exponents};

/// Role of one generator in a PBW algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Commutative side of a Weyl pair; `partner` is the derivation.
    WeylX { partner: usize },
    /// Derivation side of a Weyl pair: `[d, x] = 1` (or `h^2`).
    WeylD { partner: usize },
    /// Left side of a twist block: `t s = (s + shift) t`.
    TwistS { partner: usize, shift: i64 },
    /// Right side of a twist block.
    TwistT { partner: usize, shift: i64 },
    Central,
    /// Homogenizing variable; central, always last.
    Homog,
}

/// Generator names and the relation table of a PBW algebra.
///
/// Normal order is the generator sequence itself; in every pair the left
/// generator precedes its partner.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    names: Vec<String>,
    kinds: Vec<VarKind>,
}

#[derive(Debug, Default, Clone)]
pub struct SignatureBuilder {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    homog: Option<String>,
}

impl SignatureBuilder {
    pub fn weyl_pair(mut self, x: &str, d: &str) -> Self {
        let i = self.names.len();
        self.names.push(x.into());
        self.kinds.push(VarKind::WeylX { partner: i + 1 });
        self.names.push(d.into());
        self.kinds.push(VarKind::WeylD { partner: i });
        self
    }

    /// Twist block with `t s = (s + shift) t`.
    pub fn twist(mut self, s: &str, t: &str, shift: i64) -> Self {
        let i = self.names.len();
        self.names.push(s.into());
        self.kinds.push(VarKind::TwistS { partner: i + 1, shift });
        self.names.push(t.into());
        self.kinds.push(VarKind::TwistT { partner: i, shift });
        self
    }

    pub fn central(mut self, v: &str) -> Self {
        self.names.push(v.into());
        self.kinds.push(VarKind::Central);
        self
    }

    pub fn homogenize(mut self, h: &str) -> Self {
        self.homog = Some(h.into());
        self
    }

    pub fn build(mut self) -> Result<Arc<Signature>> {
        if let Some(h) = self.homog.take() {
            self.names.push(h);
            self.kinds.push(VarKind::Homog);
        }
        for (i, n) in self.names.iter().enumerate() {
            if n.is_empty() || self.names[..i].contains(n) {
                return Err(Error::SignatureMismatch(format!("duplicate or empty generator name `{n}`")));
            }
        }
        Ok(Arc::new(Signature { names: self.names, kinds: self.kinds }))
    }
}

/// Name of the derivation paired with the coordinate `x`.
pub fn d_name(x: &str) -> String {
    format!("d{x}")
}

impl Signature {
    pub fn builder() -> SignatureBuilder {
        SignatureBuilder::default()
    }

    /// `D_n` on the given coordinates (derivations named `d<x>`), followed by
    /// central parameters.
    pub fn weyl(xs: &[impl AsRef<str>], central: &[impl AsRef<str>]) -> Result<Arc<Signature>> {
        let mut b = Signature::builder();
        for x in xs {
            b = b.weyl_pair(x.as_ref(), &d_name(x.as_ref()));
        }
        for c in central {
            b = b.central(c.as_ref());
        }
        b.build()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::SignatureMismatch(format!("no generator named `{name}`")))
    }

    pub fn homog(&self) -> Option<usize> {
        self.kinds.iter().position(|k| *k == VarKind::Homog)
    }

    pub fn is_commutative(&self) -> bool {
        self.kinds
            .iter()
            .all(|k| matches!(k, VarKind::Central | VarKind::Homog))
    }

    pub fn has_twist(&self) -> bool {
        self.kinds.iter().any(|k| matches!(k, VarKind::TwistS { .. }))
    }

    /// Copy of this signature with a homogenizing generator appended.
    pub fn homogenized(&self, h: &str) -> Result<Arc<Signature>> {
        if self.homog().is_some() {
            return Err(Error::SignatureMismatch("already homogenized".into()));
        }
        if self.index(h).is_some() {
            return Err(Error::SignatureMismatch(format!("generator `{h}` already present")));
        }
        let mut names = self.names.clone();
        let mut kinds = self.kinds.clone();
        names.push(h.into());
        kinds.push(VarKind::Homog);
        Ok(Arc::new(Signature { names, kinds }))
    }

    /// The subalgebra on the generators not in `drop`, as its own signature.
    /// A twist block losing its right generator becomes a central variable.
    pub fn restrict(&self, drop: &[usize]) -> Result<Arc<Signature>> {
        let mut b = Signature::builder();
        for (i, k) in self.kinds.iter().enumerate() {
            if drop.contains(&i) {
                continue;
            }
            let n = &self.names[i];
            match *k {
                VarKind::WeylX { partner } => b = b.weyl_pair(n, &self.names[partner]),
                VarKind::TwistS { partner, shift } => {
                    if drop.contains(&partner) {
                        b = b.central(n);
                    } else {
                        b = b.twist(n, &self.names[partner], shift);
                    }
                }
                VarKind::TwistT { partner, .. } => {
                    if drop.contains(&partner) {
                        b = b.central(n);
                    }
                }
                VarKind::WeylD { .. } => {}
                VarKind::Central => b = b.central(n),
                VarKind::Homog => b = b.homogenize(n),
            }
        }
        b.build()
    }

    /// Normal-ordered product of two monomials with integer coefficients.
    pub fn mono_mul(&self, a: &[u32], b: &[u32]) -> Vec<(Exponents, BigInt)> {
        let n = self.nvars();
        debug_assert!(a.len() == n && b.len() == n);
        let h = self.homog();
        let mut base: Exponents = vec![0; n];
        for i in 0..n {
            if matches!(self.kinds[i], VarKind::Central | VarKind::Homog) {
                base[i] = add_exp(a[i], b[i]);
            }
        }
        let mut acc: Vec<(Exponents, BigInt)> = vec![(base, BigInt::one())];
        for (i, k) in self.kinds.iter().enumerate() {
            match *k {
                VarKind::WeylX { partner: j } => {
                    // x^a d^b * x^c d^e = sum_k k! C(b,k) C(c,k) x^(a+c-k) d^(b+e-k)
                    let (xa, db, xc, de) = (a[i], a[j], b[i], b[j]);
                    let kmax = db.min(xc);
                    let mut next = Vec::with_capacity(acc.len() * (kmax as usize + 1));
                    for (e, c) in &acc {
                        let mut coef = BigInt::one();
                        for kk in 0..=kmax {
                            if kk > 0 {
                                // coef_k = coef_{k-1} * (b-k+1)(c-k+1)/k
                                coef = coef * BigInt::from((db - kk + 1) as u64 * (xc - kk + 1) as u64)
                                    / BigInt::from(kk);
                            }
                            let mut ne = e.clone();
                            ne[i] = add_exp(xa, xc) - kk;
                            ne[j] = add_exp(db, de) - kk;
                            if kk > 0 {
                                if let Some(h) = h {
                                    ne[h] = add_exp(ne[h], 2 * kk);
                                }
                            }
                            next.push((ne, c * &coef));
                        }
                    }
                    acc = next;
                }
                VarKind::TwistS { partner: j, shift } => {
                    // s^a t^b * s^c t^e = s^a (s + shift*b)^c t^(b+e)
                    let (sa, tb, sc, te) = (a[i], a[j], b[i], b[j]);
                    let sb = BigInt::from(shift) * BigInt::from(tb);
                    let mut next = Vec::new();
                    for (e, c) in &acc {
                        if sb.is_zero() || sc == 0 {
                            let mut ne = e.clone();
                            ne[i] = add_exp(sa, sc);
                            ne[j] = add_exp(tb, te);
                            next.push((ne, c.clone()));
                            continue;
                        }
                        let mut binom = BigInt::one();
                        for jj in 0..=sc {
                            if jj > 0 {
                                binom = binom * BigInt::from(sc - jj + 1) / BigInt::from(jj);
                            }
                            let coef = &binom * num_traits::pow(sb.clone(), (sc - jj) as usize);
                            let mut ne = e.clone();
                            ne[i] = add_exp(sa, jj);
                            ne[j] = add_exp(tb, te);
                            next.push((ne, c * coef));
                        }
                    }
                    acc = next;
                }
                _ => {}
            }
        }
        acc
    }

    /// Total degree ignoring the homogenizing generator.
    pub fn affine_degree(&self, e: &[u32]) -> u32 {
        let h = self.homog();
        e.iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != h)
            .map(|(_, &k)| k)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_relation() {
        let sig = Signature::weyl(&["x"], &[] as &[&str]).unwrap();
        // d * x = x d + 1
        let p = sig.mono_mul(&[0, 1], &[1, 0]);
        assert_eq!(p, vec![(vec![1, 1], BigInt::one()), (vec![0, 0], BigInt::one())]);
        // d^2 * x = x d^2 + 2 d
        let p = sig.mono_mul(&[0, 2], &[1, 0]);
        assert_eq!(p, vec![(vec![1, 2], BigInt::one()), (vec![0, 1], BigInt::from(2))]);
    }

    #[test]
    fn twist_relation() {
        let sig = Signature::builder().twist("s", "t", 1).build().unwrap();
        // t s = s t + t
        let p = sig.mono_mul(&[0, 1], &[1, 0]);
        assert_eq!(p, vec![(vec![0, 1], BigInt::one()), (vec![1, 1], BigInt::one())]);
    }

    #[test]
    fn homogenized_weyl_relation() {
        let sig = Signature::builder().weyl_pair("x", "dx").homogenize("h").build().unwrap();
        let p = sig.mono_mul(&[0, 1, 0], &[1, 0, 0]);
        assert_eq!(p, vec![(vec![1, 1, 0], BigInt::one()), (vec![0, 0, 2], BigInt::one())]);
    }

    #[test]
    fn restrict_keeps_subalgebra() {
        let sig = Signature::builder()
            .weyl_pair("x", "dx")
            .twist("s", "dt", -1)
            .build()
            .unwrap();
        let sub = sig.restrict(&[3]).unwrap();
        assert_eq!(sub.names(), &["x", "dx", "s"]);
        assert_eq!(sub.kinds()[2], VarKind::Central);
    }
}
