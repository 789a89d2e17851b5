use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{add_exp, fmt_terms, Exponents, MultiPoly};
use crate::rational::Rational;

use super::signature::Signature;

/// An element of a PBW algebra, stored in normal order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    sig: Arc<Signature>,
    terms: BTreeMap<Exponents, Rational>,
}

impl WeylElement {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        WeylElement { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(sig: &Arc<Signature>, c: Rational) -> Self {
        let mut e = Self::zero(sig);
        e.add_term(vec![0; sig.nvars()], c);
        e
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn gen(sig: &Arc<Signature>, name: &str) -> Result<Self> {
        let i = sig.index_of(name)?;
        let mut e = vec![0; sig.nvars()];
        e[i] = 1;
        Ok(Self::monomial(sig, e, Rational::one()))
    }

    pub fn monomial(sig: &Arc<Signature>, e: Exponents, c: Rational) -> Self {
        let mut out = Self::zero(sig);
        out.add_term(e, c);
        out
    }

    pub fn from_terms(
        sig: &Arc<Signature>,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Self {
        let mut out = Self::zero(sig);
        for (e, c) in terms {
            assert_eq!(e.len(), sig.nvars(), "exponent length mismatch");
            out.add_term(e, c);
        }
        out
    }

    /// Read a commutative polynomial as a normal-ordered expression: each
    /// monomial is placed in the generator sequence of `sig`, matched by name.
    pub fn from_poly(sig: &Arc<Signature>, p: &MultiPoly) -> Result<Self> {
        let idx: Vec<usize> = p
            .vars()
            .iter()
            .map(|v| sig.index_of(v))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(sig);
        for (e, c) in p.terms() {
            let mut ne = vec![0; sig.nvars()];
            for (k, &i) in idx.iter().enumerate() {
                ne[i] = add_exp(ne[i], e[k]);
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Normal-ordered symbols as a commutative polynomial over the generator
    /// names of the signature.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.sig.names(), self.terms.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Move into another signature, matching generators by name. Fails if a
    /// used generator is absent from `target`.
    pub fn transfer(&self, target: &Arc<Signature>) -> Result<Self> {
        let map: Vec<Option<usize>> = self.sig.names().iter().map(|n| target.index(n)).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.nvars()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    Error::SignatureMismatch(format!("generator `{}` not in target", self.sig.names()[i]))
                })?;
                ne[j] = k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.sig.names(),
                other.sig.names()
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut out = Self::zero(&self.sig);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let cab = ca * cb;
                for (e, k) in self.sig.mono_mul(ea, eb) {
                    out.add_term(e, &cab * &Rational::from(k));
                }
            }
        }
        Ok(out)
    }

    /// Sum; panics on signature mismatch (use `try_add` to handle it).
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("signature mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Normal-ordered product; panics on signature mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("signature mismatch")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        WeylElement {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.sig);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Commutator `self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Maximal `w`-weight over the terms.
    pub fn weight_degree(&self, w: &[i64]) -> Option<i64> {
        self.terms.keys().map(|e| weight_of(w, e)).max()
    }

    /// Sum of the terms of maximal `w`-weight.
    pub fn initial_form(&self, w: &[i64]) -> Self {
        let Some(top) = self.weight_degree(w) else {
            return self.clone();
        };
        WeylElement {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| weight_of(w, e) == top)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// True iff no term uses generator `i`.
    pub fn free_of(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] == 0)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Set the homogenizing generator to 1.
    pub fn dehomogenize(&self, h: usize) -> Self {
        let mut out = Self::zero(&self.sig);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[h] = 0;
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Divide by the leading (largest exponent key) coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

pub(crate) fn weight_of(w: &[i64], e: &[u32]) -> i64 {
    w.iter().zip(e).map(|(a, &b)| a * b as i64).sum()
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.sig.names(), self.terms.iter())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
