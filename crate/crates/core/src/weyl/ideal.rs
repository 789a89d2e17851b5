use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::linalg::{sparse_row, Dependency};
use crate::poly::{Exponents, MultiPoly};
use crate::rational::Rational;

use super::element::WeylElement;
use super::groebner::{groebner, GroebnerBasis};
use super::order::MonomialOrder;
use super::signature::{Signature, VarKind};

/// A left ideal given by generators, with Groebner bases cached per order.
pub struct LeftIdeal {
    sig: Arc<Signature>,
    gens: Vec<WeylElement>,
    cache: Mutex<Vec<(MonomialOrder, Arc<GroebnerBasis>)>>,
}

impl Clone for LeftIdeal {
    fn clone(&self) -> Self {
        LeftIdeal {
            sig: self.sig.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache poisoned").clone()),
        }
    }
}

impl std::fmt::Debug for LeftIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.gens).finish()
    }
}

impl LeftIdeal {
    pub fn new(sig: &Arc<Signature>, gens: Vec<WeylElement>) -> Result<Self> {
        for g in &gens {
            if g.signature().names() != sig.names() {
                return Err(Error::SignatureMismatch("generator over another algebra".into()));
            }
        }
        Ok(LeftIdeal { sig: sig.clone(), gens, cache: Mutex::new(Vec::new()) })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.gens
    }

    pub fn groebner(&self, ord: &MonomialOrder, cfg: &EngineConfig) -> Result<Arc<GroebnerBasis>> {
        if let Some((_, gb)) = self.cache.lock().expect("cache poisoned").iter().find(|(o, _)| o == ord) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner(&self.sig, &self.gens, ord, cfg)?);
        self.cache.lock().expect("cache poisoned").push((ord.clone(), gb.clone()));
        Ok(gb)
    }

    pub fn contains(&self, e: &WeylElement, cfg: &EngineConfig) -> Result<bool> {
        Ok(self.groebner(&MonomialOrder::degrevlex(), cfg)?.contains(e))
    }

    /// Sum with more generators.
    pub fn extend(&self, more: impl IntoIterator<Item = WeylElement>) -> Result<Self> {
        let mut gens = self.gens.clone();
        gens.extend(more);
        LeftIdeal::new(&self.sig, gens)
    }

    /// True iff every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &LeftIdeal, cfg: &EngineConfig) -> Result<bool> {
        let gb = self.groebner(&MonomialOrder::degrevlex(), cfg)?;
        Ok(other.gens.iter().all(|g| gb.contains(g)))
    }
}

/// `I ∩ (subalgebra on the kept generators)`, as an ideal of that subalgebra.
///
/// Weyl pairs must be dropped together; a twist block may lose its right
/// generator alone, leaving the left one central.
pub fn eliminate(ideal: &LeftIdeal, drop: &[&str], cfg: &EngineConfig) -> Result<LeftIdeal> {
    let sig = ideal.signature();
    let idx: Vec<usize> = drop
        .iter()
        .map(|n| sig.index(n).ok_or_else(|| Error::InvalidDrop(format!("no generator `{n}`"))))
        .collect::<Result<_>>()?;
    for &i in &idx {
        match sig.kinds()[i] {
            VarKind::WeylX { partner } | VarKind::WeylD { partner } if !idx.contains(&partner) => {
                return Err(Error::InvalidDrop(format!(
                    "`{}` dropped without its partner `{}`",
                    sig.names()[i],
                    sig.names()[partner]
                )));
            }
            VarKind::TwistS { partner, .. } if !idx.contains(&partner) => {
                return Err(Error::InvalidDrop(format!(
                    "`{}` dropped while `{}` is kept",
                    sig.names()[i],
                    sig.names()[partner]
                )));
            }
            VarKind::Homog => return Err(Error::InvalidDrop("homogenizing generator".into())),
            _ => {}
        }
    }
    let ord = MonomialOrder::elimination(sig.nvars(), &idx);
    let gb = ideal.groebner(&ord, cfg)?;
    let sub = sig.restrict(&idx)?;
    let kept: Vec<WeylElement> = gb
        .elements()
        .iter()
        .filter(|g| idx.iter().all(|&i| g.free_of(i)))
        .map(|g| g.transfer(&sub))
        .collect::<Result<_>>()?;
    LeftIdeal::new(&sub, kept)
}

/// A Groebner basis adapted to a weight vector, with the initial forms.
#[derive(Debug, Clone)]
pub struct WeightedBasis {
    pub weights: Vec<i64>,
    pub basis: Vec<WeylElement>,
    pub initial: Vec<WeylElement>,
}

fn fresh_name(sig: &Signature, stem: &str) -> String {
    if sig.index(stem).is_none() {
        return stem.to_string();
    }
    (0..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| sig.index(n).is_none())
        .expect("some name is free")
}

/// Multiply each term by a power of `h` to reach the top total degree.
fn homogenize(e: &WeylElement, target: &Arc<Signature>) -> Result<WeylElement> {
    let h = target.homog().expect("homogenized signature");
    let moved = e.transfer(target)?;
    let top = moved.total_degree().unwrap_or(0);
    Ok(WeylElement::from_terms(
        target,
        moved.terms().map(|(ex, c)| {
            let mut ne = ex.clone();
            ne[h] = top - ex.iter().sum::<u32>();
            (ne, c.clone())
        }),
    ))
}

/// Groebner basis with respect to the weight `w` (ties by degrevlex), and the
/// `w`-initial forms of its elements. Negative weights go through the
/// homogenized algebra.
pub fn initial_ideal_weight(ideal: &LeftIdeal, w: &[i64], cfg: &EngineConfig) -> Result<WeightedBasis> {
    let sig = ideal.signature();
    if w.len() != sig.nvars() {
        return Err(Error::InadmissibleWeight(format!(
            "weight has {} entries, algebra has {} generators",
            w.len(),
            sig.nvars()
        )));
    }
    let basis: Vec<WeylElement> = if w.iter().any(|&x| x < 0) {
        let hs = sig.homogenized(&fresh_name(sig, "h"))?;
        let h = hs.homog().expect("just added");
        let gens: Vec<WeylElement> =
            ideal.generators().iter().map(|g| homogenize(g, &hs)).collect::<Result<_>>()?;
        let mut wh = w.to_vec();
        wh.push(0);
        let ord = MonomialOrder::weighted(wh);
        ord.check_admissible(&hs)?;
        let gb = groebner(&hs, &gens, &ord, cfg)?;
        let mut out: Vec<WeylElement> = Vec::new();
        for g in gb.elements() {
            let d = g.dehomogenize(h).transfer(sig)?;
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
        out
    } else {
        let ord = MonomialOrder::weighted(w.to_vec());
        ord.check_admissible(sig)?;
        ideal.groebner(&ord, cfg)?.elements().to_vec()
    };
    let initial = basis.iter().map(|g| g.initial_form(w)).collect();
    Ok(WeightedBasis { weights: w.to_vec(), basis, initial })
}

/// Detects linear dependencies among normal forms modulo a Groebner basis.
pub struct NfDependency<'a> {
    gb: &'a GroebnerBasis,
    columns: HashMap<Exponents, usize>,
    dep: Dependency,
}

const TAG_OFFSET: usize = 1 << 40;

impl<'a> NfDependency<'a> {
    pub fn new(gb: &'a GroebnerBasis) -> Self {
        NfDependency { gb, columns: HashMap::new(), dep: Dependency::new(TAG_OFFSET) }
    }

    /// Push `e`; on dependency returns `lambda` with `sum lambda_i e_i ∈ I`
    /// and `lambda_last = 1`.
    pub fn push(&mut self, e: &WeylElement) -> Option<Vec<Rational>> {
        let nf = self.gb.normal_form(e);
        let mut entries = Vec::with_capacity(nf.num_terms());
        for (ex, c) in nf.terms() {
            let n = self.columns.len();
            let col = *self.columns.entry(ex.clone()).or_insert(n);
            entries.push((col, c.clone()));
        }
        self.dep.push(sparse_row(entries))
    }
}

/// Monic generator of `I ∩ Q[v]` for a central generator `v`, searching up
/// to degree `max_deg`. `None` if the intersection has no nonzero element of
/// that degree.
pub fn intersect_univariate(
    ideal: &LeftIdeal,
    v: &str,
    max_deg: u32,
    cfg: &EngineConfig,
) -> Result<Option<MultiPoly>> {
    let sig = ideal.signature();
    let i = sig.index_of(v)?;
    if !matches!(sig.kinds()[i], VarKind::Central | VarKind::TwistS { .. }) {
        return Err(Error::SignatureMismatch(format!("`{v}` does not generate a commutative subring")));
    }
    let gb = ideal.groebner(&MonomialOrder::degrevlex(), cfg)?;
    let mut nd = NfDependency::new(&gb);
    let mut e = vec![0; sig.nvars()];
    for d in 0..=max_deg {
        e[i] = d;
        if let Some(lambda) = nd.push(&WeylElement::monomial(sig, e.clone(), Rational::one())) {
            return Ok(Some(MultiPoly::univariate(v, &lambda)));
        }
    }
    Ok(None)
}
