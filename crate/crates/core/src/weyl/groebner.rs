//! Left Buchberger algorithm over integer coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::poly::Exponents;
use crate::rational::{common_denominator, Rational};

use super::element::WeylElement;
use super::order::MonomialOrder;
use super::signature::Signature;

type Key = Vec<i64>;
type Terms = BTreeMap<Key, (Exponents, BigInt)>;

/// Integer polynomial keyed by order key; the last entry is the leading term.
#[derive(Debug, Clone, Default)]
struct IPoly {
    terms: Terms,
    sugar: u32,
}

impl IPoly {
    fn lead(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.last_key_value().map(|(_, (e, c))| (e, c))
    }

    fn lead_exp(&self) -> &Exponents {
        &self.terms.last_key_value().expect("nonzero").1 .0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c))
    }

    /// Divide by content and make the leading coefficient positive. Returns
    /// the divisor used (signed).
    fn make_primitive(&mut self) -> BigInt {
        let mut g = self.content();
        if g.is_zero() {
            return BigInt::one();
        }
        if self.lead().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.values_mut() {
                *c = &*c / &g;
            }
        }
        g
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm_exp(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponents,
    key: Key,
    sugar: u32,
}

struct Engine<'a> {
    sig: &'a Signature,
    ord: &'a MonomialOrder,
}

impl Engine<'_> {
    fn import_elem(&self, e: &WeylElement) -> IPoly {
        let den = common_denominator(e.terms().map(|(_, c)| c));
        let mut p = IPoly::default();
        for (ex, c) in e.terms() {
            let v = c.numer() * (&den / c.denom());
            p.terms.insert(self.ord.key(ex), (ex.clone(), v));
        }
        p.sugar = e.total_degree().unwrap_or(0);
        p.make_primitive();
        p
    }

    fn to_elem(&self, p: &IPoly, sig: &Arc<Signature>) -> WeylElement {
        WeylElement::from_terms(
            sig,
            p.terms.values().map(|(e, c)| (e.clone(), Rational::from(c.clone()))),
        )
    }

    fn mul_mono(&self, m: &[u32], g: &IPoly) -> Terms {
        let mut out = Terms::new();
        for (e, c) in g.terms.values() {
            for (ne, k) in self.sig.mono_mul(m, e) {
                let key = self.ord.key(&ne);
                let v = c * k;
                match out.entry(key) {
                    std::collections::btree_map::Entry::Vacant(s) => {
                        s.insert((ne, v));
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        o.get_mut().1 += v;
                        if o.get().1.is_zero() {
                            o.remove();
                        }
                    }
                }
            }
        }
        out
    }

    /// `f <- a*f - b*q`.
    fn combine(f: &mut Terms, a: &BigInt, b: &BigInt, q: Terms) {
        if !a.is_one() {
            for (_, c) in f.values_mut() {
                *c *= a;
            }
        }
        for (k, (e, c)) in q {
            let v = -(c * b);
            match f.entry(k) {
                std::collections::btree_map::Entry::Vacant(s) => {
                    s.insert((e, v));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    o.get_mut().1 += v;
                    if o.get().1.is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }

    fn find_reducer<'b>(basis: &'b [IPoly], active: &[bool], e: &[u32]) -> Option<&'b IPoly> {
        basis
            .iter()
            .zip(active)
            .filter(|(g, &on)| on && divides(g.lead_exp(), e))
            .map(|(g, _)| g)
            .min_by_key(|g| g.terms.len())
    }

    /// Reduce `g`'s multiple into `f` to cancel the leading term of `f`.
    /// Returns the factor `a` applied to `f`.
    fn step(&self, f: &mut IPoly, g: &IPoly) -> BigInt {
        let (lf, cf) = f.lead().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let (lg, cg) = g.lead().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let m: Exponents = lf.iter().zip(&lg).map(|(a, b)| a - b).collect();
        let q = self.mul_mono(&m, g);
        let gcd = cf.gcd(&cg);
        let a = &cg / &gcd;
        let b = &cf / &gcd;
        f.sugar = f.sugar.max(deg(&m) + g.sugar);
        Self::combine(&mut f.terms, &a, &b, q);
        a
    }

    fn top_reduce(&self, mut f: IPoly, basis: &[IPoly], active: &[bool]) -> IPoly {
        let mut steps = 0u32;
        while let Some((e, _)) = f.lead() {
            let Some(g) = Self::find_reducer(basis, active, e) else {
                break;
            };
            self.step(&mut f, g);
            steps += 1;
            if steps.is_multiple_of(16) {
                f.make_primitive();
            }
        }
        f.make_primitive();
        f
    }

    /// Full reduction. Returns `(r, factor)` with `r = factor * NF(f)`.
    fn full_reduce(&self, mut f: IPoly, basis: &[IPoly], active: &[bool]) -> (IPoly, Rational) {
        let mut r = IPoly { terms: Terms::new(), sugar: f.sugar };
        let mut factor = Rational::one();
        let mut steps = 0u32;
        while let Some((e, _)) = f.lead() {
            match Self::find_reducer(basis, active, e) {
                Some(g) => {
                    let a = self.step(&mut f, g);
                    if !a.is_one() {
                        for (_, c) in r.terms.values_mut() {
                            *c *= &a;
                        }
                        factor = factor * Rational::from(a);
                    }
                    steps += 1;
                    if steps.is_multiple_of(16) {
                        let g = f.content().gcd(&r.content());
                        if !g.is_zero() && !g.is_one() {
                            for (_, c) in f.terms.values_mut().chain(r.terms.values_mut()) {
                                *c = &*c / &g;
                            }
                            factor = factor / Rational::from(g);
                        }
                    }
                }
                None => {
                    let (k, v) = f.terms.pop_last().expect("nonzero");
                    r.terms.insert(k, v);
                }
            }
        }
        r.sugar = r.sugar.max(f.sugar);
        let g = r.make_primitive();
        factor = factor / Rational::from(g);
        (r, factor)
    }

    fn spoly(&self, f: &IPoly, g: &IPoly, lcm: &[u32]) -> IPoly {
        let mf: Exponents = lcm.iter().zip(f.lead_exp()).map(|(a, b)| a - b).collect();
        let mg: Exponents = lcm.iter().zip(g.lead_exp()).map(|(a, b)| a - b).collect();
        let (cf, cg) = (f.lead().unwrap().1.clone(), g.lead().unwrap().1.clone());
        let gcd = cf.gcd(&cg);
        let mut s = IPoly {
            terms: self.mul_mono(&mf, f),
            sugar: (deg(&mf) + f.sugar).max(deg(&mg) + g.sugar),
        };
        let q = self.mul_mono(&mg, g);
        Self::combine(&mut s.terms, &(&cg / &gcd), &(&cf / &gcd), q);
        s.make_primitive();
        s
    }
}

/// A reduced left Groebner basis, sorted by ascending leading monomial.
/// Elements are primitive integer polynomials with positive leading
/// coefficient.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    sig: Arc<Signature>,
    order: MonomialOrder,
    elems: Vec<WeylElement>,
    polys: Vec<IPoly>,
}

impl GroebnerBasis {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// True iff the ideal is the whole algebra.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lead_exp().iter().all(|&k| k == 0)
    }

    pub fn leading_exponents(&self) -> Vec<Exponents> {
        self.polys.iter().map(|p| p.lead_exp().clone()).collect()
    }

    /// Leading term of `e` under this basis's order.
    pub fn leading_exponent(&self, e: &WeylElement) -> Option<Exponents> {
        e.terms()
            .map(|(ex, _)| ex)
            .max_by(|a, b| self.order.cmp(a, b))
            .cloned()
    }

    /// The unique normal form: a linear map, zero exactly on the ideal.
    pub fn normal_form(&self, e: &WeylElement) -> WeylElement {
        assert_eq!(e.signature().names(), self.sig.names(), "signature mismatch");
        if e.is_zero() {
            return e.clone();
        }
        let eng = Engine { sig: &self.sig, ord: &self.order };
        let den = common_denominator(e.terms().map(|(_, c)| c));
        let mut f = IPoly::default();
        for (ex, c) in e.terms() {
            f.terms.insert(self.order.key(ex), (ex.clone(), c.numer() * (&den / c.denom())));
        }
        let active = vec![true; self.polys.len()];
        let (r, factor) = eng.full_reduce(f, &self.polys, &active);
        let scale = (factor * Rational::from(den)).recip();
        eng.to_elem(&r, &self.sig).scale(&scale)
    }

    pub fn contains(&self, e: &WeylElement) -> bool {
        self.normal_form(e).is_zero()
    }
}

fn check_inputs(gens: &[WeylElement], sig: &Arc<Signature>, ord: &MonomialOrder) -> Result<()> {
    for g in gens {
        if g.signature().names() != sig.names() || g.signature().kinds() != sig.kinds() {
            return Err(Error::SignatureMismatch("generators over different algebras".into()));
        }
    }
    ord.check_admissible(sig)?;
    if ord.has_negative_weight() {
        for g in gens {
            let mut degs = g.terms().map(|(e, _)| deg(e));
            if let Some(d0) = degs.next() {
                if degs.any(|d| d != d0) {
                    return Err(Error::InadmissibleWeight(
                        "negative weights need homogeneous generators".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Reduced left Groebner basis of the left ideal generated by `gens`.
pub fn groebner(
    sig: &Arc<Signature>,
    gens: &[WeylElement],
    ord: &MonomialOrder,
    cfg: &EngineConfig,
) -> Result<GroebnerBasis> {
    check_inputs(gens, sig, ord)?;
    let eng = Engine { sig, ord };
    let commutative = sig.is_commutative();

    let mut basis: Vec<IPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<IPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| eng.import_elem(g)).collect();
    inputs.sort_by(|a, b| a.terms.last_key_value().unwrap().0.cmp(b.terms.last_key_value().unwrap().0));

    let mut unit = false;
    let insert = |p: IPoly, basis: &mut Vec<IPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| -> bool {
        let lk = p.lead_exp().clone();
        let k = basis.len();
        if lk.iter().all(|&e| e == 0) {
            return true;
        }
        // Gebauer-Moller B_k on existing pairs
        pairs.retain(|pr| {
            if !divides(&lk, &pr.lcm) {
                return true;
            }
            let li = basis[pr.i].lead_exp();
            let lj = basis[pr.j].lead_exp();
            lcm_exp(li, &lk) == pr.lcm || lcm_exp(lj, &lk) == pr.lcm
        });
        let mut new: Vec<Pair> = (0..k)
            .filter(|&i| active[i])
            .map(|i| {
                let li = basis[i].lead_exp();
                let lcm = lcm_exp(li, &lk);
                let mi: Exponents = lcm.iter().zip(li).map(|(a, b)| a - b).collect();
                let mk: Exponents = lcm.iter().zip(&lk).map(|(a, b)| a - b).collect();
                Pair {
                    i,
                    j: k,
                    key: ord.key(&lcm),
                    sugar: (deg(&mi) + basis[i].sugar).max(deg(&mk) + p.sugar),
                    lcm,
                }
            })
            .collect();
        // M: drop pairs whose lcm is a proper multiple of another new lcm
        let lcms: Vec<Exponents> = new.iter().map(|p| p.lcm.clone()).collect();
        new.retain(|p| !lcms.iter().any(|l| *l != p.lcm && divides(l, &p.lcm)));
        // F: one pair per lcm; product criterion only in commutative algebras
        let mut by_lcm: BTreeMap<Exponents, Vec<Pair>> = BTreeMap::new();
        for p in new {
            by_lcm.entry(p.lcm.clone()).or_default().push(p);
        }
        for (lcm, group) in by_lcm {
            if commutative
                && group.iter().any(|p| {
                    let li = basis[p.i].lead_exp();
                    li.iter().zip(&lk).zip(&lcm).all(|((a, b), l)| a + b == *l)
                })
            {
                continue;
            }
            pairs.push(group.into_iter().next().unwrap());
        }
        for i in 0..k {
            if active[i] && divides(&lk, basis[i].lead_exp()) {
                active[i] = false;
            }
        }
        basis.push(p);
        active.push(true);
        false
    };

    for p in inputs {
        let r = eng.top_reduce(p, &basis, &active);
        if !r.is_zero() && insert(r, &mut basis, &mut active, &mut pairs) {
            unit = true;
            break;
        }
    }

    while !unit && !pairs.is_empty() {
        let s0 = pairs.iter().map(|p| p.sugar).min().unwrap();
        if s0 > cfg.max_degree {
            return Err(Error::Capability(format!(
                "Groebner basis needs degree {s0} > cap {} (set {} to raise it)",
                cfg.max_degree,
                crate::config::MAX_DEGREE_ENV
            )));
        }
        let (mut batch, rest): (Vec<Pair>, Vec<Pair>) = pairs.drain(..).partition(|p| p.sugar == s0);
        pairs = rest;
        batch.sort_by(|a, b| a.key.cmp(&b.key).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
        let snapshot_active = active.clone();
        let reduced: Vec<IPoly> = par_map(&batch, |p| {
            let s = eng.spoly(&basis[p.i], &basis[p.j], &p.lcm);
            eng.top_reduce(s, &basis, &snapshot_active)
        });
        for r in reduced {
            if r.is_zero() {
                continue;
            }
            let r = eng.top_reduce(r, &basis, &active);
            if r.is_zero() {
                continue;
            }
            if insert(r, &mut basis, &mut active, &mut pairs) {
                unit = true;
                break;
            }
        }
    }

    if unit {
        let mut one = IPoly::default();
        let e = vec![0; sig.nvars()];
        one.terms.insert(ord.key(&e), (e, BigInt::one()));
        return Ok(GroebnerBasis {
            sig: sig.clone(),
            order: ord.clone(),
            elems: vec![eng.to_elem(&one, sig)],
            polys: vec![one],
        });
    }

    // minimal basis: drop elements whose lead is divisible by another lead
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| {
        basis[a]
            .terms
            .last_key_value()
            .unwrap()
            .0
            .cmp(basis[b].terms.last_key_value().unwrap().0)
            .then(a.cmp(&b))
    });
    let mut minimal: Vec<IPoly> = Vec::new();
    for i in idx {
        let li = basis[i].lead_exp();
        if !minimal.iter().any(|g| divides(g.lead_exp(), li)) {
            minimal.push(basis[i].clone());
        }
    }
    // sequential tail interreduction keeps the result independent of scheduling
    let n = minimal.len();
    let mut reduced_basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut act = vec![true; n];
        act[i] = false;
        let (r, _) = eng.full_reduce(minimal[i].clone(), &minimal, &act);
        reduced_basis.push(r);
    }
    let elems = reduced_basis.iter().map(|p| eng.to_elem(p, sig)).collect();
    Ok(GroebnerBasis { sig: sig.clone(), order: ord.clone(), elems, polys: reduced_basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiPoly;

    fn el(sig: &Arc<Signature>, s: &str) -> WeylElement {
        crate::expr::parse_weyl(sig, s).unwrap()
    }

    #[test]
    fn unit_ideal() {
        let sig = Signature::weyl(&["x"], &[] as &[&str]).unwrap();
        let gb = groebner(
            &sig,
            &[el(&sig, "x"), el(&sig, "dx")],
            &MonomialOrder::degrevlex(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.elements()[0], WeylElement::one(&sig));
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let sig = Signature::weyl(&["x"], &["s"]).unwrap();
        let g = el(&sig, "x*dx - s");
        for ord in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
            let gb = groebner(&sig, std::slice::from_ref(&g), &ord, &EngineConfig::default()).unwrap();
            assert_eq!(gb.elements(), std::slice::from_ref(&g));
        }
    }

    #[test]
    fn commutative_subcase() {
        let sig = Signature::builder().central("x").central("y").build().unwrap();
        let gb = groebner(
            &sig,
            &[el(&sig, "x^2"), el(&sig, "x*y")],
            &MonomialOrder::degrevlex(),
            &EngineConfig::default(),
        )
        .unwrap();
        let mut got: Vec<String> = gb.elements().iter().map(|e| e.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2"]);
    }

    #[test]
    fn commutative_membership() {
        let sig = Signature::builder().central("x").central("y").build().unwrap();
        let gb = groebner(
            &sig,
            &[el(&sig, "x^2 - y"), el(&sig, "x*y - 1")],
            &MonomialOrder::degrevlex(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert!(gb.contains(&el(&sig, "y^3 - 1")));
        assert!(!gb.contains(&el(&sig, "y - 1")));
        let p = MultiPoly::var(&["x", "y"], "x");
        let xe = WeylElement::from_poly(&sig, &p).unwrap();
        let nf = gb.normal_form(&xe);
        assert_eq!(gb.normal_form(&nf), nf);
    }

    #[test]
    fn degree_cap_is_reported() {
        let sig = Signature::builder().central("x").central("y").build().unwrap();
        let cfg = EngineConfig::default().with_max_degree(2);
        let r = groebner(
            &sig,
            &[el(&sig, "x^3 - y^2"), el(&sig, "x^2*y - 1")],
            &MonomialOrder::lex(),
            &cfg,
        );
        assert!(matches!(r, Err(Error::Capability(_))));
    }
}
