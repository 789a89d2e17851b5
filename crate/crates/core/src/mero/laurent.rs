use std::sync::Arc;

use crate::ann::{check_coprime, check_input_vars};
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::poly::{union_vars, MultiPoly};
use crate::rational::Rational;
use crate::weyl::{d_name, Signature, WeylElement};

/// A coprime pair `(F, G)` with `f = F/G`, embedded in `Q[x, s]`.
#[derive(Debug, Clone)]
pub struct MeroInput {
    xs: Vec<String>,
    ring: Vec<String>,
    f: MultiPoly,
    g: MultiPoly,
    df: Vec<MultiPoly>,
    dg: Vec<MultiPoly>,
}

impl MeroInput {
    /// Validates coprimality and variable names. `F` must be nonconstant.
    pub fn new(f: &MultiPoly, g: &MultiPoly, cfg: &EngineConfig) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if f.is_constant() {
            return Err(Error::Capability("F must be nonconstant".into()));
        }
        check_coprime(f, g, cfg)?;
        Self::unchecked(f, g)
    }

    /// Skips the coprimality check.
    pub fn unchecked(f: &MultiPoly, g: &MultiPoly) -> Result<Self> {
        let xs = union_vars([f, g]);
        check_input_vars(&xs)?;
        let mut ring = xs.clone();
        ring.push("s".into());
        let fr = f.embed(&ring);
        let gr = g.embed(&ring);
        let df = (0..xs.len()).map(|i| fr.derivative(i)).collect();
        let dg = (0..xs.len()).map(|i| gr.derivative(i)).collect();
        Ok(MeroInput { xs, ring, f: fr, g: gr, df, dg })
    }

    pub fn xs(&self) -> &[String] {
        &self.xs
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    /// Variables of numerators: the coordinates, then `s`.
    pub fn ring_vars(&self) -> &[String] {
        &self.ring
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn g(&self) -> &MultiPoly {
        &self.g
    }

    pub fn g_is_constant(&self) -> bool {
        self.g.is_constant()
    }

    /// `D_n[s]` on the coordinates.
    pub fn dn_s(&self) -> Result<Arc<Signature>> {
        Signature::weyl(&self.xs, &["s"])
    }

    /// `s` as a numerator polynomial.
    pub fn s_poly(&self) -> MultiPoly {
        MultiPoly::var(&self.ring, "s")
    }

    /// Embed a polynomial over a subset of the ring variables.
    pub fn lift(&self, p: &MultiPoly) -> MultiPoly {
        p.embed(&self.ring)
    }

    /// `G^{-m} f^{s+k}`.
    pub fn u(&self, m: u32, k: u32) -> LaurentSection {
        LaurentSection { num: MultiPoly::one(&self.ring), fpow: 0, gpow: m as i64, shift: k }
    }

    /// `h_i = F_{x_i} G - F G_{x_i}`.
    pub fn h(&self, i: usize) -> MultiPoly {
        self.df[i].mul(&self.g).sub(&self.f.mul(&self.dg[i]))
    }

    /// Restrict an `F, G` polynomial from the numerator ring back to the
    /// coordinates.
    pub fn to_coords(&self, p: &MultiPoly) -> MultiPoly {
        MultiPoly::from_terms(
            &self.xs,
            p.terms().map(|(e, c)| (e[..self.xs.len()].to_vec(), c.clone())),
        )
    }
}

/// `num * F^{-fpow} * G^{-gpow} * f^{s+shift}` with `num ∈ Q[x, s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSection {
    pub num: MultiPoly,
    pub fpow: i64,
    pub gpow: i64,
    pub shift: u32,
}

impl LaurentSection {
    pub fn zero(ctx: &MeroInput) -> Self {
        LaurentSection { num: MultiPoly::zero(ctx.ring_vars()), fpow: 0, gpow: 0, shift: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Rewrite with `shift = 0` and nonnegative powers, using
    /// `f^{s+k} = F^k G^{-k} f^s`.
    pub fn renormalize(&self, ctx: &MeroInput) -> Self {
        let mut alpha = self.fpow - self.shift as i64;
        let beta = self.gpow + self.shift as i64;
        let mut num = self.num.clone();
        if alpha < 0 {
            num = num.mul(&ctx.f.pow((-alpha) as u32));
            alpha = 0;
        }
        let (num, beta) = if beta < 0 {
            (num.mul(&ctx.g.pow((-beta) as u32)), 0)
        } else {
            (num, beta)
        };
        LaurentSection { num, fpow: alpha, gpow: beta, shift: 0 }
    }

    /// Numerator over `F^{-alpha} G^{-beta} f^s`; requires
    /// `alpha >= fpow`, `beta >= gpow` after renormalizing.
    pub fn numerator_over(&self, ctx: &MeroInput, alpha: i64, beta: i64) -> MultiPoly {
        let r = self.renormalize(ctx);
        assert!(alpha >= r.fpow && beta >= r.gpow, "denominator too small");
        r.num
            .mul(&ctx.f.pow((alpha - r.fpow) as u32))
            .mul(&ctx.g.pow((beta - r.gpow) as u32))
    }

    pub fn add(&self, other: &Self, ctx: &MeroInput) -> Self {
        let a = self.renormalize(ctx);
        let b = other.renormalize(ctx);
        let alpha = a.fpow.max(b.fpow);
        let beta = a.gpow.max(b.gpow);
        LaurentSection {
            num: a.numerator_over(ctx, alpha, beta).add(&b.numerator_over(ctx, alpha, beta)),
            fpow: alpha,
            gpow: beta,
            shift: 0,
        }
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> Self {
        LaurentSection { num: self.num.mul(p), ..self.clone() }
    }

    /// Equality in `L`, decided over a common denominator.
    pub fn equals(&self, other: &Self, ctx: &MeroInput) -> bool {
        let a = self.renormalize(ctx);
        let b = other.renormalize(ctx);
        let alpha = a.fpow.max(b.fpow);
        let beta = a.gpow.max(b.gpow);
        a.numerator_over(ctx, alpha, beta) == b.numerator_over(ctx, alpha, beta)
    }

    /// `d_i` applied to the section.
    pub fn derive(&self, i: usize, ctx: &MeroInput) -> Self {
        let r = self.renormalize(ctx);
        let h = &r.num;
        let (f, g) = (&ctx.f, &ctx.g);
        let (fi, gi) = (&ctx.df[i], &ctx.dg[i]);
        let alpha = Rational::from(r.fpow);
        let beta = Rational::from(r.gpow);
        let s = ctx.s_poly();
        let fg = f.mul(g);
        let num = h
            .derivative(i)
            .mul(&fg)
            .sub(&h.mul(&fi.mul(g)).scale(&alpha))
            .sub(&h.mul(&f.mul(gi)).scale(&beta))
            .add(&s.mul(h).mul(&ctx.h(i)));
        LaurentSection { num, fpow: r.fpow + 1, gpow: r.gpow + 1, shift: 0 }
    }
}

/// Formal action of `P ∈ D_n[s]` (normal-ordered, derivations on the
/// right) on a section.
pub fn apply_operator(p: &WeylElement, v: &LaurentSection, ctx: &MeroInput) -> Result<LaurentSection> {
    let sig = p.signature();
    let n = ctx.n();
    let xi: Vec<usize> = ctx.xs().iter().map(|x| sig.index_of(x)).collect::<Result<_>>()?;
    let di: Vec<usize> = ctx.xs().iter().map(|x| sig.index_of(&d_name(x))).collect::<Result<_>>()?;
    let si = sig.index("s");
    if sig.nvars() != 2 * n + si.iter().count() {
        return Err(Error::SignatureMismatch("operator must live in D_n[s]".into()));
    }
    let mut acc = LaurentSection::zero(ctx);
    let mut cache: std::collections::HashMap<Vec<u32>, LaurentSection> = Default::default();
    for (e, c) in p.terms() {
        let db: Vec<u32> = di.iter().map(|&j| e[j]).collect();
        let base = derive_multi(v, &db, ctx, &mut cache);
        let mut mexp = vec![0u32; n + 1];
        for (k, &j) in xi.iter().enumerate() {
            mexp[k] = e[j];
        }
        if let Some(si) = si {
            mexp[n] = e[si];
        }
        let m = MultiPoly::monomial(ctx.ring_vars(), mexp, c.clone());
        acc = acc.add(&base.scale_poly(&m), ctx);
    }
    Ok(acc)
}

/// `d^b v`, memoized on `b`.
pub(crate) fn derive_multi(
    v: &LaurentSection,
    b: &[u32],
    ctx: &MeroInput,
    cache: &mut std::collections::HashMap<Vec<u32>, LaurentSection>,
) -> LaurentSection {
    if let Some(r) = cache.get(b) {
        return r.clone();
    }
    let r = match b.iter().position(|&k| k > 0) {
        None => v.renormalize(ctx),
        Some(i) => {
            let mut lower = b.to_vec();
            lower[i] -= 1;
            derive_multi(v, &lower, ctx, cache).derive(i, ctx)
        }
    };
    cache.insert(b.to_vec(), r.clone());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, parse_weyl};
    use proptest::prelude::*;

    fn ctx(f: &str, g: &str) -> MeroInput {
        MeroInput::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), &EngineConfig::default()).unwrap()
    }

    #[test]
    fn power_rule() {
        let c = ctx("x", "1");
        let sig = c.dn_s().unwrap();
        let r = apply_operator(&parse_weyl(&sig, "dx").unwrap(), &c.u(0, 0), &c).unwrap();
        let expect = LaurentSection { num: c.s_poly(), fpow: 1, gpow: 0, shift: 0 };
        assert!(r.equals(&expect, &c));
        let r = apply_operator(&parse_weyl(&sig, "x*dx - s").unwrap(), &c.u(0, 0), &c).unwrap();
        assert!(r.is_zero() || r.equals(&LaurentSection::zero(&c), &c));
    }

    #[test]
    fn quotient_power_rule() {
        let c = ctx("x", "y");
        let sig = c.dn_s().unwrap();
        let r = apply_operator(&parse_weyl(&sig, "dx").unwrap(), &c.u(0, 0), &c).unwrap();
        let expect = LaurentSection { num: c.s_poly(), fpow: 1, gpow: 0, shift: 0 };
        assert!(r.equals(&expect, &c));
        // y*dx (x/y)^{s+1} = (s+1) (x/y)^s
        let lhs = apply_operator(&parse_weyl(&sig, "y*dx").unwrap(), &c.u(0, 1), &c).unwrap();
        let s1 = c.s_poly().add(&MultiPoly::one(c.ring_vars()));
        assert!(lhs.equals(&c.u(0, 0).scale_poly(&s1), &c));
    }

    #[test]
    fn annihilator_generators_kill_the_symbol() {
        let c = ctx("x^2 + y^2", "1");
        let sig = c.dn_s().unwrap();
        for op in ["x*dx + y*dy - 2*s", "x*dy - y*dx"] {
            let r = apply_operator(&parse_weyl(&sig, op).unwrap(), &c.u(0, 0), &c).unwrap();
            assert!(r.equals(&LaurentSection::zero(&c), &c), "{op}");
        }
    }

    fn arb_op() -> impl Strategy<Value = (Vec<u32>, i64)> {
        (proptest::collection::vec(0u32..3, 5), -3i64..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn action_is_a_module_action(
            p in proptest::collection::vec(arb_op(), 1..3),
            q in proptest::collection::vec(arb_op(), 1..3),
            k in 0u32..2,
        ) {
            let c = ctx("x^2 - y", "y + 1");
            let sig = c.dn_s().unwrap();
            let mk = |ts: &[(Vec<u32>, i64)]| WeylElement::from_terms(
                &sig, ts.iter().map(|(e, v)| (e.clone(), Rational::from(*v))));
            let (p, q) = (mk(&p), mk(&q));
            let v = c.u(1, k);
            let lhs = apply_operator(&p.mul(&q), &v, &c).unwrap();
            let rhs = apply_operator(&p, &apply_operator(&q, &v, &c).unwrap(), &c).unwrap();
            prop_assert!(lhs.equals(&rhs, &c));
        }
    }
}
