//! b-functions of `sigma_m` along `t = 0`, and the derived meromorphic
//! b-functions.
//!
//! The V-filtration weight is `-1` on `t` and `+1` on `dt`. Weight-zero
//! operators are `D_n[theta]` with `theta = t dt`, where
//! `t^c dt^c = theta (theta - 1) .. (theta - c + 1)` and `s = -theta - 1`.

use std::sync::Arc;

use serde::Serialize;

use crate::ann::fresh_var;
use crate::bfunction::{affine_substitute, BFunction};
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::weyl::{
    eliminate, initial_ideal_weight, intersect_univariate, LeftIdeal, MonomialOrder, NfDependency, Signature,
    WeylElement,
};

use super::laurent::MeroInput;
use super::oracle::{certify, Certificate, OracleBounds};
use super::sigma::{build_sigma, SigmaPresentation};

/// Status attached to every emitted b-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Certification {
    Certified,
    Uncertified,
    Failed,
}

fn degree_cap(cfg: &EngineConfig) -> u32 {
    cfg.max_degree.min(32)
}

/// `(index of t, index of dt)` and the V-weight vector.
fn v_weight(sig: &Signature) -> Result<(usize, usize, Vec<i64>)> {
    let ti = sig.index_of("t")?;
    let dti = sig.index_of("dt")?;
    let mut w = vec![0; sig.nvars()];
    w[ti] = -1;
    w[dti] = 1;
    Ok((ti, dti, w))
}

/// Left multiply a V-homogeneous element into weight zero.
fn shift_to_weight_zero(p: &WeylElement, ti: usize, dti: usize, w: &[i64]) -> WeylElement {
    let sig = p.signature();
    let k = p.weight_degree(w).unwrap_or(0);
    let mut e = vec![0; sig.nvars()];
    if k > 0 {
        e[ti] = k as u32;
    } else {
        e[dti] = (-k) as u32;
    }
    WeylElement::monomial(sig, e, Rational::one()).mul(p)
}

/// Image of a weight-zero element of `D_{n+1}` in `target`, a signature on
/// the coordinates plus one central variable `var`, substituting
/// `theta -> a*var + c`.
fn theta_image(
    p: &WeylElement,
    ti: usize,
    dti: usize,
    target: &Arc<Signature>,
    var: &str,
    a: &Rational,
    c: &Rational,
) -> Result<WeylElement> {
    let vi = target.index_of(var)?;
    let theta = MultiPoly::univariate(var, &[c.clone(), a.clone()]);
    let mut out = WeylElement::zero(target);
    for (e, coef) in p.terms() {
        if e[ti] != e[dti] {
            return Err(Error::SignatureMismatch("element is not of V-weight zero".into()));
        }
        let mut falling = MultiPoly::one(&[var]);
        for i in 0..e[ti] {
            falling = falling.mul(&theta.sub(&MultiPoly::constant(&[var], Rational::from(i as i64))));
        }
        let mut base: Vec<u32> = e.iter().enumerate().filter(|(i, _)| *i != ti && *i != dti).map(|(_, x)| *x).collect();
        base.insert(vi, 0);
        for (fe, fc) in falling.terms() {
            let mut ex = base.clone();
            ex[vi] = fe[0];
            out.add_term(ex, coef * fc);
        }
    }
    Ok(out)
}

/// `p(theta)`: the monic generator of `in_V(Ann sigma_m) ∩ Q[theta]`, over
/// the variable `theta`.
pub fn b_section_along_t(pres: &SigmaPresentation, cfg: &EngineConfig) -> Result<MultiPoly> {
    let ann = &pres.annihilator;
    let sig = ann.signature();
    let (ti, dti, w) = v_weight(sig)?;
    let wb = initial_ideal_weight(ann, &w, cfg)?;
    let xs: Vec<String> = sig.names().iter().step_by(2).filter(|n| *n != "t").cloned().collect();
    let theta = fresh_var(&xs, "theta");
    let target = Signature::weyl(&xs, &[theta.as_str()])?;
    let gens = wb
        .initial
        .iter()
        .map(|g| theta_image(&shift_to_weight_zero(g, ti, dti, &w), ti, dti, &target, &theta, &Rational::one(), &Rational::zero()))
        .collect::<Result<Vec<_>>>()?;
    let ideal = LeftIdeal::new(&target, gens)?;
    let p = intersect_univariate(&ideal, &theta, degree_cap(cfg), cfg)?.ok_or_else(|| {
        Error::NotSpecializable(format!("no polynomial in theta of degree <= {}", degree_cap(cfg)))
    })?;
    Ok(p)
}

/// `b(s) = p(-s-1)`, monic.
pub fn theta_to_s(p: &MultiPoly) -> BFunction {
    let q = affine_substitute(p, &Rational::from(-1), &Rational::from(-1), "s");
    BFunction::from_poly(&q)
}

/// Engine b-function with its certification record.
#[derive(Debug, Clone)]
pub struct MeroBFunction {
    pub b: BFunction,
    /// `p(theta)` from the presentation, for the V-filtration route.
    pub p_theta: Option<MultiPoly>,
    pub certificate: Certificate,
    pub status: Certification,
    pub presentation_stabilized: bool,
}

/// Oracle cross-check of an engine result.
///
/// A partial annihilator only yields a multiple of the true b-function. With
/// a stabilized presentation, an oracle failure or an accepted proper
/// divisor is an engine/oracle disagreement. Otherwise accepted divisors are
/// peeled off (each acceptance carries a verified witness) and the result is
/// reported as uncertified.
fn cross_check(
    mut b: BFunction,
    stabilized: bool,
    input: &MeroInput,
    m: u32,
    bounds: OracleBounds,
) -> Result<(BFunction, Certificate, Certification)> {
    let one = MultiPoly::one(input.xs());
    loop {
        let cert = certify(&b, input, m, &one, bounds)?.ok_or_else(|| {
            Error::OracleDisagreement(format!(
                "no witness for b = {} within N <= {}, degree <= {}",
                b.factored(),
                bounds.n_max,
                bounds.deg
            ))
        })?;
        match cert.accepted.first() {
            None => {
                let status = if stabilized { Certification::Certified } else { Certification::Uncertified };
                return Ok((b, cert, status));
            }
            Some(r) if !stabilized => {
                b = b.without_root(r).expect("accepted roots are roots");
            }
            Some(r) => {
                return Err(Error::OracleDisagreement(format!(
                    "{} is not minimal: the oracle accepts it without the root {r}",
                    b.factored()
                )));
            }
        }
    }
}

/// `b_{f,m}(s) = p_{sigma_m}(-s-1)`, cross-checked by the oracle.
pub fn b_mero(input: &MeroInput, m: u32, bounds: OracleBounds, cfg: &EngineConfig) -> Result<MeroBFunction> {
    let pres = build_sigma(input, m, cfg)?;
    let p_theta = b_section_along_t(&pres, cfg)?;
    let (b, certificate, status) = cross_check(theta_to_s(&p_theta), pres.stabilized, input, m, bounds)?;
    Ok(MeroBFunction {
        b,
        p_theta: Some(p_theta),
        certificate,
        status,
        presentation_stabilized: pres.stabilized,
    })
}

/// Generators of `Ann_{D[s]} (G^{-m} f^s)` from the V-homogeneous elements of
/// `Ann sigma_m`, obtained by homogenizing with central `u, v`, `uv = 1`.
pub fn ann_ds(input: &MeroInput, pres: &SigmaPresentation, cfg: &EngineConfig) -> Result<LeftIdeal> {
    let sig = pres.annihilator.signature();
    let (ti, dti, w) = v_weight(sig)?;
    let names: Vec<String> = sig.names().to_vec();
    let u = fresh_var(&names, "u");
    let v = fresh_var(&names, "v");
    let vars: Vec<String> = names.iter().step_by(2).cloned().collect();
    let big = Signature::weyl(&vars, &[u.as_str(), v.as_str()])?;
    let ui = big.index_of(&u)?;
    let mut bw = w.clone();
    bw.insert(ui, 0);
    bw.insert(ui + 1, 0);
    let mut gens = Vec::new();
    for g in pres.annihilator.generators() {
        let g = g.transfer(&big)?;
        let top = g.terms().map(|(e, _)| weight(&bw, e)).max().unwrap_or(0);
        let mut h = WeylElement::zero(&big);
        for (e, c) in g.terms() {
            let mut e = e.clone();
            e[ui] = (top - weight(&bw, &e)) as u32;
            h.add_term(e, c.clone());
        }
        gens.push(h);
    }
    let uv = WeylElement::gen(&big, &u)?.mul(&WeylElement::gen(&big, &v)?);
    gens.push(uv.sub(&WeylElement::one(&big)));
    let homogeneous = eliminate(&LeftIdeal::new(&big, gens)?, &[u.as_str(), v.as_str()], cfg)?;
    let target = input.dn_s()?;
    let mut out = Vec::new();
    for g in homogeneous.generators() {
        let g = g.transfer(sig)?;
        for part in homogeneous_parts(&g, &w) {
            let z = shift_to_weight_zero(&part, ti, dti, &w);
            out.push(theta_image(&z, ti, dti, &target, "s", &Rational::from(-1), &Rational::from(-1))?);
        }
    }
    LeftIdeal::new(&target, out)
}

fn weight(w: &[i64], e: &[u32]) -> i64 {
    w.iter().zip(e).map(|(a, b)| a * *b as i64).sum()
}

fn homogeneous_parts(p: &WeylElement, w: &[i64]) -> Vec<WeylElement> {
    let mut parts: std::collections::BTreeMap<i64, WeylElement> = std::collections::BTreeMap::new();
    for (e, c) in p.terms() {
        parts
            .entry(weight(w, e))
            .or_insert_with(|| WeylElement::zero(p.signature()))
            .add_term(e.clone(), c.clone());
    }
    parts.into_values().collect()
}

/// Minimal monic `b` with `b(s) G^{-m} f^s ∈ D[s] G^{-m} f^{s+1}`,
/// cross-checked by the oracle with a single shifted term.
pub fn b_simple(input: &MeroInput, m: u32, bounds: OracleBounds, cfg: &EngineConfig) -> Result<MeroBFunction> {
    let (b, stabilized) = b_simple_engine(input, m, cfg)?;
    let bounds = OracleBounds { n_max: 1, ..bounds };
    let (b, certificate, status) = cross_check(b, stabilized, input, m, bounds)?;
    Ok(MeroBFunction { b, p_theta: None, certificate, status, presentation_stabilized: stabilized })
}

/// With `w = G^{-m-1} f^s` the condition reads `b G ∈ Ann_{D[s]} w + D[s] F`.
fn b_simple_engine(input: &MeroInput, m: u32, cfg: &EngineConfig) -> Result<(BFunction, bool)> {
    let pres = build_sigma(input, m + 1, cfg)?;
    let ann = ann_ds(input, &pres, cfg)?;
    let sig = ann.signature().clone();
    let f = WeylElement::from_poly(&sig, &input.to_coords(input.f()))?;
    let g = WeylElement::from_poly(&sig, &input.to_coords(input.g()))?;
    let ideal = ann.extend([f])?;
    let gb = ideal.groebner(&MonomialOrder::degrevlex(), cfg)?;
    let mut nd = NfDependency::new(&gb);
    let s = WeylElement::gen(&sig, "s")?;
    let mut cur = g;
    for _ in 0..=degree_cap(cfg) {
        if let Some(lambda) = nd.push(&cur) {
            return Ok((BFunction::from_poly(&MultiPoly::univariate("s", &lambda)), pres.stabilized));
        }
        cur = s.mul(&cur);
    }
    Err(Error::NotSpecializable(format!("no simple b-function of degree <= {}", degree_cap(cfg))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ann::bernstein_sato;
    use crate::expr::parse_poly;

    fn input(f: &str, g: &str) -> MeroInput {
        MeroInput::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), &EngineConfig::default()).unwrap()
    }

    fn mero(f: &str, g: &str, m: u32) -> MeroBFunction {
        let cfg = EngineConfig::default();
        b_mero(&input(f, g), m, OracleBounds { n_max: 2, deg: 4 }, &cfg).unwrap()
    }

    #[test]
    fn section_polynomials() {
        let cfg = EngineConfig::default();
        let p = b_section_along_t(&build_sigma(&input("x", "1"), 0, &cfg).unwrap(), &cfg).unwrap();
        assert_eq!(p.to_string(), "theta");
        let p = b_section_along_t(&build_sigma(&input("x^2", "1"), 0, &cfg).unwrap(), &cfg).unwrap();
        assert_eq!(p.to_string(), "theta^2 + 1/2*theta");
    }

    #[test]
    fn mero_constant_denominator_is_classical() {
        let r = mero("x", "1", 7);
        assert_eq!(r.b.factored(), "(s + 1)");
        assert_eq!(r.status, Certification::Certified);
        let r = mero("x^2", "1", 0);
        assert_eq!(r.b, bernstein_sato(&parse_poly("x^2").unwrap(), &EngineConfig::default()).unwrap());
    }

    #[test]
    fn mero_separated_variables() {
        for m in 0..=2 {
            let r = mero("x", "y", m);
            assert_eq!(r.b.factored(), "(s + 1)", "m = {m}");
            assert_eq!(r.status, Certification::Certified);
        }
    }

    #[test]
    fn ann_ds_constant_denominator() {
        let cfg = EngineConfig::default();
        let inp = input("x", "1");
        let ann = ann_ds(&inp, &build_sigma(&inp, 0, &cfg).unwrap(), &cfg).unwrap();
        let sig = ann.signature().clone();
        let e = crate::expr::parse_weyl(&sig, "x*dx - s").unwrap();
        assert!(ann.contains(&e, &cfg).unwrap());
    }

    #[test]
    fn simple_divisible_by_mero() {
        let cfg = EngineConfig::default();
        let bounds = OracleBounds::default();
        let r = b_simple(&input("x", "1"), 0, bounds, &cfg).unwrap();
        assert_eq!(r.status, Certification::Certified);
        assert_eq!(r.b.factored(), "(s + 1)");
        let r = b_simple(&input("x", "y"), 0, bounds, &cfg).unwrap();
        assert!(mero("x", "y", 0).b.divides(&r.b));
        let r = b_simple(&input("x^2", "1"), 3, bounds, &cfg).unwrap();
        assert_eq!(r.b.factored(), "(s + 1/2)*(s + 1)");
    }

    #[test]
    fn mero_cusp_quotient() {
        // the witness (1/27) y^2 dx^3 needs operator degree 5
        let cfg = EngineConfig::default();
        let r = b_mero(&input("x^3", "y^2"), 0, OracleBounds::default(), &cfg).unwrap();
        assert_eq!(r.b.factored(), "(s + 1/3)*(s + 2/3)*(s + 1)");
        assert_eq!(r.status, Certification::Certified);
    }
}
