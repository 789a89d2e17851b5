//! Reduced b-function of a quasi-homogeneous `f = F/G`: operators may have
//! poles along `G = 0`.
//!
//! `b~(s) = (s + 1) beta(s)` with `beta` minimal such that
//! `beta(s) f^s ∈ sum_i D[1/G] h_i f^s`, `h_i = F_i G - F G_i`. Clearing
//! denominators, this is `G^k beta(s) ∈ Ann_{D[s]} f^s + sum_i D[s] h_i` for
//! some `k`.

use crate::ann::fresh_var;
use crate::bfunction::BFunction;
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::weyl::{LeftIdeal, MonomialOrder, NfDependency, Signature, WeylElement};

use super::laurent::MeroInput;
use super::sigma::build_sigma;
use super::vroute::ann_ds;

/// Euler data `v = sum w_i x_i d_i` with `vF = d1 F`, `vG = d2 G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiHomogeneity {
    pub weights: Vec<i64>,
    pub d1: i64,
    pub d2: i64,
}

impl QuasiHomogeneity {
    /// Checks the Euler relations exactly. Weights are nonnegative, not all
    /// zero, and `d1 != d2`.
    pub fn check(input: &MeroInput, weights: &[i64], d1: i64, d2: i64) -> Result<Self> {
        let bad = |why: String| Err(Error::NotQuasiHomogeneous(why));
        if weights.len() != input.n() {
            return bad(format!("{} weights for {} coordinates", weights.len(), input.n()));
        }
        if weights.iter().any(|w| *w < 0) || weights.iter().all(|w| *w == 0) {
            return bad("weights must be nonnegative and not all zero".into());
        }
        if d1 == d2 {
            return bad("d1 - d2 must be nonzero".into());
        }
        let f = input.to_coords(input.f());
        let g = input.to_coords(input.g());
        if f.weighted_homogeneous_degree(weights) != Some(d1) {
            return bad(format!("F is not weighted homogeneous of degree {d1}"));
        }
        if g.weighted_homogeneous_degree(weights) != Some(d2) {
            return bad(format!("G is not weighted homogeneous of degree {d2}"));
        }
        Ok(QuasiHomogeneity { weights: weights.to_vec(), d1, d2 })
    }
}

/// True iff `G` vanishes on `V(h_1, .., h_n)`: `1 ∈ <h_1, .., h_n, 1 - zG>`
/// in `Q[x, z]`.
pub fn smoothness_test(input: &MeroInput, cfg: &EngineConfig) -> Result<bool> {
    let xs = input.xs().to_vec();
    let z = fresh_var(&xs, "z");
    let mut b = Signature::builder();
    for x in &xs {
        b = b.central(x);
    }
    let sig = b.central(&z).build()?;
    let mut vars = xs.clone();
    vars.push(z.clone());
    let mut gens = Vec::new();
    for i in 0..input.n() {
        gens.push(WeylElement::from_poly(&sig, &input.to_coords(&input.h(i)).embed(&vars))?);
    }
    let g = WeylElement::from_poly(&sig, &input.to_coords(input.g()).embed(&vars))?;
    let zg = WeylElement::gen(&sig, &z)?.mul(&g);
    gens.push(WeylElement::one(&sig).sub(&zg));
    let gb = LeftIdeal::new(&sig, gens)?.groebner(&MonomialOrder::degrevlex(), cfg)?;
    Ok(gb.is_unit())
}

/// Reduced b-function with how it was obtained.
#[derive(Debug, Clone)]
pub struct ReducedB {
    pub b: BFunction,
    /// Decided by the smoothness test alone.
    pub fast_path: bool,
    /// Power of `G` used to clear denominators.
    pub g_power: u32,
    /// Whether the annihilator presentation behind `Ann_{D[s]} f^s`
    /// stabilized; otherwise the result may be a proper multiple.
    pub stabilized: bool,
}

/// `b~_f(s)`. Independent of `m`.
pub fn reduced_b(input: &MeroInput, qh: &QuasiHomogeneity, cfg: &EngineConfig) -> Result<ReducedB> {
    debug_assert_eq!(qh.weights.len(), input.n());
    let s_plus_1 = BFunction::from_roots(&[(Rational::from(-1), 1)]);
    if smoothness_test(input, cfg)? {
        return Ok(ReducedB { b: s_plus_1, fast_path: true, g_power: 0, stabilized: true });
    }
    let pres = build_sigma(input, 0, cfg)?;
    let ann = ann_ds(input, &pres, cfg)?;
    let sig = ann.signature().clone();
    let hs = (0..input.n())
        .map(|i| WeylElement::from_poly(&sig, &input.to_coords(&input.h(i))))
        .collect::<Result<Vec<_>>>()?;
    let gb = ann.extend(hs)?.groebner(&MonomialOrder::degrevlex(), cfg)?;
    let g = WeylElement::from_poly(&sig, &input.to_coords(input.g()))?;
    let s = WeylElement::gen(&sig, "s")?;
    let cap = cfg.max_degree.min(32);
    // membership only grows with k, so the last beta found is the best
    let mut best: Option<(MultiPoly, u32)> = None;
    let mut gk = WeylElement::one(&sig);
    for k in 0..=cfg.max_g_power {
        let mut nd = NfDependency::new(&gb);
        let mut cur = gk.clone();
        let limit = best.as_ref().map_or(cap, |(p, _)| p.total_degree().unwrap_or(0));
        for _ in 0..=limit {
            if let Some(lambda) = nd.push(&cur) {
                best = Some((MultiPoly::univariate("s", &lambda), k));
                break;
            }
            cur = s.mul(&cur);
        }
        if best.as_ref().is_some_and(|(p, _)| p.is_constant()) {
            break;
        }
        gk = g.mul(&gk);
    }
    let (beta, g_power) = best.ok_or_else(|| {
        Error::NotSpecializable(format!("no reduced b-function of degree <= {cap} with G^k, k <= {}", cfg.max_g_power))
    })?;
    let b = BFunction::from_poly(&s_plus_1.poly().mul(&beta));
    Ok(ReducedB { b, fast_path: false, g_power, stabilized: pres.stabilized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn input(f: &str, g: &str) -> MeroInput {
        MeroInput::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), &EngineConfig::default()).unwrap()
    }

    #[test]
    fn smoothness_examples() {
        let cfg = EngineConfig::default();
        assert!(smoothness_test(&input("x^2 + y^2", "x"), &cfg).unwrap());
        assert!(!smoothness_test(&input("x^3", "y^2"), &cfg).unwrap());
        assert!(smoothness_test(&input("x", "1"), &cfg).unwrap());
    }

    #[test]
    fn quasi_homogeneity_is_checked() {
        let inp = input("x^2 + y^2", "x");
        assert!(QuasiHomogeneity::check(&inp, &[1, 1], 2, 1).is_ok());
        assert!(matches!(QuasiHomogeneity::check(&inp, &[1, 1], 2, 2), Err(Error::NotQuasiHomogeneous(_))));
        assert!(matches!(QuasiHomogeneity::check(&inp, &[1, 2], 2, 1), Err(Error::NotQuasiHomogeneous(_))));
    }

    #[test]
    fn fast_path() {
        let cfg = EngineConfig::default();
        let inp = input("x^2 + y^2", "x");
        let qh = QuasiHomogeneity::check(&inp, &[1, 1], 2, 1).unwrap();
        let r = reduced_b(&inp, &qh, &cfg).unwrap();
        assert!(r.fast_path);
        assert_eq!(r.b.factored(), "(s + 1)");
    }

    #[test]
    fn membership_path_divides_mero() {
        let cfg = EngineConfig::default();
        let inp = input("x^3", "y^2");
        let qh = QuasiHomogeneity::check(&inp, &[1, 1], 3, 2).unwrap();
        let r = reduced_b(&inp, &qh, &cfg).unwrap();
        assert!(!r.fast_path);
        // off y = 0, f is x^3 times a unit, so b~ is the b-function of x^3
        assert_eq!(r.b.factored(), "(s + 1/3)*(s + 2/3)*(s + 1)");
        let mero = super::super::vroute::b_mero(&inp, 0, Default::default(), &cfg).unwrap();
        assert!(r.b.divides(&mero.b), "{} does not divide {}", r.b.factored(), mero.b.factored());
    }
}
