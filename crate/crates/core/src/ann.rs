//! Annihilators of power products, classical Bernstein-Sato polynomials and
//! the Sabbah line specialization.
//!
//! Annihilators use the Briancon-Maisonobe scheme: in `D_n<s_j, dt_j>` with
//! `dt_j s_j = (s_j - 1) dt_j`, the left ideal generated by
//! `s_j + F_j dt_j` and `d_i + sum_j (d_i F_j) dt_j` meets `D_n[s]` in
//! `Ann F^s`.

use std::sync::Arc;

use serde::Serialize;

use crate::bfunction::{univariate_gcd, BFunction};
use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::poly::{union_vars, Exponents, MultiPoly};
use crate::rational::Rational;
use crate::weyl::{
    d_name, eliminate, intersect_univariate, LeftIdeal, MonomialOrder, NfDependency, Signature,
    WeylElement,
};

/// Names that user variables may not take.
pub fn check_input_vars(vars: &[String]) -> Result<()> {
    for v in vars {
        let reserved = matches!(v.as_str(), "s" | "t")
            || v.starts_with('d')
            || ((v.starts_with('s') || v.starts_with('t')) && v[1..].chars().all(|c| c.is_ascii_digit()));
        if reserved {
            return Err(Error::ReservedVariable(v.clone()));
        }
    }
    Ok(())
}

/// `prod F_i^{s_i}` over a common coordinate list.
#[derive(Debug, Clone)]
pub struct PowerProduct {
    vars: Vec<String>,
    factors: Vec<(MultiPoly, String)>,
}

impl PowerProduct {
    pub fn new(factors: &[(MultiPoly, &str)]) -> Result<Self> {
        let vars = union_vars(factors.iter().map(|(p, _)| p));
        check_input_vars(&vars)?;
        let mut names: Vec<&str> = Vec::new();
        let mut fs = Vec::new();
        for (p, s) in factors {
            if p.is_zero() {
                return Err(Error::Capability("zero factor".into()));
            }
            if names.contains(s) || vars.iter().any(|v| v == s) {
                return Err(Error::SignatureMismatch(format!("duplicate parameter `{s}`")));
            }
            names.push(s);
            fs.push((p.embed(&vars), s.to_string()));
        }
        Ok(PowerProduct { vars, factors: fs })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn factors(&self) -> &[(MultiPoly, String)] {
        &self.factors
    }

    /// `D_n[s_1..s_k]` on these coordinates.
    pub fn algebra(&self) -> Result<Arc<Signature>> {
        let s: Vec<&str> = self.factors.iter().map(|(_, s)| s.as_str()).collect();
        Signature::weyl(&self.vars, &s)
    }
}

/// A name not in `vars`, starting from `stem`.
pub(crate) fn fresh_var(vars: &[String], stem: &str) -> String {
    std::iter::once(stem.to_string())
        .chain((0..).map(|k| format!("{stem}{k}")))
        .find(|n| !vars.contains(n))
        .expect("some name is free")
}

const ANN_MAX_VARS: usize = 3;
const ANN_MAX_DEGREE: u32 = 6;

/// `Ann_{D[s]} prod F_i^{s_i}`.
pub fn ann_fs(pp: &PowerProduct, cfg: &EngineConfig) -> Result<LeftIdeal> {
    let n = pp.vars.len();
    if n > ANN_MAX_VARS {
        return Err(Error::Capability(format!("{n} variables exceeds the supported {ANN_MAX_VARS}")));
    }
    for (f, _) in &pp.factors {
        if f.total_degree().unwrap_or(0) > ANN_MAX_DEGREE {
            return Err(Error::Capability(format!(
                "factor of degree {} exceeds the supported {ANN_MAX_DEGREE}",
                f.total_degree().unwrap_or(0)
            )));
        }
    }
    let mut b = Signature::builder();
    for x in &pp.vars {
        b = b.weyl_pair(x, &d_name(x));
    }
    let dts: Vec<String> = pp.factors.iter().map(|(_, s)| format!("dt{s}")).collect();
    for ((_, s), dt) in pp.factors.iter().zip(&dts) {
        b = b.twist(s, dt, -1);
    }
    let sig = b.build()?;
    let dt_elems: Vec<WeylElement> =
        dts.iter().map(|d| WeylElement::gen(&sig, d)).collect::<Result<_>>()?;

    let mut gens = Vec::new();
    for ((f, s), dt) in pp.factors.iter().zip(&dt_elems) {
        let fe = WeylElement::from_poly(&sig, f)?;
        gens.push(WeylElement::gen(&sig, s)?.add(&fe.mul(dt)));
    }
    for (i, x) in pp.vars.iter().enumerate() {
        let mut g = WeylElement::gen(&sig, &d_name(x))?;
        for ((f, _), dt) in pp.factors.iter().zip(&dt_elems) {
            let fi = WeylElement::from_poly(&sig, &f.derivative(i))?;
            g = g.add(&fi.mul(dt));
        }
        gens.push(g);
    }
    let big = LeftIdeal::new(&sig, gens)?;
    let drop: Vec<&str> = dts.iter().map(String::as_str).collect();
    let ann = eliminate(&big, &drop, cfg)?;
    // re-home in the canonical D_n[s] signature
    let target = pp.algebra()?;
    let gens = ann
        .generators()
        .iter()
        .map(|g| g.transfer(&target))
        .collect::<Result<_>>()?;
    LeftIdeal::new(&target, gens)
}

fn degree_cap(cfg: &EngineConfig) -> u32 {
    cfg.max_degree.min(32)
}

/// Monic generator of `(Ann F^s + D[s] F) ∩ Q[s]`.
pub fn bernstein_sato(f: &MultiPoly, cfg: &EngineConfig) -> Result<BFunction> {
    if f.is_zero() || f.is_constant() {
        return Err(Error::Capability("Bernstein-Sato polynomial needs a nonconstant input".into()));
    }
    let pp = PowerProduct::new(&[(f.clone(), "s")])?;
    let ann = ann_fs(&pp, cfg)?;
    let sig = ann.signature().clone();
    let fe = WeylElement::from_poly(&sig, &pp.factors[0].0)?;
    let ideal = ann.extend([fe])?;
    match intersect_univariate(&ideal, "s", degree_cap(cfg), cfg)? {
        Some(b) => Ok(BFunction::from_poly(&b)),
        None => Err(Error::Capability(format!(
            "no Bernstein-Sato polynomial of degree <= {}",
            degree_cap(cfg)
        ))),
    }
}

/// Greatest common divisor of F and G up to a unit, via `<F> ∩ <G> = <lcm>`.
pub fn common_factor_degree(f: &MultiPoly, g: &MultiPoly, cfg: &EngineConfig) -> Result<u32> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if f.is_constant() || g.is_constant() {
        return Ok(0);
    }
    let vars = union_vars([f, g]);
    let aux = fresh_var(&vars, "v");
    let mut b = Signature::builder().central(&aux);
    for x in &vars {
        b = b.central(x);
    }
    let sig = b.build()?;
    let fe = WeylElement::from_poly(&sig, &f.embed(&vars))?;
    let ge = WeylElement::from_poly(&sig, &g.embed(&vars))?;
    let v = WeylElement::gen(&sig, &aux)?;
    let one = WeylElement::one(&sig);
    let ideal = LeftIdeal::new(&sig, vec![v.mul(&fe), one.sub(&v).mul(&ge)])?;
    let lcm = eliminate(&ideal, &[aux.as_str()], cfg)?;
    let d = lcm
        .generators()
        .iter()
        .filter_map(|g| g.total_degree())
        .min()
        .expect("lcm of nonzero polynomials is nonzero");
    let df = f.total_degree().unwrap_or(0);
    let dg = g.total_degree().unwrap_or(0);
    Ok(df + dg - d)
}

pub fn check_coprime(f: &MultiPoly, g: &MultiPoly, cfg: &EngineConfig) -> Result<()> {
    match common_factor_degree(f, g, cfg)? {
        0 => Ok(()),
        k => Err(Error::NotCoprime(k)),
    }
}

/// Result of specializing a Bernstein-Sato ideal element of `(F, G)` to the
/// line `s1 = s`, `s2 = -s - m - 2`.
#[derive(Debug, Clone, Serialize)]
pub struct SabbahLine {
    pub b: BFunctionReport,
    /// The bivariate ideal elements whose specializations were combined.
    pub bivariate: Vec<String>,
}

/// Printable b-function summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BFunctionReport {
    pub poly: String,
    pub factored: String,
    pub roots: Vec<crate::bfunction::RootMult>,
    pub degree: u32,
}

impl From<&BFunction> for BFunctionReport {
    fn from(b: &BFunction) -> Self {
        BFunctionReport {
            poly: b.poly().to_string(),
            factored: b.factored(),
            roots: b.root_mults(),
            degree: b.degree(),
        }
    }
}

/// Elements of `(Ann F^{s1} G^{s2} + D[s] F G) ∩ Q[s1, s2]` found by normal
/// form dependencies among monomials of total degree `<= max_deg`.
pub fn bs_ideal_elements(
    f: &MultiPoly,
    g: &MultiPoly,
    max_deg: u32,
    cfg: &EngineConfig,
) -> Result<Vec<MultiPoly>> {
    let pp = PowerProduct::new(&[(f.clone(), "s1"), (g.clone(), "s2")])?;
    let ann = ann_fs(&pp, cfg)?;
    let sig = ann.signature().clone();
    let fg = pp.factors[0].0.mul(&pp.factors[1].0);
    let ideal = ann.extend([WeylElement::from_poly(&sig, &fg)?])?;
    let gb = ideal.groebner(&MonomialOrder::degrevlex(), cfg)?;
    let (i1, i2) = (sig.index_of("s1")?, sig.index_of("s2")?);
    let mut nd = NfDependency::new(&gb);
    let mut monos: Vec<(u32, u32)> = Vec::new();
    let mut found = Vec::new();
    for d in 0..=max_deg {
        for a in (0..=d).rev() {
            let mut e: Exponents = vec![0; sig.nvars()];
            e[i1] = a;
            e[i2] = d - a;
            match nd.push(&WeylElement::monomial(&sig, e, Rational::one())) {
                Some(lambda) => {
                    let mut terms: Vec<(Exponents, Rational)> = monos
                        .iter()
                        .zip(&lambda)
                        .map(|(&(x, y), c)| (vec![x, y], c.clone()))
                        .collect();
                    terms.push((vec![a, d - a], Rational::one()));
                    found.push(MultiPoly::from_terms(&["s1", "s2"], terms));
                }
                None => monos.push((a, d - a)),
            }
        }
        if !found.is_empty() && d >= found[0].total_degree().unwrap_or(0) {
            // finish the degree of the first hit, then stop
            break;
        }
    }
    Ok(found)
}

/// Restrict `b(s1, s2)` to `s1 = s`, `s2 = -s - m - 2`.
pub fn specialize_line(b: &MultiPoly, m: u32) -> MultiPoly {
    let s1 = MultiPoly::univariate("s", &[Rational::zero(), Rational::one()]);
    let s2 = MultiPoly::univariate("s", &[Rational::from(-(m as i64) - 2), -Rational::one()]);
    b.compose(&[s1, s2])
}

/// A multiple of the meromorphic b-function from the two-variable
/// Bernstein-Sato ideal of `(F, G)`.
pub fn sabbah_line(f: &MultiPoly, g: &MultiPoly, m: u32, cfg: &EngineConfig) -> Result<(BFunction, SabbahLine)> {
    check_coprime(f, g, cfg)?;
    if g.is_constant() {
        let b = bernstein_sato(f, cfg)?;
        let report = SabbahLine { b: (&b).into(), bivariate: vec![] };
        return Ok((b, report));
    }
    let elems = bs_ideal_elements(f, g, 12.min(cfg.max_degree), cfg)?;
    if elems.is_empty() {
        return Err(Error::NotSpecializable(
            "no Bernstein-Sato ideal element within the degree bound".into(),
        ));
    }
    let mut acc: Option<MultiPoly> = None;
    for e in &elems {
        let sp = specialize_line(e, m);
        if sp.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => sp.monic(),
            Some(a) => univariate_gcd(&a, &sp),
        });
    }
    let Some(b) = acc else {
        return Err(Error::ZeroSpecialization { m });
    };
    let b = BFunction::from_poly(&b);
    let report = SabbahLine { b: (&b).into(), bivariate: elems.iter().map(|e| e.to_string()).collect() };
    Ok((b, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, parse_weyl};

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn annihilator_of_coordinate() {
        let pp = PowerProduct::new(&[(parse_poly("x").unwrap(), "s")]).unwrap();
        let ann = ann_fs(&pp, &cfg()).unwrap();
        let sig = ann.signature().clone();
        let gb = ann.groebner(&MonomialOrder::degrevlex(), &cfg()).unwrap();
        assert_eq!(gb.elements(), &[parse_weyl(&sig, "x*dx - s").unwrap()]);
    }

    #[test]
    fn annihilator_of_separated_monomials() {
        let pp = PowerProduct::new(&[(parse_poly("x").unwrap(), "s1"), (parse_poly("y").unwrap(), "s2")])
            .unwrap();
        let ann = ann_fs(&pp, &cfg()).unwrap();
        let sig = ann.signature().clone();
        let expected =
            LeftIdeal::new(&sig, vec![parse_weyl(&sig, "x*dx - s1").unwrap(), parse_weyl(&sig, "y*dy - s2").unwrap()])
                .unwrap();
        assert!(ann.contains_ideal(&expected, &cfg()).unwrap());
        assert!(expected.contains_ideal(&ann, &cfg()).unwrap());
    }

    #[test]
    fn annihilator_of_quadric_contains_euler_and_rotation() {
        let pp = PowerProduct::new(&[(parse_poly("x^2 + y^2").unwrap(), "s")]).unwrap();
        let ann = ann_fs(&pp, &cfg()).unwrap();
        let sig = ann.signature().clone();
        for op in ["x*dx + y*dy - 2*s", "x*dy - y*dx"] {
            assert!(ann.contains(&parse_weyl(&sig, op).unwrap(), &cfg()).unwrap(), "{op}");
        }
    }

    #[test]
    fn classical_examples() {
        let b = bernstein_sato(&parse_poly("x").unwrap(), &cfg()).unwrap();
        assert_eq!(b, BFunction::from_roots(&[(q(-1, 1), 1)]));
        let b = bernstein_sato(&parse_poly("x^2").unwrap(), &cfg()).unwrap();
        assert_eq!(b, BFunction::from_roots(&[(q(-1, 1), 1), (q(-1, 2), 1)]));
        let b = bernstein_sato(&parse_poly("x^2 + y^2 + z^2").unwrap(), &cfg()).unwrap();
        assert_eq!(b, BFunction::from_roots(&[(q(-3, 2), 1), (q(-1, 1), 1)]));
    }

    #[test]
    fn coprimality() {
        let x = parse_poly("x").unwrap();
        let xy = parse_poly("x*y").unwrap();
        let y2 = parse_poly("y^2 + 1").unwrap();
        assert!(matches!(check_coprime(&x, &xy, &cfg()), Err(Error::NotCoprime(1))));
        assert!(check_coprime(&xy, &y2, &cfg()).is_ok());
        assert!(check_coprime(&x, &parse_poly("3").unwrap(), &cfg()).is_ok());
    }

    #[test]
    fn sabbah_line_examples() {
        let (b, _) = sabbah_line(&parse_poly("x").unwrap(), &parse_poly("y").unwrap(), 0, &cfg()).unwrap();
        assert!(BFunction::from_roots(&[(q(-1, 1), 1)]).divides(&b));
        let (b, _) = sabbah_line(&parse_poly("x").unwrap(), &parse_poly("1").unwrap(), 3, &cfg()).unwrap();
        assert_eq!(b, BFunction::from_roots(&[(q(-1, 1), 1)]));
        let (b, _) = sabbah_line(&parse_poly("x^3").unwrap(), &parse_poly("y^2").unwrap(), 0, &cfg()).unwrap();
        let expect = BFunction::from_roots(&[(q(-1, 1), 1), (q(-2, 3), 1), (q(-1, 3), 1)]);
        assert!(expect.divides(&b), "{b}");
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(matches!(
            PowerProduct::new(&[(parse_poly("s + x").unwrap(), "s")]),
            Err(Error::ReservedVariable(_))
        ));
        assert!(matches!(
            PowerProduct::new(&[(parse_poly("dx").unwrap(), "s")]),
            Err(Error::ReservedVariable(_))
        ));
    }
}
