//! One function per subcommand; each returns a complete report or an error.

use std::collections::BTreeSet;
use std::path::Path;

use mbfun::ann::{bernstein_sato, sabbah_line};
use mbfun::expr::parse_poly;
use mbfun::mero::{b_mero, b_simple, certify, reduced_b, Certification, MeroInput, OracleBounds, QuasiHomogeneity};
use mbfun::multiplier::{check_cor_jump, default_upper, jumping_numbers_nc, JumpReport};
use mbfun::nc::{bound_set, check_lemma4, check_thm41, eigenvalue_classes, roots_nc, ChartFile, NCChart};
use mbfun::{EngineConfig, Error, MultiPoly, Rational};
use serde_json::{json, Value};

use crate::report::{self, Report};

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// The mathematics did not go through: exit code 1.
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::ReservedVariable(_)
            | Error::InvalidChart(_)
            | Error::NotQuasiHomogeneous(_)
            | Error::NotCoprime(_)
            | Error::ZeroDenominator
            | Error::InadmissibleWeight(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

pub type Outcome = std::result::Result<Report, Failure>;

pub struct Ctx<'a> {
    pub argv: &'a [String],
    pub cfg: EngineConfig,
}

fn poly(src: &str) -> std::result::Result<MultiPoly, Failure> {
    parse_poly(src).map_err(|e| Failure::Usage(format!("in `{src}`: {e}")))
}

fn pair(f: &str, g: &str, cfg: &EngineConfig) -> std::result::Result<(MeroInput, Value), Failure> {
    let (fp, gp) = (poly(f)?, poly(g)?);
    let input = MeroInput::new(&fp, &gp, cfg)?;
    let echo = json!({ "F": fp.to_string(), "G": gp.to_string(), "vars": input.xs() });
    Ok((input, echo))
}

fn charts(path: &Path) -> std::result::Result<ChartFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(ChartFile::from_json(&text)?)
}

fn single_chart(file: &ChartFile) -> std::result::Result<&NCChart, Failure> {
    match file.charts.as_slice() {
        [c] => Ok(c),
        cs => Err(Failure::Usage(format!(
            "multiplier ideals use the single-chart tier; the file has {} charts",
            cs.len()
        ))),
    }
}

pub fn bf_classic(ctx: &Ctx, f: &str, bounds: Option<OracleBounds>) -> Outcome {
    let fp = poly(f)?;
    let b = bernstein_sato(&fp, &ctx.cfg)?;
    let bounds = bounds.unwrap_or(OracleBounds { n_max: 1, deg: b.degree().max(4) });
    let input = MeroInput::new(&fp, &MultiPoly::one(fp.vars()), &ctx.cfg)?;
    let cert = certify(&b, &input, 0, &MultiPoly::one(input.xs()), bounds)?;
    // the engine result is exact; the oracle only adds a certificate
    let status = match &cert {
        Some(c) if c.minimal() => Certification::Certified,
        _ => Certification::Uncertified,
    };
    let mut result = json!({ "b": report::bfunction(&b), "oracle_bounds": bounds });
    if let Some(c) = &cert {
        result["certificate"] = report::certificate(c);
    }
    Ok(Report::new(ctx.argv, json!({ "F": fp.to_string() }), result, status))
}

pub fn bf_mero(ctx: &Ctx, f: &str, g: &str, m: u32, bounds: Option<OracleBounds>) -> Outcome {
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    echo["m"] = json!(m);
    let bounds = bounds.unwrap_or_default();
    let r = b_mero(&input, m, bounds, &ctx.cfg)?;
    let mut result = report::engine_result(&r);
    result["oracle_bounds"] = json!(bounds);
    Ok(Report::new(ctx.argv, echo, result, r.status))
}

pub fn bf_simple(ctx: &Ctx, f: &str, g: &str, m: u32, bounds: Option<OracleBounds>) -> Outcome {
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    echo["m"] = json!(m);
    let bounds = OracleBounds { n_max: 1, ..bounds.unwrap_or_default() };
    let r = b_simple(&input, m, bounds, &ctx.cfg)?;
    let mut result = report::engine_result(&r);
    result["oracle_bounds"] = json!(bounds);
    Ok(Report::new(ctx.argv, echo, result, r.status))
}

pub fn bf_reduced(ctx: &Ctx, f: &str, g: &str, weights: &[i64], d1: Option<i64>, d2: Option<i64>) -> Outcome {
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    let weighted = |p: &MultiPoly| input.to_coords(p).weighted_homogeneous_degree(weights);
    let d1 = d1.or_else(|| (weights.len() == input.n()).then(|| weighted(input.f())).flatten());
    let d2 = d2.or_else(|| (weights.len() == input.n()).then(|| weighted(input.g())).flatten());
    let (Some(d1), Some(d2)) = (d1, d2) else {
        return Err(Error::NotQuasiHomogeneous("F or G has no weighted degree for these weights".into()).into());
    };
    let qh = QuasiHomogeneity::check(&input, weights, d1, d2)?;
    echo["weights"] = json!(weights);
    echo["d1"] = json!(d1);
    echo["d2"] = json!(d2);
    let r = reduced_b(&input, &qh, &ctx.cfg)?;
    let status = if r.fast_path { Certification::Certified } else { Certification::Uncertified };
    let result = json!({
        "b": report::bfunction(&r.b),
        "fast_path": r.fast_path,
        "g_power": r.g_power,
        "presentation_stabilized": r.stabilized,
    });
    Ok(Report::new(ctx.argv, echo, result, status))
}

pub fn bf_sabbah_line(ctx: &Ctx, f: &str, g: &str, m: u32) -> Outcome {
    let (fp, gp) = (poly(f)?, poly(g)?);
    let (_, line) = sabbah_line(&fp, &gp, m, &ctx.cfg)?;
    let echo = json!({ "F": fp.to_string(), "G": gp.to_string(), "m": m });
    // a multiple of the meromorphic b-function, not claimed minimal
    let result = json!({ "b": line.b, "bivariate": line.bivariate, "kind": "multiple" });
    Ok(Report::new(ctx.argv, echo, result, Certification::Uncertified))
}

pub enum NcWhat {
    Roots,
    Bound,
    Eigen,
}

pub fn nc(ctx: &Ctx, what: NcWhat, path: &Path, m: u32) -> Outcome {
    let file = charts(path)?;
    let echo = json!({ "charts": file.charts, "m": m });
    let bound = bound_set(&file.charts, m);
    let result = match what {
        NcWhat::Roots => json!({
            "charts": file.charts.iter().map(|c| json!({ "label": c.label, "roots": roots_nc(c, m) })).collect::<Vec<_>>(),
        }),
        NcWhat::Bound => json!({ "residues": bound.residues }),
        NcWhat::Eigen => json!({ "classes": eigenvalue_classes(&bound.residues) }),
    };
    Ok(Report::new(ctx.argv, echo, result, Certification::Certified))
}

fn jumps(chart: &NCChart, upper: Option<Rational>) -> std::result::Result<JumpReport, Failure> {
    let upper = upper.unwrap_or_else(|| default_upper(chart));
    Ok(jumping_numbers_nc(chart, &upper)?)
}

pub fn jump_nc(ctx: &Ctx, path: &Path, upper: Option<Rational>) -> Outcome {
    let file = charts(path)?;
    let chart = single_chart(&file)?;
    let report = jumps(chart, upper.clone())?;
    let echo = json!({ "chart": chart, "upper": upper.unwrap_or_else(|| default_upper(chart)) });
    let result = serde_json::to_value(&report).expect("jump report serializes");
    Ok(Report::new(ctx.argv, echo, result, Certification::Certified))
}

fn worst(a: Certification, b: Certification) -> Certification {
    use Certification::*;
    match (a, b) {
        (Failed, _) | (_, Failed) => Failed,
        (Uncertified, _) | (_, Uncertified) => Uncertified,
        _ => Certified,
    }
}

fn verdict(holds: bool, inputs: Certification) -> Certification {
    if holds {
        inputs
    } else {
        Certification::Failed
    }
}

pub fn check_lemma4_cmd(ctx: &Ctx, f: &str, g: &str, m_small: u32, m_big: u32, cap: u32) -> Outcome {
    if m_small > m_big {
        return Err(Failure::Usage(format!("--m-small {m_small} exceeds --m-big {m_big}")));
    }
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    let bounds = OracleBounds::default();
    let small = b_mero(&input, m_small, bounds, &ctx.cfg)?;
    let big = b_mero(&input, m_big, bounds, &ctx.cfg)?;
    let rs: BTreeSet<Rational> = small.b.root_set().into_iter().collect();
    let rb: BTreeSet<Rational> = big.b.root_set().into_iter().collect();
    let l = check_lemma4(&rs, &rb, cap);
    echo["m_small"] = json!(m_small);
    echo["m_big"] = json!(m_big);
    echo["cap"] = json!(cap);
    let result = json!({
        "holds": l.is_some(),
        "l": l,
        "b_small": report::bfunction(&small.b),
        "b_big": report::bfunction(&big.b),
    });
    Ok(Report::new(ctx.argv, echo, result, verdict(l.is_some(), worst(small.status, big.status))))
}

pub fn check_thm41_cmd(ctx: &Ctx, f: &str, g: &str, m: u32, path: &Path) -> Outcome {
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    let file = charts(path)?;
    let r = b_mero(&input, m, OracleBounds::default(), &ctx.cfg)?;
    let bound = bound_set(&file.charts, m);
    let holds = check_thm41(&r.b, &bound, m);
    echo["m"] = json!(m);
    echo["charts"] = json!(file.charts);
    let result = json!({ "holds": holds, "b": report::bfunction(&r.b), "residues": bound.residues });
    Ok(Report::new(ctx.argv, echo, result, verdict(holds, r.status)))
}

pub fn check_corjump_cmd(ctx: &Ctx, f: &str, g: &str, path: &Path, upper: Option<Rational>) -> Outcome {
    let (input, mut echo) = pair(f, g, &ctx.cfg)?;
    let file = charts(path)?;
    let chart = single_chart(&file)?;
    let r = b_mero(&input, 0, OracleBounds::default(), &ctx.cfg)?;
    let report = jumps(chart, upper)?;
    let holds = check_cor_jump(&report, &r.b);
    echo["chart"] = json!(chart);
    let result = json!({
        "holds": holds,
        "b0": report::bfunction(&r.b),
        "jumps": report.jumps,
        "lct": report.lct,
    });
    Ok(Report::new(ctx.argv, echo, result, verdict(holds, r.status)))
}
