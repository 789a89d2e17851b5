//! Brute-force certification of functional equations
//! `b(s) c(x) G^{-m} f^s = sum_{k=1}^N P_k(s) G^{-m} f^{s+k}` by exact linear
//! algebra over bounded operator ansatzes.

use std::collections::HashMap;

use serde::Serialize;

use crate::bfunction::BFunction;
use crate::error::{Error, Result};
use crate::linalg::{sparse_row, Dependency, Echelon, SparseRow};
use crate::par::par_map;
use crate::poly::{Exponents, MultiPoly};
use crate::rational::Rational;
use crate::weyl::{d_name, WeylElement};

use super::laurent::{apply_operator, derive_multi, LaurentSection, MeroInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleBounds {
    /// Largest number of shifted terms tried.
    pub n_max: u32,
    /// Operator degree and s-degree bound for each `P_k`.
    pub deg: u32,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { n_max: 3, deg: 6 }
    }
}

/// Operators `P_1..P_N` in `D_n[s]`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub n: u32,
    pub ops: Vec<WeylElement>,
}

/// Outcome of certifying a b-function.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Smallest N at which the equation was certified.
    pub n: u32,
    pub witness: Witness,
    /// Roots `r` such that `b/(s - r)` admits no witness within the bounds.
    pub rejected: Vec<Rational>,
    /// Roots whose removal still admitted a witness.
    pub accepted: Vec<Rational>,
}

impl Certificate {
    pub fn minimal(&self) -> bool {
        self.accepted.is_empty()
    }
}

/// Weight vectors (one per coordinate, plus the all-ones vector) under which
/// both F and G are homogeneous, with their degrees.
fn gradings(input: &MeroInput) -> Vec<(Vec<i64>, i64, i64)> {
    let n = input.n();
    let f = input.to_coords(input.f());
    let g = input.to_coords(input.g());
    let mut ws: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut w = vec![0; n];
            w[i] = 1;
            w
        })
        .collect();
    ws.push(vec![1; n]);
    ws.into_iter()
        .filter_map(|w| {
            let df = f.weighted_homogeneous_degree(&w)?;
            let dg = g.weighted_homogeneous_degree(&w)?;
            Some((w, df, dg))
        })
        .collect()
}

/// All `(a, b)` exponent pairs with `|a| + |b| <= deg`.
fn op_monomials(n: usize, deg: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; 2 * n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, Vec<u32>)>, n: usize) {
        if i == 2 * n {
            out.push((cur[..n].to_vec(), cur[n..].to_vec()));
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out, n);
        }
        cur[i] = 0;
    }
    rec(0, deg, &mut cur, &mut out, n);
    out
}

struct Column {
    k: u32,
    a: Vec<u32>,
    b: Vec<u32>,
    j: u32,
}

/// The linear system for fixed `(F, G, m, c)` and bounds, shared by all
/// targets `b(s) c u_0`.
pub struct OracleSystem<'a> {
    input: &'a MeroInput,
    m: u32,
    c: MultiPoly,
    alpha: i64,
    beta: i64,
    cols: Vec<Column>,
    vectors: Vec<SparseRow>,
    col_start: Vec<usize>,
    monomials: HashMap<Exponents, usize>,
}

impl<'a> OracleSystem<'a> {
    /// `c` is a polynomial in the coordinates multiplying the target.
    pub fn new(input: &'a MeroInput, m: u32, c: &MultiPoly, bounds: OracleBounds) -> Self {
        let n = input.n();
        let c = input.lift(c);
        let grads = gradings(input);
        let c_coords = input.to_coords(&c);
        let c_w: Vec<Option<i64>> = grads.iter().map(|(w, _, _)| c_coords.weighted_homogeneous_degree(w)).collect();
        let monos = op_monomials(n, bounds.deg);

        // derivatives d^b u_k for the admissible (k, b)
        let mut sections: Vec<(u32, Vec<u32>, Vec<u32>, LaurentSection)> = Vec::new();
        for k in 1..=bounds.n_max {
            let u = input.u(m, k);
            let mut cache = HashMap::new();
            for (a, b) in &monos {
                let ok = grads.iter().zip(&c_w).all(|((w, df, dg), cw)| match cw {
                    Some(cw) => {
                        let wt: i64 = w.iter().zip(a.iter().zip(b)).map(|(wi, (ai, bi))| wi * (*ai as i64 - *bi as i64)).sum();
                        wt == cw - k as i64 * (df - dg)
                    }
                    None => true,
                });
                if ok {
                    let d = derive_multi(&u, b, input, &mut cache);
                    sections.push((k, a.clone(), b.clone(), d));
                }
            }
        }
        let target_base = input.u(m, 0).renormalize(input);
        let alpha = sections.iter().map(|s| s.3.fpow).chain([target_base.fpow]).max().unwrap_or(0);
        let beta = sections.iter().map(|s| s.3.gpow).chain([target_base.gpow]).max().unwrap_or(0);

        let nums: Vec<MultiPoly> = par_map(&sections, |(_, _, _, d)| d.numerator_over(input, alpha, beta));

        let mut cols = Vec::new();
        let mut polys: Vec<MultiPoly> = Vec::new();
        let mut col_start = vec![0usize; bounds.n_max as usize + 2];
        for ((k, a, b, _), num) in sections.iter().zip(&nums) {
            for j in 0..=bounds.deg {
                let mut e = a.clone();
                e.push(j);
                cols.push(Column { k: *k, a: a.clone(), b: b.clone(), j });
                polys.push(num.mul_monomial(&e, &Rational::one()));
            }
            col_start[*k as usize + 1] = cols.len();
        }
        for k in 1..col_start.len() {
            col_start[k] = col_start[k].max(col_start[k - 1]);
        }
        let mut sys = OracleSystem {
            input,
            m,
            c,
            alpha,
            beta,
            cols,
            vectors: Vec::new(),
            col_start,
            monomials: HashMap::new(),
        };
        sys.vectors = polys.iter().map(|p| sys.vectorize(p)).collect();
        sys.sort_monomials();
        sys
    }

    /// Renumber rows so that larger monomials (graded, then lex) come first.
    /// Pivots then follow leading terms, which keeps fill-in low.
    fn sort_monomials(&mut self) {
        let mut keys: Vec<(Exponents, usize)> = self.monomials.drain().collect();
        keys.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut perm = vec![0; keys.len()];
        for (new, (e, old)) in keys.into_iter().enumerate() {
            perm[old] = new;
            self.monomials.insert(e, new);
        }
        for v in &mut self.vectors {
            *v = sparse_row(v.drain(..).map(|(i, c)| (perm[i], c)));
        }
    }

    fn vectorize(&mut self, p: &MultiPoly) -> SparseRow {
        let mut entries = Vec::with_capacity(p.num_terms());
        for (e, c) in p.terms() {
            let next = self.monomials.len();
            let idx = *self.monomials.entry(e.clone()).or_insert(next);
            entries.push((idx, c.clone()));
        }
        sparse_row(entries)
    }

    fn target(&mut self, b: &BFunction) -> SparseRow {
        let bs = b.poly().embed(self.input.ring_vars());
        let base = self.input.u(self.m, 0).numerator_over(self.input, self.alpha, self.beta);
        let p = bs.mul(&self.c).mul(&base);
        self.vectorize(&p)
    }

    fn columns_upto(&self, n: u32) -> std::ops::Range<usize> {
        0..self.col_start[n as usize + 1]
    }

    /// Smallest `N <= n_max` for which `target` lies in the span of the
    /// images with `k <= N`.
    fn first_n(&mut self, target: &SparseRow, n_max: u32) -> Option<u32> {
        let mut ech = Echelon::new();
        for n in 1..=n_max {
            for i in self.col_start[n as usize]..self.col_start[n as usize + 1] {
                ech.insert(self.vectors[i].clone());
            }
            if ech.reduce(target.clone()).is_empty() {
                return Some(n);
            }
        }
        None
    }

    /// Explicit operators for a target known to be in the span at `N = n`.
    fn witness(&self, target: &SparseRow, n: u32) -> Result<Witness> {
        let range = self.columns_upto(n);
        // same row order as the span test; tags record the combination
        let mut dep = Dependency::new(self.monomials.len());
        let mut basis = Vec::new();
        for ci in range.clone() {
            if dep.push(self.vectors[ci].clone()).is_none() {
                basis.push(ci);
            }
        }
        let lambda = dep
            .push(target.clone())
            .ok_or_else(|| Error::OracleDisagreement("span test and solver disagree".into()))?;
        let mut x = vec![Rational::zero(); range.len()];
        for (ci, l) in basis.iter().zip(&lambda) {
            x[*ci] = -l;
        }
        let sig = self.input.dn_s()?;
        let nx = self.input.n();
        let xi: Vec<usize> = self.input.xs().iter().map(|v| sig.index(v).unwrap()).collect();
        let di: Vec<usize> = self.input.xs().iter().map(|v| sig.index(&d_name(v)).unwrap()).collect();
        let si = sig.index("s").unwrap();
        let mut ops = vec![WeylElement::zero(&sig); n as usize];
        for (ci, val) in x.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let col = &self.cols[ci];
            let mut e = vec![0u32; sig.nvars()];
            for i in 0..nx {
                e[xi[i]] = col.a[i];
                e[di[i]] = col.b[i];
            }
            e[si] = col.j;
            ops[col.k as usize - 1].add_term(e, val.clone());
        }
        Ok(Witness { n, ops })
    }
}

/// Check a witness by direct application of the operators.
pub fn check_witness(
    w: &Witness,
    b: &BFunction,
    c: &MultiPoly,
    input: &MeroInput,
    m: u32,
) -> Result<bool> {
    let mut lhs = LaurentSection::zero(input);
    for (k, p) in w.ops.iter().enumerate() {
        lhs = lhs.add(&apply_operator(p, &input.u(m, k as u32 + 1), input)?, input);
    }
    let rhs = input
        .u(m, 0)
        .scale_poly(&b.poly().embed(input.ring_vars()).mul(&input.lift(c)));
    Ok(lhs.equals(&rhs, input))
}

/// Search for `P_1..P_N` with exactly `N = n` shifted terms.
pub fn verify_functional_equation(
    b: &BFunction,
    input: &MeroInput,
    m: u32,
    n: u32,
    deg: u32,
) -> Result<Option<Witness>> {
    let one = MultiPoly::one(input.xs());
    let mut sys = OracleSystem::new(input, m, &one, OracleBounds { n_max: n, deg });
    let t = sys.target(b);
    let mut ech = Echelon::new();
    for i in sys.columns_upto(n) {
        ech.insert(sys.vectors[i].clone());
    }
    if !ech.reduce(t.clone()).is_empty() {
        return Ok(None);
    }
    let w = sys.witness(&t, n)?;
    if !check_witness(&w, b, &one, input, m)? {
        return Err(Error::OracleDisagreement("witness fails direct application".into()));
    }
    Ok(Some(w))
}

/// Certify `b` (target multiplied by `c`) and test each maximal proper
/// divisor at `N = n_max`.
pub fn certify(
    b: &BFunction,
    input: &MeroInput,
    m: u32,
    c: &MultiPoly,
    bounds: OracleBounds,
) -> Result<Option<Certificate>> {
    let mut sys = OracleSystem::new(input, m, c, bounds);
    let t = sys.target(b);
    let Some(n) = sys.first_n(&t, bounds.n_max) else {
        return Ok(None);
    };
    let witness = sys.witness(&t, n)?;
    if !check_witness(&witness, b, c, input, m)? {
        return Err(Error::OracleDisagreement("witness fails direct application".into()));
    }
    let mut ech = Echelon::new();
    for i in sys.columns_upto(bounds.n_max) {
        ech.insert(sys.vectors[i].clone());
    }
    let mut rejected = Vec::new();
    let mut accepted = Vec::new();
    for (r, d) in b.maximal_proper_divisors() {
        let td = sys.target(&d);
        if ech.reduce(td).is_empty() {
            accepted.push(r);
        } else {
            rejected.push(r);
        }
    }
    Ok(Some(Certificate { n, witness, rejected, accepted }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EngineConfig;
    use crate::expr::{parse_poly, parse_weyl};

    fn ctx(f: &str, g: &str) -> MeroInput {
        MeroInput::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap(), &EngineConfig::default()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn classical_coordinate() {
        let c = ctx("x", "1");
        let b = BFunction::from_roots(&[(q(-1, 1), 1)]);
        let w = verify_functional_equation(&b, &c, 0, 1, 1).unwrap().unwrap();
        assert_eq!(w.ops, vec![parse_weyl(&c.dn_s().unwrap(), "dx").unwrap()]);
    }

    #[test]
    fn classical_square() {
        let c = ctx("x^2", "1");
        let b = BFunction::from_roots(&[(q(-1, 1), 1), (q(-1, 2), 1)]);
        let w = verify_functional_equation(&b, &c, 0, 1, 2).unwrap().unwrap();
        assert_eq!(w.ops, vec![parse_weyl(&c.dn_s().unwrap(), "1/4*dx^2").unwrap()]);
        for r in [q(-1, 1), q(-1, 2)] {
            let d = b.without_root(&r).unwrap();
            assert!(verify_functional_equation(&d, &c, 0, 1, 4).unwrap().is_none());
        }
    }

    #[test]
    fn quotient_of_coordinates() {
        let c = ctx("x", "y");
        let b = BFunction::from_roots(&[(q(-1, 1), 1)]);
        let w = verify_functional_equation(&b, &c, 0, 1, 2).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn certificate_reports_minimality() {
        let c = ctx("x^2", "1");
        let one = MultiPoly::one(c.xs());
        let b = BFunction::from_roots(&[(q(-1, 1), 1), (q(-1, 2), 1)]);
        let cert = certify(&b, &c, 0, &one, OracleBounds { n_max: 2, deg: 4 }).unwrap().unwrap();
        assert_eq!(cert.n, 1);
        assert!(cert.minimal());
        // a proper multiple is certified but not minimal
        let b3 = BFunction::from_roots(&[(q(-1, 1), 2), (q(-1, 2), 1)]);
        let cert = certify(&b3, &c, 0, &one, OracleBounds { n_max: 2, deg: 4 }).unwrap().unwrap();
        assert!(!cert.minimal());
    }
}
