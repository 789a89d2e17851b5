//! Presentation of `sigma_m = G^{-m} delta(t - F/G)` by its annihilator in
//! `D_{n+1}` (coordinates then `t`).
//!
//! Away from `G = 0` the module is free over `Q[x][1/G]` with basis
//! `dt^j delta`, and the action is explicit:
//! `t (a dt^j delta) = a f dt^j delta - j a dt^{j-1} delta`,
//! `d_i (a dt^j delta) = (d_i a) dt^j delta - a f_i dt^{j+1} delta`.
//! The annihilator is the seed ideal saturated by `G`; its low-degree part
//! is recovered as the kernel of the action on bounded-degree operators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::config::EngineConfig;
use crate::error::Result;
use crate::linalg::{kernel, sparse_row, SparseRow};
use crate::par::par_map;
use crate::poly::{Exponents, MultiPoly};
use crate::rational::Rational;
use crate::weyl::{d_name, LeftIdeal, MonomialOrder, Signature, WeylElement};

use super::laurent::MeroInput;

/// `sum_j (nums[j] / G^e) dt^j delta`.
#[derive(Debug, Clone, PartialEq)]
struct GraphElem {
    nums: Vec<MultiPoly>,
    e: u32,
}

struct GraphModel {
    xs: Vec<String>,
    f: MultiPoly,
    g: MultiPoly,
    gi: Vec<MultiPoly>,
    hi: Vec<MultiPoly>,
}

impl GraphModel {
    fn new(input: &MeroInput) -> Self {
        let xs = input.xs().to_vec();
        let f = input.to_coords(input.f());
        let g = input.to_coords(input.g());
        let n = xs.len();
        let gi = (0..n).map(|i| g.derivative(i)).collect();
        let hi = (0..n).map(|i| input.to_coords(&input.h(i))).collect();
        GraphModel { xs, f, g, gi, hi }
    }

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.xs)
    }

    fn sigma(&self, m: u32) -> GraphElem {
        GraphElem { nums: vec![MultiPoly::one(&self.xs)], e: m }
    }

    fn dt(&self, v: &GraphElem) -> GraphElem {
        let mut nums = vec![self.zero()];
        nums.extend(v.nums.iter().cloned());
        GraphElem { nums, e: v.e }
    }

    fn t(&self, v: &GraphElem) -> GraphElem {
        let len = v.nums.len();
        let nums = (0..len)
            .map(|j| {
                let mut a = self.f.mul(&v.nums[j]);
                if j + 1 < len {
                    a = a.sub(&self.g.mul(&v.nums[j + 1]).scale(&Rational::from((j + 1) as i64)));
                }
                a
            })
            .collect();
        GraphElem { nums, e: v.e + 1 }
    }

    fn d(&self, i: usize, v: &GraphElem) -> GraphElem {
        let len = v.nums.len();
        let e = Rational::from(v.e as i64);
        let nums = (0..=len)
            .map(|j| {
                let mut a = self.zero();
                if j < len {
                    let nj = &v.nums[j];
                    a = nj.derivative(i).mul(&self.g).sub(&nj.mul(&self.gi[i]).scale(&e)).mul(&self.g);
                }
                if j >= 1 {
                    a = a.sub(&v.nums[j - 1].mul(&self.hi[i]));
                }
                a
            })
            .collect();
        GraphElem { nums, e: v.e + 2 }
    }

    /// `x^a d^b t^c dt^d sigma`, memoized on the derivation part.
    fn apply(
        &self,
        mono: &[u32],
        sigma: &GraphElem,
        cache: &mut HashMap<Vec<u32>, GraphElem>,
    ) -> GraphElem {
        let n = self.xs.len();
        // mono layout: x1 dx1 .. xn dxn t dt
        let mut key: Vec<u32> = (0..n).map(|i| mono[2 * i + 1]).collect();
        key.push(mono[2 * n]);
        key.push(mono[2 * n + 1]);
        let base = self.apply_right(&key, sigma, cache);
        let mut xe = vec![0u32; n];
        for i in 0..n {
            xe[i] = mono[2 * i];
        }
        GraphElem {
            nums: base.nums.iter().map(|p| p.mul_monomial(&xe, &Rational::one())).collect(),
            e: base.e,
        }
    }

    /// `d^b t^c dt^d sigma` with key `(b.., c, d)`.
    fn apply_right(
        &self,
        key: &[u32],
        sigma: &GraphElem,
        cache: &mut HashMap<Vec<u32>, GraphElem>,
    ) -> GraphElem {
        if let Some(r) = cache.get(key) {
            return r.clone();
        }
        let n = self.xs.len();
        let r = if let Some(i) = (0..n).find(|&i| key[i] > 0) {
            let mut k = key.to_vec();
            k[i] -= 1;
            self.d(i, &self.apply_right(&k, sigma, cache))
        } else if key[n] > 0 {
            let mut k = key.to_vec();
            k[n] -= 1;
            self.t(&self.apply_right(&k, sigma, cache))
        } else if key[n + 1] > 0 {
            let mut k = key.to_vec();
            k[n + 1] -= 1;
            self.dt(&self.apply_right(&k, sigma, cache))
        } else {
            sigma.clone()
        };
        cache.insert(key.to_vec(), r.clone());
        r
    }

    /// Numerators over `G^e_target`, keyed by `(j, x-monomial)`.
    fn flatten(&self, v: &GraphElem, e_target: u32) -> Vec<(usize, Exponents, Rational)> {
        let scale = self.g.pow(e_target - v.e);
        let mut out = Vec::new();
        for (j, p) in v.nums.iter().enumerate() {
            for (ex, c) in p.mul(&scale).terms() {
                out.push((j, ex.clone(), c.clone()));
            }
        }
        out
    }
}

/// `Ann(sigma_m)` as a left ideal of `D_{n+1}`.
#[derive(Debug, Clone)]
pub struct SigmaPresentation {
    pub m: u32,
    pub annihilator: LeftIdeal,
    /// True when `G` is constant (the seed is then the full annihilator), or
    /// when a full degree past the seed and past the last new generator
    /// added nothing. The latter is evidence, not proof, of completeness.
    pub stabilized: bool,
    /// Largest operator degree searched by the completion.
    pub completion_degree: u32,
    /// Generators added to the seed by the completion.
    pub added: usize,
}

/// `D_{n+1}` on the coordinates and `t`.
pub fn graph_algebra(input: &MeroInput) -> Result<Arc<Signature>> {
    let mut vars = input.xs().to_vec();
    vars.push("t".into());
    Signature::weyl(&vars, &[] as &[&str])
}

/// `tG - F` and `G^2 d_i + m G G_i + h_i dt`.
pub fn seed_generators(input: &MeroInput, m: u32) -> Result<Vec<WeylElement>> {
    let sig = graph_algebra(input)?;
    let f = input.to_coords(input.f());
    let g = input.to_coords(input.g());
    let t = WeylElement::gen(&sig, "t")?;
    let dt = WeylElement::gen(&sig, "dt")?;
    let fe = WeylElement::from_poly(&sig, &f)?;
    let ge = WeylElement::from_poly(&sig, &g)?;
    let mut gens = vec![ge.mul(&t).sub(&fe)];
    let g2 = g.mul(&g);
    for (i, x) in input.xs().iter().enumerate() {
        let di = WeylElement::gen(&sig, &d_name(x))?;
        let ggi = g.mul(&g.derivative(i)).scale(&Rational::from(m as i64));
        let hi = input.to_coords(&input.h(i));
        let gen = WeylElement::from_poly(&sig, &g2)?
            .mul(&di)
            .add(&WeylElement::from_poly(&sig, &ggi)?)
            .add(&WeylElement::from_poly(&sig, &hi)?.mul(&dt));
        gens.push(gen);
    }
    Ok(gens)
}

/// Graded pieces: weight vectors on `(x.., t)` making `sigma_m` an
/// eigenvector of the corresponding Euler operator.
fn graph_gradings(input: &MeroInput) -> Vec<Vec<i64>> {
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
            // generator weights: x_i: w_i, d_i: -w_i, t: df - dg, dt: dg - df
            let mut full = Vec::with_capacity(2 * n + 2);
            for wi in &w {
                full.push(*wi);
                full.push(-*wi);
            }
            full.push(df - dg);
            full.push(dg - df);
            Some(full)
        })
        .collect()
}

fn monomials_upto(nvars: usize, deg: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

/// Kernel of `P -> P sigma_m` on standard monomials of degree `<= deg`, one
/// graded piece at a time. Every annihilator reduces to such a combination,
/// and nonzero ones are never in the ideal with leading monomials `leads`.
fn annihilating_operators(
    model: &GraphModel,
    sig: &Arc<Signature>,
    m: u32,
    deg: u32,
    grads: &[Vec<i64>],
    leads: &[Exponents],
) -> Vec<WeylElement> {
    let standard = |e: &Exponents| !leads.iter().any(|l| l.iter().zip(e).all(|(a, b)| a <= b));
    let monos = monomials_upto(sig.nvars(), deg).into_iter().filter(standard);
    let mut pieces: BTreeMap<Vec<i64>, Vec<Exponents>> = BTreeMap::new();
    for e in monos {
        let key: Vec<i64> = grads
            .iter()
            .map(|w| w.iter().zip(&e).map(|(a, b)| a * *b as i64).sum())
            .collect();
        pieces.entry(key).or_default().push(e);
    }
    let pieces: Vec<Vec<Exponents>> = pieces.into_values().collect();
    let sigma = model.sigma(m);
    let results: Vec<Vec<WeylElement>> = par_map(&pieces, |piece| {
        let mut cache = HashMap::new();
        let images: Vec<GraphElem> = piece.iter().map(|e| model.apply(e, &sigma, &mut cache)).collect();
        let e_top = images.iter().map(|v| v.e).max().unwrap_or(0);
        let mut index: HashMap<(usize, Exponents), usize> = HashMap::new();
        // rows of the transposed system: one per output coordinate
        let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
        for (ci, v) in images.iter().enumerate() {
            for (j, ex, c) in model.flatten(v, e_top) {
                let next = index.len();
                let r = *index.entry((j, ex)).or_insert(next);
                if r == rows.len() {
                    rows.push(Vec::new());
                }
                rows[r].push((ci, c));
            }
        }
        let rows: Vec<SparseRow> = rows.into_iter().map(sparse_row).collect();
        kernel(&rows, piece.len())
            .into_iter()
            .map(|vec| {
                WeylElement::from_terms(
                    sig,
                    piece.iter().zip(vec).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c)),
                )
            })
            .collect()
    });
    results.into_iter().flatten().collect()
}

/// Annihilator of `sigma_m`: the seed, completed degree by degree until a
/// full degree adds nothing.
pub fn build_sigma(input: &MeroInput, m: u32, cfg: &EngineConfig) -> Result<SigmaPresentation> {
    let sig = graph_algebra(input)?;
    let seed = seed_generators(input, m)?;
    if input.g_is_constant() {
        return Ok(SigmaPresentation {
            m,
            annihilator: LeftIdeal::new(&sig, seed)?,
            stabilized: true,
            completion_degree: 0,
            added: 0,
        });
    }
    let model = GraphModel::new(input);
    let grads = graph_gradings(input);
    let seed_deg = seed.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1);
    let mut gens = seed;
    let mut added = 0;
    let mut last_new = 0;
    let mut stabilized = false;
    let mut d = 1;
    let ord = MonomialOrder::degrevlex();
    while d <= cfg.max_ann_degree {
        let gb = LeftIdeal::new(&sig, gens.clone())?.groebner(&ord, cfg)?;
        gens = gb.elements().to_vec();
        let new = annihilating_operators(&model, &sig, m, d, &grads, &gb.leading_exponents());
        if new.is_empty() {
            if d > last_new && d > seed_deg {
                stabilized = true;
                break;
            }
        } else {
            added += new.len();
            gens.extend(new);
            last_new = d;
        }
        d += 1;
    }
    Ok(SigmaPresentation {
        m,
        annihilator: LeftIdeal::new(&sig, gens)?,
        stabilized,
        completion_degree: d.min(cfg.max_ann_degree),
        added,
    })
}
