//! Univariate helpers over Q and the `BFunction` value type.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::MultiPoly;
use crate::rational::Rational;

/// Name of the b-function variable.
pub const S: &str = "s";

/// Quotient and remainder of univariate division over Q.
pub fn div_rem(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    assert!(!b.is_zero(), "division by zero polynomial");
    let var = b.vars()[0].clone();
    let bc = b.univariate_coeffs();
    let db = bc.len() - 1;
    let lead = bc[db].clone();
    let mut r = a.univariate_coeffs();
    if r.len() <= db {
        return (MultiPoly::zero(&[&var]), a.clone());
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in bc.iter().enumerate() {
                let t = &c * bj;
                r[i + j] -= &t;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (MultiPoly::univariate(&var, &q), MultiPoly::univariate(&var, &r))
}

/// True iff `b = a*q` exactly for some polynomial `q` over Q.
pub fn poly_divides(a: &MultiPoly, b: &MultiPoly) -> bool {
    assert!(!a.is_zero(), "poly_divides: divisor must be nonzero");
    div_rem(b, a).1.is_zero()
}

pub fn univariate_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = div_rem(&a, &b).1;
        a = b;
        b = r;
    }
    a.monic()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    // factor by trial division; desk-scale coefficients stay small
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut k = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        if k > 0 {
            factors.push((p.clone(), k));
        }
        p += 1;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Rational roots with multiplicity, plus the cofactor that has no rational
/// roots: `p = remainder * prod (s - r)^mult`.
pub fn rational_roots(p: &MultiPoly) -> (Vec<(Rational, u32)>, MultiPoly) {
    assert!(!p.is_zero(), "rational_roots of zero polynomial");
    let var = p.vars()[0].clone();
    let mut coeffs = p.univariate_coeffs();
    let mut roots: Vec<(Rational, u32)> = Vec::new();

    let mut zero_mult = 0;
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }

    let deflate = |coeffs: &[Rational], r: &Rational| -> Option<Vec<Rational>> {
        // synthetic division by (s - r)
        let n = coeffs.len() - 1;
        let mut out = vec![Rational::zero(); n];
        let mut acc = Rational::zero();
        for i in (1..=n).rev() {
            acc = &coeffs[i] + &(&acc * r);
            out[i - 1] = acc.clone();
        }
        let rem = &coeffs[0] + &(&acc * r);
        rem.is_zero().then_some(out)
    };

    if coeffs.len() > 1 {
        let ints = MultiPoly::univariate(&var, &coeffs).primitive_integer_terms();
        let a0 = ints.first().map(|(_, c)| c.clone()).unwrap_or_default();
        let an = ints.last().map(|(_, c)| c.clone()).unwrap_or_default();
        let mut cands: Vec<Rational> = Vec::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                if num.gcd(&den).is_one() {
                    cands.push(Rational::new(num.clone(), den.clone()));
                    cands.push(Rational::new(-num.clone(), den.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let mut mult = 0;
            while coeffs.len() > 1 {
                match deflate(&coeffs, &r) {
                    Some(next) => {
                        coeffs = next;
                        mult += 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, MultiPoly::univariate(&var, &coeffs))
}

/// `prod (var - r)^mult` over the given roots.
pub fn poly_from_roots(var: &str, roots: &[(Rational, u32)]) -> MultiPoly {
    let mut p = MultiPoly::one(&[var]);
    for (r, m) in roots {
        let lin = MultiPoly::univariate(var, &[-r, Rational::one()]);
        p = p.mul(&lin.pow(*m));
    }
    p
}

/// Substitute `s -> a*s + c` into a univariate polynomial.
pub fn affine_substitute(p: &MultiPoly, a: &Rational, c: &Rational, var: &str) -> MultiPoly {
    let img = MultiPoly::univariate(var, &[c.clone(), a.clone()]);
    if p.is_zero() {
        return MultiPoly::zero(&[var]);
    }
    p.compose(&[img])
}

/// One root with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootMult {
    pub root: Rational,
    pub mult: u32,
}

/// A monic univariate polynomial in `s`, together with its rational roots
/// when it splits over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFunction {
    poly: MultiPoly,
    roots: Option<Vec<(Rational, u32)>>,
}

impl BFunction {
    /// Normalize to monic form over the variable `s`. Panics on zero input.
    pub fn from_poly(p: &MultiPoly) -> Self {
        assert!(!p.is_zero(), "b-function must be nonzero");
        let p = if p.vars().len() == 1 && p.vars()[0] == S {
            p.clone()
        } else {
            assert_eq!(p.nvars(), 1, "b-function must be univariate");
            MultiPoly::from_terms(&[S], p.terms().map(|(e, c)| (e.clone(), c.clone())))
        };
        let poly = p.monic();
        let (roots, rem) = rational_roots(&poly);
        let split = rem.is_constant();
        BFunction { poly, roots: split.then_some(roots) }
    }

    pub fn from_roots(roots: &[(Rational, u32)]) -> Self {
        Self::from_poly(&poly_from_roots(S, roots))
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree_in(0).unwrap_or(0)
    }

    /// Roots with multiplicities, ascending; `None` when not split over Q.
    pub fn roots(&self) -> Option<&[(Rational, u32)]> {
        self.roots.as_deref()
    }

    /// Distinct roots (ascending); empty if not split.
    pub fn root_set(&self) -> Vec<Rational> {
        self.roots
            .as_ref()
            .map(|r| r.iter().map(|(x, _)| x.clone()).collect())
            .unwrap_or_default()
    }

    pub fn max_root(&self) -> Option<Rational> {
        self.roots.as_ref().and_then(|r| r.last().map(|(x, _)| x.clone()))
    }

    pub fn divides(&self, other: &BFunction) -> bool {
        poly_divides(&self.poly, &other.poly)
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.poly.eval(std::slice::from_ref(s))
    }

    /// Drop one copy of the root `r`. Returns `None` if `r` is not a root.
    pub fn without_root(&self, r: &Rational) -> Option<BFunction> {
        let lin = MultiPoly::univariate(S, &[-r, Rational::one()]);
        let (q, rem) = div_rem(&self.poly, &lin);
        (rem.is_zero() && !q.is_zero()).then(|| BFunction::from_poly(&q))
    }

    /// Maximal proper monic divisors: one root removed at a time.
    pub fn maximal_proper_divisors(&self) -> Vec<(Rational, BFunction)> {
        self.root_set()
            .into_iter()
            .filter_map(|r| {
                let d = self.without_root(&r)?;
                Some((r, d))
            })
            .collect()
    }

    pub fn root_mults(&self) -> Vec<RootMult> {
        self.roots
            .as_ref()
            .map(|r| {
                r.iter()
                    .map(|(root, mult)| RootMult { root: root.clone(), mult: *mult })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Factored form such as `(s + 1)^2*(s + 1/2)`, or the expanded
    /// polynomial when it does not split.
    pub fn factored(&self) -> String {
        match &self.roots {
            Some(roots) if !roots.is_empty() => roots
                .iter()
                .rev()
                .map(|(r, m)| {
                    let lin = if r.is_zero() {
                        "s".to_string()
                    } else if r.is_negative() {
                        format!("(s + {})", r.abs())
                    } else {
                        format!("(s - {r})")
                    };
                    if *m > 1 {
                        format!("{lin}^{m}")
                    } else {
                        lin
                    }
                })
                .collect::<Vec<_>>()
                .join("*"),
            _ => self.poly.to_string(),
        }
    }

    pub fn coefficient_bits(&self) -> u64 {
        self.poly
            .terms()
            .map(|(_, c)| c.numer().bits() + c.denom().bits())
            .max()
            .unwrap_or(0)
    }

    pub fn roots_as_f64(&self) -> Vec<f64> {
        self.root_set()
            .iter()
            .map(|r| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}
