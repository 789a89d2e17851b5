//! Commutative multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, Rational};

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

pub(crate) fn add_exp(a: u32, b: u32) -> u32 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("monomial exponent overflow: {a} + {b}"))
}

/// A polynomial in a fixed ordered list of named variables.
///
/// Terms are keyed by exponent vector in a `BTreeMap`, so two polynomials over
/// the same variables are equal exactly when their term maps are equal. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.nvars()], c);
        }
        p
    }

    pub fn one(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let i = p
            .var_index(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        let mut e = vec![0; p.nvars()];
        e[i] = 1;
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn monomial(vars: &[impl AsRef<str>], exps: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        assert_eq!(exps.len(), p.nvars());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(
        vars: &[impl AsRef<str>],
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.nvars(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial in `var` from coefficients, constant term first.
    pub fn univariate(var: &str, coeffs: &[Rational]) -> Self {
        Self::from_terms(
            &[var],
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], c.clone())),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "variable mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut r = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| add_exp(*a, *b)).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn mul_monomial(&self, e: &[u32], c: &Rational) -> Self {
        let mut r = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            let ne: Exponents = e1.iter().zip(e).map(|(a, b)| add_exp(*a, *b)).collect();
            r.add_term(ne, c1 * c);
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                r.add_term(ne, c * &Rational::from(e[i] as i64));
            }
        }
        r
    }

    /// Re-express over a larger (or permuted) variable list. Every current
    /// variable must be present in `new_vars`.
    pub fn embed(&self, new_vars: &[impl AsRef<str>]) -> Self {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                new_vars
                    .iter()
                    .position(|w| w.as_ref() == v)
                    .unwrap_or_else(|| panic!("variable `{v}` missing from target list"))
            })
            .collect();
        let mut r = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_vars.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] = x;
            }
            r.add_term(ne, c.clone());
        }
        r
    }

    /// Substitute polynomials (all over a common target variable list) for
    /// every variable.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .expect("compose needs at least one variable");
        let mut r = MultiPoly { vars: target.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            r = r.add(&t);
        }
        r
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= &x.pow(k);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Weighted degree of each term under integer weights; `Some(d)` when all
    /// terms share the same weighted degree.
    pub fn weighted_homogeneous_degree(&self, w: &[i64]) -> Option<i64> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: i64 = e.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    /// Scale to a primitive integer polynomial; returns the integer
    /// coefficients keyed by exponent, with positive leading (largest key)
    /// coefficient.
    pub fn primitive_integer_terms(&self) -> Vec<(Exponents, BigInt)> {
        let den = common_denominator(self.terms.values());
        let mut ints: Vec<(Exponents, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.numer() * (&den / c.denom())))
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for (_, c) in ints.iter_mut() {
                *c = &*c / &g;
            }
        }
        if let Some((_, c)) = ints.last() {
            if c.is_negative() {
                for (_, c) in ints.iter_mut() {
                    *c = -&*c;
                }
            }
        }
        ints
    }

    /// Coefficient of the largest exponent key (the leading coefficient for
    /// univariate polynomials).
    pub fn last_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Divide through by the leading coefficient of a univariate polynomial.
    pub fn monic(&self) -> Self {
        match self.last_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Coefficient list of a univariate polynomial, constant term first.
    pub fn univariate_coeffs(&self) -> Vec<Rational> {
        assert_eq!(self.nvars(), 1, "not univariate");
        let deg = self.degree_in(0).unwrap_or(0) as usize;
        let mut v = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            v[e[0] as usize] = c.clone();
        }
        if self.is_zero() {
            v.clear();
        }
        v
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (v, &k) in vars.iter().zip(e) {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{k}")?;
        }
    }
    Ok(())
}

/// Print terms largest-degree first; the output re-parses to the same value.
pub(crate) fn fmt_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    vars: &[String],
    terms: impl Iterator<Item = (&'a Exponents, &'a Rational)>,
) -> fmt::Result {
    let mut ts: Vec<_> = terms.collect();
    if ts.is_empty() {
        return write!(f, "0");
    }
    ts.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        db.cmp(&da).then_with(|| b.0.cmp(a.0))
    });
    for (i, (e, c)) in ts.into_iter().enumerate() {
        let is_const = e.iter().all(|&k| k == 0);
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if is_const {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write_monomial(f, vars, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.vars, self.terms.iter())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

/// Sorted union of the variable lists of several polynomials.
pub fn union_vars<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> Vec<String> {
    let mut v: Vec<String> = polys
        .into_iter()
        .flat_map(|p| p.vars().iter().cloned())
        .collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn arithmetic_drops_zero_terms() {
        let v = ["x", "y"];
        let x = MultiPoly::var(&v, "x");
        let y = MultiPoly::var(&v, "y");
        let p = x.add(&y).mul(&x.sub(&y));
        let expect = x.pow(2).sub(&y.pow(2));
        assert_eq!(p, expect);
        assert_eq!(p.num_terms(), 2);
        assert!(p.sub(&expect).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        let v = ["x", "y"];
        let x = MultiPoly::var(&v, "x");
        let y = MultiPoly::var(&v, "y");
        let p = x.pow(3).mul(&y).add(&MultiPoly::constant(&v, q(5)));
        assert_eq!(p.derivative(0), x.pow(2).mul(&y).scale(&q(3)));
        assert_eq!(p.eval(&[q(2), q(3)]), q(29));
    }

    #[test]
    fn embed_and_compose() {
        let p = MultiPoly::var(&["x"], "x").pow(2);
        let e = p.embed(&["s", "x"]);
        assert_eq!(e.coeff(&[0, 2]), q(1));
        let s = MultiPoly::var(&["s"], "s");
        let shifted = p.compose(&[s.add(&MultiPoly::one(&["s"]))]);
        assert_eq!(shifted.univariate_coeffs(), vec![q(1), q(2), q(1)]);
    }

    #[test]
    fn display_is_canonical() {
        let v = ["x", "y"];
        let x = MultiPoly::var(&v, "x");
        let y = MultiPoly::var(&v, "y");
        let p = x.pow(2).add(&y.pow(2)).sub(&x.mul(&y).scale(&Rational::new(3, 2)));
        assert_eq!(p.to_string(), "x^2 - 3/2*x*y + y^2");
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
    }

    #[test]
    fn weighted_homogeneity() {
        let v = ["x", "y"];
        let p = MultiPoly::var(&v, "x").pow(3).add(&MultiPoly::var(&v, "y").pow(2));
        assert_eq!(p.weighted_homogeneous_degree(&[2, 3]), Some(6));
        assert_eq!(p.weighted_homogeneous_degree(&[1, 1]), None);
    }
}
