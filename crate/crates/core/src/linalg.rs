//! Sparse exact linear algebra over Q.
//!
//! Rows are sorted `(column, value)` lists without zeros. Echelon form keeps
//! one row per pivot column, normalized to 1 at the pivot, with every other
//! entry in a larger column.

use std::collections::BTreeMap;

use crate::rational::Rational;

pub type SparseRow = Vec<(usize, Rational)>;

/// `row - c * other`, both sorted.
fn axpy(row: &SparseRow, c: &Rational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            let v = -(c * &other[j].1);
            out.push((other[j].0, v));
            j += 1;
        } else {
            let v = &row[i].1 - &(c * &other[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize(row: &mut SparseRow) {
    let inv = row[0].1.recip();
    for (_, v) in row.iter_mut() {
        *v = &*v * &inv;
    }
}

/// Build a sorted sparse row from arbitrary entries, summing duplicates.
pub fn sparse_row(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseRow {
    let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
    for (c, v) in entries {
        *m.entry(c).or_default() += &v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Row echelon form built one row at a time.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the current pivots; the result has no entry in
    /// a pivot column smaller than its own leading column.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((c, v)) = row.first().cloned() {
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => break,
            }
        }
        row
    }

    /// Insert a row. Returns the reduced row's leading column if it was
    /// independent.
    pub fn insert(&mut self, row: SparseRow) -> Option<usize> {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return None;
        }
        normalize(&mut row);
        let c = row[0].0;
        self.pivots.insert(c, row);
        Some(c)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &usize> {
        self.pivots.keys()
    }

    /// Back substitution for the homogeneous system, free columns preset.
    fn back_substitute(&self, x: &mut [Rational]) {
        for (&c, row) in self.pivots.iter().rev() {
            let mut acc = Rational::zero();
            for (j, v) in &row[1..] {
                acc -= &(v * &x[*j]);
            }
            x[c] = acc;
        }
    }
}

/// Solve `A x = b` with `A` given as sparse rows over `ncols` columns. Free
/// variables are set to zero. `None` when inconsistent.
pub fn solve(rows: &[SparseRow], rhs: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let mut ech = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut row = r.clone();
        debug_assert!(row.iter().all(|(c, _)| *c < ncols));
        if !b.is_zero() {
            row.push((ncols, b.clone()));
        }
        if ech.insert(row) == Some(ncols) {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); ncols];
    for (&c, row) in ech.pivots.iter().rev() {
        let mut acc = Rational::zero();
        for (j, v) in &row[1..] {
            if *j == ncols {
                acc += v;
            } else {
                acc -= &(v * &x[*j]);
            }
        }
        x[c] = acc;
    }
    Some(x)
}

/// Basis of the right kernel of the matrix, one dense vector per free column.
pub fn kernel(rows: &[SparseRow], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r.clone());
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            ech.back_substitute(&mut x);
            x
        })
        .collect()
}

/// Detects the first vector that is a linear combination of earlier ones.
///
/// Each pushed vector is tagged with an identity column past `width`, so a
/// reduction to a tag-only row reads off the dependency.
#[derive(Debug, Clone)]
pub struct Dependency {
    width: usize,
    count: usize,
    ech: Echelon,
}

impl Dependency {
    pub fn new(width: usize) -> Self {
        Dependency { width, count: 0, ech: Echelon::new() }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Push vector `v_n`. On dependency returns `lambda` with
    /// `sum lambda_i v_i = 0` and `lambda_n = 1`; otherwise records `v_n`.
    pub fn push(&mut self, v: SparseRow) -> Option<Vec<Rational>> {
        let n = self.count;
        self.count += 1;
        let mut row = v;
        debug_assert!(row.iter().all(|(c, _)| *c < self.width));
        row.push((self.width + n, Rational::one()));
        let red = self.ech.reduce(row);
        if red.is_empty() {
            unreachable!("tag column keeps every row nonzero");
        }
        if red[0].0 >= self.width {
            // red = sum mu_i e_{tag i}; scale so the newest tag has coefficient 1
            let lead = red
                .iter()
                .find(|(c, _)| *c == self.width + n)
                .map(|(_, v)| v.clone())
                .expect("newest tag survives reduction");
            let mut lambda = vec![Rational::zero(); n + 1];
            for (c, v) in &red {
                lambda[c - self.width] = v / &lead;
            }
            self.count -= 1;
            return Some(lambda);
        }
        self.ech.insert(red);
        None
    }
}

/// Dense matrix-vector product helper for checks.
pub fn apply(rows: &[SparseRow], x: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|r| r.iter().fold(Rational::zero(), |acc, (c, v)| acc + v * &x[*c]))
        .collect()
}
