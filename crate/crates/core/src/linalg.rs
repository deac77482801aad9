//! Dense exact linear algebra: echelon forms, nullspaces, and {0,1}
//! echelon bases.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{Elem, Field};
use crate::lattice::Partition;

/// Row-accumulating matrix. Zero rows and rows proportional to an existing
/// row are dropped on insertion.
#[derive(Clone, Debug)]
pub struct Matrix {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Elem>>,
    seen: HashSet<Vec<Elem>>,
}

impl Matrix {
    pub fn new(field: &Field, cols: usize) -> Self {
        Matrix { field: field.clone(), cols, rows: Vec::new(), seen: HashSet::new() }
    }

    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let mut m = Self::new(field, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Returns whether the row was new.
    pub fn push_row(&mut self, row: Vec<Elem>) -> bool {
        assert_eq!(row.len(), self.cols, "row length");
        let f = &self.field;
        let Some(lead) = row.iter().find(|c| !f.is_zero(c)) else {
            return false;
        };
        let inv = f.inv(lead).unwrap();
        let key: Vec<Elem> = row.iter().map(|c| f.mul(c, &inv)).collect();
        if !self.seen.insert(key.clone()) {
            return false;
        }
        self.rows.push(key);
        true
    }

    /// Re-expresses every entry in an extension field.
    pub fn embed(&self, target: &Field) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| target.embed(&self.field, c)).collect())
            .collect();
        Self::from_rows(target, self.cols, rows)
    }

    /// Reduced row echelon form (nonzero rows only) and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Elem>>, Vec<usize>) {
        match self.field {
            Field::Rational => rref_rational(&self.rows, self.cols),
            _ => rref_field(&self.field, self.rows.clone(), self.cols),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical (reduced echelon) basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![None; self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(k);
        }
        for j in 0..self.cols {
            if is_pivot[j].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[j] = f.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(&r[k][j]);
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        rref_field(f, basis, self.cols).0
    }
}

/// Incrementally maintained reduced echelon basis of a row space. Rows
/// that add nothing to the span are discarded on insertion, so memory stays
/// bounded by the number of columns.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: &Field, cols: usize) -> Self {
        RowSpace { field: field.clone(), cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns whether the span grew.
    pub fn insert(&mut self, mut row: Vec<Elem>) -> bool {
        assert_eq!(row.len(), self.cols, "row length");
        let f = &self.field;
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&row[p]) {
                continue;
            }
            let m = row[p].clone();
            for (x, b) in row.iter_mut().zip(basis) {
                *x = f.sub(x, &f.mul(&m, b));
            }
        }
        let Some(p) = row.iter().position(|c| !f.is_zero(c)) else {
            return false;
        };
        let inv = f.inv(&row[p]).unwrap();
        for x in row.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for basis in self.rows.iter_mut() {
            if f.is_zero(&basis[p]) {
                continue;
            }
            let m = basis[p].clone();
            for (x, b) in basis.iter_mut().zip(&row) {
                *x = f.sub(x, &f.mul(&m, b));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, row);
        self.pivots.insert(at, p);
        true
    }

    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        Matrix::from_rows(&self.field, self.cols, self.rows.clone()).nullspace()
    }
}

/// Gauss-Jordan over an arbitrary field.
fn rref_field(f: &Field, mut rows: Vec<Vec<Elem>>, cols: usize) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let m = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(x, &f.mul(&m, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn to_q(e: &Elem) -> &BigRational {
    match e {
        Elem::Q(q) => q,
        _ => panic!("expected rational entry"),
    }
}

fn primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in v.iter() {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
}

/// Fraction-free elimination on integer rows (content removed after every
/// update), followed by back substitution over the rationals.
fn rref_rational(rows: &[Vec<Elem>], cols: usize) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(to_q(c).denom()));
            let mut v: Vec<BigInt> = r.iter().map(|c| to_q(c).numer() * (&den / to_q(c).denom())).collect();
            primitive(&mut v);
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == ints.len() {
            break;
        }
        // smallest pivot keeps the numbers down
        let Some(p) = (r..ints.len())
            .filter(|&i| !ints[i][c].is_zero())
            .min_by_key(|&i| ints[i][c].abs())
        else {
            continue;
        };
        ints.swap(r, p);
        let (head, tail) = ints.split_at_mut(r + 1);
        let pr = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pr[c].gcd(&row[c]);
            let a = &pr[c] / &g;
            let b = &row[c] / &g;
            for j in c..cols {
                row[j] = &row[j] * &a - &pr[j] * &b;
            }
            primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    ints.truncate(r);
    let f = Field::Rational;
    let echelon: Vec<Vec<Elem>> =
        ints.into_iter().map(|row| row.into_iter().map(|x| f.from_bigint(&x)).collect()).collect();
    // back substitution on the (short) echelon form
    rref_field(&f, echelon, cols)
}

/// Reads a partition off a canonical nullspace basis whose vectors are
/// {0,1}-valued with disjoint supports covering every column.
pub fn zero_one_echelon(field: &Field, basis: &[Vec<Elem>]) -> Option<Partition> {
    let cols = basis.first()?.len();
    let mut label = vec![usize::MAX; cols];
    for (k, v) in basis.iter().enumerate() {
        for (j, c) in v.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            if !field.is_one(c) || label[j] != usize::MAX {
                return None;
            }
            label[j] = k;
        }
    }
    if label.contains(&usize::MAX) {
        return None;
    }
    Some(Partition::from_labels(&label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        let f = Field::Rational;
        let cols = rows[0].len();
        Matrix::from_rows(&f, cols, rows.iter().map(|r| r.iter().map(|&c| f.from_i64(c)).collect()).collect())
    }

    fn ints(v: &[Vec<Elem>]) -> Vec<Vec<i64>> {
        let f = Field::Rational;
        v.iter().map(|r| r.iter().map(|c| f.format_elem(c).parse().unwrap()).collect()).collect()
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(ints(&q(&[&[1, -1, 0]]).nullspace()), vec![vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).nullspace().is_empty());
        assert_eq!(ints(&q(&[&[-20, 20, 0]]).nullspace()), vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn duplicate_rows_dropped() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 0], &[1, 0, 1]]);
        assert_eq!(m.rows().len(), 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn zero_one_examples() {
        let f = Field::Rational;
        let b = |rows: &[&[i64]]| -> Vec<Vec<Elem>> {
            rows.iter().map(|r| r.iter().map(|&c| f.from_i64(c)).collect()).collect()
        };
        let p = zero_one_echelon(&f, &b(&[&[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        assert_eq!(p.to_string(), "{{1,2},{3},{4}}");
        assert!(zero_one_echelon(&f, &b(&[&[1, 0], &[0, 1]])).unwrap().is_discrete());
        let half = vec![vec![f.one(), f.parse_elem("1/2").unwrap()]];
        assert!(zero_one_echelon(&f, &half).is_none());
    }

    #[test]
    fn row_space_matches_matrix() {
        let f = Field::Rational;
        let rows: Vec<Vec<i64>> = vec![vec![2, 4, 0, 6], vec![1, 2, 1, 3], vec![3, 6, 1, 9], vec![0, 0, 5, 0]];
        let mut space = RowSpace::new(&f, 4);
        let grew: Vec<bool> =
            rows.iter().map(|r| space.insert(r.iter().map(|&c| f.from_i64(c)).collect())).collect();
        assert_eq!(grew, [true, true, false, false]);
        let m = q(&[&[2, 4, 0, 6], &[1, 2, 1, 3], &[3, 6, 1, 9], &[0, 0, 5, 0]]);
        assert_eq!(space.nullspace(), m.nullspace());
    }

    #[test]
    fn finite_field_kernel() {
        let f = Field::Prime(5);
        let m = Matrix::from_rows(&f, 3, vec![vec![Elem::P(1), Elem::P(2), Elem::P(3)]]);
        for v in m.nullspace() {
            let dot = (0..3).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&m.rows()[0][j], &v[j])));
            assert!(f.is_zero(&dot));
        }
        assert_eq!(m.nullspace().len(), 2);
    }
}
