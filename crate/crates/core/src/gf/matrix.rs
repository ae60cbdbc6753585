use std::ops::{Index, IndexMut};

use super::field::{Elem, Field};
use super::poly::Poly;
use crate::error::{param, Result};

/// Dense row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A solution; `unique` holds when the matrix has full column rank.
    Consistent { x: Vec<Elem>, unique: bool },
    /// No solution exists.
    Inconsistent,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Elem>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Elem::ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Mat::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack<'a, I: IntoIterator<Item = &'a Mat>>(parts: I) -> Mat {
        let mut rows = 0;
        let mut cols = None;
        let mut entries = Vec::new();
        for m in parts {
            match cols {
                None => cols = Some(m.cols),
                Some(c) => assert_eq!(c, m.cols, "column mismatch in vstack"),
            }
            rows += m.rows;
            entries.extend_from_slice(&m.entries);
        }
        Mat::new(rows, cols.unwrap_or(0), entries)
    }

    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Mat {
        let mut out = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &r in row_idx {
            for &c in col_idx {
                out.push(self[(r, c)]);
            }
        }
        Mat::new(row_idx.len(), col_idx.len(), out)
    }

    pub fn mul_vec(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        self.row_iter().map(|row| field.dot(row, v)).collect()
    }

    pub fn mul(&self, field: &Field, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = field.add(out[(r, c)], field.mul(a, other[(k, c)]));
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Elem;
    fn index(&self, (r, c): (usize, usize)) -> &Elem {
        assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Elem {
        assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn reduce(field: &Field, m: &mut Mat, limit_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit_cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.entries.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = field.inv(m[(r, c)]).expect("pivot is nonzero");
        for j in c..m.cols {
            m[(r, j)] = field.mul(m[(r, j)], inv);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m[(i, c)];
            if factor.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let v = field.mul(factor, m[(r, j)]);
                m[(i, j)] = field.sub(m[(i, j)], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Mat) -> usize {
    let mut work = m.clone();
    let cols = work.cols;
    reduce(field, &mut work, cols).len()
}

/// Solves `a * x = b`.
pub fn solve(field: &Field, a: &Mat, b: &[Elem]) -> Result<Solution> {
    if a.rows != b.len() {
        return Err(param(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    let mut aug = Mat::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug[(r, c)] = a[(r, c)];
        }
        aug[(r, a.cols)] = b[r];
    }
    let pivots = reduce(field, &mut aug, a.cols);
    let rank = pivots.len();
    if (rank..a.rows).any(|r| !aug[(r, a.cols)].is_zero()) {
        return Ok(Solution::Inconsistent);
    }
    let mut x = vec![Elem::ZERO; a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, a.cols)];
    }
    Ok(Solution::Consistent {
        x,
        unique: rank == a.cols,
    })
}

/// Square circulant matrix whose row `r` is `c` cyclically shifted right by `r`.
pub fn circulant_from_row(c: &[Elem]) -> Mat {
    let n = c.len();
    assert!(n >= 1, "circulant needs a nonempty row");
    let mut m = Mat::zeros(n, n);
    for r in 0..n {
        for j in 0..n {
            m[(r, j)] = c[(j + n - r) % n];
        }
    }
    m
}

/// Row polynomial `c_0 + c_1 x + ... + c_{n-1} x^{n-1}` of a circulant.
pub fn circulant_polynomial(c: &[Elem]) -> Poly {
    Poly::new(c.to_vec())
}

/// Cauchy matrix with entry `(i, j) = 1 / (alphas[i] - betas[j])`.
pub fn cauchy_matrix(field: &Field, alphas: &[Elem], betas: &[Elem]) -> Result<Mat> {
    let mut seen = std::collections::HashSet::new();
    for &x in alphas.iter().chain(betas) {
        if !seen.insert(x) {
            return Err(param(format!("Cauchy parameter {x} is repeated")));
        }
    }
    let mut m = Mat::zeros(alphas.len(), betas.len());
    for (i, &a) in alphas.iter().enumerate() {
        for (j, &b) in betas.iter().enumerate() {
            m[(i, j)] = field.inv(field.sub(a, b))?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn mat(field: &Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_paper_matrix_over_gf3() {
        let f = Field::new(3, 1).unwrap();
        let m = mat(&f, &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(rank(&f, &m), 3);
        // Before the sign normalisation the same matrix reads [[0,1,-2],[-2,0,1],[1,-2,0]].
        assert_eq!(m, mat(&f, &[&[0, 1, -2], &[-2, 0, 1], &[1, -2, 0]]));
    }

    #[test]
    fn rank_identity_and_zero() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(rank(&f, &Mat::identity(4)), 4);
        assert_eq!(rank(&f, &Mat::zeros(3, 5)), 0);
        assert_eq!(rank(&f, &Mat::zeros(0, 0)), 0);
    }

    #[test]
    fn solve_identity() {
        let f = Field::new(7, 1).unwrap();
        let b: Vec<Elem> = [3, 0, 6].iter().map(|&v| f.from_int(v)).collect();
        assert_eq!(
            solve(&f, &Mat::identity(3), &b).unwrap(),
            Solution::Consistent { x: b.clone(), unique: true }
        );
    }

    #[test]
    fn solve_round_trip_gf3() {
        let f = Field::new(3, 1).unwrap();
        let a = mat(&f, &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let x: Vec<Elem> = [1, 2, 0].iter().map(|&v| f.from_int(v)).collect();
        let b = a.mul_vec(&f, &x);
        assert_eq!(b, vec![f.from_int(2), f.from_int(1), f.from_int(0)]);
        assert_eq!(solve(&f, &a, &b).unwrap(), Solution::Consistent { x, unique: true });
    }

    #[test]
    fn solve_inconsistent_and_shape_error() {
        let f = Field::new(3, 1).unwrap();
        let b = vec![Elem::ONE, Elem::ZERO];
        assert_eq!(solve(&f, &Mat::zeros(2, 2), &b).unwrap(), Solution::Inconsistent);
        assert!(solve(&f, &Mat::zeros(3, 2), &b).is_err());
    }

    #[test]
    fn solve_underdetermined() {
        let f = Field::new(5, 1).unwrap();
        let a = mat(&f, &[&[1, 1, 0]]);
        let b = vec![f.from_int(3)];
        match solve(&f, &a, &b).unwrap() {
            Solution::Consistent { x, unique } => {
                assert!(!unique);
                assert_eq!(a.mul_vec(&f, &x), b);
            }
            Solution::Inconsistent => panic!("system is consistent"),
        }
    }

    #[test]
    fn circulant_conventions() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(circulant_from_row(&[Elem::ONE, Elem::ZERO, Elem::ZERO]), Mat::identity(3));
        let z = circulant_from_row(&[Elem::ZERO; 4]);
        assert_eq!(rank(&f, &z), 0);
        let c = circulant_from_row(&[f.from_int(1), f.from_int(2), f.from_int(0)]);
        assert_eq!(c, mat(&f, &[&[1, 2, 0], &[0, 1, 2], &[2, 0, 1]]));
    }

    #[test]
    fn cauchy_small() {
        let f = Field::new(3, 1).unwrap();
        let c = cauchy_matrix(&f, &[Elem::ZERO], &[Elem::ONE]).unwrap();
        assert_eq!(c, mat(&f, &[&[2]]));
        assert!(cauchy_matrix(&f, &[Elem::ZERO], &[Elem::ZERO]).is_err());
    }

    #[test]
    fn cauchy_gf7_all_square_submatrices_invertible() {
        let f = Field::new(7, 1).unwrap();
        let alphas: Vec<Elem> = (0..2).map(|v| f.from_int(v)).collect();
        let betas: Vec<Elem> = (2..6).map(|v| f.from_int(v)).collect();
        let c = cauchy_matrix(&f, &alphas, &betas).unwrap();
        let mut count = 0;
        for cols in (0..4).combinations(2) {
            assert_eq!(rank(&f, &c.select(&[0, 1], &cols)), 2);
            count += 1;
        }
        assert_eq!(count, 6);
        for r in 0..2 {
            for col in 0..4 {
                assert!(!c[(r, col)].is_zero());
            }
        }
    }
}
