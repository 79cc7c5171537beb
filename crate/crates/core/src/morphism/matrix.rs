//! Integer matrices identified with morphisms `E^g -> E^r`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `r x g` integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMorphism {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMorphism {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("morphism must be at least 1x1, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMorphism { rows, cols, entries })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![BigInt::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = BigInt::one();
        }
        IntMorphism { rows: n, cols: n, entries: e }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMorphism { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let n = d.len();
        let mut m = Self::zero(n, n);
        for (i, x) in d.iter().enumerate() {
            m.entries[i * n + i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// `H(F) = max |f_ij|`.
    pub fn height(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn column_block(&self, lo: usize, hi: usize) -> Result<IntMorphism> {
        if lo >= hi || hi > self.cols {
            return Err(Error::Dimension(format!("column block {lo}..{hi} of {} columns", self.cols)));
        }
        let e = (0..self.rows).flat_map(|i| self.row(i)[lo..hi].to_vec()).collect();
        IntMorphism::new(self.rows, hi - lo, e)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<IntMorphism> {
        let e = idx.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        IntMorphism::new(idx.len(), self.cols, e)
    }

    /// `(self | other)`.
    pub fn hcat(&self, other: &IntMorphism) -> Result<IntMorphism> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("hcat of {} and {} rows", self.rows, other.rows)));
        }
        let e = (0..self.rows).flat_map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect::<Vec<_>>()).collect();
        IntMorphism::new(self.rows, self.cols + other.cols, e)
    }

    /// Stack `self` over `other`.
    pub fn vcat(&self, other: &IntMorphism) -> Result<IntMorphism> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vcat of {} and {} columns", self.cols, other.cols)));
        }
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().cloned());
        IntMorphism::new(self.rows + other.rows, self.cols, e)
    }

    pub fn mul(&self, other: &IntMorphism) -> Result<IntMorphism> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntMorphism {
        IntMorphism { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * k).collect() }
    }

    /// Matrix whose column `perm[k]` is column `k` of `self`.
    pub fn scatter_columns(&self, perm: &[usize]) -> IntMorphism {
        let mut out = Self::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for (k, &p) in perm.iter().enumerate() {
                out.set(i, p, self.get(i, k).clone());
            }
        }
        out
    }

    /// Matrix whose column `k` is column `perm[k]` of `self`.
    pub fn gather_columns(&self, perm: &[usize]) -> IntMorphism {
        let mut out = Self::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for (k, &p) in perm.iter().enumerate() {
                out.set(i, k, self.get(i, p).clone());
            }
        }
        out
    }

    /// Rank over Q (fraction-free Bareiss elimination).
    pub fn rank(&self) -> usize {
        bareiss_rank(self.rows, self.cols, self.entries.clone())
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        Ok(bareiss_det(self.rows, self.entries.clone()))
    }

    /// Determinant of the square submatrix on the given columns.
    pub fn minor(&self, cols: &[usize]) -> BigInt {
        debug_assert_eq!(cols.len(), self.rows);
        let n = self.rows;
        let e = (0..n).flat_map(|i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect();
        bareiss_det(n, e)
    }

    /// gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    /// Compact wire form `[r x g] e11 e12 ...`, row-major.
    pub fn to_wire(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        format!("[{}x{}] {}", self.rows, self.cols, body.join(" "))
    }
}

fn bareiss_rank(rows: usize, cols: usize, mut a: Vec<BigInt>) -> usize {
    let idx = |i: usize, j: usize| i * cols + j;
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[idx(r, col)].is_zero()) else { continue };
        if p != rank {
            for j in 0..cols {
                a.swap(idx(p, j), idx(rank, j));
            }
        }
        let piv = a[idx(rank, col)].clone();
        for r in rank + 1..rows {
            let f = a[idx(r, col)].clone();
            for j in 0..cols {
                let v = (&piv * &a[idx(r, j)] - &f * &a[idx(rank, j)]) / &prev;
                a[idx(r, j)] = v;
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[idx(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[idx(r, k)].is_zero()) else { return BigInt::zero() };
            for j in 0..n {
                a.swap(idx(p, j), idx(k, j));
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[idx(k, k)] * &a[idx(i, j)] - &a[idx(i, k)] * &a[idx(k, j)]) / &prev;
                a[idx(i, j)] = v;
            }
        }
        prev = a[idx(k, k)].clone();
    }
    sign * a[idx(n - 1, n - 1)].clone()
}

impl fmt::Display for IntMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl FromStr for IntMorphism {
    type Err = Error;

    /// Accepts the wire form `[2x3] 2 0 3 0 2 5`, nested lists `[[2,0,3],[0,2,5]]`,
    /// a single row `(2,4)` or `[2,4]`, and rows separated by `;` as in `2 0 3; 0 2 5`.
    fn from_str(s: &str) -> Result<IntMorphism> {
        let t = s.trim();
        let bad = |m: &str| Error::Parse(format!("matrix `{s}`: {m}"));
        let ints = |body: &str| -> Result<Vec<BigInt>> {
            body.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<BigInt>().map_err(|_| bad(&format!("bad integer `{x}`"))))
                .collect()
        };
        if let Some(rest) = t.strip_prefix('[') {
            if let Some((head, body)) = rest.split_once(']') {
                if let Some((r, c)) = head.split_once('x') {
                    if let (Ok(r), Ok(c)) = (r.trim().parse::<usize>(), c.trim().parse::<usize>()) {
                        return IntMorphism::new(r, c, ints(body)?);
                    }
                }
            }
        }
        if t.starts_with("[[") || t.starts_with("((") {
            let inner = &t[1..t.len().saturating_sub(1)];
            let rows = inner
                .split([']', ')'])
                .map(|r| r.trim_start_matches(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == '('))
                .filter(|r| !r.trim().is_empty())
                .map(ints)
                .collect::<Result<Vec<_>>>()?;
            return IntMorphism::from_rows(&rows);
        }
        let stripped = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let rows = stripped.split(';').map(ints).collect::<Result<Vec<_>>>()?;
        IntMorphism::from_rows(&rows)
    }
}
