//! Kronecker-product algebra on small dense matrices.
//!
//! Storage is column-major everywhere and `vec` stacks columns. In a
//! Kronecker product the first factor varies slowest, so the multi-index
//! `(i1, .., in)` of `a1 ⊗ .. ⊗ an` sits at linear offset `Σ ik · Π_{j>k} dj`.

use crate::error::{Error, Result};

/// Dense real matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.data[i * d + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from column-major entries.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of rows. Handy for literals in tests.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Column vector with the given entries.
    pub fn column(values: Vec<f64>) -> Self {
        Self { rows: values.len(), cols: 1, data: values }
    }

    pub fn scalar(v: f64) -> Self {
        Self::column(vec![v])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == 0.0 {
                    continue;
                }
                for i in 0..self.rows {
                    out.data[j * self.rows + i] += self.get(i, k) * b;
                }
            }
        }
        Ok(out)
    }

    /// Inner product of the flattened entries.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("dot of lengths {} and {}", self.len(), other.len())));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_column_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_dmatrix(m: &nalgebra::DMatrix<f64>) -> Self {
        Self { rows: m.nrows(), cols: m.ncols(), data: m.as_slice().to_vec() }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = DenseMatrix::zeros(rows, cols);
    for ja in 0..a.cols {
        for ia in 0..a.rows {
            let s = a.get(ia, ja);
            for jb in 0..b.cols {
                let col = ja * b.cols + jb;
                for ib in 0..b.rows {
                    out.data[col * rows + ia * b.rows + ib] = s * b.get(ib, jb);
                }
            }
        }
    }
    out
}

/// `v ⊗ v ⊗ .. ⊗ v` with `n` copies; `n = 0` gives the scalar 1.
pub fn kron_power(v: &DenseMatrix, n: usize) -> DenseMatrix {
    let mut out = DenseMatrix::scalar(1.0);
    for _ in 0..n {
        out = kron(&out, v);
    }
    out
}

/// Stacks the columns of `m` into a column vector.
pub fn vec(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::column(m.data.clone())
}

/// Inverse of [`vec`].
pub fn devec(v: &DenseMatrix, rows: usize, cols: usize) -> Result<DenseMatrix> {
    DenseMatrix::from_col_major(rows, cols, v.data.clone())
}

/// Entrywise product.
pub fn hadamard(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.zip_with(b, |x, y| x * y)
}

/// `vec(I_d)`.
pub fn delta2(d: usize) -> DenseMatrix {
    vec(&DenseMatrix::identity(d))
}

/// Reordering of the factors of a Kronecker product.
///
/// `mapping[k]` is the output position of input factor `k` (zero-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPermutation {
    dims: Vec<usize>,
    mapping: Vec<usize>,
}

impl IndexPermutation {
    pub fn new(dims: Vec<usize>, mapping: Vec<usize>) -> Result<Self> {
        if dims.len() != mapping.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} dims for a permutation of arity {}",
                dims.len(),
                mapping.len()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("factor dimensions must be >= 1".into()));
        }
        let mut seen = vec![false; mapping.len()];
        for &p in &mapping {
            if p >= mapping.len() || seen[p] {
                return Err(Error::InvalidArgument(format!("{mapping:?} is not a bijection")));
            }
            seen[p] = true;
        }
        Ok(Self { dims, mapping })
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let mapping = (0..dims.len()).collect();
        Self { dims, mapping }
    }

    /// Exchanges factors `i` and `j`.
    pub fn swap(dims: Vec<usize>, i: usize, j: usize) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..dims.len()).collect();
        if i >= mapping.len() || j >= mapping.len() {
            return Err(Error::InvalidArgument(format!("swap ({i},{j}) out of range")));
        }
        mapping.swap(i, j);
        Self::new(dims, mapping)
    }

    pub fn arity(&self) -> usize {
        self.mapping.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Factor dimensions after the permutation.
    pub fn output_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, &p) in self.mapping.iter().enumerate() {
            out[p] = self.dims[k];
        }
        out
    }

    /// The permutation undoing `self`, acting on the output layout.
    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.mapping.len()];
        for (k, &p) in self.mapping.iter().enumerate() {
            mapping[p] = k;
        }
        Self { dims: self.output_dims(), mapping }
    }

    pub fn total_len(&self) -> usize {
        self.dims.iter().product()
    }
}

/// Applies a factor permutation to a Kronecker-structured vector.
///
/// For rank-one input `a1 ⊗ .. ⊗ an`, factor `k` ends up at position
/// `p.mapping()[k]`.
pub fn commutation_apply(p: &IndexPermutation, v: &DenseMatrix) -> Result<DenseMatrix> {
    let n = p.arity();
    let total = p.total_len();
    if v.len() != total {
        return Err(Error::DimensionMismatch(format!("vector of length {} for factor dims {:?}", v.len(), p.dims)));
    }
    let out_dims = p.output_dims();
    let mut out_stride = vec![1usize; n];
    for pos in (0..n.saturating_sub(1)).rev() {
        out_stride[pos] = out_stride[pos + 1] * out_dims[pos + 1];
    }
    let stride: Vec<usize> = p.mapping.iter().map(|&pos| out_stride[pos]).collect();

    let mut out = vec![0.0; total];
    let mut idx = vec![0usize; n];
    let mut target = 0usize;
    for &value in &v.data {
        out[target] = value;
        // odometer over the input multi-index, last factor fastest
        for k in (0..n).rev() {
            idx[k] += 1;
            target += stride[k];
            if idx[k] < p.dims[k] {
                break;
            }
            target -= stride[k] * p.dims[k];
            idx[k] = 0;
        }
    }
    Ok(DenseMatrix::column(out))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Averages a `d^k` vector over all `k!` orderings of its factors.
pub fn symmetrize(v: &DenseMatrix, d: usize, k: usize) -> Result<DenseMatrix> {
    if d.checked_pow(k as u32) != Some(v.len()) {
        return Err(Error::DimensionMismatch(format!("length {} is not {d}^{k}", v.len())));
    }
    if k < 2 {
        return Ok(v.clone());
    }
    let perms = permutations(k);
    let mut acc = vec![0.0; v.len()];
    for mapping in &perms {
        let p = IndexPermutation::new(vec![d; k], mapping.clone())?;
        let w = commutation_apply(&p, v)?;
        for (a, b) in acc.iter_mut().zip(w.as_slice()) {
            *a += b;
        }
    }
    let scale = 1.0 / perms.len() as f64;
    Ok(DenseMatrix::column(acc.into_iter().map(|a| a * scale).collect()))
}

/// Decodes a linear offset into a multi-index with `k` factors of size `d`.
pub fn multi_index(mut offset: usize, d: usize, k: usize) -> Vec<usize> {
    let mut idx = vec![0; k];
    for slot in idx.iter_mut().rev() {
        *slot = offset % d;
        offset /= d;
    }
    idx
}

/// Inverse of [`multi_index`].
pub fn linear_offset(idx: &[usize], d: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * d + i)
}
