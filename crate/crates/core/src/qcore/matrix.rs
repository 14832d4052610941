use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix with optional subsystem dimensions.
///
/// When `dims` is present the matrix is square and its side equals the
/// product of the subsystem dimensions. Subsystem 0 is the most significant
/// index, matching the ordering of [`ComplexMatrix::tensor`].
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    dims: Option<Vec<usize>>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
            dims: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data,
            dims: None,
        })
    }

    /// Builds a matrix from real row-major entries. Panics on a length mismatch,
    /// intended for literals.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "literal matrix has wrong length");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
            dims: None,
        }
    }

    /// Builds a matrix from complex literal rows.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged literal matrix");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
            dims: None,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data,
            dims: None,
        }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    /// Attaches subsystem dimensions. Fails unless the matrix is square with
    /// side equal to their product.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if self.rows != self.cols || prod != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} do not factor a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn without_dims(mut self) -> Self {
        self.dims = None;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> Option<&[usize]> {
        self.dims.as_deref()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out.dims = self.dims.clone();
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out.dims = self.dims.clone();
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
            dims: self.dims.clone(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
            dims: self.dims.clone(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `self += c * other`, elementwise.
    pub fn axpy(&mut self, c: C64, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(n, p);
        for i in 0..n {
            let out_row = &mut out.data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        if self.dims.is_some() && self.dims == other.dims {
            out.dims = self.dims.clone();
        }
        Ok(out)
    }

    /// `self · other · self†`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.matmul(&self.dagger())
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product; subsystem dimensions are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(r1 * r2, c1 * c2);
        let oc = c1 * c2;
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.data[i * c1 + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..r2 {
                    let row = (i * r2 + k) * oc + j * c2;
                    for l in 0..c2 {
                        out.data[row + l] = a * other.data[k * c2 + l];
                    }
                }
            }
        }
        if self.is_square() && other.is_square() {
            let mut dims = self.dims.clone().unwrap_or_else(|| vec![self.rows]);
            dims.extend(other.dims.clone().unwrap_or_else(|| vec![other.rows]));
            out.dims = Some(dims);
        }
        out
    }

    /// Frobenius inner product `Re tr(self† other)`, the real inner product on
    /// Hermitian matrices.
    pub fn inner(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * other.data[k * other.cols + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in comparison");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = self.data[i * n + j] - self.data[j * n + i].conj();
                err = err.max(d.norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    fn require_dims(&self) -> Result<&[usize]> {
        self.dims.as_deref().ok_or(Error::Untensored)
    }

    /// Reduced operator on the subsystems in `keep` (kept in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let dims = self.require_dims()?.to_vec();
        let mut keep_sorted: Vec<usize> = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem {bad} out of range for dims {dims:?}"
            )));
        }
        let split = SubsystemSplit::new(&dims, &keep_sorted);
        let kd = split.kept_dim;
        let mut out = Self::zeros(kd, kd);
        let n = self.rows;
        for t in 0..split.traced_dim {
            let base = &split.groups[t * kd..(t + 1) * kd];
            for (a, &ra) in base.iter().enumerate() {
                let row = &self.data[ra * n..(ra + 1) * n];
                let out_row = &mut out.data[a * kd..(a + 1) * kd];
                for (o, &cb) in out_row.iter_mut().zip(base) {
                    *o += row[cb];
                }
            }
        }
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
        if kept_dims.is_empty() {
            return Ok(out);
        }
        out.with_dims(kept_dims)
    }

    /// Transpose on the listed subsystems only.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<Self> {
        let dims = self.require_dims()?.to_vec();
        let n = self.rows;
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; dims.len()];
            for k in (0..dims.len()).rev() {
                d[k] = x % dims[k];
                x /= dims[k];
            }
            d
        };
        let compose = |d: &[usize]| -> usize { d.iter().zip(&dims).fold(0, |acc, (x, dk)| acc * dk + x) };
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            let di = digits(i);
            for j in 0..n {
                let dj = digits(j);
                let (mut ri, mut rj) = (di.clone(), dj.clone());
                for &s in subsystems {
                    ri[s] = dj[s];
                    rj[s] = di[s];
                }
                out.data[compose(&ri) * n + compose(&rj)] = self.data[i * n + j];
            }
        }
        out.dims = Some(dims);
        Ok(out)
    }

    /// Reorders subsystems: subsystem `order[k]` of `self` becomes subsystem
    /// `k` of the result.
    pub fn permute_subsystems(&self, order: &[usize]) -> Result<Self> {
        let dims = self.require_dims()?.to_vec();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..dims.len()).collect::<Vec<_>>() {
            return Err(Error::DimensionMismatch(format!(
                "{order:?} is not a permutation of {} subsystems",
                dims.len()
            )));
        }
        let map = permutation_map(&dims, order);
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[map[i] * n + map[j]] = self.data[i * n + j];
            }
        }
        out.dims = Some(order.iter().map(|&k| dims[k]).collect());
        Ok(out)
    }
}

/// Index of each old basis state in the permuted ordering.
pub(crate) fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let n: usize = dims.iter().product();
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut digits = vec![0usize; dims.len()];
    let mut out = vec![0usize; n];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut x = idx;
        for k in (0..dims.len()).rev() {
            digits[k] = x % dims[k];
            x /= dims[k];
        }
        *slot = order
            .iter()
            .zip(&new_dims)
            .fold(0, |acc, (&k, &dk)| acc * dk + digits[k]);
    }
    out
}

/// Groups full basis indices by their traced-out part.
///
/// `groups[t * kept_dim + a]` is the full index whose kept digits encode `a`
/// and traced digits encode `t`.
pub(crate) struct SubsystemSplit {
    pub kept_dim: usize,
    pub traced_dim: usize,
    pub groups: Vec<usize>,
}

impl SubsystemSplit {
    pub fn new(dims: &[usize], keep_sorted: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let kept_dim: usize = keep_sorted.iter().map(|&k| dims[k]).product();
        let traced_dim = n / kept_dim;
        let mut groups = vec![0usize; n];
        let mut digits = vec![0usize; dims.len()];
        for idx in 0..n {
            let mut x = idx;
            for k in (0..dims.len()).rev() {
                digits[k] = x % dims[k];
                x /= dims[k];
            }
            let (mut a, mut t) = (0usize, 0usize);
            for (k, (&dig, &dk)) in digits.iter().zip(dims).enumerate() {
                if keep_sorted.binary_search(&k).is_ok() {
                    a = a * dk + dig;
                } else {
                    t = t * dk + dig;
                }
            }
            groups[t * kept_dim + a] = idx;
        }
        Self {
            kept_dim,
            traced_dim,
            groups,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "addition shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "subtraction shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Matrix product. Panics on incompatible shapes; use [`ComplexMatrix::matmul`]
/// for a fallible version.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} dims={:?}", self.rows, self.cols, self.dims)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
