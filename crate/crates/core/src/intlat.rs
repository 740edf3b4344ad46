//! Exact integer matrices and Smith normal form.
//!
//! Every differential, morphism and presentation in the crate is an
//! [`IntMatrix`] over arbitrary-precision integers. The Smith normal form is
//! the single decision procedure behind kernels, images, quotients and
//! summand tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{parse_err, Error, Result};

mod dense;
use dense::{Dense, Track};

/// Dense row-major integer matrix. Matrices with zero rows or zero columns
/// are legal and stand for maps between zero groups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, s: impl Into<BigInt>) -> Self {
        let s = s.into();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers. `cols` is only needed
    /// when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let c = rows.first().map_or(cols, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * c);
        for r in rows {
            assert_eq!(r.len(), c, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols: c,
            data,
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[BigInt]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn diagonal(n_rows: usize, n_cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n_cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "product of {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        if let (Some(a), Some(b)) = (dense::to_small(&self.data), dense::to_small(&other.data)) {
            if let Some(p) = dense::mul_small(&a, &b, self.rows, self.cols, other.cols) {
                return IntMatrix::from_vec(self.rows, other.cols, dense::to_big(&p));
            }
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector size mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), other.shape(), "sum of different shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), other.shape(), "difference of different shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|a| a * s).collect())
    }

    /// `self` with `sign` applied: `+1` keeps it, `-1` negates.
    pub fn signed(&self, negative: bool) -> IntMatrix {
        if negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + off + j] = b.get(i, j).clone();
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must share the column count.
    pub fn vstack(blocks: &[&IntMatrix]) -> IntMatrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        IntMatrix::from_vec(rows, cols, data)
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    /// Adds `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste_add(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.get(i, j);
                if !b.is_zero() {
                    self.data[(r0 + i) * self.cols + c0 + j] += b;
                }
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> IntMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        IntMatrix::from_vec(idx.len(), self.cols, data)
    }

    /// Kronecker product `self ⊗ I_c`: every entry becomes a `c×c` scalar block.
    /// This is how an integer matrix acts on `c` coefficient coordinates per
    /// basis element (basis-major layout).
    pub fn kron_identity(&self, c: usize) -> IntMatrix {
        let mut out = Self::zeros(self.rows * c, self.cols * c);
        let oc = self.cols * c;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..c {
                    out.data[(i * c + k) * oc + j * c + k] = a.clone();
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        smith_diagonal(self).iter().filter(|d| !d.is_zero()).count()
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// JSON encoding: array of rows, each an array of decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        self.row(i)
                            .iter()
                            .map(|x| Value::String(x.to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Parses the JSON encoding. Entries may be decimal strings or JSON
    /// integers. `shape` fixes the dimensions, which is how empty matrices
    /// keep their column count.
    pub fn from_json(v: &Value, key: &str, shape: Option<(usize, usize)>) -> Result<IntMatrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| parse_err(key, "expected an array of rows"))?;
        let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let rk = format!("{key}[{i}]");
            let cells = r
                .as_array()
                .ok_or_else(|| parse_err(&rk, "expected an array of entries"))?;
            let mut row = Vec::with_capacity(cells.len());
            for (j, c) in cells.iter().enumerate() {
                row.push(parse_bigint(c, &format!("{rk}[{j}]"))?);
            }
            parsed.push(row);
        }
        let ncols = match (parsed.first(), shape) {
            (Some(r), _) => r.len(),
            (None, Some((_, c))) => c,
            (None, None) => 0,
        };
        if parsed.iter().any(|r| r.len() != ncols) {
            return Err(parse_err(key, "rows have different lengths"));
        }
        if let Some((er, ec)) = shape {
            let empty_ok = parsed.is_empty() && (er == 0 || ec == 0);
            if !empty_ok && (parsed.len() != er || ncols != ec) {
                return Err(parse_err(
                    key,
                    format!("expected a {er}x{ec} matrix, found {}x{ncols}", parsed.len()),
                ));
            }
            if empty_ok {
                return Ok(IntMatrix::zeros(er, ec));
            }
        }
        let nrows = parsed.len();
        Ok(IntMatrix::from_vec(nrows, ncols, parsed.into_iter().flatten().collect()))
    }
}

pub(crate) fn parse_bigint(v: &Value, key: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| parse_err(key, format!("not an integer: {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| parse_err(key, "not an integer")),
        _ => Err(parse_err(key, "expected an integer or a decimal string")),
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = d` with `u`, `v` unimodular.
/// The inverses of `u` and `v` are tracked alongside.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`.
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Smith normal form with deterministic pivoting: the pivot is the entry of
/// least absolute value in the active block, first in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (r, c) = m.shape();
    if let Some(small) = dense::to_small(&m.data) {
        let mut a = Dense { rows: r, cols: c, data: small };
        let mut tr = Track::new(r, c);
        if dense::reduce(&mut a, Some(&mut tr)).is_some() {
            let big = |d: Dense<i128>| IntMatrix::from_vec(d.rows, d.cols, dense::to_big(&d.data));
            return SnfDecomposition {
                u: big(tr.u),
                d: big(a),
                v: big(tr.v),
                u_inv: big(tr.u_inv),
                v_inv: big(tr.v_inv),
            };
        }
    }
    let mut a = Dense { rows: r, cols: c, data: m.data.clone() };
    let mut tr = Track::new(r, c);
    dense::reduce(&mut a, Some(&mut tr)).expect("bigint reduction cannot overflow");
    let big = |d: Dense<BigInt>| IntMatrix::from_vec(d.rows, d.cols, d.data);
    SnfDecomposition {
        u: big(tr.u),
        d: big(a),
        v: big(tr.v),
        u_inv: big(tr.u_inv),
        v_inv: big(tr.v_inv),
    }
}

/// Diagonal of the Smith normal form (length `min(rows, cols)`), without
/// the transformation matrices.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if let Some(small) = dense::to_small(&m.data) {
        let mut a = Dense { rows: r, cols: c, data: small };
        if dense::reduce::<i128>(&mut a, None).is_some() {
            return (0..k).map(|i| BigInt::from(a.data[i * c + i])).collect();
        }
    }
    let mut a = Dense { rows: r, cols: c, data: m.data.clone() };
    dense::reduce::<BigInt>(&mut a, None).expect("bigint reduction cannot overflow");
    (0..k).map(|i| a.data[i * c + i].clone()).collect()
}

/// Columns form a basis of `{x : m x = 0}`; there are `cols - rank` of them.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols).collect();
    snf.v.select_columns(&idx)
}

/// A reusable exact solver for `m x = b` built on one Smith decomposition.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    snf: SnfDecomposition,
    invariants: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl LinearSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let invariants = snf.invariants();
        LinearSolver {
            snf,
            invariants,
            rows: m.rows,
            cols: m.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Some `x` with `m x = b`, or `None` when `b` is not in the image.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let ub = self.snf.u.mul_vec(b);
        let r = self.invariants.len();
        if ub[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let (q, rem) = ub[i].div_rem(&self.invariants[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
        Some(self.snf.v.mul_vec(&y))
    }

    /// Solves column by column; `None` if any column is outside the image.
    pub fn solve_matrix(&self, b: &IntMatrix) -> Option<IntMatrix> {
        let mut cols = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            cols.push(self.solve(&b.col(j))?);
        }
        Some(IntMatrix::from_columns(self.cols, &cols))
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_some()
    }
}

/// Decides whether `b` lies in the column lattice of `m`, returning a witness.
pub fn image_membership(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows {
        return Err(Error::Dimension(format!(
            "vector of length {} against a matrix with {} rows",
            b.len(),
            m.rows
        )));
    }
    Ok(LinearSolver::new(m).solve(b))
}

/// A left inverse `r` with `r s = I`, when the columns of `s` are independent
/// and span a direct summand of the ambient lattice.
pub fn summand_retraction(s: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(s);
    let inv = snf.invariants();
    if inv.len() < s.cols {
        return Err(Error::DependentColumns);
    }
    if inv.iter().any(|d| !d.is_one()) {
        return Err(Error::NotSummand);
    }
    // s = u^{-1} [I;0] v^{-1}, so v [I|0] u is a left inverse
    let k = s.cols;
    let top: Vec<usize> = (0..k).collect();
    let r = snf.v.mul(&snf.u.select_rows(&top));
    debug_assert_eq!(r.mul(s), IntMatrix::identity(k));
    Ok(r)
}

/// Whether every column of `sub` lies in the column lattice of `sup`.
pub fn lattice_contains(sup: &IntMatrix, sub: &IntMatrix) -> bool {
    assert_eq!(sup.rows(), sub.rows(), "ambient dimension mismatch");
    if sub.cols() == 0 {
        return true;
    }
    let s = LinearSolver::new(sup);
    (0..sub.cols()).all(|j| s.contains(&sub.col(j)))
}

/// Column lattices equal as subgroups.
pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    lattice_contains(a, b) && lattice_contains(b, a)
}

/// Generators of `span(a) ∩ span(b)`.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let k = kernel_basis(&IntMatrix::hstack(&[a, &b.neg()]));
    let top: Vec<usize> = (0..a.cols()).collect();
    a.mul(&k.select_rows(&top))
}

/// A basis (independent columns) of the column lattice of `m`.
pub fn image_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (0..r).collect();
    m.mul(&snf.v.select_columns(&idx))
}

pub fn vec_is_zero(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows, 0)
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j || i >= inv.len() {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_small_cases() {
        let s = smith_normal_form(&m(&[vec![0]]));
        assert_eq!(s.d, m(&[vec![0]]));
        let s = smith_normal_form(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.d, m(&[vec![2, 0], vec![0, 4]]));
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        check_snf(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn snf_divisibility_needs_fixup() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariants(), to_bigints(&[1, 6]));
        check_snf(&a);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(&[vec![1, 0]]));
        assert_eq!(k.cols(), 1);
        assert!(lattice_equal(&k, &m(&[vec![0], vec![1]])));
        let k = kernel_basis(&m(&[vec![2, -2]]));
        assert!(lattice_equal(&k, &m(&[vec![1], vec![1]])));
        let k = kernel_basis(&IntMatrix::zeros(1, 2));
        assert!(lattice_equal(&k, &IntMatrix::identity(2)));
    }

    #[test]
    fn membership_examples() {
        let two = m(&[vec![2]]);
        assert_eq!(image_membership(&two, &to_bigints(&[4])).unwrap(), Some(to_bigints(&[2])));
        assert_eq!(image_membership(&two, &to_bigints(&[3])).unwrap(), None);
        let a = m(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(image_membership(&a, &to_bigints(&[1, 1])).unwrap(), None);
        assert!(image_membership(&a, &to_bigints(&[1])).is_err());
    }

    #[test]
    fn retraction_examples() {
        let r = summand_retraction(&m(&[vec![1], vec![0]])).unwrap();
        assert_eq!(r.mul(&m(&[vec![1], vec![0]])), IntMatrix::identity(1));
        assert_eq!(summand_retraction(&m(&[vec![2]])), Err(Error::NotSummand));
        assert_eq!(
            summand_retraction(&m(&[vec![1, 2], vec![1, 2]])),
            Err(Error::DependentColumns)
        );
        let s = kernel_basis(&m(&[vec![1, 1]]));
        let r = summand_retraction(&s).unwrap();
        assert_eq!(r.mul(&s), IntMatrix::identity(1));
    }

    #[test]
    fn determinant_matches_expansion() {
        let a = m(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0
        assert_eq!(a.determinant(), BigInt::from(2 * (-6 - 20) + (-2)));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant(), BigInt::from(-1));
    }

    #[test]
    fn json_round_trip() {
        let a = m(&[vec![1, -2], vec![3, 40]]);
        let v = a.to_json();
        assert_eq!(IntMatrix::from_json(&v, "m", Some((2, 2))).unwrap(), a);
        let e = IntMatrix::from_json(&serde_json::json!([]), "m", Some((0, 3))).unwrap();
        assert_eq!(e.shape(), (0, 3));
        let err = IntMatrix::from_json(&serde_json::json!([["x"]]), "d", None).unwrap_err();
        assert!(err.to_string().contains("d[0][0]"));
    }

    #[test]
    fn kron_identity_layout() {
        let a = m(&[vec![1, 2]]);
        let k = a.kron_identity(2);
        assert_eq!(k, m(&[vec![1, 0, 2, 0], vec![0, 1, 0, 2]]));
    }
}
