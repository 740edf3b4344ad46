//! Generic dense reduction used by the Smith normal form.
//!
//! The same elimination runs over checked `i128` (returning `None` on
//! overflow) and over `BigInt`; callers try the machine path first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(super) trait Entry: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// |self| < |other|
    fn abs_lt(&self, other: &Self) -> bool;
    /// Truncated quotient.
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// acc += q * x
    fn mul_add(acc: &mut Self, q: &Self, x: &Self) -> Option<()>;
    fn neg(&self) -> Option<Self>;
}

impl Entry for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        x % self == 0
    }
    fn mul_add(acc: &mut Self, q: &Self, x: &Self) -> Option<()> {
        *acc = acc.checked_add(q.checked_mul(*x)?)?;
        Some(())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        x.is_multiple_of(self)
    }
    fn mul_add(acc: &mut Self, q: &Self, x: &Self) -> Option<()> {
        *acc += q * x;
        Some(())
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

#[derive(Clone)]
pub(super) struct Dense<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Entry> Dense<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Dense { rows: n, cols: n, data }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.rows {
                self.data.swap(k * self.cols + i, k * self.cols + j);
            }
        }
    }

    // row_i += q row_j
    fn add_row(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        let c = self.cols;
        for k in 0..c {
            if !self.data[j * c + k].is_zero() {
                let x = self.data[j * c + k].clone();
                T::mul_add(&mut self.data[i * c + k], q, &x)?;
            }
        }
        Some(())
    }

    // col_i += q col_j
    fn add_col(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        let c = self.cols;
        for k in 0..self.rows {
            if !self.data[k * c + j].is_zero() {
                let x = self.data[k * c + j].clone();
                T::mul_add(&mut self.data[k * c + i], q, &x)?;
            }
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for k in 0..self.cols {
            let v = self.data[i * self.cols + k].neg()?;
            self.data[i * self.cols + k] = v;
        }
        Some(())
    }

    fn negate_col(&mut self, j: usize) -> Option<()> {
        for k in 0..self.rows {
            let v = self.data[k * self.cols + j].neg()?;
            self.data[k * self.cols + j] = v;
        }
        Some(())
    }
}

pub(super) struct Track<T> {
    pub u: Dense<T>,
    pub u_inv: Dense<T>,
    pub v: Dense<T>,
    pub v_inv: Dense<T>,
}

impl<T: Entry> Track<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Track {
            u: Dense::identity(rows),
            u_inv: Dense::identity(rows),
            v: Dense::identity(cols),
            v_inv: Dense::identity(cols),
        }
    }
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }
    fn add_row(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        self.u.add_row(i, j, q)?;
        self.u_inv.add_col(j, i, &q.neg()?)
    }
    fn add_col(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        self.v.add_col(i, j, q)?;
        self.v_inv.add_row(j, i, &q.neg()?)
    }
    fn negate_row(&mut self, i: usize) -> Option<()> {
        self.u.negate_row(i)?;
        self.u_inv.negate_col(i)
    }
}

/// Diagonalizes `a` in place. The pivot is the entry of least absolute value
/// in the active block (first in row-major order); remainders left by
/// truncated division become the next pivot. Returns `None` on overflow.
pub(super) fn reduce<T: Entry>(a: &mut Dense<T>, mut track: Option<&mut Track<T>>) -> Option<()> {
    let (r, c) = (a.rows, a.cols);
    for t in 0..r.min(c) {
        let Some((pi, pj)) = min_abs_entry(a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(tr) = track.as_deref_mut() {
            tr.swap_rows(t, pi);
            tr.swap_cols(t, pj);
        }
        loop {
            let p = a.at(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if a.at(i, t).is_zero() {
                    continue;
                }
                let q = a.at(i, t).quot(&p).neg()?;
                a.add_row(i, t, &q)?;
                if let Some(tr) = track.as_deref_mut() {
                    tr.add_row(i, t, &q)?;
                }
                clean &= a.at(i, t).is_zero();
            }
            for j in t + 1..c {
                if a.at(t, j).is_zero() {
                    continue;
                }
                let q = a.at(t, j).quot(&p).neg()?;
                a.add_col(j, t, &q)?;
                if let Some(tr) = track.as_deref_mut() {
                    tr.add_col(j, t, &q)?;
                }
                clean &= a.at(t, j).is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived: promote it
                let mut best: Option<(usize, bool)> = None;
                let mut best_val = p.clone();
                for i in t + 1..r {
                    let x = a.at(i, t);
                    if !x.is_zero() && x.abs_lt(&best_val) {
                        best_val = x.clone();
                        best = Some((i, true));
                    }
                }
                for j in t + 1..c {
                    let x = a.at(t, j);
                    if !x.is_zero() && x.abs_lt(&best_val) {
                        best_val = x.clone();
                        best = Some((j, false));
                    }
                }
                match best {
                    Some((i, true)) => {
                        a.swap_rows(t, i);
                        if let Some(tr) = track.as_deref_mut() {
                            tr.swap_rows(t, i);
                        }
                    }
                    Some((j, false)) => {
                        a.swap_cols(t, j);
                        if let Some(tr) = track.as_deref_mut() {
                            tr.swap_cols(t, j);
                        }
                    }
                    None => unreachable!("nonzero remainder is smaller than the pivot"),
                }
                continue;
            }
            if p.is_unit() {
                break;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !p.divides(a.at(i, j))));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &T::one())?;
                    if let Some(tr) = track.as_deref_mut() {
                        tr.add_row(t, i, &T::one())?;
                    }
                }
                None => break,
            }
        }
        if a.at(t, t).is_negative() {
            a.negate_row(t)?;
            if let Some(tr) = track.as_deref_mut() {
                tr.negate_row(t)?;
            }
        }
    }
    Some(())
}

fn min_abs_entry<T: Entry>(a: &Dense<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.at(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs_lt(a.at(bi, bj))) {
                best = Some((i, j));
                if x.is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

pub(super) fn to_small(data: &[BigInt]) -> Option<Vec<i128>> {
    data.iter().map(|x| x.to_i64().map(i128::from)).collect()
}

pub(super) fn to_big(data: &[i128]) -> Vec<BigInt> {
    data.iter().map(|&x| BigInt::from(x)).collect()
}

/// Product of two row-major matrices in checked `i128`.
pub(super) fn mul_small(
    a: &[i128],
    b: &[i128],
    n: usize,
    k: usize,
    m: usize,
) -> Option<Vec<i128>> {
    let mut out = vec![0i128; n * m];
    for i in 0..n {
        for l in 0..k {
            let x = a[i * k + l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                let y = b[l * m + j];
                if y != 0 {
                    let o = &mut out[i * m + j];
                    *o = o.checked_add(x.checked_mul(y)?)?;
                }
            }
        }
    }
    Some(out)
}
