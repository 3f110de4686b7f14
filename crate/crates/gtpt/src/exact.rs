//! Exact linear algebra over the integers and rationals: fraction-free
//! elimination, determinants, and integer null-space bases. Everything here
//! is arbitrary precision; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Dense square matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    order: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(order: usize) -> Self {
        RatMatrix {
            order,
            data: vec![BigRational::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zero(order);
        for i in 0..order {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(mat: &IntMatrix) -> Self {
        let mut out = Self::zero(mat.order());
        for i in 0..mat.order() {
            for j in 0..mat.order() {
                out.set(i, j, BigRational::from_integer(BigInt::from(mat.get(i, j))));
            }
        }
        out
    }

    /// Row-major reshape of a flat vector of length `order^2`.
    pub fn from_flat(order: usize, entries: &[BigInt]) -> Self {
        assert_eq!(entries.len(), order * order);
        let mut out = Self::zero(order);
        for i in 0..order {
            for j in 0..order {
                out.set(i, j, BigRational::from_integer(entries[i * order + j].clone()));
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.order + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Exact determinant by Gaussian elimination with rational pivots.
    pub fn det(&self) -> BigRational {
        let n = self.order;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pivot) = pivot else {
                return BigRational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = &a[r * n + j] - &factor * &a[col * n + j];
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.det().is_zero()
    }

    /// Divides all entries by their common content, fixing the sign of the
    /// first nonzero entry to be positive. Purely cosmetic normalization.
    pub fn normalized(&self) -> Self {
        let mut denom_lcm = BigInt::one();
        for v in &self.data {
            denom_lcm = denom_lcm.lcm(v.denom());
        }
        let ints: Vec<BigInt> = self.data.iter().map(|v| (v * &denom_lcm).to_integer()).collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if content.is_zero() {
            return self.clone();
        }
        let sign = ints
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| if v.is_negative() { -BigInt::one() } else { BigInt::one() })
            .unwrap_or_else(BigInt::one);
        let scale = content * sign;
        let mut out = Self::zero(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out.set(i, j, BigRational::from_integer(&ints[i * self.order + j] / &scale));
            }
        }
        out
    }

    pub fn rows_display(&self) -> Vec<Vec<String>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| format_rational(self.get(i, j))).collect())
            .collect()
    }
}

pub fn format_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Exact determinant of an integer matrix (Bareiss fraction-free algorithm;
/// all intermediate divisions are exact).
pub fn int_det(order: usize, entries: &[BigInt]) -> BigInt {
    assert_eq!(entries.len(), order * order);
    if order == 0 {
        return BigInt::one();
    }
    let mut a = entries.to_vec();
    let n = order;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n - 1 {
        let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
        let Some(pivot) = pivot else {
            return BigInt::zero();
        };
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            sign = -sign;
        }
        for r in col + 1..n {
            for j in col + 1..n {
                let v = (&a[col * n + col] * &a[r * n + j] - &a[r * n + col] * &a[col * n + j])
                    / &prev;
                a[r * n + j] = v;
            }
            a[r * n + col] = BigInt::zero();
        }
        prev = a[col * n + col].clone();
    }
    sign * a[n * n - 1].clone()
}

/// Integer basis of the null space of a (not necessarily square) integer
/// matrix, via fraction-free row reduction and back-substitution. Each basis
/// vector is scaled to integers and reduced by its content; the basis is
/// deterministic for a given input.
pub fn null_space_basis(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut mat: Vec<Vec<BigInt>> = rows.iter().filter(|r| !r.iter().all(|v| v.is_zero())).cloned().collect();
    for r in &mat {
        assert_eq!(r.len(), cols);
    }
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row_i = 0;
    for col in 0..cols {
        // smallest nonzero entry as pivot keeps the integers small
        let pivot = (row_i..mat.len())
            .filter(|&r| !mat[r][col].is_zero())
            .min_by_key(|&r| mat[r][col].abs());
        let Some(pivot) = pivot else { continue };
        mat.swap(row_i, pivot);
        for r in 0..mat.len() {
            if r == row_i || mat[r][col].is_zero() {
                continue;
            }
            let g = mat[row_i][col].gcd(&mat[r][col]);
            let pivot_mult = &mat[r][col] / &g;
            let row_mult = &mat[row_i][col] / &g;
            for j in 0..cols {
                let v = &mat[r][j] * &row_mult - &mat[row_i][j] * &pivot_mult;
                mat[r][j] = v;
            }
            // keep rows reduced so entries stay manageable
            reduce_row(&mut mat[r]);
        }
        reduce_row(&mut mat[row_i]);
        pivot_cols.push(col);
        row_i += 1;
        if row_i == mat.len() {
            break;
        }
    }

    // After full (Gauss-Jordan style) elimination each pivot row has its
    // pivot as the only nonzero among pivot columns.
    let mut basis = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut vec_num = vec![BigRational::zero(); cols];
        vec_num[free] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            // pivot_row: pc * x_pc + free_cols... = 0
            let coeff = &mat[r][free];
            if coeff.is_zero() {
                continue;
            }
            vec_num[pc] = -BigRational::new(coeff.clone(), mat[r][pc].clone());
        }
        // scale to integers and reduce by content
        let mut denom_lcm = BigInt::one();
        for v in &vec_num {
            denom_lcm = denom_lcm.lcm(v.denom());
        }
        let mut ints: Vec<BigInt> = vec_num.iter().map(|v| (v * &denom_lcm).to_integer()).collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if !content.is_zero() && !content.is_one() {
            for v in &mut ints {
                *v /= &content;
            }
        }
        basis.push(ints);
    }
    basis
}

fn reduce_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}
