//! The KMS matrix `K_n(rho) = [rho^|j-k|]` and the scalar helpers every other
//! module leans on.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trig::sin_half;

/// Matrix dimension, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            Err(Error::InvalidDimension(n))
        } else {
            Ok(Dimension(n))
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn is_even(self) -> bool {
        self.0 % 2 == 0
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for usize {
    fn from(d: Dimension) -> usize {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two eigenvalue families. Type 1 eigenvalues have skew-symmetric
/// eigenvectors, type 2 eigenvalues symmetric ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EigType {
    Type1,
    Type2,
}

impl EigType {
    pub const BOTH: [EigType; 2] = [EigType::Type1, EigType::Type2];

    pub fn other(self) -> EigType {
        match self {
            EigType::Type1 => EigType::Type2,
            EigType::Type2 => EigType::Type1,
        }
    }

    /// 1 or 2.
    pub fn index(self) -> usize {
        match self {
            EigType::Type1 => 1,
            EigType::Type2 => 2,
        }
    }

    pub fn from_index(k: usize) -> Option<EigType> {
        match k {
            1 => Some(EigType::Type1),
            2 => Some(EigType::Type2),
            _ => None,
        }
    }
}

impl fmt::Display for EigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type-{}", self.index())
    }
}

/// Dense row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            m[(j, j)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|j| self[(j, j)]).sum()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for j in 0..n {
            for l in 0..n {
                let a = self[(j, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    out.data[j * n + k] += a * other.data[l * n + k];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim).map(|j| (0..self.dim).map(|k| self[(j, k)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `tr((z I - A)^{-1})`, which is `p'(z) / p(z)` for `p(z) = det(z I - A)`;
    /// `None` when `z I - A` is exactly singular.
    pub fn resolvent_trace(&self, z: Complex64) -> Option<Complex64> {
        let n = self.dim;
        let zero = Complex64::new(0.0, 0.0);
        let mut a: Vec<Complex64> = self.data.iter().map(|x| -x).collect();
        for j in 0..n {
            a[j * n + j] += z;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))?;
            if a[pivot * n + col] == zero {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                perm.swap(col, pivot);
            }
            let p = a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                a[row * n + col] = factor;
                for k in col + 1..n {
                    let t = a[col * n + k];
                    a[row * n + k] -= factor * t;
                }
            }
        }
        let mut trace = zero;
        let mut x = vec![zero; n];
        for k in 0..n {
            // Solve L U x = P e_k and keep x_k.
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = if perm[i] == k { Complex64::new(1.0, 0.0) } else { zero };
            }
            for i in 0..n {
                let mut s = x[i];
                for j in 0..i {
                    s -= a[i * n + j] * x[j];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for j in i + 1..n {
                    s -= a[i * n + j] * x[j];
                }
                x[i] = s / a[i * n + i];
            }
            trace += x[k];
        }
        Some(trace)
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in col + 1..n {
                    let t = a[col * n + k];
                    a[row * n + k] -= factor * t;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (j, k): (usize, usize)) -> &Complex64 {
        &self.data[j * self.dim + k]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.dim + k]
    }
}

/// `K_n(rho)` stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct KmsMatrix {
    pub n: Dimension,
    pub rho: Complex64,
    pub entries: DenseMatrix,
}

/// `rho^0, rho^1, ..., rho^(count-1)` by repeated multiplication, which
/// avoids branch cuts of `exp(m log rho)`.
pub fn powers(rho: Complex64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..count {
        out.push(p);
        p *= rho;
    }
    out
}

pub fn build_kms(n: Dimension, rho: Complex64) -> KmsMatrix {
    let dim = n.get();
    let pw = powers(rho, dim);
    let mut entries = DenseMatrix::zeros(dim);
    for j in 0..dim {
        for k in 0..dim {
            entries[(j, k)] = pw[j.abs_diff(k)];
        }
    }
    KmsMatrix { n, rho, entries }
}

/// `diag(1, -1, 1, ..., (-1)^(n-1))`.
pub fn signature_matrix(n: Dimension) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n.get());
    for j in 0..n.get() {
        m[(j, j)] = Complex64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

/// `(n+1)/(n-1)`, where the type-1 borderline curve meets the positive axis.
pub fn xi(n: Dimension) -> f64 {
    (n.as_f64() + 1.0) / (n.as_f64() - 1.0)
}

/// `sin(n x) / sin(x)` with the removable singularities at `x = m pi`
/// filled in.
pub fn dirichlet_ratio(n: Dimension, x: Complex64) -> Complex64 {
    let nf = n.as_f64();
    let m = (x.re / PI).round();
    let delta = x - m * PI;
    if delta.norm() < 1e-8 {
        // sin(n d)/sin(d) = n [1 - (n^2-1) d^2/6 + (3n^4 - 10n^2 + 7) d^4/360]
        let d2 = delta * delta;
        let n2 = nf * nf;
        let series = 1.0 - (n2 - 1.0) / 6.0 * d2 + (3.0 * n2 * n2 - 10.0 * n2 + 7.0) / 360.0 * d2 * d2;
        let odd = (m as i64).rem_euclid(2) == 1 && n.get() % 2 == 0;
        let sign = if odd { -1.0 } else { 1.0 };
        return sign * nf * series;
    }
    sin_half(2 * n.get() as i64, x).div(sin_half(2, x))
}
