//! Centrosymmetric splitting of `K_n(rho)`.
//!
//! `K_n(rho)` commutes with the reversal permutation `E`, so it maps the
//! symmetric vectors (`E x = x`) and the skew vectors (`E x = -x`) into
//! themselves. Compressing onto orthonormal bases of the two subspaces
//! gives two half-size blocks whose spectra are the type-2 (symmetric) and
//! type-1 (skew) eigenvalues.
//!
//! The dense blocks are available through [`fold_dense`], but the spectra are
//! computed from the inverse instead: `K_n(rho)^{-1} = M / (1 - rho^2)` with
//! `M` tridiagonal (`1, 1+rho^2, ..., 1+rho^2, 1` on the diagonal and `-rho`
//! beside it). Folding `M` keeps it tridiagonal, and the determinant
//! recurrence of a tridiagonal matrix evaluates the block characteristic
//! polynomials in `O(n)` without ever forming coefficients, which stay
//! accurate where the dense trace recurrence does not.
//!
//! The inverse resolves small eigenvalues to high relative accuracy but the
//! large ones (`lambda = c / nu` with tiny `nu`) only to `eps |T| |lambda| / |c|`.
//! Those are finished by Newton steps on the dense block, whose backward
//! error `eps |B|` is then the smaller of the two.

use num_complex::Complex64;

use super::roots::{cluster_radius, aberth, circle_guesses, Evaluate, PolyEval};
use crate::error::{Error, Result};
use crate::matrix::{build_kms, DenseMatrix, Dimension, EigType};

const RESCALE_ABOVE: f64 = 1e150;

/// Complex-symmetric tridiagonal matrix; `off2[i]` is the square of the
/// coupling between rows `i - 1` and `i` (`off2[0]` is unused).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TriBlock {
    pub diag: Vec<Complex64>,
    pub off2: Vec<Complex64>,
}

impl TriBlock {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// Number of eigenvalues of each type: `floor(n/2)` type 1, `ceil(n/2)` type 2.
pub fn block_size(n: Dimension, t: EigType) -> usize {
    match t {
        EigType::Type1 => n.get() / 2,
        EigType::Type2 => n.get().div_ceil(2),
    }
}

/// The fold of the tridiagonal `M = (1 - rho^2) K_n(rho)^{-1}` onto the
/// type-`t` subspace.
pub(crate) fn fold_inverse(n: Dimension, rho: Complex64, t: EigType) -> TriBlock {
    let dim = n.get();
    let m = dim / 2;
    let one = Complex64::new(1.0, 0.0);
    let d = |i: usize| if i == 0 || i == dim - 1 { one } else { one + rho * rho };
    let size = block_size(n, t);
    let mut diag: Vec<Complex64> = (0..size).map(d).collect();
    let mut off2 = vec![rho * rho; size];
    off2[0] = Complex64::new(0.0, 0.0);
    if dim % 2 == 0 {
        // Row m-1 couples to its own mirror image m.
        match t {
            EigType::Type2 => diag[m - 1] -= rho,
            EigType::Type1 => diag[m - 1] += rho,
        }
    } else if t == EigType::Type2 {
        // The middle basis vector is e_m itself, not (e_j + e_j')/sqrt 2.
        off2[m] = 2.0 * rho * rho;
    }
    TriBlock { diag, off2 }
}

/// Three-term determinant recurrence with derivative and error bound.
/// `row(i)` returns `(a_i, a_i', |a_i|, b2_i, b2_i', |b2_i|)`.
fn recurrence<F>(dim: usize, row: F) -> PolyEval
where
    F: Fn(usize) -> (Complex64, Complex64, f64, Complex64, Complex64, f64),
{
    let zero = Complex64::new(0.0, 0.0);
    let (mut p1, mut d1, mut b1) = (Complex64::new(1.0, 0.0), zero, 1.0);
    let (mut p2, mut d2, mut b2) = (zero, zero, 0.0);
    for i in 0..dim {
        let (a, da, aa, c, dc, ac) = row(i);
        let p = a * p1 - c * p2;
        let d = da * p1 + a * d1 - dc * p2 - c * d2;
        let b = aa * b1 + ac * b2;
        (p2, d2, b2) = (p1, d1, b1);
        (p1, d1, b1) = (p, d, b);
        if b1 > RESCALE_ABOVE {
            let s = 1.0 / b1;
            p1 *= s;
            d1 *= s;
            b1 = 1.0;
            p2 *= s;
            d2 *= s;
            b2 *= s;
        }
    }
    PolyEval { value: p1, deriv: d1, bound: b1 }
}

/// `det(T - nu I)` in the variable `nu`.
struct InverseSide<'a>(&'a TriBlock);

impl Evaluate for InverseSide<'_> {
    fn degree(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, nu: Complex64) -> PolyEval {
        let t = self.0;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        recurrence(t.dim(), |i| {
            let a = t.diag[i] - nu;
            (a, -one, t.diag[i].norm() + nu.norm(), t.off2[i], zero, t.off2[i].norm())
        })
    }
}

/// `det(x T - c I)` in the variable `x`; vanishes at the eigenvalues
/// `x = c / nu` of the corresponding block of `K_n(rho)`.
pub(crate) struct EigenSide<'a> {
    pub block: &'a TriBlock,
    pub c: Complex64,
}

impl Evaluate for EigenSide<'_> {
    fn degree(&self) -> usize {
        self.block.dim()
    }

    fn eval(&self, x: Complex64) -> PolyEval {
        let t = self.block;
        let (c, xn) = (self.c, x.norm());
        recurrence(t.dim(), |i| {
            let a = x * t.diag[i] - c;
            let b = x * x * t.off2[i];
            (
                a,
                t.diag[i],
                xn * t.diag[i].norm() + c.norm(),
                b,
                2.0 * x * t.off2[i],
                xn * xn * t.off2[i].norm(),
            )
        })
    }
}

/// Newton polish in the eigenvalue variable. Steps are taken while they
/// keep shrinking, which stops at the actual rounding noise of `det`
/// rather than at its (pessimistic) a-priori bound; a step longer than a
/// quarter of `sep`, the distance to the nearest other root, is refused.
fn polish(side: &EigenSide<'_>, mut x: Complex64, sep: f64) -> Complex64 {
    let mut last = f64::INFINITY;
    for _ in 0..30 {
        let e = side.eval(x);
        if e.value.norm() == 0.0 || e.deriv.norm() == 0.0 {
            break;
        }
        let step = e.value / e.deriv;
        let size = step.norm();
        if !size.is_finite() || size >= last || size > 0.25 * sep {
            break;
        }
        x -= step;
        last = size;
        if size <= f64::EPSILON * x.norm() {
            break;
        }
    }
    x
}

/// Moves each mutually nearest pair closer than [`cluster_radius`] so that
/// its midpoint sits on a zero of p', found by secant steps on p'.
fn recentre_pairs(side: &EigenSide<'_>, roots: &mut [Complex64], sep: &[f64]) {
    for i in 0..roots.len() {
        if sep[i] > cluster_radius(roots[i]) {
            continue;
        }
        let Some(j) = (i + 1..roots.len()).find(|&j| (roots[j] - roots[i]).norm() == sep[i] && sep[j] == sep[i]) else {
            continue;
        };
        let half = 0.5 * (roots[j] - roots[i]);
        let mid = roots[i] + half;
        let (mut a, mut b) = (mid, mid + Complex64::new(sep[i].max(f64::EPSILON * mid.norm()), 0.0));
        let (mut fa, mut fb) = (side.eval(a).deriv, side.eval(b).deriv);
        let mut last = f64::INFINITY;
        for _ in 0..20 {
            let denom = fb - fa;
            if denom.norm() == 0.0 {
                break;
            }
            let step = fb * (b - a) / denom;
            let size = step.norm();
            if !size.is_finite() || size >= last || size > 2.0 * sep[i] {
                break;
            }
            a = b;
            fa = fb;
            b -= step;
            fb = side.eval(b).deriv;
            last = size;
        }
        if last.is_finite() {
            roots[i] = b - half;
            roots[j] = b + half;
        }
    }
}

/// Distance from each point to its nearest neighbour.
fn separations(z: &[Complex64]) -> Vec<f64> {
    (0..z.len())
        .map(|i| (0..z.len()).filter(|&j| j != i).map(|j| (z[j] - z[i]).norm()).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Raw (unclustered) type-`t` eigenvalues of `K_n(rho)`.
pub fn block_roots(n: Dimension, rho: Complex64, t: EigType) -> Result<Vec<Complex64>> {
    let size = block_size(n, t);
    let zero = Complex64::new(0.0, 0.0);
    if rho == zero {
        return Ok(vec![Complex64::new(1.0, 0.0); size]);
    }
    let c = 1.0 - rho * rho;
    if c == zero {
        // rho = ±1: K = s s^T with s = (1, rho, rho^2, ...), one eigenvalue n.
        let s_symmetric = rho.re > 0.0 || n.get() % 2 == 1;
        let carrier = if s_symmetric { EigType::Type2 } else { EigType::Type1 };
        let mut out = vec![zero; size];
        if t == carrier {
            out[0] = Complex64::new(n.as_f64(), 0.0);
        }
        return Ok(out);
    }
    let block = fold_inverse(n, rho, t);
    let center = block.diag.iter().sum::<Complex64>() / size as f64;
    let spread = block.diag.iter().map(|d| (d - center).norm()).fold(0.0, f64::max);
    let coupling = block.off2.iter().map(|b| b.norm().sqrt()).fold(0.0, f64::max);
    let radius = (spread + 2.0 * coupling).max(1e-3 * (1.0 + center.norm()));
    let nu = aberth(&InverseSide(&block), circle_guesses(size, center, radius), 1e-15)?;
    let side = EigenSide { block: &block, c };
    let start: Vec<Complex64> = nu.into_iter().map(|v| c / v).collect();
    let sep = separations(&start);
    // Newton is only linear on a near-double pair, so its members are not
    // polished one at a time; instead the pair is re-centred on the nearby
    // simple root of p' and keeps its split.
    let mut roots: Vec<Complex64> = start
        .iter()
        .zip(&sep)
        .map(|(&x, &d)| if d <= cluster_radius(x) { x } else { polish(&side, x, d) })
        .collect();
    recentre_pairs(&side, &mut roots, &sep);
    // Dense refinement pays off once |lambda|^2 > |B| |c| / |T|.
    let t_norm = (0..size)
        .map(|i| {
            let side = |j: usize| if j < size { block.off2[j].norm().sqrt() } else { 0.0 };
            block.diag[i].norm() + if i > 0 { side(i) } else { 0.0 } + side(i + 1)
        })
        .fold(0.0, f64::max);
    let k_norm = crate::matrix::powers(rho, n.get()).iter().map(|z| 2.0 * z.norm()).sum::<f64>();
    let threshold = k_norm * c.norm() / t_norm;
    if roots.iter().any(|z| z.norm_sqr() > threshold) {
        let dense = fold_dense(&build_kms(n, rho).entries, t);
        if dense.max_abs().is_finite() {
            dense_refine(&dense, &mut roots, threshold);
        }
    }
    // The largest eigenvalue grows like |rho|^(n-1); past the f64 range the
    // iteration can only produce infinities and NaNs.
    if roots.iter().any(|z| !z.is_finite()) {
        return Err(Error::Overflow("block eigenvalues"));
    }
    Ok(roots)
}

/// Newton steps `z <- z - 1 / tr((z I - B)^{-1})` on the roots above
/// `threshold` in squared modulus. A step larger than a quarter of the
/// distance to the nearest other root is refused, so close pairs are never
/// pulled onto each other.
fn dense_refine(b: &DenseMatrix, roots: &mut [Complex64], threshold: f64) {
    let floor = 2.0 * f64::EPSILON * b.inf_norm();
    let seps = separations(roots);
    for i in 0..roots.len() {
        if roots[i].norm_sqr() <= threshold {
            continue;
        }
        let sep = seps[i];
        let mut z = roots[i];
        let mut last = f64::INFINITY;
        for _ in 0..8 {
            let Some(tr) = b.resolvent_trace(z) else { break };
            let step = 1.0 / tr;
            let size = step.norm();
            if !size.is_finite() || size > 0.25 * sep || size >= last {
                break;
            }
            z -= step;
            last = size;
            if size <= floor {
                break;
            }
        }
        roots[i] = z;
    }
}

/// `(p(x), p'(x), scale)` for `p(x) = det(x I - K_n(rho))`, evaluated as
/// `det(x M - c I) / c` with `c = 1 - rho^2` through the two folded blocks.
/// `scale` bounds the magnitude of the terms summed to form `p(x)`;
/// `|p| / scale` and `|p'| / scale'` are the relative residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharValue {
    pub p: Complex64,
    pub dp: Complex64,
    pub p_scale: f64,
    pub dp_scale: f64,
}

pub fn char_value(n: Dimension, rho: Complex64, x: Complex64) -> Result<CharValue> {
    let c = 1.0 - rho * rho;
    if c == Complex64::new(0.0, 0.0) {
        return Err(Error::ExcludedRho(rho));
    }
    let s1 = fold_inverse(n, rho, EigType::Type1);
    let s2 = fold_inverse(n, rho, EigType::Type2);
    let e1 = EigenSide { block: &s1, c }.eval(x);
    let e2 = EigenSide { block: &s2, c }.eval(x);
    // Derivative bound: |d/dx| of each factor is at most bound * deg / |x|
    // by Cauchy's estimate on the majorant; use the product rule on bounds.
    let xn = x.norm().max(1.0);
    let (d1, d2) = (s1.dim() as f64, s2.dim() as f64);
    Ok(CharValue {
        p: e1.value * e2.value / c,
        dp: (e1.deriv * e2.value + e1.value * e2.deriv) / c,
        p_scale: e1.bound * e2.bound / c.norm(),
        dp_scale: e1.bound * e2.bound * (d1 + d2) / xn / c.norm(),
    })
}

/// Orthonormal bases of the symmetric and skew subspaces, as columns.
fn fold_basis(dim: usize, t: EigType) -> Vec<Vec<f64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut cols = Vec::new();
    for j in 0..dim / 2 {
        let mut v = vec![0.0; dim];
        v[j] = h;
        v[dim - 1 - j] = if t == EigType::Type2 { h } else { -h };
        cols.push(v);
    }
    if dim % 2 == 1 && t == EigType::Type2 {
        let mut v = vec![0.0; dim];
        v[dim / 2] = 1.0;
        cols.push(v);
    }
    cols
}

/// Compression `Q^T A Q` of a dense matrix onto the type-`t` subspace.
pub fn fold_dense(a: &DenseMatrix, t: EigType) -> DenseMatrix {
    let dim = a.dim();
    let q = fold_basis(dim, t);
    let k = q.len();
    let mut out = DenseMatrix::zeros(k);
    for r in 0..k {
        for s in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                if q[r][i] == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    if q[s][j] != 0.0 {
                        acc += q[r][i] * a[(i, j)] * q[s][j];
                    }
                }
            }
            out[(r, s)] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_kms;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shifted_det(a: &DenseMatrix, x: Complex64) -> Complex64 {
        let mut b = a.clone();
        for i in 0..b.dim() {
            b[(i, i)] -= x;
        }
        b.determinant()
    }

    #[test]
    fn two_by_two_types() {
        let rho = c(0.4, 0.9);
        let t2 = block_roots(dim(2), rho, EigType::Type2).unwrap();
        let t1 = block_roots(dim(2), rho, EigType::Type1).unwrap();
        assert!((t2[0] - (1.0 + rho)).norm() < 1e-14);
        assert!((t1[0] - (1.0 - rho)).norm() < 1e-14);
    }

    #[test]
    fn block_roots_are_roots_of_dense_blocks() {
        for n in 2..9 {
            let rho = c(0.7, -1.3);
            let k = build_kms(dim(n), rho).entries;
            for t in EigType::BOTH {
                let block = fold_dense(&k, t);
                assert_eq!(block.dim(), block_size(dim(n), t));
                for x in block_roots(dim(n), rho, t).unwrap() {
                    let d = shifted_det(&block, x).norm();
                    let s = shifted_det(&block, x + 1e-3 * (1.0 + x.norm())).norm();
                    assert!(d < 1e-9 * s, "n={n} {t} root {x}: det {d} vs {s}");
                }
            }
        }
    }

    #[test]
    fn char_value_matches_dense_determinant() {
        let rho = c(-0.6, 1.1);
        for n in 2..8 {
            let k = build_kms(dim(n), rho).entries;
            for x in [c(-3.0, 0.5), c(2.0, -1.0)] {
                let v = char_value(dim(n), rho, x).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let dense = sign * shifted_det(&k, x);
                assert!((v.p - dense).norm() < 1e-11 * (1.0 + dense.norm()), "n={n}");
                let h = 1e-6;
                let fd = (char_value(dim(n), rho, x + h).unwrap().p
                    - char_value(dim(n), rho, x - h).unwrap().p)
                    / (2.0 * h);
                assert!((v.dp - fd).norm() < 1e-6 * (1.0 + fd.norm()), "n={n}");
            }
        }
    }

    #[test]
    fn rank_one_cases() {
        let r = block_roots(dim(4), c(-1.0, 0.0), EigType::Type1).unwrap();
        assert!(r.contains(&c(4.0, 0.0)));
        let r = block_roots(dim(5), c(-1.0, 0.0), EigType::Type2).unwrap();
        assert!(r.contains(&c(5.0, 0.0)));
        let r = block_roots(dim(5), c(1.0, 0.0), EigType::Type1).unwrap();
        assert!(r.iter().all(|x| *x == c(0.0, 0.0)));
    }
}
