//! Simultaneous polynomial root iteration (Aberth-Ehrlich).
//!
//! The iteration only needs `p(z)`, `p'(z)` and an a-priori bound on the
//! rounding error of `p(z)`, so the same driver serves explicit coefficient
//! vectors and the three-term determinant recurrences of the tridiagonal
//! blocks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexPoint;
use crate::error::{Error, Result};

const MAX_ITER: usize = 600;

/// `p(z)`, `p'(z)` and `bound`, where `bound` majorises every term that
/// was summed to form `p(z)`. The three may share an arbitrary positive
/// scale factor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PolyEval {
    pub value: Complex64,
    pub deriv: Complex64,
    pub bound: f64,
}

pub(crate) trait Evaluate {
    fn degree(&self) -> usize;
    fn eval(&self, z: Complex64) -> PolyEval;
}

/// `z` is indistinguishable from a root in floating point.
pub(crate) fn at_noise_floor(e: &PolyEval) -> bool {
    e.value.norm() <= 2.0 * f64::EPSILON * e.bound
}

/// Initial guesses on a slightly perturbed circle; the irrational offset
/// keeps the guesses off any symmetry axis of the problem.
pub(crate) fn circle_guesses(degree: usize, center: Complex64, radius: f64) -> Vec<Complex64> {
    (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            center + Complex64::from_polar(radius * (1.0 + 0.01 * k as f64 / degree as f64), theta)
        })
        .collect()
}

/// Runs Aberth-Ehrlich from `guesses` until every correction is below
/// `tol (1 + |z|)` or the iterate sits at the rounding-noise floor of `p`.
pub(crate) fn aberth<E: Evaluate>(p: &E, mut z: Vec<Complex64>, tol: f64) -> Result<Vec<Complex64>> {
    let m = z.len();
    debug_assert_eq!(m, p.degree());
    if m == 0 {
        return Ok(z);
    }
    if m == 1 {
        // One Newton sequence is all Aberth reduces to.
        for _ in 0..MAX_ITER {
            let e = p.eval(z[0]);
            if at_noise_floor(&e) || e.deriv == Complex64::new(0.0, 0.0) {
                return Ok(z);
            }
            let w = e.value / e.deriv;
            z[0] -= w;
            if w.norm() <= tol * (1.0 + z[0].norm()) {
                return Ok(z);
            }
        }
        return Err(Error::NonConvergence("Newton iteration"));
    }
    let mut done = vec![false; m];
    let mut last = vec![f64::INFINITY; m];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for k in 0..m {
            if done[k] {
                continue;
            }
            let e = p.eval(z[k]);
            if at_noise_floor(&e) {
                done[k] = true;
                continue;
            }
            all = false;
            let newton = e.value / e.deriv;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let mut w = newton / (1.0 - newton * repulsion);
            if !w.is_finite() {
                w = newton;
            }
            if !w.is_finite() {
                // p'(z) = 0 away from a root: nudge off the critical point.
                w = Complex64::new(1e-3 * (1.0 + z[k].norm()), 0.0);
            }
            z[k] -= w;
            last[k] = w.norm();
            if last[k] <= tol * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
        if all {
            return Ok(z);
        }
    }
    // Clustered roots converge only linearly; accept them once the
    // corrections have shrunk to the square-root-of-epsilon level.
    if (0..m).all(|k| done[k] || last[k] <= 1e-7 * (1.0 + z[k].norm())) {
        Ok(z)
    } else {
        Err(Error::NonConvergence("Aberth-Ehrlich iteration"))
    }
}

/// A root together with the number of computed roots merged into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: ComplexPoint,
    pub multiplicity: usize,
}

/// Radius within which two computed roots count as one repeated root.
pub fn cluster_radius(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// Groups roots that lie within [`cluster_radius`] of each other
/// (single linkage). Groups are returned in order of their first member.
pub fn cluster_roots(roots: &[Complex64]) -> Vec<Root> {
    let m = roots.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            let r = cluster_radius(roots[i]).max(cluster_radius(roots[j]));
            if (roots[i] - roots[j]).norm() <= r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|(root, _, _)| *root == r) {
            Some(entry) => {
                entry.1 += roots[i];
                entry.2 += 1;
            }
            None => out.push((r, roots[i], 1)),
        }
    }
    out.into_iter()
        .map(|(_, sum, count)| Root { value: ComplexPoint(sum / count as f64), multiplicity: count })
        .collect()
}
