//! Counting extraordinary eigenvalues by region.
//!
//! Outside `B_n^(k)` the matrix `K_n(rho)` has exactly one type-`k`
//! eigenvalue with `|lambda| > n`; inside (and on) the curve it has none.
//! Membership is decided by the winding number of the traced polyline.
//! Only the component containing the origin and the unbounded component are
//! known to carry these counts without assuming the curves are simple, so a
//! query that lands anywhere else (a winding number other than 0 or ±1)
//! falls back to the oracle and says so.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borderline::{segment_distance, trace_default, TracedCurve};
use crate::complex::ComplexPoint;
use crate::error::{Error, Result};
use crate::matrix::{xi, Dimension, EigType};
use crate::oracle::{block_roots, spectrum_split};
use crate::singularities::CuspReport;

/// Points closer than this to a curve are classified as on it.
pub const ON_CURVE_TOL: f64 = 1e-6;
/// Below this distance the winding number itself is undefined.
pub const WINDING_TOL: f64 = 1e-9;

/// Winding number of the closed polyline of `curve` around `rho`.
pub fn winding_number(rho: Complex64, curve: &TracedCurve) -> Result<i32> {
    let d = curve.distance(rho);
    if d < WINDING_TOL {
        return Err(Error::OnCurve(rho, d));
    }
    Ok(winding_unchecked(rho, curve))
}

fn winding_unchecked(rho: Complex64, curve: &TracedCurve) -> i32 {
    let mut w = 0;
    for (a, b) in curve.segments() {
        let cross = (b.re - a.re) * (rho.im - a.im) - (rho.re - a.re) * (b.im - a.im);
        if a.im <= rho.im {
            if b.im > rho.im && cross > 0.0 {
                w += 1;
            }
        } else if b.im <= rho.im && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    OnCurve,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionQuery {
    pub rho: ComplexPoint,
    pub n: Dimension,
    pub membership: [Membership; 2],
    /// `[j1, j2]`, the type-1 and type-2 extraordinary counts.
    pub counts: [usize; 2],
    /// An on-curve count of 0 holds only if the curves are simple closed curves.
    pub conjecture_dependent: bool,
    /// The point lies in a component of unknown count; `counts` came from the oracle.
    pub oracle_fallback: bool,
}

/// Position of `t` in `[type1, type2]` arrays.
fn slot(t: EigType) -> usize {
    t.index() - 1
}

/// Both traced curves of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    pub n: Dimension,
    pub curves: [TracedCurve; 2],
}

impl Classifier {
    /// Traces both curves with the default resolution.
    pub fn new(n: Dimension) -> Result<Self> {
        Ok(Classifier {
            n,
            curves: [trace_default(n, EigType::Type1)?, trace_default(n, EigType::Type2)?],
        })
    }

    pub fn curve(&self, t: EigType) -> &TracedCurve {
        &self.curves[slot(t)]
    }

    /// Distance from `rho` to the nearer of the two curves.
    pub fn distance(&self, rho: Complex64) -> f64 {
        self.curves[0].distance(rho).min(self.curves[1].distance(rho))
    }

    pub fn query(&self, rho: Complex64) -> Result<RegionQuery> {
        self.query_with_tol(rho, ON_CURVE_TOL)
    }

    /// As [`Classifier::query`], with points closer than `on_curve_tol` to a
    /// curve classified as on it.
    pub fn query_with_tol(&self, rho: Complex64, on_curve_tol: f64) -> Result<RegionQuery> {
        if !(on_curve_tol >= WINDING_TOL && on_curve_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "on-curve tolerance must be finite and at least {WINDING_TOL:e}, got {on_curve_tol:e}"
            )));
        }
        let mut membership = [Membership::Exterior; 2];
        let mut counts = [0; 2];
        let mut conjecture_dependent = false;
        let mut oracle_fallback = false;
        for t in EigType::BOTH {
            let k = slot(t);
            let curve = &self.curves[k];
            if curve.distance(rho) < on_curve_tol {
                membership[k] = Membership::OnCurve;
                conjecture_dependent = true;
                continue;
            }
            match winding_unchecked(rho, curve) {
                0 => {
                    membership[k] = Membership::Exterior;
                    counts[k] = 1;
                }
                1 | -1 => membership[k] = Membership::Interior,
                _ => {
                    membership[k] = Membership::Interior;
                    counts[k] = oracle_counts(self.n, rho)?[k];
                    oracle_fallback = true;
                }
            }
        }
        Ok(RegionQuery { rho: ComplexPoint(rho), n: self.n, membership, counts, conjecture_dependent, oracle_fallback })
    }

    pub fn counts(&self, rho: Complex64) -> Result<[usize; 2]> {
        self.query(rho).map(|q| q.counts)
    }

    /// Labels the connected regions of the plane cut by both curves.
    ///
    /// A `resolution x resolution` grid over the padded bounding box is cut
    /// along the rasterised curves and flood-filled; each region is labelled
    /// at its cell farthest from the curves and checked at several others.
    pub fn region_labels(&self, resolution: usize) -> Result<Vec<RegionLabel>> {
        if resolution < 8 {
            return Err(Error::AmbiguousRegion(resolution));
        }
        let grid = Grid::new(self, resolution);
        let mut blocked = vec![false; resolution * resolution];
        for curve in &self.curves {
            for (a, b) in curve.segments() {
                let steps = ((b - a).norm() / (0.25 * grid.cell_min())).ceil() as usize + 1;
                for s in 0..=steps {
                    let z = a + (b - a) * (s as f64 / steps as f64);
                    if let Some(c) = grid.cell_of(z) {
                        blocked[c] = true;
                    }
                }
            }
        }
        let depth = grid.depth_from(&blocked);
        let mut component = vec![usize::MAX; resolution * resolution];
        let mut labels = Vec::new();
        for start in 0..blocked.len() {
            if blocked[start] || component[start] != usize::MAX {
                continue;
            }
            let id = labels.len();
            let cells = grid.flood(start, &blocked, &mut component, id);
            let rep = *cells.iter().max_by_key(|&&c| (depth[c], usize::MAX - c)).unwrap();
            let q = self.query(grid.center(rep))?;
            if q.conjecture_dependent {
                continue;
            }
            // Spot-check cells well away from the curves.
            let deep: Vec<usize> = cells.iter().copied().filter(|&c| depth[c] >= 2).collect();
            let stride = (deep.len() / 8).max(1);
            for &c in deep.iter().step_by(stride) {
                let other = self.query(grid.center(c))?;
                if !other.conjecture_dependent && other.counts != q.counts {
                    return Err(Error::AmbiguousRegion(resolution));
                }
            }
            labels.push(RegionLabel {
                rho: ComplexPoint(grid.center(rep)),
                label: q.counts,
                cells: cells.len(),
                oracle_fallback: q.oracle_fallback,
            });
        }
        Ok(labels)
    }
}

/// A connected region with its representative point and `[j1, j2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub rho: ComplexPoint,
    pub label: [usize; 2],
    /// Grid cells in the region, a rough area measure.
    pub cells: usize,
    pub oracle_fallback: bool,
}

struct Grid {
    res: usize,
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
}

impl Grid {
    fn new(c: &Classifier, res: usize) -> Grid {
        let (a1, b1, c1, d1) = c.curves[0].bounding_box();
        let (a2, b2, c2, d2) = c.curves[1].bounding_box();
        let (xmin, xmax, ymin, ymax) = (a1.min(a2), b1.max(b2), c1.min(c2), d1.max(d2));
        let (px, py) = (0.1 * (xmax - xmin), 0.1 * (ymax - ymin));
        let (x0, y0) = (xmin - px, ymin - py);
        Grid { res, x0, y0, dx: (xmax - xmin + 2.0 * px) / res as f64, dy: (ymax - ymin + 2.0 * py) / res as f64 }
    }

    fn cell_min(&self) -> f64 {
        self.dx.min(self.dy)
    }

    fn cell_of(&self, z: Complex64) -> Option<usize> {
        let i = ((z.re - self.x0) / self.dx).floor();
        let j = ((z.im - self.y0) / self.dy).floor();
        if i < 0.0 || j < 0.0 || i >= self.res as f64 || j >= self.res as f64 {
            return None;
        }
        Some(j as usize * self.res + i as usize)
    }

    fn center(&self, c: usize) -> Complex64 {
        let (i, j) = (c % self.res, c / self.res);
        Complex64::new(self.x0 + (i as f64 + 0.5) * self.dx, self.y0 + (j as f64 + 0.5) * self.dy)
    }

    fn neighbours(&self, c: usize) -> impl Iterator<Item = usize> {
        let (i, j, r) = (c % self.res, c / self.res, self.res);
        [
            (i > 0).then(|| c - 1),
            (i + 1 < r).then(|| c + 1),
            (j > 0).then(|| c - r),
            (j + 1 < r).then(|| c + r),
        ]
        .into_iter()
        .flatten()
    }

    fn flood(&self, start: usize, blocked: &[bool], component: &mut [usize], id: usize) -> Vec<usize> {
        let mut cells = vec![start];
        component[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for nb in self.neighbours(c) {
                if !blocked[nb] && component[nb] == usize::MAX {
                    component[nb] = id;
                    cells.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        cells
    }

    /// Grid steps from each cell to the nearest blocked cell.
    fn depth_from(&self, blocked: &[bool]) -> Vec<usize> {
        let mut depth = vec![usize::MAX; blocked.len()];
        let mut queue = VecDeque::new();
        for (c, &b) in blocked.iter().enumerate() {
            if b {
                depth[c] = 0;
                queue.push_back(c);
            }
        }
        while let Some(c) = queue.pop_front() {
            for nb in self.neighbours(c) {
                if depth[nb] == usize::MAX {
                    depth[nb] = depth[c] + 1;
                    queue.push_back(nb);
                }
            }
        }
        depth
    }
}

/// `[j1, j2]` for real `rho` by the closed-form table of the real case.
/// Boundary values take the closed end of each interval.
pub fn real_axis_counts(n: Dimension, rho: f64) -> [usize; 2] {
    let x = xi(n);
    if rho < -x || rho > x {
        [1, 1]
    } else if rho < -1.0 {
        if n.is_even() {
            [1, 0]
        } else {
            [0, 1]
        }
    } else if rho <= 1.0 {
        [0, 0]
    } else {
        [0, 1]
    }
}

/// `[j1, j2]` for `rho` from freshly traced curves.
pub fn count_extraordinary(n: Dimension, rho: Complex64) -> Result<[usize; 2]> {
    Classifier::new(n)?.counts(rho)
}

pub fn region_labels(n: Dimension, grid_resolution: usize) -> Result<Vec<RegionLabel>> {
    Classifier::new(n)?.region_labels(grid_resolution)
}

/// Per-type number of eigenvalues with `|lambda| > n`, straight from the oracle.
pub fn oracle_counts(n: Dimension, rho: Complex64) -> Result<[usize; 2]> {
    let s = spectrum_split(n, rho)?;
    let count = |v: &[Complex64]| v.iter().filter(|z| z.norm() > n.as_f64()).count();
    Ok([count(&s.type1), count(&s.type2)])
}

/// The two type-`t` eigenvalues with modulus closest to `n` along a line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub distances: Vec<f64>,
    pub pair_magnitudes: Vec<(f64, f64)>,
    pub pairs: Vec<(ComplexPoint, ComplexPoint)>,
}

/// Type-`t` eigenvalue pair nearest the threshold `n`, ordered by
/// `||lambda| - n|` with ties going to the larger modulus.
pub fn threshold_pair(n: Dimension, rho: Complex64, t: EigType) -> Result<(Complex64, Complex64)> {
    let mut roots = block_roots(n, rho, t)?;
    if roots.len() < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} has fewer than two eigenvalues of {t}")));
    }
    let nf = n.as_f64();
    roots.sort_by(|a, b| {
        (a.norm() - nf).abs().total_cmp(&(b.norm() - nf).abs()).then(b.norm().total_cmp(&a.norm()))
    });
    Ok((roots[0], roots[1]))
}

/// Follows `rho = start + d direction` for `steps` evenly spaced `d` in
/// `[from, to]` and records the threshold pair at each point.
pub fn scan_path(
    n: Dimension,
    t: EigType,
    start: Complex64,
    direction: Complex64,
    range: (f64, f64),
    steps: usize,
) -> Result<ScanResult> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("scan needs at least 2 steps, got {steps}")));
    }
    if direction.norm() == 0.0 || !direction.is_finite() {
        return Err(Error::InvalidArgument("scan direction must be a nonzero finite complex number".into()));
    }
    let dir = direction / direction.norm();
    let (from, to) = range;
    let mut out = ScanResult { distances: Vec::new(), pair_magnitudes: Vec::new(), pairs: Vec::new() };
    for k in 0..steps {
        let d = from + (to - from) * k as f64 / (steps - 1) as f64;
        let (a, b) = threshold_pair(n, start + d * dir, t)?;
        out.distances.push(d);
        out.pair_magnitudes.push((a.norm(), b.norm()));
        out.pairs.push((ComplexPoint(a), ComplexPoint(b)));
    }
    Ok(out)
}

/// Unit vector along the local bisector of `cusp` that points out of the
/// region enclosed by `curve`.
pub fn bisector_outward(curve: &TracedCurve, cusp: &CuspReport) -> Result<Complex64> {
    let dir = Complex64::from_polar(1.0, cusp.bisector_angle);
    let step = 1e-3 * curve.diagonal();
    let rho0 = cusp.rho0.0;
    for d in [dir, -dir] {
        let probe = rho0 + step * d;
        let clear = curve
            .segments()
            .map(|(a, b)| segment_distance(probe, a, b))
            .fold(f64::INFINITY, f64::min)
            > ON_CURVE_TOL;
        if clear && winding_unchecked(probe, curve) == 0 {
            return Ok(d);
        }
    }
    Err(Error::AmbiguousRegion(0))
}
