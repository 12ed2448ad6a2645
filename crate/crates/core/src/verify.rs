//! Randomised invariant suites, one per module.
//!
//! Every suite is a list of named checks driven by a seeded ChaCha stream,
//! so a run is reproducible bit for bit. A check that hits a numerical
//! error fails with that error as its detail rather than aborting the run.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::borderline::{
    curve_sample, f_curve, far_crossing, injectivity_report, near_crossing, solve_v, trace_default, TracedCurve,
    SOLVE_TOL,
};
use crate::classification::{bisector_outward, oracle_counts, real_axis_counts, scan_path, Classifier, ScanResult};
use crate::complex::{format_complex, parse_complex};
use crate::error::{Error, Result};
use crate::matrix::{build_kms, dirichlet_ratio, powers, signature_matrix, xi, Dimension, EigType};
use crate::oracle::{block_roots, char_poly, char_value, fold_dense, full_spectrum, poly_roots, spectrum_split};
use crate::relations::{
    asymptotic_spectrum, default_borderline_tol, double_condition_residual, exceptional_rho, lambda_of_mu,
    rho_of_mu, ModeParameter,
};
use crate::singularities::{
    cusp_parameters, find_cusps, parabola_model, small_u_series, verify_double, CuspReport, DOUBLE_TOL,
};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x4b4d_5320_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Curves,
    Cusps,
    Classify,
    Oracle,
    All,
}

impl Suite {
    /// The individual suites that `All` expands to, in run order.
    pub const MODULES: [Suite; 5] = [Suite::Core, Suite::Curves, Suite::Cusps, Suite::Classify, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Curves => "curves",
            Suite::Cusps => "cusps",
            Suite::Classify => "classify",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::MODULES.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All].into_iter().chain(Suite::MODULES).find(|x| x.name() == s).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown suite {s:?}; expected core, curves, cusps, classify, oracle or all"))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, outcome: Result<Outcome>) -> Self {
        let (passed, detail) = match outcome {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        CheckResult { name: name.to_string(), passed, detail }
    }
}

/// `Ok(detail)` for a pass, `Err(detail)` for a failure.
pub type Outcome = std::result::Result<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
    pub elapsed_secs: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs `suite` (every module suite for `All`).
pub fn run_suite(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    suite
        .expand()
        .into_iter()
        .map(|s| {
            let start = Instant::now();
            let checks = match s {
                Suite::Core => core_checks(seed),
                Suite::Curves => curve_checks(seed),
                Suite::Cusps => cusp_checks(seed),
                Suite::Classify => classify_checks(seed),
                Suite::Oracle => oracle_checks(seed),
                Suite::All => unreachable!("expanded above"),
            };
            SuiteReport { suite: s, checks, elapsed_secs: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn dim(n: usize) -> Dimension {
    Dimension::new(n).expect("suite dimensions are at least 2")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-PI..PI))
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Largest greedy nearest-neighbour distance between two multisets,
/// relative to `1 + |a|`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d / (1.0 + x.norm()));
    }
    worst
}

/// `rho` avoiding small neighbourhoods of the excluded values `0, ±1, ±xi_n`.
fn random_generic_rho(rng: &mut ChaCha8Rng, n: Dimension, radius: f64) -> Complex64 {
    loop {
        let z = random_disk(rng, radius);
        let x = xi(n);
        if [0.0, 1.0, -1.0, x, -x].iter().all(|&e| (z - e).norm() > 1e-3) {
            return z;
        }
    }
}

// ---------------------------------------------------------------- core

fn core_checks(seed: u64) -> Vec<CheckResult> {
    vec![
        CheckResult::new("dirichlet bound", check_dirichlet_bound(seed)),
        CheckResult::new("hyperbolic bound", check_hyperbolic_bound(seed)),
        CheckResult::new("determinant identity", check_determinant(seed)),
        CheckResult::new("matrix structure", check_matrix_structure(seed)),
        CheckResult::new("complex literal round-trip", check_literal_round_trip(seed)),
        CheckResult::new("mu parity", check_mu_parity(seed)),
        CheckResult::new("asymptotic product", check_asymptotic_product(seed)),
        CheckResult::new("relations vs oracle", check_relations_consistency(seed)),
    ]
}

fn check_dirichlet_bound(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 1);
    let (mut worst, mut false_equal) = (f64::NEG_INFINITY, 0);
    for n in 2..=12 {
        let d = dim(n);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-10.0..10.0);
            let r = dirichlet_ratio(d, Complex64::new(x, 0.0)).norm();
            worst = worst.max(r - n as f64);
            let m = x.rem_euclid(PI);
            if r >= n as f64 - 1e-9 && m.min(PI - m) >= 1e-6 {
                false_equal += 1;
            }
        }
    }
    Ok(verdict(
        worst <= 1e-12 && false_equal == 0,
        format!("max |ratio| - n = {worst:.3e}; equality away from x = m pi: {false_equal}"),
    ))
}

fn check_hyperbolic_bound(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 2);
    let mut worst = f64::INFINITY;
    for n in 2..=12 {
        for _ in 0..1000 {
            let v = rng.gen_range(1e-3..5.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let r = (n as f64 * v).sinh() / v.sinh();
            worst = worst.min(r - n as f64);
        }
    }
    Ok(verdict(worst > 0.0, format!("min sinh(nv)/sinh(v) - n = {worst:.3e}")))
}

fn check_determinant(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 3);
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        let d = dim(n);
        for _ in 0..50 {
            let rho = random_disk(&mut rng, 2.0);
            let det = build_kms(d, rho).entries.determinant();
            let expected = (1.0 - rho * rho).powu(n as u32 - 1);
            worst = worst.max((det - expected).norm() / expected.norm());
        }
    }
    Ok(verdict(worst < 1e-8, format!("max relative error {worst:.3e} over |rho| <= 2, n = 2..12")))
}

fn check_matrix_structure(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 4);
    for n in 2..=12 {
        let d = dim(n);
        let rho = random_disk(&mut rng, 2.0);
        let k = build_kms(d, rho);
        let p = powers(rho, n);
        for j in 0..n {
            for l in 0..n {
                if k.entries[(j, l)] != k.entries[(l, j)] || k.entries[(j, l)] != p[j.abs_diff(l)] {
                    return Ok(Err(format!("entry ({j},{l}) of K_{n}({rho}) is wrong")));
                }
            }
        }
        let s = signature_matrix(d);
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            if s[(j, j)] != Complex64::new(sign, 0.0) {
                return Ok(Err(format!("signature matrix entry {j} for n = {n}")));
            }
        }
    }
    Ok(Ok("symmetric Toeplitz with unit diagonal; signature alternates".into()))
}

fn check_literal_round_trip(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 5);
    for _ in 0..10_000 {
        let scale = 10f64.powi(rng.gen_range(-20..20));
        let z = Complex64::new(rng.gen_range(-1.0..1.0) * scale, rng.gen_range(-1.0..1.0) * scale);
        let back = parse_complex(&format_complex(z))?;
        if back.re.to_bits() != z.re.to_bits() || back.im.to_bits() != z.im.to_bits() {
            return Ok(Err(format!("{z:?} printed as {} came back as {back:?}", format_complex(z))));
        }
    }
    Ok(Ok("10000 random values print and parse bit-identically".into()))
}

fn random_mu(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-PI..PI), rng.gen_range(-2.0..2.0))
}

fn check_mu_parity(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = dim(rng.gen_range(3..=10));
        let mu = random_mu(&mut rng);
        for t in EigType::BOTH {
            let (a, b) = (ModeParameter::new(n, mu), ModeParameter::new(n, -mu));
            let (la, lb) = (lambda_of_mu(a, t), lambda_of_mu(b, t));
            worst = worst.max((la - lb).norm() / la.norm().max(1.0));
            if let (Ok(ra), Ok(rb)) = (rho_of_mu(a, t), rho_of_mu(b, t)) {
                worst = worst.max((ra - rb).norm() / ra.norm().max(1.0));
            }
        }
    }
    Ok(verdict(worst < 1e-13, format!("max relative change under mu -> -mu: {worst:.3e}")))
}

fn check_asymptotic_product(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=20);
        let rho = random_disk(&mut rng, 20.0);
        let a = asymptotic_spectrum(dim(n), rho);
        let expected = if n % 2 == 0 { -1.0 } else { 1.0 } * rho.powu(2 * n as u32 - 2);
        worst = worst.max((a.product() - expected).norm() / expected.norm());
        if a.lambda0 != -a.lambda1 || a.bulk_value != Complex64::new(-1.0, 0.0) || a.bulk_count != n - 2 {
            return Ok(Err(format!("malformed asymptotic spectrum for n = {n}")));
        }
    }
    Ok(verdict(worst < 1e-12, format!("max relative product error {worst:.3e}")))
}

fn check_relations_consistency(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 8);
    let (mut worst, mut poles, mut tested) = (0.0f64, 0, 0);
    for _ in 0..1000 {
        let n = dim(rng.gen_range(3..=10));
        let mu = random_mu(&mut rng);
        for t in EigType::BOTH {
            let m = ModeParameter::new(n, mu);
            let rho = match rho_of_mu(m, t) {
                Ok(r) if r.is_finite() && (1.0 - r * r).norm() > 1e-8 => r,
                Ok(_) | Err(Error::Pole { .. }) => {
                    poles += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let lambda = lambda_of_mu(m, t);
            let roots = block_roots(n, rho, t)?;
            let d = roots.iter().map(|z| (z - lambda).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d / n.as_f64().max(lambda.norm()));
            tested += 1;
        }
    }
    Ok(verdict(
        worst < 1e-7,
        format!("{tested} (mu, type) pairs: max distance to the type block {worst:.3e} of max(n, |lambda|); {poles} poles skipped"),
    ))
}

// ---------------------------------------------------------------- curves

fn curve_checks(seed: u64) -> Vec<CheckResult> {
    vec![
        CheckResult::new("v symmetries", check_v_symmetries(seed)),
        CheckResult::new("conjugate symmetry", check_conjugate_symmetry(seed)),
        CheckResult::new("even-n mirror", check_even_mirror(seed)),
        CheckResult::new("axis crossings", check_axis_crossings()),
        CheckResult::new("borderline vs oracle", check_borderline_oracle(seed)),
        CheckResult::new("real-axis crossings only at the ends", check_real_axis_only_at_ends()),
        CheckResult::new("injectivity evidence", check_injectivity()),
    ]
}

fn check_v_symmetries(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 11);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let n = dim(rng.gen_range(2..=12));
        let u: f64 = rng.gen_range(-PI..PI);
        let v = solve_v(n, u, SOLVE_TOL)?.v;
        for w in [-u, PI - u] {
            worst = worst.max((solve_v(n, w, SOLVE_TOL)?.v - v).abs());
        }
    }
    Ok(verdict(worst < 1e-12, format!("max |v(u) - v(-u)|, |v(u) - v(pi-u)| = {worst:.3e}")))
}

fn check_conjugate_symmetry(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 12);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let n = dim(rng.gen_range(2..=12));
        let u: f64 = rng.gen_range(-PI..PI);
        for t in EigType::BOTH {
            worst = worst.max((f_curve(n, -u, t)? - f_curve(n, u, t)?.conj()).norm());
        }
    }
    Ok(verdict(worst < 1e-12, format!("max |f(-u) - conj f(u)| = {worst:.3e}")))
}

fn check_even_mirror(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 13);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let n = dim(2 * rng.gen_range(1..=6));
        let u: f64 = rng.gen_range(-PI..PI);
        let lhs = f_curve(n, PI - u, EigType::Type1)?;
        let rhs = -f_curve(n, u, EigType::Type2)?.conj();
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(verdict(worst < 1e-11, format!("max |f1(pi-u) + conj f2(u)| = {worst:.3e}")))
}

fn check_axis_crossings() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in (2..=12).map(dim) {
        for t in EigType::BOTH {
            worst = worst.max((f_curve(n, 0.0, t)? - near_crossing(n, t)).norm());
            worst = worst.max((f_curve(n, PI, t)? - far_crossing(n, t)).norm());
        }
    }
    Ok(verdict(worst < 1e-10, format!("max deviation from the closed-form crossings {worst:.3e}")))
}

fn check_borderline_oracle(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 14);
    let (mut worst, mut wrong_type) = (0.0f64, 0);
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            for _ in 0..50 {
                let u: f64 = rng.gen_range(-PI..PI);
                let s = curve_sample(n, u, t)?;
                let split = spectrum_split(n, s.rho.0)?;
                let near = |v: &[Complex64]| v.iter().map(|z| (z - s.lambda.0).norm()).fold(f64::INFINITY, f64::min);
                let (own, other) = (near(split.of(t)), near(split.of(t.other())));
                worst = worst.max(own / n.as_f64());
                if own > other {
                    wrong_type += 1;
                }
            }
        }
    }
    Ok(verdict(
        worst < 1e-7 && wrong_type == 0,
        format!("max distance to the typed oracle eigenvalue {worst:.3e} n; {wrong_type} type mismatches"),
    ))
}

fn check_real_axis_only_at_ends() -> Result<Outcome> {
    for n in (2..=12).map(dim) {
        for t in EigType::BOTH {
            let c = trace_default(n, t)?;
            let m = c.samples.len();
            let end = |i: usize| {
                let u = c.samples[i % m].u;
                u == 0.0 || u.abs() == PI
            };
            for i in 0..m {
                if c.samples[i].rho.im().abs() < 1e-9 && !(end(i) || end(i + 1) || end(i + m - 1)) {
                    return Ok(Err(format!("{t}, n = {n}: real sample at u = {}", c.samples[i].u)));
                }
            }
        }
    }
    Ok(Ok("only samples at or next to u = 0, pi are real, n = 2..12".into()))
}

fn check_injectivity() -> Result<Outcome> {
    let mut least = f64::INFINITY;
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            let r = injectivity_report(&trace_default(n, t)?, 0.05)?;
            least = least.min(r.min_distance);
        }
    }
    Ok(verdict(least > 1e-12, format!("smallest distance between samples 0.05 apart in u: {least:.3e}")))
}

// ---------------------------------------------------------------- cusps

fn cusp_checks(seed: u64) -> Vec<CheckResult> {
    vec![
        CheckResult::new("cusp residuals", check_cusp_residuals()),
        CheckResult::new("one-to-one correspondence", check_one_to_one()),
        CheckResult::new("imaginary-axis cusps", check_imaginary_axis_cusps()),
        CheckResult::new("no double eigenvalue off the cusps", check_no_stray_doubles(seed)),
        CheckResult::new("series order", check_series_order()),
        CheckResult::new("parabola n = 7", check_parabola()),
        CheckResult::new("puiseux amplitude", check_puiseux()),
        CheckResult::new("cardioid bisector", check_cardioid_bisector()),
    ]
}

fn check_cusp_residuals() -> Result<Outcome> {
    let (mut count, mut worst_deriv, mut worst_b, mut worst_oracle) = (0, 0.0f64, 0.0f64, 0.0f64);
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            for c in find_cusps(n, t)? {
                count += 1;
                worst_deriv = worst_deriv.max(c.residuals.curve_derivative);
                worst_b = worst_b.max((c.lambda0.0 + n.as_f64()).norm() / n.as_f64());
                let v = c.residuals.oracle_double.ok_or(Error::ExcludedRho(c.rho0.0))?;
                worst_oracle = worst_oracle.max(v.p_at).max(v.dp_at);
                if c.rho0.im().abs() < 1e-8 {
                    return Ok(Err(format!("{t}, n = {n}: real cusp at {}", c.rho0)));
                }
            }
        }
    }
    Ok(verdict(
        worst_deriv < 1e-6 && worst_b < 1e-8 && worst_oracle < DOUBLE_TOL,
        format!(
            "{count} cusps, n = 3..10: max |df/du| {worst_deriv:.2e}, max |b+n|/n {worst_b:.2e}, max oracle residual {worst_oracle:.2e}"
        ),
    ))
}

/// Zeros of the repeated-eigenvalue condition along the curve, `u ∈ (0, pi)`.
pub fn double_condition_zeros(n: Dimension, t: EigType, grid: usize) -> Result<Vec<f64>> {
    let residual = |u: f64| -> Result<f64> {
        let v = solve_v(n, u, SOLVE_TOL)?.v;
        let rho = f_curve(n, u, t)?;
        Ok(double_condition_residual(ModeParameter::new(n, Complex64::new(u, v)), rho, t)?.relative)
    };
    // Stay clear of u = 0, pi, where rho = ±xi_n satisfies the condition trivially.
    let margin = 1e-3;
    let us: Vec<f64> = (0..=grid).map(|k| margin + (PI - 2.0 * margin) * k as f64 / grid as f64).collect();
    let values = us.iter().map(|&u| residual(u)).collect::<Result<Vec<f64>>>()?;
    let mut zeros = Vec::new();
    for k in 1..grid {
        if values[k] > values[k - 1] || values[k] > values[k + 1] || values[k] > 1e-2 {
            continue;
        }
        // Golden-section search on the V-shaped |residual|.
        let (mut a, mut b) = (us[k - 1], us[k + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        let (mut fc, mut fd) = (residual(c)?, residual(d)?);
        while b - a > 1e-13 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = residual(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = residual(d)?;
            }
        }
        let u = 0.5 * (a + b);
        if residual(u)? < 1e-8 {
            zeros.push(u);
        }
    }
    Ok(zeros)
}

fn check_one_to_one() -> Result<Outcome> {
    let mut total = 0;
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            let cusps = cusp_parameters(n, t)?;
            let zeros = double_condition_zeros(n, t, 4000)?;
            let matched = |a: &[f64], b: &[f64]| a.iter().all(|x| b.iter().any(|y| (x - y).abs() < 1e-6));
            if zeros.len() != cusps.len() || !matched(&zeros, &cusps) || !matched(&cusps, &zeros) {
                return Ok(Err(format!("{t}, n = {n}: cusps at {cusps:?}, double condition zeros at {zeros:?}")));
            }
            for u in &cusps {
                if !verify_double(n, f_curve(n, *u, t)?)?.verdict {
                    return Ok(Err(format!("{t}, n = {n}: cusp at u = {u} fails the oracle double test")));
                }
            }
            total += cusps.len();
        }
    }
    Ok(Ok(format!("{total} lower-half-plane cusps, n = 3..10, each matched by a double-condition zero within 1e-6")))
}

fn check_imaginary_axis_cusps() -> Result<Outcome> {
    let cases = [(5, EigType::Type1), (9, EigType::Type1), (13, EigType::Type1), (3, EigType::Type2), (7, EigType::Type2), (11, EigType::Type2)];
    let mut detail = Vec::new();
    for (n, t) in cases {
        let on_axis = find_cusps(dim(n), t)?.iter().filter(|c| c.rho0.re().abs() < 1e-8).count();
        detail.push(format!("{t} n={n}: {on_axis}"));
        if on_axis != 2 {
            return Ok(Err(detail.join(", ")));
        }
    }
    Ok(Ok(detail.join(", ")))
}

fn check_no_stray_doubles(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 21);
    let classifiers = (3..=10).map(|n| Classifier::new(dim(n))).collect::<Result<Vec<_>>>()?;
    let mut doubles = 0;
    for _ in 0..200 {
        let cl = &classifiers[rng.gen_range(0..classifiers.len())];
        let rho = loop {
            let z = random_generic_rho(&mut rng, cl.n, 3.0);
            if cl.distance(z) > 1e-3 {
                break z;
            }
        };
        let s = full_spectrum(cl.n, rho, default_borderline_tol(cl.n))?;
        doubles += s.eigenvalues.iter().filter(|e| e.multiplicity > 1).count();
    }
    Ok(verdict(doubles == 0, format!("{doubles} repeated eigenvalues at 200 random off-curve rho")))
}

/// Error ratios of the small-`u` series over three halvings from `u = 0.05`.
pub fn series_ratios(n: Dimension, t: EigType) -> Result<Vec<f64>> {
    let err = |u: f64| -> Result<f64> { Ok((f_curve(n, u, t)? - small_u_series(n, u, t)).norm()) };
    let mut out = Vec::new();
    let mut u = 0.05;
    for _ in 0..3 {
        out.push(err(u)? / err(u / 2.0)?);
        u /= 2.0;
    }
    Ok(out)
}

fn check_series_order() -> Result<Outcome> {
    let mut least = f64::INFINITY;
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            least = series_ratios(n, t)?.into_iter().fold(least, f64::min);
        }
    }
    Ok(verdict(least >= 32.0, format!("smallest error ratio per halving {least:.2} (u^6 gives 64)")))
}

/// Worst relative parabola mismatch `|y^2 - model| / y^2` over traced samples with `0 < |u| < u_max`.
pub fn parabola_mismatch(curve: &TracedCurve, u_max: f64) -> f64 {
    let model = parabola_model(curve.n, curve.eig_type);
    curve
        .samples
        .iter()
        .filter(|s| s.u != 0.0 && s.u.abs() < u_max)
        .map(|s| {
            let y2 = s.rho.im() * s.rho.im();
            (y2 - model.y_squared(s.rho.re())).abs() / y2
        })
        .fold(0.0, f64::max)
}

fn check_parabola() -> Result<Outcome> {
    let worst = parabola_mismatch(&trace_default(dim(7), EigType::Type1)?, 0.1);
    Ok(verdict(worst < 0.05, format!("max relative y^2 mismatch for |u| < 0.1: {worst:.4}")))
}

/// `|lambda + n| / sqrt(|rho - rho0|)` for the eigenvalue nearest `-n` at a
/// point a distance `delta` from the cusp along its bisector.
pub fn puiseux_amplitude(cusp: &CuspReport, delta: f64) -> Result<f64> {
    let dir = Complex64::from_polar(1.0, cusp.bisector_angle);
    let rho = cusp.rho0.0 + delta * dir;
    let roots = block_roots(cusp.n, rho, cusp.eig_type)?;
    let target = Complex64::new(-cusp.n.as_f64(), 0.0);
    let d = roots.iter().map(|z| (z - target).norm()).fold(f64::INFINITY, f64::min);
    Ok(d / delta.sqrt())
}

fn check_puiseux() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            for c in find_cusps(n, t)? {
                let a = puiseux_amplitude(&c, 1e-8)?;
                worst = worst.max((a - c.eta_abs).abs() / c.eta_abs);
            }
        }
    }
    Ok(verdict(worst < 0.05, format!("max relative gap between |eta0| and the oracle split {worst:.3e}")))
}

fn check_cardioid_bisector() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in (3..=10).map(dim) {
        for t in EigType::BOTH {
            for c in find_cusps(n, t)? {
                let d = (c.bisector_angle - c.cardioid.bisector_angle).rem_euclid(2.0 * PI);
                worst = worst.max(d.min(2.0 * PI - d));
            }
        }
    }
    Ok(verdict(worst < 0.02, format!("max angle between fitted and Puiseux bisectors {worst:.2e} rad")))
}

// ---------------------------------------------------------------- classify

fn classify_checks(seed: u64) -> Vec<CheckResult> {
    let classifiers = match (3..=10).map(|n| Classifier::new(dim(n))).collect::<Result<Vec<_>>>() {
        Ok(c) => c,
        Err(e) => return vec![CheckResult::new("trace curves", Err(e))],
    };
    vec![
        CheckResult::new("counting agreement", check_counting(seed, &classifiers, 1000)),
        CheckResult::new("real-axis table", check_real_axis_table()),
        CheckResult::new("label symmetries", check_label_symmetries(seed, &classifiers)),
        CheckResult::new("region labels", check_region_labels(&classifiers)),
        CheckResult::new("single crossing changes one count", check_single_crossings(&classifiers)),
        CheckResult::new("double crossing [0,0] -> [1,1]", check_double_crossings(&classifiers)),
        CheckResult::new("cusp bifurcation n = 7", check_bifurcation_n7()),
    ]
}

/// Compares winding-based counts with the oracle at `per_n` random points
/// of `|rho| <= 3` per dimension, redrawing points within `1e-3` of a curve.
pub fn check_counting(seed: u64, classifiers: &[Classifier], per_n: usize) -> Result<Outcome> {
    let mut rng = rng_for(seed, 31);
    let (mut mismatches, mut fallbacks, mut first) = (0, 0, None);
    for cl in classifiers {
        for _ in 0..per_n {
            let rho = loop {
                let z = random_disk(&mut rng, 3.0);
                if cl.distance(z) > 1e-3 {
                    break z;
                }
            };
            let q = cl.query(rho)?;
            fallbacks += q.oracle_fallback as usize;
            if q.counts != oracle_counts(cl.n, rho)? {
                mismatches += 1;
                first.get_or_insert((cl.n, rho));
            }
        }
    }
    let total = per_n * classifiers.len();
    Ok(verdict(
        mismatches == 0,
        format!("{mismatches} mismatches in {total} points ({fallbacks} oracle fallbacks){}",
            first.map(|(n, z)| format!("; first at n = {n}, rho = {}", format_complex(z))).unwrap_or_default()),
    ))
}

/// The real-axis grid: 200 points of `[-3, 3]` without the crossing points.
pub fn real_axis_grid(n: Dimension) -> Vec<f64> {
    let x = xi(n);
    (0..200)
        .map(|k| -3.0 + 6.0 * k as f64 / 199.0)
        .filter(|r| [1.0, -1.0, x, -x].iter().all(|c| (r - c).abs() > 1e-9))
        .collect()
}

fn check_real_axis_table() -> Result<Outcome> {
    let mut points = 0;
    for n in (2..=10).map(dim) {
        let cl = Classifier::new(n)?;
        for r in real_axis_grid(n) {
            let rho = Complex64::new(r, 0.0);
            let expected = real_axis_counts(n, r);
            let (winding, oracle) = (cl.counts(rho)?, oracle_counts(n, rho)?);
            if winding != expected || oracle != expected {
                return Ok(Err(format!("n = {n}, rho = {r}: table {expected:?}, winding {winding:?}, oracle {oracle:?}")));
            }
            points += 1;
        }
    }
    Ok(Ok(format!("{points} real points, n = 2..10, all match the table")))
}

fn check_label_symmetries(seed: u64, classifiers: &[Classifier]) -> Result<Outcome> {
    let mut rng = rng_for(seed, 32);
    let mut tested = 0;
    for cl in classifiers {
        for _ in 0..200 {
            let rho = random_disk(&mut rng, 3.0);
            if cl.distance(rho) < 1e-3 {
                continue;
            }
            let a = cl.counts(rho)?;
            if cl.counts(rho.conj())? != a {
                return Ok(Err(format!("n = {}: label changes under conjugation at {}", cl.n, format_complex(rho))));
            }
            if cl.n.is_even() && cl.counts(-rho.conj())? != [a[1], a[0]] {
                return Ok(Err(format!("n = {}: label not swapped at {}", cl.n, format_complex(-rho.conj()))));
            }
            tested += 1;
        }
    }
    Ok(Ok(format!("{tested} points: conj keeps labels, -conj swaps them for even n")))
}

fn check_region_labels(classifiers: &[Classifier]) -> Result<Outcome> {
    let mut regions = 0;
    for cl in classifiers {
        let labels = cl.region_labels(200)?;
        let outer = labels.iter().max_by_key(|l| l.cells).map(|l| l.label);
        let origin = cl.counts(Complex64::new(0.0, 0.0))?;
        if outer != Some([1, 1]) || origin != [0, 0] || labels.iter().any(|l| l.oracle_fallback) {
            return Ok(Err(format!("n = {}: outer {outer:?}, origin {origin:?}", cl.n)));
        }
        if cl.n.get() == 5 && !labels.iter().any(|l| l.label == [1, 0] && l.rho.re() > 0.0 && l.rho.im() < 0.0) {
            return Ok(Err("n = 5: no [1,0] region in the lower right".into()));
        }
        regions += labels.len();
    }
    Ok(Ok(format!("{regions} regions over n = 3..10; unbounded [1,1], origin [0,0]")))
}

/// Unit normal of the polyline at sample `i`.
fn normal_at(curve: &TracedCurve, i: usize) -> Complex64 {
    let m = curve.samples.len();
    let tangent = curve.samples[(i + 1) % m].rho.0 - curve.samples[(i + m - 1) % m].rho.0;
    Complex64::i() * tangent / tangent.norm()
}

fn check_single_crossings(classifiers: &[Classifier]) -> Result<Outcome> {
    let mut crossings = 0;
    for cl in classifiers {
        for t in EigType::BOTH {
            let curve = cl.curve(t);
            let other = cl.curve(t.other());
            let cusps = find_cusps(cl.n, t)?;
            let scale = curve.diagonal();
            let m = curve.samples.len();
            for k in 0..20 {
                let i = (k * m) / 20 + m / 40;
                let p = curve.samples[i].rho.0;
                if p.im.abs() < 1e-3 * scale
                    || other.distance(p) < 0.02 * scale
                    || cusps.iter().any(|c| (c.rho0.0 - p).norm() < 0.05 * scale)
                {
                    continue;
                }
                let nrm = normal_at(curve, i);
                let delta = 1e-5 * scale;
                let a = oracle_counts(cl.n, p + delta * nrm)?;
                let b = oracle_counts(cl.n, p - delta * nrm)?;
                let (k1, k2) = (t.index() - 1, t.other().index() - 1);
                if a[k1].abs_diff(b[k1]) != 1 || a[k2] != b[k2] {
                    return Ok(Err(format!("{t}, n = {}: crossing at {} gives {a:?} / {b:?}", cl.n, format_complex(p))));
                }
                crossings += 1;
            }
        }
    }
    Ok(Ok(format!("{crossings} transversal crossings each change exactly one count by 1")))
}

/// Transversal intersections of two polylines: `(point, segment index in a, segment index in b)`.
pub fn curve_intersections(a: &TracedCurve, b: &TracedCurve) -> Vec<(Complex64, usize, usize)> {
    let sa: Vec<_> = a.segments().collect();
    let sb: Vec<_> = b.segments().collect();
    let mut out = Vec::new();
    for (i, &(p0, p1)) in sa.iter().enumerate() {
        let (lo_x, hi_x) = (p0.re.min(p1.re), p0.re.max(p1.re));
        let (lo_y, hi_y) = (p0.im.min(p1.im), p0.im.max(p1.im));
        for (j, &(q0, q1)) in sb.iter().enumerate() {
            if q0.re.max(q1.re) < lo_x || q0.re.min(q1.re) > hi_x || q0.im.max(q1.im) < lo_y || q0.im.min(q1.im) > hi_y {
                continue;
            }
            let (r, s) = (p1 - p0, q1 - q0);
            let den = r.re * s.im - r.im * s.re;
            if den == 0.0 {
                continue;
            }
            let w = q0 - p0;
            let ta = (w.re * s.im - w.im * s.re) / den;
            let tb = (w.re * r.im - w.im * r.re) / den;
            if (0.0..1.0).contains(&ta) && (0.0..1.0).contains(&tb) {
                out.push((p0 + ta * r, i, j));
            }
        }
    }
    out
}

fn check_double_crossings(classifiers: &[Classifier]) -> Result<Outcome> {
    let mut tested = 0;
    for cl in classifiers {
        let (c1, c2) = (&cl.curves[0], &cl.curves[1]);
        let scale = c1.diagonal().max(c2.diagonal());
        let cusps: Vec<Complex64> = EigType::BOTH
            .into_iter()
            .map(|t| find_cusps(cl.n, t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .map(|c| c.rho0.0)
            .collect();
        for (p, i, j) in curve_intersections(c1, c2) {
            let (n1, n2) = (normal_at(c1, i), normal_at(c2, j));
            let angle = (n1.conj() * n2).arg().abs();
            if angle < 0.2 || angle > PI - 0.2 || cusps.iter().any(|c| (c - p).norm() < 0.05 * scale) {
                continue;
            }
            let eps = 1e-5 * scale;
            let mut labels = [[[0usize; 2]; 2]; 2];
            for (a, s1) in [1.0, -1.0].into_iter().enumerate() {
                for (b, s2) in [1.0, -1.0].into_iter().enumerate() {
                    // Offsets along each normal decide the side of that curve.
                    let off = s1 * n1 + s2 * n2;
                    labels[a][b] = oracle_counts(cl.n, p + eps * off / off.norm())?;
                }
            }
            let corner = |l: [usize; 2]| (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).find(|&(a, b)| labels[a][b] == l);
            match (corner([0, 0]), corner([1, 1])) {
                (Some((a0, b0)), Some((a1, b1))) if a0 != a1 && b0 != b1 => tested += 1,
                _ => {
                    return Ok(Err(format!("n = {}: labels {labels:?} around intersection {}", cl.n, format_complex(p))));
                }
            }
        }
    }
    Ok(verdict(tested > 0, format!("{tested} transversal intersections, each with [0,0] opposite [1,1]")))
}

/// Scan through the `n = 7` type-1 cusp near `0.77570-1.49222i` along the
/// bisector, oriented so that `d > 0` leaves the curve's interior.
pub fn scan_n7_cusp(range: (f64, f64), steps: usize) -> Result<ScanResult> {
    let n = dim(7);
    let curve = trace_default(n, EigType::Type1)?;
    let target = Complex64::new(0.77570, -1.49222);
    let cusp = find_cusps(n, EigType::Type1)?
        .into_iter()
        .min_by(|a, b| (a.rho0.0 - target).norm().total_cmp(&(b.rho0.0 - target).norm()))
        .ok_or(Error::EmptyPairs)?;
    let dir = bisector_outward(&curve, &cusp)?;
    scan_path(n, EigType::Type1, cusp.rho0.0, dir, range, steps)
}

/// `(largest ||lambda| - 7| at d = 0, both below 7 for d < 0, exactly one above 7 for d > 0)`.
pub fn bifurcation_n7() -> Result<(f64, bool, bool)> {
    let scan = scan_n7_cusp((-0.02, 0.02), 41)?;
    let mut gap = f64::INFINITY;
    let (mut inside, mut outside) = (true, true);
    for (&d, &(a, b)) in scan.distances.iter().zip(&scan.pair_magnitudes) {
        if d == 0.0 {
            gap = (a - 7.0).abs().max((b - 7.0).abs());
        } else if d < 0.0 {
            inside &= a < 7.0 && b < 7.0;
        } else {
            outside &= (a > 7.0) != (b > 7.0);
        }
    }
    Ok((gap, inside, outside))
}

fn check_bifurcation_n7() -> Result<Outcome> {
    let (gap, inside, outside) = bifurcation_n7()?;
    Ok(verdict(
        gap < 1e-4 && inside && outside,
        format!("|d| <= 0.02: max ||lambda| - 7| at d = 0 {gap:.2e}; both below 7 for d < 0: {inside}; one above for d > 0: {outside}"),
    ))
}

// ---------------------------------------------------------------- oracle

fn oracle_checks(seed: u64) -> Vec<CheckResult> {
    vec![
        CheckResult::new("multiplicities sum to n", check_multiplicity_sum(seed)),
        CheckResult::new("root residual", check_root_residual(seed)),
        CheckResult::new("conjugation map", check_conjugation(seed)),
        CheckResult::new("sign-flip map", check_sign_flip(seed)),
        CheckResult::new("repeated-eigenvalue law", check_repeated_law(seed)),
        CheckResult::new("dense backward error", check_dense_backward_error(seed)),
        CheckResult::new("dense characteristic polynomial", check_char_poly(seed)),
        CheckResult::new("folded blocks vs dense compression", check_fold(seed)),
    ]
}

fn check_multiplicity_sum(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 41);
    for _ in 0..300 {
        let n = dim(rng.gen_range(2..=16));
        let rho = random_disk(&mut rng, 4.0);
        let s = full_spectrum(n, rho, default_borderline_tol(n))?;
        if s.total_multiplicity() != n.get() {
            return Ok(Err(format!("n = {n}, rho = {}: multiplicities sum to {}", format_complex(rho), s.total_multiplicity())));
        }
    }
    Ok(Ok("300 random (n <= 16, |rho| <= 4) spectra".into()))
}

/// Literal residual statistics of the oracle eigenvalues,
/// `|p(lambda)| / (1 + |lambda|^n)`, over random `n <= 16`, `|rho| <= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub spectra: usize,
    pub worst: f64,
    /// Spectra with some residual at or above `1e-9`.
    pub spectra_over: usize,
    /// Roots at or above `1e-9` whose residual is more than 100 times the
    /// binary64 floor: `|p'(lambda)| eps |lambda| / 2` from rounding lambda
    /// itself plus `eps` times the size of the terms summed to evaluate `p`,
    /// both divided by `1 + |lambda|^n`.
    pub above_floor: usize,
    /// Largest floor met.
    pub max_floor: f64,
}

pub fn root_residual_stats(seed: u64, spectra: usize) -> Result<ResidualStats> {
    let mut rng = rng_for(seed, 42);
    let mut st = ResidualStats { spectra, worst: 0.0, spectra_over: 0, above_floor: 0, max_floor: 0.0 };
    for _ in 0..spectra {
        let n = dim(rng.gen_range(2..=16));
        let rho = random_generic_rho(&mut rng, n, 4.0);
        let values = full_spectrum(n, rho, default_borderline_tol(n))?.values();
        let mut hit = false;
        for (i, &lambda) in values.iter().enumerate() {
            let norm = 1.0 + lambda.norm().powi(n.get() as i32);
            let cv = char_value(n, rho, lambda)?;
            let r = cv.p.norm() / norm;
            let dp: Complex64 = values.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| lambda - m).product();
            let floor = f64::EPSILON * (0.5 * dp.norm() * lambda.norm() + cv.p_scale) / norm;
            st.worst = st.worst.max(r);
            st.max_floor = st.max_floor.max(floor);
            if r >= 1e-9 {
                hit = true;
                st.above_floor += (r > 100.0 * floor) as usize;
            }
        }
        st.spectra_over += hit as usize;
    }
    Ok(st)
}

fn check_root_residual(seed: u64) -> Result<Outcome> {
    let st = root_residual_stats(seed, 300)?;
    Ok(verdict(
        st.worst < 1e-9,
        format!(
            "max |p(lambda)| / (1 + |lambda|^n) = {:.3e}; {}/{} spectra reach 1e-9; {} of those roots sit \
             more than 100x above the binary64 rounding floor (largest floor {:.2e})",
            st.worst, st.spectra_over, st.spectra, st.above_floor, st.max_floor
        ),
    ))
}

fn check_conjugation(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 43);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let n = dim(rng.gen_range(2..=16));
        let rho = random_generic_rho(&mut rng, n, 4.0);
        let a = spectrum_split(n, rho)?;
        let b = spectrum_split(n, rho.conj())?;
        for t in EigType::BOTH {
            let conj: Vec<Complex64> = a.of(t).iter().map(|z| z.conj()).collect();
            worst = worst.max(multiset_distance(&conj, b.of(t)));
        }
    }
    Ok(verdict(worst < 1e-9, format!("max typed mismatch between sigma(conj rho) and conj sigma(rho): {worst:.3e}")))
}

fn check_sign_flip(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 44);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let n = dim(rng.gen_range(2..=16));
        let rho = random_generic_rho(&mut rng, n, 4.0);
        let a = spectrum_split(n, rho)?;
        let b = spectrum_split(n, -rho)?;
        for t in EigType::BOTH {
            let image = if n.is_even() { t.other() } else { t };
            worst = worst.max(multiset_distance(a.of(t), b.of(image)));
        }
    }
    Ok(verdict(worst < 1e-9, format!("max mismatch with types swapped iff n even: {worst:.3e}")))
}

fn check_repeated_law(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 45);
    let (mut doubles, mut worst) = (0, 0.0f64);
    for _ in 0..500 {
        let n = dim(rng.gen_range(2..=12));
        let rho = random_generic_rho(&mut rng, n, 3.0);
        if exceptional_rho(n, rho).is_some() {
            continue;
        }
        for e in full_spectrum(n, rho, default_borderline_tol(n))?.eigenvalues {
            if e.multiplicity > 2 {
                return Ok(Err(format!("multiplicity {} at n = {n}, rho = {}", e.multiplicity, format_complex(rho))));
            }
            if e.multiplicity == 2 {
                doubles += 1;
                worst = worst.max((e.value.0 + n.as_f64()).norm() / n.as_f64());
            }
        }
    }
    // Random points essentially never hit a cusp; add the known ones.
    for (n, rho) in [(5, Complex64::new(0.0, 2.0)), (5, Complex64::new(0.0, -2.0))] {
        let n = dim(n);
        for e in full_spectrum(n, rho, default_borderline_tol(n))?.eigenvalues {
            if e.multiplicity == 2 {
                doubles += 1;
                worst = worst.max((e.value.0 + n.as_f64()).norm() / n.as_f64());
            }
        }
    }
    Ok(verdict(doubles >= 2 && worst < 1e-7, format!("{doubles} double eigenvalues, max |lambda + n| / n = {worst:.3e}")))
}

fn check_dense_backward_error(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 46);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let n = dim(rng.gen_range(2..=16));
        let rho = random_generic_rho(&mut rng, n, 4.0);
        let k = build_kms(n, rho).entries;
        let scale = k.inf_norm();
        let s = spectrum_split(n, rho)?;
        for &lambda in s.type1.iter().chain(&s.type2) {
            // The Newton correction 1 / tr((lambda I - K)^{-1}) on the dense matrix.
            if let Some(tr) = k.resolvent_trace(lambda) {
                worst = worst.max((1.0 / tr).norm() / scale);
            }
        }
    }
    Ok(verdict(worst < 1e-12, format!("max dense Newton correction / |K| at the block roots: {worst:.3e}")))
}

/// Coefficients of `prod (x - z_i)` and of `prod (x + |z_i|)`, the latter
/// bounding the size of each coefficient's terms.
fn expand_roots(z: &[Complex64]) -> (Vec<Complex64>, Vec<f64>) {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    let mut a = vec![1.0];
    for r in z {
        let mut nc = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        let mut na = vec![0.0; a.len() + 1];
        for i in 0..c.len() {
            nc[i] += c[i];
            nc[i + 1] -= c[i] * r;
            na[i] += a[i];
            na[i + 1] += a[i] * r.norm();
        }
        c = nc;
        a = na;
    }
    (c, a)
}

fn check_char_poly(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 48);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let n = dim(rng.gen_range(2..=6));
        let rho = random_generic_rho(&mut rng, n, 2.0);
        let p = char_poly(n, rho)?;
        let s = spectrum_split(n, rho)?;
        let roots: Vec<Complex64> = s.type1.iter().chain(&s.type2).copied().collect();
        let (c, a) = expand_roots(&roots);
        for i in 0..=n.get() {
            worst = worst.max((p.coeffs[i] - c[i]).norm() / a[i]);
        }
        let dense: Vec<Complex64> = poly_roots(&p, 1e-14)?
            .into_iter()
            .flat_map(|r| std::iter::repeat(r.value.0).take(r.multiplicity))
            .collect();
        if dense.len() != n.get() {
            return Ok(Err(format!("n = {n}: {} roots of the dense polynomial", dense.len())));
        }
    }
    Ok(verdict(
        worst < 1e-9,
        format!("n <= 6, |rho| <= 2: max coefficient gap to the block-root expansion {worst:.3e} of its term size"),
    ))
}

fn check_fold(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 47);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = dim(rng.gen_range(2..=12));
        let rho = random_generic_rho(&mut rng, n, 2.0);
        let k = build_kms(n, rho).entries;
        for t in EigType::BOTH {
            let block = fold_dense(&k, t);
            let roots = block_roots(n, rho, t)?;
            let prod: Complex64 = roots.iter().product();
            let trace: Complex64 = roots.iter().sum();
            let (det, tr) = (block.determinant(), block.trace());
            worst = worst.max((prod - det).norm() / det.norm().max(1e-300));
            worst = worst.max((trace - tr).norm() / (1.0 + tr.norm()));
        }
    }
    Ok(verdict(worst < 1e-8, format!("max relative det/trace mismatch of the dense compressions {worst:.3e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::MODULES) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
        assert_eq!(Suite::All.expand().len(), 5);
    }

    #[test]
    fn multiset_distance_matches_permutations() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)];
        let b = [a[1], a[0]];
        assert_eq!(multiset_distance(&a, &b), 0.0);
        assert_eq!(multiset_distance(&a, &b[..1]), f64::INFINITY);
    }

    #[test]
    fn real_axis_grid_skips_crossings() {
        let g = real_axis_grid(dim(2));
        assert_eq!(g.len(), 198);
        assert!(g.iter().all(|r| (r.abs() - 3.0).abs() > 1e-9));
    }

    #[test]
    fn intersections_of_crossing_squares() {
        let square = |c: Complex64, t| TracedCurve {
            eig_type: t,
            n: dim(2),
            samples: [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
                .iter()
                .map(|&(x, y)| {
                    let z = c + Complex64::new(x, y);
                    crate::borderline::CurveSample {
                        eig_type: t,
                        u: 0.0,
                        v: 0.0,
                        rho: crate::complex::ComplexPoint(z),
                        lambda: crate::complex::ComplexPoint(z),
                        drho_du: crate::complex::ComplexPoint(z),
                    }
                })
                .collect(),
            closed: true,
        };
        let a = square(Complex64::new(0.0, 0.0), EigType::Type1);
        let b = square(Complex64::new(1.0, 0.5), EigType::Type2);
        assert_eq!(curve_intersections(&a, &b).len(), 2);
    }
}
