//! Full typed spectrum of `K_n(rho)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::blocks::block_roots;
use super::roots::cluster_roots;
use crate::complex::ComplexPoint;
use crate::error::Result;
use crate::matrix::{Dimension, EigType};
use crate::relations::{classify_eigenvalue, EigenClass};

/// One distinct eigenvalue of a given type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEntry {
    pub value: ComplexPoint,
    pub multiplicity: usize,
    #[serde(rename = "type")]
    pub eig_type: EigType,
    pub class: EigenClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub rho: ComplexPoint,
    pub eigenvalues: Vec<SpectralEntry>,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Number of type-`t` eigenvalues with `|lambda| > n`, with multiplicity.
    pub fn extraordinary_count(&self, t: EigType) -> usize {
        self.eigenvalues
            .iter()
            .filter(|e| e.eig_type == t && e.class == EigenClass::Extraordinary)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Every eigenvalue repeated according to its multiplicity.
    pub fn values(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat(e.value.0).take(e.multiplicity))
            .collect()
    }
}

/// Raw eigenvalues of the two blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpectrum {
    pub type1: Vec<Complex64>,
    pub type2: Vec<Complex64>,
}

impl SplitSpectrum {
    pub fn of(&self, t: EigType) -> &[Complex64] {
        match t {
            EigType::Type1 => &self.type1,
            EigType::Type2 => &self.type2,
        }
    }
}

pub fn spectrum_split(n: Dimension, rho: Complex64) -> Result<SplitSpectrum> {
    Ok(SplitSpectrum {
        type1: block_roots(n, rho, EigType::Type1)?,
        type2: block_roots(n, rho, EigType::Type2)?,
    })
}

/// Typed spectrum with multiplicities and ordinary/borderline/extraordinary
/// classes. `tol` is the width of the borderline band.
///
/// Repeated roots are merged within each type only. An eigenvalue shared
/// by both types (as at `rho = 0` or `rho = ±1`) appears once per type.
pub fn full_spectrum(n: Dimension, rho: Complex64, tol: f64) -> Result<SpectrumReport> {
    let split = spectrum_split(n, rho)?;
    let mut eigenvalues = Vec::with_capacity(n.get());
    for t in EigType::BOTH {
        let mut groups = cluster_roots(split.of(t));
        groups.sort_by(|a, b| {
            b.value.0.norm().total_cmp(&a.value.0.norm()).then(a.value.re().total_cmp(&b.value.re()))
        });
        for g in groups {
            eigenvalues.push(SpectralEntry {
                value: g.value,
                multiplicity: g.multiplicity,
                eig_type: t,
                class: classify_eigenvalue(g.value.0, n, tol),
            });
        }
    }
    Ok(SpectrumReport { n: n.get(), rho: ComplexPoint(rho), eigenvalues })
}
