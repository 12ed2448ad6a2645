//! Independent dense-spectrum oracle for `K_n(rho)`: characteristic
//! polynomial, simultaneous root iteration, multiplicities and the
//! type split by centrosymmetric folding.

mod blocks;
mod charpoly;
mod roots;
mod spectrum;

pub use blocks::{block_roots, block_size, char_value, fold_dense, CharValue};
pub use charpoly::{char_poly, poly_roots, raw_poly_roots, CharPoly, CHARPOLY_SELF_CHECK};
pub use roots::{cluster_radius, cluster_roots, Root};
pub use spectrum::{full_spectrum, spectrum_split, SpectralEntry, SpectrumReport, SplitSpectrum};
