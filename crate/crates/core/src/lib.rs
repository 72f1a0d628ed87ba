//! Exact invariants of weighted homogeneous k-liminal hypersurface
//! singularities: classification, spectra, graded cohomology on weighted
//! projective hypersurfaces, and the first order smoothing obstruction.

pub mod catalog;
pub mod cohomology;
pub mod linalg;
pub mod obstruction;
pub mod poly;
pub mod rational;
pub mod spectrum;
pub mod weights;

pub use catalog::CatalogError;
pub use cohomology::CohomologyError;
pub use obstruction::ObstructionError;
pub use spectrum::SpectrumError;
pub use weights::WeightError;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
