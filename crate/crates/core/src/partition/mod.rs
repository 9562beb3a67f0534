//! From a spectral embedding to `k` disjoint low-expansion sets.
//!
//! The stages, in pipeline order:
//!
//! 1. [`metric`]: the radial pseudo-metric `d_F` on cells.
//! 2. [`grid`]: randomly shifted, shrunk cubes on the unit sphere cut the
//!    embedded cells into well-separated groups of bounded mass.
//! 3. [`merge`]: light groups are merged pairwise until `k` groups of mass at
//!    least 1/2 remain.
//! 4. [`localize`]: a Lipschitz cutoff around each group gives `k` disjointly
//!    supported functions of small Rayleigh quotient.
//! 5. [`sweep`]: a threshold cut of each function gives a set of small
//!    expansion inside its support.
//!
//! The mass of a set `A` is `(1/n) sum_{x in A} |F(x)|^2 d_x`.

pub mod grid;
pub mod localize;
pub mod merge;
pub mod metric;
pub mod sweep;

pub use grid::{
    sample_shift, separated_family, shifted_grid_family, GridShift, SearchConfig, SeparatedFamily,
    SeparationSearch,
};
pub use localize::{
    localize, localized_rayleigh_certificate, LocalizationCertificate, LocalizedFamily,
};
pub use merge::{merge_to_k, MergedFamily};
pub use metric::{distance_to_set, min_pairwise_separation, radial_distance};
pub use sweep::{sweep_cut, SweepCut, SweepStep};

use crate::graphon::{CellSet, StepGraphon};
use crate::spectral::Embedding;
use crate::sum;

/// Required separation `1 / (4 sqrt(5) k^3)` between distinct groups.
pub fn separation_bound(k: usize) -> f64 {
    let k = k as f64;
    1.0 / (4.0 * 5f64.sqrt() * k * k * k)
}

/// Upper bound `1 + 1/(4k)` on the mass of a single group.
pub fn group_mass_bound(k: usize) -> f64 {
    1.0 + 1.0 / (4.0 * k as f64)
}

/// Required total mass `k - 1/4` of the separated groups.
pub fn total_mass_threshold(k: usize) -> f64 {
    k as f64 - 0.25
}

/// `(1/n) sum_{x in A} |F(x)|^2 d_x`.
pub fn mass(w: &StepGraphon, emb: &Embedding, set: &CellSet) -> f64 {
    sum::sum(set.iter().map(|x| emb.norm(x).powi(2) * w.degree(x))) / w.n() as f64
}
