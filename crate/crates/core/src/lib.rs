//! Higher-order Cheeger inequalities for step graphons.
//!
//! A step graphon `W` on `n` uniform cells is a symmetric kernel with values
//! in `[0, 1]`. This crate computes the bottom of its Laplacian spectrum
//! `lambda_1 <= ... <= lambda_k`, the k-way expansion of cell sets, and
//! constructs `k` disjoint sets `A_1, ..., A_k` with
//!
//! ```text
//! lambda_k / 2  <=  max_i h(A_i)  <=  sqrt(8000) k^3.5 sqrt(lambda_k)
//! ```
//!
//! through a randomized rounding of the spectral embedding. Every stage emits
//! a certificate of its quantitative guarantee.
//!
//! ```
//! use graphon_cheeger::{k_way_partition, PartitionConfig, StepGraphon};
//!
//! let w = StepGraphon::new(vec![vec![1.0; 16]; 16], true).unwrap();
//! let result = k_way_partition(&w, 2, 7, &PartitionConfig::default()).unwrap();
//! assert!(result.h_alg <= result.upper_bound);
//! assert!(result.lambda_graphon / 2.0 <= result.h_alg + 1e-10);
//! ```

pub mod error;
pub mod graphon;
pub mod partition;
pub mod pipeline;
pub mod random;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
pub use graphon::{CellSet, StepGraphon, VertexFunction};
pub use pipeline::{
    brute_force_hk, buser_check, k_way_partition, verify_theorem, OracleResult, PartitionConfig,
    PartitionResult, TheoremReport,
};
pub use spectral::{build_embedding, eigen_k, lambda_k_graphon, Embedding, LambdaK, SpectralBasis};
