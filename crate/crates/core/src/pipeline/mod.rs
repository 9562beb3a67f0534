//! End-to-end k-way partitioning with certificates for every stage.

mod oracle;
mod verify;

pub use oracle::{brute_force_hk, OracleResult, DEFAULT_ORACLE_LIMIT};
pub use verify::{buser_check, verify_theorem, BuserReport, Check, TheoremReport, CHECK_TOLERANCE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon};
use crate::partition::{
    group_mass_bound, localize, localized_rayleigh_certificate, merge_to_k, separated_family,
    separation_bound, sweep_cut, total_mass_threshold, GridShift, SearchConfig,
};
use crate::spectral::{build_embedding, eigen_k, graphon_lambda};

/// Tolerance on the per-set sweep bound `h(A_i) <= sqrt(2 R(g_i))`.
pub const SWEEP_TOLERANCE: f64 = 1e-10;

/// `sqrt(8000) k^3.5`, the factor in `h_W(k) <= sqrt(8000) k^3.5 sqrt(lambda_k)`.
pub fn upper_constant(k: usize) -> f64 {
    8000f64.sqrt() * (k as f64).powf(3.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub max_tries: usize,
    pub slack: f64,
    pub allow_shortfall: bool,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            max_tries: 64,
            slack: 0.0,
            allow_shortfall: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub shift: GridShift,
    pub tries: usize,
    pub accepted: bool,
    pub group_masses: Vec<f64>,
    pub total_mass: f64,
    pub total_mass_threshold: f64,
    pub min_separation: Option<f64>,
    pub separation_bound: f64,
    pub group_mass_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub masses: Vec<f64>,
    pub min_separation: Option<f64>,
    pub merges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRecord {
    pub delta: f64,
    pub support_sizes: Vec<usize>,
    pub norms_sq: Vec<f64>,
    pub rayleighs: Vec<f64>,
    pub max_basis_rayleigh: f64,
    /// `4000 k^7 lambda_k` (discrete).
    pub rayleigh_bound: f64,
    pub lipschitz_slacks: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    /// `sqrt(2 R(g_i))`.
    pub bounds: Vec<f64>,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub separation: SeparationRecord,
    pub merge: MergeRecord,
    pub localization: LocalizationRecord,
    pub sweep: SweepRecord,
}

/// The outcome of [`k_way_partition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub sets: Vec<CellSet>,
    pub expansions: Vec<f64>,
    /// `max_i h(A_i)`.
    pub h_alg: f64,
    pub lambda_discrete: f64,
    pub lambda_graphon: f64,
    /// `sqrt(8000) k^3.5 sqrt(lambda_discrete)`.
    pub upper_bound: f64,
    /// `h_alg / sqrt(lambda_discrete)`, absent when `lambda_discrete = 0`.
    pub observed_ratio: Option<f64>,
    pub certificates: Certificates,
}

/// Spectral basis, shifted-grid separation, merging, localization and one
/// sweep cut per localized function.
pub fn k_way_partition(
    w: &StepGraphon,
    k: usize,
    seed: u64,
    config: &PartitionConfig,
) -> Result<PartitionResult> {
    let n = w.n();
    let basis = eigen_k(w, k)?;
    let emb = build_embedding(&basis);

    let search = separated_family(
        w,
        &emb,
        &SearchConfig {
            seed,
            max_tries: config.max_tries,
            slack: config.slack,
            allow_shortfall: config.allow_shortfall,
        },
    )?;
    let family = &search.family;
    let separation = SeparationRecord {
        shift: family.shift.clone(),
        tries: search.tries,
        accepted: search.accepted,
        group_masses: family.masses.clone(),
        total_mass: family.total_mass,
        total_mass_threshold: total_mass_threshold(k),
        min_separation: family.min_separation,
        separation_bound: separation_bound(k),
        group_mass_bound: group_mass_bound(k),
    };

    let merged = merge_to_k(family, k, &emb)?;
    let localized = localize(w, &emb, &merged.sets)?;
    let cert = localized_rayleigh_certificate(w, &emb, &localized, &basis)?;

    let mut sets = Vec::with_capacity(k);
    let mut expansions = Vec::with_capacity(k);
    let mut bounds = Vec::with_capacity(k);
    for (i, g) in localized.functions.iter().enumerate() {
        let cut = sweep_cut(w, g)?;
        if !cut.set.is_subset(&localized.supports[i]) {
            return Err(Error::CertificateViolation(format!(
                "sweep set {i} leaves its support"
            )));
        }
        if cut.expansion > cut.bound + SWEEP_TOLERANCE {
            return Err(Error::CertificateViolation(format!(
                "sweep set {i} has expansion {} above sqrt(2 R(g)) = {}",
                cut.expansion, cut.bound
            )));
        }
        expansions.push(cut.expansion);
        bounds.push(cut.bound);
        sets.push(cut.set);
    }

    let lambda_discrete = basis.lambda_max();
    let h_alg = expansions.iter().copied().fold(0.0, f64::max);
    let upper_bound = upper_constant(k) * lambda_discrete.sqrt();
    if h_alg > upper_bound + SWEEP_TOLERANCE {
        return Err(Error::CertificateViolation(format!(
            "h_alg = {h_alg} exceeds the upper bound {upper_bound}"
        )));
    }

    let certificates = Certificates {
        separation,
        merge: MergeRecord {
            masses: merged.masses.clone(),
            min_separation: merged.min_separation,
            merges: merged.merges,
        },
        localization: LocalizationRecord {
            delta: localized.delta,
            support_sizes: localized.supports.iter().map(CellSet::len).collect(),
            norms_sq: cert.entries.iter().map(|e| e.norm_sq).collect(),
            rayleighs: cert.entries.iter().map(|e| e.rayleigh).collect(),
            max_basis_rayleigh: cert.max_basis_rayleigh,
            rayleigh_bound: cert.entries.first().map_or(0.0, |e| e.bound),
            lipschitz_slacks: cert.entries.iter().map(|e| e.lipschitz_slack).collect(),
        },
        sweep: SweepRecord {
            bounds,
            sizes: sets.iter().map(CellSet::len).collect(),
        },
    };

    Ok(PartitionResult {
        k,
        n,
        seed,
        sets,
        expansions,
        h_alg,
        lambda_discrete,
        lambda_graphon: graphon_lambda(Some(lambda_discrete)),
        upper_bound,
        observed_ratio: (lambda_discrete > 0.0).then(|| h_alg / lambda_discrete.sqrt()),
        certificates,
    })
}

/// Whether the sets of a result are pairwise disjoint and nonempty.
pub fn sets_are_valid(sets: &[CellSet]) -> bool {
    sets.iter().all(|s| !s.is_empty())
        && sets
            .iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| a.is_disjoint(b)))
}
