//! The JSON report written by every subcommand.

use graphon_cheeger::partition::{SweepCut, SweepStep};
use graphon_cheeger::pipeline::Certificates;
use graphon_cheeger::{CellSet, OracleResult, PartitionResult, TheoremReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    /// `preset` or `file`.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub n: usize,
    pub require_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub k: usize,
    /// `lambda_1..lambda_min(k, n)` of the step-space problem.
    pub discrete: Vec<f64>,
    /// `lambda_1..lambda_k` over all of `L^2`; entries past `n` are 1.
    pub graphon: Vec<f64>,
}

impl SpectrumSection {
    pub fn new(k: usize, mut full_discrete: Vec<f64>) -> Self {
        full_discrete.truncate(k);
        let graphon = (0..k)
            .map(|j| full_discrete.get(j).map_or(1.0, |l| l.min(1.0)))
            .collect();
        Self {
            k,
            discrete: full_discrete,
            graphon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSection {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub sets: Vec<Vec<usize>>,
    pub expansions: Vec<f64>,
    pub h_alg: f64,
    /// `sqrt(8000) k^3.5 sqrt(lambda_k)`.
    pub bound: f64,
    pub lambda_discrete: f64,
    pub lambda_graphon: f64,
    pub observed_ratio: Option<f64>,
    pub certificates: Certificates,
}

impl From<&PartitionResult> for PartitionSection {
    fn from(r: &PartitionResult) -> Self {
        Self {
            k: r.k,
            n: r.n,
            seed: r.seed,
            sets: r.sets.iter().map(|s| s.members().to_vec()).collect(),
            expansions: r.expansions.clone(),
            h_alg: r.h_alg,
            bound: r.upper_bound,
            lambda_discrete: r.lambda_discrete,
            lambda_graphon: r.lambda_graphon,
            observed_ratio: r.observed_ratio,
            certificates: r.certificates.clone(),
        }
    }
}

impl PartitionSection {
    pub fn to_result(&self) -> Result<PartitionResult> {
        let sets = self
            .sets
            .iter()
            .map(|members| CellSet::new(self.n, members.iter().copied()))
            .collect::<graphon_cheeger::Result<Vec<_>>>()?;
        Ok(PartitionResult {
            k: self.k,
            n: self.n,
            seed: self.seed,
            sets,
            expansions: self.expansions.clone(),
            h_alg: self.h_alg,
            lambda_discrete: self.lambda_discrete,
            lambda_graphon: self.lambda_graphon,
            upper_bound: self.bound,
            observed_ratio: self.observed_ratio,
            certificates: self.certificates.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub k: usize,
    pub h_exact_cellwise: f64,
    pub witness: Vec<Vec<usize>>,
    pub enumerated_count: u64,
}

impl From<&OracleResult> for OracleSection {
    fn from(o: &OracleResult) -> Self {
        Self {
            k: o.k,
            h_exact_cellwise: o.h_exact_cellwise,
            witness: o.witness.iter().map(|s| s.members().to_vec()).collect(),
            enumerated_count: o.enumerated_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSection {
    /// `eigenfunction:j` or `file`.
    pub function: String,
    pub set: Vec<usize>,
    pub expansion: f64,
    pub rayleigh: f64,
    /// `sqrt(2 R(g))`.
    pub bound: f64,
    pub best: usize,
    pub profile: Vec<SweepStep>,
}

impl SweepSection {
    pub fn new(function: String, cut: &SweepCut) -> Self {
        Self {
            function,
            set: cut.set.members().to_vec(),
            expansion: cut.expansion,
            rayleigh: cut.rayleigh,
            bound: cut.bound,
            best: cut.best,
            profile: cut.profile.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<TheoremReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl Report {
    pub fn new(input: InputInfo) -> Self {
        Self {
            input,
            spectrum: None,
            partition: None,
            oracle: None,
            verify: None,
            sweep: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}
