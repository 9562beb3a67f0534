//! Both directions of the higher-order Cheeger inequality, checked on
//! concrete objects.

use serde::{Deserialize, Serialize};

use super::oracle::OracleResult;
use super::{upper_constant, PartitionResult};
use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon};
use crate::spectral::lambda_k_graphon;

/// Absolute tolerance on every inequality check.
pub const CHECK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Checked as `lhs <= rhs + CHECK_TOLERANCE`.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl Check {
    fn le(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack: rhs - lhs,
            passed: lhs <= rhs + tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub k: usize,
    pub lambda_discrete: f64,
    pub lambda_graphon: f64,
    pub h_alg: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Re-derives `lambda_k` and the set expansions from `w` and checks
///
/// * `lambda_k / 2 <= h_alg` (graphon `lambda_k`),
/// * `h_alg <= sqrt(8000) k^3.5 sqrt(lambda_k)` (discrete `lambda_k`),
/// * with an oracle, `lambda_k / 2 <= h_cellwise <= h_alg`,
///
/// plus consistency of the stored values with the recomputed ones.
pub fn verify_theorem(
    w: &StepGraphon,
    k: usize,
    result: &PartitionResult,
    oracle: Option<&OracleResult>,
) -> Result<TheoremReport> {
    if result.k != k || result.sets.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: result.sets.len(),
        });
    }
    if let Some(o) = oracle {
        if o.k != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: o.k,
            });
        }
    }
    let lambda = lambda_k_graphon(w, k)?;
    let lambda_discrete = lambda.discrete.ok_or(Error::KTooLarge { k, n: w.n() })?;
    let lambda_graphon = lambda.graphon;

    let mut checks = Vec::new();
    let disjoint = super::sets_are_valid(&result.sets);
    checks.push(Check {
        name: "sets_disjoint_nonempty".into(),
        lhs: 0.0,
        rhs: 0.0,
        slack: 0.0,
        passed: disjoint,
    });
    let expansions = result
        .sets
        .iter()
        .map(|s| w.expansion(s))
        .collect::<Result<Vec<_>>>()?;
    let h_alg = expansions.iter().copied().fold(0.0, f64::max);
    let drift = expansions
        .iter()
        .zip(&result.expansions)
        .map(|(a, b)| (a - b).abs())
        .fold((h_alg - result.h_alg).abs(), f64::max);
    checks.push(Check::le("stored_expansions_match", drift, 0.0, 1e-12));
    checks.push(Check::le(
        "stored_lambda_matches",
        (lambda_discrete - result.lambda_discrete).abs(),
        0.0,
        1e-9,
    ));

    checks.push(Check::le(
        "lower: lambda_k/2 <= h_alg",
        lambda_graphon / 2.0,
        h_alg,
        CHECK_TOLERANCE,
    ));
    checks.push(Check::le(
        "upper: h_alg <= sqrt(8000) k^3.5 sqrt(lambda_k)",
        h_alg,
        upper_constant(k) * lambda_discrete.sqrt(),
        CHECK_TOLERANCE,
    ));
    if let Some(o) = oracle {
        checks.push(Check::le(
            "oracle lower: lambda_k/2 <= h_cellwise",
            lambda_graphon / 2.0,
            o.h_exact_cellwise,
            CHECK_TOLERANCE,
        ));
        checks.push(Check::le(
            "oracle upper: h_cellwise <= h_alg",
            o.h_exact_cellwise,
            h_alg,
            CHECK_TOLERANCE,
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(TheoremReport {
        k,
        lambda_discrete,
        lambda_graphon,
        h_alg,
        checks,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuserReport {
    pub k: usize,
    pub lambda_graphon: f64,
    pub max_expansion: f64,
    /// `2 max_i h(A_i) - lambda_k`.
    pub slack: f64,
    pub passed: bool,
}

/// Checks `lambda_k <= 2 max_i h(A_i)` for a tuple of disjoint nonempty sets.
pub fn buser_check(w: &StepGraphon, tuple: &[CellSet]) -> Result<BuserReport> {
    if tuple.is_empty() {
        return Err(Error::InvalidK);
    }
    for a in tuple {
        if a.n() != w.n() {
            return Err(Error::DimensionMismatch {
                expected: w.n(),
                found: a.n(),
            });
        }
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    for (i, a) in tuple.iter().enumerate() {
        for b in &tuple[i + 1..] {
            if let Some(cell) = a.iter().find(|&x| b.contains(x)) {
                return Err(Error::OverlappingSets { cell });
            }
        }
    }
    let k = tuple.len();
    let lambda_graphon = lambda_k_graphon(w, k)?.graphon;
    let max_expansion = tuple
        .iter()
        .map(|a| w.expansion(a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let slack = 2.0 * max_expansion - lambda_graphon;
    Ok(BuserReport {
        k,
        lambda_graphon,
        max_expansion,
        slack,
        passed: slack >= -CHECK_TOLERANCE,
    })
}
