//! Exhaustive `h_W(k)` at cell granularity.
//!
//! Every assignment of cells to `{unassigned, 1, ..., k}` with all `k`
//! classes nonempty is scored by its worst expansion. The minimum is an upper
//! bound for the true `h_W(k)` (sub-cell splits are not explored) and a lower
//! bound for the worst expansion of any cell-level k-tuple, in particular
//! the pipeline's.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon};

/// `3^12`: admits `n <= 12` for `k = 2` and `n <= 9` for `k = 3`.
pub const DEFAULT_ORACLE_LIMIT: u128 = 531_441;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub k: usize,
    pub h_exact_cellwise: f64,
    pub witness: Vec<CellSet>,
    /// Number of admissible tuples scored.
    pub enumerated_count: u64,
}

pub fn brute_force_hk(w: &StepGraphon, k: usize, limit: u128) -> Result<OracleResult> {
    let n = w.n();
    if k == 0 {
        return Err(Error::InvalidK);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let base = k + 1;
    let count = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > limit {
        return Err(Error::TooLarge { count, limit });
    }

    let unassigned = k;
    let mut labels = vec![0usize; n];
    let mut cut = vec![0.0; k];
    let mut volume = vec![0.0; k];
    let mut sizes = vec![0usize; k];
    let mut best = f64::INFINITY;
    let mut best_labels: Option<Vec<usize>> = None;
    let mut enumerated = 0u64;
    loop {
        sizes.iter_mut().for_each(|s| *s = 0);
        for &l in &labels {
            if l != unassigned {
                sizes[l] += 1;
            }
        }
        if sizes.iter().all(|&s| s > 0) {
            enumerated += 1;
            cut.iter_mut().for_each(|c| *c = 0.0);
            volume.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..n {
                let c = labels[i];
                if c == unassigned {
                    continue;
                }
                volume[c] += w.degree(i);
                let row = w.row(i);
                for j in 0..n {
                    if labels[j] != c {
                        cut[c] += row[j];
                    }
                }
            }
            let worst = cut
                .iter()
                .zip(&volume)
                .map(|(c, v)| {
                    if *v > 0.0 {
                        c / (n as f64 * v)
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max);
            if worst < best {
                best = worst;
                best_labels = Some(labels.clone());
            }
        }

        // odometer, cell 0 least significant
        let mut pos = 0;
        loop {
            if pos == n {
                let labels = best_labels.ok_or(Error::ZeroVolume)?;
                let witness = (0..k)
                    .map(|c| CellSet::from_mask(labels.iter().map(|&l| l == c).collect()))
                    .collect();
                return Ok(OracleResult {
                    k,
                    h_exact_cellwise: best,
                    witness,
                    enumerated_count: enumerated,
                });
            }
            labels[pos] += 1;
            if labels[pos] < base {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}
