//! Threshold (sweep) cuts.
//!
//! For `g != 0` the level sets `A_t = {x : g(x)^2 > t}` are nested and only
//! change at the distinct values of `g^2`, so it suffices to scan the prefix
//! sets obtained by adding cells in order of decreasing `g^2`. Averaging over
//! `t` shows that the best prefix has expansion at most `sqrt(2 R(g))`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon, VertexFunction};
use crate::sum::Compensated;

/// One prefix set of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStep {
    /// The value `v` of `g^2` defining the prefix `{x : g(x)^2 >= v}`.
    pub threshold: f64,
    pub size: usize,
    /// `None` when the prefix has zero volume.
    pub expansion: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCut {
    pub set: CellSet,
    /// Expansion of `set`, recomputed directly from the kernel.
    pub expansion: f64,
    pub rayleigh: f64,
    /// `sqrt(2 R(g))`.
    pub bound: f64,
    /// Prefixes in order of decreasing threshold.
    pub profile: Vec<SweepStep>,
    /// Index into `profile` of the returned set.
    pub best: usize,
}

/// Returns the prefix set of minimal expansion (ties: the smaller set).
pub fn sweep_cut(w: &StepGraphon, g: &VertexFunction) -> Result<SweepCut> {
    let n = w.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.n(),
        });
    }
    let rayleigh = w.rayleigh(g)?;
    let squares: Vec<f64> = g.values().iter().map(|v| v * v).collect();
    let mut order: Vec<usize> = (0..n).filter(|&x| squares[x] > 0.0).collect();
    order.sort_by(|&a, &b| {
        squares[b]
            .partial_cmp(&squares[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });

    let scale = 1.0 / (n * n) as f64;
    let mut in_set = vec![false; n];
    let mut cut = Compensated::new();
    let mut volume = Compensated::new();
    let mut profile = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    let mut pos = 0;
    while pos < order.len() {
        let threshold = squares[order[pos]];
        while pos < order.len() && squares[order[pos]] == threshold {
            let x = order[pos];
            let row = w.row(x);
            let mut delta = Compensated::new();
            for (j, &k) in row.iter().enumerate() {
                if j == x {
                    continue;
                }
                delta.add(if in_set[j] { -k } else { k });
            }
            cut.add(delta.value());
            volume.add(w.degree(x));
            in_set[x] = true;
            pos += 1;
        }
        let vol = volume.value() / n as f64;
        let expansion = if vol > 0.0 {
            // The full set has no boundary.
            let c = if pos == n {
                0.0
            } else {
                cut.value().max(0.0) * scale
            };
            Some(c / vol)
        } else {
            None
        };
        if let Some(h) = expansion {
            if best.is_none_or(|(_, b)| h < b) {
                best = Some((profile.len(), h));
            }
        }
        profile.push(SweepStep {
            threshold,
            size: pos,
            expansion,
        });
    }

    let (best, _) = best.ok_or(Error::ZeroVolume)?;
    let set = CellSet::new(n, order[..profile[best].size].iter().copied())?;
    let expansion = w.expansion(&set)?;
    Ok(SweepCut {
        set,
        expansion,
        rayleigh,
        bound: (2.0 * rayleigh).sqrt(),
        profile,
        best,
    })
}
