//! Greedy merging of light groups.
//!
//! While at least two groups have mass below 1/2, the two lightest are
//! replaced by their union. With total mass at least `k - 1/4` and every
//! input group of mass at most `1 + 1/(4k)`, at least `k` groups of mass 1/2
//! or more survive. Merging never brings cells of distinct groups closer, so
//! the separation of the input family carries over.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::grid::SeparatedFamily;
use super::metric::min_pairwise_separation;
use crate::error::{Error, Result};
use crate::graphon::CellSet;
use crate::spectral::Embedding;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedFamily {
    /// `k` disjoint sets ordered by smallest cell.
    pub sets: Vec<CellSet>,
    pub masses: Vec<f64>,
    pub min_separation: Option<f64>,
    /// Number of union steps performed.
    pub merges: usize,
}

fn by_mass_then_first(a: &(CellSet, f64), b: &(CellSet, f64)) -> Ordering {
    a.1.partial_cmp(&b.1)
        .unwrap_or(Ordering::Equal)
        .then(a.0.first().cmp(&b.0.first()))
}

/// Merges the groups of `family` down to `k` sets of mass at least 1/2.
pub fn merge_to_k(family: &SeparatedFamily, k: usize, emb: &Embedding) -> Result<MergedFamily> {
    let groups = family
        .sets
        .iter()
        .cloned()
        .zip(family.masses.iter().copied())
        .collect();
    let (selected, merges) = merge_groups(groups, k)?;
    let (sets, masses): (Vec<_>, Vec<_>) = selected.into_iter().unzip();
    let min_separation = min_pairwise_separation(emb, &sets);
    Ok(MergedFamily {
        sets,
        masses,
        min_separation,
        merges,
    })
}

/// The merge loop on `(set, mass)` pairs. Returns the selected `k` groups,
/// ordered by smallest cell, and the number of unions performed.
pub fn merge_groups(
    mut groups: Vec<(CellSet, f64)>,
    k: usize,
) -> Result<(Vec<(CellSet, f64)>, usize)> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let mut merges = 0;
    loop {
        let mut light: Vec<usize> = (0..groups.len()).filter(|&i| groups[i].1 < 0.5).collect();
        if light.len() < 2 {
            break;
        }
        light.sort_by(|&a, &b| by_mass_then_first(&groups[a], &groups[b]));
        let (i, j) = (light[0].min(light[1]), light[0].max(light[1]));
        let (set_j, mass_j) = groups.remove(j);
        let (set_i, mass_i) = &groups[i];
        groups[i] = (set_i.union(&set_j), mass_i + mass_j);
        merges += 1;
    }

    let mut heavy: Vec<(CellSet, f64)> = groups.into_iter().filter(|g| g.1 >= 0.5).collect();
    if heavy.len() < k {
        return Err(Error::InsufficientSets {
            found: heavy.len(),
            k,
        });
    }
    heavy.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.first().cmp(&b.0.first()))
    });
    heavy.truncate(k);
    heavy.sort_by_key(|g| g.0.first());
    Ok((heavy, merges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, cells: &[usize], mass: f64) -> (CellSet, f64) {
        (CellSet::new(n, cells.iter().copied()).unwrap(), mass)
    }

    #[test]
    fn heavy_groups_pass_through() {
        let groups = vec![group(4, &[0], 0.7), group(4, &[1, 2], 0.9)];
        let (out, merges) = merge_groups(groups.clone(), 2).unwrap();
        assert_eq!(merges, 0);
        assert_eq!(out, groups);
    }

    #[test]
    fn two_light_groups_merge() {
        let groups = vec![
            group(5, &[0], 0.3),
            group(5, &[1, 2], 0.6),
            group(5, &[3, 4], 0.3),
        ];
        let (out, merges) = merge_groups(groups, 2).unwrap();
        assert_eq!(merges, 1);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0.members(), &[0, 3, 4]);
        assert_eq!(out[1].0.members(), &[1, 2]);
        assert!((out[0].1 - 0.6).abs() < 1e-15 && (out[1].1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn lightest_pair_merges_first() {
        let groups = vec![
            group(6, &[0], 0.4),
            group(6, &[1], 0.1),
            group(6, &[2], 0.45),
            group(6, &[3], 0.2),
        ];
        // 0.1 + 0.2 -> 0.3; then 0.3 + 0.4 -> 0.7; 0.45 stays light.
        let (out, merges) = merge_groups(groups, 1).unwrap();
        assert_eq!(merges, 2);
        assert_eq!(out[0].0.members(), &[0, 1, 3]);
        assert!((out[0].1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn surplus_keeps_heaviest() {
        let groups = vec![
            group(4, &[0], 0.6),
            group(4, &[1], 1.0),
            group(4, &[2], 0.8),
            group(4, &[3], 0.8),
        ];
        let (out, _) = merge_groups(groups, 2).unwrap();
        let cells: Vec<usize> = out.iter().map(|g| g.0.first().unwrap()).collect();
        assert_eq!(cells, vec![1, 2]);
    }

    #[test]
    fn too_little_mass_is_reported() {
        let groups = vec![group(3, &[0], 0.6), group(3, &[1], 0.3)];
        assert_eq!(
            merge_groups(groups, 2),
            Err(Error::InsufficientSets { found: 1, k: 2 })
        );
    }

    #[test]
    fn counting_bound_yields_k_survivors() {
        // Exhaust families of light-ish groups whose total meets k - 1/4 with
        // every mass at most 1 + 1/(4k).
        for k in 1..=5usize {
            let cap = 1.0 + 0.25 / k as f64;
            for m in k..(3 * k + 4) {
                for step in 0..20 {
                    let target = k as f64 - 0.25 + 0.05 * step as f64;
                    let each = target / m as f64;
                    if each > cap {
                        continue;
                    }
                    let groups: Vec<_> = (0..m).map(|i| group(m, &[i], each)).collect();
                    let (out, _) = merge_groups(groups, k).unwrap();
                    assert_eq!(out.len(), k);
                    assert!(out.iter().all(|g| g.1 >= 0.5));
                }
            }
        }
    }
}
