//! Random shifted-grid separation of the embedded cells.
//!
//! `R^k` is tiled by half-open cubes of side `s = 1/(sqrt(5) k)` translated by
//! a uniform shift `w in [0, s)^k`. Each cube is shrunk to the closed cube
//! with margin `s/(8k^2)` on every face, and a nonzero cell is kept iff its
//! radial projection falls inside a shrunk cube. Cells sharing a cube form one
//! group. Distinct shrunk cubes are `s/(4k^2) = 1/(4 sqrt(5) k^3)` apart, and
//! a cube meets the sphere in a cap of diameter at most `s sqrt(k)`, which
//! bounds every group mass by `1 + 1/(4k)`. Only the total retained mass
//! depends on the shift; its expectation is at least `k - 1/4`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metric::min_pairwise_separation;
use super::{group_mass_bound, mass, separation_bound, total_mass_threshold};
use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon};
use crate::spectral::Embedding;
use crate::sum;

/// Tolerance on the per-group mass bound, absorbing eigensolver round-off.
pub const MASS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridShift {
    pub k: usize,
    /// Cube side `1/(sqrt(5) k)`.
    pub s: f64,
    /// Shrink margin `s/(8k^2)`.
    pub margin: f64,
    /// Shift vector in `[0, s)^k`.
    pub w: Vec<f64>,
    pub seed: u64,
}

impl GridShift {
    pub fn new(k: usize, w: Vec<f64>, seed: u64) -> Self {
        let s = cube_side(k);
        let margin = s / (8.0 * (k * k) as f64);
        Self {
            k,
            s,
            margin,
            w,
            seed,
        }
    }

    /// Lattice index of the shrunk cube containing `z`, if any.
    pub fn locate(&self, z: &[f64]) -> Option<Vec<i64>> {
        debug_assert_eq!(z.len(), self.k);
        let mut key = Vec::with_capacity(self.k);
        for (zi, wi) in z.iter().zip(&self.w) {
            let t = zi - wi;
            let cell = (t / self.s).floor();
            let offset = t - cell * self.s;
            if offset < self.margin || offset > self.s - self.margin {
                return None;
            }
            key.push(cell as i64);
        }
        Some(key)
    }
}

pub fn cube_side(k: usize) -> f64 {
    1.0 / (5f64.sqrt() * k as f64)
}

/// A uniform shift in `[0, s)^k` drawn from a ChaCha8 stream seeded by `seed`.
pub fn sample_shift(k: usize, seed: u64) -> GridShift {
    let s = cube_side(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = (0..k).map(|_| rng.random_range(0.0..s)).collect();
    GridShift::new(k, w, seed)
}

/// Disjoint, mutually separated groups of cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedFamily {
    pub sets: Vec<CellSet>,
    pub masses: Vec<f64>,
    pub total_mass: f64,
    /// Smallest `d_F` between cells of distinct groups; `None` for fewer than
    /// two groups.
    pub min_separation: Option<f64>,
    pub shift: GridShift,
}

impl SeparatedFamily {
    /// Checks the shift-independent guarantees: pairwise disjointness,
    /// separation at least `1/(4 sqrt(5) k^3)` and group mass at most
    /// `1 + 1/(4k)`.
    pub fn check_certificates(&self) -> Result<()> {
        let k = self.shift.k;
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                if let Some(cell) = a.iter().find(|&x| b.contains(x)) {
                    return Err(Error::OverlappingSets { cell });
                }
            }
        }
        if let Some(sep) = self.min_separation {
            if sep < separation_bound(k) {
                return Err(Error::CertificateViolation(format!(
                    "group separation {sep} below {}",
                    separation_bound(k)
                )));
            }
        }
        let cap = group_mass_bound(k);
        if let Some(m) = self.masses.iter().find(|&&m| m > cap + MASS_TOLERANCE) {
            return Err(Error::CertificateViolation(format!(
                "group mass {m} exceeds {cap}"
            )));
        }
        Ok(())
    }
}

/// Groups the nonzero cells by the shrunk cube containing their radial
/// projection. Groups are ordered by their smallest cell.
pub fn shifted_grid_family(
    w: &StepGraphon,
    emb: &Embedding,
    shift: &GridShift,
) -> Result<SeparatedFamily> {
    if emb.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: emb.n(),
        });
    }
    if emb.k() != shift.k {
        return Err(Error::DimensionMismatch {
            expected: shift.k,
            found: emb.k(),
        });
    }
    let n = emb.n();
    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        if let Some(z) = emb.direction(x) {
            if let Some(key) = shift.locate(z) {
                groups.entry(key).or_default().push(x);
            }
        }
    }
    let mut sets: Vec<CellSet> = groups
        .into_values()
        .map(|cells| CellSet::new(n, cells).expect("indices are in range"))
        .collect();
    sets.sort_by_key(|s| s.first());
    let masses: Vec<f64> = sets.iter().map(|s| mass(w, emb, s)).collect();
    let total_mass = sum::sum(masses.iter().copied());
    let min_separation = min_pairwise_separation(emb, &sets);
    Ok(SeparatedFamily {
        sets,
        masses,
        total_mass,
        min_separation,
        shift: shift.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_tries: usize,
    /// A family is accepted once its total mass reaches `k - 1/4 - slack`.
    pub slack: f64,
    /// Return the best family flagged as not accepted instead of failing when
    /// no try reaches the threshold.
    pub allow_shortfall: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_tries: 64,
            slack: 0.0,
            allow_shortfall: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationSearch {
    pub family: SeparatedFamily,
    /// Whether the total mass reached the acceptance threshold.
    pub accepted: bool,
    /// Number of shifts evaluated.
    pub tries: usize,
}

/// Tries shifts seeded `seed, seed + 1, ...` until one retains total mass at
/// least `k - 1/4 - slack`. Every evaluated family is checked against the
/// shift-independent certificates.
pub fn separated_family(
    w: &StepGraphon,
    emb: &Embedding,
    config: &SearchConfig,
) -> Result<SeparationSearch> {
    let k = emb.k();
    let required = total_mass_threshold(k) - config.slack;
    let mut best: Option<SeparatedFamily> = None;
    for t in 0..config.max_tries {
        let shift = sample_shift(k, config.seed.wrapping_add(t as u64));
        let family = shifted_grid_family(w, emb, &shift)?;
        family.check_certificates()?;
        if family.total_mass >= required {
            return Ok(SeparationSearch {
                family,
                accepted: true,
                tries: t + 1,
            });
        }
        if best
            .as_ref()
            .is_none_or(|b| family.total_mass > b.total_mass)
        {
            best = Some(family);
        }
    }
    match best {
        Some(family) if config.allow_shortfall => Ok(SeparationSearch {
            family,
            accepted: false,
            tries: config.max_tries,
        }),
        best => Err(Error::MassShortfall {
            best: best.map_or(0.0, |b| b.total_mass),
            required,
            tries: config.max_tries,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::spectral::{build_embedding, eigen_k};

    fn ones(n: usize) -> StepGraphon {
        StepGraphon::new(vec![vec![1.0; n]; n], true).unwrap()
    }

    #[test]
    fn shift_parameters() {
        let g = sample_shift(1, 11);
        assert!((g.s - 0.447_213_595_499_957_9).abs() < 1e-15);
        assert!(g.w[0] >= 0.0 && g.w[0] < g.s);
        assert_eq!(g.margin, g.s / 8.0);
        assert_eq!(sample_shift(3, 99), sample_shift(3, 99));
        assert_ne!(sample_shift(3, 99).w, sample_shift(3, 100).w);
    }

    #[test]
    fn shift_is_uniform() {
        let k = 2;
        let s = cube_side(k);
        let samples = 100_000;
        let mut means = [0.0; 2];
        for seed in 0..samples {
            let g = sample_shift(k, seed);
            for (mean, &w) in means.iter_mut().zip(&g.w) {
                assert!((0.0..s).contains(&w));
                *mean += w;
            }
        }
        // Uniform on [0, s): mean s/2, sd s/sqrt(12).
        let sigma = s / 12f64.sqrt() / (samples as f64).sqrt();
        for m in means {
            assert!((m / samples as f64 - s / 2.0).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn closed_shrunk_cube_boundary_is_kept() {
        let shift = GridShift::new(1, vec![0.0], 0);
        // The lower face of the shrunk cube around lattice point 0 is exactly
        // at the margin.
        assert_eq!(shift.locate(&[shift.margin]), Some(vec![0]));
        assert_eq!(shift.locate(&[shift.margin * 0.5]), None);
        assert_eq!(shift.locate(&[shift.s * 0.5]), Some(vec![0]));
        assert_eq!(shift.locate(&[-shift.s * 0.5]), Some(vec![-1]));
    }

    #[test]
    fn single_direction_in_one_dimension() {
        let w = ones(5);
        let emb = build_embedding(&eigen_k(&w, 1).unwrap());
        let mut kept = 0;
        for seed in 0..200 {
            let shift = sample_shift(1, seed);
            let fam = shifted_grid_family(&w, &emb, &shift).unwrap();
            fam.check_certificates().unwrap();
            match fam.sets.len() {
                0 => assert_eq!(fam.total_mass, 0.0),
                1 => {
                    kept += 1;
                    assert_eq!(fam.sets[0], CellSet::full(5));
                    assert!((fam.total_mass - 1.0).abs() < 1e-12);
                }
                m => panic!("{m} groups for a single direction"),
            }
        }
        // Retention probability is 3/4.
        assert!((120..=180).contains(&kept), "kept {kept}");
    }

    #[test]
    fn antipodal_clusters_never_share_a_cube() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                if i < 5 {
                    vec![1.0, 0.01 * i as f64]
                } else {
                    vec![-1.0, -0.01 * i as f64]
                }
            })
            .collect();
        let emb = Embedding::from_rows(&rows).unwrap();
        let w = ones(10);
        for seed in 0..100 {
            let fam = shifted_grid_family(&w, &emb, &sample_shift(2, seed)).unwrap();
            for set in &fam.sets {
                let sides: Vec<bool> = set.iter().map(|x| x < 5).collect();
                assert!(sides.iter().all(|&s| s == sides[0]));
            }
        }
    }

    #[test]
    fn search_on_constant_graphon() {
        let w = ones(64);
        let emb = build_embedding(&eigen_k(&w, 2).unwrap());
        let config = SearchConfig {
            seed: 5,
            ..SearchConfig::default()
        };
        let found = separated_family(&w, &emb, &config).unwrap();
        assert!(found.accepted);
        assert!(found.family.total_mass >= 1.75);
        assert!(found
            .family
            .min_separation
            .is_none_or(|s| s >= separation_bound(2)));
        assert_eq!(found.family.shift.seed, 5 + found.tries as u64 - 1);
    }

    #[test]
    fn zero_budget_is_a_shortfall() {
        let w = ones(4);
        let emb = build_embedding(&eigen_k(&w, 2).unwrap());
        let config = SearchConfig {
            max_tries: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            separated_family(&w, &emb, &config),
            Err(Error::MassShortfall { .. })
        ));
    }

    #[test]
    fn certificates_hold_for_every_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..20 {
            let n = 8 + trial;
            let k = 1 + trial % 4;
            let w = random::connected_graphon(&mut rng, n, 0.3);
            let emb = build_embedding(&eigen_k(&w, k).unwrap());
            for seed in 0..20 {
                let fam = shifted_grid_family(&w, &emb, &sample_shift(k, seed)).unwrap();
                fam.check_certificates().unwrap();
                assert!(fam.total_mass <= k as f64 + 1e-9);
            }
        }
    }
}
