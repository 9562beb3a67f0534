//! Lipschitz localization of the embedding around separated anchor sets.
//!
//! With `delta = 1/(4 sqrt(5) k^3)`, each anchor `A_i` gets the cutoff
//! `tau_i(x) = max(0, 1 - (2/delta) d_F(x, A_i))` and the function
//! `g_i = tau_i |F|`. Anchors `delta` apart force disjoint supports, and
//!
//! * `|g_i|_v^2 >= mass(A_i) >= 1/2`,
//! * `|g_i(x) - g_i(y)| <= (1 + 4/delta) |F(x) - F(y)|`,
//! * `R(g_i) <= 4000 k^7 max_j R(f_j)`.

use serde::{Deserialize, Serialize};

use super::metric::distance_to_set_unchecked;
use super::{mass, separation_bound};
use crate::error::{Error, Result};
use crate::graphon::{CellSet, StepGraphon, VertexFunction};
use crate::spectral::{Embedding, SpectralBasis};

/// Tolerance applied to the Rayleigh certificate.
pub const RAYLEIGH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizedFamily {
    pub delta: f64,
    pub anchors: Vec<CellSet>,
    /// Cutoffs `tau_i`, one value per cell.
    pub cutoffs: Vec<Vec<f64>>,
    pub functions: Vec<VertexFunction>,
    pub supports: Vec<CellSet>,
}

/// The ramp `max(0, 1 - (2/delta) d)`; zero at `d = inf`.
#[inline]
pub fn cutoff(delta: f64, distance: f64) -> f64 {
    (1.0 - (2.0 / delta) * distance).max(0.0)
}

pub fn localize(w: &StepGraphon, emb: &Embedding, anchors: &[CellSet]) -> Result<LocalizedFamily> {
    let n = w.n();
    if emb.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: emb.n(),
        });
    }
    let k = emb.k();
    if anchors.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: anchors.len(),
        });
    }
    for a in anchors {
        if a.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.n(),
            });
        }
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    let delta = separation_bound(k);
    for (i, a) in anchors.iter().enumerate() {
        for (j, b) in anchors.iter().enumerate().skip(i + 1) {
            let distance = a
                .iter()
                .map(|x| distance_to_set_unchecked(emb, x, b))
                .fold(f64::INFINITY, f64::min);
            if distance < delta {
                return Err(Error::SeparationViolation {
                    a: i,
                    b: j,
                    distance,
                    required: delta,
                });
            }
        }
    }
    for (index, a) in anchors.iter().enumerate() {
        let m = mass(w, emb, a);
        if m < 0.5 {
            return Err(Error::MassViolation { index, mass: m });
        }
    }

    let mut cutoffs = Vec::with_capacity(k);
    let mut functions = Vec::with_capacity(k);
    let mut supports = Vec::with_capacity(k);
    for a in anchors {
        let tau: Vec<f64> = (0..n)
            .map(|x| cutoff(delta, distance_to_set_unchecked(emb, x, a)))
            .collect();
        let g = VertexFunction::new(
            tau.iter()
                .enumerate()
                .map(|(x, t)| t * emb.norm(x))
                .collect(),
        )?;
        let support = g.support();
        if !a.is_subset(&support) {
            return Err(Error::CertificateViolation(
                "anchor not contained in its support".into(),
            ));
        }
        cutoffs.push(tau);
        functions.push(g);
        supports.push(support);
    }
    for (i, a) in supports.iter().enumerate() {
        for b in &supports[i + 1..] {
            if let Some(cell) = a.iter().find(|&x| b.contains(x)) {
                return Err(Error::CertificateViolation(format!(
                    "localized supports overlap at cell {cell}"
                )));
            }
        }
    }
    Ok(LocalizedFamily {
        delta,
        anchors: anchors.to_vec(),
        cutoffs,
        functions,
        supports,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizedEntry {
    pub norm_sq: f64,
    pub rayleigh: f64,
    /// `4000 k^7 lambda_k`.
    pub bound: f64,
    /// Smallest `(1 + 4/delta) |F(x) - F(y)| - |g(x) - g(y)|` over all pairs,
    /// absent when there is only one cell.
    pub lipschitz_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationCertificate {
    /// `max_j R(f_j)` over the basis.
    pub max_basis_rayleigh: f64,
    pub lambda_k: f64,
    pub entries: Vec<LocalizedEntry>,
}

/// Evaluates and checks the localization guarantees. A violation means an
/// implementation defect, never bad luck.
pub fn localized_rayleigh_certificate(
    w: &StepGraphon,
    emb: &Embedding,
    family: &LocalizedFamily,
    basis: &SpectralBasis,
) -> Result<LocalizationCertificate> {
    let k = basis.k();
    let n = w.n();
    let max_basis_rayleigh = basis
        .functions()
        .iter()
        .map(|f| w.rayleigh(f))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let lambda_k = basis.lambda_max();
    let bound = 4000.0 * (k as f64).powi(7) * lambda_k;
    let lipschitz = 1.0 + 4.0 / family.delta;

    let mut entries = Vec::with_capacity(k);
    for (i, g) in family.functions.iter().enumerate() {
        let norm_sq = w.inner_v(g, g)?;
        if norm_sq < 0.5 - 1e-10 {
            return Err(Error::CertificateViolation(format!(
                "|g_{i}|^2 = {norm_sq} below 1/2"
            )));
        }
        let rayleigh = w.rayleigh(g)?;
        if rayleigh > bound + RAYLEIGH_TOLERANCE {
            return Err(Error::CertificateViolation(format!(
                "R(g_{i}) = {rayleigh} exceeds {bound}"
            )));
        }
        let values = g.values();
        let mut lipschitz_slack: Option<f64> = None;
        for x in 0..n {
            for y in (x + 1)..n {
                let slack = lipschitz * emb.row_distance(x, y) - (values[x] - values[y]).abs();
                lipschitz_slack = Some(lipschitz_slack.map_or(slack, |s| s.min(slack)));
            }
        }
        if let Some(slack) = lipschitz_slack.filter(|&s| s < -1e-12) {
            return Err(Error::CertificateViolation(format!(
                "g_{i} violates the Lipschitz bound by {}",
                -slack
            )));
        }
        entries.push(LocalizedEntry {
            norm_sq,
            rayleigh,
            bound,
            lipschitz_slack,
        });
    }
    Ok(LocalizationCertificate {
        max_basis_rayleigh,
        lambda_k,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> StepGraphon {
        StepGraphon::new(vec![vec![1.0; n]; n], true).unwrap()
    }

    #[test]
    fn ramp_values() {
        let delta = separation_bound(2);
        assert_eq!(cutoff(delta, 0.0), 1.0);
        assert_eq!(cutoff(delta, delta / 2.0), 0.0);
        assert_eq!(cutoff(delta, delta), 0.0);
        assert!((cutoff(delta, delta / 4.0) - 0.5).abs() < 1e-15);
        assert_eq!(cutoff(delta, f64::INFINITY), 0.0);
    }

    fn circle_embedding(angles: &[f64], radius: f64) -> Embedding {
        let rows: Vec<Vec<f64>> = angles
            .iter()
            .map(|a| vec![radius * a.cos(), radius * a.sin()])
            .collect();
        Embedding::from_rows(&rows).unwrap()
    }

    #[test]
    fn localizes_around_anchors() {
        // n = 6 cells on the unit circle scaled so every row has mass 1/6.
        let delta = separation_bound(2);
        let angles = [0.0, delta / 8.0, delta / 3.0, 3.0, 3.0 + delta / 16.0, 1.5];
        let w = ones(6);
        let emb = circle_embedding(&angles, 6f64.sqrt());
        let anchors = [
            CellSet::new(6, [0, 1, 2]).unwrap(),
            CellSet::new(6, [3, 4]).unwrap(),
        ];
        let fam = localize(&w, &emb, &anchors).unwrap();
        for (a, s) in anchors.iter().zip(&fam.supports) {
            assert!(a.is_subset(s));
        }
        assert!(fam.supports[0].is_disjoint(&fam.supports[1]));
        // Cell 5 sits far from both anchors.
        assert_eq!(fam.functions[0].values()[5], 0.0);
        assert_eq!(fam.functions[1].values()[5], 0.0);
        for x in [0, 1, 2] {
            assert_eq!(fam.cutoffs[0][x], 1.0);
            assert!((fam.functions[0].values()[x] - emb.norm(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_close_or_light_anchors() {
        let w = ones(4);
        let emb = circle_embedding(&[0.0, 1e-6, 2.0, 4.0], 2.0);
        let close = [CellSet::new(4, [0]).unwrap(), CellSet::new(4, [1]).unwrap()];
        assert!(matches!(
            localize(&w, &emb, &close),
            Err(Error::SeparationViolation { .. })
        ));
        let small = circle_embedding(&[0.0, 1e-6, 2.0, 4.0], 1.0);
        let far = [CellSet::new(4, [0]).unwrap(), CellSet::new(4, [2]).unwrap()];
        assert!(matches!(
            localize(&w, &small, &far),
            Err(Error::MassViolation { index: 0, .. })
        ));
    }
}
