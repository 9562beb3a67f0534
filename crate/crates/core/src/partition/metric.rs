//! The extended pseudo-metric `d_F` induced by radially projecting the
//! embedding onto the unit sphere.
//!
//! `d_F(x, y)` is the chord between `F(x)/|F(x)|` and `F(y)/|F(y)|` when both
//! rows are nonzero, 0 when both are zero and `+inf` otherwise.

use crate::error::{Error, Result};
use crate::graphon::CellSet;
use crate::spectral::Embedding;

fn check_index(emb: &Embedding, x: usize) -> Result<()> {
    if x >= emb.n() {
        return Err(Error::IndexOutOfRange {
            index: x,
            n: emb.n(),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn radial_distance_unchecked(emb: &Embedding, x: usize, y: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    match (emb.direction(x), emb.direction(y)) {
        (Some(a), Some(b)) => a
            .iter()
            .zip(b)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

pub fn radial_distance(emb: &Embedding, x: usize, y: usize) -> Result<f64> {
    check_index(emb, x)?;
    check_index(emb, y)?;
    Ok(radial_distance_unchecked(emb, x, y))
}

/// `d_F(x, A) = min_{y in A} d_F(x, y)`, by exhaustive scan.
pub fn distance_to_set(emb: &Embedding, x: usize, set: &CellSet) -> Result<f64> {
    check_index(emb, x)?;
    if set.n() != emb.n() {
        return Err(Error::DimensionMismatch {
            expected: emb.n(),
            found: set.n(),
        });
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(distance_to_set_unchecked(emb, x, set))
}

pub(crate) fn distance_to_set_unchecked(emb: &Embedding, x: usize, set: &CellSet) -> f64 {
    if set.contains(x) {
        return 0.0;
    }
    set.iter()
        .map(|y| radial_distance_unchecked(emb, x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `d_F(x, y)` over `x`, `y` in distinct sets; `None` when fewer
/// than two sets are given.
pub fn min_pairwise_separation(emb: &Embedding, sets: &[CellSet]) -> Option<f64> {
    if sets.len() < 2 {
        return None;
    }
    let mut best = f64::INFINITY;
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            for x in a.iter() {
                for y in b.iter() {
                    best = best.min(radial_distance_unchecked(emb, x, y));
                }
            }
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emb(rows: &[&[f64]]) -> Embedding {
        Embedding::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn three_cases() {
        let e = emb(&[
            &[1.0, 0.0],
            &[0.0, 1.0],
            &[2.0, 0.0],
            &[5.0, 0.0],
            &[0.0, 0.0],
            &[0.0, 0.0],
        ]);
        assert_eq!(radial_distance(&e, 1, 1).unwrap(), 0.0);
        assert_eq!(radial_distance(&e, 0, 1).unwrap(), 2f64.sqrt());
        assert_eq!(radial_distance(&e, 2, 3).unwrap(), 0.0);
        assert_eq!(radial_distance(&e, 4, 5).unwrap(), 0.0);
        assert_eq!(radial_distance(&e, 0, 4).unwrap(), f64::INFINITY);
        assert!(matches!(
            radial_distance(&e, 0, 6),
            Err(Error::IndexOutOfRange { index: 6, n: 6 })
        ));
    }

    #[test]
    fn tiny_rows_are_directions() {
        let e = emb(&[&[1e-200, 0.0], &[0.0, 1.0], &[1e-301, 0.0]]);
        assert!(!e.is_zero(0));
        assert!(e.is_zero(2));
        assert_eq!(radial_distance(&e, 0, 1).unwrap(), 2f64.sqrt());
        assert_eq!(radial_distance(&e, 0, 2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn set_distance_examples() {
        let e = emb(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]]);
        let a = CellSet::new(4, [1]).unwrap();
        assert_eq!(distance_to_set(&e, 1, &a).unwrap(), 0.0);
        assert_eq!(distance_to_set(&e, 0, &a).unwrap(), 2f64.sqrt());
        let zeros = CellSet::new(4, [2, 3]).unwrap();
        assert_eq!(distance_to_set(&e, 0, &zeros).unwrap(), f64::INFINITY);
        assert_eq!(
            distance_to_set(&e, 0, &CellSet::empty(4)),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn pairwise_separation() {
        let e = emb(&[&[1.0, 0.0], &[0.0, 1.0], &[0.6, 0.8]]);
        let sets = [
            CellSet::new(3, [0]).unwrap(),
            CellSet::new(3, [1, 2]).unwrap(),
        ];
        let expected = ((0.4f64).powi(2) + 0.64).sqrt();
        assert!((min_pairwise_separation(&e, &sets).unwrap() - expected).abs() < 1e-15);
        assert_eq!(min_pairwise_separation(&e, &sets[..1]), None);
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..5).prop_flat_map(|k| {
            prop::collection::vec(
                prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => -10.0f64..10.0], k),
                3..12,
            )
        })
    }

    proptest! {
        #[test]
        fn pseudo_metric_axioms(rows in rows_strategy()) {
            let e = Embedding::from_rows(&rows).unwrap();
            let n = e.n();
            for x in 0..n {
                prop_assert_eq!(radial_distance(&e, x, x).unwrap(), 0.0);
                for y in 0..n {
                    let dxy = radial_distance(&e, x, y).unwrap();
                    prop_assert_eq!(dxy, radial_distance(&e, y, x).unwrap());
                    for z in 0..n {
                        let dxz = radial_distance(&e, x, z).unwrap();
                        let dzy = radial_distance(&e, z, y).unwrap();
                        if dxz.is_finite() && dzy.is_finite() {
                            prop_assert!(dxy <= dxz + dzy + 1e-14);
                        }
                    }
                }
            }
        }

        #[test]
        fn invariant_under_orthogonal_maps(rows in rows_strategy(), angle in 0.0f64..6.3, reflect in any::<bool>()) {
            let k = rows[0].len();
            // Givens rotation in the first two coordinates, optionally followed
            // by a reflection of the last one.
            let q = |r: &Vec<f64>| {
                let mut out = r.clone();
                if k >= 2 {
                    let (c, s) = (angle.cos(), angle.sin());
                    out[0] = c * r[0] - s * r[1];
                    out[1] = s * r[0] + c * r[1];
                }
                if reflect {
                    out[k - 1] = -out[k - 1];
                }
                out
            };
            let e = Embedding::from_rows(&rows).unwrap();
            let rotated = Embedding::from_rows(&rows.iter().map(q).collect::<Vec<_>>()).unwrap();
            for x in 0..e.n() {
                for y in 0..e.n() {
                    let a = radial_distance(&e, x, y).unwrap();
                    let b = radial_distance(&rotated, x, y).unwrap();
                    if a.is_finite() {
                        prop_assert!((a - b).abs() <= 1e-12);
                    } else {
                        prop_assert_eq!(a, b);
                    }
                }
            }
        }
    }
}
