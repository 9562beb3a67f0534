//! Seeded generators for random step graphons, cell sets and directions.

use rand::Rng;

use crate::graphon::{CellSet, StepGraphon};

/// A random connected step graphon on `n` cells.
///
/// Each off-diagonal pair is kept with probability `density` and given a
/// uniform weight; a random spanning path with positive weights is added so
/// that the result is always connected.
pub fn connected_graphon<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> StepGraphon {
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < density {
                let v: f64 = rng.random();
                kernel[i * n + j] = v;
                kernel[j * n + i] = v;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if kernel[a * n + b] == 0.0 {
            let v = rng.random_range(0.05..=1.0);
            kernel[a * n + b] = v;
            kernel[b * n + a] = v;
        }
    }
    if n == 1 && kernel[0] == 0.0 {
        kernel[0] = rng.random_range(0.05..=1.0);
    }
    StepGraphon::from_flat(n, kernel, true).expect("generated kernel is valid and connected")
}

/// A random planted-partition graphon: `blocks` contiguous groups with
/// within-group weights near `p` and cross weights near `q`.
pub fn planted_graphon<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    blocks: usize,
    p: f64,
    q: f64,
) -> StepGraphon {
    let blocks = blocks.clamp(1, n);
    let block_of = |i: usize| i * blocks / n;
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let base = if block_of(i) == block_of(j) { p } else { q };
            let v = (base * rng.random_range(0.5..=1.0)).clamp(0.0, 1.0);
            kernel[i * n + j] = v;
            kernel[j * n + i] = v;
        }
    }
    // Keep it connected even when q is zero.
    for i in 0..n.saturating_sub(1) {
        if kernel[i * n + i + 1] == 0.0 {
            kernel[i * n + i + 1] = 0.01;
            kernel[(i + 1) * n + i] = 0.01;
        }
    }
    if n == 1 && kernel[0] == 0.0 {
        kernel[0] = 0.5;
    }
    StepGraphon::from_flat(n, kernel, true).expect("generated kernel is valid and connected")
}

/// A uniformly random nonempty subset of the `n` cells.
pub fn nonempty_set<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CellSet {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
        if mask.iter().any(|&m| m) {
            return CellSet::from_mask(mask);
        }
    }
}

/// `k` random pairwise disjoint nonempty sets (requires `k <= n`); cells may
/// be left unassigned.
pub fn disjoint_tuple<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<CellSet> {
    assert!(k >= 1 && k <= n);
    loop {
        // label k means unassigned
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..=k)).collect();
        let sets: Vec<CellSet> = (0..k)
            .map(|c| CellSet::from_mask(labels.iter().map(|&l| l == c).collect()))
            .collect();
        if sets.iter().all(|s| !s.is_empty()) {
            return sets;
        }
    }
}

/// A uniformly random unit vector in `R^k`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| standard_normal(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
