//! Bottom of the spectrum of the graphon Laplacian and the spectral embedding.
//!
//! For a step graphon the Rayleigh problem restricted to step functions is the
//! symmetric eigenproblem for
//!
//! ```text
//! L = I - D^{-1/2} (W / n) D^{-1/2}
//! ```
//!
//! under the substitution `u_i = f_i * sqrt(d_i / n)`. Functions orthogonal to
//! every cell indicator satisfy `Laplacian f = f`, so the graphon spectrum is
//! the discrete spectrum together with eigenvalue 1 of infinite multiplicity.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{StepGraphon, VertexFunction};
use crate::sum;

/// Embedding rows with norm at or below this are treated as the zero vector.
pub const ZERO_ROW_THRESHOLD: f64 = 1e-300;

/// `L[i][j] = delta_ij - W_ij / (n sqrt(d_i d_j))`, exactly symmetric.
pub fn normalized_operator(w: &StepGraphon) -> Result<DMatrix<f64>> {
    let n = w.n();
    if let Some(cell) = w.degrees().iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegreeCell { cell });
    }
    let scale: Vec<f64> = w.degrees().iter().map(|d| d.sqrt()).collect();
    let nf = n as f64;
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let off = w.kernel(i, j) / (nf * scale[i] * scale[j]);
            let v = if i == j { 1.0 - off } else { -off };
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    Ok(l)
}

/// The `k` smallest eigenpairs of the graphon Laplacian over step functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    functions: Vec<VertexFunction>,
    symmetric: Vec<Vec<f64>>,
}

impl SpectralBasis {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n(&self) -> usize {
        self.symmetric.first().map_or(0, Vec::len)
    }

    /// Ascending, clamped to `[0, 2]`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The discrete `lambda_k`.
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("basis has k >= 1")
    }

    /// Eigenfunctions `f_j`, orthonormal in `<., .>_v`.
    pub fn functions(&self) -> &[VertexFunction] {
        &self.functions
    }

    /// Eigenvectors `u_j` of [`normalized_operator`], unit in the Euclidean norm.
    pub fn symmetric_vectors(&self) -> &[Vec<f64>] {
        &self.symmetric
    }
}

fn sorted_eigen(w: &StepGraphon) -> Result<(Vec<f64>, DMatrix<f64>, Vec<usize>)> {
    let l = normalized_operator(w)?;
    let eig = SymmetricEigen::new(l);
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    Ok((values, eig.eigenvectors, order))
}

/// All `n` eigenvalues of the step-space problem, ascending and clamped to `[0, 2]`.
pub fn discrete_spectrum(w: &StepGraphon) -> Result<Vec<f64>> {
    w.ensure_connected()?;
    let (values, _, order) = sorted_eigen(w)?;
    Ok(order
        .into_iter()
        .map(|i| values[i].clamp(0.0, 2.0))
        .collect())
}

/// The `k` smallest eigenpairs. Each symmetric eigenvector is signed so its
/// first non-negligible coordinate is positive.
pub fn eigen_k(w: &StepGraphon, k: usize) -> Result<SpectralBasis> {
    let n = w.n();
    if k == 0 {
        return Err(Error::InvalidK);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    w.ensure_connected()?;
    let (values, vectors, order) = sorted_eigen(w)?;
    let nf = n as f64;
    let weight: Vec<f64> = w.degrees().iter().map(|d| (d / nf).sqrt()).collect();

    let mut eigenvalues = Vec::with_capacity(k);
    let mut functions = Vec::with_capacity(k);
    let mut symmetric = Vec::with_capacity(k);
    for &col in order.iter().take(k) {
        let mut u: Vec<f64> = vectors.column(col).iter().copied().collect();
        let norm = sum::sum(u.iter().map(|x| x * x)).sqrt();
        u.iter_mut().for_each(|x| *x /= norm);
        if let Some(&lead) = u.iter().find(|x| x.abs() > 1e-12) {
            if lead < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let f = u.iter().zip(&weight).map(|(x, s)| x / s).collect();
        eigenvalues.push(values[col].clamp(0.0, 2.0));
        functions.push(VertexFunction::new(f)?);
        symmetric.push(u);
    }
    Ok(SpectralBasis {
        eigenvalues,
        functions,
        symmetric,
    })
}

/// `lambda_k` both over step functions and over all of `L^2(I, nu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaK {
    pub k: usize,
    /// k-th eigenvalue of the step-space problem, absent when `k > n`.
    pub discrete: Option<f64>,
    /// `min(discrete, 1)`, or 1 when `k > n`.
    pub graphon: f64,
}

pub fn lambda_k_graphon(w: &StepGraphon, k: usize) -> Result<LambdaK> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    w.ensure_connected()?;
    if k > w.n() {
        return Ok(LambdaK {
            k,
            discrete: None,
            graphon: 1.0,
        });
    }
    let discrete = eigen_k(w, k)?.lambda_max();
    Ok(LambdaK {
        k,
        discrete: Some(discrete),
        graphon: discrete.min(1.0),
    })
}

/// Graphon `lambda_k` given the discrete value (`None` when `k > n`).
pub fn graphon_lambda(discrete: Option<f64>) -> f64 {
    discrete.map_or(1.0, |l| l.min(1.0))
}

/// The map `F(x) = (f_1(x), ..., f_k(x))` with cached row norms and radial
/// projections `F(x) / |F(x)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    n: usize,
    k: usize,
    table: Vec<f64>,
    norms: Vec<f64>,
    directions: Vec<f64>,
}

impl Embedding {
    /// Builds an embedding from row-major rows `F(0), ..., F(n-1)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if k == 0 {
            return Err(Error::InvalidK);
        }
        let mut table = Vec::with_capacity(n * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    index: i,
                    value: *v,
                });
            }
            table.extend_from_slice(row);
        }
        let mut norms = Vec::with_capacity(n);
        let mut directions = vec![0.0; n * k];
        for i in 0..n {
            let row = &table[i * k..(i + 1) * k];
            let norm = euclidean_norm(row);
            if norm > ZERO_ROW_THRESHOLD {
                for (dst, x) in directions[i * k..(i + 1) * k].iter_mut().zip(row) {
                    *dst = x / norm;
                }
            }
            norms.push(norm);
        }
        Ok(Self {
            n,
            k,
            table,
            norms,
            directions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        &self.table[x * self.k..(x + 1) * self.k]
    }

    #[inline]
    pub fn norm(&self, x: usize) -> f64 {
        self.norms[x]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    #[inline]
    pub fn is_zero(&self, x: usize) -> bool {
        self.norms[x] <= ZERO_ROW_THRESHOLD
    }

    /// `F(x) / |F(x)|`, or `None` for a zero row.
    #[inline]
    pub fn direction(&self, x: usize) -> Option<&[f64]> {
        (!self.is_zero(x)).then(|| &self.directions[x * self.k..(x + 1) * self.k])
    }

    /// `|F(x) - F(y)|`.
    pub fn row_distance(&self, x: usize, y: usize) -> f64 {
        self.row(x)
            .iter()
            .zip(self.row(y))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Euclidean norm, rescaled so tiny rows do not underflow.
fn euclidean_norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

pub fn build_embedding(basis: &SpectralBasis) -> Embedding {
    let n = basis.n();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| basis.functions().iter().map(|f| f.values()[x]).collect())
        .collect();
    Embedding::from_rows(&rows).expect("basis functions are finite and k >= 1")
}

/// `(1/n) sum_x <F(x), v>^2 d_x`, which is 1 for every unit `v` when `F` comes
/// from an orthonormal family.
pub fn spread_check(w: &StepGraphon, emb: &Embedding, v: &[f64]) -> Result<f64> {
    if v.len() != emb.k() {
        return Err(Error::DimensionMismatch {
            expected: emb.k(),
            found: v.len(),
        });
    }
    if emb.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: emb.n(),
        });
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector { norm });
    }
    let s = sum::sum((0..emb.n()).map(|x| {
        let p: f64 = emb.row(x).iter().zip(v).map(|(a, b)| a * b).sum();
        p * p * w.degree(x)
    }));
    Ok(s / w.n() as f64)
}

/// `(1/n) sum_x |F(x)|^2 d_x`, equal to `k` for an orthonormal family.
pub fn total_mass(w: &StepGraphon, emb: &Embedding) -> f64 {
    sum::sum((0..emb.n()).map(|x| emb.norm(x).powi(2) * w.degree(x))) / w.n() as f64
}
