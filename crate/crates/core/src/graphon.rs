//! Step graphons on `n` uniform cells and the measures, degrees, expansions
//! and Rayleigh quotients defined on them.
//!
//! A step graphon is constant on each cell `[i/n, (i+1)/n) x [j/n, (j+1)/n)`,
//! so every integral over `I = [0, 1]` reduces to a finite sum with cell
//! measure `1/n`:
//!
//! * degree `d_i = (1/n) sum_j W_ij`
//! * `nu(A) = (1/n) sum_{i in A} d_i`
//! * `eta(A x B) = (1/n^2) sum_{i in A, j in B} W_ij`
//! * `h(A) = eta(A x A^c) / nu(A)`
//! * `R(f) = [(1/n^2) sum_{i<j} (f_i - f_j)^2 W_ij] / [(1/n) sum_i f_i^2 d_i]`

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{self, Compensated};

/// Inputs may be asymmetric by at most this much before being rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A graphon constant on the cells of a uniform `n x n` grid.
///
/// Immutable after construction; degrees and connectivity are cached.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    n: usize,
    kernel: Vec<f64>,
    degrees: Vec<f64>,
    connected: bool,
}

impl StepGraphon {
    /// Builds a step graphon from kernel rows.
    ///
    /// Entries must lie in `[0, 1]`. Pairs that disagree by at most
    /// [`SYMMETRY_TOLERANCE`] are replaced by their average; larger
    /// disagreement is an error. With `require_connected`, zero-degree cells
    /// and disconnected kernels are rejected.
    pub fn new(rows: Vec<Vec<f64>>, require_connected: bool) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyKernel);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != n {
                return Err(Error::NonSquare {
                    row,
                    len: values.len(),
                    expected: n,
                });
            }
            flat.extend(values);
        }
        Self::from_flat(n, flat, require_connected)
    }

    /// Builds a step graphon from a row-major `n * n` table.
    pub fn from_flat(n: usize, mut kernel: Vec<f64>, require_connected: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyKernel);
        }
        if kernel.len() != n * n {
            return Err(Error::NonSquare {
                row: kernel.len() / n,
                len: kernel.len() % n,
                expected: n,
            });
        }
        for (idx, &value) in kernel.iter().enumerate() {
            // NaN fails this test as well.
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutOfRange {
                    row: idx / n,
                    col: idx % n,
                    value,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let a = kernel[i * n + j];
                let b = kernel[j * n + i];
                let diff = (a - b).abs();
                if diff > SYMMETRY_TOLERANCE {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        diff,
                    });
                }
                if a != b {
                    let mean = 0.5 * (a + b);
                    kernel[i * n + j] = mean;
                    kernel[j * n + i] = mean;
                }
            }
        }

        let inv_n = 1.0 / n as f64;
        let degrees: Vec<f64> = (0..n)
            .map(|i| sum::sum(kernel[i * n..(i + 1) * n].iter().copied()) * inv_n)
            .collect();
        let connected = degrees.iter().all(|&d| d > 0.0) && cells_connected(n, &kernel);

        if require_connected {
            if let Some(cell) = degrees.iter().position(|&d| d <= 0.0) {
                return Err(Error::ZeroDegreeCell { cell });
            }
            if !connected {
                return Err(Error::Disconnected);
            }
        }

        Ok(Self {
            n,
            kernel,
            degrees,
            connected,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kernel(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.kernel[i * self.n..(i + 1) * self.n]
    }

    pub fn kernel_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    /// Whether every cell has positive degree and the positive-weight cell
    /// graph is connected.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub(crate) fn ensure_connected(&self) -> Result<()> {
        if let Some(cell) = self.degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::ZeroDegreeCell { cell });
        }
        if !self.connected {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    fn check_set(&self, a: &CellSet) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: a.n(),
            });
        }
        Ok(())
    }

    fn check_fn(&self, f: &VertexFunction) -> Result<()> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.n(),
            });
        }
        Ok(())
    }

    /// `nu(A)`, the degree-weighted volume of `A`.
    pub fn nu(&self, a: &CellSet) -> Result<f64> {
        self.check_set(a)?;
        let s = sum::sum(a.iter().map(|i| self.degrees[i]));
        Ok(s / self.n as f64)
    }

    /// `eta(A x B)`, the kernel mass of the rectangle `A x B`.
    pub fn eta(&self, a: &CellSet, b: &CellSet) -> Result<f64> {
        self.check_set(a)?;
        self.check_set(b)?;
        let mut acc = Compensated::new();
        for i in a.iter() {
            let row = self.row(i);
            for j in b.iter() {
                acc.add(row[j]);
            }
        }
        Ok(acc.value() / (self.n * self.n) as f64)
    }

    /// The expansion `h(A) = eta(A x A^c) / nu(A)`.
    pub fn expansion(&self, a: &CellSet) -> Result<f64> {
        self.check_set(a)?;
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let volume = self.nu(a)?;
        if volume <= 0.0 {
            return Err(Error::ZeroVolume);
        }
        let cut = self.eta(a, &a.complement())?;
        Ok(cut / volume)
    }

    /// `<f, g>_v = (1/n) sum_i f_i g_i d_i`.
    pub fn inner_v(&self, f: &VertexFunction, g: &VertexFunction) -> Result<f64> {
        self.check_fn(f)?;
        self.check_fn(g)?;
        let s = sum::sum(
            f.values
                .iter()
                .zip(&g.values)
                .zip(&self.degrees)
                .map(|((a, b), d)| a * b * d),
        );
        Ok(s / self.n as f64)
    }

    /// The Dirichlet energy `<Laplacian f, f>_v`, i.e. half the kernel-weighted
    /// sum of squared differences.
    pub fn energy(&self, f: &VertexFunction) -> Result<f64> {
        self.check_fn(f)?;
        let v = f.values();
        let mut acc = Compensated::new();
        for i in 0..self.n {
            let row = self.row(i);
            for j in (i + 1)..self.n {
                let diff = v[i] - v[j];
                acc.add(diff * diff * row[j]);
            }
        }
        Ok(acc.value() / (self.n * self.n) as f64)
    }

    /// The Rayleigh quotient of the graphon Laplacian at `f`.
    pub fn rayleigh(&self, f: &VertexFunction) -> Result<f64> {
        let denom = self.inner_v(f, f)?;
        if denom <= 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(self.energy(f)? / denom)
    }

    /// Splits every cell into `r` equal subcells with the kernel unchanged as a
    /// function on `[0, 1]^2`.
    pub fn refine(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidK);
        }
        let m = self.n * r;
        let mut kernel = Vec::with_capacity(m * m);
        for i in 0..m {
            let row = self.row(i / r);
            kernel.extend((0..m).map(|j| row[j / r]));
        }
        let refined = Self::from_flat(m, kernel, false)?;
        Ok(refined)
    }
}

fn cells_connected(n: usize, kernel: &[f64]) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && kernel[i * n + j] > 0.0 {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    reached == n
}

/// A subset of the `n` cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CellSetRepr", into = "CellSetRepr")]
pub struct CellSet {
    n: usize,
    mask: Vec<bool>,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CellSetRepr {
    n: usize,
    members: Vec<usize>,
}

impl TryFrom<CellSetRepr> for CellSet {
    type Error = Error;

    fn try_from(repr: CellSetRepr) -> Result<Self> {
        CellSet::new(repr.n, repr.members)
    }
}

impl From<CellSet> for CellSetRepr {
    fn from(set: CellSet) -> Self {
        CellSetRepr {
            n: set.n,
            members: set.members,
        }
    }
}

impl CellSet {
    /// Builds a set from (possibly repeated, unordered) cell indices.
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, cells: I) -> Result<Self> {
        let mut mask = vec![false; n];
        for index in cells {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
            mask[index] = true;
        }
        Ok(Self::from_mask(mask))
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i)
            .collect();
        Self {
            n: mask.len(),
            mask,
            members,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            mask: vec![false; n],
            members: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            mask: vec![true; n],
            members: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.n
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.members.first().copied()
    }

    /// Lebesgue measure `|A| / n`.
    pub fn measure(&self) -> f64 {
        self.len() as f64 / self.n as f64
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(self.mask.iter().map(|&m| !m).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_mask(
            self.mask
                .iter()
                .zip(&other.mask)
                .map(|(&a, &b)| a || b)
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

/// A step function on the `n` cells, i.e. an element of `L^2(I, nu)` that is
/// constant on every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn indicator(set: &CellSet) -> Self {
        Self {
            values: (0..set.n())
                .map(|i| if set.contains(i) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Cells where the function is nonzero.
    pub fn support(&self) -> CellSet {
        CellSet::from_mask(self.values.iter().map(|&v| v != 0.0).collect())
    }
}
