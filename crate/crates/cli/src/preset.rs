//! Analytic kernels on `[0, 1]^2` and their discretization to step graphons.

use std::fmt;
use std::str::FromStr;

use graphon_cheeger::sum::Compensated;
use graphon_cheeger::StepGraphon;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelPreset {
    /// `W = p`.
    Constant(f64),
    /// `W = p` on the diagonal blocks of an equipartition into `blocks`
    /// intervals and `q` elsewhere.
    Sbm { blocks: usize, p: f64, q: f64 },
    /// `W(x, y) = x y`.
    Product,
    /// `W(x, y) = (x + y) / 2`.
    Mean,
    /// `W(x, y) = min(x, y)`.
    Min,
}

impl KernelPreset {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            KernelPreset::Constant(p) => p,
            KernelPreset::Sbm { blocks, p, q } => {
                let b = |t: f64| ((t * blocks as f64).floor() as usize).min(blocks - 1);
                if b(x) == b(y) {
                    p
                } else {
                    q
                }
            }
            KernelPreset::Product => x * y,
            KernelPreset::Mean => 0.5 * (x + y),
            KernelPreset::Min => x.min(y),
        }
    }
}

fn unit_param(text: &str, source: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::InvalidPreset(source.to_string()))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(CliError::InvalidPreset(source.to_string()));
    }
    Ok(v)
}

impl FromStr for KernelPreset {
    type Err = CliError;

    /// Parses `constant:p`, `sbm:blocks,p,q`, `product`, `mean` or `min`.
    fn from_str(source: &str) -> Result<Self> {
        let (name, params) = match source.split_once(':') {
            Some((name, params)) => (name.trim(), Some(params)),
            None => (source.trim(), None),
        };
        let bad = || CliError::InvalidPreset(source.to_string());
        let params: Vec<&str> = params.map_or_else(Vec::new, |p| p.split(',').collect());
        match (name, params.as_slice()) {
            ("constant", [p]) => Ok(KernelPreset::Constant(unit_param(p, source)?)),
            ("sbm", [blocks, p, q]) => {
                let blocks: usize = blocks.trim().parse().map_err(|_| bad())?;
                if blocks == 0 {
                    return Err(bad());
                }
                Ok(KernelPreset::Sbm {
                    blocks,
                    p: unit_param(p, source)?,
                    q: unit_param(q, source)?,
                })
            }
            ("product", []) => Ok(KernelPreset::Product),
            ("mean", []) => Ok(KernelPreset::Mean),
            ("min", []) => Ok(KernelPreset::Min),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for KernelPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelPreset::Constant(p) => write!(f, "constant:{p}"),
            KernelPreset::Sbm { blocks, p, q } => write!(f, "sbm:{blocks},{p},{q}"),
            KernelPreset::Product => f.write_str("product"),
            KernelPreset::Mean => f.write_str("mean"),
            KernelPreset::Min => f.write_str("min"),
        }
    }
}

/// Averages `preset` over a `subsample x subsample` midpoint grid in each
/// cell. Constants and block models aligned with the cells are assigned
/// exactly.
pub fn discretize_preset(
    preset: &KernelPreset,
    n: usize,
    subsample: usize,
    require_connected: bool,
) -> Result<StepGraphon> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if subsample == 0 {
        return Err(CliError::Usage("subsample must be at least 1".into()));
    }
    let mut kernel = vec![0.0; n * n];
    match *preset {
        KernelPreset::Constant(p) => kernel.fill(p),
        KernelPreset::Sbm { blocks, p, q } => {
            if !n.is_multiple_of(blocks) {
                return Err(CliError::BlockMisalignment { blocks, n });
            }
            let width = n / blocks;
            for i in 0..n {
                for j in 0..n {
                    kernel[i * n + j] = if i / width == j / width { p } else { q };
                }
            }
        }
        _ => {
            let points: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..subsample)
                        .map(|a| (i as f64 + (a as f64 + 0.5) / subsample as f64) / n as f64)
                        .collect()
                })
                .collect();
            let count = (subsample * subsample) as f64;
            for i in 0..n {
                for j in i..n {
                    let mut acc = Compensated::new();
                    for &x in &points[i] {
                        for &y in &points[j] {
                            acc.add(preset.eval(x, y));
                        }
                    }
                    let v = (acc.value() / count).clamp(0.0, 1.0);
                    kernel[i * n + j] = v;
                    kernel[j * n + i] = v;
                }
            }
        }
    }
    Ok(StepGraphon::from_flat(n, kernel, require_connected)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphon_cheeger::Error;

    #[test]
    fn parses_and_prints() {
        for source in [
            "constant:1",
            "constant:0.5",
            "sbm:2,1,0.05",
            "product",
            "mean",
            "min",
        ] {
            let p: KernelPreset = source.parse().unwrap();
            assert_eq!(p.to_string(), source);
        }
        assert_eq!(
            "sbm:3, 1.0, 0.1".parse::<KernelPreset>().unwrap(),
            KernelPreset::Sbm {
                blocks: 3,
                p: 1.0,
                q: 0.1
            }
        );
        for bad in [
            "constant",
            "constant:1.5",
            "constant:-0.1",
            "sbm:0,1,1",
            "sbm:2,1",
            "product:1",
            "max",
            "",
        ] {
            assert!(bad.parse::<KernelPreset>().is_err(), "{bad}");
        }
    }

    #[test]
    fn constant_is_exact() {
        let w = discretize_preset(&KernelPreset::Constant(0.5), 4, 8, true).unwrap();
        assert!(w.kernel_rows().iter().flatten().all(|&v| v == 0.5));
    }

    #[test]
    fn aligned_blocks() {
        let sbm = KernelPreset::Sbm {
            blocks: 2,
            p: 1.0,
            q: 0.0,
        };
        let w = discretize_preset(&sbm, 4, 8, false).unwrap();
        assert_eq!(
            w.kernel_rows(),
            vec![
                vec![1.0, 1.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 1.0],
                vec![0.0, 0.0, 1.0, 1.0],
            ]
        );
        assert!(matches!(
            discretize_preset(&sbm, 4, 8, true),
            Err(CliError::Domain(Error::Disconnected))
        ));
        assert!(matches!(
            discretize_preset(&sbm, 5, 8, true),
            Err(CliError::BlockMisalignment { blocks: 2, n: 5 })
        ));
    }

    #[test]
    fn product_at_midpoints() {
        let w = discretize_preset(&KernelPreset::Product, 2, 1, true).unwrap();
        assert_eq!(
            w.kernel_rows(),
            vec![vec![1.0 / 16.0, 3.0 / 16.0], vec![3.0 / 16.0, 9.0 / 16.0]]
        );
    }

    #[test]
    fn subsampled_cell_averages() {
        // x y averaged over a cell is the product of the midpoints, for any subsample.
        let w = discretize_preset(&KernelPreset::Product, 3, 5, true).unwrap();
        let mid = |i: usize| (i as f64 + 0.5) / 3.0;
        for i in 0..3 {
            for j in 0..3 {
                assert!((w.kernel(i, j) - mid(i) * mid(j)).abs() < 1e-15);
            }
        }
        // Midpoint average of min(x, y) on [0, 1/2]^2 is 1/6 + 1/(12 s^2).
        let w = discretize_preset(&KernelPreset::Min, 2, 64, true).unwrap();
        let s = 64.0;
        let exact = 1.0 / 6.0 + 1.0 / (12.0 * s * s);
        assert!((w.kernel(0, 0) - exact).abs() < 1e-12, "{}", w.kernel(0, 0));
        assert_eq!(w.kernel(0, 1), 0.25);
    }

    #[test]
    fn all_presets_are_symmetric_graphons() {
        for source in ["constant:1", "sbm:3,1,0.1", "product", "mean", "min"] {
            let p: KernelPreset = source.parse().unwrap();
            for n in [3, 6, 9] {
                let w = discretize_preset(&p, n, 4, true).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(w.kernel(i, j), w.kernel(j, i));
                    }
                }
            }
        }
    }
}
