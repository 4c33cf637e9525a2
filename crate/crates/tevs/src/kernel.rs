//! Gram matrices over a dataset and positive-semidefiniteness checks.
//!
//! Two kernels are available: the elastic inner product itself, which is
//! positive definite by construction, and a Gaussian of the induced elastic
//! distance, `exp(-gamma * dist^2)`, which is useful in practice but carries
//! no definiteness guarantee (failures are reported by the check, not raised
//! as errors).
//!
//! The check runs a cyclic Jacobi eigen-solver rather than a Cholesky
//! factorization so that a violation comes back with its magnitude (the
//! smallest eigenvalue) instead of a bare failure.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::Dataset;
use crate::tep::{distance, teip};

/// Which kernel filled a [`GramMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelTag {
    /// Pairwise elastic inner products.
    Teip,
    /// `exp(-gamma * distance^2)` of the induced elastic distance.
    GaussianDistance,
}

impl KernelTag {
    pub fn name(&self) -> &'static str {
        match self {
            KernelTag::Teip => "teip",
            KernelTag::GaussianDistance => "gaussian_distance",
        }
    }
}

/// Outcome of a PSD check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub tol: f64,
}

/// A symmetric matrix of pairwise kernel values.
///
/// Symmetry is exact by construction: each unordered pair is evaluated once.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    n: usize,
    values: Vec<f64>,
    labels: Vec<String>,
    kernel: KernelTag,
    nu: f64,
    gamma: Option<f64>,
    min_eigenvalue: Option<f64>,
}

impl GramMatrix {
    /// Wraps a raw row-major square matrix (mainly for checking matrices that
    /// were not produced by [`gram`]). Symmetry is verified by `psd_check`,
    /// not here.
    pub fn from_rows(rows: Vec<Vec<f64>>, kernel: KernelTag, nu: f64) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Ok(GramMatrix {
            n,
            values,
            labels: (0..n).map(|i| i.to_string()).collect(),
            kernel,
            nu,
            gamma: None,
            min_eigenvalue: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row-major storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kernel(&self) -> KernelTag {
        self.kernel
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Smallest eigenvalue found by the last [`GramMatrix::psd_check`] run.
    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.min_eigenvalue
    }

    /// Decides positive semidefiniteness: the matrix passes when its smallest
    /// eigenvalue is at least `-tol * max(1, ||K||_2)`.
    pub fn psd_check(&mut self, tol: f64) -> Result<PsdReport> {
        let eigenvalues = jacobi_eigenvalues(&self.values, self.n)?;
        let (min_eig, norm2) = match (eigenvalues.first(), eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => (lo, lo.abs().max(hi.abs())),
            _ => (0.0, 0.0),
        };
        self.min_eigenvalue = Some(min_eig);
        Ok(PsdReport {
            psd: min_eig >= -tol * norm2.max(1.0),
            min_eigenvalue: min_eig,
            tol,
        })
    }
}

/// Builds the Gram matrix of a dataset under the chosen kernel.
///
/// `gamma` is only consulted for [`KernelTag::GaussianDistance`]; it must be
/// finite and non-negative there. Pairs are evaluated independently (and in
/// parallel), each unordered pair once, so the result is symmetric bit for
/// bit and deterministic.
pub fn gram(dataset: &Dataset, kernel: KernelTag, nu: f64, gamma: Option<f64>) -> Result<GramMatrix> {
    let gamma = match kernel {
        KernelTag::Teip => None,
        KernelTag::GaussianDistance => {
            let g = gamma.unwrap_or(1.0);
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidGamma { value: g });
            }
            Some(g)
        }
    };
    let series = dataset.series();
    let n = series.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let entries: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| match kernel {
            KernelTag::Teip => teip(&series[i], &series[j], nu),
            KernelTag::GaussianDistance => {
                let d = distance(&series[i], &series[j], nu)?;
                Ok((-gamma.unwrap() * d * d).exp())
            }
        })
        .collect::<Result<_>>()?;

    let mut values = vec![0.0; n * n];
    for (&(i, j), &v) in pairs.iter().zip(&entries) {
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    Ok(GramMatrix {
        n,
        values,
        labels: (0..n).map(|i| dataset.label_or_index(i)).collect(),
        kernel,
        nu,
        gamma,
        min_eigenvalue: None,
    })
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues of an exactly symmetric matrix, sorted ascending, by cyclic
/// Jacobi rotations. Sweeps run until the off-diagonal Frobenius norm drops
/// below `1e-12 * ||K||_F`.
pub fn jacobi_eigenvalues(values: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(values.len(), n * n, "matrix storage must be n*n");
    for i in 0..n {
        for j in (i + 1)..n {
            if values[i * n + j] != values[j * n + i] {
                return Err(Error::AsymmetricInput { row: i, col: j });
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = values.to_vec();
    let frobenius: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = 1e-12 * frobenius;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = {
            let mut acc = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    acc += 2.0 * a[i * n + j] * a[i * n + j];
                }
            }
            acc.sqrt()
        };
        if off <= target {
            let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            eigenvalues.sort_by(f64::total_cmp);
            return Ok(eigenvalues);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                // stable rotation angle (Numerical Recipes formulation)
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = {
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::EigenConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}
