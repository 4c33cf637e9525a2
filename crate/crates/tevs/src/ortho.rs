//! Gram-Schmidt orthogonalization under the elastic inner product, plus two
//! reference families of series for experiments.
//!
//! The procedure is the classical one (projection coefficients taken against
//! the original input vector), followed by a single re-orthogonalization pass
//! when the residual of the produced basis exceeds the tolerance; the exact
//! cancellations of series subtraction can amplify rounding enough to make
//! one classical pass insufficient for strongly correlated families.

use crate::algebra::{check_dimensions, ominus, otimes};
use crate::error::{Error, Result};
use crate::series::{Sample, TimeSeries, DEFAULT_EPSILON};
use crate::tep::teip;

/// Outcome of [`gram_schmidt`].
#[derive(Clone, Debug)]
pub struct OrthoResult {
    /// The orthogonal (or orthonormal) family, in input order.
    pub basis: Vec<TimeSeries>,
    /// Indices of inputs rejected as numerically dependent on their
    /// predecessors.
    pub dropped: Vec<usize>,
    /// `max |<e_i, e_j>|` over distinct basis elements after the run.
    pub gram_residual: f64,
}

/// Orthogonalizes a family of series under the elastic inner product with
/// stiffness `nu`.
///
/// An input whose residual norm falls to `tol` times its own norm is recorded
/// in `dropped` and excluded from the basis. With `normalize` set, every kept
/// element is scaled to unit norm.
pub fn gram_schmidt(
    family: &[TimeSeries],
    nu: f64,
    tol: f64,
    normalize: bool,
) -> Result<OrthoResult> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for pair in family.windows(2) {
        check_dimensions(&pair[0], &pair[1])?;
    }

    let mut basis: Vec<TimeSeries> = Vec::with_capacity(family.len());
    let mut selfs: Vec<f64> = Vec::with_capacity(family.len());
    let mut dropped = Vec::new();

    for (index, input) in family.iter().enumerate() {
        let residual = project_out(input, &basis, &selfs, nu)?;
        let input_self = teip(input, input, nu)?;
        let residual_self = teip(&residual, &residual, nu)?.max(0.0);
        if residual_self <= tol * tol * input_self {
            dropped.push(index);
        } else {
            basis.push(residual);
            selfs.push(residual_self);
        }
    }

    if normalized_residual(&basis, &selfs, nu)? > tol {
        for k in 1..basis.len() {
            let reprojected = project_out(&basis[k], &basis[..k], &selfs[..k], nu)?;
            selfs[k] = teip(&reprojected, &reprojected, nu)?.max(0.0);
            basis[k] = reprojected;
        }
    }

    if normalize {
        for (e, &s) in basis.iter_mut().zip(&selfs) {
            if s > 0.0 {
                *e = otimes(1.0 / s.sqrt(), e)?;
            }
        }
    }

    let mut gram_residual = 0.0f64;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            gram_residual = gram_residual.max(teip(&basis[i], &basis[j], nu)?.abs());
        }
    }

    Ok(OrthoResult {
        basis,
        dropped,
        gram_residual,
    })
}

/// Classical projection step: subtracts from `v` its components along the
/// given basis, with coefficients `<v, e_i> / <e_i, e_i>` taken against the
/// original `v`.
fn project_out(
    v: &TimeSeries,
    basis: &[TimeSeries],
    selfs: &[f64],
    nu: f64,
) -> Result<TimeSeries> {
    let mut out = v.clone();
    for (e, &s) in basis.iter().zip(selfs) {
        let coefficient = teip(v, e, nu)? / s;
        out = ominus(&out, &otimes(coefficient, e)?)?;
    }
    Ok(out)
}

fn normalized_residual(basis: &[TimeSeries], selfs: &[f64], nu: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let denom = (selfs[i] * selfs[j]).sqrt();
            if denom > 0.0 {
                worst = worst.max(teip(&basis[i], &basis[j], nu)?.abs() / denom);
            }
        }
    }
    Ok(worst)
}

/// A family of `n` increasing-length series sampled every 0.1 time units:
/// member `k` (1-based) holds `epsilon` at timestamps `0, 0.1, ...,
/// (k-2)/10` and the value 1 at `(k-1)/10`.
pub fn spike_family(n: usize, epsilon: f64) -> Result<Vec<TimeSeries>> {
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon { value: epsilon });
    }
    (1..=n)
        .map(|k| {
            let samples = (0..k)
                .map(|i| {
                    let value = if i + 1 == k { 1.0 } else { epsilon };
                    Sample::scalar(value, i as f64 / 10.0)
                })
                .collect();
            TimeSeries::validate(samples)
        })
        .collect()
}

/// A discrete sine-cosine family of `length` members, each uniformly sampled
/// at `t = i / length` over `[0, 1)`: the constant series, then sine/cosine
/// pairs of increasing integer frequency (for even lengths the last member is
/// the alternating cosine at the top frequency). Exact zero values are
/// replaced through sanitization so every member is a valid series.
///
/// Under the plain Euclidean pairing of aligned samples the family is
/// orthogonal; under an elastic inner product with small positive stiffness
/// it is not.
pub fn sincos_family(length: usize) -> Result<Vec<TimeSeries>> {
    if length < 2 {
        return Err(Error::FamilyTooSmall {
            required: 2,
            actual: length,
        });
    }
    let timestamps: Vec<f64> = (0..length).map(|i| i as f64 / length as f64).collect();
    let build = |values: Vec<f64>| -> Result<TimeSeries> {
        TimeSeries::sanitize(
            values
                .into_iter()
                .zip(&timestamps)
                .map(|(v, &t)| Sample::scalar(v, t))
                .collect(),
            DEFAULT_EPSILON,
        )
    };

    let mut family = Vec::with_capacity(length);
    family.push(build(vec![1.0; length])?);
    let tau = 2.0 * std::f64::consts::PI;
    for k in 1..=((length - 1) / 2) {
        let w = tau * k as f64;
        family.push(build(timestamps.iter().map(|&t| (w * t).sin()).collect())?);
        family.push(build(timestamps.iter().map(|&t| (w * t).cos()).collect())?);
    }
    if length % 2 == 0 {
        let w = tau * (length / 2) as f64;
        family.push(build(timestamps.iter().map(|&t| (w * t).cos()).collect())?);
    }
    debug_assert_eq!(family.len(), length);
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::s1;

    #[test]
    fn spike_family_smallest_instances() {
        let f = spike_family(1, 1e-6).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0], s1(&[(1.0, 0.0)]));

        let f = spike_family(2, 1e-6).unwrap();
        assert_eq!(f[1], s1(&[(1e-6, 0.0), (1.0, 0.1)]));
    }

    #[test]
    fn spike_family_members_are_valid_series() {
        for series in spike_family(11, DEFAULT_EPSILON).unwrap() {
            // re-validating the raw samples must succeed
            assert!(TimeSeries::validate(series.samples().to_vec()).is_ok());
        }
    }

    #[test]
    fn spike_family_rejects_bad_arguments() {
        assert!(matches!(spike_family(0, 1e-6), Err(Error::EmptyFamily)));
        assert!(matches!(
            spike_family(3, 0.0),
            Err(Error::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn sincos_family_has_length_members_of_length_samples() {
        for length in [2, 3, 8, 128] {
            let f = sincos_family(length).unwrap();
            assert_eq!(f.len(), length);
            for member in &f {
                assert_eq!(member.len(), length);
            }
        }
        assert!(matches!(
            sincos_family(1),
            Err(Error::FamilyTooSmall { .. })
        ));
    }

    #[test]
    fn gram_schmidt_keeps_orthogonal_input() {
        // these two share timestamps and opposite sign patterns, which makes
        // them orthogonal under the elastic inner product for every nu
        let family = vec![s1(&[(1.0, 0.0), (1.0, 1.0)]), s1(&[(1.0, 0.0), (-1.0, 1.0)])];
        let result = gram_schmidt(&family, 0.35, 1e-10, false).unwrap();
        assert!(result.dropped.is_empty());
        assert_eq!(result.basis.len(), 2);
        for (input, output) in family.iter().zip(&result.basis) {
            for (si, so) in input.samples().iter().zip(output.samples()) {
                assert!((si.value[0] - so.value[0]).abs() <= 1e-12);
                assert_eq!(si.timestamp, so.timestamp);
            }
        }
        assert!(result.gram_residual <= 1e-12);
    }

    #[test]
    fn gram_schmidt_drops_dependent_member() {
        let a = s1(&[(1.0, 0.0), (2.0, 1.0)]);
        let scaled = otimes(3.0, &a).unwrap();
        let b = s1(&[(1.0, 0.5)]);
        let result = gram_schmidt(&[a, scaled, b], 0.01, 1e-10, false).unwrap();
        assert_eq!(result.dropped, vec![1]);
        assert_eq!(result.basis.len(), 2);
    }

    #[test]
    fn gram_schmidt_normalizes_on_request() {
        let family = vec![
            s1(&[(2.0, 0.0)]),
            s1(&[(1.0, 0.0), (3.0, 0.5)]),
            s1(&[(-1.0, 0.25), (1.0, 0.75)]),
        ];
        let result = gram_schmidt(&family, 0.2, 1e-10, true).unwrap();
        for e in &result.basis {
            let n = crate::tep::norm(e, 0.2).unwrap();
            assert!((n - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_rejects_empty_family() {
        assert!(matches!(
            gram_schmidt(&[], 0.01, 1e-10, false),
            Err(Error::EmptyFamily)
        ));
    }
}
