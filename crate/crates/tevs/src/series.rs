//! Samples, time series, and datasets.
//!
//! A series is a finite ordered list of `(value, timestamp)` samples with
//! strictly increasing timestamps. Values live in `R^d` minus the all-zero
//! vector: the zero vector acts as the suppressed null element of the series
//! algebra and is never stored. The empty series is a valid value and plays
//! the role of the zero vector of the whole space.

use crate::error::{Error, Result};

/// Default replacement used by [`TimeSeries::sanitize`]: the smallest positive
/// double (2^-1074).
pub const DEFAULT_EPSILON: f64 = 5e-324;

/// One observation: a spatial value in `R^d` and its timestamp.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    /// Spatial coordinates; at least one must be nonzero for the sample to be
    /// storable in a [`TimeSeries`].
    pub value: Vec<f64>,
    /// Time of the observation; any finite real, not restricted to `[0, 1]`.
    pub timestamp: f64,
}

impl Sample {
    pub fn new(value: Vec<f64>, timestamp: f64) -> Self {
        Sample { value, timestamp }
    }

    /// One-dimensional sample.
    pub fn scalar(value: f64, timestamp: f64) -> Self {
        Sample {
            value: vec![value],
            timestamp,
        }
    }

    pub fn dimension(&self) -> usize {
        self.value.len()
    }

    /// Exact bitwise zero test against +0.0/-0.0 on every coordinate.
    pub(crate) fn is_zero(&self) -> bool {
        self.value.iter().all(|&c| c == 0.0)
    }
}

/// A validated discrete time series.
///
/// Construction goes through [`TimeSeries::validate`] or
/// [`TimeSeries::sanitize`]; after that the series is immutable and safe to
/// share across threads.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    samples: Vec<Sample>,
}

impl TimeSeries {
    /// The empty series (length zero). It is the neutral element of series
    /// addition and is compatible with every spatial dimension.
    pub fn empty() -> Self {
        TimeSeries { samples: Vec::new() }
    }

    /// Checks the raw samples and wraps them without reordering.
    ///
    /// Rejected inputs: non-finite coordinates or timestamps, an all-zero
    /// value, mixed dimensions, and timestamps that fail to strictly
    /// increase. An empty list is accepted and yields the empty series.
    pub fn validate(samples: Vec<Sample>) -> Result<Self> {
        let mut dim: Option<usize> = None;
        for (index, sample) in samples.iter().enumerate() {
            if !sample.timestamp.is_finite() {
                return Err(Error::NonFiniteTimestamp { index });
            }
            if sample.value.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteValue { index });
            }
            if sample.is_zero() {
                return Err(Error::ZeroSpatialValue { index });
            }
            match dim {
                None => dim = Some(sample.dimension()),
                Some(d) if d != sample.dimension() => {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: sample.dimension(),
                    })
                }
                _ => {}
            }
            if index > 0 {
                let prev = samples[index - 1].timestamp;
                if sample.timestamp <= prev {
                    return Err(Error::NonMonotoneTimestamps {
                        index,
                        prev,
                        next: sample.timestamp,
                    });
                }
            }
        }
        Ok(TimeSeries { samples })
    }

    /// Replaces every coordinate that is exactly zero by `epsilon`, then
    /// validates. Never reorders, so non-monotone timestamps still fail.
    pub fn sanitize(mut samples: Vec<Sample>, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidEpsilon { value: epsilon });
        }
        for sample in &mut samples {
            for coord in &mut sample.value {
                if *coord == 0.0 {
                    *coord = epsilon;
                }
            }
        }
        TimeSeries::validate(samples)
    }

    /// Builds a one-dimensional series from `(value, timestamp)` pairs.
    pub fn from_scalar_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        TimeSeries::validate(pairs.iter().map(|&(v, t)| Sample::scalar(v, t)).collect())
    }

    /// Wraps samples that are already known to satisfy the invariants
    /// (used by the series algebra, which preserves them by construction).
    pub(crate) fn from_validated(samples: Vec<Sample>) -> Self {
        debug_assert!(samples.windows(2).all(|w| w[0].timestamp < w[1].timestamp));
        debug_assert!(samples.iter().all(|s| !s.is_zero()));
        TimeSeries { samples }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Spatial dimension, or `None` for the empty series (which is
    /// compatible with every dimension).
    pub fn dimension(&self) -> Option<usize> {
        self.samples.first().map(Sample::dimension)
    }
}

/// A collection of series sharing one spatial dimension, with optional labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    labels: Option<Vec<String>>,
    dim: usize,
}

impl Dataset {
    /// Builds a dataset, inferring the dimension from the first nonempty
    /// series (1 if every series is empty).
    pub fn new(series: Vec<TimeSeries>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = series.iter().find_map(TimeSeries::dimension).unwrap_or(1);
        Dataset::with_dim(series, labels, dim)
    }

    /// Builds a dataset with an explicit dimension, checked against content.
    pub fn with_dim(
        series: Vec<TimeSeries>,
        labels: Option<Vec<String>>,
        dim: usize,
    ) -> Result<Self> {
        for s in &series {
            if let Some(d) = s.dimension() {
                if d != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: d,
                    });
                }
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != series.len() {
                return Err(Error::LabelCountMismatch {
                    series: series.len(),
                    labels: labels.len(),
                });
            }
        }
        Ok(Dataset { series, labels, dim })
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The label of series `i`, falling back to its index.
    pub fn label_or_index(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_well_formed_input() {
        let s = TimeSeries::from_scalar_pairs(&[(1.0, 0.0), (1.0, 0.5)]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.dimension(), Some(1));
    }

    #[test]
    fn validate_rejects_order_violation() {
        let err = TimeSeries::from_scalar_pairs(&[(1.0, 0.5), (1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneTimestamps { index: 1, .. }));
        // duplicates are just as bad
        let err = TimeSeries::from_scalar_pairs(&[(1.0, 0.5), (1.0, 0.5)]).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneTimestamps { .. }));
    }

    #[test]
    fn validate_rejects_zero_value() {
        let err = TimeSeries::from_scalar_pairs(&[(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::ZeroSpatialValue { index: 0 }));
        // negative zero is still zero
        let err = TimeSeries::from_scalar_pairs(&[(-0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::ZeroSpatialValue { index: 0 }));
        // a partially-zero vector is fine
        let s = TimeSeries::validate(vec![Sample::new(vec![0.0, 1.0], 0.0)]).unwrap();
        assert_eq!(s.dimension(), Some(2));
    }

    #[test]
    fn validate_rejects_mixed_dimensions_and_non_finite() {
        let err = TimeSeries::validate(vec![
            Sample::new(vec![1.0], 0.0),
            Sample::new(vec![1.0, 2.0], 1.0),
        ])
        .unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        ));
        let err = TimeSeries::from_scalar_pairs(&[(1.0, f64::NAN)]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteTimestamp { index: 0 }));
        let err = TimeSeries::from_scalar_pairs(&[(f64::INFINITY, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { index: 0 }));
    }

    #[test]
    fn empty_series_is_valid() {
        let s = TimeSeries::validate(Vec::new()).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.dimension(), None);
    }

    #[test]
    fn sanitize_replaces_exact_zeros() {
        let s = TimeSeries::sanitize(
            vec![Sample::scalar(0.0, 0.0), Sample::scalar(1.0, 0.1)],
            DEFAULT_EPSILON,
        )
        .unwrap();
        assert_eq!(s.samples()[0].value[0], DEFAULT_EPSILON);
        assert_eq!(s.samples()[1].value[0], 1.0);

        let s = TimeSeries::sanitize(vec![Sample::scalar(0.0, 0.0)], 0.5).unwrap();
        assert_eq!(s.samples()[0].value[0], 0.5);
    }

    #[test]
    fn sanitize_is_identity_without_zeros() {
        let raw = vec![Sample::scalar(2.0, 0.0), Sample::scalar(-3.0, 1.0)];
        let s = TimeSeries::sanitize(raw.clone(), 1e-12).unwrap();
        assert_eq!(s.samples(), raw.as_slice());
    }

    #[test]
    fn sanitize_never_reorders() {
        let err = TimeSeries::sanitize(
            vec![Sample::scalar(0.0, 1.0), Sample::scalar(1.0, 0.0)],
            1e-12,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonMonotoneTimestamps { .. }));
    }

    #[test]
    fn sanitize_rejects_bad_epsilon() {
        let err = TimeSeries::sanitize(vec![Sample::scalar(0.0, 0.0)], 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidEpsilon { .. }));
        let err = TimeSeries::sanitize(vec![Sample::scalar(0.0, 0.0)], -1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidEpsilon { .. }));
    }

    #[test]
    fn default_epsilon_is_smallest_positive_double() {
        assert_eq!(DEFAULT_EPSILON.to_bits(), 1);
        assert_eq!(DEFAULT_EPSILON / 2.0, 0.0);
    }

    #[test]
    fn dataset_checks_dimension_and_labels() {
        let a = TimeSeries::from_scalar_pairs(&[(1.0, 0.0)]).unwrap();
        let b = TimeSeries::validate(vec![Sample::new(vec![1.0, 2.0], 0.0)]).unwrap();
        let err = Dataset::new(vec![a.clone(), b], None).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));

        let err = Dataset::new(vec![a.clone()], Some(vec![])).unwrap_err();
        assert!(matches!(err, Error::LabelCountMismatch { .. }));

        let d = Dataset::new(vec![a, TimeSeries::empty()], None).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.label_or_index(1), "1");
    }
}
