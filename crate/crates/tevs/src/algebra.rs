//! The vector-space operations on series: timestamp-merging addition,
//! scalar multiplication, and subtraction.
//!
//! Addition merges two series by timestamp. Distinct timestamps keep their
//! sample; equal timestamps add the values coordinatewise, and a sum that is
//! exactly the zero vector is dropped from the result. Cancellation is exact
//! bitwise comparison, never tolerance-based, so results are reproducible;
//! the flip side is that near-zero floating-point sums survive, and
//! associativity can fail under rounding (it holds exactly on integer-valued
//! inputs).

use crate::error::{Error, Result};
use crate::series::{Sample, TimeSeries};

/// Scalar multiplication: scales every value, timestamps unchanged.
///
/// `0 ⊗ A` is the empty series (every product is the suppressed zero vector).
/// A nonzero scalar preserves the length except in the degenerate case where
/// a product underflows to the zero vector, which is suppressed like any
/// other zero sum.
pub fn otimes(lambda: f64, series: &TimeSeries) -> Result<TimeSeries> {
    if !lambda.is_finite() {
        return Err(Error::NonFiniteScalar { value: lambda });
    }
    if lambda == 0.0 {
        return Ok(TimeSeries::empty());
    }
    let mut out = Vec::with_capacity(series.len());
    for (index, sample) in series.samples().iter().enumerate() {
        let value: Vec<f64> = sample.value.iter().map(|&c| lambda * c).collect();
        if value.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        let scaled = Sample::new(value, sample.timestamp);
        if !scaled.is_zero() {
            out.push(scaled);
        }
    }
    Ok(TimeSeries::from_validated(out))
}

/// Series addition: a two-pointer merge over timestamps.
///
/// The earlier timestamp copies its sample; equal timestamps add values (an
/// exactly-zero sum is dropped); once one input is exhausted the rest of the
/// other is appended, which makes the empty series neutral and the operation
/// reversible.
pub fn oplus(a: &TimeSeries, b: &TimeSeries) -> Result<TimeSeries> {
    check_dimensions(a, b)?;
    let (sa, sb) = (a.samples(), b.samples());
    let mut out = Vec::with_capacity(sa.len() + sb.len());
    let (mut i, mut j) = (0, 0);
    while i < sa.len() && j < sb.len() {
        if sa[i].timestamp < sb[j].timestamp {
            out.push(sa[i].clone());
            i += 1;
        } else if sa[i].timestamp > sb[j].timestamp {
            out.push(sb[j].clone());
            j += 1;
        } else {
            let value: Vec<f64> = sa[i]
                .value
                .iter()
                .zip(&sb[j].value)
                .map(|(&x, &y)| x + y)
                .collect();
            // the summed sample takes the left operand's timestamp bits
            let sum = Sample::new(value, sa[i].timestamp);
            if !sum.is_zero() {
                out.push(sum);
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&sa[i..]);
    out.extend_from_slice(&sb[j..]);
    Ok(TimeSeries::from_validated(out))
}

/// Series subtraction: `A ⊕ ((-1) ⊗ B)`.
pub fn ominus(a: &TimeSeries, b: &TimeSeries) -> Result<TimeSeries> {
    oplus(a, &otimes(-1.0, b)?)
}

pub(crate) fn check_dimensions(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if let (Some(da), Some(db)) = (a.dimension(), b.dimension()) {
        if da != db {
            return Err(Error::DimensionMismatch {
                expected: da,
                found: db,
            });
        }
    }
    Ok(())
}
