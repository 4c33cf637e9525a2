//! Time-elastic vector spaces over discrete time series.
//!
//! This crate equips finite, non-uniformly sampled, variable-length time
//! series with a vector-space structure and an inner product that tolerates
//! time stretching:
//!
//! - [`series`]: validated samples, series, datasets ([`io`] for files);
//! - [`algebra`]: timestamp-merging addition `⊕`, scalar multiplication `⊗`;
//! - [`tep`]: the recursive product engine, the elastic inner product `teip`
//!   with its induced norm, distance and cosine, and the `twip` variants;
//! - [`ortho`]: Gram-Schmidt orthogonalization under a `teip`;
//! - [`kernel`]: Gram matrices and positive-semidefiniteness checks;
//! - [`textsim`]: elastic text matching and ranking.
//!
//! ```
//! use tevs::{tep, TimeSeries};
//!
//! // two short series measured at different instants
//! let a = TimeSeries::from_scalar_pairs(&[(1.0, 0.00), (2.0, 0.35)]).unwrap();
//! let b = TimeSeries::from_scalar_pairs(&[(1.5, 0.10), (2.0, 0.50)]).unwrap();
//!
//! let ip = tep::teip(&a, &b, 0.01).unwrap();
//! let d = tep::distance(&a, &b, 0.01).unwrap();
//! assert!(ip > 0.0 && d > 0.0);
//! ```

pub mod algebra;
pub mod error;
pub mod io;
pub mod kernel;
pub mod ortho;
pub mod series;
pub mod tep;
pub mod textsim;

pub use error::{Error, Result};
pub use series::{Dataset, Sample, TimeSeries, DEFAULT_EPSILON};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::series::{Sample, TimeSeries};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    /// One-dimensional series from `(value, timestamp)` pairs.
    pub fn s1(pairs: &[(f64, f64)]) -> TimeSeries {
        TimeSeries::from_scalar_pairs(pairs).unwrap()
    }

    /// Scalar integer-valued series on the dyadic grid `t = k / 4`,
    /// `k in 0..32`. Integer values on a shared grid keep every algebra
    /// operation exact, and grid collisions exercise the merge paths.
    pub fn grid_series(max_len: usize) -> impl Strategy<Value = TimeSeries> {
        proptest::collection::vec((0u32..32, -5i32..=5), 0..=max_len).prop_map(|raw| {
            let mut slots: BTreeMap<u32, f64> = BTreeMap::new();
            for (slot, v) in raw {
                if v != 0 {
                    slots.insert(slot, f64::from(v));
                }
            }
            TimeSeries::from_validated(
                slots
                    .into_iter()
                    .map(|(slot, v)| Sample::scalar(v, f64::from(slot) / 4.0))
                    .collect(),
            )
        })
    }
}
