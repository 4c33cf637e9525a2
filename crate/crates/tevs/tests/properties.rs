//! Cross-module property suite: file round-trips, construction invariants,
//! and orthogonalization guarantees on randomized families.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use tevs::algebra::{ominus, oplus, otimes};
use tevs::io::{read_csv, read_json, write_csv, write_json};
use tevs::kernel::{gram, KernelTag};
use tevs::ortho::gram_schmidt;
use tevs::tep::{norm, teip};
use tevs::{Dataset, Sample, TimeSeries};

/// Any finite, nonzero f64 with a full-length mantissa now and then, to make
/// the shortest-representation round trip work for its living.
fn awkward_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-1e12f64..1e12).prop_filter("nonzero", |v| *v != 0.0),
        Just(5e-324),
        Just(-5e-324),
        Just(0.1 + 0.2),
        Just(f64::MIN_POSITIVE),
        Just(-1.0e-17),
    ]
}

fn arbitrary_series(dim: usize) -> impl Strategy<Value = TimeSeries> {
    (
        proptest::collection::btree_set(-1_000_000i64..1_000_000, 0..8),
        proptest::collection::vec(awkward_value(), 8 * dim),
    )
        .prop_map(move |(ticks, values)| {
            let samples = ticks
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    Sample::new(values[i * dim..(i + 1) * dim].to_vec(), t as f64 * 0.001)
                })
                .collect();
            TimeSeries::validate(samples).unwrap()
        })
}

fn dataset_bits(dataset: &Dataset) -> Vec<Vec<(u64, Vec<u64>)>> {
    dataset
        .series()
        .iter()
        .map(|s| {
            s.samples()
                .iter()
                .map(|x| (x.timestamp.to_bits(), x.value.iter().map(|c| c.to_bits()).collect()))
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn json_round_trip_preserves_bits(series in proptest::collection::vec(arbitrary_series(2), 0..5)) {
        // an empty dataset has no series entries to hang labels on
        let labels = (!series.is_empty())
            .then(|| (0..series.len()).map(|i| format!("s{i}")).collect());
        let dataset = Dataset::new(series, labels).unwrap();
        let mut buf = Vec::new();
        write_json(&mut buf, &dataset).unwrap();
        let back = read_json(&mut buf.as_slice(), None).unwrap();
        prop_assert_eq!(dataset_bits(&back), dataset_bits(&dataset));
        prop_assert_eq!(back.labels(), dataset.labels());
    }

    #[test]
    fn csv_round_trip_preserves_bits(series in proptest::collection::vec(arbitrary_series(1), 1..5)) {
        // csv carries d = 1 only; empty series vanish in csv, so skip them
        prop_assume!(series.iter().all(|s| !s.is_empty()));
        let labels = (0..series.len()).map(|i| format!("s{i}")).collect();
        let dataset = Dataset::new(series, Some(labels)).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &dataset).unwrap();
        let back = read_csv(&mut buf.as_slice(), None).unwrap();
        prop_assert_eq!(dataset_bits(&back), dataset_bits(&dataset));
        prop_assert_eq!(back.labels(), dataset.labels());
    }

    #[test]
    fn validated_series_invariants_hold_by_scan(
        raw in proptest::collection::vec((any::<f64>(), -1e6f64..1e6), 0..10)
    ) {
        let samples: Vec<Sample> = raw.iter().map(|&(v, t)| Sample::scalar(v, t)).collect();
        if let Ok(series) = TimeSeries::validate(samples) {
            prop_assert!(series.samples().windows(2).all(|w| w[0].timestamp < w[1].timestamp));
            prop_assert!(series.samples().iter().all(|s| s.value.iter().any(|&c| c != 0.0)));
        }
        let samples: Vec<Sample> = raw.iter().map(|&(v, t)| Sample::scalar(v, t)).collect();
        if let Ok(series) = TimeSeries::sanitize(samples, 1e-12) {
            prop_assert!(series.samples().windows(2).all(|w| w[0].timestamp < w[1].timestamp));
            prop_assert!(series.samples().iter().all(|s| s.value.iter().all(|&c| c != 0.0)));
        }
    }
}

#[test]
fn gram_schmidt_basis_is_orthogonal_for_random_families() {
    let mut rng = rng(0xB1);
    for _ in 0..20 {
        let family: Vec<TimeSeries> = (0..10)
            .map(|_| {
                loop {
                    let s = random_grid_series(&mut rng, 12, 1);
                    if s.len() >= 2 {
                        return s;
                    }
                }
            })
            .collect();
        let result = gram_schmidt(&family, 0.01, 1e-10, false).unwrap();
        // random integer families are independent almost surely
        assert!(result.dropped.is_empty());
        assert!(result.gram_residual <= 1e-8, "residual {}", result.gram_residual);
        // pairwise, scaled by the element norms
        for i in 0..result.basis.len() {
            for j in (i + 1)..result.basis.len() {
                let off = teip(&result.basis[i], &result.basis[j], 0.01).unwrap().abs();
                let scale = norm(&result.basis[i], 0.01).unwrap() * norm(&result.basis[j], 0.01).unwrap();
                assert!(off <= 1e-10 * scale.max(1.0));
            }
        }
    }
}

#[test]
fn gram_schmidt_preserves_span() {
    let mut rng = rng(0xB2);
    for _ in 0..20 {
        let family: Vec<TimeSeries> = (0..5)
            .map(|_| loop {
                let s = random_grid_series(&mut rng, 10, 1);
                if s.len() >= 2 {
                    break s;
                }
            })
            .collect();
        let result = gram_schmidt(&family, 0.01, 1e-10, false).unwrap();
        assert!(result.dropped.is_empty());
        for input in &family {
            // rebuild the input from its projections onto the basis
            let mut rebuilt = TimeSeries::empty();
            for e in &result.basis {
                let c = teip(input, e, 0.01).unwrap() / teip(e, e, 0.01).unwrap();
                rebuilt = oplus(&rebuilt, &otimes(c, e).unwrap()).unwrap();
            }
            let residual = norm(&ominus(input, &rebuilt).unwrap(), 0.01).unwrap();
            let scale = norm(input, 0.01).unwrap();
            assert!(residual <= 1e-6 * scale, "residual {residual} vs norm {scale}");
        }
    }
}

#[test]
fn random_gaussian_grams_report_rather_than_fail() {
    // the gaussian-of-distance kernel has no definiteness guarantee; the
    // check must report the smallest eigenvalue either way
    let mut rng = rng(0xB3);
    let series: Vec<TimeSeries> = (0..12)
        .map(|_| {
            let len = rng.gen_range(1..=10);
            random_series(&mut rng, len, 2)
        })
        .collect();
    let dataset = Dataset::new(series, None).unwrap();
    let mut matrix = gram(&dataset, KernelTag::GaussianDistance, 0.5, Some(0.1)).unwrap();
    let report = matrix.psd_check(1e-8).unwrap();
    assert!(report.min_eigenvalue.is_finite());
    assert_eq!(matrix.min_eigenvalue(), Some(report.min_eigenvalue));
}
