//! Fitness-distance sampling of tabu local optima.

use crate::error::{Error, Result};
use crate::harness::{derive_seed, random_solution};
use crate::model::{evaluate, hamming, Instance, Solution};
use crate::tabu::{run_tabu, TabuParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{Read, Write};

pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LandscapeSample {
    /// Hamming distance to the reference over `(x, y)`.
    pub distance: usize,
    /// Reference value minus sample value.
    pub gap: i64,
    pub sample_value: i64,
}

/// Runs tabu search from `n_samples` random starts and measures each result
/// against `reference`, or against the best sample when none is given.
pub fn sample_landscape(
    inst: &Instance,
    n_samples: usize,
    tabu: &TabuParams,
    reference: Option<&Solution>,
    master_seed: u64,
) -> Result<Vec<LandscapeSample>> {
    if n_samples == 0 {
        return Err(Error::Param("at least one sample is required".into()));
    }
    let reference = reference
        .map(|r| -> Result<(Solution, i64)> { Ok((r.clone(), evaluate(inst, r)?)) })
        .transpose()?;

    let mut optima = Vec::with_capacity(n_samples);
    for k in 0..n_samples as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, k));
        let start = random_solution(inst.m(), inst.n(), &mut rng);
        let params = tabu.clone().with_seed(rng.gen());
        let out = run_tabu(inst, &start, &params, None)?;
        optima.push((out.best, out.value));
    }

    let (ref_sol, ref_value) = match reference {
        Some(r) => r,
        None => {
            // first sample among those with the highest value
            let best = optima
                .iter()
                .enumerate()
                .max_by_key(|(k, (_, v))| (*v, std::cmp::Reverse(*k)))
                .map(|(k, _)| k)
                .expect("n_samples >= 1");
            optima[best].clone()
        }
    };

    optima
        .iter()
        .map(|(sol, value)| {
            Ok(LandscapeSample {
                distance: hamming(sol, &ref_sol)?,
                gap: ref_value - value,
                sample_value: *value,
            })
        })
        .collect()
}

/// Writes `distance,gap` rows sorted by distance, then gap.
pub fn write_landscape_csv<W: Write>(samples: &[LandscapeSample], sink: W) -> Result<()> {
    let mut rows: Vec<(usize, i64)> = samples.iter().map(|s| (s.distance, s.gap)).collect();
    rows.sort_unstable();
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(["distance", "gap"])?;
    for (distance, gap) in rows {
        wtr.write_record([distance.to_string(), gap.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads back the `(distance, gap)` rows of [`write_landscape_csv`].
pub fn read_landscape_csv<R: Read>(source: R) -> Result<Vec<(usize, i64)>> {
    let mut rdr = csv::Reader::from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["distance", "gap"] {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            msg: "expected header `distance,gap`".into(),
        });
    }
    let mut rows = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |idx: usize| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::Parse {
                line: k + 2,
                column: idx + 1,
                msg: "missing field".into(),
            })
        };
        let bad = |idx: usize| Error::Parse {
            line: k + 2,
            column: idx + 1,
            msg: "not an integer".into(),
        };
        let distance = field(0)?.parse().map_err(|_| bad(0))?;
        let gap = field(1)?.parse().map_err(|_| bad(1))?;
        rows.push((distance, gap));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate_random_instance;
    use crate::model::fixtures::e1;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn e1_samples_reach_the_optimum() {
        let samples = sample_landscape(&e1(), 50, &TabuParams::default(), None, 3).unwrap();
        assert_eq!(samples.len(), 50);
        assert!(samples.iter().any(|s| s.gap == 0));
        assert!(samples.iter().all(|s| s.gap >= 0 && s.sample_value + s.gap == 5));
    }

    #[test]
    fn single_sample_is_its_own_reference() {
        let inst = generate_random_instance(6, 9, -20, 20, 1).unwrap();
        let samples = sample_landscape(&inst, 1, &TabuParams::default(), None, 0).unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!((samples[0].distance, samples[0].gap), (0, 0));
    }

    #[test]
    fn supplied_reference_equal_to_a_sample() {
        let inst = generate_random_instance(10, 10, -50, 50, 2).unwrap();
        let params = TabuParams::default();
        // reproduce sample 0 by hand to obtain a reference that coincides with it
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(17, 0));
        let start = random_solution(10, 10, &mut rng);
        let first = run_tabu(&inst, &start, &params.clone().with_seed(rng.gen()), None).unwrap();
        let samples = sample_landscape(&inst, 5, &params, Some(&first.best), 17).unwrap();
        assert_eq!((samples[0].distance, samples[0].gap), (0, 0));
        assert_eq!(samples[0].sample_value, first.value);
    }

    #[test]
    fn errors() {
        let inst = e1();
        assert!(sample_landscape(&inst, 0, &TabuParams::default(), None, 0).is_err());
        let wrong = Solution::zeros(3, 2);
        assert!(sample_landscape(&inst, 2, &TabuParams::default(), Some(&wrong), 0).is_err());
    }

    #[test]
    fn csv_shapes() {
        let mut out = Vec::new();
        write_landscape_csv(&[], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "distance,gap\n");

        let samples = [
            LandscapeSample { distance: 4, gap: 2, sample_value: 0 },
            LandscapeSample { distance: 1, gap: 7, sample_value: 0 },
            LandscapeSample { distance: 4, gap: 1, sample_value: 0 },
        ];
        let mut out = Vec::new();
        write_landscape_csv(&samples, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "distance,gap\n1,7\n4,1\n4,2\n");
    }

    #[test]
    fn csv_rejects_wrong_header() {
        assert!(read_landscape_csv("d,g\n1,2\n".as_bytes()).is_err());
        assert!(read_landscape_csv("distance,gap\n1,x\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip(rows in prop::collection::vec((0usize..200, -1000i64..1000), 0..50)) {
            let samples: Vec<LandscapeSample> = rows
                .iter()
                .map(|&(distance, gap)| LandscapeSample { distance, gap, sample_value: 0 })
                .collect();
            let mut out = Vec::new();
            write_landscape_csv(&samples, &mut out).unwrap();
            let mut expected = rows.clone();
            expected.sort_unstable();
            prop_assert_eq!(read_landscape_csv(out.as_slice()).unwrap(), expected);
        }
    }
}
