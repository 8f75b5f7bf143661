use std::collections::BTreeMap;

use rayon::prelude::*;

use super::distribution::CountDistribution;
use crate::geometry::Body;
use crate::lattice::{count_at, ShiftStream, MAX_RESAMPLE};

/// Samples drawn from each independent substream. Fixed so results do not depend on the
/// number of worker threads.
pub const SAMPLES_PER_STREAM: u64 = 4096;

/// Empirical law of the count from `samples` seeded dyadic shifts. Shifts that put a lattice
/// point on the boundary are redrawn and tallied in `redraws`.
pub fn mc_distribution<B: Body + ?Sized>(body: &B, samples: u64, seed: u64) -> CountDistribution {
    let d = body.ambient_dim();
    let streams = samples.div_ceil(SAMPLES_PER_STREAM);
    let partials: Vec<(BTreeMap<u64, u64>, u64)> = (0..streams)
        .into_par_iter()
        .map(|stream| {
            let n = SAMPLES_PER_STREAM.min(samples - stream * SAMPLES_PER_STREAM);
            let mut rng = ShiftStream::new(seed, stream);
            let mut counts = BTreeMap::new();
            let mut redraws = 0;
            for _ in 0..n {
                let mut r = count_at(body, rng.next_shift(d).coords());
                let mut attempts = 1;
                while !r.is_generic() && attempts < MAX_RESAMPLE {
                    redraws += 1;
                    attempts += 1;
                    r = count_at(body, rng.next_shift(d).coords());
                }
                *counts.entry(r.count).or_insert(0) += 1;
            }
            (counts, redraws)
        })
        .collect();
    let mut counts = BTreeMap::new();
    let mut redraws = 0;
    for (c, r) in partials {
        for (k, v) in c {
            *counts.entry(k).or_insert(0) += v;
        }
        redraws += r;
    }
    CountDistribution::Empirical { counts, samples, seed, redraws }
}
