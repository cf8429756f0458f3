//! Counter-based random streams for reproducible parallel sampling.
//!
//! The sample index range is cut into fixed-size chunks. Chunk `k` draws from
//! the ChaCha8 stream `(seed, k)`, so the output depends only on the seed and
//! the sample count, never on how many workers process the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

pub type StreamRng = ChaCha8Rng;

/// Samples drawn from one stream before moving to the next.
pub const CHUNK_SAMPLES: usize = 4096;

/// Independent stream `stream_id` under `seed`.
pub fn stream(seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives a child seed, e.g. for the points of a sweep.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `n` values with `draw`, chunk by chunk, in parallel on the current
/// rayon pool. Values come back in sample-index order.
pub fn sample_parallel<F>(seed: u64, n: usize, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&mut StreamRng) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK_SAMPLES);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK_SAMPLES;
            let len = CHUNK_SAMPLES.min(n - start);
            let mut rng = stream(seed, chunk as u64);
            (0..len)
                .map(|_| draw(&mut rng))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(parts.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..8).map(|_| stream(7, 0).random()).collect();
        let mut s0 = stream(7, 0);
        let mut s0b = stream(7, 0);
        let mut s1 = stream(7, 1);
        let x: Vec<u64> = (0..8).map(|_| s0.random()).collect();
        let y: Vec<u64> = (0..8).map(|_| s0b.random()).collect();
        let z: Vec<u64> = (0..8).map(|_| s1.random()).collect();
        assert_eq!(x, y);
        assert_ne!(x, z);
        assert_eq!(a[0], x[0]);
    }

    #[test]
    fn output_independent_of_worker_count() {
        let n = 3 * CHUNK_SAMPLES + 17;
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_parallel(99, n, |rng| Ok(rng.random::<f64>())))
                .unwrap()
        };
        let one = run(1);
        assert_eq!(one.len(), n);
        for threads in [2, 3, 8] {
            let other = run(threads);
            assert!(one
                .iter()
                .zip(&other)
                .all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), s.len());
    }
}
