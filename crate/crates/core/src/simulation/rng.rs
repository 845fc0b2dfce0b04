use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::types::Decision;

/// Stream reserved for the noise that builds the band in an experiment.
pub const BAND_STREAM: u64 = 3 << 32;

/// Independent generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `h * 2^32 + t` with `h = 0` for H0 and `1` for H1.
pub fn trial_stream(hypothesis: Decision, trial: u64) -> u64 {
    debug_assert!(trial < 1 << 32);
    let h = match hypothesis {
        Decision::H0 => 0,
        Decision::H1 => 1,
    };
    (h << 32) + trial
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(7, 3).random();
        let b: u64 = stream_rng(7, 3).random();
        let c: u64 = stream_rng(7, 4).random();
        let d: u64 = stream_rng(8, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn trial_ids() {
        assert_eq!(trial_stream(Decision::H0, 5), 5);
        assert_eq!(trial_stream(Decision::H1, 5), (1 << 32) + 5);
    }
}
