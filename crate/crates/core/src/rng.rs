//! SplitMix64, the only source of randomness in the crate.

use alloc::vec::Vec;

use crate::field::{Fe, FieldSpec};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Output number `k` (0-based) of a generator seeded with `seed`, without
    /// stepping through the first `k` outputs.
    #[inline]
    pub fn output_at(seed: u64, k: u64) -> u64 {
        mix(seed.wrapping_add(GAMMA.wrapping_mul(k.wrapping_add(1))))
    }

    #[inline]
    pub fn next_fe(&mut self, field: &FieldSpec) -> Fe {
        field.from_u64(self.next_u64())
    }

    /// A `rows × cols` matrix filled row-major.
    pub fn matrix(&mut self, field: &FieldSpec, rows: usize, cols: usize) -> Vec<Vec<Fe>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| self.next_fe(field)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_stream() {
        let mut r = Rng::new(99);
        for k in 0..20 {
            assert_eq!(r.next_u64(), Rng::output_at(99, k));
        }
    }
}
