//! Deterministic choice among witnesses.
//!
//! The default order picks the first witness (input order). A seeded order
//! picks a pseudo-random witness instead, keyed by a salt that identifies the
//! call site, so reruns with the same seed make the same choices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ChoiceOrder {
    pub seed: Option<u64>,
}

impl ChoiceOrder {
    pub const FIRST: ChoiceOrder = ChoiceOrder { seed: None };

    pub fn seeded(seed: u64) -> Self {
        ChoiceOrder { seed: Some(seed) }
    }

    pub fn is_default(&self) -> bool {
        self.seed.is_none()
    }

    /// Index of the chosen witness among `len` candidates.
    pub fn pick_index(&self, salt: &[u64], len: usize) -> Option<usize> {
        if len == 0 {
            return None;
        }
        match self.seed {
            None => Some(0),
            Some(seed) => {
                let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
                for &s in salt {
                    h = (h ^ s).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
                }
                Some(ChaCha8Rng::seed_from_u64(h).gen_range(0..len))
            }
        }
    }

    pub fn pick<T: Clone>(&self, salt: &[u64], items: &[T]) -> Option<T> {
        self.pick_index(salt, items.len()).map(|i| items[i].clone())
    }
}
