//! Shared helpers for the integration suites: space pools and seeded
//! random instances.
#![allow(dead_code)] // each suite uses its own subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tracktruth::enumerate::{enumerate_spaces, SpaceFamily};
use tracktruth::{DataSequence, EpistemicSpace, ObsId, Preorder, WorldId};

/// Every space with the given bounds, up to isomorphism, every world
/// covered by at least one observable.
pub fn space_pool(max_worlds: usize, max_obs: usize) -> Vec<EpistemicSpace> {
    enumerate_spaces(&SpaceFamily::new(max_worlds, max_obs))
}

/// A uniformly random level assignment, i.e. a random weak order.
pub fn random_total_prior(rng: &mut ChaCha8Rng, n: usize) -> Preorder {
    let levels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    Preorder::from_levels(&levels)
}

/// A random preorder: a handful of generating pairs, closed reflexively and
/// transitively. Sparse enough that incomparability is common.
pub fn random_preorder(rng: &mut ChaCha8Rng, n: usize) -> Preorder {
    let pair_count = rng.gen_range(0..=n);
    let pairs: Vec<(WorldId, WorldId)> = (0..pair_count)
        .map(|_| (WorldId(rng.gen_range(0..n)), WorldId(rng.gen_range(0..n))))
        .collect();
    Preorder::from_pairs(n, &pairs).expect("closure of any pair set is a preorder")
}

/// A random sound sequence for `target`: labels drawn from its signature.
pub fn random_sound_sequence(
    rng: &mut ChaCha8Rng,
    space: &EpistemicSpace,
    target: WorldId,
    max_len: usize,
) -> DataSequence {
    let sig: Vec<ObsId> = space.signature(target).iter().collect();
    if sig.is_empty() {
        return DataSequence::empty();
    }
    let len = rng.gen_range(0..=max_len);
    DataSequence::new((0..len).map(|_| sig[rng.gen_range(0..sig.len())]).collect())
}
