//! Exhaustive generation of small epistemic spaces, used by sweeps and by
//! the acceptance suite's brute-force cross-checks.

use crate::sets::{ObsId, WorldId};
use crate::space::EpistemicSpace;

/// Options for [`enumerate_spaces`].
#[derive(Debug, Clone)]
pub struct SpaceFamily {
    pub max_worlds: usize,
    pub max_observables: usize,
}

impl SpaceFamily {
    pub fn new(max_worlds: usize, max_observables: usize) -> SpaceFamily {
        SpaceFamily {
            max_worlds,
            max_observables,
        }
    }
}

/// All spaces with `1..=max_worlds` worlds and `1..=max_observables`
/// observables, up to isomorphism (renaming of worlds), where
///
/// * extensions are nonempty and pairwise distinct,
/// * every world satisfies at least one observable, and
/// * no two worlds satisfy exactly the same observables.
///
/// Worlds without observables are deliberately excluded: no sound stream
/// exists for them, so the learning notions compared by the cross-checks do
/// not all apply.
pub fn enumerate_spaces(family: &SpaceFamily) -> Vec<EpistemicSpace> {
    let mut out = Vec::new();
    for n in 1..=family.max_worlds {
        let extensions: Vec<u64> = (1..(1u64 << n)).collect();
        let mut combo: Vec<u64> = Vec::new();
        gather(
            n,
            family.max_observables,
            &extensions,
            0,
            &mut combo,
            &mut out,
        );
    }
    out
}

fn gather(
    n: usize,
    max_obs: usize,
    extensions: &[u64],
    from: usize,
    combo: &mut Vec<u64>,
    out: &mut Vec<EpistemicSpace>,
) {
    if !combo.is_empty() && acceptable(n, combo) && canonical(n, combo) {
        out.push(build(n, combo));
    }
    if combo.len() == max_obs {
        return;
    }
    for i in from..extensions.len() {
        combo.push(extensions[i]);
        gather(n, max_obs, extensions, i + 1, combo, out);
        combo.pop();
    }
}

fn signatures(n: usize, combo: &[u64]) -> Vec<u64> {
    (0..n)
        .map(|w| {
            combo
                .iter()
                .enumerate()
                .filter(|(_, &ext)| ext & (1 << w) != 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i))
        })
        .collect()
}

fn acceptable(n: usize, combo: &[u64]) -> bool {
    let sigs = signatures(n, combo);
    if sigs.contains(&0) {
        return false; // uncovered world
    }
    for a in 0..n {
        for b in a + 1..n {
            if sigs[a] == sigs[b] {
                return false; // indistinguishable worlds
            }
        }
    }
    true
}

/// A combination is kept only when it is the lexicographically smallest
/// sorted extension list across all permutations of the worlds.
fn canonical(n: usize, combo: &[u64]) -> bool {
    let mut sorted: Vec<u64> = combo.to_vec();
    sorted.sort_unstable();
    let mut perm: Vec<usize> = (0..n).collect();
    let reference = sorted.clone();
    loop {
        let mut remapped: Vec<u64> = combo
            .iter()
            .map(|&ext| {
                (0..n)
                    .filter(|&w| ext & (1 << w) != 0)
                    .fold(0u64, |acc, w| acc | (1 << perm[w]))
            })
            .collect();
        remapped.sort_unstable();
        if remapped < reference {
            return false;
        }
        if !next_permutation(&mut perm) {
            return true;
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn build(n: usize, combo: &[u64]) -> EpistemicSpace {
    let worlds: Vec<String> = (0..n).map(|w| format!("w{w}")).collect();
    let observables: Vec<(String, Vec<String>)> = combo
        .iter()
        .enumerate()
        .map(|(i, &ext)| {
            (
                format!("o{i}"),
                (0..n)
                    .filter(|&w| ext & (1 << w) != 0)
                    .map(|w| format!("w{w}"))
                    .collect(),
            )
        })
        .collect();
    EpistemicSpace::new(worlds, observables).expect("generated spaces are structurally valid")
}

/// Convenience ids for generated spaces.
pub fn world_ids(space: &EpistemicSpace) -> impl Iterator<Item = WorldId> {
    (0..space.world_count()).map(WorldId)
}

pub fn obs_ids(space: &EpistemicSpace) -> impl Iterator<Item = ObsId> {
    (0..space.obs_count()).map(ObsId)
}
