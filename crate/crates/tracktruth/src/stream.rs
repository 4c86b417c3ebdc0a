//! Data sequences and eventually periodic stream specifications.
//!
//! Infinite observation streams are represented as a finite prefix followed
//! by a repeating nonempty cycle. On finite spaces this loses nothing for the
//! decision procedures: whenever some stream defeats a learner, an eventually
//! periodic one does too (see the verifier module), so these specifications
//! are exactly the witnesses the deciders produce and consume.

use crate::error::{Error, Result};
use crate::sets::{ObsId, ObsSet, WorldId};
use crate::space::EpistemicSpace;

/// A finite sequence of observations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DataSequence {
    items: Vec<ObsId>,
}

impl DataSequence {
    pub fn new(items: Vec<ObsId>) -> DataSequence {
        DataSequence { items }
    }

    pub fn empty() -> DataSequence {
        DataSequence { items: Vec::new() }
    }

    pub fn items(&self) -> &[ObsId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The set of observables occurring in the sequence.
    pub fn support(&self) -> ObsSet {
        self.items.iter().copied().collect()
    }

    pub fn concat(&self, other: &DataSequence) -> DataSequence {
        let mut items = self.items.clone();
        items.extend_from_slice(&other.items);
        DataSequence { items }
    }

    pub fn push(&mut self, p: ObsId) {
        self.items.push(p);
    }
}

/// An eventually periodic stream: `prefix · cycle · cycle · ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamSpec {
    prefix: DataSequence,
    cycle: DataSequence,
}

impl StreamSpec {
    pub fn new(prefix: Vec<ObsId>, cycle: Vec<ObsId>) -> Result<StreamSpec> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(StreamSpec {
            prefix: DataSequence::new(prefix),
            cycle: DataSequence::new(cycle),
        })
    }

    pub fn prefix(&self) -> &DataSequence {
        &self.prefix
    }

    pub fn cycle(&self) -> &DataSequence {
        &self.cycle
    }

    /// The observation at position `i` of the infinite stream.
    pub fn at(&self, i: usize) -> ObsId {
        if i < self.prefix.len() {
            self.prefix.items[i]
        } else {
            self.cycle.items[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `k` observations.
    pub fn unroll(&self, k: usize) -> DataSequence {
        DataSequence::new((0..k).map(|i| self.at(i)).collect())
    }

    /// Everything that ever occurs in the stream.
    pub fn support(&self) -> ObsSet {
        self.prefix.support().union(self.cycle.support())
    }
}

/// A sequence or stream is sound for a world when every occurring observable
/// contains that world: nothing false is ever observed.
pub fn is_sound_sequence(space: &EpistemicSpace, seq: &DataSequence, s: WorldId) -> bool {
    seq.support().is_subset(space.signature(s))
}

pub fn is_sound(space: &EpistemicSpace, spec: &StreamSpec, s: WorldId) -> bool {
    spec.support().is_subset(space.signature(s))
}

/// A sequence is complete for a world when everything observable at that
/// world occurs in it.
pub fn is_complete_sequence(space: &EpistemicSpace, seq: &DataSequence, s: WorldId) -> bool {
    space.signature(s).is_subset(seq.support())
}

pub fn is_complete(space: &EpistemicSpace, spec: &StreamSpec, s: WorldId) -> bool {
    space.signature(s).is_subset(spec.support())
}

/// Fairness on a negation-closed space: the stream is complete for `s`,
/// erroneous observations (those not containing `s`) occur only in the
/// prefix, and each error is later followed by its complement observable,
/// later in the prefix or anywhere in the cycle (which repeats forever).
pub fn is_fair(space: &EpistemicSpace, spec: &StreamSpec, s: WorldId) -> Result<bool> {
    let pairing = space.negation_pairing().ok_or_else(|| {
        let offender = space
            .observables()
            .iter()
            .find(|o| {
                let want = space.all_worlds().minus(o.extension);
                !space.observables().iter().any(|c| c.extension == want)
            })
            .map(|o| o.label.clone())
            .unwrap_or_default();
        Error::NotNegationClosed(offender)
    })?;
    if !is_complete(space, spec, s) {
        return Ok(false);
    }
    let sig = space.signature(s);
    if !spec.cycle().support().is_subset(sig) {
        return Ok(false);
    }
    let prefix = spec.prefix().items();
    for (i, &p) in prefix.iter().enumerate() {
        if sig.contains(p) {
            continue;
        }
        let correction = pairing[p.0];
        let fixed_later =
            prefix[i + 1..].contains(&correction) || spec.cycle().items().contains(&correction);
        if !fixed_later {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The default sound-and-complete stream for a world: no prefix, and the
/// world's observables cycling forever in declaration order. Errors out for
/// a world with no observables, since no sound stream for it exists at all.
pub fn canonical_sc_stream(space: &EpistemicSpace, s: WorldId) -> Result<StreamSpec> {
    let sig = space.signature(s);
    if sig.is_empty() {
        return Err(Error::NoSoundStream(space.world(s).name.clone()));
    }
    StreamSpec::new(Vec::new(), sig.iter().collect())
}
