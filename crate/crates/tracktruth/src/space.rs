//! Epistemic spaces: finitely many worlds plus labelled observables.
//!
//! An observable is a set of worlds (the worlds at which it can be observed).
//! `O_s`, the set of observables containing a world `s`, acts as that world's
//! signature: a space is well-formed only if no two worlds share a signature,
//! so every world is in principle tellable apart from every other by what can
//! be observed at it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sets::{ObsId, ObsSet, WorldId, WorldSet};

pub const MAX_WORLDS: usize = 64;
pub const MAX_OBSERVABLES: usize = 64;

/// A possible world: a dense id plus a human-readable name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub id: WorldId,
    pub name: String,
}

/// A labelled observable with its extension (the worlds it contains).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    pub label: String,
    pub extension: WorldSet,
}

/// A finite epistemic space: worlds and observables, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicSpace {
    worlds: Vec<World>,
    observables: Vec<Observable>,
    /// `signatures[w]` is the set of observables containing world `w`.
    signatures: Vec<ObsSet>,
    world_index: HashMap<String, usize>,
    obs_index: HashMap<String, usize>,
}

impl EpistemicSpace {
    /// Builds a space from world names and `(label, member world names)` pairs.
    ///
    /// Structural problems (duplicate names, unknown members, size limits) are
    /// hard errors; semantic ones (duplicate extensions, indistinguishable
    /// worlds) are reported by [`validate`](Self::validate) instead, so that a
    /// malformed space can still be loaded and inspected.
    pub fn new(world_names: Vec<String>, observables: Vec<(String, Vec<String>)>) -> Result<Self> {
        if world_names.is_empty() {
            return Err(Error::EmptySpace);
        }
        if world_names.len() > MAX_WORLDS {
            return Err(Error::TooLarge {
                kind: "worlds",
                count: world_names.len(),
                max: MAX_WORLDS,
            });
        }
        if observables.len() > MAX_OBSERVABLES {
            return Err(Error::TooLarge {
                kind: "observables",
                count: observables.len(),
                max: MAX_OBSERVABLES,
            });
        }
        let mut world_index = HashMap::new();
        let mut worlds = Vec::with_capacity(world_names.len());
        for (i, name) in world_names.into_iter().enumerate() {
            if world_index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateWorldName(name));
            }
            worlds.push(World {
                id: WorldId(i),
                name,
            });
        }
        let mut obs_index = HashMap::new();
        let mut obs = Vec::with_capacity(observables.len());
        for (i, (label, members)) in observables.into_iter().enumerate() {
            if obs_index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateObservableLabel(label));
            }
            let mut extension = WorldSet::EMPTY;
            for m in members {
                let &w = world_index
                    .get(&m)
                    .ok_or_else(|| Error::UnknownWorld(m.clone()))?;
                extension.insert(WorldId(w));
            }
            obs.push(Observable { label, extension });
        }
        let signatures = (0..worlds.len())
            .map(|w| {
                obs.iter()
                    .enumerate()
                    .filter(|(_, o)| o.extension.contains(WorldId(w)))
                    .map(|(i, _)| ObsId(i))
                    .collect()
            })
            .collect();
        Ok(EpistemicSpace {
            worlds,
            observables: obs,
            signatures,
            world_index,
            obs_index,
        })
    }

    /// Test helper: build from string slices.
    pub fn from_parts(worlds: &[&str], observables: &[(&str, &[&str])]) -> Result<Self> {
        Self::new(
            worlds.iter().map(|s| s.to_string()).collect(),
            observables
                .iter()
                .map(|(l, ms)| (l.to_string(), ms.iter().map(|m| m.to_string()).collect()))
                .collect(),
        )
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn obs_count(&self) -> usize {
        self.observables.len()
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn all_observables(&self) -> ObsSet {
        ObsSet::full(self.observables.len())
    }

    pub fn world(&self, id: WorldId) -> &World {
        &self.worlds[id.0]
    }

    pub fn observable(&self, id: ObsId) -> &Observable {
        &self.observables[id.0]
    }

    pub fn extension(&self, id: ObsId) -> WorldSet {
        self.observables[id.0].extension
    }

    pub fn world_named(&self, name: &str) -> Result<WorldId> {
        self.world_index
            .get(name)
            .map(|&i| WorldId(i))
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn obs_labelled(&self, label: &str) -> Result<ObsId> {
        self.obs_index
            .get(label)
            .map(|&i| ObsId(i))
            .ok_or_else(|| Error::UnknownObservable(label.to_string()))
    }

    /// The signature `O_s` of a world: every observable containing it.
    pub fn observables_of(&self, s: WorldId) -> Result<ObsSet> {
        self.signatures
            .get(s.0)
            .copied()
            .ok_or(Error::WorldOutOfRange(s.0, self.worlds.len()))
    }

    /// Like [`observables_of`](Self::observables_of) for a known-valid id.
    pub fn signature(&self, s: WorldId) -> ObsSet {
        self.signatures[s.0]
    }

    pub fn world_names(&self, set: WorldSet) -> Vec<&str> {
        set.iter().map(|w| self.worlds[w.0].name.as_str()).collect()
    }

    pub fn obs_labels(&self, set: ObsSet) -> Vec<&str> {
        set.iter()
            .map(|o| self.observables[o.0].label.as_str())
            .collect()
    }

    /// Checks the semantic well-formedness conditions: pairwise-distinct world
    /// signatures and pairwise-distinct observable extensions. Empty
    /// extensions are legal but flagged, since revising by one never conveys
    /// information.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for a in 0..self.worlds.len() {
            for b in a + 1..self.worlds.len() {
                if self.signatures[a] == self.signatures[b] {
                    report.violations.push(Violation::IndistinguishableWorlds {
                        first: self.worlds[a].name.clone(),
                        second: self.worlds[b].name.clone(),
                    });
                }
            }
        }
        for a in 0..self.observables.len() {
            for b in a + 1..self.observables.len() {
                if self.observables[a].extension == self.observables[b].extension {
                    report.violations.push(Violation::DuplicateExtension {
                        first: self.observables[a].label.clone(),
                        second: self.observables[b].label.clone(),
                    });
                }
            }
        }
        for o in &self.observables {
            if o.extension.is_empty() {
                report.warnings.push(Warning::EmptyExtension {
                    label: o.label.clone(),
                });
            }
        }
        report
    }

    /// A space is strongly separated when no world's signature is contained
    /// in another's: every world has an observable the other lacks.
    pub fn is_strongly_separated(&self) -> bool {
        let n = self.worlds.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.signatures[a].is_subset(self.signatures[b]) {
                    return false;
                }
            }
        }
        true
    }

    /// If every observable has a complement observable (one whose extension
    /// is exactly the remaining worlds), returns `pairing[i] = complement of
    /// observable i`. Meaningful on spaces whose extensions are distinct.
    pub fn negation_pairing(&self) -> Option<Vec<ObsId>> {
        let full = self.all_worlds();
        let mut pairing = Vec::with_capacity(self.observables.len());
        for o in &self.observables {
            let want = full.minus(o.extension);
            let partner = self.observables.iter().position(|c| c.extension == want)?;
            pairing.push(ObsId(partner));
        }
        Some(pairing)
    }

    pub fn is_negation_closed(&self) -> bool {
        self.negation_pairing().is_some()
    }
}

/// Outcome of [`EpistemicSpace::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two worlds satisfy exactly the same observables.
    IndistinguishableWorlds { first: String, second: String },
    /// Two labels denote the same set of worlds.
    DuplicateExtension { first: String, second: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::IndistinguishableWorlds { first, second } => write!(
                f,
                "worlds `{first}` and `{second}` satisfy exactly the same observables"
            ),
            Violation::DuplicateExtension { first, second } => write!(
                f,
                "observables `{first}` and `{second}` have the same extension"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    EmptyExtension { label: String },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::EmptyExtension { label } => {
                write!(f, "observable `{label}` has an empty extension")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn overlap_space_is_well_formed() {
        let space = fixtures::overlap_space();
        let report = space.validate();
        assert!(report.ok());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn identical_signatures_are_reported() {
        let space = EpistemicSpace::from_parts(&["a", "b"], &[("p", &["a", "b"])]).unwrap();
        let report = space.validate();
        assert!(!report.ok());
        assert_eq!(
            report.violations,
            vec![Violation::IndistinguishableWorlds {
                first: "a".into(),
                second: "b".into()
            }]
        );
    }

    #[test]
    fn duplicate_extensions_are_reported() {
        let space =
            EpistemicSpace::from_parts(&["a", "b"], &[("p", &["a"]), ("q", &["a"]), ("r", &["b"])])
                .unwrap();
        let report = space.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            report.violations[0],
            Violation::DuplicateExtension {
                first: "p".into(),
                second: "q".into()
            }
        );
    }

    #[test]
    fn single_world_no_observables_is_fine() {
        let space = EpistemicSpace::from_parts(&["only"], &[]).unwrap();
        assert!(space.validate().ok());
        assert!(space.signature(WorldId(0)).is_empty());
    }

    #[test]
    fn empty_extension_is_a_warning_not_a_violation() {
        let space = EpistemicSpace::from_parts(&["a", "b"], &[("p", &["a"]), ("z", &[])]).unwrap();
        let report = space.validate();
        assert!(report.ok());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn signatures_on_overlap_space() {
        let space = fixtures::overlap_space();
        let s = space.world_named("s").unwrap();
        let u = space.world_named("u").unwrap();
        let sig_s = space.observables_of(s).unwrap();
        assert_eq!(space.obs_labels(sig_s), vec!["p", "q"]);
        let sig_u = space.observables_of(u).unwrap();
        assert_eq!(space.obs_labels(sig_u), vec!["p"]);
        assert!(space.world_named("nope").is_err());
    }

    #[test]
    fn world_in_no_observable_has_empty_signature() {
        let space = EpistemicSpace::from_parts(&["a", "b"], &[("p", &["a"])]).unwrap();
        let b = space.world_named("b").unwrap();
        assert!(space.observables_of(b).unwrap().is_empty());
    }

    #[test]
    fn separation_flags_on_named_spaces() {
        let triangle = fixtures::triangle_space();
        assert!(triangle.is_strongly_separated());
        assert!(!triangle.is_negation_closed());

        let diamond = fixtures::diamond_space();
        assert!(diamond.is_strongly_separated());
        let pairing = diamond.negation_pairing().unwrap();
        let p = diamond.obs_labelled("p").unwrap();
        let pbar = diamond.obs_labelled("pbar").unwrap();
        assert_eq!(pairing[p.0], pbar);
        assert_eq!(pairing[pbar.0], p);

        let nested = fixtures::nested_space();
        assert!(!nested.is_strongly_separated());
    }

    #[test]
    fn structural_errors_at_construction() {
        assert!(matches!(
            EpistemicSpace::from_parts(&[], &[]),
            Err(Error::EmptySpace)
        ));
        assert!(matches!(
            EpistemicSpace::from_parts(&["a", "a"], &[]),
            Err(Error::DuplicateWorldName(_))
        ));
        assert!(matches!(
            EpistemicSpace::from_parts(&["a"], &[("p", &["zzz"])]),
            Err(Error::UnknownWorld(_))
        ));
        assert!(matches!(
            EpistemicSpace::from_parts(&["a"], &[("p", &["a"]), ("p", &["a"])]),
            Err(Error::DuplicateObservableLabel(_))
        ));
    }
}
