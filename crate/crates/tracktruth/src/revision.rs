//! The three one-step belief-revision operators and their iteration.
//!
//! All three act on a [`RevisionState`]: a plausibility order whose domain is
//! the set of worlds still considered possible.
//!
//! * **mini**, conservative promotion: the currently most plausible worlds
//!   of the observed extension move strictly in front of everything else;
//!   every other pair keeps its old relation. Nothing is deleted.
//! * **cond**, world elimination: worlds outside the observed extension are
//!   removed and the order is restricted to the survivors. Observables keep
//!   their labels; their effective extensions shrink with the survivors.
//! * **lex**, block promotion: all worlds of the observed extension move in
//!   front of all others, preserving the relation inside each block and
//!   severing cross-block relations in favour of the extension.
//!
//! States are plain values with structural equality, so searches can hash
//! them; a step also yields a [`StepRecord`] for trace rendering.

use crate::error::{Error, Result};
use crate::order::Preorder;
use crate::sets::{ObsId, WorldId, WorldSet};
use crate::space::EpistemicSpace;
use crate::stream::DataSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RevisionMethod {
    Mini,
    Cond,
    Lex,
}

impl RevisionMethod {
    pub fn name(self) -> &'static str {
        match self {
            RevisionMethod::Mini => "mini",
            RevisionMethod::Cond => "cond",
            RevisionMethod::Lex => "lex",
        }
    }

    pub const ALL: [RevisionMethod; 3] = [
        RevisionMethod::Mini,
        RevisionMethod::Cond,
        RevisionMethod::Lex,
    ];
}

impl std::str::FromStr for RevisionMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mini" => Ok(RevisionMethod::Mini),
            "cond" => Ok(RevisionMethod::Cond),
            "lex" => Ok(RevisionMethod::Lex),
            other => Err(format!("unknown revision method `{other}`")),
        }
    }
}

/// What one revision step did, for traces and logs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub method: RevisionMethod,
    pub obs: ObsId,
    /// Worlds moved strictly to the front (mini: the promoted minima;
    /// lex: the whole observed block).
    pub promoted: WorldSet,
    /// Worlds removed from the state (cond only).
    pub eliminated: WorldSet,
    pub flag: Option<StepFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFlag {
    /// The observed extension was empty on the current worlds; mini and lex
    /// leave the state unchanged.
    EmptyExtension,
    /// Elimination removed every remaining world; if the actual world was
    /// still among them, it is gone for good.
    AllWorldsEliminated,
}

impl StepFlag {
    pub fn tag(self) -> &'static str {
        match self {
            StepFlag::EmptyExtension => "empty-extension-no-op",
            StepFlag::AllWorldsEliminated => "actual-world-eliminated-possible",
        }
    }
}

/// The state carried through a learning trace: a method plus a plausibility
/// order whose domain is the surviving world set (always the full space for
/// mini and lex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RevisionState {
    method: RevisionMethod,
    order: Preorder,
}

impl RevisionState {
    pub fn initial(method: RevisionMethod, prior: &Preorder) -> RevisionState {
        RevisionState {
            method,
            order: prior.clone(),
        }
    }

    pub fn method(&self) -> RevisionMethod {
        self.method
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    /// Worlds still considered possible.
    pub fn survivors(&self) -> WorldSet {
        self.order.domain()
    }

    /// The learner's conjecture: the minimal surviving worlds. Empty only
    /// after elimination has emptied the space.
    pub fn conjecture(&self) -> WorldSet {
        self.order.minima()
    }

    /// An observable's extension on the surviving worlds.
    pub fn current_extension(&self, space: &EpistemicSpace, p: ObsId) -> WorldSet {
        space.extension(p).intersect(self.order.domain())
    }

    /// Applies one revision step for this state's method.
    pub fn step(&self, space: &EpistemicSpace, p: ObsId) -> (RevisionState, StepRecord) {
        match self.method {
            RevisionMethod::Mini => self.mini_step(space, p),
            RevisionMethod::Cond => self.cond_step(space, p),
            RevisionMethod::Lex => self.lex_step(space, p),
        }
    }

    /// Conservative promotion: the most plausible worlds of the observed
    /// extension become strictly most plausible; nothing else changes.
    pub fn mini_step(&self, space: &EpistemicSpace, p: ObsId) -> (RevisionState, StepRecord) {
        let domain = self.order.domain();
        let ext = self.current_extension(space, p);
        let promoted = self.order.min_of(ext);
        let mut record = StepRecord {
            method: RevisionMethod::Mini,
            obs: p,
            promoted,
            eliminated: WorldSet::EMPTY,
            flag: None,
        };
        if promoted.is_empty() {
            record.flag = Some(StepFlag::EmptyExtension);
            return (self.clone(), record);
        }
        let rest = domain.minus(promoted);
        let rows = (0..self.order.world_count())
            .map(|i| {
                let w = WorldId(i);
                if !domain.contains(w) {
                    0
                } else if promoted.contains(w) {
                    // Keep relations inside the promoted set; above the rest.
                    (self.order.row(w) & promoted.bits()) | rest.bits()
                } else {
                    // Never at or below a promoted world.
                    self.order.row(w) & !promoted.bits()
                }
            })
            .collect();
        let order = Preorder::from_rows(self.order.world_count(), rows, domain)
            .expect("promotion preserves reflexivity and transitivity");
        (
            RevisionState {
                method: self.method,
                order,
            },
            record,
        )
    }

    /// World elimination: only worlds in the observed extension survive, and
    /// the order is restricted to them.
    pub fn cond_step(&self, space: &EpistemicSpace, p: ObsId) -> (RevisionState, StepRecord) {
        let domain = self.order.domain();
        let ext = self.current_extension(space, p);
        let eliminated = domain.minus(ext);
        let order = self.order.restricted_to(ext);
        let flag = if order.domain().is_empty() {
            Some(StepFlag::AllWorldsEliminated)
        } else {
            None
        };
        (
            RevisionState {
                method: self.method,
                order,
            },
            StepRecord {
                method: RevisionMethod::Cond,
                obs: p,
                promoted: WorldSet::EMPTY,
                eliminated,
                flag,
            },
        )
    }

    /// Block promotion: `s ⪯' t` iff `s ⪯ t` within the extension, or
    /// `s ⪯ t` outside it, or `s` is in the extension and `t` is not.
    pub fn lex_step(&self, space: &EpistemicSpace, p: ObsId) -> (RevisionState, StepRecord) {
        let domain = self.order.domain();
        let ext = self.current_extension(space, p);
        let mut record = StepRecord {
            method: RevisionMethod::Lex,
            obs: p,
            promoted: ext,
            eliminated: WorldSet::EMPTY,
            flag: None,
        };
        if ext.is_empty() {
            record.flag = Some(StepFlag::EmptyExtension);
            return (self.clone(), record);
        }
        let outside = domain.minus(ext);
        let rows = (0..self.order.world_count())
            .map(|i| {
                let w = WorldId(i);
                if !domain.contains(w) {
                    0
                } else if ext.contains(w) {
                    (self.order.row(w) & ext.bits()) | outside.bits()
                } else {
                    self.order.row(w) & outside.bits()
                }
            })
            .collect();
        let order = Preorder::from_rows(self.order.world_count(), rows, domain)
            .expect("block promotion preserves reflexivity and transitivity");
        (
            RevisionState {
                method: self.method,
                order,
            },
            record,
        )
    }
}

/// Folds a data sequence through the one-step operator; the empty sequence
/// is the identity. Fails with the offending position on unknown labels.
pub fn iterate(
    space: &EpistemicSpace,
    method: RevisionMethod,
    prior: &Preorder,
    seq: &DataSequence,
) -> Result<(RevisionState, Vec<StepRecord>)> {
    let mut state = RevisionState::initial(method, prior);
    let mut log = Vec::with_capacity(seq.len());
    for (pos, &p) in seq.items().iter().enumerate() {
        if p.0 >= space.obs_count() {
            return Err(Error::AtStep {
                pos,
                source: Box::new(Error::UnknownObservable(format!("#{}", p.0))),
            });
        }
        let (next, record) = state.step(space, p);
        log.push(record);
        state = next;
    }
    Ok((state, log))
}
