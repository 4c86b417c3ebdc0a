//! Semantic decision procedures for identification in the limit.
//!
//! The learner under scrutiny is the canonical one: start from a prior
//! plausibility order, revise by each incoming observation, conjecture the
//! minimal worlds. A world `s` is identified in the limit when on every
//! admissible stream the conjecture is eventually `{s}` forever; a prior is
//! appropriate for a space when every world is identified.
//!
//! Streams are infinite objects, but the decision is finite. Fix a target
//! `s`. Sound observations come from the finite alphabet `O_s`, and each one
//! deterministically transforms the revision state; pairing the state with
//! the subset of `O_s` seen so far gives a finite deterministic transition
//! system. Suppose some sound and complete stream keeps the conjecture
//! different from `{s}` infinitely often. Its run visits finitely many
//! (state, coverage) nodes, coverage stabilises at `O_s`, so some
//! full-coverage node with a wrong conjecture recurs, and the segment
//! between two of its visits closes a reachable cycle through it. Replaying
//! the finite path to that node and then that cycle forever is again a sound
//! and complete stream, and it fails in exactly the same way. Hence a
//! counterexample stream exists precisely when an eventually periodic one
//! does, which is what the searches below look for, and why every negative
//! verdict carries a finite prefix-plus-cycle witness.
//!
//! Fair streams (finitely many errors, each later corrected by its
//! complement observable) get the same treatment with a richer node: the
//! pending set tracks uncorrected errors, and a nondeterministic switch
//! marks the point after which observations stay sound. A witness is
//! reconstructed by replaying the path through the switch.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::order::{enumerate_preorders, enumerate_total_preorders, Preorder};
use crate::revision::{RevisionMethod, RevisionState};
use crate::sets::{ObsId, ObsSet, WorldId, WorldSet};
use crate::space::EpistemicSpace;
use crate::stream::{self, DataSequence, StreamSpec};
use crate::telltale::{cond_telltale_exists, mini_telltale_exists, TellTaleOutcome};

/// Search limits.
#[derive(Debug, Clone)]
pub struct VerifierConfig {
    /// Maximum number of product nodes a single decision may explore.
    pub node_budget: usize,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        VerifierConfig {
            node_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    /// Error-free streams: sound and complete for the target.
    SoundComplete,
    /// Fair streams on negation-closed spaces: finitely many errors, each
    /// later corrected by the complement observable.
    Fair,
}

impl StreamMode {
    pub fn name(self) -> &'static str {
        match self {
            StreamMode::SoundComplete => "sound-complete",
            StreamMode::Fair => "fair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecideStatus {
    Identified,
    NotIdentified,
    /// The target satisfies no observable, so no admissible stream for it
    /// exists; the learning question does not arise.
    NoSoundStream,
}

/// An error in a fair witness and where it is corrected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorFix {
    /// Position of the erroneous observation (0-based, in the prefix).
    pub position: usize,
    pub obs: ObsId,
    /// Position of the first later occurrence of the complement.
    pub corrected_at: usize,
}

/// Outcome of one identification decision.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub target: WorldId,
    pub status: DecideStatus,
    /// For a negative verdict: an eventually periodic stream on which the
    /// conjecture is wrong infinitely often.
    pub witness: Option<StreamSpec>,
    /// Fair mode only: the errors in the witness prefix and their fixes.
    pub error_fixes: Vec<ErrorFix>,
}

impl Verdict {
    fn identified(target: WorldId) -> Verdict {
        Verdict {
            target,
            status: DecideStatus::Identified,
            witness: None,
            error_fixes: Vec::new(),
        }
    }

    fn no_sound_stream(target: WorldId) -> Verdict {
        Verdict {
            target,
            status: DecideStatus::NoSoundStream,
            witness: None,
            error_fixes: Vec::new(),
        }
    }
}

/// Per-world verdicts for a whole space under one prior and method.
#[derive(Debug, Clone)]
pub struct SpaceVerdict {
    pub method: RevisionMethod,
    pub mode: StreamMode,
    pub per_world: Vec<Verdict>,
}

impl SpaceVerdict {
    /// The prior is appropriate when every world is identified. A world
    /// without any observable makes the space inappropriate here: the
    /// tell-tale characterisations it is checked against never apply to
    /// such worlds, and reporting them as vacuous successes would hide
    /// a degenerate input.
    pub fn appropriate(&self) -> bool {
        self.per_world
            .iter()
            .all(|v| v.status == DecideStatus::Identified)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.per_world
            .iter()
            .find(|v| v.status != DecideStatus::Identified)
    }
}

/// Interns revision states and caches whether each one conjectures exactly
/// the target.
struct StateArena {
    states: Vec<RevisionState>,
    index: HashMap<RevisionState, usize>,
    conjectures_target: Vec<bool>,
    target: WorldId,
}

impl StateArena {
    fn new(target: WorldId) -> StateArena {
        StateArena {
            states: Vec::new(),
            index: HashMap::new(),
            conjectures_target: Vec::new(),
            target,
        }
    }

    fn intern(&mut self, state: RevisionState) -> usize {
        if let Some(&ix) = self.index.get(&state) {
            return ix;
        }
        let ix = self.states.len();
        self.conjectures_target
            .push(state.conjecture() == WorldSet::singleton(self.target));
        self.index.insert(state.clone(), ix);
        self.states.push(state);
        ix
    }

    fn state(&self, ix: usize) -> &RevisionState {
        &self.states[ix]
    }
}

/// The product graph explored by [`decide_in_limit`]: nodes pair an interned
/// revision state with the coverage of the target's observables so far.
struct SoundProduct {
    labels: Vec<ObsId>,
    full: ObsSet,
    arena: StateArena,
    nodes: Vec<(usize, ObsSet)>,
    /// For each node, the successor node per label rank.
    succs: Vec<Vec<usize>>,
    /// Discovery edge of each node except the root.
    preds: Vec<Option<(usize, ObsId)>>,
}

impl SoundProduct {
    fn explore(
        space: &EpistemicSpace,
        prior: &Preorder,
        method: RevisionMethod,
        target: WorldId,
        budget: usize,
    ) -> Result<SoundProduct> {
        let full = space.signature(target);
        let labels: Vec<ObsId> = full.iter().collect();
        let mut arena = StateArena::new(target);
        let root = arena.intern(RevisionState::initial(method, prior));
        let mut product = SoundProduct {
            labels,
            full,
            arena,
            nodes: vec![(root, ObsSet::EMPTY)],
            succs: Vec::new(),
            preds: vec![None],
        };
        let mut node_index: HashMap<(usize, ObsSet), usize> = HashMap::new();
        node_index.insert(product.nodes[0], 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let (state_ix, cov) = product.nodes[v];
            let mut out = Vec::with_capacity(product.labels.len());
            for rank in 0..product.labels.len() {
                let p = product.labels[rank];
                let (next, _) = product.arena.state(state_ix).step(space, p);
                let next_ix = product.arena.intern(next);
                let next_cov = cov.union(ObsSet::singleton(p));
                let key = (next_ix, next_cov);
                let id = match node_index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = product.nodes.len();
                        if id >= budget {
                            return Err(Error::BudgetExceeded { budget });
                        }
                        node_index.insert(key, id);
                        product.nodes.push(key);
                        product.preds.push(Some((v, p)));
                        queue.push_back(id);
                        id
                    }
                };
                out.push(id);
            }
            product.succs.push(out);
        }
        Ok(product)
    }

    fn is_bad(&self, node: usize) -> bool {
        let (state_ix, cov) = self.nodes[node];
        cov == self.full && !self.arena.conjectures_target[state_ix]
    }

    /// Labels of the discovery path from the root to `node`.
    fn path_to(&self, node: usize) -> Vec<ObsId> {
        let mut labels = Vec::new();
        let mut v = node;
        while let Some((parent, label)) = self.preds[v] {
            labels.push(label);
            v = parent;
        }
        labels.reverse();
        labels
    }

    /// Shortest label cycle from `node` back to itself, if any.
    fn shortest_cycle(&self, node: usize) -> Option<Vec<ObsId>> {
        let mut pred: HashMap<usize, (usize, ObsId)> = HashMap::new();
        let mut queue = VecDeque::new();
        for rank in 0..self.labels.len() {
            let next = self.succs[node][rank];
            if next == node {
                return Some(vec![self.labels[rank]]);
            }
            if let Entry::Vacant(e) = pred.entry(next) {
                e.insert((node, self.labels[rank]));
                queue.push_back(next);
            }
        }
        while let Some(v) = queue.pop_front() {
            for rank in 0..self.labels.len() {
                let next = self.succs[v][rank];
                if next == node {
                    let mut labels = vec![self.labels[rank]];
                    let mut cur = v;
                    while cur != node {
                        let (parent, label) = pred[&cur];
                        labels.push(label);
                        cur = parent;
                    }
                    labels.reverse();
                    return Some(labels);
                }
                if let Entry::Vacant(e) = pred.entry(next) {
                    e.insert((v, self.labels[rank]));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Decides whether the canonical learner identifies `target` in the limit on
/// every sound and complete stream. Negative verdicts carry the first (in
/// search order) prefix-plus-cycle witness.
pub fn decide_in_limit(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
    cfg: &VerifierConfig,
) -> Result<Verdict> {
    if space.signature(target).is_empty() {
        return Ok(Verdict::no_sound_stream(target));
    }
    let product = SoundProduct::explore(space, prior, method, target, cfg.node_budget)?;
    for node in 0..product.nodes.len() {
        if !product.is_bad(node) {
            continue;
        }
        if let Some(cycle) = product.shortest_cycle(node) {
            let witness = StreamSpec::new(product.path_to(node), cycle)
                .expect("cycles found by search are nonempty");
            return Ok(Verdict {
                target,
                status: DecideStatus::NotIdentified,
                witness: Some(witness),
                error_fixes: Vec::new(),
            });
        }
    }
    Ok(Verdict::identified(target))
}

/// Runs [`decide_in_limit`] for every world.
pub fn decide_appropriate(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    cfg: &VerifierConfig,
) -> Result<SpaceVerdict> {
    let per_world = (0..space.world_count())
        .map(|w| decide_in_limit(space, prior, method, WorldId(w), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceVerdict {
        method,
        mode: StreamMode::SoundComplete,
        per_world,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    /// Any observable may still arrive, including errors.
    Open,
    /// Only sound observations from here on.
    Settled,
}

/// Node of the fair-mode product: state, coverage of the target's
/// observables, errors awaiting correction, and whether errors have stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct FairKey {
    state_ix: usize,
    cov: ObsSet,
    pending: ObsSet,
    phase: Phase,
}

struct FairProduct {
    full: ObsSet,
    arena: StateArena,
    nodes: Vec<FairKey>,
    /// Labelled successor edges; settled nodes carry exactly the sound ones.
    succs: Vec<Vec<(ObsId, usize)>>,
    /// Discovery edges; `None` label marks the errors-stop switch.
    preds: Vec<Option<(usize, Option<ObsId>)>>,
}

impl FairProduct {
    fn explore(
        space: &EpistemicSpace,
        prior: &Preorder,
        method: RevisionMethod,
        target: WorldId,
        pairing: &[ObsId],
        budget: usize,
    ) -> Result<FairProduct> {
        let full = space.signature(target);
        let settled_labels: Vec<ObsId> = full.iter().collect();
        let all_labels: Vec<ObsId> = (0..space.obs_count()).map(ObsId).collect();
        let mut arena = StateArena::new(target);
        let root_state = arena.intern(RevisionState::initial(method, prior));
        let root = FairKey {
            state_ix: root_state,
            cov: ObsSet::EMPTY,
            pending: ObsSet::EMPTY,
            phase: Phase::Open,
        };
        let mut product = FairProduct {
            full,
            arena,
            nodes: vec![root],
            succs: Vec::new(),
            preds: vec![None],
        };
        let mut node_index: HashMap<FairKey, usize> = HashMap::new();
        node_index.insert(root, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let key = product.nodes[v];
            let mut out = Vec::new();
            let visit = |product: &mut FairProduct,
                         queue: &mut VecDeque<usize>,
                         node_index: &mut HashMap<FairKey, usize>,
                         next: FairKey,
                         label: Option<ObsId>|
             -> Result<usize> {
                if let Some(&id) = node_index.get(&next) {
                    return Ok(id);
                }
                let id = product.nodes.len();
                if id >= budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                node_index.insert(next, id);
                product.nodes.push(next);
                product.preds.push(Some((v, label)));
                queue.push_back(id);
                Ok(id)
            };
            let labels: &[ObsId] = match key.phase {
                Phase::Open => &all_labels,
                Phase::Settled => &settled_labels,
            };
            for &p in labels {
                let (next_state, _) = product.arena.state(key.state_ix).step(space, p);
                let next_ix = product.arena.intern(next_state);
                let sound = full.contains(p);
                let mut pending = key.pending;
                if sound {
                    pending.remove(pairing[p.0]);
                } else {
                    pending.insert(p);
                }
                let next = FairKey {
                    state_ix: next_ix,
                    cov: if sound {
                        key.cov.union(ObsSet::singleton(p))
                    } else {
                        key.cov
                    },
                    pending,
                    phase: key.phase,
                };
                let id = visit(&mut product, &mut queue, &mut node_index, next, Some(p))?;
                out.push((p, id));
            }
            if key.phase == Phase::Open {
                let settled = FairKey {
                    phase: Phase::Settled,
                    ..key
                };
                visit(&mut product, &mut queue, &mut node_index, settled, None)?;
                // The switch is not a successor edge: it consumes no
                // observation and never takes part in a cycle.
            }
            product.succs.push(out);
        }
        Ok(product)
    }

    fn is_bad(&self, node: usize) -> bool {
        let key = self.nodes[node];
        key.phase == Phase::Settled
            && key.pending.is_empty()
            && key.cov == self.full
            && !self.arena.conjectures_target[key.state_ix]
    }

    fn path_to(&self, node: usize) -> Vec<ObsId> {
        let mut labels = Vec::new();
        let mut v = node;
        while let Some((parent, label)) = self.preds[v] {
            if let Some(l) = label {
                labels.push(l);
            }
            v = parent;
        }
        labels.reverse();
        labels
    }

    fn shortest_cycle(&self, node: usize) -> Option<Vec<ObsId>> {
        let mut pred: HashMap<usize, (usize, ObsId)> = HashMap::new();
        let mut queue = VecDeque::new();
        for &(label, next) in &self.succs[node] {
            if next == node {
                return Some(vec![label]);
            }
            if let Entry::Vacant(e) = pred.entry(next) {
                e.insert((node, label));
                queue.push_back(next);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(label, next) in &self.succs[v] {
                if next == node {
                    let mut labels = vec![label];
                    let mut cur = v;
                    while cur != node {
                        let (parent, l) = pred[&cur];
                        labels.push(l);
                        cur = parent;
                    }
                    labels.reverse();
                    return Some(labels);
                }
                if let Entry::Vacant(e) = pred.entry(next) {
                    e.insert((v, label));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

fn fixes_for(
    space: &EpistemicSpace,
    pairing: &[ObsId],
    target: WorldId,
    spec: &StreamSpec,
) -> Vec<ErrorFix> {
    let sig = space.signature(target);
    let prefix = spec.prefix().items();
    let mut fixes = Vec::new();
    for (i, &p) in prefix.iter().enumerate() {
        if sig.contains(p) {
            continue;
        }
        let correction = pairing[p.0];
        let corrected_at = prefix[i + 1..]
            .iter()
            .position(|&x| x == correction)
            .map(|j| i + 1 + j)
            .or_else(|| {
                spec.cycle()
                    .items()
                    .iter()
                    .position(|&x| x == correction)
                    .map(|j| prefix.len() + j)
            })
            .expect("fair witnesses correct every error");
        fixes.push(ErrorFix {
            position: i,
            obs: p,
            corrected_at,
        });
    }
    fixes
}

/// Decides identification in the limit on fair streams. Requires a
/// negation-closed space. Elimination is decided directly: a single error
/// removes the target for good, so the method fails whenever any observable
/// excludes the target.
pub fn decide_fair(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
    cfg: &VerifierConfig,
) -> Result<Verdict> {
    let pairing = space.negation_pairing().ok_or_else(|| {
        Error::NotNegationClosed(
            space
                .observables()
                .first()
                .map(|o| o.label.clone())
                .unwrap_or_default(),
        )
    })?;
    let sig = space.signature(target);
    if sig.is_empty() {
        return Ok(Verdict::no_sound_stream(target));
    }
    if method == RevisionMethod::Cond {
        let error = (0..space.obs_count())
            .map(ObsId)
            .find(|&p| !sig.contains(p));
        return match error {
            None => decide_in_limit(space, prior, method, target, cfg),
            Some(p) => {
                let witness =
                    StreamSpec::new(vec![p], sig.iter().collect()).expect("signature is nonempty");
                let error_fixes = fixes_for(space, &pairing, target, &witness);
                Ok(Verdict {
                    target,
                    status: DecideStatus::NotIdentified,
                    witness: Some(witness),
                    error_fixes,
                })
            }
        };
    }
    let product = FairProduct::explore(space, prior, method, target, &pairing, cfg.node_budget)?;
    for node in 0..product.nodes.len() {
        if !product.is_bad(node) {
            continue;
        }
        if let Some(cycle) = product.shortest_cycle(node) {
            let witness = StreamSpec::new(product.path_to(node), cycle)
                .expect("cycles found by search are nonempty");
            let error_fixes = fixes_for(space, &pairing, target, &witness);
            return Ok(Verdict {
                target,
                status: DecideStatus::NotIdentified,
                witness: Some(witness),
                error_fixes,
            });
        }
    }
    Ok(Verdict::identified(target))
}

pub fn decide_fair_appropriate(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    cfg: &VerifierConfig,
) -> Result<SpaceVerdict> {
    let per_world = (0..space.world_count())
        .map(|w| decide_fair(space, prior, method, WorldId(w), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceVerdict {
        method,
        mode: StreamMode::Fair,
        per_world,
    })
}

/// One row of a learning trace.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Number of observations consumed, 1-based.
    pub position: usize,
    pub obs: ObsId,
    pub record: crate::revision::StepRecord,
    pub conjecture: WorldSet,
    pub state: RevisionState,
}

/// Positions (1-based observation counts) at which the pair (state,
/// position within the cycle) first repeated: from `first` on, the trace is
/// periodic with period `repeat - first`, so its infinite behaviour is
/// fully determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recurrence {
    pub first: usize,
    pub repeat: usize,
}

#[derive(Debug, Clone)]
pub struct LearningTrace {
    pub stream: StreamSpec,
    pub initial: RevisionState,
    pub steps: Vec<TraceStep>,
    pub recurrence: Option<Recurrence>,
}

/// Unrolls a stream for `horizon` steps, recording state, conjecture and a
/// step log, and reports the first recurrence of (state, cycle position).
pub fn run_trace(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    spec: &StreamSpec,
    horizon: usize,
) -> Result<LearningTrace> {
    let initial = RevisionState::initial(method, prior);
    let mut state = initial.clone();
    let mut steps = Vec::with_capacity(horizon);
    let mut seen: HashMap<(RevisionState, usize), usize> = HashMap::new();
    let mut recurrence = None;
    for i in 0..horizon {
        let p = spec.at(i);
        if p.0 >= space.obs_count() {
            return Err(Error::AtStep {
                pos: i,
                source: Box::new(Error::UnknownObservable(format!("#{}", p.0))),
            });
        }
        let (next, record) = state.step(space, p);
        state = next;
        let position = i + 1;
        steps.push(TraceStep {
            position,
            obs: p,
            record,
            conjecture: state.conjecture(),
            state: state.clone(),
        });
        if recurrence.is_none() && position >= spec.prefix().len() {
            let phase = (position - spec.prefix().len()) % spec.cycle().len();
            match seen.get(&(state.clone(), phase)) {
                Some(&first) => {
                    recurrence = Some(Recurrence {
                        first,
                        repeat: position,
                    });
                }
                None => {
                    seen.insert((state.clone(), phase), position);
                }
            }
        }
    }
    Ok(LearningTrace {
        stream: spec.clone(),
        initial,
        steps,
        recurrence,
    })
}

/// Checks that a claimed witness really defeats the learner: the stream
/// satisfies the mode's admissibility predicate for the target, and once the
/// trace closes its loop, some position inside the recurring segment has a
/// conjecture different from `{target}`.
pub fn verify_witness(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
    spec: &StreamSpec,
    mode: StreamMode,
) -> Result<bool> {
    let admissible = match mode {
        StreamMode::SoundComplete => {
            stream::is_sound(space, spec, target) && stream::is_complete(space, spec, target)
        }
        StreamMode::Fair => stream::is_fair(space, spec, target)?,
    };
    if !admissible {
        return Ok(false);
    }
    // Run until (state, cycle position) recurs; bounded because states on a
    // finite space are finitely many.
    let mut state = RevisionState::initial(method, prior);
    let mut seen: HashMap<(RevisionState, usize), usize> = HashMap::new();
    let mut history: Vec<WorldSet> = Vec::new();
    let mut i = 0usize;
    loop {
        let p = spec.at(i);
        let (next, _) = state.step(space, p);
        state = next;
        history.push(state.conjecture());
        let position = i + 1;
        if position >= spec.prefix().len() {
            let phase = (position - spec.prefix().len()) % spec.cycle().len();
            if let Some(&first) = seen.get(&(state.clone(), phase)) {
                let target_set = WorldSet::singleton(target);
                return Ok(history[first..position]
                    .iter()
                    .any(|conj| *conj != target_set));
            }
            seen.insert((state.clone(), phase), position);
        }
        i += 1;
    }
}

/// All revision states reachable from the prior via sound observations for
/// the target, in breadth-first discovery order.
pub fn reachable_states(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
    cfg: &VerifierConfig,
) -> Result<Vec<RevisionState>> {
    let labels: Vec<ObsId> = space.signature(target).iter().collect();
    let mut arena = StateArena::new(target);
    let root = arena.intern(RevisionState::initial(method, prior));
    let mut queue = VecDeque::from([root]);
    let mut seen = vec![root];
    while let Some(ix) = queue.pop_front() {
        for &p in &labels {
            let (next, _) = arena.state(ix).step(space, p);
            let n_before = arena.states.len();
            let next_ix = arena.intern(next);
            if next_ix == n_before {
                if arena.states.len() > cfg.node_budget {
                    return Err(Error::BudgetExceeded {
                        budget: cfg.node_budget,
                    });
                }
                seen.push(next_ix);
                queue.push_back(next_ix);
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|ix| arena.states[ix].clone())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LockingOutcome {
    Found(DataSequence),
    NotFound,
}

/// Searches sound sequences (shortest first, then by label order) for one
/// after which the conjecture is `{target}` and stays `{target}` under every
/// sound continuation: no sound path from the reached state leads to any
/// state conjecturing otherwise.
pub fn locking_sequence_search(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
    bound: usize,
    cfg: &VerifierConfig,
) -> Result<LockingOutcome> {
    let labels: Vec<ObsId> = space.signature(target).iter().collect();
    let mut arena = StateArena::new(target);
    let root = arena.intern(RevisionState::initial(method, prior));
    let mut depth = vec![0usize];
    let mut preds: Vec<Option<(usize, ObsId)>> = vec![None];
    let mut succs: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(ix) = queue.pop_front() {
        let mut out = Vec::with_capacity(labels.len());
        for &p in &labels {
            let (next, _) = arena.state(ix).step(space, p);
            let n_before = arena.states.len();
            let next_ix = arena.intern(next);
            if next_ix == n_before {
                if arena.states.len() > cfg.node_budget {
                    return Err(Error::BudgetExceeded {
                        budget: cfg.node_budget,
                    });
                }
                depth.push(depth[ix] + 1);
                preds.push(Some((ix, p)));
                queue.push_back(next_ix);
            }
            out.push(next_ix);
        }
        succs.push(out);
    }
    // A state is poisoned when some sound path from it (including the empty
    // one) reaches a wrong conjecture.
    let n = arena.states.len();
    let mut poisoned: Vec<bool> = (0..n).map(|ix| !arena.conjectures_target[ix]).collect();
    loop {
        let mut changed = false;
        for ix in 0..n {
            if !poisoned[ix] && succs[ix].iter().any(|&t| poisoned[t]) {
                poisoned[ix] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for ix in 0..n {
        if poisoned[ix] || depth[ix] > bound {
            continue;
        }
        let mut labels_path = Vec::new();
        let mut v = ix;
        while let Some((parent, label)) = preds[v] {
            labels_path.push(label);
            v = parent;
        }
        labels_path.reverse();
        return Ok(LockingOutcome::Found(DataSequence::new(labels_path)));
    }
    Ok(LockingOutcome::NotFound)
}

/// Options for prior sweeps.
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Enumerate all preorders instead of only total ones.
    pub include_general: bool,
    /// World-count bound for total-preorder enumeration.
    pub total_bound: usize,
    /// World-count bound for general-preorder enumeration.
    pub general_bound: usize,
    /// Worker threads; 1 means sequential. Results are merged in input
    /// order either way.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            include_general: false,
            total_bound: 6,
            general_bound: 3,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub method: RevisionMethod,
    pub mode: StreamMode,
    pub total_priors: usize,
    /// Priors whose canonical learner identifies every world, in
    /// enumeration order.
    pub appropriate: Vec<Preorder>,
    /// Inappropriate priors with their first failing world.
    pub failures: Vec<(Preorder, WorldId)>,
}

/// Decides appropriateness for every enumerable prior on the space.
pub fn sweep_priors(
    space: &EpistemicSpace,
    method: RevisionMethod,
    mode: StreamMode,
    opts: &SweepOptions,
    cfg: &VerifierConfig,
) -> Result<SweepReport> {
    let priors: Vec<Preorder> = if opts.include_general {
        enumerate_preorders(space, opts.general_bound)?
    } else {
        enumerate_total_preorders(space, opts.total_bound)?.collect()
    };
    let decide_one = |prior: &Preorder| -> Result<Option<WorldId>> {
        let verdict = match mode {
            StreamMode::SoundComplete => decide_appropriate(space, prior, method, cfg)?,
            StreamMode::Fair => decide_fair_appropriate(space, prior, method, cfg)?,
        };
        Ok(verdict.first_failure().map(|v| v.target))
    };
    let outcomes: Result<Vec<Option<WorldId>>> = if opts.jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| priors.par_iter().map(decide_one).collect())
    } else {
        priors.iter().map(decide_one).collect()
    };
    let outcomes = outcomes?;
    let mut appropriate = Vec::new();
    let mut failures = Vec::new();
    for (prior, outcome) in priors.into_iter().zip(outcomes) {
        match outcome {
            None => appropriate.push(prior),
            Some(w) => failures.push((prior, w)),
        }
    }
    Ok(SweepReport {
        method,
        mode,
        total_priors: appropriate.len() + failures.len(),
        appropriate,
        failures,
    })
}

/// Cross-validates the semantic decisions against the tell-tale
/// characterisations on one (space, prior) instance:
///
/// * total priors: promotion is appropriate iff a promotion tell-tale map
///   exists;
/// * any preorder: elimination and block promotion are appropriate together,
///   iff an elimination tell-tale map exists;
/// * negation-closed spaces: block promotion on fair streams is appropriate
///   iff the same elimination tell-tale map exists.
///
/// Disagreements are reported as mismatches, not errors: each one is either
/// an implementation bug or a counterexample worth looking at.
#[derive(Debug, Clone, Default)]
pub struct CrossCheckReport {
    /// Set when the comparison is skipped (some world satisfies no
    /// observable, where the characterisations do not apply).
    pub skipped: Option<String>,
    pub mini_decide: Option<bool>,
    pub mini_telltale: Option<bool>,
    pub cond_decide: Option<bool>,
    pub lex_decide: Option<bool>,
    pub cond_telltale: Option<bool>,
    pub fair_lex_decide: Option<bool>,
    pub mismatches: Vec<String>,
}

impl CrossCheckReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn cross_check(
    space: &EpistemicSpace,
    prior: &Preorder,
    cfg: &VerifierConfig,
) -> Result<CrossCheckReport> {
    let mut report = CrossCheckReport::default();
    if let Some(w) = (0..space.world_count())
        .map(WorldId)
        .find(|&w| space.signature(w).is_empty())
    {
        report.skipped = Some(format!(
            "world `{}` satisfies no observable; the tell-tale characterisations do not apply",
            space.world(w).name
        ));
        return Ok(report);
    }
    if prior.is_total() {
        let decide = decide_appropriate(space, prior, RevisionMethod::Mini, cfg)?.appropriate();
        let telltale = matches!(mini_telltale_exists(space, prior)?, TellTaleOutcome::Map(_));
        report.mini_decide = Some(decide);
        report.mini_telltale = Some(telltale);
        if decide != telltale {
            report.mismatches.push(format!(
                "promotion: semantic decision says {decide}, tell-tale existence says {telltale}"
            ));
        }
    }
    let cond = decide_appropriate(space, prior, RevisionMethod::Cond, cfg)?.appropriate();
    let lex = decide_appropriate(space, prior, RevisionMethod::Lex, cfg)?.appropriate();
    let telltale = matches!(cond_telltale_exists(space, prior), TellTaleOutcome::Map(_));
    report.cond_decide = Some(cond);
    report.lex_decide = Some(lex);
    report.cond_telltale = Some(telltale);
    if cond != lex {
        report.mismatches.push(format!(
            "elimination says {cond} but block promotion says {lex}"
        ));
    }
    if cond != telltale {
        report.mismatches.push(format!(
            "elimination: semantic decision says {cond}, tell-tale existence says {telltale}"
        ));
    }
    if space.is_negation_closed() {
        let fair_lex =
            decide_fair_appropriate(space, prior, RevisionMethod::Lex, cfg)?.appropriate();
        report.fair_lex_decide = Some(fair_lex);
        if fair_lex != telltale {
            report.mismatches.push(format!(
                "fair block promotion says {fair_lex}, tell-tale existence says {telltale}"
            ));
        }
    }
    Ok(report)
}
