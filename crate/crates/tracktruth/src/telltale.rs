//! Tell-tale maps: finite evidence sets that pin worlds down.
//!
//! Three flavours are computed here.
//!
//! * A **definite tell-tale set** for `s` is a finite subset of `O_s`
//!   contained in no other world's observables. A map assigning one to every
//!   world exists exactly when the space is one-shot identifiable, and the
//!   [`finite_identifier`] built from it guesses once and guesses right.
//! * A **promotion tell-tale set** (for a total prior) certifies that
//!   conservative promotion will isolate `s`: some observable of `F_s` has
//!   `s` among its most plausible worlds, and any equally-plausible rival
//!   sharing that podium is demoted by some other observable of `F_s`.
//! * An **elimination tell-tale set** (for an arbitrary preorder) certifies
//!   that world elimination (equivalently, block promotion) isolates `s`:
//!   comparable worlds consistent with `F_s` must sit strictly above `s`,
//!   and any incomparable world consistent with a finite sound extension of
//!   `F_s` must be dominated by some world equally consistent with it.

use crate::error::{Error, Result};
use crate::order::Preorder;
use crate::sets::{ObsSet, WorldId};
use crate::space::EpistemicSpace;
use crate::stream::DataSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TellTaleKind {
    /// Definite finite tell-tale sets: one-shot identifiability.
    Dftt,
    /// Promotion tell-tales for a total prior.
    Mini,
    /// Elimination tell-tales for an arbitrary preorder.
    Cond,
}

impl TellTaleKind {
    pub fn name(self) -> &'static str {
        match self {
            TellTaleKind::Dftt => "dftt",
            TellTaleKind::Mini => "mini",
            TellTaleKind::Cond => "cond",
        }
    }
}

/// A total assignment of a tell-tale set to every world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TellTaleMap {
    pub kind: TellTaleKind,
    /// `assignment[w]` is the tell-tale set of world `w`; always a subset of
    /// that world's observables.
    pub assignment: Vec<ObsSet>,
}

/// Either a total map or the first world (in id order) without a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TellTaleOutcome {
    Map(TellTaleMap),
    Failure(WorldId),
}

impl TellTaleOutcome {
    pub fn map(&self) -> Option<&TellTaleMap> {
        match self {
            TellTaleOutcome::Map(m) => Some(m),
            TellTaleOutcome::Failure(_) => None,
        }
    }

    pub fn failure(&self) -> Option<WorldId> {
        match self {
            TellTaleOutcome::Map(_) => None,
            TellTaleOutcome::Failure(w) => Some(*w),
        }
    }
}

/// Builds the candidate definite tell-tale set of each world as the union of
/// its observable surpluses over every other world, then verifies it. On a
/// finite space this candidate works exactly when every surplus is nonempty,
/// i.e. when no signature is contained in another.
pub fn dftt_construct(space: &EpistemicSpace) -> TellTaleOutcome {
    let n = space.world_count();
    let mut assignment = Vec::with_capacity(n);
    for s in 0..n {
        let s = WorldId(s);
        let sig = space.signature(s);
        let mut candidate = ObsSet::EMPTY;
        for t in 0..n {
            let t = WorldId(t);
            if t != s {
                candidate = candidate.union(sig.minus(space.signature(t)));
            }
        }
        // Conditions: finite (trivially), within O_s (by construction), and
        // contained in no other signature.
        debug_assert!(candidate.is_subset(sig));
        let unique = (0..n)
            .map(WorldId)
            .all(|t| t == s || !candidate.is_subset(space.signature(t)));
        if !unique {
            return TellTaleOutcome::Failure(s);
        }
        assignment.push(candidate);
    }
    TellTaleOutcome::Map(TellTaleMap {
        kind: TellTaleKind::Dftt,
        assignment,
    })
}

pub fn is_finitely_identifiable(space: &EpistemicSpace) -> bool {
    matches!(dftt_construct(space), TellTaleOutcome::Map(_))
}

/// Output of the one-shot identifier on a finite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteGuess {
    NoGuess,
    /// The single guess, made after the first `at` observations.
    Guess {
        world: WorldId,
        at: usize,
    },
}

/// The once-defined identifier induced by the definite tell-tale map: scan
/// growing prefixes, and at the first length `k` where some world `s_i` with
/// `i <= k` has its tell-tale set covered, guess that world (smallest such
/// `i`) and never speak again. Stateless: recomputed from scratch per call.
pub fn finite_identifier(space: &EpistemicSpace, seq: &DataSequence) -> Result<FiniteGuess> {
    let map = match dftt_construct(space) {
        TellTaleOutcome::Map(m) => m,
        TellTaleOutcome::Failure(w) => {
            return Err(Error::NotFinitelyIdentifiable(space.world(w).name.clone()))
        }
    };
    let mut seen = ObsSet::EMPTY;
    for (k, &p) in seq.items().iter().enumerate() {
        let k = k + 1; // prefix length after this observation
        seen.insert(p);
        let hit = (0..space.world_count())
            .filter(|&i| i <= k)
            .find(|&i| map.assignment[i].is_subset(seen));
        if let Some(i) = hit {
            return Ok(FiniteGuess::Guess {
                world: WorldId(i),
                at: k,
            });
        }
    }
    Ok(FiniteGuess::NoGuess)
}

/// Per-world search for a promotion tell-tale, taking `F_s = O_s` (on a
/// finite space nothing smaller is ever needed: a witness inside a smaller
/// set is a witness inside `O_s`). Requires a total prior.
pub fn mini_telltale_exists(space: &EpistemicSpace, order: &Preorder) -> Result<TellTaleOutcome> {
    if !order.is_total() {
        return Err(Error::NotTotal);
    }
    let n = space.world_count();
    let mut assignment = Vec::with_capacity(n);
    for s in (0..n).map(WorldId) {
        let candidates = space.signature(s);
        let witness = candidates.iter().any(|p| {
            let min_p = order.min_of(space.extension(p));
            if !min_p.contains(s) {
                return false;
            }
            // Every equally-plausible rival on p's podium must be demoted
            // by some other observable of s.
            min_p
                .iter()
                .filter(|&t| t != s && order.equiv(t, s))
                .all(|t| {
                    candidates.iter().any(|q| {
                        let min_q = order.min_of(space.extension(q));
                        min_q.contains(s) && !min_q.contains(t)
                    })
                })
        });
        if !witness {
            return Ok(TellTaleOutcome::Failure(s));
        }
        assignment.push(candidates);
    }
    Ok(TellTaleOutcome::Map(TellTaleMap {
        kind: TellTaleKind::Mini,
        assignment,
    }))
}

/// All subsets of `within`, smallest first, ties broken by bit value. The
/// deterministic order makes reported tell-tale sets reproducible and keeps
/// them minimal for human auditing.
fn submasks_by_size(within: ObsSet) -> Vec<ObsSet> {
    let w = within.bits();
    let mut subs = Vec::new();
    let mut m = w;
    loop {
        subs.push(ObsSet::from_bits(m));
        if m == 0 {
            break;
        }
        m = (m - 1) & w;
    }
    subs.sort_by_key(|s| (s.len(), s.bits()));
    subs
}

fn cond_clauses_hold(
    space: &EpistemicSpace,
    order: &Preorder,
    s: WorldId,
    candidate: ObsSet,
) -> bool {
    let n = space.world_count();
    // Comparable worlds consistent with the candidate must lie strictly
    // above s.
    for t in (0..n).map(WorldId) {
        if t != s
            && order.comparable(t, s)
            && candidate.is_subset(space.signature(t))
            && !order.lt(s, t)
        {
            return false;
        }
    }
    // Every finite sound extension of the candidate must dominate each
    // incomparable world it is consistent with.
    let sig = space.signature(s);
    for extra in submasks_by_size(sig.minus(candidate)) {
        let extended = candidate.union(extra);
        for t in (0..n).map(WorldId) {
            if t == s || order.comparable(t, s) {
                continue;
            }
            if !extended.is_subset(space.signature(t)) {
                continue;
            }
            let dominated = (0..n)
                .map(WorldId)
                .any(|v| order.lt(v, t) && extended.is_subset(space.signature(v)));
            if !dominated {
                return false;
            }
        }
    }
    true
}

/// Per-world search for an elimination tell-tale over subsets of `O_s` in
/// ascending size. Works for arbitrary preorders; on total ones the
/// incomparability clause is vacuous.
pub fn cond_telltale_exists(space: &EpistemicSpace, order: &Preorder) -> TellTaleOutcome {
    let n = space.world_count();
    let mut assignment = Vec::with_capacity(n);
    for s in (0..n).map(WorldId) {
        let sig = space.signature(s);
        let found = submasks_by_size(sig)
            .into_iter()
            .find(|&candidate| cond_clauses_hold(space, order, s, candidate));
        match found {
            Some(f) => assignment.push(f),
            None => return TellTaleOutcome::Failure(s),
        }
    }
    TellTaleOutcome::Map(TellTaleMap {
        kind: TellTaleKind::Cond,
        assignment,
    })
}
