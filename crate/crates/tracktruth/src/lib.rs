//! Truth tracking by iterated belief revision on finite epistemic spaces.
//!
//! An *epistemic space* is a finite set of worlds plus a set of labelled
//! observables (sets of worlds). An agent holds a plausibility preorder over
//! the worlds, revises it as observations arrive, and conjectures the minimal
//! (most plausible) worlds. This crate implements the three classic one-step
//! revision policies:
//!
//! * `mini`: promote the most plausible worlds of the observation;
//! * `cond`: eliminate the worlds where the observation fails;
//! * `lex`: move the whole observation block to the front.
//!
//! It then decides, for a given space, prior and policy, whether the induced
//! learner identifies every world in the limit: on each admissible infinite
//! observation stream the conjecture must eventually stay exactly at the
//! actual world. Admissible means sound and complete for that world, or, in
//! fair mode, allowing finitely many later-corrected errors.
//!
//! Because spaces are finite, the decision reduces to lasso search in a
//! finite product graph (see [`verifier`]), so every negative answer comes
//! with a replayable `prefix + cycle` counterexample stream. Tell-tale maps
//! ([`telltale`]) provide an independent, purely combinatorial
//! characterisation of the same questions; [`verifier::cross_check`] pits
//! the two against each other.
//!
//! The `tracktruth` binary exposes all of this on the command line; see the
//! README for the file formats.
//!
//! ```
//! use tracktruth::{
//!     decide_appropriate, DecideStatus, EpistemicSpace, Preorder, RevisionMethod,
//!     VerifierConfig, WorldId,
//! };
//!
//! // Three worlds; p and q overlap on s.
//! let space = EpistemicSpace::from_parts(
//!     &["u", "s", "t"],
//!     &[("p", &["u", "s"]), ("q", &["s", "t"])],
//! )?;
//! // Most plausible first: t, then u, then s.
//! let prior = Preorder::from_layers(
//!     3,
//!     &[vec![WorldId(2)], vec![WorldId(0)], vec![WorldId(1)]],
//! )?;
//!
//! let cfg = VerifierConfig::default();
//! let verdict = decide_appropriate(&space, &prior, RevisionMethod::Mini, &cfg)?;
//! assert!(!verdict.appropriate());
//!
//! // The failing world comes with a replayable counterexample stream.
//! let failure = verdict.first_failure().unwrap();
//! assert_eq!(failure.target, space.world_named("s")?);
//! assert_eq!(failure.status, DecideStatus::NotIdentified);
//! assert!(failure.witness.is_some());
//! # Ok::<(), tracktruth::Error>(())
//! ```

pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod order;
pub mod revision;
pub mod sets;
pub mod space;
pub mod stream;
pub mod telltale;
pub mod verifier;

pub use error::{Error, Result};
pub use order::{enumerate_preorders, enumerate_total_preorders, PlausibilitySpace, Preorder};
pub use revision::{iterate, RevisionMethod, RevisionState, StepFlag, StepRecord};
pub use sets::{ObsId, ObsSet, WorldId, WorldSet};
pub use space::{EpistemicSpace, Observable, ValidationReport, Violation, World};
pub use stream::{
    canonical_sc_stream, is_complete, is_fair, is_sound, is_sound_sequence, DataSequence,
    StreamSpec,
};
pub use telltale::{
    cond_telltale_exists, dftt_construct, finite_identifier, is_finitely_identifiable,
    mini_telltale_exists, FiniteGuess, TellTaleKind, TellTaleMap, TellTaleOutcome,
};
pub use verifier::{
    cross_check, decide_appropriate, decide_fair, decide_fair_appropriate, decide_in_limit,
    locking_sequence_search, reachable_states, run_trace, sweep_priors, verify_witness,
    DecideStatus, LearningTrace, LockingOutcome, SpaceVerdict, StreamMode, SweepOptions,
    SweepReport, Verdict, VerifierConfig,
};
