//! Built-in example spaces, priors and streams, plus self-verifying
//! scenarios for the CLI.
//!
//! The spaces are small shapes that each exercise one phenomenon:
//!
//! * `overlap`: three worlds, two overlapping observables; no total prior
//!   lets conservative promotion learn it, while world elimination does.
//! * `triangle`: three worlds pairwise separated by three observables;
//!   one-shot identifiable, and a showcase for how a biased prior breaks
//!   conservative promotion.
//! * `diamond`: four worlds with complemented observables; learning from
//!   positive and negative data, and the space where a fair-but-erroneous
//!   stream defeats conservative promotion.
//! * `ladder`: a chain of pairwise-overlapping observables, truncated to a
//!   finite length.
//! * `nested`: one world's observables contained in another's, not one-shot
//!   identifiable, yet learnable with the right bias.

use crate::error::Result;
use crate::order::Preorder;
use crate::sets::WorldId;
use crate::space::EpistemicSpace;
use crate::stream::StreamSpec;
use crate::verifier::VerifierConfig;

fn must(space: Result<EpistemicSpace>) -> EpistemicSpace {
    space.expect("fixture spaces are well-formed")
}

/// Three worlds `u, s, t` with `p = {u, s}` and `q = {s, t}`.
pub fn overlap_space() -> EpistemicSpace {
    must(EpistemicSpace::from_parts(
        &["u", "s", "t"],
        &[("p", &["u", "s"]), ("q", &["s", "t"])],
    ))
}

/// The chain `t < u < s` on the overlap space (most plausible first).
pub fn overlap_prior_t_u_s() -> Preorder {
    // worlds are declared u=0, s=1, t=2
    Preorder::from_layers(3, &[vec![WorldId(2)], vec![WorldId(0)], vec![WorldId(1)]])
        .expect("well-formed layers")
}

/// Three worlds `s, u, t` with `p = {s, u}`, `q = {s, t}`, `r = {u, t}`.
pub fn triangle_space() -> EpistemicSpace {
    must(EpistemicSpace::from_parts(
        &["s", "u", "t"],
        &[("p", &["s", "u"]), ("q", &["s", "t"]), ("r", &["u", "t"])],
    ))
}

/// The order `t` strictly first, `s ≃ u` above it, on the triangle space.
pub fn triangle_bad_prior() -> Preorder {
    // worlds are declared s=0, u=1, t=2
    Preorder::from_layers(3, &[vec![WorldId(2)], vec![WorldId(0), WorldId(1)]])
        .expect("well-formed layers")
}

/// Four worlds `s, t, u, w` with two complemented observable pairs:
/// `p = {s, t}`, `pbar = {u, w}`, `q = {t, u}`, `qbar = {s, w}`.
pub fn diamond_space() -> EpistemicSpace {
    must(EpistemicSpace::from_parts(
        &["s", "t", "u", "w"],
        &[
            ("p", &["s", "t"]),
            ("pbar", &["u", "w"]),
            ("q", &["t", "u"]),
            ("qbar", &["s", "w"]),
        ],
    ))
}

/// The fair-but-misleading stream on the diamond space targeted at `s`:
/// two errors up front (`q`, `pbar`), their corrections, then sound talk
/// of `qbar` forever.
pub fn diamond_fair_trap_stream(space: &EpistemicSpace) -> StreamSpec {
    let obs = |l: &str| space.obs_labelled(l).expect("diamond labels");
    StreamSpec::new(vec![obs("q"), obs("pbar"), obs("p")], vec![obs("qbar")])
        .expect("nonempty cycle")
}

/// A chain of `n` worlds `s0..s(n-1)` with observables `p0..pn`, where
/// `p0 = {s0}`, `pj = {s(j-1), sj}` for the inner rungs, and `pn = {s(n-1)}`.
/// This is the finite truncation of the unbounded ladder in which every
/// world keeps its two-observable signature `{p_i, p_(i+1)}`; the only
/// artifact is that the last observable's extension shrinks to a singleton,
/// mirroring `p0` at the other end. Truncating by dropping `pn` instead
/// would nest the last world's signature inside its neighbour's and change
/// the answers at the boundary.
pub fn ladder_space(n: usize) -> EpistemicSpace {
    assert!(n >= 1);
    let worlds: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut observables: Vec<(String, Vec<String>)> = Vec::new();
    observables.push(("p0".to_string(), vec!["s0".to_string()]));
    for j in 1..n {
        observables.push((
            format!("p{j}"),
            vec![format!("s{}", j - 1), format!("s{j}")],
        ));
    }
    observables.push((format!("p{n}"), vec![format!("s{}", n - 1)]));
    must(EpistemicSpace::new(worlds, observables))
}

/// The ascending chain `s0 < s1 < ... < s(n-1)`.
pub fn ladder_ascending_prior(n: usize) -> Preorder {
    let layers: Vec<Vec<WorldId>> = (0..n).map(|i| vec![WorldId(i)]).collect();
    Preorder::from_layers(n, &layers).expect("well-formed layers")
}

/// Two worlds `s, t` with `p = {s}` and `q = {s, t}`, so `t`'s observables
/// are nested inside `s`'s.
pub fn nested_space() -> EpistemicSpace {
    must(EpistemicSpace::from_parts(
        &["s", "t"],
        &[("p", &["s"]), ("q", &["s", "t"])],
    ))
}

/// One named check inside a scenario.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub label: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    /// Rationale rendered under `--explain`: what makes this outcome the
    /// right one.
    pub note: &'static str,
}

impl CheckResult {
    fn new(
        label: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        note: &'static str,
    ) -> CheckResult {
        let expected = expected.to_string();
        let actual = actual.to_string();
        CheckResult {
            label: label.into(),
            pass: expected == actual,
            expected,
            actual,
            note,
        }
    }
}

/// A named, self-verifying scenario.
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub run: fn(&VerifierConfig) -> Vec<CheckResult>,
}

pub fn scenarios() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "overlap-mini-step",
            summary: "one conservative revision step promotes the most plausible p-worlds",
            run: run_overlap_mini_step,
        },
        Scenario {
            name: "overlap-mini-sweep",
            summary: "no total prior lets conservative promotion learn the overlap space",
            run: run_overlap_mini_sweep,
        },
        Scenario {
            name: "overlap-cond-sweep",
            summary: "world elimination learns the overlap space exactly when s starts on top",
            run: run_overlap_cond_sweep,
        },
        Scenario {
            name: "triangle-telltale",
            summary: "the triangle space is one-shot identifiable and its identifier fires once",
            run: run_triangle_telltale,
        },
        Scenario {
            name: "triangle-bad-prior",
            summary: "one biased prior keeps u glued to s forever under conservative promotion",
            run: run_triangle_bad_prior,
        },
        Scenario {
            name: "diamond-fair-trap",
            summary: "a fair stream with two corrected errors still defeats conservative promotion",
            run: run_diamond_fair_trap,
        },
        Scenario {
            name: "diamond-fair-sweep",
            summary: "no total prior survives fair streams on the diamond space",
            run: run_diamond_fair_sweep,
        },
        Scenario {
            name: "ladder-ascending",
            summary: "the truncated ladder is learnable with the ascending prior",
            run: run_ladder_ascending,
        },
        Scenario {
            name: "nested-biased-prior",
            summary: "nested observables: not one-shot identifiable, learnable with t first",
            run: run_nested_biased_prior,
        },
    ]
}

pub fn scenario(name: &str) -> Option<Scenario> {
    scenarios().into_iter().find(|s| s.name == name)
}

fn render_order(space: &EpistemicSpace, order: &Preorder) -> String {
    crate::io::render_order_text(space, order)
}

fn run_overlap_mini_step(_cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::{RevisionMethod, RevisionState};
    let space = overlap_space();
    let prior = overlap_prior_t_u_s();
    let p = space.obs_labelled("p").unwrap();
    let q = space.obs_labelled("q").unwrap();
    let state = RevisionState::initial(RevisionMethod::Mini, &prior);
    let (after_p, _) = state.step(&space, p);
    let expected =
        Preorder::from_layers(3, &[vec![WorldId(0)], vec![WorldId(2)], vec![WorldId(1)]]).unwrap(); // u < t < s
    let mut checks = vec![CheckResult::new(
        "revising t < u < s by p yields u < t < s",
        render_order(&space, &expected),
        render_order(&space, after_p.order()),
        "u is the most plausible p-world, so it alone moves to the front; \
         everything else keeps its old position",
    )];
    let (after_pq, _) = after_p.step(&space, q);
    checks.push(CheckResult::new(
        "revising again by q returns to t < u < s",
        render_order(&space, &prior),
        render_order(&space, after_pq.order()),
        "t is the most plausible q-world after the first step, so the two \
         observations chase each other in a cycle",
    ));
    checks
}

fn run_overlap_mini_sweep(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::verifier::{sweep_priors, StreamMode, SweepOptions};
    let space = overlap_space();
    let report = sweep_priors(
        &space,
        RevisionMethod::Mini,
        StreamMode::SoundComplete,
        &SweepOptions::default(),
        cfg,
    )
    .expect("sweep");
    vec![
        CheckResult::new(
            "total preorders on three worlds",
            13,
            report.total_priors,
            "weak orders on three elements",
        ),
        CheckResult::new(
            "appropriate priors for conservative promotion",
            0,
            report.appropriate.len(),
            "identifying u or t demands both strictly below s, after which \
             no observation ever makes s strictly most plausible",
        ),
    ]
}

fn run_overlap_cond_sweep(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::verifier::{sweep_priors, StreamMode, SweepOptions};
    let space = overlap_space();
    let report = sweep_priors(
        &space,
        RevisionMethod::Cond,
        StreamMode::SoundComplete,
        &SweepOptions::default(),
        cfg,
    )
    .expect("sweep");
    let u = space.world_named("u").unwrap();
    let s = space.world_named("s").unwrap();
    let t = space.world_named("t").unwrap();
    let expected_set: Vec<bool> = report
        .appropriate
        .iter()
        .map(|o| o.lt(u, s) && o.lt(t, s))
        .collect();
    vec![
        CheckResult::new(
            "appropriate priors for world elimination",
            3,
            report.appropriate.len(),
            "exactly the priors with u and t both strictly more plausible \
             than s: elimination leaves {u,s} or {s,t}, and s must not win \
             those ties",
        ),
        CheckResult::new(
            "every appropriate prior has u < s and t < s",
            "all",
            if expected_set.iter().all(|&b| b) {
                "all"
            } else {
                "some violate"
            },
            "after observing p the survivors are {u, s}; identifying u \
             needs u strictly below s, and symmetrically for t via q",
        ),
    ]
}

fn run_triangle_telltale(_cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::stream::DataSequence;
    use crate::telltale::{dftt_construct, finite_identifier, FiniteGuess, TellTaleOutcome};
    let space = triangle_space();
    let mut checks = Vec::new();
    match dftt_construct(&space) {
        TellTaleOutcome::Map(map) => {
            let s = space.world_named("s").unwrap();
            checks.push(CheckResult::new(
                "definite tell-tale set of s",
                "p q",
                space.obs_labels(map.assignment[s.0]).join(" "),
                "each pair of worlds shares exactly one observable, so the \
                 other two pin s down uniquely",
            ));
        }
        TellTaleOutcome::Failure(w) => {
            checks.push(CheckResult::new(
                "definite tell-tale map exists",
                "map",
                format!("failure at {}", space.world(w).name),
                "the triangle space is strongly separated",
            ));
        }
    }
    let p = space.obs_labelled("p").unwrap();
    let q = space.obs_labelled("q").unwrap();
    let guess = finite_identifier(&space, &DataSequence::new(vec![p, q])).expect("identifiable");
    checks.push(CheckResult::new(
        "one-shot identifier on p, q",
        "s at step 2",
        match guess {
            FiniteGuess::Guess { world, at } => {
                format!("{} at step {}", space.world(world).name, at)
            }
            FiniteGuess::NoGuess => "no guess".to_string(),
        },
        "after p alone no tell-tale set is covered; p and q together cover \
         exactly the tell-tale set of s",
    ));
    checks
}

fn run_triangle_bad_prior(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::telltale::{mini_telltale_exists, TellTaleOutcome};
    use crate::verifier::{decide_appropriate, run_trace};
    let space = triangle_space();
    let prior = triangle_bad_prior();
    let s = space.world_named("s").unwrap();
    let u = space.world_named("u").unwrap();
    let mut checks = Vec::new();

    let telltale = mini_telltale_exists(&space, &prior).expect("total prior");
    checks.push(CheckResult::new(
        "promotion tell-tale search",
        format!("failure at {}", space.world(s).name),
        match &telltale {
            TellTaleOutcome::Map(_) => "map".to_string(),
            TellTaleOutcome::Failure(w) => format!("failure at {}", space.world(*w).name),
        },
        "the only observable whose most plausible worlds include s is p, \
         but u is equally plausible there and no other observable demotes u",
    ));

    let verdict = decide_appropriate(&space, &prior, RevisionMethod::Mini, cfg).expect("decide");
    let failing = verdict
        .first_failure()
        .map(|v| space.world(v.target).name.clone())
        .unwrap_or_else(|| "none".to_string());
    checks.push(CheckResult::new(
        "limit decision",
        "failure at s",
        format!(
            "{} at {}",
            if verdict.appropriate() {
                "ok"
            } else {
                "failure"
            },
            failing
        ),
        "u and t are identified, s is not",
    ));

    if let Some(witness) = verdict.first_failure().and_then(|v| v.witness.as_ref()) {
        let trace = run_trace(&space, &prior, RevisionMethod::Mini, witness, 8).expect("trace");
        let glued_from_2 = trace.steps[1..]
            .iter()
            .all(|step| step.state.order().equiv(u, s));
        checks.push(CheckResult::new(
            "witness keeps u equally plausible to s from step 2 on",
            true,
            glued_from_2,
            "once u and s are promoted together they are never separated by \
             sound observations again",
        ));
    }
    checks
}

fn run_diamond_fair_trap(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::stream::is_fair;
    use crate::verifier::{decide_appropriate, decide_fair, run_trace, DecideStatus};
    let space = diamond_space();
    let prior = Preorder::flat(4);
    let s = space.world_named("s").unwrap();
    let w = space.world_named("w").unwrap();
    let spec = diamond_fair_trap_stream(&space);
    let mut checks = Vec::new();

    checks.push(CheckResult::new(
        "the trap stream is fair for s",
        true,
        is_fair(&space, &spec, s).expect("negation-closed"),
        "its two errors (q, pbar) are each later corrected (qbar, p) and \
         the tail is sound and complete",
    ));

    let trace = run_trace(&space, &prior, RevisionMethod::Mini, &spec, 10).expect("trace");
    let never_singleton_s = trace
        .steps
        .iter()
        .all(|st| st.conjecture != crate::sets::WorldSet::singleton(s));
    checks.push(CheckResult::new(
        "conjecture never becomes exactly {s}",
        true,
        never_singleton_s,
        "after the erroneous prefix, w is promoted alongside s by every \
         qbar and no sound observation separates them",
    ));
    let w_with_s = trace
        .steps
        .iter()
        .all(|st| !st.conjecture.contains(s) || st.conjecture.contains(w));
    checks.push(CheckResult::new(
        "whenever s is conjectured, w is too",
        true,
        w_with_s,
        "w and s satisfy exactly the observables in the sound tail",
    ));

    let fair_verdict =
        decide_fair(&space, &prior, RevisionMethod::Mini, s, cfg).expect("fair decision");
    checks.push(CheckResult::new(
        "fair-mode decision for s under the flat prior",
        "not identified",
        match fair_verdict.status {
            DecideStatus::Identified => "identified",
            DecideStatus::NotIdentified => "not identified",
            DecideStatus::NoSoundStream => "no sound stream",
        },
        "some fair stream forever hides s",
    ));

    let sc = decide_appropriate(&space, &prior, RevisionMethod::Mini, cfg).expect("decide");
    checks.push(CheckResult::new(
        "the same flat prior is fine on error-free streams",
        true,
        sc.appropriate(),
        "the diamond space is strongly separated, and the flat prior lets \
         promotion learn any such space from sound and complete streams",
    ));
    checks
}

fn run_diamond_fair_sweep(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::verifier::{sweep_priors, StreamMode, SweepOptions};
    let space = diamond_space();
    let fair = sweep_priors(
        &space,
        RevisionMethod::Mini,
        StreamMode::Fair,
        &SweepOptions::default(),
        cfg,
    )
    .expect("sweep");
    let sound = sweep_priors(
        &space,
        RevisionMethod::Mini,
        StreamMode::SoundComplete,
        &SweepOptions::default(),
        cfg,
    )
    .expect("sweep");
    vec![
        CheckResult::new(
            "total preorders on four worlds",
            75,
            fair.total_priors,
            "weak orders on four elements",
        ),
        CheckResult::new(
            "fair-appropriate priors for conservative promotion",
            0,
            fair.appropriate.len(),
            "every candidate prior is either already hopeless on sound \
             streams or falls to an error-then-correction trap",
        ),
        CheckResult::new(
            "sound-and-complete-appropriate priors",
            1,
            sound.appropriate.len(),
            "only the flat prior works on error-free streams",
        ),
        CheckResult::new(
            "the sole sound-mode survivor is the flat prior",
            true,
            sound.appropriate.first() == Some(&Preorder::flat(4)),
            "any strict preference between two worlds lets a tailored \
             stream freeze the wrong world at the front",
        ),
    ]
}

fn run_ladder_ascending(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::telltale::{dftt_construct, TellTaleOutcome};
    use crate::verifier::decide_appropriate;
    let space = ladder_space(4);
    let prior = ladder_ascending_prior(4);
    let verdict = decide_appropriate(&space, &prior, RevisionMethod::Mini, cfg).expect("decide");
    let mut checks = vec![CheckResult::new(
        "ascending prior learns the 4-rung ladder by promotion",
        true,
        verdict.appropriate(),
        "an unbiased prior is not required: ranking each rung below the \
         next also converges",
    )];
    let space3 = ladder_space(3);
    match dftt_construct(&space3) {
        TellTaleOutcome::Map(map) => {
            let s0 = space3.world_named("s0").unwrap();
            let p0 = space3.obs_labelled("p0").unwrap();
            checks.push(CheckResult::new(
                "tell-tale set of the first rung contains p0",
                true,
                map.assignment[s0.0].contains(p0),
                "p0 is observable only at s0",
            ));
        }
        TellTaleOutcome::Failure(w) => {
            checks.push(CheckResult::new(
                "3-rung ladder has a definite tell-tale map",
                "map",
                format!("failure at {}", space3.world(w).name),
                "each rung keeps an observable its neighbours lack",
            ));
        }
    }
    checks
}

fn run_nested_biased_prior(cfg: &VerifierConfig) -> Vec<CheckResult> {
    use crate::revision::RevisionMethod;
    use crate::telltale::is_finitely_identifiable;
    use crate::verifier::decide_appropriate;
    let space = nested_space();
    // t strictly more plausible than s
    let prior = Preorder::from_layers(2, &[vec![WorldId(1)], vec![WorldId(0)]]).unwrap();
    let verdict = decide_appropriate(&space, &prior, RevisionMethod::Mini, cfg).expect("decide");
    vec![
        CheckResult::new(
            "one-shot identifiable",
            false,
            is_finitely_identifiable(&space),
            "t's observables are contained in s's, so no finite evidence \
             ever rules s out with certainty",
        ),
        CheckResult::new(
            "promotion with t-first prior identifies both worlds",
            true,
            verdict.appropriate(),
            "observing p promotes s over t and settles s; for t the \
             conjecture starts and stays at t since p never arrives",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_spaces_are_well_formed() {
        for space in [
            overlap_space(),
            triangle_space(),
            diamond_space(),
            ladder_space(3),
            ladder_space(4),
            nested_space(),
        ] {
            assert!(space.validate().ok(), "{space:?}");
        }
    }

    #[test]
    fn all_scenarios_pass() {
        let cfg = VerifierConfig::default();
        for scenario in scenarios() {
            let results = (scenario.run)(&cfg);
            assert!(!results.is_empty(), "{} has checks", scenario.name);
            for check in results {
                assert!(
                    check.pass,
                    "{}: {} expected {} got {}",
                    scenario.name, check.label, check.expected, check.actual
                );
            }
        }
    }
}
