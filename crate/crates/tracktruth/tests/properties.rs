//! Property suites for the algebraic laws the modules promise.

mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use tracktruth::{
    cond_telltale_exists, dftt_construct, enumerate_total_preorders, finite_identifier, fixtures,
    is_complete, is_fair, is_sound, mini_telltale_exists, DataSequence, EpistemicSpace,
    FiniteGuess, ObsId, ObsSet, Preorder, RevisionMethod, RevisionState, StreamSpec,
    TellTaleOutcome, WorldId, WorldSet,
};

fn pool() -> &'static Vec<EpistemicSpace> {
    static POOL: OnceLock<Vec<EpistemicSpace>> = OnceLock::new();
    POOL.get_or_init(|| common::space_pool(4, 4))
}

fn closed_pool() -> &'static Vec<EpistemicSpace> {
    static POOL: OnceLock<Vec<EpistemicSpace>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut spaces: Vec<EpistemicSpace> = common::space_pool(4, 4)
            .into_iter()
            .filter(|s| s.is_negation_closed())
            .collect();
        spaces.push(fixtures::diamond_space());
        spaces
    })
}

prop_compose! {
    fn arb_space()(ix in 0usize..pool().len()) -> EpistemicSpace {
        pool()[ix].clone()
    }
}

prop_compose! {
    fn arb_closed_space()(ix in 0usize..closed_pool().len()) -> EpistemicSpace {
        closed_pool()[ix].clone()
    }
}

proptest! {
    // Revising a total order yields a total order, for every method.
    #[test]
    fn totality_survives_revision(space in arb_space(), seed in any::<u64>(), len in 0usize..6) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        use rand::SeedableRng;
        let prior = common::random_total_prior(&mut rng, space.world_count());
        use rand::Rng;
        let seq: Vec<ObsId> = (0..len)
            .map(|_| ObsId(rng.gen_range(0..space.obs_count())))
            .collect();
        for method in RevisionMethod::ALL {
            let mut state = RevisionState::initial(method, &prior);
            for &p in &seq {
                let (next, _) = state.step(&space, p);
                state = next;
                prop_assert!(state.order().is_total(), "{method:?} broke totality");
                prop_assert!(state.order().validate().is_ok());
            }
        }
    }

    // A promotion step only rewires pairs that touch the promoted set.
    #[test]
    fn promotion_changes_only_pairs_touching_the_minima(
        space in arb_space(),
        levels_seed in any::<u64>(),
        obs_ix in 0usize..16,
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(levels_seed);
        let prior = common::random_total_prior(&mut rng, space.world_count());
        let p = ObsId(obs_ix % space.obs_count());
        let state = RevisionState::initial(RevisionMethod::Mini, &prior);
        let (next, record) = state.mini_step(&space, p);
        let n = space.world_count();
        for a in (0..n).map(WorldId) {
            for b in (0..n).map(WorldId) {
                if prior.le(a, b) != next.order().le(a, b) {
                    prop_assert!(
                        record.promoted.contains(a) || record.promoted.contains(b),
                        "pair ({a:?},{b:?}) changed without touching the promoted set"
                    );
                }
            }
        }
    }

    // Elimination never grows the survivor set; the other methods never
    // change it.
    #[test]
    fn survivor_sets_are_monotone(space in arb_space(), seq_seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seq_seed);
        let prior = Preorder::flat(space.world_count());
        let seq: Vec<ObsId> = (0..5)
            .map(|_| ObsId(rng.gen_range(0..space.obs_count())))
            .collect();
        for method in RevisionMethod::ALL {
            let mut state = RevisionState::initial(method, &prior);
            for &p in &seq {
                let before = state.survivors();
                let (next, _) = state.step(&space, p);
                state = next;
                match method {
                    RevisionMethod::Cond => {
                        prop_assert!(state.survivors().is_subset(before))
                    }
                    _ => prop_assert_eq!(state.survivors(), before),
                }
            }
        }
    }

    // Unrolling is monotone: each unroll extends the previous one, and the
    // support never leaves the stream's support, with equality once the
    // whole prefix and cycle have been played.
    #[test]
    fn unroll_is_prefix_monotone(
        space in arb_space(),
        prefix in prop::collection::vec(0usize..8, 0..4),
        cycle in prop::collection::vec(0usize..8, 1..4),
        k in 0usize..12,
    ) {
        let to_ids = |v: &[usize]| -> Vec<ObsId> {
            v.iter().map(|&i| ObsId(i % space.obs_count())).collect()
        };
        let spec = StreamSpec::new(to_ids(&prefix), to_ids(&cycle)).unwrap();
        let a = spec.unroll(k);
        let b = spec.unroll(k + 1);
        prop_assert_eq!(a.items(), &b.items()[..k]);
        prop_assert!(a.support().is_subset(spec.support()));
        let full_at = spec.prefix().len() + spec.cycle().len();
        if k >= full_at {
            prop_assert_eq!(a.support(), spec.support());
        }
    }

    // Sound and complete streams are fair on negation-closed spaces, and
    // fairness implies completeness.
    #[test]
    fn fairness_sits_between_soundness_and_completeness(
        space in arb_closed_space(),
        target_ix in 0usize..4,
        prefix in prop::collection::vec(0usize..8, 0..4),
        cycle in prop::collection::vec(0usize..8, 1..4),
    ) {
        let target = WorldId(target_ix % space.world_count());
        let to_ids = |v: &[usize]| -> Vec<ObsId> {
            v.iter().map(|&i| ObsId(i % space.obs_count())).collect()
        };
        let spec = StreamSpec::new(to_ids(&prefix), to_ids(&cycle)).unwrap();
        let fair = is_fair(&space, &spec, target).unwrap();
        if is_sound(&space, &spec, target) && is_complete(&space, &spec, target) {
            prop_assert!(fair, "sound+complete stream judged unfair");
        }
        if fair {
            prop_assert!(is_complete(&space, &spec, target), "fair but incomplete");
        }
    }

    // Minimal elements: always inside the queried set, nonempty on nonempty
    // queries of total orders, and equal to the lower-bound definition for
    // total orders.
    #[test]
    fn minima_laws(space in arb_space(), seed in any::<u64>(), mask in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = space.world_count();
        let total = common::random_total_prior(&mut rng, n);
        let general = common::random_preorder(&mut rng, n);
        let xs = WorldSet::from_bits(mask & space.all_worlds().bits());
        for order in [&total, &general] {
            let min = order.min_of(xs);
            prop_assert!(min.is_subset(xs));
        }
        let min_total = total.min_of(xs);
        if !xs.is_empty() {
            prop_assert!(!min_total.is_empty(), "total orders have minima");
        }
        let lower_bounds: WorldSet = xs
            .iter()
            .filter(|&s| xs.iter().all(|t| total.le(s, t)))
            .collect();
        prop_assert_eq!(min_total, lower_bounds);
    }

    // Negation closure implies strong separation on covered spaces.
    #[test]
    fn negation_closure_implies_strong_separation(space in arb_space()) {
        if space.is_negation_closed() {
            prop_assert!(space.is_strongly_separated(), "{space:?}");
        }
    }

    // Searching with the full signature loses nothing: if any subset of a
    // world's observables satisfies the promotion tell-tale clause, the full
    // signature does too. The subset search is an independent oracle here.
    #[test]
    fn promotion_telltale_full_signature_is_no_loss(
        space in arb_space(),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let prior = common::random_total_prior(&mut rng, space.world_count());
        let by_impl = matches!(
            mini_telltale_exists(&space, &prior).unwrap(),
            TellTaleOutcome::Map(_)
        );
        let by_subsets = (0..space.world_count()).map(WorldId).all(|s| {
            subsets_of(space.signature(s)).into_iter().any(|f| {
                promotion_clause_holds(&space, &prior, s, f)
            })
        });
        prop_assert_eq!(by_impl, by_subsets);
    }

    // Elimination tell-tale existence does not depend on the enumeration
    // order of candidate sets; checked against a reversed-order search
    // written out independently from the clauses.
    #[test]
    fn elimination_telltale_existence_is_order_free(
        space in arb_space(),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let prior = common::random_preorder(&mut rng, space.world_count());
        let by_impl = matches!(cond_telltale_exists(&space, &prior), TellTaleOutcome::Map(_));
        let by_reversed = (0..space.world_count()).map(WorldId).all(|s| {
            let mut candidates = subsets_of(space.signature(s));
            candidates.reverse();
            candidates
                .into_iter()
                .any(|f| elimination_clauses_hold(&space, &prior, s, f))
        });
        prop_assert_eq!(by_impl, by_reversed);
    }

    // Round-trips through the file formats.
    #[test]
    fn file_formats_round_trip(space in arb_space(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        use tracktruth::io;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let printed = io::print_space(&space);
        prop_assert_eq!(&io::parse_space("t", &printed).unwrap(), &space);

        let total = common::random_total_prior(&mut rng, space.world_count());
        let printed = io::print_prior(&space, &total);
        prop_assert_eq!(io::parse_prior("t", &printed, &space).unwrap(), total);

        let partial = common::random_preorder(&mut rng, space.world_count());
        let printed = io::print_prior(&space, &partial);
        prop_assert_eq!(io::parse_prior("t", &printed, &space).unwrap(), partial);

        let m = space.obs_count();
        let prefix: Vec<ObsId> = (0..rng.gen_range(0..3)).map(|_| ObsId(rng.gen_range(0..m))).collect();
        let cycle: Vec<ObsId> = (0..rng.gen_range(1..4)).map(|_| ObsId(rng.gen_range(0..m))).collect();
        let spec = StreamSpec::new(prefix, cycle).unwrap();
        let printed = io::print_stream(&space, &spec);
        prop_assert_eq!(io::parse_stream("t", &printed, &space).unwrap(), spec);
    }
}

fn subsets_of(set: ObsSet) -> Vec<ObsSet> {
    let bits = set.bits();
    let mut out = Vec::new();
    let mut m = bits;
    loop {
        out.push(ObsSet::from_bits(m));
        if m == 0 {
            break;
        }
        m = (m - 1) & bits;
    }
    out.sort_by_key(|s| (s.len(), s.bits()));
    out
}

/// The promotion tell-tale clause for a candidate set, written from the
/// definition, independent of the library's search.
fn promotion_clause_holds(
    space: &EpistemicSpace,
    order: &Preorder,
    s: WorldId,
    candidate: ObsSet,
) -> bool {
    candidate.iter().any(|p| {
        let min_p = order.min_of(space.extension(p));
        min_p.contains(s)
            && min_p
                .iter()
                .filter(|&t| t != s && order.equiv(t, s))
                .all(|t| {
                    candidate.iter().any(|q| {
                        let min_q = order.min_of(space.extension(q));
                        min_q.contains(s) && !min_q.contains(t)
                    })
                })
    })
}

/// The elimination tell-tale clauses for a candidate set, ditto.
fn elimination_clauses_hold(
    space: &EpistemicSpace,
    order: &Preorder,
    s: WorldId,
    candidate: ObsSet,
) -> bool {
    let n = space.world_count();
    let comparable_ok = (0..n).map(WorldId).all(|t| {
        t == s
            || !order.comparable(t, s)
            || !candidate.is_subset(space.signature(t))
            || order.lt(s, t)
    });
    if !comparable_ok {
        return false;
    }
    subsets_of(space.signature(s).minus(candidate))
        .into_iter()
        .map(|extra| candidate.union(extra))
        .all(|extended| {
            (0..n).map(WorldId).all(|t| {
                t == s
                    || order.comparable(t, s)
                    || !extended.is_subset(space.signature(t))
                    || (0..n)
                        .map(WorldId)
                        .any(|v| order.lt(v, t) && extended.is_subset(space.signature(v)))
            })
        })
}

/// The one-shot identifier never changes its mind: on every sound sequence
/// for a world of a one-shot-identifiable space, the guess (if any) is that
/// world, and its firing point is stable under extension.
#[test]
fn identifier_is_once_defined_on_exhaustive_prefixes() {
    for space in pool() {
        if dftt_construct(space).failure().is_some() {
            continue;
        }
        for s in (0..space.world_count()).map(WorldId) {
            let labels: Vec<ObsId> = space.signature(s).iter().collect();
            let max_len = labels.len() + 2;
            let mut stack: Vec<Vec<ObsId>> = vec![Vec::new()];
            while let Some(seq) = stack.pop() {
                let guess = finite_identifier(space, &DataSequence::new(seq.clone())).unwrap();
                match guess {
                    FiniteGuess::NoGuess => {}
                    FiniteGuess::Guess { world, at } => {
                        assert_eq!(world, s, "sound guesses must name the target");
                        // Stability: every extension reports the same shot.
                        let mut extended = seq.clone();
                        extended.extend(labels.iter().copied());
                        let again = finite_identifier(space, &DataSequence::new(extended)).unwrap();
                        assert_eq!(again, FiniteGuess::Guess { world, at });
                    }
                }
                if seq.len() < max_len {
                    for &p in &labels {
                        let mut next = seq.clone();
                        next.push(p);
                        stack.push(next);
                    }
                }
            }
            // On the canonical stream the guess eventually fires.
            let spec = tracktruth::canonical_sc_stream(space, s).unwrap();
            let long = spec.unroll(space.world_count() + labels.len());
            match finite_identifier(space, &long).unwrap() {
                FiniteGuess::Guess { world, .. } => assert_eq!(world, s),
                FiniteGuess::NoGuess => {
                    panic!("identifier never fires for {s:?} on {space:?}")
                }
            }
        }
    }
}

/// Every total preorder yielded by the enumerator is valid, total, and the
/// run contains no duplicates (pinned counts live in the unit tests).
#[test]
fn enumerated_priors_are_valid_and_distinct() {
    let space = fixtures::diamond_space();
    let all: Vec<Preorder> = enumerate_total_preorders(&space, 6).unwrap().collect();
    assert_eq!(all.len(), 75);
    for (i, a) in all.iter().enumerate() {
        a.validate().unwrap();
        assert!(a.is_total());
        for b in all.iter().skip(i + 1) {
            assert_ne!(a, b);
        }
    }
}

/// Transcription oracles for the three operators: rebuild the revised
/// relation pair by pair from the defining clauses and compare with the
/// packed-matrix implementation, over random spaces, priors (total and
/// partial, including elimination-shrunken domains) and observations.
#[test]
fn step_operators_match_their_clausewise_transcriptions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6f7261636c65);
    let spaces = pool();
    for _ in 0..4_000 {
        let space = &spaces[rng.gen_range(0..spaces.len())];
        let n = space.world_count();
        let prior = if rng.gen_bool(0.5) {
            common::random_total_prior(&mut rng, n)
        } else {
            common::random_preorder(&mut rng, n)
        };
        let method = RevisionMethod::ALL[rng.gen_range(0..3)];
        let mut state = RevisionState::initial(method, &prior);
        for _ in 0..rng.gen_range(1..=4) {
            let p = ObsId(rng.gen_range(0..space.obs_count()));
            let before = state.order().clone();
            let domain = before.domain();
            let ext = space.extension(p).intersect(domain);
            let (after, _) = state.step(space, p);
            for a in (0..n).map(WorldId) {
                for b in (0..n).map(WorldId) {
                    let expected = match method {
                        RevisionMethod::Mini => {
                            let promoted = before.min_of(ext);
                            if !domain.contains(a) || !domain.contains(b) {
                                false
                            } else if promoted.contains(a) && !promoted.contains(b) {
                                true
                            } else if !promoted.contains(a) && promoted.contains(b) {
                                false
                            } else {
                                before.le(a, b)
                            }
                        }
                        RevisionMethod::Lex => {
                            if !domain.contains(a) || !domain.contains(b) {
                                false
                            } else {
                                let in_a = ext.contains(a);
                                let in_b = ext.contains(b);
                                (in_a && in_b && before.le(a, b))
                                    || (!in_a && !in_b && before.le(a, b))
                                    || (in_a && !in_b)
                            }
                        }
                        RevisionMethod::Cond => {
                            ext.contains(a) && ext.contains(b) && before.le(a, b)
                        }
                    };
                    assert_eq!(
                        after.order().le(a, b),
                        expected,
                        "{method:?} on {space:?} observing {p:?} from {before:?}: pair ({a:?}, {b:?})"
                    );
                }
            }
            state = after;
        }
    }
}

/// The lasso decision also matches the stream-enumeration oracle on
/// *partial* priors, where minimality is comparability-relative.
#[test]
fn limit_decisions_match_enumeration_on_partial_priors() {
    use rayon::prelude::*;
    use tracktruth::{decide_in_limit, enumerate_preorders, DecideStatus, VerifierConfig};
    let cfg = VerifierConfig::default();
    let mut instances = Vec::new();
    for space in common::space_pool(3, 3) {
        for prior in enumerate_preorders(&space, 3).unwrap() {
            if prior.is_total() {
                continue; // covered by the acceptance suite
            }
            for method in RevisionMethod::ALL {
                for w in 0..space.world_count() {
                    instances.push((space.clone(), prior.clone(), method, WorldId(w)));
                }
            }
        }
    }
    let mismatches: Vec<String> = instances
        .par_iter()
        .filter_map(|(space, prior, method, target)| {
            let decide = decide_in_limit(space, prior, *method, *target, &cfg)
                .unwrap()
                .status
                == DecideStatus::NotIdentified;
            let oracle = oracle_not_identified(space, prior, *method, *target);
            (decide != oracle).then(|| format!("{space:?} {prior:?} {} {target:?}", method.name()))
        })
        .collect();
    assert!(
        !instances.is_empty() && mismatches.is_empty(),
        "{} instances, mismatches:\n{}",
        instances.len(),
        mismatches.join("\n")
    );
}

/// Same exhaustive stream-enumeration oracle as the acceptance suite keeps
/// for total priors; duplicated here so this suite stays self-contained.
fn oracle_not_identified(
    space: &EpistemicSpace,
    prior: &Preorder,
    method: RevisionMethod,
    target: WorldId,
) -> bool {
    use std::collections::{HashMap, VecDeque};
    let sig = space.signature(target);
    let labels: Vec<ObsId> = sig.iter().collect();
    assert!(!labels.is_empty());
    let init = RevisionState::initial(method, prior);
    let mut states: Vec<RevisionState> = vec![init.clone()];
    let mut state_index: HashMap<RevisionState, usize> = HashMap::new();
    state_index.insert(init, 0);
    let mut node_seen: HashMap<(usize, ObsSet), ()> = HashMap::new();
    node_seen.insert((0, ObsSet::EMPTY), ());
    let mut queue = VecDeque::from([(0usize, ObsSet::EMPTY)]);
    let mut covs_per_state: Vec<Vec<ObsSet>> = vec![vec![ObsSet::EMPTY]];
    while let Some((six, cov)) = queue.pop_front() {
        for &p in &labels {
            let (next, _) = states[six].step(space, p);
            let nix = match state_index.get(&next) {
                Some(&ix) => ix,
                None => {
                    let ix = states.len();
                    state_index.insert(next.clone(), ix);
                    states.push(next);
                    covs_per_state.push(Vec::new());
                    ix
                }
            };
            let ncov = cov.union(ObsSet::singleton(p));
            if node_seen.insert((nix, ncov), ()).is_none() {
                covs_per_state[nix].push(ncov);
                queue.push_back((nix, ncov));
            }
        }
    }
    let window = states.len() + labels.len();
    let target_set = tracktruth::WorldSet::singleton(target);
    let wrong_forever = |start: &RevisionState, cycle: &[ObsId]| -> bool {
        let mut boundaries: Vec<RevisionState> = vec![start.clone()];
        let mut wrong_per_pass: Vec<bool> = Vec::new();
        let mut state = start.clone();
        loop {
            let mut wrong = false;
            for &p in cycle {
                let (next, _) = state.step(space, p);
                state = next;
                wrong |= state.conjecture() != target_set;
            }
            wrong_per_pass.push(wrong);
            if let Some(j) = boundaries.iter().position(|b| *b == state) {
                return wrong_per_pass[j..].iter().any(|&w| w);
            }
            boundaries.push(state.clone());
        }
    };
    fn is_power_of_shorter(cycle: &[ObsId]) -> bool {
        let n = cycle.len();
        (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| cycle[i] == cycle[i % d]))
    }
    fn search(
        labels: &[ObsId],
        window: usize,
        cycle: &mut Vec<ObsId>,
        check: &mut dyn FnMut(&[ObsId]) -> bool,
    ) -> bool {
        if !cycle.is_empty() && !is_power_of_shorter(cycle) && check(cycle) {
            return true;
        }
        if cycle.len() == window {
            return false;
        }
        for &p in labels {
            cycle.push(p);
            if search(labels, window, cycle, check) {
                return true;
            }
            cycle.pop();
        }
        false
    }
    let mut cycle: Vec<ObsId> = Vec::new();
    let mut check = |cycle: &[ObsId]| -> bool {
        let cycle_support: ObsSet = cycle.iter().copied().collect();
        for (six, covs) in covs_per_state.iter().enumerate() {
            if covs.iter().any(|c| c.union(cycle_support) == sig)
                && wrong_forever(&states[six], cycle)
            {
                return true;
            }
        }
        false
    };
    search(&labels, window, &mut cycle, &mut check)
}
