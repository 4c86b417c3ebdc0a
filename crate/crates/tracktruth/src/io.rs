//! File formats and rendering.
//!
//! All inputs are JSON documents:
//!
//! * space: `{"worlds": ["u", "s"], "observables": {"p": ["u", "s"]}}`
//! * prior: `{"layers": [["t"], ["u"], ["s"]]}` (most plausible first) or
//!   `{"pairs": [["a", "b"], ...]}`, closed reflexively and transitively
//! * stream: `{"prefix": ["q"], "cycle": ["p", "q"]}`
//!
//! Printing follows declaration order everywhere, and `parse(print(x)) == x`
//! for spaces, priors, streams and verdicts.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::Preorder;
use crate::revision::StepFlag;
use crate::sets::WorldId;
use crate::space::EpistemicSpace;
use crate::stream::StreamSpec;
use crate::telltale::{TellTaleKind, TellTaleMap, TellTaleOutcome};
use crate::verifier::{
    CrossCheckReport, DecideStatus, LearningTrace, SpaceVerdict, SweepReport, Verdict,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Semantic {
        path: String,
        #[source]
        source: crate::error::Error,
    },
}

fn parse_doc<'a, T: Deserialize<'a>>(path: &str, text: &'a str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn semantic(path: &str, source: crate::error::Error) -> IoError {
    IoError::Semantic {
        path: path.to_string(),
        source,
    }
}

// ---------------------------------------------------------------------------
// Spaces

#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub worlds: Vec<String>,
    pub observables: IndexMap<String, Vec<String>>,
}

pub fn parse_space(path: &str, text: &str) -> Result<EpistemicSpace, IoError> {
    let doc: SpaceDoc = parse_doc(path, text)?;
    EpistemicSpace::new(doc.worlds, doc.observables.into_iter().collect())
        .map_err(|e| semantic(path, e))
}

pub fn print_space(space: &EpistemicSpace) -> String {
    let doc = SpaceDoc {
        worlds: space.worlds().iter().map(|w| w.name.clone()).collect(),
        observables: space
            .observables()
            .iter()
            .map(|o| {
                (
                    o.label.clone(),
                    space
                        .world_names(o.extension)
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("space serializes")
}

// ---------------------------------------------------------------------------
// Priors

#[derive(Debug, Serialize, Deserialize)]
pub struct PriorDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
}

pub fn parse_prior(path: &str, text: &str, space: &EpistemicSpace) -> Result<Preorder, IoError> {
    let doc: PriorDoc = parse_doc(path, text)?;
    match (doc.layers, doc.pairs) {
        (Some(layers), None) => {
            let ids: Result<Vec<Vec<WorldId>>, _> = layers
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|name| space.world_named(name))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect();
            let ids = ids.map_err(|e| semantic(path, e))?;
            Preorder::from_layers(space.world_count(), &ids).map_err(|e| semantic(path, e))
        }
        (None, Some(pairs)) => {
            let ids: Result<Vec<(WorldId, WorldId)>, _> = pairs
                .iter()
                .map(|(a, b)| Ok((space.world_named(a)?, space.world_named(b)?)))
                .collect();
            let ids = ids.map_err(|e: crate::error::Error| semantic(path, e))?;
            Preorder::from_pairs(space.world_count(), &ids).map_err(|e| semantic(path, e))
        }
        _ => Err(semantic(
            path,
            crate::error::Error::BadLayers(
                "a prior needs exactly one of `layers` or `pairs`".to_string(),
            ),
        )),
    }
}

pub fn print_prior(space: &EpistemicSpace, order: &Preorder) -> String {
    let doc = prior_doc(space, order);
    serde_json::to_string_pretty(&doc).expect("prior serializes")
}

pub fn prior_doc(space: &EpistemicSpace, order: &Preorder) -> PriorDoc {
    match order.layers() {
        Some(layers) => PriorDoc {
            layers: Some(
                layers
                    .iter()
                    .map(|layer| layer.iter().map(|&w| space.world(w).name.clone()).collect())
                    .collect(),
            ),
            pairs: None,
        },
        None => PriorDoc {
            layers: None,
            pairs: Some(
                order
                    .related_pairs()
                    .iter()
                    .map(|&(a, b)| (space.world(a).name.clone(), space.world(b).name.clone()))
                    .collect(),
            ),
        },
    }
}

// ---------------------------------------------------------------------------
// Streams

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StreamDoc {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

pub fn parse_stream(path: &str, text: &str, space: &EpistemicSpace) -> Result<StreamSpec, IoError> {
    let doc: StreamDoc = parse_doc(path, text)?;
    stream_from_doc(path, &doc, space)
}

fn stream_from_doc(
    path: &str,
    doc: &StreamDoc,
    space: &EpistemicSpace,
) -> Result<StreamSpec, IoError> {
    let resolve = |labels: &[String]| {
        labels
            .iter()
            .map(|l| space.obs_labelled(l))
            .collect::<Result<Vec<_>, _>>()
    };
    let prefix = resolve(&doc.prefix).map_err(|e| semantic(path, e))?;
    let cycle = resolve(&doc.cycle).map_err(|e| semantic(path, e))?;
    StreamSpec::new(prefix, cycle).map_err(|e| semantic(path, e))
}

pub fn stream_doc(space: &EpistemicSpace, spec: &StreamSpec) -> StreamDoc {
    let labels = |items: &[crate::sets::ObsId]| {
        items
            .iter()
            .map(|&p| space.observable(p).label.clone())
            .collect()
    };
    StreamDoc {
        prefix: labels(spec.prefix().items()),
        cycle: labels(spec.cycle().items()),
    }
}

pub fn print_stream(space: &EpistemicSpace, spec: &StreamSpec) -> String {
    serde_json::to_string_pretty(&stream_doc(space, spec)).expect("stream serializes")
}

// ---------------------------------------------------------------------------
// Tell-tale maps

#[derive(Debug, Serialize, Deserialize)]
pub struct TellTaleDoc {
    pub kind: String,
    pub assignment: IndexMap<String, Vec<String>>,
}

pub fn telltale_doc(space: &EpistemicSpace, map: &TellTaleMap) -> TellTaleDoc {
    TellTaleDoc {
        kind: map.kind.name().to_string(),
        assignment: space
            .worlds()
            .iter()
            .map(|w| {
                (
                    w.name.clone(),
                    space
                        .obs_labels(map.assignment[w.id.0])
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                )
            })
            .collect(),
    }
}

pub fn print_telltale(space: &EpistemicSpace, map: &TellTaleMap) -> String {
    serde_json::to_string_pretty(&telltale_doc(space, map)).expect("tell-tale serializes")
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorFixDoc {
    pub position: usize,
    pub observable: String,
    pub corrected_at: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictDoc {
    pub target: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<StreamDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub error_fixes: Vec<ErrorFixDoc>,
}

pub fn verdict_doc(space: &EpistemicSpace, verdict: &Verdict) -> VerdictDoc {
    VerdictDoc {
        target: space.world(verdict.target).name.clone(),
        status: status_name(verdict.status).to_string(),
        witness: verdict.witness.as_ref().map(|w| stream_doc(space, w)),
        error_fixes: verdict
            .error_fixes
            .iter()
            .map(|f| ErrorFixDoc {
                position: f.position,
                observable: space.observable(f.obs).label.clone(),
                corrected_at: f.corrected_at,
            })
            .collect(),
    }
}

pub fn print_verdict(space: &EpistemicSpace, verdict: &Verdict) -> String {
    serde_json::to_string_pretty(&verdict_doc(space, verdict)).expect("verdict serializes")
}

/// Re-reads a printed verdict; used to round-trip reports.
pub fn parse_verdict(path: &str, text: &str, space: &EpistemicSpace) -> Result<Verdict, IoError> {
    let doc: VerdictDoc = parse_doc(path, text)?;
    let target = space
        .world_named(&doc.target)
        .map_err(|e| semantic(path, e))?;
    let status = match doc.status.as_str() {
        "identified" => DecideStatus::Identified,
        "not-identified" => DecideStatus::NotIdentified,
        "no-sound-stream" => DecideStatus::NoSoundStream,
        other => {
            return Err(semantic(
                path,
                crate::error::Error::BadLayers(format!("unknown status `{other}`")),
            ))
        }
    };
    let witness = match &doc.witness {
        Some(w) => Some(stream_from_doc(path, w, space)?),
        None => None,
    };
    let error_fixes = doc
        .error_fixes
        .iter()
        .map(|f| {
            Ok(crate::verifier::ErrorFix {
                position: f.position,
                obs: space
                    .obs_labelled(&f.observable)
                    .map_err(|e| semantic(path, e))?,
                corrected_at: f.corrected_at,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Verdict {
        target,
        status,
        witness,
        error_fixes,
    })
}

pub fn status_name(status: DecideStatus) -> &'static str {
    match status {
        DecideStatus::Identified => "identified",
        DecideStatus::NotIdentified => "not-identified",
        DecideStatus::NoSoundStream => "no-sound-stream",
    }
}

// ---------------------------------------------------------------------------
// Text rendering

/// Renders an order as layers (`[t] < [u s]`) when total, otherwise as its
/// non-reflexive pairs.
pub fn render_order_text(space: &EpistemicSpace, order: &Preorder) -> String {
    match order.layers() {
        Some(layers) => layers
            .iter()
            .map(|layer| format!("[{}]", names(space, layer)))
            .collect::<Vec<_>>()
            .join(" < "),
        None => {
            let pairs: Vec<String> = order
                .related_pairs()
                .iter()
                .map(|&(a, b)| format!("{} <= {}", space.world(a).name, space.world(b).name))
                .collect();
            if pairs.is_empty() {
                "(no relations)".to_string()
            } else {
                pairs.join(", ")
            }
        }
    }
}

fn names(space: &EpistemicSpace, ids: &[WorldId]) -> String {
    ids.iter()
        .map(|&w| space.world(w).name.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_world_set(space: &EpistemicSpace, set: crate::sets::WorldSet) -> String {
    let names = space.world_names(set);
    if names.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", names.join(" "))
    }
}

pub fn render_stream_text(space: &EpistemicSpace, spec: &StreamSpec) -> String {
    let part = |items: &[crate::sets::ObsId]| {
        items
            .iter()
            .map(|&p| space.observable(p).label.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "prefix [{}] cycle [{}]",
        part(spec.prefix().items()),
        part(spec.cycle().items())
    )
}

pub fn render_verdict_text(space: &EpistemicSpace, verdict: &Verdict) -> String {
    let mut out = format!(
        "{}: {}",
        space.world(verdict.target).name,
        status_name(verdict.status)
    );
    if let Some(w) = &verdict.witness {
        out.push_str(&format!("\n  witness: {}", render_stream_text(space, w)));
    }
    for fix in &verdict.error_fixes {
        out.push_str(&format!(
            "\n  error {} at position {} corrected at position {}",
            space.observable(fix.obs).label,
            fix.position,
            fix.corrected_at
        ));
    }
    out
}

pub fn render_space_verdict_text(space: &EpistemicSpace, verdict: &SpaceVerdict) -> String {
    let mut out = format!(
        "method {} on {} streams: {}\n",
        verdict.method.name(),
        verdict.mode.name(),
        if verdict.appropriate() {
            "appropriate"
        } else {
            "not appropriate"
        }
    );
    for v in &verdict.per_world {
        out.push_str(&render_verdict_text(space, v));
        out.push('\n');
    }
    out
}

pub fn render_trace_text(space: &EpistemicSpace, trace: &LearningTrace) -> String {
    let mut out = format!(
        "stream: {}\n  0: start  order {}  conjecture {}\n",
        render_stream_text(space, &trace.stream),
        render_order_text(space, trace.initial.order()),
        render_world_set(space, trace.initial.conjecture()),
    );
    for step in &trace.steps {
        out.push_str(&format!(
            "  {}: {}  order {}  conjecture {}",
            step.position,
            space.observable(step.obs).label,
            render_order_text(space, step.state.order()),
            render_world_set(space, step.conjecture),
        ));
        if let Some(flag) = step.record.flag {
            out.push_str(&format!("  [{}]", flag_tag(flag)));
        }
        out.push('\n');
    }
    if let Some(rec) = trace.recurrence {
        out.push_str(&format!(
            "recurrence: position {} repeats position {}; behaviour from there is periodic\n",
            rec.repeat, rec.first
        ));
    }
    out
}

pub fn flag_tag(flag: StepFlag) -> &'static str {
    flag.tag()
}

pub fn render_sweep_text(space: &EpistemicSpace, report: &SweepReport) -> String {
    let mut out = format!(
        "method {} on {} streams: {} of {} priors appropriate\n",
        report.method.name(),
        report.mode.name(),
        report.appropriate.len(),
        report.total_priors
    );
    for prior in &report.appropriate {
        out.push_str(&format!(
            "  appropriate: {}\n",
            render_order_text(space, prior)
        ));
    }
    for (prior, world) in &report.failures {
        out.push_str(&format!(
            "  fails at {}: {}\n",
            space.world(*world).name,
            render_order_text(space, prior)
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SweepDoc {
    pub method: String,
    pub mode: String,
    pub total_priors: usize,
    pub appropriate: Vec<PriorDoc>,
    pub failures: Vec<SweepFailureDoc>,
}

#[derive(Debug, Serialize)]
pub struct SweepFailureDoc {
    pub prior: PriorDoc,
    pub failing_world: String,
}

pub fn sweep_doc(space: &EpistemicSpace, report: &SweepReport) -> SweepDoc {
    SweepDoc {
        method: report.method.name().to_string(),
        mode: report.mode.name().to_string(),
        total_priors: report.total_priors,
        appropriate: report
            .appropriate
            .iter()
            .map(|p| prior_doc(space, p))
            .collect(),
        failures: report
            .failures
            .iter()
            .map(|(p, w)| SweepFailureDoc {
                prior: prior_doc(space, p),
                failing_world: space.world(*w).name.clone(),
            })
            .collect(),
    }
}

pub fn render_cross_check_text(report: &CrossCheckReport) -> String {
    if let Some(reason) = &report.skipped {
        return format!("skipped: {reason}\n");
    }
    let show = |v: Option<bool>| match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    };
    let mut out = String::new();
    out.push_str(&format!(
        "promotion appropriate: {}   promotion tell-tale: {}\n",
        show(report.mini_decide),
        show(report.mini_telltale)
    ));
    out.push_str(&format!(
        "elimination appropriate: {}   block promotion appropriate: {}   elimination tell-tale: {}\n",
        show(report.cond_decide),
        show(report.lex_decide),
        show(report.cond_telltale)
    ));
    if report.fair_lex_decide.is_some() {
        out.push_str(&format!(
            "fair block promotion appropriate: {}\n",
            show(report.fair_lex_decide)
        ));
    }
    if report.consistent() {
        out.push_str("all characterisations agree\n");
    } else {
        for m in &report.mismatches {
            out.push_str(&format!("MISMATCH: {m}\n"));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct CrossCheckDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub mini_decide: Option<bool>,
    pub mini_telltale: Option<bool>,
    pub cond_decide: Option<bool>,
    pub lex_decide: Option<bool>,
    pub cond_telltale: Option<bool>,
    pub fair_lex_decide: Option<bool>,
    pub consistent: bool,
    pub mismatches: Vec<String>,
}

pub fn cross_check_doc(report: &CrossCheckReport) -> CrossCheckDoc {
    CrossCheckDoc {
        skipped: report.skipped.clone(),
        mini_decide: report.mini_decide,
        mini_telltale: report.mini_telltale,
        cond_decide: report.cond_decide,
        lex_decide: report.lex_decide,
        cond_telltale: report.cond_telltale,
        fair_lex_decide: report.fair_lex_decide,
        consistent: report.consistent(),
        mismatches: report.mismatches.clone(),
    }
}

pub fn telltale_outcome_text(space: &EpistemicSpace, outcome: &TellTaleOutcome) -> String {
    match outcome {
        TellTaleOutcome::Map(map) => {
            let mut out = format!("{} tell-tale map:\n", map.kind.name());
            for w in space.worlds() {
                out.push_str(&format!(
                    "  {}: {{{}}}\n",
                    w.name,
                    space.obs_labels(map.assignment[w.id.0]).join(" ")
                ));
            }
            out
        }
        TellTaleOutcome::Failure(w) => {
            format!("no map: fails at world {}\n", space.world(*w).name)
        }
    }
}

pub fn telltale_kind_from_str(s: &str) -> Option<TellTaleKind> {
    match s {
        "dftt" => Some(TellTaleKind::Dftt),
        "mini" => Some(TellTaleKind::Mini),
        "cond" => Some(TellTaleKind::Cond),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn space_round_trip() {
        let space = fixtures::diamond_space();
        let printed = print_space(&space);
        let reparsed = parse_space("test", &printed).unwrap();
        assert_eq!(space, reparsed);
    }

    #[test]
    fn prior_round_trip_layers_and_pairs() {
        let space = fixtures::overlap_space();
        let total = fixtures::overlap_prior_t_u_s();
        let printed = print_prior(&space, &total);
        assert!(printed.contains("layers"));
        assert_eq!(parse_prior("test", &printed, &space).unwrap(), total);

        let partial = Preorder::from_pairs(3, &[(WorldId(0), WorldId(1))]).unwrap();
        let printed = print_prior(&space, &partial);
        assert!(printed.contains("pairs"));
        assert_eq!(parse_prior("test", &printed, &space).unwrap(), partial);
    }

    #[test]
    fn stream_round_trip() {
        let space = fixtures::diamond_space();
        let spec = fixtures::diamond_fair_trap_stream(&space);
        let printed = print_stream(&space, &spec);
        assert_eq!(parse_stream("test", &printed, &space).unwrap(), spec);
    }

    #[test]
    fn verdict_round_trip() {
        use crate::revision::RevisionMethod;
        use crate::verifier::{decide_fair, VerifierConfig};
        let space = fixtures::diamond_space();
        let prior = Preorder::flat(4);
        let s = space.world_named("s").unwrap();
        let verdict = decide_fair(
            &space,
            &prior,
            RevisionMethod::Mini,
            s,
            &VerifierConfig::default(),
        )
        .unwrap();
        let printed = print_verdict(&space, &verdict);
        let reparsed = parse_verdict("test", &printed, &space).unwrap();
        assert_eq!(reparsed.target, verdict.target);
        assert_eq!(reparsed.status, verdict.status);
        assert_eq!(reparsed.witness, verdict.witness);
        assert_eq!(reparsed.error_fixes, verdict.error_fixes);
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let err = parse_space("bad.json", "{\n  \"worlds\": [,]\n}").unwrap_err();
        match err {
            IoError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_problem() {
        let space = fixtures::overlap_space();
        let err =
            parse_stream("s.json", r#"{"prefix": [], "cycle": ["zzz"]}"#, &space).unwrap_err();
        assert!(err.to_string().contains("zzz"));
        let err = parse_prior(
            "p.json",
            r#"{"layers": [["u"]], "pairs": [["u", "s"]]}"#,
            &space,
        )
        .unwrap_err();
        assert!(err.to_string().contains("exactly one"));
    }

    #[test]
    fn order_rendering() {
        let space = fixtures::overlap_space();
        let prior = fixtures::overlap_prior_t_u_s();
        assert_eq!(render_order_text(&space, &prior), "[t] < [u] < [s]");
        let partial = Preorder::from_pairs(3, &[(WorldId(0), WorldId(1))]).unwrap();
        assert_eq!(render_order_text(&space, &partial), "u <= s");
    }

    use crate::sets::WorldId;
}
