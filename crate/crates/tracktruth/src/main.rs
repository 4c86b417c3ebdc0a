//! Command-line front end.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tracktruth::io::{self, IoError};
use tracktruth::{
    fixtures, EpistemicSpace, Preorder, RevisionMethod, RevisionState, StreamMode, StreamSpec,
    SweepOptions, TellTaleKind, VerifierConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mini,
    Cond,
    Lex,
}

impl From<MethodArg> for RevisionMethod {
    fn from(m: MethodArg) -> RevisionMethod {
        match m {
            MethodArg::Mini => RevisionMethod::Mini,
            MethodArg::Cond => RevisionMethod::Cond,
            MethodArg::Lex => RevisionMethod::Lex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Dftt,
    Mini,
    Cond,
}

impl From<KindArg> for TellTaleKind {
    fn from(k: KindArg) -> TellTaleKind {
        match k {
            KindArg::Dftt => TellTaleKind::Dftt,
            KindArg::Mini => TellTaleKind::Mini,
            KindArg::Cond => TellTaleKind::Cond,
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: FormatArg,
}

/// Learn-by-revision toolkit for finite epistemic spaces.
#[derive(Debug, Parser)]
#[command(name = "tracktruth", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a space file for well-formedness.
    Validate { space: String },
    /// Revise a prior by a sequence of observations and dump the result.
    Revise {
        space: String,
        prior: String,
        /// Revision method.
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Observable labels, applied left to right.
        #[arg(required = true)]
        observations: Vec<String>,
    },
    /// Unroll a stream and print the trace of states and conjectures.
    Trace {
        space: String,
        prior: String,
        stream: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Number of observations to unroll.
        #[arg(long, default_value_t = 24)]
        horizon: usize,
    },
    /// Decide identification in the limit for every world.
    Decide {
        space: String,
        prior: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Decide on fair streams (needs a negation-closed space).
        #[arg(long)]
        fair: bool,
        /// Restrict the decision to one world.
        #[arg(long)]
        target: Option<String>,
    },
    /// Compute a tell-tale map or report the first world without one.
    Telltale {
        space: String,
        /// Prior (unused for kind `dftt`).
        prior: Option<String>,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Decide appropriateness for every enumerable prior.
    Sweep {
        space: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        fair: bool,
        /// Enumerate all preorders, not only total ones.
        #[arg(long)]
        general: bool,
        /// World-count bound for prior enumeration.
        #[arg(long)]
        bound: Option<usize>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Cross-validate semantic decisions against tell-tale existence.
    CrossCheck { space: String, prior: String },
    /// Run a built-in, self-verifying scenario (or all of them).
    Scenario {
        /// Scenario name; list them with `--list`.
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        list: bool,
        /// Print the rationale behind each expected outcome.
        #[arg(long)]
        explain: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    File(String),
    #[error(transparent)]
    Lib(#[from] tracktruth::Error),
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::File(format!("{path}: {e}")))
}

fn load_space(path: &str) -> Result<EpistemicSpace, CliError> {
    Ok(io::parse_space(path, &read(path)?)?)
}

fn load_prior(path: &str, space: &EpistemicSpace) -> Result<Preorder, CliError> {
    Ok(io::parse_prior(path, &read(path)?, space)?)
}

fn load_stream(path: &str, space: &EpistemicSpace) -> Result<StreamSpec, CliError> {
    Ok(io::parse_stream(path, &read(path)?, space)?)
}

fn verifier_config() -> VerifierConfig {
    let mut cfg = VerifierConfig::default();
    if let Ok(value) = std::env::var("TRACKTRUTH_BUDGET") {
        if let Ok(budget) = value.parse::<usize>() {
            cfg.node_budget = budget;
        } else {
            eprintln!("warning: ignoring unparsable TRACKTRUTH_BUDGET={value}");
        }
    }
    cfg
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let format = cli.common.format;
    let cfg = verifier_config();
    match cli.command {
        Command::Validate { space } => {
            let space = load_space(&space)?;
            let report = space.validate();
            match format {
                FormatArg::Text => {
                    for v in &report.violations {
                        println!("violation: {v}");
                    }
                    for w in &report.warnings {
                        println!("warning: {w}");
                    }
                    if report.ok() {
                        println!("ok");
                    }
                }
                FormatArg::Json => {
                    let doc = serde_json::json!({
                        "ok": report.ok(),
                        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "warnings": report.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Revise {
            space,
            prior,
            method,
            observations,
        } => {
            let space = load_space(&space)?;
            let prior = load_prior(&prior, &space)?;
            let mut state = RevisionState::initial(method.into(), &prior);
            let mut records = Vec::new();
            for label in &observations {
                let p = space.obs_labelled(label)?;
                let (next, record) = state.step(&space, p);
                records.push(record);
                state = next;
            }
            match format {
                FormatArg::Text => {
                    println!("order: {}", io::render_order_text(&space, state.order()));
                    println!(
                        "survivors: {}",
                        io::render_world_set(&space, state.survivors())
                    );
                    println!(
                        "conjecture: {}",
                        io::render_world_set(&space, state.conjecture())
                    );
                    for (label, record) in observations.iter().zip(&records) {
                        if let Some(flag) = record.flag {
                            println!("note: observing {label}: {}", flag.tag());
                        }
                    }
                }
                FormatArg::Json => {
                    let doc = serde_json::json!({
                        "order": io::prior_doc(&space, state.order()),
                        "survivors": space.world_names(state.survivors()),
                        "conjecture": space.world_names(state.conjecture()),
                        "flags": records.iter().filter_map(|r| r.flag.map(|f| f.tag())).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace {
            space,
            prior,
            stream,
            method,
            horizon,
        } => {
            let space = load_space(&space)?;
            let prior = load_prior(&prior, &space)?;
            let stream = load_stream(&stream, &space)?;
            let trace = tracktruth::run_trace(&space, &prior, method.into(), &stream, horizon)?;
            match format {
                FormatArg::Text => print!("{}", io::render_trace_text(&space, &trace)),
                FormatArg::Json => {
                    let steps: Vec<_> = trace
                        .steps
                        .iter()
                        .map(|s| {
                            serde_json::json!({
                                "position": s.position,
                                "observable": space.observable(s.obs).label,
                                "order": io::prior_doc(&space, s.state.order()),
                                "conjecture": space.world_names(s.conjecture),
                                "flag": s.record.flag.map(|f| f.tag()),
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "stream": io::stream_doc(&space, &stream),
                        "steps": steps,
                        "recurrence": trace.recurrence.map(|r| serde_json::json!({
                            "first": r.first,
                            "repeat": r.repeat,
                        })),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide {
            space,
            prior,
            method,
            fair,
            target,
        } => {
            let space = load_space(&space)?;
            let prior = load_prior(&prior, &space)?;
            let method: RevisionMethod = method.into();
            let verdicts = if let Some(name) = target {
                let w = space.world_named(&name)?;
                let v = if fair {
                    tracktruth::decide_fair(&space, &prior, method, w, &cfg)?
                } else {
                    tracktruth::decide_in_limit(&space, &prior, method, w, &cfg)?
                };
                tracktruth::SpaceVerdict {
                    method,
                    mode: if fair {
                        StreamMode::Fair
                    } else {
                        StreamMode::SoundComplete
                    },
                    per_world: vec![v],
                }
            } else if fair {
                tracktruth::decide_fair_appropriate(&space, &prior, method, &cfg)?
            } else {
                tracktruth::decide_appropriate(&space, &prior, method, &cfg)?
            };
            match format {
                FormatArg::Text => {
                    print!("{}", io::render_space_verdict_text(&space, &verdicts))
                }
                FormatArg::Json => {
                    let doc = serde_json::json!({
                        "method": verdicts.method.name(),
                        "mode": verdicts.mode.name(),
                        "appropriate": verdicts.appropriate(),
                        "worlds": verdicts.per_world.iter().map(|v| io::verdict_doc(&space, v)).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(if verdicts.appropriate() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Telltale { space, prior, kind } => {
            let space = load_space(&space)?;
            let outcome = match TellTaleKind::from(kind) {
                TellTaleKind::Dftt => tracktruth::dftt_construct(&space),
                TellTaleKind::Mini => {
                    let prior_path = prior.ok_or_else(|| {
                        CliError::File("kind `mini` needs a prior file".to_string())
                    })?;
                    let prior = load_prior(&prior_path, &space)?;
                    tracktruth::mini_telltale_exists(&space, &prior)?
                }
                TellTaleKind::Cond => {
                    let prior_path = prior.ok_or_else(|| {
                        CliError::File("kind `cond` needs a prior file".to_string())
                    })?;
                    let prior = load_prior(&prior_path, &space)?;
                    tracktruth::cond_telltale_exists(&space, &prior)
                }
            };
            match format {
                FormatArg::Text => print!("{}", io::telltale_outcome_text(&space, &outcome)),
                FormatArg::Json => {
                    let doc = match &outcome {
                        tracktruth::TellTaleOutcome::Map(map) => serde_json::json!({
                            "map": io::telltale_doc(&space, map),
                        }),
                        tracktruth::TellTaleOutcome::Failure(w) => serde_json::json!({
                            "failure": space.world(*w).name,
                        }),
                    };
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(match outcome {
                tracktruth::TellTaleOutcome::Map(_) => ExitCode::SUCCESS,
                tracktruth::TellTaleOutcome::Failure(_) => ExitCode::from(1),
            })
        }
        Command::Sweep {
            space,
            method,
            fair,
            general,
            bound,
            jobs,
        } => {
            let space = load_space(&space)?;
            let mut opts = SweepOptions {
                include_general: general,
                jobs,
                ..SweepOptions::default()
            };
            if let Some(b) = bound {
                opts.total_bound = b;
                opts.general_bound = b;
            }
            let mode = if fair {
                StreamMode::Fair
            } else {
                StreamMode::SoundComplete
            };
            let report = tracktruth::sweep_priors(&space, method.into(), mode, &opts, &cfg)?;
            match format {
                FormatArg::Text => print!("{}", io::render_sweep_text(&space, &report)),
                FormatArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&io::sweep_doc(&space, &report)).unwrap()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CrossCheck { space, prior } => {
            let space = load_space(&space)?;
            let prior = load_prior(&prior, &space)?;
            let report = tracktruth::cross_check(&space, &prior, &cfg)?;
            match format {
                FormatArg::Text => print!("{}", io::render_cross_check_text(&report)),
                FormatArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&io::cross_check_doc(&report)).unwrap()
                ),
            }
            Ok(if report.consistent() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Scenario {
            name,
            all,
            list,
            explain,
        } => {
            if list {
                for s in fixtures::scenarios() {
                    println!("{:24} {}", s.name, s.summary);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let to_run: Vec<fixtures::Scenario> = if all {
                fixtures::scenarios()
            } else if let Some(name) = name {
                match fixtures::scenario(&name) {
                    Some(s) => vec![s],
                    None => {
                        eprintln!("unknown scenario `{name}`; try --list");
                        return Ok(ExitCode::from(2));
                    }
                }
            } else {
                eprintln!("pass a scenario name, --all, or --list");
                return Ok(ExitCode::from(2));
            };
            let mut all_pass = true;
            let mut json_out = Vec::new();
            for s in to_run {
                let results = (s.run)(&cfg);
                let pass = results.iter().all(|r| r.pass);
                all_pass &= pass;
                match format {
                    FormatArg::Text => {
                        println!(
                            "{} [{}] {}",
                            if pass { "PASS" } else { "FAIL" },
                            s.name,
                            s.summary
                        );
                        for r in &results {
                            println!(
                                "  {} {} (expected {}, got {})",
                                if r.pass { "ok " } else { "FAIL" },
                                r.label,
                                r.expected,
                                r.actual
                            );
                            if explain {
                                println!("       why: {}", r.note);
                            }
                        }
                    }
                    FormatArg::Json => {
                        json_out.push(serde_json::json!({
                            "scenario": s.name,
                            "pass": pass,
                            "checks": results.iter().map(|r| serde_json::json!({
                                "label": r.label,
                                "pass": r.pass,
                                "expected": r.expected,
                                "actual": r.actual,
                                "why": if explain { Some(r.note) } else { None },
                            })).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
            if format == FormatArg::Json {
                println!("{}", serde_json::to_string_pretty(&json_out).unwrap());
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
