//! Command execution. Every command yields its primary output as one string
//! so that it can be digested, written to `--out`, or printed.

use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use signed_hultman::census::{census_checkpoint, signed_hultman_table, CensusOptions, HultmanTable};
use signed_hultman::graph::{arrow_view, ArrowStyle};
use signed_hultman::group::{CayleyGroup, GroupError, GroupSpec};
use signed_hultman::prob::{
    pr_neg, pr_pi_bruteforce, pr_power, spectrum, structural_predicates_from_probabilities, verify_main_theorem,
    ProbError, VerifyMode,
};
use signed_hultman::rewrite::{apply_step, normalize, NormalizeOptions, RewriteStep, StepKind, StepParams};
use signed_hultman::signed::check_rank;
use signed_hultman::{build_graph, s_count, s_via_circ};

use crate::args::{Command, Format, GroupCommand, Global, OpKind, ProbCommand, SMethod, VerifyCommand};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad arguments or a request the library refuses; exit 2.
    Usage(String),
    /// A file could not be read or written; exit 3.
    Io(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn group_failure(e: GroupError) -> Failure {
    match e {
        GroupError::Io(_) => Failure::Io(e.to_string()),
        other => usage(other),
    }
}

fn prob_failure(e: ProbError) -> Failure {
    match e {
        ProbError::Group(g) => group_failure(g),
        other => usage(other),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    /// False when a verification command found a counterexample.
    pub verified: bool,
    /// Files read, for the manifest.
    pub inputs: Vec<PathBuf>,
    pub seed: Option<u64>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, verified: true, inputs: Vec::new(), seed: None }
    }
}

/// Pretty JSON with keys sorted, one trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v: Value = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn reject(format: Format, command: &str) -> Failure {
    Failure::Usage(format!("{command} has no {format:?} output").to_lowercase())
}

fn files_in(spec: &GroupSpec, out: &mut Vec<PathBuf>) {
    match spec {
        GroupSpec::File(p) => out.push(p.clone()),
        GroupSpec::DirectSum(parts) => parts.iter().for_each(|p| files_in(p, out)),
        _ => {}
    }
}

fn load(spec: &GroupSpec, inputs: &mut Vec<PathBuf>) -> Result<CayleyGroup, Failure> {
    files_in(spec, inputs);
    spec.build().map_err(|e| match group_failure(e) {
        Failure::Io(m) => Failure::Io(format!("{spec}: {m}")),
        other => other,
    })
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn census_csv(table: &HultmanTable, split: bool) -> String {
    if split {
        return table.to_csv();
    }
    let mut out = String::from("n,k,total\n");
    for (k, c) in &table.counts {
        out += &format!("{},{k},{}\n", table.n, c.total());
    }
    out
}

pub fn execute(command: &Command, global: &Global) -> Result<Outcome, Failure> {
    let format = global.format;
    let allow_large = global.override_size_guard;
    match command {
        Command::Census(a) => {
            let table = match &a.range {
                Some(r) => {
                    check_rank(a.n, signed_hultman::census::CENSUS_RANK_LIMIT, allow_large).map_err(usage)?;
                    census_checkpoint(a.n, r.clone()).map_err(usage)?
                }
                None => signed_hultman_table(a.n, CensusOptions { allow_large, shards: a.shards }).map_err(usage)?,
            };
            Ok(Outcome::ok(match format {
                Format::Json => to_json(&table),
                Format::Csv | Format::Text => census_csv(&table, a.split),
            }))
        }
        Command::Graph(a) => {
            let style = if a.ascii { ArrowStyle::Ascii } else { ArrowStyle::Unicode };
            let g = build_graph(&a.pi);
            let walks = arrow_view(&a.pi, style);
            Ok(Outcome::ok(match format {
                Format::Text => format!("s = {}\n", g.cycle_count()) + &lines(walks),
                Format::Json => to_json(&json!({
                    "pi": a.pi,
                    "s": g.cycle_count(),
                    "cycles": g.cycles(),
                    "gray_edges": g.gray_edges(),
                    "black_edges": g.black_edges(),
                    "walks": walks,
                })),
                Format::Csv => return Err(reject(format, "graph")),
            }))
        }
        Command::S(a) => {
            let s = match a.method {
                SMethod::Graph => s_count(&a.pi),
                SMethod::Circ => s_via_circ(&a.pi).map_err(usage)?,
                SMethod::Both => {
                    let (g, c) = (s_count(&a.pi), s_via_circ(&a.pi).map_err(usage)?);
                    if g != c {
                        return Ok(Outcome {
                            output: format!("graph route {g} != circ route {c}\n"),
                            verified: false,
                            ..Outcome::ok(String::new())
                        });
                    }
                    g
                }
            };
            Ok(Outcome::ok(match format {
                Format::Text => format!("{s}\n"),
                Format::Json => to_json(&json!({ "pi": a.pi, "s": s })),
                Format::Csv => return Err(reject(format, "s")),
            }))
        }
        Command::Op { kind, args } => {
            let n = args.pi.rank();
            let (kind, y) = match kind {
                OpKind::Exchange => (StepKind::Exchange, args.y),
                OpKind::Cyclic => (StepKind::Cyclic, args.y),
                OpKind::SignChange => {
                    let y = args.x.succ(n);
                    if args.y.is_some_and(|given| given != y) {
                        return Err(Failure::Usage(format!("sign-change at {} needs --y {y}", args.x)));
                    }
                    if args.x.sign == signed_hultman::Sign::Minus || args.x.magnitude > n {
                        return Err(Failure::Usage(format!("sign-change needs --x +0..+{n}")));
                    }
                    (StepKind::SignChange, Some(y))
                }
            };
            let y = y.ok_or_else(|| Failure::Usage(format!("{kind} needs --y")))?;
            let params = StepParams { kind, x: args.x, y };
            let after = apply_step(&args.pi, &params).map_err(usage)?;
            let step = RewriteStep { kind, x: args.x, y, before: args.pi.clone(), after: after.clone() };
            Ok(Outcome::ok(match format {
                Format::Text => format!("{after}\n"),
                Format::Json => to_json(&step),
                Format::Csv => return Err(reject(format, "op")),
            }))
        }
        Command::Normalize(a) => {
            let opts = NormalizeOptions { allow_large, max_states: a.max_states };
            let (canon, trace) = normalize(&a.pi, opts).map_err(usage)?;
            Ok(Outcome::ok(match format {
                Format::Text => {
                    let mut out = format!("{canon}\n");
                    if a.emit_trace {
                        out += &lines(
                            trace.steps.iter().map(|s| format!("{}: {} -> {}", s.params(), s.before, s.after)),
                        );
                    }
                    out
                }
                Format::Json if a.emit_trace => to_json(&json!({ "canonical": canon, "trace": trace })),
                Format::Json => to_json(&json!({ "canonical": canon })),
                Format::Csv => return Err(reject(format, "normalize")),
            }))
        }
        Command::Group(g) => group(g, format),
        Command::Prob(p) => prob(p, format),
        Command::Spectrum(a) => {
            let mut inputs = Vec::new();
            let grp = load(&a.group.group, &mut inputs)?;
            let spec = spectrum(&grp, a.n, CensusOptions { allow_large, shards: a.shards }).map_err(prob_failure)?;
            let output = match format {
                Format::Json => to_json(&spec),
                Format::Csv | Format::Text => spec.to_csv(),
            };
            Ok(Outcome { inputs, ..Outcome::ok(output) })
        }
        Command::Verify(v) => verify(v, format),
    }
}

fn group(cmd: &GroupCommand, format: Format) -> Result<Outcome, Failure> {
    let mut inputs = Vec::new();
    let output = match cmd {
        GroupCommand::Info(a) => {
            let g = load(&a.spec, &mut inputs)?;
            let c = g.structural_counts();
            let classes = g.classes();
            match format {
                Format::Text => {
                    let sizes: Vec<String> = classes.sizes.iter().map(|s| s.to_string()).collect();
                    lines([
                        format!("group      {}", g.label()),
                        format!("order      {}", g.order()),
                        format!("classes    {} (sizes {})", c.class_count, sizes.join(" ")),
                        format!("real       {}", c.rc_count),
                        format!("inv        {}", c.inv_count),
                        format!("ambivalent {}", c.is_ambivalent),
                        format!("odd order  {}", c.is_odd_order),
                        format!("abelian    {}", c.is_abelian),
                    ])
                }
                Format::Json => to_json(&json!({
                    "label": g.label(),
                    "order": g.order(),
                    "classes": classes.classes,
                    "class_sizes": classes.sizes,
                    "inverse_class": classes.inverse_class,
                    "square_class": classes.square_class,
                    "counts": c,
                    "names": g.names(),
                })),
                Format::Csv => return Err(reject(format, "group info")),
            }
        }
        GroupCommand::Export(a) => match format {
            Format::Text | Format::Json => to_json(&load(&a.spec, &mut inputs)?.to_file()),
            Format::Csv => return Err(reject(format, "group export")),
        },
        GroupCommand::Constants { group, classes, target } => {
            let g = load(&group.spec, &mut inputs)?;
            let v = g.class_constants(classes, *target).map_err(group_failure)?;
            match format {
                Format::Text => format!("{v}\n"),
                Format::Json => to_json(&json!({
                    "group": g.label(), "classes": classes, "target": target, "value": v.to_string(),
                })),
                Format::Csv => return Err(reject(format, "group constants")),
            }
        }
        GroupCommand::Stab { group, elements } => {
            let g = load(&group.spec, &mut inputs)?;
            let v = g.stab_count(elements).map_err(group_failure)?;
            match format {
                Format::Text => format!("{v}\n"),
                Format::Json => to_json(&json!({ "group": g.label(), "elements": elements, "value": v.to_string() })),
                Format::Csv => return Err(reject(format, "group stab")),
            }
        }
    };
    Ok(Outcome { inputs, ..Outcome::ok(output) })
}

fn prob(cmd: &ProbCommand, format: Format) -> Result<Outcome, Failure> {
    let mut inputs = Vec::new();
    let (spec, query, value) = match cmd {
        ProbCommand::Pi { group, pi } => {
            let g = load(&group.group, &mut inputs)?;
            (g.label().to_string(), json!({ "pi": pi }), pr_pi_bruteforce(&g, pi).map_err(prob_failure)?)
        }
        ProbCommand::Power { group, m, method } => {
            let g = load(&group.group, &mut inputs)?;
            let method = (*method).into();
            (g.label().to_string(), json!({ "m": m, "method": method }), pr_power(&g, *m, method).map_err(prob_failure)?)
        }
        ProbCommand::Neg { group, k, method } => {
            let g = load(&group.group, &mut inputs)?;
            let method = (*method).into();
            (g.label().to_string(), json!({ "k": k, "method": method }), pr_neg(&g, *k, method).map_err(prob_failure)?)
        }
    };
    let output = match format {
        Format::Text => format!("{value}\n"),
        Format::Json => to_json(&json!({ "group": spec, "query": query, "value": value })),
        Format::Csv => return Err(reject(format, "prob")),
    };
    Ok(Outcome { inputs, ..Outcome::ok(output) })
}

fn verify(cmd: &VerifyCommand, format: Format) -> Result<Outcome, Failure> {
    let mut inputs = Vec::new();
    match cmd {
        VerifyCommand::MainTheorem { group, n, sampled, seed } => {
            let g = load(&group.group, &mut inputs)?;
            let mode = match (sampled, seed) {
                (Some(count), Some(seed)) => VerifyMode::Sampled { count: *count, seed: *seed },
                _ => VerifyMode::Exhaustive,
            };
            let report = verify_main_theorem(&g, *n, mode).map_err(prob_failure)?;
            let output = match format {
                Format::Json => to_json(&report),
                Format::Text => {
                    let mut out = vec![format!(
                        "{} n = {}: {} checked, {} counterexamples",
                        report.group,
                        report.n,
                        report.checked,
                        report.counterexamples.len()
                    )];
                    out.extend(report.tallies.iter().map(|t| {
                        let class = if t.positive { "positive" } else { "nonpositive" };
                        format!("s = {} {class}: {} at {}", t.s, t.checked, t.predicted)
                    }));
                    out.extend(report.counterexamples.iter().map(|c| {
                        format!("counterexample {}: observed {}, predicted {}", c.pi, c.observed, c.predicted)
                    }));
                    lines(out)
                }
                Format::Csv => return Err(reject(format, "verify")),
            };
            Ok(Outcome { output, verified: report.holds(), inputs, seed: *seed })
        }
        VerifyCommand::Predicates { group, k } => {
            let g = load(&group.group, &mut inputs)?;
            let report = structural_predicates_from_probabilities(&g, k).map_err(prob_failure)?;
            let output = match format {
                Format::Json => to_json(&report),
                Format::Text => lines(report.checks.iter().map(|c| {
                    let link = if c.biconditional { "<=>" } else { "=>" };
                    format!(
                        "{} {}: structural {} {link} probabilistic {} ({})",
                        if c.consistent { "ok  " } else { "FAIL" },
                        c.name,
                        c.structural,
                        c.probabilistic,
                        c.detail
                    )
                })),
                Format::Csv => return Err(reject(format, "verify")),
            };
            Ok(Outcome { output, verified: report.consistent(), inputs, seed: None })
        }
    }
}
