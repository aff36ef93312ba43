//! `netcode`: build constructions, run protocols, compute bounds and run
//! the verification suite.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use netcode_core::bounds::BoundReport;
use netcode_core::engine::{execute_adaptive, execute_static, AdaptiveProtocol, StaticSchedule};
use netcode_core::freeset::{behrend_set, exact_max_free_set, smallest_range, verify_free, FreeSet};
use netcode_core::protocols::{
    build_f, cycle_protocols, parity_protocol, triangle_protocol, trivial_correct, trivial_detect,
};
use netcode_core::rational::{self, ratio};
use netcode_core::suite::{verify_all, Mutation, SuiteConfig};
use netcode_core::verify::{compare_to_bounds, exhaustive_correct_check, exhaustive_detect_check, VerificationReport};
use netcode_core::{Budgets, CodeSpec, Topology, Word};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "netcode", version, about = "Distributed error detection and correction on graphs")]
struct Cli {
    /// File of `key = value` lines; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the generation timestamp from reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Protocol executions allowed per exhaustive check (overrides NETCODE_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ProtocolArgs {
    /// Built-in graph (`cycle:n`, `complete:n`, `path:n`, `star:n`) or a graph file.
    #[arg(long)]
    graph: String,
    /// `rep`, `parity`, `mds` (with --k) or a codeword file.
    #[arg(long, default_value = "rep")]
    code: String,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustively check a detection protocol.
    Detect {
        #[command(flatten)]
        args: ProtocolArgs,
        /// `trivial`, `parity`, `cycle` or `triangle`.
        #[arg(long, default_value = "trivial")]
        protocol: String,
    },
    /// Exhaustively check a correction protocol against every t-symbol error.
    Correct {
        #[command(flatten)]
        args: ProtocolArgs,
        /// `trivial`, `cycle` or `triangle`.
        #[arg(long, default_value = "cycle")]
        protocol: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Lower bounds for a code on a graph.
    Bounds {
        /// Graph; defaults to `complete:n`.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Dimension, possibly fractional (`3/2`).
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        /// Take `d = n - k + 1`.
        #[arg(long)]
        mds: bool,
        /// Derive k and d from a concrete code instead (needs --m).
        #[arg(long)]
        code: Option<String>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Run the full verification suite.
    VerifyAll {
        /// Inject a fault (`drop-triangle-check`) to exercise the failure path.
        #[arg(long)]
        mutate: Option<String>,
        /// Comma-separated criteria to run (default: all).
        #[arg(long)]
        criteria: Option<String>,
    },
    /// Progression-free sets: exact maximum, sphere construction, or the
    /// least range whose encoder covers 2^m symbols.
    FreeSet {
        #[arg(long)]
        range: Option<u64>,
        #[arg(long)]
        m: Option<u32>,
        /// Length of the forbidden progressions.
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Use the sphere construction for --range.
        #[arg(long)]
        behrend: bool,
    },
    /// Build the special-cycle graph F and check its properties.
    BuildF {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Print the transcript of one execution.
    Transcript {
        #[command(flatten)]
        args: ProtocolArgs,
        #[arg(long, default_value = "trivial")]
        protocol: String,
        /// Comma-separated symbol values, or the word in hex.
        #[arg(long)]
        input: String,
        /// Run the correction protocol instead of detection.
        #[arg(long)]
        correct: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<netcode_core::Error> for Failure {
    fn from(e: netcode_core::Error) -> Self {
        use netcode_core::Error as E;
        match e {
            E::Parameter(_) | E::Capacity { .. } | E::Parse { .. } | E::Io(_) => Failure::Usage(e.to_string()),
            E::ProtocolFault(_) | E::Construction(_) => Failure::Runtime(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// A rendered report and whether every check in it passed.
struct Output {
    text: String,
    json: Value,
    csv: Option<String>,
    passed: bool,
}

const SUBCOMMANDS: [&str; 7] = ["detect", "correct", "bounds", "verify-all", "free-set", "build-f", "transcript"];

/// Splices `--key=value` pairs from the config file in after the
/// subcommand, skipping keys the command line already sets.
fn apply_config(args: Vec<String>) -> Result<Vec<String>, Failure> {
    let path = args.iter().enumerate().find_map(|(i, a)| {
        a.strip_prefix("--config=")
            .map(str::to_string)
            .or_else(|| (a == "--config").then(|| args.get(i + 1).cloned()).flatten())
    });
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let mut extra = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{path}:{}: expected key = value", no + 1)))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "config" || key == "command" {
            continue;
        }
        let flag = format!("--{key}");
        if args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match value {
            "true" => extra.push(flag),
            "false" => {}
            _ => extra.push(format!("{flag}={value}")),
        }
    }
    let at = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map_or(args.len(), |i| i + 1);
    let mut out = args;
    out.splice(at..at, extra);
    Ok(out)
}

fn load_graph(spec: &str) -> Result<Topology, Failure> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read graph {spec}: {e}")))?;
        Ok(Topology::parse(&text)?)
    } else {
        Ok(Topology::builtin(spec)?)
    }
}

fn load_code(args: &ProtocolArgs, n: usize, budgets: &Budgets) -> Result<CodeSpec, Failure> {
    let need_m = || args.m.ok_or_else(|| usage(format!("--m is required for code {:?}", args.code)));
    let code = match args.code.as_str() {
        "rep" | "repetition" => CodeSpec::repetition(n, need_m()?)?,
        "parity" => CodeSpec::parity_check(n, need_m()?)?,
        "mds" => {
            let k = args.k.ok_or_else(|| usage("--k is required for the mds code"))?;
            CodeSpec::mds(n, k, need_m()?, budgets.codewords)?
        }
        path if Path::new(path).is_file() => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read code {path}: {e}")))?;
            CodeSpec::from_explicit_text(&text, budgets.codewords)?
        }
        other => return Err(usage(format!("unknown code {other:?}"))),
    };
    if code.n() != n {
        return Err(usage(format!("code length {} does not match graph size {n}", code.n())));
    }
    if args.m.is_some_and(|m| m != code.m()) {
        return Err(usage(format!("--m does not match the code's symbol width {}", code.m())));
    }
    Ok(code)
}

fn is_repetition(code: &CodeSpec) -> bool {
    code.d() == code.n() && code.size_bits() == code.m() as u64
}

fn detection_protocol(name: &str, g: &Topology, code: &CodeSpec, budgets: &Budgets) -> Result<StaticSchedule, Failure> {
    let needs_rep = || {
        if is_repetition(code) {
            Ok(())
        } else {
            Err(usage(format!("protocol {name} decides the repetition code only")))
        }
    };
    Ok(match name {
        "trivial" => trivial_detect(g, code)?,
        "parity" => {
            if code.size_bits() != code.m() as u64 * (code.n() as u64 - 1) || code.d() != 2 {
                return Err(usage("protocol parity decides the parity-check code only"));
            }
            parity_protocol(g, code.m())?
        }
        "cycle" => {
            needs_rep()?;
            cycle_protocols(g, code.m(), budgets)?.detect
        }
        "triangle" => {
            needs_rep()?;
            if g.n() != 3 {
                return Err(usage("protocol triangle needs a 3-vertex graph"));
            }
            triangle_protocol(code.m(), budgets)?.detect
        }
        other => return Err(usage(format!("unknown protocol {other:?}"))),
    })
}

fn correction_protocol(
    name: &str,
    g: &Topology,
    code: &CodeSpec,
    t: usize,
    budgets: &Budgets,
) -> Result<AdaptiveProtocol, Failure> {
    if matches!(name, "cycle" | "triangle") {
        if t >= 2 {
            return Err(usage(format!("protocol {name} corrects a single error; t = {t} is out of contract")));
        }
        if !is_repetition(code) {
            return Err(usage(format!("protocol {name} corrects the repetition code only")));
        }
    }
    Ok(match name {
        "trivial" => trivial_correct(g, code, t, budgets.codewords)?,
        "cycle" => cycle_protocols(g, code.m(), budgets)?.correct,
        "triangle" => {
            if g.n() != 3 {
                return Err(usage("protocol triangle needs a 3-vertex graph"));
            }
            triangle_protocol(code.m(), budgets)?.correct
        }
        other => return Err(usage(format!("unknown protocol {other:?}"))),
    })
}

fn report_output(report: VerificationReport) -> Output {
    let csv = {
        let mut out = String::from("check,passed,detail\n");
        for c in &report.checks {
            let _ = writeln!(out, "{},{},{}", csv_field(&c.name), c.passed, csv_field(&c.detail));
        }
        out
    };
    Output {
        text: report.to_text(),
        json: report.to_json(),
        csv: Some(csv),
        passed: report.passed(),
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn cmd_detect(args: &ProtocolArgs, protocol: &str, budgets: &Budgets) -> Result<Output, Failure> {
    let g = load_graph(&args.graph)?;
    let code = load_code(args, g.n(), budgets)?;
    let p = detection_protocol(protocol, &g, &code, budgets)?;
    let mut report = VerificationReport::new();
    let check = exhaustive_detect_check(&p, &g, &code, budgets)?;
    let bits = check.metric_u64("max_bits").unwrap_or(0);
    report.push(check);
    let bounds = BoundReport::compute(&g, &code, budgets)?;
    report.push(compare_to_bounds(&p.name, &ratio(bits as i64, code.m() as i64), false, &bounds));
    Ok(report_output(report))
}

fn cmd_correct(args: &ProtocolArgs, protocol: &str, t: usize, budgets: &Budgets) -> Result<Output, Failure> {
    let g = load_graph(&args.graph)?;
    let code = load_code(args, g.n(), budgets)?;
    let p = correction_protocol(protocol, &g, &code, t, budgets)?;
    let mut report = VerificationReport::new();
    report.push(exhaustive_correct_check(&p, &g, &code, t, budgets)?);
    Ok(report_output(report))
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    graph: Option<&str>,
    n: Option<usize>,
    k: Option<&str>,
    d: Option<usize>,
    mds: bool,
    code: Option<&str>,
    m: Option<u32>,
    budgets: &Budgets,
) -> Result<Output, Failure> {
    let g = match (graph, n) {
        (Some(spec), _) => load_graph(spec)?,
        (None, Some(n)) => Topology::complete(n)?,
        (None, None) => return Err(usage("bounds needs --graph or --n")),
    };
    if n.is_some_and(|n| n != g.n()) {
        return Err(usage(format!("--n does not match the graph size {}", g.n())));
    }
    let report = if let Some(code) = code {
        let args = ProtocolArgs {
            graph: String::new(),
            code: code.to_string(),
            m,
            k: k.and_then(|k| k.parse().ok()),
        };
        BoundReport::compute(&g, &load_code(&args, g.n(), budgets)?, budgets)?
    } else {
        let k_text = k.ok_or_else(|| usage("bounds needs --k (or --code)"))?;
        let k = rational::parse(k_text).ok_or_else(|| usage(format!("cannot parse --k {k_text:?}")))?;
        let d = match (d, mds) {
            (Some(d), false) => d,
            (None, true) => {
                if !k.is_integer() {
                    return Err(usage("--mds needs an integer --k"));
                }
                let k: i64 = k.to_integer().try_into().map_err(|_| usage("--k out of range"))?;
                usize::try_from(g.n() as i64 - k + 1).map_err(|_| usage("--k exceeds n"))?
            }
            (Some(_), true) => return Err(usage("give either --d or --mds")),
            (None, false) => return Err(usage("bounds needs --d or --mds")),
        };
        BoundReport::from_params(&g, &k, d, budgets)?
    };
    Ok(Output {
        text: report.to_text(),
        json: report.to_json(),
        csv: Some(report.to_csv()),
        passed: true,
    })
}

fn cmd_verify_all(
    mutate: Option<&str>,
    criteria: Option<&str>,
    threads: Option<usize>,
    budgets: &Budgets,
) -> Result<Output, Failure> {
    let mutation = mutate.map(str::parse::<Mutation>).transpose()?;
    let only = criteria
        .map(|list| {
            list.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|c| (1..=9).contains(c))
                        .ok_or_else(|| usage(format!("criteria are 1..=9, got {c:?}")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let config = SuiteConfig {
        budgets: budgets.clone(),
        threads,
        mutation,
        only,
    };
    let report = verify_all(&config)?;
    Ok(Output {
        text: report.to_text(),
        json: report.to_json(),
        csv: Some(report.to_csv()),
        passed: report.passed(),
    })
}

fn free_set_output(set: &FreeSet, construction: &str, extra: Value, budgets: &Budgets) -> Result<Output, Failure> {
    let free = verify_free(&set.members, set.order, budgets.free_set_tuples)?;
    let mut json = json!({
        "range": set.range,
        "order": set.order,
        "size": set.members.len(),
        "members": set.members,
        "construction": construction,
        "verified_free": free,
    });
    if let (Value::Object(obj), Value::Object(more)) = (&mut json, extra) {
        obj.extend(more);
    }
    let mut text = set.to_text();
    let _ = writeln!(text, "# size {} ({construction}), progression-free: {free}", set.members.len());
    let csv = format!(
        "range,order,size,construction,members\n{},{},{},{},{}\n",
        set.range,
        set.order,
        set.members.len(),
        construction,
        set.members.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    );
    Ok(Output {
        text,
        json,
        csv: Some(csv),
        passed: free,
    })
}

fn cmd_free_set(range: Option<u64>, m: Option<u32>, order: usize, behrend: bool, budgets: &Budgets) -> Result<Output, Failure> {
    match (range, m) {
        (Some(range), None) => {
            if behrend {
                free_set_output(&behrend_set(range, order, budgets)?, "behrend", json!({}), budgets)
            } else {
                let set = exact_max_free_set(range, order, budgets.free_set_range)?;
                free_set_output(&set, "exact", json!({}), budgets)
            }
        }
        (None, Some(m)) => {
            let choice = smallest_range(m, order, budgets)?;
            let construction = format!("{:?}", choice.construction).to_lowercase();
            free_set_output(&choice.set, &construction, json!({ "m": m }), budgets)
        }
        _ => Err(usage("free-set needs exactly one of --range and --m")),
    }
}

fn cmd_build_f(n: usize, m: u32, budgets: &Budgets) -> Result<Output, Failure> {
    let (f, _, choice) = build_f(n, m, budgets)?;
    let props = f.verify_properties(budgets)?;
    let mut text = f.to_text();
    let _ = writeln!(text, "# range N = {}, free set {:?}", choice.range, choice.set.members);
    let _ = writeln!(text, "# part sizes {:?}", f.part_sizes());
    for (label, p) in [
        ("(1) edge-disjoint labeled cycles", &props.edge_disjoint),
        ("(2) one special cycle per edge", &props.unique_cycle_per_edge),
        ("(3) special cycle count", &props.cycle_count),
    ] {
        let _ = writeln!(text, "# {label}: {} ({})", p.holds, p.detail);
    }
    let json = json!({
        "n": n,
        "m": m,
        "range": choice.range,
        "free_set": choice.set.members,
        "part_sizes": f.part_sizes(),
        "cycles": f.cycles(),
        "properties": props,
    });
    Ok(Output {
        text,
        json,
        csv: None,
        passed: props.all_hold(),
    })
}

fn parse_input(text: &str, n: usize, m: u32) -> Result<Word, Failure> {
    if text.contains(',') {
        let values = text
            .split(',')
            .map(|v| v.trim().parse::<u64>().map_err(|_| usage(format!("bad symbol {v:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != n {
            return Err(usage(format!("input has {} symbols, graph has {n} vertices", values.len())));
        }
        Ok(Word::new(m, values)?)
    } else {
        Ok(Word::from_hex(text, n, m)?)
    }
}

fn cmd_transcript(
    args: &ProtocolArgs,
    protocol: &str,
    input: &str,
    correct: bool,
    budgets: &Budgets,
) -> Result<Output, Failure> {
    let g = load_graph(&args.graph)?;
    let code = load_code(args, g.n(), budgets)?;
    let x = parse_input(input, g.n(), code.m())?;
    let (transcript, mut json, summary) = if correct {
        let p = correction_protocol(protocol, &g, &code, 1, budgets)?;
        let run = execute_adaptive(&p, &g, &x)?;
        let summary = format!(
            "accepted {}, output {}, {} bits ({} detection)",
            run.accepted,
            run.output,
            run.transcript.total_bits(),
            run.detection_bits
        );
        let json = json!({
            "accepted": run.accepted,
            "output": run.output.values(),
            "detection_bits": run.detection_bits,
        });
        (run.transcript, json, summary)
    } else {
        let p = detection_protocol(protocol, &g, &code, budgets)?;
        let run = execute_static(&p, &g, &x)?;
        let summary = format!("accepted {}, {} bits", run.accepted, run.transcript.total_bits());
        (run.transcript, json!({ "accepted": run.accepted }), summary)
    };
    json["input"] = json!(x.values());
    json["total_bits"] = json!(transcript.total_bits());
    json["rounds"] = transcript
        .records
        .iter()
        .map(|r| json!({"round": r.round, "from": r.sender, "to": r.receiver, "bits": r.bits.to_string()}))
        .collect();
    let mut csv = String::from("round,from,to,bits\n");
    for r in &transcript.records {
        let _ = writeln!(csv, "{},{},{},{}", r.round, r.sender, r.receiver, r.bits);
    }
    Ok(Output {
        text: format!("input {x}\n{}{summary}\n", transcript.dump()),
        json,
        csv: Some(csv),
        passed: true,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let mut budgets = Budgets::from_env();
    if let Some(b) = cli.budget {
        if b == 0 {
            return Err(usage("--budget must be positive"));
        }
        budgets.executions = b;
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be positive"));
        }
        // Only fails when a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match &cli.command {
        Command::Detect { args, protocol } => cmd_detect(args, protocol, &budgets),
        Command::Correct { args, protocol, t } => cmd_correct(args, protocol, *t, &budgets),
        Command::Bounds {
            graph,
            n,
            k,
            d,
            mds,
            code,
            m,
        } => cmd_bounds(graph.as_deref(), *n, k.as_deref(), *d, *mds, code.as_deref(), *m, &budgets),
        Command::VerifyAll { mutate, criteria } => {
            cmd_verify_all(mutate.as_deref(), criteria.as_deref(), cli.threads, &budgets)
        }
        Command::FreeSet {
            range,
            m,
            order,
            behrend,
        } => cmd_free_set(*range, *m, *order, *behrend, &budgets),
        Command::BuildF { n, m } => cmd_build_f(*n, *m, &budgets),
        Command::Transcript {
            args,
            protocol,
            input,
            correct,
        } => cmd_transcript(args, protocol, input, *correct, &budgets),
    }
}

fn render(cli: &Cli, out: Output) -> Result<String, Failure> {
    let stamp = (!cli.no_timestamp).then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    Ok(match cli.format {
        Format::Text => match stamp {
            Some(s) => format!("generated_at: {s}\n{}", out.text),
            None => out.text,
        },
        Format::Json => {
            let mut json = out.json;
            if let (Some(s), Value::Object(obj)) = (stamp, &mut json) {
                obj.insert("generated_at".into(), Value::String(s));
            }
            let mut text = serde_json::to_string_pretty(&json).map_err(|e| Failure::Runtime(e.to_string()))?;
            text.push('\n');
            text
        }
        Format::Csv => out.csv.ok_or_else(|| usage("this command has no CSV output"))?,
    })
}

fn main() -> ExitCode {
    let args = match apply_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(Failure::Usage(msg) | Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        let passed = out.passed;
        Ok((render(&cli, out)?, passed))
    });
    match result {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
