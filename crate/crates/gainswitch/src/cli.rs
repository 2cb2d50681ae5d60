//! Command dispatch. [`run`] never panics on bad input and returns the exit
//! code with the text for stdout and stderr: 0 for success or a positive
//! check, 1 for a negative check, 2 for usage, I/O or parse errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use gainswitch_core::cospectral::{default_moments, fingerprint, first_moment_difference, pi_spectrum};
use gainswitch_core::fixtures;
use gainswitch_core::generate::{random_wqh_instance, InstanceShape};
use gainswitch_core::graph::GainGraph;
use gainswitch_core::group::Group;
use gainswitch_core::iso::{is_nontrivial, IsoVerdict};
use gainswitch_core::represent::{RepKind, Representation};
use gainswitch_core::search::{find_wqh_partitions, SearchLimits, SearchMode};
use gainswitch_core::spectrum::max_eigen_gap;
use gainswitch_core::switching::{
    gain_label, switch_graph, verify_gwqh, verify_piwqh, verify_theorem_gcosp, verify_theorem_picosp,
    CaseResolution, PartitionVerdict, WQHPartition,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{
    fingerprint_entries, graph_to_json, parse_graph, parse_partition, partition_to_json, FormatError, LoadedGraph,
};

/// Demo names accepted by `demo`.
pub const DEMOS: [&str; 3] = ["t4-13", "s4-17", "random"];

#[derive(Debug, Parser)]
#[command(name = "gainswitch", version, about = "Switching and cospectrality of gain graphs over finite groups")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance for represented spectra and inexact representation images.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = parse_tol)]
    pub tol: f64,
    /// Number of trace moments compared (default: vertices times group order).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub moments: Option<u64>,
    /// Representation: trivial, identical, permutation or regular.
    #[arg(long, global = true, value_parser = parse_rep)]
    pub rep: Option<RepKind>,
    /// Seed for the random demo.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact comparison in the group algebra.
    G,
    /// Comparison of images under --rep.
    Pi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a partition against a graph (group algebra, or --rep).
    Verify { graph: PathBuf, partition: PathBuf },
    /// Write the switched graph and certify the switching-matrix identity.
    Switch {
        graph: PathBuf,
        partition: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare trace moments (or represented spectra with --rep) of two graphs.
    Cospectral { first: PathBuf, second: PathBuf },
    /// Print the represented spectrum of a graph (trivial representation unless --rep).
    Spectrum {
        graph: PathBuf,
        /// Also write the trace-moment fingerprint to this file.
        #[arg(long)]
        fingerprint: Option<PathBuf>,
    },
    /// Enumerate partitions accepted by the verifier and test their nontriviality.
    Search {
        graph: PathBuf,
        /// Comparison mode (default: pi when --rep is given, else g).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        max_partitions: Option<usize>,
        /// Largest vertex count for the exhaustive isomorphism search.
        #[arg(long)]
        iso_budget: Option<usize>,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_cells: Option<usize>,
    },
    /// Write a built-in graph and partition as `<name>.graph.json` and `<name>.partition.json`.
    Demo {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("expected a positive finite number, got {s:?}")),
    }
}

fn parse_rep(s: &str) -> Result<RepKind, String> {
    RepKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = RepKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown representation {s:?}; expected one of {}", names.join(", "))
    })
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(i32, String), Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Verify { graph, partition } => cmd_verify(cli, graph, partition),
        Command::Switch { graph, partition, out } => cmd_switch(cli, graph, partition, out),
        Command::Cospectral { first, second } => cmd_cospectral(cli, first, second),
        Command::Spectrum { graph, fingerprint } => cmd_spectrum(cli, graph, fingerprint.as_deref()),
        Command::Search { graph, mode, max_partitions, iso_budget, max_vertices, max_cells } => {
            let mut limits = SearchLimits::default();
            if let Some(m) = max_partitions {
                limits.max_partitions = *m;
            }
            if let Some(m) = max_vertices {
                limits.max_vertices = *m;
            }
            if let Some(m) = max_cells {
                limits.max_cells = *m;
            }
            limits.iso_max_vertices = *iso_budget;
            limits.validate()?;
            cmd_search(cli, graph, *mode, &limits)
        }
        Command::Demo { name, out_dir } => cmd_demo(cli, name, out_dir),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: FormatError) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<LoadedGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| located(path, e))
}

fn load_partition(path: &Path, n: usize) -> Result<WQHPartition, Failure> {
    parse_partition(&read(path)?, n).map_err(|e| located(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn representation(group: &Arc<Group>, kind: RepKind) -> Result<Representation, Failure> {
    Ok(Representation::new(group, kind)?)
}

fn render(cli: &Cli, value: Value, text: String) -> String {
    if cli.json {
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    } else {
        text
    }
}

fn mode_json(cli: &Cli) -> Value {
    match cli.rep {
        None => json!("group"),
        Some(k) => json!({"rep": k.name(), "tol": cli.tol}),
    }
}

fn mode_text(cli: &Cli) -> String {
    match cli.rep {
        None => "group algebra".into(),
        Some(k) => format!("{k} representation (tol {:e})", cli.tol),
    }
}

fn check(cli: &Cli, g: &GainGraph, alpha: &WQHPartition) -> Result<PartitionVerdict, Failure> {
    Ok(match cli.rep {
        None => verify_gwqh(g, alpha)?,
        Some(k) => verify_piwqh(g, alpha, &representation(g.group(), k)?, cli.tol)?,
    })
}

fn case_json(group: &Group, vertex: usize, pair: usize, r: CaseResolution) -> Value {
    match r {
        CaseResolution::A => json!({"vertex": vertex, "pair": pair, "case": "a"}),
        CaseResolution::B { g1, g2 } => json!({
            "vertex": vertex, "pair": pair, "case": "b",
            "g1": gain_label(group, g1), "g2": gain_label(group, g2),
        }),
    }
}

fn case_text(group: &Group, vertex: usize, pair: usize, r: CaseResolution) -> String {
    let (a, b) = WQHPartition::pair_cells(pair);
    match r {
        CaseResolution::A => format!("v{vertex} vs C_{a}/C_{b}: case (a)"),
        CaseResolution::B { g1, g2 } => format!(
            "v{vertex} vs C_{a}/C_{b}: case (b), g1 = {}, g2 = {}",
            gain_label(group, g1),
            gain_label(group, g2)
        ),
    }
}

fn verdict_report(cli: &Cli, g: &GainGraph, alpha: &WQHPartition, verdict: &PartitionVerdict) -> (Value, String) {
    let group = g.group();
    let value = json!({
        "mode": mode_json(cli),
        "partition": alpha.cells(),
        "valid": verdict.is_valid(),
        "failures": verdict.failures().iter().map(|f| json!({
            "condition": f.condition.name(),
            "witness": f.to_string(),
        })).collect::<Vec<_>>(),
        "cases": verdict.cases().iter().map(|c| case_json(group, c.vertex, c.pair, c.resolution)).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "mode: {}", mode_text(cli));
    let _ = writeln!(text, "partition: {alpha}");
    let _ = writeln!(text, "{}", if verdict.is_valid() { "valid" } else { "invalid" });
    for f in verdict.failures() {
        let _ = writeln!(text, "  failed {f}");
    }
    for c in verdict.cases() {
        let _ = writeln!(text, "  {}", case_text(group, c.vertex, c.pair, c.resolution));
    }
    (value, text)
}

fn cmd_verify(cli: &Cli, graph: &Path, partition: &Path) -> CmdResult {
    let g = load_graph(graph)?.graph;
    let alpha = load_partition(partition, g.vertex_count())?;
    let verdict = check(cli, &g, &alpha)?;
    let (mut value, text) = verdict_report(cli, &g, &alpha, &verdict);
    value["command"] = json!("verify");
    Ok((if verdict.is_valid() { 0 } else { 1 }, render(cli, value, text)))
}

type EdgeKey = (usize, usize, String);

fn edge_set(g: &GainGraph) -> BTreeSet<EdgeKey> {
    g.edges().map(|(u, v, x)| (u, v, g.group().label(x).to_string())).collect()
}

fn edge_json(edges: &[&EdgeKey]) -> Vec<Value> {
    edges.iter().map(|(u, v, x)| json!({"u": u, "v": v, "gain": x})).collect()
}

fn cmd_switch(cli: &Cli, graph: &Path, partition: &Path, out: &Path) -> CmdResult {
    let loaded = load_graph(graph)?;
    let g = &loaded.graph;
    let alpha = load_partition(partition, g.vertex_count())?;
    let verdict = check(cli, g, &alpha)?;
    if !verdict.is_valid() {
        let (mut value, mut text) = verdict_report(cli, g, &alpha, &verdict);
        value["command"] = json!("switch");
        text.push_str("not switched: the partition is not valid in this mode\n");
        return Ok((1, render(cli, value, text)));
    }
    let switched = switch_graph(g, &alpha, &verdict)?;
    let (certified, statement) = match cli.rep {
        None => (verify_theorem_gcosp(g, &alpha)?, "A(switched) = Q A Q exactly in the group algebra".to_string()),
        Some(k) => {
            let rep = representation(g.group(), k)?;
            let how = if rep.is_exact() { "exactly".to_string() } else { format!("within {:e}", cli.tol) };
            (
                verify_theorem_picosp(g, &alpha, &rep, cli.tol)?,
                format!("pi(A(switched)) = pi(Q A Q) {how} under the {k} representation"),
            )
        }
    };
    write(out, &graph_to_json(&switched, loaded.name.clone(), loaded.source.clone()))?;
    let (before, after) = (edge_set(g), edge_set(&switched));
    let removed: Vec<&EdgeKey> = before.difference(&after).collect();
    let added: Vec<&EdgeKey> = after.difference(&before).collect();
    let value = json!({
        "command": "switch",
        "mode": mode_json(cli),
        "out": out.display().to_string(),
        "removed": edge_json(&removed),
        "added": edge_json(&added),
        "identity": statement,
        "certified": certified,
    });
    let mut text = String::new();
    let _ = writeln!(text, "mode: {}", mode_text(cli));
    let _ = writeln!(text, "wrote {}", out.display());
    for (label, edges) in [("removed", &removed), ("added", &added)] {
        for (u, v, x) in edges.iter() {
            let _ = writeln!(text, "  {label} v{u} - v{v} gain {x}");
        }
    }
    let _ = writeln!(text, "{}: {statement}", if certified { "certified" } else { "FAILED" });
    Ok((if certified { 0 } else { 1 }, render(cli, value, text)))
}

fn same_groups(g1: &GainGraph, g2: &GainGraph) -> Result<(), Failure> {
    if g1.group().spec() != g2.group().spec() {
        return Err(Failure(format!("graphs are over different groups ({} and {})", g1.group(), g2.group())));
    }
    Ok(())
}

fn class_values(fp: &gainswitch_core::cospectral::SpectralFingerprint, h: usize) -> Value {
    let entries = fingerprint_entries(fp);
    let m = &entries[h - 1];
    Value::Object(m.classes.iter().map(|c| (c.class.clone(), json!(c.value))).collect())
}

fn cmd_cospectral(cli: &Cli, first: &Path, second: &Path) -> CmdResult {
    let g1 = load_graph(first)?.graph;
    let g2 = load_graph(second)?.graph;
    same_groups(&g1, &g2)?;
    match cli.rep {
        None => cospectral_moments(cli, &g1, &g2),
        Some(k) => cospectral_spectra(cli, &g1, &g2, k),
    }
}

fn cospectral_moments(cli: &Cli, g1: &GainGraph, g2: &GainGraph) -> CmdResult {
    let h_max = match cli.moments {
        Some(h) => usize::try_from(h).map_err(|_| Failure("--moments is too large".into()))?,
        None => default_moments(g1).max(default_moments(g2)),
    };
    let diff = first_moment_difference(g1, g2, h_max)?;
    if diff == Some(0) {
        let msg = format!("vertex counts differ ({} vs {})", g1.vertex_count(), g2.vertex_count());
        let value = json!({"command": "cospectral", "mode": "group", "cospectral": false, "reason": msg});
        return Ok((1, render(cli, value, format!("not G-cospectral: {msg}\n"))));
    }
    let shown = diff.unwrap_or(h_max);
    let (f1, f2) = (fingerprint(g1, shown)?, fingerprint(g2, shown)?);
    let mut rows = Vec::with_capacity(shown);
    let mut text = String::new();
    for h in 1..=shown {
        let (l, r) = (class_values(&f1, h), class_values(&f2, h));
        let equal = l == r;
        let _ = writeln!(text, "h={h}: {}", if equal { "equal".to_string() } else { format!("{l} vs {r}") });
        rows.push(json!({"h": h, "equal": equal, "left": l, "right": r}));
    }
    let summary = match diff {
        None => format!("G-cospectral up to {h_max} moments"),
        Some(h) => format!("not G-cospectral: moments differ at h={h}"),
    };
    let _ = writeln!(text, "{summary}");
    let value = json!({
        "command": "cospectral",
        "mode": "group",
        "moments": h_max,
        "first_difference": diff,
        "cospectral": diff.is_none(),
        "comparison": rows,
        "summary": summary,
    });
    Ok((if diff.is_none() { 0 } else { 1 }, render(cli, value, text)))
}

fn cospectral_spectra(cli: &Cli, g1: &GainGraph, g2: &GainGraph, k: RepKind) -> CmdResult {
    let rep = representation(g1.group(), k)?;
    let (s1, s2) = (pi_spectrum(g1, &rep, cli.tol)?, pi_spectrum(g2, &rep, cli.tol)?);
    let gap = max_eigen_gap(&s1, &s2);
    let cospectral = gap.is_some_and(|d| d <= cli.tol);
    let fmt_list = |s: &[f64]| s.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(" ");
    let mut text = String::new();
    let _ = writeln!(text, "mode: {}", mode_text(cli));
    let _ = writeln!(text, "first:  {}", fmt_list(&s1));
    let _ = writeln!(text, "second: {}", fmt_list(&s2));
    match gap {
        Some(d) => {
            let _ = writeln!(text, "max eigenvalue gap: {d:e}");
        }
        None => {
            let _ = writeln!(text, "spectra have different lengths");
        }
    }
    let _ = writeln!(text, "{}", if cospectral { "pi-cospectral" } else { "not pi-cospectral" });
    let value = json!({
        "command": "cospectral",
        "mode": mode_json(cli),
        "first": s1,
        "second": s2,
        "max_gap": gap,
        "cospectral": cospectral,
    });
    Ok((if cospectral { 0 } else { 1 }, render(cli, value, text)))
}

fn cmd_spectrum(cli: &Cli, graph: &Path, fp_out: Option<&Path>) -> CmdResult {
    let g = load_graph(graph)?.graph;
    let kind = cli.rep.unwrap_or(RepKind::Trivial);
    let rep = representation(g.group(), kind)?;
    let s = pi_spectrum(&g, &rep, cli.tol)?;
    let mut text = String::new();
    let _ = writeln!(text, "{kind} representation, {} eigenvalues", s.len());
    for x in &s {
        let _ = writeln!(text, "{x:.12}");
    }
    let mut value = json!({"command": "spectrum", "rep": kind.name(), "eigenvalues": s});
    if let Some(path) = fp_out {
        let h = match cli.moments {
            Some(h) => usize::try_from(h).map_err(|_| Failure("--moments is too large".into()))?,
            None => default_moments(&g),
        };
        write(path, &crate::format::fingerprint_to_json(&fingerprint(&g, h)?))?;
        let _ = writeln!(text, "wrote {h} moments to {}", path.display());
        value["fingerprint"] = json!({"path": path.display().to_string(), "moments": h});
    }
    Ok((0, render(cli, value, text)))
}

fn iso_json(v: &IsoVerdict) -> Value {
    match v {
        IsoVerdict::Isomorphic(w) => json!({
            "status": "trivial",
            "perm": w.perm,
            "switching": w.switching.values().iter().map(|x| x.index()).collect::<Vec<_>>(),
        }),
        IsoVerdict::NotIsomorphic(d) => json!({"status": "nontrivial", "reason": d.to_string()}),
        IsoVerdict::Inconclusive(b) => json!({"status": "inconclusive", "budget": b.to_string()}),
    }
}

fn iso_text(v: &IsoVerdict) -> String {
    match v {
        IsoVerdict::Isomorphic(_) => "trivial (switched graph is switching isomorphic)".into(),
        IsoVerdict::NotIsomorphic(d) => format!("nontrivial ({d})"),
        IsoVerdict::Inconclusive(b) => format!("inconclusive ({b})"),
    }
}

fn cmd_search(cli: &Cli, graph: &Path, mode: Option<ModeArg>, limits: &SearchLimits) -> CmdResult {
    let g = load_graph(graph)?.graph;
    let mode = mode.unwrap_or(if cli.rep.is_some() { ModeArg::Pi } else { ModeArg::G });
    let rep = match (mode, cli.rep) {
        (ModeArg::G, _) => None,
        (ModeArg::Pi, Some(k)) => Some(representation(g.group(), k)?),
        (ModeArg::Pi, None) => return Err(Failure("--mode pi needs --rep".into())),
    };
    let search_mode = match &rep {
        None => SearchMode::Group,
        Some(r) => SearchMode::Represented { rep: r, tol: cli.tol },
    };
    let outcome = find_wqh_partitions(&g, limits, search_mode)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "found {} partition(s); examined {} search nodes; {}",
        outcome.partitions.len(),
        outcome.examined,
        if outcome.complete { "search complete" } else { "budget reached, results partial" }
    );
    for alpha in &outcome.partitions {
        let verdict = match &rep {
            None => verify_gwqh(&g, alpha)?,
            Some(r) => verify_piwqh(&g, alpha, r, cli.tol)?,
        };
        let iso = is_nontrivial(&g, alpha, &verdict, limits)?;
        let _ = writeln!(text, "{alpha}: {}", iso_text(&iso));
        rows.push(json!({"cells": alpha.cells(), "nontriviality": iso_json(&iso)}));
    }
    let value = json!({
        "command": "search",
        "mode": if rep.is_some() { mode_json(cli) } else { json!("group") },
        "complete": outcome.complete,
        "examined": outcome.examined,
        "partitions": rows,
    });
    Ok((if outcome.partitions.is_empty() { 1 } else { 0 }, render(cli, value, text)))
}

fn psi_statistics(g: &GainGraph, alpha: &WQHPartition) -> Vec<(usize, usize, String)> {
    let mut reps: Vec<usize> = alpha.c0().to_vec();
    reps.extend(alpha.cells()[1..].iter().map(|c| c[0]));
    let mut out = Vec::new();
    for v in reps {
        for j in 1..alpha.cells().len() {
            let psi = g.psi(v, alpha.cell(j));
            if !psi.is_zero() {
                out.push((v, j, psi.to_string()));
            }
        }
    }
    out
}

fn cmd_demo(cli: &Cli, name: &str, out_dir: &Path) -> CmdResult {
    let (graph, partition, source) = match name {
        "random" => {
            let group = Arc::new(Group::cyclic(4)?);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let shape = InstanceShape::random(&mut rng, 2, 2, 3);
            let (g, p) = random_wqh_instance(&group, &shape, cli.seed);
            (g, p, format!("random instance, seed {}", cli.seed))
        }
        _ => match fixtures::by_name(name) {
            Some(f) => (f.graph, f.partition, "built-in fixture".to_string()),
            None => {
                return Err(Failure(format!("unknown demo {name:?}; available demos: {}", DEMOS.join(", "))));
            }
        },
    };
    std::fs::create_dir_all(out_dir).map_err(|e| Failure(format!("{}: {e}", out_dir.display())))?;
    let graph_path = out_dir.join(format!("{name}.graph.json"));
    let partition_path = out_dir.join(format!("{name}.partition.json"));
    write(&graph_path, &graph_to_json(&graph, Some(name.to_string()), Some(source)))?;
    write(&partition_path, &partition_to_json(&partition))?;
    let stats = psi_statistics(&graph, &partition);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{name}: {} vertices, {} edges over {}",
        graph.vertex_count(),
        graph.edge_count(),
        graph.group()
    );
    let _ = writeln!(text, "partition: {partition}");
    for (v, j, psi) in &stats {
        let _ = writeln!(text, "  Psi_{j}(v{v}) = {psi}");
    }
    let _ = writeln!(text, "wrote {} and {}", graph_path.display(), partition_path.display());
    let value = json!({
        "command": "demo",
        "name": name,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "group": graph.group().to_string(),
        "partition": partition.cells(),
        "psi": stats.iter().map(|(v, j, psi)| json!({"vertex": v, "cell": j, "value": psi})).collect::<Vec<_>>(),
        "graph_file": graph_path.display().to_string(),
        "partition_file": partition_path.display().to_string(),
    });
    Ok((0, render(cli, value, text)))
}
