use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use pathcoalg::caps::Caps;
use pathcoalg::coalgebra::{Coalgebra, LinearMap};
use pathcoalg::field::{Field, FieldElement, FieldSpec};
use pathcoalg::graph::{automorphisms, BinarySystem, Digraph};
use pathcoalg::graph_coalgebra::{order_formula, GraphCoalgebra};
use pathcoalg::group::in_class;
use pathcoalg::json::{
    parse_coalgebra, parse_group, parse_perm_rep, read_file, to_pretty, write_bundle, write_file,
    CoalgebraJson, DigraphJson, SystemJson,
};
use pathcoalg::realization::build_realization;
use pathcoalg::report::{Check, CheckStatus};
use pathcoalg::ErrorKind;

#[derive(Parser)]
#[command(
    name = "pathcoalg",
    version,
    about = "Graph coalgebras over finite fields and their automorphisms"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CapArgs {
    /// Largest field order p^n.
    #[arg(long, global = true, default_value_t = Caps::default().field_size, value_parser = positive)]
    cap_field_size: u64,
    /// Largest group produced by closure.
    #[arg(long, global = true, default_value_t = Caps::default().group_close as u64, value_parser = positive)]
    cap_group_close: u64,
    /// Largest group whose subgroups are enumerated.
    #[arg(long, global = true, default_value_t = Caps::default().subgroup_enum as u64, value_parser = positive)]
    cap_subgroup_enum: u64,
    /// Largest q^dim scanned for grouplikes.
    #[arg(long, global = true, default_value_t = Caps::default().grouplike_enum, value_parser = positive)]
    cap_grouplike_enum: u64,
    /// Largest q^(dim^2) scanned by the brute automorphism oracle.
    #[arg(long, global = true, default_value_t = Caps::default().brute_oracle, value_parser = positive)]
    cap_brute_oracle: u64,
    /// Largest number of structured triples listed.
    #[arg(long, global = true, default_value_t = Caps::default().structured_enum, value_parser = positive)]
    cap_structured_enum: u64,
    /// Largest number of graph search nodes.
    #[arg(long, global = true, default_value_t = Caps::default().graph_search, value_parser = positive)]
    cap_graph_search: u64,
}

fn positive(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("caps must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            field_size: self.cap_field_size,
            group_close: self.cap_group_close as usize,
            subgroup_enum: self.cap_subgroup_enum as usize,
            grouplike_enum: self.cap_grouplike_enum,
            brute_oracle: self.cap_brute_oracle,
            structured_enum: self.cap_structured_enum,
            graph_search: self.cap_graph_search,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coalgebra construction and analysis.
    #[command(subcommand)]
    Coalg(CoalgCommand),
    /// Graph automorphisms.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Realize a permutation representation and write the bundle.
    Realize {
        rep: PathBuf,
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group predicates.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Split exact sequence verification.
    #[command(subcommand)]
    Sequence(SequenceCommand),
}

#[derive(Subcommand)]
enum CoalgCommand {
    /// Build the coalgebra of a digraph.
    Build {
        graph: PathBuf,
        #[arg(long)]
        field: String,
        /// Write the coalgebra here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check coassociativity and the counit laws.
    Verify {
        input: PathBuf,
        /// Required when the input is a digraph.
        #[arg(long)]
        field: Option<String>,
    },
    /// List grouplike elements by exhaustive scan.
    Grouplikes {
        input: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Automorphisms in structured form, by brute force, or both.
    Aut {
        input: PathBuf,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Structured,
    Brute,
    Both,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Automorphisms of a digraph or labeled system.
    Aut { input: PathBuf },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Membership in the class for p^n.
    Class {
        group: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum SequenceCommand {
    /// Verify the split exact sequence for the coalgebra of a digraph.
    Check {
        graph: PathBuf,
        #[arg(long)]
        field: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] pathcoalg::Error),
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Input(_) => ErrorKind::Input,
            CliError::Verification(_) => ErrorKind::Verification,
        };
        match kind {
            ErrorKind::Input => 2,
            ErrorKind::CapExceeded => 3,
            ErrorKind::Verification => 4,
        }
    }
}

impl From<pathcoalg::field::FieldError> for CliError {
    fn from(e: pathcoalg::field::FieldError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<pathcoalg::graph_coalgebra::GraphCoalgebraError> for CliError {
    fn from(e: pathcoalg::graph_coalgebra::GraphCoalgebraError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<pathcoalg::coalgebra::CoalgebraError> for CliError {
    fn from(e: pathcoalg::coalgebra::CoalgebraError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<pathcoalg::graph::GraphError> for CliError {
    fn from(e: pathcoalg::graph::GraphError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<pathcoalg::group::GroupError> for CliError {
    fn from(e: pathcoalg::group::GroupError) -> Self {
        CliError::Core(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command prints, plus an optional failure after printing.
struct Output {
    text: String,
    json: Value,
    failure: Option<CliError>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            failure: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.caps.caps();
    match run(&cli.command, &caps) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => print!("{}", to_pretty(&out.json)),
            }
            match out.failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn field(spec: &str, caps: &Caps) -> Result<Field> {
    Ok(spec.parse::<FieldSpec>()?.build(caps.field_size)?)
}

enum Input {
    Coalgebra(Coalgebra),
    Graph(GraphCoalgebra),
}

impl Input {
    fn coalgebra(&self) -> &Coalgebra {
        match self {
            Input::Coalgebra(c) => c,
            Input::Graph(g) => g.coalgebra(),
        }
    }
}

fn load_digraph(path: &Path) -> Result<Digraph> {
    Ok(pathcoalg::json::parse_digraph(&read_file(path)?)?)
}

/// A coalgebra file, or a digraph together with `--field`.
fn load_input(path: &Path, field_spec: Option<&str>, caps: &Caps) -> Result<Input> {
    let text = read_file(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    if value.get("basis").is_some() {
        return Ok(Input::Coalgebra(parse_coalgebra(&text, caps.field_size)?));
    }
    let spec = field_spec
        .ok_or_else(|| CliError::Input("--field is required for a digraph input".into()))?;
    let graph = pathcoalg::json::parse_digraph(&text)?;
    Ok(Input::Graph(GraphCoalgebra::build(
        graph,
        &field(spec, caps)?,
    )?))
}

fn run(command: &Command, caps: &Caps) -> Result<Output> {
    match command {
        Command::Coalg(CoalgCommand::Build {
            graph,
            field: f,
            out,
        }) => coalg_build(graph, f, out.as_deref(), caps),
        Command::Coalg(CoalgCommand::Verify { input, field: f }) => {
            coalg_verify(&load_input(input, f.as_deref(), caps)?)
        }
        Command::Coalg(CoalgCommand::Grouplikes { input, field: f }) => {
            coalg_grouplikes(&load_input(input, f.as_deref(), caps)?, caps)
        }
        Command::Coalg(CoalgCommand::Aut {
            input,
            field: f,
            mode,
        }) => coalg_aut(&load_input(input, f.as_deref(), caps)?, *mode, caps),
        Command::Graph(GraphCommand::Aut { input }) => graph_aut(input, caps),
        Command::Realize { rep, field: f, out } => realize(rep, f, out.as_deref(), caps),
        Command::Group(GroupCommand::Class { group, p, n }) => group_class(group, *p, *n, caps),
        Command::Sequence(SequenceCommand::Check { graph, field: f }) => {
            let gc = GraphCoalgebra::build(load_digraph(graph)?, &field(f, caps)?)?;
            sequence_check(&gc, caps)
        }
    }
}

fn coalg_build(graph: &Path, spec: &str, out: Option<&Path>, caps: &Caps) -> Result<Output> {
    let gc = GraphCoalgebra::build(load_digraph(graph)?, &field(spec, caps)?)?;
    let coalgebra = to_pretty(&CoalgebraJson::from_coalgebra(gc.coalgebra()));
    let summary = format!(
        "dim {} (|V| = {}, |E| = {}) over GF({})\n",
        gc.coalgebra().dim(),
        gc.vertex_count(),
        gc.edge_count(),
        gc.field()
    );
    let info = json!({
        "dim": gc.coalgebra().dim(),
        "vertices": gc.vertex_count(),
        "edges": gc.edge_count(),
        "field": gc.field().to_string(),
    });
    match out {
        Some(path) => {
            write_file(path, &coalgebra)?;
            Ok(Output::ok(
                format!("{summary}wrote {}\n", path.display()),
                info,
            ))
        }
        None => {
            eprint!("{summary}");
            let value: Value = serde_json::from_str(&coalgebra).expect("valid JSON");
            Ok(Output::ok(coalgebra, value))
        }
    }
}

fn coalg_verify(input: &Input) -> Result<Output> {
    let report = input.coalgebra().verify_axioms();
    let status = |ok: bool| {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    };
    let mut text = format!(
        "coassociativity {}\ncounit {}\n",
        status(report.coassoc),
        status(report.counit)
    );
    for failure in &report.failures {
        text.push_str(&format!("  {:?} fails at {}\n", failure.law, failure.basis));
        for d in &failure.differences {
            text.push_str(&format!(
                "    {}: lhs {} rhs {}\n",
                d.term.join("⊗"),
                d.lhs,
                d.rhs
            ));
        }
    }
    let mut out = Output::ok(text, serde_json::to_value(&report).expect("serializable"));
    if !report.passed() {
        out.failure = Some(CliError::Verification(
            "coalgebra axioms do not hold".into(),
        ));
    }
    Ok(out)
}

fn render_vector(f: &Field, basis: &[String], x: &[FieldElement]) -> String {
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, &c)| {
            if c == FieldElement::ONE {
                basis[i].clone()
            } else {
                format!("({})·{}", f.format(c), basis[i])
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn coalg_grouplikes(input: &Input, caps: &Caps) -> Result<Output> {
    let c = input.coalgebra();
    let found = c.grouplikes(caps.grouplike_enum)?;
    let rendered: Vec<String> = found
        .iter()
        .map(|x| render_vector(c.field(), c.basis(), x))
        .collect();
    let mut text = format!("{} grouplike elements\n", found.len());
    for r in &rendered {
        text.push_str(&format!("  {r}\n"));
    }
    let mut json = json!({ "count": found.len(), "grouplikes": rendered });
    let mut out_failure = None;
    if let Input::Graph(gc) = input {
        let check = gc.check_grouplikes(caps.grouplike_enum);
        text.push_str(&format!("{check}\n"));
        json["vertex_check"] = serde_json::to_value(&check).expect("serializable");
        if check.status == CheckStatus::Fail {
            out_failure = Some(CliError::Verification(
                "grouplikes differ from the vertex basis".into(),
            ));
        }
    }
    let mut out = Output::ok(text, json);
    out.failure = out_failure;
    Ok(out)
}

fn formula_text(q: u64, edges: usize, aut: usize) -> String {
    let total = order_formula(q, edges, aut).map_or("overflow".to_string(), |t| t.to_string());
    format!("({q}·{})^{edges}·{aut} = {total}", q - 1)
}

fn coalg_aut(input: &Input, mode: Mode, caps: &Caps) -> Result<Output> {
    let c = input.coalgebra();
    let gc = match (input, mode) {
        (Input::Graph(gc), _) => Some(gc),
        (Input::Coalgebra(_), Mode::Brute) => None,
        (Input::Coalgebra(_), _) => {
            return Err(CliError::Input(
                "structured mode needs a digraph input (with --field)".into(),
            ))
        }
    };
    let mut text = String::new();
    let mut json = json!({ "mode": match mode { Mode::Structured => "structured", Mode::Brute => "brute", Mode::Both => "both" } });

    let structured = match gc {
        Some(gc) if mode != Mode::Brute => {
            let auts = gc.graph_automorphisms(caps.graph_search)?;
            let list = gc.enumerate_structured(&auts, caps.structured_enum)?;
            if mode == Mode::Structured {
                for f in &list {
                    let view = gc.describe(f);
                    text.push_str(&format!(
                        "sigma {:?} lambda {} mu {}\n",
                        view.sigma,
                        serde_json::to_string(&view.lambda).expect("serializable"),
                        serde_json::to_string(&view.mu).expect("serializable")
                    ));
                }
                json["triples"] =
                    serde_json::to_value(list.iter().map(|f| gc.describe(f)).collect::<Vec<_>>())
                        .expect("serializable");
            }
            let mut mats = list
                .iter()
                .map(|f| gc.structured_to_matrix(f))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            mats.sort();
            json["structured_count"] = json!(list.len());
            json["graph_aut_order"] = json!(auts.len());
            Some((mats, auts.len()))
        }
        _ => None,
    };
    let brute: Option<Vec<LinearMap>> = if mode != Mode::Structured {
        let mut b = c.automorphisms_brute(caps.brute_oracle)?;
        b.sort();
        json["brute_count"] = json!(b.len());
        Some(b)
    } else {
        None
    };
    let q = c.field().order() as u64;
    let mut failure = None;
    match (&structured, &brute) {
        (Some((mats, aut_order)), Some(b)) => {
            let gc = gc.expect("graph input");
            let formula = order_formula(q, gc.edge_count(), *aut_order);
            let sets_equal = mats == b;
            let formula_ok = formula == Some(b.len() as u128);
            let ok = sets_equal && formula_ok;
            json["sets_equal"] = json!(sets_equal);
            json["formula"] = json!(formula_text(q, gc.edge_count(), *aut_order));
            json["formula_holds"] = json!(formula_ok);
            if sets_equal {
                text.push_str(&format!(
                    "structured = brute = {}; formula {} {}\n",
                    b.len(),
                    formula_text(q, gc.edge_count(), *aut_order),
                    if ok { "✓" } else { "✗" }
                ));
            } else {
                text.push_str(&format!(
                    "structured {} != brute {}; formula {}\n",
                    mats.len(),
                    b.len(),
                    formula_text(q, gc.edge_count(), *aut_order)
                ));
            }
            if !ok {
                failure = Some(CliError::Verification(
                    "structured and brute automorphism sets disagree".into(),
                ));
            }
        }
        (Some((mats, aut_order)), None) => {
            let gc = gc.expect("graph input");
            json["formula"] = json!(formula_text(q, gc.edge_count(), *aut_order));
            text.push_str(&format!(
                "{} structured automorphisms; formula {}\n",
                mats.len(),
                formula_text(q, gc.edge_count(), *aut_order)
            ));
        }
        (None, Some(b)) => {
            text.push_str(&format!("brute = {}\n", b.len()));
        }
        (None, None) => unreachable!("every mode enumerates something"),
    }
    Ok(Output {
        text,
        json,
        failure,
    })
}

fn graph_aut(input: &Path, caps: &Caps) -> Result<Output> {
    let text = read_file(input)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let sys: BinarySystem = if value.get("relations").is_some() {
        serde_json::from_value::<SystemJson>(value)
            .map_err(|e| CliError::Input(e.to_string()))?
            .build()?
    } else {
        serde_json::from_value::<DigraphJson>(value)
            .map_err(|e| CliError::Input(e.to_string()))?
            .build()?
            .system()
            .clone()
    };
    let auts = automorphisms(&sys, caps.graph_search)?;
    let mut out = format!("|Aut| = {}\n", auts.len());
    for a in &auts {
        out.push_str(&format!("  {a}\n"));
    }
    let json = json!({
        "order": auts.len(),
        "automorphisms": auts.iter().map(|a| a.images().to_vec()).collect::<Vec<_>>(),
    });
    Ok(Output::ok(out, json))
}

fn render_checks(title: &str, checks: &[Check]) -> String {
    let mut s = format!("{title}\n");
    for c in checks {
        s.push_str(&format!("  {c}\n"));
    }
    s
}

fn realize(rep: &Path, spec: &str, out: Option<&Path>, caps: &Caps) -> Result<Output> {
    let rep = parse_perm_rep(&read_file(rep)?, caps.group_close)?;
    let f = field(spec, caps)?;
    let (bundle, report) = build_realization(&rep, &f, caps).map_err(pathcoalg::Error::from)?;
    let mut text = format!(
        "|G| = {}, |V| = {}; system {} vertices, simple graph {} vertices / {} edges, coalgebra dim {}\n",
        report.group_order,
        report.v_size,
        report.system_vertices,
        report.simple_vertices,
        report.simple_edges,
        report.coalgebra_dim
    );
    text.push_str(&render_checks("items:", &report.items));
    text.push_str(&render_checks("checks:", &report.checks));
    if let Some(dir) = out {
        write_bundle(dir, &bundle, &report)?;
        text.push_str(&format!("wrote bundle to {}\n", dir.display()));
    }
    if !report.failed() && report.has_skipped() {
        text.push_str("notice: some checks were skipped because they exceed their caps\n");
    }
    let failure = report
        .ensure_verified()
        .err()
        .map(|e| CliError::Verification(e.to_string()));
    Ok(Output {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        failure,
    })
}

#[derive(Serialize)]
struct ClassOutput {
    verdict: &'static str,
    p: u64,
    n: u64,
    bound: String,
    group_order: usize,
    witness_order: Option<usize>,
    witness_exponent: Option<u64>,
    witness: Option<Vec<Vec<usize>>>,
}

fn group_class(path: &Path, p: u64, n: u64, caps: &Caps) -> Result<Output> {
    let group = parse_group(&read_file(path)?, caps.group_close)?;
    let verdict = in_class(&group, p, n, caps.subgroup_enum)?;
    let out = ClassOutput {
        verdict: if verdict.member { "IN" } else { "NOT-IN" },
        p,
        n,
        bound: verdict.bound.to_string(),
        group_order: group.order(),
        witness_order: verdict.witness.as_ref().map(Vec::len),
        witness_exponent: verdict.witness_exponent,
        witness: verdict.witness.as_ref().map(|w| {
            w.iter()
                .map(|&i| group.element(i).images().to_vec())
                .collect()
        }),
    };
    let mut text = out.verdict.to_string();
    if let (Some(order), Some(exp)) = (out.witness_order, out.witness_exponent) {
        text.push_str(&format!(
            ": normal subgroup of order {order} has exponent {exp}, which divides {}",
            out.bound
        ));
    }
    text.push('\n');
    Ok(Output::ok(
        text,
        serde_json::to_value(&out).expect("serializable"),
    ))
}

fn sequence_check(gc: &GraphCoalgebra, caps: &Caps) -> Result<Output> {
    let report = gc.verify_exact_sequence(caps)?;
    let show = |x: Option<u128>| x.map_or("overflow".to_string(), |v| v.to_string());
    let mut text = format!(
        "|Aut(Γ)| = {}, kernel order {}, |Aut(C)| = {}\n",
        report.graph_aut_order,
        show(report.kernel_order),
        show(report.total_order)
    );
    text.push_str(&render_checks("checks:", &report.checks));
    let failure = report
        .failed()
        .then(|| CliError::Verification("split exact sequence check failed".into()));
    Ok(Output {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        failure,
    })
}
