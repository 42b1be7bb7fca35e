//! Command-line front end for `apnlab`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns a
//! [`CommandOutcome`]: a JSON payload with a versioned `schema` field plus a
//! status that maps to the process exit code (0 ok, 2 precondition failed,
//! 3 resource limit). Payloads carry no timings; elapsed times go to
//! standard error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use apnlab::analysis::lemmas::{verify_key_lemma_all, MAX_FAILURES};
use apnlab::analysis::{
    cubic_root_count, cubic_root_count_brute, ddt, is_apn, is_apn_quadratic, verify_resultant_identity, IdentityMode,
};
use apnlab::bitlinalg::BitLinAlgError;
use apnlab::families::{
    build_representative, primitive_candidates, representative_rows, search_trinomial_params, FamilyError, FamilyId,
    FamilyInstance, Representative, SRange,
};
use apnlab::gf2n::{FieldElement, FieldSpec, GfError};
use apnlab::invariants::{export_code, gamma_rank, CodeFormat, GammaRankReport, InvariantError, RankMode};
use apnlab::vbf::{FunctionTable, VbfError};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Largest field degree accepted for exhaustive differential spectra.
pub const MAX_DDT_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    PreconditionFailed,
    ResourceLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::PreconditionFailed => "precondition-failed",
            Status::ResourceLimit => "resource-limit",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::PreconditionFailed => 2,
            Status::ResourceLimit => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Json(Value),
    /// Help or version text from the argument parser.
    Text(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    pub status: Status,
    pub output: Output,
}

impl CommandOutcome {
    fn ok(payload: Value) -> Self {
        CommandOutcome {
            status: Status::Ok,
            output: Output::Json(payload),
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }

    pub fn payload(&self) -> Option<&Value> {
        match &self.output {
            Output::Json(v) => Some(v),
            Output::Text(_) => None,
        }
    }

    /// Pretty JSON with sorted keys, or the parser's text.
    pub fn render(&self) -> String {
        match &self.output {
            Output::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialize"),
            Output::Text(t) => t.trim_end().to_string(),
        }
    }
}

/// A failure with the status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    fn precondition(message: impl Into<String>) -> Self {
        CliError {
            status: Status::PreconditionFailed,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        CliError {
            status: Status::ResourceLimit,
            message: message.into(),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<VbfError> for CliError {
    fn from(e: VbfError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::LinAlg(BitLinAlgError::BudgetExceeded { .. }) => CliError::resource(e.to_string()),
            _ => CliError::precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::precondition(e.to_string())
    }
}

type CliResult = Result<Value, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "apnlab",
    version,
    about = "Construct APN functions, check them and compute their invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lemma {
    Cubic,
    Resultant,
    Key,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    PlainBits,
    Script,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a family instance is APN.
    Check {
        /// Family descriptor (JSON5) or @path to one.
        #[arg(long)]
        family: String,
        /// Test only b = f(a)+f(0) per a; exact for quadratic functions.
        #[arg(long)]
        quadratic_shortcut: bool,
    },
    /// Differential spectrum of a lookup table or a family instance.
    Ddt {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        lut: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Gamma-rank of a family instance.
    GammaRank {
        #[arg(long)]
        family: String,
        /// Force the streaming elimination.
        #[arg(long)]
        out_of_core: bool,
    },
    /// Reproduce a Gamma-rank table of representatives.
    Table {
        #[arg(long, value_parser = ["4", "5"])]
        paper_table: String,
        /// Comma-separated 1-based row numbers.
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        /// Rows computed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Search parameters of the trinomial family.
    Search {
        #[arg(long, required = true)]
        trinomial: bool,
        #[arg(long)]
        m: u32,
        /// Sweep 1 <= s < 3m (the default).
        #[arg(long, conflicts_with = "narrow_s")]
        wide_s: bool,
        /// Sweep only 1 <= s < m.
        #[arg(long)]
        narrow_s: bool,
        /// Maximum number of (s, mu) pairs listed; counts are always complete.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Run an exact verifier for one of the proof lemmas.
    Verify {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        m: u32,
        /// Restrict the key-lemma sweep to one s.
        #[arg(long)]
        s: Option<u32>,
        /// Resultant identity: sample this many random points instead of a full sweep.
        #[arg(long)]
        samples: Option<usize>,
        /// Key lemma: check at most this many (s, mu, v) tuples.
        #[arg(long)]
        max_tuples: Option<usize>,
    },
    /// Write the generator matrix of the function's code.
    ExportCode {
        #[arg(long)]
        family: String,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<S: AsRef<str>>(argv: &[S]) -> CommandOutcome {
    let args: Vec<&str> = argv.iter().map(|s| s.as_ref()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let status = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Status::Ok,
                _ => Status::PreconditionFailed,
            };
            if status == Status::Ok {
                return CommandOutcome {
                    status,
                    output: Output::Text(e.to_string()),
                };
            }
            eprintln!("{e}");
            return failure("usage", CliError::precondition(e.to_string()));
        }
    };
    let name = command_name(&cli.command);
    match execute(cli.command) {
        Ok(payload) => CommandOutcome::ok(payload),
        Err(e) => {
            eprintln!("error: {}", e.message);
            failure(name, e)
        }
    }
}

fn failure(command: &str, e: CliError) -> CommandOutcome {
    CommandOutcome {
        status: e.status,
        output: Output::Json(json!({
            "schema": format!("apnlab.{command}/1"),
            "status": e.status.as_str(),
            "error": e.message,
        })),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Ddt { .. } => "ddt",
        Command::GammaRank { .. } => "gamma-rank",
        Command::Table { .. } => "table",
        Command::Search { .. } => "search",
        Command::Verify { .. } => "verify",
        Command::ExportCode { .. } => "export-code",
    }
}

fn execute(command: Command) -> CliResult {
    match command {
        Command::Check {
            family,
            quadratic_shortcut,
        } => cmd_check(&family, quadratic_shortcut),
        Command::Ddt { lut, family } => cmd_ddt(lut, family),
        Command::GammaRank { family, out_of_core } => cmd_gamma_rank(&family, out_of_core),
        Command::Table {
            paper_table,
            rows,
            jobs,
        } => cmd_table(paper_table.parse().expect("restricted by the parser"), rows, jobs),
        Command::Search { m, narrow_s, limit, .. } => {
            cmd_search(m, if narrow_s { SRange::BelowM } else { SRange::BelowThreeM }, limit)
        }
        Command::Verify {
            lemma,
            m,
            s,
            samples,
            max_tuples,
        } => match lemma {
            Lemma::Cubic => cmd_verify_cubic(m),
            Lemma::Resultant => cmd_verify_resultant(m, samples),
            Lemma::Key => cmd_verify_key(m, s, max_tuples),
        },
        Command::ExportCode { family, format, out } => cmd_export(&family, format, out),
    }
}

/// Reads a descriptor given inline or as `@path`.
pub fn load_descriptor(arg: &str) -> Result<FamilyId, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::precondition(format!("cannot read descriptor {path}: {e}")))?,
        None => arg.to_string(),
    };
    Ok(FamilyId::parse(&text)?)
}

fn build(arg: &str) -> Result<FamilyInstance, CliError> {
    let id = load_descriptor(arg)?;
    let n = id.table_degree()?;
    if n > MAX_DDT_DEGREE {
        return Err(CliError::resource(format!(
            "table field GF(2^{n}) exceeds the supported 2^{MAX_DDT_DEGREE} entries"
        )));
    }
    let started = Instant::now();
    let inst = id.build()?;
    eprintln!("built {} in {:.2?}", inst.id, started.elapsed());
    Ok(inst)
}

fn field_json(f: &FieldSpec) -> Value {
    json!({
        "n": f.n(),
        "modulus": format!("0x{:x}", f.modulus()),
        "primitive": f.primitive().to_string(),
    })
}

fn cmd_check(family: &str, shortcut: bool) -> CliResult {
    let inst = build(family)?;
    let started = Instant::now();
    let (apn, delta, method) = if shortcut {
        (is_apn_quadratic(&inst.table), Value::Null, "quadratic-shortcut")
    } else {
        let d = ddt(&inst.table);
        (d.delta == 2, json!(d.delta), "ddt")
    };
    eprintln!("check took {:.2?}", started.elapsed());
    Ok(json!({
        "schema": "apnlab.check/1",
        "family": inst.id.to_json(),
        "field": field_json(inst.table.field()),
        "apn": apn,
        "delta": delta,
        "method": method,
    }))
}

fn ddt_json(table: &FunctionTable) -> Value {
    let d = ddt(table);
    let histogram: serde_json::Map<String, Value> =
        d.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let witnesses: Vec<Value> = d
        .witnesses
        .iter()
        .map(|(a, b)| json!([a.to_string(), b.to_string()]))
        .collect();
    json!({
        "delta": d.delta,
        "apn": d.delta == 2,
        "histogram": histogram,
        "witnesses": witnesses,
    })
}

fn cmd_ddt(lut: Option<PathBuf>, family: Option<String>) -> CliResult {
    let (source, table) = match (lut, family) {
        (Some(path), _) => {
            let file = File::open(&path)
                .map_err(|e| CliError::precondition(format!("cannot open {}: {e}", path.display())))?;
            let table = FunctionTable::read_lut(BufReader::new(file))?;
            (json!({"lut": path.display().to_string()}), table)
        }
        (None, Some(desc)) => {
            let inst = build(&desc)?;
            (json!({"family": inst.id.to_json()}), inst.table)
        }
        (None, None) => return Err(CliError::precondition("give --lut or --family")),
    };
    if table.n() > MAX_DDT_DEGREE {
        return Err(CliError::resource(format!("GF(2^{}) exceeds the DDT limit", table.n())));
    }
    if table.n() >= 14 {
        eprintln!("note: exhaustive spectrum over GF(2^{}) is long-running", table.n());
    }
    let started = Instant::now();
    let mut payload = ddt_json(&table);
    eprintln!("ddt took {:.2?}", started.elapsed());
    let obj = payload.as_object_mut().expect("object");
    obj.insert("schema".into(), json!("apnlab.ddt/1"));
    obj.insert("source".into(), source);
    obj.insert("field".into(), field_json(table.field()));
    Ok(payload)
}

fn gamma_json(report: &GammaRankReport) -> Value {
    json!({
        "function": report.function,
        "n": report.n,
        "gamma_rank": report.gamma_rank,
        "matrix_dims": [report.matrix_dims.0, report.matrix_dims.1],
        "method": report.method.as_str(),
        "warning": report.warning,
    })
}

fn cmd_gamma_rank(family: &str, out_of_core: bool) -> CliResult {
    let inst = build(family)?;
    let mode = if out_of_core {
        RankMode::OutOfCore
    } else {
        RankMode::Auto
    };
    let report = gamma_rank(&inst.table, &inst.id.to_string(), mode)?;
    eprintln!("gamma-rank took {:.2?}", report.elapsed);
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    let mut payload = gamma_json(&report);
    let obj = payload.as_object_mut().expect("object");
    obj.insert("schema".into(), json!("apnlab.gamma-rank/1"));
    obj.insert("function".into(), inst.id.to_json());
    Ok(payload)
}

/// One computed table row.
fn table_row(rep: &Representative) -> Result<Value, CliError> {
    let started = Instant::now();
    let inst = build_representative(rep)?;
    let report = gamma_rank(&inst.table, rep.label, RankMode::Auto)?;
    let candidates = primitive_candidates(rep)?;
    let default = rep.id.coefficient_field()?.primitive().0;
    let used = |inst: &FamilyInstance| inst.id.primitive().unwrap_or(default);
    let mut chosen = (inst, report);
    let mut tried = 1usize;
    if chosen.1.gamma_rank != rep.published_gamma_rank && rep.coefficient_bearing {
        eprintln!(
            "row {}: gamma-rank {} with primitive 0x{:x}, expected {}; sweeping primitives",
            rep.row,
            chosen.1.gamma_rank,
            used(&chosen.0),
            rep.published_gamma_rank
        );
        // The primitive element behind the printed coefficients is unstated.
        let skip = chosen.0.id.primitive().unwrap_or(candidates[0].0);
        for g in candidates.iter().filter(|g| g.0 != skip) {
            // Side conditions may fail under another primitive.
            let Ok(inst) = rep.id.clone().with_field(rep.id.modulus(), Some(g.0)).build() else {
                continue;
            };
            if !is_apn(&inst.table) {
                continue;
            }
            tried += 1;
            let report = gamma_rank(&inst.table, rep.label, RankMode::Auto)?;
            eprintln!("row {}: primitive {g} gives gamma-rank {}", rep.row, report.gamma_rank);
            if report.gamma_rank == rep.published_gamma_rank {
                chosen = (inst, report);
                break;
            }
        }
    }
    let (inst, report) = chosen;
    eprintln!(
        "row {} ({}) gamma-rank {} in {:.2?}",
        rep.row,
        rep.label,
        report.gamma_rank,
        started.elapsed()
    );
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    Ok(json!({
        "row": rep.row,
        "function": rep.label,
        "reference": rep.reference,
        "descriptor": inst.id.to_json(),
        "gamma_rank": report.gamma_rank,
        "paper_value": rep.published_gamma_rank,
        "match": report.gamma_rank == rep.published_gamma_rank,
        "method": report.method.as_str(),
        "primitive": format!("0x{:x}", used(&inst)),
        "primitives_tried": tried,
    }))
}

fn cmd_table(table: u32, rows: Option<Vec<usize>>, jobs: usize) -> CliResult {
    let n = if table == 4 { 8 } else { 9 };
    let all = representative_rows(n)?;
    let selected: Vec<&Representative> = match &rows {
        None => all.iter().collect(),
        Some(list) => {
            let mut out = Vec::new();
            for &r in list {
                out.push(
                    all.iter()
                        .find(|rep| rep.row == r)
                        .ok_or_else(|| CliError::precondition(format!("row {r} outside 1..=12")))?,
                );
            }
            out
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::resource(e.to_string()))?;
    let results: Vec<Result<Value, CliError>> = pool.install(|| selected.par_iter().map(|r| table_row(r)).collect());
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let matched = rows.iter().filter(|r| r["match"] == json!(true)).count();
    Ok(json!({
        "schema": "apnlab.table/1",
        "paper_table": table,
        "n": n,
        "rows": rows,
        "matched": matched,
        "total": selected.len(),
    }))
}

fn cmd_search(m: u32, range: SRange, limit: usize) -> CliResult {
    if !(2..=8).contains(&m) {
        return Err(CliError::precondition("search needs 2 <= m <= 8"));
    }
    let started = Instant::now();
    let found = search_trinomial_params(m, range)?;
    eprintln!("search took {:.2?}", started.elapsed());
    let mut by_s: BTreeMap<String, usize> = BTreeMap::new();
    for (s, _) in &found {
        *by_s.entry(s.to_string()).or_default() += 1;
    }
    let params: Vec<Value> = found
        .iter()
        .take(limit)
        .map(|(s, mu)| json!({"s": s, "mu": mu.to_string()}))
        .collect();
    let field = FieldSpec::new(3 * m, None)?;
    Ok(json!({
        "schema": "apnlab.search/1",
        "m": m,
        "field": field_json(&field),
        "s_range": match range { SRange::BelowM => "1<=s<m", SRange::BelowThreeM => "1<=s<3m" },
        "count": found.len(),
        "count_by_s": by_s,
        "params": params,
        "truncated": found.len() > limit,
    }))
}

fn cmd_verify_cubic(m: u32) -> CliResult {
    if !(1..=12).contains(&m) {
        return Err(CliError::precondition("cubic sweep needs 1 <= m <= 12"));
    }
    let field = FieldSpec::new(m, None)?;
    let nonzero: Vec<FieldElement> = field.elements().skip(1).collect();
    let mismatches: Vec<(FieldElement, FieldElement)> = nonzero
        .par_iter()
        .flat_map_iter(|&a| {
            let field = &field;
            nonzero
                .iter()
                .filter(move |&&b| cubic_root_count(field, a, b).root_count != cubic_root_count_brute(field, a, b))
                .map(move |&b| (a, b))
        })
        .collect();
    Ok(json!({
        "schema": "apnlab.verify/1",
        "lemma": "cubic",
        "m": m,
        "cases": nonzero.len() * nonzero.len(),
        "mismatch_count": mismatches.len(),
        "mismatches": mismatches.iter().take(MAX_FAILURES).map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
        "passed": mismatches.is_empty(),
    }))
}

fn cmd_verify_resultant(m: u32, samples: Option<usize>) -> CliResult {
    if !(1..=12).contains(&m) {
        return Err(CliError::precondition("resultant check needs 1 <= m <= 12"));
    }
    let mode = match samples {
        Some(s) => IdentityMode::Pointwise { samples: s, seed: 0 },
        None if m <= 6 => IdentityMode::FullSweep,
        None => IdentityMode::Pointwise { samples: 4096, seed: 0 },
    };
    let r = verify_resultant_identity(m, mode).map_err(|e| CliError::precondition(e.to_string()))?;
    let pairs = |v: &[(FieldElement, FieldElement)]| -> Vec<Value> {
        v.iter()
            .take(MAX_FAILURES)
            .map(|(a, b)| json!([a.to_string(), b.to_string()]))
            .collect()
    };
    Ok(json!({
        "schema": "apnlab.verify/1",
        "lemma": "resultant",
        "m": m,
        "mode": match mode { IdentityMode::FullSweep => "full-sweep", IdentityMode::Pointwise { .. } => "pointwise" },
        "pairs_checked": r.pairs_checked,
        "triples_checked": r.triples_checked,
        "mismatch_count": r.mismatch_count,
        "mismatches": r.mismatches.iter().map(|(a, b, x)| json!([a.to_string(), b.to_string(), x.to_string()])).collect::<Vec<_>>(),
        "checks": {
            "identity": r.identity_holds(),
            "constant_vanishes_only_at_one_one": r.constant_vanishes_only_at_one_one(),
            "norm_nonvanishing": r.norm_nonvanishing(),
        },
        "cubic_constant_zeros": pairs(&r.cubic_constant_zeros),
        "norm_zeros": pairs(&r.norm_zeros),
        "passed": r.passed(),
    }))
}

fn cmd_verify_key(m: u32, s: Option<u32>, max_tuples: Option<usize>) -> CliResult {
    if !(2..=8).contains(&m) {
        return Err(CliError::precondition("key-lemma sweep needs 2 <= m <= 8"));
    }
    let field = FieldSpec::new(3 * m, None)?;
    let vs: Vec<FieldElement> = field
        .elements()
        .filter(|&v| !v.is_zero() && field.frob(v, m) == v)
        .collect();
    let params: Vec<(u32, FieldElement)> = search_trinomial_params(m, SRange::BelowThreeM)?
        .into_iter()
        .filter(|&(ps, _)| s.is_none_or(|want| want == ps))
        .collect();
    if params.is_empty() {
        return Err(CliError::precondition("no valid (s, mu) for the requested s"));
    }
    let mut tuples: Vec<(u32, FieldElement, FieldElement)> = params
        .iter()
        .flat_map(|&(s, mu)| vs.iter().map(move |&v| (s, mu, v)))
        .collect();
    if let Some(k) = max_tuples {
        tuples.truncate(k);
    }
    let started = Instant::now();
    let sweeps = tuples
        .par_iter()
        .map(|&(s, mu, v)| verify_key_lemma_all(m, s, mu, v).map(|r| (s, mu, v, r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::precondition(e.to_string()))?;
    eprintln!("key-lemma sweep took {:.2?}", started.elapsed());
    let points: u64 = sweeps.iter().map(|t| t.3.points_checked).sum();
    let failures: Vec<Value> = sweeps
        .iter()
        .filter(|t| !t.3.passed())
        .take(MAX_FAILURES)
        .map(|(s, mu, v, r)| {
            json!({"s": s, "mu": mu.to_string(), "v": v.to_string(), "points": r.failures.iter().map(|a| a.to_string()).collect::<Vec<_>>()})
        })
        .collect();
    let failing = sweeps.iter().filter(|t| !t.3.passed()).count();
    Ok(json!({
        "schema": "apnlab.verify/1",
        "lemma": "key",
        "m": m,
        "s": s,
        "tuples": tuples.len(),
        "points_checked": points,
        "failing_tuples": failing,
        "failures": failures,
        "passed": failing == 0,
    }))
}

fn cmd_export(family: &str, format: Format, out: PathBuf) -> CliResult {
    let inst = build(family)?;
    let file =
        File::create(&out).map_err(|e| CliError::precondition(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    let fmt = match format {
        Format::PlainBits => CodeFormat::PlainBits,
        Format::Script => CodeFormat::Script,
    };
    export_code(&inst.table, &mut w, fmt)?;
    w.flush()?;
    let n = inst.table.n() as usize;
    Ok(json!({
        "schema": "apnlab.export-code/1",
        "family": inst.id.to_json(),
        "format": match format { Format::PlainBits => "plain-bits", Format::Script => "script" },
        "out": out.display().to_string(),
        "rows": 2 * n + 1,
        "cols": 1usize << n,
    }))
}
