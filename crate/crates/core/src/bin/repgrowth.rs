//! Command-line front end. Exit codes: 0 success, 1 a check reported a
//! discrepancy, 2 usage error, 3 budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use repgrowth::charzeta::{
    choose_primes, default_mod_table, dixon_mod_table, zeta_from_degrees, CharError, GroupTables,
    DEFAULT_SEED,
};
use repgrowth::exact::Rational;
use repgrowth::liepipe::{
    bound_root, bound_root_group, min_genus, run_pipeline, LieError, LieType, SimpleFactor,
};
use repgrowth::localring::{LocalRingSpec, RingError, RingKind};
use repgrowth::modgroup::{
    build_named, build_sl, cache, Group, GroupError, NamedGroup, DEFAULT_ELEMENT_BUDGET,
};
use repgrowth::padicpush::{analyze, parse_exponents, MonomialMapSpec, PushError};
use repgrowth::report::{json_document, rational_cells, CsvTable, RunManifest};
use repgrowth::varcount::{
    count_graph_variety, langweil_report, normalized_sequence, CountError, GraphShape,
    GraphVarietyInstance, DEFAULT_BUDGET as POINTCOUNT_BUDGET,
};
use repgrowth::verify::{verify_all, Fault, Profile, VerifyOptions};
use repgrowth::wordmap::{
    congruence_density_profile, cross_char_compare, fiber_counts_brute, fiber_distribution,
    frobenius_check_values, stabilization_series, WordMapError, BRUTE_FORCE_MAX_ORDER,
};

#[derive(Parser)]
#[command(
    name = "repgrowth",
    version,
    about = "Exact computations around representation growth"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print a JSON document with the run manifest embedded.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print a CSV table preceded by a manifest comment line.
    #[arg(long, global = true)]
    csv: bool,
    /// Directory for DOT files of terminal graphs.
    #[arg(long, global = true, value_name = "DIR")]
    emit_dot: Option<PathBuf>,
    /// Work budget: group elements, or candidate vectors for point counts.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    #[arg(long, global = true, value_name = "S", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Record wall time in the manifest (outputs then differ between runs).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group, print its class data, optionally write the binary cache.
    Group {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_name = "FILE")]
        cache: Option<PathBuf>,
    },
    /// Zeta special value from the character degrees.
    Zeta {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        s: u32,
    },
    /// Fiber counts of the commutator word against the character-sum congruence.
    Frobcheck {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Number of primes to test.
        #[arg(long, default_value_t = 3)]
        primes: usize,
    },
    /// Zeta values of SL_d over the levels of a local ring.
    Stabilize {
        #[arg(long, default_value = "sl")]
        family: String,
        #[arg(long, value_enum, default_value_t = KindArg::Zmod)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// SL_2(Z/p^r) against SL_2(F_p[t]/t^r).
    Crosschar {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Congruence density profile of SL_d over a local ring.
    Densities {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Degeneration pipeline for sl, so or sp.
    Pipeline {
        #[arg(long = "type")]
        ty: LieType,
        #[arg(long)]
        d: u32,
        /// Run every rank from --d to this one.
        #[arg(long)]
        d_max: Option<u32>,
    },
    /// The bound B and the genus threshold for a list of simple factors.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<SimpleFactor>,
    },
    /// Pushforward densities of a monomial map.
    Pushforward {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 40)]
        rmax: u32,
    },
    /// Points on a symplectic graph variety.
    Pointcount {
        /// edge, path:n, cycle:n, star:n, complete:n, empty:n or 0-1,1-2,...
        #[arg(long, default_value = "edge")]
        graph: GraphShape,
        #[arg(long, default_value_t = 2)]
        dimw: u32,
        #[arg(long, default_value = "zmod:3^1")]
        ring: String,
        /// Also report normalized counts over Z/p^r for r up to this level.
        #[arg(long)]
        sequence: Option<u32>,
    },
    /// zeta_{SL_2(F_q)}(2n - 2) and its distance from 1.
    Langweil {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value = "quick")]
        profile: Profile,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// `sl`, or a named group such as `s3`, `d4`, `q8`, `named:c5`.
    #[arg(long, alias = "family", default_value = "sl")]
    group: String,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// `zmod:p^r`, `tpoly:p^r` or `gf:p^f`; required for `sl`.
    #[arg(long)]
    ring: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Zmod,
    Tpoly,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FiberOffByOne,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(m: impl ToString) -> Self {
        CliError {
            code: 2,
            message: m.to_string(),
        }
    }
    fn budget(m: impl ToString) -> Self {
        CliError {
            code: 3,
            message: m.to_string(),
        }
    }
    fn failure(m: impl ToString) -> Self {
        CliError {
            code: 1,
            message: m.to_string(),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::usage(e)
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::SizeLimit { .. } => CliError::budget(e),
            GroupError::UnknownName(_)
            | GroupError::InvalidDimension(_)
            | GroupError::Ring(_)
            | GroupError::LevelOutOfRange { .. }
            | GroupError::EncodingOverflow { .. } => CliError::usage(e),
            _ => CliError::failure(e),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::BadArgument(_) => CliError::usage(e),
            _ => CliError::failure(e),
        }
    }
}

impl From<WordMapError> for CliError {
    fn from(e: WordMapError) -> Self {
        match e {
            WordMapError::Group(g) => g.into(),
            WordMapError::Char(c) => c.into(),
            WordMapError::BadLength { .. } => CliError::usage(e),
            WordMapError::OracleTooLarge { .. } => CliError::budget(e),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. } => CliError::budget(e),
            CountError::Group(g) => g.into(),
            CountError::Zeta(_) => CliError::failure(e),
            _ => CliError::usage(e),
        }
    }
}

impl From<PushError> for CliError {
    fn from(e: PushError) -> Self {
        CliError::usage(e)
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::usage(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::failure(e)
    }
}

/// What a subcommand produced: a JSON-able result, a text rendering, an
/// optional CSV table and whether every check passed.
struct Outcome {
    json: serde_json::Value,
    text: String,
    csv: Option<CsvTable>,
    ok: bool,
}

impl Outcome {
    fn new(result: &impl Serialize, text: String, ok: bool) -> Result<Self, CliError> {
        let json = serde_json::to_value(result).map_err(CliError::failure)?;
        Ok(Outcome {
            json,
            text,
            csv: None,
            ok,
        })
    }

    fn with_csv(mut self, table: CsvTable) -> Self {
        self.csv = Some(table);
        self
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Group { .. } => "group",
        Command::Zeta { .. } => "zeta",
        Command::Frobcheck { .. } => "frobcheck",
        Command::Stabilize { .. } => "stabilize",
        Command::Crosschar { .. } => "crosschar",
        Command::Densities { .. } => "densities",
        Command::Pipeline { .. } => "pipeline",
        Command::Bounds { .. } => "bounds",
        Command::Pushforward { .. } => "pushforward",
        Command::Pointcount { .. } => "pointcount",
        Command::Langweil { .. } => "langweil",
        Command::VerifyAll { .. } => "verify-all",
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<u8, CliError> {
    let common = &cli.common;
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(CliError::failure)?;
    }
    let start = Instant::now();
    // the program name is not part of the reproducible record
    let mut manifest = RunManifest::new(
        subcommand_name(&cli.command),
        argv[1..].to_vec(),
        common.seed,
    );
    let outcome = dispatch(&cli.command, common)?;
    if common.timing {
        manifest.wall_time_ms = Some(start.elapsed().as_millis());
    }
    let rendered = if common.json {
        json_document(&manifest, &outcome.json).map_err(CliError::failure)?
    } else if common.csv {
        let table = outcome
            .csv
            .ok_or_else(|| CliError::usage("this subcommand has no CSV form"))?;
        table.render(&manifest).map_err(CliError::failure)?
    } else {
        outcome.text
    };
    print!("{rendered}");
    Ok(if outcome.ok { 0 } else { 1 })
}

fn group_budget(common: &Common) -> u64 {
    common.budget.unwrap_or(DEFAULT_ELEMENT_BUDGET)
}

fn build_group(args: &GroupArgs, budget: u64) -> Result<Group, CliError> {
    if args.group.eq_ignore_ascii_case("sl") {
        let ring = args
            .ring
            .as_deref()
            .ok_or_else(|| CliError::usage("--ring is required for sl"))?;
        let spec: LocalRingSpec = ring.parse()?;
        Ok(build_sl(args.d, spec, budget)?)
    } else {
        Ok(build_named(args.group.parse::<NamedGroup>()?)?)
    }
}

fn dispatch(command: &Command, common: &Common) -> Result<Outcome, CliError> {
    match command {
        Command::Group { group, cache: path } => cmd_group(group, path.as_deref(), common),
        Command::Zeta { group, s } => cmd_zeta(group, *s, common),
        Command::Frobcheck { group, n, primes } => cmd_frobcheck(group, *n, *primes, common),
        Command::Stabilize {
            family,
            kind,
            d,
            p,
            rmax,
            n,
        } => cmd_stabilize(family, *kind, *d, *p, *rmax, *n, common),
        Command::Crosschar { p, r, n } => cmd_crosschar(*p, *r, *n, common),
        Command::Densities { d, ring, n } => cmd_densities(*d, ring, *n, common),
        Command::Pipeline { ty, d, d_max } => cmd_pipeline(*ty, *d, d_max.unwrap_or(*d), common),
        Command::Bounds { factors } => cmd_bounds(factors),
        Command::Pushforward { a, b, q, rmax } => cmd_pushforward(a, b, *q, *rmax),
        Command::Pointcount {
            graph,
            dimw,
            ring,
            sequence,
        } => cmd_pointcount(graph, *dimw, ring, *sequence, common),
        Command::Langweil { q, n } => cmd_langweil(q, *n, common),
        Command::VerifyAll {
            profile,
            inject_fault,
        } => cmd_verify(*profile, *inject_fault, common),
    }
}

#[derive(Serialize)]
struct GroupSummary {
    group: String,
    order: u64,
    classes: usize,
    exponent: u64,
    class_sizes: Vec<u64>,
    cache: Option<String>,
}

fn cmd_group(args: &GroupArgs, path: Option<&Path>, common: &Common) -> Result<Outcome, CliError> {
    let t = GroupTables::new(build_group(args, group_budget(common))?);
    if let Some(path) = path {
        cache::save(path, &t.group, &t.conj)?;
    }
    let summary = GroupSummary {
        group: t.group.desc().to_string(),
        order: t.order(),
        classes: t.class_count(),
        exponent: t.conj.exponent,
        class_sizes: t.conj.sizes(),
        cache: path.map(|p| p.display().to_string()),
    };
    let mut text = format!(
        "{}\norder {}\nclasses {}\nexponent {}\n",
        summary.group, summary.order, summary.classes, summary.exponent
    );
    let mut csv = CsvTable::new(&["class", "size"]);
    for (i, s) in summary.class_sizes.iter().enumerate() {
        csv.push(vec![i.to_string(), s.to_string()]);
    }
    if let Some(p) = &summary.cache {
        let _ = writeln!(text, "cache written to {p}");
    }
    Ok(Outcome::new(&summary, text, true)?.with_csv(csv))
}

#[derive(Serialize)]
struct ZetaSummary {
    group: String,
    order: u64,
    s: u32,
    ell: u64,
    seed: u64,
    degrees: Vec<u64>,
    value: Rational,
}

fn cmd_zeta(args: &GroupArgs, s: u32, common: &Common) -> Result<Outcome, CliError> {
    if s == 0 || s % 2 == 1 {
        return Err(CharError::BadArgument(s).into());
    }
    let t = GroupTables::new(build_group(args, group_budget(common))?);
    let table = default_mod_table(&t, common.seed)?;
    let value: Rational = zeta_from_degrees(&table.degrees, s).into();
    let summary = ZetaSummary {
        group: t.group.desc().to_string(),
        order: t.order(),
        s,
        ell: table.ell,
        seed: common.seed,
        degrees: table.degrees.clone(),
        value,
    };
    let text = format!("{}\n", summary.value);
    let mut csv = CsvTable::new(&["group", "s", "zeta_num", "zeta_den"]);
    let [num, den] = rational_cells(&summary.value);
    csv.push(vec![summary.group.clone(), s.to_string(), num, den]);
    Ok(Outcome::new(&summary, text, true)?.with_csv(csv))
}

#[derive(Serialize)]
struct FrobSummary {
    group: String,
    n: u32,
    report: repgrowth::wordmap::FrobeniusReport,
    brute_force_agrees: Option<bool>,
}

fn cmd_frobcheck(
    args: &GroupArgs,
    n: u32,
    primes: usize,
    common: &Common,
) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(WordMapError::BadLength { n, min: 1 }.into());
    }
    let t = GroupTables::new(build_group(args, group_budget(common))?);
    let tables = choose_primes(t.conj.exponent, t.order(), primes.max(1))
        .into_iter()
        .map(|ell| dixon_mod_table(&t, ell, common.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let fibers = fiber_distribution(&t, n)?;
    let report = frobenius_check_values(&t, n, &fibers, &tables);
    let brute_force_agrees = if t.order() <= BRUTE_FORCE_MAX_ORDER && n <= 2 {
        let brute = fiber_counts_brute(&t.group, n)?;
        Some(
            brute
                .iter()
                .enumerate()
                .all(|(g, &b)| fibers.0[t.conj.class_of[g] as usize] == b.into()),
        )
    } else {
        None
    };
    let ok = report.holds() && brute_force_agrees != Some(false);
    let mut text = format!(
        "{}: n = {n}, {} congruences mod {:?}, {} violations\n",
        t.group.desc(),
        report.congruences_checked,
        report.primes,
        report.violations.len()
    );
    if let Some(b) = brute_force_agrees {
        let _ = writeln!(
            text,
            "brute-force enumeration {}",
            if b { "agrees" } else { "DISAGREES" }
        );
    }
    let mut csv = CsvTable::new(&["class", "size", "fiber"]);
    for (i, (v, size)) in fibers.0.iter().zip(t.conj.sizes()).enumerate() {
        csv.push(vec![i.to_string(), size.to_string(), v.to_string()]);
    }
    let summary = FrobSummary {
        group: t.group.desc().to_string(),
        n,
        report,
        brute_force_agrees,
    };
    Ok(Outcome::new(&summary, text, ok)?.with_csv(csv))
}

fn cmd_stabilize(
    family: &str,
    kind: KindArg,
    d: usize,
    p: u32,
    rmax: u32,
    n: u32,
    common: &Common,
) -> Result<Outcome, CliError> {
    if !family.eq_ignore_ascii_case("sl") {
        return Err(CliError::usage(format!(
            "unsupported family '{family}', only sl"
        )));
    }
    let kind = match kind {
        KindArg::Zmod => RingKind::IntegerQuotient,
        KindArg::Tpoly => RingKind::TruncatedPolynomial,
    };
    let series = stabilization_series(kind, d, p, rmax, n, group_budget(common))?;
    let mut text = String::new();
    let mut csv = CsvTable::new(&[
        "level",
        "zeta_num",
        "zeta_den",
        "increment_num",
        "increment_den",
    ]);
    for row in &series.rows {
        let inc = row
            .increment
            .as_ref()
            .map(|i| i.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            text,
            "r = {}: |G| = {}, zeta = {}, increment {inc}",
            row.level, row.order, row.zeta
        );
        let [zn, zd] = rational_cells(&row.zeta);
        let [inn, ind] = row
            .increment
            .as_ref()
            .map(rational_cells)
            .unwrap_or_default();
        csv.push(vec![row.level.to_string(), zn, zd, inn, ind]);
    }
    if series.truncated {
        let _ = writeln!(
            text,
            "stopped at the element budget after {} levels",
            series.rows.len()
        );
    }
    Ok(Outcome::new(&series, text, true)?.with_csv(csv))
}

fn cmd_crosschar(p: u32, r: u32, n: u32, common: &Common) -> Result<Outcome, CliError> {
    let rep = cross_char_compare(p, r, n, group_budget(common))?;
    let text = if rep.equal {
        format!(
            "p = {p}, r = {r}: both rings give zeta({}) = {}\n",
            rep.s, rep.zeta_zmod
        )
    } else {
        format!(
            "FINDING p = {p}, r = {r}: Z/p^r gives {} but F_p[t]/t^r gives {}\n",
            rep.zeta_zmod, rep.zeta_tpoly
        )
    };
    let mut csv = CsvTable::new(&[
        "p",
        "r",
        "zmod_num",
        "zmod_den",
        "tpoly_num",
        "tpoly_den",
        "equal",
    ]);
    let [an, ad] = rational_cells(&rep.zeta_zmod);
    let [bn, bd] = rational_cells(&rep.zeta_tpoly);
    csv.push(vec![
        p.to_string(),
        r.to_string(),
        an,
        ad,
        bn,
        bd,
        rep.equal.to_string(),
    ]);
    let ok = rep.equal;
    Ok(Outcome::new(&rep, text, ok)?.with_csv(csv))
}

fn cmd_densities(d: usize, ring: &str, n: u32, common: &Common) -> Result<Outcome, CliError> {
    let spec: LocalRingSpec = ring.parse()?;
    let profile = congruence_density_profile(d, spec, n, group_budget(common), common.seed)?;
    let mut text = String::new();
    let mut csv = CsvTable::new(&[
        "level",
        "kernel_order",
        "density_num",
        "density_den",
        "matches_quotient_zeta",
    ]);
    for l in &profile.levels {
        let _ = writeln!(
            text,
            "D_{} = {} (kernel order {}, quotient zeta {})",
            l.level, l.density, l.kernel_order, l.quotient_zeta
        );
        let [dn, dd] = rational_cells(&l.density);
        csv.push(vec![
            l.level.to_string(),
            l.kernel_order.to_string(),
            dn,
            dd,
            l.matches_quotient_zeta.to_string(),
        ]);
    }
    let _ = writeln!(
        text,
        "nondecreasing: {}, starts at 1: {}",
        profile.nondecreasing, profile.starts_at_one
    );
    let ok = profile.holds();
    Ok(Outcome::new(&profile, text, ok)?.with_csv(csv))
}

fn cmd_pipeline(ty: LieType, d: u32, d_max: u32, common: &Common) -> Result<Outcome, CliError> {
    if d_max < d {
        return Err(CliError::usage("--d-max must be at least --d"));
    }
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut csv = CsvTable::new(&[
        "type",
        "d",
        "stage",
        "size",
        "closed_form_match",
        "missing",
        "extra",
    ]);
    for rank in d..=d_max {
        let run = run_pipeline(ty, rank)?;
        if let Some(dir) = &common.emit_dot {
            std::fs::create_dir_all(dir)?;
            for (name, doc) in &run.dot {
                std::fs::write(dir.join(format!("{name}.dot")), doc)?;
            }
        }
        let rep = run.report;
        let _ = writeln!(text, "{ty} d = {rank}");
        for s in &rep.stages {
            let verdict = match s.closed_form_match {
                Some(true) => "matches closed form".to_string(),
                Some(false) => format!("{} missing, {} unexpected", s.missing, s.extra),
                None => "no closed form".to_string(),
            };
            let _ = writeln!(text, "  {:<40} {:>7}  {verdict}", s.name, s.size);
            csv.push(vec![
                ty.to_string(),
                rank.to_string(),
                s.name.clone(),
                s.size.to_string(),
                s.closed_form_match
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                s.missing.to_string(),
                s.extra.to_string(),
            ]);
        }
        for f in &rep.forests {
            let _ = writeln!(
                text,
                "  forest {:<33} {:>7}  forest: {}, max degree {}",
                f.name, f.edges, f.is_forest, f.max_degree
            );
        }
        for n in &rep.notes {
            let _ = writeln!(text, "  note: {n}");
        }
        for dsc in &rep.discrepancies {
            let _ = writeln!(text, "  DISCREPANCY: {dsc}");
        }
        reports.push(rep);
    }
    let ok = reports.iter().all(|r| r.is_clean() && r.forests_ok(3));
    Ok(Outcome::new(&reports, text, ok)?.with_csv(csv))
}

#[derive(Serialize)]
struct BoundsSummary {
    factors: Vec<(SimpleFactor, u64)>,
    bound: u64,
    genus: repgrowth::liepipe::GenusBound,
}

fn cmd_bounds(factors: &[SimpleFactor]) -> Result<Outcome, CliError> {
    let bound = bound_root_group(factors)?;
    let genus = min_genus(bound);
    let text = format!(
        "{bound}\ngenus >= {} (strict: {})\n",
        genus.headline, genus.strict
    );
    let mut csv = CsvTable::new(&["factor", "bound"]);
    for f in factors {
        csv.push(vec![format!("{f:?}"), bound_root(*f).to_string()]);
    }
    let summary = BoundsSummary {
        factors: factors.iter().map(|&f| (f, bound_root(f))).collect(),
        bound,
        genus,
    };
    Ok(Outcome::new(&summary, text, true)?.with_csv(csv))
}

fn cmd_pushforward(a: &str, b: &str, q: u64, rmax: u32) -> Result<Outcome, CliError> {
    let spec = MonomialMapSpec::new(parse_exponents(a)?, parse_exponents(b)?, q)?;
    let rep = analyze(&spec, rmax);
    let mut text = format!("{spec}\n");
    let _ = writeln!(
        text,
        "continuity guaranteed: {} ({:?}); observed: {:?}",
        rep.continuity.guaranteed, rep.continuity.case, rep.behavior
    );
    if let Some(l) = &rep.limit {
        let _ = writeln!(text, "limit average density {} ({})", l.value, l.derivation);
    }
    let mut csv = CsvTable::new(&[
        "r",
        "mass_num",
        "mass_den",
        "density_num",
        "density_den",
        "attained",
    ]);
    for p in &rep.series {
        let [mn, md] = rational_cells(&p.mass);
        let [dn, dd] = rational_cells(&p.average_density);
        csv.push(vec![
            p.r.to_string(),
            mn,
            md,
            dn,
            dd,
            p.attained.to_string(),
        ]);
        let _ = writeln!(
            text,
            "r = {:>3}  density {:.9}",
            p.r,
            p.average_density.to_f64()
        );
    }
    let ok = rep.agrees && rep.dp_matches_enumeration && rep.total_mass_within_tail_bound;
    Ok(Outcome::new(&rep, text, ok)?.with_csv(csv))
}

#[derive(Serialize)]
struct PointSummary {
    count: repgrowth::varcount::CountReport,
    sequence: Option<repgrowth::varcount::NormalizedSequence>,
}

fn cmd_pointcount(
    graph: &GraphShape,
    dimw: u32,
    ring: &str,
    sequence: Option<u32>,
    common: &Common,
) -> Result<Outcome, CliError> {
    let spec: LocalRingSpec = ring.parse()?;
    let budget = common.budget.unwrap_or(POINTCOUNT_BUDGET);
    let inst = GraphVarietyInstance::uniform(graph.0.clone(), dimw, spec)?;
    let count = count_graph_variety(&inst, budget)?;
    let mut text = format!(
        "{} vertices, {} edges over {}: {} points, normalized {}\n",
        count.vertices, count.edges, count.ring, count.count, count.normalized
    );
    let mut csv = CsvTable::new(&["r", "count", "normalized_num", "normalized_den"]);
    let sequence = match sequence {
        Some(r_max) => {
            let seq = normalized_sequence(&graph.0, dimw, spec.p, r_max, budget)?;
            for row in &seq.rows {
                let diff = row
                    .difference
                    .as_ref()
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    text,
                    "Z/{}^{}: normalized {}, difference {diff}",
                    seq.p, row.r, row.normalized
                );
                let [nn, nd] = rational_cells(&row.normalized);
                csv.push(vec![row.r.to_string(), row.count.to_string(), nn, nd]);
            }
            if seq.truncated {
                let _ = writeln!(text, "sequence stopped at the budget");
            }
            Some(seq)
        }
        None => {
            let [nn, nd] = rational_cells(&count.normalized);
            csv.push(vec![spec.r.to_string(), count.count.to_string(), nn, nd]);
            None
        }
    };
    Ok(Outcome::new(&PointSummary { count, sequence }, text, true)?.with_csv(csv))
}

fn cmd_langweil(qs: &[u64], n: u32, common: &Common) -> Result<Outcome, CliError> {
    let rep = langweil_report(qs, n, group_budget(common), common.seed);
    let mut csv = CsvTable::new(&[
        "q",
        "order",
        "zeta_num",
        "zeta_den",
        "deviation_num",
        "deviation_den",
    ]);
    for e in &rep.entries {
        let [zn, zd] = e.zeta.as_ref().map(rational_cells).unwrap_or_default();
        let [dn, dd] = e.deviation.as_ref().map(rational_cells).unwrap_or_default();
        csv.push(vec![
            e.q.to_string(),
            e.order.map(|o| o.to_string()).unwrap_or_default(),
            zn,
            zd,
            dn,
            dd,
        ]);
    }
    // a table with no computed entry at all is reported as the first error
    if let Some(msg) = rep
        .entries
        .iter()
        .map(|e| e.error.as_ref())
        .collect::<Option<Vec<_>>>()
        .map(|v| v[0].clone())
    {
        return Err(if msg.contains("budget") {
            CliError::budget(msg)
        } else {
            CliError::usage(msg)
        });
    }
    let ok = rep
        .entries
        .iter()
        .all(|e| e.error.is_none() && e.paths_agree == Some(true));
    Ok(Outcome::new(&rep, rep.to_string(), ok)?.with_csv(csv))
}

fn cmd_verify(
    profile: Profile,
    fault: Option<FaultArg>,
    common: &Common,
) -> Result<Outcome, CliError> {
    let opts = VerifyOptions {
        profile,
        seed: common.seed,
        fault: fault.map(|FaultArg::FiberOffByOne| Fault::FiberOffByOne),
        dot_dir: common.emit_dot.clone(),
    };
    let summary = verify_all(&opts);
    let mut text = String::new();
    let mut csv = CsvTable::new(&["id", "name", "passed", "detail"]);
    for r in &summary.results {
        if common.timing {
            let _ = writeln!(text, "{r} ({} ms)", r.elapsed_ms);
        } else {
            let _ = writeln!(text, "{r}");
        }
        csv.push(vec![
            r.id.to_string(),
            r.name.to_string(),
            r.passed.to_string(),
            r.detail.clone(),
        ]);
    }
    let passed = summary.results.iter().filter(|r| r.passed).count();
    let _ = writeln!(text, "{passed}/{} criteria passed", summary.results.len());
    let ok = summary.all_passed;
    Ok(Outcome::new(&summary, text, ok)?.with_csv(csv))
}
