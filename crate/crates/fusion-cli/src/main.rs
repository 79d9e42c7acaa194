//! `fusion` — command-line front end for the fusion-rings library.
//!
//! Subcommands: `enumerate`, `analyze`, `modular`, `criteria`, `construct`,
//! `name`, `validate`. Catalogs are JSON arrays of ring records (see the
//! library's `catalog` module); they are read from a positional path or
//! standard input and written to `--output` or standard output. Progress
//! and statistics go to standard error so stdout stays machine-readable.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 I/O error, 4 interrupted with checkpoint.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fusion_rings::enumerate::{self_dual_counts, Checkpoint, Outcome};
use fusion_rings::precision::{format_digits, Ctx};
use fusion_rings::song::{cyclic, dihedral, quaternion};
use fusion_rings::spectra::{character_table, modular_data};
use fusion_rings::{
    canonical_form, catalog_names, dims, enumerate_rings, haagerup_izumi, make_group, near_group,
    read_catalog, schur_product, song_extension, write_catalog, zero_spectrum, CanonicalCode,
    EnumOptions, FiniteGroup, FusionRing, ObstructionWitness, RingRecord, SongSpec,
};

const EXIT_INVALID: i32 = 1;
const EXIT_CONFIG: i32 = 2;
const EXIT_IO: i32 = 3;
const EXIT_INTERRUPTED: i32 = 4;

/// A failure with a designated exit code. Configuration problems exit 2,
/// I/O problems 3, an interrupted enumeration 4, and rings that fail
/// validation 1.
#[derive(Debug)]
enum Failure {
    Config(String),
    Io(String),
    Invalid(String),
    Interrupted(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Interrupted(_) => EXIT_INTERRUPTED,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Invalid(m) | Failure::Interrupted(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "fusion", version, about = "Enumerate, analyze, and construct fusion rings")]
struct Cli {
    /// Working precision in decimal digits (minimum 30).
    #[arg(long, global = true, default_value_t = 99)]
    precision: usize,

    /// Seed for the random eigenvector draws behind character tables.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads for enumeration (checkpointing requires 1).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Checkpoint file: resumed from when it exists, written on interrupt.
    /// Requires `--output` so partial results survive the interruption.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,

    /// Output path (standard output when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// What `enumerate` sends to the output: the ring catalog or the
    /// rank-by-multiplicity count table. With `summary` and `--output`,
    /// the catalog goes to the file and the table to standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Catalog)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Catalog,
    Summary,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all fusion rings over rank/multiplicity ranges.
    Enumerate {
        /// Rank or inclusive range, e.g. `4` or `2..5`.
        #[arg(short, long, value_parser = parse_range)]
        rank: IntRange,
        /// Multiplicity bound or inclusive range.
        #[arg(short, long, value_parser = parse_range, default_value = "1")]
        mult: IntRange,
        /// Restrict the search to one self-dual count.
        #[arg(long)]
        self_dual: Option<usize>,
        /// Node budget; the run stops with a checkpoint once exceeded.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Re-run axiom validation on every record of a catalog.
    Validate {
        /// Catalog path (standard input when omitted).
        catalog: Option<PathBuf>,
    },
    /// Augment a catalog with structural and numerical properties.
    Analyze {
        catalog: Option<PathBuf>,
    },
    /// Search modular data (S, T, lambda) for the commutative records.
    Modular {
        catalog: Option<PathBuf>,
    },
    /// Apply the zero-spectrum and Schur-product criteria to a catalog.
    Criteria {
        catalog: Option<PathBuf>,
    },
    /// Build a named ring and emit it as a one-record catalog.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Assign canonical FR^{r,m,n}_i names to a catalog.
    ///
    /// Names are positional within each (rank, multiplicity, non-self-dual)
    /// class, so the class is re-enumerated to locate each ring; cells the
    /// catalog does not cover completely get a warning and no names.
    Name {
        catalog: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Tambara-Yamagami ring of a group: t·t = sum of all group elements.
    Ty { group: String },
    /// Haagerup-Izumi ring of a commutative group (multiplicity n, default 1).
    Hi {
        group: String,
        #[arg(default_value_t = 1)]
        n: u32,
    },
    /// Group plus one extra element with t·t = sum of group elements + k·t.
    NearGroup { group: String, k: u32 },
    /// General extension [H ⊴ G]^A_{g̃|n} of a group by its coset set.
    ///
    /// SUBGROUP is a comma-separated list of generators (element indices,
    /// 1-based). AUTOMORPHISM acts on the cosets of G/H: `id`, `inv`, or an
    /// explicit 1-based image list like `1,3,2`; cosets are numbered in
    /// first-seen order scanning elements 1..|G| (the identity coset is 1).
    Song {
        group: String,
        subgroup: String,
        automorphism: String,
        g_tilde: usize,
        n: u32,
    },
}

/// Inclusive integer range from `a` or `a..b`.
#[derive(Clone, Copy, Debug)]
struct IntRange {
    lo: usize,
    hi: usize,
}

impl IntRange {
    fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

fn parse_range(s: &str) -> Result<IntRange, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad range bound {lo:?}: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad range bound {hi:?}: {e}"))?;
    if lo == 0 {
        return Err("range bounds are 1-based".into());
    }
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(IntRange { lo, hi })
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(&cli) {
        eprintln!("fusion: {}", f.message());
        std::process::exit(f.exit_code());
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.precision < 30 {
        return Err(Failure::Config(format!(
            "precision {} is below the minimum of 30 digits",
            cli.precision
        )));
    }
    if cli.threads == 0 {
        return Err(Failure::Config("thread count must be at least 1".into()));
    }
    match &cli.command {
        Command::Enumerate { rank, mult, self_dual, budget } => {
            cmd_enumerate(cli, *rank, *mult, *self_dual, *budget)
        }
        Command::Validate { catalog } => cmd_validate(cli, catalog),
        Command::Analyze { catalog } => cmd_analyze(cli, catalog),
        Command::Modular { catalog } => cmd_modular(cli, catalog),
        Command::Criteria { catalog } => cmd_criteria(cli, catalog),
        Command::Construct { what } => cmd_construct(cli, what),
        Command::Name { catalog } => cmd_name(cli, catalog),
    }
}

// ---------------------------------------------------------------------------
// interrupt handling

static INTERRUPT: OnceLock<Arc<AtomicBool>> = OnceLock::new();

extern "C" fn on_sigint(_: libc::c_int) {
    if let Some(flag) = INTERRUPT.get() {
        flag.store(true, Ordering::Relaxed);
    }
}

fn install_sigint() -> Arc<AtomicBool> {
    let flag = INTERRUPT.get_or_init(|| Arc::new(AtomicBool::new(false))).clone();
    unsafe {
        libc::signal(libc::SIGINT, on_sigint as *const () as libc::sighandler_t);
    }
    flag
}

// ---------------------------------------------------------------------------
// I/O helpers

fn read_records(path: &Option<PathBuf>) -> Result<Vec<RingRecord>, Failure> {
    let records = match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = fs::File::open(p)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))?;
            read_catalog(io::BufReader::new(file))
        }
        _ => read_catalog(io::stdin().lock()),
    };
    records.map_err(|e| Failure::Io(e.to_string()))
}

fn write_bytes(path: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("cannot write standard output: {e}"))),
    }
}

fn write_records(path: &Option<PathBuf>, records: &[RingRecord]) -> Result<(), Failure> {
    let mut buf = Vec::new();
    write_catalog(&mut buf, records).map_err(|e| Failure::Io(e.to_string()))?;
    write_bytes(path, &buf)
}

fn write_json(path: &Option<PathBuf>, value: &Value) -> Result<(), Failure> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Io(format!("serialise error: {e}")))?;
    body.push('\n');
    write_bytes(path, body.as_bytes())
}

// ---------------------------------------------------------------------------
// enumerate

fn cmd_enumerate(
    cli: &Cli,
    rank: IntRange,
    mult: IntRange,
    self_dual: Option<usize>,
    budget: Option<u64>,
) -> Result<(), Failure> {
    // Cell processing order: rank ascending, multiplicity ascending, then
    // the library's self-dual order (descending). Checkpoints name a cell;
    // cells before it were finished and live in the partial catalog.
    let mut cells: Vec<(usize, u32, usize)> = Vec::new();
    for r in rank.iter() {
        for m in mult.iter() {
            for s in self_dual_counts(r) {
                if self_dual.is_none_or(|want| want == s) {
                    cells.push((r, m as u32, s));
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Failure::Config(format!(
            "self-dual count {} is not admissible for any requested rank",
            self_dual.unwrap_or(0)
        )));
    }

    let resume = load_checkpoint(cli)?;
    let mut merged: BTreeMap<CanonicalCode, FusionRing> = BTreeMap::new();
    let mut start = 0;
    if let Some(cp) = &resume {
        start = cells
            .iter()
            .position(|&(r, m, s)| r == cp.rank && m == cp.mult && s == cp.self_dual)
            .ok_or_else(|| {
                Failure::Config("checkpoint cell is not part of this run".into())
            })?;
        // Rings found before the interrupt are only in the partial catalog.
        let partial = cli.output.as_ref().filter(|p| p.exists());
        if let Some(p) = partial {
            for rec in read_records(&Some(p.clone()))? {
                let ring = rec
                    .to_ring()
                    .map_err(|e| Failure::Io(format!("partial catalog: {e}")))?;
                let canon = canonical_form(&ring)
                    .map_err(|e| Failure::Io(format!("partial catalog: {e}")))?;
                merged.insert(canon.code, canon.ring);
            }
            eprintln!("resuming at rank {} m<={} s={} with {} rings from {}",
                cp.rank, cp.mult, cp.self_dual, merged.len(), p.display());
        } else {
            eprintln!(
                "resuming at rank {} m<={} s={} without a partial catalog",
                cp.rank, cp.mult, cp.self_dual
            );
        }
    }

    let flag = install_sigint();
    let t0 = Instant::now();
    let mut remaining = budget;
    let mut total_nodes = 0u64;
    let mut resume = resume;
    for &(r, m, s) in &cells[start..] {
        let opts = EnumOptions {
            self_dual: Some(s),
            threads: cli.threads,
            max_nodes: remaining,
            resume: resume.take(),
            interrupt: Some(flag.clone()),
        };
        let run = enumerate_rings(r, m, &opts).map_err(|e| Failure::Config(e.to_string()))?;
        for er in &run.rings {
            merged.entry(er.code.clone()).or_insert_with(|| er.ring.clone());
        }
        let stats = &run.cells[0].stats;
        total_nodes += stats.nodes;
        if let Some(b) = remaining.as_mut() {
            *b = b.saturating_sub(stats.nodes);
        }
        eprintln!(
            "rank {r} m<={m} s={s}: {} rings, {} nodes, {} checks, {:.1}s elapsed",
            run.rings.len(),
            stats.nodes,
            stats.checks,
            t0.elapsed().as_secs_f64()
        );
        if run.outcome != Outcome::Complete {
            return stop_early(cli, &run.outcome, run.checkpoint, &merged);
        }
    }

    // Names are positional within complete (rank, mult, non-self-dual)
    // classes; a finished run over these cells contains whole classes.
    let codes: Vec<CanonicalCode> = merged.keys().cloned().collect();
    let names = catalog_names(&codes);
    let records: Vec<RingRecord> = merged
        .values()
        .zip(names)
        .map(|(ring, name)| RingRecord::from_ring(ring, Some(name)))
        .collect();

    let summary = render_summary(&codes, rank, mult);
    eprintln!(
        "total: {} rings, {} nodes, {:.1}s",
        records.len(),
        total_nodes,
        t0.elapsed().as_secs_f64()
    );
    match cli.format {
        OutputFormat::Catalog => {
            write_records(&cli.output, &records)?;
            eprint!("{summary}");
        }
        OutputFormat::Summary => {
            if cli.output.is_some() {
                write_records(&cli.output, &records)?;
            }
            print!("{summary}");
        }
    }
    if let Some(p) = &cli.checkpoint {
        let _ = fs::remove_file(p);
    }
    Ok(())
}

fn load_checkpoint(cli: &Cli) -> Result<Option<Checkpoint>, Failure> {
    let Some(path) = &cli.checkpoint else { return Ok(None) };
    if cli.output.is_none() {
        return Err(Failure::Config(
            "--checkpoint requires --output so partial results have a home".into(),
        ));
    }
    if !path.exists() {
        return Ok(None);
    }
    if cli.threads > 1 {
        return Err(Failure::Config("resuming a checkpoint requires --threads 1".into()));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Checkpoint::from_text(&text).map(Some).map_err(|e| Failure::Config(e.to_string()))
}

/// Interrupt or exhausted budget: save the checkpoint and partial catalog.
fn stop_early(
    cli: &Cli,
    outcome: &Outcome,
    checkpoint: Option<Checkpoint>,
    merged: &BTreeMap<CanonicalCode, FusionRing>,
) -> Result<(), Failure> {
    let records: Vec<RingRecord> =
        merged.values().map(|ring| RingRecord::from_ring(ring, None)).collect();
    if cli.output.is_some() {
        write_records(&cli.output, &records)?;
    }
    let cause = match outcome {
        Outcome::BudgetExhausted => "node budget exhausted",
        _ => "interrupted",
    };
    let note = match (&cli.checkpoint, checkpoint) {
        (Some(path), Some(cp)) => {
            fs::write(path, cp.to_text())
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            format!("{cause}; checkpoint written to {}", path.display())
        }
        _ => format!("{cause}; no checkpoint path given, rerun restarts this cell"),
    };
    Err(Failure::Interrupted(note))
}

/// Count table in the layout of the paper's rank/multiplicity census:
/// rank columns, multiplicity rows, entries counting rings with
/// multiplicity at most the row bound.
fn render_summary(codes: &[CanonicalCode], rank: IntRange, mult: IntRange) -> String {
    let mut grid = Vec::new();
    for m in mult.iter() {
        let row: Vec<usize> = rank
            .iter()
            .map(|r| codes.iter().filter(|c| c.rank == r && c.mult <= m as u32).count())
            .collect();
        grid.push(row);
    }
    let width = grid
        .iter()
        .flatten()
        .map(|n| n.to_string().len())
        .chain(rank.iter().map(|r| r.to_string().len() + 2))
        .max()
        .unwrap_or(1)
        .max(4);
    let mut out = String::new();
    out.push_str(&format!("{:<6}", ""));
    for r in rank.iter() {
        out.push_str(&format!(" {:>width$}", format!("r={r}")));
    }
    out.push('\n');
    for (row, m) in grid.iter().zip(mult.iter()) {
        out.push_str(&format!("{:<6}", format!("m<={m}")));
        for n in row {
            out.push_str(&format!(" {n:>width$}"));
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// validate

fn cmd_validate(cli: &Cli, catalog: &Option<PathBuf>) -> Result<(), Failure> {
    let records = read_records(catalog)?;
    let mut out = Vec::new();
    let mut bad = 0usize;
    for (i, rec) in records.iter().enumerate() {
        let entry = match rec.to_ring() {
            Ok(ring) => {
                let report = ring.validate();
                let violations: Vec<Value> = report
                    .violations
                    .iter()
                    .map(|v| {
                        json!({
                            "axiom": format!("{:?}", v.axiom),
                            "indices": v.indices,
                            "detail": v.detail,
                        })
                    })
                    .collect();
                if !report.is_valid() {
                    bad += 1;
                }
                json!({
                    "index": i,
                    "name": rec.name,
                    "valid": report.is_valid(),
                    "violations": violations,
                })
            }
            Err(e) => {
                bad += 1;
                json!({ "index": i, "name": rec.name, "valid": false, "error": e.to_string() })
            }
        };
        out.push(entry);
    }
    write_json(&cli.output, &Value::Array(out))?;
    eprintln!("{} of {} records valid", records.len() - bad, records.len());
    if bad > 0 {
        return Err(Failure::Invalid(format!("{bad} records failed validation")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// analyze / modular / criteria

/// Run `f` per record, mapping a failure to an error entry so one bad
/// record does not kill the run.
fn per_record(
    records: &[RingRecord],
    mut f: impl FnMut(usize, &RingRecord, &FusionRing) -> fusion_rings::Result<Value>,
) -> Vec<Value> {
    records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let mut run = || -> fusion_rings::Result<Value> {
                let ring = rec.to_ring()?;
                let report = ring.validate();
                if let Some(v) = report.violations.first() {
                    return Err(fusion_rings::FusionError::Shape(format!(
                        "record is not a fusion ring ({:?} axiom fails)",
                        v.axiom
                    )));
                }
                f(i, rec, &ring)
            };
            run().unwrap_or_else(|e| {
                eprintln!("record {i}: {e}");
                json!({ "index": i, "name": records[i].name, "error": e.to_string() })
            })
        })
        .collect()
}

fn cmd_analyze(cli: &Cli, catalog: &Option<PathBuf>) -> Result<(), Failure> {
    let records = read_records(catalog)?;
    let ctx = Ctx::from_digits(cli.precision);
    let fp_tol = ctx.ten_pow(2 - cli.precision as i64);
    let modular_tol = ctx.ten_pow(-30);
    let out = per_record(&records, |i, rec, ring| {
        let fp = dims::fp_dimensions(ring, ctx, &fp_tol)?;
        let commutative = ring.is_commutative();
        let zsc = zero_spectrum(ring);
        let (cspc, modular_count) = if commutative {
            let table = character_table(ring, cli.precision, cli.seed)?;
            let witness = schur_product(ring, &table)?;
            let md = modular_data(ring, cli.precision, cli.seed, &modular_tol)?;
            (json!(verdict(witness.is_some())), json!(md.data.len()))
        } else {
            (json!("n/a"), Value::Null)
        };
        Ok(json!({
            "index": i,
            "name": rec.name,
            "rank": ring.rank(),
            "multiplicity": ring.multiplicity(),
            "self_dual": ring.self_dual_count(),
            "commutative": commutative,
            "fp_dims": fp.dims.iter().map(|d| format_digits(d, cli.precision)).collect::<Vec<_>>(),
            "global_dim": format_digits(&fp.global, cli.precision),
            "largest_subgroup_order": ring.invertible_subgroup().len(),
            "sub_ring_count": ring.sub_fusion_rings().len(),
            "zsc": verdict(zsc.is_some()),
            "cspc": cspc,
            "modular_count": modular_count,
        }))
    });
    write_json(&cli.output, &Value::Array(out))
}

fn verdict(obstructed: bool) -> &'static str {
    if obstructed {
        "obstructed"
    } else {
        "clear"
    }
}

fn cmd_modular(cli: &Cli, catalog: &Option<PathBuf>) -> Result<(), Failure> {
    let records = read_records(catalog)?;
    let ctx = Ctx::from_digits(cli.precision);
    let tol = ctx.ten_pow(-30);
    let digits = cli.precision;
    let out = per_record(&records, |i, rec, ring| {
        if !ring.is_commutative() {
            return Ok(json!({
                "index": i, "name": rec.name, "rank": ring.rank(),
                "commutative": false, "data": Value::Null,
            }));
        }
        let md = modular_data(ring, cli.precision, cli.seed, &tol)?;
        let data: Vec<Value> = md
            .data
            .iter()
            .map(|d| {
                json!({
                    "lambda": [format_digits(&d.lambda.re, digits), format_digits(&d.lambda.im, digits)],
                    "t_exponents": d.t_exponents.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "s": (0..d.s.n).map(|i| {
                        d.s.row(i)
                            .iter()
                            .map(|z| vec![format_digits(&z.re, digits), format_digits(&z.im, digits)])
                            .collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                    "residual": format_digits(&d.residual, 3),
                })
            })
            .collect();
        Ok(json!({
            "index": i,
            "name": rec.name,
            "rank": ring.rank(),
            "commutative": true,
            "s_count": md.s_count,
            "t_count": md.t_count,
            "infinite_family": md.infinite_family,
            "data": data,
        }))
    });
    write_json(&cli.output, &Value::Array(out))
}

fn cmd_criteria(cli: &Cli, catalog: &Option<PathBuf>) -> Result<(), Failure> {
    let records = read_records(catalog)?;
    let out = per_record(&records, |i, rec, ring| {
        let zsc = zero_spectrum(ring);
        let zsc_witness = match &zsc {
            Some(ObstructionWitness::Zsc { indices, .. }) => json!(indices.to_vec()),
            _ => Value::Null,
        };
        let (cspc, cspc_witness) = if ring.is_commutative() {
            let table = character_table(ring, cli.precision, cli.seed)?;
            match schur_product(ring, &table)? {
                Some(ObstructionWitness::Cspc { rows, .. }) => {
                    (json!("obstructed"), json!(rows.to_vec()))
                }
                _ => (json!("clear"), Value::Null),
            }
        } else {
            (json!("n/a"), Value::Null)
        };
        Ok(json!({
            "index": i,
            "name": rec.name,
            "rank": ring.rank(),
            "commutative": ring.is_commutative(),
            "zsc": verdict(zsc.is_some()),
            "zsc_witness": zsc_witness,
            "cspc": cspc,
            "cspc_witness": cspc_witness,
        }))
    });
    write_json(&cli.output, &Value::Array(out))
}

// ---------------------------------------------------------------------------
// construct

fn cmd_construct(cli: &Cli, what: &Construct) -> Result<(), Failure> {
    let ring = match what {
        Construct::Ty { group } => near_group(&parse_group(group)?, 0),
        Construct::Hi { group, n } => build(haagerup_izumi(&parse_group(group)?, *n))?,
        Construct::NearGroup { group, k } => near_group(&parse_group(group)?, *k),
        Construct::Song { group, subgroup, automorphism, g_tilde, n } => {
            let group = parse_group(group)?;
            let subgroup = generated_subgroup(&group, &parse_elements(subgroup, group.order())?);
            let autom = parse_automorphism(&group, &subgroup, automorphism)?;
            let spec = build(SongSpec::new(group, subgroup, autom, *g_tilde, *n))?;
            build(song_extension(&spec))?
        }
    };
    eprintln!(
        "rank {}, multiplicity {}, {}",
        ring.rank(),
        ring.multiplicity(),
        if ring.is_commutative() { "commutative" } else { "non-commutative" }
    );
    write_records(&cli.output, &[RingRecord::from_ring(&ring, None)])
}

fn build<T>(r: fusion_rings::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Config(e.to_string()))
}

/// A named group (`Z<n>`, `D<n>`, `Q8`, case-insensitive, optional
/// underscore) or the path of a multiplication-table file: one row per
/// line, 1-based indices, whitespace-separated.
fn parse_group(spec: &str) -> Result<FiniteGroup, Failure> {
    let compact = spec.replace('_', "").to_ascii_lowercase();
    if let Some(n) = compact.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
        if n >= 1 {
            return Ok(cyclic(n));
        }
    }
    if let Some(n) = compact.strip_prefix('d').and_then(|n| n.parse::<usize>().ok()) {
        if n >= 2 {
            return Ok(dihedral(n));
        }
    }
    if compact == "q8" {
        return Ok(quaternion());
    }
    if Path::new(spec).exists() {
        let text = fs::read_to_string(spec)
            .map_err(|e| Failure::Io(format!("cannot read {spec}: {e}")))?;
        let mut table = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let row: Result<Vec<usize>, _> =
                line.split_whitespace().map(|t| t.parse::<usize>()).collect();
            table.push(row.map_err(|e| Failure::Config(format!("bad table entry: {e}")))?);
        }
        return build(make_group(&table));
    }
    Err(Failure::Config(format!(
        "unknown group {spec:?}: expected Z<n>, D<n>, Q8, or a table file"
    )))
}

fn parse_elements(list: &str, order: usize) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for tok in list.split(',') {
        let g: usize = tok
            .trim()
            .parse()
            .map_err(|e| Failure::Config(format!("bad element index {tok:?}: {e}")))?;
        if g == 0 || g > order {
            return Err(Failure::Config(format!("element {g} outside 1..={order}")));
        }
        out.push(g);
    }
    Ok(out)
}

fn generated_subgroup(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order() + 1];
    seen[1] = true;
    let mut frontier = vec![1];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                frontier.push(y);
            }
        }
    }
    (1..=group.order()).filter(|&g| seen[g]).collect()
}

fn parse_automorphism(
    group: &FiniteGroup,
    subgroup: &[usize],
    spec: &str,
) -> Result<Vec<usize>, Failure> {
    let (quot, _) = build(group.quotient(subgroup))?;
    let q = quot.order();
    match spec {
        "id" => Ok((1..=q).collect()),
        "inv" => Ok((1..=q).map(|c| quot.inv(c)).collect()),
        _ => {
            let perm = parse_elements(spec, q)?;
            if perm.len() != q {
                return Err(Failure::Config(format!(
                    "automorphism lists {} cosets, quotient has {q}",
                    perm.len()
                )));
            }
            Ok(perm)
        }
    }
}

// ---------------------------------------------------------------------------
// name

fn cmd_name(cli: &Cli, catalog: &Option<PathBuf>) -> Result<(), Failure> {
    let records = read_records(catalog)?;
    let mut codes: Vec<Option<CanonicalCode>> = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let code = rec
            .to_ring()
            .ok()
            .filter(|ring| ring.validate().is_valid())
            .and_then(|ring| canonical_form(&ring).ok())
            .map(|c| c.code);
        if code.is_none() {
            eprintln!("record {i}: not a valid fusion ring, name withheld");
        }
        codes.push(code);
    }

    // Re-enumerate each (rank, exact multiplicity) once; the complete
    // classes give every ring its positional index.
    let mut class_names: BTreeMap<CanonicalCode, String> = BTreeMap::new();
    let mut class_sizes: BTreeMap<(usize, u32, usize), usize> = BTreeMap::new();
    let mut done: Vec<(usize, u32)> = Vec::new();
    for code in codes.iter().flatten() {
        let key = (code.rank, code.mult);
        if done.contains(&key) {
            continue;
        }
        done.push(key);
        let run = enumerate_rings(code.rank, code.mult, &EnumOptions::default())
            .map_err(|e| Failure::Config(e.to_string()))?;
        for er in run.rings {
            if er.code.mult == code.mult {
                let cell = (er.code.rank, er.code.mult, er.code.non_self_dual());
                *class_sizes.entry(cell).or_insert(0) += 1;
                class_names.insert(er.code, er.name.unwrap_or_default());
            }
        }
    }

    // A cell may only be named when the catalog covers all of it.
    let mut seen_cells: BTreeMap<(usize, u32, usize), Vec<&CanonicalCode>> = BTreeMap::new();
    for code in codes.iter().flatten() {
        seen_cells
            .entry((code.rank, code.mult, code.non_self_dual()))
            .or_default()
            .push(code);
    }
    let mut complete: BTreeMap<(usize, u32, usize), bool> = BTreeMap::new();
    for (cell, cell_codes) in &seen_cells {
        let mut distinct: Vec<&CanonicalCode> = cell_codes.clone();
        distinct.sort();
        distinct.dedup();
        let full = class_sizes.get(cell).copied().unwrap_or(0);
        let ok = distinct.len() == full && distinct.iter().all(|c| class_names.contains_key(c));
        if !ok {
            eprintln!(
                "cell rank {} mult {} nsd {}: catalog has {} of {} rings, names withheld",
                cell.0,
                cell.1,
                cell.2,
                distinct.len(),
                full
            );
        }
        complete.insert(*cell, ok);
    }

    let named: Vec<RingRecord> = records
        .iter()
        .zip(&codes)
        .map(|(rec, code)| {
            let name = code.as_ref().and_then(|c| {
                let cell = (c.rank, c.mult, c.non_self_dual());
                if complete[&cell] {
                    class_names.get(c).cloned()
                } else {
                    None
                }
            });
            RingRecord { name, ..rec.clone() }
        })
        .collect();
    write_records(&cli.output, &named)
}
