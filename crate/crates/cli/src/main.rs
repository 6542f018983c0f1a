//! Command-line front end for the sparseconv library.
//!
//! Subcommands: `gen` (seeded instances), `match` (all matchers, optional
//! oracle cross-check), `preprocess` (deterministic assignment tables),
//! `findprime` (separating primes), `bench` (seeded timing grid → CSV).
//!
//! Contract: identical command lines produce byte-identical output files;
//! randomized algorithms take their seed exclusively from `--seed`. Exit
//! codes: 0 success, 2 usage or input errors, 3 failed `--check`
//! cross-verification.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use sparseconv::io::{read_sparse_file, write_match_positions, write_sparse_file};
use sparseconv::shift_match::{
    choose_params, preprocess_select_assignments, sparse_match_shift_deterministic,
    sparse_match_shift_lasvegas, AssignmentTable, ShiftMatchConfig,
};
use sparseconv::xor_match::{sparse_match_xor, XorMatchConfig};
use sparseconv::{
    gen_instance, mask_match_xor, oracle_match_shift, oracle_match_xor, FamilyKind, MatchResult,
    PrimeSearchConfig, SparseBinaryVector,
};

/// Environment hook for the test suite: when set to `1`, `match` corrupts
/// its own output before the `--check` comparison, proving the check can
/// never report success on a mismatch.
const FAULT_ENV: &str = "SPARSECONV_INJECT_FAULT";

/// Versioned, frozen schema line written at the top of every new bench CSV.
const BENCH_SCHEMA: &str = "# schema sparseconv-bench-v1: algorithm,family,domain_size,\
text_nonzeros,pattern_nonzeros,planted,seed,rounds_used,candidates_verified,\
wall_time_nanos,output_size";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Xor,
    Shift,
}

impl Mode {
    fn family(self) -> FamilyKind {
        match self {
            Mode::Xor => FamilyKind::Xor,
            Mode::Shift => FamilyKind::Shift,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::Xor => "xor",
            Mode::Shift => "shift",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Brute-force membership oracle (full n·m probing).
    Oracle,
    /// Randomized length-reduction matcher, exact output.
    Lasvegas,
    /// Deterministic shift matcher over a preprocessed assignment table.
    Det,
    /// Mask-halving xor reducer (may report itself inapplicable).
    Mask,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Oracle => "oracle",
            Algo::Lasvegas => "lasvegas",
            Algo::Det => "det",
            Algo::Mask => "mask",
        }
    }

    fn randomized(self) -> bool {
        matches!(self, Algo::Lasvegas | Algo::Mask)
    }
}

#[derive(Parser)]
#[command(
    name = "sparseconv",
    version,
    about = "Sparse binary convolution matching: generators, matchers, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random instance as text/pattern .sv files.
    Gen {
        /// Alignment family of the instance.
        #[arg(long, value_enum)]
        mode: Mode,
        /// Domain size N of the text.
        #[arg(long)]
        domain: u128,
        /// Noise nonzero budget for the text.
        #[arg(short = 'n', long = "text-nonzeros")]
        n: usize,
        /// Pattern nonzero count.
        #[arg(short = 'm', long = "pattern-nonzeros")]
        m: usize,
        /// Planted pattern copies recorded as guaranteed matches.
        #[arg(long, default_value_t = 0)]
        planted: usize,
        /// RNG seed (instances are deterministic per seed).
        #[arg(long)]
        seed: u64,
        /// Output path for the text vector.
        #[arg(short = 't', long = "text")]
        text: PathBuf,
        /// Output path for the pattern vector.
        #[arg(short = 'p', long = "pattern")]
        pattern: PathBuf,
    },
    /// Run a matcher; optionally cross-check against the oracle.
    Match {
        /// Alignment family.
        #[arg(long, value_enum)]
        mode: Mode,
        /// Matching algorithm.
        #[arg(long, value_enum)]
        algo: Algo,
        /// Text .sv file.
        #[arg(short = 't', long = "text")]
        text: PathBuf,
        /// Pattern .sv file.
        #[arg(short = 'p', long = "pattern")]
        pattern: PathBuf,
        /// Match-position output file (stdout when omitted).
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Seed for randomized algorithms (required for them; no ambient
        /// entropy is ever used).
        #[arg(long)]
        seed: Option<u64>,
        /// Maximum reduction rounds before the exhaustive fallback.
        #[arg(long, default_value_t = 16)]
        rounds: u32,
        /// Oversize factor for the xor reduction domain.
        #[arg(long, default_value_t = 8)]
        oversize: u64,
        /// Assignment table file for --algo det; preprocessed in memory
        /// when omitted.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Re-run the brute-force oracle and fail (exit 3) on any mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Build and persist a deterministic assignment table for a text.
    Preprocess {
        /// Text .sv file the table is bound to.
        #[arg(short = 't', long = "text")]
        text: PathBuf,
        /// Table output path.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Find a prime keeping all indices of a .sv support distinct mod p.
    Findprime {
        /// .sv file whose support supplies the index set.
        #[arg(short = 't', long = "indices")]
        indices: PathBuf,
        /// Candidate primes to generate.
        #[arg(long, default_value_t = 4096)]
        pool_count: usize,
        /// Bit width of every candidate prime.
        #[arg(long, default_value_t = 20)]
        pool_bits: u32,
    },
    /// Time one algorithm over a seeded instance grid, appending CSV rows.
    Bench {
        /// Alignment family to benchmark.
        #[arg(long, value_enum)]
        family: Mode,
        /// Grid of text nonzero counts, e.g. `n=1024,4096`.
        #[arg(long)]
        grid: String,
        /// Seeds per grid cell (0..seeds).
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// CSV file to append to (schema comment written when new/empty).
        #[arg(long)]
        csv: PathBuf,
        /// Algorithm to time.
        #[arg(long, value_enum, default_value_t = Algo::Lasvegas)]
        algo: Algo,
        /// Domain size N for every cell.
        #[arg(long, default_value_t = 1 << 20)]
        domain: u128,
        /// Pattern nonzeros (defaults to n in each cell).
        #[arg(short = 'm', long = "pattern-nonzeros")]
        m: Option<usize>,
        /// Planted pattern copies per instance.
        #[arg(long, default_value_t = 1)]
        planted: usize,
    },
}

/// Errors mapped to exit codes: `Check` → 3, everything else → 2.
enum CliError {
    Check(String),
    Usage(String),
}

impl From<sparseconv::Error> for CliError {
    fn from(e: sparseconv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(), // clap exits 2 on usage errors, 0 on help/version
    };
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("sparseconv: {msg}");
            2
        }
        Err(CliError::Check(msg)) => {
            eprintln!("sparseconv: {msg}");
            3
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Gen {
            mode,
            domain,
            n,
            m,
            planted,
            seed,
            text,
            pattern,
        } => cmd_gen(mode, domain, n, m, planted, seed, &text, &pattern),
        Cmd::Match {
            mode,
            algo,
            text,
            pattern,
            out,
            seed,
            rounds,
            oversize,
            table,
            check,
        } => cmd_match(MatchOpts {
            mode,
            algo,
            text,
            pattern,
            out,
            seed,
            rounds,
            oversize,
            table,
            check,
        }),
        Cmd::Preprocess { text, out } => cmd_preprocess(&text, &out),
        Cmd::Findprime {
            indices,
            pool_count,
            pool_bits,
        } => cmd_findprime(&indices, pool_count, pool_bits),
        Cmd::Bench {
            family,
            grid,
            seeds,
            csv,
            algo,
            domain,
            m,
            planted,
        } => cmd_bench(family, &grid, seeds, &csv, algo, domain, m, planted),
    }
}

fn cmd_gen(
    mode: Mode,
    domain: u128,
    n: usize,
    m: usize,
    planted: usize,
    seed: u64,
    text: &Path,
    pattern: &Path,
) -> Result<(), CliError> {
    let inst = gen_instance(mode.family(), domain, n, m, planted, seed)?;
    write_sparse_file(text, &inst.text)?;
    write_sparse_file(pattern, &inst.pattern)?;
    eprintln!(
        "generated {} instance: text {} nonzeros, pattern {} nonzeros, {} planted match(es)",
        mode.name(),
        inst.text.weight(),
        inst.pattern.weight(),
        inst.planted_positions.len()
    );
    Ok(())
}

struct MatchOpts {
    mode: Mode,
    algo: Algo,
    text: PathBuf,
    pattern: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    rounds: u32,
    oversize: u64,
    table: Option<PathBuf>,
    check: bool,
}

fn run_algorithm(
    mode: Mode,
    algo: Algo,
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
    seed: u64,
    rounds: u32,
    oversize: u64,
    table: Option<&AssignmentTable>,
) -> Result<MatchResult, CliError> {
    let result = match (mode, algo) {
        (Mode::Shift, Algo::Oracle) => oracle_match_shift(text, pattern)?,
        (Mode::Xor, Algo::Oracle) => oracle_match_xor(text, pattern)?,
        (Mode::Shift, Algo::Lasvegas) => {
            let cfg = ShiftMatchConfig {
                seed,
                max_rounds: rounds,
            };
            sparse_match_shift_lasvegas(text, pattern, &cfg)?
        }
        (Mode::Xor, Algo::Lasvegas) => {
            let cfg = XorMatchConfig {
                seed,
                max_rounds: rounds,
                oversize_factor: oversize,
            };
            sparse_match_xor(text, pattern, &cfg)?
        }
        (Mode::Shift, Algo::Det) => {
            let owned;
            let table = match table {
                Some(t) => t,
                None => {
                    let params =
                        choose_params(text.domain_size(), text.weight() as u64, true)?;
                    owned = preprocess_select_assignments(text, &params)?;
                    &owned
                }
            };
            sparse_match_shift_deterministic(text, pattern, table)?
        }
        (Mode::Xor, Algo::Mask) => mask_match_xor(text, pattern, rounds, seed)?,
        (Mode::Xor, Algo::Det) => {
            return Err(CliError::Usage(
                "--algo det applies to --mode shift only".into(),
            ))
        }
        (Mode::Shift, Algo::Mask) => {
            return Err(CliError::Usage(
                "--algo mask applies to --mode xor only".into(),
            ))
        }
    };
    Ok(result)
}

fn cmd_match(opts: MatchOpts) -> Result<(), CliError> {
    let seed = match (opts.algo.randomized(), opts.seed) {
        (true, None) => {
            return Err(CliError::Usage(format!(
                "--algo {} is randomized and requires an explicit --seed",
                opts.algo.name()
            )))
        }
        (_, seed) => seed.unwrap_or(0),
    };
    let text = read_sparse_file(&opts.text)?;
    let pattern = read_sparse_file(&opts.pattern)?;
    let table = match &opts.table {
        Some(path) => {
            if opts.algo != Algo::Det {
                return Err(CliError::Usage(
                    "--table only applies to --algo det".into(),
                ));
            }
            Some(AssignmentTable::read_file(path)?)
        }
        None => None,
    };

    let result = run_algorithm(
        opts.mode,
        opts.algo,
        &text,
        &pattern,
        seed,
        opts.rounds,
        opts.oversize,
        table.as_ref(),
    )?;
    let mut positions = result.positions.clone();
    if std::env::var(FAULT_ENV).map(|v| v == "1").unwrap_or(false) {
        // Test hook: corrupt the output so --check must catch it.
        if positions.pop().is_none() {
            positions.push(0);
        }
    }

    if opts.check {
        let oracle = match opts.mode {
            Mode::Shift => oracle_match_shift(&text, &pattern)?,
            Mode::Xor => oracle_match_xor(&text, &pattern)?,
        };
        if positions != oracle.positions {
            return Err(CliError::Check(format!(
                "--check failed: {} returned {} position(s), oracle returned {}",
                opts.algo.name(),
                positions.len(),
                oracle.positions.len()
            )));
        }
    }

    match &opts.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(sparseconv::Error::from)?);
            write_match_positions(&mut w, &positions)?;
            w.flush().map_err(sparseconv::Error::from)?;
        }
        None => {
            let stdout = std::io::stdout();
            write_match_positions(stdout.lock(), &positions)?;
        }
    }
    eprintln!(
        "{} {}: {} match(es), {} round(s), {} candidate(s) verified",
        opts.mode.name(),
        opts.algo.name(),
        positions.len(),
        result.rounds_used,
        result.counts_checked
    );
    Ok(())
}

fn cmd_preprocess(text_path: &Path, out: &Path) -> Result<(), CliError> {
    let text = read_sparse_file(text_path)?;
    let params = choose_params(text.domain_size(), text.weight() as u64, true)?;
    let table = preprocess_select_assignments(&text, &params)?;
    table.write_file(out)?;
    eprintln!(
        "selected {} assignment(s) under q={}, degree bound {}",
        table.selected().len(),
        table.modulus(),
        table.degree_bound()
    );
    Ok(())
}

fn cmd_findprime(indices: &Path, pool_count: usize, pool_bits: u32) -> Result<(), CliError> {
    let v = read_sparse_file(indices)?;
    let config = PrimeSearchConfig {
        prime_count: pool_count,
        prime_bits: pool_bits,
    };
    let p = sparseconv::exp_prime_search(v.support(), &config)?;
    println!("{p}");
    Ok(())
}

fn parse_grid(grid: &str) -> Result<Vec<usize>, CliError> {
    let rest = grid.strip_prefix("n=").ok_or_else(|| {
        CliError::Usage(format!("--grid expects `n=<v1>,<v2>,...`, got {grid:?}"))
    })?;
    let mut values = Vec::new();
    for part in rest.split(',') {
        let v: usize = part.trim().parse().map_err(|_| {
            CliError::Usage(format!("invalid grid value {part:?} in {grid:?}"))
        })?;
        if v == 0 {
            return Err(CliError::Usage("grid values must be positive".into()));
        }
        values.push(v);
    }
    Ok(values)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    family: Mode,
    grid: &str,
    seeds: u64,
    csv: &Path,
    algo: Algo,
    domain: u128,
    m: Option<usize>,
    planted: usize,
) -> Result<(), CliError> {
    let grid = parse_grid(grid)?;
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let fresh = std::fs::metadata(csv).map(|meta| meta.len() == 0).unwrap_or(true);
    let mut out = BufWriter::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(csv)
            .map_err(sparseconv::Error::from)?,
    );
    if fresh {
        writeln!(out, "{BENCH_SCHEMA}").map_err(sparseconv::Error::from)?;
    }

    for &n in &grid {
        let m_cell = m.unwrap_or(n);
        for seed in 0..seeds {
            let inst = gen_instance(family.family(), domain, n, m_cell, planted, seed)?;
            let start = Instant::now();
            let result = run_algorithm(
                family,
                algo,
                &inst.text,
                &inst.pattern,
                seed,
                16,
                8,
                None,
            )?;
            let nanos = start.elapsed().as_nanos().max(1);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                algo.name(),
                family.name(),
                domain,
                n,
                m_cell,
                planted,
                seed,
                result.rounds_used,
                result.counts_checked,
                nanos,
                result.positions.len()
            )
            .map_err(sparseconv::Error::from)?;
            eprintln!(
                "bench {} {} n={} m={} seed={}: {} ns, {} match(es)",
                algo.name(),
                family.name(),
                n,
                m_cell,
                seed,
                nanos,
                result.positions.len()
            );
        }
    }
    out.flush().map_err(sparseconv::Error::from)?;
    Ok(())
}
