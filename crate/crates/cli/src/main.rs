use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use wilfcheck_core::campaign::{self, CampaignConfig, CampaignResult, CampaignStatus};
use wilfcheck_core::records::{self, CsvReportWriter};
use wilfcheck_core::{
    apery_analysis, brute_force_census, enumerate, Law, NumericalSemigroup, Predicate,
    ReportRecord, CENSUS_MAX_GENUS,
};

#[derive(Parser)]
#[command(
    name = "wilfcheck",
    version,
    about = "Numerical semigroup invariants and exhaustive genus-tree checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full report of one semigroup
    Info {
        /// `gens=a,b,...`, `gens=a,b,...;tail=t` or `gaps=x,y,...`
        notation: String,
        #[arg(long, value_enum, default_value_t = InfoFormat::Human)]
        format: InfoFormat,
    },
    /// Stream the report of every semigroup of genus <= G, in tree order
    Enumerate {
        #[arg(long)]
        max_genus: u32,
        #[arg(long, value_enum, default_value_t = RecordFormat::Jsonl)]
        format: RecordFormat,
        /// Output file (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count semigroups per genus by walking the tree
    Count {
        #[arg(long)]
        max_genus: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Count semigroups per genus by subset enumeration (G <= 12)
    Oracle {
        #[arg(long)]
        max_genus: u32,
    },
    /// Check a law suite over every semigroup of genus <= G
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// `all` or a comma-separated list of law names
        #[arg(long, default_value = "all")]
        laws: String,
        /// Write violation records (JSONL) here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report every semigroup of genus <= G matching a predicate
    Hunt {
        #[command(flatten)]
        run: RunArgs,
        /// Filter such as "L <= 12 && q >= 4 && a1 == 2"
        #[arg(long = "where")]
        predicate: String,
        /// Write matching reports here (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RecordFormat::Jsonl)]
        format: RecordFormat,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Visit every semigroup of genus <= G
    #[arg(long)]
    max_genus: u32,
    /// Worker threads; results do not depend on this
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Resume from / periodically save to this checkpoint file
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Visited semigroups between checkpoint writes
    #[arg(long, default_value_t = 1_000_000)]
    checkpoint_interval: u64,
    /// Stop after visiting this many semigroups (checkpointing if enabled)
    #[arg(long)]
    stop_after: Option<u64>,
    /// Maximum number of records kept (smallest genus first)
    #[arg(long, default_value_t = 100_000)]
    record_limit: usize,
    /// Restrict the run to the subtree below this semigroup (repeatable)
    #[arg(long = "from")]
    roots: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InfoFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecordFormat {
    Jsonl,
    Csv,
}

fn parse_semigroup(text: &str) -> Result<NumericalSemigroup> {
    text.parse().map_err(|e| anyhow!("{text}: {e}"))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn join(xs: &[u32]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_info(notation: &str, format: InfoFormat) -> Result<ExitCode> {
    let s = parse_semigroup(notation)?;
    let rec = ReportRecord::new(&s)?;
    let mut out = io::stdout().lock();
    if let InfoFormat::Json = format {
        writeln!(out, "{}", serde_json::to_string(&rec)?)?;
        return Ok(ExitCode::SUCCESS);
    }
    let r = &rec.report;
    writeln!(out, "semigroup   {}", s.to_gens_notation())?;
    writeln!(out, "gaps        {} ({})", join(&rec.gaps), r.g)?;
    writeln!(
        out,
        "m = {}  c = {}  F = {}  g = {}  q = {}  rho = {}  e = {}",
        r.m,
        r.c,
        s.frobenius(),
        r.g,
        r.q,
        r.rho,
        r.e
    )?;
    writeln!(out, "primitives  {}", join(&s.primitives()))?;
    writeln!(
        out,
        "left part   {} ({})",
        join(&s.left_part()),
        r.left_count
    )?;
    if let Ok(a) = apery_analysis(&s) {
        writeln!(out, "Apéry set   {}", join(&a.apery_set))?;
        writeln!(out, "level  α  α′  α″  elements")?;
        for (j, elems) in a.levels.iter().enumerate() {
            writeln!(
                out,
                "{j:>5} {:>2} {:>3} {:>3}  {}",
                a.alpha[j],
                a.alpha_prime[j],
                a.alpha_second[j],
                join(elems)
            )?;
        }
        let compressed: Vec<String> = a
            .compressed
            .iter()
            .map(|e| format!("{} = {} + {}", e.value, e.witness.0, e.witness.1))
            .collect();
        let compressed = if compressed.is_empty() {
            "-".into()
        } else {
            compressed.join(", ")
        };
        writeln!(out, "compressed  {compressed}")?;
    }
    writeln!(out, "profile     {}", r.profile)?;
    writeln!(
        out,
        "|L| = {}  |P∩L| = {}  |D_q| = {}  |C| = {}",
        r.left_count, r.p_left_count, r.dq_count, r.c_size
    )?;
    writeln!(out, "W  = {}", r.w)?;
    writeln!(out, "W0 = {}", r.w0)?;
    let flags = r.flags.to_string();
    writeln!(
        out,
        "flags       {}",
        if flags.is_empty() { "-" } else { &flags }
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_enumerate(max_genus: u32, format: RecordFormat, out: &Option<PathBuf>) -> Result<ExitCode> {
    let mut sink = output(out)?;
    let mut failure: Option<anyhow::Error> = None;
    match format {
        RecordFormat::Jsonl => {
            enumerate(max_genus, |node| {
                if failure.is_some() {
                    return;
                }
                let res = ReportRecord::new(&node.semigroup)
                    .map_err(anyhow::Error::from)
                    .and_then(|rec| {
                        serde_json::to_writer(&mut sink, &rec)?;
                        sink.write_all(b"\n")?;
                        Ok(())
                    });
                failure = res.err();
            })?;
        }
        RecordFormat::Csv => {
            let mut w = CsvReportWriter::new(&mut sink)?;
            enumerate(max_genus, |node| {
                if failure.is_some() {
                    return;
                }
                let res = ReportRecord::new(&node.semigroup)
                    .map_err(anyhow::Error::from)
                    .and_then(|rec| Ok(w.write(&rec)?));
                failure = res.err();
            })?;
            w.finish()?;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    sink.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn print_counts(counts: &[u64]) -> Result<()> {
    let mut out = io::stdout().lock();
    for (g, n) in counts.iter().enumerate() {
        writeln!(out, "{g}\t{n}")?;
    }
    Ok(())
}

fn cmd_count(max_genus: u32, workers: usize) -> Result<ExitCode> {
    let mut cfg = CampaignConfig::new(max_genus);
    cfg.workers = workers;
    let r = run_campaign(&cfg)?;
    print_counts(&r.tallies.counts)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(max_genus: u32) -> Result<ExitCode> {
    if max_genus > CENSUS_MAX_GENUS {
        bail!("oracle supports --max-genus <= {CENSUS_MAX_GENUS}");
    }
    print_counts(&brute_force_census(max_genus)?)?;
    Ok(ExitCode::SUCCESS)
}

fn config(run: &RunArgs) -> Result<CampaignConfig> {
    let mut cfg = CampaignConfig::new(run.max_genus);
    cfg.workers = run.workers;
    cfg.checkpoint = run.checkpoint.clone();
    cfg.checkpoint_interval = run.checkpoint_interval;
    cfg.stop_after = run.stop_after;
    cfg.record_limit = run.record_limit;
    cfg.roots = run
        .roots
        .iter()
        .map(|r| parse_semigroup(r))
        .collect::<Result<_>>()?;
    Ok(cfg)
}

fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignResult> {
    Ok(campaign::run(cfg)?)
}

fn status_line(r: &CampaignResult) -> String {
    let status = match r.status {
        CampaignStatus::Complete => "complete",
        CampaignStatus::Checkpointed => "checkpointed",
    };
    format!(
        "status {status}; {} semigroups in total, {} visited by this run in {:.2}s",
        r.tallies.total(),
        r.visited,
        r.wall_time_secs
    )
}

fn cmd_verify(run: &RunArgs, laws: &str, out: &Option<PathBuf>) -> Result<ExitCode> {
    let mut cfg = config(run)?;
    cfg.laws = Law::parse_list(laws).map_err(|e| anyhow!(e))?;
    let r = run_campaign(&cfg)?;
    let t = &r.tallies;

    let mut stdout = io::stdout().lock();
    writeln!(
        stdout,
        "{:<28} {:>12} {:>12} {:>10}",
        "law", "holds", "vacuous", "violated"
    )?;
    for lt in &t.laws {
        writeln!(
            stdout,
            "{:<28} {:>12} {:>12} {:>10}",
            lt.law, lt.passed, lt.vacuous, lt.violated
        )?;
    }
    writeln!(stdout, "{}", status_line(&r))?;
    writeln!(stdout, "violations {}", t.violation_count)?;
    if let Some(path) = out {
        let mut sink = output(&Some(path.clone()))?;
        campaign::write_violations(&mut sink, &t.violations)?;
        sink.flush()?;
    } else {
        for v in t.violations.iter().take(10) {
            writeln!(
                stdout,
                "  {} {}: expected {}; observed {}",
                v.law, v.semigroup, v.expected, v.observed
            )?;
        }
    }
    if t.violation_count as usize > t.violations.len() {
        eprintln!(
            "note: {} violation records kept of {}",
            t.violations.len(),
            t.violation_count
        );
    }
    Ok(if t.violation_count == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_hunt(
    run: &RunArgs,
    predicate: &str,
    out: &Option<PathBuf>,
    format: RecordFormat,
) -> Result<ExitCode> {
    let mut cfg = config(run)?;
    cfg.predicate = Some(Predicate::parse(predicate)?);
    let r = run_campaign(&cfg)?;
    let t = &r.tallies;

    let mut sink = output(out)?;
    match format {
        RecordFormat::Jsonl => records::write_jsonl(&mut sink, &t.matches)?,
        RecordFormat::Csv => {
            if !t.matches.is_empty() || out.is_some() {
                records::write_csv(&mut sink, &t.matches)?;
            }
        }
    }
    sink.flush()?;
    eprintln!("{}", status_line(&r));
    eprintln!("matches {}", t.match_count);
    if t.match_count as usize > t.matches.len() {
        eprintln!(
            "note: {} records kept of {}",
            t.matches.len(),
            t.match_count
        );
    }
    Ok(if t.match_count == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Info { notation, format } => cmd_info(&notation, format),
        Command::Enumerate {
            max_genus,
            format,
            out,
        } => cmd_enumerate(max_genus, format, &out),
        Command::Count { max_genus, workers } => cmd_count(max_genus, workers),
        Command::Oracle { max_genus } => cmd_oracle(max_genus),
        Command::Verify { run, laws, out } => cmd_verify(&run, &laws, &out),
        Command::Hunt {
            run,
            predicate,
            out,
            format,
        } => cmd_hunt(&run, &predicate, &out, format),
    }
}

/// Exit status: 0 clean, 1 violations or matches found, 2 any error
/// (clap also exits with 2 on malformed flags).
fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
