//! Command line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::enumeration::{moment_ratio_from_counts, theta0_count, theta_k_bruteforce};
use crate::error::{Error, Result};
use crate::experiments::{
    exact_density, run_density, run_j_distribution, run_loop_law, run_moment_table, run_subword_uniformity,
    DensityReport, ExperimentConfig, JDistributionReport, LoopLawReport, MomentRow, SubwordReport,
};
use crate::graph::MultiGraph;
use crate::map::build_map_from_word;
use crate::quadrant::{exact_dp, exact_dp_rational, monte_carlo_time_histogram, tail_report};
use crate::sampler::{RandomSource, ThetaKSampler};
use crate::sandpile::{densities, enumerate_recurrent, level_generating_function};
use crate::stats::rational_to_f64;
use crate::table::{Column, Table};
use crate::tutte::{excess_counts, tutte, tutte_eval_1_y};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "burgers", version, about = "Hamburger-cheeseburger words, maps, sandpiles and loops")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sandpile edge and vertex densities on random maps.
    Density(DensityArgs),
    /// Loop length and area against the quadrant exit law.
    LoopLaw(LoopLawArgs),
    /// Table of |Θ^k_n| / (n^k |Θ⁰_n|).
    Moments(MomentArgs),
    /// Letter statistics of short windows of random words.
    Subwords(SubwordArgs),
    /// Hamburger counts of random words.
    Jdist(JdistArgs),
    /// Exact counts of perfect words.
    Enumerate(EnumerateArgs),
    /// Uniform random perfect words, one per line.
    SampleWord(SampleWordArgs),
    /// Map encoded by a word, as JSON.
    BuildMap(BuildMapArgs),
    /// Recurrent sandpiles on a graph file.
    Sandpile(SandpileArgs),
    /// Tutte polynomial of a graph file.
    Tutte(TutteArgs),
    /// Exit law of the walk from (1, 1) in the quadrant.
    Quadrant(QuadrantArgs),
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
    /// Average over every word instead of sampling.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct LoopLawArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5, 6])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2])]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
    /// Orders up to this are counted exactly.
    #[arg(long, default_value_t = 6)]
    pub exact_max_n: usize,
}

#[derive(Debug, Args)]
pub struct SubwordArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct JdistArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Every order up to n and every k' up to k.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct SampleWordArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct BuildMapArgs {
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["enumerate", "densities", "gf"])))]
pub struct SandpileArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long)]
    pub densities: bool,
    #[arg(long)]
    pub gf: bool,
}

#[derive(Debug, Args)]
pub struct TutteArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, conflicts_with = "excess")]
    pub at_1_y: bool,
    #[arg(long)]
    pub excess: bool,
}

#[derive(Debug, Args)]
pub struct QuadrantArgs {
    #[arg(long)]
    pub tmax: usize,
    /// Also simulate this many walks.
    #[arg(long)]
    pub mc: Option<u64>,
    /// Exact integer recursion instead of floating point.
    #[arg(long)]
    pub exact: bool,
}

/// What a command produced.
pub enum Report {
    Table { table: Table, json: serde_json::Value },
    Json(serde_json::Value),
    Lines(Vec<String>),
}

fn both<T: Serialize>(table: Table, report: &T) -> Result<Report> {
    Ok(Report::Table { table, json: serde_json::to_value(report)? })
}

fn metric_table(rows: &[(&str, f64, Option<f64>)]) -> Table {
    let mut t = Table::new(&[("metric", Column::Text), ("value", Column::Number), ("std_err", Column::OptionalNumber)]);
    for &(name, v, se) in rows {
        t.push([name.to_string(), v.to_string(), se.map(|x| x.to_string()).unwrap_or_default()]);
    }
    t
}

fn density_table(r: &DensityReport) -> Table {
    metric_table(&[
        ("p", r.p.value, Some(r.p.std_err)),
        ("p2", r.p2.value, Some(r.p2.std_err)),
        ("mean_level", r.mean_level.value, Some(r.mean_level.std_err)),
        ("rho_e", r.rho_e.value, Some(r.rho_e.std_err)),
        ("edge_vertex_ratio", r.edge_vertex_ratio.mean, Some(r.edge_vertex_ratio.std_err)),
        ("rho_v", r.rho_v.value, Some(r.rho_v.std_err)),
        ("moment_ratio_1", r.moment_ratio_1.value, Some(r.moment_ratio_1.std_err)),
        ("moment_ratio_2", r.moment_ratio_2.value, Some(r.moment_ratio_2.std_err)),
        ("level_variance_over_n2", r.level_variance_over_n2, None),
    ])
}

fn loop_table(r: &LoopLawReport) -> Table {
    let mut rows = vec![
        ("loops", r.loops as f64, None),
        ("proposals", r.proposals as f64, None),
        ("geometry_checked", r.geometry_checked as f64, None),
        ("geometry_mismatches", r.geometry_mismatches as f64, None),
        ("p_length_1", r.p_length_1, None),
        ("quad_s_1", r.quad_s_1, None),
        ("p_area_1", r.p_area_1, None),
        ("quad_t_1", r.quad_t_1, None),
        ("window_tv", r.window_tv, None),
        ("alternating_fraction", r.alternating_fraction, None),
    ];
    if let Some(c) = r.length_correlation {
        rows.push(("length_correlation", c, None));
    }
    metric_table(&rows)
}

fn moment_table(rows: &[MomentRow]) -> Table {
    let mut t = Table::new(&[
        ("n", Column::Number),
        ("k", Column::Number),
        ("mode", Column::Text),
        ("value", Column::Number),
        ("std_err", Column::Number),
        ("exact", Column::Text),
        ("target", Column::Number),
    ]);
    for r in rows {
        t.push([
            r.n.to_string(),
            r.k.to_string(),
            r.mode.to_string(),
            r.value.to_string(),
            r.std_err.to_string(),
            r.exact.clone().unwrap_or_else(|| "-".into()),
            r.target.to_string(),
        ]);
    }
    t
}

fn subword_table(r: &SubwordReport) -> Table {
    metric_table(&[
        ("letter_tv", r.letter_tv, None),
        ("letter_chi_square", r.letter_chi_square.statistic, None),
        ("letter_p_value", r.letter_chi_square.p_value, None),
        ("bigram_tv", r.bigram_tv, None),
        ("bigram_chi_square", r.bigram_chi_square.statistic, None),
        ("bigram_p_value", r.bigram_chi_square.p_value, None),
        ("short_windows", r.short as f64, None),
    ])
}

fn jdist_table(r: &JDistributionReport) -> Table {
    let mut t = Table::new(&[("j", Column::Text), ("count", Column::Number)]);
    for (j, c) in r.histogram.iter().enumerate().filter(|x| *x.1 > 0) {
        t.push([j.to_string(), c.to_string()]);
    }
    t.push(["ratio_moment_1".to_string(), r.ratio_moment_1.mean.to_string()]);
    t.push(["ratio_moment_2".to_string(), r.ratio_moment_2.mean.to_string()]);
    if let Some(c) = r.chi_square {
        t.push(["chi_square_p_value".to_string(), c.p_value.to_string()]);
    }
    t
}

fn read_graph(path: &PathBuf) -> Result<MultiGraph> {
    fs::read_to_string(path)?.parse()
}

fn cfg(cli: &Cli, n: usize, k: usize, samples: u64) -> ExperimentConfig {
    ExperimentConfig::new(n, k, samples, cli.seed, cli.workers)
}

/// Runs one parsed command line.
pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Density(a) if a.exact => {
            let r = exact_density(a.n)?;
            let t = metric_table(&[
                ("mean_level", rational_to_f64(&r.mean_level), None),
                ("rho_e", rational_to_f64(&r.rho_e), None),
                ("rho_v", rational_to_f64(&r.rho_v), None),
                ("level_from_counts", rational_to_f64(&r.level_from_counts), None),
            ]);
            both(t, &r)
        }
        Command::Density(a) => {
            let r = run_density(&cfg(cli, a.n, 0, a.trials))?;
            both(density_table(&r), &r)
        }
        Command::LoopLaw(a) => {
            let r = run_loop_law(&cfg(cli, a.n, a.k, a.samples))?;
            both(loop_table(&r), &r)
        }
        Command::Moments(a) => {
            let rows = run_moment_table(&a.n, &a.k, a.exact_max_n, a.trials, cli.seed, cli.workers)?;
            both(moment_table(&rows), &rows)
        }
        Command::Subwords(a) => {
            let r = run_subword_uniformity(&cfg(cli, a.n, 1, a.trials), a.s)?;
            both(subword_table(&r), &r)
        }
        Command::Jdist(a) => {
            let r = run_j_distribution(&cfg(cli, a.n, 0, a.trials))?;
            both(jdist_table(&r), &r)
        }
        Command::Enumerate(a) => {
            let mut t = Table::new(&[
                ("n", Column::Number),
                ("k", Column::Number),
                ("count", Column::Number),
                ("ratio", Column::Text),
            ]);
            let mut rows = Vec::new();
            let ns: Vec<usize> = if a.table { (1..=a.n).collect() } else { vec![a.n] };
            let ks: Vec<usize> = if a.table { (0..=a.k).collect() } else { vec![a.k] };
            for &n in &ns {
                let zero = theta0_count(n as u64);
                for &k in &ks {
                    let count = if k == 0 { zero.clone() } else { theta_k_bruteforce(n, k)? };
                    let ratio = moment_ratio_from_counts(n as u64, k as u32, &count, &zero);
                    t.push([n.to_string(), k.to_string(), count.to_string(), ratio.to_string()]);
                    rows.push(json!({"n": n, "k": k, "count": count.to_string(), "ratio": ratio.to_string()}));
                }
            }
            Ok(Report::Table { table: t, json: serde_json::Value::Array(rows) })
        }
        Command::SampleWord(a) => {
            let mut rng = RandomSource::new(cli.seed);
            let mut sampler = ThetaKSampler::new(a.n, a.k)?;
            let lines = (0..a.count)
                .map(|_| sampler.sample(&mut rng).map(|w| w.to_string()))
                .collect::<Result<_>>()?;
            Ok(Report::Lines(lines))
        }
        Command::BuildMap(a) => {
            let word: Word = a.word.parse()?;
            Ok(Report::Json(serde_json::to_value(build_map_from_word(&word)?.to_json())?))
        }
        Command::Sandpile(a) => {
            let g = read_graph(&a.graph)?;
            let v = if a.enumerate {
                let rec = enumerate_recurrent(&g)?;
                json!({
                    "sink": g.sink(),
                    "recurrent": rec.iter().map(|(c, l)| json!({"grains": c.grains(), "level": l})).collect::<Vec<_>>(),
                })
            } else if a.densities {
                serde_json::to_value(densities(&g)?)?
            } else {
                json!({"level_generating_function": level_generating_function(&g)?})
            };
            Ok(Report::Json(v))
        }
        Command::Tutte(a) => {
            let g = read_graph(&a.graph)?;
            let v = if a.at_1_y {
                json!({"t_1_y": tutte_eval_1_y(&g)?})
            } else if a.excess {
                json!({"excess": excess_counts(&g)?})
            } else {
                json!({"coefficients": tutte(&g)?.coeffs()})
            };
            Ok(Report::Json(v))
        }
        Command::Quadrant(a) => quadrant_report(cli, a),
    }
}

fn quadrant_report(cli: &Cli, a: &QuadrantArgs) -> Result<Report> {
    let mut t = Table::new(&[("t", Column::Text), ("s", Column::OptionalNumber), ("prob", Column::Number)]);
    let mut pmf = Vec::new();
    let survival;
    let mut tails = None;
    if a.exact {
        let d = exact_dp_rational(a.tmax)?;
        if !d.conserves_mass() {
            return Err(Error::Invariant("exact recursion lost mass".into()));
        }
        for tt in 1..=a.tmax {
            for s in 1..=tt + 1 {
                let p = d.prob(tt, s);
                if p > 0.0 {
                    pmf.push((tt, s, p));
                }
            }
        }
        survival = d.survival();
    } else {
        let d = exact_dp(a.tmax)?;
        pmf = d.entries();
        survival = d.survival();
        tails = Some(tail_report(&d));
    }
    for &(tt, s, p) in &pmf {
        t.push([tt.to_string(), s.to_string(), p.to_string()]);
    }
    t.push(["survival".to_string(), String::new(), survival.to_string()]);
    if let Some(r) = &tails {
        for row in &r.time {
            t.push(["time_tail".to_string(), row.j.to_string(), row.scaled_tail.to_string()]);
        }
        for row in &r.distance {
            t.push(["distance_tail".to_string(), row.l.to_string(), row.scaled_tail.to_string()]);
        }
    }
    let mut mc = None;
    if let Some(samples) = a.mc {
        let hist = monte_carlo_time_histogram(samples, a.tmax, cli.seed, cli.workers);
        for (tt, &c) in hist.iter().enumerate().skip(1).take(a.tmax) {
            t.push(["mc_time".to_string(), tt.to_string(), (c as f64 / samples as f64).to_string()]);
        }
        mc = Some(hist);
    }
    let json = json!({
        "t_max": a.tmax,
        "pmf": pmf,
        "survival": survival,
        "tails": tails,
        "monte_carlo_time_histogram": mc,
    });
    Ok(Report::Table { table: t, json })
}

/// Writes a report in the requested format.
pub fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match (report, cli.format) {
        (Report::Table { table, .. }, Format::Csv) => table.write_csv(&mut out)?,
        (Report::Table { json, .. }, Format::Json) | (Report::Json(json), _) => {
            serde_json::to_writer_pretty(&mut out, json)?;
            writeln!(out)?;
        }
        (Report::Lines(lines), _) => {
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|r| emit(&cli, &r)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
