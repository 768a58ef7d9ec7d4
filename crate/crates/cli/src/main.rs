//! `weylgrid`: batch runner for the transforms, spectra and verification suites.
//!
//! Exit status: 0 when every asserted check passes, 1 when a check fails (the
//! report is still written), 2 on a usage or input error (nothing is written).

mod emit;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use weylgrid::verify::{
    check_adjointness, check_eq1, check_eq2, converse_check, family_by_name, mollifier_suite, theorem_sweep,
    FamilyMember, Integrability, SuiteConfig, SuiteReport, TestFamily, DEFAULT_P_LIST, DEFAULT_R_LIST, SLACK,
    SWEEP_P_LIST,
};
use weylgrid::{
    fourier_wigner, parse_distribution, parse_exponent, sft_of_distribution, weyl, CompactDistribution, PhaseGrid,
    SchattenReport, SupportBox,
};

use emit::{Artifacts, Format};

/// Smallest grid accepted on the command line.
const MIN_GRID: usize = 64;

#[derive(Parser)]
#[command(name = "weylgrid", version, about = "Weyl transforms, Schatten norms and norm-equivalence checks on a discretized phase space")]
struct Cli {
    /// Points per axis; a power of two, at least 64.
    #[arg(long, global = true, default_value_t = 256)]
    grid_n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_delimiter = ',', default_value = "json,csv")]
    formats: Vec<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Built-in family: F1, F2 or F3.
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,
    /// Distribution document (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one object and dump it.
    Transform {
        object: TransformKind,
        #[command(flatten)]
        source: Source,
        /// Family member, by name; defaults to the first.
        #[arg(long)]
        member: Option<String>,
    },
    /// Singular values and Schatten norms of W(T) for every member.
    Schatten {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', value_parser = parse_p)]
        p: Option<Vec<f64>>,
    },
    /// Run one inequality or identity suite.
    Verify {
        suite: Suite,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', value_parser = parse_p)]
        p: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', value_parser = parse_r)]
        r: Option<Vec<f64>>,
        /// Random samples; defaults to 200 for eq1/eq2 and 100 for adjoint.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Ratios ‖W(T)‖_{S^p} / ‖T̂‖_p against the C_K bounds.
    TheoremSweep {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', value_parser = parse_p)]
        p: Option<Vec<f64>>,
        /// Half-width of the square window box K.
        #[arg(long, default_value_t = 2.5)]
        window: f64,
        #[arg(long, default_value_t = SLACK)]
        slack: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransformKind {
    Weyl,
    Sft,
    Alpha,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Eq1,
    Eq2,
    Adjoint,
    Converse,
    Mollifier,
}

fn parse_p(s: &str) -> Result<f64, String> {
    parse_exponent(s).map_err(|e| e.to_string())
}

fn parse_r(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(r) if r > 1.0 && r.is_finite() => Ok(r),
        _ => Err(format!("mollifier scale must be a finite number above 1, got {s:?}")),
    }
}

/// Usage or input error; maps to exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run<T> = Result<T, UsageError>;

fn integrability_of(t: &CompactDistribution) -> Integrability {
    match t {
        CompactDistribution::Density { .. } => Integrability::Everywhere,
        CompactDistribution::AtomicSum { atoms, .. } if atoms.iter().all(|a| a.order.total() == 0) => Integrability::SupremumOnly,
        CompactDistribution::AtomicSum { .. } => Integrability::Nowhere,
        CompactDistribution::SmoothedAtoms { .. } => Integrability::Everywhere,
    }
}

fn file_family(path: &Path, grid: PhaseGrid) -> Run<TestFamily> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let t = parse_distribution(&text, grid)?;
    let name = path.file_stem().map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(TestFamily {
        name: name.clone(),
        description: format!("distribution read from {}", path.display()),
        k: t.support_box(),
        members: vec![FamilyMember {
            name,
            integrability: integrability_of(&t),
            distribution: t,
        }],
    })
}

fn resolve(source: &Source, grid: PhaseGrid, default: Option<&str>) -> Run<TestFamily> {
    match (&source.input, &source.family, default) {
        (Some(path), _, _) => file_family(path, grid),
        (None, Some(name), _) => Ok(family_by_name(grid, name)?),
        (None, None, Some(name)) => Ok(family_by_name(grid, name)?),
        (None, None, None) => Err(UsageError("give --family or --input".to_string())),
    }
}

#[derive(Serialize)]
struct MemberSpectrum<'a> {
    member: &'a str,
    report: SchattenReport,
}

#[derive(Serialize)]
struct SchattenDoc<'a> {
    source: &'a str,
    grid_n: usize,
    members: Vec<MemberSpectrum<'a>>,
}

#[derive(Serialize)]
struct SchattenRow<'a> {
    member: &'a str,
    p: String,
    norm: f64,
    numerical_rank: usize,
}

fn run_schatten(cli: &Cli, source: &Source, p: &[f64]) -> Run<Artifacts> {
    let grid = PhaseGrid::new(cli.grid_n)?;
    let fam = resolve(source, grid, None)?;
    let mut members = Vec::new();
    for m in &fam.members {
        let w = weyl(&m.distribution, grid)?;
        members.push(MemberSpectrum {
            member: &m.name,
            report: SchattenReport::new(&w, p)?,
        });
    }
    let rows: Vec<SchattenRow> = members
        .iter()
        .flat_map(|m| {
            m.report.norms.iter().map(|(p, norm)| SchattenRow {
                member: m.member,
                p: p.clone(),
                norm: *norm,
                numerical_rank: m.report.numerical_rank,
            })
        })
        .collect();
    let curves: Vec<(String, Vec<f64>)> = members.iter().map(|m| (m.member.to_string(), m.report.singular_values.clone())).collect();
    let doc = SchattenDoc {
        source: &fam.name,
        grid_n: grid.n(),
        members,
    };
    let mut a = Artifacts::new(cli, "schatten", &fam.name, emit::json(&doc), true);
    a.csv = Some(emit::csv_of(&rows)?);
    a.plots.push(plot::Plot::SingularValues { title: format!("singular values of W(T), {}", fam.name), curves });
    Ok(a)
}

fn run_transform(cli: &Cli, object: TransformKind, source: &Source, member: Option<&str>) -> Run<Artifacts> {
    let grid = PhaseGrid::new(cli.grid_n)?;
    let fam = resolve(source, grid, None)?;
    let m = match member {
        Some(name) => fam
            .members
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| UsageError(format!("family {} has no member {name:?}", fam.name)))?,
        None => &fam.members[0],
    };
    let (label, dump) = match object {
        TransformKind::Weyl => {
            let w = weyl(&m.distribution, grid)?;
            ("transform-weyl", emit::Dump::operator(&m.name, &w)?)
        }
        TransformKind::Sft => ("transform-sft", emit::Dump::function("sft", &m.name, &sft_of_distribution(&m.distribution, grid)?)),
        TransformKind::Alpha => {
            let w = weyl(&m.distribution, grid)?;
            ("transform-alpha", emit::Dump::function("alpha", &m.name, &fourier_wigner(&w)))
        }
    };
    let curves = dump.singular_values.clone().map(|s| vec![(m.name.clone(), s)]);
    let mut a = Artifacts::new(cli, label, &fam.name, emit::json(&dump), true);
    a.csv = Some(dump.csv()?);
    if let Some(curves) = curves {
        a.plots.push(plot::Plot::SingularValues { title: format!("singular values of W({})", m.name), curves });
    }
    Ok(a)
}

fn run_verify(cli: &Cli, suite: Suite, source: &Source, p: Option<Vec<f64>>, r: Option<Vec<f64>>, samples: Option<usize>) -> Run<Artifacts> {
    let grid = PhaseGrid::new(cli.grid_n)?;
    let mut cfg = SuiteConfig::new(grid, cli.seed);
    cfg.p_list = p.unwrap_or_else(|| DEFAULT_P_LIST.to_vec());
    cfg.r_list = r.unwrap_or_else(|| DEFAULT_R_LIST.to_vec());
    let (name, label, report): (&str, String, SuiteReport) = match suite {
        Suite::Eq1 => ("verify-eq1", "random".into(), check_eq1(&cfg.with_samples(samples.unwrap_or(200)))?),
        Suite::Eq2 => ("verify-eq2", "random".into(), check_eq2(&cfg.with_samples(samples.unwrap_or(200)))?),
        Suite::Adjoint => {
            let fam = resolve(source, grid, Some("F1"))?;
            ("verify-adjoint", fam.name.clone(), check_adjointness(&cfg.with_samples(samples.unwrap_or(100)), &fam)?)
        }
        Suite::Converse => {
            let fam = resolve(source, grid, Some("F1"))?;
            ("verify-converse", fam.name.clone(), converse_check(&cfg, &fam)?)
        }
        Suite::Mollifier => {
            if source.family.is_some() || source.input.is_some() {
                let fam = resolve(source, grid, None)?;
                ("verify-mollifier", fam.name.clone(), mollifier_suite(&cfg, &[&fam])?)
            } else {
                let (f1, f2) = (family_by_name(grid, "F1")?, family_by_name(grid, "F2")?);
                ("verify-mollifier", "F1-F2".into(), mollifier_suite(&cfg, &[&f1, &f2])?)
            }
        }
    };
    let mut a = Artifacts::new(cli, name, &label, report.to_json(), report.pass);
    a.csv = Some(emit::csv_of(&report.csv_rows())?);
    a.summary = format!("{}: {} checks, {} violations", report.suite, report.records.len(), report.violations);
    Ok(a)
}

#[derive(Serialize)]
struct SweepRow<'a> {
    family: &'a str,
    member: &'a str,
    member_index: usize,
    p: &'a str,
    transform_norm: f64,
    schatten_norm: f64,
    ratio: f64,
    asserted: bool,
    pass: bool,
}

fn run_sweep(cli: &Cli, source: &Source, p: &[f64], window: f64, slack: f64) -> Run<Artifacts> {
    if !(window > 0.0 && window.is_finite()) || !(slack >= 0.0 && slack.is_finite()) {
        return Err(UsageError(format!("bad window {window} or slack {slack}")));
    }
    let grid = PhaseGrid::new(cli.grid_n)?;
    let fam = resolve(source, grid, None)?;
    let k = SupportBox::square(window);
    if let Some(m) = fam.members.iter().find(|m| !k.contains_box(&m.distribution.support_box())) {
        return Err(UsageError(format!("member {} is not supported inside the window box {k}", m.name)));
    }
    let s = theorem_sweep(&fam, grid, p, slack, k)?;
    let rows: Vec<SweepRow> = s
        .cells
        .iter()
        .map(|c| SweepRow {
            family: &s.family,
            member: &c.member,
            member_index: c.member_index,
            p: &c.p,
            transform_norm: c.transform_norm,
            schatten_norm: c.schatten_norm,
            ratio: c.ratio,
            asserted: c.asserted,
            pass: c.pass,
        })
        .collect();
    let mut a = Artifacts::new(cli, "theorem-sweep", &fam.name, s.to_json(), s.pass);
    a.csv = Some(emit::csv_of(&rows)?);
    a.summary = format!(
        "{}: C_K = {:.6e}, asserted ratios in [{:.4}, {:.4}], {} of {} cells asserted",
        s.family,
        s.c_k,
        s.min_ratio,
        s.max_ratio,
        s.cells.iter().filter(|c| c.asserted).count(),
        s.cells.len()
    );
    let labels: Vec<String> = p.iter().map(|&x| weylgrid::format_exponent(x)).collect();
    let series = fam
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.clone(), s.cells.iter().filter(|c| c.member_index == i).map(|c| c.ratio).collect()))
        .collect();
    a.plots.push(plot::Plot::Ratios { title: format!("norm ratio vs p, {}", fam.name), labels, series });
    let mut curves = Vec::new();
    for m in &fam.members {
        let w = weyl(&m.distribution, grid)?;
        curves.push((m.name.clone(), weylgrid::singular_values(&w)?.to_vec()));
    }
    a.plots.push(plot::Plot::SingularValues { title: format!("singular values of W(T), {}", fam.name), curves });
    Ok(a)
}

fn configure_threads() -> Run<()> {
    let threads = match std::env::var("WEYLGRID_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| UsageError(format!("WEYLGRID_THREADS must be a count, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Run<Artifacts> {
    configure_threads()?;
    if cli.grid_n < MIN_GRID {
        return Err(UsageError(format!("--grid-n must be at least {MIN_GRID}, got {}", cli.grid_n)));
    }
    if cli.formats.is_empty() {
        return Err(UsageError("--formats is empty".to_string()));
    }
    match &cli.command {
        Command::Transform { object, source, member } => run_transform(cli, *object, source, member.as_deref()),
        Command::Schatten { source, p } => run_schatten(cli, source, p.as_deref().unwrap_or(&DEFAULT_P_LIST)),
        Command::Verify { suite, source, p, r, samples } => run_verify(cli, *suite, source, p.clone(), r.clone(), *samples),
        Command::TheoremSweep { source, p, window, slack } => run_sweep(cli, source, p.as_deref().unwrap_or(&SWEEP_P_LIST), *window, *slack),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let artifacts = match run(&cli) {
        Ok(a) => a,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match artifacts.write(&cli.out, &cli.formats) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if !artifacts.summary.is_empty() {
        println!("{}", artifacts.summary);
    }
    if artifacts.pass {
        println!("PASS");
        ExitCode::SUCCESS
    } else {
        println!("FAIL");
        ExitCode::from(1)
    }
}
