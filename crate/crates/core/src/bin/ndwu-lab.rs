use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ndwu_core::boxes::{named_box, JointOrder};
use ndwu_core::campaign::{
    quantum_criterion_fuzz, symmetry_fuzz, theorem1_fuzz, tsirelson_ndwu, TsirelsonConfig,
};
use ndwu_core::criteria::{
    boundary_bisect, npa_tlm, npa_tlm_value, sweep_grid, write_bisection_csv, Axis, GridSpec, NpaFamilyForm,
};
use ndwu_core::quantum::TwoQubitSetup;
use ndwu_core::reproduce::{AqcReport, Table1};
use ndwu_core::{Behavior, Criterion, Error, DEFAULT_TOL};

#[derive(Parser)]
#[command(
    name = "ndwu-lab",
    version,
    about = "Uncertainty/disturbance criterion toolkit for two-party boxes"
)]
struct Cli {
    /// Validation tolerance for probabilities and normalization.
    #[arg(long, global = true, env = "NDWU_LAB_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the criterion on a behavior JSON file.
    Check { file: PathBuf },
    /// Evaluate the almost-quantum point.
    Aqc {
        #[arg(long)]
        swap_joint_order: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate criteria on a grid over the family simplex and write CSV.
    Sweep {
        /// Axis as a fixed value `v` or a range `lo:hi:n`.
        #[arg(long, default_value = "0:1:101")]
        alpha: String,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value = "0:1:101")]
        tau: String,
        /// Comma-separated criterion names, or `all`.
        #[arg(long, default_value = "all")]
        criteria: String,
        /// Use the printed form of the closed-form arcsine boundary.
        #[arg(long)]
        printed_npa_denominator: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate the verdict change of a criterion along rays.
    Bisect {
        #[arg(long)]
        criterion: String,
        /// Ray origin `α,β,τ`.
        #[arg(long, default_value = "0,0,0")]
        origin: String,
        /// Ray direction `dα,dβ,dτ`; repeat for several rays.
        #[arg(long, required = true)]
        direction: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        bisect_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded verification campaign.
    Verify {
        kind: VerifyKind,
        #[arg(long)]
        trials: Option<u64>,
        /// Comma-separated Hilbert space dimensions.
        #[arg(long, default_value = "2,3,4,5")]
        dims: String,
        #[arg(long)]
        seed: u64,
    },
    /// Recompute the criteria comparison table.
    Table1 {
        #[arg(long)]
        seed: u64,
        /// Polytope samples per column for the Tsirelson row.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Print a named box as behavior JSON.
    EmitBox {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Theorem1,
    Symmetry,
    Tsirelson,
    QuantumCriterion,
}

/// Failure of a run: `Input` exits with 1, `Failed` with 2.
enum Failure {
    Input(Error),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::AssertionFailed(_) | Error::ReferenceMismatch { .. } => Failure::Failed(e.to_string()),
            e => Failure::Input(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Run = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        Err(Failure::Input(Error::InvalidConfig(format!(
            "tolerance must be positive, got {}",
            cli.tol
        ))))
    } else {
        run(cli)
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Check { file } => check(&file, cli.tol),
        Command::Aqc {
            swap_joint_order,
            json,
        } => aqc(swap_joint_order, json),
        Command::Sweep {
            alpha,
            beta,
            tau,
            criteria,
            printed_npa_denominator,
            out,
        } => sweep(&alpha, &beta, &tau, &criteria, printed_npa_denominator, &out),
        Command::Bisect {
            criterion,
            origin,
            direction,
            bisect_tol,
            out,
        } => bisect(&criterion, &origin, &direction, bisect_tol, out.as_deref()),
        Command::Verify {
            kind,
            trials,
            dims,
            seed,
        } => verify(kind, trials, &dims, seed),
        Command::Table1 { seed, samples } => table1(samples, seed),
        Command::EmitBox { name, out } => {
            let json = named_box(&name)?.to_json_string();
            emit(out.as_deref(), &json)?;
            Ok(true)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")),
        None => writeln!(io::stdout().lock(), "{text}"),
    }
}

fn check(file: &Path, tol: f64) -> Run {
    let text = fs::read_to_string(file)?;
    let b = Behavior::from_json_str(&text, tol)?;
    let report = ndwu_core::criterion(&b);
    let doc = json!({
        "criterion": report,
        "chsh": b.chsh(),
        "npa_tlm": { "satisfied": npa_tlm(&b), "value": npa_tlm_value(&b) },
    });
    println!("{}", serde_json::to_string_pretty(&doc).map_err(Error::from)?);
    Ok(report.overall)
}

fn aqc(swap: bool, as_json: bool) -> Run {
    let order = if swap {
        JointOrder::Swapped
    } else {
        JointOrder::AsListed
    };
    let r = AqcReport::compute(order);
    if as_json {
        println!("{}", r.to_json_string());
    } else {
        println!("joint order: {}", if swap { "swapped" } else { "as listed" });
        println!("max_lhs = {:.17}", r.max_lhs);
        println!("min_rhs = {:.17}", r.min_rhs);
        println!(
            "max_lhs≈{:.2}, min_rhs≈{:.2}, {}",
            r.max_lhs_rounded,
            r.min_rhs_rounded,
            if r.ndwu_violated { "VIOLATED" } else { "SATISFIED" }
        );
        println!(
            "npa_tlm: {}",
            if r.npa_satisfied { "satisfied" } else { "violated" }
        );
        println!("ic: {}", if r.ic_satisfied { "satisfied" } else { "violated" });
    }
    if swap {
        if let Err(e) = r.check_reference() {
            eprintln!("note: swapped order does not reproduce the reference values: {e}");
        }
        return Ok(true);
    }
    r.check_reference()?;
    Ok(true)
}

fn parse_axis(name: &str, text: &str) -> Result<Axis, Error> {
    let bad = || Error::InvalidGrid(format!("{name} axis \"{text}\": expected v or lo:hi:n"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::Fixed(v.trim().parse().map_err(|_| bad())?)),
        [lo, hi, n] => Ok(Axis::Range {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            n: n.trim().parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn parse_criteria(text: &str, printed_npa: bool) -> Result<Vec<Criterion>, Error> {
    let list = if text.trim() == "all" {
        Criterion::ALL.to_vec()
    } else {
        text.split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<Criterion>, _>>()?
    };
    Ok(list
        .into_iter()
        .map(|c| match c {
            Criterion::NpaFamily(_) if printed_npa => Criterion::NpaFamily(NpaFamilyForm::Printed),
            c => c,
        })
        .fold(Vec::new(), |mut acc, c| {
            if !acc.contains(&c) {
                acc.push(c);
            }
            acc
        }))
}

fn sweep(alpha: &str, beta: &str, tau: &str, criteria: &str, printed_npa: bool, out: &Path) -> Run {
    let grid = GridSpec {
        alpha: parse_axis("alpha", alpha)?,
        beta: parse_axis("beta", beta)?,
        tau: parse_axis("tau", tau)?,
    };
    let criteria = parse_criteria(criteria, printed_npa)?;
    let data = sweep_grid(&criteria, &grid)?;
    let file = io::BufWriter::new(fs::File::create(out)?);
    data.write_csv(file)?;
    eprintln!("wrote {} rows to {}", data.rows.len(), out.display());
    Ok(true)
}

fn parse_triple(text: &str) -> Result<[f64; 3], Error> {
    let bad = || Error::InvalidConfig(format!("expected three comma-separated numbers, got \"{text}\""));
    let v = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into().map_err(|_| bad())
}

fn bisect(criterion: &str, origin: &str, directions: &[String], tol: f64, out: Option<&Path>) -> Run {
    let c: Criterion = criterion.parse()?;
    let origin = parse_triple(origin)?;
    let mut results = Vec::new();
    for (id, d) in directions.iter().enumerate() {
        let t = boundary_bisect(|p| c.verdict(p), origin, parse_triple(d)?, tol)?;
        results.push((id, t));
    }
    let mut buf = Vec::new();
    write_bisection_csv(&results, &mut buf)?;
    match out {
        Some(path) => fs::write(path, buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(true)
}

fn parse_dims(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad dimension list \"{text}\"")))
        })
        .collect()
}

fn verify(kind: VerifyKind, trials: Option<u64>, dims: &str, seed: u64) -> Run {
    let dims = parse_dims(dims)?;
    let (doc, passed) = match kind {
        VerifyKind::Theorem1 => {
            let s = theorem1_fuzz(trials.unwrap_or(100_000), &dims, seed)?;
            (serde_json::to_value(&s), s.passed())
        }
        VerifyKind::Symmetry => {
            let s = symmetry_fuzz(trials.unwrap_or(10_000), &dims, seed)?;
            (serde_json::to_value(&s), s.passed())
        }
        VerifyKind::QuantumCriterion => {
            let s = quantum_criterion_fuzz(trials.unwrap_or(10_000), seed)?;
            (serde_json::to_value(&s), s.passed())
        }
        VerifyKind::Tsirelson => {
            let s = tsirelson_ndwu(TsirelsonConfig::new(trials.unwrap_or(100_000), seed))?;
            let singlet = TwoQubitSetup::tsirelson().behavior()?;
            let chsh = singlet.chsh();
            let doc = json!({
                "search": s,
                "singlet_chsh": chsh,
                "singlet_criterion": ndwu_core::criterion(&singlet).overall,
            });
            (Ok(doc), s.passed())
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&doc.map_err(Error::from)?).map_err(Error::from)?
    );
    Ok(passed)
}

fn table1(samples: u64, seed: u64) -> Run {
    let table = Table1::compute(samples, seed)?;
    print!("{table}");
    for cell in &table.cells {
        eprintln!("{:?}/{:?}: {}", cell.row, cell.column, cell.detail);
    }
    table.verify_against_reference()?;
    Ok(true)
}
