//! Command-line front end: suite runner, Koszul inspector and degree
//! calculator over the library.

use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::process::ExitCode;

use isotower::harness::{self, Status, SuiteConfig};
use isotower::{facial, ktheory};

#[derive(Parser)]
#[command(name = "isotower", about = "Verification suites for the isometry tower")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        /// Suite name: calculus | facial | ndr | tower | miller | ktheory | all.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance overrides, name=value; repeatable.
        #[arg(long = "tol")]
        tol: Vec<String>,
        /// Restrict the ktheory suite to one group, e.g. "6" or "2x2".
        #[arg(long)]
        group: Option<String>,
        /// Config file (JSON mirroring the flags); flags win.
        #[arg(long)]
        config: Option<String>,
        /// Output path for the JSON report.
        #[arg(long)]
        out: Option<String>,
    },
    /// Build the Koszul complex attached to a pair of representations.
    Koszul {
        /// Cyclic factors, e.g. "2x3" for ℤ/2×ℤ/3 or "1" for the trivial group.
        #[arg(long)]
        group: String,
        /// Characters of V₀: comma-separated exponent tuples joined by '+',
        /// e.g. "1,0+0,2" over 2x3 or "1+0" over a single factor.
        #[arg(long)]
        v0: String,
        #[arg(long)]
        v1: String,
    },
    /// Winding-number degree of a builtin map.
    Degree {
        /// identity | reflection | chi-g | ndr-e | lift-g | lift-fbar.
        #[arg(long)]
        map: String,
    },
}

fn parse_group(s: &str) -> Result<ktheory::GroupSpec, String> {
    if s == "1" || s.is_empty() {
        return Ok(ktheory::GroupSpec::trivial());
    }
    let orders: Result<Vec<u32>, _> = s.split('x').map(|p| p.trim().parse::<u32>()).collect();
    let orders = orders.map_err(|e| format!("bad group spec '{s}': {e}"))?;
    ktheory::GroupSpec::new(orders).map_err(|e| e.to_string())
}

fn parse_rep(group: &ktheory::GroupSpec, s: &str) -> Result<ktheory::Representation, String> {
    let mut chars = Vec::new();
    if !s.trim().is_empty() && s.trim() != "0dim" {
        for part in s.split('+') {
            let tuple: Result<Vec<u32>, _> =
                part.split(',').map(|p| p.trim().parse::<u32>()).collect();
            let tuple = tuple.map_err(|e| format!("bad character '{part}': {e}"))?;
            if tuple.len() != group.orders.len() {
                return Err(format!(
                    "character '{part}' has {} components, group has {}",
                    tuple.len(),
                    group.orders.len()
                ));
            }
            chars.push(group.rank(&tuple));
        }
    }
    ktheory::Representation::new(group, chars).map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    suite: String,
    d0: Option<usize>,
    d1: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    tol: Vec<String>,
    group: Option<String>,
    config: Option<String>,
    out: Option<String>,
) -> Result<ExitCode, String> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| format!("bad config {path}: {e}"))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(v) = d0 {
        cfg.d0 = v;
    }
    if let Some(v) = d1 {
        cfg.d1 = v;
    }
    if let Some(v) = trials {
        cfg.trials = v;
    }
    if let Some(v) = seed {
        cfg.seed = v;
    }
    if let Some(g) = group {
        cfg.group = Some(parse_group(&g)?);
    }
    let mut overrides = BTreeMap::new();
    for t in tol {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| format!("tolerance override '{t}' is not name=value"))?;
        let value: f64 = value.parse().map_err(|e| format!("bad tolerance '{t}': {e}"))?;
        overrides.insert(name.to_string(), value);
    }
    cfg.tol.extend(overrides);

    let report = harness::run_suite(&suite, &cfg).map_err(|e| e.to_string())?;
    for check in &report.checks {
        let tag = match check.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        match &check.witness {
            Some(w) => println!("[{tag}] {} — {w}", check.id),
            None => println!("[{tag}] {}", check.id),
        }
    }
    println!(
        "suite {}: {} pass, {} fail, {} skip",
        report.suite, report.summary.pass, report.summary.fail, report.summary.skip
    );
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    if let Some(path) = out {
        std::fs::write(&path, &json).map_err(|e| format!("cannot write {path}: {e}"))?;
        println!("report written to {path}");
    }
    Ok(if report.summary.fail == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_koszul(group: String, v0: String, v1: String) -> Result<ExitCode, String> {
    let group = parse_group(&group)?;
    let v0 = parse_rep(&group, &v0)?;
    let v1 = parse_rep(&group, &v1)?;
    let (complex, report) = harness::cmd_koszul(&group, &v0, &v1).map_err(|e| e.to_string())?;
    println!("group ℤ/{:?}, dim V0 = {}, dim V1 = {}", group.orders, v0.dim(), v1.dim());
    for (j, x) in report.xs.iter().enumerate() {
        println!("x_{j} = residue(T^{j}) = {x}");
    }
    for (i, d) in complex.differentials.iter().enumerate() {
        println!("d_{} matrix ({}×{}):", i + 1, d.len(), d.first().map_or(0, |r| r.len()));
        for row in d {
            let cells: Vec<String> = row.iter().map(|e| format!("{e}")).collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    println!("d² = 0: {}", report.d_squared_zero);
    println!("all differentials zero: {}", report.all_zero);
    println!("V0 ≤ V1: {}", report.subrep);
    println!("vanishing ⟺ subrepresentation: {}", report.consistent);
    println!("{}", serde_json::to_string_pretty(&complex).map_err(|e| e.to_string())?);
    Ok(if report.consistent { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_degree(map: String) -> Result<ExitCode, String> {
    let result = match map.as_str() {
        "identity" => facial::degree_on_diagonal(&facial::builtin::identity()),
        "reflection" => facial::degree_on_diagonal(&facial::builtin::reflection()),
        "chi-g" => facial::degree_on_diagonal(&facial::builtin::chi_g()),
        "ndr-e" => facial::degree_on_diagonal(&facial::builtin::ndr_e()),
        "lift-g" => {
            let (name, f) = facial::builtin::lift_g_plane();
            facial::degree_on_plane(name, f, (0.3, -0.2), 0.4)
        }
        "lift-fbar" => {
            let (name, f) = facial::builtin::lift_fbar_plane();
            facial::degree_on_plane(name, f, (0.1, 0.2), 0.3)
        }
        other => return Err(format!("unknown map '{other}'")),
    };
    match result {
        Ok(d) => {
            println!("degree({map}) = {d}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { suite, d0, d1, trials, seed, tol, group, config, out } => {
            run_verify(suite, d0, d1, trials, seed, tol, group, config, out)
        }
        Command::Koszul { group, v0, v1 } => run_koszul(group, v0, v1),
        Command::Degree { map } => run_degree(map),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
