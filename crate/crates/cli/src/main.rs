//! `orlicz` — norms, conjugates, rearrangements, admissibility constants,
//! weighted resolvent suprema, shift diagnostics, and the verification
//! suites, from the command line.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or
//! configuration error.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orlicz_core::config;
use orlicz_core::diagsys::{self, Strategy, WeissWeight};
use orlicz_core::error::Error;
use orlicz_core::func::SampledFunction;
use orlicz_core::harness::{self, HarnessConfig};
use orlicz_core::norms;
use orlicz_core::numeric;
use orlicz_core::rearrange;
use orlicz_core::shift;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Orlicz-space admissibility toolkit")]
struct Cli {
    /// Seed for randomized searches and suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,

    /// Output path (written atomically); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// key = value file mirroring the flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the complementary Young function.
    Conjugate {
        #[arg(long)]
        phi: Option<String>,
        /// Comma-separated evaluation points.
        #[arg(long)]
        points: Option<String>,
        /// Log grid as lo,hi,n (used when --points is absent).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Luxemburg norm of a function spec.
    Norm {
        #[arg(long)]
        phi: Option<String>,
        /// exp:amplitude,sigma | const:c | step:<csv path>
        #[arg(long)]
        f: Option<String>,
        /// Horizon: a positive real or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// Decreasing rearrangement (and the weak norm when --phi is given).
    Rearrange {
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// Admissibility constant bracket for a diagonal system.
    Admissibility {
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        system: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// basis | random:k | refine:k
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Weighted resolvent supremum over the right half-plane.
    Weiss {
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        system: Option<String>,
        /// conjugate-inverse | exp-norm
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Right shift of a step function and its continuity modulus.
    Shift {
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Interval a,b (defaults to the support padded by the shift).
        #[arg(long)]
        interval: Option<String>,
    },
    /// Run one named verification suite.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        system: Option<String>,
    },
    /// Run every suite with the default corpus.
    RunAll {
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        system: Option<String>,
    },
}

/// Settings merged from the config file and the command line.
struct Settings {
    seed: u64,
    format: String,
    out: Option<PathBuf>,
    file: HashMap<String, String>,
}

impl Settings {
    fn lookup(&self, cli_value: Option<String>, key: &str) -> Option<String> {
        cli_value.or_else(|| self.file.get(key).cloned())
    }

    fn require(&self, cli_value: Option<String>, key: &str) -> Result<String, Error> {
        self.lookup(cli_value, key)
            .ok_or_else(|| Error::Config(format!("missing --{key} (or `{key} = ...` in --config)")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            config::parse_key_values(&text)?.into_iter().collect()
        }
        None => HashMap::new(),
    };
    let settings = Settings {
        seed: match cli.seed {
            Some(s) => s,
            None => match file.get("seed") {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Config(format!("bad seed '{v}' in config file")))?,
                None => 17,
            },
        },
        format: cli
            .format
            .or_else(|| file.get("format").cloned())
            .unwrap_or_else(|| "json".into()),
        out: cli.out.or_else(|| file.get("out").map(PathBuf::from)),
        file,
    };
    if settings.format != "json" && settings.format != "csv" {
        return Err(Error::Config(format!("unknown format '{}'", settings.format)));
    }

    match cli.cmd {
        Cmd::Conjugate { phi, points, grid } => cmd_conjugate(&settings, phi, points, grid),
        Cmd::Norm { phi, f, tau } => cmd_norm(&settings, phi, f, tau),
        Cmd::Rearrange { f, phi, tau } => cmd_rearrange(&settings, f, phi, tau),
        Cmd::Admissibility { phi, system, tau, strategy } => {
            cmd_admissibility(&settings, phi, system, tau, strategy)
        }
        Cmd::Weiss { phi, system, weight, alpha } => {
            cmd_weiss(&settings, phi, system, weight, alpha)
        }
        Cmd::Shift { phi, f, t, interval } => cmd_shift(&settings, phi, f, t, interval),
        Cmd::Verify { suite, phi, system } => cmd_verify(&settings, suite, phi, system),
        Cmd::RunAll { phi, system } => cmd_run_all(&settings, phi, system),
    }
}

/// Write atomically (temp file in the target directory, then rename), or to
/// stdout when no path is configured.
fn emit(settings: &Settings, payload: &str) -> Result<(), Error> {
    match &settings.out {
        Some(path) => {
            let tmp = temp_sibling(path);
            std::fs::write(&tmp, payload)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp-{}", std::process::id()));
    path.with_file_name(name)
}

fn parse_positive(settings: &Settings, value: Option<String>, key: &str, default: f64) -> Result<f64, Error> {
    match settings.lookup(value, key) {
        Some(v) => {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::Config(format!("bad {key} '{v}'")))?;
            if x < 0.0 {
                return Err(Error::Config(format!("{key} must be nonnegative, got {x}")));
            }
            Ok(x)
        }
        None => Ok(default),
    }
}

fn cmd_conjugate(
    settings: &Settings,
    phi: Option<String>,
    points: Option<String>,
    grid: Option<String>,
) -> Result<bool, Error> {
    let phi = config::parse_phi(&settings.require(phi, "phi")?)?;
    let tilde = phi.conjugate();
    let xs: Vec<f64> = match settings.lookup(points, "points") {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad point '{s}'")))
            })
            .collect::<Result<_, _>>()?,
        None => {
            let spec = settings
                .lookup(grid, "grid")
                .unwrap_or_else(|| "1e-2,1e2,25".into());
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!("grid must be lo,hi,n, got '{spec}'")));
            }
            let lo: f64 = parts[0].trim().parse().map_err(|_| Error::Config("bad grid lo".into()))?;
            let hi: f64 = parts[1].trim().parse().map_err(|_| Error::Config("bad grid hi".into()))?;
            let n: usize = parts[2].trim().parse().map_err(|_| Error::Config("bad grid n".into()))?;
            numeric::log_grid(lo, hi, n)
        }
    };
    let rows: Vec<(f64, f64)> = xs.iter().map(|&s| (s, tilde.forward(s))).collect();
    let payload = if settings.format == "csv" {
        let mut out = String::from("s,conjugate\n");
        for (s, v) in &rows {
            out.push_str(&format!("{s},{v}\n"));
        }
        out
    } else {
        serde_json::to_string_pretty(&serde_json::json!({
            "phi": phi.describe(),
            "conjugate": tilde.describe(),
            "table": rows,
        }))
        .expect("serialization")
    };
    emit(settings, &payload)?;
    Ok(true)
}

fn cmd_norm(
    settings: &Settings,
    phi: Option<String>,
    f: Option<String>,
    tau: Option<String>,
) -> Result<bool, Error> {
    let phi = config::parse_phi(&settings.require(phi, "phi")?)?;
    let tau = config::parse_tau(&settings.lookup(tau, "tau").unwrap_or_else(|| "inf".into()))?;
    let f = config::parse_function(&settings.require(f, "f")?, tau)?;
    let result = norms::luxemburg_norm(&f, &phi);
    let payload = if settings.format == "csv" {
        format!(
            "value,lo,hi,rel_tol\n{},{},{},{}\n",
            result.value, result.lo, result.hi, result.rel_tol
        )
    } else {
        serde_json::to_string_pretty(&result).expect("serialization")
    };
    emit(settings, &payload)?;
    Ok(true)
}

fn cmd_rearrange(
    settings: &Settings,
    f: Option<String>,
    phi: Option<String>,
    tau: Option<String>,
) -> Result<bool, Error> {
    let tau = config::parse_tau(&settings.lookup(tau, "tau").unwrap_or_else(|| "inf".into()))?;
    let f = config::parse_function(&settings.require(f, "f")?, tau)?;
    let rearr = rearrange::decreasing_rearrangement(&f)?;
    let fstar_csv = match &rearr.fstar {
        SampledFunction::Step(sf) => config::step_to_csv(sf),
        other => format!("# closed form: {}\n", other.kind_name()),
    };
    let phi_spec = settings.lookup(phi, "phi");
    let payload = match phi_spec {
        Some(spec) => {
            let phi = config::parse_phi(&spec)?;
            let weak = rearrange::weak_orlicz_norm(&f, &phi)?;
            serde_json::to_string_pretty(&serde_json::json!({
                "fstar_csv": fstar_csv,
                "weak_norm": weak,
            }))
            .expect("serialization")
        }
        None => fstar_csv,
    };
    emit(settings, &payload)?;
    Ok(true)
}

fn cmd_admissibility(
    settings: &Settings,
    phi: Option<String>,
    system: Option<String>,
    tau: Option<String>,
    strategy: Option<String>,
) -> Result<bool, Error> {
    let phi = config::parse_phi(&settings.require(phi, "phi")?)?;
    let sys = config::parse_system(&settings.require(system, "system")?, &phi)?;
    let tau = config::parse_tau(&settings.lookup(tau, "tau").unwrap_or_else(|| "inf".into()))?;
    let strategy = match settings
        .lookup(strategy, "strategy")
        .unwrap_or_else(|| "random:8".into())
        .as_str()
    {
        "basis" => Strategy::Basis,
        other => {
            if let Some(k) = other.strip_prefix("random:") {
                Strategy::Random(k.parse().map_err(|_| {
                    Error::Config(format!("bad strategy count in '{other}'"))
                })?)
            } else if let Some(k) = other.strip_prefix("refine:") {
                Strategy::Refine(k.parse().map_err(|_| {
                    Error::Config(format!("bad strategy count in '{other}'"))
                })?)
            } else {
                return Err(Error::Config(format!(
                    "unknown strategy '{other}' (basis | random:k | refine:k)"
                )));
            }
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let report = diagsys::admissibility_constant(&sys, &phi, tau, strategy, &mut rng);
    emit(settings, &serde_json::to_string_pretty(&report).expect("serialization"))?;
    Ok(report.admissible)
}

fn cmd_weiss(
    settings: &Settings,
    phi: Option<String>,
    system: Option<String>,
    weight: Option<String>,
    alpha: Option<String>,
) -> Result<bool, Error> {
    let phi = config::parse_phi(&settings.require(phi, "phi")?)?;
    let sys = config::parse_system(&settings.require(system, "system")?, &phi)?;
    let weight = match settings
        .lookup(weight, "weight")
        .unwrap_or_else(|| "conjugate-inverse".into())
        .as_str()
    {
        "conjugate-inverse" => WeissWeight::ConjugateInverse,
        "exp-norm" => WeissWeight::ExpNormReciprocal,
        other => {
            return Err(Error::Config(format!(
                "unknown weight '{other}' (conjugate-inverse | exp-norm)"
            )))
        }
    };
    let alpha = parse_positive(settings, alpha, "alpha", 0.0)?;
    let report = diagsys::weiss_supremum(&sys, &phi, alpha, weight);
    let finite = report.sup.is_finite();
    emit(settings, &serde_json::to_string_pretty(&report).expect("serialization"))?;
    Ok(finite)
}

fn cmd_shift(
    settings: &Settings,
    phi: Option<String>,
    f: Option<String>,
    t: Option<String>,
    interval: Option<String>,
) -> Result<bool, Error> {
    let phi = config::parse_phi(&settings.require(phi, "phi")?)?;
    let f_spec = settings.require(f, "f")?;
    let f = match config::parse_function(&f_spec, f64::INFINITY) {
        Ok(SampledFunction::Step(sf)) => sf,
        Ok(_) => {
            // closed forms need a finite horizon to become steps
            let tau = config::parse_tau(
                &settings
                    .lookup(None, "tau")
                    .ok_or_else(|| Error::Config("shift needs a step function (or a finite tau)".into()))?,
            )?;
            match config::parse_function(&f_spec, tau)? {
                SampledFunction::Step(sf) => sf,
                _ => return Err(Error::Config("shift supports step functions".into())),
            }
        }
        Err(e) => return Err(e),
    };
    let t: f64 = settings
        .require(t, "t")?
        .parse()
        .map_err(|_| Error::Config("bad shift amount".into()))?;
    if t < 0.0 {
        return Err(Error::Config(format!("shift amount must be nonnegative, got {t}")));
    }
    let interval = match settings.lookup(interval, "interval") {
        Some(spec) => {
            let (a, b) = spec
                .split_once(',')
                .ok_or_else(|| Error::Config("interval must be a,b".into()))?;
            (
                a.trim().parse().map_err(|_| Error::Config("bad interval".into()))?,
                b.trim().parse().map_err(|_| Error::Config("bad interval".into()))?,
            )
        }
        None => {
            let (a, b) = f.domain();
            (a.min(0.0), b + t)
        }
    };
    let shifted = shift::right_shift(&f, t, interval)?;
    let modulus = shift::shift_continuity_modulus(&f, &phi, t, interval)?;
    let payload = serde_json::to_string_pretty(&serde_json::json!({
        "shifted_csv": config::step_to_csv(&shifted),
        "modulus": modulus,
    }))
    .expect("serialization");
    emit(settings, &payload)?;
    Ok(true)
}

fn harness_config(settings: &Settings, phi: Option<String>, system: Option<String>) -> HarnessConfig {
    HarnessConfig {
        seed: settings.seed,
        phi: settings.lookup(phi, "phi"),
        system: settings.lookup(system, "system"),
    }
}

fn cmd_verify(
    settings: &Settings,
    suite: Option<String>,
    phi: Option<String>,
    system: Option<String>,
) -> Result<bool, Error> {
    let suite = settings.require(suite, "suite")?;
    let cfg = harness_config(settings, phi, system);
    let report = harness::run_suite(&suite, &cfg)?;
    let payload = if settings.format == "csv" { report.to_csv() } else { report.to_json() };
    emit(settings, &payload)?;
    Ok(report.passed())
}

fn cmd_run_all(
    settings: &Settings,
    phi: Option<String>,
    system: Option<String>,
) -> Result<bool, Error> {
    let cfg = harness_config(settings, phi, system);
    let reports = harness::run_all(&cfg);
    let all_pass = reports.iter().all(|r| r.passed());
    let payload = if settings.format == "csv" {
        let mut out = String::from("suite,id,anchor,inputs,value,slack,verdict\n");
        for r in &reports {
            for line in r.to_csv().lines().skip(1) {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    } else {
        serde_json::to_string_pretty(&reports).expect("serialization")
    };
    emit(settings, &payload)?;
    Ok(all_pass)
}
