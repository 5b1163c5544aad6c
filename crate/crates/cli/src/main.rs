use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use weylgrowth::checks::{self, bounds::wall_bound_report, SuiteReport, SUITE_PRESETS};
use weylgrowth::figure::{check_figure, figure_geometry, render_svg};
use weylgrowth::growth::ModelSpec;
use weylgrowth::orbit::{self, MatrixGroup, MatrixGroupSpec};
use weylgrowth::par::ExecMode;
use weylgrowth::rational::{fmt_q, parse_rational, to_f64};
use weylgrowth::report::solve_report;
use weylgrowth::{Config, Error, GrowthIndicator, RootSystem};

#[derive(Parser)]
#[command(name = "weylgrowth", version, about = "Root systems, growth indicator models and their critical functionals")]
struct Cli {
    /// Solver tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Iteration cap for the LP, QP and searches.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file; every field is optional.
    #[arg(long, global = true, env = "WEYLGROWTH_CONFIG")]
    config: Option<PathBuf>,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simple roots, positive roots, ρ, Θ, fundamental weights and ι.
    Rootsys {
        /// Preset name such as b3, g2, so(2,5), or so2n with --n.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Growth indicator models.
    Growth {
        #[command(subcommand)]
        cmd: GrowthCmd,
    },
    /// Bounds on ψ when the modified limit cone avoids a wall.
    Bounds {
        /// Preset name such as b3, g2, so(2,5), or so2n with --n.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        n: Option<u32>,
        /// 1-based simple root; all roots when omitted.
        #[arg(long)]
        alpha: Option<usize>,
    },
    /// SVG of the wall bounds for a rank-two preset.
    Figure {
        /// Preset name such as b3, g2, so(2,5), or so2n with --n.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Property suites over presets.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Samples per lemma and preset, or models per preset for replays.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        presets: Vec<String>,
        /// Treat unrealisable replays as failures.
        #[arg(long)]
        consistency: bool,
    },
    /// Cartan projections of a matrix group given as JSON.
    Orbit {
        /// Generators JSON: ambient, matrices, maximal word length.
        generators: PathBuf,
        /// Write the sample as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Points closer to the origin are left out of the cone estimate.
        #[arg(long, default_value_t = 1.0)]
        radius_cut: f64,
        /// Covector for the exponent estimate, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
}

#[derive(Subcommand)]
enum GrowthCmd {
    /// δ′, v′_Γ, μ_Γ by both routes, θ at the fundamental weights, and δ′_μ
    /// for every `--mu`.
    Solve {
        /// Model JSON: root system, optional cone, linear pieces.
        model: PathBuf,
        /// Covector, comma separated; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        mu: Vec<String>,
        /// Also assert the identities of actual discrete groups.
        #[arg(long)]
        consistency: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemmas,
    Replays,
    Convhull,
    B3,
}

/// 0 pass, 1 check failure, 2 input error, 3 model invariant violation.
enum Failure {
    Check(String),
    Input(String),
    Model(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ModelInvariant(m) => Failure::Model(vec![m]),
            Error::Solver(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Model(v)) => {
            eprintln!("model invariants violated:");
            for m in v {
                eprintln!("  {m}");
            }
            ExitCode::from(3)
        }
    }
}

fn config(cli: &Cli) -> std::result::Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(p) if !p.as_os_str().is_empty() => Config::from_path(p)?,
        _ => Config::default(),
    };
    if let Some(t) = cli.tolerance {
        cfg.tolerance = t;
    }
    if let Some(m) = cli.max_iter {
        cfg.max_iter = m;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.sequential {
        cfg.exec = ExecMode::Sequential;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = config(&cli)?;
    match cli.cmd {
        Cmd::Rootsys { preset, n, json } => rootsys(&preset_system(&preset, n)?, json),
        Cmd::Growth { cmd: GrowthCmd::Solve { model, mu, consistency } } => {
            cfg.consistency |= consistency;
            growth_solve(&model, &mu, &cfg)
        }
        Cmd::Bounds { preset, n, alpha } => bounds(&preset_system(&preset, n)?, alpha),
        Cmd::Figure { preset, n, output } => figure(&preset_system(&preset, n)?, output.as_deref()),
        Cmd::Check { suite, samples, presets, consistency } => {
            cfg.consistency |= consistency;
            check(suite, samples, &presets, &cfg)
        }
        Cmd::Orbit { generators, csv, radius_cut, mu } => {
            orbit_cmd(&generators, csv.as_deref(), radius_cut, mu.as_deref(), &cfg)
        }
    }
}

/// `so2n` with `--n 5` names `so(2,5)`.
fn preset_system(name: &str, n: Option<u32>) -> std::result::Result<RootSystem, Failure> {
    let name = match (name.to_ascii_lowercase().as_str(), n) {
        ("so2n" | "so(2,n)", Some(n)) => format!("so(2,{n})"),
        ("so2n" | "so(2,n)", None) => return Err(Failure::Input("preset so2n needs --n".into())),
        _ => name.to_string(),
    };
    Ok(RootSystem::preset(&name)?)
}

fn print(v: &impl serde::Serialize) -> Outcome {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Input(e.to_string()))?;
    // A closed pipe (`| head`) is not an error.
    let _ = writeln!(std::io::stdout().lock(), "{s}");
    Ok(())
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_covector(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    s.split(',').map(|x| parse_rational(x.trim()).map(|q| to_f64(&q)).map_err(Failure::from)).collect()
}

fn qs(v: &[weylgrowth::rational::Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn rootsys(rs: &RootSystem, as_json: bool) -> Outcome {
    let positive: Vec<Value> = rs
        .positive_roots()
        .iter()
        .map(|p| json!({"root": qs(&p.vector), "coeffs": p.coeffs, "mult": p.mult}))
        .collect();
    let out = json!({
        "preset": rs.label(),
        "rank": rs.rank(),
        "simple_roots": rs.simple_roots().iter().map(|a| qs(a)).collect::<Vec<_>>(),
        "positive_roots": positive,
        "rho": qs(rs.rho()),
        "theta": qs(rs.theta()),
        "fundamental_weights": rs.fundamental_weights().iter().map(|w| qs(w)).collect::<Vec<_>>(),
        "iota": rs.iota_perm().iter().map(|i| i + 1).collect::<Vec<_>>(),
    });
    if as_json {
        return print(&out);
    }
    let tuple = |v: &[weylgrowth::rational::Q]| format!("({})", qs(v).join(", "));
    println!("preset: {}", rs.label());
    println!("rank: {}", rs.rank());
    for (i, a) in rs.simple_roots().iter().enumerate() {
        println!("alpha{}: {}", i + 1, tuple(a));
    }
    println!("positive roots:");
    for p in rs.positive_roots() {
        println!("  {}  mult {}", tuple(&p.vector), p.mult);
    }
    println!("rho: {}", tuple(rs.rho()));
    println!("Theta: {}", tuple(rs.theta()));
    for (i, w) in rs.fundamental_weights().iter().enumerate() {
        println!("omega{}: {}", i + 1, tuple(w));
    }
    let iota: Vec<String> = rs.iota_perm().iter().map(|i| (i + 1).to_string()).collect();
    println!("iota: {}", iota.join(" "));
    Ok(())
}

fn growth_solve(path: &Path, mus: &[String], cfg: &Config) -> Outcome {
    let spec: ModelSpec = serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("model JSON: {e}")))?;
    let g = GrowthIndicator::from_spec(&spec)?;
    let violations = g.invariant_violations(1000, cfg.seed)?;
    if !violations.is_empty() {
        print(&json!({ "invariant_violations": violations }))?;
        return Err(Failure::Model(violations));
    }
    let mus: Vec<Vec<f64>> = mus.iter().map(|m| parse_covector(m)).collect::<std::result::Result<_, _>>()?;
    let rep = solve_report(&g, cfg, &mus)?;
    print(&rep)?;
    if rep.passed() {
        Ok(())
    } else {
        let failed: Vec<String> = rep
            .solution_violations
            .iter()
            .cloned()
            .chain(rep.consistency.iter().flatten().filter(|c| !c.passed).map(|c| c.name.clone()))
            .collect();
        Err(Failure::Check(failed.join(", ")))
    }
}

fn bounds(rs: &RootSystem, alpha: Option<usize>) -> Outcome {
    let roots: Vec<usize> = match alpha {
        Some(0) => return Err(Failure::Input("--alpha is 1-based".into())),
        Some(a) => vec![a - 1],
        None => (0..rs.rank()).collect(),
    };
    let reps = roots.into_iter().map(|a| wall_bound_report(rs, a)).collect::<weylgrowth::Result<Vec<_>>>()?;
    print(&reps)
}

fn figure(rs: &RootSystem, output: Option<&Path>) -> Outcome {
    let g = figure_geometry(rs)?;
    let svg = render_svg(&g);
    let check = check_figure(&g);
    match output {
        Some(p) => {
            fs::write(p, &svg).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
            print(&json!({ "output": p.display().to_string(), "geometry": g, "check": check }))
        }
        None => {
            let _ = write!(std::io::stdout().lock(), "{svg}");
            Ok(())
        }
    }
}

fn check(suite: Suite, samples: Option<usize>, presets: &[String], cfg: &Config) -> Outcome {
    let names: Vec<String> =
        if presets.is_empty() { SUITE_PRESETS.iter().map(|s| s.to_string()).collect() } else { presets.to_vec() };
    let systems = names.iter().map(|p| RootSystem::preset(p)).collect::<weylgrowth::Result<Vec<_>>>()?;
    let mut reports: Vec<SuiteReport> = Vec::new();
    match suite {
        Suite::Lemmas => {
            for rs in &systems {
                reports.extend(checks::lemma_suite(rs, samples.unwrap_or(10_000), cfg.seed, cfg.exec));
            }
        }
        Suite::Replays => {
            for rs in &systems {
                reports.extend(checks::replay_suite(rs, samples.unwrap_or(20), cfg.seed, cfg)?);
            }
        }
        Suite::Convhull => {
            for rs in &systems {
                reports.push(checks::convhull_oracle(rs, samples.unwrap_or(1000), cfg.seed, cfg.exec)?);
            }
        }
        Suite::B3 => {
            let table = checks::reproduce_b3_remark(samples.unwrap_or(1000), cfg.seed)?;
            print(&table)?;
            return if table.all_ok { Ok(()) } else { Err(Failure::Check("B3 closed forms".into())) };
        }
    }
    print(&reports)?;
    let failed: Vec<String> =
        reports.iter().filter(|r| !r.passed()).map(|r| format!("{} on {}", r.lemma, r.preset)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

fn orbit_cmd(path: &Path, csv: Option<&Path>, radius_cut: f64, mu: Option<&str>, cfg: &Config) -> Outcome {
    let spec: MatrixGroupSpec =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("generators JSON: {e}")))?;
    let group = MatrixGroup::new(&spec)?;
    let sample = orbit::enumerate_orbit(&group, cfg.orbit_cap, cfg.exec)?;
    if let Some(p) = csv {
        let f = fs::File::create(p).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
        sample.write_csv(std::io::BufWriter::new(f))?;
    }
    let symmetry = orbit::check_iota_symmetry(&group, &sample, 1e-6, cfg.exec);
    let subadditivity = orbit::check_subadditivity(&group, &sample, 1000, cfg.seed);
    let dominance_violations = sample.dominance_violations(1e-6);
    let cone = orbit::empirical_limit_cone(&group, &sample, radius_cut).ok();
    let facets = cone.as_ref().map(|c| orbit::facet_diagnostic(&group, c, 1e-9));
    let exponent = match mu {
        Some(m) => Some(match orbit::estimate_exponent(&sample, &parse_covector(m)?) {
            Ok(e) => json!(e),
            Err(e) => json!({ "error": e.to_string() }),
        }),
        None => None,
    };
    print(&json!({
        "points": sample.points.len(),
        "dropped": sample.dropped,
        "max_word_length": sample.max_word_length,
        "exhausted": sample.exhausted,
        "dominance_violations": dominance_violations,
        "iota_symmetry": symmetry,
        "subadditivity": subadditivity,
        "limit_cone": cone,
        "facets": facets,
        "exponent": exponent,
    }))?;
    if symmetry.holds && subadditivity.holds && dominance_violations == 0 {
        Ok(())
    } else {
        Err(Failure::Check("orbit sample invariants".into()))
    }
}
