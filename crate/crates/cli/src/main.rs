//! `lrc`: build, audit and exercise locally recoverable codes.
//!
//! Exit codes: 0 success, 2 bad flags or violated construction constraint,
//! 3 engine error or unreadable descriptor, 4 audit or verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lrc_forge::analysis::{
    bound_eq1, bound_eq2, bound_eq5, code_defect, comparison_table, defect_interval, locality_audit,
    main_bound, min_distance_exhaustive, min_distance_rank_oracle, min_weight_sample, ratio_decimal,
    relative_defect, BoundParams,
};
use lrc_forge::descriptor;
use lrc_forge::forge::{BuildOptions, ForgeError, LrcCode};
use lrc_forge::presets::{build_preset, Preset, PresetParams};
use lrc_forge::repair::{encode, in_code, repair_erasures, seeded_trial, simulate, Codeword, ErasureModel, Outcome};

#[derive(Parser)]
#[command(name = "lrc", version, about = "Locally recoverable codes from curve automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a named family and write its descriptor.
    Build(BuildArgs),
    /// Check the recovery structure and the matrix of a descriptor.
    Audit {
        file: PathBuf,
    },
    /// Minimum distance of a descriptor's code.
    Distance {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate distance upper bounds for given parameters.
    Bounds(BoundsArgs),
    /// Erase symbols of a random codeword and repair them.
    Repair {
        file: PathBuf,
        /// Comma-separated positions, `random:f` or `iid:p`.
        #[arg(long)]
        erase: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded erasure-repair simulation.
    Simulate {
        file: PathBuf,
        /// `iid:p` or `random:f`.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Defect comparison of GK codes with the fiber-product family.
    Table {
        #[arg(long)]
        compare_gk: bool,
        #[arg(long, default_value_t = 3)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exhaustive,
    Rank,
    Sample,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_parser = parse_family)]
    family: Preset,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    u: Option<u64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    ord_eta: Option<u64>,
    #[arg(long)]
    ord_omega: Option<u64>,
    #[arg(long)]
    ord_lambda: Option<u64>,
    #[arg(long)]
    t1: Option<u32>,
    #[arg(long)]
    t2: Option<u32>,
    #[arg(long)]
    t3: Option<u32>,
    /// Residual sets exclude every other factor, not only earlier ones.
    #[arg(long)]
    exclusive: bool,
    /// Record injectivity and locality failures instead of rejecting the build.
    #[arg(long)]
    diagnostic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Localities, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<u64>,
    /// Upper summation index of the floor-sum bound; it has no canonical value.
    #[arg(long)]
    t: Option<u32>,
    /// Distance used for the relative defect.
    #[arg(long)]
    d: Option<i64>,
    /// Also print the single-locality bounds.
    #[arg(long)]
    all: bool,
}

fn parse_family(s: &str) -> Result<Preset, String> {
    s.parse()
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    let result = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Audit { file } => cmd_audit(&file),
        Command::Distance { file, method, trials, seed } => cmd_distance(&file, method, trials, seed),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Repair { file, erase, seed } => cmd_repair(&file, &erase, seed),
        Command::Simulate { file, model, trials, seed } => cmd_simulate(&file, &model, trials, seed),
        Command::Table { compare_gk, q } => cmd_table(compare_gk, q),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// `LRC_THREADS` caps the worker pool; unset or 0 leaves it automatic.
fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var("LRC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| fail(2, format!("LRC_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| fail(3, e.to_string()))?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<LrcCode, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    descriptor::from_str(&text).map_err(|e| fail(3, format!("{}: {e}", path.display())))
}

fn cmd_build(a: BuildArgs) -> CmdResult {
    let params = PresetParams {
        q: a.q,
        l: a.l,
        u: a.u,
        a: a.a,
        ord_eta: a.ord_eta,
        ord_omega: a.ord_omega,
        ord_lambda: a.ord_lambda,
        t1: a.t1,
        t2: a.t2,
        t3: a.t3,
        exclusive: a.exclusive,
    };
    let code = build_preset(a.family, &params, BuildOptions { diagnostic: a.diagnostic }).map_err(|e| match e {
        ForgeError::Constraint { .. } => fail(2, e.to_string()),
        other => fail(3, other.to_string()),
    })?;
    println!("{}", code.summary());
    println!("max pole of V {} (factor maximum {})", code.max_pole_v, code.max_pole);
    match code_defect(&code) {
        Ok(d) => println!("relative defect <= {d} ({})", ratio_decimal(&d)),
        Err(e) => println!("relative defect n/a ({e})"),
    }
    for d in &code.discrepancies {
        println!("discrepancy: {d}");
    }
    for n in &code.notes {
        println!("note: {n}");
    }
    if let Some(out) = a.out {
        fs::write(&out, descriptor::to_string(&code)).map_err(|e| fail(3, format!("{}: {e}", out.display())))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_audit(file: &Path) -> CmdResult {
    let code = load(file)?;
    println!("{}", code.summary());
    let mismatched = descriptor::matrix_mismatches(&code);
    if mismatched.is_empty() {
        println!("matrix matches the basis evaluations");
    } else {
        println!(
            "matrix differs from the basis evaluations at {} coordinates, first {}",
            mismatched.len(),
            mismatched[0]
        );
    }
    let report = locality_audit(&code, None);
    print!("{report}");
    if mismatched.is_empty() && report.passed() {
        Ok(())
    } else {
        let witness = report
            .failures
            .first()
            .map(|f| f.to_string())
            .or_else(|| mismatched.first().map(|c| format!("coordinate {c}: matrix entry")))
            .unwrap_or_else(|| "achieved localities differ".into());
        Err(fail(4, format!("audit failed: {witness}")))
    }
}

fn cmd_distance(file: &Path, method: Method, trials: usize, seed: u64) -> CmdResult {
    let code = load(file)?;
    let (field, g) = (&code.field, &code.matrix);
    let engine = |e: lrc_forge::analysis::AnalysisError| fail(3, e.to_string());
    println!("{}", code.summary());
    let d = match method {
        Method::Exhaustive => min_distance_exhaustive(field, g).map_err(engine)?,
        Method::Rank => min_distance_rank_oracle(field, g).map_err(engine)?,
        Method::Sample => {
            let w = min_weight_sample(field, g, trials, seed).map_err(engine)?;
            println!("sampled minimum weight {w} over {trials} codewords (seed {seed}); d <= {w}");
            if let Ok(iv) = defect_interval(&code, w as i64) {
                println!(
                    "relative defect in [{} ({}), {} ({})]: lower at the sample, upper at d_design",
                    iv.at_sample,
                    ratio_decimal(&iv.at_sample),
                    iv.at_design,
                    ratio_decimal(&iv.at_design)
                );
            }
            w
        }
    };
    if !matches!(method, Method::Sample) {
        println!("minimum distance {d}");
        if let Ok(p) = lrc_forge::analysis::code_bound_params(&code) {
            if let Ok(def) = relative_defect(&p, d as i64) {
                println!("relative defect {def} ({})", ratio_decimal(&def));
            }
        }
    }
    println!("designed distance {}", code.d_design);
    if (d as i64) < code.d_design {
        return Err(fail(4, format!("distance {d} is below the designed distance {}", code.d_design)));
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    let params = BoundParams::new(a.n, a.k, a.r.clone()).map_err(|e| fail(2, e.to_string()))?;
    let loc = params.localities.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    println!("n {}, k {}, localities ({loc})", a.n, a.k);
    if !params.hypothesis_holds() {
        println!("note: r_max >= k, outside the hypothesis of the multi-locality bound");
    }
    let main = main_bound(&params);
    println!("{:<8} {}", "main", main);
    if a.all {
        let equal = params.localities.windows(2).all(|w| w[0] == w[1]);
        let r = params.localities[0];
        let na = |why: &str| format!("n/a ({why})");
        let eq1 = if !equal {
            na("unequal localities")
        } else {
            bound_eq1(a.n, a.k, r).map_or_else(|e| na(&e.to_string()), |v| v.to_string())
        };
        let eq2 = match (equal, a.t) {
            (false, _) => na("unequal localities"),
            (true, None) => na("pass --t"),
            (true, Some(t)) => bound_eq2(a.n, a.k, r, t).map_or_else(|e| na(&e.to_string()), |v| v.to_string()),
        };
        let eq5 = if !equal {
            na("unequal localities")
        } else {
            bound_eq5(a.n, a.k, r, params.delta()).map_or_else(|e| na(&e.to_string()), |v| v.to_string())
        };
        println!("{:<8} {eq1}", "single");
        println!("{:<8} {eq2}", "floorsum");
        println!("{:<8} {eq5}", "equal-r");
    }
    if let Some(d) = a.d {
        let def = relative_defect(&params, d).map_err(|e| fail(2, e.to_string()))?;
        println!("relative defect {def} ({})", ratio_decimal(&def));
    }
    Ok(())
}

fn cmd_repair(file: &Path, erase: &str, seed: u64) -> CmdResult {
    let code = load(file)?;
    let n = code.n();
    let (msg, pattern) = if erase.contains(':') {
        let model: ErasureModel = erase.parse().map_err(|e: lrc_forge::repair::RepairError| fail(2, e.to_string()))?;
        if let ErasureModel::Fixed(f) = model {
            if f > n {
                return Err(fail(2, format!("cannot erase {f} of {n} symbols")));
            }
        }
        seeded_trial(&code, model, seed, 0)
    } else {
        let mut positions = Vec::new();
        for part in erase.split(',').filter(|p| !p.trim().is_empty()) {
            let p: usize = part.trim().parse().map_err(|_| fail(2, format!("bad position {part:?}")))?;
            if p >= n {
                return Err(fail(2, format!("position {p} out of range for length {n}")));
            }
            positions.push(p);
        }
        positions.sort_unstable();
        positions.dedup();
        (seeded_trial(&code, ErasureModel::Fixed(0), seed, 0).0, positions)
    };
    let truth = encode(&code, &msg).map_err(|e| fail(3, e.to_string()))?;
    let mut word = Codeword::from_values(&truth);
    for &p in &pattern {
        word.erase(p);
    }
    let (fixed, report) = repair_erasures(&code, &word);
    print!("{report}");
    let wrong: Vec<usize> = report
        .outcomes
        .iter()
        .filter(|o| matches!(o.outcome, Outcome::Repaired { value, .. } if value != truth[o.position]))
        .map(|o| o.position)
        .collect();
    if !wrong.is_empty() {
        return Err(fail(4, format!("wrong repaired value at position {}", wrong[0])));
    }
    if let Some(values) = fixed.values() {
        if !in_code(&code, &values) {
            return Err(fail(4, "repaired word is not a codeword"));
        }
        println!("repaired word is a codeword");
    }
    Ok(())
}

fn cmd_simulate(file: &Path, model: &str, trials: usize, seed: u64) -> CmdResult {
    let code = load(file)?;
    let model: ErasureModel = model.parse().map_err(|e: lrc_forge::repair::RepairError| fail(2, e.to_string()))?;
    let stats = simulate(&code, trials, model, seed).map_err(|e| fail(2, e.to_string()))?;
    println!("{}", code.summary());
    print!("{stats}");
    if stats.wrong_values > 0 {
        return Err(fail(4, format!("{} repaired values were wrong", stats.wrong_values)));
    }
    Ok(())
}

fn cmd_table(compare_gk: bool, q: u64) -> CmdResult {
    if !compare_gk {
        return Err(fail(2, "choose a table, e.g. --compare-gk"));
    }
    let table = comparison_table(q).map_err(|e| fail(2, e.to_string()))?;
    print!("{table}");
    Ok(())
}
