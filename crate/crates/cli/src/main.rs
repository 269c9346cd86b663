use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use d42sym::algebra::{format_scalar, parse_scalar, to_f64};
use d42sym::numerics::{integrate, CompiledField, IntegratorConfig, NumericState, Outcome};
use d42sym::verify::{all_pass, run_suite, workers_from_env, AnsatzSummary, Suite, VerifyOptions};
use d42sym::weyl::generator;
use d42sym::{GeneratorWord, HamiltonianSystem, Parameters, Scalar};

/// Exact verification and numeric simulation of the coupled D4(2) system.
#[derive(Parser)]
#[command(name = "d42sym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print JSON check reports.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random points per sampled check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Include per-check wall-clock times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Integrate the flow and write the trajectory as CSV.
    Integrate {
        /// alpha0,alpha1,alpha2,alpha3 (must sum to 1)
        #[arg(long)]
        alpha: String,
        /// x,y,z,w,q,p at t0
        #[arg(long)]
        init: String,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a word in s0..s3 to an exact point.
    ApplyWord {
        /// Whitespace-separated letters, e.g. "s1 s2 s0"; the first acts first.
        #[arg(long)]
        word: String,
        /// x,y,z,w,q,p,t
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Solve the degree-4 chart constraints at random (t0, alpha).
    Ansatz {
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn parse_list(text: &str, len: usize, what: &str) -> Result<Vec<Scalar>, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != len {
        return Err(usage(format!(
            "--{what} expects {len} comma-separated values, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            parse_scalar(p)
                .ok_or_else(|| usage(format!("--{what}: cannot parse `{}` as a number", p.trim())))
        })
        .collect()
}

fn parse_alpha(text: &str) -> Result<Parameters, Failure> {
    let mut a = parse_list(text, 4, "alpha")?;
    let sum: Scalar = a.iter().sum();
    let one = Scalar::from_integer(1.into());
    let gap = to_f64(&(&sum - &one)).abs();
    if gap > 1e-12 {
        return Err(usage(format!(
            "--alpha must satisfy alpha0 + alpha1 + alpha2 + alpha3 = 1; the given values sum to {}",
            format_scalar(&sum)
        )));
    }
    // absorb a rounding-level gap into alpha0
    a[0] = &one - &(&a[1] + &a[2] + &a[3]);
    Ok(
        Parameters::new([a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()])
            .expect("sum is one"),
    )
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn cmd_verify(suite: &str, seed: u64, samples: usize, timings: bool) -> Result<ExitCode, Failure> {
    let suite: Suite = suite.parse().map_err(usage)?;
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let opts = VerifyOptions {
        seed,
        samples,
        workers: workers_from_env(),
        timings,
    };
    let reports = run_suite(suite, &opts);
    print_json(&reports);
    Ok(if all_pass(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct IntegrateSummary {
    steps: usize,
    rejected_steps: usize,
    samples: usize,
    final_state: [f64; 7],
    blowup: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    blowup_t: Option<f64>,
    csv: String,
}

fn cmd_integrate(
    alpha: &str,
    init: &str,
    t0: f64,
    t1: f64,
    rel_tol: f64,
    out: &PathBuf,
) -> Result<ExitCode, Failure> {
    let params = parse_alpha(alpha)?;
    let init = parse_list(init, 6, "init")?;
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(usage("--rel-tol must be positive"));
    }
    if t0 == 0.0 || t1 == 0.0 || t0.signum() != t1.signum() || t0 == t1 {
        return Err(usage(
            "--t0 and --t1 must be distinct, nonzero and of the same sign (t = 0 is singular)",
        ));
    }
    let u: [f64; 6] = std::array::from_fn(|k| to_f64(&init[k]));
    let field =
        CompiledField::new(&HamiltonianSystem::d42(), &params).map_err(|e| usage(e.to_string()))?;
    let traj = integrate(
        &field,
        NumericState { t: t0, u },
        t1,
        &IntegratorConfig::with_rel_tol(rel_tol),
    )
    .map_err(|e| usage(e.to_string()))?;
    let file =
        File::create(out).map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
    traj.write_csv(BufWriter::new(file)).map_err(|e| Failure {
        code: 1,
        message: format!("writing {}: {e}", out.display()),
    })?;
    let last = traj.last();
    let blowup_t = match traj.outcome {
        Outcome::Blowup { t } => Some(t),
        Outcome::Completed => None,
    };
    print_json(&IntegrateSummary {
        steps: traj.steps,
        rejected_steps: traj.rejected,
        samples: traj.samples.len(),
        final_state: [
            last.t, last.u[0], last.u[1], last.u[2], last.u[3], last.u[4], last.u[5],
        ],
        blowup: blowup_t.is_some(),
        blowup_t,
        csv: out.display().to_string(),
    });
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PointImage {
    word: String,
    x: String,
    y: String,
    z: String,
    w: String,
    q: String,
    p: String,
    t: String,
    alpha: [String; 4],
}

fn cmd_apply_word(word: &str, point: &str, alpha: &str) -> Result<ExitCode, Failure> {
    let word: GeneratorWord = word
        .parse()
        .map_err(|e: d42sym::weyl::WeylError| usage(e.to_string()))?;
    let point = parse_list(point, 7, "point")?;
    let params = parse_alpha(alpha)?;
    let t = point[6].clone();
    if t == Scalar::from_integer(0.into()) {
        return Err(usage("t = 0 is singular"));
    }
    let mut state: [Scalar; 6] = std::array::from_fn(|k| point[k].clone());
    let mut a = params.alpha().clone();
    for (pos, &i) in word.0.iter().enumerate() {
        let (next, next_a) = generator(i)
            .apply_point(&state, &t, &a)
            .map_err(|e| Failure {
                code: 1,
                message: format!("letter {} (s{i}): {e}", pos + 1),
            })?;
        state = next;
        a = next_a;
    }
    let f = |s: &Scalar| format_scalar(s);
    print_json(&PointImage {
        word: word.to_string(),
        x: f(&state[0]),
        y: f(&state[1]),
        z: f(&state[2]),
        w: f(&state[3]),
        q: f(&state[4]),
        p: f(&state[5]),
        t: f(&t),
        alpha: a.map(|s| format_scalar(&s)),
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_ansatz(samples: usize, seed: u64) -> Result<ExitCode, Failure> {
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let summary = AnsatzSummary::run(samples, seed);
    print_json(&summary);
    Ok(if summary.is_consistent() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify {
            suite,
            seed,
            samples,
            timings,
        } => cmd_verify(suite, *seed, *samples, *timings),
        Command::Integrate {
            alpha,
            init,
            t0,
            t1,
            rel_tol,
            out,
        } => cmd_integrate(alpha, init, *t0, *t1, *rel_tol, out),
        Command::ApplyWord { word, point, alpha } => cmd_apply_word(word, point, alpha),
        Command::Ansatz { samples, seed } => cmd_ansatz(*samples, *seed),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
