use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use convex_cli::apps::{fidelity_defect, fidelity_defect_search, friction_solve, QubitPair};
use convex_cli::descriptor::{load_space_descriptor, visit_space, SpaceVisitor};
use convex_cli::suite::{replay, run_monad_suite, run_suite, Suite, SuiteResult, SEED_ENV};
use convex_cli::CliError;
use convex_core::geometric::{is_majorized_by, permutohedron_witness, SpectrumSpec};
use convex_core::giry::barycenter;
use convex_core::{Dist, RandomElement, Rational};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "convex", version, about = "Exact convex-space law checking and worked examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArgs {
    /// Seed for the random cases.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the convex-space laws on random cases of a described space.
    Laws {
        descriptor: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
    /// Run a named suite: laws, algebra, lawvere, coefficient-change, roundtrip.
    Suite {
        name: String,
        descriptor: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
    /// Monad laws of distributions and finite subsets, and the support map.
    Monad {
        /// Comma-separated carrier.
        #[arg(long, default_value = "a,b,c,d", value_delimiter = ',')]
        carrier: Vec<String>,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Functoriality, product preservation and round-trips through stochastic matrices.
    Lawvere {
        descriptor: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Evaluate a formal convex combination, given as JSON `[[element, "p/q"], ...]`.
    Eval {
        descriptor: String,
        #[arg(long)]
        combination: String,
    },
    /// Re-check one report line against a described space.
    Replay {
        descriptor: String,
        #[arg(long)]
        line: String,
    },
    /// Solve the discretized static-friction problem.
    Friction {
        #[arg(long, default_value_t = 10_000)]
        cells: usize,
    },
    /// Compare the direct overlap formula with the convex-functional search.
    Fidelity {
        /// Amplitudes `a+bi,c+di`.
        #[arg(long, allow_hyphen_values = true)]
        psi1: String,
        #[arg(long, allow_hyphen_values = true)]
        psi2: String,
        #[arg(long, default_value_t = 10_000)]
        directions: usize,
    },
    /// Decide whether a diagonal lies in the permutohedron of a spectrum.
    SchurHorn {
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
        #[arg(long, allow_hyphen_values = true)]
        eig: String,
    },
}

fn emit(result: &SuiteResult) -> u8 {
    print!("{}", result.render());
    result.exit_status() as u8
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(CliError::from))
        .collect()
}

fn parse_state(s: &str) -> Result<[Complex64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Invalid(format!("expected two amplitudes, got `{s}`")));
    }
    let amp = |t: &str| {
        t.trim()
            .parse::<Complex64>()
            .map_err(|_| CliError::Invalid(format!("`{t}` is not a complex number")))
    };
    Ok([amp(parts[0])?, amp(parts[1])?])
}

struct Eval(String);

impl SpaceVisitor for Eval {
    type Output = Result<String, CliError>;
    fn visit<S>(self, space: &S) -> Self::Output
    where
        S: RandomElement,
        S::Elem: Serialize + DeserializeOwned,
    {
        let d: Dist<S::Elem> = serde_json::from_str(&self.0)
            .map_err(|e| CliError::Invalid(format!("combination does not parse: {e}")))?;
        let value = barycenter(space, &d)?;
        Ok(serde_json::to_string(&value).expect("elements serialize"))
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Laws { descriptor, seed, cases } => {
            let desc = load_space_descriptor(&descriptor)?;
            Ok(emit(&run_suite(Suite::Laws, &desc, &descriptor, seed.seed, cases)?))
        }
        Command::Suite { name, descriptor, seed, cases } => {
            let suite: Suite = name.parse()?;
            let desc = load_space_descriptor(&descriptor)?;
            Ok(emit(&run_suite(suite, &desc, &descriptor, seed.seed, cases)?))
        }
        Command::Monad { carrier, seed, cases } => Ok(emit(&run_monad_suite(&carrier, seed.seed, cases)?)),
        Command::Lawvere { descriptor, seed, cases } => {
            let desc = load_space_descriptor(&descriptor)?;
            let a = run_suite(Suite::Lawvere, &desc, &descriptor, seed.seed, cases)?;
            let b = run_suite(Suite::Roundtrip, &desc, &descriptor, seed.seed, cases)?;
            Ok(emit(&a).max(emit(&b)))
        }
        Command::Eval { descriptor, combination } => {
            let desc = load_space_descriptor(&descriptor)?;
            println!("{}", visit_space(&desc, &descriptor, Eval(combination))??);
            Ok(0)
        }
        Command::Replay { descriptor, line } => {
            let desc = load_space_descriptor(&descriptor)?;
            let out = replay(&desc, &descriptor, &line)?;
            println!("{out}");
            Ok(if out.starts_with("PASS ") { 0 } else { 1 })
        }
        Command::Friction { cells } => {
            let s = friction_solve(cells)?;
            println!("cells={} force={:.9} switch_point={:.9} torque={:.3e}", s.cells(), s.force, s.switch_point, s.torque());
            Ok(0)
        }
        Command::Fidelity { psi1, psi2, directions } => {
            let q = QubitPair::new(parse_state(&psi1)?, parse_state(&psi2)?)?;
            let direct = fidelity_defect(&q);
            let search = fidelity_defect_search(&q, directions)?;
            println!("direct={direct:.9} search={search:.9} difference={:.3e}", (direct - search).abs());
            Ok(0)
        }
        Command::SchurHorn { diag, eig } => {
            let spec = SpectrumSpec::new(parse_rationals(&eig)?, parse_rationals(&diag)?)?;
            let witness = permutohedron_witness(&spec)?;
            let majorized = is_majorized_by(&spec.diagonal, &spec.eigenvalues);
            println!("member={} majorized={majorized}", witness.is_some());
            if let Some(w) = &witness {
                for (perm, weight) in w {
                    let coords: Vec<String> = perm.iter().map(ToString::to_string).collect();
                    println!("  {weight} * ({})", coords.join(", "));
                }
            }
            Ok(if witness.is_some() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
