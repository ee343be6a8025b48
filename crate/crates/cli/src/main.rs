mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{IntList, Rat, RatList, Settings};
use output::Format;

/// Exact local factors, K-type multiplicities and normalizing constants for
/// the doubling integral on GSp(2n) x GL(1).
#[derive(Parser, Debug)]
#[command(name = "pullback", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write the result to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Flat TOML file with default parameter values. Flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for results when --output is not given; files are named
    /// after the subcommand.
    #[arg(long, env = "PULLBACK_OUT_DIR", global = true, hide_env_values = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity of a K-type in a holomorphic discrete series.
    Blattner(BlattnerArgs),
    /// Coefficients of the rationality series and the Cartan volume series.
    Satake(SatakeArgs),
    /// Unramified local zeta integral: truncated series against closed form.
    Zeta(ZetaArgs),
    /// Local Euler factors, Dirichlet L-values and the global constant.
    #[command(subcommand)]
    Lfactor(LfactorCommand),
    /// Gauss sums of Dirichlet characters.
    Gauss(GaussArgs),
    /// Orders of Sp(2n, Z/p^m) and volumes of principal congruence subgroups.
    Volume(VolumeArgs),
    /// Archimedean factor A_k, its critical values and B_lambda(s).
    Arch(ArchArgs),
    /// Table of A_k(r-1) and c_{k,r,n,N} over critical r.
    #[command(alias = "table")]
    Constants(ConstantsArgs),
    /// Run numerical oracles and exact property checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct BlattnerArgs {
    /// Harish-Chandra parameter, strictly decreasing positive integers.
    #[arg(long)]
    lambda: Option<IntList>,
    /// K-type highest weight; a single number is broadcast to all entries.
    /// Defaults to the scalar weight l_1 + 1.
    #[arg(long)]
    weight: Option<IntList>,
}

#[derive(Args, Debug)]
struct SatakeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    /// Highest degree kept.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    /// Satake parameters; defaults to n ones.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<RatList>,
    /// Value of the character at the uniformizer.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<Rat>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<Rat>,
    /// Truncation degree of the series.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum LfactorCommand {
    /// Standard Euler factor from Satake data.
    Local(LocalArgs),
    /// Dirichlet L-value with an error bound.
    Dirichlet(DirichletArgs),
    /// The constant C_N for n = 2 from a table of Satake data.
    Assembly(AssemblyArgs),
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<RatList>,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<Rat>,
    /// Integer s at which to evaluate exactly.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
}

#[derive(Args, Debug, Clone)]
struct CharacterArgs {
    #[arg(long)]
    modulus: Option<u64>,
    /// Angle numerators at the unit-group generators; principal if omitted.
    #[arg(long)]
    images: Option<IntList>,
}

#[derive(Args, Debug, Clone)]
struct MethodArgs {
    /// hurwitz or euler.
    #[arg(long)]
    method: Option<String>,
    /// Terms summed before the Euler-Maclaurin tail (hurwitz).
    #[arg(long)]
    terms: Option<usize>,
    /// Largest prime in the Euler product (euler) or the Satake table.
    #[arg(long)]
    prime_bound: Option<u64>,
}

#[derive(Args, Debug)]
struct DirichletArgs {
    #[command(flatten)]
    character: CharacterArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long)]
    s: Option<f64>,
    /// Primes whose Euler factors are removed.
    #[arg(long)]
    omit: Option<IntList>,
}

#[derive(Args, Debug)]
struct AssemblyArgs {
    /// K-type (k_1, k_2).
    #[arg(long)]
    k: Option<IntList>,
    #[arg(long)]
    r: Option<i64>,
    /// Level N.
    #[arg(long)]
    level: Option<u64>,
    #[command(flatten)]
    character: CharacterArgs,
    #[command(flatten)]
    method: MethodArgs,
    /// JSON array of Satake data {"n", "q", "alphas", "chi"}, one per prime.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Use the parameters of the trivial representation at every prime.
    #[arg(long, conflicts_with = "table")]
    trivial_table: bool,
    /// Volume of Sp_4(Z)\Sp_4(R), written like 1/270*pi^3.
    #[arg(long)]
    siegel_volume: Option<String>,
}

#[derive(Args, Debug)]
struct GaussArgs {
    #[arg(long)]
    modulus: Option<u64>,
    /// A single character; all characters of the modulus if omitted.
    #[arg(long)]
    images: Option<IntList>,
    #[arg(long)]
    primitive_only: bool,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Level N.
    #[arg(long)]
    level: Option<u64>,
}

#[derive(Args, Debug)]
struct ArchArgs {
    /// K-type, weakly decreasing, entries of one parity.
    #[arg(long)]
    k: Option<IntList>,
    /// Evaluate B_lambda at this rational s.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<Rat>,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(long)]
    k: Option<IntList>,
    #[arg(long, allow_hyphen_values = true)]
    r_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    r_max: Option<i64>,
    /// Level N.
    #[arg(long)]
    level: Option<u64>,
    #[arg(long)]
    siegel_volume: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// all, selberg, beta, kak, measure, neretin or exact.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces every per-check tolerance; 0 makes every numeric check fail.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Monte Carlo sample count for the Selberg check.
    #[arg(long)]
    mc_budget: Option<u64>,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let settings = Settings::load(cli.config.as_deref())?;
    let format = settings.get(cli.format, "format", Format::Json)?;
    let output = settings.pick(cli.output, "output")?;
    let report = commands::dispatch(&settings, cli.command)?;
    let dest = output::destination(output, cli.out_dir, report.command, format);
    output::emit(&report.render(format), dest.as_deref())?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
