mod io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use incps::constructions::{
    compress_cumulants, compress_state_model, convolution_power, free_poisson_spec, free_product,
    inf_limit_of_powers, semicircular_spec, semicircular_state, soul_companion, z2_state, CompressionParams,
};
use incps::cumulants::{
    cumulant_spec, inf_cumulant_formal, inf_cumulant_numeric, inf_cumulant_typeb, kappa_n, moments_from_cumulants,
    DEFAULT_STEP,
};
use incps::freealg::{Alphabet, Derivation, Poly};
use incps::freeness::{
    check_freeness, check_inf_freeness, check_inf_freeness_definition, check_naive_centered_condition,
    check_traciality, Groups, Report,
};
use incps::nc::{enumerate_nc, mobius_a, Partition};
use incps::ncb::{enumerate_ncb, enumerate_ncz, fiber, BPartition};
use incps::state::{MomentSource, State};
use io::*;
use rand::{rngs::StdRng, SeedableRng};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "incps", version, about = "Infinitesimal free probability toolkit")]
struct Cli {
    /// Numerical tolerance for checks.
    #[arg(long, global = true, default_value_t = incps::DEFAULT_TOL)]
    tol: f64,
    /// Seed for commands that draw random states.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result to a file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Non-crossing partitions.
    #[command(subcommand)]
    Nc(NcCommand),
    /// Type-B non-crossing partitions.
    #[command(subcommand)]
    Ncb(NcbCommand),
    /// Cumulants and freeness checks on a state.
    #[command(subcommand)]
    Cum(CumCommand),
    /// Constructions producing states or cumulant specs.
    #[command(subcommand)]
    Build(BuildCommand),
}

#[derive(Args)]
struct ListFormat {
    /// Emit a JSON array instead of one partition per line.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum NcCommand {
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        format: ListFormat,
    },
    Kreweras {
        /// Partition such as "{1,3}{2}".
        #[arg(long)]
        partition: String,
        /// Ground set size, if larger than the largest element.
        #[arg(long)]
        n: Option<usize>,
    },
    Mobius {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum NcbCommand {
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only partitions with a zero-block.
        #[arg(long)]
        zero_only: bool,
        #[command(flatten)]
        format: ListFormat,
    },
    /// Type-B partitions over a type-A partition.
    Fiber {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        format: ListFormat,
    },
    Kreweras {
        /// Symmetric partition such as "{1,-2}{2,-1}".
        #[arg(long)]
        partition: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args)]
struct StateArg {
    /// State JSON file.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Args)]
struct TupleArgs {
    #[command(flatten)]
    state: StateArg,
    /// Comma-separated arguments; each is a generator or a product like "a*b".
    #[arg(long)]
    tuple: String,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    state: StateArg,
    /// Groups separated by ';', generators by ',' (names or 1-based indices).
    #[arg(long)]
    groups: String,
    /// Largest total length scanned; defaults to min(degree, 6).
    #[arg(long)]
    max_n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InfMethod {
    Formal,
    Typeb,
    Soul,
    Numeric,
}

#[derive(Subcommand)]
enum CumCommand {
    /// Grassmann-valued free cumulant of a tuple.
    Kappa(TupleArgs),
    /// Infinitesimal cumulant of a tuple by one of several routes.
    InfKappa {
        #[command(flatten)]
        args: TupleArgs,
        #[arg(long, value_enum, default_value = "formal")]
        method: InfMethod,
        /// Step of the finite-difference route.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
    CheckFreeness(GroupArgs),
    CheckInfFreeness(GroupArgs),
    /// Moment-level infinitesimal freeness condition.
    CheckInfFreenessDef(GroupArgs),
    /// Vanishing of moments of alternating products of kernel elements.
    CheckNaive(GroupArgs),
    CheckTraciality(StateArg),
    /// Cumulant spec of a state.
    Spec {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// State with the given cumulants.
    Moments {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum Law {
    Semicircular {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a2: f64,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Emit the cumulant spec instead of the moment table.
        #[arg(long)]
        cumulants: bool,
    },
    Poisson {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long)]
        cumulants: bool,
    },
}

#[derive(Subcommand)]
enum BuildCommand {
    /// Free product of state files.
    FreeProduct {
        #[arg(required = true)]
        states: Vec<PathBuf>,
    },
    /// Order-two unitaries with the given infinitesimal first moments.
    Z2 {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// Compression by an idempotent, from a spec (formula) or a state (model).
    Compress {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha_prime: f64,
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        spec: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        /// Degree of the compressed state; defaults to min(degree, 4).
        #[arg(long)]
        degree: Option<usize>,
    },
    #[command(subcommand)]
    Law(Law),
    /// Keep the body and set the soul to the body composed with a derivation.
    SoulCompanion {
        #[command(flatten)]
        state: StateArg,
        /// "removal", "number", or a derivation JSON file.
        #[arg(long)]
        derivation: String,
    },
    ConvPower {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    InfLimit {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Random state with values in the unit disc.
    Random {
        /// Comma-separated generator names.
        #[arg(long)]
        generators: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Zero soul.
        #[arg(long)]
        body_only: bool,
    },
}

enum Output {
    Lines(Vec<String>),
    Json(String),
}

fn json(v: impl Serialize) -> Result<Output> {
    Ok(Output::Json(serde_json::to_string_pretty(&v)?))
}

fn partition_arg(s: &str, n: Option<usize>) -> Result<Partition> {
    let p: Partition = s.parse()?;
    match n {
        Some(n) if n > p.n() => Ok(Partition::new(n, pad_blocks(p.blocks(), p.n(), n))?),
        Some(n) if n < p.n() => bail!(incps::Error::InvalidPartition(format!("{s} has elements above {n}"))),
        _ => Ok(p),
    }
}

fn pad_blocks(blocks: &[Vec<usize>], from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = blocks.to_vec();
    out.extend((from + 1..=to).map(|i| vec![i]));
    out
}

fn bpartition_arg(s: &str, n: Option<usize>) -> Result<BPartition> {
    let p: BPartition = s.parse()?;
    match n {
        Some(n) if n > p.n() => {
            let mut blocks = p.blocks();
            for i in p.n() + 1..=n {
                blocks.push(vec![i as i64]);
                blocks.push(vec![-(i as i64)]);
            }
            Ok(BPartition::new(n, blocks)?)
        }
        Some(n) if n < p.n() => bail!(incps::Error::InvalidPartition(format!("{s} has elements above {n}"))),
        _ => Ok(p),
    }
}

fn list<T: std::fmt::Display>(items: &[T], format: &ListFormat) -> Result<Output>
where
    for<'a> &'a T: Into<PartitionJson>,
{
    if format.json {
        json(items.iter().map(Into::into).collect::<Vec<PartitionJson>>())
    } else {
        Ok(Output::Lines(items.iter().map(|p| p.to_string()).collect()))
    }
}

fn parse_tuple(a: &Arc<Alphabet>, s: &str) -> Result<Vec<Poly>> {
    s.split(',')
        .map(|entry| {
            let entry = entry.trim();
            if entry == "1" {
                return Ok(Poly::one(a));
            }
            let letters = entry.split('*').map(|n| a.index_of(n.trim())).collect::<incps::Result<Vec<_>>>()?;
            Ok(Poly::monomial(a, &letters))
        })
        .collect()
}

fn report(r: Report) -> Result<Output> {
    json(ReportJson::from(&r))
}

fn run_nc(cmd: NcCommand) -> Result<Output> {
    match cmd {
        NcCommand::Enumerate { n, format } => list(enumerate_nc(n)?, &format),
        NcCommand::Kreweras { partition, n } => json(PartitionJson::from(&partition_arg(&partition, n)?.kreweras())),
        NcCommand::Mobius { from, to, n } => {
            let (p, q) = (partition_arg(&from, n)?, partition_arg(&to, n)?);
            let n = p.n().max(q.n());
            let (p, q) = (partition_arg(&from, Some(n))?, partition_arg(&to, Some(n))?);
            json(serde_json::json!({ "mobius": mobius_a(&p, &q)? }))
        }
    }
}

fn run_ncb(cmd: NcbCommand) -> Result<Output> {
    match cmd {
        NcbCommand::Enumerate { n, zero_only, format } => {
            let items = if zero_only { enumerate_ncz(n)? } else { enumerate_ncb(n)?.to_vec() };
            list(&items, &format)
        }
        NcbCommand::Fiber { partition, n, format } => {
            let p = partition_arg(&partition, n)?;
            if p.n() > incps::ncb::MAX_N {
                bail!(incps::Error::SizeLimit { what: "NC^B", n: p.n(), max: incps::ncb::MAX_N });
            }
            list(&fiber(&p), &format)
        }
        NcbCommand::Kreweras { partition, n } => {
            json(PartitionJson::from(&bpartition_arg(&partition, n)?.kreweras_b()))
        }
    }
}

fn groups_and_state(g: &GroupArgs) -> Result<(State, Groups, usize)> {
    let s = read_state(&g.state.state)?;
    let groups = Groups::parse(s.alphabet(), &g.groups)?;
    let max_n = g.max_n.unwrap_or(s.degree().min(6));
    Ok((s, groups, max_n))
}

fn run_cum(cmd: CumCommand, tol: f64) -> Result<Output> {
    match cmd {
        CumCommand::Kappa(args) => {
            let s = read_state(&args.state.state)?;
            let t = parse_tuple(s.alphabet(), &args.tuple)?;
            json(DualJson::from(kappa_n(&s, &t)?))
        }
        CumCommand::InfKappa { args, method, step } => {
            let s = read_state(&args.state.state)?;
            let t = parse_tuple(s.alphabet(), &args.tuple)?;
            let (name, v) = match method {
                InfMethod::Formal => ("formal", inf_cumulant_formal(&s, &t)?),
                InfMethod::Typeb => ("typeb", inf_cumulant_typeb(&s, &t)?),
                InfMethod::Soul => ("soul", kappa_n(&s, &t)?.soul),
                InfMethod::Numeric => ("numeric", inf_cumulant_numeric(&s, &t, step)?),
            };
            json(serde_json::json!({ "method": name, "value": C::from(v) }))
        }
        CumCommand::CheckFreeness(g) => {
            let (s, groups, n) = groups_and_state(&g)?;
            report(check_freeness(&s, &groups, n, tol)?)
        }
        CumCommand::CheckInfFreeness(g) => {
            let (s, groups, n) = groups_and_state(&g)?;
            report(check_inf_freeness(&s, &groups, n, tol)?)
        }
        CumCommand::CheckInfFreenessDef(g) => {
            let (s, groups, n) = groups_and_state(&g)?;
            report(check_inf_freeness_definition(&s, &groups, n, tol)?)
        }
        CumCommand::CheckNaive(g) => {
            let (s, groups, n) = groups_and_state(&g)?;
            report(check_naive_centered_condition(&s, &groups, n, tol)?)
        }
        CumCommand::CheckTraciality(a) => report(check_traciality(&read_state(&a.state)?, tol)?),
        CumCommand::Spec { state, degree } => {
            let s = read_state(&state.state)?;
            let degree = degree.unwrap_or(s.degree());
            json(SpecJson::from_spec(&cumulant_spec(&s, degree)?))
        }
        CumCommand::Moments { spec } => json(StateJson::from_state(&moments_from_cumulants(&read_spec(&spec)?)?)),
    }
}

fn state_or_spec(s: incps::Result<State>, spec: incps::Result<incps::state::CumulantSpec>, cumulants: bool) -> Result<Output> {
    if cumulants {
        json(SpecJson::from_spec(&spec?))
    } else {
        json(StateJson::from_state(&s?))
    }
}

fn run_build(cmd: BuildCommand, seed: u64) -> Result<Output> {
    match cmd {
        BuildCommand::FreeProduct { states } => {
            let states = states.iter().map(|p| read_state(p)).collect::<Result<Vec<_>>>()?;
            json(StateJson::from_state(&free_product(&states)?))
        }
        BuildCommand::Z2 { k, alphas, degree } => json(StateJson::from_state(&z2_state(k, &alphas, degree)?)),
        BuildCommand::Compress { alpha, alpha_prime, spec, state, degree } => {
            let params = CompressionParams::real(alpha, alpha_prime);
            match (spec, state) {
                (Some(spec), _) => json(SpecJson::from_spec(&compress_cumulants(&read_spec(&spec)?, params)?)),
                (None, Some(state)) => {
                    let s = read_state(&state)?;
                    let degree = degree.unwrap_or(s.degree().min(4));
                    json(StateJson::from_state(&compress_state_model(&s, params, degree)?))
                }
                (None, None) => unreachable!("clap requires one of --spec and --state"),
            }
        }
        BuildCommand::Law(Law::Semicircular { a1, a2, degree, cumulants }) => {
            if cumulants {
                json(SpecJson::from_spec(&semicircular_spec(a1, a2, degree)?))
            } else {
                json(StateJson::from_state(&semicircular_state(a1, a2, degree)?))
            }
        }
        BuildCommand::Law(Law::Poisson { lambda, beta, gamma, degree, cumulants }) => {
            let spec = free_poisson_spec(lambda, beta, gamma, degree);
            let state = spec.clone().and_then(|s| moments_from_cumulants(&s));
            state_or_spec(state, spec, cumulants)
        }
        BuildCommand::SoulCompanion { state, derivation } => {
            let s = read_state(&state.state)?;
            let d = match derivation.as_str() {
                "removal" => Derivation::removal(s.alphabet())?,
                "number" => Derivation::number(s.alphabet())?,
                path => read_json::<DerivationJson>(path.as_ref())?.to_derivation(s.alphabet())?,
            };
            json(StateJson::from_state(&soul_companion(&s, &d)?))
        }
        BuildCommand::ConvPower { spec, t } => json(SpecJson::from_spec(&convolution_power(&read_spec(&spec)?, t)?)),
        BuildCommand::InfLimit { spec } => json(StateJson::from_state(&inf_limit_of_powers(&read_spec(&spec)?)?)),
        BuildCommand::Random { generators, degree, body_only } => {
            let names: Vec<&str> = generators.split(',').map(str::trim).collect();
            let a = Arc::new(Alphabet::free(&names)?);
            let mut rng = StdRng::seed_from_u64(seed);
            let s = if body_only { State::random_body(a, degree, &mut rng) } else { State::random(a, degree, &mut rng) };
            json(StateJson::from_state(&s))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = match cli.command {
        Command::Nc(c) => run_nc(c)?,
        Command::Ncb(c) => run_ncb(c)?,
        Command::Cum(c) => run_cum(c, cli.tol)?,
        Command::Build(c) => run_build(c, cli.seed)?,
    };
    let mut text = match out {
        Output::Lines(lines) => lines.join("\n"),
        Output::Json(v) => v,
    };
    text.push('\n');
    match cli.output {
        Some(path) => std::fs::write(&path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
