//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::approx::compare;
use crate::boltzmann::{
    boltzmann_on_energy, boltzmann_on_multisets, boltzmann_on_numbers, boltzmann_on_numbers_via_flrn,
    scaled_unnormalized_exact, EnergyConfig,
};
use crate::dist::{to_f64, Dist};
use crate::error::{Error, Result};
use crate::format::{dist_csv, plot_data_csv, sig};
use crate::markov::{
    iterate_chain, sample_trajectory, shift_channel, shift_on_numbers, stationarity_residual_with,
    transition_matrix, ShiftSpace,
};
use crate::multiset::{GroundSet, Multiset};
use crate::multivariate::{
    boltzmann_multi, boltzmann_multi_numbers, hypergeometric, nomial_distribution_with_levels, polya,
};
use crate::nomial::{
    max_sum, nomial, nomial_closed_form, nomial_enum_sequences_with, nomial_prefix_sum, nomial_recursive,
    nomial_via_multisets, polynomial_expand, NomialParams, NomialTable, DEFAULT_BUDGET,
};
use crate::par::Execution;
use crate::verify::{verify_all, Bounds};

/// Environment variable holding the default `--format`.
pub const FORMAT_ENV: &str = "NOMIALS_FORMAT";

/// Version tag written into JSON output.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "nomials", version, about = "Exact N-nomial coefficients and Boltzmann distributions")]
struct Cli {
    /// Cap on brute-force enumeration steps.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Run sweeps and pushforwards on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// N-nomial coefficients C_N(K, i).
    #[command(subcommand)]
    Nomial(NomialCmd),
    /// Boltzmann distributions.
    #[command(subcommand)]
    Boltzmann(BoltzmannCmd),
    /// The shift chain on configurations.
    #[command(subcommand)]
    Markov(MarkovCmd),
    /// Approximations of Boltzmann-on-energy.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Urn distributions indexed by multisets.
    #[command(subcommand)]
    Multivariate(MultivariateCmd),
    /// Identity sweeps.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Kets,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Auto,
    Enumerate,
    Multisets,
    Recursive,
    Closed,
    Polynomial,
}

/// N, K, i given either positionally or by flag.
#[derive(Debug, Args)]
struct Triple {
    /// N K i
    #[arg(num_args = 0..=3)]
    positional: Vec<usize>,
    /// Number of levels N.
    #[arg(long)]
    levels: Option<usize>,
    /// Sequence length (number of particles) K.
    #[arg(long, visible_alias = "particles")]
    length: Option<usize>,
    /// Sum (total energy) i.
    #[arg(long, visible_alias = "total-energy")]
    sum: Option<usize>,
}

impl Triple {
    fn resolve(&self) -> Result<(usize, usize, usize)> {
        Ok((
            pick(self.levels, self.positional.first(), "--levels")?,
            pick(self.length, self.positional.get(1), "--length")?,
            pick(self.sum, self.positional.get(2), "--sum")?,
        ))
    }
}

fn pick(flag: Option<usize>, pos: Option<&usize>, name: &str) -> Result<usize> {
    match (flag, pos) {
        (Some(f), Some(p)) if f != *p => Err(usage(format!("{name} given twice with different values"))),
        (Some(f), _) => Ok(f),
        (None, Some(p)) => Ok(*p),
        (None, None) => Err(usage(format!("missing {name}"))),
    }
}

fn usage(msg: String) -> Error {
    Error::Parse(msg)
}

#[derive(Debug, Subcommand)]
enum NomialCmd {
    /// Print C_N(K, i).
    Value {
        #[command(flatten)]
        args: Triple,
        #[arg(long, value_enum, default_value_t = Route::Auto)]
        route: Route,
    },
    /// Print rows K = 0..=K_max as CSV `K,C(K,0),C(K,1),...`.
    Table {
        /// N K_max
        #[arg(num_args = 0..=2)]
        positional: Vec<usize>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Check route agreement, row sum, palindrome and prefix sums for one (N, K).
    Check {
        /// N K
        #[arg(num_args = 0..=2)]
        positional: Vec<usize>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, visible_alias = "particles")]
        length: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, env = FORMAT_ENV, default_value = "kets")]
    format: Format,
    /// Also write `index,probability,numerator,denominator` CSV to this file.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum BoltzmannCmd {
    /// Boltzmann-on-multisets for N levels, K particles, total energy i.
    Multisets {
        #[command(flatten)]
        args: Triple,
        #[arg(long, value_enum, env = FORMAT_ENV, default_value = "kets")]
        format: Format,
    },
    /// Boltzmann-on-numbers for N levels, K particles, total energy i.
    Numbers {
        #[command(flatten)]
        args: Triple,
        /// Compute through frequentist learning of the multiset version.
        #[arg(long)]
        via_flrn: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Boltzmann-on-energy for total energy E and K >= 2 particles.
    Energy {
        #[arg(long)]
        total_energy: usize,
        #[arg(long)]
        particles: usize,
        /// Print K times the probabilities instead.
        #[arg(long)]
        scaled: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Write the data behind the bar-chart panels as CSV files.
    Panels {
        /// 1: N=16, K=7, i = 0, 7, ..., 105. 2: E=50, K = 2, 8, ..., 50.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        figure: u8,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Chain {
    Multisets,
    Numbers,
}

#[derive(Debug, Subcommand)]
enum MarkovCmd {
    /// Exact total-variation distance between the Boltzmann distribution and its image.
    Stationarity {
        #[command(flatten)]
        args: Triple,
        #[arg(long, value_enum, default_value_t = Chain::Multisets)]
        chain: Chain,
    },
    /// CSV `step,tv_distance,tv_exact` of the chain started at a point mass.
    Iterate {
        #[command(flatten)]
        args: Triple,
        #[arg(long, value_enum, default_value_t = Chain::Multisets)]
        chain: Chain,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Start state: a multiset ket, or a level for the numbers chain.
        #[arg(long)]
        start: Option<String>,
    },
    /// Nonzero transition probabilities as CSV.
    Matrix {
        #[command(flatten)]
        args: Triple,
    },
    /// A seeded random trajectory, one state per line.
    Sample {
        #[command(flatten)]
        args: Triple,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        start: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
    Summary,
}

#[derive(Debug, Subcommand)]
enum ApproxCmd {
    /// Compare the approximations with Boltzmann-on-energy at mean E/K.
    Compare {
        #[arg(long)]
        total_energy: usize,
        #[arg(long)]
        particles: usize,
        /// Rows per unit of energy in the CSV overlay.
        #[arg(long, default_value_t = 1)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
    },
}

#[derive(Debug, Args)]
struct Urn {
    /// Urn as kets, e.g. "1|a> + 5|b> + 3|c>".
    #[arg(long)]
    urn: String,
    #[arg(long, value_enum, env = FORMAT_ENV, default_value = "kets")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum MultivariateCmd {
    Hypergeometric {
        #[command(flatten)]
        urn: Urn,
        #[arg(long)]
        draw: usize,
    },
    Polya {
        #[command(flatten)]
        urn: Urn,
        #[arg(long)]
        draw: usize,
    },
    /// The nomial distribution; N defaults to the number of colours.
    NomialDist {
        #[command(flatten)]
        urn: Urn,
        #[arg(long)]
        draw: usize,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Boltzmann distribution for several kinds of particles; the urn gives
    /// the number of particles of each kind.
    BoltzmannMulti {
        #[command(flatten)]
        urn: Urn,
        #[arg(long)]
        levels: usize,
        #[arg(long, visible_alias = "total-energy")]
        sum: usize,
        /// Learn each component, giving tuples of levels.
        #[arg(long)]
        numbers: bool,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Run every identity sweep and print one line per property.
    All {
        #[arg(long, default_value_t = 4)]
        max_levels: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    echo: String,
    exec: Execution,
    budget: u64,
}

impl Ctx<'_> {
    fn line(&mut self, text: impl Display) -> Result<()> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    fn raw(&mut self, text: &str) -> Result<()> {
        self.out.write_all(text.as_bytes())?;
        Ok(())
    }

    fn envelope(&mut self, payload: Value) -> Result<()> {
        let v = json!({
            "schema": SCHEMA_VERSION,
            "command": self.echo,
            "format": "json",
            "payload": payload,
        });
        self.line(serde_json::to_string_pretty(&v).expect("serialisable"))
    }

    fn dist<T: Ord + Clone>(
        &mut self,
        d: &Dist<T>,
        format: Format,
        show: impl Fn(&T) -> String,
        element: impl Fn(&T) -> Value,
    ) -> Result<()> {
        match format {
            Format::Kets => self.line(d.to_kets_with(show)),
            Format::Csv => self.raw(&dist_csv(d, show)),
            Format::Json => self.envelope(d.to_json_with(element)),
        }
    }

    fn levels_dist(&mut self, d: &Dist<usize>, out: &Output) -> Result<()> {
        if let Some(path) = &out.plot_data {
            export_plot_data(d, path)?;
        }
        self.dist(d, out.format, |j| j.to_string(), |j| json!(j))
    }
}

/// Write `index,probability,numerator,denominator` rows to `path`.
pub fn export_plot_data(d: &Dist<usize>, path: &Path) -> Result<()> {
    fs::write(path, plot_data_csv(d))?;
    Ok(())
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let mut ctx = Ctx {
        out,
        echo,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        budget: cli.budget,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Error::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// `Ok(false)` signals a failed verification.
fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<bool> {
    match cmd {
        Command::Nomial(c) => nomial_cmd(c, ctx),
        Command::Boltzmann(c) => boltzmann_cmd(c, ctx).map(|_| true),
        Command::Markov(c) => markov_cmd(c, ctx),
        Command::Approx(c) => approx_cmd(c, ctx).map(|_| true),
        Command::Multivariate(c) => multivariate_cmd(c, ctx).map(|_| true),
        Command::Verify(VerifyCmd::All { max_levels, max_size }) => {
            let checks = verify_all(&Bounds::new(max_levels, max_size), ctx.exec);
            let mut ok = true;
            for c in &checks {
                ok &= c.passed();
                ctx.line(c)?;
            }
            let passed = checks.iter().filter(|c| c.passed()).count();
            ctx.line(format!("{passed}/{} properties hold", checks.len()))?;
            Ok(ok)
        }
    }
}

fn nomial_cmd(c: NomialCmd, ctx: &mut Ctx) -> Result<bool> {
    match c {
        NomialCmd::Value { args, route } => {
            let (n, k, i) = args.resolve()?;
            let p = NomialParams::new(n, k, i)?;
            let v = match route {
                Route::Auto => nomial(p),
                Route::Enumerate => nomial_enum_sequences_with(p, ctx.budget, ctx.exec)?,
                Route::Multisets => nomial_via_multisets(p),
                Route::Recursive => nomial_recursive(p),
                Route::Closed => nomial_closed_form(p)?,
                Route::Polynomial => polynomial_expand(n, k).swap_remove(i),
            };
            ctx.line(v)?;
            Ok(true)
        }
        NomialCmd::Table {
            positional,
            levels,
            max_length,
        } => {
            let n = pick(levels, positional.first(), "--levels")?;
            let k = pick(max_length, positional.get(1), "--max-length")?;
            if n == 0 {
                return Err(Error::EmptyGround);
            }
            ctx.raw(&NomialTable::new(n, k).to_csv())?;
            Ok(true)
        }
        NomialCmd::Check {
            positional,
            levels,
            length,
        } => {
            let n = pick(levels, positional.first(), "--levels")?;
            let k = pick(length, positional.get(1), "--length")?;
            nomial_check(n, k, ctx)
        }
    }
}

fn nomial_check(n: usize, k: usize, ctx: &mut Ctx) -> Result<bool> {
    NomialParams::new(n, k, 0)?;
    let table = NomialTable::new(n, k);
    let row = table.row(k).to_vec();
    let mut results: Vec<(String, bool)> = Vec::new();
    let mut routes = polynomial_expand(n, k) == row;
    for (i, v) in row.iter().enumerate() {
        let p = NomialParams::new(n, k, i)?;
        routes &= nomial_via_multisets(p) == *v && nomial_recursive(p) == *v;
        if i < n && k >= 1 {
            routes &= nomial_closed_form(p)? == *v;
        }
        match nomial_enum_sequences_with(p, ctx.budget, ctx.exec) {
            Ok(e) => routes &= e == *v,
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    results.push(("routes agree".into(), routes));
    let total: num_bigint::BigUint = row.iter().sum();
    results.push((
        format!("row sum {total} = {n}^{k}"),
        total == num_bigint::BigUint::from(n).pow(k as u32),
    ));
    let top = max_sum(n, k);
    results.push(("palindrome".into(), (0..=top).all(|i| row[i] == row[top - i])));
    if k >= 1 {
        let prefix = (0..=n).all(|m| nomial_prefix_sum(n, k, m).is_ok());
        results.push(("prefix sums below N".into(), prefix));
    }
    let mut ok = true;
    for (name, pass) in results {
        ok &= pass;
        ctx.line(format!("{} C_{n}({k}, .) {name}", if pass { "PASS" } else { "FAIL" }))?;
    }
    Ok(ok)
}

fn boltzmann_cmd(c: BoltzmannCmd, ctx: &mut Ctx) -> Result<()> {
    match c {
        BoltzmannCmd::Multisets { args, format } => {
            let (n, k, i) = args.resolve()?;
            let d = boltzmann_on_multisets(EnergyConfig::new(n, k, i)?);
            ctx.dist(&d, format, |m| m.to_string(), |m| json!(m.to_string()))
        }
        BoltzmannCmd::Numbers { args, via_flrn, out } => {
            let (n, k, i) = args.resolve()?;
            let cfg = EnergyConfig::new(n, k, i)?;
            let d = if via_flrn {
                boltzmann_on_numbers_via_flrn(cfg)?
            } else {
                boltzmann_on_numbers(cfg)
            };
            ctx.levels_dist(&d, &out)
        }
        BoltzmannCmd::Energy {
            total_energy,
            particles,
            scaled,
            out,
        } => {
            let d = boltzmann_on_energy(total_energy, particles)?;
            if !scaled {
                return ctx.levels_dist(&d, &out);
            }
            if let Some(path) = &out.plot_data {
                export_plot_data(&d, path)?;
            }
            let values = scaled_unnormalized_exact(total_energy, particles)?;
            match out.format {
                Format::Kets => ctx.line(
                    values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| format!("{}|{j}>", sig(to_f64(v))))
                        .collect::<Vec<_>>()
                        .join(" + "),
                ),
                Format::Csv => {
                    let mut s = String::from("index,value,numerator,denominator\n");
                    for (j, v) in values.iter().enumerate() {
                        s.push_str(&format!("{j},{},{},{}\n", sig(to_f64(v)), v.numer(), v.denom()));
                    }
                    ctx.raw(&s)
                }
                Format::Json => ctx.envelope(Value::Array(
                    values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| {
                            json!({
                                "element": j,
                                "numerator": v.numer().to_string(),
                                "denominator": v.denom().to_string(),
                                "approx": to_f64(v),
                            })
                        })
                        .collect(),
                )),
            }
        }
        BoltzmannCmd::Panels { figure, out_dir } => {
            fs::create_dir_all(&out_dir)?;
            let panels: Vec<(String, Dist<usize>)> = if figure == 1 {
                (0..=105)
                    .step_by(7)
                    .map(|i| Ok((format!("fig1_N16_K7_i{i}.csv"), boltzmann_on_numbers(EnergyConfig::new(16, 7, i)?))))
                    .collect::<Result<_>>()?
            } else {
                (2..=50)
                    .step_by(6)
                    .map(|k| Ok((format!("fig2_E50_K{k}.csv"), boltzmann_on_energy(50, k)?)))
                    .collect::<Result<_>>()?
            };
            for (name, d) in panels {
                let path = out_dir.join(&name);
                export_plot_data(&d, &path)?;
                ctx.line(path.display())?;
            }
            Ok(())
        }
    }
}

fn space_for(args: &Triple) -> Result<Arc<ShiftSpace>> {
    let (n, k, i) = args.resolve()?;
    Ok(Arc::new(ShiftSpace::new(EnergyConfig::new(n, k, i)?)))
}

fn parse_state(space: &ShiftSpace, text: &str) -> Result<Multiset> {
    let g = GroundSet::levels(space.config().levels())?;
    let phi = Multiset::parse(text, &g)?;
    if !space.contains(&phi) {
        return Err(Error::NotInSpace(phi.to_string()));
    }
    Ok(phi)
}

fn markov_cmd(c: MarkovCmd, ctx: &mut Ctx) -> Result<bool> {
    match c {
        MarkovCmd::Stationarity { args, chain } => {
            let space = space_for(&args)?;
            let cfg = space.config();
            let residual = match chain {
                Chain::Multisets => stationarity_residual_with(
                    &boltzmann_on_multisets(cfg),
                    &shift_channel(space),
                    ctx.exec,
                )?,
                Chain::Numbers => {
                    stationarity_residual_with(&boltzmann_on_numbers(cfg), &shift_on_numbers(space), ctx.exec)?
                }
            };
            ctx.line(&residual)?;
            Ok(residual.is_zero())
        }
        MarkovCmd::Iterate {
            args,
            chain,
            steps,
            start,
        } => {
            let space = space_for(&args)?;
            let cfg = space.config();
            let rows = match chain {
                Chain::Multisets => {
                    let phi = match &start {
                        Some(t) => parse_state(&space, t)?,
                        None => space.states().last().expect("nonempty space").clone(),
                    };
                    let reference = boltzmann_on_multisets(cfg);
                    iterate_chain(&Dist::point(phi), &shift_channel(space), steps, &reference, ctx.exec)?
                }
                Chain::Numbers => {
                    let j = match &start {
                        Some(t) => t
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("`{t}` is not a level")))?,
                        None => cfg.sum().min(cfg.levels() - 1),
                    };
                    let reference = boltzmann_on_numbers(cfg);
                    iterate_chain(&Dist::point(j), &shift_on_numbers(space), steps, &reference, ctx.exec)?
                }
            };
            let mut s = String::from("step,tv_distance,tv_exact\n");
            for (step, tv) in rows {
                s.push_str(&format!("{step},{},{tv}\n", sig(to_f64(&tv))));
            }
            ctx.raw(&s)?;
            Ok(true)
        }
        MarkovCmd::Matrix { args } => {
            let space = space_for(&args)?;
            let entries = transition_matrix(&space)?;
            let mut s = String::from("from,to,probability,exact\n");
            for (from, to, w) in entries {
                s.push_str(&format!(
                    "{},{},{},{w}\n",
                    space.states()[from],
                    space.states()[to],
                    sig(to_f64(&w))
                ));
            }
            ctx.raw(&s)?;
            Ok(true)
        }
        MarkovCmd::Sample {
            args,
            steps,
            seed,
            start,
        } => {
            let space = space_for(&args)?;
            let phi = match &start {
                Some(t) => parse_state(&space, t)?,
                None => space.states().last().expect("nonempty space").clone(),
            };
            for state in sample_trajectory(&space, &phi, steps, seed)? {
                ctx.line(state)?;
            }
            Ok(true)
        }
    }
}

fn approx_cmd(c: ApproxCmd, ctx: &mut Ctx) -> Result<()> {
    let ApproxCmd::Compare {
        total_energy,
        particles,
        grid,
        format,
    } = c;
    let report = compare(total_energy, particles)?;
    match format {
        ReportFormat::Csv => ctx.raw(&report.overlay_csv(grid)),
        ReportFormat::Json => ctx.envelope(serde_json::to_value(&report).expect("serialisable")),
        ReportFormat::Summary => {
            ctx.line(format!(
                "reference: E={} K={} mu={} mean~{} entropy~{}",
                report.total_energy,
                report.particles,
                report.mu,
                sig(report.reference_mean),
                sig(report.reference_entropy)
            ))?;
            if let Some(s) = report.max_entropy_root {
                ctx.line(format!("max_entropy root s~{} -ln(s)~{}", sig(s), sig(-s.ln())))?;
            }
            for c in &report.candidates {
                ctx.line(format!(
                    "{}: mean~{} entropy~{} kl~{} tv~{}",
                    c.name,
                    sig(c.mean),
                    sig(c.entropy),
                    sig(c.kl),
                    sig(c.tv)
                ))?;
            }
            ctx.line(format!("ranking by kl: {}", report.ranking.join(" < ")))
        }
    }
}

fn multivariate_cmd(c: MultivariateCmd, ctx: &mut Ctx) -> Result<()> {
    let show = |m: &Multiset| m.to_string();
    let element = |m: &Multiset| json!(m.to_string());
    match c {
        MultivariateCmd::Hypergeometric { urn, draw } => {
            let d = hypergeometric(draw, &Multiset::parse_named(&urn.urn)?)?;
            ctx.dist(&d, urn.format, show, element)
        }
        MultivariateCmd::Polya { urn, draw } => {
            let d = polya(draw, &Multiset::parse_named(&urn.urn)?)?;
            ctx.dist(&d, urn.format, show, element)
        }
        MultivariateCmd::NomialDist { urn, draw, levels } => {
            let psi = Multiset::parse_named(&urn.urn)?;
            let n = levels.unwrap_or(psi.ground().len());
            let d = nomial_distribution_with_levels(n, draw, &psi)?;
            ctx.dist(&d, urn.format, show, element)
        }
        MultivariateCmd::BoltzmannMulti {
            urn,
            levels,
            sum,
            numbers,
        } => {
            let psi = Multiset::parse_named(&urn.urn)?;
            if numbers {
                let d = boltzmann_multi_numbers(levels, &psi, sum)?;
                let tuple = |v: &Vec<usize>| {
                    format!("({})", v.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(", "))
                };
                ctx.dist(&d, urn.format, tuple, |v| json!(v))
            } else {
                let d = boltzmann_multi(levels, &psi, sum)?;
                ctx.dist(&d, urn.format, |t| t.to_string(), |t| {
                    json!(t.0.iter().map(|m| m.to_string()).collect::<Vec<_>>())
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nomials").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn positional_and_flag_forms_agree() {
        assert_eq!(call(&["nomial", "value", "9", "6", "8"]).1, "1287\n");
        assert_eq!(call(&["nomial", "value", "--levels", "9", "--length", "6", "--sum", "8"]).1, "1287\n");
        assert_eq!(call(&["nomial", "value", "4", "--length", "4", "--sum", "3"]).1, "20\n");
        assert_eq!(call(&["nomial", "value", "4", "4", "3", "--levels", "5"]).0, 2);
        assert_eq!(call(&["nomial", "value", "--levels", "4"]).0, 2);
    }

    #[test]
    fn every_route_is_reachable() {
        for route in ["auto", "enumerate", "multisets", "recursive", "closed", "polynomial"] {
            assert_eq!(call(&["nomial", "value", "9", "6", "8", "--route", route]).1, "1287\n", "{route}");
        }
        let (code, _, err) = call(&["nomial", "value", "3", "4", "5", "--route", "closed"]);
        assert_eq!(code, 2);
        assert!(err.contains("closed form"));
        assert_eq!(call(&["--budget", "10", "nomial", "value", "9", "6", "8", "--route", "enumerate"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("nomial"));
        assert_eq!(call(&["frobnicate"]).0, 2);
    }
}
