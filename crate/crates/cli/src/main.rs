use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use surface_mld::gaussian::coset_probability_x;
use surface_mld::harness::{
    check_exact, check_mps, make_decoder, run_experiment, sidecar_path, write_csv, write_sidecar,
    DecoderKind, ExperimentConfig, Sidecar,
};
use surface_mld::mps::{MpsDecoder, DEFAULT_CHI};
use surface_mld::noise::{coset_probability_oracle, CosetGroup};
use surface_mld::{LogicalClass, NoiseModel, PauliOperator, SurfaceCode, Syndrome};

/// Thread count for benchmarks when `--threads` is not given.
const THREADS_ENV: &str = "SMLD_THREADS";

#[derive(Parser)]
#[command(name = "smld", version, about = "Surface code decoders: exact and tensor-network maximum likelihood, and matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode one syndrome and print the class and correction.
    Decode {
        #[arg(long)]
        decoder: DecoderKind,
        #[arg(long)]
        d: usize,
        /// Noise model, e.g. x:0.1 or dep:0.15.
        #[arg(long)]
        noise: NoiseModel,
        #[arg(long)]
        chi: Option<usize>,
        /// Bit string (site bits, then plaquette bits) or a file holding one.
        #[arg(long)]
        syndrome: String,
    },
    /// Print log10 coset probabilities for a syndrome (trivial by default).
    Coset {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        noise: NoiseModel,
        /// Bond dimensions: a single value, a list "2,4,6" or a range "2..5".
        #[arg(long)]
        chi: Option<String>,
        /// Restrict output to one logical class.
        #[arg(long)]
        class: Option<LogicalClass>,
        #[arg(long)]
        syndrome: Option<String>,
    },
    /// Run a Monte Carlo benchmark described by a JSON config.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides the config. Without either, CSV goes to
        /// stdout and no sidecar is written.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare both maximum-likelihood decoders against brute-force sums.
    OracleCheck {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1, 0.2, 0.3, 0.45])]
        exact_eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2])]
        mps_eps: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        chi: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Mps,
    Oracle,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Decode {
            decoder,
            d,
            noise,
            chi,
            syndrome,
        } => decode(decoder, d, noise, chi, &syndrome),
        Command::Coset {
            method,
            d,
            noise,
            chi,
            class,
            syndrome,
        } => coset(method, d, noise, chi.as_deref(), class, syndrome.as_deref()),
        Command::Benchmark {
            config,
            output,
            threads,
        } => benchmark(config, output, threads),
        Command::OracleCheck {
            d,
            exact_eps,
            mps_eps,
            chi,
            samples,
            seed,
            tolerance,
        } => oracle_check(d, &exact_eps, &mps_eps, chi, samples, seed, tolerance),
    }
}

fn read_syndrome(d: usize, arg: &str) -> Result<Syndrome> {
    let path = PathBuf::from(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
    } else {
        arg.to_string()
    };
    Ok(Syndrome::parse(d, &text)?)
}

fn decode(kind: DecoderKind, d: usize, noise: NoiseModel, chi: Option<usize>, syndrome: &str) -> Result<()> {
    let lat = SurfaceCode::new(d)?;
    let s = read_syndrome(d, syndrome)?;
    let decoder = make_decoder(kind, lat, &noise, chi)?;
    let decision = decoder.decode(&s)?;
    println!("class {}", decision.class);
    println!("correction {}", decision.correction);
    Ok(())
}

fn parse_chi_list(text: &str) -> Result<Vec<usize>> {
    let list = if let Some((a, b)) = text.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
        if a > b {
            bail!("empty bond dimension range {text}");
        }
        (a..=b).collect()
    } else {
        text.split(',').map(|x| x.trim().parse()).collect::<Result<Vec<usize>, _>>()?
    };
    Ok(list)
}

fn coset(
    method: Method,
    d: usize,
    noise: NoiseModel,
    chi: Option<&str>,
    class: Option<LogicalClass>,
    syndrome: Option<&str>,
) -> Result<()> {
    let lat = SurfaceCode::new(d)?;
    let s = match syndrome {
        Some(text) => read_syndrome(d, text)?,
        None => Syndrome::zeros(d),
    };
    let f = lat.canonical_error(&s)?;
    let classes: Vec<LogicalClass> = match class {
        Some(c) => vec![c],
        None => LogicalClass::ALL.to_vec(),
    };
    let rep = |c: LogicalClass| -> Result<PauliOperator> { Ok(f.multiply(&lat.logical(c))?) };
    let out = io::stdout();
    let mut out = out.lock();
    writeln!(out, "method\tchi\tclass\tlog10\tvalue")?;
    let mut emit = |name: &str, chi: Option<usize>, c: LogicalClass, ln: f64| -> Result<()> {
        let log10 = ln / std::f64::consts::LN_10;
        let chi = chi.map_or("-".to_string(), |x| x.to_string());
        writeln!(out, "{name}\t{chi}\t{c}\t{log10:.8}\t{:.6e}", ln.exp())?;
        Ok(())
    };
    match method {
        Method::Exact => {
            if !noise.is_x_only() {
                bail!("the exact method handles bit-flip noise only");
            }
            for &c in &classes {
                // Cosets containing Z have no support under bit-flip noise.
                let ln = if c.has_z() {
                    f64::NEG_INFINITY
                } else {
                    coset_probability_x(&lat, &rep(c)?, noise.eps())?
                };
                emit("exact", None, c, ln)?;
            }
        }
        Method::Oracle => {
            for &c in &classes {
                let ln = coset_probability_oracle(&lat, &noise, &rep(c)?, CosetGroup::Full)?;
                emit("oracle", None, c, ln)?;
            }
        }
        Method::Mps => {
            let chis = match chi {
                Some(text) => parse_chi_list(text)?,
                None => vec![DEFAULT_CHI],
            };
            for chi in chis {
                let dec = MpsDecoder::new(lat.clone(), noise, chi)?;
                for (c, v) in dec.cosets_of(&f)? {
                    if classes.contains(&c) {
                        emit("mps", Some(chi), c, v.ln_positive())?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn benchmark(path: PathBuf, output: Option<PathBuf>, threads: Option<usize>) -> Result<()> {
    let config = ExperimentConfig::load(&path).with_context(|| format!("loading {}", path.display()))?;
    let threads = match threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.parse().with_context(|| format!("{THREADS_ENV}={v}"))?),
            Err(_) => None,
        },
    };
    let summaries = run_experiment(&config, threads)?;
    match output.or_else(|| config.output.clone()) {
        Some(csv_path) => {
            write_csv(BufWriter::new(File::create(&csv_path)?), &summaries)?;
            let sidecar = Sidecar {
                config,
                threads,
                points: summaries,
            };
            write_sidecar(&sidecar_path(&csv_path), &sidecar)?;
            eprintln!("wrote {}", csv_path.display());
        }
        None => write_csv(io::stdout().lock(), &summaries)?,
    }
    Ok(())
}

fn oracle_check(
    d: usize,
    exact_eps: &[f64],
    mps_eps: &[f64],
    chi: usize,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> Result<()> {
    let mut noises = Vec::new();
    for &e in mps_eps {
        noises.push(NoiseModel::x_noise(e)?);
        noises.push(NoiseModel::depolarizing(e)?);
    }
    let mut checks = check_exact(d, exact_eps)?;
    checks.extend(check_mps(d, &noises, chi, samples, seed)?);
    let mut worst: f64 = 0.0;
    for c in &checks {
        println!("{}\t{}\tcases={}\tmax_rel_error={:.3e}", c.method, c.noise, c.cases, c.max_error);
        worst = worst.max(c.max_error);
    }
    println!("max_rel_error {worst:.3e}");
    if worst > tolerance {
        bail!("oracle mismatch {worst:.3e} above tolerance {tolerance:.1e}");
    }
    Ok(())
}
