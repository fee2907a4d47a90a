use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{DecoderKind, ExperimentConfig};
use super::stats::{wilson_interval, Z95};
use crate::decoder::Decoder;
use crate::error::{Error, Result};
use crate::gaussian::GaussianDecoder;
use crate::lattice::{LogicalClass, SurfaceCode, Syndrome};
use crate::mps::{MpsDecoder, DEFAULT_CHI};
use crate::mwm::MwmDecoder;
use crate::noise::NoiseModel;
use crate::pauli::PauliOperator;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one `(d, eps)` point of an experiment.
pub fn point_seed(master_seed: u64, d: usize, eps: f64) -> u64 {
    splitmix(splitmix(splitmix(master_seed) ^ d as u64) ^ eps.to_bits())
}

/// Independent stream per trial, so outcomes do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn make_decoder(
    kind: DecoderKind,
    lattice: SurfaceCode,
    noise: &NoiseModel,
    chi: Option<usize>,
) -> Result<Box<dyn Decoder>> {
    Ok(match kind {
        DecoderKind::MldExact => {
            if !noise.is_x_only() {
                return Err(Error::Config("mld_exact only handles bit-flip noise".into()));
            }
            Box::new(GaussianDecoder::new(lattice, noise.eps())?)
        }
        DecoderKind::MldMps => Box::new(MpsDecoder::new(lattice, *noise, chi.unwrap_or(DEFAULT_CHI))?),
        DecoderKind::Mwm => Box::new(MwmDecoder::new(lattice)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub failed: bool,
    /// The decoder reported an error; counted as a failure.
    pub decoder_failure: bool,
    /// The correction did not reproduce the syndrome; counted as a failure.
    pub invalid_correction: bool,
}

/// Sample an error, decode its syndrome and check the residual.
pub fn run_trial(decoder: &dyn Decoder, noise: &NoiseModel, seed: u64, trial: u64) -> TrialRecord {
    let lat = decoder.lattice();
    let mut rng = trial_rng(seed, trial);
    let error = noise.sample_error(lat.num_qubits(), &mut rng);
    let syndrome = lat.syndrome_of(&error).expect("sized for the lattice");
    let mut record = TrialRecord {
        trial,
        failed: true,
        decoder_failure: false,
        invalid_correction: false,
    };
    match decoder.decode(&syndrome) {
        Err(_) => record.decoder_failure = true,
        Ok(decision) => {
            if lat.syndrome_of(&decision.correction).ok() != Some(syndrome) {
                record.invalid_correction = true;
            } else {
                let residual = error.multiply(&decision.correction).expect("same size");
                record.failed = lat.classify_residual(&residual).ok() != Some(LogicalClass::I);
            }
        }
    }
    record
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TrialBudget,
    FailureTarget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub decoder: DecoderKind,
    pub noise: String,
    pub d: usize,
    pub eps: f64,
    pub chi: Option<usize>,
    pub trials: u64,
    pub failures: u64,
    pub p_logical: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub wall_s: f64,
    pub stop: StopReason,
    pub decoder_failures: u64,
    pub invalid_corrections: u64,
}

impl RunSummary {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        decoder: DecoderKind,
        noise: String,
        d: usize,
        eps: f64,
        chi: Option<usize>,
        trials: u64,
        failures: u64,
        seed: u64,
        wall_s: f64,
        stop: StopReason,
    ) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(failures, trials, Z95);
        Self {
            decoder,
            noise,
            d,
            eps,
            chi,
            trials,
            failures,
            p_logical: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
            ci_lo,
            ci_hi,
            seed,
            wall_s,
            stop,
            decoder_failures: 0,
            invalid_corrections: 0,
        }
    }

    /// Standard error of the point estimate.
    pub fn std_error(&self) -> f64 {
        (self.p_logical * (1.0 - self.p_logical) / self.trials as f64).sqrt()
    }
}

/// Run one `(d, eps)` point in batches on the current rayon pool. The
/// failure target is applied in trial order, so the result is the same for
/// any number of threads.
pub fn run_point(config: &ExperimentConfig, d: usize, eps: f64) -> Result<RunSummary> {
    let start = Instant::now();
    let noise = config.noise.at(Some(eps))?;
    let chi = config.effective_chi();
    let decoder = make_decoder(config.decoder, SurfaceCode::new(d)?, &noise, chi)?;
    let seed = point_seed(config.master_seed, d, eps);
    let budget = config.trials.unwrap_or(u64::MAX);
    let target = config.target_failures.unwrap_or(u64::MAX);

    let (mut trials, mut failures, mut decoder_failures, mut invalid) = (0u64, 0u64, 0u64, 0u64);
    let mut stop = StopReason::TrialBudget;
    'outer: while trials < budget {
        let end = trials.saturating_add(config.batch_size).min(budget);
        let batch: Vec<TrialRecord> = (trials..end)
            .into_par_iter()
            .map(|t| run_trial(decoder.as_ref(), &noise, seed, t))
            .collect();
        for r in batch {
            trials += 1;
            failures += r.failed as u64;
            decoder_failures += r.decoder_failure as u64;
            invalid += r.invalid_correction as u64;
            if failures >= target {
                stop = StopReason::FailureTarget;
                break 'outer;
            }
        }
    }
    let mut summary = RunSummary::new(
        config.decoder,
        config.noise.label().to_string(),
        d,
        eps,
        chi,
        trials,
        failures,
        config.master_seed,
        start.elapsed().as_secs_f64(),
        stop,
    );
    summary.decoder_failures = decoder_failures;
    summary.invalid_corrections = invalid;
    Ok(summary)
}

/// Every `(d, eps)` point of the config, distances outermost. With
/// `threads` set, a dedicated pool of that size is used.
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<RunSummary>> {
    config.validate()?;
    let run = || {
        let mut out = Vec::new();
        for &d in &config.distances {
            for &eps in &config.eps {
                out.push(run_point(config, d, eps)?);
            }
        }
        Ok(out)
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Exact probability that the decoder fails under bit-flip noise, summing
/// over all `2^n` X error patterns. Each syndrome is decoded once.
pub fn exhaustive_failure_probability(decoder: &dyn Decoder, noise: &NoiseModel) -> Result<f64> {
    let lat = decoder.lattice();
    let n = lat.num_qubits();
    if !noise.is_x_only() {
        return Err(Error::Precondition("exhaustive enumeration covers bit-flip noise only".into()));
    }
    if n > 24 {
        return Err(Error::SizeLimit { generators: n });
    }
    let eps = noise.eps();
    let mut decisions = std::collections::HashMap::<Syndrome, PauliOperator>::new();
    let mut total = 0.0;
    for bits in 0u32..(1 << n) {
        let error = PauliOperator::x_on(n, (0..n).filter(|&q| bits >> q & 1 == 1));
        let weight = bits.count_ones() as i32;
        let p = eps.powi(weight) * (1.0 - eps).powi(n as i32 - weight);
        if p == 0.0 {
            continue;
        }
        let s = lat.syndrome_of(&error)?;
        let correction = match decisions.get(&s) {
            Some(c) => c.clone(),
            None => {
                let c = decoder.decode(&s)?.correction;
                decisions.insert(s, c.clone());
                c
            }
        };
        if lat.classify_residual(&error.multiply(&correction)?).ok() != Some(LogicalClass::I) {
            total += p;
        }
    }
    Ok(total)
}
