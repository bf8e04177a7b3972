//! Monte Carlo harness for the distinguishers.
//!
//! Every trial draws its randomness from its own ChaCha8 stream: the key
//! comes from `rng_seed` and the stream id is the trial index. ChaCha is a
//! counter-mode generator, so trial i sees the same bits no matter which
//! worker runs it or in which order; verdict counts depend only on the
//! config.
//!
//! * soundness: streams from randomly sampled systems must all be accepted.
//!   Any `random` verdict is a bug and sets `soundness_failure`.
//! * completeness-single / completeness-multi: uniform bits, report the
//!   fraction judged `random`.
//! * collision: fraction of trials whose m uniform points of {0,1}ⁿ are
//!   pairwise distinct, against the lower bound 1 − m²/2ⁿ.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distinguisher::{classify_multi, classify_single, MultiSampleInput, SingleStreamInput};
use crate::dynamics::{trajectory_bits, BitStream};
use crate::error::{Error, Result};
use crate::types::{format_rational, parse_rational, BitVector, MPSystem, Rational};

/// Environment variable capping the worker pool size.
pub const WORKERS_ENV: &str = "MP_WORKERS";

pub const DEFAULT_WEIGHT_BOUND: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    #[default]
    Single,
    Multi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Soundness,
    CompletenessSingle,
    CompletenessMulti,
    Collision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Stream length for single-stream experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Sample count (multi-sample experiments) or draw count (collision).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(
        default = "default_epsilon",
        serialize_with = "ser_rational",
        deserialize_with = "de_rational"
    )]
    pub epsilon: Rational,
    pub trials: u64,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default = "default_weight_bound")]
    pub weight_bound: i64,
    /// Which distinguisher the soundness experiment feeds.
    #[serde(default)]
    pub mode: SampleMode,
    /// Optional CSV file receiving one line per trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_log: Option<PathBuf>,
}

fn default_epsilon() -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(2))
}

fn default_weight_bound() -> i64 {
    DEFAULT_WEIGHT_BOUND
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(serde::de::Error::custom)
}

/// ⌈(2+ε)·x⌉ computed exactly.
fn ceil_scaled(epsilon: &Rational, x: usize) -> Result<usize> {
    let v = (Rational::from_integer(BigInt::from(2)) + epsilon) * Rational::from_integer(BigInt::from(x));
    v.ceil()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::domain("derived length does not fit in usize"))
}

impl ExperimentConfig {
    pub fn new(n: usize, trials: u64, rng_seed: u64) -> Self {
        ExperimentConfig {
            n,
            t: None,
            m: None,
            epsilon: default_epsilon(),
            trials,
            rng_seed,
            weight_bound: DEFAULT_WEIGHT_BOUND,
            mode: SampleMode::Single,
            trial_log: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if self.weight_bound < 0 {
            return Err(Error::domain("weight_bound must be nonnegative"));
        }
        Ok(())
    }

    fn positive_epsilon(&self) -> Result<&Rational> {
        if self.epsilon <= Rational::from_integer(BigInt::from(0)) {
            return Err(Error::domain("epsilon must be positive to derive a default length"));
        }
        Ok(&self.epsilon)
    }

    /// t, or ⌈(2+ε)n²⌉ when unset.
    pub fn stream_length(&self) -> Result<usize> {
        match self.t {
            Some(t) => Ok(t),
            None => ceil_scaled(self.positive_epsilon()?, self.n * self.n),
        }
    }

    /// m, or ⌈(2+ε)n⌉ when unset.
    pub fn sample_count(&self) -> Result<usize> {
        match self.m {
            Some(m) => Ok(m),
            None => ceil_scaled(self.positive_epsilon()?, self.n),
        }
    }

    /// m, or ⌊2^(n/3)⌋ when unset.
    pub fn draw_count(&self) -> usize {
        self.m
            .unwrap_or_else(|| 2f64.powf(self.n as f64 / 3.0).floor().max(1.0) as usize)
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(trial);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub mcculloch_pitts: u64,
    pub random: u64,
    #[serde(serialize_with = "ser_rational")]
    pub empirical_random_rate: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionSummary {
    pub m: usize,
    pub distinct_trials: u64,
    #[serde(serialize_with = "ser_rational")]
    pub distinct_rate: Rational,
    /// 1 − m²/2ⁿ.
    pub lower_bound: f64,
    /// √(p(1−p)/trials) with p the bound clamped to [0, 1].
    pub sigma: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    /// Fixed t (single) or m (multi, collision) used by every trial; absent
    /// when soundness samples it per trial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<VerdictCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision: Option<CollisionSummary>,
    pub soundness_failure: bool,
    pub wall_time_ms: u64,
}

impl ExperimentReport {
    /// Fraction of trials judged `random`, as a float.
    pub fn random_rate(&self) -> Option<f64> {
        self.verdicts.as_ref().and_then(|v| v.empirical_random_rate.to_f64())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let kind = serde_json::to_value(self.experiment).expect("kind serializes");
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<22}{v}");
        };
        line("experiment", kind.as_str().unwrap_or_default().to_string());
        line("n", self.config.n.to_string());
        if let Some(len) = self.length {
            line("length", len.to_string());
        }
        line("trials", self.trials.to_string());
        line("rng_seed", self.config.rng_seed.to_string());
        if let Some(v) = &self.verdicts {
            line("McCulloch-Pitts", v.mcculloch_pitts.to_string());
            line("random", v.random.to_string());
            line("random rate", format!("{:.4}", self.random_rate().unwrap_or(f64::NAN)));
        }
        if let Some(c) = &self.collision {
            line("all-distinct trials", c.distinct_trials.to_string());
            line(
                "all-distinct rate",
                format!("{:.6}", c.distinct_rate.to_f64().unwrap_or(f64::NAN)),
            );
            line("lower bound 1-m^2/N", format!("{:.6}", c.lower_bound));
            line("3 sigma", format!("{:.6}", 3.0 * c.sigma));
            line("within bound", c.within_bound.to_string());
        }
        if self.experiment == ExperimentKind::Soundness {
            line("soundness failure", self.soundness_failure.to_string());
        }
        line("wall time (ms)", self.wall_time_ms.to_string());
        out
    }
}

fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
}

/// Runs `trial` for every index on a pool capped by `MP_WORKERS`; results
/// come back in index order.
fn run_trials<T, F>(trials: u64, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = worker_count() {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(trial).collect())
}

fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.gen()).collect()
}

fn random_state<R: Rng>(rng: &mut R, n: usize) -> BitVector {
    BitVector::new(random_bits(rng, n)).expect("n >= 1")
}

struct Trial {
    length: usize,
    mcculloch_pitts: bool,
}

fn write_trial_log(config: &ExperimentConfig, trials: &[Trial]) -> Result<()> {
    let Some(path) = &config.trial_log else {
        return Ok(());
    };
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "trial,length,verdict")?;
    for (i, t) in trials.iter().enumerate() {
        let verdict = if t.mcculloch_pitts { "McCulloch-Pitts" } else { "random" };
        writeln!(f, "{i},{},{verdict}", t.length)?;
    }
    f.flush()?;
    Ok(())
}

fn verdict_report(
    experiment: ExperimentKind,
    config: &ExperimentConfig,
    length: Option<usize>,
    trials: Vec<Trial>,
    started: Instant,
) -> Result<ExperimentReport> {
    write_trial_log(config, &trials)?;
    let mp = trials.iter().filter(|t| t.mcculloch_pitts).count() as u64;
    let random = trials.len() as u64 - mp;
    Ok(ExperimentReport {
        experiment,
        config: config.clone(),
        length,
        trials: config.trials,
        verdicts: Some(VerdictCounts {
            mcculloch_pitts: mp,
            random,
            empirical_random_rate: Rational::new(BigInt::from(random), BigInt::from(config.trials)),
        }),
        collision: None,
        soundness_failure: experiment == ExperimentKind::Soundness && random > 0,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Classifies streams generated by randomly sampled systems. In single mode
/// each trial uses t (or a uniform t in [n+1, 4n²] when unset); in multi
/// mode each trial draws m seeds (or a uniform m in [1, 4n]) and feeds
/// their (n+1)-bit trajectories from one shared system.
pub fn run_soundness(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let (fixed, max_len) = match config.mode {
        SampleMode::Single => (config.t, (4 * n * n).max(n + 1)),
        SampleMode::Multi => (config.m, 4 * n),
    };
    let results = run_trials(config.trials, |i| {
        let mut rng = config.trial_rng(i);
        let system = MPSystem::random(n, config.weight_bound, &mut rng)?;
        let verdict = match config.mode {
            SampleMode::Single => {
                let t = fixed.unwrap_or_else(|| rng.gen_range(n + 1..=max_len));
                let x = random_state(&mut rng, n);
                let y = trajectory_bits(&system, &x, t)?;
                (t, classify_single(&SingleStreamInput::new(n, y)?)?)
            }
            SampleMode::Multi => {
                let m = fixed.unwrap_or_else(|| rng.gen_range(1..=max_len));
                let samples = (0..m)
                    .map(|_| trajectory_bits(&system, &random_state(&mut rng, n), n + 1))
                    .collect::<Result<Vec<_>>>()?;
                (m, classify_multi(&MultiSampleInput::new(n, samples)?)?)
            }
        };
        Ok(Trial {
            length: verdict.0,
            mcculloch_pitts: verdict.1.is_mcculloch_pitts(),
        })
    })?;
    verdict_report(ExperimentKind::Soundness, config, fixed, results, started)
}

/// Classifies uniform t-bit streams, t defaulting to ⌈(2+ε)n²⌉.
pub fn run_completeness_single(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let t = config.stream_length()?;
    if t <= n {
        return Err(Error::StreamTooShort { len: t, n });
    }
    let results = run_trials(config.trials, |i| {
        let mut rng = config.trial_rng(i);
        let y = BitStream::new(random_bits(&mut rng, t))?;
        let v = classify_single(&SingleStreamInput::new(n, y)?)?;
        Ok(Trial {
            length: t,
            mcculloch_pitts: v.is_mcculloch_pitts(),
        })
    })?;
    verdict_report(ExperimentKind::CompletenessSingle, config, Some(t), results, started)
}

/// Classifies batches of m uniform (n+1)-bit samples, m defaulting to
/// ⌈(2+ε)n⌉.
pub fn run_completeness_multi(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let m = config.sample_count()?;
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let results = run_trials(config.trials, |i| {
        let mut rng = config.trial_rng(i);
        let samples = (0..m)
            .map(|_| BitStream::new(random_bits(&mut rng, n + 1)))
            .collect::<Result<Vec<_>>>()?;
        let v = classify_multi(&MultiSampleInput::new(n, samples)?)?;
        Ok(Trial {
            length: m,
            mcculloch_pitts: v.is_mcculloch_pitts(),
        })
    })?;
    verdict_report(ExperimentKind::CompletenessMulti, config, Some(m), results, started)
}

/// Draws m uniform points of {0,1}ⁿ per trial and counts the trials where
/// they are pairwise distinct. `within_bound` compares the empirical rate
/// with 1 − m²/2ⁿ − 3σ.
pub fn run_collision_check(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let m = config.draw_count();
    let distinct = run_trials(config.trials, |i| {
        let mut rng = config.trial_rng(i);
        let mut seen = HashSet::with_capacity(m);
        let mut all_distinct = true;
        for _ in 0..m {
            all_distinct &= seen.insert(random_bits(&mut rng, n));
        }
        Ok(all_distinct)
    })?;
    if let Some(path) = &config.trial_log {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "trial,m,all_distinct")?;
        for (i, d) in distinct.iter().enumerate() {
            writeln!(f, "{i},{m},{d}")?;
        }
        f.flush()?;
    }
    let hits = distinct.iter().filter(|&&d| d).count() as u64;
    let rate = Rational::new(BigInt::from(hits), BigInt::from(config.trials));
    let lower_bound = 1.0 - (m as f64).powi(2) / 2f64.powi(n as i32);
    let p = lower_bound.clamp(0.0, 1.0);
    let sigma = (p * (1.0 - p) / config.trials as f64).sqrt();
    let within_bound = rate.to_f64().unwrap_or(0.0) >= lower_bound - 3.0 * sigma;
    Ok(ExperimentReport {
        experiment: ExperimentKind::Collision,
        config: config.clone(),
        length: Some(m),
        trials: config.trials,
        verdicts: None,
        collision: Some(CollisionSummary {
            m,
            distinct_trials: hits,
            distinct_rate: rate,
            lower_bound,
            sigma,
            within_bound,
        }),
        soundness_failure: false,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

pub fn run(kind: ExperimentKind, config: &ExperimentConfig) -> Result<ExperimentReport> {
    match kind {
        ExperimentKind::Soundness => run_soundness(config),
        ExperimentKind::CompletenessSingle => run_completeness_single(config),
        ExperimentKind::CompletenessMulti => run_completeness_multi(config),
        ExperimentKind::Collision => run_collision_check(config),
    }
}

/// Reruns `kind` once per length (t for single-stream experiments, m
/// otherwise) and returns CSV `length,trials,random,rate`. For collision
/// runs the last two columns hold the all-distinct count and rate.
pub fn sweep(kind: ExperimentKind, config: &ExperimentConfig, lengths: &[usize]) -> Result<String> {
    let mut out = String::from("length,trials,random,rate\n");
    for &len in lengths {
        let mut c = config.clone();
        c.trial_log = None;
        match kind {
            ExperimentKind::CompletenessSingle => c.t = Some(len),
            ExperimentKind::Soundness if c.mode == SampleMode::Single => c.t = Some(len),
            _ => c.m = Some(len),
        }
        let r = run(kind, &c)?;
        let (count, rate) = match (&r.verdicts, &r.collision) {
            (Some(v), _) => (v.random, v.empirical_random_rate.clone()),
            (None, Some(col)) => (col.distinct_trials, col.distinct_rate.clone()),
            (None, None) => unreachable!("every report carries verdicts or collision data"),
        };
        let _ = writeln!(out, "{len},{},{count},{:.6}", r.trials, rate.to_f64().unwrap_or(f64::NAN));
    }
    Ok(out)
}
