//! Experiment driver: the alternating explore/exploit trial loop, windowed
//! metrics, CSV/summary emission and run configuration.
//!
//! Trials alternate strictly, starting with exploration. Both kinds run
//! credit assignment; only exploration trials reproduce, and only
//! exploitation trials feed the performance window. A metrics row is
//! emitted every `window` exploitation trials, combining the window means
//! with numerosity-weighted population statistics.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fln::{FlnConfig, Genome};
use crate::frog::FrogProblem;
use crate::rng::Streams;
use crate::xcsf::{Classifier, CoverError, Population, Xcsf, XcsfParams};

/// Everything a run depends on; serialized verbatim into the summary.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: u64,
    /// Micro-rule capacity of the population.
    pub pop_size: u32,
    /// Exploitation trials per metrics row.
    pub window: usize,
    pub params: XcsfParams,
    pub fln: FlnConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            trials: 100_000,
            pop_size: 2000,
            window: 50,
            params: XcsfParams::default(),
            fln: FlnConfig::default(),
        }
    }
}

/// A `--param key=value` override failed.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown parameter '{0}' (see the README for the parameter table)")]
    UnknownKey(String),
    #[error("invalid value '{value}' for '{key}': {reason}")]
    BadValue { key: String, value: String, reason: String },
}

impl ExperimentConfig {
    /// Applies one named override to the engine or network settings.
    pub fn set_param(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            value.parse().map_err(|e: T::Err| ConfigError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
                reason: e.to_string(),
            })
        }
        fn positive(key: &str, value: &str) -> Result<f64, ConfigError> {
            let v: f64 = parse(key, value)?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(ConfigError::BadValue {
                    key: key.to_string(),
                    value: value.to_string(),
                    reason: "must be a positive finite number".to_string(),
                })
            }
        }
        match key {
            "beta" => self.params.beta = positive(key, value)?,
            "eta" => self.params.eta = positive(key, value)?,
            "x0" => self.params.x0 = positive(key, value)?,
            "eps0" => self.params.eps0 = positive(key, value)?,
            "alpha" => self.params.alpha = positive(key, value)?,
            "nu" => self.params.nu = positive(key, value)?,
            "theta_ga" => self.params.theta_ga = positive(key, value)?,
            "theta_del" => self.params.theta_del = positive(key, value)?,
            "delta" => self.params.delta = positive(key, value)?,
            "f_init" => self.params.f_init = positive(key, value)?,
            "eps_init" => self.params.eps_init = positive(key, value)?,
            "action_window" => self.params.action_window = positive(key, value)?,
            "cover_retry_cap" => self.params.cover_retry_cap = parse(key, value)?,
            "max_nodes" => self.fln.max_nodes = parse(key, value)?,
            "t_min" => self.fln.min_update_budget = parse(key, value)?,
            "t_max" => self.fln.max_update_budget = parse(key, value)?,
            "mu_min" => self.fln.min_mutation_rate = positive(key, value)?,
            "s_init" => {
                let v: f64 = parse(key, value)?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(ConfigError::BadValue {
                        key: key.to_string(),
                        value: value.to_string(),
                        reason: "must lie in [0, 1]".to_string(),
                    });
                }
                self.fln.initial_state = v;
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Trial index, starting at 0.
    pub trial: u64,
    pub explore: bool,
    pub payoff: f64,
    /// The chosen rule's prediction at its proposed action.
    pub prediction: f64,
    /// The executed action.
    pub action: f64,
}

/// One line of the metrics series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsRow {
    /// Trials completed when the row was emitted.
    pub trial: u64,
    /// Mean payoff of the last `window` exploitation trials.
    pub performance: f64,
    /// Mean |payoff - prediction| over the same trials.
    pub error: f64,
    /// Member count over capacity.
    pub macro_frac: f64,
    /// Numerosity-weighted mean mutation rate.
    pub avg_mu: f64,
    /// Numerosity-weighted mean node count, inputs included.
    pub avg_nodes: f64,
    /// Numerosity-weighted mean distinct sources per executable node.
    pub avg_conn: f64,
    /// Numerosity-weighted mean update budget.
    pub avg_t: f64,
}

/// A run in progress: population, schedule position and window buffers.
pub struct Experiment {
    config: ExperimentConfig,
    engine: Xcsf,
    pop: Population,
    env: FrogProblem,
    streams: Streams,
    next_trial: u64,
    win_payoff: Vec<f64>,
    win_error: Vec<f64>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Experiment {
        let engine = Xcsf::new(config.params.clone(), config.fln.clone(), 1, 1);
        let mut pop = Population::new(config.pop_size);
        let streams = Streams::new(config.seed);
        // Start from a full random population so the run's opening
        // statistics reflect the raw genome distribution; covering still
        // backstops an empty match set. A rule that has never joined an
        // action set gets the maximal niche-size prior: its first real
        // update replaces the estimate outright, but until then its
        // deletion vote is not artificially small, so unproven initial
        // rules stay deletable.
        let mut init = streams.init_rng();
        for _ in 0..config.pop_size {
            let genome = Genome::random(1, 1, &config.fln, &mut init);
            let mut rule = Classifier::new(genome, 1, &config.params, 0);
            rule.set_size = f64::from(config.pop_size);
            pop.insert(rule);
        }
        Experiment {
            config,
            engine,
            pop,
            env: FrogProblem,
            streams,
            next_trial: 0,
            win_payoff: Vec::new(),
            win_error: Vec::new(),
        }
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    /// Trials completed so far.
    pub fn trials_run(&self) -> u64 {
        self.next_trial
    }

    /// Runs one trial: draw a problem, match, choose an action, reward the
    /// action set, reproduce on exploration trials, and trim the
    /// population. Returns the trial outcome plus a metrics row whenever
    /// this trial completes a window.
    pub fn step(&mut self) -> Result<(TrialRecord, Option<MetricsRow>), CoverError> {
        let trial = self.next_trial;
        let explore = trial % 2 == 0;
        let mut rng: ChaCha8Rng = self.streams.trial_rng(trial);

        let x = self.env.sample_state(&mut rng);
        let state = [x];
        let mset = self.engine.build_match_set(&mut self.pop, &state, trial, &self.streams, &mut rng)?;
        let chosen = if explore {
            self.engine.select_explore(&self.pop, &mset, &mut rng)
        } else {
            self.engine.select_exploit(&self.pop, &mset)
        };
        let aset = self.engine.build_action_set(&mset, chosen);
        let action = mset[chosen].action;
        let prediction = mset[chosen].prediction;
        let payoff = self.env.payoff(x, action);
        self.engine.update_sets(&mut self.pop, &mset, &aset, &state, payoff);
        if explore {
            self.engine.run_ga(&mut self.pop, &mset, &aset, trial, &mut rng);
        }
        self.pop.delete_to_limit(&self.engine.params, &mut rng);
        self.next_trial += 1;

        let mut row = None;
        if !explore {
            self.win_payoff.push(payoff);
            self.win_error.push((payoff - prediction).abs());
            if self.win_payoff.len() == self.config.window {
                row = Some(self.metrics_row());
                self.win_payoff.clear();
                self.win_error.clear();
            }
        }
        Ok((TrialRecord { trial, explore, payoff, prediction, action }, row))
    }

    fn metrics_row(&self) -> MetricsRow {
        let micro = self.pop.micro_count() as f64;
        let mut mu = 0.0;
        let mut nodes = 0.0;
        let mut conn = 0.0;
        let mut budget = 0.0;
        for cl in &self.pop.members {
            let n = cl.numerosity as f64;
            mu += cl.genome.mutation_rate * n;
            nodes += cl.genome.node_count() as f64 * n;
            conn += cl.genome.connectivity() * n;
            budget += cl.genome.update_budget as f64 * n;
        }
        let w = self.win_payoff.len() as f64;
        MetricsRow {
            trial: self.next_trial,
            performance: self.win_payoff.iter().sum::<f64>() / w,
            error: self.win_error.iter().sum::<f64>() / w,
            macro_frac: self.pop.members.len() as f64 / self.config.pop_size as f64,
            avg_mu: mu / micro,
            avg_nodes: nodes / micro,
            avg_conn: conn / micro,
            avg_t: budget / micro,
        }
    }
}

/// Writes the metrics header line.
pub fn write_csv_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "trial,performance,error,macro_frac,avg_mu,avg_nodes,avg_conn,avg_T")
}

/// Writes one metrics row at 6-decimal precision.
pub fn write_csv_row<W: Write>(w: &mut W, row: &MetricsRow) -> io::Result<()> {
    writeln!(
        w,
        "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
        row.trial, row.performance, row.error, row.macro_frac, row.avg_mu, row.avg_nodes, row.avg_conn, row.avg_t
    )
}

/// End-of-run report: the configuration, where the population landed, and
/// the cost of getting there.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub trials_run: u64,
    pub final_metrics: Option<MetricsRow>,
    pub macro_classifiers: usize,
    pub micro_classifiers: u64,
    pub wall_clock_secs: f64,
}

/// A run failed to start or finish.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn create(path: &Path) -> Result<BufWriter<File>, ExperimentError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| ExperimentError::Io { path: path.display().to_string(), source })
}

fn flush_to(path: &Path, w: &mut BufWriter<File>) -> Result<(), ExperimentError> {
    w.flush().map_err(|source| ExperimentError::Io { path: path.display().to_string(), source })
}

/// Runs a full experiment, streaming metrics rows to `out_path` and
/// writing the summary to `summary_path` afterwards. Both files are
/// created up front so an unwritable path fails before any trial runs.
pub fn run_experiment(
    config: ExperimentConfig,
    out_path: &Path,
    summary_path: &Path,
) -> Result<Summary, ExperimentError> {
    let started = Instant::now();
    let mut csv = create(out_path)?;
    let mut summary_file = create(summary_path)?;
    write_csv_header(&mut csv).map_err(|source| ExperimentError::Io {
        path: out_path.display().to_string(),
        source,
    })?;

    let trials = config.trials;
    let mut experiment = Experiment::new(config);
    let mut last_row = None;
    for _ in 0..trials {
        let (_, row) = experiment.step()?;
        if let Some(row) = row {
            write_csv_row(&mut csv, &row).map_err(|source| ExperimentError::Io {
                path: out_path.display().to_string(),
                source,
            })?;
            last_row = Some(row);
        }
    }
    flush_to(out_path, &mut csv)?;

    let summary = Summary {
        config: experiment.config().clone(),
        trials_run: experiment.trials_run(),
        final_metrics: last_row,
        macro_classifiers: experiment.population().members.len(),
        micro_classifiers: experiment.population().micro_count(),
        wall_clock_secs: started.elapsed().as_secs_f64(),
    };
    serde_json::to_writer_pretty(&mut summary_file, &summary).map_err(|e| ExperimentError::Io {
        path: summary_path.display().to_string(),
        source: io::Error::new(io::ErrorKind::Other, e),
    })?;
    summary_file.write_all(b"\n").and_then(|_| summary_file.flush()).map_err(|source| {
        ExperimentError::Io { path: summary_path.display().to_string(), source }
    })?;
    Ok(summary)
}
