//! Population machinery: matching, action sets, computed prediction,
//! error/fitness updates, reproduction and deletion.
//!
//! Rules are [`Genome`] networks wrapped in [`Classifier`] bookkeeping. A
//! trial builds a match set from network evaluations, picks one entry's
//! action, forms the action set of entries proposing nearly the same
//! action, rewards every action-set member against the payoff, and on
//! exploration trials reproduces into the niche. Fitness is shared:
//! updated only in the action set but normalized across the whole match
//! set. The population is a bounded multiset; structurally identical
//! genomes merge into one member with a numerosity count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fln::{FlnConfig, Genome};
use crate::rng::Streams;

/// Roulette weight given to a non-positive prediction during exploration.
pub const PREDICTION_FLOOR: f64 = 1e-6;

/// Learning-rate, accuracy and housekeeping constants.
#[derive(Debug, Clone, Serialize)]
pub struct XcsfParams {
    /// Learning rate for error, set-size and fitness targets.
    pub beta: f64,
    /// Weight-update rate of the normalized delta rule.
    pub eta: f64,
    /// Constant bias input to the prediction.
    pub x0: f64,
    /// Error below which a rule counts as fully accurate.
    pub eps0: f64,
    /// Accuracy falloff scale once error exceeds `eps0`.
    pub alpha: f64,
    /// Accuracy falloff exponent.
    pub nu: f64,
    /// Mean action-set age that triggers reproduction.
    pub theta_ga: f64,
    /// Experience before deletion may penalize low fitness.
    pub theta_del: f64,
    /// Fraction of mean fitness below which deletion is amplified.
    pub delta: f64,
    /// Fitness assigned to fresh rules.
    pub f_init: f64,
    /// Error assigned to fresh rules.
    pub eps_init: f64,
    /// Half-width of the action window around the chosen action.
    pub action_window: f64,
    /// Random rules drawn before covering gives up.
    pub cover_retry_cap: u64,
}

impl Default for XcsfParams {
    fn default() -> Self {
        XcsfParams {
            beta: 0.2,
            eta: 0.2,
            x0: 1.0,
            eps0: 0.01,
            alpha: 0.1,
            nu: 5.0,
            theta_ga: 1.0,
            theta_del: 20.0,
            delta: 0.1,
            f_init: 0.01,
            eps_init: 0.1,
            action_window: 0.005,
            cover_retry_cap: 1_000_000,
        }
    }
}

impl XcsfParams {
    /// Accuracy of a rule with error `eps`: 1 below the threshold, then a
    /// power-law decay. Always positive, at most 1.
    pub fn accuracy(&self, eps: f64) -> f64 {
        if eps < self.eps0 {
            1.0
        } else {
            self.alpha * (eps / self.eps0).powf(-self.nu)
        }
    }
}

/// Covering exhausted its retry budget without finding a matching rule.
#[derive(Debug, Error)]
#[error("covering drew {cap} random rules without one matching; the match gate is degenerate for this configuration")]
pub struct CoverError {
    pub cap: u64,
}

/// A genome plus the estimates the credit assignment maintains for it.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub genome: Genome,
    /// Prediction weights: bias, one per state dimension, one for the action.
    pub weights: Vec<f64>,
    /// Mean absolute prediction error estimate.
    pub error: f64,
    /// Shared fitness in (0, 1].
    pub fitness: f64,
    /// Micro-rules this member stands for.
    pub numerosity: u32,
    /// Completed parameter updates.
    pub experience: u64,
    /// Action-set size estimate in micro-units.
    pub set_size: f64,
    /// Trial of last reproduction participation.
    pub time_stamp: u64,
}

impl Classifier {
    /// Fresh rule around `genome`: zero weights, initial error and fitness,
    /// numerosity 1.
    pub fn new(genome: Genome, n_state: usize, params: &XcsfParams, trial: u64) -> Classifier {
        Classifier {
            genome,
            weights: vec![0.0; n_state + 2],
            error: params.eps_init,
            fitness: params.f_init,
            numerosity: 1,
            experience: 0,
            set_size: 1.0,
            time_stamp: trial,
        }
    }

    /// Computed prediction: linear in the state with a bias term and an
    /// extra weight fed the rule's action.
    pub fn prediction(&self, state: &[f64], action: f64, x0: f64) -> f64 {
        debug_assert_eq!(self.weights.len(), state.len() + 2);
        let mut p = self.weights[0] * x0;
        for (w, s) in self.weights[1..].iter().zip(state.iter()) {
            p += w * s;
        }
        p + self.weights[self.weights.len() - 1] * action
    }

    /// Normalized delta-rule step moving the prediction at `(state, action)`
    /// toward `payoff`.
    pub fn update_weights(&mut self, state: &[f64], action: f64, payoff: f64, eta: f64, x0: f64) {
        let p = self.prediction(state, action, x0);
        let norm = x0 * x0 + state.iter().map(|s| s * s).sum::<f64>() + action * action;
        if norm == 0.0 {
            return;
        }
        let step = eta / norm * (payoff - p);
        self.weights[0] += step * x0;
        let last = self.weights.len() - 1;
        for (w, s) in self.weights[1..last].iter_mut().zip(state.iter()) {
            *w += step * s;
        }
        self.weights[last] += step * action;
    }
}

/// One matched rule: where it lives, what it proposes, and its prediction
/// for that proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchEntry {
    /// Index into the population's member list.
    pub index: usize,
    /// The rule's proposed action (its first output node).
    pub action: f64,
    /// Match node state, at least 0.5 by construction.
    pub match_degree: f64,
    /// Prediction at the proposed action, frozen at match time.
    pub prediction: f64,
}

/// Bounded multiset of classifiers with macro merging.
#[derive(Debug, Clone)]
pub struct Population {
    pub members: Vec<Classifier>,
    /// Micro-rule capacity.
    pub max_micro: u32,
}

impl Population {
    pub fn new(max_micro: u32) -> Population {
        Population { members: Vec::new(), max_micro }
    }

    /// Total numerosity.
    pub fn micro_count(&self) -> u64 {
        self.members.iter().map(|c| c.numerosity as u64).sum()
    }

    /// Adds one micro-rule: merges into a structurally identical member if
    /// one exists (the incumbent keeps its estimates and mutation rate),
    /// otherwise appends. Returns the index now holding the genome.
    pub fn insert(&mut self, cl: Classifier) -> usize {
        for (i, existing) in self.members.iter_mut().enumerate() {
            if existing.genome.structural_eq(&cl.genome) {
                existing.numerosity += 1;
                return i;
            }
        }
        self.members.push(cl);
        self.members.len() - 1
    }

    /// Removes micro-rules until the capacity holds, by roulette on an
    /// action-set-size vote. Experienced members far below mean fitness
    /// have their vote amplified.
    pub fn delete_to_limit<R: Rng>(&mut self, params: &XcsfParams, rng: &mut R) {
        while self.micro_count() > self.max_micro as u64 {
            let micro = self.micro_count() as f64;
            let mean_fitness = self.members.iter().map(|c| c.fitness).sum::<f64>() / micro;
            let votes: Vec<f64> = self
                .members
                .iter()
                .map(|c| {
                    let mut vote = c.set_size * c.numerosity as f64;
                    let per_micro = c.fitness / c.numerosity as f64;
                    if c.experience as f64 > params.theta_del && per_micro < params.delta * mean_fitness {
                        vote *= mean_fitness / per_micro;
                    }
                    vote
                })
                .collect();
            let victim = roulette(&votes, rng);
            self.members[victim].numerosity -= 1;
            if self.members[victim].numerosity == 0 {
                self.members.remove(victim);
            }
        }
    }
}

/// Samples an index with probability proportional to its weight.
fn roulette<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0, "roulette over non-positive weights");
    let mut spin = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        spin -= w;
        if spin <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// A freshly covered rule together with the evaluation that admitted it.
#[derive(Debug, Clone)]
pub struct Covered {
    pub classifier: Classifier,
    pub match_degree: f64,
    pub action: f64,
    /// Random genomes drawn, including the successful one.
    pub tries: u64,
}

/// Engine configuration bound to an environment's dimensions.
#[derive(Debug, Clone)]
pub struct Xcsf {
    pub params: XcsfParams,
    pub fln: FlnConfig,
    pub n_inputs: usize,
    pub n_outputs: usize,
}

impl Xcsf {
    pub fn new(params: XcsfParams, fln: FlnConfig, n_inputs: usize, n_outputs: usize) -> Xcsf {
        Xcsf { params, fln, n_inputs, n_outputs }
    }

    /// Draws random minimal rules until one matches `state`, bounded by the
    /// retry cap. The successful evaluation is returned with the rule so
    /// the caller can reuse its match degree and action.
    pub fn cover<R: Rng>(&self, state: &[f64], trial: u64, rng: &mut R) -> Result<Covered, CoverError> {
        let mut buf = Vec::new();
        for tries in 1..=self.params.cover_retry_cap {
            let genome = Genome::random(self.n_inputs, self.n_outputs, &self.fln, rng);
            genome.run_into(state, &self.fln, rng, &mut buf);
            if buf[0] >= 0.5 {
                return Ok(Covered {
                    classifier: Classifier::new(genome, self.n_inputs, &self.params, trial),
                    match_degree: buf[0],
                    action: buf[1],
                    tries,
                });
            }
        }
        Err(CoverError { cap: self.params.cover_retry_cap })
    }

    /// Evaluates every member on `state` and collects those whose match
    /// node settles at 0.5 or above. Evaluations draw from substreams keyed
    /// by `(trial, member index)`, so population order cannot change
    /// results. An empty result triggers covering with `trial_rng`; the
    /// covered rule is inserted (merging if its genome already exists) and
    /// its entry reflects the member that now holds the genome.
    pub fn build_match_set(
        &self,
        pop: &mut Population,
        state: &[f64],
        trial: u64,
        streams: &Streams,
        trial_rng: &mut ChaCha8Rng,
    ) -> Result<Vec<MatchEntry>, CoverError> {
        let mut mset = Vec::new();
        let mut eval = streams.eval_rng(trial);
        let mut buf = Vec::new();
        for (index, cl) in pop.members.iter().enumerate() {
            Streams::member_stream(&mut eval, index as u64);
            cl.genome.run_into(state, &self.fln, &mut eval, &mut buf);
            if buf[0] >= 0.5 {
                let action = buf[1];
                mset.push(MatchEntry {
                    index,
                    action,
                    match_degree: buf[0],
                    prediction: cl.prediction(state, action, self.params.x0),
                });
            }
        }
        if mset.is_empty() {
            let covered = self.cover(state, trial, trial_rng)?;
            let index = pop.insert(covered.classifier);
            mset.push(MatchEntry {
                index,
                action: covered.action,
                match_degree: covered.match_degree,
                prediction: pop.members[index].prediction(state, covered.action, self.params.x0),
            });
        }
        Ok(mset)
    }

    /// Exploration choice: roulette on predictions over microclassifiers,
    /// floored so fresh zero-prediction rules keep a nonzero chance. Each
    /// member holds one ticket per unit of numerosity, so consolidated rules
    /// draw proportionally more visits. Returns an index into `mset`.
    pub fn select_explore<R: Rng>(
        &self,
        pop: &Population,
        mset: &[MatchEntry],
        rng: &mut R,
    ) -> usize {
        assert!(!mset.is_empty());
        let weight = |e: &MatchEntry| {
            e.prediction.max(PREDICTION_FLOOR) * f64::from(pop.members[e.index].numerosity)
        };
        let total: f64 = mset.iter().map(weight).sum();
        let mut spin = rng.gen::<f64>() * total;
        for (i, e) in mset.iter().enumerate() {
            spin -= weight(e);
            if spin <= 0.0 {
                return i;
            }
        }
        mset.len() - 1
    }

    /// Exploitation choice: the entry maximizing prediction times accuracy,
    /// earliest population index on ties. Returns an index into `mset`.
    pub fn select_exploit(&self, pop: &Population, mset: &[MatchEntry]) -> usize {
        assert!(!mset.is_empty());
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for (i, e) in mset.iter().enumerate() {
            let value = e.prediction * self.params.accuracy(pop.members[e.index].error);
            if value > best_value {
                best = i;
                best_value = value;
            }
        }
        best
    }

    /// Indices of `mset` entries whose actions lie within the action window
    /// of the chosen entry's, boundary inclusive. Always contains `chosen`.
    pub fn build_action_set(&self, mset: &[MatchEntry], chosen: usize) -> Vec<usize> {
        let center = mset[chosen].action;
        mset.iter()
            .enumerate()
            .filter(|(_, e)| (e.action - center).abs() <= self.params.action_window)
            .map(|(i, _)| i)
            .collect()
    }

    /// Credit assignment for one trial. Every action-set member gains
    /// experience, moves its error and set-size estimates toward this
    /// trial's observations at the adaptive rate, and trains its weights at
    /// its own proposed action against the payoff. Fitness then moves
    /// toward the member's accuracy share, normalized over the whole match
    /// set; match-set members outside the action set contribute to the
    /// normalization but are otherwise untouched.
    pub fn update_sets(
        &self,
        pop: &mut Population,
        mset: &[MatchEntry],
        aset: &[usize],
        state: &[f64],
        payoff: f64,
    ) {
        let beta = self.params.beta;
        let aset_micro: f64 = aset
            .iter()
            .map(|&i| pop.members[mset[i].index].numerosity as f64)
            .sum();
        for &i in aset {
            let entry = &mset[i];
            let cl = &mut pop.members[entry.index];
            cl.experience += 1;
            let rate = beta.max(1.0 / cl.experience as f64);
            cl.error += rate * ((payoff - entry.prediction).abs() - cl.error);
            cl.set_size += rate * (aset_micro - cl.set_size);
            cl.update_weights(state, entry.action, payoff, self.params.eta, self.params.x0);
        }
        let share_denom: f64 = mset
            .iter()
            .map(|e| {
                let cl = &pop.members[e.index];
                self.params.accuracy(cl.error) * cl.numerosity as f64
            })
            .sum();
        for &i in aset {
            let cl = &mut pop.members[mset[i].index];
            let share = self.params.accuracy(cl.error) * cl.numerosity as f64 / share_denom;
            cl.fitness += beta * (share - cl.fitness);
        }
    }

    /// Reproduction in the action set. Once the numerosity-weighted mean
    /// age of the set exceeds the trigger, two parents are drawn by
    /// roulette on fitness and each contributes one mutated offspring with
    /// reset weights, so inexperienced rules cannot win exploitation on
    /// stale predictions. Deletion restores the capacity afterwards.
    pub fn run_ga<R: Rng>(
        &self,
        pop: &mut Population,
        mset: &[MatchEntry],
        aset: &[usize],
        trial: u64,
        rng: &mut R,
    ) {
        let mut micro = 0.0;
        let mut stamped = 0.0;
        for &i in aset {
            let cl = &pop.members[mset[i].index];
            micro += cl.numerosity as f64;
            stamped += cl.time_stamp as f64 * cl.numerosity as f64;
        }
        if trial as f64 - stamped / micro <= self.params.theta_ga {
            return;
        }
        for &i in aset {
            pop.members[mset[i].index].time_stamp = trial;
        }
        let weights: Vec<f64> = aset.iter().map(|&i| pop.members[mset[i].index].fitness).collect();
        for _ in 0..2 {
            let parent = &pop.members[mset[aset[roulette(&weights, rng)]].index];
            let genome = parent.genome.mutate(&self.fln, rng);
            let set_size = parent.set_size;
            let mut child = Classifier::new(genome, self.n_inputs, &self.params, trial);
            child.set_size = set_size;
            pop.insert(child);
        }
        pop.delete_to_limit(&self.params, rng);
    }
}
