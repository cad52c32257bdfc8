//! Fuzzy logic network genomes: encoding, asynchronous execution and mutation.
//!
//! A genome is a list of executable nodes, each holding a fuzzy function id
//! and a fixed-length connection list. Connection values address a flat
//! space of size `N = n_inputs + nodes.len()`: 0 means no input on that
//! slot, `1..=n_inputs` read the clamped input vector, and higher values
//! read other executable nodes by position. The first executable node is
//! the match node, the next `n_outputs` nodes are outputs, and anything
//! after that is hidden. Only hidden nodes may be added or removed.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Number of connection slots per node.
pub const K_MAX: usize = 5;

/// Node operations, folded left-to-right over the active inputs.
///
/// `Not` and `Identity` consume only the first active input. A node with
/// no active inputs holds its current state instead of applying its
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzyFunction {
    /// Fuzzy OR: running maximum.
    Max = 0,
    /// Fuzzy AND: product.
    Product = 1,
    /// Fuzzy AND: running minimum.
    Min = 2,
    /// Fuzzy OR: sum clipped at 1.
    BoundedSum = 3,
    /// Fuzzy NOT of the first argument.
    Not = 4,
    /// First argument, unchanged.
    Identity = 5,
}

impl FuzzyFunction {
    /// How many function ids exist.
    pub const COUNT: u8 = 6;

    pub fn from_id(id: u8) -> Option<FuzzyFunction> {
        match id {
            0 => Some(FuzzyFunction::Max),
            1 => Some(FuzzyFunction::Product),
            2 => Some(FuzzyFunction::Min),
            3 => Some(FuzzyFunction::BoundedSum),
            4 => Some(FuzzyFunction::Not),
            5 => Some(FuzzyFunction::Identity),
            _ => None,
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn random<R: Rng>(rng: &mut R) -> FuzzyFunction {
        FuzzyFunction::from_id(rng.gen_range(0..FuzzyFunction::COUNT)).unwrap()
    }

    /// Applies the function to a nonempty argument list in `[0,1]`.
    /// The result is always in `[0,1]`.
    pub fn apply(self, args: &[f64]) -> f64 {
        assert!(!args.is_empty(), "fuzzy function applied to empty argument list");
        match self {
            FuzzyFunction::Max => args.iter().copied().reduce(f64::max).unwrap(),
            FuzzyFunction::Product => args.iter().product(),
            FuzzyFunction::Min => args.iter().copied().reduce(f64::min).unwrap(),
            FuzzyFunction::BoundedSum => args.iter().sum::<f64>().min(1.0),
            FuzzyFunction::Not => 1.0 - args[0],
            FuzzyFunction::Identity => args[0],
        }
    }
}

/// One executable node: a function and its connection list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub function: FuzzyFunction,
    /// Connection entries in `[0, N]`; 0 is an unused slot.
    pub connections: [usize; K_MAX],
}

impl Node {
    /// Random function and connections drawn uniformly from `[0, max_addr]`.
    pub fn random<R: Rng>(max_addr: usize, rng: &mut R) -> Node {
        let mut connections = [0usize; K_MAX];
        for slot in connections.iter_mut() {
            *slot = rng.gen_range(0..=max_addr);
        }
        Node {
            function: FuzzyFunction::random(rng),
            connections,
        }
    }
}

/// Bounds and initial-state settings for genomes and their execution.
#[derive(Debug, Clone, Serialize)]
pub struct FlnConfig {
    /// Cap on the input-inclusive node count `N`.
    pub max_nodes: usize,
    /// Lower bound on the update budget `T`.
    pub min_update_budget: u32,
    /// Upper bound on the update budget `T`.
    pub max_update_budget: u32,
    /// Lower bound on the self-adaptive mutation rate.
    pub min_mutation_rate: f64,
    /// Node state every evaluation starts from.
    pub initial_state: f64,
}

impl Default for FlnConfig {
    fn default() -> Self {
        FlnConfig {
            max_nodes: 20,
            min_update_budget: 1,
            max_update_budget: 50,
            min_mutation_rate: 0.0005,
            initial_state: 0.5,
        }
    }
}

/// Final node states of one network execution.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkOutput {
    /// Match node state; the rule matches when this is at least 0.5.
    pub match_degree: f64,
    /// Output node states, one per action dimension.
    pub actions: Vec<f64>,
}

/// An evolvable network blueprint.
///
/// `PartialEq` compares every field including the mutation rate; use
/// [`Genome::structural_eq`] for the equality that drives macro-classifier
/// merging, which ignores the mutation rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    pub n_inputs: usize,
    pub n_outputs: usize,
    /// Match node first, then `n_outputs` output nodes, then hidden nodes.
    pub nodes: Vec<Node>,
    /// Self-adaptive count of single-node update events per evaluation.
    pub update_budget: u32,
    /// Self-adaptive per-gene mutation rate in `(0, 1]`.
    pub mutation_rate: f64,
}

impl Genome {
    /// Input-inclusive node count `N`; connection entries lie in `[0, N]`.
    pub fn node_count(&self) -> usize {
        self.n_inputs + self.nodes.len()
    }

    /// Mean number of distinct sources feeding each executable node: a
    /// slot repeating an address adds fan-in weight but no new input, so
    /// repeats are not counted.
    pub fn connectivity(&self) -> f64 {
        let mut distinct = 0usize;
        for node in &self.nodes {
            for (i, &c) in node.connections.iter().enumerate() {
                if c != 0 && !node.connections[..i].contains(&c) {
                    distinct += 1;
                }
            }
        }
        distinct as f64 / self.nodes.len() as f64
    }

    /// Minimal random genome: match node, output nodes, no hidden nodes.
    pub fn random<R: Rng>(n_inputs: usize, n_outputs: usize, cfg: &FlnConfig, rng: &mut R) -> Genome {
        assert!(n_inputs >= 1 && n_outputs >= 1);
        let max_addr = n_inputs + 1 + n_outputs;
        let nodes = (0..1 + n_outputs).map(|_| Node::random(max_addr, rng)).collect();
        Genome {
            n_inputs,
            n_outputs,
            nodes,
            update_budget: rng.gen_range(cfg.min_update_budget..=cfg.max_update_budget),
            mutation_rate: rng.gen_range(cfg.min_mutation_rate..=1.0),
        }
    }

    /// Next state of one node: its function folded over the values its
    /// non-zero connections address, in connection order. With no active
    /// connections the node keeps its current state.
    pub fn node_output(&self, index: usize, state: &[f64], input: &[f64]) -> f64 {
        let node = &self.nodes[index];
        let mut args = [0.0f64; K_MAX];
        let mut n = 0;
        for &c in &node.connections {
            if c == 0 {
                continue;
            }
            args[n] = if c <= self.n_inputs {
                input[c - 1]
            } else {
                state[c - self.n_inputs - 1]
            };
            n += 1;
        }
        if n == 0 {
            state[index]
        } else {
            node.function.apply(&args[..n])
        }
    }

    /// Runs the asynchronous update schedule, leaving final node states in
    /// `state`: every node starts at `cfg.initial_state`, then exactly
    /// `update_budget` events each rewrite one uniformly drawn node against
    /// the current state, inputs clamped throughout.
    pub fn run_into<R: Rng>(&self, input: &[f64], cfg: &FlnConfig, rng: &mut R, state: &mut Vec<f64>) {
        debug_assert_eq!(input.len(), self.n_inputs);
        state.clear();
        state.resize(self.nodes.len(), cfg.initial_state);
        for _ in 0..self.update_budget {
            let i = rng.gen_range(0..self.nodes.len());
            state[i] = self.node_output(i, state, input);
        }
    }

    /// Evaluates the network on an input, returning the match degree and
    /// the output node states. No averaging: outputs are the raw final
    /// states.
    pub fn evaluate<R: Rng>(&self, input: &[f64], cfg: &FlnConfig, rng: &mut R) -> NetworkOutput {
        let mut state = Vec::new();
        self.run_into(input, cfg, rng, &mut state);
        NetworkOutput {
            match_degree: state[0],
            actions: state[1..1 + self.n_outputs].to_vec(),
        }
    }

    /// Offspring by self-adaptive mutation. The mutation rate is perturbed
    /// log-normally first; the perturbed rate then drives every flip: each
    /// connection entry and function id is redrawn with that probability,
    /// the update budget steps by one, and a hidden node may be appended or
    /// removed.
    pub fn mutate<R: Rng>(&self, cfg: &FlnConfig, rng: &mut R) -> Genome {
        let mut child = self.clone();
        let gauss: f64 = rng.sample(StandardNormal);
        let rate = (self.mutation_rate * gauss.exp()).clamp(cfg.min_mutation_rate, 1.0);
        child.mutation_rate = rate;

        let max_addr = child.node_count();
        for node in &mut child.nodes {
            for slot in node.connections.iter_mut() {
                if rng.gen::<f64>() < rate {
                    *slot = rng.gen_range(0..=max_addr);
                }
            }
            if rng.gen::<f64>() < rate {
                node.function = FuzzyFunction::random(rng);
            }
        }

        if rng.gen::<f64>() < rate {
            let step: i64 = if rng.gen::<bool>() { 1 } else { -1 };
            let t = child.update_budget as i64 + step;
            child.update_budget =
                t.clamp(cfg.min_update_budget as i64, cfg.max_update_budget as i64) as u32;
        }

        if rng.gen::<f64>() < rate && child.node_count() < cfg.max_nodes {
            let addr = child.node_count() + 1;
            child.nodes.push(Node::random(addr, rng));
        }

        if rng.gen::<f64>() < rate {
            let first_hidden = 1 + child.n_outputs;
            let hidden = child.nodes.len() - first_hidden;
            if hidden > 0 {
                let victim = first_hidden + rng.gen_range(0..hidden);
                child.remove_node(victim);
            }
        }

        child
    }

    /// Drops the node at `index`, zeroing connections that addressed it and
    /// shifting references to higher node addresses down by one.
    pub(crate) fn remove_node(&mut self, index: usize) {
        let addr = self.n_inputs + 1 + index;
        self.nodes.remove(index);
        for node in &mut self.nodes {
            for slot in node.connections.iter_mut() {
                if *slot == addr {
                    *slot = 0;
                } else if *slot > addr {
                    *slot -= 1;
                }
            }
        }
    }

    /// Equality used for macro-classifier merging: node lists, update
    /// budget and dimensions must be identical; the mutation rate is
    /// ignored.
    pub fn structural_eq(&self, other: &Genome) -> bool {
        self.n_inputs == other.n_inputs
            && self.n_outputs == other.n_outputs
            && self.update_budget == other.update_budget
            && self.nodes == other.nodes
    }

    /// Checks every genome invariant against `cfg`.
    pub fn validate(&self, cfg: &FlnConfig) -> Result<(), String> {
        if self.nodes.len() < 1 + self.n_outputs {
            return Err(format!(
                "{} executable nodes cannot hold match plus {} outputs",
                self.nodes.len(),
                self.n_outputs
            ));
        }
        if self.node_count() > cfg.max_nodes {
            return Err(format!("node count {} exceeds cap {}", self.node_count(), cfg.max_nodes));
        }
        if self.update_budget < cfg.min_update_budget || self.update_budget > cfg.max_update_budget {
            return Err(format!("update budget {} out of range", self.update_budget));
        }
        if !(self.mutation_rate >= cfg.min_mutation_rate && self.mutation_rate <= 1.0) {
            return Err(format!("mutation rate {} out of range", self.mutation_rate));
        }
        let max_addr = self.node_count();
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(&c) = node.connections.iter().find(|&&c| c > max_addr) {
                return Err(format!("node {i} connection {c} exceeds address space {max_addr}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn apply_matches_binary_logic() {
        assert_eq!(FuzzyFunction::Max.apply(&[0.3, 0.7]), 0.7);
        assert_eq!(FuzzyFunction::Product.apply(&[0.5, 0.4]), 0.2);
        assert_eq!(FuzzyFunction::BoundedSum.apply(&[0.8, 0.8]), 1.0);
        assert_eq!(FuzzyFunction::Not.apply(&[0.25]), 0.75);
        assert_eq!(FuzzyFunction::Identity.apply(&[0.42]), 0.42);
    }

    #[test]
    fn not_and_identity_ignore_extra_args() {
        assert_eq!(FuzzyFunction::Not.apply(&[0.25, 0.9, 0.1]), 0.75);
        assert_eq!(FuzzyFunction::Identity.apply(&[0.42, 0.0]), 0.42);
    }

    #[test]
    fn id_round_trips() {
        for id in 0..FuzzyFunction::COUNT {
            assert_eq!(FuzzyFunction::from_id(id).unwrap().id(), id);
        }
        assert!(FuzzyFunction::from_id(6).is_none());
    }

    #[test]
    #[should_panic(expected = "empty argument list")]
    fn apply_rejects_empty_args() {
        FuzzyFunction::Max.apply(&[]);
    }

    fn two_node_genome(match_node: Node, output_node: Node) -> Genome {
        Genome {
            n_inputs: 1,
            n_outputs: 1,
            nodes: vec![match_node, output_node],
            update_budget: 20,
            mutation_rate: 0.1,
        }
    }

    #[test]
    fn node_output_reads_inputs_and_state() {
        let g = two_node_genome(
            Node { function: FuzzyFunction::Not, connections: [1, 0, 0, 0, 0] },
            Node { function: FuzzyFunction::Min, connections: [1, 2, 0, 0, 0] },
        );
        // NOT of the clamped input.
        assert_eq!(g.node_output(0, &[0.5, 0.5], &[0.2]), 0.8);
        // min over input 0.9 and the first executable node's state 0.4.
        assert_eq!(g.node_output(1, &[0.4, 0.5], &[0.9]), 0.4);
    }

    #[test]
    fn node_output_without_active_connections_holds_state() {
        let g = two_node_genome(
            Node { function: FuzzyFunction::Max, connections: [0, 0, 0, 0, 0] },
            Node { function: FuzzyFunction::Identity, connections: [1, 0, 0, 0, 0] },
        );
        assert_eq!(g.node_output(0, &[0.37, 0.5], &[0.9]), 0.37);
    }

    #[test]
    fn evaluate_copies_input_through_identity_nodes() {
        let g = two_node_genome(
            Node { function: FuzzyFunction::Identity, connections: [1, 0, 0, 0, 0] },
            Node { function: FuzzyFunction::Identity, connections: [1, 0, 0, 0, 0] },
        );
        let out = g.evaluate(&[0.7], &FlnConfig::default(), &mut rng(7));
        // Both nodes copy the clamped input once updated; with T=20 over two
        // nodes the schedule reaches each of them.
        assert_eq!(out.match_degree, 0.7);
        assert_eq!(out.actions, vec![0.7]);
    }

    #[test]
    fn single_update_leaves_other_node_at_initial_state() {
        let mut g = two_node_genome(
            Node { function: FuzzyFunction::Identity, connections: [1, 0, 0, 0, 0] },
            Node { function: FuzzyFunction::Identity, connections: [1, 0, 0, 0, 0] },
        );
        g.update_budget = 1;
        let out = g.evaluate(&[0.9], &FlnConfig::default(), &mut rng(3));
        let touched_match = out.match_degree == 0.9;
        let touched_action = out.actions[0] == 0.9;
        assert!(touched_match != touched_action, "exactly one node is updated");
        if touched_match {
            assert_eq!(out.actions[0], 0.5);
        } else {
            assert_eq!(out.match_degree, 0.5);
        }
    }

    #[test]
    fn evaluate_is_deterministic_under_a_fixed_seed() {
        let cfg = FlnConfig::default();
        let g = Genome::random(2, 1, &cfg, &mut rng(11));
        let a = g.evaluate(&[0.3, 0.8], &cfg, &mut rng(42));
        let b = g.evaluate(&[0.3, 0.8], &cfg, &mut rng(42));
        assert_eq!(a, b);
    }

    #[test]
    fn connectivity_counts_distinct_sources() {
        let g = Genome {
            n_inputs: 1,
            n_outputs: 1,
            nodes: vec![
                Node { function: FuzzyFunction::Max, connections: [1, 1, 2, 0, 0] },
                Node { function: FuzzyFunction::Min, connections: [0, 0, 0, 0, 0] },
            ],
            update_budget: 10,
            mutation_rate: 0.5,
        };
        // First node reads sources {1, 2}, second reads nothing.
        assert_eq!(g.connectivity(), 1.0);
    }

    #[test]
    fn random_genome_is_minimal() {
        let cfg = FlnConfig::default();
        let g = Genome::random(1, 1, &cfg, &mut rng(0));
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.nodes.len(), 2);
        g.validate(&cfg).unwrap();
    }

    #[test]
    fn random_genome_rate_and_budget_means() {
        let cfg = FlnConfig::default();
        let mut r = rng(5);
        let n = 10_000;
        let mut mu_sum = 0.0;
        let mut t_sum = 0.0;
        for _ in 0..n {
            let g = Genome::random(1, 1, &cfg, &mut r);
            mu_sum += g.mutation_rate;
            t_sum += g.update_budget as f64;
        }
        let mu_mean = mu_sum / n as f64;
        let t_mean = t_sum / n as f64;
        assert!((mu_mean - 0.5).abs() < 0.02, "mean initial rate {mu_mean}");
        assert!((t_mean - 25.5).abs() < 0.5, "mean initial budget {t_mean}");
    }

    #[test]
    fn mutation_with_floor_rate_preserves_genes() {
        let cfg = FlnConfig::default();
        let mut parent = Genome::random(1, 1, &cfg, &mut rng(2));
        parent.mutation_rate = cfg.min_mutation_rate;
        // With the rate clamped at the floor every per-gene flip is a 5e-4
        // event; this seed draws none.
        let child = parent.mutate(&cfg, &mut rng(1));
        assert!(child.structural_eq(&parent));
        assert!(child.mutation_rate >= cfg.min_mutation_rate);
    }

    #[test]
    fn remove_node_rewires_connections() {
        // Three executable nodes; addresses: input=1, match=2, output=3, hidden=4.
        let mut g = Genome {
            n_inputs: 1,
            n_outputs: 1,
            nodes: vec![
                Node { function: FuzzyFunction::Identity, connections: [4, 0, 0, 0, 0] },
                Node { function: FuzzyFunction::Max, connections: [3, 4, 1, 0, 0] },
                Node { function: FuzzyFunction::Min, connections: [2, 0, 0, 0, 0] },
            ],
            update_budget: 10,
            mutation_rate: 0.5,
        };
        g.remove_node(2);
        assert_eq!(g.nodes.len(), 2);
        // References to the removed address 4 become 0; lower ones survive.
        assert_eq!(g.nodes[0].connections, [0, 0, 0, 0, 0]);
        assert_eq!(g.nodes[1].connections, [3, 0, 1, 0, 0]);
        g.validate(&FlnConfig::default()).unwrap();
    }

    #[test]
    fn remove_node_shifts_higher_addresses() {
        // Two hidden nodes at addresses 4 and 5; drop the first.
        let mut g = Genome {
            n_inputs: 1,
            n_outputs: 1,
            nodes: vec![
                Node { function: FuzzyFunction::Identity, connections: [5, 0, 0, 0, 0] },
                Node { function: FuzzyFunction::Max, connections: [4, 5, 0, 0, 0] },
                Node { function: FuzzyFunction::Min, connections: [1, 0, 0, 0, 0] },
                Node { function: FuzzyFunction::Min, connections: [2, 0, 0, 0, 0] },
            ],
            update_budget: 10,
            mutation_rate: 0.5,
        };
        g.remove_node(2);
        assert_eq!(g.nodes[0].connections, [4, 0, 0, 0, 0]);
        assert_eq!(g.nodes[1].connections, [0, 4, 0, 0, 0]);
    }

    #[test]
    fn saturated_rate_redraws_genes_uniformly() {
        let cfg = FlnConfig::default();
        let parent = Genome {
            n_inputs: 1,
            n_outputs: 1,
            nodes: vec![
                Node { function: FuzzyFunction::Max, connections: [1, 2, 3, 0, 1] },
                Node { function: FuzzyFunction::Not, connections: [2, 2, 2, 2, 2] },
            ],
            update_budget: 25,
            mutation_rate: 1.0,
        };
        let max_addr = parent.node_count();
        let mut changed = 0u64;
        let mut total = 0u64;
        let mut accepted = 0;
        let mut seed = 0u64;
        // Keep only mutations whose log-normal draw leaves the rate
        // saturated at 1, then count redrawn connection genes. A uniform
        // redraw over [0, N] repeats the old value with probability 1/(N+1).
        while accepted < 2_000 {
            seed += 1;
            let mut r = rng(seed);
            let gauss: f64 = r.clone().sample(StandardNormal);
            if gauss <= 0.0 {
                continue;
            }
            let child = parent.mutate(&cfg, &mut r);
            assert_eq!(child.mutation_rate, 1.0);
            accepted += 1;
            for (p, c) in parent.nodes.iter().zip(child.nodes.iter()) {
                for (a, b) in p.connections.iter().zip(c.connections.iter()) {
                    total += 1;
                    if a != b {
                        changed += 1;
                    }
                }
            }
        }
        let expected = 1.0 - 1.0 / (max_addr as f64 + 1.0);
        let observed = changed as f64 / total as f64;
        assert!(
            (observed - expected).abs() < 0.02,
            "gene change rate {observed} vs {expected}"
        );
    }

    #[test]
    fn mutate_is_deterministic_under_a_fixed_seed() {
        let cfg = FlnConfig::default();
        let parent = Genome::random(1, 1, &cfg, &mut rng(9));
        let a = parent.mutate(&cfg, &mut rng(100));
        let b = parent.mutate(&cfg, &mut rng(100));
        assert_eq!(a, b);
    }

    #[test]
    fn structural_eq_ignores_mutation_rate_only() {
        let cfg = FlnConfig::default();
        let g = Genome::random(1, 1, &cfg, &mut rng(4));
        assert!(g.structural_eq(&g));

        let mut mu_copy = g.clone();
        mu_copy.mutation_rate = (g.mutation_rate * 0.5).max(cfg.min_mutation_rate);
        assert!(g.structural_eq(&mu_copy));

        let mut conn_copy = g.clone();
        conn_copy.nodes[0].connections[0] = (conn_copy.nodes[0].connections[0] + 1) % (g.node_count() + 1);
        assert!(!g.structural_eq(&conn_copy));

        let mut budget_copy = g.clone();
        budget_copy.update_budget += 1;
        assert!(!g.structural_eq(&budget_copy));
    }

    #[test]
    fn structural_eq_is_an_equivalence_relation() {
        let cfg = FlnConfig::default();
        let mut r = rng(21);
        for _ in 0..200 {
            let a = Genome::random(2, 1, &cfg, &mut r);
            let mut b = a.clone();
            b.mutation_rate = rand::Rng::gen_range(&mut r, cfg.min_mutation_rate..=1.0);
            let c = b.clone();
            assert!(a.structural_eq(&a));
            assert!(a.structural_eq(&b) == b.structural_eq(&a));
            if a.structural_eq(&b) && b.structural_eq(&c) {
                assert!(a.structural_eq(&c));
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arg_vec() -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(0.0f64..=1.0, 1..=K_MAX)
        }

        proptest! {
            #[test]
            fn apply_is_closed_over_unit_interval(id in 0u8..6, args in arg_vec()) {
                let f = FuzzyFunction::from_id(id).unwrap();
                let out = f.apply(&args);
                prop_assert!((0.0..=1.0).contains(&out));
            }

            #[test]
            fn apply_on_pairs_equals_binary_formula(id in 0u8..6, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
                let f = FuzzyFunction::from_id(id).unwrap();
                let expected = match f {
                    FuzzyFunction::Max => x.max(y),
                    FuzzyFunction::Product => x * y,
                    FuzzyFunction::Min => x.min(y),
                    FuzzyFunction::BoundedSum => (x + y).min(1.0),
                    FuzzyFunction::Not => 1.0 - x,
                    FuzzyFunction::Identity => x,
                };
                prop_assert_eq!(f.apply(&[x, y]), expected);
            }

            #[test]
            fn mutation_preserves_invariants(seed in 0u64..1_000, steps in 1usize..20) {
                let cfg = FlnConfig::default();
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let mut g = Genome::random(1, 1, &cfg, &mut r);
                for _ in 0..steps {
                    g = g.mutate(&cfg, &mut r);
                    prop_assert!(g.validate(&cfg).is_ok(), "{:?}", g.validate(&cfg));
                }
            }

            #[test]
            fn states_stay_in_unit_interval(seed in 0u64..500) {
                let cfg = FlnConfig::default();
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let mut g = Genome::random(1, 1, &cfg, &mut r);
                for _ in 0..5 {
                    g = g.mutate(&cfg, &mut r);
                }
                let input = [r.gen_range(0.0..=1.0)];
                let mut state = vec![cfg.initial_state; g.nodes.len()];
                for _ in 0..g.update_budget {
                    let i = r.gen_range(0..g.nodes.len());
                    state[i] = g.node_output(i, &state, &input);
                    prop_assert!(state.iter().all(|v| (0.0..=1.0).contains(v)));
                }
            }
        }
    }
}
