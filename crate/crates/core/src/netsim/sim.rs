use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::leach::{leach_elect, round_leach};
use super::mcn::round_mcn;
use super::topology::{place_nodes, NodeState, Topology};
use super::{format_micro, to_micro, Micro, NetworkParams, Protocol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSummary {
    /// 1-based.
    pub round: u64,
    /// Alive after the round's deaths are applied.
    pub alive: usize,
    pub spent: Micro,
}

/// Full per-node record of one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub round: u64,
    pub alive: usize,
    pub spent: Vec<Micro>,
    pub head_of: Vec<Option<usize>>,
}

impl RoundLog {
    pub fn total_spent(&self) -> Micro {
        self.spent.iter().sum()
    }

    /// `round R alive A spent S`, then one `node i head h spent s` line per
    /// node that took part, in index order.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "round {} alive {} spent {}\n",
            self.round,
            self.alive,
            format_micro(self.total_spent())
        );
        for (i, h) in self.head_of.iter().enumerate() {
            if let Some(h) = h {
                writeln!(out, "node {i} head {h} spent {}", format_micro(self.spent[i])).unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub protocol: Protocol,
    /// Rounds after which more than two nodes were still alive.
    pub lifetime: u64,
    pub rounds: Vec<RoundSummary>,
    /// Empty unless logs were requested.
    pub logs: Vec<RoundLog>,
}

impl SimOutcome {
    pub fn rounds_csv(&self) -> String {
        let mut out = String::from("round,alive,energy_spent_total\n");
        for r in &self.rounds {
            writeln!(out, "{},{},{}", r.round, r.alive, format_micro(r.spent)).unwrap();
        }
        out
    }

    pub fn logs_dump(&self) -> String {
        self.logs.iter().map(RoundLog::dump).collect()
    }
}

/// Independent generators for placement and for elections of one instance.
/// The same `(seed, instance)` gives every protocol the same topology.
pub fn instance_rngs(seed: u64, instance: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let stream = |s: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s);
        rng
    };
    (stream(2 * instance), stream(2 * instance + 1))
}

/// Runs rounds until at most two nodes are alive or `max_rounds` is reached.
pub fn simulate<R: Rng + ?Sized>(
    topology: &Topology,
    params: &NetworkParams,
    protocol: Protocol,
    rng: &mut R,
    keep_logs: bool,
) -> SimOutcome {
    let initial = to_micro(params.initial_energy);
    let mut states = vec![
        NodeState {
            remaining: initial,
            served: false
        };
        topology.len()
    ];
    let mut alive = states.iter().filter(|s| s.alive()).count();
    let mut outcome = SimOutcome {
        protocol,
        lifetime: 0,
        rounds: Vec::new(),
        logs: Vec::new(),
    };
    let mut round = 0;
    while alive > 2 && round < params.max_rounds {
        let clustering = leach_elect(topology, &mut states, round, params.head_fraction, rng);
        let wanted = match protocol {
            Protocol::Leach { ratio } => round_leach(topology, &clustering, params, ratio),
            Protocol::Mcn => round_mcn(topology, &clustering, params),
        };
        let spent: Vec<Micro> = states
            .iter_mut()
            .zip(wanted)
            .map(|(s, w)| {
                let paid = w.min(s.remaining);
                s.remaining -= paid;
                paid
            })
            .collect();
        alive = states.iter().filter(|s| s.alive()).count();
        round += 1;
        outcome.rounds.push(RoundSummary {
            round,
            alive,
            spent: spent.iter().sum(),
        });
        if keep_logs {
            outcome.logs.push(RoundLog {
                round,
                alive,
                spent,
                head_of: clustering.head_of,
            });
        }
        if alive > 2 {
            outcome.lifetime = round;
        }
    }
    outcome
}

pub fn simulate_instance(
    params: &NetworkParams,
    protocol: Protocol,
    seed: u64,
    instance: u64,
    keep_logs: bool,
) -> SimOutcome {
    let (mut place_rng, mut elect_rng) = instance_rngs(seed, instance);
    let topology = place_nodes(params.nodes, params.radius, &mut place_rng);
    simulate(&topology, params, protocol, &mut elect_rng, keep_logs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub nodes: usize,
    pub lifetimes: Vec<u64>,
}

impl SweepPoint {
    pub fn mean(&self) -> f64 {
        if self.lifetimes.is_empty() {
            return 0.0;
        }
        self.lifetimes.iter().sum::<u64>() as f64 / self.lifetimes.len() as f64
    }

    /// Sample standard deviation; zero for fewer than two instances.
    pub fn stddev(&self) -> f64 {
        let k = self.lifetimes.len();
        if k < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self.lifetimes.iter().map(|&l| (l as f64 - mean).powi(2)).sum();
        (ss / (k - 1) as f64).sqrt()
    }

    pub fn csv_header() -> &'static str {
        "N,mean_lifetime,stddev,instances\n"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.3},{:.3},{}\n",
            self.nodes,
            self.mean(),
            self.stddev(),
            self.lifetimes.len()
        )
    }
}

/// Lifetimes of `instances` seeded networks for each size in `nodes`.
/// Instances run in parallel and are collected in index order.
pub fn sweep(
    params: &NetworkParams,
    protocol: Protocol,
    nodes: &[usize],
    instances: u64,
    seed: u64,
) -> Vec<SweepPoint> {
    nodes
        .iter()
        .map(|&n| {
            let p = NetworkParams {
                nodes: n,
                ..params.clone()
            };
            let lifetimes = (0..instances)
                .into_par_iter()
                .map(|i| simulate_instance(&p, protocol, seed, i, false).lifetime)
                .collect();
            SweepPoint { nodes: n, lifetimes }
        })
        .collect()
}
