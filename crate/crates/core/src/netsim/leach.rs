use rand::Rng;

use super::topology::{NodeState, Topology};
use super::{ceil_bits, Micro, NetworkParams};

/// Heads of one round and each alive node's head (a head maps to itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    pub heads: Vec<usize>,
    pub head_of: Vec<Option<usize>>,
    /// No node was elected; the alive node nearest the base station stands in.
    pub fallback: bool,
}

impl Clustering {
    /// Members of `head`'s cluster, excluding the head, in index order.
    pub fn members(&self, head: usize) -> Vec<usize> {
        self.head_of
            .iter()
            .enumerate()
            .filter(|&(i, h)| *h == Some(head) && i != head)
            .map(|(i, _)| i)
            .collect()
    }
}

fn epoch_length(p: f64) -> u64 {
    (1.0 / p - 1e-9).ceil() as u64
}

/// LEACH threshold election. Consumes exactly one uniform draw per alive
/// node, in index order, whether or not the node is eligible.
pub fn leach_elect<R: Rng + ?Sized>(
    topology: &Topology,
    states: &mut [NodeState],
    round: u64,
    p: f64,
    rng: &mut R,
) -> Clustering {
    let epoch = epoch_length(p);
    let slot = round % epoch;
    if slot == 0 {
        states.iter_mut().for_each(|s| s.served = false);
    }
    let threshold = p / (1.0 - p * slot as f64);
    let mut heads = Vec::new();
    for (i, s) in states.iter_mut().enumerate() {
        if !s.alive() {
            continue;
        }
        let u: f64 = rng.random();
        if !s.served && u < threshold {
            s.served = true;
            heads.push(i);
        }
    }
    // a stand-in head keeps its epoch slot, so elected heads still rotate
    // through every node exactly once per epoch
    let fallback = heads.is_empty();
    if fallback {
        let nearest = (0..states.len())
            .filter(|&i| states[i].alive())
            .min_by(|&a, &b| topology.distance_to_bs(a).total_cmp(&topology.distance_to_bs(b)));
        heads.extend(nearest);
    }
    let head_of = (0..states.len())
        .map(|i| {
            if !states[i].alive() {
                return None;
            }
            // min_by keeps the first minimum, so ties go to the lowest head index
            heads
                .iter()
                .copied()
                .min_by(|&a, &b| topology.distance(i, a).total_cmp(&topology.distance(i, b)))
        })
        .collect();
    Clustering {
        heads,
        head_of,
        fallback,
    }
}

/// Uncapped energy each node would spend in one LEACH round.
pub fn round_leach(topology: &Topology, clustering: &Clustering, params: &NetworkParams, ratio: f64) -> Vec<Micro> {
    let n = u64::from(params.max_bits);
    let rx = params.rx_per_bit();
    let mut spend = vec![0 as Micro; topology.len()];
    for &h in &clustering.heads {
        let members = clustering.members(h);
        for &j in &members {
            spend[j] = spend[j].saturating_add(n.saturating_mul(params.tx_per_bit(topology.distance(j, h))));
        }
        let m = members.len() as u64;
        let forwarded = ceil_bits(ratio, n * (m + 1));
        let head_cost = (n * m)
            .saturating_mul(rx)
            .saturating_add(forwarded.saturating_mul(params.tx_per_bit(topology.distance_to_bs(h))));
        spend[h] = spend[h].saturating_add(head_cost);
    }
    spend
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netsim::topology::Point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> Topology {
        Topology {
            radius: 100.0,
            positions: xs.iter().map(|&x| Point { x, y: 0.0 }).collect(),
        }
    }

    fn fresh(n: usize) -> Vec<NodeState> {
        vec![
            NodeState {
                remaining: 1,
                served: false
            };
            n
        ]
    }

    #[test]
    fn single_alive_node_is_head() {
        let topo = line(&[3.0, 5.0]);
        let mut states = fresh(2);
        states[0].remaining = 0;
        let c = leach_elect(&topo, &mut states, 7, 0.05, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(c.heads, vec![1]);
        assert_eq!(c.head_of, vec![None, Some(1)]);
    }

    #[test]
    fn last_slot_of_epoch_elects_every_eligible_node() {
        let topo = line(&[1.0, 2.0, 3.0]);
        let mut states = fresh(3);
        states[1].served = true;
        let c = leach_elect(&topo, &mut states, 3, 0.25, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(c.heads, vec![0, 2]);
        assert_eq!(c.head_of, vec![Some(0), Some(0), Some(2)]);
    }

    #[test]
    fn single_node_head_sends_compressed_reading() {
        let topo = line(&[1.0]);
        let params = NetworkParams {
            max_bits: 8,
            tx_electronics: 0.0,
            head_side_info: false,
            ..Default::default()
        };
        let c = Clustering {
            heads: vec![0],
            head_of: vec![Some(0)],
            fallback: false,
        };
        // ⌈0.5·8⌉ = 4 bits at 1·1² per bit
        assert_eq!(round_leach(&topo, &c, &params, 0.5), vec![4_000_000]);
    }

    #[test]
    fn member_pays_raw_reading_to_head() {
        let topo = line(&[2.0, 3.0]);
        let params = NetworkParams {
            max_bits: 8,
            rx_cost: 0.5,
            tx_electronics: 0.0,
            head_side_info: false,
            ..Default::default()
        };
        let c = Clustering {
            heads: vec![0],
            head_of: vec![Some(0), Some(0)],
            fallback: false,
        };
        let spend = round_leach(&topo, &c, &params, 1.0);
        assert_eq!(spend[1], 8_000_000);
        // receive 8 bits at 0.5, forward 16 bits at 2² per bit
        assert_eq!(spend[0], 4_000_000 + 64_000_000);
    }

    #[test]
    fn electronics_cost_is_paid_per_bit_at_any_distance() {
        let topo = line(&[0.0]);
        let params = NetworkParams {
            max_bits: 8,
            tx_electronics: 3.0,
            ..Default::default()
        };
        let c = Clustering {
            heads: vec![0],
            head_of: vec![Some(0)],
            fallback: false,
        };
        // a head on top of the base station still pays 3 per bit for ⌈0.5·8⌉ bits
        assert_eq!(round_leach(&topo, &c, &params, 0.5), vec![12_000_000]);
    }
}
