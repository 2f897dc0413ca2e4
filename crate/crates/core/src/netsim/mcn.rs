use super::leach::Clustering;
use super::topology::{pairwise_bits, Topology};
use super::{ceil_bits, DownlinkMode, Micro, NetworkParams};
use crate::bits::ceil_log2;

fn downlink_bits(mode: DownlinkMode, b: u32, n: u32) -> u64 {
    match mode {
        DownlinkMode::Index => u64::from(b) + u64::from(ceil_log2(u64::from(n))),
        DownlinkMode::Literal => 1u64.checked_shl(b).map_or(u64::MAX, |s| s.saturating_mul(u64::from(n))),
    }
}

/// MCN polling order of one cluster with each member's uplink bits.
///
/// `cur[k]` always holds member `k`'s conditional bits given everything
/// polled so far, so each greedy step is linear.
pub(crate) fn poll_order(
    topology: &Topology,
    head: usize,
    members: &[usize],
    params: &NetworkParams,
) -> Vec<(usize, u32)> {
    let model = params.correlation();
    let mut cur: Vec<u32> = members
        .iter()
        .map(|&j| {
            if params.head_side_info {
                pairwise_bits(model, topology.distance(j, head))
            } else {
                params.max_bits
            }
        })
        .collect();
    let tx: Vec<Micro> = members
        .iter()
        .map(|&j| params.tx_per_bit(topology.distance(j, head)))
        .collect();
    let mut pending: Vec<usize> = (0..members.len()).collect();
    let mut order = Vec::with_capacity(members.len());
    while !pending.is_empty() {
        // pending stays sorted by member index, so min_by_key breaks ties low
        let (slot, &k) = pending
            .iter()
            .enumerate()
            .min_by_key(|&(_, &k)| u64::from(cur[k]).saturating_mul(tx[k]))
            .expect("non-empty");
        pending.remove(slot);
        order.push((members[k], cur[k]));
        for &q in &pending {
            let b = pairwise_bits(model, topology.distance(members[q], members[k]));
            cur[q] = cur[q].min(b);
        }
    }
    order
}

/// Uncapped energy each node would spend in one MCN round.
pub fn round_mcn(topology: &Topology, clustering: &Clustering, params: &NetworkParams) -> Vec<Micro> {
    let n = params.max_bits;
    let rx = params.rx_per_bit();
    let mut spend = vec![0 as Micro; topology.len()];
    for &h in &clustering.heads {
        let members = clustering.members(h);
        let mut collected = u64::from(n);
        for (j, b) in poll_order(topology, h, &members, params) {
            let tx = params.tx_per_bit(topology.distance(j, h));
            let down = downlink_bits(params.downlink, b, n);
            let up = u64::from(b);
            collected += up;
            spend[j] = spend[j]
                .saturating_add(up.saturating_mul(tx))
                .saturating_add(down.saturating_mul(rx));
            spend[h] = spend[h]
                .saturating_add(down.saturating_mul(tx))
                .saturating_add(up.saturating_mul(rx));
        }
        let forwarded = ceil_bits(params.forward_ratio, collected);
        spend[h] = spend[h].saturating_add(forwarded.saturating_mul(params.tx_per_bit(topology.distance_to_bs(h))));
    }
    spend
}
