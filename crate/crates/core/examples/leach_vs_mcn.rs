//! Paired runs on one seeded network: MCN polling against LEACH at several
//! compression ratios, with the alive-node curve sampled every hundred rounds.

use intercomm::netsim::{simulate_instance, NetworkParams, Protocol};

fn main() {
    let params = NetworkParams::default();
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    for protocol in [
        Protocol::Mcn,
        Protocol::Leach { ratio: 0.1 },
        Protocol::Leach { ratio: 0.2 },
        Protocol::Leach { ratio: 0.5 },
    ] {
        let out = simulate_instance(&params, protocol, seed, 0, false);
        let curve: Vec<String> = out
            .rounds
            .iter()
            .filter(|r| r.round % 100 == 0)
            .map(|r| r.alive.to_string())
            .collect();
        println!(
            "{protocol:>11}: lifetime {:>6}  alive every 100 rounds: {}",
            out.lifetime,
            curve.join(" ")
        );
    }
}
