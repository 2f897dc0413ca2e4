//! Worst-case lifetime of a small heterogeneous network: both MCN candidates,
//! the chosen one, and the exhaustive optimum.

use intercomm::fixtures::markov_chain;
use intercomm::lifetime::{brute_force_lifetime, optimize_lifetime, EnergyParams};
use intercomm::ProtocolKind;
use num::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() -> intercomm::Result<()> {
    let js = markov_chain(4, 8);
    let params = EnergyParams::new(
        vec![q(4, 1), q(1, 1), q(9, 1), q(5, 2)],
        q(1, 2),
        vec![q(60, 1), q(20, 1), q(120, 1), q(50, 1)],
        q(2000, 1),
    )?;
    let best = optimize_lifetime(&js, &params, ProtocolKind::TwoMessage)?;
    print!("{best}");
    let oracle = brute_force_lifetime(&js, &params, ProtocolKind::TwoMessage)?;
    println!(
        "exhaustive optimum: schedule {} inverse {}",
        oracle.schedule, oracle.inverse
    );
    Ok(())
}
