//! Walks the prefix-exchange path from a reversed schedule to the MCN
//! schedule on random supports and shows the max-uplink objective never
//! increases along it.

use intercomm::fixtures::random_support;
use intercomm::scheduling::verify_exchange_argument;
use intercomm::Schedule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> intercomm::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let js = random_support(&mut rng, 5, 6);
        let start = Schedule::new((0..5).rev().collect())?;
        let audit = verify_exchange_argument(&js, &start)?;
        println!("target (MCN) {}", audit.target);
        for (s, v) in audit.path.iter().zip(&audit.objectives) {
            println!("  {s}  max uplink {v}");
        }
        println!("  {} exchanges, monotone: {}", audit.exchanges(), audit.holds());
    }
    Ok(())
}
