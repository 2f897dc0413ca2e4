//! Mean lifetime against network size for MCN and LEACH (r = 0.5).

use intercomm::netsim::{sweep, NetworkParams, Protocol, SweepPoint};

fn main() {
    let params = NetworkParams::default();
    let instances = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    for protocol in [Protocol::Mcn, Protocol::Leach { ratio: 0.5 }] {
        println!("{protocol}");
        print!("{}", SweepPoint::csv_header());
        for point in sweep(&params, protocol, &[25, 50, 100, 200], instances, 1) {
            print!("{}", point.csv_row());
        }
    }
}
