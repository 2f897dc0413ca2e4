//! Runs the two-message protocol on one realization, prints the wire
//! transcript, and decodes it back.

use intercomm::fixtures::ring;
use intercomm::protocol::{decode_transcript, run_transcript};
use intercomm::{ProtocolKind, Schedule, Transcript};

fn main() -> intercomm::Result<()> {
    let js = ring(4);
    let schedule = Schedule::identity(2);
    let truth = [1, 2];
    let t = run_transcript(&js, &schedule, ProtocolKind::TwoMessage, &truth)?;
    print!("{}", t.dump());
    let bits = t.bit_counts(js.num_informants());
    println!("uplink bits {:?}, downlink bits {:?}", bits.uplink, bits.downlink);

    let reparsed = Transcript::parse_dump(&t.dump())?;
    let decoded = decode_transcript(&js, &schedule, ProtocolKind::TwoMessage, &reparsed)?;
    println!("decoded {decoded:?}");
    assert_eq!(decoded, truth);
    Ok(())
}
