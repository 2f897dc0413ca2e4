//! Ambiguity sets of the ring and XOR supports, and why conditioning on an
//! intersection of contexts is not the same as intersecting ambiguity sets.

use intercomm::fixtures::{ring, xor};
use intercomm::ConditioningContext;

fn main() -> intercomm::Result<()> {
    let js = ring(4);
    println!("ring support, 2 informants over 4 symbols");
    for x0 in 0..4 {
        let ctx = ConditioningContext::new([(0, x0)])?;
        let set = js.ambiguity_set(&ctx, 1)?;
        println!("  X1 given X0={x0}: {:?}", set.values());
    }
    println!(
        "  max ambiguity of X1 given X0: {}",
        js.max_conditional_ambiguity(&[0], 1)?
    );
    println!(
        "  max ambiguity of X1 alone:    {}",
        js.max_conditional_ambiguity(&[], 1)?
    );

    let js = xor();
    println!("\nxor support: X2 = X0 ^ X1");
    for (given, label) in [
        (&[][..], "nothing"),
        (&[0][..], "X0"),
        (&[1][..], "X1"),
        (&[0, 1][..], "X0,X1"),
    ] {
        println!(
            "  max ambiguity of X2 given {label}: {}",
            js.max_conditional_ambiguity(given, 2)?
        );
    }
    let a = js.ambiguity_set(&ConditioningContext::new([(0, 0)])?, 2)?;
    let b = js.ambiguity_set(&ConditioningContext::new([(1, 1)])?, 2)?;
    let both = js.ambiguity_set(&ConditioningContext::new([(0, 0), (1, 1)])?, 2)?;
    println!(
        "  given X0=0: {:?}, given X1=1: {:?}, given both: {:?}",
        a.values(),
        b.values(),
        both.values()
    );
    println!("  the joint set is a strict subset of the intersection");
    Ok(())
}
