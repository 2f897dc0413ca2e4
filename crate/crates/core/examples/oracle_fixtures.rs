//! Generates a few random supports and prints their exhaustive oracle answers.

use intercomm::fixtures::generate;

fn main() -> intercomm::Result<()> {
    for fixture in generate(7, 3, 4, 5)? {
        println!("== {}", fixture.name);
        print!("{}", fixture.support.to_text());
        print!("{}", fixture.oracle_text());
    }
    Ok(())
}
