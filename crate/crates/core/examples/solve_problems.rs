//! Solves all four communication objectives on a 4-informant Markov chain
//! and on a copy-plus-independent support.

use intercomm::fixtures::{copy_plus_independent, markov_chain};
use intercomm::scheduling::solve_problem;
use intercomm::Problem;

fn main() -> intercomm::Result<()> {
    for (name, js) in [
        ("markov4x8", markov_chain(4, 8)),
        ("copy_plus_independent4", copy_plus_independent(4)),
    ] {
        println!("== {name}");
        for problem in Problem::ALL {
            let r = solve_problem(&js, problem)?;
            let gap = r
                .heuristic
                .as_ref()
                .map(|h| format!(", greedy gap {}", h.gap))
                .unwrap_or_default();
            println!(
                "problem {problem}: {} with schedule {} -> {} bits{gap}",
                r.kind, r.schedule, r.objective
            );
        }
    }
    Ok(())
}
