//! Runs the greedy-versus-exhaustive audits and prints one line per audit.

use intercomm::audit::{run_all, AuditConfig};

fn main() {
    let report = run_all(&AuditConfig::default());
    print!("{report}");
    let text = report.counterexamples_text();
    if !text.is_empty() {
        println!("first counterexample:");
        for line in text.lines().take(20) {
            println!("  {line}");
        }
    }
}
