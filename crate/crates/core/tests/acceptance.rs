//! One PASS/FAIL line per acceptance criterion, with its measured numbers.
//!
//! A criterion listed in `KNOWN_DIVERGENT` reproduces a documented mismatch
//! between a claimed result and the exhaustive oracle. Its FAIL line is still
//! printed, but it does not fail the run; an unexpected PASS there does.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use intercomm::audit::{self, AuditConfig, AuditOutcome, VerifyReport};
use intercomm::cli::{self, Command, Config};
use intercomm::netsim::{simulate_instance, sweep, NetworkParams, Protocol};
use intercomm::JointSupport;

/// Greedy MCN-sum is not optimal for the summed base-station objective.
const KNOWN_DIVERGENT: &[&str] = &["lemma2-lemma3-equivalence"];

struct Line {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn rate(o: &AuditOutcome) -> String {
    format!("{}/{} agree", o.agreements, o.cases)
}

fn lemma1(cfg: &AuditConfig) -> Line {
    let (o, t) = timed(|| audit::lemma1(cfg));
    Line {
        name: "lemma1-equivalence",
        pass: o.passed() && o.cases == 1000 && t < Duration::from_secs(60),
        detail: format!("{} in {:.1}s (limit 60s)", rate(&o), t.as_secs_f64()),
    }
}

fn lemma23(cfg: &AuditConfig) -> Line {
    let l2 = audit::lemma2(cfg);
    let l3 = audit::lemma3(cfg);
    Line {
        name: "lemma2-lemma3-equivalence",
        pass: l2.passed() && l3.passed() && l2.cases == 500 && l3.cases == 500,
        detail: format!("mcn_sum {}, mcn_max {}", rate(&l2), rate(&l3)),
    }
}

fn theorem3(cfg: &AuditConfig, dir: &Path) -> Line {
    let o = audit::theorem3(cfg);
    let path = dir.join("counterexamples.txt");
    let report = VerifyReport {
        outcomes: vec![o.clone()],
    };
    fs::write(&path, report.counterexamples_text()).unwrap();
    let written = fs::read_to_string(&path).unwrap();
    let all_reported = o
        .counterexamples
        .iter()
        .all(|c| written.contains(&format!("== {} {}\n", c.audit, c.case)));
    let sections = written.matches("== ").count();
    Line {
        name: "theorem3-audit",
        pass: o.cases == 500 && all_reported && sections == o.cases - o.agreements,
        detail: format!(
            "{} ({:.1}%), {sections} disagreements in the counterexample report",
            rate(&o),
            100.0 * o.agreement_rate()
        ),
    }
}

fn protocol() -> Line {
    let bundled: Vec<(String, JointSupport)> = intercomm::fixtures::bundled()
        .into_iter()
        .map(|(n, js)| (n.to_string(), js))
        .collect();
    let o = audit::protocol_roundtrip(&bundled);
    Line {
        name: "protocol-correctness",
        pass: o.passed() && o.cases >= bundled.len(),
        detail: format!(
            "{} schedule checks over {} bundled supports, every tuple decoded and every bound attained",
            rate(&o),
            bundled.len()
        ),
    }
}

fn theorem2(cfg: &AuditConfig) -> Line {
    let supports: Vec<(String, JointSupport)> = audit::fixture_set(cfg).into_iter().map(|(n, js, _)| (n, js)).collect();
    let o = audit::theorem2(&supports);
    Line {
        name: "theorem2-direction",
        pass: o.passed() && !supports.is_empty(),
        detail: rate(&o),
    }
}

fn energy_gap(cfg: &AuditConfig) -> Line {
    let o = audit::energy_gap(&audit::fixture_set(cfg));
    Line {
        name: "energy-gap",
        pass: o.passed() && o.cases > 0,
        detail: format!("{} fixtures with d_i >= E_r", rate(&o)),
    }
}

fn figure2() -> Line {
    let params = NetworkParams::default();
    let ((wins, ties_or_losses), t) = timed(|| {
        let mut wins = 0;
        let mut leach_holds = 0;
        for seed in 0..100 {
            let life = |p| simulate_instance(&params, p, seed, 0, false).lifetime;
            let mcn = life(Protocol::Mcn);
            if mcn > life(Protocol::Leach { ratio: 0.5 }) {
                wins += 1;
            }
            if life(Protocol::Leach { ratio: 0.1 }) >= mcn {
                leach_holds += 1;
            }
        }
        (wins, leach_holds)
    });
    Line {
        name: "figure2-direction",
        pass: wins >= 95 && ties_or_losses >= 50 && t < Duration::from_secs(300),
        detail: format!(
            "MCN > LEACH(0.5) in {wins}/100, LEACH(0.1) >= MCN in {ties_or_losses}/100, {:.1}s (limit 300s)",
            t.as_secs_f64()
        ),
    }
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|x| {
            let below = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let (rx, ry) = (ranks(xs), ranks(ys));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var = |v: &[f64], m: f64| v.iter().map(|a| (a - m).powi(2)).sum::<f64>();
    cov / (var(&rx, mx) * var(&ry, my)).sqrt()
}

fn figure3() -> Line {
    let sizes = [25, 50, 100, 200];
    let (points, t) = timed(|| sweep(&NetworkParams::default(), Protocol::Mcn, &sizes, 200, 1));
    let means: Vec<f64> = points.iter().map(|p| p.mean()).collect();
    let rho = spearman(&sizes.map(|n| n as f64), &means);
    let second: Vec<f64> = means.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
    let non_decreasing = means.windows(2).all(|w| w[1] >= w[0]);
    Line {
        name: "figure3-direction",
        pass: non_decreasing && rho == 1.0 && second.iter().all(|d| *d <= 0.0) && t < Duration::from_secs(900),
        detail: format!(
            "means {:?}, spearman {rho:.3}, second differences {:?}, {:.1}s (limit 900s)",
            means.iter().map(|m| format!("{m:.1}")).collect::<Vec<_>>(),
            second.iter().map(|d| format!("{d:.1}")).collect::<Vec<_>>(),
            t.as_secs_f64()
        ),
    }
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism(root: &Path) -> Line {
    let mut cfg = Config::default();
    cfg.sweep.nodes = vec![10, 20];
    cfg.sweep.instances = 5;
    cfg.fixtures.count = 5;
    cfg.verify.lemma1_cases = 30;
    cfg.verify.lemma23_cases = 10;
    cfg.verify.theorem3_cases = 10;
    cfg.verify.fixture_cases = 5;
    cfg.network.dump_logs = true;
    let commands = [
        ("solve", Command::Solve(Default::default())),
        ("lifetime", Command::Lifetime(Default::default())),
        ("simulate", Command::Simulate(Default::default())),
        ("sweep", Command::Sweep(Default::default())),
        ("fixtures", Command::Fixtures(Default::default())),
        ("verify", Command::Verify(Default::default())),
    ];
    let mut differing = Vec::new();
    for (name, command) in &commands {
        let outputs: Vec<_> = ["a", "b"]
            .iter()
            .map(|run| {
                let mut c = cfg.clone();
                c.output_dir = root.join(run).join(name);
                cli::run(command, &c).unwrap();
                read_all(&c.output_dir)
            })
            .collect();
        // the echoed config names its own output directory
        let strip = |files: &[(String, Vec<u8>)]| -> Vec<(String, Vec<u8>)> {
            files
                .iter()
                .filter(|(f, _)| f != "config.resolved.toml")
                .cloned()
                .collect()
        };
        if strip(&outputs[0]) != strip(&outputs[1]) || outputs[0].len() < 2 {
            differing.push(*name);
        }
    }
    Line {
        name: "determinism",
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("{} subcommands byte-identical across two runs", commands.len())
        } else {
            format!("differing outputs: {differing:?}")
        },
    }
}

fn main() -> ExitCode {
    let cfg = AuditConfig::default();
    let scratch = tempfile::tempdir().unwrap();
    let lines = [
        lemma1(&cfg),
        lemma23(&cfg),
        theorem3(&cfg, scratch.path()),
        protocol(),
        theorem2(&cfg),
        figure2(),
        figure3(),
        determinism(scratch.path()),
        energy_gap(&cfg),
    ];
    let mut unexpected = 0;
    for l in &lines {
        let known = KNOWN_DIVERGENT.contains(&l.name);
        let note = match (l.pass, known) {
            (false, true) => " [known divergence]",
            (true, true) => " [expected to diverge]",
            _ => "",
        };
        println!(
            "{} {}: {}{note}",
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
        if l.pass == known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria did not match their expected outcome");
        ExitCode::FAILURE
    }
}
