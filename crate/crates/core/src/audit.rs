//! Oracle comparisons: greedy schedules against exhaustive search, protocol
//! round trips, and the accounting invariants the lifetime model relies on.
//!
//! Every audit is deterministic in its seed. Random cases are derived from
//! `(seed, audit, case index)` so they can be evaluated in parallel without
//! changing the result.

use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlation::{ConditioningContext, JointSupport};
use crate::fixtures::{random_energy, random_support};
use crate::lifetime::{
    brute_force_lifetime, energy_profile, fraction, mcn_max, mcn_sum, optimize_lifetime, BsSideCost, EnergyParams,
    NodeLoadCost,
};
use crate::protocol::{
    decode_ambiguity_list, decode_transcript, objective, run_transcript, worst_case_budget, Direction, Problem,
    ProtocolKind,
};
use crate::scheduling::{brute_force, mcn, schedule_value, Aggregate, Schedule, UplinkCost};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    pub seed: u64,
    pub lemma1_cases: usize,
    pub lemma23_cases: usize,
    pub theorem3_cases: usize,
    /// Random supports added to the bundled ones for the protocol, message
    /// count and energy-gap audits.
    pub fixture_cases: usize,
    pub max_informants: usize,
    pub max_alphabet: u32,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            seed: 1,
            lemma1_cases: 1000,
            lemma23_cases: 500,
            theorem3_cases: 500,
            fixture_cases: 100,
            max_informants: 6,
            max_alphabet: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub audit: &'static str,
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub agreements: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AuditOutcome {
    fn collect(name: &'static str, results: Vec<Option<Counterexample>>) -> Self {
        let cases = results.len();
        let counterexamples: Vec<Counterexample> = results.into_iter().flatten().collect();
        AuditOutcome {
            name,
            cases,
            agreements: cases - counterexamples.len(),
            counterexamples,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Fraction of agreeing cases; 1 when there were no cases.
    pub fn agreement_rate(&self) -> f64 {
        if self.cases == 0 {
            1.0
        } else {
            self.agreements as f64 / self.cases as f64
        }
    }
}

impl fmt::Display for AuditOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}/{} agree",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.agreements,
            self.cases
        )
    }
}

fn case_rng(seed: u64, audit: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ audit.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(case as u64);
    rng
}

fn random_case(cfg: &AuditConfig, audit: u64, case: usize) -> (JointSupport, EnergyParams) {
    let mut rng = case_rng(cfg.seed, audit, case);
    let informants = rng.random_range(1..=cfg.max_informants);
    let n = rng.random_range(2..=cfg.max_alphabet);
    let js = random_support(&mut rng, informants, n);
    let energy = random_energy(&mut rng, informants);
    (js, energy)
}

fn describe(js: &JointSupport, energy: Option<&EnergyParams>) -> String {
    let mut out = js.to_text();
    if let Some(e) = energy {
        let list = |v: &[BigRational]| v.iter().map(fraction).join(" ");
        writeln!(out, "path_loss {}", list(e.path_loss())).unwrap();
        writeln!(out, "rx_cost {}", fraction(e.rx_cost())).unwrap();
        writeln!(out, "node_energy {}", list(e.node_energy())).unwrap();
        writeln!(out, "bs_energy {}", fraction(e.bs_energy())).unwrap();
    }
    out
}

/// MCN on the two-message uplink cost against the exhaustive min-max optimum.
pub fn lemma1(cfg: &AuditConfig) -> AuditOutcome {
    let results = (0..cfg.lemma1_cases)
        .into_par_iter()
        .map(|case| {
            let (js, _) = random_case(cfg, 1, case);
            let n = js.num_informants();
            let costs = UplinkCost::new(&js, ProtocolKind::TwoMessage);
            let greedy = mcn(&costs, n);
            let greedy_value = schedule_value(&costs, &greedy, Aggregate::Max);
            let (best, optimum) = brute_force(&costs, n, Aggregate::Max).expect("n within cap");
            (greedy_value != optimum).then(|| Counterexample {
                audit: "lemma1",
                case: format!("case {case}"),
                detail: format!(
                    "mcn {greedy} -> {greedy_value}, optimum {best} -> {optimum}\n{}",
                    describe(&js, None)
                ),
            })
        })
        .collect();
    AuditOutcome::collect("lemma1-mcn-max-uplink", results)
}

/// MCN-sum against the exhaustive minimum of `Σ Ê_BS,π(i)`.
pub fn lemma2(cfg: &AuditConfig) -> AuditOutcome {
    let results = (0..cfg.lemma23_cases)
        .into_par_iter()
        .map(|case| {
            let (js, energy) = random_case(cfg, 2, case);
            let n = js.num_informants();
            let costs = BsSideCost {
                js: &js,
                params: &energy,
                acct: ProtocolKind::TwoMessage.into(),
            };
            let greedy = mcn_sum(&js, &energy, ProtocolKind::TwoMessage).expect("dimensions agree");
            let greedy_value = schedule_value(&costs, &greedy, Aggregate::Sum);
            let (best, optimum) = brute_force(&costs, n, Aggregate::Sum).expect("n within cap");
            (greedy_value != optimum).then(|| Counterexample {
                audit: "lemma2",
                case: format!("case {case}"),
                detail: format!(
                    "mcn_sum {greedy} -> {}, optimum {best} -> {}\n{}",
                    fraction(&greedy_value),
                    fraction(&optimum),
                    describe(&js, Some(&energy))
                ),
            })
        })
        .collect();
    AuditOutcome::collect("lemma2-mcn-sum-bs-energy", results)
}

/// MCN-max against the exhaustive minimum of `max_i Ê_π(i),BS / E_π(i)`.
pub fn lemma3(cfg: &AuditConfig) -> AuditOutcome {
    let results = (0..cfg.lemma23_cases)
        .into_par_iter()
        .map(|case| {
            let (js, energy) = random_case(cfg, 3, case);
            let n = js.num_informants();
            let costs = NodeLoadCost {
                js: &js,
                params: &energy,
                acct: ProtocolKind::TwoMessage.into(),
            };
            let greedy = mcn_max(&js, &energy, ProtocolKind::TwoMessage).expect("dimensions agree");
            let greedy_value = schedule_value(&costs, &greedy, Aggregate::Max);
            let (best, optimum) = brute_force(&costs, n, Aggregate::Max).expect("n within cap");
            (greedy_value != optimum).then(|| Counterexample {
                audit: "lemma3",
                case: format!("case {case}"),
                detail: format!(
                    "mcn_max {greedy} -> {}, optimum {best} -> {}\n{}",
                    fraction(&greedy_value),
                    fraction(&optimum),
                    describe(&js, Some(&energy))
                ),
            })
        })
        .collect();
    AuditOutcome::collect("lemma3-mcn-max-node-load", results)
}

/// Best of the two MCN candidates against the exhaustive lifetime optimum.
pub fn theorem3(cfg: &AuditConfig) -> AuditOutcome {
    let results = (0..cfg.theorem3_cases)
        .into_par_iter()
        .map(|case| {
            let (js, energy) = random_case(cfg, 4, case);
            let kind = ProtocolKind::TwoMessage;
            let combined = optimize_lifetime(&js, &energy, kind).expect("dimensions agree");
            let optimum = brute_force_lifetime(&js, &energy, kind).expect("n within cap");
            (combined.best.inverse != optimum.inverse).then(|| Counterexample {
                audit: "theorem3",
                case: format!("case {case}"),
                detail: format!(
                    "sum {} -> {}, max {} -> {}, optimum {} -> {}\n{}",
                    combined.sum_candidate.schedule,
                    fraction(&combined.sum_candidate.inverse),
                    combined.max_candidate.schedule,
                    fraction(&combined.max_candidate.inverse),
                    optimum.schedule,
                    fraction(&optimum.inverse),
                    describe(&js, Some(&energy))
                ),
            })
        })
        .collect();
    AuditOutcome::collect("theorem3-best-of-mcn-lifetime", results)
}

/// Schedules exercised per fixture: all of them for `N <= 4`, otherwise
/// identity, reversed and the MCN order.
fn audit_schedules(js: &JointSupport) -> Vec<Schedule> {
    let n = js.num_informants();
    if n <= 4 {
        return (0..n)
            .permutations(n)
            .map(|p| Schedule::new(p).expect("permutation"))
            .collect();
    }
    let mut out = vec![
        Schedule::identity(n),
        Schedule::new((0..n).rev().collect()).expect("permutation"),
        mcn(&UplinkCost::new(js, ProtocolKind::TwoMessage), n),
    ];
    out.dedup();
    out
}

/// Exhaustive transcript round trip for one fixture and schedule: every
/// support tuple decodes exactly, realized bits never exceed the worst-case
/// budget, and each position's worst-case uplink is attained by some tuple.
fn roundtrip_case(js: &JointSupport, schedule: &Schedule, kind: ProtocolKind) -> Option<String> {
    let n = js.num_informants();
    let budget = worst_case_budget(js, schedule, kind).expect("valid schedule");
    let mut attained = vec![0u64; n];
    for truth in js.tuples() {
        let t = match run_transcript(js, schedule, kind, truth) {
            Ok(t) => t,
            Err(e) => return Some(format!("truth {truth:?}: {e}")),
        };
        match decode_transcript(js, schedule, kind, &t) {
            Ok(decoded) if decoded == truth => {}
            Ok(decoded) => return Some(format!("truth {truth:?} decoded as {decoded:?}")),
            Err(e) => return Some(format!("truth {truth:?}: {e}")),
        }
        let bits = t.bit_counts(n);
        for (i, (&sent, best)) in bits.uplink.iter().zip(attained.iter_mut()).enumerate() {
            if sent > budget.uplink[i] {
                return Some(format!("truth {truth:?}: informant {i} sent more than the budget"));
            }
            *best = (*best).max(sent);
        }
        if kind == ProtocolKind::TwoMessage {
            for m in t.messages.iter().filter(|m| m.direction == Direction::Downlink) {
                let list = decode_ambiguity_list(&m.bits, js.alphabet()).unwrap_or_default();
                let pos = schedule.position_of(m.informant).expect("scheduled");
                let polled = &schedule.order()[..pos];
                let mu = js
                    .max_conditional_ambiguity(polled, m.informant)
                    .expect("valid indices");
                if list.len() as u32 > mu {
                    return Some(format!("truth {truth:?}: downlink list longer than max ambiguity"));
                }
            }
        }
    }
    (attained != budget.uplink).then(|| {
        format!(
            "worst-case uplink {:?} not attained, best realized {:?}",
            budget.uplink, attained
        )
    })
}

pub fn protocol_roundtrip(fixtures: &[(String, JointSupport)]) -> AuditOutcome {
    let cases: Vec<(&String, &JointSupport, Schedule, ProtocolKind)> = fixtures
        .iter()
        .flat_map(|(name, js)| {
            audit_schedules(js).into_iter().flat_map(move |s| {
                [ProtocolKind::OneMessage, ProtocolKind::TwoMessage].map(|k| (name, js, s.clone(), k))
            })
        })
        .collect();
    let results = cases
        .par_iter()
        .map(|(name, js, schedule, kind)| {
            roundtrip_case(js, schedule, *kind).map(|detail| Counterexample {
                audit: "protocol",
                case: format!("{name} schedule {schedule} {kind}"),
                detail,
            })
        })
        .collect();
    AuditOutcome::collect("protocol-roundtrip", results)
}

/// Problem 2: the one-message objective equals `⌈log2 n⌉` and no
/// two-message schedule beats it.
pub fn theorem2(fixtures: &[(String, JointSupport)]) -> AuditOutcome {
    let results = fixtures
        .par_iter()
        .filter(|(_, js)| js.alphabet().size() >= 2)
        .map(|(name, js)| {
            let width = u64::from(js.alphabet().symbol_bits());
            for s in audit_schedules(js) {
                let one = objective(
                    &worst_case_budget(js, &s, ProtocolKind::OneMessage).ok()?,
                    Problem::MaxOverall,
                );
                let two = objective(
                    &worst_case_budget(js, &s, ProtocolKind::TwoMessage).ok()?,
                    Problem::MaxOverall,
                );
                if one != width || one > two {
                    return Some(Counterexample {
                        audit: "theorem2",
                        case: format!("{name} schedule {s}"),
                        detail: format!("one-message {one}, two-message {two}, width {width}"),
                    });
                }
            }
            None
        })
        .collect();
    AuditOutcome::collect("theorem2-one-message-problem2", results)
}

/// Problem 4: the best one-message value never exceeds the best two-message value.
pub fn problem4_message_count(fixtures: &[(String, JointSupport)]) -> AuditOutcome {
    let results = fixtures
        .par_iter()
        .filter(|(_, js)| js.num_informants() <= crate::scheduling::BRUTE_FORCE_CAP)
        .map(|(name, js)| {
            let best = |kind| {
                crate::scheduling::brute_force_by(js.num_informants(), |s| {
                    objective(
                        &worst_case_budget(js, s, kind).expect("valid schedule"),
                        Problem::SumOverall,
                    )
                })
                .expect("within cap")
                .1
            };
            let (one, two) = (best(ProtocolKind::OneMessage), best(ProtocolKind::TwoMessage));
            (one > two).then(|| Counterexample {
                audit: "problem4",
                case: name.clone(),
                detail: format!("one-message optimum {one} exceeds two-message optimum {two}"),
            })
        })
        .collect();
    AuditOutcome::collect("problem4-one-message", results)
}

/// Base-station side energy dominates node side energy per node whenever
/// `d_i >= E_r`. Fixtures violating that precondition are skipped.
pub fn energy_gap(fixtures: &[(String, JointSupport, EnergyParams)]) -> AuditOutcome {
    let results = fixtures
        .par_iter()
        .filter(|(_, _, e)| e.path_loss().iter().all(|d| d >= e.rx_cost()))
        .filter(|(_, js, _)| js.alphabet().size() >= 2)
        .map(|(name, js, energy)| {
            for s in audit_schedules(js) {
                let budget = worst_case_budget(js, &s, ProtocolKind::TwoMessage).ok()?;
                let profile = energy_profile(&budget, energy).ok()?;
                if let Some(i) = profile.energy_gap().iter().position(|g| *g < BigRational::zero()) {
                    return Some(Counterexample {
                        audit: "energy-gap",
                        case: format!("{name} schedule {s}"),
                        detail: format!("node {i} spends more than the base-station on it"),
                    });
                }
            }
            None
        })
        .collect();
    AuditOutcome::collect("energy-gap", results)
}

/// Named supports plus `cfg.fixture_cases` random ones, with energy parameters.
pub fn fixture_set(cfg: &AuditConfig) -> Vec<(String, JointSupport, EnergyParams)> {
    let mut out: Vec<(String, JointSupport, EnergyParams)> = crate::fixtures::bundled()
        .into_iter()
        .enumerate()
        .map(|(i, (name, js))| {
            let mut rng = case_rng(cfg.seed, 5, i);
            let energy = random_energy(&mut rng, js.num_informants());
            (name.to_string(), js, energy)
        })
        .collect();
    out.extend((0..cfg.fixture_cases).map(|case| {
        let (js, energy) = random_case(cfg, 6, case);
        (format!("random_{case:03}"), js, energy)
    }));
    out
}

/// Checks that every conditioning realization yields a non-empty ambiguity set
/// no larger than the maximum; used by the property tests as a sanity scan.
pub fn ambiguity_bounds_hold(js: &JointSupport, conditioned: &[usize], target: usize) -> bool {
    let Ok(mu) = js.max_conditional_ambiguity(conditioned, target) else {
        return false;
    };
    let Ok(contexts) = js.enumerate_contexts(conditioned) else {
        return false;
    };
    contexts.iter().all(|ctx: &ConditioningContext| {
        js.conditional_ambiguity(ctx, target)
            .is_ok_and(|m| m >= 1 && m <= mu && mu <= js.alphabet().size())
    })
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub outcomes: Vec<AuditOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(AuditOutcome::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AuditOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn counterexamples_text(&self) -> String {
        let mut out = String::new();
        for c in self.outcomes.iter().flat_map(|o| &o.counterexamples) {
            writeln!(out, "== {} {}", c.audit, c.case).unwrap();
            out.push_str(&c.detail);
            if !c.detail.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        writeln!(f, "overall {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs every audit.
pub fn run_all(cfg: &AuditConfig) -> VerifyReport {
    let with_energy = fixture_set(cfg);
    let supports: Vec<(String, JointSupport)> = with_energy.iter().map(|(n, js, _)| (n.clone(), js.clone())).collect();
    VerifyReport {
        outcomes: vec![
            lemma1(cfg),
            lemma2(cfg),
            lemma3(cfg),
            theorem3(cfg),
            protocol_roundtrip(&supports),
            theorem2(&supports),
            problem4_message_count(&supports),
            energy_gap(&with_energy),
        ],
    }
}
