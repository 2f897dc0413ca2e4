//! Named joint supports, a random instance generator, and fixture files
//! carrying exhaustive-search answers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlation::{Alphabet, JointSupport, Symbol, Weight};
use crate::error::{Error, Result};
use crate::lifetime::{brute_force_lifetime, fraction, EnergyParams, LifetimeResult};
use crate::protocol::{objective, optimal_message_count, worst_case_budget, Problem, ProtocolKind};
use crate::scheduling::{brute_force_by, Schedule, BRUTE_FORCE_CAP};

fn alphabet(n: u32) -> Alphabet {
    Alphabet::new(n).expect("named fixtures use n >= 1")
}

/// `X2 ∈ {X1, X1 + 1 mod n}`, uniform over the `2n` pairs.
pub fn ring(n: u32) -> JointSupport {
    let tuples = (0..n).flat_map(|x| [vec![x, x], vec![x, (x + 1) % n]]);
    JointSupport::uniform(2, alphabet(n), tuples).expect("valid ring")
}

/// `X2 = X1`.
pub fn diagonal(n: u32) -> JointSupport {
    JointSupport::uniform(2, alphabet(n), (0..n).map(|x| vec![x, x])).expect("valid diagonal")
}

/// Independent uniform pair.
pub fn full(n: u32) -> JointSupport {
    let tuples = (0..n).flat_map(|x| (0..n).map(move |y| vec![x, y]));
    JointSupport::uniform(2, alphabet(n), tuples).expect("valid full support")
}

/// `X3 = X1 xor X2` over bits.
pub fn xor() -> JointSupport {
    let tuples = (0..2).flat_map(|x| (0..2).map(move |y| vec![x, y, x ^ y]));
    JointSupport::uniform(3, alphabet(2), tuples).expect("valid xor")
}

/// `X2 = X1`, `X3` independent of both.
pub fn copy_plus_independent(n: u32) -> JointSupport {
    let tuples = (0..n).flat_map(|x| (0..n).map(move |z| vec![x, x, z]));
    JointSupport::uniform(3, alphabet(n), tuples).expect("valid copy-plus-independent")
}

/// Chain with `X_{i+1} ∈ {X_i, X_i + 1 mod n}`, so each informant has
/// ambiguity 2 given its predecessor.
pub fn markov_chain(informants: usize, n: u32) -> JointSupport {
    let mut tuples: Vec<Vec<Symbol>> = (0..n).map(|x| vec![x]).collect();
    for _ in 1..informants {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                let last = *t.last().expect("non-empty");
                [0, 1].map(|step| {
                    let mut next = t.clone();
                    next.push((last + step) % n);
                    next
                })
            })
            .collect();
    }
    JointSupport::uniform(informants, alphabet(n), tuples).expect("valid chain")
}

/// The supports shipped under `fixtures/`.
pub fn bundled() -> Vec<(&'static str, JointSupport)> {
    vec![
        ("ring4", ring(4)),
        ("diagonal4", diagonal(4)),
        ("full4", full(4)),
        ("xor", xor()),
        ("copy_plus_independent4", copy_plus_independent(4)),
        ("markov4x8", markov_chain(4, 8)),
    ]
}

/// Writes every bundled support as `<name>.support` under `dir`.
pub fn write_bundled(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    bundled()
        .into_iter()
        .map(|(name, js)| {
            let path = dir.join(format!("{name}.support"));
            fs::write(&path, js.to_text()).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Random joint support with `informants` coordinates over `n` symbols.
///
/// Half the draws are sparse uniform tuple sets; the other half sample a
/// random additive network where each informant copies a noisy sum of some
/// earlier informants, with the coordinates shuffled afterwards.
pub fn random_support<R: Rng + ?Sized>(rng: &mut R, informants: usize, n: u32) -> JointSupport {
    let max_tuples = (n as usize).saturating_pow(informants as u32).min(4 * n as usize);
    let draws = rng.random_range(1..=max_tuples.max(1));
    let structured = rng.random_bool(0.5);
    let parents: Vec<Vec<usize>> = (0..informants)
        .map(|i| (0..i).filter(|_| rng.random_bool(0.4)).collect())
        .collect();
    let noise: Vec<u32> = (0..informants).map(|_| rng.random_range(0..n)).collect();
    let mut coords: Vec<usize> = (0..informants).collect();
    coords.shuffle(rng);

    let mut entries: Vec<(Vec<Symbol>, Weight)> = Vec::new();
    for _ in 0..draws {
        let tuple: Vec<Symbol> = if structured {
            let mut raw = vec![0u32; informants];
            for i in 0..informants {
                let base: u32 = parents[i].iter().map(|&p| raw[p]).sum();
                raw[i] = (base + rng.random_range(0..=noise[i])) % n;
            }
            coords.iter().map(|&c| raw[c]).collect()
        } else {
            (0..informants).map(|_| rng.random_range(0..n)).collect()
        };
        if entries.iter().all(|(t, _)| *t != tuple) {
            let weight = Weight::new(rng.random_range(1..=9), rng.random_range(1..=9));
            entries.push((tuple, weight));
        }
    }
    JointSupport::new(informants, alphabet(n), entries).expect("generated support is valid")
}

/// Random energy parameters: path loss in `[1/4, 20]`, reception cost in
/// `[0, 1]`, node reserves in `[50, 500]`. The base-station reserve either
/// equals a common node reserve or exceeds the largest one by 10x to 1000x.
pub fn random_energy<R: Rng + ?Sized>(rng: &mut R, nodes: usize) -> EnergyParams {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let path_loss = (0..nodes)
        .map(|_| q(rng.random_range(1..=20), rng.random_range(1..=4)))
        .collect();
    let rx_cost = q(rng.random_range(0..=4), 4);
    let (node_energy, bs_energy) = match rng.random_range(0..3) {
        0 => {
            let e = q(rng.random_range(50..=500), 1);
            (vec![e.clone(); nodes], e)
        }
        1 => {
            let e: Vec<BigRational> = (0..nodes).map(|_| q(rng.random_range(50..=500), 1)).collect();
            let max = e.iter().max().expect("nodes >= 1").clone();
            let bs = max * q(rng.random_range(10..=1000), 1);
            (e, bs)
        }
        _ => {
            let e: Vec<BigRational> = (0..nodes).map(|_| q(rng.random_range(50..=500), 1)).collect();
            (e, q(rng.random_range(50..=5000), 1))
        }
    };
    EnergyParams::new(path_loss, rx_cost, node_energy, bs_energy).expect("generated params are valid")
}

/// Exhaustive answers for one instance.
#[derive(Debug, Clone)]
pub struct OracleAnswers {
    /// Per problem: best value over both protocol kinds and all schedules.
    pub problems: Vec<(Problem, ProtocolKind, Schedule, u64)>,
    pub lifetime: LifetimeResult,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub support: JointSupport,
    pub energy: EnergyParams,
    pub oracle: OracleAnswers,
}

impl Fixture {
    pub fn oracle_text(&self) -> String {
        let mut out = String::new();
        let js = &self.support;
        writeln!(out, "informants {}", js.num_informants()).unwrap();
        writeln!(out, "alphabet {}", js.alphabet().size()).unwrap();
        for (problem, kind, schedule, value) in &self.oracle.problems {
            writeln!(out, "problem{problem} {value} {kind} {schedule}").unwrap();
        }
        let e = &self.energy;
        let list = |v: &[BigRational]| v.iter().map(fraction).collect::<Vec<_>>().join(" ");
        writeln!(out, "path_loss {}", list(e.path_loss())).unwrap();
        writeln!(out, "rx_cost {}", fraction(e.rx_cost())).unwrap();
        writeln!(out, "node_energy {}", list(e.node_energy())).unwrap();
        writeln!(out, "bs_energy {}", fraction(e.bs_energy())).unwrap();
        let l = &self.oracle.lifetime;
        writeln!(out, "lifetime_inverse {} {}", fraction(&l.inverse), l.schedule).unwrap();
        out
    }
}

/// Exhaustive optimum of each objective over `m ∈ {1, 2}` and all schedules,
/// plus the two-message lifetime optimum.
pub fn oracle_answers(js: &JointSupport, energy: &EnergyParams) -> Result<OracleAnswers> {
    let n = js.num_informants();
    let mut problems = Vec::new();
    for problem in Problem::ALL {
        let mut best: Option<(Problem, ProtocolKind, Schedule, u64)> = None;
        let preferred = optimal_message_count(problem);
        let other = match preferred {
            ProtocolKind::OneMessage => ProtocolKind::TwoMessage,
            ProtocolKind::TwoMessage => ProtocolKind::OneMessage,
        };
        // ties keep the kind that is optimal for the objective in general
        for kind in [preferred, other] {
            let (s, v) = brute_force_by(n, |s| {
                objective(&worst_case_budget(js, s, kind).expect("valid schedule"), problem)
            })?;
            if best.as_ref().is_none_or(|b| v < b.3) {
                best = Some((problem, kind, s, v));
            }
        }
        problems.push(best.expect("two kinds evaluated"));
    }
    let lifetime = brute_force_lifetime(js, energy, ProtocolKind::TwoMessage)?;
    Ok(OracleAnswers { problems, lifetime })
}

/// Generates `count` random fixtures with up to `max_informants` informants
/// and alphabets of `2..=max_alphabet` symbols.
pub fn generate(seed: u64, count: usize, max_informants: usize, max_alphabet: u32) -> Result<Vec<Fixture>> {
    if max_informants > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            count: max_informants,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if max_informants == 0 || max_alphabet < 2 {
        return Err(Error::Config(
            "fixtures need max_informants >= 1 and max_alphabet >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let informants = rng.random_range(1..=max_informants);
            let n = rng.random_range(2..=max_alphabet);
            let support = random_support(&mut rng, informants, n);
            let energy = random_energy(&mut rng, informants);
            let oracle = oracle_answers(&support, &energy)?;
            Ok(Fixture {
                name: format!("fixture_{i:03}"),
                support,
                energy,
                oracle,
            })
        })
        .collect()
}

/// Writes `<name>.support` and `<name>.oracle` for each fixture.
pub fn write_fixtures(dir: &Path, fixtures: &[Fixture]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for f in fixtures {
        for (ext, body) in [("support", f.support.to_text()), ("oracle", f.oracle_text())] {
            let path = dir.join(format!("{}.{ext}", f.name));
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
