use std::fs;
use std::path::{Path, PathBuf};

use num::{BigInt, BigRational, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::audit::AuditConfig;
use crate::correlation::JointSupport;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lifetime::EnergyParams;
use crate::netsim::{validate_ratio, DownlinkMode, NetworkParams};
use crate::protocol::{Problem, ProtocolKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub support: SupportSection,
    pub solve: SolveSection,
    pub energy: EnergySection,
    pub network: NetworkSection,
    pub sweep: SweepSection,
    pub fixtures: FixturesSection,
    pub verify: VerifySection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            output_dir: PathBuf::from("out"),
            support: SupportSection::default(),
            solve: SolveSection::default(),
            energy: EnergySection::default(),
            network: NetworkSection::default(),
            sweep: SweepSection::default(),
            fixtures: FixturesSection::default(),
            verify: VerifySection::default(),
        }
    }
}

/// Where the joint support comes from: a file, or a named generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupportSection {
    pub file: Option<PathBuf>,
    /// `ring`, `diagonal`, `full`, `xor`, `copy`, `markov` or `random`.
    pub generator: String,
    pub informants: usize,
    pub alphabet: u32,
}

impl Default for SupportSection {
    fn default() -> Self {
        SupportSection {
            file: None,
            generator: "ring".into(),
            informants: 2,
            alphabet: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSection {
    pub problems: Vec<u8>,
    pub loglog_overhead: bool,
}

impl Default for SolveSection {
    fn default() -> Self {
        SolveSection {
            problems: vec![1, 2, 3, 4],
            loglog_overhead: false,
        }
    }
}

/// Exact energy constants as strings (`"3/2"`, `"0.25"`, `"7"`). A single
/// entry in a per-node list applies to every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySection {
    pub path_loss: Vec<String>,
    pub rx_cost: String,
    pub node_energy: Vec<String>,
    pub bs_energy: String,
    pub protocol: String,
    pub loglog_overhead: bool,
}

impl Default for EnergySection {
    fn default() -> Self {
        EnergySection {
            path_loss: vec!["2".into()],
            rx_cost: "1".into(),
            node_energy: vec!["100".into()],
            bs_energy: "1000".into(),
            protocol: "two".into(),
            loglog_overhead: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub nodes: usize,
    pub radius: f64,
    pub max_bits: u32,
    pub initial_energy: f64,
    pub path_loss_coeff: f64,
    pub tx_electronics: f64,
    pub path_loss_exponent: f64,
    pub rx_cost: f64,
    pub head_fraction: f64,
    pub downlink: String,
    pub forward_ratio: f64,
    pub head_side_info: bool,
    pub max_rounds: u64,
    /// LEACH compression ratio for `simulate`.
    pub ratio: f64,
    /// Instance index for `simulate`.
    pub instance: u64,
    pub dump_logs: bool,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let p = NetworkParams::default();
        NetworkSection {
            nodes: p.nodes,
            radius: p.radius,
            max_bits: p.max_bits,
            initial_energy: p.initial_energy,
            path_loss_coeff: p.path_loss_coeff,
            tx_electronics: p.tx_electronics,
            path_loss_exponent: p.path_loss_exponent,
            rx_cost: p.rx_cost,
            head_fraction: p.head_fraction,
            downlink: p.downlink.to_string(),
            forward_ratio: p.forward_ratio,
            head_side_info: p.head_side_info,
            max_rounds: p.max_rounds,
            ratio: 0.5,
            instance: 0,
            dump_logs: false,
        }
    }
}

impl NetworkSection {
    pub fn params(&self) -> Result<NetworkParams> {
        let p = NetworkParams {
            nodes: self.nodes,
            radius: self.radius,
            max_bits: self.max_bits,
            initial_energy: self.initial_energy,
            path_loss_coeff: self.path_loss_coeff,
            tx_electronics: self.tx_electronics,
            path_loss_exponent: self.path_loss_exponent,
            rx_cost: self.rx_cost,
            head_fraction: self.head_fraction,
            downlink: self.downlink.parse::<DownlinkMode>()?,
            forward_ratio: self.forward_ratio,
            head_side_info: self.head_side_info,
            max_rounds: self.max_rounds,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub nodes: Vec<usize>,
    pub instances: u64,
    /// LEACH compression ratio for the baseline curve.
    pub ratio: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            nodes: vec![25, 50, 100, 200],
            instances: 200,
            ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixturesSection {
    pub count: usize,
    pub max_informants: usize,
    pub max_alphabet: u32,
    /// Also write the named supports.
    pub bundled: bool,
}

impl Default for FixturesSection {
    fn default() -> Self {
        FixturesSection {
            count: 20,
            max_informants: 5,
            max_alphabet: 6,
            bundled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub lemma1_cases: usize,
    pub lemma23_cases: usize,
    pub theorem3_cases: usize,
    pub fixture_cases: usize,
    pub max_informants: usize,
    pub max_alphabet: u32,
}

impl Default for VerifySection {
    fn default() -> Self {
        let a = AuditConfig::default();
        VerifySection {
            lemma1_cases: a.lemma1_cases,
            lemma23_cases: a.lemma23_cases,
            theorem3_cases: a.theorem3_cases,
            fixture_cases: a.fixture_cases,
            max_informants: a.max_informants,
            max_alphabet: a.max_alphabet,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::parse(&text)
    }

    /// Checks every section, so a bad value fails before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(f) = &self.support.file {
            if !f.is_file() {
                return Err(Error::Config(format!("support file {} does not exist", f.display())));
            }
        }
        for &p in &self.solve.problems {
            Problem::try_from(p)?;
        }
        self.energy.protocol.parse::<ProtocolKind>()?;
        for s in self.energy.path_loss.iter().chain(&self.energy.node_energy) {
            parse_rational(s)?;
        }
        parse_rational(&self.energy.rx_cost)?;
        parse_rational(&self.energy.bs_energy)?;
        self.network.params()?;
        validate_ratio(self.network.ratio)?;
        validate_ratio(self.sweep.ratio)?;
        if self.sweep.nodes.is_empty() || self.sweep.nodes.contains(&0) {
            return Err(Error::Config(
                "sweep.nodes must be a non-empty list of positive sizes".into(),
            ));
        }
        if self.sweep.instances == 0 {
            return Err(Error::Config("sweep.instances must be positive".into()));
        }
        if self.verify.max_informants == 0 || self.verify.max_informants > crate::scheduling::BRUTE_FORCE_CAP {
            return Err(Error::Config("verify.max_informants must be in 1..=8".into()));
        }
        if self.verify.max_alphabet < 2 {
            return Err(Error::Config("verify.max_alphabet must be at least 2".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn audit(&self) -> AuditConfig {
        let v = &self.verify;
        AuditConfig {
            seed: self.seed,
            lemma1_cases: v.lemma1_cases,
            lemma23_cases: v.lemma23_cases,
            theorem3_cases: v.theorem3_cases,
            fixture_cases: v.fixture_cases,
            max_informants: v.max_informants,
            max_alphabet: v.max_alphabet,
        }
    }

    /// Loads or generates the configured support, with a display name.
    pub fn joint_support(&self) -> Result<(String, JointSupport)> {
        let s = &self.support;
        if let Some(path) = &s.file {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            return Ok((path.display().to_string(), JointSupport::parse(&text)?));
        }
        let n = s.alphabet;
        if n == 0 {
            return Err(Error::Config("support.alphabet must be positive".into()));
        }
        let js = match s.generator.as_str() {
            "ring" => fixtures::ring(n),
            "diagonal" => fixtures::diagonal(n),
            "full" => fixtures::full(n),
            "xor" => fixtures::xor(),
            "copy" => fixtures::copy_plus_independent(n),
            "markov" => fixtures::markov_chain(s.informants, n),
            "random" => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                fixtures::random_support(&mut rng, s.informants, n)
            }
            other => return Err(Error::Config(format!("unknown support generator `{other}`"))),
        };
        Ok((s.generator.clone(), js))
    }

    pub fn energy_params(&self, nodes: usize) -> Result<EnergyParams> {
        let e = &self.energy;
        let per_node = |list: &[String], field: &str| -> Result<Vec<BigRational>> {
            let values = list.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            match values.len() {
                1 => Ok(vec![values[0].clone(); nodes]),
                k if k == nodes => Ok(values),
                k => Err(Error::Config(format!(
                    "energy.{field} has {k} entries for {nodes} nodes"
                ))),
            }
        };
        EnergyParams::new(
            per_node(&e.path_loss, "path_loss")?,
            parse_rational(&e.rx_cost)?,
            per_node(&e.node_energy, "node_energy")?,
            parse_rational(&e.bs_energy)?,
        )
    }
}

/// Parses `a/b`, an integer, or a plain decimal such as `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Config(format!("`{s}` is not an exact number"));
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let den = num::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    let r: BigRational = t.parse().map_err(|_| bad())?;
    if r.denom().is_zero() {
        return Err(bad());
    }
    Ok(r)
}
