//! Round-based simulator for clustered data gathering: LEACH with in-cluster
//! compression against interactive MCN polling inside each cluster.
//!
//! Energies are integer micro-units, so per-round conservation is exact.
//! A per-bit transmit cost is `κ·d^γ` rounded once to micro-units.

mod leach;
mod mcn;
mod sim;
mod topology;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use leach::{leach_elect, round_leach, Clustering};
pub use mcn::round_mcn;
pub use sim::{instance_rngs, simulate, simulate_instance, sweep, RoundLog, RoundSummary, SimOutcome, SweepPoint};
pub use topology::{conditional_bits, pairwise_bits, place_nodes, CorrelationModel, NodeState, Point, Topology};

/// Energy in millionths of a unit.
pub type Micro = u64;

pub const MICRO_PER_UNIT: f64 = 1e6;

/// Converts energy units to micro-units, saturating at `u64::MAX` (so an
/// infinite reserve never runs out).
pub fn to_micro(units: f64) -> Micro {
    (units * MICRO_PER_UNIT).round() as Micro
}

/// Exact decimal rendering with six fractional digits.
pub fn format_micro(x: Micro) -> String {
    format!("{}.{:06}", x / 1_000_000, x % 1_000_000)
}

/// How a head's ambiguity-set message to a member is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DownlinkMode {
    /// `b + ⌈log2 n⌉` bits: a compact descriptor of the candidate set.
    #[default]
    Index,
    /// `2^b · n` bits: the set spelled out symbol by symbol.
    Literal,
}

impl fmt::Display for DownlinkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DownlinkMode::Index => "index",
            DownlinkMode::Literal => "literal",
        })
    }
}

impl FromStr for DownlinkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index" => Ok(DownlinkMode::Index),
            "literal" => Ok(DownlinkMode::Literal),
            other => Err(Error::Config(format!("unknown downlink mode `{other}`"))),
        }
    }
}

/// Which in-cluster protocol runs each round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Heads compress the cluster's raw readings by `ratio` before forwarding.
    Leach { ratio: f64 },
    /// Heads poll members interactively in MCN order and forward raw.
    Mcn,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::Leach { ratio } => write!(f, "leach_r{ratio}"),
            Protocol::Mcn => f.write_str("mcn"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub nodes: usize,
    pub radius: f64,
    /// `n`: bits per raw reading.
    pub max_bits: u32,
    pub initial_energy: f64,
    /// `κ` in `κ·d^γ`.
    pub path_loss_coeff: f64,
    /// `γ` in `κ·d^γ`.
    pub path_loss_exponent: f64,
    /// Distance-independent transmit cost per bit, added to `κ·d^γ`.
    pub tx_electronics: f64,
    /// Per-bit reception cost.
    pub rx_cost: f64,
    pub head_fraction: f64,
    pub downlink: DownlinkMode,
    /// Fraction of the MCN head's collected bits sent on to the base station.
    pub forward_ratio: f64,
    /// Lets the head's own reading condition the first member it polls.
    pub head_side_info: bool,
    pub max_rounds: u64,
}

impl Default for NetworkParams {
    /// Reference network: lives on the order of 10³ rounds, and MCN sits
    /// between LEACH at compression ratios 0.5 and 0.1.
    fn default() -> Self {
        NetworkParams {
            nodes: 100,
            radius: 50.0,
            max_bits: 48,
            initial_energy: 4e7,
            path_loss_coeff: 1.0,
            path_loss_exponent: 2.0,
            tx_electronics: 750.0,
            rx_cost: 0.5,
            head_fraction: 0.5,
            downlink: DownlinkMode::Index,
            forward_ratio: 1.0,
            head_side_info: true,
            max_rounds: 1_000_000,
        }
    }
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.nodes == 0 {
            return bad("nodes must be at least 1");
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("radius must be positive and finite");
        }
        if self.max_bits == 0 || self.max_bits > 63 {
            return bad("max_bits must be in 1..=63");
        }
        if self.initial_energy.is_nan() || self.initial_energy < 0.0 {
            return bad("initial_energy must be non-negative");
        }
        if !(self.path_loss_coeff > 0.0 && self.path_loss_coeff.is_finite()) {
            return bad("path_loss_coeff must be positive and finite");
        }
        if !(self.path_loss_exponent >= 0.0 && self.path_loss_exponent.is_finite()) {
            return bad("path_loss_exponent must be non-negative and finite");
        }
        if !(self.tx_electronics >= 0.0 && self.tx_electronics.is_finite()) {
            return bad("tx_electronics must be non-negative and finite");
        }
        if !(self.rx_cost >= 0.0 && self.rx_cost.is_finite()) {
            return bad("rx_cost must be non-negative and finite");
        }
        if !(self.head_fraction > 0.0 && self.head_fraction < 1.0) {
            return bad("head_fraction must satisfy 0 < p < 1");
        }
        if !(self.forward_ratio > 0.0 && self.forward_ratio <= 1.0) {
            return bad("forward_ratio must satisfy 0 < ratio <= 1");
        }
        Ok(())
    }

    pub fn correlation(&self) -> CorrelationModel {
        CorrelationModel::new(self.max_bits)
    }

    /// Per-bit transmit cost over distance `d`.
    pub fn tx_per_bit(&self, d: f64) -> Micro {
        to_micro(self.tx_electronics + self.path_loss_coeff * d.powf(self.path_loss_exponent))
    }

    pub fn rx_per_bit(&self) -> Micro {
        to_micro(self.rx_cost)
    }
}

pub fn validate_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "compression ratio must satisfy 0 < r <= 1, got {ratio}"
        )))
    }
}

/// `⌈x⌉` for a product of a ratio and a bit count, ignoring float noise
/// below one millionth of a bit.
pub(crate) fn ceil_bits(ratio: f64, bits: u64) -> u64 {
    (ratio * bits as f64 - 1e-6).ceil().max(0.0) as u64
}
