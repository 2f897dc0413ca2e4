//! Worst-case bit accounting for one- and two-message recipient/informant
//! exchanges, and the four communication objectives evaluated on it.

mod transcript;

use std::fmt;
use std::str::FromStr;

use crate::bits::{ceil_log2, ceil_loglog2};
use crate::correlation::JointSupport;
use crate::error::{Error, Result};
use crate::scheduling::Schedule;

pub use transcript::{
    decode_ambiguity_list, decode_transcript, encode_ambiguity_list, run_transcript, BitString, Direction, Message,
    Transcript, TranscriptBits,
};

/// How many messages each recipient/informant pair exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    /// The informant sends its symbol uncoded.
    OneMessage,
    /// The recipient sends the ambiguity set, the informant replies with an index into it.
    TwoMessage,
}

impl ProtocolKind {
    pub fn message_count(self) -> usize {
        match self {
            ProtocolKind::OneMessage => 1,
            ProtocolKind::TwoMessage => 2,
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolKind::OneMessage => "one-message",
            ProtocolKind::TwoMessage => "two-message",
        })
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one-message" | "1" => Ok(ProtocolKind::OneMessage),
            "two" | "two-message" | "2" => Ok(ProtocolKind::TwoMessage),
            other => Err(Error::Config(format!("unknown protocol kind `{other}`"))),
        }
    }
}

/// A protocol kind plus optional accounting extras.
///
/// With `loglog_overhead` set, each two-message downlink is charged an extra
/// `⌈log2 log2 μ̂⌉` bits on top of `μ̂·⌈log2 n⌉`. Off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Accounting {
    pub kind: ProtocolKind,
    pub loglog_overhead: bool,
}

impl From<ProtocolKind> for Accounting {
    fn from(kind: ProtocolKind) -> Self {
        Accounting {
            kind,
            loglog_overhead: false,
        }
    }
}

/// The four worst-case objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    /// `max_i Î_i`
    MaxInformant = 1,
    /// `max(R̂, max_i Î_i)`
    MaxOverall = 2,
    /// `Σ_i Î_i`
    SumInformant = 3,
    /// `R̂ + Σ_i Î_i`
    SumOverall = 4,
}

impl Problem {
    pub const ALL: [Problem; 4] = [
        Problem::MaxInformant,
        Problem::MaxOverall,
        Problem::SumInformant,
        Problem::SumOverall,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Problem {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Problem::MaxInformant),
            2 => Ok(Problem::MaxOverall),
            3 => Ok(Problem::SumInformant),
            4 => Ok(Problem::SumOverall),
            other => Err(Error::Config(format!("problem id must be 1..=4, got {other}"))),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Message count that attains the optimum of each objective.
pub fn optimal_message_count(problem: Problem) -> ProtocolKind {
    match problem {
        Problem::MaxInformant | Problem::SumInformant => ProtocolKind::TwoMessage,
        Problem::MaxOverall | Problem::SumOverall => ProtocolKind::OneMessage,
    }
}

/// Per-informant worst-case bit counts under a schedule.
///
/// Both lists are indexed by informant, not by schedule position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitBudget {
    pub schedule: Schedule,
    pub uplink: Vec<u64>,
    pub downlink: Vec<u64>,
}

impl BitBudget {
    /// `R̂`: total bits sent by the recipient.
    pub fn recipient_total(&self) -> u64 {
        self.downlink.iter().sum()
    }

    pub fn uplink_total(&self) -> u64 {
        self.uplink.iter().sum()
    }

    pub fn max_uplink(&self) -> u64 {
        self.uplink.iter().copied().max().unwrap_or(0)
    }

    pub fn objective(&self, problem: Problem) -> u64 {
        objective(self, problem)
    }
}

/// Worst-case bits `(uplink, downlink)` for informant `candidate` when the
/// informants in `polled_mask` have already been decoded.
pub(crate) fn step_bits(js: &JointSupport, acct: Accounting, candidate: usize, polled_mask: u64) -> (u64, u64) {
    let symbol_bits = u64::from(js.alphabet().symbol_bits());
    match acct.kind {
        ProtocolKind::OneMessage => (symbol_bits, 0),
        ProtocolKind::TwoMessage => {
            let mu = u64::from(js.max_ambiguity_masked(polled_mask, candidate));
            let mut downlink = mu * symbol_bits;
            if acct.loglog_overhead {
                downlink += u64::from(ceil_loglog2(mu));
            }
            (u64::from(ceil_log2(mu)), downlink)
        }
    }
}

pub(crate) fn check_schedule(js: &JointSupport, schedule: &Schedule) -> Result<()> {
    if schedule.len() != js.num_informants() {
        return Err(Error::InvalidSchedule(schedule.order().to_vec()));
    }
    Ok(())
}

pub(crate) fn slice_mask(polled: &[usize]) -> u64 {
    polled.iter().fold(0u64, |m, &i| m | 1 << i)
}

/// Worst-case per-informant bit counts for a schedule.
pub fn worst_case_budget(js: &JointSupport, schedule: &Schedule, acct: impl Into<Accounting>) -> Result<BitBudget> {
    check_schedule(js, schedule)?;
    let acct = acct.into();
    let n = js.num_informants();
    let mut uplink = vec![0; n];
    let mut downlink = vec![0; n];
    let mut mask = 0u64;
    for &i in schedule.order() {
        let (up, down) = step_bits(js, acct, i, mask);
        uplink[i] = up;
        downlink[i] = down;
        mask |= 1 << i;
    }
    Ok(BitBudget {
        schedule: schedule.clone(),
        uplink,
        downlink,
    })
}

pub fn objective(budget: &BitBudget, problem: Problem) -> u64 {
    match problem {
        Problem::MaxInformant => budget.max_uplink(),
        Problem::MaxOverall => budget.recipient_total().max(budget.max_uplink()),
        Problem::SumInformant => budget.uplink_total(),
        Problem::SumOverall => budget.recipient_total() + budget.uplink_total(),
    }
}
