//! Bit-exact transcripts of the serial polling protocol.
//!
//! Two-message exchange for each informant, in schedule order:
//!
//! 1. recipient → informant: the current ambiguity set as a length-prefixed
//!    list. The length takes `⌈log2(n+1)⌉` bits, each entry `⌈log2 n⌉` bits.
//! 2. informant → recipient: the position of its symbol in that sorted list,
//!    in `⌈log2 μ⌉` bits (nothing at all when `μ = 1`).
//!
//! After each reply the recipient knows the informant's symbol, which then
//! conditions the ambiguity sets of every later informant.

use std::fmt;
use std::str::FromStr;

use crate::bits::{ceil_log2, push_uint, read_uint};
use crate::correlation::{Alphabet, ConditioningContext, JointSupport, Symbol};
use crate::error::{Error, Result};
use crate::protocol::{check_schedule, ProtocolKind};
use crate::scheduling::Schedule;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_uint(&mut self, value: u64, width: u32) {
        push_uint(&mut self.0, value, width);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Transcript(format!("bad bit character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Recipient to informant.
    Downlink,
    /// Informant to recipient.
    Uplink,
}

impl Direction {
    fn tag(self) -> &'static str {
        match self {
            Direction::Downlink => "down",
            Direction::Uplink => "up",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub direction: Direction,
    pub informant: usize,
    pub bits: BitString,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub messages: Vec<Message>,
}

/// Realized bit counts, indexed by informant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptBits {
    pub uplink: Vec<u64>,
    pub downlink: Vec<u64>,
}

impl Transcript {
    pub fn bit_counts(&self, num_informants: usize) -> TranscriptBits {
        let mut counts = TranscriptBits {
            uplink: vec![0; num_informants],
            downlink: vec![0; num_informants],
        };
        for m in &self.messages {
            let slot = match m.direction {
                Direction::Uplink => &mut counts.uplink,
                Direction::Downlink => &mut counts.downlink,
            };
            if m.informant >= slot.len() {
                slot.resize(m.informant + 1, 0);
            }
            slot[m.informant] += m.bits.len() as u64;
        }
        let n = counts.uplink.len().max(counts.downlink.len());
        counts.uplink.resize(n, 0);
        counts.downlink.resize(n, 0);
        counts
    }

    /// One line per message: `dir idx bits`, with `-` standing for an empty bit string.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            let bits = if m.bits.is_empty() {
                "-".to_string()
            } else {
                m.bits.to_string()
            };
            out.push_str(&format!("{} {} {}\n", m.direction.tag(), m.informant, bits));
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut messages = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [dir, idx, bits] = fields[..] else {
                return Err(Error::parse(lineno + 1, "expected `dir idx bits`"));
            };
            let direction = match dir {
                "down" => Direction::Downlink,
                "up" => Direction::Uplink,
                other => return Err(Error::parse(lineno + 1, format!("bad direction `{other}`"))),
            };
            let informant = idx
                .parse()
                .map_err(|_| Error::parse(lineno + 1, format!("bad informant index `{idx}`")))?;
            let bits = if bits == "-" {
                BitString::new()
            } else {
                bits.parse()
                    .map_err(|e: Error| Error::parse(lineno + 1, e.to_string()))?
            };
            messages.push(Message {
                direction,
                informant,
                bits,
            });
        }
        Ok(Transcript { messages })
    }
}

fn length_prefix_bits(alphabet: Alphabet) -> u32 {
    ceil_log2(u64::from(alphabet.size()) + 1)
}

/// Encodes a sorted symbol list as sent on the downlink.
pub fn encode_ambiguity_list(values: &[Symbol], alphabet: Alphabet) -> BitString {
    let mut bits = BitString::new();
    bits.push_uint(values.len() as u64, length_prefix_bits(alphabet));
    for &v in values {
        bits.push_uint(u64::from(v), alphabet.symbol_bits());
    }
    bits
}

/// Parses a downlink list; `None` if the message is malformed or has trailing bits.
pub fn decode_ambiguity_list(bits: &BitString, alphabet: Alphabet) -> Option<Vec<Symbol>> {
    let raw = bits.as_slice();
    let mut pos = 0;
    let len = read_uint(raw, &mut pos, length_prefix_bits(alphabet))?;
    let mut values = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let v = read_uint(raw, &mut pos, alphabet.symbol_bits())?;
        values.push(Symbol::try_from(v).ok()?);
    }
    (pos == raw.len()).then_some(values)
}

/// Informant side of the two-message exchange: only the downlink and its own
/// reading are available here, never the joint support.
fn informant_reply(downlink: &BitString, alphabet: Alphabet, reading: Symbol) -> Result<BitString> {
    let list = decode_ambiguity_list(downlink, alphabet)
        .ok_or_else(|| Error::Transcript("informant could not parse the downlink list".into()))?;
    let index = list
        .iter()
        .position(|&v| v == reading)
        .ok_or_else(|| Error::Transcript(format!("reading {reading} missing from ambiguity list")))?;
    let mut reply = BitString::new();
    reply.push_uint(index as u64, ceil_log2(list.len() as u64));
    Ok(reply)
}

/// Runs the protocol against the true readings and records every message.
pub fn run_transcript(
    js: &JointSupport,
    schedule: &Schedule,
    kind: ProtocolKind,
    truth: &[Symbol],
) -> Result<Transcript> {
    check_schedule(js, schedule)?;
    if truth.len() != js.num_informants() || !js.contains(truth) {
        return Err(Error::TruthOutsideSupport(truth.to_vec()));
    }
    let alphabet = js.alphabet();
    let mut messages = Vec::with_capacity(schedule.len() * kind.message_count());
    for (pos, &informant) in schedule.order().iter().enumerate() {
        match kind {
            ProtocolKind::OneMessage => {
                let mut bits = BitString::new();
                bits.push_uint(u64::from(truth[informant]), alphabet.symbol_bits());
                messages.push(Message {
                    direction: Direction::Uplink,
                    informant,
                    bits,
                });
            }
            ProtocolKind::TwoMessage => {
                let polled = &schedule.order()[..pos];
                let ctx = ConditioningContext::new(polled.iter().map(|&j| (j, truth[j])))?;
                let set = js.ambiguity_set(&ctx, informant)?;
                let downlink = encode_ambiguity_list(set.values(), alphabet);
                let uplink = informant_reply(&downlink, alphabet, truth[informant])?;
                messages.push(Message {
                    direction: Direction::Downlink,
                    informant,
                    bits: downlink,
                });
                messages.push(Message {
                    direction: Direction::Uplink,
                    informant,
                    bits: uplink,
                });
            }
        }
    }
    Ok(Transcript { messages })
}

/// Recipient-side decoding. Each informant's symbol is fixed as soon as its
/// reply arrives, and every downlink is checked against the ambiguity set the
/// recipient derives from what it has decoded so far.
pub fn decode_transcript(
    js: &JointSupport,
    schedule: &Schedule,
    kind: ProtocolKind,
    transcript: &Transcript,
) -> Result<Vec<Symbol>> {
    check_schedule(js, schedule)?;
    let alphabet = js.alphabet();
    let expected = schedule.len() * kind.message_count();
    if transcript.messages.len() != expected {
        return Err(Error::Transcript(format!(
            "expected {expected} messages, found {}",
            transcript.messages.len()
        )));
    }
    let mut decoded: Vec<Option<Symbol>> = vec![None; js.num_informants()];
    let mut polled: Vec<(usize, Symbol)> = Vec::new();
    let per = kind.message_count();
    for (pos, &informant) in schedule.order().iter().enumerate() {
        let msgs = &transcript.messages[pos * per..(pos + 1) * per];
        if msgs.iter().any(|m| m.informant != informant) {
            return Err(Error::Transcript(format!(
                "messages at position {pos} do not belong to informant {informant}"
            )));
        }
        let symbol = match kind {
            ProtocolKind::OneMessage => {
                let up = expect_direction(&msgs[0], Direction::Uplink)?;
                let mut at = 0;
                let v = read_uint(up.as_slice(), &mut at, alphabet.symbol_bits())
                    .filter(|_| at == up.len())
                    .ok_or_else(|| Error::Transcript(format!("bad symbol from informant {informant}")))?;
                Symbol::try_from(v)
                    .ok()
                    .filter(|&s| alphabet.contains(s))
                    .ok_or_else(|| Error::Transcript(format!("symbol {v} outside the alphabet")))?
            }
            ProtocolKind::TwoMessage => {
                let down = expect_direction(&msgs[0], Direction::Downlink)?;
                let up = expect_direction(&msgs[1], Direction::Uplink)?;
                let ctx = ConditioningContext::new(polled.iter().copied())?;
                let set = js.ambiguity_set(&ctx, informant)?;
                if decode_ambiguity_list(down, alphabet).as_deref() != Some(set.values()) {
                    return Err(Error::Transcript(format!(
                        "downlink to informant {informant} is not the current ambiguity set"
                    )));
                }
                let mut at = 0;
                let index = read_uint(up.as_slice(), &mut at, ceil_log2(set.len() as u64))
                    .filter(|_| at == up.len())
                    .ok_or_else(|| Error::Transcript(format!("bad index from informant {informant}")))?;
                *set.values()
                    .get(index as usize)
                    .ok_or_else(|| Error::Transcript(format!("index {index} past the ambiguity set")))?
            }
        };
        decoded[informant] = Some(symbol);
        polled.push((informant, symbol));
    }
    Ok(decoded
        .into_iter()
        .map(|s| s.expect("schedule covers every informant"))
        .collect())
}

fn expect_direction(m: &Message, direction: Direction) -> Result<&BitString> {
    if m.direction != direction {
        return Err(Error::Transcript(format!(
            "expected a {} message for informant {}",
            direction.tag(),
            m.informant
        )));
    }
    Ok(&m.bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> JointSupport {
        let tuples = (0..4u32).flat_map(|x| [vec![x, x], vec![x, (x + 1) % 4]]);
        JointSupport::uniform(2, Alphabet::new(4).unwrap(), tuples).unwrap()
    }

    fn diagonal() -> JointSupport {
        JointSupport::uniform(2, Alphabet::new(4).unwrap(), (0..4).map(|x| vec![x, x])).unwrap()
    }

    #[test]
    fn singleton_set_needs_no_uplink() {
        let js = diagonal();
        let s = Schedule::identity(2);
        let t = run_transcript(&js, &s, ProtocolKind::TwoMessage, &[2, 2]).unwrap();
        assert_eq!(t.messages.len(), 4);
        assert!(t.messages[3].bits.is_empty());
        assert_eq!(
            decode_transcript(&js, &s, ProtocolKind::TwoMessage, &t).unwrap(),
            vec![2, 2]
        );
    }

    #[test]
    fn ring_second_informant_gets_two_candidates() {
        let js = ring();
        let s = Schedule::identity(2);
        let t = run_transcript(&js, &s, ProtocolKind::TwoMessage, &[1, 2]).unwrap();
        let down = &t.messages[2];
        assert_eq!(down.direction, Direction::Downlink);
        assert_eq!(decode_ambiguity_list(&down.bits, js.alphabet()).unwrap(), vec![1, 2]);
        assert_eq!(t.messages[3].bits.to_string(), "1");
        assert_eq!(
            decode_transcript(&js, &s, ProtocolKind::TwoMessage, &t).unwrap(),
            vec![1, 2]
        );
    }

    #[test]
    fn one_message_is_uncoded() {
        let js = ring();
        let s = Schedule::new(vec![1, 0]).unwrap();
        let t = run_transcript(&js, &s, ProtocolKind::OneMessage, &[3, 0]).unwrap();
        assert_eq!(t.bit_counts(2).uplink, vec![2, 2]);
        assert_eq!(t.bit_counts(2).downlink, vec![0, 0]);
        assert_eq!(
            decode_transcript(&js, &s, ProtocolKind::OneMessage, &t).unwrap(),
            vec![3, 0]
        );
    }

    #[test]
    fn empty_transcript_counts_zero() {
        let counts = Transcript::default().bit_counts(3);
        assert_eq!(counts.uplink, vec![0, 0, 0]);
        assert_eq!(counts.downlink, vec![0, 0, 0]);
    }

    #[test]
    fn truth_outside_support_is_rejected() {
        let err = run_transcript(&diagonal(), &Schedule::identity(2), ProtocolKind::TwoMessage, &[0, 1]);
        assert!(matches!(err, Err(Error::TruthOutsideSupport(_))));
    }

    #[test]
    fn tampered_downlink_is_detected() {
        let js = ring();
        let s = Schedule::identity(2);
        let mut t = run_transcript(&js, &s, ProtocolKind::TwoMessage, &[1, 2]).unwrap();
        t.messages[2].bits = encode_ambiguity_list(&[1, 3], js.alphabet());
        assert!(decode_transcript(&js, &s, ProtocolKind::TwoMessage, &t).is_err());
        t.messages.pop();
        assert!(decode_transcript(&js, &s, ProtocolKind::TwoMessage, &t).is_err());
    }

    #[test]
    fn dump_roundtrip() {
        let js = diagonal();
        let t = run_transcript(&js, &Schedule::identity(2), ProtocolKind::TwoMessage, &[3, 3]).unwrap();
        let text = t.dump();
        assert_eq!(text, "down 0 10000011011\nup 0 11\ndown 1 00111\nup 1 -\n");
        assert_eq!(Transcript::parse_dump(&text).unwrap(), t);
        assert!(Transcript::parse_dump("sideways 0 1\n").is_err());
        assert!(Transcript::parse_dump("up 0 102\n").is_err());
    }
}
