//! Finite alphabets, sparse joint supports and conditional ambiguity sets.
//!
//! A [`JointSupport`] stores the positive-probability tuples of the informants'
//! joint distribution. Ambiguity only depends on which tuples have positive
//! weight, so every query here is a scan over the support set; weights are
//! kept as exact rationals and are only used to report probabilities.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use num::rational::Ratio;
use num::{BigInt, BigRational, Zero};

use crate::bits::ceil_log2;
use crate::error::{Error, Result};

pub type Symbol = u32;

/// Positive tuple weight. Weights need not be normalized.
pub type Weight = Ratio<u64>;

/// Upper bound on the number of informants, so a conditioning set fits in a `u64` mask.
pub const MAX_INFORMANTS: usize = 64;

/// Symbols `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: u32,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSupport("alphabet size must be at least 1".into()));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Bits needed for an uncoded symbol, `⌈log2 n⌉` (zero for a unary alphabet).
    pub fn symbol_bits(&self) -> u32 {
        ceil_log2(u64::from(self.size))
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol < self.size
    }
}

/// Observed values of the already-polled informants, sorted by informant index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ConditioningContext {
    indices: Vec<usize>,
    values: Vec<Symbol>,
}

impl ConditioningContext {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a context from `(informant, value)` pairs in any order.
    pub fn new(pairs: impl IntoIterator<Item = (usize, Symbol)>) -> Result<Self> {
        let mut pairs: Vec<(usize, Symbol)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidContext("duplicate conditioned index".into()));
        }
        let (indices, values) = pairs.into_iter().unzip();
        Ok(ConditioningContext { indices, values })
    }

    /// Projection of a full tuple onto `indices` (assumed sorted and distinct).
    fn project(indices: &[usize], tuple: &[Symbol]) -> Self {
        ConditioningContext {
            indices: indices.to_vec(),
            values: indices.iter().map(|&i| tuple[i]).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn value_of(&self, index: usize) -> Option<Symbol> {
        self.indices.binary_search(&index).ok().map(|pos| self.values[pos])
    }

    fn matches(&self, tuple: &[Symbol]) -> bool {
        self.indices.iter().zip(&self.values).all(|(&i, &v)| tuple[i] == v)
    }
}

/// Values of `target` the recipient cannot rule out given a context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbiguitySet {
    pub target: usize,
    values: Vec<Symbol>,
}

impl AmbiguitySet {
    /// Sorted, distinct candidate values.
    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, value: Symbol) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }

    pub fn contains(&self, value: Symbol) -> bool {
        self.position(value).is_some()
    }
}

/// Sparse joint support of `N` informants over a common alphabet.
pub struct JointSupport {
    num_informants: usize,
    alphabet: Alphabet,
    entries: BTreeMap<Vec<Symbol>, Weight>,
    // (target, conditioning mask) -> maximum conditional ambiguity
    max_ambiguity_memo: Mutex<HashMap<(usize, u64), u32>>,
}

impl JointSupport {
    pub fn new(
        num_informants: usize,
        alphabet: Alphabet,
        entries: impl IntoIterator<Item = (Vec<Symbol>, Weight)>,
    ) -> Result<Self> {
        if num_informants == 0 {
            return Err(Error::InvalidSupport("at least one informant is required".into()));
        }
        if num_informants > MAX_INFORMANTS {
            return Err(Error::InvalidSupport(format!(
                "{num_informants} informants exceeds the limit of {MAX_INFORMANTS}"
            )));
        }
        let mut map = BTreeMap::new();
        for (tuple, weight) in entries {
            if tuple.len() != num_informants {
                return Err(Error::InvalidSupport(format!(
                    "tuple {tuple:?} has {} coordinates, expected {num_informants}",
                    tuple.len()
                )));
            }
            if let Some(&bad) = tuple.iter().find(|&&s| !alphabet.contains(s)) {
                return Err(Error::InvalidSupport(format!(
                    "symbol {bad} outside alphabet of size {}",
                    alphabet.size()
                )));
            }
            if weight.is_zero() {
                return Err(Error::InvalidSupport(format!("tuple {tuple:?} has zero weight")));
            }
            if map.contains_key(&tuple) {
                return Err(Error::InvalidSupport(format!("duplicate tuple {tuple:?}")));
            }
            map.insert(tuple, weight);
        }
        if map.is_empty() {
            return Err(Error::InvalidSupport("support is empty".into()));
        }
        Ok(JointSupport {
            num_informants,
            alphabet,
            entries: map,
            max_ambiguity_memo: Mutex::new(HashMap::new()),
        })
    }

    /// Equal weight on every listed tuple.
    pub fn uniform(
        num_informants: usize,
        alphabet: Alphabet,
        tuples: impl IntoIterator<Item = Vec<Symbol>>,
    ) -> Result<Self> {
        Self::new(
            num_informants,
            alphabet,
            tuples.into_iter().map(|t| (t, Weight::from_integer(1))),
        )
    }

    pub fn num_informants(&self) -> usize {
        self.num_informants
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Support tuples in lexicographic order with their weights.
    pub fn entries(&self) -> impl Iterator<Item = (&[Symbol], Weight)> + '_ {
        self.entries.iter().map(|(t, &w)| (t.as_slice(), w))
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.entries.keys().map(Vec::as_slice)
    }

    pub fn contains(&self, tuple: &[Symbol]) -> bool {
        self.entries.contains_key(tuple)
    }

    /// Normalized probability of a tuple; zero outside the support.
    pub fn probability(&self, tuple: &[Symbol]) -> BigRational {
        let Some(w) = self.entries.get(tuple) else {
            return BigRational::zero();
        };
        let total: BigRational = self.entries.values().map(to_big).sum();
        to_big(w) / total
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.num_informants {
            return Err(Error::IndexOutOfRange {
                index,
                count: self.num_informants,
            });
        }
        Ok(())
    }

    fn check_context(&self, ctx: &ConditioningContext, target: usize) -> Result<()> {
        self.check_index(target)?;
        for (&i, &v) in ctx.indices.iter().zip(&ctx.values) {
            self.check_index(i)?;
            if !self.alphabet.contains(v) {
                return Err(Error::InvalidContext(format!(
                    "observed value {v} for informant {i} is outside the alphabet"
                )));
            }
        }
        if ctx.value_of(target).is_some() {
            return Err(Error::IndexOverlap(target));
        }
        Ok(())
    }

    /// All values of `target` jointly possible with the observed context.
    pub fn ambiguity_set(&self, ctx: &ConditioningContext, target: usize) -> Result<AmbiguitySet> {
        self.check_context(ctx, target)?;
        let values: BTreeSet<Symbol> = self.tuples().filter(|t| ctx.matches(t)).map(|t| t[target]).collect();
        if values.is_empty() {
            return Err(Error::ZeroProbabilityContext);
        }
        Ok(AmbiguitySet {
            target,
            values: values.into_iter().collect(),
        })
    }

    /// `|ambiguity_set(ctx, target)|`.
    pub fn conditional_ambiguity(&self, ctx: &ConditioningContext, target: usize) -> Result<u32> {
        self.ambiguity_set(ctx, target).map(|s| s.len() as u32)
    }

    /// Worst-case ambiguity of `target` over every positive-probability
    /// realization of the informants in `conditioned`.
    pub fn max_conditional_ambiguity(&self, conditioned: &[usize], target: usize) -> Result<u32> {
        self.check_index(target)?;
        let mut mask = 0u64;
        for &i in conditioned {
            self.check_index(i)?;
            if i == target {
                return Err(Error::IndexOverlap(target));
            }
            mask |= 1 << i;
        }
        Ok(self.max_ambiguity_masked(mask, target))
    }

    /// Mask-keyed variant of [`Self::max_conditional_ambiguity`]; callers
    /// guarantee the indices are in range and exclude `target`.
    pub(crate) fn max_ambiguity_masked(&self, mask: u64, target: usize) -> u32 {
        debug_assert!(mask & (1 << target) == 0);
        let key = (target, mask);
        if let Some(&mu) = self.memo().get(&key) {
            return mu;
        }
        let indices = mask_indices(mask);
        let mut groups: HashMap<Vec<Symbol>, BTreeSet<Symbol>> = HashMap::new();
        for t in self.tuples() {
            let proj: Vec<Symbol> = indices.iter().map(|&i| t[i]).collect();
            groups.entry(proj).or_default().insert(t[target]);
        }
        let mu = groups.values().map(|s| s.len() as u32).max().unwrap_or(0);
        self.memo().insert(key, mu);
        mu
    }

    fn memo(&self) -> std::sync::MutexGuard<'_, HashMap<(usize, u64), u32>> {
        self.max_ambiguity_memo
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    /// Distinct positive-probability projections of the support onto
    /// `indices`, in lexicographic order of the projected values.
    pub fn enumerate_contexts(&self, indices: &[usize]) -> Result<Vec<ConditioningContext>> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::InvalidContext("duplicate conditioned index".into()));
        }
        for &i in &sorted {
            self.check_index(i)?;
        }
        let contexts: BTreeSet<ConditioningContext> = self
            .tuples()
            .map(|t| ConditioningContext::project(&sorted, t))
            .collect();
        Ok(contexts.into_iter().collect())
    }

    /// Values informant `index` takes with positive probability.
    pub fn marginal_support(&self, index: usize) -> Result<Vec<Symbol>> {
        self.check_index(index)?;
        let values: BTreeSet<Symbol> = self.tuples().map(|t| t[index]).collect();
        Ok(values.into_iter().collect())
    }

    /// Parses the plain-text support format:
    ///
    /// ```text
    /// # comments and blank lines are ignored
    /// N n
    /// x1 x2 ... xN num/den
    /// ```
    ///
    /// A bare integer weight means `num/1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `N n` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(header_line, "header must be `N n`"));
        }
        let num_informants: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(header_line, format!("bad informant count `{}`", fields[0])))?;
        let size: u32 = fields[1]
            .parse()
            .map_err(|_| Error::parse(header_line, format!("bad alphabet size `{}`", fields[1])))?;
        let alphabet = Alphabet::new(size).map_err(|e| Error::parse(header_line, e.to_string()))?;

        let mut entries: Vec<(Vec<Symbol>, Weight)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (line, body) in lines {
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != num_informants + 1 {
                return Err(Error::parse(
                    line,
                    format!(
                        "expected {num_informants} symbols and a weight, found {} fields",
                        fields.len()
                    ),
                ));
            }
            let tuple = fields[..num_informants]
                .iter()
                .map(|f| {
                    f.parse::<Symbol>()
                        .map_err(|_| Error::parse(line, format!("bad symbol `{f}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(&bad) = tuple.iter().find(|&&s| !alphabet.contains(s)) {
                return Err(Error::parse(
                    line,
                    format!("symbol {bad} outside alphabet of size {size}"),
                ));
            }
            let weight = parse_weight(fields[num_informants]).map_err(|m| Error::parse(line, m))?;
            if weight.is_zero() {
                return Err(Error::parse(line, "zero weight"));
            }
            if !seen.insert(tuple.clone()) {
                return Err(Error::parse(line, format!("duplicate tuple {tuple:?}")));
            }
            entries.push((tuple, weight));
        }
        JointSupport::new(num_informants, alphabet, entries).map_err(|e| Error::parse(header_line, e.to_string()))
    }

    /// Canonical text form accepted by [`JointSupport::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.num_informants, self.alphabet.size());
        for (tuple, w) in self.entries() {
            for s in tuple {
                out.push_str(&s.to_string());
                out.push(' ');
            }
            out.push_str(&format!("{}/{}\n", w.numer(), w.denom()));
        }
        out
    }
}

fn parse_weight(field: &str) -> std::result::Result<Weight, String> {
    let (num, den) = match field.split_once('/') {
        Some((n, d)) => (n, d),
        None => (field, "1"),
    };
    let num: u64 = num.parse().map_err(|_| format!("bad weight `{field}`"))?;
    let den: u64 = den.parse().map_err(|_| format!("bad weight `{field}`"))?;
    if den == 0 {
        return Err(format!("zero denominator in weight `{field}`"));
    }
    Ok(Weight::new(num, den))
}

fn to_big(w: &Weight) -> BigRational {
    BigRational::new(BigInt::from(*w.numer()), BigInt::from(*w.denom()))
}

pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl Clone for JointSupport {
    fn clone(&self) -> Self {
        JointSupport {
            num_informants: self.num_informants,
            alphabet: self.alphabet,
            entries: self.entries.clone(),
            max_ambiguity_memo: Mutex::new(self.memo().clone()),
        }
    }
}

impl PartialEq for JointSupport {
    fn eq(&self, other: &Self) -> bool {
        self.num_informants == other.num_informants && self.alphabet == other.alphabet && self.entries == other.entries
    }
}

impl Eq for JointSupport {}

impl fmt::Debug for JointSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointSupport")
            .field("num_informants", &self.num_informants)
            .field("alphabet", &self.alphabet.size())
            .field("entries", &self.entries.len())
            .finish()
    }
}
