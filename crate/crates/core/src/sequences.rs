//! Eventually periodic integer sequences and the shift space of external
//! addresses.
//!
//! A sequence is stored as `preperiod · period · period · …` in canonical
//! form: the period word is primitive (not a power of a shorter word) and the
//! last preperiod entry differs from the last period entry. Two values denote
//! the same infinite sequence iff they are structurally equal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Largest entry magnitude accepted in an external address.
///
/// Sector arithmetic adds and subtracts pairs of entries; keeping entries
/// below `2^61` means none of that can leave `i64`.
pub const ENTRY_LIMIT: i64 = 1 << 61;

/// Canonical eventually periodic sequence over the integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EventuallyPeriodic {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl EventuallyPeriodic {
    /// Builds the canonical form of `preperiod · (period)^∞`.
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut preperiod = preperiod;
        let mut period = primitive_root(period);
        while let (Some(&last_pre), Some(&last_per)) = (preperiod.last(), period.last()) {
            if last_pre != last_per {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Ok(EventuallyPeriodic { preperiod, period })
    }

    /// The purely periodic sequence `(word)^∞`.
    pub fn periodic(word: Vec<i64>) -> Result<Self> {
        Self::new(Vec::new(), word)
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    pub fn preperiod_len(&self) -> usize {
        self.preperiod.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// True iff the shift orbit returns to the sequence itself.
    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The `i`-th entry, counted from 1.
    pub fn entry(&self, i: usize) -> i64 {
        assert!(i >= 1, "entries are indexed from 1");
        let i = i - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn first(&self) -> i64 {
        self.entry(1)
    }

    /// Left shift: drops the first entry.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            EventuallyPeriodic {
                preperiod: Vec::new(),
                period,
            }
        } else {
            EventuallyPeriodic {
                preperiod: self.preperiod[1..].to_vec(),
                period: self.period.clone(),
            }
        }
    }

    /// `n`-fold left shift.
    pub fn shift_by(&self, n: usize) -> Self {
        if n <= self.preperiod.len() {
            return EventuallyPeriodic {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
            };
        }
        let mut period = self.period.clone();
        let r = (n - self.preperiod.len()) % period.len();
        period.rotate_left(r);
        EventuallyPeriodic {
            preperiod: Vec::new(),
            period,
        }
    }

    /// Concatenation `k · self`.
    pub fn prepend(&self, k: i64) -> Self {
        let mut preperiod = Vec::with_capacity(self.preperiod.len() + 1);
        preperiod.push(k);
        preperiod.extend_from_slice(&self.preperiod);
        let mut period = self.period.clone();
        if self.preperiod.is_empty() && period.last() == Some(&k) {
            preperiod.pop();
            period.rotate_right(1);
        }
        EventuallyPeriodic { preperiod, period }
    }

    /// Number of leading entries that decide any comparison with `other`.
    pub fn comparison_bound(&self, other: &Self) -> usize {
        self.preperiod.len().max(other.preperiod.len()) + lcm(self.period.len(), other.period.len())
    }

    /// Lexicographic comparison of the denoted infinite sequences.
    pub fn compare_lex(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let bound = self.comparison_bound(other);
        (1..=bound)
            .map(|i| self.entry(i).cmp(&other.entry(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// All distinct forward shifts `σ^n(self)` for `n ≥ 1`.
    pub fn strict_forward_orbit(&self) -> Vec<Self> {
        let steps = self.preperiod.len() + self.period.len();
        let mut out = Vec::with_capacity(steps);
        let mut cur = self.shift();
        for _ in 0..steps {
            let next = cur.shift();
            if !out.contains(&cur) {
                out.push(cur);
            }
            cur = next;
        }
        out
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> Vec<i64> {
        (1..=n).map(|i| self.entry(i)).collect()
    }
}

impl Ord for EventuallyPeriodic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare_lex(other)
    }
}

impl PartialOrd for EventuallyPeriodic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EventuallyPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}({})", join(&self.preperiod), join(&self.period))
    }
}

/// An external address: an eventually periodic sequence with entries bounded
/// by [`ENTRY_LIMIT`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtAddress(EventuallyPeriodic);

impl ExtAddress {
    /// Canonical address `preperiod · (period)^∞`.
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self> {
        check_entries(preperiod.iter().chain(period.iter()))?;
        EventuallyPeriodic::new(preperiod, period).map(ExtAddress)
    }

    pub fn periodic(word: Vec<i64>) -> Result<Self> {
        Self::new(Vec::new(), word)
    }

    pub fn from_sequence(seq: EventuallyPeriodic) -> Result<Self> {
        check_entries(seq.preperiod.iter().chain(seq.period.iter()))?;
        Ok(ExtAddress(seq))
    }

    pub fn as_sequence(&self) -> &EventuallyPeriodic {
        &self.0
    }

    pub fn into_sequence(self) -> EventuallyPeriodic {
        self.0
    }

    pub fn shift(&self) -> ExtAddress {
        ExtAddress(self.0.shift())
    }

    pub fn shift_by(&self, n: usize) -> ExtAddress {
        ExtAddress(self.0.shift_by(n))
    }

    /// Concatenation `k · self`; fails only if `k` is out of range.
    pub fn prepend(&self, k: i64) -> Result<ExtAddress> {
        check_entries(std::iter::once(&k))?;
        Ok(ExtAddress(self.0.prepend(k)))
    }

    pub fn compare_lex(&self, other: &ExtAddress) -> Ordering {
        self.0.compare_lex(&other.0)
    }
}

impl Deref for ExtAddress {
    type Target = EventuallyPeriodic;

    fn deref(&self) -> &EventuallyPeriodic {
        &self.0
    }
}

impl Ord for ExtAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare_lex(other)
    }
}

impl PartialOrd for ExtAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `a ≺ b ≺ c` in the cyclic order induced by the lexicographic order.
pub fn cyclic_between<T: Ord>(a: &T, b: &T, c: &T) -> Result<bool> {
    if a == b || b == c || a == c {
        return Err(Error::NotDistinct);
    }
    Ok((a < b && b < c) || (b < c && c < a) || (c < a && a < b))
}

fn check_entries<'a>(entries: impl Iterator<Item = &'a i64>) -> Result<()> {
    for &e in entries {
        if e.unsigned_abs() > ENTRY_LIMIT as u64 {
            return Err(Error::EntryOutOfRange(e as i128));
        }
    }
    Ok(())
}

fn primitive_root(word: Vec<i64>) -> Vec<i64> {
    let n = word.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| word[i] == word[i - d]) {
            return word[..d].to_vec();
        }
    }
    word
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
