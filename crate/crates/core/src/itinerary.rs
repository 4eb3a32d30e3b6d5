//! Itineraries: sequences over `ℤ ∪ {*}` that are either plain eventually
//! periodic integer sequences or pre-singular words `k₁…k_r * ν`.

use std::cmp::Ordering;
use std::fmt;

use crate::sequences::{lcm, EventuallyPeriodic};

/// One symbol of an itinerary.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    Int(i64),
    Star,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Int(k) => write!(f, "{k}"),
            Symbol::Star => f.write_str("*"),
        }
    }
}

/// An itinerary relative to an ambient kneading sequence `ν`.
///
/// `PreSingular(prefix)` denotes `prefix · * · ν`; the tail is implied by
/// context and never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Itinerary {
    Plain(EventuallyPeriodic),
    PreSingular(Vec<i64>),
}

impl Itinerary {
    /// The singular itinerary `*ν`.
    pub fn star() -> Itinerary {
        Itinerary::PreSingular(Vec::new())
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Itinerary::PreSingular(p) if p.is_empty())
    }

    pub fn is_presingular(&self) -> bool {
        matches!(self, Itinerary::PreSingular(_))
    }

    pub fn as_plain(&self) -> Option<&EventuallyPeriodic> {
        match self {
            Itinerary::Plain(seq) => Some(seq),
            Itinerary::PreSingular(_) => None,
        }
    }

    pub fn first_symbol(&self) -> Symbol {
        self.symbol(1, None)
    }

    /// The `i`-th symbol (from 1). The kneading sequence is needed only past
    /// the star of a pre-singular itinerary.
    pub fn symbol(&self, i: usize, nu: Option<&EventuallyPeriodic>) -> Symbol {
        assert!(i >= 1, "symbols are indexed from 1");
        match self {
            Itinerary::Plain(seq) => Symbol::Int(seq.entry(i)),
            Itinerary::PreSingular(prefix) => match (i - 1).cmp(&prefix.len()) {
                Ordering::Less => Symbol::Int(prefix[i - 1]),
                Ordering::Equal => Symbol::Star,
                Ordering::Greater => {
                    let nu = nu.expect("kneading sequence required past the star");
                    Symbol::Int(nu.entry(i - 1 - prefix.len()))
                }
            },
        }
    }

    /// Left shift; `σ(*ν) = ν`.
    pub fn shift(&self, nu: &EventuallyPeriodic) -> Itinerary {
        match self {
            Itinerary::Plain(seq) => Itinerary::Plain(seq.shift()),
            Itinerary::PreSingular(prefix) if prefix.is_empty() => Itinerary::Plain(nu.clone()),
            Itinerary::PreSingular(prefix) => Itinerary::PreSingular(prefix[1..].to_vec()),
        }
    }

    /// Number of symbols after which any two itineraries in the same context
    /// are periodic with a common period.
    pub(crate) fn span(&self, nu: &EventuallyPeriodic) -> (usize, usize) {
        match self {
            Itinerary::Plain(seq) => (seq.preperiod_len(), seq.period_len()),
            Itinerary::PreSingular(prefix) => {
                (prefix.len() + 1 + nu.preperiod_len(), nu.period_len())
            }
        }
    }

    /// Least `n` such that the `(n+1)`-th symbols differ, or `None` if the
    /// itineraries are equal.
    pub fn separation_depth(&self, other: &Itinerary, nu: &EventuallyPeriodic) -> Option<usize> {
        if self == other {
            return None;
        }
        let (pa, qa) = self.span(nu);
        let (pb, qb) = other.span(nu);
        let bound = pa.max(pb) + lcm(qa, qb);
        (1..=bound).find(|&i| self.symbol(i, Some(nu)) != other.symbol(i, Some(nu))).map(|i| i - 1)
    }
}

/// Deterministic vertex order: pre-singular before plain, then
/// lexicographic.
impl Ord for Itinerary {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Itinerary::PreSingular(a), Itinerary::PreSingular(b)) => a.cmp(b),
            (Itinerary::PreSingular(_), Itinerary::Plain(_)) => Ordering::Less,
            (Itinerary::Plain(_), Itinerary::PreSingular(_)) => Ordering::Greater,
            (Itinerary::Plain(a), Itinerary::Plain(b)) => a.compare_lex(b),
        }
    }
}

impl PartialOrd for Itinerary {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Itinerary::Plain(seq) => seq.fmt(f),
            Itinerary::PreSingular(prefix) => {
                for k in prefix {
                    write!(f, "{k},")?;
                }
                f.write_str("*")
            }
        }
    }
}
