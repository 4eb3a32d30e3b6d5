//! External addresses realizing a given itinerary, and separating addresses
//! for triods.
//!
//! A periodic itinerary `(p₁…p_n)` is realized by searching all periodic
//! candidates of period `m·n` whose `i`-th entry is `j0 + p_i` or
//! `j0 + p_i + 1` (the two possible first entries of an address in sector
//! `I_{p_i}`). All realizing addresses share one minimal period, so the
//! search stops at the first `m` that yields anything. Preperiodic and
//! pre-singular itineraries are realized by pulling periodic (resp.
//! boundary) addresses back along their prefix.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::itinerary::Itinerary;
use crate::partition::Partition;
use crate::sequences::{cyclic_between, lcm, EventuallyPeriodic, ExtAddress, ENTRY_LIMIT};
use crate::triods::{AddressTriod, Step, TriodShape};

/// Bounds for the exhaustive periodic search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest multiple of the itinerary period tried.
    pub m_max: usize,
    /// The search fails rather than enumerate more than `2^log2_cap` candidates.
    pub log2_cap: u32,
    /// Also search `m+1..=2m` and require that nothing new turns up.
    pub paranoid: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            m_max: 8,
            log2_cap: 20,
            paranoid: false,
        }
    }
}

/// Lexicographically sorted addresses sharing one itinerary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddressSet {
    pub itinerary: Itinerary,
    pub addresses: Vec<ExtAddress>,
}

impl AddressSet {
    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExtAddress> {
        self.addresses.iter()
    }
}

/// Addresses realizing the purely periodic itinerary `p`.
pub fn addresses_of_periodic(
    partition: &Partition,
    p: &EventuallyPeriodic,
    config: &SearchConfig,
) -> Result<AddressSet> {
    if !p.is_periodic() {
        return Err(Error::NotPeriodic(p.to_string()));
    }
    let itinerary = Itinerary::Plain(p.clone());
    if !partition.is_in_s_nu(&itinerary) {
        return Err(Error::NotFormalPoint(p.to_string()));
    }
    let exceeded = || Error::RealizationBoundExceeded {
        itinerary: p.to_string(),
        m_max: config.m_max,
        log2_cap: config.log2_cap,
    };
    for m in 1..=config.m_max {
        let len = m * p.period_len();
        if len > config.log2_cap as usize {
            return Err(exceeded());
        }
        let found = search_period(partition, p, len)?;
        if found.is_empty() {
            continue;
        }
        if config.paranoid {
            for extra in (m + 1)..=(2 * m) {
                let len = extra * p.period_len();
                if len > config.log2_cap as usize {
                    break;
                }
                let more = search_period(partition, p, len)?;
                if !more.is_subset(&found) {
                    return Err(Error::InvariantViolation(format!(
                        "period multiple {extra} adds new addresses for {p}"
                    )));
                }
            }
        }
        return Ok(AddressSet {
            itinerary,
            addresses: found.into_iter().collect(),
        });
    }
    Err(exceeded())
}

/// All periodic addresses of (not necessarily minimal) period `len` that
/// realize `p`.
fn search_period(partition: &Partition, p: &EventuallyPeriodic, len: usize) -> Result<BTreeSet<ExtAddress>> {
    let n = p.period_len();
    let j0 = partition.offset_j0();
    let base_word: Vec<i64> = (0..len)
        .map(|i| {
            let entry = j0 as i128 + p.period()[i % n] as i128;
            if entry.unsigned_abs() >= ENTRY_LIMIT as u128 {
                Err(Error::EntryOutOfRange(entry))
            } else {
                Ok(entry as i64)
            }
        })
        .collect::<Result<_>>()?;
    let s = partition.base();
    let bound = s.preperiod_len() + lcm(len, s.period_len());

    let hits: Vec<Vec<i64>> = (0u64..(1u64 << len))
        .into_par_iter()
        .filter_map(|eps| {
            let word: Vec<i64> = base_word
                .iter()
                .enumerate()
                .map(|(i, &b)| b + ((eps >> i) & 1) as i64)
                .collect();
            realizes(&word, s, j0, p, bound).then_some(word)
        })
        .collect();

    hits.into_iter()
        .map(ExtAddress::periodic)
        .collect()
}

/// Checks `It((word)^∞ | s) = p` directly on the raw word.
fn realizes(word: &[i64], s: &ExtAddress, j0: i64, p: &EventuallyPeriodic, bound: usize) -> bool {
    let len = word.len();
    let n = p.period_len();
    (0..len).all(|i| {
        let tail_vs_base = (1..=bound)
            .map(|j| word[(i + j) % len].cmp(&s.entry(j)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal);
        let lower = match tail_vs_base {
            Ordering::Greater => word[i],
            Ordering::Less => word[i] - 1,
            Ordering::Equal => return false,
        };
        lower - j0 == p.period()[i % n]
    })
}

/// Addresses realizing `t`.
///
/// Pre-singular itineraries have infinitely many realizations, one per
/// boundary address `m·s`; `boundary_range` selects which `m` to use.
pub fn addresses_of(
    partition: &Partition,
    t: &Itinerary,
    config: &SearchConfig,
    boundary_range: Option<RangeInclusive<i64>>,
) -> Result<AddressSet> {
    match t {
        Itinerary::Plain(seq) => {
            if !partition.is_in_s_nu(t) {
                return Err(Error::NotFormalPoint(t.to_string()));
            }
            let tail = EventuallyPeriodic::periodic(seq.period().to_vec())?;
            let periodic = addresses_of_periodic(partition, &tail, config)?;
            if seq.is_periodic() {
                return Ok(periodic);
            }
            let mut found = BTreeSet::new();
            for a in periodic.iter() {
                let x = partition.pull_back(seq.preperiod(), a)?;
                if partition.itinerary(&x) == *t {
                    found.insert(x);
                }
            }
            Ok(AddressSet {
                itinerary: t.clone(),
                addresses: found.into_iter().collect(),
            })
        }
        Itinerary::PreSingular(prefix) => {
            let range = boundary_range.unwrap_or(default_boundary_range(partition));
            if range.is_empty() {
                return Err(Error::EmptyRange);
            }
            let mut found = BTreeSet::new();
            for m in range {
                let x = partition.pull_back(prefix, &partition.boundary_address(m)?)?;
                if partition.itinerary(&x) == *t {
                    found.insert(x);
                }
            }
            Ok(AddressSet {
                itinerary: t.clone(),
                addresses: found.into_iter().collect(),
            })
        }
    }
}

/// `[j0 - 1, j0 + 2]`: the boundary addresses around sectors `I_0` and `I_1`.
pub fn default_boundary_range(partition: &Partition) -> RangeInclusive<i64> {
    let j0 = partition.offset_j0();
    (j0 - 1)..=(j0 + 2)
}

/// Where a separating address sits relative to a triod `[t¹, t², t³]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    /// The open cyclic interval `(tⁱ, tⁱ⁺¹)`, 1-based.
    Gap(usize),
    /// Equal to member `j`, 1-based.
    Member(usize),
}

/// Position of `x` relative to three addresses in cyclic order.
pub fn slot_of(members: &[ExtAddress; 3], x: &ExtAddress) -> Slot {
    if let Some(j) = members.iter().position(|m| m == x) {
        return Slot::Member(j + 1);
    }
    let gap = (0..3)
        .find(|&i| cyclic_between(&members[i], x, &members[(i + 1) % 3]) == Ok(true))
        .expect("an address distinct from the members lies in one gap");
    Slot::Gap(gap + 1)
}

/// The separating addresses of an address triod.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub middle: Itinerary,
    pub shape: TriodShape,
    pub placements: Vec<(Slot, ExtAddress)>,
}

impl Separation {
    pub fn count_in(&self, slot: Slot) -> usize {
        self.placements.iter().filter(|(s, _)| *s == slot).count()
    }
}

/// Realizations of the middle point of `triod`, placed in the gaps of the
/// triod. Fails if the placements contradict the expected separation pattern.
pub fn separating_addresses(
    partition: &Partition,
    triod: &AddressTriod,
    config: &SearchConfig,
) -> Result<Separation> {
    let itinerary_triod = triod.itinerary_triod()?;
    let resolution = itinerary_triod.resolve();
    let shape = itinerary_triod.classify();
    let middle = resolution.middle;
    let members = triod.members();

    let range = match &middle {
        Itinerary::PreSingular(_) => Some(stop_range(triod)),
        Itinerary::Plain(_) => None,
    };
    let mut addresses: BTreeSet<ExtAddress> =
        addresses_of(partition, &middle, config, range)?.addresses.into_iter().collect();
    // A linear triod's middle member realizes the middle point itself.
    for (m, it) in members.iter().zip(itinerary_triod.members()) {
        if *it == middle {
            addresses.insert(m.clone());
        }
    }

    let mut placements: Vec<(Slot, ExtAddress)> =
        addresses.into_iter().map(|x| (slot_of(members, &x), x)).collect();
    placements.sort();
    let separation = Separation {
        middle,
        shape,
        placements,
    };

    let fail = |what: &str| {
        Error::GapAssignmentFailure(format!(
            "{what} for triod [{}, {}, {}] with middle point {}",
            members[0], members[1], members[2], separation.middle
        ))
    };
    match shape.middle_member() {
        None => {
            if (1..=3).any(|i| separation.count_in(Slot::Gap(i)) == 0) {
                return Err(fail("branched triod has an empty gap"));
            }
        }
        Some(j) => {
            let opposite = j % 3 + 1;
            if separation.count_in(Slot::Member(j)) != 1 || separation.count_in(Slot::Gap(opposite)) == 0 {
                return Err(fail("linear triod lacks a separating pair"));
            }
        }
    }
    Ok(separation)
}

/// Boundary indices around the first entries of the triod's last image
/// before it stops.
fn stop_range(triod: &AddressTriod) -> RangeInclusive<i64> {
    let mut current = triod.clone();
    while let Step::Next(next) = current.step() {
        current = next;
    }
    let firsts = current.members().each_ref().map(|a| a.first());
    let lo = firsts.iter().min().copied().unwrap_or(0);
    let hi = firsts.iter().max().copied().unwrap_or(0);
    (lo - 1)..=(hi + 1)
}

/// True iff no interleaving `a ≺ b ≺ a' ≺ b'` exists between the two sets.
pub fn unlinked(a: &[ExtAddress], b: &[ExtAddress]) -> bool {
    let mut merged: Vec<(&ExtAddress, bool)> =
        a.iter().map(|x| (x, false)).chain(b.iter().map(|x| (x, true))).collect();
    merged.sort_by(|x, y| x.0.cmp(y.0));
    // Unlinked iff, read cyclically, the labels change at most twice.
    let changes = (0..merged.len())
        .filter(|&i| merged[i].1 != merged[(i + 1) % merged.len()].1)
        .count();
    changes <= 2
}
