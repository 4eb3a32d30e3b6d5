//! The formal triod map on itineraries and on external addresses.
//!
//! A triod is an ordered triple of distinct formal points. One step of the
//! map looks at the three first symbols: if all agree every member is
//! shifted; if exactly two agree the odd one out is "chopped" and replaced
//! by `ν` (resp. the base address `s`) while the other two are shifted; if all
//! three differ the map stops. The sequence of shared first symbols is the
//! middle point of the triod.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::itinerary::{Itinerary, Symbol};
use crate::partition::{in_formal_space, Partition, SectorResult};
use crate::sequences::{cyclic_between, EventuallyPeriodic, ExtAddress};

/// Result of one application of a triod map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Step<T> {
    Next(T),
    Stop,
}

impl<T> Step<T> {
    pub fn is_stop(&self) -> bool {
        matches!(self, Step::Stop)
    }
}

/// Shape of a triod. `middle` is a 1-based member index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriodShape {
    Branched,
    Linear { middle: usize },
    PreSingularBranched,
    PreSingularLinear { middle: usize },
}

impl TriodShape {
    pub fn is_branched(&self) -> bool {
        matches!(self, TriodShape::Branched | TriodShape::PreSingularBranched)
    }

    pub fn middle_member(&self) -> Option<usize> {
        match *self {
            TriodShape::Linear { middle } | TriodShape::PreSingularLinear { middle } => Some(middle),
            _ => None,
        }
    }
}

/// Which members keep their place in one step; the rest is replaced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Chop {
    None,
    Third,
    Second,
    First,
}

fn chop_case<T: PartialEq>(a: Option<T>, b: Option<T>, c: Option<T>) -> Option<Chop> {
    let same = |x: &Option<T>, y: &Option<T>| x.is_some() && x == y;
    if same(&a, &b) && same(&b, &c) {
        Some(Chop::None)
    } else if same(&a, &b) {
        Some(Chop::Third)
    } else if same(&a, &c) {
        Some(Chop::Second)
    } else if same(&b, &c) {
        Some(Chop::First)
    } else {
        None
    }
}

/// A formal triod of itineraries in the context of a kneading sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triod<'a> {
    members: [Itinerary; 3],
    nu: &'a EventuallyPeriodic,
}

/// Middle point of a triod together with the stop index, if any.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Resolution {
    pub middle: Itinerary,
    /// Number of successful steps before the stop case; `None` if the triod
    /// iterates forever.
    pub steps_before_stop: Option<usize>,
}

impl<'a> Triod<'a> {
    /// Checks that the members are distinct formal points.
    pub fn new(members: [Itinerary; 3], nu: &'a EventuallyPeriodic) -> Result<Triod<'a>> {
        let [t, u, v] = &members;
        if t == u || u == v || t == v {
            return Err(Error::InvalidTriod(format!("members not distinct: [{t}, {u}, {v}]")));
        }
        if let Some(bad) = members.iter().find(|m| !in_formal_space(nu, m)) {
            return Err(Error::NotFormalPoint(bad.to_string()));
        }
        Ok(Triod { members, nu })
    }

    pub fn members(&self) -> &[Itinerary; 3] {
        &self.members
    }

    pub fn kneading(&self) -> &'a EventuallyPeriodic {
        self.nu
    }

    fn first_ints(&self) -> [Option<i64>; 3] {
        self.members.each_ref().map(|m| match m.first_symbol() {
            Symbol::Int(k) => Some(k),
            Symbol::Star => None,
        })
    }

    /// One application of the formal triod map.
    pub fn step(&self) -> Step<Triod<'a>> {
        let [a, b, c] = self.first_ints();
        let Some(chop) = chop_case(a, b, c) else {
            return Step::Stop;
        };
        let nu = self.nu;
        let [t, u, v] = &self.members;
        let image = |x: &Itinerary, chopped: bool| {
            if chopped {
                Itinerary::Plain(nu.clone())
            } else {
                x.shift(nu)
            }
        };
        let members = [
            image(t, chop == Chop::First),
            image(u, chop == Chop::Second),
            image(v, chop == Chop::Third),
        ];
        Step::Next(Triod { members, nu })
    }

    /// The integer shared by at least two first symbols.
    pub fn majority_vote(&self) -> Result<i64> {
        let [a, b, c] = self.first_ints();
        match chop_case(a, b, c) {
            None => Err(Error::IsStopCase),
            Some(Chop::None | Chop::Third | Chop::Second) => Ok(a.expect("shared symbol")),
            Some(Chop::First) => Ok(b.expect("shared symbol")),
        }
    }

    /// Runs the triod map until it stops or revisits a state.
    ///
    /// Every member stays a shift of an input or of `ν`, so the state space
    /// is finite and the loop terminates.
    pub fn resolve(&self) -> Resolution {
        let mut seen: HashMap<[Itinerary; 3], usize> = HashMap::new();
        let mut votes = Vec::new();
        let mut current = self.clone();
        loop {
            if let Some(&start) = seen.get(&current.members) {
                let period = votes.split_off(start);
                let middle = EventuallyPeriodic::new(votes, period).expect("cycle has at least one vote");
                return Resolution {
                    middle: Itinerary::Plain(middle),
                    steps_before_stop: None,
                };
            }
            seen.insert(current.members.clone(), votes.len());
            let vote = current.majority_vote();
            match current.step() {
                Step::Stop => {
                    let steps = votes.len();
                    return Resolution {
                        middle: Itinerary::PreSingular(votes),
                        steps_before_stop: Some(steps),
                    };
                }
                Step::Next(next) => {
                    votes.push(vote.expect("non-stop triod has a majority vote"));
                    current = next;
                }
            }
        }
    }

    /// The middle point `b(t, u, v)`.
    pub fn middle_point(&self) -> Itinerary {
        self.resolve().middle
    }

    pub fn classify(&self) -> TriodShape {
        let Resolution {
            middle,
            steps_before_stop,
        } = self.resolve();
        let member = self.members.iter().position(|m| *m == middle).map(|i| i + 1);
        match (member, steps_before_stop.is_some()) {
            (None, false) => TriodShape::Branched,
            (None, true) => TriodShape::PreSingularBranched,
            (Some(middle), false) => TriodShape::Linear { middle },
            (Some(middle), true) => TriodShape::PreSingularLinear { middle },
        }
    }
}

/// Middle point of three distinct formal points; `None` if they do not form
/// a valid triod.
pub fn middle_point_of(
    nu: &EventuallyPeriodic,
    t: &Itinerary,
    u: &Itinerary,
    v: &Itinerary,
) -> Option<Itinerary> {
    Triod::new([t.clone(), u.clone(), v.clone()], nu)
        .ok()
        .map(|triod| triod.middle_point())
}

/// A formal triod of external addresses `t ≺ u ≺ v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AddressTriod<'a> {
    members: [ExtAddress; 3],
    partition: &'a Partition,
}

impl<'a> AddressTriod<'a> {
    pub fn new(members: [ExtAddress; 3], partition: &'a Partition) -> Result<AddressTriod<'a>> {
        let [t, u, v] = &members;
        if !cyclic_between(t, u, v).map_err(|_| {
            Error::InvalidTriod(format!("addresses not distinct: [{t}, {u}, {v}]"))
        })? {
            return Err(Error::InvalidTriod(format!(
                "addresses not in cyclic order: [{t}, {u}, {v}]"
            )));
        }
        let triod = AddressTriod { members, partition };
        triod.itinerary_triod()?;
        Ok(triod)
    }

    /// Sorts three distinct addresses into cyclic order before validating.
    pub fn from_unordered(
        mut members: [ExtAddress; 3],
        partition: &'a Partition,
    ) -> Result<AddressTriod<'a>> {
        members.sort();
        Self::new(members, partition)
    }

    pub fn members(&self) -> &[ExtAddress; 3] {
        &self.members
    }

    pub fn partition(&self) -> &'a Partition {
        self.partition
    }

    pub fn itineraries(&self) -> [Itinerary; 3] {
        self.members.each_ref().map(|a| self.partition.itinerary(a))
    }

    /// The associated triod of itineraries.
    pub fn itinerary_triod(&self) -> Result<Triod<'a>> {
        Triod::new(self.itineraries(), self.partition.kneading())
    }

    fn sectors(&self) -> [Option<i64>; 3] {
        self.members.each_ref().map(|a| match self.partition.sector_of(a) {
            SectorResult::Interior(k) => Some(k),
            SectorResult::Boundary(_) => None,
        })
    }

    /// One application of the address-level triod map.
    pub fn step(&self) -> Step<AddressTriod<'a>> {
        let [a, b, c] = self.sectors();
        let Some(chop) = chop_case(a, b, c) else {
            return Step::Stop;
        };
        let s = self.partition.base();
        let [t, u, v] = &self.members;
        let image = |x: &ExtAddress, chopped: bool| if chopped { s.clone() } else { x.shift() };
        // The chop of the middle member yields [σ(t), s, σ(v)].
        let members = [
            image(t, chop == Chop::First),
            image(u, chop == Chop::Second),
            image(v, chop == Chop::Third),
        ];
        Step::Next(AddressTriod {
            members,
            partition: self.partition,
        })
    }

    /// Sector index shared by at least two members.
    pub fn majority_vote(&self) -> Result<i64> {
        let [a, b, c] = self.sectors();
        match chop_case(a, b, c) {
            None => Err(Error::IsStopCase),
            Some(Chop::None | Chop::Third | Chop::Second) => Ok(a.expect("shared sector")),
            Some(Chop::First) => Ok(b.expect("shared sector")),
        }
    }

    pub fn middle_point(&self) -> Result<Itinerary> {
        Ok(self.itinerary_triod()?.middle_point())
    }

    pub fn classify(&self) -> Result<TriodShape> {
        Ok(self.itinerary_triod()?.classify())
    }
}
