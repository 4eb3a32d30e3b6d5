//! The dynamical partition of the shift space with respect to a base address
//! `s`: sectors `I_k`, itineraries, the kneading sequence and the inverse
//! branches of the shift.
//!
//! Sector `I_k` is the open lexicographic interval `((j0+k)·s, (j0+k+1)·s)`,
//! where `j0` is chosen so that `s ∈ I_0`. The boundary of the partition is
//! `σ⁻¹(s) = { m·s : m ∈ ℤ }`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::itinerary::Itinerary;
use crate::sequences::{lcm, EventuallyPeriodic, ExtAddress};

/// Position of an address relative to the partition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SectorResult {
    /// Inside sector `I_k`.
    Interior(i64),
    /// Equal to the boundary address `m·s`; carries `m`.
    Boundary(i64),
}

/// Non-fatal remarks attached to a validated base.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseWarning {
    /// Classification normalizes bases to start with 0; this one does not.
    NonZeroLeadingEntry(i64),
}

/// A validated base address together with its partition data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    base: ExtAddress,
    offset_j0: i64,
    kneading: EventuallyPeriodic,
    warning: Option<BaseWarning>,
}

impl Partition {
    /// Validates `s` as a base address. It must be strictly preperiodic.
    pub fn new(s: ExtAddress) -> Result<Partition> {
        if s.is_periodic() {
            return Err(Error::PeriodicBase(s.to_string()));
        }
        let offset_j0 = match s.shift().compare_lex(&s) {
            Ordering::Less => s.first() - 1,
            _ => s.first(),
        };
        let warning = (s.first() != 0).then_some(BaseWarning::NonZeroLeadingEntry(s.first()));
        let mut partition = Partition {
            base: s,
            offset_j0,
            // placeholder, replaced below
            kneading: EventuallyPeriodic::periodic(vec![0])?,
            warning,
        };
        partition.kneading = match partition.itinerary(&partition.base) {
            Itinerary::Plain(nu) => nu,
            // σ^k(s) = m·s would force σ^{k+1}(s) = s.
            Itinerary::PreSingular(_) => unreachable!("a strictly preperiodic base never meets the boundary"),
        };
        debug_assert_eq!(partition.kneading.first(), 0);
        Ok(partition)
    }

    pub fn base(&self) -> &ExtAddress {
        &self.base
    }

    pub fn offset_j0(&self) -> i64 {
        self.offset_j0
    }

    /// The kneading sequence `ν = It(s | s)`.
    pub fn kneading(&self) -> &EventuallyPeriodic {
        &self.kneading
    }

    pub fn kneading_itinerary(&self) -> Itinerary {
        Itinerary::Plain(self.kneading.clone())
    }

    pub fn warning(&self) -> Option<BaseWarning> {
        self.warning
    }

    /// Sector of the address `t`.
    pub fn sector_of(&self, t: &ExtAddress) -> SectorResult {
        self.sector_of_shifted(t, 0)
    }

    /// Sector of `σ^n(t)` without materializing the shifted address.
    pub fn sector_of_shifted(&self, t: &EventuallyPeriodic, n: usize) -> SectorResult {
        let head = t.entry(n + 1);
        let s = &self.base;
        let bound = t.preperiod_len().max(s.preperiod_len()) + lcm(t.period_len(), s.period_len());
        let tail_vs_base = (1..=bound)
            .map(|i| t.entry(n + 1 + i).cmp(&s.entry(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal);
        match tail_vs_base {
            Ordering::Greater => SectorResult::Interior(head - self.offset_j0),
            Ordering::Less => SectorResult::Interior(head - 1 - self.offset_j0),
            Ordering::Equal => SectorResult::Boundary(head),
        }
    }

    /// Itinerary `It(t | s)`.
    pub fn itinerary(&self, t: &ExtAddress) -> Itinerary {
        let pre = t.preperiod_len();
        let steps = pre + t.period_len();
        let mut entries = Vec::with_capacity(steps);
        for n in 0..steps {
            match self.sector_of_shifted(t, n) {
                SectorResult::Interior(k) => entries.push(k),
                SectorResult::Boundary(_) => return Itinerary::PreSingular(entries),
            }
        }
        let period = entries.split_off(pre);
        Itinerary::Plain(
            EventuallyPeriodic::new(entries, period).expect("address period is nonempty"),
        )
    }

    /// `ν`, computed as the itinerary of the base.
    pub fn kneading_of_base(&self) -> Itinerary {
        self.itinerary(&self.base)
    }

    /// The unique preimage of `u` under the shift inside `I_k⁻ = ((j0+k)·s, (j0+k+1)·s]`.
    pub fn inverse_branch(&self, k: i64, u: &ExtAddress) -> Result<ExtAddress> {
        let lower = self
            .offset_j0
            .checked_add(k)
            .ok_or(Error::EntryOutOfRange(self.offset_j0 as i128 + k as i128))?;
        let first = if u.compare_lex(&self.base) == Ordering::Greater {
            lower
        } else {
            lower
                .checked_add(1)
                .ok_or(Error::EntryOutOfRange(lower as i128 + 1))?
        };
        u.prepend(first)
    }

    /// Composite pullback `inverse_branch(k₁) ∘ … ∘ inverse_branch(k_r)`.
    pub fn pull_back(&self, word: &[i64], u: &ExtAddress) -> Result<ExtAddress> {
        word.iter()
            .rev()
            .try_fold(u.clone(), |acc, &k| self.inverse_branch(k, &acc))
    }

    /// The boundary address `m·s`.
    pub fn boundary_address(&self, m: i64) -> Result<ExtAddress> {
        self.base.prepend(m)
    }

    /// True iff `I_k⁻` contains `t`.
    pub fn in_half_open_sector(&self, k: i64, t: &ExtAddress) -> bool {
        match self.sector_of(t) {
            SectorResult::Interior(j) => j == k,
            SectorResult::Boundary(m) => m == self.offset_j0 + k + 1,
        }
    }

    /// Membership in the space of formal (pre-)periodic points.
    pub fn is_in_s_nu(&self, t: &Itinerary) -> bool {
        in_formal_space(&self.kneading, t)
    }
}

/// `t ∈ 𝒮_ν`: pre-singular itineraries always are; plain ones iff no strict
/// forward shift equals `ν`.
pub fn in_formal_space(nu: &EventuallyPeriodic, t: &Itinerary) -> bool {
    match t {
        Itinerary::PreSingular(_) => true,
        Itinerary::Plain(seq) => !seq.strict_forward_orbit().contains(nu),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(pre: &[i64], per: &[i64]) -> ExtAddress {
        ExtAddress::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn seq(pre: &[i64], per: &[i64]) -> EventuallyPeriodic {
        EventuallyPeriodic::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn plain(pre: &[i64], per: &[i64]) -> Itinerary {
        Itinerary::Plain(seq(pre, per))
    }

    /// Sector index by locating `t` between consecutive boundary addresses
    /// with long prefix comparisons only.
    fn brute_sector(p: &Partition, t: &EventuallyPeriodic) -> Option<i64> {
        let prefix_cmp = |a: &EventuallyPeriodic, b: &EventuallyPeriodic| {
            (1..=200)
                .map(|i| a.entry(i).cmp(&b.entry(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        let s = p.base().as_sequence();
        for m in (t.first() - 2)..=(t.first() + 1) {
            let lo = s.prepend(m);
            let hi = s.prepend(m + 1);
            if prefix_cmp(&lo, t) == Ordering::Less && prefix_cmp(t, &hi) == Ordering::Less {
                return Some(m - p.offset_j0());
            }
        }
        None
    }

    fn brute_itinerary_prefix(p: &Partition, t: &ExtAddress, n: usize) -> Vec<Option<i64>> {
        (0..n).map(|k| brute_sector(p, &t.shift_by(k))).collect()
    }

    #[test]
    fn validate_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        assert_eq!(p.offset_j0(), 0);
        assert_eq!(p.kneading(), &seq(&[0], &[1]));
        assert_eq!(
            brute_itinerary_prefix(&p, p.base(), 4),
            vec![Some(0), Some(1), Some(1), Some(1)]
        );

        let p = Partition::new(addr(&[0], &[0, 1])).unwrap();
        assert_eq!(p.offset_j0(), 0);
        assert_eq!(p.kneading(), &seq(&[0], &[0, 1]));
        assert_eq!(
            brute_itinerary_prefix(&p, p.base(), 5),
            vec![Some(0), Some(0), Some(1), Some(0), Some(1)]
        );

        assert!(matches!(
            Partition::new(addr(&[], &[1])),
            Err(Error::PeriodicBase(_))
        ));

        let p = Partition::new(addr(&[0, 1], &[2])).unwrap();
        assert_eq!(p.kneading().first(), 0);
        assert_eq!(p.warning(), None);

        let p = Partition::new(addr(&[3], &[1])).unwrap();
        assert_eq!(p.warning(), Some(BaseWarning::NonZeroLeadingEntry(3)));
    }

    #[test]
    fn sector_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        assert_eq!(p.sector_of(&addr(&[], &[1])), SectorResult::Interior(1));
        assert_eq!(brute_sector(&p, addr(&[], &[1]).as_sequence()), Some(1));
        assert_eq!(p.sector_of(&addr(&[0], &[1])), SectorResult::Interior(0));
        assert_eq!(p.sector_of(&addr(&[3, 0], &[1])), SectorResult::Boundary(3));
    }

    #[test]
    fn itinerary_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        assert_eq!(p.itinerary(&addr(&[0], &[1])), plain(&[0], &[1]));
        assert_eq!(p.itinerary(&addr(&[], &[1])), plain(&[], &[1]));
        // boundary at the very first step
        assert_eq!(p.itinerary(&addr(&[2, 0], &[1])), Itinerary::star());
        // 2·3·s: first step interior, second on the boundary
        let t = addr(&[2, 3, 0], &[1]);
        assert_eq!(p.itinerary(&t), Itinerary::PreSingular(vec![brute_sector(&p, &t).unwrap()]));

        let p = Partition::new(addr(&[0], &[0, 1])).unwrap();
        assert_eq!(p.itinerary(&addr(&[], &[0, 0, 1])), plain(&[], &[0]));
        assert_eq!(
            brute_itinerary_prefix(&p, &addr(&[], &[0, 0, 1]), 6),
            vec![Some(0); 6]
        );
    }

    #[test]
    fn kneading_examples() {
        for (pre, per) in [(&[0][..], &[1][..]), (&[0], &[0, 1]), (&[0, 1], &[2])] {
            let p = Partition::new(addr(pre, per)).unwrap();
            let nu = p.kneading_of_base();
            assert!(!nu.is_presingular());
            assert_eq!(nu.as_plain().unwrap().first(), 0);
        }
    }

    #[test]
    fn inverse_branch_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        assert_eq!(p.inverse_branch(0, &addr(&[], &[1])).unwrap(), addr(&[0], &[1]));
        assert_eq!(p.inverse_branch(0, &addr(&[0], &[1])).unwrap(), addr(&[1, 0], &[1]));

        let p = Partition::new(addr(&[0], &[0, 1])).unwrap();
        assert_eq!(p.inverse_branch(1, &addr(&[], &[0, 1])).unwrap(), addr(&[1], &[0, 1]));
        assert!(p.in_half_open_sector(1, &addr(&[1], &[0, 1])));
    }

    #[test]
    fn formal_space_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        assert!(p.is_in_s_nu(&plain(&[], &[1])));
        assert!(!p.is_in_s_nu(&plain(&[1, 0], &[1])));
        assert!(p.is_in_s_nu(&Itinerary::PreSingular(vec![5])));
        // ν itself is a formal point: only strict shifts are excluded.
        assert!(p.is_in_s_nu(&p.kneading_itinerary()));
    }
}
