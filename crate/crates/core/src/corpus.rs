//! Seeded random corpora of strictly preperiodic base addresses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sequences::ExtAddress;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub count: usize,
    pub seed: u64,
    pub max_preperiod: usize,
    pub max_period: usize,
    /// Entries are drawn from `[-entry_range, entry_range]`; must be at least 1.
    pub entry_range: i64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            count: 100,
            seed: 0,
            max_preperiod: 3,
            max_period: 4,
            entry_range: 3,
        }
    }
}

/// Draws `count` bases with leading entry `0`, rejecting any whose canonical
/// form is purely periodic. Duplicates are kept.
pub fn generate(config: &CorpusConfig) -> Vec<ExtAddress> {
    assert!(config.max_preperiod >= 1 && config.max_period >= 1 && config.entry_range >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let r = config.entry_range;
    let mut out = Vec::with_capacity(config.count);
    while out.len() < config.count {
        let pre_len = rng.gen_range(1..=config.max_preperiod);
        let per_len = rng.gen_range(1..=config.max_period);
        let mut pre: Vec<i64> = (0..pre_len).map(|_| rng.gen_range(-r..=r)).collect();
        pre[0] = 0;
        let per: Vec<i64> = (0..per_len).map(|_| rng.gen_range(-r..=r)).collect();
        let Ok(s) = ExtAddress::new(pre, per) else { continue };
        if !s.is_periodic() {
            out.push(s);
        }
    }
    out
}
