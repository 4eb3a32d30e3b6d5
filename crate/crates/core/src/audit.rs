//! Property suites run over a corpus of bases.
//!
//! Per-base suites check every vertex, pair or triple of a built tree; the
//! randomized suites draw a fixed number of instances from a seeded
//! generator, so a report is reproducible from `(corpus, budget, seed)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{
    arc_lengths, entropy_exact, entropy_power, expansivity_report, same_map, transition_matrix,
    tree_equivalent, MAX_EXACT_SIZE,
};
use crate::error::{Error, Result};
use crate::itinerary::Itinerary;
use crate::partition::{in_formal_space, Partition, SectorResult};
use crate::realization::{addresses_of, separating_addresses, slot_of, unlinked, SearchConfig, Slot};
use crate::sequences::{cyclic_between, ExtAddress};
use crate::treebuild::{build_tree_with, singular_orbit, AbstractHubbardTree};
use crate::triods::{middle_point_of, AddressTriod, Step};

/// Instance counts for the randomized suites, summed over the corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditBudget {
    pub separation: usize,
    pub order: usize,
    pub pullback: usize,
    pub splitting: usize,
    pub semiconjugacy: usize,
    pub cross_pairs: usize,
    pub entropy_tol: f64,
}

impl Default for AuditBudget {
    fn default() -> Self {
        AuditBudget {
            separation: 500,
            order: 1000,
            pullback: 1000,
            splitting: 1000,
            semiconjugacy: 500,
            cross_pairs: 100,
            entropy_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        SuiteOutcome {
            name,
            ..SuiteOutcome::default()
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    fn absorb(&mut self, other: SuiteOutcome) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub bases: usize,
    pub suites: Vec<SuiteOutcome>,
    /// Trees whose transition matrix is too large for the exact method.
    pub oversized_matrices: Vec<(ExtAddress, usize)>,
}

impl AuditReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteOutcome> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn violations(&self) -> usize {
        self.suites.iter().map(|s| s.violations.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bases: {}", self.bases)?;
        for s in &self.suites {
            let status = if s.passed() { "ok" } else { "FAIL" };
            writeln!(f, "{:<14} {:>4}  checks={:<7} violations={}", s.name, status, s.checks, s.violations.len())?;
            for v in s.violations.iter().take(5) {
                writeln!(f, "    {v}")?;
            }
        }
        for (s, n) in &self.oversized_matrices {
            writeln!(f, "note: {s} has a {n}x{n} transition matrix; exact entropy skipped")?;
        }
        write!(f, "total violations: {}", self.violations())
    }
}

/// A base with its tree and the landing addresses of every vertex.
pub struct BaseContext {
    pub partition: Partition,
    pub tree: AbstractHubbardTree,
    /// Indexed by vertex id; pre-singular vertices use a finite range of
    /// boundary addresses.
    pub addresses: Vec<Vec<ExtAddress>>,
}

impl BaseContext {
    pub fn new(base: &ExtAddress, config: &SearchConfig) -> Result<BaseContext> {
        let partition = Partition::new(base.clone())?;
        let tree = build_tree_with(&partition, config)?;
        let range = boundary_span(&partition, &tree);
        let addresses = tree
            .vertices()
            .iter()
            .map(|v| {
                let range = v.itinerary.is_presingular().then(|| range.clone());
                addresses_of(&partition, &v.itinerary, config, range).map(|set| set.addresses)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BaseContext {
            partition,
            tree,
            addresses,
        })
    }
}

/// Boundary indices `m` of `m·s` around all sectors used by the tree.
pub fn boundary_span(partition: &Partition, tree: &AbstractHubbardTree) -> RangeInclusive<i64> {
    let lo = tree.sectors().keys().next().copied().unwrap_or(0);
    let hi = tree.sectors().keys().next_back().copied().unwrap_or(0);
    let j0 = partition.offset_j0();
    (j0 + lo - 1)..=(j0 + hi + 2)
}

/// Runs every suite over `bases`.
pub fn run_audit(bases: &[ExtAddress], budget: &AuditBudget, seed: u64, config: &SearchConfig) -> AuditReport {
    let built: Vec<Result<BaseContext>> = bases.par_iter().map(|s| BaseContext::new(s, config)).collect();
    let mut build = SuiteOutcome::new("build");
    let mut contexts = Vec::new();
    for (s, ctx) in bases.iter().zip(built) {
        match ctx {
            Ok(ctx) => {
                build.checks += 1;
                contexts.push(ctx);
            }
            Err(e) => build.check(false, || format!("{s}: {e}")),
        }
    }

    let per_base: Vec<[SuiteOutcome; 6]> = contexts
        .par_iter()
        .map(|ctx| {
            [
                closure_suite(ctx),
                tree_suite(ctx),
                realization_suite(ctx),
                unlinked_suite(ctx),
                classification_suite(ctx, config),
                entropy_suite(ctx, budget.entropy_tol),
            ]
        })
        .collect();
    let names = ["closure", "tree", "realization", "unlinked", "classification", "entropy"];
    let mut merged: Vec<SuiteOutcome> = names.iter().map(|n| SuiteOutcome::new(n)).collect();
    for outcomes in per_base {
        for (slot, outcome) in merged.iter_mut().zip(outcomes) {
            slot.absorb(outcome);
        }
    }
    let oversized = contexts
        .iter()
        .filter(|c| c.tree.edges().len() > MAX_EXACT_SIZE)
        .map(|c| (c.partition.base().clone(), c.tree.edges().len()))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = vec![build];
    suites.extend(merged);
    if !contexts.is_empty() {
        let cross = cross_pair_suite(&contexts, budget.cross_pairs, &mut rng);
        suites[5].absorb(cross);
        suites.push(separation_suite(&contexts, budget.separation, config, &mut rng));
        suites.push(order_suite(&contexts, budget.order, &mut rng));
        suites.push(pullback_suite(&contexts, budget.pullback, &mut rng));
        suites.push(splitting_suite(&contexts, budget.splitting, &mut rng));
        suites.push(semiconjugacy_suite(&contexts, budget.semiconjugacy, &mut rng));
    }
    AuditReport {
        bases: bases.len(),
        suites,
        oversized_matrices: oversized,
    }
}

/// Closure of the vertex set under shift and triods, and membership in the
/// formal space.
pub fn closure_suite(ctx: &BaseContext) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("closure");
    let tree = &ctx.tree;
    let nu = tree.kneading();
    let base = ctx.partition.base();
    let its: Vec<&Itinerary> = (0..tree.len()).map(|v| tree.itinerary(v)).collect();
    let members: BTreeSet<&Itinerary> = its.iter().copied().collect();
    for t in &its {
        out.check(in_formal_space(nu, t), || format!("{base}: {t} is not a formal point"));
        out.check(members.contains(&t.shift(nu)), || format!("{base}: shift of {t} missing"));
    }
    for orbit_point in singular_orbit(nu) {
        out.check(members.contains(&orbit_point), || format!("{base}: orbit point {orbit_point} missing"));
    }
    for_triples(its.len(), |a, b, c| {
        let m = middle_point_of(nu, its[a], its[b], its[c]);
        out.check(m.as_ref().is_some_and(|m| members.contains(m)), || {
            format!("{base}: middle point of [{}, {}, {}] missing", its[a], its[b], its[c])
        });
    });
    out
}

/// Tree axioms, betweenness, transition row sums and expansivity.
pub fn tree_suite(ctx: &BaseContext) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("tree");
    let tree = &ctx.tree;
    let base = ctx.partition.base();
    out.check(tree.verify().is_ok(), || format!("{base}: {}", tree.verify().unwrap_err()));
    let nu = tree.kneading();
    let paths: Vec<Vec<BTreeSet<usize>>> = (0..tree.len())
        .map(|a| (0..tree.len()).map(|b| tree.path(a, b).into_iter().collect()).collect())
        .collect();
    for_triples(tree.len(), |a, b, c| {
        let common: Vec<usize> = paths[a][b]
            .iter()
            .filter(|x| paths[b][c].contains(x) && paths[a][c].contains(x))
            .copied()
            .collect();
        let median = (common.len() == 1).then(|| tree.itinerary(common[0]));
        let middle = middle_point_of(nu, tree.itinerary(a), tree.itinerary(b), tree.itinerary(c));
        out.check(median.is_some() && median == middle.as_ref(), || {
            format!("{base}: median of vertices {a}, {b}, {c} disagrees with the middle point")
        });
    });
    let vt = tree.singular_point();
    for v in (0..tree.len()).filter(|&v| v != vt && tree.degree(v) >= 3 && tree.dynamics(v) == vt) {
        out.check(tree.preserves_cyclic_order_at(v), || {
            format!("{base}: germs at {} land out of sector order", tree.itinerary(v))
        });
    }
    let m = transition_matrix(tree);
    let lengths = arc_lengths(tree);
    for (e, len) in lengths.iter().enumerate() {
        out.check(m.row_sum(e) as usize == *len, || format!("{base}: row {e} of the transition matrix"));
    }
    out.check(expansivity_report(tree).is_ok(), || format!("{base}: vertices share an itinerary"));
    out
}

/// Landing addresses realize their itinerary, share period and preperiod
/// lengths, and periodic ones are fixed by their inverse branches.
pub fn realization_suite(ctx: &BaseContext) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("realization");
    let p = &ctx.partition;
    let base = p.base();
    for (v, set) in ctx.addresses.iter().enumerate() {
        let t = ctx.tree.itinerary(v);
        out.check(!set.is_empty(), || format!("{base}: no address lands at {t}"));
        for a in set {
            out.check(p.itinerary(a) == *t, || format!("{base}: {a} does not realize {t}"));
        }
        if t.is_presingular() {
            continue;
        }
        let shapes: BTreeSet<(usize, usize)> = set.iter().map(|a| (a.preperiod_len(), a.period_len())).collect();
        out.check(shapes.len() <= 1, || format!("{base}: addresses of {t} differ in shape"));
        for a in set.iter().filter(|a| a.is_periodic()) {
            let word: Vec<i64> = (1..=a.period_len()).map(|i| t.as_plain().unwrap().entry(i)).collect();
            out.check(p.pull_back(&word, a).as_ref() == Ok(a), || {
                format!("{base}: {a} is not fixed by its inverse branches")
            });
        }
    }
    out
}

/// Address sets of distinct vertices never interleave.
pub fn unlinked_suite(ctx: &BaseContext) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("unlinked");
    let base = ctx.partition.base();
    let n = ctx.addresses.len();
    for a in 0..n {
        for b in (a + 1)..n {
            out.check(unlinked(&ctx.addresses[a], &ctx.addresses[b]), || {
                format!("{base}: addresses of {} and {} interleave", ctx.tree.itinerary(a), ctx.tree.itinerary(b))
            });
        }
    }
    out
}

/// Every other address landing at the singular value gives the same map,
/// the same kneading data and an equivalent tree.
pub fn classification_suite(ctx: &BaseContext, config: &SearchConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("classification");
    let p = &ctx.partition;
    let s = p.base();
    let nu = p.kneading();
    let twins = match addresses_of(p, &p.kneading_itinerary(), config, None) {
        Ok(set) => set.addresses,
        Err(e) => {
            out.check(false, || format!("{s}: {e}"));
            return out;
        }
    };
    out.check(twins.contains(s), || format!("{s}: base missing from its own realization"));
    out.check(same_map(s, s) == Ok(true), || format!("{s}: same_map is not reflexive"));
    for twin in twins.iter().filter(|t| *t != s) {
        out.check(same_map(s, twin) == Ok(true), || format!("{s}: same_map fails for {twin}"));
        let Ok(q) = Partition::new(twin.clone()) else {
            out.check(false, || format!("{s}: twin {twin} is periodic"));
            continue;
        };
        out.check(q.kneading() == nu, || format!("{s}: twin {twin} has kneading {}", q.kneading()));
        let mut x = twin.clone();
        for _ in 0..(twin.preperiod_len() + twin.period_len()) {
            out.check(p.itinerary(&x) == q.itinerary(&x), || {
                format!("{s}: partitions of {s} and {twin} disagree at {x}")
            });
            x = x.shift();
        }
        match build_tree_with(&q, config) {
            Ok(other) => out.check(tree_equivalent(&ctx.tree, &other), || {
                format!("{s}: tree of {twin} is not equivalent")
            }),
            Err(e) => out.check(false, || format!("{s}: tree of {twin} failed: {e}")),
        }
    }
    out
}

/// Power iteration agrees with the exact characteristic-polynomial root.
pub fn entropy_suite(ctx: &BaseContext, tol: f64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("entropy");
    let m = transition_matrix(&ctx.tree);
    let s = ctx.partition.base();
    let power = entropy_power(&m, tol);
    out.check(power.as_ref().is_ok_and(|h| h.is_finite() && *h >= 0.0), || {
        format!("{s}: power iteration gave {power:?}")
    });
    if m.size() <= MAX_EXACT_SIZE {
        let exact = entropy_exact(&m);
        let agree = matches!((&power, &exact), (Ok(a), Ok(b)) if (a - b).abs() <= tol);
        out.check(agree, || format!("{s}: power {power:?} vs exact {exact:?}"));
    }
    out
}

/// Bases that describe different maps have inequivalent trees.
pub fn cross_pair_suite(contexts: &[BaseContext], pairs: usize, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("classification");
    if contexts.len() < 2 {
        return out;
    }
    let mut done = 0;
    for _ in 0..pairs * 50 {
        if done == pairs {
            break;
        }
        let i = rng.gen_range(0..contexts.len());
        let j = rng.gen_range(0..contexts.len());
        let (a, b) = (&contexts[i], &contexts[j]);
        let (s1, s2) = (a.partition.base(), b.partition.base());
        if i == j || same_map(s1, s2) != Ok(false) {
            continue;
        }
        done += 1;
        out.check(!tree_equivalent(&a.tree, &b.tree), || {
            format!("{s1} and {s2} give different maps but equivalent trees")
        });
    }
    out
}

fn for_triples(n: usize, mut f: impl FnMut(usize, usize, usize)) {
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                f(a, b, c);
            }
        }
    }
}

/// Random addresses near the sectors `I_{-1} … I_2`, occasionally hitting
/// the boundary or the base itself.
fn random_address(p: &Partition, rng: &mut ChaCha8Rng) -> ExtAddress {
    let j0 = p.offset_j0();
    let roll = rng.gen_range(0..10);
    if roll == 0 {
        return p.base().clone();
    }
    if roll == 1 {
        let m = rng.gen_range(j0 - 1..=j0 + 3);
        if let Ok(x) = p.boundary_address(m) {
            return x;
        }
    }
    let (pre_len, per_len) = (rng.gen_range(0..=2), rng.gen_range(1..=3));
    let pre: Vec<i64> = (0..pre_len).map(|_| rng.gen_range(j0 - 2..=j0 + 3)).collect();
    let per: Vec<i64> = (0..per_len).map(|_| rng.gen_range(j0 - 2..=j0 + 3)).collect();
    ExtAddress::new(pre, per).expect("small entries")
}

fn random_in_sector(p: &Partition, k: i64, rng: &mut ChaCha8Rng) -> Option<ExtAddress> {
    let j0 = p.offset_j0();
    for _ in 0..64 {
        let tail = random_address(p, rng);
        let first = j0 + k + rng.gen_range(0..=1);
        if let Ok(x) = tail.prepend(first) {
            if p.sector_of(&x) == SectorResult::Interior(k) {
                return Some(x);
            }
        }
    }
    None
}

fn random_context<'a>(contexts: &'a [BaseContext], rng: &mut ChaCha8Rng) -> &'a BaseContext {
    contexts.choose(rng).expect("nonempty corpus")
}

fn between(a: &ExtAddress, x: &ExtAddress, b: &ExtAddress) -> bool {
    cyclic_between(a, x, b) == Ok(true)
}

/// Triods of vertex addresses: separating address counts in both directions.
pub fn separation_suite(
    contexts: &[BaseContext],
    instances: usize,
    config: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("separation");
    let eligible: Vec<&BaseContext> = contexts.iter().filter(|c| c.tree.len() >= 3).collect();
    if eligible.is_empty() {
        return out;
    }
    for _ in 0..instances {
        let ctx = eligible[rng.gen_range(0..eligible.len())];
        let p = &ctx.partition;
        let ids: Vec<usize> = (0..ctx.tree.len()).collect::<Vec<_>>().choose_multiple(rng, 3).copied().collect();
        let picks: Option<Vec<ExtAddress>> = ids.iter().map(|&v| ctx.addresses[v].choose(rng).cloned()).collect();
        let Some(members) = picks.and_then(|v| <[ExtAddress; 3]>::try_from(v).ok()) else {
            out.check(false, || format!("{}: a vertex has no address", p.base()));
            continue;
        };
        let triod = match AddressTriod::from_unordered(members, p) {
            Ok(t) => t,
            Err(e) => {
                out.check(false, || format!("{}: vertex addresses give no triod: {e}", p.base()));
                continue;
            }
        };
        let members = triod.members().clone();
        let describe = || format!("{}: triod [{}, {}, {}]", p.base(), members[0], members[1], members[2]);
        let separation = match separating_addresses(p, &triod, config) {
            Ok(sep) => sep,
            Err(e) => {
                out.check(false, || format!("{}: {e}", describe()));
                continue;
            }
        };
        let middle_vertex = ctx.tree.vertex_of(&separation.middle);
        out.check(middle_vertex.is_some(), || format!("{}: middle point is not a vertex", describe()));

        // Converse: only the middle point separates in this pattern.
        let its = triod.itineraries();
        for (w, set) in ctx.addresses.iter().enumerate() {
            let t = ctx.tree.itinerary(w);
            let gaps: BTreeSet<usize> = set
                .iter()
                .filter_map(|x| match slot_of(&members, x) {
                    Slot::Gap(i) => Some(i),
                    Slot::Member(_) => None,
                })
                .collect();
            let branched_pattern = gaps.len() == 3;
            let linear_pattern = (1..=3).any(|j| its[j - 1] == *t && gaps.contains(&(j % 3 + 1)));
            let expected_branched = *t == separation.middle && separation.shape.middle_member().is_none();
            let expected_linear = *t == separation.middle && separation.shape.middle_member().is_some();
            // A member's own vertex may have accesses in every gap, so the
            // branched pattern only constrains non-members. Finite samples of
            // a pre-singular access set can witness a pattern but not refute it.
            let member = its.contains(t);
            let exact = !t.is_presingular();
            if !member {
                let ok = if exact { branched_pattern == expected_branched } else { !branched_pattern || expected_branched };
                out.check(ok, || format!("{}: branched pattern of {t} is {branched_pattern}", describe()));
            }
            let ok = if exact { linear_pattern == expected_linear } else { !linear_pattern || expected_linear };
            out.check(ok, || format!("{}: linear pattern of {t} is {linear_pattern}", describe()));
        }
    }
    out
}

/// The shift preserves cyclic order on each `I_k⁻`, and inverse branches
/// are order-preserving right inverses landing in `I_k⁻`.
pub fn order_suite(contexts: &[BaseContext], instances: usize, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("order");
    for _ in 0..instances {
        let p = &random_context(contexts, rng).partition;
        let k = rng.gen_range(-1..=2);
        let mut xs: Vec<ExtAddress> = (0..3).filter_map(|_| random_in_sector(p, k, rng)).collect();
        if rng.gen_bool(0.2) {
            if let Ok(edge) = p.boundary_address(p.offset_j0() + k + 1) {
                xs[0] = edge;
            }
        }
        xs.sort();
        xs.dedup();
        if xs.len() == 3 {
            let images = [xs[0].shift(), xs[1].shift(), xs[2].shift()];
            out.check(between(&images[0], &images[1], &images[2]), || {
                format!("{}: shift reverses [{}, {}, {}] in I_{k}", p.base(), xs[0], xs[1], xs[2])
            });
        }

        let mut us: Vec<ExtAddress> = (0..3).map(|_| random_address(p, rng)).collect();
        us.sort();
        us.dedup();
        let pulled: Vec<ExtAddress> = us.iter().filter_map(|u| p.inverse_branch(k, u).ok()).collect();
        for (u, x) in us.iter().zip(&pulled) {
            out.check(x.shift() == *u && p.in_half_open_sector(k, x), || {
                format!("{}: inverse branch {k} of {u} gave {x}", p.base())
            });
        }
        if pulled.len() == 3 {
            out.check(between(&pulled[0], &pulled[1], &pulled[2]), || {
                format!("{}: inverse branch {k} reverses [{}, {}, {}]", p.base(), us[0], us[1], us[2])
            });
        }
    }
    out
}

fn random_address_triod<'a>(p: &'a Partition, rng: &mut ChaCha8Rng) -> Option<AddressTriod<'a>> {
    for _ in 0..64 {
        let members = [random_address(p, rng), random_address(p, rng), random_address(p, rng)];
        if let Ok(t) = AddressTriod::from_unordered(members, p) {
            return Some(t);
        }
    }
    None
}

/// `σ⁻¹(J′ₙ) ∩ I_k ⊆ Jₙ` for the intervals of a triod and of its image.
pub fn pullback_suite(contexts: &[BaseContext], instances: usize, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("pullback");
    let mut done = 0;
    for _ in 0..instances * 20 {
        if done == instances {
            break;
        }
        let p = &random_context(contexts, rng).partition;
        let Some(triod) = random_address_triod(p, rng) else { continue };
        let Step::Next(image) = triod.step() else { continue };
        let k = triod.majority_vote().expect("non-stop triod has a majority vote");
        done += 1;
        let t = triod.members();
        let u = image.members();
        for _ in 0..8 {
            let v = if rng.gen_bool(0.5) {
                p.inverse_branch(k, &random_address(p, rng)).ok()
            } else {
                random_in_sector(p, k, rng)
            };
            let Some(v) = v.filter(|v| p.sector_of(v) == SectorResult::Interior(k)) else { continue };
            let sv = v.shift();
            for n in 0..3 {
                if between(&u[n], &sv, &u[(n + 1) % 3]) {
                    out.check(between(&t[n], &v, &t[(n + 1) % 3]), || {
                        format!(
                            "{}: {v} pulls back out of J{} of [{}, {}, {}]",
                            p.base(),
                            n + 1,
                            t[0],
                            t[1],
                            t[2]
                        )
                    });
                }
            }
        }
    }
    out
}

/// For an interval `J ⊂ I` avoiding `s`, each `σ⁻¹(J) ∩ I′` is `{k·t : t ∈ J}`.
pub fn splitting_suite(contexts: &[BaseContext], instances: usize, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("splitting");
    let mut done = 0;
    for _ in 0..instances * 20 {
        if done == instances {
            break;
        }
        let p = &random_context(contexts, rng).partition;
        let s = p.base();
        let k = rng.gen_range(-1..=1);
        let (Some(a), Some(b)) = (random_in_sector(p, k, rng), random_in_sector(p, k, rng)) else { continue };
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if a == b || (a < *s && *s < b) {
            continue;
        }
        let samples: Vec<ExtAddress> = (0..40)
            .filter_map(|_| random_in_sector(p, k, rng))
            .filter(|t| a < *t && *t < b)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if samples.len() < 2 {
            continue;
        }
        done += 1;
        let target = rng.gen_range(-1..=2);
        let j0 = p.offset_j0();
        let mut firsts = BTreeSet::new();
        let mut pulled = Vec::new();
        for t in &samples {
            let pre: Vec<ExtAddress> = [j0 + target, j0 + target + 1]
                .iter()
                .filter_map(|&m| t.prepend(m).ok())
                .filter(|x| p.sector_of(x) == SectorResult::Interior(target))
                .collect();
            out.check(pre.len() == 1, || format!("{s}: {t} has {} preimages in I_{target}", pre.len()));
            if let Some(x) = pre.into_iter().next() {
                firsts.insert(x.first());
                pulled.push(x);
            }
        }
        out.check(firsts.len() <= 1, || format!("{s}: pullback of ({a}, {b}) into I_{target} splits"));
        out.check(pulled.windows(2).all(|w| w[0] < w[1]), || {
            format!("{s}: pullback of ({a}, {b}) into I_{target} is not monotone")
        });
    }
    out
}

/// The itinerary map intertwines the two triod maps, including the step at
/// which they stop, and images of address triods stay valid.
pub fn semiconjugacy_suite(contexts: &[BaseContext], instances: usize, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("semiconjugacy");
    let mut done = 0;
    for _ in 0..instances * 20 {
        if done == instances {
            break;
        }
        let p = &random_context(contexts, rng).partition;
        let Some(start) = random_address_triod(p, rng) else { continue };
        done += 1;
        let describe = || {
            let m = start.members();
            format!("{}: triod [{}, {}, {}]", p.base(), m[0], m[1], m[2])
        };
        let mut current = start.clone();
        let mut seen = BTreeSet::new();
        while seen.insert(current.members().clone()) {
            let Ok(itinerary_triod) = current.itinerary_triod() else {
                out.check(false, || format!("{}: image lost validity", describe()));
                break;
            };
            match (current.step(), itinerary_triod.step()) {
                (Step::Stop, Step::Stop) => {
                    out.check(true, String::new);
                    break;
                }
                (Step::Next(a), Step::Next(i)) => {
                    let valid = AddressTriod::new(a.members().clone(), p).is_ok();
                    out.check(valid && a.itineraries() == *i.members(), || {
                        format!("{}: step images disagree", describe())
                    });
                    current = a;
                }
                _ => {
                    out.check(false, || format!("{}: only one map stops", describe()));
                    break;
                }
            }
        }
    }
    out
}

/// Per-instance failures are collected rather than raised; this only fails
/// for an empty corpus.
pub fn audit_corpus(bases: &[ExtAddress], budget: &AuditBudget, seed: u64) -> Result<AuditReport> {
    if bases.is_empty() {
        return Err(Error::InvariantViolation("empty corpus".into()));
    }
    Ok(run_audit(bases, budget, seed, &SearchConfig::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, CorpusConfig};

    #[test]
    fn small_audit_is_clean() {
        let bases = generate(&CorpusConfig {
            count: 8,
            seed: 3,
            ..CorpusConfig::default()
        });
        let budget = AuditBudget {
            separation: 40,
            order: 40,
            pullback: 40,
            splitting: 40,
            semiconjugacy: 40,
            cross_pairs: 10,
            entropy_tol: 1e-9,
        };
        let report = run_audit(&bases, &budget, 5, &SearchConfig::default());
        assert!(report.passed(), "{report}");
        for name in ["separation", "order", "pullback", "splitting", "semiconjugacy"] {
            assert!(report.suite(name).unwrap().checks >= 40, "{name}");
        }
        assert_eq!(report, run_audit(&bases, &budget, 5, &SearchConfig::default()));
    }
}
