//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use exptree_core::analysis::{entropy_exact, entropy_power, transition_matrix};
use exptree_core::audit::{run_audit, AuditBudget, AuditReport};
use exptree_core::corpus::{generate, CorpusConfig};
use exptree_core::{
    addresses_of, build_tree, core_entropy, EventuallyPeriodic, ExtAddress, Itinerary, Partition, SearchConfig,
};
use rayon::prelude::*;

const ORACLE_LOG2_CAP: usize = 16;

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    detail: String,
    elapsed: Duration,
}

fn addr(text: &str) -> ExtAddress {
    text.parse().unwrap()
}

fn itin(text: &str) -> Itinerary {
    text.parse().unwrap()
}

fn expect(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

/// Lexicographic comparison of `x` with the boundary sequence `m·s`,
/// entry by entry up to `depth`; `None` if they agree that far.
fn cmp_boundary(x: &impl Fn(usize) -> i64, m: i64, s: &ExtAddress, depth: usize) -> Option<std::cmp::Ordering> {
    (0..depth)
        .map(|i| if i == 0 { x(0).cmp(&m) } else { x(i).cmp(&s.entry(i)) })
        .find(|o| o.is_ne())
}

/// Sector label `k` with `(j0+k)·s < x < (j0+k+1)·s`, or `None` on a
/// boundary.
fn brute_sector(x: &impl Fn(usize) -> i64, s: &ExtAddress, j0: i64, depth: usize) -> Option<i64> {
    use std::cmp::Ordering::{Greater, Less};
    [x(0) - j0 - 1, x(0) - j0].into_iter().find(|&k| {
        cmp_boundary(x, j0 + k, s, depth) == Some(Greater) && cmp_boundary(x, j0 + k + 1, s, depth) == Some(Less)
    })
}

struct Oracle {
    s: ExtAddress,
    j0: i64,
    depth: usize,
}

impl Oracle {
    fn new(s: &ExtAddress) -> Oracle {
        let depth = 4 * (s.preperiod_len() + s.period_len()) + 64;
        let shifted_below = (1..=depth).map(|i| s.entry(i + 1)).lt((1..=depth).map(|i| s.entry(i)));
        let j0 = if shifted_below { s.entry(1) - 1 } else { s.entry(1) };
        Oracle { s: s.clone(), j0, depth }
    }

    /// All periodic addresses `(j0 + p_i + ε_i)` of period `m·n ≤ 16`
    /// whose brute-force sectors spell `word`.
    fn periodic(&self, word: &[i64]) -> Option<BTreeSet<ExtAddress>> {
        let n = word.len();
        if n > ORACLE_LOG2_CAP {
            return None;
        }
        let mut found = BTreeSet::new();
        for len in (n..=ORACLE_LOG2_CAP).step_by(n) {
            for eps in 0u64..(1u64 << len) {
                let entries: Vec<i64> = (0..len).map(|i| self.j0 + word[i % n] + ((eps >> i) & 1) as i64).collect();
                let spells = (0..len).all(|i| {
                    let x = |d: usize| entries[(i + d) % len];
                    brute_sector(&x, &self.s, self.j0, self.depth) == Some(word[i % n])
                });
                if spells {
                    found.insert(ExtAddress::periodic(entries).unwrap());
                }
            }
        }
        Some(found)
    }

    /// Extends the periodic realizations backwards along the preperiod.
    fn general(&self, t: &EventuallyPeriodic) -> Option<BTreeSet<ExtAddress>> {
        let tails = self.periodic(t.period())?;
        let pre = t.preperiod();
        let mut found = BTreeSet::new();
        for tail in &tails {
            for eps in 0u64..(1u64 << pre.len()) {
                let head: Vec<i64> = (0..pre.len()).map(|i| self.j0 + pre[i] + ((eps >> i) & 1) as i64).collect();
                let spells = (0..pre.len()).all(|i| {
                    let x = |d: usize| if i + d < head.len() { head[i + d] } else { tail.entry(i + d - head.len() + 1) };
                    brute_sector(&x, &self.s, self.j0, self.depth) == Some(pre[i])
                });
                if spells {
                    found.insert(ExtAddress::new(head, tail.period().to_vec()).unwrap());
                }
            }
        }
        Some(found)
    }

    fn kneading_prefix(&self, len: usize) -> Vec<Option<i64>> {
        (0..len)
            .map(|i| {
                let x = |d: usize| self.s.entry(i + d + 1);
                brute_sector(&x, &self.s, self.j0, self.depth)
            })
            .collect()
    }
}

fn criterion_1() -> Outcome {
    let mut f = Vec::new();
    let start = Instant::now();
    let p = Partition::new(addr("0(1)")).unwrap();
    let tree = build_tree(&p).unwrap();
    let h = core_entropy(&tree, 1e-9).unwrap();
    let elapsed = start.elapsed();

    expect(&mut f, p.kneading().to_string() == "0(1)", format!("kneading {}", p.kneading()));
    let oracle = Oracle::new(p.base());
    let nu = p.kneading();
    let brute: Vec<Option<i64>> = oracle.kneading_prefix(12);
    expect(&mut f, brute == nu.prefix(12).into_iter().map(Some).collect::<Vec<_>>(), "brute-force kneading");

    let vt = tree.singular_point();
    let v_nu = tree.vertex_of(&itin("0(1)"));
    let v_one = tree.vertex_of(&itin("(1)"));
    match (v_nu, v_one) {
        (Some(a), Some(b)) => {
            expect(&mut f, tree.len() == 3, format!("{} vertices", tree.len()));
            let mut edges = vec![(a.min(vt), a.max(vt)), (b.min(vt), b.max(vt))];
            edges.sort_unstable();
            expect(&mut f, tree.edges() == edges.as_slice(), "path ν–v_T–(1)");
            expect(&mut f, tree.dynamics(vt) == a && tree.dynamics(a) == b && tree.dynamics(b) == b, "dynamics");
            expect(&mut f, tree.sectors().keys().copied().collect::<Vec<_>>() == vec![0, 1], "sector labels");
            expect(&mut f, tree.sectors()[&0] == vec![a] && tree.sectors()[&1] == vec![b], "sector contents");
        }
        _ => f.push("missing vertices".into()),
    }
    let one = EventuallyPeriodic::periodic(vec![1]).unwrap();
    let lib: BTreeSet<_> = addresses_of(&p, &Itinerary::Plain(one.clone()), &SearchConfig::default(), None)
        .unwrap()
        .addresses
        .into_iter()
        .collect();
    expect(&mut f, oracle.periodic(&[1]) == Some(lib), "oracle realization of (1)");
    expect(&mut f, (h - 2f64.ln()).abs() < 1e-6, format!("entropy {h}"));
    expect(&mut f, elapsed < Duration::from_millis(100), format!("runtime {elapsed:?}"));
    Outcome {
        id: 1,
        title: "golden example A, base 0(1)",
        failures: f,
        detail: format!("entropy={h:.9}"),
        elapsed,
    }
}

fn criterion_2() -> Outcome {
    let mut f = Vec::new();
    let start = Instant::now();
    let p = Partition::new(addr("0(0,1)")).unwrap();
    let tree = build_tree(&p).unwrap();
    let zero = itin("(0)");
    let realized = addresses_of(&p, &zero, &SearchConfig::default(), None).unwrap();
    let m = transition_matrix(&tree);
    let power = entropy_power(&m, 1e-9).unwrap();
    let exact = entropy_exact(&m).unwrap();
    let elapsed = start.elapsed();

    expect(&mut f, p.kneading().to_string() == "0(0,1)", format!("kneading {}", p.kneading()));
    let oracle = Oracle::new(p.base());
    let brute = oracle.kneading_prefix(12);
    expect(&mut f, brute == p.kneading().prefix(12).into_iter().map(Some).collect::<Vec<_>>(), "brute-force kneading");
    expect(&mut f, tree.len() == 5, format!("{} vertices", tree.len()));

    let expected: BTreeSet<ExtAddress> = ["(0,0,1)", "(0,1,0)", "(1,0,0)"].into_iter().map(addr).collect();
    let lib: BTreeSet<ExtAddress> = realized.addresses.into_iter().collect();
    expect(&mut f, lib == expected, "addresses of (0)");
    expect(&mut f, oracle.periodic(&[0]) == Some(expected), "oracle addresses of (0)");

    match tree.vertex_of(&zero) {
        Some(w) => {
            expect(&mut f, tree.dynamics(w) == w && tree.degree(w) == 3, "fixed degree-3 branch point");
            let wanted = [itin("0(0,1)"), itin("(0,1)"), Itinerary::star()].map(|t| tree.vertex_of(&t));
            let order = &tree.cyclic_order()[&w];
            let rotations_match = (0..3).any(|r| (0..3).all(|i| Some(order[(r + i) % 3]) == wanted[i]));
            expect(&mut f, rotations_match, "cyclic order (ν, σν, v_T)");
        }
        None => f.push("no vertex (0)".into()),
    }
    expect(&mut f, (power - exact).abs() < 1e-3, format!("power {power} vs exact {exact}"));
    expect(&mut f, (exact - 0.419_617_625).abs() < 1e-6, format!("exact {exact}"));
    expect(&mut f, elapsed < Duration::from_millis(500), format!("runtime {elapsed:?}"));
    Outcome {
        id: 2,
        title: "golden example B, base 0(0,1)",
        failures: f,
        detail: format!("entropy={power:.9}"),
        elapsed,
    }
}

fn corpus() -> Vec<ExtAddress> {
    generate(&CorpusConfig::default())
}

fn criterion_3(bases: &[ExtAddress]) -> Outcome {
    let start = Instant::now();
    let config = SearchConfig::default();
    let per_base: Vec<(usize, Vec<String>)> = bases
        .par_iter()
        .map(|s| {
            let mut f = Vec::new();
            let p = Partition::new(s.clone()).unwrap();
            let tree = match build_tree(&p) {
                Ok(t) => t,
                Err(e) => return (0, vec![format!("{s}: {e}")]),
            };
            let oracle = Oracle::new(s);
            let mut compared = 0;
            for v in tree.vertices() {
                let Itinerary::Plain(t) = &v.itinerary else { continue };
                let Some(expected) = oracle.general(t) else { continue };
                compared += 1;
                match addresses_of(&p, &v.itinerary, &config, None) {
                    Ok(set) => {
                        let lib: BTreeSet<ExtAddress> = set.addresses.into_iter().collect();
                        let in_range = lib.iter().all(|a| a.period_len() <= ORACLE_LOG2_CAP);
                        let ok = if in_range { lib == expected } else { expected.is_empty() };
                        expect(&mut f, ok, format!("{s}: {t} library {lib:?} oracle {expected:?}"));
                    }
                    Err(e) => expect(&mut f, expected.is_empty(), format!("{s}: {t}: {e}")),
                }
            }
            (compared, f)
        })
        .collect();
    let elapsed = start.elapsed();
    let compared: usize = per_base.iter().map(|x| x.0).sum();
    let mut failures: Vec<String> = per_base.into_iter().flat_map(|x| x.1).collect();
    expect(&mut failures, compared > 0, "nothing compared");
    expect(&mut failures, elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"));
    Outcome {
        id: 3,
        title: "oracle equivalence of realizations",
        failures,
        detail: format!("{compared} itineraries over {} bases", bases.len()),
        elapsed,
    }
}

fn suite_outcome(id: u32, title: &'static str, report: &AuditReport, names: &[&str], elapsed: Duration) -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    for name in names {
        match report.suite(name) {
            Some(s) => {
                checks += s.checks;
                failures.extend(s.violations.iter().map(|v| format!("{name}: {v}")));
                expect(&mut failures, s.checks > 0, format!("{name}: no checks ran"));
            }
            None => failures.push(format!("suite {name} missing")),
        }
    }
    Outcome {
        id,
        title,
        failures,
        detail: format!("{checks} checks"),
        elapsed,
    }
}

fn main() -> ExitCode {
    let mut outcomes = vec![criterion_1(), criterion_2()];
    let bases = corpus();
    outcomes.push(criterion_3(&bases));

    let start = Instant::now();
    let budget = AuditBudget::default();
    let report = run_audit(&bases, &budget, 0, &SearchConfig::default());
    let elapsed = start.elapsed();
    let suites = [
        "build",
        "closure",
        "tree",
        "realization",
        "unlinked",
        "separation",
        "order",
        "pullback",
        "splitting",
        "semiconjugacy",
    ];
    outcomes.push(suite_outcome(4, "property suites on the corpus", &report, &suites, elapsed));
    outcomes.push(suite_outcome(5, "classification cross-check", &report, &["classification"], elapsed));
    let mut entropy = suite_outcome(6, "entropy method agreement", &report, &["entropy"], elapsed);
    if !report.oversized_matrices.is_empty() {
        entropy.detail += &format!(", {} matrices above 12x12 not compared", report.oversized_matrices.len());
    }
    outcomes.push(entropy);

    let mut failed = false;
    for o in &outcomes {
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {status} {:<38} {:>9.3}s  {}",
            o.id,
            o.title,
            o.elapsed.as_secs_f64(),
            o.detail
        );
        for msg in o.failures.iter().take(10) {
            println!("    {msg}");
        }
        failed |= !o.failures.is_empty();
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
