//! Equivalence, classification, expansivity and core entropy of trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::itinerary::Itinerary;
use crate::partition::Partition;
use crate::sequences::ExtAddress;
use crate::treebuild::AbstractHubbardTree;

/// Largest matrix size handled by the exact characteristic-polynomial method.
pub const MAX_EXACT_SIZE: usize = 12;

const POWER_ITERATION_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CanonicalForm {
    itineraries: Vec<Itinerary>,
    edges: BTreeSet<(Itinerary, Itinerary)>,
    dynamics: BTreeMap<Itinerary, Itinerary>,
    sectors: BTreeMap<i64, BTreeSet<Itinerary>>,
    cyclic_order: BTreeMap<Itinerary, Vec<Itinerary>>,
}

fn canonical_form(tree: &AbstractHubbardTree) -> CanonicalForm {
    let it = |v: usize| tree.itinerary(v).clone();
    let mut itineraries: Vec<Itinerary> = (0..tree.len()).map(it).collect();
    itineraries.sort();
    let edges = tree
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (it(a), it(b));
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    let dynamics = (0..tree.len()).map(|v| (it(v), it(tree.dynamics(v)))).collect();
    let sectors = tree
        .sectors()
        .iter()
        .map(|(&k, ids)| (k, ids.iter().map(|&v| it(v)).collect()))
        .collect();
    let cyclic_order = tree
        .cyclic_order()
        .iter()
        .map(|(&v, order)| {
            let mut labels: Vec<Itinerary> = order.iter().map(|&w| it(w)).collect();
            if let Some(start) = (0..labels.len()).min_by(|&a, &b| labels[a].cmp(&labels[b])) {
                labels.rotate_left(start);
            }
            (it(v), labels)
        })
        .collect();
    CanonicalForm {
        itineraries,
        edges,
        dynamics,
        sectors,
        cyclic_order,
    }
}

/// Whether two trees agree as itinerary-labeled trees with dynamics, sector
/// labels and cyclic orders (up to rotation).
pub fn tree_equivalent(a: &AbstractHubbardTree, b: &AbstractHubbardTree) -> bool {
    a.len() == b.len() && canonical_form(a) == canonical_form(b)
}

/// Whether `s2` has the same itinerary under `s1` as `s1` itself, i.e. the
/// two bases describe the same exponential map.
pub fn same_map(s1: &ExtAddress, s2: &ExtAddress) -> Result<bool> {
    let p1 = Partition::new(s1.clone())?;
    Partition::new(s2.clone())?;
    Ok(p1.itinerary(s2) == Itinerary::Plain(p1.kneading().clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansivityReport {
    /// `(u, v, n)` with `u < v`: itineraries first differ in entry `n + 1`.
    pub pairs: Vec<(usize, usize, usize)>,
    pub max_depth: usize,
}

impl ExpansivityReport {
    pub fn depth(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.pairs.iter().find(|p| (p.0, p.1) == key).map(|p| p.2)
    }
}

pub fn expansivity_report(tree: &AbstractHubbardTree) -> Result<ExpansivityReport> {
    let nu = tree.kneading();
    let mut pairs = Vec::new();
    for u in 0..tree.len() {
        for v in (u + 1)..tree.len() {
            let n = tree
                .itinerary(u)
                .separation_depth(tree.itinerary(v), nu)
                .ok_or(Error::NotExpansive(u, v))?;
            pairs.push((u, v, n));
        }
    }
    let max_depth = pairs.iter().map(|p| p.2).max().unwrap_or(0);
    Ok(ExpansivityReport { pairs, max_depth })
}

/// Markov matrix of the tree: rows and columns are indexed by
/// [`AbstractHubbardTree::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub edges: Vec<(usize, usize)>,
    pub entries: Vec<Vec<u32>>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sum(&self, e: usize) -> u32 {
        self.entries[e].iter().sum()
    }
}

pub fn transition_matrix(tree: &AbstractHubbardTree) -> TransitionMatrix {
    let edges = tree.edges().to_vec();
    let n = edges.len();
    let mut entries = vec![vec![0u32; n]; n];
    for (row, &(u, v)) in edges.iter().enumerate() {
        let path = tree.path(tree.dynamics(u), tree.dynamics(v));
        for w in path.windows(2) {
            let col = tree.edge_index(w[0], w[1]).expect("consecutive path vertices share an edge");
            entries[row][col] += 1;
        }
    }
    TransitionMatrix { edges, entries }
}

/// Core entropy `log max(ρ, 1)` of the tree's transition matrix; falls back
/// to exact root isolation if power iteration stalls.
pub fn core_entropy(tree: &AbstractHubbardTree, tol: f64) -> Result<f64> {
    let m = transition_matrix(tree);
    match entropy_power(&m, tol) {
        Ok(h) => Ok(h),
        Err(e) if m.size() <= MAX_EXACT_SIZE => entropy_exact(&m).map_err(|_| e),
        Err(e) => Err(e),
    }
}

/// Power iteration on `I + A` restricted to each strongly connected
/// component, stopped once Collatz–Wielandt bounds pin down `log ρ` to `tol`.
pub fn entropy_power(m: &TransitionMatrix, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::ConvergenceFailure(format!("tolerance {tol} must be positive")));
    }
    let mut rho: f64 = 0.0;
    for component in strongly_connected_components(&m.entries) {
        rho = rho.max(component_radius(&m.entries, &component, tol)?);
    }
    Ok(if rho <= 1.0 { 0.0 } else { rho.ln() })
}

fn component_radius(a: &[Vec<u32>], comp: &[usize], tol: f64) -> Result<f64> {
    let k = comp.len();
    if k == 1 && a[comp[0]][comp[0]] == 0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0f64; k];
    for _ in 0..POWER_ITERATION_CAP {
        let y: Vec<f64> = (0..k)
            .map(|i| x[i] + (0..k).map(|j| a[comp[i]][comp[j]] as f64 * x[j]).sum::<f64>())
            .collect();
        let ratios = y.iter().zip(&x).map(|(yi, xi)| yi / xi);
        let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        let (lo, hi) = (lo - 1.0, hi - 1.0);
        if hi <= 1.0 + tol * 1e-3 && lo >= 1.0 - tol {
            return Ok(1.0);
        }
        if lo > 1.0 && (hi.ln() - lo.ln()) < tol {
            return Ok(0.5 * (lo + hi));
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / scale).collect();
    }
    Err(Error::ConvergenceFailure(format!(
        "power iteration did not settle within {POWER_ITERATION_CAP} steps"
    )))
}

/// Tarjan's algorithm; components in reverse topological order.
fn strongly_connected_components(a: &[Vec<u32>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        a: &'a [Vec<u32>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..s.a.len() {
            if s.a[v][w] == 0 {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = a.len();
    let mut s = State {
        a,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Coefficients `c_0..c_n` of `det(λI − A) = Σ c_i λ^(n−i)`, with `c_0 = 1`.
pub fn characteristic_polynomial(m: &TransitionMatrix) -> Result<Vec<i128>> {
    let n = m.size();
    let a: Vec<Vec<i128>> = m.entries.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let overflow = || Error::ConvergenceFailure("characteristic polynomial overflows".into());
    // Faddeev–LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k)/k
    let mut coeffs = vec![1i128];
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let c_prev = coeffs[k - 1];
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = if i == j { c_prev } else { 0 };
                for (l, row) in mk.iter().enumerate() {
                    acc = a[i][l].checked_mul(row[j]).and_then(|p| acc.checked_add(p)).ok_or_else(overflow)?;
                }
                next[i][j] = acc;
            }
        }
        mk = next;
        let mut trace: i128 = 0;
        for i in 0..n {
            for l in 0..n {
                trace = a[i][l].checked_mul(mk[l][i]).and_then(|p| trace.checked_add(p)).ok_or_else(overflow)?;
            }
        }
        coeffs.push(-trace / k as i128);
    }
    Ok(coeffs)
}

/// Entropy from the largest real root of the characteristic polynomial,
/// isolated with a Sturm sequence over the rationals.
pub fn entropy_exact(m: &TransitionMatrix) -> Result<f64> {
    if m.size() > MAX_EXACT_SIZE {
        return Err(Error::ConvergenceFailure(format!(
            "exact method is limited to {MAX_EXACT_SIZE}x{MAX_EXACT_SIZE} matrices"
        )));
    }
    let coeffs = characteristic_polynomial(m)?;
    let rho = largest_real_root(&coeffs);
    Ok(if rho <= 1.0 { 0.0 } else { rho.ln() })
}

type Poly = Vec<BigRational>;

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(x.into())
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
    }
    p
}

/// Highest-degree-first polynomial division.
fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let mut q = Vec::new();
    while r.len() >= b.len() {
        let factor = &r[0] / &b[0];
        for (i, bi) in b.iter().enumerate() {
            r[i] = &r[i] - &factor * bi;
        }
        r.remove(0);
        q.push(factor);
    }
    if q.is_empty() {
        q.push(BigRational::zero());
    }
    let r = trim(r);
    let r = if r.is_empty() { vec![BigRational::zero()] } else { r };
    (q, r)
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn evaluate(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| evaluate(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn largest_real_root(coeffs: &[i128]) -> f64 {
    let p = trim(coeffs.iter().map(|&c| rat(c)).collect());
    if p.len() <= 1 {
        return 0.0;
    }
    let derivative = |p: &Poly| -> Poly {
        let n = p.len() - 1;
        p[..n].iter().enumerate().map(|(i, c)| c * rat((n - i) as i128)).collect()
    };
    // Sturm chain of the square-free part p / gcd(p, p').
    let mut a = p.clone();
    let mut b = derivative(&p);
    while !is_zero_poly(&b) {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    let p = div_rem(&p, &a).0;
    if p.len() <= 1 {
        return 0.0;
    }
    let mut chain = vec![p.clone(), derivative(&p)];
    loop {
        let (_, r) = div_rem(&chain[chain.len() - 2], &chain[chain.len() - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    // Cauchy bound on root magnitudes.
    let bound = 1 + coeffs[1..].iter().map(|c| c.abs()).max().unwrap_or(0);
    let above = |x: &BigRational| sign_changes(&chain, x);
    let top = above(&rat(bound));
    let (mut lo, mut hi) = (rat(-bound), rat(bound));
    if above(&lo) == top {
        return 0.0;
    }
    let half = BigRational::new(1.into(), 2.into());
    for _ in 0..64 {
        let mid = (&lo + &hi) * &half;
        if above(&mid) > top {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = (lo + hi) * half;
    to_f64(&mid)
}

fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Row sums recomputed from a fresh breadth-first search, for auditing.
pub fn arc_lengths(tree: &AbstractHubbardTree) -> Vec<usize> {
    let n = tree.len();
    tree.edges()
        .iter()
        .map(|&(u, v)| {
            let (from, to) = (tree.dynamics(u), tree.dynamics(v));
            let mut dist = vec![usize::MAX; n];
            dist[from] = 0;
            let mut queue = VecDeque::from([from]);
            while let Some(x) = queue.pop_front() {
                for &y in tree.neighbors(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            dist[to]
        })
        .collect()
}
