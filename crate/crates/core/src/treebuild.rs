//! Construction of the abstract Hubbard tree from a validated base address.
//!
//! Vertices are the post-singular itineraries together with the middle points
//! of all their triods. A vertex `w` lies on the arc `[u, v]` iff the middle
//! point of `(u, w, v)` is `w` itself, and two vertices span an edge iff no
//! third vertex lies between them. Cyclic orders at plain branch points come
//! from the gaps between the external addresses landing there.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::itinerary::{Itinerary, Symbol};
use crate::partition::{in_formal_space, Partition};
use crate::realization::{addresses_of, SearchConfig};
use crate::sequences::{EventuallyPeriodic, ExtAddress};
use crate::triods::middle_point_of;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    /// The vertex `*ν`.
    SingularPoint,
    /// On the forward orbit of the singular value.
    PostSingular,
    /// A branch point off the singular orbit.
    BranchExtra,
    /// A post-singular branch point.
    Both,
}

impl VertexKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexKind::SingularPoint => "singular",
            VertexKind::PostSingular => "postsingular",
            VertexKind::BranchExtra => "branch",
            VertexKind::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<VertexKind> {
        Some(match s {
            "singular" => VertexKind::SingularPoint,
            "postsingular" => VertexKind::PostSingular,
            "branch" => VertexKind::BranchExtra,
            "both" => VertexKind::Both,
            _ => return None,
        })
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub itinerary: Itinerary,
    pub kind: VertexKind,
}

/// The formal vertex set: post-singular itineraries and their middle points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<Vertex>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn itineraries(&self) -> impl Iterator<Item = &Itinerary> {
        self.vertices.iter().map(|v| &v.itinerary)
    }

    pub fn contains(&self, t: &Itinerary) -> bool {
        self.vertices.iter().any(|v| v.itinerary == *t)
    }
}

/// `{*ν, ν, σν, σ²ν, …}`.
pub fn singular_orbit(nu: &EventuallyPeriodic) -> Vec<Itinerary> {
    let mut orbit = vec![Itinerary::star(), Itinerary::Plain(nu.clone())];
    orbit.extend(nu.strict_forward_orbit().into_iter().map(Itinerary::Plain));
    orbit
}

/// Builds and verifies the formal vertex set.
pub fn vertex_set(partition: &Partition) -> Result<VertexSet> {
    let nu = partition.kneading();
    let orbit = singular_orbit(nu);
    let mut all: BTreeSet<Itinerary> = orbit.iter().cloned().collect();
    for i in 0..orbit.len() {
        for j in (i + 1)..orbit.len() {
            for k in (j + 1)..orbit.len() {
                let b = middle_point_of(nu, &orbit[i], &orbit[j], &orbit[k])
                    .ok_or_else(|| Error::ClosureViolation("post-singular triod is invalid".into()))?;
                all.insert(b);
            }
        }
    }

    let vertices: Vec<Vertex> = all
        .into_iter()
        .enumerate()
        .map(|(id, itinerary)| {
            let kind = if itinerary.is_star() {
                VertexKind::SingularPoint
            } else if orbit.contains(&itinerary) {
                VertexKind::PostSingular
            } else {
                VertexKind::BranchExtra
            };
            Vertex { id, itinerary, kind }
        })
        .collect();
    let set = VertexSet { vertices };
    check_closure(&set, nu)?;
    Ok(set)
}

fn check_closure(set: &VertexSet, nu: &EventuallyPeriodic) -> Result<()> {
    let its: Vec<&Itinerary> = set.itineraries().collect();
    let members: BTreeSet<&Itinerary> = its.iter().copied().collect();
    for t in &its {
        if !in_formal_space(nu, t) {
            return Err(Error::ClosureViolation(format!("{t} is not a formal point")));
        }
        let image = t.shift(nu);
        if !members.contains(&image) {
            return Err(Error::ClosureViolation(format!("shift of {t} is missing")));
        }
    }
    for i in 0..its.len() {
        for j in (i + 1)..its.len() {
            for k in (j + 1)..its.len() {
                let b = middle_point_of(nu, its[i], its[j], its[k])
                    .ok_or_else(|| Error::ClosureViolation("vertex triod is invalid".into()))?;
                if !members.contains(&b) {
                    return Err(Error::ClosureViolation(format!(
                        "middle point {b} of [{}, {}, {}] is missing",
                        its[i], its[j], its[k]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A finite tree with self-map, singular point, sector labels at the
/// singular point and cyclic orders at every other vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractHubbardTree {
    base: ExtAddress,
    kneading: EventuallyPeriodic,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    dynamics: Vec<usize>,
    singular_point: usize,
    sectors: BTreeMap<i64, Vec<usize>>,
    cyclic_order: BTreeMap<usize, Vec<usize>>,
    /// Plain branch points with more landing addresses than branches, as
    /// `(vertex, number of addresses)`.
    surplus_accesses: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Raw parts of a tree, e.g. as read back from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeParts {
    pub base: ExtAddress,
    pub kneading: EventuallyPeriodic,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    pub dynamics: Vec<usize>,
    pub singular_point: usize,
    pub sectors: BTreeMap<i64, Vec<usize>>,
    pub cyclic_order: BTreeMap<usize, Vec<usize>>,
}

impl AbstractHubbardTree {
    /// Assembles a tree from parts without checking invariants; call
    /// [`AbstractHubbardTree::verify`] afterwards.
    pub fn from_parts(parts: TreeParts) -> Result<AbstractHubbardTree> {
        let n = parts.vertices.len();
        if parts.vertices.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::InvariantViolation("vertex ids must be 0..n in order".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &parts.edges {
            if a >= n || b >= n || a == b {
                return Err(Error::NotATree(format!("bad edge ({a}, {b})")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        if parts.dynamics.len() != n || parts.dynamics.iter().any(|&d| d >= n) || parts.singular_point >= n {
            return Err(Error::InvariantViolation("dynamics or singular point out of range".into()));
        }
        let mut edges: Vec<(usize, usize)> = parts.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        Ok(AbstractHubbardTree {
            base: parts.base,
            kneading: parts.kneading,
            vertices: parts.vertices,
            edges,
            dynamics: parts.dynamics,
            singular_point: parts.singular_point,
            sectors: parts.sectors,
            cyclic_order: parts.cyclic_order,
            surplus_accesses: Vec::new(),
            adjacency,
        })
    }

    pub fn base(&self) -> &ExtAddress {
        &self.base
    }

    pub fn kneading(&self) -> &EventuallyPeriodic {
        &self.kneading
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn itinerary(&self, v: usize) -> &Itinerary {
        &self.vertices[v].itinerary
    }

    /// Edges as sorted pairs `(a, b)` with `a < b`, in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn dynamics(&self, v: usize) -> usize {
        self.dynamics[v]
    }

    pub fn dynamics_map(&self) -> &[usize] {
        &self.dynamics
    }

    pub fn singular_point(&self) -> usize {
        self.singular_point
    }

    pub fn sectors(&self) -> &BTreeMap<i64, Vec<usize>> {
        &self.sectors
    }

    pub fn cyclic_order(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.cyclic_order
    }

    pub fn surplus_accesses(&self) -> &[(usize, usize)] {
        &self.surplus_accesses
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn vertex_of(&self, t: &Itinerary) -> Option<usize> {
        self.vertices.iter().position(|v| v.itinerary == *t)
    }

    /// The vertex `f(v_T)` with itinerary `ν`.
    pub fn singular_value(&self) -> Option<usize> {
        self.vertex_of(&Itinerary::Plain(self.kneading.clone()))
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// Vertices of the unique path from `from` to `to`, both included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &y in &self.adjacency[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[to] == usize::MAX {
            return Vec::new();
        }
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    /// Vertices of the branch at `v` that contains the neighbor `toward`.
    pub fn branch(&self, v: usize, toward: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        seen[toward] = true;
        let mut out = vec![toward];
        let mut queue = VecDeque::from([toward]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The germ at `f(v)` of the image of the edge germ `(v, toward)`.
    pub fn image_germ(&self, v: usize, toward: usize) -> usize {
        let path = self.path(self.dynamics[v], self.dynamics[toward]);
        path[1]
    }

    fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Checks every structural invariant of an abstract Hubbard tree.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        let nu = &self.kneading;
        let n = self.len();

        if self.edges.len() + 1 != n || !self.is_connected() {
            return Err(Error::NotATree(format!("{} vertices, {} edges", n, self.edges.len())));
        }
        let distinct: BTreeSet<&Itinerary> = self.vertices.iter().map(|v| &v.itinerary).collect();
        if distinct.len() != n {
            return fail("vertex itineraries are not distinct".into());
        }

        let vt = self.singular_point;
        if !self.itinerary(vt).is_star() {
            return fail("singular point must carry the itinerary *".into());
        }
        let Some(sv) = self.singular_value() else {
            return fail("no vertex carries the kneading sequence".into());
        };
        for v in 0..n {
            let expected = self.itinerary(v).shift(nu);
            if *self.itinerary(self.dynamics[v]) != expected {
                return fail(format!("dynamics of vertex {v} does not shift its itinerary"));
            }
        }
        if self.degree(sv) != 1 {
            return fail("the singular value is not an endpoint".into());
        }
        let orbit = singular_orbit(nu);
        for v in 0..n {
            if self.degree(v) == 1 && !orbit.contains(self.itinerary(v)) {
                return fail(format!("endpoint {v} is off the singular orbit"));
            }
        }

        for v in &self.vertices {
            let expected = match (v.itinerary.is_star(), orbit.contains(&v.itinerary), self.degree(v.id) >= 3) {
                (true, _, _) => VertexKind::SingularPoint,
                (false, true, true) => VertexKind::Both,
                (false, true, false) => VertexKind::PostSingular,
                (false, false, _) => VertexKind::BranchExtra,
            };
            if v.kind != expected {
                return fail(format!("vertex {} should be of kind {expected}", v.id));
            }
        }

        // Branches at the singular point are the sectors.
        let mut seen_labels = BTreeSet::new();
        let mut covered = 0;
        for &w in self.neighbors(vt) {
            let branch = self.branch(vt, w);
            let Symbol::Int(k) = self.itinerary(w).first_symbol() else {
                return fail("a neighbor of the singular point starts with *".into());
            };
            if branch.iter().any(|&x| self.itinerary(x).first_symbol() != Symbol::Int(k)) {
                return fail(format!("branch toward {w} mixes first entries"));
            }
            if !seen_labels.insert(k) || self.sectors.get(&k) != Some(&branch) {
                return fail(format!("sector {k} does not match its branch"));
            }
            covered += 1;
            let mut images: Vec<usize> = branch.iter().map(|&x| self.dynamics[x]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != branch.len() {
                return fail(format!("dynamics is not injective on sector {k}"));
            }
        }
        if covered != self.sectors.len() {
            return fail("sector labels without a branch".into());
        }
        if !self.sectors.get(&0).is_some_and(|b| b.contains(&sv)) {
            return fail("the singular value is not in sector 0".into());
        }

        for v in 0..n {
            if v == vt {
                if self.cyclic_order.contains_key(&v) {
                    return fail("the singular point has no stored cyclic order".into());
                }
                continue;
            }
            let Some(order) = self.cyclic_order.get(&v) else {
                return fail(format!("vertex {v} lacks a cyclic order"));
            };
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != self.neighbors(v) {
                return fail(format!("cyclic order at {v} is not a permutation of its neighbors"));
            }
        }

        for v in 0..n {
            if v == vt || self.degree(v) < 3 || self.dynamics[v] == vt {
                continue;
            }
            if !self.preserves_cyclic_order_at(v) {
                return fail(format!("dynamics reverses the cyclic order at vertex {v}"));
            }
        }
        Ok(())
    }

    /// Whether the germ map at `v` carries `∠_v` into `∠_{f(v)}`.
    pub fn preserves_cyclic_order_at(&self, v: usize) -> bool {
        let image = self.dynamics[v];
        let germs: Vec<usize> = self.cyclic_order[&v].iter().map(|&w| self.image_germ(v, w)).collect();
        let positions: Vec<usize> = if image == self.singular_point {
            // sector labels encode the order at the singular point
            let mut labels: Vec<i64> = germs.iter().map(|&g| first_int(self.itinerary(g))).collect();
            let ranks = labels.clone();
            labels.sort_unstable();
            ranks.iter().map(|l| labels.binary_search(l).unwrap()).collect()
        } else {
            let target = &self.cyclic_order[&image];
            match germs.iter().map(|g| target.iter().position(|x| x == g)).collect::<Option<Vec<_>>>() {
                Some(p) => p,
                None => return false,
            }
        };
        let mut unique = positions.clone();
        unique.sort_unstable();
        unique.dedup();
        if unique.len() != positions.len() {
            return false;
        }
        cyclically_increasing(&positions)
    }
}

fn first_int(t: &Itinerary) -> i64 {
    match t.first_symbol() {
        Symbol::Int(k) => k,
        Symbol::Star => i64::MIN,
    }
}

/// True iff the sequence has at most one cyclic descent.
pub(crate) fn cyclically_increasing(seq: &[usize]) -> bool {
    let n = seq.len();
    if n < 3 {
        return true;
    }
    (0..n).filter(|&i| seq[(i + 1) % n] < seq[i]).count() == 1
}

/// Builds the abstract Hubbard tree with the default search bounds.
pub fn build_tree(partition: &Partition) -> Result<AbstractHubbardTree> {
    build_tree_with(partition, &SearchConfig::default())
}

pub fn build_tree_with(partition: &Partition, config: &SearchConfig) -> Result<AbstractHubbardTree> {
    let nu = partition.kneading();
    let set = vertex_set(partition)?;
    let mut vertices = set.vertices;
    let n = vertices.len();
    let its: Vec<Itinerary> = vertices.iter().map(|v| v.itinerary.clone()).collect();

    let between = |u: usize, w: usize, v: usize| middle_point_of(nu, &its[u], &its[w], &its[v]).as_ref() == Some(&its[w]);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !(0..n).any(|w| w != u && w != v && between(u, w, v)) {
                edges.push((u, v));
            }
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::NotATree(format!("{} vertices but {} edges", n, edges.len())));
    }

    let index: HashMap<&Itinerary, usize> = its.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let singular_point = index[&Itinerary::star()];
    let dynamics = its
        .iter()
        .map(|t| {
            index
                .get(&t.shift(nu))
                .copied()
                .ok_or_else(|| Error::ClosureViolation(format!("shift of {t} is not a vertex")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, t) in its.iter().enumerate() {
        if let Symbol::Int(k) = t.first_symbol() {
            sectors.entry(k).or_default().push(i);
        }
    }

    let mut tree = AbstractHubbardTree::from_parts(TreeParts {
        base: partition.base().clone(),
        kneading: nu.clone(),
        vertices: vertices.clone(),
        edges,
        dynamics,
        singular_point,
        sectors,
        cyclic_order: BTreeMap::new(),
    })?;
    if !tree.is_connected() {
        return Err(Error::NotATree("betweenness graph is disconnected".into()));
    }

    for v in vertices.iter_mut() {
        if v.kind == VertexKind::PostSingular && tree.degree(v.id) >= 3 {
            v.kind = VertexKind::Both;
        }
    }
    tree.vertices = vertices;

    let (lo, hi) = match (tree.sectors.keys().next(), tree.sectors.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    };
    let j0 = partition.offset_j0();
    let boundary_span = (j0 + lo - 1)..=(j0 + hi + 2);
    let mut orders = BTreeMap::new();
    let mut surplus = Vec::new();
    let mut cache = AddressCache::new(partition, config, boundary_span);
    for v in 0..n {
        if v == singular_point {
            continue;
        }
        let order = if tree.degree(v) < 3 {
            tree.neighbors(v).to_vec()
        } else {
            match tree.itinerary(v) {
                Itinerary::Plain(_) => {
                    let (order, count) = plain_cyclic_order(&tree, v, &mut cache)?;
                    if count > tree.degree(v) {
                        surplus.push((v, count));
                    }
                    order
                }
                Itinerary::PreSingular(prefix) => presingular_cyclic_order(&tree, v, prefix.len()),
            }
        };
        orders.insert(v, order);
    }
    tree.cyclic_order = orders;
    tree.surplus_accesses = surplus;
    tree.verify()?;
    Ok(tree)
}

struct AddressCache<'a> {
    partition: &'a Partition,
    config: &'a SearchConfig,
    span: RangeInclusive<i64>,
    by_itinerary: HashMap<Itinerary, Vec<ExtAddress>>,
}

impl<'a> AddressCache<'a> {
    fn new(partition: &'a Partition, config: &'a SearchConfig, span: RangeInclusive<i64>) -> Self {
        AddressCache {
            partition,
            config,
            span,
            by_itinerary: HashMap::new(),
        }
    }

    fn get(&mut self, t: &Itinerary) -> Result<&[ExtAddress]> {
        if !self.by_itinerary.contains_key(t) {
            let range = t.is_presingular().then(|| self.span.clone());
            let set = addresses_of(self.partition, t, self.config, range)?;
            self.by_itinerary.insert(t.clone(), set.addresses);
        }
        Ok(&self.by_itinerary[t])
    }
}

/// Index of the cyclic gap `(A_i, A_{i+1})` of the sorted set `anchors`
/// containing `x`.
fn gap_index(anchors: &[ExtAddress], x: &ExtAddress) -> usize {
    let below = anchors.partition_point(|a| a < x);
    if below == 0 {
        anchors.len() - 1
    } else {
        below - 1
    }
}

fn plain_cyclic_order(
    tree: &AbstractHubbardTree,
    v: usize,
    cache: &mut AddressCache,
) -> Result<(Vec<usize>, usize)> {
    let anchors = cache.get(tree.itinerary(v))?.to_vec();
    if anchors.len() < tree.degree(v) {
        return Err(Error::GapAssignmentFailure(format!(
            "vertex {} has {} branches but only {} landing addresses",
            tree.itinerary(v),
            tree.degree(v),
            anchors.len()
        )));
    }
    let mut keyed = Vec::new();
    let mut used = BTreeSet::new();
    for &w in tree.neighbors(v) {
        let mut gaps = BTreeSet::new();
        for x in tree.branch(v, w) {
            for a in cache.get(tree.itinerary(x))? {
                gaps.insert(gap_index(&anchors, a));
            }
        }
        if gaps.len() != 1 {
            return Err(Error::GapAssignmentFailure(format!(
                "branch at {} toward {} meets {} gaps",
                tree.itinerary(v),
                tree.itinerary(w),
                gaps.len()
            )));
        }
        let gap = *gaps.first().unwrap();
        if !used.insert(gap) {
            return Err(Error::GapAssignmentFailure(format!(
                "two branches at {} share gap {gap}",
                tree.itinerary(v)
            )));
        }
        keyed.push((gap, w));
    }
    keyed.sort_unstable();
    Ok((keyed.into_iter().map(|(_, w)| w).collect(), anchors.len()))
}

/// Orders the branches at a pre-singular vertex `k₁…k_r*ν` by the sector at
/// the singular point that the `r`-th iterate carries each germ to.
fn presingular_cyclic_order(tree: &AbstractHubbardTree, v: usize, depth: usize) -> Vec<usize> {
    let mut keyed: Vec<(i64, usize)> = tree
        .neighbors(v)
        .iter()
        .map(|&w| {
            let (mut x, mut d) = (v, w);
            for _ in 0..depth {
                d = tree.image_germ(x, d);
                x = tree.dynamics(x);
            }
            debug_assert_eq!(x, tree.singular_point());
            (first_int(tree.itinerary(d)), w)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, w)| w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(pre: &[i64], per: &[i64]) -> ExtAddress {
        ExtAddress::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn plain(pre: &[i64], per: &[i64]) -> Itinerary {
        Itinerary::Plain(EventuallyPeriodic::new(pre.to_vec(), per.to_vec()).unwrap())
    }

    #[test]
    fn vertex_set_examples() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        let set = vertex_set(&p).unwrap();
        let its: Vec<_> = set.itineraries().cloned().collect();
        assert_eq!(its, vec![Itinerary::star(), plain(&[0], &[1]), plain(&[], &[1])]);

        let p = Partition::new(addr(&[0], &[0, 1])).unwrap();
        let set = vertex_set(&p).unwrap();
        let its: BTreeSet<_> = set.itineraries().cloned().collect();
        let expected: BTreeSet<_> = [
            Itinerary::star(),
            plain(&[0], &[0, 1]),
            plain(&[], &[0, 1]),
            plain(&[], &[1, 0]),
            plain(&[], &[0]),
        ]
        .into_iter()
        .collect();
        assert_eq!(its, expected);
        assert_eq!(set.vertices[0].kind, VertexKind::SingularPoint);
    }

    #[test]
    fn tree_for_base_zero_one() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        let tree = build_tree(&p).unwrap();
        let vt = tree.singular_point();
        let sv = tree.singular_value().unwrap();
        let one = tree.vertex_of(&plain(&[], &[1])).unwrap();
        assert_eq!(tree.edges().len(), 2);
        assert!(tree.edge_index(sv, vt).is_some());
        assert!(tree.edge_index(vt, one).is_some());
        assert_eq!(tree.dynamics(vt), sv);
        assert_eq!(tree.dynamics(sv), one);
        assert_eq!(tree.dynamics(one), one);
        assert_eq!(tree.sectors()[&0], vec![sv]);
        assert_eq!(tree.sectors()[&1], vec![one]);
        assert_eq!(tree.degree(sv), 1);
    }

    #[test]
    fn tree_for_base_zero_zero_one() {
        let p = Partition::new(addr(&[0], &[0, 1])).unwrap();
        let tree = build_tree(&p).unwrap();
        let vt = tree.singular_point();
        let nu = tree.vertex_of(&plain(&[0], &[0, 1])).unwrap();
        let snu = tree.vertex_of(&plain(&[], &[0, 1])).unwrap();
        let ssnu = tree.vertex_of(&plain(&[], &[1, 0])).unwrap();
        let w = tree.vertex_of(&plain(&[], &[0])).unwrap();
        let mut expected = [
            (nu.min(w), nu.max(w)),
            (snu.min(w), snu.max(w)),
            (vt.min(w), vt.max(w)),
            (ssnu.min(vt), ssnu.max(vt)),
        ];
        expected.sort_unstable();
        assert_eq!(tree.edges(), &expected[..]);
        assert_eq!(tree.dynamics(w), w);
        assert_eq!(tree.degree(w), 3);
        assert_eq!(tree.vertices()[w].kind, VertexKind::BranchExtra);

        // (ν-branch, σν-branch, v_T-branch) up to rotation
        let order = &tree.cyclic_order()[&w];
        let start = order.iter().position(|&x| x == nu).unwrap();
        let rotated: Vec<usize> = (0..3).map(|i| order[(start + i) % 3]).collect();
        assert_eq!(rotated, vec![nu, snu, vt]);

        assert_eq!(tree.sectors()[&1], vec![ssnu]);
        let mut zero = vec![nu, snu, w];
        zero.sort_unstable();
        assert_eq!(tree.sectors()[&0], zero);
        assert!(tree.surplus_accesses().is_empty());
    }

    #[test]
    fn verify_rejects_reversed_order() {
        let p = Partition::new(addr(&[0, 1, 0], &[1])).unwrap();
        let tree = build_tree(&p).unwrap();
        let w = tree.vertex_of(&plain(&[], &[1, 0])).unwrap();
        assert_eq!(tree.degree(w), 3);
        assert!(tree.verify().is_ok());
        let mut parts = parts_of(&tree);
        parts.cyclic_order.get_mut(&w).unwrap().reverse();
        let broken = AbstractHubbardTree::from_parts(parts).unwrap();
        assert!(matches!(broken.verify(), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn verify_rejects_cycles() {
        let p = Partition::new(addr(&[0], &[1])).unwrap();
        let tree = build_tree(&p).unwrap();
        let mut parts = parts_of(&tree);
        parts.edges.push((1, 2));
        let broken = AbstractHubbardTree::from_parts(parts).unwrap();
        assert!(matches!(broken.verify(), Err(Error::NotATree(_))));
    }

    fn parts_of(tree: &AbstractHubbardTree) -> TreeParts {
        TreeParts {
            base: tree.base().clone(),
            kneading: tree.kneading().clone(),
            vertices: tree.vertices().to_vec(),
            edges: tree.edges().to_vec(),
            dynamics: tree.dynamics_map().to_vec(),
            singular_point: tree.singular_point(),
            sectors: tree.sectors().clone(),
            cyclic_order: tree.cyclic_order().clone(),
        }
    }

    #[test]
    fn cyclic_increase() {
        assert!(cyclically_increasing(&[0, 1, 2]));
        assert!(cyclically_increasing(&[2, 0, 1]));
        assert!(!cyclically_increasing(&[2, 1, 0]));
        assert!(cyclically_increasing(&[3, 0, 2]));
    }
}
