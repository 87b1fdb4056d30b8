//! Decomposition trees: unrooted trees whose internal nodes all have degree
//! exactly three and whose leaves biject to the vertices of a graph. Every
//! tree edge induces a cut of the graph (the leaf partition after removing
//! the edge); the f-width of a tree is the maximum of a symmetric cut
//! function over those cuts.
//!
//! This module covers representation and validation, cut extraction, width
//! evaluation under capped cut functions, a random builder, a greedy
//! bisection builder, local-search improvement, exhaustive exact search for
//! tiny graphs, and a nested-parentheses text format.

use crate::bitset::VertexSet;
use crate::cut::{cut_bool_exact, cut_car, greedy_private_pairs, CutBool};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

/// Everything at or below this size is safe for exhaustive tree enumeration:
/// the number of leaf-labeled topologies is (2n−5)!!.
pub const DEFAULT_EXACT_N_MAX: usize = 8;

/// Internal cap on family enumeration used while the greedy builder scores
/// candidate splits; the final reported width uses the caller's cap.
const GREEDY_SCORE_CAP: usize = 1 << 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("node {0} has degree {1}; only 1 (leaf) or 3 (internal) allowed")]
    BadDegree(usize, usize),
    #[error("tree is not connected")]
    Disconnected,
    #[error("edge count {0} does not match a tree on {1} nodes")]
    NotATree(usize, usize),
    #[error("leaves do not biject onto the graph vertices")]
    NotABijection,
    #[error("graph has {0} vertices but the tree has {1} leaves")]
    LeafCountMismatch(usize, usize),
    #[error("graph on {0} vertices exceeds the exhaustive-search bound {1}")]
    TooLargeForExact(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeParseError {
    #[error("offset {0}: expected {1}")]
    Expected(usize, &'static str),
    #[error("offset {0}: trailing input")]
    TrailingInput(usize),
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("leaf ids must be exactly 0..{expected}, found id {found}")]
    VertexIdGap { expected: usize, found: usize },
    #[error(transparent)]
    Structure(#[from] TreeError),
}

/// The cut induced by one tree edge: `side_a` holds the graph vertices whose
/// leaves fall on one component after deleting the edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCut {
    /// Index into [`DecompositionTree::edges`].
    pub edge: usize,
    pub side_a: VertexSet,
}

/// A decomposition tree of a graph on `n` vertices.
///
/// Node ids are dense; leaves carry their graph vertex in `leaf_vertex`.
/// The structural invariants (degrees, connectivity, bijection, and the
/// existence of a (1/3, 2/3)-balanced cut for n ≥ 3) are checked on every
/// construction path.
#[derive(Debug, Clone)]
pub struct DecompositionTree {
    n: usize,
    adj: Vec<Vec<usize>>,
    leaf_vertex: Vec<Option<usize>>,
    vertex_leaf: Vec<usize>,
}

impl DecompositionTree {
    /// Builds and fully validates a tree from raw parts. `leaf_vertex[w]`
    /// must be `Some(v)` exactly for the leaf nodes.
    pub fn from_parts(
        n: usize,
        node_count: usize,
        edges: &[(usize, usize)],
        leaf_vertex: Vec<Option<usize>>,
    ) -> Result<Self, TreeError> {
        assert_eq!(leaf_vertex.len(), node_count);
        let mut adj = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let t = DecompositionTree { n, adj, leaf_vertex, vertex_leaf: Vec::new() };
        t.validate().map(|vertex_leaf| DecompositionTree { vertex_leaf, ..t })
    }

    /// Checks every structural invariant; returns the vertex→leaf map.
    fn validate(&self) -> Result<Vec<usize>, TreeError> {
        let nodes = self.adj.len();
        if self.n == 0 || nodes == 0 {
            return Err(TreeError::LeafCountMismatch(self.n, 0));
        }
        // n = 1 degenerates to one isolated leaf; n = 2 to a single edge.
        let mut leaves = 0;
        for (w, nb) in self.adj.iter().enumerate() {
            let deg = nb.len();
            let expected_leaf = match deg {
                0 if nodes == 1 => true,
                1 => true,
                3 => false,
                _ => return Err(TreeError::BadDegree(w, deg)),
            };
            if expected_leaf != self.leaf_vertex[w].is_some() {
                return Err(TreeError::NotABijection);
            }
            if expected_leaf {
                leaves += 1;
            }
        }
        if leaves != self.n {
            return Err(TreeError::LeafCountMismatch(self.n, leaves));
        }
        let edge_count = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if edge_count + 1 != nodes {
            return Err(TreeError::NotATree(edge_count, nodes));
        }
        // Connected + |E| = |V|−1 ⇒ acyclic.
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(w) = stack.pop() {
            for &x in &self.adj[w] {
                if !seen[x] {
                    seen[x] = true;
                    reached += 1;
                    stack.push(x);
                }
            }
        }
        if reached != nodes {
            return Err(TreeError::Disconnected);
        }
        let mut vertex_leaf = vec![usize::MAX; self.n];
        for (w, lv) in self.leaf_vertex.iter().enumerate() {
            if let Some(v) = *lv {
                if v >= self.n || vertex_leaf[v] != usize::MAX {
                    return Err(TreeError::NotABijection);
                }
                vertex_leaf[v] = w;
            }
        }
        // Every cubic tree on n ≥ 3 leaves has a (1/3, 2/3)-balanced edge;
        // its absence means the structure above is corrupt.
        if self.n >= 3 {
            let need = self.n.div_ceil(3);
            let balanced = self.cuts_impl().iter().any(|c| {
                let s = c.side_a.count();
                s.min(self.n - s) >= need
            });
            assert!(balanced, "no (1/3,2/3)-balanced cut in a validated tree");
        }
        Ok(vertex_leaf)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors_of_node(&self, w: usize) -> &[usize] {
        &self.adj[w]
    }

    pub fn leaf_for_vertex(&self, v: usize) -> usize {
        self.vertex_leaf[v]
    }

    pub fn vertex_at_leaf(&self, w: usize) -> Option<usize> {
        self.leaf_vertex[w]
    }

    /// Tree edges as `(u, v)` with `u < v`, sorted; positions are edge ids.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// One cut per tree edge: `side_a` = leaves on the smaller-id endpoint's
    /// component. 2n − 3 cuts for n ≥ 2, none for n = 1.
    pub fn all_cuts(&self) -> Vec<TreeCut> {
        self.cuts_impl()
    }

    fn cuts_impl(&self) -> Vec<TreeCut> {
        let edges = self.edges();
        let mut out = Vec::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            out.push(TreeCut { edge: id, side_a: self.component_leaves(u, v) });
        }
        out
    }

    /// Graph vertices at leaves reachable from `start` without crossing the
    /// edge to `avoid`.
    fn component_leaves(&self, start: usize, avoid: usize) -> VertexSet {
        let mut side = VertexSet::empty(self.n);
        let mut stack = vec![(start, avoid)];
        while let Some((w, from)) = stack.pop() {
            if let Some(v) = self.leaf_vertex[w] {
                side.insert(v);
            }
            for &x in &self.adj[w] {
                if x != from {
                    stack.push((x, w));
                }
            }
        }
        side
    }

    /// The cut maximizing the smaller side; ties broken by lowest edge id.
    pub fn most_balanced_cut(&self) -> Option<TreeCut> {
        self.all_cuts()
            .into_iter()
            .max_by_key(|c| {
                let s = c.side_a.count();
                (s.min(self.n - s), std::cmp::Reverse(c.edge))
            })
    }
}

/// A cut-function value, possibly only known as an interval when an
/// enumeration cap was hit. Exact values have `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Width {
    pub lo: f64,
    pub hi: f64,
}

impl Width {
    pub fn exact(x: f64) -> Width {
        Width { lo: x, hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// cut-bool as a capped cut function: exact log2 when the family enumerates,
/// otherwise the interval [max(greedy pairs, log2 of members found), min
/// side size].
pub fn cut_bool_value(g: &Graph, a: &VertexSet, cap: usize) -> Width {
    match cut_bool_exact(g, a, cap) {
        CutBool::Exact { log2, .. } => Width::exact(log2),
        CutBool::Capped { seen } => {
            let (s, _) = greedy_private_pairs(g, a);
            // The family has at least seen + 1 members.
            let lo = (s.count() as f64).max(((seen + 1) as f64).log2());
            let hi = a.count().min(g.n() - a.count()) as f64;
            Width { lo: lo.min(hi), hi }
        }
    }
}

/// cut-car as a cut function (always exact).
pub fn cut_car_value(g: &Graph, a: &VertexSet) -> Width {
    Width::exact(cut_car(g, a) as f64)
}

/// Maximum of `f` over all cuts of the tree, as an interval
/// [max of lower bounds, max of upper bounds]. Exact iff every cut was.
pub fn f_width<F>(g: &Graph, t: &DecompositionTree, f: F) -> Width
where
    F: Fn(&Graph, &VertexSet) -> Width,
{
    let mut w = Width::exact(0.0);
    for cut in t.all_cuts() {
        let v = f(g, &cut.side_a);
        w.lo = w.lo.max(v.lo);
        w.hi = w.hi.max(v.hi);
    }
    w
}

/// Boolean-width of the tree: f_width with cut-bool under `cap`.
pub fn bool_width(g: &Graph, t: &DecompositionTree, cap: usize) -> Width {
    f_width(g, t, |g, a| cut_bool_value(g, a, cap))
}

// ---------------------------------------------------------------------------
// Construction

/// Growable unrooted tree used by the builders: edges are subdivided to
/// attach new leaves, keeping internal degrees at exactly three.
#[derive(Clone)]
struct TreeScratch {
    adj: Vec<Vec<usize>>,
    leaf_vertex: Vec<Option<usize>>,
    /// Insertion-ordered edge list (kept in sync by `attach_leaf`).
    edges: Vec<(usize, usize)>,
}

impl TreeScratch {
    /// Two leaves joined by an edge.
    fn pair(v0: usize, v1: usize) -> TreeScratch {
        TreeScratch {
            adj: vec![vec![1], vec![0]],
            leaf_vertex: vec![Some(v0), Some(v1)],
            edges: vec![(0, 1)],
        }
    }

    fn new_node(&mut self, leaf: Option<usize>) -> usize {
        self.adj.push(Vec::new());
        self.leaf_vertex.push(leaf);
        self.adj.len() - 1
    }

    fn unlink(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
    }

    fn link(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Subdivides edge `e` with a fresh internal node and hangs vertex `v`'s
    /// leaf from it.
    fn attach_leaf(&mut self, e: usize, v: usize) {
        let (a, b) = self.edges[e];
        let mid = self.new_node(None);
        let leaf = self.new_node(Some(v));
        self.unlink(a, b);
        self.link(a, mid);
        self.link(mid, b);
        self.link(mid, leaf);
        self.edges[e] = (a, mid);
        self.edges.push((mid, b));
        self.edges.push((mid, leaf));
    }

    fn finish(&self, n: usize) -> DecompositionTree {
        DecompositionTree::from_parts(n, self.adj.len(), &self.edges, self.leaf_vertex.clone())
            .expect("builder maintains the tree invariants")
    }
}

/// Uniformly random leaf-labeled cubic tree: each new leaf subdivides a
/// uniformly random existing edge. Deterministic per seed.
pub fn build_random_tree(g: &Graph, seed: u64) -> DecompositionTree {
    let n = g.n();
    assert!(n >= 1);
    if n == 1 {
        return single_leaf_tree();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = TreeScratch::pair(0, 1);
    for v in 2..n {
        let e = rng.random_range(0..t.edges.len());
        t.attach_leaf(e, v);
    }
    t.finish(n)
}

fn single_leaf_tree() -> DecompositionTree {
    DecompositionTree::from_parts(1, 1, &[], vec![Some(0)]).expect("single leaf is valid")
}

/// Greedy recursive bisection: split the current vertex set into two parts
/// of sizes within a factor two of each other, chosen by restarted
/// single-vertex local search to minimize the estimated cut-bool of the two
/// global cuts the split creates. Scores use exact enumeration while the
/// family stays small and fall back to the greedy-pairs lower bound beyond
/// that. Deterministic per seed.
pub fn build_greedy_tree(g: &Graph, seed: u64) -> DecompositionTree {
    build_greedy_tree_with_cap(g, seed, GREEDY_SCORE_CAP)
}

/// [`build_greedy_tree`] with an explicit score-enumeration cap.
pub fn build_greedy_tree_with_cap(g: &Graph, seed: u64, cap: usize) -> DecompositionTree {
    let n = g.n();
    assert!(n >= 1);
    if n == 1 {
        return single_leaf_tree();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scorer = SplitScorer { g, cap, memo: HashMap::new() };
    let everything = VertexSet::full(n);
    let mut builder = GreedyBuilder { scorer: &mut scorer, rng: &mut rng };
    let (scratch, _root_edge) = builder.build(&everything);
    scratch.finish(n)
}

struct SplitScorer<'a> {
    g: &'a Graph,
    cap: usize,
    memo: HashMap<VertexSet, f64>,
}

impl SplitScorer<'_> {
    /// Estimated cut-bool of the global cut {side, complement}.
    fn score(&mut self, side: &VertexSet) -> f64 {
        let key = if side.contains(0) { side.clone() } else { side.complement() };
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match cut_bool_exact(self.g, &key, self.cap) {
            CutBool::Exact { log2, .. } => log2,
            CutBool::Capped { .. } => {
                let (s, _) = greedy_private_pairs(self.g, &key);
                s.count() as f64
            }
        };
        self.memo.insert(key, v);
        v
    }
}

struct GreedyBuilder<'a, 'b> {
    scorer: &'a mut SplitScorer<'b>,
    rng: &'a mut ChaCha8Rng,
}

const GREEDY_RESTARTS: usize = 3;

impl GreedyBuilder<'_, '_> {
    /// Builds the subtree over `set` (|set| ≥ 1); returns the scratch tree
    /// and nothing else — the caller joins subtrees. Rooted shape: a set of
    /// size one becomes a leaf, larger sets become the join of their two
    /// halves' subtrees.
    fn build(&mut self, set: &VertexSet) -> (TreeScratch, usize) {
        let (s1, s2) = self.bisect(set);
        let left = self.subtree(&s1);
        let right = self.subtree(&s2);
        // Join the two rooted subtrees with a single edge.
        let mut t = left.0;
        let offset = t.adj.len();
        for nb in right.0.adj {
            t.adj.push(nb.into_iter().map(|x| x + offset).collect());
        }
        t.leaf_vertex.extend(right.0.leaf_vertex);
        for (a, b) in right.0.edges {
            t.edges.push((a + offset, b + offset));
        }
        t.link(left.1, right.1 + offset);
        t.edges.push((left.1, right.1 + offset));
        let e = t.edges.len() - 1;
        (t, e)
    }

    /// Subtree whose root hangs off the parent edge: a lone leaf, or an
    /// internal node joining the two halves of a further bisection.
    fn subtree(&mut self, set: &VertexSet) -> (TreeScratch, usize) {
        if set.count() == 1 {
            let v = set.first().unwrap();
            let t = TreeScratch { adj: vec![Vec::new()], leaf_vertex: vec![Some(v)], edges: Vec::new() };
            return (t, 0);
        }
        let (s1, s2) = self.bisect(set);
        let (mut t, r1) = self.subtree(&s1);
        let sub = self.subtree(&s2);
        let offset = t.adj.len();
        for nb in sub.0.adj {
            t.adj.push(nb.into_iter().map(|x| x + offset).collect());
        }
        t.leaf_vertex.extend(sub.0.leaf_vertex);
        for (a, b) in sub.0.edges {
            t.edges.push((a + offset, b + offset));
        }
        let r2 = sub.1 + offset;
        let root = t.new_node(None);
        t.link(root, r1);
        t.link(root, r2);
        t.edges.push((root, r1));
        t.edges.push((root, r2));
        (t, root)
    }

    /// Splits `set` into two parts with both sizes ≥ ⌈|set|/3⌉ (factor-two
    /// balance), minimizing max(score(part1), score(part2)) over restarted
    /// first-improvement single-vertex moves.
    fn bisect(&mut self, set: &VertexSet) -> (VertexSet, VertexSet) {
        let ns = set.count();
        debug_assert!(ns >= 2);
        let verts: Vec<usize> = set.iter().collect();
        let min_side = ns.div_ceil(3);
        let universe = set.universe();

        let mut best: Option<(f64, VertexSet)> = None;
        for _ in 0..GREEDY_RESTARTS {
            // Random balanced start: shuffle, take the first half.
            let mut order = verts.clone();
            for i in (1..order.len()).rev() {
                let j = self.rng.random_range(0..=i);
                order.swap(i, j);
            }
            let mut s1 = VertexSet::from_vertices(universe, order[..ns / 2].iter().copied());
            let mut cost = self.split_cost(set, &s1);
            loop {
                let mut improved = false;
                for &v in &verts {
                    let (c1, c2) = if s1.contains(v) {
                        (s1.count() - 1, ns - s1.count() + 1)
                    } else {
                        (s1.count() + 1, ns - s1.count() - 1)
                    };
                    if c1 < min_side || c2 < min_side {
                        continue;
                    }
                    let mut cand = s1.clone();
                    if cand.contains(v) {
                        cand.remove(v);
                    } else {
                        cand.insert(v);
                    }
                    let c = self.split_cost(set, &cand);
                    if c < cost {
                        s1 = cand;
                        cost = c;
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
            if best.as_ref().map_or(true, |(bc, _)| cost < *bc) {
                best = Some((cost, s1));
            }
        }
        let (_, s1) = best.expect("at least one restart ran");
        let s2 = set.difference(&s1);
        debug_assert!(s1.count() >= min_side && s2.count() >= min_side);
        (s1, s2)
    }

    /// Cost of splitting `set` into `s1` and `set \ s1`: the worse of the
    /// two new global cuts.
    fn split_cost(&mut self, set: &VertexSet, s1: &VertexSet) -> f64 {
        let s2 = set.difference(s1);
        self.scorer.score(s1).max(self.scorer.score(&s2))
    }
}

// ---------------------------------------------------------------------------
// Local search

/// Width vector used for move acceptance: (max upper bound over cuts, number
/// of cuts attaining it). Using the upper bound keeps acceptance sound when
/// some cuts only enumerated to an interval.
fn width_vector(g: &Graph, t: &DecompositionTree, memo: &mut HashMap<VertexSet, Width>, cap: usize) -> (f64, usize) {
    let mut max = 0.0f64;
    let mut count = 0usize;
    for cut in t.all_cuts() {
        let key = if cut.side_a.contains(0) { cut.side_a.clone() } else { cut.side_a.complement() };
        let w = *memo
            .entry(key)
            .or_insert_with_key(|k| cut_bool_value(g, k, cap));
        if w.hi > max {
            max = w.hi;
            count = 1;
        } else if w.hi == max {
            count += 1;
        }
    }
    (max, count)
}

/// Hill-climbs `t` by leaf-pair label swaps and leaf re-insertions,
/// accepting a move iff it strictly decreases the width vector
/// (max cut value, then the number of cuts attaining it). Stops at a local
/// optimum or after `budget` candidate evaluations. The result's width never
/// exceeds the input's.
pub fn local_search_improve(g: &Graph, t: &DecompositionTree, budget: usize, cap: usize) -> DecompositionTree {
    let n = t.n();
    if n < 3 {
        return t.clone();
    }
    let mut memo: HashMap<VertexSet, Width> = HashMap::new();
    let mut cur = t.clone();
    let mut cur_vec = width_vector(g, &cur, &mut memo, cap);
    let mut spent = 0usize;

    'outer: loop {
        // Leaf-pair swaps.
        for i in 0..n {
            for j in i + 1..n {
                if spent >= budget {
                    break 'outer;
                }
                spent += 1;
                let cand = swap_leaves(&cur, i, j);
                let v = width_vector(g, &cand, &mut memo, cap);
                if v < cur_vec {
                    cur = cand;
                    cur_vec = v;
                    continue 'outer;
                }
            }
        }
        // Leaf re-insertions.
        if n >= 4 {
            for v in 0..n {
                let reduced = remove_leaf(&cur, v);
                for e in 0..reduced.edges.len() {
                    if spent >= budget {
                        break 'outer;
                    }
                    spent += 1;
                    let mut scratch = reduced.clone();
                    scratch.attach_leaf(e, v);
                    let cand = scratch.finish(n);
                    let vec = width_vector(g, &cand, &mut memo, cap);
                    if vec < cur_vec {
                        cur = cand;
                        cur_vec = vec;
                        continue 'outer;
                    }
                }
            }
        }
        break; // full scan, no improving move: local optimum
    }
    cur
}

fn swap_leaves(t: &DecompositionTree, i: usize, j: usize) -> DecompositionTree {
    let mut leaf_vertex = t.leaf_vertex.clone();
    let li = t.vertex_leaf[i];
    let lj = t.vertex_leaf[j];
    leaf_vertex[li] = Some(j);
    leaf_vertex[lj] = Some(i);
    let edges = t.edges();
    DecompositionTree::from_parts(t.n, t.adj.len(), &edges, leaf_vertex)
        .expect("relabeling preserves structure")
}

/// Deletes vertex `v`'s leaf and suppresses its (now degree-2) internal
/// neighbor, renumbering nodes compactly. Requires n ≥ 4 so the neighbor is
/// internal.
fn remove_leaf(t: &DecompositionTree, v: usize) -> TreeScratch {
    let leaf = t.vertex_leaf[v];
    let mid = t.adj[leaf][0];
    debug_assert_eq!(t.adj[mid].len(), 3);
    let rest: Vec<usize> = t.adj[mid].iter().copied().filter(|&x| x != leaf).collect();
    let (x, y) = (rest[0], rest[1]);

    let mut id_map = vec![usize::MAX; t.adj.len()];
    let mut next = 0;
    for w in 0..t.adj.len() {
        if w != leaf && w != mid {
            id_map[w] = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    for (a, b) in t.edges() {
        if a == leaf || b == leaf || a == mid || b == mid {
            continue;
        }
        edges.push((id_map[a], id_map[b]));
    }
    edges.push((id_map[x].min(id_map[y]), id_map[x].max(id_map[y])));

    let mut leaf_vertex = vec![None; next];
    for (w, lv) in t.leaf_vertex.iter().enumerate() {
        if w != leaf && id_map[w] != usize::MAX {
            leaf_vertex[id_map[w]] = *lv;
        }
    }
    let mut adj = vec![Vec::new(); next];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    TreeScratch { adj, leaf_vertex, edges }
}

// ---------------------------------------------------------------------------
// Exact search

/// Visits every leaf-labeled cubic tree topology on `n ≥ 2` leaves exactly
/// once — (2n−5)!! of them — via sequential edge-subdivision choices.
pub fn for_each_topology<F: FnMut(&DecompositionTree)>(n: usize, mut f: F) {
    assert!(n >= 2);
    fn recurse<F: FnMut(&DecompositionTree)>(t: &TreeScratch, next: usize, n: usize, f: &mut F) {
        if next == n {
            f(&t.finish(n));
            return;
        }
        for e in 0..t.edges.len() {
            let mut s = t.clone();
            s.attach_leaf(e, next);
            recurse(&s, next + 1, n, f);
        }
    }
    recurse(&TreeScratch::pair(0, 1), 2, n, &mut f);
}

/// Exact boolean-width by exhaustive search over all decomposition trees,
/// with a witness tree attaining it. Rejects n > n_max.
pub fn exact_boolw(g: &Graph, n_max: usize) -> Result<(f64, DecompositionTree), TreeError> {
    let n = g.n();
    if n > n_max {
        return Err(TreeError::TooLargeForExact(n, n_max));
    }
    if n == 1 {
        return Ok((0.0, single_leaf_tree()));
    }
    // Families across any cut of an n ≤ n_max graph are ≤ 2^(n/2) members.
    let cap = 1usize << n;
    let mut best: Option<(f64, DecompositionTree)> = None;
    for_each_topology(n, |t| {
        let w = bool_width(g, t, cap);
        debug_assert!(w.is_exact());
        if best.as_ref().map_or(true, |(bw, _)| w.hi < *bw) {
            best = Some((w.hi, t.clone()));
        }
    });
    Ok(best.expect("n >= 2 has at least one topology"))
}

// ---------------------------------------------------------------------------
// Text format

/// Canonical nested-parentheses form, e.g. `((0,1),(2,3))`. The top-level
/// comma is the edge at vertex 0's leaf (leaf first), and each internal
/// node's children are ordered by their smallest descendant vertex, so
/// structurally equal trees serialize identically.
pub fn write_tree(t: &DecompositionTree) -> String {
    if t.n() == 1 {
        return "0".to_string();
    }
    let leaf0 = t.leaf_for_vertex(0);
    let other = t.adj[leaf0][0];
    let mut out = String::from("(0,");
    write_subtree(t, other, leaf0, &mut out);
    out.push(')');
    out
}

/// Appends the subtree at `w` (entered from `parent`); returns its minimum
/// vertex label.
fn write_subtree(t: &DecompositionTree, w: usize, parent: usize, out: &mut String) -> usize {
    if let Some(v) = t.leaf_vertex[w] {
        out.push_str(&v.to_string());
        return v;
    }
    let kids: Vec<usize> = t.adj[w].iter().copied().filter(|&x| x != parent).collect();
    debug_assert_eq!(kids.len(), 2);
    // Order children by smallest descendant for a canonical form.
    let mut left = String::new();
    let lmin = write_subtree(t, kids[0], w, &mut left);
    let mut right = String::new();
    let rmin = write_subtree(t, kids[1], w, &mut right);
    if rmin < lmin {
        std::mem::swap(&mut left, &mut right);
    }
    out.push('(');
    out.push_str(&left);
    out.push(',');
    out.push_str(&right);
    out.push(')');
    lmin.min(rmin)
}

pub fn parse_tree(text: &str) -> Result<DecompositionTree, TreeParseError> {
    let bytes: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0usize;

    enum Node {
        Leaf(usize),
        Pair(Box<Node>, Box<Node>),
    }

    fn parse_node(bytes: &[char], pos: &mut usize) -> Result<Node, TreeParseError> {
        match bytes.get(*pos) {
            Some('(') => {
                *pos += 1;
                let left = parse_node(bytes, pos)?;
                if bytes.get(*pos) != Some(&',') {
                    return Err(TreeParseError::Expected(*pos, "','"));
                }
                *pos += 1;
                let right = parse_node(bytes, pos)?;
                if bytes.get(*pos) != Some(&')') {
                    return Err(TreeParseError::Expected(*pos, "')'"));
                }
                *pos += 1;
                Ok(Node::Pair(Box::new(left), Box::new(right)))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = *pos;
                while matches!(bytes.get(*pos), Some(c) if c.is_ascii_digit()) {
                    *pos += 1;
                }
                let id: usize = bytes[start..*pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| TreeParseError::Expected(start, "vertex id"))?;
                Ok(Node::Leaf(id))
            }
            _ => Err(TreeParseError::Expected(*pos, "'(' or vertex id")),
        }
    }

    let root = parse_node(&bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(TreeParseError::TrailingInput(pos));
    }

    // Collect leaf ids and check the bijection onto 0..n.
    fn collect(node: &Node, ids: &mut Vec<usize>) {
        match node {
            Node::Leaf(v) => ids.push(*v),
            Node::Pair(l, r) => {
                collect(l, ids);
                collect(r, ids);
            }
        }
    }
    let mut ids = Vec::new();
    collect(&root, &mut ids);
    let n = ids.len();
    let mut seen = vec![false; n];
    for &v in &ids {
        if v >= n {
            return Err(TreeParseError::VertexIdGap { expected: n, found: v });
        }
        if seen[v] {
            return Err(TreeParseError::DuplicateVertex(v));
        }
        seen[v] = true;
    }

    if n == 1 {
        return Ok(single_leaf_tree());
    }

    // Build nodes; the top-level pair becomes a single edge, inner pairs
    // become internal nodes.
    struct Builder {
        adj: Vec<Vec<usize>>,
        leaf_vertex: Vec<Option<usize>>,
        edges: Vec<(usize, usize)>,
    }
    impl Builder {
        fn build(&mut self, node: &Node) -> usize {
            match node {
                Node::Leaf(v) => {
                    self.adj.push(Vec::new());
                    self.leaf_vertex.push(Some(*v));
                    self.adj.len() - 1
                }
                Node::Pair(l, r) => {
                    let a = self.build(l);
                    let b = self.build(r);
                    self.adj.push(Vec::new());
                    self.leaf_vertex.push(None);
                    let w = self.adj.len() - 1;
                    self.adj[w].push(a);
                    self.adj[a].push(w);
                    self.adj[w].push(b);
                    self.adj[b].push(w);
                    self.edges.push((a.min(w), a.max(w)));
                    self.edges.push((b.min(w), b.max(w)));
                    w
                }
            }
        }
    }
    let Node::Pair(left, right) = root else {
        return Err(TreeParseError::Expected(0, "a pair at top level for n >= 2"));
    };
    let mut b = Builder { adj: Vec::new(), leaf_vertex: Vec::new(), edges: Vec::new() };
    let r1 = b.build(&left);
    let r2 = b.build(&right);
    b.adj[r1].push(r2);
    b.adj[r2].push(r1);
    b.edges.push((r1.min(r2), r1.max(r2)));
    Ok(DecompositionTree::from_parts(n, b.adj.len(), &b.edges, b.leaf_vertex)?)
}

// ---------------------------------------------------------------------------
// Rooting (used by the DP solver)

/// `t` rooted by subdividing its edge 0: a binary tree whose leaves carry
/// the graph vertices and whose every node knows its vertex set.
pub struct RootedTree {
    pub root: usize,
    /// Children before parents.
    pub post_order: Vec<usize>,
    pub children: Vec<Option<(usize, usize)>>,
    pub leaf_vertex: Vec<Option<usize>>,
    /// Graph vertices below each node.
    pub vertices: Vec<VertexSet>,
}

impl DecompositionTree {
    /// Roots the tree at a fresh node subdividing edge 0. Requires n ≥ 2.
    pub fn rooted(&self) -> RootedTree {
        assert!(self.n >= 2, "rooting needs at least one edge");
        let edges = self.edges();
        let (a, b) = edges[0];
        let nodes = self.adj.len();
        let root = nodes;
        let mut children = vec![None; nodes + 1];
        let mut leaf_vertex = self.leaf_vertex.clone();
        leaf_vertex.push(None);
        children[root] = Some((a.min(b), a.max(b)));

        // Orient every original node away from the root edge.
        let mut post_order = Vec::with_capacity(nodes + 1);
        let mut stack = vec![(a, b, false), (b, a, false)];
        while let Some((w, parent, expanded)) = stack.pop() {
            if expanded {
                post_order.push(w);
                continue;
            }
            stack.push((w, parent, true));
            let kids: Vec<usize> =
                self.adj[w].iter().copied().filter(|&x| x != parent).collect();
            if !kids.is_empty() {
                debug_assert_eq!(kids.len(), 2);
                children[w] = Some((kids[0], kids[1]));
                stack.push((kids[0], w, false));
                stack.push((kids[1], w, false));
            }
        }
        post_order.push(root);

        let mut vertices = vec![VertexSet::empty(self.n); nodes + 1];
        for &w in &post_order {
            if let Some(v) = leaf_vertex[w] {
                vertices[w].insert(v);
            } else if let Some((x, y)) = children[w] {
                let union = vertices[x].union(&vertices[y]);
                vertices[w] = union;
            }
        }
        debug_assert_eq!(vertices[root].count(), self.n);
        RootedTree { root, post_order, children, leaf_vertex, vertices }
    }
}
