//! Vertex-subset optimization via neighbor-equivalence dynamic programming.
//!
//! A problem is given by two finite-or-cofinite sets of naturals σ and ρ: a
//! set X is feasible when every vertex v has |N(v) ∩ X| ∈ σ if v ∈ X and
//! ∈ ρ otherwise. Neighbor counts only matter truncated at the problem's
//! level d, so subsets of one cut side collapse into equivalence classes
//! (same truncated count at every vertex across the cut). The solver runs a
//! bottom-up DP over a rooted decomposition tree whose states are pairs
//! (class of X inside the subtree, expected class of X outside), and
//! recovers a witness by back-pointers. A 2^n brute-force oracle provides
//! independent validation on small graphs.

use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::tree::DecompositionTree;
use std::collections::HashMap;
use thiserror::Error;

// ---------------------------------------------------------------------------
// Finite / cofinite subsets of ℕ

/// A finite or cofinite set of natural numbers. `elements` lists the members
/// when finite and the non-members when cofinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofiniteSet {
    cofinite: bool,
    elements: Vec<u32>, // sorted, deduplicated
}

impl CofiniteSet {
    pub fn finite<I: IntoIterator<Item = u32>>(members: I) -> Self {
        let mut elements: Vec<u32> = members.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        CofiniteSet { cofinite: false, elements }
    }

    /// All naturals except the given ones.
    pub fn cofinite_excluding<I: IntoIterator<Item = u32>>(non_members: I) -> Self {
        let mut elements: Vec<u32> = non_members.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        CofiniteSet { cofinite: true, elements }
    }

    pub fn nat() -> Self {
        CofiniteSet::cofinite_excluding([])
    }

    /// {p, p+1, p+2, ...}
    pub fn at_least(p: u32) -> Self {
        CofiniteSet::cofinite_excluding(0..p)
    }

    /// {0, 1, .., p}
    pub fn up_to(p: u32) -> Self {
        CofiniteSet::finite(0..=p)
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        let listed = x <= u32::MAX as usize && self.elements.binary_search(&(x as u32)).is_ok();
        listed != self.cofinite
    }

    /// The count-truncation level sufficient to decide membership:
    /// 1 + min(max member, max non-member), where the infinite side
    /// contributes +∞, and ℕ itself has level 0. `None` for the empty set,
    /// which admits no member counts at all.
    pub fn truncation_level(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        match self.elements.last() {
            None => Some(0), // cofinite with nothing excluded: ℕ
            // Finite: max member is listed, complement is unbounded.
            // Cofinite: max non-member is listed, members are unbounded.
            Some(&m) => Some(1 + m as usize),
        }
    }
}

impl std::fmt::Display for CofiniteSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.cofinite {
            write!(f, "cofinite{{")?;
        } else {
            write!(f, "{{")?;
        }
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Decides `true count ∈ μ` from a count truncated at `d`, valid whenever
/// `d ≥ truncation_level(μ)`: below d the truncated count is the true count;
/// at d the true count is ≥ d, beyond every listed element of μ, so the
/// answer is μ's cofinite tail.
pub fn membership_truncated(count_truncated: usize, d: usize, mu: &CofiniteSet) -> bool {
    debug_assert!(count_truncated <= d);
    debug_assert!(mu.truncation_level().is_some_and(|l| l <= d));
    if count_truncated < d {
        mu.contains(count_truncated)
    } else {
        mu.is_cofinite()
    }
}

// ---------------------------------------------------------------------------
// Problems

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("sigma is the empty set; no vertex could ever be in X")]
    EmptySigma,
    #[error("rho is the empty set; no vertex could ever be outside X")]
    EmptyRho,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemParseError {
    #[error("unknown problem {0:?}; expected mis, mds, pdom:<p>, pbdeg:<p>, or sigma=..,rho=..,dir=..")]
    Unknown(String),
    #[error("bad parameter in {0:?}")]
    BadParameter(String),
    #[error("bad set spec {0:?}; expected {{a,b,c}} or cofinite{{a,b,c}}")]
    BadSetSpec(String),
    #[error("bad direction {0:?}; expected min or max")]
    BadDirection(String),
    #[error(transparent)]
    Invalid(#[from] ProblemError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRhoProblem {
    pub sigma: CofiniteSet,
    pub rho: CofiniteSet,
    pub direction: Direction,
}

impl SigmaRhoProblem {
    pub fn new(
        sigma: CofiniteSet,
        rho: CofiniteSet,
        direction: Direction,
    ) -> Result<Self, ProblemError> {
        if sigma.is_empty() {
            return Err(ProblemError::EmptySigma);
        }
        if rho.is_empty() {
            return Err(ProblemError::EmptyRho);
        }
        Ok(SigmaRhoProblem { sigma, rho, direction })
    }

    pub fn max_independent_set() -> Self {
        SigmaRhoProblem::new(CofiniteSet::finite([0]), CofiniteSet::nat(), Direction::Maximize)
            .unwrap()
    }

    pub fn min_dominating_set() -> Self {
        SigmaRhoProblem::new(CofiniteSet::nat(), CofiniteSet::at_least(1), Direction::Minimize)
            .unwrap()
    }

    pub fn min_p_dominating(p: u32) -> Self {
        SigmaRhoProblem::new(CofiniteSet::nat(), CofiniteSet::at_least(p), Direction::Minimize)
            .unwrap()
    }

    pub fn max_bounded_degree(p: u32) -> Self {
        SigmaRhoProblem::new(CofiniteSet::up_to(p), CofiniteSet::nat(), Direction::Maximize)
            .unwrap()
    }

    /// Effective truncation level: max(1, level(σ), level(ρ)). Level 0 would
    /// collapse every class and is only correct when both sets are ℕ, so the
    /// DP always truncates at 1 or above.
    pub fn d_eff(&self) -> usize {
        let ds = self.sigma.truncation_level().expect("validated nonempty");
        let dr = self.rho.truncation_level().expect("validated nonempty");
        ds.max(dr).max(1)
    }

    /// Named fixtures (`mis`, `mds`, `pdom:p`, `pbdeg:p`) or the explicit
    /// form `sigma=<spec>,rho=<spec>,dir=<min|max>` with `<spec>` either
    /// `{a,b,c}` or `cofinite{a,b,c}`.
    pub fn parse(text: &str) -> Result<Self, ProblemParseError> {
        let text = text.trim();
        match text {
            "mis" => return Ok(Self::max_independent_set()),
            "mds" => return Ok(Self::min_dominating_set()),
            _ => {}
        }
        if let Some(p) = text.strip_prefix("pdom:") {
            let p: u32 =
                p.parse().map_err(|_| ProblemParseError::BadParameter(text.to_string()))?;
            return Ok(Self::min_p_dominating(p));
        }
        if let Some(p) = text.strip_prefix("pbdeg:") {
            let p: u32 =
                p.parse().map_err(|_| ProblemParseError::BadParameter(text.to_string()))?;
            return Ok(Self::max_bounded_degree(p));
        }
        let rest = text
            .strip_prefix("sigma=")
            .ok_or_else(|| ProblemParseError::Unknown(text.to_string()))?;
        let (sigma, rest) = parse_set_spec(rest)?;
        let rest = rest
            .strip_prefix(",rho=")
            .ok_or_else(|| ProblemParseError::Unknown(text.to_string()))?;
        let (rho, rest) = parse_set_spec(rest)?;
        let dir = rest
            .strip_prefix(",dir=")
            .ok_or_else(|| ProblemParseError::Unknown(text.to_string()))?;
        let direction = match dir {
            "min" => Direction::Minimize,
            "max" => Direction::Maximize,
            other => return Err(ProblemParseError::BadDirection(other.to_string())),
        };
        Ok(SigmaRhoProblem::new(sigma, rho, direction)?)
    }
}

/// Parses `{a,b,c}` or `cofinite{a,b,c}` off the front of `text`; returns
/// the set and the remaining input.
fn parse_set_spec(text: &str) -> Result<(CofiniteSet, &str), ProblemParseError> {
    let (cofinite, rest) = match text.strip_prefix("cofinite") {
        Some(r) => (true, r),
        None => (false, text),
    };
    let rest = rest
        .strip_prefix('{')
        .ok_or_else(|| ProblemParseError::BadSetSpec(text.to_string()))?;
    let end = rest
        .find('}')
        .ok_or_else(|| ProblemParseError::BadSetSpec(text.to_string()))?;
    let body = &rest[..end];
    let mut elems = Vec::new();
    if !body.is_empty() {
        for tok in body.split(',') {
            let v: u32 = tok
                .trim()
                .parse()
                .map_err(|_| ProblemParseError::BadSetSpec(text.to_string()))?;
            elems.push(v);
        }
    }
    let set = if cofinite {
        CofiniteSet::cofinite_excluding(elems)
    } else {
        CofiniteSet::finite(elems)
    };
    Ok((set, &rest[end + 1..]))
}

/// Direct, untruncated definition check: is `x` a (σ,ρ)-set of `g`?
pub fn is_sigma_rho_set(g: &Graph, prob: &SigmaRhoProblem, x: &VertexSet) -> bool {
    (0..g.n()).all(|v| {
        let cnt = g.neighbors(v).intersection_count(x);
        if x.contains(v) {
            prob.sigma.contains(cnt)
        } else {
            prob.rho.contains(cnt)
        }
    })
}

// ---------------------------------------------------------------------------
// Neighbor-equivalence classes

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("class count exceeded cap {cap} at the cut with side of {side_size} vertices")]
    CapExceeded { cap: usize, side_size: usize },
}

/// Equivalence classes of subsets of one cut side: X ≡ Y iff every vertex
/// across the cut has the same neighbor count into X and Y, truncated at d.
///
/// Built by breadth-first closure from ∅, extending each representative by
/// one vertex at a time; signatures are monotone coordinate-wise under
/// element addition, so for d ≥ 1 the closure reaches every signature any
/// subset realizes. Representatives are the first members discovered, with
/// extensions tried in ascending vertex order.
#[derive(Debug)]
pub struct ClassIndex {
    side: VertexSet,
    across: Vec<usize>,
    d: usize,
    reps: Vec<VertexSet>,
    sig_map: HashMap<Vec<u8>, u32>,
}

impl ClassIndex {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, class: u32) -> &VertexSet {
        &self.reps[class as usize]
    }

    pub fn side(&self) -> &VertexSet {
        &self.side
    }

    fn signature(&self, g: &Graph, x: &VertexSet) -> Vec<u8> {
        self.across
            .iter()
            .map(|&u| g.neighbors(u).intersection_count(x).min(self.d) as u8)
            .collect()
    }

    /// The class of `X ⊆ side`. Every realizable signature is indexed; a
    /// miss means the index and graph disagree and is a hard failure.
    pub fn class_of(&self, g: &Graph, x: &VertexSet) -> u32 {
        debug_assert!(x.is_subset_of(&self.side));
        let sig = self.signature(g, x);
        *self
            .sig_map
            .get(&sig)
            .expect("signature not indexed: class index does not match this graph")
    }
}

/// Builds the class index of `side` at truncation level `d`, failing softly
/// when the class count would exceed `cap`.
pub fn build_class_index(
    g: &Graph,
    side: &VertexSet,
    d: usize,
    cap: usize,
) -> Result<ClassIndex, SolveError> {
    assert!(cap >= 1);
    assert!(d <= u8::MAX as usize, "truncation level must fit a byte");
    let n = g.n();
    let across: Vec<usize> = side.complement().iter().collect();
    let across_pos: HashMap<usize, usize> =
        across.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    let empty_sig = vec![0u8; across.len()];
    let mut sig_map = HashMap::new();
    sig_map.insert(empty_sig.clone(), 0u32);
    let mut reps = vec![VertexSet::empty(n)];
    let mut sigs = vec![empty_sig];

    let mut i = 0;
    while i < reps.len() {
        let members: Vec<usize> = side.difference(&reps[i]).iter().collect();
        for v in members {
            // Incremental signature update: v bumps each unsaturated
            // across-neighbor coordinate by one.
            let mut sig = sigs[i].clone();
            for u in g.neighbors(v).iter() {
                if let Some(&pos) = across_pos.get(&u) {
                    if (sig[pos] as usize) < d {
                        sig[pos] += 1;
                    }
                }
            }
            if !sig_map.contains_key(&sig) {
                if reps.len() + 1 > cap {
                    return Err(SolveError::CapExceeded { cap, side_size: side.count() });
                }
                let mut rep = reps[i].clone();
                rep.insert(v);
                sig_map.insert(sig.clone(), reps.len() as u32);
                reps.push(rep);
                sigs.push(sig);
            }
        }
        i += 1;
    }
    Ok(ClassIndex { side: side.clone(), across, d, reps, sig_map })
}

// ---------------------------------------------------------------------------
// The DP

/// Outcome of an exact solve: the optimum with a witness, or proof by
/// exhaustion of the state space that no (σ,ρ)-set exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Optimal { size: usize, witness: VertexSet },
    Infeasible,
}

/// Per-node diagnostics: how many vertices below the node and how many
/// equivalence classes on each side of its cut.
#[derive(Debug, Clone)]
pub struct NodeStats {
    pub subtree_size: usize,
    pub inner_classes: usize,
    pub outer_classes: usize,
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Leaf { take: bool },
    Join { a: u32, b: u32 },
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    size: usize,
    back: Back,
}

struct Table {
    out_count: usize,
    cells: Vec<Option<Entry>>,
}

impl Table {
    fn new(in_count: usize, out_count: usize) -> Table {
        Table { out_count, cells: vec![None; in_count * out_count] }
    }

    fn get(&self, i: u32, o: u32) -> Option<Entry> {
        self.cells[i as usize * self.out_count + o as usize]
    }

    fn offer(&mut self, i: u32, o: u32, cand: Entry, dir: Direction) {
        let cell = &mut self.cells[i as usize * self.out_count + o as usize];
        let better = match (*cell, dir) {
            (None, _) => true,
            (Some(cur), Direction::Minimize) => cand.size < cur.size,
            (Some(cur), Direction::Maximize) => cand.size > cur.size,
        };
        if better {
            *cell = Some(cand);
        }
    }
}

/// Solves the (σ,ρ) problem on `g` over decomposition tree `t` exactly.
/// `cap` bounds the class count at any cut; exceeding it aborts with a
/// diagnostic naming the offending cut.
pub fn solve_sigma_rho(
    g: &Graph,
    t: &DecompositionTree,
    prob: &SigmaRhoProblem,
    cap: usize,
) -> Result<Solution, SolveError> {
    solve_with_truncation(g, t, prob, cap, prob.d_eff())
}

/// As [`solve_sigma_rho`] but also reporting per-node class counts.
pub fn solve_sigma_rho_detailed(
    g: &Graph,
    t: &DecompositionTree,
    prob: &SigmaRhoProblem,
    cap: usize,
) -> Result<(Solution, Vec<NodeStats>), SolveError> {
    solve_inner(g, t, prob, cap, prob.d_eff())
}

/// Solves with an explicit truncation level `d ≥ d_eff`. Any refinement of
/// the truncation yields the same optimum; this entry point exists to make
/// that property testable.
pub fn solve_with_truncation(
    g: &Graph,
    t: &DecompositionTree,
    prob: &SigmaRhoProblem,
    cap: usize,
    d: usize,
) -> Result<Solution, SolveError> {
    solve_inner(g, t, prob, cap, d).map(|(s, _)| s)
}

fn solve_inner(
    g: &Graph,
    t: &DecompositionTree,
    prob: &SigmaRhoProblem,
    cap: usize,
    d: usize,
) -> Result<(Solution, Vec<NodeStats>), SolveError> {
    let n = g.n();
    assert_eq!(t.n(), n, "tree and graph disagree on the vertex count");
    assert!(d >= prob.d_eff(), "truncation below the problem's level is unsound");

    if n == 1 {
        // Single vertex: no cuts, check both candidate sets directly.
        let take = prob.sigma.contains(0);
        let leave = prob.rho.contains(0);
        let sol = match (take, leave, prob.direction) {
            (true, true, Direction::Minimize) | (false, true, _) => {
                Solution::Optimal { size: 0, witness: VertexSet::empty(1) }
            }
            (true, true, Direction::Maximize) | (true, false, _) => {
                Solution::Optimal { size: 1, witness: VertexSet::full(1) }
            }
            (false, false, _) => Solution::Infeasible,
        };
        return Ok((sol, Vec::new()));
    }

    let rooted = t.rooted();
    let node_count = rooted.children.len();

    // Class indexes for each node's vertex set and its complement.
    let mut inner: Vec<Option<ClassIndex>> = (0..node_count).map(|_| None).collect();
    let mut outer: Vec<Option<ClassIndex>> = (0..node_count).map(|_| None).collect();
    for &w in &rooted.post_order {
        let vw = &rooted.vertices[w];
        inner[w] = Some(build_class_index(g, vw, d, cap)?);
        outer[w] = Some(build_class_index(g, &vw.complement(), d, cap)?);
    }
    let inner = inner.into_iter().map(Option::unwrap).collect::<Vec<_>>();
    let outer = outer.into_iter().map(Option::unwrap).collect::<Vec<_>>();

    let stats: Vec<NodeStats> = (0..node_count)
        .map(|w| NodeStats {
            subtree_size: rooted.vertices[w].count(),
            inner_classes: inner[w].class_count(),
            outer_classes: outer[w].class_count(),
        })
        .collect();

    let mut tables: Vec<Option<Table>> = (0..node_count).map(|_| None).collect();

    for &w in &rooted.post_order {
        let mut table = Table::new(inner[w].class_count(), outer[w].class_count());
        match rooted.children[w] {
            None => {
                let v = rooted.leaf_vertex[w].expect("childless node is a leaf");
                let take_class = inner[w].class_of(g, &VertexSet::singleton(n, v));
                for o in 0..outer[w].class_count() as u32 {
                    let r_out = outer[w].rep(o);
                    let cnt = g.neighbors(v).intersection_count(r_out).min(d);
                    // X = ∅: v is outside, its count comes from outside alone.
                    if membership_truncated(cnt, d, &prob.rho) {
                        table.offer(0, o, Entry { size: 0, back: Back::Leaf { take: false } }, prob.direction);
                    }
                    // X = {v}: v ∉ N(v), so the count is again the outside's.
                    if membership_truncated(cnt, d, &prob.sigma) {
                        table.offer(
                            take_class,
                            o,
                            Entry { size: 1, back: Back::Leaf { take: true } },
                            prob.direction,
                        );
                    }
                }
            }
            Some((a, b)) => {
                let t_a = tables[a].take().expect("post-order: child table ready");
                let t_b = tables[b].take().expect("post-order: child table ready");
                let in_a = inner[a].class_count();
                let in_b = inner[b].class_count();
                let out_w = outer[w].class_count();

                // Hoisted maps. For child a, the outside is X_b ∪ (outside
                // of w); classes compose because truncated counts add across
                // disjoint sides.
                let mut oa_of = vec![0u32; in_b * out_w];
                let mut ob_of = vec![0u32; in_a * out_w];
                for o in 0..out_w {
                    let r_o = outer[w].rep(o as u32);
                    for ib in 0..in_b {
                        let u = inner[b].rep(ib as u32).union(r_o);
                        oa_of[ib * out_w + o] = outer[a].class_of(g, &u);
                    }
                    for ia in 0..in_a {
                        let u = inner[a].rep(ia as u32).union(r_o);
                        ob_of[ia * out_w + o] = outer[b].class_of(g, &u);
                    }
                }
                let mut iw_of = vec![0u32; in_a * in_b];
                for ia in 0..in_a {
                    for ib in 0..in_b {
                        let u = inner[a].rep(ia as u32).union(inner[b].rep(ib as u32));
                        iw_of[ia * in_b + ib] = inner[w].class_of(g, &u);
                    }
                }

                // Combine: for every (inner a, inner b, outer w) with both
                // child entries present, sum the sizes.
                for ia in 0..in_a as u32 {
                    for ib in 0..in_b as u32 {
                        let iw = iw_of[ia as usize * in_b + ib as usize];
                        for o in 0..out_w as u32 {
                            let o_a = oa_of[ib as usize * out_w + o as usize];
                            let Some(ea) = t_a.get(ia, o_a) else { continue };
                            let o_b = ob_of[ia as usize * out_w + o as usize];
                            let Some(eb) = t_b.get(ib, o_b) else { continue };
                            table.offer(
                                iw,
                                o,
                                Entry {
                                    size: ea.size + eb.size,
                                    back: Back::Join { a: ia, b: ib },
                                },
                                prob.direction,
                            );
                        }
                    }
                }
                tables[a] = Some(t_a);
                tables[b] = Some(t_b);
            }
        }
        tables[w] = Some(table);
    }

    // Root: the outside is empty, so its single class is ∅ (index 0).
    let root = rooted.root;
    let root_table = tables[root].as_ref().unwrap();
    debug_assert_eq!(outer[root].class_count(), 1);
    let mut best: Option<(u32, Entry)> = None;
    for i in 0..inner[root].class_count() as u32 {
        if let Some(e) = root_table.get(i, 0) {
            let better = match (&best, prob.direction) {
                (None, _) => true,
                (Some((_, cur)), Direction::Minimize) => e.size < cur.size,
                (Some((_, cur)), Direction::Maximize) => e.size > cur.size,
            };
            if better {
                best = Some((i, e));
            }
        }
    }

    let Some((best_i, best_e)) = best else {
        return Ok((Solution::Infeasible, stats));
    };

    // Witness by back-pointer descent, recomputing outer expectations the
    // same way the combine derived them.
    let mut witness = VertexSet::empty(n);
    let mut stack: Vec<(usize, u32, u32)> = vec![(root, best_i, 0)];
    while let Some((w, i, o)) = stack.pop() {
        let e = tables[w].as_ref().unwrap().get(i, o).expect("back-pointer chain intact");
        match e.back {
            Back::Leaf { take } => {
                if take {
                    let v = rooted.leaf_vertex[w].unwrap();
                    witness.insert(v);
                }
            }
            Back::Join { a: ia, b: ib } => {
                let (a, b) = rooted.children[w].unwrap();
                let r_o = outer[w].rep(o);
                let o_a = outer[a].class_of(g, &inner[b].rep(ib).union(r_o));
                let o_b = outer[b].class_of(g, &inner[a].rep(ia).union(r_o));
                stack.push((a, ia, o_a));
                stack.push((b, ib, o_b));
            }
        }
    }
    debug_assert_eq!(witness.count(), best_e.size);
    debug_assert!(is_sigma_rho_set(g, prob, &witness));
    Ok((Solution::Optimal { size: best_e.size, witness }, stats))
}

// ---------------------------------------------------------------------------
// Brute-force oracle

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("n = {0} exceeds the brute-force bound of 22")]
    TooLarge(usize),
}

/// Exhaustive 2^n scan of the definition; the validation oracle. Ties go to
/// the lexicographically smallest witness.
pub fn brute_force_sigma_rho(
    g: &Graph,
    prob: &SigmaRhoProblem,
) -> Result<Solution, BruteForceError> {
    let n = g.n();
    if n > 22 {
        return Err(BruteForceError::TooLarge(n));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u))
        .collect();
    let sigma_ok: Vec<bool> = (0..=n).map(|c| prob.sigma.contains(c)).collect();
    let rho_ok: Vec<bool> = (0..=n).map(|c| prob.rho.contains(c)).collect();

    let mut best: Option<(usize, u64)> = None;
    for mask in 0u64..1 << n {
        let feasible = (0..n).all(|v| {
            let cnt = (adj[v] & mask).count_ones() as usize;
            if mask >> v & 1 == 1 {
                sigma_ok[cnt]
            } else {
                rho_ok[cnt]
            }
        });
        if !feasible {
            continue;
        }
        let size = mask.count_ones() as usize;
        let better = match (best, prob.direction) {
            (None, _) => true,
            (Some((s, _)), Direction::Minimize) => size < s,
            (Some((s, _)), Direction::Maximize) => size > s,
        };
        if better {
            best = Some((size, mask));
        }
    }
    Ok(match best {
        Some((size, mask)) => Solution::Optimal {
            size,
            witness: VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1)),
        },
        None => Solution::Infeasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::tree::build_random_tree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn truncation_levels() {
        assert_eq!(CofiniteSet::nat().truncation_level(), Some(0));
        assert_eq!(CofiniteSet::finite([0]).truncation_level(), Some(1));
        for p in 0..=5u32 {
            assert_eq!(CofiniteSet::up_to(p).truncation_level(), Some(p as usize + 1));
        }
        assert_eq!(CofiniteSet::at_least(1).truncation_level(), Some(1));
        // Finite {0,2}: largest member 2, complement unbounded.
        assert_eq!(CofiniteSet::finite([0, 2]).truncation_level(), Some(3));
        // Cofinite missing only 1: members unbounded, largest non-member 1.
        assert_eq!(CofiniteSet::cofinite_excluding([1]).truncation_level(), Some(2));
        assert_eq!(CofiniteSet::finite([]).truncation_level(), None);
    }

    #[test]
    fn truncated_membership_matches_direct_membership() {
        let fixtures = [
            CofiniteSet::nat(),
            CofiniteSet::finite([0]),
            CofiniteSet::finite([1]),
            CofiniteSet::finite([0, 1]),
            CofiniteSet::finite([0, 2]),
            CofiniteSet::finite([2, 5]),
            CofiniteSet::at_least(1),
            CofiniteSet::at_least(3),
            CofiniteSet::cofinite_excluding([0, 2]),
            CofiniteSet::up_to(3),
        ];
        for mu in &fixtures {
            let level = mu.truncation_level().unwrap();
            for d in level.max(1)..level.max(1) + 3 {
                for c in 0..10usize {
                    assert_eq!(
                        membership_truncated(c.min(d), d, mu),
                        mu.contains(c),
                        "mu={mu} d={d} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn fixture_truncation_levels() {
        assert_eq!(SigmaRhoProblem::max_independent_set().d_eff(), 1);
        assert_eq!(SigmaRhoProblem::min_dominating_set().d_eff(), 1);
        assert_eq!(SigmaRhoProblem::min_p_dominating(2).d_eff(), 2);
        assert_eq!(SigmaRhoProblem::max_bounded_degree(1).d_eff(), 2);
        // ℕ on both sides still truncates at 1, never 0.
        let all = SigmaRhoProblem::new(CofiniteSet::nat(), CofiniteSet::nat(), Direction::Maximize)
            .unwrap();
        assert_eq!(all.d_eff(), 1);
    }

    #[test]
    fn parse_accepts_named_and_explicit_forms() {
        assert_eq!(SigmaRhoProblem::parse("mis").unwrap(), SigmaRhoProblem::max_independent_set());
        assert_eq!(SigmaRhoProblem::parse("mds").unwrap(), SigmaRhoProblem::min_dominating_set());
        assert_eq!(
            SigmaRhoProblem::parse("pdom:3").unwrap(),
            SigmaRhoProblem::min_p_dominating(3)
        );
        assert_eq!(
            SigmaRhoProblem::parse("pbdeg:2").unwrap(),
            SigmaRhoProblem::max_bounded_degree(2)
        );
        let p = SigmaRhoProblem::parse("sigma={0,2},rho=cofinite{0},dir=min").unwrap();
        assert_eq!(p.sigma, CofiniteSet::finite([0, 2]));
        assert_eq!(p.rho, CofiniteSet::at_least(1));
        assert_eq!(p.direction, Direction::Minimize);
        let q = SigmaRhoProblem::parse("sigma=cofinite{},rho={1},dir=max").unwrap();
        assert_eq!(q.sigma, CofiniteSet::nat());
        assert_eq!(q.direction, Direction::Maximize);
    }

    #[test]
    fn parse_round_trips_through_display() {
        let p = SigmaRhoProblem::parse("sigma={1,3},rho=cofinite{0,2},dir=max").unwrap();
        let text = format!("sigma={},rho={},dir=max", p.sigma, p.rho);
        assert_eq!(SigmaRhoProblem::parse(&text).unwrap(), p);
    }

    #[test]
    fn parse_rejects_malformed_and_empty() {
        assert!(matches!(
            SigmaRhoProblem::parse("mvc"),
            Err(ProblemParseError::Unknown(_))
        ));
        assert!(matches!(
            SigmaRhoProblem::parse("pdom:x"),
            Err(ProblemParseError::BadParameter(_))
        ));
        assert!(matches!(
            SigmaRhoProblem::parse("sigma={a},rho={0},dir=min"),
            Err(ProblemParseError::BadSetSpec(_))
        ));
        assert!(matches!(
            SigmaRhoProblem::parse("sigma={0},rho={0},dir=down"),
            Err(ProblemParseError::BadDirection(_))
        ));
        // Empty sigma: no vertex could ever join X.
        assert!(matches!(
            SigmaRhoProblem::parse("sigma={},rho={0},dir=min"),
            Err(ProblemParseError::Invalid(ProblemError::EmptySigma))
        ));
    }

    // -- class index ---------------------------------------------------------

    #[test]
    fn identical_cross_rows_collapse_to_two_classes() {
        // K_{3,3}: every vertex of one side sees the whole other side, so at
        // d = 1 there are only ∅ and "something".
        let g = Graph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap();
        let side = VertexSet::from_vertices(6, 0..3);
        let idx = build_class_index(&g, &side, 1, 1 << 20).unwrap();
        assert_eq!(idx.class_count(), 2);
    }

    #[test]
    fn matching_classes_form_a_power_set() {
        // Perfect matching: each side vertex has a private across-neighbor,
        // so every subset is its own class: 2^k classes at d = 1.
        for k in 1..=6 {
            let g = Graph::matching(k);
            let side = VertexSet::from_vertices(2 * k, (0..k).map(|i| 2 * i));
            let idx = build_class_index(&g, &side, 1, 1 << 20).unwrap();
            assert_eq!(idx.class_count(), 1 << k);
        }
    }

    #[test]
    fn class_count_matches_exhaustive_signature_enumeration() {
        // Independent oracle: enumerate all subsets of the side and count
        // distinct truncated-signature vectors directly.
        let g = crate::gen::gen_gnp(14, 0.4, 77).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 1..=2usize {
            for _ in 0..5 {
                let side = VertexSet::from_vertices(14, (0..14).filter(|_| rng.random_bool(0.5)));
                let across: Vec<usize> = side.complement().iter().collect();
                let members: Vec<usize> = side.iter().collect();
                let mut sigs = std::collections::HashSet::new();
                for mask in 0u32..1 << members.len() {
                    let x = VertexSet::from_vertices(
                        14,
                        members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v),
                    );
                    let sig: Vec<usize> = across
                        .iter()
                        .map(|&u| g.neighbors(u).intersection_count(&x).min(d))
                        .collect();
                    sigs.insert(sig);
                }
                let idx = build_class_index(&g, &side, d, 1 << 20).unwrap();
                assert_eq!(idx.class_count(), sigs.len(), "side={side:?} d={d}");
            }
        }
    }

    #[test]
    fn class_of_is_consistent_with_representatives() {
        let g = crate::gen::gen_gnp(12, 0.5, 5).unwrap();
        let side = VertexSet::from_vertices(12, 0..6);
        let idx = build_class_index(&g, &side, 2, 1 << 20).unwrap();
        // ∅ is always class 0 and each representative maps to itself.
        assert_eq!(idx.class_of(&g, &VertexSet::empty(12)), 0);
        for c in 0..idx.class_count() as u32 {
            assert_eq!(idx.class_of(&g, &idx.rep(c).clone()), c);
        }
        // Arbitrary subsets land on a class whose representative shares
        // their signature.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = VertexSet::from_vertices(12, side.iter().filter(|_| rng.random_bool(0.5)));
            let c = idx.class_of(&g, &x);
            let rep = idx.rep(c).clone();
            for u in side.complement().iter() {
                assert_eq!(
                    g.neighbors(u).intersection_count(&x).min(2),
                    g.neighbors(u).intersection_count(&rep).min(2)
                );
            }
        }
    }

    #[test]
    fn class_cap_is_reported() {
        let g = Graph::matching(5);
        let side = VertexSet::from_vertices(10, (0..5).map(|i| 2 * i));
        let err = build_class_index(&g, &side, 1, 16).unwrap_err();
        assert_eq!(err, SolveError::CapExceeded { cap: 16, side_size: 5 });
    }

    // -- solver --------------------------------------------------------------

    fn solve_on_random_tree(g: &Graph, prob: &SigmaRhoProblem, seed: u64) -> Solution {
        let t = build_random_tree(g, seed);
        solve_sigma_rho(g, &t, prob, 1 << 20).unwrap()
    }

    #[test]
    fn independent_set_on_c5_is_two() {
        let g = Graph::cycle(5);
        match solve_on_random_tree(&g, &SigmaRhoProblem::max_independent_set(), 1) {
            Solution::Optimal { size, witness } => {
                assert_eq!(size, 2);
                assert!(is_sigma_rho_set(&g, &SigmaRhoProblem::max_independent_set(), &witness));
            }
            Solution::Infeasible => panic!("C5 has independent sets"),
        }
    }

    #[test]
    fn dominating_set_on_p4_is_two() {
        let g = Graph::path(4);
        match solve_on_random_tree(&g, &SigmaRhoProblem::min_dominating_set(), 2) {
            Solution::Optimal { size, .. } => assert_eq!(size, 2),
            Solution::Infeasible => panic!("P4 has dominating sets"),
        }
    }

    #[test]
    fn independent_set_on_k4_is_one() {
        let g = Graph::complete(4);
        match solve_on_random_tree(&g, &SigmaRhoProblem::max_independent_set(), 3) {
            Solution::Optimal { size, .. } => assert_eq!(size, 1),
            Solution::Infeasible => panic!("K4 has independent sets"),
        }
    }

    #[test]
    fn dominating_an_edgeless_graph_takes_every_vertex() {
        // Isolated vertices outside X can never meet ρ = {1,2,...}, so the
        // only dominating set is V itself.
        let g = Graph::empty(6);
        let prob = SigmaRhoProblem::min_dominating_set();
        match solve_on_random_tree(&g, &prob, 4) {
            Solution::Optimal { size, witness } => {
                assert_eq!(size, 6);
                assert_eq!(witness, VertexSet::full(6));
            }
            Solution::Infeasible => panic!("V itself dominates"),
        }
        assert_eq!(
            brute_force_sigma_rho(&g, &prob).unwrap(),
            Solution::Optimal { size: 6, witness: VertexSet::full(6) }
        );
    }

    #[test]
    fn infeasible_instances_are_reported() {
        // Every vertex needs exactly five neighbors in X, impossible on P3.
        let g = Graph::path(3);
        let prob = SigmaRhoProblem::new(
            CofiniteSet::finite([5]),
            CofiniteSet::finite([5]),
            Direction::Minimize,
        )
        .unwrap();
        assert_eq!(solve_on_random_tree(&g, &prob, 5), Solution::Infeasible);
        assert_eq!(brute_force_sigma_rho(&g, &prob).unwrap(), Solution::Infeasible);
    }

    #[test]
    fn single_vertex_graphs_are_handled() {
        let g = Graph::empty(1);
        let t = build_random_tree(&g, 0);
        let mis = SigmaRhoProblem::max_independent_set();
        assert_eq!(
            solve_sigma_rho(&g, &t, &mis, 1 << 20).unwrap(),
            Solution::Optimal { size: 1, witness: VertexSet::full(1) }
        );
        let mds = SigmaRhoProblem::min_dominating_set();
        assert_eq!(
            solve_sigma_rho(&g, &t, &mds, 1 << 20).unwrap(),
            Solution::Optimal { size: 1, witness: VertexSet::full(1) }
        );
        let impossible = SigmaRhoProblem::new(
            CofiniteSet::finite([1]),
            CofiniteSet::finite([1]),
            Direction::Minimize,
        )
        .unwrap();
        assert_eq!(solve_sigma_rho(&g, &t, &impossible, 1 << 20).unwrap(), Solution::Infeasible);
    }

    #[test]
    fn solver_matches_brute_force_on_random_instances() {
        let problems = [
            SigmaRhoProblem::max_independent_set(),
            SigmaRhoProblem::min_dominating_set(),
            SigmaRhoProblem::min_p_dominating(2),
            SigmaRhoProblem::max_bounded_degree(1),
        ];
        let mut checked = 0;
        for (pi, prob) in problems.iter().enumerate() {
            for n in [6usize, 9] {
                for &p in &[0.3, 0.6] {
                    for seed in 0..3u64 {
                        let gseed = 1000 * pi as u64 + 10 * n as u64 + seed;
                        let g = crate::gen::gen_gnp(n, p, gseed).unwrap();
                        let t = build_random_tree(&g, gseed ^ 0xabcd);
                        let got = solve_sigma_rho(&g, &t, prob, 1 << 20).unwrap();
                        let want = brute_force_sigma_rho(&g, prob).unwrap();
                        match (&got, &want) {
                            (
                                Solution::Optimal { size: s1, witness },
                                Solution::Optimal { size: s2, .. },
                            ) => {
                                assert_eq!(s1, s2, "problem {pi} seed {gseed}");
                                assert_eq!(witness.count(), *s1);
                                assert!(is_sigma_rho_set(&g, prob, witness));
                            }
                            (Solution::Infeasible, Solution::Infeasible) => {}
                            _ => panic!("feasibility mismatch: problem {pi} seed {gseed}"),
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert_eq!(checked, 48);
    }

    #[test]
    fn optimum_is_invariant_under_the_tree() {
        let g = crate::gen::gen_gnp(10, 0.4, 21).unwrap();
        let prob = SigmaRhoProblem::min_dominating_set();
        let sizes: Vec<usize> = (0..6u64)
            .map(|seed| match solve_on_random_tree(&g, &prob, seed) {
                Solution::Optimal { size, .. } => size,
                Solution::Infeasible => panic!("dominating sets always exist here"),
            })
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] == w[1]), "sizes: {sizes:?}");
    }

    #[test]
    fn finer_truncation_does_not_change_the_optimum() {
        let g = crate::gen::gen_gnp(9, 0.5, 33).unwrap();
        let t = build_random_tree(&g, 7);
        for prob in [SigmaRhoProblem::min_p_dominating(2), SigmaRhoProblem::max_bounded_degree(1)] {
            let base = solve_sigma_rho(&g, &t, &prob, 1 << 20).unwrap();
            for extra in 1..=2usize {
                let refined =
                    solve_with_truncation(&g, &t, &prob, 1 << 20, prob.d_eff() + extra).unwrap();
                match (&base, &refined) {
                    (Solution::Optimal { size: a, .. }, Solution::Optimal { size: b, .. }) => {
                        assert_eq!(a, b)
                    }
                    (Solution::Infeasible, Solution::Infeasible) => {}
                    _ => panic!("feasibility changed with refinement"),
                }
            }
        }
    }

    #[test]
    fn detailed_solve_reports_class_counts() {
        let g = Graph::cycle(6);
        let t = build_random_tree(&g, 1);
        let (sol, stats) = solve_sigma_rho_detailed(&g, &t, &SigmaRhoProblem::max_independent_set(), 1 << 20)
            .unwrap();
        assert!(matches!(sol, Solution::Optimal { size: 3, .. }));
        // One stats row per rooted node: 2n - 1 after subdividing an edge of
        // the 2n - 2 unrooted nodes.
        assert_eq!(stats.len(), 2 * 6 - 1);
        let root = stats.iter().find(|s| s.subtree_size == 6).unwrap();
        assert_eq!(root.inner_classes, 1);
        assert_eq!(root.outer_classes, 1);
        assert!(stats.iter().all(|s| s.inner_classes >= 1 && s.outer_classes >= 1));
    }

    #[test]
    fn solver_reports_cap_exhaustion() {
        let g = Graph::matching(6);
        let t = build_random_tree(&g, 2);
        let err = solve_sigma_rho(&g, &t, &SigmaRhoProblem::max_independent_set(), 4).unwrap_err();
        assert!(matches!(err, SolveError::CapExceeded { cap: 4, .. }));
    }

    #[test]
    fn brute_force_refuses_large_graphs() {
        let g = Graph::empty(23);
        assert_eq!(
            brute_force_sigma_rho(&g, &SigmaRhoProblem::max_independent_set()).unwrap_err(),
            BruteForceError::TooLarge(23)
        );
    }
}
