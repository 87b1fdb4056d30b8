//! Cut functions of a single bipartition {A, Ā}: the number of crossing
//! edges, the log-size of the union-closed cross-neighborhood family, the
//! VC dimension of that family, and a greedy private-neighbor lower bound.
//!
//! The family `{ N(X) ∩ Ā : X ⊆ A }` is exactly the union closure of the
//! rows `{ N(v) ∩ Ā : v ∈ A }` together with ∅, so it is enumerated by a
//! breadth-first closure rather than by walking all 2^|A| subsets.

use crate::bitset::VertexSet;
use crate::graph::Graph;
use num_bigint::BigUint;
use std::collections::HashSet;

/// Default bound on enumerated family size (and class counts downstream).
pub const DEFAULT_CAP: usize = 1 << 20;
/// Default node budget for the VC branch-and-bound.
pub const DEFAULT_VC_LIMIT: usize = 1_000_000;

/// Number of edges with one endpoint in `a` and the other outside.
pub fn cut_car(g: &Graph, a: &VertexSet) -> usize {
    debug_assert_eq!(a.universe(), g.n());
    let comp = a.complement();
    a.iter().map(|v| g.neighbors(v).intersection_count(&comp)).sum()
}

/// Distinct nonzero cross-neighborhood rows `N(v) ∩ Ā` for `v ∈ a`,
/// in ascending-vertex discovery order.
fn cross_rows(g: &Graph, a: &VertexSet) -> Vec<VertexSet> {
    let comp = a.complement();
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for v in a.iter() {
        let row = g.neighbors(v).intersection(&comp);
        if !row.is_empty() && seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    rows
}

/// Result of a capped family enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyEnumeration {
    /// The full family, in deterministic breadth-first discovery order
    /// (∅ first).
    Complete(Vec<VertexSet>),
    /// The family has strictly more than `seen` members; `seen` = cap.
    Capped { seen: usize },
}

/// Enumerates `{ N(X) ∩ Ā : X ⊆ A }` by union closure from {∅}.
///
/// Stops and reports `Capped` as soon as the member count would exceed
/// `cap`; the cap is a signal, not an error.
pub fn enumerate_union_family(g: &Graph, a: &VertexSet, cap: usize) -> FamilyEnumeration {
    assert!(cap >= 1, "cap must be at least 1");
    debug_assert_eq!(a.universe(), g.n());
    let rows = cross_rows(g, a);
    let n = g.n();

    let mut members: HashSet<VertexSet> = HashSet::new();
    let mut order: Vec<VertexSet> = Vec::new();
    members.insert(VertexSet::empty(n));
    order.push(VertexSet::empty(n));

    let mut scratch = VertexSet::empty(n);
    let mut i = 0;
    while i < order.len() {
        for row in &rows {
            scratch.copy_from(&order[i]);
            scratch.union_with(row);
            if !members.contains(&scratch) {
                if members.len() + 1 > cap {
                    return FamilyEnumeration::Capped { seen: members.len() };
                }
                members.insert(scratch.clone());
                order.push(scratch.clone());
            }
        }
        i += 1;
    }
    FamilyEnumeration::Complete(order)
}

/// cut-bool of one cut: log2 of the family size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutBool {
    Exact { family_size: u64, log2: f64 },
    /// Enumeration hit the cap; the family has more than `seen` members.
    Capped { seen: usize },
}

impl CutBool {
    pub fn exact_log2(&self) -> Option<f64> {
        match self {
            CutBool::Exact { log2, .. } => Some(*log2),
            CutBool::Capped { .. } => None,
        }
    }
}

/// log2 of the exact union-family size, or a cap signal.
///
/// 0 when `a` is empty or has no cross edges (the family is {∅}).
pub fn cut_bool_exact(g: &Graph, a: &VertexSet, cap: usize) -> CutBool {
    match enumerate_union_family(g, a, cap) {
        FamilyEnumeration::Complete(fam) => {
            let family_size = fam.len() as u64;
            CutBool::Exact { family_size, log2: (family_size as f64).log2() }
        }
        FamilyEnumeration::Capped { seen } => CutBool::Capped { seen },
    }
}

/// VC dimension search result; `exact = false` means the node budget ran out
/// and `value` is only a best-found lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VcResult {
    pub value: usize,
    pub exact: bool,
}

/// Maximum permutation submatrix of the cross adjacency matrix: the largest
/// k with rows v1..vk ∈ A and distinct columns u1..uk ∈ Ā such that
/// uj ∈ N(vi) ⇔ i = j. Equals the VC dimension of the union-closed
/// cross-neighborhood family.
///
/// Branch-and-bound on the lowest surviving row, seeded with the greedy
/// private-pair bound; `limit` is a node budget.
pub fn vc_exact(g: &Graph, a: &VertexSet, limit: usize) -> VcResult {
    debug_assert_eq!(a.universe(), g.n());
    let comp = a.complement();
    let n = g.n();

    // Rows with no cross edge can never be picked.
    let mut avail_rows = VertexSet::empty(n);
    for v in a.iter() {
        if g.neighbors(v).intersects(&comp) {
            avail_rows.insert(v);
        }
    }
    let avail_cols = comp;

    let (s, _) = greedy_private_pairs(g, a);
    let mut search = VcSearch { g, best: s.count(), budget: limit, exhausted: false };
    search.branch(&avail_rows, &avail_cols, 0);
    VcResult { value: search.best, exact: !search.exhausted }
}

struct VcSearch<'a> {
    g: &'a Graph,
    best: usize,
    budget: usize,
    exhausted: bool,
}

impl VcSearch<'_> {
    fn branch(&mut self, rows: &VertexSet, cols: &VertexSet, chosen: usize) {
        if self.budget == 0 {
            self.exhausted = true;
            return;
        }
        self.budget -= 1;
        if chosen > self.best {
            self.best = chosen;
        }
        // Rows that still have a selectable column.
        let mut live_rows = 0;
        let mut first_live: Option<usize> = None;
        for v in rows.iter() {
            if self.g.neighbors(v).intersects(cols) {
                live_rows += 1;
                if first_live.is_none() {
                    first_live = Some(v);
                }
            }
        }
        let Some(r) = first_live else { return };
        if chosen + live_rows.min(cols.count()) <= self.best {
            return; // cannot beat the incumbent
        }

        // Include row r with each of its available columns: picking (r, u)
        // removes every row seeing u and every column seen by r.
        let r_cols = self.g.neighbors(r).intersection(cols);
        for u in r_cols.iter() {
            let mut nrows = rows.difference(self.g.neighbors(u));
            nrows.remove(r);
            let mut ncols = cols.difference(self.g.neighbors(r));
            ncols.remove(u);
            self.branch(&nrows, &ncols, chosen + 1);
            if self.exhausted {
                return;
            }
        }
        // Exclude row r entirely.
        let mut nrows = rows.clone();
        nrows.remove(r);
        self.branch(&nrows, cols, chosen);
    }
}

/// Greedy private-neighbor pairs: repeatedly pick the lexicographically
/// smallest surviving cut edge (v, u), put v in S and u in S′, and delete
/// N(v) ∩ Ā and N(u) ∩ A from further consideration.
///
/// The output is a permutation submatrix (each u ∈ S′ sees exactly its
/// partner inside S), so |S| is a VC — and hence cut-bool — lower bound;
/// for max degree d each step deletes at most 2d² cut edges, giving
/// |S| ≥ cut_car / (2d²).
pub fn greedy_private_pairs(g: &Graph, a: &VertexSet) -> (VertexSet, VertexSet) {
    debug_assert_eq!(a.universe(), g.n());
    let n = g.n();
    let mut avail_a = a.clone();
    let mut avail_b = a.complement();
    let mut s = VertexSet::empty(n);
    let mut s_prime = VertexSet::empty(n);

    loop {
        let mut picked = None;
        for v in avail_a.iter() {
            let cand = g.neighbors(v).intersection(&avail_b);
            if let Some(u) = cand.first() {
                picked = Some((v, u));
                break;
            }
        }
        let Some((v, u)) = picked else { break };
        s.insert(v);
        s_prime.insert(u);
        // v ∈ N(u) and u ∈ N(v), so both leave the pool here too.
        avail_b = avail_b.difference(g.neighbors(v));
        avail_a = avail_a.difference(g.neighbors(u));
    }
    debug_assert_eq!(s.count(), s_prime.count());
    (s, s_prime)
}

/// log2 of a positive big integer, accurate to f64 precision.
fn log2_biguint(x: &BigUint) -> f64 {
    use num_bigint::ToBigUint;
    debug_assert!(*x > 0u32.to_biguint().unwrap());
    let bits = x.bits();
    if bits <= 53 {
        let mut v = 0u64;
        for (i, d) in x.to_u64_digits().iter().enumerate() {
            v |= d << (64 * i); // at most one digit when bits ≤ 53
        }
        (v as f64).log2()
    } else {
        let top: BigUint = x >> (bits - 53);
        let t = top.to_u64_digits()[0];
        (bits - 53) as f64 + (t as f64).log2()
    }
}

/// Sauer–Shelah bound: log2(Σ_{i=0}^{vc} C(m, i)), an upper bound on the
/// log-size of any family of subsets of an m-element set with VC dimension
/// at most vc. The sum is computed in exact integer arithmetic.
pub fn sauer_upper_bound(vc: usize, m: usize) -> f64 {
    let vc = vc.min(m);
    let mut sum = BigUint::from(1u32); // C(m, 0)
    let mut binom = BigUint::from(1u32);
    for i in 0..vc {
        // C(m, i+1) = C(m, i)·(m−i)/(i+1)
        binom = binom * BigUint::from(m - i) / BigUint::from(i + 1);
        sum += &binom;
    }
    log2_biguint(&sum)
}

/// All cut-value statistics of one cut, as reported on CSV rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CutStats {
    pub n: usize,
    pub size_a: usize,
    pub size_complement: usize,
    pub cut_car: usize,
    /// None when the enumeration cap was hit.
    pub family_size: Option<u64>,
    pub cutbool_exact: Option<f64>,
    /// Greedy private-pair count.
    pub vc_lower: usize,
    /// None when the branch-and-bound budget ran out.
    pub vc_exact: Option<usize>,
    pub cutbool_lower: usize,
    pub cutbool_upper: f64,
}

/// Computes every cut statistic of `{a, ā}` under the given enumeration cap
/// and VC node budget.
pub fn cut_stats(g: &Graph, a: &VertexSet, cap: usize, limit: usize) -> CutStats {
    let size_a = a.count();
    let size_complement = g.n() - size_a;
    let car = cut_car(g, a);
    let (family_size, cutbool_exact) = match cut_bool_exact(g, a, cap) {
        CutBool::Exact { family_size, log2 } => (Some(family_size), Some(log2)),
        CutBool::Capped { .. } => (None, None),
    };
    let (s, _) = greedy_private_pairs(g, a);
    let vc_lower = s.count();
    let vc = vc_exact(g, a, limit);
    let vc_exact_val = if vc.exact { Some(vc.value) } else { None };

    let cutbool_lower = vc_lower;
    let mut cutbool_upper = size_a.min(size_complement) as f64;
    if let Some(k) = vc_exact_val {
        cutbool_upper = cutbool_upper.min(sauer_upper_bound(k, size_complement));
    }

    CutStats {
        n: g.n(),
        size_a,
        size_complement,
        cut_car: car,
        family_size,
        cutbool_exact,
        vc_lower,
        vc_exact: vc_exact_val,
        cutbool_lower,
        cutbool_upper,
    }
}

impl CutStats {
    pub fn csv_header() -> &'static str {
        "n,size_a,cut_car,family_size,cutbool_exact,vc_lower,vc_exact,cutbool_lower,cutbool_upper"
    }

    /// One CSV row; optional fields are empty when their cap/limit was hit.
    pub fn csv_row(&self) -> String {
        let opt_u = |x: &Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let opt_f = |x: &Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.size_a,
            self.cut_car,
            opt_u(&self.family_size),
            opt_f(&self.cutbool_exact),
            self.vc_lower,
            self.vc_exact.map(|v| v.to_string()).unwrap_or_default(),
            self.cutbool_lower,
            self.cutbool_upper,
        )
    }

    /// Re-asserts the inequality chain on live data. `max_degree` is the max
    /// degree of the graph the cut came from. Errors name the violated
    /// inequality; all comparisons allow f64 slack on exact-log values.
    pub fn check_chain(&self, max_degree: usize) -> Result<(), String> {
        const EPS: f64 = 1e-9;
        let n = self.n as f64;
        if let (Some(bw), Some(fs)) = (self.cutbool_exact, self.family_size) {
            if (bw - (fs as f64).log2()).abs() > EPS {
                return Err(format!("cutbool_exact {bw} != log2(family_size {fs})"));
            }
            if (self.vc_lower as f64) > bw + EPS {
                return Err(format!("greedy bound {} exceeds cut-bool {bw}", self.vc_lower));
            }
            if bw > self.size_a.min(self.size_complement) as f64 + EPS {
                return Err(format!("cut-bool {bw} exceeds min side size"));
            }
            if bw + EPS < self.cutbool_lower as f64 || bw > self.cutbool_upper + EPS {
                return Err(format!(
                    "cut-bool {bw} outside [{}, {}]",
                    self.cutbool_lower, self.cutbool_upper
                ));
            }
            let dd = 2 * max_degree * max_degree;
            if (dd as f64) * bw + EPS < self.cut_car as f64 {
                return Err(format!(
                    "degree chain violated: 2d²·{bw} < cut_car {}",
                    self.cut_car
                ));
            }
            if let Some(vc) = self.vc_exact {
                if self.vc_lower > vc {
                    return Err(format!("vc_lower {} exceeds vc_exact {vc}", self.vc_lower));
                }
                if (vc as f64) > bw + EPS {
                    return Err(format!("vc_exact {vc} exceeds cut-bool {bw}"));
                }
                if vc >= 1 && bw > (vc as f64) * n.log2() + EPS {
                    return Err(format!("cut-bool {bw} exceeds vc·log2(n) = {vc}·log2({n})"));
                }
                let sauer = sauer_upper_bound(vc, self.size_complement);
                if bw > sauer + EPS {
                    return Err(format!("cut-bool {bw} exceeds Sauer bound {sauer}"));
                }
            }
        }
        Ok(())
    }
}
