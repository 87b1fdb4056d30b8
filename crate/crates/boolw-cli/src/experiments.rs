//! Experiment suites over random graph ensembles.
//!
//! Each command builds its full CSV in memory and returns it together with
//! the summary statistics, so the binary can write it out while tests assert
//! on the numbers directly. Output is byte-deterministic for a fixed
//! configuration: trials draw from per-trial RNG streams (`seed ^ trial`),
//! and rows are emitted in trial order.
//!
//! Statements that hold almost surely on the ensemble are *counted*, never
//! hard failures: a finite sample can legally violate them. Deterministic
//! per-cut inequalities, by contrast, are re-asserted on every record and a
//! violation panics — it would mean the cut values themselves are wrong.

use crate::CliError;
use boolw::bitset::VertexSet;
use boolw::cut::{cut_stats, greedy_private_pairs, sauer_upper_bound};
use boolw::gen::{gen_gnp, gen_random_regular};
use boolw::graph::Graph;
use boolw::tree::{build_greedy_tree, build_random_tree, cut_bool_value, DecompositionTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write;

const EPS: f64 = 1e-9;

/// Every CSV starts with this schema marker.
pub const SCHEMA_LINE: &str = "# schema=1";

/// k_p = ⌈2 ln n / p⌉, the set size at which random cuts stop producing
/// new neighborhood unions.
pub fn kp_of(n: usize, p: f64) -> usize {
    (2.0 * (n as f64).ln() / p).ceil() as usize
}

/// Derives an independent RNG stream for one purpose within a trial, so
/// that e.g. tree construction does not replay the graph's coin flips.
fn substream(trial_seed: u64, tag: u64) -> u64 {
    (trial_seed ^ tag).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn validate_p(p: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::config(format!("p = {p} is not a probability")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Expansion of k_p-sets

pub struct ExpansionReport {
    pub csv: String,
    pub kp: usize,
    pub violations: usize,
}

/// Samples uniform vertex sets S of size k_p in one G(n,p) draw and checks
/// the expansion bound |N(S)| ≥ |S̄| − k_p. Violations are recorded per row
/// and totalled in the trailing comment.
pub fn expansion_check(
    n: usize,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<ExpansionReport, CliError> {
    validate_p(p)?;
    if n < 2 {
        return Err(CliError::config("expansion check needs n ≥ 2"));
    }
    if samples < 1 {
        return Err(CliError::config("samples must be ≥ 1"));
    }
    if p == 0.0 {
        return Err(CliError::config("p = 0 makes k_p infinite"));
    }
    let kp = kp_of(n, p);
    if kp >= n {
        return Err(CliError::config(format!(
            "k_p = {kp} ≥ n = {n}: the expansion bound is vacuous at this size"
        )));
    }
    let g = gen_gnp(n, p, seed).map_err(|e| CliError::config(e.to_string()))?;
    let bound = n as i64 - 2 * kp as i64; // |S̄| − k_p with |S| = k_p

    let mut csv = String::new();
    writeln!(csv, "{SCHEMA_LINE}").unwrap();
    writeln!(csv, "experiment,n,p,kp,seed,trial,neighbors,bound,slack,violation").unwrap();
    let mut violations = 0usize;
    let mut idx: Vec<usize> = (0..n).collect();
    for trial in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial as u64);
        // Uniform k_p-subset by partial Fisher–Yates.
        for i in 0..kp {
            let j = rng.random_range(i..n);
            idx.swap(i, j);
        }
        let s = VertexSet::from_vertices(n, idx[..kp].iter().copied());
        let neighbors = g.neighbors_of_set(&s).count() as i64;
        let slack = neighbors - bound;
        let violation = slack < 0;
        violations += violation as usize;
        writeln!(
            csv,
            "expansion,{n},{p},{kp},{seed},{trial},{neighbors},{bound},{slack},{}",
            violation as u8
        )
        .unwrap();
    }
    writeln!(csv, "# violations={violations}").unwrap();
    Ok(ExpansionReport { csv, kp, violations })
}

// ---------------------------------------------------------------------------
// Width growth on G(n, p)

pub struct GrowthReport {
    pub csv: String,
    pub ceiling_violations: usize,
    /// Trials where the greedy tree's width was no worse than the random one.
    pub greedy_not_worse: usize,
    pub paired_trials: usize,
}

/// Per (n, trial): one random graph, a random tree and a greedy tree; the
/// boolean-width of each (exact value or interval) against the counting
/// ceiling log2(2·Σ_{i≤k_p} C(n,i)). Cuts whose value provably exceeds the
/// ceiling are counted per row.
pub fn gnp_growth(
    grid: &[usize],
    p: f64,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<GrowthReport, CliError> {
    validate_p(p)?;
    if grid.is_empty() {
        return Err(CliError::config("empty n grid"));
    }
    if grid.iter().any(|&n| n < 2) {
        return Err(CliError::config("width growth needs n ≥ 2 throughout the grid"));
    }
    if trials < 1 {
        return Err(CliError::config("trials must be ≥ 1"));
    }
    if p == 0.0 {
        return Err(CliError::config("p = 0 makes k_p infinite"));
    }

    let mut csv = String::new();
    writeln!(csv, "{SCHEMA_LINE}").unwrap();
    writeln!(
        csv,
        "experiment,n,p,kp,ceiling,seed,trial,tree,width_lo,width_hi,exact,ceiling_violations"
    )
    .unwrap();

    let mut total_violations = 0usize;
    let mut greedy_not_worse = 0usize;
    let mut paired = 0usize;
    for &n in grid {
        let kp = kp_of(n, p);
        // The union family of any cut has at most 2·Σ_{i≤k_p} C(n,i)
        // distinct members, so cut-bool stays under 1 + log2 Σ C(n,i).
        let ceiling = 1.0 + sauer_upper_bound(kp, n);
        for trial in 0..trials {
            let trial_seed = seed ^ trial as u64;
            let g = gen_gnp(n, p, trial_seed).map_err(|e| CliError::config(e.to_string()))?;
            let random = build_random_tree(&g, substream(trial_seed, 1));
            let greedy = build_greedy_tree(&g, substream(trial_seed, 2));
            let mut hi_of = [0.0f64; 2];
            for (which, (name, tree)) in
                [("random", &random), ("greedy", &greedy)].into_iter().enumerate()
            {
                let (lo, hi, exact, violations) = tree_width_vs_ceiling(&g, tree, cap, ceiling);
                total_violations += violations;
                hi_of[which] = hi;
                writeln!(
                    csv,
                    "growth,{n},{p},{kp},{ceiling:.6},{seed},{trial},{name},{lo:.6},{hi:.6},{},{violations}",
                    exact as u8
                )
                .unwrap();
            }
            paired += 1;
            if hi_of[1] <= hi_of[0] + EPS {
                greedy_not_worse += 1;
            }
        }
    }
    writeln!(csv, "# ceiling_violations_total={total_violations}").unwrap();
    writeln!(csv, "# greedy_not_worse={greedy_not_worse}/{paired}").unwrap();
    Ok(GrowthReport { csv, ceiling_violations: total_violations, greedy_not_worse, paired_trials: paired })
}

/// Evaluates every cut of `t`, returning the tree's width interval, whether
/// it is exact, and how many cuts provably exceed `ceiling`. An inexact cut
/// counts as a violation only when its *lower* bound already exceeds the
/// ceiling; its upper bound is pessimistic, not a value.
fn tree_width_vs_ceiling(
    g: &Graph,
    t: &DecompositionTree,
    cap: usize,
    ceiling: f64,
) -> (f64, f64, bool, usize) {
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    let mut exact = true;
    let mut violations = 0usize;
    for cut in t.all_cuts() {
        let w = cut_bool_value(g, &cut.side_a, cap);
        lo = lo.max(w.lo);
        hi = hi.max(w.hi);
        exact &= w.is_exact();
        let proven = if w.is_exact() { w.hi } else { w.lo };
        if proven > ceiling + EPS {
            violations += 1;
        }
    }
    (lo, hi, exact, violations)
}

// ---------------------------------------------------------------------------
// Lower-bound certificates on random regular graphs

pub struct RegularReport {
    pub csv: String,
    /// Median certificate per grid entry, in grid order.
    pub medians: Vec<(usize, f64)>,
}

/// Per (n, trial): one random d-regular graph and two heuristic trees; each
/// tree contributes its most balanced cut, whose cut_car/(2d²) is a
/// boolean-width lower-bound certificate. The greedy private-pair bound is
/// re-asserted exactly on every recorded cut.
pub fn regular_lower(
    grid: &[usize],
    d: usize,
    trials: usize,
    seed: u64,
    cap: usize,
    limit: usize,
) -> Result<RegularReport, CliError> {
    if grid.is_empty() {
        return Err(CliError::config("empty n grid"));
    }
    if trials < 1 {
        return Err(CliError::config("trials must be ≥ 1"));
    }
    for &n in grid {
        if n * d % 2 != 0 {
            return Err(CliError::config(format!(
                "no {d}-regular graph on {n} vertices: n·d must be even"
            )));
        }
        if d >= n {
            return Err(CliError::config(format!("degree {d} needs more than {n} vertices")));
        }
        if n < 3 {
            return Err(CliError::config("regular experiment needs n ≥ 3"));
        }
    }

    let mut csv = String::new();
    writeln!(csv, "{SCHEMA_LINE}").unwrap();
    writeln!(csv, "experiment,n,d,seed,trial,tree,min_side,cut_car,certificate,greedy_pairs")
        .unwrap();

    let dd2 = 2 * d * d;
    let mut medians = Vec::new();
    for &n in grid {
        let mut certificates = Vec::new();
        for trial in 0..trials {
            let trial_seed = seed ^ trial as u64;
            let g = gen_random_regular(n, d, trial_seed)
                .map_err(|e| CliError::config(e.to_string()))?;
            let random = build_random_tree(&g, substream(trial_seed, 1));
            let greedy = build_greedy_tree(&g, substream(trial_seed, 2));
            for (name, tree) in [("random", &random), ("greedy", &greedy)] {
                let cut = tree.most_balanced_cut().expect("n ≥ 3 trees have cuts");
                let side = &cut.side_a;
                let min_side = side.count().min(n - side.count());
                let car = boolw::cut::cut_car(&g, side);
                let certificate = car as f64 / dd2 as f64;
                let (s, _) = greedy_private_pairs(&g, side);
                let pairs = s.count();
                // Deterministic inequality, not an ensemble statement: the
                // greedy construction guarantees 2d²·|S| ≥ cut_car.
                assert!(
                    dd2 * pairs >= car,
                    "greedy pair bound violated: 2d²·{pairs} < {car} (n={n} trial={trial})"
                );
                let stats = cut_stats(&g, side, cap, limit);
                if let Err(msg) = stats.check_chain(d) {
                    panic!("cut-value chain violated on live data: {msg}");
                }
                certificates.push(certificate);
                writeln!(
                    csv,
                    "regular,{n},{d},{seed},{trial},{name},{min_side},{car},{certificate:.6},{pairs}"
                )
                .unwrap();
            }
        }
        let med = median(&mut certificates);
        writeln!(csv, "# median_certificate n={n} median={med:.6}").unwrap();
        medians.push((n, med));
    }
    Ok(RegularReport { csv, medians })
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

// ---------------------------------------------------------------------------
// VC sandwich on random cuts

pub struct SandwichReport {
    pub csv: String,
    pub exact_rows: usize,
    pub violations: usize,
}

/// Per trial: a fresh G(n,p) and one uniform nonempty proper cut; records
/// vc_exact, cutbool_exact and the slack in both sandwich inequalities plus
/// the Sauer–Shelah bound. Rows whose enumeration or VC search hit its cap
/// carry empty fields. The full invariant chain is re-asserted per cut.
pub fn sandwich(
    n: usize,
    p: f64,
    cuts: usize,
    seed: u64,
    cap: usize,
    limit: usize,
) -> Result<SandwichReport, CliError> {
    validate_p(p)?;
    if n < 2 {
        return Err(CliError::config("sandwich experiment needs n ≥ 2"));
    }
    if cuts < 1 {
        return Err(CliError::config("need at least one cut"));
    }

    let mut csv = String::new();
    writeln!(csv, "{SCHEMA_LINE}").unwrap();
    writeln!(
        csv,
        "experiment,n,p,seed,trial,size_a,cut_car,family_size,cutbool_exact,vc_exact,slack_vc,slack_log,slack_sauer,violation"
    )
    .unwrap();

    let log2n = (n as f64).log2();
    let mut exact_rows = 0usize;
    let mut violations = 0usize;
    for trial in 0..cuts {
        let trial_seed = seed ^ trial as u64;
        let g = gen_gnp(n, p, trial_seed).map_err(|e| CliError::config(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(substream(trial_seed, 3));
        let side = loop {
            let s = VertexSet::from_vertices(n, (0..n).filter(|_| rng.random_bool(0.5)));
            let k = s.count();
            if k > 0 && k < n {
                break s;
            }
        };
        let stats = cut_stats(&g, &side, cap, limit);
        if let Err(msg) = stats.check_chain(g.max_degree()) {
            panic!("cut-value chain violated on live data: {msg}");
        }
        let prefix = format!(
            "sandwich,{n},{p},{seed},{trial},{},{}",
            stats.size_a, stats.cut_car
        );
        match (stats.family_size, stats.cutbool_exact, stats.vc_exact) {
            (Some(fs), Some(bw), Some(vc)) => {
                let slack_vc = bw - vc as f64;
                let slack_log = if vc >= 1 { vc as f64 * log2n - bw } else { 0.0 - bw };
                let slack_sauer = sauer_upper_bound(vc, stats.size_complement) - bw;
                let violation = slack_vc < -EPS || slack_log < -EPS || slack_sauer < -EPS;
                violations += violation as usize;
                exact_rows += 1;
                writeln!(
                    csv,
                    "{prefix},{fs},{bw:.6},{vc},{slack_vc:.6},{slack_log:.6},{slack_sauer:.6},{}",
                    violation as u8
                )
                .unwrap();
            }
            _ => {
                // Cap or budget hit: record the cut without exact fields.
                writeln!(csv, "{prefix},,,,,,,").unwrap();
            }
        }
    }
    writeln!(csv, "# violations={violations}").unwrap();
    Ok(SandwichReport { csv, exact_rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use boolw::tree::build_random_tree;

    #[test]
    fn kp_matches_hand_computation() {
        // ⌈2·ln 40 / 0.5⌉ = ⌈14.7556⌉
        assert_eq!(kp_of(40, 0.5), 15);
        assert_eq!(kp_of(16, 0.5), 12);
    }

    #[test]
    fn expansion_at_p_one_has_maximal_slack() {
        // In the complete graph N(S) = S̄ for every nonempty S, so the slack
        // is exactly k_p on every sample.
        let r = expansion_check(30, 1.0, 50, 9).unwrap();
        assert_eq!(r.violations, 0);
        for line in r.csv.lines().filter(|l| l.starts_with("expansion,")) {
            let cols: Vec<&str> = line.split(',').collect();
            let slack: i64 = cols[8].parse().unwrap();
            assert_eq!(slack, r.kp as i64);
        }
    }

    #[test]
    fn expansion_rejects_vacuous_configurations() {
        // k_p grows past n at small n / small p.
        assert!(expansion_check(5, 0.1, 10, 1).is_err());
        assert!(expansion_check(10, 0.0, 10, 1).is_err());
        assert!(expansion_check(10, 1.5, 10, 1).is_err());
    }

    #[test]
    fn growth_at_p_one_reports_width_one_everywhere() {
        // Every cut of the complete graph has exactly two distinct unions.
        let r = gnp_growth(&[8, 10], 1.0, 2, 4, 1 << 20).unwrap();
        assert_eq!(r.ceiling_violations, 0);
        for line in r.csv.lines().filter(|l| l.starts_with("growth,")) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[8], "1.000000", "width_lo in {line}");
            assert_eq!(cols[9], "1.000000", "width_hi in {line}");
            assert_eq!(cols[10], "1", "exactness in {line}");
        }
    }

    #[test]
    fn connected_cycle_cuts_carry_even_positive_cut_car() {
        // On a single cycle, any proper cut crosses an even number ≥ 2 of
        // edges, so the d=2 certificate is at least 2/8. (A disconnected
        // 2-regular graph can evade this: a cut separating two whole cycles
        // crosses nothing — hence the explicit connected instance.)
        let g = boolw::graph::Graph::cycle(12);
        for seed in 0..10u64 {
            let t = build_random_tree(&g, seed);
            let cut = t.most_balanced_cut().unwrap();
            let car = boolw::cut::cut_car(&g, &cut.side_a);
            assert!(car >= 2 && car % 2 == 0, "cycle cut_car = {car}");
            assert!(car as f64 / 8.0 >= 0.25);
        }
    }

    #[test]
    fn regular_greedy_pair_bound_holds_even_when_disconnected() {
        // d=2 draws may be cycle unions; the per-cut greedy inequality is
        // deterministic and must hold regardless of connectivity.
        let r = regular_lower(&[10, 12], 2, 4, 2, 1 << 20, 1_000_000).unwrap();
        assert_eq!(r.medians.len(), 2);
    }

    #[test]
    fn sandwich_on_edgeless_graphs_reports_zero_everywhere() {
        let r = sandwich(10, 0.0, 8, 3, 1 << 20, 1_000_000).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.exact_rows, 8);
        for line in r.csv.lines().filter(|l| l.starts_with("sandwich,")) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[7], "1", "family is {{∅}} in {line}");
            assert_eq!(cols[8], "0.000000", "cutbool in {line}");
            assert_eq!(cols[9], "0", "vc in {line}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = gnp_growth(&[10], 0.5, 3, 11, 1 << 20).unwrap();
        let b = gnp_growth(&[10], 0.5, 3, 11, 1 << 20).unwrap();
        assert_eq!(a.csv, b.csv);
        let a = regular_lower(&[12], 3, 3, 11, 1 << 20, 1_000_000).unwrap();
        let b = regular_lower(&[12], 3, 3, 11, 1 << 20, 1_000_000).unwrap();
        assert_eq!(a.csv, b.csv);
    }
}
