//! Seeded random graph generators.
//!
//! All randomness flows through `ChaCha8Rng` seeded with a caller-supplied
//! 64-bit value, so identical arguments produce bit-identical graphs on every
//! platform and run.

use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("vertex count must be at least 1")]
    EmptyVertexSet,
    #[error("n·d = {0}·{1} is odd, no {1}-regular graph exists")]
    OddDegreeSum(usize, usize),
    #[error("degree {0} too large for {1} vertices")]
    DegreeTooLarge(usize, usize),
    #[error("regular graph construction kept colliding after {0} attempts")]
    RetriesExhausted(usize),
}

/// Erdos–Renyi G(n, p): each of the C(n,2) pairs is an edge independently
/// with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::EmptyVertexSet);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    // Pair order is fixed (lexicographic), so the seed fully determines the graph.
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).expect("fresh pairs cannot collide");
            }
        }
    }
    Ok(g)
}

const REGULAR_MAX_ATTEMPTS: usize = 10_000;

/// Random d-regular graph via the configuration model: pair up n·d stubs
/// uniformly and reject the pairing whenever it produces a loop or a
/// duplicate edge. Rejection resamples the whole pairing, so the output is
/// uniform over simple pairings; for the small d used here the acceptance
/// rate is far from the retry bound.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::EmptyVertexSet);
    }
    if d >= n {
        return Err(GenError::DegreeTooLarge(d, n));
    }
    if (n * d) % 2 != 0 {
        return Err(GenError::OddDegreeSum(n, d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..REGULAR_MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        if let Some(g) = try_pairing(n, &stubs) {
            debug_assert!((0..n).all(|v| g.degree(v) == d));
            return Ok(g);
        }
    }
    Err(GenError::RetriesExhausted(REGULAR_MAX_ATTEMPTS))
}

fn try_pairing(n: usize, stubs: &[usize]) -> Option<Graph> {
    let mut g = Graph::empty(n);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || g.has_edge(u, v) {
            return None;
        }
        g.add_edge(u, v).expect("checked simple above");
    }
    Some(g)
}
