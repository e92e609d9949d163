//! Random `d`-regular simple graphs by the pairing model with incremental rejection.
//!
//! Points (`d` per vertex) are paired one at a time; a pair that would create a
//! loop or a repeated edge is redrawn. When no admissible pair is left the
//! attempt restarts. Rejecting whole pairings instead would almost never
//! succeed for `d` near `n^{2/3}`.

use anyhow::{bail, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourhom_core::host::SimpleGraph;

/// Redraws per step before checking whether any admissible pair remains.
const REDRAWS: usize = 64;

pub fn random_regular(n: usize, d: usize, seed: u64, max_restarts: usize) -> Result<SimpleGraph> {
    if d >= n || (n * d) % 2 == 1 {
        bail!("no simple {d}-regular graph on {n} vertices");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_restarts.max(1) {
        if let Some(edges) = attempt(n, d, &mut rng) {
            return Ok(SimpleGraph::new(n, edges)?);
        }
    }
    bail!("pairing failed {max_restarts} times for n = {n}, d = {d}")
}

fn attempt<R: Rng>(n: usize, d: usize, rng: &mut R) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * d / 2);
    while !points.is_empty() {
        let mut placed = false;
        for _ in 0..REDRAWS {
            let i = rng.gen_range(0..points.len());
            let j = rng.gen_range(0..points.len());
            let (u, v) = (points[i], points[j]);
            if i == j || u == v || adj[u][v] {
                continue;
            }
            take(&mut points, i, j);
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
            placed = true;
            break;
        }
        if placed {
            continue;
        }
        // Few points left: pick uniformly among the admissible pairs, if any.
        let admissible: Vec<(usize, usize)> = (0..points.len())
            .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| points[i] != points[j] && !adj[points[i]][points[j]])
            .collect();
        if admissible.is_empty() {
            return None;
        }
        let (i, j) = admissible[rng.gen_range(0..admissible.len())];
        let (u, v) = (points[i], points[j]);
        take(&mut points, i, j);
        adj[u][v] = true;
        adj[v][u] = true;
        edges.push((u, v));
    }
    Some(edges)
}

fn take(points: &mut Vec<usize>, i: usize, j: usize) {
    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
    points.swap_remove(hi);
    points.swap_remove(lo);
}

/// `⌈n^{2/3}⌉`, nudged up by one when `n·d` would be odd.
pub fn default_degree(n: usize) -> usize {
    let mut d = (n as f64).powf(2.0 / 3.0).ceil() as usize;
    while d * d * d < n * n {
        d += 1;
    }
    while d > 1 && (d - 1) * (d - 1) * (d - 1) >= n * n {
        d -= 1;
    }
    if (n * d) % 2 == 1 {
        d += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graphs_are_simple_and_regular() {
        for (n, d) in [(10, 3), (64, 16), (128, 26), (256, 41), (7, 6)] {
            let g = random_regular(n, d, 5, 100).unwrap();
            assert_eq!(g.edges().len(), n * d / 2);
            for v in 0..n {
                assert_eq!(g.degree(v), d, "n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_regular(30, 4, 11, 10).unwrap();
        let b = random_regular(30, 4, 11, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_parameters_error() {
        assert!(random_regular(5, 3, 0, 10).is_err());
        assert!(random_regular(4, 4, 0, 10).is_err());
    }

    #[test]
    fn degree_schedule() {
        assert_eq!(default_degree(64), 16);
        assert_eq!(default_degree(128), 26);
        assert_eq!(default_degree(256), 41);
        assert_eq!(default_degree(27), 10);
    }
}
