//! Directed constructions. None of them emit a pair `u -> v`, `v -> u`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Redraws allowed before a sampled edge is skipped.
const MAX_REDRAWS: usize = 100;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Paley tournament on `Z_p`: `u -> w` iff `u - w` is a nonzero square.
pub fn paley(p: usize) -> Result<Graph> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(bad(format!("paley order {p} must be a prime congruent to 3 mod 4")));
    }
    let mut residue = vec![false; p];
    for x in 1..p {
        residue[x * x % p] = true;
    }
    let mut g = Graph::new(p, true);
    for u in 0..p {
        for w in 0..p {
            if u != w && residue[(u + p - w) % p] {
                g.add_edge(u, w, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Hypercube with every edge pointing toward the endpoint of higher
/// Hamming weight.
pub fn directed_hypercube(n: usize) -> Result<Graph> {
    if !(1..=20).contains(&n) {
        return Err(bad(format!("directed hypercube dimension {n} outside 1..=20")));
    }
    let size = 1usize << n;
    let mut g = Graph::new(size, true);
    for i in 0..size {
        for b in 0..n {
            if i & (1 << b) == 0 {
                g.add_edge(i, i | (1 << b), 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Growing network: each new vertex links to one existing vertex chosen
/// with probability proportional to its degree.
pub fn gn(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 2 {
        return Err(bad("gn needs n >= 2"));
    }
    let mut g = Graph::new(n, true);
    g.add_edge(1, 0, 1.0)?;
    let mut deg = vec![1.0, 1.0];
    for source in 2..n {
        let target = WeightedIndex::new(&deg).map_err(|e| bad(e.to_string()))?.sample(rng);
        g.add_edge(source, target, 1.0)?;
        deg.push(1.0);
        deg[target] += 1.0;
    }
    Ok(g)
}

/// Growing network with copying: a new vertex links to a uniform target
/// and to all of the target's successors.
pub fn gnc(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 2 {
        return Err(bad("gnc needs n >= 2"));
    }
    let mut g = Graph::new(n, true);
    for source in 1..n {
        let target = rng.random_range(0..source);
        let succ: Vec<usize> = g.successors(target).to_vec();
        for s in succ {
            g.add_edge(source, s, 1.0)?;
        }
        g.add_edge(source, target, 1.0)?;
    }
    Ok(g)
}

/// Growing network with redirection probability `p`.
pub fn gnr(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 2 {
        return Err(bad("gnr needs n >= 2"));
    }
    let mut g = Graph::new(n, true);
    for source in 1..n {
        let mut target = rng.random_range(0..source);
        if rng.random::<f64>() < p && target != 0 {
            target = g.successors(target)[0];
        }
        g.add_edge(source, target, 1.0)?;
    }
    Ok(g)
}

/// Directed block graph: every ordered pair is sampled independently, and
/// a pair whose reverse is already present is skipped.
pub fn partition_digraph(sizes: &[usize], p_in: f64, p_out: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
    let n = block.len();
    let mut g = Graph::new(n, true);
    for i in 0..n {
        for j in i + 1..n {
            let p = if block[i] == block[j] { p_in } else { p_out };
            let fwd = rng.random::<f64>() < p;
            let back = rng.random::<f64>() < p;
            if fwd {
                g.add_edge(i, j, 1.0)?;
            } else if back {
                g.add_edge(j, i, 1.0)?;
            }
        }
    }
    Ok(g)
}

pub fn gnp_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 2 {
        return Err(bad("directed gnp needs n >= 2"));
    }
    partition_digraph(&[n], p, p, rng)
}

/// `n x n` grid. Lattice neighbours are joined once, from the lower index
/// to the higher; each vertex then draws one long-range target with
/// probability proportional to `d^-r` in Manhattan distance.
pub fn navigable_small_world(n: usize, r: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 2 {
        return Err(bad("navigable small world needs n >= 2"));
    }
    let size = n * n;
    let mut g = Graph::new(size, true);
    for u in 0..size {
        let (x, y) = (u / n, u % n);
        if y + 1 < n {
            g.add_edge(u, u + 1, 1.0)?;
        }
        if x + 1 < n {
            g.add_edge(u, u + n, 1.0)?;
        }
    }
    for u in 0..size {
        let (x, y) = ((u / n) as i64, (u % n) as i64);
        let w: Vec<f64> = (0..size)
            .map(|v| {
                if v == u {
                    0.0
                } else {
                    let d = (x - (v / n) as i64).abs() + (y - (v % n) as i64).abs();
                    (d as f64).powf(-r)
                }
            })
            .collect();
        let dist = WeightedIndex::new(&w).map_err(|e| bad(e.to_string()))?;
        for _ in 0..MAX_REDRAWS {
            let v = dist.sample(rng);
            if !g.adjacent(u, v) {
                g.add_edge(u, v, 1.0)?;
                break;
            }
        }
    }
    Ok(g)
}

/// Each vertex picks `k` distinct out-neighbours uniformly.
pub fn random_k_out(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if k < 1 || n <= k {
        return Err(bad(format!("random k-out needs 1 <= k < n (n={n}, k={k})")));
    }
    let mut g = Graph::new(n, true);
    for u in 0..n {
        for _ in 0..k {
            for _ in 0..MAX_REDRAWS {
                let v = rng.random_range(0..n);
                if v != u && !g.adjacent(u, v) {
                    g.add_edge(u, v, 1.0)?;
                    break;
                }
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy)]
pub struct ScaleFreeParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta_in: f64,
    pub delta_out: f64,
}

/// Directed preferential attachment grown from a 3-cycle. Loops, repeats
/// and reversed pairs are redrawn, then skipped.
pub fn scale_free(n: usize, sp: ScaleFreeParams, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 3 {
        return Err(bad("scale-free needs n >= 3"));
    }
    if (sp.alpha + sp.beta + sp.gamma - 1.0).abs() > 1e-9 {
        return Err(bad("alpha + beta + gamma must equal 1"));
    }
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (2, 0)];
    let mut indeg = vec![1.0, 1.0, 1.0];
    let mut outdeg = vec![1.0, 1.0, 1.0];
    let mut present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();

    let pick = |deg: &[f64], delta: f64, rng: &mut ChaCha8Rng| -> Option<usize> {
        let w: Vec<f64> = deg.iter().map(|d| d + delta).collect();
        WeightedIndex::new(&w).ok().map(|d| d.sample(rng))
    };

    while indeg.len() < n {
        let r = rng.random::<f64>();
        let count = indeg.len();
        let mut chosen = None;
        for _ in 0..MAX_REDRAWS {
            let (v, w) = if r < sp.alpha {
                (Some(count), pick(&indeg, sp.delta_in, rng))
            } else if r < sp.alpha + sp.beta {
                (pick(&outdeg, sp.delta_out, rng), pick(&indeg, sp.delta_in, rng))
            } else {
                (pick(&outdeg, sp.delta_out, rng), Some(count))
            };
            let (Some(v), Some(w)) = (v, w) else { break };
            if v != w && !present.contains(&(v, w)) && !present.contains(&(w, v)) {
                chosen = Some((v, w));
                break;
            }
        }
        if r < sp.alpha || r >= sp.alpha + sp.beta {
            indeg.push(0.0);
            outdeg.push(0.0);
        }
        if let Some((v, w)) = chosen {
            present.insert((v, w));
            edges.push((v, w));
            outdeg[v] += 1.0;
            indeg[w] += 1.0;
        }
    }
    let mut g = Graph::new(n, true);
    for (u, v) in edges {
        g.add_edge(u, v, 1.0)?;
    }
    Ok(g)
}
