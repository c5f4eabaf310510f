use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, Graph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use std::collections::{BTreeMap, HashSet};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}

pub fn hypercube(n: usize) -> Result<Graph> {
    if !(1..=24).contains(&n) {
        return Err(bad(format!("hypercube dimension {n} outside 1..=24")));
    }
    let size = 1usize << n;
    let mut g = Graph::new(size, false);
    for i in 0..size {
        for b in 0..n {
            let j = i ^ (1 << b);
            if j > i {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Cartesian product of `m` copies of the complete graph `K_a`; vertex
/// `x` has base-`a` digits as coordinates.
pub fn generalized_hypercube(a: usize, m: usize) -> Result<Graph> {
    if a < 2 || m < 1 {
        return Err(bad(format!("generalized hypercube needs a >= 2, m >= 1 (got a={a}, m={m})")));
    }
    let size = a
        .checked_pow(m as u32)
        .filter(|&s| s <= 1 << 22)
        .ok_or_else(|| bad(format!("a^m too large for a={a}, m={m}")))?;
    let mut g = Graph::new(size, false);
    for i in 0..size {
        let mut place = 1;
        let mut rest = i;
        for _ in 0..m {
            let digit = rest % a;
            for v in digit + 1..a {
                g.add_edge(i, i + (v - digit) * place, 1.0)?;
            }
            rest /= a;
            place *= a;
        }
    }
    Ok(g)
}

/// Modified Margulis-Gabber-Galil graph on `Z_n x Z_n`; vertex `(x, y)` is
/// index `n*x + y`. Loops and repeated edges are dropped.
pub fn margulis_gabber_galil(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(bad("modified MGG needs n >= 2"));
    }
    let mut g = Graph::new(n * n, false);
    let idx = |x: usize, y: usize| (x % n) * n + (y % n);
    for x in 0..n {
        for y in 0..n {
            let u = idx(x, y);
            for v in [idx(x + 2 * y, y), idx(x + 2 * y + 1, y), idx(x, y + 2 * x), idx(x, y + 2 * x + 1)] {
                g.add_unit_if_absent(u, v);
            }
        }
    }
    Ok(g)
}

/// Constraint graph of an `n^2 x n^2` sudoku.
pub fn sudoku(n: usize) -> Result<Graph> {
    if !(2..=8).contains(&n) {
        return Err(bad(format!("sudoku order {n} outside 2..=8")));
    }
    let m = n * n;
    let mut g = Graph::new(m * m, false);
    for a in 0..m * m {
        let (ra, ca) = (a / m, a % m);
        for b in a + 1..m * m {
            let (rb, cb) = (b / m, b % m);
            if ra == rb || ca == cb || (ra / n == rb / n && ca / n == cb / n) {
                g.add_edge(a, b, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// `rows x cols` vertex grid with 4-neighbour edges.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows * cols < 2 {
        return Err(bad("grid needs at least two vertices"));
    }
    let mut g = Graph::new(rows * cols, false);
    for r in 0..rows {
        for c in 0..cols {
            let u = r * cols + c;
            if c + 1 < cols {
                g.add_edge(u, u + 1, 1.0)?;
            }
            if r + 1 < rows {
                g.add_edge(u, u + cols, 1.0)?;
            }
        }
    }
    Ok(g)
}

fn from_labelled(nodes: &[(usize, usize)], edges: &[((usize, usize), (usize, usize))]) -> Result<Graph> {
    let index: BTreeMap<(usize, usize), usize> =
        nodes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut g = Graph::new(nodes.len(), false);
    for (a, b) in edges {
        if let (Some(&u), Some(&v)) = (index.get(a), index.get(b)) {
            g.add_unit_if_absent(u, v);
        }
    }
    Ok(g)
}

/// Hexagonal lattice with `m` rows and `n` columns of hexagons.
pub fn hexagonal_lattice(m: usize, n: usize) -> Result<Graph> {
    if m < 1 || n < 1 {
        return Err(bad("hexagonal lattice needs m, n >= 1"));
    }
    let rows = 2 * m + 2;
    let drop = [(0, rows - 1), (n, (rows - 1) * (n % 2))];
    let mut nodes = Vec::new();
    for i in 0..=n {
        for j in 0..rows {
            if !drop.contains(&(i, j)) {
                nodes.push((i, j));
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..=n {
        for j in 0..rows - 1 {
            edges.push(((i, j), (i, j + 1)));
        }
    }
    for i in 0..n {
        for j in 0..rows {
            if i % 2 == j % 2 {
                edges.push(((i, j), (i + 1, j)));
            }
        }
    }
    from_labelled(&nodes, &edges)
}

/// Triangular lattice with `m` rows and `n` columns of triangles.
pub fn triangular_lattice(m: usize, n: usize) -> Result<Graph> {
    if m < 1 || n < 1 {
        return Err(bad("triangular lattice needs m, n >= 1"));
    }
    let per_row = n.div_ceil(2);
    let mut nodes = Vec::new();
    for i in 0..=per_row {
        for j in 0..=m {
            if !(n % 2 == 1 && i == per_row && j % 2 == 1) {
                nodes.push((i, j));
            }
        }
    }
    let mut edges = Vec::new();
    for j in 0..=m {
        for i in 0..per_row {
            edges.push(((i, j), (i + 1, j)));
        }
    }
    for j in 0..m {
        for i in 0..=per_row {
            edges.push(((i, j), (i, j + 1)));
        }
    }
    for j in (1..m).step_by(2) {
        for i in 0..per_row {
            edges.push(((i, j), (i + 1, j + 1)));
        }
    }
    for j in (0..m).step_by(2) {
        for i in 0..per_row {
            edges.push(((i + 1, j), (i, j + 1)));
        }
    }
    from_labelled(&nodes, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(bad("complete graph needs n >= 2"));
    }
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j, 1.0)?;
        }
    }
    Ok(g)
}

/// Complete `parts`-partite graph with part sizes as equal as possible.
pub fn turan(n: usize, parts: usize) -> Result<Graph> {
    if parts < 1 || n < parts || n < 2 {
        return Err(bad(format!("turan graph needs n >= parts >= 1 (n={n}, parts={parts})")));
    }
    let mut part = Vec::with_capacity(n);
    for p in 0..parts {
        let size = n / parts + usize::from(p < n % parts);
        part.extend(std::iter::repeat_n(p, size));
    }
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            if part[i] != part[j] {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Harary graph `H_{k,n}`: minimum edges for `k`-connectivity on `n`
/// vertices.
pub fn harary_kn(k: usize, n: usize) -> Result<Graph> {
    if k < 2 || n <= k {
        return Err(bad(format!("harary_kn needs 2 <= k < n (k={k}, n={n})")));
    }
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in 1..=k / 2 {
            g.add_unit_if_absent(i, (i + j) % n);
        }
    }
    if k % 2 == 1 {
        let half = n / 2;
        if n.is_multiple_of(2) {
            for i in 0..half {
                g.add_unit_if_absent(i, i + half);
            }
        } else {
            for i in 0..=half {
                g.add_unit_if_absent(i, (i + half) % n);
            }
        }
    }
    Ok(g)
}

/// Harary graph `H_{m,n}`: maximum connectivity on `n` vertices with `m`
/// edges.
pub fn harary_mn(m: usize, n: usize) -> Result<Graph> {
    if n < 2 || m < n - 1 || m > n * (n - 1) / 2 {
        return Err(bad(format!("harary_mn needs n-1 <= m <= n(n-1)/2 (m={m}, n={n})")));
    }
    let mut g = Graph::new(n, false);
    let d = 2 * m / n;
    let offset = d / 2;
    for i in 0..n {
        for j in 1..=offset {
            g.add_unit_if_absent(i, (i + j) % n);
        }
    }
    if d % 2 == 1 {
        let half = n / 2;
        for i in 0..half {
            g.add_unit_if_absent(i, i + half);
        }
    }
    let r = (2 * m) % n;
    for i in 0..r / 2 {
        g.add_unit_if_absent(i, (i + offset + 1) % n);
    }
    Ok(g)
}

/// Two paths of length `n` joined by rungs; `circular` closes both paths.
pub fn ladder(n: usize, circular: bool) -> Result<Graph> {
    if n < 2 || (circular && n < 3) {
        return Err(bad(format!("ladder length {n} too small")));
    }
    let mut g = Graph::new(2 * n, false);
    for i in 0..n {
        g.add_edge(i, i + n, 1.0)?;
        if i + 1 < n {
            g.add_edge(i, i + 1, 1.0)?;
            g.add_edge(i + n, i + n + 1, 1.0)?;
        }
    }
    if circular {
        g.add_edge(n - 1, 0, 1.0)?;
        g.add_edge(2 * n - 1, n, 1.0)?;
    }
    Ok(g)
}

pub fn ring_of_cliques(cliques: usize, size: usize) -> Result<Graph> {
    if cliques < 2 || size < 2 {
        return Err(bad("ring of cliques needs >= 2 cliques of size >= 2"));
    }
    let total = cliques * size;
    let mut g = Graph::new(total, false);
    for c in 0..cliques {
        let base = c * size;
        for i in base..base + size {
            for j in i + 1..base + size {
                g.add_edge(i, j, 1.0)?;
            }
        }
        g.add_unit_if_absent(base + 1, ((c + 1) * size) % total);
    }
    Ok(g)
}

/// Complete `r`-ary tree of height `h`.
pub fn balanced_tree(r: usize, h: usize) -> Result<Graph> {
    if r < 2 || h < 1 {
        return Err(bad("balanced tree needs r >= 2, h >= 1"));
    }
    let size = (0..=h as u32).map(|k| r.pow(k)).sum::<usize>();
    if size > 1 << 22 {
        return Err(bad("balanced tree too large"));
    }
    let mut g = Graph::new(size, false);
    for child in 1..size {
        g.add_edge((child - 1) / r, child, 1.0)?;
    }
    Ok(g)
}

pub fn binomial_tree(n: usize) -> Result<Graph> {
    if !(1..=22).contains(&n) {
        return Err(bad(format!("binomial tree order {n} outside 1..=22")));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut size = 1;
    for _ in 0..n {
        let shifted: Vec<_> = edges.iter().map(|&(u, v)| (u + size, v + size)).collect();
        edges.extend(shifted);
        edges.push((0, size));
        size *= 2;
    }
    let mut g = Graph::new(size, false);
    for (u, v) in edges {
        g.add_edge(u, v, 1.0)?;
    }
    Ok(g)
}

/// Random `d`-regular simple graph, pairing stubs and re-pairing only the
/// stubs that collided until none remain.
pub fn random_regular(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(bad(format!("no {d}-regular graph on {n} vertices")));
    }
    for _ in 0..1000 {
        if let Some(edges) = try_regular(d, n, rng) {
            let mut g = Graph::new(n, false);
            for (u, v) in edges {
                g.add_edge(u, v, 1.0)?;
            }
            return Ok(g);
        }
    }
    Err(Error::Other(format!("failed to sample a {d}-regular graph on {n} vertices")))
}

fn try_regular(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && seen.insert((a, b)) {
                edges.push((a, b));
            } else {
                *leftover.entry(a).or_default() += 1;
                *leftover.entry(b).or_default() += 1;
            }
        }
        if leftover.is_empty() {
            break;
        }
        let keys: Vec<usize> = leftover.keys().copied().collect();
        let suitable = keys
            .iter()
            .enumerate()
            .any(|(i, &a)| keys[i + 1..].iter().any(|&b| !seen.contains(&(a, b))));
        if !suitable {
            return None;
        }
        stubs = leftover.into_iter().flat_map(|(v, c)| std::iter::repeat_n(v, c)).collect();
    }
    Some(edges)
}

/// Random `k`-regular graph resampled until its second-largest adjacency
/// eigenvalue is at most `2*sqrt(k-1)`. Returns the last sample and
/// `false` when no sample passed within `max_attempts`.
pub fn ramanujan_expander(k: usize, n: usize, max_attempts: usize, rng: &mut ChaCha8Rng) -> Result<(Graph, bool)> {
    let bound = 2.0 * ((k - 1) as f64).sqrt();
    let mut last = None;
    for _ in 0..max_attempts {
        let g = random_regular(k, n, rng)?;
        let mut ev: Vec<f64> =
            adjacency_matrix(&g)?.to_dense().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if ev[1] <= bound + 1e-9 {
            return Ok((g, true));
        }
        last = Some(g);
    }
    Ok((last.expect("at least one attempt"), false))
}

/// Preferential attachment starting from a star on `m + 1` vertices.
pub fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if m < 1 || n <= m {
        return Err(bad(format!("barabasi_albert needs 1 <= m < n (n={n}, m={m})")));
    }
    let mut g = Graph::new(n, false);
    let mut repeated = Vec::new();
    for leaf in 1..=m {
        g.add_edge(0, leaf, 1.0)?;
        repeated.extend([0, leaf]);
    }
    for source in m + 1..n {
        let mut targets = Vec::with_capacity(m);
        while targets.len() < m {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.add_edge(source, t, 1.0)?;
        }
        repeated.extend(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
    }
    Ok(g)
}

/// Ring lattice joined to `k/2` neighbours per side, plus one random
/// shortcut per lattice edge with probability `p`.
pub fn newman_watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 3 || k < 2 || k >= n {
        return Err(bad(format!("newman_watts_strogatz needs 2 <= k < n, n >= 3 (n={n}, k={k})")));
    }
    let mut g = Graph::new(n, false);
    for j in 1..=k / 2 {
        for u in 0..n {
            g.add_unit_if_absent(u, (u + j) % n);
        }
    }
    let lattice: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    for (u, _) in lattice {
        if rng.random::<f64>() < p {
            if g.degree(u) >= n - 1 {
                continue;
            }
            loop {
                let w = rng.random_range(0..n);
                if w != u && !g.has_edge(u, w) {
                    g.add_edge(u, w, 1.0)?;
                    break;
                }
            }
        }
    }
    Ok(g)
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    check_prob(p)?;
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(bad(format!("probability {p} outside [0, 1]")))
    }
}

/// Partition sizes drawn from a normal distribution (rounded, at least 1)
/// until they cover `n`; the last block is truncated.
pub fn gaussian_partition_sizes(n: usize, mean: f64, var: f64, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let normal = Normal::new(mean, var.sqrt()).map_err(|e| bad(e.to_string()))?;
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < n {
        let s = (normal.sample(rng).round() as i64).max(1) as usize;
        let s = s.min(n - total);
        sizes.push(s);
        total += s;
    }
    Ok(sizes)
}

/// Stochastic block graph over consecutive blocks of the given sizes.
pub fn partition_graph(sizes: &[usize], p_in: f64, p_out: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    check_prob(p_in)?;
    check_prob(p_out)?;
    let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
    let n = block.len();
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            let p = if block[i] == block[j] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

fn unit_square(n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn exp_weights(n: usize, rate: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let e = Exp::new(rate).map_err(|e| bad(e.to_string()))?;
    Ok((0..n).map(|_| e.sample(rng)).collect())
}

/// Joins `u, v` when `(w_u + w_v) / r^2 >= theta` for exponential vertex
/// weights and uniform positions in the unit square.
pub fn geographical_threshold(n: usize, rate: f64, theta: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let pos = unit_square(n, rng);
    let w = exp_weights(n, rate, rng)?;
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            let r = dist(pos[i], pos[j]);
            if (w[i] + w[j]) >= theta * r * r {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Pairs within `radius` are joined with probability `exp(-r)`.
pub fn soft_random_geometric(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let pos = unit_square(n, rng);
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            let r = dist(pos[i], pos[j]);
            if r <= radius && rng.random::<f64>() < (-r).exp() {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Pairs within `radius` whose exponential weights sum to at least `theta`.
pub fn thresholded_random_geometric(n: usize, radius: f64, theta: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let pos = unit_square(n, rng);
    let w = exp_weights(n, 1.0, rng)?;
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            if dist(pos[i], pos[j]) <= radius && w[i] + w[j] >= theta {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

pub fn random_geometric(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let pos = unit_square(n, rng);
    let mut g = Graph::new(n, false);
    for i in 0..n {
        for j in i + 1..n {
            if dist(pos[i], pos[j]) <= radius {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Projection onto the `n` side of a random bipartite graph with `m`
/// attribute vertices and edge probability `p`.
pub fn uniform_random_intersection(n: usize, m: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    check_prob(p)?;
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); m];
    for u in 0..n {
        for h in holders.iter_mut() {
            if rng.random::<f64>() < p {
                h.push(u);
            }
        }
    }
    let mut g = Graph::new(n, false);
    for h in &holders {
        for (a, &u) in h.iter().enumerate() {
            for &v in &h[a + 1..] {
                g.add_unit_if_absent(u, v);
            }
        }
    }
    Ok(g)
}

/// Path of `n` backbone vertices; each backbone vertex grows leaves while
/// a draw is below `p1`, and each leaf grows further leaves while a draw is
/// below `p2`.
pub fn random_lobster(n: usize, p1: f64, p2: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    check_prob(p1)?;
    check_prob(p2)?;
    if n < 2 || p1 >= 1.0 || p2 >= 1.0 {
        return Err(bad("random lobster needs n >= 2 and p1, p2 < 1"));
    }
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        edges.push((i, i + 1));
    }
    let mut current = n - 1;
    for b in 0..n {
        while rng.random::<f64>() < p1 {
            current += 1;
            edges.push((b, current));
            let cat = current;
            while rng.random::<f64>() < p2 {
                current += 1;
                edges.push((cat, current));
            }
        }
    }
    let mut g = Graph::new(current + 1, false);
    for (u, v) in edges {
        g.add_edge(u, v, 1.0)?;
    }
    Ok(g)
}
