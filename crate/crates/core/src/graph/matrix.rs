use super::Graph;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::collections::BTreeMap;

/// Sparse real symmetric matrix. Only entries with `i <= j` are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SymmetricMatrix {
    pub fn new(order: usize) -> Self {
        SymmetricMatrix { order, entries: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let k = if i <= j { (i, j) } else { (j, i) };
        self.entries.get(&k).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, i: usize, j: usize, x: f64) {
        let k = if i <= j { (i, j) } else { (j, i) };
        *self.entries.entry(k).or_insert(0.0) += x;
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        let k = if i <= j { (i, j) } else { (j, i) };
        self.entries.insert(k, x);
    }

    /// Stored upper-triangle entries `(i, j, value)` with `i <= j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(i, j), &x)| (i, j, x))
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidParam("matrix is not square".into()));
        }
        let mut s = SymmetricMatrix::new(m.nrows());
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * (1.0 + m[(i, j)].abs()) {
                    return Err(Error::InvalidParam(format!("matrix not symmetric at ({i}, {j})")));
                }
                if m[(i, j)] != 0.0 {
                    s.set(i, j, m[(i, j)]);
                }
            }
        }
        Ok(s)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.order, self.order);
        for (&(i, j), &x) in &self.entries {
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
        m
    }

    /// Nonzero count of every row.
    pub fn row_nnz(&self) -> Vec<usize> {
        let mut nnz = vec![0; self.order];
        for (&(i, j), &x) in &self.entries {
            if x != 0.0 {
                nnz[i] += 1;
                if i != j {
                    nnz[j] += 1;
                }
            }
        }
        nnz
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin_bound(&self) -> f64 {
        let mut rows = vec![0.0; self.order];
        for (&(i, j), &x) in &self.entries {
            rows[i] += x.abs();
            if i != j {
                rows[j] += x.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Compressed row adjacency for repeated products.
    pub fn to_rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.order];
        for (&(i, j), &x) in &self.entries {
            if x == 0.0 {
                continue;
            }
            rows[i].push((j, x));
            if i != j {
                rows[j].push((i, x));
            }
        }
        rows
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.order];
        for (&(i, j), &a) in &self.entries {
            y[i] += a * x[j];
            if i != j {
                y[j] += a * x[i];
            }
        }
        y
    }
}

/// Sparse rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl RectMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        RectMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, r: usize, c: usize, x: f64) {
        self.entries.insert((r, c), x);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(r, c), &x)| (r, c, x))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(r, c), &x) in &self.entries {
            m[(r, c)] = x;
        }
        m
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for (&(_, c), &x) in &self.entries {
            s[c] += x;
        }
        s
    }

    pub fn mul_vec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (&(r, c), &x) in &self.entries {
            out[r] += x * y[c];
        }
        out
    }
}

/// Symmetric adjacency; undirected graphs only.
pub fn adjacency_matrix(g: &Graph) -> Result<SymmetricMatrix> {
    require_undirected(g)?;
    let mut q = SymmetricMatrix::new(g.n_vertices());
    for e in g.edges() {
        q.add(e.u, e.v, e.w);
    }
    Ok(q)
}

pub fn degree_matrix(g: &Graph) -> Result<SymmetricMatrix> {
    require_undirected(g)?;
    let mut d = SymmetricMatrix::new(g.n_vertices());
    for e in g.edges() {
        d.add(e.u, e.u, e.w);
        d.add(e.v, e.v, e.w);
    }
    Ok(d)
}

/// Weighted Laplacian `D - Q`.
pub fn laplacian(g: &Graph) -> Result<SymmetricMatrix> {
    require_undirected(g)?;
    let mut l = SymmetricMatrix::new(g.n_vertices());
    for e in g.edges() {
        l.add(e.u, e.u, e.w);
        l.add(e.v, e.v, e.w);
        l.add(e.u, e.v, -e.w);
    }
    Ok(l)
}

/// Vertex-edge incidence matrix of a digraph: column `k` of edge `u -> v`
/// holds `-w` at row `u` and `+w` at row `v`.
pub fn incidence_matrix(g: &Graph) -> Result<RectMatrix> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("incidence matrix needs a directed graph".into()));
    }
    let mut b = RectMatrix::new(g.n_vertices(), g.n_edges());
    for (k, e) in g.edges().iter().enumerate() {
        b.set(e.u, k, -e.w);
        b.set(e.v, k, e.w);
    }
    Ok(b)
}

/// `[[0, B], [B^T, 0]]`, of order `rows + cols`.
pub fn hermitian_dilation(b: &RectMatrix) -> SymmetricMatrix {
    let mut h = SymmetricMatrix::new(b.rows + b.cols);
    for (r, c, x) in b.entries() {
        h.set(r, b.rows + c, x);
    }
    h
}

/// Embeds `m` in the next power-of-two order with `fill` on the new
/// diagonal. `fill` must be nonzero so padding adds no null space.
pub fn pad_to_power_of_two(m: &SymmetricMatrix, fill: f64) -> Result<SymmetricMatrix> {
    if fill == 0.0 || !fill.is_finite() {
        return Err(Error::InvalidParam("padding fill must be finite and nonzero".into()));
    }
    let target = m.order().next_power_of_two();
    let mut p = SymmetricMatrix::new(target);
    for (i, j, x) in m.upper_entries() {
        p.set(i, j, x);
    }
    for k in m.order()..target {
        p.set(k, k, fill);
    }
    Ok(p)
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::KindMismatch("operation needs an undirected graph".into()))
    } else {
        Ok(())
    }
}
