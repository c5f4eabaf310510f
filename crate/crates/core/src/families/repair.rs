use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::seq::IndexedRandom;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const NOTHING_TO_REPAIR: &str = "There are no source and sink vertices in the graph";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RepairReport {
    pub added: Vec<(usize, usize)>,
    pub reversed: Vec<(usize, usize)>,
    /// Set when the input had no sources or sinks at all.
    pub message: Option<String>,
    /// Edges added by the cleanup pass after the main procedure.
    pub cleanup_steps: usize,
}

struct Repair<'a> {
    g: &'a mut Graph,
    rng: &'a mut ChaCha8Rng,
    report: RepairReport,
}

impl Repair<'_> {
    fn add(&mut self, u: usize, v: usize) -> Result<()> {
        self.g.add_edge(u, v, 1.0)?;
        self.report.added.push((u, v));
        Ok(())
    }

    fn reverse(&mut self, u: usize, v: usize) -> Result<()> {
        self.g.reverse_edge(u, v)?;
        self.report.reversed.push((u, v));
        Ok(())
    }

    fn free(&self, v: usize, pool: &[usize]) -> Vec<usize> {
        pool.iter().copied().filter(|&y| y != v && !self.g.adjacent(v, y)).collect()
    }

    fn pick(&mut self, cands: &[usize]) -> Option<usize> {
        cands.choose(self.rng).copied()
    }

    /// Vertices touching a single edge get a second edge pointing the same
    /// way through them.
    fn pendant_vertices(&mut self) -> Result<()> {
        let all: Vec<usize> = (0..self.g.n_vertices()).collect();
        for v in 0..self.g.n_vertices() {
            if self.g.degree(v) != 1 {
                continue;
            }
            let cands = self.free(v, &all);
            if let Some(y) = self.pick(&cands) {
                if self.g.in_degree(v) == 1 {
                    self.add(v, y)?;
                } else {
                    self.add(y, v)?;
                }
            }
        }
        Ok(())
    }

    fn only_sinks(&mut self, sinks: &[usize]) -> Result<()> {
        let list1: Vec<usize> = (0..self.g.n_vertices()).filter(|v| !sinks.contains(v)).collect();
        for &s in sinks {
            let cands = self.free(s, &list1);
            if let Some(t) = self.pick(&cands) {
                self.add(s, t)?;
                continue;
            }
            let back: Vec<usize> = list1
                .iter()
                .copied()
                .filter(|&t| self.g.has_edge(t, s) && self.g.out_degree(t) > 1)
                .collect();
            if let (Some(t), true) = (self.pick(&back), self.g.in_degree(s) > 1) {
                self.reverse(t, s)?;
            }
        }
        Ok(())
    }

    fn only_sources(&mut self, sources: &[usize]) -> Result<()> {
        let list2: Vec<usize> = (0..self.g.n_vertices()).filter(|v| !sources.contains(v)).collect();
        for &s in sources {
            let cands = self.free(s, &list2);
            if let Some(t) = self.pick(&cands) {
                self.add(t, s)?;
                continue;
            }
            let fwd: Vec<usize> = list2
                .iter()
                .copied()
                .filter(|&t| self.g.has_edge(s, t) && self.g.in_degree(t) > 1)
                .collect();
            if let (Some(t), true) = (self.pick(&fwd), self.g.out_degree(s) > 1) {
                self.reverse(s, t)?;
            }
        }
        Ok(())
    }

    /// Pairs `sinks[i] -> sources[i]`, then serves whichever list is longer
    /// from random members of the other.
    fn pair_up(&mut self, sources: &[usize], sinks: &[usize]) -> Result<()> {
        let paired = sources.len().min(sinks.len());
        for i in 0..paired {
            let (k, s) = (sinks[i], sources[i]);
            if k != s && !self.g.adjacent(k, s) {
                self.add(k, s)?;
            }
        }
        for &k in &sinks[paired..] {
            let cands = self.free(k, sources);
            if let Some(s) = self.pick(&cands) {
                self.add(k, s)?;
            }
        }
        for &s in &sources[paired..] {
            let cands = self.free(s, sinks);
            if let Some(k) = self.pick(&cands) {
                self.add(k, s)?;
            }
        }
        Ok(())
    }

    /// Handles what the main procedure leaves behind: isolated vertices,
    /// self-pairings and saturated neighbourhoods.
    fn cleanup(&mut self) -> Result<()> {
        let n = self.g.n_vertices();
        let all: Vec<usize> = (0..n).collect();
        for _ in 0..4 * n + 16 {
            let sinks = self.g.sinks();
            let sources = self.g.sources();
            if let Some(&k) = sinks.first() {
                let preferred = self.free(k, &sources);
                let cands = if preferred.is_empty() { self.free(k, &all) } else { preferred };
                if let Some(y) = self.pick(&cands) {
                    self.add(k, y)?;
                } else {
                    let preds: Vec<usize> = self.g.predecessors(k).to_vec();
                    let busy: Vec<usize> = preds.iter().copied().filter(|&t| self.g.out_degree(t) > 1).collect();
                    let t = self.pick(if busy.is_empty() { &preds } else { &busy }).ok_or_else(stuck)?;
                    self.reverse(t, k)?;
                }
            } else if let Some(&s) = sources.first() {
                let cands = self.free(s, &all);
                if let Some(y) = self.pick(&cands) {
                    self.add(y, s)?;
                } else {
                    let succ: Vec<usize> = self.g.successors(s).to_vec();
                    let busy: Vec<usize> = succ.iter().copied().filter(|&t| self.g.in_degree(t) > 1).collect();
                    let t = self.pick(if busy.is_empty() { &succ } else { &busy }).ok_or_else(stuck)?;
                    self.reverse(s, t)?;
                }
            } else {
                return Ok(());
            }
            self.report.cleanup_steps += 1;
        }
        Err(stuck())
    }
}

fn stuck() -> Error {
    Error::Other("source/sink repair did not converge".into())
}

/// Adds (and occasionally reverses) edges until no vertex is a source or a
/// sink. Never creates a reversed pair, never adds vertices, and leaves a
/// graph without sources and sinks untouched.
pub fn repair_sources_sinks(g: &mut Graph, rng: &mut ChaCha8Rng) -> Result<RepairReport> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("repair needs a directed graph".into()));
    }
    if g.n_vertices() < 3 {
        return Err(Error::InvalidGraph("repair needs at least 3 vertices".into()));
    }
    let mut r = Repair { g, rng, report: RepairReport::default() };
    r.pendant_vertices()?;

    let sources = r.g.sources();
    let sinks = r.g.sinks();
    match (sources.is_empty(), sinks.is_empty()) {
        (true, true) => {
            if r.report.added.is_empty() {
                r.report.message = Some(NOTHING_TO_REPAIR.to_string());
            }
            return Ok(r.report);
        }
        (true, false) => r.only_sinks(&sinks)?,
        (false, true) => r.only_sources(&sources)?,
        (false, false) => r.pair_up(&sources, &sinks)?,
    }
    r.cleanup()?;
    Ok(r.report)
}
