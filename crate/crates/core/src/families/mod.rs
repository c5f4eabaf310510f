//! Catalog of graph families indexed by an integer `n`, with seeded
//! generation, declared size growth and optional edge-weight rules.

pub mod directed;
mod repair;
pub mod undirected;

pub use repair::{repair_sources_sinks, RepairReport, NOTHING_TO_REPAIR};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::growth::{ratio, GrowthClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    Hypercube,
    GeneralizedHypercube,
    MargulisGabberGalil,
    Sudoku,
    Grid2d,
    Grid2dSquare,
    HexagonalLattice,
    TriangularLattice,
    Complete,
    Turan,
    HararyKn,
    HararyMn,
    Ladder,
    CircularLadder,
    RingOfCliques,
    BalancedBinaryTree,
    BalancedTernaryTree,
    BinomialTree,
    RandomRegularExpander,
    BarabasiAlbert,
    NewmanWattsStrogatz,
    RandomRegular,
    Gnp,
    GaussianRandomPartition,
    GeographicalThreshold,
    SoftRandomGeometric,
    ThresholdedRandomGeometric,
    PlantedPartition,
    RandomGeometric,
    UniformRandomIntersection,
    RandomLobster,
    Paley,
    DirectedHypercube,
    Gn,
    Gnc,
    Gnr,
    DirectedGaussianRandomPartition,
    DirectedPlantedPartition,
    NavigableSmallWorld,
    DirectedGnp,
    RandomKOut,
    ScaleFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Laplacian,
    /// Hermitian dilation of the incidence matrix.
    Incidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    #[default]
    Unit,
    Log,
    Linear,
    Quadratic,
}

impl FamilyId {
    pub const ALL: [FamilyId; 42] = {
        use FamilyId::*;
        [
            Hypercube, GeneralizedHypercube, MargulisGabberGalil, Sudoku, Grid2d, Grid2dSquare,
            HexagonalLattice, TriangularLattice, Complete, Turan, HararyKn, HararyMn, Ladder,
            CircularLadder, RingOfCliques, BalancedBinaryTree, BalancedTernaryTree, BinomialTree,
            RandomRegularExpander, BarabasiAlbert, NewmanWattsStrogatz, RandomRegular, Gnp,
            GaussianRandomPartition, GeographicalThreshold, SoftRandomGeometric,
            ThresholdedRandomGeometric, PlantedPartition, RandomGeometric,
            UniformRandomIntersection, RandomLobster, Paley, DirectedHypercube, Gn, Gnc, Gnr,
            DirectedGaussianRandomPartition, DirectedPlantedPartition, NavigableSmallWorld,
            DirectedGnp, RandomKOut, ScaleFree,
        ]
    };

    pub fn name(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    }

    pub fn is_directed(&self) -> bool {
        use FamilyId::*;
        matches!(
            self,
            Paley | DirectedHypercube | Gn | Gnc | Gnr | DirectedGaussianRandomPartition
                | DirectedPlantedPartition | NavigableSmallWorld | DirectedGnp | RandomKOut | ScaleFree
        )
    }

    pub fn is_random(&self) -> bool {
        use FamilyId::*;
        !matches!(
            self,
            Hypercube | GeneralizedHypercube | MargulisGabberGalil | Sudoku | Grid2d | Grid2dSquare
                | HexagonalLattice | TriangularLattice | Complete | Turan | HararyKn | HararyMn
                | Ladder | CircularLadder | RingOfCliques | BalancedBinaryTree
                | BalancedTernaryTree | BinomialTree | Paley | DirectedHypercube
        )
    }

    pub fn default_seed(&self) -> Option<u64> {
        use FamilyId::*;
        if !self.is_random() {
            None
        } else if self.is_directed() || matches!(self, NewmanWattsStrogatz | RandomLobster) {
            Some(19)
        } else {
            Some(23)
        }
    }

    pub fn default_matrix_kind(&self) -> MatrixKind {
        if self.is_directed() {
            MatrixKind::Incidence
        } else {
            MatrixKind::Laplacian
        }
    }

    pub fn default_params(&self) -> BTreeMap<String, f64> {
        use FamilyId::*;
        let kv: &[(&str, f64)] = match self {
            GeneralizedHypercube => &[("a", 3.0)],
            Grid2d => &[("r", 101.0)],
            HexagonalLattice | TriangularLattice => &[("c", 101.0)],
            Turan => &[("p", 2.0)],
            HararyKn => &[("k", 3.0)],
            HararyMn => &[("extra_edges", 1.0)],
            RingOfCliques => &[("clique_size", 3.0)],
            RandomRegularExpander => &[("k", 6.0), ("max_attempts", 200.0)],
            BarabasiAlbert => &[("m", 3.0)],
            NewmanWattsStrogatz => &[("k", 3.0), ("p", 1.0)],
            RandomRegular => &[("k", 4.0)],
            Gnp | DirectedGnp => &[("p", 0.8)],
            GaussianRandomPartition | DirectedGaussianRandomPartition => {
                &[("mean", 5.0), ("variance", 1.0), ("p_in", 0.5), ("p_out", 0.4)]
            }
            GeographicalThreshold => &[("rate", 1.0), ("theta", 10.0)],
            SoftRandomGeometric | RandomGeometric => &[("radius", 1.0)],
            ThresholdedRandomGeometric => &[("radius", 1.0), ("theta", 2.0)],
            PlantedPartition => &[("groups", 2.0), ("p_in", 0.5), ("p_out", 0.4)],
            DirectedPlantedPartition => &[("group_size", 5.0), ("p_in", 0.8), ("p_out", 0.4)],
            UniformRandomIntersection => &[("m_offset", 3.0), ("p", 0.6)],
            RandomLobster => &[("p1", 0.6), ("p2", 0.5)],
            Gnr => &[("p", 0.5)],
            NavigableSmallWorld => &[("r", 2.0)],
            RandomKOut => &[("k", 2.0)],
            ScaleFree => &[
                ("alpha", 0.41),
                ("beta", 0.54),
                ("gamma", 0.05),
                ("delta_in", 0.2),
                ("delta_out", 0.0),
            ],
            _ => &[],
        };
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    /// Growth of the system size with `n`: vertex count for Laplacian
    /// families, vertices plus edges for directed ones.
    pub fn size_growth(&self, params: &BTreeMap<String, f64>) -> Result<GrowthClass> {
        use FamilyId::*;
        let one = ratio(1, 1);
        Ok(match self {
            Hypercube | BalancedBinaryTree | BinomialTree => GrowthClass::exp_base(2.0),
            BalancedTernaryTree => GrowthClass::exp_base(3.0),
            Grid2dSquare => GrowthClass::exp_base(4.0),
            GeneralizedHypercube => match (params.get("a"), params.get("m")) {
                (Some(&a), None) => GrowthClass::exp_base(a),
                (None, Some(&m)) => GrowthClass::poly(ratio(m as i64, 1)),
                _ => return Err(Error::InvalidParam("generalized hypercube needs exactly one of a, m".into())),
            },
            MargulisGabberGalil | Paley | DirectedGaussianRandomPartition | DirectedPlantedPartition
            | NavigableSmallWorld | DirectedGnp => GrowthClass::poly(ratio(2, 1)),
            Sudoku => GrowthClass::poly(ratio(4, 1)),
            DirectedHypercube => GrowthClass::new(2f64.ln(), one, ratio(0, 1), ratio(0, 1)),
            Gnc => GrowthClass::new(0.0, one, one, ratio(0, 1)),
            _ => GrowthClass::poly(one),
        })
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub schedule: Vec<usize>,
    #[serde(default)]
    pub matrix_kind: Option<MatrixKind>,
    #[serde(default)]
    pub size_growth: Option<GrowthClass>,
    #[serde(default)]
    pub weight_rule: WeightRule,
    /// Run the source/sink repair on each directed instance.
    #[serde(default)]
    pub repair: bool,
}

impl FamilySpec {
    pub fn new(family: FamilyId, schedule: Vec<usize>) -> Self {
        FamilySpec {
            family,
            params: BTreeMap::new(),
            seed: None,
            schedule,
            matrix_kind: None,
            size_growth: None,
            weight_rule: WeightRule::Unit,
            repair: false,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Explicit parameters over the family defaults. A generalized
    /// hypercube given `m` drops the default `a`.
    pub fn effective_params(&self) -> BTreeMap<String, f64> {
        let mut p = self.family.default_params();
        if self.family == FamilyId::GeneralizedHypercube && self.params.contains_key("m") {
            p.remove("a");
        }
        p.extend(self.params.iter().map(|(k, v)| (k.clone(), *v)));
        p
    }

    pub fn matrix_kind(&self) -> MatrixKind {
        self.matrix_kind.unwrap_or_else(|| self.family.default_matrix_kind())
    }

    pub fn size_growth(&self) -> Result<GrowthClass> {
        self.family.size_growth(&self.effective_params())
    }

    pub fn base_seed(&self) -> Option<u64> {
        self.seed.or_else(|| self.family.default_seed())
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.effective_params();
        let known = self.family.default_params();
        for k in self.params.keys() {
            let alt = self.family == FamilyId::GeneralizedHypercube && k == "m";
            if !known.contains_key(k) && !alt {
                return Err(Error::InvalidParam(format!("unknown parameter {k:?} for {}", self.family)));
            }
        }
        let declared = self.family.size_growth(&params)?;
        if let Some(g) = &self.size_growth {
            if g.cmp_growth(&declared) != std::cmp::Ordering::Equal {
                return Err(Error::InvalidParam(format!(
                    "declared size growth {g} does not match construction {declared} for {}",
                    self.family
                )));
            }
        }
        let kind = self.matrix_kind();
        if kind != self.family.default_matrix_kind() {
            return Err(Error::KindMismatch(format!("{} cannot use {kind:?}", self.family)));
        }
        if self.repair && !self.family.is_directed() {
            return Err(Error::InvalidParam("repair applies to directed families only".into()));
        }
        if self.weight_rule != WeightRule::Unit
            && !matches!(self.family, FamilyId::Hypercube | FamilyId::MargulisGabberGalil)
        {
            return Err(Error::InvalidParam(format!("weight rules apply to hypercube and MGG, not {}", self.family)));
        }
        if self.schedule.is_empty() {
            return Err(Error::InvalidParam("empty schedule".into()));
        }
        Ok(())
    }
}

/// Per-instance seed: the first 8 bytes of SHA-256 over
/// `"{base}:{family}:{n}"`.
pub fn instance_seed(base: u64, family: FamilyId, n: usize) -> u64 {
    let digest = Sha256::digest(format!("{base}:{}:{n}", family.name()).as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub n: usize,
    pub graph: Graph,
    pub system_size: usize,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
    pub repair: Option<RepairReport>,
}

fn param(p: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    p.get(key).copied().ok_or_else(|| Error::InvalidParam(format!("missing parameter {key:?}")))
}

fn uparam(p: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = param(p, key)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::InvalidParam(format!("parameter {key:?} must be a non-negative integer, got {v}")));
    }
    Ok(v as usize)
}

/// Builds the graph for index `n`.
pub fn generate(spec: &FamilySpec, n: usize) -> Result<FamilyInstance> {
    spec.validate()?;
    generate_unchecked(spec, n)
}

fn generate_unchecked(spec: &FamilySpec, n: usize) -> Result<FamilyInstance> {
    use directed as d;
    use undirected as u;
    use FamilyId::*;
    let p = spec.effective_params();
    let seed = spec.base_seed().map(|b| instance_seed(b, spec.family, n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    let rng = &mut rng;
    let mut warnings = Vec::new();

    let mut graph = match spec.family {
        Hypercube => u::hypercube(n)?,
        GeneralizedHypercube => match (p.get("a"), p.get("m")) {
            (Some(_), None) => u::generalized_hypercube(uparam(&p, "a")?, n)?,
            (None, Some(_)) => u::generalized_hypercube(n, uparam(&p, "m")?)?,
            _ => return Err(Error::InvalidParam("generalized hypercube needs exactly one of a, m".into())),
        },
        MargulisGabberGalil => u::margulis_gabber_galil(n)?,
        Sudoku => u::sudoku(n)?,
        Grid2d => u::grid(uparam(&p, "r")? + 1, n + 1)?,
        Grid2dSquare => {
            if !(1..=7).contains(&n) {
                return Err(Error::InvalidParam(format!("grid_2d_square index {n} outside 1..=7")));
            }
            u::grid(1 << n, 1 << n)?
        }
        HexagonalLattice => u::hexagonal_lattice(n, uparam(&p, "c")?)?,
        TriangularLattice => u::triangular_lattice(n, uparam(&p, "c")?)?,
        Complete => u::complete(n)?,
        Turan => u::turan(n, uparam(&p, "p")?)?,
        HararyKn => u::harary_kn(uparam(&p, "k")?, n)?,
        HararyMn => u::harary_mn(n + uparam(&p, "extra_edges")?, n)?,
        Ladder => u::ladder(n, false)?,
        CircularLadder => u::ladder(n, true)?,
        RingOfCliques => u::ring_of_cliques(n, uparam(&p, "clique_size")?)?,
        BalancedBinaryTree => u::balanced_tree(2, n)?,
        BalancedTernaryTree => u::balanced_tree(3, n)?,
        BinomialTree => u::binomial_tree(n)?,
        RandomRegularExpander => {
            let (g, ok) = u::ramanujan_expander(uparam(&p, "k")?, n, uparam(&p, "max_attempts")?.max(1), rng)?;
            if !ok {
                warnings.push("ramanujan_failed".to_string());
            }
            g
        }
        BarabasiAlbert => u::barabasi_albert(n, uparam(&p, "m")?, rng)?,
        NewmanWattsStrogatz => u::newman_watts_strogatz(n, uparam(&p, "k")?, param(&p, "p")?, rng)?,
        RandomRegular => u::random_regular(uparam(&p, "k")?, n, rng)?,
        Gnp => u::gnp(n, param(&p, "p")?, rng)?,
        GaussianRandomPartition => {
            let sizes = u::gaussian_partition_sizes(n, param(&p, "mean")?, param(&p, "variance")?, rng)?;
            u::partition_graph(&sizes, param(&p, "p_in")?, param(&p, "p_out")?, rng)?
        }
        GeographicalThreshold => u::geographical_threshold(n, param(&p, "rate")?, param(&p, "theta")?, rng)?,
        SoftRandomGeometric => u::soft_random_geometric(n, param(&p, "radius")?, rng)?,
        ThresholdedRandomGeometric => {
            u::thresholded_random_geometric(n, param(&p, "radius")?, param(&p, "theta")?, rng)?
        }
        PlantedPartition => {
            let groups = uparam(&p, "groups")?;
            u::partition_graph(&vec![n; groups], param(&p, "p_in")?, param(&p, "p_out")?, rng)?
        }
        RandomGeometric => u::random_geometric(n, param(&p, "radius")?, rng)?,
        UniformRandomIntersection => {
            let m = n
                .checked_sub(uparam(&p, "m_offset")?)
                .filter(|&m| m >= 1)
                .ok_or_else(|| Error::InvalidParam(format!("uniform random intersection needs n > m_offset (n={n})")))?;
            u::uniform_random_intersection(n, m, param(&p, "p")?, rng)?
        }
        RandomLobster => u::random_lobster(n, param(&p, "p1")?, param(&p, "p2")?, rng)?,
        Paley => d::paley(n)?,
        DirectedHypercube => d::directed_hypercube(n)?,
        Gn => d::gn(n, rng)?,
        Gnc => d::gnc(n, rng)?,
        Gnr => d::gnr(n, param(&p, "p")?, rng)?,
        DirectedGaussianRandomPartition => {
            let sizes = u::gaussian_partition_sizes(n, param(&p, "mean")?, param(&p, "variance")?, rng)?;
            d::partition_digraph(&sizes, param(&p, "p_in")?, param(&p, "p_out")?, rng)?
        }
        DirectedPlantedPartition => {
            let size = uparam(&p, "group_size")?;
            d::partition_digraph(&vec![size; n], param(&p, "p_in")?, param(&p, "p_out")?, rng)?
        }
        NavigableSmallWorld => d::navigable_small_world(n, param(&p, "r")?, rng)?,
        DirectedGnp => d::gnp_digraph(n, param(&p, "p")?, rng)?,
        RandomKOut => d::random_k_out(n, uparam(&p, "k")?, rng)?,
        ScaleFree => d::scale_free(
            n,
            d::ScaleFreeParams {
                alpha: param(&p, "alpha")?,
                beta: param(&p, "beta")?,
                gamma: param(&p, "gamma")?,
                delta_in: param(&p, "delta_in")?,
                delta_out: param(&p, "delta_out")?,
            },
            rng,
        )?,
    };

    let repair = if spec.repair {
        let mut rrng = ChaCha8Rng::seed_from_u64(instance_seed(spec.base_seed().unwrap_or(0) ^ 0x5eed, spec.family, n));
        Some(repair_sources_sinks(&mut graph, &mut rrng)?)
    } else {
        None
    };
    if spec.weight_rule != WeightRule::Unit {
        apply_weight_rule(&mut graph, spec.family, spec.weight_rule)?;
    }

    let system_size = match spec.matrix_kind() {
        MatrixKind::Laplacian => graph.n_vertices(),
        MatrixKind::Incidence => graph.n_vertices() + graph.n_edges(),
    };
    Ok(FamilyInstance { family: spec.family, n, graph, system_size, seed, warnings, repair })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedInstance {
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub instances: Vec<FamilyInstance>,
    pub skipped: Vec<SkippedInstance>,
}

/// Generates every scheduled index in order; failures are recorded and
/// skipped.
pub fn enumerate_schedule(spec: &FamilySpec) -> Result<Schedule> {
    spec.validate()?;
    let mut instances = Vec::new();
    let mut skipped = Vec::new();
    for &n in &spec.schedule {
        match generate_unchecked(spec, n) {
            Ok(inst) => instances.push(inst),
            Err(e) => skipped.push(SkippedInstance { n, reason: e.to_string() }),
        }
    }
    Ok(Schedule { instances, skipped })
}

/// Reweights hypercube or MGG edges by the larger endpoint index `j`.
/// Hypercube: `log(j+5)`, `j+1`, `j^2+1`. MGG: `log(j+1)+1`, `j+1`,
/// `(j+1)^2`.
pub fn apply_weight_rule(g: &mut Graph, family: FamilyId, rule: WeightRule) -> Result<()> {
    let f: fn(f64) -> f64 = match (family, rule) {
        (_, WeightRule::Unit) => |_| 1.0,
        (FamilyId::Hypercube, WeightRule::Log) => |j| (j + 5.0).ln(),
        (FamilyId::Hypercube, WeightRule::Linear) => |j| j + 1.0,
        (FamilyId::Hypercube, WeightRule::Quadratic) => |j| j * j + 1.0,
        (FamilyId::MargulisGabberGalil, WeightRule::Log) => |j| (j + 1.0).ln() + 1.0,
        (FamilyId::MargulisGabberGalil, WeightRule::Linear) => |j| j + 1.0,
        (FamilyId::MargulisGabberGalil, WeightRule::Quadratic) => |j| (j + 1.0) * (j + 1.0),
        _ => return Err(Error::InvalidParam(format!("no weight rule {rule:?} for {family}"))),
    };
    for k in 0..g.n_edges() {
        let e = g.edges()[k];
        g.set_weight(k, f(e.u.max(e.v) as f64))?;
    }
    Ok(())
}
