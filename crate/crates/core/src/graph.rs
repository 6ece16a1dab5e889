//! The complete bipartite graph K(n1, n2) with marked vertices, and its
//! matrix representations over the full vertex space.
//!
//! Vertices of the first set occupy indices `0..n1`, vertices of the second
//! set occupy `n1..n1 + n2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{BasisTag, HermitianOperator};
use crate::reduced::WalkKind;

/// Problem parameters: set sizes and marked counts per set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct BipartiteInstance {
    n1: usize,
    n2: usize,
    k1: usize,
    k2: usize,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    n1: usize,
    n2: usize,
    k1: usize,
    k2: usize,
}

impl TryFrom<RawInstance> for BipartiteInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Self::new(raw.n1, raw.n2, raw.k1, raw.k2)
    }
}

impl From<BipartiteInstance> for RawInstance {
    fn from(inst: BipartiteInstance) -> Self {
        RawInstance { n1: inst.n1, n2: inst.n2, k1: inst.k1, k2: inst.k2 }
    }
}

impl BipartiteInstance {
    pub fn new(n1: usize, n2: usize, k1: usize, k2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidInstance(format!(
                "set sizes must be positive (n1 = {n1}, n2 = {n2})"
            )));
        }
        if k1 > n1 {
            return Err(Error::InvalidInstance(format!("k1 = {k1} exceeds n1 = {n1}")));
        }
        if k2 > n2 {
            return Err(Error::InvalidInstance(format!("k2 = {k2} exceeds n2 = {n2}")));
        }
        if k1 + k2 == 0 {
            return Err(Error::InvalidInstance(
                "at least one vertex must be marked (k1 + k2 >= 1)".into(),
            ));
        }
        Ok(Self { n1, n2, k1, k2 })
    }

    /// The instance used throughout the figures: 512 + 256 vertices, 3 + 5 marked.
    pub fn canonical() -> Self {
        Self { n1: 512, n2: 256, k1: 3, k2: 5 }
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }
    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }
    #[inline]
    pub fn k1(&self) -> usize {
        self.k1
    }
    #[inline]
    pub fn k2(&self) -> usize {
        self.k2
    }

    /// Total vertex count.
    #[inline]
    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    /// Unmarked vertices in the first set.
    #[inline]
    pub fn unmarked1(&self) -> usize {
        self.n1 - self.k1
    }

    /// Unmarked vertices in the second set.
    #[inline]
    pub fn unmarked2(&self) -> usize {
        self.n2 - self.k2
    }

    pub fn is_regular(&self) -> bool {
        self.n1 == self.n2
    }

    pub fn class_size(&self, class: VertexClass) -> usize {
        match class {
            VertexClass::MarkedFirst => self.k1,
            VertexClass::MarkedSecond => self.k2,
            VertexClass::UnmarkedFirst => self.unmarked1(),
            VertexClass::UnmarkedSecond => self.unmarked2(),
        }
    }
}

impl std::fmt::Display for BipartiteInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K({}, {}) with k1 = {}, k2 = {}", self.n1, self.n2, self.k1, self.k2)
    }
}

/// The four classes of identically evolving vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexClass {
    /// Marked vertices of the first set, spanning `|a>`.
    MarkedFirst,
    /// Marked vertices of the second set, spanning `|b>`.
    MarkedSecond,
    /// Unmarked vertices of the first set, spanning `|c>`.
    UnmarkedFirst,
    /// Unmarked vertices of the second set, spanning `|d>`.
    UnmarkedSecond,
}

impl VertexClass {
    pub const ALL: [VertexClass; 4] = [
        VertexClass::MarkedFirst,
        VertexClass::MarkedSecond,
        VertexClass::UnmarkedFirst,
        VertexClass::UnmarkedSecond,
    ];

    pub fn label(self) -> char {
        match self {
            VertexClass::MarkedFirst => 'a',
            VertexClass::MarkedSecond => 'b',
            VertexClass::UnmarkedFirst => 'c',
            VertexClass::UnmarkedSecond => 'd',
        }
    }

    pub fn in_first_set(self) -> bool {
        matches!(self, VertexClass::MarkedFirst | VertexClass::UnmarkedFirst)
    }

    pub fn is_marked(self) -> bool {
        matches!(self, VertexClass::MarkedFirst | VertexClass::MarkedSecond)
    }
}

/// Concrete placement of the marked vertices, as global vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    first: Vec<usize>,
    second: Vec<usize>,
}

impl MarkedSet {
    /// Marks the lowest `k1` indices of the first set and the lowest `k2` of the second.
    pub fn canonical(inst: &BipartiteInstance) -> Self {
        Self {
            first: (0..inst.k1).collect(),
            second: (inst.n1..inst.n1 + inst.k2).collect(),
        }
    }

    pub fn new(inst: &BipartiteInstance, first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        if first.len() != inst.k1 || second.len() != inst.k2 {
            return Err(Error::InvalidInstance(format!(
                "marked set sizes ({}, {}) do not match (k1, k2) = ({}, {})",
                first.len(),
                second.len(),
                inst.k1,
                inst.k2
            )));
        }
        let mut seen = vec![false; inst.n()];
        for (&v, in_first) in first.iter().map(|v| (v, true)).chain(second.iter().map(|v| (v, false))) {
            let in_range = if in_first { v < inst.n1 } else { (inst.n1..inst.n()).contains(&v) };
            if !in_range {
                return Err(Error::InvalidInstance(format!("marked vertex {v} is outside its set")));
            }
            if seen[v] {
                return Err(Error::InvalidInstance(format!("marked vertex {v} listed twice")));
            }
            seen[v] = true;
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    /// Class of every vertex, indexed by vertex.
    pub fn classify(&self, inst: &BipartiteInstance) -> Vec<VertexClass> {
        let mut classes: Vec<VertexClass> = (0..inst.n())
            .map(|v| {
                if v < inst.n1 {
                    VertexClass::UnmarkedFirst
                } else {
                    VertexClass::UnmarkedSecond
                }
            })
            .collect();
        for &v in &self.first {
            classes[v] = VertexClass::MarkedFirst;
        }
        for &v in &self.second {
            classes[v] = VertexClass::MarkedSecond;
        }
        classes
    }
}

#[inline]
fn in_first(inst: &BipartiteInstance, v: usize) -> bool {
    v < inst.n1
}

/// Adjacency matrix: every first-set vertex joined to every second-set vertex.
pub fn build_adjacency(inst: &BipartiteInstance) -> HermitianOperator {
    HermitianOperator::from_upper(inst.n(), BasisTag::Full, |i, j| {
        if in_first(inst, i) != in_first(inst, j) {
            1.0
        } else {
            0.0
        }
    })
}

/// Degree matrix: `n2` on first-set vertices, `n1` on second-set vertices.
pub fn build_degree(inst: &BipartiteInstance) -> HermitianOperator {
    let degrees: Vec<f64> = (0..inst.n())
        .map(|v| if in_first(inst, v) { inst.n2 as f64 } else { inst.n1 as f64 })
        .collect();
    HermitianOperator::diagonal(&degrees, BasisTag::Full)
}

/// Graph Laplacian with the `A - D` sign convention (negative semidefinite).
pub fn build_laplacian(inst: &BipartiteInstance) -> HermitianOperator {
    build_adjacency(inst)
        .add_scaled(&build_degree(inst), -1.0)
        .expect("adjacency and degree share a dimension")
}

/// Diagonal 0/1 projector onto the marked vertices.
pub fn oracle_projector(inst: &BipartiteInstance, marks: &MarkedSet) -> HermitianOperator {
    let mut diag = vec![0.0; inst.n()];
    for &v in marks.first.iter().chain(&marks.second) {
        diag[v] = 1.0;
    }
    HermitianOperator::diagonal(&diag, BasisTag::Full)
}

/// Full-space search Hamiltonian `-gamma W - P`, with `W` the Laplacian or adjacency matrix.
pub fn full_search_hamiltonian(
    inst: &BipartiteInstance,
    marks: &MarkedSet,
    kind: WalkKind,
    gamma: f64,
) -> Result<HermitianOperator> {
    crate::reduced::check_gamma(gamma)?;
    let walk = match kind {
        WalkKind::Laplacian => build_laplacian(inst),
        WalkKind::Adjacency => build_adjacency(inst),
    };
    walk.scaled(-gamma).add_scaled(&oracle_projector(inst, marks), -1.0)
}
