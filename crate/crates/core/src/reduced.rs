//! The invariant subspace spanned by uniform superpositions over the four
//! vertex classes, and the reduced search Hamiltonians acting on it.
//!
//! Classes with no vertices (for example `k1 = 0`, or every vertex of a set
//! marked) are dropped from the basis instead of being zero-padded, so the
//! reduced dimension ranges from 2 to 4.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteInstance, MarkedSet, VertexClass};
use crate::operator::{BasisTag, HermitianOperator};

/// Operator used to effect the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Laplacian,
    Adjacency,
}

impl WalkKind {
    pub fn name(self) -> &'static str {
        match self {
            WalkKind::Laplacian => "laplacian",
            WalkKind::Adjacency => "adjacency",
        }
    }
}

impl std::str::FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "laplacian" | "l" => Ok(WalkKind::Laplacian),
            "adjacency" | "a" => Ok(WalkKind::Adjacency),
            other => Err(Error::InvalidParameter(format!("unknown walk kind `{other}`"))),
        }
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("jumping rate must be positive, got {gamma}")))
    }
}

/// Ordered list of the vertex classes present in an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedBasis {
    classes: Vec<VertexClass>,
}

impl ReducedBasis {
    pub fn for_instance(inst: &BipartiteInstance) -> Self {
        Self {
            classes: VertexClass::ALL
                .into_iter()
                .filter(|&c| inst.class_size(c) > 0)
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn index_of(&self, class: VertexClass) -> Option<usize> {
        self.classes.iter().position(|&c| c == class)
    }

    pub fn contains(&self, class: VertexClass) -> bool {
        self.index_of(class).is_some()
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Reduced(self.clone())
    }
}

/// Real state in the reduced basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    basis: ReducedBasis,
    amps: Vec<f64>,
}

impl ReducedState {
    pub fn new(basis: ReducedBasis, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), actual: amps.len() });
        }
        Ok(Self { basis, amps })
    }

    /// Builds a state from per-class amplitudes; absent classes must carry zero.
    fn from_classes(inst: &BipartiteInstance, f: impl Fn(VertexClass) -> f64) -> Self {
        let basis = ReducedBasis::for_instance(inst);
        let amps = basis.classes().iter().map(|&c| f(c)).collect();
        Self { basis, amps }
    }

    pub fn basis(&self) -> &ReducedBasis {
        &self.basis
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    /// Amplitude on a class, zero when the class is absent.
    pub fn amp(&self, class: VertexClass) -> f64 {
        self.basis.index_of(class).map_or(0.0, |i| self.amps[i])
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { basis: self.basis.clone(), amps: self.amps.iter().map(|a| a / n).collect() }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.basis, other.basis);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    /// `self + factor * other`.
    pub fn combine(&self, other: &Self, factor: f64) -> Self {
        debug_assert_eq!(self.basis, other.basis);
        Self {
            basis: self.basis.clone(),
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + factor * b).collect(),
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.amps.iter().map(|&a| Complex64::new(a, 0.0)).collect()
    }
}

/// Uniform superposition over one vertex class (`|a>`, `|b>`, `|c>` or `|d>`).
pub fn class_state(inst: &BipartiteInstance, class: VertexClass) -> Result<ReducedState> {
    if inst.class_size(class) == 0 {
        return Err(Error::InvalidParameter(format!(
            "class |{}> is empty for {inst}",
            class.label()
        )));
    }
    Ok(ReducedState::from_classes(inst, |c| if c == class { 1.0 } else { 0.0 }))
}

/// Equal superposition over all vertices.
pub fn state_s(inst: &BipartiteInstance) -> ReducedState {
    let n = inst.n() as f64;
    ReducedState::from_classes(inst, |c| (inst.class_size(c) as f64 / n).sqrt())
}

/// Set-weighted superposition: probability `1/(2 n1)` per first-set vertex and
/// `1/(2 n2)` per second-set vertex.
pub fn state_sigma(inst: &BipartiteInstance) -> ReducedState {
    ReducedState::from_classes(inst, |c| sigma_component(inst, c))
}

/// The partner of `|sigma>` with the first-set components negated.
pub fn state_delta(inst: &BipartiteInstance) -> ReducedState {
    ReducedState::from_classes(inst, |c| {
        let v = sigma_component(inst, c);
        if c.in_first_set() {
            -v
        } else {
            v
        }
    })
}

fn sigma_component(inst: &BipartiteInstance, class: VertexClass) -> f64 {
    let size = inst.class_size(class) as f64;
    let set = if class.in_first_set() { inst.n1() } else { inst.n2() } as f64;
    (size / (2.0 * set)).sqrt()
}

/// Adjacency matrix restricted to the class basis.
pub fn reduced_adjacency(inst: &BipartiteInstance) -> HermitianOperator {
    let basis = ReducedBasis::for_instance(inst);
    let classes = basis.classes().to_vec();
    HermitianOperator::from_upper(basis.dim(), basis.tag(), |i, j| {
        let (ci, cj) = (classes[i], classes[j]);
        if ci.in_first_set() == cj.in_first_set() {
            0.0
        } else {
            ((inst.class_size(ci) * inst.class_size(cj)) as f64).sqrt()
        }
    })
}

/// Degree matrix restricted to the class basis.
pub fn reduced_degree(inst: &BipartiteInstance) -> HermitianOperator {
    let basis = ReducedBasis::for_instance(inst);
    let diag: Vec<f64> = basis
        .classes()
        .iter()
        .map(|c| if c.in_first_set() { inst.n2() } else { inst.n1() } as f64)
        .collect();
    HermitianOperator::diagonal(&diag, basis.tag())
}

/// Oracle projector restricted to the class basis.
pub fn reduced_oracle(inst: &BipartiteInstance) -> HermitianOperator {
    let basis = ReducedBasis::for_instance(inst);
    let diag: Vec<f64> = basis
        .classes()
        .iter()
        .map(|c| if c.is_marked() { 1.0 } else { 0.0 })
        .collect();
    HermitianOperator::diagonal(&diag, basis.tag())
}

/// Walk generator (`L = A - D` or `A`) in the class basis.
pub fn reduced_walk(inst: &BipartiteInstance, kind: WalkKind) -> HermitianOperator {
    let adjacency = reduced_adjacency(inst);
    match kind {
        WalkKind::Adjacency => adjacency,
        WalkKind::Laplacian => adjacency
            .add_scaled(&reduced_degree(inst), -1.0)
            .expect("same basis"),
    }
}

/// Reduced search Hamiltonian `-gamma W - P`.
pub fn search_hamiltonian(
    inst: &BipartiteInstance,
    kind: WalkKind,
    gamma: f64,
) -> Result<HermitianOperator> {
    check_gamma(gamma)?;
    reduced_walk(inst, kind)
        .scaled(-gamma)
        .add_scaled(&reduced_oracle(inst), -1.0)
}

/// Embeds reduced amplitudes into the vertex space.
pub fn lift_amplitudes<T>(inst: &BipartiteInstance, marks: &MarkedSet, amps: &[T]) -> Result<Vec<T>>
where
    T: Copy + std::ops::Div<f64, Output = T> + num_traits::Zero,
{
    let basis = ReducedBasis::for_instance(inst);
    if amps.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), actual: amps.len() });
    }
    let scale: Vec<f64> = basis
        .classes()
        .iter()
        .map(|&c| (inst.class_size(c) as f64).sqrt())
        .collect();
    Ok(marks
        .classify(inst)
        .into_iter()
        .map(|c| match basis.index_of(c) {
            Some(i) => amps[i] / scale[i],
            None => T::zero(),
        })
        .collect())
}

pub fn lift(inst: &BipartiteInstance, marks: &MarkedSet, state: &ReducedState) -> Result<Vec<f64>> {
    lift_amplitudes(inst, marks, state.amps())
}

/// Orthogonal projection of a vertex-space vector onto the class basis.
///
/// Returns the reduced amplitudes and the norm of the component left outside
/// the subspace.
pub fn project_amplitudes(
    inst: &BipartiteInstance,
    marks: &MarkedSet,
    full: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    if full.len() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), actual: full.len() });
    }
    let basis = ReducedBasis::for_instance(inst);
    let classes = marks.classify(inst);
    let mut sums = vec![Complex64::new(0.0, 0.0); basis.dim()];
    for (v, &c) in classes.iter().enumerate() {
        if let Some(i) = basis.index_of(c) {
            sums[i] += full[v];
        }
    }
    let reduced: Vec<Complex64> = basis
        .classes()
        .iter()
        .zip(&sums)
        .map(|(&c, s)| s / (inst.class_size(c) as f64).sqrt())
        .collect();
    let back = lift_amplitudes(inst, marks, &reduced)?;
    let residual = full
        .iter()
        .zip(&back)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((reduced, residual))
}

pub fn project(
    inst: &BipartiteInstance,
    marks: &MarkedSet,
    full: &[f64],
) -> Result<(ReducedState, f64)> {
    let complex: Vec<Complex64> = full.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let (amps, residual) = project_amplitudes(inst, marks, &complex)?;
    let state = ReducedState::new(
        ReducedBasis::for_instance(inst),
        amps.into_iter().map(|a| a.re).collect(),
    )?;
    Ok((state, residual))
}
