//! Exact diagonalization of real-symmetric operators and spectral time
//! evolution `psi(t) = sum_i exp(-i E_i t) <v_i|psi0> v_i`.
//!
//! Small matrices (the 2x2..4x4 reduced Hamiltonians) go through cyclic
//! Jacobi; anything larger is reduced to tridiagonal form with Householder
//! reflections and finished with implicit-shift QL.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{BipartiteInstance, MarkedSet, VertexClass};
use crate::operator::{BasisTag, HermitianOperator};

const JACOBI_MAX_DIM: usize = 8;
const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Jacobi,
    TridiagonalQl,
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
///
/// Each eigenvector is normalized so that its largest-magnitude component is
/// positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Spectral norm, i.e. the largest eigenvalue magnitude.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `|| H v_i - E_i v_i ||`.
    pub fn residual(&self, h: &HermitianOperator, i: usize) -> f64 {
        let hv = h.apply(&self.vectors[i]);
        hv.iter()
            .zip(&self.vectors[i])
            .map(|(a, b)| (a - self.values[i] * b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest deviation of `V^T V` from the identity.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let dot: f64 = self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Squared overlap `|<x|v_i>|^2` with every eigenvector.
    pub fn overlaps(&self, x: &[f64]) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().powi(2))
            .collect()
    }

    /// Expansion coefficients of `psi0` in the eigenbasis.
    pub fn coefficients(&self, psi0: &[Complex64]) -> Vec<Complex64> {
        self.vectors
            .iter()
            .map(|v| v.iter().zip(psi0).map(|(a, b)| b * *a).sum())
            .collect()
    }

    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Vec<Complex64> {
        Propagator::from_parts(self.clone(), psi0).state_at(t)
    }
}

/// An initial state expanded once in the eigenbasis, ready to be evaluated at
/// arbitrary times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: EigenSystem,
    coeffs: Vec<Complex64>,
}

impl Propagator {
    pub fn new(h: &HermitianOperator, psi0: &[Complex64]) -> Result<Self> {
        if psi0.len() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), actual: psi0.len() });
        }
        Ok(Self::from_parts(diagonalize(h)?, psi0))
    }

    pub fn from_parts(eigen: EigenSystem, psi0: &[Complex64]) -> Self {
        let coeffs = eigen.coefficients(psi0);
        Self { eigen, coeffs }
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn state_at(&self, t: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.eigen.dim()];
        for ((lambda, v), c) in self.eigen.values.iter().zip(&self.eigen.vectors).zip(&self.coeffs) {
            let w = c * Complex64::from_polar(1.0, -lambda * t);
            for (o, x) in out.iter_mut().zip(v) {
                *o += w * *x;
            }
        }
        out
    }

    /// Amplitude on basis coordinate `index` at time `t`.
    pub fn amplitude_at(&self, index: usize, t: f64) -> Complex64 {
        self.eigen
            .values
            .iter()
            .zip(&self.eigen.vectors)
            .zip(&self.coeffs)
            .map(|((lambda, v), c)| c * Complex64::from_polar(v[index], -lambda * t))
            .sum()
    }
}

/// Which marked classes count as success.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Targets {
    A,
    B,
    Both,
}

impl Targets {
    pub fn classes(self) -> &'static [VertexClass] {
        match self {
            Targets::A => &[VertexClass::MarkedFirst],
            Targets::B => &[VertexClass::MarkedSecond],
            Targets::Both => &[VertexClass::MarkedFirst, VertexClass::MarkedSecond],
        }
    }

    /// Coordinates of the target classes in a given basis. For the full vertex
    /// space the marked vertices are placed canonically.
    pub fn indices(self, inst: &BipartiteInstance, basis: &BasisTag) -> Vec<usize> {
        match basis {
            BasisTag::Reduced(b) => self.classes().iter().filter_map(|&c| b.index_of(c)).collect(),
            BasisTag::Full => self.full_indices(inst, &MarkedSet::canonical(inst)),
        }
    }

    pub fn full_indices(self, inst: &BipartiteInstance, marks: &MarkedSet) -> Vec<usize> {
        let wanted = self.classes();
        marks
            .classify(inst)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| wanted.contains(c))
            .map(|(v, _)| v)
            .collect()
    }
}

impl std::str::FromStr for Targets {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Targets::A),
            "b" => Ok(Targets::B),
            "ab" | "both" | "a,b" => Ok(Targets::Both),
            other => Err(Error::InvalidParameter(format!("unknown target set `{other}`"))),
        }
    }
}

/// Time grid with probabilities (or any per-time scalar).
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn diagonalize(h: &HermitianOperator) -> Result<EigenSystem> {
    let method = if h.dim() <= JACOBI_MAX_DIM { Method::Jacobi } else { Method::TridiagonalQl };
    diagonalize_with(h, method)
}

pub fn diagonalize_with(h: &HermitianOperator, method: Method) -> Result<EigenSystem> {
    let (values, vectors) = match method {
        Method::Jacobi => jacobi(h)?,
        Method::TridiagonalQl => tridiagonal_ql(h)?,
    };
    Ok(finish(values, vectors))
}

/// Sorts ascending and fixes the sign of every eigenvector.
fn finish(values: Vec<f64>, vectors: Vec<Vec<f64>>) -> EigenSystem {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| values[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let v = &vectors[i];
            let mut lead = 0;
            for (k, x) in v.iter().enumerate() {
                if x.abs() > v[lead].abs() + 1e-12 {
                    lead = k;
                }
            }
            if v[lead] < 0.0 {
                v.iter().map(|x| -x).collect()
            } else {
                v.clone()
            }
        })
        .collect();
    EigenSystem { values, vectors }
}

/// Cyclic Jacobi rotations. Returns eigenvalues and eigenvectors (unsorted).
fn jacobi(h: &HermitianOperator) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = h.dim();
    let mut a = h.to_rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let threshold = OFF_DIAGONAL_TOL * h.frobenius_norm();

    let off_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { iterations: sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    Ok((values, vectors))
}

/// Householder tridiagonalization followed by implicit-shift QL.
fn tridiagonal_ql(h: &HermitianOperator) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = h.dim();
    let mut z = h.to_rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return Ok((d, Vec::new()));
    }
    // Deflation floor for blocks whose diagonal has collapsed to zero.
    let floor = f64::EPSILON * h.frobenius_norm();
    householder_tridiagonalize(&mut z, &mut d, &mut e);

    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs() + floor;
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iterations == MAX_SWEEPS {
                return Err(Error::NoConvergence { iterations, off_norm: e[l].abs() });
            }
            iterations += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let vectors = (0..n).map(|j| (0..n).map(|i| z[i][j]).collect()).collect();
    Ok((d, vectors))
}

/// Overwrites `a` with the orthogonal transform `Q` such that `Q^T A Q` is
/// tridiagonal with diagonal `d` and subdiagonal `e[1..]`.
fn householder_tridiagonalize(a: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    a[j][i] = a[i][j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let g: f64 = (0..i).map(|k| a[i][k] * a[k][j]).sum();
                for k in 0..i {
                    a[k][j] -= g * a[k][i];
                }
            }
        }
        d[i] = a[i][i];
        a[i][i] = 1.0;
        for j in 0..i {
            a[j][i] = 0.0;
            a[i][j] = 0.0;
        }
    }
}

/// `exp(-iHt) psi0`.
pub fn evolve(h: &HermitianOperator, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("evolution time must be non-negative, got {t}")));
    }
    Ok(Propagator::new(h, psi0)?.state_at(t))
}

/// Probability of finding a state in the target classes.
pub fn target_probability(
    inst: &BipartiteInstance,
    basis: &BasisTag,
    state: &[Complex64],
    targets: Targets,
) -> f64 {
    targets.indices(inst, basis).into_iter().map(|i| state[i].norm_sqr()).sum()
}

pub fn success_probability(
    inst: &BipartiteInstance,
    h: &HermitianOperator,
    psi0: &[Complex64],
    t: f64,
    targets: Targets,
) -> Result<f64> {
    let state = evolve(h, psi0, t)?;
    Ok(target_probability(inst, h.basis(), &state, targets))
}

/// Success probability on a uniform grid `0, ..., t_max` of `n_points` times.
pub fn probability_series(
    inst: &BipartiteInstance,
    h: &HermitianOperator,
    psi0: &[Complex64],
    t_max: f64,
    n_points: usize,
    targets: Targets,
) -> Result<EvolutionSeries> {
    if !(t_max > 0.0) || n_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need t_max > 0 and at least two points (t_max = {t_max}, points = {n_points})"
        )));
    }
    let propagator = Propagator::new(h, psi0)?;
    let indices = targets.indices(inst, h.basis());
    let times = uniform_grid(t_max, n_points);
    let values = times
        .iter()
        .map(|&t| indices.iter().map(|&i| propagator.amplitude_at(i, t).norm_sqr()).sum())
        .collect();
    Ok(EvolutionSeries { times, values })
}

/// `n` points from 0 to `t_max` inclusive, with the endpoint hit exactly.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { t_max } else { t_max * i as f64 / (n - 1) as f64 })
        .collect()
}
