//! Closed-form predictions: critical jumping rates, runtimes, final states,
//! leading-order eigensystems, which walk is faster, and coupon-collector
//! repetition counts.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteInstance, VertexClass};
use crate::quadrature;
use crate::reduced::{
    class_state, search_hamiltonian, state_delta, state_s, state_sigma, ReducedState, WalkKind,
};
use crate::spectral::{diagonalize, Targets};

/// One of the three resonances of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Laplacian walk at `gamma = 1/n2`, evolving `|s>` to `|a>`.
    LaplacianA,
    /// Laplacian walk at `gamma = 1/n1`, evolving `|s>` to `|b>`.
    LaplacianB,
    /// Adjacency walk at `gamma = 1/sqrt(n1 n2)`, evolving `|sigma>` to a mix of `|a>` and `|b>`.
    Adjacency,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::LaplacianA, Regime::LaplacianB, Regime::Adjacency];

    pub fn kind(self) -> WalkKind {
        match self {
            Regime::LaplacianA | Regime::LaplacianB => WalkKind::Laplacian,
            Regime::Adjacency => WalkKind::Adjacency,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::LaplacianA => "laplacian_a",
            Regime::LaplacianB => "laplacian_b",
            Regime::Adjacency => "adjacency",
        }
    }

    pub fn targets(self) -> Targets {
        match self {
            Regime::LaplacianA => Targets::A,
            Regime::LaplacianB => Targets::B,
            Regime::Adjacency => Targets::Both,
        }
    }

    /// Natural starting state: `|s>` for the Laplacian walk, `|sigma>` for the adjacency walk.
    pub fn initial_state(self, inst: &BipartiteInstance) -> ReducedState {
        match self.kind() {
            WalkKind::Laplacian => state_s(inst),
            WalkKind::Adjacency => state_sigma(inst),
        }
    }

    fn check(self, inst: &BipartiteInstance) -> Result<()> {
        match self {
            Regime::LaplacianA if inst.k1() == 0 => {
                Err(Error::RegimeMismatch { regime: self.name(), requirement: "k1 >= 1" })
            }
            Regime::LaplacianB if inst.k2() == 0 => {
                Err(Error::RegimeMismatch { regime: self.name(), requirement: "k2 >= 1" })
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "laplacian_a" | "a" => Ok(Regime::LaplacianA),
            "laplacian_b" | "b" => Ok(Regime::LaplacianB),
            "adjacency" | "star" => Ok(Regime::Adjacency),
            other => Err(Error::InvalidParameter(format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedEigenpair {
    pub label: &'static str,
    /// Unnormalized.
    pub vector: ReducedState,
    pub energy: f64,
}

/// Closed-form description of one search resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkPrediction {
    pub kind: WalkKind,
    pub regime: Regime,
    pub gamma_crit: f64,
    pub runtime: f64,
    pub final_state: ReducedState,
    /// The first two entries are the resonant pair whose splitting sets the runtime.
    pub eigenpairs: Vec<PredictedEigenpair>,
    /// Scale `N^(-3/2)` of the tolerance on the jumping rate.
    pub precision_scale: f64,
}

impl WalkPrediction {
    /// Energy splitting of the resonant pair.
    pub fn gap(&self) -> f64 {
        (self.eigenpairs[0].energy - self.eigenpairs[1].energy).abs()
    }
}

/// Critical jumping rate of a regime.
pub fn critical_gamma(inst: &BipartiteInstance, regime: Regime) -> f64 {
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    match regime {
        Regime::LaplacianA => 1.0 / n2,
        Regime::LaplacianB => 1.0 / n1,
        Regime::Adjacency => 1.0 / (n1 * n2).sqrt(),
    }
}

/// Runtime of a regime; infinite when the regime has nothing to find.
pub fn runtime(inst: &BipartiteInstance, regime: Regime) -> f64 {
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let (k1, k2) = (inst.k1() as f64, inst.k2() as f64);
    let n = inst.n() as f64;
    match regime {
        Regime::LaplacianA => PI / 2.0 * (n / k1).sqrt(),
        Regime::LaplacianB => PI / 2.0 * (n / k2).sqrt(),
        Regime::Adjacency => PI * (n1 * n2).sqrt() / (2.0 * (k2 * n1 + k1 * n2)).sqrt(),
    }
}

/// `k2 n1 + k1 n2`, the weight shared by every adjacency-walk formula.
fn adjacency_weight(inst: &BipartiteInstance) -> f64 {
    (inst.k2() * inst.n1() + inst.k1() * inst.n2()) as f64
}

/// Target of the adjacency walk: `sqrt(k1 n2 / W) |a> + sqrt(k2 n1 / W) |b>`.
pub fn adjacency_final_state(inst: &BipartiteInstance) -> ReducedState {
    let w = adjacency_weight(inst);
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let (k1, k2) = (inst.k1() as f64, inst.k2() as f64);
    let basis = crate::reduced::ReducedBasis::for_instance(inst);
    let amps = basis
        .classes()
        .iter()
        .map(|c| match c {
            VertexClass::MarkedFirst => (k1 * n2 / w).sqrt(),
            VertexClass::MarkedSecond => (k2 * n1 / w).sqrt(),
            _ => 0.0,
        })
        .collect();
    ReducedState::new(basis, amps).expect("amplitudes built from the basis")
}

pub fn predict(inst: &BipartiteInstance, regime: Regime) -> Result<WalkPrediction> {
    regime.check(inst)?;
    let n = inst.n() as f64;
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let (k1, k2) = (inst.k1() as f64, inst.k2() as f64);

    let (final_state, eigenpairs) = match regime {
        Regime::LaplacianA | Regime::LaplacianB => {
            let (class, k, tag) = if regime == Regime::LaplacianA {
                (VertexClass::MarkedFirst, k1, ["s+a", "s-a"])
            } else {
                (VertexClass::MarkedSecond, k2, ["s+b", "s-b"])
            };
            let target = class_state(inst, class)?;
            let s = state_s(inst);
            let e = (k / n).sqrt();
            let pairs = vec![
                PredictedEigenpair { label: tag[0], vector: s.combine(&target, 1.0), energy: -e },
                PredictedEigenpair { label: tag[1], vector: s.combine(&target, -1.0), energy: e },
            ];
            (target, pairs)
        }
        Regime::Adjacency => {
            let w = adjacency_weight(inst);
            let sigma = state_sigma(inst);
            let target = adjacency_final_state(inst);
            let split = (w / (2.0 * n1 * n2)).sqrt();
            let mut pairs = vec![
                PredictedEigenpair {
                    label: "psi_minus",
                    vector: sigma.combine(&target, 1.0),
                    energy: -1.0 - split,
                },
                PredictedEigenpair {
                    label: "psi_plus",
                    vector: sigma.combine(&target, -1.0),
                    energy: -1.0 + split,
                },
            ];
            if inst.k1() > 0 && inst.k2() > 0 {
                let a = class_state(inst, VertexClass::MarkedFirst)?;
                let b = class_state(inst, VertexClass::MarkedSecond)?;
                pairs.push(PredictedEigenpair {
                    label: "psi_minus_one",
                    vector: b.combine(&a, -(k2 * n1 / (k1 * n2)).sqrt()),
                    energy: -1.0,
                });
            }
            (target, pairs)
        }
    };

    Ok(WalkPrediction {
        kind: regime.kind(),
        regime,
        gamma_crit: critical_gamma(inst, regime),
        runtime: runtime(inst, regime),
        final_state,
        eigenpairs,
        precision_scale: n.powf(-1.5),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenpairResidual {
    pub label: &'static str,
    pub energy: f64,
    /// `||H v - E v|| / ||v||`.
    pub residual: f64,
    /// `residual / max(1, ||H||)`, with the spectral norm.
    pub relative_residual: f64,
    /// Largest squared overlap of the normalized prediction with an exact eigenvector.
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenpairReport {
    pub gamma: f64,
    pub pairs: Vec<EigenpairResidual>,
}

impl EigenpairReport {
    pub fn max_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.relative_residual).fold(0.0, f64::max)
    }
}

/// Residuals of the predicted eigenpairs against the exact reduced Hamiltonian
/// at the critical jumping rate.
pub fn verify_eigenpairs(inst: &BipartiteInstance, prediction: &WalkPrediction) -> Result<EigenpairReport> {
    let h = search_hamiltonian(inst, prediction.kind, prediction.gamma_crit)?;
    let exact = diagonalize(&h)?;
    let scale = exact.spectral_norm().max(1.0);
    let pairs = prediction
        .eigenpairs
        .iter()
        .map(|pair| {
            let v = pair.vector.amps();
            let norm = pair.vector.norm();
            let hv = h.apply(v);
            let residual = hv
                .iter()
                .zip(v)
                .map(|(x, y)| (x - pair.energy * y).powi(2))
                .sum::<f64>()
                .sqrt()
                / norm;
            let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
            let fidelity = exact.overlaps(&unit).into_iter().fold(0.0, f64::max);
            EigenpairResidual {
                label: pair.label,
                energy: pair.energy,
                residual,
                relative_residual: residual / scale,
                fidelity,
            }
        })
        .collect();
    Ok(EigenpairReport { gamma: prediction.gamma_crit, pairs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AdjacencyFaster,
    LaplacianFaster,
    Tie,
    RegimesEquivalent,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::AdjacencyFaster => "adjacency_faster",
            Verdict::LaplacianFaster => "laplacian_faster",
            Verdict::Tie => "tie",
            Verdict::RegimesEquivalent => "regimes_equivalent",
        }
    }
}

/// Which walk finds a marked vertex first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedVerdict {
    pub verdict: Verdict,
    /// Crossover value of `k1` (when `n1 > n2`) or `k2` (when `n1 < n2`).
    pub threshold: Option<f64>,
    /// The Laplacian regime the adjacency walk is compared against.
    pub rival: Option<Regime>,
}

const TIE_TOLERANCE: f64 = 1e-12;

/// Set sizes within `sqrt(n)` of each other make the two walks asymptotically equivalent.
pub fn regimes_equivalent(inst: &BipartiteInstance) -> bool {
    (inst.n1() as f64 - inst.n2() as f64).abs() <= (inst.n() as f64).sqrt()
}

pub fn faster_walk(inst: &BipartiteInstance) -> SpeedVerdict {
    if regimes_equivalent(inst) {
        return SpeedVerdict { verdict: Verdict::RegimesEquivalent, threshold: None, rival: None };
    }
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let (k1, k2) = (inst.k1() as f64, inst.k2() as f64);
    let (k, threshold, rival) = if n1 > n2 {
        (k1, k2 * (n1 / n2) * (n1 + n2) / (n1 - n2), Regime::LaplacianA)
    } else {
        (k2, k1 * (n2 / n1) * (n1 + n2) / (n2 - n1), Regime::LaplacianB)
    };
    let verdict = if (k - threshold).abs() <= TIE_TOLERANCE * threshold.max(1.0) {
        Verdict::Tie
    } else if k < threshold {
        Verdict::AdjacencyFaster
    } else {
        Verdict::LaplacianFaster
    };
    SpeedVerdict { verdict, threshold: Some(threshold), rival: Some(rival) }
}

/// Verdict obtained by comparing the runtime formulas directly.
pub fn faster_walk_by_runtime(inst: &BipartiteInstance) -> Verdict {
    if regimes_equivalent(inst) {
        return Verdict::RegimesEquivalent;
    }
    let laplacian = runtime(inst, Regime::LaplacianA).min(runtime(inst, Regime::LaplacianB));
    let adjacency = runtime(inst, Regime::Adjacency);
    if (laplacian - adjacency).abs() <= TIE_TOLERANCE * adjacency {
        Verdict::Tie
    } else if adjacency < laplacian {
        Verdict::AdjacencyFaster
    } else {
        Verdict::LaplacianFaster
    }
}

/// `H_n` as an exact fraction.
pub fn harmonic_exact(n: u64) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::one(), BigInt::from(i))
    })
}

pub fn harmonic(n: u64) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// Expected repetitions to see every marked vertex with the Laplacian walk,
/// `k1 H_k1 + k2 H_k2`, as an exact fraction.
pub fn expected_repetitions_laplacian_exact(k1: u64, k2: u64) -> BigRational {
    let term = |k: u64| BigRational::from_integer(BigInt::from(k)) * harmonic_exact(k);
    term(k1) + term(k2)
}

pub fn expected_repetitions_laplacian(k1: u64, k2: u64) -> f64 {
    k1 as f64 * harmonic(k1) + k2 as f64 * harmonic(k2)
}

/// Expected repetitions to see every marked vertex when sampling the adjacency
/// walk's final state: the non-uniform coupon collector integral
/// `int_0^inf 1 - (1 - e^{-n2 t / W})^k1 (1 - e^{-n1 t / W})^k2 dt`.
pub fn expected_repetitions_adjacency(inst: &BipartiteInstance) -> Result<f64> {
    let w = adjacency_weight(inst);
    let (k1, k2) = (inst.k1() as f64, inst.k2() as f64);
    let rate1 = inst.n2() as f64 / w;
    let rate2 = inst.n1() as f64 / w;
    let slowest = [(k1, rate1), (k2, rate2)]
        .into_iter()
        .filter(|&(k, _)| k > 0.0)
        .map(|(_, r)| r)
        .fold(f64::INFINITY, f64::min);
    // Beyond this the integrand is below 1e-12.
    let upper = ((k1 + k2).ln() + 35.0) / slowest;

    let integrand = |t: f64| {
        // log of the product, each factor as log(1 - e^{-rt})
        let log_seen = |k: f64, rate: f64| if k > 0.0 { k * (-(-rate * t).exp()).ln_1p() } else { 0.0 };
        -(log_seen(k1, rate1) + log_seen(k2, rate2)).exp_m1()
    };
    quadrature::integrate(integrand, 0.0, upper, 1e-9)
}

/// Success probability reachable from `|s>` under the adjacency walk, carried
/// by its `|sigma>` component: `1/2 + sqrt(n1 n2) / n`.
pub fn success_bound_from_s(inst: &BipartiteInstance) -> f64 {
    0.5 + ((inst.n1() * inst.n2()) as f64).sqrt() / inst.n() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    /// `<delta|H|delta>` at the critical jumping rate.
    pub rayleigh: f64,
    /// `|| H|delta> - <delta|H|delta> |delta> ||`.
    pub residual: f64,
    pub sigma_overlap: f64,
}

/// How close `|delta>` is to a stationary state of the adjacency search Hamiltonian.
pub fn delta_phase_invariance_check(inst: &BipartiteInstance) -> Result<DeltaReport> {
    let h = search_hamiltonian(inst, WalkKind::Adjacency, critical_gamma(inst, Regime::Adjacency))?;
    let delta = state_delta(inst);
    let hd = h.apply(delta.amps());
    let rayleigh: f64 = hd.iter().zip(delta.amps()).map(|(x, y)| x * y).sum();
    let residual = hd
        .iter()
        .zip(delta.amps())
        .map(|(x, y)| (x - rayleigh * y).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(DeltaReport { rayleigh, residual, sigma_overlap: delta.dot(&state_sigma(inst)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n1: usize, n2: usize, k1: usize, k2: usize) -> BipartiteInstance {
        BipartiteInstance::new(n1, n2, k1, k2).unwrap()
    }

    #[test]
    fn canonical_predictions() {
        let i = BipartiteInstance::canonical();
        let a = predict(&i, Regime::LaplacianA).unwrap();
        assert_eq!(a.gamma_crit, 1.0 / 256.0);
        assert!((a.runtime - 8.0 * PI).abs() < 1e-12);
        assert!((a.runtime - 25.133).abs() < 1e-3);

        let b = predict(&i, Regime::LaplacianB).unwrap();
        assert_eq!(b.gamma_crit, 1.0 / 512.0);
        assert!((b.runtime - 19.468).abs() < 1e-3);

        let s = predict(&i, Regime::Adjacency).unwrap();
        assert!((s.gamma_crit - 0.00276).abs() < 1e-5);
        assert!((s.runtime - 13.941).abs() < 1e-3);
        let pa = s.final_state.amp(VertexClass::MarkedFirst).powi(2);
        let pb = s.final_state.amp(VertexClass::MarkedSecond).powi(2);
        assert!((pa - 768.0 / 3328.0).abs() < 1e-15);
        assert!((pa - 0.231).abs() < 5e-4 && (pb - 0.769).abs() < 5e-4);
        assert!((s.final_state.norm() - 1.0).abs() < 1e-12);
        assert_eq!(s.eigenpairs.len(), 3);
        assert!((s.precision_scale - 768f64.powf(-1.5)).abs() < 1e-18);
    }

    #[test]
    fn runtime_is_pi_over_gap() {
        for i in [inst(512, 256, 3, 5), inst(2048, 1024, 3, 5), inst(300, 900, 7, 1), inst(64, 64, 2, 2)] {
            for r in Regime::ALL {
                let p = predict(&i, r).unwrap();
                assert!((p.runtime - PI / p.gap()).abs() < 1e-12 * p.runtime);
            }
        }
    }

    #[test]
    fn regime_mismatch() {
        let i = inst(10, 8, 0, 2);
        assert!(matches!(predict(&i, Regime::LaplacianA), Err(Error::RegimeMismatch { .. })));
        assert!(predict(&i, Regime::LaplacianB).is_ok());
        let p = predict(&i, Regime::Adjacency).unwrap();
        assert_eq!(p.eigenpairs.len(), 2);
        assert!(predict(&inst(10, 8, 2, 0), Regime::LaplacianB).is_err());
    }

    // Reference residuals were computed independently with numpy on the
    // printed 4x4 matrices.
    #[test]
    fn eigenpair_residuals_canonical() {
        let i = BipartiteInstance::canonical();
        let report = verify_eigenpairs(&i, &predict(&i, Regime::LaplacianA).unwrap()).unwrap();
        assert!((report.pairs[0].residual - 0.0866379100).abs() < 1e-8);
        assert!((report.pairs[1].residual - 0.0822850736).abs() < 1e-8);
        assert!(report.max_relative_residual() < 0.05);

        let report = verify_eigenpairs(&i, &predict(&i, Regime::Adjacency).unwrap()).unwrap();
        assert!((report.pairs[0].residual - 0.0406703135).abs() < 1e-8);
        assert!((report.pairs[1].residual - 0.0455427925).abs() < 1e-8);
        let minus_one = &report.pairs[2];
        assert!((minus_one.residual - 0.0949443157).abs() < 1e-8);
        assert!(minus_one.fidelity > 0.997);
    }

    #[test]
    fn eigenpair_residuals_shrink_with_size() {
        let small = BipartiteInstance::canonical();
        let big = inst(2048, 1024, 3, 5);
        for r in Regime::ALL {
            let rs = verify_eigenpairs(&small, &predict(&small, r).unwrap()).unwrap();
            let rb = verify_eigenpairs(&big, &predict(&big, r).unwrap()).unwrap();
            for (p, q) in rs.pairs.iter().zip(&rb.pairs) {
                assert!(q.residual < p.residual, "{} {}", r.name(), p.label);
            }
        }
    }

    #[test]
    fn table_two_examples() {
        let v = faster_walk(&inst(512, 256, 3, 5));
        assert_eq!(v.verdict, Verdict::AdjacencyFaster);
        assert_eq!(v.threshold, Some(30.0));
        assert_eq!(v.rival, Some(Regime::LaplacianA));
        assert_eq!(faster_walk(&inst(512, 256, 30, 5)).verdict, Verdict::Tie);
        assert_eq!(faster_walk(&inst(512, 256, 31, 5)).verdict, Verdict::LaplacianFaster);

        let v = faster_walk(&inst(512, 1024, 3, 20));
        assert_eq!(v.verdict, Verdict::LaplacianFaster);
        assert!((v.threshold.unwrap() - 18.0).abs() < 1e-12);
        assert_eq!(faster_walk(&inst(512, 1024, 3, 17)).verdict, Verdict::AdjacencyFaster);

        assert_eq!(faster_walk(&inst(100, 100, 3, 5)).verdict, Verdict::RegimesEquivalent);
        assert_eq!(faster_walk(&inst(100, 108, 3, 5)).verdict, Verdict::RegimesEquivalent);
    }

    #[test]
    fn uniform_coupon_values() {
        assert_eq!(expected_repetitions_laplacian_exact(1, 0), BigRational::one());
        assert_eq!(expected_repetitions_laplacian_exact(0, 1), BigRational::one());
        assert_eq!(
            expected_repetitions_laplacian_exact(3, 5),
            BigRational::new(BigInt::from(203), BigInt::from(12))
        );
        assert!((expected_repetitions_laplacian(3, 5) - 16.917).abs() < 1e-3);
        assert_eq!(expected_repetitions_laplacian(0, 0), 0.0);
    }

    #[test]
    fn non_uniform_coupon_values() {
        let v = expected_repetitions_adjacency(&BipartiteInstance::canonical()).unwrap();
        assert!((v - 26.368).abs() < 0.01, "{v}");
        // scipy.integrate.quad on the same integrand gives 26.368001443.
        assert!((v - 26.368001443).abs() < 1e-4);

        // k1 = 1, k2 = 0: a single exponential with unit rate.
        let single = expected_repetitions_adjacency(&inst(40, 30, 1, 0)).unwrap();
        assert!((single - 1.0).abs() < 1e-6);
    }

    #[test]
    fn non_uniform_reduces_to_uniform_on_regular_graphs() {
        for k in [1u64, 2, 4, 7] {
            let i = inst(200, 200, k as usize, k as usize);
            let v = expected_repetitions_adjacency(&i).unwrap();
            let uniform = 2.0 * k as f64 * harmonic(2 * k);
            assert!((v - uniform).abs() < 1e-3, "k = {k}: {v} vs {uniform}");
        }
    }

    #[test]
    fn success_bound() {
        assert!((success_bound_from_s(&inst(64, 64, 1, 1)) - 1.0).abs() < 1e-15);
        let b = success_bound_from_s(&BipartiteInstance::canonical());
        assert!((b - 0.9714045208).abs() < 1e-9);
        assert!(success_bound_from_s(&inst(1000, 1, 1, 0)) >= 0.5);
    }

    #[test]
    fn delta_is_nearly_stationary() {
        let small = delta_phase_invariance_check(&BipartiteInstance::canonical()).unwrap();
        // numpy reference: 0.1119559804 at K(512, 256)
        assert!((small.residual - 0.1119559804).abs() < 1e-8);
        assert!(small.sigma_overlap.abs() < 1e-15);
        let big = delta_phase_invariance_check(&inst(2048, 1024, 3, 5)).unwrap();
        assert!(big.residual < small.residual);
        assert!((big.residual - 0.0562472661).abs() < 1e-8);
    }
}
