//! Numerical experiments over parameter sweeps: eigenstate overlaps versus
//! jumping rate, peak detection in success-probability curves, numerical
//! critical-rate search, and detuning sweeps.

use crate::analytics::{self, Regime};
use crate::error::{Error, Result};
use crate::graph::BipartiteInstance;
use crate::reduced::{search_hamiltonian, ReducedState, WalkKind};
use crate::spectral::{diagonalize, uniform_grid, Propagator, Targets};

const SCAN_POINTS: usize = 400;
const PEAK_TIME_TOL: f64 = 1e-6;
const GAMMA_GRID_POINTS: usize = 120;
const GAMMA_TOL: f64 = 1e-4;
const FLAT_LANDSCAPE: f64 = 0.05;

/// Squared overlaps of reference states with the eigenstates of the search
/// Hamiltonian, eigenstates indexed by ascending energy.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCurve {
    pub gammas: Vec<f64>,
    pub reference_names: Vec<String>,
    /// `eigenvalues[g][i]`
    pub eigenvalues: Vec<Vec<f64>>,
    /// `overlaps[g][r][i] = |<ref_r|psi_i>|^2`
    pub overlaps: Vec<Vec<Vec<f64>>>,
}

impl OverlapCurve {
    pub fn dim(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub t_peak: f64,
    pub p_peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetuningSweep {
    pub gamma_crit: f64,
    pub epsilons: Vec<f64>,
    pub p_peak: Vec<f64>,
    /// `None` where the curve had no interior maximum and the best scanned value was used.
    pub t_peak: Vec<Option<f64>>,
}

pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "log grid needs 0 < lo < hi and n >= 2");
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

pub fn overlap_sweep(
    inst: &BipartiteInstance,
    kind: WalkKind,
    gammas: &[f64],
    references: &[(&str, ReducedState)],
) -> Result<OverlapCurve> {
    if gammas.is_empty() || gammas[0] <= 0.0 || gammas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "jumping-rate grid must be positive and strictly increasing".into(),
        ));
    }
    let rows = par_map(gammas, |&gamma| -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let eig = diagonalize(&search_hamiltonian(inst, kind, gamma)?)?;
        let overlaps = references.iter().map(|(_, r)| eig.overlaps(r.amps())).collect();
        Ok((eig.values().to_vec(), overlaps))
    });
    let (eigenvalues, overlaps) = rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    Ok(OverlapCurve {
        gammas: gammas.to_vec(),
        reference_names: references.iter().map(|(n, _)| n.to_string()).collect(),
        eigenvalues,
        overlaps,
    })
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `rel_tol` times its midpoint.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (0.5 * (a + b)).abs() {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// First maximum of the success probability whose height exceeds half of the
/// largest value seen on a uniform scan of `[0, t_max]`.
pub fn find_peak(
    inst: &BipartiteInstance,
    kind: WalkKind,
    gamma: f64,
    initial: &ReducedState,
    targets: Targets,
    t_max: f64,
) -> Result<PeakResult> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!("t_max must be positive, got {t_max}")));
    }
    let h = search_hamiltonian(inst, kind, gamma)?;
    let propagator = Propagator::new(&h, &initial.to_complex())?;
    let indices = targets.indices(inst, h.basis());
    let prob = |t: f64| -> f64 {
        indices.iter().map(|&i| propagator.amplitude_at(i, t).norm_sqr()).sum()
    };

    let times = uniform_grid(t_max, SCAN_POINTS);
    let values: Vec<f64> = times.iter().map(|&t| prob(t)).collect();
    let (best, p_best) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p > acc.1 { (i, p) } else { acc });

    let first = (1..SCAN_POINTS - 1).find(|&i| {
        values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > 0.5 * p_best
    });
    let Some(i) = first else {
        return Err(Error::NoLocalMaximum { t_best: times[best], p_best });
    };
    let (t, p) = golden_max(prob, times[i - 1], times[i + 1], PEAK_TIME_TOL);
    Ok(if p >= values[i] {
        PeakResult { t_peak: t, p_peak: p }
    } else {
        PeakResult { t_peak: times[i], p_peak: values[i] }
    })
}

/// Like [`find_peak`], but a curve without an interior maximum yields its best
/// scanned value and no peak time.
pub fn peak_or_best(
    inst: &BipartiteInstance,
    kind: WalkKind,
    gamma: f64,
    initial: &ReducedState,
    targets: Targets,
    t_max: f64,
) -> Result<(f64, Option<f64>)> {
    match find_peak(inst, kind, gamma, initial, targets, t_max) {
        Ok(peak) => Ok((peak.p_peak, Some(peak.t_peak))),
        Err(Error::NoLocalMaximum { p_best, .. }) => Ok((p_best, None)),
        Err(e) => Err(e),
    }
}

fn regime_peak(inst: &BipartiteInstance, regime: Regime, gamma: f64, t_max: f64) -> Result<(f64, Option<f64>)> {
    let initial = regime.initial_state(inst);
    peak_or_best(inst, regime.kind(), gamma, &initial, regime.targets(), t_max)
}

/// Jumping rate that maximizes the peak success probability of a regime.
///
/// The rate is scanned on a log grid spanning `[0.1/max(n1, n2), 10/sqrt(n1 n2)]`;
/// for the Laplacian regimes the scan is restricted to the neighbourhood of
/// the regime's own resonance so the two resonances are not confused.
pub fn critical_gamma_search(inst: &BipartiteInstance, regime: Regime) -> Result<f64> {
    let prediction = analytics::predict(inst, regime)?;
    let t_max = 2.0 * prediction.runtime;
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let mut grid = log_grid(0.1 / n1.max(n2), 10.0 / (n1 * n2).sqrt(), GAMMA_GRID_POINTS);

    if regime.kind() == WalkKind::Laplacian {
        let centre = prediction.gamma_crit;
        let spread = (n1.max(n2) / n1.min(n2)).sqrt().clamp(1.2, 2.0);
        grid.retain(|&g| g >= centre / spread && g <= centre * spread);
        if grid.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "too few grid points near the {} resonance",
                regime.name()
            )));
        }
    }

    let peaks = par_map(&grid, |&g| regime_peak(inst, regime, g, t_max).map(|(p, _)| p))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = peaks
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    if hi - lo < FLAT_LANDSCAPE {
        return Err(Error::DegenerateLandscape { spread: hi - lo });
    }
    let best = peaks
        .iter()
        .enumerate()
        .fold(0, |b, (i, &p)| if p > peaks[b] { i } else { b });
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let objective = |g: f64| regime_peak(inst, regime, g, t_max).map_or(f64::NEG_INFINITY, |(p, _)| p);
    let (gamma, p) = golden_max(objective, a, b, GAMMA_TOL);
    Ok(if p >= peaks[best] { gamma } else { grid[best] })
}

/// Peak success probability at `gamma_crit + eps` for each offset, searched
/// over `[0, 3 * runtime]`.
pub fn detuning_sweep(
    inst: &BipartiteInstance,
    regime: Regime,
    gamma_crit: f64,
    epsilons: &[f64],
) -> Result<DetuningSweep> {
    if !epsilons.contains(&0.0) {
        return Err(Error::InvalidParameter("detuning offsets must include 0".into()));
    }
    if let Some(eps) = epsilons.iter().find(|&&e| !(gamma_crit + e > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "offset {eps} makes the jumping rate non-positive"
        )));
    }
    let t_max = 3.0 * analytics::predict(inst, regime)?.runtime;
    let rows = par_map(epsilons, |&eps| regime_peak(inst, regime, gamma_crit + eps, t_max))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (p_peak, t_peak) = rows.into_iter().unzip();
    Ok(DetuningSweep { gamma_crit, epsilons: epsilons.to_vec(), p_peak, t_peak })
}

/// Energy gap between the two eigenstates that carry most of `initial`.
pub fn resonant_gap(
    inst: &BipartiteInstance,
    kind: WalkKind,
    gamma: f64,
    initial: &ReducedState,
) -> Result<f64> {
    let eig = diagonalize(&search_hamiltonian(inst, kind, gamma)?)?;
    let overlaps = eig.overlaps(initial.amps());
    let mut order: Vec<usize> = (0..overlaps.len()).collect();
    order.sort_by(|&i, &j| overlaps[j].total_cmp(&overlaps[i]));
    Ok((eig.values()[order[0]] - eig.values()[order[1]]).abs())
}
