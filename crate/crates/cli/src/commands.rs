//! One function per subcommand, each producing plot-ready datasets.

use anyhow::{bail, Context, Result};
use qwalk_core::analytics::{self, Regime};
use qwalk_core::checks::{self, Check, CriterionReport};
use qwalk_core::experiments;
use qwalk_core::reduced::{class_state, search_hamiltonian, state_s, state_sigma};
use qwalk_core::spectral::{target_probability, uniform_grid};
use qwalk_core::{BipartiteInstance, Propagator, ReducedState, Targets, VertexClass, WalkKind};
use serde::Serialize;

use crate::config::{InstanceConfig, Settings};
use crate::dataset::{Cell, Dataset, Metadata};

const OVERLAP_POINTS: usize = 400;
const EVOLVE_POINTS: usize = 500;
const DETUNE_POINTS: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Start {
    /// Uniform superposition over all vertices.
    S,
    /// Set-weighted superposition, the adjacency eigenvector.
    Sigma,
}

impl Start {
    fn state(self, inst: &BipartiteInstance) -> ReducedState {
        match self {
            Start::S => state_s(inst),
            Start::Sigma => state_sigma(inst),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Start::S => "s",
            Start::Sigma => "sigma",
        }
    }

    fn natural(kind: WalkKind) -> Self {
        match kind {
            WalkKind::Laplacian => Start::S,
            WalkKind::Adjacency => Start::Sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Varied {
    K1,
    K2,
}

/// Regime used for defaults: the walk's own resonance, or for the Laplacian
/// walk the resonance nearest the requested rate.
pub fn default_regime(cfg: &InstanceConfig) -> Result<Regime> {
    let inst = &cfg.instance;
    Ok(match cfg.walk {
        WalkKind::Adjacency => Regime::Adjacency,
        WalkKind::Laplacian => {
            let available: Vec<Regime> = [Regime::LaplacianA, Regime::LaplacianB]
                .into_iter()
                .filter(|&r| analytics::predict(inst, r).is_ok())
                .collect();
            match (cfg.gamma, available.as_slice()) {
                (_, []) => bail!("no Laplacian resonance for {inst}"),
                (Some(g), _) => *available
                    .iter()
                    .min_by(|&&x, &&y| {
                        let d = |r| (analytics::critical_gamma(inst, r) / g).ln().abs();
                        d(x).total_cmp(&d(y))
                    })
                    .expect("non-empty"),
                (None, [first, ..]) => *first,
            }
        }
    })
}

pub fn cmd_overlap(cfg: &InstanceConfig, gamma_min: Option<f64>, gamma_max: Option<f64>) -> Result<Dataset> {
    let inst = &cfg.instance;
    let (n1, n2) = (inst.n1() as f64, inst.n2() as f64);
    let lo = gamma_min.unwrap_or(0.1 / n1.max(n2));
    let hi = gamma_max.unwrap_or(10.0 / (n1 * n2).sqrt());
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        bail!("need 0 < gamma-min < gamma-max, got [{lo}, {hi}]");
    }
    let grid = experiments::log_grid(lo, hi, cfg.points.unwrap_or(OVERLAP_POINTS));
    let start = Start::natural(cfg.walk);
    let mut refs = vec![(start.name(), start.state(inst))];
    for (name, class) in [("a", VertexClass::MarkedFirst), ("b", VertexClass::MarkedSecond)] {
        if let Ok(state) = class_state(inst, class) {
            refs.push((name, state));
        }
    }
    let curve = experiments::overlap_sweep(inst, cfg.walk, &grid, &refs)?;
    let dim = curve.dim();

    let mut columns = vec!["gamma".to_string()];
    for (name, _) in &refs {
        columns.extend((0..dim).map(|i| format!("overlap_{name}_{i}")));
    }
    columns.extend((0..dim).map(|i| format!("energy_{i}")));
    let meta = Metadata::new("overlap", Some(*inst))
        .with("walk", cfg.walk)
        .with("gamma_min", lo)
        .with("gamma_max", hi);
    let mut data = Dataset::new(meta, columns);
    for (g, gamma) in curve.gammas.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(*gamma).into()];
        row.extend(curve.overlaps[g].iter().flatten().map(|&x| Cell::from(x)));
        row.extend(curve.eigenvalues[g].iter().map(|&x| Cell::from(x)));
        data.push(row)?;
    }
    Ok(data)
}

pub fn cmd_evolve(cfg: &InstanceConfig, start: Option<Start>) -> Result<Dataset> {
    let inst = &cfg.instance;
    let regime = default_regime(cfg)?;
    let gamma = cfg.gamma.unwrap_or_else(|| analytics::critical_gamma(inst, regime));
    let t_max = cfg.t_max.unwrap_or_else(|| 2.0 * analytics::runtime(inst, regime));
    let start = start.unwrap_or(Start::natural(cfg.walk));

    let h = search_hamiltonian(inst, cfg.walk, gamma)?;
    let propagator = Propagator::new(&h, &start.state(inst).to_complex())?;
    let meta = Metadata::new("evolve", Some(*inst))
        .with("walk", cfg.walk)
        .with("gamma", gamma)
        .with("start", start.name());
    let mut data = Dataset::new(meta, ["t", "p_a", "p_b", "p_total"].map(String::from).to_vec());
    for t in uniform_grid(t_max, cfg.points.unwrap_or(EVOLVE_POINTS)) {
        let state = propagator.state_at(t);
        let p = |targets| target_probability(inst, h.basis(), &state, targets);
        data.push(vec![t.into(), p(Targets::A).into(), p(Targets::B).into(), p(Targets::Both).into()])?;
    }
    Ok(data)
}

pub fn cmd_compare(cfg: &InstanceConfig, varied: Option<Varied>, from: usize, to: Option<usize>) -> Result<Dataset> {
    let base = &cfg.instance;
    let varied = varied.unwrap_or(if base.n1() >= base.n2() { Varied::K1 } else { Varied::K2 });
    let (name, limit) = match varied {
        Varied::K1 => ("k1", base.n1()),
        Varied::K2 => ("k2", base.n2()),
    };
    let to = to.unwrap_or(60.min(limit));
    if from == 0 || from > to {
        bail!("{name} range must satisfy 1 <= from <= to, got {from}..={to}");
    }
    let instances = (from..=to)
        .map(|k| match varied {
            Varied::K1 => BipartiteInstance::new(base.n1(), base.n2(), k, base.k2()),
            Varied::K2 => BipartiteInstance::new(base.n1(), base.n2(), base.k1(), k),
        })
        .collect::<qwalk_core::Result<Vec<_>>>()?;

    let meta = Metadata::new("compare", Some(*base)).with("varied", name);
    let columns = [name, "t_a", "t_b", "t_star", "threshold", "verdict", "verdict_by_runtime"];
    let mut data = Dataset::new(meta, columns.map(String::from).to_vec());
    for (k, inst) in (from..=to).zip(&instances) {
        let verdict = analytics::faster_walk(inst);
        data.push(vec![
            k.into(),
            analytics::runtime(inst, Regime::LaplacianA).into(),
            analytics::runtime(inst, Regime::LaplacianB).into(),
            analytics::runtime(inst, Regime::Adjacency).into(),
            verdict.threshold.unwrap_or(f64::NAN).into(),
            verdict.verdict.name().into(),
            analytics::faster_walk_by_runtime(inst).name().into(),
        ])?;
    }
    Ok(data)
}

fn applicable(inst: &BipartiteInstance) -> Vec<Regime> {
    Regime::ALL.into_iter().filter(|&r| analytics::predict(inst, r).is_ok()).collect()
}

pub fn cmd_critical_gamma(cfg: &InstanceConfig) -> Result<Dataset> {
    let inst = &cfg.instance;
    let meta = Metadata::new("critical-gamma", Some(*inst));
    let columns = ["regime", "gamma_predicted", "gamma_numerical", "relative_error"];
    let mut data = Dataset::new(meta, columns.map(String::from).to_vec());
    for regime in applicable(inst) {
        let predicted = analytics::critical_gamma(inst, regime);
        let found = experiments::critical_gamma_search(inst, regime)
            .with_context(|| format!("searching the {} rate", regime.name()))?;
        data.push(vec![
            regime.name().into(),
            predicted.into(),
            found.into(),
            (found / predicted - 1.0).into(),
        ])?;
    }
    Ok(data)
}

pub fn cmd_detune(cfg: &InstanceConfig, epsilons: Option<Vec<f64>>) -> Result<Dataset> {
    let inst = &cfg.instance;
    let regime = default_regime(cfg)?;
    let gamma = cfg.gamma.unwrap_or_else(|| analytics::critical_gamma(inst, regime));
    let epsilons = match epsilons {
        Some(mut e) => {
            if !e.contains(&0.0) {
                e.push(0.0);
            }
            e.sort_by(f64::total_cmp);
            e.dedup();
            e
        }
        None => {
            let half = cfg.points.unwrap_or(DETUNE_POINTS) / 2;
            let step = 5.0 / inst.n() as f64 / half.max(1) as f64;
            (0..=2 * half)
                .map(|i| (i as f64 - half as f64) * step)
                .filter(|e| gamma + e > 0.0)
                .collect()
        }
    };
    let sweep = experiments::detuning_sweep(inst, regime, gamma, &epsilons)?;
    let meta = Metadata::new("detune", Some(*inst)).with("regime", regime.name()).with("gamma", gamma);
    let mut data = Dataset::new(meta, ["epsilon", "gamma", "p_peak", "t_peak"].map(String::from).to_vec());
    for ((eps, p), t) in sweep.epsilons.iter().zip(&sweep.p_peak).zip(&sweep.t_peak) {
        data.push(vec![(*eps).into(), (gamma + eps).into(), (*p).into(), t.unwrap_or(f64::NAN).into()])?;
    }
    Ok(data)
}

pub fn cmd_coupon(cfg: &InstanceConfig) -> Result<Dataset> {
    let inst = &cfg.instance;
    let (k1, k2) = (inst.k1() as u64, inst.k2() as u64);
    let meta = Metadata::new("coupon", Some(*inst));
    let mut data = Dataset::new(meta, ["quantity", "value", "exact"].map(String::from).to_vec());
    data.push(vec![
        "uniform_repetitions".into(),
        analytics::expected_repetitions_laplacian(k1, k2).into(),
        analytics::expected_repetitions_laplacian_exact(k1, k2).to_string().into(),
    ])?;
    data.push(vec![
        "nonuniform_repetitions".into(),
        analytics::expected_repetitions_adjacency(inst)?.into(),
        "".into(),
    ])?;
    Ok(data)
}

/// Closed-form predictions per applicable regime, with eigenpair residuals.
pub fn cmd_predict(cfg: &InstanceConfig) -> Result<Dataset> {
    let inst = &cfg.instance;
    let meta = Metadata::new("predict", Some(*inst));
    let columns = [
        "regime",
        "gamma_crit",
        "runtime",
        "gap",
        "final_p_a",
        "final_p_b",
        "precision_scale",
        "max_residual",
        "max_relative_residual",
    ];
    let mut data = Dataset::new(meta, columns.map(String::from).to_vec());
    for regime in applicable(inst) {
        let p = analytics::predict(inst, regime)?;
        let report = analytics::verify_eigenpairs(inst, &p)?;
        data.push(vec![
            regime.name().into(),
            p.gamma_crit.into(),
            p.runtime.into(),
            p.gap().into(),
            p.final_state.amp(VertexClass::MarkedFirst).powi(2).into(),
            p.final_state.amp(VertexClass::MarkedSecond).powi(2).into(),
            p.precision_scale.into(),
            report.max_residual().into(),
            report.max_relative_residual().into(),
        ])?;
    }
    Ok(data)
}

/// Faster-walk verdicts on either side of each crossover and for nearly equal sets.
pub fn table2() -> Result<Dataset> {
    let mut cases: Vec<(&str, BipartiteInstance)> = Vec::new();
    for k1 in [1, 10, 29, 30, 31, 45, 60] {
        cases.push(("n1 > n2", BipartiteInstance::new(512, 256, k1, 5)?));
    }
    for k2 in [1, 10, 17, 18, 19, 30, 40] {
        cases.push(("n1 < n2", BipartiteInstance::new(512, 1024, 3, k2)?));
    }
    for n2 in [512, 530] {
        cases.push(("n1 ~ n2", BipartiteInstance::new(512, n2, 3, 5)?));
    }
    let columns = ["case", "n1", "n2", "k1", "k2", "threshold", "verdict", "verdict_by_runtime"];
    let mut data = Dataset::new(Metadata::new("table2", None), columns.map(String::from).to_vec());
    for (case, inst) in cases {
        let verdict = analytics::faster_walk(&inst);
        data.push(vec![
            case.into(),
            inst.n1().into(),
            inst.n2().into(),
            inst.k1().into(),
            inst.k2().into(),
            verdict.threshold.unwrap_or(f64::NAN).into(),
            verdict.verdict.name().into(),
            analytics::faster_walk_by_runtime(&inst).name().into(),
        ])?;
    }
    Ok(data)
}

#[derive(Debug, Serialize)]
pub struct SummaryEntry<'a> {
    pub criterion: u8,
    #[serde(flatten)]
    pub check: &'a Check,
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub pass: bool,
    pub checks: Vec<SummaryEntry<'a>>,
}

pub fn summary(reports: &[CriterionReport]) -> Summary<'_> {
    Summary {
        pass: reports.iter().all(CriterionReport::passed),
        checks: reports
            .iter()
            .flat_map(|r| r.checks.iter().map(move |check| SummaryEntry { criterion: r.id, check }))
            .collect(),
    }
}

/// Every figure and table dataset, keyed by file name. Figures 2 to 5 and
/// table 1 use `base`; the crossover figures and table 2 use fixed instances.
pub fn reproduction_datasets(base: &InstanceConfig) -> Result<Vec<(&'static str, Dataset)>> {
    let inst = base.instance;
    let with = |walk, gamma: Option<f64>| InstanceConfig { walk, gamma, t_max: None, points: None, ..base.clone() };
    let with_k = |n2, k1, k2| -> Result<InstanceConfig> {
        Settings { n1: Some(512), n2: Some(n2), k1: Some(k1), k2: Some(k2), ..Default::default() }.resolve()
    };
    let mut out = vec![("fig2.csv", cmd_overlap(&with(WalkKind::Laplacian, None), None, None)?)];
    for (file, regime) in [("fig3a.csv", Regime::LaplacianA), ("fig3b.csv", Regime::LaplacianB)] {
        if analytics::predict(&inst, regime).is_ok() {
            let gamma = analytics::critical_gamma(&inst, regime);
            out.push((file, cmd_evolve(&with(WalkKind::Laplacian, Some(gamma)), None)?));
        }
    }
    out.push(("fig4.csv", cmd_overlap(&with(WalkKind::Adjacency, None), None, None)?));
    out.push(("fig5.csv", cmd_evolve(&with(WalkKind::Adjacency, None), None)?));
    out.push(("fig6a.csv", cmd_compare(&with_k(256, 1, 5)?, Some(Varied::K1), 1, Some(60))?));
    out.push(("fig6b.csv", cmd_compare(&with_k(1024, 3, 1)?, Some(Varied::K2), 1, Some(40))?));
    out.push(("table1.csv", cmd_predict(base)?));
    out.push(("table2.csv", table2()?));
    Ok(out)
}

pub fn reproduction_reports() -> Vec<CriterionReport> {
    checks::run_all()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian() -> InstanceConfig {
        InstanceConfig::default()
    }

    fn adjacency() -> InstanceConfig {
        InstanceConfig { walk: WalkKind::Adjacency, ..InstanceConfig::default() }
    }

    /// Rates at which the eigenstate carrying most of the initial state changes.
    fn handovers(data: &Dataset, start: &str) -> Vec<f64> {
        let g = data.numbers("gamma").unwrap();
        let dim = data.columns().iter().filter(|c| c.starts_with("energy_")).count();
        let cols: Vec<Vec<f64>> =
            (0..dim).map(|i| data.numbers(&format!("overlap_{start}_{i}")).unwrap()).collect();
        let argmax = |row: usize| (0..dim).max_by(|&i, &j| cols[i][row].total_cmp(&cols[j][row])).unwrap();
        (1..g.len()).filter(|&r| argmax(r) != argmax(r - 1)).map(|r| (g[r] * g[r - 1]).sqrt()).collect()
    }

    #[test]
    fn overlap_rows_complete() {
        let data = cmd_overlap(&InstanceConfig { points: Some(60), ..laplacian() }, None, None).unwrap();
        for row in data.rows() {
            for r in 0..3 {
                let s: f64 = row[1 + 4 * r..5 + 4 * r].iter().map(|c| c.as_f64().unwrap()).sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn laplacian_crossings_near_both_resonances() {
        let crossings = handovers(&cmd_overlap(&laplacian(), Some(1e-3), Some(1e-2)).unwrap(), "s");
        assert_eq!(crossings.len(), 2, "{crossings:?}");
        assert!((crossings[0] / 0.002 - 1.0).abs() < 0.1, "{crossings:?}");
        assert!((crossings[1] / 0.004 - 1.0).abs() < 0.1, "{crossings:?}");
    }

    #[test]
    fn adjacency_single_crossing() {
        let crossings = handovers(&cmd_overlap(&adjacency(), Some(1e-3), Some(1e-2)).unwrap(), "sigma");
        assert_eq!(crossings.len(), 1, "{crossings:?}");
        assert!((crossings[0] / 0.0028 - 1.0).abs() < 0.05, "{crossings:?}");
    }

    #[test]
    fn evolve_first_row_is_initial_overlap() {
        let data = cmd_evolve(&InstanceConfig { points: Some(5), ..laplacian() }, None).unwrap();
        assert_eq!(data.numbers("t").unwrap()[0], 0.0);
        let p0 = data.numbers("p_total").unwrap()[0];
        assert!((p0 - 8.0 / 768.0).abs() < 1e-14);
    }

    #[test]
    fn evolve_fig5() {
        let data = cmd_evolve(&adjacency(), None).unwrap();
        let total = data.numbers("p_total").unwrap();
        let (i, p) = total.iter().copied().enumerate().fold((0, 0.0), |b, (i, p)| if p > b.1 { (i, p) } else { b });
        assert!(p >= 0.98);
        assert!((data.numbers("t").unwrap()[i] / 13.94 - 1.0).abs() < 0.02);
        assert!((data.numbers("p_a").unwrap()[i] - 0.231).abs() < 0.03);
    }

    #[test]
    fn compare_crossovers() {
        let cfg = Settings { k1: Some(1), ..Default::default() }.resolve().unwrap();
        let data = cmd_compare(&cfg, Some(Varied::K1), 1, Some(60)).unwrap();
        let verdicts = data.column("verdict").unwrap();
        let k = data.numbers("k1").unwrap();
        for (k, v) in k.iter().zip(verdicts) {
            let adjacency = *v == Cell::Text("adjacency_faster".into());
            assert_eq!(adjacency, *k < 30.0, "k1 = {k}");
        }
        let t_b = data.numbers("t_b").unwrap();
        assert!(t_b.iter().all(|&t| t == t_b[0]));
        assert!(cmd_compare(&cfg, Some(Varied::K1), 1, Some(600)).is_err());
        assert!(cmd_compare(&cfg, Some(Varied::K1), 0, Some(6)).is_err());
    }

    #[test]
    fn coupon_table() {
        let data = cmd_coupon(&laplacian()).unwrap();
        assert_eq!(data.rows()[0][2], Cell::Text("203/12".into()));
        assert!((data.rows()[1][1].as_f64().unwrap() - 26.368).abs() < 0.01);
    }

    #[test]
    fn predict_skips_missing_regimes() {
        let cfg = Settings { k1: Some(0), ..Default::default() }.resolve().unwrap();
        let data = cmd_predict(&cfg).unwrap();
        let regimes = data.column("regime").unwrap();
        assert_eq!(regimes.len(), 2);
        assert!(!regimes.contains(&&Cell::Text("laplacian_a".into())));
    }

    #[test]
    fn detune_includes_zero() {
        let cfg = InstanceConfig { points: Some(5), ..laplacian() };
        let data = cmd_detune(&cfg, None).unwrap();
        assert!(data.numbers("epsilon").unwrap().contains(&0.0));
        let data = cmd_detune(&cfg, Some(vec![1e-4])).unwrap();
        assert_eq!(data.numbers("epsilon").unwrap(), vec![0.0, 1e-4]);
    }

    #[test]
    fn default_regime_follows_gamma() {
        let cfg = InstanceConfig { gamma: Some(0.0021), ..laplacian() };
        assert_eq!(default_regime(&cfg).unwrap(), Regime::LaplacianB);
        assert_eq!(default_regime(&laplacian()).unwrap(), Regime::LaplacianA);
        assert_eq!(default_regime(&adjacency()).unwrap(), Regime::Adjacency);
    }
}
