//! Randomized and sweep-based properties of the closed forms and the numerics.

use proptest::prelude::*;
use qwalk_core::analytics::{self, Regime, Verdict};
use qwalk_core::checks::{compare_full_and_reduced, small_instances};
use qwalk_core::experiments::{detuning_sweep, find_peak, log_grid, overlap_sweep};
use qwalk_core::reduced::{class_state, reduced_walk, search_hamiltonian, state_s};
use qwalk_core::spectral::{diagonalize, target_probability};
use qwalk_core::{BipartiteInstance, Propagator, Targets, VertexClass, WalkKind};

fn any_instance(max_n: usize, max_k: usize) -> impl Strategy<Value = BipartiteInstance> {
    (1..=max_n, 1..=max_n, 0..=max_k, 0..=max_k)
        .prop_filter_map("valid instance", |(n1, n2, k1, k2)| BipartiteInstance::new(n1, n2, k1, k2).ok())
}

fn shipped() -> Vec<BipartiteInstance> {
    [(512, 256, 3, 5), (512, 1024, 3, 20), (512, 1024, 3, 5), (2048, 1024, 3, 5), (512, 256, 30, 5)]
        .into_iter()
        .map(|(a, b, c, d)| BipartiteInstance::new(a, b, c, d).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn threshold_verdict_matches_runtime_comparison(inst in any_instance(5000, 200)) {
        let by_threshold = analytics::faster_walk(&inst).verdict;
        prop_assert_eq!(by_threshold, analytics::faster_walk_by_runtime(&inst));
        if by_threshold != Verdict::RegimesEquivalent && by_threshold != Verdict::Tie {
            let laplacian = analytics::runtime(&inst, Regime::LaplacianA).min(analytics::runtime(&inst, Regime::LaplacianB));
            let adjacency_wins = analytics::runtime(&inst, Regime::Adjacency) < laplacian;
            prop_assert_eq!(adjacency_wins, by_threshold == Verdict::AdjacencyFaster);
        }
    }

    #[test]
    fn uniform_start_bound_in_range(inst in any_instance(100_000, 10)) {
        let p = analytics::success_bound_from_s(&inst);
        prop_assert!((0.5..=1.0).contains(&p), "{}", p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjacency_peak_matches_prediction(inst in (256usize..=2048, 256usize..=2048, 0usize..=8, 0usize..=8)
        .prop_filter_map("valid", |(a, b, c, d)| BipartiteInstance::new(a, b, c, d).ok()))
    {
        let p = analytics::predict(&inst, Regime::Adjacency).unwrap();
        let initial = Regime::Adjacency.initial_state(&inst);
        let peak = find_peak(&inst, WalkKind::Adjacency, p.gamma_crit, &initial, Targets::Both, 2.0 * p.runtime).unwrap();
        prop_assert!((peak.t_peak / p.runtime - 1.0).abs() <= 0.03, "{:?} vs {}", peak, p.runtime);
        prop_assert!(peak.p_peak >= 0.95, "{:?}", peak);

        let h = search_hamiltonian(&inst, WalkKind::Adjacency, p.gamma_crit).unwrap();
        let state = Propagator::new(&h, &initial.to_complex()).unwrap().state_at(peak.t_peak);
        for (targets, class) in [(Targets::A, VertexClass::MarkedFirst), (Targets::B, VertexClass::MarkedSecond)] {
            let measured = target_probability(&inst, h.basis(), &state, targets);
            let predicted = p.final_state.amp(class).powi(2);
            prop_assert!((measured - predicted).abs() <= 0.03, "{:?}: {} vs {}", targets, measured, predicted);
        }
    }

    // The two Laplacian resonances sit at 1/n2 and 1/n1; the single-target
    // prediction needs them well apart.
    #[test]
    fn laplacian_peak_matches_prediction_when_resonances_separate(
        small in 256usize..=1024,
        factor in 2.0f64..4.0,
        first_larger in any::<bool>(),
        k1 in 1usize..=8,
        k2 in 1usize..=8,
    ) {
        let large = (small as f64 * factor).round() as usize;
        let (n1, n2) = if first_larger { (large, small) } else { (small, large) };
        let inst = BipartiteInstance::new(n1, n2, k1, k2).unwrap();
        for regime in [Regime::LaplacianA, Regime::LaplacianB] {
            let p = analytics::predict(&inst, regime).unwrap();
            let peak = find_peak(&inst, WalkKind::Laplacian, p.gamma_crit, &state_s(&inst), regime.targets(), 2.0 * p.runtime).unwrap();
            prop_assert!((peak.t_peak / p.runtime - 1.0).abs() <= 0.03, "{} {}: {:?} vs {}", inst, regime.name(), peak, p.runtime);
            prop_assert!(peak.p_peak >= 0.95, "{} {}: {:?}", inst, regime.name(), peak);
        }
    }

    #[test]
    fn reduced_model_matches_full_space(inst in any_instance(30, 30), scale in 0.3f64..3.0, adjacency in any::<bool>()) {
        let kind = if adjacency { WalkKind::Adjacency } else { WalkKind::Laplacian };
        let regime = match kind {
            WalkKind::Adjacency => Regime::Adjacency,
            WalkKind::Laplacian if inst.k1() > 0 => Regime::LaplacianA,
            WalkKind::Laplacian => Regime::LaplacianB,
        };
        let gamma = scale * analytics::critical_gamma(&inst, regime);
        let (diff, leak) = compare_full_and_reduced(&inst, kind, gamma, 3.0 * analytics::runtime(&inst, regime)).unwrap();
        prop_assert!(diff <= 1e-9, "{}", diff);
        prop_assert!(leak < 1e-9, "{}", leak);
    }

    #[test]
    fn overlaps_are_complete(inst in any_instance(4000, 16), adjacency in any::<bool>()) {
        let kind = if adjacency { WalkKind::Adjacency } else { WalkKind::Laplacian };
        let mut refs = vec![("s", state_s(&inst))];
        if let Ok(a) = class_state(&inst, VertexClass::MarkedFirst) {
            refs.push(("a", a));
        }
        let scale = ((inst.n1() * inst.n2()) as f64).sqrt();
        let curve = overlap_sweep(&inst, kind, &log_grid(0.01 / scale, 100.0 / scale, 30), &refs).unwrap();
        for row in curve.overlaps.iter().flatten() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn eigenvalues_move_no_faster_than_the_walk_term_allows() {
    // Sorted eigenvalues of H(gamma) are Lipschitz in gamma with constant ||W||.
    for inst in shipped() {
        for kind in [WalkKind::Laplacian, WalkKind::Adjacency] {
            let lipschitz = diagonalize(&reduced_walk(&inst, kind)).unwrap().spectral_norm();
            let grid = log_grid(1e-4, 1e-1, 400);
            let curve = overlap_sweep(&inst, kind, &grid, &[("s", state_s(&inst))]).unwrap();
            for j in 1..grid.len() {
                let bound = (grid[j] - grid[j - 1]) * lipschitz * (1.0 + 1e-9) + 1e-12;
                for (e0, e1) in curve.eigenvalues[j - 1].iter().zip(&curve.eigenvalues[j]) {
                    assert!((e1 - e0).abs() <= bound, "{inst} {kind:?} at {}: {} > {}", grid[j], (e1 - e0).abs(), bound);
                }
            }
        }
    }
}

#[test]
fn detuning_degrades_monotonically() {
    for inst in shipped() {
        for regime in Regime::ALL {
            let Ok(p) = analytics::predict(&inst, regime) else { continue };
            let n = inst.n() as f64;
            let offsets: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25 / n).collect();
            for sign in [1.0, -1.0] {
                let eps: Vec<f64> = offsets.iter().map(|e| sign * e).filter(|e| p.gamma_crit + e > 0.0).collect();
                let sweep = detuning_sweep(&inst, regime, p.gamma_crit, &eps).unwrap();
                for w in sweep.p_peak.windows(2) {
                    assert!(w[1] <= w[0] + 0.02, "{inst} {} branch {sign}: {:?}", regime.name(), sweep.p_peak);
                }
            }
        }
    }
}

#[test]
fn adjacency_needs_at_least_as_many_repetitions() {
    let mut instances = shipped();
    instances.extend(small_instances());
    for inst in instances {
        let (n1, n2) = (inst.n1() as u64, inst.n2() as u64);
        let (k1, k2) = (inst.k1() as u64, inst.k2() as u64);
        // Uniform final distribution over the marked vertices otherwise.
        if k1 == 0 || k2 == 0 || n1 == n2 {
            continue;
        }
        let adjacency = analytics::expected_repetitions_adjacency(&inst).unwrap();
        let laplacian = analytics::expected_repetitions_laplacian(k1, k2);
        assert!(adjacency >= laplacian, "{inst}: {adjacency} < {laplacian}");
    }
}
