use molfluor::sweep::{from_reader, to_writer};
use molfluor::{
    appendix_coherence, build_collapse_ops, build_hamiltonian, build_hamiltonian_with_d_energy,
    build_liouvillian, cascade_weak, dagger, derived_coherence, find_peaks, intensity,
    intensity_from_elements, ket_bra, pop1, pop2, r1_coherence, run_sweep, solve_point,
    steady_state, two_photon_weak, unvectorize, vectorize, CascadeForm, Level, ModelParams,
    Operator, SweepConfig, SweepMode, SweepResult, SweepRow, C,
};
use proptest::prelude::*;

type Op = Operator<f64>;
type P = ModelParams<f64>;

fn op_strategy() -> impl Strategy<Value = Op> {
    prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 25)
        .prop_map(|v| Op::from_row_major(5, v.into_iter().map(|(a, b)| C::new(a, b)).collect()).unwrap())
}

fn driven_params() -> impl Strategy<Value = P> {
    (
        (0.0f64..2.0, 0.0f64..2.0, 0.0f64..1.0),
        (1.0f64..8.0, -6.0f64..6.0, -1.0f64..1.0),
        (0.2f64..1.0, 0.2f64..1.0, 0.05f64..2.0, 0.05f64..2.0),
        (-1.0f64..=1.0, -1.0f64..=1.0),
    )
        .prop_filter("some drive", |((a, b, q), _, _, _)| a * b > 1e-3 || *q > 1e-3)
        .prop_map(|((omega_ab, omega_bc, q), (omega12, delta_2ph, delta_1ph), (gamma_u, gamma_v, gamma_b, gamma_d), (p_u, p_v))| P {
            omega_ab,
            omega_bc,
            q,
            omega12,
            delta_2ph,
            delta_1ph,
            gamma_u,
            gamma_v,
            gamma_b,
            gamma_d,
            p_u,
            p_v,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_is_an_involution(a in op_strategy()) {
        prop_assert!(dagger(&dagger(&a)).max_abs_diff(&a).unwrap() <= 1e-15);
    }

    #[test]
    fn vectorization_round_trips_exactly(a in op_strategy()) {
        prop_assert_eq!(unvectorize(&vectorize(&a)).unwrap(), a);
    }

    #[test]
    fn hamiltonian_is_hermitian(p in driven_params()) {
        prop_assert_eq!(build_hamiltonian(&p).unwrap().hermitian_deviation(), 0.0);
    }

    #[test]
    fn cauchy_schwarz_and_decoupled_coherences(p in driven_params()) {
        let (rho, i) = solve_point(&p).unwrap();
        let r12 = rho.elem(Level::A1, Level::A2).norm();
        prop_assert!(r12 * r12 <= rho.population(Level::A1) * rho.population(Level::A2) + 1e-15);
        for (a, b) in [(Level::C, Level::D), (Level::D, Level::A1), (Level::B, Level::D), (Level::D, Level::A2)] {
            prop_assert!(rho.elem(a, b).norm() <= 1e-12);
            prop_assert!(rho.elem(b, a).norm() <= 1e-12);
        }
        prop_assert!(i.i_u >= 0.0 && i.i_v >= 0.0 && i.i_p0 >= 0.0);
    }

    #[test]
    fn intensity_is_nonnegative_for_any_alignment(p in driven_params(), align in -1.0f64..=1.0) {
        let (rho, _) = solve_point(&p).unwrap();
        prop_assert!(intensity(&rho, 1.0, align).unwrap() >= 0.0);
    }

    #[test]
    fn parallel_dipoles_radiate_from_the_symmetric_state(p in driven_params()) {
        let p = P { p_v: 1.0, ..p };
        let (rho, i) = solve_point(&p).unwrap();
        let s = rho.population(Level::A1) + rho.population(Level::A2)
            + 2.0 * rho.elem(Level::A1, Level::A2).re;
        // ⟨s|ρ|s⟩ = (ρ11 + ρ22 + 2 Re ρ12)/2
        prop_assert!((i.i_v - 2.0 * p.gamma_v * s / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn energy_of_d_does_not_change_the_steady_state(p in driven_params(), e in -10.0f64..10.0) {
        let cs = build_collapse_ops(&p).unwrap();
        let a = steady_state(&build_liouvillian(&build_hamiltonian(&p).unwrap(), &cs).unwrap()).unwrap();
        let h = build_hamiltonian_with_d_energy(&p, e).unwrap();
        let b = steady_state(&build_liouvillian(&h, &cs).unwrap()).unwrap();
        prop_assert!(a.rho.trace_distance(&b.rho) <= 1e-12);
    }

    #[test]
    fn total_upper_decay_is_alignment_independent_on_the_diagonal(p in driven_params()) {
        let g = build_collapse_ops(&p).unwrap().iter().fold(Op::zeros(5), |acc, c| {
            &acc + &(&c.operator().dagger() * c.operator())
        });
        for l in [Level::A1, Level::A2] {
            prop_assert!((g.elem(l, l).re - (p.gamma_u + p.gamma_v)).abs() <= 1e-14);
        }
        let off = p.gamma_u * p.p_u + p.gamma_v * p.p_v;
        prop_assert!((g.elem(Level::A1, Level::A2).re - off).abs() <= 1e-14);
    }

    #[test]
    fn two_photon_mirror_symmetry(d in -6.0f64..6.0) {
        let a = two_photon_weak(&P::default().with_delta(d)).unwrap();
        let b = two_photon_weak(&P::default().with_delta(-d)).unwrap();
        prop_assert!((a.rho11 - b.rho22).abs() <= 1e-15 * a.rho11.abs().max(1e-8));
        prop_assert!((a.re_rho12 - b.re_rho12).abs() <= 1e-22);
    }

    #[test]
    fn cascade_mirror_symmetry(d in -6.0f64..6.0, omega in 1e-3f64..0.1) {
        let p = P { omega_ab: omega, omega_bc: omega, q: 0.0, ..P::default() };
        let a = cascade_weak(&p.with_delta(d), CascadeForm::Derived).unwrap();
        let b = cascade_weak(&p.with_delta(-d), CascadeForm::Derived).unwrap();
        let tol = 1e-13 * a.rho11.abs().max(a.rho22.abs());
        prop_assert!((a.rho11 - b.rho22).abs() <= tol);
        prop_assert!((a.re_rho12 - b.re_rho12).abs() <= 1e-12 * a.re_rho12.abs().max(tol));
        let ap = appendix_coherence(&p.with_delta(d)).unwrap();
        let bp = appendix_coherence(&p.with_delta(-d)).unwrap();
        prop_assert!(ap.is_finite() && bp.is_finite());
    }

    #[test]
    fn appendix_expression_is_finite(
        omega in 0.0f64..3.0, w in 0.1f64..20.0, d in -20.0f64..20.0, dd in -5.0f64..5.0,
        g in 0.01f64..5.0, gb in 0.01f64..5.0,
    ) {
        let p = P { omega_ab: omega, omega_bc: omega, q: 0.0, omega12: w, delta_2ph: d, delta_1ph: dd,
            gamma_u: g, gamma_v: g, gamma_b: gb, gamma_d: gb, ..P::default() };
        prop_assert!(appendix_coherence(&p).unwrap().is_finite());
        prop_assert!(derived_coherence(&p).unwrap().is_finite());
        prop_assert!(r1_coherence(&p).unwrap() <= 0.0);
    }

    #[test]
    fn peak_detection_is_scale_invariant(
        ys in prop::collection::vec(0.0f64..1.0, 3..80), exp in -40i32..40,
    ) {
        let x: Vec<f64> = (0..ys.len()).map(|k| k as f64).collect();
        let scale = 2f64.powi(exp);
        let scaled: Vec<f64> = ys.iter().map(|y| y * scale).collect();
        let a = find_peaks(&x, &ys, 0.02).unwrap();
        let b = find_peaks(&x, &scaled, 0.02).unwrap();
        prop_assert_eq!(
            a.iter().map(|p| p.delta).collect::<Vec<_>>(),
            b.iter().map(|p| p.delta).collect::<Vec<_>>()
        );
    }

    #[test]
    fn csv_round_trip(vals in prop::collection::vec(prop::array::uniform9(-1e300f64..1e300), 1..20)) {
        let rows = vals.iter().enumerate().map(|(k, v)| {
            let mut all = [0.0; 10];
            all[0] = k as f64 * 0.37 - 3.0;
            all[1..].copy_from_slice(v);
            SweepRow::from_values(all)
        }).collect();
        let r = SweepResult { rows };
        let mut buf = Vec::new();
        to_writer(&r, &mut buf).unwrap();
        let back: SweepResult<f64> = from_reader(buf.as_slice()).unwrap();
        prop_assert_eq!(back, r);
    }
}

#[test]
fn two_photon_coherence_bound_on_fine_grid() {
    for k in 0..=1000 {
        let d = -6.0 + 12.0 * k as f64 / 1000.0;
        let s = two_photon_weak(&P::default().with_delta(d)).unwrap();
        assert!(s.re_rho12 * s.re_rho12 <= s.rho11 * s.rho22 + 1e-18, "Δ={d}");
    }
}

#[test]
fn large_splitting_limit_of_the_coherence() {
    // Central resonance Δ = -2δ with ω12 = 100·max(γa, γb, |δ|, 1).
    for dd in [0.0, 0.3] {
        let p = P { omega_ab: 1e-3, omega_bc: 1e-3, q: 0.0, omega12: 100.0, delta_1ph: dd, ..P::default() }
            .with_delta(-2.0 * dd);
        let r1 = r1_coherence(&p).unwrap();
        let derived = derived_coherence(&p).unwrap();
        assert!(((derived - r1) / r1).abs() <= 0.01, "δ={dd}: {derived} vs {r1}");
    }
}

#[test]
fn intermediate_decay_rate_barely_moves_weak_field_intensities() {
    let base = P { omega_ab: 0.01, omega_bc: 0.01, q: 0.0, ..P::default() };
    for d in [-3.0, 0.0, 1.7] {
        let reference = solve_point(&base.with_delta(d)).unwrap().1;
        for gd in [0.1, 0.5, 2.0, 10.0] {
            let i = solve_point(&P { gamma_d: gd, ..base }.with_delta(d)).unwrap().1;
            for (a, b) in [(i.i_u, reference.i_u), (i.i_v, reference.i_v), (i.i_p0, reference.i_p0)] {
                assert!(((a - b) / b).abs() < 1e-3, "γd={gd} Δ={d}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn population_closed_forms_mirror() {
    let p = P { omega_ab: 0.01, omega_bc: 0.01, q: 0.0, ..P::default() };
    for d in [-2.5, 0.3, 4.0] {
        let a = pop1(&p.with_delta(d)).unwrap();
        let b = pop2(&p.with_delta(-d)).unwrap();
        assert!(((a - b) / a).abs() < 1e-14);
    }
}

#[test]
fn destructive_interference_example() {
    assert_eq!(intensity_from_elements(0.25, 0.25, 0.25, 1.0, -1.0).unwrap(), 0.0);
    let rho = molfluor::DensityMatrix::<f64>::pure(Level::A1);
    assert_eq!(intensity(&rho, 0.5, 0.0).unwrap(), 0.5);
    assert_eq!(ket_bra::<f64>(Level::B, Level::B).trace(), C::new(1.0, 0.0));
}

#[test]
fn sweep_is_deterministic_and_order_independent() {
    let mut cfg = SweepConfig::new("det", P { omega_ab: 0.3, omega_bc: 0.3, q: 0.0, gamma_b: 0.15, gamma_d: 0.15, ..P::default() });
    cfg.points = 61;
    let a = run_sweep(&cfg).unwrap();
    let b = run_sweep(&cfg).unwrap();
    let (mut ba, mut bb) = (Vec::new(), Vec::new());
    to_writer(&a, &mut ba).unwrap();
    to_writer(&b, &mut bb).unwrap();
    assert_eq!(ba, bb);

    // Evaluating the grid in reverse order point by point gives the same rows.
    let grid = cfg.grid();
    for (k, &x) in grid.iter().enumerate().rev() {
        let row = molfluor::evaluate_point(&cfg.params, x, SweepMode::Numeric, CascadeForm::Derived).unwrap();
        assert_eq!(row, a.rows[k]);
    }
    assert!(a.rows.windows(2).all(|w| w[0].delta < w[1].delta));
}
