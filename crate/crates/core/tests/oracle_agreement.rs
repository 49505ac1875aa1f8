use hvh_core::entanglement::{concurrence, purity};
use hvh_core::numerics::{Grid1D, Grid2D};
use hvh_core::oracle::{hybrid_marginal_quadrature, hybrid_window, quantum_marginal_quadrature, quantum_window};
use hvh_core::spin_oscillator::{assemble_density, rsu_hybrid, rsu_quantum, ScenarioParams};

#[test]
fn quantum_closed_form_matches_quadrature_with_offsets() {
    let sp = ScenarioParams::dimensionless(0.8, 0.5, 1.0, 0.5, 1.0).unwrap();
    for k in 0..12 {
        let t = 0.37 * k as f64;
        let (lo, hi) = quantum_window(&sp, &[t]);
        let oracle = quantum_marginal_quadrature(t, &sp, &Grid1D::new(lo, hi, 801).unwrap()).unwrap();
        let closed = assemble_density(rsu_quantum(t, &sp)).unwrap();
        assert!(oracle.max_abs_diff(&closed) < 1e-8, "t = {t}");
        assert!((purity(&oracle) - purity(&closed)).abs() < 1e-8);
        assert!((concurrence(&oracle).unwrap() - concurrence(&closed).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn hybrid_closed_form_matches_quadrature_with_offsets() {
    let sp = ScenarioParams::dimensionless(0.5, -0.3, 1.0, 0.5, 1.3).unwrap();
    for t in [0.0, 1.1, 3.9] {
        let ((a, b), (c, d)) = hybrid_window(&sp, &[t]);
        let grid = Grid2D::new(Grid1D::new(a, b, 201).unwrap(), Grid1D::new(c, d, 201).unwrap());
        let oracle = hybrid_marginal_quadrature(t, &sp, &grid).unwrap();
        let closed = assemble_density(rsu_hybrid(t, &sp)).unwrap();
        assert!(oracle.max_abs_diff(&closed) < 1e-6, "t = {t}");
    }
}
