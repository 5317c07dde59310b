//! Squeezed states against an independent recurrence solution and the
//! first-order formulas.

use nalgebra::{DVector, Vector3};
use spinvar_core::states::squeezed_approx;
use spinvar_core::{
    covariance_pair, mean_vector, spin_operators, squeezed_exact, CovarianceKind, HalfInteger, OperatorTriple, C64,
};

fn ops(j: i32) -> OperatorTriple {
    spin_operators(HalfInteger::from_integer(j)).unwrap()
}

/// Kernel of `((1+xi) j+ + (1-xi) j-)/2` for integer `j` and `xi != 1`,
/// from the two-step recurrence on the `m = -j, -j+2, ...` chain.
/// Returned in the `m`-descending basis.
fn recurrence_kernel(j: i32, xi: f64) -> DVector<C64> {
    let c = (j * (j + 1)) as f64;
    let up = |m: i32| (c - (m * (m + 1)) as f64).sqrt();
    let down = |m: i32| (c - (m * (m - 1)) as f64).sqrt();
    let d = (2 * j + 1) as usize;
    // coeffs[k] holds c_m with m = -j + k.
    let mut coeffs = vec![0.0; d];
    coeffs[0] = 1.0;
    for m in (-j + 1)..j {
        let k = (m + j) as usize;
        coeffs[k + 1] = -(1.0 + xi) * up(m - 1) * coeffs[k - 1] / ((1.0 - xi) * down(m + 1));
    }
    DVector::from_iterator(d, coeffs.into_iter().rev().map(C64::from)).normalize()
}

#[test]
fn exact_matches_recurrence() {
    for j in 1..=10 {
        let ops = ops(j);
        for xi in [0.0, 1e-3, 0.05, 0.3, 0.9, 1.7] {
            let exact = squeezed_exact(&ops, xi).unwrap();
            let oracle = recurrence_kernel(j, xi);
            let overlap = exact.amplitudes().unwrap().dotc(&oracle).norm();
            assert!((overlap - 1.0).abs() < 1e-10, "j={j} xi={xi} overlap={overlap}");
        }
    }
}

#[test]
fn structural_claims() {
    for j in 1..=10 {
        let ops = ops(j);
        for xi in [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0] {
            let state = squeezed_exact(&ops, xi).unwrap();
            let psi = state.amplitudes().unwrap();
            let a = ops.j1().matrix() + ops.j2().matrix() * C64::new(0.0, xi);
            assert!((a * psi).norm() <= 1e-9);
            let pair = covariance_pair(&state, &ops).unwrap();
            assert!(pair.mean[0].abs() <= 1e-9 && pair.mean[1].abs() <= 1e-9, "transversality");
            let z = Vector3::z();
            let mz = pair.m_real * z;
            assert!((mz - z * mz[2]).norm() <= 1e-9, "j3 principal for M");
            let mz = pair.m_herm * z.map(C64::from);
            assert!((mz - z.map(C64::from) * mz[2]).norm() <= 1e-9, "j3 principal for M~");
            assert!(pair.m_real[(0, 1)].abs() <= 1e-9, "transversal components uncorrelated");
        }
    }
}

#[test]
fn xi_one_is_highest_weight() {
    for j in 1..=6 {
        let ops = ops(j);
        let state = squeezed_exact(&ops, 1.0).unwrap();
        assert!((state.amplitudes().unwrap()[0].norm() - 1.0).abs() < 1e-12);
        let pair = covariance_pair(&state, &ops).unwrap();
        assert!((pair.trace() - j as f64).abs() < 1e-9);
    }
}

#[test]
fn approximate_state_fidelity_and_formulas() {
    let ops = ops(1);
    let approx = squeezed_approx(&ops, 0.01).unwrap();
    assert!(approx.within_validity);
    let exact = squeezed_exact(&ops, 0.01).unwrap();
    let fidelity = approx.state.overlap(&exact).unwrap();
    assert!(fidelity >= 1.0 - 1e-3, "fidelity {fidelity}");

    let pair = covariance_pair(&approx.state, &ops).unwrap();
    let mut v = pair.principal(CovarianceKind::RealSymmetric).unwrap().variances;
    v.sort_by(|a, b| b.total_cmp(a));
    for (got, want) in v.iter().zip([1.0, 1.0, 1e-4]) {
        assert!(((got - want) / want).abs() <= 1e-3, "variance {got} vs {want}");
    }
    let mean = mean_vector(&approx.state, &ops).unwrap();
    assert!(((mean[2] - 0.02) / 0.02).abs() <= 1e-3, "<j3> = {}", mean[2]);
}

/// Relative deviation of the exact variances `(dj1^2, dj2^2, dj3^2)` from
/// `(c xi^2/2, c/2, c/2)`.
fn leading_order_errors(j: i32, xi: f64) -> [f64; 3] {
    let ops = ops(j);
    let c = (j * (j + 1)) as f64;
    let pair = covariance_pair(&squeezed_exact(&ops, xi).unwrap(), &ops).unwrap();
    let formulas = [0.5 * c * xi * xi, 0.5 * c, 0.5 * c];
    [0, 1, 2].map(|k| ((pair.m_real[(k, k)] - formulas[k]) / formulas[k]).abs())
}

#[test]
fn leading_order_error_is_quadratic() {
    for j in 1..=3 {
        let errs = [1e-1, 1e-2, 1e-3].map(|xi| leading_order_errors(j, xi));
        for k in 0..3 {
            for step in 0..2 {
                let ratio = errs[step][k] / errs[step + 1][k];
                assert!((50.0..=200.0).contains(&ratio), "j={j} component {k} step {step}: ratio {ratio}");
            }
        }
    }
}
