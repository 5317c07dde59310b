//! Cyclic Jacobi eigensolvers for 3x3 real symmetric and complex Hermitian
//! matrices.
//!
//! Sweeps visit the off-diagonal pairs in the fixed order (0,1), (0,2),
//! (1,2) and stop once the off-diagonal Frobenius norm is at most
//! `rel_tol * |A|_F`. Results are returned unsorted, in the order the
//! rotations leave them; the caller sorts and normalizes.

use nalgebra::{Matrix3, Vector3};

use crate::C64;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug)]
pub struct SymmetricEigen3 {
    pub values: Vector3<f64>,
    /// Eigenvectors as columns.
    pub vectors: Matrix3<f64>,
    pub sweeps: usize,
}

#[derive(Clone, Debug)]
pub struct HermitianEigen3 {
    pub values: Vector3<f64>,
    /// Eigenvectors as columns.
    pub vectors: Matrix3<C64>,
    pub sweeps: usize,
}

/// Rotation `(c, s)` that annihilates the `(p, q)` entry of the real
/// 2x2 block `[[app, apq], [apq, aqq]]` under `J^t A J`.
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

fn off_norm_real(a: &Matrix3<f64>) -> f64 {
    (2.0 * (a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2))).sqrt()
}

fn off_norm_complex(a: &Matrix3<C64>) -> f64 {
    (2.0 * (a[(0, 1)].norm_sqr() + a[(0, 2)].norm_sqr() + a[(1, 2)].norm_sqr())).sqrt()
}

pub fn symmetric_eigen(a: &Matrix3<f64>, rel_tol: f64) -> SymmetricEigen3 {
    let mut a = (a + a.transpose()) * 0.5;
    let mut v = Matrix3::<f64>::identity();
    let scale = a.norm();
    let mut sweeps = 0;
    while scale > 0.0 && off_norm_real(&a) > rel_tol * scale && sweeps < MAX_SWEEPS {
        for &(p, q) in &PAIRS {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let (c, s) = rotation(a[(p, p)], a[(q, q)], apq);
            let mut j = Matrix3::<f64>::identity();
            j[(p, p)] = c;
            j[(q, q)] = c;
            j[(p, q)] = s;
            j[(q, p)] = -s;
            a = j.transpose() * a * j;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            a = (a + a.transpose()) * 0.5;
            v *= j;
        }
        sweeps += 1;
    }
    SymmetricEigen3 { values: a.diagonal(), vectors: v, sweeps }
}

pub fn hermitian_eigen(a: &Matrix3<C64>, rel_tol: f64) -> HermitianEigen3 {
    let mut a = (a + a.adjoint()) * C64::from(0.5);
    let mut v = Matrix3::<C64>::identity();
    let scale = a.norm();
    let mut sweeps = 0;
    while scale > 0.0 && off_norm_complex(&a) > rel_tol * scale && sweeps < MAX_SWEEPS {
        for &(p, q) in &PAIRS {
            let apq = a[(p, q)];
            let r = apq.norm();
            if r == 0.0 {
                continue;
            }
            // Phase on q makes the (p, q) entry real and positive, then a
            // real rotation finishes the 2x2 block.
            let phase = apq.conj() / r;
            let (c, s) = rotation(a[(p, p)].re, a[(q, q)].re, r);
            let mut g = Matrix3::<C64>::identity();
            g[(p, p)] = C64::from(c);
            g[(p, q)] = C64::from(s);
            g[(q, p)] = phase * (-s);
            g[(q, q)] = phase * c;
            a = g.adjoint() * a * g;
            a[(p, q)] = C64::from(0.0);
            a[(q, p)] = C64::from(0.0);
            a = (a + a.adjoint()) * C64::from(0.5);
            v *= g;
        }
        sweeps += 1;
    }
    HermitianEigen3 { values: a.diagonal().map(|z| z.re), vectors: v, sweeps }
}
