//! High-accuracy eigendecomposition for small complex Hermitian matrices.
//!
//! The general-purpose Hermitian solver in nalgebra is accurate enough for
//! most work, but its eigenvectors carry ~1e-9 normalization error on
//! rank-deficient inputs, which is too coarse for the cross-validation
//! tolerances used throughout this crate. A cyclic complex Jacobi iteration
//! costs next to nothing at these sizes (4x4 reductions, 36x36 reference
//! Hamiltonians) and delivers eigenvalues and an orthonormal eigenbasis at
//! machine precision.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Relative off-diagonal mass below which the iteration stops.
const OFF_DIAG_TOL: f64 = 1e-15;
/// Hard cap on sweeps; convergence is quadratic and typically needs < 10.
const MAX_SWEEPS: usize = 60;

/// Eigendecomposition `a = V diag(lambda) V^dagger` of a complex Hermitian
/// matrix, eigenvalues ascending. Only the Hermitian part of `a` is read
/// (entries are symmetrized on input).
pub(crate) fn hermitian_eigen(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = DMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()).scale(0.5));
    let mut v = DMatrix::<C64>::identity(n, n);
    if n > 1 {
        let fro = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if fro > 0.0 {
            for _ in 0..MAX_SWEEPS {
                let mut off = 0.0_f64;
                for p in 0..n - 1 {
                    for q in p + 1..n {
                        off += 2.0 * m[(p, q)].norm_sqr();
                    }
                }
                if off.sqrt() <= OFF_DIAG_TOL * fro {
                    break;
                }
                for p in 0..n - 1 {
                    for q in p + 1..n {
                        rotate(&mut m, &mut v, p, q);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (eigenvalues, eigenvectors)
}

/// One Jacobi rotation zeroing the (p, q) element: the pivot's phase is
/// rotated away first, then the classic real 2x2 Schur rotation is applied.
fn rotate(m: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let absb = apq.norm();
    if absb == 0.0 {
        return;
    }
    let phase = apq / absb; // e^{i phi}
    let a = m[(p, p)].re;
    let d = m[(q, q)].re;
    let tau = (d - a) / (2.0 * absb);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let jb = C64::new(s, 0.0);
    let jc = phase.conj().scale(-s);
    let jd = phase.conj().scale(c);
    let cc = C64::new(c, 0.0);

    let n = m.nrows();
    // columns: A <- A J
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * cc + miq * jc;
        m[(i, q)] = mip * jb + miq * jd;
    }
    // rows: A <- J^dagger A
    for i in 0..n {
        let mpi = m[(p, i)];
        let mqi = m[(q, i)];
        m[(p, i)] = mpi * cc.conj() + mqi * jc.conj();
        m[(q, i)] = mpi * jb.conj() + mqi * jd.conj();
    }
    // the rotation zeroes the pivot and keeps the diagonal real by
    // construction; enforce both exactly
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // accumulate: V <- V J
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * cc + viq * jc;
        v[(i, q)] = vip * jb + viq * jd;
    }
}
