use super::{Extremes, Method};
use crate::error::{Error, Result};
use crate::graph::SymmetricMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lanczos iteration with full reorthogonalisation. Stops once the Ritz
/// pairs for the largest magnitude and the smallest magnitude above
/// `cutoff` both have residual estimates below `tol` relative to their
/// Ritz value, or the Krylov space becomes invariant.
pub fn lanczos_extremes(m: &SymmetricMatrix, cutoff: f64, tol: f64) -> Result<Extremes> {
    let n = m.order();
    if n == 0 {
        return Err(Error::ZeroMatrix);
    }
    let rows = m.to_rows();
    let matvec = |x: &[f64]| -> Vec<f64> {
        rows.iter().map(|r| r.iter().map(|&(j, a)| a * x[j]).sum()).collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_2050);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let q_norm = norm(&q);
    q.iter_mut().for_each(|x| *x /= q_norm);

    let mut basis = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut next_check = 8usize.min(n);

    for k in 0..n {
        let mut w = matvec(&basis[k]);
        alpha.push(dot(&w, &basis[k]));
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b_next = norm(&w);
        let steps = k + 1;
        let exhausted = steps == n || b_next <= 1e-12 * alpha.iter().fold(1e-300f64, |a, x| a.max(x.abs()));

        if steps >= next_check || exhausted {
            let t = tridiagonal(&alpha, &beta);
            let eig = SymmetricEigen::new(t);
            let last = steps - 1;
            let mut imax = 0;
            let mut imin: Option<usize> = None;
            for i in 0..steps {
                let th = eig.eigenvalues[i].abs();
                if th > eig.eigenvalues[imax].abs() {
                    imax = i;
                }
                if th > cutoff && imin.is_none_or(|j| th < eig.eigenvalues[j].abs()) {
                    imin = Some(i);
                }
            }
            let th_max = eig.eigenvalues[imax].abs();
            let resid = |i: usize| b_next * eig.eigenvectors[(last, i)].abs();
            if let Some(imin) = imin {
                let th_min = eig.eigenvalues[imin].abs();
                let floor = 1e-13 * th_max;
                let ok_max = resid(imax) <= tol * th_max + floor;
                let ok_min = resid(imin) <= tol * th_min + floor;
                if exhausted || (ok_max && ok_min) {
                    return Ok(Extremes { lambda_min_nz: th_min, lambda_max: th_max, method: Method::Lanczos });
                }
            } else if exhausted {
                return Err(Error::ZeroMatrix);
            }
            next_check = steps + (steps / 4).max(4);
        }
        if exhausted {
            break;
        }
        beta.push(b_next);
        basis.push(w.into_iter().map(|x| x / b_next).collect());
    }
    Err(Error::NoConvergence(format!("Lanczos on order {n}")))
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t
}
