//! Symmetric tridiagonal eigensolver computing eigenvalues and first-row
//! eigenvector components only, which is all the Golub-Welsch construction
//! needs. Implicit-shift QL iteration, following the classical IMTQL2
//! routine with the eigenvector update restricted to one row.

use thiserror::Error;

/// Off-diagonal entries below this times the local diagonal scale are treated
/// as converged.
const OFF_DIAGONAL_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TridiagError {
    #[error("QL iteration failed to converge for eigenvalue index {0}")]
    NoConvergence(usize),
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off`, paired with the first component of each
/// normalized eigenvector. `off.len()` must be `diag.len() - 1` (or both may
/// be empty).
pub fn eigen_first_components(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, f64)>, TridiagError> {
    let n = diag.len();
    assert!(
        n == 0 || off.len() == n - 1,
        "off-diagonal length {} does not match dimension {}",
        off.len(),
        n
    );
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = diag.to_vec();
    // e gets a zero sentinel at the end so e[m] is addressable for m = n-1.
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(off);
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Find the first negligible off-diagonal at or after l.
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= OFF_DIAGONAL_TOL * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(TridiagError::NoConvergence(l));
            }
            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow_restart = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated prematurely; recover and restart.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow_restart {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    Ok(pairs)
}
