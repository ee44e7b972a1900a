//! Two-qubit density matrices in the `{|e,e>, |e,g>, |g,e>, |g,g>}` basis.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix4};
use crate::scalar::{real, tol, Real};

/// Hermitian, unit-trace, positive semi-definite 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4<T: Real = f64> {
    m: Matrix4<T>,
}

impl<T: Real> DensityMatrix4<T> {
    /// Validates a raw matrix: Hermitian and unit trace within `1e-12`,
    /// eigenvalues no lower than `-1e-10`.
    pub fn new(m: Matrix4<T>) -> Result<Self> {
        let herm_tol = tol::<T>(1e-12);
        for i in 0..4 {
            for j in i..4 {
                if (m[i][j] - m[j][i].conj()).norm() > herm_tol {
                    return Err(Error::Consistency(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let tr = linalg::trace(&m);
        if (tr - Complex::new(T::one(), T::zero())).norm() > herm_tol {
            return Err(Error::Consistency(format!("trace is {tr}, expected 1")));
        }
        let (vals, _) = linalg::hermitian_eigen(&m)?;
        if vals[0] < -tol::<T>(1e-10) {
            return Err(Error::Consistency(format!("matrix is not positive semi-definite: eigenvalue {}", vals[0])));
        }
        Ok(Self { m })
    }

    /// The X-shaped state of two atoms sharing a single excitation with
    /// amplitudes `u1` (on `|e,g>`) and `u2` (on `|g,e>`); the remaining
    /// population sits in `|g,g>`.
    pub fn from_one_excitation(u1: Complex<T>, u2: Complex<T>) -> Result<Self> {
        let pop = u1.norm_sqr() + u2.norm_sqr();
        let excess = pop - T::one();
        if !(excess <= tol::<T>(1e-10)) {
            return Err(Error::Consistency(format!("one-excitation norm {pop} exceeds 1")));
        }
        let mut m = linalg::zeros();
        m[1][1] = real(u1.norm_sqr());
        m[1][2] = u1 * u2.conj();
        m[2][1] = u1.conj() * u2;
        m[2][2] = real(u2.norm_sqr());
        m[3][3] = real((T::one() - pop).max(T::zero()));
        Ok(Self { m })
    }

    /// Pure state `|psi><psi|` from a normalised 4-vector.
    pub fn pure(psi: [Complex<T>; 4]) -> Result<Self> {
        let n = psi.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if (n - T::one()).abs() > tol::<T>(1e-12) {
            return Err(Error::Consistency(format!("state norm {n}, expected 1")));
        }
        let mut m = linalg::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = psi[i] * psi[j].conj();
            }
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.m[i][j]
    }

    pub fn trace(&self) -> Complex<T> {
        linalg::trace(&self.m)
    }

    /// Factor `W` with `rho = W W^dagger`, by diagonally pivoted outer-product
    /// Cholesky. Pivots below `1e-13 * trace` end the factorisation; the
    /// corresponding columns of `W` are zero.
    pub fn factor(&self) -> Matrix4<T> {
        let mut a = self.m;
        let mut w = linalg::zeros();
        let cutoff = tol::<T>(1e-13) * self.trace().re;
        let mut used = [false; 4];
        for col in 0..4 {
            let pivot = (0..4)
                .filter(|&i| !used[i])
                .max_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap_or(std::cmp::Ordering::Equal));
            let Some(p) = pivot else { break };
            let d = a[p][p].re;
            if !(d > cutoff) {
                break;
            }
            used[p] = true;
            let root = d.sqrt();
            let mut column = [Complex::zero(); 4];
            for i in 0..4 {
                column[i] = if used[i] && i != p { Complex::zero() } else { a[i][p] / root };
            }
            column[p] = real(root);
            for i in 0..4 {
                w[i][col] = column[i];
                for j in 0..4 {
                    a[i][j] = a[i][j] - column[i] * column[j].conj();
                }
            }
        }
        w
    }
}
