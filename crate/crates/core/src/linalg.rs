//! Dense 4x4 complex linear algebra: Hermitian Jacobi eigen-decomposition,
//! one-sided Jacobi singular values and a shifted-QR eigenvalue solver for
//! general (non-Hermitian) matrices.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{lit, real, Real};

pub type Matrix4<T> = [[Complex<T>; 4]; 4];

const MAX_SWEEPS: usize = 64;
const MAX_QR_ITERS: usize = 200;

pub fn zeros<T: Real>() -> Matrix4<T> {
    [[Complex::zero(); 4]; 4]
}

pub fn identity<T: Real>() -> Matrix4<T> {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex::one();
    }
    m
}

pub fn matmul<T: Real>(a: &Matrix4<T>, b: &Matrix4<T>) -> Matrix4<T> {
    let mut out = zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).fold(Complex::zero(), |s, x| s + x);
        }
    }
    out
}

pub fn adjoint<T: Real>(a: &Matrix4<T>) -> Matrix4<T> {
    let mut out = zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn trace<T: Real>(a: &Matrix4<T>) -> Complex<T> {
    (0..4).map(|i| a[i][i]).fold(Complex::zero(), |s, x| s + x)
}

/// Frobenius norm.
pub fn norm<T: Real>(a: &Matrix4<T>) -> T {
    a.iter().flatten().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt()
}

pub(crate) fn describe<T: Real>(a: &Matrix4<T>) -> String {
    let rows: Vec<String> = a
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Unitary 2x2 rotation `[[c, s], [-s e^{-i theta}, c e^{-i theta}]]` that
/// diagonalises the Hermitian block `[[a, b], [conj(b), d]]`.
fn jacobi_rotation<T: Real>(a: T, d: T, b: Complex<T>) -> [[Complex<T>; 2]; 2] {
    let mag = b.norm();
    let phase = if mag > T::zero() { b.conj() / mag } else { Complex::one() };
    let zeta = (d - a) / (lit::<T>(2.0) * mag);
    let t = if zeta >= T::zero() {
        T::one() / (zeta + (zeta * zeta + T::one()).sqrt())
    } else {
        -T::one() / (-zeta + (zeta * zeta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    [[real(c), real(s)], [phase * (-s), phase * c]]
}

/// Eigenvalues (ascending) and unit eigenvectors (as columns) of a Hermitian
/// matrix, by cyclic complex Jacobi rotations.
pub fn hermitian_eigen<T: Real>(m: &Matrix4<T>) -> Result<([T; 4], Matrix4<T>)> {
    let mut a = *m;
    let mut v = identity();
    let scale = norm(&a);
    let threshold = T::epsilon() * scale;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[i][j].norm_sqr())
            .sqrt();
        if off <= threshold || scale == T::zero() {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q].norm() <= threshold * lit(1e-3) {
                    continue;
                }
                let u = jacobi_rotation(a[p][p].re, a[q][q].re, a[p][q]);
                rotate_columns(&mut a, p, q, &u);
                rotate_rows_adjoint(&mut a, p, q, &u);
                rotate_columns(&mut v, p, q, &u);
                a[p][q] = Complex::zero();
                a[q][p] = Complex::zero();
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "hermitian jacobi", matrix: describe(m) });
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap_or(std::cmp::Ordering::Equal));
    let mut values = [T::zero(); 4];
    let mut vectors = zeros();
    for (k, &i) in order.iter().enumerate() {
        values[k] = a[i][i].re;
        for r in 0..4 {
            vectors[r][k] = v[r][i];
        }
    }
    Ok((values, vectors))
}

/// `A <- A U` restricted to columns `p`, `q`.
fn rotate_columns<T: Real>(a: &mut Matrix4<T>, p: usize, q: usize, u: &[[Complex<T>; 2]; 2]) {
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u[0][0] + y * u[1][0];
        row[q] = x * u[0][1] + y * u[1][1];
    }
}

/// `A <- U^dagger A` restricted to rows `p`, `q`.
fn rotate_rows_adjoint<T: Real>(a: &mut Matrix4<T>, p: usize, q: usize, u: &[[Complex<T>; 2]; 2]) {
    for j in 0..4 {
        let (x, y) = (a[p][j], a[q][j]);
        a[p][j] = u[0][0].conj() * x + u[1][0].conj() * y;
        a[q][j] = u[0][1].conj() * x + u[1][1].conj() * y;
    }
}

/// Singular values (descending) by one-sided Jacobi orthogonalisation of the
/// columns. Small singular values come out with absolute error of order
/// `eps * ||m||`, which is what square-root sensitive callers need.
pub fn singular_values<T: Real>(m: &Matrix4<T>) -> Result<[T; 4]> {
    let mut a = *m;
    let eps = T::epsilon();
    // columns below eps * ||m|| are numerically zero; rotating them never settles
    let negligible = (eps * norm(&a)).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), Complex::zero());
                for row in a.iter() {
                    alpha = alpha + row[p].norm_sqr();
                    beta = beta + row[q].norm_sqr();
                    gamma = gamma + row[p].conj() * row[q];
                }
                if alpha <= negligible || beta <= negligible || gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let u = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, &u);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "one-sided jacobi", matrix: describe(m) });
    }
    let mut sv = [T::zero(); 4];
    for (j, s) in sv.iter_mut().enumerate() {
        *s = a.iter().fold(T::zero(), |acc, row| acc + row[j].norm_sqr()).sqrt();
    }
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

/// All four eigenvalues of a general complex matrix: Householder reduction
/// to Hessenberg form followed by Wilkinson-shifted complex QR sweeps with
/// deflation. Order is unspecified.
pub fn eigenvalues<T: Real>(m: &Matrix4<T>) -> Result<[Complex<T>; 4]> {
    let mut h = *m;
    hessenberg(&mut h);
    let eps = T::epsilon();
    let mut eig = [Complex::zero(); 4];
    let mut hi = 3usize;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let s = h[l][l].norm() + h[l - 1][l - 1].norm();
            let s = if s == T::zero() { norm(&h) } else { s };
            if h[l][l - 1].norm() <= eps * s {
                h[l][l - 1] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > MAX_QR_ITERS {
            return Err(Error::NoConvergence { routine: "shifted QR", matrix: describe(m) });
        }
        let shift = if iter % 11 == 10 {
            // exceptional shift to break cycles
            h[hi][hi] + real(h[hi][hi - 1].norm() * lit(0.75))
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok(eig)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = lit::<T>(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_step<T: Real>(h: &mut Matrix4<T>, lo: usize, hi: usize, shift: Complex<T>) {
    for k in lo..=hi {
        h[k][k] = h[k][k] - shift;
    }
    let mut rotations = [(T::zero(), Complex::zero()); 3];
    for k in lo..hi {
        let (x, y) = (h[k][k], h[k + 1][k]);
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == T::zero() {
            (T::one(), Complex::zero())
        } else if x.norm() == T::zero() {
            (T::zero(), y.conj() / r)
        } else {
            (x.norm() / r, (x / x.norm()) * y.conj() / r)
        };
        rotations[k - lo] = (c, s);
        for j in k..=hi {
            let (p, q) = (h[k][j], h[k + 1][j]);
            h[k][j] = p * c + s * q;
            h[k + 1][j] = -s.conj() * p + q * c;
        }
    }
    for k in lo..hi {
        let (c, s) = rotations[k - lo];
        let top = (k + 2).min(hi);
        for row in h.iter_mut().take(top + 1).skip(lo) {
            let (p, q) = (row[k], row[k + 1]);
            row[k] = p * c + s.conj() * q;
            row[k + 1] = -s * p + q * c;
        }
    }
    for k in lo..=hi {
        h[k][k] = h[k][k] + shift;
    }
}

/// In-place unitary similarity to upper Hessenberg form.
fn hessenberg<T: Real>(h: &mut Matrix4<T>) {
    for k in 0..2 {
        let xnorm = ((k + 1)..4).fold(T::zero(), |s, i| s + h[i][k].norm_sqr()).sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() > T::zero() { x0 / x0.norm() } else { Complex::one() };
        let alpha = -phase * xnorm;
        let mut v = [Complex::zero(); 4];
        for i in (k + 1)..4 {
            v[i] = h[i][k];
        }
        v[k + 1] = v[k + 1] - alpha;
        let vnorm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        let two = lit::<T>(2.0);
        // H <- (I - 2 v v^dagger) H
        for j in 0..4 {
            let dot = (0..4).fold(Complex::zero(), |s, i| s + v[i].conj() * h[i][j]);
            for i in 0..4 {
                h[i][j] = h[i][j] - v[i] * dot * two;
            }
        }
        // H <- H (I - 2 v v^dagger)
        for row in h.iter_mut() {
            let dot = (0..4).fold(Complex::<T>::zero(), |s, j| s + row[j] * v[j]);
            for j in 0..4 {
                row[j] = row[j] - dot * v[j].conj() * two;
            }
        }
    }
}
