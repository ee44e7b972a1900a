//! Wootters concurrence of two-qubit states, and the closed form for
//! one-excitation X states.

use num_complex::Complex;

use crate::density::DensityMatrix4;
use crate::error::Result;
use crate::linalg::{self, Matrix4};
use crate::scalar::{lit, tol, Real};

/// Diagonal of the anti-diagonal matrix `sigma_y (x) sigma_y` in the
/// `{ee, eg, ge, gg}` basis: entry `(i, 3 - i)` carries `FLIP_SIGN[i]`.
const FLIP_SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult<T: Real = f64> {
    pub value: T,
    /// Eigenvalues of `rho * spin_flip(rho)` in decreasing order, clamped at 0.
    pub lambdas: [T; 4],
}

/// `(sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y)` by index reversal and sign.
pub fn spin_flip<T: Real>(rho: &DensityMatrix4<T>) -> Matrix4<T> {
    let m = rho.matrix();
    let mut out = linalg::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let sign = lit::<T>(FLIP_SIGN[i] * FLIP_SIGN[j]);
            out[i][j] = m[3 - i][3 - j].conj() * sign;
        }
    }
    out
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)` with `l_i = sqrt(lambda_i)`.
///
/// The `l_i` are obtained as singular values of `W^T (sigma_y (x) sigma_y) W`
/// for a factor `rho = W W^dagger`; their squares are exactly the eigenvalues
/// of `rho * spin_flip(rho)`. Working with singular values keeps the vanishing
/// `l_i` at `~1e-16` instead of the `~1e-8` a direct eigen-solve of the
/// product yields after the square root.
pub fn wootters_concurrence<T: Real>(rho: &DensityMatrix4<T>) -> Result<ConcurrenceResult<T>> {
    let w = rho.factor();
    let mut tilde = linalg::zeros();
    for k in 0..4 {
        for l in 0..4 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..4 {
                acc = acc + w[i][k] * w[3 - i][l] * lit::<T>(FLIP_SIGN[i]);
            }
            tilde[k][l] = acc;
        }
    }
    let roots = linalg::singular_values(&tilde)?;
    let value = (roots[0] - roots[1] - roots[2] - roots[3]).max(T::zero()).min(T::one());
    Ok(ConcurrenceResult { value, lambdas: roots.map(|l| l * l) })
}

/// Eigenvalues of `rho * spin_flip(rho)` from the general non-Hermitian QR
/// solver, sorted descending and clamped at zero. Used to cross-check
/// [`wootters_concurrence`]; fails if any eigenvalue carries an imaginary
/// part above `1e-9`.
pub fn product_eigenvalues<T: Real>(rho: &DensityMatrix4<T>) -> Result<[T; 4]> {
    let r = linalg::matmul(rho.matrix(), &spin_flip(rho));
    let ev = linalg::eigenvalues(&r)?;
    if let Some(bad) = ev.iter().find(|z| z.im.abs() > tol::<T>(1e-9)) {
        return Err(crate::Error::Consistency(format!("eigenvalue {bad} of rho * rho~ is not real")));
    }
    let mut vals = ev.map(|z| z.re.max(T::zero()));
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(vals)
}

/// `2 |u1 conj(u2)|` for the one-excitation X state.
pub fn closed_form_concurrence<T: Real>(u1: Complex<T>, u2: Complex<T>) -> T {
    lit::<T>(2.0) * (u1 * u2.conj()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn basis(k: usize) -> [C; 4] {
        let mut v = [c(0.0, 0.0); 4];
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn spin_flip_fixed_points_and_swap() {
        let mut m = linalg::zeros();
        for i in 0..4 {
            m[i][i] = c(0.25, 0.0);
        }
        let mixed = DensityMatrix4::<f64>::new(m).unwrap();
        assert_eq!(spin_flip(&mixed), m);

        let ee = DensityMatrix4::<f64>::pure(basis(0)).unwrap();
        let flipped = spin_flip(&ee);
        assert_eq!(flipped, *DensityMatrix4::<f64>::pure(basis(3)).unwrap().matrix());

        let bell = DensityMatrix4::<f64>::from_one_excitation(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let f = spin_flip(&bell);
        for i in 0..4 {
            for j in 0..4 {
                assert!((f[i][j] - bell.get(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_state_is_maximal() {
        let bell = DensityMatrix4::<f64>::from_one_excitation(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let res = wootters_concurrence(&bell).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
        assert!((res.lambdas[0] - 1.0).abs() < 1e-12);
        assert!(res.lambdas[1..].iter().all(|&l| l < 1e-15));
    }

    #[test]
    fn product_state_is_zero() {
        let eg = DensityMatrix4::<f64>::pure(basis(1)).unwrap();
        assert_eq!(wootters_concurrence(&eg).unwrap().value, 0.0);
    }

    #[test]
    fn generic_one_excitation_state() {
        let (u1, u2) = (c(0.5, 0.1), c(0.3, -0.2));
        let rho = DensityMatrix4::<f64>::from_one_excitation(u1, u2).unwrap();
        // 2 * sqrt(0.26) * sqrt(0.13)
        let expected = 2.0 * (0.26f64 * 0.13).sqrt();
        assert!((expected - 0.36770).abs() < 1e-5);
        assert!((closed_form_concurrence(u1, u2) - expected).abs() < 1e-15);
        assert!((wootters_concurrence(&rho).unwrap().value - expected).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_concurrence(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(closed_form_concurrence(c(1.0, 0.0), c(0.0, 0.0)), 0.0);
        let u2 = C::from_polar(0.8, PI / 3.0);
        assert!((closed_form_concurrence(c(0.6, 0.0), u2) - 0.96).abs() < 1e-15);
    }

    #[test]
    fn qr_eigenvalues_agree_with_singular_route() {
        let rho = DensityMatrix4::<f64>::from_one_excitation(c(0.4, -0.3), c(0.1, 0.6)).unwrap();
        let res = wootters_concurrence(&rho).unwrap();
        let direct = product_eigenvalues(&rho).unwrap();
        for i in 0..4 {
            assert!((res.lambdas[i] - direct[i]).abs() < 1e-10, "{:?} vs {:?}", res.lambdas, direct);
        }
    }

    #[test]
    fn werner_state() {
        // p |Phi+><Phi+| + (1-p) I/4 has C = max(0, (3p - 1) / 2)
        for &p in &[0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let mut m = linalg::zeros();
            for i in 0..4 {
                m[i][i] = c((1.0 - p) / 4.0, 0.0);
            }
            m[0][0] += c(p / 2.0, 0.0);
            m[3][3] += c(p / 2.0, 0.0);
            m[0][3] = c(p / 2.0, 0.0);
            m[3][0] = c(p / 2.0, 0.0);
            let rho = DensityMatrix4::<f64>::new(m).unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((wootters_concurrence(&rho).unwrap().value - expected).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn single_precision() {
        let rho = DensityMatrix4::<f32>::from_one_excitation(Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)).unwrap();
        assert!((wootters_concurrence(&rho).unwrap().value - 0.96).abs() < 1e-5);
    }

    prop_compose! {
        fn one_excitation()(r in 0.0f64..=1.0, mix in 0.0f64..=1.0, a in 0.0..(2.0 * PI), b in 0.0..(2.0 * PI)) -> (C, C) {
            let n1 = (r * mix).sqrt();
            let n2 = (r * (1.0 - mix)).sqrt();
            (C::from_polar(n1, a), C::from_polar(n2, b))
        }
    }

    proptest! {
        #[test]
        fn phase_invariance((u1, u2) in one_excitation(), th in 0.0..(2.0 * PI)) {
            let ph = C::from_polar(1.0, th);
            let base = wootters_concurrence(&DensityMatrix4::<f64>::from_one_excitation(u1, u2).unwrap()).unwrap().value;
            let rot = wootters_concurrence(&DensityMatrix4::<f64>::from_one_excitation(u1 * ph, u2).unwrap()).unwrap().value;
            prop_assert!((base - rot).abs() < 1e-12);
            prop_assert!((closed_form_concurrence(u1, u2) - closed_form_concurrence(u1, u2 * ph)).abs() < 1e-12);
        }

        #[test]
        fn diagonal_states_are_separable(w in proptest::array::uniform4(0.0f64..1.0)) {
            let total: f64 = w.iter().sum();
            prop_assume!(total > 1e-6);
            let mut m = linalg::zeros();
            for i in 0..4 {
                m[i][i] = c(w[i] / total, 0.0);
            }
            let rho = DensityMatrix4::<f64>::new(m).unwrap();
            prop_assert_eq!(wootters_concurrence(&rho).unwrap().value, 0.0);
        }

        #[test]
        fn bounded_for_random_mixed_states(entries in proptest::array::uniform32(-1.0f64..1.0)) {
            let mut x = linalg::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    x[i][j] = c(entries[2 * (4 * i + j)], entries[2 * (4 * i + j) + 1]);
                }
            }
            let mut m = linalg::matmul(&x, &linalg::adjoint(&x));
            let tr = linalg::trace(&m).re;
            prop_assume!(tr > 1e-6);
            for z in m.iter_mut().flatten() {
                *z /= tr;
            }
            let rho = DensityMatrix4::<f64>::new(m).unwrap();
            let res = wootters_concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&res.value));
            let direct = product_eigenvalues(&rho).unwrap();
            for i in 0..4 {
                prop_assert!((res.lambdas[i] - direct[i]).abs() < 1e-10);
            }
        }
    }
}
