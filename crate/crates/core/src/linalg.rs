//! Small dense eigensolvers used by the entanglement diagnostics and the
//! bath spectrum analysis. Matrices are row-major `n × n` slices.

use crate::scalar::{czero, Real, C};

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the columns of a row-major matrix. Only the upper triangle is assumed
/// consistent with the lower one; callers pass genuinely Hermitian input.
pub fn hermitian_eigen<T: Real>(matrix: &[C<T>], n: usize) -> (Vec<T>, Vec<C<T>>) {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    let mut v = vec![czero::<T>(); n * n];
    for i in 0..n {
        v[i * n + i] = C::new(T::one(), T::zero());
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let tol = T::epsilon() * T::lit(0.5) * scale.max(T::min_positive_value());
    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on (p, q); A ← J†AJ, V ← VJ
                let sp = phase * s;
                let sm = phase.conj() * s;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * sm;
                    a[k * n + q] = akp * sp + akq * c;
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * sm;
                    v[k * n + q] = vkp * sp + vkq * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * sp;
                    a[q * n + k] = apk * sm + aqk * c;
                }
                a[p * n + q] = czero();
                a[q * n + p] = czero();
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .re
            .partial_cmp(&a[j * n + j].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = vec![czero(); n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new] = v[k * n + old];
        }
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(matrix: &[C<T>], n: usize) -> Vec<T> {
    hermitian_eigen(matrix, n).0
}

/// Eigenvalues of the real symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e`, by Sturm-sequence bisection. Ascending.
pub fn symmetric_tridiagonal_eigenvalues<T: Real>(d: &[T], e: &[T]) -> Vec<T> {
    let n = d.len();
    assert!(e.len() + 1 == n || n == 0, "off-diagonal length");
    if n == 0 {
        return Vec::new();
    }
    // Gershgorin interval
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { T::zero() } + if i + 1 < n { e[i].abs() } else { T::zero() };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let span = (hi - lo).max(T::min_positive_value());
    lo = lo - span * T::lit(1e-3);
    hi = hi + span * T::lit(1e-3);
    // number of eigenvalues strictly below x
    let count_below = |x: T| -> usize {
        let mut count = 0;
        let mut q = T::one();
        for i in 0..n {
            let off = if i > 0 { e[i - 1] * e[i - 1] } else { T::zero() };
            q = d[i] - x - if i > 0 { off / q } else { T::zero() };
            if q == T::zero() {
                q = T::epsilon() * span;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    };
    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = T::lit(0.5) * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            T::lit(0.5) * (a + b)
        })
        .collect()
}

/// Row-major product of two n × n complex matrices.
pub fn matmul<T: Real>(a: &[C<T>], b: &[C<T>], n: usize) -> Vec<C<T>> {
    let mut out = vec![czero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == czero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(a: &[C<T>], n: usize) -> Vec<C<T>> {
    let mut out = vec![czero(); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j].conj();
        }
    }
    out
}
