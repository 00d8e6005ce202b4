use super::{canonicalize_sign, dot, Dense};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// `a = u * diag(s) * vt`, singular values non-increasing, columns of `u`
/// sign-canonicalized and `vt` adjusted to preserve the product.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd<T> {
    pub u: Dense<T>,
    pub s: Vec<T>,
    pub vt: Dense<T>,
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
///
/// Deterministic for a given input; high relative accuracy for the leading
/// singular triplets even when the matrix is close to rank one.
pub fn svd<T: Real>(a: &Dense<T>) -> Svd<T> {
    let n = a.dim();
    // Column-major working copy: w[j] is column j of a * v.
    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();

    // Pre-scale to dodge overflow in the squared norms.
    let scale = a.max_abs();
    let inv_scale = if scale > T::zero() { T::one() / scale } else { T::one() };
    for col in &mut w {
        for x in col.iter_mut() {
            *x *= inv_scale;
        }
    }

    let tol = T::epsilon() * T::from_usize_lossy(n.max(1));
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<T> = w.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut u_cols: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut s_sorted = Vec::with_capacity(n);
    for &j in &order {
        let sj = sigma[j];
        let mut uc = if sj > T::zero() {
            w[j].iter().map(|&x| x / sj).collect::<Vec<_>>()
        } else {
            vec![T::zero(); n]
        };
        let mut vc = v[j].clone();
        if norm_sq(&uc) < T::lit(0.25) {
            uc = complete_basis(&u_cols, n);
        }
        if canonicalize_sign(&mut uc) {
            for x in vc.iter_mut() {
                *x = -*x;
            }
        }
        u_cols.push(uc);
        v_cols.push(vc);
        s_sorted.push(sj * scale);
    }

    let mut u = Dense::zeros(n);
    let mut vt = Dense::zeros(n);
    for j in 0..n {
        for i in 0..n {
            u[(i, j)] = u_cols[j][i];
            vt[(j, i)] = v_cols[j][i];
        }
    }
    Svd { u, s: s_sorted, vt }
}

fn rotate<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

fn norm_sq<T: Real>(v: &[T]) -> T {
    dot(v, v)
}

/// A unit vector orthogonal to every vector in `basis`, by Gram-Schmidt
/// against the standard basis vectors in order.
fn complete_basis<T: Real>(basis: &[Vec<T>], n: usize) -> Vec<T> {
    for k in 0..n {
        let mut e: Vec<T> = (0..n).map(|i| if i == k { T::one() } else { T::zero() }).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &e);
                for (x, &y) in e.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let nn = norm_sq(&e).sqrt();
        if nn > T::lit(0.5) {
            return e.into_iter().map(|x| x / nn).collect();
        }
    }
    vec![T::zero(); n]
}
