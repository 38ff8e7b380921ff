//! Small dense kernels for d <= 8 sized problems.

use nalgebra::{DMatrix, SymmetricEigen};

/// LU factorization with partial pivoting of a square row-major matrix.
#[derive(Debug, Clone)]
pub(crate) struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub(crate) fn new(n: usize, mut a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Self { n, lu: a, perm, singular }
    }

    /// Natural log of |det|, `-inf` when singular.
    pub(crate) fn log_abs_det(&self) -> f64 {
        if self.singular {
            return f64::NEG_INFINITY;
        }
        (0..self.n).map(|k| self.lu[k * self.n + k].abs().ln()).sum()
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Some(x)
    }

    /// Solves `A^T x = b`.
    pub(crate) fn solve_transpose(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        // U^T z = b
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                z[i] -= self.lu[j * n + i] * z[j];
            }
            z[i] /= self.lu[i * n + i];
        }
        // L^T w = z
        for i in (0..n).rev() {
            for j in i + 1..n {
                z[i] -= self.lu[j * n + i] * z[j];
            }
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        Some(x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Smallest eigenvalue of a symmetric row-major matrix.
pub(crate) fn min_eigenvalue(n: usize, a: &[f64]) -> f64 {
    let m = DMatrix::from_row_slice(n, n, a);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Unit vector orthogonal to every row of `rows` (each of length `dim`),
/// via two-pass Gram-Schmidt. Returns `None` when the rows are rank deficient
/// relative to `tol`.
pub(crate) fn orthogonal_complement(rows: &[Vec<f64>], dim: usize, tol: f64) -> Option<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let scale = norm(r);
        let mut v = r.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        if nv <= tol * scale.max(1.0) || nv == 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        basis.push(v);
    }
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for k in 0..dim {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        if nv > best_norm {
            best_norm = nv;
            best = Some(v);
        }
    }
    let mut v = best?;
    v.iter_mut().for_each(|x| *x /= best_norm);
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_det_and_solve() {
        let a = vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        let lu = Lu::new(3, a.clone());
                assert!((lu.log_abs_det() - 18f64.ln()).abs() < 1e-12);
        let x = lu.solve(&[1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
            assert!((r - [1.0, 2.0, 3.0][i]).abs() < 1e-12);
        }
        let y = lu.solve_transpose(&[1.0, -1.0, 2.0]).unwrap();
        for j in 0..3 {
            let r: f64 = (0..3).map(|i| a[i * 3 + j] * y[i]).sum();
            assert!((r - [1.0, -1.0, 2.0][j]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix() {
        let lu = Lu::new(2, vec![1.0, 2.0, 2.0, 4.0]);
        assert_eq!(lu.log_abs_det(), f64::NEG_INFINITY);
        assert!(lu.solve(&[1.0, 1.0]).is_none());
    }

    #[test]
    fn complement_is_orthogonal() {
        let rows = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let n = orthogonal_complement(&rows, 3, 1e-12).unwrap();
        assert!(dot(&n, &rows[0]).abs() < 1e-14);
        assert!(dot(&n, &rows[1]).abs() < 1e-14);
        assert!((norm(&n) - 1.0).abs() < 1e-14);
        assert!(orthogonal_complement(&[vec![1.0, 0.0], vec![2.0, 0.0]], 2, 1e-12).is_none());
    }
}
