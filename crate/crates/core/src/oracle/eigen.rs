//! Dense real-symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by implicit-shift QL iterations (the EISPACK `tred2`/`tql2`
//! pair, after the JAMA translation).
//!
//! Deterministic: fixed loop order, no internal parallelism.

use crate::error::{Error, Result};

/// Relative off-diagonal norm a non-deflated element must reach before the
/// solver accepts an eigenvalue that exhausted its iteration budget.
pub const OFFDIAGONAL_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

/// Eigenvalues in ascending order with their orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row `j` (length `n`) is the eigenvector of `values[j]`.
    vectors: Vec<f64>,
    n: usize,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.n..(j + 1) * self.n]
    }
}

/// Diagonalizes the `n × n` row-major symmetric matrix `a`.
///
/// Only the lower triangle is read.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    assert_eq!(a.len(), n * n, "matrix storage does not match dimension");
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: vec![],
            n,
        });
    }
    let mut v = a.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            v[i * n + j] = v[j * n + i];
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, n, &mut d, &mut e);

    // QL rotations act on columns of the accumulated transform; work on the
    // transpose so that they touch contiguous rows.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            w[i * n + k] = v[k * n + i];
        }
    }
    ql_implicit(&mut w, n, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&j| d[j]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &j in &order {
        vectors.extend_from_slice(&w[j * n..(j + 1) * n]);
    }
    Ok(SymmetricEigen { values, vectors, n })
}

/// Householder reduction. On exit `v` holds the orthogonal transform, `d` the
/// diagonal and `e[1..]` the sub-diagonal.
fn tridiagonalize(v: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal `(d, e)`; `w` holds the transform
/// transposed (row `i` becomes eigenvector `i`).
fn ql_implicit(w: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut norm = 0.0f64;
    for l in 0..n {
        norm = norm.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * norm {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    let residual = e[l].abs() / norm;
                    if residual <= OFFDIAGONAL_TOLERANCE {
                        break;
                    }
                    return Err(Error::Convergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                        residual,
                        tolerance: OFFDIAGONAL_TOLERANCE,
                    });
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lower, upper) = w.split_at_mut((i + 1) * n);
                    let row_i = &mut lower[i * n..];
                    let row_next = &mut upper[..n];
                    for (x, y) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let t = *y;
                        *y = s * *x + c * t;
                        *x = c * *x - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * norm {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &[f64], n: usize, eig: &SymmetricEigen) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..n {
            let v = eig.vector(j);
            for i in 0..n {
                let av: f64 = (0..n).map(|k| a[i * n + k] * v[k]).sum();
                worst = worst.max((av - eig.values[j] * v[i]).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let eig = symmetric_eigen(&a, 2).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 3.0).abs() < 1e-15);
        let v = eig.vector(0);
        assert!((v[0] + v[1]).abs() < 1e-15);
    }

    #[test]
    fn diagonal_and_trivial_sizes() {
        let eig = symmetric_eigen(&[5.0], 1).unwrap();
        assert_eq!(eig.values, vec![5.0]);
        let a = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let eig = symmetric_eigen(&a, 3).unwrap();
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn open_chain_spectrum() {
        // eigenvalues of the open tight-binding chain: -2 cos(πm/(n+1))
        let n = 40;
        let mut a = vec![0.0; n * n];
        for i in 0..n - 1 {
            a[i * n + i + 1] = -1.0;
            a[(i + 1) * n + i] = -1.0;
        }
        let eig = symmetric_eigen(&a, n).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|m| -2.0 * (std::f64::consts::PI * m as f64 / (n + 1) as f64).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(residual(&a, n, &eig) < 1e-13);
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let n = 12;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] =
                    1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 };
            }
        }
        let eig = symmetric_eigen(&a, n).unwrap();
        for p in 0..n {
            for q in 0..n {
                let dot: f64 = eig
                    .vector(p)
                    .iter()
                    .zip(eig.vector(q))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if p == q { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-13);
            }
        }
        assert!(residual(&a, n, &eig) < 1e-12);
    }
}
