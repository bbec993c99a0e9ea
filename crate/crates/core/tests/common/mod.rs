//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use prolfa::data::DescriptorDataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(lo..hi))
}

/// Random matrix with simplex columns.
pub fn random_simplex_columns(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    let mut m = random_matrix(rng, r, c, 0.01, 1.0);
    for mut col in m.column_iter_mut() {
        let s = col.sum();
        col /= s;
    }
    m
}

/// Random partition of `n` into `m` positive parts.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<usize> {
    let mut sizes = vec![1usize; m];
    for _ in 0..(n - m) {
        sizes[rng.random_range(0..m)] += 1;
    }
    sizes
}

/// Euclidean projection onto the simplex by enumerating every support set:
/// on support `S` the KKT solution is `v_S − τ` with `τ = (Σv_S − 1)/|S|`;
/// the closest feasible candidate is the projection.
pub fn simplex_projection_oracle(v: &[f64]) -> Vec<f64> {
    let k = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let tau = (support.iter().map(|&i| v[i]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut x = vec![0.0; k];
        let mut feasible = true;
        for &i in &support {
            x[i] = v[i] - tau;
            if x[i] < -1e-14 {
                feasible = false;
            }
        }
        if !feasible {
            continue;
        }
        let dist: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|b| dist < b.0) {
            best = Some((dist, x));
        }
    }
    best.expect("some support is always feasible").1
}

/// `A W + W B = Q` through the Kronecker system
/// `(I ⊗ A + Bᵀ ⊗ I) vec(W) = vec(Q)` and a dense LU solve.
pub fn sylvester_kronecker(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut big = DMatrix::zeros(n * m, n * m);
    for j in 0..m {
        for i in 0..n {
            let row = j * n + i;
            for k in 0..n {
                big[(row, j * n + k)] += a[(i, k)];
            }
            for l in 0..m {
                big[(row, l * n + i)] += b[(l, j)];
            }
        }
    }
    let rhs = DVector::from_column_slice(q.as_slice());
    let sol = big.lu().solve(&rhs).expect("nonsingular Kronecker system");
    DMatrix::from_column_slice(n, m, sol.as_slice())
}

/// Largest eigenvalue by a full symmetric eigendecomposition.
pub fn dense_lambda_max(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.max()
}

/// Dense kernel with row `i` = mean over sample `i`'s descriptors of their
/// inner products with every descriptor, built entry by entry.
pub fn dense_kernel(x: &DMatrix<f64>, partition: &[usize], rows: &[usize]) -> DMatrix<f64> {
    let mut starts = vec![0usize];
    for s in partition {
        starts.push(starts.last().unwrap() + s);
    }
    let n = x.ncols();
    DMatrix::from_fn(rows.len(), n, |r, j| {
        let i = rows[r];
        let mut acc = 0.0;
        for a in starts[i]..starts[i + 1] {
            acc += x.column(a).dot(&x.column(j));
        }
        acc / partition[i] as f64
    })
}

pub fn dataset_kernel(ds: &DescriptorDataset) -> DMatrix<f64> {
    let rows: Vec<usize> = (0..ds.n_samples()).collect();
    dense_kernel(ds.descriptors(), ds.partition(), &rows)
}

/// `2 Σ_{i<j} ‖zᵢ ⊙ zⱼ‖₁` over column pairs.
pub fn hadamard_exclusivity(z: &DMatrix<f64>) -> f64 {
    let mut total = 0.0;
    for i in 0..z.ncols() {
        for j in (i + 1)..z.ncols() {
            total += z.column(i).iter().zip(z.column(j).iter()).map(|(a, b)| (a * b).abs()).sum::<f64>();
        }
    }
    2.0 * total
}

/// Objective expanded term by term with explicit loops.
pub fn objective_oracle(
    z: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &DMatrix<f64>,
    y: &DMatrix<f64>,
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let m = k.nrows();
    let d_bar = z.ncols();
    let c = w.ncols();
    let mut total = 0.0;
    for i in 0..m {
        let mut xbar = vec![0.0; d_bar];
        for (p, slot) in xbar.iter_mut().enumerate() {
            for j in 0..k.ncols() {
                *slot += k[(i, j)] * z[(j, p)];
            }
        }
        for o in 0..c {
            let mut pred = 0.0;
            for p in 0..d_bar {
                pred += xbar[p] * w[(p, o)];
            }
            total += (pred - y[(i, o)]).powi(2);
        }
        for p in 0..d_bar {
            let mut back = 0.0;
            for o in 0..c {
                back += y[(i, o)] * w[(p, o)];
            }
            total += (xbar[p] - back).powi(2);
        }
    }
    let mut wsq = 0.0;
    for v in w.iter() {
        wsq += v * v;
    }
    total + lambda1 * hadamard_exclusivity(z) + lambda2 * wsq
}

/// ADMM Lagrangian in the copy `C`, written out with a dense kernel.
#[allow(clippy::too_many_arguments)]
pub fn lagrangian_oracle(
    c: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &DMatrix<f64>,
    y: &DMatrix<f64>,
    mu: f64,
) -> f64 {
    let fit = objective_oracle(c, w, k, y, 0.0, 0.0);
    let mut prox = 0.0;
    let mut lin = 0.0;
    for (idx, (zv, cv)) in z.iter().zip(c.iter()).enumerate() {
        prox += (zv - cv).powi(2);
        lin += lambda.as_slice()[idx] * (zv - cv);
    }
    fit + 0.5 * mu * prox + lin
}

/// Exhaustive direction search for a strict linear separator of two labelled
/// 2-D point sets. Tries a dense angle grid plus the normals of every
/// pairwise difference nudged to both sides.
pub fn linearly_separable_2d(points: &[DVector<f64>], labels: &[usize]) -> bool {
    let mut angles: Vec<f64> = (0..20_000).map(|i| i as f64 * std::f64::consts::TAU / 20_000.0).collect();
    for a in points {
        for b in points {
            let d = b - a;
            if d.norm() > 0.0 {
                let base = d[1].atan2(d[0]) + std::f64::consts::FRAC_PI_2;
                for nudge in [-1e-7, 1e-7] {
                    angles.push(base + nudge);
                    angles.push(base + std::f64::consts::PI + nudge);
                }
            }
        }
    }
    angles.into_iter().any(|t| {
        let (s, c) = t.sin_cos();
        let proj = |p: &DVector<f64>| c * p[0] + s * p[1];
        let max0 = points.iter().zip(labels).filter(|(_, &l)| l == 0).map(|(p, _)| proj(p)).fold(f64::NEG_INFINITY, f64::max);
        let min1 = points.iter().zip(labels).filter(|(_, &l)| l == 1).map(|(p, _)| proj(p)).fold(f64::INFINITY, f64::min);
        max0 < min1
    })
}

pub fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
