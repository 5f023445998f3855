//! Small dense linear-algebra helpers shared by the Gaussian and Fock layers.
//!
//! Spectra of density operators are computed block-wise: the nonzero pattern
//! of a Hermitian matrix splits its index set into connected components, and
//! the spectrum is the union of the component spectra. Phase-covariant
//! channels keep states block-diagonal in photon-number-difference sectors,
//! so this turns most two-mode eigenproblems into many small ones.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Eigenvalues in `[-CLAMP, 0)` are treated as rounding noise and set to zero.
pub const EIGEN_CLAMP: f64 = 1e-9;

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Index blocks of a Hermitian matrix: connected components of the graph
/// whose edges are the exactly-nonzero off-diagonal entries.
pub fn hermitian_blocks(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut sets = DisjointSets::new(n);
    for j in 0..n {
        for i in (j + 1)..n {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                sets.union(i, j);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = sets.find(i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn sub_matrix(m: &DMatrix<C64>, idx: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows());
    for block in hermitian_blocks(m) {
        if block.len() == 1 {
            out.push(m[(block[0], block[0])].re);
        } else {
            out.extend(sub_matrix(m, &block).symmetric_eigenvalues().iter().copied());
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Full eigendecomposition `m = V diag(w) V†`, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    for block in hermitian_blocks(m) {
        if block.len() == 1 {
            let mut v = DVector::zeros(n);
            v[block[0]] = C64::new(1.0, 0.0);
            pairs.push((m[(block[0], block[0])].re, v));
            continue;
        }
        let eig = sub_matrix(m, &block).symmetric_eigen();
        for (k, &w) in eig.eigenvalues.iter().enumerate() {
            let mut v = DVector::zeros(n);
            for (a, &i) in block.iter().enumerate() {
                v[i] = eig.eigenvectors[(a, k)];
            }
            pairs.push((w, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = DVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let mut vectors = DMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    (values, vectors)
}

/// `-x ln x` with the `0 ln 0 = 0` convention.
pub fn neg_xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Shannon/von Neumann entropy of a spectrum, applying the clamp policy.
pub fn spectral_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &w in eigenvalues {
        if w < -EIGEN_CLAMP {
            return Err(Error::NegativeEigenvalue(w));
        }
        s += neg_xlogx(w.max(0.0));
    }
    Ok(s)
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|w| w.abs()).sum()
}

/// Largest deviation from Hermiticity, relative to the largest entry.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in j..m.nrows() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst / scale
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &DMatrix<C64>) -> C64 {
    m.diagonal().sum()
}

/// Table of `ln n!` for `n < len`.
pub fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len.max(1));
    out.push(0.0);
    for n in 1..len {
        out.push(out[n - 1] + (n as f64).ln());
    }
    out
}

/// Laguerre polynomial `L_n(x)` and `L_{n-1}(x)` by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss-Laguerre rule with weight `e^{-x}` on `[0, inf)`.
///
/// Returns nodes and the natural logarithm of the weights; the rule integrates
/// polynomials of degree `2n - 1` exactly. Nodes come from the Golub-Welsch
/// eigenproblem and are polished by Newton steps; weights use the closed form
/// `x / ((n+1)^2 L_{n+1}(x)^2)`, which keeps relative accuracy for the tiny
/// weights attached to large nodes.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Laguerre rule needs at least one node");
    let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i.abs_diff(j) == 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (ln, lnm1) = laguerre_pair(n, *x);
            let deriv = nf * (ln - lnm1) / *x;
            if deriv == 0.0 || !deriv.is_finite() {
                break;
            }
            let step = ln / deriv;
            if !step.is_finite() {
                break;
            }
            *x -= step;
        }
    }
    let log_weights = nodes
        .iter()
        .map(|&x| {
            let (lnp1, _) = laguerre_pair(n + 1, x);
            x.ln() - 2.0 * (nf + 1.0).ln() - 2.0 * lnp1.abs().ln()
        })
        .collect();
    (nodes, log_weights)
}
