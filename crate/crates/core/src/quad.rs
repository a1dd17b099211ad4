//! Gauss quadrature rules (Golub-Welsch construction).
//!
//! Nodes and weights come from the symmetric tridiagonal Jacobi matrix of the
//! orthogonal-polynomial family; eigenvalues are the nodes and the squared
//! first eigenvector components give the weights. Nodes are sorted ascending
//! so the rules are deterministic.

use nalgebra::DMatrix;

fn golub_welsch(diag: &[f64], offdiag: &[f64], moment0: f64) -> Vec<(f64, f64)> {
    let n = diag.len();
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for (i, &d) in diag.iter().enumerate() {
        jacobi[(i, i)] = d;
    }
    for (i, &e) in offdiag.iter().enumerate() {
        jacobi[(i, i + 1)] = e;
        jacobi[(i + 1, i)] = e;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], moment0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Gauss-Hermite rule: integrates `e^{-x^2} f(x)` over the real line.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pairs: Vec<(f64, f64)>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let diag = vec![0.0; n];
        let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        Self {
            pairs: golub_welsch(&diag, &offdiag, std::f64::consts::PI.sqrt()),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs.iter().copied()
    }

    /// Integrate `e^{-x^2} f(x) dx` over (-inf, inf).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.pairs.iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Gauss-Legendre rule on [-1, 1], with an affine map helper.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pairs: Vec<(f64, f64)>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let diag = vec![0.0; n];
        let offdiag: Vec<f64> = (1..n)
            .map(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            })
            .collect();
        Self {
            pairs: golub_welsch(&diag, &offdiag, 2.0),
        }
    }

    /// Nodes and weights mapped to the interval [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.pairs
            .iter()
            .map(|&(x, w)| (mid + half * x, half * w))
            .collect()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.mapped(a, b).iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Product rule for the spin measure `(2/pi) sin(2 theta) dtheta dphi` over
/// `theta in [0, pi/2]`, `phi in [0, pi)`. Substituting `u = cos(2 theta)`
/// turns the measure into `(1/pi) du dphi` with `u in [-1, 1]`, so a pair of
/// Gauss-Legendre rules is exact for the polynomial integrands the kernels
/// produce. Total measure is 2.
#[derive(Debug, Clone)]
pub struct SpinRule {
    /// (theta, phi, weight) triples; weights sum to 2.
    pub nodes: Vec<(f64, f64, f64)>,
}

impl SpinRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let gu = GaussLegendre::new(n_theta);
        let gphi = GaussLegendre::new(n_phi).mapped(0.0, std::f64::consts::PI);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for &(u, wu) in &gu.pairs {
            let theta = 0.5 * u.clamp(-1.0, 1.0).acos();
            for &(phi, wphi) in &gphi {
                nodes.push((theta, phi, wu * wphi / std::f64::consts::PI));
            }
        }
        Self { nodes }
    }
}
