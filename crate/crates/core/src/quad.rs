//! Composite Gauss-Legendre quadrature and equispaced finite-difference weights.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// A fixed Gauss-Legendre rule applied panel-wise.
#[derive(Debug, Clone)]
pub struct Composite {
    pairs: Vec<(f64, f64)>,
}

impl Composite {
    /// `order` nodes per panel (at least 2).
    pub fn new(order: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(order.max(2)).expect("nonzero"));
        let pairs = rule.as_node_weight_pairs().iter().map(|&(x, w)| (x, w)).collect();
        Self { pairs }
    }

    /// Nodes and weights of the composite rule on `[a, b]` with `panels` panels.
    pub fn nodes(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.pairs.len());
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for &(x, w) in &self.pairs {
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        out
    }

    pub fn integrate(&self, a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        if a == b {
            return 0.0;
        }
        self.nodes(a, b, panels).iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Weights `c` with `f^(m)(z) ~ sum_j c_j f(x_j)` (Fornberg's recursion).
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}
