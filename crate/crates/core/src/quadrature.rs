//! Composite Gauss–Legendre quadrature.

use crate::error::{Error, Result};
use crate::profile::WeightProfile;

/// Gauss points per panel for the default composite rule.
pub const DEFAULT_PANEL_ORDER: usize = 2;
pub const DEFAULT_NODES: usize = 2000;
/// Relative accuracy demanded of `Σ w_j h(t_j)` against `∫h` on construction.
pub const RULE_TOLERANCE: f64 = 1e-6;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[order - 1 - i] = x;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Nodes `t_j` with positive weights `w_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidRule("empty rule".into()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::InvalidRule("one weight per node required".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) || nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidRule("weights must be positive and nodes finite".into()));
        }
        Ok(Self { nodes, weights })
    }

    /// `panels` equal panels on `[a, b]`, `order` Gauss points each.
    pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Result<Self> {
        Self::composite_on(&[a, b], &[panels], order)
    }

    /// Composite rule over consecutive sub-intervals `edges[i]..edges[i+1]`
    /// carrying `panels[i]` panels each.
    fn composite_on(edges: &[f64], panels: &[usize], order: usize) -> Result<Self> {
        if order == 0 || panels.contains(&0) {
            return Err(Error::InvalidRule("panel count and order must be positive".into()));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidRule("integration interval must have positive length".into()));
        }
        let (x, w) = gauss_legendre(order);
        let total: usize = panels.iter().sum::<usize>() * order;
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for (span, &count) in edges.windows(2).zip(panels) {
            let width = (span[1] - span[0]) / count as f64;
            for p in 0..count {
                let left = span[0] + width * p as f64;
                for (xi, wi) in x.iter().zip(&w) {
                    nodes.push(left + 0.5 * width * (xi + 1.0));
                    weights.push(0.5 * width * wi);
                }
            }
        }
        Self::new(nodes, weights)
    }

    /// About `nodes` points (rounded up to whole panels) on `[a, b]`.
    pub fn on_interval(a: f64, b: f64, nodes: usize) -> Result<Self> {
        let panels = nodes.div_ceil(DEFAULT_PANEL_ORDER).max(1);
        Self::composite(a, b, panels, DEFAULT_PANEL_ORDER)
    }

    /// About `nodes` points split over consecutive pieces `edges[i]..edges[i+1]`
    /// in proportion to their length, every piece getting at least one panel.
    pub fn on_pieces(edges: &[f64], nodes: usize) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidRule("need at least one piece".into()));
        }
        let pieces = edges.len() - 1;
        let budget = nodes.div_ceil(DEFAULT_PANEL_ORDER).max(pieces);
        let length = edges[pieces] - edges[0];
        // largest-remainder split of the panel budget
        let ideal: Vec<f64> = edges
            .windows(2)
            .map(|w| budget as f64 * (w[1] - w[0]) / length)
            .collect();
        let mut panels: Vec<usize> = ideal.iter().map(|x| (x.floor() as usize).max(1)).collect();
        let mut by_remainder: Vec<usize> = (0..pieces).collect();
        by_remainder.sort_by(|&i, &j| {
            (ideal[j] - ideal[j].floor())
                .total_cmp(&(ideal[i] - ideal[i].floor()))
                .then(i.cmp(&j))
        });
        let mut assigned: usize = panels.iter().sum();
        for &i in by_remainder.iter().cycle().take(2 * pieces) {
            if assigned >= budget {
                break;
            }
            panels[i] += 1;
            assigned += 1;
        }
        Self::composite_on(edges, &panels, DEFAULT_PANEL_ORDER)
    }

    /// Composite rule on the support of `h`, split at its breakpoints so
    /// every panel sees a smooth integrand; verifies `Σ w_j h(t_j) ≈ ∫h`.
    pub fn for_profile(h: &WeightProfile, nodes: usize) -> Result<Self> {
        let (a, b) = h.support();
        let mut edges = vec![a];
        edges.extend(h.breakpoints().into_iter().filter(|&x| a < x && x < b));
        edges.push(b);
        let rule = Self::on_pieces(&edges, nodes)?;
        let approx = rule.integrate(|t| h.density(t));
        if (approx - h.mass()).abs() > RULE_TOLERANCE * h.mass().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidRule(format!(
                "rule integrates h to {approx}, expected {} within relative {RULE_TOLERANCE}",
                h.mass()
            )));
        }
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}
