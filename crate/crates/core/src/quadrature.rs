//! Gauss-Legendre rules and composite panel grids.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    type Rule = (Vec<f64>, Vec<f64>);
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = compute_rule(n);
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn compute_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre grid on `(lower, lower + length]` made of equal
/// panels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lower: f64,
    length: f64,
    panels: usize,
    nodes_per_panel: usize,
}

impl QuadratureGrid {
    /// Single-panel Gauss-Legendre rule with `n` nodes.
    pub fn gauss_legendre(lower: f64, length: f64, n: usize) -> Result<Self> {
        Self::composite(lower, length, 1, n)
    }

    pub fn composite(
        lower: f64,
        length: f64,
        panels: usize,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        if !(length > 0.0) || !lower.is_finite() || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "quadrature interval ({lower}, {lower} + {length}]"
            )));
        }
        if panels == 0 || nodes_per_panel == 0 {
            return Err(Error::InvalidParameter(
                "quadrature grid needs at least one panel and one node".into(),
            ));
        }
        let (ref_nodes, ref_weights) = gauss_legendre_rule(nodes_per_panel);
        let h = length / panels as f64;
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let a = lower + p as f64 * h;
            for (x, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(a + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            lower,
            length,
            panels,
            nodes_per_panel,
        })
    }

    /// Same interval and panels with twice the nodes per panel.
    pub fn doubled(&self) -> Self {
        Self::composite(
            self.lower,
            self.length,
            self.panels,
            2 * self.nodes_per_panel,
        )
        .expect("doubling a valid grid")
    }

    /// Same panel layout shifted to a new lower endpoint.
    pub fn shifted_to(&self, lower: f64) -> Self {
        let shift = lower - self.lower;
        Self {
            nodes: self.nodes.iter().map(|x| x + shift).collect(),
            weights: self.weights.clone(),
            lower,
            length: self.length,
            panels: self.panels,
            nodes_per_panel: self.nodes_per_panel,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn upper(&self) -> f64 {
        self.lower + self.length
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
