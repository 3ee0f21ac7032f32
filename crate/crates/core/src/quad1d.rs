//! One-dimensional Gauss-Legendre and Gauss-Jacobi rules on [-1, 1].
//!
//! Jacobi rules use the weight `(1 + t)^gamma (1 - t)^0`, which absorbs a
//! fractional power of the radial coordinate. Nodes come from the symmetric
//! tridiagonal Jacobi matrix (Golub-Welsch) and are then polished by Newton
//! iteration on the three-term recurrence; weights use the closed form
//! `2^(gamma+1) / ((1 - t^2) P_n'(t)^2)`, which holds for this weight family.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Longest rule that can be generated.
pub const MAX_RULE_LENGTH: usize = 64;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    Legendre,
    Jacobi,
}

/// Nodes and weights of an n-point Gauss rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    pub kind: RuleKind,
    /// Exponent of `(1 + t)` in the weight function; zero for Legendre.
    pub gamma: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Applies the rule to `g`, i.e. approximates `∫ g(t) w(t) dt` over [-1, 1].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.iter().map(|(t, w)| w * g(t)).sum()
    }
}

/// Jacobi polynomial `P_n^{(0, b)}` and its derivative at `x`.
fn jacobi_eval(n: usize, b: f64, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p = 1.0 + (b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + b;
        let c0 = 2.0 * k * (k + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x - b * b);
        let c2 = 2.0 * (k - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * p - c2 * p_prev) / c0;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let s = 2.0 * nf + b;
    let dp = (nf * (-b - s * x) * p + 2.0 * nf * (nf + b) * p_prev) / (s * (1.0 - x * x));
    (p, dp)
}

/// Eigenvalues of the Jacobi matrix for weight `(1 + t)^b`, ascending.
fn golub_welsch_nodes(n: usize, b: f64) -> Vec<f64> {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + b;
        m[(k, k)] = if k == 0 {
            b / (b + 2.0)
        } else {
            b * b / (s * (s + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + b;
            let off = (4.0 * j * j * (j + b) * (j + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            m[(k, k + 1)] = off;
            m[(k + 1, k)] = off;
        }
    }
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

fn generate(n: usize, gamma: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > MAX_RULE_LENGTH {
        return Err(Error::RuleLength(n));
    }
    if !gamma.is_finite() || gamma <= -1.0 {
        return Err(Error::JacobiExponent(gamma));
    }
    let scale = 2f64.powf(gamma + 1.0);
    let mut nodes = golub_welsch_nodes(n, gamma);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = jacobi_eval(n, gamma, *x);
            let dx = p / dp;
            *x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged || !x.is_finite() || x.abs() >= 1.0 {
            return Err(Error::RuleConvergence { n, gamma });
        }
        let (_, dp) = jacobi_eval(n, gamma, *x);
        weights.push(scale / ((1.0 - *x * *x) * dp * dp));
    }
    Ok((nodes, weights))
}

/// n-point Gauss-Legendre rule, exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule1D> {
    let (mut nodes, mut weights) = generate(n, 0.0)?;
    // mirror the two halves so the rule is exactly symmetric
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule1D {
        kind: RuleKind::Legendre,
        gamma: 0.0,
        nodes,
        weights,
    })
}

/// n-point Gauss-Jacobi rule for the weight `(1 + t)^gamma`.
pub fn gauss_jacobi(n: usize, gamma: f64) -> Result<QuadratureRule1D> {
    let (nodes, weights) = generate(n, gamma)?;
    Ok(QuadratureRule1D {
        kind: RuleKind::Jacobi,
        gamma,
        nodes,
        weights,
    })
}

/// Maps rule nodes to `[lo, hi]`.
///
/// Legendre weights are scaled by `(hi - lo) / 2`; Jacobi weights are returned
/// unscaled because the caller owns the `(len / 2)^(gamma + 1)` factor.
pub fn affine_map(rule: &QuadratureRule1D, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Interval { lo, hi });
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let nodes = rule.nodes.iter().map(|t| mid + half * t).collect();
    let weights = match rule.kind {
        RuleKind::Legendre => rule.weights.iter().map(|w| w * half).collect(),
        RuleKind::Jacobi => rule.weights.clone(),
    };
    Ok((nodes, weights))
}

type CacheKey = (u8, usize, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<QuadratureRule1D>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<QuadratureRule1D>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached Gauss-Legendre rule.
pub fn cached_legendre(n: usize) -> Result<Arc<QuadratureRule1D>> {
    cached((0, n, 0), || gauss_legendre(n))
}

/// Cached Gauss-Jacobi rule; `gamma` is keyed bitwise.
pub fn cached_jacobi(n: usize, gamma: f64) -> Result<Arc<QuadratureRule1D>> {
    cached((1, n, gamma.to_bits()), || gauss_jacobi(n, gamma))
}

fn cached<F>(key: CacheKey, build: F) -> Result<Arc<QuadratureRule1D>>
where
    F: FnOnce() -> Result<QuadratureRule1D>,
{
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    // built outside the lock; a racing insert of an identical rule is harmless
    let rule = Arc::new(build()?);
    let mut guard = cache().lock().unwrap();
    Ok(Arc::clone(guard.entry(key).or_insert(rule)))
}
