//! Singular integration over a tetrahedron with a `1/R^alpha` singularity at
//! vertex 0, in spherical coordinates centred on that vertex, and an adaptive
//! wrapper that splits face 123 until the estimate settles.

use std::sync::Arc;

use nalgebra::{DVector, Vector3};

use crate::error::{Error, Result};
use crate::quad1d::{cached_jacobi, cached_legendre, QuadratureRule1D, RuleKind};
use crate::tetgeom::{
    closest_point_on_triangle, split_tetrahedron, theta_extent, to_reference_orientation,
    ReferenceTet, Tetrahedron, Vec3,
};

const INTEGER_TOL: f64 = 1e-14;
const SUB_VOLUME_RATIO: f64 = 1e-13;

/// Default recursion limit for [`integrate_adaptive`].
pub const DEFAULT_MAX_DEPTH: usize = 12;

/// Exponent `alpha` of `1/R^alpha`, written as `n + gamma = 2 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularitySpec {
    pub alpha: f64,
    pub n: i32,
    pub gamma: f64,
}

impl SingularitySpec {
    /// Integer `alpha` gives `gamma = 0`. Otherwise `n` is the largest
    /// non-negative integer below `2 - alpha`, so `gamma` lies in `(-1, 1)`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha >= 3.0 {
            return Err(Error::Alpha(alpha));
        }
        let m = 2.0 - alpha;
        if (alpha - alpha.round()).abs() <= INTEGER_TOL {
            return Ok(Self {
                alpha,
                n: m.round() as i32,
                gamma: 0.0,
            });
        }
        let n = (m.ceil() - 1.0).max(0.0);
        Ok(Self {
            alpha,
            n: n as i32,
            gamma: m - n,
        })
    }
}

/// Values that can be accumulated by the integrators.
pub trait IntegrandValue: Clone + Send + Sync {
    fn zeros_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, s: f64);
    fn max_norm(&self) -> f64;
    fn all_finite(&self) -> bool;
    fn components(&self) -> Vec<f64>;

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl IntegrandValue for f64 {
    fn zeros_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        *self += s * other;
    }
    fn max_norm(&self) -> f64 {
        self.abs()
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn components(&self) -> Vec<f64> {
        vec![*self]
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl IntegrandValue for Vector3<f64> {
    fn zeros_like(&self) -> Self {
        Vector3::zeros()
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        *self += other * s;
    }
    fn max_norm(&self) -> f64 {
        self.amax()
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
    fn components(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
}

impl IntegrandValue for DVector<f64> {
    fn zeros_like(&self) -> Self {
        DVector::zeros(self.len())
    }
    fn add_scaled(&mut self, other: &Self, s: f64) {
        self.axpy(s, other, 1.0);
    }
    fn max_norm(&self) -> f64 {
        self.amax()
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
    fn components(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
}

/// Smooth numerator `f` together with the singularity exponent.
#[derive(Clone)]
pub struct SingularIntegrand<F> {
    pub f: F,
    pub spec: SingularitySpec,
}

impl<F> SingularIntegrand<F> {
    pub fn new(f: F, spec: SingularitySpec) -> Self {
        Self { f, spec }
    }
}

/// Rule lengths in the three spherical directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureBudget {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_rho: usize,
}

impl QuadratureBudget {
    pub fn uniform(n: usize) -> Self {
        Self {
            n_theta: n,
            n_phi: n,
            n_rho: n,
        }
    }

    /// Integrand evaluations per pass over one tetrahedron.
    pub fn per_pass(&self) -> usize {
        self.n_theta * self.n_phi * self.n_rho
    }
}

/// Legendre rules in `theta` and `phi`, Jacobi (or Legendre) rule in `rho`.
#[derive(Debug, Clone)]
pub struct SingularRules {
    pub theta: Arc<QuadratureRule1D>,
    pub phi: Arc<QuadratureRule1D>,
    pub rho: Arc<QuadratureRule1D>,
}

impl SingularRules {
    pub fn new(budget: QuadratureBudget, spec: &SingularitySpec) -> Result<Self> {
        let rho = if spec.gamma == 0.0 {
            cached_legendre(budget.n_rho)?
        } else {
            cached_jacobi(budget.n_rho, spec.gamma)?
        };
        Ok(Self {
            theta: cached_legendre(budget.n_theta)?,
            phi: cached_legendre(budget.n_phi)?,
            rho,
        })
    }

    pub fn uniform(n: usize, spec: &SingularitySpec) -> Result<Self> {
        Self::new(QuadratureBudget::uniform(n), spec)
    }

    pub fn budget(&self) -> QuadratureBudget {
        QuadratureBudget {
            n_theta: self.theta.len(),
            n_phi: self.phi.len(),
            n_rho: self.rho.len(),
        }
    }

    fn check(&self, spec: &SingularitySpec) -> Result<()> {
        if self.theta.kind != RuleKind::Legendre || self.phi.kind != RuleKind::Legendre {
            return Err(Error::RuleMismatch(
                "theta and phi rules must be Gauss-Legendre".into(),
            ));
        }
        let rho_gamma = match self.rho.kind {
            RuleKind::Legendre => 0.0,
            RuleKind::Jacobi => self.rho.gamma,
        };
        if rho_gamma.to_bits() != spec.gamma.to_bits() && !(rho_gamma == 0.0 && spec.gamma == 0.0) {
            return Err(Error::RuleMismatch(format!(
                "radial rule exponent {} does not match gamma = {}",
                rho_gamma, spec.gamma
            )));
        }
        Ok(())
    }
}

/// Value of an integration and the number of integrand calls it took.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularResult<V> {
    pub value: V,
    pub evaluations: usize,
}

/// Pieces of `tet` that each admit the spherical sweep from vertex 0.
///
/// The sweep needs edge 01 to make acute angles with edges 02 and 03. A
/// cyclic relabelling of nodes 1..3 is tried first; failing that, the element
/// is cut into three pieces sharing the point of face 123 closest to vertex 0.
fn plan_pieces(tet: &Tetrahedron) -> Result<Vec<(ReferenceTet, f64)>> {
    tet.check_nondegenerate()?;
    for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let t = tet.relabel(a, b, c);
        let r = to_reference_orientation(&t)?;
        match theta_extent(&r) {
            Ok(th) => return Ok(vec![(r, th)]),
            Err(Error::AzimuthFold { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let [x0, x1, x2, x3] = tet.nodes;
    let q = closest_point_on_triangle(&x0, &x1, &x2, &x3);
    let floor = SUB_VOLUME_RATIO * tet.volume();
    let mut pieces = Vec::with_capacity(3);
    for (a, b) in [(x2, x3), (x3, x1), (x1, x2)] {
        let sub = Tetrahedron::new(x0, q, a, b);
        if sub.volume() <= floor || sub.check_nondegenerate().is_err() {
            continue;
        }
        let r = to_reference_orientation(&sub)?;
        let th = theta_extent(&r)?;
        pieces.push((r, th));
    }
    Ok(pieces)
}

fn integrate_piece<V, F>(
    r: &ReferenceTet,
    theta23: f64,
    g: &SingularIntegrand<F>,
    rules: &SingularRules,
    acc: &mut Option<V>,
) -> Result<usize>
where
    V: IntegrandValue,
    F: Fn(&Vec3) -> V,
{
    let n = g.spec.n;
    let gp1 = g.spec.gamma + 1.0;
    let d_theta = 0.5 * theta23;
    let mut count = 0;
    for (ti, wi) in rules.theta.iter() {
        let theta = d_theta * (1.0 + ti);
        let lim = crate::tetgeom::phi_limits(r, theta)?;
        let phi_bar = 0.5 * (lim.phi_a + lim.phi_b);
        let d_phi = 0.5 * (lim.phi_b - lim.phi_a);
        for (tj, wj) in rules.phi.iter() {
            let phi = phi_bar + d_phi * tj;
            let rho_ij = crate::tetgeom::rho_limit(&lim, phi)?;
            let dir = r.direction(theta, phi);
            let scale = phi.sin() * d_theta * d_phi * (0.5 * rho_ij).powf(gp1) * wi * wj;
            for (tk, wk) in rules.rho.iter() {
                let rho = 0.5 * rho_ij * (1.0 + tk);
                let x = r.origin + dir * rho;
                let v = (g.f)(&x);
                count += 1;
                if !v.all_finite() {
                    return Err(Error::NonFiniteIntegrand {
                        x: x.x,
                        y: x.y,
                        z: x.z,
                    });
                }
                let s = rho.powi(n) * scale * wk;
                match acc {
                    Some(a) => a.add_scaled(&v, s),
                    None => {
                        let mut a = v.zeros_like();
                        a.add_scaled(&v, s);
                        *acc = Some(a);
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Tensor-product estimate of `int f(x) / |x - x0|^alpha dV` over `tet`.
pub fn integrate_singular<V, F>(
    tet: &Tetrahedron,
    g: &SingularIntegrand<F>,
    rules: &SingularRules,
) -> Result<SingularResult<V>>
where
    V: IntegrandValue,
    F: Fn(&Vec3) -> V,
{
    rules.check(&g.spec)?;
    let pieces = plan_pieces(tet)?;
    let mut acc: Option<V> = None;
    let mut evaluations = 0;
    for (r, th) in &pieces {
        evaluations += integrate_piece(r, *th, g, rules, &mut acc)?;
    }
    let value = match acc {
        Some(v) => v,
        None => (g.f)(&tet.nodes[1]).zeros_like(),
    };
    Ok(SingularResult { value, evaluations })
}

/// Outcome of a converged adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveResult<V> {
    pub value: V,
    pub evaluations: usize,
    /// Sum of the split-test discrepancies of all accepted nodes.
    pub discrepancy: f64,
    /// Number of nodes whose split test failed and were refined.
    pub splits: usize,
    pub depth: usize,
}

/// Adaptive integration: a node is accepted when its own estimate and the sum
/// over its four children differ by at most the local tolerance (max norm over
/// components); otherwise each child is tested with a quarter of it.
pub fn integrate_adaptive<V, F>(
    tet: &Tetrahedron,
    g: &SingularIntegrand<F>,
    rules: &SingularRules,
    tol: f64,
    max_depth: usize,
) -> Result<AdaptiveResult<V>>
where
    V: IntegrandValue,
    F: Fn(&Vec3) -> V,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if max_depth == 0 {
        return Err(Error::InvalidArgument(
            "max depth must be at least 1".into(),
        ));
    }
    let root = integrate_singular(tet, g, rules)?;
    let mut evaluations = root.evaluations;
    let mut stack = vec![(*tet, root.value, 1usize, tol)];
    let mut total: Option<V> = None;
    let mut discrepancy = 0.0;
    let mut worst = 0.0f64;
    let mut splits = 0;
    let mut deepest = 1;

    while let Some((t, i0, depth, local_tol)) = stack.pop() {
        deepest = deepest.max(depth);
        let kids = split_tetrahedron(&t);
        let mut parts = Vec::with_capacity(4);
        for k in &kids {
            let r = integrate_singular(k, g, rules)?;
            evaluations += r.evaluations;
            parts.push(r.value);
        }
        let mut sum = parts[0].zeros_like();
        for p in &parts {
            sum.add_scaled(p, 1.0);
        }
        let diff = i0.max_abs_diff(&sum);
        if diff <= local_tol {
            discrepancy += diff;
        } else if depth < max_depth {
            splits += 1;
            for (k, p) in kids.into_iter().zip(parts).rev() {
                stack.push((k, p, depth + 1, 0.25 * local_tol));
            }
            continue;
        } else {
            worst = worst.max(diff);
        }
        match &mut total {
            Some(a) => a.add_scaled(&sum, 1.0),
            None => total = Some(sum),
        }
    }

    let value = total.expect("at least the root node is accumulated");
    if worst > 0.0 {
        return Err(Error::Unconverged {
            partial: value.components(),
            worst_discrepancy: worst,
            max_depth,
            evaluations,
        });
    }
    Ok(AdaptiveResult {
        value,
        evaluations,
        discrepancy,
        splits,
        depth: deepest,
    })
}

/// Exponent triples `(i, j, k)` with `i + j + k <= n_max`, by total degree.
pub fn monomial_exponents(n_max: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for deg in 0..=n_max {
        for i in (0..=deg).rev() {
            for j in (0..=deg - i).rev() {
                out.push([i, j, deg - i - j]);
            }
        }
    }
    out
}

pub fn monomial(x: &Vec3, e: [u32; 3]) -> f64 {
    x.x.powi(e[0] as i32) * x.y.powi(e[1] as i32) * x.z.powi(e[2] as i32)
}

/// All monomials of [`monomial_exponents`] evaluated at `x`.
pub fn monomial_vector(x: &Vec3, exps: &[[u32; 3]]) -> DVector<f64> {
    DVector::from_iterator(exps.len(), exps.iter().map(|e| monomial(x, *e)))
}

/// `int x^i y^j z^k / R^alpha dV` in global coordinates.
pub fn integrate_monomial(
    tet: &Tetrahedron,
    i: u32,
    j: u32,
    k: u32,
    spec: SingularitySpec,
    rules: &SingularRules,
) -> Result<SingularResult<f64>> {
    if i + j + k > 8 {
        return Err(Error::InvalidArgument(format!(
            "monomial degree {} exceeds 8",
            i + j + k
        )));
    }
    let g = SingularIntegrand::new(move |x: &Vec3| monomial(x, [i, j, k]), spec);
    integrate_singular(tet, &g, rules)
}
