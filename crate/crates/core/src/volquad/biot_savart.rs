//! Velocity induced by a vorticity field on a tetrahedral mesh,
//! `u(x) = -1/(4 pi) int (x - y) x omega(y) / |x - y|^3 dV`.
//!
//! Elements that have the target as a vertex are the near field; every other
//! element is integrated with a fixed simplex rule.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::singquad::{
    integrate_adaptive, integrate_singular, QuadratureBudget, SingularIntegrand, SingularRules,
    SingularitySpec,
};
use crate::tetgeom::{Tetrahedron, Vec3};

use super::mesh::TetMesh;
use super::ring::RingSpec;
use super::simplex_rule::FixedTetRule;

const CHUNK: usize = 512;
const INSIDE_TOL: f64 = 1e-12;

/// Where the integrand takes its vorticity from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VorticityMode {
    /// Linear interpolation of the nodal samples.
    Interpolated,
    /// Exact ring vorticity at every quadrature point.
    Analytic(RingSpec),
}

/// Treatment of elements that have the target as a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NearField {
    /// Same fixed rule as the far field.
    FixedRule,
    /// Spherical singular rule with the given lengths.
    Singular(QuadratureBudget),
    /// Adaptive singular rule.
    Adaptive {
        budget: QuadratureBudget,
        tol: f64,
        max_depth: usize,
    },
}

#[derive(Debug, Clone)]
pub struct BiotSavartOptions {
    pub fixed: FixedTetRule,
    pub near: NearField,
    pub vorticity: VorticityMode,
}

fn key(x: &Vec3) -> [u64; 3] {
    // +0.0 and -0.0 compare equal as coordinates
    [x.x + 0.0, x.y + 0.0, x.z + 0.0].map(f64::to_bits)
}

/// Mesh node index of each target, if it is one.
fn target_nodes(mesh: &TetMesh, targets: &[Vec3]) -> Vec<Option<usize>> {
    let index: HashMap<[u64; 3], usize> = mesh
        .nodes
        .iter()
        .enumerate()
        .map(|(i, x)| (key(x), i))
        .collect();
    targets
        .iter()
        .map(|t| index.get(&key(t)).copied())
        .collect()
}

struct Element {
    x: [Vec3; 4],
    w: [Vec3; 4],
    ids: [usize; 4],
    scale: f64,
    lo: Vec3,
    hi: Vec3,
}

impl Element {
    fn new(mesh: &TetMesh, e: usize) -> Self {
        let ids = mesh.tets[e];
        let x = ids.map(|i| mesh.nodes[i]);
        let w = ids.map(|i| mesh.vorticity[i]);
        let t = Tetrahedron { nodes: x };
        let mut lo = x[0];
        let mut hi = x[0];
        for p in &x[1..] {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        Self {
            x,
            w,
            ids,
            scale: 6.0 * t.volume(),
            lo,
            hi,
        }
    }

    fn may_contain(&self, p: &Vec3) -> bool {
        let pad = INSIDE_TOL * (self.hi - self.lo).amax();
        (0..3).all(|k| p[k] >= self.lo[k] - pad && p[k] <= self.hi[k] + pad)
    }
}

fn barycentric_map(x: &[Vec3; 4]) -> Matrix3<f64> {
    Matrix3::from_columns(&[x[1] - x[0], x[2] - x[0], x[3] - x[0]])
        .try_inverse()
        .unwrap_or_else(Matrix3::zeros)
}

fn inside_closure(el: &Element, p: &Vec3) -> bool {
    if !el.may_contain(p) {
        return false;
    }
    let l = barycentric_map(&el.x) * (p - el.x[0]);
    let l0 = 1.0 - l.sum();
    l0 >= -INSIDE_TOL && l.iter().all(|v| *v >= -INSIDE_TOL)
}

/// `(x - y) x omega / |x - y|^3`.
#[inline]
fn kernel(x: &Vec3, y: &Vec3, w: &Vec3) -> Vec3 {
    let d = x - y;
    let r2 = d.norm_squared();
    d.cross(w) / (r2 * r2.sqrt())
}

fn omega_at(el: &Element, lam: &[f64; 4], y: &Vec3, mode: &VorticityMode) -> Vec3 {
    match mode {
        VorticityMode::Interpolated => {
            el.w[0] * lam[0] + el.w[1] * lam[1] + el.w[2] * lam[2] + el.w[3] * lam[3]
        }
        VorticityMode::Analytic(ring) => ring.vorticity(y),
    }
}

/// Fixed-rule contribution of all elements that do not have the target as a
/// vertex. Fails if a target lies in the closure of such an element.
pub fn far_field(
    mesh: &TetMesh,
    targets: &[Vec3],
    rule: &FixedTetRule,
    mode: VorticityMode,
) -> Result<Vec<Vec3>> {
    let nodes = target_nodes(mesh, targets);
    let n_el = mesh.tets.len();
    let chunks: Vec<Result<Vec<Vec3>>> = (0..n_el.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Vec3::zeros(); targets.len()];
            let mut pts = Vec::with_capacity(rule.len());
            for e in c * CHUNK..((c + 1) * CHUNK).min(n_el) {
                let el = Element::new(mesh, e);
                pts.clear();
                for (lam, w) in rule.points.iter().zip(&rule.weights) {
                    let y =
                        el.x[0] * lam[0] + el.x[1] * lam[1] + el.x[2] * lam[2] + el.x[3] * lam[3];
                    pts.push((y, omega_at(&el, lam, &y, &mode) * (w * el.scale)));
                }
                for (t, x) in targets.iter().enumerate() {
                    match nodes[t] {
                        Some(n) if el.ids.contains(&n) => continue,
                        Some(_) => {}
                        None => {
                            if inside_closure(&el, x) {
                                return Err(Error::TargetInsideElement {
                                    x: x.x,
                                    y: x.y,
                                    z: x.z,
                                    element: e,
                                });
                            }
                        }
                    }
                    let mut s = Vec3::zeros();
                    for (y, ww) in &pts {
                        s += kernel(x, y, ww);
                    }
                    acc[t] += s;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![Vec3::zeros(); targets.len()];
    for c in chunks {
        for (t, v) in total.iter_mut().zip(c?) {
            *t += v;
        }
    }
    Ok(total.into_iter().map(|v| v * (-0.25 / PI)).collect())
}

fn near_element(
    mesh: &TetMesh,
    e: usize,
    node: usize,
    near: &NearField,
    rule: &FixedTetRule,
    mode: &VorticityMode,
) -> Result<Vec3> {
    let el = Element::new(mesh, e);
    let x = mesh.nodes[node];
    if let NearField::FixedRule = near {
        let mut s = Vec3::zeros();
        for (lam, w) in rule.points.iter().zip(&rule.weights) {
            let y = el.x[0] * lam[0] + el.x[1] * lam[1] + el.x[2] * lam[2] + el.x[3] * lam[3];
            s += kernel(&x, &y, &omega_at(&el, lam, &y, mode)) * (w * el.scale);
        }
        return Ok(s);
    }
    let inv = barycentric_map(&el.x);
    let omega = |y: &Vec3| -> Vec3 {
        match mode {
            VorticityMode::Interpolated => {
                let l = inv * (y - el.x[0]);
                let lam = [1.0 - l.sum(), l[0], l[1], l[2]];
                omega_at(&el, &lam, y, mode)
            }
            VorticityMode::Analytic(ring) => ring.vorticity(y),
        }
    };
    // (x - y) x omega / R^3 written as g / R^2 with bounded g
    let g = move |y: &Vec3| -> Vec3 {
        let d = x - y;
        d.cross(&omega(y)) / d.norm()
    };
    let spec = SingularitySpec::new(2.0)?;
    let k = el
        .ids
        .iter()
        .position(|&i| i == node)
        .expect("node is a vertex");
    let tet = Tetrahedron { nodes: el.x }.with_singular_vertex(k);
    let integrand = SingularIntegrand::new(g, spec);
    match *near {
        NearField::Singular(budget) => {
            let rules = SingularRules::new(budget, &spec)?;
            Ok(integrate_singular(&tet, &integrand, &rules)?.value)
        }
        NearField::Adaptive {
            budget,
            tol,
            max_depth,
        } => {
            let rules = SingularRules::new(budget, &spec)?;
            Ok(integrate_adaptive(&tet, &integrand, &rules, tol, max_depth)?.value)
        }
        NearField::FixedRule => unreachable!(),
    }
}

/// Contribution of the elements that have the target as a vertex; zero for
/// targets that are not mesh nodes.
pub fn near_field(
    mesh: &TetMesh,
    targets: &[Vec3],
    near: &NearField,
    rule: &FixedTetRule,
    mode: VorticityMode,
) -> Result<Vec<Vec3>> {
    let nodes = target_nodes(mesh, targets);
    let mut incident: HashMap<usize, Vec<usize>> =
        nodes.iter().flatten().map(|&n| (n, Vec::new())).collect();
    for (e, t) in mesh.tets.iter().enumerate() {
        for n in t {
            if let Some(list) = incident.get_mut(n) {
                list.push(e);
            }
        }
    }
    nodes
        .par_iter()
        .map(|node| {
            let Some(n) = *node else {
                return Ok(Vec3::zeros());
            };
            let mut s = Vec3::zeros();
            for &e in &incident[&n] {
                s += near_element(mesh, e, n, near, rule, &mode)?;
            }
            Ok(s * (-0.25 / PI))
        })
        .collect()
}

/// Velocity at each target.
pub fn biot_savart(
    mesh: &TetMesh,
    targets: &[Vec3],
    opts: &BiotSavartOptions,
) -> Result<Vec<Vec3>> {
    let far = far_field(mesh, targets, &opts.fixed, opts.vorticity)?;
    let near = near_field(mesh, targets, &opts.near, &opts.fixed, opts.vorticity)?;
    Ok(far.into_iter().zip(near).map(|(a, b)| a + b).collect())
}
