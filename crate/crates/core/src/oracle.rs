//! Reference values that do not go through the spherical integrator: a
//! Duffy-type cube map, the error-model fit, and the monomial error table.

use nalgebra::{DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::quad1d::cached_legendre;
use crate::singquad::{
    integrate_singular, monomial_exponents, monomial_vector, IntegrandValue, SingularIntegrand,
    SingularRules, SingularitySpec,
};
use crate::tetgeom::{Tetrahedron, Vec3};

/// Largest denominator tried when reading `alpha` as a fraction.
pub const MAX_DENOMINATOR: i64 = 64;
const RATIONAL_TOL: f64 = 1e-12;
const FACE_MAX_LEVEL: usize = 12;
/// Errors at or below this level are treated as round-off and not fitted.
pub const FIT_FLOOR: f64 = 1e-13;
/// Order of the Duffy reference used by [`monomial_suite`].
pub const REFERENCE_ORDER: usize = 32;
/// Spherical rule length used as the reference when `alpha` is irrational.
pub const SELF_REFERENCE_LENGTH: usize = 20;

/// `alpha = p / q` with the smallest such `q`, if one exists.
pub fn rational_alpha(alpha: f64) -> Option<(i64, i64)> {
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (alpha * q as f64).round();
        ((alpha * q as f64 - p).abs() <= RATIONAL_TOL * q as f64).then_some((p as i64, q))
    })
}

fn segment_distance(x: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let e = b - a;
    let t = ((x - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
    (x - (a + e * t)).norm()
}

fn triangle_distance(x: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let e1 = b - a;
    let e2 = c - a;
    let n = e1.cross(&e2);
    let n2 = n.norm_squared();
    let w = x - a;
    // barycentric coordinates of the projection
    let u = w.cross(&e2).dot(&n) / n2;
    let v = e1.cross(&w).dot(&n) / n2;
    if u >= 0.0 && v >= 0.0 && u + v <= 1.0 {
        return w.dot(&n).abs() / n2.sqrt();
    }
    segment_distance(x, a, b)
        .min(segment_distance(x, b, c))
        .min(segment_distance(x, c, a))
}

fn diameter(t: &[Vec3; 3]) -> f64 {
    (t[0] - t[1])
        .norm()
        .max((t[1] - t[2]).norm())
        .max((t[2] - t[0]).norm())
}

/// Face triangles refined towards the point nearest the singular vertex
/// until each is no wider than its distance from it.
fn graded_face(x0: &Vec3, face: [Vec3; 3]) -> Vec<[Vec3; 3]> {
    let mut out = Vec::new();
    let mut stack = vec![(face, 0usize)];
    while let Some((t, level)) = stack.pop() {
        let d = triangle_distance(x0, &t[0], &t[1], &t[2]);
        if diameter(&t) <= d || level == FACE_MAX_LEVEL {
            out.push(t);
            continue;
        }
        let [a, b, c] = t;
        let ab = 0.5 * (a + b);
        let bc = 0.5 * (b + c);
        let ca = 0.5 * (c + a);
        for child in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
            stack.push((child, level + 1));
        }
    }
    out
}

/// Duffy-type reference for `int f(x) / |x - x0|^alpha dV`.
///
/// Each sub-tetrahedron `(x0, a, b, c)` over a graded triangulation of face
/// 123 is mapped to the unit cube by `x = x0 + s d(t, r)` with
/// `d = (a - x0) + t (b - a) + t r (c - b)`, whose Jacobian `6|V| s^2 t`
/// absorbs the singularity. For `alpha = p / q`, `s = sigma^q` leaves a
/// polynomial weight in `sigma`. Tensor Gauss-Legendre of length `order` is
/// applied in each cube direction.
pub fn duffy_reference<V, F>(tet: &Tetrahedron, g: &SingularIntegrand<F>, order: usize) -> Result<V>
where
    V: IntegrandValue,
    F: Fn(&Vec3) -> V,
{
    tet.check_nondegenerate()?;
    let alpha = g.spec.alpha;
    let (p, q) = rational_alpha(alpha).ok_or(Error::IrrationalAlpha(alpha))?;
    let sigma_power = (3 * q - p - 1) as i32;
    let rule = cached_legendre(order)?;
    let pts: Vec<(f64, f64)> = rule
        .iter()
        .map(|(t, w)| (0.5 * (1.0 + t), 0.5 * w))
        .collect();

    let [x0, x1, x2, x3] = tet.nodes;
    let mut acc: Option<V> = None;
    for [a, b, c] in graded_face(&x0, [x1, x2, x3]) {
        let vol6 = (a - x0).dot(&(b - x0).cross(&(c - x0))).abs();
        for &(t, wt) in &pts {
            for &(r, wr) in &pts {
                let d = (a - x0) + (b - a) * t + (c - b) * (t * r);
                let dn = d.norm();
                let base = q as f64 * t * vol6 / dn.powf(alpha) * wt * wr;
                for &(sig, ws) in &pts {
                    let s = sig.powi(q as i32);
                    let x = x0 + d * s;
                    let v = (g.f)(&x);
                    if !v.all_finite() {
                        return Err(Error::NonFiniteIntegrand {
                            x: x.x,
                            y: x.y,
                            z: x.z,
                        });
                    }
                    let wgt = base * sig.powi(sigma_power) * ws;
                    match &mut acc {
                        Some(a) => a.add_scaled(&v, wgt),
                        None => {
                            let mut z = v.zeros_like();
                            z.add_scaled(&v, wgt);
                            acc = Some(z);
                        }
                    }
                }
            }
        }
    }
    Ok(acc.expect("face triangulation is never empty"))
}

/// Least-squares fit of `ln eps = ln A - a n ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceFit {
    pub a_coef: f64,
    pub rate: f64,
    /// Rule lengths that entered the fit.
    pub lengths: Vec<usize>,
    /// Deviation of each fitted point from the model, in decades.
    pub residuals: Vec<f64>,
}

impl ConvergenceFit {
    pub fn model(&self, n: usize) -> f64 {
        let n = n as f64;
        self.a_coef * n.powf(-self.rate * n)
    }
}

pub fn fit_convergence(points: &[(usize, f64)]) -> Result<ConvergenceFit> {
    let used: Vec<(usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, e)| n >= 1 && e.is_finite() && e > FIT_FLOOR)
        .collect();
    if used.len() < 3 {
        return Err(Error::FitPoints(used.len()));
    }
    let mut m = Matrix2::zeros();
    let mut rhs = Vector2::zeros();
    for &(n, e) in &used {
        let n = n as f64;
        let row = Vector2::new(1.0, -n * n.ln());
        m += row * row.transpose();
        rhs += row * e.ln();
    }
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidArgument("rule lengths do not determine a fit".into()))?;
    let (ln_a, rate) = (sol[0], sol[1]);
    let residuals = used
        .iter()
        .map(|&(n, e)| {
            let n = n as f64;
            (e.ln() - (ln_a - rate * n * n.ln())) / std::f64::consts::LN_10
        })
        .collect();
    Ok(ConvergenceFit {
        a_coef: ln_a.exp(),
        rate,
        lengths: used.iter().map(|p| p.0).collect(),
        residuals,
    })
}

/// One row of the monomial error table.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub order: usize,
    pub evaluations: usize,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSuite {
    pub exponents: Vec<[u32; 3]>,
    /// Reference values, in the order of `exponents`.
    pub reference: Vec<f64>,
    pub rows: Vec<SuiteRow>,
}

/// Reference integrals of every monomial with `i + j + k <= n_max`: Duffy at
/// [`REFERENCE_ORDER`] for rational `alpha`, otherwise the spherical method at
/// length [`SELF_REFERENCE_LENGTH`].
pub fn monomial_reference(tet: &Tetrahedron, n_max: u32, alpha: f64) -> Result<Vec<f64>> {
    let spec = SingularitySpec::new(alpha)?;
    let exps = monomial_exponents(n_max);
    let g = SingularIntegrand::new(|x: &Vec3| monomial_vector(x, &exps), spec);
    let v: DVector<f64> = if rational_alpha(alpha).is_some() {
        duffy_reference(tet, &g, REFERENCE_ORDER)?
    } else {
        let rules = SingularRules::uniform(SELF_REFERENCE_LENGTH, &spec)?;
        integrate_singular(tet, &g, &rules)?.value
    };
    Ok(v.as_slice().to_vec())
}

/// `max |I - J| / |J_000|` over all monomials with `i + j + k <= n_max`.
pub fn relative_error(values: &[f64], reference: &[f64]) -> f64 {
    let scale = reference[0].abs();
    values
        .iter()
        .zip(reference)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}

/// Relative error of the spherical method at each rule length in `orders`.
pub fn monomial_suite(
    tet: &Tetrahedron,
    n_max: u32,
    alpha: f64,
    orders: &[usize],
) -> Result<MonomialSuite> {
    let spec = SingularitySpec::new(alpha)?;
    let exponents = monomial_exponents(n_max);
    let reference = monomial_reference(tet, n_max, alpha)?;
    let g = SingularIntegrand::new(|x: &Vec3| monomial_vector(x, &exponents), spec);
    let mut rows = Vec::with_capacity(orders.len());
    for &order in orders {
        let rules = SingularRules::uniform(order, &spec)?;
        let r = integrate_singular(tet, &g, &rules)?;
        rows.push(SuiteRow {
            order,
            evaluations: r.evaluations,
            rel_error: relative_error(r.value.as_slice(), &reference),
        });
    }
    Ok(MonomialSuite {
        exponents,
        reference,
        rows,
    })
}

/// Benchmark tetrahedron families, one free parameter each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryCase {
    /// Singular vertex `(0, 0, h)` over the base `(0,0,0), (0,1,0), (1,1,0)`.
    Height,
    /// `x3 = (sin t, 1 - cos t, 0)`, `t` in radians, singular vertex at height 0.1.
    Angle,
    /// `x3 = (a, 1, 0)`, singular vertex at height 0.1.
    Aspect,
    /// Base `(0,0,0), (0,1,0), (2,1,0)` under `(0, 0, h)`.
    Adaptive,
}

impl GeometryCase {
    pub fn tet(self, p: f64) -> Tetrahedron {
        let base =
            |x0: Vec3, x3: Vec3| Tetrahedron::new(x0, Vec3::zeros(), Vec3::new(0.0, 1.0, 0.0), x3);
        let low = Vec3::new(0.0, 0.0, 0.1);
        match self {
            Self::Height => base(Vec3::new(0.0, 0.0, p), Vec3::new(1.0, 1.0, 0.0)),
            Self::Angle => base(low, Vec3::new(p.sin(), 1.0 - p.cos(), 0.0)),
            Self::Aspect => base(low, Vec3::new(p, 1.0, 0.0)),
            Self::Adaptive => base(Vec3::new(0.0, 0.0, p), Vec3::new(2.0, 1.0, 0.0)),
        }
    }
}
