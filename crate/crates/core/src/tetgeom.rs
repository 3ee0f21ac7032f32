//! Tetrahedron geometry: the reference orientation used by the spherical
//! integrator, the angular and radial integration limits, and face splitting.
//!
//! In the reference orientation the singular vertex sits at the origin, node 1
//! lies on the positive x-axis and nodes 2 and 3 lie on the vertical
//! half-plane at azimuth `theta23`. Points are written in spherical form
//! `y = rho [sin(phi) cos(theta), sin(phi) sin(theta), cos(phi)]`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Volumes below this multiple of the cubed longest edge are rejected.
pub const DEGENERACY_RATIO: f64 = 1e-14;
const PROJECTION_EPS: f64 = 1e-12;
const THETA_MATCH_TOL: f64 = 1e-10;
const INTERSECTION_EPS: f64 = 1e-10;
const FOLD_EPS: f64 = 1e-12;

/// Four vertices; vertex 0 carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrahedron {
    pub nodes: [Vec3; 4],
}

impl Tetrahedron {
    pub fn new(x0: Vec3, x1: Vec3, x2: Vec3, x3: Vec3) -> Self {
        Self {
            nodes: [x0, x1, x2, x3],
        }
    }

    /// Builds a tetrahedron from 12 coordinates `x0 y0 z0 x1 ... z3`.
    pub fn from_coords(c: &[f64]) -> Result<Self> {
        if c.len() != 12 {
            return Err(Error::InvalidArgument(format!(
                "a tetrahedron needs 12 coordinates, got {}",
                c.len()
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let p = |i: usize| Vec3::new(c[3 * i], c[3 * i + 1], c[3 * i + 2]);
        Ok(Self::new(p(0), p(1), p(2), p(3)))
    }

    pub fn signed_volume(&self) -> f64 {
        let [x0, x1, x2, x3] = self.nodes;
        (x1 - x0).dot(&(x2 - x0).cross(&(x3 - x0))) / 6.0
    }

    pub fn volume(&self) -> f64 {
        self.signed_volume().abs()
    }

    pub fn longest_edge(&self) -> f64 {
        let mut l: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                l = l.max((self.nodes[i] - self.nodes[j]).norm());
            }
        }
        l
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        let threshold = DEGENERACY_RATIO * self.longest_edge().powi(3);
        let volume = self.volume();
        if !(volume >= threshold) || volume == 0.0 {
            return Err(Error::DegenerateTetrahedron { volume, threshold });
        }
        Ok(())
    }

    /// Same tetrahedron with vertex `k` moved to position 0.
    pub fn with_singular_vertex(&self, k: usize) -> Self {
        let mut nodes = self.nodes;
        nodes.swap(0, k);
        Self { nodes }
    }

    /// Node-0 preserving relabelling `(x0, x[a], x[b], x[c])`.
    pub fn relabel(&self, a: usize, b: usize, c: usize) -> Self {
        Self::new(self.nodes[0], self.nodes[a], self.nodes[b], self.nodes[c])
    }
}

/// Transformed geometry of a tetrahedron in the reference orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTet {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub theta23: f64,
    /// Rotation `A` with `x = x0 + y A` for row vectors `y`.
    pub rotation: Matrix3<f64>,
    pub origin: Vec3,
    pub y_nodes: [Vec3; 3],
    /// Whether labels 2 and 3 were exchanged to give positive orientation.
    pub swapped: bool,
}

impl ReferenceTet {
    /// Global position of reference point `y`.
    pub fn to_global(&self, y: &Vec3) -> Vec3 {
        self.origin + self.rotation.tr_mul(y)
    }

    /// Global unit vector for the reference direction `(theta, phi)`.
    pub fn direction(&self, theta: f64, phi: f64) -> Vec3 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        self.rotation.tr_mul(&Vec3::new(ct * sp, st * sp, cp))
    }
}

fn polar_angle(y: &Vec3) -> f64 {
    y.x.hypot(y.y).atan2(y.z)
}

/// Rotates and translates `tet` into the reference orientation.
pub fn to_reference_orientation(tet: &Tetrahedron) -> Result<ReferenceTet> {
    if (tet.nodes[1] - tet.nodes[0]).norm() == 0.0 {
        return Err(Error::CoincidentNodes);
    }
    tet.check_nondegenerate()?;
    // node 1 must sit on the negative side of the normal x3' x x2'
    build_reference(tet, tet.signed_volume() < 0.0)
}

fn build_reference(tet: &Tetrahedron, swap: bool) -> Result<ReferenceTet> {
    let x0 = tet.nodes[0];
    let (i2, i3) = if swap { (3, 2) } else { (2, 3) };
    let x1p = tet.nodes[1] - x0;
    let x2p = tet.nodes[i2] - x0;
    let x3p = tet.nodes[i3] - x0;
    let l1 = x1p.norm();

    let n_raw = x3p.cross(&x2p);
    let n_hat = n_raw / n_raw.norm();
    let d = x1p.dot(&n_hat);
    let p = x1p - d * n_hat;
    let p_norm = p.norm();
    let s_hat = if p_norm < PROJECTION_EPS * l1 {
        // edge 01 perpendicular to plane 023
        let q = x2p - x2p.dot(&n_hat) * n_hat;
        q / q.norm()
    } else {
        p / p_norm
    };
    let t_hat = n_hat.cross(&s_hat);

    // angle between edge 01 and plane 023
    let theta23 = d.abs().atan2(x1p.dot(&s_hat));

    let (sin23, cos23) = theta23.sin_cos();
    let n_hat_ref = Vec3::new(-sin23, cos23, 0.0);
    let s_hat_ref = Vec3::new(cos23, sin23, 0.0);
    let t_hat_ref = n_hat_ref.cross(&s_hat_ref);
    let p_ref = (l1 * cos23) * s_hat_ref;

    let place = |xp: &Vec3| -> Vec3 {
        let rel = xp - p;
        p_ref + s_hat.dot(&rel) * s_hat_ref + t_hat.dot(&rel) * t_hat_ref
    };
    let y1 = Vec3::new(l1, 0.0, 0.0);
    let y2 = place(&x2p);
    let y3 = place(&x3p);

    // x' = y A with A = E_ref E^T, frames (s, t, n) in each system
    let e = Matrix3::from_columns(&[s_hat, t_hat, n_hat]);
    let e_ref = Matrix3::from_columns(&[s_hat_ref, t_hat_ref, n_hat_ref]);
    let rotation = e_ref * e.transpose();

    Ok(ReferenceTet {
        rho1: l1,
        rho2: x2p.norm(),
        rho3: x3p.norm(),
        phi2: polar_angle(&y2),
        phi3: polar_angle(&y3),
        theta23,
        rotation,
        origin: x0,
        y_nodes: [y1, y2, y3],
        swapped: swap,
    })
}

/// Checks that nodes 2 and 3 lie on the closed half-plane at azimuth
/// `theta23`.
///
/// This holds exactly when edge 01 makes an acute or right angle with edges
/// 02 and 03; otherwise the azimuthal sweep `0..theta23` does not cover the
/// element.
pub fn check_azimuth(r: &ReferenceTet) -> Result<()> {
    let (s, c) = r.theta23.sin_cos();
    for (k, y) in r.y_nodes.iter().enumerate().skip(1) {
        let along = y.x * c + y.y * s;
        if !(along >= -FOLD_EPS * y.norm()) {
            return Err(Error::AzimuthFold { node: k + 1 });
        }
    }
    Ok(())
}

fn horizontal(y: &Vec3) -> f64 {
    y.x.hypot(y.y)
}

/// Azimuthal extent `theta23`, from node 2 and cross-checked against node 3.
///
/// A node on the polar axis has no azimuth; the other node is used alone.
pub fn theta_extent(r: &ReferenceTet) -> Result<f64> {
    check_azimuth(r)?;
    let [_, y2, y3] = r.y_nodes;
    let axial = |y: &Vec3| horizontal(y) <= FOLD_EPS * y.norm();
    let (primary, other) = if axial(&y2) { (y3, y2) } else { (y2, y3) };
    let t_primary = primary.y.atan2(primary.x);
    let t_other = if axial(&other) {
        t_primary
    } else {
        other.y.atan2(other.x)
    };
    if (t_primary - t_other).abs() > THETA_MATCH_TOL
        || (t_primary - r.theta23).abs() > THETA_MATCH_TOL
    {
        return Err(Error::ThetaMismatch {
            node2: y2.y.atan2(y2.x),
            node3: y3.y.atan2(y3.x),
        });
    }
    Ok(t_primary)
}

/// Polar-angle limits at one azimuth, with the distances to the edge
/// intersections A (edge 12) and B (edge 13), ordered so `phi_a < phi_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiLimits {
    pub phi_a: f64,
    pub rho_a: f64,
    pub phi_b: f64,
    pub rho_b: f64,
}

fn check_u(u: f64) -> Result<f64> {
    if !(-INTERSECTION_EPS..=1.0 + INTERSECTION_EPS).contains(&u) {
        return Err(Error::IntersectionOutOfRange { u });
    }
    Ok(u)
}

/// Intersection of the plane of constant `theta` with edge `1k`, in
/// spherical form: returns `(phi, rho)`.
fn edge_intersection(r: &ReferenceTet, theta: f64, rho_k: f64, phi_k: f64) -> Result<(f64, f64)> {
    let (sin_pk, cos_pk) = phi_k.sin_cos();
    let a = r.rho1 * theta.sin();
    let b = rho_k * sin_pk * (r.theta23 - theta).sin();
    let u = check_u(a / (a + b))?;
    let v = 1.0 - u;
    let cross = 2.0 * u * v * r.rho1 * rho_k * sin_pk * r.theta23.cos();
    let rho_sq = v * v * r.rho1 * r.rho1 + u * u * rho_k * rho_k + cross;
    let horiz_sq = v * v * r.rho1 * r.rho1 + u * u * rho_k * rho_k * sin_pk * sin_pk + cross;
    let z = u * rho_k * cos_pk;
    Ok((horiz_sq.max(0.0).sqrt().atan2(z), rho_sq.max(0.0).sqrt()))
}

/// Limits in `phi` at azimuth `theta`, for `0 <= theta <= theta23`.
pub fn phi_limits(r: &ReferenceTet, theta: f64) -> Result<PhiLimits> {
    let (pa, ra) = edge_intersection(r, theta, r.rho2, r.phi2)?;
    let (pb, rb) = edge_intersection(r, theta, r.rho3, r.phi3)?;
    Ok(ordered(pa, ra, pb, rb))
}

fn ordered(pa: f64, ra: f64, pb: f64, rb: f64) -> PhiLimits {
    if pa <= pb {
        PhiLimits {
            phi_a: pa,
            rho_a: ra,
            phi_b: pb,
            rho_b: rb,
        }
    } else {
        PhiLimits {
            phi_a: pb,
            rho_a: rb,
            phi_b: pa,
            rho_b: ra,
        }
    }
}

/// Same limits from the Cartesian intersection `y1 + (yk - y1) u`; used as an
/// independent check on [`phi_limits`].
pub fn phi_limits_cartesian(r: &ReferenceTet, theta: f64) -> Result<PhiLimits> {
    let s = Vec3::new(theta.sin(), -theta.cos(), 0.0);
    let [y1, y2, y3] = r.y_nodes;
    let hit = |yk: Vec3| -> Result<(f64, f64)> {
        let e = yk - y1;
        let u = check_u(-y1.dot(&s) / e.dot(&s))?;
        let y = y1 + e * u;
        Ok((polar_angle(&y), y.norm()))
    };
    let (pa, ra) = hit(y2)?;
    let (pb, rb) = hit(y3)?;
    Ok(ordered(pa, ra, pb, rb))
}

/// Distance from the origin to segment AB along polar angle `phi`.
pub fn rho_limit(lim: &PhiLimits, phi: f64) -> Result<f64> {
    let PhiLimits {
        phi_a,
        rho_a,
        phi_b,
        rho_b,
    } = *lim;
    let (sa, ca) = phi_a.sin_cos();
    let (sb, cb) = phi_b.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let num = rho_a * rho_b * (phi_a - phi_b).sin();
    let den = (rho_b * cb - rho_a * ca) * sp - (rho_b * sb - rho_a * sa) * cp;
    let rho = num / den;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::RadialLimit { rho });
    }
    Ok(rho)
}

/// Splits face 123 at the edge midpoints; every child keeps vertex 0.
///
/// Midpoints: `x4` on edge 12, `x5` on edge 23, `x6` on edge 13. Children are
/// 0146, 0425, 0536 and 0456.
pub fn split_tetrahedron(tet: &Tetrahedron) -> [Tetrahedron; 4] {
    let [x0, x1, x2, x3] = tet.nodes;
    let x4 = 0.5 * (x1 + x2);
    let x5 = 0.5 * (x2 + x3);
    let x6 = 0.5 * (x1 + x3);
    [
        Tetrahedron::new(x0, x1, x4, x6),
        Tetrahedron::new(x0, x4, x2, x5),
        Tetrahedron::new(x0, x5, x3, x6),
        Tetrahedron::new(x0, x4, x5, x6),
    ]
}

/// Closest point of triangle `abc` to `p`.
pub fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn unit_tet() -> Tetrahedron {
        Tetrahedron::new(Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z())
    }

    fn height_tet(h: f64) -> Tetrahedron {
        Tetrahedron::new(
            Vec3::new(0.0, 0.0, h),
            Vec3::zeros(),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        )
    }

    #[test]
    fn unit_right_tet_reference() {
        let r = to_reference_orientation(&unit_tet()).unwrap();
        assert_eq!(r.y_nodes[0], Vec3::new(1.0, 0.0, 0.0));
        assert!((r.rho1 - 1.0).abs() < 1e-15);
        assert!((r.rho2 - 1.0).abs() < 1e-15);
        assert!((r.rho3 - 1.0).abs() < 1e-15);
        assert!((r.rotation.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reference_nodes_map_back_for_either_orientation() {
        let base = Tetrahedron::new(
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, -0.02),
            Vec3::new(0.9685, -0.0182, -0.0178),
            Vec3::new(1.0, -0.0348, -0.0164),
        );
        for tet in [base, base.relabel(1, 3, 2)] {
            let r = to_reference_orientation(&tet).unwrap();
            let (i2, i3) = if r.swapped { (3, 2) } else { (2, 3) };
            for (y, k) in r.y_nodes.iter().zip([1, i2, i3]) {
                assert!((r.to_global(y) - tet.nodes[k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn planarity_of_nodes_two_and_three() {
        let tet = height_tet(0.1);
        let r = to_reference_orientation(&tet).unwrap();
        let t = theta_extent(&r).unwrap();
        let s = Vec3::new(t.sin(), -t.cos(), 0.0);
        for y in &r.y_nodes[1..] {
            assert!(y.dot(&s).abs() < 1e-12 * y.norm());
        }
        for (k, y) in r.y_nodes.iter().enumerate() {
            let xp = tet.nodes[k + 1] - tet.nodes[0];
            let xp = if r.swapped && k > 0 {
                tet.nodes[4 - k] - tet.nodes[0]
            } else {
                xp
            };
            assert!((y.norm() - xp.norm()).abs() < 1e-12 * xp.norm());
            assert!((r.rotation.tr_mul(y) - xp).norm() < 1e-12 * xp.norm());
        }
    }

    #[test]
    fn theta_extent_simple_cases() {
        let mut r = to_reference_orientation(&unit_tet()).unwrap();
        r.y_nodes[1] = Vec3::new(0.0, 1.0, 0.0);
        r.y_nodes[2] = Vec3::new(0.0, 2.0, 0.5);
        r.theta23 = FRAC_PI_2;
        assert!((theta_extent(&r).unwrap() - FRAC_PI_2).abs() < 1e-15);
        r.y_nodes[1] = Vec3::new(1.0, 1.0, 0.0) / 2f64.sqrt();
        r.y_nodes[2] = Vec3::new(1.0, 1.0, 1.0);
        r.theta23 = FRAC_PI_4;
        assert!((theta_extent(&r).unwrap() - FRAC_PI_4).abs() < 1e-15);
        r.y_nodes[2] = Vec3::new(-1.0, -1.0, 1.0);
        assert!(theta_extent(&r).is_err());
    }

    #[test]
    fn theta_matches_arccos_form() {
        let tet = height_tet(0.1);
        let r = to_reference_orientation(&tet).unwrap();
        let x1p = tet.nodes[1] - tet.nodes[0];
        let x2p = tet.nodes[if r.swapped { 3 } else { 2 }] - tet.nodes[0];
        let x3p = tet.nodes[if r.swapped { 2 } else { 3 }] - tet.nodes[0];
        let n = x3p.cross(&x2p).normalize();
        let p = x1p - x1p.dot(&n) * n;
        let s = p.normalize();
        let via_acos = (x1p.dot(&s) / x1p.norm()).acos();
        assert!((theta_extent(&r).unwrap() - via_acos).abs() < 1e-12);
    }

    #[test]
    fn phi_limits_at_end_azimuths() {
        let r = to_reference_orientation(&height_tet(0.1)).unwrap();
        let l = phi_limits(&r, 0.0).unwrap();
        // both intersections are node 1
        assert!((l.phi_a - FRAC_PI_2).abs() < 1e-14);
        assert!((l.rho_a - r.rho1).abs() < 1e-14);
        let l = phi_limits(&r, r.theta23).unwrap();
        assert!((l.phi_a - r.phi2.min(r.phi3)).abs() < 1e-12);
        assert!((l.phi_b - r.phi2.max(r.phi3)).abs() < 1e-12);
    }

    #[test]
    fn spherical_and_cartesian_limits_agree() {
        let r = to_reference_orientation(&height_tet(0.1)).unwrap();
        for k in 1..20 {
            let theta = r.theta23 * k as f64 / 20.0;
            let a = phi_limits(&r, theta).unwrap();
            let b = phi_limits_cartesian(&r, theta).unwrap();
            assert!((a.phi_a - b.phi_a).abs() < 1e-12);
            assert!((a.phi_b - b.phi_b).abs() < 1e-12);
            assert!((a.rho_a - b.rho_a).abs() < 1e-12);
            assert!((a.rho_b - b.rho_b).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_limit_endpoints_and_chord() {
        let l = PhiLimits {
            phi_a: 0.4,
            rho_a: 1.3,
            phi_b: 1.1,
            rho_b: 0.7,
        };
        assert!((rho_limit(&l, 0.4).unwrap() - 1.3).abs() < 1e-14);
        assert!((rho_limit(&l, 1.1).unwrap() - 0.7).abs() < 1e-14);

        let l = PhiLimits {
            phi_a: 0.3,
            rho_a: 1.0,
            phi_b: 1.2,
            rho_b: 1.0,
        };
        let mid = 0.75;
        let expected = (0.45f64).cos();
        assert!((rho_limit(&l, mid).unwrap() - expected).abs() < 1e-14);
        // direct ray-segment intersection in the (x, z) plane
        let a = (l.phi_a.sin(), l.phi_a.cos());
        let b = (l.phi_b.sin(), l.phi_b.cos());
        let d = (mid.sin(), mid.cos());
        let e = (b.0 - a.0, b.1 - a.1);
        let t = (a.0 * e.1 - a.1 * e.0) / (d.0 * e.1 - d.1 * e.0);
        assert!((rho_limit(&l, mid).unwrap() - t).abs() < 1e-14);
    }

    #[test]
    fn rho_limit_rejects_degenerate_segment() {
        let l = PhiLimits {
            phi_a: 0.5,
            rho_a: 1.0,
            phi_b: 0.5,
            rho_b: 1.0,
        };
        assert!(rho_limit(&l, 0.5).is_err());
    }

    #[test]
    fn split_volumes() {
        let t = unit_tet();
        let kids = split_tetrahedron(&t);
        for k in &kids {
            assert!((k.volume() - 1.0 / 24.0).abs() < 1e-16);
            assert_eq!(k.nodes[0], t.nodes[0]);
        }
        let total: f64 = kids
            .iter()
            .flat_map(split_tetrahedron)
            .map(|k| k.volume())
            .sum();
        assert!((total - t.volume()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        let flat = Tetrahedron::new(
            Vec3::zeros(),
            Vec3::x(),
            Vec3::y(),
            Vec3::new(1.0, 1.0, 0.0),
        );
        assert!(matches!(
            to_reference_orientation(&flat),
            Err(Error::DegenerateTetrahedron { .. })
        ));
        let coincident = Tetrahedron::new(Vec3::zeros(), Vec3::zeros(), Vec3::y(), Vec3::z());
        assert_eq!(
            to_reference_orientation(&coincident),
            Err(Error::CoincidentNodes)
        );
    }

    #[test]
    fn perpendicular_edge_fallback() {
        // edge 01 along z, plane 023 is z = 0
        let tet = Tetrahedron::new(
            Vec3::zeros(),
            Vec3::z(),
            Vec3::new(1.0, 0.2, 0.0),
            Vec3::new(0.3, 1.0, 0.0),
        );
        let r = to_reference_orientation(&tet).unwrap();
        assert!((r.theta23 - FRAC_PI_2).abs() < 1e-12);
        assert!((r.rotation.transpose() * r.rotation - Matrix3::identity()).amax() < 1e-14);
        theta_extent(&r).unwrap();
    }

    #[test]
    fn obtuse_apex_is_detected() {
        // edges 01 and 02 make an obtuse angle
        let tet = Tetrahedron::new(
            Vec3::zeros(),
            Vec3::x(),
            Vec3::new(-1.0, 0.3, 0.0),
            Vec3::new(0.2, 0.2, 1.0),
        );
        let r = to_reference_orientation(&tet).unwrap();
        assert!(matches!(check_azimuth(&r), Err(Error::AzimuthFold { .. })));
    }

    #[test]
    fn closest_point_regions() {
        let a = Vec3::zeros();
        let b = Vec3::x();
        let c = Vec3::y();
        let q = closest_point_on_triangle(&Vec3::new(0.2, 0.2, 1.0), &a, &b, &c);
        assert!((q - Vec3::new(0.2, 0.2, 0.0)).norm() < 1e-15);
        let q = closest_point_on_triangle(&Vec3::new(2.0, -1.0, 1.0), &a, &b, &c);
        assert_eq!(q, b);
        let q = closest_point_on_triangle(&Vec3::new(1.0, 1.0, 0.5), &a, &b, &c);
        assert!((q - Vec3::new(0.5, 0.5, 0.0)).norm() < 1e-15);
    }
}
