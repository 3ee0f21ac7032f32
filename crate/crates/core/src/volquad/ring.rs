//! Gaussian-core vortex ring of unit radius: vorticity field and the
//! axisymmetric reference velocity from the Stokes stream function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad1d::cached_legendre;
use crate::tetgeom::Vec3;

use super::elliptic::elliptic_ke_complement;

/// Below this modulus the kernel bracket is summed as a power series.
const SMALL_MODULUS: f64 = 0.2;
const SERIES_TERMS: usize = 14;
const MIN_CELL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub sigma: f64,
}

impl RingSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "core radius {sigma} must be positive"
            )));
        }
        Ok(Self { sigma })
    }

    /// Azimuthal vorticity `exp(-((r - 1)^2 + z^2) / sigma^2)`.
    pub fn omega_theta(&self, r: f64, z: f64) -> f64 {
        (-((r - 1.0).powi(2) + z * z) / (self.sigma * self.sigma)).exp()
    }

    /// Cartesian vorticity `omega_theta (-sin theta, cos theta, 0)`.
    pub fn vorticity(&self, x: &Vec3) -> Vec3 {
        let r = x.x.hypot(x.y);
        if r == 0.0 {
            return Vec3::zeros();
        }
        let w = self.omega_theta(r, x.z);
        Vec3::new(-w * x.y / r, w * x.x / r, 0.0)
    }
}

/// `(2/k - k) K(k) - (2/k) E(k)` from `k^2` and `1 - k^2`.
fn kernel_bracket(k_sq: f64, kc_sq: f64) -> f64 {
    let k = k_sq.sqrt();
    if k < SMALL_MODULUS {
        // (pi/2) sum_m [a_{m+1} 4(m+1)/(2m+1) - a_m] k^(2m+1),
        // a_m = ((2m)! / (2^(2m) m!^2))^2
        let mut a = 1.0;
        let mut sum = 0.0;
        let mut kp = k;
        for m in 0..SERIES_TERMS {
            let r = (2 * m + 1) as f64 / (2 * m + 2) as f64;
            let a_next = a * r * r;
            sum += (a_next * 4.0 * (m + 1) as f64 / (2 * m + 1) as f64 - a) * kp;
            a = a_next;
            kp *= k_sq;
        }
        return 0.5 * PI * sum;
    }
    let (kk, ee) = elliptic_ke_complement(kc_sq.sqrt()).expect("complementary modulus in (0, 1]");
    (2.0 / k - k) * kk - (2.0 / k) * ee
}

/// Stream-function kernel of a unit-strength ring filament at `(r1, z1)`.
pub fn ring_kernel(r: f64, z: f64, r1: f64, z1: f64) -> f64 {
    let dz2 = (z - z1).powi(2);
    let a = dz2 + (r + r1).powi(2);
    let b = dz2 + (r - r1).powi(2);
    if b == 0.0 || r1 <= 0.0 {
        return 0.0;
    }
    (r * r1).sqrt() / (2.0 * PI) * kernel_bracket(4.0 * r * r1 / a, b / a)
}

/// Quadrature settings for the reference solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingReference {
    pub spec: RingSpec,
    /// Half-width of the integration window in units of `sigma`.
    pub window_sigmas: f64,
    /// Largest cell edge in the `(r1, z1)` quadtree.
    pub cell_size: f64,
    /// Gauss-Legendre length per cell direction.
    pub order: usize,
    /// Finite-difference step for the velocity.
    pub step: f64,
}

impl RingReference {
    pub fn new(spec: RingSpec) -> Self {
        Self {
            spec,
            window_sigmas: 6.0,
            cell_size: 0.2,
            order: 12,
            step: 1e-4,
        }
    }

    /// `psi(r, z)`, integrating over a window clamped to `r1 >= 0`.
    pub fn stream_function(&self, r: f64, z: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite() && z.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius {r} must be positive"
            )));
        }
        let w = self.window_sigmas * self.spec.sigma;
        let (r_lo, r_hi) = ((1.0 - w).max(0.0), 1.0 + w);
        let (z_lo, z_hi) = (-w, w);
        let rule = cached_legendre(self.order)?;
        let f = |r1: f64, z1: f64| self.spec.omega_theta(r1, z1) * ring_kernel(r, z, r1, z1);

        // cut the window at the singular point so it only ever sits on corners
        let rs: Vec<f64> = [r_lo, r, r_hi]
            .into_iter()
            .filter(|v| *v >= r_lo && *v <= r_hi)
            .collect();
        let zs: Vec<f64> = [z_lo, z, z_hi]
            .into_iter()
            .filter(|v| *v >= z_lo && *v <= z_hi)
            .collect();
        let mut stack = Vec::new();
        for i in 0..rs.len() - 1 {
            for j in 0..zs.len() - 1 {
                if rs[i + 1] > rs[i] && zs[j + 1] > zs[j] {
                    stack.push([rs[i], rs[i + 1], zs[j], zs[j + 1]]);
                }
            }
        }

        let mut total = 0.0;
        while let Some([a, b, c, d]) = stack.pop() {
            let wr = b - a;
            let wz = d - c;
            let size = wr.max(wz);
            let dr = (a - r).max(r - b).max(0.0);
            let dz = (c - z).max(z - d).max(0.0);
            let dist = dr.hypot(dz);
            if dist == 0.0 && size < MIN_CELL {
                continue;
            }
            if dist > 0.0 && size <= self.cell_size.min(dist) {
                let mut s = 0.0;
                for (ti, wi) in rule.iter() {
                    let r1 = a + 0.5 * wr * (1.0 + ti);
                    let mut row = 0.0;
                    for (tj, wj) in rule.iter() {
                        row += wj * f(r1, c + 0.5 * wz * (1.0 + tj));
                    }
                    s += wi * row;
                }
                total += 0.25 * wr * wz * s;
                continue;
            }
            let (mr, mz) = (0.5 * (a + b), 0.5 * (c + d));
            if wr > 2.0 * wz {
                stack.push([a, mr, c, d]);
                stack.push([mr, b, c, d]);
            } else if wz > 2.0 * wr {
                stack.push([a, b, c, mz]);
                stack.push([a, b, mz, d]);
            } else {
                stack.push([a, mr, c, mz]);
                stack.push([mr, b, c, mz]);
                stack.push([a, mr, mz, d]);
                stack.push([mr, b, mz, d]);
            }
        }
        Ok(total)
    }

    /// `(u_r, u_z)` by central differences of `psi` with one Richardson step.
    pub fn velocity(&self, r: f64, z: f64) -> Result<(f64, f64)> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius {r} must be positive"
            )));
        }
        let h = self.step.min(0.25 * r);
        let central = |dr: f64, dz: f64| -> Result<f64> {
            let p = self.stream_function(r + dr, z + dz)?;
            let m = self.stream_function(r - dr, z - dz)?;
            Ok((p - m) / (2.0 * (dr + dz)))
        };
        let rich = |d_h: f64, d_half: f64| (4.0 * d_half - d_h) / 3.0;
        let dpsi_dr = rich(central(h, 0.0)?, central(0.5 * h, 0.0)?);
        let dpsi_dz = rich(central(0.0, h)?, central(0.0, 0.5 * h)?);
        Ok((-dpsi_dz / r, dpsi_dr / r))
    }
}

/// Reference `(u_r, u_z)` at `(r, z)` with default quadrature settings.
pub fn ring_reference_velocity(spec: &RingSpec, r: f64, z: f64) -> Result<(f64, f64)> {
    RingReference::new(*spec).velocity(r, z)
}

/// `n >= 2` evenly spaced `z` values `-1 + 2k / (n - 1)` on the comparison line.
pub fn line_samples(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 line samples, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64)
        .collect())
}

/// `max |computed - reference| / max |reference|`.
pub fn ring_error_metric(computed: &[f64], reference: &[f64]) -> Result<f64> {
    if computed.is_empty() || computed.len() != reference.len() {
        return Err(Error::InvalidArgument(format!(
            "error metric needs equal non-empty samples, got {} and {}",
            computed.len(),
            reference.len()
        )));
    }
    let diff = computed
        .iter()
        .zip(reference)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(diff / scale)
}
