//! Grundmann–Möller rules on the reference tetrahedron.

use crate::error::{Error, Result};
use crate::tetgeom::{Tetrahedron, Vec3};

/// Degree-`d` rule in barycentric form; weights sum to 1/6, the volume of
/// the reference tetrahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedTetRule {
    pub degree: usize,
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
}

impl FixedTetRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Physical points and weights on `tet`.
    pub fn on(&self, tet: &Tetrahedron) -> impl Iterator<Item = (Vec3, f64)> + '_ {
        let [x0, x1, x2, x3] = tet.nodes;
        let scale = 6.0 * tet.volume();
        self.points
            .iter()
            .zip(&self.weights)
            .map(move |(l, w)| (x0 * l[0] + x1 * l[1] + x2 * l[2] + x3 * l[3], w * scale))
    }

    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, tet: &Tetrahedron, mut f: F) -> f64 {
        self.on(tet).map(|(x, w)| w * f(&x)).sum()
    }
}

fn int_factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Multi-indices of length 4 with entries summing to `s`.
fn compositions(s: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..=s {
        for b in 0..=s - a {
            for c in 0..=s - a - b {
                out.push([a, b, c, s - a - b - c]);
            }
        }
    }
    out
}

/// Grundmann–Möller rule of odd degree `1..=15`.
pub fn fixed_tet_rule(degree: usize) -> Result<FixedTetRule> {
    if degree == 0 || degree > 15 || degree.is_multiple_of(2) {
        return Err(Error::RuleDegree(degree));
    }
    let s = (degree - 1) / 2;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..=s {
        let denom = (degree + 3 - 2 * i) as f64;
        // exact integer numerator and denominator keep the alternating
        // level weights correctly rounded
        let num = ((degree + 3 - 2 * i) as u128).pow(degree as u32);
        let den = (1u128 << (2 * s)) * int_factorial(i) * int_factorial(degree + 3 - i);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * (num as f64 / den as f64);
        for beta in compositions(s - i) {
            points.push(beta.map(|b| (2 * b + 1) as f64 / denom));
            weights.push(w);
        }
    }
    Ok(FixedTetRule {
        degree,
        points,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Tetrahedron {
        Tetrahedron::new(Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z())
    }

    /// `int x^i y^j z^k` over the reference tetrahedron.
    fn exact(i: usize, j: usize, k: usize) -> f64 {
        factorial(i) * factorial(j) * factorial(k) / factorial(i + j + k + 3)
    }

    #[test]
    fn centroid_rule() {
        let r = fixed_tet_rule(1).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.weights[0] - 1.0 / 6.0).abs() < 1e-16);
        assert!(r.points[0].iter().all(|l| (l - 0.25).abs() < 1e-16));
    }

    #[test]
    fn weight_sums_and_counts() {
        for d in (1..=15).step_by(2) {
            let r = fixed_tet_rule(d).unwrap();
            // compensated sum: the alternating levels reach partial sums near 10
            let (mut sum, mut comp) = (0.0f64, 0.0f64);
            for &w in &r.weights {
                let t = sum + w;
                comp += if sum.abs() >= w.abs() {
                    (sum - t) + w
                } else {
                    (w - t) + sum
                };
                sum = t;
            }
            let sum = sum + comp;
            assert!((sum - 1.0 / 6.0).abs() < 1e-14, "degree {d}");
        }
        assert_eq!(fixed_tet_rule(13).unwrap().len(), 210);
    }

    #[test]
    fn exact_to_degree() {
        for d in [3, 7, 13] {
            let r = fixed_tet_rule(d).unwrap();
            for i in 0..=d {
                for j in 0..=d - i {
                    for k in 0..=d - i - j {
                        let v = r.integrate(&reference(), |x| {
                            x.x.powi(i as i32) * x.y.powi(j as i32) * x.z.powi(k as i32)
                        });
                        let e = exact(i, j, k);
                        assert!((v - e).abs() < 1e-12 * e.max(1e-3), "d={d} {i}{j}{k}");
                    }
                }
            }
        }
    }

    #[test]
    fn monomial_x2y3z4() {
        let r = fixed_tet_rule(13).unwrap();
        let v = r.integrate(&reference(), |x| x.x.powi(2) * x.y.powi(3) * x.z.powi(4));
        let e = 2.0 * 6.0 * 24.0 / factorial(12);
        assert!((v - e).abs() < 1e-12 * e);
    }

    #[test]
    fn rejects_even_and_large_degrees() {
        for d in [0, 2, 12, 17] {
            assert_eq!(fixed_tet_rule(d), Err(Error::RuleDegree(d)));
        }
    }
}
