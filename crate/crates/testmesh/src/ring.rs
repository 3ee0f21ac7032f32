//! Point cloud for the vortex-ring fixture: graded lattices around a unit
//! ring in the `z = 0` plane, with exact nodes on the line `(1, 0, z)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delaunay::{delaunay, Mesh};

#[derive(Debug, Clone, PartialEq)]
pub struct RingMeshParams {
    /// Box half-extents in x, y and z.
    pub half_extent: [f64; 3],
    /// Lattice spacing inside the core tube.
    pub fine: f64,
    pub core_radius: f64,
    /// Spacing out to `shell_radius` from the ring axis.
    pub medium: f64,
    pub shell_radius: f64,
    pub coarse: f64,
    /// Spacing of points on the box faces.
    pub boundary: f64,
    /// Number of exact nodes on the segment `(1, 0, z)`, `|z| <= 1`.
    pub line_samples: usize,
    /// Lattice points closer than this to the line are dropped.
    pub line_clearance: f64,
    /// Relative lattice jitter.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for RingMeshParams {
    fn default() -> Self {
        Self {
            half_extent: [2.5, 2.5, 1.5],
            fine: 0.11,
            core_radius: 0.8,
            medium: 0.2,
            shell_radius: 1.2,
            coarse: 0.4,
            boundary: 0.5,
            line_samples: 101,
            line_clearance: 0.05,
            jitter: 0.2,
            seed: 20240611,
        }
    }
}

/// `z` values of the line nodes, `-1 + 2k / (n - 1)`.
pub fn line_z(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect(),
    }
}

fn tube_distance(p: [f64; 3]) -> f64 {
    (p[0].hypot(p[1]) - 1.0).hypot(p[2])
}

fn lattice(h: f64, half: [f64; 3], mut keep: impl FnMut([f64; 3]) -> bool) -> Vec<[f64; 3]> {
    let counts = half.map(|e| (e / h).floor() as i64);
    let mut out = Vec::new();
    for i in -counts[0]..=counts[0] {
        for j in -counts[1]..=counts[1] {
            for k in -counts[2]..=counts[2] {
                let p = [i as f64 * h, j as f64 * h, k as f64 * h];
                // stay clear of the box faces, which carry their own points
                if (0..3).all(|a| p[a].abs() < half[a] - 0.4 * h) && keep(p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn face_points(half: [f64; 3], h: f64, rng: &mut ChaCha8Rng, jitter: f64) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for axis in 0..3 {
        let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
        let na = (2.0 * half[a] / h).ceil() as usize;
        let nb = (2.0 * half[b] / h).ceil() as usize;
        for side in [-1.0, 1.0] {
            for i in 0..=na {
                for j in 0..=nb {
                    let mut p = [0.0; 3];
                    p[axis] = side * half[axis];
                    let on_a = i == 0 || i == na;
                    let on_b = j == 0 || j == nb;
                    // edges belong to the face with the lowest axis index
                    if (on_a && a < axis) || (on_b && b < axis) {
                        continue;
                    }
                    let ha = 2.0 * half[a] / na as f64;
                    let hb = 2.0 * half[b] / nb as f64;
                    p[a] = -half[a] + i as f64 * ha;
                    p[b] = -half[b] + j as f64 * hb;
                    if !on_a {
                        p[a] += jitter * ha * rng.gen_range(-1.0..1.0);
                    }
                    if !on_b {
                        p[b] += jitter * hb * rng.gen_range(-1.0..1.0);
                    }
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Points of the fixture, line nodes first.
pub fn ring_points(params: &RingMeshParams) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let half = params.half_extent;
    let zs = line_z(params.line_samples);
    let z_reach = 1.0 + params.line_clearance;
    let near_line = |p: [f64; 3]| (p[0] - 1.0).hypot(p[1]) < params.line_clearance && p[2].abs() <= z_reach;

    let mut pts: Vec<[f64; 3]> = zs.iter().map(|&z| [1.0, 0.0, z]).collect();

    let mut cloud = lattice(params.fine, half, |p| tube_distance(p) <= params.core_radius);
    for (h, lo, hi) in [
        (params.medium, params.core_radius, params.shell_radius),
        (params.coarse, params.shell_radius, f64::INFINITY),
    ] {
        cloud.extend(lattice(h, half, |p| {
            let d = tube_distance(p);
            d > lo + 0.5 * h && d <= hi
        }));
    }
    for p in cloud {
        let h = match tube_distance(p) {
            d if d <= params.core_radius => params.fine,
            d if d <= params.shell_radius => params.medium,
            _ => params.coarse,
        };
        let q = p.map(|x| x + params.jitter * h * rng.gen_range(-1.0..1.0));
        if !near_line(q) {
            pts.push(q);
        }
    }
    pts.extend(face_points(half, params.boundary, &mut rng, params.jitter));
    pts
}

/// Delaunay mesh of [`ring_points`]; node `k < line_samples` sits at
/// `(1, 0, line_z[k])`.
pub fn ring_mesh(params: &RingMeshParams) -> Mesh {
    delaunay(&ring_points(params))
}
