//! Incremental Bowyer-Watson tetrahedralization with exact predicates.

use std::collections::HashMap;

use robust::{insphere, orient3d, Coord3D};

const NONE: usize = usize::MAX;

/// Vertices and positively oriented tetrahedra, indices into `nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 3]>,
    pub tets: Vec<[usize; 4]>,
}

impl Mesh {
    pub fn signed_volume(&self, t: usize) -> f64 {
        let [a, b, c, d] = self.tets[t].map(|i| self.nodes[i]);
        let u = sub(b, a);
        let v = sub(c, a);
        let w = sub(d, a);
        (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))
            / 6.0
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.signed_volume(t)).sum()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn c3(p: [f64; 3]) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Positive when `v` is positively oriented; robust's `orient3d` uses the
/// opposite handedness.
fn orient(p: &[[f64; 3]], v: [usize; 4]) -> f64 {
    -orient3d(c3(p[v[0]]), c3(p[v[1]]), c3(p[v[2]]), c3(p[v[3]]))
}

#[derive(Debug, Clone)]
struct Cell {
    v: [usize; 4],
    /// `n[i]` is across the face opposite `v[i]`
    n: [usize; 4],
    alive: bool,
}

struct Builder {
    pts: Vec<[f64; 3]>,
    cells: Vec<Cell>,
    mark: Vec<u32>,
    stamp: u32,
    last: usize,
}

impl Builder {
    fn replaced(&self, c: usize, i: usize, p: usize) -> [usize; 4] {
        let mut v = self.cells[c].v;
        v[i] = p;
        v
    }

    fn inside_sphere(&self, c: usize, p: usize) -> bool {
        let v = self.cells[c].v;
        let s = &self.pts;
        // robust wants its own positive orientation, so swap the first two
        insphere(c3(s[v[1]]), c3(s[v[0]]), c3(s[v[2]]), c3(s[v[3]]), c3(s[p])) > 0.0
    }

    fn locate(&self, p: usize) -> usize {
        let mut c = self.last;
        let mut step = 0usize;
        'walk: loop {
            step += 1;
            for k in 0..4 {
                let i = (k + step) % 4;
                if orient(&self.pts, self.replaced(c, i, p)) < 0.0 {
                    let next = self.cells[c].n[i];
                    assert!(next != NONE, "point outside the enclosing tetrahedron");
                    c = next;
                    continue 'walk;
                }
            }
            return c;
        }
    }

    fn insert(&mut self, p: usize) {
        let start = self.locate(p);
        self.stamp += 1;
        let stamp = self.stamp;
        self.mark.resize(self.cells.len(), 0);
        let mut cavity = vec![start];
        self.mark[start] = stamp;
        let mut head = 0;
        while head < cavity.len() {
            let c = cavity[head];
            head += 1;
            for i in 0..4 {
                let nb = self.cells[c].n[i];
                if nb != NONE && self.mark[nb] != stamp && self.inside_sphere(nb, p) {
                    self.mark[nb] = stamp;
                    cavity.push(nb);
                }
            }
        }
        // grow until every boundary face sees `p` strictly
        loop {
            let mut grown = false;
            for idx in 0..cavity.len() {
                let c = cavity[idx];
                for i in 0..4 {
                    let nb = self.cells[c].n[i];
                    if nb != NONE && self.mark[nb] == stamp {
                        continue;
                    }
                    if orient(&self.pts, self.replaced(c, i, p)) <= 0.0 {
                        assert!(nb != NONE, "cavity reached the enclosing hull");
                        self.mark[nb] = stamp;
                        cavity.push(nb);
                        grown = true;
                    }
                }
            }
            if !grown {
                break;
            }
        }

        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut newest = NONE;
        for &c in &cavity {
            for i in 0..4 {
                let nb = self.cells[c].n[i];
                if nb != NONE && self.mark[nb] == stamp {
                    continue;
                }
                let v = self.replaced(c, i, p);
                let id = self.cells.len();
                let mut n = [NONE; 4];
                n[i] = nb;
                if nb != NONE {
                    let back = self.cells[nb].n.iter().position(|&x| x == c).unwrap();
                    self.cells[nb].n[back] = id;
                }
                self.cells.push(Cell { v, n, alive: true });
                for j in 0..4 {
                    if j == i {
                        continue;
                    }
                    let others: Vec<usize> = (0..4).filter(|&k| k != i && k != j).map(|k| v[k]).collect();
                    let key = (others[0].min(others[1]), others[0].max(others[1]));
                    if let Some((t, f)) = edges.remove(&key) {
                        self.cells[id].n[j] = t;
                        self.cells[t].n[f] = id;
                    } else {
                        edges.insert(key, (id, j));
                    }
                }
                newest = id;
            }
        }
        debug_assert!(edges.is_empty());
        for &c in &cavity {
            self.cells[c].alive = false;
        }
        self.last = newest;
    }
}

/// Delaunay tetrahedralization of `points`, inserted in the given order.
///
/// Points must be distinct. Exactly cospherical configurations get some
/// valid triangulation. Near-flat tetrahedra on the hull can be lost to the
/// enclosing tetrahedron, so keep interior points off the hull faces.
pub fn delaunay(points: &[[f64; 3]]) -> Mesh {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let centre: Vec<f64> = (0..3).map(|k| 0.5 * (lo[k] + hi[k])).collect();
    let size = (0..3).map(|k| hi[k] - lo[k]).fold(1e-3, f64::max);
    let big = 100.0 * size;
    let corner = |s: [f64; 3]| [centre[0] + big * s[0], centre[1] + big * s[1], centre[2] + big * s[2]];
    let mut pts = vec![
        corner([-1.0, -1.0, -1.0]),
        corner([1.0, 1.0, -1.0]),
        corner([1.0, -1.0, 1.0]),
        corner([-1.0, 1.0, 1.0]),
    ];
    pts.extend_from_slice(points);
    let mut v = [0, 1, 2, 3];
    if orient(&pts, v) < 0.0 {
        v.swap(0, 1);
    }
    let mut b = Builder {
        pts,
        cells: vec![Cell {
            v,
            n: [NONE; 4],
            alive: true,
        }],
        mark: Vec::new(),
        stamp: 0,
        last: 0,
    };
    for p in 4..b.pts.len() {
        b.insert(p);
    }
    let tets = b
        .cells
        .iter()
        .filter(|c| c.alive && c.v.iter().all(|&i| i >= 4))
        .map(|c| c.v.map(|i| i - 4))
        .collect();
    Mesh {
        nodes: points.to_vec(),
        tets,
    }
}
