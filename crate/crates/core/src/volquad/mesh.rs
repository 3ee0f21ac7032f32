//! Tetrahedral meshes in tetgen `.node` / `.ele` format.

use std::path::Path;

use crate::error::{Error, Result};
use crate::tetgeom::{Tetrahedron, Vec3, DEGENERACY_RATIO};

use super::ring::RingSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct TetMesh {
    pub nodes: Vec<Vec3>,
    pub tets: Vec<[usize; 4]>,
    /// Vorticity sampled at each node.
    pub vorticity: Vec<Vec3>,
}

impl TetMesh {
    /// Checks indices and element volumes; vorticity starts at zero.
    pub fn new(nodes: Vec<Vec3>, tets: Vec<[usize; 4]>) -> Result<Self> {
        if nodes.is_empty() || tets.is_empty() {
            return Err(Error::InvalidArgument(
                "mesh has no nodes or no elements".into(),
            ));
        }
        for (e, t) in tets.iter().enumerate() {
            if let Some(&bad) = t.iter().find(|&&i| i >= nodes.len()) {
                return Err(Error::MeshIndex {
                    element: e,
                    index: bad as i64,
                });
            }
        }
        let mesh = Self {
            vorticity: vec![Vec3::zeros(); nodes.len()],
            nodes,
            tets,
        };
        for e in 0..mesh.tets.len() {
            let t = mesh.element(e);
            let threshold = DEGENERACY_RATIO * t.longest_edge().powi(3);
            let volume = t.volume();
            if !(volume > threshold) {
                return Err(Error::DegenerateElement { element: e, volume });
            }
        }
        Ok(mesh)
    }

    pub fn element(&self, e: usize) -> Tetrahedron {
        let [a, b, c, d] = self.tets[e];
        Tetrahedron::new(self.nodes[a], self.nodes[b], self.nodes[c], self.nodes[d])
    }

    pub fn sample_vorticity(&mut self, ring: &RingSpec) {
        self.vorticity = self.nodes.iter().map(|x| ring.vorticity(x)).collect();
    }
}

struct Lines<'a> {
    file: &'a str,
    rows: Vec<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(file: &'a str, text: &'a str) -> Self {
        let rows = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let body = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Self { file, rows }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::MeshParse {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn last_line(&self) -> usize {
        self.rows.last().map_or(1, |r| r.0)
    }
}

fn parse_int(lines: &Lines, line: usize, tok: &str) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| lines.err(line, format!("expected an integer, found '{tok}'")))
}

fn parse_real(lines: &Lines, line: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| lines.err(line, format!("expected a finite number, found '{tok}'")))
}

fn parse_count(lines: &Lines, line: usize, tok: &str) -> Result<usize> {
    let v = parse_int(lines, line, tok)?;
    usize::try_from(v).map_err(|_| lines.err(line, format!("negative count {v}")))
}

/// Parses node coordinates and the index base (the first node id).
fn parse_nodes(file: &str, text: &str) -> Result<(Vec<Vec3>, i64)> {
    let lines = Lines::new(file, text);
    let (hl, header) = lines
        .rows
        .first()
        .ok_or_else(|| lines.err(1, "missing header"))?;
    if header.len() < 2 || header.len() > 4 {
        return Err(lines.err(
            *hl,
            "header must be '<#nodes> <dim> [<#attrs> [<#markers>]]'",
        ));
    }
    let n = parse_count(&lines, *hl, header[0])?;
    let dim = parse_count(&lines, *hl, header[1])?;
    if dim != 3 {
        return Err(lines.err(*hl, format!("dimension must be 3, found {dim}")));
    }
    let attrs = match header.get(2) {
        Some(t) => parse_count(&lines, *hl, t)?,
        None => 0,
    };
    let markers = match header.get(3) {
        Some(t) => parse_count(&lines, *hl, t)?,
        None => 0,
    };
    if markers > 1 {
        return Err(lines.err(*hl, "boundary marker count must be 0 or 1"));
    }
    let body = &lines.rows[1..];
    if body.len() != n {
        let line = if body.len() > n {
            body[n].0
        } else {
            lines.last_line()
        };
        return Err(lines.err(
            line,
            format!("header declares {n} nodes, found {}", body.len()),
        ));
    }
    let width = 4 + attrs + markers;
    let mut nodes = Vec::with_capacity(n);
    let mut base = 0;
    for (i, (line, toks)) in body.iter().enumerate() {
        if toks.len() != width {
            return Err(lines.err(
                *line,
                format!("expected {width} fields, found {}", toks.len()),
            ));
        }
        let id = parse_int(&lines, *line, toks[0])?;
        if i == 0 {
            base = id;
        }
        if id != base + i as i64 {
            return Err(lines.err(*line, format!("node id {id} out of sequence")));
        }
        let x = parse_real(&lines, *line, toks[1])?;
        let y = parse_real(&lines, *line, toks[2])?;
        let z = parse_real(&lines, *line, toks[3])?;
        nodes.push(Vec3::new(x, y, z));
    }
    Ok((nodes, base))
}

fn parse_elements(file: &str, text: &str, base: i64, n_nodes: usize) -> Result<Vec<[usize; 4]>> {
    let lines = Lines::new(file, text);
    let (hl, header) = lines
        .rows
        .first()
        .ok_or_else(|| lines.err(1, "missing header"))?;
    if header.len() < 2 || header.len() > 3 {
        return Err(lines.err(*hl, "header must be '<#tets> <nodes per tet> [<#attrs>]'"));
    }
    let n = parse_count(&lines, *hl, header[0])?;
    let per = parse_count(&lines, *hl, header[1])?;
    if per != 4 {
        return Err(lines.err(
            *hl,
            format!("only 4-node elements are supported, found {per}"),
        ));
    }
    let attrs = match header.get(2) {
        Some(t) => parse_count(&lines, *hl, t)?,
        None => 0,
    };
    let body = &lines.rows[1..];
    if body.len() != n {
        let line = if body.len() > n {
            body[n].0
        } else {
            lines.last_line()
        };
        return Err(lines.err(
            line,
            format!("header declares {n} elements, found {}", body.len()),
        ));
    }
    let width = 5 + attrs;
    let mut tets = Vec::with_capacity(n);
    for (e, (line, toks)) in body.iter().enumerate() {
        if toks.len() != width {
            return Err(lines.err(
                *line,
                format!("expected {width} fields, found {}", toks.len()),
            ));
        }
        let mut t = [0usize; 4];
        for k in 0..4 {
            let raw = parse_int(&lines, *line, toks[1 + k])?;
            let idx = raw - base;
            if idx < 0 || idx as usize >= n_nodes {
                return Err(Error::MeshIndex {
                    element: e,
                    index: raw,
                });
            }
            t[k] = idx as usize;
        }
        tets.push(t);
    }
    Ok(tets)
}

/// Builds a mesh from the text of a `.node` and an `.ele` file.
pub fn parse_mesh(node_text: &str, ele_text: &str, ring: &RingSpec) -> Result<TetMesh> {
    let (nodes, base) = parse_nodes("<node>", node_text)?;
    let tets = parse_elements("<ele>", ele_text, base, nodes.len())?;
    let mut mesh = TetMesh::new(nodes, tets)?;
    mesh.sample_vorticity(ring);
    Ok(mesh)
}

/// Reads a tetgen mesh and samples the ring vorticity at its nodes.
pub fn load_mesh(node_file: &Path, ele_file: &Path, ring: &RingSpec) -> Result<TetMesh> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    };
    let node_name = node_file.display().to_string();
    let ele_name = ele_file.display().to_string();
    let (nodes, base) = parse_nodes(&node_name, &read(node_file)?)?;
    let tets = parse_elements(&ele_name, &read(ele_file)?, base, nodes.len())?;
    let mut mesh = TetMesh::new(nodes, tets)?;
    mesh.sample_vorticity(ring);
    Ok(mesh)
}
