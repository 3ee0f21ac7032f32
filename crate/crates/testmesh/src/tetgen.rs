//! Writers for tetgen `.node` and `.ele` files with 1-based ids.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::delaunay::Mesh;

pub fn node_text(mesh: &Mesh) -> String {
    let mut s = format!("# generated fixture\n{} 3 0 0\n", mesh.nodes.len());
    for (i, p) in mesh.nodes.iter().enumerate() {
        // shortest round-trip form keeps coordinates bit-exact
        let _ = writeln!(s, "{} {:?} {:?} {:?}", i + 1, p[0], p[1], p[2]);
    }
    s
}

pub fn ele_text(mesh: &Mesh) -> String {
    let mut s = format!("{} 4 0\n", mesh.tets.len());
    for (i, t) in mesh.tets.iter().enumerate() {
        let _ = writeln!(s, "{} {} {} {} {}", i + 1, t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1);
    }
    s
}

/// Writes `<stem>.node` and `<stem>.ele`, returning both paths.
pub fn write_tetgen(mesh: &Mesh, dir: &Path, stem: &str) -> io::Result<(std::path::PathBuf, std::path::PathBuf)> {
    let node = dir.join(format!("{stem}.node"));
    let ele = dir.join(format!("{stem}.ele"));
    fs::write(&node, node_text(mesh))?;
    fs::write(&ele, ele_text(mesh))?;
    Ok((node, ele))
}
