//! Writes the vortex-ring fixture mesh: `testmesh <dir> [stem]`.

use std::path::PathBuf;
use std::process::ExitCode;

use testmesh::{ring_mesh, write_tetgen, RingMeshParams};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(dir) = args.first() else {
        eprintln!("usage: testmesh <dir> [stem]");
        return ExitCode::from(1);
    };
    let stem = args.get(1).map(String::as_str).unwrap_or("ring");
    let mesh = ring_mesh(&RingMeshParams::default());
    let dir = PathBuf::from(dir);
    match std::fs::create_dir_all(&dir).and_then(|()| write_tetgen(&mesh, &dir, stem)) {
        Ok((node, ele)) => {
            println!("{} nodes, {} tetrahedra", mesh.nodes.len(), mesh.tets.len());
            println!("{}\n{}", node.display(), ele.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
