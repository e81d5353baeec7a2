//! Periodic unit cells, their instantiation on a 3-torus, and the decoder
//! graph obtained from the circuit-level error channels.

mod cell;
mod torus;

pub use cell::{CellEdge, CellStats, FaceStep, GateOrder, Offset, UnitCell};
pub use torus::{DecoderEdge, DecoderGraph, FaceEvents, Seam, SuffixEvent, Torus, TorusEdge};

use crate::complex::ComplexError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("malformed unit cell: {0}")]
    Format(String),
    #[error("face {face} does not close (walk breaks at step {step})")]
    OpenFace { face: usize, step: usize },
    #[error("torus size must be at least 2, got {0}")]
    Size(usize),
    #[error("instantiated complex is invalid: {0}")]
    Complex(ComplexError),
    #[error("unknown lattice '{0}'")]
    Unknown(String),
    #[error("edge set has a boundary at vertex {vertex}")]
    NonEmptyBoundary { vertex: usize },
    #[error("no edge with index {0}")]
    EdgeIndex(usize),
}

const BUNDLED: [(&str, &str); 7] = [
    ("bst", include_str!("../../data/cells/bst.json")),
    ("pcu", include_str!("../../data/cells/pcu.json")),
    ("cdq", include_str!("../../data/cells/cdq.json")),
    ("hms", include_str!("../../data/cells/hms.json")),
    ("dia", include_str!("../../data/cells/dia.json")),
    ("ctn", include_str!("../../data/cells/ctn.json")),
    ("srs", include_str!("../../data/cells/srs.json")),
];

/// Names of the bundled cells, from lowest graph-state degree (bst) to
/// lowest decoder-graph degree (srs).
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_cell(name: &str) -> Result<UnitCell, LatticeError> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| LatticeError::Unknown(name.to_string()))?;
    UnitCell::from_json(text)
}

/// Statistics of every bundled cell, in [`bundled_names`] order.
pub fn list_lattices() -> Vec<CellStats> {
    bundled_names()
        .into_iter()
        .map(|n| bundled_cell(n).expect("bundled cells are valid").stats())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_cells_load() {
        for name in bundled_names() {
            let c = bundled_cell(name).unwrap();
            assert_eq!(c.name, name);
        }
        assert_eq!(bundled_cell("xyz"), Err(LatticeError::Unknown("xyz".into())));
    }

    #[test]
    fn pcu_torus_counts() {
        let t = Torus::build(&bundled_cell("pcu").unwrap(), 4).unwrap();
        assert_eq!((t.num_vertices, t.num_edges(), t.num_faces()), (64, 192, 192));
    }

    #[test]
    fn size_one_rejected() {
        assert_eq!(Torus::build(&bundled_cell("pcu").unwrap(), 1).unwrap_err(), LatticeError::Size(1));
    }

    #[test]
    fn open_face_rejected() {
        let mut c = bundled_cell("pcu").unwrap();
        c.faces[0].pop();
        assert!(matches!(c.validate(), Err(LatticeError::OpenFace { face: 0, .. })));
    }

    #[test]
    fn pcu_square_events() {
        let t = Torus::build(&bundled_cell("pcu").unwrap(), 3).unwrap();
        let ev = t.face_events(0);
        assert_eq!(ev.z.len(), 4);
        assert_eq!(ev.x.len(), 3);
        // The two-edge suffix joins opposite corners; the others are single
        // edges or the complement of one.
        assert_ne!(ev.x[1].a, ev.x[1].b);
        let g = t.compile_error_channels();
        assert_eq!(g.num_plain, 81);
        assert_eq!(g.num_augmented(), 81);
        assert!(g.edges[..81].iter().all(|e| e.z == 4 && e.measured));
        let xs: u32 = g.edges[..81].iter().map(|e| e.x).sum();
        assert_eq!(xs, 2 * 81);
        assert!(g.edges[81..].iter().all(|e| e.z == 0 && e.x == 1 && !e.measured));
    }
}
