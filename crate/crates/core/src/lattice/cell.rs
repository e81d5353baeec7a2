use serde::{Deserialize, Serialize};

use super::LatticeError;

/// Lattice translation in units of the cell vectors.
pub type Offset = [i32; 3];

/// An edge from `tail` in the home cell to `head` in the cell at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, Offset)", into = "(usize, usize, Offset)")]
pub struct CellEdge {
    pub tail: usize,
    pub head: usize,
    pub offset: Offset,
}

impl From<(usize, usize, Offset)> for CellEdge {
    fn from((tail, head, offset): (usize, usize, Offset)) -> Self {
        CellEdge { tail, head, offset }
    }
}

impl From<CellEdge> for (usize, usize, Offset) {
    fn from(e: CellEdge) -> Self {
        (e.tail, e.head, e.offset)
    }
}

/// One step of a face boundary: the copy of `edge` whose tail sits in the
/// cell at `offset`, walked tail to head (`reversed == false`) or back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(usize, Offset, u8)", into = "(usize, Offset, u8)")]
pub struct FaceStep {
    pub edge: usize,
    pub offset: Offset,
    pub reversed: bool,
}

impl TryFrom<(usize, Offset, u8)> for FaceStep {
    type Error = String;

    fn try_from((edge, offset, o): (usize, Offset, u8)) -> Result<Self, String> {
        match o {
            0 | 1 => Ok(FaceStep { edge, offset, reversed: o == 1 }),
            _ => Err(format!("face orientation must be 0 or 1, got {o}")),
        }
    }
}

impl From<FaceStep> for (usize, Offset, u8) {
    fn from(s: FaceStep) -> Self {
        (s.edge, s.offset, s.reversed as u8)
    }
}

/// Where a face's CZ schedule starts and which way it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(usize, u8)", into = "(usize, u8)")]
pub struct GateOrder {
    /// Index into the face's step list of the first gate.
    pub start: usize,
    /// Run against the listed step order.
    pub reversed: bool,
}

impl TryFrom<(usize, u8)> for GateOrder {
    type Error = String;

    fn try_from((start, d): (usize, u8)) -> Result<Self, String> {
        match d {
            0 | 1 => Ok(GateOrder { start, reversed: d == 1 }),
            _ => Err(format!("gate direction must be 0 or 1, got {d}")),
        }
    }
}

impl From<GateOrder> for (usize, u8) {
    fn from(g: GateOrder) -> Self {
        (g.start, g.reversed as u8)
    }
}

/// A periodic 2-complex: the translation-inequivalent vertices, edges and
/// faces of a crystal net, plus a gate schedule per face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCell {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub vertices: usize,
    pub edges: Vec<CellEdge>,
    pub faces: Vec<Vec<FaceStep>>,
    pub gate_order: Vec<GateOrder>,
}

fn add(a: Offset, b: Offset) -> Offset {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl UnitCell {
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let cell: UnitCell = serde_json::from_str(text).map_err(|e| LatticeError::Format(e.to_string()))?;
        cell.validate()?;
        Ok(cell)
    }

    /// Endpoints of a face step as `(vertex, cell offset)`, in walking order.
    pub fn step_ends(&self, step: &FaceStep) -> ((usize, Offset), (usize, Offset)) {
        let e = &self.edges[step.edge];
        let tail = (e.tail, step.offset);
        let head = (e.head, add(step.offset, e.offset));
        if step.reversed {
            (head, tail)
        } else {
            (tail, head)
        }
    }

    /// Index checks and face closure. The `∂∂ = 0` check on an actual torus
    /// happens when the cell is instantiated.
    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.vertices == 0 {
            return Err(LatticeError::Format("cell has no vertices".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertices || e.head >= self.vertices {
                return Err(LatticeError::Format(format!("edge {i} has an endpoint outside 0..{}", self.vertices)));
            }
            if e.tail == e.head && e.offset == [0, 0, 0] {
                return Err(LatticeError::Format(format!("edge {i} is a loop")));
            }
        }
        if self.gate_order.len() != self.faces.len() {
            return Err(LatticeError::Format(format!(
                "{} faces but {} gate orders",
                self.faces.len(),
                self.gate_order.len()
            )));
        }
        for (f, steps) in self.faces.iter().enumerate() {
            if steps.is_empty() {
                return Err(LatticeError::Format(format!("face {f} is empty")));
            }
            if let Some(s) = steps.iter().find(|s| s.edge >= self.edges.len()) {
                return Err(LatticeError::Format(format!("face {f} uses missing edge {}", s.edge)));
            }
            let mut at = self.step_ends(&steps[0]).0;
            let start = at;
            for (k, s) in steps.iter().enumerate() {
                let (a, b) = self.step_ends(s);
                if a != at {
                    return Err(LatticeError::OpenFace { face: f, step: k });
                }
                at = b;
            }
            if at != start {
                return Err(LatticeError::OpenFace { face: f, step: steps.len() });
            }
            if self.gate_order[f].start >= steps.len() {
                return Err(LatticeError::Format(format!("gate order of face {f} starts past its end")));
            }
        }
        Ok(())
    }

    /// Face steps in gate order.
    pub fn scheduled_steps(&self, face: usize) -> Vec<FaceStep> {
        let steps = &self.faces[face];
        let g = self.gate_order[face];
        let n = steps.len();
        if g.reversed {
            (0..n)
                .map(|k| {
                    let s = steps[(g.start + n - k) % n];
                    FaceStep { reversed: !s.reversed, ..s }
                })
                .collect()
        } else {
            (0..n).map(|k| steps[(g.start + k) % n]).collect()
        }
    }

    pub fn stats(&self) -> CellStats {
        let incidences: usize = self.faces.iter().map(Vec::len).sum();
        let (v, e, f) = (self.vertices, self.edges.len(), self.faces.len());
        CellStats {
            name: self.name.clone(),
            vertices: v,
            edges: e,
            faces: f,
            decoder_degree: 2.0 * e as f64 / v as f64,
            graph_state_degree: 2.0 * incidences as f64 / (e + f) as f64,
        }
    }
}

/// Per-cell counts and the two average degrees: `2E/V` for the decoder
/// graph (1-skeleton) and `2 Σ|f| / (E + F)` for the cluster-state graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStats {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub decoder_degree: f64,
    pub graph_state_degree: f64,
}
