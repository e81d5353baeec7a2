use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::cell::{Offset, UnitCell};
use super::LatticeError;
use crate::complex::ChainComplex;
use crate::gf2::BinaryMatrix;

/// Parity of how many times an edge crosses the seam of each torus
/// direction, packed as bits `x = 1, y = 2, z = 4`.
pub type Seam = u8;

/// An edge of the instantiated complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusEdge {
    pub tail: u32,
    pub head: u32,
    pub seam: Seam,
}

/// A unit cell repeated `L x L x L` times on a 3-torus.
///
/// Cell `(x, y, z)` has index `x + L (y + L z)`; vertex `v` of that cell is
/// `cell * V + v`, and likewise for edges and faces.
#[derive(Debug, Clone)]
pub struct Torus {
    pub name: String,
    pub l: usize,
    pub num_vertices: usize,
    pub edges: Vec<TorusEdge>,
    /// Per face, its edges in gate order, with the walking direction.
    pub faces: Vec<Vec<(u32, bool)>>,
}

fn wrap(c: [usize; 3], off: Offset, l: usize) -> ([usize; 3], Seam) {
    let mut out = [0; 3];
    let mut seam = 0;
    for d in 0..3 {
        let t = c[d] as i64 + off[d] as i64;
        let q = t.div_euclid(l as i64);
        out[d] = t.rem_euclid(l as i64) as usize;
        if q.rem_euclid(2) == 1 {
            seam |= 1 << d;
        }
    }
    (out, seam)
}

fn cell_index(c: [usize; 3], l: usize) -> usize {
    c[0] + l * (c[1] + l * c[2])
}

impl Torus {
    /// Instantiates `cell` on a torus of linear size `l`. The resulting
    /// complex is checked for `∂∂ = 0`.
    pub fn build(cell: &UnitCell, l: usize) -> Result<Torus, LatticeError> {
        if l < 2 {
            return Err(LatticeError::Size(l));
        }
        cell.validate()?;
        let ncell = l * l * l;
        let (nv, ne, nf) = (cell.vertices, cell.edges.len(), cell.faces.len());
        let mut edges = Vec::with_capacity(ncell * ne);
        let mut faces = Vec::with_capacity(ncell * nf);
        let coords = |c: usize| [c % l, (c / l) % l, c / (l * l)];

        for c in 0..ncell {
            for e in &cell.edges {
                let (hc, seam) = wrap(coords(c), e.offset, l);
                edges.push(TorusEdge {
                    tail: (c * nv + e.tail) as u32,
                    head: (cell_index(hc, l) * nv + e.head) as u32,
                    seam,
                });
            }
        }
        let schedules: Vec<_> = (0..nf).map(|f| cell.scheduled_steps(f)).collect();
        for c in 0..ncell {
            for steps in &schedules {
                let face = steps
                    .iter()
                    .map(|s| {
                        let (ec, _) = wrap(coords(c), s.offset, l);
                        ((cell_index(ec, l) * ne + s.edge) as u32, s.reversed)
                    })
                    .collect();
                faces.push(face);
            }
        }
        let torus = Torus { name: cell.name.clone(), l, num_vertices: ncell * nv, edges, faces };
        torus.complex().validate().map_err(LatticeError::Complex)?;
        Ok(torus)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// The length-2 complex `faces -> edges -> vertices`.
    pub fn complex(&self) -> ChainComplex {
        let mut d2 = BinaryMatrix::zeros(self.edges.len(), self.faces.len());
        for (f, steps) in self.faces.iter().enumerate() {
            for &(e, _) in steps {
                d2.flip(e as usize, f);
            }
        }
        let mut d1 = BinaryMatrix::zeros(self.num_vertices, self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            d1.flip(e.tail as usize, i);
            d1.flip(e.head as usize, i);
        }
        ChainComplex::new(vec![d2, d1]).expect("shapes agree by construction")
    }

    /// Edges of a face with multiplicity reduced mod 2, ascending.
    pub fn face_boundary(&self, face: usize) -> Vec<usize> {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &(e, _) in &self.faces[face] {
            *count.entry(e as usize).or_default() += 1;
        }
        let mut out: Vec<usize> = count.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(e, _)| e).collect();
        out.sort_unstable();
        out
    }

    /// Start and end vertex of a walked edge.
    fn walk(&self, e: u32, reversed: bool) -> (u32, u32) {
        let t = self.edges[e as usize];
        if reversed {
            (t.head, t.tail)
        } else {
            (t.tail, t.head)
        }
    }

    /// Error events of one face under its gate schedule `e_1, ..., e_g`.
    ///
    /// A Z failure after gate `t` flips `e_t`. An X failure on the face qubit
    /// after gate `t < g` spreads to every later gate, flipping the suffix
    /// `e_{t+1}, ..., e_g`, which is detected only at its two endpoints.
    pub fn face_events(&self, face: usize) -> FaceEvents {
        let steps = &self.faces[face];
        let z = steps.iter().map(|&(e, _)| e).collect();
        let w0 = self.walk(steps[0].0, steps[0].1).0;
        let g = steps.len();
        let mut x = Vec::with_capacity(g.saturating_sub(1));
        let mut seam = 0;
        for t in (1..g).rev() {
            seam ^= self.edges[steps[t].0 as usize].seam;
            let wt = self.walk(steps[t].0, steps[t].1).0;
            x.push(SuffixEvent { start: t, a: wt, b: w0, seam });
        }
        x.reverse();
        FaceEvents { z, x }
    }

    /// Compiles the circuit-level error channels into a decoder graph.
    ///
    /// Plain edges come first, in torus edge order, each counting its Z
    /// failures and one measurement. An X suffix whose endpoints and seam
    /// parity match a plain edge adds to that edge's X count; other suffixes
    /// become augmented edges, merged when they share endpoints and seam.
    /// Suffixes with coincident endpoints have no syndrome and are dropped.
    pub fn compile_error_channels(&self) -> DecoderGraph {
        let mut edges: Vec<DecoderEdge> = self
            .edges
            .iter()
            .map(|e| DecoderEdge { u: e.tail, v: e.head, seam: e.seam, z: 0, x: 0, measured: true })
            .collect();
        let key = |a: u32, b: u32, s: Seam| (a.min(b), a.max(b), s);
        let mut index: HashMap<(u32, u32, Seam), usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            index.entry(key(e.tail, e.head, e.seam)).or_insert(i);
        }
        for f in 0..self.faces.len() {
            let ev = self.face_events(f);
            for e in ev.z {
                edges[e as usize].z += 1;
            }
            for s in ev.x {
                if s.a == s.b {
                    continue;
                }
                let k = key(s.a, s.b, s.seam);
                let i = *index.entry(k).or_insert_with(|| {
                    edges.push(DecoderEdge { u: k.0, v: k.1, seam: k.2, z: 0, x: 0, measured: false });
                    edges.len() - 1
                });
                edges[i].x += 1;
            }
        }
        DecoderGraph {
            lattice: self.name.clone(),
            l: self.l,
            num_vertices: self.num_vertices,
            num_plain: self.edges.len(),
            edges,
        }
    }

    /// A closed walk from vertex 0 whose seam parity is exactly `direction`,
    /// as a set of edges (each used an odd number of times).
    pub fn winding_cycle(&self, direction: usize) -> Option<Vec<usize>> {
        assert!(direction < 3);
        let target: Seam = 1 << direction;
        let n = self.num_vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail as usize].push((e.head as usize, i));
            adj[e.head as usize].push((e.tail as usize, i));
        }
        // Breadth-first search over (vertex, seam parity) states.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n * 8];
        let mut seen = vec![false; n * 8];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(state) = queue.pop_front() {
            let (v, s) = (state / 8, (state % 8) as Seam);
            for &(w, e) in &adj[v] {
                let next = w * 8 + (s ^ self.edges[e].seam) as usize;
                if !seen[next] {
                    seen[next] = true;
                    prev[next] = Some((state, e));
                    queue.push_back(next);
                }
            }
        }
        let mut state = target as usize;
        if !seen[state] {
            return None;
        }
        let mut odd: HashMap<usize, bool> = HashMap::new();
        while let Some((p, e)) = prev[state] {
            *odd.entry(e).or_default() ^= true;
            state = p;
        }
        let mut out: Vec<usize> = odd.into_iter().filter(|&(_, o)| o).map(|(e, _)| e).collect();
        out.sort_unstable();
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixEvent {
    /// Gates `start + 1 ..= g` (1-based) are affected; `start` is 1-based too.
    pub start: usize,
    pub a: u32,
    pub b: u32,
    pub seam: Seam,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceEvents {
    /// Edge flipped by a Z failure after each gate, in gate order.
    pub z: Vec<u32>,
    /// One entry per X failure after gates `1..g-1`.
    pub x: Vec<SuffixEvent>,
}

/// An edge of the decoder graph. Plain edges carry a qubit, so they see
/// measurement errors; augmented edges only see X suffix events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecoderEdge {
    pub u: u32,
    pub v: u32,
    pub seam: Seam,
    pub z: u32,
    pub x: u32,
    pub measured: bool,
}

/// The augmented 1-skeleton used for decoding.
#[derive(Debug, Clone, Serialize)]
pub struct DecoderGraph {
    pub lattice: String,
    #[serde(rename = "L")]
    pub l: usize,
    pub num_vertices: usize,
    pub num_plain: usize,
    pub edges: Vec<DecoderEdge>,
}

impl DecoderGraph {
    pub fn num_augmented(&self) -> usize {
        self.edges.len() - self.num_plain
    }

    /// Homology class of a cycle given as decoder-graph edge indices:
    /// the seam parity per direction. Fails if the edges have a boundary.
    pub fn cycle_class(&self, edges: &[usize]) -> Result<Seam, LatticeError> {
        let mut odd = vec![false; self.num_vertices];
        let mut class = 0;
        for &i in edges {
            let e = self.edges.get(i).ok_or(LatticeError::EdgeIndex(i))?;
            odd[e.u as usize] ^= true;
            odd[e.v as usize] ^= true;
            class ^= e.seam;
        }
        if let Some(v) = odd.iter().position(|&o| o) {
            return Err(LatticeError::NonEmptyBoundary { vertex: v });
        }
        Ok(class)
    }
}
