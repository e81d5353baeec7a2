//! Chain complexes over GF(2), CSS codes and their foliation into cluster states.
//!
//! A complex of length `l` is stored highest degree first:
//! `dims = [dim C_l, ..., dim C_0]` and `boundaries = [∂_l, ..., ∂_1]`,
//! where `∂_k` is a `dim C_{k-1} x dim C_k` matrix.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gf2::{BinaryMatrix, PackError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BinaryMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("boundary ∂_{degree} is {found:?}, expected {expected:?}")]
    ShapeMismatch {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("∂_{lower}∘∂_{upper} is nonzero (column {column} of ∂_{upper} maps to a nonzero chain)")]
    NonZeroComposition {
        upper: usize,
        lower: usize,
        column: usize,
    },
    #[error("complex needs at least one chain group")]
    Empty,
    #[error("degree {degree} is out of range for a complex of length {length}")]
    Degree { degree: usize, length: usize },
    #[error("a CSS code needs a complex of length 2, got {0}")]
    NotLengthTwo(usize),
    #[error("a foliated code needs a complex of length 3, got {0}")]
    NotLengthThree(usize),
    #[error("foliation needs at least one layer")]
    ZeroLayers,
    #[error("malformed complex file: {0}")]
    Format(String),
}

impl From<PackError> for ComplexError {
    fn from(e: PackError) -> Self {
        ComplexError::Format(e.to_string())
    }
}

impl ChainComplex {
    /// Builds a complex from its boundary maps (highest degree first),
    /// checking that consecutive shapes compose. `∂∂ = 0` is not checked here;
    /// see [`validate`](Self::validate).
    pub fn new(boundaries: Vec<BinaryMatrix>) -> Result<Self, ComplexError> {
        if boundaries.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut dims = vec![boundaries[0].cols()];
        for b in &boundaries {
            dims.push(b.rows());
        }
        let c = ChainComplex { dims, boundaries };
        c.check_shapes()?;
        Ok(c)
    }

    /// Builds a complex from explicit dimensions and boundaries.
    pub fn from_parts(dims: Vec<usize>, boundaries: Vec<BinaryMatrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::Empty);
        }
        let c = ChainComplex { dims, boundaries };
        c.check_shapes()?;
        Ok(c)
    }

    fn check_shapes(&self) -> Result<(), ComplexError> {
        let l = self.length();
        if self.boundaries.len() != l {
            return Err(ComplexError::Format(format!(
                "{} dimensions need {} boundaries, got {}",
                self.dims.len(),
                l,
                self.boundaries.len()
            )));
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            let expected = (self.dims[i + 1], self.dims[i]);
            if b.shape() != expected {
                return Err(ComplexError::ShapeMismatch {
                    degree: l - i,
                    expected,
                    found: b.shape(),
                });
            }
        }
        Ok(())
    }

    /// Number of boundary maps.
    pub fn length(&self) -> usize {
        self.dims.len() - 1
    }

    /// `[dim C_l, ..., dim C_0]`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[BinaryMatrix] {
        &self.boundaries
    }

    /// `dim C_k`.
    pub fn dim(&self, k: usize) -> usize {
        self.dims[self.length() - k]
    }

    /// `∂_k : C_k -> C_{k-1}` for `1 <= k <= l`.
    pub fn boundary(&self, k: usize) -> &BinaryMatrix {
        assert!(k >= 1 && k <= self.length(), "no boundary ∂_{k}");
        &self.boundaries[self.length() - k]
    }

    /// Checks shapes and `∂_{k-1} ∂_k = 0` for every consecutive pair,
    /// reporting the highest failing pair and the first offending column.
    pub fn validate(&self) -> Result<(), ComplexError> {
        self.check_shapes()?;
        for k in (2..=self.length()).rev() {
            let prod = self.boundary(k - 1).mul(self.boundary(k)).expect("shapes checked");
            if let Some(column) = prod.first_nonzero_col() {
                return Err(ComplexError::NonZeroComposition {
                    upper: k,
                    lower: k - 1,
                    column,
                });
            }
        }
        Ok(())
    }

    /// `dim H_k = dim C_k - rank ∂_k - rank ∂_{k+1}`. Assumes the complex is valid.
    pub fn homology_dim(&self, k: usize) -> Result<usize, ComplexError> {
        let l = self.length();
        if k > l {
            return Err(ComplexError::Degree { degree: k, length: l });
        }
        let down = if k >= 1 { self.boundary(k).rank() } else { 0 };
        let up = if k < l { self.boundary(k + 1).rank() } else { 0 };
        Ok(self.dim(k) - down - up)
    }

    /// Betti numbers `[dim H_l, ..., dim H_0]`, in the same order as `dims`.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(|b| b.rank()).collect();
        (0..self.dims.len())
            .map(|i| {
                let down = ranks.get(i).copied().unwrap_or(0);
                let up = if i > 0 { ranks[i - 1] } else { 0 };
                self.dims[i] - down - up
            })
            .collect()
    }

    /// The cochain complex read as a chain complex: boundaries transposed and
    /// listed in reverse order, so degree `k` of the dual is degree `l - k` here.
    pub fn dualize(&self) -> ChainComplex {
        let mut dims = self.dims.clone();
        dims.reverse();
        let boundaries = self.boundaries.iter().rev().map(|b| b.transpose()).collect();
        ChainComplex { dims, boundaries }
    }

    /// `dim H^k`, computed as homology of the dual complex.
    pub fn cohomology_dim(&self, k: usize) -> Result<usize, ComplexError> {
        let l = self.length();
        if k > l {
            return Err(ComplexError::Degree { degree: k, length: l });
        }
        self.dualize().homology_dim(l - k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ComplexFile::from(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let f: ComplexFile =
            serde_json::from_str(text).map_err(|e| ComplexError::Format(e.to_string()))?;
        f.try_into()
    }
}

/// On-disk form: `{"dims": [...], "boundaries": [{"rows", "cols", "data"}]}`
/// where `data` is base64 of the row-padded packed bits.
#[derive(Debug, Serialize, Deserialize)]
struct ComplexFile {
    dims: Vec<usize>,
    boundaries: Vec<MatrixFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: String,
}

impl From<&ChainComplex> for ComplexFile {
    fn from(c: &ChainComplex) -> Self {
        ComplexFile {
            dims: c.dims.clone(),
            boundaries: c
                .boundaries
                .iter()
                .map(|b| MatrixFile {
                    rows: b.rows(),
                    cols: b.cols(),
                    data: B64.encode(b.to_packed_bytes()),
                })
                .collect(),
        }
    }
}

impl TryFrom<ComplexFile> for ChainComplex {
    type Error = ComplexError;

    fn try_from(f: ComplexFile) -> Result<Self, ComplexError> {
        let mut boundaries = Vec::with_capacity(f.boundaries.len());
        for (i, m) in f.boundaries.iter().enumerate() {
            let bytes = B64
                .decode(&m.data)
                .map_err(|e| ComplexError::Format(format!("boundary {i}: {e}")))?;
            boundaries.push(BinaryMatrix::from_packed_bytes(m.rows, m.cols, &bytes)?);
        }
        ChainComplex::from_parts(f.dims, boundaries)
    }
}

/// A CSS code as a length-2 complex `C_2 -> C_1 -> C_0`: qubits on `C_1`,
/// one check family from `∂_2` and the other from `∂_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    complex: ChainComplex,
}

impl CssCode {
    pub fn new(complex: ChainComplex) -> Result<Self, ComplexError> {
        if complex.length() != 2 {
            return Err(ComplexError::NotLengthTwo(complex.length()));
        }
        complex.validate()?;
        Ok(CssCode { complex })
    }

    /// From `∂_2` (`n x m2`) and `∂_1` (`m0 x n`).
    pub fn from_boundaries(d2: BinaryMatrix, d1: BinaryMatrix) -> Result<Self, ComplexError> {
        Self::new(ChainComplex::new(vec![d2, d1])?)
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn d2(&self) -> &BinaryMatrix {
        self.complex.boundary(2)
    }

    pub fn d1(&self) -> &BinaryMatrix {
        self.complex.boundary(1)
    }

    /// Number of physical qubits, `dim C_1`.
    pub fn n(&self) -> usize {
        self.complex.dim(1)
    }

    /// Number of logical qubits, `dim H_1`.
    pub fn k(&self) -> usize {
        self.complex.homology_dim(1).expect("degree 1 exists")
    }

    /// The `[[4,2,2]]` code: one face with four edges, all meeting one vertex.
    pub fn four_two_two() -> Self {
        let d2 = BinaryMatrix::from_fn(4, 1, |_, _| true);
        let d1 = BinaryMatrix::from_fn(1, 4, |_, _| true);
        Self::from_boundaries(d2, d1).expect("valid")
    }
}

/// The toric code on an `L x L` square lattice with periodic boundaries.
///
/// Vertex `(x, y)` is `x + L y`; horizontal edge from `(x, y)` is `2 (x + L y)`,
/// vertical edge is `2 (x + L y) + 1`; face `(x, y)` has lower-left corner `(x, y)`.
pub fn toric_code(l: usize) -> CssCode {
    assert!(l >= 2, "toric code needs L >= 2");
    let v = |x: usize, y: usize| (x % l) + l * (y % l);
    let h = |x: usize, y: usize| 2 * v(x, y);
    let u = |x: usize, y: usize| 2 * v(x, y) + 1;
    let n = 2 * l * l;
    let mut d1 = BinaryMatrix::zeros(l * l, n);
    let mut d2 = BinaryMatrix::zeros(n, l * l);
    for y in 0..l {
        for x in 0..l {
            d1.flip(v(x, y), h(x, y));
            d1.flip(v(x + 1, y), h(x, y));
            d1.flip(v(x, y), u(x, y));
            d1.flip(v(x, y + 1), u(x, y));
            let f = v(x, y);
            for e in [h(x, y), h(x, y + 1), u(x, y), u(x + 1, y)] {
                d2.flip(e, f);
            }
        }
    }
    CssCode::from_boundaries(d2, d1).expect("toric code is a valid complex")
}

/// Draws a random CSS code with `n` qubits: `∂_2` is uniform random
/// (`m2` columns), `∂_1` takes random combinations of a basis of the left
/// kernel of `∂_2`, so `∂_1 ∂_2 = 0` by construction.
pub fn random_css<R: Rng>(rng: &mut R, n: usize, m2: usize, m0: usize) -> CssCode {
    let d2 = BinaryMatrix::from_fn(n, m2, |_, _| rng.random_bool(0.4));
    let left_kernel = d2.transpose().kernel();
    let mut d1 = BinaryMatrix::zeros(m0, n);
    for i in 0..m0 {
        for b in 0..left_kernel.rows() {
            if rng.random_bool(0.5) {
                for j in left_kernel.row_support(b) {
                    d1.flip(i, j);
                }
            }
        }
    }
    CssCode::from_boundaries(d2, d1).expect("left-kernel rows annihilate ∂_2")
}

/// Foliates a CSS code into a length-3 complex over `t` layers:
///
/// ```text
/// C_2^t  --δ3-->  (C_2 ⊕ C_1)^t  --δ2-->  (C_0 ⊕ C_1)^t  --δ1-->  C_0^t
/// ```
///
/// Layer `i` links to layer `i + 1` through identity blocks; the last layer
/// only carries the terms local to it. Within a layer the summands are laid
/// out in the order written above.
pub fn foliate(code: &CssCode, t: usize) -> Result<ChainComplex, ComplexError> {
    if t == 0 {
        return Err(ComplexError::ZeroLayers);
    }
    let (d2, d1) = (code.d2(), code.d1());
    let n2 = code.complex.dim(2);
    let n1 = code.complex.dim(1);
    let n0 = code.complex.dim(0);
    let s3 = n2;
    let s2 = n2 + n1;
    let s1 = n0 + n1;
    let s0 = n0;

    let mut m3 = BinaryMatrix::zeros(t * s2, t * s3);
    let mut m2 = BinaryMatrix::zeros(t * s1, t * s2);
    let mut m1 = BinaryMatrix::zeros(t * s0, t * s1);
    let id2 = BinaryMatrix::identity(n2);
    let id1 = BinaryMatrix::identity(n1);
    let id0 = BinaryMatrix::identity(n0);

    for i in 0..t {
        let next = (i + 1 < t).then_some(i + 1);

        // δ3: C_2 of layer i -> C_2 of layers i, i+1 and C_1 of layer i.
        m3.add_block(i * s2, i * s3, &id2);
        if let Some(j) = next {
            m3.add_block(j * s2, i * s3, &id2);
        }
        m3.add_block(i * s2 + n2, i * s3, d2);

        // δ2 on the C_2 summand: ∂_2 into C_1 of the same layer.
        m2.add_block(i * s1 + n0, i * s2, d2);
        // δ2 on the C_1 summand: identity into C_1 of layers i, i+1, ∂_1 into C_0.
        m2.add_block(i * s1 + n0, i * s2 + n2, &id1);
        if let Some(j) = next {
            m2.add_block(j * s1 + n0, i * s2 + n2, &id1);
        }
        m2.add_block(i * s1, i * s2 + n2, d1);

        // δ1 on the C_0 summand: identity into layers i, i+1.
        m1.add_block(i * s0, i * s1, &id0);
        if let Some(j) = next {
            m1.add_block(j * s0, i * s1, &id0);
        }
        // δ1 on the C_1 summand: ∂_1 into the same layer.
        m1.add_block(i * s0, i * s1 + n0, d1);
    }
    ChainComplex::new(vec![m3, m2, m1])
}

/// Edges of the cluster-state graph of a length-3 complex: `(dual, primal)`
/// pairs with `dual` indexing `C_2` and `primal` indexing `C_1`, one per
/// nonzero entry of `∂_2`, sorted.
pub fn graph_state_edges(complex: &ChainComplex) -> Result<Vec<(usize, usize)>, ComplexError> {
    if complex.length() != 3 {
        return Err(ComplexError::NotLengthThree(complex.length()));
    }
    let d2 = complex.boundary(2);
    let mut edges = Vec::with_capacity(d2.count_ones());
    for primal in 0..d2.rows() {
        for dual in d2.row_support(primal) {
            edges.push((dual, primal));
        }
    }
    edges.sort_unstable();
    Ok(edges)
}
