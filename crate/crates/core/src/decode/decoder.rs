use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::blossom::max_weight_matching;
use super::noise::{edge_probability, NoiseParams, WeightScheme};
use super::DecodeError;
use crate::lattice::{DecoderGraph, Seam};

/// Matching weights are `round(weight * WEIGHT_SCALE)` so that path sums and
/// the blossom algorithm run in exact integer arithmetic.
pub const WEIGHT_SCALE: f64 = (1u64 << 20) as f64;

/// Number of nearest defects each defect is offered to the matching before
/// the optimality certificate decides whether more pairs are needed.
const NEAREST: usize = 8;

const NONE: u32 = u32::MAX;
const INF: i64 = i64::MAX;

/// A decoder graph with edge probabilities and integer weights for one
/// noise setting. Edges with zero probability never fire and are left out
/// of the matching graph.
#[derive(Debug, Clone)]
pub struct DecodingModel {
    num_vertices: usize,
    ends: Vec<(u32, u32)>,
    seams: Vec<Seam>,
    probs: Vec<f64>,
    weights: Vec<i64>,
    /// Active edges grouped by probability, for sampling.
    groups: Vec<(f64, Vec<u32>)>,
    adj_start: Vec<u32>,
    adj: Vec<(u32, u32)>,
    table: Option<DistanceTable>,
}

/// All shortest distances of a translation-invariant graph, stored once per
/// vertex of the unit cell.
#[derive(Debug, Clone)]
struct DistanceTable {
    l: usize,
    cell_vertices: usize,
    /// `dist[t * V + w]` is the distance from vertex `t` of cell 0 to `w`.
    dist: Vec<i64>,
    seam: Vec<Seam>,
}

impl DistanceTable {
    fn coords(&self, v: usize) -> [usize; 3] {
        let c = v / self.cell_vertices;
        let l = self.l;
        [c % l, (c / l) % l, c / (l * l)]
    }

    /// Distance and seam parity of a shortest path from `u` to `v`: the path
    /// from the translate of `u` in cell 0, shifted back. The shift flips the
    /// seam bit of every axis along which `v` lies below `u`.
    fn lookup(&self, u: usize, v: usize) -> (i64, Seam) {
        let l = self.l;
        let (cu, cv) = (self.coords(u), self.coords(v));
        let mut cell = [0; 3];
        let mut carry = 0;
        for d in 0..3 {
            cell[d] = (cv[d] + l - cu[d]) % l;
            if cv[d] < cu[d] {
                carry |= 1 << d;
            }
        }
        let w = (cell[0] + l * (cell[1] + l * cell[2])) * self.cell_vertices + v % self.cell_vertices;
        let k = (u % self.cell_vertices) * self.cell_vertices * l * l * l + w;
        (self.dist[k], self.seam[k] ^ carry)
    }
}

impl DecodingModel {
    pub fn new(graph: &DecoderGraph, noise: &NoiseParams, scheme: WeightScheme) -> DecodingModel {
        let probs: Vec<f64> = graph.edges.iter().map(|e| edge_probability(e, noise)).collect();
        let weights: Vec<i64> = probs
            .iter()
            .map(|&p| if p > 0.0 { (scheme.weight(p) * WEIGHT_SCALE).round() as i64 } else { INF })
            .collect();
        let mut groups: Vec<(f64, Vec<u32>)> = Vec::new();
        for (i, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            match groups.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(i as u32),
                None => groups.push((p, vec![i as u32])),
            }
        }
        let n = graph.num_vertices;
        let mut degree = vec![0u32; n + 1];
        for (e, &p) in graph.edges.iter().zip(&probs) {
            if p > 0.0 {
                degree[e.u as usize] += 1;
                degree[e.v as usize] += 1;
            }
        }
        let mut adj_start = vec![0u32; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + degree[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, 0); adj_start[n] as usize];
        for (i, (e, &p)) in graph.edges.iter().zip(&probs).enumerate() {
            if p > 0.0 {
                adj[fill[e.u as usize] as usize] = (e.v, i as u32);
                fill[e.u as usize] += 1;
                adj[fill[e.v as usize] as usize] = (e.u, i as u32);
                fill[e.v as usize] += 1;
            }
        }
        let mut model = DecodingModel {
            num_vertices: n,
            ends: graph.edges.iter().map(|e| (e.u, e.v)).collect(),
            seams: graph.edges.iter().map(|e| e.seam).collect(),
            probs,
            weights,
            groups,
            adj_start,
            adj,
            table: None,
        };
        let ncell = graph.l * graph.l * graph.l;
        if graph.l >= 2 && n > 0 && n % ncell == 0 && model.translation_invariant(graph.l, n / ncell) {
            let cell_vertices = n / ncell;
            let mut dist = Vec::with_capacity(cell_vertices * n);
            let mut seam = Vec::with_capacity(cell_vertices * n);
            let mut dec = Decoder::new(&model);
            for t in 0..cell_vertices {
                dec.search(t as u32);
                let g = dec.generation;
                for v in 0..n {
                    let reached = dec.stamp[v] == g;
                    dist.push(if reached { dec.dist[v] } else { INF });
                    seam.push(if reached { dec.seam[v] } else { 0 });
                }
            }
            model.table = Some(DistanceTable { l: graph.l, cell_vertices, dist, seam });
        }
        model
    }

    /// Whether shifting by one cell along each axis maps the active edges,
    /// with their weights and seam bits, onto themselves.
    fn translation_invariant(&self, l: usize, cell_vertices: usize) -> bool {
        let coord = |v: u32, d: usize| (v as usize / cell_vertices) / l.pow(d as u32) % l;
        let key = |u: u32, v: u32, s: Seam, w: i64| (u.min(v), u.max(v), s, w);
        let mut base: Vec<_> = (0..self.ends.len())
            .filter(|&e| self.weights[e] != INF)
            .map(|e| key(self.ends[e].0, self.ends[e].1, self.seams[e], self.weights[e]))
            .collect();
        base.sort_unstable();
        for d in 0..3 {
            let step = (cell_vertices * l.pow(d as u32)) as u32;
            let shift = |v: u32| if coord(v, d) == l - 1 { v + step - step * l as u32 } else { v + step };
            let mut moved: Vec<_> = base
                .iter()
                .map(|&(u, v, s, w)| {
                    let flip = ((coord(u, d) == l - 1) ^ (coord(v, d) == l - 1)) as Seam;
                    key(shift(u), shift(v), s ^ (flip << d), w)
                })
                .collect();
            moved.sort_unstable();
            if moved != base {
                return false;
            }
        }
        true
    }

    /// Whether pair distances come from a precomputed per-cell table rather
    /// than per-syndrome searches.
    pub fn has_distance_table(&self) -> bool {
        self.table.is_some()
    }

    /// Tabulated distance and seam parity from `u` to `v`; `None` without a
    /// table or if `v` is unreachable.
    pub fn tabulated_distance(&self, u: u32, v: u32) -> Option<(i64, Seam)> {
        let (d, s) = self.table.as_ref()?.lookup(u as usize, v as usize);
        (d != INF).then_some((d, s))
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Excitation probability of every decoder edge.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Integer weight of every decoder edge (`i64::MAX` if it never fires).
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Draws the set of excited edges, sorted ascending. Within each group of
    /// equal probability the gaps between excited edges are geometric.
    pub fn sample<R: Rng>(&self, rng: &mut R, out: &mut Vec<u32>) {
        out.clear();
        for (p, edges) in &self.groups {
            if *p >= 1.0 {
                out.extend_from_slice(edges);
                continue;
            }
            let log_q = (-p).ln_1p();
            let mut pos: usize = 0;
            loop {
                let u: f64 = rng.random();
                let skip = ((-u).ln_1p() / log_q).floor();
                if skip >= (edges.len() - pos) as f64 {
                    break;
                }
                pos += skip as usize;
                out.push(edges[pos]);
                pos += 1;
            }
        }
        out.sort_unstable();
    }

    /// Odd-degree vertices of an edge set, and its seam parity.
    pub fn syndrome(&self, edges: &[u32]) -> (Vec<u32>, Seam) {
        let mut odd: Vec<u32> = Vec::with_capacity(2 * edges.len());
        let mut seam = 0;
        for &e in edges {
            let (u, v) = self.ends[e as usize];
            odd.push(u);
            odd.push(v);
            seam ^= self.seams[e as usize];
        }
        odd.sort_unstable();
        let mut defects = Vec::with_capacity(odd.len());
        let mut i = 0;
        while i < odd.len() {
            let mut j = i;
            while j < odd.len() && odd[j] == odd[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                defects.push(odd[i]);
            }
            i = j;
        }
        (defects, seam)
    }
}

/// Outcome of decoding one syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    /// Matched defect pairs as indices into the defect list, `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Total integer weight of the matching.
    pub weight: i64,
    /// Seam parity of the union of the chosen shortest paths.
    pub seam: Seam,
}

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Homology class of error plus correction; zero means success.
    pub class: Seam,
    pub defects: usize,
}

/// Reusable per-thread decoding state.
pub struct Decoder<'m> {
    model: &'m DecodingModel,
    dist: Vec<i64>,
    seam: Vec<Seam>,
    parent: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    heap: BinaryHeap<Reverse<(i64, u32)>>,
    errors: Vec<u32>,
    pair_dist: Vec<i64>,
    pair_seam: Vec<Seam>,
}

impl<'m> Decoder<'m> {
    pub fn new(model: &'m DecodingModel) -> Self {
        let n = model.num_vertices;
        Decoder {
            model,
            dist: vec![0; n],
            seam: vec![0; n],
            parent: vec![NONE; n],
            stamp: vec![0; n],
            generation: 0,
            heap: BinaryHeap::new(),
            errors: Vec::new(),
            pair_dist: Vec::new(),
            pair_seam: Vec::new(),
        }
    }

    /// Dijkstra from `src` over the whole component. Afterwards a vertex was
    /// reached iff its stamp equals the current generation.
    fn search(&mut self, src: u32) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        let g = self.generation;
        let m = self.model;
        self.heap.clear();
        self.dist[src as usize] = 0;
        self.seam[src as usize] = 0;
        self.parent[src as usize] = NONE;
        self.stamp[src as usize] = g;
        self.heap.push(Reverse((0, src)));
        while let Some(Reverse((d, v))) = self.heap.pop() {
            let vi = v as usize;
            if d > self.dist[vi] {
                continue;
            }
            let (a, b) = (m.adj_start[vi] as usize, m.adj_start[vi + 1] as usize);
            for &(w, e) in &m.adj[a..b] {
                let wi = w as usize;
                let nd = d + m.weights[e as usize];
                if self.stamp[wi] != g || nd < self.dist[wi] {
                    self.stamp[wi] = g;
                    self.dist[wi] = nd;
                    self.seam[wi] = self.seam[vi] ^ m.seams[e as usize];
                    self.parent[wi] = e;
                    self.heap.push(Reverse((nd, w)));
                }
            }
        }
    }

    /// Shortest-path distance and seam parity from `src` to every vertex
    /// (`None` if unreachable).
    pub fn distances_from(&mut self, src: u32) -> Vec<Option<(i64, Seam)>> {
        self.search(src);
        let g = self.generation;
        (0..self.model.num_vertices)
            .map(|v| (self.stamp[v] == g).then(|| (self.dist[v], self.seam[v])))
            .collect()
    }

    /// A shortest path from `a` to `b` as decoder-edge indices.
    pub fn shortest_path(&mut self, a: u32, b: u32) -> Option<(i64, Vec<u32>)> {
        self.search(a);
        if self.stamp[b as usize] != self.generation {
            return None;
        }
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let e = self.parent[v as usize];
            path.push(e);
            let (x, y) = self.model.ends[e as usize];
            v = if x == v { y } else { x };
        }
        path.reverse();
        Some((self.dist[b as usize], path))
    }

    /// Fills the defect distance matrix, `INF` for unreachable pairs.
    fn pair_distances(&mut self, defects: &[u32]) {
        let n = defects.len();
        self.pair_dist.clear();
        self.pair_dist.resize(n * n, 0);
        self.pair_seam.clear();
        self.pair_seam.resize(n * n, 0);
        if let Some(t) = &self.model.table {
            for i in 0..n {
                for j in i + 1..n {
                    let (d, s) = t.lookup(defects[i] as usize, defects[j] as usize);
                    self.pair_dist[i * n + j] = d;
                    self.pair_dist[j * n + i] = d;
                    self.pair_seam[i * n + j] = s;
                    self.pair_seam[j * n + i] = s;
                }
            }
        } else {
            for i in 0..n {
                self.search(defects[i]);
                for j in 0..n {
                    let v = defects[j] as usize;
                    let reached = self.stamp[v] == self.generation;
                    self.pair_dist[i * n + j] = if reached { self.dist[v] } else { INF };
                    self.pair_seam[i * n + j] = if reached { self.seam[v] } else { 0 };
                }
            }
        }
    }

    /// Minimum-weight perfect matching of `defects` under graph distance.
    ///
    /// The matching is first solved on the few nearest partners of each
    /// defect. It is optimal on the complete graph once every left-out pair
    /// has non-negative reduced cost under the matching duals; violating
    /// pairs are added and the matching is recomputed.
    pub fn decode(&mut self, defects: &[u32]) -> Result<Correction, DecodeError> {
        let n = defects.len();
        if n == 0 {
            return Ok(Correction { pairs: Vec::new(), weight: 0, seam: 0 });
        }
        if n % 2 == 1 {
            return Err(DecodeError::OddDefects(n));
        }
        self.pair_distances(defects);
        let (dist, seams) = (&self.pair_dist, &self.pair_seam);
        let top = dist.iter().copied().filter(|&d| d != INF).max().unwrap_or(0) + 1;
        let w = |d: i64| 2 * (top - d);

        let mut chosen = vec![false; n * n];
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        let add = |i: usize, j: usize, chosen: &mut [bool], edges: &mut Vec<_>| {
            let (a, b) = (i.min(j), i.max(j));
            if !chosen[a * n + b] && dist[a * n + b] != INF {
                chosen[a * n + b] = true;
                edges.push((a, b, w(dist[a * n + b])));
            }
        };
        let mut near: Vec<usize> = Vec::with_capacity(n);
        let mut offer = |k: usize, chosen: &mut [bool], edges: &mut Vec<_>| {
            for i in 0..n {
                near.clear();
                near.extend((0..n).filter(|&j| j != i && dist[i * n + j] != INF));
                let key = |&j: &usize| (dist[i * n + j], j);
                if near.len() > k {
                    near.select_nth_unstable_by_key(k, key);
                    near.truncate(k);
                }
                for &j in near.iter() {
                    add(i, j, chosen, edges);
                }
            }
        };
        let mut k = NEAREST.min(n - 1);
        offer(k, &mut chosen, &mut edges);
        loop {
            let m = max_weight_matching(n, &edges, true);
            if m.mate.iter().any(Option::is_none) {
                if k >= n - 1 {
                    return Err(DecodeError::Unmatchable);
                }
                k = (2 * k).min(n - 1);
                offer(k, &mut chosen, &mut edges);
                continue;
            }
            let before = edges.len();
            for i in 0..n {
                for j in i + 1..n {
                    let d = dist[i * n + j];
                    if !chosen[i * n + j] && d != INF && m.dual[i] + m.dual[j] < 2 * w(d) {
                        add(i, j, &mut chosen, &mut edges);
                    }
                }
            }
            if edges.len() == before {
                let mut pairs = Vec::with_capacity(n / 2);
                let (mut total, mut seam) = (0, 0);
                for (i, mate) in m.mate.iter().enumerate() {
                    let j = mate.expect("matching is perfect");
                    if i < j {
                        pairs.push((i, j));
                        total += dist[i * n + j];
                        seam ^= seams[i * n + j];
                    }
                }
                return Ok(Correction { pairs, weight: total, seam });
            }
        }
    }

    /// Samples, decodes and classifies trial `index` of the stream `seed`.
    /// The random stream depends only on `(seed, index)`.
    pub fn run_trial(&mut self, seed: u64, index: u64) -> Result<TrialOutcome, DecodeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut errors = std::mem::take(&mut self.errors);
        self.model.sample(&mut rng, &mut errors);
        let (defects, error_seam) = self.model.syndrome(&errors);
        self.errors = errors;
        let c = self.decode(&defects)?;
        Ok(TrialOutcome { class: error_seam ^ c.seam, defects: defects.len() })
    }

    /// The edges excited in the most recent [`run_trial`](Self::run_trial).
    pub fn last_errors(&self) -> &[u32] {
        &self.errors
    }
}

/// Minimum-weight perfect matching on a complete graph given by a symmetric
/// distance matrix (`i64::MAX` marks a missing pair). Returns sorted pairs.
pub fn mwpm(dist: &[Vec<i64>]) -> Result<Vec<(usize, usize)>, DecodeError> {
    let n = dist.len();
    if n % 2 == 1 {
        return Err(DecodeError::OddDefects(n));
    }
    let top = dist
        .iter()
        .flatten()
        .copied()
        .filter(|&d| d != INF)
        .max()
        .unwrap_or(0)
        + 1;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != INF {
                edges.push((i, j, 2 * (top - dist[i][j])));
            }
        }
    }
    let m = max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, mate) in m.mate.iter().enumerate() {
        match mate {
            Some(j) if i < *j => pairs.push((i, *j)),
            Some(_) => {}
            None => return Err(DecodeError::Unmatchable),
        }
    }
    Ok(pairs)
}
