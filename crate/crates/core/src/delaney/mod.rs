//! Delaney symbols of 2- and 3-dimensional tilings.
//!
//! A symbol on `N` elements carries `d + 1` involutions `r_0..r_d` and, for
//! each consecutive pair `(i, i+1)`, a positive label `m_{i,i+1}` per element.
//! Non-consecutive pairs are implicitly `2` (the symbol is regular), so
//! `(r_i r_j)^2` must fix every element when `|i - j| > 1`.

mod enumerate;
mod text;

pub use enumerate::{
    count_candidates, enumerate_candidates, reflection_map, Boundary, Candidate, Candidates,
    EnumerationError,
};

use std::collections::VecDeque;

use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed symbol: {0}")]
    Structure(String),
    #[error("r{generator} is not an involution at element {element}")]
    NotInvolution { generator: usize, element: usize },
    #[error("element {element} is not reachable from element 0")]
    Disconnected { element: usize },
    #[error("m{i}{j} must be positive, element {element} has 0", j = i + 1)]
    NonPositiveLabel { i: usize, element: usize },
    #[error("m{i}{j} differs between elements {a} and {b} of one orbit", j = i + 1)]
    LabelNotConstant { i: usize, a: usize, b: usize },
    #[error("(r{i} r{j})^{label} does not fix element {element} (its order there is {order})", j = i + 1)]
    OrderNotDividing {
        i: usize,
        element: usize,
        label: u32,
        order: u32,
    },
    #[error("(r{i} r{j})^2 does not fix element {element}")]
    NotRegular { i: usize, j: usize, element: usize },
    #[error("operation needs a {expected}-dimensional symbol, got d = {found}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DelaneySymbol {
    dim: usize,
    ops: Vec<Vec<usize>>,
    labels: Vec<Vec<u32>>,
}

impl DelaneySymbol {
    /// Assembles a symbol, checking only the array shapes. Use
    /// [`validate`](Self::validate) for the combinatorial conditions.
    pub fn new(dim: usize, ops: Vec<Vec<usize>>, labels: Vec<Vec<u32>>) -> Result<Self, SymbolError> {
        if dim != 2 && dim != 3 {
            return Err(SymbolError::Structure(format!("dimension must be 2 or 3, got {dim}")));
        }
        if ops.len() != dim + 1 || labels.len() != dim {
            return Err(SymbolError::Structure(format!(
                "d = {dim} needs {} generators and {dim} label vectors",
                dim + 1
            )));
        }
        let n = ops[0].len();
        if n == 0 {
            return Err(SymbolError::Structure("a symbol needs at least one element".into()));
        }
        for (i, r) in ops.iter().enumerate() {
            if r.len() != n {
                return Err(SymbolError::Structure(format!("r{i} has {} entries, expected {n}", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= n) {
                return Err(SymbolError::Structure(format!("r{i} maps to {bad}, outside 0..{n}")));
            }
        }
        for (i, m) in labels.iter().enumerate() {
            if m.len() != n {
                return Err(SymbolError::Structure(format!(
                    "m{}{} has {} entries, expected {n}",
                    i,
                    i + 1,
                    m.len()
                )));
            }
        }
        Ok(DelaneySymbol { dim, ops, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.ops[0].len()
    }

    /// `r_i(s)`.
    #[inline]
    pub fn op(&self, i: usize, s: usize) -> usize {
        self.ops[i][s]
    }

    /// `m_{i,i+1}(s)`.
    #[inline]
    pub fn label(&self, i: usize, s: usize) -> u32 {
        self.labels[i][s]
    }

    pub fn ops(&self) -> &[Vec<usize>] {
        &self.ops
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    /// `m_{ij}` for any pair; non-consecutive pairs are 2, `m_ii = 1`.
    pub fn m(&self, i: usize, j: usize, s: usize) -> u32 {
        let (i, j) = (i.min(j), i.max(j));
        match j - i {
            0 => 1,
            1 => self.labels[i][s],
            _ => 2,
        }
    }

    pub(crate) fn check_involutions(&self) -> Result<(), SymbolError> {
        for (g, r) in self.ops.iter().enumerate() {
            if let Some(element) = (0..r.len()).find(|&s| r[r[s]] != s) {
                return Err(SymbolError::NotInvolution { generator: g, element });
            }
        }
        Ok(())
    }

    /// Checks every defining condition, returning the first violation found.
    pub fn validate(&self) -> Result<(), SymbolError> {
        self.check_involutions()?;
        let n = self.size();

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(s) = queue.pop_front() {
            for r in &self.ops {
                if !seen[r[s]] {
                    seen[r[s]] = true;
                    queue.push_back(r[s]);
                }
            }
        }
        if let Some(element) = seen.iter().position(|&x| !x) {
            return Err(SymbolError::Disconnected { element });
        }

        for i in 0..self.dim {
            if let Some(element) = self.labels[i].iter().position(|&m| m == 0) {
                return Err(SymbolError::NonPositiveLabel { i, element });
            }
            for orbit in self.orbits(i, i + 1) {
                let a = orbit[0];
                if let Some(&b) = orbit.iter().find(|&&b| self.labels[i][b] != self.labels[i][a]) {
                    return Err(SymbolError::LabelNotConstant { i, a, b });
                }
            }
            for s in 0..n {
                let order = self.pair_order(i, i + 1, s);
                let label = self.labels[i][s];
                if label % order != 0 {
                    return Err(SymbolError::OrderNotDividing { i, element: s, label, order });
                }
            }
        }

        for i in 0..=self.dim {
            for j in i + 2..=self.dim {
                for s in 0..n {
                    if self.pair_order(i, j, s) > 2 {
                        return Err(SymbolError::NotRegular { i, j, element: s });
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest `m >= 1` with `(r_i r_j)^m (s) = s`.
    pub fn pair_order(&self, i: usize, j: usize, s: usize) -> u32 {
        let mut t = s;
        let mut m = 0;
        loop {
            t = self.ops[i][self.ops[j][t]];
            m += 1;
            if t == s {
                return m;
            }
        }
    }

    /// Orbits of `⟨r_i, r_j⟩`, each sorted, ordered by smallest element.
    pub fn orbits(&self, i: usize, j: usize) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < orbit.len() {
                let s = orbit[k];
                for t in [self.ops[i][s], self.ops[j][s]] {
                    if !seen[t] {
                        seen[t] = true;
                        orbit.push(t);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// The dual symbol: `r_i <-> r_{d-i}` and `m_{i,i+1} <-> m_{d-i-1,d-i}`.
    pub fn dual(&self) -> DelaneySymbol {
        let mut ops = self.ops.clone();
        ops.reverse();
        let mut labels = self.labels.clone();
        labels.reverse();
        DelaneySymbol { dim: self.dim, ops, labels }
    }

    /// Checks that `map` is an isomorphism from `self` to `other`.
    pub fn is_isomorphism(&self, other: &DelaneySymbol, map: &[usize]) -> bool {
        let n = self.size();
        if self.dim != other.dim || other.size() != n || map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &t in map {
            if t >= n || std::mem::replace(&mut hit[t], true) {
                return false;
            }
        }
        (0..n).all(|s| {
            (0..=self.dim).all(|i| map[self.ops[i][s]] == other.ops[i][map[s]])
                && (0..self.dim).all(|i| self.labels[i][s] == other.labels[i][map[s]])
        })
    }

    /// Finds an isomorphism `self -> other` by fixing the image of element 0
    /// and propagating along the generators. Candidates for the image of 0
    /// are tried in ascending order, so the result is deterministic.
    /// Both symbols are assumed connected.
    pub fn find_isomorphism(&self, other: &DelaneySymbol) -> Option<Vec<usize>> {
        let n = self.size();
        if self.dim != other.dim || other.size() != n {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut queue = Vec::with_capacity(n);
        'anchor: for t0 in 0..n {
            map.fill(usize::MAX);
            used.fill(false);
            queue.clear();
            map[0] = t0;
            used[t0] = true;
            queue.push(0);
            let mut head = 0;
            while head < queue.len() {
                let s = queue[head];
                head += 1;
                let t = map[s];
                for i in 0..self.dim {
                    if self.labels[i][s] != other.labels[i][t] {
                        continue 'anchor;
                    }
                }
                for i in 0..=self.dim {
                    let (s2, t2) = (self.ops[i][s], other.ops[i][t]);
                    if map[s2] == usize::MAX {
                        if used[t2] {
                            continue 'anchor;
                        }
                        map[s2] = t2;
                        used[t2] = true;
                        queue.push(s2);
                    } else if map[s2] != t2 {
                        continue 'anchor;
                    }
                }
            }
            if queue.len() == n {
                return Some(map);
            }
        }
        None
    }

    /// An isomorphism to the dual symbol, if one exists.
    pub fn self_duality(&self) -> Option<Vec<usize>> {
        self.find_isomorphism(&self.dual())
    }

    pub fn is_self_dual(&self) -> bool {
        self.self_duality().is_some()
    }

    /// Euclidean test for a 2D symbol: `Σ_s (1/m01(s) + 1/m12(s)) = |S| / 2`,
    /// evaluated in exact rational arithmetic.
    pub fn euler_flat_2d(&self) -> Result<bool, SymbolError> {
        if self.dim != 2 {
            return Err(SymbolError::Dimension { expected: 2, found: self.dim });
        }
        let mut sum = Ratio::<i64>::from_integer(0);
        for s in 0..self.size() {
            sum += Ratio::new(1, self.labels[0][s] as i64) + Ratio::new(1, self.labels[1][s] as i64);
        }
        Ok(sum == Ratio::new(self.size() as i64, 2))
    }

    /// Applies a relabelling of elements: element `s` becomes `perm[s]`.
    pub fn relabel(&self, perm: &[usize]) -> DelaneySymbol {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut ops = vec![vec![0; n]; self.dim + 1];
        let mut labels = vec![vec![0; n]; self.dim];
        for s in 0..n {
            for i in 0..=self.dim {
                ops[i][perm[s]] = perm[self.ops[i][s]];
            }
            for i in 0..self.dim {
                labels[i][perm[s]] = self.labels[i][s];
            }
        }
        DelaneySymbol { dim: self.dim, ops, labels }
    }

    /// The single-element symbol with all generators fixing it.
    pub fn single(dim: usize, labels: &[u32]) -> Result<Self, SymbolError> {
        Self::new(dim, vec![vec![0]; dim + 1], labels.iter().map(|&m| vec![m]).collect())
    }
}

/// Symbols of a few classical tilings.
pub mod known {
    use super::DelaneySymbol;

    /// The primitive cubic honeycomb `{4,3,4}`.
    pub fn cubic() -> DelaneySymbol {
        DelaneySymbol::single(3, &[4, 3, 4]).unwrap()
    }

    /// The square tiling `{4,4}`.
    pub fn square() -> DelaneySymbol {
        DelaneySymbol::single(2, &[4, 4]).unwrap()
    }

    /// The icosahedron `{3,5}` seen as a tiling of the sphere.
    pub fn icosahedral() -> DelaneySymbol {
        DelaneySymbol::single(2, &[3, 5]).unwrap()
    }

    /// The truncated square tiling 4.8.8: one square flag orbit and two
    /// octagon flag orbits.
    pub fn truncated_square() -> DelaneySymbol {
        DelaneySymbol::new(
            2,
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2]],
            vec![vec![4, 8, 8], vec![3, 3, 3]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_symbols_validate() {
        for s in [known::cubic(), known::square(), known::icosahedral(), known::truncated_square()] {
            s.validate().unwrap();
        }
    }

    #[test]
    fn flatness() {
        assert_eq!(known::square().euler_flat_2d(), Ok(true));
        assert_eq!(known::truncated_square().euler_flat_2d(), Ok(true));
        assert_eq!(known::icosahedral().euler_flat_2d(), Ok(false));
        assert!(matches!(known::cubic().euler_flat_2d(), Err(SymbolError::Dimension { .. })));
    }

    #[test]
    fn cubic_is_self_dual_by_identity() {
        let c = known::cubic();
        assert_eq!(c.dual(), c);
        assert_eq!(c.self_duality(), Some(vec![0]));
    }

    #[test]
    fn truncated_square_is_not_self_dual() {
        let t = known::truncated_square();
        assert_eq!(t.dual().labels()[0], vec![3, 3, 3]);
        assert_eq!(t.dual().labels()[1], vec![4, 8, 8]);
        assert!(!t.is_self_dual());
    }

    #[test]
    fn wrong_label_breaks_order_condition() {
        // r1 r2 has order 3 on the single <r1,r2> orbit of 4.8.8.
        let t = known::truncated_square();
        let bad = DelaneySymbol::new(2, t.ops().to_vec(), vec![t.labels()[0].clone(), vec![4, 4, 4]]).unwrap();
        assert!(matches!(
            bad.validate(),
            Err(SymbolError::OrderNotDividing { i: 1, order: 3, label: 4, .. })
        ));
    }

    #[test]
    fn zero_label_rejected() {
        let s = DelaneySymbol::single(3, &[4, 0, 4]).unwrap();
        assert_eq!(s.validate(), Err(SymbolError::NonPositiveLabel { i: 1, element: 0 }));
    }

    #[test]
    fn non_regular_detected() {
        // r0 and r2 generate a 3-cycle on {0,1,2}.
        let s = DelaneySymbol::new(
            2,
            vec![vec![1, 0, 2], vec![0, 1, 2], vec![0, 2, 1]],
            vec![vec![2, 2, 1], vec![1, 2, 2]],
        )
        .unwrap();
        assert_eq!(s.validate(), Err(SymbolError::NotRegular { i: 0, j: 2, element: 0 }));
    }

    #[test]
    fn disconnected_detected() {
        let s = DelaneySymbol::new(2, vec![vec![0, 1]; 3], vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(s.validate(), Err(SymbolError::Disconnected { element: 1 }));
    }

    #[test]
    fn orbits_of_truncated_square() {
        let t = known::truncated_square();
        assert_eq!(t.orbits(0, 1), vec![vec![0], vec![1, 2]]);
        assert_eq!(t.orbits(1, 2), vec![vec![0, 1, 2]]);
        assert_eq!(t.orbits(0, 2), vec![vec![0, 1], vec![2]]);
    }
}
