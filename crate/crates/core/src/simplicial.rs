//! Finite simplicial complexes, vertex tuples and stars.
//!
//! Vertices are identified by their position in the complex's label list;
//! that position is also the total order used for all signs. A simplex is a
//! bitmask over vertex positions, so complexes are limited to
//! [`MAX_VERTICES`] vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{rank, Rational, RationalMatrix};

pub const MAX_VERTICES: usize = 64;

/// A non-empty (or, for bookkeeping, empty) set of vertex positions.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(u64);

impl Simplex {
    pub const EMPTY: Simplex = Simplex(0);

    pub fn from_mask(mask: u64) -> Self {
        Simplex(mask)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        Simplex(vs.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(1u64 << v)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Dimension: cardinality minus one.
    pub fn dim(self) -> isize {
        self.len() as isize - 1
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & (1u64 << v) != 0
    }

    pub fn is_subset_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Simplex) -> Simplex {
        Simplex(self.0 & other.0)
    }

    pub fn union(self, other: Simplex) -> Simplex {
        Simplex(self.0 | other.0)
    }

    pub fn without(self, v: usize) -> Simplex {
        Simplex(self.0 & !(1u64 << v))
    }

    /// Vertices in increasing order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(v)
            }
        })
    }

    pub fn max_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// All non-empty subsets.
    pub fn faces(self) -> impl Iterator<Item = Simplex> {
        let full = self.0;
        let mut sub = full;
        let mut done = full == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Simplex(sub);
            sub = (sub - 1) & full;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<usize> = self.vertices().collect();
        write!(f, "{vs:?}")
    }
}

/// A sequence `(u_0, …, u_p)` of vertex positions, `p ≥ -1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct VertexTuple(Vec<usize>);

impl VertexTuple {
    pub fn new(entries: Vec<usize>) -> Self {
        VertexTuple(entries)
    }

    /// The unique element of `T_{-1}`.
    pub fn empty() -> Self {
        VertexTuple(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The index `p`, i.e. length minus one.
    pub fn p(&self) -> isize {
        self.0.len() as isize - 1
    }

    /// `∂_i u`: drop the `i`-th entry.
    pub fn face(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e.remove(i);
        VertexTuple(e)
    }

    /// `v * u`: prepend `v`.
    pub fn cone(&self, v: usize) -> Self {
        let mut e = Vec::with_capacity(self.0.len() + 1);
        e.push(v);
        e.extend_from_slice(&self.0);
        VertexTuple(e)
    }

    /// The set of entries, or `None` if some entry repeats.
    pub fn entry_set(&self) -> Option<Simplex> {
        let mut m = 0u64;
        for &v in &self.0 {
            let bit = 1u64 << v;
            if m & bit != 0 {
                return None;
            }
            m |= bit;
        }
        Some(Simplex(m))
    }

    pub fn support(&self) -> Simplex {
        Simplex::from_vertices(self.0.iter().copied())
    }

    /// Sorts the entries and returns the sign of the sorting permutation;
    /// `None` when an entry repeats (antisymmetric families vanish there).
    pub fn sorted_with_sign(&self) -> Option<(i64, VertexTuple)> {
        let mut e = self.0.clone();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..e.len() {
            let mut j = i;
            while j > 0 && e[j - 1] > e[j] {
                e.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, VertexTuple(e)))
    }

    /// Applies a permutation: entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.0.len());
        VertexTuple(perm.iter().map(|&i| self.0[i]).collect())
    }
}

/// Sign of a permutation given as an image list.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A downward-closed set of simplices over the vertex positions of some
/// ambient complex. Its vertex set is the union of its simplices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subcomplex {
    simplices: BTreeSet<Simplex>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of the given simplices.
    pub fn closure<I: IntoIterator<Item = Simplex>>(generators: I) -> Self {
        let mut simplices = BTreeSet::new();
        for s in generators {
            if simplices.contains(&s) {
                continue;
            }
            simplices.extend(s.faces());
        }
        Subcomplex { simplices }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.simplices.contains(&s)
    }

    pub fn vertex_set(&self) -> Simplex {
        Simplex(self.simplices.iter().fold(0, |m, s| m | s.0))
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.vertex_set().vertices().collect()
    }

    pub fn is_subcomplex_of(&self, other: &Subcomplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    /// Simplices not properly contained in another simplex, in the set order.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .copied()
            .filter(|&s| !self.simplices.iter().any(|&t| t != s && s.is_subset_of(t)))
            .collect()
    }

    pub fn simplices_of_dim(&self, d: usize) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = self.simplices.iter().copied().filter(|s| s.len() == d + 1).collect();
        v.sort_by_key(|s| s.vertices().collect::<Vec<_>>());
        v
    }

    pub fn dimension(&self) -> isize {
        self.simplices.iter().map(|s| s.dim()).max().unwrap_or(-1)
    }

    /// `St_Y u` for `Y = self`: the closure of the simplices containing every
    /// entry of `u`. The whole complex for the empty tuple; empty when some
    /// entry is not a vertex or the entries do not span a simplex.
    pub fn star(&self, u: &VertexTuple) -> Subcomplex {
        if u.is_empty() {
            return self.clone();
        }
        let s = u.support();
        if !self.contains(s) {
            return Subcomplex::empty();
        }
        Subcomplex::closure(self.simplices.iter().copied().filter(|&t| s.is_subset_of(t)))
    }

    /// Inclusion-minimal vertex sets (within the vertex set) that are not simplices.
    pub fn minimal_nonfaces(&self) -> Vec<Simplex> {
        let verts = self.vertices();
        let max_len = (self.dimension() + 2).max(0) as usize;
        let mut out = Vec::new();
        for k in 2..=max_len.min(verts.len()) {
            for combo in combinations(&verts, k) {
                let s = Simplex::from_vertices(combo.iter().copied());
                if !self.contains(s) && combo.iter().all(|&v| self.contains(s.without(v))) {
                    out.push(s);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Subcomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.maximal_simplices()).finish()
    }
}

/// All `k`-element subsets of `items`, lexicographic in input order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// A named finite simplicial complex with an ordered vertex label list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    name: String,
    labels: Vec<String>,
    full: Subcomplex,
}

impl SimplicialComplex {
    /// Downward closure of `maximal` over the ordered vertex list `vertices`.
    /// Every listed vertex becomes a 0-simplex.
    pub fn build<S: AsRef<str>>(name: &str, vertices: &[S], maximal: &[Vec<S>]) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: vertices.len(), max: MAX_VERTICES });
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateVertex(v.as_ref().to_string()));
            }
        }
        let mut gens: Vec<Simplex> = (0..vertices.len()).map(Simplex::vertex).collect();
        for s in maximal {
            if s.is_empty() {
                return Err(Error::EmptySimplex);
            }
            let mut m = Simplex::EMPTY;
            for v in s {
                let i = *index.get(v.as_ref()).ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))?;
                m = m.union(Simplex::vertex(i));
            }
            gens.push(m);
        }
        Ok(SimplicialComplex {
            name: name.to_string(),
            labels: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            full: Subcomplex::closure(gens),
        })
    }

    /// Same as [`build`](Self::build) with vertices labelled `"1"`, `"2"`, ….
    pub fn from_index_lists(name: &str, n_vertices: usize, maximal: &[&[usize]]) -> Result<Self> {
        let labels: Vec<String> = (1..=n_vertices).map(|i| i.to_string()).collect();
        let maximal: Vec<Vec<String>> = maximal
            .iter()
            .map(|s| s.iter().map(|&v| v.to_string()).collect())
            .collect();
        Self::build(name, &labels, &maximal)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn tuple(&self, labels: &[&str]) -> Result<VertexTuple> {
        Ok(VertexTuple(labels.iter().map(|l| self.index_of(l)).collect::<Result<_>>()?))
    }

    pub fn simplex(&self, labels: &[&str]) -> Result<Simplex> {
        Ok(Simplex::from_vertices(labels.iter().map(|l| self.index_of(l)).collect::<Result<Vec<_>>>()?))
    }

    pub fn as_subcomplex(&self) -> &Subcomplex {
        &self.full
    }

    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        self.full.simplices()
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        self.full.maximal_simplices()
    }

    /// `St u`. Errors if an entry is not a vertex of the complex.
    pub fn star(&self, u: &VertexTuple) -> Result<Subcomplex> {
        if let Some(&v) = u.entries().iter().find(|&&v| v >= self.n_vertices()) {
            return Err(Error::VertexOutOfRange(v));
        }
        Ok(self.full.star(u))
    }

    pub fn minimal_nonfaces(&self) -> Vec<Simplex> {
        self.full.minimal_nonfaces()
    }

    /// Strictly increasing tuples of length `p + 1`; `[()]` for `p = -1`.
    pub fn increasing_tuples(&self, p: isize) -> Vec<VertexTuple> {
        increasing_tuples(self.n_vertices(), p)
    }

    pub fn simplex_labels(&self, s: Simplex) -> Vec<String> {
        s.vertices().map(|v| self.labels[v].clone()).collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        let mut maximal: Vec<Vec<usize>> =
            self.maximal_simplices().into_iter().map(|s| s.vertices().collect()).collect();
        maximal.sort();
        ComplexFile {
            name: self.name.clone(),
            vertices: self.labels.clone(),
            maximal_simplices: maximal
                .into_iter()
                .map(|s| s.into_iter().map(|v| self.labels[v].clone()).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::build(&file.name, &file.vertices, &file.maximal_simplices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("complex serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&file)
    }
}

/// On-disk complex description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub name: String,
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

pub fn increasing_tuples(n_vertices: usize, p: isize) -> Vec<VertexTuple> {
    if p < -1 {
        return Vec::new();
    }
    let all: Vec<usize> = (0..n_vertices).collect();
    combinations(&all, (p + 1) as usize).into_iter().map(VertexTuple).collect()
}

/// Coboundary of ordered simplicial cochains `C^q → C^{q+1}`.
pub fn simplicial_coboundary(y: &Subcomplex, q: usize) -> RationalMatrix {
    let src = y.simplices_of_dim(q);
    let dst = y.simplices_of_dim(q + 1);
    let col: BTreeMap<Simplex, usize> = src.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = RationalMatrix::zeros(dst.len(), src.len());
    for (r, s) in dst.iter().enumerate() {
        for (i, v) in s.vertices().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m[(r, col[&s.without(v)])] = Rational::from_int(sign);
        }
    }
    m
}

/// Ranks of simplicial cohomology with rational coefficients in degrees `0..=q_max`.
pub fn simplicial_betti(y: &Subcomplex, q_max: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=q_max).map(|q| rank(&simplicial_coboundary(y, q))).collect();
    (0..=q_max)
        .map(|q| {
            let n = y.simplices_of_dim(q).len();
            let prev = if q == 0 { 0 } else { ranks[q - 1] };
            n - ranks[q] - prev
        })
        .collect()
}
