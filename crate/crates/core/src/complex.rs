//! Finite abstract simplicial complexes over a fixed linear vertex order.
//!
//! Faces are stored in canonical (strictly increasing) form and each
//! dimension is indexed lexicographically, dimension `-1` included: the
//! empty face is always present so reduced cochains are available. Faces
//! of dimension at most `complete_skeleton_dim` are generated
//! combinatorially and located by their lexicographic rank instead of a
//! hash lookup.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::ModelSpec;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A face in canonical form: vertices strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonCanonicalFace(vertices));
        }
        Ok(Face(vertices))
    }

    /// Sorts and deduplicates arbitrary vertex lists.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Face(vertices)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertex(v: usize) -> Self {
        Face(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> i32 {
        self.0.len() as i32 - 1
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    /// The face with its `j`-th smallest vertex removed.
    pub fn without_position(&self, j: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(j);
        Face(v)
    }

    /// The face with vertex `v` added; `None` if `v` is already present.
    pub fn with_vertex(&self, v: usize) -> Option<Face> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, v);
                Some(Face(out))
            }
        }
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| other.contains_vertex(*v)).collect())
    }
}

impl TryFrom<Vec<usize>> for Face {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Face::new(v)
    }
}

impl From<Face> for Vec<usize> {
    fn from(f: Face) -> Self {
        f.0
    }
}

impl Borrow<[usize]> for Face {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

fn is_sorted_subset(small: &[usize], large: &[usize]) -> bool {
    let mut it = large.iter();
    small.iter().all(|v| it.any(|w| w == v))
}

/// Oriented incidence number `[F:G]` for `dim F = dim G + 1`.
///
/// `(-1)^j` when `G` is `F` with its `j`-th smallest vertex removed, `0`
/// when `G` is not contained in `F`.
pub fn incidence_number(f: &Face, g: &Face) -> Result<i8> {
    if f.len() != g.len() + 1 {
        return Err(Error::DimensionMismatch { expected: f.dim() as i64 - 1, found: g.dim() as i64 });
    }
    Ok(incidence_unchecked(f.vertices(), g.vertices()))
}

pub(crate) fn incidence_unchecked(f: &[usize], g: &[usize]) -> i8 {
    // position of the first disagreement is the removed vertex
    let j = f.iter().zip(g.iter()).position(|(a, b)| a != b).unwrap_or(g.len());
    if f[..j] == g[..j] && f[j + 1..] == g[j..] {
        if j % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// On-disk complex description. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub n: usize,
    pub k: i32,
    pub complete_skeleton_dim: i32,
    pub top_faces: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    n: usize,
    k: i32,
    csd: i32,
    /// `faces[d + 1]` lists the `d`-faces in lexicographic order.
    faces: Vec<Vec<Face>>,
    /// Hash index for dimensions above the complete skeleton.
    index: Vec<Option<HashMap<Face, usize>>>,
    binom: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Validates and closes a complex.
    ///
    /// Faces of dimension at most `complete_skeleton_dim` (and all vertices)
    /// are implied; every listed face above that must have all of its
    /// boundary faces either implied or listed.
    pub fn build(n: usize, k: i32, top_faces: Vec<Vec<usize>>, complete_skeleton_dim: i32) -> Result<Self> {
        if k < -1 || complete_skeleton_dim < -1 || complete_skeleton_dim > k {
            return Err(Error::InvalidSkeletonDim { csd: complete_skeleton_dim, k, n });
        }
        if k == -1 && n > 0 {
            return Err(Error::InvalidParameter("a (-1)-dimensional complex has no vertices".into()));
        }
        let implied = Self::implied_dim(k, complete_skeleton_dim);
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); (k + 2) as usize];
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for verts in top_faces {
            if let Some(&v) = verts.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { face: verts.clone(), vertex: v, n });
            }
            let face = Face::new(verts)?;
            if face.dim() > k {
                return Err(Error::FaceAboveTopDimension { dim: face.dim(), face: face.0, top: k });
            }
            if !seen.insert(face.0.clone()) {
                return Err(Error::DuplicateFace(face));
            }
            if face.dim() > implied {
                by_dim[(face.dim() + 1) as usize].push(face);
            }
        }

        let max_arity = (k + 2).max(1) as usize;
        let binom: Vec<Vec<usize>> = (0..=n).map(|a| (0..=max_arity).map(|b| binomial(a, b)).collect()).collect();

        let mut faces: Vec<Vec<Face>> = Vec::with_capacity((k + 2) as usize);
        let mut index: Vec<Option<HashMap<Face, usize>>> = Vec::with_capacity((k + 2) as usize);
        faces.push(vec![Face::empty()]);
        index.push(None);
        for d in 0..=k {
            if d <= implied {
                faces.push((0..n).combinations((d + 1) as usize).map(Face).collect());
                index.push(None);
                continue;
            }
            let mut list = std::mem::take(&mut by_dim[(d + 1) as usize]);
            list.sort_unstable();
            let mut map = HashMap::with_capacity(list.len());
            for (i, face) in list.iter().enumerate() {
                map.insert(face.clone(), i);
            }
            faces.push(list);
            index.push(Some(map));
        }

        let complex = SimplicialComplex { n, k, csd: complete_skeleton_dim, faces, index, binom };
        // downward closure above the implied skeleton
        for d in (implied + 1).max(1)..=k {
            for face in complex.faces(d) {
                for j in 0..face.len() {
                    let sub = face.without_position(j);
                    if complex.index_of(sub.vertices()).is_none() {
                        return Err(Error::MissingSubface { face: face.clone(), missing: sub });
                    }
                }
            }
        }
        Ok(complex)
    }

    /// `K_n^k`, the complete `k`-dimensional complex on `n` vertices.
    pub fn complete(n: usize, k: i32) -> Result<Self> {
        if k < 0 || k as usize >= n {
            return Err(Error::InvalidParameter(format!("complete complex needs 0 <= k < n, got n={n}, k={k}")));
        }
        Self::build(n, k, Vec::new(), k)
    }

    /// Downward closure of arbitrary faces on vertex set `0..n`.
    pub fn from_maximal_faces(n: usize, k: i32, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut all: HashSet<Vec<usize>> = HashSet::new();
        for face in maximal {
            let face = Face::from_unsorted(face.clone());
            for size in 2..=face.len() {
                for sub in face.vertices().iter().copied().combinations(size) {
                    all.insert(sub);
                }
            }
        }
        let mut list: Vec<Vec<usize>> = all.into_iter().collect();
        list.sort_unstable();
        Self::build(n, k, list, 0)
    }

    /// A graph (1-dimensional complex) on `0..n`.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let list = edges.iter().map(|&(u, v)| if u < v { vec![u, v] } else { vec![v, u] }).collect();
        Self::build(n, 1, list, 0)
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::build(file.n, file.k, file.top_faces.clone(), file.complete_skeleton_dim)
    }

    /// Faces above the implied skeleton, ordered by dimension then
    /// lexicographically.
    pub fn to_file(&self) -> ComplexFile {
        let implied = self.implied_skeleton_dim();
        let top_faces = ((implied + 1)..=self.k).flat_map(|d| self.faces(d).iter().map(|f| f.0.clone())).collect();
        ComplexFile { n: self.n, k: self.k, complete_skeleton_dim: self.csd, top_faces, model: None }
    }

    fn implied_dim(k: i32, csd: i32) -> i32 {
        if k >= 0 {
            csd.max(0)
        } else {
            -1
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top dimension `k`.
    pub fn dim(&self) -> i32 {
        self.k
    }

    pub fn complete_skeleton_dim(&self) -> i32 {
        self.csd
    }

    /// Highest dimension whose faces are generated combinatorially.
    pub fn implied_skeleton_dim(&self) -> i32 {
        Self::implied_dim(self.k, self.csd)
    }

    /// Whether every `(d+1)`-subset of the vertices is a face.
    pub fn has_complete_skeleton(&self, d: i32) -> bool {
        if d < -1 || d > self.k {
            return false;
        }
        d <= self.implied_skeleton_dim() || self.face_count(d) == binomial(self.n, (d + 1) as usize)
    }

    pub fn faces(&self, d: i32) -> &[Face] {
        if d < -1 || d > self.k {
            return &[];
        }
        &self.faces[(d + 1) as usize]
    }

    pub fn face_count(&self, d: i32) -> usize {
        self.faces(d).len()
    }

    pub fn face(&self, d: i32, i: usize) -> &Face {
        &self.faces[(d + 1) as usize][i]
    }

    /// Face counts for dimensions `0..=k`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.k).map(|d| self.face_count(d)).collect()
    }

    /// Row index of the face with the given (sorted) vertices.
    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        let d = vertices.len() as i32 - 1;
        if d > self.k {
            return None;
        }
        match &self.index[(d + 1) as usize] {
            Some(map) => map.get(vertices).copied(),
            None => {
                if vertices.iter().any(|&v| v >= self.n) {
                    return None;
                }
                Some(self.lex_rank(vertices))
            }
        }
    }

    pub fn face_index(&self, face: &Face) -> Option<usize> {
        self.index_of(face.vertices())
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.face_index(face).is_some()
    }

    fn lex_rank(&self, v: &[usize]) -> usize {
        let m = v.len();
        if m == 0 {
            return 0;
        }
        let mut acc = 0;
        for (i, &x) in v.iter().enumerate() {
            acc += self.binom[self.n - 1 - x][m - i];
        }
        self.binom[self.n][m] - 1 - acc
    }

    /// Boundary of the `i`-th `d`-face as `(index of (d-1)-face, sign)`.
    pub fn boundary(&self, d: i32, i: usize) -> Vec<(usize, i8)> {
        let face = self.face(d, i);
        let mut out = Vec::with_capacity(face.len());
        let mut scratch = Vec::with_capacity(face.len());
        for j in 0..face.len() {
            scratch.clear();
            scratch.extend_from_slice(&face.0[..j]);
            scratch.extend_from_slice(&face.0[j + 1..]);
            let idx = self.index_of(&scratch).expect("complex is downward closed");
            out.push((idx, if j % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    /// Number of top-dimensional faces containing each `d`-face.
    pub fn degrees(&self, d: i32) -> Vec<usize> {
        let mut deg = vec![0usize; self.face_count(d)];
        if d < -1 || d > self.k {
            return deg;
        }
        if d == self.k {
            deg.iter_mut().for_each(|x| *x = 1);
            return deg;
        }
        let size = (d + 1) as usize;
        for top in self.faces(self.k) {
            for sub in top.0.iter().copied().combinations(size) {
                if let Some(i) = self.index_of(&sub) {
                    deg[i] += 1;
                }
            }
        }
        deg
    }

    /// `deg(F)`: number of `k`-faces containing `F`.
    pub fn degree(&self, face: &Face) -> Result<usize> {
        if !self.contains(face) {
            return Err(Error::FaceNotInComplex(face.clone()));
        }
        Ok(self.faces(self.k).iter().filter(|top| face.is_subset_of(top)).count())
    }

    /// True iff every `(k-1)`-face lies in some `k`-face.
    pub fn is_pure(&self) -> bool {
        self.degrees(self.k - 1).iter().all(|&d| d > 0)
    }

    /// Link of `face`, reindexed onto its own vertex set.
    pub fn link(&self, face: &Face) -> Result<Link> {
        if !self.contains(face) {
            return Err(Error::FaceNotInComplex(face.clone()));
        }
        let f = face.len();
        let link_k = self.k - f as i32;
        let vertex_map: Vec<usize> = (0..self.n)
            .filter(|&u| {
                !face.contains_vertex(u) && face.with_vertex(u).is_some_and(|g| self.index_of(g.vertices()).is_some())
            })
            .collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &u) in vertex_map.iter().enumerate() {
            new_id[u] = i;
        }
        let implied = self.implied_skeleton_dim();
        let link_csd = if implied >= f as i32 { implied - f as i32 } else { link_k.min(0) };
        let mut listed = Vec::new();
        let first = f as i32 + link_csd.max(0) + 1;
        for d in first..=self.k {
            for g in self.faces(d) {
                if face.is_subset_of(g) {
                    listed.push(g.0.iter().filter(|v| !face.contains_vertex(**v)).map(|&v| new_id[v]).collect());
                }
            }
        }
        let complex = SimplicialComplex::build(vertex_map.len(), link_k, listed, link_csd)?;
        Ok(Link { face: face.clone(), complex, vertex_map })
    }

    /// Stable 64-bit content fingerprint, used to tag operator matrices.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        self.k.hash(&mut h);
        for d in (self.implied_skeleton_dim() + 1)..=self.k {
            self.faces(d).hash(&mut h);
        }
        h.finish()
    }
}

/// A link together with the map from link vertices to original vertices.
#[derive(Clone, Debug)]
pub struct Link {
    pub face: Face,
    pub complex: SimplicialComplex,
    pub vertex_map: Vec<usize>,
}

impl Link {
    /// Original face `F ∪ {u}` for link vertex `u`.
    pub fn lift_vertex(&self, u: usize) -> Face {
        self.face.with_vertex(self.vertex_map[u]).expect("link vertices are disjoint from the face")
    }
}
