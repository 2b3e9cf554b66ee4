//! Real and GF(2) cochains, coboundary operators and their weighted
//! adjoints, and the coset norm `‖[f]‖` over GF(2).

use serde::{Deserialize, Serialize};

use crate::complex::{binomial, SimplicialComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, EchelonBasis};
use crate::matrix::{CsrMatrix, MatrixKind, OperatorMatrix};

/// Default cap on the number of coset elements enumerated by
/// [`z2_class_norm`].
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealCochain {
    pub dim: i32,
    pub values: Vec<f64>,
}

impl RealCochain {
    pub fn zeros(x: &SimplicialComplex, dim: i32) -> Self {
        RealCochain { dim, values: vec![0.0; x.face_count(dim)] }
    }

    /// The elementary cochain `e_F` for the face with index `idx`.
    pub fn elementary(x: &SimplicialComplex, dim: i32, idx: usize) -> Self {
        let mut c = Self::zeros(x, dim);
        c.values[idx] = 1.0;
        c
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_host(&self, x: &SimplicialComplex) -> Result<()> {
        if self.dim < -1 || self.dim > x.dim() {
            return Err(Error::DimensionOutOfRange { dim: self.dim, lo: -1, hi: x.dim() });
        }
        if self.values.len() != x.face_count(self.dim) {
            return Err(Error::DimensionMismatch {
                expected: x.face_count(self.dim) as i64,
                found: self.values.len() as i64,
            });
        }
        Ok(())
    }
}

/// A GF(2) cochain, stored as the set of face indices where it is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Z2Cochain {
    pub dim: i32,
    pub support: Vec<usize>,
}

impl Z2Cochain {
    pub fn zero(dim: i32) -> Self {
        Z2Cochain { dim, support: Vec::new() }
    }

    pub fn from_bits(dim: i32, bits: &BitVec) -> Self {
        Z2Cochain { dim, support: bits.ones().collect() }
    }

    pub fn to_bits(&self, x: &SimplicialComplex) -> Result<BitVec> {
        let len = x.face_count(self.dim);
        if let Some(&bad) = self.support.iter().find(|&&i| i >= len) {
            return Err(Error::InvalidParameter(format!(
                "support index {bad} outside the {len} faces of dimension {}",
                self.dim
            )));
        }
        Ok(BitVec::from_indices(len, self.support.iter().copied()))
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.support.len()
    }
}

/// Per-face weights defining the inner product on each cochain space.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFunction {
    Unit,
    /// `w(F) = deg(F)`, the number of top faces containing `F`.
    Degree,
    /// Explicit weights, indexed by `dim + 1` and then by face index.
    Custom(Vec<Vec<f64>>),
}

impl WeightFunction {
    pub fn weights(&self, x: &SimplicialComplex, dim: i32) -> Vec<f64> {
        match self {
            WeightFunction::Unit => vec![1.0; x.face_count(dim)],
            WeightFunction::Degree => x.degrees(dim).into_iter().map(|d| d as f64).collect(),
            WeightFunction::Custom(w) => w[(dim + 1) as usize].clone(),
        }
    }
}

fn check_coboundary_dim(x: &SimplicialComplex, i: i32) -> Result<()> {
    if i < -1 || i >= x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: -1, hi: x.dim() - 1 });
    }
    Ok(())
}

/// Signed incidence matrix `δ_i`, of shape `|X_{i+1}| x |X_i|`.
pub fn coboundary_csr(x: &SimplicialComplex, i: i32) -> Result<CsrMatrix> {
    check_coboundary_dim(x, i)?;
    let rows = x.face_count(i + 1);
    let mut triplets = Vec::with_capacity(rows * (i + 2) as usize);
    for r in 0..rows {
        for (c, s) in x.boundary(i + 1, r) {
            triplets.push((r, c, s as f64));
        }
    }
    Ok(CsrMatrix::from_triplets(rows, x.face_count(i), triplets))
}

pub fn coboundary_matrix(x: &SimplicialComplex, i: i32) -> Result<OperatorMatrix> {
    Ok(OperatorMatrix::sparse(MatrixKind::Coboundary, i, x.fingerprint(), coboundary_csr(x, i)?))
}

/// `δ_i^*` with entry `(G, F) = w(F)/w(G) [F:G]`.
///
/// Under degree weights, rows of faces with degree zero are set to zero;
/// any other vanishing weight is an error.
pub fn weighted_adjoint_matrix(x: &SimplicialComplex, i: i32, w: &WeightFunction) -> Result<OperatorMatrix> {
    let delta = coboundary_csr(x, i)?;
    let wi = w.weights(x, i);
    let wj = w.weights(x, i + 1);
    let mut inv = Vec::with_capacity(wi.len());
    for (g, &wg) in wi.iter().enumerate() {
        if wg > 0.0 {
            inv.push(1.0 / wg);
        } else if matches!(w, WeightFunction::Degree) {
            inv.push(0.0);
        } else {
            return Err(Error::ZeroWeight { face: x.face(i, g).clone(), dim: i, weight: wg });
        }
    }
    // δ^T has entry (G, F) = [F:G]; scale rows by 1/w(G) and columns by w(F)
    let adj = delta.transpose().scale(Some(&inv), Some(&wj));
    Ok(OperatorMatrix::sparse(MatrixKind::Adjoint, i + 1, x.fingerprint(), adj))
}

pub fn weighted_inner_product(
    x: &SimplicialComplex,
    f: &RealCochain,
    g: &RealCochain,
    w: &WeightFunction,
) -> Result<f64> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch { expected: f.dim as i64, found: g.dim as i64 });
    }
    f.check_host(x)?;
    g.check_host(x)?;
    let wt = w.weights(x, f.dim);
    Ok(f.values.iter().zip(&g.values).zip(&wt).map(|((a, b), c)| a * b * c).sum())
}

/// Real coboundary `δ f`.
pub fn coboundary(x: &SimplicialComplex, f: &RealCochain) -> Result<RealCochain> {
    f.check_host(x)?;
    check_coboundary_dim(x, f.dim)?;
    let rows = x.face_count(f.dim + 1);
    let values =
        (0..rows).map(|r| x.boundary(f.dim + 1, r).into_iter().map(|(c, s)| s as f64 * f.values[c]).sum()).collect();
    Ok(RealCochain { dim: f.dim + 1, values })
}

/// Rows of `δ_i` over GF(2), one bit vector per `(i+1)`-face.
pub fn z2_coboundary_rows(x: &SimplicialComplex, i: i32) -> Result<Vec<BitVec>> {
    check_coboundary_dim(x, i)?;
    let len = x.face_count(i);
    Ok((0..x.face_count(i + 1))
        .map(|r| BitVec::from_indices(len, x.boundary(i + 1, r).into_iter().map(|(c, _)| c)))
        .collect())
}

/// `(δ f)(F) = Σ_{G ⊂ F} f(G) mod 2`.
pub fn z2_coboundary_bits(x: &SimplicialComplex, dim: i32, f: &BitVec) -> Result<BitVec> {
    check_coboundary_dim(x, dim)?;
    let rows = x.face_count(dim + 1);
    let mut out = BitVec::zeros(rows);
    for r in 0..rows {
        let parity = x.boundary(dim + 1, r).into_iter().filter(|&(c, _)| f.get(c)).count() % 2;
        if parity == 1 {
            out.set(r, true);
        }
    }
    Ok(out)
}

pub fn z2_coboundary(x: &SimplicialComplex, f: &Z2Cochain) -> Result<Z2Cochain> {
    let bits = f.to_bits(x)?;
    Ok(Z2Cochain::from_bits(f.dim + 1, &z2_coboundary_bits(x, f.dim, &bits)?))
}

/// Coboundary of the elementary cochain on the `idx`-th `dim`-face, as a
/// bit vector over the `(dim+1)`-faces.
fn z2_coboundary_of_elementary(x: &SimplicialComplex, dim: i32, idx: usize) -> BitVec {
    let face = x.face(dim, idx);
    let len = x.face_count(dim + 1);
    let mut out = BitVec::zeros(len);
    for v in 0..x.n() {
        if let Some(g) = face.with_vertex(v) {
            if let Some(j) = x.face_index(&g) {
                out.set(j, true);
            }
        }
    }
    out
}

/// The basis `{δ e_F : 0 ∉ F}` of `B^i`, for `F` ranging over `(i-1)`-faces.
///
/// Requires complete skeleta in dimensions `i - 1` and `i`; the rank is
/// verified and a deficiency is reported as an internal error.
pub fn coboundary_basis(x: &SimplicialComplex, i: i32) -> Result<Vec<Z2Cochain>> {
    Ok(coboundary_basis_bits(x, i)?.iter().map(|b| Z2Cochain::from_bits(i, b)).collect())
}

pub fn coboundary_basis_bits(x: &SimplicialComplex, i: i32) -> Result<Vec<BitVec>> {
    if i < 0 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: 0, hi: x.dim() });
    }
    if !x.has_complete_skeleton(i) {
        return Err(Error::IncompleteSkeleton(i));
    }
    let basis: Vec<BitVec> = (0..x.face_count(i - 1))
        .filter(|&j| !x.face(i - 1, j).contains_vertex(0))
        .map(|j| z2_coboundary_of_elementary(x, i - 1, j))
        .collect();
    let expected = binomial(x.n().saturating_sub(1), i as usize);
    let r = crate::gf2::rank(x.face_count(i), &basis);
    if basis.len() != expected || r != expected {
        return Err(Error::Internal(format!(
            "coboundary basis in dimension {i}: {} vectors of rank {r}, expected {expected}",
            basis.len()
        )));
    }
    Ok(basis)
}

/// A basis of `B^i` over GF(2) for an arbitrary complex: the closed-form
/// basis when the skeleton is complete, otherwise an echelon reduction of
/// the rows of `δ_{i-1}^T`.
pub fn coboundary_span_basis(x: &SimplicialComplex, i: i32) -> Result<Vec<BitVec>> {
    if i < -1 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: -1, hi: x.dim() });
    }
    if i == -1 {
        return Ok(Vec::new());
    }
    if x.has_complete_skeleton(i) && x.n() > 0 {
        return coboundary_basis_bits(x, i);
    }
    let len = x.face_count(i);
    let mut ech = EchelonBasis::new(len);
    for j in 0..x.face_count(i - 1) {
        ech.insert(z2_coboundary_of_elementary(x, i - 1, j));
    }
    Ok(ech.rows().to_vec())
}

/// GF(2) rank of `δ_i`; zero outside `-1..k`.
pub fn gf2_coboundary_rank(x: &SimplicialComplex, i: i32) -> usize {
    if i < -1 || i >= x.dim() {
        return 0;
    }
    let rows = z2_coboundary_rows(x, i).expect("dimension checked");
    crate::gf2::rank(x.face_count(i), &rows)
}

/// `dim Z^i - dim B^i` over GF(2), reduced.
pub fn gf2_cohomology_dim(x: &SimplicialComplex, i: i32) -> Result<usize> {
    if i < -1 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: -1, hi: x.dim() });
    }
    let c = x.face_count(i);
    Ok(c - gf2_coboundary_rank(x, i) - gf2_coboundary_rank(x, i - 1))
}

/// Result of an exact coset minimization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassNorm {
    /// Minimum Hamming weight over the coset `f + B`.
    pub weight: usize,
    /// Number of faces in the dimension (the normalizer).
    pub total: usize,
    pub norm: f64,
    /// The minimizing representative (lexicographically smallest support
    /// among minimizers).
    pub representative: Z2Cochain,
}

/// Minimum weight over `f + span(basis)` by Gray-code enumeration.
pub(crate) fn coset_minimum(f: &BitVec, basis: &[BitVec], budget: u64) -> Result<(usize, BitVec)> {
    let r = basis.len() as u32;
    if r >= 64 || (1u64 << r) > budget {
        return Err(Error::BudgetExceeded { log2_needed: r, budget });
    }
    let mut cur = f.clone();
    let mut best_w = cur.count_ones();
    let mut best = cur.clone();
    for t in 1u64..(1u64 << r) {
        cur.xor_assign(&basis[t.trailing_zeros() as usize]);
        let w = cur.count_ones();
        if w < best_w || (w == best_w && cur.cmp_support(&best).is_lt()) {
            best_w = w;
            best.clone_from(&cur);
        }
    }
    Ok((best_w, best))
}

/// `‖[f]‖ = min_b |f + b| / |X_i|` over coboundaries `b`, computed exactly
/// or refused when the coset has more than `budget` elements.
pub fn z2_class_norm(x: &SimplicialComplex, f: &Z2Cochain, budget: u64) -> Result<ClassNorm> {
    let bits = f.to_bits(x)?;
    let basis = coboundary_span_basis(x, f.dim)?;
    let (weight, best) = coset_minimum(&bits, &basis, budget)?;
    let total = x.face_count(f.dim);
    Ok(ClassNorm {
        weight,
        total,
        norm: if total == 0 { 0.0 } else { weight as f64 / total as f64 },
        representative: Z2Cochain::from_bits(f.dim, &best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Face;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path3() -> SimplicialComplex {
        SimplicialComplex::graph(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn coboundary_of_path() {
        let d = coboundary_matrix(&path3(), 0).unwrap().to_dense();
        assert_eq!(d.row(0).iter().copied().collect::<Vec<_>>(), vec![-1.0, 1.0, 0.0]);
        assert_eq!(d.row(1).iter().copied().collect::<Vec<_>>(), vec![0.0, -1.0, 1.0]);
    }

    #[test]
    fn coboundary_from_empty_face() {
        let d = coboundary_matrix(&path3(), -1).unwrap().to_dense();
        assert_eq!(d.shape(), (3, 1));
        assert!(d.iter().all(|&v| v == 1.0));
        assert!(coboundary_matrix(&path3(), 1).is_err());
    }

    #[test]
    fn triangle_rows_have_three_entries() {
        let x = SimplicialComplex::complete(4, 2).unwrap();
        let d = coboundary_csr(&x, 1).unwrap();
        assert!((0..d.rows()).all(|r| d.row_nnz(r) == 3));
    }

    #[test]
    fn adjoint_unit_is_transpose() {
        let x = SimplicialComplex::complete(5, 3).unwrap();
        for i in -1..3 {
            let a = weighted_adjoint_matrix(&x, i, &WeightFunction::Unit).unwrap().to_dense();
            let d = coboundary_matrix(&x, i).unwrap().to_dense();
            assert_eq!(a, d.transpose());
        }
    }

    #[test]
    fn adjoint_degree_weights_on_tetrahedron() {
        let x = SimplicialComplex::complete(4, 2).unwrap();
        let a = weighted_adjoint_matrix(&x, 1, &WeightFunction::Degree).unwrap().to_dense();
        let d = coboundary_matrix(&x, 1).unwrap().to_dense().transpose();
        assert_eq!(a, d / 2.0);
    }

    #[test]
    fn adjoint_zero_weight() {
        let x = SimplicialComplex::build(4, 2, vec![vec![0, 1, 2], vec![0, 1, 3]], 1).unwrap();
        let a = weighted_adjoint_matrix(&x, 1, &WeightFunction::Degree).unwrap();
        let idx = x.face_index(&Face::new(vec![2, 3]).unwrap()).unwrap();
        assert!((0..a.cols()).all(|c| a.get(idx, c) == 0.0));
        let mut w = vec![vec![1.0; 1], vec![1.0; 4], vec![1.0; 6], vec![1.0; 2]];
        w[2][idx] = 0.0;
        assert!(matches!(weighted_adjoint_matrix(&x, 1, &WeightFunction::Custom(w)), Err(Error::ZeroWeight { .. })));
    }

    #[test]
    fn adjointness_on_random_pairs() {
        let x = SimplicialComplex::from_maximal_faces(
            7,
            2,
            &[vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![0, 4, 5], vec![5, 6, 0], vec![1, 3, 6]],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for w in [WeightFunction::Unit, WeightFunction::Degree] {
            for i in 0..2 {
                let adj = weighted_adjoint_matrix(&x, i, &w).unwrap();
                for _ in 0..100 {
                    let f = RealCochain {
                        dim: i + 1,
                        values: (0..x.face_count(i + 1)).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    };
                    let g = RealCochain {
                        dim: i,
                        values: (0..x.face_count(i)).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    };
                    let lhs_vec = RealCochain { dim: i, values: adj.apply(&f.values) };
                    let lhs = weighted_inner_product(&x, &lhs_vec, &g, &w).unwrap();
                    let dg = coboundary(&x, &g).unwrap();
                    let rhs = weighted_inner_product(&x, &f, &dg, &w).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
                }
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let x = SimplicialComplex::complete(5, 2).unwrap();
        let w = WeightFunction::Degree;
        let e0 = RealCochain::elementary(&x, 1, 0);
        let e1 = RealCochain::elementary(&x, 1, 1);
        assert_eq!(weighted_inner_product(&x, &e0, &e1, &w).unwrap(), 0.0);
        assert_eq!(weighted_inner_product(&x, &e0, &e0, &w).unwrap(), 3.0);
        let ones = RealCochain { dim: 1, values: vec![1.0; 10] };
        assert_eq!(weighted_inner_product(&x, &ones, &ones, &WeightFunction::Unit).unwrap(), 10.0);
        let v = RealCochain::elementary(&x, 0, 0);
        assert!(weighted_inner_product(&x, &v, &e0, &w).is_err());
    }

    #[test]
    fn z2_coboundary_examples() {
        let k4 = SimplicialComplex::complete(4, 1).unwrap();
        let star = z2_coboundary(&k4, &Z2Cochain { dim: 0, support: vec![0] }).unwrap();
        let star_faces: Vec<_> = star.support.iter().map(|&i| k4.face(1, i).vertices().to_vec()).collect();
        assert_eq!(star_faces, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);

        let x = SimplicialComplex::complete(4, 2).unwrap();
        let e = x.face_index(&Face::new(vec![0, 1]).unwrap()).unwrap();
        let d = z2_coboundary(&x, &Z2Cochain { dim: 1, support: vec![e] }).unwrap();
        let tri: Vec<_> = d.support.iter().map(|&i| x.face(2, i).vertices().to_vec()).collect();
        assert_eq!(tri, vec![vec![0, 1, 2], vec![0, 1, 3]]);
    }

    #[test]
    fn class_norm_examples() {
        let x = SimplicialComplex::complete(5, 2).unwrap();
        let star: Vec<usize> = (0..10).filter(|&i| x.face(1, i).contains_vertex(0)).collect();
        let c = z2_class_norm(&x, &Z2Cochain { dim: 1, support: star }, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.weight, 0);

        let graph = SimplicialComplex::complete(4, 1).unwrap();
        let c = z2_class_norm(&graph, &Z2Cochain { dim: 0, support: vec![0] }, DEFAULT_BUDGET).unwrap();
        assert_eq!((c.weight, c.total), (1, 4));
        assert_eq!(c.norm, 0.25);
        let c = z2_class_norm(&graph, &Z2Cochain { dim: 0, support: vec![0, 1, 2] }, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.representative.support, vec![3]);
    }

    #[test]
    fn class_norm_refuses_over_budget() {
        let x = SimplicialComplex::complete(6, 2).unwrap();
        let err = z2_class_norm(&x, &Z2Cochain { dim: 1, support: vec![0] }, 16).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { log2_needed: 5, budget: 16 }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn basis_sizes() {
        let x4 = SimplicialComplex::build(4, 2, vec![vec![0, 1, 2]], 1).unwrap();
        assert_eq!(coboundary_basis(&x4, 1).unwrap().len(), 3);
        let x5 = SimplicialComplex::complete(5, 2).unwrap();
        assert_eq!(coboundary_basis(&x5, 1).unwrap().len(), 4);
        assert_eq!(gf2_coboundary_rank(&x5, 0), 4);
    }

    #[test]
    fn cohomology_examples() {
        for (n, k) in [(4, 2), (5, 2), (6, 3), (5, 1)] {
            let x = SimplicialComplex::complete(n, k).unwrap();
            for i in -1..k {
                assert_eq!(gf2_cohomology_dim(&x, i).unwrap(), 0, "K_{n}^{k} in dim {i}");
            }
        }
        let c3 = SimplicialComplex::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(gf2_cohomology_dim(&c3, 1).unwrap(), 1);
        let sphere = SimplicialComplex::complete(4, 2).unwrap();
        assert_eq!(gf2_cohomology_dim(&sphere, 2).unwrap(), 1);
    }

    fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
        (4usize..8, proptest::collection::vec(any::<bool>(), 56)).prop_map(|(n, mask)| {
            let tris: Vec<Vec<usize>> = (0..n)
                .flat_map(|a| ((a + 1)..n).flat_map(move |b| ((b + 1)..n).map(move |c| vec![a, b, c])))
                .zip(mask)
                .filter(|(_, m)| *m)
                .map(|(t, _)| t)
                .collect();
            SimplicialComplex::build(n, 2, tris, 1).unwrap()
        })
    }

    proptest! {
        #[test]
        fn delta_squared_vanishes(x in random_complex()) {
            for i in -1..1 {
                let a = coboundary_matrix(&x, i).unwrap().to_dense();
                let b = coboundary_matrix(&x, i + 1).unwrap().to_dense();
                prop_assert!((b * a).iter().all(|&v| v == 0.0));
            }
        }

        #[test]
        fn class_norm_is_coset_invariant(x in random_complex(), f in proptest::collection::vec(any::<bool>(), 28), g in proptest::collection::vec(any::<bool>(), 8)) {
            let ne = x.face_count(1);
            let fc = Z2Cochain { dim: 1, support: (0..ne).filter(|&i| f[i]).collect() };
            let gc = Z2Cochain { dim: 0, support: (0..x.n()).filter(|&i| g[i]).collect() };
            let dg = z2_coboundary(&x, &gc).unwrap();
            let mut shifted = fc.to_bits(&x).unwrap();
            shifted.xor_assign(&dg.to_bits(&x).unwrap());
            let a = z2_class_norm(&x, &fc, DEFAULT_BUDGET).unwrap();
            let b = z2_class_norm(&x, &Z2Cochain::from_bits(1, &shifted), DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(&a, &b);
            // zero norm exactly on coboundaries
            let basis = coboundary_span_basis(&x, 1).unwrap();
            let in_b = EchelonBasis::from_vectors(ne, &basis).contains(&fc.to_bits(&x).unwrap());
            prop_assert_eq!(a.weight == 0, in_b);
        }

        #[test]
        fn basis_cardinality(n in 3usize..9, i in 0i32..3) {
            prop_assume!((i as usize) < n);
            let x = SimplicialComplex::complete(n, i).unwrap();
            let b = coboundary_basis_bits(&x, i).unwrap();
            prop_assert_eq!(b.len(), binomial(n - 1, i as usize));
            prop_assert_eq!(crate::gf2::rank(x.face_count(i), &b), b.len());
        }
    }
}
