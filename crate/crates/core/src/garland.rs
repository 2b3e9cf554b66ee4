//! Localization of top-dimensional operators to links of `(k-2)`-faces.
//!
//! Every `(k-1)`-face `G ⊃ F` corresponds to a vertex `u` of `lk F` with
//! `G = F ∪ {u}`, and a `(k-1)`-cochain restricts to the link as
//! `f_F(u) = [F∪u : F] f(F∪u)`. The sandwich theorems below bound the
//! spectra of `Δ^up_{k-1}` and `A_{k-1}` by spectral data of these link
//! graphs.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cochain::{coboundary, RealCochain};
use crate::complex::{Face, Link, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::{self, MatrixKind, OperatorMatrix};
use crate::spectral;

/// Absolute slack for the spectral sandwich checks.
pub const SANDWICH_SLACK: f64 = 1e-8;

/// Link of a `(k-2)`-face with the sign twist `s(u) = [F∪u : F]`.
#[derive(Clone, Debug)]
pub struct LinkRestriction {
    pub face: Face,
    pub link: Link,
    pub signs: Vec<i8>,
    /// Index in `X_{k-1}` of `F ∪ {u}` for each link vertex `u`.
    pub lifted: Vec<usize>,
}

impl LinkRestriction {
    pub fn new(x: &SimplicialComplex, face: &Face) -> Result<Self> {
        if face.dim() != x.dim() - 2 {
            return Err(Error::DimensionMismatch { expected: x.dim() as i64 - 2, found: face.dim() as i64 });
        }
        let link = x.link(face)?;
        let mut signs = Vec::with_capacity(link.vertex_map.len());
        let mut lifted = Vec::with_capacity(link.vertex_map.len());
        for u in 0..link.vertex_map.len() {
            let g = link.lift_vertex(u);
            let pos = g.vertices().iter().position(|&v| v == link.vertex_map[u]).unwrap();
            signs.push(if pos % 2 == 0 { 1 } else { -1 });
            lifted.push(x.face_index(&g).expect("link vertices lift to faces"));
        }
        Ok(LinkRestriction { face: face.clone(), link, signs, lifted })
    }

    pub fn graph(&self) -> &SimplicialComplex {
        &self.link.complex
    }
}

/// All link restrictions of `(k-2)`-faces, in face order.
pub fn link_restrictions(x: &SimplicialComplex) -> Result<Vec<LinkRestriction>> {
    x.faces(x.dim() - 2).iter().map(|f| LinkRestriction::new(x, f)).collect()
}

/// Mask of `(k-1)`-faces containing `face`.
fn containing_mask(x: &SimplicialComplex, face: &Face) -> Result<Vec<bool>> {
    if face.dim() != x.dim() - 2 {
        return Err(Error::DimensionMismatch { expected: x.dim() as i64 - 2, found: face.dim() as i64 });
    }
    Ok(x.faces(x.dim() - 1).iter().map(|g| face.is_subset_of(g)).collect())
}

/// `ρ_F M ρ_F` for a matrix over any scalar with a zero.
pub fn localize_generic<T>(m: &DMatrix<T>, x: &SimplicialComplex, face: &Face) -> Result<DMatrix<T>>
where
    T: nalgebra::Scalar + Zero,
{
    let mask = containing_mask(x, face)?;
    if m.nrows() != mask.len() || m.ncols() != mask.len() {
        return Err(Error::DimensionMismatch { expected: mask.len() as i64, found: m.nrows() as i64 });
    }
    Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| if mask[r] && mask[c] { m[(r, c)].clone() } else { T::zero() }))
}

/// Localizes a `(k-1)`-dimensional operator to the faces containing `face`.
pub fn localize(m: &OperatorMatrix, x: &SimplicialComplex, face: &Face) -> Result<OperatorMatrix> {
    if m.dim != x.dim() - 1 {
        return Err(Error::DimensionMismatch { expected: x.dim() as i64 - 1, found: m.dim as i64 });
    }
    Ok(OperatorMatrix::dense(MatrixKind::Localized, m.dim, m.complex_id, localize_generic(&m.to_dense(), x, face)?))
}

/// `f_F(u) = [F∪u : F] f(F∪u)` as a 0-cochain on the link.
pub fn restrict_cochain(f: &RealCochain, r: &LinkRestriction) -> Result<RealCochain> {
    if f.dim != r.face.dim() + 1 {
        return Err(Error::DimensionMismatch { expected: r.face.dim() as i64 + 1, found: f.dim as i64 });
    }
    Ok(RealCochain { dim: 0, values: r.lifted.iter().zip(&r.signs).map(|(&g, &s)| s as f64 * f.values[g]).collect() })
}

/// Outcome of the exact localization identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationIdentities {
    /// `Σ_F ρ_F L^up ρ_F = L^up + (k-1) D` over the integers.
    pub laplacian_sum: bool,
    /// `Σ_F ρ_F Δ^up ρ_F = Δ^up + (k-1) I`, entrywise in floating point.
    pub normalized_sum: bool,
    /// `Σ_F ρ_F A ρ_F = A` over the integers.
    pub adjacency_sum: bool,
}

impl LocalizationIdentities {
    pub fn all(&self) -> bool {
        self.laplacian_sum && self.normalized_sum && self.adjacency_sum
    }
}

/// Verifies the localization sum identities by summing the localized
/// matrices face by face.
pub fn localization_identities(x: &SimplicialComplex) -> Result<LocalizationIdentities> {
    if !x.is_pure() {
        return Err(Error::NotPure(x.degrees(x.dim() - 1).iter().filter(|&&d| d == 0).count()));
    }
    let i = x.dim() - 1;
    let k = x.dim() as i64;
    let l = spectral::up_laplacian_exact(x, i)?;
    let a = spectral::adjacency_exact(x)?;
    let deg = x.degrees(i);
    let m = deg.len();
    let d = DMatrix::<i64>::from_diagonal(&DVector::from_iterator(m, deg.iter().map(|&v| v as i64)));
    let delta = DMatrix::<f64>::from_fn(m, m, |r, c| l[(r, c)] as f64 / deg[r] as f64);

    let mut sum_l = DMatrix::<i64>::zeros(m, m);
    let mut sum_a = DMatrix::<i64>::zeros(m, m);
    let mut sum_delta = DMatrix::<f64>::zeros(m, m);
    for f in x.faces(i - 1) {
        sum_l += localize_generic(&l, x, f)?;
        sum_a += localize_generic(&a, x, f)?;
        sum_delta += localize_generic(&delta, x, f)?;
    }
    let shifted = &delta + DMatrix::<f64>::identity(m, m) * (k - 1) as f64;
    Ok(LocalizationIdentities {
        laplacian_sum: sum_l == &l + d * (k - 1),
        normalized_sum: sum_delta == shifted,
        adjacency_sum: sum_a == a,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSpectrum {
    pub face: Face,
    pub vertices: usize,
    pub lambda_2: f64,
    pub lambda_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GarlandInterval {
    pub k: i32,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lower: f64,
    pub upper: f64,
}

impl GarlandInterval {
    pub fn from_link_extremes(k: i32, lambda_min: f64, lambda_max: f64) -> Self {
        let kf = k as f64;
        GarlandInterval {
            k,
            lambda_min,
            lambda_max,
            lower: 1.0 + kf * lambda_min - kf,
            upper: 1.0 + kf * lambda_max - kf,
        }
    }
}

fn require_pure(x: &SimplicialComplex) -> Result<()> {
    if x.dim() < 1 {
        return Err(Error::DimensionOutOfRange { dim: x.dim(), lo: 1, hi: i32::MAX });
    }
    let zeros = x.degrees(x.dim() - 1).iter().filter(|&&d| d == 0).count();
    if zeros > 0 {
        return Err(Error::NotPure(zeros));
    }
    Ok(())
}

/// λ_2 and λ_max of the normalized Laplacian of every `(k-2)`-face link,
/// and the resulting interval.
pub fn garland_interval(x: &SimplicialComplex) -> Result<(GarlandInterval, Vec<LinkSpectrum>)> {
    require_pure(x)?;
    let mut rows = Vec::new();
    for face in x.faces(x.dim() - 2) {
        let link = x.link(face)?;
        let g = &link.complex;
        if g.n() == 0 {
            continue;
        }
        if g.degrees(0).contains(&0) {
            return Err(Error::IsolatedLinkVertex(face.clone()));
        }
        let s = spectral::normalized_up_matrix(g, false)?;
        let eig = matrix::eigvalsh(&s.to_dense())?;
        rows.push(LinkSpectrum {
            face: face.clone(),
            vertices: g.n(),
            lambda_2: eig.get(1).copied().unwrap_or(eig[0]),
            lambda_max: eig[eig.len() - 1],
        });
    }
    if rows.is_empty() {
        return Err(Error::InvalidParameter("complex has no nonempty links".into()));
    }
    let lambda_min = rows.iter().map(|r| r.lambda_2).fold(f64::INFINITY, f64::min);
    let lambda_max = rows.iter().map(|r| r.lambda_max).fold(f64::NEG_INFINITY, f64::max);
    Ok((GarlandInterval::from_link_extremes(x.dim(), lambda_min, lambda_max), rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GarlandReport {
    pub interval: GarlandInterval,
    pub links: Vec<LinkSpectrum>,
    pub nontrivial_min: f64,
    pub nontrivial_max: f64,
    /// `(eigenvalue index, value)` of non-trivial eigenvalues outside the
    /// interval.
    pub violations: Vec<(usize, f64)>,
    pub degenerate_split: bool,
    pub passed: bool,
}

/// Checks that every non-trivial eigenvalue of `Δ^up_{k-1}` lies in the
/// interval computed from the links.
pub fn verify_garland(x: &SimplicialComplex) -> Result<GarlandReport> {
    let (interval, links) = garland_interval(x)?;
    let spec = spectral::normalized_up_spectrum(x, false)?;
    let offset = spec.trivial_count;
    let mut violations = Vec::new();
    for (j, &v) in spec.nontrivial().iter().enumerate() {
        if v < interval.lower - SANDWICH_SLACK || v > interval.upper + SANDWICH_SLACK {
            violations.push((offset + j, v));
        }
    }
    let [lo, hi] = spec.nontrivial_range.unwrap_or([f64::NAN, f64::NAN]);
    Ok(GarlandReport {
        interval,
        links,
        nontrivial_min: lo,
        nontrivial_max: hi,
        passed: violations.is_empty(),
        violations,
        degenerate_split: spec.degenerate_split,
    })
}

/// `E = D_{k-1} - dI`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationMatrix {
    pub d: f64,
    pub diagonal: Vec<f64>,
}

impl DeviationMatrix {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.diagonal).map(|(a, e)| a * e).collect()
    }

    pub fn to_operator(&self, x: &SimplicialComplex) -> OperatorMatrix {
        OperatorMatrix::dense(
            MatrixKind::Deviation,
            x.dim() - 1,
            x.fingerprint(),
            DMatrix::from_diagonal(&DVector::from_vec(self.diagonal.clone())),
        )
    }
}

pub fn deviation_matrix(x: &SimplicialComplex, d: f64) -> DeviationMatrix {
    DeviationMatrix { d, diagonal: x.degrees(x.dim() - 1).into_iter().map(|v| v as f64 - d).collect() }
}

fn require_complete_top_skeleton(x: &SimplicialComplex) -> Result<()> {
    if x.dim() < 1 {
        return Err(Error::DimensionOutOfRange { dim: x.dim(), lo: 1, hi: i32::MAX });
    }
    if !x.has_complete_skeleton(x.dim() - 1) {
        return Err(Error::IncompleteSkeleton(x.dim() - 1));
    }
    Ok(())
}

/// `h_b(F) = Σ_{v ∉ F} [F∪v : F] b(F∪v)` for every `(k-2)`-face `F`.
pub fn h_vector(x: &SimplicialComplex, b: &RealCochain) -> Result<Vec<f64>> {
    require_complete_top_skeleton(x)?;
    let i = x.dim() - 1;
    if b.dim != i || b.values.len() != x.face_count(i) {
        return Err(Error::DimensionMismatch { expected: i as i64, found: b.dim as i64 });
    }
    Ok(x.faces(i - 1)
        .iter()
        .map(|f| {
            (0..x.n())
                .filter_map(|v| {
                    let g = f.with_vertex(v)?;
                    let pos = g.vertices().iter().position(|&w| w == v).unwrap();
                    let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                    Some(sign * b.values[x.face_index(&g).unwrap()])
                })
                .sum()
        })
        .collect())
}

/// `(1/n) Σ_{F ⊂ H} [H:F] h(F)` for every `(k-1)`-face `H`.
pub fn reconstruct_from_h(x: &SimplicialComplex, h: &[f64]) -> Vec<f64> {
    let i = x.dim() - 1;
    let n = x.n() as f64;
    (0..x.face_count(i)).map(|r| x.boundary(i, r).into_iter().map(|(c, s)| s as f64 * h[c]).sum::<f64>() / n).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// A random real coboundary `δg` with `g` uniform in `[-1,1]` on the
/// `(k-2)`-faces.
pub fn random_coboundary(x: &SimplicialComplex, rng: &mut ChaCha8Rng) -> Result<RealCochain> {
    let i = x.dim() - 2;
    let g = RealCochain { dim: i, values: (0..x.face_count(i)).map(|_| rng.random_range(-1.0..1.0)).collect() };
    coboundary(x, &g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducingToLinksReport {
    pub d: f64,
    pub samples: usize,
    /// `max_F ‖E δe_F‖ / ‖δe_F‖`.
    pub f_n: f64,
    /// Largest relative error of the reconstruction from `h_b`.
    pub max_reconstruction_error: f64,
    /// Largest `Σ h_b² / (k(n-k+1)⟨b,b⟩)`.
    pub max_h_ratio: f64,
    /// Largest `‖Eb‖ / (k f(n) ‖b‖)`; zero when both sides vanish.
    pub max_deviation_ratio: f64,
    pub reconstruction_ok: bool,
    pub h_bound_ok: bool,
    pub deviation_bound_ok: bool,
}

impl ReducingToLinksReport {
    pub fn passed(&self) -> bool {
        self.reconstruction_ok && self.h_bound_ok && self.deviation_bound_ok
    }
}

/// Checks the reconstruction identity, the `Σ h_b²` bound and the
/// `‖Eb‖ ≤ k f(n) ‖b‖` bound on `samples` random coboundaries.
pub fn verify_reducing_to_links(
    x: &SimplicialComplex,
    d: f64,
    samples: usize,
    seed: u64,
) -> Result<ReducingToLinksReport> {
    require_complete_top_skeleton(x)?;
    let k = x.dim() as f64;
    let n = x.n() as f64;
    let e = deviation_matrix(x, d);
    let mut f_n = 0.0f64;
    for j in 0..x.face_count(x.dim() - 2) {
        let b = coboundary(x, &RealCochain::elementary(x, x.dim() - 2, j))?;
        let nb = norm(&b.values);
        if nb > 0.0 {
            f_n = f_n.max(norm(&e.apply(&b.values)) / nb);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ReducingToLinksReport {
        d,
        samples,
        f_n,
        max_reconstruction_error: 0.0,
        max_h_ratio: 0.0,
        max_deviation_ratio: 0.0,
        reconstruction_ok: true,
        h_bound_ok: true,
        deviation_bound_ok: true,
    };
    const SLACK: f64 = 1e-9;
    for _ in 0..samples {
        let b = random_coboundary(x, &mut rng)?;
        let nb = norm(&b.values);
        let h = h_vector(x, &b)?;
        let recon = reconstruct_from_h(x, &h);
        let err = recon.iter().zip(&b.values).map(|(p, q)| (p - q).abs()).fold(0.0f64, f64::max)
            / b.values.iter().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
        report.max_reconstruction_error = report.max_reconstruction_error.max(err);
        report.reconstruction_ok &= err <= 1e-10;

        let h2: f64 = h.iter().map(|v| v * v).sum();
        let h_bound = k * (n - k + 1.0) * nb * nb;
        if h_bound > 0.0 {
            report.max_h_ratio = report.max_h_ratio.max(h2 / h_bound);
        }
        report.h_bound_ok &= h2 <= h_bound * (1.0 + SLACK) + SLACK;

        let eb = norm(&e.apply(&b.values));
        let bound = k * f_n * nb;
        if bound > 0.0 {
            report.max_deviation_ratio = report.max_deviation_ratio.max(eb / bound);
        }
        report.deviation_bound_ok &= eb <= bound * (1.0 + SLACK) + SLACK;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkCondition {
    pub face: Face,
    /// `|⟨Bu,u⟩ - d|`.
    pub f: f64,
    /// `‖P B u‖` with `P` the projection onto `1^⊥`.
    pub g: f64,
    /// Spectral norm of `P B P`.
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkConditions {
    pub d: f64,
    pub links: Vec<LinkCondition>,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl LinkConditions {
    pub fn phi(&self) -> f64 {
        self.f + self.g + self.h
    }
}

/// The three link quantities of the adjacency sandwich theorem, computed
/// exactly for every `(k-2)`-face.
pub fn adjacency_link_conditions(x: &SimplicialComplex, d: f64) -> Result<LinkConditions> {
    require_complete_top_skeleton(x)?;
    let mut links = Vec::new();
    for face in x.faces(x.dim() - 2) {
        let link = x.link(face)?;
        let m = link.complex.n();
        if m == 0 {
            return Err(Error::InvalidParameter(format!("link of {face} is empty")));
        }
        let mut b = DMatrix::<f64>::zeros(m, m);
        for e in link.complex.faces(1) {
            let (p, q) = (e.vertices()[0], e.vertices()[1]);
            b[(p, q)] = 1.0;
            b[(q, p)] = 1.0;
        }
        let u = DVector::from_element(m, 1.0 / (m as f64).sqrt());
        let bu = &b * &u;
        let bu_u = bu.dot(&u);
        let pbu = &bu - &u * bu_u;
        let p = DMatrix::<f64>::identity(m, m) - &u * u.transpose();
        let pbp = &p * &b * &p;
        let pbp = (&pbp + pbp.transpose()) * 0.5;
        links.push(LinkCondition {
            face: face.clone(),
            f: (bu_u - d).abs(),
            g: pbu.norm(),
            h: matrix::spectral_norm_sym(&pbp)?,
        });
    }
    let max = |sel: fn(&LinkCondition) -> f64| links.iter().map(sel).fold(0.0f64, f64::max);
    Ok(LinkConditions { d, f: max(|l| l.f), g: max(|l| l.g), h: max(|l| l.h), links })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyReport {
    pub conditions: LinkConditions,
    pub phi: f64,
    pub top_interval: [f64; 2],
    pub bottom_interval: [f64; 2],
    /// `[min, max]` of the largest `dim B^{k-1}` eigenvalues.
    pub top_range: [f64; 2],
    /// `[min, max]` of the remaining eigenvalues.
    pub bottom_range: [f64; 2],
    pub violations: Vec<(usize, f64)>,
    pub passed: bool,
}

/// Checks the adjacency sandwich: the top `C(n-1,k-1)` eigenvalues of
/// `A_{k-1}` lie in `[d - kφ, d + 2kφ + kh]` and the rest in `[-k(φ+h), kh]`.
pub fn verify_adjacency_intervals(x: &SimplicialComplex, d: f64) -> Result<AdjacencyReport> {
    let conditions = adjacency_link_conditions(x, d)?;
    let k = x.dim() as f64;
    let phi = conditions.phi();
    let h = conditions.h;
    let top_interval = [d - k * phi, d + 2.0 * k * phi + k * h];
    let bottom_interval = [-k * (phi + h), k * h];
    let spec = spectral::adjacency_spectrum(x, d)?;
    let c = spec.trivial_count;
    let eig = &spec.eigenvalues;
    let cut = eig.len() - c;
    let mut violations = Vec::new();
    for (j, &v) in eig.iter().enumerate() {
        let [lo, hi] = if j >= cut { top_interval } else { bottom_interval };
        if v < lo - SANDWICH_SLACK || v > hi + SANDWICH_SLACK {
            violations.push((j, v));
        }
    }
    let range = |s: &[f64]| {
        if s.is_empty() {
            [f64::NAN, f64::NAN]
        } else {
            [s[0], s[s.len() - 1]]
        }
    };
    Ok(AdjacencyReport {
        phi,
        top_interval,
        bottom_interval,
        top_range: range(&eig[cut..]),
        bottom_range: range(&eig[..cut]),
        passed: violations.is_empty(),
        violations,
        conditions,
    })
}

/// Orthonormal basis (unweighted) of the real coboundary space `B^{k-1}`.
pub fn coboundary_orthobasis(x: &SimplicialComplex) -> Result<Vec<Vec<f64>>> {
    let i = x.dim() - 2;
    let gens: Vec<Vec<f64>> = (0..x.face_count(i))
        .map(|j| coboundary(x, &RealCochain::elementary(x, i, j)).map(|c| c.values))
        .collect::<Result<_>>()?;
    Ok(matrix::orthonormalize(&gens, None, matrix::RANK_TOL))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementBound {
    /// `sup |⟨Az,z⟩|` over unit `z ⊥ B^{k-1}`.
    pub supremum: f64,
    /// `k h`.
    pub bound: f64,
    /// Largest `|⟨Az,z⟩|` over the random unit samples.
    pub sampled_max: f64,
    pub holds: bool,
}

/// `|⟨A z, z⟩| ≤ k h ⟨z,z⟩` on the orthogonal complement of `B^{k-1}`,
/// both exactly (spectral norm of the compressed matrix) and on random
/// samples.
pub fn complement_quadratic_bound(x: &SimplicialComplex, h: f64, samples: usize, seed: u64) -> Result<ComplementBound> {
    let a = spectral::adjacency_matrix(x)?.to_dense();
    let m = a.nrows();
    let q = coboundary_orthobasis(x)?;
    let mut p = DMatrix::<f64>::identity(m, m);
    for v in &q {
        let col = DVector::from_column_slice(v);
        p -= &col * col.transpose();
    }
    let compressed = &p * &a * &p;
    let compressed = (&compressed + compressed.transpose()) * 0.5;
    let supremum = matrix::spectral_norm_sym(&compressed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled_max = 0.0f64;
    for _ in 0..samples {
        let raw = DVector::from_iterator(m, (0..m).map(|_| rng.random_range(-1.0..1.0)));
        let z = &p * raw;
        let nz = z.norm();
        if nz == 0.0 {
            continue;
        }
        let z = z / nz;
        sampled_max = sampled_max.max((&a * &z).dot(&z).abs());
    }
    let bound = x.dim() as f64 * h;
    Ok(ComplementBound {
        supremum,
        bound,
        sampled_max,
        holds: supremum <= bound + SANDWICH_SLACK && sampled_max <= bound + SANDWICH_SLACK,
    })
}
