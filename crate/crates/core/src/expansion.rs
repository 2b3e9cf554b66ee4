//! Exact GF(2) coboundary expansion, single-cochain witnesses, spectral
//! expansion, and exact edge expansion of graphs with a Cheeger check.
//!
//! All Hamming norms use uniform weights `1/|X_i|`. Nothing here
//! approximates: enumerations that exceed the budget are refused.

use serde::{Deserialize, Serialize};

use crate::cochain::{self, z2_class_norm, ClassNorm, Z2Cochain};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, EchelonBasis};
use crate::matrix;
use crate::spectral;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMethod {
    Exhaustive,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub dim: i32,
    /// `+inf` when every cochain is a coboundary.
    pub epsilon: f64,
    pub method: ExpansionMethod,
    /// `true` for the exhaustive minimum, `false` for an upper bound.
    pub exact: bool,
    /// `|δf|` of the minimizing class, out of `delta_total` faces.
    pub delta_weight: usize,
    pub delta_total: usize,
    /// Minimum weight of the minimizing class, out of `class_total` faces.
    pub class_weight: usize,
    pub class_total: usize,
    pub argmin: Option<Z2Cochain>,
    pub classes_enumerated: u64,
}

fn budget_check(log2: usize, budget: u64) -> Result<()> {
    if log2 >= 64 || (1u64 << log2) > budget {
        return Err(Error::BudgetExceeded { log2_needed: log2 as u32, budget });
    }
    Ok(())
}

/// `a/b < c/d` for non-negative integers with positive denominators.
fn ratio_lt(a: usize, b: usize, c: usize, d: usize) -> bool {
    (a as u128) * (d as u128) < (c as u128) * (b as u128)
}

/// Exact `i`-dimensional expansion `min ‖δf‖/‖[f]‖` over
/// `(i-1)`-cochains outside `B^{i-1}`.
///
/// One representative per cohomology-free class is enumerated via a
/// complement of the coboundary basis; the class norm of each comes from
/// an exact coset minimum.
pub fn z2_expansion_exact(x: &SimplicialComplex, i: i32, budget: u64) -> Result<ExpansionReport> {
    if i < 0 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: 0, hi: x.dim() });
    }
    let low = i - 1;
    let len = x.face_count(low);
    let basis = cochain::coboundary_span_basis(x, low)?;
    let ech = EchelonBasis::from_vectors(len, &basis);
    let complement = ech.complement();
    budget_check(complement.len(), budget)?;
    budget_check(basis.len(), budget)?;

    let images: Vec<BitVec> =
        complement.iter().map(|c| cochain::z2_coboundary_bits(x, low, c)).collect::<Result<_>>()?;
    let delta_total = x.face_count(i);
    let mut report = ExpansionReport {
        dim: i,
        epsilon: f64::INFINITY,
        method: ExpansionMethod::Exhaustive,
        exact: true,
        delta_weight: 0,
        delta_total,
        class_weight: 0,
        class_total: len,
        argmin: None,
        classes_enumerated: 0,
    };
    let mut f = BitVec::zeros(len);
    let mut df = BitVec::zeros(delta_total);
    for t in 1u64..(1u64 << complement.len()) {
        let j = t.trailing_zeros() as usize;
        f.xor_assign(&complement[j]);
        df.xor_assign(&images[j]);
        let (class_weight, rep) = cochain::coset_minimum(&f, &basis, budget)?;
        report.classes_enumerated += 1;
        let dw = df.count_ones();
        let better = match report.argmin {
            None => true,
            Some(_) => ratio_lt(
                dw * len,
                class_weight * delta_total,
                report.delta_weight * len,
                report.class_weight * delta_total,
            ),
        };
        if better {
            report.delta_weight = dw;
            report.class_weight = class_weight;
            report.argmin = Some(Z2Cochain::from_bits(low, &rep));
        }
    }
    if report.argmin.is_some() {
        report.epsilon = (report.delta_weight as f64 / delta_total as f64) / (report.class_weight as f64 / len as f64);
    }
    Ok(report)
}

/// `‖δf‖ / ‖[f]‖` for one cochain: an upper bound on the expansion in
/// dimension `dim f + 1`.
pub fn z2_expansion_witness(x: &SimplicialComplex, f: &Z2Cochain, budget: u64) -> Result<(ExpansionReport, ClassNorm)> {
    let class = z2_class_norm(x, f, budget)?;
    if class.weight == 0 {
        return Err(Error::TrivialClass);
    }
    let df = cochain::z2_coboundary(x, f)?;
    let delta_total = x.face_count(f.dim + 1);
    let epsilon = (df.weight() as f64 / delta_total as f64) / class.norm;
    Ok((
        ExpansionReport {
            dim: f.dim + 1,
            epsilon,
            method: ExpansionMethod::Witness,
            exact: false,
            delta_weight: df.weight(),
            delta_total,
            class_weight: class.weight,
            class_total: class.total,
            argmin: Some(f.clone()),
            classes_enumerated: 1,
        },
        class,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralExpansion {
    pub value: f64,
    pub degenerate_split: bool,
}

/// Smallest non-trivial eigenvalue of `Δ^up_{k-1}`.
pub fn spectral_expansion(x: &SimplicialComplex) -> Result<SpectralExpansion> {
    if !x.has_complete_skeleton(x.dim() - 1) {
        return Err(Error::IncompleteSkeleton(x.dim() - 1));
    }
    let r = spectral::normalized_up_spectrum(x, false)?;
    let value = r
        .nontrivial_range
        .map(|[lo, _]| lo)
        .ok_or_else(|| Error::InvalidParameter("no non-trivial eigenvalues".into()))?;
    Ok(SpectralExpansion { value, degenerate_split: r.degenerate_split })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphExpansion {
    pub epsilon: f64,
    /// Cut size, edge count, and `min(|S|, n-|S|)` of the minimizer.
    pub cut: usize,
    pub edges: usize,
    pub smaller_side: usize,
    pub n: usize,
    pub witness: Vec<usize>,
}

fn graph_masks(g: &SimplicialComplex) -> Result<Vec<u64>> {
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: g.dim() as i64 });
    }
    if g.n() > 64 {
        return Err(Error::BudgetExceeded { log2_needed: g.n() as u32 - 1, budget: u64::MAX });
    }
    let mut adj = vec![0u64; g.n()];
    for e in g.faces(1) {
        let (u, v) = (e.vertices()[0], e.vertices()[1]);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    Ok(adj)
}

/// Exact `ε(G) = min_S (|E(S,S̄)|/|E|) / (min(|S|,|S̄|)/|V|)` by Gray-code
/// enumeration of the `2^{n-1}` subsets avoiding the last vertex.
pub fn graph_edge_expansion_exact(g: &SimplicialComplex, budget: u64) -> Result<GraphExpansion> {
    let adj = graph_masks(g)?;
    let n = g.n();
    let edges = g.face_count(1);
    if edges == 0 {
        return Err(Error::NoEdges);
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    budget_check(n - 1, budget)?;
    let deg: Vec<i64> = adj.iter().map(|m| m.count_ones() as i64).collect();
    let mut set = 0u64;
    let mut cut: i64 = 0;
    let mut best: Option<(usize, usize, u64)> = None;
    for t in 1u64..(1u64 << (n - 1)) {
        let v = t.trailing_zeros() as usize;
        if set >> v & 1 == 0 {
            cut += deg[v] - 2 * (adj[v] & set).count_ones() as i64;
            set |= 1 << v;
        } else {
            set &= !(1 << v);
            cut -= deg[v] - 2 * (adj[v] & set).count_ones() as i64;
        }
        let size = set.count_ones() as usize;
        let small = size.min(n - size);
        let c = cut as usize;
        // ratio ∝ cut / small
        let better = match best {
            None => true,
            Some((bc, bs, bset)) => ratio_lt(c, small, bc, bs) || (c * bs == bc * small && set < bset),
        };
        if better {
            best = Some((c, small, set));
        }
    }
    let (c, small, set) = best.expect("n >= 2");
    Ok(GraphExpansion {
        epsilon: (c as f64 / edges as f64) / (small as f64 / n as f64),
        cut: c,
        edges,
        smaller_side: small,
        n,
        witness: (0..n).filter(|&v| set >> v & 1 == 1).collect(),
    })
}

/// `h(G) = min_{|S| ≤ n/2} |E(S,S̄)| / (d |S|)` for a `d`-regular graph.
fn cheeger_constant(adj: &[u64], d: usize) -> f64 {
    let n = adj.len();
    let mut best = f64::INFINITY;
    for set in 1u64..(1u64 << n) - 1 {
        let size = set.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let cut: u32 = (0..n).filter(|&v| set >> v & 1 == 1).map(|v| (adj[v] & !set).count_ones()).sum();
        best = best.min(cut as f64 / (d * size) as f64);
    }
    best
}

fn is_connected(adj: &[u64]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerReport {
    pub degree: usize,
    pub lambda_2: f64,
    pub epsilon: f64,
    pub h: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `ε = 2h`, computed by separate enumerations.
    pub normalization_ok: bool,
}

impl CheegerReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.normalization_ok
    }
}

/// `λ_2 ≤ ε ≤ sqrt(8 λ_2)` for a connected `d`-regular graph, with
/// `ε = 2h`.
pub fn cheeger_check(g: &SimplicialComplex, budget: u64) -> Result<CheegerReport> {
    let adj = graph_masks(g)?;
    let deg = g.degrees(0);
    let d = *deg.first().ok_or(Error::NoEdges)?;
    if deg.iter().any(|&v| v != d) {
        return Err(Error::NotRegular);
    }
    if d == 0 {
        return Err(Error::NoEdges);
    }
    if !is_connected(&adj) {
        return Err(Error::Disconnected);
    }
    budget_check(g.n(), budget)?;
    let exp = graph_edge_expansion_exact(g, budget)?;
    let h = cheeger_constant(&adj, d);
    let eig = matrix::eigvalsh(&spectral::normalized_up_matrix(g, false)?.to_dense())?;
    let lambda_2 = eig[1];
    const SLACK: f64 = 1e-9;
    Ok(CheegerReport {
        degree: d,
        lambda_2,
        epsilon: exp.epsilon,
        h,
        lower_ok: lambda_2 <= exp.epsilon + SLACK,
        upper_ok: exp.epsilon <= (8.0 * lambda_2).sqrt() + SLACK,
        normalization_ok: (exp.epsilon - 2.0 * h).abs() <= SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::DEFAULT_BUDGET;
    use crate::random::counterexample_y;

    fn cycle(n: usize) -> SimplicialComplex {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimplicialComplex::graph(n, &e).unwrap()
    }

    /// Brute force over every cochain, independent of the class enumeration.
    fn brute_force_expansion(x: &SimplicialComplex, i: i32) -> f64 {
        let len = x.face_count(i - 1);
        let total = x.face_count(i) as f64;
        let mut best = f64::INFINITY;
        for mask in 0u64..(1 << len) {
            let f = Z2Cochain { dim: i - 1, support: (0..len).filter(|b| mask >> b & 1 == 1).collect() };
            let c = z2_class_norm(x, &f, DEFAULT_BUDGET).unwrap();
            if c.weight == 0 {
                continue;
            }
            let df = cochain::z2_coboundary(x, &f).unwrap();
            best = best.min((df.weight() as f64 / total) / c.norm);
        }
        best
    }

    #[test]
    fn complete_complexes_are_at_least_one_expanding() {
        for (n, k) in [(4, 2), (5, 2), (4, 1), (5, 1), (6, 1), (5, 3)] {
            let x = SimplicialComplex::complete(n, k).unwrap();
            let r = z2_expansion_exact(&x, k, DEFAULT_BUDGET).unwrap();
            assert!(r.epsilon >= 1.0 - 1e-12, "K_{n}^{k}: {}", r.epsilon);
            assert!((r.epsilon - brute_force_expansion(&x, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_values_for_small_complete_complexes() {
        let k4 = SimplicialComplex::complete(4, 2).unwrap();
        assert!((z2_expansion_exact(&k4, 2, DEFAULT_BUDGET).unwrap().epsilon - 3.0).abs() < 1e-12);
        let k5 = SimplicialComplex::complete(5, 2).unwrap();
        let r = z2_expansion_exact(&k5, 2, DEFAULT_BUDGET).unwrap();
        assert!((r.epsilon - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.classes_enumerated, 63);
    }

    #[test]
    fn graph_expansion_values() {
        for (n, expected) in [(4, 4.0 / 3.0), (5, 1.5), (6, 1.2)] {
            let g = SimplicialComplex::complete(n, 1).unwrap();
            let r = graph_edge_expansion_exact(&g, DEFAULT_BUDGET).unwrap();
            assert!((r.epsilon - expected).abs() < 1e-12);
            let z = z2_expansion_exact(&g, 1, DEFAULT_BUDGET).unwrap();
            assert!((z.epsilon - expected).abs() < 1e-12);
        }
        let c6 = graph_edge_expansion_exact(&cycle(6), DEFAULT_BUDGET).unwrap();
        assert!((c6.epsilon - 2.0 / 3.0).abs() < 1e-12);
        let two = SimplicialComplex::graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(graph_edge_expansion_exact(&two, DEFAULT_BUDGET).unwrap().epsilon, 0.0);
        assert!(matches!(graph_edge_expansion_exact(&cycle(6), 16), Err(Error::BudgetExceeded { log2_needed: 5, .. })));
    }

    #[test]
    fn cheeger_examples() {
        let k6 = cheeger_check(&SimplicialComplex::complete(6, 1).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(k6.passed());
        assert!((k6.lambda_2 - 1.2).abs() < 1e-12 && (k6.epsilon - 1.2).abs() < 1e-12);
        let c8 = cheeger_check(&cycle(8), DEFAULT_BUDGET).unwrap();
        assert!(c8.passed());
        assert!((c8.lambda_2 - (1.0 - (std::f64::consts::PI / 4.0).cos())).abs() < 1e-12);
        assert!((c8.epsilon - 0.5).abs() < 1e-12);
        let two = SimplicialComplex::graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(matches!(cheeger_check(&two, DEFAULT_BUDGET), Err(Error::Disconnected)));
        let path = SimplicialComplex::graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(cheeger_check(&path, DEFAULT_BUDGET), Err(Error::NotRegular)));
    }

    #[test]
    fn witness_on_planted_cocycle() {
        let s = counterexample_y(20, 2, 1.0, 1).unwrap();
        let (r, class) = z2_expansion_witness(&s.complex, &s.a, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.epsilon, 0.0);
        assert!(class.weight > 0);
        assert!(cochain::gf2_cohomology_dim(&s.complex, 1).unwrap() >= 1);
        let x = SimplicialComplex::complete(5, 2).unwrap();
        let star = Z2Cochain { dim: 1, support: (0..4).collect() };
        assert!(matches!(z2_expansion_witness(&x, &star, DEFAULT_BUDGET), Err(Error::TrivialClass)));
    }

    #[test]
    fn spectral_expansion_of_complete_complexes() {
        let r = spectral_expansion(&SimplicialComplex::complete(4, 2).unwrap()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = spectral_expansion(&SimplicialComplex::complete(5, 2).unwrap()).unwrap();
        assert!((r.value - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn positive_expansion_implies_vanishing_cohomology() {
        let x = SimplicialComplex::complete(6, 2).unwrap();
        let mut tris: Vec<Vec<usize>> = x.faces(2).iter().map(|f| f.vertices().to_vec()).collect();
        tris.retain(|t| t != &vec![0, 1, 2] && t != &vec![3, 4, 5]);
        let y = SimplicialComplex::build(6, 2, tris, 1).unwrap();
        let r = z2_expansion_exact(&y, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.epsilon > 0.0);
        assert_eq!(cochain::gf2_cohomology_dim(&y, 1).unwrap(), 0);
        let h = spectral::hodge_check(&y, 1, &crate::cochain::WeightFunction::Unit).unwrap();
        assert_eq!(h.harmonic_dim, 0);
    }
}
