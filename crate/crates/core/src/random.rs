//! Seeded random complexes: `G(n,p)`, Linial–Meshulam `X^k(n,p)`, and the
//! planted-cochain families `Y^k(n,p)` and `Z^k(n,p,q)`.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed.
//! Randomness comes from ChaCha8 with a separate stream per stage, so a
//! stage never shifts the draws of another:
//!
//! | stream | use |
//! |---|---|
//! | 0 | per-trial seed derivation |
//! | 1 | the planted cochain `a` |
//! | 2 | primary face selection |
//! | 3 | the additional `X^k(n,q)` layer of `Z` |
//! | 4 | edge-pair sampling in [`link_distribution_test`] |
//!
//! Within a stream, one `u64` is drawn per candidate face in lexicographic
//! order and compared, as a 53-bit uniform in `[0,1)`, against the
//! probability.

use itertools::Itertools;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cochain::Z2Cochain;
use crate::complex::{binomial, Face, SimplicialComplex};
use crate::error::{Error, Result};

pub const STREAM_TRIAL: u64 = 0;
pub const STREAM_PLANTED: u64 = 1;
pub const STREAM_FACES: u64 = 2;
pub const STREAM_EXTRA: u64 = 3;
pub const STREAM_PAIRS: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gnp,
    LinialMeshulam,
    CounterexampleY,
    CounterexampleZ,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Gnp => "gnp",
            ModelKind::LinialMeshulam => "linial_meshulam",
            ModelKind::CounterexampleY => "counterexample_y",
            ModelKind::CounterexampleZ => "counterexample_z",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelKind,
    pub n: usize,
    pub k: i32,
    pub p: f64,
    #[serde(default)]
    pub q: f64,
    pub seed: u64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not a probability")));
            }
        }
        if self.model == ModelKind::Gnp && self.k != 1 {
            return Err(Error::InvalidParameter("gnp has k = 1".into()));
        }
        if self.k < 1 || self.k as usize >= self.n {
            return Err(Error::InvalidParameter(format!("need 1 <= k < n, got n={}, k={}", self.n, self.k)));
        }
        Ok(())
    }

    /// Edge probability of the link of a `(k-2)`-face.
    pub fn link_edge_probability(&self) -> f64 {
        match self.model {
            ModelKind::Gnp | ModelKind::LinialMeshulam => self.p,
            ModelKind::CounterexampleY => self.p / 2.0,
            ModelKind::CounterexampleZ => self.p / 2.0 + self.q - self.p * self.q / 2.0,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ModelSpec { seed, ..self.clone() }
    }
}

/// A generated complex and, for the planted families, the cochain `a`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub complex: SimplicialComplex,
    pub planted: Option<Z2Cochain>,
}

/// `Y` or `Z` sample together with its planted `(k-1)`-cochain.
#[derive(Clone, Debug)]
pub struct CounterexampleSample {
    pub complex: SimplicialComplex,
    pub a: Z2Cochain,
}

pub fn stage_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of trial `trial` derived from a master seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = stage_rng(seed, STREAM_TRIAL);
    rng.set_word_pos(2 * trial as u128);
    rng.next_u64()
}

#[inline]
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{p} is not a probability")));
    }
    Ok(())
}

fn check_dims(n: usize, k: i32) -> Result<()> {
    if k < 1 || k as usize >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    Ok(())
}

fn bernoulli_faces(n: usize, k: i32, p: f64, seed: u64, stream: u64) -> Vec<Vec<usize>> {
    let mut rng = stage_rng(seed, stream);
    (0..n).combinations(k as usize + 1).filter(|_| uniform(&mut rng) < p).collect()
}

/// Erdős–Rényi graph `G(n,p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<SimplicialComplex> {
    check_probability(p)?;
    if n < 2 {
        return SimplicialComplex::build(n, 1, Vec::new(), 0);
    }
    linial_meshulam(n, 1, p, seed)
}

/// `X^k(n,p)`: complete `(k-1)`-skeleton, each `k`-face independently.
pub fn linial_meshulam(n: usize, k: i32, p: f64, seed: u64) -> Result<SimplicialComplex> {
    check_probability(p)?;
    check_dims(n, k)?;
    SimplicialComplex::build(n, k, bernoulli_faces(n, k, p, seed, STREAM_FACES), k - 1)
}

fn planted_cochain(n: usize, k: i32, seed: u64) -> Vec<bool> {
    let mut rng = stage_rng(seed, STREAM_PLANTED);
    (0..binomial(n, k as usize)).map(|_| uniform(&mut rng) < 0.5).collect()
}

fn y_faces(n: usize, k: i32, p: f64, seed: u64) -> Result<(Vec<Vec<usize>>, Vec<bool>)> {
    let a = planted_cochain(n, k, seed);
    let skeleton = SimplicialComplex::complete(n, k - 1)?;
    let mut rng = stage_rng(seed, STREAM_FACES);
    let mut scratch = Vec::with_capacity(k as usize);
    let faces = (0..n)
        .combinations(k as usize + 1)
        .filter(|h| {
            let u = uniform(&mut rng);
            let mut parity = false;
            for j in 0..h.len() {
                scratch.clear();
                scratch.extend_from_slice(&h[..j]);
                scratch.extend_from_slice(&h[j + 1..]);
                let idx = skeleton.index_of(&scratch).expect("complete skeleton");
                parity ^= a[idx];
            }
            !parity && u < p
        })
        .collect();
    Ok((faces, a))
}

fn to_cochain(k: i32, a: &[bool]) -> Z2Cochain {
    Z2Cochain { dim: k - 1, support: (0..a.len()).filter(|&i| a[i]).collect() }
}

/// `Y^k(n,p)`: plant a uniform `a`, keep each "good" `(k+1)`-set (even
/// number of `a`-faces in its boundary) with probability `p`.
pub fn counterexample_y(n: usize, k: i32, p: f64, seed: u64) -> Result<CounterexampleSample> {
    check_probability(p)?;
    check_dims(n, k)?;
    let (faces, a) = y_faces(n, k, p, seed)?;
    Ok(CounterexampleSample { complex: SimplicialComplex::build(n, k, faces, k - 1)?, a: to_cochain(k, &a) })
}

/// `Z^k(n,p,q) = Y^k(n,p) ∪ X^k(n,q)`, sharing the planted cochain.
pub fn counterexample_z(n: usize, k: i32, p: f64, q: f64, seed: u64) -> Result<CounterexampleSample> {
    check_probability(p)?;
    check_probability(q)?;
    check_dims(n, k)?;
    let (y, a) = y_faces(n, k, p, seed)?;
    let extra = bernoulli_faces(n, k, q, seed, STREAM_EXTRA);
    let faces: Vec<Vec<usize>> = y.into_iter().merge(extra).dedup().collect();
    Ok(CounterexampleSample { complex: SimplicialComplex::build(n, k, faces, k - 1)?, a: to_cochain(k, &a) })
}

pub fn generate(spec: &ModelSpec) -> Result<Sample> {
    spec.validate()?;
    Ok(match spec.model {
        ModelKind::Gnp => Sample { complex: gnp(spec.n, spec.p, spec.seed)?, planted: None },
        ModelKind::LinialMeshulam => {
            Sample { complex: linial_meshulam(spec.n, spec.k, spec.p, spec.seed)?, planted: None }
        }
        ModelKind::CounterexampleY => {
            let s = counterexample_y(spec.n, spec.k, spec.p, spec.seed)?;
            Sample { complex: s.complex, planted: Some(s.a) }
        }
        ModelKind::CounterexampleZ => {
            let s = counterexample_z(spec.n, spec.k, spec.p, spec.q, spec.seed)?;
            Sample { complex: s.complex, planted: Some(s.a) }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairStatistic {
    pub first: [usize; 2],
    pub second: [usize; 2],
    pub joint_frequency: f64,
    pub marginal_product: f64,
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkDistributionReport {
    pub face: Face,
    pub trials: usize,
    pub target: f64,
    /// Link edges as pairs of original vertex ids.
    pub edges: Vec<[usize; 2]>,
    pub frequencies: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    pub pairs: Vec<PairStatistic>,
    pub max_abs_pair_z: f64,
}

fn z_score(observed: f64, expected: f64, trials: usize) -> f64 {
    let var = expected * (1.0 - expected) / trials as f64;
    if var == 0.0 {
        if (observed - expected).abs() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (observed - expected) / var.sqrt()
    }
}

/// Empirical distribution of the link of the `(k-2)`-face `face` over
/// `trials` independent samples of `model`.
///
/// Per-edge frequencies are scored against the model's link edge
/// probability; `pairs` random edge pairs are scored for independence
/// against the product of their empirical marginals.
pub fn link_distribution_test(
    model: &ModelSpec,
    face: &Face,
    trials: usize,
    pairs: usize,
) -> Result<LinkDistributionReport> {
    model.validate()?;
    if model.model == ModelKind::Gnp {
        return Err(Error::InvalidParameter("link test needs k >= 2 or a simplicial model".into()));
    }
    if face.dim() != model.k - 2 || face.vertices().iter().any(|&v| v >= model.n) {
        return Err(Error::InvalidParameter(format!("{face} is not a ({})-face on {} vertices", model.k - 2, model.n)));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let outside: Vec<usize> = (0..model.n).filter(|v| !face.contains_vertex(*v)).collect();
    let edges: Vec<[usize; 2]> = outside.iter().copied().tuple_combinations().map(|(u, v)| [u, v]).collect();
    let tops: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let mut t = face.vertices().to_vec();
            t.extend_from_slice(e);
            t.sort_unstable();
            t
        })
        .collect();

    let mut pair_rng = stage_rng(model.seed, STREAM_PAIRS);
    let total_pairs = edges.len() * edges.len().saturating_sub(1) / 2;
    let want = pairs.min(total_pairs);
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(want);
    while chosen.len() < want {
        let a = pair_rng.random_range(0..edges.len());
        let b = pair_rng.random_range(0..edges.len());
        let (a, b) = (a.min(b), a.max(b));
        if a != b && !chosen.contains(&(a, b)) {
            chosen.push((a, b));
        }
    }

    let mut counts = vec![0usize; edges.len()];
    let mut joint = vec![0usize; chosen.len()];
    let mut present = vec![false; edges.len()];
    for t in 0..trials {
        let sample = generate(&model.with_seed(trial_seed(model.seed, t)))?;
        for (e, top) in tops.iter().enumerate() {
            present[e] = sample.complex.index_of(top).is_some();
            counts[e] += present[e] as usize;
        }
        for (j, &(a, b)) in chosen.iter().enumerate() {
            joint[j] += (present[a] && present[b]) as usize;
        }
    }
    let target = model.link_edge_probability();
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let z_scores: Vec<f64> = frequencies.iter().map(|&f| z_score(f, target, trials)).collect();
    let pair_stats: Vec<PairStatistic> = chosen
        .iter()
        .zip(&joint)
        .map(|(&(a, b), &j)| {
            let product = frequencies[a] * frequencies[b];
            let observed = j as f64 / trials as f64;
            PairStatistic {
                first: edges[a],
                second: edges[b],
                joint_frequency: observed,
                marginal_product: product,
                z_score: z_score(observed, product, trials),
            }
        })
        .collect();
    Ok(LinkDistributionReport {
        face: face.clone(),
        trials,
        target,
        max_abs_z: z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs())),
        max_abs_pair_z: pair_stats.iter().fold(0.0f64, |m, s| m.max(s.z_score.abs())),
        edges,
        frequencies,
        z_scores,
        pairs: pair_stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::z2_coboundary;

    fn binomial_sigma(n: usize, p: f64) -> f64 {
        (n as f64 * p * (1.0 - p)).sqrt()
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(gnp(7, 0.0, 1).unwrap().face_count(1), 0);
        assert_eq!(gnp(7, 1.0, 1).unwrap(), SimplicialComplex::complete(7, 1).unwrap());
        assert_eq!(linial_meshulam(6, 2, 1.0, 3).unwrap(), SimplicialComplex::complete(6, 2).unwrap());
        let empty = linial_meshulam(6, 2, 0.0, 3).unwrap();
        assert_eq!(empty.f_vector(), vec![6, 15, 0]);
        let y = counterexample_y(8, 2, 0.0, 5).unwrap();
        assert_eq!(y.complex.face_count(2), 0);
        assert_eq!(y.a.dim, 1);
        let z = counterexample_z(8, 2, 1.0, 1.0, 5).unwrap();
        assert_eq!(z.complex, SimplicialComplex::complete(8, 2).unwrap());
    }

    #[test]
    fn edge_count_concentrates() {
        let g = gnp(1000, 0.3, 42).unwrap();
        let c = binomial(1000, 2);
        let dev = (g.face_count(1) as f64 - 0.3 * c as f64).abs();
        assert!(dev <= 4.0 * binomial_sigma(c, 0.3));
        let x = linial_meshulam(50, 2, 0.2, 42).unwrap();
        let c = binomial(50, 3);
        let dev = (x.face_count(2) as f64 - 0.2 * c as f64).abs();
        assert!(dev <= 4.0 * binomial_sigma(c, 0.2));
    }

    #[test]
    fn determinism() {
        let a = counterexample_z(12, 2, 0.7, 0.2, 99).unwrap();
        let b = counterexample_z(12, 2, 0.7, 0.2, 99).unwrap();
        assert_eq!(a.complex, b.complex);
        assert_eq!(a.a, b.a);
        let c = counterexample_z(12, 2, 0.7, 0.2, 100).unwrap();
        assert_ne!(a.complex, c.complex);
    }

    #[test]
    fn z_with_q_zero_equals_y() {
        for seed in 0..5 {
            let y = counterexample_y(10, 2, 0.8, seed).unwrap();
            let z = counterexample_z(10, 2, 0.8, 0.0, seed).unwrap();
            assert_eq!(y.complex, z.complex);
            assert_eq!(y.a, z.a);
        }
    }

    #[test]
    fn planted_cochain_is_a_cocycle_of_y() {
        for seed in 0..10 {
            let s = counterexample_y(12, 2, 1.0, seed).unwrap();
            assert!(z2_coboundary(&s.complex, &s.a).unwrap().support.is_empty());
            // every k-face is good
            let a = s.a.to_bits(&s.complex).unwrap();
            for t in 0..s.complex.face_count(2) {
                let odd = s.complex.boundary(2, t).iter().filter(|(c, _)| a.get(*c)).count() % 2;
                assert_eq!(odd, 0);
            }
        }
        let s = counterexample_y(9, 3, 1.0, 4).unwrap();
        assert!(z2_coboundary(&s.complex, &s.a).unwrap().support.is_empty());
    }

    #[test]
    fn y_face_probability_is_half() {
        let c = binomial(20, 3);
        let trials = 200;
        let total: usize =
            (0..trials).map(|t| counterexample_y(20, 2, 1.0, trial_seed(7, t)).unwrap().complex.face_count(2)).sum();
        let mean = total as f64 / trials as f64;
        // the count is a sum of C(n,3) pairwise independent half-coins
        let sigma = binomial_sigma(c, 0.5) / (trials as f64).sqrt();
        assert!((mean - 0.5 * c as f64).abs() <= 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn z_coboundary_of_a_is_small() {
        let s = counterexample_z(20, 2, 1.0, 0.3, 8).unwrap();
        let d = z2_coboundary(&s.complex, &s.a).unwrap();
        assert!(d.support.len() as f64 <= 0.3 * binomial(20, 3) as f64);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| trial_seed(1, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(trial_seed(1, 3), trial_seed(1, 3));
    }

    #[test]
    fn link_targets() {
        let z = ModelSpec { model: ModelKind::CounterexampleZ, n: 20, k: 2, p: 1.0, q: 0.3, seed: 0 };
        assert!((z.link_edge_probability() - 0.65).abs() < 1e-15);
        let lm = ModelSpec { model: ModelKind::LinialMeshulam, p: 0.4, ..z.clone() };
        assert_eq!(lm.link_edge_probability(), 0.4);
        let r = link_distribution_test(&lm.with_seed(3), &Face::vertex(0), 300, 10).unwrap();
        assert_eq!(r.edges.len(), binomial(19, 2));
        assert!(r.max_abs_z < 5.0);
        assert_eq!(r.pairs.len(), 10);
    }

    #[test]
    fn model_spec_json() {
        let s = ModelSpec { model: ModelKind::CounterexampleY, n: 20, k: 2, p: 1.0, q: 0.0, seed: 5 };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"model":"counterexample_y","n":20,"k":2,"p":1.0,"q":0.0,"seed":5}"#);
        let back: ModelSpec = serde_json::from_str(r#"{"model":"gnp","n":5,"k":1,"p":0.5,"seed":1}"#).unwrap();
        assert_eq!(back.q, 0.0);
    }
}
