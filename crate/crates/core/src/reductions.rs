//! Label-Cover to LLP bag samplers: the OR-vs-CNF and OR-vs-DNF reductions
//! from bipartite instances, and the folded parity reduction from smooth ones.
//!
//! Points live in `{0,1}^{V×[M]}` flattened as `index(v, i) = v·M + i`.
//! Every instance sampler draws bag `k` from `derived_rng(seed, k)`.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dictator_test::{self, DictError, DictParams};
use crate::f2_linalg::{self, BitVector, F2Matrix, LinalgError};
use crate::labelcover::{BipartiteLabelCover, SmoothLabelCover};
use crate::llp_core::{Bag, CnfHypothesis, LlpInstance, ParityHypothesis};
use crate::seeding;

/// Largest `T`; keeps every scale and its sampled vertex lists addressable.
pub const MAX_SCALE_EXPONENT: u32 = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("scale exponent T = {0} must lie in [10, {MAX_SCALE_EXPONENT}]")]
    ScaleExponent(u32),
    #[error("left vertex {0} has an empty neighbourhood")]
    EmptyNeighbourhood(usize),
    #[error("labeling does not cover all {expected} vertices (got {found})")]
    LabelingLength { expected: usize, found: usize },
    #[error("label {label} of vertex {vertex} is outside [M]")]
    LabelOutOfRange { vertex: usize, label: usize },
    #[error("the instance has no left vertices")]
    NoVertices,
    #[error(transparent)]
    Dict(#[from] DictError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Flattened coordinate of `(v, i)` in `{0,1}^{V×[M]}`.
pub fn coordinate(v: usize, i: usize, m_labels: usize) -> usize {
    v * m_labels + i
}

/// The scales `{2, 4, …, 2^T}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleSet {
    t: u32,
}

impl ScaleSet {
    pub fn new(t: u32) -> Result<Self, ReductionError> {
        if !(10..=MAX_SCALE_EXPONENT).contains(&t) {
            return Err(ReductionError::ScaleExponent(t));
        }
        Ok(Self { t })
    }

    pub fn exponent(&self) -> u32 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.t as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<u64> {
        (1..=self.t).map(|k| 1u64 << k).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        1u64 << rng.random_range(1..=self.t)
    }
}

/// `L(s) = {t ≤ s/√T}` and `R(s) = {t ≥ s·√T}` over the scale set.
pub fn scale_partition(s: f64, scales: &ScaleSet) -> (Vec<u64>, Vec<u64>) {
    assert!(s > 0.0, "s must be positive");
    let root = f64::from(scales.t).sqrt();
    let members = scales.members();
    let left = members.iter().copied().filter(|&t| t as f64 <= s / root).collect();
    let right = members.iter().copied().filter(|&t| t as f64 >= s * root).collect();
    (left, right)
}

fn sample_neighbours<R: Rng + ?Sized>(lc: &BipartiteLabelCover, u: usize, count: u64, rng: &mut R) -> Vec<usize> {
    let nbhd = lc.neighbourhood(u);
    (0..count).map(|_| nbhd[rng.random_range(0..nbhd.len())]).collect()
}

/// Point active on `(v, i)` for each sampled edge `(v, u)` with `π_vu(i) ∈ J`
/// (or `∉ J` when `complement`).
fn block_point(lc: &BipartiteLabelCover, edges: &[usize], in_j: &[bool], complement: bool) -> BitVector {
    let m = lc.m_labels();
    let mut x = BitVector::zeros(lc.v_count() * m);
    for &e in edges {
        let v = lc.edges()[e].0;
        for (i, &j) in lc.projection(e).iter().enumerate() {
            if in_j[j] != complement {
                x.set(coordinate(v, i, m), true);
            }
        }
    }
    x
}

fn two_point_bag<R: Rng + ?Sized>(lc: &BipartiteLabelCover, u: usize, t: u64, rng: &mut R) -> Bag {
    let vx = sample_neighbours(lc, u, t, rng);
    let vz = sample_neighbours(lc, u, t, rng);
    let in_j: Vec<bool> = (0..lc.n_labels()).map(|_| rng.random_bool(0.5)).collect();
    let x = block_point(lc, &vx, &in_j, false);
    let z = block_point(lc, &vz, &in_j, true);
    Bag::new(vec![x, z], 1).expect("two points, one positive")
}

fn check_sampler_input(lc: &BipartiteLabelCover) -> Result<(), ReductionError> {
    if lc.u_count() == 0 {
        return Err(ReductionError::NoVertices);
    }
    match (0..lc.u_count()).find(|&u| lc.neighbourhood(u).is_empty()) {
        Some(u) => Err(ReductionError::EmptyNeighbourhood(u)),
        None => Ok(()),
    }
}

/// One bag of the OR-vs-CNF distribution: `t ∼ U(𝒯)`, `u ∼ U(U)`, `t` draws
/// with replacement from `N(u)` for each of `x` and `z`, `J` a uniform subset.
pub fn or_cnf_bag_sampler<R: Rng + ?Sized>(
    lc: &BipartiteLabelCover,
    scales: &ScaleSet,
    rng: &mut R,
) -> Result<Bag, ReductionError> {
    check_sampler_input(lc)?;
    let t = scales.sample(rng);
    let u = rng.random_range(0..lc.u_count());
    Ok(two_point_bag(lc, u, t, rng))
}

/// One bag of the OR-vs-DNF distribution: with probability 1/2 the unit bag
/// with all of a random neighbour's block set, otherwise the two-point bag
/// with `t_per_side` draws per point.
pub fn or_dnf_bag_sampler<R: Rng + ?Sized>(
    lc: &BipartiteLabelCover,
    t_per_side: u64,
    rng: &mut R,
) -> Result<Bag, ReductionError> {
    check_sampler_input(lc)?;
    let u = rng.random_range(0..lc.u_count());
    if rng.random_bool(0.5) {
        let e = sample_neighbours(lc, u, 1, rng)[0];
        let v = lc.edges()[e].0;
        let m = lc.m_labels();
        let mut x = BitVector::zeros(lc.v_count() * m);
        for i in 0..m {
            x.set(coordinate(v, i, m), true);
        }
        Ok(Bag::new(vec![x], 1).expect("one positive point"))
    } else {
        Ok(two_point_bag(lc, u, t_per_side, rng))
    }
}

fn sample_instance<F>(dim: usize, bags: usize, seed: u64, draw: F) -> Result<LlpInstance, ReductionError>
where
    F: Fn(&mut seeding::Rng) -> Result<Bag, ReductionError> + Sync,
{
    let bags = (0..bags as u64)
        .into_par_iter()
        .map(|k| draw(&mut seeding::derived_rng(seed, k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LlpInstance::new(dim, bags).expect("samplers emit points of the instance dimension"))
}

pub fn or_cnf_instance(
    lc: &BipartiteLabelCover,
    scales: &ScaleSet,
    bags: usize,
    seed: u64,
) -> Result<LlpInstance, ReductionError> {
    check_sampler_input(lc)?;
    sample_instance(lc.v_count() * lc.m_labels(), bags, seed, |rng| {
        or_cnf_bag_sampler(lc, scales, rng)
    })
}

pub fn or_dnf_instance(
    lc: &BipartiteLabelCover,
    t_per_side: u64,
    bags: usize,
    seed: u64,
) -> Result<LlpInstance, ReductionError> {
    check_sampler_input(lc)?;
    sample_instance(lc.v_count() * lc.m_labels(), bags, seed, |rng| {
        or_dnf_bag_sampler(lc, t_per_side, rng)
    })
}

fn check_right_labels(labels: &[usize], v_count: usize, m_labels: usize) -> Result<(), ReductionError> {
    if labels.len() != v_count {
        return Err(ReductionError::LabelingLength {
            expected: v_count,
            found: labels.len(),
        });
    }
    match labels.iter().enumerate().find(|(_, &l)| l >= m_labels) {
        Some((vertex, &label)) => Err(ReductionError::LabelOutOfRange { vertex, label }),
        None => Ok(()),
    }
}

/// `h*(x) = ⋁_v x_{v,ρ(v)}` as a single monotone clause.
pub fn canonical_or(lc: &BipartiteLabelCover, right_labels: &[usize]) -> Result<CnfHypothesis, ReductionError> {
    let m = lc.m_labels();
    check_right_labels(right_labels, lc.v_count(), m)?;
    Ok(CnfHypothesis::monotone_or(
        right_labels.iter().enumerate().map(|(v, &l)| coordinate(v, l, m)),
    ))
}

/// The parity reduction over a smooth instance: constraints `C[e,j]`, a basis
/// of their common kernel `H`, and the dictatorship-test parameters.
#[derive(Debug, Clone)]
pub struct FoldedReduction {
    slc: SmoothLabelCover,
    dict: DictParams,
    constraint_matrix: F2Matrix,
    h_basis: Vec<BitVector>,
}

impl FoldedReduction {
    pub fn label_cover(&self) -> &SmoothLabelCover {
        &self.slc
    }

    pub fn q(&self) -> usize {
        self.dict.q()
    }

    pub fn constraint_matrix(&self) -> &F2Matrix {
        &self.constraint_matrix
    }

    pub fn h_basis(&self) -> &[BitVector] {
        &self.h_basis
    }

    /// Length of the unfolded points, `|V|·M`.
    pub fn unfolded_dim(&self) -> usize {
        self.slc.v_count() * self.slc.m_labels()
    }

    pub fn folded_dim(&self) -> usize {
        self.h_basis.len()
    }

    /// `c ∈ H` iff every constraint row is orthogonal to `c`.
    pub fn contains(&self, c: &BitVector) -> Result<bool, ReductionError> {
        Ok(self.constraint_matrix.mul_vec(c)?.is_zero())
    }
}

/// One row per `(e, j)`: `⊕_{i∈π_{e,a}⁻¹(j)} x_{a,i} ⊕ ⊕_{i∈π_{e,b}⁻¹(j)} x_{b,i} = 0`.
pub fn build_folded_reduction(slc: &SmoothLabelCover, q: usize) -> Result<FoldedReduction, ReductionError> {
    let m = slc.m_labels();
    let n = slc.n_labels();
    let dim = slc.v_count() * m;
    let dict = DictParams::new(m, q)?;
    let mut constraint_matrix = F2Matrix::new(dim);
    for (e, &(a, b)) in slc.edges().iter().enumerate() {
        let mut rows = vec![BitVector::zeros(dim); n];
        for (side, v) in [(0, a), (1, b)] {
            for (i, &j) in slc.projection(e, side).iter().enumerate() {
                rows[j].flip(coordinate(v, i, m));
            }
        }
        for row in rows {
            constraint_matrix.push_row(row)?;
        }
    }
    let h_basis = f2_linalg::nullspace(&constraint_matrix);
    Ok(FoldedReduction {
        slc: slc.clone(),
        dict,
        constraint_matrix,
        h_basis,
    })
}

/// Indicator of `{(v, ρ(v))}`, the coefficients of `⊕_v x_{v,ρ(v)}`.
pub fn canonical_parity(slc: &SmoothLabelCover, labels: &[usize]) -> Result<BitVector, ReductionError> {
    let m = slc.m_labels();
    check_right_labels(labels, slc.v_count(), m)?;
    let mut c = BitVector::zeros(slc.v_count() * m);
    for (v, &l) in labels.iter().enumerate() {
        c.set(coordinate(v, l, m), true);
    }
    Ok(c)
}

/// Basis coordinates `x̄_k = ⟨b_k, x̂⟩`.
pub fn fold_point(fr: &FoldedReduction, x: &BitVector) -> Result<BitVector, ReductionError> {
    if x.len() != fr.unfolded_dim() {
        return Err(LinalgError::LengthMismatch {
            expected: fr.unfolded_dim(),
            found: x.len(),
        }
        .into());
    }
    Ok(BitVector::from_bits(fr.h_basis.iter().map(|b| b.dot(x))))
}

/// A coefficient vector `c ∈ H` rewritten in the basis of `H`, so that
/// `⟨c̄, fold(x̂)⟩ = ⟨c, x̂⟩`. Fails with `NotInSpan` when `c ∉ H`.
pub fn fold_parity(fr: &FoldedReduction, c0: bool, c: &BitVector) -> Result<ParityHypothesis, ReductionError> {
    let coeffs = f2_linalg::express_in_basis(c, &fr.h_basis)?;
    Ok(ParityHypothesis::new(c0, coeffs))
}

/// Unfolded bag: a dictatorship-test bag on the block of a uniform vertex,
/// zero elsewhere.
pub fn sample_parity_preimage<R: Rng + ?Sized>(fr: &FoldedReduction, rng: &mut R) -> Bag {
    let m = fr.slc.m_labels();
    let v = rng.random_range(0..fr.slc.v_count());
    let block = dictator_test::sample_dict_bag(&fr.dict, rng);
    let points = block
        .points()
        .iter()
        .map(|p| {
            let mut x = BitVector::zeros(fr.unfolded_dim());
            for i in p.ones_iter() {
                x.set(coordinate(v, i, m), true);
            }
            x
        })
        .collect();
    Bag::new(points, block.positives()).expect("same shape as the block bag")
}

pub fn fold_bag(fr: &FoldedReduction, bag: &Bag) -> Result<Bag, ReductionError> {
    let points = bag.points().iter().map(|x| fold_point(fr, x)).collect::<Result<Vec<_>, _>>()?;
    Ok(Bag::new(points, bag.positives()).expect("folding keeps size and positives"))
}

/// One bag of the folded parity distribution, in the basis coordinates of `H`.
pub fn sample_parity_bag<R: Rng + ?Sized>(fr: &FoldedReduction, rng: &mut R) -> Bag {
    let pre = sample_parity_preimage(fr, rng);
    fold_bag(fr, &pre).expect("preimage has the unfolded dimension")
}

pub fn parity_instance(fr: &FoldedReduction, bags: usize, seed: u64) -> Result<LlpInstance, ReductionError> {
    if fr.slc.v_count() == 0 {
        return Err(ReductionError::NoVertices);
    }
    sample_instance(fr.folded_dim(), bags, seed, |rng| Ok(sample_parity_bag(fr, rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelcover::{planted_bipartite, planted_smooth};
    use crate::llp_core::{satisfies, Hypothesis, Literal};
    use proptest::prelude::*;

    #[test]
    fn scale_partition_small_case() {
        let scales = ScaleSet::new(10).unwrap();
        let (l, r) = scale_partition(1.0, &scales);
        assert!(l.is_empty());
        assert_eq!(r, vec![4, 8, 16, 32, 64, 128, 256, 512, 1024]);
        assert!((l.len() + r.len()) as f64 >= 10.0 - 2.0 * 10f64.log2());

        let huge = 1024.0 * 10f64.sqrt() * 2.0;
        let (l, r) = scale_partition(huge, &scales);
        assert_eq!(l, scales.members());
        assert!(r.is_empty());
        assert!(ScaleSet::new(9).is_err());
        assert!(ScaleSet::new(41).is_err());
    }

    proptest! {
        #[test]
        fn scale_partition_lemma(t in 10u32..=40, log_s in -5.0f64..50.0) {
            let scales = ScaleSet::new(t).unwrap();
            let (l, r) = scale_partition(log_s.exp2(), &scales);
            prop_assert!(l.iter().all(|x| !r.contains(x)));
            prop_assert!((l.len() + r.len()) as f64 >= f64::from(t) - 2.0 * f64::from(t).log2());
        }
    }

    fn planted(seed: u64) -> (BipartiteLabelCover, Vec<usize>, Vec<usize>) {
        let (lc, rho) = planted_bipartite(6, 6, 3, 3, 4, seed).unwrap();
        (lc, rho.left, rho.right)
    }

    #[test]
    fn or_cnf_points_are_supported_on_sampled_blocks() {
        let (lc, _, _) = planted(1);
        let scales = ScaleSet::new(10).unwrap();
        let mut rng = seeding::rng_from_seed(2);
        for _ in 0..200 {
            let bag = or_cnf_bag_sampler(&lc, &scales, &mut rng).unwrap();
            assert_eq!((bag.size(), bag.positives(), bag.dim()), (2, 1, 24));
        }
    }

    #[test]
    fn or_cnf_canonical_labels_follow_j() {
        // Replay the sampler's draws to recover u and J, then check h*(x), h*(z).
        let (lc, left, right) = planted(3);
        let h: Hypothesis = canonical_or(&lc, &right).unwrap().into();
        let scales = ScaleSet::new(10).unwrap();
        for k in 0..1000 {
            let mut rng = seeding::derived_rng(4, k);
            let mut replay = rng.clone();
            let bag = or_cnf_bag_sampler(&lc, &scales, &mut rng).unwrap();
            let t = scales.sample(&mut replay);
            let u = replay.random_range(0..lc.u_count());
            let vx = sample_neighbours(&lc, u, t, &mut replay);
            let _ = sample_neighbours(&lc, u, t, &mut replay);
            let in_j: Vec<bool> = (0..lc.n_labels()).map(|_| replay.random_bool(0.5)).collect();
            assert_eq!(bag.points()[0], block_point(&lc, &vx, &in_j, false));
            let hx = h.evaluate(&bag.points()[0]).unwrap();
            let hz = h.evaluate(&bag.points()[1]).unwrap();
            assert_eq!((hx, hz), (in_j[left[u]], !in_j[left[u]]));
        }
    }

    #[test]
    fn canonical_or_satisfies_planted_reductions() {
        for seed in 0..3 {
            let (lc, _, right) = planted(seed);
            let h: Hypothesis = canonical_or(&lc, &right).unwrap().into();
            let cnf = or_cnf_instance(&lc, &ScaleSet::new(10).unwrap(), 1000, seed).unwrap();
            let dnf = or_dnf_instance(&lc, 10, 1000, seed).unwrap();
            for bag in cnf.bags().iter().chain(dnf.bags()) {
                assert!(satisfies(bag, &h).unwrap());
            }
        }
    }

    #[test]
    fn or_dnf_bag_types_are_balanced() {
        let (lc, _, _) = planted(5);
        let inst = or_dnf_instance(&lc, 4, 10_000, 6).unwrap();
        let units = inst.bags().iter().filter(|b| b.size() == 1).count();
        // Binomial(10^4, 1/2): 4 standard deviations is 200.
        assert!((units as i64 - 5000).abs() < 200, "units = {units}");
        for bag in inst.bags().iter().filter(|b| b.size() == 1) {
            assert_eq!(bag.points()[0].weight(), lc.m_labels());
        }
    }

    #[test]
    fn canonical_or_small_cases() {
        let lc = BipartiteLabelCover::new(1, 1, 1, 2, vec![(0, 0)], vec![vec![0, 0]]).unwrap();
        assert_eq!(canonical_or(&lc, &[1]).unwrap(), CnfHypothesis::or(vec![Literal::pos(1)]));
        let lc2 = BipartiteLabelCover::new(1, 2, 2, 2, vec![(0, 0), (1, 0)], vec![vec![0, 1], vec![1, 0]]).unwrap();
        // ρ(v0) = 1, ρ(v1) = 0 → OR of coordinates 1 and 2.
        assert_eq!(
            canonical_or(&lc2, &[1, 0]).unwrap(),
            CnfHypothesis::or(vec![Literal::pos(1), Literal::pos(2)])
        );
        assert!(canonical_or(&lc2, &[1]).is_err());
        assert!(canonical_or(&lc2, &[1, 2]).is_err());
    }

    fn identity_edge(m: usize) -> SmoothLabelCover {
        let id: Vec<usize> = (0..m).collect();
        SmoothLabelCover::new(2, m, m, vec![(0, 1)], vec![[id.clone(), id]]).unwrap()
    }

    #[test]
    fn identity_projections_fold_to_m_dimensions() {
        let fr = build_folded_reduction(&identity_edge(3), 2).unwrap();
        assert_eq!(fr.folded_dim(), 3);
        // Each basis vector pairs x_{0,i} with x_{1,i}.
        for b in fr.h_basis() {
            for i in 0..3 {
                assert_eq!(b.get(i), b.get(3 + i));
            }
        }
        assert_eq!(fold_point(&fr, &BitVector::zeros(6)).unwrap(), BitVector::zeros(3));
        assert!(fold_point(&fr, &BitVector::zeros(5)).is_err());
    }

    #[test]
    fn canonical_parity_small_cases() {
        let single = SmoothLabelCover::new(1, 1, 3, vec![], vec![]).unwrap();
        assert_eq!(canonical_parity(&single, &[2]).unwrap(), "001".parse().unwrap());
        let pair = identity_edge(2);
        let c = canonical_parity(&pair, &[1, 1]).unwrap();
        assert_eq!(c, "0101".parse().unwrap());
        let fr = build_folded_reduction(&pair, 3).unwrap();
        assert!(fr.contains(&c).unwrap());
        assert!(!fr.contains(&canonical_parity(&pair, &[0, 1]).unwrap()).unwrap());
    }

    #[test]
    fn folded_reduction_yes_case() {
        for seed in 0..3 {
            let (slc, rho) = planted_smooth(8, 3, 3, 5, seed).unwrap();
            let fr = build_folded_reduction(&slc, 3).unwrap();
            assert_eq!(fr.folded_dim(), fr.unfolded_dim() - f2_linalg::rank(fr.constraint_matrix()));
            for b in fr.h_basis() {
                assert!(fr.contains(b).unwrap());
            }
            let c = canonical_parity(&slc, &rho).unwrap();
            assert!(fr.contains(&c).unwrap());
            let folded: Hypothesis = fold_parity(&fr, false, &c).unwrap().into();
            let unfolded: Hypothesis = ParityHypothesis::new(false, c.clone()).into();
            for k in 0..300 {
                let mut rng = seeding::derived_rng(seed, k);
                let pre = sample_parity_preimage(&fr, &mut rng);
                assert!(satisfies(&pre, &unfolded).unwrap());
                let bag = fold_bag(&fr, &pre).unwrap();
                assert_eq!((bag.size(), bag.positives()), (3, 1));
                assert!(satisfies(&bag, &folded).unwrap());
                for (x, xbar) in pre.points().iter().zip(bag.points()) {
                    assert_eq!(folded.evaluate(xbar).unwrap(), unfolded.evaluate(x).unwrap());
                }
            }
        }
    }

    #[test]
    fn preimage_blocks_have_one_active_point_per_coordinate() {
        let (slc, _) = planted_smooth(6, 3, 2, 4, 9).unwrap();
        let fr = build_folded_reduction(&slc, 4).unwrap();
        let mut rng = seeding::rng_from_seed(10);
        for _ in 0..100 {
            let pre = sample_parity_preimage(&fr, &mut rng);
            let mut union = BitVector::zeros(fr.unfolded_dim());
            for p in pre.points() {
                let mut overlap = union.clone();
                overlap.and_assign(p);
                assert!(overlap.is_zero());
                union.or_assign(p);
            }
            assert_eq!(union.weight(), 4);
            let v = union.first_one().unwrap() / 4;
            assert!(union.ones_iter().all(|i| i / 4 == v));
        }
    }

    proptest! {
        #[test]
        fn folding_is_linear_and_bilinear(seed in any::<u64>()) {
            let (slc, _) = planted_smooth(6, 2, 2, 3, seed % 16).unwrap();
            let fr = build_folded_reduction(&slc, 2).unwrap();
            let mut rng = seeding::rng_from_seed(seed);
            let a = BitVector::random(fr.unfolded_dim(), &mut rng);
            let b = BitVector::random(fr.unfolded_dim(), &mut rng);
            let fa = fold_point(&fr, &a).unwrap();
            let fb = fold_point(&fr, &b).unwrap();
            prop_assert_eq!(fold_point(&fr, &a.xor(&b)).unwrap(), fa.xor(&fb));
            let cbar = BitVector::random(fr.folded_dim(), &mut rng);
            let mut c = BitVector::zeros(fr.unfolded_dim());
            for k in cbar.ones_iter() {
                c.xor_assign(&fr.h_basis()[k]);
            }
            prop_assert_eq!(cbar.dot(&fa), c.dot(&a));
        }
    }

    #[test]
    fn instances_are_deterministic() {
        let (lc, _, _) = planted(7);
        let a = or_cnf_instance(&lc, &ScaleSet::new(10).unwrap(), 20, 8).unwrap();
        let b = or_cnf_instance(&lc, &ScaleSet::new(10).unwrap(), 20, 8).unwrap();
        assert_eq!(a, b);
        let (slc, _) = planted_smooth(6, 3, 2, 3, 1).unwrap();
        let fr = build_folded_reduction(&slc, 3).unwrap();
        assert_eq!(parity_instance(&fr, 10, 2).unwrap(), parity_instance(&fr, 10, 2).unwrap());
    }
}
