//! Random-parity approximation for parity-consistent LLP instances.
//!
//! Every point of a monochromatic bag and every bag's label parity give one
//! affine constraint on the unknown `(c0, c)`. Gaussian elimination leaves an
//! affine solution space; a uniformly random member labels each remaining bag
//! of size `t ≤ q` correctly with probability at least `1/2^{q−2}`.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::f2_linalg::{self, BitVector, F2Matrix, LinalgError, LinearSystem, SolutionSpace};
use crate::llp_core::{Bag, Hypothesis, LlpInstance, ParityHypothesis, Proportion};
use crate::seeding;

/// Exhaustive search enumerates `2^{dim+1}` parities; above this it refuses.
pub const MAX_BRUTE_FORCE_DIM: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("instance is inconsistent: no affine parity satisfies all monochromatic and bag-parity constraints")]
    Infeasible,
    #[error("restarts must be at least 1")]
    NoRestarts,
    #[error("dimension {dim} exceeds the exhaustive-search limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrigin {
    /// Point `point` of monochromatic bag `bag`.
    MonoPoint { bag: usize, point: usize },
    /// Label parity of bag `bag`.
    BagParity { bag: usize },
}

/// Constraint system over `dim + 1` unknowns; unknown 0 is the constant `c0`.
#[derive(Debug, Clone)]
pub struct ConstraintBuild {
    pub system: LinearSystem,
    pub provenance: Vec<RowOrigin>,
}

pub fn build_constraints(inst: &LlpInstance) -> ConstraintBuild {
    let n = inst.dim() + 1;
    let mut system = LinearSystem::with_unknowns(n);
    let mut provenance = Vec::new();
    for (bi, bag) in inst.bags().iter().enumerate() {
        if let Some(label) = bag.monochromatic_label() {
            for (pi, x) in bag.points().iter().enumerate() {
                system
                    .push(x.prepend(true), label)
                    .expect("row length is dim + 1");
                provenance.push(RowOrigin::MonoPoint { bag: bi, point: pi });
            }
        }
        let mut sum = BitVector::zeros(inst.dim());
        for x in bag.points() {
            sum.xor_assign(x);
        }
        system
            .push(sum.prepend(bag.size() % 2 == 1), bag.positives() % 2 == 1)
            .expect("row length is dim + 1");
        provenance.push(RowOrigin::BagParity { bag: bi });
    }
    ConstraintBuild { system, provenance }
}

/// Solution space over `(c0, c)` and the indices of non-monochromatic bags.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub space: SolutionSpace,
    pub residual_bags: Vec<usize>,
    /// Rows dropped by [`reduce_best_effort`]; always empty for [`reduce`].
    pub dropped: Vec<RowOrigin>,
}

fn residual_bags(inst: &LlpInstance) -> Vec<usize> {
    inst.bags()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.monochromatic_label().is_none())
        .map(|(i, _)| i)
        .collect()
}

pub fn reduce(inst: &LlpInstance) -> Result<Reduction, SolverError> {
    let build = build_constraints(inst);
    let space = f2_linalg::solve(&build.system).map_err(|e| match e {
        LinalgError::Infeasible => SolverError::Infeasible,
        other => other.into(),
    })?;
    Ok(Reduction {
        space,
        residual_bags: residual_bags(inst),
        dropped: Vec::new(),
    })
}

/// Like [`reduce`], but rows that contradict earlier rows are dropped in
/// build order instead of failing. Outside the approximation guarantee.
pub fn reduce_best_effort(inst: &LlpInstance) -> Result<Reduction, SolverError> {
    let build = build_constraints(inst);
    let n = build.system.n_unknowns();
    let mut echelon: Vec<(usize, BitVector)> = Vec::new();
    let mut kept = LinearSystem::with_unknowns(n);
    let mut dropped = Vec::new();
    for (i, row) in build.system.matrix().rows().iter().enumerate() {
        let rhs = build.system.rhs().get(i);
        let mut aug = row.clone();
        aug.push(rhs);
        for (pivot, stored) in &echelon {
            if aug.get(*pivot) {
                aug.xor_assign(stored);
            }
        }
        match aug.first_one() {
            Some(p) if p == n => dropped.push(build.provenance[i]),
            Some(p) => {
                echelon.push((p, aug));
                kept.push(row.clone(), rhs)?;
            }
            None => kept.push(row.clone(), rhs)?,
        }
    }
    let space = f2_linalg::solve(&kept)?;
    Ok(Reduction {
        space,
        residual_bags: residual_bags(inst),
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub satisfied: usize,
    pub total: usize,
    pub restarts_used: usize,
    pub rank: usize,
    pub free_count: usize,
    pub seed: u64,
}

impl SolveReport {
    pub fn fraction(&self) -> Proportion {
        Proportion::new(self.satisfied, self.total)
    }
}

fn count_satisfied(inst: &LlpInstance, h: &ParityHypothesis) -> usize {
    inst.bags()
        .iter()
        .filter(|b| b.points().iter().filter(|x| h.c0 ^ h.coeffs.dot(x)).count() == b.positives())
        .count()
}

/// Draws `restarts` uniform members of the solution space (draw `r` from
/// stream `(seed, r)`) and keeps the first one satisfying the most bags.
pub fn random_parity_solve(
    inst: &LlpInstance,
    seed: u64,
    restarts: usize,
) -> Result<(ParityHypothesis, SolveReport), SolverError> {
    let reduction = reduce(inst)?;
    solve_from_reduction(inst, &reduction, seed, restarts)
}

pub fn solve_from_reduction(
    inst: &LlpInstance,
    reduction: &Reduction,
    seed: u64,
    restarts: usize,
) -> Result<(ParityHypothesis, SolveReport), SolverError> {
    if restarts == 0 {
        return Err(SolverError::NoRestarts);
    }
    let mut best: Option<(ParityHypothesis, usize)> = None;
    for r in 0..restarts {
        let mut rng = seeding::derived_rng(seed, r as u64);
        let h = ParityHypothesis::from_unknowns(&f2_linalg::sample_solution(&reduction.space, &mut rng));
        let sat = count_satisfied(inst, &h);
        if best.as_ref().is_none_or(|(_, s)| sat > *s) {
            best = Some((h, sat));
        }
    }
    let (h, satisfied) = best.expect("restarts >= 1");
    let report = SolveReport {
        satisfied,
        total: inst.len(),
        restarts_used: restarts,
        rank: reduction.space.rank(),
        free_count: reduction.space.dim(),
        seed,
    };
    Ok((h, report))
}

/// Exhaustive maximum over all affine parities. Ties go to the
/// lexicographically smallest bitstring `c0 coeffs[0] coeffs[1] …`.
pub fn brute_force_best_parity(inst: &LlpInstance) -> Result<(ParityHypothesis, usize), SolverError> {
    let d = inst.dim();
    if d > MAX_BRUTE_FORCE_DIM {
        return Err(SolverError::DimensionTooLarge {
            dim: d,
            max: MAX_BRUTE_FORCE_DIM,
        });
    }
    // Candidate n encodes the bitstring MSB-first: c0 at bit d, coeffs[k] at bit d-1-k,
    // so integer order is lexicographic order.
    let bags: Vec<(Vec<u32>, usize)> = inst
        .bags()
        .iter()
        .map(|b| {
            let masks = b
                .points()
                .iter()
                .map(|x| {
                    let mut m = 1u32 << d;
                    for k in x.ones_iter() {
                        m |= 1 << (d - 1 - k);
                    }
                    m
                })
                .collect();
            (masks, b.positives())
        })
        .collect();
    let score = |n: u32| {
        bags.iter()
            .filter(|(masks, pos)| masks.iter().filter(|&&m| (n & m).count_ones() & 1 == 1).count() == *pos)
            .count()
    };
    let total: u64 = 1 << (d + 1);
    let chunk: u64 = 1 << 12;
    let (best_n, best_count) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best = (u32::MAX, 0usize);
            for n in c * chunk..((c + 1) * chunk).min(total) {
                let s = score(n as u32);
                if best.0 == u32::MAX || s > best.1 {
                    best = (n as u32, s);
                }
            }
            best
        })
        .reduce(
            || (u32::MAX, 0),
            |a, b| match (a.0 == u32::MAX, b.0 == u32::MAX) {
                (true, _) => b,
                (_, true) => a,
                _ if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) => b,
                _ => a,
            },
        );
    let c0 = best_n >> d & 1 == 1;
    let coeffs = BitVector::from_bits((0..d).map(|k| best_n >> (d - 1 - k) & 1 == 1));
    Ok((ParityHypothesis::new(c0, coeffs), best_count))
}

/// The affine set `F_B` of label vectors a bag receives as the parity ranges
/// over a solution space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingSpace {
    pub offset: BitVector,
    /// Independent generators of the linear part.
    pub generators: Vec<BitVector>,
}

impl LabelingSpace {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn members(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..1u64 << self.dim()).map(move |c| {
            let mut v = self.offset.clone();
            for (k, g) in self.generators.iter().enumerate() {
                if c >> k & 1 == 1 {
                    v.xor_assign(g);
                }
            }
            v
        })
    }

    pub fn member_set(&self) -> HashSet<BitVector> {
        self.members().collect()
    }
}

/// Image of `space` under `s ↦ (⟨(1, x_j), s⟩)_j` for the points `x_j` of `bag`.
pub fn labeling_space(space: &SolutionSpace, bag: &Bag) -> LabelingSpace {
    let rows: Vec<BitVector> = bag.points().iter().map(|x| x.prepend(true)).collect();
    let image = |s: &BitVector| BitVector::from_bits(rows.iter().map(|r| r.dot(s)));
    let offset = image(&space.particular);
    let images = F2Matrix::from_rows(
        bag.size(),
        space.nullspace_basis.iter().map(image).collect(),
    )
    .expect("images have bag-size length");
    let reduced = f2_linalg::rref(&images);
    let generators = reduced.reduced.rows()[..reduced.rank].to_vec();
    LabelingSpace { offset, generators }
}

/// Exact probability that a uniform member of `space` satisfies `bag`,
/// as (satisfying labelings in `F_B`) / `|F_B|`.
pub fn exact_bag_satisfaction(space: &SolutionSpace, bag: &Bag) -> Proportion {
    let fb = labeling_space(space, bag);
    let hits = fb.members().filter(|v| v.weight() == bag.positives()).count();
    Proportion::new(hits, 1 << fb.dim())
}

/// Instance consistent with a hidden uniform affine parity: bag sizes uniform
/// in `[1, q]`, points uniform in `{0,1}^dim`. The witness comes from stream
/// `(seed, 0)`, bag `k` from stream `(seed, k + 1)`.
pub fn planted_parity_instance(
    dim: usize,
    q: usize,
    bags: usize,
    seed: u64,
) -> (LlpInstance, ParityHypothesis) {
    assert!(q >= 1, "bag size bound must be positive");
    let mut rng = seeding::derived_rng(seed, 0);
    let hidden = ParityHypothesis::new(rng.random_bool(0.5), BitVector::random(dim, &mut rng));
    let bags: Vec<Bag> = (0..bags as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeding::derived_rng(seed, k + 1);
            let size = rng.random_range(1..=q);
            let points: Vec<BitVector> = (0..size).map(|_| BitVector::random(dim, &mut rng)).collect();
            let positives = points.iter().filter(|x| hidden.c0 ^ hidden.coeffs.dot(x)).count();
            Bag::new(points, positives).expect("positives counted from the bag")
        })
        .collect();
    let inst = LlpInstance::new(dim, bags).expect("points have the instance dimension");
    (inst, hidden)
}

/// Convenience: evaluate a parity against an instance as a [`Hypothesis`].
pub fn parity_fraction(inst: &LlpInstance, h: &ParityHypothesis) -> Proportion {
    Proportion::new(count_satisfied(inst, h), inst.len())
}

impl From<&ParityHypothesis> for Hypothesis {
    fn from(h: &ParityHypothesis) -> Self {
        Hypothesis::Parity(h.clone())
    }
}
