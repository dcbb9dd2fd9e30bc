//! Exhaustive best-hypothesis oracles over small OR / CNF / DNF / parity families.
//!
//! Families are enumerated in lexicographic order of their literal (or clause)
//! index sequences; the first maximiser wins.

use rayon::prelude::*;
use thiserror::Error;

use crate::f2_linalg::BitVector;
use crate::llp_core::{CnfHypothesis, DnfHypothesis, LlpInstance, Literal, ParityHypothesis};
use crate::parity_solver::{self, SolverError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("candidate set of size {size} exceeds max_dim = {max}")]
    TooManyCandidates { size: usize, max: usize },
    #[error("family of size {size} exceeds the enumeration budget {max}")]
    BudgetExceeded { size: u128, max: u128 },
    #[error("candidate coordinate {index} is outside dimension {dim}")]
    CandidateOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest candidate coordinate set.
    pub max_dim: usize,
    /// CNF: number of clauses. DNF: number of terms.
    pub max_clauses: usize,
    /// Width bound of each clause or term.
    pub max_literals: usize,
    /// Coordinates literals may use; `None` means all active coordinates.
    pub candidates: Option<Vec<usize>>,
    pub allow_negations: bool,
    /// Largest number of hypotheses evaluated.
    pub max_enumeration: u128,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_dim: 16,
            max_clauses: 1,
            max_literals: 16,
            candidates: None,
            allow_negations: false,
            max_enumeration: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<H> {
    pub hypothesis: H,
    pub satisfied: usize,
    pub family_size: u128,
}

/// Coordinates set in at least one point, ascending.
pub fn active_coordinates(inst: &LlpInstance) -> Vec<usize> {
    let mut active = BitVector::zeros(inst.dim());
    for bag in inst.bags() {
        for p in bag.points() {
            active.or_assign(p);
        }
    }
    active.ones_iter().collect()
}

/// All points concatenated, with per-bag offsets, plus one truth vector per literal.
struct Table {
    offsets: Vec<(usize, usize, usize)>,
    n_points: usize,
    literals: Vec<Literal>,
    literal_truth: Vec<BitVector>,
}

impl Table {
    fn new(inst: &LlpInstance, budget: &SearchBudget) -> Result<Self, SearchError> {
        let mut candidates = match &budget.candidates {
            Some(c) => c.clone(),
            None => active_coordinates(inst),
        };
        candidates.sort_unstable();
        candidates.dedup();
        if let Some(&index) = candidates.iter().find(|&&c| c >= inst.dim()) {
            return Err(SearchError::CandidateOutOfRange { index, dim: inst.dim() });
        }
        if candidates.len() > budget.max_dim {
            return Err(SearchError::TooManyCandidates {
                size: candidates.len(),
                max: budget.max_dim,
            });
        }
        let mut offsets = Vec::with_capacity(inst.len());
        let mut n_points = 0;
        for bag in inst.bags() {
            offsets.push((n_points, bag.size(), bag.positives()));
            n_points += bag.size();
        }
        let mut literals = Vec::new();
        let mut literal_truth = Vec::new();
        for &c in &candidates {
            let pos = BitVector::from_bits(inst.bags().iter().flat_map(|b| b.points().iter().map(move |p| p.get(c))));
            if budget.allow_negations {
                literals.push(Literal::pos(c));
                literal_truth.push(pos.clone());
                literals.push(Literal::neg(c));
                literal_truth.push(pos.complement());
            } else {
                literals.push(Literal::pos(c));
                literal_truth.push(pos);
            }
        }
        Ok(Self {
            offsets,
            n_points,
            literals,
            literal_truth,
        })
    }

    fn satisfied(&self, truth: &BitVector) -> usize {
        self.offsets
            .iter()
            .filter(|&&(start, len, positives)| (start..start + len).filter(|&i| truth.get(i)).count() == positives)
            .count()
    }

    /// Literal index sequences of width ≤ `max_width` without a variable
    /// twice, in lexicographic order (the empty sequence first).
    fn clauses(&self, max_width: usize) -> Vec<Vec<usize>> {
        fn dfs(lits: &[Literal], start: usize, max_width: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            if cur.len() == max_width {
                return;
            }
            for k in start..lits.len() {
                if cur.last().is_some_and(|&l| lits[l].index == lits[k].index) {
                    continue;
                }
                cur.push(k);
                dfs(lits, k + 1, max_width, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        dfs(&self.literals, 0, max_width, &mut Vec::new(), &mut out);
        out
    }

    /// Truth vector of the OR (`disjunction`) or AND of the given literals.
    fn combine(&self, lits: &[usize], disjunction: bool) -> BitVector {
        let mut t = if disjunction {
            BitVector::zeros(self.n_points)
        } else {
            BitVector::ones(self.n_points)
        };
        for &l in lits {
            if disjunction {
                t.or_assign(&self.literal_truth[l]);
            } else {
                t.and_assign(&self.literal_truth[l]);
            }
        }
        t
    }

    fn to_literals(&self, lits: &[usize]) -> Vec<Literal> {
        lits.iter().map(|&l| self.literals[l]).collect()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `Σ_{k ≤ ℓ} C(n, k)`: selections of at most `ℓ` distinct items.
fn selections(n: usize, l: usize) -> u128 {
    (0..=l.min(n)).fold(0u128, |acc, k| acc.saturating_add(binomial(n as u128, k as u128)))
}

fn check_budget(size: u128, budget: &SearchBudget) -> Result<(), SearchError> {
    if size > budget.max_enumeration {
        return Err(SearchError::BudgetExceeded {
            size,
            max: budget.max_enumeration,
        });
    }
    Ok(())
}

/// Best selection of at most `max_items` items (strictly increasing indices)
/// combined with `merge`, starting from `init`. Returns (count, selection),
/// first in lexicographic order among maximisers.
fn best_selection<M>(table: &Table, items: &[BitVector], max_items: usize, init: &BitVector, merge: M) -> (usize, Vec<usize>)
where
    M: Fn(&mut BitVector, &BitVector) + Sync,
{
    fn dfs<M: Fn(&mut BitVector, &BitVector)>(
        table: &Table,
        items: &[BitVector],
        max_items: usize,
        acc: &BitVector,
        cur: &mut Vec<usize>,
        best: &mut (usize, Vec<usize>),
        merge: &M,
    ) {
        let count = table.satisfied(acc);
        if count > best.0 {
            *best = (count, cur.clone());
        }
        if cur.len() == max_items {
            return;
        }
        let start = cur.last().map_or(0, |&k| k + 1);
        for k in start..items.len() {
            let mut next = acc.clone();
            merge(&mut next, &items[k]);
            cur.push(k);
            dfs(table, items, max_items, &next, cur, best, merge);
            cur.pop();
        }
    }

    let root = (table.satisfied(init), Vec::new());
    if max_items == 0 {
        return root;
    }
    // One subtree per first item, scanned in parallel, merged in index order.
    let subtrees: Vec<(usize, Vec<usize>)> = (0..items.len())
        .into_par_iter()
        .map(|k| {
            let mut acc = init.clone();
            merge(&mut acc, &items[k]);
            let mut cur = vec![k];
            let mut best = (table.satisfied(&acc), cur.clone());
            dfs(table, items, max_items, &acc, &mut cur, &mut best, &merge);
            best
        })
        .collect();
    subtrees
        .into_iter()
        .fold(root, |best, cand| if cand.0 > best.0 { cand } else { best })
}

/// Best monotone single clause over the candidate set; the empty clause is constant 0.
pub fn best_monotone_or(inst: &LlpInstance, budget: &SearchBudget) -> Result<SearchResult<CnfHypothesis>, SearchError> {
    let budget = SearchBudget {
        allow_negations: false,
        ..budget.clone()
    };
    let table = Table::new(inst, &budget)?;
    let family_size = selections(table.literals.len(), budget.max_literals);
    check_budget(family_size, &budget)?;
    let (satisfied, lits) = best_selection(
        &table,
        &table.literal_truth,
        budget.max_literals,
        &BitVector::zeros(table.n_points),
        BitVector::or_assign,
    );
    Ok(SearchResult {
        hypothesis: CnfHypothesis::or(table.to_literals(&lits)),
        satisfied,
        family_size,
    })
}

/// Best CNF with at most `l` clauses, each of width ≤ `budget.max_literals`.
/// The family includes the empty CNF (constant 1) and the empty clause.
pub fn best_cnf(inst: &LlpInstance, l: usize, budget: &SearchBudget) -> Result<SearchResult<CnfHypothesis>, SearchError> {
    let table = Table::new(inst, budget)?;
    let clauses = table.clauses(budget.max_literals);
    let family_size = selections(clauses.len(), l);
    check_budget(family_size, budget)?;
    let truths: Vec<BitVector> = clauses.iter().map(|c| table.combine(c, true)).collect();
    let (satisfied, chosen) = best_selection(&table, &truths, l, &BitVector::ones(table.n_points), BitVector::and_assign);
    Ok(SearchResult {
        hypothesis: CnfHypothesis::new(chosen.iter().map(|&k| table.to_literals(&clauses[k])).collect()),
        satisfied,
        family_size,
    })
}

/// Best DNF with terms of width ≤ `l` and at most `budget.max_clauses` terms.
/// The family includes the empty DNF (constant 0) and the empty term.
pub fn best_dnf(inst: &LlpInstance, l: usize, budget: &SearchBudget) -> Result<SearchResult<DnfHypothesis>, SearchError> {
    let table = Table::new(inst, budget)?;
    let terms = table.clauses(l);
    let family_size = selections(terms.len(), budget.max_clauses);
    check_budget(family_size, budget)?;
    let truths: Vec<BitVector> = terms.iter().map(|t| table.combine(t, false)).collect();
    let (satisfied, chosen) = best_selection(
        &table,
        &truths,
        budget.max_clauses,
        &BitVector::zeros(table.n_points),
        BitVector::or_assign,
    );
    Ok(SearchResult {
        hypothesis: DnfHypothesis::new(chosen.iter().map(|&k| table.to_literals(&terms[k])).collect()),
        satisfied,
        family_size,
    })
}

/// Exhaustive affine parity search over all `2^{d+1}` hypotheses.
pub fn best_parity(inst: &LlpInstance) -> Result<SearchResult<ParityHypothesis>, SearchError> {
    let (hypothesis, satisfied) = parity_solver::brute_force_best_parity(inst)?;
    Ok(SearchResult {
        hypothesis,
        satisfied,
        family_size: 1u128 << (inst.dim() + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llp_core::{satisfied_fraction, Bag, Hypothesis};
    use crate::seeding;
    use proptest::prelude::*;
    use rand::Rng;

    fn inst(dim: usize, bags: &[(&[&str], usize)]) -> LlpInstance {
        let bags = bags
            .iter()
            .map(|(pts, pos)| Bag::new(pts.iter().map(|s| s.parse().unwrap()).collect(), *pos).unwrap())
            .collect();
        LlpInstance::new(dim, bags).unwrap()
    }

    fn count(inst: &LlpInstance, h: impl Into<Hypothesis>) -> usize {
        satisfied_fraction(inst, &h.into()).unwrap().count
    }

    #[test]
    fn lexicographic_or_pick() {
        let i = inst(2, &[(&["10", "01"], 1)]);
        let r = best_monotone_or(&i, &SearchBudget::default()).unwrap();
        assert_eq!(r.hypothesis, CnfHypothesis::monotone_or([0]));
        assert_eq!((r.satisfied, r.family_size), (1, 4));
    }

    #[test]
    fn empty_candidate_set_gives_constant_zero() {
        let i = inst(2, &[(&["10"], 0), (&["01", "11"], 0), (&["11"], 1)]);
        let budget = SearchBudget {
            candidates: Some(vec![]),
            ..SearchBudget::default()
        };
        let r = best_monotone_or(&i, &budget).unwrap();
        assert_eq!(r.hypothesis.clauses, vec![Vec::<Literal>::new()]);
        assert_eq!((r.satisfied, r.family_size), (2, 1));
        // CNF search over the same set also sees constant 1 but prefers the earlier tie.
        let c = best_cnf(&i, 1, &budget).unwrap();
        assert_eq!(c.satisfied, 2);
        assert_eq!(c.family_size, 2);
    }

    #[test]
    fn planted_or_is_found() {
        let mut rng = seeding::rng_from_seed(1);
        let planted = CnfHypothesis::monotone_or([1, 4]);
        let h: Hypothesis = planted.clone().into();
        let bags = (0..30)
            .map(|_| {
                let pts: Vec<BitVector> = (0..3).map(|_| BitVector::random(6, &mut rng)).collect();
                let pos = pts.iter().filter(|p| h.evaluate(p).unwrap()).count();
                Bag::new(pts, pos).unwrap()
            })
            .collect();
        let i = LlpInstance::new(6, bags).unwrap();
        let r = best_monotone_or(&i, &SearchBudget::default()).unwrap();
        assert_eq!(r.satisfied, 30);
        assert_eq!(count(&i, r.hypothesis), 30);
        let c1 = best_cnf(&i, 1, &SearchBudget::default()).unwrap();
        let c2 = best_cnf(&i, 2, &SearchBudget::default()).unwrap();
        assert!(c2.satisfied >= c1.satisfied);
        assert_eq!(c1.satisfied, 30);
    }

    #[test]
    fn two_clause_cnf_beats_every_or() {
        // x0 ∧ x1 labels 11 positive and 10, 01 negative; no clause does both.
        let i = inst(2, &[(&["11"], 1), (&["10", "01"], 0)]);
        let or = best_monotone_or(&i, &SearchBudget::default()).unwrap();
        assert_eq!(or.satisfied, 1);
        let c = best_cnf(&i, 2, &SearchBudget::default()).unwrap();
        assert_eq!(c.satisfied, 2);
        assert_eq!(count(&i, c.hypothesis.clone()), 2);

        // Independent truth-table enumeration of all monotone ≤2-clause CNFs on 2 variables.
        let clause_sets: [u8; 4] = [0b00, 0b01, 0b10, 0b11];
        let eval = |cnf: &[u8], x: u8| cnf.iter().all(|&c| c & x != 0);
        let points = [0b11u8, 0b01, 0b10];
        let mut best = 0;
        for a in 0..=4usize {
            for b in a..=4 {
                let cnf: Vec<u8> = [a, b].iter().filter(|&&k| k < 4).map(|&k| clause_sets[k]).collect();
                let sat = usize::from(eval(&cnf, points[0])) + usize::from(!eval(&cnf, points[1]) && !eval(&cnf, points[2]));
                best = best.max(sat);
            }
        }
        assert_eq!(best, c.satisfied);
    }

    #[test]
    fn dnf_with_negations() {
        // x0 ⊕ x1 on single-point bags: width-2 terms with negations fit exactly.
        let i = inst(2, &[(&["00"], 0), (&["01"], 1), (&["10"], 1), (&["11"], 0)]);
        let budget = SearchBudget {
            allow_negations: true,
            max_clauses: 2,
            ..SearchBudget::default()
        };
        let r = best_dnf(&i, 2, &budget).unwrap();
        assert_eq!(r.satisfied, 4);
        assert_eq!(count(&i, r.hypothesis), 4);
        let mono = best_dnf(&i, 2, &SearchBudget { max_clauses: 2, ..SearchBudget::default() }).unwrap();
        assert!(mono.satisfied < 4);
    }

    #[test]
    fn budget_errors() {
        let i = inst(3, &[(&["111"], 1)]);
        let tight = SearchBudget {
            max_enumeration: 3,
            ..SearchBudget::default()
        };
        assert!(matches!(best_monotone_or(&i, &tight), Err(SearchError::BudgetExceeded { .. })));
        let narrow = SearchBudget {
            max_dim: 2,
            ..SearchBudget::default()
        };
        assert!(matches!(best_cnf(&i, 1, &narrow), Err(SearchError::TooManyCandidates { .. })));
        let outside = SearchBudget {
            candidates: Some(vec![5]),
            ..SearchBudget::default()
        };
        assert!(best_dnf(&i, 1, &outside).is_err());
    }

    #[test]
    fn parity_delegates() {
        let i = inst(3, &[(&["001"], 1), (&["011", "100"], 1)]);
        let r = best_parity(&i).unwrap();
        assert_eq!(r.family_size, 16);
        assert_eq!(r.satisfied, count(&i, r.hypothesis.clone()));
        assert_eq!(r.satisfied, 2);
    }

    fn random_instance(seed: u64) -> LlpInstance {
        let mut rng = seeding::rng_from_seed(seed);
        let dim = rng.random_range(1..=4);
        let bags = (0..rng.random_range(1..6))
            .map(|_| {
                let size = rng.random_range(1..=3);
                let pts = (0..size).map(|_| BitVector::random(dim, &mut rng)).collect();
                Bag::new(pts, rng.random_range(0..=size)).unwrap()
            })
            .collect();
        LlpInstance::new(dim, bags).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn oracles_are_monotone_and_consistent(seed in any::<u64>()) {
            let i = random_instance(seed);
            let all: Vec<usize> = (0..i.dim()).collect();
            let b = SearchBudget { candidates: Some(all.clone()), allow_negations: true, ..SearchBudget::default() };
            let c1 = best_cnf(&i, 1, &b).unwrap();
            let c2 = best_cnf(&i, 2, &b).unwrap();
            prop_assert!(c2.satisfied >= c1.satisfied);
            prop_assert_eq!(count(&i, c2.hypothesis.clone()), c2.satisfied);
            let or = best_monotone_or(&i, &b).unwrap();
            prop_assert!(c1.satisfied >= or.satisfied);
            let small = SearchBudget { candidates: Some(all[..all.len() / 2].to_vec()), ..b.clone() };
            prop_assert!(best_monotone_or(&i, &small).unwrap().satisfied <= or.satisfied);
            let d1 = best_dnf(&i, 1, &SearchBudget { max_clauses: 2, ..b.clone() }).unwrap();
            let d2 = best_dnf(&i, 2, &SearchBudget { max_clauses: 2, ..b.clone() }).unwrap();
            prop_assert!(d2.satisfied >= d1.satisfied);
            prop_assert_eq!(count(&i, d2.hypothesis.clone()), d2.satisfied);
            prop_assert_eq!(best_cnf(&i, 2, &b).unwrap(), c2);
        }
    }
}
