//! Bipartite and smooth Label-Cover instances with planted labelings.
//!
//! Instances here are generated with a hidden labeling satisfying every edge;
//! the generators make no hardness claim. Smoothness and weak expansion are
//! measured, never enforced.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::llp_core::Proportion;
use crate::seeding;

/// Configuration-model attempts before a degree sequence is declared infeasible.
const MAX_GRAPH_RETRIES: usize = 2000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelCoverError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("missing label for vertex {0}")]
    MissingLabel(String),
    #[error("label {label} out of range for vertex {vertex}")]
    LabelOutOfRange { vertex: String, label: usize },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn parse_err(line: usize, reason: impl Into<String>) -> LabelCoverError {
    LabelCoverError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Bipartite Label-Cover. Edge `e = (v, u)` joins right vertex `v ∈ V` (labels
/// `[M]`) to left vertex `u ∈ U` (labels `[N]`); `projections[e][i] = π_vu(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLabelCover {
    u_count: usize,
    v_count: usize,
    n_labels: usize,
    m_labels: usize,
    edges: Vec<(usize, usize)>,
    projections: Vec<Vec<usize>>,
    /// Edge indices incident to each left vertex, in edge order.
    left_adjacency: Vec<Vec<usize>>,
}

/// Labels for both sides of a bipartite instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLabeling {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BipartiteLabelCover {
    pub fn new(
        u_count: usize,
        v_count: usize,
        n_labels: usize,
        m_labels: usize,
        edges: Vec<(usize, usize)>,
        projections: Vec<Vec<usize>>,
    ) -> Result<Self, LabelCoverError> {
        if edges.len() != projections.len() {
            return Err(LabelCoverError::Invalid("one projection table per edge".into()));
        }
        let mut left_adjacency = vec![Vec::new(); u_count];
        let mut seen = HashSet::new();
        for (e, (&(v, u), table)) in edges.iter().zip(&projections).enumerate() {
            if v >= v_count || u >= u_count {
                return Err(LabelCoverError::Invalid(format!("edge {e} has an endpoint out of range")));
            }
            if !seen.insert((v, u)) {
                return Err(LabelCoverError::Invalid(format!("duplicate edge ({v}, {u})")));
            }
            if table.len() != m_labels || table.iter().any(|&j| j >= n_labels) {
                return Err(LabelCoverError::Invalid(format!("edge {e} projection is not a map [M] -> [N]")));
            }
            left_adjacency[u].push(e);
        }
        Ok(Self {
            u_count,
            v_count,
            n_labels,
            m_labels,
            edges,
            projections,
            left_adjacency,
        })
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn m_labels(&self) -> usize {
        self.m_labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn projection(&self, edge: usize) -> &[usize] {
        &self.projections[edge]
    }

    /// Edges incident to left vertex `u`; each names a neighbour `v ∈ N(u)`.
    pub fn neighbourhood(&self, u: usize) -> &[usize] {
        &self.left_adjacency[u]
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.left_adjacency.iter().map(Vec::len).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.v_count];
        for &(v, _) in &self.edges {
            d[v] += 1;
        }
        d
    }

    pub fn is_biregular(&self) -> bool {
        let all_equal = |d: &[usize]| d.windows(2).all(|w| w[0] == w[1]);
        all_equal(&self.left_degrees()) && all_equal(&self.right_degrees())
    }

    /// `factor` copies of every right vertex; copy `r` of `v` is `r·|V| + v` and
    /// inherits all of `v`'s edges and projections. Multiplies `d_U` by `factor`.
    pub fn replicate(&self, factor: usize, labeling: &BipartiteLabeling) -> (Self, BipartiteLabeling) {
        let mut edges = Vec::with_capacity(self.edges.len() * factor);
        let mut projections = Vec::with_capacity(self.edges.len() * factor);
        for r in 0..factor {
            for (&(v, u), table) in self.edges.iter().zip(&self.projections) {
                edges.push((r * self.v_count + v, u));
                projections.push(table.clone());
            }
        }
        let inst = Self::new(
            self.u_count,
            self.v_count * factor,
            self.n_labels,
            self.m_labels,
            edges,
            projections,
        )
        .expect("replication preserves validity");
        let right = (0..factor).flat_map(|_| labeling.right.iter().copied()).collect();
        (
            inst,
            BipartiteLabeling {
                left: labeling.left.clone(),
                right,
            },
        )
    }

    fn check_labeling(&self, rho: &BipartiteLabeling) -> Result<(), LabelCoverError> {
        if rho.left.len() < self.u_count {
            return Err(LabelCoverError::MissingLabel(format!("u{}", rho.left.len())));
        }
        if rho.right.len() < self.v_count {
            return Err(LabelCoverError::MissingLabel(format!("v{}", rho.right.len())));
        }
        if let Some((u, &label)) = rho.left.iter().enumerate().find(|(_, &l)| l >= self.n_labels) {
            return Err(LabelCoverError::LabelOutOfRange { vertex: format!("u{u}"), label });
        }
        if let Some((v, &label)) = rho.right.iter().enumerate().find(|(_, &l)| l >= self.m_labels) {
            return Err(LabelCoverError::LabelOutOfRange { vertex: format!("v{v}"), label });
        }
        Ok(())
    }

    /// Edges with `π_vu(ρ(v)) = ρ(u)` over all edges.
    pub fn satisfied_edge_fraction(&self, rho: &BipartiteLabeling) -> Result<Proportion, LabelCoverError> {
        self.check_labeling(rho)?;
        let count = self
            .edges
            .iter()
            .zip(&self.projections)
            .filter(|(&(v, u), table)| table[rho.right[v]] == rho.left[u])
            .count();
        Ok(Proportion::new(count, self.edges.len()))
    }
}

/// Random bipartite graph with left degree `d_u`, right degree `d_u·|U|/|V|`,
/// a uniform planted labeling, and projections that agree with it on every
/// edge (other table entries uniform over `[N]`).
pub fn planted_bipartite(
    u_count: usize,
    v_count: usize,
    d_u: usize,
    n_labels: usize,
    m_labels: usize,
    seed: u64,
) -> Result<(BipartiteLabelCover, BipartiteLabeling), LabelCoverError> {
    if n_labels == 0 || m_labels == 0 {
        return Err(LabelCoverError::InfeasibleParameters("label sets must be non-empty".into()));
    }
    if u_count == 0 || v_count == 0 || d_u == 0 {
        return Err(LabelCoverError::InfeasibleParameters("vertex counts and degree must be positive".into()));
    }
    if (d_u * u_count) % v_count != 0 {
        return Err(LabelCoverError::InfeasibleParameters(format!(
            "d_U·|U| = {} is not divisible by |V| = {v_count}",
            d_u * u_count
        )));
    }
    let d_v = d_u * u_count / v_count;
    if d_u > v_count || d_v > u_count {
        return Err(LabelCoverError::InfeasibleParameters("degree exceeds the opposite side".into()));
    }
    let mut rng = seeding::derived_rng(seed, 0);
    let edges = biregular_edges(u_count, v_count, d_u, d_v, &mut rng)?;

    let left: Vec<usize> = (0..u_count).map(|_| rng.random_range(0..n_labels)).collect();
    let right: Vec<usize> = (0..v_count).map(|_| rng.random_range(0..m_labels)).collect();
    let projections = edges
        .iter()
        .map(|&(v, u)| {
            (0..m_labels)
                .map(|i| if i == right[v] { left[u] } else { rng.random_range(0..n_labels) })
                .collect()
        })
        .collect();
    let lc = BipartiteLabelCover::new(u_count, v_count, n_labels, m_labels, edges, projections)?;
    Ok((lc, BipartiteLabeling { left, right }))
}

/// Stub matching: repeatedly pair a random left stub with a random right
/// stub, redrawing pairs that would repeat an edge; restart when stuck.
fn biregular_edges<R: Rng>(
    u_count: usize,
    v_count: usize,
    d_u: usize,
    d_v: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>, LabelCoverError> {
    let u_stubs: Vec<usize> = (0..u_count).flat_map(|u| std::iter::repeat_n(u, d_u)).collect();
    let v_stubs: Vec<usize> = (0..v_count).flat_map(|v| std::iter::repeat_n(v, d_v)).collect();
    let redraws = 64 + 4 * u_stubs.len();
    'attempt: for _ in 0..MAX_GRAPH_RETRIES {
        let (mut us, mut vs) = (u_stubs.clone(), v_stubs.clone());
        let mut seen = HashSet::with_capacity(us.len());
        while !us.is_empty() {
            let placed = (0..redraws).any(|_| {
                let (a, b) = (rng.random_range(0..us.len()), rng.random_range(0..vs.len()));
                if !seen.insert((vs[b], us[a])) {
                    return false;
                }
                us.swap_remove(a);
                vs.swap_remove(b);
                true
            });
            if !placed {
                continue 'attempt;
            }
        }
        let mut edges: Vec<(usize, usize)> = seen.into_iter().collect();
        edges.sort_by_key(|&(v, u)| (u, v));
        return Ok(edges);
    }
    Err(LabelCoverError::InfeasibleParameters(format!(
        "no simple bi-regular graph found after {MAX_GRAPH_RETRIES} attempts"
    )))
}

/// Smooth (non-bipartite) Label-Cover: edge `e = (a, b)` carries two tables
/// `π_{e,a}, π_{e,b} : [M] → [N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothLabelCover {
    v_count: usize,
    n_labels: usize,
    m_labels: usize,
    edges: Vec<(usize, usize)>,
    projections: Vec<[Vec<usize>; 2]>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl SmoothLabelCover {
    /// Validates endpoints and tables. Regularity and connectivity are
    /// properties of generated instances, see [`is_regular`](Self::is_regular).
    pub fn new(
        v_count: usize,
        n_labels: usize,
        m_labels: usize,
        edges: Vec<(usize, usize)>,
        projections: Vec<[Vec<usize>; 2]>,
    ) -> Result<Self, LabelCoverError> {
        if edges.len() != projections.len() {
            return Err(LabelCoverError::Invalid("one projection pair per edge".into()));
        }
        let mut adjacency = vec![Vec::new(); v_count];
        for (e, (&(a, b), tables)) in edges.iter().zip(&projections).enumerate() {
            if a >= v_count || b >= v_count {
                return Err(LabelCoverError::Invalid(format!("edge {e} has an endpoint out of range")));
            }
            if a == b {
                return Err(LabelCoverError::Invalid(format!("edge {e} is a self-loop")));
            }
            for t in tables {
                if t.len() != m_labels || t.iter().any(|&j| j >= n_labels) {
                    return Err(LabelCoverError::Invalid(format!("edge {e} projection is not a map [M] -> [N]")));
                }
            }
            adjacency[a].push((e, 0));
            adjacency[b].push((e, 1));
        }
        Ok(Self {
            v_count,
            n_labels,
            m_labels,
            edges,
            projections,
            adjacency,
        })
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn m_labels(&self) -> usize {
        self.m_labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `π_{e, endpoint}` where `side` 0 is the first endpoint, 1 the second.
    pub fn projection(&self, edge: usize, side: usize) -> &[usize] {
        &self.projections[edge][side]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_regular(&self) -> bool {
        self.degrees().windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        if self.v_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.v_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(w) = stack.pop() {
            for &(e, side) in &self.adjacency[w] {
                let (a, b) = self.edges[e];
                let other = if side == 0 { b } else { a };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn satisfied_edge_fraction(&self, rho: &[usize]) -> Result<Proportion, LabelCoverError> {
        if rho.len() < self.v_count {
            return Err(LabelCoverError::MissingLabel(format!("v{}", rho.len())));
        }
        if let Some((v, &label)) = rho.iter().enumerate().find(|(_, &l)| l >= self.m_labels) {
            return Err(LabelCoverError::LabelOutOfRange { vertex: format!("v{v}"), label });
        }
        let count = self
            .edges
            .iter()
            .zip(&self.projections)
            .filter(|(&(a, b), [pa, pb])| pa[rho[a]] == pb[rho[b]])
            .count();
        Ok(Proportion::new(count, self.edges.len()))
    }

    /// `max_w max_{i≠j} Pr_{e∼w}[π_ew(i) = π_ew(j)]` over edges incident to `w`.
    pub fn measure_smoothness(&self) -> f64 {
        let m = self.m_labels;
        let mut worst = 0.0f64;
        if m < 2 {
            return worst;
        }
        let mut collisions = vec![0usize; m * m];
        for incident in &self.adjacency {
            if incident.is_empty() {
                continue;
            }
            collisions.iter_mut().for_each(|c| *c = 0);
            for &(e, side) in incident {
                let table = &self.projections[e][side];
                for i in 0..m {
                    for j in i + 1..m {
                        if table[i] == table[j] {
                            collisions[i * m + j] += 1;
                        }
                    }
                }
            }
            let max = collisions.iter().copied().max().unwrap_or(0);
            worst = worst.max(max as f64 / incident.len() as f64);
        }
        worst
    }

    /// Minimum, over `trials` uniformly random vertex sets of size `round(δ|V|)`,
    /// of (edges inside the set) / |E|. A sampled diagnostic, not a certificate.
    pub fn weak_expansion_probe(&self, delta: f64, trials: usize, seed: u64) -> f64 {
        assert!(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
        if self.edges.is_empty() {
            return 1.0;
        }
        let size = ((delta * self.v_count as f64).round() as usize).clamp(1, self.v_count);
        let mut rng = seeding::derived_rng(seed, 0);
        let mut vertices: Vec<usize> = (0..self.v_count).collect();
        let mut inside = vec![false; self.v_count];
        let mut min = 1.0f64;
        for _ in 0..trials.max(1) {
            let (chosen, _) = vertices.partial_shuffle(&mut rng, size);
            inside.iter_mut().for_each(|x| *x = false);
            for &v in chosen.iter() {
                inside[v] = true;
            }
            let within = self.edges.iter().filter(|&&(a, b)| inside[a] && inside[b]).count();
            min = min.min(within as f64 / self.edges.len() as f64);
        }
        min
    }
}

/// Random connected `degree`-regular graph with a planted labeling; each edge
/// gets a shared target `j_e ∈ [N]` with `π_{e,v}(ρ(v)) = j_e` at both ends.
pub fn planted_smooth(
    v_count: usize,
    degree: usize,
    n_labels: usize,
    m_labels: usize,
    seed: u64,
) -> Result<(SmoothLabelCover, Vec<usize>), LabelCoverError> {
    if n_labels == 0 || m_labels == 0 {
        return Err(LabelCoverError::InfeasibleParameters("label sets must be non-empty".into()));
    }
    if v_count < 2 || degree == 0 || degree >= v_count {
        return Err(LabelCoverError::InfeasibleParameters(
            "need at least 2 vertices and 1 <= degree < |V|".into(),
        ));
    }
    if (v_count * degree) % 2 != 0 {
        return Err(LabelCoverError::InfeasibleParameters("|V|·degree must be even".into()));
    }
    if degree == 1 && v_count != 2 {
        return Err(LabelCoverError::InfeasibleParameters(
            "a 1-regular graph is connected only on 2 vertices".into(),
        ));
    }
    let mut rng = seeding::derived_rng(seed, 0);
    let edges = regular_edges(v_count, degree, &mut rng)?;
    let rho: Vec<usize> = (0..v_count).map(|_| rng.random_range(0..m_labels)).collect();
    let projections = edges
        .iter()
        .map(|&(a, b)| {
            let target = rng.random_range(0..n_labels);
            let mut table = |v: usize| -> Vec<usize> {
                (0..m_labels)
                    .map(|i| if i == rho[v] { target } else { rng.random_range(0..n_labels) })
                    .collect()
            };
            let ta = table(a);
            let tb = table(b);
            [ta, tb]
        })
        .collect();
    let slc = SmoothLabelCover::new(v_count, n_labels, m_labels, edges, projections)?;
    Ok((slc, rho))
}

/// Stub pairing as for the bipartite case, rejecting loops and repeated
/// edges; disconnected results are discarded.
fn regular_edges<R: Rng>(v_count: usize, degree: usize, rng: &mut R) -> Result<Vec<(usize, usize)>, LabelCoverError> {
    let all_stubs: Vec<usize> = (0..v_count).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    let redraws = 64 + 4 * all_stubs.len();
    'attempt: for _ in 0..MAX_GRAPH_RETRIES {
        let mut stubs = all_stubs.clone();
        let mut seen = HashSet::with_capacity(stubs.len() / 2);
        while !stubs.is_empty() {
            let placed = (0..redraws).any(|_| {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (a, b) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
                if a == b || !seen.insert((a, b)) {
                    return false;
                }
                stubs.swap_remove(i.max(j));
                stubs.swap_remove(i.min(j));
                true
            });
            if !placed {
                continue 'attempt;
            }
        }
        let mut edges: Vec<(usize, usize)> = seen.into_iter().collect();
        edges.sort_unstable();
        let probe = SmoothLabelCover::new(
            v_count,
            1,
            0,
            edges.clone(),
            vec![[Vec::new(), Vec::new()]; edges.len()],
        )
        .expect("structural check only");
        if probe.is_connected() {
            return Ok(edges);
        }
    }
    Err(LabelCoverError::InfeasibleParameters(format!(
        "no simple connected regular graph found after {MAX_GRAPH_RETRIES} attempts"
    )))
}

// ---------------------------------------------------------------------------
// Text formats
//
//   LC 1 bipartite              LC 1 smooth
//   U <u> V <v> N <n> M <m>     V <v> N <n> M <m>
//   edges <E>                   edges <E>
//   <v> <u> <π(0)> … <π(M-1)>   <a> <b> <π_a(0)> … <π_a(M-1)> <π_b(0)> … <π_b(M-1)>
//
// Labelings are "<vertex> <label>" lines with vertices written u<i> / v<i>.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelCoverInstance {
    Bipartite(BipartiteLabelCover),
    Smooth(SmoothLabelCover),
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn format_bipartite(lc: &BipartiteLabelCover) -> String {
    let mut out = String::new();
    out.push_str("LC 1 bipartite\n");
    let _ = writeln!(out, "U {} V {} N {} M {}", lc.u_count, lc.v_count, lc.n_labels, lc.m_labels);
    let _ = writeln!(out, "edges {}", lc.edges.len());
    for (&(v, u), table) in lc.edges.iter().zip(&lc.projections) {
        let _ = writeln!(out, "{v} {u} {}", join(table));
    }
    out
}

pub fn format_smooth(slc: &SmoothLabelCover) -> String {
    let mut out = String::new();
    out.push_str("LC 1 smooth\n");
    let _ = writeln!(out, "V {} N {} M {}", slc.v_count, slc.n_labels, slc.m_labels);
    let _ = writeln!(out, "edges {}", slc.edges.len());
    for (&(a, b), [ta, tb]) in slc.edges.iter().zip(&slc.projections) {
        let _ = writeln!(out, "{a} {b} {} {}", join(ta), join(tb));
    }
    out
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>, LabelCoverError> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("invalid integer {t:?}"))))
        .collect()
}

/// `"K1 x K2 y …"` with the given keywords in order.
fn keyed(line: &str, keys: &[&str], lineno: usize) -> Result<Vec<usize>, LabelCoverError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != keys.len() * 2 || toks.iter().step_by(2).zip(keys).any(|(t, k)| t != k) {
        return Err(parse_err(lineno, format!("expected `{}`", keys.join(" <n> "))));
    }
    toks.iter()
        .skip(1)
        .step_by(2)
        .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("invalid integer {t:?}"))))
        .collect()
}

pub fn parse_label_cover(text: &str) -> Result<LabelCoverInstance, LabelCoverError> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| lines.get(i).copied().ok_or_else(|| parse_err(i + 1, "unexpected end of input"));
    let kind = match line(0)? {
        "LC 1 bipartite" => "bipartite",
        "LC 1 smooth" => "smooth",
        _ => return Err(parse_err(1, "expected `LC 1 bipartite` or `LC 1 smooth`")),
    };
    let invalid = |e: LabelCoverError| match e {
        LabelCoverError::Invalid(r) => parse_err(0, r),
        other => other,
    };
    if kind == "bipartite" {
        let sizes = keyed(line(1)?, &["U", "V", "N", "M"], 2)?;
        let (u, v, n, m) = (sizes[0], sizes[1], sizes[2], sizes[3]);
        let e = keyed(line(2)?, &["edges"], 3)?[0];
        let mut edges = Vec::with_capacity(e);
        let mut projections = Vec::with_capacity(e);
        for k in 0..e {
            let nums = numbers(line(3 + k)?, 4 + k)?;
            if nums.len() != 2 + m {
                return Err(parse_err(4 + k, format!("expected {} integers", 2 + m)));
            }
            edges.push((nums[0], nums[1]));
            projections.push(nums[2..].to_vec());
        }
        if lines.len() != 3 + e {
            return Err(parse_err(4 + e, "unexpected content after last edge"));
        }
        BipartiteLabelCover::new(u, v, n, m, edges, projections)
            .map(LabelCoverInstance::Bipartite)
            .map_err(invalid)
    } else {
        let sizes = keyed(line(1)?, &["V", "N", "M"], 2)?;
        let (v, n, m) = (sizes[0], sizes[1], sizes[2]);
        let e = keyed(line(2)?, &["edges"], 3)?[0];
        let mut edges = Vec::with_capacity(e);
        let mut projections = Vec::with_capacity(e);
        for k in 0..e {
            let nums = numbers(line(3 + k)?, 4 + k)?;
            if nums.len() != 2 + 2 * m {
                return Err(parse_err(4 + k, format!("expected {} integers", 2 + 2 * m)));
            }
            edges.push((nums[0], nums[1]));
            projections.push([nums[2..2 + m].to_vec(), nums[2 + m..].to_vec()]);
        }
        if lines.len() != 3 + e {
            return Err(parse_err(4 + e, "unexpected content after last edge"));
        }
        SmoothLabelCover::new(v, n, m, edges, projections)
            .map(LabelCoverInstance::Smooth)
            .map_err(invalid)
    }
}

pub fn format_bipartite_labeling(rho: &BipartiteLabeling) -> String {
    let mut out = String::new();
    for (u, l) in rho.left.iter().enumerate() {
        let _ = writeln!(out, "u{u} {l}");
    }
    for (v, l) in rho.right.iter().enumerate() {
        let _ = writeln!(out, "v{v} {l}");
    }
    out
}

pub fn format_vertex_labeling(rho: &[usize]) -> String {
    let mut out = String::new();
    for (v, l) in rho.iter().enumerate() {
        let _ = writeln!(out, "v{v} {l}");
    }
    out
}

/// Parses labeling lines into (left labels, right labels), requiring every
/// vertex `u0..u_count`, `v0..v_count` to appear exactly once.
pub fn parse_labeling(text: &str, u_count: usize, v_count: usize) -> Result<BipartiteLabeling, LabelCoverError> {
    let mut left = vec![None; u_count];
    let mut right = vec![None; v_count];
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let mut toks = line.split_whitespace();
        let (Some(vertex), Some(label), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(parse_err(n, "expected `<vertex> <label>`"));
        };
        let label: usize = label.parse().map_err(|_| parse_err(n, "invalid label"))?;
        let (slots, idx) = match vertex.split_at_checked(1) {
            Some(("u", idx)) => (&mut left, idx),
            Some(("v", idx)) => (&mut right, idx),
            _ => return Err(parse_err(n, format!("invalid vertex {vertex:?}"))),
        };
        let idx: usize = idx.parse().map_err(|_| parse_err(n, format!("invalid vertex {vertex:?}")))?;
        let slot = slots.get_mut(idx).ok_or_else(|| parse_err(n, format!("vertex {vertex} out of range")))?;
        if slot.replace(label).is_some() {
            return Err(parse_err(n, format!("vertex {vertex} labelled twice")));
        }
    }
    let collect = |slots: Vec<Option<usize>>, prefix: &str| {
        slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| LabelCoverError::MissingLabel(format!("{prefix}{i}"))))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(BipartiteLabeling {
        left: collect(left, "u")?,
        right: collect(right, "v")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_bipartite_is_biregular_and_satisfied() {
        for seed in 0..10 {
            let (lc, rho) = planted_bipartite(6, 9, 3, 3, 5, seed).unwrap();
            assert!(lc.is_biregular());
            assert_eq!(lc.left_degrees()[0], 3);
            assert_eq!(lc.right_degrees()[0], 2);
            assert_eq!(lc.satisfied_edge_fraction(&rho).unwrap(), Proportion::new(18, 18));
        }
    }

    #[test]
    fn planted_bipartite_rejects_bad_degrees() {
        assert!(planted_bipartite(5, 3, 2, 2, 2, 0).is_err());
        assert!(planted_bipartite(2, 2, 3, 2, 2, 0).is_err());
        assert!(planted_bipartite(2, 2, 1, 0, 2, 0).is_err());
    }

    #[test]
    fn single_label_instances_are_always_satisfied() {
        let (lc, _) = planted_bipartite(4, 4, 2, 1, 3, 7).unwrap();
        let rho = BipartiteLabeling {
            left: vec![0; 4],
            right: vec![2, 1, 0, 2],
        };
        assert!(lc.satisfied_edge_fraction(&rho).unwrap().is_complete());
    }

    #[test]
    fn random_labeling_matches_recount() {
        let (lc, _) = planted_bipartite(8, 8, 3, 3, 4, 11).unwrap();
        let mut rng = seeding::rng_from_seed(12);
        let rho = BipartiteLabeling {
            left: (0..8).map(|_| rng.random_range(0..3)).collect(),
            right: (0..8).map(|_| rng.random_range(0..4)).collect(),
        };
        let mut recount = 0;
        for e in 0..lc.edges().len() {
            let (v, u) = lc.edges()[e];
            if lc.projection(e)[rho.right[v]] == rho.left[u] {
                recount += 1;
            }
        }
        assert_eq!(lc.satisfied_edge_fraction(&rho).unwrap(), Proportion::new(recount, lc.edges().len()));
    }

    #[test]
    fn missing_labels_reported() {
        let (lc, rho) = planted_bipartite(4, 4, 2, 2, 2, 1).unwrap();
        let short = BipartiteLabeling {
            left: rho.left.clone(),
            right: rho.right[..3].to_vec(),
        };
        assert!(matches!(lc.satisfied_edge_fraction(&short), Err(LabelCoverError::MissingLabel(_))));
        let bad = BipartiteLabeling {
            left: rho.left.clone(),
            right: vec![9; 4],
        };
        assert!(matches!(lc.satisfied_edge_fraction(&bad), Err(LabelCoverError::LabelOutOfRange { .. })));
    }

    #[test]
    fn non_planted_entries_are_uniform() {
        // χ² over [N] for all non-planted table entries of many planted instances.
        let n = 4;
        let mut hist = vec![0usize; n];
        for seed in 0..40 {
            let (lc, rho) = planted_bipartite(10, 10, 4, n, 6, seed).unwrap();
            for (e, &(v, _)) in lc.edges().iter().enumerate() {
                for (i, &j) in lc.projection(e).iter().enumerate() {
                    if i != rho.right[v] {
                        hist[j] += 1;
                    }
                }
            }
        }
        let total: usize = hist.iter().sum();
        let e = total as f64 / n as f64;
        let chi2: f64 = hist.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
        // 3 degrees of freedom; 0.999 quantile is 16.27.
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn replication_scales_left_degree() {
        let (lc, rho) = planted_bipartite(4, 4, 2, 3, 3, 5).unwrap();
        let (big, big_rho) = lc.replicate(3, &rho);
        assert_eq!(big.v_count(), 12);
        assert!(big.is_biregular());
        assert_eq!(big.left_degrees()[0], 6);
        assert!(big.satisfied_edge_fraction(&big_rho).unwrap().is_complete());
    }

    #[test]
    fn planted_smooth_is_regular_connected_and_satisfied() {
        for seed in 0..10 {
            let (slc, rho) = planted_smooth(10, 3, 4, 6, seed).unwrap();
            assert!(slc.is_regular());
            assert!(slc.is_connected());
            assert_eq!(slc.edges().len(), 15);
            assert!(slc.satisfied_edge_fraction(&rho).unwrap().is_complete());
        }
        assert!(planted_smooth(5, 3, 2, 2, 0).is_err());
        assert!(planted_smooth(4, 1, 2, 2, 0).is_err());
        assert!(planted_smooth(2, 1, 2, 2, 0).is_ok());
    }

    #[test]
    fn smoothness_examples() {
        let injective = SmoothLabelCover::new(2, 3, 3, vec![(0, 1)], vec![[vec![0, 1, 2], vec![2, 0, 1]]]).unwrap();
        assert_eq!(injective.measure_smoothness(), 0.0);
        let constant = SmoothLabelCover::new(2, 2, 3, vec![(0, 1)], vec![[vec![1, 1, 1], vec![0, 1, 0]]]).unwrap();
        assert_eq!(constant.measure_smoothness(), 1.0);
        // With many labels, collisions of random tables happen at rate about 1/N.
        let (slc, _) = planted_smooth(30, 6, 40, 5, 3).unwrap();
        let s = slc.measure_smoothness();
        assert!(s < 0.75, "smoothness {s}");
    }

    fn trivial_tables(edges: usize) -> Vec<[Vec<usize>; 2]> {
        vec![[vec![0], vec![0]]; edges]
    }

    #[test]
    fn expansion_on_complete_graph() {
        let n = 10;
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let k = SmoothLabelCover::new(n, 1, 1, edges.clone(), trivial_tables(edges.len())).unwrap();
        // Any 5-set spans C(5,2) = 10 of the C(10,2) = 45 edges.
        let within = k.weak_expansion_probe(0.5, 20, 1);
        assert!((within - 10.0 / 45.0).abs() < 1e-12);
        assert_eq!(k.weak_expansion_probe(1.0, 3, 1), 1.0);
    }

    #[test]
    fn expansion_on_star() {
        // Star on 4 vertices: any 2-set holds the centre edge only if it contains vertex 0.
        let edges = vec![(0, 1), (0, 2), (0, 3)];
        let star = SmoothLabelCover::new(4, 1, 1, edges, trivial_tables(3)).unwrap();
        assert!(!star.is_regular());
        let min = star.weak_expansion_probe(0.5, 200, 9);
        assert_eq!(min, 0.0);
        let full = star.weak_expansion_probe(1.0, 1, 9);
        assert_eq!(full, 1.0);
    }

    #[test]
    fn formats_round_trip() {
        let (lc, rho) = planted_bipartite(4, 6, 3, 2, 3, 8).unwrap();
        let text = format_bipartite(&lc);
        assert_eq!(parse_label_cover(&text).unwrap(), LabelCoverInstance::Bipartite(lc.clone()));
        let parsed = parse_labeling(&format_bipartite_labeling(&rho), 4, 6).unwrap();
        assert_eq!(parsed, rho);

        let (slc, srho) = planted_smooth(6, 2, 3, 4, 8).unwrap();
        let text = format_smooth(&slc);
        assert_eq!(parse_label_cover(&text).unwrap(), LabelCoverInstance::Smooth(slc));
        assert_eq!(parse_labeling(&format_vertex_labeling(&srho), 0, 6).unwrap().right, srho);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_label_cover("LC 2 bipartite\n").is_err());
        assert!(parse_label_cover("LC 1 smooth\nV 2 N 1 M 1\nedges 1\n0 1 0\n").is_err());
        assert!(parse_label_cover("LC 1 smooth\nV 2 N 1 M 1\nedges 1\n0 1 0 5\n").is_err());
        assert!(matches!(parse_labeling("u0 1\n", 1, 1), Err(LabelCoverError::MissingLabel(_))));
        assert!(parse_labeling("u0 1\nu0 1\nv0 0\n", 1, 1).is_err());
        assert!(parse_labeling("w0 1\n", 1, 1).is_err());
    }
}
