//! Bags, LLP instances, hypotheses, and their text formats.
//!
//! Label proportions are kept as exact integer pairs. A bag is satisfied by a
//! hypothesis when the number of points it labels 1 equals the bag's declared
//! positive count; no floating point enters that comparison.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::f2_linalg::BitVector;

#[derive(Debug, Error)]
pub enum LlpError {
    #[error("bag must contain at least one point")]
    EmptyBag,
    #[error("bag has {positives} positives but only {size} points")]
    PositivesOutOfRange { positives: usize, size: usize },
    #[error("point has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("literal index {index} is outside dimension {dim}")]
    LiteralOutOfRange { index: usize, dim: usize },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, reason: impl Into<String>) -> LlpError {
    LlpError::Parse {
        line,
        reason: reason.into(),
    }
}

/// An exact count over a total: satisfied bags over bags, labelled points over
/// bag size, satisfied edges over edges. Never reduced, printed as `count/total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Proportion {
    pub count: usize,
    pub total: usize,
}

impl Proportion {
    pub fn new(count: usize, total: usize) -> Self {
        Self { count, total }
    }

    pub fn is_complete(&self) -> bool {
        self.count == self.total
    }

    pub fn to_f64(self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count as f64 / self.total as f64
        }
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.total)
    }
}

/// A multiset of points with a declared number of positively labelled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bag {
    points: Vec<BitVector>,
    positives: usize,
}

impl Bag {
    pub fn new(points: Vec<BitVector>, positives: usize) -> Result<Self, LlpError> {
        let Some(first) = points.first() else {
            return Err(LlpError::EmptyBag);
        };
        if positives > points.len() {
            return Err(LlpError::PositivesOutOfRange {
                positives,
                size: points.len(),
            });
        }
        let dim = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(LlpError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self { points, positives })
    }

    pub fn points(&self) -> &[BitVector] {
        &self.points
    }

    pub fn positives(&self) -> usize {
        self.positives
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// The declared label proportion as `positives/size`.
    pub fn proportion(&self) -> Proportion {
        Proportion::new(self.positives, self.size())
    }

    /// `Some(label)` when every point must carry `label`.
    pub fn monochromatic_label(&self) -> Option<bool> {
        if self.positives == 0 {
            Some(false)
        } else if self.positives == self.size() {
            Some(true)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlpInstance {
    dim: usize,
    bags: Vec<Bag>,
}

impl LlpInstance {
    pub fn new(dim: usize, bags: Vec<Bag>) -> Result<Self, LlpError> {
        if let Some(bad) = bags.iter().find(|b| b.dim() != dim) {
            return Err(LlpError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, bags })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size `q` (0 for an instance with no bags).
    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Bag::size).max().unwrap_or(0)
    }
}

/// An affine parity `c0 ⊕ ⟨coeffs, x⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityHypothesis {
    pub c0: bool,
    pub coeffs: BitVector,
}

impl ParityHypothesis {
    pub fn new(c0: bool, coeffs: BitVector) -> Self {
        Self { c0, coeffs }
    }

    /// The dictator `x ↦ x_i`.
    pub fn dictator(dim: usize, i: usize) -> Self {
        Self::new(false, BitVector::unit(dim, i))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Support size of the linear part.
    pub fn support_size(&self) -> usize {
        self.coeffs.weight()
    }

    /// Unknown vector `(c0, coeffs)` as used by the linear-system formulation.
    pub fn as_unknowns(&self) -> BitVector {
        self.coeffs.prepend(self.c0)
    }

    pub fn from_unknowns(v: &BitVector) -> Self {
        Self::new(v.get(0), v.slice(1, v.len().saturating_sub(1)))
    }

    fn eval(&self, x: &BitVector) -> bool {
        self.c0 ^ self.coeffs.dot(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub index: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(index: usize) -> Self {
        Self {
            index,
            negated: false,
        }
    }

    pub fn neg(index: usize) -> Self {
        Self {
            index,
            negated: true,
        }
    }

    fn eval(&self, x: &BitVector) -> bool {
        x.get(self.index) ^ self.negated
    }

    /// DIMACS-style signed 1-based form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.index as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(v: i64) -> Option<Self> {
        match v {
            0 => None,
            v if v > 0 => Some(Self::pos((v - 1) as usize)),
            v => Some(Self::neg((-v - 1) as usize)),
        }
    }
}

/// Conjunction of disjunctive clauses. No clauses is the constant 1; an
/// empty clause is the constant 0. An OR is a CNF with exactly one clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfHypothesis {
    pub clauses: Vec<Vec<Literal>>,
}

impl CnfHypothesis {
    pub fn new(clauses: Vec<Vec<Literal>>) -> Self {
        Self { clauses }
    }

    /// A single-clause OR.
    pub fn or(literals: Vec<Literal>) -> Self {
        Self::new(vec![literals])
    }

    pub fn monotone_or<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self::or(indices.into_iter().map(Literal::pos).collect())
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    fn eval(&self, x: &BitVector) -> bool {
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|l| l.eval(x)))
    }
}

/// Disjunction of conjunctive terms. No terms is the constant 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DnfHypothesis {
    pub terms: Vec<Vec<Literal>>,
}

impl DnfHypothesis {
    pub fn new(terms: Vec<Vec<Literal>>) -> Self {
        Self { terms }
    }

    /// Largest term width (the `ℓ` of an `ℓ`-DNF).
    pub fn width(&self) -> usize {
        self.terms.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn eval(&self, x: &BitVector) -> bool {
        self.terms.iter().any(|term| term.iter().all(|l| l.eval(x)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    Parity(ParityHypothesis),
    Cnf(CnfHypothesis),
    Dnf(DnfHypothesis),
}

impl From<ParityHypothesis> for Hypothesis {
    fn from(h: ParityHypothesis) -> Self {
        Hypothesis::Parity(h)
    }
}

impl From<CnfHypothesis> for Hypothesis {
    fn from(h: CnfHypothesis) -> Self {
        Hypothesis::Cnf(h)
    }
}

impl From<DnfHypothesis> for Hypothesis {
    fn from(h: DnfHypothesis) -> Self {
        Hypothesis::Dnf(h)
    }
}

impl Hypothesis {
    /// Checks that the hypothesis can be evaluated on points of length `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<(), LlpError> {
        let max_literal = |sets: &[Vec<Literal>]| sets.iter().flatten().map(|l| l.index).max();
        let out_of_range = match self {
            Hypothesis::Parity(p) => {
                if p.dim() != dim {
                    return Err(LlpError::DimensionMismatch {
                        expected: p.dim(),
                        found: dim,
                    });
                }
                None
            }
            Hypothesis::Cnf(c) => max_literal(&c.clauses),
            Hypothesis::Dnf(d) => max_literal(&d.terms),
        };
        match out_of_range {
            Some(index) if index >= dim => Err(LlpError::LiteralOutOfRange { index, dim }),
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, x: &BitVector) -> Result<bool, LlpError> {
        self.check_dim(x.len())?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &BitVector) -> bool {
        match self {
            Hypothesis::Parity(p) => p.eval(x),
            Hypothesis::Cnf(c) => c.eval(x),
            Hypothesis::Dnf(d) => d.eval(x),
        }
    }
}

/// Number of points of `bag` labelled 1 by `h`, over the bag size.
pub fn label_proportion(bag: &Bag, h: &Hypothesis) -> Result<Proportion, LlpError> {
    h.check_dim(bag.dim())?;
    let count = bag.points.iter().filter(|x| h.eval_unchecked(x)).count();
    Ok(Proportion::new(count, bag.size()))
}

pub fn satisfies(bag: &Bag, h: &Hypothesis) -> Result<bool, LlpError> {
    Ok(label_proportion(bag, h)?.count == bag.positives)
}

/// Satisfied bags over total bags.
pub fn satisfied_fraction(inst: &LlpInstance, h: &Hypothesis) -> Result<Proportion, LlpError> {
    h.check_dim(inst.dim)?;
    let count = inst
        .bags
        .iter()
        .filter(|b| b.points.iter().filter(|x| h.eval_unchecked(x)).count() == b.positives)
        .count();
    Ok(Proportion::new(count, inst.len()))
}

// ---------------------------------------------------------------------------
// LLPB text format
// ---------------------------------------------------------------------------

pub fn write_llpb<W: Write>(inst: &LlpInstance, mut w: W) -> io::Result<()> {
    writeln!(w, "LLPB 1")?;
    writeln!(w, "dim {}", inst.dim)?;
    writeln!(w, "bags {}", inst.bags.len())?;
    for bag in &inst.bags {
        writeln!(w, "bag {} {}", bag.size(), bag.positives)?;
        for p in &bag.points {
            writeln!(w, "{p}")?;
        }
    }
    Ok(())
}

pub fn to_llpb_string(inst: &LlpInstance) -> String {
    let mut buf = Vec::new();
    write_llpb(inst, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("LLPB output is ASCII")
}

/// Every line (including the last) ends in a single `\n`.
fn canonical_lines(text: &str) -> Result<Vec<&str>, LlpError> {
    let Some(body) = text.strip_suffix('\n') else {
        return Err(parse_err(0, "input must end with a newline"));
    };
    let lines: Vec<&str> = body.split('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        if line.ends_with('\r') || line.ends_with(' ') || line.ends_with('\t') {
            return Err(parse_err(i + 1, "trailing whitespace"));
        }
    }
    Ok(lines)
}

/// Parses `"<keyword> <n> ..."` with single-space separators; returns the numbers.
fn keyword_numbers(line: &str, keyword: &str, count: usize, lineno: usize) -> Result<Vec<usize>, LlpError> {
    let mut parts = line.split(' ');
    if parts.next() != Some(keyword) {
        return Err(parse_err(lineno, format!("expected `{keyword}` record")));
    }
    let nums = parts
        .map(|p| {
            if p.is_empty() || (p.len() > 1 && p.starts_with('0')) || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err(lineno, format!("invalid number {p:?}")));
            }
            p.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("invalid number {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if nums.len() != count {
        return Err(parse_err(lineno, format!("`{keyword}` expects {count} field(s)")));
    }
    Ok(nums)
}

pub fn parse_llpb(text: &str) -> Result<LlpInstance, LlpError> {
    let lines = canonical_lines(text)?;
    let mut it = lines.iter().copied().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| it.next().ok_or_else(|| parse_err(lines.len(), format!("unexpected end of input, expected {what}")));

    let (n, header) = next("header")?;
    if header != "LLPB 1" {
        return Err(parse_err(n, "malformed header, expected `LLPB 1`"));
    }
    let (n, line) = next("dim")?;
    let dim = keyword_numbers(line, "dim", 1, n)?[0];
    let (n, line) = next("bags")?;
    let m = keyword_numbers(line, "bags", 1, n)?[0];

    let mut bags = Vec::with_capacity(m.min(1 << 20));
    for _ in 0..m {
        let (n, line) = next("bag record")?;
        let fields = keyword_numbers(line, "bag", 2, n)?;
        let (size, positives) = (fields[0], fields[1]);
        if size == 0 {
            return Err(parse_err(n, "empty bag"));
        }
        if positives > size {
            return Err(parse_err(n, format!("positives {positives} exceed bag size {size}")));
        }
        let mut points = Vec::with_capacity(size.min(1 << 20));
        for _ in 0..size {
            let (n, line) = next("point")?;
            if line.len() != dim {
                return Err(parse_err(n, format!("point has length {}, expected {dim}", line.len())));
            }
            let p: BitVector = line
                .parse()
                .map_err(|e| parse_err(n, format!("{e}")))?;
            points.push(p);
        }
        bags.push(Bag { points, positives });
    }
    if let Some((n, _)) = it.next() {
        return Err(parse_err(n, "unexpected content after last bag"));
    }
    Ok(LlpInstance { dim, bags })
}

pub fn read_llpb<R: Read>(mut r: R) -> Result<LlpInstance, LlpError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_llpb(&text)
}

pub fn read_llpb_file(path: &Path) -> Result<LlpInstance, LlpError> {
    read_llpb(std::fs::File::open(path)?)
}

pub fn write_llpb_file(inst: &LlpInstance, path: &Path) -> Result<(), LlpError> {
    std::fs::write(path, to_llpb_string(inst))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Hypothesis text format
//
//   P <c0> <bitstring>
//   C <k>   followed by k clause lines
//   D <k>   followed by k term lines
//
// Clause and term lines are DIMACS-style signed 1-based literals ending in 0.
// ---------------------------------------------------------------------------

pub fn format_hypothesis(h: &Hypothesis) -> String {
    fn literal_lines(out: &mut String, sets: &[Vec<Literal>]) {
        for set in sets {
            for l in set {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
    }
    let mut out = String::new();
    match h {
        Hypothesis::Parity(p) => {
            out.push_str(&format!("P {} {}\n", u8::from(p.c0), p.coeffs));
        }
        Hypothesis::Cnf(c) => {
            out.push_str(&format!("C {}\n", c.clauses.len()));
            literal_lines(&mut out, &c.clauses);
        }
        Hypothesis::Dnf(d) => {
            out.push_str(&format!("D {}\n", d.terms.len()));
            literal_lines(&mut out, &d.terms);
        }
    }
    out
}

pub fn parse_hypothesis(text: &str) -> Result<Hypothesis, LlpError> {
    let lines = canonical_lines(text)?;
    let header = lines[0];
    let mut parts = header.split(' ');
    match parts.next() {
        Some("P") => {
            let c0 = match parts.next() {
                Some("0") => false,
                Some("1") => true,
                _ => return Err(parse_err(1, "parity constant must be 0 or 1")),
            };
            let coeffs: BitVector = parts
                .next()
                .unwrap_or("")
                .parse()
                .map_err(|e| parse_err(1, format!("{e}")))?;
            if parts.next().is_some() || lines.len() != 1 {
                return Err(parse_err(1, "unexpected content after parity"));
            }
            Ok(Hypothesis::Parity(ParityHypothesis::new(c0, coeffs)))
        }
        Some(kind @ ("C" | "D")) => {
            let k: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(1, "missing clause/term count"))?;
            if parts.next().is_some() {
                return Err(parse_err(1, "unexpected header content"));
            }
            if lines.len() != k + 1 {
                return Err(parse_err(1, format!("header declares {k} lines, found {}", lines.len() - 1)));
            }
            let mut sets = Vec::with_capacity(k);
            for (i, line) in lines[1..].iter().enumerate() {
                let n = i + 2;
                let nums = line
                    .split(' ')
                    .map(|t| t.parse::<i64>().map_err(|_| parse_err(n, format!("invalid literal {t:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let Some((&0, body)) = nums.split_last() else {
                    return Err(parse_err(n, "literal list must end with 0"));
                };
                let set = body
                    .iter()
                    .map(|&v| Literal::from_dimacs(v).ok_or_else(|| parse_err(n, "0 before end of line")))
                    .collect::<Result<Vec<_>, _>>()?;
                sets.push(set);
            }
            Ok(if kind == "C" {
                Hypothesis::Cnf(CnfHypothesis::new(sets))
            } else {
                Hypothesis::Dnf(DnfHypothesis::new(sets))
            })
        }
        _ => Err(parse_err(1, "unknown hypothesis kind")),
    }
}
