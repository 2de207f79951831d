//! S-equivalence strata: validation, affine ADE typing of the singular point,
//! exceptional-curve dual graphs and the positive-root description of the
//! walls through the origin.

use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};
use thiserror::Error;

use crate::arith::{format_rational, Int, Rat};
use crate::lattice::{LatticeVector, PicardLattice};
use crate::mukai::{same_lattice, MukaiVector};
use crate::roots::{classify_affine, delete_node, positive_roots, AffineDiagram, CartanMatrix, FiniteDiagram, RootError};
use crate::walls::check_wall;

/// `⊕ E_i^{⊕ a_i}` encoded by `(v(E_i), a_i)`, with its `(P, H, v)` context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumData {
    pub lattice: Arc<PicardLattice>,
    pub h: LatticeVector,
    pub v: MukaiVector,
    pub strata: Vec<(MukaiVector, Int)>,
}

impl StratumData {
    pub fn new(lattice: Arc<PicardLattice>, h: LatticeVector, v: MukaiVector, strata: Vec<(MukaiVector, Int)>) -> Self {
        Self { lattice, h, v, strata }
    }

    pub fn vectors(&self) -> Vec<MukaiVector> {
        self.strata.iter().map(|(u, _)| u.clone()).collect()
    }

    fn same_context(&self, other: &StratumData) -> bool {
        same_lattice(&self.lattice, &other.lattice) && self.h == other.h && self.v == other.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    LatticeMismatch { index: usize },
    NonIntegral { index: usize },
    NonPositiveMultiplicity { index: usize },
    NotDistinct { i: usize, j: usize },
    SumMismatch { sum: String },
    NotMinusTwo { index: usize, square: String },
    NotOrthogonalToV { index: usize, value: String },
    NotOrthogonalToHHat { index: usize, value: String },
    NonPositiveRank { index: usize },
    NegativePairing { i: usize, j: usize, value: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "stratum is empty"),
            Violation::LatticeMismatch { index } => write!(f, "u_{index} lives over a different Picard lattice"),
            Violation::NonIntegral { index } => write!(f, "u_{index} is not integral"),
            Violation::NonPositiveMultiplicity { index } => write!(f, "a_{index} is not positive"),
            Violation::NotDistinct { i, j } => write!(f, "strata not distinct: u_{i} = u_{j}"),
            Violation::SumMismatch { sum } => write!(f, "Σ a_i u_i ≠ v (sum is {sum})"),
            Violation::NotMinusTwo { index, square } => write!(f, "<u_{index},u_{index}> = {square}, expected -2"),
            Violation::NotOrthogonalToV { index, value } => write!(f, "<v,u_{index}> = {value}, expected 0"),
            Violation::NotOrthogonalToHHat { index, value } => write!(f, "<H^,u_{index}> = {value}, expected 0"),
            Violation::NonPositiveRank { index } => write!(f, "rk u_{index} is not positive"),
            Violation::NegativePairing { i, j, value } => write!(f, "<u_{i},u_{j}> = {value} < 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularityError {
    #[error("invalid stratum: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("marks {marks:?} differ from multiplicities {multiplicities:?}")]
    MarksMismatch { marks: Vec<i64>, multiplicities: Vec<String> },
    #[error("strata share no context (P, H, v)")]
    ContextMismatch,
    #[error("distinct strata are not orthogonal: <u_{i}, u'_{j}> = {value}")]
    Inconsistent { i: usize, j: usize, value: String },
    #[error("nodes {i}, {j}, {k} form a triangle with <(u_i+u_j+u_k)^2> = {square}")]
    TriplePoint { i: usize, j: usize, k: usize, square: String },
    #[error("pairing <u_{i},u_{j}> = {value} does not fit a Cartan entry")]
    BadPairing { i: usize, j: usize, value: String },
    #[error("element {element} of the positive-root sets violates the wall constraints: {reason}")]
    PsiConstraint { element: String, reason: String },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Checks every stratum invariant and reports all failures.
pub fn validate_stratum(s: &StratumData) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if s.strata.is_empty() {
        return Err(vec![Violation::Empty]);
    }
    let foreign: Vec<usize> = (0..s.strata.len()).filter(|&i| !same_lattice(s.strata[i].0.lattice(), &s.lattice)).collect();
    if !same_lattice(s.v.lattice(), &s.lattice) || !foreign.is_empty() {
        out.extend(foreign.into_iter().map(|index| Violation::LatticeMismatch { index }));
        return Err(out);
    }
    let h_hat = s.v.h_hat(&s.h).ok();
    let mut sum = MukaiVector::zero(&s.lattice);
    for (i, (u, a)) in s.strata.iter().enumerate() {
        if !u.is_integral() {
            out.push(Violation::NonIntegral { index: i });
        }
        if !a.is_positive() {
            out.push(Violation::NonPositiveMultiplicity { index: i });
        }
        sum = &sum + &u.scale_int(a);
        let sq = u.square();
        if sq != Rat::from_integer((-2).into()) {
            out.push(Violation::NotMinusTwo { index: i, square: format_rational(&sq) });
        }
        let p = s.v.pair(u);
        if !p.is_zero() {
            out.push(Violation::NotOrthogonalToV { index: i, value: format_rational(&p) });
        }
        if let Some(hh) = &h_hat {
            let p = hh.pair(u);
            if !p.is_zero() {
                out.push(Violation::NotOrthogonalToHHat { index: i, value: format_rational(&p) });
            }
        }
        if !u.r().is_positive() {
            out.push(Violation::NonPositiveRank { index: i });
        }
    }
    for i in 0..s.strata.len() {
        for j in i + 1..s.strata.len() {
            let (ui, uj) = (&s.strata[i].0, &s.strata[j].0);
            if ui == uj {
                out.push(Violation::NotDistinct { i, j });
                continue;
            }
            let p = ui.pair(uj);
            if p.is_negative() {
                out.push(Violation::NegativePairing { i, j, value: format_rational(&p) });
            }
        }
    }
    if sum != s.v {
        out.push(Violation::SumMismatch { sum: sum.to_string() });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `(-<u_i, u_j>)` in input order.
pub fn stratum_cartan(vectors: &[MukaiVector]) -> Result<CartanMatrix, SingularityError> {
    let n = vectors.len();
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = vectors[i].pair(&vectors[j]);
            let bad = || SingularityError::BadPairing { i, j, value: format_rational(&p) };
            if !p.is_integer() {
                return Err(bad());
            }
            m[i][j] = i64::try_from(-p.to_integer()).map_err(|_| bad())?;
        }
    }
    Ok(CartanMatrix::new(m)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualNode {
    /// Input index of the stratum member.
    pub index: usize,
    pub label: String,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualEdge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: i64,
}

/// Exceptional curves `C_i` (retained nodes) and their intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<DualNode>,
    pub edges: Vec<DualEdge>,
}

impl DualGraph {
    /// `(C_i, C_j) = <v_i, v_j>` over retained nodes, with `C_i² = -2`.
    pub fn from_strata(vectors: &[MukaiVector], retained: &[usize]) -> Result<Self, SingularityError> {
        let nodes = retained
            .iter()
            .map(|&i| -> Result<DualNode, SingularityError> { Ok(DualNode { index: i, label: format!("C_{i}"), self_intersection: pairing_i64(vectors, i, i)? }) })
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::new();
        for (x, &i) in retained.iter().enumerate() {
            for &j in &retained[x + 1..] {
                let m = pairing_i64(vectors, i, j)?;
                if m > 0 {
                    edges.push(DualEdge { a: i, b: j, multiplicity: m });
                }
            }
        }
        Ok(Self { nodes, edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for n in &self.nodes {
            out.push_str(&format!("  {} [label=\"{}\"];\n", n.label, n.label));
        }
        for e in &self.edges {
            out.push_str(&format!("  C_{} -- C_{} [label=\"{}\"];\n", e.a, e.b, e.multiplicity));
        }
        out.push_str("}\n");
        out
    }
}

fn pairing_i64(vectors: &[MukaiVector], i: usize, j: usize) -> Result<i64, SingularityError> {
    let p = vectors[i].pair(&vectors[j]);
    let bad = || SingularityError::BadPairing { i, j, value: format_rational(&p) };
    if !p.is_integer() {
        return Err(bad());
    }
    i64::try_from(p.to_integer()).map_err(|_| bad())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub affine: AffineDiagram,
    pub deleted_node: usize,
    /// Input indices of the nodes kept after deletion, in input order.
    pub retained: Vec<usize>,
    pub finite: FiniteDiagram,
    pub marks: Vec<i64>,
    pub dual_graph: DualGraph,
}

/// Input index 0 when its mark is 1, otherwise the lowest index with mark 1.
pub fn default_deleted_node(affine: &AffineDiagram) -> usize {
    if affine.marks[0] == 1 {
        0
    } else {
        affine.mark_one_nodes()[0]
    }
}

/// Affine type of `(-<u_i,u_j>)`, finite type after deleting a mark-1 node, and
/// the dual graph of the remaining nodes.
pub fn classify_singularity(s: &StratumData, deleted: Option<usize>) -> Result<SingularityReport, SingularityError> {
    validate_stratum(s).map_err(SingularityError::Invalid)?;
    let vectors = s.vectors();
    let affine = classify_affine(&stratum_cartan(&vectors)?)?;
    let mults: Vec<&Int> = s.strata.iter().map(|(_, a)| a).collect();
    if affine.marks.iter().zip(&mults).any(|(&m, &a)| Int::from(m) != *a) {
        return Err(SingularityError::MarksMismatch {
            marks: affine.marks.clone(),
            multiplicities: mults.iter().map(ToString::to_string).collect(),
        });
    }
    let node = deleted.unwrap_or_else(|| default_deleted_node(&affine));
    let finite = delete_node(&affine, node)?;
    let retained: Vec<usize> = (0..vectors.len()).filter(|&i| i != node).collect();
    let dual_graph = DualGraph::from_strata(&vectors, &retained)?;
    Ok(SingularityReport { marks: affine.marks.clone(), affine, deleted_node: node, retained, finite, dual_graph })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrataRelation {
    Equal,
    Orthogonal,
}

/// Two strata for the same `v` either coincide or span orthogonal sublattices.
pub fn strata_orthogonality(s: &StratumData, t: &StratumData) -> Result<StrataRelation, SingularityError> {
    if !s.same_context(t) {
        return Err(SingularityError::ContextMismatch);
    }
    let key = |x: &StratumData| {
        let mut k: Vec<(MukaiVector, Int)> = x.strata.clone();
        k.sort();
        k
    };
    if key(s) == key(t) {
        return Ok(StrataRelation::Equal);
    }
    for (i, (u, _)) in s.strata.iter().enumerate() {
        for (j, (w, _)) in t.strata.iter().enumerate() {
            let p = u.pair(w);
            if !p.is_zero() {
                return Err(SingularityError::Inconsistent { i, j, value: format_rational(&p) });
            }
        }
    }
    Ok(StrataRelation::Orthogonal)
}

/// For each triple of mutually adjacent nodes (pairings 1), requires
/// `<(u_i+u_j+u_k)²> < 0`.
pub fn no_triple_point_check(nodes: &[MukaiVector]) -> Result<(), SingularityError> {
    let one = Rat::from_integer(1.into());
    let n = nodes.len();
    for i in 0..n {
        for j in i + 1..n {
            if nodes[i].pair(&nodes[j]) != one {
                continue;
            }
            for k in j + 1..n {
                if nodes[i].pair(&nodes[k]) != one || nodes[j].pair(&nodes[k]) != one {
                    continue;
                }
                let sum = &(&nodes[i] + &nodes[j]) + &nodes[k];
                let sq = sum.square();
                if !sq.is_negative() {
                    return Err(SingularityError::TriplePoint { i, j, k, square: format_rational(&sq) });
                }
            }
        }
    }
    Ok(())
}

/// The triple check on the retained nodes of a classified stratum.
pub fn check_retained_triples(s: &StratumData, report: &SingularityReport) -> Result<(), SingularityError> {
    let nodes: Vec<MukaiVector> = report.retained.iter().map(|&i| s.strata[i].0.clone()).collect();
    no_triple_point_check(&nodes)
}

/// `Ψ₊ = {Σ_{i retained} b_i u_i}` over the positive roots `b`, and `v - Ψ₊`.
pub fn psi_sets(s: &StratumData, report: &SingularityReport) -> Result<(Vec<MukaiVector>, Vec<MukaiVector>), SingularityError> {
    let retained: Vec<&MukaiVector> = report.retained.iter().map(|&i| &s.strata[i].0).collect();
    let mut psi = Vec::new();
    for b in positive_roots(&report.finite) {
        let mut x = MukaiVector::zero(&s.lattice);
        for (c, u) in b.iter().zip(&retained) {
            if *c != 0 {
                x = &x + &u.scale_int(&Int::from(*c));
            }
        }
        psi.push(x);
    }
    let complement: Vec<MukaiVector> = psi.iter().map(|x| &s.v - x).collect();
    for x in psi.iter().chain(&complement) {
        let fail = |reason: String| SingularityError::PsiConstraint { element: x.to_string(), reason };
        check_wall(x, &s.v, &s.h).map_err(|e| fail(e.to_string()))?;
        if !s.v.pair(x).is_zero() {
            return Err(fail("<v,u> != 0".into()));
        }
    }
    Ok((psi, complement))
}
