//! Integer quadratic forms: even Gram lattices, sublattices, signatures,
//! orthogonal complements, saturation and short-vector enumeration in
//! definite sublattices.
//!
//! Everything is exact. Enumeration works from an `L D L^T` factorisation
//! over the rationals and propagates the remaining norm budget level by
//! level, so no basis reduction is performed; this is adequate for the
//! ranks (at most about 20) that appear here.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num::{Integer, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{Int, Rat};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("gram matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("gram matrix is not even: diagonal entry {i} is odd")]
    OddDiagonal { i: usize },
    #[error("expected {expected} basis labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("sublattice basis vector {0} is not integral")]
    NonIntegral(usize),
    #[error("sublattice basis is linearly dependent")]
    Dependent,
    #[error("sublattice is not definite")]
    NotDefinite,
    #[error("vectors live in different ambient lattices")]
    AmbientMismatch,
}

/// Even integral lattice given by a symmetric Gram matrix in a labelled basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardLattice {
    gram: Vec<Vec<Int>>,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.neg, self.null)
    }
}

impl PicardLattice {
    pub fn new(gram: Vec<Vec<Int>>, labels: Vec<String>) -> Result<Self, LatticeError> {
        let n = gram.len();
        for (row, r) in gram.iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
            if gram[i][i].is_odd() {
                return Err(LatticeError::OddDiagonal { i });
            }
        }
        if labels.len() != n {
            return Err(LatticeError::LabelCount { expected: n, found: labels.len() });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { gram, labels })
    }

    /// Labels default to `e0, e1, ...`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::with_labels(rows, default_labels("e", rows.len()))
    }

    pub fn with_labels(rows: &[Vec<i64>], labels: Vec<String>) -> Result<Self, LatticeError> {
        let gram = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Int>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `x^T G y`.
    pub fn pairing(&self, x: &LatticeVector, y: &LatticeVector) -> Result<Rat, LatticeError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.pairing_unchecked(&x.coords, &y.coords))
    }

    pub fn norm(&self, x: &LatticeVector) -> Result<Rat, LatticeError> {
        self.pairing(x, x)
    }

    pub(crate) fn pairing_unchecked(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = Rat::zero();
            for (g, yj) in self.gram[i].iter().zip(y) {
                if !g.is_zero() && !yj.is_zero() {
                    row += yj * Rat::from_integer(g.clone());
                }
            }
            acc += xi * row;
        }
        acc
    }

    fn check_len(&self, x: &LatticeVector) -> Result<(), LatticeError> {
        if x.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    /// Inertia of the Gram matrix, computed by exact congruence elimination.
    pub fn signature(&self) -> Signature {
        let (pos, neg, null) = linalg::inertia(&linalg::to_rat_matrix(&self.gram));
        Signature { pos, neg, null }
    }

    /// Saturated integer kernel of `x -> ((x, v))_{v in vectors}`.
    pub fn orthogonal_complement(
        self: &Arc<Self>,
        vectors: &[LatticeVector],
    ) -> Result<Sublattice, LatticeError> {
        let n = self.rank();
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            self.check_len(v)?;
            let row: Vec<Rat> = (0..n)
                .map(|j| {
                    v.coords
                        .iter()
                        .zip(&self.gram)
                        .map(|(c, g)| c * Rat::from_integer(g[j].clone()))
                        .sum()
                })
                .collect();
            rows.push(clear_denominators(&row));
        }
        let basis = linalg::integer_kernel(&rows, n)
            .into_iter()
            .map(LatticeVector::from_ints)
            .collect();
        Ok(Sublattice { ambient: Arc::clone(self), basis, saturated: true })
    }
}

pub(crate) fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let l = row.iter().fold(Int::from(1), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

/// Coordinates in a lattice basis. Coordinates are rational; integrality is a
/// predicate checked by the operations that need it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<Rat>,
}

impl LatticeVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: Vec<Int>) -> Self {
        Self { coords: coords.into_iter().map(Rat::from_integer).collect() }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|&x| Rat::from_integer(Int::from(x))).collect() }
    }

    pub fn zero(len: usize) -> Self {
        Self { coords: vec![Rat::zero(); len] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.coords[i] = Rat::from_integer(Int::from(1));
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<Int>> {
        self.is_integral().then(|| self.coords.iter().map(|c| c.to_integer()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// Sign of the first nonzero coordinate (0 for the zero vector).
    pub fn leading_sign(&self) -> i8 {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
            None => 0,
        }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::arith::format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Z-span of linearly independent integral vectors of an ambient lattice.
#[derive(Debug, Clone)]
pub struct Sublattice {
    ambient: Arc<PicardLattice>,
    basis: Vec<LatticeVector>,
    saturated: bool,
}

impl Sublattice {
    pub fn new(ambient: Arc<PicardLattice>, basis: Vec<LatticeVector>) -> Result<Self, LatticeError> {
        for (i, b) in basis.iter().enumerate() {
            ambient.check_len(b)?;
            if !b.is_integral() {
                return Err(LatticeError::NonIntegral(i));
            }
        }
        let rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.coords.clone()).collect();
        if linalg::rank(&rows) != basis.len() {
            return Err(LatticeError::Dependent);
        }
        let mut s = Self { ambient, basis, saturated: false };
        let closure = s.saturate();
        s.saturated = closure.basis.iter().all(|x| s.contains(x));
        Ok(s)
    }

    pub fn full(ambient: Arc<PicardLattice>) -> Self {
        let n = ambient.rank();
        let basis = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
        Self { ambient, basis, saturated: true }
    }

    pub fn ambient(&self) -> &Arc<PicardLattice> {
        &self.ambient
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Gram matrix of the restricted form in the sublattice basis.
    pub fn gram(&self) -> Vec<Vec<Int>> {
        self.basis
            .iter()
            .map(|x| {
                self.basis
                    .iter()
                    .map(|y| self.ambient.pairing_unchecked(&x.coords, &y.coords).to_integer())
                    .collect()
            })
            .collect()
    }

    pub fn signature(&self) -> Signature {
        let (pos, neg, null) = linalg::inertia(&linalg::to_rat_matrix(&self.gram()));
        Signature { pos, neg, null }
    }

    /// Rank 0 counts as definite of both signs.
    pub fn is_negative_definite(&self) -> bool {
        self.signature().neg == self.rank()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().pos == self.rank()
    }

    /// Rational coordinates of `x` in this basis, if `x` is in the rational span.
    pub fn coordinates(&self, x: &LatticeVector) -> Option<Vec<Rat>> {
        if x.len() != self.ambient.rank() {
            return None;
        }
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| b.coords.clone()).collect();
        linalg::solve_in_span(&rows, &x.coords)
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.coordinates(x).is_some_and(|c| c.iter().all(|t| t.is_integer()))
    }

    /// Equality of Z-spans.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank()
            && self.basis.iter().all(|b| other.contains(b))
            && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn combination(&self, coeffs: &[Int]) -> LatticeVector {
        let n = self.ambient.rank();
        let mut out = vec![Rat::zero(); n];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let c = Rat::from_integer(c.clone());
            for (o, x) in out.iter_mut().zip(&b.coords) {
                *o += &c * x;
            }
        }
        LatticeVector::new(out)
    }

    /// Primitive closure `span_Q(S) ∩ Z^n`; idempotent.
    pub fn saturate(&self) -> Sublattice {
        let n = self.ambient.rank();
        let rows: Vec<Vec<Int>> = self.basis.iter().map(|b| b.to_ints().expect("integral basis")).collect();
        let annihilator = linalg::integer_kernel(&rows, n);
        let basis = linalg::integer_kernel(&annihilator, n)
            .into_iter()
            .map(LatticeVector::from_ints)
            .collect();
        Sublattice { ambient: Arc::clone(&self.ambient), basis, saturated: true }
    }

    /// All `x` in this definite sublattice with `norm_min <= (x,x) <= norm_max`,
    /// one of each pair `{x, -x}` (first nonzero ambient coordinate positive),
    /// sorted lexicographically by ambient coordinates. The zero vector is
    /// included iff `0` is in range.
    pub fn enumerate_norm_vectors(
        &self,
        norm_min: &Int,
        norm_max: &Int,
    ) -> Result<Vec<LatticeVector>, LatticeError> {
        let gram = self.gram();
        let sig = linalg::inertia(&linalg::to_rat_matrix(&gram));
        let k = self.rank();
        let negative = if sig.0 == k {
            false
        } else if sig.1 == k {
            true
        } else {
            return Err(LatticeError::NotDefinite);
        };
        // Work with a positive definite form and the flipped window.
        let (lo, hi) = if negative {
            (-norm_max.clone(), -norm_min.clone())
        } else {
            (norm_min.clone(), norm_max.clone())
        };
        let q: Vec<Vec<Int>> = if negative {
            gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
        } else {
            gram
        };
        let points = enumerate_positive(&q, &lo, &hi);
        let mut out: Vec<LatticeVector> = points
            .into_iter()
            .map(|x| self.combination(&x))
            .filter(|y| y.leading_sign() >= 0)
            .collect();
        out.sort_by(lex_cmp);
        out.dedup();
        Ok(out)
    }
}

fn lex_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    a.coords.cmp(&b.coords)
}

/// All integer `x` with `lo <= x^T q x <= hi` for positive definite `q`.
/// Both `x` and `-x` are returned.
pub(crate) fn enumerate_positive(q: &[Vec<Int>], lo: &Int, hi: &Int) -> Vec<Vec<Int>> {
    let k = q.len();
    if hi.is_negative() {
        return Vec::new();
    }
    if k == 0 {
        return if lo.is_positive() { Vec::new() } else { vec![Vec::new()] };
    }
    let (l, d) = linalg::ldl_positive(&linalg::to_rat_matrix(q)).expect("positive definite form");
    let search = Search { l, d, lo: Rat::from_integer(lo.clone()), hi: Rat::from_integer(hi.clone()) };
    let top = k - 1;
    let budget = search.hi.clone();
    let center = Rat::zero();
    let candidates = search.level_range(top, &center, &budget);
    candidates
        .into_par_iter()
        .flat_map_iter(|value| {
            let mut x = vec![Int::zero(); k];
            x[top] = value.clone();
            let diff = Rat::from_integer(value) - &center;
            let used = &search.d[top] * &diff * &diff;
            let mut found = Vec::new();
            search.descend(&mut x, top, &used, &mut found);
            found
        })
        .collect()
}

struct Search {
    l: Vec<Vec<Rat>>,
    d: Vec<Rat>,
    lo: Rat,
    hi: Rat,
}

impl Search {
    /// Integers `t` with `d_i (t - center)^2 <= budget`.
    fn level_range(&self, i: usize, center: &Rat, budget: &Rat) -> Vec<Int> {
        let fits = |t: &Int| {
            let diff = Rat::from_integer(t.clone()) - center;
            &self.d[i] * &diff * &diff <= *budget
        };
        let start = center.floor().to_integer();
        let mut below = Vec::new();
        let mut t = start.clone();
        while fits(&t) {
            below.push(t.clone());
            t -= 1;
        }
        below.reverse();
        let mut t = start + 1;
        while fits(&t) {
            below.push(t.clone());
            t += 1;
        }
        below
    }

    /// `x[level..]` is fixed with partial norm `used`; fill `x[..level]`.
    fn descend(&self, x: &mut Vec<Int>, level: usize, used: &Rat, found: &mut Vec<Vec<Int>>) {
        if level == 0 {
            if *used >= self.lo {
                found.push(x.clone());
            }
            return;
        }
        let i = level - 1;
        let mut center = Rat::zero();
        for j in level..x.len() {
            if !x[j].is_zero() && !self.l[j][i].is_zero() {
                center -= &self.l[j][i] * Rat::from_integer(x[j].clone());
            }
        }
        let budget = &self.hi - used;
        for t in self.level_range(i, &center, &budget) {
            let diff = Rat::from_integer(t.clone()) - &center;
            let next = used + &self.d[i] * &diff * &diff;
            x[i] = t;
            self.descend(x, i, &next, found);
        }
        x[i] = Int::zero();
    }
}
