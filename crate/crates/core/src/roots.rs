//! Simply-laced finite and affine Cartan matrices: recognition, marks,
//! positive roots, Weyl-group orbits and fundamental-chamber reduction.
//!
//! Standard labellings (Bourbaki, with the affine node 0):
//!
//! * `A_n`: path `1-2-...-n`; `Ã_n` closes the cycle `0-1-...-n-0`
//!   (`Ã_1` is the double edge, Cartan entry `-2`).
//! * `D_n` (`n >= 4`): path `1-2-...-(n-1)` plus `n` attached to `n-2`;
//!   `D̃_n` attaches `0` to `2`.
//! * `E_n` (`n = 6, 7, 8`): path `1-3-4-...-n` plus `2` attached to `4`;
//!   `Ẽ_6` attaches `0` to `2`, `Ẽ_7` to `1`, `Ẽ_8` to `8`.
//!
//! Affine diagrams are indexed `0..=n` and finite ones `1..=n`; in storage
//! both are zero-based (finite label `i` lives at index `i - 1`).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num::{Signed, Zero};
use petgraph::algo::subgraph_isomorphisms_iter;
use petgraph::graph::UnGraph;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{Int, Rat};
use crate::lattice::enumerate_positive;

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;
pub const DEFAULT_GROUP_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("not a symmetric Cartan matrix: {0}")]
    NotCartan(String),
    #[error("not an affine ADE Cartan matrix: {0}")]
    NotAffineAde(String),
    #[error("not a finite ADE Cartan matrix: {0}")]
    NotFiniteAde(String),
    #[error("node {node} has mark {mark}, expected 1")]
    MarkNotOne { node: usize, mark: i64 },
    #[error("simple reflection index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("vector length {found} does not match rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("orbit exceeded cap {cap}")]
    CapExceeded { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            other => Err(format!("unknown family {other:?} (expected A, D or E)")),
        }
    }
}

/// Whether `(family, n)` names a finite (equivalently affine) simply-laced type.
pub fn valid_type(family: Family, n: usize) -> bool {
    match family {
        Family::A => n >= 1,
        Family::D => n >= 4,
        Family::E => (6..=8).contains(&n),
    }
}

/// Symmetric integer matrix with diagonal 2 and nonpositive off-diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, RootError> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(RootError::NotCartan(format!("row {i} has length {}", row.len())));
            }
            if row[i] != 2 {
                return Err(RootError::NotCartan(format!("diagonal entry {i} is {}", row[i])));
            }
            for (j, &x) in row.iter().enumerate() {
                if i != j && x > 0 {
                    return Err(RootError::NotCartan(format!("entry ({i},{j}) = {x} is positive")));
                }
                if entries[j][i] != x {
                    return Err(RootError::NotCartan(format!("entry ({i},{j}) is not symmetric")));
                }
            }
        }
        Ok(Self { entries })
    }

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut m = vec![vec![0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in edges {
            m[a][b] -= 1;
            m[b][a] -= 1;
        }
        Self { entries: m }
    }

    pub fn n_nodes(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// `(M x)`.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.entries.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn remove_node(&self, node: usize) -> CartanMatrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != node)
            .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != node).map(|(_, &x)| x).collect())
            .collect();
        CartanMatrix { entries }
    }

    fn simple_edges(&self) -> Result<Vec<(usize, usize)>, String> {
        let n = self.n_nodes();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match self.entries[i][j] {
                    0 => {}
                    -1 => edges.push((i, j)),
                    x => return Err(format!("entry ({i},{j}) = {x} is not 0 or -1")),
                }
            }
        }
        Ok(edges)
    }

    fn as_int_matrix(&self) -> Vec<Vec<Int>> {
        self.entries.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

/// Zero-based edge list of the standard finite diagram of rank `n`.
fn finite_edges(family: Family, n: usize) -> Vec<(usize, usize)> {
    // Written with one-based labels, shifted at the end.
    let mut e: Vec<(usize, usize)> = match family {
        Family::A => (1..n).map(|i| (i, i + 1)).collect(),
        Family::D => {
            let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
            e.push((n - 2, n));
            e
        }
        Family::E => {
            let mut e = vec![(1, 3), (2, 4)];
            e.extend((3..n).map(|i| (i, i + 1)));
            e
        }
    };
    for x in e.iter_mut() {
        *x = (x.0 - 1, x.1 - 1);
    }
    e
}

/// Edge list of the standard affine diagram on nodes `0..=n` (not for `Ã_1`).
fn affine_edges(family: Family, n: usize) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = finite_edges(family, n).into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
    match family {
        Family::A => {
            e.push((0, 1));
            e.push((n, 0));
        }
        Family::D => e.push((0, 2)),
        Family::E => e.push(match n {
            6 => (0, 2),
            7 => (0, 1),
            _ => (0, 8),
        }),
    }
    e
}

/// Marks `(a_0, ..., a_n)` of the standard affine diagram.
pub fn standard_marks(family: Family, n: usize) -> Vec<i64> {
    match family {
        Family::A => vec![1; n + 1],
        Family::D => (0..=n).map(|i| if i == 0 || i == 1 || i + 1 >= n { 1 } else { 2 }).collect(),
        Family::E => match n {
            6 => vec![1, 1, 2, 2, 3, 2, 1],
            7 => vec![1, 2, 2, 3, 4, 3, 2, 1],
            _ => vec![1, 2, 3, 4, 6, 5, 4, 3, 2],
        },
    }
}

pub fn standard_affine_cartan(family: Family, n: usize) -> CartanMatrix {
    assert!(valid_type(family, n), "invalid type {family}{n}");
    if family == Family::A && n == 1 {
        return CartanMatrix { entries: vec![vec![2, -2], vec![-2, 2]] };
    }
    CartanMatrix::from_edges(n + 1, &affine_edges(family, n))
}

pub fn standard_finite_cartan(family: Family, n: usize) -> CartanMatrix {
    assert!(valid_type(family, n), "invalid type {family}{n}");
    CartanMatrix::from_edges(n, &finite_edges(family, n))
}

fn graph(n: usize, edges: &[(usize, usize)]) -> UnGraph<(), ()> {
    let mut g = UnGraph::with_capacity(n, edges.len());
    for _ in 0..n {
        g.add_node(());
    }
    for &(a, b) in edges {
        g.add_edge((a as u32).into(), (b as u32).into(), ());
    }
    g
}

/// A node bijection `input -> standard` carrying `edges` onto `standard`.
fn isomorphism(n: usize, edges: &[(usize, usize)], standard: &[(usize, usize)]) -> Option<Vec<usize>> {
    if edges.len() != standard.len() {
        return None;
    }
    let g0 = graph(n, edges);
    let g1 = graph(n, standard);
    let mut nm = |_: &(), _: &()| true;
    let mut em = |_: &(), _: &()| true;
    let (r0, r1) = (&g0, &g1);
    let mut it = subgraph_isomorphisms_iter(&r0, &r1, &mut nm, &mut em)?;
    it.next()
}

/// A recognised affine ADE diagram. `node_perm[i]` is the standard label of
/// input node `i`; `marks` are listed in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDiagram {
    pub family: Family,
    pub rank: usize,
    pub node_perm: Vec<usize>,
    pub marks: Vec<i64>,
    pub cartan: CartanMatrix,
}

impl AffineDiagram {
    pub fn standard(family: Family, n: usize) -> Self {
        classify_affine(&standard_affine_cartan(family, n)).expect("standard diagram")
    }

    /// Input nodes whose mark is 1.
    pub fn mark_one_nodes(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&i| self.marks[i] == 1).collect()
    }

    pub fn type_name(&self) -> String {
        format!("~{}{}", self.family, self.rank)
    }
}

/// A recognised finite ADE diagram; `node_perm[i]` is the one-based
/// standard label of input node `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDiagram {
    pub family: Family,
    pub rank: usize,
    pub node_perm: Vec<usize>,
    pub cartan: CartanMatrix,
}

impl FiniteDiagram {
    pub fn standard(family: Family, n: usize) -> Self {
        FiniteDiagram { family, rank: n, node_perm: (1..=n).collect(), cartan: standard_finite_cartan(family, n) }
    }

    pub fn type_name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    fn check_len(&self, len: usize) -> Result<(), RootError> {
        if len != self.rank {
            return Err(RootError::DimensionMismatch { expected: self.rank, found: len });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), RootError> {
        if i == 0 || i > self.rank {
            return Err(RootError::IndexOutOfRange { index: i, rank: self.rank });
        }
        Ok(())
    }
}

/// Recognises `m` as an affine ADE Cartan matrix up to simultaneous
/// permutation of rows and columns.
pub fn classify_affine(m: &CartanMatrix) -> Result<AffineDiagram, RootError> {
    let size = m.n_nodes();
    if size < 2 {
        return Err(RootError::NotAffineAde(format!("{size} nodes")));
    }
    if size == 2 && m.get(0, 1) == -2 {
        return Ok(AffineDiagram { family: Family::A, rank: 1, node_perm: vec![0, 1], marks: vec![1, 1], cartan: m.clone() });
    }
    let edges = m.simple_edges().map_err(RootError::NotAffineAde)?;
    let n = size - 1;
    for family in [Family::A, Family::D, Family::E] {
        if !valid_type(family, n) || (family == Family::A && n == 1) {
            continue;
        }
        if let Some(perm) = isomorphism(size, &edges, &affine_edges(family, n)) {
            let std_marks = standard_marks(family, n);
            let marks: Vec<i64> = perm.iter().map(|&p| std_marks[p]).collect();
            debug_assert!(m.apply(&marks).iter().all(|&x| x == 0));
            return Ok(AffineDiagram { family, rank: n, node_perm: perm, marks, cartan: m.clone() });
        }
    }
    Err(RootError::NotAffineAde(format!("graph on {size} nodes matches no extended Dynkin diagram")))
}

/// Recognises `m` as a finite ADE Cartan matrix.
pub fn classify_finite(m: &CartanMatrix) -> Result<FiniteDiagram, RootError> {
    let n = m.n_nodes();
    let edges = m.simple_edges().map_err(RootError::NotFiniteAde)?;
    for family in [Family::A, Family::D, Family::E] {
        if !valid_type(family, n) {
            continue;
        }
        if let Some(perm) = isomorphism(n, &edges, &finite_edges(family, n)) {
            return Ok(FiniteDiagram { family, rank: n, node_perm: perm.into_iter().map(|p| p + 1).collect(), cartan: m.clone() });
        }
    }
    Err(RootError::NotFiniteAde(format!("graph on {n} nodes matches no Dynkin diagram")))
}

/// Positive primitive kernel vector of an affine ADE Cartan matrix, in input order.
pub fn marks(m: &CartanMatrix) -> Result<Vec<i64>, RootError> {
    classify_affine(m).map(|d| d.marks)
}

/// Removes a node of mark 1 and classifies the remaining finite diagram.
pub fn delete_node(affine: &AffineDiagram, node: usize) -> Result<FiniteDiagram, RootError> {
    let Some(&mark) = affine.marks.get(node) else {
        return Err(RootError::IndexOutOfRange { index: node, rank: affine.rank });
    };
    if mark != 1 {
        return Err(RootError::MarkNotOne { node, mark });
    }
    let finite = classify_finite(&affine.cartan.remove_node(node))?;
    assert_eq!((finite.family, finite.rank), (affine.family, affine.rank), "mark-1 deletion changed the type");
    Ok(finite)
}

fn height(x: &[i64]) -> i64 {
    x.iter().sum()
}

/// All `b >= 0` with `b^T C b = 2`, sorted by height and then lexicographically.
pub fn positive_roots(f: &FiniteDiagram) -> Vec<Vec<i64>> {
    let two = Int::from(2);
    let mut roots: Vec<Vec<i64>> = enumerate_positive(&f.cartan.as_int_matrix(), &two, &two)
        .into_iter()
        .filter(|x| x.iter().all(|c| !c.is_negative()))
        .map(|x| x.iter().map(|c| i64::try_from(c).expect("small root coefficient")).collect())
        .collect();
    roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
    roots
}

/// The positive root dominating every other coefficient-wise.
pub fn highest_root(f: &FiniteDiagram) -> Vec<i64> {
    let roots = positive_roots(f);
    let top = roots.last().expect("nonempty root system").clone();
    assert!(roots.iter().all(|r| r.iter().zip(&top).all(|(a, b)| a <= b)), "highest root is not dominant");
    top
}

/// `x - (x, α_i) α_i` in root coordinates; `i` is one-based.
pub fn simple_reflection(f: &FiniteDiagram, i: usize, x: &[i64]) -> Result<Vec<i64>, RootError> {
    f.check_index(i)?;
    f.check_len(x.len())?;
    Ok(reflect_root(f, i - 1, x))
}

fn reflect_root(f: &FiniteDiagram, k: usize, x: &[i64]) -> Vec<i64> {
    let p: i64 = f.cartan.entries[k].iter().zip(x).map(|(a, b)| a * b).sum();
    let mut y = x.to_vec();
    y[k] -= p;
    y
}

/// Action of `s_i` on the pairing values `c_j = <v_j, α>`: `c_j - C_ij c_i`.
fn reflect_values<T>(f: &FiniteDiagram, k: usize, c: &[T], lift: impl Fn(i64) -> T) -> Vec<T>
where
    T: Clone + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let ck = c[k].clone();
    c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let a = f.cartan.entries[k][j];
            if a == 0 {
                cj.clone()
            } else {
                cj.clone() - lift(a) * ck.clone()
            }
        })
        .collect()
}

fn bfs<K: Hash + Eq>(
    f: &FiniteDiagram,
    start: Vec<i64>,
    step: impl Fn(usize, &[i64]) -> Vec<i64>,
    key: impl Fn(&[i64]) -> K,
    cap: usize,
    mut visit: impl FnMut(&[i64]),
) -> Result<usize, RootError> {
    let mut seen = HashSet::new();
    seen.insert(key(&start));
    visit(&start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for k in 0..f.rank {
            let y = step(k, &x);
            if seen.insert(key(&y)) {
                if seen.len() > cap {
                    return Err(RootError::CapExceeded { cap });
                }
                visit(&y);
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

/// Closure of `x` under simple reflections, sorted lexicographically.
pub fn weyl_orbit(f: &FiniteDiagram, x: &[i64], cap: usize) -> Result<Vec<Vec<i64>>, RootError> {
    f.check_len(x.len())?;
    let mut out = Vec::new();
    bfs(f, x.to_vec(), |k, y| reflect_root(f, k, y), |y| y.to_vec(), cap, |y| out.push(y.to_vec()))?;
    out.sort();
    Ok(out)
}

/// `|W|`, as the orbit size of a regular functional (all pairing values 1),
/// which has trivial stabiliser.
pub fn weyl_group_order(f: &FiniteDiagram, cap: usize) -> Result<usize, RootError> {
    let start = vec![1i64; f.rank];
    let step = |k: usize, y: &[i64]| reflect_values(f, k, y, |a| a);
    // Orbit entries are root heights, bounded by the Coxeter number (30 for
    // E8), so rank <= 16 packs into one u128 at 8 bits per entry.
    if f.rank <= 16 {
        let pack = |y: &[i64]| y.iter().fold(0u128, |acc, &c| (acc << 8) | u128::from(c as i8 as u8));
        bfs(f, start, step, pack, cap, |_| {})
    } else {
        bfs(f, start, step, |y| y.to_vec(), cap, |_| {})
    }
}

/// `rank + 2 |Φ+|`.
pub fn lie_algebra_dimension(f: &FiniteDiagram) -> usize {
    f.rank + 2 * positive_roots(f).len()
}

/// Product `s_{l_1} s_{l_2} ... s_{l_k}` of one-based simple reflections; the
/// rightmost letter acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, Serialize)]
pub struct WeylWord {
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().copied().collect() }
    }

    /// Applies the word to root coordinates.
    pub fn apply_roots(&self, f: &FiniteDiagram, x: &[i64]) -> Result<Vec<i64>, RootError> {
        f.check_len(x.len())?;
        let mut y = x.to_vec();
        for &l in self.letters.iter().rev() {
            f.check_index(l)?;
            y = reflect_root(f, l - 1, &y);
        }
        Ok(y)
    }

    /// Applies the word to pairing values `(<v_i, α>)_i`, i.e. maps `α` to `w(α)`.
    pub fn apply_values(&self, f: &FiniteDiagram, values: &[Rat]) -> Result<Vec<Rat>, RootError> {
        f.check_len(values.len())?;
        let mut y = values.to_vec();
        for &l in self.letters.iter().rev() {
            f.check_index(l)?;
            y = reflect_values(f, l - 1, &y, crate::arith::rat);
        }
        Ok(y)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| format!("s{l}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Result of moving a functional into the closed fundamental chamber:
/// `word.apply_values(input) == values`, so the input lies in
/// `word.inverse()` applied to the fundamental chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberReduction {
    pub word: WeylWord,
    pub values: Vec<Rat>,
    pub on_wall: bool,
}

/// Reflects in the first negative coordinate until none is left.
pub fn reduce_to_fundamental(f: &FiniteDiagram, values: &[Rat]) -> Result<ChamberReduction, RootError> {
    f.check_len(values.len())?;
    let mut applied = Vec::new();
    let mut c = values.to_vec();
    while let Some(k) = c.iter().position(|x| x.is_negative()) {
        c = reflect_values(f, k, &c, crate::arith::rat);
        applied.push(k + 1);
    }
    applied.reverse();
    let on_wall = c.iter().any(Zero::is_zero);
    Ok(ChamberReduction { word: WeylWord::new(applied), values: c, on_wall })
}
