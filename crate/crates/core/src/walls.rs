//! The wall set of a primitive isotropic Mukai vector, chamber location of
//! twist parameters, reflections and exceptional-curve class bookkeeping.

use std::cmp::Ordering;
use std::sync::Arc;

use num::{Integer, Signed, Zero};
use thiserror::Error;

use crate::arith::{floor, format_rational, rat_from_int, sign, Int, Rat};
use crate::lattice::{LatticeError, LatticeVector, PicardLattice};
use crate::mukai::{same_lattice, MukaiError, MukaiVector, TwistParameter};
use crate::roots::{classify_finite, reduce_to_fundamental, CartanMatrix, ChamberReduction, FiniteDiagram, RootError, WeylWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("v is not isotropic: <v,v> = {0}")]
    NonIsotropicV(String),
    #[error("v is not primitive")]
    NonPrimitive,
    #[error("v must be integral with positive rank")]
    BadV,
    #[error("polarization has (H,H) = {0}, expected > 0")]
    NonPositivePolarization(String),
    #[error("Picard lattice has signature ({pos},{neg},{null}), expected (1, rank-1, 0)")]
    WrongSignature { pos: usize, neg: usize, null: usize },
    #[error("<u,u> = {0}, expected -2")]
    NotMinusTwo(String),
    #[error("not a wall for (v, H): {0}")]
    NotAWall(String),
    #[error("u lies in U' (<v,u> = 0); crossing is not a reflection of v")]
    UOnUPrime,
    #[error("w(v_{index}) has rank 0")]
    RankZeroImage { index: usize },
    #[error("v_{index} is not orthogonal to v")]
    NotOrthogonalToV { index: usize },
    #[error("twist lies on {count} walls simultaneously; refusing to pick one")]
    MultipleWalls { count: usize },
    #[error(transparent)]
    Mukai(#[from] MukaiError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// An element of the wall set for a fixed `(v, H)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WallVector {
    u: MukaiVector,
}

impl WallVector {
    /// Checks `<u,u> = -2`, `0 < rk u < rk v`, `<Ĥ,u> = 0`, `<v,u> <= 0` and integrality.
    pub fn new(u: MukaiVector, v: &MukaiVector, h: &LatticeVector) -> Result<Self, WallError> {
        check_wall(&u, v, h)?;
        Ok(Self { u })
    }

    pub fn u(&self) -> &MukaiVector {
        &self.u
    }

    pub fn into_inner(self) -> MukaiVector {
        self.u
    }
}

/// The defining constraints of the wall set, checked directly.
pub fn check_wall(u: &MukaiVector, v: &MukaiVector, h: &LatticeVector) -> Result<(), WallError> {
    if !u.is_integral() {
        return Err(WallError::NotAWall(format!("{u} is not integral")));
    }
    let sq = u.square();
    if sq != Rat::from_integer((-2).into()) {
        return Err(WallError::NotAWall(format!("<u,u> = {}", format_rational(&sq))));
    }
    if !(u.r().is_positive() && u.r() < v.r()) {
        return Err(WallError::NotAWall(format!("rank {} not in (0, {})", u.r(), v.r())));
    }
    let hh = v.h_hat(h)?;
    let p = hh.pairing(u)?;
    if !p.is_zero() {
        return Err(WallError::NotAWall(format!("<H^,u> = {}", format_rational(&p))));
    }
    let p = v.pairing(u)?;
    if p.is_positive() {
        return Err(WallError::NotAWall(format!("<v,u> = {} > 0", format_rational(&p))));
    }
    Ok(())
}

fn check_context(p: &Arc<PicardLattice>, h: &LatticeVector, v: &MukaiVector) -> Result<(), WallError> {
    if !same_lattice(p, v.lattice()) {
        return Err(MukaiError::AmbientMismatch.into());
    }
    if !v.is_integral() || !v.r().is_positive() {
        return Err(WallError::BadV);
    }
    if !v.is_isotropic() {
        return Err(WallError::NonIsotropicV(format_rational(&v.square())));
    }
    if !v.is_primitive()? {
        return Err(WallError::NonPrimitive);
    }
    let hh = p.norm(h)?;
    if !hh.is_positive() {
        return Err(WallError::NonPositivePolarization(format_rational(&hh)));
    }
    let sig = p.signature();
    if sig.pos != 1 || sig.null != 0 {
        return Err(WallError::WrongSignature { pos: sig.pos, neg: sig.neg, null: sig.null });
    }
    Ok(())
}

/// The wall set of `(P, H, v)`, sorted by `(rk u, D)` with
/// `D = rk v · c1(u) - rk u · c1(v)` compared lexicographically.
///
/// `D` lies in `H^⊥` with `-2 r² <= (D²) <= 0`, so one finite enumeration of
/// that window covers every rank `s` in `1..r`.
pub fn enumerate_walls(p: &Arc<PicardLattice>, h: &LatticeVector, v: &MukaiVector) -> Result<Vec<WallVector>, WallError> {
    check_context(p, h, v)?;
    let r = v.r().to_integer();
    if r <= Int::from(1) {
        return Ok(Vec::new());
    }
    let xi = v.c1().to_ints().expect("integral c1");
    let perp = p.orthogonal_complement(std::slice::from_ref(h))?;
    let window = -(&r * &r * Int::from(2));
    let reps = perp.enumerate_norm_vectors(&window, &Int::zero())?;
    let mut ds: Vec<Vec<Int>> = Vec::with_capacity(2 * reps.len());
    for d in reps {
        let d = d.to_ints().expect("integral sublattice element");
        if d.iter().any(|x| !x.is_zero()) {
            ds.push(d.iter().map(|x| -x).collect());
        }
        ds.push(d);
    }
    ds.sort();
    let mut out = Vec::new();
    let mut s = Int::from(1);
    while s < r {
        for d in &ds {
            if let Some(u) = wall_from_d(p, v, &r, &xi, &s, d) {
                out.push(WallVector { u });
            }
        }
        s += 1;
    }
    Ok(out)
}

fn wall_from_d(p: &Arc<PicardLattice>, v: &MukaiVector, r: &Int, xi: &[Int], s: &Int, d: &[Int]) -> Option<MukaiVector> {
    let mut eta = Vec::with_capacity(d.len());
    for (di, xj) in d.iter().zip(xi) {
        let (q, rem) = (di + s * xj).div_rem(r);
        if !rem.is_zero() {
            return None;
        }
        eta.push(q);
    }
    let eta = LatticeVector::from_ints(eta);
    let n2 = p.norm(&eta).ok()?.to_integer();
    let (b, rem) = (n2 + Int::from(2)).div_rem(&(s * Int::from(2)));
    if !rem.is_zero() {
        return None;
    }
    let u = MukaiVector::new(Arc::clone(p), rat_from_int(s), eta, rat_from_int(&b)).ok()?;
    if v.pair(&u).is_positive() {
        return None;
    }
    Some(u)
}

/// `{u : <v,u> = 0}`.
pub fn u_prime(walls: &[WallVector], v: &MukaiVector) -> Vec<WallVector> {
    walls.iter().filter(|w| v.pair(&w.u).is_zero()).cloned().collect()
}

/// Lattice-level sufficient condition for `H` to be general with respect to `v`.
pub fn is_generic_polarization(p: &Arc<PicardLattice>, h: &LatticeVector, v: &MukaiVector) -> Result<bool, WallError> {
    Ok(enumerate_walls(p, h, v)?.is_empty())
}

/// Signs of `<v + α, u>` over a list of walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberPosition {
    pub signs: Vec<(WallVector, i8)>,
    pub on_walls: Vec<WallVector>,
    pub weyl_word: Option<WeylWord>,
}

impl ChamberPosition {
    pub fn is_generic(&self) -> bool {
        self.on_walls.is_empty()
    }

    /// The unique wall containing the twist, if any. Several walls at once is
    /// an error: the side of a multiple crossing is not determined.
    pub fn single_wall(&self) -> Result<Option<&WallVector>, WallError> {
        match self.on_walls.len() {
            0 => Ok(None),
            1 => Ok(self.on_walls.first()),
            count => Err(WallError::MultipleWalls { count }),
        }
    }

    pub fn sign_of(&self, wall: &WallVector) -> Option<i8> {
        self.signs.iter().find(|(w, _)| w == wall).map(|&(_, s)| s)
    }
}

pub fn locate(alpha: &TwistParameter, walls: &[WallVector], v: &MukaiVector) -> ChamberPosition {
    let va = v + alpha.alpha();
    let signs: Vec<(WallVector, i8)> = walls.iter().map(|w| (w.clone(), sign(&va.pair(&w.u)))).collect();
    let on_walls = signs.iter().filter(|(_, s)| *s == 0).map(|(w, _)| w.clone()).collect();
    ChamberPosition { signs, on_walls, weyl_word: None }
}

/// A wall met by the segment `v + tα`, `t` in `(0, 1]`. `t` is `None` when
/// the whole segment lies on the wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCrossing {
    pub wall: WallVector,
    pub t: Option<Rat>,
}

/// Walls separating `v + α` from `v` (or containing the segment between them).
pub fn segment_crossings(alpha: &TwistParameter, walls: &[WallVector], v: &MukaiVector) -> Vec<SegmentCrossing> {
    let mut out = Vec::new();
    for w in walls {
        let a = v.pair(&w.u);
        let b = alpha.alpha().pair(&w.u);
        if b.is_zero() {
            if a.is_zero() {
                out.push(SegmentCrossing { wall: w.clone(), t: None });
            }
            continue;
        }
        let t = -a / b;
        if t.is_positive() && t <= Rat::from_integer(1.into()) {
            out.push(SegmentCrossing { wall: w.clone(), t: Some(t) });
        }
    }
    out
}

fn check_minus_two(u: &MukaiVector) -> Result<(), WallError> {
    let sq = u.square();
    if sq != Rat::from_integer((-2).into()) {
        return Err(WallError::NotMinusTwo(format_rational(&sq)));
    }
    Ok(())
}

fn reflect_unchecked(u: &MukaiVector, x: &MukaiVector) -> MukaiVector {
    x + &u.scale(&x.pair(u))
}

/// `R_u(x) = x + <x,u> u`.
pub fn reflect(u: &MukaiVector, x: &MukaiVector) -> Result<MukaiVector, WallError> {
    check_minus_two(u)?;
    if !same_lattice(u.lattice(), x.lattice()) {
        return Err(MukaiError::AmbientMismatch.into());
    }
    Ok(reflect_unchecked(u, x))
}

/// Cohomological action `-R_u` of the Fourier–Mukai transform attached to a
/// rigid sheaf with Mukai vector `u`.
pub fn fm_cohomological(u: &MukaiVector, x: &MukaiVector) -> Result<MukaiVector, WallError> {
    Ok(-&reflect(u, x)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossing {
    pub v_prime: MukaiVector,
    pub note: String,
}

/// `v' = R_u(v)` for a wall with `<v,u> < 0`.
pub fn cross_wall(v: &MukaiVector, u: &WallVector) -> Result<WallCrossing, WallError> {
    let p = v.pairing(&u.u)?;
    if p.is_zero() {
        return Err(WallError::UOnUPrime);
    }
    if p.is_positive() {
        return Err(WallError::NotAWall(format!("<v,u> = {} > 0", format_rational(&p))));
    }
    let v_prime = reflect(&u.u, v)?;
    debug_assert!(v_prime.is_isotropic());
    let note = format!("M(v) on the two sides of W_u are identified via v' = {v_prime}; theta_v^(alpha-) = theta_v^(alpha+)");
    Ok(WallCrossing { v_prime, note })
}

/// Which Hom space cuts out the curve, from the sign of `rk w(v_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum HomSide {
    /// `rk w(v_i) > 0`: `{E | Hom(F_i, E) != 0}`.
    FromF,
    /// `rk w(v_i) < 0`: `{E | Hom(E, F_i) != 0}`.
    ToF,
}

impl HomSide {
    pub fn locus(&self) -> &'static str {
        match self {
            HomSide::FromF => "Hom(F_i, E) != 0",
            HomSide::ToF => "Hom(E, F_i) != 0",
        }
    }
}

/// A class in `v^⊥ / Zv`, stored by its representative with rank in `[0, rk v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub representative: MukaiVector,
    pub image: MukaiVector,
    pub side: HomSide,
}

impl CurveClass {
    pub fn from_class(x: &MukaiVector, v: &MukaiVector) -> Self {
        let side = if x.r().is_negative() { HomSide::FromF } else { HomSide::ToF };
        Self { representative: normalize_mod_v(x, v), image: -x, side }
    }
}

/// `x - k v` with `k = floor(rk x / rk v)`.
pub fn normalize_mod_v(x: &MukaiVector, v: &MukaiVector) -> MukaiVector {
    let k = floor(&(x.r() / v.r()));
    x - &v.scale_int(&k)
}

/// Applies `w = s_{l_1} ... s_{l_k}` to `x`, where `s_l = R_{basis[l-1]}`.
pub fn apply_word(basis: &[MukaiVector], w: &WeylWord, x: &MukaiVector) -> Result<MukaiVector, WallError> {
    let mut y = x.clone();
    for &l in w.letters.iter().rev() {
        if l == 0 || l > basis.len() {
            return Err(RootError::IndexOutOfRange { index: l, rank: basis.len() }.into());
        }
        y = reflect(&basis[l - 1], &y)?;
    }
    Ok(y)
}

/// `PD([C_i]) = -w(v_i)` in `v^⊥/Zv`, with the side rule from `rk w(v_i)`.
pub fn curve_classes(v: &MukaiVector, basis: &[MukaiVector], w: &WeylWord) -> Result<Vec<CurveClass>, WallError> {
    for (i, b) in basis.iter().enumerate() {
        check_minus_two(b)?;
        if !v.pairing(b)?.is_zero() {
            return Err(WallError::NotOrthogonalToV { index: i + 1 });
        }
    }
    let mut out = Vec::with_capacity(basis.len());
    for (i, b) in basis.iter().enumerate() {
        let image = apply_word(basis, w, b)?;
        if image.r().is_zero() {
            return Err(WallError::RankZeroImage { index: i + 1 });
        }
        let class = -&image;
        out.push(CurveClass::from_class(&class, v));
    }
    Ok(out)
}

/// `<v_i,α>/rk v_i > <v + Σ a_j v_j, α>/rk(v + Σ a_j v_j)` for every
/// retained node `(v_i, a_i)`, `i > 0`.
pub fn slope_condition(alpha: &TwistParameter, v: &MukaiVector, retained: &[(MukaiVector, Int)]) -> bool {
    let a = alpha.alpha();
    let mut total = v.clone();
    for (vi, ai) in retained {
        total = &total + &vi.scale_int(ai);
    }
    let rhs = a.pair(&total) / total.r();
    retained.iter().all(|(vi, _)| (a.pair(vi) / vi.r()).cmp(&rhs) == Ordering::Greater)
}

/// Finite diagram of the retained nodes (Cartan matrix `-<v_i,v_j>` in input
/// order) together with the reduction of `(<v_i, α>)_i` to the fundamental
/// chamber. `α` lies in `w(D)` for `w = reduction.word.inverse()`.
pub fn weyl_chamber(alpha: &TwistParameter, basis: &[MukaiVector]) -> Result<(FiniteDiagram, ChamberReduction), WallError> {
    let n = basis.len();
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = basis[i].pairing(&basis[j])?;
            if !p.is_integer() {
                return Err(RootError::NotCartan(format!("<v_{},v_{}> = {}", i + 1, j + 1, format_rational(&p))).into());
            }
            entries[i][j] = i64::try_from(-p.to_integer()).map_err(|_| RootError::NotCartan("entry too large".into()))?;
        }
    }
    let f = classify_finite(&CartanMatrix::new(entries)?)?;
    let values: Vec<Rat> = basis.iter().map(|b| b.pair(alpha.alpha())).collect();
    let red = reduce_to_fundamental(&f, &values)?;
    Ok((f, red))
}
