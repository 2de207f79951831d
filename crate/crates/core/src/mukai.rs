//! The algebraic Mukai lattice `Z ⊕ Pic ⊕ Zρ` over a Picard lattice.
//!
//! A Mukai vector is stored as `(r, c1, s)`: `r` the rank (H⁰ part), `c1` the
//! divisor part in the Picard basis, `s` the coefficient of the point class
//! `ρ = (0, 0, 1)`. All three are rational; [`MukaiVector::is_integral`]
//! distinguishes integral classes.
//!
//! Pairing: `<x, y> = (c1_x, c1_y) - r_x s_y - s_x r_y`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::{Signed, Zero};
use thiserror::Error;

use crate::arith::{format_rational, gcd_all, is_one, Int, Rat};
use crate::lattice::{LatticeError, LatticeVector, PicardLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MukaiError {
    #[error("Mukai vectors live over different Picard lattices")]
    AmbientMismatch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("rank component must be positive")]
    NonPositiveRank,
    #[error("primitivity is only defined for integral Mukai vectors")]
    NonIntegral,
    #[error("twist parameter has nonzero rank component")]
    TwistRank,
    #[error("twist parameter divisor part is not orthogonal to the polarization")]
    TwistNotPerpendicular,
    #[error("twist parameter rho component {found} differs from (c1, xi)/r = {expected}")]
    TwistRho { found: String, expected: String },
}

#[derive(Debug, Clone)]
pub struct MukaiVector {
    lattice: Arc<PicardLattice>,
    r: Rat,
    c1: LatticeVector,
    s: Rat,
}

impl PartialEq for MukaiVector {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice) && self.r == other.r && self.c1 == other.c1 && self.s == other.s
    }
}

impl Eq for MukaiVector {}

impl PartialOrd for MukaiVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(r, c1, s)`; only meaningful over one lattice.
impl Ord for MukaiVector {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.r, &self.c1, &self.s).cmp(&(&other.r, &other.c1, &other.s))
    }
}

impl std::hash::Hash for MukaiVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.r.hash(state);
        self.c1.hash(state);
        self.s.hash(state);
    }
}

pub(crate) fn same_lattice(a: &Arc<PicardLattice>, b: &Arc<PicardLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl MukaiVector {
    pub fn new(lattice: Arc<PicardLattice>, r: Rat, c1: LatticeVector, s: Rat) -> Result<Self, MukaiError> {
        if c1.len() != lattice.rank() {
            return Err(LatticeError::DimensionMismatch { expected: lattice.rank(), found: c1.len() }.into());
        }
        Ok(Self { lattice, r, c1, s })
    }

    /// Integral convenience constructor; panics on a length mismatch.
    pub fn from_i64(lattice: &Arc<PicardLattice>, r: i64, c1: &[i64], s: i64) -> Self {
        Self::new(Arc::clone(lattice), Rat::from_integer(r.into()), LatticeVector::from_i64(c1), Rat::from_integer(s.into()))
            .expect("c1 length matches Picard rank")
    }

    pub fn zero(lattice: &Arc<PicardLattice>) -> Self {
        let n = lattice.rank();
        Self { lattice: Arc::clone(lattice), r: Rat::zero(), c1: LatticeVector::zero(n), s: Rat::zero() }
    }

    /// The point class `ρ = (0, 0, 1)`.
    pub fn rho(lattice: &Arc<PicardLattice>) -> Self {
        let mut x = Self::zero(lattice);
        x.s = Rat::from_integer(1.into());
        x
    }

    /// `v(E) = (rk, c1, (c1²)/2 - c2 + rk)`.
    pub fn from_chern(lattice: &Arc<PicardLattice>, rank: &Int, c1: &LatticeVector, c2: &Int) -> Result<Self, MukaiError> {
        if rank.is_negative() {
            return Err(MukaiError::NonPositiveRank);
        }
        let half_square = lattice.norm(c1)? / Rat::from_integer(2.into());
        let r = Rat::from_integer(rank.clone());
        let s = half_square - Rat::from_integer(c2.clone()) + &r;
        Self::new(Arc::clone(lattice), r, c1.clone(), s)
    }

    /// Inverse of [`MukaiVector::from_chern`]: `c2 = (c1²)/2 - s + r`.
    pub fn second_chern(&self) -> Rat {
        self.lattice.pairing_unchecked(self.c1.coords(), self.c1.coords()) / Rat::from_integer(2.into()) - &self.s + &self.r
    }

    pub fn lattice(&self) -> &Arc<PicardLattice> {
        &self.lattice
    }

    pub fn r(&self) -> &Rat {
        &self.r
    }

    pub fn c1(&self) -> &LatticeVector {
        &self.c1
    }

    pub fn s(&self) -> &Rat {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.c1.is_zero() && self.s.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.r.is_integer() && self.c1.is_integral() && self.s.is_integer()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { lattice: Arc::clone(&self.lattice), r: &self.r * k, c1: self.c1.scale(k), s: &self.s * k }
    }

    pub fn scale_int(&self, k: &Int) -> Self {
        self.scale(&Rat::from_integer(k.clone()))
    }

    /// Mukai pairing.
    pub fn pairing(&self, other: &Self) -> Result<Rat, MukaiError> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(MukaiError::AmbientMismatch);
        }
        Ok(self.pair(other))
    }

    pub(crate) fn pair(&self, other: &Self) -> Rat {
        self.lattice.pairing_unchecked(self.c1.coords(), other.c1.coords()) - &self.r * &other.s - &self.s * &other.r
    }

    pub fn square(&self) -> Rat {
        self.pair(self)
    }

    /// `χ(x, y) = -<x, y>`.
    pub fn euler_pairing(&self, other: &Self) -> Result<Rat, MukaiError> {
        self.pairing(other).map(|p| -p)
    }

    pub fn is_isotropic(&self) -> bool {
        self.square().is_zero()
    }

    pub fn is_primitive(&self) -> Result<bool, MukaiError> {
        if !self.is_integral() {
            return Err(MukaiError::NonIntegral);
        }
        let mut parts: Vec<Int> = vec![self.r.to_integer(), self.s.to_integer()];
        parts.extend(self.c1.coords().iter().map(|c| c.to_integer()));
        Ok(is_one(&gcd_all(&parts)))
    }

    /// `δ(D) = D + ((D, ξ)/r) ρ` for `self = (r, ξ, s)` with `r > 0`.
    pub fn delta(&self, d: &LatticeVector) -> Result<MukaiVector, MukaiError> {
        if !self.r.is_positive() {
            return Err(MukaiError::NonPositiveRank);
        }
        let dx = self.lattice.pairing(d, &self.c1)?;
        Ok(Self { lattice: Arc::clone(&self.lattice), r: Rat::zero(), c1: d.clone(), s: dx / &self.r })
    }

    /// `Ĥ = δ(H)`.
    pub fn h_hat(&self, h: &LatticeVector) -> Result<MukaiVector, MukaiError> {
        self.delta(h)
    }

    /// Writes `x = cv·self + cρ·ρ + δ(D)`.
    pub fn decompose(&self, x: &MukaiVector) -> Result<Decomposition, MukaiError> {
        if !same_lattice(&self.lattice, &x.lattice) {
            return Err(MukaiError::AmbientMismatch);
        }
        if !self.r.is_positive() {
            return Err(MukaiError::NonPositiveRank);
        }
        let cv = &x.r / &self.r;
        let d = x.c1.sub(&self.c1.scale(&cv));
        let dx = self.lattice.pairing_unchecked(d.coords(), self.c1.coords()) / &self.r;
        let c_rho = &x.s - &cv * &self.s - dx;
        Ok(Decomposition { cv, c_rho, d })
    }

    pub fn recompose(&self, parts: &Decomposition) -> Result<MukaiVector, MukaiError> {
        Ok(&(&self.scale(&parts.cv) + &Self::rho(&self.lattice).scale(&parts.c_rho)) + &self.delta(&parts.d)?)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        assert!(same_lattice(&self.lattice, &rhs.lattice), "Mukai vectors over different lattices");
        MukaiVector { lattice: Arc::clone(&self.lattice), r: &self.r + &rhs.r, c1: self.c1.add(&rhs.c1), s: &self.s + &rhs.s }
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        assert!(same_lattice(&self.lattice, &rhs.lattice), "Mukai vectors over different lattices");
        MukaiVector { lattice: Arc::clone(&self.lattice), r: &self.r - &rhs.r, c1: self.c1.sub(&rhs.c1), s: &self.s - &rhs.s }
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        MukaiVector { lattice: Arc::clone(&self.lattice), r: -&self.r, c1: self.c1.neg(), s: -&self.s }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_rational(&self.r), self.c1, format_rational(&self.s))
    }
}

/// `x = cv·v + c_rho·ρ + δ(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub cv: Rat,
    pub c_rho: Rat,
    pub d: LatticeVector,
}

/// A twist `α ∈ δ(H^⊥) ⊗ Q` for a fixed `(v, H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistParameter {
    alpha: MukaiVector,
}

impl TwistParameter {
    pub fn new(alpha: MukaiVector, v: &MukaiVector, h: &LatticeVector) -> Result<Self, MukaiError> {
        if !same_lattice(alpha.lattice(), v.lattice()) {
            return Err(MukaiError::AmbientMismatch);
        }
        if !v.r.is_positive() {
            return Err(MukaiError::NonPositiveRank);
        }
        if !alpha.r.is_zero() {
            return Err(MukaiError::TwistRank);
        }
        if !v.lattice.pairing(&alpha.c1, h)?.is_zero() {
            return Err(MukaiError::TwistNotPerpendicular);
        }
        let expected = v.lattice.pairing_unchecked(alpha.c1.coords(), v.c1.coords()) / &v.r;
        if alpha.s != expected {
            return Err(MukaiError::TwistRho { found: format_rational(&alpha.s), expected: format_rational(&expected) });
        }
        Ok(Self { alpha })
    }

    /// `δ(D)` for a divisor `D ⊥ H`.
    pub fn from_divisor(v: &MukaiVector, h: &LatticeVector, d: &LatticeVector) -> Result<Self, MukaiError> {
        Self::new(v.delta(d)?, v, h)
    }

    pub fn zero(v: &MukaiVector) -> Self {
        Self { alpha: MukaiVector::zero(v.lattice()) }
    }

    pub fn alpha(&self) -> &MukaiVector {
        &self.alpha
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { alpha: self.alpha.scale(k) }
    }
}

/// Compares the large-`n` twisted reduced Hilbert polynomials of `x` and `y`
/// with respect to the twist `w` and polarization `h`: first the slopes
/// `(c1, H)/r`, then `χ(w, ·)/(rk w · rk ·) = -<w, ·>/(rk w · rk ·)`.
pub fn twisted_comparator(w: &MukaiVector, h: &LatticeVector, x: &MukaiVector, y: &MukaiVector) -> Result<Ordering, MukaiError> {
    for m in [x, y] {
        if !same_lattice(w.lattice(), m.lattice()) {
            return Err(MukaiError::AmbientMismatch);
        }
    }
    if !(w.r.is_positive() && x.r.is_positive() && y.r.is_positive()) {
        return Err(MukaiError::NonPositiveRank);
    }
    let lattice = w.lattice();
    let slope = |m: &MukaiVector| -> Result<Rat, MukaiError> { Ok(lattice.pairing(m.c1(), h)? / m.r()) };
    let constant = |m: &MukaiVector| -> Rat { -w.pair(m) / (w.r() * m.r()) };
    Ok(slope(x)?.cmp(&slope(y)?).then_with(|| constant(x).cmp(&constant(y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, ratio};

    fn elliptic() -> Arc<PicardLattice> {
        Arc::new(PicardLattice::with_labels(&[vec![-2, 1], vec![1, 0]], vec!["sigma".into(), "f".into()]).unwrap())
    }

    fn a1_instance() -> Arc<PicardLattice> {
        Arc::new(PicardLattice::from_rows(&[vec![0, 4], vec![4, 0]]).unwrap())
    }

    #[test]
    fn pairing_examples() {
        let l = elliptic();
        let one = MukaiVector::from_i64(&l, 1, &[0, 0], 0);
        assert_eq!(one.pairing(&MukaiVector::rho(&l)).unwrap(), rat(-1));
        let v = MukaiVector::from_i64(&l, 2, &[1, 3], 1);
        assert_eq!(v.square(), rat(0));
        let n = a1_instance();
        let v0 = MukaiVector::from_i64(&n, 1, &[1, 0], 1);
        let v1 = MukaiVector::from_i64(&n, 1, &[0, 1], 1);
        assert_eq!(v0.pairing(&v1).unwrap(), rat(2));
        assert_eq!(v0.pairing(&MukaiVector::rho(&l)), Err(MukaiError::AmbientMismatch));
    }

    #[test]
    fn chern_examples() {
        let l = elliptic();
        let o = MukaiVector::from_chern(&l, &int(1), &LatticeVector::zero(2), &int(0)).unwrap();
        assert_eq!(o, MukaiVector::from_i64(&l, 1, &[0, 0], 1));
        let e = MukaiVector::from_chern(&l, &int(2), &LatticeVector::from_i64(&[1, 3]), &int(3)).unwrap();
        assert_eq!(e, MukaiVector::from_i64(&l, 2, &[1, 3], 1));
        assert_eq!(e.second_chern(), rat(3));
        let p = MukaiVector::from_chern(&l, &int(0), &LatticeVector::zero(2), &int(-1)).unwrap();
        assert_eq!(p, MukaiVector::rho(&l));
        assert_eq!(
            MukaiVector::from_chern(&l, &int(-1), &LatticeVector::zero(2), &int(0)),
            Err(MukaiError::NonPositiveRank)
        );
    }

    #[test]
    fn euler_examples() {
        let l = elliptic();
        let o = MukaiVector::from_i64(&l, 1, &[0, 0], 1);
        assert_eq!(o.euler_pairing(&o).unwrap(), rat(2));
        let n = a1_instance();
        let v1 = MukaiVector::from_i64(&n, 1, &[0, 1], 1);
        let v = MukaiVector::from_i64(&n, 2, &[1, 1], 2);
        assert_eq!(v.euler_pairing(&v1).unwrap(), rat(0));
    }

    #[test]
    fn delta_examples() {
        let n = a1_instance();
        let v = MukaiVector::from_i64(&n, 2, &[1, 1], 2);
        let h = LatticeVector::from_i64(&[1, 1]);
        assert_eq!(v.delta(&h).unwrap(), MukaiVector::from_i64(&n, 0, &[1, 1], 4));
        let d = LatticeVector::from_i64(&[1, -1]);
        assert_eq!(v.delta(&d).unwrap(), MukaiVector::from_i64(&n, 0, &[1, -1], 0));
        let l = elliptic();
        let v = MukaiVector::from_i64(&l, 2, &[1, 3], 1);
        assert_eq!(v.h_hat(&LatticeVector::from_i64(&[1, 3])).unwrap(), MukaiVector::from_i64(&l, 0, &[1, 3], 2));
        assert_eq!(MukaiVector::rho(&l).delta(&h), Err(MukaiError::NonPositiveRank));
    }

    #[test]
    fn decompose_examples() {
        let n = a1_instance();
        let v = MukaiVector::from_i64(&n, 2, &[1, 1], 2);
        let parts = v.decompose(&v).unwrap();
        assert_eq!((parts.cv.clone(), parts.c_rho.clone()), (rat(1), rat(0)));
        assert!(parts.d.is_zero());
        let parts = v.decompose(&MukaiVector::rho(&n)).unwrap();
        assert_eq!((parts.cv.clone(), parts.c_rho.clone()), (rat(0), rat(1)));
        let v0 = MukaiVector::from_i64(&n, 1, &[1, 0], 1);
        let parts = v.decompose(&v0).unwrap();
        // Hand solution: cv = 1/2, D = (1/2, -1/2), (D, ξ) = 0, cρ = 1 - 1 = 0.
        assert_eq!(parts.cv, ratio(1, 2));
        assert_eq!(parts.d, LatticeVector::new(vec![ratio(1, 2), ratio(-1, 2)]));
        assert_eq!(parts.c_rho, rat(0));
        assert_eq!(v.recompose(&parts).unwrap(), v0);
    }

    #[test]
    fn isotropy_and_primitivity() {
        let l = elliptic();
        let v = MukaiVector::from_i64(&l, 2, &[1, 3], 1);
        assert!(v.is_isotropic());
        assert!(v.is_primitive().unwrap());
        assert!(!v.scale_int(&int(2)).is_primitive().unwrap());
        assert!(MukaiVector::rho(&l).is_isotropic());
        assert_eq!(v.scale(&ratio(1, 2)).is_primitive(), Err(MukaiError::NonIntegral));
    }

    #[test]
    fn twist_constraints() {
        let n = a1_instance();
        let v = MukaiVector::from_i64(&n, 2, &[1, 1], 2);
        let h = LatticeVector::from_i64(&[1, 1]);
        let d = LatticeVector::from_i64(&[1, -1]);
        assert!(TwistParameter::from_divisor(&v, &h, &d).is_ok());
        assert_eq!(TwistParameter::from_divisor(&v, &h, &h), Err(MukaiError::TwistNotPerpendicular));
        let with_rank = &v.delta(&d).unwrap() + &MukaiVector::from_i64(&n, 1, &[0, 0], 0);
        assert_eq!(TwistParameter::new(with_rank, &v, &h), Err(MukaiError::TwistRank));
        let wrong_rho = &v.delta(&d).unwrap() + &MukaiVector::rho(&n);
        assert!(matches!(TwistParameter::new(wrong_rho, &v, &h), Err(MukaiError::TwistRho { .. })));
    }

    #[test]
    fn comparator_examples() {
        let n = a1_instance();
        let v = MukaiVector::from_i64(&n, 2, &[1, 1], 2);
        let v0 = MukaiVector::from_i64(&n, 1, &[1, 0], 1);
        let v1 = MukaiVector::from_i64(&n, 1, &[0, 1], 1);
        let h = LatticeVector::from_i64(&[1, 1]);
        assert_eq!(twisted_comparator(&v, &h, &v1, &v1).unwrap(), Ordering::Equal);
        // Equal slopes, <v, v_i> = 0 = <v, v>: decided by the constant term, equal.
        assert_eq!(twisted_comparator(&v, &h, &v1, &v).unwrap(), Ordering::Equal);
        // α = δ(ξ0 - ξ1); <α, v1> = 4 > 0, so χ(v + α, v1) < 0.
        let alpha = TwistParameter::from_divisor(&v, &h, &LatticeVector::from_i64(&[1, -1])).unwrap();
        let w = &v + alpha.alpha();
        assert_eq!(alpha.alpha().pairing(&v1).unwrap(), rat(4));
        assert_eq!(twisted_comparator(&w, &h, &v1, &v).unwrap(), Ordering::Less);
        assert_eq!(twisted_comparator(&w, &h, &v0, &v).unwrap(), Ordering::Greater);
        assert_eq!(twisted_comparator(&w, &h, &MukaiVector::rho(&n), &v), Err(MukaiError::NonPositiveRank));
    }
}
