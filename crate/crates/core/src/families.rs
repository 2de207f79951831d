//! Lattice families realising every affine ADE type as the stratum of a
//! single singular point, with their defining identities checked exactly.

use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use crate::arith::{format_rational, Int, Rat};
use crate::lattice::{LatticeError, LatticeVector, PicardLattice, Sublattice};
use crate::mukai::{MukaiError, MukaiVector};
use crate::roots::{standard_affine_cartan, standard_marks, valid_type, Family};
use crate::singularity::StratumData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("invalid example spec: {0}")]
    InvalidSpec(String),
    #[error("identity {name} failed: {detail}")]
    IdentityFailed { name: &'static str, detail: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Mukai(#[from] MukaiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExampleSpec {
    pub family: Family,
    pub n: usize,
    pub r: i64,
    pub a: i64,
}

impl ExampleSpec {
    pub fn new(family: Family, n: usize, r: i64, a: i64) -> Result<Self, ExampleError> {
        if !valid_type(family, n) {
            return Err(ExampleError::InvalidSpec(format!("~{family}{n} is not an affine ADE type")));
        }
        if r <= 0 || a <= 0 {
            return Err(ExampleError::InvalidSpec(format!("r = {r} and a = {a} must be positive")));
        }
        Ok(Self { family, n, r, a })
    }

    pub fn type_name(&self) -> String {
        format!("~{}{}", self.family, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleInstance {
    pub spec: ExampleSpec,
    /// `N` with basis `ξ_0..ξ_n` and `(ξ_i, ξ_j) = -a_ij + 2ra`.
    pub lattice: Arc<PicardLattice>,
    pub h: LatticeVector,
    pub marks: Vec<i64>,
    /// `v_i = (r, ξ_i, a)`.
    pub v_list: Vec<MukaiVector>,
    pub v: MukaiVector,
    pub verification: Vec<IdentityCheck>,
}

impl ExampleInstance {
    pub fn stratum(&self) -> StratumData {
        let strata = self.v_list.iter().zip(&self.marks).map(|(u, &m)| (u.clone(), Int::from(m))).collect();
        StratumData::new(Arc::clone(&self.lattice), self.h.clone(), self.v.clone(), strata)
    }
}

/// `(-a_ij + 2d)` for the standard affine Cartan matrix `(a_ij)`.
pub fn example_gram(family: Family, n: usize, d: i64) -> Vec<Vec<i64>> {
    let c = standard_affine_cartan(family, n);
    c.entries().iter().map(|row| row.iter().map(|&x| -x + 2 * d).collect()).collect()
}

fn check(out: &mut Vec<IdentityCheck>, name: &'static str, holds: bool, detail: String) {
    out.push(IdentityCheck { name, holds, detail });
}

/// Builds `N`, `H = Σ a_i ξ_i`, `v_i` and `v = Σ a_i v_i`, and verifies the
/// eleven defining identities. A failing identity is an error.
pub fn generate_example(spec: &ExampleSpec) -> Result<ExampleInstance, ExampleError> {
    let spec = ExampleSpec::new(spec.family, spec.n, spec.r, spec.a)?;
    let (r, a) = (spec.r, spec.a);
    let size = spec.n + 1;
    let cartan = standard_affine_cartan(spec.family, spec.n);
    let marks = standard_marks(spec.family, spec.n);
    debug_assert!(cartan.apply(&marks).iter().all(|&x| x == 0));
    let gram = example_gram(spec.family, spec.n, r * a);
    let labels = (0..size).map(|i| format!("xi_{i}")).collect();
    let lattice = Arc::new(PicardLattice::with_labels(&gram, labels)?);
    let h = LatticeVector::from_i64(&marks);
    let sum_a: i64 = marks.iter().sum();
    let v_list: Vec<MukaiVector> = (0..size)
        .map(|i| {
            let mut c = vec![0; size];
            c[i] = 1;
            MukaiVector::from_i64(&lattice, r, &c, a)
        })
        .collect();
    let mut v = MukaiVector::zero(&lattice);
    for (vi, &m) in v_list.iter().zip(&marks) {
        v = &v + &vi.scale_int(&Int::from(m));
    }

    let mut out = Vec::new();
    let q = |x: i64| Rat::from_integer(Int::from(x));
    let expected = q(2 * r * a * sum_a);
    let h_xi: Vec<Rat> = (0..size).map(|j| lattice.pairing(&h, &LatticeVector::unit(size, j))).collect::<Result<_, _>>()?;
    check(
        &mut out,
        "h_pairs_xi",
        h_xi.iter().all(|x| *x == expected),
        format!("(H,xi_j) = {:?}, expected {}", h_xi.iter().map(format_rational).collect::<Vec<_>>(), format_rational(&expected)),
    );
    let hh = lattice.norm(&h)?;
    check(&mut out, "h_square", hh == q(2 * r * a * sum_a * sum_a) && hh > Rat::zero(), format!("(H^2) = {}", format_rational(&hh)));

    let perp = lattice.orthogonal_complement(std::slice::from_ref(&h))?;
    let diffs: Vec<LatticeVector> = (0..spec.n)
        .map(|i| {
            let mut c = vec![0; size];
            c[i] = 1;
            c[i + 1] = -1;
            LatticeVector::from_i64(&c)
        })
        .collect();
    let span = Sublattice::new(Arc::clone(&lattice), diffs)?;
    check(&mut out, "h_perp_basis", perp.same_span(&span), format!("rank H^perp = {}", perp.rank()));
    let definite = perp.is_negative_definite();
    check(&mut out, "h_perp_negative_definite", definite, format!("signature {:?}", perp.signature()));
    let minus_two = if definite { perp.enumerate_norm_vectors(&Int::from(-2), &Int::from(-2))?.len() } else { usize::MAX };
    check(&mut out, "h_perp_no_minus_two", minus_two == 0, format!("{minus_two} vectors of norm -2"));

    let mut bad = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let p = v_list[i].pair(&v_list[j]);
            if p != q(-cartan.get(i, j)) {
                bad.push(format!("<v_{i},v_{j}> = {}", format_rational(&p)));
            }
        }
    }
    check(&mut out, "v_pairings_cartan", bad.is_empty(), bad.join(", "));
    let pv: Vec<Rat> = v_list.iter().map(|x| v.pair(x)).collect();
    check(&mut out, "v_orthogonal", pv.iter().all(Zero::is_zero), format!("<v,v_j> = {:?}", pv.iter().map(format_rational).collect::<Vec<_>>()));
    let h_hat = v.h_hat(&h)?;
    let ph: Vec<Rat> = v_list.iter().map(|x| h_hat.pair(x)).collect();
    check(&mut out, "h_hat_orthogonal", ph.iter().all(Zero::is_zero), format!("<H^,v_j> = {:?}", ph.iter().map(format_rational).collect::<Vec<_>>()));
    check(&mut out, "v_isotropic", v.is_isotropic(), format!("<v,v> = {}", format_rational(&v.square())));
    check(&mut out, "v_primitive", v.is_primitive()?, format!("v = {v}"));
    let phi = phi_norm_two_count(spec.family, spec.n)?;
    check(&mut out, "phi_no_norm_two", phi == Some(0), format!("{phi:?} norm-2 vectors in im phi"));

    if let Some(f) = out.iter().find(|c| !c.holds) {
        return Err(ExampleError::IdentityFailed { name: f.name, detail: f.detail.clone() });
    }
    Ok(ExampleInstance { spec, lattice, h, marks, v_list, v, verification: out })
}

/// Number of norm-2 vectors in `{Σ d_i α_i : Σ d_i = 0}` of the affine root
/// lattice, or `None` if that sublattice is not positive definite.
pub fn phi_norm_two_count(family: Family, n: usize) -> Result<Option<usize>, ExampleError> {
    let c = standard_affine_cartan(family, n);
    let q = Arc::new(PicardLattice::with_labels(c.entries(), (0..=n).map(|i| format!("alpha_{i}")).collect())?);
    let basis: Vec<LatticeVector> = (0..n)
        .map(|i| {
            let mut x = vec![0; n + 1];
            x[i] = 1;
            x[i + 1] = -1;
            LatticeVector::from_i64(&x)
        })
        .collect();
    let im = Sublattice::new(q, basis)?;
    if !im.is_positive_definite() {
        return Ok(None);
    }
    Ok(Some(im.enumerate_norm_vectors(&Int::from(2), &Int::from(2))?.len()))
}

/// `N₁ = (⊕ Z β_i) ⊕ Z σ` with `(β_i, β_j) = -a_ij`, `(σ,β_0) = 1`,
/// `(σ, β_i) = 0` for `i > 0` and `(σ²) = 0`; basis `β_0..β_n, σ`.
pub fn build_n1_lattice(family: Family, n: usize) -> Result<PicardLattice, ExampleError> {
    if !valid_type(family, n) {
        return Err(ExampleError::InvalidSpec(format!("~{family}{n} is not an affine ADE type")));
    }
    let c = standard_affine_cartan(family, n);
    let size = n + 2;
    let mut g = vec![vec![0i64; size]; size];
    for i in 0..=n {
        for j in 0..=n {
            g[i][j] = -c.get(i, j);
        }
    }
    g[0][n + 1] = 1;
    g[n + 1][0] = 1;
    let mut labels: Vec<String> = (0..=n).map(|i| format!("beta_{i}")).collect();
    labels.push("sigma".into());
    let lattice = PicardLattice::with_labels(&g, labels)?;
    let sig = lattice.signature();
    assert_eq!((sig.pos, sig.neg, sig.null), (1, n + 1, 0), "N1 signature");
    Ok(lattice)
}

/// Gram matrix of `ξ_i = β_i + x` inside `N₁ ⊕ Z x` with `(x²) = 2d`.
pub fn embedded_gram(family: Family, n: usize, d: i64) -> Result<Vec<Vec<Int>>, ExampleError> {
    let n1 = build_n1_lattice(family, n)?;
    let size = n + 3;
    let mut g: Vec<Vec<i64>> = vec![vec![0; size]; size];
    for (i, row) in n1.gram().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            g[i][j] = i64::try_from(x).expect("small Gram entry");
        }
    }
    g[size - 1][size - 1] = 2 * d;
    let big = PicardLattice::from_rows(&g)?;
    let xi: Vec<LatticeVector> = (0..=n)
        .map(|i| {
            let mut c = vec![0; size];
            c[i] = 1;
            c[size - 1] = 1;
            LatticeVector::from_i64(&c)
        })
        .collect();
    let mut out = vec![vec![Int::zero(); n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            let p = big.pairing(&xi[i], &xi[j])?;
            debug_assert!(p.is_integer());
            out[i][j] = p.to_integer();
        }
    }
    Ok(out)
}

/// The `d` with `(x²) = 2d` matching an example spec: `d = ra`.
pub fn embedding_parameter(spec: &ExampleSpec) -> i64 {
    spec.r * spec.a
}
