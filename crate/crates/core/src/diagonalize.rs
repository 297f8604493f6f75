//! Simultaneous diagonalization of symmetric pencils over the splitting
//! field of their determinantal form.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::field::{format_rational, rational_sqrt, Field, FieldElement, FieldTower, Rational, UniPoly};
use crate::forms::{BinaryForm, MPoly};
use crate::linalg::{ExactMatrix, Matrix};
use crate::pencil::{det_form, Pencil};
use crate::roots::{certified_complex_roots, rational_linear_factors, round_complex, ComplexRational};

type Fe = FieldElement;

/// A projective root `(s : t)` of the determinantal form, i.e. a factor `s·x − t·y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilRoot {
    pub s: Fe,
    pub t: Fe,
    pub multiplicity: usize,
}

impl PencilRoot {
    /// Rational finite roots first by `t/s`, then the root at infinity, then
    /// irrational roots by tower representation.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        fn class(r: &PencilRoot) -> (u8, Option<Fe>) {
            if r.s.is_zero() {
                return (1, None);
            }
            let ratio = r.t.clone().div(&r.s).unwrap();
            if ratio.is_rational() {
                (0, Some(ratio))
            } else {
                (2, Some(ratio))
            }
        }
        let (ca, ra) = class(self);
        let (cb, rb) = class(other);
        ca.cmp(&cb).then_with(|| match (ra, rb) {
            (Some(a), Some(b)) => a.canonical_cmp(&b),
            _ => Ordering::Equal,
        })
    }
}

#[derive(Clone, Debug)]
pub enum PencilRoots {
    /// Every root lies in `tower`.
    Exact { tower: FieldTower, roots: Vec<PencilRoot> },
    /// Certified approximations of the affine roots `t/s` (with `s = 1`),
    /// plus the exactly known ones.
    Numeric { exact: Vec<PencilRoot>, approximate: Vec<ComplexRational> },
}

impl PencilRoots {
    pub fn is_exact(&self) -> bool {
        matches!(self, PencilRoots::Exact { .. })
    }
}

/// Bits of dyadic precision used by the numeric fallback.
pub const NUMERIC_BITS: u32 = 256;

/// Roots of `det(Ax − By)`. Rational pencils only.
pub fn split_det_form(p: &Pencil) -> Result<PencilRoots> {
    if !p.is_rational() {
        return Err(Error::TowerMismatch);
    }
    let f = det_form(p);
    if f.is_zero() {
        return Err(Error::ZeroDetForm);
    }
    let lf = rational_linear_factors(&f)?;
    let rat = |v: &num_bigint::BigInt| Fe::rational(Rational::from_integer(v.clone()));
    let mut roots: Vec<PencilRoot> =
        lf.roots.iter().map(|r| PencilRoot { s: rat(&r.s), t: rat(&r.t), multiplicity: r.multiplicity }).collect();
    let rest = lf.cofactor.degree();
    let poly = lf.cofactor.dehomogenize();
    let tower = match rest {
        0 => FieldTower::rationals(),
        1 => unreachable!("linear cofactors are split off"),
        2 => {
            let (tower, theta) = FieldTower::rationals().extend_by_root(&poly)?;
            let m = poly.monic();
            let other = -(m.coeff(1)) - &theta;
            for r in [theta, other] {
                roots.push(PencilRoot { s: Fe::one(), t: r, multiplicity: 1 });
            }
            tower
        }
        3 => {
            let (tower, found) = split_rational_cubic(&poly)?;
            roots.extend(found.into_iter().map(|r| PencilRoot { s: Fe::one(), t: r, multiplicity: 1 }));
            tower
        }
        _ => {
            let approx = affine_numeric_roots(&lf.cofactor)?;
            return Ok(PencilRoots::Numeric { exact: roots, approximate: approx });
        }
    };
    roots.sort_by(|a, b| a.canonical_cmp(b));
    Ok(PencilRoots::Exact { tower, roots })
}

/// Splits an irreducible rational cubic: adjoin one root `θ`, then either
/// take the square root of the discriminant inside `ℚ(θ)` or adjoin a root of
/// the residual quadratic.
fn split_rational_cubic(poly: &UniPoly<Fe>) -> Result<(FieldTower, Vec<Fe>)> {
    let f = poly.monic();
    let (tower, theta) = FieldTower::rationals().extend_by_root(&f)?;
    let lifted = f.map(|c| c.lift_to(&tower).expect("rational coefficient"));
    let (quad, rem) = lifted.div_rem(&UniPoly::linear_root(&theta));
    debug_assert!(rem.is_zero());
    let (q1, q0) = (quad.coeff(1), quad.coeff(0));
    let disc_q = q1.square() - &(Fe::from_i64(4) * &q0);
    let disc_f = BinaryForm::homogenize(&f, 3).cubic_discriminant().to_rational().expect("rational cubic");
    let half = Fe::rational(Rational::new(1.into(), 2.into()));
    if let Some(root_d) = rational_sqrt(&disc_f) {
        // disc(quad) · f'(θ)² = disc(f)
        let sq = Fe::rational(root_d).div(&f.derivative().map(|c| c.lift_to(&tower).unwrap()).eval(&theta)).unwrap();
        debug_assert_eq!(sq.square(), disc_q);
        let r1 = (-q1.clone() + &sq) * &half;
        let r2 = (-q1 - &sq) * &half;
        return Ok((tower, vec![theta, r1, r2]));
    }
    let (tower2, phi) = tower.extend_by_root(&quad)?;
    let theta = theta.lift_to(&tower2)?;
    let other = -(q1.lift_to(&tower2)?) - &phi;
    Ok((tower2, vec![theta, phi, other]))
}

/// Certified approximations of the roots of `F(x, 1)` for a cofactor with no
/// rational roots.
fn affine_numeric_roots(cofactor: &BinaryForm) -> Result<Vec<ComplexRational>> {
    let poly: UniPoly<Rational> = cofactor.dehomogenize().map(|c| c.to_rational().expect("rational cofactor"));
    if poly.degree() != Some(cofactor.degree()) {
        return Err(Error::Numeric("root at infinity in the cofactor".into()));
    }
    certified_complex_roots(&poly, NUMERIC_BITS).map_err(|e| match e {
        Error::Numeric(m) if m.contains("repeated") => Error::RankDeficient(0),
        other => other,
    })
}

/// Normalizes a nonzero vector so its first nonzero entry is 1.
fn normalize_first<F: Field>(v: &[F]) -> Vec<F> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("nonzero vector").clone();
    let inv = lead.inv().unwrap();
    v.iter().map(|c| c.clone() * &inv).collect()
}

/// For each root, the coefficient vector `L_i` generating the row space of
/// the rank-one matrix `adj(t_i A − s_i B)`.
pub fn singular_member_linforms(p: &Pencil, tower: &FieldTower, roots: &[PencilRoot]) -> Result<Vec<Vec<Fe>>> {
    let a = p.a().map(|e| e.lift_to(tower).expect("pencil entries lie below the tower"));
    let b = p.b().map(|e| e.lift_to(tower).expect("pencil entries lie below the tower"));
    let mut out = Vec::with_capacity(roots.len());
    for (i, r) in roots.iter().enumerate() {
        let m = a.scale(&r.t).sub(&b.scale(&r.s));
        let adj = m.adjugate();
        let Some(row) = (0..adj.rows()).map(|k| adj.row(k)).find(|row| row.iter().any(|c| !c.is_zero())) else {
            return Err(Error::RankDeficient(i));
        };
        out.push(normalize_first(&row));
    }
    Ok(out)
}

/// The forms `ℓ_i` vanishing on every `L_j` with `j ≠ i`, each normalized to
/// leading coefficient 1.
pub fn assemble_dual_basis(l: &[Vec<Fe>]) -> Result<Vec<Vec<Fe>>> {
    let n = l.first().map_or(0, |r| r.len());
    if l.len() != n || n == 0 {
        return Err(Error::SingularStack);
    }
    let stack = Matrix::from_rows(l.to_vec());
    if stack.det().is_zero() {
        return Err(Error::SingularStack);
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let kernel = stack.without_row(i).kernel_basis();
        if kernel.len() != 1 {
            return Err(Error::SingularStack);
        }
        out.push(normalize_first(&kernel[0]));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DiagonalizationResult {
    pub tower: FieldTower,
    /// Columns form the diagonalizing basis: `UᵗAU = diag(s)`, `UᵗBU = diag(t)`.
    pub u: ExactMatrix,
    /// Rows are the dual forms `ℓ_i`; `U = Λ⁻¹`.
    pub lambda: ExactMatrix,
    pub s: Vec<Fe>,
    pub t: Vec<Fe>,
    pub roots: Vec<PencilRoot>,
    pub normalization: &'static str,
}

pub const NORMALIZATION: &str =
    "rows of U^-1 have first nonzero coefficient 1; columns ordered by root (rational t/s ascending, then infinity, then irrational)";

#[derive(Clone, Debug)]
pub struct NumericDiagonalization {
    pub u: Matrix<ComplexRational>,
    pub s: Vec<ComplexRational>,
    pub t: Vec<ComplexRational>,
    /// Largest absolute off-diagonal entry of `UᵗAU` and `UᵗBU`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub enum Diagonalization {
    Exact(DiagonalizationResult),
    Numeric(NumericDiagonalization),
}

impl Diagonalization {
    pub fn exact(&self) -> Option<&DiagonalizationResult> {
        match self {
            Diagonalization::Exact(r) => Some(r),
            Diagonalization::Numeric(_) => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Diagonalization::Exact(r) => r.to_json(),
            Diagonalization::Numeric(r) => r.to_json(),
        }
    }
}

/// Maximum residual accepted from the numeric fallback.
pub const NUMERIC_TOLERANCE: f64 = 1e-30;

/// Simultaneously diagonalizes a pencil whose determinantal form has
/// distinct roots.
pub fn diagonalize(p: &Pencil) -> Result<Diagonalization> {
    diagonalize_with_order(p, None)
}

/// As [`diagonalize`], processing the roots in an order shuffled by `seed`
/// before the canonical column sort.
pub fn diagonalize_with_order(p: &Pencil, seed: Option<u64>) -> Result<Diagonalization> {
    match split_det_form(p)? {
        PencilRoots::Exact { tower, mut roots } => {
            if let Some(seed) = seed {
                roots.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            }
            let result = diagonalize_exact(p, &tower, roots)?;
            Ok(Diagonalization::Exact(result))
        }
        PencilRoots::Numeric { exact, approximate } => diagonalize_numeric(p, &exact, &approximate).map(Diagonalization::Numeric),
    }
}

fn diagonalize_exact(p: &Pencil, tower: &FieldTower, roots: Vec<PencilRoot>) -> Result<DiagonalizationResult> {
    let n = p.n();
    let l = singular_member_linforms(p, tower, &roots)?;
    if l.len() != n {
        return Err(Error::SingularStack);
    }
    let duals = assemble_dual_basis(&l)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| roots[i].canonical_cmp(&roots[j]));
    let roots: Vec<PencilRoot> = order.iter().map(|&i| roots[i].clone()).collect();
    let lambda = Matrix::from_rows(order.iter().map(|&i| duals[i].clone()).collect());
    let u = lambda.inverse().ok_or(Error::SingularStack)?;
    let a = p.a().map(|e| e.lift_to(tower).unwrap());
    let b = p.b().map(|e| e.lift_to(tower).unwrap());
    let da = u.congruence(&a);
    let db = u.congruence(&b);
    if !da.is_diagonal() || !db.is_diagonal() {
        return Err(Error::Calibration("congruence did not diagonalize".into()));
    }
    let result = DiagonalizationResult {
        tower: tower.clone(),
        s: da.diag(),
        t: db.diag(),
        u,
        lambda,
        roots,
        normalization: NORMALIZATION,
    };
    if !result.sum_of_squares_holds(&a, &b) {
        return Err(Error::Calibration("sum-of-squares decomposition failed".into()));
    }
    Ok(result)
}

impl DiagonalizationResult {
    /// `f_A = Σ s_k ℓ_k²` and `f_B = Σ t_k ℓ_k²` as polynomials.
    fn sum_of_squares_holds(&self, a: &ExactMatrix, b: &ExactMatrix) -> bool {
        let n = self.u.rows();
        let ell: Vec<MPoly> = (0..n).map(|k| MPoly::linear(&self.lambda.row(k))).collect();
        let sum = |d: &[Fe]| (0..n).fold(MPoly::zero(n), |acc, k| acc.add(&ell[k].pow(2).scale(&d[k])));
        sum(&self.s) == MPoly::quadratic_form(a) && sum(&self.t) == MPoly::quadratic_form(b)
    }

    pub fn is_rational(&self) -> bool {
        self.u.entries().all(|e| e.is_rational())
    }

    /// `∏ (s_j x − t_j y)`
    pub fn diagonal_det_form(&self) -> BinaryForm {
        self.s
            .iter()
            .zip(&self.t)
            .fold(BinaryForm::new(vec![Fe::one()]), |acc, (s, t)| acc.mul(&BinaryForm::linear(s.clone(), t.clone())))
    }

    pub fn to_json(&self) -> Json {
        let m: Vec<Json> = self.u.to_rows().iter().map(|r| Json::Array(r.iter().map(|e| e.to_json()).collect())).collect();
        json!({
            "field": self.tower.describe(),
            "U": m,
            "s": self.s.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "t": self.t.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "normalization": self.normalization,
            "exact": true,
        })
    }
}

fn to_complex(e: &Fe) -> ComplexRational {
    Complex::new(e.to_rational().expect("rational entry"), Rational::zero())
}

fn complex_abs(z: &ComplexRational) -> f64 {
    z.re.to_f64().unwrap_or(f64::INFINITY).hypot(z.im.to_f64().unwrap_or(f64::INFINITY))
}

fn diagonalize_numeric(p: &Pencil, exact: &[PencilRoot], approx: &[ComplexRational]) -> Result<NumericDiagonalization> {
    let n = p.n();
    if exact.iter().any(|r| r.multiplicity > 1) {
        return Err(Error::SingularStack);
    }
    let a = p.a().map(to_complex);
    let b = p.b().map(to_complex);
    let mut members: Vec<(ComplexRational, ComplexRational)> =
        exact.iter().map(|r| (to_complex(&r.s), to_complex(&r.t))).collect();
    members.extend(approx.iter().map(|z| (ComplexRational::one(), z.clone())));
    let mut cols = Vec::with_capacity(n);
    for (i, (s, t)) in members.iter().enumerate() {
        let m = a.scale(t).sub(&b.scale(s));
        let adj = m.adjugate();
        // The column of largest size approximates the kernel direction.
        let best = (0..n)
            .max_by(|&x, &y| {
                let nx: f64 = adj.col(x).iter().map(complex_abs).sum();
                let ny: f64 = adj.col(y).iter().map(complex_abs).sum();
                nx.partial_cmp(&ny).unwrap_or(Ordering::Equal)
            })
            .unwrap();
        let col = adj.col(best);
        if col.iter().all(|c| c.is_zero()) {
            return Err(Error::RankDeficient(i));
        }
        let pivot =
            col.iter().max_by(|x, y| complex_abs(x).partial_cmp(&complex_abs(y)).unwrap_or(Ordering::Equal)).unwrap().clone();
        let inv = Field::inv(&pivot).unwrap();
        cols.push(col.iter().map(|c| round_complex(&(c.clone() * &inv), NUMERIC_BITS)).collect::<Vec<_>>());
    }
    let u = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let da = u.congruence(&a);
    let db = u.congruence(&b);
    let mut residual = 0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                residual = residual.max(complex_abs(da.get(i, j))).max(complex_abs(db.get(i, j)));
            }
        }
    }
    if residual > NUMERIC_TOLERANCE {
        return Err(Error::Numeric(format!("off-diagonal residual {residual:e} above tolerance")));
    }
    Ok(NumericDiagonalization { s: da.diag(), t: db.diag(), u, residual })
}

fn decimal(r: &Rational, digits: usize) -> String {
    let scale = num_bigint::BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

fn complex_json(z: &ComplexRational) -> Json {
    json!({ "re": decimal(&z.re, 40), "im": decimal(&z.im, 40) })
}

impl NumericDiagonalization {
    pub fn to_json(&self) -> Json {
        let m: Vec<Json> = self.u.to_rows().iter().map(|r| Json::Array(r.iter().map(complex_json).collect())).collect();
        json!({
            "field": [],
            "U": m,
            "s": self.s.iter().map(complex_json).collect::<Vec<_>>(),
            "t": self.t.iter().map(complex_json).collect::<Vec<_>>(),
            "residual": format!("{:e}", self.residual),
            "exact": false,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Yes(Box<DiagonalizationResult>),
    No,
    Degenerate,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No => "no",
            Verdict::Degenerate => "degenerate",
        }
    }

    pub fn to_json(&self) -> Json {
        let witness = match self {
            Verdict::Yes(r) => r.to_json(),
            _ => Json::Null,
        };
        json!({ "verdict": self.label(), "witness": witness })
    }
}

/// Whether a rational pencil can be simultaneously diagonalized over ℚ:
/// `Degenerate` when the determinantal form is zero or has a repeated root,
/// otherwise `Yes` exactly when that form splits over ℚ.
pub fn is_diagonalizable_over_q(p: &Pencil) -> Result<Verdict> {
    if !p.is_rational() {
        return Err(Error::TowerMismatch);
    }
    let f = det_form(p);
    if !f.has_distinct_roots() {
        return Ok(Verdict::Degenerate);
    }
    let lf = rational_linear_factors(&f)?;
    if lf.linear_degree() < p.n() {
        return Ok(Verdict::No);
    }
    match diagonalize(p)? {
        Diagonalization::Exact(r) if r.is_rational() => Ok(Verdict::Yes(Box::new(r))),
        _ => Err(Error::Calibration("rational splitting produced a non-rational basis".into())),
    }
}

/// Outcome of the ternary double-adjugate check.
#[derive(Clone, Debug, PartialEq)]
pub struct Symdiag3Report {
    pub holds: bool,
    /// Sign observed for each pair `(i, j)` in the order (0,1), (0,2), (1,2).
    pub signs: Vec<i8>,
    /// Whether the operand `A† − s_i s_j B†` (without the `t_i t_j` factor)
    /// also gave rank-one adjugates.
    pub untwisted_rank_one: bool,
}

/// For a ternary pencil with distinct roots and nonzero root coordinates,
/// checks for every pair `{i, j}` (with `k` the third index) that
/// `adj(t_i t_j A† − s_i s_j B†) = ± σ δ² s_i t_i s_j t_j (s_i t_k − s_k t_i)(s_j t_k − s_k t_j) ℓ_k ℓ_kᵗ`,
/// with `δ = det Λ` and `σ` the calibrated scalar.
pub fn symdiag3_check(p: &Pencil) -> Result<Symdiag3Report> {
    if p.n() != 3 {
        return Err(Error::Dimension { expected: "n = 3".into(), got: p.n() });
    }
    let d = match diagonalize(p)? {
        Diagonalization::Exact(d) => d,
        Diagonalization::Numeric(_) => unreachable!("ternary pencils split exactly"),
    };
    if d.s.iter().chain(&d.t).any(|v| v.is_zero()) {
        return Err(Error::ZeroRootCoordinate);
    }
    let sigma = Fe::rational(crate::quartic::CovariantConstants::gram().symdiag_scalar);
    let a = p.a().map(|e| e.lift_to(&d.tower).unwrap());
    let b = p.b().map(|e| e.lift_to(&d.tower).unwrap());
    let (adj_a, adj_b) = (a.adjugate(), b.adjugate());
    let delta = d.lambda.det();
    let (s, t) = (&d.s, &d.t);
    let mut holds = true;
    let mut signs = Vec::new();
    let mut untwisted_rank_one = true;
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let m = adj_a.scale(&(t[i].clone() * &t[j])).sub(&adj_b.scale(&(s[i].clone() * &s[j])));
        let adj = m.adjugate();
        if adj.rank() != 1 {
            return Err(Error::RankDeficient(k));
        }
        let untwisted = adj_a.sub(&adj_b.scale(&(s[i].clone() * &s[j]))).adjugate();
        untwisted_rank_one &= untwisted.rank() == 1;
        let ell = Matrix::from_rows(vec![d.lambda.row(k)]);
        let outer = ell.transpose().mul(&ell);
        let coeff = sigma.clone()
            * &delta.square()
            * &s[i]
            * &t[i]
            * &s[j]
            * &t[j]
            * &(s[i].clone() * &t[k] - &(s[k].clone() * &t[i]))
            * &(s[j].clone() * &t[k] - &(s[k].clone() * &t[j]));
        let expected = outer.scale(&coeff);
        if adj == expected {
            signs.push(1);
        } else if adj == expected.scale(&-Fe::one()) {
            signs.push(-1);
        } else {
            holds = false;
            signs.push(0);
        }
    }
    Ok(Symdiag3Report { holds, signs, untwisted_rank_one })
}

/// Rational root ratio `t/s` for display; `None` at infinity.
pub fn root_ratio(r: &PencilRoot) -> Option<Fe> {
    r.t.clone().div(&r.s)
}

pub fn format_root(r: &PencilRoot) -> String {
    match (r.s.to_rational(), r.t.to_rational()) {
        (Some(s), Some(t)) => format!("({}:{})", format_rational(&s), format_rational(&t)),
        _ => format!("({}:{})", r.s, r.t),
    }
}
