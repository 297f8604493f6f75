//! Binary quartic forms and their covariants and invariants.

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::field::{format_rational, int, parse_rational, rat, Field, FieldElement, Rational};
use crate::forms::BinaryForm;
use crate::linalg::Matrix;

type Fe = FieldElement;

/// `a4 x⁴ + a3 x³y + a2 x²y² + a1 xy³ + a0 y⁴`
#[derive(Clone, Debug, PartialEq)]
pub struct Quartic {
    pub a4: Fe,
    pub a3: Fe,
    pub a2: Fe,
    pub a1: Fe,
    pub a0: Fe,
}

impl Quartic {
    pub fn new(a4: Fe, a3: Fe, a2: Fe, a1: Fe, a0: Fe) -> Self {
        Quartic { a4, a3, a2, a1, a0 }
    }

    pub fn from_i64(c: [i64; 5]) -> Self {
        let [a4, a3, a2, a1, a0] = c.map(Fe::from_i64);
        Quartic { a4, a3, a2, a1, a0 }
    }

    pub fn from_rationals(c: [Rational; 5]) -> Self {
        let [a4, a3, a2, a1, a0] = c.map(Fe::rational);
        Quartic { a4, a3, a2, a1, a0 }
    }

    /// Coefficients `[a4, a3, a2, a1, a0]`.
    pub fn coeffs(&self) -> [Fe; 5] {
        [self.a4.clone(), self.a3.clone(), self.a2.clone(), self.a1.clone(), self.a0.clone()]
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm::new(self.coeffs().to_vec())
    }

    pub fn from_form(f: &BinaryForm) -> Result<Self> {
        if f.degree() != 4 {
            return Err(Error::Dimension { expected: "binary form of degree 4".into(), got: f.degree() });
        }
        let c = f.coeffs();
        Ok(Quartic::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_zero())
    }

    /// `F ∘ γ`
    pub fn transform(&self, gamma: &Matrix<Fe>) -> Self {
        Quartic::from_form(&self.to_form().transform(gamma)).expect("degree is preserved")
    }

    /// Uniform random integer quartic with coefficients in `[lo, hi]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Self {
        Quartic::from_i64([0; 5].map(|_| rng.gen_range(lo..=hi)))
    }

    pub fn to_json(&self) -> Json {
        json!({ "quartic": self.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>() })
    }

    /// Parses `{"quartic": ["a4", …, "a0"]}` with rational strings (or integers).
    pub fn from_json(v: &Json) -> Result<Self> {
        let arr = v
            .get("quartic")
            .and_then(|q| q.as_array())
            .ok_or_else(|| Error::Parse { position: 0, message: "expected {\"quartic\": [5 coefficients]}".into() })?;
        if arr.len() != 5 {
            return Err(Error::Dimension { expected: "5 coefficients".into(), got: arr.len() });
        }
        let c: Vec<Rational> = arr.iter().map(json_rational).collect::<Result<_>>()?;
        Ok(Quartic::from_rationals([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()]))
    }
}

/// A rational from a JSON string like `"-3/4"` or a JSON integer.
pub fn json_rational(v: &Json) -> Result<Rational> {
    match v {
        Json::String(s) => parse_rational(s),
        Json::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
        _ => Err(Error::Parse { position: 0, message: format!("expected a rational string, got {v}") }),
    }
}

pub fn rational_json(r: &Rational) -> Json {
    Json::String(format_rational(r))
}

fn c(n: i64) -> Fe {
    Fe::from_i64(n)
}

/// Unnormalized Hessian `F_xx F_yy − F_xy²`, by its closed-form expansion.
pub fn hessian(f: &Quartic) -> BinaryForm {
    let Quartic { a4, a3, a2, a1, a0 } = f;
    BinaryForm::new(vec![
        c(-9) * a3 * a3 + &(c(24) * a2 * a4),
        c(-12) * a2 * a3 + &(c(72) * a1 * a4),
        c(-12) * a2 * a2 + &(c(18) * a1 * a3) + &(c(144) * a0 * a4),
        c(-12) * a1 * a2 + &(c(72) * a0 * a3),
        c(-9) * a1 * a1 + &(c(24) * a0 * a2),
    ])
}

/// The Hessian from second partial derivatives.
pub fn hessian_by_derivatives(f: &Quartic) -> BinaryForm {
    let form = f.to_form();
    let (fx, fy) = (form.partial_x(), form.partial_y());
    let (fxx, fxy, fyy) = (fx.partial_x(), fx.partial_y(), fy.partial_y());
    let h = fxx.to_mpoly().mul(&fyy.to_mpoly()).sub(&fxy.to_mpoly().pow(2));
    BinaryForm::from_mpoly(&h, 4)
}

/// The sextic covariant, by its closed-form expansion.
pub fn f6(f: &Quartic) -> BinaryForm {
    let Quartic { a4, a3, a2, a1, a0 } = f;
    let t = |k: i64, parts: &[Fe]| parts.iter().fold(c(0), |acc, p| acc + p) * &c(k);
    BinaryForm::new(vec![
        t(1, &[a3 * a3 * a3, c(-4) * a2 * a3 * a4, c(8) * a1 * a4 * a4]),
        t(2, &[a2 * a3 * a3, c(-4) * a2 * a2 * a4, c(2) * a1 * a3 * a4, c(16) * a0 * a4 * a4]),
        t(5, &[a1 * a3 * a3, c(-4) * a1 * a2 * a4, c(8) * a0 * a3 * a4]),
        t(20, &[a0 * a3 * a3, -(a1 * a1 * a4)]),
        t(-5, &[a1 * a1 * a3, c(-4) * a0 * a2 * a3, c(8) * a0 * a1 * a4]),
        t(-2, &[a1 * a1 * a2, c(-4) * a0 * a2 * a2, c(2) * a0 * a1 * a3, c(16) * a0 * a0 * a4]),
        t(-1, &[a1 * a1 * a1, c(-4) * a0 * a1 * a2, c(8) * a0 * a0 * a3]),
    ])
}

/// `(1/36)·(F_x H_y − F_y H_x)`
pub fn f6_by_jacobian(f: &Quartic) -> BinaryForm {
    let form = f.to_form().to_mpoly();
    let h = hessian(f).to_mpoly();
    let jac = crate::forms::jacobian_det(&[form, h]);
    BinaryForm::from_mpoly(&jac.scale(&Fe::rational(rat(1, 36))), 6)
}

/// The degree-2 and degree-3 invariants `(I, J)`.
pub fn invariants_ij(f: &Quartic) -> (Fe, Fe) {
    let Quartic { a4, a3, a2, a1, a0 } = f;
    let i = c(12) * a4 * a0 - &(c(3) * a3 * a1) + &(a2 * a2);
    let j = c(72) * a4 * a2 * a0 + &(c(9) * a3 * a2 * a1)
        - &(c(27) * a4 * a1 * a1)
        - &(c(27) * a0 * a3 * a3)
        - &(c(2) * a2 * a2 * a2);
    (i, j)
}

/// `(4I³ − J²)/27`
pub fn discriminant(f: &Quartic) -> Fe {
    let (i, j) = invariants_ij(f);
    (c(4) * &i * &i * &i - &(j.clone() * &j)) * &Fe::rational(rat(1, 27))
}

/// Sylvester resultant of `F_x` and `F_y`; a fixed multiple of the discriminant.
pub fn resultant_of_partials(f: &Quartic) -> Fe {
    let form = f.to_form();
    form.partial_x().resultant(&form.partial_y())
}

/// Normalization constants tying the covariant conventions together. All
/// values are for Gram-matrix covariants.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantConstants {
    /// `F₆ = λ · C₃(x², xy, y²)` for the embedded pair.
    pub lambda: Rational,
    /// `H_F = μ₁ g_B(x², xy, y²) + μ₂ g_A(x², xy, y²)`.
    pub mu1: Rational,
    pub mu2: Rational,
    /// `pair_discriminant = disc(κ · det_form)`.
    pub kappa: Rational,
    /// `F₆² = c₁H³ + c₂·I·F²H + c₃·J·F³`.
    pub syzygy: [Rational; 3],
    /// Power of `det γ` in `H(F∘γ) = det(γ)^w · H(F)∘γ`.
    pub hessian_weight: u32,
    pub f6_weight: u32,
    /// Power of `det T` in `C₃(TᵗAT, TᵗBT) = det(T)^w · C₃∘T`.
    pub cubicovariant_weight: u32,
    /// `Res(F_x, F_y) = r · disc(F)`.
    pub resultant_ratio: Rational,
    /// The standard form `𝒢_{a,b}` equals `C₃/s` after the change of variables.
    pub mt3_scale: Rational,
    /// Scalar `σ` in `adj(t_i t_j A† − s_i s_j B†) = σ · δ² s_i t_i s_j t_j (s_i t_k − s_k t_i)(s_j t_k − s_k t_j) ℓ_k ℓ_kᵗ`.
    pub symdiag_scalar: Rational,
}

impl CovariantConstants {
    /// The frozen constants; `calibrate` re-derives each one.
    pub fn gram() -> Self {
        CovariantConstants {
            lambda: int(8),
            mu1: int(96),
            mu2: int(48),
            kappa: int(4),
            syzygy: [rat(-1, 729), rat(16, 27), rat(-64, 27)],
            hessian_weight: 2,
            f6_weight: 3,
            cubicovariant_weight: 3,
            resultant_ratio: int(16),
            mt3_scale: int(8),
            symdiag_scalar: int(1),
        }
    }
}

fn syzygy_terms(f: &Quartic) -> [BinaryForm; 4] {
    let form = f.to_form();
    let h = hessian(f);
    let (i, j) = invariants_ij(f);
    let f2 = form.mul(&form);
    [f6(f).mul(&f6(f)), h.mul(&h).mul(&h), f2.mul(&h).scale(&i), f2.mul(&form).scale(&j)]
}

/// Solves `F₆² = c₁H³ + c₂·I·F²H + c₃·J·F³` for rational `(c₁, c₂, c₃)` from
/// the given samples. Fails with `NoSyzygyInShape` if the system is
/// inconsistent or does not determine the constants.
pub fn calibrate_syzygy(samples: &[Quartic]) -> Result<[Rational; 3]> {
    let mut rows = Vec::new();
    for f in samples {
        if f.coeffs().iter().any(|c| !c.is_rational()) {
            return Err(Error::TowerMismatch);
        }
        let t = syzygy_terms(f);
        for k in 0..=12 {
            let r = |form: &BinaryForm| form.coeff(k).clone();
            rows.push(vec![r(&t[1]), r(&t[2]), r(&t[3]), r(&t[0])]);
        }
    }
    if rows.is_empty() {
        return Err(Error::NoSyzygyInShape);
    }
    let n = rows.len();
    let aug = Matrix::from_fn(n, 4, |i, j| rows[i][j].clone());
    let coef = Matrix::from_fn(n, 3, |i, j| rows[i][j].clone());
    if coef.rank() != 3 || aug.rank() != 3 {
        return Err(Error::NoSyzygyInShape);
    }
    let (reduced, _) = aug.rref();
    let sol: Vec<Rational> = (0..3).map(|i| reduced.get(i, 3).to_rational().expect("rational system")).collect();
    Ok([sol[0].clone(), sol[1].clone(), sol[2].clone()])
}

/// Whether `F₆² = c₁H³ + c₂·I·F²H + c₃·J·F³` holds exactly for `f`.
pub fn syzygy_holds(f: &Quartic, c: &[Rational; 3]) -> bool {
    let t = syzygy_terms(f);
    let rhs = t[1]
        .scale(&Fe::rational(c[0].clone()))
        .add(&t[2].scale(&Fe::rational(c[1].clone())))
        .add(&t[3].scale(&Fe::rational(c[2].clone())));
    t[0] == rhs
}

/// The exponent `w` with `lhs = det^w · rhs`, if one in `0..=max` works.
pub fn weight_exponent(lhs: &BinaryForm, rhs: &BinaryForm, det: &Fe, max: u32) -> Option<u32> {
    let mut scale = Fe::one();
    for w in 0..=max {
        if rhs.scale(&scale) == *lhs {
            return Some(w);
        }
        scale = scale * det;
    }
    None
}

impl Zero for Quartic {
    fn zero() -> Self {
        Quartic::from_i64([0; 5])
    }
    fn is_zero(&self) -> bool {
        Quartic::is_zero(self)
    }
}

impl std::ops::Add for Quartic {
    type Output = Quartic;
    fn add(self, o: Quartic) -> Quartic {
        Quartic::new(self.a4 + o.a4, self.a3 + o.a3, self.a2 + o.a2, self.a1 + o.a1, self.a0 + o.a0)
    }
}
