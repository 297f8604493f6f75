//! The embedding of binary quartics into pairs of ternary quadratic forms,
//! and exact checks of the covariant identities it satisfies.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{rat, Field, FieldElement, Rational};
use crate::forms::{BinaryForm, MPoly, TernaryCubic};
use crate::linalg::{ExactMatrix, Matrix};
use crate::pencil::{cubicovariant, pair_discriminant, quad_covariants, Pencil};
use crate::quartic::{discriminant, f6, hessian, CovariantConstants, Quartic};

type Fe = FieldElement;

fn fe(n: i64) -> Fe {
    Fe::from_i64(n)
}

fn q(n: i64, d: i64) -> Fe {
    Fe::rational(rat(n, d))
}

/// A quartic together with its image pair `(A₀, B_F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedPair {
    pub source: Quartic,
    pub pencil: Pencil,
}

/// The constant first matrix `[[0,0,1/2],[0,−1,0],[1/2,0,0]]`.
pub fn a0() -> ExactMatrix {
    Matrix::from_rows(vec![vec![fe(0), fe(0), q(1, 2)], vec![fe(0), fe(-1), fe(0)], vec![q(1, 2), fe(0), fe(0)]])
}

/// `B_F = [[a4, a3/2, 0], [a3/2, a2, a1/2], [0, a1/2, a0]]`
pub fn b_of(f: &Quartic) -> ExactMatrix {
    let h = q(1, 2);
    let (a3, a1) = (f.a3.clone() * &h, f.a1.clone() * &h);
    Matrix::from_rows(vec![
        vec![f.a4.clone(), a3.clone(), fe(0)],
        vec![a3, f.a2.clone(), a1.clone()],
        vec![fe(0), a1, f.a0.clone()],
    ])
}

pub fn embed(f: &Quartic) -> EmbeddedPair {
    EmbeddedPair { source: f.clone(), pencil: Pencil::new(a0(), b_of(f)).expect("embedded pair is symmetric") }
}

/// `(x², xy, y²)` as binary polynomials.
fn veronese() -> [MPoly; 3] {
    let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
    [x.mul(&x), x.mul(&y), y.mul(&y)]
}

/// A ternary form composed with `(x², xy, y²)`.
pub fn restrict_to_conic(p: &MPoly, degree: usize) -> BinaryForm {
    BinaryForm::from_mpoly(&p.substitute(&veronese()), degree)
}

/// `F₆ = λ · C₃(x², xy, y²)` for the embedded pair.
pub fn verify_mt(f: &Quartic) -> bool {
    let lambda = Fe::rational(CovariantConstants::gram().lambda);
    let c3 = cubicovariant(&embed(f).pencil).expect("embedded pair is ternary");
    f6(f) == restrict_to_conic(&c3.to_mpoly(), 6).scale(&lambda)
}

/// `H_F = μ₁ g_B(x², xy, y²) + μ₂ g_A(x², xy, y²)` for the embedded pair.
pub fn verify_mt2(f: &Quartic) -> bool {
    let k = CovariantConstants::gram();
    let (gb, ga) = quad_covariants(&embed(f).pencil);
    let gb = restrict_to_conic(&MPoly::quadratic_form(&gb), 4).scale(&Fe::rational(k.mu1));
    let ga = restrict_to_conic(&MPoly::quadratic_form(&ga), 4).scale(&Fe::rational(k.mu2));
    hessian(f) == gb.add(&ga)
}

/// `disc(F) = pair_discriminant(φ(F))`
pub fn verify_disc_preserving(f: &Quartic) -> bool {
    discriminant(f) == pair_discriminant(&embed(f).pencil).expect("embedded pair is ternary")
}

/// `δ(a, b) = b² − 3ab + 9a²`
pub fn delta(a: i64, b: i64) -> i64 {
    b * b - 3 * a * b + 9 * a * a
}

/// The two-parameter family of pairs and its companion cubic `G_{a,b}`.
#[derive(Clone, Debug)]
pub struct Mt3Family {
    pub a: i64,
    pub b: i64,
    pub delta: i64,
    pub pencil: Pencil,
    pub g: TernaryCubic,
}

/// `G_{a,b}(x, y, z)` evaluated as a polynomial in the given three linear forms.
fn g_poly(a: i64, b: i64, vars: [MPoly; 3]) -> MPoly {
    let [x, y, z] = vars;
    let d = Fe::from_i64(delta(a, b));
    let quad = y.mul(&y).add(&y.mul(&z)).add(&z.mul(&z));
    let cubic = y
        .pow(3)
        .scale(&fe(3 * a - 2 * b))
        .add(&y.mul(&y).mul(&z).scale(&fe(3 * (6 * a - b))))
        .add(&y.mul(&z).mul(&z).scale(&fe(3 * (3 * a + b))))
        .sub(&z.pow(3).scale(&fe(3 * a - 2 * b)));
    x.pow(3).sub(&quad.mul(&x).scale(&(d.clone() * &q(1, 3)))).sub(&cubic.scale(&(d * &q(1, 27))))
}

fn xyz() -> [MPoly; 3] {
    [MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2)]
}

pub fn mt3_family(a: i64, b: i64) -> Mt3Family {
    let pencil = Pencil::from_i64(
        &[vec![0, 0, 1], vec![0, -a, 0], vec![1, 0, 3 * a - b]],
        &[vec![0, 1, 0], vec![1, b, 0], vec![0, 0, -a]],
    )
    .expect("family matrices are symmetric");
    Mt3Family { a, b, delta: delta(a, b), pencil, g: TernaryCubic::from_mpoly(&g_poly(a, b, xyz())) }
}

/// `𝒢_{c₁,c₂}(u, s, t) = u³ − 3c(s² − st + t²)u + c((2c₁ − c₂)s³ − 3(c₁ + c₂)s²t + 3(2c₂ − c₁)st² + (2c₁ − c₂)t³)`
/// with `c = c₁² − c₁c₂ + c₂²`.
pub fn gcal(c1: i64, c2: i64) -> MPoly {
    let [u, s, t] = xyz();
    let c = fe(c1 * c1 - c1 * c2 + c2 * c2);
    let quad = s.mul(&s).sub(&s.mul(&t)).add(&t.mul(&t));
    let cubic = s
        .pow(3)
        .scale(&fe(2 * c1 - c2))
        .sub(&s.mul(&s).mul(&t).scale(&fe(3 * (c1 + c2))))
        .add(&s.mul(&t).mul(&t).scale(&fe(3 * (2 * c2 - c1))))
        .add(&t.pow(3).scale(&fe(2 * c1 - c2)));
    u.pow(3).sub(&quad.mul(&u).scale(&(c.clone() * &fe(3)))).add(&cubic.scale(&c))
}

/// `G_{a,b}(u, s, −t) = 𝒢_{c₁,c₂}(u, s, t)` with `(a, b) = (c₁, 3c₂)`, as stated.
pub fn bridge_as_stated(c1: i64, c2: i64) -> bool {
    let [u, s, t] = xyz();
    g_poly(c1, 3 * c2, [u, s, t.neg()]) == gcal(c1, c2)
}

/// `G_{a,b}(u, s, −t) = 𝒢_{c₁,c₂}(u, s, t)` with `(a, b) = (−c₂, 3c₁ − 3c₂)`.
pub fn bridge_corrected(c1: i64, c2: i64) -> bool {
    let [u, s, t] = xyz();
    g_poly(-c2, 3 * c1 - 3 * c2, [u, s, t.neg()]) == gcal(c1, c2)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mt3Outcome {
    /// `C₃ ∘ T = ν · G_{a,b}` with `det T = ±1` and entries in `(1/3)ℤ`.
    Witness {
        t: ExactMatrix,
        scale: Rational,
    },
    Unresolved,
}

fn third_steps(bound: i64) -> Vec<Fe> {
    // 0, ±1/3, ±2/3, …: small entries first.
    let mut v = vec![fe(0)];
    for k in 1..=3 * bound {
        v.push(q(k, 3));
        v.push(q(-k, 3));
    }
    v
}

fn is_unimodular(t: &ExactMatrix) -> bool {
    let d = t.det();
    d.is_one() || (-d).is_one()
}

fn within(t: &ExactMatrix, bound: i64) -> bool {
    let b = Rational::from_integer(bound.into());
    t.entries().all(|e| {
        let r = e.to_rational().expect("rational entry");
        (&r * Rational::from_integer(3.into())).is_integer() && num_traits::Signed::abs(&r) <= b
    })
}

/// Searches for `T` with entries in `(1/3)ℤ ∩ [−bound, bound]` and
/// `det T = ±1` such that `C₃(A_{a,b}, B_{a,b}) ∘ T = ν · G_{a,b}`, where
/// `ν` is the calibrated scale. The first witness in a fixed order is returned.
pub fn verify_mt3(a: i64, b: i64, search_bound: i64) -> Result<Mt3Outcome> {
    let fam = mt3_family(a, b);
    if fam.delta == 0 {
        return Err(Error::DegenerateFamily);
    }
    let nu = Fe::rational(CovariantConstants::gram().mt3_scale);
    let c3 = cubicovariant(&fam.pencil)?.to_mpoly();
    let target = fam.g.to_mpoly().scale(&nu);
    if search_bound <= 0 {
        return Ok(Mt3Outcome::Unresolved);
    }
    let found = |t: &ExactMatrix| c3.transform(t) == target;

    // Shortcut: remove the x²-terms by a shift of x, then try the (y, z) block.
    let lead = c3.coeff(&[3, 0, 0]);
    if !lead.is_zero() {
        let three_lead = lead.clone() * &fe(3);
        let sy = -(c3.coeff(&[2, 1, 0]).div(&three_lead).unwrap());
        let sz = -(c3.coeff(&[2, 0, 1]).div(&three_lead).unwrap());
        let steps = third_steps(search_bound);
        let identity = [fe(1), fe(0), fe(0), fe(1)];
        let mut blocks = vec![identity];
        for p in &steps {
            for r in &steps {
                for s in &steps {
                    for w in &steps {
                        blocks.push([p.clone(), s.clone(), r.clone(), w.clone()]);
                    }
                }
            }
        }
        for [p, s, r, w] in blocks {
            let bd = p.clone() * &w - &(s.clone() * &r);
            if !(bd.is_one() || (-bd).is_one()) {
                continue;
            }
            // x ↦ x + sy·y + sz·z, then (y, z) ↦ block·(y, z)
            let t = Matrix::from_rows(vec![
                vec![fe(1), sy.clone() * &p + &(sz.clone() * &r), sy.clone() * &s + &(sz.clone() * &w)],
                vec![fe(0), p, s],
                vec![fe(0), r, w],
            ]);
            if within(&t, search_bound) && found(&t) {
                return Ok(Mt3Outcome::Witness { t, scale: nu.to_rational().unwrap() });
            }
        }
    }

    // Exhaustive search: column j of T must satisfy C₃(T e_j) = ν G(e_j).
    let steps = third_steps(search_bound);
    let g_at = |j: usize| target.eval(&(0..3).map(|i| if i == j { fe(1) } else { fe(0) }).collect::<Vec<_>>());
    let mut columns: Vec<Vec<Vec<Fe>>> = vec![Vec::new(), Vec::new(), Vec::new()];
    let want: Vec<Fe> = (0..3).map(g_at).collect();
    for x in &steps {
        for y in &steps {
            for z in &steps {
                let v = vec![x.clone(), y.clone(), z.clone()];
                let val = c3.eval(&v);
                for j in 0..3 {
                    if val == want[j] {
                        columns[j].push(v.clone());
                    }
                }
            }
        }
    }
    for c0 in &columns[0] {
        for c1 in &columns[1] {
            for c2 in &columns[2] {
                let t = Matrix::from_fn(3, 3, |i, j| [c0, c1, c2][j][i].clone());
                if is_unimodular(&t) && found(&t) {
                    return Ok(Mt3Outcome::Witness { t, scale: nu.to_rational().unwrap() });
                }
            }
        }
    }
    Ok(Mt3Outcome::Unresolved)
}

/// The symmetric-square matrix attached to an invertible `2×2` matrix.
/// Multiplicative: `rho3(g·h) = rho3(g)·rho3(h)`.
pub fn rho3(g: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    rho3_with_corner(g, true)
}

/// The same matrix with the top-right entry `a₂₂²` in place of `a₂₁²`, for
/// comparison; it is not multiplicative.
pub fn rho3_uncorrected(g: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    rho3_with_corner(g, false)
}

fn rho3_with_corner(g: &Matrix<Rational>, corrected: bool) -> Result<Matrix<Rational>> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::Dimension { expected: "2x2 matrix".into(), got: g.rows() });
    }
    let d = g.det();
    if d.is_zero() {
        return Err(Error::SingularInput);
    }
    let (a11, a12, a21, a22) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let two = Rational::from_integer(2.into());
    let corner = if corrected { a21 * a21 } else { a22 * a22 };
    let m = Matrix::from_rows(vec![
        vec![a22 * a22, a21 * a22, corner],
        vec![&two * a12 * a22, a11 * a22 + a12 * a21, &two * a11 * a21],
        vec![a12 * a12, a11 * a12, a11 * a11],
    ]);
    Ok(m.scale(&d.recip()))
}

/// Structural check that the embedding is affine-linear: `A` is constant and
/// `B` is linear in the coefficients.
pub fn embedding_is_linear(f: &Quartic, g: &Quartic, c: &Fe) -> bool {
    let sum = Quartic::new(
        f.a4.clone() + &(c.clone() * &g.a4),
        f.a3.clone() + &(c.clone() * &g.a3),
        f.a2.clone() + &(c.clone() * &g.a2),
        f.a1.clone() + &(c.clone() * &g.a1),
        f.a0.clone() + &(c.clone() * &g.a0),
    );
    let (ef, eg, es) = (embed(f), embed(g), embed(&sum));
    es.pencil.a() == &a0() && ef.pencil.a() == &a0() && *es.pencil.b() == ef.pencil.b().add(&eg.pencil.b().scale(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    #[test]
    fn embedding_examples() {
        let e = embed(&Quartic::from_i64([1, 0, 0, 0, 1]));
        assert_eq!(e.pencil.b(), &Matrix::diagonal(&[fe(1), fe(0), fe(1)]));
        assert_eq!(e.pencil.a(), &a0());
        let z = embed(&Quartic::from_i64([0; 5]));
        assert!(z.pencil.b().is_zero());
        let m = embed(&Quartic::from_i64([0, 0, 1, 0, 0]));
        assert_eq!(m.pencil.b(), &Matrix::diagonal(&[fe(0), fe(1), fe(0)]));
    }

    #[test]
    fn identities_on_examples() {
        for c in [[1, 0, 0, 0, 1], [0; 5], [0, 1, 0, 0, 0], [3, -1, 4, 1, -5]] {
            let f = Quartic::from_i64(c);
            assert!(verify_mt(&f), "{c:?}");
            assert!(verify_mt2(&f), "{c:?}");
            assert!(verify_disc_preserving(&f), "{c:?}");
        }
    }

    #[test]
    fn family_examples() {
        let f = mt3_family(0, 0);
        assert_eq!(f.delta, 0);
        assert_eq!(f.g, TernaryCubic::from_mpoly(&MPoly::var(3, 0).pow(3)));
        assert_eq!(mt3_family(1, 3).delta, 9);
        let g = mt3_family(1, 0).g;
        let expect = [1, 0, 0, -3, -3, -3, -1, -6, -3, 1].map(fe);
        assert_eq!(g.coeffs(), &expect);
        assert_eq!(verify_mt3(0, 0, 3), Err(Error::DegenerateFamily));
    }

    #[test]
    fn witness_for_one_zero() {
        let Mt3Outcome::Witness { t, scale } = verify_mt3(1, 0, 1).unwrap() else {
            panic!("no witness");
        };
        assert_eq!(scale, int(8));
        assert_eq!(t, Matrix::from_rows(vec![vec![fe(1), fe(0), fe(-1)], vec![fe(0), fe(1), fe(0)], vec![fe(0), fe(0), fe(1)]]));
        assert_eq!(verify_mt3(1, 0, 0).unwrap(), Mt3Outcome::Unresolved);
    }

    #[test]
    fn bridge_identities() {
        assert!(!bridge_as_stated(1, 0));
        assert!(bridge_as_stated(0, 0));
        for c1 in -3..=3 {
            for c2 in -3..=3 {
                assert!(bridge_corrected(c1, c2), "({c1},{c2})");
            }
        }
    }

    #[test]
    fn rho3_is_multiplicative_only_when_corrected() {
        let r = |v: [i64; 4]| Matrix::from_rows(vec![vec![int(v[0]), int(v[1])], vec![int(v[2]), int(v[3])]]);
        let (g, h) = (r([2, 1, 1, 1]), r([1, 3, 0, 1]));
        let gh = g.mul(&h);
        assert_eq!(rho3(&gh).unwrap(), rho3(&g).unwrap().mul(&rho3(&h).unwrap()));
        assert_ne!(rho3_uncorrected(&gh).unwrap(), rho3_uncorrected(&g).unwrap().mul(&rho3_uncorrected(&h).unwrap()));
        assert_eq!(rho3(&r([1, 0, 0, 1])).unwrap(), Matrix::identity(3));
        let inv = rho3(&r([1, 0, 0, -1])).unwrap();
        assert_eq!(inv.mul(&inv), Matrix::identity(3));
        assert_eq!(rho3(&r([1, 2, 2, 4])).unwrap_err(), Error::SingularInput);
    }
}
