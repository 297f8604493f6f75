//! Pencils of symmetric matrices and their covariants.

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldTower};
use crate::forms::{hessian_det, jacobian_det, BinaryForm, MPoly, TernaryCubic};
use crate::linalg::{ExactMatrix, Matrix};
use crate::quartic::{json_rational, CovariantConstants};

type Fe = FieldElement;

/// A pair `(A, B)` of symmetric `n×n` matrices, read as the pencil `Ax − By`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    n: usize,
    a: ExactMatrix,
    b: ExactMatrix,
}

impl Pencil {
    pub fn new(a: ExactMatrix, b: ExactMatrix) -> Result<Self> {
        let n = a.rows();
        for m in [&a, &b] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::Dimension { expected: format!("{n}x{n} matrices"), got: m.cols() });
            }
            if let Some((i, j)) = m.first_asymmetry() {
                return Err(Error::NotSymmetric(i, j));
            }
        }
        Ok(Pencil { n, a, b })
    }

    pub fn from_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Self> {
        let conv = |m: &[Vec<i64>]| Matrix::from_rows(m.iter().map(|r| r.iter().map(|&v| Fe::from_i64(v)).collect()).collect());
        Pencil::new(conv(a), conv(b))
    }

    /// `(diag(s), diag(t))`
    pub fn diagonal(s: &[Fe], t: &[Fe]) -> Self {
        Pencil::new(Matrix::diagonal(s), Matrix::diagonal(t)).expect("diagonal matrices are symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    /// The tallest tower among the entries; entries are assumed to share it.
    pub fn tower(&self) -> FieldTower {
        self.a.entries().chain(self.b.entries()).map(|e| e.tower().clone()).max_by_key(|t| t.height()).unwrap_or_default()
    }

    pub fn is_rational(&self) -> bool {
        self.a.entries().chain(self.b.entries()).all(|e| e.is_rational())
    }

    /// `(TᵗAT, TᵗBT)`
    pub fn transform(&self, t: &ExactMatrix) -> Self {
        Pencil { n: self.n, a: t.congruence(&self.a), b: t.congruence(&self.b) }
    }

    /// `(pA + qB, rA + sB)`
    pub fn slot_change(&self, p: &Fe, q: &Fe, r: &Fe, s: &Fe) -> Self {
        Pencil { n: self.n, a: self.a.scale(p).add(&self.b.scale(q)), b: self.a.scale(r).add(&self.b.scale(s)) }
    }

    pub fn to_json(&self) -> Json {
        let m =
            |x: &ExactMatrix| -> Json { x.to_rows().iter().map(|r| r.iter().map(|e| e.to_json()).collect::<Vec<_>>()).collect() };
        json!({ "n": self.n, "A": m(&self.a), "B": m(&self.b) })
    }

    /// Parses `{"n": 3, "A": [[…]], "B": [[…]]}` with rational entries.
    pub fn from_json(v: &Json) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(|n| n.as_u64())
            .ok_or_else(|| Error::Parse { position: 0, message: "missing integer field \"n\"".into() })? as usize;
        let read = |key: &str| -> Result<ExactMatrix> {
            let rows = v
                .get(key)
                .and_then(|m| m.as_array())
                .ok_or_else(|| Error::Parse { position: 0, message: format!("missing matrix field \"{key}\"") })?;
            if rows.len() != n {
                return Err(Error::Dimension { expected: format!("{n} rows in {key}"), got: rows.len() });
            }
            let mut out = Vec::with_capacity(n);
            for r in rows {
                let r =
                    r.as_array().ok_or_else(|| Error::Parse { position: 0, message: format!("{key} row is not an array") })?;
                if r.len() != n {
                    return Err(Error::Dimension { expected: format!("{n} columns in {key}"), got: r.len() });
                }
                out.push(r.iter().map(|e| json_rational(e).map(Fe::rational)).collect::<Result<Vec<_>>>()?);
            }
            Ok(Matrix::from_rows(out))
        };
        Pencil::new(read("A")?, read("B")?)
    }
}

/// `det(Ax − By)` as a binary form of degree `n`.
pub fn det_form(p: &Pencil) -> BinaryForm {
    let n = p.n;
    // det(A − kB) for k = 0..=n is the dehomogenized form at y = k.
    let values: Vec<Fe> = (0..=n).map(|k| p.a.sub(&p.b.scale(&Fe::from_i64(k as i64))).det()).collect();
    let vander = Matrix::from_fn(n + 1, n + 1, |k, j| Fe::from_i64((k as i64).pow(j as u32)));
    let low_to_high = vander.solve_unique(&values).expect("Vandermonde nodes are distinct");
    BinaryForm::new(low_to_high)
}

/// Gram matrices `(A·adj(B)·A, B·adj(A)·B)` of `g_B` and `g_A`.
pub fn quad_covariants(p: &Pencil) -> (ExactMatrix, ExactMatrix) {
    let gb = p.a.mul(&p.b.adjugate()).mul(&p.a);
    let ga = p.b.mul(&p.a.adjugate()).mul(&p.b);
    (gb, ga)
}

/// Jacobian determinant of `(f_A, f_B, g_B)` for a ternary pencil.
pub fn cubicovariant(p: &Pencil) -> Result<TernaryCubic> {
    if p.n != 3 {
        return Err(Error::Dimension { expected: "n = 3".into(), got: p.n });
    }
    let (gb, _) = quad_covariants(p);
    let fs = [MPoly::quadratic_form(&p.a), MPoly::quadratic_form(&p.b), MPoly::quadratic_form(&gb)];
    Ok(TernaryCubic::from_mpoly(&jacobian_det(&fs)))
}

/// Whether the Hessian determinant of `c` is a scalar multiple of `c`.
pub fn is_decomposable(c: &TernaryCubic) -> bool {
    if c.is_zero() {
        return true;
    }
    let p = c.to_mpoly();
    hessian_det(&p).proportionality(&p).is_some()
}

/// `disc(κ · det_form)`, normalized so that it agrees with the quartic
/// discriminant on embedded pairs.
pub fn pair_discriminant(p: &Pencil) -> Result<Fe> {
    if p.n != 3 {
        return Err(Error::Dimension { expected: "n = 3".into(), got: p.n });
    }
    let kappa = Fe::rational(CovariantConstants::gram().kappa);
    Ok(det_form(p).scale(&kappa).cubic_discriminant())
}

/// The substitution `γ` with `det_form(pA + qB, rA + sB) = det_form(A, B)∘γ`.
pub fn slot_change_substitution(p: &Fe, q: &Fe, r: &Fe, s: &Fe) -> ExactMatrix {
    Matrix::from_rows(vec![vec![p.clone(), -r.clone()], vec![-q.clone(), s.clone()]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_traits::Zero;

    fn fe(n: i64) -> Fe {
        Fe::from_i64(n)
    }

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::new(c.iter().map(|&v| fe(v)).collect())
    }

    fn embedded_x4_y4() -> Pencil {
        let h = Fe::rational(rat(1, 2));
        let a = Matrix::from_rows(vec![vec![fe(0), fe(0), h.clone()], vec![fe(0), fe(-1), fe(0)], vec![h, fe(0), fe(0)]]);
        Pencil::new(a, Matrix::diagonal(&[fe(1), fe(0), fe(1)])).unwrap()
    }

    #[test]
    fn diagonal_det_form() {
        let p = Pencil::diagonal(&[fe(1), fe(2), fe(3)], &[fe(1), fe(1), fe(1)]);
        assert_eq!(det_form(&p), form(&[6, -11, 6, -1]));
        let q = Pencil::new(p.a().clone(), Matrix::zeros(3, 3)).unwrap();
        assert_eq!(det_form(&q), form(&[6, 0, 0, 0]));
    }

    #[test]
    fn embedded_pair_covariants() {
        let p = embedded_x4_y4();
        assert_eq!(det_form(&p), BinaryForm::new(vec![Fe::rational(rat(1, 4)), fe(0), fe(-1), fe(0)]));
        let (gb, _) = quad_covariants(&p);
        assert_eq!(gb, Matrix::diagonal(&[fe(0), fe(1), fe(0)]));
        let c = cubicovariant(&p).unwrap();
        assert_eq!(c.coeff("x2y"), Some(&fe(4)));
        assert_eq!(c.coeff("yz2"), Some(&fe(-4)));
        assert_eq!(c.coeffs().iter().filter(|v| !v.is_zero()).count(), 2);
        assert_eq!(pair_discriminant(&p).unwrap(), fe(256));
    }

    #[test]
    fn diagonal_cubicovariant() {
        let p = Pencil::diagonal(&[fe(1), fe(2), fe(3)], &[fe(1), fe(1), fe(1)]);
        let c = cubicovariant(&p).unwrap();
        assert_eq!(c.coeff("xyz"), Some(&fe(-16)));
        assert!(is_decomposable(&c));
        let (gb, _) = quad_covariants(&p);
        assert_eq!(gb, Matrix::diagonal(&[fe(1), fe(4), fe(9)]));
        assert!(!pair_discriminant(&p).unwrap().is_zero());
    }

    #[test]
    fn decomposability_examples() {
        let xyz = TernaryCubic::from_mpoly(&MPoly::var(3, 0).mul(&MPoly::var(3, 1)).mul(&MPoly::var(3, 2)));
        assert!(is_decomposable(&xyz));
        let fermat = TernaryCubic::from_mpoly(&(0..3).fold(MPoly::zero(3), |acc, i| acc.add(&MPoly::var(3, i).pow(3))));
        assert!(!is_decomposable(&fermat));
        assert!(is_decomposable(&TernaryCubic::zero()));
    }

    #[test]
    fn rejects_bad_shapes() {
        let err = cubicovariant(&Pencil::diagonal(&[fe(1), fe(2)], &[fe(1), fe(1)])).unwrap_err();
        assert!(matches!(err, Error::Dimension { got: 2, .. }));
        let asym = Pencil::from_i64(&[vec![1, 2], vec![3, 4]], &[vec![1, 0], vec![0, 1]]);
        assert_eq!(asym.unwrap_err(), Error::NotSymmetric(0, 1));
    }

    #[test]
    fn repeated_root_kills_discriminant() {
        let p = Pencil::diagonal(&[fe(1), fe(1), fe(3)], &[fe(1), fe(1), fe(1)]);
        assert!(pair_discriminant(&p).unwrap().is_zero());
    }

    #[test]
    fn slot_change_is_a_substitution() {
        let p =
            Pencil::from_i64(&[vec![2, 1, 0], vec![1, -1, 3], vec![0, 3, 5]], &[vec![1, 0, 2], vec![0, 4, -1], vec![2, -1, 0]])
                .unwrap();
        let (a, b, c, d) = (fe(2), fe(-3), fe(1), fe(5));
        let lhs = det_form(&p.slot_change(&a, &b, &c, &d));
        assert_eq!(lhs, det_form(&p).transform(&slot_change_substitution(&a, &b, &c, &d)));
    }

    #[test]
    fn json_round_trip() {
        let p = embedded_x4_y4();
        let back = Pencil::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
