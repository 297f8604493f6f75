//! Homogeneous forms: binary forms, ternary cubics, and a small sparse
//! multivariate polynomial type used for Jacobians and substitutions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{Map, Value as Json};

use crate::field::{Field, FieldElement, UniPoly};
use crate::linalg::{ExactMatrix, Matrix};

type Fe = FieldElement;

/// Sparse polynomial in `nvars` variables; exponent vectors map to nonzero
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Fe>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*{e:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Fe) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Fe::one());
        p
    }

    /// `Σ c_i x_i`
    pub fn linear(coeffs: &[Fe]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// `xᵗ M x` for a square matrix `M`.
    pub fn quadratic_form(m: &ExactMatrix) -> Self {
        let n = m.rows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, m.get(i, j).clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Fe)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Fe {
        self.terms.get(exps).cloned().unwrap_or_else(Fe::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.clone() + &c;
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, c: &Fe) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Fe::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone() * &Fe::from_i64(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Replaces variable `i` by `subs[i]`; the result lives in the
    /// substitutes' variables.
    pub fn substitute(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map_or(0, |s| s.nvars);
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::constant(target, Fe::one()), s.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Linear change of variables `x ↦ T x`.
    pub fn transform(&self, t: &ExactMatrix) -> MPoly {
        let subs: Vec<MPoly> = (0..self.nvars).map(|i| MPoly::linear(&t.row(i))).collect();
        self.substitute(&subs)
    }

    pub fn eval(&self, point: &[Fe]) -> Fe {
        let mut acc = Fe::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x;
                }
            }
            acc = acc + &t;
        }
        acc
    }

    /// `Some(c)` with `self = c · other`, if such a scalar exists.
    /// A zero `other` is only proportional to zero.
    pub fn proportionality(&self, other: &MPoly) -> Option<Fe> {
        let Some((e, c)) = other.terms.iter().next() else {
            return self.is_zero().then(Fe::zero);
        };
        let ratio = self.coeff(e).div(c).unwrap();
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    let nvars = m[0][0].nvars();
    fn rec(m: &[Vec<MPoly>], row: usize, cols: &[usize], nvars: usize) -> MPoly {
        if cols.is_empty() {
            return MPoly::constant(nvars, Fe::one());
        }
        let mut acc = MPoly::zero(nvars);
        for (k, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = m[row][c].mul(&rec(m, row + 1, &rest, nvars));
            acc = if k % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }
    let cols: Vec<usize> = (0..n).collect();
    rec(m, 0, &cols, nvars)
}

/// Jacobian determinant `det(∂f_i/∂x_j)`.
pub fn jacobian_det(fs: &[MPoly]) -> MPoly {
    let rows: Vec<Vec<MPoly>> = fs.iter().map(|f| f.gradient()).collect();
    poly_det(&rows)
}

/// Hessian determinant `det(∂²f/∂x_i∂x_j)`.
pub fn hessian_det(f: &MPoly) -> MPoly {
    let g = f.gradient();
    jacobian_det(&g)
}

/// Binary form `Σ c_k x^k y^(d-k)` of degree `d`, stored `c_d, …, c_0`.
#[derive(Clone, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<Fe>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm{:?}", self.coeffs)
    }
}

impl BinaryForm {
    /// Coefficients highest power of `x` first.
    pub fn new(coeffs: Vec<Fe>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { coeffs: vec![Fe::zero(); degree + 1] }
    }

    /// `s·x − t·y`
    pub fn linear(s: Fe, t: Fe) -> Self {
        BinaryForm { coeffs: vec![s, -t] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^k y^(d-k)`.
    pub fn coeff(&self, k: usize) -> &Fe {
        &self.coeffs[self.degree() - k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn scale(&self, c: &Fe) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        BinaryForm::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.degree() + other.degree();
        let mut out = vec![Fe::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + &(a.clone() * b);
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn eval(&self, x: &Fe, y: &Fe) -> Fe {
        let d = self.degree();
        let mut acc = Fe::zero();
        for k in 0..=d {
            let mut t = self.coeff(k).clone();
            for _ in 0..k {
                t = t * x;
            }
            for _ in 0..d - k {
                t = t * y;
            }
            acc = acc + &t;
        }
        acc
    }

    /// `F(x, 1)` as a univariate polynomial (low to high).
    pub fn dehomogenize(&self) -> UniPoly<Fe> {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Homogenizes `p` to degree `d ≥ deg p`.
    pub fn homogenize(p: &UniPoly<Fe>, d: usize) -> Self {
        assert!(p.degree().unwrap_or(0) <= d);
        BinaryForm { coeffs: (0..=d).rev().map(|k| p.coeff(k)).collect() }
    }

    pub fn to_mpoly(&self) -> MPoly {
        let d = self.degree() as u32;
        let mut p = MPoly::zero(2);
        for k in 0..=d {
            p.add_term(vec![k, d - k], self.coeff(k as usize).clone());
        }
        p
    }

    /// Reads a homogeneous polynomial of degree `d` in `(x, y)`; panics on
    /// terms of other degrees.
    pub fn from_mpoly(p: &MPoly, d: usize) -> Self {
        assert_eq!(p.nvars(), 2);
        let mut coeffs = vec![Fe::zero(); d + 1];
        for (e, c) in p.terms() {
            assert_eq!((e[0] + e[1]) as usize, d, "inhomogeneous term");
            coeffs[d - e[0] as usize] = c.clone();
        }
        BinaryForm { coeffs }
    }

    /// `F(γ₀₀x + γ₀₁y, γ₁₀x + γ₁₁y)`
    pub fn transform(&self, gamma: &ExactMatrix) -> Self {
        BinaryForm::from_mpoly(&self.to_mpoly().transform(gamma), self.degree())
    }

    /// Sylvester resultant of two binary forms.
    pub fn resultant(&self, other: &Self) -> Fe {
        let (m, n) = (self.degree(), other.degree());
        let size = m + n;
        if size == 0 {
            return Fe::one();
        }
        let mat = Matrix::from_fn(size, size, |i, j| {
            if i < n {
                j.checked_sub(i).and_then(|k| self.coeffs.get(k)).cloned().unwrap_or_else(Fe::zero)
            } else {
                j.checked_sub(i - n).and_then(|k| other.coeffs.get(k)).cloned().unwrap_or_else(Fe::zero)
            }
        });
        mat.det()
    }

    pub fn partial_x(&self) -> Self {
        let d = self.degree();
        BinaryForm::from_mpoly(&self.to_mpoly().derivative(0), d - 1)
    }

    pub fn partial_y(&self) -> Self {
        let d = self.degree();
        BinaryForm::from_mpoly(&self.to_mpoly().derivative(1), d - 1)
    }

    /// Discriminant of a binary cubic `ax³ + bx²y + cxy² + dy³`.
    pub fn cubic_discriminant(&self) -> Fe {
        assert_eq!(self.degree(), 3, "cubic discriminant of a non-cubic");
        let [a, b, c, d] = [0, 1, 2, 3].map(|i| self.coeffs[i].clone());
        let i = Fe::from_i64;
        b.square() * &c.square()
            - &(i(4) * &a * &c.square() * &c)
            - &(i(4) * &b.square() * &b * &d)
            - &(i(27) * &a.square() * &d.square())
            + &(i(18) * &a * &b * &c * &d)
    }

    /// Whether the form is nonzero and has no repeated projective root.
    pub fn has_distinct_roots(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.degree();
        if d <= 1 {
            return true;
        }
        // A repeated root at infinity means y² divides the form.
        if self.coeffs[0].is_zero() && self.coeffs[1].is_zero() {
            return false;
        }
        let f = self.dehomogenize();
        f.gcd(&f.derivative()).degree() == Some(0)
    }

    pub fn to_json(&self) -> Json {
        Json::Array(self.coeffs.iter().map(|c| c.to_json()).collect())
    }
}

/// Monomials of a ternary cubic, in storage order.
pub const CUBIC_MONOMIALS: [(&str, [u32; 3]); 10] = [
    ("x3", [3, 0, 0]),
    ("x2y", [2, 1, 0]),
    ("x2z", [2, 0, 1]),
    ("xy2", [1, 2, 0]),
    ("xyz", [1, 1, 1]),
    ("xz2", [1, 0, 2]),
    ("y3", [0, 3, 0]),
    ("y2z", [0, 2, 1]),
    ("yz2", [0, 1, 2]),
    ("z3", [0, 0, 3]),
];

/// Homogeneous cubic in `(x, y, z)`.
#[derive(Clone, PartialEq)]
pub struct TernaryCubic {
    coeffs: [Fe; 10],
}

impl fmt::Debug for TernaryCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = CUBIC_MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((m, _), c)| format!("({c}){m}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl TernaryCubic {
    pub fn new(coeffs: [Fe; 10]) -> Self {
        TernaryCubic { coeffs }
    }

    pub fn zero() -> Self {
        TernaryCubic { coeffs: std::array::from_fn(|_| Fe::zero()) }
    }

    pub fn coeffs(&self) -> &[Fe; 10] {
        &self.coeffs
    }

    pub fn coeff(&self, monomial: &str) -> Option<&Fe> {
        CUBIC_MONOMIALS.iter().position(|(m, _)| *m == monomial).map(|i| &self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_mpoly(&self) -> MPoly {
        let mut p = MPoly::zero(3);
        for ((_, e), c) in CUBIC_MONOMIALS.iter().zip(&self.coeffs) {
            p.add_term(e.to_vec(), c.clone());
        }
        p
    }

    /// Panics if `p` has terms that are not cubic monomials in three variables.
    pub fn from_mpoly(p: &MPoly) -> Self {
        assert_eq!(p.nvars(), 3);
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            let i = CUBIC_MONOMIALS.iter().position(|(_, m)| m[..] == e[..]).expect("non-cubic term");
            out.coeffs[i] = c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Fe) -> Self {
        TernaryCubic { coeffs: std::array::from_fn(|i| self.coeffs[i].clone() * c) }
    }

    pub fn transform(&self, t: &ExactMatrix) -> Self {
        Self::from_mpoly(&self.to_mpoly().transform(t))
    }

    /// JSON object keyed by monomial, nonzero coefficients only.
    pub fn to_json(&self) -> Json {
        let mut m = Map::new();
        for ((name, _), c) in CUBIC_MONOMIALS.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                m.insert((*name).to_string(), c.to_json());
            }
        }
        Json::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> Fe {
        Fe::from_i64(n)
    }

    #[test]
    fn binary_form_layout() {
        // 6x³ − 11x²y + 6xy² − y³
        let f = BinaryForm::new(vec![fe(6), fe(-11), fe(6), fe(-1)]);
        assert_eq!(f.coeff(3), &fe(6));
        assert_eq!(f.coeff(0), &fe(-1));
        assert_eq!(f.eval(&fe(1), &fe(1)), fe(0));
        assert_eq!(BinaryForm::from_mpoly(&f.to_mpoly(), 3), f);
        assert_eq!(BinaryForm::homogenize(&f.dehomogenize(), 3), f);
    }

    #[test]
    fn product_of_linear_factors() {
        let p = BinaryForm::linear(fe(1), fe(1)).mul(&BinaryForm::linear(fe(2), fe(1))).mul(&BinaryForm::linear(fe(3), fe(1)));
        assert_eq!(p, BinaryForm::new(vec![fe(6), fe(-11), fe(6), fe(-1)]));
        assert!(p.has_distinct_roots());
        let sq = BinaryForm::linear(fe(1), fe(1)).mul(&BinaryForm::linear(fe(1), fe(1)));
        assert!(!sq.has_distinct_roots());
        // y² divides
        assert!(!BinaryForm::new(vec![fe(0), fe(0), fe(1)]).has_distinct_roots());
        assert!(BinaryForm::new(vec![fe(0), fe(1), fe(0)]).has_distinct_roots());
    }

    #[test]
    fn cubic_discriminant_of_split_cubic() {
        // x(x − y)(x + y) = x³ − xy²; disc = 4
        let f = BinaryForm::new(vec![fe(1), fe(0), fe(-1), fe(0)]);
        assert_eq!(f.cubic_discriminant(), fe(4));
    }

    #[test]
    fn hessian_of_xyz_and_fermat() {
        let x = MPoly::var(3, 0);
        let y = MPoly::var(3, 1);
        let z = MPoly::var(3, 2);
        let xyz = x.mul(&y).mul(&z);
        assert_eq!(hessian_det(&xyz), xyz.scale(&fe(2)));
        let fermat = x.pow(3).add(&y.pow(3)).add(&z.pow(3));
        assert_eq!(hessian_det(&fermat), xyz.scale(&fe(216)));
    }

    #[test]
    fn resultant_detects_common_root() {
        let a = BinaryForm::linear(fe(1), fe(2)).mul(&BinaryForm::linear(fe(1), fe(3)));
        let b = BinaryForm::linear(fe(1), fe(2)).mul(&BinaryForm::linear(fe(1), fe(5)));
        assert!(a.resultant(&b).is_zero());
        let c = BinaryForm::linear(fe(1), fe(7));
        // Res(x − 2y)(x − 3y), x − 7y) = (7−2)(7−3) up to sign
        assert_eq!(a.resultant(&c), fe(20));
    }

    #[test]
    fn cubic_json_keeps_nonzero_terms() {
        let mut c = TernaryCubic::zero();
        c.coeffs[4] = fe(-16);
        assert_eq!(c.to_json(), serde_json::json!({"xyz": "-16"}));
        assert_eq!(TernaryCubic::from_mpoly(&c.to_mpoly()), c);
    }
}
