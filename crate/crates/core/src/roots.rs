//! Root finding for rational polynomials: exact rational roots via Sturm
//! isolation, linear factors of binary forms, and certified complex root
//! approximations for the numeric fallback.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Rational, UniPoly};
use crate::forms::BinaryForm;

/// Scales a nonzero rational polynomial to a primitive integer polynomial
/// with positive leading coefficient.
pub fn primitive_integer(p: &UniPoly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn int_poly(c: &[BigInt]) -> UniPoly<Rational> {
    UniPoly::new(c.iter().map(|v| Rational::from_integer(v.clone())).collect())
}

struct Sturm {
    chain: Vec<UniPoly<Rational>>,
}

impl Sturm {
    fn new(f: &UniPoly<Rational>) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-Rational::one()));
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

/// The simplest (smallest denominator) rational in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if next <= *hi {
        return next;
    }
    // Both lie strictly between fl and fl + 1: recurse on the reciprocals.
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// All distinct rational roots of a nonzero polynomial, ascending.
pub fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let sq = int_poly(&primitive_integer(&p.squarefree_part()));
    let ints = primitive_integer(&sq);
    let lead = ints.last().unwrap().abs();
    let mut roots = Vec::new();
    let mut f = sq;
    // Zero roots first so the Cauchy bound below stays tight.
    if f.coeff(0).is_zero() {
        roots.push(Rational::zero());
        f = f.div_rem(&UniPoly::new(vec![Rational::zero(), Rational::one()])).0;
    }
    if f.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let lc = f.leading().unwrap().clone();
    let bound = Rational::one() + f.coeffs().iter().map(|c| (c / &lc).abs()).max().unwrap();
    let sturm = Sturm::new(&f);
    let lo = -bound.clone();
    let hi = bound;
    let total = sturm.variations(&lo) - sturm.variations(&hi);
    let min_width = Rational::new(BigInt::one(), &lead * &lead);
    isolate(&f, &sturm, lo, hi, total, &lead, &min_width, &mut roots);
    roots.sort();
    roots.dedup();
    roots
}

#[allow(clippy::too_many_arguments)]
fn isolate(
    f: &UniPoly<Rational>,
    sturm: &Sturm,
    lo: Rational,
    hi: Rational,
    count: usize,
    lead: &BigInt,
    min_width: &Rational,
    out: &mut Vec<Rational>,
) {
    if count == 0 {
        return;
    }
    if f.eval(&hi).is_zero() {
        out.push(hi.clone());
        if count == 1 {
            return;
        }
    }
    if count == 1 && &hi - &lo < *min_width {
        // At most one rational with denominator ≤ lead fits in this interval.
        let cand = simplest_between(&lo, &hi);
        if cand > lo && cand <= hi && cand.denom() <= lead && f.eval(&cand).is_zero() {
            out.push(cand);
        }
        return;
    }
    let two = Rational::from_integer(BigInt::from(2));
    let mut mid = (&lo + &hi) / &two;
    // Avoid splitting exactly at a root of f; finitely many to skip.
    let mut k = 3i64;
    while f.eval(&mid).is_zero() && !out.contains(&mid) {
        out.push(mid.clone());
        mid = &lo + (&hi - &lo) * Rational::new(BigInt::from(k - 1), BigInt::from(2 * k - 1));
        k += 1;
    }
    let vm = sturm.variations(&mid);
    let left = sturm.variations(&lo) - vm;
    let right = vm - sturm.variations(&hi);
    isolate(f, sturm, lo, mid.clone(), left, lead, min_width, out);
    isolate(f, sturm, mid, hi, right, lead, min_width, out);
}

/// A projective root `(s : t)` of a binary form, i.e. the factor `s·x − t·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRoot {
    pub s: BigInt,
    pub t: BigInt,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct LinearFactorization {
    /// Ordered by `t/s` ascending, the root at infinity (`s = 0`) last.
    pub roots: Vec<RationalRoot>,
    /// Has no rational root; `F = ∏(s x − t y)^m · cofactor`.
    pub cofactor: BinaryForm,
}

impl LinearFactorization {
    pub fn linear_degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Product of the linear factors (with multiplicity) times the cofactor.
    pub fn expand(&self) -> BinaryForm {
        let mut acc = self.cofactor.clone();
        for r in &self.roots {
            let lin = BinaryForm::linear(int_fe(&r.s), int_fe(&r.t));
            for _ in 0..r.multiplicity {
                acc = acc.mul(&lin);
            }
        }
        acc
    }
}

fn int_fe(v: &BigInt) -> FieldElement {
    FieldElement::rational(Rational::from_integer(v.clone()))
}

/// All rational projective roots of a nonzero binary form with rational
/// coefficients, with multiplicities, plus the root-free cofactor.
pub fn rational_linear_factors(form: &BinaryForm) -> Result<LinearFactorization> {
    if form.is_zero() {
        return Err(Error::ZeroDetForm);
    }
    let coeffs: Vec<Rational> =
        form.coeffs().iter().map(|c| c.to_rational().ok_or(Error::TowerMismatch)).collect::<Result<_>>()?;
    let d = form.degree();
    // Multiplicity of the root at infinity: leading x-coefficients that vanish.
    let m_inf = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut f: UniPoly<Rational> = UniPoly::new(coeffs.iter().rev().cloned().collect());
    let mut roots = Vec::new();
    for r in rational_roots(&f) {
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()]);
        let mut m = 0;
        loop {
            let (q, rem) = f.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            f = q;
            m += 1;
        }
        // s x − t y with t/s = r: (s, t) = (denom, numer); f absorbs 1/s^m.
        let s = r.denom().clone();
        let scale = Rational::from_integer(s.pow(m as u32)).recip();
        f = f.scale(&scale);
        roots.push(RationalRoot { s, t: r.numer().clone(), multiplicity: m });
    }
    if m_inf > 0 {
        // Factor (0·x − 1·y) = −y, so the cofactor picks up (−1)^m.
        if m_inf % 2 == 1 {
            f = f.scale(&-Rational::one());
        }
        roots.push(RationalRoot { s: BigInt::zero(), t: BigInt::one(), multiplicity: m_inf });
    }
    let cd = d - roots.iter().map(|r| r.multiplicity).sum::<usize>();
    let cofactor = BinaryForm::homogenize(&f.map(|c| FieldElement::rational(c.clone())), cd);
    Ok(LinearFactorization { roots, cofactor })
}

/// Rounds to the nearest multiple of `2^-bits`.
pub fn round_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    let n = (scaled + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    Rational::new(n, scale)
}

pub type ComplexRational = Complex<Rational>;

pub fn round_complex(z: &ComplexRational, bits: u32) -> ComplexRational {
    Complex::new(round_dyadic(&z.re, bits), round_dyadic(&z.im, bits))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn complex_from_f64(z: Complex64) -> ComplexRational {
    let conv = |v: f64| BigRational::from_float(v).unwrap_or_else(Rational::zero);
    Complex::new(conv(z.re), conv(z.im))
}

/// Isolated approximations of all roots of a square-free rational
/// polynomial. Each returned point `z` comes with the certificate that the
/// disc of radius `deg·|p(z)/p'(z)|` around it contains a root and the discs
/// are pairwise disjoint, so the roots are matched one-to-one.
pub fn certified_complex_roots(p: &UniPoly<Rational>, bits: u32) -> Result<Vec<ComplexRational>> {
    let deg = p.degree().ok_or_else(|| Error::Numeric("zero polynomial".into()))?;
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(Error::Numeric("polynomial has repeated roots".into()));
    }
    let monic = p.monic();
    let cf: Vec<Complex64> = monic.coeffs().iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect();
    let approx = aberth(&cf)?;
    let pc: UniPoly<ComplexRational> = monic.map(|c| Complex::new(c.clone(), Rational::zero()));
    let dpc = pc.derivative();
    let eps2 = Rational::new(BigInt::one(), BigInt::one() << (2 * bits));
    let mut roots = Vec::with_capacity(deg);
    let mut radii2 = Vec::with_capacity(deg);
    for z0 in approx {
        let mut z = round_complex(&complex_from_f64(z0), bits);
        let mut step2 = Rational::zero();
        for _ in 0..40 {
            let fz = pc.eval(&z);
            let dz = dpc.eval(&z);
            let Some(step) = fz.div(&dz) else {
                return Err(Error::Numeric("vanishing derivative during refinement".into()));
            };
            step2 = step.norm_sqr();
            z = round_complex(&(z - step), bits);
            if step2 < eps2 {
                break;
            }
        }
        let fz = pc.eval(&z);
        let dz = dpc.eval(&z);
        let r2 = fz.norm_sqr() / dz.norm_sqr() * Rational::from_integer(BigInt::from(deg * deg));
        if step2 >= eps2.clone() * Rational::from_integer(BigInt::from(1u64 << 20)) {
            return Err(Error::Numeric("Newton refinement did not converge".into()));
        }
        roots.push(z);
        radii2.push(r2);
    }
    let two = Rational::from_integer(BigInt::from(2));
    for i in 0..deg {
        for j in i + 1..deg {
            let dist2 = (roots[i].clone() - roots[j].clone()).norm_sqr();
            if (&radii2[i] + &radii2[j]) * &two >= dist2 {
                return Err(Error::Numeric("root discs overlap".into()));
            }
        }
    }
    Ok(roots)
}

fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let deval =
        |z: Complex64| c.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (i, a)| acc * z + a * i as f64);
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let w = eval(z[k]) / deval(z[k]);
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let a = w / (1.0 - w * s);
            if a.is_finite() {
                z[k] -= a;
                moved = moved.max(a.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|v| v.is_finite()) {
        Ok(z)
    } else {
        Err(Error::Numeric("Aberth iteration diverged".into()))
    }
}
