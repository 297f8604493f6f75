//! Re-derives every normalization constant from random samples and emits
//! the constants report.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::diagonalize::{diagonalize, symdiag3_check, Diagonalization};
use crate::error::{Error, Result};
use crate::field::{format_rational, Field, FieldElement, Rational};
use crate::forms::{BinaryForm, MPoly};
use crate::linalg::{ExactMatrix, Matrix};
use crate::pencil::{cubicovariant, det_form, quad_covariants, Pencil};
use crate::quartic::{
    calibrate_syzygy, discriminant, f6, hessian, resultant_of_partials, syzygy_holds, weight_exponent, CovariantConstants,
    Quartic,
};
use crate::wood::{embed, mt3_family, restrict_to_conic};

type Fe = FieldElement;

/// The one scalar `c` with `lhs = c · rhs` across all samples.
fn common_ratio(pairs: &[(BinaryForm, BinaryForm)]) -> Result<Rational> {
    let mut ratio: Option<Fe> = None;
    for (lhs, rhs) in pairs {
        if rhs.is_zero() {
            continue;
        }
        let r = lhs.to_mpoly().proportionality(&rhs.to_mpoly()).ok_or_else(|| Error::Calibration("not proportional".into()))?;
        match &ratio {
            Some(prev) if *prev != r => return Err(Error::Calibration("ratio differs between samples".into())),
            _ => ratio = Some(r),
        }
    }
    ratio.and_then(|r| r.to_rational()).ok_or_else(|| Error::Calibration("no usable sample".into()))
}

fn rational_fourth_root(r: &Rational) -> Option<Rational> {
    let s = crate::field::rational_sqrt(r)?;
    crate::field::rational_sqrt(&s)
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> ExactMatrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Fe::from_i64(rng.gen_range(lo..=hi)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Invertible with `|det| ≥ 2`, so the power of the determinant is visible.
fn random_weight_probe<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> ExactMatrix {
    loop {
        let m = random_invertible(rng, n, lo, hi);
        let d = m.det();
        if d != Fe::one() && d != -Fe::one() {
            return m;
        }
    }
}

fn random_nondegenerate_quartic<R: Rng>(rng: &mut R) -> Quartic {
    loop {
        let f = Quartic::random(rng, -10, 10);
        if !discriminant(&f).is_zero() {
            return f;
        }
    }
}

/// Recomputes the constants from samples drawn with `seed`.
pub fn calibrate(seed: u64) -> Result<CovariantConstants> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quartics: Vec<Quartic> = (0..5).map(|_| random_nondegenerate_quartic(&mut rng)).collect();

    let lambda = common_ratio(
        &quartics
            .iter()
            .map(|f| {
                let c3 = cubicovariant(&embed(f).pencil).expect("ternary");
                (f6(f), restrict_to_conic(&c3.to_mpoly(), 6))
            })
            .collect::<Vec<_>>(),
    )?;

    // H = μ₁ g_B∘v + μ₂ g_A∘v, solved as an overdetermined linear system.
    let mut rows = Vec::new();
    for f in &quartics {
        let (gb, ga) = quad_covariants(&embed(f).pencil);
        let gb = restrict_to_conic(&MPoly::quadratic_form(&gb), 4);
        let ga = restrict_to_conic(&MPoly::quadratic_form(&ga), 4);
        let h = hessian(f);
        for k in 0..=4 {
            rows.push(vec![gb.coeff(k).clone(), ga.coeff(k).clone(), h.coeff(k).clone()]);
        }
    }
    let aug = Matrix::from_rows(rows);
    let coef = Matrix::from_fn(aug.rows(), 2, |i, j| aug.get(i, j).clone());
    if coef.rank() != 2 || aug.rank() != 2 {
        return Err(Error::Calibration("Hessian is not a combination of g_B and g_A".into()));
    }
    let (red, _) = aug.rref();
    let (mu1, mu2) = (red.get(0, 2).to_rational().unwrap(), red.get(1, 2).to_rational().unwrap());

    let disc_ratio = common_ratio(
        &quartics
            .iter()
            .map(|f| {
                let cubic = det_form(&embed(f).pencil).cubic_discriminant();
                (BinaryForm::new(vec![discriminant(f)]), BinaryForm::new(vec![cubic]))
            })
            .collect::<Vec<_>>(),
    )?;
    let kappa =
        rational_fourth_root(&disc_ratio).ok_or_else(|| Error::Calibration("κ⁴ is not a rational fourth power".into()))?;

    let resultant_ratio = common_ratio(
        &quartics
            .iter()
            .map(|f| (BinaryForm::new(vec![resultant_of_partials(f)]), BinaryForm::new(vec![discriminant(f)])))
            .collect::<Vec<_>>(),
    )?;

    let samples: Vec<Quartic> = (0..10).map(|_| random_nondegenerate_quartic(&mut rng)).collect();
    let syzygy = calibrate_syzygy(&samples)?;

    let mut hw = None;
    let mut fw = None;
    for f in &quartics {
        let g = random_weight_probe(&mut rng, 2, -3, 3);
        let d = g.det();
        let ft = f.transform(&g);
        let h = weight_exponent(&hessian(&ft), &hessian(f).transform(&g), &d, 8);
        let w = weight_exponent(&f6(&ft), &f6(f).transform(&g), &d, 8);
        if hw.is_some() && hw != h || fw.is_some() && fw != w || h.is_none() || w.is_none() {
            return Err(Error::Calibration("inconsistent covariance weight".into()));
        }
        hw = h;
        fw = w;
    }

    let mut cw = None;
    for _ in 0..5 {
        let p = random_pencil(&mut rng, 3);
        let t = random_weight_probe(&mut rng, 3, -2, 2);
        let lhs = cubicovariant(&p.transform(&t))?.to_mpoly();
        let rhs = cubicovariant(&p)?.to_mpoly().transform(&t);
        let d = t.det();
        let mut scale = Fe::one();
        let mut found = None;
        for w in 0..=8 {
            if rhs.scale(&scale) == lhs {
                found = Some(w);
                break;
            }
            scale = scale * &d;
        }
        if found.is_none() || cw.is_some() && cw != found {
            return Err(Error::Calibration("inconsistent cubicovariant weight".into()));
        }
        cw = found;
    }

    let fam = mt3_family(1, 0);
    let c3 = cubicovariant(&fam.pencil)?.to_mpoly();
    let mt3_scale = c3.coeff(&[3, 0, 0]).div(&fam.g.to_mpoly().coeff(&[3, 0, 0])).and_then(|r| r.to_rational()).unwrap();

    let symdiag_scalar = symdiag_scalar(&mut rng)?;

    Ok(CovariantConstants {
        lambda,
        mu1,
        mu2,
        kappa,
        syzygy,
        hessian_weight: hw.unwrap(),
        f6_weight: fw.unwrap(),
        cubicovariant_weight: cw.unwrap(),
        resultant_ratio,
        mt3_scale,
        symdiag_scalar,
    })
}

/// Random symmetric integer pencil.
pub fn random_pencil<R: Rng>(rng: &mut R, n: usize) -> Pencil {
    let mut sym = || {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = Fe::from_i64(rng.gen_range(-5..=5));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        m
    };
    let a = sym();
    let b = sym();
    Pencil::new(a, b).expect("symmetric by construction")
}

/// Random conjugate `U₀ᵗ(diag(s), diag(t))U₀` with distinct nonzero ratios.
pub fn random_conjugated_diagonal<R: Rng>(rng: &mut R, n: usize, nonzero: bool) -> Pencil {
    loop {
        let s: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let t: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        if nonzero && s.iter().chain(&t).any(|&v| v == 0) {
            continue;
        }
        if s.iter().zip(&t).any(|(&a, &b)| a == 0 && b == 0) {
            continue;
        }
        let distinct = (0..n).all(|i| (i + 1..n).all(|j| s[i] * t[j] != s[j] * t[i]));
        if !distinct {
            continue;
        }
        let u0 = random_invertible(rng, n, -5, 5);
        let fe = |v: &[i64]| v.iter().map(|&x| Fe::from_i64(x)).collect::<Vec<_>>();
        return Pencil::diagonal(&fe(&s), &fe(&t)).transform(&u0);
    }
}

fn symdiag_scalar<R: Rng>(rng: &mut R) -> Result<Rational> {
    let p = random_conjugated_diagonal(rng, 3, true);
    let d = match diagonalize(&p)? {
        Diagonalization::Exact(d) => d,
        Diagonalization::Numeric(_) => return Err(Error::Calibration("numeric ternary split".into())),
    };
    let (s, t) = (&d.s, &d.t);
    let (i, j, k) = (0, 1, 2);
    let m = p.a().adjugate().scale(&(t[i].clone() * &t[j])).sub(&p.b().adjugate().scale(&(s[i].clone() * &s[j])));
    let adj = m.adjugate();
    let ell = Matrix::from_rows(vec![d.lambda.row(k)]);
    let coeff = d.lambda.det().square()
        * &s[i]
        * &t[i]
        * &s[j]
        * &t[j]
        * &(s[i].clone() * &t[k] - &(s[k].clone() * &t[i]))
        * &(s[j].clone() * &t[k] - &(s[k].clone() * &t[j]));
    let base = ell.transpose().mul(&ell).scale(&coeff);
    let (r, c) = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .find(|&(r, c)| !base.get(r, c).is_zero())
        .ok_or_else(|| Error::Calibration("vanishing double adjugate".into()))?;
    let sigma = adj.get(r, c).div(base.get(r, c)).unwrap();
    if base.scale(&sigma) != adj {
        return Err(Error::Calibration("double adjugate is not a multiple of ℓ_k²".into()));
    }
    sigma.to_rational().map(|x| x.abs()).ok_or_else(|| Error::Calibration("irrational scalar".into()))
}

fn r(x: &Rational) -> Json {
    Json::String(format_rational(x))
}

/// JSON report of the constants, with the signs observed by the double-adjugate
/// check on `symdiag_samples` random pencils.
pub fn constants_report(c: &CovariantConstants, symdiag_signs: &[i8]) -> Json {
    let mut signs: Vec<&str> = symdiag_signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
    signs.sort();
    signs.dedup();
    json!({
        "lambda": r(&c.lambda),
        "mu1": r(&c.mu1),
        "mu2": r(&c.mu2),
        "kappa": r(&c.kappa),
        "syzygy": c.syzygy.iter().map(r).collect::<Vec<_>>(),
        "convention": "gram",
        "hessian_weight": c.hessian_weight,
        "f6_weight": c.f6_weight,
        "cubicovariant_weight": c.cubicovariant_weight,
        "resultant_ratio": r(&c.resultant_ratio),
        "mt3_scale": r(&c.mt3_scale),
        "rho3_corner": "a21^2",
        "symdiag": {
            "operand": "t_i t_j adj(A) - s_i s_j adj(B)",
            "scalar": r(&c.symdiag_scalar),
            "signs_observed": signs,
        },
    })
}

/// Runs the double-adjugate check on `count` random conjugated diagonal
/// pencils and collects the observed signs.
pub fn observed_symdiag_signs(seed: u64, count: usize) -> Result<Vec<i8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let p = random_conjugated_diagonal(&mut rng, 3, true);
        let rep = symdiag3_check(&p)?;
        if !rep.holds {
            return Err(Error::Calibration("double-adjugate identity failed".into()));
        }
        out.extend(rep.signs);
    }
    Ok(out)
}

/// Checks the syzygy on `count` fresh quartics; returns the failures.
pub fn syzygy_sweep(c: &[Rational; 3], seed: u64, count: usize) -> Vec<Quartic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Quartic::random(&mut rng, -20, 20)).filter(|f| !syzygy_holds(f, c)).collect()
}
