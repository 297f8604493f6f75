//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use pencil_core::calibrate::{calibrate, constants_report, observed_symdiag_signs, random_pencil, syzygy_sweep};
use pencil_core::diagonalize::{diagonalize, is_diagonalizable_over_q, symdiag3_check, Diagonalization, Verdict};
use pencil_core::field::{Field, FieldElement as Fe, Rational};
use pencil_core::forms::{MPoly, TernaryCubic};
use pencil_core::linalg::Matrix;
use pencil_core::pencil::{cubicovariant, det_form, is_decomposable, pair_discriminant};
use pencil_core::quartic::{calibrate_syzygy, discriminant, CovariantConstants, Quartic};
use pencil_core::wood::{
    bridge_as_stated, bridge_corrected, delta, embed, mt3_family, verify_disc_preserving, verify_mt, verify_mt2, verify_mt3,
    Mt3Outcome,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sweep_quartics() -> Vec<Quartic> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..1000).map(|_| Quartic::random(&mut rng, -20, 20)).collect()
}

fn timed_sweep(check: fn(&Quartic) -> bool, limit: Duration) -> Outcome {
    let qs = sweep_quartics();
    let start = Instant::now();
    let failures = qs.iter().filter(|f| !check(f)).count();
    let elapsed = start.elapsed();
    if failures > 0 {
        return Err(format!("{failures} of {} quartics fail", qs.len()));
    }
    if elapsed > limit {
        return Err(format!("took {elapsed:.2?}, limit {limit:?}"));
    }
    Ok(format!("{} quartics, 0 failures, {elapsed:.2?}", qs.len()))
}

fn mt_sweep() -> Outcome {
    let detail = timed_sweep(verify_mt, Duration::from_secs(10))?;
    let c = calibrate(11).map_err(|e| e.to_string())?;
    if c.lambda != Rational::from_integer(8.into()) {
        return Err(format!("calibrated lambda = {}", c.lambda));
    }
    Ok(format!("{detail}; lambda = {}", c.lambda))
}

fn mt2_sweep() -> Outcome {
    let detail = timed_sweep(verify_mt2, Duration::from_secs(10))?;
    let c = calibrate(11).map_err(|e| e.to_string())?;
    if c.mu1 != &c.mu2 * Rational::from_integer(2.into()) {
        return Err(format!("mu1 = {}, mu2 = {}", c.mu1, c.mu2));
    }
    Ok(format!("{detail}; mu1 = {}, mu2 = {}", c.mu1, c.mu2))
}

fn only_xyz(c: &TernaryCubic, expected: &Fe) -> bool {
    c.coeff("xyz") == Some(expected) && c.coeffs().iter().filter(|v| !v.is_zero()).count() == usize::from(!expected.is_zero())
}

fn diagonal_formula() -> Outcome {
    let fixture = cubicovariant(&diagonal_pencil(&[1, 2, 3], &[1, 1, 1])).unwrap();
    if !only_xyz(&fixture, &fe(-16)) {
        return Err(format!("fixture gives {fixture:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let s: Vec<i64> = (0..3).map(|_| rng.gen_range(-9..=9)).collect();
        let t: Vec<i64> = (0..3).map(|_| rng.gen_range(-9..=9)).collect();
        let m = |i: usize, j: usize| s[i] * t[j] - s[j] * t[i];
        let expected = fe(8 * m(0, 1) * m(0, 2) * m(1, 2));
        let c = cubicovariant(&diagonal_pencil(&s, &t)).unwrap();
        if !only_xyz(&c, &expected) {
            return Err(format!("s = {s:?}, t = {t:?}: {c:?}"));
        }
    }
    Ok("200 diagonal pencils plus the (1,2,3),(1,1,1) fixture".into())
}

fn decomposability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 200 {
        let p = random_pencil(&mut rng, 3);
        if !det_form(&p).has_distinct_roots() {
            continue;
        }
        done += 1;
        if !is_decomposable(&cubicovariant(&p).unwrap()) {
            return Err(format!("not decomposable: {}", p.to_json()));
        }
    }
    let fermat = TernaryCubic::from_mpoly(&(0..3).fold(MPoly::zero(3), |acc, i| acc.add(&MPoly::var(3, i).pow(3))));
    if is_decomposable(&fermat) {
        return Err("x^3 + y^3 + z^3 reported decomposable".into());
    }
    Ok("200 nondegenerate pencils decomposable; Fermat cubic control is not".into())
}

/// `(c₁, c₂)` in `[−5, 5]²` whose image family `(a, b)` is nondegenerate.
fn bridge_grid(image: fn(i64, i64) -> (i64, i64)) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for c1 in -5..=5 {
        for c2 in -5..=5 {
            let (a, b) = image(c1, c2);
            if delta(a, b) != 0 {
                out.push((c1, c2));
            }
        }
    }
    out
}

fn bridge_printed() -> Outcome {
    let grid = bridge_grid(|c1, c2| (c1, 3 * c2));
    let bad: Vec<_> = grid.iter().filter(|&&(c1, c2)| !bridge_as_stated(c1, c2)).collect();
    if bad.is_empty() {
        Ok(format!("(a, b) = (c1, 3 c2) holds on {} grid points", grid.len()))
    } else {
        Err(format!("(a, b) = (c1, 3 c2) fails on {} of {} grid points, first {:?}", bad.len(), grid.len(), bad[0]))
    }
}

fn bridge_and_equivalence() -> Outcome {
    let grid = bridge_grid(|c1, c2| (-c2, 3 * c1 - 3 * c2));
    if let Some(bad) = grid.iter().find(|&&(c1, c2)| !bridge_corrected(c1, c2)) {
        return Err(format!("(a, b) = (-c2, 3c1 - 3c2) fails at {bad:?}"));
    }
    let bound = 3;
    let nu = Fe::rational(CovariantConstants::gram().mt3_scale);
    let (mut witnesses, mut unresolved) = (0, Vec::new());
    for a in -2..=2 {
        for b in -2..=2 {
            if delta(a, b) == 0 {
                continue;
            }
            match verify_mt3(a, b, bound).map_err(|e| e.to_string())? {
                Mt3Outcome::Witness { t, scale } => {
                    let fam = mt3_family(a, b);
                    let lhs = cubicovariant(&fam.pencil).unwrap().to_mpoly().transform(&t);
                    let d = t.det();
                    if lhs != fam.g.to_mpoly().scale(&nu) || Fe::rational(scale) != nu || !(d.is_one() || (-d).is_one()) {
                        return Err(format!("bad witness at ({a}, {b})"));
                    }
                    witnesses += 1;
                }
                Mt3Outcome::Unresolved => unresolved.push((a, b)),
            }
        }
    }
    for (a, b) in &unresolved {
        println!("    MT3 unresolved at (a, b) = ({a}, {b}) with entry bound {bound}");
    }
    Ok(format!(
        "(a, b) = (-c2, 3c1 - 3c2) holds on {} grid points; MT3 on [-2,2]^2: {witnesses} witnesses, {} unresolved (bound {bound})",
        grid.len(),
        unresolved.len()
    ))
}

fn disc_preserving() -> Outcome {
    let x4y4 = Quartic::from_i64([1, 0, 0, 0, 1]);
    let (l, r) = (discriminant(&x4y4), pair_discriminant(&embed(&x4y4).pencil).unwrap());
    if l != fe(256) || r != fe(256) {
        return Err(format!("x^4 + y^4: {l:?} vs {r:?}"));
    }
    let detail = timed_sweep(verify_disc_preserving, Duration::from_secs(60))?;
    Ok(format!("{detail}; x^4 + y^4 gives 256 on both sides"))
}

fn ratio_key(s: &Fe, t: &Fe) -> Option<Rational> {
    if s.is_zero() {
        None
    } else {
        Some((t.clone() * &Field::inv(s).unwrap()).to_rational().unwrap())
    }
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 3..=5 {
        for k in 0..500 {
            let (s, t) = distinct_diagonal(&mut rng, n, 6, false);
            let u0 = random_invertible(&mut rng, n, -5, 5);
            let p = diagonal_pencil(&s, &t).transform(&u0);
            let d = match diagonalize(&p) {
                Ok(Diagonalization::Exact(d)) => d,
                Ok(Diagonalization::Numeric(_)) => return Err(format!("n = {n}, instance {k}: numeric fallback")),
                Err(e) => return Err(format!("n = {n}, instance {k}: {e}")),
            };
            let (da, db) = (d.u.congruence(p.a()), d.u.congruence(p.b()));
            if !da.is_diagonal() || !db.is_diagonal() {
                return Err(format!("n = {n}, instance {k}: off-diagonal entries survive"));
            }
            let got: BTreeSet<_> = da.diag().iter().zip(db.diag()).map(|(a, b)| ratio_key(a, &b)).collect();
            let want: BTreeSet<_> = s.iter().zip(&t).map(|(&a, &b)| ratio_key(&fe(a), &fe(b))).collect();
            if got != want || got.len() != n {
                return Err(format!("n = {n}, instance {k}: root ratios differ"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.2?}"));
    }
    Ok(format!("1500 instances over n = 3, 4, 5 in {elapsed:.2?}"))
}

/// `det(Ax − By)` with `i128` arithmetic, as `[c₃, c₂, c₁, c₀]` (x³ first).
fn oracle_det_form(a: &[[i128; 3]; 3], b: &[[i128; 3]; 3]) -> [i128; 4] {
    let mul = |p: &[i128], q: &[i128]| {
        let mut r = vec![0i128; p.len() + q.len() - 1];
        for (i, x) in p.iter().enumerate() {
            for (j, y) in q.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        r
    };
    let e = |i: usize, j: usize| [a[i][j], -b[i][j]];
    let mut out = [0i128; 4];
    for (perm, sign) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)] {
        let term = mul(&mul(&e(0, perm[0]), &e(1, perm[1])), &e(2, perm[2]));
        for k in 0..4 {
            out[k] += sign * term[k];
        }
    }
    out
}

fn divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    let mut d = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            d.push(k);
            d.push(n / k);
        }
        k += 1;
    }
    d
}

/// Verdict by the rational root theorem: "degenerate" for a zero form or
/// a repeated root, "yes" iff all three roots are rational.
fn oracle_verdict(c: [i128; 4]) -> &'static str {
    let [c3, c2, c1, c0] = c;
    if c.iter().all(|&v| v == 0) {
        return "degenerate";
    }
    let disc =
        c2 * c2 * c1 * c1 - 4 * c3 * c1 * c1 * c1 - 4 * c2 * c2 * c2 * c0 - 27 * c3 * c3 * c0 * c0 + 18 * c3 * c2 * c1 * c0;
    if disc == 0 {
        return "degenerate";
    }
    // Zero leading or trailing coefficients are the roots at infinity and at 0;
    // the remaining roots are p/q with p | constant and q | lead.
    let nz: Vec<i128> = c.iter().copied().skip_while(|&v| v == 0).collect();
    let inner: Vec<i128> = nz.iter().rev().copied().skip_while(|&v| v == 0).collect();
    let mut count = 4 - inner.len();
    let (lead, constant) = (inner[inner.len() - 1], inner[0]);
    let mut roots = BTreeSet::new();
    for p in divisors(constant) {
        for q in divisors(lead) {
            for p in [p, -p] {
                if p != 0 && c3 * p * p * p + c2 * p * p * q + c1 * p * q * q + c0 * q * q * q == 0 {
                    roots.insert(Rational::new(p.into(), q.into()));
                }
            }
        }
    }
    count += roots.len();
    if count == 3 {
        "yes"
    } else {
        "no"
    }
}

fn to_i128(m: &Matrix<Fe>) -> [[i128; 3]; 3] {
    let mut out = [[0i128; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let r = m.get(i, j).to_rational().unwrap();
            *v = i128::try_from(r.to_integer()).unwrap();
        }
    }
    out
}

fn decision_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tally = std::collections::BTreeMap::new();
    for k in 0..300 {
        let p = match k % 3 {
            0 => random_pencil(&mut rng, 3),
            1 => {
                let (s, t) = distinct_diagonal(&mut rng, 3, 4, false);
                diagonal_pencil(&s, &t).transform(&random_invertible(&mut rng, 3, -3, 3))
            }
            _ => {
                // Small diagonal entries, often with a repeated root.
                let s = [rng.gen_range(-3..=3), rng.gen_range(-3..=3), 1];
                let t = [1, rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
                diagonal_pencil(&s, &t).transform(&random_invertible(&mut rng, 3, -3, 3))
            }
        };
        let want = oracle_verdict(oracle_det_form(&to_i128(p.a()), &to_i128(p.b())));
        let got = is_diagonalizable_over_q(&p).map_err(|e| format!("instance {k}: {e}"))?;
        if got.label() != want {
            return Err(format!("instance {k}: verdict {} but oracle says {want}: {}", got.label(), p.to_json()));
        }
        *tally.entry(want).or_insert(0) += 1;
    }
    for (s, t) in [([1, 1, 3], [1, 1, 1]), ([2, 4, 1], [1, 2, 5])] {
        let p = diagonal_pencil(&s, &t);
        if !matches!(is_diagonalizable_over_q(&p), Ok(Verdict::Degenerate)) {
            return Err(format!("repeated-root fixture {s:?}, {t:?} not degenerate"));
        }
    }
    Ok(format!("300 pencils agree with the oracle {tally:?}; repeated-root fixtures are degenerate"))
}

fn sqrt_two_extension() -> Outcome {
    let p = sqrt_two_pencil();
    let d = match diagonalize(&p).map_err(|e| e.to_string())? {
        Diagonalization::Exact(d) => d,
        Diagonalization::Numeric(_) => return Err("numeric fallback".into()),
    };
    if d.tower.describe() != ["t^2-2"] {
        return Err(format!("tower {:?}", d.tower.describe()));
    }
    let lift = |m: &Matrix<Fe>| m.map(|e| e.lift_to(&d.tower).unwrap());
    if !d.u.congruence(&lift(p.a())).is_diagonal() || !d.u.congruence(&lift(p.b())).is_diagonal() {
        return Err("off-diagonal entries survive".into());
    }
    Ok("exact over [t^2-2], off-diagonals identically zero".into())
}

fn syzygy_calibration() -> Outcome {
    let draw = |seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..10).map(|_| Quartic::random(&mut rng, -20, 20)).collect::<Vec<_>>()
    };
    let c = calibrate_syzygy(&draw(100)).map_err(|e| e.to_string())?;
    let again = calibrate_syzygy(&draw(200)).map_err(|e| e.to_string())?;
    if c != again {
        return Err("recalibration with a disjoint seed differs".into());
    }
    let failures = syzygy_sweep(&c, 300, 1000);
    if !failures.is_empty() {
        return Err(format!("{} of 1000 fresh quartics fail", failures.len()));
    }
    let shown: Vec<String> = c.iter().map(|r| r.to_string()).collect();
    Ok(format!("constants {shown:?} reproduced and verified on 1000 fresh quartics"))
}

fn double_adjugate() -> Outcome {
    let signs = observed_symdiag_signs(9, 100).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (s, t) = distinct_diagonal(&mut rng, 3, 6, true);
    let report = symdiag3_check(&diagonal_pencil(&s, &t)).map_err(|e| e.to_string())?;
    if !report.holds {
        return Err("fails on a plain diagonal pencil".into());
    }
    let fixture: Json = serde_json::from_str(include_str!("../fixtures/constants.json")).map_err(|e| e.to_string())?;
    let mut expected = constants_report(&CovariantConstants::gram(), &signs);
    expected["schema"] = json!("constants/v1");
    if fixture != expected {
        return Err("constants fixture disagrees with the computed report".into());
    }
    Ok(format!(
        "holds on 100 conjugated pencils; operand {}; signs {}",
        fixture["symdiag"]["operand"], fixture["symdiag"]["signs_observed"]
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1  MT sweep", mt_sweep),
        ("2  MT2 sweep", mt2_sweep),
        ("3  diagonal cubicovariant formula", diagonal_formula),
        ("4  decomposability", decomposability),
        ("5a bridge as printed", bridge_printed),
        ("5b corrected bridge and MT3 witnesses", bridge_and_equivalence),
        ("6  discriminant preservation", disc_preserving),
        ("7  diagonalizer round trip", round_trip),
        ("8  decision vs oracle", decision_vs_oracle),
        ("9  Q(sqrt 2) extension", sqrt_two_extension),
        ("10 syzygy calibration", syzygy_calibration),
        ("11 double-adjugate check", double_adjugate),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
