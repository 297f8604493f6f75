use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value as Json};

use super::{format_rational, rational_sqrt, Field, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Nested residue representation. At level 0 a value is a rational; at level
/// `k` it is a polynomial (low to high) in that level's generator whose
/// coefficients are level `k - 1` values, reduced modulo the minimal
/// polynomial and with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
enum Value {
    Rat(Rational),
    Ext(Vec<Value>),
}

#[derive(Debug)]
struct Level {
    name: String,
    /// Monic, low to high, length `degree + 1`, coefficients one level down.
    minpoly: Vec<Value>,
}

impl Level {
    fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

type Levels = [Arc<Level>];

/// A finite tower `Q ⊂ Q(r1) ⊂ Q(r1, r2) ⊂ …` of simple algebraic extensions.
#[derive(Clone, Default)]
pub struct FieldTower {
    levels: Option<Arc<Vec<Arc<Level>>>>,
}

impl FieldTower {
    pub fn rationals() -> Self {
        FieldTower { levels: None }
    }

    fn levels(&self) -> &Levels {
        match &self.levels {
            Some(l) => l.as_slice(),
            None => &[],
        }
    }

    fn from_levels(levels: &Levels) -> Self {
        if levels.is_empty() {
            FieldTower::rationals()
        } else {
            FieldTower { levels: Some(Arc::new(levels.to_vec())) }
        }
    }

    pub fn height(&self) -> usize {
        self.levels().len()
    }

    pub fn is_rationals(&self) -> bool {
        self.height() == 0
    }

    /// Degree of the tower over the rationals.
    pub fn degree(&self) -> usize {
        self.levels().iter().map(|l| l.degree()).product()
    }

    /// The tower truncated to its first `height` levels.
    pub fn truncate(&self, height: usize) -> Self {
        Self::from_levels(&self.levels()[..height.min(self.height())])
    }

    /// True when every level of `self` is (pointer-)identical to the
    /// corresponding level of `other`.
    pub fn is_prefix_of(&self, other: &FieldTower) -> bool {
        let (a, b) = (self.levels(), other.levels());
        a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| Arc::ptr_eq(x, y))
    }

    /// The generator adjoined at the top level.
    pub fn generator(&self) -> Option<FieldElement> {
        let k = self.height();
        if k == 0 {
            return None;
        }
        let one = lift(Value::Rat(Rational::one()), 0, k - 1);
        Some(FieldElement { tower: self.clone(), value: Value::Ext(vec![zero_at(k - 1), one]) })
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.levels().iter().map(|l| l.name.clone()).collect()
    }

    /// Minimal polynomials written in `t`, bottom level first, e.g. `["t^2-2"]`.
    pub fn describe(&self) -> Vec<String> {
        let levels = self.levels();
        (0..levels.len()).map(|k| fmt_poly(&levels[..k], &levels[k].minpoly, "t")).collect()
    }

    /// Adjoins a root of `p`, which must be irreducible of degree 2 or 3 over
    /// the top level. Returns the taller tower and the new generator.
    ///
    /// Irreducibility is certified by rational-root absence over the rationals
    /// and, for quadratics over an extension, by the norm of the discriminant
    /// not being a rational square.
    pub fn extend_by_root(&self, p: &UniPoly<FieldElement>) -> Result<(FieldTower, FieldElement)> {
        let deg = match p.degree() {
            Some(d) => d,
            None => return Err(Error::UnsupportedDegree(0)),
        };
        if deg == 1 {
            return Err(Error::NotIrreducible);
        }
        if !(2..=3).contains(&deg) {
            return Err(Error::UnsupportedDegree(deg));
        }
        let monic = p.monic();
        let mut coeffs = Vec::with_capacity(deg + 1);
        for c in monic.coeffs() {
            if !c.tower.is_prefix_of(self) {
                return Err(Error::TowerMismatch);
            }
            coeffs.push(c.lift_to(self)?);
        }
        self.certify_irreducible(&coeffs)?;
        let k = self.height();
        let level = Arc::new(Level { name: format!("r{}", k + 1), minpoly: coeffs.into_iter().map(|c| c.value).collect() });
        let mut levels = self.levels().to_vec();
        levels.push(level);
        let tower = FieldTower { levels: Some(Arc::new(levels)) };
        let root = tower.generator().expect("tower has a top level");
        Ok((tower, root))
    }

    fn certify_irreducible(&self, monic: &[FieldElement]) -> Result<()> {
        let deg = monic.len() - 1;
        if self.is_rationals() {
            let rp = UniPoly::new(monic.iter().map(|c| c.to_rational().unwrap()).collect());
            return if crate::roots::rational_roots(&rp).is_empty() { Ok(()) } else { Err(Error::NotIrreducible) };
        }
        if deg != 2 {
            return Err(Error::Uncertified);
        }
        let disc = monic[1].square() - &(FieldElement::from_i64(4) * &monic[0]);
        match square_status(self.levels(), &disc.value) {
            Some(true) => Err(Error::NotIrreducible),
            Some(false) => Ok(()),
            None => Err(Error::Uncertified),
        }
    }
}

/// Whether `v` is a square in the field described by `levels`; `None` when
/// that could not be decided.
fn square_status(levels: &Levels, v: &Value) -> Option<bool> {
    let k = levels.len();
    if is_zero(v) {
        return Some(true);
    }
    let c = match v {
        Value::Rat(r) => return Some(rational_sqrt(r).is_some()),
        Value::Ext(c) => c,
    };
    let sub = &levels[..k - 1];
    if c.len() == 1 {
        let x = &c[0];
        let top = &levels[k - 1];
        if top.degree() % 2 == 1 {
            // An odd-degree extension cannot contain a square root of a non-square.
            return square_status(sub, x);
        }
        // In K(θ) with θ² + pθ + q = 0, a square lying in K is y² or y²·δ.
        let m = &top.minpoly;
        let delta =
            sub_v(&mul_v(sub, &m[1], &m[1]), &mul_v(sub, &lift(Value::Rat(Rational::from_integer(4.into())), 0, k - 1), &m[0]));
        let a = square_status(sub, x);
        let b = square_status(sub, &mul_v(sub, x, &delta));
        return match (a, b) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        };
    }
    let element = FieldElement { tower: FieldTower::from_levels(levels), value: v.clone() };
    if rational_sqrt(&element.norm()).is_none() {
        Some(false)
    } else {
        None
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.height() == other.height() && self.is_prefix_of(other)
    }
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower{:?}", self.describe())
    }
}

/// An element of some [`FieldTower`]. Elements of a prefix tower are lifted
/// automatically when combined with elements of a taller one.
#[derive(Clone)]
pub struct FieldElement {
    tower: FieldTower,
    value: Value,
}

impl FieldElement {
    pub fn rational(r: Rational) -> Self {
        FieldElement { tower: FieldTower::rationals(), value: Value::Rat(r) }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// The rational value, if this element lies in the base field.
    pub fn to_rational(&self) -> Option<Rational> {
        let mut v = &self.value;
        loop {
            match v {
                Value::Rat(r) => return Some(r.clone()),
                Value::Ext(c) if c.is_empty() => return Some(Rational::zero()),
                Value::Ext(c) if c.len() == 1 => v = &c[0],
                Value::Ext(_) => return None,
            }
        }
    }

    /// Re-expresses the element in `tower`, which must extend its own.
    pub fn lift_to(&self, tower: &FieldTower) -> Result<Self> {
        if !self.tower.is_prefix_of(tower) {
            return Err(Error::TowerMismatch);
        }
        Ok(FieldElement { tower: tower.clone(), value: lift(self.value.clone(), self.tower.height(), tower.height()) })
    }

    /// Coefficients with respect to the top generator, as elements of the
    /// tower one level down. A rational element returns itself.
    pub fn coefficients(&self) -> Vec<FieldElement> {
        match &self.value {
            Value::Rat(_) => vec![self.clone()],
            Value::Ext(c) => {
                let sub = self.tower.truncate(self.tower.height() - 1);
                c.iter().map(|v| FieldElement { tower: sub.clone(), value: v.clone() }).collect()
            }
        }
    }

    /// Norm down to the rationals.
    pub fn norm(&self) -> Rational {
        let k = self.tower.height();
        if k == 0 {
            return self.to_rational().unwrap();
        }
        let levels = self.tower.levels();
        let d = levels[k - 1].degree();
        let sub = self.tower.truncate(k - 1);
        // Column j holds the coordinates of self * gen^j.
        let gen = self.tower.generator().unwrap();
        let mut acc = self.clone();
        let mut cols: Vec<Vec<FieldElement>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut col: Vec<FieldElement> = acc.coefficients();
            col.resize(d, FieldElement { tower: sub.clone(), value: zero_at(k - 1) });
            cols.push(col);
            acc = acc * &gen;
        }
        let m = Matrix::from_fn(d, d, |i, j| cols[j][i].clone());
        m.det().norm()
    }

    /// Deterministic total order: rationals by value first, then by
    /// representation from the top level down.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self.to_rational(), other.to_rational()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => {
                let (_, a, b) = unify(self, other).expect("compatible towers");
                cmp_value(&a, &b)
            }
        }
    }

    pub fn to_json(&self) -> Json {
        value_json(self.tower.levels(), &self.value)
    }
}

fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => x.cmp(y),
        (Value::Ext(x), Value::Ext(y)) => x.len().cmp(&y.len()).then_with(|| {
            x.iter().rev().zip(y.iter().rev()).map(|(p, q)| cmp_value(p, q)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        }),
        _ => unreachable!("values at different levels"),
    }
}

fn value_json(levels: &Levels, v: &Value) -> Json {
    match v {
        Value::Rat(r) => Json::String(format_rational(r)),
        Value::Ext(c) => {
            let k = levels.len();
            json!({
                "gen": levels[k - 1].name,
                "coeffs": c.iter().map(|x| value_json(&levels[..k - 1], x)).collect::<Vec<_>>(),
            })
        }
    }
}

fn zero_at(level: usize) -> Value {
    if level == 0 {
        Value::Rat(Rational::zero())
    } else {
        Value::Ext(Vec::new())
    }
}

fn is_zero(v: &Value) -> bool {
    match v {
        Value::Rat(r) => r.is_zero(),
        Value::Ext(c) => c.is_empty(),
    }
}

fn is_one(v: &Value) -> bool {
    match v {
        Value::Rat(r) => r.is_one(),
        Value::Ext(c) => c.len() == 1 && is_one(&c[0]),
    }
}

fn lift(mut v: Value, from: usize, to: usize) -> Value {
    for _ in from..to {
        v = if is_zero(&v) { Value::Ext(Vec::new()) } else { Value::Ext(vec![v]) };
    }
    v
}

fn trim(c: &mut Vec<Value>) {
    while c.last().is_some_and(is_zero) {
        c.pop();
    }
}

fn add_v(a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
        (Value::Ext(x), Value::Ext(y)) => {
            let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
            let mut out: Vec<Value> = long.clone();
            for (o, s) in out.iter_mut().zip(short) {
                *o = add_v(o, s);
            }
            trim(&mut out);
            Value::Ext(out)
        }
        _ => unreachable!("values at different levels"),
    }
}

fn neg_v(a: &Value) -> Value {
    match a {
        Value::Rat(x) => Value::Rat(-x),
        Value::Ext(c) => Value::Ext(c.iter().map(neg_v).collect()),
    }
}

fn sub_v(a: &Value, b: &Value) -> Value {
    add_v(a, &neg_v(b))
}

fn mul_v(levels: &Levels, a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
        (Value::Ext(x), Value::Ext(y)) => {
            let k = levels.len();
            let sub = &levels[..k - 1];
            let mut prod = poly_mul(sub, x, y);
            reduce(sub, &mut prod, &levels[k - 1].minpoly);
            Value::Ext(prod)
        }
        _ => unreachable!("values at different levels"),
    }
}

fn poly_mul(sub: &Levels, x: &[Value], y: &[Value]) -> Vec<Value> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero_at(sub.len()); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if is_zero(a) {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if is_zero(b) {
                continue;
            }
            out[i + j] = add_v(&out[i + j], &mul_v(sub, a, b));
        }
    }
    trim(&mut out);
    out
}

/// Reduces `p` in place modulo the monic polynomial `m`.
fn reduce(sub: &Levels, p: &mut Vec<Value>, m: &[Value]) {
    let d = m.len() - 1;
    while p.len() > d {
        let top = p.pop().unwrap();
        if is_zero(&top) {
            continue;
        }
        let shift = p.len() - d;
        for j in 0..d {
            p[shift + j] = sub_v(&p[shift + j], &mul_v(sub, &top, &m[j]));
        }
    }
    trim(p);
}

fn inv_v(levels: &Levels, a: &Value) -> Option<Value> {
    match a {
        Value::Rat(x) => {
            if x.is_zero() {
                None
            } else {
                Some(Value::Rat(x.recip()))
            }
        }
        Value::Ext(x) => {
            if x.is_empty() {
                return None;
            }
            let k = levels.len();
            let sub = &levels[..k - 1];
            // Extended Euclid: track s with s * a ≡ r (mod minpoly).
            let mut r0: Vec<Value> = levels[k - 1].minpoly.clone();
            let mut r1: Vec<Value> = x.clone();
            let mut s0: Vec<Value> = Vec::new();
            let mut s1: Vec<Value> = vec![lift(Value::Rat(Rational::one()), 0, k - 1)];
            while !r1.is_empty() {
                let (q, r) = poly_divrem(sub, &r0, &r1)?;
                let s2 = poly_sub(&s0, &poly_mul(sub, &q, &s1));
                r0 = std::mem::replace(&mut r1, r);
                s0 = std::mem::replace(&mut s1, s2);
            }
            if r0.len() != 1 {
                return None;
            }
            let c = inv_v(sub, &r0[0])?;
            let mut out: Vec<Value> = s0.iter().map(|s| mul_v(sub, s, &c)).collect();
            trim(&mut out);
            reduce(sub, &mut out, &levels[k - 1].minpoly);
            Some(Value::Ext(out))
        }
    }
}

fn poly_sub(x: &[Value], y: &[Value]) -> Vec<Value> {
    let n = x.len().max(y.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (x.get(i), y.get(i)) {
            (Some(a), Some(b)) => sub_v(a, b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => neg_v(b),
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

fn poly_divrem(sub: &Levels, a: &[Value], b: &[Value]) -> Option<(Vec<Value>, Vec<Value>)> {
    let lc_inv = inv_v(sub, b.last()?)?;
    let mut r: Vec<Value> = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return Some((Vec::new(), r));
    }
    let mut q = vec![zero_at(sub.len()); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let c = mul_v(sub, &top, &lc_inv);
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = sub_v(&r[shift + j], &mul_v(sub, &c, bj));
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    Some((q, r))
}

fn is_simple(s: &str) -> bool {
    !s[1..].contains(['+', '-'])
}

fn fmt_value(levels: &Levels, v: &Value) -> String {
    match v {
        Value::Rat(r) => format_rational(r),
        Value::Ext(c) => {
            let k = levels.len();
            fmt_poly(&levels[..k - 1], c, &levels[k - 1].name)
        }
    }
}

/// Formats a polynomial (low-to-high coefficients one level down) in `var`,
/// highest power first, without spaces.
fn fmt_poly(sub: &Levels, c: &[Value], var: &str) -> String {
    let mut out = String::new();
    for (i, coeff) in c.iter().enumerate().rev() {
        if is_zero(coeff) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let cs = fmt_value(sub, coeff);
        let term = if i == 0 {
            if is_simple(&cs) {
                cs
            } else {
                format!("({cs})")
            }
        } else if is_one(coeff) {
            mono
        } else if is_one(&neg_v(coeff)) {
            format!("-{mono}")
        } else if is_simple(&cs) {
            format!("{cs}*{mono}")
        } else {
            format!("({cs})*{mono}")
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn unify(a: &FieldElement, b: &FieldElement) -> Option<(FieldTower, Value, Value)> {
    let (ha, hb) = (a.tower.height(), b.tower.height());
    if ha == hb {
        if ha == 0 || a.tower.is_prefix_of(&b.tower) {
            return Some((a.tower.clone(), a.value.clone(), b.value.clone()));
        }
        return None;
    }
    if ha < hb && a.tower.is_prefix_of(&b.tower) {
        return Some((b.tower.clone(), lift(a.value.clone(), ha, hb), b.value.clone()));
    }
    if hb < ha && b.tower.is_prefix_of(&a.tower) {
        return Some((a.tower.clone(), a.value.clone(), lift(b.value.clone(), hb, ha)));
    }
    None
}

fn binop(a: &FieldElement, b: &FieldElement, op: impl FnOnce(&Levels, &Value, &Value) -> Value) -> FieldElement {
    if let (Value::Rat(_), Value::Rat(_)) = (&a.value, &b.value) {
        let value = op(&[], &a.value, &b.value);
        return FieldElement { tower: FieldTower::rationals(), value };
    }
    let (tower, x, y) = unify(a, b).expect("field elements from incompatible towers");
    let value = op(tower.levels(), &x, &y);
    FieldElement { tower, value }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match unify(self, other) {
            Some((_, x, y)) => x == y,
            None => false,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_value(self.tower.levels(), &self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $f:expr) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                binop(self, rhs, $f)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                binop(&self, rhs, $f)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                binop(&self, &rhs, $f)
            }
        }
    };
}

forward_binop!(Add, add, |_, x, y| add_v(x, y));
forward_binop!(Sub, sub, |_, x, y| sub_v(x, y));
forward_binop!(Mul, mul, mul_v);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: neg_v(&self.value), tower: self.tower }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: neg_v(&self.value), tower: self.tower.clone() }
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        FieldElement::rational(r)
    }
}

impl From<i64> for FieldElement {
    fn from(v: i64) -> Self {
        FieldElement::from_i64(v)
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        is_zero(&self.value)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::rational(Rational::one())
    }
    fn is_one(&self) -> bool {
        is_one(&self.value)
    }
}

impl Field for FieldElement {
    fn inv(&self) -> Option<Self> {
        inv_v(self.tower.levels(), &self.value).map(|value| FieldElement { tower: self.tower.clone(), value })
    }
    fn from_rational(r: &Rational) -> Self {
        FieldElement::rational(r.clone())
    }
    fn cheap_division(&self) -> bool {
        self.tower.is_rationals()
    }
}

impl FieldElement {
    /// Sign of a rational element; `None` for irrational ones.
    pub fn rational_signum(&self) -> Option<i32> {
        self.to_rational().map(|r| {
            if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            }
        })
    }
}
