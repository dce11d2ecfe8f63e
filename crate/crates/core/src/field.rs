//! Exact fields: prime fields, their extensions and `ℚ`, `ℚ(√d)`.
//!
//! A [`Field`] is a cheap handle (an `Arc`) and every [`Elem`] carries one,
//! so elements of different fields cannot be mixed silently. The operator
//! impls panic on a mismatch; the `checked_*` methods report it instead.
//!
//! Finite extension fields are always presented over their prime field as
//! `F_p[x]/(m)` with a monic irreducible `m`. Lifting a field one step up
//! the tower ([`Field::extension`]) picks a deterministic modulus and a
//! deterministic embedding, so two independent lifts of the same field land
//! in structurally equal fields with identical embeddings.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported characteristic (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime { p: u64 },
    /// `F_p[x]/(modulus)`, modulus monic and listed low-to-high.
    Extension { p: u64, modulus: Vec<u64> },
    Rational,
    /// `ℚ(√d)` for a non-square rational `d`.
    RationalQuadratic { d: BigRational },
}

struct FieldInner {
    kind: FieldKind,
    nonresidue: OnceLock<Repr>,
}

/// Handle to an exact field.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Residue(u64),
    Poly(Vec<u64>),
    Rat(BigRational),
    Quad(BigRational, BigRational),
}

/// An element of some [`Field`], always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    field: Field,
    repr: Repr,
}

// ---------------------------------------------------------------------------
// small helpers over F_p

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u128, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i64) as u64)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over F_p as raw residue vectors, used to build moduli.
mod fp_poly {
    use super::{inv_mod, mul_mod};

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mul_mod(r[top], lead_inv, p);
            if c != 0 {
                for j in 0..=dm {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p - mul_mod(c, m[j], p)) % p;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_rem(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_rem(&result, &b, m, p);
            }
            b = mul_rem(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        // x^{p^k} mod f, computed by repeated p-th powering
        let frob = |k: usize| {
            let mut h = x.clone();
            for _ in 0..k {
                h = pow_rem(&h, p as u128, f, p);
            }
            h
        };
        if sub(&frob(n), &x, p).iter().any(|&c| c != 0) {
            return false;
        }
        for r in super::prime_divisors(n) {
            let h = sub(&frob(n / r), &x, p);
            let g = gcd(f, &h, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    pub fn inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0 = m.to_vec();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let qs = mul(&q, &s1, p);
            let s2 = sub(&s0, &qs, p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p)?;
        let mut out: Vec<u64> = s0.iter().map(|&v| mul_mod(v, c, p)).collect();
        trim(&mut out);
        Some(rem(&out, m, p))
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(&mut prod);
        prod
    }

    fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db {
            let top = r.len() - 1;
            let c = mul_mod(r[top], lead_inv, p);
            q[top - db] = c;
            for j in 0..=db {
                let idx = top - db + j;
                r[idx] = (r[idx] + p - mul_mod(c, b[j], p)) % p;
            }
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }
}

/// Least quadratic non-residue modulo an odd prime.
fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&n| pow_mod(n, ((p - 1) / 2) as u128, p) == p - 1)
        .expect("odd primes have non-residues")
}

/// The deterministic irreducible modulus of degree `n` over `F_p`.
///
/// Degree two over an odd prime uses `x² − r` with `r` the least
/// non-residue; otherwise the first irreducible monic polynomial in
/// base-`p` digit order of the lower coefficients.
pub fn default_modulus(p: u64, n: usize) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(p, n)) {
        return m.clone();
    }
    let m = if p != 2 && n == 2 {
        vec![p - least_nonresidue(p), 0, 1]
    } else {
        let mut index: u128 = 1;
        loop {
            let mut coeffs = Vec::with_capacity(n + 1);
            let mut rest = index;
            for _ in 0..n {
                coeffs.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            coeffs.push(1);
            if coeffs[0] != 0 && fp_poly::is_irreducible(&coeffs, p) {
                break coeffs;
            }
            index += 1;
        }
    };
    cache.lock().unwrap().insert((p, n), m.clone());
    m
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Integer `k` with `r = k · square`, square factors removed by trial
/// division (a non-squarefree leftover is harmless, just not minimal).
fn square_class_representative(r: &BigRational) -> BigInt {
    let mut n: BigInt = r.numer() * r.denom();
    let negative = n.is_negative();
    n = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &d * &d <= n && d < limit {
        let mut count = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            count += 1;
        }
        if count % 2 == 1 {
            out *= &d;
        }
        d += 1;
    }
    out *= n;
    if negative {
        -out
    } else {
        out
    }
}

// ---------------------------------------------------------------------------
// Field

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            FieldKind::Prime { p } => write!(f, "Fp:{p}"),
            FieldKind::Extension { p, modulus } => {
                let coeffs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "Fq:{p}^{}:{}", modulus.len() - 1, coeffs.join(","))
            }
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::RationalQuadratic { d } => write!(f, "Qsqrt:{d}"),
        }
    }
}

fn intern(kind: FieldKind) -> Field {
    static INTERNED: OnceLock<Mutex<HashMap<FieldKind, Field>>> = OnceLock::new();
    let map = INTERNED.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap();
    guard
        .entry(kind.clone())
        .or_insert_with(|| {
            Field(Arc::new(FieldInner {
                kind,
                nonresidue: OnceLock::new(),
            }))
        })
        .clone()
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(intern(FieldKind::Prime { p }))
    }

    /// `F_p[x]/(modulus)`; the modulus is made monic and checked irreducible.
    pub fn extension_field(p: u64, modulus: &[u64]) -> Result<Field> {
        Field::prime(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        fp_poly::trim(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidArgument("modulus must have degree ≥ 1".into()));
        }
        let lead = inv_mod(*m.last().unwrap(), p).unwrap();
        for c in m.iter_mut() {
            *c = mul_mod(*c, lead, p);
        }
        if !fp_poly::is_irreducible(&m, p) {
            return Err(Error::InvalidArgument(format!(
                "modulus {m:?} is reducible over F_{p}"
            )));
        }
        if m.len() == 2 {
            return Field::prime(p);
        }
        Ok(intern(FieldKind::Extension { p, modulus: m }))
    }

    /// `F_{p^k}` with the default modulus.
    pub fn gf(p: u64, k: usize) -> Result<Field> {
        Field::prime(p)?;
        if k == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if k == 1 {
            return Field::prime(p);
        }
        Ok(intern(FieldKind::Extension {
            p,
            modulus: default_modulus(p, k),
        }))
    }

    pub fn rational() -> Field {
        intern(FieldKind::Rational)
    }

    pub fn rational_quadratic(d: BigRational) -> Result<Field> {
        if rational_sqrt(&d).is_some() {
            return Err(Error::InvalidArgument(format!("{d} is a square in Q")));
        }
        Ok(intern(FieldKind::RationalQuadratic { d }))
    }

    /// Parses `Fp:13`, `Fq:5^2[:m0,m1,m2]`, `F2k:3`, `Q`, `Qsqrt:2`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field spec {s:?}"));
        if s == "Q" {
            return Ok(Field::rational());
        }
        if let Some(rest) = s.strip_prefix("Qsqrt:") {
            let d: BigRational = rest.trim().parse().map_err(|_| bad())?;
            return Field::rational_quadratic(d);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.trim().parse().map_err(|_| bad())?;
            return Field::prime(p);
        }
        if let Some(rest) = s.strip_prefix("F2k:") {
            let k: usize = rest.trim().parse().map_err(|_| bad())?;
            return Field::gf(2, k);
        }
        if let Some(rest) = s.strip_prefix("Fq:") {
            let mut parts = rest.splitn(2, ':');
            let pk = parts.next().ok_or_else(bad)?;
            let (p, k) = pk.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            return match parts.next() {
                None => Field::gf(p, k),
                Some(m) => {
                    let coeffs: Vec<u64> = m
                        .split(',')
                        .map(|c| {
                            c.trim()
                                .parse::<i64>()
                                .map(|v| v.rem_euclid(p as i64) as u64)
                        })
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad())?;
                    let field = Field::extension_field(p, &coeffs)?;
                    if field.degree() != k {
                        return Err(Error::Parse(format!(
                            "modulus degree {} does not match exponent {k}",
                            field.degree()
                        )));
                    }
                    Ok(field)
                }
            };
        }
        Err(bad())
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// `0` for the rational kinds.
    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
            _ => 0,
        }
    }

    /// Degree over the prime field (or over `ℚ`).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Prime { .. } | FieldKind::Rational => 1,
            FieldKind::Extension { modulus, .. } => modulus.len() - 1,
            FieldKind::RationalQuadratic { .. } => 2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u128> {
        let p = self.characteristic();
        if p == 0 {
            return None;
        }
        Some((p as u128).pow(self.degree() as u32))
    }

    fn wrap(&self, repr: Repr) -> Elem {
        Elem {
            field: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &self.0.kind {
            FieldKind::Prime { p } => self.wrap(Repr::Residue(n.rem_euclid(*p as i64) as u64)),
            FieldKind::Extension { p, modulus } => {
                let mut v = vec![0u64; modulus.len() - 1];
                v[0] = n.rem_euclid(*p as i64) as u64;
                self.wrap(Repr::Poly(v))
            }
            FieldKind::Rational => self.wrap(Repr::Rat(BigRational::from_integer(n.into()))),
            FieldKind::RationalQuadratic { .. } => self.wrap(Repr::Quad(
                BigRational::from_integer(n.into()),
                BigRational::zero(),
            )),
        }
    }

    /// Image of a rational number; fails in positive characteristic when the
    /// denominator is divisible by `p`.
    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &self.0.kind {
            FieldKind::Rational => Ok(self.wrap(Repr::Rat(r.clone()))),
            FieldKind::RationalQuadratic { .. } => {
                Ok(self.wrap(Repr::Quad(r.clone(), BigRational::zero())))
            }
            _ => {
                let p = BigInt::from(self.characteristic());
                let n = r.numer().mod_floor(&p).to_i64().unwrap();
                let d = r.denom().mod_floor(&p).to_i64().unwrap();
                self.from_i64(n).checked_div(&self.from_i64(d))
            }
        }
    }

    /// `r + s·√d` in `ℚ(√d)`.
    pub fn quadratic_element(&self, r: BigRational, s: BigRational) -> Result<Elem> {
        match &self.0.kind {
            FieldKind::RationalQuadratic { .. } => Ok(self.wrap(Repr::Quad(r, s))),
            _ => Err(Error::Unsupported(format!("{self} is not of the form Q(sqrt d)"))),
        }
    }

    /// Element with the given coefficient vector (low-to-high) over `F_p`.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<Elem> {
        match &self.0.kind {
            FieldKind::Prime { p } => {
                if coeffs.len() > 1 && coeffs[1..].iter().any(|&c| c % p != 0) {
                    return Err(Error::InvalidArgument("too many coefficients".into()));
                }
                Ok(self.wrap(Repr::Residue(coeffs.first().copied().unwrap_or(0) % p)))
            }
            FieldKind::Extension { p, modulus } => {
                let k = modulus.len() - 1;
                if coeffs.len() > k && coeffs[k..].iter().any(|&c| c % p != 0) {
                    return Err(Error::InvalidArgument("too many coefficients".into()));
                }
                let mut v = vec![0u64; k];
                for (slot, c) in v.iter_mut().zip(coeffs) {
                    *slot = c % p;
                }
                Ok(self.wrap(Repr::Poly(v)))
            }
            _ => Err(Error::Unsupported("coefficient vectors need a finite field".into())),
        }
    }

    /// The class of `x` in `F_p[x]/(m)`; for `ℚ(√d)`, `√d` itself.
    pub fn generator(&self) -> Option<Elem> {
        match &self.0.kind {
            FieldKind::Extension { modulus, .. } => {
                let mut v = vec![0u64; modulus.len() - 1];
                v[1] = 1;
                Some(self.wrap(Repr::Poly(v)))
            }
            FieldKind::RationalQuadratic { .. } => Some(
                self.wrap(Repr::Quad(BigRational::zero(), BigRational::one())),
            ),
            _ => None,
        }
    }

    /// Finite fields: the `i`-th element in base-`p` digit order.
    pub fn element_from_index(&self, mut i: u128) -> Result<Elem> {
        let p = self.characteristic() as u128;
        if p == 0 {
            return Err(Error::Unsupported("enumeration needs a finite field".into()));
        }
        let mut coeffs = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            coeffs.push((i % p) as u64);
            i /= p;
        }
        self.from_coefficients(&coeffs)
    }

    /// All elements of a finite field in index order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported("enumeration needs a finite field".into()))?;
        (0..q).map(|i| self.element_from_index(i)).collect()
    }

    /// Uniform for finite fields; small-height rationals for char 0.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.0.kind {
            FieldKind::Prime { p } => self.wrap(Repr::Residue(rng.gen_range(0..*p))),
            FieldKind::Extension { p, modulus } => {
                let v = (0..modulus.len() - 1).map(|_| rng.gen_range(0..*p)).collect();
                self.wrap(Repr::Poly(v))
            }
            FieldKind::Rational => self.wrap(Repr::Rat(small_rational(rng))),
            FieldKind::RationalQuadratic { .. } => {
                self.wrap(Repr::Quad(small_rational(rng), small_rational(rng)))
            }
        }
    }

    /// Parses an element in the canonical rendering of this field.
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad element {s:?} for {self}"));
        let parse_rat = |t: &str| -> Result<BigRational> {
            if t.is_empty() || t == "+" {
                return Ok(BigRational::one());
            }
            if t == "-" {
                return Ok(-BigRational::one());
            }
            let t = t.strip_prefix('+').unwrap_or(t);
            t.parse::<BigRational>().map_err(|_| bad())
        };
        match &self.0.kind {
            FieldKind::Prime { .. } => self.from_rational(&parse_rat(&s)?),
            FieldKind::Extension { p, .. } => {
                let coeffs: Vec<u64> = s
                    .split(',')
                    .map(|c| c.parse::<i64>().map(|v| v.rem_euclid(*p as i64) as u64))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                self.from_coefficients(&coeffs)
            }
            FieldKind::Rational => Ok(self.wrap(Repr::Rat(parse_rat(&s)?))),
            FieldKind::RationalQuadratic { d } => {
                let Some(idx) = s.find("sqrt(") else {
                    return Ok(self.wrap(Repr::Quad(parse_rat(&s)?, BigRational::zero())));
                };
                let radicand = s[idx + 5..].strip_suffix(')').ok_or_else(bad)?;
                let radicand: BigRational = radicand.parse().map_err(|_| bad())?;
                if &radicand != d {
                    return Err(bad());
                }
                let prefix = s[..idx].strip_suffix('*').unwrap_or(&s[..idx]);
                let split = prefix
                    .char_indices()
                    .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
                    .map(|(i, _)| i)
                    .last();
                let (r, sc) = match split {
                    Some(i) => (parse_rat(&prefix[..i])?, parse_rat(&prefix[i..])?),
                    None => (BigRational::zero(), parse_rat(prefix)?),
                };
                Ok(self.wrap(Repr::Quad(r, sc)))
            }
        }
    }

    fn nonresidue(&self) -> &Repr {
        self.0.nonresidue.get_or_init(|| {
            let q = self.order().expect("finite field");
            (1..q)
                .map(|i| self.element_from_index(i).unwrap())
                .find(|e| !e.euler_is_square())
                .expect("odd-order fields have non-squares")
                .repr
        })
    }

    /// The next field up the tower: degree `degree` over this one.
    ///
    /// Finite fields only; `ℚ` lifts via [`Elem::lift_to_quadratic_extension`].
    pub fn extension(&self, degree: usize) -> Result<Embedding> {
        static CACHE: OnceLock<Mutex<HashMap<(FieldKind, usize), Embedding>>> = OnceLock::new();
        if !self.is_finite() {
            return Err(Error::Unsupported(
                "characteristic-0 fields lift through a chosen radicand".into(),
            ));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        if degree == 1 {
            return Ok(Embedding::identity(self));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (self.0.kind.clone(), degree);
        if let Some(e) = cache.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let p = self.characteristic();
        let target = Field::gf(p, self.degree() * degree)?;
        let image = match &self.0.kind {
            FieldKind::Prime { .. } => EmbedImage::Prime,
            FieldKind::Extension { modulus, .. } => {
                // the generator goes to the least root of its modulus
                let coeffs: Vec<Elem> = modulus
                    .iter()
                    .map(|&c| target.from_i64(c as i64))
                    .collect();
                let m = crate::poly::Poly::new(&target, coeffs);
                let roots = m.roots_in_field()?;
                let root = roots
                    .into_iter()
                    .map(|(r, _)| r)
                    .min()
                    .ok_or_else(|| Error::Invariant("modulus does not split".into()))?;
                EmbedImage::Generator(root)
            }
            _ => unreachable!(),
        };
        let emb = Embedding {
            source: self.clone(),
            target,
            image,
        };
        cache.lock().unwrap().insert(key, emb.clone());
        Ok(emb)
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=5);
    BigRational::new(n.into(), d.into())
}

// ---------------------------------------------------------------------------
// Embeddings

#[derive(Clone, Debug, PartialEq, Eq)]
enum EmbedImage {
    Identity,
    Prime,
    Generator(Elem),
    Rational,
}

/// A field embedding `source ↪ target` one step up the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: EmbedImage,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        Embedding {
            source: field.clone(),
            target: field.clone(),
            image: EmbedImage::Identity,
        }
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.image, EmbedImage::Identity)
    }

    /// Embeds `a`. Elements already in the target pass through unchanged.
    pub fn map(&self, a: &Elem) -> Elem {
        if a.field == self.target {
            return a.clone();
        }
        assert_eq!(a.field, self.source, "element is not in the embedding's source");
        match (&self.image, &a.repr) {
            (EmbedImage::Identity, _) => a.clone(),
            (EmbedImage::Prime, Repr::Residue(r)) => self.target.from_i64(*r as i64),
            (EmbedImage::Generator(g), Repr::Poly(v)) => {
                let mut acc = self.target.zero();
                for &c in v.iter().rev() {
                    acc = &(&acc * g) + &self.target.from_i64(c as i64);
                }
                acc
            }
            (EmbedImage::Rational, Repr::Rat(r)) => {
                self.target.wrap(Repr::Quad(r.clone(), BigRational::zero()))
            }
            _ => unreachable!("embedding image does not match source kind"),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Result<Embedding> {
        if self.target != next.source {
            return Err(Error::FieldMismatch(
                self.target.to_string(),
                next.source.to_string(),
            ));
        }
        if self.is_identity() {
            return Ok(next.clone());
        }
        if next.is_identity() {
            return Ok(self.clone());
        }
        let image = match &self.image {
            EmbedImage::Prime => EmbedImage::Prime,
            EmbedImage::Generator(g) => EmbedImage::Generator(next.map(g)),
            EmbedImage::Rational => {
                return Err(Error::ExtensionOverflow(
                    "only one quadratic step above Q is supported".into(),
                ))
            }
            EmbedImage::Identity => unreachable!(),
        };
        Ok(Embedding {
            source: self.source.clone(),
            target: next.target.clone(),
            image,
        })
    }
}

// ---------------------------------------------------------------------------
// Elem

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Residue(r) => write!(f, "{r}"),
            Repr::Poly(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Quad(r, s) => {
                let FieldKind::RationalQuadratic { d } = &self.field.0.kind else {
                    unreachable!()
                };
                if s.is_negative() {
                    write!(f, "{r}-{}*sqrt({d})", -s)
                } else {
                    write!(f, "{r}+{s}*sqrt({d})")
                }
            }
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elem {
    /// Canonical order: residue value, coefficient vector, then `(r, s)`.
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => a.cmp(b),
            (Repr::Poly(a), Repr::Poly(b)) => a.cmp(b),
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Quad(a, s), Repr::Quad(b, t)) => a.cmp(b).then_with(|| s.cmp(t)),
            _ => self.field.to_string().cmp(&other.field.to_string()),
        }
    }
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Residue(r) => *r == 0,
            Repr::Poly(v) => v.iter().all(|&c| c == 0),
            Repr::Rat(r) => r.is_zero(),
            Repr::Quad(r, s) => r.is_zero() && s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Residue(r) => *r == 1,
            Repr::Poly(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
            Repr::Rat(r) => r.is_one(),
            Repr::Quad(r, s) => r.is_one() && s.is_zero(),
        }
    }

    /// Residue for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(r) => Some(*r),
            _ => None,
        }
    }

    /// Coefficients over the prime field (length = degree).
    pub fn coefficients(&self) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Residue(r) => Some(vec![*r]),
            Repr::Poly(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// `(r, s)` with `self = r + s√d` (`s = 0` for `ℚ`).
    pub fn rational_parts(&self) -> Option<(BigRational, BigRational)> {
        match &self.repr {
            Repr::Rat(r) => Some((r.clone(), BigRational::zero())),
            Repr::Quad(r, s) => Some((r.clone(), s.clone())),
            _ => None,
        }
    }

    fn same_field(&self, other: &Elem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        let repr = match (&self.field.0.kind, &self.repr, &other.repr) {
            (FieldKind::Prime { p }, Repr::Residue(a), Repr::Residue(b)) => {
                Repr::Residue((a + b) % p)
            }
            (FieldKind::Extension { p, .. }, Repr::Poly(a), Repr::Poly(b)) => {
                Repr::Poly(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (_, Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (_, Repr::Quad(a, s), Repr::Quad(b, t)) => Repr::Quad(a + b, s + t),
            _ => unreachable!(),
        };
        Ok(self.field.wrap(repr))
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.checked_add(&other.neg_ref())?)
    }

    fn neg_ref(&self) -> Elem {
        let repr = match (&self.field.0.kind, &self.repr) {
            (FieldKind::Prime { p }, Repr::Residue(a)) => Repr::Residue((p - a) % p),
            (FieldKind::Extension { p, .. }, Repr::Poly(a)) => {
                Repr::Poly(a.iter().map(|x| (p - x) % p).collect())
            }
            (_, Repr::Rat(a)) => Repr::Rat(-a),
            (_, Repr::Quad(a, s)) => Repr::Quad(-a, -s),
            _ => unreachable!(),
        };
        self.field.wrap(repr)
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        let repr = match (&self.field.0.kind, &self.repr, &other.repr) {
            (FieldKind::Prime { p }, Repr::Residue(a), Repr::Residue(b)) => {
                Repr::Residue(mul_mod(*a, *b, *p))
            }
            (FieldKind::Extension { p, modulus }, Repr::Poly(a), Repr::Poly(b)) => {
                let mut r = fp_poly::mul_rem(a, b, modulus, *p);
                r.resize(modulus.len() - 1, 0);
                Repr::Poly(r)
            }
            (_, Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (FieldKind::RationalQuadratic { d }, Repr::Quad(a, s), Repr::Quad(b, t)) => {
                Repr::Quad(a * b + d * s * t, a * t + s * b)
            }
            _ => unreachable!(),
        };
        Ok(self.field.wrap(repr))
    }

    /// Multiplicative inverse; `a · inv(a) = 1`.
    pub fn inv(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match (&self.field.0.kind, &self.repr) {
            (FieldKind::Prime { p }, Repr::Residue(a)) => Repr::Residue(inv_mod(*a, *p).unwrap()),
            (FieldKind::Extension { p, modulus }, Repr::Poly(a)) => {
                let mut r = fp_poly::inverse(a, modulus, *p)
                    .ok_or_else(|| Error::Invariant("modulus is not irreducible".into()))?;
                r.resize(modulus.len() - 1, 0);
                Repr::Poly(r)
            }
            (_, Repr::Rat(a)) => Repr::Rat(a.recip()),
            (FieldKind::RationalQuadratic { d }, Repr::Quad(a, s)) => {
                let norm = a * a - d * s * s;
                Repr::Quad(a / &norm, -s / &norm)
            }
            _ => unreachable!(),
        };
        Ok(self.field.wrap(repr))
    }

    pub fn checked_div(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn square(&self) -> Elem {
        self * self
    }

    pub fn pow(&self, mut e: u128) -> Elem {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// `x ↦ x^p` (identity in characteristic 0).
    pub fn frobenius(&self) -> Elem {
        match self.field.characteristic() {
            0 => self.clone(),
            p => self.pow(p as u128),
        }
    }

    /// Inverse Frobenius `x ↦ x^{1/p}` on a finite field.
    pub fn pth_root(&self) -> Result<Elem> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::Unsupported("p-th roots need a finite field".into()));
        }
        let k = self.field.degree() as u32;
        Ok(self.pow((p as u128).pow(k - 1)))
    }

    fn euler_is_square(&self) -> bool {
        let q = self.field.order().unwrap();
        self.is_zero() || self.pow((q - 1) / 2).is_one()
    }

    /// Whether `self` is a square in its own field (char ≠ 2).
    pub fn is_square(&self) -> Result<bool> {
        Ok(self.sqrt()?.is_some())
    }

    /// A square root in the element's own field, if one exists.
    ///
    /// Finite fields return the root with the least canonical form; in
    /// characteristic 0 the root whose leading nonzero part is positive.
    pub fn sqrt(&self) -> Result<Option<Elem>> {
        let p = self.field.characteristic();
        if p == 2 {
            return Err(Error::Unsupported(
                "square roots in characteristic 2 are the inverse Frobenius; see char2".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let root = match &self.repr {
            Repr::Rat(r) => rational_sqrt(r).map(|s| self.field.wrap(Repr::Rat(s))),
            Repr::Quad(r, s) => self.quadratic_sqrt(r, s),
            _ => self.tonelli_shanks(),
        };
        Ok(root.map(|r| {
            let minus = -&r;
            let keep_r = if p == 0 {
                let (a, b) = r.rational_parts().unwrap();
                a.is_positive() || (a.is_zero() && b.is_positive())
            } else {
                r <= minus
            };
            if keep_r {
                r
            } else {
                minus
            }
        }))
    }

    fn quadratic_sqrt(&self, r: &BigRational, s: &BigRational) -> Option<Elem> {
        let FieldKind::RationalQuadratic { d } = &self.field.0.kind else {
            unreachable!()
        };
        if s.is_zero() {
            if let Some(x) = rational_sqrt(r) {
                return Some(self.field.wrap(Repr::Quad(x, BigRational::zero())));
            }
            return rational_sqrt(&(r / d)).map(|y| self.field.wrap(Repr::Quad(BigRational::zero(), y)));
        }
        // (x + y√d)² = r + s√d  ⟺  x² + d y² = r, 2xy = s
        let n = rational_sqrt(&(r * r - d * s * s))?;
        let two = BigRational::from_integer(2.into());
        for cand in [(r + &n) / &two, (r - &n) / &two] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = s / (&two * &x);
                let root = self.field.wrap(Repr::Quad(x, y));
                if &root.square() == self {
                    return Some(root);
                }
            }
        }
        None
    }

    fn tonelli_shanks(&self) -> Option<Elem> {
        if !self.euler_is_square() {
            return None;
        }
        let q = self.field.order().unwrap();
        let mut s = 0u32;
        let mut m = q - 1;
        while m % 2 == 0 {
            m /= 2;
            s += 1;
        }
        let z = self.field.wrap(self.field.nonresidue().clone());
        let mut x = self.pow((m + 1) / 2);
        let mut b = self.pow(m);
        let mut c = z.pow(m);
        let mut e = s;
        while !b.is_one() {
            let mut i = 0u32;
            let mut t = b.clone();
            while !t.is_one() {
                t = t.square();
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..(e - i - 1) {
                g = g.square();
            }
            x = &x * &g;
            c = g.square();
            b = &b * &c;
            e = i;
        }
        Some(x)
    }

    /// Adjoins a square root of this non-square: one quadratic step up.
    ///
    /// Returns the embedding into the new field and the image of `self`,
    /// whose square root now exists.
    pub fn lift_to_quadratic_extension(&self) -> Result<(Embedding, Elem)> {
        if self.sqrt()?.is_some() {
            return Err(Error::InvalidArgument(format!(
                "{self} is already a square in {}",
                self.field
            )));
        }
        match &self.field.0.kind {
            FieldKind::Prime { .. } | FieldKind::Extension { .. } => {
                let emb = self.field.extension(2)?;
                let image = emb.map(self);
                Ok((emb, image))
            }
            FieldKind::Rational => {
                let Repr::Rat(r) = &self.repr else { unreachable!() };
                let d = square_class_representative(r);
                let target = Field::rational_quadratic(BigRational::from_integer(d))?;
                let emb = Embedding {
                    source: self.field.clone(),
                    target,
                    image: EmbedImage::Rational,
                };
                let image = emb.map(self);
                Ok((emb, image))
            }
            FieldKind::RationalQuadratic { .. } => Err(Error::ExtensionOverflow(format!(
                "{self} has no square root in {}; only one quadratic step above Q is supported",
                self.field
            ))),
        }
    }

    /// Real value under `√d ↦ +√d` (characteristic 0 only).
    pub fn to_f64(&self) -> Option<f64> {
        match (&self.field.0.kind, &self.repr) {
            (_, Repr::Rat(r)) => r.to_f64(),
            (FieldKind::RationalQuadratic { d }, Repr::Quad(r, s)) => {
                let dv = d.to_f64()?;
                if dv < 0.0 {
                    return None;
                }
                Some(r.to_f64()? + s.to_f64()? * dv.sqrt())
            }
            _ => None,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
        impl $trait<Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.neg_ref()
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f = fp(13);
        assert_eq!(f.from_i64(7) + f.from_i64(9), f.from_i64(3));
        for a in f.elements().unwrap() {
            assert_eq!(&f.one() * &a, a);
        }
        assert_eq!(f.from_i64(2).inv().unwrap(), f.from_i64(7));
        assert_eq!(fp(7).one().inv().unwrap(), fp(7).one());
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = fp(13).one();
        let b = fp(7).one();
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn rational_quadratic_identities() {
        let k = Field::parse("Qsqrt:2").unwrap();
        let r2 = k.generator().unwrap();
        let a = &k.one() + &r2;
        let b = &k.one() - &r2;
        assert_eq!(&a * &b, k.from_i64(-1));
        // (1+√2)(−1+√2) = 1
        assert_eq!(a.inv().unwrap(), &r2 - &k.one());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(fp(13).from_i64(4).sqrt().unwrap(), Some(fp(13).from_i64(2)));
        assert_eq!(fp(5).from_i64(2).sqrt().unwrap(), None);
        assert_eq!(fp(7).from_i64(2).sqrt().unwrap(), Some(fp(7).from_i64(3)));
        let f2 = Field::gf(2, 3).unwrap();
        assert!(matches!(f2.one().sqrt(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sqrt_matches_exhaustive_search() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = fp(p);
            for a in f.elements().unwrap() {
                let brute: Vec<Elem> = f
                    .elements()
                    .unwrap()
                    .into_iter()
                    .filter(|r| &r.square() == &a)
                    .collect();
                match a.sqrt().unwrap() {
                    Some(r) => assert_eq!(Some(&r), brute.iter().min()),
                    None => assert!(brute.is_empty()),
                }
            }
        }
        let f = Field::gf(3, 2).unwrap();
        for a in f.elements().unwrap() {
            let has = f.elements().unwrap().iter().any(|r| r.square() == a);
            assert_eq!(a.sqrt().unwrap().is_some(), has, "{a}");
        }
    }

    #[test]
    fn lifting_examples() {
        let (emb, a) = fp(5).from_i64(2).lift_to_quadratic_extension().unwrap();
        assert_eq!(emb.target().order(), Some(25));
        assert!(a.sqrt().unwrap().is_some());

        let (emb, a) = fp(7).from_i64(3).lift_to_quadratic_extension().unwrap();
        assert_eq!(emb.target().order(), Some(49));
        let r = a.sqrt().unwrap().unwrap();
        assert_eq!(r.square(), a);

        let q = Field::rational();
        let (emb, a) = q.from_i64(2).lift_to_quadratic_extension().unwrap();
        assert_eq!(emb.target().to_string(), "Qsqrt:2");
        assert_eq!(a.sqrt().unwrap(), emb.target().generator());

        assert!(matches!(
            fp(13).from_i64(4).lift_to_quadratic_extension(),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rational_sqrt_in_quadratic_field() {
        let k = Field::parse("Qsqrt:2").unwrap();
        // (1 + √2)² = 3 + 2√2
        let a = k.parse_element("3+2*sqrt(2)").unwrap();
        assert_eq!(a.sqrt().unwrap(), Some(k.parse_element("1+1*sqrt(2)").unwrap()));
        // 3 is not a square in Q(√2)
        assert_eq!(k.from_i64(3).sqrt().unwrap(), None);
        assert!(matches!(
            k.from_i64(3).lift_to_quadratic_extension(),
            Err(Error::ExtensionOverflow(_))
        ));
    }

    #[test]
    fn rendering_round_trips() {
        for spec in ["Fp:13", "Fq:5^2:2,0,1", "Q", "Qsqrt:2", "Qsqrt:-3/7"] {
            let f = Field::parse(spec).unwrap();
            assert_eq!(f.to_string(), spec);
        }
        assert_eq!(Field::parse("F2k:3").unwrap().to_string(), "Fq:2^3:1,1,0,1");
        let k = Field::parse("Qsqrt:2").unwrap();
        let e = k.parse_element("-1/2-3*sqrt(2)").unwrap();
        assert_eq!(e.to_string(), "-1/2-3*sqrt(2)");
        assert_eq!(k.parse_element(&e.to_string()).unwrap(), e);
        let f = Field::parse("Fq:5^2:2,0,1").unwrap();
        let e = f.parse_element("3,4").unwrap();
        assert_eq!(e.to_string(), "3,4");
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x² + 1 = (x + 2)(x + 3) over F_5
        assert!(Field::parse("Fq:5^2:1,0,1").is_err());
        assert!(Field::prime(15).is_err());
    }

    #[test]
    fn tower_embedding_is_a_homomorphism() {
        let base = Field::gf(3, 2).unwrap();
        let emb = base.extension(2).unwrap();
        assert_eq!(emb.target().order(), Some(81));
        let elems = base.elements().unwrap();
        for a in &elems {
            for b in &elems {
                assert_eq!(emb.map(&(a * b)), &emb.map(a) * &emb.map(b));
                assert_eq!(emb.map(&(a + b)), &emb.map(a) + &emb.map(b));
            }
        }
        // deterministic: lifting twice yields the same field and image
        let again = base.extension(2).unwrap();
        assert_eq!(emb, again);
    }
}
