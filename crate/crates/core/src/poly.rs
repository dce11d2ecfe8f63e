//! Univariate polynomials over any [`Field`], with factorisation over finite
//! fields and root finding in a bounded extension.
//!
//! Binary forms (homogeneous polynomials in `(s : w)` of a declared degree)
//! live here too: a form of degree `n` is stored as its dehomogenisation in
//! `s`, and the missing top degree is the multiplicity of the root at
//! infinity `(1 : 0)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};

/// Default cap on the extension degree used for roots of binary quartics.
pub const DEFAULT_EXTENSION_CAP: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    /// Lowest degree first; no trailing zeros.
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Poly[{}]", parts.join("; "))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Irreducible factors with multiplicities, times a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let field = self.unit.field().clone();
        let mut acc = Poly::constant(&field, self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Roots of a polynomial or binary form, all in one common field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootsWithMultiplicity {
    /// Embedding from the polynomial's field into the field of the roots.
    pub embedding: Embedding,
    /// Finite roots in canonical order.
    pub roots: Vec<(Elem, u32)>,
    /// Multiplicity of `(1 : 0)` for binary forms; zero for polynomials.
    pub at_infinity: u32,
}

impl RootsWithMultiplicity {
    pub fn field(&self) -> &Field {
        self.embedding.target()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum::<u32>() + self.at_infinity
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        assert!(
            coeffs.iter().all(|c| c.field() == field),
            "polynomial coefficients must share one field"
        );
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// From small integers, lowest degree first.
    pub fn from_i64(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `x − r`.
    pub fn linear_root(r: &Elem) -> Poly {
        let field = r.field();
        Poly::new(field, vec![-r, field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().unwrap())
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.lead().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &lead_inv;
            if !c.is_zero() {
                for j in 0..=dd {
                    r[i - dd + j] = &r[i - dd + j] - &(&c * &d.coeffs[j]);
                }
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{d:?} does not divide {self:?}")));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut result = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(result)
    }

    pub fn map(&self, emb: &Embedding) -> Poly {
        Poly::new(emb.target(), self.coeffs.iter().map(|c| emb.map(c)).collect())
    }

    /// `g` with `g(x)^p = f(x)`, for `f` whose exponents are multiples of `p`.
    fn pth_root(&self) -> Result<Poly> {
        let p = self.field.characteristic() as usize;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                coeffs.push(c.pth_root()?);
            } else if !c.is_zero() {
                return Err(Error::Invariant("not a p-th power".into()));
            }
        }
        Ok(Poly::new(&self.field, coeffs))
    }

    /// Squarefree decomposition of the monic associate: pairs `(g, m)` with
    /// `f = lead · Π g^m`, each `g` squarefree.
    ///
    /// In characteristic `p` a vanishing derivative is handled by extracting
    /// a `p`-th root. Entries are not merged, so in characteristic `p` the
    /// same squarefree factor may appear twice with different multiplicities.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        let f = self.monic();
        let mut out = Vec::new();
        let c0 = f.gcd(&f.derivative());
        let mut c = if c0.is_zero() { f.clone() } else { c0 };
        let mut w = f.div_exact(&c)?;
        let mut i = 1u32;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y)?;
            if !fac.is_constant() {
                out.push((fac, i));
            }
            c = c.div_exact(&y)?;
            w = y;
            i += 1;
        }
        if !c.is_constant() {
            let p = self.field.characteristic() as u32;
            if p == 0 {
                return Err(Error::Invariant("squarefree decomposition stalled".into()));
            }
            for (g, m) in c.pth_root()?.squarefree_decomposition()? {
                out.push((g, m * p));
            }
        }
        Ok(out)
    }

    /// Product of the distinct monic factors of multiplicity at least two.
    pub fn repeated_part(&self) -> Result<Poly> {
        let parts = if self.field.is_finite() {
            self.factor_over_finite_field(0)?.factors
        } else {
            self.squarefree_decomposition()?
        };
        Ok(parts
            .iter()
            .filter(|(_, m)| *m >= 2)
            .fold(Poly::one(&self.field), |acc, (g, _)| acc.mul(g)))
    }

    /// Irreducible factorisation over a finite field.
    ///
    /// Factors are monic, merged and sorted; the result does not depend on
    /// `seed`, only the internal splitting path does.
    pub fn factor_over_finite_field(&self, seed: u64) -> Result<Factorization> {
        if !self.field.is_finite() {
            return Err(Error::Unsupported("factorisation needs a finite field".into()));
        }
        if self.is_zero() {
            return Err(Error::InvalidArgument("cannot factor zero".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut irreducibles: Vec<(Poly, u32)> = Vec::new();
        for (g, m) in self.squarefree_decomposition()? {
            for (h, d) in g.distinct_degree()? {
                for ir in h.equal_degree(d, &mut rng)? {
                    match irreducibles.iter_mut().find(|(f, _)| *f == ir) {
                        Some(entry) => entry.1 += m,
                        None => irreducibles.push((ir, m)),
                    }
                }
            }
        }
        irreducibles.sort();
        Ok(Factorization {
            unit: self.lead(),
            factors: irreducibles,
        })
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Result<Vec<(Poly, usize)>> {
        let q = self.field.order().unwrap();
        let x = Poly::x(&self.field);
        let mut out = Vec::new();
        let mut rest = self.clone();
        let mut h = x.rem(&rest)?;
        let mut d = 1;
        while rest.deg_or_zero() >= 2 * d {
            h = h.pow_mod(q, &rest)?;
            let g = rest.gcd(&h.sub(&x));
            if !g.is_constant() {
                rest = rest.div_exact(&g)?;
                h = h.rem(&rest)?;
                out.push((g, d));
            }
            d += 1;
        }
        if !rest.is_constant() {
            let deg = rest.deg_or_zero();
            out.push((rest, deg));
        }
        Ok(out)
    }

    /// Cantor–Zassenhaus splitting into irreducible factors of degree `d`.
    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
        let n = self.deg_or_zero();
        if n == d {
            return Ok(vec![self.clone()]);
        }
        let q = self.field.order().unwrap();
        let p = self.field.characteristic();
        let qd = q.checked_pow(d as u32).ok_or_else(|| {
            Error::ExtensionOverflow(format!("field of order {q}^{d} is too large"))
        })?;
        loop {
            let a = Poly::new(
                &self.field,
                (0..n).map(|_| self.field.random(rng)).collect(),
            );
            if a.is_constant() {
                continue;
            }
            let b = if p == 2 {
                // absolute trace from F_{q^d} down to F_2
                let steps = (self.field.degree() * d) as u32;
                let mut t = a.rem(self)?;
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = t.mul(&t).rem(self)?;
                    acc = acc.add(&t);
                }
                acc
            } else {
                a.pow_mod((qd - 1) / 2, self)?.sub(&Poly::one(&self.field))
            };
            let g = self.gcd(&b);
            let dg = g.deg_or_zero();
            if dg > 0 && dg < n {
                let mut out = g.equal_degree(d, rng)?;
                out.extend(self.div_exact(&g)?.monic().equal_degree(d, rng)?);
                return Ok(out);
            }
        }
    }

    /// Roots lying in the polynomial's own field (finite fields only).
    pub fn roots_in_field(&self) -> Result<Vec<(Elem, u32)>> {
        let fac = self.factor_over_finite_field(0)?;
        let mut roots: Vec<(Elem, u32)> = fac
            .factors
            .iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, m)| (-&g.coeff(0), *m))
            .collect();
        roots.sort();
        Ok(roots)
    }

    /// `g` with `g² = f`, if one exists over this field (char ≠ 2).
    pub fn square_root(&self) -> Result<Option<Poly>> {
        if self.field.characteristic() == 2 {
            return Err(Error::Unsupported("square roots of polynomials in char 2".into()));
        }
        let Some(deg) = self.degree() else {
            return Ok(Some(self.clone()));
        };
        if deg % 2 == 1 {
            return Ok(None);
        }
        let n = deg / 2;
        let Some(top) = self.lead().sqrt()? else {
            return Ok(None);
        };
        let two_top_inv = (&top + &top).inv()?;
        let mut g = vec![self.field.zero(); n + 1];
        g[n] = top;
        for k in (0..n).rev() {
            let mut acc = self.coeff(n + k);
            for i in (k + 1)..=n {
                let j = n + k - i;
                if j > k && j <= n {
                    acc = &acc - &(&g[i] * &g[j]);
                }
            }
            g[k] = &acc * &two_top_inv;
        }
        let g = Poly::new(&self.field, g);
        Ok((g.mul(&g) == *self).then_some(g))
    }
}

/// Roots of `f` in the smallest extension of degree at most `cap` that
/// splits it.
///
/// Over `ℚ` and `ℚ(√d)` only rational-root search and the quadratic formula
/// are available, within at most one quadratic step above `ℚ`.
pub fn roots_in_closure(f: &Poly, cap: usize) -> Result<RootsWithMultiplicity> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial has every root".into()));
    }
    if f.field().is_finite() {
        finite_roots(f, cap)
    } else {
        char0_roots(f)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / a.gcd(&b) * b
}

fn finite_roots(f: &Poly, cap: usize) -> Result<RootsWithMultiplicity> {
    let fac = f.factor_over_finite_field(0)?;
    let mut degree = 1;
    for (g, _) in &fac.factors {
        degree = lcm(degree, g.deg_or_zero());
    }
    if degree > cap {
        let worst = fac
            .factors
            .iter()
            .max_by_key(|(g, _)| g.deg_or_zero())
            .map(|(g, _)| format!("{g:?}"))
            .unwrap_or_default();
        return Err(Error::ExtensionOverflow(format!(
            "irreducible factor {worst} needs extension degree {degree} > {cap}"
        )));
    }
    let embedding = f.field().extension(degree)?;
    let mut roots = Vec::new();
    for (g, m) in &fac.factors {
        let lifted = g.map(&embedding);
        for (r, k) in lifted.roots_in_field()? {
            roots.push((r, k * m));
        }
    }
    roots.sort();
    Ok(RootsWithMultiplicity {
        embedding,
        roots,
        at_infinity: 0,
    })
}

/// Rational roots of a polynomial over `ℚ` by the rational root theorem.
fn rational_roots(f: &Poly) -> Result<Vec<BigRational>> {
    let mut denom_lcm = BigInt::one();
    let parts: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| c.rational_parts().unwrap().0)
        .collect();
    for c in &parts {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = parts
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let mut start = 0;
    while ints[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        roots.push(BigRational::zero());
    }
    let a0 = ints[start].abs();
    let an = ints.last().unwrap().abs();
    let divisors = |n: &BigInt| -> Result<Vec<BigInt>> {
        let v = n.to_u64().filter(|&v| v <= 1_000_000_000_000).ok_or_else(|| {
            Error::ExtensionOverflow("coefficients too large for rational root search".into())
        })?;
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= v {
            if v % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(v / d));
            }
            d += 1;
        }
        Ok(out)
    };
    let field = f.field();
    for u in divisors(&a0)? {
        for v in divisors(&an)? {
            for sign in [1i32, -1] {
                let r = BigRational::new(BigInt::from(sign) * &u, v.clone());
                if roots.contains(&r) {
                    continue;
                }
                if f.eval(&field.from_rational(&r)?).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Ok(roots)
}

fn char0_roots(f: &Poly) -> Result<RootsWithMultiplicity> {
    let field = f.field().clone();
    let mut found: Vec<(Elem, u32)> = Vec::new();
    // quadratics whose discriminant needs a square root outside `field`
    let mut pending: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in f.squarefree_decomposition()? {
        let mut rest = g;
        if rest.deg_or_zero() > 2 {
            if field.degree() != 1 {
                return Err(Error::ExtensionOverflow(format!(
                    "cannot split {rest:?} over {field}"
                )));
            }
            for r in rational_roots(&rest)? {
                let root = field.from_rational(&r)?;
                rest = rest.div_exact(&Poly::linear_root(&root))?;
                found.push((root, m));
            }
        }
        match rest.deg_or_zero() {
            0 => {}
            1 => found.push((-&rest.monic().coeff(0), m)),
            2 => pending.push((rest.monic(), m)),
            _ => {
                return Err(Error::ExtensionOverflow(format!(
                    "irreducible factor {rest:?} of degree > 2 over {field}"
                )))
            }
        }
    }
    let mut embedding = Embedding::identity(&field);
    for (g, _) in &pending {
        let disc = &g.coeff(1).square() - &(&field.from_i64(4) * &g.coeff(0));
        let image = embedding.map(&disc);
        if image.sqrt()?.is_none() {
            if !embedding.is_identity() {
                return Err(Error::ExtensionOverflow(format!(
                    "roots need two different quadratic extensions of {field}"
                )));
            }
            embedding = disc.lift_to_quadratic_extension()?.0;
        }
    }
    let mut roots: Vec<(Elem, u32)> = found.iter().map(|(r, m)| (embedding.map(r), *m)).collect();
    let target = embedding.target().clone();
    for (g, m) in pending {
        let b = embedding.map(&g.coeff(1));
        let c = embedding.map(&g.coeff(0));
        let disc = &b.square() - &(&target.from_i64(4) * &c);
        let s = disc.sqrt()?.expect("lifted above");
        let two = target.from_i64(2);
        roots.push((&(&-&b + &s) / &two, m));
        roots.push((&(&-&b - &s) / &two, m));
    }
    roots.sort();
    Ok(RootsWithMultiplicity {
        embedding,
        roots,
        at_infinity: 0,
    })
}

/// A binary form of fixed degree in `(s : w)`, `Σ cᵢ sⁱ w^{n−i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    poly: Poly,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `sⁱ w^{degree−i}`.
    pub fn new(field: &Field, degree: usize, coeffs: Vec<Elem>) -> Result<BinaryForm> {
        let poly = Poly::new(field, coeffs);
        if poly.degree().is_some_and(|d| d > degree) {
            return Err(Error::InvalidArgument("too many coefficients for the degree".into()));
        }
        Ok(BinaryForm { degree, poly })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn dehomogenized(&self) -> &Poly {
        &self.poly
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.poly.coeff(i)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, s: &Elem, w: &Elem) -> Elem {
        let mut acc = self.field().zero();
        for i in 0..=self.degree {
            let term = &self.coeff(i) * &(&s.pow(i as u128) * &w.pow((self.degree - i) as u128));
            acc = &acc + &term;
        }
        acc
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm {
            degree: self.degree + other.degree,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree != other.degree {
            return Err(Error::InvalidArgument("adding forms of different degree".into()));
        }
        Ok(BinaryForm {
            degree: self.degree,
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn scale(&self, c: &Elem) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            poly: self.poly.scale(c),
        }
    }

    pub fn map(&self, emb: &Embedding) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            poly: self.poly.map(emb),
        }
    }

    /// The monic greatest common divisor as a binary form.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.poly.gcd(&other.poly);
        let inf = self.infinity_multiplicity().min(other.infinity_multiplicity());
        BinaryForm {
            degree: g.deg_or_zero() + inf as usize,
            poly: g,
        }
    }

    pub fn div_exact(&self, d: &BinaryForm) -> Result<BinaryForm> {
        let q = self.poly.div_exact(&d.poly)?;
        let degree = self
            .degree
            .checked_sub(d.degree)
            .filter(|&n| q.degree().is_none_or(|k| k <= n))
            .ok_or_else(|| Error::Invariant("binary form does not divide".into()))?;
        Ok(BinaryForm { degree, poly: q })
    }

    /// Multiplicity of the root `(1 : 0)`.
    pub fn infinity_multiplicity(&self) -> u32 {
        (self.degree - self.poly.deg_or_zero()) as u32
    }

    /// Root multiplicities (sorted descending), computed without locating
    /// the roots; they sum to the degree.
    pub fn multiplicities(&self) -> Result<Vec<u32>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("the zero form has no root multiset".into()));
        }
        let mut out = Vec::new();
        if self.field().is_finite() {
            for (g, m) in self.poly.factor_over_finite_field(0)?.factors {
                out.extend(std::iter::repeat(m).take(g.deg_or_zero()));
            }
        } else {
            for (g, m) in self.poly.squarefree_decomposition()? {
                out.extend(std::iter::repeat(m).take(g.deg_or_zero()));
            }
        }
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            out.push(inf);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    /// Roots as points of `ℙ¹`: finite roots `(r : 1)` plus `(1 : 0)`.
    pub fn roots_in_closure(&self, cap: usize) -> Result<RootsWithMultiplicity> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("the zero form vanishes everywhere".into()));
        }
        let mut roots = if self.poly.is_constant() {
            RootsWithMultiplicity {
                embedding: Embedding::identity(self.field()),
                roots: Vec::new(),
                at_infinity: 0,
            }
        } else {
            roots_in_closure(&self.poly, cap)?
        };
        roots.at_infinity = self.infinity_multiplicity();
        Ok(roots)
    }

    /// `g` with `g² = self` as binary forms, if one exists over this field.
    pub fn square_root(&self) -> Result<Option<BinaryForm>> {
        if self.degree % 2 == 1 {
            return Ok(None);
        }
        if self.is_zero() {
            return Ok(Some(BinaryForm {
                degree: self.degree / 2,
                poly: self.poly.clone(),
            }));
        }
        if self.infinity_multiplicity() % 2 == 1 {
            return Ok(None);
        }
        Ok(self.poly.square_root()?.map(|g| BinaryForm {
            degree: self.degree / 2,
            poly: g,
        }))
    }
}
