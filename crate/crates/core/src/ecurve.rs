//! The incidence curve `E = {(c, d) ∈ C × D : c ∈ T_d D}` as a form of
//! bidegree (2,2) on `ℙ¹ × ℙ¹`, its singularities and components, and the
//! involutions `σ`, `τ` and `ν = σ ∘ τ`.
//!
//! For parametrisations `φ_C`, `φ_D` the form is
//! `H(u, v) = Pol_D(φ_C(u), φ_D(v))`, so `H` vanishes exactly where
//! `φ_C(u)` is on the tangent of `D` at `φ_D(v)`. Everything is done
//! bihomogeneously; a point at infinity needs no special case.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};
use crate::poly::{roots_in_closure, BinaryForm};
use crate::projective::{Conic, ConicParametrization, P1Point, ProjPoint};

/// `s^i w^{2−i}` for `i = 0, 1, 2`.
fn monomials(p: &P1Point) -> [Elem; 3] {
    let (s, w) = (p.s(), p.w());
    [w.square(), s * w, s.square()]
}

/// Derivatives of the monomials in `s` and in `w`.
fn monomial_partials(p: &P1Point) -> ([Elem; 3], [Elem; 3]) {
    let (s, w) = (p.s(), p.w());
    let f = s.field();
    let two = f.from_i64(2);
    (
        [f.zero(), w.clone(), &two * s],
        [&two * w, s.clone(), f.zero()],
    )
}

fn dot3(a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// The other root of `q₂s² + q₁sw + q₀w²` given one root.
fn other_root(q: &[Elem; 3], root: &P1Point) -> Result<P1Point> {
    let (a, b, c) = (&q[2], &q[1], &q[0]);
    let (s0, w0) = (root.s(), root.w());
    if !w0.is_zero() {
        P1Point::new(-&(&(b * w0) + &(s0 * a)), a * w0)
    } else {
        P1Point::new(c.clone(), -b)
    }
    .map_err(|_| Error::Degenerate("a whole fibre lies on E".into()))
}

/// `Σ h[i][j] u^i u'^{2−i} v^j v'^{2−j}` on `ℙ¹ × ℙ¹`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiquadraticForm {
    h: [[Elem; 3]; 3],
}

impl fmt::Debug for BiquadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[")?;
        for (i, row) in self.h.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} {} {}", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

impl BiquadraticForm {
    pub fn new(h: [[Elem; 3]; 3]) -> Result<BiquadraticForm> {
        let field = h[0][0].field().clone();
        if let Some(bad) = h.iter().flatten().find(|c| *c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        if h.iter().flatten().all(Elem::is_zero) {
            return Err(Error::Degenerate("H vanishes identically".into()));
        }
        Ok(BiquadraticForm { h })
    }

    pub fn coeffs(&self) -> &[[Elem; 3]; 3] {
        &self.h
    }

    pub fn field(&self) -> &Field {
        self.h[0][0].field()
    }

    pub fn map(&self, emb: &Embedding) -> BiquadraticForm {
        BiquadraticForm {
            h: self.h.clone().map(|r| r.map(|c| emb.map(&c))),
        }
    }

    pub fn eval(&self, u: &P1Point, v: &P1Point) -> Elem {
        dot3(&self.fiber_over_u(u), &monomials(v))
    }

    pub fn contains(&self, p: &(P1Point, P1Point)) -> bool {
        self.eval(&p.0, &p.1).is_zero()
    }

    /// Coefficients of `v'^2, vv', v²` in `H(u, ·)`.
    pub fn fiber_over_u(&self, u: &P1Point) -> [Elem; 3] {
        let mu = monomials(u);
        std::array::from_fn(|j| {
            dot3(&mu, &[self.h[0][j].clone(), self.h[1][j].clone(), self.h[2][j].clone()])
        })
    }

    /// Coefficients of `u'^2, uu', u²` in `H(·, v)`.
    pub fn fiber_over_v(&self, v: &P1Point) -> [Elem; 3] {
        let mv = monomials(v);
        std::array::from_fn(|i| dot3(&self.h[i], &mv))
    }

    /// The four first partials `∂/∂u, ∂/∂u', ∂/∂v, ∂/∂v'` at a point.
    pub fn partials(&self, u: &P1Point, v: &P1Point) -> [Elem; 4] {
        let (du_s, du_w) = monomial_partials(u);
        let (dv_s, dv_w) = monomial_partials(v);
        let fu = self.fiber_over_v(v);
        let fv = self.fiber_over_u(u);
        [dot3(&fu, &du_s), dot3(&fu, &du_w), dot3(&fv, &dv_s), dot3(&fv, &dv_w)]
    }

    pub fn is_singular_at(&self, u: &P1Point, v: &P1Point) -> bool {
        self.eval(u, v).is_zero() && self.partials(u, v).iter().all(Elem::is_zero)
    }

    /// The `v`-coefficient of `H` as a binary quadratic in `u`.
    fn v_coefficient(&self, j: usize) -> BinaryForm {
        let coeffs = (0..3).map(|i| self.h[i][j].clone()).collect();
        BinaryForm::new(self.field(), 2, coeffs).expect("degree 2")
    }

    /// The discriminant of `H(u, ·)`, a binary quartic in `u`.
    pub fn discriminant_in_v(&self) -> BinaryForm {
        let (a0, a1, a2) = (self.v_coefficient(0), self.v_coefficient(1), self.v_coefficient(2));
        let four = self.field().from_i64(4);
        a1.mul(&a1).add(&a2.mul(&a0).scale(&-&four)).expect("degree 4")
    }

    /// `H(v, u)`.
    pub fn transposed(&self) -> BiquadraticForm {
        BiquadraticForm {
            h: std::array::from_fn(|i| std::array::from_fn(|j| self.h[j][i].clone())),
        }
    }

    /// Whether `self = λ·other` for some nonzero `λ`.
    pub fn is_proportional_to(&self, other: &BiquadraticForm) -> bool {
        let pairs: Vec<(&Elem, &Elem)> = self.h.iter().flatten().zip(other.h.iter().flatten()).collect();
        let Some((a, b)) = pairs.iter().find(|(a, _)| !a.is_zero()) else {
            return false;
        };
        if b.is_zero() {
            return false;
        }
        pairs.iter().all(|(x, y)| &(*x * *b) == &(*y * *a))
    }
}

/// A form of bidegree (1,1), `Σ k[i][j] u^i u'^{1−i} v^j v'^{1−j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm11 {
    pub k: [[Elem; 2]; 2],
}

impl BilinearForm11 {
    pub fn eval(&self, u: &P1Point, v: &P1Point) -> Elem {
        let mu = [u.w().clone(), u.s().clone()];
        let mv = [v.w().clone(), v.s().clone()];
        let mut acc = u.field().zero();
        for i in 0..2 {
            for j in 0..2 {
                acc = &acc + &(&self.k[i][j] * &(&mu[i] * &mv[j]));
            }
        }
        acc
    }

    pub fn mul(&self, other: &BilinearForm11) -> BiquadraticForm {
        let f = self.k[0][0].field();
        let mut h: [[Elem; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| f.zero()));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        h[i + k][j + l] = &h[i + k][j + l] + &(&self.k[i][j] * &other.k[k][l]);
                    }
                }
            }
        }
        BiquadraticForm { h }
    }
}

/// `E = E₁ ∪ E₂` over `embedding.target()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reducible {
    pub embedding: Embedding,
    pub factors: [BilinearForm11; 2],
    /// Whether the factors needed a quadratic extension.
    pub lifted: bool,
}

impl Reducible {
    /// Which components contain a point (given over the factors' field).
    pub fn components_of(&self, p: &(P1Point, P1Point)) -> [bool; 2] {
        [
            self.factors[0].eval(&p.0, &p.1).is_zero(),
            self.factors[1].eval(&p.0, &p.1).is_zero(),
        ]
    }
}

/// A set of points of `ℙ¹ × ℙ¹` over `embedding.target()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularSet {
    pub embedding: Embedding,
    pub points: Vec<(P1Point, P1Point)>,
}

/// `E` for `H = bu² − 2buv + (1 + tu + au²)v²`, the normal-form pair with
/// both parametrisations based at `[0:0:1]`.
pub fn build_e_normalized(t: &Elem, a: &Elem, b: &Elem) -> Result<BiquadraticForm> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("b must be nonzero".into()));
    }
    let f = t.field();
    let z = f.zero();
    BiquadraticForm::new([
        [z.clone(), z.clone(), f.one()],
        [z.clone(), -&(&f.from_i64(2) * b), t.clone()],
        [b.clone(), z, a.clone()],
    ])
}

/// `H(u, v) = Pol_D(φ_C(u), φ_D(v))`.
pub fn build_e(pc: &ConicParametrization, pd: &ConicParametrization) -> Result<BiquadraticForm> {
    let d = pd.conic();
    if pc.field() != pd.field() {
        return Err(Error::FieldMismatch(pc.field().to_string(), pd.field().to_string()));
    }
    if pc.field().characteristic() == 2 {
        return Err(Error::Unsupported("E needs odd characteristic".into()));
    }
    let (fc, fd) = (pc.forms(), pd.forms());
    BiquadraticForm::new(std::array::from_fn(|i| {
        std::array::from_fn(|j| d.polarization(&fc[i], &fd[j]))
    }))
}

/// Common zeros of `H` and its partials. They lie over repeated roots of
/// the discriminant in `u`, hence in at most a quadratic extension.
pub fn singular_points(h: &BiquadraticForm) -> Result<SingularSet> {
    if h.field().characteristic() == 2 {
        return Err(Error::Unsupported("E needs odd characteristic".into()));
    }
    let disc = h.discriminant_in_v();
    if disc.is_zero() {
        return Err(Error::Degenerate("every fibre of E is a double point".into()));
    }
    let repeated = disc.dehomogenized().repeated_part()?;
    let roots = roots_in_closure(&repeated, 2)?;
    let emb = roots.embedding.clone();
    let hh = h.map(&emb);
    let field = emb.target().clone();
    let mut candidates: Vec<P1Point> =
        roots.roots.iter().map(|(r, _)| P1Point::affine(r.clone())).collect();
    if disc.infinity_multiplicity() >= 2 {
        candidates.push(P1Point::infinity(&field));
    }
    let mut points = Vec::new();
    for u in candidates {
        let q = hh.fiber_over_u(&u);
        let v = if !q[2].is_zero() {
            P1Point::new(-&q[1], &field.from_i64(2) * &q[2])?
        } else if !q[1].is_zero() || !q[0].is_zero() {
            P1Point::infinity(&field)
        } else {
            return Err(Error::Degenerate("a whole fibre lies on E".into()));
        };
        if hh.is_singular_at(&u, &v) {
            points.push((u, v));
        }
    }
    points.sort();
    Ok(SingularSet {
        embedding: emb,
        points,
    })
}

/// The content of a form of bidegree (2,1), given as its `v` and `v'`
/// coefficients, and the (1,1) form left after removing it.
fn primitive_part(cv: &BinaryForm, cw: &BinaryForm) -> Result<BilinearForm11> {
    let g = cv.gcd(cw);
    let (pv, pw) = (cv.div_exact(&g)?, cw.div_exact(&g)?);
    if pv.degree() != 1 || pw.degree() != 1 {
        return Err(Error::Invariant("E contains a fibre of ℙ¹ × ℙ¹".into()));
    }
    Ok(BilinearForm11 {
        k: [[pw.coeff(0), pv.coeff(0)], [pw.coeff(1), pv.coeff(1)]],
    })
}

/// The two (1,1) components of `E` when it splits, possibly after one
/// quadratic lift; `None` when `E` is irreducible over the closure.
pub fn is_reducible(h: &BiquadraticForm) -> Result<Option<Reducible>> {
    if h.field().characteristic() == 2 {
        return Err(Error::Unsupported("E needs odd characteristic".into()));
    }
    let flipped = h.v_coefficient(2).is_zero();
    let work = if flipped {
        BiquadraticForm {
            h: std::array::from_fn(|i| std::array::from_fn(|j| h.h[i][2 - j].clone())),
        }
    } else {
        h.clone()
    };
    if work.v_coefficient(2).is_zero() {
        return Err(Error::Degenerate("E contains a fibre of ℙ¹ × ℙ¹".into()));
    }
    let disc = work.discriminant_in_v();
    if disc.is_zero() {
        return Err(Error::Degenerate("H is a perfect square".into()));
    }
    let lc = disc.dehomogenized().lead();
    let Some(g) = disc.scale(&lc.inv()?).square_root()? else {
        return Ok(None);
    };
    let (emb, root) = match lc.sqrt()? {
        Some(r) => (Embedding::identity(h.field()), r),
        None => {
            let (emb, image) = lc.lift_to_quadratic_extension()?;
            let r = image.sqrt()?.expect("square after lifting");
            (emb, r)
        }
    };
    let s = g.map(&emb).scale(&root);
    let w = work.map(&emb);
    let two = emb.target().from_i64(2);
    let cv = w.v_coefficient(2).scale(&two);
    let a1 = w.v_coefficient(1);
    let neg_s = s.scale(&-&emb.target().one());
    let f1 = primitive_part(&cv, &a1.add(&s)?)?;
    let f2 = primitive_part(&cv, &a1.add(&neg_s)?)?;
    let unflip = |f: BilinearForm11| -> BilinearForm11 {
        if flipped {
            BilinearForm11 {
                k: [
                    [f.k[0][1].clone(), f.k[0][0].clone()],
                    [f.k[1][1].clone(), f.k[1][0].clone()],
                ],
            }
        } else {
            f
        }
    };
    let factors = [unflip(f1), unflip(f2)];
    if !factors[0].mul(&factors[1]).is_proportional_to(&h.map(&emb)) {
        return Err(Error::Invariant("factors do not reassemble H".into()));
    }
    Ok(Some(Reducible {
        lifted: !emb.is_identity(),
        embedding: emb,
        factors,
    }))
}

fn require_on(h: &BiquadraticForm, p: &(P1Point, P1Point)) -> Result<()> {
    if h.contains(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("({}, {}) is not on E", p.0, p.1)))
    }
}

/// `σ(u, v) = (u, v')`: the other root of `H(u, ·)`.
pub fn sigma(h: &BiquadraticForm, p: &(P1Point, P1Point)) -> Result<(P1Point, P1Point)> {
    require_on(h, p)?;
    Ok((p.0.clone(), other_root(&h.fiber_over_u(&p.0), &p.1)?))
}

/// `τ(u, v) = (u', v)`: the other root of `H(·, v)`.
pub fn tau(h: &BiquadraticForm, p: &(P1Point, P1Point)) -> Result<(P1Point, P1Point)> {
    require_on(h, p)?;
    Ok((other_root(&h.fiber_over_v(&p.1), &p.0)?, p.1.clone()))
}

/// `ν = σ ∘ τ`.
pub fn nu(h: &BiquadraticForm, p: &(P1Point, P1Point)) -> Result<(P1Point, P1Point)> {
    sigma(h, &tau(h, p)?)
}

/// `ν⁻¹ = τ ∘ σ`.
pub fn nu_inverse(h: &BiquadraticForm, p: &(P1Point, P1Point)) -> Result<(P1Point, P1Point)> {
    tau(h, &sigma(h, p)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// Smooth of bidegree (2,2), genus one.
    Smooth,
    /// Irreducible with one node.
    Node,
    /// Irreducible with one ordinary cusp.
    Cusp,
    /// Two (1,1) components meeting transversally in two points.
    TwoComponentsTransversal,
    /// Two (1,1) components meeting in one point with multiplicity two.
    TwoComponentsTangent,
}

impl ShapeKind {
    pub fn tag(self) -> &'static str {
        match self {
            ShapeKind::Smooth => "smooth",
            ShapeKind::Node => "node",
            ShapeKind::Cusp => "cusp",
            ShapeKind::TwoComponentsTransversal => "two-components-transversal",
            ShapeKind::TwoComponentsTangent => "two-components-tangent",
        }
    }

    pub fn for_type(t: crate::projective::IntersectionType) -> ShapeKind {
        use crate::projective::IntersectionType::*;
        match t {
            Transversal => ShapeKind::Smooth,
            Simple => ShapeKind::Node,
            Osculating => ShapeKind::Cusp,
            Double => ShapeKind::TwoComponentsTransversal,
            Hyperosculating => ShapeKind::TwoComponentsTangent,
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECurveShape {
    pub kind: ShapeKind,
    pub singular: SingularSet,
    pub reducible: Option<Reducible>,
}

fn binomial(n: usize, k: usize) -> i64 {
    [[1, 0, 0], [1, 1, 0], [1, 2, 1]][n][k]
}

/// Taylor coefficients `c[k][l]` of `H` at `(u₀, v₀)` in an affine chart.
fn taylor(h: &BiquadraticForm, u: &P1Point, v: &P1Point) -> [[Elem; 3]; 3] {
    let f = h.field();
    // in the chart at infinity swap the roles of s and w
    let (u0, ui) = match u.affine_value() {
        Some(x) => (x, false),
        None => (f.zero(), true),
    };
    let (v0, vi) = match v.affine_value() {
        Some(x) => (x, false),
        None => (f.zero(), true),
    };
    let coeff = |i: usize, j: usize| -> Elem {
        let i = if ui { 2 - i } else { i };
        let j = if vi { 2 - j } else { j };
        h.h[i][j].clone()
    };
    std::array::from_fn(|k| {
        std::array::from_fn(|l| {
            let mut acc = f.zero();
            for i in k..3 {
                for j in l..3 {
                    let c = f.from_i64(binomial(i, k) * binomial(j, l));
                    let term = &(&coeff(i, j) * &c)
                        * &(&u0.pow((i - k) as u128) * &v0.pow((j - l) as u128));
                    acc = &acc + &term;
                }
            }
            acc
        })
    })
}

/// Node or ordinary cusp at a singular point, from the local quadratic part.
fn singularity_kind(h: &BiquadraticForm, u: &P1Point, v: &P1Point) -> Result<ShapeKind> {
    let c = taylor(h, u, v);
    let (q20, q11, q02) = (&c[2][0], &c[1][1], &c[0][2]);
    if q20.is_zero() && q11.is_zero() && q02.is_zero() {
        return Err(Error::Unsupported("singularity of multiplicity three".into()));
    }
    let f = h.field();
    let disc = &q11.square() - &(&(&f.from_i64(4) * q20) * q02);
    if !disc.is_zero() {
        return Ok(ShapeKind::Node);
    }
    let (x, y) = if !q20.is_zero() {
        (-q11, &f.from_i64(2) * q20)
    } else {
        (f.one(), f.zero())
    };
    // no x³ or y³ terms: H has degree two in each variable
    let cubic = &(&(&c[2][1] * &x.square()) * &y) + &(&(&c[1][2] * &x) * &y.square());
    if cubic.is_zero() {
        return Err(Error::Unsupported("cusp that is not ordinary".into()));
    }
    Ok(ShapeKind::Cusp)
}

pub fn shape_of_form(h: &BiquadraticForm) -> Result<ECurveShape> {
    let singular = singular_points(h)?;
    let reducible = is_reducible(h)?;
    let kind = match (&reducible, singular.points.len()) {
        (Some(_), 2) => ShapeKind::TwoComponentsTransversal,
        (Some(_), 1) => ShapeKind::TwoComponentsTangent,
        (None, 0) => ShapeKind::Smooth,
        (None, 1) => {
            let (u, v) = &singular.points[0];
            singularity_kind(&h.map(&singular.embedding), u, v)?
        }
        (r, n) => {
            return Err(Error::Invariant(format!(
                "E with {n} singular points (reducible: {})",
                r.is_some()
            )))
        }
    };
    Ok(ECurveShape {
        kind,
        singular,
        reducible,
    })
}

/// `E` for a pair of conics together with the parametrisations used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECurve {
    pc: ConicParametrization,
    pd: ConicParametrization,
    h: BiquadraticForm,
}

impl ECurve {
    /// Parametrisations based at the default points of `C` and `D`.
    pub fn new(c: &Conic, d: &Conic) -> Result<ECurve> {
        let pc = c.parametrize(&c.find_point(0)?)?;
        let pd = d.parametrize(&d.find_point(0)?)?;
        ECurve::from_parametrizations(pc, pd)
    }

    pub fn with_bases(c: &Conic, d: &Conic, bc: &ProjPoint, bd: &ProjPoint) -> Result<ECurve> {
        ECurve::from_parametrizations(c.parametrize(bc)?, d.parametrize(bd)?)
    }

    pub fn from_parametrizations(
        pc: ConicParametrization,
        pd: ConicParametrization,
    ) -> Result<ECurve> {
        if pc.conic() == pd.conic() {
            return Err(Error::InvalidArgument("conics must be distinct".into()));
        }
        let h = build_e(&pc, &pd)?;
        Ok(ECurve { pc, pd, h })
    }

    pub fn form(&self) -> &BiquadraticForm {
        &self.h
    }

    pub fn param_c(&self) -> &ConicParametrization {
        &self.pc
    }

    pub fn param_d(&self) -> &ConicParametrization {
        &self.pd
    }

    pub fn map(&self, emb: &Embedding) -> ECurve {
        ECurve {
            pc: self.pc.map(emb),
            pd: self.pd.map(emb),
            h: self.h.map(emb),
        }
    }

    /// Parameters of a pair `(c, d)` of points of `C × D`.
    pub fn to_params(&self, c: &ProjPoint, d: &ProjPoint) -> Result<(P1Point, P1Point)> {
        Ok((self.pc.parameter_of(c)?, self.pd.parameter_of(d)?))
    }

    pub fn to_points(&self, p: &(P1Point, P1Point)) -> (ProjPoint, ProjPoint) {
        (self.pc.point_at(&p.0), self.pd.point_at(&p.1))
    }

    pub fn shape(&self) -> Result<ECurveShape> {
        shape_of_form(&self.h)
    }
}

/// The shape of `E` for a pair of conics.
pub fn shape(c: &Conic, d: &Conic) -> Result<ECurveShape> {
    ECurve::new(c, d)?.shape()
}
