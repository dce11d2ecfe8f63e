//! The projective plane over an exact field.
//!
//! Points and lines are stored in canonical scale (first nonzero coordinate
//! equal to one), so `==` is projective equality. A [`ProjTransform`] acts
//! on points as a matrix on column vectors; lines move by the inverse
//! transpose and conics by pullback through the inverse.

mod conic;
mod pair;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};

pub use conic::{Conic, ConicParametrization, LineConicIntersection};
pub use pair::{
    classify, classify_detailed, classify_normalized, delta, intersect_conics,
    intersection_multiplicities, is_tangency_point, normalize_tangent_pair, tangency_points,
    Classification, ConicIntersection, IntersectionType, NormalizedPair, PointSet,
};

pub type Vec3 = [Elem; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> Elem {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// Determinant of the matrix with columns `a, b, c`.
pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> Elem {
    dot(a, &cross(b, c))
}

pub(crate) fn scale3(c: &Elem, v: &Vec3) -> Vec3 {
    [c * &v[0], c * &v[1], c * &v[2]]
}

pub(crate) fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub(crate) fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub(crate) fn is_zero3(v: &Vec3) -> bool {
    v.iter().all(Elem::is_zero)
}

pub(crate) fn basis(field: &Field, i: usize) -> Vec3 {
    let mut v = [field.zero(), field.zero(), field.zero()];
    v[i] = field.one();
    v
}

fn check_field(v: &Vec3) -> Result<()> {
    let f = v[0].field();
    for c in &v[1..] {
        if c.field() != f {
            return Err(Error::FieldMismatch(f.to_string(), c.field().to_string()));
        }
    }
    Ok(())
}

fn canonical3(v: Vec3) -> Option<Vec3> {
    let lead = v.iter().find(|c| !c.is_zero())?.inv().ok()?;
    Some([&v[0] * &lead, &v[1] * &lead, &v[2] * &lead])
}

fn fmt3(v: &Vec3, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[{}:{}:{}]", v[0], v[1], v[2])
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec3,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt3(&self.coords, f)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt3(&self.coords, f)
    }
}

impl ProjPoint {
    pub fn new(coords: Vec3) -> Result<ProjPoint> {
        check_field(&coords)?;
        canonical3(coords)
            .map(|coords| ProjPoint { coords })
            .ok_or_else(|| Error::Degenerate("[0:0:0] is not a point".into()))
    }

    pub fn from_i64(field: &Field, c: [i64; 3]) -> Result<ProjPoint> {
        ProjPoint::new(c.map(|x| field.from_i64(x)))
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    pub fn map(&self, emb: &Embedding) -> ProjPoint {
        ProjPoint {
            coords: [
                emb.map(&self.coords[0]),
                emb.map(&self.coords[1]),
                emb.map(&self.coords[2]),
            ],
        }
    }

    pub fn lies_on(&self, line: &ProjLine) -> bool {
        dot(&self.coords, &line.coeffs).is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coeffs: Vec3,
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt3(&self.coeffs, f)
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt3(&self.coeffs, f)
    }
}

impl ProjLine {
    pub fn new(coeffs: Vec3) -> Result<ProjLine> {
        check_field(&coeffs)?;
        canonical3(coeffs)
            .map(|coeffs| ProjLine { coeffs })
            .ok_or_else(|| Error::Degenerate("all line coefficients are zero".into()))
    }

    pub fn from_i64(field: &Field, c: [i64; 3]) -> Result<ProjLine> {
        ProjLine::new(c.map(|x| field.from_i64(x)))
    }

    pub fn coeffs(&self) -> &Vec3 {
        &self.coeffs
    }

    pub fn field(&self) -> &Field {
        self.coeffs[0].field()
    }

    pub fn map(&self, emb: &Embedding) -> ProjLine {
        ProjLine {
            coeffs: [
                emb.map(&self.coeffs[0]),
                emb.map(&self.coeffs[1]),
                emb.map(&self.coeffs[2]),
            ],
        }
    }

    /// Two distinct points spanning the line.
    pub fn spanning_points(&self) -> (Vec3, Vec3) {
        let field = self.field();
        let mut found: Vec<Vec3> = Vec::new();
        for i in 0..3 {
            let p = cross(&self.coeffs, &basis(field, i));
            if is_zero3(&p) {
                continue;
            }
            if found.iter().all(|q| !is_zero3(&cross(q, &p))) {
                found.push(p);
            }
            if found.len() == 2 {
                break;
            }
        }
        let q = found.pop().unwrap();
        (found.pop().unwrap(), q)
    }

    /// The meeting point of two distinct lines.
    pub fn meet(&self, other: &ProjLine) -> Result<ProjPoint> {
        ProjPoint::new(cross(&self.coeffs, &other.coeffs))
            .map_err(|_| Error::Degenerate("the lines coincide".into()))
    }
}

/// `L(p, q)`, the line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p.field() != q.field() {
        return Err(Error::FieldMismatch(p.field().to_string(), q.field().to_string()));
    }
    ProjLine::new(cross(&p.coords, &q.coords))
        .map_err(|_| Error::Degenerate("a line needs two distinct points".into()))
}

/// A point `(s : w)` of the projective line, canonical like [`ProjPoint`]:
/// `(u : 1)` with `u ≠ 0` is stored as `(1 : 1/u)` and infinity is `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point {
    s: Elem,
    w: Elem,
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.s, self.w)
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.s, self.w)
    }
}

impl P1Point {
    pub fn new(s: Elem, w: Elem) -> Result<P1Point> {
        if s.field() != w.field() {
            return Err(Error::FieldMismatch(s.field().to_string(), w.field().to_string()));
        }
        if !s.is_zero() {
            let w = w.checked_div(&s)?;
            Ok(P1Point { s: s.field().one(), w })
        } else if !w.is_zero() {
            Ok(P1Point { s, w: w.field().one() })
        } else {
            Err(Error::Degenerate("(0:0) is not a point of the projective line".into()))
        }
    }

    /// The affine point `(u : 1)`.
    pub fn affine(u: Elem) -> P1Point {
        let one = u.field().one();
        P1Point::new(u, one).expect("w = 1")
    }

    pub fn infinity(field: &Field) -> P1Point {
        P1Point {
            s: field.one(),
            w: field.zero(),
        }
    }

    pub fn s(&self) -> &Elem {
        &self.s
    }

    pub fn w(&self) -> &Elem {
        &self.w
    }

    pub fn field(&self) -> &Field {
        self.s.field()
    }

    pub fn is_infinity(&self) -> bool {
        self.w.is_zero()
    }

    /// `s / w`, or `None` at infinity.
    pub fn affine_value(&self) -> Option<Elem> {
        self.s.checked_div(&self.w).ok()
    }

    pub fn map(&self, emb: &Embedding) -> P1Point {
        P1Point {
            s: emb.map(&self.s),
            w: emb.map(&self.w),
        }
    }
}

pub type Mat3 = [[Elem; 3]; 3];

pub(crate) fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub(crate) fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            &(&(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])) + &(&a[i][2] * &b[2][j])
        })
    })
}

pub(crate) fn transpose(m: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

pub(crate) fn column(m: &Mat3, j: usize) -> Vec3 {
    [m[0][j].clone(), m[1][j].clone(), m[2][j].clone()]
}

pub(crate) fn from_columns(c: [&Vec3; 3]) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| c[j][i].clone()))
}

fn det(m: &Mat3) -> Elem {
    det3(&column(m, 0), &column(m, 1), &column(m, 2))
}

fn inverse(m: &Mat3) -> Result<Mat3> {
    let d = det(m);
    if d.is_zero() {
        return Err(Error::Degenerate("singular transform".into()));
    }
    let d_inv = d.inv()?;
    // rows of the inverse are cross products of columns
    let c0 = column(m, 0);
    let c1 = column(m, 1);
    let c2 = column(m, 2);
    let rows = [cross(&c1, &c2), cross(&c2, &c0), cross(&c0, &c1)];
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| &rows[i][j] * &d_inv)
    }))
}

/// An invertible 3×3 matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjTransform {
    m: Mat3,
    inv: Mat3,
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| format!("{} {} {}", r[0], r[1], r[2]))
            .collect();
        write!(f, "ProjTransform[{}]", rows.join("; "))
    }
}

impl ProjTransform {
    pub fn new(m: Mat3) -> Result<ProjTransform> {
        for row in &m {
            check_field(row)?;
        }
        let inv = inverse(&m)?;
        Ok(ProjTransform { m, inv })
    }

    pub fn from_i64(field: &Field, rows: [[i64; 3]; 3]) -> Result<ProjTransform> {
        ProjTransform::new(rows.map(|r| r.map(|x| field.from_i64(x))))
    }

    pub fn identity(field: &Field) -> ProjTransform {
        let m = std::array::from_fn(|i| basis(field, i));
        ProjTransform { m: m.clone(), inv: m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &Mat3 {
        &self.inv
    }

    pub fn field(&self) -> &Field {
        self.m[0][0].field()
    }

    pub fn inverse(&self) -> ProjTransform {
        ProjTransform {
            m: self.inv.clone(),
            inv: self.m.clone(),
        }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &ProjTransform) -> ProjTransform {
        ProjTransform {
            m: mat_mul(&self.m, &first.m),
            inv: mat_mul(&first.inv, &self.inv),
        }
    }

    pub fn map_field(&self, emb: &Embedding) -> ProjTransform {
        let f = |m: &Mat3| -> Mat3 { m.clone().map(|r| r.map(|x| emb.map(&x))) };
        ProjTransform {
            m: f(&self.m),
            inv: f(&self.inv),
        }
    }

    /// Whether this is the identity up to a nonzero scalar.
    pub fn is_identity(&self) -> bool {
        let s = &self.m[0][0];
        !s.is_zero()
            && (0..3).all(|i| {
                (0..3).all(|j| {
                    if i == j {
                        self.m[i][j] == *s
                    } else {
                        self.m[i][j].is_zero()
                    }
                })
            })
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(mat_vec(&self.m, &p.coords)).expect("invertible")
    }

    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        ProjLine::new(mat_vec(&transpose(&self.inv), &l.coeffs)).expect("invertible")
    }

    pub fn apply_conic(&self, c: &Conic) -> Conic {
        c.pullback(&self.inv)
    }
}
