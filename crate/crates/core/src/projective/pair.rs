//! Pairs of conics: intersection with multiplicities, tangency, the normal
//! form at a tangency point, and the intersection type.

use std::fmt;
use std::str::FromStr;

use super::{basis, cross, from_columns, is_zero3, Conic, P1Point, ProjPoint, ProjTransform};
use crate::error::{Error, Result};
use crate::field::{Elem, Embedding};
use crate::poly::{roots_in_closure, BinaryForm, DEFAULT_EXTENSION_CAP};

use super::ConicParametrization;

/// The sorted multiset of intersection multiplicities of two conics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntersectionType {
    /// (1,1,1,1)
    Transversal,
    /// (2,1,1)
    Simple,
    /// (2,2)
    Double,
    /// (3,1)
    Osculating,
    /// (4)
    Hyperosculating,
}

impl IntersectionType {
    pub const ALL: [IntersectionType; 5] = [
        IntersectionType::Transversal,
        IntersectionType::Simple,
        IntersectionType::Double,
        IntersectionType::Osculating,
        IntersectionType::Hyperosculating,
    ];

    pub fn multiplicities(self) -> &'static [u32] {
        match self {
            IntersectionType::Transversal => &[1, 1, 1, 1],
            IntersectionType::Simple => &[2, 1, 1],
            IntersectionType::Double => &[2, 2],
            IntersectionType::Osculating => &[3, 1],
            IntersectionType::Hyperosculating => &[4],
        }
    }

    pub fn from_multiplicities(m: &[u32]) -> Result<IntersectionType> {
        let mut sorted = m.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        IntersectionType::ALL
            .into_iter()
            .find(|t| t.multiplicities() == sorted.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("{m:?} is not an intersection type")))
    }

    /// Types (3,1) and (4).
    pub fn is_osculating(self) -> bool {
        matches!(self, IntersectionType::Osculating | IntersectionType::Hyperosculating)
    }

    pub fn tangency_count(self) -> usize {
        self.multiplicities().iter().filter(|&&m| m >= 2).count()
    }
}

impl fmt::Display for IntersectionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities().iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for IntersectionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<IntersectionType> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let m: std::result::Result<Vec<u32>, _> =
            inner.split(',').map(|x| x.trim().parse::<u32>()).collect();
        let m = m.map_err(|_| Error::Parse(format!("bad intersection type {s:?}")))?;
        IntersectionType::from_multiplicities(&m)
    }
}

/// `C ∩ D` with multiplicities, all points over `embedding.target()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicIntersection {
    pub embedding: Embedding,
    pub points: Vec<(ProjPoint, u32)>,
}

impl ConicIntersection {
    pub fn total_multiplicity(&self) -> u32 {
        self.points.iter().map(|(_, m)| m).sum()
    }
}

/// A set of points over `embedding.target()`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub embedding: Embedding,
    pub points: Vec<ProjPoint>,
}

impl PointSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
}

fn check_pair(c: &Conic, d: &Conic) -> Result<()> {
    if c.field() != d.field() {
        return Err(Error::FieldMismatch(c.field().to_string(), d.field().to_string()));
    }
    if c == d {
        return Err(Error::InvalidArgument("conics must be distinct".into()));
    }
    for k in [c, d] {
        if !k.is_smooth() {
            return Err(Error::Degenerate(format!("{k} is singular")));
        }
    }
    Ok(())
}

/// `F_C` pulled back along a parametrisation of `D`.
fn quartic(c: &Conic, d: &Conic) -> Result<(ConicParametrization, BinaryForm)> {
    check_pair(c, d)?;
    let par = d.parametrize(&d.find_point(0)?)?;
    let g = par.pull_back(c);
    if g.is_zero() {
        return Err(Error::Invariant("distinct smooth conics share a component".into()));
    }
    Ok((par, g))
}

/// Sorted (descending) intersection multiplicities; they sum to four.
pub fn intersection_multiplicities(c: &Conic, d: &Conic) -> Result<Vec<u32>> {
    quartic(c, d)?.1.multiplicities()
}

pub fn intersect_conics(c: &Conic, d: &Conic) -> Result<ConicIntersection> {
    let (par, g) = quartic(c, d)?;
    let roots = g.roots_in_closure(DEFAULT_EXTENSION_CAP)?;
    let par = par.map(&roots.embedding);
    let mut points: Vec<(ProjPoint, u32)> = roots
        .roots
        .iter()
        .map(|(r, m)| (par.point_at(&P1Point::affine(r.clone())), *m))
        .collect();
    if roots.at_infinity > 0 {
        points.push((par.point_at(&P1Point::infinity(par.field())), roots.at_infinity));
    }
    points.sort();
    Ok(ConicIntersection {
        embedding: roots.embedding,
        points,
    })
}

/// Intersection points of multiplicity at least two. They need at most a
/// quadratic extension.
pub fn tangency_points(c: &Conic, d: &Conic) -> Result<PointSet> {
    let (par, g) = quartic(c, d)?;
    let repeated = g.dehomogenized().repeated_part()?;
    let roots = roots_in_closure(&repeated, 2)?;
    let par = par.map(&roots.embedding);
    let mut points: Vec<ProjPoint> = roots
        .roots
        .iter()
        .map(|(r, _)| par.point_at(&P1Point::affine(r.clone())))
        .collect();
    if g.infinity_multiplicity() >= 2 {
        points.push(par.point_at(&P1Point::infinity(par.field())));
    }
    points.sort();
    Ok(PointSet {
        embedding: roots.embedding,
        points,
    })
}

/// Whether `p` lies on both conics with a common tangent there.
pub fn is_tangency_point(c: &Conic, d: &Conic, p: &ProjPoint) -> bool {
    c.contains(p)
        && d.contains(p)
        && is_zero3(&cross(&c.gradient(p.coords()), &d.gradient(p.coords())))
}

/// Coordinates in which a tangent pair reads `C: x² + txy + ay² − byz`,
/// `D: x² − yz`, tangent at `[0:0:1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPair {
    pub t: Elem,
    pub a: Elem,
    pub b: Elem,
    /// `t² − 4a(1 − b)`.
    pub delta: Elem,
    /// Maps the original pair onto the normal form.
    pub transform: ProjTransform,
    /// The tangency point used, in the original coordinates.
    pub point: ProjPoint,
}

impl NormalizedPair {
    pub fn conics(&self) -> (Conic, Conic) {
        let c = Conic::normal_form(&self.t, &self.a, &self.b).expect("b ≠ 0");
        (c, Conic::standard(self.t.field()))
    }

    pub fn intersection_type(&self) -> Result<IntersectionType> {
        classify_normalized(&self.t, &self.a, &self.b)
    }
}

pub fn delta(t: &Elem, a: &Elem, b: &Elem) -> Elem {
    let f = t.field();
    &t.square() - &(&(&f.from_i64(4) * a) * &(&f.one() - b))
}

pub fn normalize_tangent_pair(c: &Conic, d: &Conic, p: &ProjPoint) -> Result<NormalizedPair> {
    check_pair(c, d)?;
    if p.field() != c.field() {
        return Err(Error::FieldMismatch(c.field().to_string(), p.field().to_string()));
    }
    if c.field().characteristic() == 2 {
        return Err(Error::Unsupported("the tangent normal form needs odd characteristic".into()));
    }
    if !is_tangency_point(c, d, p) {
        return Err(Error::InvalidArgument(format!("{p} is not a tangency point")));
    }
    let field = c.field().clone();
    let tangent = d.tangent_at(p)?;
    let (l0, l1) = tangent.spanning_points();
    let n0 = if is_zero3(&cross(&l0, p.coords())) { l1 } else { l0 };
    let n0 = ProjPoint::new(n0)?.coords().clone();
    let n1 = [1, 0, 2]
        .into_iter()
        .map(|i| basis(&field, i))
        .find(|e| !super::dot(e, tangent.coeffs()).is_zero())
        .expect("a line misses some coordinate point");
    let n = ProjTransform::new(from_columns([&n0, &n1, p.coords()]))?;

    let mid = n.inverse().apply_conic(d);
    let [x2, y2, z2, xy, xz, yz] = mid.coeffs();
    if !(x2.is_one() && z2.is_zero() && xz.is_zero()) {
        return Err(Error::Invariant(format!("unexpected shape {mid}")));
    }
    let half = field.from_i64(2).inv()?;
    let t2 = xy.clone();
    let a2 = y2.clone();
    let b2 = -yz;
    let k = ProjTransform::new([
        [field.one(), &t2 * &half, field.zero()],
        [field.zero(), field.one(), field.zero()],
        [
            field.zero(),
            &(&t2.square() * &(&half * &half)) - &a2,
            b2,
        ],
    ])?;
    let m = k.compose(&n.inverse());

    if m.apply_conic(d) != Conic::standard(&field) {
        return Err(Error::Invariant("D did not reach x² − yz".into()));
    }
    let cn = m.apply_conic(c);
    let [x2, y2, z2, xy, xz, yz] = cn.coeffs();
    if !(x2.is_one() && z2.is_zero() && xz.is_zero() && !yz.is_zero()) {
        return Err(Error::Invariant(format!("C did not reach normal form: {cn}")));
    }
    let (t, a, b) = (xy.clone(), y2.clone(), -yz);
    let delta = delta(&t, &a, &b);
    Ok(NormalizedPair {
        t,
        a,
        b,
        delta,
        transform: m,
        point: p.clone(),
    })
}

/// The intersection type of the normal-form pair with parameters `(t, a, b)`.
pub fn classify_normalized(t: &Elem, a: &Elem, b: &Elem) -> Result<IntersectionType> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("b must be nonzero".into()));
    }
    if !b.is_one() {
        return Ok(if delta(t, a, b).is_zero() {
            IntersectionType::Double
        } else {
            IntersectionType::Simple
        });
    }
    if !t.is_zero() {
        Ok(IntersectionType::Osculating)
    } else if !a.is_zero() {
        Ok(IntersectionType::Hyperosculating)
    } else {
        Err(Error::InvalidArgument("conics must be distinct".into()))
    }
}

/// Type, tangency points and, for tangent pairs, the normal form at the
/// least tangency point (after lifting to its field).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub itype: IntersectionType,
    pub tangency: PointSet,
    pub normalized: Option<NormalizedPair>,
}

pub fn classify_detailed(c: &Conic, d: &Conic) -> Result<Classification> {
    let tangency = tangency_points(c, d)?;
    let Some(p) = tangency.points.first() else {
        return Ok(Classification {
            itype: IntersectionType::Transversal,
            tangency,
            normalized: None,
        });
    };
    let e = &tangency.embedding;
    let np = normalize_tangent_pair(&c.map(e), &d.map(e), p)?;
    Ok(Classification {
        itype: np.intersection_type()?,
        normalized: Some(np),
        tangency,
    })
}

/// The intersection type, decided by the normal form at a tangency point.
pub fn classify(c: &Conic, d: &Conic) -> Result<IntersectionType> {
    Ok(classify_detailed(c, d)?.itype)
}
