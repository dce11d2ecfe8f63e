use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    add3, basis, cross, det3, dot, is_zero3, scale3, sub3, Mat3, P1Point, ProjLine, ProjPoint,
    Vec3,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};
use crate::poly::BinaryForm;

/// Monomials in storage order.
pub const MONOMIALS: [&str; 6] = ["x^2", "y^2", "z^2", "xy", "xz", "yz"];

/// A plane conic `a₀₀x² + a₁₁y² + a₂₂z² + a₀₁xy + a₀₂xz + a₁₂yz`, stored in
/// that coefficient order and scaled so the first nonzero coefficient is one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Conic {
    coeffs: [Elem; 6],
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conic({self})")
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (c, m) in self.coeffs.iter().zip(MONOMIALS) {
            if !c.is_zero() {
                terms.push(if c.is_one() { m.to_string() } else { format!("({c})*{m}") });
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl Conic {
    pub fn new(coeffs: [Elem; 6]) -> Result<Conic> {
        let field = coeffs[0].field().clone();
        if let Some(bad) = coeffs.iter().find(|c| *c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Degenerate("all conic coefficients are zero".into()))?
            .inv()?;
        Ok(Conic {
            coeffs: coeffs.map(|c| &c * &lead),
        })
    }

    /// A smooth conic, or a degenerate-input error.
    pub fn smooth(coeffs: [Elem; 6]) -> Result<Conic> {
        let c = Conic::new(coeffs)?;
        if !c.is_smooth() {
            return Err(Error::Degenerate(format!("{c} is singular")));
        }
        Ok(c)
    }

    pub fn from_i64(field: &Field, c: [i64; 6]) -> Result<Conic> {
        Conic::new(c.map(|x| field.from_i64(x)))
    }

    /// `x² + t·xy + a·y² − b·yz`.
    pub fn normal_form(t: &Elem, a: &Elem, b: &Elem) -> Result<Conic> {
        let f = t.field();
        Conic::new([f.one(), a.clone(), f.zero(), t.clone(), f.zero(), -b])
    }

    /// `x² − yz`.
    pub fn standard(field: &Field) -> Conic {
        Conic::from_i64(field, [1, 0, 0, 0, 0, -1]).expect("nonzero")
    }

    pub fn coeffs(&self) -> &[Elem; 6] {
        &self.coeffs
    }

    pub fn field(&self) -> &Field {
        self.coeffs[0].field()
    }

    pub fn map(&self, emb: &Embedding) -> Conic {
        Conic {
            coeffs: self.coeffs.clone().map(|c| emb.map(&c)),
        }
    }

    pub fn eval(&self, v: &Vec3) -> Elem {
        let [a00, a11, a22, a01, a02, a12] = &self.coeffs;
        let [x, y, z] = v;
        let sq = &(&(a00 * &x.square()) + &(a11 * &y.square())) + &(a22 * &z.square());
        let mixed = &(&(a01 * &(x * y)) + &(a02 * &(x * z))) + &(a12 * &(y * z));
        &sq + &mixed
    }

    /// The gradient `∇F(v)`; `∇F(v)·w = F(v+w) − F(v) − F(w)`.
    pub fn gradient(&self, v: &Vec3) -> Vec3 {
        let [a00, a11, a22, a01, a02, a12] = &self.coeffs;
        let [x, y, z] = v;
        let two = self.field().from_i64(2);
        [
            &(&(&(&two * a00) * x) + &(a01 * y)) + &(a02 * z),
            &(&(a01 * x) + &(&(&two * a11) * y)) + &(a12 * z),
            &(&(a02 * x) + &(a12 * y)) + &(&(&two * a22) * z),
        ]
    }

    /// The polarisation `F(v+w) − F(v) − F(w)`.
    pub fn polarization(&self, v: &Vec3, w: &Vec3) -> Elem {
        dot(&self.gradient(v), w)
    }

    /// `4·det A`; vanishes exactly on singular conics, in every characteristic.
    pub fn discriminant(&self) -> Elem {
        let [a00, a11, a22, a01, a02, a12] = &self.coeffs;
        let four = self.field().from_i64(4);
        let main = &(&(&four * a00) * &(a11 * a22)) + &(a01 * &(a02 * a12));
        let rest = &(&(a00 * &a12.square()) + &(a11 * &a02.square())) + &(a22 * &a01.square());
        &main - &rest
    }

    pub fn is_smooth(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// The symmetric matrix `A` with `F(v) = vᵀAv` (odd characteristic).
    pub fn matrix(&self) -> Result<Mat3> {
        if self.field().characteristic() == 2 {
            return Err(Error::Unsupported("no symmetric matrix in characteristic 2".into()));
        }
        let [a00, a11, a22, a01, a02, a12] = &self.coeffs;
        let half = self.field().from_i64(2).inv()?;
        let h01 = a01 * &half;
        let h02 = a02 * &half;
        let h12 = a12 * &half;
        Ok([
            [a00.clone(), h01.clone(), h02.clone()],
            [h01, a11.clone(), h12.clone()],
            [h02, h12, a22.clone()],
        ])
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p.coords()).is_zero()
    }

    /// `G(v) = F(Mv)`.
    pub(crate) fn pullback(&self, m: &Mat3) -> Conic {
        let col = |j: usize| -> Vec3 { [m[0][j].clone(), m[1][j].clone(), m[2][j].clone()] };
        let c = [col(0), col(1), col(2)];
        Conic::new([
            self.eval(&c[0]),
            self.eval(&c[1]),
            self.eval(&c[2]),
            self.polarization(&c[0], &c[1]),
            self.polarization(&c[0], &c[2]),
            self.polarization(&c[1], &c[2]),
        ])
        .expect("pullback through an invertible matrix")
    }

    /// `T_p C`.
    pub fn tangent_at(&self, p: &ProjPoint) -> Result<ProjLine> {
        if !self.contains(p) {
            return Err(Error::NotOnConic);
        }
        ProjLine::new(self.gradient(p.coords()))
            .map_err(|_| Error::Degenerate(format!("{p} is a singular point of {self}")))
    }

    /// `P_q C`, the line `A·q`.
    pub fn polar(&self, q: &ProjPoint) -> Result<ProjLine> {
        if self.field().characteristic() == 2 {
            return Err(Error::Unsupported("polars need odd characteristic".into()));
        }
        ProjLine::new(self.gradient(q.coords()))
            .map_err(|_| Error::Degenerate(format!("{q} is a singular point of {self}")))
    }

    /// `F(sP + wQ)` as a binary quadratic in `(s : w)`.
    fn restrict(&self, p: &Vec3, q: &Vec3) -> BinaryForm {
        let coeffs = vec![self.eval(q), self.polarization(p, q), self.eval(p)];
        BinaryForm::new(self.field(), 2, coeffs).expect("degree 2")
    }

    /// `C ∩ L` with multiplicities; the points may live in a quadratic
    /// extension, which is reported rather than adopted.
    pub fn intersect_line(&self, line: &ProjLine) -> Result<LineConicIntersection> {
        if line.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), line.field().to_string()));
        }
        let (p, q) = line.spanning_points();
        let form = self.restrict(&p, &q);
        if form.is_zero() {
            return Err(Error::Degenerate(format!("{line} lies on {self}")));
        }
        let roots = form.roots_in_closure(2)?;
        let emb = roots.embedding.clone();
        let (pe, qe) = (p.map(|c| emb.map(&c)), q.map(|c| emb.map(&c)));
        let mut points = Vec::new();
        for (r, m) in &roots.roots {
            points.push((ProjPoint::new(add3(&scale3(r, &pe), &qe))?, *m));
        }
        if roots.at_infinity > 0 {
            points.push((ProjPoint::new(pe)?, roots.at_infinity));
        }
        points.sort();
        Ok(LineConicIntersection {
            embedding: emb,
            points,
        })
    }

    /// The second point of `C ∩ L` given one known point, by Vieta; equals
    /// `known` when `L` is tangent there.
    pub fn other_intersection(&self, line: &ProjLine, known: &ProjPoint) -> Result<ProjPoint> {
        if !self.contains(known) || !known.lies_on(line) {
            return Err(Error::InvalidArgument(format!(
                "{known} is not on both {self} and the line {line}"
            )));
        }
        let k = known.coords();
        let (p, q) = line.spanning_points();
        let other = if is_zero3(&cross(&p, k)) { q } else { p };
        let fq = self.eval(&other);
        let pol = self.polarization(k, &other);
        if fq.is_zero() && pol.is_zero() {
            return Err(Error::Degenerate(format!("{line} lies on {self}")));
        }
        ProjPoint::new(sub3(&scale3(&fq, k), &scale3(&pol, &other)))
    }

    /// A point of `C` over its own field, deterministic in `seed`.
    ///
    /// Tries `[0:0:1]`, `[0:1:0]`, `[1:0:0]` first. Over finite fields it then
    /// intersects with seeded random lines; over `ℚ` and `ℚ(√d)` it searches
    /// small integer points and lines, and gives up with a needs-hint error.
    pub fn find_point(&self, seed: u64) -> Result<ProjPoint> {
        let field = self.field().clone();
        for i in (0..3).rev() {
            let e = basis(&field, i);
            if self.eval(&e).is_zero() {
                return ProjPoint::new(e);
            }
        }
        if field.is_finite() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10_000 {
                let l = [field.random(&mut rng), field.random(&mut rng), field.random(&mut rng)];
                let Ok(line) = ProjLine::new(l) else { continue };
                if let Some(p) = self.rational_point_on(&line)? {
                    return Ok(p);
                }
            }
            return Err(Error::Invariant(format!("no point found on {self}")));
        }
        for h in 1..=8i64 {
            for x in -h..=h {
                for y in -h..=h {
                    for z in -h..=h {
                        if x.abs().max(y.abs()).max(z.abs()) != h {
                            continue;
                        }
                        let v = [field.from_i64(x), field.from_i64(y), field.from_i64(z)];
                        if self.eval(&v).is_zero() {
                            return ProjPoint::new(v);
                        }
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2_000 {
            let l: Vec3 = std::array::from_fn(|_| field.from_i64(rng.gen_range(-4..=4)));
            let Ok(line) = ProjLine::new(l) else { continue };
            if let Some(p) = self.rational_point_on(&line)? {
                return Ok(p);
            }
        }
        Err(Error::NeedsHint(self.to_string()))
    }

    /// `find_point`, or the caller's hint after checking it lies on `C`.
    pub fn find_point_with_hint(&self, hint: Option<&ProjPoint>, seed: u64) -> Result<ProjPoint> {
        match hint {
            Some(p) if self.contains(p) => Ok(p.clone()),
            Some(_) => Err(Error::NotOnConic),
            None => self.find_point(seed),
        }
    }

    fn rational_point_on(&self, line: &ProjLine) -> Result<Option<ProjPoint>> {
        match self.intersect_line(line) {
            Ok(x) if x.embedding.is_identity() => Ok(x.points.into_iter().map(|(p, _)| p).next()),
            Ok(_) | Err(Error::ExtensionOverflow(_)) | Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// The degree-one parametrisation by the pencil of lines through `base`.
    pub fn parametrize(&self, base: &ProjPoint) -> Result<ConicParametrization> {
        if base.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), base.field().to_string()));
        }
        if !self.contains(base) {
            return Err(Error::NotOnConic);
        }
        if !self.is_smooth() {
            return Err(Error::Degenerate(format!("{self} is singular")));
        }
        let field = self.field();
        let p0 = base.coords().clone();
        let (q1, q2) = [(1, 0), (2, 0), (2, 1)]
            .into_iter()
            .map(|(i, j)| (basis(field, i), basis(field, j)))
            .find(|(a, b)| !det3(&p0, a, b).is_zero())
            .expect("some coordinate pair completes a basis");
        let f1 = self.eval(&q1);
        let f2 = self.eval(&q2);
        let a1 = self.polarization(&p0, &q1);
        let a2 = self.polarization(&p0, &q2);
        let p12 = self.polarization(&q1, &q2);
        let w2 = sub3(&scale3(&f2, &p0), &scale3(&a2, &q2));
        let sw = sub3(
            &sub3(&scale3(&p12, &p0), &scale3(&a1, &q2)),
            &scale3(&a2, &q1),
        );
        let s2 = sub3(&scale3(&f1, &p0), &scale3(&a1, &q1));
        Ok(ConicParametrization {
            conic: self.clone(),
            base: base.clone(),
            q1,
            q2,
            forms: [w2, sw, s2],
        })
    }
}

/// `C ∩ L` over the field named by `embedding`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineConicIntersection {
    pub embedding: Embedding,
    pub points: Vec<(ProjPoint, u32)>,
}

/// A map `ℙ¹ → C`, `(s : w) ↦ F(R)·P₀ − Pol(P₀, R)·R` with `R = sQ₁ + wQ₂`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConicParametrization {
    conic: Conic,
    base: ProjPoint,
    q1: Vec3,
    q2: Vec3,
    /// Vector coefficients of `w²`, `sw`, `s²`.
    forms: [Vec3; 3],
}

impl fmt::Debug for ConicParametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConicParametrization({} from {})", self.conic, self.base)
    }
}

impl ConicParametrization {
    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn field(&self) -> &Field {
        self.conic.field()
    }

    /// Vector coefficients of `w²`, `sw` and `s²`.
    pub fn forms(&self) -> &[Vec3; 3] {
        &self.forms
    }

    /// The three coordinate functions as binary quadratics.
    pub fn coordinate_forms(&self) -> [BinaryForm; 3] {
        std::array::from_fn(|k| {
            let coeffs = self.forms.iter().map(|v| v[k].clone()).collect();
            BinaryForm::new(self.field(), 2, coeffs).expect("degree 2")
        })
    }

    pub fn vector_at(&self, s: &Elem, w: &Elem) -> Vec3 {
        let [f0, f1, f2] = &self.forms;
        add3(
            &add3(&scale3(&w.square(), f0), &scale3(&(s * w), f1)),
            &scale3(&s.square(), f2),
        )
    }

    pub fn point_at(&self, t: &P1Point) -> ProjPoint {
        ProjPoint::new(self.vector_at(t.s(), t.w())).expect("parametrisation never vanishes")
    }

    /// The parameter of a point of the conic.
    pub fn parameter_of(&self, p: &ProjPoint) -> Result<P1Point> {
        if p.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), p.field().to_string()));
        }
        if !self.conic.contains(p) {
            return Err(Error::NotOnConic);
        }
        let p0 = self.base.coords();
        if *p == self.base {
            let l = self.conic.gradient(p0);
            return P1Point::new(dot(&l, &self.q2), -dot(&l, &self.q1));
        }
        let x = p.coords();
        P1Point::new(det3(p0, x, &self.q2), det3(p0, &self.q1, x))
    }

    pub fn map(&self, emb: &Embedding) -> ConicParametrization {
        let m = |v: &Vec3| v.clone().map(|c| emb.map(&c));
        ConicParametrization {
            conic: self.conic.map(emb),
            base: self.base.map(emb),
            q1: m(&self.q1),
            q2: m(&self.q2),
            forms: self.forms.clone().map(|v| m(&v)),
        }
    }

    /// `G ∘ φ` as a binary quartic, for another conic `G`.
    pub fn pull_back(&self, other: &Conic) -> BinaryForm {
        let [x, y, z] = self.coordinate_forms();
        let [a00, a11, a22, a01, a02, a12] = other.coeffs();
        let terms = [
            x.mul(&x).scale(a00),
            y.mul(&y).scale(a11),
            z.mul(&z).scale(a22),
            x.mul(&y).scale(a01),
            x.mul(&z).scale(a02),
            y.mul(&z).scale(a12),
        ];
        let mut acc = BinaryForm::new(self.field(), 4, Vec::new()).expect("zero form");
        for t in &terms {
            acc = acc.add(t).expect("same degree");
        }
        acc
    }
}

#[cfg(test)]
fn rational_point(field: &Field, v: [(i64, i64); 3]) -> Result<ProjPoint> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    ProjPoint::new(v.map(|(n, d)| {
        field
            .from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
            .expect("nonzero denominator")
    }))
}
