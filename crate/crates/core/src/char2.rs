//! Quadratic forms in characteristic 2: symplectic reduction, the normal
//! form `x₀x₁ + x₂²` of an irreducible conic, and its strange point.

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};
use crate::poly::Poly;
use crate::projective::{Conic, ProjLine, ProjPoint};

fn require_char2(field: &Field) -> Result<()> {
    if field.characteristic() == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{field} does not have characteristic 2")))
    }
}

/// `q = Σ_{i≤j} a_{ij} x_i x_j`, stored as an upper-triangular matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm2 {
    field: Field,
    a: Vec<Vec<Elem>>,
}

impl QuadraticForm2 {
    /// From an `n × n` matrix whose upper triangle holds the coefficients;
    /// entries below the diagonal must be zero.
    pub fn new(field: &Field, a: Vec<Vec<Elem>>) -> Result<QuadraticForm2> {
        require_char2(field)?;
        let n = a.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty quadratic form".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument("coefficient matrix is not square".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if e.field() != field {
                    return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
                }
                if j < i && !e.is_zero() {
                    return Err(Error::InvalidArgument("coefficients below the diagonal".into()));
                }
            }
        }
        Ok(QuadraticForm2 { field: field.clone(), a })
    }

    pub fn zero(field: &Field, n: usize) -> Result<QuadraticForm2> {
        QuadraticForm2::new(field, vec![vec![field.zero(); n]; n])
    }

    /// Sets the coefficient of `x_i x_j` (of `x_i²` when `i = j`).
    pub fn set(&mut self, i: usize, j: usize, c: Elem) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.a[i][j] = c;
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Elem {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.a[i][j]
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn from_conic(c: &Conic) -> Result<QuadraticForm2> {
        let k = c.coeffs();
        let f = c.field();
        let z = f.zero();
        QuadraticForm2::new(
            f,
            vec![
                vec![k[0].clone(), k[3].clone(), k[4].clone()],
                vec![z.clone(), k[1].clone(), k[5].clone()],
                vec![z.clone(), z, k[2].clone()],
            ],
        )
    }

    pub fn to_conic(&self) -> Result<Conic> {
        if self.dim() != 3 {
            return Err(Error::InvalidArgument("a plane conic needs n = 3".into()));
        }
        let a = &self.a;
        Conic::new([
            a[0][0].clone(),
            a[1][1].clone(),
            a[2][2].clone(),
            a[0][1].clone(),
            a[0][2].clone(),
            a[1][2].clone(),
        ])
    }

    pub fn eval(&self, v: &[Elem]) -> Elem {
        let mut acc = self.field.zero();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                if !self.a[i][j].is_zero() {
                    acc = &acc + &(&self.a[i][j] * &(&v[i] * &v[j]));
                }
            }
        }
        acc
    }

    pub fn map(&self, emb: &Embedding) -> QuadraticForm2 {
        QuadraticForm2 {
            field: emb.target().clone(),
            a: self.a.iter().map(|r| r.iter().map(|e| emb.map(e)).collect()).collect(),
        }
    }

    /// `q(P·y)` for the basis whose vectors are the columns of `p`.
    pub fn change_basis(&self, p: &[Vec<Elem>]) -> Result<QuadraticForm2> {
        let n = self.dim();
        let cols: Vec<Vec<Elem>> = (0..n).map(|k| (0..n).map(|i| p[i][k].clone()).collect()).collect();
        let b = bilinear_from_quadratic(self);
        let mut out = QuadraticForm2::zero(&self.field, n)?;
        for k in 0..n {
            out.a[k][k] = self.eval(&cols[k]);
            for l in k + 1..n {
                out.a[k][l] = b.eval(&cols[k], &cols[l]);
            }
        }
        Ok(out)
    }
}

/// `B(u, v) = q(u + v) − q(u) − q(v)`: alternating and symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm2 {
    pub matrix: Vec<Vec<Elem>>,
}

impl BilinearForm2 {
    pub fn eval(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = u[0].field();
        let mut acc = f.zero();
        for (i, row) in self.matrix.iter().enumerate() {
            if u[i].is_zero() {
                continue;
            }
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    acc = &acc + &(e * &(&u[i] * &v[j]));
                }
            }
        }
        acc
    }

    pub fn is_alternating(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| {
            self.matrix[i][i].is_zero() && (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i])
        })
    }
}

pub fn bilinear_from_quadratic(q: &QuadraticForm2) -> BilinearForm2 {
    let n = q.dim();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { q.field.zero() } else { q.coeff(i, j).clone() })
                .collect()
        })
        .collect();
    BilinearForm2 { matrix }
}

/// A basis in which `q` reads `x₁y₁ + ⋯ + x_l y_l` or
/// `x₁y₁ + ⋯ + x_l y_l + x_{l+1}²`, coordinates ordered
/// `x₁, y₁, …, x_l, y_l, x_{l+1}, …`.
#[derive(Clone, Debug)]
pub struct CanonicalForm2 {
    pub l: usize,
    pub has_square_term: bool,
    /// Basis vectors as columns, over `embedding.target()`.
    pub basis: Vec<Vec<Elem>>,
    /// Identity unless a hyperbolic plane needed a quadratic extension.
    pub embedding: Embedding,
    pub lifted: bool,
}

impl CanonicalForm2 {
    /// The shape the basis change must produce.
    pub fn expected(&self) -> Result<QuadraticForm2> {
        let f = self.embedding.target();
        let n = self.basis.len();
        let mut q = QuadraticForm2::zero(f, n)?;
        for i in 0..self.l {
            q.set(2 * i, 2 * i + 1, f.one());
        }
        if self.has_square_term {
            q.set(2 * self.l, 2 * self.l, f.one());
        }
        Ok(q)
    }

    /// Whether the basis change is invertible and realises the claimed
    /// shape exactly.
    pub fn verify(&self, q: &QuadraticForm2) -> Result<bool> {
        Ok(rank(&self.basis)? == self.basis.len()
            && q.map(&self.embedding).change_basis(&self.basis)? == self.expected()?)
    }

    /// `l = 1` with a square term in dimension 3: an irreducible conic.
    pub fn is_irreducible_conic(&self) -> bool {
        self.basis.len() == 3 && self.l == 1 && self.has_square_term
    }
}

/// Row rank by Gaussian elimination.
pub fn rank(m: &[Vec<Elem>]) -> Result<usize> {
    let mut m: Vec<Vec<Elem>> = m.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv()?;
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                let pivot = m[r].clone();
                m[i] = m[i].iter().zip(&pivot).map(|(a, b)| a - &(&f * b)).collect();
            }
        }
        r += 1;
    }
    Ok(r)
}

fn axpy(a: &Elem, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    x.iter().zip(y).map(|(xi, yi)| &(a * xi) + yi).collect()
}

fn scale(a: &Elem, x: &[Elem]) -> Vec<Elem> {
    x.iter().map(|xi| a * xi).collect()
}

/// A root of `b T² + T + a`, lifting once when it has none in the field.
fn isotropic_parameter(a: &Elem, b: &Elem) -> Result<(Option<Embedding>, Elem)> {
    let f = a.field();
    let poly = Poly::new(f, vec![a.clone(), f.one(), b.clone()]);
    if let Some((r, _)) = poly.roots_in_field()?.into_iter().next() {
        return Ok((None, r));
    }
    let emb = f.extension(2)?;
    let lifted = poly.map(&emb);
    let (r, _) = lifted
        .roots_in_field()?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invariant("quadratic has no root after lifting".into()))?;
    Ok((Some(emb), r))
}

/// Symplectic Gram–Schmidt on `B_q`, splitting each hyperbolic plane into
/// two isotropic lines, then collapsing the radical to one square term.
pub fn symplectic_normalize(q: &QuadraticForm2) -> Result<CanonicalForm2> {
    let n = q.dim();
    let base = q.field.clone();
    let mut emb = Embedding::identity(&base);
    let mut q = q.clone();
    let mut rest: Vec<Vec<Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { base.one() } else { base.zero() }).collect())
        .collect();
    let mut pairs: Vec<(Vec<Elem>, Vec<Elem>)> = Vec::new();
    loop {
        let b = bilinear_from_quadratic(&q);
        let found = (0..rest.len()).find_map(|i| {
            (i + 1..rest.len())
                .find(|&j| !b.eval(&rest[i], &rest[j]).is_zero())
                .map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let v0 = rest.remove(j);
        let u = rest.remove(i);
        let v = scale(&b.eval(&u, &v0).inv()?, &v0);
        rest = rest
            .into_iter()
            .map(|w| {
                let w = axpy(&b.eval(&w, &v), &u, &w);
                axpy(&b.eval(&w, &u), &v, &w)
            })
            .collect();
        let (lift, t) = isotropic_parameter(&q.eval(&u), &q.eval(&v))?;
        let (u, v) = if let Some(e) = lift {
            let m = |x: &Vec<Elem>| x.iter().map(|c| e.map(c)).collect::<Vec<_>>();
            q = q.map(&e);
            rest = rest.iter().map(m).collect();
            pairs = pairs.iter().map(|(a, b)| (m(a), m(b))).collect();
            emb = emb.then(&e)?;
            (m(&u), m(&v))
        } else {
            (u, v)
        };
        let u1 = axpy(&t, &v, &u);
        let v1 = axpy(&q.eval(&v), &u1, &v);
        pairs.push((u1, v1));
    }
    let l = pairs.len();
    let mut basis: Vec<Vec<Elem>> = Vec::with_capacity(n);
    for (u, v) in pairs {
        basis.push(u);
        basis.push(v);
    }
    let roots: Vec<Elem> = rest.iter().map(|r| q.eval(r).pth_root()).collect::<Result<_>>()?;
    let has_square_term = match roots.iter().position(|r| !r.is_zero()) {
        None => {
            basis.extend(rest);
            false
        }
        Some(k) => {
            let rk = roots[k].inv()?;
            basis.push(scale(&rk, &rest[k]));
            for (i, r) in rest.iter().enumerate() {
                if i != k {
                    basis.push(axpy(&(&roots[i] * &rk), &rest[k], r));
                }
            }
            true
        }
    };
    let basis = (0..n).map(|i| (0..n).map(|k| basis[k][i].clone()).collect()).collect();
    Ok(CanonicalForm2 {
        l,
        has_square_term,
        embedding: emb.clone(),
        lifted: !emb.is_identity(),
        basis,
    })
}

/// Whether a char-2 conic is irreducible, by its canonical form.
pub fn is_irreducible(c: &Conic) -> Result<bool> {
    require_char2(c.field())?;
    Ok(symplectic_normalize(&QuadraticForm2::from_conic(c)?)?.is_irreducible_conic())
}

/// The point every tangent of an irreducible conic passes through: the
/// kernel `[a₁₂ : a₀₂ : a₀₁]` of `B_q`.
pub fn strange_point(c: &Conic) -> Result<ProjPoint> {
    if !is_irreducible(c)? {
        return Err(Error::InvalidArgument("conic is reducible".into()));
    }
    let k = c.coeffs();
    ProjPoint::new([k[5].clone(), k[4].clone(), k[3].clone()])
}

/// The tangent at `p ∈ C`, from the formal gradient.
pub fn tangent_at_char2(c: &Conic, p: &ProjPoint) -> Result<ProjLine> {
    require_char2(c.field())?;
    if !c.contains(p) {
        return Err(Error::NotOnConic);
    }
    ProjLine::new(c.gradient(p.coords()))
        .map_err(|_| Error::Degenerate("conic is singular at the point".into()))
}
