//! Seeded random instances: conics, transforms, and pairs of a prescribed
//! intersection type.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::projective::{
    intersection_multiplicities, Conic, IntersectionType, Mat3, ProjTransform,
};

fn random_entry<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Elem {
    if field.is_finite() {
        field.random(rng)
    } else {
        field.from_i64(rng.gen_range(-3..=3))
    }
}

fn random_nonzero<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Elem {
    loop {
        let e = random_entry(field, rng);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A uniformly random invertible matrix (small integers in characteristic 0).
pub fn random_transform<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> ProjTransform {
    loop {
        let m: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| random_entry(field, rng)));
        if let Ok(t) = ProjTransform::new(m) {
            return t;
        }
    }
}

/// A random smooth conic. In characteristic 0 it is a random image of
/// `x² − yz`, so it always has rational points.
pub fn random_smooth_conic<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Conic {
    if !field.is_finite() {
        return random_transform(field, rng).apply_conic(&Conic::standard(field));
    }
    loop {
        let c: [Elem; 6] = std::array::from_fn(|_| field.random(rng));
        if let Ok(c) = Conic::smooth(c) {
            return c;
        }
    }
}

/// Two distinct random smooth conics.
pub fn random_pair<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> (Conic, Conic) {
    loop {
        let c = random_smooth_conic(field, rng);
        let d = random_smooth_conic(field, rng);
        if c != d {
            return (c, d);
        }
    }
}

/// Random normal-form parameters `(t, a, b)` realising a tangent type.
pub fn random_normal_params<R: Rng + ?Sized>(
    field: &Field,
    itype: IntersectionType,
    rng: &mut R,
) -> Result<(Elem, Elem, Elem)> {
    let one = field.one();
    let four = field.from_i64(4);
    let b_not_one = |rng: &mut R| loop {
        let b = random_nonzero(field, rng);
        if !b.is_one() {
            return b;
        }
    };
    match itype {
        IntersectionType::Transversal => Err(Error::InvalidArgument(
            "(1,1,1,1) pairs have no tangent normal form".into(),
        )),
        IntersectionType::Simple => loop {
            let t = random_entry(field, rng);
            let a = random_entry(field, rng);
            let b = b_not_one(rng);
            if !crate::projective::delta(&t, &a, &b).is_zero() {
                return Ok((t, a, b));
            }
        },
        IntersectionType::Double => {
            let t = random_entry(field, rng);
            let b = b_not_one(rng);
            let a = &t.square() / &(&four * &(&one - &b));
            Ok((t, a, b))
        }
        IntersectionType::Osculating => {
            Ok((random_nonzero(field, rng), random_entry(field, rng), one))
        }
        IntersectionType::Hyperosculating => {
            Ok((field.zero(), random_nonzero(field, rng), one))
        }
    }
}

/// A random pair of the requested type: a random projective image of a
/// random normal form, or rejection sampling for (1,1,1,1).
pub fn random_pair_of_type<R: Rng + ?Sized>(
    field: &Field,
    itype: IntersectionType,
    rng: &mut R,
) -> Result<(Conic, Conic)> {
    if itype == IntersectionType::Transversal {
        for _ in 0..10_000 {
            let (c, d) = random_pair(field, rng);
            if intersection_multiplicities(&c, &d)? == [1, 1, 1, 1] {
                return Ok((c, d));
            }
        }
        return Err(Error::Invariant(format!("no (1,1,1,1) pair found over {field}")));
    }
    let (t, a, b) = random_normal_params(field, itype, rng)?;
    let m = random_transform(field, rng);
    let c = Conic::normal_form(&t, &a, &b)?;
    Ok((m.apply_conic(&c), m.apply_conic(&Conic::standard(field))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::classify;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_types_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [5u64, 7, 13] {
            let f = Field::prime(p).unwrap();
            for t in IntersectionType::ALL {
                for _ in 0..5 {
                    let (c, d) = random_pair_of_type(&f, t, &mut rng).unwrap();
                    assert_eq!(intersection_multiplicities(&c, &d).unwrap(), t.multiplicities());
                    assert_eq!(classify(&c, &d).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn rational_conics_have_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = Field::rational();
        for _ in 0..5 {
            let c = random_smooth_conic(&q, &mut rng);
            assert!(c.contains(&c.find_point(0).unwrap()));
        }
    }
}
