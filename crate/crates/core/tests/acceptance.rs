//! Acceptance suite: ten exact checks, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poncelet_core::char2::{self, symplectic_normalize, QuadraticForm2};
use poncelet_core::ecurve::{is_reducible, nu, nu_inverse, sigma, tau, BiquadraticForm, ECurve, ShapeKind};
use poncelet_core::gen::{random_pair, random_pair_of_type, random_transform};
use poncelet_core::poly::Poly;
use poncelet_core::poncelet::{
    default_max_steps, porism_check, run, start, step, step_back, Branch, Outcome, PonceletConfig,
};
use poncelet_core::projective::{
    classify, intersect_conics, intersection_multiplicities, is_tangency_point, line_through,
    tangency_points, Conic, IntersectionType, P1Point, ProjLine, ProjPoint,
};
use poncelet_core::{svg, Elem, Embedding, Field};

type EPoint = (P1Point, P1Point);

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

macro_rules! attempt {
    ($t:expr, $e:expr, $ctx:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                $t.fail(format!("{}: {err}", $ctx));
                continue;
            }
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p1_points(f: &Field) -> Vec<P1Point> {
    let mut v: Vec<P1Point> = f.elements().unwrap().into_iter().map(P1Point::affine).collect();
    v.push(P1Point::infinity(f));
    v
}

fn p2_points(f: &Field) -> Vec<ProjPoint> {
    let es = f.elements().unwrap();
    let (z, o) = (f.zero(), f.one());
    let mut v = vec![ProjPoint::new([z.clone(), z.clone(), o.clone()]).unwrap()];
    for a in &es {
        v.push(ProjPoint::new([z.clone(), o.clone(), a.clone()]).unwrap());
        for b in &es {
            v.push(ProjPoint::new([o.clone(), a.clone(), b.clone()]).unwrap());
        }
    }
    v
}

fn is_base_rational(p: &ProjPoint, q: u128) -> bool {
    p.coords().iter().all(|c| c.pow(q) == *c)
}

fn corpus(p: u64) -> Vec<(Conic, Conic)> {
    let f = Field::prime(p).unwrap();
    let mut r = rng(1000 + p);
    (0..1000).map(|_| random_pair(&f, &mut r)).collect()
}

// Criterion 1 ----------------------------------------------------------------

fn bezout() -> Tally {
    let mut t = Tally::default();
    for p in [5u64, 7, 13] {
        let f = Field::prime(p).unwrap();
        let plane = p2_points(&f);
        for (i, (c, d)) in corpus(p).into_iter().enumerate() {
            let ctx = format!("F_{p} pair {i}");
            let x = attempt!(t, intersect_conics(&c, &d), ctx);
            t.check(x.total_multiplicity() == 4, || format!("{ctx}: multiplicities {:?}", x.points));
            let (cc, dd) = (c.map(&x.embedding), d.map(&x.embedding));
            t.check(x.points.iter().all(|(q, _)| cc.contains(q) && dd.contains(q)), || {
                format!("{ctx}: reported point off a conic")
            });
            let brute = plane.iter().filter(|q| c.contains(q) && d.contains(q)).count();
            let reported = x.points.iter().filter(|(q, _)| is_base_rational(q, p as u128)).count();
            t.check(brute == reported, || format!("{ctx}: {brute} rational points, {reported} reported"));
        }
    }
    t
}

// Criterion 2 ----------------------------------------------------------------

fn table_type(t: &Elem, a: &Elem, b: &Elem) -> Option<IntersectionType> {
    let f = t.field();
    let delta = &t.square() - &(&(&f.from_i64(4) * a) * &(&f.one() - b));
    if !b.is_one() {
        Some(if delta.is_zero() { IntersectionType::Double } else { IntersectionType::Simple })
    } else if !t.is_zero() {
        Some(IntersectionType::Osculating)
    } else if !a.is_zero() {
        Some(IntersectionType::Hyperosculating)
    } else {
        None
    }
}

fn classification() -> Tally {
    let mut t = Tally::default();
    for p in [5u64, 7, 13] {
        for (i, (c, d)) in corpus(p).into_iter().enumerate() {
            let ctx = format!("F_{p} pair {i}");
            let m = attempt!(t, intersection_multiplicities(&c, &d), ctx);
            let k = attempt!(t, classify(&c, &d), ctx);
            t.check(k.multiplicities() == m.as_slice(), || format!("{ctx}: {k} vs {m:?}"));
        }
    }
    let mut seen = [0usize; 5];
    for p in [5u64, 7, 11] {
        let f = Field::prime(p).unwrap();
        let d = Conic::standard(&f);
        let es = f.elements().unwrap();
        for tt in &es {
            for a in &es {
                for b in es.iter().filter(|b| !b.is_zero()) {
                    let ctx = format!("F_{p} (t,a,b)=({tt},{a},{b})");
                    let c = attempt!(t, Conic::normal_form(tt, a, b), ctx);
                    match table_type(tt, a, b) {
                        None => t.check(classify(&c, &d).is_err(), || format!("{ctx}: C = D accepted")),
                        Some(want) => {
                            seen[IntersectionType::ALL.iter().position(|x| *x == want).unwrap()] += 1;
                            let got = attempt!(t, classify(&c, &d), ctx);
                            t.check(got == want, || format!("{ctx}: classify {got}, table {want}"));
                            let m = attempt!(t, intersection_multiplicities(&c, &d), ctx);
                            t.check(m.as_slice() == want.multiplicities(), || format!("{ctx}: multiplicities {m:?}"));
                        }
                    }
                }
            }
        }
    }
    t.check(seen[1..].iter().all(|&n| n > 0), || format!("tangent rows exercised {:?}", &seen[1..]));
    t.note(format!("table rows (2,1,1),(2,2),(3,1),(4): {:?}", &seen[1..]));
    t
}

// Criterion 3 ----------------------------------------------------------------

fn porism() -> Tally {
    let mut t = Tally::default();
    let f = Field::prime(11).unwrap();
    let mut r = rng(3);
    let steps = default_max_steps(&f);
    let mut periods = std::collections::BTreeSet::new();
    for i in 0..200usize {
        let itype = IntersectionType::ALL[i % 5];
        let ctx = format!("pair {i} {itype}");
        let (c, d) = attempt!(t, random_pair_of_type(&f, itype, &mut r), ctx);
        let cfg = attempt!(t, PonceletConfig::new(c, d), ctx);
        t.check(cfg.intersection_type() == itype, || format!("{ctx}: generated {}", cfg.intersection_type()));
        let rep = attempt!(t, porism_check(&cfg, 20, steps, i as u64), ctx);
        t.check(rep.runs.len() >= 2, || format!("{ctx}: only {} starts", rep.runs.len()));
        t.check(rep.pass, || format!("{ctx}: periods {:?}", rep.periods()));
        let closed = rep.runs.iter().all(|s| matches!(s.result.outcome, Outcome::Closed { .. }));
        t.check(closed, || format!("{ctx}: a run did not close within {steps}"));
        if let Some(n) = rep.period() {
            periods.insert(n);
        }
        let first = &rep.runs[0];
        let other = attempt!(t, run(&cfg, &first.c1, Branch::Max, steps), ctx);
        t.check(other.outcome == first.result.outcome, || format!("{ctx}: branches disagree"));
    }
    t.note(format!("periods seen {periods:?}"));
    t
}

// Criterion 4 ----------------------------------------------------------------

fn osculating_char_p() -> Tally {
    let mut t = Tally::default();
    for p in [3u64, 5, 7, 11, 13] {
        let f = Field::prime(p).unwrap();
        let mut r = rng(40 + p);
        for itype in [IntersectionType::Osculating, IntersectionType::Hyperosculating] {
            for i in 0..20 {
                let ctx = format!("F_{p} {itype} #{i}");
                let (c, d) = attempt!(t, random_pair_of_type(&f, itype, &mut r), ctx);
                let off_t = p2_points(&f)
                    .into_iter()
                    .filter(|q| c.contains(q) && !is_tangency_point(&c, &d, q))
                    .count();
                let cfg = attempt!(t, PonceletConfig::new(c, d), ctx);
                let rep = attempt!(t, porism_check(&cfg, p as usize + 1, 10 * p, i), ctx);
                t.check(rep.exhaustive && rep.runs.len() == off_t, || {
                    format!("{ctx}: {} starts, {off_t} points of C off T", rep.runs.len())
                });
                for s in &rep.runs {
                    t.check(s.result.outcome == Outcome::Closed { period: p }, || {
                        format!("{ctx}: start {} gave {:?}", s.c1, s.result.outcome)
                    });
                }
            }
        }
    }
    t
}

// Criterion 5 ----------------------------------------------------------------

fn osculating_char_0() -> Tally {
    let mut t = Tally::default();
    let q = Field::rational();
    let params = [(1, 0), (2, -3), (-1, 2), (0, 1), (0, -2)];
    let mut jobs = Vec::new();
    for (tt, a) in params {
        for x in [1i64, 2, 3] {
            jobs.push((tt, a, x));
        }
    }
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(tt, a, x)| {
                let q = q.clone();
                s.spawn(move || {
                    let c = Conic::normal_form(&q.from_i64(tt), &q.from_i64(a), &q.one())?;
                    let cfg = PonceletConfig::new(c, Conic::standard(&q))?;
                    let c1 = ProjPoint::from_i64(&q, [x, 1, x * x + tt * x + a])?;
                    Ok::<_, poncelet_core::Error>((cfg.intersection_type(), run(&cfg, &c1, Branch::Min, 10_000)?))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for ((tt, a, x), res) in jobs.into_iter().zip(results) {
        let ctx = format!("t={tt} a={a} c1=[{x}:1:{}]", x * x + tt * x + a);
        let (itype, r) = attempt!(t, res, ctx);
        t.check(itype.is_osculating(), || format!("{ctx}: type {itype}"));
        t.check(r.outcome == Outcome::Open { steps: 10_000 }, || format!("{ctx}: {:?}", r.outcome));
    }
    t.note("bounded: 10000 steps per start".into());
    t
}

// Criterion 6 ----------------------------------------------------------------

/// Independent float iteration for two circles, the outer one centred at 0.
fn float_poncelet(centre: (f64, f64), r_in: f64, c1: (f64, f64), d1: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let tangent_points = |p: (f64, f64)| {
        let (dx, dy) = (p.0 - centre.0, p.1 - centre.1);
        let dist2 = dx * dx + dy * dy;
        let k = r_in * r_in / dist2;
        let h = r_in * (dist2 - r_in * r_in).sqrt() / dist2;
        [
            (centre.0 + k * dx - h * dy, centre.1 + k * dy + h * dx),
            (centre.0 + k * dx + h * dy, centre.1 + k * dy - h * dx),
        ]
    };
    let dist = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
    let (mut c, mut d) = (c1, d1);
    let mut out = vec![c];
    for _ in 0..n {
        let dir = (d.0 - c.0, d.1 - c.1);
        let s = -2.0 * (c.0 * dir.0 + c.1 * dir.1) / (dir.0 * dir.0 + dir.1 * dir.1);
        c = (c.0 + s * dir.0, c.1 + s * dir.1);
        let [a, b] = tangent_points(c);
        d = if dist(a, d) > dist(b, d) { a } else { b };
        out.push(c);
    }
    out
}

fn circle_triangle() -> Tally {
    let mut t = Tally::default();
    let q = Field::rational();
    let (big_r, r, dd) = (BigRational::from_integer(4.into()), BigRational::new(3.into(), 2.into()), BigRational::from_integer(2.into()));
    t.check(&dd * &dd == &big_r * &big_r - BigRational::from_integer(2.into()) * &big_r * &r, || "d² ≠ R² − 2Rr".into());
    let c = Conic::from_i64(&q, [1, 1, -16, 0, 0, 0]).unwrap();
    let d = Conic::from_i64(&q, [4, 4, 7, 0, 16, 0]).unwrap();
    let cfg = PonceletConfig::new(c.clone(), d.clone()).unwrap();
    let starts = [[4, 0, 1], [-4, 0, 1], [0, 4, 1], [0, -4, 1], [12, 16, 5]];
    let mut drawn = false;
    for s in &starts {
        let c1 = ProjPoint::from_i64(&q, *s).unwrap();
        let ctx = format!("c1 = {c1}");
        t.check(c.contains(&c1), || format!("{ctx}: not on C"));
        let res = attempt!(t, run(&cfg, &c1, Branch::Min, 10_000), ctx);
        t.check(res.outcome == Outcome::Closed { period: 3 }, || format!("{ctx}: {:?}", res.outcome));
        let lifted_cfg = cfg.map(&lift_of(&res.field, &q));
        for (i, st) in res.orbit.iter().enumerate() {
            let next = &res.orbit[(i + 1) % res.orbit.len()];
            let chord = attempt!(t, line_through(&st.c, &next.c), ctx);
            let tangent = attempt!(t, lifted_cfg.d().tangent_at(&st.d), ctx);
            t.check(chord == tangent, || format!("{ctx}: chord {i} is not tangent to D at d{}", i + 1));
        }
        let other = attempt!(t, run(&cfg, &c1, Branch::Max, 10_000), ctx);
        t.check(other.outcome == Outcome::Closed { period: 3 }, || format!("{ctx}: other branch {:?}", other.outcome));
        if !drawn {
            drawn = true;
            let fig = attempt!(t, svg::figure(&cfg, &res), ctx);
            t.check(fig.chords.len() == 3, || format!("figure has {} chords", fig.chords.len()));
            for (a, b) in &fig.chords {
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let dist = ((a.0 + 2.0) * dy - a.1 * dx).abs() / (dx * dx + dy * dy).sqrt();
                t.check((dist - 1.5).abs() < 1e-9, || format!("drawn chord at distance {dist} from the inner centre"));
            }
            let doc = fig.to_svg();
            t.check(doc.matches("<line class=\"chord\"").count() == 3, || "svg has no triangle".into());
        }
    }
    let pts = float_poncelet((-2.0, 0.0), 1.5, (2.0780924877172398, 3.417825567885695), (-2.6003371158438604, 1.3746255298590504), 3);
    let published = [(-3.91948610191114, 0.7985165602073765), (-2.3522410968808103, -3.235268431234871), (2.0780924877172398, 3.417825567885695)];
    for (i, (got, want)) in pts[1..].iter().zip(published).enumerate() {
        let err = (got.0 - want.0).abs().max((got.1 - want.1).abs());
        t.check(err < 1e-9, || format!("float vertex c{} = {got:?}, drawn at {want:?}", i + 2));
    }
    t.note("float cross-check of the drawn vertices at 1e-9".into());
    t
}

fn lift_of(target: &Field, base: &Field) -> Embedding {
    if target == base {
        return Embedding::identity(base);
    }
    let poncelet_core::field::FieldKind::RationalQuadratic { d } = target.kind() else {
        panic!("unexpected field {target}");
    };
    let (emb, _) = base.from_rational(d).unwrap().lift_to_quadratic_extension().unwrap();
    assert_eq!(emb.target(), target);
    emb
}

// Criterion 7 ----------------------------------------------------------------

fn binom(n: usize, k: usize) -> i64 {
    [[1, 0, 0], [1, 1, 0], [1, 2, 1]][n][k]
}

/// Coefficients of `XᵃYᵇ` of `H` around `(u, v)` in the affine chart
/// containing it.
fn local_expansion(h: &BiquadraticForm, u: &P1Point, v: &P1Point) -> [[Elem; 3]; 3] {
    let f = h.field();
    let chart = |p: &P1Point| -> (Elem, bool) {
        if p.w().is_zero() {
            (f.zero(), true)
        } else {
            (p.s() / p.w(), false)
        }
    };
    let ((x0, ru), (y0, rv)) = (chart(u), chart(v));
    let g = |i: usize, j: usize| {
        let ii = if ru { 2 - i } else { i };
        let jj = if rv { 2 - j } else { j };
        h.coeffs()[ii][jj].clone()
    };
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = f.zero();
            for i in a..3 {
                for j in b..3 {
                    let w = f.from_i64(binom(i, a) * binom(j, b));
                    acc = &acc + &(&(&g(i, j) * &w) * &(&x0.pow((i - a) as u128) * &y0.pow((j - b) as u128)));
                }
            }
            acc
        })
    })
}

fn brute_singular(h: &BiquadraticForm, u: &P1Point, v: &P1Point) -> bool {
    let l = local_expansion(h, u, v);
    l[0][0].is_zero() && l[1][0].is_zero() && l[0][1].is_zero()
}

fn tangent_cone_disc(h: &BiquadraticForm, u: &P1Point, v: &P1Point) -> Elem {
    let l = local_expansion(h, u, v);
    &l[1][1].square() - &(&(&h.field().from_i64(4) * &l[2][0]) * &l[0][2])
}

fn ecurve_structure() -> Tally {
    let mut t = Tally::default();
    let f = Field::prime(13).unwrap();
    let up = f.extension(2).unwrap();
    let big = up.target().clone();
    let small_p1 = p1_points(&f);
    let big_p1 = p1_points(&big);
    let mut r = rng(7);
    let mut brute_big = 0;
    for itype in IntersectionType::ALL {
        for i in 0..100 {
            let ctx = format!("{itype} #{i}");
            let (c, d) = attempt!(t, random_pair_of_type(&f, itype, &mut r), ctx);
            let e = attempt!(t, ECurve::new(&c, &d), ctx);
            let shape = attempt!(t, e.shape(), ctx);
            let h = e.form();
            let to_big = |emb: &Embedding| -> Option<Embedding> {
                if emb.target() == &f {
                    Some(up.clone())
                } else if emb.target() == &big {
                    Some(Embedding::identity(&big))
                } else {
                    None
                }
            };
            let Some(sing_up) = to_big(&shape.singular.embedding) else {
                t.fail(format!("{ctx}: singular set over {}", shape.singular.embedding.target()));
                continue;
            };
            let sing: Vec<EPoint> = {
                let mut v: Vec<EPoint> = shape.singular.points.iter().map(|(a, b)| (a.map(&sing_up), b.map(&sing_up))).collect();
                v.sort_by_key(|p| format!("{}{}", p.0, p.1));
                v
            };
            let tan = attempt!(t, tangency_points(&c, &d), ctx);
            let Some(tan_up) = to_big(&tan.embedding) else {
                t.fail(format!("{ctx}: tangency set over {}", tan.embedding.target()));
                continue;
            };
            let eb = e.map(&up);
            let hb = eb.form().clone();
            let mut tan_params: Vec<EPoint> = Vec::new();
            for p in &tan.points {
                let p = p.map(&tan_up);
                tan_params.push(attempt!(t, eb.to_params(&p, &p), ctx));
            }
            tan_params.sort_by_key(|p| format!("{}{}", p.0, p.1));
            t.check(sing == tan_params, || format!("{ctx}: Sing(E) {sing:?} vs tangency {tan_params:?}"));
            t.check(sing.len() == itype.tangency_count(), || format!("{ctx}: {} singular points", sing.len()));

            for u in &small_p1 {
                for v in &small_p1 {
                    let on = h.eval(u, v).is_zero();
                    let bs = brute_singular(h, u, v);
                    let ms = sing.contains(&(u.map(&up), v.map(&up)));
                    t.check(bs == ms, || format!("{ctx}: ({u},{v}) brute {bs}, module {ms}"));
                    if on {
                        let fixed = match nu(h, &(u.clone(), v.clone())) {
                            Ok(img) => img == (u.clone(), v.clone()),
                            Err(err) => {
                                t.fail(format!("{ctx}: ν({u},{v}): {err}"));
                                continue;
                            }
                        };
                        t.check(fixed == bs, || format!("{ctx}: ({u},{v}) fixed {fixed}, singular {bs}"));
                    }
                }
            }
            if i < 3 {
                brute_big += 1;
                for u in &big_p1 {
                    let fib = hb.fiber_over_u(u);
                    let poly = Poly::new(&big, fib.to_vec());
                    let mut vs: Vec<P1Point> = match poly.roots_in_field() {
                        Ok(rs) => rs.into_iter().map(|(x, _)| P1Point::affine(x)).collect(),
                        Err(_) => big_p1.clone(),
                    };
                    if fib[2].is_zero() {
                        vs.push(P1Point::infinity(&big));
                    }
                    for v in vs {
                        if !hb.eval(u, &v).is_zero() {
                            continue;
                        }
                        let bs = brute_singular(&hb, u, &v);
                        let ms = sing.contains(&(u.clone(), v.clone()));
                        t.check(bs == ms, || format!("{ctx}: over F_169 ({u},{v}) brute {bs}, module {ms}"));
                        if let Ok(img) = nu(&hb, &(u.clone(), v.clone())) {
                            t.check((img == (u.clone(), v.clone())) == bs, || format!("{ctx}: over F_169 Fix(ν) ≠ Sing at ({u},{v})"));
                        }
                    }
                }
            }

            let want_red = matches!(itype, IntersectionType::Double | IntersectionType::Hyperosculating);
            t.check(shape.reducible.is_some() == want_red, || format!("{ctx}: reducible {}", shape.reducible.is_some()));
            let other_way = attempt!(t, is_reducible(&h.transposed()), ctx);
            t.check(other_way.is_some() == want_red, || format!("{ctx}: transposed reducible {}", other_way.is_some()));
            if let Some(red) = &shape.reducible {
                let hf = h.map(&red.embedding);
                let prod = red.factors[0].mul(&red.factors[1]);
                t.check(prod.is_proportional_to(&hf), || format!("{ctx}: factors do not multiply to H"));
                let rf = red.embedding.target().clone();
                let mut swapped = 0;
                for u in p1_points(&rf).into_iter().take(40) {
                    let fib = hf.fiber_over_u(&u);
                    let Ok(rs) = Poly::new(&rf, fib.to_vec()).roots_in_field() else { continue };
                    for (x, _) in rs {
                        let p = (u.clone(), P1Point::affine(x));
                        let comp = red.components_of(&p);
                        if comp[0] == comp[1] {
                            continue;
                        }
                        for (name, img) in [("σ", sigma(&hf, &p)), ("τ", tau(&hf, &p))] {
                            match img {
                                Ok(q) => {
                                    let cq = red.components_of(&q);
                                    t.check(cq == [comp[1], comp[0]], || format!("{ctx}: {name} keeps {p:?} on its component"));
                                    swapped += 1;
                                }
                                Err(err) => t.fail(format!("{ctx}: {name}: {err}")),
                            }
                        }
                    }
                }
                t.check(swapped > 0, || format!("{ctx}: no one-component points sampled"));
            }

            t.check(shape.kind == ShapeKind::for_type(itype), || format!("{ctx}: shape {:?}", shape.kind));
            let nodal = matches!(itype, IntersectionType::Simple | IntersectionType::Double);
            for (u, v) in &sing {
                let disc = tangent_cone_disc(&hb, u, v);
                let cone_nonzero = local_expansion(&hb, u, v)[1..].iter().flatten().any(|x| !x.is_zero())
                    || !local_expansion(&hb, u, v)[0][2].is_zero();
                t.check(cone_nonzero, || format!("{ctx}: point of multiplicity > 2 at ({u},{v})"));
                t.check(disc.is_zero() != nodal, || format!("{ctx}: tangent cone at ({u},{v}) has discriminant {disc}"));
            }
        }
    }
    t.note(format!("brute-force enumeration over F_169 for {brute_big} instances"));
    t
}

// Criterion 8 ----------------------------------------------------------------

fn configs(seed: u64) -> Vec<(Conic, Conic)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for p in [7u64, 11, 13] {
        let f = Field::prime(p).unwrap();
        for itype in IntersectionType::ALL {
            for _ in 0..3 {
                out.push(random_pair_of_type(&f, itype, &mut r).unwrap());
            }
        }
    }
    let q = Field::rational();
    out.push((Conic::from_i64(&q, [1, 1, -16, 0, 0, 0]).unwrap(), Conic::from_i64(&q, [4, 4, 7, 0, 16, 0]).unwrap()));
    for (tt, a, b) in [(1, 0, 1), (0, 1, 1), (1, 1, 3), (2, 1, 2)] {
        let c = Conic::normal_form(&q.from_i64(tt), &q.from_i64(a), &q.from_i64(b)).unwrap();
        out.push((c, Conic::standard(&q)));
    }
    out
}

fn c_points(c: &Conic, n: usize, r: &mut ChaCha8Rng) -> Vec<ProjPoint> {
    let f = c.field();
    let par = c.parametrize(&c.find_point(0).unwrap()).unwrap();
    (0..n)
        .map(|_| {
            let u = if f.is_finite() { f.random(r) } else { f.from_i64(r.gen_range(-9..=9)) };
            par.point_at(&P1Point::affine(u))
        })
        .collect()
}

fn correspondence() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(8);
    let all = configs(80);
    let per = 500 / all.len() + 1;
    let mut states = 0;
    'configs: for (k, (c, d)) in all.iter().enumerate() {
        let cfg = attempt!(t, PonceletConfig::new(c.clone(), d.clone()), format!("config {k}"));
        let e = attempt!(t, ECurve::new(c, d), format!("config {k}"));
        for c1 in c_points(c, 3, &mut r) {
            if cfg.is_tangency(&c1) {
                continue;
            }
            let ctx = format!("config {k} over {} from {c1}", c.field());
            let st = attempt!(t, start(&cfg, &c1, Branch::Min), ctx);
            let emb = if st.lifted { lift_to(&st.config, c.field()) } else { Embedding::identity(c.field()) };
            let el = e.map(&emb);
            let mut s = st.state.clone();
            for _ in 0..per.div_ceil(3) {
                let p = attempt!(t, el.to_params(&s.c, &s.d), ctx);
                t.check(el.form().contains(&p), || format!("{ctx}: state {s} off E"));
                let next = attempt!(t, step(&st.config, &s), ctx);
                let img = attempt!(t, nu(el.form(), &p), ctx);
                let want = attempt!(t, el.to_params(&next.c, &next.d), ctx);
                t.check(img == want, || format!("{ctx}: ν{p:?} = {img:?}, step gives {want:?}"));
                let back = attempt!(t, step_back(&st.config, &s), ctx);
                let img_back = attempt!(t, nu_inverse(el.form(), &p), ctx);
                let want_back = attempt!(t, el.to_params(&back.c, &back.d), ctx);
                t.check(img_back == want_back, || format!("{ctx}: ν⁻¹ disagrees with step_back"));
                states += 1;
                s = next;
                if states >= 500 {
                    break 'configs;
                }
            }
        }
    }
    t.check(states >= 500, || format!("only {states} states"));
    t.note(format!("{states} states over {} configurations", all.len()));
    t
}

fn lift_to(cfg: &PonceletConfig, base: &Field) -> Embedding {
    let target = cfg.field();
    if base.is_finite() {
        let e = base.extension(target.degree() / base.degree()).unwrap();
        assert_eq!(e.target(), target);
        e
    } else {
        lift_of(target, base)
    }
}

// Criterion 9 ----------------------------------------------------------------

fn det(m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let f = m[0][0].field();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = f.zero();
    for j in 0..n {
        let minor: Vec<Vec<Elem>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect()).collect();
        let term = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn canonical_value(l: usize, square: bool, y: &[Elem]) -> Elem {
    let mut acc = y[0].field().zero();
    for i in 0..l {
        acc = &acc + &(&y[2 * i] * &y[2 * i + 1]);
    }
    if square {
        acc = &acc + &y[2 * l].square();
    }
    acc
}

fn random_char2_conic(f: &Field, r: &mut ChaCha8Rng) -> Conic {
    loop {
        let k: [Elem; 6] = std::array::from_fn(|_| f.random(r));
        if let Ok(c) = Conic::new(k) {
            return c;
        }
    }
}

fn char2_structure() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(9);
    for k in [2usize, 3, 4] {
        let f = Field::gf(2, k).unwrap();
        for n in [3usize, 4] {
            for i in 0..500 {
                let ctx = format!("F_{} n={n} #{i}", 1 << k);
                let mut q = QuadraticForm2::zero(&f, n).unwrap();
                for a in 0..n {
                    for b in a..n {
                        q.set(a, b, f.random(&mut r));
                    }
                }
                let cf = attempt!(t, symplectic_normalize(&q), ctx);
                t.check(attempt!(t, cf.verify(&q), ctx), || format!("{ctx}: basis change misses the canonical shape"));
                let g = cf.embedding.target().clone();
                let ql = q.map(&cf.embedding);
                t.check(!det(&cf.basis).is_zero(), || format!("{ctx}: singular basis change"));
                for _ in 0..4 {
                    let y: Vec<Elem> = (0..n).map(|_| g.random(&mut r)).collect();
                    let x: Vec<Elem> = (0..n)
                        .map(|row| (0..n).fold(g.zero(), |acc, col| &acc + &(&cf.basis[row][col] * &y[col])))
                        .collect();
                    t.check(ql.eval(&x) == canonical_value(cf.l, cf.has_square_term, &y), || format!("{ctx}: q(Py) differs at {y:?}"));
                }
            }
        }
    }
    let mut conics = 0;
    let mut attempts = 0;
    while conics < 200 && attempts < 10_000 {
        attempts += 1;
        let k = 2 + attempts % 3;
        let f = Field::gf(2, k).unwrap();
        let order = 1usize << k;
        let c = if attempts % 2 == 0 {
            random_char2_conic(&f, &mut r)
        } else {
            random_transform(&f, &mut r).apply_conic(&Conic::from_i64(&f, [0, 0, 1, 1, 0, 0]).unwrap())
        };
        let plane = p2_points(&f);
        let on: Vec<&ProjPoint> = plane.iter().filter(|p| c.contains(p)).collect();
        let ks = c.coeffs();
        let brute_irreducible = on.len() == order + 1 && !(ks[3].is_zero() && ks[4].is_zero() && ks[5].is_zero());
        let irreducible = char2::is_irreducible(&c).unwrap();
        let ctx = format!("conic {c} over F_{order}");
        t.check(irreducible == brute_irreducible, || format!("{ctx}: irreducible {irreducible}, point count {}", on.len()));
        if !irreducible {
            continue;
        }
        conics += 1;
        let s = attempt!(t, char2::strange_point(&c), ctx);
        let tangents: Vec<ProjLine> = on.iter().take(10).map(|p| char2::tangent_at_char2(&c, p).unwrap()).collect();
        for tl in &tangents {
            t.check(s.lies_on(tl), || format!("{ctx}: tangent {tl} misses {s}"));
        }
        if let [a, b, ..] = tangents.as_slice() {
            t.check(a.meet(b).map(|m| m == s).unwrap_or(false), || format!("{ctx}: two tangents meet off the strange point"));
        }
        let externals: Vec<&ProjPoint> = plane.iter().filter(|p| !c.contains(p) && **p != s).take(5).collect();
        for q in externals {
            let mut lines: Vec<ProjLine> = plane.iter().filter(|p| *p != q).map(|p| line_through(q, p).unwrap()).collect();
            lines.sort_by_key(|l| l.to_string());
            lines.dedup();
            let tangent: Vec<&ProjLine> = lines.iter().filter(|l| on.iter().filter(|p| p.lies_on(l)).count() == 1).collect();
            t.check(tangent.len() == 1, || format!("{ctx}: {} tangents through {q}", tangent.len()));
            if let Some(l) = tangent.first() {
                t.check(**l == line_through(&s, q).unwrap(), || format!("{ctx}: tangent through {q} misses {s}"));
            }
        }
    }
    t.check(conics == 200, || format!("only {conics} irreducible conics"));
    t
}

// Criterion 10 ---------------------------------------------------------------

fn involutions() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(10);
    let all = configs(100);
    let mut points = 0;
    let mut infinite = 0;
    'outer: for round in 0..200 {
        for (k, (c, d)) in all.iter().enumerate() {
            if !c.field().is_finite() {
                continue;
            }
            let ctx = format!("config {k} round {round}");
            let e = attempt!(t, ECurve::new(c, d), ctx);
            let h = e.form();
            let f = c.field();
            let u = if r.gen_range(0..10) == 0 { P1Point::infinity(f) } else { P1Point::affine(f.random(&mut r)) };
            let fib = h.fiber_over_u(&u);
            let mut vs: Vec<P1Point> = match Poly::new(f, fib.to_vec()).roots_in_field() {
                Ok(rs) => rs.into_iter().map(|(x, _)| P1Point::affine(x)).collect(),
                Err(_) => continue,
            };
            if fib[2].is_zero() {
                vs.push(P1Point::infinity(f));
            }
            for v in vs {
                let p = (u.clone(), v);
                infinite += usize::from(p.0.is_infinity() || p.1.is_infinity());
                let s = attempt!(t, sigma(h, &p), ctx);
                let ss = attempt!(t, sigma(h, &s), ctx);
                let tt = attempt!(t, tau(h, &p), ctx);
                let ttt = attempt!(t, tau(h, &tt), ctx);
                let n = attempt!(t, nu(h, &p), ctx);
                let nin = attempt!(t, nu_inverse(h, &n), ctx);
                let ni = attempt!(t, nu_inverse(h, &p), ctx);
                let nni = attempt!(t, nu(h, &ni), ctx);
                t.check(h.contains(&s) && h.contains(&tt) && h.contains(&n), || format!("{ctx}: image off E"));
                t.check(ss == p, || format!("{ctx}: σ² ≠ id at {p:?}"));
                t.check(ttt == p, || format!("{ctx}: τ² ≠ id at {p:?}"));
                t.check(nin == p && nni == p, || format!("{ctx}: ν∘ν⁻¹ ≠ id at {p:?}"));
                points += 1;
                if points >= 1000 {
                    break 'outer;
                }
            }
        }
    }
    t.check(points >= 1000, || format!("only {points} points"));
    t.note(format!("{points} points, {infinite} with a coordinate at infinity"));
    t
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Tally); 10] = [
        (1, "intersection multiplicities sum to 4", bezout),
        (2, "classification matches multiplicities and the (t,a,b) table", classification),
        (3, "one period per pair over F_11", porism),
        (4, "osculating pairs close after p steps over F_p", osculating_char_p),
        (5, "osculating pairs never close over Q", osculating_char_0),
        (6, "circle pair R=4, r=3/2, d=2 closes after 3 steps", circle_triangle),
        (7, "structure of E over F_13", ecurve_structure),
        (8, "Poncelet step equals ν", correspondence),
        (9, "characteristic-2 normal form and strange point", char2_structure),
        (10, "involution laws on E", involutions),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let t0 = Instant::now();
        let tally = f();
        let secs = t0.elapsed().as_secs_f64();
        let verdict = if tally.failures.is_empty() && tally.checks > 0 { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict}: {name} ({} checks, {secs:.1}s)", tally.checks);
        for n in &tally.notes {
            println!("    note: {n}");
        }
        for f in tally.failures.iter().take(10) {
            println!("    failure: {f}");
        }
        if tally.failures.len() > 10 {
            println!("    ... {} more failures", tally.failures.len() - 10);
        }
        failed += usize::from(verdict == "FAIL");
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
