//! SVG figures of a characteristic-0 Poncelet run.
//!
//! Exact coordinates are converted to `f64` through the real embedding
//! `√d ↦ +√d` and the chart `z = 1`; the figure is cosmetic and only the
//! JSON outputs are exact. Numbers are printed with four decimals, so the
//! output is byte-identical for identical input.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poncelet::{Outcome, PonceletConfig, ProcessResult};
use crate::projective::{Conic, ProjPoint};

/// Chords drawn for a run that did not close.
pub const OPEN_CHORDS: usize = 8;

const SAMPLES: usize = 720;

type P2 = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub label: String,
    pub class: &'static str,
    /// Polylines; a bounded curve is one closed polyline.
    pub paths: Vec<Vec<P2>>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Marker {
    pub at: P2,
    pub label: String,
    pub class: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgFigure {
    /// `(min_x, min_y, width, height)` in user coordinates, `y` up.
    pub viewport: (f64, f64, f64, f64),
    pub curves: Vec<Curve>,
    pub chords: Vec<(P2, P2)>,
    pub markers: Vec<Marker>,
    pub caption: String,
}

fn real(e: &Elem) -> Result<f64> {
    e.to_f64()
        .ok_or_else(|| Error::Unsupported(format!("{} has no real embedding", e.field())))
}

fn real3(p: &ProjPoint) -> Result<[f64; 3]> {
    let c = p.coords();
    Ok([real(&c[0])?, real(&c[1])?, real(&c[2])?])
}

fn affine(p: &[f64; 3]) -> Option<P2> {
    let n = p.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (p[2].abs() > 1e-9 * n).then(|| (p[0] / p[2], p[1] / p[2]))
}

struct RealConic([f64; 6]);

impl RealConic {
    fn new(c: &Conic) -> Result<RealConic> {
        let k = c.coeffs();
        let mut out = [0.0; 6];
        for (o, e) in out.iter_mut().zip(k) {
            *o = real(e)?;
        }
        Ok(RealConic(out))
    }

    fn eval(&self, v: &[f64; 3]) -> f64 {
        let a = &self.0;
        a[0] * v[0] * v[0]
            + a[1] * v[1] * v[1]
            + a[2] * v[2] * v[2]
            + a[3] * v[0] * v[1]
            + a[4] * v[0] * v[2]
            + a[5] * v[1] * v[2]
    }

    fn pol(&self, v: &[f64; 3], w: &[f64; 3]) -> f64 {
        let a = &self.0;
        2.0 * (a[0] * v[0] * w[0] + a[1] * v[1] * w[1] + a[2] * v[2] * w[2])
            + a[3] * (v[0] * w[1] + v[1] * w[0])
            + a[4] * (v[0] * w[2] + v[2] * w[0])
            + a[5] * (v[1] * w[2] + v[2] * w[1])
    }

    /// Samples through the projection from a real point `p0` of the conic.
    fn sample(&self, p0: &[f64; 3]) -> (Vec<Vec<P2>>, bool) {
        let n = (p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2]).sqrt();
        let p = [p0[0] / n, p0[1] / n, p0[2] / n];
        let seed = if p[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let q1 = normalize(cross(&p, &seed));
        let q2 = cross(&p, &q1);
        let mut paths: Vec<Vec<P2>> = vec![Vec::new()];
        let mut prev_sign = 0.0;
        let mut breaks = 0;
        for i in 0..=SAMPLES {
            let th = std::f64::consts::PI * i as f64 / SAMPLES as f64;
            let (s, w) = (th.cos(), th.sin());
            let r = [s * q1[0] + w * q2[0], s * q1[1] + w * q2[1], s * q1[2] + w * q2[2]];
            let (f, g) = (self.eval(&r), self.pol(&p, &r));
            let x = [f * p[0] - g * r[0], f * p[1] - g * r[1], f * p[2] - g * r[2]];
            let sign = x[2].signum();
            match affine(&x) {
                Some(pt) if prev_sign == 0.0 || sign == prev_sign => paths.last_mut().unwrap().push(pt),
                Some(pt) => {
                    breaks += 1;
                    paths.push(vec![pt]);
                }
                None => {
                    breaks += 1;
                    paths.push(Vec::new());
                }
            }
            prev_sign = sign;
        }
        paths.retain(|p| p.len() > 1);
        (paths, breaks == 0)
    }
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// The figure of `result`: both conics, the polygon `c₁c₂…`, and the
/// tangency points. `cfg` is the configuration the run started from.
pub fn figure(cfg: &PonceletConfig, result: &ProcessResult) -> Result<SvgFigure> {
    if cfg.field().is_finite() || result.field.is_finite() {
        return Err(Error::Unsupported(
            "finite-field configurations have no real embedding to draw".into(),
        ));
    }
    let first = result
        .orbit
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty orbit".into()))?;
    let mut curves = Vec::new();
    for (label, class, conic, base) in [
        ("C", "outer", cfg.c(), &first.c),
        ("D", "inner", cfg.d(), &first.d),
    ] {
        let (paths, closed) = RealConic::new(conic)?.sample(&real3(base)?);
        curves.push(Curve {
            label: label.into(),
            class,
            paths,
            closed,
        });
    }
    let vertices: Vec<ProjPoint> = result.orbit.iter().map(|s| s.c.clone()).collect();
    let (count, closes) = match result.outcome {
        Outcome::Closed { period } if result.orbit_complete => (period as usize, true),
        _ => (OPEN_CHORDS.min(vertices.len().saturating_sub(1)), false),
    };
    let mut pts: Vec<Option<P2>> = Vec::new();
    for v in &vertices {
        pts.push(affine(&real3(v)?));
    }
    let mut chords = Vec::new();
    for i in 0..count {
        let j = if closes && i + 1 == count { 0 } else { i + 1 };
        if let (Some(a), Some(b)) = (pts[i], pts.get(j).copied().flatten()) {
            chords.push((a, b));
        }
    }
    let shown = if closes { count } else { count + 1 };
    let mut markers: Vec<Marker> = pts
        .iter()
        .take(shown)
        .enumerate()
        .filter_map(|(i, p)| {
            p.map(|at| Marker {
                at,
                label: format!("c{}", i + 1),
                class: "vertex",
            })
        })
        .collect();
    for (i, t) in cfg.tangency().points.iter().enumerate() {
        if let Some(at) = real3(t).ok().and_then(|p| affine(&p)) {
            markers.push(Marker {
                at,
                label: format!("t{}", i + 1),
                class: "tangency",
            });
        }
    }
    let mut bbox: Vec<P2> = markers.iter().map(|m| m.at).collect();
    for c in &curves {
        if c.closed {
            bbox.extend(c.paths.iter().flatten().copied());
        }
    }
    let viewport = frame(&bbox);
    let caption = match result.outcome {
        Outcome::Closed { period } => format!("Poncelet process: stops after {period} steps"),
        Outcome::Open { steps } => format!("Poncelet process: open after {steps} steps"),
        Outcome::HitDegenerate { step } => format!("Poncelet process: reached a tangency point at step {step}"),
    };
    Ok(SvgFigure {
        viewport,
        curves,
        chords,
        markers,
        caption,
    })
}

fn frame(pts: &[P2]) -> (f64, f64, f64, f64) {
    if pts.is_empty() {
        return (-1.0, -1.0, 2.0, 2.0);
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let side = (x1 - x0).max(y1 - y0).max(1e-3);
    let m = 0.1 * side;
    (x0 - m, y0 - m, x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m)
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

impl SvgFigure {
    pub fn to_svg(&self) -> String {
        let (x, y, w, h) = self.viewport;
        let stroke = num(w.max(h) / 300.0);
        let r = num(w.max(h) / 120.0);
        let font = num(w.max(h) / 30.0);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="{}">"##,
            num(x),
            num(-(y + h)),
            num(w),
            num(h),
            (600.0 * h / w).round() as i64
        );
        let _ = writeln!(s, "  <title>{}</title>", self.caption);
        let _ = writeln!(s, r##"  <g fill="none" stroke-width="{stroke}">"##);
        for c in &self.curves {
            for p in &c.paths {
                let mut d = String::new();
                for (i, (px, py)) in p.iter().enumerate() {
                    let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(*px), num(-py));
                }
                if c.closed {
                    d.push('Z');
                }
                let colour = if c.class == "outer" { "#1f4e99" } else { "#b03a2e" };
                let _ = writeln!(
                    s,
                    r##"    <path class="{}" data-label="{}" stroke="{colour}" d="{}"/>"##,
                    c.class,
                    c.label,
                    d.trim_end()
                );
            }
        }
        for (a, b) in &self.chords {
            let _ = writeln!(
                s,
                r##"    <line class="chord" stroke="#222222" x1="{}" y1="{}" x2="{}" y2="{}"/>"##,
                num(a.0),
                num(-a.1),
                num(b.0),
                num(-b.1)
            );
        }
        let _ = writeln!(s, "  </g>");
        for m in &self.markers {
            let fill = if m.class == "vertex" { "#222222" } else { "#2e8b57" };
            let _ = writeln!(
                s,
                r##"  <circle class="{}" cx="{}" cy="{}" r="{r}" fill="{fill}"/>"##,
                m.class,
                num(m.at.0),
                num(-m.at.1)
            );
            let _ = writeln!(
                s,
                r##"  <text x="{}" y="{}" font-size="{font}">{}</text>"##,
                num(m.at.0 + w / 80.0),
                num(-m.at.1 - h / 80.0),
                m.label
            );
        }
        let _ = writeln!(s, "</svg>");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poncelet::{run, Branch};

    fn circles() -> PonceletConfig {
        let q = Field::rational();
        let c = Conic::from_i64(&q, [1, 1, -16, 0, 0, 0]).unwrap();
        let d = Conic::from_i64(&q, [4, 4, 7, 0, 16, 0]).unwrap();
        PonceletConfig::new(c, d).unwrap()
    }

    #[test]
    fn triangle_is_drawn() {
        let cfg = circles();
        let q = cfg.field().clone();
        let r = run(&cfg, &ProjPoint::from_i64(&q, [4, 0, 1]).unwrap(), Branch::Min, 100).unwrap();
        assert_eq!(r.outcome, Outcome::Closed { period: 3 });
        let fig = figure(&cfg, &r).unwrap();
        assert_eq!(fig.chords.len(), 3);
        assert!(fig.curves.iter().all(|c| c.closed));
        for (a, b) in &fig.chords {
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let dist = ((a.0 + 2.0) * dy - a.1 * dx).abs() / (dx * dx + dy * dy).sqrt();
            assert!((dist - 1.5).abs() < 1e-9);
        }
        let svg = fig.to_svg();
        assert_eq!(svg, figure(&cfg, &r).unwrap().to_svg());
        assert_eq!(svg.matches("<line").count(), 3);
    }

    #[test]
    fn open_run_is_truncated() {
        let q = Field::rational();
        let one = q.one();
        let c = Conic::normal_form(&one, &q.zero(), &one).unwrap();
        let cfg = PonceletConfig::new(c, Conic::standard(&q)).unwrap();
        let start = ProjPoint::from_i64(&q, [2, -4, 1]).unwrap();
        assert!(cfg.c().contains(&start));
        let r = run(&cfg, &start, Branch::Min, 20).unwrap();
        assert!(matches!(r.outcome, Outcome::Open { .. }));
        let fig = figure(&cfg, &r).unwrap();
        assert_eq!(fig.chords.len(), OPEN_CHORDS);
    }

    #[test]
    fn finite_fields_are_refused() {
        let f = Field::prime(7).unwrap();
        let c = Conic::normal_form(&f.zero(), &f.one(), &f.one()).unwrap();
        let cfg = PonceletConfig::new(c, Conic::standard(&f)).unwrap();
        let r = run(&cfg, &ProjPoint::from_i64(&f, [0, 0, 1]).unwrap(), Branch::Min, 5).unwrap();
        assert!(matches!(figure(&cfg, &r), Err(Error::Unsupported(_))));
    }
}
