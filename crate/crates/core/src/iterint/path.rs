use crate::{Error, Result, C64};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// `center + radius e^{iθ}`, θ running linearly from `start_angle` to `end_angle`.
    Arc { center: C64, radius: f64, start_angle: f64, end_angle: f64 },
}

impl Segment {
    pub fn point(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start_angle, end_angle } => {
                center + C64::from_polar(radius, start_angle + s * (end_angle - start_angle))
            }
        }
    }

    pub fn velocity(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { center, start_angle, end_angle, .. } => {
                C64::new(0.0, end_angle - start_angle) * (self.point(s) - center)
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start_angle, end_angle } => {
                Segment::Arc { center, radius, start_angle: end_angle, end_angle: start_angle }
            }
        }
    }

    /// Distance from `a` to the image of the segment.
    pub fn distance_to(&self, a: C64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (a - from).norm();
                }
                let s = (((a - from) * d.conj()).re / len2).clamp(0.0, 1.0);
                (a - (from + d * s)).norm()
            }
            Segment::Arc { center, radius, start_angle, end_angle } => {
                let rel = a - center;
                let (lo, hi) = if start_angle <= end_angle {
                    (start_angle, end_angle)
                } else {
                    (end_angle, start_angle)
                };
                let ang = rel.arg();
                let tau = 2.0 * std::f64::consts::PI;
                let mut k = ((lo - ang) / tau).ceil();
                if hi - lo >= tau {
                    k = 0.0;
                }
                let shifted = ang + k * tau;
                let radial = (rel.norm() - radius).abs();
                if hi - lo >= tau || (shifted >= lo && shifted <= hi) {
                    radial
                } else {
                    (a - self.start()).norm().min((a - self.end()).norm())
                }
            }
        }
    }

    /// Pieces `[0, m]` and `[m, 1]` of the parametrization.
    pub fn split(&self, m: f64) -> (Segment, Segment) {
        match *self {
            Segment::Line { from, to } => {
                let mid = self.point(m);
                (Segment::Line { from, to: mid }, Segment::Line { from: mid, to })
            }
            Segment::Arc { center, radius, start_angle, end_angle } => {
                let th = start_angle + m * (end_angle - start_angle);
                (
                    Segment::Arc { center, radius, start_angle, end_angle: th },
                    Segment::Arc { center, radius, start_angle: th, end_angle },
                )
            }
        }
    }
}

/// A tangential base point: a nonzero tangent vector at a puncture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangential {
    pub point: C64,
    pub tangent: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    segments: Vec<Segment>,
    start: Option<Tangential>,
    end: Option<Tangential>,
}

const JOIN_TOL: f64 = 1e-10;

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        Self::decorated(segments, None, None)
    }

    pub fn decorated(
        segments: Vec<Segment>,
        start: Option<Tangential>,
        end: Option<Tangential>,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPath("no segments".into()));
        }
        for w in segments.windows(2) {
            if (w[0].end() - w[1].start()).norm() > JOIN_TOL * (1.0 + w[1].start().norm()) {
                return Err(Error::InvalidPath(format!(
                    "gap between {} and {}",
                    w[0].end(),
                    w[1].start()
                )));
            }
        }
        for s in &segments {
            if let Segment::Arc { radius, .. } = s {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidPath("arc radius must be positive".into()));
                }
            }
        }
        let p = Path { segments, start, end };
        if let Some(t) = start {
            p.check_decoration(t, p.start_point(), "start")?;
        }
        if let Some(t) = end {
            p.check_decoration(t, p.end_point(), "end")?;
        }
        Ok(p)
    }

    fn check_decoration(&self, t: Tangential, at: C64, which: &str) -> Result<()> {
        if t.tangent.norm() == 0.0 || !t.tangent.is_finite() {
            return Err(Error::InvalidPath(format!("{which} tangent vector must be nonzero")));
        }
        if (t.point - at).norm() > JOIN_TOL * (1.0 + at.norm()) {
            return Err(Error::InvalidPath(format!("{which} decoration is not at the path {which}")));
        }
        Ok(())
    }

    /// Straight segments through the given points.
    pub fn polyline(points: &[C64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath("need at least two points".into()));
        }
        Self::new(points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect())
    }

    pub fn line(from: C64, to: C64) -> Result<Self> {
        Self::polyline(&[from, to])
    }

    pub fn with_start(mut self, t: Tangential) -> Result<Self> {
        self.check_decoration(t, self.start_point(), "start")?;
        self.start = Some(t);
        Ok(self)
    }

    pub fn with_end(mut self, t: Tangential) -> Result<Self> {
        self.check_decoration(t, self.end_point(), "end")?;
        self.end = Some(t);
        Ok(self)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start_decoration(&self) -> Option<Tangential> {
        self.start
    }

    pub fn end_decoration(&self) -> Option<Tangential> {
        self.end
    }

    pub fn is_decorated(&self) -> bool {
        self.start.is_some() || self.end.is_some()
    }

    pub fn start_point(&self) -> C64 {
        self.segments[0].start()
    }

    pub fn end_point(&self) -> C64 {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn reverse(&self) -> Path {
        Path {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            start: self.end,
            end: self.start,
        }
    }

    /// `self` followed by `next` (in the composition notation this is `next · self`).
    pub fn then(&self, next: &Path) -> Result<Path> {
        if self.end.is_some() || next.start.is_some() {
            return Err(Error::InvalidPath("cannot join through a tangential base point".into()));
        }
        let mut segs = self.segments.clone();
        segs.extend_from_slice(&next.segments);
        Self::decorated(segs, self.start, next.end)
    }

    /// Splits at an interior point: at the middle segment boundary, or at
    /// the midpoint of a single segment.
    pub fn split_middle(&self) -> (Path, Path) {
        let n = self.segments.len();
        let (a, b) = if n >= 2 {
            (self.segments[..n / 2].to_vec(), self.segments[n / 2..].to_vec())
        } else {
            let (x, y) = self.segments[0].split(0.5);
            (vec![x], vec![y])
        };
        (
            Path { segments: a, start: self.start, end: None },
            Path { segments: b, start: None, end: self.end },
        )
    }

    /// Distance from `a` to the path image.
    pub fn distance_to(&self, a: C64) -> f64 {
        self.segments.iter().map(|s| s.distance_to(a)).fold(f64::INFINITY, f64::min)
    }

    /// Parses a JSON list of `line`, `arc`, `tangential_start` and
    /// `tangential_end` records.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(tag = "type", rename_all = "snake_case")]
        enum Rec {
            Line { from: [f64; 2], to: [f64; 2] },
            Arc { center: [f64; 2], radius: f64, start_angle: f64, end_angle: f64 },
            TangentialStart { point: [f64; 2], tangent: [f64; 2] },
            TangentialEnd { point: [f64; 2], tangent: [f64; 2] },
        }
        let recs: Vec<Rec> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let c = |v: [f64; 2]| C64::new(v[0], v[1]);
        let mut segs = Vec::new();
        let (mut start, mut end) = (None, None);
        for r in recs {
            match r {
                Rec::Line { from, to } => segs.push(Segment::Line { from: c(from), to: c(to) }),
                Rec::Arc { center, radius, start_angle, end_angle } => {
                    segs.push(Segment::Arc { center: c(center), radius, start_angle, end_angle })
                }
                Rec::TangentialStart { point, tangent } => {
                    start = Some(Tangential { point: c(point), tangent: c(tangent) })
                }
                Rec::TangentialEnd { point, tangent } => {
                    end = Some(Tangential { point: c(point), tangent: c(tangent) })
                }
            }
        }
        Self::decorated(segs, start, end)
    }
}
