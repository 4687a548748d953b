//! Track geometry: polyline centerline, Frenet projection, and presets.

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// A track described by its centerline polyline and a constant half-width.
///
/// Cumulative segment lengths are precomputed at construction so projection
/// and frenet-to-world queries stay allocation-free.
#[derive(Debug, Clone)]
pub struct TrackSpec {
    centerline: Vec<Vec2>,
    half_width: f64,
    closed: bool,
    /// cum_len[i] = arclength at the start of segment i; last entry = total.
    cum_len: Vec<f64>,
}

/// Position expressed relative to the centerline: arclength `s`, signed
/// lateral offset `d` (positive = left of the direction of travel), and the
/// heading of the projecting segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetCoord {
    pub s: f64,
    pub d: f64,
    pub tangent_heading: f64,
}

impl TrackSpec {
    pub fn new(centerline: Vec<Vec2>, half_width: f64, closed: bool) -> Result<Self> {
        if centerline.len() < 2 {
            return Err(Error::Config(format!(
                "track centerline needs at least 2 points, got {}",
                centerline.len()
            )));
        }
        if !(half_width > 0.0) {
            return Err(Error::Config(format!(
                "track half_width must be positive, got {half_width}"
            )));
        }
        let mut cum_len = Vec::with_capacity(centerline.len() + 1);
        cum_len.push(0.0);
        let mut total = 0.0;
        for w in centerline.windows(2) {
            let len = (w[1] - w[0]).norm();
            if len < 1e-9 {
                return Err(Error::Config(
                    "track centerline has coincident consecutive points".into(),
                ));
            }
            total += len;
            cum_len.push(total);
        }
        if closed {
            let seam = (centerline[0] - *centerline.last().unwrap()).norm();
            if seam < 1e-9 {
                return Err(Error::Config(
                    "closed track must not repeat its first point".into(),
                ));
            }
            total += seam;
            cum_len.push(total);
        }
        Ok(TrackSpec {
            centerline,
            half_width,
            closed,
            cum_len,
        })
    }

    pub fn centerline(&self) -> &[Vec2] {
        &self.centerline
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Total centerline arclength (including the closing segment on loops).
    pub fn total_length(&self) -> f64 {
        *self.cum_len.last().unwrap()
    }

    fn segment_count(&self) -> usize {
        if self.closed {
            self.centerline.len()
        } else {
            self.centerline.len() - 1
        }
    }

    fn segment(&self, i: usize) -> (Vec2, Vec2) {
        let n = self.centerline.len();
        (self.centerline[i], self.centerline[(i + 1) % n])
    }

    /// Nearest-point projection of `point` onto the centerline polyline.
    ///
    /// Ties between segments go to the lower segment index, so a point on the
    /// seam of a closed track projects to s = 0 rather than s = total length.
    pub fn project(&self, point: Vec2) -> FrenetCoord {
        let mut best_dist2 = f64::INFINITY;
        let mut best = FrenetCoord {
            s: 0.0,
            d: 0.0,
            tangent_heading: 0.0,
        };
        for i in 0..self.segment_count() {
            let (p0, p1) = self.segment(i);
            let seg = p1 - p0;
            let seg_len2 = seg.dot(seg);
            let t = (point - p0).dot(seg) / seg_len2;
            let t = t.clamp(0.0, 1.0);
            let proj = p0 + seg.scale(t);
            let offset = point - proj;
            let dist2 = offset.dot(offset);
            if dist2 < best_dist2 {
                best_dist2 = dist2;
                let seg_len = seg_len2.sqrt();
                let tangent = seg.scale(1.0 / seg_len);
                best = FrenetCoord {
                    s: self.cum_len[i] + t * seg_len,
                    d: tangent.cross(offset),
                    tangent_heading: seg.y.atan2(seg.x),
                };
            }
        }
        best
    }

    /// World pose for a frenet coordinate: point offset `d` to the left of
    /// the centerline at arclength `s`, heading along the local tangent.
    /// On closed tracks `s` wraps modulo the total length.
    pub fn frenet_to_world(&self, s: f64, d: f64) -> (Vec2, f64) {
        let total = self.total_length();
        let s = if self.closed {
            s.rem_euclid(total)
        } else {
            s.clamp(0.0, total)
        };
        // cum_len is sorted; find the segment containing s.
        let mut i = match self
            .cum_len
            .binary_search_by(|probe| probe.partial_cmp(&s).unwrap())
        {
            Ok(idx) => idx,
            Err(idx) => idx.saturating_sub(1),
        };
        i = i.min(self.segment_count() - 1);
        let (p0, p1) = self.segment(i);
        let seg = p1 - p0;
        let seg_len = seg.norm();
        let t = (s - self.cum_len[i]) / seg_len;
        let tangent = seg.scale(1.0 / seg_len);
        let left = Vec2::new(-tangent.y, tangent.x);
        let pos = p0 + seg.scale(t) + left.scale(d);
        (pos, seg.y.atan2(seg.x))
    }

    /// Straight track along +x of the given length.
    pub fn straight(length: f64, half_width: f64) -> Result<Self> {
        TrackSpec::new(
            vec![Vec2::ZERO, Vec2::new(length, 0.0)],
            half_width,
            false,
        )
    }

    /// Closed oval: two straights of `straight_len` joined by semicircles of
    /// `radius`, run counterclockwise starting at the origin heading +x.
    /// Each semicircle is sampled with `arc_points` interior points.
    pub fn oval(straight_len: f64, radius: f64, half_width: f64, arc_points: usize) -> Result<Self> {
        let mut pts = vec![Vec2::ZERO, Vec2::new(straight_len, 0.0)];
        let right_center = Vec2::new(straight_len, radius);
        let step = std::f64::consts::PI / (arc_points + 1) as f64;
        for k in 1..=arc_points {
            let phi = -std::f64::consts::FRAC_PI_2 + k as f64 * step;
            pts.push(right_center + Vec2::new(phi.cos(), phi.sin()).scale(radius));
        }
        pts.push(Vec2::new(straight_len, 2.0 * radius));
        pts.push(Vec2::new(0.0, 2.0 * radius));
        let left_center = Vec2::new(0.0, radius);
        for k in 1..=arc_points {
            let phi = std::f64::consts::FRAC_PI_2 + k as f64 * step;
            pts.push(left_center + Vec2::new(phi.cos(), phi.sin()).scale(radius));
        }
        TrackSpec::new(pts, half_width, true)
    }
}

/// True when the frenet offset is strictly outside the drivable band.
/// The boundary itself (|d| = half_width) counts as on-track.
pub fn is_off_track(frenet: &FrenetCoord, track: &TrackSpec) -> bool {
    frenet.d.abs() > track.half_width()
}
