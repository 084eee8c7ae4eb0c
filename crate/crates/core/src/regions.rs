//! The cutoff window `Z_c` and the four controlling regions around a point
//! of the `(cos φ, R)` plane.
//!
//! For an anchor `P` the two boundary lines are
//!
//! * `ℒ₁(P)`, through `P` and `A₁ = (cos φ = 1, R = 0)`: the up-step
//!   `[n+1, k, (n cos φ + 1)/(n+1)]` moves along it towards `A₁`;
//! * `ℒ₂(P)`, through `P` and `A₂ = (cos φ_c, a_c)`: the down-step
//!   `[n-1, k-a_c, (n cos φ - cos φ_c)/(n-1)]` moves along it away from
//!   `A₂`.
//!
//! `ℐ₁` runs from `P` towards `A₁` until `cos φ = cos φ_c`, `ℐ₂` from `P`
//! away from `A₂` until `R = 0`; `𝒥₁`, `𝒥₂` are the opposite rays. The
//! lower region lies under `ℐ₁ ∪ ℐ₂`, the left region between `ℐ₂` and
//! `𝒥₁`, the upper region between `𝒥₁` and `𝒥₂`, and the right region
//! between `𝒥₂` and `ℐ₁`.

use crate::bounds::kl_bound;
use crate::error::{Error, Result};
use crate::plane::{clip_all, on_segment, rectangle, Crossing, HalfPlane, PlanePoint, Sector};

/// Controlling-region tag; shares its representation with the binary cones.
pub type Region = Sector;

/// Boundary tolerance used by [`ControllingRegions::membership`].
pub const REGION_TOL: f64 = 1e-12;

/// `Z_c = {0 ≤ cos φ ≤ cos φ_c, 0 ≤ R ≤ H(φ_c)}` with `a_c = ⌊H(φ_c)⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffRegion {
    pub phi_c: f64,
    pub a_c: u32,
    /// `H(φ_c)`, the top of the window.
    pub h_c: f64,
}

impl CutoffRegion {
    pub fn new(phi_c: f64) -> Result<Self> {
        if !(phi_c > 0.0 && phi_c < std::f64::consts::FRAC_PI_2) {
            return Err(Error::OutOfRange {
                name: "phi_c",
                value: phi_c,
                range: "(0, pi/2)",
            });
        }
        let h_c = kl_bound(phi_c)?;
        Ok(CutoffRegion {
            phi_c,
            a_c: h_c.floor() as u32,
            h_c,
        })
    }

    pub fn cos_c(&self) -> f64 {
        self.phi_c.cos()
    }

    /// `(cos φ_c, a_c)`.
    pub fn apex(&self) -> PlanePoint {
        PlanePoint::new(self.cos_c(), self.a_c as f64)
    }

    pub fn contains(&self, q: PlanePoint) -> bool {
        let tol = 1e-12;
        q.x >= -tol && q.x <= self.cos_c() + tol && q.y >= -tol && q.y <= self.h_c + tol
    }

    pub fn window(&self) -> Vec<PlanePoint> {
        rectangle(0.0, self.cos_c(), 0.0, self.h_c)
    }
}

/// Plane point `(cos φ, R)`.
pub fn plane_point(cos_phi: f64, rate: f64) -> PlanePoint {
    PlanePoint::new(cos_phi, rate)
}

/// The two lines through an anchor and the regions they cut from `Z_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllingRegions {
    pub cutoff: CutoffRegion,
    pub anchor: PlanePoint,
    /// End of `ℐ₁` on the line `cos φ = cos φ_c`.
    pub i1_end: PlanePoint,
    /// End of `ℐ₂` on the axis `R = 0`.
    pub i2_end: PlanePoint,
    crossing: Crossing,
}

/// Builds the controlling regions of `P = (cos φ, R)`.
///
/// Requires `0 ≤ cos φ < cos φ_c` and `0 ≤ R < a_c`, so that both lines
/// are well defined and `A₂` lies strictly up and to the right of `P`.
pub fn controlling_regions(anchor: PlanePoint, cutoff: &CutoffRegion) -> Result<ControllingRegions> {
    let cos_c = cutoff.cos_c();
    let a_c = cutoff.a_c as f64;
    if !(anchor.x >= 0.0 && anchor.x < cos_c && anchor.y >= 0.0 && anchor.y < a_c) {
        return Err(Error::OutsideCutoff(format!(
            "anchor (cos phi = {}, R = {}) must satisfy 0 <= cos phi < {cos_c} and 0 <= R < a_c = {}",
            anchor.x, anchor.y, cutoff.a_c
        )));
    }
    let t1 = (cos_c - anchor.x) / (1.0 - anchor.x);
    let i1_end = PlanePoint::new(cos_c, anchor.y * (1.0 - t1));
    let t2 = anchor.y / (a_c - anchor.y);
    let i2_end = PlanePoint::new(anchor.x + t2 * (anchor.x - cos_c), 0.0);
    let crossing = Crossing::new(
        anchor,
        PlanePoint::new(1.0 - anchor.x, -anchor.y),
        PlanePoint::new(anchor.x - cos_c, anchor.y - a_c),
    )
    .ok_or_else(|| Error::OutsideCutoff("boundary lines are parallel".into()))?;
    Ok(ControllingRegions {
        cutoff: *cutoff,
        anchor,
        i1_end,
        i2_end,
        crossing,
    })
}

impl ControllingRegions {
    /// Which region `q ∈ Z_c` belongs to; points within [`REGION_TOL`] of
    /// either line are reported as [`Region::Boundary`].
    pub fn membership(&self, q: PlanePoint) -> Result<Region> {
        if !self.cutoff.contains(q) {
            return Err(Error::OutsideCutoff(format!(
                "query (cos phi = {}, R = {}) lies outside Z_c",
                q.x, q.y
            )));
        }
        Ok(self.crossing.classify(q, REGION_TOL))
    }

    pub fn half_planes(&self, region: Region) -> Vec<HalfPlane> {
        self.crossing.half_planes(region)
    }

    /// The region as a convex polygon (counter-clockwise), clipped to `Z_c`.
    pub fn polygon(&self, region: Region) -> Vec<PlanePoint> {
        if region == Region::Boundary {
            return Vec::new();
        }
        clip_all(self.cutoff.window(), &self.half_planes(region))
    }

    pub fn on_i1(&self, q: PlanePoint, tol: f64) -> bool {
        on_segment(q, self.anchor, self.i1_end, tol)
    }

    pub fn on_i2(&self, q: PlanePoint, tol: f64) -> bool {
        on_segment(q, self.anchor, self.i2_end, tol)
    }

    /// Height of the upper boundary `ℐ₁ ∪ ℐ₂` of the lower region above
    /// `cos φ = x`, or `None` where the lower region has no points.
    pub fn lower_top(&self, x: f64) -> Option<f64> {
        let p = self.anchor;
        let cos_c = self.cutoff.cos_c();
        if x > cos_c + 1e-15 || x < self.i2_end.x - 1e-15 {
            return None;
        }
        let y = if x <= p.x {
            let slope = (self.cutoff.a_c as f64 - p.y) / (cos_c - p.x);
            p.y - slope * (p.x - x)
        } else {
            p.y * (1.0 - x) / (1.0 - p.x)
        };
        Some(y.max(0.0))
    }
}

/// `ℛ_R(P₁) ∩ ℛ_L(P₂)` as a polygon (possibly empty).
pub fn quadrangle(p1: &ControllingRegions, p2: &ControllingRegions) -> Vec<PlanePoint> {
    let mut planes = p1.half_planes(Region::Right);
    planes.extend(p2.half_planes(Region::Left));
    clip_all(p1.cutoff.window(), &planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::polygon_area;

    fn cutoff() -> CutoffRegion {
        CutoffRegion::new(0.25).unwrap()
    }

    #[test]
    fn cutoff_values() {
        let c = cutoff();
        assert_eq!(c.a_c as f64, kl_bound(0.25).unwrap().floor());
        assert!(c.a_c >= 1);
        assert!(CutoffRegion::new(0.0).is_err());
    }

    #[test]
    fn anchor_is_on_every_boundary() {
        let c = cutoff();
        let r = controlling_regions(plane_point(0.5, 0.4), &c).unwrap();
        assert_eq!(r.membership(r.anchor).unwrap(), Region::Boundary);
        assert_eq!(r.membership(plane_point(0.5, 0.1)).unwrap(), Region::Lower);
        assert_eq!(r.membership(plane_point(0.2, 1.5)).unwrap(), Region::Upper);
        assert!(r.membership(plane_point(2.0, 0.1)).is_err());
    }

    #[test]
    fn regions_tile_the_window() {
        let c = cutoff();
        let r = controlling_regions(plane_point(0.6, 0.7), &c).unwrap();
        let total: f64 = [Region::Upper, Region::Lower, Region::Left, Region::Right]
            .iter()
            .map(|&g| polygon_area(&r.polygon(g)))
            .sum();
        assert!((total - c.cos_c() * c.h_c).abs() < 1e-12);
    }

    #[test]
    fn descendants_land_on_segments() {
        let c = cutoff();
        let (n, k, cos) = (40.0f64, 16.0f64, 0.55f64);
        let p = plane_point(cos, k / n);
        let r = controlling_regions(p, &c).unwrap();
        let up = plane_point((n * cos + 1.0) / (n + 1.0), k / (n + 1.0));
        assert!(r.on_i1(up, 1e-12));
        let a = c.a_c as f64;
        let down = plane_point(n / (n - 1.0) * cos - c.cos_c() / (n - 1.0), (k - a) / (n - 1.0));
        assert!(r.on_i2(down, 1e-12));
    }
}
