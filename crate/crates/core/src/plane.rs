//! Planar helpers shared by the binary controlling cones and the spherical
//! controlling regions: two lines crossing at an anchor split the plane into
//! four sectors.

/// A point of a two-dimensional parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }

    fn scale(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }

    fn len(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: PlanePoint) -> f64 {
        self.sub(o).len()
    }
}

fn cross(a: PlanePoint, b: PlanePoint) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Tag of one of the four sectors cut out by two lines through an anchor.
///
/// The sectors are named by their bounding rays: `Lower` lies between the
/// rays `I1` and `I2`, `Left` between `I2` and `J1`, `Upper` between `J1`
/// and `J2`, and `Right` between `J2` and `I1`, where `J1`/`J2` are the
/// rays opposite to `I1`/`I2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Upper,
    Lower,
    Left,
    Right,
    Boundary,
}

impl Sector {
    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Upper => "upper",
            Sector::Lower => "lower",
            Sector::Left => "left",
            Sector::Right => "right",
            Sector::Boundary => "boundary",
        }
    }
}

/// Two crossing lines given by an anchor and the directions of the rays
/// `I1` (on the first line) and `I2` (on the second).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub anchor: PlanePoint,
    pub dir1: PlanePoint,
    pub dir2: PlanePoint,
}

impl Crossing {
    /// Both directions are normalized; they must not be parallel.
    pub fn new(anchor: PlanePoint, dir1: PlanePoint, dir2: PlanePoint) -> Option<Self> {
        let (l1, l2) = (dir1.len(), dir2.len());
        if !(l1 > 0.0 && l2 > 0.0) {
            return None;
        }
        let dir1 = dir1.scale(1.0 / l1);
        let dir2 = dir2.scale(1.0 / l2);
        if cross(dir1, dir2).abs() < 1e-14 {
            return None;
        }
        Some(Crossing { anchor, dir1, dir2 })
    }

    /// Signed distance of `q` from line 1, positive on the side of `I2`.
    pub fn side1(&self, q: PlanePoint) -> f64 {
        let s = cross(self.dir1, q.sub(self.anchor));
        if cross(self.dir1, self.dir2) > 0.0 {
            s
        } else {
            -s
        }
    }

    /// Signed distance of `q` from line 2, positive on the side of `I1`.
    pub fn side2(&self, q: PlanePoint) -> f64 {
        let s = cross(self.dir2, q.sub(self.anchor));
        if cross(self.dir2, self.dir1) > 0.0 {
            s
        } else {
            -s
        }
    }

    pub fn classify(&self, q: PlanePoint, tol: f64) -> Sector {
        let s1 = self.side1(q);
        let s2 = self.side2(q);
        if s1.abs() <= tol || s2.abs() <= tol {
            return Sector::Boundary;
        }
        match (s1 > 0.0, s2 > 0.0) {
            (true, true) => Sector::Lower,
            (true, false) => Sector::Left,
            (false, true) => Sector::Right,
            (false, false) => Sector::Upper,
        }
    }

    /// The sector as a list of closed half-planes `(point, inward normal)`.
    pub fn half_planes(&self, sector: Sector) -> Vec<HalfPlane> {
        let n1 = HalfPlane::through(self.anchor, self.dir1, self.dir2);
        let n2 = HalfPlane::through(self.anchor, self.dir2, self.dir1);
        match sector {
            Sector::Lower => vec![n1, n2],
            Sector::Left => vec![n1, n2.flipped()],
            Sector::Right => vec![n1.flipped(), n2],
            Sector::Upper => vec![n1.flipped(), n2.flipped()],
            Sector::Boundary => Vec::new(),
        }
    }

    pub fn point_on_ray1(&self, t: f64) -> PlanePoint {
        self.anchor.add(self.dir1.scale(t))
    }

    pub fn point_on_ray2(&self, t: f64) -> PlanePoint {
        self.anchor.add(self.dir2.scale(t))
    }
}

/// `{q : ⟨q - point, normal⟩ ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub point: PlanePoint,
    pub normal: PlanePoint,
}

impl HalfPlane {
    /// Half-plane bounded by the line through `p` along `dir`, containing
    /// the direction `toward`.
    fn through(p: PlanePoint, dir: PlanePoint, toward: PlanePoint) -> Self {
        let mut normal = PlanePoint::new(-dir.y, dir.x);
        if normal.x * toward.x + normal.y * toward.y < 0.0 {
            normal = normal.scale(-1.0);
        }
        HalfPlane { point: p, normal }
    }

    fn flipped(self) -> Self {
        HalfPlane {
            point: self.point,
            normal: self.normal.scale(-1.0),
        }
    }

    pub fn eval(&self, q: PlanePoint) -> f64 {
        let d = q.sub(self.point);
        d.x * self.normal.x + d.y * self.normal.y
    }
}

/// Axis-aligned rectangle as a counter-clockwise polygon.
pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<PlanePoint> {
    vec![
        PlanePoint::new(x0, y0),
        PlanePoint::new(x1, y0),
        PlanePoint::new(x1, y1),
        PlanePoint::new(x0, y1),
    ]
}

/// Sutherland-Hodgman clipping of a convex polygon by a half-plane.
pub fn clip(polygon: &[PlanePoint], hp: &HalfPlane) -> Vec<PlanePoint> {
    let mut out = Vec::with_capacity(polygon.len() + 1);
    if polygon.is_empty() {
        return out;
    }
    for i in 0..polygon.len() {
        let a = polygon[i];
        let b = polygon[(i + 1) % polygon.len()];
        let (fa, fb) = (hp.eval(a), hp.eval(b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            let t = fa / (fa - fb);
            out.push(a.add(b.sub(a).scale(t)));
        }
    }
    dedup_ring(out)
}

fn dedup_ring(mut pts: Vec<PlanePoint>) -> Vec<PlanePoint> {
    pts.dedup_by(|a, b| a.distance(*b) < 1e-14);
    while pts.len() > 1 && pts[0].distance(pts[pts.len() - 1]) < 1e-14 {
        pts.pop();
    }
    pts
}

pub fn clip_all(polygon: Vec<PlanePoint>, planes: &[HalfPlane]) -> Vec<PlanePoint> {
    planes.iter().fold(polygon, |poly, hp| clip(&poly, hp))
}

/// Shoelace area (positive for counter-clockwise rings).
pub fn polygon_area(polygon: &[PlanePoint]) -> f64 {
    let n = polygon.len();
    (0..n)
        .map(|i| cross(polygon[i], polygon[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

/// Closest point parameter test: is `q` on the segment `[a, b]` within `tol`?
pub fn on_segment(q: PlanePoint, a: PlanePoint, b: PlanePoint, tol: f64) -> bool {
    let ab = b.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return q.distance(a) <= tol;
    }
    let t = ((q.x - a.x) * ab.x + (q.y - a.y) * ab.y) / len2;
    let t = t.clamp(0.0, 1.0);
    q.distance(a.add(ab.scale(t))) <= tol
}
