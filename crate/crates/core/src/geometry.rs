//! Bounded domains with piecewise-C² boundaries.
//!
//! Two kinds of domains are supported: star-shaped regions given by a positive
//! trigonometric-polynomial radius function around a translate, and regions
//! bounded by a closed chain of graph pieces `x2 = E(x1)` or `x1 = E(x2)` where
//! each `E` is a polynomial, a trigonometric polynomial, or a circular-arc
//! graph. All three classes have closed-form first and second derivatives, so
//! the curvature bound `max |E''| ≤ ν` is certified on a dense grid rather than
//! estimated.
//!
//! Validation produces an immutable [`DomainSpec`] carrying a dense boundary
//! polyline (≥ 4096 vertices), the detected corner points (junctions where the
//! one-sided tangent direction or curvature jumps), and the measured bound
//! report. Membership queries use the winding number of the polyline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance below which two chained piece endpoints count as connected.
pub const CLOSURE_TOL: f64 = 1e-12;
/// One-sided tangent mismatch (radians) that makes a junction a corner.
pub const CORNER_ANGLE_TOL: f64 = 1e-9;
/// One-sided curvature mismatch that makes a junction a corner.
pub const CORNER_CURVATURE_TOL: f64 = 1e-6;
/// Per-piece slope cap: steeper graphs must be re-parameterized over the other axis.
pub const MAX_GRAPH_SLOPE: f64 = 2.0;
/// Minimum number of polyline vertices on a validated boundary.
pub const MIN_BOUNDARY_SAMPLES: usize = 4096;

pub type Point = [f64; 2];

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("curvature bound violated: measured sup |E''| = {measured:.6e} > nu = {nu:.6e}")]
    CurvatureBoundViolated { measured: f64, nu: f64 },
    #[error("radius bound violated: max rho = {measured:.6e} > rho0 = {rho0:.6e}")]
    RadiusBoundViolated { measured: f64, rho0: f64 },
    #[error("radius function must be positive; min rho = {0:.6e}")]
    NonPositiveRadius(f64),
    #[error("domain exits the unit square (margin {0:.3e})")]
    NotInsideUnitSquare(f64),
    #[error("boundary chain is not closed: gap {gap:.3e} at junction {junction}")]
    NotClosed { junction: usize, gap: f64 },
    #[error("boundary is not a simple curve: pieces {0} and {1} cross")]
    NotSimple(usize, usize),
    #[error("graph slope bound exceeded: measured sup |E'| = {measured:.6e} > {limit}")]
    SlopeBoundExceeded { measured: f64, limit: f64 },
    #[error("derivative formulas inconsistent with values on piece {piece} (rel err {err:.3e})")]
    DerivativeMismatch { piece: usize, err: f64 },
    #[error("point lies on a corner")]
    CornerPoint,
    #[error("point is not on the boundary (distance {0:.3e})")]
    NotOnBoundary(f64),
    #[error("domain has no pieces")]
    Empty,
}

/// Radius function `rho(θ) = a0 + Σ a_n cos nθ + b_n sin nθ` plus a translate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusCurve {
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
    pub translate: Point,
}

impl RadiusCurve {
    pub fn constant(r: f64, translate: Point) -> Self {
        RadiusCurve {
            a0: r,
            cos: Vec::new(),
            sin: Vec::new(),
            translate,
        }
    }

    pub fn rho(&self, theta: f64) -> f64 {
        let mut v = self.a0;
        for (i, a) in self.cos.iter().enumerate() {
            v += a * ((i + 1) as f64 * theta).cos();
        }
        for (i, b) in self.sin.iter().enumerate() {
            v += b * ((i + 1) as f64 * theta).sin();
        }
        v
    }

    pub fn rho_d1(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (i, a) in self.cos.iter().enumerate() {
            let n = (i + 1) as f64;
            v -= a * n * (n * theta).sin();
        }
        for (i, b) in self.sin.iter().enumerate() {
            let n = (i + 1) as f64;
            v += b * n * (n * theta).cos();
        }
        v
    }

    pub fn rho_d2(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (i, a) in self.cos.iter().enumerate() {
            let n = (i + 1) as f64;
            v -= a * n * n * (n * theta).cos();
        }
        for (i, b) in self.sin.iter().enumerate() {
            let n = (i + 1) as f64;
            v -= b * n * n * (n * theta).sin();
        }
        v
    }

    /// Boundary point at angle theta.
    pub fn point(&self, theta: f64) -> Point {
        let r = self.rho(theta);
        [
            self.translate[0] + r * theta.cos(),
            self.translate[1] + r * theta.sin(),
        ]
    }

    /// Tangent vector d/dθ of the boundary curve.
    pub fn tangent(&self, theta: f64) -> Point {
        let r = self.rho(theta);
        let dr = self.rho_d1(theta);
        [
            dr * theta.cos() - r * theta.sin(),
            dr * theta.sin() + r * theta.cos(),
        ]
    }
}

/// Graph function classes with closed-form derivatives.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GraphFn {
    /// `E(u) = Σ coeffs[i] · u^i`
    Poly { coeffs: Vec<f64> },
    /// `E(u) = a0 + Σ cos[n-1]·cos(n·u) + sin[n-1]·sin(n·u)`
    Trig {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// `E(u) = center[1] + sign·sqrt(radius² − (u − center[0])²)`, sign = ±1
    Arc {
        center: Point,
        radius: f64,
        upper: bool,
    },
}

impl GraphFn {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            GraphFn::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c),
            GraphFn::Trig { a0, cos, sin } => {
                let mut v = *a0;
                for (i, a) in cos.iter().enumerate() {
                    v += a * ((i + 1) as f64 * u).cos();
                }
                for (i, b) in sin.iter().enumerate() {
                    v += b * ((i + 1) as f64 * u).sin();
                }
                v
            }
            GraphFn::Arc {
                center,
                radius,
                upper,
            } => {
                let d = u - center[0];
                let s = (radius * radius - d * d).max(0.0).sqrt();
                center[1] + if *upper { s } else { -s }
            }
        }
    }

    pub fn d1(&self, u: f64) -> f64 {
        match self {
            GraphFn::Poly { coeffs } => {
                let mut v = 0.0;
                for (i, c) in coeffs.iter().enumerate().skip(1) {
                    v += c * i as f64 * u.powi(i as i32 - 1);
                }
                v
            }
            GraphFn::Trig { cos, sin, .. } => {
                let mut v = 0.0;
                for (i, a) in cos.iter().enumerate() {
                    let n = (i + 1) as f64;
                    v -= a * n * (n * u).sin();
                }
                for (i, b) in sin.iter().enumerate() {
                    let n = (i + 1) as f64;
                    v += b * n * (n * u).cos();
                }
                v
            }
            GraphFn::Arc {
                center,
                radius,
                upper,
            } => {
                let d = u - center[0];
                let s = (radius * radius - d * d).max(1e-300).sqrt();
                let v = -d / s;
                if *upper {
                    v
                } else {
                    -v
                }
            }
        }
    }

    pub fn d2(&self, u: f64) -> f64 {
        match self {
            GraphFn::Poly { coeffs } => {
                let mut v = 0.0;
                for (i, c) in coeffs.iter().enumerate().skip(2) {
                    v += c * (i * (i - 1)) as f64 * u.powi(i as i32 - 2);
                }
                v
            }
            GraphFn::Trig { cos, sin, .. } => {
                let mut v = 0.0;
                for (i, a) in cos.iter().enumerate() {
                    let n = (i + 1) as f64;
                    v -= a * n * n * (n * u).cos();
                }
                for (i, b) in sin.iter().enumerate() {
                    let n = (i + 1) as f64;
                    v -= b * n * n * (n * u).sin();
                }
                v
            }
            GraphFn::Arc {
                center,
                radius,
                upper,
            } => {
                // E'' = -r² / (r² - d²)^{3/2} for the upper branch
                let d = u - center[0];
                let s2 = (radius * radius - d * d).max(1e-300);
                let v = -radius * radius / (s2 * s2.sqrt());
                if *upper {
                    v
                } else {
                    -v
                }
            }
        }
    }
}

/// Which coordinate the piece is a graph over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `x2 = E(x1)`, parameter u = x1
    OverX1,
    /// `x1 = E(x2)`, parameter u = x2
    OverX2,
}

/// One C² boundary piece, traversed from `a` to `b` (or `b` to `a` if reversed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub orientation: Orientation,
    pub interval: [f64; 2],
    #[serde(default)]
    pub reversed: bool,
    pub graph: GraphFn,
}

impl BoundaryPiece {
    pub fn point(&self, u: f64) -> Point {
        let e = self.graph.eval(u);
        match self.orientation {
            Orientation::OverX1 => [u, e],
            Orientation::OverX2 => [e, u],
        }
    }

    /// Parameter of the traversal start / end.
    pub fn u_start(&self) -> f64 {
        if self.reversed {
            self.interval[1]
        } else {
            self.interval[0]
        }
    }

    pub fn u_end(&self) -> f64 {
        if self.reversed {
            self.interval[0]
        } else {
            self.interval[1]
        }
    }

    /// Tangent vector in traversal direction at parameter u.
    pub fn tangent(&self, u: f64) -> Point {
        let d = self.graph.d1(u);
        let sign = if self.reversed { -1.0 } else { 1.0 };
        match self.orientation {
            Orientation::OverX1 => [sign, sign * d],
            Orientation::OverX2 => [sign * d, sign],
        }
    }

    /// Signed curvature in traversal direction at parameter u.
    pub fn curvature(&self, u: f64) -> f64 {
        let d1 = self.graph.d1(u);
        let d2 = self.graph.d2(u);
        let denom = (1.0 + d1 * d1).powf(1.5);
        let k = match self.orientation {
            Orientation::OverX1 => d2 / denom,
            Orientation::OverX2 => -d2 / denom,
        };
        if self.reversed {
            -k
        } else {
            k
        }
    }
}

/// Tangent slope in the paper's `(E(x2), x2)` convention: `s = dx1/dx2`,
/// `Infinite` when the tangent is parallel to the x1 axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentSlope {
    Finite(f64),
    Infinite,
}

impl TangentSlope {
    pub fn from_tangent(t: Point) -> Self {
        if t[1].abs() <= 1e-12 * t[0].abs().max(1.0) {
            TangentSlope::Infinite
        } else {
            TangentSlope::Finite(t[0] / t[1])
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            TangentSlope::Finite(s) => s.abs(),
            TangentSlope::Infinite => f64::INFINITY,
        }
    }
}

/// Measured quantities recorded while validating a domain.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// star: sampled sup |rho''|; piecewise: max over pieces of sup |E''|
    pub sup_curvature_proxy: f64,
    /// star only: sampled max rho
    pub max_rho: Option<f64>,
    /// piecewise only: max over pieces of sup |E'|
    pub sup_slope: Option<f64>,
    pub declared_nu: f64,
    pub boundary_samples: usize,
}

#[derive(Debug, Clone)]
enum DomainKind {
    Star(RadiusCurve),
    Piecewise(Vec<BoundaryPiece>),
}

/// A validated bounded domain with piecewise-C² boundary, immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    kind: DomainKind,
    nu: f64,
    corner_pts: Vec<Point>,
    bbox: [f64; 4], // [min1, min2, max1, max2]
    /// closed polyline: verts[i] -- verts[i+1], last connects to first
    verts: Vec<Point>,
    /// (piece index, parameter) per vertex; for star domains piece index is 0
    /// and the parameter is theta
    vert_src: Vec<(usize, f64)>,
    /// segment index bucketed by x1 for fast ray crossings
    buckets: Vec<Vec<u32>>,
    report: ValidationReport,
}

const N_BUCKETS: usize = 256;

impl DomainSpec {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn piece_count(&self) -> usize {
        match &self.kind {
            DomainKind::Star(_) => 1,
            DomainKind::Piecewise(p) => p.len(),
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self.kind, DomainKind::Star(_))
    }

    pub fn pieces(&self) -> Option<&[BoundaryPiece]> {
        match &self.kind {
            DomainKind::Piecewise(p) => Some(p),
            DomainKind::Star(_) => None,
        }
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn bbox(&self) -> [f64; 4] {
        self.bbox
    }

    pub fn boundary_polyline(&self) -> &[Point] {
        &self.verts
    }

    /// All junctions where the boundary fails to be C²: one-sided tangent
    /// directions differing by more than [`CORNER_ANGLE_TOL`] radians, or
    /// one-sided curvatures differing by more than [`CORNER_CURVATURE_TOL`].
    pub fn corner_points(&self) -> &[Point] {
        &self.corner_pts
    }

    fn bucket_of(x1: f64) -> usize {
        ((x1 * N_BUCKETS as f64) as isize).clamp(0, N_BUCKETS as isize - 1) as usize
    }

    fn build_buckets(verts: &[Point]) -> Vec<Vec<u32>> {
        let mut buckets = vec![Vec::new(); N_BUCKETS];
        let m = verts.len();
        for i in 0..m {
            let a = verts[i];
            let b = verts[(i + 1) % m];
            let lo = Self::bucket_of(a[0].min(b[0]));
            let hi = Self::bucket_of(a[0].max(b[0]));
            for bucket in buckets.iter_mut().take(hi + 1).skip(lo) {
                bucket.push(i as u32);
            }
        }
        buckets
    }

    /// Closed-region membership: winding number of the sampled boundary around
    /// `x` via signed crossings of the upward vertical ray. Points within
    /// 1e-12 of the polyline count as inside (the region is closed).
    pub fn contains(&self, x: Point) -> bool {
        let m = self.verts.len();
        let bucket = &self.buckets[Self::bucket_of(x[0])];
        // boundary pre-check on nearby segments
        for &si in bucket {
            let a = self.verts[si as usize];
            let b = self.verts[(si as usize + 1) % m];
            if dist_point_segment(x, a, b) <= 1e-12 {
                return true;
            }
        }
        let mut winding = 0i32;
        for &si in bucket {
            let a = self.verts[si as usize];
            let b = self.verts[(si as usize + 1) % m];
            // upward ray: count segments whose x1-span half-openly contains x[0]
            let (lo, hi) = (a[0], b[0]);
            if (lo <= x[0]) == (hi <= x[0]) {
                continue;
            }
            let t = (x[0] - lo) / (hi - lo);
            let y = a[1] + t * (b[1] - a[1]);
            if y > x[1] {
                winding += if hi > lo { 1 } else { -1 };
            }
        }
        winding != 0
    }

    /// Nearest polyline vertex index to x (coarse; callers refine on the piece).
    fn nearest_vertex(&self, x: Point) -> usize {
        let mut best = 0usize;
        let mut bd = f64::INFINITY;
        for (i, v) in self.verts.iter().enumerate() {
            let d = (v[0] - x[0]).powi(2) + (v[1] - x[1]).powi(2);
            if d < bd {
                bd = d;
                best = i;
            }
        }
        best
    }

    /// Tangent slope `s = dx1/dx2` at a boundary point, per the graph
    /// conventions: `s = E'(x̂2)` for x1-graphs, `s = (E'(x̂1))^{-1}` for
    /// x2-graphs, and `∞` when the x2-graph derivative vanishes.
    pub fn tangent_slope(&self, x: Point) -> Result<TangentSlope, GeometryError> {
        for c in &self.corner_pts {
            if (c[0] - x[0]).hypot(c[1] - x[1]) <= 1e-9 {
                return Err(GeometryError::CornerPoint);
            }
        }
        let vi = self.nearest_vertex(x);
        let (pid, u0) = self.vert_src[vi];
        match &self.kind {
            DomainKind::Star(curve) => {
                // refine theta by minimizing |point(theta) - x|
                let theta = refine_param(u0, |t| {
                    let p = curve.point(t);
                    [(p[0] - x[0]), (p[1] - x[1])]
                });
                let p = curve.point(theta);
                let d = (p[0] - x[0]).hypot(p[1] - x[1]);
                if d > 1e-8 {
                    return Err(GeometryError::NotOnBoundary(d));
                }
                Ok(TangentSlope::from_tangent(curve.tangent(theta)))
            }
            DomainKind::Piecewise(pieces) => {
                // candidate pieces: source of the nearest vertex and its neighbors
                let mut best: Option<(f64, usize, f64)> = None;
                let np = pieces.len();
                for cand in [pid, (pid + 1) % np, (pid + np - 1) % np] {
                    let piece = &pieces[cand];
                    let u_init = if cand == pid {
                        u0
                    } else {
                        0.5 * (piece.interval[0] + piece.interval[1])
                    };
                    let u = refine_param(u_init, |t| {
                        let p = piece.point(t);
                        [(p[0] - x[0]), (p[1] - x[1])]
                    })
                    .clamp(piece.interval[0], piece.interval[1]);
                    let p = piece.point(u);
                    let d = (p[0] - x[0]).hypot(p[1] - x[1]);
                    if best.map_or(true, |(bd, _, _)| d < bd) {
                        best = Some((d, cand, u));
                    }
                }
                let (d, cand, u) = best.unwrap();
                if d > 1e-8 {
                    return Err(GeometryError::NotOnBoundary(d));
                }
                Ok(TangentSlope::from_tangent(pieces[cand].tangent(u)))
            }
        }
    }

    /// Shoelace area of the boundary polyline (sign follows traversal).
    pub fn polyline_area(&self) -> f64 {
        let m = self.verts.len();
        let mut acc = 0.0;
        for i in 0..m {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % m];
            acc += a[0] * b[1] - b[0] * a[1];
        }
        (acc * 0.5).abs()
    }
}

/// Gauss–Newton refinement of the curve parameter minimizing |curve(t) − x|².
fn refine_param(t0: f64, residual: impl Fn(f64) -> [f64; 2]) -> f64 {
    let mut t = t0;
    let eps = 1e-7;
    for _ in 0..30 {
        let r = residual(t);
        let rp = residual(t + eps);
        let dr = [(rp[0] - r[0]) / eps, (rp[1] - r[1]) / eps];
        let denom = dr[0] * dr[0] + dr[1] * dr[1];
        if denom < 1e-30 {
            break;
        }
        let step = (r[0] * dr[0] + r[1] * dr[1]) / denom;
        t -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    t
}

fn dist_point_segment(x: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ax = [x[0] - a[0], x[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ax[0] * ab[0] + ax[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let p = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (x[0] - p[0]).hypot(x[1] - p[1])
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let orient = |p: Point, q: Point, r: Point| -> f64 {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    (o1 * o2 < 0.0) && (o3 * o4 < 0.0)
}

/// Builds and validates a star-shaped domain (trigonometric-polynomial radius
/// around a translate). The membership predicate is
/// `‖x − t‖₂ ≤ ρ(θ(x − t))`.
pub fn make_star_domain(
    radius: RadiusCurve,
    nu: f64,
    rho0: f64,
) -> Result<DomainSpec, GeometryError> {
    const GRID: usize = 4096;
    let mut max_rho = f64::NEG_INFINITY;
    let mut min_rho = f64::INFINITY;
    let mut sup_d2 = 0.0f64;
    for i in 0..GRID {
        let th = i as f64 / GRID as f64 * std::f64::consts::TAU;
        let r = radius.rho(th);
        max_rho = max_rho.max(r);
        min_rho = min_rho.min(r);
        sup_d2 = sup_d2.max(radius.rho_d2(th).abs());
    }
    if min_rho <= 0.0 {
        return Err(GeometryError::NonPositiveRadius(min_rho));
    }
    if sup_d2 > nu {
        return Err(GeometryError::CurvatureBoundViolated {
            measured: sup_d2,
            nu,
        });
    }
    if max_rho > rho0 {
        return Err(GeometryError::RadiusBoundViolated {
            measured: max_rho,
            rho0,
        });
    }
    let t = radius.translate;
    let margin = [t[0] - rho0, t[1] - rho0, 1.0 - t[0] - rho0, 1.0 - t[1] - rho0]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if margin < 0.0 {
        return Err(GeometryError::NotInsideUnitSquare(margin));
    }

    let samples = MIN_BOUNDARY_SAMPLES.max((GRID as f64 * (1.0 + sup_d2).sqrt()) as usize);
    let mut verts = Vec::with_capacity(samples);
    let mut vert_src = Vec::with_capacity(samples);
    let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for i in 0..samples {
        let th = i as f64 / samples as f64 * std::f64::consts::TAU;
        let p = radius.point(th);
        bbox[0] = bbox[0].min(p[0]);
        bbox[1] = bbox[1].min(p[1]);
        bbox[2] = bbox[2].max(p[0]);
        bbox[3] = bbox[3].max(p[1]);
        verts.push(p);
        vert_src.push((0usize, th));
    }
    let buckets = DomainSpec::build_buckets(&verts);
    Ok(DomainSpec {
        kind: DomainKind::Star(radius),
        nu,
        corner_pts: Vec::new(), // trig-polynomial radius is C^inf
        bbox,
        verts,
        vert_src,
        buckets,
        report: ValidationReport {
            sup_curvature_proxy: sup_d2,
            max_rho: Some(max_rho),
            sup_slope: None,
            declared_nu: nu,
            boundary_samples: samples,
        },
    })
}

/// Builds and validates a piecewise-graph domain. Pieces must chain into a
/// single simple closed curve (cyclic continuity within [`CLOSURE_TOL`]); each
/// graph must keep `|E'| ≤ 2` and `|E''| ≤ ν` on its interval.
pub fn make_piecewise_domain(
    pieces: Vec<BoundaryPiece>,
    nu: f64,
) -> Result<DomainSpec, GeometryError> {
    if pieces.is_empty() {
        return Err(GeometryError::Empty);
    }
    // derivative formulas vs central finite differences at 16 interior points
    for (pi, piece) in pieces.iter().enumerate() {
        let [a, b] = piece.interval;
        let len = b - a;
        let fd_h = (len * 1e-5).max(1e-9);
        let mut worst = 0.0f64;
        for q in 0..16 {
            let u = a + len * (q as f64 + 0.5) / 16.0;
            let e1 = (piece.graph.eval(u + fd_h) - piece.graph.eval(u - fd_h)) / (2.0 * fd_h);
            let scale1 = piece.graph.d1(u).abs().max(1.0);
            worst = worst.max((e1 - piece.graph.d1(u)).abs() / scale1);
            let h2 = (len * 1e-4).max(1e-7);
            let e2 = (piece.graph.eval(u + h2) - 2.0 * piece.graph.eval(u)
                + piece.graph.eval(u - h2))
                / (h2 * h2);
            let scale2 = piece.graph.d2(u).abs().max(1.0);
            worst = worst.max((e2 - piece.graph.d2(u)).abs() / scale2 / 100.0);
        }
        if worst > 1e-6 {
            return Err(GeometryError::DerivativeMismatch {
                piece: pi,
                err: worst,
            });
        }
    }
    // curvature and slope bounds on a dense parameter grid
    let mut sup_d2 = 0.0f64;
    let mut sup_d1 = 0.0f64;
    for piece in &pieces {
        let [a, b] = piece.interval;
        for q in 0..=2048 {
            let u = a + (b - a) * q as f64 / 2048.0;
            sup_d1 = sup_d1.max(piece.graph.d1(u).abs());
            sup_d2 = sup_d2.max(piece.graph.d2(u).abs());
        }
    }
    if sup_d2 > nu {
        return Err(GeometryError::CurvatureBoundViolated {
            measured: sup_d2,
            nu,
        });
    }
    if sup_d1 > MAX_GRAPH_SLOPE {
        return Err(GeometryError::SlopeBoundExceeded {
            measured: sup_d1,
            limit: MAX_GRAPH_SLOPE,
        });
    }
    // cyclic continuity
    let np = pieces.len();
    for i in 0..np {
        let e = pieces[i].point(pieces[i].u_end());
        let s = pieces[(i + 1) % np].point(pieces[(i + 1) % np].u_start());
        let gap = (e[0] - s[0]).hypot(e[1] - s[1]);
        if gap > CLOSURE_TOL {
            return Err(GeometryError::NotClosed { junction: i, gap });
        }
    }
    // corner detection at junctions
    let mut corner_pts = Vec::new();
    for i in 0..np {
        let pa = &pieces[i];
        let pb = &pieces[(i + 1) % np];
        let ta = pa.tangent(pa.u_end());
        let tb = pb.tangent(pb.u_start());
        let na = (ta[0] * ta[0] + ta[1] * ta[1]).sqrt();
        let nb = (tb[0] * tb[0] + tb[1] * tb[1]).sqrt();
        let cross = (ta[0] * tb[1] - ta[1] * tb[0]) / (na * nb);
        let dot = (ta[0] * tb[0] + ta[1] * tb[1]) / (na * nb);
        let angle = cross.atan2(dot).abs();
        let ka = pa.curvature(pa.u_end());
        let kb = pb.curvature(pb.u_start());
        if angle > CORNER_ANGLE_TOL || (ka - kb).abs() > CORNER_CURVATURE_TOL {
            corner_pts.push(pa.point(pa.u_end()));
        }
    }
    // dense polyline, piecewise, in traversal order
    let lengths: Vec<f64> = pieces
        .iter()
        .map(|p| {
            let [a, b] = p.interval;
            let mut acc = 0.0;
            let mut prev = p.point(a);
            for q in 1..=64 {
                let u = a + (b - a) * q as f64 / 64.0;
                let cur = p.point(u);
                acc += (cur[0] - prev[0]).hypot(cur[1] - prev[1]);
                prev = cur;
            }
            acc
        })
        .collect();
    let total_len: f64 = lengths.iter().sum();
    let mut verts = Vec::new();
    let mut vert_src = Vec::new();
    let mut piece_ranges = Vec::new();
    for (pi, piece) in pieces.iter().enumerate() {
        let frac = lengths[pi] / total_len;
        let m = ((MIN_BOUNDARY_SAMPLES as f64 * frac).ceil() as usize).max(64);
        let start = verts.len();
        let (u0, u1) = (piece.u_start(), piece.u_end());
        for q in 0..m {
            // skip the shared junction vertex except at piece start
            let u = u0 + (u1 - u0) * q as f64 / m as f64;
            verts.push(piece.point(u));
            vert_src.push((pi, u));
        }
        piece_ranges.push((start, verts.len()));
    }
    // simplicity: no crossing between segments of non-adjacent pieces, and a
    // coarse check within/between adjacent ones away from shared junctions
    for (i, &(s1, e1)) in piece_ranges.iter().enumerate() {
        for (j, &(s2, e2)) in piece_ranges.iter().enumerate().skip(i) {
            let adjacent = i == j || (j == i + 1) || (i == 0 && j == np - 1);
            let m = verts.len();
            let step = 8; // coarse sweep
            for si in (s1..e1).step_by(step) {
                let a = verts[si];
                let b = verts[(si + 1) % m];
                for sj in (s2..e2).step_by(step) {
                    if adjacent && (si as isize - sj as isize).unsigned_abs() < 2 * step {
                        continue;
                    }
                    if si == sj {
                        continue;
                    }
                    let c = verts[sj];
                    let d = verts[(sj + 1) % m];
                    if segments_intersect(a, b, c, d) {
                        return Err(GeometryError::NotSimple(i, j));
                    }
                }
            }
        }
    }
    let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for v in &verts {
        bbox[0] = bbox[0].min(v[0]);
        bbox[1] = bbox[1].min(v[1]);
        bbox[2] = bbox[2].max(v[0]);
        bbox[3] = bbox[3].max(v[1]);
    }
    if bbox[0] < 0.0 || bbox[1] < 0.0 || bbox[2] > 1.0 || bbox[3] > 1.0 {
        let margin = bbox[0].min(bbox[1]).min(1.0 - bbox[2]).min(1.0 - bbox[3]);
        return Err(GeometryError::NotInsideUnitSquare(margin));
    }
    let buckets = DomainSpec::build_buckets(&verts);
    let samples = verts.len();
    Ok(DomainSpec {
        kind: DomainKind::Piecewise(pieces),
        nu,
        corner_pts,
        bbox,
        verts,
        vert_src,
        buckets,
        report: ValidationReport {
            sup_curvature_proxy: sup_d2,
            max_rho: None,
            sup_slope: Some(sup_d1),
            declared_nu: nu,
            boundary_samples: samples,
        },
    })
}

/// Serialized (unvalidated) domain description; see `schemas/domain.schema.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDesc {
    Star {
        nu: f64,
        rho0: f64,
        radius: RadiusCurve,
    },
    Piecewise {
        nu: f64,
        pieces: Vec<BoundaryPiece>,
    },
}

impl DomainDesc {
    pub fn build(&self) -> Result<DomainSpec, GeometryError> {
        match self {
            DomainDesc::Star { nu, rho0, radius } => make_star_domain(radius.clone(), *nu, *rho0),
            DomainDesc::Piecewise { nu, pieces } => make_piecewise_domain(pieces.clone(), *nu),
        }
    }
}

/// Ready-made boundary chains for the bundled test shapes.
pub mod shapes {
    use super::*;

    fn line_piece(orientation: Orientation, level: f64, from: f64, to: f64) -> BoundaryPiece {
        BoundaryPiece {
            orientation,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Poly {
                coeffs: vec![level],
            },
        }
    }

    /// Axis-aligned square `[lo,hi]²`, counterclockwise, 4 corners.
    pub fn axis_square(lo: f64, hi: f64) -> Vec<BoundaryPiece> {
        vec![
            line_piece(Orientation::OverX1, lo, lo, hi), // bottom: x2 = lo
            line_piece(Orientation::OverX2, hi, lo, hi), // right: x1 = hi
            line_piece(Orientation::OverX1, hi, hi, lo), // top (reversed)
            line_piece(Orientation::OverX2, lo, hi, lo), // left (reversed)
        ]
    }

    /// Square with half-side `hs`, rotated by `atan(tan_tilt)` about `center`,
    /// counterclockwise. Shallow edges are x1-graphs with `|E'| = tan_tilt`,
    /// steep edges are x2-graphs.
    pub fn rotated_square(center: Point, hs: f64, tan_tilt: f64) -> Vec<BoundaryPiece> {
        rotated_rect(center, hs, hs, tan_tilt)
    }

    /// Rectangle with half-extents `hu` (along the tilted axis) and `hv`,
    /// rotated by `atan(tan_tilt)`, counterclockwise.
    pub fn rotated_rect(center: Point, hu: f64, hv: f64, tan_tilt: f64) -> Vec<BoundaryPiece> {
        let t = tan_tilt;
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        // corners in local coords (+-hu, +-hv), mapped by rotation + translate
        let map = |u: f64, v: f64| -> Point {
            [center[0] + c * u - s * v, center[1] + s * u + c * v]
        };
        let p00 = map(-hu, -hv);
        let p10 = map(hu, -hv);
        let p11 = map(hu, hv);
        let p01 = map(-hu, hv);
        // bottom edge p00 -> p10: x2 = x1*t + b (graph over x1, slope t)
        let seg_x1 = |from: Point, to: Point| -> BoundaryPiece {
            let slope = (to[1] - from[1]) / (to[0] - from[0]);
            let b = from[1] - slope * from[0];
            BoundaryPiece {
                orientation: Orientation::OverX1,
                interval: [from[0].min(to[0]), from[0].max(to[0])],
                reversed: to[0] < from[0],
                graph: GraphFn::Poly {
                    coeffs: vec![b, slope],
                },
            }
        };
        let seg_x2 = |from: Point, to: Point| -> BoundaryPiece {
            let slope = (to[0] - from[0]) / (to[1] - from[1]);
            let b = from[0] - slope * from[1];
            BoundaryPiece {
                orientation: Orientation::OverX2,
                interval: [from[1].min(to[1]), from[1].max(to[1])],
                reversed: to[1] < from[1],
                graph: GraphFn::Poly {
                    coeffs: vec![b, slope],
                },
            }
        };
        vec![
            seg_x1(p00, p10),
            seg_x2(p10, p11),
            seg_x1(p11, p01),
            seg_x2(p01, p00),
        ]
    }

    /// Rounded square: straight sides at `center ± so`, corner arcs of radius
    /// `r` (overall half-extent `so + r`), counterclockwise. Corner arcs are
    /// split at 45° and alternate orientation so every graph keeps `|E'| ≤ 1`;
    /// 12 pieces total. Junctions are C¹; the 8 line/arc junctions are
    /// curvature-jump corner points.
    pub fn rounded_square(center: Point, so: f64, r: f64) -> Vec<BoundaryPiece> {
        let (cx, cy) = (center[0], center[1]);
        let q = r / std::f64::consts::SQRT_2;
        // x2 = E(x1) arc piece around circle center `ac`, traversed from -> to
        let arc_x1 = |ac: Point, from: f64, to: f64, upper: bool| BoundaryPiece {
            orientation: Orientation::OverX1,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Arc {
                center: ac,
                radius: r,
                upper,
            },
        };
        // x1 = E(x2) arc piece: GraphFn center is [u-axis, value-axis] = [x2, x1]
        let arc_x2 = |ac: Point, from: f64, to: f64, upper: bool| BoundaryPiece {
            orientation: Orientation::OverX2,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Arc {
                center: [ac[1], ac[0]],
                radius: r,
                upper,
            },
        };
        let line = |orientation: Orientation, level: f64, from: f64, to: f64| BoundaryPiece {
            orientation,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Poly {
                coeffs: vec![level],
            },
        };
        let (br, tr, tl, bl) = (
            [cx + so, cy - so],
            [cx + so, cy + so],
            [cx - so, cy + so],
            [cx - so, cy - so],
        );
        vec![
            line(Orientation::OverX1, cy - so - r, cx - so, cx + so),
            arc_x1(br, cx + so, cx + so + q, false),
            arc_x2(br, cy - so - q, cy - so, true),
            line(Orientation::OverX2, cx + so + r, cy - so, cy + so),
            arc_x2(tr, cy + so, cy + so + q, true),
            arc_x1(tr, cx + so + q, cx + so, true),
            line(Orientation::OverX1, cy + so + r, cx + so, cx - so),
            arc_x1(tl, cx - so, cx - so - q, true),
            arc_x2(tl, cy + so + q, cy + so, false),
            line(Orientation::OverX2, cx - so - r, cy + so, cy - so),
            arc_x2(bl, cy - so, cy - so - q, false),
            arc_x1(bl, cx - so - q, cx - so, false),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(r: f64, c: Point) -> DomainSpec {
        make_star_domain(RadiusCurve::constant(r, c), 0.5, r + 1e-9).unwrap()
    }

    #[test]
    fn star_disk_basics() {
        let d = disk(0.25, [0.5, 0.5]);
        assert!(d.corner_points().is_empty());
        assert!(d.contains([0.5, 0.5]));
        assert!(!d.contains([0.9, 0.9]));
        assert!(d.contains([0.5 + 0.2499, 0.5]));
        assert_eq!(d.report().sup_curvature_proxy, 0.0);
    }

    #[test]
    fn star_curvature_bound() {
        // rho = 0.25 + 0.05 cos 3θ: sup |rho''| = 0.05·9 = 0.45
        let rc = RadiusCurve {
            a0: 0.25,
            cos: vec![0.0, 0.0, 0.05],
            sin: vec![],
            translate: [0.5, 0.5],
        };
        assert!(make_star_domain(rc.clone(), 0.5, 0.31).is_ok());
        match make_star_domain(rc, 0.4, 0.31) {
            Err(GeometryError::CurvatureBoundViolated { measured, .. }) => {
                assert!((measured - 0.45).abs() < 1e-6);
            }
            other => panic!("expected curvature violation, got {other:?}"),
        }
    }

    #[test]
    fn star_radius_bound() {
        let rc = RadiusCurve::constant(1.2, [0.5, 0.5]);
        assert!(matches!(
            make_star_domain(rc, 1.0, 0.99),
            Err(GeometryError::RadiusBoundViolated { .. })
        ));
    }

    #[test]
    fn star_unit_square() {
        let rc = RadiusCurve::constant(0.3, [0.2, 0.5]);
        assert!(matches!(
            make_star_domain(rc, 1.0, 0.3),
            Err(GeometryError::NotInsideUnitSquare(_))
        ));
    }

    #[test]
    fn square_domain() {
        let d = make_piecewise_domain(shapes::axis_square(0.3, 0.7), 0.1).unwrap();
        assert_eq!(d.corner_points().len(), 4);
        assert!(d.contains([0.5, 0.5]));
        assert!(d.contains([0.3, 0.5])); // boundary closed
        assert!(!d.contains([0.29, 0.5]));
        assert!(!d.contains([0.75, 0.5]));
        // area
        assert!((d.polyline_area() - 0.16).abs() < 1e-9);
    }

    #[test]
    fn square_corner_errors() {
        let d = make_piecewise_domain(shapes::axis_square(0.3, 0.7), 0.1).unwrap();
        assert!(matches!(
            d.tangent_slope([0.3, 0.3]),
            Err(GeometryError::CornerPoint)
        ));
        // vertical side x1 = 0.7: tangent along x2 -> s = 0? tangent (0, ±1): s = 0
        match d.tangent_slope([0.7, 0.5]).unwrap() {
            TangentSlope::Finite(s) => assert!(s.abs() < 1e-9),
            _ => panic!("expected finite slope 0"),
        }
        // horizontal side x2 = 0.3: tangent (±1, 0) -> s = inf
        assert_eq!(d.tangent_slope([0.5, 0.3]).unwrap(), TangentSlope::Infinite);
    }

    #[test]
    fn not_closed() {
        let mut pieces = shapes::axis_square(0.3, 0.7);
        pieces[2].graph = GraphFn::Poly {
            coeffs: vec![0.701],
        };
        assert!(matches!(
            make_piecewise_domain(pieces, 0.1),
            Err(GeometryError::NotClosed { .. })
        ));
    }

    #[test]
    fn two_halfcircles_rejected() {
        // two half-circle graphs of radius 0.2: |E'| unbounded at the ends
        let r = 0.2;
        let up = BoundaryPiece {
            orientation: Orientation::OverX1,
            interval: [0.3, 0.7],
            reversed: true,
            graph: GraphFn::Arc {
                center: [0.5, 0.5],
                radius: r,
                upper: true,
            },
        };
        let dn = BoundaryPiece {
            orientation: Orientation::OverX1,
            interval: [0.3, 0.7],
            reversed: false,
            graph: GraphFn::Arc {
                center: [0.5, 0.5],
                radius: r,
                upper: false,
            },
        };
        let err = make_piecewise_domain(vec![dn, up], 100.0).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::CurvatureBoundViolated { .. } | GeometryError::SlopeBoundExceeded { .. }
        ));
    }

    #[test]
    fn four_arc_circle_ok() {
        // same circle split at 45°, alternating orientation: |E'| ≤ 1,
        // |E''| ≤ 2^{3/2}/r; tangents agree at junctions -> no corners
        let r = 0.2;
        let c = [0.5, 0.5];
        let q = r / std::f64::consts::SQRT_2;
        let pieces = vec![
            // bottom arc: x2 graph, lower branch, x1 from c-q to c+q
            BoundaryPiece {
                orientation: Orientation::OverX1,
                interval: [c[0] - q, c[0] + q],
                reversed: false,
                graph: GraphFn::Arc {
                    center: c,
                    radius: r,
                    upper: false,
                },
            },
            // right arc: x1 graph over x2 from c-q to c+q, +sqrt branch
            BoundaryPiece {
                orientation: Orientation::OverX2,
                interval: [c[1] - q, c[1] + q],
                reversed: false,
                graph: GraphFn::Arc {
                    center: [c[1], c[0]],
                    radius: r,
                    upper: true,
                },
            },
            // top arc reversed
            BoundaryPiece {
                orientation: Orientation::OverX1,
                interval: [c[0] - q, c[0] + q],
                reversed: true,
                graph: GraphFn::Arc {
                    center: c,
                    radius: r,
                    upper: true,
                },
            },
            // left arc reversed
            BoundaryPiece {
                orientation: Orientation::OverX2,
                interval: [c[1] - q, c[1] + q],
                reversed: true,
                graph: GraphFn::Arc {
                    center: [c[1], c[0]],
                    radius: r,
                    upper: false,
                },
            },
        ];
        let nu_needed = 2.0f64.powf(1.5) / r;
        let d = make_piecewise_domain(pieces, nu_needed + 1e-6).unwrap();
        assert_eq!(d.corner_points().len(), 0);
        let report = d.report();
        assert!((report.sup_curvature_proxy - nu_needed).abs() / nu_needed < 1e-3);
        assert!(report.sup_slope.unwrap() <= 1.0 + 1e-9);
        // slope conventions on the circle
        match d.tangent_slope([c[0] + r, c[1]]).unwrap() {
            TangentSlope::Finite(s) => assert!(s.abs() < 1e-6, "s={s}"),
            _ => panic!("rightmost point should have s=0"),
        }
        assert_eq!(
            d.tangent_slope([c[0], c[1] + r]).unwrap(),
            TangentSlope::Infinite
        );
    }

    #[test]
    fn curvature_jump_corners() {
        // Internally tangent circles share the tangent direction at the touch
        // point; a boundary following the small circle on one side and the big
        // one on the other has a curvature-only corner there.
        let r1 = 0.15;
        let r2 = 0.3;
        let touch = [0.5, 0.2]; // bottom-most point of both circles
        let c1 = [touch[0], touch[1] + r1];
        let c2 = [touch[0], touch[1] + r2];
        let q1 = r1 / std::f64::consts::SQRT_2;
        let q2 = r2 / std::f64::consts::SQRT_2;
        let lower_arc = |cc: Point, rr: f64, from: f64, to: f64| BoundaryPiece {
            orientation: Orientation::OverX1,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Arc {
                center: cc,
                radius: rr,
                upper: false,
            },
        };
        let side_arc = |cc: Point, rr: f64, from: f64, to: f64, upper: bool| BoundaryPiece {
            orientation: Orientation::OverX2,
            interval: [from.min(to), from.max(to)],
            reversed: to < from,
            graph: GraphFn::Arc {
                center: [cc[1], cc[0]],
                radius: rr,
                upper,
            },
        };
        // CCW: small circle on the right of the touch point, big on the left,
        // closed by a chord on top (its junctions are ordinary angle corners).
        let chord_slope = (c2[1] - c1[1]) / ((0.5 - r2) - (0.5 + r1));
        let chord_b = c1[1] - chord_slope * (0.5 + r1);
        let pieces = vec![
            lower_arc(c1, r1, 0.5, 0.5 + q1),
            side_arc(c1, r1, c1[1] - q1, c1[1], true),
            BoundaryPiece {
                orientation: Orientation::OverX1,
                interval: [0.5 - r2, 0.5 + r1],
                reversed: true,
                graph: GraphFn::Poly {
                    coeffs: vec![chord_b, chord_slope],
                },
            },
            side_arc(c2, r2, c2[1], c2[1] - q2, false),
            lower_arc(c2, r2, 0.5 - q2, 0.5),
        ];
        let d = make_piecewise_domain(pieces, 2.0f64.powf(1.5) / r1 + 1.0).unwrap();
        let has_touch = d
            .corner_points()
            .iter()
            .any(|p| (p[0] - touch[0]).hypot(p[1] - touch[1]) < 1e-9);
        assert!(has_touch, "corners: {:?}", d.corner_points());
    }

    #[test]
    fn slope_matches_finite_difference() {
        // 64 boundary points of a wiggly star domain
        let rc = RadiusCurve {
            a0: 0.25,
            cos: vec![0.0, 0.02],
            sin: vec![0.01],
            translate: [0.5, 0.5],
        };
        let d = make_star_domain(rc.clone(), 1.0, 0.3).unwrap();
        for i in 0..64 {
            let th = (i as f64 + 0.31) / 64.0 * std::f64::consts::TAU;
            let p = rc.point(th);
            let slope = d.tangent_slope(p).unwrap();
            let dth = 1e-5;
            let p1 = rc.point(th - dth);
            let p2 = rc.point(th + dth);
            let fd = [(p2[0] - p1[0]) / (2.0 * dth), (p2[1] - p1[1]) / (2.0 * dth)];
            match slope {
                TangentSlope::Finite(s) => {
                    let s_fd = fd[0] / fd[1];
                    assert!(
                        (s - s_fd).abs() <= 1e-4 * s_fd.abs().max(1.0),
                        "theta={th} s={s} fd={s_fd}"
                    );
                }
                TangentSlope::Infinite => assert!(fd[1].abs() < 1e-3 * fd[0].abs()),
            }
        }
    }

    #[test]
    fn contains_density_invariance() {
        // membership away from the boundary should not depend on sampling density;
        // spot-check against the analytic star predicate
        let rc = RadiusCurve {
            a0: 0.22,
            cos: vec![0.0, 0.03],
            sin: vec![],
            translate: [0.45, 0.55],
        };
        let d = make_star_domain(rc.clone(), 1.0, 0.27).unwrap();
        let mut mismatches = 0;
        for i in 0..64 {
            for jj in 0..64 {
                let x = [i as f64 / 63.0, jj as f64 / 63.0];
                let dx = [x[0] - 0.45, x[1] - 0.55];
                let r = (dx[0] * dx[0] + dx[1] * dx[1]).sqrt();
                let th = dx[1].atan2(dx[0]);
                let inside = r <= rc.rho(th);
                let margin = (r - rc.rho(th)).abs();
                if margin > 1e-3 && d.contains(x) != inside {
                    mismatches += 1;
                }
            }
        }
        assert_eq!(mismatches, 0);
    }

    #[test]
    fn rounded_square_shape() {
        let pieces = shapes::rounded_square([0.5, 0.5], 0.28, 0.08);
        let d = make_piecewise_domain(pieces, 2.0f64.powf(1.5) / 0.08 + 1.0).unwrap();
        // C¹ junctions everywhere; the 8 line/arc junctions jump in curvature
        // (0 vs 1/r) while the 4 mid-arc orientation switches stay C²
        assert_eq!(d.corner_points().len(), 8);
        assert!(d.contains([0.5, 0.5]));
        assert!(d.contains([0.5, 0.14]));
        assert!(!d.contains([0.85, 0.85]));
        // area: square + 4 side rects + quarter disks
        let so = 0.28;
        let r = 0.08;
        let area = (2.0 * so) * (2.0 * so) + 4.0 * (2.0 * so) * r + std::f64::consts::PI * r * r;
        assert!(
            (d.polyline_area() - area).abs() < 1e-4,
            "{} vs {}",
            d.polyline_area(),
            area
        );
    }

    #[test]
    fn rotated_square_shape() {
        let pieces = shapes::rotated_square([0.5, 0.5], 0.22, 0.1);
        let d = make_piecewise_domain(pieces, 1e-9).unwrap();
        assert_eq!(d.corner_points().len(), 4);
        assert!((d.polyline_area() - 0.44 * 0.44).abs() < 1e-6);
        // slope conventions: shallow edge (x1-graph, E'=0.1) -> s = 1/0.1 = 10
        let c = 1.0 / (1.0 + 0.01f64).sqrt();
        let s_ = 0.1 * c;
        let mid_bottom = [0.5 + c * 0.0 - s_ * (-0.22), 0.5 + s_ * 0.0 + c * (-0.22)];
        match d.tangent_slope(mid_bottom).unwrap() {
            TangentSlope::Finite(s) => assert!((s - 10.0).abs() < 1e-6, "s={s}"),
            _ => panic!(),
        }
    }
}
