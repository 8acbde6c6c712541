//! Exact upper-half-plane geometry for the hyperbolic Penrose tiling.
//!
//! The prototile `P` is the pentagon with vertices `A1 = i`, `A2 = 1/2 + i`,
//! `A3 = 1 + i`, `A4 = 1 + 2i`, `A5 = 2i`, all edges geodesic. The tiling is
//! `{ R^k S^n P }` with `R: z -> 2z` and `S: z -> z + 1`, so the tile with
//! index `(k, n)` is the image of `P` under `z -> 2^k (z + n)`.
//!
//! Balls are closed throughout: a tile belongs to the patch of radius `ρ`
//! when its closure meets the closed ball `B_ρ(i)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rational_to_f64, v2_i64, DyadicRational};

/// A point of the upper half-plane with dyadic coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    x: DyadicRational,
    y: DyadicRational,
}

impl Point {
    pub fn new(x: DyadicRational, y: DyadicRational) -> Result<Self> {
        if !y.is_positive() {
            return Err(Error::NotInUpperHalfPlane);
        }
        Ok(Point { x, y })
    }

    /// Shorthand for points with small dyadic coordinates `(xn/2^xe, yn/2^ye)`.
    pub fn from_parts(xn: i64, xe: i64, yn: i64, ye: i64) -> Result<Self> {
        Self::new(DyadicRational::new(xn, -xe), DyadicRational::new(yn, -ye))
    }

    /// The base point `i`.
    pub fn i() -> Self {
        Point { x: DyadicRational::zero(), y: DyadicRational::one() }
    }

    pub fn x(&self) -> &DyadicRational {
        &self.x
    }

    pub fn y(&self) -> &DyadicRational {
        &self.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The map `z -> 2^k z + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub k: i64,
    pub b: DyadicRational,
}

impl AffineMap {
    pub fn new(k: i64, b: DyadicRational) -> Self {
        AffineMap { k, b }
    }

    pub fn identity() -> Self {
        Self::new(0, DyadicRational::zero())
    }

    /// `R: z -> 2z`.
    pub fn r() -> Self {
        Self::new(1, DyadicRational::zero())
    }

    /// `S: z -> z + 1`.
    pub fn s() -> Self {
        Self::new(0, DyadicRational::one())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { k: self.k + other.k, b: other.b.mul_pow2(self.k) + &self.b }
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap { k: -self.k, b: -self.b.mul_pow2(-self.k) }
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point { x: p.x.mul_pow2(self.k) + &self.b, y: p.y.mul_pow2(self.k) }
    }

    /// The map `z -> 2^k (z + n)` carrying `P` onto tile `(k, n)`.
    pub fn of_tile(k: i64, n: i64) -> Self {
        AffineMap { k, b: DyadicRational::new(n, k) }
    }

    /// Image of tile `(k, n)` under this map, if it is again a tile of `P`.
    pub fn tile_image(&self, k: i64, n: i64) -> Option<(i64, i64)> {
        let g = self.compose(&Self::of_tile(k, n));
        // g = z -> 2^K (z + m) with m = b / 2^K
        let m = g.b.mul_pow2(-g.k);
        let m = m.to_integer()?.to_i64()?;
        Some((g.k, m))
    }
}

/// `affine_apply(m, p)`: the image `2^k x + b, 2^k y`.
pub fn affine_apply(m: &AffineMap, p: &Point) -> Point {
    m.apply(p)
}

/// A tile `R^k S^n P`, optionally carrying a colour letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileIndex {
    pub k: i64,
    pub n: i64,
    pub colour: Option<u8>,
}

impl TileIndex {
    pub fn new(k: i64, n: i64) -> Self {
        TileIndex { k, n, colour: None }
    }

    pub fn coloured(k: i64, n: i64, colour: u8) -> Self {
        TileIndex { k, n, colour: Some(colour) }
    }

    pub fn key(&self) -> (i64, i64) {
        (self.k, self.n)
    }

    pub fn map(&self) -> AffineMap {
        AffineMap::of_tile(self.k, self.n)
    }
}

/// Vertices of `P` in the order `A1..A5`.
pub fn prototile_vertices() -> [Point; 5] {
    let p = |xn, xe, yn| Point::from_parts(xn, xe, yn, 0).expect("positive");
    [p(0, 0, 1), p(1, 1, 1), p(1, 0, 1), p(1, 0, 2), p(0, 0, 2)]
}

/// Vertices `A1..A5` of tile `(k, n)`.
pub fn tile_vertices(t: &TileIndex) -> [Point; 5] {
    let g = t.map();
    prototile_vertices().map(|v| g.apply(&v))
}

/// Exact `cosh` of the hyperbolic distance.
pub fn cosh_distance(p: &Point, q: &Point) -> BigRational {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    let num = (&dx * &dx + &dy * &dy).to_rational();
    let den = (&p.y * &q.y).mul_pow2(1).to_rational();
    BigRational::one() + num / den
}

fn cosh_distance_f64(p: (f64, f64), q: (f64, f64)) -> f64 {
    1.0 + ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)) / (2.0 * p.1 * q.1)
}

/// A geodesic segment between two points.
#[derive(Clone, Debug, PartialEq)]
pub enum GeodesicArc {
    /// Part of the vertical line `x = x`, from `y0` to `y1`.
    Vertical { x: DyadicRational, y0: DyadicRational, y1: DyadicRational },
    /// Part of the circle centred on the real axis at `center` with the given
    /// squared radius, traversed from `start` to `end` (angles in radians,
    /// measured from the positive real direction).
    Circle { center: BigRational, radius_sq: BigRational, start: f64, end: f64 },
}

/// The geodesic segment from `p` to `q` (`p != q`).
pub fn geodesic_arc(p: &Point, q: &Point) -> GeodesicArc {
    if p.x == q.x {
        return GeodesicArc::Vertical { x: p.x.clone(), y0: p.y.clone(), y1: q.y.clone() };
    }
    let (xp, yp, xq, yq) = (p.x.to_rational(), p.y.to_rational(), q.x.to_rational(), q.y.to_rational());
    let two = BigRational::from_integer(2.into());
    let center = (&xp + &xq) / &two + (&yq * &yq - &yp * &yp) / (&two * (&xq - &xp));
    let radius_sq = (&xp - &center) * (&xp - &center) + &yp * &yp;
    let c = rational_to_f64(&center);
    let start = rational_to_f64(&yp).atan2(rational_to_f64(&xp) - c);
    let end = rational_to_f64(&yq).atan2(rational_to_f64(&xq) - c);
    GeodesicArc::Circle { center, radius_sq, start, end }
}

impl GeodesicArc {
    /// Highest point of the segment (the apex if the circle's top lies on it).
    pub fn max_height_f64(&self) -> f64 {
        match self {
            GeodesicArc::Vertical { y0, y1, .. } => y0.to_f64().max(y1.to_f64()),
            GeodesicArc::Circle { radius_sq, start, end, .. } => {
                let r = rational_to_f64(radius_sq).sqrt();
                let (a, b) = (start.min(*end), start.max(*end));
                if a <= std::f64::consts::FRAC_PI_2 && std::f64::consts::FRAC_PI_2 <= b {
                    r
                } else {
                    r * a.sin().max(b.sin())
                }
            }
        }
    }

    /// Minimal `cosh` distance from `c` to a point of the segment.
    fn min_cosh_distance(&self, c: (f64, f64)) -> f64 {
        match self {
            GeodesicArc::Vertical { x, y0, y1 } => {
                let x = x.to_f64();
                let (lo, hi) = (y0.to_f64().min(y1.to_f64()), y0.to_f64().max(y1.to_f64()));
                let y = ((x - c.0).powi(2) + c.1 * c.1).sqrt().clamp(lo, hi);
                cosh_distance_f64(c, (x, y))
            }
            GeodesicArc::Circle { center, radius_sq, start, end } => {
                let (cx, r) = (rational_to_f64(center), rational_to_f64(radius_sq).sqrt());
                let at = |t: f64| cosh_distance_f64(c, (cx + r * t.cos(), r * t.sin()));
                // distance to a point moving along a geodesic is unimodal
                let (mut a, mut b) = (start.min(*end), start.max(*end));
                for _ in 0..200 {
                    let m1 = a + (b - a) / 3.0;
                    let m2 = b - (b - a) / 3.0;
                    if at(m1) <= at(m2) {
                        b = m2;
                    } else {
                        a = m1;
                    }
                }
                at((a + b) / 2.0).min(at(*start)).min(at(*end))
            }
        }
    }
}

/// The five edges of a tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    A1A2,
    A2A3,
    A3A4,
    A4A5,
    A5A1,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 5] = [EdgeKind::A1A2, EdgeKind::A2A3, EdgeKind::A3A4, EdgeKind::A4A5, EdgeKind::A5A1];

    /// Indices of the endpoints among `A1..A5`.
    pub fn endpoints(self) -> (usize, usize) {
        match self {
            EdgeKind::A1A2 => (0, 1),
            EdgeKind::A2A3 => (1, 2),
            EdgeKind::A3A4 => (2, 3),
            EdgeKind::A4A5 => (3, 4),
            EdgeKind::A5A1 => (4, 0),
        }
    }

    /// `+1` for the top edge, `-1` for each bottom edge, `0` for the sides.
    pub fn charge(self) -> i64 {
        match self {
            EdgeKind::A4A5 => 1,
            EdgeKind::A1A2 | EdgeKind::A2A3 => -1,
            EdgeKind::A3A4 | EdgeKind::A5A1 => 0,
        }
    }
}

/// The edge of the tiling glued to edge `e` of tile `(k, n)`, derived from
/// the combinatorics of `P` (used to cross-check the endpoint matching).
pub fn expected_partner(k: i64, n: i64, e: EdgeKind) -> ((i64, i64), EdgeKind) {
    match e {
        EdgeKind::A4A5 => {
            let kind = if n.rem_euclid(2) == 0 { EdgeKind::A1A2 } else { EdgeKind::A2A3 };
            ((k + 1, n.div_euclid(2)), kind)
        }
        EdgeKind::A1A2 => ((k - 1, 2 * n), EdgeKind::A4A5),
        EdgeKind::A2A3 => ((k - 1, 2 * n + 1), EdgeKind::A4A5),
        EdgeKind::A3A4 => ((k, n + 1), EdgeKind::A5A1),
        EdgeKind::A5A1 => ((k, n - 1), EdgeKind::A3A4),
    }
}

/// A finite window of a bi-infinite colour sequence `w`, covering indices
/// `[offset, offset + letters.len())`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourWindow {
    pub offset: i64,
    pub letters: Vec<u8>,
}

impl ColourWindow {
    pub fn new(offset: i64, letters: Vec<u8>) -> Self {
        ColourWindow { offset, letters }
    }

    /// Constant colouring over `[-half, half)`.
    pub fn constant(letter: u8, half: i64) -> Self {
        ColourWindow { offset: -half, letters: vec![letter; 2 * half as usize] }
    }

    pub fn lo(&self) -> i64 {
        self.offset
    }

    pub fn hi(&self) -> i64 {
        self.offset + self.letters.len() as i64
    }

    /// `w_j`.
    pub fn get(&self, j: i64) -> Result<u8> {
        let idx = j - self.offset;
        if idx < 0 || idx >= self.letters.len() as i64 {
            return Err(Error::ColourWindowExhausted { index: j, lo: self.lo(), hi: self.hi() });
        }
        Ok(self.letters[idx as usize])
    }

    /// The window of `σ(w)`, where `σ(w)_j = w_{j+1}`.
    pub fn shifted(&self) -> Self {
        ColourWindow { offset: self.offset - 1, letters: self.letters.clone() }
    }

    /// Colour of tile `(q, n)`: `w_{-q}`.
    pub fn colour_of(&self, q: i64) -> Result<u8> {
        self.get(-q)
    }
}

/// How tiles are tested against the ball.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatchFilter {
    /// Euclidean bounding box of the tile against the Euclidean disk of the
    /// ball. A slight superset of the true intersecting tiles.
    #[default]
    BoundingBox,
    /// Additionally keep only tiles whose hyperbolic distance to the centre is
    /// at most the radius (floating point, tolerance `1e-9`).
    Distance,
}

/// A finite patch: tiles meeting a closed ball, keyed and ordered by `(k, n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileSet {
    tiles: BTreeMap<(i64, i64), TileIndex>,
    pub window_radius: f64,
    pub center: Point,
}

impl TileSet {
    pub fn from_tiles(tiles: impl IntoIterator<Item = TileIndex>, window_radius: f64, center: Point) -> Self {
        TileSet { tiles: tiles.into_iter().map(|t| (t.key(), t)).collect(), window_radius, center }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn contains(&self, k: i64, n: i64) -> bool {
        self.tiles.contains_key(&(k, n))
    }

    pub fn get(&self, k: i64, n: i64) -> Option<&TileIndex> {
        self.tiles.get(&(k, n))
    }

    /// Tiles in `(k, n)` order.
    pub fn iter(&self) -> impl Iterator<Item = &TileIndex> {
        self.tiles.values()
    }

    pub fn scales(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = self.tiles.keys().map(|&(k, _)| k).collect();
        ks.dedup();
        ks
    }
}

/// Upper bound for `√17 / 2`, the relative height of the top arc's apex.
const TOP_APEX: f64 = 33.0 / 16.0;

/// Euclidean bounding box `(xmin, xmax, ymin, ymax)` of tile `(k, n)`.
pub fn tile_bbox(k: i64, n: i64) -> (f64, f64, f64, f64) {
    let s = 2f64.powi(k as i32);
    (s * n as f64, s * (n as f64 + 1.0), s, s * TOP_APEX)
}

/// Patch of the uncoloured or coloured tiling around `i`.
pub fn generate_patch(radius: f64, colouring: Option<&ColourWindow>) -> Result<TileSet> {
    generate_patch_with(&Point::i(), radius, colouring, PatchFilter::BoundingBox)
}

/// Patch of all tiles meeting the closed ball of hyperbolic radius `radius`
/// around `center`.
pub fn generate_patch_with(
    center: &Point,
    radius: f64,
    colouring: Option<&ColourWindow>,
    filter: PatchFilter,
) -> Result<TileSet> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::InvalidParameter(format!("radius must be finite and >= 0, got {radius}")));
    }
    let (cx, cy) = center.to_f64();
    // Euclidean disk of the ball
    let dc = cy * radius.cosh();
    let dr = cy * radius.sinh();
    let tol = 1e-12 * dc.max(1.0);
    let (ylo, yhi) = (dc - dr, dc + dr);
    let kmin = ((ylo / TOP_APEX).log2()).floor() as i64 - 1;
    let kmax = yhi.log2().ceil() as i64 + 1;

    let mut tiles = Vec::new();
    for k in kmin..=kmax {
        let s = 2f64.powi(k as i32);
        if s > yhi + tol || s * TOP_APEX < ylo - tol {
            continue;
        }
        let nmin = ((cx - dr) / s).floor() as i64 - 1;
        let nmax = ((cx + dr) / s).ceil() as i64 + 1;
        for n in nmin..=nmax {
            let (x0, x1, y0, y1) = tile_bbox(k, n);
            let px = cx.clamp(x0, x1);
            let py = dc.clamp(y0, y1);
            let d2 = (px - cx).powi(2) + (py - dc).powi(2);
            if d2 > dr * dr + tol {
                continue;
            }
            if filter == PatchFilter::Distance && distance_to_tile(center, k, n) > radius + 1e-9 {
                continue;
            }
            let colour = match colouring {
                Some(w) => Some(w.colour_of(k)?),
                None => None,
            };
            tiles.push(TileIndex { k, n, colour });
        }
    }
    Ok(TileSet::from_tiles(tiles, radius, center.clone()))
}

/// Whether `p` lies in the closed tile `(k, n)` (exact).
pub fn tile_contains(k: i64, n: i64, p: &Point) -> bool {
    // pull back to P
    let q = AffineMap::of_tile(k, n).inverse().apply(p);
    let (x, y) = (q.x.to_rational(), q.y.to_rational());
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    if x.is_negative() || x > r(1, 1) {
        return false;
    }
    let yy = &y * &y;
    // below the top arc: (x - 1/2)^2 + y^2 <= 17/4
    if (&x - r(1, 2)) * (&x - r(1, 2)) + &yy > r(17, 4) {
        return false;
    }
    // above the bottom arcs: centres 1/4 and 3/4, radius^2 17/16
    let c = if x <= r(1, 2) { r(1, 4) } else { r(3, 4) };
    (&x - &c) * (&x - &c) + &yy >= r(17, 16)
}

/// Hyperbolic distance from `c` to the closed tile `(k, n)` (floating point).
pub fn distance_to_tile(c: &Point, k: i64, n: i64) -> f64 {
    if tile_contains(k, n, c) {
        return 0.0;
    }
    let v = tile_vertices(&TileIndex::new(k, n));
    let cf = c.to_f64();
    EdgeKind::ALL
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            geodesic_arc(&v[a], &v[b]).min_cosh_distance(cf)
        })
        .fold(f64::INFINITY, f64::min)
        .max(1.0)
        .acosh()
}

/// An edge of a particular tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub k: i64,
    pub n: i64,
    pub kind: EdgeKind,
}

/// Result of matching tile edges by exact endpoint equality.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AdjacencyReport {
    /// Pairs of edges sharing both endpoints.
    pub pairs: Vec<(EdgeRef, EdgeRef)>,
    /// Edges with no partner inside the patch.
    pub boundary: Vec<EdgeRef>,
    /// Endpoint pairs claimed by more than two edges (never expected).
    pub overfull: Vec<Vec<EdgeRef>>,
    /// For each interior top edge `A4A5`, the partner edge.
    pub top_partners: Vec<(EdgeRef, EdgeRef)>,
    /// Charge summed over edge incidences of interior edges.
    pub charge_tally: i64,
}

impl AdjacencyReport {
    /// True when no top edge is glued to another top edge and every top
    /// partner is a bottom edge of a tile one scale up.
    pub fn charge_adjacency_holds(&self) -> bool {
        self.top_partners
            .iter()
            .all(|(top, other)| matches!(other.kind, EdgeKind::A1A2 | EdgeKind::A2A3) && other.k == top.k + 1)
            && self.overfull.is_empty()
    }
}

/// Match the edges of `ts` by exact endpoint pairs.
pub fn edge_adjacency(ts: &TileSet) -> AdjacencyReport {
    type Key = (Point, Point);
    let mut by_ends: HashMap<Key, Vec<EdgeRef>> = HashMap::new();
    for t in ts.iter() {
        let v = tile_vertices(t);
        for kind in EdgeKind::ALL {
            let (a, b) = kind.endpoints();
            let (p, q) = (v[a].clone(), v[b].clone());
            let key = if (&p.x, &p.y) <= (&q.x, &q.y) { (p, q) } else { (q, p) };
            by_ends.entry(key).or_default().push(EdgeRef { k: t.k, n: t.n, kind });
        }
    }
    let mut report = AdjacencyReport::default();
    for (_, mut refs) in by_ends {
        refs.sort();
        match refs.len() {
            1 => report.boundary.push(refs[0]),
            2 => {
                let (a, b) = (refs[0], refs[1]);
                report.charge_tally += a.kind.charge() + b.kind.charge();
                if a.kind == EdgeKind::A4A5 {
                    report.top_partners.push((a, b));
                }
                if b.kind == EdgeKind::A4A5 {
                    report.top_partners.push((b, a));
                }
                report.pairs.push((a, b));
            }
            _ => report.overfull.push(refs),
        }
    }
    report.pairs.sort();
    report.boundary.sort();
    report.top_partners.sort();
    report.overfull.sort();
    report
}

/// Klein-model image of a point (exact rationals).
fn klein(p: &Point) -> (BigRational, BigRational) {
    let (x, y) = (p.x.to_rational(), p.y.to_rational());
    let r2 = &x * &x + &y * &y;
    let one = BigRational::one();
    let den = &r2 + &one;
    ((&r2 - &one) / &den, -(&x + &x) / den)
}

/// Whether two convex polygons (Klein model, vertices in order) have disjoint
/// interiors, by exact separating axes.
fn convex_interiors_disjoint(a: &[(BigRational, BigRational)], b: &[(BigRational, BigRational)]) -> bool {
    for poly in [a, b] {
        for i in 0..poly.len() {
            let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
            let nx = -(&q.1 - &p.1);
            let ny = &q.0 - &p.0;
            let proj = |v: &(BigRational, BigRational)| &nx * &v.0 + &ny * &v.1;
            let amin = a.iter().map(proj).min().unwrap();
            let amax = a.iter().map(proj).max().unwrap();
            let bmin = b.iter().map(proj).min().unwrap();
            let bmax = b.iter().map(proj).max().unwrap();
            if amax <= bmin || bmax <= amin {
                return true;
            }
        }
    }
    false
}

/// Pairs of tiles in `ts` whose interiors overlap (empty for a valid patch).
/// Candidate pairs are pruned by bounding boxes, then decided exactly.
pub fn overlapping_pairs(ts: &TileSet) -> Vec<((i64, i64), (i64, i64))> {
    let tiles: Vec<&TileIndex> = ts.iter().collect();
    let polys: Vec<Vec<(BigRational, BigRational)>> =
        tiles.iter().map(|t| tile_vertices(t).iter().map(klein).collect()).collect();
    let boxes: Vec<_> = tiles.iter().map(|t| tile_bbox(t.k, t.n)).collect();
    let mut out = Vec::new();
    for i in 0..tiles.len() {
        for j in i + 1..tiles.len() {
            let (a, b) = (boxes[i], boxes[j]);
            // boxes must overlap with positive area
            if a.1 <= b.0 || b.1 <= a.0 || a.3 <= b.2 || b.3 <= a.2 {
                continue;
            }
            if !convex_interiors_disjoint(&polys[i], &polys[j]) {
                out.push((tiles[i].key(), tiles[j].key()));
            }
        }
    }
    out
}

pub fn interiors_disjoint(ts: &TileSet) -> bool {
    overlapping_pairs(ts).is_empty()
}

/// Largest `ρ` such that the tiles of `P + n` and `P + m` meeting the closed
/// ball `B_ρ(i)` coincide; `+∞` when `n = m`.
///
/// Scale-`k` tiles of `P + n` are `z -> 2^k z + 2^k j + n`, so the two
/// tilings agree exactly at scales `k <= v = v2(m - n)` and share no tile at
/// any larger scale. The tiles of scale `> v` fill the region above the
/// bottom arcs of the scale-`(v+1)` tiles, whose corners are the points
/// `n + 2^v Z` at height `2^(v+1)` (the same set for `m`). The agreement
/// radius is the distance from `i` to that region.
pub fn agreement_radius(n: i64, m: i64) -> f64 {
    let Some(v) = v2_i64(m.wrapping_sub(n)) else {
        return f64::INFINITY;
    };
    let v = v as i64;
    let step = 2f64.powi(v as i32);
    let h = 2.0 * step;
    let i = Point::i().to_f64();
    let j0 = ((-n) as f64 / step).floor() as i64;
    let mut best = f64::INFINITY;
    for j in j0 - 3..=j0 + 3 {
        let x0 = n as f64 + step * j as f64;
        let x1 = x0 + step;
        let cx = (x0 + x1) / 2.0;
        let r = ((step / 2.0).powi(2) + h * h).sqrt();
        let a0 = h.atan2(x0 - cx);
        let a1 = h.atan2(x1 - cx);
        let arc = GeodesicArc::Circle {
            center: BigRational::from_float(cx).expect("finite"),
            radius_sq: BigRational::from_float(r * r).expect("finite"),
            start: a0,
            end: a1,
        };
        best = best.min(arc.min_cosh_distance(i));
    }
    best.acosh()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &str, y: &str) -> Point {
        Point::new(x.parse().unwrap(), y.parse().unwrap()).unwrap()
    }

    #[test]
    fn affine_examples() {
        assert_eq!(affine_apply(&AffineMap::r(), &pt("0", "1")), pt("0", "2"));
        assert_eq!(affine_apply(&AffineMap::s(), &pt("1/2", "1")), pt("3/2", "1"));
        let g = AffineMap::new(-2, 5.into());
        assert_eq!(affine_apply(&g, &pt("4", "8")), pt("6", "2"));
        assert_eq!(g.compose(&g.inverse()), AffineMap::identity());
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert_eq!(Point::new(0.into(), 0.into()), Err(Error::NotInUpperHalfPlane));
        assert!(Point::new(0.into(), (-1).into()).is_err());
    }

    #[test]
    fn vertex_examples() {
        let v = tile_vertices(&TileIndex::new(0, 0));
        assert_eq!(v, [pt("0", "1"), pt("1/2", "1"), pt("1", "1"), pt("1", "2"), pt("0", "2")]);
        let v = tile_vertices(&TileIndex::new(1, 0));
        assert_eq!(v, [pt("0", "2"), pt("1", "2"), pt("2", "2"), pt("2", "4"), pt("0", "4")]);
        let v = tile_vertices(&TileIndex::new(0, 3));
        assert_eq!(v, [pt("3", "1"), pt("7/2", "1"), pt("4", "1"), pt("4", "2"), pt("3", "2")]);
    }

    #[test]
    fn cosh_examples() {
        let i = Point::i();
        assert_eq!(cosh_distance(&i, &i), BigRational::one());
        assert_eq!(cosh_distance(&i, &pt("0", "2")), BigRational::new(5.into(), 4.into()));
        assert_eq!(cosh_distance(&i, &pt("1", "1")), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn arc_examples() {
        assert!(matches!(geodesic_arc(&pt("0", "1"), &pt("0", "2")), GeodesicArc::Vertical { .. }));
        let GeodesicArc::Circle { center, radius_sq, .. } = geodesic_arc(&pt("0", "1"), &pt("1", "1")) else {
            panic!("expected circle")
        };
        assert_eq!(center, BigRational::new(1.into(), 2.into()));
        assert_eq!(radius_sq, BigRational::new(5.into(), 4.into()));
        let GeodesicArc::Circle { center, radius_sq, .. } = geodesic_arc(&pt("0", "2"), &pt("1", "2")) else {
            panic!("expected circle")
        };
        assert_eq!(center, BigRational::new(1.into(), 2.into()));
        assert_eq!(radius_sq, BigRational::new(17.into(), 4.into()));
    }

    #[test]
    fn patch_radius_zero_contains_corner_tiles() {
        let ts = generate_patch(0.0, None).unwrap();
        for (k, n) in [(0, 0), (0, -1), (-1, 0), (-1, -1)] {
            assert!(ts.contains(k, n), "missing ({k},{n})");
        }
        let exact = generate_patch_with(&Point::i(), 0.0, None, PatchFilter::Distance).unwrap();
        assert_eq!(exact.len(), 4);
    }

    #[test]
    fn patch_radius_half_scales() {
        let ts = generate_patch(0.5, None).unwrap();
        assert!(ts.scales().iter().all(|k| (-1..=1).contains(k)));
    }

    #[test]
    fn colour_window_exhaustion() {
        let w = ColourWindow::constant(b'1', 2);
        let err = generate_patch(3.0, Some(&w)).unwrap_err();
        assert!(matches!(err, Error::ColourWindowExhausted { .. }));
        let w = ColourWindow::constant(b'1', 16);
        let ts = generate_patch(3.0, Some(&w)).unwrap();
        assert!(ts.iter().all(|t| t.colour == Some(b'1')));
    }

    #[test]
    fn top_edge_partners() {
        let ts =
            TileSet::from_tiles([TileIndex::new(0, 0), TileIndex::new(0, 1), TileIndex::new(1, 0)], 0.0, Point::i());
        let rep = edge_adjacency(&ts);
        let top00 = EdgeRef { k: 0, n: 0, kind: EdgeKind::A4A5 };
        let top01 = EdgeRef { k: 0, n: 1, kind: EdgeKind::A4A5 };
        assert!(rep.top_partners.contains(&(top00, EdgeRef { k: 1, n: 0, kind: EdgeKind::A1A2 })));
        assert!(rep.top_partners.contains(&(top01, EdgeRef { k: 1, n: 0, kind: EdgeKind::A2A3 })));
        assert_eq!(rep.charge_tally, 0);
    }

    #[test]
    fn stabilizer() {
        let r = AffineMap::r();
        let s = AffineMap::s();
        assert_eq!(r.tile_image(3, -5), Some((4, -5)));
        assert_eq!(s.tile_image(0, 2), Some((0, 3)));
        assert_eq!(s.tile_image(1, 0), None);
    }

    #[test]
    fn containment() {
        assert!(tile_contains(0, 0, &pt("1/2", "3/2")));
        assert!(tile_contains(0, 0, &Point::i()));
        // just below the bottom arc apex near x = 1/4
        assert!(!tile_contains(0, 0, &pt("1/4", "1")));
        assert!(tile_contains(-1, 0, &pt("1/4", "1")) || tile_contains(-1, 0, &pt("1/4", "63/64")));
    }

    #[test]
    fn agreement_basics() {
        assert!(agreement_radius(0, 0).is_infinite());
        let a1 = agreement_radius(0, 1);
        assert!(a1.is_finite() && a1 > 0.0);
        assert!(agreement_radius(0, 1 << 10) > agreement_radius(0, 1 << 5));
    }
}
