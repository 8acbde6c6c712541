//! Points of the coloured hull, the affine group action on them, and
//! Monte-Carlo checks of the invariant measure.
//!
//! A point is `(ω, t, cursor, s)`: `(ω, t)` lives in the odometer suspension
//! `(Ω × R) / ((ω, t) ~ (ω + 1, t - 1))`, `cursor` selects `σ^cursor(w)` in a
//! fixed two-sided colour window, and `u = 2^s` is the `R*_+` coordinate.
//! Points are identified under `(T, w', u) ~ (R·T, σ(w'), u/2)`, which on
//! coordinates reads `(ω, t, c, s) ~ (2ω, 2t, c + 1, s - 1)`. Normalized points
//! have `t, s ∈ [0, 1)`.
//!
//! `g = (a, b)` acts by `u -> a·u` and a translation of `b / (a·u)` along the
//! suspension. All Monte-Carlo runs split the samples into fixed chunks of
//! [`CHUNK`] draws; chunk `i` uses ChaCha8 seeded with the master seed on
//! stream `i`, so results do not depend on the number of threads.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{DyadicInt, LocallyConstFnOmega};
use crate::error::{Error, Result};
use crate::hypgeo::{distance_to_tile, generate_patch_with, ColourWindow, PatchFilter, Point, TileSet};
use crate::kinv::CylinderFunction;
use crate::subshift::{measures, two_sided_window, SubshiftSpec, Word};

/// Samples per Monte-Carlo chunk.
pub const CHUNK: usize = 4096;
/// Digits of `ω` drawn by the sampler.
pub const SAMPLE_PRECISION: u32 = 64;
/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1.0 / 64.0;

/// A point of the hull.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HullPoint {
    pub omega: DyadicInt,
    pub t: f64,
    pub cursor: i64,
    pub s: f64,
}

impl HullPoint {
    pub fn new(omega: DyadicInt, t: f64, cursor: i64, s: f64) -> Self {
        HullPoint { omega, t, cursor, s }
    }

    pub fn is_normalized(&self) -> bool {
        (0.0..1.0).contains(&self.t) && (0.0..1.0).contains(&self.s)
    }

    /// `cR`: `(2ω, 2t, c + 1, s - 1)`.
    pub fn apply_cr(&self) -> Self {
        HullPoint { omega: self.omega.double(), t: 2.0 * self.t, cursor: self.cursor + 1, s: self.s - 1.0 }
    }

    /// `cR^{-1}`, halving `ω + t` on the suspension.
    pub fn apply_cr_inverse(&self) -> Result<Self> {
        let (omega, t) = if self.omega.is_even() {
            (self.omega.halve()?, self.t / 2.0)
        } else {
            (self.omega.odometer_add(-1).halve()?, (self.t + 1.0) / 2.0)
        };
        Ok(HullPoint { omega, t, cursor: self.cursor - 1, s: self.s + 1.0 })
    }

    fn carry(&mut self) {
        let k = self.t.floor();
        if k != 0.0 {
            self.omega = self.omega.odometer_add(k as i64);
            self.t -= k;
        }
        // rounding can leave t == 1.0
        if self.t >= 1.0 {
            self.omega = self.omega.odometer_add(1);
            self.t = 0.0;
        }
    }

    /// Whether two normalized points agree on `ω` to the common precision and
    /// on `(t, s)` within `tol`, allowing `t` to wrap across an odometer carry.
    pub fn close_to(&self, o: &Self, tol: f64) -> bool {
        if self.cursor != o.cursor || (self.s - o.s).abs() > tol {
            return false;
        }
        let p = self.omega.precision().min(o.omega.precision());
        let same = |a: &DyadicInt, b: &DyadicInt| a.project(p).ok() == b.project(p).ok();
        if same(&self.omega, &o.omega) && (self.t - o.t).abs() <= tol {
            return true;
        }
        (same(&self.omega.odometer_add(1), &o.omega) && (self.t - 1.0 - o.t).abs() <= tol)
            || (same(&self.omega, &o.omega.odometer_add(1)) && (o.t - 1.0 - self.t).abs() <= tol)
    }
}

/// Bring `t` and `s` into `[0, 1)` using odometer carries and `cR^{±1}`.
pub fn normalize(p: &HullPoint) -> Result<HullPoint> {
    if !p.t.is_finite() || !p.s.is_finite() {
        return Err(Error::InvalidParameter("hull coordinates must be finite".into()));
    }
    let mut q = *p;
    q.carry();
    while q.s >= 1.0 {
        q = q.apply_cr();
        q.carry();
    }
    while q.s < 0.0 {
        q = q.apply_cr_inverse()?;
        q.carry();
    }
    Ok(q)
}

/// `(a, b)·p`: scale `u -> a·u` and translate by `b / (a·u)`.
pub fn act(a: f64, b: f64, p: &HullPoint) -> Result<HullPoint> {
    if !(a.is_finite() && a > 0.0) || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("group element needs a > 0 and finite b, got ({a}, {b})")));
    }
    let u = p.s.exp2();
    let q = HullPoint { t: p.t + b / (a * u), s: p.s + a.log2(), ..*p };
    normalize(&q)
}

/// Product `g1·g2` in the affine group `z -> a z + b`.
pub fn compose(g1: (f64, f64), g2: (f64, f64)) -> (f64, f64) {
    (g1.0 * g2.0, g1.0 * g2.1 + g1.1)
}

/// `σ^shift(w)` as a window.
pub fn shift_window(w: &ColourWindow, shift: i64) -> ColourWindow {
    ColourWindow::new(w.offset - shift, w.letters.clone())
}

/// The index map `(q, n) -> (q + 1, n)` applied to a coloured patch.
pub fn apply_r(ts: &TileSet) -> Vec<(i64, i64, Option<u8>)> {
    ts.iter().map(|t| (t.k + 1, t.n, t.colour)).collect()
}

/// Whether `R` maps the patch of `P(w)` around `center` onto the patch of
/// `P(target)` around `R(center)`, colours included. Tiles within `1e-6` of
/// the ball's boundary may be present in only one of the two patches.
pub fn r_image_matches(w: &ColourWindow, target: &ColourWindow, center: &Point, radius: f64) -> Result<bool> {
    let src = generate_patch_with(center, radius, Some(w), PatchFilter::Distance)?;
    let rc = Point::new(center.x().mul_pow2(1), center.y().mul_pow2(1))?;
    let dst = generate_patch_with(&rc, radius, Some(target), PatchFilter::Distance)?;
    let image: HashMap<(i64, i64), Option<u8>> = apply_r(&src).into_iter().map(|(k, n, c)| ((k, n), c)).collect();
    let boundary = |k: i64, n: i64| (distance_to_tile(&rc, k, n) - radius).abs() < 1e-6;
    for t in dst.iter() {
        match image.get(&(t.k, t.n)) {
            Some(c) if *c != t.colour => return Ok(false),
            Some(_) => {}
            None if boundary(t.k, t.n) => {}
            None => return Ok(false),
        }
    }
    for &(k, n) in image.keys() {
        if !dst.contains(k, n) && !boundary(k, n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R·P(w) = P(σ(w))` on the ball of `radius` around `i`.
pub fn check_relation_rpw(w: &ColourWindow, radius: f64) -> Result<bool> {
    r_image_matches(w, &w.shifted(), &Point::i(), radius)
}

/// How the colour cursor is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CursorLaw {
    /// Blocks drawn from the invariant measure.
    Invariant,
    /// Negative control: blocks drawn from the invariant measure conditioned
    /// on the letter at the cursor being the given one. Not shift invariant.
    Biased(u8),
}

/// Letters on each side of the cursor whose joint law is exact.
pub const CURSOR_MARGIN: usize = 6;
const WINDOW_HALF: usize = 1 << 14;

/// Draws points from `ν ⊗ Leb ⊗ μ ⊗ Leb` on the fundamental domain.
#[derive(Clone, Debug)]
pub struct HullSampler {
    window: ColourWindow,
    blocks: Vec<Word>,
    cumulative: Vec<f64>,
    occurrences: Vec<Vec<i64>>,
    law: CursorLaw,
}

impl HullSampler {
    pub fn new(spec: &SubshiftSpec, law: CursorLaw) -> Result<Self> {
        let len = 2 * CURSOR_MARGIN + 1;
        let window = two_sided_window(spec, WINDOW_HALF)?;
        let ms = measures(spec, len)?;
        let mut found: HashMap<&[u8], Vec<i64>> = HashMap::new();
        for (i, block) in window.letters.windows(len).enumerate() {
            found.entry(block).or_default().push(window.offset + i as i64 + CURSOR_MARGIN as i64);
        }
        let mut blocks = Vec::new();
        let mut cumulative = Vec::new();
        let mut occurrences = Vec::new();
        let mut acc = 0.0;
        for (u, m) in ms.iter() {
            if let CursorLaw::Biased(letter) = law {
                if u.0[CURSOR_MARGIN] != letter {
                    continue;
                }
            }
            let weight = m.to_f64();
            if weight <= 0.0 {
                continue;
            }
            let occ = found
                .get(u.letters())
                .cloned()
                .ok_or(Error::HorizonExhausted { horizon: window.letters.len(), needed: len })?;
            acc += weight;
            blocks.push(u.clone());
            cumulative.push(acc);
            occurrences.push(occ);
        }
        if blocks.is_empty() {
            return Err(Error::InvalidParameter("cursor law has empty support".into()));
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(HullSampler { window, blocks, cumulative, occurrences, law })
    }

    pub fn window(&self) -> &ColourWindow {
        &self.window
    }

    pub fn law(&self) -> CursorLaw {
        self.law
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> HullPoint {
        let residue: u128 = rng.random::<u64>() as u128;
        let omega = DyadicInt::new(residue as i128, SAMPLE_PRECISION).expect("valid precision");
        let t: f64 = rng.random();
        let s: f64 = rng.random();
        let x: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= x).min(self.blocks.len() - 1);
        let occ = &self.occurrences[i];
        let cursor = occ[rng.random_range(0..occ.len())];
        HullPoint { omega, t, cursor, s }
    }
}

/// One draw from the product measure, determined by `seed`.
pub fn sample_product_measure(spec: &SubshiftSpec, seed: u64) -> Result<HullPoint> {
    let sampler = HullSampler::new(spec, CursorLaw::Invariant)?;
    Ok(sampler.sample(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// A C² bump profile in one coordinate of `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Profile {
    Constant,
    /// `(1 - ((x - center)/width)^2)^3` on `|x - center| < width`.
    Bump {
        center: f64,
        width: f64,
    },
}

impl Profile {
    pub fn bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && center - width >= 0.0 && center + width <= 1.0) {
            return Err(Error::InvalidParameter(format!("bump ({center}, {width}) must lie in [0, 1]")));
        }
        Ok(Profile::Bump { center, width })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Constant => 1.0,
            Profile::Bump { center, width } => {
                let u = (x - center) / width;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - u * u).powi(3)
                }
            }
        }
    }
}

/// `f(ω, t, w', s) = F(w') · φ(ω) · p_t(t) · p_s(s)` on normalized points.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub cylinder: Option<CylinderFunction>,
    pub omega: Option<LocallyConstFnOmega>,
    pub profile_t: Profile,
    pub profile_s: Profile,
}

impl TestFunction {
    pub fn constant() -> Self {
        TestFunction { cylinder: None, omega: None, profile_t: Profile::Constant, profile_s: Profile::Constant }
    }

    pub fn is_constant(&self) -> bool {
        self.cylinder.is_none()
            && self.omega.is_none()
            && self.profile_t == Profile::Constant
            && self.profile_s == Profile::Constant
    }

    /// Value at a normalized point.
    pub fn eval(&self, p: &HullPoint, w: &ColourWindow) -> Result<f64> {
        let mut v = self.profile_t.eval(p.t) * self.profile_s.eval(p.s);
        if v == 0.0 {
            return Ok(0.0);
        }
        if let Some(f) = &self.omega {
            v *= f.eval(&p.omega)? as f64;
        }
        if let Some(c) = &self.cylinder {
            v *= c.eval_at(w, p.cursor)?.to_f64();
        }
        Ok(v)
    }

    /// `f(g·p)`.
    pub fn eval_moved(&self, a: f64, b: f64, p: &HullPoint, w: &ColourWindow) -> Result<f64> {
        self.eval(&act(a, b, p)?, w)
    }
}

/// A Monte-Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub statistic: f64,
    pub std_error: f64,
    pub n: usize,
    pub pass: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl McReport {
    fn consistent_with_zero(mean: f64, se: f64, bias: f64, n: usize, seed: u64) -> Self {
        let pass = mean.abs() <= 3.0 * se + bias;
        McReport { statistic: mean, std_error: se, n, pass, seed, bias_bound: Some(bias), label: None }
    }
}

/// Per-statistic sums over a Monte-Carlo run.
#[derive(Clone, Debug)]
struct Sums {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
    n: usize,
}

impl Sums {
    fn new(k: usize) -> Self {
        Sums { sum: vec![0.0; k], sumsq: vec![0.0; k], n: 0 }
    }

    fn push(&mut self, xs: &[f64]) {
        for (i, x) in xs.iter().enumerate() {
            self.sum[i] += x;
            self.sumsq[i] += x * x;
        }
        self.n += 1;
    }

    fn merge(&mut self, o: &Sums) {
        for i in 0..self.sum.len() {
            self.sum[i] += o.sum[i];
            self.sumsq[i] += o.sumsq[i];
        }
        self.n += o.n;
    }

    fn mean(&self, i: usize) -> f64 {
        self.sum[i] / self.n as f64
    }

    fn std_error(&self, i: usize) -> f64 {
        let n = self.n as f64;
        let m = self.mean(i);
        let var = ((self.sumsq[i] / n) - m * m).max(0.0) * n / (n - 1.0).max(1.0);
        (var / n).sqrt()
    }
}

/// The RNG for chunk `i` of a run with master seed `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_mc<F>(n_samples: usize, seed: u64, k: usize, draw: F) -> Result<Sums>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> Result<()> + Sync,
{
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let chunks = n_samples.div_ceil(CHUNK);
    let parts: Vec<Result<Sums>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let len = CHUNK.min(n_samples - c * CHUNK);
            let mut sums = Sums::new(k);
            let mut buf = Vec::with_capacity(k);
            for _ in 0..len {
                buf.clear();
                draw(&mut rng, &mut buf)?;
                sums.push(&buf);
            }
            Ok(sums)
        })
        .collect();
    let mut total = Sums::new(k);
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

/// Result of an invariance check over several group elements.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub per_element: Vec<McReport>,
    pub pass: bool,
}

/// `mean(f∘g) - mean(f)` for each `g`, paired on common samples.
pub fn invariance_check(
    sampler: &HullSampler,
    f: &TestFunction,
    g_list: &[(f64, f64)],
    n_samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let w = sampler.window();
    let sums = run_mc(n_samples, seed, g_list.len(), |rng, out| {
        let p = sampler.sample(rng);
        let base = f.eval(&p, w)?;
        for &(a, b) in g_list {
            out.push(f.eval_moved(a, b, &p, w)? - base);
        }
        Ok(())
    })?;
    let per_element: Vec<McReport> = g_list
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let mut r = McReport::consistent_with_zero(sums.mean(i), sums.std_error(i), 0.0, sums.n, seed);
            r.bias_bound = None;
            r.label = Some(format!("g = ({a}, {b})"));
            r
        })
        .collect();
    let pass = per_element.iter().all(|r| r.pass);
    Ok(InvarianceReport { per_element, pass })
}

fn check_step(h: f64) -> Result<()> {
    if !(1e-6..=0.25).contains(&h) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h} outside [1e-6, 0.25]")));
    }
    Ok(())
}

/// Monte-Carlo estimate of `∫ Δf dη` with `Δ = y²(∂x² + ∂y²)` in the leaf
/// chart `x + iy -> (y, x)·p`, by central differences of step `h`.
///
/// The bias bound is `h²/12` times the sample mean of the fourth differences.
pub fn harmonicity_check(
    sampler: &HullSampler,
    f: &TestFunction,
    n_samples: usize,
    h: f64,
    seed: u64,
) -> Result<McReport> {
    check_step(h)?;
    let w = sampler.window();
    let sums = run_mc(n_samples, seed, 2, |rng, out| {
        let p = sampler.sample(rng);
        let at = |a: f64, b: f64| f.eval_moved(a, b, &p, w);
        let f0 = f.eval(&p, w)?;
        let (xp, xm, yp, ym) = (at(1.0, h)?, at(1.0, -h)?, at(1.0 + h, 0.0)?, at(1.0 - h, 0.0)?);
        let lap = (xp + xm + yp + ym - 4.0 * f0) / (h * h);
        let d4x = at(1.0, 2.0 * h)? - 4.0 * xp + 6.0 * f0 - 4.0 * xm + at(1.0, -2.0 * h)?;
        let d4y = at(1.0 + 2.0 * h, 0.0)? - 4.0 * yp + 6.0 * f0 - 4.0 * ym + at(1.0 - 2.0 * h, 0.0)?;
        out.push(lap);
        out.push((d4x.abs() + d4y.abs()) / h.powi(4));
        Ok(())
    })?;
    let bias = h * h / 12.0 * sums.mean(1);
    Ok(McReport::consistent_with_zero(sums.mean(0), sums.std_error(0), bias, sums.n, seed))
}

/// `τ(f, g) = ∫ Y(f) g dη` and the defect `τ(f, g) + τ(g, f)`.
#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub tau: McReport,
    pub antisymmetry_defect: McReport,
}

/// Central-difference estimate of `τ(f, g)` with `Y` the generator of the
/// base-2 scaling flow `p -> (2^r, 0)·p`. `pass` on each report means
/// "consistent with zero".
pub fn tau_pairing(
    sampler: &HullSampler,
    f: &TestFunction,
    g: &TestFunction,
    n_samples: usize,
    h: f64,
    seed: u64,
) -> Result<TauReport> {
    check_step(h)?;
    let w = sampler.window();
    let flow = |tf: &TestFunction, p: &HullPoint, r: f64| tf.eval_moved(r.exp2(), 0.0, p, w);
    let sums = run_mc(n_samples, seed, 3, |rng, out| {
        let p = sampler.sample(rng);
        let yf = (flow(f, &p, h)? - flow(f, &p, -h)?) / (2.0 * h);
        let yg = (flow(g, &p, h)? - flow(g, &p, -h)?) / (2.0 * h);
        let (f0, g0) = (f.eval(&p, w)?, g.eval(&p, w)?);
        // third difference of fg for the bias bound
        let fg = |r: f64| -> Result<f64> { Ok(flow(f, &p, r)? * flow(g, &p, r)?) };
        let d3 = (fg(2.0 * h)? - 2.0 * fg(h)? + 2.0 * fg(-h)? - fg(-2.0 * h)?) / (2.0 * h.powi(3));
        out.push(yf * g0);
        out.push(yf * g0 + yg * f0);
        out.push(d3.abs());
        Ok(())
    })?;
    let bias = h * h / 6.0 * sums.mean(2);
    Ok(TauReport {
        tau: McReport::consistent_with_zero(sums.mean(0), sums.std_error(0), bias, sums.n, seed),
        antisymmetry_defect: McReport::consistent_with_zero(sums.mean(1), sums.std_error(1), bias, sums.n, seed),
    })
}

/// Empirical frequency of `pred` over `n_samples` draws, with its binomial
/// standard error.
pub fn empirical_frequency<P>(sampler: &HullSampler, n_samples: usize, seed: u64, pred: P) -> Result<(f64, f64)>
where
    P: Fn(&HullPoint, &ColourWindow) -> Result<bool> + Sync,
{
    let w = sampler.window();
    let sums = run_mc(n_samples, seed, 1, |rng, out| {
        let p = sampler.sample(rng);
        out.push(if pred(&p, w)? { 1.0 } else { 0.0 });
        Ok(())
    })?;
    Ok((sums.mean(0), sums.std_error(0)))
}

/// `f(σ^cursor w)` for a cylinder function, as a float.
pub fn eval_cylinder(f: &CylinderFunction, p: &HullPoint, w: &ColourWindow) -> Result<f64> {
    Ok(f.eval_at(w, p.cursor)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(omega: i128, t: f64, s: f64) -> HullPoint {
        HullPoint::new(DyadicInt::new(omega, 32).unwrap(), t, 0, s)
    }

    #[test]
    fn normalize_examples() {
        let p = normalize(&pt(0, 1.25, 0.0)).unwrap();
        assert_eq!((p.omega.residue(), p.t, p.s), (1, 0.25, 0.0));
        let q = normalize(&pt(3, 0.5, 1.0)).unwrap();
        assert_eq!((q.omega.residue(), q.t, q.s, q.cursor), (7, 0.0, 0.0, 1));
        assert_eq!(normalize(&q).unwrap(), q);
        let r = normalize(&pt(5, 0.5, -0.5)).unwrap();
        assert_eq!((r.omega.residue(), r.t, r.s, r.cursor), (2, 0.75, 0.5, -1));
        assert_eq!(r.omega.precision(), 31);
    }

    #[test]
    fn act_examples() {
        let p = act(1.0, 1.0, &pt(0, 0.0, 0.0)).unwrap();
        assert_eq!((p.omega.residue(), p.t, p.s), (1, 0.0, 0.0));
        let q = act(2.0, 0.0, &pt(3, 0.25, 0.0)).unwrap();
        assert_eq!((q.omega.residue(), q.t, q.s, q.cursor), (6, 0.5, 0.0, 1));
        let o = pt(9, 0.3, 0.4);
        assert_eq!(act(1.0, 0.0, &o).unwrap(), o);
        assert!(act(0.0, 1.0, &o).is_err());
    }

    #[test]
    fn precision_exhaustion() {
        let mut p = HullPoint::new(DyadicInt::new(0, 2).unwrap(), 0.0, 0, 0.0);
        p = act(0.5, 0.0, &p).unwrap();
        assert_eq!(p.omega.precision(), 1);
        assert_eq!(act(0.5, 0.0, &p), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn profiles() {
        let b = Profile::bump(0.5, 0.25).unwrap();
        assert_eq!(b.eval(0.5), 1.0);
        assert_eq!(b.eval(0.8), 0.0);
        assert!(Profile::bump(0.1, 0.25).is_err());
    }

    #[test]
    fn rpw_constant_colouring() {
        let w = ColourWindow::constant(1, 32);
        assert!(check_relation_rpw(&w, 2.0).unwrap());
        assert!(r_image_matches(&w, &w, &Point::i(), 2.0).unwrap());
    }
}
