//! Invariants and coinvariants of locally constant functions on `Z_w` under
//!
//! * `Ψ0 f = 2 f∘σ^{-1}` on `C(Z_w, Z[1/2])`,
//! * `Ψ1 f = f∘σ^{-1}` on `C(Z_w, Z)`,
//!
//! and the groups assembled from them: `K0 = coinv(Ψ0) ⊕ inv(Ψ1)`,
//! `K1 = coinv(Ψ1)`, `Ȟ^0 = inv(Ψ1)`, `Ȟ^1 = coinv(Ψ1)`, `Ȟ^2 = coinv(Ψ0)`,
//! plus the gap-labelling group generated by cylinder measures.
//!
//! A function with window `[a, b)` is `x -> F(x_a … x_{b-1})`. Since
//! `σ(x)_n = x_{n+1}`, composing with `σ^{-1}` moves the window to `[a-1, b-1)`.
//!
//! Truncation `N` of the coinvariants is the group generated by the
//! functions with window `[0, N+1)`, one generator `e_v` per `v ∈ L_{N+1}`,
//! modulo `g - Ψg` for `g` with window `[1, N+1)`. For `u ∈ L_N` this is the
//! relation `ψ Σ_b e_{ub} = Σ_a e_{au}` (`ψ = 2` for `Ψ0`, `1` for `Ψ1`).
//! Refinement `e_v -> Σ_b e_{vb}` maps truncation `N` to `N + 1`, and the
//! colimit is the full coinvariant group. Over `Z[1/2]` the integer Smith form
//! is computed and powers of two are discarded, since they are units.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypgeo::ColourWindow;
use crate::linalg::{hermite_basis, odd_part, rational_nullspace, solve_integer};
pub use crate::linalg::{smith_normal_form, IntMatrix, Snf};
use crate::numeric::DyadicRational;
use crate::subshift::{language, measures, MeasureValue, SubshiftSpec, Word};

/// Coefficient ring of a function group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Z[1/2]")]
    ZHalf,
}

impl Ring {
    /// The scalar `ψ` of the automorphism attached to this ring.
    pub fn psi(self) -> i64 {
        match self {
            Ring::Z => 1,
            Ring::ZHalf => 2,
        }
    }

    pub fn shift_mode(self) -> ShiftMode {
        match self {
            Ring::Z => ShiftMode::Psi1,
            Ring::ZHalf => ShiftMode::Psi0,
        }
    }

    /// Whether `d` is invertible in the ring.
    pub fn is_unit(self, d: &BigInt) -> bool {
        match self {
            Ring::Z => d.abs().is_one(),
            Ring::ZHalf => !d.is_zero() && odd_part(d).is_one(),
        }
    }

    fn admits(self, c: &DyadicRational) -> bool {
        self == Ring::ZHalf || c.is_integer()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::ZHalf => "Z[1/2]",
        })
    }
}

/// Which automorphism to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftMode {
    /// `f -> 2 f∘σ^{-1}` (ring `Z[1/2]` only).
    Psi0,
    /// `f -> f∘σ^{-1}`.
    Psi1,
}

/// A locally constant function on `Z_w`: `x -> coeffs[x_a … x_{b-1}]` on the
/// window `[a, b)`. Words without a coefficient map to zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CylinderFunction {
    ring: Ring,
    start: i64,
    len: usize,
    coeffs: BTreeMap<Word, DyadicRational>,
}

impl CylinderFunction {
    pub fn new(ring: Ring, start: i64, len: usize, coeffs: BTreeMap<Word, DyadicRational>) -> Result<Self> {
        for (w, c) in &coeffs {
            if w.len() != len {
                return Err(Error::InvalidParameter(format!("word {w} does not fit a window of length {len}")));
            }
            if !ring.admits(c) {
                return Err(Error::RingMismatch(format!("coefficient {c} is not in {ring}")));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CylinderFunction { ring, start, len, coeffs })
    }

    /// `χ_[u]` anchored at `start`.
    pub fn indicator(ring: Ring, start: i64, u: &Word) -> Self {
        CylinderFunction { ring, start, len: u.len(), coeffs: BTreeMap::from([(u.clone(), DyadicRational::one())]) }
    }

    pub fn constant(ring: Ring, c: DyadicRational) -> Result<Self> {
        Self::new(ring, 0, 0, BTreeMap::from([(Word::default(), c)]))
    }

    pub fn zero(ring: Ring) -> Self {
        CylinderFunction { ring, start: 0, len: 0, coeffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// `[a, b)`.
    pub fn window(&self) -> (i64, i64) {
        (self.start, self.start + self.len as i64)
    }

    pub fn coeffs(&self) -> &BTreeMap<Word, DyadicRational> {
        &self.coeffs
    }

    pub fn coefficient(&self, w: &Word) -> DyadicRational {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The same function viewed in a larger coefficient ring.
    pub fn promote(&self, ring: Ring) -> Result<Self> {
        if self.coeffs.values().all(|c| ring.admits(c)) {
            Ok(CylinderFunction { ring, ..self.clone() })
        } else {
            Err(Error::RingMismatch(format!("function has coefficients outside {ring}")))
        }
    }

    /// Extend the window one letter to the right.
    pub fn refine_right(&self, spec: &SubshiftSpec) -> Result<Self> {
        let next = language(spec, self.len + 1)?;
        let mut coeffs = BTreeMap::new();
        for w in next.iter() {
            let c = self.coefficient(&Word(w.0[..self.len].to_vec()));
            if !c.is_zero() {
                coeffs.insert(w.clone(), c);
            }
        }
        Ok(CylinderFunction { ring: self.ring, start: self.start, len: self.len + 1, coeffs })
    }

    /// Extend the window one letter to the left.
    pub fn refine_left(&self, spec: &SubshiftSpec) -> Result<Self> {
        let next = language(spec, self.len + 1)?;
        let mut coeffs = BTreeMap::new();
        for w in next.iter() {
            let c = self.coefficient(&Word(w.0[1..].to_vec()));
            if !c.is_zero() {
                coeffs.insert(w.clone(), c);
            }
        }
        Ok(CylinderFunction { ring: self.ring, start: self.start - 1, len: self.len + 1, coeffs })
    }

    /// Refine to the window `[a, b)`, which must contain the current one.
    pub fn refine_to(&self, spec: &SubshiftSpec, a: i64, b: i64) -> Result<Self> {
        let (s, e) = self.window();
        if a > s || b < e {
            return Err(Error::InvalidParameter(format!("window [{a}, {b}) does not contain [{s}, {e})")));
        }
        let mut f = self.clone();
        for _ in a..s {
            f = f.refine_left(spec)?;
        }
        for _ in e..b {
            f = f.refine_right(spec)?;
        }
        Ok(f)
    }

    /// Drop coefficients on words outside the language.
    pub fn restrict(&self, spec: &SubshiftSpec) -> Result<Self> {
        if self.len == 0 {
            return Ok(self.clone());
        }
        let lang = language(spec, self.len)?;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(w, _)| lang.binary_search(w).is_ok())
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Ok(CylinderFunction { coeffs, ..self.clone() })
    }

    /// Smallest window representing the same function.
    pub fn canonical(&self, spec: &SubshiftSpec) -> Result<Self> {
        let mut f = self.restrict(spec)?;
        if f.is_zero() {
            return Ok(CylinderFunction::zero(f.ring));
        }
        loop {
            if f.len == 0 {
                return Ok(f);
            }
            let shorter = language(spec, f.len - 1).ok();
            let trimmed = |drop_first: bool| -> Option<CylinderFunction> {
                let mut coeffs: BTreeMap<Word, DyadicRational> = BTreeMap::new();
                let lang = language(spec, f.len).ok()?;
                for w in lang.iter() {
                    let key = if drop_first { Word(w.0[1..].to_vec()) } else { Word(w.0[..f.len - 1].to_vec()) };
                    let c = f.coefficient(w);
                    match coeffs.get(&key) {
                        Some(prev) if *prev != c => return None,
                        Some(_) => {}
                        None => {
                            coeffs.insert(key, c);
                        }
                    }
                }
                if f.len == 1 && shorter.is_none() {
                    // length-0 words: single key
                }
                let start = if drop_first { f.start + 1 } else { f.start };
                Some(CylinderFunction {
                    ring: f.ring,
                    start,
                    len: f.len - 1,
                    coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
                })
            };
            if let Some(g) = trimmed(false) {
                f = g;
            } else if let Some(g) = trimmed(true) {
                f = g;
            } else {
                return Ok(f);
            }
        }
    }

    fn combine(&self, spec: &SubshiftSpec, o: &Self, sign: i64) -> Result<Self> {
        if self.ring != o.ring {
            return Err(Error::RingMismatch(format!("cannot combine {} and {} functions", self.ring, o.ring)));
        }
        let (a0, b0) = self.window();
        let (a1, b1) = o.window();
        let (a, b) = if self.len == 0 && self.is_zero() {
            (a1, b1)
        } else if o.len == 0 && o.is_zero() {
            (a0, b0)
        } else {
            (a0.min(a1), b0.max(b1))
        };
        let f = if self.is_zero() {
            CylinderFunction { start: a, len: (b - a) as usize, ..self.clone() }
        } else {
            self.refine_to(spec, a, b)?
        };
        let g = if o.is_zero() {
            CylinderFunction { start: a, len: (b - a) as usize, ..o.clone() }
        } else {
            o.refine_to(spec, a, b)?
        };
        let mut coeffs = f.coeffs.clone();
        for (w, c) in g.coeffs {
            let e = coeffs.entry(w).or_default();
            *e = if sign > 0 { &*e + &c } else { &*e - &c };
        }
        Self::new(self.ring, a, (b - a) as usize, coeffs)
    }

    pub fn add(&self, spec: &SubshiftSpec, o: &Self) -> Result<Self> {
        self.combine(spec, o, 1)
    }

    pub fn sub(&self, spec: &SubshiftSpec, o: &Self) -> Result<Self> {
        self.combine(spec, o, -1)
    }

    pub fn scale(&self, c: &DyadicRational) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        Self::new(self.ring, self.start, self.len, coeffs)
    }

    /// `Ψ0 f = 2 f∘σ^{-1}` or `Ψ1 f = f∘σ^{-1}`.
    pub fn apply_shift(&self, mode: ShiftMode) -> Result<Self> {
        let factor = match mode {
            ShiftMode::Psi0 if self.ring != Ring::ZHalf => {
                return Err(Error::RingMismatch("Ψ0 is only defined on Z[1/2]-valued functions".into()))
            }
            ShiftMode::Psi0 => DyadicRational::from_int(2),
            ShiftMode::Psi1 => DyadicRational::one(),
        };
        let coeffs = self.coeffs.iter().map(|(w, c)| (w.clone(), c * &factor)).collect();
        Ok(CylinderFunction { ring: self.ring, start: self.start - 1, len: self.len, coeffs })
    }

    /// Inverse of [`apply_shift`](Self::apply_shift).
    pub fn apply_shift_inverse(&self, mode: ShiftMode) -> Result<Self> {
        let factor = match mode {
            ShiftMode::Psi0 if self.ring != Ring::ZHalf => {
                return Err(Error::RingMismatch("Ψ0 is only defined on Z[1/2]-valued functions".into()))
            }
            ShiftMode::Psi0 => DyadicRational::pow2(-1),
            ShiftMode::Psi1 => DyadicRational::one(),
        };
        let coeffs = self.coeffs.iter().map(|(w, c)| (w.clone(), c * &factor)).collect();
        Ok(CylinderFunction { ring: self.ring, start: self.start + 1, len: self.len, coeffs })
    }

    /// Largest absolute coefficient.
    pub fn sup_norm(&self) -> DyadicRational {
        self.coeffs.values().map(DyadicRational::abs).max().unwrap_or_default()
    }

    /// `f(σ^j w)` for a two-sided sequence given by a window.
    pub fn eval_at(&self, w: &ColourWindow, j: i64) -> Result<DyadicRational> {
        let letters: Result<Vec<u8>> = (0..self.len as i64).map(|i| w.get(j + self.start + i)).collect();
        Ok(self.coefficient(&Word(letters?)))
    }

    /// Whether two functions agree on `Z_w`.
    pub fn same_function(&self, spec: &SubshiftSpec, o: &Self) -> Result<bool> {
        Ok(self.sub(spec, o)?.restrict(spec)?.is_zero())
    }

    /// `∫ f dμ` for the invariant measure of `spec`.
    pub fn integrate(&self, spec: &SubshiftSpec) -> Result<MeasureValue> {
        let mut acc = MeasureValue::zero();
        if self.len == 0 {
            let c = self.coefficient(&Word::default());
            return Ok(MeasureValue::Rational(c.to_rational()));
        }
        let ms = measures(spec, self.len)?;
        for (w, m) in ms.iter() {
            let c = self.coefficient(w);
            if c.is_zero() {
                continue;
            }
            let term = match m {
                MeasureValue::Rational(r) => MeasureValue::Rational(r * c.to_rational()),
                MeasureValue::Algebraic(a) => MeasureValue::Algebraic(a.scale(&c.to_rational())),
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Debug for CylinderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.window();
        write!(f, "CylinderFunction[{}; [{a},{b}); ", self.ring)?;
        let terms: Vec<String> = self.coeffs.iter().map(|(w, c)| format!("{c}·[{w}]")).collect();
        write!(f, "{}]", if terms.is_empty() { "0".to_string() } else { terms.join(" + ") })
    }
}

impl Serialize for CylinderFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        let (a, b) = self.window();
        m.serialize_entry("window", &[a, b])?;
        let coeffs: BTreeMap<String, String> =
            self.coeffs.iter().map(|(w, c)| (w.to_string(), c.to_string())).collect();
        m.serialize_entry("coeffs", &coeffs)?;
        m.end()
    }
}

/// `apply_shift(f, mode)`.
pub fn apply_shift(f: &CylinderFunction, mode: ShiftMode) -> Result<CylinderFunction> {
    f.apply_shift(mode)
}

/// A generator of a finitely presented group, with a function representative.
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    /// `None` for a free generator, otherwise its order.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub order: Option<BigInt>,
    pub rep: CylinderFunction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn ser_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(d) => s.serialize_str(&d.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for d in v {
        match d.to_i64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&d.to_string())?,
        }
    }
    seq.end()
}

/// Presentation data retained to compute classes.
#[derive(Clone, Debug)]
struct Presentation {
    ring: Ring,
    level: usize,
    words: Vec<Word>,
    snf: Snf,
    kept: Vec<usize>,
}

/// A finitely presented abelian group (or `Z[1/2]`-module) in Smith form.
#[derive(Clone, Debug, Serialize)]
pub struct FPAbelianGroup {
    pub ring: Ring,
    pub rank: usize,
    /// Invariant factors `d1 | d2 | …`, all non-units (odd over `Z[1/2]`).
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
    pub generators: Vec<Generator>,
    pub stabilized: bool,
    #[serde(rename = "N_used")]
    pub n_used: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub approximate: bool,
    #[serde(skip)]
    presentation: Option<Arc<Presentation>>,
}

impl FPAbelianGroup {
    pub fn zero(ring: Ring) -> Self {
        FPAbelianGroup {
            ring,
            rank: 0,
            torsion: Vec::new(),
            generators: Vec::new(),
            stabilized: true,
            n_used: 0,
            approximate: false,
            presentation: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Same abstract group (ring, rank and invariant factors).
    pub fn isomorphic(&self, o: &Self) -> bool {
        self.ring == o.ring && self.rank == o.rank && self.torsion == o.torsion
    }

    /// Short form such as `Z^2 ⊕ Z/3`.
    pub fn describe(&self) -> String {
        let base = self.ring.to_string();
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(base.clone()),
            r => parts.push(format!("{base}^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// One level of a truncation chain.
#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
    /// Whether the map to the next level is an isomorphism (`None` for the last level).
    pub iso_to_next: Option<bool>,
}

/// Result of a coinvariant computation.
#[derive(Clone, Debug, Serialize)]
pub struct Coinvariants {
    pub group: FPAbelianGroup,
    pub stabilized: bool,
    pub chain: Vec<LevelRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Relation matrix (generators `L_{N+1}` × relations `L_N`) of truncation `N`.
pub fn coinvariant_relations(spec: &SubshiftSpec, ring: Ring, level: usize) -> Result<(Vec<Word>, IntMatrix)> {
    let gens = language(spec, level + 1)?;
    let rels = language(spec, level)?;
    let idx: HashMap<&Word, usize> = gens.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let psi = BigInt::from(ring.psi());
    let mut a = IntMatrix::zeros(gens.len(), rels.len());
    for (j, u) in rels.iter().enumerate() {
        for v in gens.iter() {
            if v.0[..level] == u.0[..] {
                a[(idx[v], j)] += &psi;
            }
            if v.0[1..] == u.0[..] {
                a[(idx[v], j)] -= BigInt::one();
            }
        }
    }
    Ok((gens.to_vec(), a))
}

/// The same truncation with generators `L_N ⊔ L_{N+1}` and both relation
/// families kept: `e_u = Σ_b e_{ub}` and `ψ e_u = Σ_a e_{au}`.
pub fn coinvariant_relations_unreduced(spec: &SubshiftSpec, ring: Ring, level: usize) -> Result<IntMatrix> {
    let short = language(spec, level)?;
    let long = language(spec, level + 1)?;
    let (ns, nl) = (short.len(), long.len());
    let psi = BigInt::from(ring.psi());
    let mut a = IntMatrix::zeros(ns + nl, 2 * ns);
    for (j, u) in short.iter().enumerate() {
        a[(j, j)] += BigInt::one();
        a[(j, ns + j)] += &psi;
        for (i, v) in long.iter().enumerate() {
            if v.0[..level] == u.0[..] {
                a[(ns + i, j)] -= BigInt::one();
            }
            if v.0[1..] == u.0[..] {
                a[(ns + i, ns + j)] -= BigInt::one();
            }
        }
    }
    Ok(a)
}

/// Refinement `e_v -> Σ_b e_{vb}` from truncation `N` to `N + 1`.
pub fn transition_matrix(spec: &SubshiftSpec, level: usize) -> Result<IntMatrix> {
    let from = language(spec, level + 1)?;
    let to = language(spec, level + 2)?;
    let mut m = IntMatrix::zeros(to.len(), from.len());
    for (j, v) in from.iter().enumerate() {
        for (i, w) in to.iter().enumerate() {
            if w.0[..level + 1] == v.0[..] {
                m[(i, j)] = BigInt::one();
            }
        }
    }
    Ok(m)
}

/// `(rank, torsion)` of the module presented by `a` (generators are rows).
pub fn group_invariants(a: &IntMatrix, ring: Ring) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(a);
    invariants_of_snf(&snf, a.rows(), ring)
}

fn invariants_of_snf(snf: &Snf, gens: usize, ring: Ring) -> (usize, Vec<BigInt>) {
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag
        .iter()
        .filter(|d| !d.is_zero() && !ring.is_unit(d))
        .map(|d| if ring == Ring::ZHalf { odd_part(d) } else { d.clone() })
        .collect();
    (gens - nonzero, torsion)
}

/// Whether every relation of truncation `N` maps into the relations of `N + 1`.
pub fn transition_is_well_defined(spec: &SubshiftSpec, ring: Ring, level: usize) -> Result<bool> {
    let (_, a) = coinvariant_relations(spec, ring, level)?;
    let (_, b) = coinvariant_relations(spec, ring, level + 1)?;
    let t = transition_matrix(spec, level)?;
    let image = t.mul(&a);
    for j in 0..image.cols() {
        if solve_integer(&b, &image.column(j)).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the refinement map from truncation `N` to `N + 1` is an isomorphism.
fn transition_is_iso(spec: &SubshiftSpec, ring: Ring, level: usize) -> Result<bool> {
    let (_, a) = coinvariant_relations(spec, ring, level)?;
    let (_, b) = coinvariant_relations(spec, ring, level + 1)?;
    if group_invariants(&a, ring) != group_invariants(&b, ring) {
        return Ok(false);
    }
    // surjective: [T | B] presents the zero module
    let t = transition_matrix(spec, level)?;
    let mut tb = IntMatrix::zeros(b.rows(), t.cols() + b.cols());
    for i in 0..b.rows() {
        for j in 0..t.cols() {
            tb[(i, j)] = t[(i, j)].clone();
        }
        for j in 0..b.cols() {
            tb[(i, t.cols() + j)] = b[(i, j)].clone();
        }
    }
    let (rank, torsion) = group_invariants(&tb, ring);
    // a surjection between isomorphic finitely generated modules is injective
    Ok(rank == 0 && torsion.is_empty())
}

fn build_group(spec: &SubshiftSpec, ring: Ring, level: usize, stabilized: bool) -> Result<FPAbelianGroup> {
    let (words, a) = coinvariant_relations(spec, ring, level)?;
    let snf = smith_normal_form(&a);
    debug_assert!(snf.verify(&a));
    let diag = snf.diagonal();
    let g = words.len();
    let mut kept = Vec::new();
    let mut generators = Vec::new();
    let mut torsion = Vec::new();
    let mut rank = 0;
    for i in 0..g {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let order = if d.is_zero() {
            rank += 1;
            None
        } else if ring.is_unit(&d) {
            continue;
        } else {
            let o = if ring == Ring::ZHalf { odd_part(&d) } else { d.clone() };
            torsion.push(o.clone());
            Some(o)
        };
        kept.push(i);
        let col = snf.u_inv.column(i);
        let coeffs = words
            .iter()
            .zip(&col)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), DyadicRational::from_int(c.clone())))
            .collect();
        let rep = CylinderFunction::new(ring, 0, level + 1, coeffs)?.canonical(spec)?;
        let label = (ring == Ring::ZHalf).then(|| format!("[χ_E ⊗ Θ_ff ⊗ χ_F(n,0)] with χ_E/2^n = {rep:?}"));
        generators.push(Generator { order, rep, label });
    }
    // free generators come last in the Smith form; list torsion first like the factors
    generators.sort_by_key(|g| g.order.is_none());
    let presentation = Presentation { ring, level, words, snf, kept };
    Ok(FPAbelianGroup {
        ring,
        rank,
        torsion,
        generators,
        stabilized,
        n_used: level,
        approximate: spec.is_approximate(),
        presentation: Some(Arc::new(presentation)),
    })
}

/// Coinvariants of `Ψ0` (ring `Z[1/2]`) or `Ψ1` (ring `Z`), computed along
/// truncations `N = 1 ..= n_max` until two consecutive refinement maps are
/// isomorphisms.
pub fn coinvariants(spec: &SubshiftSpec, ring: Ring, n_max: usize) -> Result<Coinvariants> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!("N_max must be at least 2, got {n_max}")));
    }
    let mut chain: Vec<LevelRecord> = Vec::new();
    let mut isos = Vec::new();
    let mut used = n_max;
    let mut stabilized = false;
    for level in 1..=n_max {
        let (_, a) = coinvariant_relations(spec, ring, level)?;
        let (rank, torsion) = group_invariants(&a, ring);
        if let Some(prev) = chain.last_mut() {
            let iso = transition_is_iso(spec, ring, level - 1)?;
            prev.iso_to_next = Some(iso);
            isos.push(iso);
        }
        chain.push(LevelRecord { n: level, rank, torsion, iso_to_next: None });
        if isos.len() >= 2 && isos[isos.len() - 2..].iter().all(|&b| b) {
            stabilized = true;
            used = level;
            break;
        }
    }
    let group = build_group(spec, ring, used, stabilized)?;
    let note = (!stabilized).then(|| format!("not stabilized at N_max = {n_max}"));
    Ok(Coinvariants { group, stabilized, chain, note })
}

/// Coordinates of a class in the generator basis of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCoordinates {
    /// One entry per generator; torsion entries are reduced to `[0, order)`.
    pub coords: Vec<DyadicRational>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(DyadicRational::is_zero)
    }
}

/// Coordinates of `[f]` in the coinvariant group `group`.
pub fn coinvariant_class(
    spec: &SubshiftSpec,
    f: &CylinderFunction,
    group: &FPAbelianGroup,
) -> Result<ClassCoordinates> {
    let pres = group
        .presentation
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("group carries no coinvariant presentation".into()))?;
    let ring = pres.ring;
    let mode = ring.shift_mode();
    let mut g = f.promote(ring)?.restrict(spec)?;
    if g.is_zero() {
        return Ok(ClassCoordinates { coords: vec![DyadicRational::zero(); pres.kept.len()] });
    }
    // move the window to start at 0; classes are Ψ-invariant
    while g.start > 0 {
        g = g.apply_shift(mode)?;
    }
    while g.start < 0 {
        g = g.apply_shift_inverse(mode)?;
        if !g.coeffs.values().all(|c| ring.admits(c)) {
            return Err(Error::RingMismatch("shifting the window needs 1/2".into()));
        }
    }
    let width = pres.level + 1;
    if g.len > width {
        return Err(Error::RefineNMax { window: g.len, level: width });
    }
    let g = g.refine_to(spec, 0, width as i64)?;
    let scale = g.coeffs.values().map(|c| (-c.exponent()).max(0)).max().unwrap_or(0);
    let c: Vec<BigInt> =
        pres.words.iter().map(|w| g.coefficient(w).mul_pow2(scale).to_integer().expect("scaled to integer")).collect();
    let y = pres.snf.u.mul_vec(&c);
    let diag = pres.snf.diagonal();
    let mut coords = Vec::with_capacity(pres.kept.len());
    for &i in &pres.kept {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let v = if d.is_zero() {
            DyadicRational::new(y[i].clone(), -scale)
        } else {
            let m = if ring == Ring::ZHalf { odd_part(&d) } else { d.clone() };
            // y / 2^scale mod m
            let inv2 = BigInt::from(2).modpow(&(&m - BigInt::from(2)), &m);
            let inv = if m.is_one() {
                BigInt::zero()
            } else {
                inv_mod(&BigInt::from(2).pow(scale as u32), &m).unwrap_or(inv2)
            };
            DyadicRational::from_int((&y[i] * inv).mod_floor(&m))
        };
        coords.push(v);
    }
    // match the generator ordering (torsion first)
    let mut order: Vec<usize> = (0..pres.kept.len()).collect();
    order.sort_by_key(|&k| diag.get(pres.kept[k]).is_none_or(|d| d.is_zero()));
    Ok(ClassCoordinates { coords: order.into_iter().map(|k| coords[k].clone()).collect() })
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let eg = a.extended_gcd(m);
    eg.gcd.is_one().then(|| eg.x.mod_floor(m))
}

/// Invariants of `Ψ1` on `C(Z_w, Z)` (ring `Z`) or of `Ψ0` on `C(Z_w, Z[1/2])`.
///
/// Over `Z` the invariant functions with window `[0, N)` are those constant
/// on connected components of the Rauzy graph (vertices `L_N`, edges
/// `L_{N+1}`); the component count stabilizing on two consecutive levels is
/// taken as the certificate. Over `Z[1/2]` an invariant function satisfies
/// `F(w_1 … w_N) = 2 F(w_0 … w_{N-1})` for all `w ∈ L_{N+1}`, which is checked
/// to have only the zero solution at every level up to `n_max`.
pub fn invariants(spec: &SubshiftSpec, ring: Ring, n_max: usize) -> Result<FPAbelianGroup> {
    match ring {
        Ring::ZHalf => {
            for level in 1..=n_max {
                if !zhalf_invariants_vanish(spec, level)? {
                    return Err(Error::Algebraic(format!("nonzero Ψ0-invariant function at level {level}")));
                }
            }
            let mut g = FPAbelianGroup::zero(Ring::ZHalf);
            g.n_used = n_max;
            g.approximate = spec.is_approximate();
            Ok(g)
        }
        Ring::Z => {
            let mut prev: Option<usize> = None;
            let mut chosen = None;
            for level in 1..=n_max {
                let comps = rauzy_components(spec, level)?;
                let count = comps.iter().max().map_or(0, |m| m + 1);
                if prev == Some(count) {
                    chosen = Some((level - 1, true));
                    break;
                }
                prev = Some(count);
            }
            let (level, stabilized) = chosen.unwrap_or((n_max, false));
            let comps = rauzy_components(spec, level)?;
            let words = language(spec, level)?;
            let count = comps.iter().max().map_or(0, |m| m + 1);
            let mut generators = Vec::new();
            for c in 0..count {
                let coeffs = words
                    .iter()
                    .zip(&comps)
                    .filter(|(_, k)| **k == c)
                    .map(|(w, _)| (w.clone(), DyadicRational::one()))
                    .collect();
                let rep = CylinderFunction::new(Ring::Z, 0, level, coeffs)?.canonical(spec)?;
                generators.push(Generator { order: None, rep, label: None });
            }
            Ok(FPAbelianGroup {
                ring: Ring::Z,
                rank: count,
                torsion: Vec::new(),
                generators,
                stabilized,
                n_used: level,
                approximate: spec.is_approximate(),
                presentation: None,
            })
        }
    }
}

/// Component index of each word of `L_N` in the Rauzy graph.
fn rauzy_components(spec: &SubshiftSpec, level: usize) -> Result<Vec<usize>> {
    let words = language(spec, level)?;
    let edges = language(spec, level + 1)?;
    let idx: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.letters(), i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for e in edges.iter() {
        let (Some(&a), Some(&b)) = (idx.get(&e.0[..level]), idx.get(&e.0[1..])) else {
            continue;
        };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(words.len());
    for i in 0..words.len() {
        let r = find(&mut parent, i);
        let next = label.len();
        out.push(*label.entry(r).or_insert(next));
    }
    Ok(out)
}

/// Whether `F(w[1..]) = 2 F(w[..N])` for all `w ∈ L_{N+1}` forces `F = 0`.
pub fn zhalf_invariants_vanish(spec: &SubshiftSpec, level: usize) -> Result<bool> {
    let words = language(spec, level)?;
    let edges = language(spec, level + 1)?;
    let idx: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.letters(), i)).collect();
    let rows: Vec<Vec<BigRational>> = edges
        .iter()
        .map(|e| {
            let mut r = vec![BigRational::zero(); words.len()];
            r[idx[&e.0[1..]]] += BigRational::one();
            r[idx[&e.0[..level]]] -= BigRational::from_integer(2.into());
            r
        })
        .collect();
    Ok(rational_nullspace(&rows, words.len()).is_empty())
}

/// `K0` as a split sum and `K1`.
#[derive(Clone, Debug, Serialize)]
pub struct KGroups {
    /// `coinv C(Z_w, Z[1/2])`, the image of the K-theory of the odometer part.
    pub k0_coinv: FPAbelianGroup,
    /// `inv C(Z_w, Z)`, lifted by the section.
    pub k0_inv: FPAbelianGroup,
    pub k1: FPAbelianGroup,
    pub stabilized: bool,
}

impl KGroups {
    /// Total free rank of `K0` (over both summands).
    pub fn k0_rank(&self) -> usize {
        self.k0_coinv.rank + self.k0_inv.rank
    }

    pub fn k0_torsion(&self) -> Vec<BigInt> {
        let mut t = self.k0_coinv.torsion.clone();
        t.extend(self.k0_inv.torsion.iter().cloned());
        t
    }
}

pub fn k_groups(spec: &SubshiftSpec, n_max: usize) -> Result<KGroups> {
    let c0 = coinvariants(spec, Ring::ZHalf, n_max)?;
    let inv = invariants(spec, Ring::Z, n_max)?;
    let c1 = coinvariants(spec, Ring::Z, n_max)?;
    let stabilized = c0.stabilized && c1.stabilized && inv.stabilized;
    Ok(KGroups { k0_coinv: c0.group, k0_inv: inv, k1: c1.group, stabilized })
}

/// Čech cohomology of the hull.
#[derive(Clone, Debug, Serialize)]
pub struct CechGroups {
    #[serde(rename = "H0")]
    pub h0: FPAbelianGroup,
    #[serde(rename = "H1")]
    pub h1: FPAbelianGroup,
    #[serde(rename = "H2")]
    pub h2: FPAbelianGroup,
}

pub fn cech_cohomology(spec: &SubshiftSpec, n_max: usize) -> Result<CechGroups> {
    Ok(CechGroups {
        h0: invariants(spec, Ring::Z, n_max)?,
        h1: coinvariants(spec, Ring::Z, n_max)?.group,
        h2: coinvariants(spec, Ring::ZHalf, n_max)?.group,
    })
}

/// Field in which gap labels live.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescription {
    Rational,
    Algebraic { min_poly: String, degree: usize },
}

/// The group generated by cylinder measures of words of length `n`.
#[derive(Clone, Debug, Serialize)]
pub struct GapLabelLevel {
    pub n: usize,
    pub generators: Vec<MeasureValue>,
    /// Whether this level's group equals the previous one.
    pub same_as_previous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapLabelGroup {
    pub field: FieldDescription,
    /// Generators at the last truncation.
    pub generators: Vec<MeasureValue>,
    pub chain: Vec<GapLabelLevel>,
    /// `c` when the rational chain halves its generator at each of the last
    /// steps, suggesting the union `c · Z[1/2]`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub z_half_pattern: Option<BigRational>,
}

fn ser_opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Generator of the subgroup of `Q` spanned by `values` (zero if all vanish).
pub fn rational_span_generator(values: &[BigRational]) -> BigRational {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = values
        .iter()
        .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    BigRational::new(g, den)
}

/// Hermite-reduced basis of the `Z`-span of coordinate vectors.
fn lattice_basis(vectors: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let den = vectors.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    hermite_basis(&ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
        .collect()
}

/// Gap-labelling group along truncations `n = 1 ..= n_max`.
pub fn gap_labels(spec: &SubshiftSpec, n_max: usize) -> Result<GapLabelGroup> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("N_max must be at least 1".into()));
    }
    let mut chain: Vec<GapLabelLevel> = Vec::new();
    let mut field = FieldDescription::Rational;
    let mut rational_gens: Vec<BigRational> = Vec::new();
    for n in 1..=n_max {
        let ms = measures(spec, n)?;
        let algebraic = ms.iter().find_map(|(_, m)| match m {
            MeasureValue::Algebraic(a) if a.as_rational().is_none() => Some(a.clone()),
            _ => None,
        });
        let generators: Vec<MeasureValue> = match algebraic {
            None => {
                let vals: Vec<BigRational> = ms.iter().map(|(_, m)| m.as_rational().expect("rational")).collect();
                let g = rational_span_generator(&vals);
                rational_gens.push(g.clone());
                vec![MeasureValue::Rational(g)]
            }
            Some(sample) => {
                let f = sample.field().clone();
                field = FieldDescription::Algebraic { min_poly: f.min_poly().to_string(), degree: f.degree() };
                let coords: Vec<Vec<BigRational>> = ms.iter().map(|(_, m)| m.coordinates(f.degree())).collect();
                lattice_basis(&coords)
                    .into_iter()
                    .map(|c| {
                        let poly = crate::algebraic::Poly::new(c);
                        let v = crate::algebraic::AlgNum::from_poly(&f, poly);
                        match v.as_rational() {
                            Some(r) => MeasureValue::Rational(r),
                            None => MeasureValue::Algebraic(v),
                        }
                    })
                    .collect()
            }
        };
        let same = chain.last().is_some_and(|p| p.generators == generators);
        chain.push(GapLabelLevel { n, generators, same_as_previous: same });
    }
    let z_half_pattern = detect_z_half(&rational_gens);
    let generators = chain.last().map(|l| l.generators.clone()).unwrap_or_default();
    Ok(GapLabelGroup { field, generators, chain, z_half_pattern })
}

/// `c` with odd numerator and denominator when the last four rational
/// generators all lie in `c · 2^Z` and the power of two drops at least twice.
fn detect_z_half(gens: &[BigRational]) -> Option<BigRational> {
    if gens.len() < 4 || gens.iter().any(Zero::is_zero) {
        return None;
    }
    let tail = &gens[gens.len() - 4..];
    let odd = |g: &BigRational| BigRational::new(odd_part(g.numer()), odd_part(g.denom()));
    let c = odd(&tail[3]);
    if tail.iter().any(|g| odd(g) != c) {
        return None;
    }
    let drops = tail.windows(2).filter(|w| w[1] < w[0]).count();
    let grows = tail.windows(2).any(|w| w[1] > w[0]);
    (drops >= 2 && !grows).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(w: &str) -> SubshiftSpec {
        SubshiftSpec::periodic(w).unwrap()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(ints(&s.diagonal()), [2, 4]);
    }

    #[test]
    fn shift_examples() {
        let tm = SubshiftSpec::thue_morse();
        let u = Word::from("12");
        let f = CylinderFunction::indicator(Ring::Z, 0, &u);
        let g = f.apply_shift(ShiftMode::Psi1).unwrap();
        assert_eq!(g.window(), (-1, 1));
        assert_eq!(g.coefficient(&u), DyadicRational::one());
        let h = CylinderFunction::indicator(Ring::ZHalf, 0, &u).apply_shift(ShiftMode::Psi0).unwrap();
        assert_eq!(h.coefficient(&u), DyadicRational::from_int(2));
        assert_eq!(h.sup_norm(), DyadicRational::from_int(2));
        assert!(f.apply_shift(ShiftMode::Psi0).is_err());
        let back = g.apply_shift_inverse(ShiftMode::Psi1).unwrap();
        assert!(back.same_function(&tm, &f).unwrap());
    }

    #[test]
    fn periodic_coinvariants() {
        for (w, t) in [("1", vec![]), ("12", vec![3]), ("112", vec![7])] {
            let z = coinvariants(&p(w), Ring::Z, 6).unwrap();
            assert!(z.stabilized);
            assert_eq!((z.group.rank, z.group.torsion.len()), (1, 0));
            let h = coinvariants(&p(w), Ring::ZHalf, 6).unwrap();
            assert_eq!(h.group.rank, 0);
            assert_eq!(ints(&h.group.torsion), t);
        }
    }

    #[test]
    fn class_examples() {
        let spec = p("12");
        let c = coinvariants(&spec, Ring::ZHalf, 6).unwrap();
        let f = CylinderFunction::indicator(Ring::ZHalf, 0, &Word::from("1"));
        let cls = coinvariant_class(&spec, &f, &c.group).unwrap();
        assert_eq!(cls.coords.len(), 1);
        assert!(!cls.is_zero());
        // 2·[χ_1] ... has order 3
        let f3 = f.scale(&DyadicRational::from_int(3)).unwrap();
        assert!(coinvariant_class(&spec, &f3, &c.group).unwrap().is_zero());
        let cz = coinvariants(&spec, Ring::Z, 6).unwrap();
        let one = CylinderFunction::constant(Ring::Z, DyadicRational::one()).unwrap();
        let gen =
            coinvariant_class(&spec, &CylinderFunction::indicator(Ring::Z, 0, &Word::from("1")), &cz.group).unwrap();
        let c1 = coinvariant_class(&spec, &one, &cz.group).unwrap();
        assert_eq!(c1.coords[0], gen.coords[0].mul_pow2(1));
    }

    #[test]
    fn invariants_examples() {
        let inv = invariants(&SubshiftSpec::thue_morse(), Ring::Z, 8).unwrap();
        assert_eq!(inv.rank, 1);
        assert!(inv.generators[0]
            .rep
            .same_function(
                &SubshiftSpec::thue_morse(),
                &CylinderFunction::constant(Ring::Z, DyadicRational::one()).unwrap()
            )
            .unwrap());
        assert!(invariants(&SubshiftSpec::fibonacci(), Ring::ZHalf, 6).unwrap().is_zero());
        let two = SubshiftSpec::substitution(&[("1", "11"), ("2", "22")]).unwrap();
        assert_eq!(invariants(&two, Ring::Z, 6).unwrap().rank, 2);
    }

    #[test]
    fn gap_label_examples() {
        let g = gap_labels(&p("112"), 4).unwrap();
        assert_eq!(g.generators, vec![MeasureValue::Rational(BigRational::new(1.into(), 3.into()))]);
        let tm = gap_labels(&SubshiftSpec::thue_morse(), 6).unwrap();
        assert_eq!(tm.chain[1].generators, vec![MeasureValue::Rational(BigRational::new(1.into(), 6.into()))]);
        assert_eq!(tm.z_half_pattern, Some(BigRational::new(1.into(), 3.into())));
        let fib = gap_labels(&SubshiftSpec::fibonacci(), 3).unwrap();
        assert!(matches!(fib.field, FieldDescription::Algebraic { degree: 2, .. }));
    }
}
