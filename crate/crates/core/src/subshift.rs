//! Presentations of a colouring subshift `(Z_w, σ)`: languages, minimality
//! and aperiodicity checks, and the invariant measure of cylinders.
//!
//! Letters are single printable ASCII characters (`'1'`, `'2'`, ...).
//!
//! Cylinder measures for substitutions use the induced substitution on
//! `n`-blocks: a block `u = u_0 … u_{n-1}` is sent to the `|θ(u_0)|` blocks of
//! length `n` starting at positions `0, 1, …` of `θ(u)`. Its incidence matrix
//! `M_n[v][u] = #{ occurrences of v in θ_n(u) }` has the same Perron
//! eigenvalue as the letter incidence matrix, and the normalized Perron
//! eigenvector lists the frequencies of the `n`-blocks.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebraic::{self, char_poly, integer_perron_root, AlgNum, NumberField};
use crate::error::{Error, Result};
use crate::hypgeo::ColourWindow;
use crate::linalg::{rational_nullspace, IntMatrix};
use crate::numeric::rational_to_f64;

/// A finite word over the letters of a spec.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("letters are ASCII")
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.as_bytes().to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        check_letters(&s).map_err(serde::de::Error::custom)?;
        Ok(Word::from(s.as_str()))
    }
}

fn check_letters(s: &str) -> Result<()> {
    match s.bytes().find(|b| !b.is_ascii_graphic()) {
        Some(b) => Err(Error::InvalidSpec(format!("letter {:?} is not a printable ASCII character", b as char))),
        None => Ok(()),
    }
}

/// A presentation of `(Z_w, σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubshiftSpec {
    /// Orbit of the periodic sequence `…www…`.
    Periodic { word: Word },
    /// Subshift generated by a substitution, one rule per letter.
    Substitution { rules: BTreeMap<u8, Word> },
    /// A finite window `left · right` of a sequence, `w_0` being the first
    /// letter of `right`; only words up to `horizon` letters are trusted.
    Explicit { left: Word, right: Word, horizon: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum SpecDoc {
    Periodic { word: String },
    Substitution { rules: BTreeMap<String, String> },
    Explicit { left: String, right: String, horizon: usize },
}

impl SubshiftSpec {
    pub fn periodic(word: &str) -> Result<Self> {
        Self::from_doc(SpecDoc::Periodic { word: word.into() })
    }

    /// Substitution from `(letter, image)` pairs, e.g. `[("1", "12"), ("2", "21")]`.
    pub fn substitution(rules: &[(&str, &str)]) -> Result<Self> {
        Self::from_doc(SpecDoc::Substitution {
            rules: rules.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        })
    }

    pub fn explicit(left: &str, right: &str, horizon: usize) -> Result<Self> {
        Self::from_doc(SpecDoc::Explicit { left: left.into(), right: right.into(), horizon })
    }

    pub fn thue_morse() -> Self {
        Self::substitution(&[("1", "12"), ("2", "21")]).expect("valid")
    }

    pub fn fibonacci() -> Self {
        Self::substitution(&[("1", "12"), ("2", "1")]).expect("valid")
    }

    /// Parse the JSON ingestion format.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SpecDoc = serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::from_doc(doc)
    }

    /// Canonical JSON (sorted rule keys, no whitespace).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    fn from_doc(doc: SpecDoc) -> Result<Self> {
        match doc {
            SpecDoc::Periodic { word } => {
                check_letters(&word)?;
                if word.is_empty() {
                    return Err(Error::InvalidSpec("periodic word must be nonempty".into()));
                }
                Ok(SubshiftSpec::Periodic { word: Word::from(word.as_str()) })
            }
            SpecDoc::Substitution { rules } => {
                if rules.is_empty() {
                    return Err(Error::InvalidSpec("substitution needs at least one rule".into()));
                }
                let mut out = BTreeMap::new();
                for (k, v) in &rules {
                    check_letters(k)?;
                    check_letters(v)?;
                    if k.len() != 1 {
                        return Err(Error::InvalidSpec(format!("rule key {k:?} must be a single letter")));
                    }
                    if v.is_empty() {
                        return Err(Error::InvalidSpec(format!("image of {k:?} is empty")));
                    }
                    out.insert(k.as_bytes()[0], Word::from(v.as_str()));
                }
                for v in out.values() {
                    if let Some(b) = v.0.iter().find(|b| !out.contains_key(b)) {
                        return Err(Error::InvalidSpec(format!("letter {:?} has no rule", *b as char)));
                    }
                }
                Ok(SubshiftSpec::Substitution { rules: out })
            }
            SpecDoc::Explicit { left, right, horizon } => {
                check_letters(&left)?;
                check_letters(&right)?;
                if left.len() + right.len() == 0 {
                    return Err(Error::InvalidSpec("explicit window is empty".into()));
                }
                if horizon == 0 {
                    return Err(Error::InvalidSpec("horizon must be positive".into()));
                }
                Ok(SubshiftSpec::Explicit {
                    left: Word::from(left.as_str()),
                    right: Word::from(right.as_str()),
                    horizon,
                })
            }
        }
    }

    fn to_doc(&self) -> SpecDoc {
        match self {
            SubshiftSpec::Periodic { word } => SpecDoc::Periodic { word: word.to_string() },
            SubshiftSpec::Substitution { rules } => SpecDoc::Substitution {
                rules: rules.iter().map(|(k, v)| ((*k as char).to_string(), v.to_string())).collect(),
            },
            SubshiftSpec::Explicit { left, right, horizon } => {
                SpecDoc::Explicit { left: left.to_string(), right: right.to_string(), horizon: *horizon }
            }
        }
    }

    /// Outputs derived from an explicit window are horizon-limited.
    pub fn is_approximate(&self) -> bool {
        matches!(self, SubshiftSpec::Explicit { .. })
    }

    /// Letters declared by the spec.
    pub fn alphabet(&self) -> Vec<u8> {
        let set: BTreeSet<u8> = match self {
            SubshiftSpec::Periodic { word } => word.0.iter().copied().collect(),
            SubshiftSpec::Substitution { rules } => rules.keys().copied().collect(),
            SubshiftSpec::Explicit { left, right, .. } => left.0.iter().chain(&right.0).copied().collect(),
        };
        set.into_iter().collect()
    }

    /// Apply the substitution to a word.
    pub fn substitute(&self, w: &[u8]) -> Result<Vec<u8>> {
        let SubshiftSpec::Substitution { rules } = self else {
            return Err(Error::Unsupported("not a substitution".into()));
        };
        let mut out = Vec::with_capacity(w.len() * 2);
        for b in w {
            out.extend_from_slice(&rules[b].0);
        }
        Ok(out)
    }

    /// Letter incidence matrix `M[a][b] = #a in θ(b)`, rows and columns in alphabet order.
    pub fn incidence_matrix(&self) -> Result<IntMatrix> {
        let SubshiftSpec::Substitution { rules } = self else {
            return Err(Error::Unsupported("not a substitution".into()));
        };
        let letters: Vec<u8> = rules.keys().copied().collect();
        let idx: HashMap<u8, usize> = letters.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut m = IntMatrix::zeros(letters.len(), letters.len());
        for (j, b) in letters.iter().enumerate() {
            for a in &rules[b].0 {
                m[(idx[a], j)] += 1;
            }
        }
        Ok(m)
    }
}

type LanguageCache = Mutex<HashMap<(String, usize), Arc<Vec<Word>>>>;

fn language_cache() -> &'static LanguageCache {
    static CACHE: OnceLock<LanguageCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sorted list of the length-`n` words occurring in `Z_w`.
pub fn language(spec: &SubshiftSpec, n: usize) -> Result<Arc<Vec<Word>>> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    let key = (spec.to_json(), n);
    if let Some(hit) = language_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let words = Arc::new(compute_language(spec, n)?);
    language_cache().lock().expect("cache poisoned").insert(key, words.clone());
    Ok(words)
}

pub fn in_language(spec: &SubshiftSpec, u: &Word) -> Result<bool> {
    if u.is_empty() {
        return Ok(true);
    }
    Ok(language(spec, u.len())?.binary_search(u).is_ok())
}

fn compute_language(spec: &SubshiftSpec, n: usize) -> Result<Vec<Word>> {
    let set: BTreeSet<Word> = match spec {
        SubshiftSpec::Periodic { word } => {
            let p = word.len();
            (0..p).map(|i| Word((0..n).map(|j| word.0[(i + j) % p]).collect())).collect()
        }
        SubshiftSpec::Explicit { left, right, horizon } => {
            let mut w = left.0.clone();
            w.extend_from_slice(&right.0);
            if n > *horizon || n > w.len() {
                return Err(Error::HorizonExhausted { horizon: (*horizon).min(w.len()), needed: n });
            }
            w.windows(n).map(|x| Word(x.to_vec())).collect()
        }
        SubshiftSpec::Substitution { .. } => {
            let look = n + 2 + spec.alphabet().len();
            let blocks = substitution_blocks(spec, look)?;
            blocks.iter().flat_map(|b| b.windows(n).map(|x| Word(x.to_vec()))).collect()
        }
    };
    Ok(set.into_iter().collect())
}

/// Factors of length `<= max_len` of the words `θ^k(a)`.
fn substitution_factors(spec: &SubshiftSpec, max_len: usize) -> Result<BTreeSet<Vec<u8>>> {
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<u8>> = VecDeque::new();
    for a in spec.alphabet() {
        if seen.insert(vec![a]) {
            queue.push_back(vec![a]);
        }
    }
    while let Some(v) = queue.pop_front() {
        let img = spec.substitute(&v)?;
        for len in 1..=max_len.min(img.len()) {
            for f in img.windows(len) {
                if !seen.contains(f) {
                    seen.insert(f.to_vec());
                    queue.push_back(f.to_vec());
                }
            }
        }
    }
    Ok(seen)
}

/// Length-`m` factors that lie on a bi-infinite path of the Rauzy graph
/// (edges are the factors of length `m + 1`).
fn substitution_blocks(spec: &SubshiftSpec, m: usize) -> Result<Vec<Vec<u8>>> {
    let factors = substitution_factors(spec, m + 1)?;
    let mut alive: BTreeSet<&[u8]> = factors.iter().filter(|f| f.len() == m).map(|f| f.as_slice()).collect();
    let edges: Vec<&[u8]> = factors.iter().filter(|f| f.len() == m + 1).map(|f| f.as_slice()).collect();
    loop {
        let mut has_in: BTreeSet<&[u8]> = BTreeSet::new();
        let mut has_out: BTreeSet<&[u8]> = BTreeSet::new();
        for e in &edges {
            let (src, dst) = (&e[..m], &e[1..]);
            if alive.contains(src) && alive.contains(dst) {
                has_out.insert(src);
                has_in.insert(dst);
            }
        }
        let before = alive.len();
        alive.retain(|v| has_in.contains(v) && has_out.contains(v));
        if alive.len() == before {
            break;
        }
    }
    Ok(alive.into_iter().map(|v| v.to_vec()).collect())
}

/// Answer of a decision procedure that may give up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tri::Yes => s.serialize_bool(true),
            Tri::No => s.serialize_bool(false),
            Tri::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsReport {
    pub minimal: Tri,
    pub aperiodic: Tri,
    /// Short description of the certificate used.
    pub evidence: String,
}

/// Whether some power of a nonnegative square matrix is strictly positive.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 {
        return false;
    }
    // boolean powers up to Wielandt's bound (n-1)^2 + 1
    let b: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].is_positive()).collect()).collect();
    let mut p = b.clone();
    for _ in 0..=(n - 1) * (n - 1) {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && b[k][j])).collect()).collect();
    }
    p.iter().all(|r| r.iter().all(|&x| x))
}

/// Minimality and aperiodicity, decided where a certificate is available.
pub fn check_minimal_aperiodic(spec: &SubshiftSpec) -> Result<DynamicsReport> {
    match spec {
        SubshiftSpec::Periodic { .. } => {
            Ok(DynamicsReport { minimal: Tri::Yes, aperiodic: Tri::No, evidence: "finite orbit".into() })
        }
        SubshiftSpec::Explicit { .. } => Ok(DynamicsReport {
            minimal: Tri::Unknown,
            aperiodic: Tri::Unknown,
            evidence: "explicit window (horizon-limited)".into(),
        }),
        SubshiftSpec::Substitution { rules } => {
            let m = spec.incidence_matrix()?;
            let primitive = is_primitive(&m);
            let mut evidence = Vec::new();
            let minimal = if primitive {
                evidence.push("primitive incidence matrix".to_string());
                Tri::Yes
            } else if closed_letter_classes(spec)? >= 2 {
                evidence.push("two disjoint closed letter classes".to_string());
                Tri::No
            } else {
                Tri::Unknown
            };

            // complexity plateau: for a minimal subshift p(n+1) = p(n) forces periodicity
            let mut aperiodic = Tri::Unknown;
            if minimal == Tri::Yes {
                let mut prev = language(spec, 1)?.len();
                for n in 2..=8 {
                    let cur = language(spec, n)?.len();
                    if cur == prev {
                        aperiodic = Tri::No;
                        evidence.push(format!("complexity p({}) = p({})", n - 1, n));
                        break;
                    }
                    prev = cur;
                }
            }
            if aperiodic == Tri::Unknown && primitive {
                let freqs = measures(spec, 1)?;
                if freqs.iter().any(|(_, v)| v.as_rational().is_none()) {
                    aperiodic = Tri::Yes;
                    evidence.push("irrational letter frequencies".into());
                } else if right_special_certificate(spec, rules)? {
                    aperiodic = Tri::Yes;
                    evidence.push("right-special words of unbounded length".into());
                }
            }
            Ok(DynamicsReport { minimal, aperiodic, evidence: evidence.join("; ") })
        }
    }
}

/// Number of strongly connected classes of the letter graph (`a -> b` when
/// `b` occurs in `θ(a)`) that are closed, contain a letter of the language and
/// generate infinite words.
fn closed_letter_classes(spec: &SubshiftSpec) -> Result<usize> {
    let letters = spec.alphabet();
    let live: BTreeSet<u8> = language(spec, 1)?.iter().map(|w| w.0[0]).collect();
    let reach = |a: u8| -> Result<BTreeSet<u8>> {
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &spec.substitute(&[x])? {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        Ok(seen)
    };
    let mut classes: BTreeSet<BTreeSet<u8>> = BTreeSet::new();
    for &a in &letters {
        let ra = reach(a)?;
        // closed class: everything reachable from a reaches back to a
        let mut closed = true;
        for &b in &ra {
            if !reach(b)?.contains(&a) {
                closed = false;
                break;
            }
        }
        let growing = ra.iter().any(|&b| spec.substitute(&[b]).map(|w| w.len() > 1).unwrap_or(false));
        if closed && growing && ra.iter().any(|b| live.contains(b)) {
            classes.insert(ra);
        }
    }
    Ok(classes.len())
}

/// If `ua, ub` are in the language then so are `θ(u)θ(a)…` and `θ(u)θ(b)…`,
/// making `θ(u)·lcp(θ(a), θ(b))` right special whenever the images are not
/// prefix-comparable. When the orbit of letter pairs never reaches a
/// prefix-comparable pair, right-special words of every length exist, and a
/// periodic subshift has none beyond its period.
fn right_special_certificate(spec: &SubshiftSpec, rules: &BTreeMap<u8, Word>) -> Result<bool> {
    if rules.values().all(|w| w.len() == 1) {
        return Ok(false);
    }
    let l2 = language(spec, 2)?;
    let mut start = None;
    for (i, u) in l2.iter().enumerate() {
        for v in &l2[i + 1..] {
            if u.0[0] == v.0[0] {
                start = Some((u.0[1].min(v.0[1]), u.0[1].max(v.0[1])));
                break;
            }
        }
        if start.is_some() {
            break;
        }
    }
    let Some(mut pair) = start else { return Ok(false) };
    let mut seen = BTreeSet::new();
    while seen.insert(pair) {
        let (x, y) = (&rules[&pair.0].0, &rules[&pair.1].0);
        let lcp = x.iter().zip(y).take_while(|(p, q)| p == q).count();
        if lcp == x.len() || lcp == y.len() {
            return Ok(false);
        }
        let (a, b) = (x[lcp], y[lcp]);
        pair = (a.min(b), a.max(b));
    }
    Ok(true)
}

/// Invariant measure of a cylinder: exact rational, or an element of `Q(λ)`.
#[derive(Clone, Debug)]
pub enum MeasureValue {
    Rational(BigRational),
    Algebraic(AlgNum),
}

impl MeasureValue {
    pub fn zero() -> Self {
        MeasureValue::Rational(BigRational::zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            MeasureValue::Rational(r) => Some(r.clone()),
            MeasureValue::Algebraic(a) => a.as_rational(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MeasureValue::Rational(r) => rational_to_f64(r),
            MeasureValue::Algebraic(a) => a.to_f64(),
        }
    }

    pub fn add(&self, o: &MeasureValue) -> MeasureValue {
        match (self, o) {
            (MeasureValue::Rational(a), MeasureValue::Rational(b)) => MeasureValue::Rational(a + b),
            (MeasureValue::Algebraic(a), MeasureValue::Algebraic(b)) => MeasureValue::Algebraic(a.add(b)),
            (MeasureValue::Algebraic(a), MeasureValue::Rational(r))
            | (MeasureValue::Rational(r), MeasureValue::Algebraic(a)) => {
                MeasureValue::Algebraic(a.add(&AlgNum::from_rational(a.field(), r.clone())))
            }
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> i32 {
        match self {
            MeasureValue::Rational(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
            MeasureValue::Algebraic(a) => a.signum(),
        }
    }

    /// Coordinates over the basis `1, λ, …, λ^{d-1}` (`d = 1` for rationals).
    pub fn coordinates(&self, degree: usize) -> Vec<BigRational> {
        match self {
            MeasureValue::Rational(r) => {
                let mut v = vec![BigRational::zero(); degree.max(1)];
                v[0] = r.clone();
                v
            }
            MeasureValue::Algebraic(a) => a.coordinates(),
        }
    }
}

impl PartialEq for MeasureValue {
    fn eq(&self, o: &MeasureValue) -> bool {
        match (self.as_rational(), o.as_rational()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => match (self, o) {
                (MeasureValue::Algebraic(a), MeasureValue::Algebraic(b)) => a == b,
                _ => false,
            },
            _ => false,
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Rational(r) => write!(f, "{r}"),
            MeasureValue::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl Serialize for MeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self.as_rational() {
            Some(r) => {
                m.serialize_entry("kind", "rational")?;
                m.serialize_entry("value", &r.to_string())?;
            }
            None => {
                let MeasureValue::Algebraic(a) = self else { unreachable!() };
                m.serialize_entry("kind", "algebraic")?;
                m.serialize_entry("residue", &a.rep().to_string())?;
                m.serialize_entry("min_poly", &a.field().min_poly().to_string())?;
            }
        }
        m.serialize_entry("approx", &self.to_f64())?;
        m.end()
    }
}

type MeasureCache = Mutex<HashMap<(String, usize), Arc<Vec<(Word, MeasureValue)>>>>;

fn measure_cache() -> &'static MeasureCache {
    static CACHE: OnceLock<MeasureCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `μ[u]` for every `u` in `language(spec, n)`, in language order.
pub fn measures(spec: &SubshiftSpec, n: usize) -> Result<Arc<Vec<(Word, MeasureValue)>>> {
    let key = (spec.to_json(), n);
    if let Some(hit) = measure_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let out = Arc::new(compute_measures(spec, n)?);
    measure_cache().lock().expect("cache poisoned").insert(key, out.clone());
    Ok(out)
}

/// The unique invariant probability of the cylinder `[u]` (zero off the language).
pub fn cylinder_measure(spec: &SubshiftSpec, u: &Word) -> Result<MeasureValue> {
    if u.is_empty() {
        return Ok(MeasureValue::Rational(BigRational::one()));
    }
    let all = measures(spec, u.len())?;
    Ok(match all.binary_search_by(|(w, _)| w.cmp(u)) {
        Ok(i) => all[i].1.clone(),
        Err(_) => MeasureValue::zero(),
    })
}

fn compute_measures(spec: &SubshiftSpec, n: usize) -> Result<Vec<(Word, MeasureValue)>> {
    let words = language(spec, n)?;
    match spec {
        SubshiftSpec::Explicit { .. } => Err(Error::Unsupported(
            "not uniquely ergodic / unsupported spec: explicit windows do not determine a measure".into(),
        )),
        SubshiftSpec::Periodic { word } => {
            let p = word.len();
            let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
            for i in 0..p {
                let w = Word((0..n).map(|j| word.0[(i + j) % p]).collect());
                *counts.entry(w).or_default() += 1;
            }
            Ok(words
                .iter()
                .map(|w| {
                    let c = counts.get(w).copied().unwrap_or(0);
                    (w.clone(), MeasureValue::Rational(BigRational::new(c.into(), p.into())))
                })
                .collect())
        }
        SubshiftSpec::Substitution { .. } => {
            let m1 = spec.incidence_matrix()?;
            if !is_primitive(&m1) {
                return Err(Error::Unsupported(
                    "not uniquely ergodic / unsupported spec: substitution is not primitive".into(),
                ));
            }
            let mn = block_incidence(spec, &words)?;
            let size = words.len();
            if let Some(lambda) = integer_perron_root(&m1) {
                let rows: Vec<Vec<BigRational>> = (0..size)
                    .map(|i| {
                        (0..size)
                            .map(|j| {
                                let mut x = BigRational::from_integer(mn[(i, j)].clone());
                                if i == j {
                                    x -= BigRational::from_integer(lambda.clone());
                                }
                                x
                            })
                            .collect()
                    })
                    .collect();
                let ns = rational_nullspace(&rows, size);
                if ns.len() != 1 {
                    return Err(Error::Algebraic(format!("Perron eigenspace has dimension {}", ns.len())));
                }
                let total: BigRational = ns[0].iter().sum();
                Ok(words.iter().zip(&ns[0]).map(|(w, x)| (w.clone(), MeasureValue::Rational(x / &total))).collect())
            } else {
                let field = Arc::new(NumberField::from_largest_real_root(&char_poly(&m1))?);
                let lambda = AlgNum::generator(&field);
                let rows: Vec<Vec<AlgNum>> = (0..size)
                    .map(|i| {
                        (0..size)
                            .map(|j| {
                                let x = AlgNum::from_rational(&field, BigRational::from_integer(mn[(i, j)].clone()));
                                if i == j {
                                    x.sub(&lambda)
                                } else {
                                    x
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ns = algebraic::nullspace(&rows, &field)?;
                if ns.len() != 1 {
                    return Err(Error::Algebraic(format!("Perron eigenspace has dimension {}", ns.len())));
                }
                let total = ns[0].iter().skip(1).fold(ns[0][0].clone(), |acc, x| acc.add(x));
                let inv = total.inv()?;
                Ok(words
                    .iter()
                    .zip(&ns[0])
                    .map(|(w, x)| {
                        let v = x.mul(&inv);
                        let mv = match v.as_rational() {
                            Some(r) => MeasureValue::Rational(r),
                            None => MeasureValue::Algebraic(v),
                        };
                        (w.clone(), mv)
                    })
                    .collect())
            }
        }
    }
}

/// Incidence matrix of the induced substitution on the blocks `words`.
pub fn block_incidence(spec: &SubshiftSpec, words: &[Word]) -> Result<IntMatrix> {
    let n = words.first().map_or(1, Word::len);
    let idx: HashMap<&[u8], usize> = words.iter().enumerate().map(|(i, w)| (w.letters(), i)).collect();
    let mut m = IntMatrix::zeros(words.len(), words.len());
    for (j, u) in words.iter().enumerate() {
        let img = spec.substitute(u.letters())?;
        let first = spec.substitute(&u.0[..1])?.len();
        for s in 0..first {
            let v = &img[s..s + n];
            let i = *idx.get(v).ok_or_else(|| Error::NotInLanguage(String::from_utf8_lossy(v).into_owned()))?;
            m[(i, j)] += BigInt::one();
        }
    }
    Ok(m)
}

/// A window `[-half, half)` of a two-sided sequence `w` with `Z_w` the
/// subshift of `spec`: the periodic word, a fixed point of a power of the
/// substitution, or the explicit window itself.
pub fn two_sided_window(spec: &SubshiftSpec, half: usize) -> Result<ColourWindow> {
    let h = half as i64;
    match spec {
        SubshiftSpec::Periodic { word } => {
            let p = word.len() as i64;
            Ok(ColourWindow::new(-h, (-h..h).map(|j| word.0[j.rem_euclid(p) as usize]).collect()))
        }
        SubshiftSpec::Explicit { left, right, .. } => {
            let mut w = left.0.clone();
            w.extend_from_slice(&right.0);
            Ok(ColourWindow::new(-(left.len() as i64), w))
        }
        SubshiftSpec::Substitution { .. } => {
            let (mut l, mut r, power) = fixed_point_seed(spec)?;
            let mut rounds = 0;
            while l.len() < half || r.len() < half {
                rounds += 1;
                if rounds > 200 {
                    return Err(Error::Unsupported("substitution does not grow".into()));
                }
                for _ in 0..power {
                    l = spec.substitute(&l)?;
                    r = spec.substitute(&r)?;
                }
            }
            let mut letters = l[l.len() - half..].to_vec();
            letters.extend_from_slice(&r[..half]);
            Ok(ColourWindow::new(-h, letters))
        }
    }
}

/// A legal 2-block `ba` and a power `p` with `θ^p(b)` ending in `b` and
/// `θ^p(a)` starting with `a`.
fn fixed_point_seed(spec: &SubshiftSpec) -> Result<(Vec<u8>, Vec<u8>, usize)> {
    let l2 = language(spec, 2)?;
    let step = |(b, a): (u8, u8)| -> Result<(u8, u8)> {
        let lb = spec.substitute(&[b])?;
        let ra = spec.substitute(&[a])?;
        Ok((*lb.last().expect("nonempty"), ra[0]))
    };
    let w = l2.first().ok_or_else(|| Error::Unsupported("substitution language has no 2-blocks".into()))?;
    let mut pair = (w.0[0], w.0[1]);
    let mut seen = HashMap::new();
    let mut t = 0usize;
    while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(pair) {
        e.insert(t);
        pair = step(pair)?;
        t += 1;
    }
    let period = t - seen[&pair];
    Ok((vec![pair.0], vec![pair.1], period))
}
