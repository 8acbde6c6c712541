//! The 2-adic integers Ω at finite precision, the odometer `x -> x + 1`,
//! Haar measure on clopen sets, and the coinvariant map
//! `C(Ω, Z) / (id - o*) -> Z[1/2]` given by integration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, solve_with_snf, IntMatrix, Snf};
use crate::numeric::{v2_i64, DyadicRational};

/// Largest supported precision of a [`DyadicInt`].
pub const MAX_PRECISION: u32 = 127;

/// A 2-adic integer known modulo `2^precision`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicInt {
    residue: u128,
    precision: u32,
}

fn mask(precision: u32) -> u128 {
    if precision >= 128 {
        u128::MAX
    } else {
        (1u128 << precision) - 1
    }
}

impl DyadicInt {
    /// `value mod 2^precision`; negative values wrap as 2-adic integers.
    pub fn new(value: i128, precision: u32) -> Result<Self> {
        if precision == 0 || precision > MAX_PRECISION {
            return Err(Error::InvalidParameter(format!("precision must be in 1..={MAX_PRECISION}, got {precision}")));
        }
        Ok(DyadicInt { residue: (value as u128) & mask(precision), precision })
    }

    pub fn zero(precision: u32) -> Result<Self> {
        Self::new(0, precision)
    }

    pub fn residue(&self) -> u128 {
        self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_even(&self) -> bool {
        self.residue & 1 == 0
    }

    /// `o^k(x) = x + k`.
    pub fn odometer_add(&self, k: i64) -> Self {
        let r = self.residue.wrapping_add(k as i128 as u128) & mask(self.precision);
        DyadicInt { residue: r, precision: self.precision }
    }

    /// `2x`, known to one more digit (capped at [`MAX_PRECISION`]).
    pub fn double(&self) -> Self {
        let precision = (self.precision + 1).min(MAX_PRECISION);
        DyadicInt { residue: (self.residue << 1) & mask(precision), precision }
    }

    /// `x / 2` for even `x`, known to one digit less.
    pub fn halve(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::InvalidParameter("halving an odd 2-adic integer".into()));
        }
        if self.precision <= 1 {
            return Err(Error::PrecisionExhausted);
        }
        Ok(DyadicInt { residue: self.residue >> 1, precision: self.precision - 1 })
    }

    /// Image under `Z/2^N -> Z/2^m`.
    pub fn project(&self, m: u32) -> Result<Self> {
        if m > self.precision {
            return Err(Error::PrecisionExhausted);
        }
        Self::new(self.residue as i128, m)
    }

    /// Whether `x ∈ F_{n,k} = 2^n Ω + k`.
    pub fn in_cylinder(&self, n: u32, k: u64) -> Result<bool> {
        if n > self.precision {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self.residue & mask(n) == (k as u128) & mask(n))
    }
}

impl fmt::Debug for DyadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.residue, self.precision)
    }
}

/// `odometer_add(x, k)`.
pub fn odometer_add(x: &DyadicInt, k: i64) -> DyadicInt {
    x.odometer_add(k)
}

/// `|n|_2 = 2^{-v2(n)}`, with `|0|_2 = 0`.
pub fn dyadic_norm(n: i64) -> DyadicRational {
    match v2_i64(n) {
        None => DyadicRational::zero(),
        Some(v) => DyadicRational::pow2(-(v as i64)),
    }
}

/// A cylinder `F_{n,k} = 2^n Ω + k` with `0 <= k < 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub level: u32,
    pub residue: u64,
}

impl Cylinder {
    pub fn new(level: u32, residue: i64) -> Result<Self> {
        if level > 62 {
            return Err(Error::InvalidParameter(format!("cylinder level {level} exceeds 62")));
        }
        Ok(Cylinder { level, residue: residue.rem_euclid(1i64 << level) as u64 })
    }

    fn disjoint(&self, o: &Cylinder) -> bool {
        let m = self.level.min(o.level);
        let mk = (1u64 << m) - 1;
        self.residue & mk != o.residue & mk
    }
}

/// A compact-open subset of Ω as a normalized disjoint union of cylinders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClopenSet {
    cylinders: Vec<Cylinder>,
}

impl ClopenSet {
    /// Build from pairwise disjoint cylinders; sibling pairs are merged.
    pub fn new(cylinders: Vec<Cylinder>) -> Result<Self> {
        for (i, a) in cylinders.iter().enumerate() {
            for b in &cylinders[i + 1..] {
                if !a.disjoint(b) {
                    return Err(Error::InvalidParameter(format!("cylinders {a:?} and {b:?} overlap")));
                }
            }
        }
        Ok(Self::normalized(cylinders))
    }

    pub fn empty() -> Self {
        ClopenSet { cylinders: Vec::new() }
    }

    /// The whole of Ω.
    pub fn omega() -> Self {
        ClopenSet { cylinders: vec![Cylinder { level: 0, residue: 0 }] }
    }

    pub fn cylinder(level: u32, residue: i64) -> Result<Self> {
        Ok(ClopenSet { cylinders: vec![Cylinder::new(level, residue)?] })
    }

    fn normalized(cylinders: Vec<Cylinder>) -> Self {
        let mut set: BTreeSet<Cylinder> = cylinders.into_iter().collect();
        loop {
            let mut merged = None;
            for c in set.iter().rev() {
                if c.level == 0 {
                    continue;
                }
                let half = 1u64 << (c.level - 1);
                let sib = Cylinder { level: c.level, residue: c.residue ^ half };
                if set.contains(&sib) {
                    merged = Some((*c, sib, Cylinder { level: c.level - 1, residue: c.residue & (half - 1) }));
                    break;
                }
            }
            match merged {
                Some((a, b, parent)) => {
                    set.remove(&a);
                    set.remove(&b);
                    set.insert(parent);
                }
                None => break,
            }
        }
        ClopenSet { cylinders: set.into_iter().collect() }
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    /// `s + j`.
    pub fn translate(&self, j: i64) -> Self {
        let cyl = self
            .cylinders
            .iter()
            .map(|c| Cylinder::new(c.level, c.residue as i64 + j.rem_euclid(1i64 << c.level)).expect("level checked"))
            .collect();
        Self::normalized(cyl)
    }

    pub fn contains(&self, x: &DyadicInt) -> Result<bool> {
        for c in &self.cylinders {
            if x.in_cylinder(c.level, c.residue)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn max_level(&self) -> u32 {
        self.cylinders.iter().map(|c| c.level).max().unwrap_or(0)
    }
}

/// `ν(s) = Σ 2^{-n}` over the cylinders of `s`.
pub fn haar_measure(s: &ClopenSet) -> DyadicRational {
    s.cylinders.iter().fold(DyadicRational::zero(), |acc, c| acc + DyadicRational::pow2(-(c.level as i64)))
}

/// Largest level of a [`LocallyConstFnOmega`] (its coefficient table has `2^level` entries).
pub const MAX_FN_LEVEL: u32 = 24;

/// An integer-valued function on Ω constant on each `F_{n,k}`, `n = level`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocallyConstFnOmega {
    level: u32,
    coeffs: Vec<i64>,
}

impl LocallyConstFnOmega {
    pub fn new(level: u32, coeffs: Vec<i64>) -> Result<Self> {
        if level > MAX_FN_LEVEL {
            return Err(Error::InvalidParameter(format!("level {level} exceeds {MAX_FN_LEVEL}")));
        }
        if coeffs.len() != 1usize << level {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {} coefficients, got {}",
                1usize << level,
                coeffs.len()
            )));
        }
        Ok(LocallyConstFnOmega { level, coeffs })
    }

    pub fn constant(c: i64) -> Self {
        LocallyConstFnOmega { level: 0, coeffs: vec![c] }
    }

    /// `c · χ_{F_{n,k}}`.
    pub fn indicator(n: u32, k: i64, c: i64) -> Result<Self> {
        let mut coeffs = vec![0; 1usize << n];
        coeffs[k.rem_euclid(1i64 << n) as usize] = c;
        Self::new(n, coeffs)
    }

    pub fn from_clopen(s: &ClopenSet) -> Result<Self> {
        let level = s.max_level();
        let mut f = Self::new(level, vec![0; 1usize << level])?;
        for c in s.cylinders() {
            let g = Self::indicator(c.level, c.residue as i64, 1)?.refine(level)?;
            f = f.add(&g)?;
        }
        Ok(f)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Same function at a finer level.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::InvalidParameter("cannot refine to a coarser level".into()));
        }
        let size = 1usize << level;
        let m = self.coeffs.len();
        Self::new(level, (0..size).map(|r| self.coeffs[r % m]).collect())
    }

    /// Coarsest level representing the same function.
    pub fn canonical(&self) -> Self {
        let mut f = self.clone();
        while f.level > 0 {
            let half = f.coeffs.len() / 2;
            if f.coeffs[..half] != f.coeffs[half..] {
                break;
            }
            f.coeffs.truncate(half);
            f.level -= 1;
        }
        f
    }

    fn binary(&self, o: &Self, op: impl Fn(i64, i64) -> i64) -> Result<Self> {
        let level = self.level.max(o.level);
        let (a, b) = (self.refine(level)?, o.refine(level)?);
        Self::new(level, a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| op(*x, *y)).collect())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.binary(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.binary(o, |x, y| x - y)
    }

    pub fn scale(&self, c: i64) -> Self {
        LocallyConstFnOmega { level: self.level, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn eval(&self, x: &DyadicInt) -> Result<i64> {
        if x.precision() < self.level {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self.coeffs[(x.residue() & mask(self.level)) as usize])
    }

    /// `g ∘ o^{-1}`, i.e. `x -> g(x - 1)`.
    pub fn compose_odometer_inv(&self) -> Self {
        let m = self.coeffs.len();
        LocallyConstFnOmega { level: self.level, coeffs: (0..m).map(|r| self.coeffs[(r + m - 1) % m]).collect() }
    }

    /// `g - g ∘ o^{-1}`.
    pub fn coboundary(&self) -> Self {
        self.sub(&self.compose_odometer_inv()).expect("same level")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for LocallyConstFnOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocallyConstFnOmega(level {}, {:?})", self.level, self.coeffs)
    }
}

/// `∫ f dν = 2^{-n} Σ_k f(k)`.
pub fn integrate(f: &LocallyConstFnOmega) -> DyadicRational {
    let s: i128 = f.coeffs.iter().map(|&c| c as i128).sum();
    DyadicRational::new(BigInt::from(s), -(f.level as i64))
}

/// Class of `f` in the coinvariants, with a coboundary witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    /// `∫ f dν`, the image of `[f]` in `Z[1/2]`.
    pub value: DyadicRational,
    /// The representative `c · χ_{F_{n,0}}` with `c / 2^n = value`, `n = level(f)`.
    pub representative: LocallyConstFnOmega,
    /// `g` with `f - representative = g - g ∘ o^{-1}`.
    pub witness: LocallyConstFnOmega,
}

/// Default number of extra levels searched for coboundary witnesses.
pub const DEFAULT_WITNESS_DEPTH: u32 = 2;

fn circulant_snf(level: u32) -> Arc<Snf> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Snf>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache poisoned").get(&level) {
        return s.clone();
    }
    let snf = Arc::new(smith_normal_form(&id_minus_shift(level)));
    cache.lock().expect("cache poisoned").insert(level, snf.clone());
    snf
}

/// Matrix of `g -> g - g ∘ o^{-1}` on level-`n` coefficient vectors.
pub fn id_minus_shift(level: u32) -> IntMatrix {
    let m = 1usize << level;
    let mut a = IntMatrix::zeros(m, m);
    for r in 0..m {
        a[(r, r)] += 1;
        a[(r, (r + m - 1) % m)] -= 1;
    }
    a
}

/// Find `g` with `h = g - g ∘ o^{-1}` at levels `level(h) ..= level(h) + depth`.
pub fn solve_coboundary(h: &LocallyConstFnOmega, depth: u32) -> Result<LocallyConstFnOmega> {
    for level in h.level..=(h.level + depth).min(MAX_FN_LEVEL) {
        let hr = h.refine(level)?;
        let b: Vec<BigInt> = hr.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        if let Some(x) = solve_with_snf(&circulant_snf(level), &b) {
            let coeffs: Option<Vec<i64>> = x.iter().map(|v| v.to_i64()).collect();
            let Some(coeffs) = coeffs else { continue };
            let g = LocallyConstFnOmega::new(level, coeffs)?;
            debug_assert_eq!(g.coboundary(), hr);
            return Ok(g);
        }
    }
    Err(Error::WitnessNotFound { depth })
}

/// `[f] ∈ coinv C(Ω, Z) ≅ Z[1/2]`, certified by a coboundary witness.
pub fn omega_coinvariant_class(f: &LocallyConstFnOmega, depth: u32) -> Result<OmegaClass> {
    let value = integrate(f);
    let n = f.level;
    let total = value
        .mul_pow2(n as i64)
        .to_integer()
        .and_then(|c| c.to_i64())
        .ok_or_else(|| Error::InvalidParameter("coefficient sum overflows i64".into()))?;
    let representative = LocallyConstFnOmega::indicator(n, 0, total)?;
    let h = f.sub(&representative)?;
    let witness = solve_coboundary(&h, depth)?;
    Ok(OmegaClass { value, representative, witness })
}

/// Checks on level-`n` functions that the kernel of the class map equals the
/// image of `id - o*`: the quotient `Z^{2^n} / im(id - o*)` is free of rank
/// one (all nonzero invariant factors are 1), and the sum map kills the image.
pub fn level_isomorphism_holds(level: u32) -> bool {
    let a = id_minus_shift(level);
    let snf = circulant_snf(level);
    let m = 1usize << level;
    let diag = snf.diagonal();
    let rank = snf.rank();
    let units = diag.iter().filter(|d| !d.is_zero()).all(|d| d == &BigInt::from(1));
    let sums_vanish = (0..m).all(|j| a.column(j).iter().sum::<BigInt>().is_zero());
    rank == m - 1 && units && sums_vanish
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_examples() {
        let x = DyadicInt::new(7, 3).unwrap();
        assert_eq!(x.odometer_add(1).residue(), 0);
        assert_eq!(DyadicInt::new(5, 4).unwrap().odometer_add(1).residue(), 6);
        let mut seen = [false; 8];
        let mut y = DyadicInt::zero(3).unwrap();
        for _ in 0..8 {
            assert!(!seen[y.residue() as usize]);
            seen[y.residue() as usize] = true;
            y = y.odometer_add(1);
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(y.residue(), 0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(dyadic_norm(12).to_string(), "1/4");
        assert!(dyadic_norm(0).is_zero());
        assert_eq!(dyadic_norm(7).to_string(), "1");
    }

    #[test]
    fn haar_examples() {
        assert_eq!(haar_measure(&ClopenSet::cylinder(3, 5).unwrap()).to_string(), "1/8");
        assert_eq!(haar_measure(&ClopenSet::omega()).to_string(), "1");
        let s = ClopenSet::new(vec![Cylinder::new(2, 1).unwrap(), Cylinder::new(3, 0).unwrap()]).unwrap();
        assert_eq!(haar_measure(&s).to_string(), "3/8");
    }

    #[test]
    fn clopen_normalization_and_overlap() {
        let s = ClopenSet::new(vec![Cylinder::new(2, 1).unwrap(), Cylinder::new(2, 3).unwrap()]).unwrap();
        assert_eq!(s.cylinders(), &[Cylinder { level: 1, residue: 1 }]);
        assert!(ClopenSet::new(vec![Cylinder::new(1, 1).unwrap(), Cylinder::new(3, 5).unwrap()]).is_err());
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(integrate(&LocallyConstFnOmega::constant(1)).to_string(), "1");
        assert_eq!(integrate(&LocallyConstFnOmega::indicator(2, 2, 3).unwrap()).to_string(), "3/4");
        let f = LocallyConstFnOmega::indicator(1, 0, 1)
            .unwrap()
            .sub(&LocallyConstFnOmega::indicator(2, 3, 2).unwrap())
            .unwrap();
        assert!(integrate(&f).is_zero());
    }

    #[test]
    fn coinvariant_examples() {
        for n in 0..4 {
            for k in 0..(1 << n) {
                let c = omega_coinvariant_class(&LocallyConstFnOmega::indicator(n, k, 1).unwrap(), 2).unwrap();
                assert_eq!(c.value, DyadicRational::pow2(-(n as i64)));
            }
        }
        let f = LocallyConstFnOmega::indicator(1, 0, 1)
            .unwrap()
            .sub(&LocallyConstFnOmega::indicator(1, 1, 1).unwrap())
            .unwrap();
        let c = omega_coinvariant_class(&f, 2).unwrap();
        assert!(c.value.is_zero());
        assert!(c.witness.level() <= 2);
        assert_eq!(c.witness.coboundary(), f.sub(&c.representative).unwrap().refine(c.witness.level()).unwrap());
        let g = LocallyConstFnOmega::indicator(2, 0, 1)
            .unwrap()
            .sub(&LocallyConstFnOmega::indicator(3, 0, 2).unwrap())
            .unwrap();
        assert!(omega_coinvariant_class(&g, 2).unwrap().value.is_zero());
    }

    #[test]
    fn witness_budget_error() {
        // nonzero integral is never a coboundary
        let h = LocallyConstFnOmega::indicator(1, 0, 1).unwrap();
        assert_eq!(solve_coboundary(&h, 1), Err(Error::WitnessNotFound { depth: 1 }));
    }

    #[test]
    fn halving_consumes_precision() {
        let x = DyadicInt::new(4, 3).unwrap();
        let h = x.halve().unwrap();
        assert_eq!((h.residue(), h.precision()), (2, 2));
        assert!(DyadicInt::new(1, 3).unwrap().halve().is_err());
        assert_eq!(DyadicInt::new(0, 1).unwrap().halve(), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn truncation_isomorphism() {
        for n in 0..=5 {
            assert!(level_isomorphism_holds(n));
        }
    }
}
