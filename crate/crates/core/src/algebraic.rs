//! Rational polynomials and arithmetic in a real number field `Q(λ)` where λ
//! is a distinguished real root of an irreducible monic integer polynomial.
//!
//! Used for Perron eigenvalues that are not rational. Equality is decided by
//! polynomial identity modulo the minimal polynomial; signs by interval
//! refinement on an isolating interval of λ.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::numeric::rational_to_f64;

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division `(q, r)` with `self = q·d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let dl = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    /// Range of the polynomial over `[lo, hi]` by naive interval Horner.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    /// Squarefree part (monic).
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`, by a
    /// Sturm sequence. `self` must be squarefree.
    pub fn sturm_count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let changes = |x: &BigRational| {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| {
                    let v = p.eval(x);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(lo).saturating_sub(changes(hi))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let t = match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Characteristic polynomial `det(xI - m)` by Faddeev–LeVerrier.
pub fn char_poly(m: &IntMatrix) -> Poly {
    let n = m.rows();
    assert_eq!(n, m.cols(), "char_poly of non-square matrix");
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        mk = next;
        let am = m.mul(&mk);
        let tr: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    Poly::new(c.into_iter().map(BigRational::from_integer).collect())
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// All complex roots of a squarefree polynomial (Durand–Kerner).
fn complex_roots(p: &Poly) -> Vec<C64> {
    let p = p.monic();
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<f64> = p.coeffs.iter().map(rational_to_f64).collect();
    let eval = |z: C64| c.iter().rev().fold(C64 { re: 0.0, im: 0.0 }, |acc, &a| acc.mul(z).add(C64 { re: a, im: 0.0 }));
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut z: Vec<C64> = (0..n)
        .map(|i| {
            let mut w = C64 { re: bound.min(2.0), im: 0.0 };
            for _ in 0..i {
                w = w.mul(seed);
            }
            w
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// The distinguished real root of an irreducible monic integer polynomial,
/// described by an isolating interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Poly,
    lo: BigRational,
    hi: BigRational,
}

impl NumberField {
    /// Field generated by the largest real root of `p` (typically a Perron
    /// eigenvalue). `p` must be a monic integer polynomial.
    pub fn from_largest_real_root(p: &Poly) -> Result<Self> {
        let sf = p.squarefree();
        if sf.integer_coeffs().is_none() {
            return Err(Error::Algebraic(format!("polynomial {p} is not monic integral")));
        }
        let roots = complex_roots(&sf);
        let (idx, lambda) = roots
            .iter()
            .enumerate()
            .filter(|(_, z)| z.im.abs() < 1e-7)
            .max_by(|a, b| a.1.re.partial_cmp(&b.1.re).unwrap_or(Ordering::Equal))
            .map(|(i, z)| (i, z.re))
            .ok_or_else(|| Error::Algebraic(format!("{p} has no real root")))?;
        let min_poly = minimal_factor(&sf, &roots, idx)?;
        Self::isolate(min_poly, lambda)
    }

    fn isolate(min_poly: Poly, approx: f64) -> Result<Self> {
        let mut delta = 1e-3;
        for _ in 0..40 {
            let lo = f64_to_rational(approx - delta);
            let hi = f64_to_rational(approx + delta);
            if !min_poly.eval(&lo).is_zero() && min_poly.sturm_count(&lo, &hi) == 1 {
                let mut field = NumberField { min_poly, lo, hi };
                field.refine_to(80);
                return Ok(field);
            }
            delta /= 4.0;
        }
        Err(Error::Algebraic("could not isolate root".into()))
    }

    /// Bisect the isolating interval until its width is below `2^-bits`.
    fn refine_to(&mut self, bits: u32) {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let two = BigRational::from_integer(2.into());
        while &self.hi - &self.lo > eps {
            let mid = (&self.lo + &self.hi) / &two;
            let fm = self.min_poly.eval(&mid);
            if fm.is_zero() {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            let flo = self.min_poly.eval(&self.lo);
            if flo.is_positive() == fm.is_positive() {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap_or(0)
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn generator_f64(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }
}

fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// The monic integer factor of `sf` of least degree vanishing at `roots[idx]`.
fn minimal_factor(sf: &Poly, roots: &[C64], idx: usize) -> Result<Poly> {
    let others: Vec<usize> = (0..roots.len()).filter(|&i| i != idx).collect();
    let n = others.len();
    if n > 20 {
        return Err(Error::Algebraic("degree too large for factor search".into()));
    }
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let mut prod = vec![C64 { re: 1.0, im: 0.0 }];
        let chosen = std::iter::once(idx).chain((0..n).filter(|b| mask >> b & 1 == 1).map(|b| others[b]));
        for r in chosen {
            let mut next = vec![C64 { re: 0.0, im: 0.0 }; prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = next[i + 1].add(*c);
                next[i] = next[i].sub(c.mul(roots[r]));
            }
            prod = next;
        }
        if prod.iter().any(|c| c.im.abs() > 1e-6 || (c.re - c.re.round()).abs() > 1e-6) {
            continue;
        }
        let cand =
            Poly::new(prod.iter().map(|c| BigRational::from_integer(BigInt::from(c.re.round() as i64))).collect());
        if sf.rem(&cand).is_zero() {
            return Ok(cand);
        }
    }
    Err(Error::Algebraic(format!("no integer factor of {sf} found")))
}

/// An element of `Q(λ)`, stored as a residue polynomial of degree < deg(λ).
#[derive(Clone)]
pub struct AlgNum {
    field: Arc<NumberField>,
    rep: Poly,
}

impl AlgNum {
    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        AlgNum { field: field.clone(), rep: Poly::constant(r) }
    }

    pub fn from_poly(field: &Arc<NumberField>, p: Poly) -> Self {
        AlgNum { field: field.clone(), rep: p.rem(&field.min_poly) }
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, Poly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    /// Coordinates in the basis `1, λ, ..., λ^{d-1}`.
    pub fn coordinates(&self) -> Vec<BigRational> {
        let d = self.field.degree();
        (0..d).map(|i| self.rep.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.rep.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.rep.coeffs[0].clone()),
            _ => None,
        }
    }

    fn check(&self, o: &AlgNum) {
        assert!(
            Arc::ptr_eq(&self.field, &o.field) || self.field == o.field,
            "mixing elements of different number fields"
        );
    }

    pub fn add(&self, o: &AlgNum) -> AlgNum {
        self.check(o);
        AlgNum { field: self.field.clone(), rep: self.rep.add(&o.rep) }
    }

    pub fn sub(&self, o: &AlgNum) -> AlgNum {
        self.check(o);
        AlgNum { field: self.field.clone(), rep: self.rep.sub(&o.rep) }
    }

    pub fn neg(&self) -> AlgNum {
        AlgNum { field: self.field.clone(), rep: self.rep.neg() }
    }

    pub fn mul(&self, o: &AlgNum) -> AlgNum {
        self.check(o);
        AlgNum::from_poly(&self.field, self.rep.mul(&o.rep))
    }

    pub fn scale(&self, c: &BigRational) -> AlgNum {
        AlgNum { field: self.field.clone(), rep: self.rep.scale(c) }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<AlgNum> {
        if self.is_zero() {
            return Err(Error::Algebraic("inverse of zero".into()));
        }
        let (mut r0, mut r1) = (self.field.min_poly.clone(), self.rep.clone());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 is a nonzero constant since min_poly is irreducible
        if r0.degree() != Some(0) {
            return Err(Error::Algebraic("minimal polynomial is reducible".into()));
        }
        let c = r0.coeffs[0].recip();
        Ok(AlgNum::from_poly(&self.field, t0.scale(&c)))
    }

    pub fn div(&self, o: &AlgNum) -> Result<AlgNum> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exact sign, certified by interval evaluation on a shrinking isolating interval.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut f = (*self.field).clone();
        let mut bits = 80;
        loop {
            let (a, b) = self.rep.eval_interval(&f.lo, &f.hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            bits += 40;
            f.refine_to(bits);
            if f.lo == f.hi {
                let v = self.rep.eval(&f.lo);
                return if v.is_positive() { 1 } else { -1 };
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (&self.field.lo + &self.field.hi) / BigRational::from_integer(2.into());
        rational_to_f64(&self.rep.eval(&mid))
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &AlgNum) -> bool {
        self.field == o.field && self.rep == o.rep
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgNum({} mod {}, ≈{})", self.rep, self.field.min_poly, self.to_f64())
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.to_string().replace('x', "λ"))
    }
}

/// Basis of the null space of a square matrix over `Q(λ)`.
pub fn nullspace(m: &[Vec<AlgNum>], field: &Arc<NumberField>) -> Result<Vec<Vec<AlgNum>>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let zero = AlgNum::from_rational(field, BigRational::zero());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv()?;
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let src = a[r].clone();
                for (x, s) in a[i].iter_mut().zip(&src) {
                    *x = x.sub(&f.mul(s));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let one = AlgNum::from_rational(field, BigRational::one());
    Ok((0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut x = vec![zero.clone(); cols];
            x[f] = one.clone();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = a[row][f].neg();
            }
            x
        })
        .collect())
}

/// Largest real eigenvalue of a nonnegative integer matrix, as an integer when
/// it is one.
pub fn integer_perron_root(m: &IntMatrix) -> Option<BigInt> {
    let p = char_poly(m).squarefree();
    let roots = complex_roots(&p);
    let lambda = roots.iter().filter(|z| z.im.abs() < 1e-7).map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let cand = BigInt::from(lambda.round().to_i64()?);
    let r = BigRational::from_integer(cand.clone());
    p.eval(&r).is_zero().then_some(cand)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arith() {
        let p = Poly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let q = Poly::from_ints(&[1, 1]);
        let (d, r) = p.div_rem(&q);
        assert_eq!(d, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&Poly::from_ints(&[-1, 1])), Poly::from_ints(&[-1, 1]));
        let sq = Poly::from_ints(&[1, 2, 1]).squarefree();
        assert_eq!(sq, Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn charpoly_fibonacci() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(char_poly(&m), Poly::from_ints(&[-1, -1, 1]));
        let tm = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(char_poly(&tm), Poly::from_ints(&[0, -2, 1]));
        assert_eq!(integer_perron_root(&tm), Some(BigInt::from(2)));
        assert_eq!(integer_perron_root(&m), None);
    }

    #[test]
    fn golden_field() {
        let f = Arc::new(NumberField::from_largest_real_root(&Poly::from_ints(&[-1, -1, 1])).unwrap());
        assert_eq!(f.degree(), 2);
        let phi = AlgNum::generator(&f);
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        // 1/φ = φ - 1
        let inv = phi.inv().unwrap();
        let one = AlgNum::from_rational(&f, BigRational::one());
        assert_eq!(inv, phi.sub(&one));
        assert_eq!(inv.signum(), 1);
        assert_eq!(phi.neg().signum(), -1);
        // φ^2 - φ - 1 = 0
        assert!(phi.mul(&phi).sub(&phi).sub(&one).is_zero());
    }

    #[test]
    fn reducible_input_finds_factor() {
        // (x^2 - x - 1)(x + 3) has largest root φ
        let p = Poly::from_ints(&[-1, -1, 1]).mul(&Poly::from_ints(&[3, 1]));
        let f = NumberField::from_largest_real_root(&p).unwrap();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[-1, -1, 1]));
        let p = Poly::from_ints(&[-1, -1, 1]).mul(&Poly::from_ints(&[-2, 1]));
        let f = NumberField::from_largest_real_root(&p).unwrap();
        assert_eq!(f.min_poly(), &Poly::from_ints(&[-2, 1]));
    }
}
