//! Certified complex root approximation, used to locate the rational quadratic factors
//! of an integer polynomial.
//!
//! Approximations come from Aberth iteration in binary floating point with a BigInt
//! mantissa. Each approximation `z_i` gets an inclusion radius
//! `n |p(z_i)| / (|lc| prod_{j != i} |z_i - z_j|)`; when these disks are pairwise disjoint
//! each holds exactly one root. Candidate factors are then confirmed by exact division,
//! so nothing numeric is ever trusted on its own.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::Rational;
use crate::poly::Poly;

pub const START_PRECISION: u64 = 128;
pub const MAX_PRECISION: u64 = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("root separation unresolved for a degree-{degree} polynomial at {precision} bits")]
pub struct Indeterminate {
    pub degree: usize,
    pub precision: u64,
}

/// `m * 2^e`.
#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    fn norm(mut m: BigInt, mut e: i64, prec: u64) -> Self {
        let bits = m.bits();
        if bits > prec {
            let sh = bits - prec;
            m >>= sh;
            e += sh as i64;
        }
        if m.is_zero() {
            e = 0;
        }
        BigFloat { m, e }
    }

    pub fn from_int(n: &BigInt, prec: u64) -> Self {
        BigFloat::norm(n.clone(), 0, prec)
    }

    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        BigFloat::from_int(q.numer(), prec + 8).div(&BigFloat::from_int(q.denom(), prec + 8), prec)
    }

    pub fn from_f64(x: f64, prec: u64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return BigFloat::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        BigFloat::norm(BigInt::from(sign * mant as i64), e, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Exponent of the leading bit plus one; `i64::MIN` for zero.
    fn top(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.e + self.m.bits() as i64
        }
    }

    pub fn add(&self, o: &BigFloat, prec: u64) -> BigFloat {
        if self.is_zero() {
            return BigFloat::norm(o.m.clone(), o.e, prec);
        }
        if o.is_zero() {
            return BigFloat::norm(self.m.clone(), self.e, prec);
        }
        let gap = prec as i64 + 4;
        if self.top() > o.top() + gap {
            return BigFloat::norm(self.m.clone(), self.e, prec);
        }
        if o.top() > self.top() + gap {
            return BigFloat::norm(o.m.clone(), o.e, prec);
        }
        let e = self.e.min(o.e);
        let m = (&self.m << (self.e - e) as u64) + (&o.m << (o.e - e) as u64);
        BigFloat::norm(m, e, prec)
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat { m: -&self.m, e: self.e }
    }

    pub fn sub(&self, o: &BigFloat, prec: u64) -> BigFloat {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &BigFloat, prec: u64) -> BigFloat {
        BigFloat::norm(&self.m * &o.m, self.e + o.e, prec)
    }

    pub fn div(&self, o: &BigFloat, prec: u64) -> BigFloat {
        assert!(!o.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let sh = (prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 4).max(0);
        let m = (&self.m << sh as u64) / &o.m;
        BigFloat::norm(m, self.e - o.e - sh, prec)
    }

    pub fn round(&self) -> BigInt {
        if self.e >= 0 {
            return &self.m << self.e as u64;
        }
        let sh = (-self.e) as u64;
        let half = BigInt::from(1) << (sh - 1);
        (&self.m + half) >> sh
    }

    /// `log2 |x|`, approximately; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.m.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.m.bits();
        let keep = bits.min(60);
        let top = (self.m.abs() >> (bits - keep)).to_u64().unwrap() as f64;
        top.log2() + (bits - keep) as f64 + self.e as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let keep = bits.min(60);
        let top = (&self.m >> (bits - keep)).to_i64().unwrap() as f64;
        top * 2f64.powi((bits - keep) as i32 + self.e as i32)
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { m: self.m.abs(), e: self.e }
    }

    pub fn cmp_abs(&self, o: &BigFloat) -> Ordering {
        let d = self.abs().sub(&o.abs(), self.m.bits().max(o.m.bits()) + 8);
        if d.is_zero() {
            Ordering::Equal
        } else if d.m.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    fn zero() -> Self {
        Complex { re: BigFloat::zero(), im: BigFloat::zero() }
    }

    fn real(re: BigFloat) -> Self {
        Complex { re, im: BigFloat::zero() }
    }

    fn add(&self, o: &Complex, p: u64) -> Complex {
        Complex { re: self.re.add(&o.re, p), im: self.im.add(&o.im, p) }
    }

    fn sub(&self, o: &Complex, p: u64) -> Complex {
        Complex { re: self.re.sub(&o.re, p), im: self.im.sub(&o.im, p) }
    }

    fn mul(&self, o: &Complex, p: u64) -> Complex {
        let q = p + 4;
        let re = self.re.mul(&o.re, q).sub(&self.im.mul(&o.im, q), p);
        let im = self.re.mul(&o.im, q).add(&self.im.mul(&o.re, q), p);
        Complex { re, im }
    }

    fn recip(&self, p: u64) -> Complex {
        let q = p + 8;
        let den = self.re.mul(&self.re, q).add(&self.im.mul(&self.im, q), q);
        Complex { re: self.re.div(&den, p), im: self.im.neg().div(&den, p) }
    }

    fn div(&self, o: &Complex, p: u64) -> Complex {
        self.mul(&o.recip(p + 4), p)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2 |z|`, approximately.
    fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }
}

/// `log2(2^a + 2^b)`.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// `(re + i im) 2^e` with hardware mantissas: the cheap first phase of root finding.
#[derive(Clone, Copy, Debug)]
struct Xc {
    re: f64,
    im: f64,
    e: i64,
}

impl Xc {
    const ZERO: Xc = Xc { re: 0.0, im: 0.0, e: 0 };

    fn normed(re: f64, im: f64, e: i64) -> Xc {
        let m = re.abs().max(im.abs());
        if m == 0.0 || !m.is_finite() {
            return Xc::ZERO;
        }
        let k = m.log2().floor() as i64;
        let s = 2f64.powi(-k as i32);
        Xc { re: re * s, im: im * s, e: e + k }
    }

    fn from_int(n: &BigInt) -> Xc {
        if n.is_zero() {
            return Xc::ZERO;
        }
        let bits = n.bits();
        let keep = bits.min(60);
        let top = (n >> (bits - keep)).to_i64().unwrap() as f64;
        Xc::normed(top, 0.0, (bits - keep) as i64)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn at(&self, e: i64) -> (f64, f64) {
        let sh = self.e - e;
        if sh < -1100 {
            (0.0, 0.0)
        } else {
            let s = 2f64.powi(sh as i32);
            (self.re * s, self.im * s)
        }
    }

    fn add(self, o: Xc) -> Xc {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.e.max(o.e);
        let (a, b) = self.at(e);
        let (c, d) = o.at(e);
        Xc::normed(a + c, b + d, e)
    }

    fn sub(self, o: Xc) -> Xc {
        self.add(Xc { re: -o.re, im: -o.im, e: o.e })
    }

    fn mul(self, o: Xc) -> Xc {
        Xc::normed(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.e + o.e)
    }

    fn recip(self) -> Xc {
        let den = self.re * self.re + self.im * self.im;
        Xc::normed(self.re / den, -self.im / den, -self.e)
    }

    fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.e as f64 + self.re.hypot(self.im).log2()
    }

    fn part(&self, m: f64, prec: u64) -> BigFloat {
        let f = BigFloat::from_f64(m, prec);
        if f.is_zero() {
            return f;
        }
        BigFloat { m: f.m, e: f.e + self.e }
    }
}

/// Aberth iteration in `Xc`, started on the circle through the geometric mean of the root
/// moduli. Accuracy is whatever 53 bits give; the caller refines.
fn fast_aberth(coeffs: &[BigInt]) -> Vec<Xc> {
    let n = coeffs.len() - 1;
    let fc: Vec<Xc> = coeffs.iter().map(Xc::from_int).collect();
    let lead = fc[n].log2_abs();
    let c0 = fc[0].log2_abs();
    let log_r = if c0.is_finite() { (c0 - lead) / n as f64 } else { 0.0 };
    let mut roots: Vec<Xc> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let e = log_r.floor();
            let frac = (log_r - e).exp2();
            Xc::normed(frac * theta.cos(), frac * theta.sin(), e as i64)
        })
        .collect();
    let mut settled = vec![false; n];
    for _ in 0..(200 + 10 * n) {
        let mut all = true;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let z = roots[i];
            let mut v = Xc::ZERO;
            let mut d = Xc::ZERO;
            for c in fc.iter().rev() {
                d = d.mul(z).add(v);
                v = v.mul(z).add(*c);
            }
            if v.is_zero() || d.is_zero() {
                settled[i] = true;
                continue;
            }
            let ratio = v.mul(d.recip());
            let mut sum = Xc::ZERO;
            for (j, r) in roots.iter().enumerate() {
                if j != i {
                    let diff = z.sub(*r);
                    if !diff.is_zero() {
                        sum = sum.add(diff.recip());
                    }
                }
            }
            let denom = Xc::normed(1.0, 0.0, 0).sub(ratio.mul(sum));
            let w = if denom.is_zero() { ratio } else { ratio.mul(denom.recip()) };
            roots[i] = z.sub(w);
            if w.log2_abs() < roots[i].log2_abs() - 48.0 {
                settled[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    roots
}

struct Approximation {
    coeffs: Vec<BigInt>,
    roots: Vec<Complex>,
    prec: u64,
}

impl Approximation {
    fn new(coeffs: Vec<BigInt>) -> Self {
        let prec = START_PRECISION;
        let roots = fast_aberth(&coeffs)
            .into_iter()
            .map(|z| Complex { re: z.part(z.re, prec), im: z.part(z.im, prec) })
            .collect();
        Approximation { coeffs, roots, prec }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(p(z), p'(z))`.
    fn eval(&self, z: &Complex, fc: &[BigFloat]) -> (Complex, Complex) {
        let p = self.prec + 16;
        let mut v = Complex::zero();
        let mut d = Complex::zero();
        for c in fc.iter().rev() {
            d = d.mul(z, p).add(&v, p);
            v = v.mul(z, p);
            v.re = v.re.add(c, p);
        }
        (v, d)
    }

    fn float_coeffs(&self) -> Vec<BigFloat> {
        self.coeffs.iter().map(|c| BigFloat::from_int(c, self.prec + 16)).collect()
    }

    /// Aberth sweeps until every correction is below the working precision or the residual
    /// is down at the rounding floor.
    fn iterate(&mut self, max_sweeps: usize) -> bool {
        let fc = self.float_coeffs();
        let n = self.degree();
        let p = self.prec + 8;
        let tol = -(self.prec as f64) + 12.0;
        let mut settled = vec![false; n];
        let log_coeffs: Vec<f64> = self.coeffs.iter().map(|c| BigFloat::from_int(c, 64).log2_abs()).collect();
        for _ in 0..max_sweeps {
            let mut all = true;
            for i in 0..n {
                if settled[i] {
                    continue;
                }
                let zi = self.roots[i].clone();
                let (v, d) = self.eval(&zi, &fc);
                if v.is_zero() || v.log2_abs() < self.rounding_floor(&log_coeffs, zi.log2_abs()) + 8.0 {
                    settled[i] = true;
                    continue;
                }
                if d.is_zero() {
                    // nudge off a critical point
                    let eps = BigFloat::norm(BigInt::from(1), zi.re.top().max(0) - 20, p);
                    self.roots[i].im = self.roots[i].im.add(&eps, p);
                    all = false;
                    continue;
                }
                let ratio = v.div(&d, p);
                let mut sum = Complex::zero();
                for j in 0..n {
                    if j != i {
                        let diff = zi.sub(&self.roots[j], p);
                        if !diff.is_zero() {
                            sum = sum.add(&diff.recip(p), p);
                        }
                    }
                }
                let mut denom = Complex::real(BigFloat::from_int(&BigInt::from(1), p));
                denom = denom.sub(&ratio.mul(&sum, p), p);
                let w = if denom.is_zero() { ratio } else { ratio.div(&denom, p) };
                self.roots[i] = zi.sub(&w, p);
                let scale = self.roots[i].log2_abs().max(-(self.prec as f64));
                if w.log2_abs() < scale + tol {
                    settled[i] = true;
                } else {
                    all = false;
                }
            }
            if all {
                return true;
            }
        }
        false
    }

    /// `log2` of the rounding error bound of Horner evaluation at `|z| = 2^lz`.
    fn rounding_floor(&self, log_coeffs: &[f64], lz: f64) -> f64 {
        let mut mag = f64::NEG_INFINITY;
        for (k, lc) in log_coeffs.iter().enumerate() {
            if lc.is_finite() {
                mag = log_add(mag, lc + k as f64 * lz);
            }
        }
        mag + ((self.degree() + 2) as f64).log2() + 4.0 - self.prec as f64
    }

    fn raise_precision(&mut self, prec: u64) {
        self.prec = prec;
    }

    /// `log2` of the inclusion radius of each root, or `None` when the disks overlap.
    fn radii(&self) -> Option<Vec<f64>> {
        let n = self.degree();
        let fc = self.float_coeffs();
        let p = self.prec + 8;
        let log_lc = BigFloat::from_int(&self.coeffs[n], 64).log2_abs();
        let log_coeffs: Vec<f64> = self.coeffs.iter().map(|c| BigFloat::from_int(c, 64).log2_abs()).collect();
        let mut log_dist = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let l = self.roots[i].sub(&self.roots[j], p).log2_abs();
                log_dist[i][j] = l;
                log_dist[j][i] = l;
            }
        }
        let mut radii = Vec::with_capacity(n);
        for i in 0..n {
            let z = &self.roots[i];
            let (v, _) = self.eval(z, &fc);
            // rounding in coefficients and Horner: bounded by (n + 2) 2^-prec sum |c_k||z|^k
            let err = self.rounding_floor(&log_coeffs, z.log2_abs());
            let num = log_add(v.log2_abs(), err);
            let mut den = log_lc;
            for j in 0..n {
                if j != i {
                    if log_dist[i][j] == f64::NEG_INFINITY {
                        return None;
                    }
                    den += log_dist[i][j];
                }
            }
            radii.push(num - den + (n as f64).log2() + 1.0);
        }
        for i in 0..n {
            for j in i + 1..n {
                if log_dist[i][j] < log_add(radii[i], radii[j]) + 1.0 {
                    return None;
                }
            }
        }
        Some(radii)
    }
}

enum PairOutcome {
    Rejected,
    Candidate(BigInt, BigInt),
    Unresolved,
}

/// Decide whether `z_i z_j` could be the root pair of `L(x^2 - s x + q)` with `Ls, Lq` integral.
fn test_pair(zi: &Complex, zj: &Complex, ri: f64, rj: f64, lead: &BigInt, prec: u64) -> PairOutcome {
    let p = prec + 8;
    let s = zi.add(zj, p);
    let q = zi.mul(zj, p);
    let li = zi.log2_abs();
    let lj = zj.log2_abs();
    let round = 4.0 - prec as f64;
    let rad_s = log_add(log_add(ri, rj), log_add(li, lj) + round);
    let rad_q = log_add(log_add(li + rj, lj + ri), log_add(ri + rj, li + lj + round)) + 0.5;
    if s.im.log2_abs() > rad_s + 0.5 || q.im.log2_abs() > rad_q + 0.5 {
        return PairOutcome::Rejected;
    }
    let lf = BigFloat::from_int(lead, p);
    let llead = lf.log2_abs();
    let mut out = Vec::with_capacity(2);
    let mut unresolved = false;
    for (val, rad) in [(&s.re, rad_s), (&q.re, rad_q)] {
        let scaled = val.mul(&lf, p);
        let nearest = scaled.round();
        let gap = scaled.sub(&BigFloat::from_int(&nearest, p), p).log2_abs();
        let lrad = rad + llead + 0.5;
        if gap > lrad {
            return PairOutcome::Rejected;
        }
        if lrad >= -2.0 {
            unresolved = true;
        }
        out.push(nearest);
    }
    if unresolved {
        return PairOutcome::Unresolved;
    }
    let q = out.pop().unwrap();
    let s = out.pop().unwrap();
    PairOutcome::Candidate(s, q)
}

/// All monic quadratic factors `x^2 - s x + q` of `poly` over Q, returned as `(s, q)`.
/// `poly` must have no rational roots and no repeated factors.
pub fn rational_quadratic_factors(poly: &Poly) -> Result<Vec<(Rational, Rational)>, Indeterminate> {
    let deg = poly.degree().unwrap_or(0);
    if deg < 2 {
        return Ok(Vec::new());
    }
    if deg == 2 {
        let m = poly.monic();
        return Ok(vec![(-m.coeff(1), m.coeff(0))]);
    }
    let coeffs = poly.primitive_integer();
    let lead = coeffs[deg].clone();
    let mut approx = Approximation::new(coeffs);
    let mut prec = START_PRECISION;
    loop {
        approx.raise_precision(prec);
        let sweeps = 100 + 4 * deg;
        approx.iterate(sweeps);
        if let Some(radii) = approx.radii() {
            let mut found = Vec::new();
            let mut unresolved = false;
            for i in 0..deg {
                for j in i + 1..deg {
                    match test_pair(&approx.roots[i], &approx.roots[j], radii[i], radii[j], &lead, prec) {
                        PairOutcome::Rejected => {}
                        PairOutcome::Unresolved => unresolved = true,
                        PairOutcome::Candidate(s, q) => {
                            let s = Rational::new(s, lead.clone());
                            let q = Rational::new(q, lead.clone());
                            if Poly::quadratic(&s, &q).divides(poly) {
                                found.push((s, q));
                            }
                        }
                    }
                }
            }
            if !unresolved {
                found.sort();
                found.dedup();
                return Ok(found);
            }
        }
        if prec >= MAX_PRECISION {
            return Err(Indeterminate { degree: deg, precision: prec });
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ri, rq};

    #[test]
    fn bigfloat_basics() {
        let p = 128;
        let a = BigFloat::from_rational(&rq(1, 3), p);
        let b = BigFloat::from_int(&BigInt::from(3), p);
        let one = a.mul(&b, p);
        assert!((one.to_f64() - 1.0).abs() < 1e-30);
        assert_eq!(BigFloat::from_rational(&rq(7, 2), p).round(), BigInt::from(4));
        assert_eq!(BigFloat::from_rational(&rq(-7, 3), p).round(), BigInt::from(-2));
        assert!((BigFloat::from_f64(0.1, p).to_f64() - 0.1).abs() < 1e-17);
        let tiny = BigFloat::from_rational(&rq(1, 1 << 40), p);
        let big = BigFloat::from_int(&(BigInt::from(1) << 300), p);
        assert_eq!(big.add(&tiny, p).log2_abs(), 300.0);
    }

    #[test]
    fn finds_quadratic_factors() {
        // (x^2 + 5)(x^2 - 3)(x^3 - 2)(2x^2 + x + 7)
        let p = &(&(&Poly::from_i64(&[5, 0, 1]) * &Poly::from_i64(&[-3, 0, 1])) * &Poly::from_i64(&[-2, 0, 0, 1]))
            * &Poly::from_i64(&[7, 1, 2]);
        let f = rational_quadratic_factors(&p).unwrap();
        let mut expect = vec![(ri(0), ri(5)), (ri(0), ri(-3)), (rq(-1, 2), rq(7, 2))];
        expect.sort();
        assert_eq!(f, expect);
    }

    #[test]
    fn no_factors_in_irreducible_quartic() {
        let p = Poly::from_i64(&[-2, 0, 0, 0, 1]);
        assert!(rational_quadratic_factors(&p).unwrap().is_empty());
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let p = Poly::from_i64(&[4, 0, 0, 0, 1]);
        assert_eq!(rational_quadratic_factors(&p).unwrap(), vec![(ri(-2), ri(2)), (ri(2), ri(2))]);
    }

    #[test]
    fn large_coefficients() {
        // roots near 10^30 and tiny ones
        let big = BigInt::from(10).pow(30);
        let mut p = Poly::new(vec![Rational::from_integer(-&big * 7), ri(0), ri(1)]);
        p = &p * &Poly::from_i64(&[1, 0, 1000003]);
        p = &p * &Poly::from_i64(&[1, 1, 1, 1, 1, 1, 1]);
        let f = rational_quadratic_factors(&p).unwrap();
        assert!(f.contains(&(ri(0), Rational::from_integer(-&big * 7))));
        assert!(f.contains(&(ri(0), rq(1, 1000003))));
    }
}
