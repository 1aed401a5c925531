//! Dense univariate polynomials over Q and their rational roots.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coord::{zero_like, Coord};
use crate::exact::{primes_up_to, Rational};

/// Coefficients in ascending degree, no trailing zeros. The zero polynomial has none.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r, Rational::one()])
    }

    /// `x^2 - s x + p`.
    pub fn quadratic(s: &Rational, p: &Rational) -> Self {
        Poly::new(vec![p.clone(), -s, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_at<C: Coord>(&self, x: &C) -> C {
        let mut acc = zero_like(x);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).add_rational(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let c = &r[i + dd] * &lead_inv;
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

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 || self.squarefree_mod_small_prime() {
            return self.monic();
        }
        self.exact_div(&self.gcd(&self.derivative())).expect("gcd divides").monic()
    }

    /// A prime not dividing the leading coefficient at which `self` stays square-free proves
    /// `self` square-free over Q. `false` means no such prime was found below 200.
    fn squarefree_mod_small_prime(&self) -> bool {
        let c = self.primitive_integer();
        let n = c.len() - 1;
        for p in primes_up_to(200) {
            let pb = BigInt::from(p);
            let f: Vec<u64> = c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect();
            if f[n] == 0 {
                continue;
            }
            let df: Vec<u64> = (1..=n).map(|i| f[i] * (i as u64 % p) % p).collect();
            if gcd_degree_mod(f, df, p) == 0 {
                return true;
            }
        }
        false
    }

    /// Distinct rational roots, and the square-free part with those roots divided out.
    pub fn split_rational_roots(&self) -> (Vec<Rational>, Poly) {
        let roots = self.rational_roots();
        let mut rest = self.squarefree_part();
        for r in &roots {
            rest = rest.exact_div(&Poly::linear_root(r)).expect("root divides");
        }
        (roots, rest)
    }

    /// Integer coefficients with content 1 and positive leading coefficient, spanning the
    /// same rational multiples as `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        let div = g * sign;
        for c in ints.iter_mut() {
            *c = &*c / &div;
        }
        ints
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let c = self.primitive_integer();
        let mut roots = Vec::new();
        let mut start = 0;
        while c[start].is_zero() {
            start += 1;
        }
        if start > 0 {
            roots.push(Rational::zero());
        }
        let c = &c[start..];
        let n = c.len() - 1;
        if n > 0 {
            // y = L x turns L^(n-1) P(y/L) into a monic integer polynomial
            let l = c[n].clone();
            let mut q = Vec::with_capacity(n + 1);
            let mut lp = BigInt::one();
            let mut pows = vec![BigInt::one(); n];
            for i in (0..n).rev() {
                pows[i] = lp.clone();
                lp *= &l;
            }
            for i in 0..n {
                q.push(&c[i] * &pows[i]);
            }
            q.push(BigInt::one());
            match integer_roots_monic(&q) {
                Some(ys) => roots.extend(ys.into_iter().map(|y| Rational::new(y, l.clone()))),
                None => {
                    let sq = self.exact_div(&self.gcd(&self.derivative())).expect("gcd divides");
                    assert!(sq.degree() < self.degree(), "no separating prime for a square-free polynomial");
                    return sq.rational_roots();
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Degree of `gcd(a, b)` over `F_p`; `b` may be zero, then the degree of `a`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let c = a.last().unwrap() * inv % p;
            for (j, bc) in b.iter().enumerate() {
                a[k + j] = (a[k + j] + p - c * bc % p) % p;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn eval_int(q: &[BigInt], y: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in q.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

fn eval_mod(q: &[BigInt], y: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in q.iter().rev() {
        acc = (acc * y + c).mod_floor(m);
    }
    acc
}

fn eval_u64(q: &[u64], y: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in q.iter().rev() {
        acc = (acc * y + c) % p;
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Integer roots of a monic integer polynomial with nonzero constant term. `None` when
/// no prime below 2000 separates the roots, which needs a repeated factor in practice.
///
/// Roots mod a prime p at which every root is simple are Hensel-lifted past twice the
/// Cauchy bound and checked exactly. Every integer root reduces to one of them, so the
/// search is complete.
fn integer_roots_monic(q: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = q.len() - 1;
    let bound = q[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();
    let dq: Vec<BigInt> = (1..=n).map(|i| &q[i] * BigInt::from(i)).collect();
    for p in primes_up_to(2000).into_iter().skip(1) {
        let pb = BigInt::from(p);
        let qp: Vec<u64> = q.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let dqp: Vec<u64> = dq.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let mut residues = Vec::new();
        let mut simple = true;
        for r in 0..p {
            if eval_u64(&qp, r, p) == 0 {
                if eval_u64(&dqp, r, p) == 0 {
                    simple = false;
                    break;
                }
                residues.push(r);
            }
        }
        if !simple {
            continue;
        }
        let mut out = Vec::new();
        for r in residues {
            let mut m = pb.clone();
            let mut y = BigInt::from(r);
            while m <= &bound * 2 {
                m = &m * &m;
                let fy = eval_mod(q, &y, &m);
                let inv = mod_inverse(&eval_mod(&dq, &y, &m), &m).expect("simple root");
                y = (y - fy * inv).mod_floor(&m);
            }
            if &y * 2 > m {
                y -= &m;
            }
            if y.abs() <= bound && eval_int(q, &y).is_zero() {
                out.push(y);
            }
        }
        return Some(out);
    }
    None
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
