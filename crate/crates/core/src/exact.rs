//! Integers, rationals, p-adic valuations, factorization and square-free kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0}: zero argument")]
    Zero(&'static str),
    #[error("{0} is not square-free")]
    NotSquarefree(BigInt),
    #[error("d = {0} does not define a quadratic field")]
    TrivialField(BigInt),
}

/// Shorthand for an integral rational.
pub fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics when `d == 0`.
pub fn rq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A p-adic valuation. `Infinity` is the valuation of zero and sorts above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

const SMALL_PRIMES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller-Rabin with the first twenty prime bases: deterministic far beyond 64 bits,
/// probabilistic (with error below 4^-20) above that.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// Primes up to `n` inclusive.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k as u64).collect()
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn val_int(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn val_p(x: &Rational, p: &BigInt) -> Result<Valuation, ExactError> {
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p.clone()));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let num = val_int(x.numer(), p) as i64;
    let den = val_int(x.denom(), p) as i64;
    Ok(Valuation::Finite(num - den))
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of `|n|`, primes ascending.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, u32)>, ExactError> {
    if n.is_zero() {
        return Err(ExactError::Zero("factorize"));
    }
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if let Some(small) = m.to_u64() {
        let (fs, rest) = trial_u64(small);
        out.extend(fs.into_iter().map(|(p, e)| (BigInt::from(p), e)));
        m = BigInt::from(rest);
    } else {
        let mut p = 2u64;
        while p <= TRIAL_LIMIT {
            if BigInt::from(p * p) > m {
                break;
            }
            let bp = BigInt::from(p);
            let mut e = 0;
            loop {
                let (q, r) = m.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                m = q;
                e += 1;
            }
            if e > 0 {
                out.push((bp, e));
                if let Some(small) = m.to_u64() {
                    let (fs, rest) = trial_u64_from(small, p + 1);
                    out.extend(fs.into_iter().map(|(p, e)| (BigInt::from(p), e)));
                    m = BigInt::from(rest);
                    break;
                }
            }
            p += if p % 2 == 0 { 1 } else { 2 };
        }
    }
    if !m.is_one() {
        let bound = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
        if m < bound {
            out.push((m, 1));
        } else {
            let mut big = Vec::new();
            split_large(m, &mut big);
            for p in big {
                match out.iter_mut().find(|(q, _)| *q == p) {
                    Some(entry) => entry.1 += 1,
                    None => out.push((p, 1)),
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn trial_u64(n: u64) -> (Vec<(u64, u32)>, u64) {
    trial_u64_from(n, 2)
}

/// Trial division by candidates `>= start`; returns the factors found and the cofactor.
/// When the cofactor is larger than one it has no prime factor up to `TRIAL_LIMIT`.
fn trial_u64_from(mut n: u64, start: u64) -> (Vec<(u64, u32)>, u64) {
    let mut out = Vec::new();
    let mut p = start.max(2);
    while p <= TRIAL_LIMIT && p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p % 2 == 0 { 1 } else { 2 };
    }
    if n > 1 && (n as u128) < (TRIAL_LIMIT as u128) * (TRIAL_LIMIT as u128) {
        out.push((n, 1));
        n = 1;
    }
    (out, n)
}

fn split_large(m: BigInt, out: &mut Vec<BigInt>) {
    if m.is_one() {
        return;
    }
    if is_prime(&m) {
        out.push(m);
        return;
    }
    let r = m.sqrt();
    if &r * &r == m {
        split_large(r.clone(), out);
        split_large(r, out);
        return;
    }
    let f = pollard_brent(&m);
    let g = &m / &f;
    split_large(f, out);
    split_large(g, out);
}

/// Brent's variant of Pollard rho. The polynomial constants are tried in a fixed order,
/// so the output is deterministic.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let one = BigInt::one();
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

pub fn is_squarefree(n: &BigInt) -> bool {
    if n.is_zero() {
        return false;
    }
    factorize(n).map(|fs| fs.iter().all(|(_, e)| *e == 1)).unwrap_or(false)
}

/// Writes `x = kernel * square^2` with `kernel` a square-free integer (or 1) and `square >= 0`.
pub fn squarefree_kernel(x: &Rational) -> Result<(BigInt, Rational), ExactError> {
    if x.is_zero() {
        return Err(ExactError::Zero("squarefree_kernel"));
    }
    let prod = x.numer() * x.denom();
    let mut kernel = if prod.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut root = BigInt::one();
    for (p, e) in factorize(&prod)? {
        if e % 2 == 1 {
            kernel *= &p;
        }
        root *= p.pow(e / 2);
    }
    Ok((kernel, Rational::new(root, x.denom().clone())))
}

/// Nonnegative rational square root, when one exists.
pub fn is_rational_square(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A square-free integer other than 0 and 1: the `d` of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarefreeInt(BigInt);

impl Serialize for SquarefreeInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_serde::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for SquarefreeInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = int_serde::deserialize(d)?;
        SquarefreeInt::new(v).map_err(serde::de::Error::custom)
    }
}

impl SquarefreeInt {
    pub fn new(value: BigInt) -> Result<Self, ExactError> {
        if value.is_zero() || value.is_one() {
            return Err(ExactError::TrivialField(value));
        }
        if !is_squarefree(&value) {
            return Err(ExactError::NotSquarefree(value));
        }
        Ok(SquarefreeInt(value))
    }

    pub fn from_i64(value: i64) -> Result<Self, ExactError> {
        Self::new(BigInt::from(value))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    /// Primes ramified in Q(sqrt d): the primes dividing d, and 2 when d is 2 or 3 mod 4.
    pub fn ramified_primes(&self) -> Vec<BigInt> {
        let mut ps: Vec<BigInt> = factorize(&self.0).expect("nonzero").into_iter().map(|(p, _)| p).collect();
        let r = self.0.mod_floor(&BigInt::from(4));
        let two = BigInt::from(2);
        if (r == BigInt::from(2) || r == BigInt::from(3)) && !ps.contains(&two) {
            ps.insert(0, two);
        }
        ps
    }
}

impl fmt::Display for SquarefreeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serde adapter writing integers as JSON numbers when they fit in `i64` and as decimal
/// strings otherwise; both forms are accepted on input.
pub mod int_serde {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(n).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    fn to_repr(n: &BigInt) -> Repr {
        match n.to_i64() {
            Some(v) => Repr::Small(v),
            None => Repr::Big(n.to_string()),
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
        match r {
            Repr::Small(v) => Ok(BigInt::from(v)),
            Repr::Big(s) => s.parse().map_err(E::custom),
        }
    }

    /// The same encoding for a list.
    pub mod seq {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
        }
    }
}

/// Serde adapter writing rationals as strings `"n"` or `"n/d"`.
pub mod rat_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse::<Rational>().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_p(&ri(8), &b(2)).unwrap(), Valuation::Finite(3));
        assert_eq!(val_p(&ri(-15), &b(3)).unwrap(), Valuation::Finite(1));
        assert_eq!(val_p(&ri(0), &b(5)).unwrap(), Valuation::Infinity);
        assert_eq!(val_p(&rq(5, 24), &b(2)).unwrap(), Valuation::Finite(-3));
        assert!(matches!(val_p(&ri(3), &b(4)), Err(ExactError::NotPrime(_))));
        assert!(Valuation::Infinity > Valuation::Finite(i64::MAX));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(squarefree_kernel(&ri(12)).unwrap(), (b(3), ri(2)));
        assert_eq!(squarefree_kernel(&ri(-50)).unwrap(), (b(-2), ri(5)));
        assert_eq!(squarefree_kernel(&rq(9, 4)).unwrap(), (b(1), rq(3, 2)));
        assert!(squarefree_kernel(&ri(0)).is_err());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(&b(19)).unwrap(), vec![(b(19), 1)]);
        assert_eq!(factorize(&b(4096)).unwrap(), vec![(b(2), 12)]);
        assert_eq!(factorize(&b(-15)).unwrap(), vec![(b(3), 1), (b(5), 1)]);
        assert!(factorize(&b(0)).is_err());
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // two primes just above 10^6 and a 61-bit prime
        let p = b(1_000_003);
        let q = b(1_000_033);
        let r = BigInt::from(2305843009213693951u64);
        let n = &p * &q * &r * &r;
        let fs = factorize(&n).unwrap();
        assert_eq!(fs, vec![(p, 1), (q, 1), (r, 2)]);
    }

    #[test]
    fn square_examples() {
        assert_eq!(is_rational_square(&rq(9, 4)), Some(rq(3, 2)));
        assert_eq!(is_rational_square(&ri(2)), None);
        assert_eq!(is_rational_square(&ri(0)), Some(ri(0)));
        assert_eq!(is_rational_square(&ri(-4)), None);
    }

    #[test]
    fn squarefree_int_rejects() {
        assert!(SquarefreeInt::from_i64(0).is_err());
        assert!(SquarefreeInt::from_i64(1).is_err());
        assert!(SquarefreeInt::from_i64(12).is_err());
        assert!(SquarefreeInt::from_i64(-1).is_ok());
        assert!(SquarefreeInt::from_i64(-15).is_ok());
    }

    #[test]
    fn ramification() {
        let r = |d| {
            SquarefreeInt::from_i64(d)
                .unwrap()
                .ramified_primes()
                .into_iter()
                .map(|p| p.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(r(-1), vec![2]);
        assert_eq!(r(-3), vec![3]);
        assert_eq!(r(3), vec![2, 3]);
        assert_eq!(r(-15), vec![3, 5]);
        assert_eq!(r(6), vec![2, 3]);
        assert_eq!(r(5), vec![5]);
    }

    #[test]
    fn factorize_reassembles_small_range() {
        for n in 1..=100_000i64 {
            let fs = factorize(&b(n)).unwrap();
            let prod = fs.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, b(n));
            assert!(fs.iter().all(|(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn factorize_reassembles_random_u64() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n: u64 = rng.gen_range(1..=u64::MAX);
            let bn = BigInt::from(n);
            let fs = factorize(&bn).unwrap();
            let prod = fs.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, bn);
            assert!(fs.iter().all(|(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn primality_against_sieve() {
        let ps = primes_up_to(5000);
        for n in 0..=5000u64 {
            assert_eq!(is_prime_u64(n), ps.binary_search(&n).is_ok(), "{n}");
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-100_000i64..100_000, 1i64..5_000).prop_map(|(n, d)| rq(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn val_is_a_valuation(x in arb_rational(), y in arb_rational(), pi in 0usize..6) {
            let p = b([2, 3, 5, 7, 11, 13][pi]);
            let vx = val_p(&x, &p).unwrap();
            let vy = val_p(&y, &p).unwrap();
            let vs = val_p(&(&x + &y), &p).unwrap();
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
            prop_assert_eq!(val_p(&(&x * &y), &p).unwrap(), vx + vy);
        }
    }

    proptest! {
        #[test]
        fn kernel_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..10_000) {
            prop_assume!(n != 0);
            let x = rq(n, d);
            let (k, s) = squarefree_kernel(&x).unwrap();
            prop_assert_eq!(Rational::from_integer(k.clone()) * &s * &s, x);
            prop_assert!(k.is_one() || is_squarefree(&k));
            prop_assert!(!s.is_negative());
        }

        #[test]
        fn square_root_is_exact(n in 0i64..1_000_000, d in 1i64..10_000) {
            let x = rq(n, d);
            match is_rational_square(&x) {
                Some(s) => prop_assert_eq!(&s * &s, x),
                None => {
                    let (k, _) = squarefree_kernel(&x).unwrap();
                    prop_assert!(!k.is_one());
                }
            }
        }
    }
}
