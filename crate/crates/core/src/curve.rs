//! Weierstrass models, the group law, changes of variables, twists and reduction types.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::{zero_like, Coord};
use crate::exact::{factorize, int_serde, ri, val_int, Rational, SquarefreeInt, Valuation};
use crate::quadfield::{QuadElem, QuadField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular model: discriminant is zero")]
    Singular,
    #[error("point {0} is not on the curve")]
    OffCurve(String),
    #[error("change of variables with u = 0")]
    ZeroScaling,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Invariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub disc: Rational,
    pub j: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Base {
    Rationals,
    Quadratic(QuadField),
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
    inv: Invariants,
    base: Base,
}

/// `(b2, b4, b6, b8, c4, c6, disc, j)`; `None` when the discriminant vanishes.
pub fn invariants(a: [&Rational; 5]) -> Option<Invariants> {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + ri(4) * a2;
    let b4 = ri(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + ri(4) * a6;
    let b8 = a1 * a1 * a6 + ri(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - ri(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + ri(36) * &b2 * &b4 - ri(216) * &b6;
    let disc = -(&b2 * &b2 * &b8) - ri(8) * &b4 * &b4 * &b4 - ri(27) * &b6 * &b6 + ri(9) * &b2 * &b4 * &b6;
    if disc.is_zero() {
        return None;
    }
    let j = &c4 * &c4 * &c4 / &disc;
    Some(Invariants { b2, b4, b6, b8, c4, c6, disc, j })
}

impl Curve {
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self, CurveError> {
        let inv = invariants([&a1, &a2, &a3, &a4, &a6]).ok_or(CurveError::Singular)?;
        Ok(Curve { a1, a2, a3, a4, a6, inv, base: Base::Rationals })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = a.map(ri);
        Curve::new(a1, a2, a3, a4, a6)
    }

    pub fn from_bigints(a: &[BigInt; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = a.clone().map(Rational::from_integer);
        Curve::new(a1, a2, a3, a4, a6)
    }

    /// The same equation regarded over `K`.
    pub fn base_change(&self, k: &QuadField) -> Curve {
        Curve { base: Base::Quadratic(k.clone()), ..self.clone() }
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn coeffs(&self) -> [&Rational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn invariants(&self) -> &Invariants {
        &self.inv
    }

    pub fn disc(&self) -> &Rational {
        &self.inv.disc
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_integer())
    }

    /// Left side minus right side of the Weierstrass equation at `(x, y)`.
    fn equation<C: Coord>(&self, x: &C, y: &C) -> C {
        let lhs = y.times(y).plus(&x.times(y).scale(&self.a1)).plus(&y.scale(&self.a3));
        let rhs = x.times(x).times(x).plus(&x.times(x).scale(&self.a2)).plus(&x.scale(&self.a4)).add_rational(&self.a6);
        lhs.minus(&rhs)
    }

    pub fn contains<C: Coord>(&self, p: &Point<C>) -> bool {
        match p {
            Point::Identity => true,
            Point::Affine(x, y) => self.equation(x, y).vanishes(),
        }
    }

    fn check<C: Coord>(&self, p: &Point<C>) -> Result<(), CurveError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CurveError::OffCurve(p.to_string()))
        }
    }

    pub fn neg<C: Coord>(&self, p: &Point<C>) -> Point<C> {
        match p {
            Point::Identity => Point::Identity,
            Point::Affine(x, y) => {
                let ny = y.negate().minus(&x.scale(&self.a1)).add_rational(&-&self.a3);
                Point::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add<C: Coord>(&self, p: &Point<C>, q: &Point<C>) -> Point<C> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Identity, _) => return q.clone(),
            (_, Point::Identity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1.plus(y2).plus(&x2.scale(&self.a1)).add_rational(&self.a3);
            if denom.vanishes() {
                return Point::Identity;
            }
            // tangent at p (here q = p)
            let d = y1.scale(&ri(2)).plus(&x1.scale(&self.a1)).add_rational(&self.a3);
            let num_l = x1
                .times(x1)
                .scale(&ri(3))
                .plus(&x1.scale(&(ri(2) * &self.a2)))
                .add_rational(&self.a4)
                .minus(&y1.scale(&self.a1));
            let num_n = x1
                .times(x1)
                .times(x1)
                .negate()
                .plus(&x1.scale(&self.a4))
                .add_rational(&(ri(2) * &self.a6))
                .minus(&y1.scale(&self.a3));
            (num_l.over(&d).unwrap(), num_n.over(&d).unwrap())
        } else {
            let d = x2.minus(x1);
            let lambda = y2.minus(y1).over(&d).unwrap();
            let nu = y1.times(x2).minus(&y2.times(x1)).over(&d).unwrap();
            (lambda, nu)
        };
        let x3 = lambda.times(&lambda).plus(&lambda.scale(&self.a1)).add_rational(&-&self.a2).minus(x1).minus(x2);
        let y3 = lambda.add_rational(&self.a1).times(&x3).negate().minus(&nu).add_rational(&-&self.a3);
        Point::Affine(x3, y3)
    }

    pub fn double<C: Coord>(&self, p: &Point<C>) -> Point<C> {
        self.add(p, p)
    }

    pub fn mul<C: Coord>(&self, p: &Point<C>, k: i64) -> Point<C> {
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Point::Identity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            k >>= 1;
            if k > 0 {
                run = self.double(&run);
            }
        }
        acc
    }

    /// Validated group law.
    pub fn point_op<C: Coord>(&self, p: &Point<C>, q: &Point<C>, op: PointOp) -> Result<Point<C>, CurveError> {
        self.check(p)?;
        Ok(match op {
            PointOp::Add => {
                self.check(q)?;
                self.add(p, q)
            }
            PointOp::Neg => self.neg(p),
            PointOp::Double => self.double(p),
            PointOp::Mul(k) => self.mul(p, k),
        })
    }

    /// Exact order of `p` if it is at most `bound`.
    pub fn order_of<C: Coord>(&self, p: &Point<C>, bound: u32) -> Option<u32> {
        let mut q = p.clone();
        for n in 1..=bound {
            if q.is_identity() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }

    /// `(2y + a1 x + a3)^2` as a polynomial expression in `x`: `4x^3 + b2 x^2 + 2 b4 x + b6`.
    pub fn two_division_value<C: Coord>(&self, x: &C) -> C {
        let inv = &self.inv;
        x.times(x)
            .times(x)
            .scale(&ri(4))
            .plus(&x.times(x).scale(&inv.b2))
            .plus(&x.scale(&(ri(2) * &inv.b4)))
            .add_rational(&inv.b6)
    }

    /// The points of the curve with first coordinate `x` over the field of `x`.
    pub fn points_with_x<C: Coord>(&self, x: &C) -> Vec<Point<C>> {
        let f = self.two_division_value(x);
        let Some(w) = f.sqrt_in_field() else { return Vec::new() };
        let shift = x.scale(&self.a1).add_rational(&self.a3);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let y1 = w.minus(&shift).scale(&half);
        if w.vanishes() {
            return vec![Point::Affine(x.clone(), y1)];
        }
        let y2 = w.negate().minus(&shift).scale(&half);
        vec![Point::Affine(x.clone(), y1), Point::Affine(x.clone(), y2)]
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOp {
    Add,
    Neg,
    Double,
    Mul(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point<C> {
    Identity,
    Affine(C, C),
}

pub type RatPoint = Point<Rational>;
pub type QuadPoint = Point<QuadElem>;

impl<C: Coord> Point<C> {
    pub fn is_identity(&self) -> bool {
        matches!(self, Point::Identity)
    }

    pub fn x(&self) -> Option<&C> {
        match self {
            Point::Identity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&C> {
        match self {
            Point::Identity => None,
            Point::Affine(_, y) => Some(y),
        }
    }
}

impl RatPoint {
    pub fn from_ints(x: i64, y: i64) -> RatPoint {
        Point::Affine(ri(x), ri(y))
    }

    pub fn lift(&self, k: &QuadField) -> QuadPoint {
        match self {
            Point::Identity => Point::Identity,
            Point::Affine(x, y) => Point::Affine(k.from_rational(x.clone()), k.from_rational(y.clone())),
        }
    }
}

impl QuadPoint {
    /// Both coordinates rational.
    pub fn is_rational(&self) -> bool {
        match self {
            Point::Identity => true,
            Point::Affine(x, y) => x.is_rational() && y.is_rational(),
        }
    }
}

impl<C: fmt::Display> fmt::Display for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Identity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarChange {
    pub u: Rational,
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
}

impl VarChange {
    pub fn new(u: Rational, r: Rational, s: Rational, t: Rational) -> Result<Self, CurveError> {
        if u.is_zero() {
            return Err(CurveError::ZeroScaling);
        }
        Ok(VarChange { u, r, s, t })
    }

    pub fn identity() -> Self {
        VarChange { u: ri(1), r: ri(0), s: ri(0), t: ri(0) }
    }

    /// Apply `self`, then `next`.
    pub fn then(&self, next: &VarChange) -> VarChange {
        let u2 = &self.u * &self.u;
        VarChange {
            u: &self.u * &next.u,
            r: &u2 * &next.r + &self.r,
            s: &self.u * &next.s + &self.s,
            t: &u2 * &self.u * &next.t + &self.s * &u2 * &next.r + &self.t,
        }
    }

    pub fn inverse(&self) -> VarChange {
        let u = &self.u;
        VarChange {
            u: u.recip(),
            r: -&self.r / (u * u),
            s: -&self.s / u,
            t: (&self.r * &self.s - &self.t) / (u * u * u),
        }
    }

    /// Image of an old-model point in the new model.
    pub fn map_point<C: Coord>(&self, p: &Point<C>) -> Point<C> {
        match p {
            Point::Identity => Point::Identity,
            Point::Affine(x, y) => {
                let u2 = &self.u * &self.u;
                let xr = x.add_rational(&-&self.r);
                let nx = xr.scale(&u2.recip());
                let ny = y.minus(&xr.scale(&self.s)).add_rational(&-&self.t).scale(&(&u2 * &self.u).recip());
                Point::Affine(nx, ny)
            }
        }
    }
}

/// The transformed curve; its point map is `change.map_point`.
pub fn apply_change(curve: &Curve, change: &VarChange) -> Result<Curve, CurveError> {
    let VarChange { u, r, s, t } = change;
    if u.is_zero() {
        return Err(CurveError::ZeroScaling);
    }
    let (a1, a2, a3, a4, a6) = (&curve.a1, &curve.a2, &curve.a3, &curve.a4, &curve.a6);
    let n1 = a1 + ri(2) * s;
    let n2 = a2 - s * a1 + ri(3) * r - s * s;
    let n3 = a3 + r * a1 + ri(2) * t;
    let n4 = a4 - s * a3 + ri(2) * r * a2 - (t + r * s) * a1 + ri(3) * r * r - ri(2) * s * t;
    let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    let u2 = u * u;
    let u3 = &u2 * u;
    let u4 = &u2 * &u2;
    let u6 = &u3 * &u3;
    let mut out = Curve::new(n1 / u, n2 / &u2, n3 / &u3, n4 / &u4, n6 / &u6)?;
    out.base = curve.base.clone();
    Ok(out)
}

/// `y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6`.
pub fn quadratic_twist(curve: &Curve, d: &SquarefreeInt) -> Curve {
    let inv = curve.invariants();
    let d = Rational::from_integer(d.value().clone());
    let d2 = &d * &d;
    Curve::new(ri(0), &d * &inv.b2, ri(0), ri(8) * &d2 * &inv.b4, ri(16) * &d2 * &d * &inv.b6)
        .expect("twists of nonsingular curves are nonsingular")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionType {
    #[serde(with = "int_serde")]
    pub prime: BigInt,
    pub kind: ReductionKind,
    /// Set when the model is not visibly minimal at `prime`; the classification then
    /// describes this model only.
    #[serde(default)]
    pub minimality_warning: bool,
}

impl ReductionType {
    pub fn is_bad(&self) -> bool {
        self.kind != ReductionKind::Good
    }
}

fn val(x: &Rational, p: &BigInt) -> Valuation {
    if x.is_zero() {
        Valuation::Infinity
    } else {
        Valuation::Finite(val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64)
    }
}

/// Reduction type read off `v_p(disc)` and `v_p(c4)`. The model is taken as minimal at `p`;
/// when neither `v_p(disc) < 12`, `v_p(c4) < 4` nor `v_p(c6) < 6` certifies that, or the
/// model is not `p`-integral, the result carries a warning.
pub fn reduction_type(curve: &Curve, p: &BigInt) -> ReductionType {
    let inv = curve.invariants();
    let vd = val(&inv.disc, p);
    let vc4 = val(&inv.c4, p);
    let vc6 = val(&inv.c6, p);
    let integral = curve.coeffs().iter().all(|c| c.is_zero() || val(c, p) >= Valuation::Finite(0));
    let certified = vd < Valuation::Finite(12) || vc4 < Valuation::Finite(4) || vc6 < Valuation::Finite(6);
    let kind = if vd <= Valuation::Finite(0) {
        ReductionKind::Good
    } else if vc4 == Valuation::Finite(0) {
        ReductionKind::Multiplicative
    } else {
        ReductionKind::Additive
    };
    ReductionType { prime: p.clone(), kind, minimality_warning: !(integral && certified) }
}

/// Bad primes of the model with their reduction types, ascending.
pub fn bad_primes(curve: &Curve) -> Vec<ReductionType> {
    let disc = curve.disc();
    let mut primes: Vec<BigInt> =
        factorize(disc.numer()).expect("nonzero discriminant").into_iter().map(|(p, _)| p).collect();
    if !disc.denom().is_one() {
        primes.extend(factorize(disc.denom()).expect("nonzero").into_iter().map(|(p, _)| p));
        primes.sort();
        primes.dedup();
    }
    primes.into_iter().map(|p| reduction_type(curve, &p)).collect()
}

/// `#E(F_p)` for an odd prime `p` at which the model is integral with good reduction.
pub fn count_points_mod_p(curve: &Curve, p: u64) -> Option<u64> {
    if p < 3 {
        return None;
    }
    let pb = BigInt::from(p);
    let red = |x: &Rational| -> Option<u64> {
        let d = x.denom().modpow(&BigInt::from(p - 2), &pb);
        if (x.denom() % &pb).is_zero() {
            return None;
        }
        let n = (x.numer() * d) % &pb;
        let n = if n.is_negative() { n + &pb } else { n };
        n.to_u64()
    };
    let inv = curve.invariants();
    let disc = red(&inv.disc)?;
    if disc == 0 {
        return None;
    }
    for c in curve.coeffs() {
        red(c)?;
    }
    let (b2, b4, b6) = (red(&inv.b2)?, red(&inv.b4)?, red(&inv.b6)?);
    let mut is_sq = vec![false; p as usize];
    for y in 1..p {
        is_sq[(y * y % p) as usize] = true;
    }
    let mut count = p + 1;
    for x in 0..p {
        let f = (4 * x % p * x % p * x + b2 * x % p * x + 2 * b4 * x + b6) % p;
        if f == 0 {
            continue;
        }
        if is_sq[f as usize] {
            count += 1;
        } else {
            count -= 1;
        }
    }
    Some(count)
}

/// A point of the curve in whatever field `x` lives in is identified by its coordinates.
pub fn point_in_field<C: Coord>(like: &C, x: &Rational, y: &Rational) -> Point<C> {
    Point::Affine(zero_like(like).add_rational(x), zero_like(like).add_rational(y))
}
