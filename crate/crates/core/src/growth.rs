//! Torsion over quadratic fields `K = Q(sqrt d)` and growth records.
//!
//! The odd part comes from the twist decomposition `E(K)[n] = E(Q)[n] + E_d(Q)[n]`. The
//! 2-power part is found once per curve, for every quadratic field at once, by halving:
//! starting from the 2-torsion, each point `Q` over `F` is halved through the quartic
//! `x(2P) = x(Q)`, keeping the roots that live in `Q` or a quadratic field.

#![allow(non_snake_case)]

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::Coord;
use crate::curve::{
    bad_primes, count_points_mod_p, quadratic_twist, Curve, Point, QuadPoint, RatPoint, ReductionKind, ReductionType,
};
use crate::divpoly::{
    describe, mazur_list, quadratic_list, span, torsion_over_q, torsion_over_q_primes, two_division_cubic,
    DivPolyError, DivisionPolynomials, TorsionGroup, TorsionStructure,
};
use crate::exact::{
    int_serde, is_rational_square, primes_up_to, rat_serde, ri, rq, squarefree_kernel, Rational, SquarefreeInt,
};
use crate::numeric::{rational_quadratic_factors, Indeterminate};
use crate::poly::Poly;
use crate::quadfield::{QuadElem, QuadField};
use crate::tate::{to_tate_normal_form, TateError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error(transparent)]
    Indeterminate(#[from] Indeterminate),
    #[error(transparent)]
    DivPoly(#[from] DivPolyError),
    #[error("torsion {t_k} over K is not allowed for {t_q} over Q; arithmetic bug")]
    TableViolation { t_q: TorsionStructure, t_k: TorsionStructure },
    #[error("{0} is not a torsion group over Q")]
    NotMazur(TorsionStructure),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Tate(#[from] TateError),
}

/// One quadratic field (or Q itself) where torsion grows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRecord {
    pub curve: String,
    pub d: SquarefreeInt,
    pub t_q: TorsionStructure,
    pub t_k: TorsionStructure,
    /// Orders of points over K that no rational point has.
    pub new_orders: Vec<u32>,
    #[serde(with = "int_serde::seq")]
    pub ramified_primes: Vec<BigInt>,
    /// Reduction at every bad prime of the model; all other primes are good.
    pub reduction: Vec<ReductionType>,
}

impl GrowthRecord {
    pub fn grows(&self) -> bool {
        self.t_q != self.t_k
    }

    /// Primes `l` with `E(K)[l] != E(Q)[l]`.
    pub fn new_prime_torsion(&self) -> Vec<u32> {
        [2, 3, 5, 7].into_iter().filter(|&l| self.t_k.count_dividing(l) > self.t_q.count_dividing(l)).collect()
    }

    pub fn is_additive_at(&self, p: u64) -> bool {
        self.reduction_at(&BigInt::from(p)).is_some_and(|r| r.kind == ReductionKind::Additive)
    }

    pub fn reduction_at(&self, p: &BigInt) -> Option<&ReductionType> {
        self.reduction.iter().find(|r| &r.prime == p)
    }

    pub fn is_bad_at(&self, p: u64) -> bool {
        self.reduction_at(&BigInt::from(p)).is_some_and(|r| r.is_bad())
    }

    pub fn ramifies(&self, p: u64) -> bool {
        self.ramified_primes.contains(&BigInt::from(p))
    }

    pub fn d_divisible_by(&self, p: u64) -> bool {
        (self.d.value() % BigInt::from(p)).is_zero()
    }
}

/// All roots of `p` in `Q(sqrt d)`, rational ones first.
#[allow(non_snake_case)]
pub fn roots_in_K(p: &Poly, d: &SquarefreeInt) -> Result<Vec<QuadElem>, GrowthError> {
    let k = QuadField::new(d.clone());
    let (rational, irrational) = quadratic_roots(p)?;
    let mut out: Vec<QuadElem> = rational.into_iter().map(|r| k.from_rational(r)).collect();
    for (field, z) in irrational {
        if field.d() == d {
            out.push(z);
        }
    }
    Ok(out)
}

/// Rational roots of `p`, and its roots in quadratic fields, each with its field.
pub fn quadratic_roots(p: &Poly) -> Result<(Vec<Rational>, Vec<(QuadField, QuadElem)>), GrowthError> {
    if p.is_zero() {
        return Err(GrowthError::Precondition("zero polynomial".into()));
    }
    let (rational, rest) = p.split_rational_roots();
    let mut quad = Vec::new();
    for (s, q) in rational_quadratic_factors(&rest)? {
        // x^2 - s x + q: x = s/2 +- sqrt(s^2 - 4q)/2
        let disc = &s * &s - ri(4) * &q;
        let (kernel, root) = squarefree_kernel(&disc).expect("irreducible factor has nonzero discriminant");
        let d = SquarefreeInt::new(kernel).expect("irreducible factor has a non-square discriminant");
        let k = QuadField::new(d);
        let half = rq(1, 2);
        for sign in [1, -1] {
            quad.push((k.clone(), k.elem(&s * &half, &root * &half * ri(sign))));
        }
    }
    Ok((rational, quad))
}

/// A point of 2-power order with its field of definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Located {
    Rational(RatPoint),
    Quadratic(QuadField, QuadPoint),
}

impl Located {
    fn field(&self) -> Option<&QuadField> {
        match self {
            Located::Rational(_) => None,
            Located::Quadratic(k, _) => Some(k),
        }
    }
}

/// `x^4 - b4 x^2 - 2 b6 x - b8 - x_Q (4x^3 + b2 x^2 + 2 b4 x + b6)` for rational `x_Q`.
fn halving_quartic(curve: &Curve, xq: &Rational) -> Poly {
    let inv = curve.invariants();
    Poly::new(vec![
        -(&inv.b8 + &inv.b6 * xq),
        -(ri(2) * &inv.b6 + ri(2) * &inv.b4 * xq),
        -(&inv.b4 + &inv.b2 * xq),
        ri(-4) * xq,
        ri(1),
    ])
}

/// Points over `Q` or a quadratic field with first coordinate `x`.
fn located_with_rational_x(curve: &Curve, x: &Rational) -> Vec<Located> {
    let w = curve.two_division_value(x);
    if is_rational_square(&w).is_some() {
        return curve.points_with_x(x).into_iter().map(Located::Rational).collect();
    }
    let (kernel, _) = squarefree_kernel(&w).expect("nonzero");
    let k = QuadField::new(SquarefreeInt::new(kernel).expect("not a square"));
    curve.points_with_x(&k.from_rational(x.clone())).into_iter().map(|p| Located::Quadratic(k.clone(), p)).collect()
}

fn halves(curve: &Curve, q: &Located) -> Result<Vec<Located>, GrowthError> {
    let mut cands: Vec<Located> = Vec::new();
    match q {
        Located::Rational(Point::Affine(xq, _)) => {
            let (rat, quad) = quadratic_roots(&halving_quartic(curve, xq))?;
            for x in rat {
                cands.extend(located_with_rational_x(curve, &x));
            }
            for (k, x) in quad {
                cands.extend(curve.points_with_x(&x).into_iter().map(|p| Located::Quadratic(k.clone(), p)));
            }
        }
        Located::Quadratic(k, Point::Affine(xq, _)) => {
            let inv = curve.invariants();
            // H = A + sqrt(d) B with a = Re x_Q, b = Im x_Q
            let (a, b) = (&xq.a, &xq.b);
            let big_a = halving_quartic(curve, a);
            let big_b = Poly::new(vec![-(&inv.b6 * b), -(ri(2) * &inv.b4 * b), -(&inv.b2 * b), ri(-4) * b]);
            let norm = &(&big_a * &big_a) - &(&big_b * &big_b).scale(&Rational::from_integer(k.disc().clone()));
            for x in roots_in_K(&norm, k.d())? {
                let h = big_a.eval_at(&x).plus(&big_b.eval_at(&x).times(&k.sqrt_d()));
                if h.vanishes() {
                    cands.extend(curve.points_with_x(&x).into_iter().map(|p| Located::Quadratic(k.clone(), p)));
                }
            }
        }
        _ => {}
    }
    Ok(cands
        .into_iter()
        .filter(|p| match (p, q) {
            (Located::Rational(p), Located::Rational(q)) => &curve.double(p) == q,
            (Located::Quadratic(k, p), Located::Rational(q)) => curve.double(p) == q.lift(k),
            (Located::Quadratic(k, p), Located::Quadratic(l, q)) => k == l && &curve.double(p) == q,
            (Located::Rational(_), Located::Quadratic(..)) => false,
        })
        .collect())
}

/// Every point of 2-power order defined over Q or over some quadratic field.
pub fn two_power_points(curve: &Curve) -> Result<Vec<Located>, GrowthError> {
    let cubic = two_division_cubic(curve);
    let (rat, quad) = quadratic_roots(&cubic)?;
    let mut frontier: Vec<Located> = Vec::new();
    for x in rat {
        frontier.extend(curve.points_with_x(&x).into_iter().map(Located::Rational));
    }
    for (k, x) in quad {
        frontier.extend(curve.points_with_x(&x).into_iter().map(|p| Located::Quadratic(k.clone(), p)));
    }
    let mut all = frontier.clone();
    while let Some(q) = frontier.pop() {
        for p in halves(curve, &q)? {
            if !all.contains(&p) {
                all.push(p.clone());
                frontier.push(p);
            }
        }
        assert!(all.len() <= 256, "2-power torsion over quadratic fields is finite and small");
    }
    Ok(all)
}

/// Per-curve data reused for every `d`.
#[derive(Debug)]
pub struct CurveContext {
    curve: Curve,
    tq: TorsionGroup<Rational>,
    two_power: Vec<Located>,
    /// `(p, a_p)` at small good odd primes.
    frobenius: Vec<(u64, i64)>,
}

impl CurveContext {
    pub fn new(curve: &Curve) -> Result<Self, GrowthError> {
        if curve.base() != &crate::curve::Base::Rationals {
            return Err(GrowthError::Precondition("curve must be defined over Q".into()));
        }
        let tq = torsion_over_q(curve)?;
        let two_power = two_power_points(curve)?;
        let frobenius = primes_up_to(300)
            .into_iter()
            .skip(1)
            .filter_map(|p| count_points_mod_p(curve, p).map(|n| (p, p as i64 + 1 - n as i64)))
            .take(30)
            .collect();
        Ok(CurveContext { curve: curve.clone(), tq, two_power, frobenius })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn torsion_over_q(&self) -> &TorsionGroup<Rational> {
        &self.tq
    }

    pub fn two_power_points(&self) -> &[Located] {
        &self.two_power
    }

    /// Fields over which the 2-power part grows.
    pub fn two_power_fields(&self) -> Vec<SquarefreeInt> {
        let mut v: Vec<SquarefreeInt> =
            self.two_power.iter().filter_map(|p| p.field().map(|k| k.d().clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Multiple of the odd part of `#E_d(Q)_tors`, from `#E_d(F_p) = p + 1 - (d/p) a_p`.
    pub fn twist_odd_bound(&self, d: &SquarefreeInt) -> u32 {
        let mut g: u64 = 0;
        let mut used = 0;
        for &(p, ap) in &self.frobenius {
            let pb = BigInt::from(p);
            let r = d.value().mod_floor(&pb);
            if r.is_zero() {
                continue;
            }
            let chi = if r.modpow(&BigInt::from((p - 1) / 2), &pb).is_one() { 1 } else { -1 };
            let n = (p as i64 + 1 - chi * ap) as u64;
            g = g.gcd(&n);
            used += 1;
            if used >= 12 {
                break;
            }
        }
        if g == 0 {
            return 3 * 3 * 5 * 7;
        }
        while g % 2 == 0 {
            g /= 2;
        }
        g as u32
    }

    fn twist_odd_points(&self, d: &SquarefreeInt, k: &QuadField) -> Result<Vec<QuadPoint>, GrowthError> {
        let bound = self.twist_odd_bound(d);
        let primes: Vec<u32> = [3u32, 5, 7].into_iter().filter(|p| bound % p == 0).collect();
        if primes.is_empty() {
            return Ok(Vec::new());
        }
        let twist = quadratic_twist(&self.curve, d);
        let group = torsion_over_q_primes(&twist, &primes)?;
        let dv = Rational::from_integer(d.value().clone());
        let (a1, a3) = (&self.curve.a1, &self.curve.a3);
        let mut out = Vec::new();
        for p in group.points {
            if let Point::Affine(xx, yy) = p {
                // x = X / 4d, y = Y sqrt(d) / 8d^2 - (a1 x + a3)/2
                let x = &xx / (ri(4) * &dv);
                let shift = (a1 * &x + a3) / ri(2);
                let y = k.elem(-shift, &yy / (ri(8) * &dv * &dv));
                let pt = Point::Affine(k.from_rational(x), y);
                assert!(self.curve.contains(&pt), "twist point maps onto the curve");
                out.push(pt);
            }
        }
        Ok(out)
    }

    #[allow(non_snake_case)]
    pub fn torsion_over_K(&self, d: &SquarefreeInt) -> Result<TorsionGroup<QuadElem>, GrowthError> {
        let group = self.torsion_over_K_unchecked(d)?;
        let t_q = self.tq.structure;
        if !quadratic_list().contains(&group.structure) || !gt_table_allowed(t_q, group.structure)? {
            return Err(GrowthError::TableViolation { t_q, t_k: group.structure });
        }
        Ok(group)
    }

    /// `E(K)_tors` without the consistency check against the table of possible growths.
    #[allow(non_snake_case)]
    pub fn torsion_over_K_unchecked(&self, d: &SquarefreeInt) -> Result<TorsionGroup<QuadElem>, GrowthError> {
        let k = QuadField::new(d.clone());
        let mut gens: Vec<QuadPoint> = Vec::new();
        for loc in &self.two_power {
            match loc {
                Located::Rational(p) => gens.push(p.lift(&k)),
                Located::Quadratic(l, p) if l == &k => gens.push(p.clone()),
                _ => {}
            }
        }
        for p in &self.tq.points {
            if self.curve.order_of(p, 12).is_some_and(|n| n % 2 == 1) {
                gens.push(p.lift(&k));
            }
        }
        gens.extend(self.twist_odd_points(d, &k)?);
        Ok(describe(&self.curve, span(&self.curve, &gens)))
    }

    pub fn record(&self, curve_id: &str, d: &SquarefreeInt) -> Result<GrowthRecord, GrowthError> {
        let t_k = self.torsion_over_K(d)?.structure;
        Ok(self.make_record(curve_id, d, t_k))
    }

    /// Like [`Self::record`], but a group outside the table is returned rather than rejected.
    pub fn record_unchecked(&self, curve_id: &str, d: &SquarefreeInt) -> Result<GrowthRecord, GrowthError> {
        let t_k = self.torsion_over_K_unchecked(d)?.structure;
        Ok(self.make_record(curve_id, d, t_k))
    }

    fn make_record(&self, curve_id: &str, d: &SquarefreeInt, t_k: TorsionStructure) -> GrowthRecord {
        let t_q = self.tq.structure;
        let new_orders = divisors(t_k.n).into_iter().filter(|o| t_q.n % o != 0).collect();
        GrowthRecord {
            curve: curve_id.to_string(),
            d: d.clone(),
            t_q,
            t_k,
            new_orders,
            ramified_primes: d.ramified_primes(),
            reduction: bad_primes(&self.curve),
        }
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|k| n % k == 0).collect()
}

type Cache = Mutex<HashMap<Curve, Arc<CurveContext>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared context for `curve`, computed on first use.
pub fn context(curve: &Curve) -> Result<Arc<CurveContext>, GrowthError> {
    if let Some(c) = cache().lock().unwrap().get(curve) {
        return Ok(c.clone());
    }
    let ctx = Arc::new(CurveContext::new(curve)?);
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry(curve.clone()).or_insert(ctx).clone())
}

#[allow(non_snake_case)]
pub fn torsion_over_K(curve: &Curve, d: &SquarefreeInt) -> Result<TorsionGroup<QuadElem>, GrowthError> {
    context(curve)?.torsion_over_K(d)
}

/// Square-free `d` with `0 < |d| <= bound`, `d != 1`, ascending by `|d|` then sign.
pub fn squarefree_range(bound: u64) -> Vec<SquarefreeInt> {
    let mut out = Vec::new();
    for n in 1..=bound as i64 {
        for d in [-n, n] {
            if let Ok(s) = SquarefreeInt::from_i64(d) {
                out.push(s);
            }
        }
    }
    out
}

/// Records for every square-free `0 < |d| <= d_bound` over which torsion grows.
pub fn growth_scan(curve: &Curve, curve_id: &str, d_bound: u64) -> Result<Vec<GrowthRecord>, GrowthError> {
    use rayon::prelude::*;
    let ctx = context(curve)?;
    let recs: Result<Vec<GrowthRecord>, GrowthError> =
        squarefree_range(d_bound).par_iter().map(|d| ctx.record(curve_id, d)).collect();
    Ok(recs?.into_iter().filter(GrowthRecord::grows).collect())
}

/// Rows of the growth table: which groups `E(K)_tors` can be when `E(Q)_tors` is `t_q`.
pub fn gt_table_row(t_q: TorsionStructure) -> Result<Vec<TorsionStructure>, GrowthError> {
    let c = TorsionStructure::cyclic;
    let t = TorsionStructure::new;
    let row = match (t_q.m, t_q.n) {
        (1, 1) => vec![c(1), c(3), c(5), c(7), c(9)],
        (1, 2) => vec![c(2), c(4), c(6), c(8), c(10), c(12), c(16), t(2, 2), t(2, 6), t(2, 10)],
        (1, 3) => vec![c(3), c(15), t(3, 3)],
        (1, 4) => vec![c(4), c(8), c(12), t(2, 4), t(2, 8), t(2, 12), t(4, 4)],
        (1, 5) => vec![c(5), c(15)],
        (1, 6) => vec![c(6), c(12), t(2, 6), t(3, 6)],
        (1, 7) => vec![c(7)],
        (1, 8) => vec![c(8), c(16), t(2, 8)],
        (1, 9) => vec![c(9)],
        (1, 10) => vec![c(10), t(2, 10)],
        (1, 12) => vec![c(12), t(2, 12)],
        (2, 2) => vec![t(2, 2), t(2, 4), t(2, 6), t(2, 8), t(2, 12)],
        (2, 4) => vec![t(2, 4), t(2, 8), t(4, 4)],
        (2, 6) => vec![t(2, 6), t(2, 12)],
        (2, 8) => vec![t(2, 8)],
        _ => return Err(GrowthError::NotMazur(t_q)),
    };
    Ok(row)
}

pub fn gt_table_allowed(t_q: TorsionStructure, t_k: TorsionStructure) -> Result<bool, GrowthError> {
    debug_assert!(mazur_list().len() == 15);
    Ok(gt_table_row(t_q)?.contains(&t_k))
}

/// `y^2 = x(x^2 + A x + B)`: a model with a rational point of order 2 at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourTorsionModel {
    #[serde(with = "rat_serde")]
    pub a: Rational,
    #[serde(with = "rat_serde")]
    pub b: Rational,
}

impl FourTorsionModel {
    pub fn new(a: Rational, b: Rational) -> Result<Self, GrowthError> {
        if b.is_zero() || &a * &a == ri(4) * &b {
            return Err(GrowthError::InvalidParameter(format!("y^2 = x(x^2 + {a}x + {b}) is singular")));
        }
        Ok(FourTorsionModel { a, b })
    }

    /// The model obtained from `y^2 = x^3 + b2 x^2 + 8 b4 x + 16 b6` by moving the root
    /// `gamma` of the right side to the origin.
    pub fn from_root(curve: &Curve, gamma: &Rational) -> Result<Self, GrowthError> {
        let inv = curve.invariants();
        let b2 = &inv.b2;
        let lhs = gamma * gamma * gamma + b2 * gamma * gamma + ri(8) * &inv.b4 * gamma + ri(16) * &inv.b6;
        if !lhs.is_zero() {
            return Err(GrowthError::Precondition(format!("{gamma} is not a root of the 2-division cubic")));
        }
        let a = ri(3) * gamma + b2;
        let b = ri(3) * gamma * gamma + ri(2) * gamma * b2 + ri(8) * &inv.b4;
        FourTorsionModel::new(a, b)
    }

    pub fn curve(&self) -> Curve {
        Curve::new(ri(0), self.a.clone(), ri(0), self.b.clone(), ri(0)).expect("nonsingular by construction")
    }

    /// `16 (A^2 B^2 - 4 B^3)`.
    pub fn discriminant(&self) -> Rational {
        let b2 = &self.b * &self.b;
        ri(16) * (&self.a * &self.a * &b2 - ri(4) * &b2 * &self.b)
    }

    /// `2^12 disc(E) = 16 (A^2 B^2 - 4 B^3)` for the curve the model came from.
    pub fn discriminant_identity_holds(&self, curve: &Curve) -> bool {
        ri(4096) * curve.disc() == self.discriminant()
    }
}

/// One model per rational point of order 2.
pub fn four_torsion_models(curve: &Curve) -> Vec<FourTorsionModel> {
    two_division_cubic(curve)
        .rational_roots()
        .iter()
        .map(|e| FourTorsionModel::from_root(curve, &(ri(4) * e)).expect("root of the scaled cubic"))
        .collect()
}

/// Square-free kernel of a nonzero rational, with 1 for squares.
fn kernel(x: &Rational) -> BigInt {
    squarefree_kernel(x).expect("nonzero").0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPair {
    #[serde(with = "rat_serde")]
    pub s: Rational,
    #[serde(with = "int_serde")]
    pub k_plus: BigInt,
    #[serde(with = "int_serde")]
    pub k_minus: BigInt,
}

impl FieldPair {
    /// A kernel equal to 1: that halving is already rational.
    pub fn degenerate(&self) -> bool {
        self.k_plus.is_one() || self.k_minus.is_one()
    }

    pub fn kernels(&self) -> [&BigInt; 2] {
        [&self.k_plus, &self.k_minus]
    }
}

/// `(0,0)` halves over `Q(sqrt(A +- 2s))` exactly when `B = s^2`.
pub fn c4_over_K_criterion(m: &FourTorsionModel) -> Option<FieldPair> {
    let s = is_rational_square(&m.b)?.abs();
    let plus = &m.a + ri(2) * &s;
    let minus = &m.a - ri(2) * &s;
    Some(FieldPair { k_plus: kernel(&plus), k_minus: kernel(&minus), s })
}

/// Knapp: `P = (x0, y0)` is `2Q` for some `Q` over the field of `P` iff `x0 - e` is a square
/// there for every root `e` of the 2-division cubic; a zero factor `x0 - e` is replaced by
/// `(e - e')(e - e'')`.
pub fn knapp_halving<C: FieldRoots>(curve: &Curve, p: &Point<C>) -> Result<bool, GrowthError> {
    let Point::Affine(x0, _) = p else {
        return Ok(true);
    };
    if !curve.contains(p) {
        return Err(GrowthError::Precondition("point is not on the curve".into()));
    }
    let roots = x0.field_roots(&two_division_cubic(curve))?;
    if roots.len() != 3 {
        return Err(GrowthError::Precondition("2-division cubic does not split over the field".into()));
    }
    Ok(knapp_square_roots(x0, &roots).is_some())
}

/// Square roots of `x0 - e` for the three roots `e`, when all exist (the replaced factor
/// keeps its zero root).
fn knapp_square_roots<C: Coord>(x0: &C, roots: &[C]) -> Option<Vec<C>> {
    let mut out = Vec::with_capacity(3);
    for (i, e) in roots.iter().enumerate() {
        let v = x0.minus(e);
        if v.vanishes() {
            let w = e.minus(&roots[(i + 1) % 3]).times(&e.minus(&roots[(i + 2) % 3]));
            w.sqrt_in_field()?;
        }
        out.push(v.sqrt_in_field()?);
    }
    Some(out)
}

/// The points `Q` over the field of `p` with `2Q = p`, from `x(Q) = x0 + r1 r2 + r1 r3 + r2 r3`
/// where `r_i^2 = x0 - e_i`.
pub fn knapp_halves<C: Coord>(curve: &Curve, p: &Point<C>, roots: &[C]) -> Vec<Point<C>> {
    let Point::Affine(x0, _) = p else {
        return Vec::new();
    };
    let Some(r) = knapp_square_roots(x0, roots) else {
        return Vec::new();
    };
    let mut out: Vec<Point<C>> = Vec::new();
    for (s2, s3) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let r2 = if s2 > 0 { r[1].clone() } else { r[1].negate() };
        let r3 = if s3 > 0 { r[2].clone() } else { r[2].negate() };
        let x = x0.plus(&r[0].times(&r2)).plus(&r[0].times(&r3)).plus(&r2.times(&r3));
        for q in curve.points_with_x(&x) {
            if &curve.double(&q) == p && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

/// Root finding in the field a coordinate lives in.
pub trait FieldRoots: Coord {
    fn field_roots(&self, p: &Poly) -> Result<Vec<Self>, GrowthError>;
}

impl FieldRoots for Rational {
    fn field_roots(&self, p: &Poly) -> Result<Vec<Self>, GrowthError> {
        Ok(p.rational_roots())
    }
}

impl FieldRoots for QuadElem {
    fn field_roots(&self, p: &Poly) -> Result<Vec<Self>, GrowthError> {
        roots_in_K(p, self.field.d())
    }
}

/// On `T_{t,0}` (`(0,0)` of order 4), a point of order 8 appears over `Q(sqrt(1 +- 4s))`
/// exactly when `t = -s^2`.
pub fn c8_over_K_criterion(t: &Rational) -> Option<FieldPair> {
    let s = is_rational_square(&-t)?.abs();
    if s.is_zero() {
        return None;
    }
    let plus = ri(1) + ri(4) * &s;
    let minus = ri(1) - ri(4) * &s;
    if plus.is_zero() || minus.is_zero() {
        return None;
    }
    Some(FieldPair { k_plus: kernel(&plus), k_minus: kernel(&minus), s })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixteenCriterion {
    #[serde(with = "rat_serde")]
    pub r: Rational,
    #[serde(with = "int_serde")]
    pub k_plus: BigInt,
    #[serde(with = "int_serde")]
    pub k_minus: BigInt,
}

/// On the order-8 Tate curve with parameter `t`, points of order 16 appear over
/// `Q(sqrt((r^4 - 1)(r^2 +- 2r - 1)))` when `t = r^2/(r^2 + 1)`.
pub fn c16_over_K_criterion(t: &Rational) -> Result<Option<SixteenCriterion>, GrowthError> {
    if t.is_one() || t.is_zero() {
        return Err(GrowthError::InvalidParameter(format!("t = {t}")));
    }
    let r2 = t / (ri(1) - t);
    let Some(r) = is_rational_square(&r2) else { return Ok(None) };
    let r = r.abs();
    let r4m1 = &r2 * &r2 - ri(1);
    if r4m1.is_zero() {
        return Err(GrowthError::DegenerateParameter(format!("t = {t} gives r^4 - 1 = 0")));
    }
    let plus = &r4m1 * (&r2 + ri(2) * &r - ri(1));
    let minus = &r4m1 * (&r2 - ri(2) * &r - ri(1));
    Ok(Some(SixteenCriterion { k_plus: kernel(&plus), k_minus: kernel(&minus), r }))
}

/// The 2-power part of `E(K)` from the halving criteria alone.
///
/// With `E[2]` defined over `K`, points are halved by Knapp until no point halves. Otherwise
/// `E(K)[2^inf]` is cyclic and each level comes from one rational point of `E` or of the twist
/// `E_d` (the generator of the level below is fixed or negated by conjugation): the four-torsion
/// model decides order 4, the Tate form `T_{t,0}` decides order 8, and the order-8 Tate
/// parameter decides order 16.
pub fn two_power_by_lemmas(curve: &Curve, d: &SquarefreeInt) -> Result<TorsionStructure, GrowthError> {
    let cubic = two_division_cubic(curve);
    let roots = roots_in_K(&cubic, d)?;
    match roots.len() {
        0 => Ok(TorsionStructure::cyclic(1)),
        3 => knapp_closure(curve, &roots),
        1 => {
            let e = roots[0].to_rational().expect("a lone root of a rational cubic is rational");
            cyclic_chain(curve, d, &e)
        }
        n => Err(GrowthError::Precondition(format!("cubic with {n} roots in K"))),
    }
}

fn knapp_closure(curve: &Curve, roots: &[QuadElem]) -> Result<TorsionStructure, GrowthError> {
    let mut all: Vec<QuadPoint> = vec![Point::Identity];
    for e in roots {
        all.extend(curve.points_with_x(e));
    }
    let mut frontier: Vec<QuadPoint> = all[1..].to_vec();
    while let Some(p) = frontier.pop() {
        if !knapp_halving(curve, &p)? {
            continue;
        }
        let halves = knapp_halves(curve, &p, roots);
        if halves.len() != 4 {
            return Err(GrowthError::Precondition(format!("Knapp gives {} halves of {p}", halves.len())));
        }
        for q in halves {
            if !all.contains(&q) {
                all.push(q.clone());
                frontier.push(q);
            }
        }
        if all.len() > 64 {
            return Err(GrowthError::Precondition("2-power torsion over K is too large".into()));
        }
    }
    Ok(describe(curve, all).structure)
}

fn point_of_order(curve: &Curve, n: u32) -> Result<RatPoint, GrowthError> {
    torsion_over_q(curve)?
        .points
        .into_iter()
        .find(|p| curve.order_of(p, n) == Some(n))
        .ok_or_else(|| GrowthError::Precondition(format!("no rational point of order {n} on {curve}")))
}

fn cyclic_chain(curve: &Curve, d: &SquarefreeInt, e: &Rational) -> Result<TorsionStructure, GrowthError> {
    let c = TorsionStructure::cyclic;
    let dk = d.value();
    let model = FourTorsionModel::from_root(curve, &(ri(4) * e))?;
    let Some(f4) = c4_over_K_criterion(&model) else { return Ok(c(2)) };
    // the curve among E, E_d carrying the order-4 point rationally
    let holder = if f4.degenerate() {
        curve.clone()
    } else if f4.kernels().contains(&dk) {
        quadratic_twist(curve, d)
    } else {
        return Ok(c(2));
    };
    let (t4, _) = to_tate_normal_form(&holder, &point_of_order(&holder, 4)?)?;
    if !t4.c.is_zero() {
        return Err(GrowthError::Precondition(format!("order-4 Tate form has c = {}", t4.c)));
    }
    let Some(f8) = c8_over_K_criterion(&t4.b) else { return Ok(c(4)) };
    if !f8.degenerate() {
        // a new point of order 8 is moved to 5 times itself by conjugation, so neither it nor
        // any half of it is rational on E or E_d
        return Ok(if f8.kernels().contains(&dk) { c(8) } else { c(4) });
    }
    let (t8, _) = to_tate_normal_form(&holder, &point_of_order(&holder, 8)?)?;
    let t = &t8.b / &t8.c;
    match c16_over_K_criterion(&t)? {
        Some(f16) if &f16.k_plus == dk || &f16.k_minus == dk => Ok(c(16)),
        _ => Ok(c(8)),
    }
}

/// The 2-power part of `E(K)` by counting K-points on the roots of the primitive division
/// polynomials of order 2, 4, 8, 16.
pub fn two_power_by_division_polynomials(curve: &Curve, d: &SquarefreeInt) -> Result<TorsionStructure, GrowthError> {
    let mut polys = DivisionPolynomials::new(curve);
    let (mut total, mut a, mut b) = (1u32, 0u32, 0u32);
    for j in 1..=4 {
        let mut count = 0u32;
        for x in roots_in_K(&polys.primitive(1 << j), d)? {
            count += curve.points_with_x(&x).len() as u32;
        }
        if count == 0 {
            break;
        }
        match ((total + count) % total, (total + count) / total) {
            (0, 4) if a == b => (a, b) = (a + 1, b + 1),
            (0, 2) => b += 1,
            _ => return Err(GrowthError::Precondition(format!("{count} points of order {} over K", 1 << j))),
        }
        total += count;
    }
    Ok(TorsionStructure::new(1 << a, 1 << b))
}

/// Orders present in a group, as a set.
pub fn element_orders(t: TorsionStructure) -> BTreeSet<u32> {
    divisors(t.n).into_iter().collect()
}
