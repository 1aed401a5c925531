//! Division polynomials, their primitive parts, and torsion over Q.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::Coord;
use crate::curve::{count_points_mod_p, Curve, Point, RatPoint};
use crate::exact::{primes_up_to, ri, Rational};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivPolyError {
    #[error("division polynomial index must be positive")]
    ZeroIndex,
    #[error("primitive part needs n >= 2")]
    SmallIndex,
    #[error("computed torsion {0} is not a possible group; arithmetic bug")]
    Impossible(TorsionStructure),
}

/// `C_m x C_n` with `m | n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionStructure {
    pub m: u32,
    pub n: u32,
}

impl TorsionStructure {
    pub fn new(m: u32, n: u32) -> Self {
        assert!(m >= 1 && n % m == 0, "C{m} x C{n} is not in normal form");
        TorsionStructure { m, n }
    }

    pub fn cyclic(n: u32) -> Self {
        TorsionStructure::new(1, n)
    }

    pub fn order(&self) -> u32 {
        self.m * self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    /// Number of elements of order dividing `k`.
    pub fn count_dividing(&self, k: u32) -> u32 {
        self.m.gcd(&k) * self.n.gcd(&k)
    }

    /// Product with a cyclic group of order `k`, in normal form.
    pub fn times_cyclic(&self, k: u32) -> TorsionStructure {
        self.checked_times_cyclic(k).expect("rank above two")
    }

    /// As [`Self::times_cyclic`], or `None` when the product needs three generators.
    pub fn checked_times_cyclic(&self, k: u32) -> Option<TorsionStructure> {
        // invariant factors of C_m x C_n x C_k
        let mut factors = vec![self.m, self.n, k];
        let mut out = Vec::new();
        for p in [2u32, 3, 5, 7, 11, 13] {
            let mut exps: Vec<u32> = factors.iter().map(|&f| p_part(f, p)).collect();
            exps.sort_unstable();
            out.push((p, exps));
        }
        factors.clear();
        let mut inv = [1u32; 3];
        for (_, exps) in out {
            for (slot, e) in inv.iter_mut().zip(exps) {
                *slot *= e;
            }
        }
        (inv[0] == 1).then(|| TorsionStructure::new(inv[1], inv[2]))
    }

    pub fn parse(s: &str) -> Option<TorsionStructure> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(['x', 'X', '*', '×']).map(|p| p.trim()).collect();
        let cyc = |p: &str| -> Option<u32> { p.strip_prefix(['C', 'c'])?.parse().ok() };
        match parts.as_slice() {
            [a] => Some(TorsionStructure::cyclic(cyc(a)?)),
            [a, b] => {
                let (m, n) = (cyc(a)?, cyc(b)?);
                (m >= 1 && n % m == 0).then(|| TorsionStructure::new(m, n))
            }
            _ => None,
        }
    }
}

fn p_part(mut f: u32, p: u32) -> u32 {
    let mut out = 1;
    while f % p == 0 {
        f /= p;
        out *= p;
    }
    out
}

impl fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "C{}", self.n)
        } else {
            write!(f, "C{} x C{}", self.m, self.n)
        }
    }
}

/// The fifteen torsion groups of elliptic curves over Q.
pub fn mazur_list() -> Vec<TorsionStructure> {
    let mut v: Vec<TorsionStructure> = (1..=10).chain([12]).map(TorsionStructure::cyclic).collect();
    v.extend((1..=4).map(|k| TorsionStructure::new(2, 2 * k)));
    v
}

/// The torsion groups of elliptic curves over quadratic fields.
pub fn quadratic_list() -> Vec<TorsionStructure> {
    let mut v: Vec<TorsionStructure> = (1..=16).chain([18]).map(TorsionStructure::cyclic).collect();
    v.extend((1..=6).map(|k| TorsionStructure::new(2, 2 * k)));
    v.push(TorsionStructure::new(3, 3));
    v.push(TorsionStructure::new(3, 6));
    v.push(TorsionStructure::new(4, 4));
    v
}

/// `4x^3 + b2 x^2 + 2 b4 x + b6`.
pub fn two_division_cubic(curve: &Curve) -> Poly {
    let inv = curve.invariants();
    Poly::new(vec![inv.b6.clone(), ri(2) * &inv.b4, inv.b2.clone(), ri(4)])
}

/// Division polynomials `f_n` in `x` alone: `f_n = psi_n` for odd `n` and `psi_n / psi_2`
/// for even `n`, where `psi_2^2` is replaced by the two-division cubic.
#[derive(Debug, Clone)]
pub struct DivisionPolynomials {
    cubic: Poly,
    cubic_sq: Poly,
    f: HashMap<u32, Poly>,
    primitive: HashMap<u32, Poly>,
}

impl DivisionPolynomials {
    pub fn new(curve: &Curve) -> Self {
        let inv = curve.invariants();
        let cubic = two_division_cubic(curve);
        let cubic_sq = &cubic * &cubic;
        let (b2, b4, b6, b8) = (&inv.b2, &inv.b4, &inv.b6, &inv.b8);
        let f3 = Poly::new(vec![b8.clone(), ri(3) * b6, ri(3) * b4, b2.clone(), ri(3)]);
        let f4 = Poly::new(vec![
            b4 * b8 - b6 * b6,
            b2 * b8 - b4 * b6,
            ri(10) * b8,
            ri(10) * b6,
            ri(5) * b4,
            b2.clone(),
            ri(2),
        ]);
        let mut f = HashMap::new();
        f.insert(0, Poly::zero());
        f.insert(1, Poly::one());
        f.insert(2, Poly::one());
        f.insert(3, f3);
        f.insert(4, f4);
        DivisionPolynomials { cubic, cubic_sq, f, primitive: HashMap::new() }
    }

    pub fn cubic(&self) -> &Poly {
        &self.cubic
    }

    pub fn f(&mut self, n: u32) -> Poly {
        if let Some(p) = self.f.get(&n) {
            return p.clone();
        }
        let m = n / 2;
        let out = if n % 2 == 1 {
            let a = &self.f(m + 2) * &self.f(m).pow(3);
            let b = &self.f(m - 1) * &self.f(m + 1).pow(3);
            if m % 2 == 0 {
                &(&self.cubic_sq * &a) - &b
            } else {
                &a - &(&self.cubic_sq * &b)
            }
        } else {
            let a = &self.f(m + 2) * &self.f(m - 1).pow(2);
            let b = &self.f(m - 2) * &self.f(m + 1).pow(2);
            &self.f(m) * &(&a - &b)
        };
        self.f.insert(n, out.clone());
        out
    }

    /// Roots are the x-coordinates of points of exact order `n` (`n >= 2`).
    pub fn primitive(&mut self, n: u32) -> Poly {
        if let Some(p) = self.primitive.get(&n) {
            return p.clone();
        }
        let out = if n == 2 {
            self.cubic.clone()
        } else {
            let mut p = self.f(n);
            for m in 3..n {
                if n % m == 0 {
                    let q = self.primitive(m);
                    p = p.exact_div(&q).expect("primitive parts divide the division polynomial");
                }
            }
            p
        };
        self.primitive.insert(n, out.clone());
        out
    }
}

pub fn division_polynomial(curve: &Curve, n: u32) -> Result<Poly, DivPolyError> {
    if n == 0 {
        return Err(DivPolyError::ZeroIndex);
    }
    Ok(DivisionPolynomials::new(curve).f(n))
}

pub fn primitive_part(curve: &Curve, n: u32) -> Result<Poly, DivPolyError> {
    if n < 2 {
        return Err(DivPolyError::SmallIndex);
    }
    Ok(DivisionPolynomials::new(curve).primitive(n))
}

/// A finite subgroup of E(F), with every element listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionGroup<C> {
    pub structure: TorsionStructure,
    pub generators: Vec<Point<C>>,
    pub points: Vec<Point<C>>,
}

/// Closes a set of torsion points under addition.
pub fn span<C: Coord>(curve: &Curve, gens: &[Point<C>]) -> Vec<Point<C>> {
    let mut pts = vec![Point::Identity];
    for g in gens {
        if pts.contains(g) {
            continue;
        }
        let mut multiples = vec![Point::Identity];
        let mut q = g.clone();
        while !q.is_identity() {
            multiples.push(q.clone());
            q = curve.add(&q, g);
        }
        let mut next = Vec::new();
        for p in &pts {
            for k in &multiples {
                let s = curve.add(p, k);
                if !next.contains(&s) {
                    next.push(s);
                }
            }
        }
        pts = next;
    }
    pts
}

/// Structure and generators of a finite group of points given as its full element list.
pub fn describe<C: Coord>(curve: &Curve, points: Vec<Point<C>>) -> TorsionGroup<C> {
    let size = points.len() as u32;
    let order = |p: &Point<C>| curve.order_of(p, size).expect("finite group");
    let orders: Vec<u32> = points.iter().map(order).collect();
    let n = *orders.iter().max().unwrap();
    let m = size / n;
    let structure = TorsionStructure::new(m, n);
    if n == 1 {
        return TorsionGroup { structure, generators: Vec::new(), points };
    }
    let p_idx = orders.iter().position(|&o| o == n).unwrap();
    let p = points[p_idx].clone();
    let mut generators = vec![p.clone()];
    if m > 1 {
        let cyclic = span(curve, std::slice::from_ref(&p));
        let q = points
            .iter()
            .zip(&orders)
            .filter(|(_, &o)| o == m)
            .map(|(q, _)| q)
            .find(|q| {
                let mut k = (*q).clone();
                for _ in 1..m {
                    if cyclic.contains(&k) {
                        return false;
                    }
                    k = curve.add(&k, q);
                }
                true
            })
            .expect("a complement exists in C_m x C_n")
            .clone();
        generators.push(q);
    }
    TorsionGroup { structure, generators, points }
}

/// Gcd of `#E(F_p)` over small good odd primes: a multiple of `#E(Q)_tors`.
pub fn torsion_bound(curve: &Curve) -> u32 {
    let mut b: u64 = 0;
    let mut used = 0;
    for p in primes_up_to(400).into_iter().skip(1) {
        if let Some(n) = count_points_mod_p(curve, p) {
            b = b.gcd(&n);
            used += 1;
            if b == 1 || used >= 12 {
                break;
            }
        }
    }
    if b == 0 {
        // no usable prime at all: fall back to the largest possible order
        return 5040;
    }
    b as u32
}

/// Rational points whose x-coordinate is a root of `poly`.
fn rational_points_on_roots(curve: &Curve, poly: &Poly) -> Vec<RatPoint> {
    poly.rational_roots().iter().flat_map(|x| curve.points_with_x(x)).collect()
}

/// Rational points of order a power of `ell`, for `ell` in {2, 3, 5, 7}; `bound` prunes
/// levels that cannot occur.
pub fn primary_points_over_q(curve: &Curve, polys: &mut DivisionPolynomials, ell: u32, bound: u32) -> Vec<RatPoint> {
    let mut out = Vec::new();
    let mut level = ell;
    let max_level = match ell {
        2 => 8,
        3 => 9,
        _ => ell,
    };
    while level <= max_level && bound % level == 0 {
        let pts = rational_points_on_roots(curve, &polys.primitive(level));
        if pts.is_empty() {
            break;
        }
        out.extend(pts);
        level *= ell;
    }
    out
}

pub fn torsion_over_q(curve: &Curve) -> Result<TorsionGroup<Rational>, DivPolyError> {
    torsion_over_q_primes(curve, &[2, 3, 5, 7])
}

/// Torsion restricted to the primary parts for the listed primes.
pub fn torsion_over_q_primes(curve: &Curve, primes: &[u32]) -> Result<TorsionGroup<Rational>, DivPolyError> {
    let bound = torsion_bound(curve);
    let mut polys = DivisionPolynomials::new(curve);
    let mut gens = Vec::new();
    for &ell in primes {
        if bound % ell == 0 {
            gens.extend(primary_points_over_q(curve, &mut polys, ell, bound));
        }
    }
    let points = span(curve, &gens);
    let group = describe(curve, points);
    if !mazur_list().contains(&group.structure) {
        return Err(DivPolyError::Impossible(group.structure));
    }
    Ok(group)
}
