//! Arithmetic in K = Q(sqrt d).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{is_rational_square, val_int, Rational, SquarefreeInt, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("operands live in Q(sqrt {0}) and Q(sqrt {1})")]
    MixedFields(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} does not ramify as a divisor of d = {1}")]
    NotRamified(BigInt, BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: SquarefreeInt,
}

impl QuadField {
    pub fn new(d: SquarefreeInt) -> Self {
        QuadField { d }
    }

    pub fn d(&self) -> &SquarefreeInt {
        &self.d
    }

    pub fn disc(&self) -> &BigInt {
        self.d.value()
    }

    pub fn elem(&self, a: Rational, b: Rational) -> QuadElem {
        QuadElem { a, b, field: self.clone() }
    }

    pub fn from_rational(&self, a: Rational) -> QuadElem {
        self.elem(a, Rational::zero())
    }

    pub fn sqrt_d(&self) -> QuadElem {
        self.elem(Rational::zero(), Rational::one())
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// `a + b*sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rational,
    pub b: Rational,
    pub field: QuadField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn qf_arith(x: &QuadElem, y: &QuadElem, op: QuadOp) -> Result<QuadElem, QuadError> {
    if x.field != y.field {
        return Err(QuadError::MixedFields(x.field.disc().clone(), y.field.disc().clone()));
    }
    Ok(match op {
        QuadOp::Add => x + y,
        QuadOp::Sub => x - y,
        QuadOp::Mul => x * y,
        QuadOp::Div => x.checked_div(y)?,
    })
}

impl QuadElem {
    pub fn d(&self) -> &BigInt {
        self.field.disc()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { a: self.a.clone(), b: -&self.b, field: self.field.clone() }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d().clone()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<QuadElem, QuadError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        Ok(QuadElem { a: &self.a / &n, b: -&self.b / &n, field: self.field.clone() })
    }

    pub fn checked_div(&self, rhs: &QuadElem) -> Result<QuadElem, QuadError> {
        if self.field != rhs.field {
            return Err(QuadError::MixedFields(self.d().clone(), rhs.d().clone()));
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &Rational) -> QuadElem {
        QuadElem { a: &self.a * k, b: &self.b * k, field: self.field.clone() }
    }

    pub fn add_rational(&self, k: &Rational) -> QuadElem {
        QuadElem { a: &self.a + k, b: self.b.clone(), field: self.field.clone() }
    }

    fn same_field(&self, rhs: &QuadElem) {
        assert!(self.field == rhs.field, "mixed quadratic fields: {} and {}", self.field, rhs.field);
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sqrt = format!("sqrt({})", self.d());
        let bpart = if self.b.is_one() {
            sqrt
        } else if (-&self.b).is_one() {
            format!("-{sqrt}")
        } else {
            format!("{}*{sqrt}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, bpart)
        } else {
            write!(f, "{}+{}", self.a, bpart)
        }
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.same_field(rhs);
        QuadElem { a: &self.a + &rhs.a, b: &self.b + &rhs.b, field: self.field.clone() }
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.same_field(rhs);
        QuadElem { a: &self.a - &rhs.a, b: &self.b - &rhs.b, field: self.field.clone() }
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.same_field(rhs);
        let d = Rational::from_integer(self.d().clone());
        QuadElem {
            a: &self.a * &rhs.a + d * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            field: self.field.clone(),
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -&self.a, b: -&self.b, field: self.field.clone() }
    }
}

/// A square root of `z` in K, if there is one.
#[allow(non_snake_case)]
pub fn is_square_in_K(z: &QuadElem) -> Option<QuadElem> {
    let field = &z.field;
    if z.b.is_zero() {
        if let Some(s) = is_rational_square(&z.a) {
            return Some(field.from_rational(s));
        }
        let u = is_rational_square(&(&z.a / Rational::from_integer(z.d().clone())))?;
        return Some(field.elem(Rational::zero(), u));
    }
    let n = is_rational_square(&z.norm())?;
    let two = Rational::from_integer(BigInt::from(2));
    for cand in [(&z.a + &n) / &two, (&z.a - &n) / &two] {
        if cand.is_zero() {
            continue;
        }
        if let Some(u) = is_rational_square(&cand) {
            let v = &z.b / (&two * &u);
            return Some(field.elem(u, v));
        }
    }
    None
}

/// The extension of v_p to K when p divides d, in units of 1/2: the returned
/// `Finite(k)` means v(z) = k/2.
pub fn val_ramified(z: &QuadElem, p: &BigInt) -> Result<Valuation, QuadError> {
    if !(z.d() % p).is_zero() {
        return Err(QuadError::NotRamified(p.clone(), z.d().clone()));
    }
    let half = |x: &Rational, shift: i64| -> Valuation {
        if x.is_zero() {
            Valuation::Infinity
        } else {
            let v = val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64;
            Valuation::Finite(2 * v + shift)
        }
    };
    Ok(half(&z.a, 0).min(half(&z.b, 1)))
}
