//! The two coordinate fields points can live in: Q and Q(sqrt d).

use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::exact::{is_rational_square, Rational};
use crate::quadfield::{is_square_in_K, QuadElem};

pub trait Coord: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn invert(&self) -> Option<Self>;
    fn vanishes(&self) -> bool;
    /// `k` embedded in the same field as `self`.
    fn lift(&self, k: &Rational) -> Self;
    fn scale(&self, k: &Rational) -> Self;
    fn add_rational(&self, k: &Rational) -> Self;
    fn sqrt_in_field(&self) -> Option<Self>;
    fn to_rational(&self) -> Option<Rational>;

    fn over(&self, o: &Self) -> Option<Self> {
        o.invert().map(|i| self.times(&i))
    }

    fn squared(&self) -> Self {
        self.times(self)
    }
}

impl Coord for Rational {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn lift(&self, k: &Rational) -> Self {
        k.clone()
    }
    fn scale(&self, k: &Rational) -> Self {
        self * k
    }
    fn add_rational(&self, k: &Rational) -> Self {
        self + k
    }
    fn sqrt_in_field(&self) -> Option<Self> {
        is_rational_square(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Coord for QuadElem {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn invert(&self) -> Option<Self> {
        QuadElem::inv(self).ok()
    }
    fn vanishes(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn lift(&self, k: &Rational) -> Self {
        self.field.from_rational(k.clone())
    }
    fn scale(&self, k: &Rational) -> Self {
        QuadElem::scale(self, k)
    }
    fn add_rational(&self, k: &Rational) -> Self {
        QuadElem::add_rational(self, k)
    }
    fn sqrt_in_field(&self) -> Option<Self> {
        is_square_in_K(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

pub fn one_like<C: Coord>(c: &C) -> C {
    c.lift(&Rational::one())
}

pub fn zero_like<C: Coord>(c: &C) -> C {
    c.lift(&Rational::zero())
}
