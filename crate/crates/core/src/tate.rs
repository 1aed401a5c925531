//! Tate normal form `y^2 + (1-c)xy - by = x^3 - bx^2` and the route to it.
//!
//! A rational point `P` is moved to `(0,0)` through the chain
//! `E1 -> E2: y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6 -> E4 -> T_{b,c}`, where `d = 1`
//! unless the point lives on the twist.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{apply_change, quadratic_twist, Curve, Point, RatPoint, VarChange};
use crate::exact::{rat_serde, ri, rq, Rational, SquarefreeInt};
use crate::growth::FourTorsionModel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TateError {
    #[error("a point of order {0} has no Tate normal form")]
    UnsupportedOrder(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TateForm {
    #[serde(with = "rat_serde")]
    pub b: Rational,
    #[serde(with = "rat_serde")]
    pub c: Rational,
}

impl TateForm {
    pub fn new(b: Rational, c: Rational) -> Result<Self, TateError> {
        let form = TateForm { b, c };
        if form.try_curve().is_none() {
            return Err(TateError::InvalidParameter(format!("b = {}, c = {} is singular", form.b, form.c)));
        }
        Ok(form)
    }

    fn try_curve(&self) -> Option<Curve> {
        Curve::new(ri(1) - &self.c, -&self.b, -&self.b, ri(0), ri(0)).ok()
    }

    pub fn curve(&self) -> Curve {
        self.try_curve().expect("checked at construction")
    }

    pub fn discriminant(&self) -> Rational {
        self.curve().disc().clone()
    }

    pub fn origin() -> RatPoint {
        Point::Affine(ri(0), ri(0))
    }
}

/// Every intermediate quantity of the route to Tate normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineTrace {
    /// Twist parameter; 1 when untwisted.
    pub d: Rational,
    pub b2: Rational,
    pub b4: Rational,
    /// The point on the `E2` model (on the twisted model when `d != 1`).
    pub x1: Rational,
    pub y1: Rational,
    pub s: Rational,
    pub abar1: Rational,
    pub abar2: Rational,
    pub abar3: Rational,
    pub delta1: Rational,
    pub delta2: Rational,
    pub delta_bc: Rational,
    pub form: TateForm,
    /// From the model the point was given on to the Tate form.
    pub change: VarChange,
}

/// Moves the rational point `p` of `curve` to `(0,0)` of a Tate normal form.
pub fn to_tate_normal_form(curve: &Curve, p: &RatPoint) -> Result<(TateForm, PipelineTrace), TateError> {
    let Point::Affine(x, y) = p else {
        return Err(TateError::UnsupportedOrder(1));
    };
    if !curve.contains(p) {
        return Err(TateError::Precondition(format!("{p} is not on the curve")));
    }
    // E1 -> E2: x = x'/4, y = y'/8 - (a1 x + a3)/2
    let to_e2 = VarChange::new(rq(1, 2), ri(0), -&curve.a1 / ri(2), -&curve.a3 / ri(2)).expect("u != 0");
    let x1 = ri(4) * x;
    let y1 = ri(8) * y + ri(4) * (&curve.a1 * x + &curve.a3);
    let e2 = apply_change(curve, &to_e2).expect("nonsingular");
    debug_assert_eq!(to_e2.map_point(p), Point::Affine(x1.clone(), y1.clone()));
    let mut trace = pipeline(&e2, ri(1), curve, x1, y1)?;
    trace.change = to_e2.then(&trace.change);
    Ok((trace.form.clone(), trace))
}

/// The route for a rational point `(x1, y1)` on `y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6`,
/// the twist of `curve` by `d`.
pub fn to_tate_normal_form_twisted(
    curve: &Curve,
    d: &SquarefreeInt,
    x1: &Rational,
    y1: &Rational,
) -> Result<(TateForm, PipelineTrace), TateError> {
    let twist = quadratic_twist(curve, d);
    if !twist.contains(&Point::Affine(x1.clone(), y1.clone())) {
        return Err(TateError::Precondition(format!("({x1}, {y1}) is not on the twist by {d}")));
    }
    let trace = pipeline(&twist, Rational::from_integer(d.value().clone()), curve, x1.clone(), y1.clone())?;
    Ok((trace.form.clone(), trace))
}

/// From the short model `e2` (twist parameter `d` of `e1`) with rational point `(x1, y1)`.
fn pipeline(e2: &Curve, d: Rational, e1: &Curve, x1: Rational, y1: Rational) -> Result<PipelineTrace, TateError> {
    let inv = e1.invariants();
    if y1.is_zero() {
        return Err(TateError::UnsupportedOrder(2));
    }
    let (b2, b4) = (inv.b2.clone(), inv.b4.clone());
    let s = (ri(8) * &d * &d * &b4 + ri(2) * &d * &b2 * &x1 + ri(3) * &x1 * &x1) / (ri(2) * &y1);
    let abar1 = ri(2) * &s;
    let abar2 = -(&s * &s) + ri(3) * &x1 + &d * &b2;
    let abar3 = ri(2) * &y1;
    if abar2.is_zero() {
        return Err(TateError::UnsupportedOrder(3));
    }
    let to_e4 = VarChange::new(ri(1), x1.clone(), s.clone(), y1.clone()).expect("u = 1");
    let e4 = apply_change(e2, &to_e4).expect("nonsingular");
    debug_assert_eq!(e4.coeffs().map(Clone::clone), [abar1.clone(), abar2.clone(), abar3.clone(), ri(0), ri(0)]);
    let u = &abar3 / &abar2;
    let to_tate = VarChange::new(u.clone(), ri(0), ri(0), ri(0)).expect("u != 0");
    let tate = apply_change(&e4, &to_tate).expect("nonsingular");
    let b = -(&abar2 * &abar2 * &abar2) / (&abar3 * &abar3);
    let c = ri(1) - &abar1 * &abar2 / &abar3;
    let form = TateForm::new(b, c).expect("isomorphic to a nonsingular curve");
    if tate != form.curve() {
        return Err(TateError::Precondition("change of variables did not reach Tate form".into()));
    }
    Ok(PipelineTrace {
        d,
        b2,
        b4,
        x1,
        y1,
        s,
        abar1,
        abar2,
        abar3,
        delta1: e1.disc().clone(),
        delta2: e2.disc().clone(),
        delta_bc: form.discriminant(),
        form,
        change: to_e4.then(&to_tate),
    })
}

/// `T_{b,c}` with `(0,0)` of order 8 or 9 from the parameter `t`.
pub fn tate_curve_for_order(order: u32, t: &Rational) -> Result<TateForm, TateError> {
    let bad = |why: &str| TateError::InvalidParameter(format!("t = {t}: {why}"));
    if t.is_zero() || t.is_one() {
        return Err(bad("zero discriminant"));
    }
    let one = ri(1);
    let (b, c) = match order {
        8 => {
            if ri(2) * t == one {
                return Err(bad("zero discriminant"));
            }
            let b = (ri(2) * t - &one) * (t - &one);
            let c = &b / t;
            (b, c)
        }
        9 => {
            let c = (t - &one) * t * t;
            let b = &c * (t * t - t + &one);
            (b, c)
        }
        n => return Err(TateError::InvalidParameter(format!("no parametrization for order {n}"))),
    };
    TateForm::new(b, c).map_err(|_| bad("zero discriminant"))
}

/// `(t-1)^9 t^9 (t^2-t+1)^3 (t^3-6t^2+3t+1)`.
pub fn order9_discriminant(t: &Rational) -> Rational {
    let one = ri(1);
    let q = t * t - t + &one;
    let cubic = t * t * t - ri(6) * t * t + ri(3) * t + &one;
    pow(&(t - &one), 9) * pow(t, 9) * pow(&q, 3) * cubic
}

/// `(1-2t)^4 (t-1)^8 (8(t-1)t + 1) / t^4`.
pub fn order8_discriminant(t: &Rational) -> Rational {
    let one = ri(1);
    pow(&(&one - ri(2) * t), 4) * pow(&(t - &one), 8) * (ri(8) * (t - &one) * t + &one) / pow(t, 4)
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(ri(1), |acc, _| acc * x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Each discriminant identity of the trace, evaluated exactly. `model` adds the check
/// `2^12 disc = 16(A^2 B^2 - 4 B^3)` for a four-torsion model of the same curve.
pub fn verify_discriminant_identities(trace: &PipelineTrace, model: Option<&FourTorsionModel>) -> Vec<IdentityCheck> {
    let t = trace;
    let d = &t.d;
    let d6 = pow(d, 6);
    let k = ri(4096);
    let s_formula = (ri(8) * d * d * &t.b4 + ri(2) * d * &t.b2 * &t.x1 + ri(3) * &t.x1 * &t.x1) / (ri(2) * &t.y1);
    let ratio12 = pow(&(&t.abar2 / &t.abar3), 12);
    let b = &t.form.b;
    let mut out = vec![
        check("s", t.s == s_formula),
        check("abar1 = 2s", t.abar1 == ri(2) * &t.s),
        check("abar2 = -s^2 + 3x1 + d b2", t.abar2 == -(&t.s * &t.s) + ri(3) * &t.x1 + d * &t.b2),
        check("abar3 = 2y1", t.abar3 == ri(2) * &t.y1),
        check("delta2 = 2^12 d^6 delta1", t.delta2 == &k * &d6 * &t.delta1),
        check("delta_bc = 2^12 (abar2/abar3)^12 d^6 delta1", t.delta_bc == &k * &ratio12 * &d6 * &t.delta1),
        check(
            "delta_bc abar3^4 = 2^12 b^4 d^6 delta1",
            &t.delta_bc * pow(&t.abar3, 4) == &k * pow(b, 4) * &d6 * &t.delta1,
        ),
        check("b = -abar2^3/abar3^2", *b == -pow(&t.abar2, 3) / (&t.abar3 * &t.abar3)),
        check("c = 1 - abar1 abar2/abar3", t.form.c == ri(1) - &t.abar1 * &t.abar2 / &t.abar3),
    ];
    if let Some(m) = model {
        out.push(check("2^12 delta1 = 16(A^2 B^2 - 4 B^3)", &k * &t.delta1 == m.discriminant()));
    }
    if let Some(par) = order9_parameter(&t.form) {
        let (p, q) = (Rational::from_integer(par.numer().clone()), Rational::from_integer(par.denom().clone()));
        let lhs = &k * &t.delta1 * &d6 * pow(&q, 7) * (&p * &p - &p * &q + &q * &q);
        let cubic = pow(&p, 3) - ri(6) * &q * &p * &p + ri(3) * &q * &q * &p + pow(&q, 3);
        let rhs = pow(&t.abar3, 4) * pow(&(&p - &q), 5) * &p * cubic;
        out.push(check("2^12 delta1 d^6 q^7 (p^2-pq+q^2) = abar3^4 (p-q)^5 p (p^3-6qp^2+3q^2p+q^3)", lhs == rhs));
    }
    out
}

/// The `t` with `tate_curve_for_order(9, t) == form`, if any: `t = c^2 / (b - c)`.
pub fn order9_parameter(form: &TateForm) -> Option<Rational> {
    if form.b == form.c {
        return None;
    }
    let t = &form.c * &form.c / (&form.b - &form.c);
    (tate_curve_for_order(9, &t).ok()? == *form).then_some(t)
}

fn check(name: &str, holds: bool) -> IdentityCheck {
    IdentityCheck { name: name.to_string(), holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divpoly::torsion_over_q;
    use proptest::prelude::*;

    fn all_hold(trace: &PipelineTrace) -> bool {
        verify_discriminant_identities(trace, None).iter().all(|c| c.holds)
    }

    #[test]
    fn order_four_point_gives_c_zero() {
        let e = Curve::from_ints([0, 0, 0, 4, 0]).unwrap();
        let p = RatPoint::from_ints(2, 4);
        assert_eq!(e.order_of(&p, 10), Some(4));
        let (form, trace) = to_tate_normal_form(&e, &p).unwrap();
        assert!(form.c.is_zero());
        assert!(all_hold(&trace));
        assert_eq!(trace.change.map_point(&p), TateForm::origin());
        assert_eq!(apply_change(&e, &trace.change).unwrap(), form.curve());
    }

    #[test]
    fn tate_input_is_fixed() {
        let form = TateForm::new(rq(3, 1), rq(3, 2)).unwrap();
        let (again, trace) = to_tate_normal_form(&form.curve(), &TateForm::origin()).unwrap();
        assert_eq!(again, form);
        assert!(all_hold(&trace));
    }

    #[test]
    fn low_orders_rejected() {
        let e = Curve::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(to_tate_normal_form(&e, &RatPoint::from_ints(0, 1)), Err(TateError::UnsupportedOrder(3)));
        assert_eq!(to_tate_normal_form(&e, &RatPoint::from_ints(-1, 0)), Err(TateError::UnsupportedOrder(2)));
        assert_eq!(to_tate_normal_form(&e, &Point::Identity), Err(TateError::UnsupportedOrder(1)));
    }

    #[test]
    fn parametrized_curves() {
        let nine = tate_curve_for_order(9, &ri(2)).unwrap();
        assert_eq!(nine, TateForm { b: ri(12), c: ri(4) });
        assert_eq!(nine.curve().order_of(&TateForm::origin(), 20), Some(9));
        let eight = tate_curve_for_order(8, &ri(2)).unwrap();
        assert_eq!(eight, TateForm { b: ri(3), c: rq(3, 2) });
        assert_eq!(eight.curve().order_of(&TateForm::origin(), 20), Some(8));
        assert!(matches!(tate_curve_for_order(8, &ri(1)), Err(TateError::InvalidParameter(_))));
        assert!(matches!(tate_curve_for_order(8, &rq(1, 2)), Err(TateError::InvalidParameter(_))));
        assert!(matches!(tate_curve_for_order(7, &ri(2)), Err(TateError::InvalidParameter(_))));
    }

    #[test]
    fn corrupted_trace_fails() {
        let e = Curve::from_ints([0, 0, 0, 4, 0]).unwrap();
        let (_, mut trace) = to_tate_normal_form(&e, &RatPoint::from_ints(2, 4)).unwrap();
        trace.abar3 = ri(2) * &trace.abar3;
        let checks = verify_discriminant_identities(&trace, None);
        let eq5 = checks.iter().find(|c| c.name.starts_with("delta_bc = ")).unwrap();
        assert!(!eq5.holds);
    }

    #[test]
    fn four_torsion_identity_in_report() {
        // 15.a4 has a rational point of order 4
        let e = Curve::from_ints([1, 1, 1, 35, -28]).unwrap();
        let g = torsion_over_q(&e).unwrap();
        let p4 = g.points.iter().find(|p| e.order_of(p, 10) == Some(4)).unwrap().clone();
        let (form, trace) = to_tate_normal_form(&e, &p4).unwrap();
        assert!(form.c.is_zero());
        let t2 = crate::divpoly::two_division_cubic(&e).rational_roots();
        let m = FourTorsionModel::from_root(&e, &(ri(4) * &t2[0])).unwrap();
        assert!(verify_discriminant_identities(&trace, Some(&m)).iter().all(|c| c.holds));
    }

    #[test]
    fn twisted_order_nine() {
        // E = T_9(t=2); twisting E_d by d again gives back a model of E with its point of order 9
        let form = tate_curve_for_order(9, &ri(2)).unwrap();
        let e = form.curve();
        let d = SquarefreeInt::from_i64(-3).unwrap();
        let ed = quadratic_twist(&e, &d);
        let back = quadratic_twist(&ed, &d);
        let g = torsion_over_q(&back).unwrap();
        assert_eq!(g.structure.n, 9);
        let p9 = g.points.iter().find(|p| back.order_of(p, 10) == Some(9)).unwrap();
        let Point::Affine(x1, y1) = p9 else { unreachable!() };
        let (tf, trace) = to_tate_normal_form_twisted(&ed, &d, x1, y1).unwrap();
        assert!(all_hold(&trace));
        let checks = verify_discriminant_identities(&trace, None);
        assert!(checks.iter().any(|c| c.name.starts_with("2^12 delta1 d^6 q^7")));
        assert_eq!(tf.curve().order_of(&TateForm::origin(), 20), Some(9));
    }

    fn nice_t() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..30).prop_map(|(n, d)| rq(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn order9_closed_form(t in nice_t()) {
            prop_assume!(!t.is_zero() && !t.is_one());
            let form = tate_curve_for_order(9, &t).unwrap();
            prop_assert_eq!(form.discriminant(), order9_discriminant(&t));
            prop_assert_eq!(order9_parameter(&form), Some(t.clone()));
            let e = form.curve();
            prop_assert_eq!(e.order_of(&TateForm::origin(), 20), Some(9));
        }

        #[test]
        fn order8_closed_form(t in nice_t()) {
            prop_assume!(!t.is_zero() && !t.is_one() && t != rq(1, 2));
            let form = tate_curve_for_order(8, &t).unwrap();
            prop_assert_eq!(form.discriminant(), order8_discriminant(&t));
            let e = form.curve();
            let o = TateForm::origin();
            prop_assert!(e.mul(&o, 8).is_identity());
            prop_assert!(!e.mul(&o, 4).is_identity());
        }

        #[test]
        fn pipeline_round_trip(t in nice_t(), r in -5i64..5, s in -5i64..5, u in 1i64..4) {
            // a disguised order-9 curve: apply a random change, then recover (b, c)
            prop_assume!(!t.is_zero() && !t.is_one());
            let form = tate_curve_for_order(9, &t).unwrap();
            let ch = VarChange::new(rq(1, u), ri(r), ri(s), ri(r - s)).unwrap();
            let e = apply_change(&form.curve(), &ch).unwrap();
            let p = ch.map_point(&TateForm::origin());
            let (back, trace) = to_tate_normal_form(&e, &p).unwrap();
            prop_assert_eq!(&back, &form);
            prop_assert!(all_hold(&trace));
            prop_assert_eq!(apply_change(&e, &trace.change).unwrap(), form.curve());
            prop_assert_eq!(trace.change.map_point(&p), TateForm::origin());
        }
    }
}
