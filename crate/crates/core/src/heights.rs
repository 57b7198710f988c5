//! Naive and canonical heights and the height bounds used by the bound engine.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, rat_int, Rational};
use crate::curves::{is_exceptional_class, minimal_model, Weierstrass};
use crate::error::{Error, Result};
use crate::points::CurvePoint;

pub const DEFAULT_ITERATIONS: u32 = 5;

/// Absolute slack added to every floating-point comparison.
pub const GUARD: f64 = 1e-9;

const NICE_CONSTANT: f64 = 0.0562;
const NOTNICE_CONSTANT: f64 = 0.1173;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: u32,
    /// Set for torsion points, whose height is exactly zero.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Nice,
    Notnice,
}

/// `log max(|p|, |q|)` for `x = p/q`.
pub fn naive_height(x: &Rational) -> f64 {
    let n = x.numer().abs();
    let d = x.denom().abs();
    let top = if n > d { n } else { d };
    if top.is_zero() {
        0.0
    } else {
        arith::ln_abs(&top)
    }
}

/// Bound on `|h^(P) - h(x(P))/2|` over all points of `e`:
/// `h(j)/8 + h(Delta)/12 + 1.07 + log(2)/2`. The last term is a margin
/// covering models with `b2 != 0`.
pub fn naive_difference_bound(e: &Weierstrass) -> f64 {
    let delta = e.discriminant();
    let c4 = e.c4();
    let h_j = naive_height(&Rational::new(&c4 * &c4 * &c4, delta.clone()));
    h_j / 8.0 + arith::ln_abs(&delta) / 12.0 + 1.07 + 2f64.ln() / 2.0
}

/// Doubling limit `h(x(2^k Q)) / (2 * 4^k)` on the minimal model.
///
/// `q` is a point on `Y^2 = X^3 - 432 m^2`; it is moved to the minimal model
/// first. The factor 2 makes `(1/2) log a_n ~ h n^2`. The error bound is
/// [`naive_difference_bound`] divided by `4^k`, so it holds for every point;
/// it does not rely on the doubling steps shrinking.
pub fn canonical_height(m: &BigInt, q: &CurvePoint, iterations: u32) -> Result<HeightEstimate> {
    let mm = minimal_model(m)?;
    let e = &mm.model;
    let qs = mm.from_mordell(q);
    e.check(&qs)?;
    if e.is_torsion(&qs) {
        return Ok(HeightEstimate { value: 0.0, error_bound: 0.0, iterations: 0, exact: true });
    }
    let iterations = iterations.max(1);
    let mut cur = qs;
    let mut scale = 1.0;
    for _ in 0..iterations {
        cur = e.double(&cur);
        scale *= 4.0;
    }
    let value = naive_height(cur.x().expect("non-torsion")) / (2.0 * scale);
    Ok(HeightEstimate {
        value,
        error_bound: naive_difference_bound(e) / scale + GUARD,
        iterations,
        exact: false,
    })
}

/// Lower bound for the canonical height of any non-torsion point.
pub fn height_lower_bound(m: &BigInt) -> Result<(f64, Branch)> {
    crate::curves::TwistCurve::new_allow_small(m)?;
    let lm = arith::ln_abs(m) / 27.0;
    if is_exceptional_class(&m.abs()) {
        Ok((lm - NOTNICE_CONSTANT, Branch::Notnice))
    } else {
        Ok((lm - NICE_CONSTANT, Branch::Nice))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub n: u32,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    /// `log |1 + 54 M^2 / (m x_n^3)|`.
    pub bracket_log: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// `h n^2 - (1/3) log 3 <= (1/2) log a_n`, the lower side after bounding the bracket by 9.
    pub relaxed_lower_holds: bool,
    pub bracket_within_9: bool,
}

impl WindowCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Both sides of the naive-versus-canonical window for `nQ* = (a_n/b_n^2, .)`.
pub fn naivecanon_window(
    m: &BigInt,
    n: u32,
    a_n: &BigInt,
    b_n: &BigInt,
    h: &HeightEstimate,
) -> Result<WindowCheck> {
    if !a_n.is_positive() {
        return Err(Error::Inapplicable(format!("a_{n} = {a_n} is not positive")));
    }
    let mm = minimal_model(m)?;
    let big_m = rat_int(&mm.big_m);
    let x = Rational::new(a_n.clone(), b_n * b_n);
    let bracket = Rational::from_integer(BigInt::from(1))
        + Rational::from_integer(BigInt::from(54)) * &big_m * &big_m / (rat_int(&mm.m) * &x * &x * &x);
    let bracket_log = arith::ln_abs_rational(&bracket);
    let bracket_within_9 = bracket.abs() <= Rational::from_integer(BigInt::from(9));
    let ln3 = 3f64.ln();
    let n2 = (n as f64) * (n as f64);
    let slack = h.error_bound * n2 + GUARD;
    let hn2 = h.value * n2;
    let middle = arith::ln_abs(a_n) / 2.0;
    let lower = hn2 - ln3 / 12.0 - bracket_log / 8.0;
    let upper = hn2 + (2.0 / 3.0) * arith::ln_abs(&mm.big_m) + 1.5 * ln3;
    Ok(WindowCheck {
        n,
        lower,
        middle,
        upper,
        bracket_log,
        lower_holds: lower <= middle + slack,
        upper_holds: middle <= upper + slack,
        relaxed_lower_holds: hn2 - ln3 / 3.0 <= middle + slack,
        bracket_within_9,
    })
}

/// Window checks for `n = 1..=n_max` on the minimal model.
pub fn window_sweep(m: &BigInt, q: &CurvePoint, n_max: u32, h: &HeightEstimate) -> Result<Vec<WindowCheck>> {
    let mm = minimal_model(m)?;
    let qs = mm.from_mordell(q);
    let mut cur = qs.clone();
    let mut out = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            cur = mm.model.add_unchecked(&cur, &qs);
        }
        let x = cur.x().ok_or(Error::Torsion)?;
        let b = arith::exact_sqrt(x.denom())
            .ok_or_else(|| Error::Internal("minimal-model denominator is not a square".into()))?;
        out.push(naivecanon_window(m, n, x.numer(), &b, h)?);
    }
    Ok(out)
}
