//! The twist `U^3 + V^3 = m W^3`, its Mordell model `Y^2 = X^3 - 432 m^2`,
//! and the four global minimal models.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, int, Rational};
use crate::error::{Error, Result};
use crate::points::CurvePoint;

/// Long Weierstrass equation `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl Weierstrass {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Self {
        Weierstrass { a1, a2, a3, a4, a6 }
    }

    /// `y^2 = x^3 + d`.
    pub fn mordell(d: BigInt) -> Self {
        Self::new(BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), d)
    }

    pub fn discriminant(&self) -> BigInt {
        let b2 = &self.a1 * &self.a1 + 4 * &self.a2;
        let b4 = 2 * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + 4 * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn c4(&self) -> BigInt {
        let b2 = &self.a1 * &self.a1 + 4 * &self.a2;
        let b4 = 2 * &self.a4 + &self.a1 * &self.a3;
        &b2 * &b2 - 24 * &b4
    }

    /// Left side minus right side at `(x, y)`.
    pub fn residual(&self, x: &Rational, y: &Rational) -> Rational {
        let c = arith::rat_int;
        let lhs = y * y + c(&self.a1) * x * y + c(&self.a3) * y;
        let rhs = x * x * x + c(&self.a2) * x * x + c(&self.a4) * x + c(&self.a6);
        lhs - rhs
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.residual(x, y).is_zero(),
        }
    }
}

/// `U^3 + V^3 = m W^3` with `m` cube-free. Stores `|m|`; a negative input is
/// carried by its sign and handled by `(u, v) -> (-u, -v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCurve {
    m: BigInt,
    negated: bool,
}

fn validate_m(m: &BigInt, allow_small: bool) -> Result<()> {
    if m.is_zero() {
        return Err(Error::Validation("m must be nonzero".into()));
    }
    let floor = if allow_small { 1 } else { 3 };
    if m.abs() < int(floor) {
        return Err(Error::Validation(format!(
            "m = {m} is excluded (|m| must be at least {floor})"
        )));
    }
    if !arith::is_cube_free(m)? {
        return Err(Error::Validation(format!("m = {m} is not cube-free")));
    }
    Ok(())
}

impl TwistCurve {
    pub fn new(m: &BigInt) -> Result<Self> {
        validate_m(m, false)?;
        Ok(TwistCurve { m: m.abs(), negated: m.is_negative() })
    }

    /// Accepts `|m|` in {1, 2}; torsion must then be checked by the caller.
    pub fn new_allow_small(m: &BigInt) -> Result<Self> {
        validate_m(m, true)?;
        Ok(TwistCurve { m: m.abs(), negated: m.is_negative() })
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn negated(&self) -> bool {
        self.negated
    }

    pub fn mordell(&self) -> MordellCurve {
        MordellCurve::from_abs(self.m.clone())
    }
}

/// `Y^2 = X^3 + D` with `D = -432 m^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MordellCurve {
    pub m: BigInt,
    pub d: BigInt,
    pub discriminant: BigInt,
}

impl MordellCurve {
    fn from_abs(m: BigInt) -> Self {
        let d = -432 * &m * &m;
        let discriminant = -(BigInt::from(1u64 << 12) * arith::pow_big(&int(3), 9))
            * arith::pow_big(&m, 4);
        MordellCurve { m, d, discriminant }
    }

    pub fn new(m: &BigInt) -> Result<Self> {
        Ok(TwistCurve::new(m)?.mordell())
    }

    pub fn new_allow_small(m: &BigInt) -> Result<Self> {
        Ok(TwistCurve::new_allow_small(m)?.mordell())
    }

    pub fn model(&self) -> Weierstrass {
        Weierstrass::mordell(self.d.clone())
    }

    pub fn is_bad_prime(&self, p: u64) -> bool {
        p == 2 || p == 3 || (&self.m % p).is_zero()
    }
}

pub fn mordell_from_twist(m: &BigInt) -> Result<MordellCurve> {
    MordellCurve::new(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

impl Case {
    pub fn of(m: &BigInt) -> Case {
        let even = m.is_even();
        let nine = (m % int(9)).is_zero();
        match (even, nine) {
            (true, false) => Case::I,
            (false, false) => Case::II,
            (true, true) => Case::III,
            (false, true) => Case::IV,
        }
    }

    /// The scale `u` of `X = u^2 x`.
    pub fn scale(self) -> u32 {
        match self {
            Case::I | Case::II => 2,
            Case::III | Case::IV => 6,
        }
    }

    /// The shift `t` of `Y = u^3 y + t`.
    pub fn shift(self) -> u32 {
        match self {
            Case::I | Case::III => 0,
            Case::II => 4,
            Case::IV => 108,
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Global minimal model `E*` with the change of variables to `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub m: BigInt,
    pub case: Case,
    pub model: Weierstrass,
    pub u: BigInt,
    pub shift: BigInt,
    /// `m/9` when `9 | m`, else `m`.
    pub big_m: BigInt,
}

pub fn minimal_model(m: &BigInt) -> Result<MinimalModel> {
    let curve = MordellCurve::new_allow_small(m)?;
    let m = curve.m;
    let case = Case::of(&m);
    let big_m = if (&m % int(9)).is_zero() { &m / int(9) } else { m.clone() };
    let (numer, a3): (BigInt, i64) = match case {
        Case::I => (int(27) * &m * &m, 0),
        Case::II => (int(27) * &m * &m + 1, 1),
        Case::III => (int(3) * &big_m * &big_m, 0),
        Case::IV => (int(3) * &big_m * &big_m + 1, 1),
    };
    let (c, rem) = numer.div_rem(&int(4));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "non-integral constant term {numer}/4 for case {case}"
        )));
    }
    let model = Weierstrass::new(BigInt::zero(), BigInt::zero(), int(a3), BigInt::zero(), -c);
    Ok(MinimalModel {
        m,
        case,
        model,
        u: int(case.scale() as i64),
        shift: int(case.shift() as i64),
        big_m,
    })
}

impl MinimalModel {
    /// `X = u^2 x`, `Y = u^3 y + t`.
    pub fn to_mordell(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let u = arith::rat_int(&self.u);
                CurvePoint::Affine {
                    x: x * &u * &u,
                    y: y * &u * &u * &u + arith::rat_int(&self.shift),
                }
            }
        }
    }

    pub fn from_mordell(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let u = arith::rat_int(&self.u);
                CurvePoint::Affine {
                    x: x / (&u * &u),
                    y: (y - arith::rat_int(&self.shift)) / (&u * &u * &u),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    GoodOrdinary,
    GoodSupersingular,
    Bad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionType {
    pub p: u64,
    pub kind: ReductionKind,
}

pub fn reduction_type(curve: &MordellCurve, p: u64) -> ReductionType {
    let kind = if curve.is_bad_prime(p) {
        ReductionKind::Bad
    } else if p % 3 == 1 {
        ReductionKind::GoodOrdinary
    } else {
        ReductionKind::GoodSupersingular
    };
    ReductionType { p, kind }
}

/// Whether `m` is in the residue class `+-2 (mod 9)` with a prime factor
/// `1 (mod 6)`; these curves get the weaker height floor.
pub fn is_exceptional_class(m: &BigInt) -> bool {
    let r = m.mod_floor(&int(9));
    if r != int(2) && r != int(7) {
        return false;
    }
    let n = num_traits::ToPrimitive::to_u64(&m.abs()).expect("word-sized m");
    arith::factor_u64(n).iter().any(|&(p, _)| p % 6 == 1)
}
