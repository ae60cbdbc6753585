//! Exact rationals for rates and capacities.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{param, Result};

/// Reduced fraction with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(num: i128, den: i128) -> Result<Rational> {
        if den == 0 {
            return Err(param("zero denominator"));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn integer(n: i128) -> Rational {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Rational {
        Rational::integer(0)
    }

    pub fn one() -> Rational {
        Rational::integer(1)
    }

    pub fn num(&self) -> i128 {
        *self.0.numer()
    }

    pub fn den(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.num() > 0
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.num() == 0 {
            return Err(param("reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Rational {
        (0..e).fold(Rational::one(), |acc, _| acc * *self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

#[derive(Serialize, Deserialize)]
struct Wire {
    num: i128,
    den: i128,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            num: self.num(),
            den: self.den(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let r = Rational::new(w.num, w.den).map_err(serde::de::Error::custom)?;
        if r.num() != w.num || r.den() != w.den {
            return Err(serde::de::Error::custom("rational is not in lowest terms"));
        }
        Ok(r)
    }
}
