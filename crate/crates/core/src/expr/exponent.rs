use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedMul, One, Signed, Zero};

/// Small exact rational used for exponents.
pub type Q = Ratio<i64>;

/// An exponent of the form `constant + linear*n + inverse/n`, where `n` is
/// the designated exponent parameter.
///
/// This covers the integer powers, the half-integer powers of scaling
/// ansätze and the `n`-dependent powers `n`, `n - 1`, `1/(2n)` that arise
/// in the power-law equation and its reductions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    constant: Q,
    linear: Q,
    inverse: Q,
}

impl Exponent {
    pub const fn new(constant: Q, linear: Q, inverse: Q) -> Self {
        Exponent {
            constant,
            linear,
            inverse,
        }
    }

    pub fn int(k: i64) -> Self {
        Self::constant(Q::from_integer(k))
    }

    pub fn constant(c: Q) -> Self {
        Exponent::new(c, Q::zero(), Q::zero())
    }

    /// The exponent `n`.
    pub fn n() -> Self {
        Exponent::new(Q::zero(), Q::one(), Q::zero())
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn constant_part(&self) -> Q {
        self.constant
    }

    pub fn linear_part(&self) -> Q {
        self.linear
    }

    pub fn inverse_part(&self) -> Q {
        self.inverse
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_zero() && self.inverse.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.constant.is_one() && self.linear.is_zero() && self.inverse.is_zero()
    }

    /// True when the exponent does not involve `n`.
    pub fn is_constant(&self) -> bool {
        self.linear.is_zero() && self.inverse.is_zero()
    }

    /// The integer value, if the exponent is an integer constant.
    pub fn as_integer(&self) -> Option<i64> {
        (self.is_constant() && self.constant.is_integer()).then(|| self.constant.to_integer())
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.is_constant().then_some(self.constant)
    }

    /// Splits off the integer part of the constant term: `self = k + rest`.
    pub fn split_integer(&self) -> (i64, Exponent) {
        let k = self.constant.trunc().to_integer();
        (
            k,
            Exponent::new(self.constant - Q::from_integer(k), self.linear, self.inverse),
        )
    }

    /// Product of two exponents; `None` if the result leaves the
    /// `{1, n, 1/n}` span (an `n^2` or `n^-2` term) or overflows.
    pub fn checked_mul(&self, other: &Exponent) -> Option<Exponent> {
        let (a0, a1, am) = (self.constant, self.linear, self.inverse);
        let (b0, b1, bm) = (other.constant, other.linear, other.inverse);
        if !(a1 * b1).is_zero() || !(am * bm).is_zero() {
            return None;
        }
        // n * (1/n) terms fold into the constant
        let constant = a0.checked_mul(&b0)? + a1.checked_mul(&bm)? + am.checked_mul(&b1)?;
        let linear = a0.checked_mul(&b1)? + a1.checked_mul(&b0)?;
        let inverse = a0.checked_mul(&bm)? + am.checked_mul(&b0)?;
        Some(Exponent::new(constant, linear, inverse))
    }

    /// Value of the exponent once `n` is fixed.
    pub fn eval_at(&self, n: Q) -> Option<Q> {
        if n.is_zero() && !self.inverse.is_zero() {
            return None;
        }
        let inv = if self.inverse.is_zero() {
            Q::zero()
        } else {
            self.inverse / n
        };
        Some(self.constant + self.linear * n + inv)
    }

    pub fn is_negative_constant(&self) -> bool {
        self.is_constant() && self.constant.is_negative()
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent::new(
            self.constant + o.constant,
            self.linear + o.linear,
            self.inverse + o.inverse,
        )
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        self + (-o)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent::new(-self.constant, -self.linear, -self.inverse)
    }
}

impl From<i64> for Exponent {
    fn from(k: i64) -> Self {
        Exponent::int(k)
    }
}

fn write_q(f: &mut fmt::Formatter<'_>, q: Q) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Renders in the model-file expression syntax, e.g. `n - 1`, `-1/2`,
/// `1/2*n^(-1)`.
impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(Q, &str)> = Vec::new();
        if !self.linear.is_zero() {
            parts.push((self.linear, "n"));
        }
        if !self.inverse.is_zero() {
            parts.push((self.inverse, "n^(-1)"));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push((self.constant, ""));
        }
        for (i, (q, atom)) in parts.iter().enumerate() {
            let mag = q.abs();
            if i == 0 {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else if q.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if atom.is_empty() {
                write_q(f, mag)?;
            } else if mag.is_one() {
                f.write_str(atom)?;
            } else {
                write_q(f, mag)?;
                write!(f, "*{atom}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    #[test]
    fn power_of_power_with_inverse_n() {
        // (t^(-1/(2n)))^n = t^(-1/2)
        let e = Exponent::new(Q::zero(), Q::zero(), q(-1, 2));
        assert_eq!(e.checked_mul(&Exponent::n()), Some(Exponent::constant(q(-1, 2))));
        // (t^(-1/(2n)))^(n-1) = t^(-1/2 + 1/(2n))
        let nm1 = Exponent::n() - Exponent::one();
        assert_eq!(e.checked_mul(&nm1), Some(Exponent::new(q(-1, 2), Q::zero(), q(1, 2))));
        assert_eq!(Exponent::n().checked_mul(&Exponent::n()), None);
    }

    #[test]
    fn integer_detection_and_split() {
        assert_eq!(Exponent::int(3).as_integer(), Some(3));
        assert_eq!(Exponent::n().as_integer(), None);
        let e = Exponent::new(q(3, 2), Q::one(), Q::zero());
        let (k, rest) = e.split_integer();
        assert_eq!(k, 1);
        assert_eq!(rest, Exponent::new(q(1, 2), Q::one(), Q::zero()));
        assert_eq!(e.eval_at(Q::from_integer(2)), Some(q(7, 2)));
    }

    #[test]
    fn display() {
        assert_eq!((Exponent::n() - Exponent::one()).to_string(), "n - 1");
        assert_eq!(Exponent::constant(q(-1, 2)).to_string(), "-1/2");
        assert_eq!(Exponent::new(Q::zero(), Q::zero(), q(-1, 2)).to_string(), "-1/2*n^(-1)");
    }
}
