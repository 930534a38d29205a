use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A polynomial in the red-marker variable `y` with big-integer coefficients.
///
/// `coeffs[j]` is the coefficient of `y^j`; trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RedPolynomial {
    coeffs: Vec<BigInt>,
}

impl RedPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RedPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RedPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// `c * y^power`.
    pub fn monomial(c: BigInt, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Exact division. Returns `None` unless `divisor` divides `self` in `Z[y]`.
    pub fn exact_div(&self, divisor: &RedPolynomial) -> Option<RedPolynomial> {
        let dd = divisor.degree()?;
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree() else {
            return Some(Self::zero());
        };
        if top < dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); top - dd + 1];
        for shift in (0..=top - dd).rev() {
            let c = &rem[shift + dd];
            if c.is_zero() {
                continue;
            }
            if !(c % lead).is_zero() {
                return None;
            }
            let q = c / lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * d;
            }
            quot[shift] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }
}

impl Add for &RedPolynomial {
    type Output = RedPolynomial;
    fn add(self, rhs: &RedPolynomial) -> RedPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RedPolynomial::new((0..len).map(|i| self.coefficient(i) + rhs.coefficient(i)).collect())
    }
}

impl Sub for &RedPolynomial {
    type Output = RedPolynomial;
    fn sub(self, rhs: &RedPolynomial) -> RedPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RedPolynomial::new((0..len).map(|i| self.coefficient(i) - rhs.coefficient(i)).collect())
    }
}

impl Mul for &RedPolynomial {
    type Output = RedPolynomial;
    fn mul(self, rhs: &RedPolynomial) -> RedPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RedPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RedPolynomial::new(out)
    }
}

impl Neg for RedPolynomial {
    type Output = RedPolynomial;
    fn neg(self) -> RedPolynomial {
        RedPolynomial {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for RedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "y")?,
                _ => write!(f, "y^{j}")?,
            }
        }
        Ok(())
    }
}
