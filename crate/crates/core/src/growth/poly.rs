//! Dense integer polynomials in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Coefficients in increasing degree, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![BigInt::from(c)])
    }

    pub fn monomial(degree: usize, c: i64) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = BigInt::from(c);
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `[n] = 1 + t + ... + t^(n-1)`; `[0] = 0`.
    pub fn bracket(n: usize) -> Self {
        Self::new(vec![BigInt::one(); n])
    }

    pub fn bracket_product(ns: &[usize]) -> Self {
        ns.iter()
            .fold(Self::one(), |acc, &n| &acc * &Self::bracket(n))
    }

    /// The `n`-th cyclotomic polynomial, by exact division of `t^n - 1`.
    pub fn cyclotomic(n: usize) -> Self {
        assert!(n >= 1);
        let mut p = Self::monomial(n, 1) - Self::one();
        for d in 1..n {
            if n.is_multiple_of(d) {
                p = p
                    .div_exact(&Self::cyclotomic(d))
                    .expect("divisor of t^n - 1");
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `deg 0 = None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiply by `t^d`.
    pub fn shift(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Euclidean division by a divisor whose leading coefficient is `+-1`.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let lead = divisor.leading()?;
        if !lead.abs().is_one() {
            return None;
        }
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * t + BigRational::from_integer(c.clone())
            })
    }

    /// First `n` coefficients of the power series `self / den`. Requires
    /// `den(0) = +-1` so the expansion stays integral.
    pub fn series_div(&self, den: &Self, n: usize) -> Option<Vec<BigInt>> {
        let d0 = den.coeffs.first()?;
        if !d0.abs().is_one() {
            return None;
        }
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.coeff(i);
            for j in 1..=i.min(den.coeffs.len().saturating_sub(1)) {
                acc -= &den.coeffs[j] * &out[i - j];
            }
            out.push(acc * d0);
        }
        Some(out)
    }

    /// Coefficients as `i64` when they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: Self) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
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
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;

            fn $method(self, rhs: Self) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{abs}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{abs}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as an array of decimal coefficient strings, lowest degree
/// first, so arbitrarily large values survive JSON round trips.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}
