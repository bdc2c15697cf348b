//! Truncated q-expansion arithmetic over exact rational coefficients.
//!
//! A [`QExpansion`] stores the coefficients `a_0..a_prec` of a q-series with
//! exact rational entries. Arithmetic is exact; binary operations truncate to
//! the minimum precision of the operands. Reading a coefficient beyond the
//! stored precision is a hard error, never a silent zero.
//!
//! [`QExpansion::eval`] sums the series at a point of the upper half-plane in
//! floating point and reports an estimated tail for the dropped terms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Errors from q-expansion evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QexpError {
    /// `eval` was called at a point outside the upper half-plane.
    #[error("evaluation requires Im(tau) > 0, got Im(tau) = {0}")]
    NonpositiveImaginaryPart(f64),
}

/// A truncated q-series with exact rational coefficients `a_0..a_prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    coeffs: Vec<BigRational>,
}

/// Value of a series at a point, together with an estimated bound for the
/// truncated tail `sum_{n > prec} a_n q^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Estimated tail, extrapolated from the crude growth bound
    /// `|a_n| <= C * n^k` fitted to the known coefficients.
    pub tail_estimate: f64,
}

impl QExpansion {
    /// Build a series from its coefficient list `a_0..a_prec`.
    ///
    /// Panics if `coeffs` is empty (a series knows at least `a_0`).
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a QExpansion needs at least a_0");
        QExpansion { coeffs }
    }

    /// The zero series known to precision `prec`.
    pub fn zero(prec: usize) -> Self {
        QExpansion {
            coeffs: vec![BigRational::zero(); prec + 1],
        }
    }

    /// The constant series 1 known to precision `prec`.
    pub fn one(prec: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); prec + 1];
        coeffs[0] = BigRational::one();
        QExpansion { coeffs }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        QExpansion::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Number of known coefficients minus one: `a_0..a_prec` are stored.
    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The coefficient `a_n`.
    ///
    /// Panics when `n` exceeds the stored precision; truncated series never
    /// pretend to know coefficients they do not have.
    pub fn coeff(&self, n: usize) -> &BigRational {
        match self.coeffs.get(n) {
            Some(c) => c,
            None => panic!(
                "coefficient a_{} requested, but series is only known to precision {}",
                n,
                self.prec()
            ),
        }
    }

    /// The coefficient `a_n`, or `None` beyond the stored precision.
    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    /// All stored coefficients `a_0..a_prec`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Shorten the series to precision `prec`.
    ///
    /// Panics if `prec` exceeds the stored precision.
    pub fn truncate(&self, prec: usize) -> Self {
        assert!(
            prec <= self.prec(),
            "cannot extend a series from precision {} to {}",
            self.prec(),
            prec
        );
        QExpansion {
            coeffs: self.coeffs[..=prec].to_vec(),
        }
    }

    /// Multiply every coefficient by an exact rational scalar.
    pub fn scale(&self, s: &BigRational) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiply by `q^e`, dropping coefficients past the precision. The
    /// precision is preserved; the top `e` coefficients fall off the end.
    pub fn shift_up(&self, e: usize) -> Self {
        let prec = self.prec();
        let mut coeffs = vec![BigRational::zero(); prec + 1];
        for n in 0..=prec.saturating_sub(e) {
            coeffs[n + e] = self.coeffs[n].clone();
        }
        QExpansion { coeffs }
    }

    /// Raise to a nonnegative integer power by binary exponentiation.
    /// Precision is preserved.
    pub fn pow(&self, e: u32) -> Self {
        let prec = self.prec();
        if e == 0 {
            return QExpansion::one(prec);
        }
        let mut result = QExpansion::one(prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluate `sum_{n=0}^{prec} a_n e^{2 pi i n tau}` at a point of the
    /// upper half-plane, for a series regarded as a weight-`k` form.
    ///
    /// The weight only enters the tail estimate: the dropped terms are
    /// modeled as `|a_n| <= C n^k` with `C` fitted to the known coefficients.
    pub fn eval(&self, weight: i64, tau: Complex64) -> Result<EvalResult, QexpError> {
        if tau.im <= 0.0 {
            return Err(QexpError::NonpositiveImaginaryPart(tau.im));
        }
        let two_pi_i_tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau;
        let w = two_pi_i_tau.exp();
        let prec = self.prec();
        let mut acc = rational_to_f64(&self.coeffs[prec]) * Complex64::new(1.0, 0.0);
        for n in (0..prec).rev() {
            acc = acc * w + rational_to_f64(&self.coeffs[n]);
        }
        let tail = self.tail_estimate(weight, tau.im);
        Ok(EvalResult {
            value: acc,
            tail_estimate: tail,
        })
    }

    /// Estimated bound on `|sum_{n > prec} a_n e^{2 pi i n tau}|` from the
    /// fitted growth constant. Zero for the zero series.
    fn tail_estimate(&self, weight: i64, im_tau: f64) -> f64 {
        let k = weight.max(0) as f64;
        let mut c: f64 = 0.0;
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            if !a.is_zero() {
                let mag = rational_to_f64(&a.abs());
                c = c.max(mag / (n as f64).powf(k));
            }
        }
        if c == 0.0 {
            return 0.0;
        }
        let x = (-2.0 * std::f64::consts::PI * im_tau).exp();
        let mut sum = 0.0;
        let mut n = self.prec() + 1;
        // x < 1 strictly, so the terms decay geometrically past n ~ k/(2 pi v).
        for _ in 0..100_000 {
            let term = c * (n as f64).powf(k) * x.powi(n as i32);
            sum += term;
            if term < sum * 1e-30 || term < 1e-300 {
                break;
            }
            n += 1;
        }
        sum
    }
}

/// Lossy conversion used only at the floating-point evaluation boundary.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of separately converted parts; only
        // reachable for magnitudes far outside f64 range.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Add for &QExpansion {
    type Output = QExpansion;

    fn add(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        QExpansion {
            coeffs: (0..=prec)
                .map(|n| &self.coeffs[n] + &rhs.coeffs[n])
                .collect(),
        }
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;

    fn sub(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        QExpansion {
            coeffs: (0..=prec)
                .map(|n| &self.coeffs[n] - &rhs.coeffs[n])
                .collect(),
        }
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;

    fn neg(self) -> QExpansion {
        QExpansion {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;

    /// Truncated Cauchy product to the shared precision.
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        let mut coeffs = vec![BigRational::zero(); prec + 1];
        for i in 0..=prec {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(prec - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        QExpansion { coeffs }
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{c}*q^{n}")?;
                first = false;
            } else {
                write!(f, " + {c}*q^{n}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec() + 1)
    }
}
