//! Scalar arithmetic for machine entries.
//!
//! Two backends are supported. The exact backend works in ℚ(√2, i): every
//! value is `(a + b√2) + (c + d√2)i` with arbitrary-precision rationals, so
//! Hadamard-style amplitudes such as `1/√2` are representable without
//! rounding. The float backend uses `Complex64`.
//!
//! Algorithms are generic over [`Field`]. The dynamically tagged [`Scalar`]
//! is what the file parser produces before a backend is committed to.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arithmetic backend of a scalar, matrix or machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!(
                "unknown backend `{other}` (expected exact or float)"
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),
    #[error("invalid {backend} literal `{literal}`: {reason}")]
    Literal {
        backend: Backend,
        literal: String,
        reason: String,
    },
}

macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}

// ---------------------------------------------------------------------------
// ℚ(√2)
// ---------------------------------------------------------------------------

/// An element `rational + radical·√2` of ℚ(√2).
///
/// Both coefficients are `BigRational`, which keeps them in lowest terms with
/// a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactReal {
    rational: BigRational,
    radical: BigRational,
}

impl ExactReal {
    pub fn new(rational: BigRational, radical: BigRational) -> Self {
        ExactReal { rational, radical }
    }

    /// `p/q + (r/s)√2` from machine integers. Panics if a denominator is zero.
    pub fn from_ratios(rational: (i64, i64), radical: (i64, i64)) -> Self {
        ExactReal {
            rational: ratio(rational.0, rational.1),
            radical: ratio(radical.0, radical.1),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        ExactReal::from_ratios((n, 1), (0, 1))
    }

    pub fn sqrt2() -> Self {
        ExactReal::from_ratios((0, 1), (1, 1))
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical(&self) -> &BigRational {
        &self.radical
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    /// Sign of the value compared to zero, decided exactly.
    pub fn sign(&self) -> Ordering {
        let a = &self.rational;
        let b = &self.radical;
        let sa = sign_of(a);
        let sb = sign_of(b);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: the term with the larger square wins. a² = 2b² is
        // impossible for rationals unless both vanish.
        let a2 = a * a;
        let b2 = b * b * BigRational::from_integer(BigInt::from(2));
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    /// Galois conjugate `a - b√2`.
    pub fn galois_conj(&self) -> Self {
        ExactReal {
            rational: self.rational.clone(),
            radical: -self.radical.clone(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a + b√2)⁻¹ = (a - b√2) / (a² - 2b²)
        let two = BigRational::from_integer(BigInt::from(2));
        let norm = &self.rational * &self.rational - &self.radical * &self.radical * two;
        Some(ExactReal {
            rational: &self.rational / &norm,
            radical: -(&self.radical / &norm),
        })
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.rational) + rat_to_f64(&self.radical) * std::f64::consts::SQRT_2
    }

    /// Human-oriented rendering, e.g. `5/8 + 1/(2√2)` or `-3√2/5`.
    pub fn pretty(&self) -> String {
        let a = &self.rational;
        let b = &self.radical;
        if b.is_zero() {
            return rat_pretty(a);
        }
        let radical_part = radical_pretty(&b.abs());
        if a.is_zero() {
            return if b.is_negative() {
                format!("-{radical_part}")
            } else {
                radical_part
            };
        }
        let sep = if b.is_negative() { " - " } else { " + " };
        format!("{}{sep}{radical_part}", rat_pretty(a))
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back on a scaled division for values outside the f64 fast path.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn rat_pretty(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `q·√2` for positive rational `q`.
fn radical_pretty(q: &BigRational) -> String {
    let two = BigInt::from(2);
    let (p, d) = (q.numer(), q.denom());
    // p√2/d with d even is p/((d/2)√2); prefer that form for unit numerators.
    if p.is_one() && (d % &two).is_zero() {
        let k = d / &two;
        return if k.is_one() {
            "1/√2".to_string()
        } else {
            format!("1/({k}√2)")
        };
    }
    match (p.is_one(), d.is_one()) {
        (true, true) => "√2".to_string(),
        (false, true) => format!("{p}√2"),
        (true, false) => format!("√2/{d}"),
        (false, false) => format!("{p}√2/{d}"),
    }
}

impl<'b> Add<&'b ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &'b ExactReal) -> ExactReal {
        ExactReal {
            rational: &self.rational + &rhs.rational,
            radical: &self.radical + &rhs.radical,
        }
    }
}

impl<'b> Sub<&'b ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &'b ExactReal) -> ExactReal {
        ExactReal {
            rational: &self.rational - &rhs.rational,
            radical: &self.radical - &rhs.radical,
        }
    }
}

impl<'b> Mul<&'b ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &'b ExactReal) -> ExactReal {
        let (a, b) = (&self.rational, &self.radical);
        let (c, d) = (&rhs.rational, &rhs.radical);
        let mut bd = b * d;
        if !bd.is_zero() {
            bd = &bd + &bd;
        }
        ExactReal {
            rational: a * c + bd,
            radical: a * d + b * c,
        }
    }
}

forward_binop!(ExactReal, Add, add);
forward_binop!(ExactReal, Sub, sub);
forward_binop!(ExactReal, Mul, mul);

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal {
            rational: -self.rational,
            radical: -self.radical,
        }
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -self.clone()
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).sign())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rational.numer(), self.rational.denom())?;
        if !self.radical.is_zero() {
            write!(f, " + {}/{} r2", self.radical.numer(), self.radical.denom())?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// ℚ(√2, i)
// ---------------------------------------------------------------------------

/// An element `re + im·i` of ℚ(√2, i) with `re`, `im` in ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactComplex {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl ExactComplex {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: ExactReal) -> Self {
        ExactComplex {
            re,
            im: ExactReal::from_integer(0),
        }
    }

    /// Shorthand for a real value `p/q + (r/s)√2`.
    pub fn from_ratios(rational: (i64, i64), radical: (i64, i64)) -> Self {
        ExactComplex::real(ExactReal::from_ratios(rational, radical))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactComplex::real(ExactReal::from_integer(n))
    }

    /// `1/√2`.
    pub fn inv_sqrt2() -> Self {
        ExactComplex::from_ratios((0, 1), (1, 2))
    }

    pub fn i() -> Self {
        ExactComplex::new(ExactReal::from_integer(0), ExactReal::from_integer(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sq(&self) -> ExactReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let scale = self.norm_sq().inv()?;
        Some(ExactComplex {
            re: &self.re * &scale,
            im: -(&self.im * &scale),
        })
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<'b> Add<&'b ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &'b ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'b> Sub<&'b ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &'b ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'b> Mul<&'b ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &'b ExactComplex) -> ExactComplex {
        // Most entries met in practice are real; skip the cross terms then.
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactComplex::real(&self.re * &rhs.re);
        }
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

forward_binop!(ExactComplex, Add, add);
forward_binop!(ExactComplex, Sub, sub);
forward_binop!(ExactComplex, Mul, mul);

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -self.clone()
    }
}

/// Literal form: `R`, `R + R i` or `R i`, where `R` is `p/q` or `p/q + p/q r2`.
impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{} i", self.im),
            (false, false) => write!(f, "{} + {} i", self.re, self.im),
        }
    }
}

impl FromStr for ExactComplex {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ScalarError::Literal {
            backend: Backend::Exact,
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let mut pos = 0;
        let first = parse_exact_real(&tokens, &mut pos).map_err(|r| err(&r))?;
        let value = match tokens.get(pos) {
            None => ExactComplex::real(first),
            Some(&"i") => {
                pos += 1;
                ExactComplex::new(ExactReal::from_integer(0), first)
            }
            Some(&"+") => {
                pos += 1;
                let second = parse_exact_real(&tokens, &mut pos).map_err(|r| err(&r))?;
                if tokens.get(pos) != Some(&"i") {
                    return Err(err("expected `i` after the imaginary part"));
                }
                pos += 1;
                ExactComplex::new(first, second)
            }
            Some(other) => return Err(err(&format!("unexpected token `{other}`"))),
        };
        if pos != tokens.len() {
            return Err(err("trailing tokens"));
        }
        Ok(value)
    }
}

fn parse_exact_real(tokens: &[&str], pos: &mut usize) -> Result<ExactReal, String> {
    let rational = parse_fraction(tokens.get(*pos).copied())?;
    *pos += 1;
    let mut radical = BigRational::zero();
    if tokens.get(*pos) == Some(&"+") && tokens.get(*pos + 2) == Some(&"r2") {
        radical = parse_fraction(tokens.get(*pos + 1).copied())?;
        *pos += 3;
    }
    Ok(ExactReal::new(rational, radical))
}

fn parse_fraction(token: Option<&str>) -> Result<BigRational, String> {
    let token = token.ok_or_else(|| "expected a fraction p/q".to_string())?;
    let (p, q) = token
        .split_once('/')
        .ok_or_else(|| format!("`{token}` is not of the form p/q"))?;
    let digits = p.strip_prefix('-').unwrap_or(p);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("numerator `{p}` is not a signed integer"));
    }
    if q.is_empty() || !q.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("denominator `{q}` is not a positive integer"));
    }
    let numer: BigInt = p.parse().map_err(|e| format!("{e}"))?;
    let denom: BigInt = q.parse().map_err(|e| format!("{e}"))?;
    if denom.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(BigRational::new(numer, denom))
}

/// Parses a float literal: `x`, `x + y i` or `y i` with decimal `x`, `y`.
pub fn parse_float_literal(s: &str) -> Result<Complex64, ScalarError> {
    let err = |reason: &str| ScalarError::Literal {
        backend: Backend::Float,
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    let number = |t: Option<&&str>| -> Result<f64, ScalarError> {
        let t = t.ok_or_else(|| err("expected a decimal number"))?;
        let v: f64 = t
            .parse()
            .map_err(|_| err(&format!("`{t}` is not decimal")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err("non-finite value"))
        }
    };
    let tokens: Vec<&str> = s.split_whitespace().collect();
    match tokens.len() {
        1 => Ok(Complex64::new(number(tokens.first())?, 0.0)),
        2 if tokens[1] == "i" => Ok(Complex64::new(0.0, number(tokens.first())?)),
        4 if tokens[1] == "+" && tokens[3] == "i" => Ok(Complex64::new(
            number(tokens.first())?,
            number(tokens.get(2))?,
        )),
        _ => Err(err("expected `x`, `x + y i` or `y i`")),
    }
}

/// Renders a float complex in the literal form accepted by [`parse_float_literal`].
pub fn format_float_literal(z: &Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{:?}", z.re),
        (true, false) => format!("{:?} i", z.im),
        (false, false) => format!("{:?} + {:?} i", z.re, z.im),
    }
}

/// Decimal rendering with 12 significant digits, trailing zeros dropped.
pub fn decimal12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}")
        .parse()
        .expect("scientific notation parses");
    format!("{rounded}")
}

// ---------------------------------------------------------------------------
// Backend-generic traits
// ---------------------------------------------------------------------------

/// Real values produced by a backend: probabilities, squared moduli.
pub trait RealScalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn to_f64(&self) -> f64;
    /// Exact equality in the exact backend; relative tolerance otherwise.
    fn approx_eq(&self, other: &Self, eps: f64) -> bool;
    /// Literal for machine-readable output.
    fn literal(&self) -> String;
    /// Human-readable form: radicals for exact values, 12 significant
    /// digits for floats.
    fn pretty(&self) -> String;
}

impl RealScalar for ExactReal {
    fn zero() -> Self {
        ExactReal::from_integer(0)
    }
    fn one() -> Self {
        ExactReal::from_integer(1)
    }
    fn to_f64(&self) -> f64 {
        ExactReal::to_f64(self)
    }
    fn approx_eq(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }
    fn literal(&self) -> String {
        self.to_string()
    }
    fn pretty(&self) -> String {
        ExactReal::pretty(self)
    }
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self - other).abs() <= eps * 1f64.max(self.abs()).max(other.abs())
    }
    fn literal(&self) -> String {
        format!("{self:?}")
    }
    fn pretty(&self) -> String {
        decimal12(*self)
    }
}

/// A field of complex scalars closed under conjugation.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type Real: RealScalar;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(r: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    fn norm_sq(&self) -> Self::Real;
    fn inv(&self) -> Option<Self>;
    /// True only for an exact zero (for floats, `0.0 + 0.0i`).
    fn is_zero(&self) -> bool;
    /// Approximate modulus, used for pivoting and tolerances.
    fn magnitude(&self) -> f64;
    fn to_complex64(&self) -> Complex64;
    fn approx_eq(&self, other: &Self, eps: f64) -> bool;
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError>;
    fn into_scalar(self) -> Scalar;
    /// The exact representation, for exact-only algorithms.
    fn as_exact(&self) -> Option<&ExactComplex> {
        None
    }
}

impl Field for ExactComplex {
    type Real = ExactReal;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        ExactComplex::from_integer(0)
    }
    fn one() -> Self {
        ExactComplex::from_integer(1)
    }
    fn from_real(r: ExactReal) -> Self {
        ExactComplex::real(r)
    }
    fn re(&self) -> ExactReal {
        self.re.clone()
    }
    fn im(&self) -> ExactReal {
        self.im.clone()
    }
    fn conj(&self) -> Self {
        ExactComplex::conj(self)
    }
    fn norm_sq(&self) -> ExactReal {
        ExactComplex::norm_sq(self)
    }
    fn inv(&self) -> Option<Self> {
        ExactComplex::inv(self)
    }
    fn is_zero(&self) -> bool {
        ExactComplex::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }
    fn to_complex64(&self) -> Complex64 {
        ExactComplex::to_complex64(self)
    }
    fn approx_eq(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Exact(x) => Ok(x),
            Scalar::Float(_) => Err(ScalarError::BackendMismatch(Backend::Exact, Backend::Float)),
        }
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }

    fn as_exact(&self) -> Option<&ExactComplex> {
        Some(self)
    }
}

impl Field for Complex64 {
    type Real = f64;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn norm_sq(&self) -> f64 {
        Complex64::norm_sqr(self)
    }
    fn inv(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self - other).norm() <= eps * 1f64.max(self.norm()).max(other.norm())
    }
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Float(x) => Ok(x),
            Scalar::Exact(_) => Err(ScalarError::BackendMismatch(Backend::Float, Backend::Exact)),
        }
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
}

// ---------------------------------------------------------------------------
// Dynamically tagged scalar
// ---------------------------------------------------------------------------

/// A scalar whose backend is known only at runtime.
///
/// Binary operations between different backends fail with
/// [`ScalarError::BackendMismatch`].
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn parse(literal: &str, backend: Backend) -> Result<Scalar, ScalarError> {
        match backend {
            Backend::Exact => literal.parse().map(Scalar::Exact),
            Backend::Float => parse_float_literal(literal).map(Scalar::Float),
        }
    }

    fn zip<R>(
        &self,
        other: &Scalar,
        exact: impl FnOnce(&ExactComplex, &ExactComplex) -> R,
        float: impl FnOnce(&Complex64, &Complex64) -> R,
    ) -> Result<R, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(exact(a, b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(float(a, b)),
            (a, b) => Err(ScalarError::BackendMismatch(a.backend(), b.backend())),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip(
            other,
            |a, b| Scalar::Exact(a + b),
            |a, b| Scalar::Float(a + b),
        )
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip(
            other,
            |a, b| Scalar::Exact(a - b),
            |a, b| Scalar::Float(a - b),
        )
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip(
            other,
            |a, b| Scalar::Exact(a * b),
            |a, b| Scalar::Float(a * b),
        )
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip(
            other,
            |a, b| b.inv().map(|inv| Scalar::Exact(a * inv)),
            |a, b| Field::inv(b).map(|inv| Scalar::Float(a * inv)),
        )?
        .ok_or(ScalarError::DivisionByZero)
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(x.conj()),
            Scalar::Float(x) => Scalar::Float(x.conj()),
        }
    }

    /// `x·conj(x)`, returned as a scalar with zero imaginary part.
    pub fn norm_sq(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(ExactComplex::real(x.norm_sq())),
            Scalar::Float(x) => Scalar::Float(Complex64::new(x.norm_sqr(), 0.0)),
        }
    }

    /// Converts an exact scalar to the float backend; floats pass through.
    pub fn to_float(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Float(x.to_complex64()),
            Scalar::Float(x) => Scalar::Float(*x),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(x) => write!(f, "{x}"),
            Scalar::Float(x) => f.write_str(&format_float_literal(x)),
        }
    }
}
