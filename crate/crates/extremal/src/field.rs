//! Scalar fields: the rationals and odd prime fields with a runtime modulus.
//!
//! All linear algebra in this crate is exact. The two scalar families are
//! [`num_rational::BigRational`] and [`Fp`]; both implement the [`Field`]
//! trait, and everything downstream is generic over it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// Which field scalars live in. Carried at runtime because the prime-field
/// modulus is a program input, not a type parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit in 31 bits")]
    ModulusTooLarge(u64),
    #[error("mixed field specs {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("cannot parse {0:?} as an element of {1}")]
    Parse(String, FieldSpec),
    #[error("unknown field {0:?}; expected Q or F<p> with p an odd prime")]
    UnknownSpec(String),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Validates the modulus: odd, prime, and small enough that products of
    /// two reduced values fit in `i64`.
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if p == 2 {
            return Err(FieldError::CharTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    /// Parses a field name: `Q`, `F5`, or `GF(5)` (case-insensitive).
    pub fn parse_name(name: &str) -> Result<Self, FieldError> {
        let s = name.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = if let Some(rest) = s.strip_prefix('F').or_else(|| s.strip_prefix('f')) {
            rest
        } else {
            let lower = s.to_ascii_lowercase();
            match lower.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')) {
                Some(inner) => return Self::parse_modulus(inner, name),
                None => return Err(FieldError::UnknownSpec(name.to_string())),
            }
        };
        Self::parse_modulus(digits, name)
    }

    fn parse_modulus(digits: &str, original: &str) -> Result<Self, FieldError> {
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| FieldError::UnknownSpec(original.to_string()))?;
        Self::prime_field(p)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// Exact field scalar.
///
/// `int` builds a spec-less integer literal (for `Fp` a value that has not
/// adopted a modulus yet); binary operations unify the literal with the other
/// operand. Literals must be pushed through [`Field::canonical`] before they
/// are stored anywhere long-lived, otherwise `is_zero` can disagree with the
/// intended field. All constructors in this crate (matrices, parameter sets,
/// report rows) canonicalize on entry.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + 'static
{
    /// The image of the integer `n` in the field described by `spec`.
    fn embed(spec: FieldSpec, n: i64) -> Self;

    /// A spec-less integer literal.
    fn int(n: i64) -> Self;

    /// Reduces the value into the field described by `spec`.
    fn canonical(self, spec: FieldSpec) -> Self;

    /// The field this value has committed to, if any.
    fn spec(&self) -> Option<FieldSpec>;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError>;

    fn sample<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R) -> Self;

    fn sample_nonzero<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R) -> Self {
        loop {
            let v = Self::sample(spec, rng);
            if !v.is_zero() {
                return v;
            }
        }
    }
}

/// `base^exp` with `inv` for negative exponents.
pub fn power<K: Field>(base: &K, exp: i64) -> K {
    let positive = if exp >= 0 {
        base.clone()
    } else {
        base.inv().expect("negative power of zero")
    };
    let mut acc = K::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * positive.clone();
    }
    acc
}

impl Field for BigRational {
    fn embed(spec: FieldSpec, n: i64) -> Self {
        debug_assert_eq!(spec, FieldSpec::Rationals);
        BigRational::from_integer(BigInt::from(n))
    }

    fn int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn canonical(self, spec: FieldSpec) -> Self {
        debug_assert_eq!(spec, FieldSpec::Rationals);
        self
    }

    fn spec(&self) -> Option<FieldSpec> {
        Some(FieldSpec::Rationals)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        BigRational::from_str(text.trim())
            .map_err(|_| FieldError::Parse(text.to_string(), spec))
    }

    fn sample<R: Rng + ?Sized>(_spec: FieldSpec, rng: &mut R) -> Self {
        let numer = rng.gen_range(-9i64..=9);
        let denom = rng.gen_range(1i64..=4);
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
}

/// Element of a prime field F_p, p an odd prime below 2^31.
///
/// `modulus == 0` marks an integer literal that has not adopted a modulus;
/// arithmetic against a committed value reduces the literal first. Committed
/// values are stored reduced into `0..p`.
#[derive(Debug, Clone, Copy)]
pub struct Fp {
    value: i64,
    modulus: u64,
}

impl Fp {
    fn reduced(value: i64, modulus: u64) -> Self {
        if modulus == 0 {
            return Fp { value, modulus: 0 };
        }
        let m = modulus as i64;
        let mut v = value % m;
        if v < 0 {
            v += m;
        }
        Fp { value: v, modulus }
    }

    fn unify(a: Fp, b: Fp) -> (Fp, Fp) {
        match (a.modulus, b.modulus) {
            (0, 0) => (a, b),
            (0, m) => (Fp::reduced(a.value, m), b),
            (_, 0) => (a, Fp::reduced(b.value, a.modulus)),
            (m, n) if m == n => (a, b),
            (m, n) => panic!("arithmetic across F{m} and F{n}"),
        }
    }

    /// Reduced representative in `0..p`, or the raw literal value.
    pub fn residue(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

fn mod_inv(a: i64, p: i64) -> Option<i64> {
    if a % p == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    let mut t = t0 % p;
    if t < 0 {
        t += p;
    }
    Some(t)
}

impl PartialEq for Fp {
    /// Unifying comparison: a literal equals its image in the other operand's
    /// field. Committed values from different fields are never equal.
    fn eq(&self, other: &Self) -> bool {
        match (self.modulus, other.modulus) {
            (0, 0) => self.value == other.value,
            (0, m) => Fp::reduced(self.value, m).value == other.value,
            (_, 0) => Fp::reduced(other.value, self.modulus).value == self.value,
            (m, n) => m == n && self.value == other.value,
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b) = Fp::unify(self, rhs);
        if a.modulus == 0 {
            Fp {
                value: a.value.checked_add(b.value).expect("literal overflow"),
                modulus: 0,
            }
        } else {
            Fp::reduced(a.value + b.value, a.modulus)
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let (a, b) = Fp::unify(self, rhs);
        if a.modulus == 0 {
            Fp {
                value: a.value.checked_sub(b.value).expect("literal overflow"),
                modulus: 0,
            }
        } else {
            Fp::reduced(a.value - b.value, a.modulus)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b) = Fp::unify(self, rhs);
        if a.modulus == 0 {
            Fp {
                value: a.value.checked_mul(b.value).expect("literal overflow"),
                modulus: 0,
            }
        } else {
            let m = a.modulus as i64;
            // reduced values are below 2^31, so the product fits in i64
            Fp::reduced((a.value * b.value) % m, a.modulus)
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let (a, b) = Fp::unify(self, rhs);
        let inv = b.inv().expect("division by zero");
        a * inv
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            Fp {
                value: -self.value,
                modulus: 0,
            }
        } else {
            Fp::reduced(-self.value, self.modulus)
        }
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for Fp {
    fn embed(spec: FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::PrimeField(p) => Fp::reduced(n, p),
            FieldSpec::Rationals => panic!("rational spec for a prime-field scalar"),
        }
    }

    fn int(n: i64) -> Self {
        Fp {
            value: n,
            modulus: 0,
        }
    }

    fn canonical(self, spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::PrimeField(p) => {
                assert!(
                    self.modulus == 0 || self.modulus == p,
                    "value from F{} canonicalized into F{p}",
                    self.modulus
                );
                Fp::reduced(self.value, p)
            }
            FieldSpec::Rationals => panic!("rational spec for a prime-field scalar"),
        }
    }

    fn spec(&self) -> Option<FieldSpec> {
        if self.modulus == 0 {
            None
        } else {
            Some(FieldSpec::PrimeField(self.modulus))
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.modulus == 0 {
            match self.value {
                0 => None,
                1 | -1 => Some(*self),
                v => panic!("inverse of uncommitted literal {v}; canonicalize first"),
            }
        } else {
            mod_inv(self.value, self.modulus as i64).map(|t| Fp {
                value: t,
                modulus: self.modulus,
            })
        }
    }

    fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        let p = match spec {
            FieldSpec::PrimeField(p) => p,
            FieldSpec::Rationals => panic!("rational spec for a prime-field scalar"),
        };
        let err = || FieldError::Parse(text.to_string(), spec);
        let s = text.trim();
        let (numer_text, denom_text) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer: i64 = numer_text.trim().parse().map_err(|_| err())?;
        let value = Fp::reduced(numer, p);
        match denom_text {
            None => Ok(value),
            Some(d) => {
                let denom: i64 = d.trim().parse().map_err(|_| err())?;
                let denom = Fp::reduced(denom, p);
                let inv = denom.inv().ok_or_else(err)?;
                Ok(value * inv)
            }
        }
    }

    fn sample<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R) -> Self {
        match spec {
            FieldSpec::PrimeField(p) => Fp {
                value: rng.gen_range(0..p) as i64,
                modulus: p,
            },
            FieldSpec::Rationals => panic!("rational spec for a prime-field scalar"),
        }
    }
}
