//! Exact integer primitives: Kronecker symbols, p-adic valuations, `p*`,
//! and the small modular helpers the other modules lean on.
//!
//! The symbol and valuation routines are generic over [`ExactInt`], so the
//! same code runs on `i64`, `i128` and `BigInt`.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("Kronecker symbol with zero denominator")]
    ZeroDenominator,
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("operation requires an odd prime, got {0}")]
    EvenPrime(String),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i64),
}

/// A value in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Self, ArithError> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(ArithError::BadSign(other)),
        }
    }

    /// Sign of a nonzero symbol value; `None` for zero.
    pub fn from_symbol(v: i8) -> Option<Self> {
        match v.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn pow(self, e: u32) -> Self {
        if e.is_multiple_of(2) {
            Sign::Plus
        } else {
            self
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = ArithError;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        Sign::from_i64(v)
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.as_i8() as i64
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

fn small<T: ExactInt>(v: u8) -> T {
    T::from_u8(v).expect("small constant fits every ExactInt")
}

/// The Kronecker symbol `(a/n)`, returning `-1`, `0` or `1`.
///
/// Completed to negative and even `n` in the standard way:
/// `(a/-1) = sign(a)` and `(a/2)` depends on `a mod 8`.
pub fn kronecker<T: ExactInt>(a: &T, n: &T) -> Result<i8, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    let two: T = small(2);
    let four: T = small(4);
    let eight: T = small(8);
    let three: T = small(3);
    let five: T = small(5);

    let mut result: i8 = 1;
    let mut a = a.clone();
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }

    let mut twos = 0u32;
    while n.is_even() {
        n = n / two.clone();
        twos += 1;
    }
    if twos > 0 {
        if a.is_even() {
            return Ok(0);
        }
        let r = a.mod_floor(&eight);
        if twos % 2 == 1 && (r == three || r == five) {
            result = -result;
        }
    }

    // Jacobi symbol for odd positive n.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a = a / two.clone();
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Convenience wrapper for machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> Result<i8, ArithError> {
    kronecker(&(a as i128), &(n as i128))
}

/// Largest `e` with `p^e | n`.
pub fn valuation<T: ExactInt>(n: &T, p: &T) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    check_prime(p)?;
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// `(-1/p)·p`, the discriminant of the quadratic field ramified only at `p`.
pub fn p_star<T: ExactInt>(p: &T) -> Result<T, ArithError> {
    check_prime(p)?;
    if p.is_even() {
        return Err(ArithError::EvenPrime(p.to_string()));
    }
    let minus_one = -T::one();
    match kronecker(&minus_one, p)? {
        1 => Ok(p.clone()),
        _ => Ok(-p.clone()),
    }
}

fn check_prime<T: ExactInt>(p: &T) -> Result<(), ArithError> {
    let ok = p.to_u64().map(is_prime).unwrap_or(false);
    if ok {
        Ok(())
    } else {
        Err(ArithError::NotPrime(p.to_string()))
    }
}

/// Trial-division primality; adequate for the desk-scale inputs used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is_p)| is_p.then_some(k as u64))
        .collect()
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.mod_floor(&(m as i128)) as u64)
}

pub fn mod_floor_i64(a: i64, m: u64) -> u64 {
    (a as i128).mod_floor(&(m as i128)) as u64
}

/// The smallest square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mod_pow(tt, 2, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_pow(b, 2, p);
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r.min(p - r))
}

/// Distinct prime factors, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn multiplicative_order(a: u64, m: u64, group_order: u64) -> u64 {
    let mut ord = group_order;
    for q in prime_factors(group_order) {
        while ord.is_multiple_of(q) && mod_pow(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}
