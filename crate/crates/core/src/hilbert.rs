//! Totally positive units of real quadratic fields and the search for an
//! auxiliary prime `q` making `χ_p · χ_q` trivial on them.
//!
//! General totally real fields enter only through a [`ResidueSymbolTable`]
//! of user-supplied signatures.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, kronecker_i64, Sign};
use crate::ExactInt;

/// Largest `d` accepted by [`fundamental_unit`].
pub const DISCRIMINANT_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("d = {0} must be a squarefree integer > 1")]
    BadDiscriminant(i64),
    #[error("d = {0} exceeds the bound {DISCRIMINANT_BOUND}")]
    BoundExceeded(u64),
    #[error("({a} + {b}√{d})/2 violates the parity rule a ≡ b·d mod 2")]
    Parity { d: String, a: String, b: String },
    #[error("({a} + {b}√{d})/2 has norm {norm}, not ±1")]
    NotAUnit { d: String, a: String, b: String, norm: String },
    #[error("units from Q(√{0}) and Q(√{1}) cannot be combined")]
    FieldMismatch(u64, u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{q} divides 2d for d = {d}")]
    Ramified { d: u64, q: u64 },
    #[error("{q} is inert in Q(√{d})")]
    Inert { d: u64, q: u64 },
    #[error("{r} is not a square root of {d} mod {q}")]
    BadRoot { d: u64, q: u64, r: u64 },
    #[error("unit reduces to 0 mod {0}")]
    VanishingResidue(u64),
    #[error("table row for {prime} has {got} signs, expected {expected}")]
    RaggedTable { prime: u64, got: usize, expected: usize },
    #[error("table lists prime {0} twice")]
    DuplicatePrime(u64),
    #[error("target has {got} entries, the unit basis has {expected}")]
    TargetLength { got: usize, expected: usize },
}

/// `Q(√d)` for squarefree `d > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealQuadField {
    d: u64,
}

impl RealQuadField {
    pub fn new(d: i64) -> Result<Self, HilbertError> {
        if d <= 1 || !arith::is_squarefree(d as u64) {
            return Err(HilbertError::BadDiscriminant(d));
        }
        Ok(RealQuadField { d: d as u64 })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Whether the ring of integers has basis `1, (1+√d)/2`.
    pub fn half_integral(&self) -> bool {
        self.d % 4 == 1
    }
}

impl fmt::Display for RealQuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{})", self.d)
    }
}

/// `(a + b√d)/2` with `a ≡ b·d mod 2` and norm `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldUnit<T> {
    d: u64,
    a: T,
    b: T,
}

fn int<T: ExactInt>(v: u64) -> T {
    T::from_u64(v).expect("fits the coefficient type")
}

impl<T: ExactInt> FieldUnit<T> {
    pub fn new(field: RealQuadField, a: T, b: T) -> Result<Self, HilbertError> {
        let d: T = int(field.d);
        let two: T = int(2);
        let show = || (field.d.to_string(), a.to_string(), b.to_string());
        if !(a.clone() - b.clone() * d.clone()).is_multiple_of(&two) {
            let (d, a, b) = show();
            return Err(HilbertError::Parity { d, a, b });
        }
        let num = a.clone() * a.clone() - d * b.clone() * b.clone();
        let four: T = int(4);
        if num != four.clone() && num != -four {
            let (d, a, b) = show();
            return Err(HilbertError::NotAUnit {
                d,
                a,
                b,
                norm: format!("{}/4", num),
            });
        }
        Ok(FieldUnit { d: field.d, a, b })
    }

    pub fn one(field: RealQuadField) -> Self {
        FieldUnit {
            d: field.d,
            a: int(2),
            b: T::zero(),
        }
    }

    pub fn field(&self) -> RealQuadField {
        RealQuadField { d: self.d }
    }

    /// Numerators `(a, b)` of `(a + b√d)/2`.
    pub fn numerators(&self) -> (&T, &T) {
        (&self.a, &self.b)
    }

    pub fn norm(&self) -> Sign {
        let d: T = int(self.d);
        let num = self.a.clone() * self.a.clone() - d * self.b.clone() * self.b.clone();
        if num.is_positive() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn conj(&self) -> Self {
        FieldUnit {
            d: self.d,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldUnit {
            d: self.d,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, HilbertError> {
        if self.d != other.d {
            return Err(HilbertError::FieldMismatch(self.d, other.d));
        }
        let d: T = int(self.d);
        let two: T = int(2);
        // (a + b√d)(c + e√d)/4 = ((ac + bed) + (ae + bc)√d)/4
        let a = (self.a.clone() * other.a.clone() + d * self.b.clone() * other.b.clone()) / two.clone();
        let b = (self.a.clone() * other.b.clone() + self.b.clone() * other.a.clone()) / two;
        Ok(FieldUnit { d: self.d, a, b })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldUnit::one(self.field());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same field");
            }
            base = base.try_mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Both real embeddings positive, decided exactly.
    pub fn is_totally_positive(&self) -> bool {
        self.a.is_positive() && self.norm() == Sign::Plus
    }

    /// The two real embeddings `(a ± b√d)/2`, in floating point. The
    /// smaller one is recovered from the norm to avoid cancellation.
    pub fn embeddings(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let s = (self.d as f64).sqrt();
        let n = self.norm().as_i8() as f64;
        if (a >= 0.0) == (b >= 0.0) {
            let big = (a + b * s) / 2.0;
            (big, n / big)
        } else {
            let big = (a - b * s) / 2.0;
            (n / big, big)
        }
    }
}

impl<T: ExactInt> Mul for &FieldUnit<T> {
    type Output = FieldUnit<T>;

    fn mul(self, rhs: &FieldUnit<T>) -> FieldUnit<T> {
        self.try_mul(rhs).expect("units from the same field")
    }
}

impl FieldUnit<BigInt> {
    /// Narrow to machine integers when the coefficients fit.
    pub fn to_i64(&self) -> Option<FieldUnit<i64>> {
        Some(FieldUnit {
            d: self.d,
            a: self.a.to_i64()?,
            b: self.b.to_i64()?,
        })
    }
}

impl<T: ExactInt> fmt::Display for FieldUnit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let two: T = int(2);
        if self.a.is_multiple_of(&two) && self.b.is_multiple_of(&two) {
            let (a, b) = (self.a.clone() / two.clone(), self.b.clone() / two);
            if b.is_negative() {
                write!(f, "{} - {}√{}", a, -b, self.d)
            } else {
                write!(f, "{} + {}√{}", a, b, self.d)
            }
        } else if self.b.is_negative() {
            write!(f, "({} - {}√{})/2", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "({} + {}√{})/2", self.a, self.b, self.d)
        }
    }
}

/// Smallest unit `> 1` of the ring of integers of `Q(√d)`.
///
/// Expands `ω = √d` or `(1+√d)/2` as a continued fraction
/// `(P + √d)/Q`; the first convergent `p/q` with `N(p - qω) = ±1` yields
/// the unit `p - q·ω̄`.
pub fn fundamental_unit(d: i64) -> Result<FieldUnit<BigInt>, HilbertError> {
    let field = RealQuadField::new(d)?;
    if field.d > DISCRIMINANT_BOUND {
        return Err(HilbertError::BoundExceeded(field.d));
    }
    let d = field.d as i64;
    let root = (d as u64).sqrt() as i64;
    let (trace, norm_omega) = if field.half_integral() {
        (1i64, (1 - d) / 4)
    } else {
        (0, -d)
    };
    let (mut big_p, mut big_q) = if field.half_integral() { (1i64, 2i64) } else { (0, 1) };

    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    loop {
        debug_assert!(big_q > 0 && (d - big_p * big_p) % big_q == 0);
        let a = (big_p + root).div_euclid(big_q);
        let p_next = &p_cur * a + &p_prev;
        let q_next = &q_cur * a + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);

        // N(p - qω) = p² - pq·Tr ω + q²·N ω
        let n = &p_cur * &p_cur - &p_cur * &q_cur * trace + &q_cur * &q_cur * norm_omega;
        if n.abs().is_one() {
            let two = BigInt::from(2);
            let (a, b) = if field.half_integral() {
                (&p_cur * &two - &q_cur, q_cur.clone())
            } else {
                (&p_cur * &two, &q_cur * &two)
            };
            return FieldUnit::new(field, a, b);
        }

        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
    }
}

/// Generator of the totally positive units modulo squares of units.
pub fn totally_positive_generator(d: i64) -> Result<FieldUnit<BigInt>, HilbertError> {
    let eps = fundamental_unit(d)?;
    Ok(match eps.norm() {
        Sign::Minus => eps.pow(2),
        Sign::Plus if eps.is_totally_positive() => eps,
        Sign::Plus => eps.neg(),
    })
}

/// Value at the unit `u` of the quadratic residue character of the
/// degree-1 prime above `q` where `√d ↦ root`.
///
/// Without `root` the smallest square root of `d` mod `q` is used.
pub fn chi_on_unit<T: ExactInt>(
    field: RealQuadField,
    q: u64,
    root: Option<u64>,
    u: &FieldUnit<T>,
) -> Result<Sign, HilbertError> {
    if u.d != field.d {
        return Err(HilbertError::FieldMismatch(field.d, u.d));
    }
    if q == 2 || !arith::is_prime(q) {
        return Err(HilbertError::NotOddPrime(q));
    }
    let d = field.d;
    let dm = d % q;
    if dm == 0 {
        return Err(HilbertError::Ramified { d, q });
    }
    let r = match root {
        Some(r) => {
            let r = r % q;
            if (r as u128 * r as u128 % q as u128) as u64 != dm {
                return Err(HilbertError::BadRoot { d, q, r });
            }
            r
        }
        None => arith::sqrt_mod(dm, q).ok_or(HilbertError::Inert { d, q })?,
    };
    let modq: T = int(q);
    let reduce = |x: &T| x.mod_floor(&modq).to_u64().expect("residue fits u64") as u128;
    let (a, b) = (reduce(&u.a), reduce(&u.b));
    let half = arith::mod_inv(2, q).expect("q odd") as u128;
    let q128 = q as u128;
    let residue = (a + b * r as u128 % q128) % q128 * half % q128;
    if residue == 0 {
        return Err(HilbertError::VanishingResidue(q));
    }
    let symbol = kronecker_i64(residue as i64, q as i64).expect("q odd prime");
    Ok(Sign::from_symbol(symbol).expect("residue is a unit"))
}

/// Values of a quadratic character on a basis of totally positive units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignatureVector(pub Vec<Sign>);

impl SignatureVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entrywise product.
    pub fn times(&self, other: &SignatureVector) -> SignatureVector {
        SignatureVector(self.0.iter().zip(&other.0).map(|(a, b)| *a * *b).collect())
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An auxiliary prime is needed iff the character is nontrivial on some
/// totally positive unit.
pub fn needs_auxiliary(sig: &SignatureVector) -> bool {
    sig.0.contains(&Sign::Minus)
}

/// Anything that can report the signature of primes, in increasing order.
pub trait SignatureSource {
    fn basis_len(&self) -> usize;

    /// Candidate primes `≤ bound` with their signatures, ascending.
    fn signatures(&self, bound: u64) -> Vec<(u64, SignatureVector)>;
}

/// Degree-1 primes of a real quadratic field, evaluated on the totally
/// positive generator with the default root choice.
#[derive(Debug, Clone)]
pub struct QuadSignatures {
    field: RealQuadField,
    generator: FieldUnit<BigInt>,
}

impl QuadSignatures {
    pub fn new(field: RealQuadField) -> Result<Self, HilbertError> {
        Ok(QuadSignatures {
            field,
            generator: totally_positive_generator(field.d as i64)?,
        })
    }

    pub fn generator(&self) -> &FieldUnit<BigInt> {
        &self.generator
    }

    pub fn signature(&self, q: u64, root: Option<u64>) -> Result<SignatureVector, HilbertError> {
        Ok(SignatureVector(vec![chi_on_unit(self.field, q, root, &self.generator)?]))
    }
}

impl SignatureSource for QuadSignatures {
    fn basis_len(&self) -> usize {
        1
    }

    fn signatures(&self, bound: u64) -> Vec<(u64, SignatureVector)> {
        let d = self.field.d;
        arith::primes_up_to(bound)
            .into_iter()
            .filter(|&q| q != 2 && !d.is_multiple_of(q))
            .filter(|&q| kronecker_i64((d % q) as i64, q as i64) == Ok(1))
            .filter_map(|q| self.signature(q, None).ok().map(|s| (q, s)))
            .collect()
    }
}

/// User-supplied residue symbols for a totally real field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSymbolTable {
    pub field: String,
    pub units: Vec<String>,
    pub rows: BTreeMap<u64, SignatureVector>,
    /// Optional generator of the chosen prime ideal above each prime.
    #[serde(default)]
    pub ideals: BTreeMap<u64, String>,
}

impl ResidueSymbolTable {
    pub fn validate(&self) -> Result<(), HilbertError> {
        for (&prime, row) in &self.rows {
            if row.len() != self.units.len() {
                return Err(HilbertError::RaggedTable {
                    prime,
                    got: row.len(),
                    expected: self.units.len(),
                });
            }
        }
        Ok(())
    }

    pub fn row(&self, prime: u64) -> Option<&SignatureVector> {
        self.rows.get(&prime)
    }
}

impl SignatureSource for ResidueSymbolTable {
    fn basis_len(&self) -> usize {
        self.units.len()
    }

    fn signatures(&self, bound: u64) -> Vec<(u64, SignatureVector)> {
        self.rows
            .range(..=bound)
            .map(|(&q, s)| (q, s.clone()))
            .collect()
    }
}

/// Smallest prime `≤ bound` outside `avoid` whose signature equals
/// `target`, so that the product character is trivial on the basis.
pub fn find_auxiliary_prime<S: SignatureSource + ?Sized>(
    source: &S,
    target: &SignatureVector,
    avoid: &[u64],
    bound: u64,
) -> Result<Option<u64>, HilbertError> {
    if target.len() != source.basis_len() {
        return Err(HilbertError::TargetLength {
            got: target.len(),
            expected: source.basis_len(),
        });
    }
    Ok(source
        .signatures(bound)
        .into_iter()
        .find(|(q, s)| !avoid.contains(q) && s == target)
        .map(|(q, _)| q))
}

/// Table-driven variant of [`find_auxiliary_prime`]; rejects ragged tables.
pub fn match_signature(
    table: &ResidueSymbolTable,
    target: &SignatureVector,
    avoid: &[u64],
    bound: u64,
) -> Result<Option<u64>, HilbertError> {
    table.validate()?;
    find_auxiliary_prime(table, target, avoid, bound)
}
