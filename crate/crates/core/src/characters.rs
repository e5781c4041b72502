//! Dirichlet characters on `(Z/p^a)^×` and the quadratic characters used
//! for twisting.
//!
//! A character is stored by the images of a fixed generating set of the
//! unit group, each image an exact [`RootOfUnity`]. For odd `p` the group is
//! cyclic; for `p = 2` and `a >= 3` it is generated by `-1` and `5`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, kronecker_i64, mod_floor_i64, mod_pow, ArithError, Sign};
use crate::RealScalar;

/// Largest modulus [`enumerate_chars`] will produce characters for.
pub const ENUMERATION_BOUND: u64 = 2000;

/// Moduli up to this size get a discrete-log table.
const DLOG_TABLE_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("modulus {0} exceeds the enumeration bound {ENUMERATION_BOUND}")]
    BoundExceeded(u64),
    #[error("modulus 2^{0} is too large for character tables")]
    TwoPowerTooLarge(u32),
    #[error("characters live on different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("cannot induce a character mod {from} to modulus {to}")]
    BadInduction { from: u64, to: u64 },
    #[error("invalid two-adic tag {0}; expected -1, 2 or -2")]
    InvalidTag(i64),
    #[error("global characters are evaluated on positive integers, got {0}")]
    NonPositive(i64),
}

/// `exp(2πi·num/order)`, kept in lowest terms (unity is `0/1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    order: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, order: 1 };

    pub fn new(num: i64, order: u64) -> Self {
        assert!(order > 0, "root of unity needs positive order");
        let n = mod_floor_i64(num, order);
        let g = n.gcd(&order);
        RootOfUnity {
            num: n / g,
            order: order / g,
        }
    }

    fn from_u128(num: u128, order: u64) -> Self {
        RootOfUnity::new((num % order as u128) as i64, order)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(-(self.num as i64), self.order)
    }

    pub fn pow(&self, e: i64) -> Self {
        let e = mod_floor_i64(e, self.order) as u128;
        RootOfUnity::from_u128(self.num as u128 * e, self.order)
    }

    /// `Some(±1)` when the value is real.
    pub fn as_sign(&self) -> Option<Sign> {
        match self.order {
            1 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_complex<T: RealScalar>(&self) -> Complex<T> {
        if self.num == 0 {
            return Complex::new(T::one(), T::zero());
        }
        let angle = T::TAU() * T::from(self.num).unwrap() / T::from(self.order).unwrap();
        Complex::from_polar(T::one(), angle)
    }
}

impl std::ops::Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let l = self.order.lcm(&rhs.order);
        let a = self.num as u128 * (l / self.order) as u128;
        let b = rhs.num as u128 * (l / rhs.order) as u128;
        RootOfUnity::from_u128(a + b, l)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "1"),
            2 => write!(f, "-1"),
            _ => write!(f, "e({}/{})", self.num, self.order),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Generator {
    value: u64,
    order: u64,
}

/// The unit group `(Z/p^a)^×` with a fixed generating set.
#[derive(Debug)]
pub struct UnitGroup {
    prime: u64,
    exponent: u32,
    modulus: u64,
    gens: Vec<Generator>,
    // mixed-radix discrete logs; u32::MAX for non-units
    dlog: Option<Vec<u32>>,
}

impl UnitGroup {
    pub fn new(p: u64, a: u32) -> Result<Arc<Self>, CharacterError> {
        if !arith::is_prime(p) {
            return Err(ArithError::NotPrime(p.to_string()).into());
        }
        let modulus = p
            .checked_pow(a)
            .ok_or(CharacterError::BoundExceeded(u64::MAX))?;
        let gens = if p == 2 {
            if modulus > DLOG_TABLE_BOUND {
                return Err(CharacterError::TwoPowerTooLarge(a));
            }
            match a {
                0 | 1 => vec![],
                2 => vec![Generator { value: 3, order: 2 }],
                _ => vec![
                    Generator {
                        value: modulus - 1,
                        order: 2,
                    },
                    Generator {
                        value: 5,
                        order: modulus / 4,
                    },
                ],
            }
        } else if a == 0 {
            vec![]
        } else {
            let phi = modulus / p * (p - 1);
            let g = (2..modulus)
                .find(|&g| g % p != 0 && arith::multiplicative_order(g, modulus, phi) == phi)
                .expect("(Z/p^a)^× is cyclic for odd p");
            vec![Generator {
                value: g,
                order: phi,
            }]
        };
        let mut group = UnitGroup {
            prime: p,
            exponent: a,
            modulus,
            gens,
            dlog: None,
        };
        if modulus <= DLOG_TABLE_BOUND {
            group.dlog = Some(group.build_table());
        }
        Ok(Arc::new(group))
    }

    fn build_table(&self) -> Vec<u32> {
        let mut table = vec![u32::MAX; self.modulus as usize];
        let mut elems: Vec<(u64, u64)> = vec![(1 % self.modulus, 0)];
        let mut radix = 1u64;
        for g in &self.gens {
            let mut next = Vec::with_capacity(elems.len() * g.order as usize);
            let mut power = 1u64;
            for k in 0..g.order {
                for &(x, idx) in &elems {
                    let y = (x as u128 * power as u128 % self.modulus as u128) as u64;
                    next.push((y, idx + k * radix));
                }
                power = (power as u128 * g.value as u128 % self.modulus as u128) as u64;
            }
            radix *= g.order;
            elems = next;
        }
        for (x, idx) in elems {
            table[x as usize] = idx as u32;
        }
        table
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.gens.iter().map(|g| g.order).product()
    }

    pub fn generator_values(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.value).collect()
    }

    pub fn generator_orders(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.order).collect()
    }

    /// Residues in `[0, modulus)` coprime to `p`.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus).filter(move |x| self.modulus == 1 || x % self.prime != 0)
    }

    fn is_unit(&self, x: u64) -> bool {
        self.modulus == 1 || !x.is_multiple_of(self.prime)
    }

    /// Exponents of `x` with respect to the generators.
    fn log(&self, x: u64) -> Option<Vec<u64>> {
        if !self.is_unit(x) {
            return None;
        }
        if let Some(table) = &self.dlog {
            let mut idx = table[x as usize] as u64;
            let mut out = Vec::with_capacity(self.gens.len());
            for g in &self.gens {
                out.push(idx % g.order);
                idx /= g.order;
            }
            Some(out)
        } else {
            None
        }
    }
}

/// A multiplicative character of `(Z/p^a)^×`, extended by zero.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    // images: χ(gen_i) = exp(2πi·exps[i]/order_i)
    exps: Vec<u64>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter(mod {}, {:?})", self.modulus(), self.exps)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi mod {} [", self.modulus())?;
        for (i, (e, g)) in self.exps.iter().zip(&self.group.gens).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", g.value, RootOfUnity::new(*e as i64, g.order))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
            && self.group.generator_values() == other.group.generator_values()
            && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    /// Character with the given generator exponents (reduced modulo each
    /// generator's order).
    pub fn from_exponents(group: Arc<UnitGroup>, exps: &[u64]) -> Self {
        assert_eq!(exps.len(), group.gens.len(), "one exponent per generator");
        let exps = exps
            .iter()
            .zip(&group.gens)
            .map(|(e, g)| e % g.order)
            .collect();
        DirichletCharacter { group, exps }
    }

    pub fn trivial(group: Arc<UnitGroup>) -> Self {
        let exps = vec![0; group.gens.len()];
        DirichletCharacter { group, exps }
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn prime(&self) -> u64 {
        self.group.prime
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.gens)
            .map(|(&e, g)| g.order / e.gcd(&g.order))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// `χ(n)`, or `None` when `gcd(n, modulus) > 1`.
    pub fn eval(&self, n: i64) -> Option<RootOfUnity> {
        let x = mod_floor_i64(n, self.modulus());
        self.eval_residue(x)
    }

    pub fn eval_residue(&self, x: u64) -> Option<RootOfUnity> {
        let g = &self.group;
        if !g.is_unit(x) {
            return None;
        }
        if let Some(logs) = g.log(x) {
            let mut acc = RootOfUnity::ONE;
            for ((l, e), gen) in logs.iter().zip(&self.exps).zip(&g.gens) {
                let num = (*l as u128 * *e as u128 % gen.order as u128) as i64;
                acc = acc * RootOfUnity::new(num, gen.order);
            }
            return Some(acc);
        }
        // Large odd modulus: only the log modulo the character order matters.
        let gen = g.gens[0];
        let ord = self.order();
        let cofactor = gen.order / ord;
        let target = mod_pow(x, cofactor, g.modulus);
        let base = mod_pow(gen.value, cofactor, g.modulus);
        let mut cur = 1 % g.modulus;
        for j in 0..ord {
            if cur == target {
                let num = (j as u128 * self.exps[0] as u128 % gen.order as u128) as i64;
                return Some(RootOfUnity::new(num, gen.order));
            }
            cur = (cur as u128 * base as u128 % g.modulus as u128) as u64;
        }
        unreachable!("x^(φ/ord) lies in the subgroup generated by g^(φ/ord)")
    }

    /// `χ(n)` as a complex number (zero off the units).
    pub fn eval_complex<T: RealScalar>(&self, n: i64) -> Complex<T> {
        self.eval(n)
            .map(|r| r.to_complex())
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn inverse(&self) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.gens)
            .map(|(&e, g)| (g.order - e) % g.order)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exps,
        }
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.gens)
            .map(|(&e, g)| (e as u128 * k as u128 % g.order as u128) as u64)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exps,
        }
    }

    /// Pointwise product of two characters, lifting to the larger modulus
    /// when both share the prime.
    pub fn mul(&self, other: &Self) -> Result<Self, CharacterError> {
        if self.prime() != other.prime() {
            return Err(CharacterError::ModulusMismatch(self.modulus(), other.modulus()));
        }
        let (a, b) = if self.group.exponent >= other.group.exponent {
            (self.clone(), other.induce(self.group.clone())?)
        } else {
            (self.induce(other.group.clone())?, other.clone())
        };
        let exps = a
            .exps
            .iter()
            .zip(&b.exps)
            .zip(&a.group.gens)
            .map(|((x, y), g)| (x + y) % g.order)
            .collect();
        Ok(DirichletCharacter {
            group: a.group.clone(),
            exps,
        })
    }

    /// The character `n ↦ χ(n mod p^a)` on a larger modulus `p^b`.
    pub fn induce(&self, target: Arc<UnitGroup>) -> Result<Self, CharacterError> {
        if target.prime != self.prime() || target.exponent < self.group.exponent {
            return Err(CharacterError::BadInduction {
                from: self.modulus(),
                to: target.modulus,
            });
        }
        Ok(self.restrict_to(target))
    }

    // Assumes χ factors through the target modulus (or the target is larger).
    fn restrict_to(&self, target: Arc<UnitGroup>) -> Self {
        let exps = target
            .gens
            .iter()
            .map(|g| {
                let value = self
                    .eval_residue(g.value % self.modulus())
                    .expect("generators are units");
                // value has order dividing g.order
                let num = value.numerator() as u128 * (g.order / value.order()) as u128;
                (num % g.order as u128) as u64
            })
            .collect();
        DirichletCharacter {
            group: target,
            exps,
        }
    }

    fn trivial_on_filtration(&self, c: u32) -> bool {
        let g = &self.group;
        if c >= g.exponent {
            return true;
        }
        if c == 0 || (g.prime == 2 && c == 1) {
            return self.is_trivial();
        }
        // U_c is cyclic, generated by 1 + p^c, in the remaining cases.
        let gen = 1 + g.prime.pow(c);
        self.eval_residue(gen % g.modulus)
            .map(|r| r.is_one())
            .unwrap_or(false)
    }

    /// Smallest `c` with `χ` trivial on `U_c = {x ≡ 1 mod p^c}`.
    pub fn conductor_exponent(&self) -> u32 {
        (0..=self.group.exponent)
            .find(|&c| self.trivial_on_filtration(c))
            .expect("trivial on U_a")
    }

    pub fn conductor(&self) -> u64 {
        self.prime().pow(self.conductor_exponent())
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The primitive character mod the conductor inducing this one.
    pub fn primitive(&self) -> Result<Self, CharacterError> {
        let c = self.conductor_exponent();
        if c == self.group.exponent {
            return Ok(self.clone());
        }
        let target = UnitGroup::new(self.prime(), c)?;
        Ok(self.restrict_to(target))
    }
}

/// The quadratic character modulo an odd prime.
pub fn legendre_char(p: u64) -> Result<DirichletCharacter, CharacterError> {
    if p == 2 {
        return Err(ArithError::EvenPrime("2".into()).into());
    }
    let group = UnitGroup::new(p, 1)?;
    let half = (p - 1) / 2;
    Ok(DirichletCharacter::from_exponents(group, &[half]))
}

/// The three quadratic fields ramified only at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum TwoTag {
    MinusOne,
    Two,
    MinusTwo,
}

impl TwoTag {
    pub const ALL: [TwoTag; 3] = [TwoTag::MinusOne, TwoTag::Two, TwoTag::MinusTwo];

    pub fn value(self) -> i64 {
        match self {
            TwoTag::MinusOne => -1,
            TwoTag::Two => 2,
            TwoTag::MinusTwo => -2,
        }
    }

    pub fn from_value(v: i64) -> Result<Self, CharacterError> {
        match v {
            -1 => Ok(TwoTag::MinusOne),
            2 => Ok(TwoTag::Two),
            -2 => Ok(TwoTag::MinusTwo),
            other => Err(CharacterError::InvalidTag(other)),
        }
    }

    /// Kronecker discriminant of `Q(√tag)`.
    pub fn discriminant(self) -> i64 {
        4 * self.value()
    }
}

impl TryFrom<i64> for TwoTag {
    type Error = CharacterError;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        TwoTag::from_value(v)
    }
}

impl From<TwoTag> for i64 {
    fn from(t: TwoTag) -> i64 {
        t.value()
    }
}

impl fmt::Display for TwoTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `χ_{-1}` mod 4, `χ_2` and `χ_{-2}` mod 8.
pub fn two_char(tag: TwoTag) -> DirichletCharacter {
    match tag {
        TwoTag::MinusOne => {
            let g = UnitGroup::new(2, 2).expect("mod 4");
            DirichletCharacter::from_exponents(g, &[1])
        }
        TwoTag::Two => {
            let g = UnitGroup::new(2, 3).expect("mod 8");
            DirichletCharacter::from_exponents(g, &[0, 1])
        }
        TwoTag::MinusTwo => {
            let g = UnitGroup::new(2, 3).expect("mod 8");
            DirichletCharacter::from_exponents(g, &[1, 1])
        }
    }
}

/// Which quadratic field a [`GlobalQuadCharacter`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadFamily {
    /// `Q(√p*)` for an odd prime `p`.
    Odd { p: u64 },
    Two(TwoTag),
}

/// A quadratic Hecke character ramified at a single prime, described by
/// its local data: the unit part at the ramified prime, its value on the
/// ramified prime itself, and the symbol rule at every other prime.
#[derive(Debug, Clone)]
pub struct GlobalQuadCharacter {
    family: QuadFamily,
    discriminant: i64,
    unit_part: DirichletCharacter,
    value_at_ramified: Sign,
}

impl GlobalQuadCharacter {
    pub fn family(&self) -> QuadFamily {
        self.family
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn ramified_prime(&self) -> u64 {
        match self.family {
            QuadFamily::Odd { p } => p,
            QuadFamily::Two(_) => 2,
        }
    }

    pub fn unit_part(&self) -> &DirichletCharacter {
        &self.unit_part
    }

    pub fn value_at_ramified(&self) -> Sign {
        self.value_at_ramified
    }

    /// Local value at the prime `q` (a uniformizer at `q`).
    pub fn at_prime(&self, q: u64) -> Result<Sign, CharacterError> {
        if !arith::is_prime(q) {
            return Err(ArithError::NotPrime(q.to_string()).into());
        }
        if q == self.ramified_prime() {
            return Ok(self.value_at_ramified);
        }
        let s = match self.family {
            QuadFamily::Odd { p } => kronecker_i64(q as i64, p as i64)?,
            QuadFamily::Two(tag) => kronecker_i64(tag.value(), q as i64)?,
        };
        Ok(Sign::from_symbol(s).expect("q is unramified"))
    }

    /// Value on a positive integer, multiplicatively over its factorization.
    pub fn eval(&self, n: i64) -> Result<Sign, CharacterError> {
        if n <= 0 {
            return Err(CharacterError::NonPositive(n));
        }
        let mut acc = Sign::Plus;
        let mut m = n as u64;
        for q in arith::prime_factors(m) {
            let mut e = 0;
            while m.is_multiple_of(q) {
                m /= q;
                e += 1;
            }
            acc *= self.at_prime(q)?.pow(e);
        }
        Ok(acc)
    }
}

/// The character of `Q(√p*)` with `χ_p(p) = 1`.
pub fn global_quad_char(p: u64) -> Result<GlobalQuadCharacter, CharacterError> {
    let unit_part = legendre_char(p)?;
    Ok(GlobalQuadCharacter {
        family: QuadFamily::Odd { p },
        discriminant: arith::p_star(&(p as i64))?,
        unit_part,
        value_at_ramified: Sign::Plus,
    })
}

/// The character of `Q(√tag)`, ramified only at 2.
pub fn global_two_char(tag: TwoTag) -> GlobalQuadCharacter {
    GlobalQuadCharacter {
        family: QuadFamily::Two(tag),
        discriminant: tag.discriminant(),
        unit_part: two_char(tag),
        value_at_ramified: Sign::Plus,
    }
}

/// All `φ(p^a)` characters mod `p^a`.
pub fn enumerate_chars(p: u64, a: u32) -> Result<Vec<DirichletCharacter>, CharacterError> {
    if p.checked_pow(a).is_none_or(|m| m > ENUMERATION_BOUND) {
        return Err(CharacterError::BoundExceeded(p.saturating_pow(a)));
    }
    let group = UnitGroup::new(p, a)?;
    let orders = group.generator_orders();
    let mut out = Vec::with_capacity(group.order() as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::from_exponents(group.clone(), &exps));
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == orders.len() {
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn quadratic_residues(p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn legendre_examples() {
        let chi = legendre_char(5).unwrap();
        assert_eq!(chi.eval(2).unwrap().as_sign(), Some(Sign::Minus));
        assert_eq!(chi.eval(4).unwrap().as_sign(), Some(Sign::Plus));
        assert_eq!(chi.eval(10), None);
        assert_eq!(chi.eval(-1).unwrap().as_sign(), Some(Sign::Plus));
        assert!(chi.eval(1).unwrap().is_one());
        assert_eq!(chi.conductor(), 5);
        assert_eq!(chi.order(), 2);
        let chi31 = legendre_char(31).unwrap();
        assert_eq!(chi31.eval(14).unwrap().as_sign(), Some(Sign::Plus));
        assert!(legendre_char(2).is_err());
    }

    #[test]
    fn legendre_matches_residues() {
        for p in [3u64, 5, 7, 11, 13, 31, 97] {
            let chi = legendre_char(p).unwrap();
            let qr = quadratic_residues(p);
            for x in 1..p {
                let s = chi.eval(x as i64).unwrap().as_sign().unwrap();
                assert_eq!(s.is_plus(), qr.contains(&x), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn large_modulus_uses_power_method() {
        let p = 1_048_601; // prime above the table bound
        assert!(arith::is_prime(p));
        let chi = legendre_char(p).unwrap();
        for x in [2i64, 3, 5, 7, 1000, -1] {
            let s = chi.eval(x).unwrap().as_sign().unwrap();
            assert_eq!(s.as_i8(), kronecker_i64(x, p as i64).unwrap());
        }
    }

    #[test]
    fn two_chars() {
        let m1 = two_char(TwoTag::MinusOne);
        let c2 = two_char(TwoTag::Two);
        let m2 = two_char(TwoTag::MinusTwo);
        assert_eq!(m1.eval(-1).unwrap().as_sign(), Some(Sign::Minus));
        assert_eq!(c2.eval(-1).unwrap().as_sign(), Some(Sign::Plus));
        assert_eq!(m2.eval(-1).unwrap().as_sign(), Some(Sign::Minus));
        assert_eq!(m1.conductor(), 4);
        assert_eq!(c2.conductor(), 8);
        assert_eq!(m2.conductor(), 8);
        assert_eq!(m1.mul(&c2).unwrap(), m2);
        for tag in TwoTag::ALL {
            let chi = two_char(tag);
            for n in (1..=1000i64).step_by(2) {
                let v = chi.eval(n).unwrap().as_sign().unwrap().as_i8();
                assert_eq!(v, kronecker_i64(tag.value(), n).unwrap(), "tag {tag} n {n}");
            }
        }
        assert!(TwoTag::from_value(3).is_err());
    }

    #[test]
    fn global_char_examples() {
        let chi = global_quad_char(31).unwrap();
        assert_eq!(chi.at_prime(2).unwrap(), Sign::Plus);
        assert!(quadratic_residues(31).contains(&2));
        assert_eq!(global_quad_char(5).unwrap().at_prime(5).unwrap(), Sign::Plus);
        assert_eq!(global_quad_char(3).unwrap().eval(1).unwrap(), Sign::Plus);
        assert_eq!(chi.discriminant(), -31);
    }

    #[test]
    fn global_char_is_kronecker_of_discriminant() {
        for p in [3u64, 5, 7, 11, 13, 31] {
            let chi = global_quad_char(p).unwrap();
            for q in arith::primes_up_to(200) {
                if q == p {
                    continue;
                }
                let via_disc = kronecker_i64(chi.discriminant(), q as i64).unwrap();
                assert_eq!(chi.at_prime(q).unwrap().as_i8(), via_disc, "p={p} q={q}");
            }
            // multiplicative over factorizations
            assert_eq!(
                chi.eval(2 * 3 * 3 * 7).unwrap(),
                chi.eval(2).unwrap() * chi.eval(7).unwrap()
            );
        }
        let chi = global_two_char(TwoTag::MinusTwo);
        assert_eq!(chi.eval(15).unwrap().as_i8(), kronecker_i64(-2, 15).unwrap());
        assert!(chi.eval(0).is_err());
    }

    #[test]
    fn conductor_examples() {
        let g = UnitGroup::new(5, 3).unwrap();
        assert_eq!(DirichletCharacter::trivial(g.clone()).conductor(), 1);
        // order-25 character mod 125: exponent 4 on a generator of order 100
        let chi = DirichletCharacter::from_exponents(g, &[4]);
        assert_eq!(chi.order(), 25);
        assert_eq!(chi.conductor(), 125);
    }

    // brute-force filtration check: trivial on U_c iff χ(x)=1 for all x ≡ 1 mod p^c
    fn brute_conductor_exponent(chi: &DirichletCharacter) -> u32 {
        let p = chi.prime();
        let a = chi.group().exponent();
        let m = chi.modulus();
        (0..=a)
            .find(|&c| {
                let pc = p.pow(c);
                (0..m)
                    .filter(|x| x % pc == 1 % pc && x % p != 0)
                    .all(|x| chi.eval_residue(x).unwrap().is_one())
            })
            .unwrap()
    }

    #[test]
    fn conductor_matches_brute_force() {
        for (p, a) in [(3u64, 1u32), (3, 2), (3, 4), (5, 2), (5, 3), (7, 2), (2, 3), (2, 5), (2, 6)] {
            for chi in enumerate_chars(p, a).unwrap() {
                let c = chi.conductor_exponent();
                assert_eq!(c, brute_conductor_exponent(&chi), "{chi}");
                assert_eq!(chi.modulus() % chi.conductor(), 0);
                let prim = chi.primitive().unwrap();
                assert!(prim.is_primitive());
                for x in chi.group().units() {
                    assert_eq!(chi.eval_residue(x), prim.eval(x as i64));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_chars(3, 1).unwrap().len(), 2);
        assert_eq!(enumerate_chars(5, 2).unwrap().len(), 20);
        let sevens = enumerate_chars(7, 1).unwrap();
        assert_eq!(sevens.len(), 6);
        assert_eq!(sevens.iter().filter(|c| c.order() == 2).count(), 1);
        assert!(matches!(
            enumerate_chars(3, 7),
            Err(CharacterError::BoundExceeded(_))
        ));
        let all = enumerate_chars(2, 5).unwrap();
        assert_eq!(all.len(), 16);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn multiplicativity_and_orthogonality() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, a) in [(3u64, 3u32), (5, 2), (7, 2), (11, 1), (13, 2), (2, 4)] {
            let m = p.pow(a);
            for chi in enumerate_chars(p, a).unwrap() {
                for _ in 0..100 {
                    let x = loop {
                        let x = rng.gen_range(1..m.max(2));
                        if x % p != 0 {
                            break x;
                        }
                    };
                    let y = loop {
                        let y = rng.gen_range(1..m.max(2));
                        if y % p != 0 {
                            break y;
                        }
                    };
                    let xy = (x * y % m) as i64;
                    assert_eq!(
                        chi.eval(xy).unwrap(),
                        chi.eval(x as i64).unwrap() * chi.eval(y as i64).unwrap()
                    );
                }
                let total: Complex<f64> =
                    chi.group().units().map(|x| chi.eval_complex::<f64>(x as i64)).sum();
                if chi.is_trivial() {
                    assert!((total.re - chi.group().order() as f64).abs() < 1e-9);
                } else {
                    assert!(total.norm() < 1e-9, "{chi}: {total}");
                }
                assert_eq!(chi.group().order() % chi.order(), 0);
            }
        }
    }

    #[test]
    fn induction_and_products() {
        let chi = legendre_char(7).unwrap();
        let g = UnitGroup::new(7, 2).unwrap();
        let lifted = chi.induce(g.clone()).unwrap();
        assert_eq!(lifted.conductor(), 7);
        for x in 1..49i64 {
            if x % 7 != 0 {
                assert_eq!(lifted.eval(x), chi.eval(x));
            }
        }
        assert!(lifted.mul(&chi).unwrap().is_trivial());
        assert!(chi.mul(&two_char(TwoTag::Two)).is_err());
        assert!(lifted.induce(UnitGroup::new(7, 1).unwrap()).is_err());
        let inv = lifted.inverse();
        assert!(inv.mul(&lifted).unwrap().is_trivial());
        assert_eq!(lifted.pow(2), DirichletCharacter::trivial(g));
    }

    #[test]
    fn roots_of_unity() {
        let z = RootOfUnity::new(2, 6);
        assert_eq!(z.order(), 3);
        assert_eq!(z * z * z, RootOfUnity::ONE);
        assert_eq!(z.inverse() * z, RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(-1, 4), RootOfUnity::new(3, 4));
        assert_eq!(RootOfUnity::new(1, 2).as_sign(), Some(Sign::Minus));
        let c = RootOfUnity::new(1, 4).to_complex::<f64>();
        assert!((c.im - 1.0).abs() < 1e-12 && c.re.abs() < 1e-12);
        assert_eq!(z.pow(-1), z.inverse());
    }
}
