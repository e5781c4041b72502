//! Finite exponential sums behind the twist sign rules.
//!
//! Everything here is computed by direct summation over the relevant
//! finite quotient, so it checks the classifier's sign logic without
//! sharing code paths with it:
//!
//! - Gauss sums over `(Z/p^a)^×` and the principal-series product;
//! - sums over `F_{p^2}^×` for characters of the unramified quadratic
//!   extension that are trivial on `F_p^×`;
//! - the norm image of `(O/π^m)^×` for the ramified extensions.
//!
//! The additive character is `x ↦ exp(2πi·x/p^a)` (conductor 0). Only twist
//! ratios carry sign information; absolute values come with a tracked power
//! of `p` in [`EpsilonSum`].

use std::collections::BTreeSet;

use num_complex::Complex;
use thiserror::Error;

use crate::arith::{self, kronecker_i64, ArithError, Sign};
use crate::characters::{legendre_char, CharacterError, DirichletCharacter, RootOfUnity};
use crate::RealScalar;

/// Largest modulus the Gauss-sum routines accept.
pub const GAUSS_BOUND: u64 = 2000;

/// Largest `p` for which `F_{p^2}` tables are built.
pub const FP2_PRIME_BOUND: u64 = 1000;

/// Absolute tolerance for complex comparisons.
pub const ABS_TOL: f64 = 1e-9;
/// Relative tolerance for comparisons against closed forms.
pub const REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("Gauss sum of the trivial character mod 1 is degenerate")]
    Degenerate,
    #[error("modulus {0} exceeds the oracle bound")]
    BoundExceeded(u64),
    #[error("oracle sums are implemented for odd primes only")]
    EvenPrime,
    #[error("{c} is not coprime to {p}")]
    NotCoprime { c: i64, p: u64 },
    #[error("weight must be at least 2, got {0}")]
    BadWeight(u32),
    #[error("kappa index {j} out of range 1..={p}")]
    KappaOutOfRange { j: u64, p: u64 },
    #[error("kappa index {j} gives a character that factors through the norm")]
    NormFactoring { j: u64 },
    #[error("{0:?} is not a generator of F_p^2^x")]
    NotAGenerator(Fp2Element),
    #[error("delta = {delta} is not a unit mod {p}")]
    DeltaNotUnit { delta: i64, p: u64 },
    #[error("conductor of kappa must be 1 or 2, got {0}")]
    BadKappaConductor(u32),
    #[error("norm of a unit is not a square mod {p}: {value}")]
    NormNotSquare { p: u64, value: u64 },
    #[error("ratio {re}{im:+}i is not ±1 within tolerance")]
    NotASign { re: f64, im: f64 },
}

/// A finite-sum value with a power of `p` factored out:
/// the full quantity is `value · p^p_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSum<T> {
    pub value: Complex<T>,
    pub p_power: i64,
}

impl<T: RealScalar> EpsilonSum<T> {
    pub fn full_value(&self, p: u64) -> Complex<T> {
        self.value * T::from(p).unwrap().powi(self.p_power as i32)
    }
}

/// Quotient of a twisted sum by the untwisted one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistRatio<T> {
    pub sign: Sign,
    pub unit: Complex<T>,
    pub p_power: i64,
}

fn additive<T: RealScalar>(x: u64, modulus: u64) -> Complex<T> {
    let angle = T::TAU() * T::from(x % modulus).unwrap() / T::from(modulus).unwrap();
    Complex::from_polar(T::one(), angle)
}

/// `|a - b| <= tol · max(|b|, 1)`.
pub fn approx_eq<T: RealScalar>(a: Complex<T>, b: Complex<T>, tol: f64) -> bool {
    let scale = b.norm().max(T::one());
    (a - b).norm() <= T::from(tol).unwrap() * scale
}

/// Round a complex number to ±1, failing if it is not within `tol`.
pub fn to_sign<T: RealScalar>(z: Complex<T>, tol: f64) -> Result<Sign, OracleError> {
    let one = Complex::new(T::one(), T::zero());
    if approx_eq(z, one, tol) {
        Ok(Sign::Plus)
    } else if approx_eq(z, -one, tol) {
        Ok(Sign::Minus)
    } else {
        Err(OracleError::NotASign {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        })
    }
}

fn check_prime_power(chi: &DirichletCharacter) -> Result<(), OracleError> {
    if chi.prime() == 2 {
        return Err(OracleError::EvenPrime);
    }
    if chi.modulus() > GAUSS_BOUND {
        return Err(OracleError::BoundExceeded(chi.modulus()));
    }
    Ok(())
}

/// `G(χ^{-1}, c) = χ^{-1}(c) · Σ_{b ∈ (Z/p^a)^×} χ^{-1}(b)·exp(2πi b/p^a)`.
pub fn gauss_sum<T: RealScalar>(chi: &DirichletCharacter, c: i64) -> Result<Complex<T>, OracleError> {
    check_prime_power(chi)?;
    let m = chi.modulus();
    if m == 1 {
        return Err(OracleError::Degenerate);
    }
    if !chi.is_primitive() {
        return Err(OracleError::NotPrimitive {
            modulus: m,
            conductor: chi.conductor(),
        });
    }
    let inv = chi.inverse();
    let twist = inv
        .eval(c)
        .ok_or(OracleError::NotCoprime { c, p: chi.prime() })?
        .to_complex::<T>();
    let sum: Complex<T> = inv
        .group()
        .units()
        .map(|b| inv.eval_residue(b).unwrap().to_complex::<T>() * additive::<T>(b, m))
        .sum();
    Ok(twist * sum)
}

fn weight_ok(k: u32) -> Result<(), OracleError> {
    if k < 2 {
        Err(OracleError::BadWeight(k))
    } else {
        Ok(())
    }
}

/// `p^{a(k-1)} · G(χ^{-1}, c) · G(χ, c)`, the principal-series epsilon
/// product for `χ ⊕ χ^{-1}|·|^{1-k}` with `χ` primitive of conductor `p^a`.
///
/// An unramified `χ` (conductor 1) contributes 1.
pub fn ps_product_with<T: RealScalar>(
    chi: &DirichletCharacter,
    k: u32,
    c: i64,
) -> Result<Complex<T>, OracleError> {
    let eps = ps_epsilon(chi, k, c)?;
    Ok(eps.full_value(chi.prime()))
}

pub fn ps_product<T: RealScalar>(chi: &DirichletCharacter, k: u32) -> Result<Complex<T>, OracleError> {
    ps_product_with(chi, k, 1)
}

/// The principal-series product with `p^{ak}` split off.
pub fn ps_epsilon<T: RealScalar>(
    chi: &DirichletCharacter,
    k: u32,
    c: i64,
) -> Result<EpsilonSum<T>, OracleError> {
    weight_ok(k)?;
    check_prime_power(chi)?;
    let m = chi.modulus();
    if m == 1 {
        return Ok(EpsilonSum {
            value: Complex::new(T::one(), T::zero()),
            p_power: 0,
        });
    }
    let a = chi.group().exponent() as i64;
    let g1 = gauss_sum::<T>(chi, c)?;
    let g2 = gauss_sum::<T>(&chi.inverse(), c)?;
    Ok(EpsilonSum {
        value: g1 * g2 / T::from(m).unwrap(),
        p_power: a * k as i64,
    })
}

/// Unit part of `ps(χ₁·χ_p) / ps(χ₁)`, with both characters taken at their
/// true conductors.
pub fn ps_twist_ratio<T: RealScalar>(
    chi1: &DirichletCharacter,
    k: u32,
) -> Result<TwistRatio<T>, OracleError> {
    ps_twist_ratio_with(chi1, k, 1)
}

pub fn ps_twist_ratio_with<T: RealScalar>(
    chi1: &DirichletCharacter,
    k: u32,
    c: i64,
) -> Result<TwistRatio<T>, OracleError> {
    check_prime_power(chi1)?;
    if !chi1.is_primitive() {
        return Err(OracleError::NotPrimitive {
            modulus: chi1.modulus(),
            conductor: chi1.conductor(),
        });
    }
    let p = chi1.prime();
    let twisted = chi1.mul(&legendre_char(p)?)?.primitive()?;
    let base = ps_epsilon::<T>(chi1, k, c)?;
    let tw = ps_epsilon::<T>(&twisted, k, c)?;
    let unit = tw.value / base.value;
    Ok(TwistRatio {
        sign: to_sign(unit, REL_TOL)?,
        unit,
        p_power: tw.p_power - base.p_power,
    })
}

/// `x + y√δ` in `F_{p^2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2Element {
    pub x: u64,
    pub y: u64,
}

impl Fp2Element {
    pub const ONE: Fp2Element = Fp2Element { x: 1, y: 0 };
    pub const SQRT_DELTA: Fp2Element = Fp2Element { x: 0, y: 1 };

    pub fn new(x: u64, y: u64) -> Self {
        Fp2Element { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

/// `F_{p^2} = F_p(√δ)` with δ the smallest positive non-residue, a chosen
/// generator of the multiplicative group, and its discrete-log table.
#[derive(Debug, Clone)]
pub struct Fp2Field {
    p: u64,
    delta: u64,
    generator: Fp2Element,
    log: Vec<u32>,
}

impl Fp2Field {
    /// The field with the lexicographically smallest generator.
    pub fn new(p: u64) -> Result<Self, OracleError> {
        let (p, delta) = Self::params(p)?;
        let order = p * p - 1;
        let bare = Fp2Field {
            p,
            delta,
            generator: Fp2Element::ONE,
            log: Vec::new(),
        };
        let g = bare
            .elements()
            .find(|&e| bare.order_of(e) == order)
            .expect("F_p^2^x is cyclic");
        bare.with_gen(g)
    }

    /// Same field, explicit generator.
    pub fn with_generator(p: u64, generator: Fp2Element) -> Result<Self, OracleError> {
        let (p, delta) = Self::params(p)?;
        let bare = Fp2Field {
            p,
            delta,
            generator: Fp2Element::ONE,
            log: Vec::new(),
        };
        let g = Fp2Element::new(generator.x % p, generator.y % p);
        if g.is_zero() || bare.order_of(g) != p * p - 1 {
            return Err(OracleError::NotAGenerator(generator));
        }
        bare.with_gen(g)
    }

    /// The field generated by `g^e` for the smallest `e > 1` prime to `p^2 - 1`.
    pub fn alternate(&self) -> Result<Self, OracleError> {
        let order = self.p * self.p - 1;
        let e = (2..order)
            .find(|e| num_integer::Integer::gcd(e, &order) == 1)
            .unwrap_or(1);
        Fp2Field::with_generator(self.p, self.pow(self.generator, e))
    }

    fn params(p: u64) -> Result<(u64, u64), OracleError> {
        if p == 2 {
            return Err(OracleError::EvenPrime);
        }
        if !arith::is_prime(p) {
            return Err(ArithError::NotPrime(p.to_string()).into());
        }
        if p > FP2_PRIME_BOUND {
            return Err(OracleError::BoundExceeded(p));
        }
        Ok((p, smallest_nonresidue(p)))
    }

    fn with_gen(mut self, g: Fp2Element) -> Result<Self, OracleError> {
        let p = self.p;
        let mut log = vec![u32::MAX; (p * p) as usize];
        let mut cur = Fp2Element::ONE;
        for m in 0..(p * p - 1) {
            log[(cur.x * p + cur.y) as usize] = m as u32;
            cur = self.mul(cur, g);
        }
        self.generator = g;
        self.log = log;
        Ok(self)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn generator(&self) -> Fp2Element {
        self.generator
    }

    pub fn mul(&self, a: Fp2Element, b: Fp2Element) -> Fp2Element {
        let p = self.p;
        Fp2Element {
            x: (a.x * b.x + a.y * b.y % p * self.delta) % p,
            y: (a.x * b.y + a.y * b.x) % p,
        }
    }

    pub fn pow(&self, mut a: Fp2Element, mut e: u64) -> Fp2Element {
        let mut acc = Fp2Element::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `x^2 - δy^2` in `F_p`.
    pub fn norm(&self, a: Fp2Element) -> u64 {
        let p = self.p;
        (a.x * a.x % p + p - a.y * a.y % p * self.delta % p) % p
    }

    /// `2x` in `F_p`.
    pub fn trace(&self, a: Fp2Element) -> u64 {
        2 * a.x % self.p
    }

    fn order_of(&self, a: Fp2Element) -> u64 {
        let order = self.p * self.p - 1;
        let mut ord = order;
        for q in arith::prime_factors(order) {
            while ord.is_multiple_of(q) && self.pow(a, ord / q) == Fp2Element::ONE {
                ord /= q;
            }
        }
        ord
    }

    /// Nonzero elements.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Element> + '_ {
        let p = self.p;
        (0..p * p)
            .map(move |i| Fp2Element::new(i / p, i % p))
            .filter(|e| !e.is_zero())
    }

    /// Exponent `m` with `a = g^m`.
    pub fn log(&self, a: Fp2Element) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let idx = (a.x % self.p * self.p + a.y % self.p) as usize;
        Some(self.log[idx] as u64)
    }
}

fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&d| kronecker_i64(d as i64, p as i64) == Ok(-1))
        .expect("odd primes have non-residues")
}

/// A character of `F_{p^2}^×` trivial on `F_p^×`:
/// `ϰ(g^m) = exp(2πi·j·m/(p+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnramKappa {
    p: u64,
    j: u64,
}

impl UnramKappa {
    pub fn new(p: u64, j: u64) -> Result<Self, OracleError> {
        if j == 0 || j > p {
            return Err(OracleError::KappaOutOfRange { j, p });
        }
        // trivial on ⟨g^(p-1)⟩ means ϰ = χ∘Norm
        if (j * (p - 1)).is_multiple_of(p + 1) {
            return Err(OracleError::NormFactoring { j });
        }
        Ok(UnramKappa { p, j })
    }

    /// All admissible indices for `p`.
    pub fn admissible(p: u64) -> Vec<u64> {
        (1..=p).filter(|&j| UnramKappa::new(p, j).is_ok()).collect()
    }

    pub fn index(&self) -> u64 {
        self.j
    }

    pub fn eval(&self, field: &Fp2Field, b: Fp2Element) -> Option<RootOfUnity> {
        let m = field.log(b)?;
        let num = (self.j as u128 * m as u128 % (self.p + 1) as u128) as i64;
        Some(RootOfUnity::new(num, self.p + 1))
    }
}

fn unram_sum<T, F>(field: &Fp2Field, chi: F) -> Complex<T>
where
    T: RealScalar,
    F: Fn(Fp2Element) -> RootOfUnity,
{
    let p = field.prime();
    field
        .elements()
        .map(|b| chi(b).inverse().to_complex::<T>() * additive::<T>(field.trace(b), p))
        .sum()
}

/// `Σ_{b ∈ F_{p^2}^×} ϰ^{-1}(b)·exp(2πi·Tr(b)/p)` with the default
/// generator; one power of `p` is tracked, so the reported value is a unit.
pub fn sc_unram_epsilon<T: RealScalar>(p: u64, j: u64) -> Result<EpsilonSum<T>, OracleError> {
    let field = Fp2Field::new(p)?;
    sc_unram_epsilon_in(&field, j)
}

pub fn sc_unram_epsilon_in<T: RealScalar>(field: &Fp2Field, j: u64) -> Result<EpsilonSum<T>, OracleError> {
    let kappa = UnramKappa::new(field.prime(), j)?;
    let raw = unram_sum::<T, _>(field, |b| kappa.eval(field, b).unwrap());
    Ok(EpsilonSum {
        value: raw / T::from(field.prime()).unwrap(),
        p_power: 1,
    })
}

/// Closed form of the raw conductor-1 sum: `p · ϰ^{-1}(√δ)`.
///
/// Only the trace-zero class survives with weight `p - 1`; the `p` classes
/// with nonzero trace contribute `-Σ ϰ^{-1}` over them, which is
/// `+ϰ^{-1}(√δ)` because `ϰ` is nontrivial on `F_{p^2}^×/F_p^×`.
pub fn sc_unram_closed_form<T: RealScalar>(field: &Fp2Field, j: u64) -> Result<Complex<T>, OracleError> {
    let kappa = UnramKappa::new(field.prime(), j)?;
    let at_sqrt_delta = kappa.eval(field, Fp2Element::SQRT_DELTA).unwrap();
    Ok(at_sqrt_delta.inverse().to_complex::<T>() * T::from(field.prime()).unwrap())
}

/// Ratio of the sums for `ϰ·(χ_p∘Norm)` and `ϰ`, with the twisted
/// character evaluated pointwise from the Legendre symbol of the norm.
pub fn sc_unram_twist_ratio<T: RealScalar>(p: u64, j: u64) -> Result<TwistRatio<T>, OracleError> {
    let field = Fp2Field::new(p)?;
    sc_unram_twist_ratio_in(&field, j)
}

pub fn sc_unram_twist_ratio_in<T: RealScalar>(field: &Fp2Field, j: u64) -> Result<TwistRatio<T>, OracleError> {
    let p = field.prime();
    let kappa = UnramKappa::new(p, j)?;
    let base = unram_sum::<T, _>(field, |b| kappa.eval(field, b).unwrap());
    let twisted = unram_sum::<T, _>(field, |b| {
        let leg = kronecker_i64(field.norm(b) as i64, p as i64).unwrap();
        let sign = RootOfUnity::new(if leg == 1 { 0 } else { 1 }, 2);
        kappa.eval(field, b).unwrap() * sign
    });
    let unit = twisted / base;
    Ok(TwistRatio {
        sign: to_sign(unit, REL_TOL)?,
        unit,
        p_power: 0,
    })
}

/// `u + vπ` in `(O/π^m)^×`, `π^2 = pδ`, with `u mod p^⌈m/2⌉`, `v mod p^⌊m/2⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RamifiedUnit {
    pub u: u64,
    pub v: u64,
}

/// The finite ring `O/π^m` of the ramified extension `Q_p(√(pδ))`.
#[derive(Debug, Clone, Copy)]
pub struct RamifiedQuotient {
    p: u64,
    delta: u64,
    u_mod: u64,
    v_mod: u64,
}

impl RamifiedQuotient {
    pub fn new(p: u64, delta: i64, m: u32) -> Result<Self, OracleError> {
        if p == 2 {
            return Err(OracleError::EvenPrime);
        }
        if !arith::is_prime(p) {
            return Err(ArithError::NotPrime(p.to_string()).into());
        }
        let d = arith::mod_floor_i64(delta, p);
        if d == 0 {
            return Err(OracleError::DeltaNotUnit { delta, p });
        }
        let u_mod = p.pow(m.div_ceil(2));
        let v_mod = p.pow(m / 2);
        if u_mod * v_mod > 1 << 24 {
            return Err(OracleError::BoundExceeded(u_mod * v_mod));
        }
        Ok(RamifiedQuotient {
            p,
            // δ only matters mod p here, and we keep it reduced mod p^⌈m/2⌉
            delta: arith::mod_floor_i64(delta, u_mod),
            u_mod,
            v_mod,
        })
    }

    pub fn units(&self) -> impl Iterator<Item = RamifiedUnit> + '_ {
        let (um, vm, p) = (self.u_mod, self.v_mod, self.p);
        (0..um)
            .filter(move |u| u % p != 0)
            .flat_map(move |u| (0..vm).map(move |v| RamifiedUnit { u, v }))
    }

    pub fn mul(&self, a: RamifiedUnit, b: RamifiedUnit) -> RamifiedUnit {
        let um = self.u_mod as u128;
        let pd = self.p as u128 * self.delta as u128 % um;
        let u = (a.u as u128 * b.u as u128 + (a.v as u128 * b.v as u128 % um) * pd) % um;
        let v = if self.v_mod == 1 {
            0
        } else {
            (a.u as u128 * b.v as u128 + a.v as u128 * b.u as u128) % self.v_mod as u128
        };
        RamifiedUnit {
            u: u as u64,
            v: v as u64,
        }
    }

    /// `Norm(u + vπ) = u² − pδv²`, reduced mod `p`.
    pub fn norm_mod_p(&self, a: RamifiedUnit) -> u64 {
        let (u, v) = (a.u as i128, a.v as i128);
        let norm = u * u - self.p as i128 * self.delta as i128 * v * v;
        norm.rem_euclid(self.p as i128) as u64
    }
}

/// Outcome of the ramified-case check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedTwist {
    pub sign: Sign,
    /// Residues mod `p` hit by the norm of `(O/π^3)^×`.
    pub norm_image: BTreeSet<u64>,
    pub units_checked: usize,
}

/// Nonzero squares mod `p`.
pub fn nonzero_squares(p: u64) -> BTreeSet<u64> {
    (1..p).map(|x| x * x % p).collect()
}

/// Ramified supercuspidal twist ratio: confirms that `χ_p∘Norm` is trivial
/// on units of `Q_p(√(pδ))`, then returns `χ_p(Norm π)^{cond(ϰ)+1}`.
pub fn sc_ram_twist_ratio(p: u64, delta: i64, cond_kappa: u32) -> Result<RamifiedTwist, OracleError> {
    if !(1..=2).contains(&cond_kappa) {
        return Err(OracleError::BadKappaConductor(cond_kappa));
    }
    let ring = RamifiedQuotient::new(p, delta, 3)?;
    let mut image = BTreeSet::new();
    let mut count = 0;
    for unit in ring.units() {
        let n = ring.norm_mod_p(unit);
        if kronecker_i64(n as i64, p as i64)? != 1 {
            return Err(OracleError::NormNotSquare { p, value: n });
        }
        image.insert(n);
        count += 1;
    }
    // Norm(π) = -pδ, so Norm(π)/p = -δ
    let symbol = kronecker_i64(-delta, p as i64)?;
    let base = Sign::from_symbol(symbol).ok_or(OracleError::DeltaNotUnit { delta, p })?;
    Ok(RamifiedTwist {
        sign: base.pow(cond_kappa + 1),
        norm_image: image,
        units_checked: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_chars, UnitGroup};

    #[test]
    fn gauss_sum_mod_five() {
        let chi = legendre_char(5).unwrap();
        let g: Complex<f64> = gauss_sum(&chi, 1).unwrap();
        assert!((g.norm_sqr() - 5.0).abs() < 1e-9);
        // real quadratic Gauss sum: √5
        assert!((g.re - 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn gauss_sum_mod_three() {
        let chi = legendre_char(3).unwrap();
        let g: Complex<f64> = gauss_sum(&chi, 1).unwrap();
        // e(1/3) - e(2/3) = i√3
        let direct = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0)
            - Complex::from_polar(1.0, 2.0 * std::f64::consts::TAU / 3.0);
        assert!((g - direct).norm() < 1e-12);
        assert!((g - Complex::new(0.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_rejections() {
        let trivial = DirichletCharacter::trivial(UnitGroup::new(5, 0).unwrap());
        assert_eq!(gauss_sum::<f64>(&trivial, 1), Err(OracleError::Degenerate));
        let lifted = legendre_char(5)
            .unwrap()
            .induce(UnitGroup::new(5, 2).unwrap())
            .unwrap();
        assert!(matches!(
            gauss_sum::<f64>(&lifted, 1),
            Err(OracleError::NotPrimitive { .. })
        ));
        assert!(matches!(
            gauss_sum::<f64>(&legendre_char(5).unwrap(), 10),
            Err(OracleError::NotCoprime { .. })
        ));
    }

    #[test]
    fn ps_product_examples() {
        let z: Complex<f64> = ps_product(&legendre_char(5).unwrap(), 2).unwrap();
        assert!(approx_eq(z, Complex::new(25.0, 0.0), REL_TOL));
        let z: Complex<f64> = ps_product(&legendre_char(3).unwrap(), 2).unwrap();
        assert!(approx_eq(z, Complex::new(-9.0, 0.0), REL_TOL));
        let cubic = enumerate_chars(7, 1)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let z: Complex<f64> = ps_product(&cubic, 2).unwrap();
        assert!(approx_eq(z, Complex::new(49.0, 0.0), REL_TOL));
        assert_eq!(ps_product::<f64>(&cubic, 1), Err(OracleError::BadWeight(1)));
    }

    #[test]
    fn ps_twist_ratio_examples() {
        let mod9 = enumerate_chars(3, 2)
            .unwrap()
            .into_iter()
            .find(|c| c.is_primitive())
            .unwrap();
        assert_eq!(ps_twist_ratio::<f64>(&mod9, 2).unwrap().sign, Sign::Minus);
        let quartic = enumerate_chars(5, 1)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 4)
            .unwrap();
        assert_eq!(ps_twist_ratio::<f64>(&quartic, 2).unwrap().sign, Sign::Plus);
        let cubic = enumerate_chars(7, 1)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let r = ps_twist_ratio::<f64>(&cubic, 3).unwrap();
        assert_eq!(r.sign, Sign::Minus);
        assert_eq!(r.p_power, 0);
    }

    #[test]
    fn ps_twist_ratio_through_unramified() {
        // χ₁ = legendre: the twist is unramified and the p-power drops by k
        let r = ps_twist_ratio::<f64>(&legendre_char(7).unwrap(), 2).unwrap();
        assert_eq!(r.sign, Sign::Minus);
        assert_eq!(r.p_power, -2);
    }

    #[test]
    fn fp2_structure() {
        let f = Fp2Field::new(5).unwrap();
        assert_eq!(f.delta(), 2);
        assert_eq!(f.elements().count(), 24);
        let g = f.generator();
        assert_eq!(f.pow(g, 24), Fp2Element::ONE);
        assert_ne!(f.pow(g, 12), Fp2Element::ONE);
        // norm is multiplicative
        for a in f.elements() {
            for b in f.elements().step_by(5) {
                assert_eq!(f.norm(f.mul(a, b)), f.norm(a) * f.norm(b) % 5);
            }
        }
        let sq = f.mul(Fp2Element::SQRT_DELTA, Fp2Element::SQRT_DELTA);
        assert_eq!(sq, Fp2Element::new(2, 0));
        assert!(Fp2Field::with_generator(5, Fp2Element::ONE).is_err());
        let alt = f.alternate().unwrap();
        assert_ne!(alt.generator(), g);
    }

    #[test]
    fn kappa_validation() {
        assert!(matches!(
            UnramKappa::new(3, 0),
            Err(OracleError::KappaOutOfRange { .. })
        ));
        assert!(matches!(
            UnramKappa::new(5, 3),
            Err(OracleError::NormFactoring { j: 3 })
        ));
        assert_eq!(UnramKappa::admissible(5), vec![1, 2, 4, 5]);
        assert!(sc_unram_epsilon::<f64>(3, 0).is_err());
    }

    #[test]
    fn kappa_trivial_on_base_field() {
        for p in [3u64, 5, 7] {
            let f = Fp2Field::new(p).unwrap();
            for j in UnramKappa::admissible(p) {
                let k = UnramKappa::new(p, j).unwrap();
                for x in 1..p {
                    assert!(k.eval(&f, Fp2Element::new(x, 0)).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn sc_unram_ratio_examples() {
        assert_eq!(sc_unram_twist_ratio::<f64>(3, 1).unwrap().sign, Sign::Plus);
        assert_eq!(sc_unram_twist_ratio::<f64>(5, 2).unwrap().sign, Sign::Minus);
        assert_eq!(sc_unram_twist_ratio::<f64>(7, 1).unwrap().sign, Sign::Plus);
    }

    #[test]
    fn sc_unram_sum_has_modulus_p() {
        for p in [3u64, 5, 7] {
            let f = Fp2Field::new(p).unwrap();
            for j in UnramKappa::admissible(p) {
                let eps = sc_unram_epsilon_in::<f64>(&f, j).unwrap();
                let raw = eps.full_value(p);
                assert!((raw.norm() - p as f64).abs() < 1e-9);
                let closed = sc_unram_closed_form::<f64>(&f, j).unwrap();
                assert!(approx_eq(raw, closed, REL_TOL), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn generator_independence() {
        for p in [3u64, 5, 7, 11] {
            let f = Fp2Field::new(p).unwrap();
            let g = f.alternate().unwrap();
            for j in UnramKappa::admissible(p) {
                let a = sc_unram_twist_ratio_in::<f64>(&f, j).unwrap();
                let b = sc_unram_twist_ratio_in::<f64>(&g, j).unwrap();
                assert!((a.unit - b.unit).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn ramified_examples() {
        assert_eq!(sc_ram_twist_ratio(3, 1, 1).unwrap().sign, Sign::Plus);
        assert_eq!(sc_ram_twist_ratio(3, 1, 2).unwrap().sign, Sign::Minus);
        assert_eq!(sc_ram_twist_ratio(7, 3, 2).unwrap().sign, Sign::Plus);
        assert!(matches!(
            sc_ram_twist_ratio(7, 14, 1),
            Err(OracleError::DeltaNotUnit { .. })
        ));
        assert!(sc_ram_twist_ratio(7, 1, 3).is_err());
        let r = sc_ram_twist_ratio(5, 2, 1).unwrap();
        assert_eq!(r.norm_image, nonzero_squares(5));
        assert_eq!(r.units_checked, 20 * 5);
    }

    #[test]
    fn ramified_ring_closure() {
        let ring = RamifiedQuotient::new(5, 2, 3).unwrap();
        let units: Vec<_> = ring.units().collect();
        for &a in units.iter().step_by(7) {
            for &b in units.iter().step_by(11) {
                let c = ring.mul(a, b);
                assert_ne!(c.u % 5, 0);
                assert_eq!(ring.norm_mod_p(c), ring.norm_mod_p(a) * ring.norm_mod_p(b) % 5);
            }
        }
    }

    #[test]
    fn runs_in_single_precision() {
        let chi = legendre_char(7).unwrap();
        let g: Complex<f32> = gauss_sum(&chi, 1).unwrap();
        assert!((g.norm_sqr() - 7.0).abs() < 1e-4);
        assert_eq!(sc_unram_twist_ratio::<f32>(5, 1).unwrap().sign, Sign::Minus);
    }
}
