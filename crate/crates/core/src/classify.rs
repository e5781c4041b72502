//! Local-type decision procedures.
//!
//! Inputs are level valuations and *normalized* sign ratios: for the
//! twisting character `χ` and the prime-to-`p` part `N'` of the level,
//! `ratio = ε(f) · ε(f⊗χ) · χ(N')` (see [`normalized_ratio`]). When the
//! signs are local root numbers or Atkin–Lehner eigenvalues the `χ(N')`
//! factor is simply omitted by the caller.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, kronecker_i64, Sign};
use crate::characters::TwoTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("inconsistent observation: {0}")]
    Inconsistent(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("a sign ratio is needed to decide this case ({0})")]
    MissingRatio(String),
    #[error("unknown local type {0:?}")]
    UnknownType(String),
}

/// Local type at an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalTypeOdd {
    PrincipalSeries,
    Steinberg,
    SupercuspidalUnramified,
    /// Induced from `Q_p(√p*)`.
    SupercuspidalRamifiedPStar,
    /// Induced from the other ramified extension `Q_p(√(δp*))`.
    SupercuspidalRamifiedNonPStar,
    /// Supercuspidal at level exponent 2 with `p ≡ 3 mod 4`: the inducing
    /// extension is not determined by twisting.
    SupercuspidalExtensionUndetermined,
}

impl LocalTypeOdd {
    pub fn is_supercuspidal(self) -> bool {
        !matches!(self, LocalTypeOdd::PrincipalSeries | LocalTypeOdd::Steinberg)
    }
}

impl fmt::Display for LocalTypeOdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LocalTypeOdd::PrincipalSeries => "PrincipalSeries",
            LocalTypeOdd::Steinberg => "Steinberg",
            LocalTypeOdd::SupercuspidalUnramified => "SupercuspidalUnramified",
            LocalTypeOdd::SupercuspidalRamifiedPStar => "SupercuspidalRamifiedPStar",
            LocalTypeOdd::SupercuspidalRamifiedNonPStar => "SupercuspidalRamifiedNonPStar",
            LocalTypeOdd::SupercuspidalExtensionUndetermined => "SupercuspidalExtensionUndetermined",
        };
        f.write_str(s)
    }
}

/// Field tag for the dihedral supercuspidals that twisting cannot tell
/// apart from principal series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InducingField {
    Sqrt2,
}

/// Local type at 2, in the `PS / ST / SCIa / SCIb / SCIc / SCII` notation
/// (dihedral supercuspidals indexed by discriminant valuation 0, 2, 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LocalTypeTwo {
    PS,
    ST,
    SCIa,
    SCIb(Option<InducingField>),
    SCIc,
    SCII,
}

impl LocalTypeTwo {
    pub const SCIB: LocalTypeTwo = LocalTypeTwo::SCIb(None);
    pub const SCIB_SQRT2: LocalTypeTwo = LocalTypeTwo::SCIb(Some(InducingField::Sqrt2));

    /// The Table-level family, dropping any field tag.
    pub fn untagged(self) -> LocalTypeTwo {
        match self {
            LocalTypeTwo::SCIb(_) => LocalTypeTwo::SCIB,
            other => other,
        }
    }

    pub fn is_discrete_series(self) -> bool {
        self != LocalTypeTwo::PS
    }
}

impl fmt::Display for LocalTypeTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LocalTypeTwo::PS => "PS",
            LocalTypeTwo::ST => "ST",
            LocalTypeTwo::SCIa => "SCIa",
            LocalTypeTwo::SCIb(None) => "SCIb",
            LocalTypeTwo::SCIb(Some(InducingField::Sqrt2)) => "SCIb(sqrt2)",
            LocalTypeTwo::SCIc => "SCIc",
            LocalTypeTwo::SCII => "SCII",
        };
        f.write_str(s)
    }
}

impl FromStr for LocalTypeTwo {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "PS" => LocalTypeTwo::PS,
            "ST" => LocalTypeTwo::ST,
            "SCIa" => LocalTypeTwo::SCIa,
            "SCIb" => LocalTypeTwo::SCIB,
            "SCIb(sqrt2)" => LocalTypeTwo::SCIB_SQRT2,
            "SCIc" => LocalTypeTwo::SCIc,
            "SCII" => LocalTypeTwo::SCII,
            other => return Err(ClassifyError::UnknownType(other.to_string())),
        })
    }
}

impl TryFrom<String> for LocalTypeTwo {
    type Error = ClassifyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<LocalTypeTwo> for String {
    fn from(t: LocalTypeTwo) -> String {
        t.to_string()
    }
}

/// A decision together with the rules that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision<T> {
    pub outcome: T,
    pub evidence: Vec<String>,
}

/// `ε(f) · ε(f⊗χ) · χ(N')`.
pub fn normalized_ratio(sign_f: Sign, sign_twist: Sign, chi_of_odd_part: Sign) -> Sign {
    sign_f * sign_twist * chi_of_odd_part
}

fn minus_one_symbol(p: u64) -> Sign {
    Sign::from_symbol(kronecker_i64(-1, p as i64).expect("p > 0")).expect("p odd")
}

/// Types compatible with `val_p(N) = val` at an odd prime `p`.
///
/// At `val = 2` with `p ≡ 3 mod 4` the ramified conductor-1 case is
/// possible, so both ramified tags and the undetermined outcome are listed.
pub fn allowed_types_odd(p: u64, val: u32) -> BTreeSet<LocalTypeOdd> {
    use LocalTypeOdd::*;
    match val {
        0 => [PrincipalSeries].into(),
        1 => [Steinberg].into(),
        2 => {
            let mut s: BTreeSet<_> = [PrincipalSeries, Steinberg, SupercuspidalUnramified].into();
            if p % 4 == 3 {
                s.extend([
                    SupercuspidalRamifiedPStar,
                    SupercuspidalRamifiedNonPStar,
                    SupercuspidalExtensionUndetermined,
                ]);
            }
            s
        }
        v if v % 2 == 0 => [PrincipalSeries, SupercuspidalUnramified].into(),
        _ => [SupercuspidalRamifiedPStar, SupercuspidalRamifiedNonPStar].into(),
    }
}

/// Observation at an odd prime: level exponents before and after twisting
/// by `χ_p`, and the normalized sign ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddTwistObservation {
    pub p: u64,
    pub val_n: u32,
    pub val_twist: u32,
    /// `None` when the signs are unknown; only the Steinberg branches can
    /// decide without it.
    pub ratio: Option<Sign>,
}

fn check_odd_levels(obs: &OddTwistObservation) -> Result<(), ClassifyError> {
    let (v, w) = (obs.val_n, obs.val_twist);
    let fail = |msg: String| Err(ClassifyError::Inconsistent(msg));
    if v <= 1 && w != 2 {
        return fail(format!(
            "val_p(N) = {v} forces val_p(N(f⊗χ_p)) = 2, got {w} (twisting an unramified or Steinberg component by a conductor-p character)"
        ));
    }
    if w <= 1 && v != 2 {
        return fail(format!(
            "val_p(N(f⊗χ_p)) = {w} forces val_p(N) = 2, got {v}"
        ));
    }
    if (v >= 3 || w >= 3) && v != w {
        return fail(format!(
            "level exponents {v} and {w} must agree above 2 (twisting by χ_p preserves conductors of exponent >= 3)"
        ));
    }
    Ok(())
}

/// Classify at an odd prime, reporting which criterion fired.
pub fn classify_odd_explained(obs: &OddTwistObservation) -> Result<Decision<LocalTypeOdd>, ClassifyError> {
    use LocalTypeOdd::*;
    let p = obs.p;
    if p == 2 || !arith::is_prime(p) {
        return Err(ClassifyError::NotOddPrime(p));
    }
    check_odd_levels(obs)?;
    let eps = minus_one_symbol(p);
    let decided = |outcome, why: String| Ok(Decision { outcome, evidence: vec![why] });

    if obs.val_n == 1 || obs.val_twist == 1 {
        return decided(
            Steinberg,
            format!(
                "Steinberg: a level exponent equals 1 (val_p(N) = {}, val_p(N(f⊗χ_p)) = {})",
                obs.val_n, obs.val_twist
            ),
        );
    }
    if obs.val_n == 0 {
        return decided(PrincipalSeries, "unramified at p: val_p(N) = 0".into());
    }
    let ratio = obs.ratio.ok_or_else(|| {
        ClassifyError::MissingRatio(format!("val_p(N) = {} is not Steinberg", obs.val_n))
    })?;
    if obs.val_twist == 0 && ratio != eps {
        return Err(ClassifyError::Inconsistent(format!(
            "the twist is unramified, so the component is principal series and the ratio must be (-1/p) = {eps}, got {ratio}"
        )));
    }

    if obs.val_n.is_multiple_of(2) {
        if ratio == eps {
            return decided(
                PrincipalSeries,
                format!("principal series: val_p(N) even and ratio = (-1/{p}) = {eps}"),
            );
        }
        if obs.val_n >= 4 || p % 4 == 1 {
            return decided(
                SupercuspidalUnramified,
                format!(
                    "supercuspidal, unramified extension: val_p(N) = {} even and ratio = -(-1/{p}) = {ratio}",
                    obs.val_n
                ),
            );
        }
        return decided(
            SupercuspidalExtensionUndetermined,
            format!(
                "supercuspidal: ratio = -(-1/{p}) = {ratio} at val_p(N) = 2 with p ≡ 3 mod 4; the inducing extension is not determined by twisting"
            ),
        );
    }

    match ratio {
        Sign::Plus => decided(
            SupercuspidalRamifiedPStar,
            format!("supercuspidal induced from Q_p(√p*): val_p(N) = {} odd and ratio = +1", obs.val_n),
        ),
        Sign::Minus => decided(
            SupercuspidalRamifiedNonPStar,
            format!(
                "supercuspidal induced from Q_p(√(δp*)): val_p(N) = {} odd and ratio = -1",
                obs.val_n
            ),
        ),
    }
}

pub fn classify_odd(obs: &OddTwistObservation) -> Result<LocalTypeOdd, ClassifyError> {
    classify_odd_explained(obs).map(|d| d.outcome)
}

/// Types allowed at 2 for `val_2(N) = val`.
pub fn allowed_types_two(val: u32) -> BTreeSet<LocalTypeTwo> {
    use LocalTypeTwo::*;
    match val {
        0 => [PS].into(),
        1 => [ST].into(),
        2 => [SCIa].into(),
        3 => [SCII].into(),
        4 => [PS, ST, SCIa, SCII].into(),
        5 => [LocalTypeTwo::SCIB].into(),
        6 => [PS, ST, SCIa, LocalTypeTwo::SCIB, SCII].into(),
        7 => [SCII].into(),
        8 => [PS, SCIa, LocalTypeTwo::SCIB, SCIc].into(),
        v if v % 2 == 1 => [SCIc].into(),
        _ => [PS, SCIa, LocalTypeTwo::SCIB].into(),
    }
}

/// One twist at 2: normalized ratio and level exponent of the twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTwist {
    pub ratio: Option<Sign>,
    pub val_twist: u32,
}

/// Observation at 2: twists by `χ_{-1}`, `χ_2`, `χ_{-2}` in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTwistObservation {
    pub val_n: u32,
    pub twists: [TwoTwist; 3],
    /// Whether the form appears in the definite quaternion algebra
    /// ramified at 2 (i.e. is discrete series at 2).
    pub discrete_series_hint: Option<bool>,
}

impl TwoTwistObservation {
    pub fn twist(&self, tag: TwoTag) -> TwoTwist {
        self.twists[TwoTag::ALL.iter().position(|&t| t == tag).unwrap()]
    }

    pub fn pattern(&self) -> Option<[Sign; 3]> {
        let mut out = [Sign::Plus; 3];
        for (slot, t) in out.iter_mut().zip(&self.twists) {
            *slot = t.ratio?;
        }
        Some(out)
    }
}

/// `χ(-1)` for each tag: the principal-series pattern.
pub const PS_PATTERN: [Sign; 3] = [Sign::Minus, Sign::Plus, Sign::Minus];
/// `-χ(-1)` for each tag: the unramified dihedral pattern.
pub const SCIA_PATTERN: [Sign; 3] = [Sign::Plus, Sign::Minus, Sign::Plus];

fn fmt_pattern(p: &[Sign; 3]) -> String {
    format!("({}, {}, {})", p[0], p[1], p[2])
}

/// Twist-change pattern and twisted level exponents of every exceptional
/// curve with level exponent `val`.
fn exceptional_patterns(val: u32) -> Vec<(ExceptionalCurveId, [Sign; 3], [u32; 3])> {
    ExceptionalCurveId::all()
        .filter(|id| exceptional_level_valuation(*id) == val)
        .map(|id| {
            let base = exceptional_root_number(id);
            let mut pattern = [Sign::Plus; 3];
            let mut levels = [0; 3];
            for (i, tag) in TwoTag::ALL.iter().enumerate() {
                let tw = exceptional_twist(id, *tag);
                pattern[i] = exceptional_root_number(tw) * base;
                levels[i] = exceptional_level_valuation(tw);
            }
            (id, pattern, levels)
        })
        .collect()
}

/// Candidate types at 2 compatible with the observation. Never guesses:
/// when twisting cannot separate types, all survivors are returned.
pub fn classify_two_explained(
    obs: &TwoTwistObservation,
) -> Result<Decision<BTreeSet<LocalTypeTwo>>, ClassifyError> {
    use LocalTypeTwo::*;
    let val = obs.val_n;
    let allowed = allowed_types_two(val);
    let mut evidence = vec![format!(
        "types allowed at val_2(N) = {val}: {}",
        join_types(&allowed)
    )];

    let twist_vals: Vec<u32> = obs.twists.iter().map(|t| t.val_twist).collect();
    let mut result: BTreeSet<LocalTypeTwo> = if val == 1 || twist_vals.contains(&1) {
        if !allowed.contains(&ST) {
            return Err(ClassifyError::Inconsistent(format!(
                "a twist has level exponent 1 but Steinberg needs val_2(N) in {{1, 4, 6}}, got {val}"
            )));
        }
        evidence.push("Steinberg: val_2(N) = 1 or some twisted level exponent equals 1".into());
        [ST].into()
    } else if val == 3 || val == 7 {
        evidence.push(format!("val_2(N) = {val} admits only SCII"));
        [SCII].into()
    } else {
        let candidates: BTreeSet<_> = allowed.iter().copied().filter(|&t| t != ST).collect();
        let generic: BTreeSet<_> = candidates
            .iter()
            .copied()
            .filter(|&t| t != PS && t != SCIa)
            .collect();
        match obs.pattern() {
            None => {
                evidence.push("sign pattern incomplete; keeping every non-Steinberg candidate".into());
                candidates
            }
            Some(pattern) => {
                let mut set = if pattern == PS_PATTERN && candidates.contains(&PS) {
                    let mut s: BTreeSet<_> = [PS].into();
                    evidence.push(format!(
                        "pattern {} = (χ(-1)) matches principal series",
                        fmt_pattern(&pattern)
                    ));
                    if candidates.contains(&LocalTypeTwo::SCIB) {
                        s.insert(LocalTypeTwo::SCIB_SQRT2);
                        evidence.push(
                            "the same pattern arises from the dihedral supercuspidal induced from the χ_2 extension"
                                .into(),
                        );
                    }
                    s
                } else if pattern == SCIA_PATTERN && candidates.contains(&SCIa) {
                    evidence.push(format!(
                        "pattern {} = (-χ(-1)) matches the unramified dihedral supercuspidal",
                        fmt_pattern(&pattern)
                    ));
                    [SCIa].into()
                } else {
                    evidence.push(format!(
                        "pattern {} is not pinned to a single type; keeping the unpinned candidates",
                        fmt_pattern(&pattern)
                    ));
                    generic
                };
                // exceptional curves at this level with the same twist data
                if candidates.contains(&SCII) && !set.contains(&SCII) {
                    for (id, pat, levels) in exceptional_patterns(val) {
                        if pat == pattern && levels[..] == twist_vals[..] {
                            evidence.push(format!(
                                "exceptional curve {id} has the same twist pattern and twisted levels"
                            ));
                            set.insert(SCII);
                        }
                    }
                }
                set
            }
        }
    };

    match obs.discrete_series_hint {
        Some(true) => {
            result.retain(|t| t.is_discrete_series());
            evidence.push("appears in the quaternion algebra ramified at 2: discrete series".into());
        }
        Some(false) => {
            result.retain(|t| !t.is_discrete_series());
            evidence.push("absent from the quaternion algebra ramified at 2: principal series".into());
        }
        None => {}
    }

    if result.is_empty() {
        return Err(ClassifyError::Inconsistent(format!(
            "violates the allowed-types row: nothing allowed at val_2(N) = {val} is compatible with the observation"
        )));
    }
    Ok(Decision {
        outcome: result,
        evidence,
    })
}

pub fn classify_two(obs: &TwoTwistObservation) -> Result<BTreeSet<LocalTypeTwo>, ClassifyError> {
    classify_two_explained(obs).map(|d| d.outcome)
}

pub fn join_types<T: fmt::Display>(set: &BTreeSet<T>) -> String {
    set.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Conductor exponent of an induced representation:
/// `f · (n·d + cond(ρ))` for inertial degree `f`, discriminant valuation
/// `d`, and degree `n`.
pub fn induced_conductor(f: u32, d: u32, n: u32, cond_rho: u32) -> u64 {
    debug_assert!(f >= 1 && n >= 1);
    f as u64 * (n as u64 * d as u64 + cond_rho as u64)
}

/// Square classes `{1, -1, 2, -2}`; multiplication is the Klein four-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum TwistClass {
    One,
    MinusOne,
    Two,
    MinusTwo,
}

impl TwistClass {
    pub const ALL: [TwistClass; 4] = [
        TwistClass::One,
        TwistClass::MinusOne,
        TwistClass::Two,
        TwistClass::MinusTwo,
    ];

    pub fn value(self) -> i64 {
        match self {
            TwistClass::One => 1,
            TwistClass::MinusOne => -1,
            TwistClass::Two => 2,
            TwistClass::MinusTwo => -2,
        }
    }

    /// Reduce a nonzero `±2^k` to its square class.
    pub fn from_value(v: i64) -> Result<Self, ClassifyError> {
        if v == 0 {
            return Err(ClassifyError::Inconsistent("twist class of 0".into()));
        }
        let mut m = v.unsigned_abs();
        let mut twos = 0;
        while m.is_multiple_of(2) {
            m /= 2;
            twos += 1;
        }
        if m != 1 {
            return Err(ClassifyError::Inconsistent(format!(
                "{v} is not ±1 or ±2 up to squares"
            )));
        }
        Ok(match (v < 0, twos % 2 == 1) {
            (false, false) => TwistClass::One,
            (true, false) => TwistClass::MinusOne,
            (false, true) => TwistClass::Two,
            (true, true) => TwistClass::MinusTwo,
        })
    }
}

impl std::ops::Mul for TwistClass {
    type Output = TwistClass;

    fn mul(self, other: TwistClass) -> TwistClass {
        TwistClass::from_value(self.value() * other.value()).expect("closed under products")
    }
}

impl From<TwoTag> for TwistClass {
    fn from(t: TwoTag) -> Self {
        TwistClass::from_value(t.value()).expect("tags are square classes")
    }
}

impl TryFrom<i64> for TwistClass {
    type Error = ClassifyError;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        TwistClass::from_value(v)
    }
}

impl From<TwistClass> for i64 {
    fn from(t: TwistClass) -> i64 {
        t.value()
    }
}

/// The curves `E_1^(r): ry² = x³+3x+2` and `E_2^(r): ry² = x³−3x+1`,
/// whose 3-torsion fields realize the `S_4` cases at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExceptionalCurveId {
    pub family: u8,
    pub twist: TwistClass,
}

impl ExceptionalCurveId {
    pub fn new(family: u8, r: i64) -> Result<Self, ClassifyError> {
        if family != 1 && family != 2 {
            return Err(ClassifyError::Inconsistent(format!(
                "exceptional family must be 1 or 2, got {family}"
            )));
        }
        Ok(ExceptionalCurveId {
            family,
            twist: TwistClass::from_value(r)?,
        })
    }

    pub fn all() -> impl Iterator<Item = ExceptionalCurveId> {
        [1u8, 2].into_iter().flat_map(|family| {
            TwistClass::ALL
                .into_iter()
                .map(move |twist| ExceptionalCurveId { family, twist })
        })
    }

    /// Coefficients `(a, b)` of `r·y² = x³ + a·x + b`.
    pub fn weierstrass(&self) -> (i64, i64) {
        match self.family {
            1 => (3, 2),
            _ => (-3, 1),
        }
    }
}

impl fmt::Display for ExceptionalCurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_{}^({})", self.family, self.twist.value())
    }
}

/// Local root number at 2 of an exceptional curve.
pub fn exceptional_root_number(id: ExceptionalCurveId) -> Sign {
    // same column for both families
    match id.twist {
        TwistClass::Two => Sign::Minus,
        _ => Sign::Plus,
    }
}

/// `E_i^(r) ⊗ χ_j = E_i^(rj)`.
pub fn exceptional_twist(id: ExceptionalCurveId, tag: TwoTag) -> ExceptionalCurveId {
    ExceptionalCurveId {
        family: id.family,
        twist: id.twist * TwistClass::from(tag),
    }
}

/// `val_2` of the level of the modular form attached to the curve.
pub fn exceptional_level_valuation(id: ExceptionalCurveId) -> u32 {
    match (id.family, id.twist) {
        (1, _) => 7,
        (_, TwistClass::One) => 4,
        (_, TwistClass::MinusOne) => 3,
        _ => 6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LocalTypeOdd::*;

    fn odd(p: u64, v: u32, w: u32, r: Option<i64>) -> OddTwistObservation {
        OddTwistObservation {
            p,
            val_n: v,
            val_twist: w,
            ratio: r.map(|x| Sign::from_i64(x).unwrap()),
        }
    }

    fn two(val: u32, ratios: [i64; 3], vals: [u32; 3], hint: Option<bool>) -> TwoTwistObservation {
        let mut twists = [TwoTwist {
            ratio: None,
            val_twist: 0,
        }; 3];
        for i in 0..3 {
            twists[i] = TwoTwist {
                ratio: Some(Sign::from_i64(ratios[i]).unwrap()),
                val_twist: vals[i],
            };
        }
        TwoTwistObservation {
            val_n: val,
            twists,
            discrete_series_hint: hint,
        }
    }

    #[test]
    fn allowed_odd_examples() {
        assert_eq!(allowed_types_odd(5, 1), [Steinberg].into());
        assert_eq!(
            allowed_types_odd(5, 2),
            [PrincipalSeries, Steinberg, SupercuspidalUnramified].into()
        );
        assert_eq!(
            allowed_types_odd(3, 7),
            [SupercuspidalRamifiedPStar, SupercuspidalRamifiedNonPStar].into()
        );
        assert!(allowed_types_odd(7, 2).contains(&SupercuspidalExtensionUndetermined));
        assert_eq!(allowed_types_odd(11, 0), [PrincipalSeries].into());
        assert_eq!(
            allowed_types_odd(11, 6),
            [PrincipalSeries, SupercuspidalUnramified].into()
        );
    }

    #[test]
    fn normalized_ratio_examples() {
        use Sign::*;
        assert_eq!(normalized_ratio(Minus, Plus, Plus), Minus);
        assert_eq!(normalized_ratio(Plus, Plus, Plus), Plus);
        assert_eq!(normalized_ratio(Plus, Minus, Minus), Plus);
    }

    #[test]
    fn classify_odd_examples() {
        assert_eq!(classify_odd(&odd(31, 2, 2, Some(-1))).unwrap(), PrincipalSeries);
        assert_eq!(classify_odd(&odd(3, 2, 1, Some(1))).unwrap(), Steinberg);
        assert_eq!(classify_odd(&odd(3, 2, 1, None)).unwrap(), Steinberg);
        assert_eq!(classify_odd(&odd(7, 3, 3, Some(1))).unwrap(), SupercuspidalRamifiedPStar);
        assert_eq!(classify_odd(&odd(7, 3, 3, Some(-1))).unwrap(), SupercuspidalRamifiedNonPStar);
        assert_eq!(classify_odd(&odd(5, 1, 2, None)).unwrap(), Steinberg);
        assert_eq!(classify_odd(&odd(5, 0, 2, None)).unwrap(), PrincipalSeries);
    }

    #[test]
    fn classify_odd_supercuspidal_even() {
        // p ≡ 1 mod 4: -(-1/p) = -1
        assert_eq!(classify_odd(&odd(5, 2, 2, Some(-1))).unwrap(), SupercuspidalUnramified);
        assert_eq!(classify_odd(&odd(5, 2, 2, Some(1))).unwrap(), PrincipalSeries);
        // p ≡ 3 mod 4 at exponent 2: extension undetermined
        assert_eq!(
            classify_odd(&odd(7, 2, 2, Some(1))).unwrap(),
            SupercuspidalExtensionUndetermined
        );
        assert_eq!(classify_odd(&odd(7, 4, 4, Some(1))).unwrap(), SupercuspidalUnramified);
        assert_eq!(classify_odd(&odd(7, 4, 4, Some(-1))).unwrap(), PrincipalSeries);
    }

    #[test]
    fn classify_odd_consistency_errors() {
        assert!(matches!(
            classify_odd(&odd(5, 0, 0, Some(1))),
            Err(ClassifyError::Inconsistent(_))
        ));
        assert!(matches!(
            classify_odd(&odd(5, 1, 1, None)),
            Err(ClassifyError::Inconsistent(_))
        ));
        assert!(matches!(
            classify_odd(&odd(5, 3, 5, Some(1))),
            Err(ClassifyError::Inconsistent(_))
        ));
        // unramified twist but ratio disagrees with (-1/5) = +1
        assert!(matches!(
            classify_odd(&odd(5, 2, 0, Some(-1))),
            Err(ClassifyError::Inconsistent(_))
        ));
        assert!(matches!(
            classify_odd(&odd(5, 4, 4, None)),
            Err(ClassifyError::MissingRatio(_))
        ));
        assert_eq!(classify_odd(&odd(2, 2, 2, Some(1))), Err(ClassifyError::NotOddPrime(2)));
        assert_eq!(classify_odd(&odd(9, 2, 2, Some(1))), Err(ClassifyError::NotOddPrime(9)));
    }

    #[test]
    fn evidence_is_reported() {
        let d = classify_odd_explained(&odd(31, 2, 2, Some(-1))).unwrap();
        assert!(d.evidence[0].contains("(-1/31)"));
        let d = classify_two_explained(&two(8, [-1, 1, -1], [8, 8, 8], Some(true))).unwrap();
        assert!(d.evidence.len() >= 3);
    }

    #[test]
    fn table_one_rows() {
        use LocalTypeTwo::*;
        assert_eq!(allowed_types_two(3), [SCII].into());
        assert_eq!(allowed_types_two(5), [LocalTypeTwo::SCIB].into());
        assert_eq!(
            allowed_types_two(8),
            [PS, SCIa, LocalTypeTwo::SCIB, SCIc].into()
        );
        assert_eq!(allowed_types_two(9), [SCIc].into());
        assert_eq!(allowed_types_two(13), [SCIc].into());
        assert_eq!(allowed_types_two(10), [PS, SCIa, LocalTypeTwo::SCIB].into());
        assert_eq!(allowed_types_two(4), [PS, ST, SCIa, SCII].into());
        assert_eq!(
            allowed_types_two(6),
            [PS, ST, SCIa, LocalTypeTwo::SCIB, SCII].into()
        );
    }

    #[test]
    fn classify_two_examples() {
        use LocalTypeTwo::*;
        let sc = classify_two(&two(8, [-1, 1, -1], [8, 8, 8], Some(true))).unwrap();
        assert_eq!(sc, [LocalTypeTwo::SCIB_SQRT2].into());
        let ps = classify_two(&two(8, [-1, 1, -1], [8, 8, 8], Some(false))).unwrap();
        assert_eq!(ps, [PS].into());
        let both = classify_two(&two(8, [-1, 1, -1], [8, 8, 8], None)).unwrap();
        assert_eq!(both, [PS, LocalTypeTwo::SCIB_SQRT2].into());
        for pat in [[-1, 1, -1], [1, -1, 1], [1, 1, 1], [-1, -1, -1]] {
            assert_eq!(
                classify_two(&two(5, pat, [5, 5, 5], None)).unwrap(),
                [LocalTypeTwo::SCIB].into()
            );
            assert_eq!(classify_two(&two(3, pat, [4, 6, 6], None)).unwrap(), [SCII].into());
            assert_eq!(classify_two(&two(9, pat, [9, 9, 9], None)).unwrap(), [SCIc].into());
        }
    }

    #[test]
    fn classify_two_steinberg_and_errors() {
        use LocalTypeTwo::*;
        assert_eq!(classify_two(&two(1, [1, 1, 1], [4, 6, 6], None)).unwrap(), [ST].into());
        assert_eq!(classify_two(&two(4, [1, 1, 1], [1, 6, 6], None)).unwrap(), [ST].into());
        assert!(classify_two(&two(8, [1, 1, 1], [1, 8, 8], None)).is_err());
        // val 2 admits only SCIa
        assert_eq!(classify_two(&two(2, [1, -1, 1], [2, 2, 2], None)).unwrap(), [SCIa].into());
        assert!(classify_two(&two(2, [-1, 1, -1], [2, 2, 2], None)).is_err());
        // val 0 with a non-PS pattern
        assert!(classify_two(&two(0, [1, 1, 1], [4, 6, 6], None)).is_err());
        // hint false on a discrete-series-only row
        assert!(classify_two(&two(5, [1, 1, 1], [5, 5, 5], Some(false))).is_err());
    }

    #[test]
    fn classify_two_keeps_exceptional_candidates() {
        use LocalTypeTwo::*;
        // E_2^(1): level 2^4, twists of level 2^3, 2^6, 2^6, pattern (+1, -1, +1)
        let e = ExceptionalCurveId::new(2, 1).unwrap();
        let pattern: Vec<i64> = TwoTag::ALL
            .iter()
            .map(|t| (exceptional_root_number(exceptional_twist(e, *t)) * exceptional_root_number(e)).as_i8() as i64)
            .collect();
        assert_eq!(pattern, vec![1, -1, 1]);
        let got = classify_two(&two(4, [1, -1, 1], [3, 6, 6], None)).unwrap();
        assert_eq!(got, [SCIa, SCII].into());
        let got = classify_two(&two(4, [1, -1, 1], [4, 4, 4], None)).unwrap();
        assert_eq!(got, [SCIa].into());
    }

    #[test]
    fn induced_conductor_examples() {
        assert_eq!(induced_conductor(2, 0, 1, 3), 6);
        assert_eq!(induced_conductor(1, 1, 1, 1), 2);
        assert_eq!(induced_conductor(1, 1, 1, 4), 5);
        for c in 0..10 {
            assert!(induced_conductor(2, 1, 2, c + 1) > induced_conductor(2, 1, 2, c));
            assert_eq!(
                induced_conductor(2, 3, 2, c) - induced_conductor(2, 2, 2, c),
                4
            );
        }
    }

    #[test]
    fn exceptional_tables() {
        let id = |f, r| ExceptionalCurveId::new(f, r).unwrap();
        assert_eq!(exceptional_root_number(id(1, 2)), Sign::Minus);
        assert_eq!(exceptional_root_number(id(2, -2)), Sign::Plus);
        assert_eq!(exceptional_root_number(id(1, 1)), Sign::Plus);
        assert_eq!(exceptional_twist(id(1, 1), TwoTag::Two), id(1, 2));
        assert_eq!(exceptional_twist(id(2, -1), TwoTag::MinusTwo), id(2, 2));
        assert_eq!(exceptional_twist(id(1, 2), TwoTag::Two), id(1, 1));
        assert_eq!(exceptional_level_valuation(id(1, -2)), 7);
        assert_eq!(exceptional_level_valuation(id(2, -1)), 3);
        assert_eq!(exceptional_level_valuation(id(2, 2)), 6);
        assert_eq!(exceptional_level_valuation(id(2, 1)), 4);
        assert!(ExceptionalCurveId::new(3, 1).is_err());
        assert!(ExceptionalCurveId::new(1, 3).is_err());
        assert_eq!(id(1, 8), id(1, 2));
        assert_eq!(id(2, -4), id(2, -1));
    }

    #[test]
    fn type_names_round_trip() {
        for t in [
            LocalTypeTwo::PS,
            LocalTypeTwo::ST,
            LocalTypeTwo::SCIa,
            LocalTypeTwo::SCIB,
            LocalTypeTwo::SCIB_SQRT2,
            LocalTypeTwo::SCIc,
            LocalTypeTwo::SCII,
        ] {
            assert_eq!(t.to_string().parse::<LocalTypeTwo>().unwrap(), t);
        }
        assert!("SCIz".parse::<LocalTypeTwo>().is_err());
        assert_eq!(LocalTypeTwo::SCIB_SQRT2.untagged(), LocalTypeTwo::SCIB);
    }
}
