//! Record ingestion, batch classification, oracle sweeps and report output.
//!
//! Records and reports are JSON lines. A record carries the level exponent
//! at one prime, the sign of the form, and one entry per twisting
//! character; reports echo the record and add `type`, `evidence`, `status`.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::arith::{self, kronecker_i64, Sign};
use crate::characters::{enumerate_chars, global_quad_char, global_two_char, CharacterError, TwoTag};
use crate::classify::{
    allowed_types_odd, allowed_types_two, classify_odd_explained, classify_two_explained, join_types,
    ClassifyError, OddTwistObservation, TwoTwist, TwoTwistObservation,
};
use crate::hilbert::{
    find_auxiliary_prime, match_signature, needs_auxiliary, HilbertError, QuadSignatures, RealQuadField,
    ResidueSymbolTable, SignatureVector,
};
use crate::oracle::{self, gauss_sum, OracleError, Fp2Field, UnramKappa};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },
    #[error("line {line}: duplicate label {label:?}")]
    DuplicateLabel { line: usize, label: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

impl IoError {
    /// Process exit code: every error raised here is a parse or usage error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Whether the signs are global functional-equation signs (normalized by
/// `χ(N')`) or local root numbers / Atkin–Lehner eigenvalues (no factor).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    Global,
    Local,
}

impl SignConvention {
    fn is_global(&self) -> bool {
        *self == SignConvention::Global
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistEntry {
    /// `p*` for odd `p`; one of `-1, 2, -2` at 2.
    pub tag: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_twist: Option<Sign>,
    /// A precomputed normalized ratio, used instead of the signs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Sign>,
    pub val_twist: u32,
    /// `χ(N')` when `N'` is not a rational integer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_odd_part: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationRecord {
    pub label: String,
    pub p: u64,
    pub val_n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_f: Option<Sign>,
    /// Prime-to-`p` part `N'` of the level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_part: Option<u64>,
    #[serde(default, skip_serializing_if = "SignConvention::is_global")]
    pub sign_convention: SignConvention,
    pub twists: Vec<TwistEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete_series_hint: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    #[serde(flatten)]
    pub record: ObservationRecord,
    /// A single type at odd `p`; a candidate set `{..}` at 2.
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub local_type: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<String>,
    pub evidence: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

/// Field named in a serde error message, e.g. "missing field `p`".
fn field_of(message: &str) -> String {
    message
        .split('`')
        .nth(1)
        .map(str::to_string)
        .unwrap_or_else(|| "record".to_string())
}

fn validate_record(rec: &ObservationRecord, line: usize) -> Result<(), IoError> {
    let p = rec.p;
    if !arith::is_prime(p) {
        return Err(parse_err(line, "p", format!("{p} is not prime")));
    }
    if p == 2 {
        let mut tags: Vec<i64> = rec.twists.iter().map(|t| t.tag).collect();
        tags.sort_unstable();
        if tags != [-2, -1, 2] {
            return Err(parse_err(
                line,
                "twists",
                format!("p = 2 needs exactly the tags -1, 2, -2, got {:?}", tags),
            ));
        }
    } else {
        let star = arith::p_star(&(p as i64)).expect("odd prime");
        if rec.twists.len() != 1 || rec.twists[0].tag != star {
            return Err(parse_err(
                line,
                "twists",
                format!("p = {p} needs exactly one twist with tag p* = {star}"),
            ));
        }
    }
    if let Some(n) = rec.odd_part {
        if n == 0 || n % p == 0 {
            return Err(parse_err(line, "odd_part", format!("{n} must be positive and prime to {p}")));
        }
    }
    for t in &rec.twists {
        if t.ratio.is_some() && t.sign_twist.is_some() {
            return Err(parse_err(line, "ratio", "give either ratio or sign_twist, not both"));
        }
        if t.sign_twist.is_some() && rec.sign_f.is_none() {
            return Err(parse_err(line, "sign_f", "sign_twist needs sign_f"));
        }
    }
    Ok(())
}

/// Parse JSON-lines records; blank lines are skipped.
pub fn parse_records<R: BufRead>(input: R) -> Result<Vec<ObservationRecord>, IoError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| parse_err(line_no, "record", e.to_string()))?;
        let rec: ObservationRecord = serde_json::from_value(value).map_err(|e| {
            let msg = e.to_string();
            parse_err(line_no, &field_of(&msg), msg)
        })?;
        validate_record(&rec, line_no)?;
        if !seen.insert(rec.label.clone()) {
            return Err(IoError::DuplicateLabel {
                line: line_no,
                label: rec.label,
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn parse_records_str(input: &str) -> Result<Vec<ObservationRecord>, IoError> {
    parse_records(input.as_bytes())
}

/// One JSON object per line.
pub fn serialize_records(records: &[ObservationRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// `χ(N')` for the twist, or `+1` under the local convention.
fn chi_of_odd_part(rec: &ObservationRecord, t: &TwistEntry) -> Result<Option<Sign>, String> {
    if rec.sign_convention == SignConvention::Local {
        return Ok(Some(Sign::Plus));
    }
    if let Some(s) = t.chi_odd_part {
        return Ok(Some(s));
    }
    let Some(n) = rec.odd_part else {
        return Ok(None);
    };
    let chi = if rec.p == 2 {
        global_two_char(TwoTag::from_value(t.tag).map_err(|e| e.to_string())?)
    } else {
        global_quad_char(rec.p).map_err(|e| e.to_string())?
    };
    chi.eval(n as i64).map(Some).map_err(|e| e.to_string())
}

/// Normalized ratio for one twist, with a line of evidence.
fn resolve_ratio(rec: &ObservationRecord, t: &TwistEntry) -> Result<(Option<Sign>, Option<String>), String> {
    if let Some(r) = t.ratio {
        return Ok((Some(r), None));
    }
    let (Some(f), Some(g)) = (rec.sign_f, t.sign_twist) else {
        return Ok((None, None));
    };
    let chi = chi_of_odd_part(rec, t)?.ok_or_else(|| {
        format!("tag {}: global signs need odd_part or chi_odd_part", t.tag)
    })?;
    let r = crate::classify::normalized_ratio(f, g, chi);
    let why = format!("tag {}: ratio = ε(f)·ε(f⊗χ)·χ(N') = {f}·{g}·{chi} = {r}", t.tag);
    Ok((Some(r), Some(why)))
}

fn failed(rec: &ObservationRecord, evidence: Vec<String>, msg: String) -> ClassificationReport {
    ClassificationReport {
        record: rec.clone(),
        local_type: None,
        candidates: Vec::new(),
        evidence,
        status: Status::Inconsistent,
        error: Some(msg),
    }
}

pub fn classify_record(rec: &ObservationRecord) -> ClassificationReport {
    let mut evidence = Vec::new();
    let mut ratios = BTreeMap::new();
    for t in &rec.twists {
        match resolve_ratio(rec, t) {
            Ok((r, why)) => {
                evidence.extend(why);
                ratios.insert(t.tag, (r, t.val_twist));
            }
            Err(msg) => return failed(rec, evidence, msg),
        }
    }

    let outcome: Result<(String, Vec<String>, Vec<String>), ClassifyError> = if rec.p == 2 {
        let mut twists = [TwoTwist {
            ratio: None,
            val_twist: 0,
        }; 3];
        for (slot, tag) in twists.iter_mut().zip(TwoTag::ALL) {
            let (ratio, val_twist) = ratios[&tag.value()];
            *slot = TwoTwist { ratio, val_twist };
        }
        let obs = TwoTwistObservation {
            val_n: rec.val_n,
            twists,
            discrete_series_hint: rec.discrete_series_hint,
        };
        classify_two_explained(&obs).map(|d| {
            let names = d.outcome.iter().map(|t| t.to_string()).collect();
            (format!("{{{}}}", join_types(&d.outcome)), names, d.evidence)
        })
    } else {
        let (ratio, val_twist) = ratios.values().next().copied().expect("one twist");
        let obs = OddTwistObservation {
            p: rec.p,
            val_n: rec.val_n,
            val_twist,
            ratio,
        };
        classify_odd_explained(&obs).map(|d| (d.outcome.to_string(), Vec::new(), d.evidence))
    };

    match outcome {
        Ok((ty, candidates, more)) => {
            evidence.extend(more);
            ClassificationReport {
                record: rec.clone(),
                local_type: Some(ty),
                candidates,
                evidence,
                status: Status::Ok,
                error: None,
            }
        }
        Err(e) => failed(rec, evidence, e.to_string()),
    }
}

/// Classify every record in parallel; output order is input order.
pub fn run_classify(records: &[ObservationRecord]) -> Vec<ClassificationReport> {
    records.par_iter().map(classify_record).collect()
}

pub fn write_reports_json<W: Write>(reports: &[ClassificationReport], mut out: W) -> Result<(), IoError> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    p: u64,
    val_n: u32,
    #[serde(rename = "type")]
    local_type: &'a str,
    status: &'a str,
    evidence: String,
}

pub fn write_reports_csv<W: Write>(reports: &[ClassificationReport], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            label: &r.record.label,
            p: r.record.p,
            val_n: r.record.val_n,
            local_type: r.local_type.as_deref().unwrap_or(""),
            status: match r.status {
                Status::Ok => "ok",
                Status::Inconsistent => "inconsistent",
            },
            evidence: r
                .evidence
                .iter()
                .chain(r.error.iter())
                .cloned()
                .collect::<Vec<_>>()
                .join("; "),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCase {
    Gauss,
    Ps,
    ScUnram,
    ScRam,
}

impl std::str::FromStr for OracleCase {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        Ok(match s {
            "gauss" => OracleCase::Gauss,
            "ps" => OracleCase::Ps,
            "sc-unram" => OracleCase::ScUnram,
            "sc-ram" => OracleCase::ScRam,
            other => return Err(IoError::Usage(format!("unknown oracle case {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub p_min: u64,
    pub p_max: u64,
    /// Largest `p^a` enumerated by the character-sum cases.
    pub max_modulus: u64,
    pub weight: u32,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            p_min: 3,
            p_max: 13,
            max_modulus: 350,
            weight: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub case: OracleCase,
    pub p: u64,
    pub subject: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub checked: usize,
    pub failed: usize,
}

impl OracleReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn fmt_c(z: Complex<f64>) -> String {
    format!("{:.9}{:+.9}i", z.re, z.im)
}

fn minus_one_symbol(p: u64) -> Sign {
    Sign::from_symbol(kronecker_i64(-1, p as i64).expect("p > 0")).expect("p odd")
}

fn check_bounds(case: OracleCase, opts: &OracleOptions) -> Result<(), IoError> {
    if opts.p_min > opts.p_max {
        return Err(IoError::Usage(format!("p-min {} exceeds p-max {}", opts.p_min, opts.p_max)));
    }
    let limit = match case {
        OracleCase::Gauss | OracleCase::Ps => oracle::GAUSS_BOUND,
        OracleCase::ScUnram => oracle::FP2_PRIME_BOUND,
        OracleCase::ScRam => oracle::GAUSS_BOUND,
    };
    if opts.p_max > limit {
        return Err(IoError::Oracle(OracleError::BoundExceeded(opts.p_max)));
    }
    if matches!(case, OracleCase::Gauss | OracleCase::Ps) && opts.max_modulus > oracle::GAUSS_BOUND {
        return Err(IoError::Oracle(OracleError::BoundExceeded(opts.max_modulus)));
    }
    Ok(())
}

fn primitive_chars(p: u64, max_modulus: u64) -> Result<Vec<crate::characters::DirichletCharacter>, IoError> {
    let mut out = Vec::new();
    let mut a = 1u32;
    while p.checked_pow(a).is_some_and(|m| m <= max_modulus) {
        out.extend(enumerate_chars(p, a)?.into_iter().filter(|c| c.is_primitive()));
        a += 1;
    }
    Ok(out)
}

fn gauss_checks(p: u64, opts: &OracleOptions) -> Result<Vec<OracleCheck>, IoError> {
    let mut out = Vec::new();
    for chi in primitive_chars(p, opts.max_modulus)? {
        let m = chi.modulus() as f64;
        let g: Complex<f64> = gauss_sum(&chi, 1)?;
        let gbar: Complex<f64> = gauss_sum(&chi.inverse(), 1)?;
        let abs_ok = ((g.norm_sqr() - m) / m).abs() <= oracle::REL_TOL;
        let parity = chi.eval(-1).expect("unit").to_complex::<f64>();
        let expected = parity * m;
        let product = g * gbar;
        let prod_ok = oracle::approx_eq(product, expected, oracle::REL_TOL);
        out.push(OracleCheck {
            case: OracleCase::Gauss,
            p,
            subject: chi.to_string(),
            expected: format!("|G|^2 = {m}, G(χ)G(χ̄) = {}", fmt_c(expected)),
            observed: format!("|G|^2 = {:.9}, G(χ)G(χ̄) = {}", g.norm_sqr(), fmt_c(product)),
            pass: abs_ok && prod_ok,
        });
    }
    Ok(out)
}

fn ps_checks(p: u64, opts: &OracleOptions) -> Result<Vec<OracleCheck>, IoError> {
    let eps = minus_one_symbol(p);
    let mut out = Vec::new();
    for chi in primitive_chars(p, opts.max_modulus)? {
        let r = oracle::ps_twist_ratio::<f64>(&chi, opts.weight)?;
        let expected = Complex::new(eps.as_i8() as f64, 0.0);
        out.push(OracleCheck {
            case: OracleCase::Ps,
            p,
            subject: chi.to_string(),
            expected: format!("unit part (-1/{p}) = {eps}"),
            observed: format!("unit part {} (p^{})", fmt_c(r.unit), r.p_power),
            pass: oracle::approx_eq(r.unit, expected, oracle::REL_TOL),
        });
    }
    Ok(out)
}

fn sc_unram_checks(p: u64) -> Result<Vec<OracleCheck>, IoError> {
    let field = Fp2Field::new(p)?;
    let expected = -minus_one_symbol(p);
    let mut out = Vec::new();
    for j in UnramKappa::admissible(p) {
        let r = oracle::sc_unram_twist_ratio_in::<f64>(&field, j)?;
        let target = Complex::new(expected.as_i8() as f64, 0.0);
        out.push(OracleCheck {
            case: OracleCase::ScUnram,
            p,
            subject: format!("kappa j = {j}"),
            expected: format!("ratio -(-1/{p}) = {expected}"),
            observed: format!("ratio {}", fmt_c(r.unit)),
            pass: oracle::approx_eq(r.unit, target, oracle::REL_TOL),
        });
    }
    Ok(out)
}

fn sc_ram_checks(p: u64) -> Result<Vec<OracleCheck>, IoError> {
    let squares = oracle::nonzero_squares(p);
    let mut out = Vec::new();
    for delta in 1..p as i64 {
        for cond in [1u32, 2] {
            let r = oracle::sc_ram_twist_ratio(p, delta, cond)?;
            let expected = if cond == 1 {
                Sign::Plus
            } else {
                Sign::from_symbol(kronecker_i64(-delta, p as i64).expect("p odd")).expect("δ unit")
            };
            let pass = r.sign == expected && r.norm_image == squares;
            out.push(OracleCheck {
                case: OracleCase::ScRam,
                p,
                subject: format!("delta = {delta}, cond = {cond}"),
                expected: format!("ratio {expected}, norms = nonzero squares"),
                observed: format!(
                    "ratio {}, {} norm residues over {} units",
                    r.sign,
                    r.norm_image.len(),
                    r.units_checked
                ),
                pass,
            });
        }
    }
    Ok(out)
}

/// Sweep the explicit sums over odd primes in `[p_min, p_max]`.
pub fn run_oracle(case: OracleCase, opts: &OracleOptions) -> Result<OracleReport, IoError> {
    check_bounds(case, opts)?;
    let primes: Vec<u64> = arith::primes_up_to(opts.p_max)
        .into_iter()
        .filter(|&p| p >= opts.p_min && p != 2)
        .collect();
    let per_prime: Vec<Vec<OracleCheck>> = primes
        .par_iter()
        .map(|&p| match case {
            OracleCase::Gauss => gauss_checks(p, opts),
            OracleCase::Ps => ps_checks(p, opts),
            OracleCase::ScUnram => sc_unram_checks(p),
            OracleCase::ScRam => sc_ram_checks(p),
        })
        .collect::<Result<_, _>>()?;
    let checks: Vec<OracleCheck> = per_prime.into_iter().flatten().collect();
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok(OracleReport {
        checked: checks.len(),
        failed,
        checks,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableHeader {
    field: String,
    units: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRow {
    prime: u64,
    signs: Vec<Sign>,
    #[serde(default)]
    ideal: Option<String>,
}

/// A header line `{"field": .., "units": [..]}` followed by rows
/// `{"prime": q, "signs": [..], "ideal": ..}`.
pub fn parse_table<R: BufRead>(input: R) -> Result<ResidueSymbolTable, IoError> {
    let mut header: Option<TableHeader> = None;
    let mut rows = BTreeMap::new();
    let mut ideals = BTreeMap::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).map_err(|e| parse_err(line_no, "record", e.to_string()))?;
        let decode = |e: serde_json::Error| {
            let msg = e.to_string();
            parse_err(line_no, &field_of(&msg), msg)
        };
        if header.is_none() {
            header = Some(serde_json::from_value(value).map_err(decode)?);
            continue;
        }
        let row: TableRow = serde_json::from_value(value).map_err(decode)?;
        if !arith::is_prime(row.prime) {
            return Err(parse_err(line_no, "prime", format!("{} is not prime", row.prime)));
        }
        if rows.insert(row.prime, SignatureVector(row.signs)).is_some() {
            return Err(IoError::Hilbert(HilbertError::DuplicatePrime(row.prime)));
        }
        if let Some(ideal) = row.ideal {
            ideals.insert(row.prime, ideal);
        }
    }
    let header = header.ok_or_else(|| parse_err(0, "field", "missing table header"))?;
    let table = ResidueSymbolTable {
        field: header.field,
        units: header.units,
        rows,
        ideals,
    };
    table.validate()?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Quadratic(i64),
    Table(ResidueSymbolTable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxRequest {
    pub field: FieldSpec,
    pub target_prime: u64,
    /// Square root of `d` mod the target prime naming the ideal.
    pub root: Option<u64>,
    pub bound: u64,
    /// Search even when no auxiliary prime is needed.
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxOutcome {
    NotNeeded,
    Found(u64),
    NoneWithinBound,
}

impl std::fmt::Display for AuxOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AuxOutcome::NotNeeded => f.write_str("not needed"),
            AuxOutcome::Found(q) => write!(f, "{q}"),
            AuxOutcome::NoneWithinBound => f.write_str("none within bound"),
        }
    }
}

pub fn run_aux_prime(req: &AuxRequest) -> Result<AuxOutcome, IoError> {
    let avoid = [req.target_prime];
    let (target, found) = match &req.field {
        FieldSpec::Quadratic(d) => {
            let src = QuadSignatures::new(RealQuadField::new(*d)?)?;
            let target = src.signature(req.target_prime, req.root)?;
            let found = |t: &SignatureVector| find_auxiliary_prime(&src, t, &avoid, req.bound);
            (target.clone(), found(&target)?)
        }
        FieldSpec::Table(table) => {
            let target = table.row(req.target_prime).cloned().ok_or_else(|| {
                IoError::Usage(format!("prime {} is not in the table", req.target_prime))
            })?;
            let found = match_signature(table, &target, &avoid, req.bound)?;
            (target, found)
        }
    };
    if !needs_auxiliary(&target) && !req.force {
        return Ok(AuxOutcome::NotNeeded);
    }
    Ok(found.map_or(AuxOutcome::NoneWithinBound, AuxOutcome::Found))
}

/// Allowed types for level exponent `val` at `p`, one per line.
pub fn tables(p: u64, val: u32) -> Result<String, IoError> {
    if !arith::is_prime(p) {
        return Err(IoError::Usage(format!("{p} is not prime")));
    }
    let row = if p == 2 {
        join_types(&allowed_types_two(val))
    } else {
        join_types(&allowed_types_odd(p, val))
    };
    Ok(format!("p = {p}, val = {val}: {{{row}}}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E768B: &str = r#"{"label":"E768b","p":2,"val_n":8,"twists":[{"tag":-1,"ratio":-1,"val_twist":8},{"tag":2,"ratio":1,"val_twist":8},{"tag":-2,"ratio":-1,"val_twist":8}],"discrete_series_hint":true}"#;

    #[test]
    fn parses_and_classifies_e768b() {
        let recs = parse_records_str(E768B).unwrap();
        assert_eq!(recs.len(), 1);
        let rep = classify_record(&recs[0]);
        assert_eq!(rep.status, Status::Ok);
        assert_eq!(rep.local_type.as_deref(), Some("{SCIb(sqrt2)}"));
        assert!(!rep.evidence.is_empty());
    }

    #[test]
    fn empty_stream() {
        assert!(parse_records_str("").unwrap().is_empty());
        assert!(parse_records_str("\n  \n").unwrap().is_empty());
    }

    #[test]
    fn arity_errors_are_positioned() {
        let bad = r#"{"label":"x","p":2,"val_n":8,"twists":[{"tag":-1,"ratio":-1,"val_twist":8}]}"#;
        let input = format!("\n{bad}\n");
        match parse_records_str(&input) {
            Err(IoError::Parse { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "twists");
            }
            other => panic!("{other:?}"),
        }
        let odd = r#"{"label":"y","p":7,"val_n":2,"twists":[{"tag":7,"ratio":1,"val_twist":2}]}"#;
        assert!(matches!(parse_records_str(odd), Err(IoError::Parse { field, .. }) if field == "twists"));
    }

    #[test]
    fn field_errors_name_the_field() {
        let missing = r#"{"label":"x","p":5,"twists":[{"tag":5,"val_twist":2}]}"#;
        assert!(matches!(parse_records_str(missing), Err(IoError::Parse { field, .. }) if field == "val_n"));
        let bad_sign = r#"{"label":"x","p":5,"val_n":2,"sign_f":3,"twists":[{"tag":5,"val_twist":2}]}"#;
        assert!(parse_records_str(bad_sign).is_err());
        let unknown = r#"{"label":"x","p":5,"val_n":2,"colour":1,"twists":[{"tag":5,"val_twist":2}]}"#;
        assert!(matches!(parse_records_str(unknown), Err(IoError::Parse { field, .. }) if field == "colour"));
        assert!(matches!(parse_records_str("{not json"), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = r#"{"label":"a","p":5,"val_n":1,"twists":[{"tag":5,"val_twist":2}]}"#;
        let input = format!("{r}\n{r}\n");
        assert!(matches!(
            parse_records_str(&input),
            Err(IoError::DuplicateLabel { line: 2, .. })
        ));
    }

    #[test]
    fn odd_part_normalization() {
        // χ_5(3) = (3/5) = -1 flips the raw sign product
        let r = r#"{"label":"a","p":5,"val_n":2,"sign_f":1,"odd_part":3,"twists":[{"tag":5,"sign_twist":1,"val_twist":2}]}"#;
        let rep = classify_record(&parse_records_str(r).unwrap()[0]);
        assert_eq!(rep.local_type.as_deref(), Some("SupercuspidalUnramified"));
        let local = r#"{"label":"a","p":5,"val_n":2,"sign_f":1,"odd_part":3,"sign_convention":"local","twists":[{"tag":5,"sign_twist":1,"val_twist":2}]}"#;
        let rep = classify_record(&parse_records_str(local).unwrap()[0]);
        assert_eq!(rep.local_type.as_deref(), Some("PrincipalSeries"));
        let missing = r#"{"label":"a","p":5,"val_n":2,"sign_f":1,"twists":[{"tag":5,"sign_twist":1,"val_twist":2}]}"#;
        let rep = classify_record(&parse_records_str(missing).unwrap()[0]);
        assert_eq!(rep.status, Status::Inconsistent);
    }

    #[test]
    fn inconsistent_record_is_reported_not_fatal() {
        let good = r#"{"label":"g","p":3,"val_n":2,"twists":[{"tag":-3,"val_twist":1}]}"#;
        let bad = r#"{"label":"b","p":2,"val_n":2,"twists":[{"tag":-1,"ratio":-1,"val_twist":2},{"tag":2,"ratio":1,"val_twist":2},{"tag":-2,"ratio":-1,"val_twist":2}]}"#;
        let recs = parse_records_str(&format!("{good}\n{bad}\n")).unwrap();
        let reps = run_classify(&recs);
        assert_eq!(reps[0].local_type.as_deref(), Some("Steinberg"));
        assert_eq!(reps[1].status, Status::Inconsistent);
        assert!(reps[1].error.as_ref().unwrap().contains("allowed-types row"));
    }

    #[test]
    fn round_trip() {
        let recs = parse_records_str(E768B).unwrap();
        assert_eq!(parse_records_str(&serialize_records(&recs)).unwrap(), recs);
    }

    #[test]
    fn csv_output() {
        let reps = run_classify(&parse_records_str(E768B).unwrap());
        let mut buf = Vec::new();
        write_reports_csv(&reps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("label,p,val_n,type,status,evidence"));
        assert!(text.contains("E768b,2,8,{SCIb(sqrt2)},ok,"));
    }

    #[test]
    fn oracle_sweeps_pass() {
        let opts = OracleOptions {
            p_min: 3,
            p_max: 7,
            max_modulus: 50,
            weight: 2,
        };
        for case in [OracleCase::Gauss, OracleCase::Ps, OracleCase::ScUnram, OracleCase::ScRam] {
            let rep = run_oracle(case, &opts).unwrap();
            assert!(rep.checked > 0 && rep.all_pass(), "{case:?}: {rep:?}");
        }
        let five = OracleOptions {
            p_min: 5,
            p_max: 5,
            max_modulus: 5,
            weight: 2,
        };
        assert_eq!(run_oracle(OracleCase::Gauss, &five).unwrap().checked, 3);
        let bad = OracleOptions {
            p_max: 5000,
            ..five
        };
        assert!(run_oracle(OracleCase::Gauss, &bad).is_err());
    }

    #[test]
    fn aux_prime_requests() {
        let req = |d, force, bound| AuxRequest {
            field: FieldSpec::Quadratic(d),
            target_prime: 31,
            root: Some(25),
            bound,
            force,
        };
        assert_eq!(run_aux_prime(&req(5, false, 100)).unwrap(), AuxOutcome::NotNeeded);
        assert_eq!(run_aux_prime(&req(5, true, 100)).unwrap(), AuxOutcome::Found(11));
        assert_eq!(run_aux_prime(&req(5, true, 2)).unwrap(), AuxOutcome::NoneWithinBound);
    }

    #[test]
    fn table_parsing() {
        let text = "{\"field\":\"t^3+2t^2-3t-1\",\"units\":[\"t(t-1)\"]}\n{\"prime\":3,\"signs\":[-1],\"ideal\":\"t+1\"}\n{\"prime\":7,\"signs\":[-1]}\n";
        let table = parse_table(text.as_bytes()).unwrap();
        assert_eq!(table.rows.len(), 2);
        let req = AuxRequest {
            field: FieldSpec::Table(table),
            target_prime: 3,
            root: None,
            bound: 50,
            force: false,
        };
        assert_eq!(run_aux_prime(&req).unwrap(), AuxOutcome::Found(7));
        let ragged = "{\"field\":\"x\",\"units\":[\"u\"]}\n{\"prime\":3,\"signs\":[-1,1]}\n";
        assert!(matches!(parse_table(ragged.as_bytes()), Err(IoError::Hilbert(HilbertError::RaggedTable { .. }))));
        let dup = "{\"field\":\"x\",\"units\":[\"u\"]}\n{\"prime\":3,\"signs\":[-1]}\n{\"prime\":3,\"signs\":[1]}\n";
        assert!(parse_table(dup.as_bytes()).is_err());
    }

    #[test]
    fn table_rows() {
        assert_eq!(tables(2, 8).unwrap(), "p = 2, val = 8: {PS, SCIa, SCIb, SCIc}");
        assert_eq!(tables(5, 1).unwrap(), "p = 5, val = 1: {Steinberg}");
        assert!(tables(9, 1).is_err());
    }
}
