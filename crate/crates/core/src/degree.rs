//! Degree-formula arithmetic on variety records.
//!
//! A record is the triple `(dim X, χ(O_X), n_X)` of an abstract projective
//! variety, with `n_X` the index (positive generator of the image of the
//! degree on zero-cycles). Records are trusted; the checks report whether
//! the data is consistent with the valuation bounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{vp_int, PValuation, Prime};

/// Integer field accepting JSON numbers or decimal strings.
fn big_int<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        UInt(u64),
        Str(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(n) => Ok(BigInt::from(n)),
        Raw::UInt(n) => Ok(BigInt::from(n)),
        Raw::Str(s) => s.trim().parse().map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}"))),
    }
}

fn small_int<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
    let n = big_int(d)?;
    u64::try_from(&n).map_err(|_| serde::de::Error::custom(format!("{n} out of range")))
}

fn big_string<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyRecord {
    pub name: String,
    #[serde(deserialize_with = "small_int")]
    pub dim: u64,
    #[serde(deserialize_with = "big_int", serialize_with = "big_string")]
    pub chi: BigInt,
    #[serde(deserialize_with = "big_int", serialize_with = "big_string")]
    pub index: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismRecord {
    pub source: String,
    pub target: String,
    #[serde(alias = "deg_f", deserialize_with = "big_int", serialize_with = "big_string")]
    pub deg: BigInt,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordSet {
    #[serde(default)]
    pub varieties: Vec<VarietyRecord>,
    #[serde(default)]
    pub morphisms: Vec<MorphismRecord>,
}

impl VarietyRecord {
    pub fn new(name: &str, dim: u64, chi: i64, index: i64) -> Result<Self> {
        let r = VarietyRecord { name: name.into(), dim, chi: chi.into(), index: index.into() };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.index.is_positive() {
            return Err(Error::Records(format!("{}: index must be positive, got {}", self.name, self.index)));
        }
        Ok(())
    }
}

impl RecordSet {
    /// Parse and validate; an empty document is an empty set.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(RecordSet::default());
        }
        let set: RecordSet = serde_json::from_str(text).map_err(|e| Error::Records(e.to_string()))?;
        let mut names = BTreeMap::new();
        for (k, v) in set.varieties.iter().enumerate() {
            v.validate().map_err(|e| Error::Records(format!("varieties[{k}]: {e}")))?;
            if names.insert(v.name.clone(), k).is_some() {
                return Err(Error::Records(format!("varieties[{k}]: duplicate name {:?}", v.name)));
            }
        }
        for (k, m) in set.morphisms.iter().enumerate() {
            for end in [&m.source, &m.target] {
                if !names.contains_key(end) {
                    return Err(Error::Records(format!("morphisms[{k}]: unknown variety {end:?}")));
                }
            }
            if m.deg.is_negative() {
                return Err(Error::Records(format!("morphisms[{k}]: negative degree")));
            }
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&VarietyRecord> {
        self.varieties
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::Records(format!("unknown variety {name:?}")))
    }
}

/// `n_X(p) = p^{v_p(n_X)}`.
pub fn index_p_part(r: &VarietyRecord, p: Prime) -> BigInt {
    match vp_int(&r.index, p) {
        PValuation::Finite(v) => num_traits::pow(p.big(), v as usize),
        PValuation::Infinity => unreachable!("index is positive"),
    }
}

/// `dim = i(p-1)` with `i > 0`.
pub fn infer_i(dim: u64, p: Prime) -> Result<u64> {
    let step = p.get() - 1;
    if dim == 0 || !dim.is_multiple_of(step) {
        return Err(Error::Domain(format!("dimension {dim} is not a positive multiple of {step}")));
    }
    Ok(dim / step)
}

/// `t_p(X) = p^{i-1} χ(O_X) mod n_X(p)`, with `i` from `dim X = i(p-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpClass {
    pub i: u64,
    pub residue: BigInt,
    pub modulus: BigInt,
    /// `i ≤ p`, the range of the degree formula.
    pub in_range: bool,
}

pub fn t_p_class(r: &VarietyRecord, p: Prime) -> Result<TpClass> {
    let i = infer_i(r.dim, p)?;
    let modulus = index_p_part(r, p);
    let value = num_traits::pow(p.big(), (i - 1) as usize) * &r.chi;
    Ok(TpClass { i, residue: value.mod_floor(&modulus), modulus, in_range: i <= p.get() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "VIOLATES")]
    Violates,
    #[serde(rename = "not-applicable")]
    NotApplicable,
    #[serde(rename = "strongly p-incompressible")]
    StronglyIncompressible,
    #[serde(rename = "no conclusion")]
    NoConclusion,
    #[serde(rename = "INCONSISTENT DATA")]
    InconsistentData,
    #[serde(rename = "correspondence impossible")]
    CorrespondenceImpossible,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violates => "VIOLATES",
            Verdict::NotApplicable => "not-applicable",
            Verdict::StronglyIncompressible => "strongly p-incompressible",
            Verdict::NoConclusion => "no conclusion",
            Verdict::InconsistentData => "INCONSISTENT DATA",
            Verdict::CorrespondenceImpossible => "correspondence impossible",
        }
    }

    /// Verdicts that contradict a theorem and make the CLI exit with 1.
    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violates | Verdict::InconsistentData)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One verdict with the inequality or congruence it rests on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
    pub detail: Value,
    pub reference: &'static str,
}

const INDEX_BOUND: &str = "v_p(n_X) <= [dim X/(p-1)] + v_p(chi(O_X)) when dim X < p(p-1)";
const DEGREE_FORMULA: &str = "t_p(Y) = deg f * t_p(X) mod n_X(p), dim X = dim Y = i(p-1), 0 < i <= p";
const INCOMPRESSIBILITY: &str =
    "v_p(n_X) >= i, p does not divide chi(O_X), 0 < i <= p: dim X >= i(p-1), equality gives strong p-incompressibility";
const NO_CORRESPONDENCE: &str =
    "v_p(n_Y) >= v_p(n_X) >= i, p | chi(O_Y), p does not divide chi(O_X): no correspondence X ~> Y of multiplicity prime to p";

fn vp_big(n: &BigInt, p: Prime) -> PValuation {
    vp_int(n, p)
}

/// Index bound for `dim X < p(p-1)`.
pub fn check_index_bound(r: &VarietyRecord, p: Prime) -> VerdictReport {
    let range = p.get() * (p.get() - 1);
    let lhs = vp_big(&r.index, p);
    let rhs = PValuation::Finite((r.dim / (p.get() - 1)) as i64) + vp_big(&r.chi, p);
    let verdict = if r.dim >= range {
        Verdict::NotApplicable
    } else if lhs <= rhs {
        Verdict::Consistent
    } else {
        Verdict::Violates
    };
    VerdictReport {
        check: "index-bound".into(),
        subject: r.name.clone(),
        verdict,
        detail: json!({"p": p.get(), "vp_index": lhs.to_string(), "bound": rhs.to_string(), "dim": r.dim}),
        reference: INDEX_BOUND,
    }
}

/// Degree formula for `f: Y → X`, `Y` the source record.
pub fn check_degree_formula(m: &MorphismRecord, records: &RecordSet, p: Prime) -> Result<VerdictReport> {
    let y = records.get(&m.source)?;
    let x = records.get(&m.target)?;
    if x.dim != y.dim {
        return Err(Error::Domain(format!("{} and {} have different dimensions", y.name, x.name)));
    }
    let tx = t_p_class(x, p)?;
    let ty = t_p_class(y, p)?;
    if !tx.in_range {
        return Err(Error::Domain(format!("i = {} exceeds p = {p}", tx.i)));
    }
    let modulus = &tx.modulus;
    let lhs = ty.residue.mod_floor(modulus);
    let rhs = (&m.deg * &tx.residue).mod_floor(modulus);
    let verdict = if lhs == rhs { Verdict::Consistent } else { Verdict::Violates };
    Ok(VerdictReport {
        check: "degree-formula".into(),
        subject: format!("{} -> {}", y.name, x.name),
        verdict,
        detail: json!({
            "p": p.get(), "i": tx.i, "deg": m.deg.to_string(), "modulus": modulus.to_string(),
            "t_p_source": lhs.to_string(), "deg_times_t_p_target": rhs.to_string(),
        }),
        reference: DEGREE_FORMULA,
    })
}

/// Incompressibility test for `i`, or the largest `i ≤ p` with
/// `v_p(n_X) ≥ i` when `i` is `None`. `None` is returned when the
/// hypotheses fail (`p | χ` or `v_p(n_X) = 0`).
pub fn incompressibility_criterion(r: &VarietyRecord, p: Prime, i: Option<u64>) -> Option<VerdictReport> {
    let v = vp_big(&r.index, p).finite()?;
    if (&r.chi % p.big()).is_zero() {
        return None;
    }
    let i = match i {
        Some(i) if i >= 1 && i <= p.get() && v >= i as i64 => i,
        Some(_) => return None,
        None if v >= 1 => (v as u64).min(p.get()),
        None => return None,
    };
    let threshold = i * (p.get() - 1);
    let verdict = match r.dim.cmp(&threshold) {
        std::cmp::Ordering::Less => Verdict::InconsistentData,
        std::cmp::Ordering::Equal => Verdict::StronglyIncompressible,
        std::cmp::Ordering::Greater => Verdict::NoConclusion,
    };
    Some(VerdictReport {
        check: "incompressibility".into(),
        subject: r.name.clone(),
        verdict,
        detail: json!({"p": p.get(), "i": i, "dim": r.dim, "threshold": threshold}),
        reference: INCOMPRESSIBILITY,
    })
}

/// `X ⇝ Y` of multiplicity prime to `p` is impossible under the
/// index-reduction hypotheses; `None` when they do not hold.
pub fn correspondence_obstruction(x: &VarietyRecord, y: &VarietyRecord, p: Prime, i: u64) -> Option<VerdictReport> {
    let vx = vp_big(&x.index, p).finite()?;
    let vy = vp_big(&y.index, p).finite()?;
    let limit = i * (p.get() - 1);
    let holds = i >= 1
        && i <= p.get()
        && vy >= vx
        && vx >= i as i64
        && (&y.chi % p.big()).is_zero()
        && !(&x.chi % p.big()).is_zero()
        && x.dim <= limit
        && y.dim <= limit;
    holds.then(|| VerdictReport {
        check: "correspondence".into(),
        subject: format!("{} ~> {}", x.name, y.name),
        verdict: Verdict::CorrespondenceImpossible,
        detail: json!({"p": p.get(), "i": i}),
        reference: NO_CORRESPONDENCE,
    })
}

/// Summary verdict for one record: a violated index bound wins, then a
/// strong incompressibility conclusion, else "consistent".
pub fn record_verdict(r: &VarietyRecord, p: Prime) -> VerdictReport {
    let bound = check_index_bound(r, p);
    if bound.verdict == Verdict::Violates {
        return bound;
    }
    if let Some(inc) = incompressibility_criterion(r, p, None) {
        if inc.verdict != Verdict::NoConclusion {
            return inc;
        }
    }
    VerdictReport { verdict: Verdict::Consistent, ..bound }
}

/// One summary verdict per record, one per ordered pair of records ruled out
/// as a correspondence of multiplicity prime to `p`, then one per morphism.
pub fn evaluate(records: &RecordSet, p: Prime) -> Result<Vec<VerdictReport>> {
    let mut out: Vec<VerdictReport> = records.varieties.iter().map(|r| record_verdict(r, p)).collect();
    for x in &records.varieties {
        for y in records.varieties.iter().filter(|y| y.name != x.name) {
            out.extend((1..=p.get()).find_map(|i| correspondence_obstruction(x, y, p, i)));
        }
    }
    for m in &records.morphisms {
        out.push(check_degree_formula(m, records, p)?);
    }
    Ok(out)
}

/// Records with `i ≤ p`, index 1 and the Euler characteristic of a model.
pub fn trivial_index_record(name: &str, dim: u64, chi: BigInt) -> VarietyRecord {
    VarietyRecord { name: name.into(), dim, chi, index: BigInt::one() }
}

pub const SAMPLE_RECORDS: &str = include_str!("../data/sample_records.json");

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn rec(dim: u64, chi: i64, index: i64) -> VarietyRecord {
        VarietyRecord::new("r", dim, chi, index).unwrap()
    }

    #[test]
    fn index_parts() {
        assert_eq!(index_p_part(&rec(1, 1, 12), prime(2)), BigInt::from(4));
        assert_eq!(index_p_part(&rec(1, 1, 1), prime(7)), BigInt::one());
        assert_eq!(index_p_part(&rec(2, 1, 3), prime(3)), BigInt::from(3));
        assert!(VarietyRecord::new("bad", 1, 1, 0).is_err());
    }

    #[test]
    fn t_p_examples() {
        for p in [2u64, 3, 5, 7] {
            let t = t_p_class(&rec(p - 1, 1, p as i64), prime(p)).unwrap();
            assert_eq!((t.i, t.residue, t.modulus), (1, BigInt::one(), BigInt::from(p)));
        }
        let t = t_p_class(&rec(2, 2, 4), prime(3)).unwrap();
        assert_eq!((t.i, t.residue.clone(), t.modulus), (1, BigInt::zero(), BigInt::one()));
        let t = t_p_class(&rec(4, 1, 8), prime(2)).unwrap();
        assert_eq!(t.i, 4);
        assert!(!t.in_range);
        assert!(t.residue.is_zero());
        assert!(t_p_class(&rec(3, 1, 1), prime(3)).is_err());
        assert!(t_p_class(&rec(0, 1, 1), prime(2)).is_err());
    }

    #[test]
    fn index_bound_examples() {
        assert_eq!(check_index_bound(&rec(1, 1, 2), prime(2)).verdict, Verdict::Consistent);
        assert_eq!(check_index_bound(&rec(1, 1, 4), prime(2)).verdict, Verdict::Violates);
        assert_eq!(check_index_bound(&rec(1, 0, 1024), prime(2)).verdict, Verdict::Consistent);
        assert_eq!(check_index_bound(&rec(2, 1, 4), prime(2)).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn degree_formula_examples() {
        let set = RecordSet::from_json(
            r#"{"varieties": [{"name": "X", "dim": 2, "chi": 1, "index": 3},
                               {"name": "Y", "dim": 2, "chi": 1, "index": 3},
                               {"name": "T", "dim": 2, "chi": 5, "index": 1}],
                "morphisms": [{"source": "Y", "target": "X", "deg": 4},
                              {"source": "Y", "target": "X", "deg": 0},
                              {"source": "Y", "target": "T", "deg": 0}]}"#,
        )
        .unwrap();
        let p = prime(3);
        let v: Vec<Verdict> = set.morphisms.iter().map(|m| check_degree_formula(m, &set, p).unwrap().verdict).collect();
        assert_eq!(v, [Verdict::Consistent, Verdict::Violates, Verdict::Consistent]);
    }

    #[test]
    fn incompressibility_examples() {
        for p in [2u64, 3, 5] {
            let sb = rec(p - 1, 1, p as i64);
            assert_eq!(incompressibility_criterion(&sb, prime(p), Some(1)).unwrap().verdict, Verdict::StronglyIncompressible);
        }
        let v = incompressibility_criterion(&rec(1, 1, 4), prime(2), Some(2)).unwrap();
        assert_eq!(v.verdict, Verdict::InconsistentData);
        let v = incompressibility_criterion(&rec(3, 1, 2), prime(2), Some(1)).unwrap();
        assert_eq!(v.verdict, Verdict::NoConclusion);
        assert!(incompressibility_criterion(&rec(1, 2, 2), prime(2), Some(1)).is_none());
    }

    #[test]
    fn correspondence_examples() {
        let x = VarietyRecord::new("X", 2, 1, 3).unwrap();
        let y = VarietyRecord::new("Y", 2, 3, 9).unwrap();
        assert!(correspondence_obstruction(&x, &y, prime(3), 1).is_some());
        assert!(correspondence_obstruction(&y, &x, prime(3), 1).is_none());

        let set = RecordSet { varieties: vec![x, y], morphisms: vec![] };
        let out = evaluate(&set, prime(3)).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[2].verdict, Verdict::CorrespondenceImpossible);
        assert_eq!(out[2].subject, "X ~> Y");
    }

    #[test]
    fn sample_file_verdicts() {
        let set = RecordSet::from_json(SAMPLE_RECORDS).unwrap();
        let verdicts: Vec<String> = evaluate(&set, prime(3)).unwrap().iter().map(|v| v.verdict.to_string()).collect();
        assert_eq!(verdicts, ["strongly p-incompressible", "consistent", "VIOLATES"]);
    }

    #[test]
    fn parsing_accepts_strings_and_rejects_garbage() {
        let set = RecordSet::from_json(
            r#"{"varieties": [{"name": "big", "dim": "2", "chi": "123456789012345678901234567890", "index": 9}]}"#,
        )
        .unwrap();
        assert_eq!(set.varieties[0].chi.to_string(), "123456789012345678901234567890");
        assert!(RecordSet::from_json("").unwrap().varieties.is_empty());
        assert!(RecordSet::from_json("{").is_err());
        assert!(RecordSet::from_json(r#"{"varieties": [{"name": "a", "dim": 1, "chi": 1, "index": -1}]}"#).is_err());
        assert!(RecordSet::from_json(r#"{"morphisms": [{"source": "a", "target": "b", "deg": 1}]}"#).is_err());
    }
}
