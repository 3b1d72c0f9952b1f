//! Registry of named checks with their parameters and defaults.

use std::fmt;
use std::path::PathBuf;

use chern_core::degree::{self, RecordSet, Verdict};
use chern_core::exactnum::Prime;
use chern_core::integrality::{
    sweep_chpsi, sweep_graded, sweep_lci, sweep_mainvp, sweep_replay, sweep_tdpsi, sweep_toddp, sweep_toddvp,
};
use chern_core::kchow::{KHomElt, ModelVariety};
use chern_core::numeric_checks::{check_inv_series, check_legendre, check_todd_numbers, check_wilson_pp};
use chern_core::report::CheckReport;
use chern_core::steenrod::{
    check_coh_axioms, check_pipelines, check_prop_st, check_prop_tr_smooth, check_reduced_steenrod,
    check_st_witness, check_well_defined, sweep, sweep_cartan, sweep_riemann_roch,
};
use serde_json::json;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub p: Option<u64>,
    pub l: Option<i64>,
    pub variety: Option<ModelVariety>,
    pub max_dim: Option<u32>,
    pub samples: Option<usize>,
    pub order: Option<usize>,
    pub max_n: Option<u64>,
    pub records: Option<PathBuf>,
    pub seed: u64,
}

impl Params {
    /// Names of the parameters that were set explicitly.
    fn given(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let flags = [
            ("p", self.p.is_some()),
            ("l", self.l.is_some()),
            ("variety", self.variety.is_some()),
            ("max-dim", self.max_dim.is_some()),
            ("samples", self.samples.is_some()),
            ("order", self.order.is_some()),
            ("max-n", self.max_n.is_some()),
            ("records", self.records.is_some()),
        ];
        for (name, set) in flags {
            if set {
                v.push(name);
            }
        }
        v
    }
}

#[derive(Debug)]
pub enum CheckError {
    Unknown(String),
    BadParams(String),
    Core(chern_core::Error),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Unknown(id) => write!(f, "unknown check {id:?}; run `chern verify --list`"),
            CheckError::BadParams(m) => write!(f, "bad parameters: {m}"),
            CheckError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CheckError {}

impl From<chern_core::Error> for CheckError {
    fn from(e: chern_core::Error) -> Self {
        CheckError::Core(e)
    }
}

type Run = fn(&Params) -> Result<CheckReport, CheckError>;

pub struct CheckDef {
    pub id: &'static str,
    pub about: &'static str,
    pub accepts: &'static [&'static str],
    run: Run,
}

const CORPUS: [&str; 6] = ["P1", "P2", "P3", "P4", "P2xP1", "P2xP3"];

pub const REGISTRY: &[CheckDef] = &[
    CheckDef {
        id: "todd-numbers",
        about: "Todd numbers two ways, and tau_d times the x^d Todd coefficient is integral (order = max d, default 10)",
        accepts: &["order"],
        run: run_todd_numbers,
    },
    CheckDef {
        id: "inv-series",
        about: "(x R) o (x W) = x over Z/p up to the order (default p^4; p in 2,3,5)",
        accepts: &["p", "order"],
        run: run_inv_series,
    },
    CheckDef {
        id: "legendre",
        about: "digit-sum formula for v_p(n!) against brute force, n <= max-n (10^4), primes <= p (11)",
        accepts: &["p", "max-n"],
        run: run_legendre,
    },
    CheckDef {
        id: "wilson-pp",
        about: "(p^i)! p^{-(p^i-1)/(p-1)} = (-1)^i mod p for (2,<=4), (3,<=3), (5,<=2)",
        accepts: &[],
        run: run_wilson_pp,
    },
    CheckDef {
        id: "chpsi",
        about: "ch_n o psi_l = l^{-n} ch_n on K'_0 bases (l in 2,3,5,7; six-model corpus)",
        accepts: &["l", "variety", "samples"],
        run: run_chpsi,
    },
    CheckDef {
        id: "graded",
        about: "psi_l(x) - l^{-d} x drops filtration (l in 2,3,5,7; six-model corpus)",
        accepts: &["l", "variety", "samples"],
        run: run_graded,
    },
    CheckDef {
        id: "mainvp",
        about: "v_p(ch_{d-n}(x)) >= -[n/(p-1)] on bases plus random classes (p in 2,3,5; dim <= 8; 100 samples)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_mainvp,
    },
    CheckDef {
        id: "mainvp-replay",
        about: "replay of the integrality argument through psi_l with l a primitive root mod p^2",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_replay,
    },
    CheckDef {
        id: "lci-integrality",
        about: "integrality of ch on every model for all n (dim <= 8)",
        accepts: &["variety", "max-dim"],
        run: run_lci,
    },
    CheckDef {
        id: "toddvp",
        about: "v_p(Td^j(u)) >= -[j/(p-1)] for random virtual bundles (p in 2,3,5; dim <= 8; 50 bundles)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_toddvp,
    },
    CheckDef {
        id: "toddp",
        about: "p^j Td^{j(p-1)}(-u) = r_j(u) mod p (p in 2,3,5; dim <= 8; 50 bundles)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_toddp,
    },
    CheckDef {
        id: "tdpsi",
        about: "the three Todd/Adams identities for random bundles (l in 2,3,5; dim <= 6; 50 bundles)",
        accepts: &["l", "variety", "max-dim", "samples"],
        run: run_tdpsi,
    },
    CheckDef {
        id: "pipelines-agree",
        about: "K-theoretic and genus constructions of T_i agree on basis cycles (p in 2,3; dim <= 6)",
        accepts: &["p", "variety", "max-dim"],
        run: run_pipelines,
    },
    CheckDef {
        id: "well-defined",
        about: "T_i does not depend on the lift (p in 2,3; dim <= 6; 100 samples)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_well_defined,
    },
    CheckDef {
        id: "coh-axioms",
        about: "T^0 = id, T^i[X] = 0, T^1(x) = -x^p on divisors (p in 2,3; dim <= 6)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_coh_axioms,
    },
    CheckDef {
        id: "cartan",
        about: "Cartan formulas for T_i and T^i on random pairs (p in 2,3; dim <= 4; 50 pairs)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_cartan,
    },
    CheckDef {
        id: "rr-T",
        about: "pullback and pushforward formulas for T along the morphism corpus (p in 2,3; dim <= 4)",
        accepts: &["p", "variety", "max-dim"],
        run: run_rr,
    },
    CheckDef {
        id: "prop-st",
        about: "T'_i = (-1)^i S_i for i <= p on P^n, n <= 8 (p in 2,3), plus the P^4 witness at p = 2",
        accepts: &["p", "variety", "max-dim"],
        run: run_prop_st,
    },
    CheckDef {
        id: "prop-tr",
        about: "T'[X] = r(-T_X)[X], T = T', and the three constructions of T' agree (p in 2,3; dim <= 6)",
        accepts: &["p", "variety", "max-dim"],
        run: run_prop_tr,
    },
    CheckDef {
        id: "reduced-steenrod",
        about: "reduced Steenrod recursions reassemble S (p in 2,3; dim <= 6)",
        accepts: &["p", "variety", "max-dim", "samples"],
        run: run_reduced,
    },
    CheckDef {
        id: "degf",
        about: "degree formula: records file at p (default 3), or trivial-index records of all models",
        accepts: &["p", "records", "max-dim"],
        run: run_degf,
    },
];

pub fn lookup(id: &str) -> Option<&'static CheckDef> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Validate the parameters against the check and run it.
pub fn run_check(id: &str, params: &Params) -> Result<CheckReport, CheckError> {
    let def = lookup(id).ok_or_else(|| CheckError::Unknown(id.to_string()))?;
    let extra: Vec<&str> = params.given().into_iter().filter(|g| !def.accepts.contains(g)).collect();
    if !extra.is_empty() {
        return Err(CheckError::BadParams(format!(
            "{id} does not take {}; accepted: {}",
            extra.iter().map(|e| format!("--{e}")).collect::<Vec<_>>().join(", "),
            if def.accepts.is_empty() { "none".to_string() } else { def.accepts.join(", ") }
        )));
    }
    (def.run)(params)
}

fn prime(p: u64) -> Result<Prime, CheckError> {
    Prime::new(p).map_err(|e| CheckError::BadParams(e.to_string()))
}

fn primes(params: &Params, default: &[u64]) -> Result<Vec<Prime>, CheckError> {
    match params.p {
        Some(p) => Ok(vec![prime(p)?]),
        None => default.iter().map(|&p| prime(p)).collect(),
    }
}

fn ls(params: &Params, default: &[i64]) -> Result<Vec<i64>, CheckError> {
    match params.l {
        Some(l) if l.abs() < 2 => Err(CheckError::BadParams(format!("l must satisfy |l| >= 2, got {l}"))),
        Some(l) => Ok(vec![l]),
        None => Ok(default.to_vec()),
    }
}

fn models(params: &Params, max_dim: u32) -> Vec<ModelVariety> {
    match &params.variety {
        Some(v) => vec![v.clone()],
        None => ModelVariety::all_up_to_dim(params.max_dim.unwrap_or(max_dim)),
    }
}

fn corpus(params: &Params) -> Vec<ModelVariety> {
    match &params.variety {
        Some(v) => vec![v.clone()],
        None => CORPUS.iter().map(|s| s.parse().expect("corpus names parse")).collect(),
    }
}

/// One report per prime, folded into a single report under `id`.
fn over_primes<F>(id: &str, ps: &[Prime], seed: u64, mut run: F) -> Result<CheckReport, CheckError>
where
    F: FnMut(Prime) -> Result<CheckReport, CheckError>,
{
    let mut total = CheckReport::new(id, seed);
    for &p in ps {
        let r = run(p)?;
        if ps.len() == 1 {
            return Ok(r);
        }
        for (k, v) in &r.params {
            if k != "p" {
                total.params.entry(k.clone()).or_insert_with(|| v.clone());
            }
        }
        total.absorb(r);
    }
    Ok(total.with_param("p", ps.iter().map(|p| p.get()).collect::<Vec<_>>()))
}

fn run_todd_numbers(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(check_todd_numbers(params.order.map_or(10, |o| o as u64)))
}

fn run_inv_series(params: &Params) -> Result<CheckReport, CheckError> {
    over_primes("inv-series", &primes(params, &[2, 3, 5])?, 0, |p| {
        let order = params.order.unwrap_or_else(|| (p.get() as usize).pow(4));
        Ok(check_inv_series(p, order)?)
    })
}

fn run_legendre(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(check_legendre(params.max_n.unwrap_or(10_000), params.p.unwrap_or(11)))
}

fn run_wilson_pp(_: &Params) -> Result<CheckReport, CheckError> {
    Ok(check_wilson_pp(&[(2, 4), (3, 3), (5, 2)])?)
}

fn run_chpsi(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(sweep_chpsi(&ls(params, &[2, 3, 5, 7])?, &corpus(params), params.samples.unwrap_or(0), params.seed)?)
}

fn run_graded(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(sweep_graded(&ls(params, &[2, 3, 5, 7])?, &corpus(params), params.samples.unwrap_or(0), params.seed)?)
}

fn run_mainvp(params: &Params) -> Result<CheckReport, CheckError> {
    let vs = models(params, 8);
    over_primes("mainvp", &primes(params, &[2, 3, 5])?, params.seed, |p| {
        Ok(sweep_mainvp(p, &vs, params.samples.unwrap_or(100), params.seed)?)
    })
}

fn run_replay(params: &Params) -> Result<CheckReport, CheckError> {
    let vs = models(params, 6);
    over_primes("mainvp-replay", &primes(params, &[2, 3, 5])?, params.seed, |p| {
        Ok(sweep_replay(p, &vs, params.samples.unwrap_or(10), params.seed)?)
    })
}

fn run_lci(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(sweep_lci(&models(params, 8))?)
}

fn run_toddvp(params: &Params) -> Result<CheckReport, CheckError> {
    let vs = models(params, 8);
    over_primes("toddvp", &primes(params, &[2, 3, 5])?, params.seed, |p| {
        Ok(sweep_toddvp(p, &vs, params.samples.unwrap_or(50), params.seed)?)
    })
}

fn run_toddp(params: &Params) -> Result<CheckReport, CheckError> {
    let vs = models(params, 8);
    over_primes("toddp", &primes(params, &[2, 3, 5])?, params.seed, |p| {
        Ok(sweep_toddp(p, &vs, params.samples.unwrap_or(50), params.seed)?)
    })
}

fn run_tdpsi(params: &Params) -> Result<CheckReport, CheckError> {
    Ok(sweep_tdpsi(&ls(params, &[2, 3, 5])?, &models(params, 6), params.samples.unwrap_or(50), params.seed)?)
}

fn steenrod_sweep<F>(id: &'static str, params: &Params, max_dim: u32, case: F) -> Result<CheckReport, CheckError>
where
    F: Fn(Prime, usize, &ModelVariety) -> chern_core::Result<CheckReport> + Sync,
{
    let vs = models(params, max_dim);
    over_primes(id, &primes(params, &[2, 3])?, params.seed, |p| {
        Ok(sweep(id, p, &vs, params.seed, |v, x| case(p, v, x))?)
    })
}

fn run_pipelines(params: &Params) -> Result<CheckReport, CheckError> {
    steenrod_sweep("pipelines-agree", params, 6, |p, _, x| check_pipelines(x, p))
}

fn run_well_defined(params: &Params) -> Result<CheckReport, CheckError> {
    let n = params.samples.unwrap_or(100);
    steenrod_sweep("well-defined", params, 6, |p, v, x| check_well_defined(x, p, n, params.seed, v))
}

fn run_coh_axioms(params: &Params) -> Result<CheckReport, CheckError> {
    let n = params.samples.unwrap_or(20);
    steenrod_sweep("coh-axioms", params, 6, |p, v, x| check_coh_axioms(x, p, n, params.seed, v))
}

fn run_reduced(params: &Params) -> Result<CheckReport, CheckError> {
    let n = params.samples.unwrap_or(20);
    steenrod_sweep("reduced-steenrod", params, 6, |p, v, x| check_reduced_steenrod(x, p, n, params.seed, v))
}

fn run_prop_tr(params: &Params) -> Result<CheckReport, CheckError> {
    steenrod_sweep("prop-tr", params, 6, |p, _, x| check_prop_tr_smooth(x, p))
}

fn run_cartan(params: &Params) -> Result<CheckReport, CheckError> {
    let vs = models(params, 4);
    over_primes("cartan", &primes(params, &[2, 3])?, params.seed, |p| {
        Ok(sweep_cartan(p, &vs, params.samples.unwrap_or(50), params.seed)?)
    })
}

fn run_rr(params: &Params) -> Result<CheckReport, CheckError> {
    let max = params.max_dim.unwrap_or(4);
    let vs = models(params, max);
    over_primes("rr-T", &primes(params, &[2, 3])?, params.seed, |p| {
        Ok(sweep_riemann_roch(p, &vs, max, params.seed)?)
    })
}

fn run_prop_st(params: &Params) -> Result<CheckReport, CheckError> {
    let vs: Vec<ModelVariety> = match &params.variety {
        Some(v) => vec![v.clone()],
        None => (0..=params.max_dim.unwrap_or(8)).map(ModelVariety::projective).collect(),
    };
    let ps = primes(params, &[2, 3])?;
    let mut r = over_primes("prop-st", &ps, params.seed, |p| {
        Ok(sweep("prop-st", p, &vs, params.seed, |_, x| check_prop_st(x, p))?)
    })?;
    if ps.iter().any(|p| p.get() == 2) && params.variety.is_none() {
        let w = check_st_witness()?;
        r.note(json!({"witness": "P4, p = 2: T'_3(h) = h^4, S_3(h) = 0", "status": w.status}));
        r.absorb(w);
    }
    Ok(r)
}

fn run_degf(params: &Params) -> Result<CheckReport, CheckError> {
    match &params.records {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CheckError::BadParams(format!("{}: {e}", path.display())))?;
            let set = RecordSet::from_json(&text)
                .map_err(|e| CheckError::BadParams(format!("{}: {e}", path.display())))?;
            let p = prime(params.p.unwrap_or(3))?;
            let mut r = CheckReport::new("degf", params.seed)
                .with_param("records", path.display().to_string())
                .with_param("p", p.get());
            for v in degree::evaluate(&set, p)? {
                let violation = v.verdict.is_violation();
                r.expect(!violation, || serde_json::to_value(&v).expect("verdict serializes"));
                if !violation {
                    r.note(json!({"subject": v.subject, "verdict": v.verdict.as_str()}));
                }
            }
            Ok(r)
        }
        None => {
            let ps = primes(params, &[2, 3, 5])?;
            let max = params.max_dim.unwrap_or(8);
            over_primes("degf", &ps, params.seed, |p| trivial_index_check(p, max))
        }
    }
}

/// Records `(dim, χ(O_X), 1)` of every model with `dim = i(p-1)`, `i ≤ p`,
/// satisfy the index bound and the degree formula for the identity.
fn trivial_index_check(p: Prime, max_dim: u32) -> Result<CheckReport, CheckError> {
    let mut r = CheckReport::new("degf", 0).with_param("p", p.get()).with_param("max_dim", max_dim);
    let step = p.get() as u32 - 1;
    for x in ModelVariety::all_up_to_dim(max_dim) {
        let d = x.dim();
        if d == 0 || d % step != 0 || (d / step) as u64 > p.get() {
            continue;
        }
        let chi = KHomElt::structure_sheaf(&x).euler_characteristic()?;
        let rec = degree::trivial_index_record(&x.to_string(), d as u64, chi.to_integer());
        let set = RecordSet { varieties: vec![rec.clone()], morphisms: vec![] };
        let bound = degree::check_index_bound(&rec, p);
        r.expect(bound.verdict != Verdict::Violates, || serde_json::to_value(&bound).expect("serializes"));
        let id = degree::MorphismRecord { source: rec.name.clone(), target: rec.name.clone(), deg: 1.into() };
        let formula = degree::check_degree_formula(&id, &set, p)?;
        r.expect(formula.verdict == Verdict::Consistent, || serde_json::to_value(&formula).expect("serializes"));
    }
    Ok(r)
}

/// Verdicts for a records file, as emitted by the `degree` subcommand.
pub fn degree_verdicts(text: &str, p: u64) -> chern_core::Result<Vec<degree::VerdictReport>> {
    degree::evaluate(&RecordSet::from_json(text)?, Prime::new(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_registered() {
        let mut ids: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
        for id in ["chpsi", "graded", "mainvp", "lci-integrality", "toddvp", "toddp", "inv-series", "prop-st",
                   "prop-tr", "cartan", "rr-T", "pipelines-agree", "well-defined", "degf"] {
            assert!(lookup(id).is_some(), "{id}");
        }
    }

    #[test]
    fn unknown_and_bad_params() {
        assert!(matches!(run_check("nonsense", &Params::default()), Err(CheckError::Unknown(_))));
        let p = Params { l: Some(2), ..Params::default() };
        assert!(matches!(run_check("inv-series", &p), Err(CheckError::BadParams(_))));
        let p = Params { p: Some(4), ..Params::default() };
        assert!(matches!(run_check("inv-series", &p), Err(CheckError::BadParams(_))));
    }

    #[test]
    fn small_runs_pass() {
        let p = Params { p: Some(2), order: Some(16), ..Params::default() };
        assert!(run_check("inv-series", &p).unwrap().is_ok());
        let p = Params { p: Some(2), variety: Some("P2xP2".parse().unwrap()), ..Params::default() };
        assert!(run_check("mainvp", &p).unwrap().is_ok());
        assert!(run_check("degf", &Params::default()).unwrap().is_ok());
    }
}
