//! Acceptance suite: one line per criterion, all comparisons exact.

use std::process::ExitCode;
use std::time::Instant;

use chern_core::degree::{evaluate, RecordSet, SAMPLE_RECORDS};
use chern_core::exactnum::{todd_number, Field, Prime};
use chern_core::integrality::{sweep_chpsi, sweep_graded, sweep_mainvp, sweep_tdpsi, sweep_toddp};
use chern_core::kchow::{ChowElt, ModelVariety};
use chern_core::numeric_checks::{check_inv_series, check_legendre, check_todd_numbers, check_wilson_pp};
use chern_core::report::CheckReport;
use chern_core::steenrod::{
    check_coh_axioms, check_pipelines, check_prop_st, check_prop_tr_smooth, check_st_witness, sweep,
    sweep_cartan, sweep_riemann_roch, Steenrod,
};
use chern_core::Result;

const SEED: u64 = 0;

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("prime")
}

fn corpus() -> Vec<ModelVariety> {
    ["P1", "P2", "P3", "P4", "P2xP1", "P2xP3"].iter().map(|s| s.parse().expect("model")).collect()
}

fn up_to(d: u32) -> Vec<ModelVariety> {
    ModelVariety::all_up_to_dim(d)
}

fn over_primes(id: &str, ps: &[u64], mut f: impl FnMut(Prime) -> Result<CheckReport>) -> Result<CheckReport> {
    let mut total = CheckReport::new(id, SEED);
    for &p in ps {
        total.absorb(f(prime(p))?);
    }
    Ok(total)
}

/// A criterion's outcome: total cases, failures, and a short detail.
struct Outcome {
    cases: u64,
    failures: usize,
    detail: String,
}

impl Outcome {
    fn of(reports: &[CheckReport], detail: impl Into<String>) -> Self {
        Outcome {
            cases: reports.iter().map(|r| r.cases).sum(),
            failures: reports.iter().map(|r| r.failures.len()).sum(),
            detail: detail.into(),
        }
    }

    fn fixed(ok: bool, cases: u64, detail: impl Into<String>) -> Self {
        Outcome { cases, failures: usize::from(!ok), detail: detail.into() }
    }
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn c1_todd_numbers() -> Result<Outcome> {
    let r = check_todd_numbers(10);
    let frozen = [1u64, 2, 12, 24, 720, 1440, 60480, 120960, 3628800, 7257600, 479001600];
    let table_ok = frozen.iter().enumerate().all(|(d, &t)| todd_number(d as u64) == t.into());
    let mut o = Outcome::of(&[r], "tau_0..tau_10: product vs recursion, tau_d * Td_d integral, classical values");
    o.cases += 1;
    o.failures += usize::from(!table_ok);
    Ok(o)
}

fn c2_inverse_series() -> Result<Outcome> {
    let rs = [2u64, 3, 5]
        .iter()
        .map(|&p| check_inv_series(prime(p), (p as usize).pow(4)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::of(&rs, "(x R) o (x W) = x over Z/p to degree p^4, p in {2,3,5}"))
}

fn c3_chpsi() -> Result<Outcome> {
    let r = sweep_chpsi(&[2, 3, 5, 7], &corpus(), 0, SEED)?;
    Ok(Outcome::of(&[r], "ch_n psi_l = l^-n ch_n on full K'_0 bases, l in {2,3,5,7}, six models"))
}

fn c4_graded() -> Result<Outcome> {
    let r = sweep_graded(&[2, 3, 5, 7], &corpus(), 0, SEED)?;
    Ok(Outcome::of(&[r], "psi_l(x) - l^-d x in filtration d-1, same corpus"))
}

fn c5_mainvp() -> Result<Outcome> {
    let vs = up_to(8);
    let r = over_primes("mainvp", &[2, 3, 5], |p| sweep_mainvp(p, &vs, 100, SEED))?;
    Ok(Outcome::of(&[r], format!("v_p(ch_(d-n)) >= -[n/(p-1)], p in {{2,3,5}}, {} models of dim <= 8, basis + 100 random", vs.len())))
}

fn c6_tdpsi() -> Result<Outcome> {
    let vs = up_to(6);
    let r = sweep_tdpsi(&[2, 3, 5], &vs, 50, SEED)?;
    Ok(Outcome::of(&[r], format!("three Todd/Adams identities, 50 bundles on each of {} models of dim <= 6, l in {{2,3,5}}", vs.len())))
}

fn c7_toddp() -> Result<Outcome> {
    let vs = up_to(8);
    let r = over_primes("toddp", &[2, 3, 5], |p| sweep_toddp(p, &vs, 50, SEED))?;
    Ok(Outcome::of(&[r], "p^j Td^(j(p-1))(-u) = r_j(u) mod p, j(p-1) <= 8, 50 bundles per model, p in {2,3,5}"))
}

fn c8_legendre_wilson() -> Result<Outcome> {
    let a = check_legendre(10_000, 11);
    let b = check_wilson_pp(&[(2, 4), (3, 3), (5, 2)])?;
    Ok(Outcome::of(&[a, b], "v_p(n!) formula vs brute force (n <= 10^4, p <= 11); (p^i)! p^-(p^i-1)/(p-1) = (-1)^i mod p"))
}

fn c9_pipelines() -> Result<Outcome> {
    let vs = up_to(6);
    let r = over_primes("pipelines-agree", &[2, 3], |p| sweep("pipelines-agree", p, &vs, SEED, |_, x| check_pipelines(x, p)))?;
    let p2 = ModelVariety::projective(2);
    let two = prime(2);
    let st = Steenrod::new(&p2, two)?;
    let fund = ChowElt::one(&p2, Field::ModP(two));
    let line = ChowElt::linear_class(&p2, Field::ModP(two), &[1])?;
    let spot = st.t_construct(1, &fund)? == line && st.t_via_genus(1, &[2])? == line;
    let mut o = Outcome::of(&[r], "T_construct = T_via_genus on basis cycles, dim <= 6, p in {2,3}; T_1[P2] = [line] mod 2 both ways");
    o.cases += 1;
    o.failures += usize::from(!spot);
    Ok(o)
}

fn c10_coh_suite() -> Result<Outcome> {
    let small = up_to(6);
    let axioms = over_primes("coh-axioms", &[2, 3], |p| {
        sweep("coh-axioms", p, &small, SEED, |v, x| check_coh_axioms(x, p, 10, SEED, v))
    })?;
    let pairs = up_to(4);
    let cartan = over_primes("cartan", &[2, 3], |p| sweep_cartan(p, &pairs, 50, SEED))?;
    let rr = over_primes("rr-T", &[2, 3], |p| sweep_riemann_roch(p, &up_to(4), 4, SEED))?;
    Ok(Outcome::of(&[axioms, cartan, rr], "T^0 = id, T^i[X] = 0, T^1(h) = -h^p; Cartan on 50 pairs; Riemann-Roch on the morphism corpus"))
}

fn c11_prop_st_tr() -> Result<Outcome> {
    let spaces: Vec<ModelVariety> = (0..=8).map(ModelVariety::projective).collect();
    let st = over_primes("prop-st", &[2, 3], |p| sweep("prop-st", p, &spaces, SEED, |_, x| check_prop_st(x, p)))?;
    let tr = over_primes("prop-tr", &[2, 3], |p| sweep("prop-tr", p, &up_to(6), SEED, |_, x| check_prop_tr_smooth(x, p)))?;
    let witness = check_st_witness()?;
    Ok(Outcome::of(&[st, tr, witness], "T'_i = (-1)^i S_i for i <= p on P^n (n <= 8); T'[X] = r(-T_X)[X]; P4 witness T'_3(h) = h^4, S_3(h) = 0"))
}

fn c12_degree() -> Result<Outcome> {
    let set = RecordSet::from_json(SAMPLE_RECORDS)?;
    let got: Vec<String> = evaluate(&set, prime(3))?.iter().map(|v| v.verdict.to_string()).collect();
    let want = ["strongly p-incompressible", "consistent", "VIOLATES"];
    Ok(Outcome::fixed(got == want, 1, format!("sample records at p = 3 give {got:?}")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("todd numbers", c1_todd_numbers),
        ("inverse series", c2_inverse_series),
        ("ch o psi", c3_chpsi),
        ("graded psi", c4_graded),
        ("integrality of ch", c5_mainvp),
        ("todd/adams identities", c6_tdpsi),
        ("todd mod p", c7_toddp),
        ("factorial valuations", c8_legendre_wilson),
        ("T_i pipelines", c9_pipelines),
        ("cohomological T suite", c10_coh_suite),
        ("T' versus S", c11_prop_st_tr),
        ("degree records", c12_degree),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (status, line) = match run() {
            Ok(o) => {
                let status = if o.failures == 0 { "PASS" } else { "FAIL" };
                (status, format!("{} cases, {} failures, tolerance 0 (exact) | {}", o.cases, o.failures, o.detail))
            }
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} [{status}] {name}: {line} ({:.1}s)", k + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria passed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
