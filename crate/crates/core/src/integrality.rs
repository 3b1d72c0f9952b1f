//! Valuation and identity checks for the Chern character, Adams operations
//! and Todd classes.
//!
//! Single-case checks return a [`CheckReport`] with one case per asserted
//! identity; the `sweep_*` functions run them over a corpus of models and
//! seeded random elements and merge the reports in case order.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{a_p, primitive_root_mod_p2, todd_number, vp_int, Field, PValuation, Prime, Rational};
use crate::kchow::{r_component, todd_class, ChowElt, FactorTable, KCohElt, KHomElt, ModelVariety, VirtualBundle};
use crate::report::CheckReport;
use crate::rng::{case_rng, random_bundle, random_kcoh, random_khom};

/// `[n / (p - 1)]`.
pub fn denominator_bound(n: u32, p: Prime) -> i64 {
    (n as u64 / (p.get() - 1)) as i64
}

fn int_pow(l: i64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(l));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Image of a rational class with `v_p ≥ 0` in `Z_(p) / p = Z/p`.
pub fn reduce_mod_p_lattice(x: &ChowElt, p: Prime) -> Result<ChowElt> {
    if x.field() != Field::Rational {
        return Err(Error::Domain("lattice reduction expects a rational class".into()));
    }
    x.with_field(Field::ModP(p))
}

fn chpsi_cases(report: &mut CheckReport, x: &KHomElt, l: i64, ch_x: &[ChowElt], ch_psi: &[ChowElt]) -> Result<()> {
    for n in 0..ch_x.len() {
        let expected = ch_x[n].scale(&int_pow(l, -(n as i64)))?;
        report.expect(ch_psi[n] == expected, || {
            json!({"x": x.to_string(), "l": l, "n": n, "lhs": ch_psi[n].to_string(), "rhs": expected.to_string()})
        });
    }
    Ok(())
}

/// `ch_n(ψ_l x) = l^{-n} ch_n(x)` for `n = 0..=dim X`.
pub fn check_chpsi(x: &KHomElt, l: i64) -> Result<CheckReport> {
    let mut r = CheckReport::new("chpsi", 0).with_param("variety", x.variety().to_string()).with_param("l", l);
    chpsi_cases(&mut r, x, l, &x.ch()?, &x.adams(l)?.ch()?)?;
    Ok(r)
}

fn graded_case(report: &mut CheckReport, x: &KHomElt, l: i64, psi_x: &KHomElt) -> Result<()> {
    let d = x.filtration_level()?;
    let diff = psi_x.sub(&x.scale(&int_pow(l, -(d as i64)))?)?;
    let ok = match diff.filtration_level() {
        Err(Error::ZeroElement) => true,
        Ok(level) => level < d,
        Err(e) => return Err(e),
    };
    report.expect(ok, || json!({"x": x.to_string(), "l": l, "d": d, "difference": diff.to_string()}));
    Ok(())
}

/// `ψ_l(x) - l^{-d} x` lies in filtration `d - 1`, `d` the level of `x`.
pub fn check_graded(x: &KHomElt, l: i64) -> Result<CheckReport> {
    let mut r = CheckReport::new("graded", 0).with_param("variety", x.variety().to_string()).with_param("l", l);
    graded_case(&mut r, x, l, &x.adams(l)?)?;
    Ok(r)
}

/// One line of an integrality profile: `v_p(ch_{d-n}(x))` against
/// `-[n/(p-1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationRow {
    pub n: u32,
    pub vp: PValuation,
    pub bound: i64,
    /// `n < p(p-1)`, where the bound holds for every variety.
    pub universal_range: bool,
}

impl ValuationRow {
    pub fn holds(&self) -> bool {
        self.vp.is_at_least(-self.bound)
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "vp": self.vp.to_string(), "bound": -self.bound, "universal_range": self.universal_range})
    }
}

fn profile_from_ch(ch: &[ChowElt], d: u32, p: Prime) -> Vec<ValuationRow> {
    let range = p.get() * (p.get() - 1);
    (0..=d)
        .map(|n| ValuationRow {
            n,
            vp: ch[(d - n) as usize].vp(p),
            bound: denominator_bound(n, p),
            universal_range: (n as u64) < range,
        })
        .collect()
}

/// Rows for `n = 0..=d`, `d` the filtration level of `x`.
pub fn integrality_profile(x: &KHomElt, p: Prime) -> Result<Vec<ValuationRow>> {
    let d = x.filtration_level()?;
    Ok(profile_from_ch(&x.ch()?, d, p))
}

fn integrality_cases(report: &mut CheckReport, x: &KHomElt, rows: &[ValuationRow]) {
    for row in rows {
        report.expect(row.holds(), || {
            let mut v = row.to_json();
            v["x"] = Value::String(x.to_string());
            v
        });
    }
}

/// `v_p(ch_{d-n}(x)) ≥ -[n/(p-1)]` for `n ≤ n_max` (default `d`). With
/// `strict_range` only `n < p(p-1)` is checked.
pub fn check_integrality(x: &KHomElt, p: Prime, n_max: Option<u32>, strict_range: bool) -> Result<CheckReport> {
    let d = x.filtration_level()?;
    let n_max = n_max.unwrap_or(d);
    if n_max > d {
        return Err(Error::Domain(format!("n_max = {n_max} exceeds the filtration level {d}")));
    }
    let rows: Vec<ValuationRow> = integrality_profile(x, p)?
        .into_iter()
        .filter(|r| r.n <= n_max && (!strict_range || r.universal_range))
        .collect();
    let mut report = CheckReport::new("mainvp", 0)
        .with_param("variety", x.variety().to_string())
        .with_param("p", p.get())
        .with_param("strict_range", strict_range);
    integrality_cases(&mut report, x, &rows);
    Ok(report)
}

/// `τ_n · (Td(T_X))^n` is integral for every `n ≤ dim X`.
pub fn check_lci_integrality(x: &ModelVariety) -> Result<CheckReport> {
    let td = todd_class(&VirtualBundle::tangent(x))?;
    let mut r = CheckReport::new("lci-integrality", 0).with_param("variety", x.to_string());
    for n in 0..=x.dim() {
        let tau = Rational::from_integer(todd_number(n as u64));
        let scaled = td.codim_part(n).scale(&tau)?;
        r.expect(scaled.is_integral(), || {
            json!({"variety": x.to_string(), "n": n, "tau": tau.to_string(), "scaled": scaled.to_string()})
        });
    }
    Ok(r)
}

/// `v_p(Td^n(u)) ≥ -[n/(p-1)]` for `n = 0..=dim X`.
pub fn check_toddvp(u: &VirtualBundle, p: Prime) -> Result<CheckReport> {
    let td = todd_class(u)?;
    let mut r = CheckReport::new("toddvp", 0).with_param("p", p.get()).with_param("bundle", u.to_string());
    for n in 0..=u.variety().dim() {
        let v = td.codim_part(n).vp(p);
        let bound = denominator_bound(n, p);
        r.expect(v.is_at_least(-bound), || {
            json!({"bundle": u.to_string(), "variety": u.variety().to_string(), "n": n, "vp": v.to_string(), "bound": -bound})
        });
    }
    Ok(r)
}

/// `p^j Td^{j(p-1)}(-u) ≡ r_j(u) mod p` for `j(p-1) ≤ dim X`.
pub fn check_toddp(u: &VirtualBundle, p: Prime) -> Result<CheckReport> {
    let x = u.variety();
    let td = todd_class(&u.neg())?;
    let step = p.get() as u32 - 1;
    let mut r = CheckReport::new("toddp", 0).with_param("p", p.get()).with_param("bundle", u.to_string());
    for j in 0..=x.dim() / step {
        let lhs = td.codim_part(j * step).scale(&Rational::from_integer(num_traits::pow(p.big(), j as usize)))?;
        let rhs = r_component(p, u, j)?;
        match reduce_mod_p_lattice(&lhs, p) {
            Ok(reduced) => r.expect(reduced == rhs, || {
                json!({"bundle": u.to_string(), "variety": x.to_string(), "j": j, "lhs": reduced.to_string(), "rhs": rhs.to_string()})
            }),
            Err(_) => r.fail(json!({
                "bundle": u.to_string(), "variety": x.to_string(), "j": j,
                "error": "left side is not p-integral", "lhs": lhs.to_string(),
            })),
        }
    }
    Ok(r)
}

/// Replays the inductive step behind the integrality bound.
///
/// With `l` a generator of `(Z/p^2)^×`, `d` the level of `x` and `m ≥ 0`
/// least such that `α = l^{d+m} (ψ_l x - l^{-d} x)` is integral, checks that
/// `α` has level below `d`, that `ch_{d-n}(α) = l^m (l^n - 1) ch_{d-n}(x)`,
/// that `v_p(l^n - 1) = a_p(n)` for `n < p(p-1)`, and that the bound for `α`
/// plus `a_p(n)` reproduces the valuation of `x`.
pub fn replay_mainvp(x: &KHomElt, p: Prime) -> Result<CheckReport> {
    let l = primitive_root_mod_p2(p) as i64;
    let d = x.filtration_level()?;
    let mut r = CheckReport::new("mainvp-replay", 0)
        .with_param("variety", x.variety().to_string())
        .with_param("p", p.get())
        .with_param("l", l);
    if d == 0 {
        r.pass();
        return Ok(r);
    }
    let diff = x.adams(l)?.sub(&x.scale(&int_pow(l, -(d as i64)))?)?;
    let mut m = 0i64;
    let alpha = loop {
        let a = diff.scale(&int_pow(l, d as i64 + m))?;
        if a.is_integral() {
            break a;
        }
        m += 1;
        if m > 256 {
            return Err(Error::SizeGuard("no power of l clears the denominators".into()));
        }
    };
    let level_ok = alpha.filtration_level().map_or(true, |e| e < d);
    r.expect(level_ok, || json!({"x": x.to_string(), "alpha": alpha.to_string(), "d": d}));

    let ch_x = x.ch()?;
    let ch_a = alpha.ch()?;
    let range = p.get() * (p.get() - 1);
    for n in 1..=d {
        let k = (d - n) as usize;
        let ln1 = num_traits::pow(BigInt::from(l), n as usize) - BigInt::one();
        let factor = int_pow(l, m) * Rational::from_integer(ln1.clone());
        let relation = ch_a[k] == ch_x[k].scale(&factor)?;
        let v_ln1 = vp_int(&ln1, p);
        let ap = a_p(n as u64, p) as i64;
        let lemma_ok = (n as u64) >= range || v_ln1 == PValuation::Finite(ap);
        let vx = ch_x[k].vp(p);
        let va = ch_a[k].vp(p);
        let additive = va == vx + v_ln1;
        // α has level ≤ d - 1, so its bound at index n - 1 applies.
        let alpha_bound = denominator_bound(n - 1, p);
        let alpha_ok = va.is_at_least(-alpha_bound);
        // [n/(p-1)] = [(n-1)/(p-1)] + a_p(n), so the bound for α transfers to x.
        let derived_ok = (n as u64) >= range
            || (alpha_bound + ap == denominator_bound(n, p) && vx.is_at_least(-alpha_bound - ap));
        r.expect(relation && lemma_ok && additive && alpha_ok && derived_ok, || {
            json!({
                "x": x.to_string(), "n": n, "m": m,
                "relation": relation, "vp_l^n-1": v_ln1.to_string(), "a_p": ap,
                "vp_x": vx.to_string(), "vp_alpha": va.to_string(), "alpha_bound": -alpha_bound,
            })
        });
    }
    Ok(r)
}

/// `Td(-u) · ch(θ^l(u)) = l^{rank u} · Td(-ψ^l(u))`.
pub fn check_tdpsi(u: &VirtualBundle, l: i64) -> Result<CheckReport> {
    let lhs = todd_class(&u.neg())?.mul(&u.theta(l)?.ch()?)?;
    let rhs = todd_class(&u.adams(l)?.neg())?.scale(&int_pow(l, u.rank()))?;
    let mut r = CheckReport::new("tdpsi", 0).with_param("l", l).with_param("bundle", u.to_string());
    r.expect(lhs == rhs, || json!({"lemma": "theta", "bundle": u.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
    Ok(r)
}

/// `Td(ψ^l(-u)) = Σ_i l^i Td^i(-u)`.
pub fn check_tdpsi2(u: &VirtualBundle, l: i64) -> Result<CheckReport> {
    let lhs = todd_class(&u.neg().adams(l)?)?;
    let td = todd_class(&u.neg())?;
    let mut rhs = ChowElt::zero(u.variety(), Field::Rational);
    for i in 0..=u.variety().dim() {
        rhs = rhs.add(&td.codim_part(i).scale(&int_pow(l, i as i64))?)?;
    }
    let mut r = CheckReport::new("tdpsi", 0).with_param("l", l).with_param("bundle", u.to_string());
    r.expect(lhs == rhs, || json!({"lemma": "todd-adams", "bundle": u.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
    Ok(r)
}

/// `ch(ψ^l x) = Σ_j l^j ch^j(x)`.
pub fn check_tdpsi3(x: &KCohElt, l: i64) -> Result<CheckReport> {
    let lhs = x.adams(l)?.ch()?;
    let ch = x.ch()?;
    let mut rhs = ChowElt::zero(x.variety(), Field::Rational);
    for j in 0..=x.variety().dim() {
        rhs = rhs.add(&ch.codim_part(j).scale(&int_pow(l, j as i64))?)?;
    }
    let mut r = CheckReport::new("tdpsi", 0).with_param("l", l).with_param("x", x.to_string());
    r.expect(lhs == rhs, || json!({"lemma": "ch-adams", "x": x.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
    Ok(r)
}

/// Stream index of sample `k` on model number `v` of a sweep.
pub fn case_key(v: usize, k: usize) -> u64 {
    ((v as u64) << 32) | k as u64
}

pub const RNG_DESCRIPTION: &str = "ChaCha8(seed) on stream (model_index << 32) | sample_index";

/// Run `case` on every item in parallel and merge the reports in item order.
pub fn merge_cases<T, F>(mut base: CheckReport, items: &[T], case: F) -> Result<CheckReport>
where
    T: Sync,
    F: Fn(usize, &T) -> Result<CheckReport> + Sync,
{
    let start = Instant::now();
    let parts: Vec<CheckReport> =
        items.par_iter().enumerate().map(|(i, t)| case(i, t)).collect::<Result<Vec<_>>>()?;
    for part in parts {
        base.absorb(part);
    }
    base.elapsed_ms = start.elapsed().as_millis();
    Ok(base)
}

fn corpus_params(r: CheckReport, varieties: &[ModelVariety]) -> CheckReport {
    let names: Vec<String> = varieties.iter().map(ToString::to_string).collect();
    r.with_param("varieties", names.len()).with_param("max_dim", varieties.iter().map(|v| v.dim()).max().unwrap_or(0))
        .with_param("variety_list", if names.len() <= 8 { Value::from(names) } else { Value::Null })
}

/// Basis elements followed by `randoms` seeded random combinations.
fn khom_samples(x: &ModelVariety, v: usize, randoms: usize, seed: u64) -> Vec<KHomElt> {
    let mut out: Vec<KHomElt> =
        x.basis().iter().map(|i| KHomElt::basis(x, i).expect("basis index")).collect();
    for k in 0..randoms {
        out.push(random_khom(&mut case_rng(seed, case_key(v, k)), x));
    }
    out
}

/// Integrality bound over the corpus, every `n ≤ d`, labelled by range.
pub fn sweep_mainvp(p: Prime, varieties: &[ModelVariety], randoms: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("mainvp", seed), varieties)
        .with_param("p", p.get())
        .with_param("randoms_per_variety", randoms)
        .with_param("rng", RNG_DESCRIPTION);
    let mut report = merge_cases(base, varieties, |v, x| {
        let table = FactorTable::chern(x)?;
        let mut r = CheckReport::new("mainvp", seed);
        let (mut universal, mut lci) = (0u64, 0u64);
        for e in khom_samples(x, v, randoms, seed) {
            let d = e.filtration_level()?;
            let ch = e.ch_total_with(&table)?.graded_by_dim();
            let rows = profile_from_ch(&ch, d, p);
            universal += rows.iter().filter(|r| r.universal_range).count() as u64;
            lci += rows.iter().filter(|r| !r.universal_range).count() as u64;
            integrality_cases(&mut r, &e, &rows);
        }
        r.note(json!({"variety": x.to_string(), "universal_range_checks": universal, "lci_range_checks": lci}));
        Ok(r)
    })?;
    let (universal, lci) = report.notes.iter().fold((0, 0), |(a, b), n| {
        (a + n["universal_range_checks"].as_u64().unwrap_or(0), b + n["lci_range_checks"].as_u64().unwrap_or(0))
    });
    report.notes = vec![json!({"universal_range_checks": universal, "lci_range_checks": lci})];
    Ok(report)
}

/// `ch_n ∘ ψ_l = l^{-n} ch_n` over the corpus.
pub fn sweep_chpsi(ls: &[i64], varieties: &[ModelVariety], randoms: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("chpsi", seed), varieties)
        .with_param("l", ls.to_vec())
        .with_param("randoms_per_variety", randoms)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let ch = FactorTable::chern(x)?;
        let mut r = CheckReport::new("chpsi", seed);
        for &l in ls {
            let psi = FactorTable::adams(x, l)?;
            for e in khom_samples(x, v, randoms, seed) {
                let ch_x = e.ch_total_with(&ch)?.graded_by_dim();
                let ch_psi = e.adams_with(&psi)?.ch_total_with(&ch)?.graded_by_dim();
                chpsi_cases(&mut r, &e, l, &ch_x, &ch_psi)?;
            }
        }
        Ok(r)
    })
}

/// Filtration drop of `ψ_l(x) - l^{-d} x` over the corpus.
pub fn sweep_graded(ls: &[i64], varieties: &[ModelVariety], randoms: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("graded", seed), varieties)
        .with_param("l", ls.to_vec())
        .with_param("randoms_per_variety", randoms)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let mut r = CheckReport::new("graded", seed);
        for &l in ls {
            let psi = FactorTable::adams(x, l)?;
            for e in khom_samples(x, v, randoms, seed) {
                graded_case(&mut r, &e, l, &e.adams_with(&psi)?)?;
            }
        }
        Ok(r)
    })
}

/// The three Todd/Adams identities on `bundles` random bundles per model.
pub fn sweep_tdpsi(ls: &[i64], varieties: &[ModelVariety], bundles: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("tdpsi", seed), varieties)
        .with_param("l", ls.to_vec())
        .with_param("bundles_per_variety", bundles)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let mut r = CheckReport::new("tdpsi", seed);
        for k in 0..bundles {
            let mut rng = case_rng(seed, case_key(v, k));
            let u = random_bundle(&mut rng, x);
            let y = random_kcoh(&mut rng, x);
            for &l in ls {
                r.absorb(check_tdpsi(&u, l)?);
                r.absorb(check_tdpsi2(&u, l)?);
                r.absorb(check_tdpsi3(&y, l)?);
            }
        }
        Ok(r)
    })
}

/// Todd valuation bound on random bundles and on `±T_X`.
pub fn sweep_toddvp(p: Prime, varieties: &[ModelVariety], bundles: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("toddvp", seed), varieties)
        .with_param("p", p.get())
        .with_param("bundles_per_variety", bundles)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let mut r = CheckReport::new("toddvp", seed);
        let t = VirtualBundle::tangent(x);
        r.absorb(check_toddvp(&t, p)?);
        r.absorb(check_toddvp(&t.neg(), p)?);
        for k in 0..bundles {
            r.absorb(check_toddvp(&random_bundle(&mut case_rng(seed, case_key(v, k)), x), p)?);
        }
        Ok(r)
    })
}

/// Todd/inverse-Todd congruence on random bundles and on `±T_X`.
pub fn sweep_toddp(p: Prime, varieties: &[ModelVariety], bundles: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("toddp", seed), varieties)
        .with_param("p", p.get())
        .with_param("bundles_per_variety", bundles)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let mut r = CheckReport::new("toddp", seed);
        let t = VirtualBundle::tangent(x);
        r.absorb(check_toddp(&t, p)?);
        r.absorb(check_toddp(&t.neg(), p)?);
        for k in 0..bundles {
            r.absorb(check_toddp(&random_bundle(&mut case_rng(seed, case_key(v, k)), x), p)?);
        }
        Ok(r)
    })
}

pub fn sweep_lci(varieties: &[ModelVariety]) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("lci-integrality", 0), varieties);
    merge_cases(base, varieties, |_, x| check_lci_integrality(x))
}

/// The inductive replay on basis elements and random combinations.
pub fn sweep_replay(p: Prime, varieties: &[ModelVariety], randoms: usize, seed: u64) -> Result<CheckReport> {
    let base = corpus_params(CheckReport::new("mainvp-replay", seed), varieties)
        .with_param("p", p.get())
        .with_param("l", primitive_root_mod_p2(p))
        .with_param("randoms_per_variety", randoms)
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, |v, x| {
        let mut r = CheckReport::new("mainvp-replay", seed);
        for e in khom_samples(x, v, randoms, seed) {
            r.absorb(replay_mainvp(&e, p)?);
        }
        Ok(r)
    })
}
