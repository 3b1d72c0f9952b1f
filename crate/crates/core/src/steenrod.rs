//! The mod-p operations `T_i` (homological) and `T^i` (cohomological), the
//! total Steenrod operation `S` and its inverse `T'`, and checks relating
//! them.
//!
//! On a product of projective spaces the Chow ring is torsion free, so a
//! mod-p class is a polynomial in the `h_j` over `F_p`. The homological
//! class `x ∩ [X]` is stored as the same polynomial as `x`.
//!
//! * `T_i(x) = p^i ch_{q - i(p-1)}(x̃) mod p` for `x` of dimension `q` and
//!   `x̃` its tautological lift to `K'_0`.
//! * The genus construction pushes `r_i(-T_L) ∩ [L]` forward from a linear
//!   subvariety `L`; it must agree with the K-theoretic one.
//! * `T^i(x) = Σ_j r_j(T_X) T_{i-j}(x ∩ [X])`.
//! * `S` is the ring endomorphism `h ↦ h + h^p`; `T'` is its inverse, built
//!   by the recursion `T'_i = -Σ_{j ≥ 1} T'_{i-j} S_j`.
//! * Homologically, `S(x ∩ [X]) = S(x) w(-T_X) ∩ [X]` with `w` the genus of
//!   `1 + x^{p-1}`, and `T'(x ∩ [X]) = T'(x) r(-T_X) ∩ [X]`.

use num_traits::One;
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactnum::{Field, Prime, Rational};
use crate::integrality::{case_key, merge_cases, reduce_mod_p_lattice, RNG_DESCRIPTION};
use crate::kchow::{r_class, r_component, w_class, ChowElt, FactorTable, KHomElt, ModelVariety, Morphism, VirtualBundle};
use crate::poly::NilPoly;
use crate::report::CheckReport;
use crate::rng::{case_rng, random_chow_mod_p, random_homogeneous_mod_p};

/// `i ≤ p - 1`, i.e. `i(p-1) < p(p-1)`, where the construction of `T_i`
/// needs only the integrality bound valid on every variety; larger `i`
/// rely on the variety being l.c.i.
pub fn certified_by_universal_bound(i: u32, p: Prime) -> bool {
    (i as u64) < p.get()
}

/// Bring a class into `CH ⊗ Z/p`.
pub fn to_mod_p(x: &ChowElt, p: Prime) -> Result<ChowElt> {
    match x.field() {
        Field::Rational => reduce_mod_p_lattice(x, p),
        Field::ModP(q) if q == p => Ok(x.clone()),
        Field::ModP(q) => Err(Error::FieldMismatch(format!("Z/{q}"), format!("Z/{p}"))),
    }
}

/// Per-variety data shared by all operations at a fixed prime.
#[derive(Debug, Clone)]
pub struct Steenrod {
    variety: ModelVariety,
    p: Prime,
    ch: FactorTable,
    r_tangent: ChowElt,
    r_neg_tangent: ChowElt,
    w_neg_tangent: ChowElt,
}

impl Steenrod {
    pub fn new(variety: &ModelVariety, p: Prime) -> Result<Self> {
        let t = VirtualBundle::tangent(variety);
        Ok(Steenrod {
            variety: variety.clone(),
            p,
            ch: FactorTable::chern(variety)?,
            r_tangent: r_class(p, &t)?,
            r_neg_tangent: r_class(p, &t.neg())?,
            w_neg_tangent: w_class(p, &t.neg())?,
        })
    }

    pub fn variety(&self) -> &ModelVariety {
        &self.variety
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    fn step(&self) -> u32 {
        self.p.get() as u32 - 1
    }

    fn field(&self) -> Field {
        Field::ModP(self.p)
    }

    /// Largest `i` with `i(p-1) ≤ dim X`.
    pub fn max_index(&self) -> u32 {
        self.variety.dim() / self.step()
    }

    fn zero(&self) -> ChowElt {
        ChowElt::zero(&self.variety, self.field())
    }

    fn prepare(&self, x: &ChowElt) -> Result<ChowElt> {
        if x.variety() != &self.variety {
            return Err(Error::VarietyMismatch(self.variety.to_string(), x.variety().to_string()));
        }
        to_mod_p(x, self.p)
    }

    /// `[T_0(x), ..., T_m(x)]` for a homogeneous class, `m = [q/(p-1)]`.
    pub fn t_construct_all(&self, x: &ChowElt) -> Result<Vec<ChowElt>> {
        let x = self.prepare(x)?;
        if x.is_zero() {
            return Ok(vec![self.zero()]);
        }
        let q = x.homogeneous_dim().ok_or(Error::NotHomogeneous)?;
        let ch = KHomElt::from_cycle(&x).ch_total_with(&self.ch)?;
        self.t_from_ch(&ch, q)
    }

    fn t_from_ch(&self, ch: &ChowElt, q: u32) -> Result<Vec<ChowElt>> {
        let mut out = Vec::new();
        let mut scale = Rational::one();
        for i in 0..=q / self.step() {
            let part = ch.dim_part(q - i * self.step()).scale(&scale)?;
            out.push(reduce_mod_p_lattice(&part, self.p)?);
            scale *= Rational::from_integer(self.p.big());
        }
        Ok(out)
    }

    /// `T_i` via `p^i ch_{q - i(p-1)}`; errors on non-homogeneous input.
    pub fn t_construct(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let all = self.t_construct_all(x)?;
        Ok(all.get(i as usize).cloned().unwrap_or_else(|| self.zero()))
    }

    /// `T_i` extended linearly over homogeneous components.
    pub fn t_hom(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let mut acc = self.zero();
        for q in 0..=self.variety.dim() {
            let part = x.dim_part(q);
            if !part.is_zero() {
                acc = acc.add(&self.t_construct(i, &part)?)?;
            }
        }
        Ok(acc)
    }

    /// Total `T = Σ_i T_i`.
    pub fn t_hom_total(&self, x: &ChowElt) -> Result<ChowElt> {
        let mut acc = self.zero();
        for i in 0..=self.max_index() {
            acc = acc.add(&self.t_hom(i, x)?)?;
        }
        Ok(acc)
    }

    /// `T_i[L_I]` as the pushforward of `r_i(-T_L) ∩ [L]`.
    pub fn t_via_genus(&self, i: u32, index: &[u32]) -> Result<ChowElt> {
        let f = Morphism::linear_embedding(&self.variety, index)?;
        let l = f.source().clone();
        let r = r_component(self.p, &VirtualBundle::tangent(&l).neg(), i)?;
        f.pushforward_chow(&r)
    }

    /// The genus construction extended linearly from basis cycles.
    pub fn t_via_genus_class(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let n = self.variety.factors().to_vec();
        let mut acc = self.zero();
        for (e, c) in x.terms() {
            let index: Vec<u32> = n.iter().zip(&e).map(|(a, b)| a - b).collect();
            acc = acc.add(&self.t_via_genus(i, &index)?.scale(c)?)?;
        }
        Ok(acc)
    }

    /// `T^i(x) = Σ_j r_j(T_X) · T_{i-j}(x ∩ [X])`.
    pub fn t_coh(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let mut acc = self.zero();
        for j in 0..=i {
            let r = self.r_tangent.codim_part(j * self.step());
            if r.is_zero() {
                continue;
            }
            acc = acc.add(&r.mul(&self.t_hom(i - j, &x)?)?)?;
        }
        Ok(acc)
    }

    /// Total cohomological Steenrod operation, `h_j ↦ h_j + h_j^p`.
    pub fn total_s(&self, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let dims = self.variety.factors();
        let f = self.field();
        let images: Vec<NilPoly> = (0..dims.len())
            .map(|j| {
                let h = NilPoly::var(dims, f, j);
                h.add(&h.pow(self.p.get() as u32).expect("power")).expect("same shape")
            })
            .collect();
        Ok(ChowElt::from_poly(&self.variety, x.poly().substitute(&images, dims)?))
    }

    /// Part of `op` raising codimension by `i(p-1)`, taken component-wise.
    fn shift_component(&self, i: u32, x: &ChowElt, op: impl Fn(&ChowElt) -> Result<ChowElt>) -> Result<ChowElt> {
        let mut acc = self.zero();
        for c in x.codims() {
            let image = op(&x.codim_part(c))?;
            acc = acc.add(&image.codim_part(c + i * self.step()))?;
        }
        Ok(acc)
    }

    pub fn s_component(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        self.shift_component(i, &x, |y| self.total_s(y))
    }

    /// `T'_i = -Σ_{j=1}^{i} T'_{i-j} ∘ S_j`, `T'_0 = id`.
    pub fn t_prime_component(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        if i == 0 || x.is_zero() {
            return Ok(if i == 0 { x } else { self.zero() });
        }
        let mut acc = self.zero();
        for j in 1..=i {
            let s = self.s_component(j, &x)?;
            if !s.is_zero() {
                acc = acc.sub(&self.t_prime_component(i - j, &s)?)?;
            }
        }
        Ok(acc)
    }

    pub fn total_t_prime(&self, x: &ChowElt) -> Result<ChowElt> {
        let mut acc = self.zero();
        for i in 0..=self.max_index() {
            acc = acc.add(&self.t_prime_component(i, x)?)?;
        }
        Ok(acc)
    }

    /// `T'` as the ring endomorphism `h ↦ Σ_k (-1)^k h^{p^k}`.
    pub fn t_prime_ring_hom(&self, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let dims = self.variety.factors();
        let f = self.field();
        let p = self.p.get();
        let images: Vec<NilPoly> = dims
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                let mut img = NilPoly::zero(dims, f);
                let mut e = 1u64;
                let mut sign = Rational::one();
                while e <= n as u64 {
                    let mut exps = vec![0u32; dims.len()];
                    exps[j] = e as u32;
                    img = img.add(&NilPoly::monomial(dims, f, &exps, &sign)).expect("same shape");
                    e *= p;
                    sign = -sign;
                }
                img
            })
            .collect();
        Ok(ChowElt::from_poly(&self.variety, x.poly().substitute(&images, dims)?))
    }

    /// `T'` by solving `S(y) = x` one codimension at a time.
    pub fn t_prime_by_elimination(&self, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        let mut y = self.zero();
        let mut residual = x.clone();
        for c in 0..=self.variety.dim() {
            // S is the identity plus terms of higher codimension.
            let lead = residual.codim_part(c);
            if lead.is_zero() {
                continue;
            }
            y = y.add(&lead)?;
            residual = x.sub(&self.total_s(&y)?)?;
        }
        debug_assert!(residual.is_zero());
        Ok(y)
    }

    /// `S_n = -Σ_{i=1}^{n} T^i ∘ S_{n-i}`, `S_0 = id`, with `T^i` the
    /// K-theoretic cohomological operation.
    pub fn reduced_steenrod(&self, n: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        if n == 0 {
            return Ok(x);
        }
        let mut acc = self.zero();
        for i in 1..=n {
            let s = self.reduced_steenrod(n - i, &x)?;
            if !s.is_zero() {
                acc = acc.sub(&self.t_coh(i, &s)?)?;
            }
        }
        Ok(acc)
    }

    /// Homological `S(x ∩ [X]) = S(x) · w(-T_X)`.
    pub fn total_s_hom(&self, x: &ChowElt) -> Result<ChowElt> {
        self.total_s(x)?.mul(&self.w_neg_tangent)
    }

    pub fn s_hom_component(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        self.shift_component(i, &x, |y| self.total_s_hom(y))
    }

    /// Homological `T'(x ∩ [X]) = T'(x) · r(-T_X)`.
    pub fn total_t_prime_hom(&self, x: &ChowElt) -> Result<ChowElt> {
        self.total_t_prime(x)?.mul(&self.r_neg_tangent)
    }

    pub fn t_prime_hom_component(&self, i: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        self.shift_component(i, &x, |y| self.total_t_prime_hom(y))
    }

    /// Homological recursion `S_n = -Σ_{i=1}^{n} T_i ∘ S_{n-i}` with the
    /// K-theoretic `T_i`.
    pub fn reduced_steenrod_hom(&self, n: u32, x: &ChowElt) -> Result<ChowElt> {
        let x = self.prepare(x)?;
        if n == 0 {
            return Ok(x);
        }
        let mut acc = self.zero();
        for i in 1..=n {
            let s = self.reduced_steenrod_hom(n - i, &x)?;
            if !s.is_zero() {
                acc = acc.sub(&self.t_hom(i, &s)?)?;
            }
        }
        Ok(acc)
    }

    /// Every monomial `h^e` of the Chow ring, as a mod-p class.
    pub fn monomials(&self) -> Vec<ChowElt> {
        self.variety
            .basis()
            .iter()
            .map(|e| ChowElt::monomial(&self.variety, self.field(), e, &Rational::one()))
            .collect()
    }
}

fn sign(i: u32) -> Rational {
    if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn evidence(label: &str, x: &ChowElt, i: u32, lhs: &ChowElt, rhs: &ChowElt) -> serde_json::Value {
    json!({"identity": label, "variety": x.variety().to_string(), "x": x.to_string(), "i": i,
           "lhs": lhs.to_string(), "rhs": rhs.to_string()})
}

/// K-theoretic and genus constructions of `T_i` agree on every basis cycle.
pub fn check_pipelines(x: &ModelVariety, p: Prime) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let mut r = CheckReport::new("pipelines-agree", 0).with_param("variety", x.to_string()).with_param("p", p.get());
    for e in st.monomials() {
        let all = st.t_construct_all(&e)?;
        let n = x.factors().to_vec();
        let exps = e.terms().next().expect("monomial").0;
        let index: Vec<u32> = n.iter().zip(&exps).map(|(a, b)| a - b).collect();
        for (i, k) in all.iter().enumerate() {
            let g = st.t_via_genus(i as u32, &index)?;
            r.expect(&g == k, || evidence("K-theory vs genus", &e, i as u32, k, &g));
        }
    }
    Ok(r)
}

/// `T_i` does not depend on the lift: perturbing by filtration `q - 1` or
/// by `p` times level `q` leaves `p^i ch_{q-i(p-1)} mod p` unchanged.
pub fn check_well_defined(x: &ModelVariety, p: Prime, samples: usize, seed: u64, v: usize) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let table = FactorTable::chern(x)?;
    let mut r = CheckReport::new("well-defined", seed).with_param("variety", x.to_string()).with_param("p", p.get());
    let basis = x.basis();
    for k in 0..samples {
        let mut rng = case_rng(seed, case_key(v, k));
        let q = rng.random_range(0..=x.dim());
        let cls = random_homogeneous_mod_p(&mut rng, x, p, q);
        if cls.is_zero() {
            r.pass();
            continue;
        }
        let expected = st.t_construct_all(&cls)?;
        let mut delta = KHomElt::zero(x);
        for index in &basis {
            let level: u32 = index.iter().sum();
            let c: i64 = if level < q {
                rng.random_range(-4..=4)
            } else if level == q {
                p.get() as i64 * rng.random_range(-2..=2)
            } else {
                0
            };
            if c != 0 {
                let b = KHomElt::basis(x, index)?.scale(&Rational::from_integer(c.into()))?;
                delta = delta.add(&b)?;
            }
        }
        let lift = KHomElt::from_cycle(&cls).add(&delta)?;
        let got = st.t_from_ch(&lift.ch_total_with(&table)?, q)?;
        r.expect(got == expected, || json!({"variety": x.to_string(), "x": cls.to_string(), "delta": delta.to_string()}));
    }
    Ok(r)
}

/// `T^0 = id`, `T^i[X] = 0` for `i > 0`, `T^1(x) = -x^p` on divisors.
pub fn check_coh_axioms(x: &ModelVariety, p: Prime, samples: usize, seed: u64, v: usize) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let f = Field::ModP(p);
    let mut r = CheckReport::new("coh-axioms", seed).with_param("variety", x.to_string()).with_param("p", p.get());
    for e in st.monomials() {
        let t0 = st.t_coh(0, &e)?;
        r.expect(t0 == e, || evidence("T^0 = id", &e, 0, &t0, &e));
    }
    let one = ChowElt::one(x, f);
    for i in 1..=st.max_index() {
        let t = st.t_coh(i, &one)?;
        r.expect(t.is_zero(), || evidence("T^i[X] = 0", &one, i, &t, &st.zero()));
    }
    let mut divisors: Vec<ChowElt> = (0..x.num_factors()).map(|j| ChowElt::h(x, f, j)).collect();
    for k in 0..samples {
        let mut rng = case_rng(seed, case_key(v, k));
        let d = random_chow_mod_p(&mut rng, x, p).codim_part(1);
        divisors.push(d);
    }
    for d in divisors {
        let lhs = st.t_coh(1, &d)?;
        let rhs = d.pow(p.get() as u32)?.neg();
        r.expect(lhs == rhs, || evidence("T^1(x) = -x^p", &d, 1, &lhs, &rhs));
    }
    Ok(r)
}

/// Cartan formulas: homological for external products `X × Y`, and
/// cohomological for products on `X`.
pub fn check_cartan(x: &ChowElt, y: &ChowElt, i: u32, p: Prime) -> Result<CheckReport> {
    let mut r = CheckReport::new("cartan", 0).with_param("p", p.get()).with_param("i", i);
    let sx = Steenrod::new(x.variety(), p)?;
    let sy = Steenrod::new(y.variety(), p)?;
    let prod = x.variety().product(y.variety());
    let sxy = Steenrod::new(&prod, p)?;
    let xm = to_mod_p(x, p)?;
    let ym = to_mod_p(y, p)?;
    let xy = xm.external(&ym)?;
    let lhs = sxy.t_hom(i, &xy)?;
    let mut rhs = ChowElt::zero(&prod, Field::ModP(p));
    for j in 0..=i {
        rhs = rhs.add(&sx.t_hom(j, &xm)?.external(&sy.t_hom(i - j, &ym)?)?)?;
    }
    r.expect(lhs == rhs, || evidence("T_i(x × y)", &xy, i, &lhs, &rhs));
    if x.variety() == y.variety() {
        let prod = xm.mul(&ym)?;
        let lhs = sx.t_coh(i, &prod)?;
        let mut rhs = ChowElt::zero(x.variety(), Field::ModP(p));
        for j in 0..=i {
            rhs = rhs.add(&sx.t_coh(j, &xm)?.mul(&sx.t_coh(i - j, &ym)?)?)?;
        }
        r.expect(lhs == rhs, || evidence("T^i(x · y)", &prod, i, &lhs, &rhs));
    }
    Ok(r)
}

/// Riemann-Roch type identities for `T` along `f: Y → X` on the classes
/// `xs` of `X` and `ys` of `Y`:
/// `T_i f^* = Σ_j r_j(-T_f) f^* T_{i-j}`, `T^i f^* = f^* T^i`,
/// `T^i f_* = f_* Σ_j r_j(-T_f) T^{i-j}` and `T_i f_* = f_* T_i`.
pub fn check_riemann_roch_t(f: &Morphism, i: u32, p: Prime, xs: &[ChowElt], ys: &[ChowElt]) -> Result<CheckReport> {
    let sx = Steenrod::new(f.target(), p)?;
    let sy = Steenrod::new(f.source(), p)?;
    let tf = f.virtual_tangent()?;
    let r_tf = r_class(p, &tf.neg())?;
    let step = p.get() as u32 - 1;
    let mut r = CheckReport::new("rr-T", 0).with_param("morphism", f.to_string()).with_param("p", p.get()).with_param("i", i);
    for x in xs {
        let x = to_mod_p(x, p)?;
        let fx = f.pullback_chow(&x)?;
        let lhs = sy.t_hom(i, &fx)?;
        let mut rhs = sy.zero();
        for j in 0..=i {
            let rj = r_tf.codim_part(j * step);
            if !rj.is_zero() {
                rhs = rhs.add(&rj.mul(&f.pullback_chow(&sx.t_hom(i - j, &x)?)?)?)?;
            }
        }
        r.expect(lhs == rhs, || evidence("T_i f^*", &x, i, &lhs, &rhs));
        let lhs = sy.t_coh(i, &fx)?;
        let rhs = f.pullback_chow(&sx.t_coh(i, &x)?)?;
        r.expect(lhs == rhs, || evidence("T^i f^*", &x, i, &lhs, &rhs));
    }
    for y in ys {
        let y = to_mod_p(y, p)?;
        let fy = f.pushforward_chow(&y)?;
        let lhs = sx.t_coh(i, &fy)?;
        let mut inner = sy.zero();
        for j in 0..=i {
            let rj = r_tf.codim_part(j * step);
            if !rj.is_zero() {
                inner = inner.add(&rj.mul(&sy.t_coh(i - j, &y)?)?)?;
            }
        }
        let rhs = f.pushforward_chow(&inner)?;
        r.expect(lhs == rhs, || evidence("T^i f_*", &y, i, &lhs, &rhs));
        let lhs = sx.t_hom(i, &fy)?;
        let rhs = f.pushforward_chow(&sy.t_hom(i, &y)?)?;
        r.expect(lhs == rhs, || evidence("T_i f_*", &y, i, &lhs, &rhs));
    }
    Ok(r)
}

/// `T'_i = (-1)^i S_i` for `i ≤ p` on every monomial, cohomologically and
/// homologically. The first index past `p` is recorded in the notes.
pub fn check_prop_st(x: &ModelVariety, p: Prime) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let mut r = CheckReport::new("prop-st", 0).with_param("variety", x.to_string()).with_param("p", p.get());
    let top = p.get() as u32;
    let mut witnesses = 0u64;
    for e in st.monomials() {
        for i in 0..=top + 1 {
            let pairs = [
                ("cohomological", st.t_prime_component(i, &e)?, st.s_component(i, &e)?.scale(&sign(i))?),
                ("homological", st.t_prime_hom_component(i, &e)?, st.s_hom_component(i, &e)?.scale(&sign(i))?),
            ];
            for (kind, lhs, rhs) in pairs {
                if i <= top {
                    r.expect(lhs == rhs, || evidence(kind, &e, i, &lhs, &rhs));
                } else if lhs != rhs {
                    witnesses += 1;
                    if witnesses <= 4 {
                        r.note(json!({"beyond_range": kind, "x": e.to_string(), "i": i,
                                      "T'_i": lhs.to_string(), "(-1)^i S_i": rhs.to_string()}));
                    }
                }
            }
        }
    }
    r.note(json!({"differences_beyond_range": witnesses}));
    Ok(r)
}

/// The identity `T'_i = (-1)^i S_i` stops at `i = p`: on `P^4` at `p = 2`,
/// `T'_3(h) = h^4` while `S_3(h) = 0`.
pub fn check_st_witness() -> Result<CheckReport> {
    let p = Prime::new(2)?;
    let x = ModelVariety::projective(4);
    let st = Steenrod::new(&x, p)?;
    let h = ChowElt::h(&x, Field::ModP(p), 0);
    let mut r = CheckReport::new("prop-st-witness", 0).with_param("variety", x.to_string()).with_param("p", 2);
    let t3 = st.t_prime_component(3, &h)?;
    let s3 = st.s_component(3, &h)?;
    let h4 = h.pow(4)?;
    r.expect(t3 == h4, || evidence("T'_3(h) = h^4", &h, 3, &t3, &h4));
    r.expect(s3.is_zero(), || evidence("S_3(h) = 0", &h, 3, &s3, &st.zero()));
    r.expect(t3 != s3.scale(&sign(3)).expect("scalar"), || evidence("T'_3 vs -S_3", &h, 3, &t3, &s3));
    Ok(r)
}

/// `T'[X] = r(-T_X) ∩ [X]`, `T'` inverts `S` on both sides, the three
/// constructions of `T'` agree, and the K-theoretic `T_i` coincide with the
/// homological `T'_i` on every monomial.
pub fn check_prop_tr_smooth(x: &ModelVariety, p: Prime) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let f = Field::ModP(p);
    let one = ChowElt::one(x, f);
    let mut r = CheckReport::new("prop-tr", 0).with_param("variety", x.to_string()).with_param("p", p.get());
    let lhs = st.total_t_prime_hom(&one)?;
    let rhs = r_class(p, &VirtualBundle::tangent(x).neg())?;
    r.expect(lhs == rhs, || evidence("T'[X]", &one, 0, &lhs, &rhs));
    let tk = st.t_hom_total(&one)?;
    r.expect(tk == rhs, || evidence("T[X]", &one, 0, &tk, &rhs));
    for e in st.monomials() {
        let tp = st.total_t_prime(&e)?;
        let ring = st.t_prime_ring_hom(&e)?;
        let elim = st.t_prime_by_elimination(&e)?;
        r.expect(tp == ring && tp == elim, || evidence("T' constructions", &e, 0, &tp, &ring));
        let back = st.total_s(&tp)?;
        let fwd = st.total_t_prime(&st.total_s(&e)?)?;
        r.expect(back == e && fwd == e, || evidence("S T' = T' S = id", &e, 0, &back, &fwd));
        for i in 0..=st.max_index() {
            let a = st.t_hom(i, &e)?;
            let b = st.t_prime_hom_component(i, &e)?;
            r.expect(a == b, || evidence("T_i = T'_i", &e, i, &a, &b));
        }
    }
    Ok(r)
}

/// Both reduced-Steenrod recursions reassemble the total operations.
pub fn check_reduced_steenrod(x: &ModelVariety, p: Prime, samples: usize, seed: u64, v: usize) -> Result<CheckReport> {
    let st = Steenrod::new(x, p)?;
    let mut r = CheckReport::new("reduced-steenrod", seed).with_param("variety", x.to_string()).with_param("p", p.get());
    let mut classes = vec![ChowElt::one(x, Field::ModP(p))];
    for k in 0..samples {
        classes.push(random_chow_mod_p(&mut case_rng(seed, case_key(v, k)), x, p));
    }
    for c in classes {
        let mut coh = st.zero();
        let mut hom = st.zero();
        for n in 0..=st.max_index() {
            coh = coh.add(&st.reduced_steenrod(n, &c)?)?;
            hom = hom.add(&st.reduced_steenrod_hom(n, &c)?)?;
        }
        let s = st.total_s(&c)?;
        let sh = st.total_s_hom(&c)?;
        r.expect(coh == s, || evidence("Σ S_n = S", &c, 0, &coh, &s));
        r.expect(hom == sh, || evidence("Σ S_n = S (homological)", &c, 0, &hom, &sh));
    }
    Ok(r)
}

/// Models of the corpus as `(index, variety)` pairs for seeded sweeps.
pub fn sweep<F>(id: &str, p: Prime, varieties: &[ModelVariety], seed: u64, case: F) -> Result<CheckReport>
where
    F: Fn(usize, &ModelVariety) -> Result<CheckReport> + Sync,
{
    let base = CheckReport::new(id, seed)
        .with_param("p", p.get())
        .with_param("varieties", varieties.len())
        .with_param("max_dim", varieties.iter().map(|v| v.dim()).max().unwrap_or(0))
        .with_param("rng", RNG_DESCRIPTION);
    merge_cases(base, varieties, case)
}

/// Cartan on `pairs` random pairs per model: `x` on `X`, `y` on `P^1`,
/// `P^2` or `X` itself, all valid `i`.
pub fn sweep_cartan(p: Prime, varieties: &[ModelVariety], pairs: usize, seed: u64) -> Result<CheckReport> {
    sweep("cartan", p, varieties, seed, |v, x| {
        let mut r = CheckReport::new("cartan", seed);
        for k in 0..pairs {
            let mut rng = case_rng(seed, case_key(v, k));
            let other = match k % 3 {
                0 => ModelVariety::projective(1),
                1 => ModelVariety::projective(2),
                _ => x.clone(),
            };
            let a = random_chow_mod_p(&mut rng, x, p);
            let b = random_chow_mod_p(&mut rng, &other, p);
            let m = (x.dim() + other.dim()) / (p.get() as u32 - 1);
            for i in 0..=m {
                r.absorb(check_cartan(&a, &b, i, p)?);
            }
        }
        Ok(r)
    })
}

/// Riemann-Roch identities for every morphism into each model, on all
/// monomials of both sides.
pub fn sweep_riemann_roch(p: Prime, targets: &[ModelVariety], max_source_dim: u32, seed: u64) -> Result<CheckReport> {
    sweep("rr-T", p, targets, seed, |_, x| {
        let mut r = CheckReport::new("rr-T", seed);
        for f in Morphism::corpus_into(x, max_source_dim) {
            let xs = Steenrod::new(f.target(), p)?.monomials();
            let ys = Steenrod::new(f.source(), p)?.monomials();
            let m = f.source().dim().max(f.target().dim()) / (p.get() as u32 - 1);
            for i in 0..=m {
                r.absorb(check_riemann_roch_t(&f, i, p, &xs, &ys)?);
            }
        }
        Ok(r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn h(x: &ModelVariety, p: Prime, j: usize) -> ChowElt {
        ChowElt::h(x, Field::ModP(p), j)
    }

    #[test]
    fn witness_beyond_range() {
        let r = check_st_witness().unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.cases, 3);
    }

    #[test]
    fn t_construct_examples() {
        let p2 = prime(2);
        let pl1 = ModelVariety::projective(1);
        let st = Steenrod::new(&pl1, p2).unwrap();
        assert!(st.t_construct(1, &ChowElt::one(&pl1, Field::ModP(p2))).unwrap().is_zero());
        let pl2 = ModelVariety::projective(2);
        let st = Steenrod::new(&pl2, p2).unwrap();
        let fund = ChowElt::one(&pl2, Field::ModP(p2));
        assert_eq!(st.t_construct(1, &fund).unwrap(), h(&pl2, p2, 0));
        assert_eq!(st.t_via_genus(1, &[2]).unwrap(), h(&pl2, p2, 0));
        assert_eq!(st.t_construct(0, &fund).unwrap(), fund);
        let mixed = fund.add(&h(&pl2, p2, 0)).unwrap();
        assert_eq!(st.t_construct(1, &mixed), Err(Error::NotHomogeneous));
    }

    #[test]
    fn t_via_genus_examples() {
        let p2 = prime(2);
        let pl3 = ModelVariety::projective(3);
        let st = Steenrod::new(&pl3, p2).unwrap();
        assert!(st.t_via_genus(1, &[0]).unwrap().is_zero());
        let line = ChowElt::linear_class(&pl3, Field::ModP(p2), &[1]).unwrap();
        assert_eq!(st.t_via_genus(1, &[1]).unwrap(), st.t_construct(1, &line).unwrap());
    }

    #[test]
    fn cohomological_examples() {
        let p2 = prime(2);
        let pl4 = ModelVariety::projective(4);
        let st = Steenrod::new(&pl4, p2).unwrap();
        let hh = h(&pl4, p2, 0);
        assert_eq!(st.t_coh(0, &hh).unwrap(), hh);
        assert_eq!(st.t_coh(1, &hh).unwrap(), hh.pow(2).unwrap());
        let one = ChowElt::one(&pl4, Field::ModP(p2));
        for i in 1..=4 {
            assert!(st.t_coh(i, &one).unwrap().is_zero());
        }
    }

    #[test]
    fn steenrod_examples() {
        let p2 = prime(2);
        let pl4 = ModelVariety::projective(4);
        let st = Steenrod::new(&pl4, p2).unwrap();
        let hh = h(&pl4, p2, 0);
        assert_eq!(st.total_s(&hh).unwrap(), hh.add(&hh.pow(2).unwrap()).unwrap());
        let one = ChowElt::one(&pl4, Field::ModP(p2));
        assert_eq!(st.total_s(&one).unwrap(), one);
        let tp = st.total_t_prime(&hh).unwrap();
        assert_eq!(tp, hh.add(&hh.pow(2).unwrap()).unwrap().add(&hh.pow(4).unwrap()).unwrap());
        assert_eq!(st.t_prime_component(1, &hh).unwrap(), hh.pow(2).unwrap());
        assert!(st.t_prime_component(2, &hh).unwrap().is_zero());
        assert_eq!(st.t_prime_component(3, &hh).unwrap(), hh.pow(4).unwrap());
        assert!(st.s_component(3, &hh).unwrap().is_zero());
        assert_eq!(st.total_t_prime(&one).unwrap(), one);
        assert_eq!(st.reduced_steenrod(1, &hh).unwrap(), hh.pow(2).unwrap());
        for n in 1..=4 {
            assert!(st.reduced_steenrod(n, &one).unwrap().is_zero());
        }

        let x = ModelVariety::new(&[2, 2]);
        let st = Steenrod::new(&x, p2).unwrap();
        let (a, b) = (h(&x, p2, 0), h(&x, p2, 1));
        let expected = a.add(&a.pow(2).unwrap()).unwrap().mul(&b.add(&b.pow(2).unwrap()).unwrap()).unwrap();
        assert_eq!(st.total_s(&a.mul(&b).unwrap()).unwrap(), expected);
    }

    #[test]
    fn divisor_shadow_of_series_inverse() {
        for p in [2u64, 3, 5] {
            let p = prime(p);
            let x = ModelVariety::projective(8);
            let st = Steenrod::new(&x, p).unwrap();
            let hh = h(&x, p, 0);
            let r = crate::series::r_series(p, 8);
            let mut expected = ChowElt::zero(&x, Field::ModP(p));
            for (k, c) in r.coeffs().iter().enumerate() {
                expected = expected.add(&hh.pow(k as u32 + 1).unwrap().scale(c).unwrap()).unwrap();
            }
            assert_eq!(st.total_t_prime(&hh).unwrap(), expected);
        }
    }

    #[test]
    fn prop_tr_on_plane() {
        let p2 = prime(2);
        let pl2 = ModelVariety::projective(2);
        let st = Steenrod::new(&pl2, p2).unwrap();
        let t = st.total_t_prime_hom(&ChowElt::one(&pl2, Field::ModP(p2))).unwrap();
        assert_eq!(t.codim_part(1), h(&pl2, p2, 0));
        assert!(check_prop_tr_smooth(&pl2, p2).unwrap().is_ok());
        let pt = ModelVariety::point();
        assert!(check_prop_tr_smooth(&pt, p2).unwrap().is_ok());
        assert!(check_prop_tr_smooth(&ModelVariety::new(&[1, 1]), p2).unwrap().is_ok());
    }

    #[test]
    fn prop_st_with_witness() {
        let p2 = prime(2);
        let r = check_prop_st(&ModelVariety::projective(4), p2).unwrap();
        assert!(r.is_ok(), "{r}");
        assert!(r.notes.iter().any(|n| n["differences_beyond_range"].as_u64().unwrap_or(0) > 0));
        assert!(check_prop_st(&ModelVariety::projective(6), prime(3)).unwrap().is_ok());
    }

    #[test]
    fn cartan_example() {
        let p2 = prime(2);
        let x = ChowElt::one(&ModelVariety::projective(2), Field::ModP(p2));
        let y = ChowElt::one(&ModelVariety::projective(1), Field::ModP(p2));
        let r = check_cartan(&x, &y, 1, p2).unwrap();
        assert!(r.is_ok());
        let prod = ModelVariety::new(&[2, 1]);
        let st = Steenrod::new(&prod, p2).unwrap();
        assert_eq!(st.t_hom(1, &x.external(&y).unwrap()).unwrap(), h(&prod, p2, 0));
        assert!(check_cartan(&x, &y, 0, p2).unwrap().is_ok());
    }

    #[test]
    fn riemann_roch_examples() {
        let p2 = prime(2);
        let pl2 = ModelVariety::projective(2);
        let proj = Morphism::projection(&pl2, &ModelVariety::projective(1));
        let xs = Steenrod::new(&pl2, p2).unwrap().monomials();
        let ys = Steenrod::new(proj.source(), p2).unwrap().monomials();
        assert!(check_riemann_roch_t(&proj, 1, p2, &xs, &ys).unwrap().is_ok());
        let emb = Morphism::linear_embedding(&pl2, &[1]).unwrap();
        let ys = Steenrod::new(emb.source(), p2).unwrap().monomials();
        assert!(check_riemann_roch_t(&emb, 1, p2, &xs, &ys).unwrap().is_ok());
        // Divisor case: T^1 of the line class is -(line)^p.
        let st = Steenrod::new(&pl2, p2).unwrap();
        let line = emb.pushforward_chow(&ChowElt::one(emb.source(), Field::ModP(p2))).unwrap();
        assert_eq!(st.t_coh(1, &line).unwrap(), line.pow(2).unwrap().neg());
        let id = Morphism::identity(&pl2);
        assert!(check_riemann_roch_t(&id, 1, p2, &xs, &xs).unwrap().is_ok());
    }

    #[test]
    fn small_sweeps() {
        let models = ModelVariety::all_up_to_dim(3);
        for p in [2u64, 3] {
            let p = prime(p);
            for (v, x) in models.iter().enumerate() {
                assert!(check_pipelines(x, p).unwrap().is_ok());
                assert!(check_well_defined(x, p, 5, 0, v).unwrap().is_ok());
                assert!(check_coh_axioms(x, p, 3, 0, v).unwrap().is_ok());
                assert!(check_reduced_steenrod(x, p, 3, 0, v).unwrap().is_ok());
            }
        }
    }

    #[test]
    fn rational_inputs_are_reduced() {
        let p3 = prime(3);
        let x = ModelVariety::projective(2);
        let st = Steenrod::new(&x, p3).unwrap();
        let c = ChowElt::h(&x, Field::Rational, 0).scale(&rat(4)).unwrap();
        assert_eq!(st.t_coh(0, &c).unwrap(), h(&x, p3, 0));
        assert!(certified_by_universal_bound(1, prime(2)));
        assert!(!certified_by_universal_bound(2, prime(2)));
        let other = ChowElt::h(&x, Field::ModP(prime(5)), 0);
        assert!(st.total_s(&other).is_err());
    }
}
