//! Morphisms between model varieties built from projections, linear
//! embeddings `P^m ⊂ P^n` and constant maps to points, factor by factor.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::NilPoly;

use super::chow::ChowElt;
use super::ktheory::{KCohElt, KHomElt, VirtualBundle};
use super::ModelVariety;

/// `f: Y → X`. Target factor `k` is either the linear image of source factor
/// `assignment[k]` or a point of `P^{N_k}` (`None`). Source factors not named
/// by any target factor are projected away.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: ModelVariety,
    target: ModelVariety,
    assignment: Vec<Option<usize>>,
}

impl Morphism {
    pub fn new(source: &ModelVariety, target: &ModelVariety, assignment: &[Option<usize>]) -> Result<Self> {
        let unsupported = |why: &str| Error::UnsupportedMorphism(format!("{source} -> {target}: {why}"));
        if assignment.len() != target.num_factors() {
            return Err(unsupported("one assignment per target factor"));
        }
        let mut used = vec![false; source.num_factors()];
        for (k, a) in assignment.iter().enumerate() {
            if let Some(s) = *a {
                if s >= source.num_factors() {
                    return Err(unsupported("source factor out of range"));
                }
                if used[s] {
                    return Err(unsupported("source factor used twice"));
                }
                used[s] = true;
                if source.factors()[s] > target.factors()[k] {
                    return Err(unsupported("linear map would lower dimension"));
                }
            }
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), assignment: assignment.to_vec() })
    }

    pub fn identity(x: &ModelVariety) -> Self {
        let a: Vec<Option<usize>> = (0..x.num_factors()).map(Some).collect();
        Morphism::new(x, x, &a).expect("identity is supported")
    }

    /// `X × Y → X`.
    pub fn projection(x: &ModelVariety, y: &ModelVariety) -> Self {
        let a: Vec<Option<usize>> = (0..x.num_factors()).map(Some).collect();
        Morphism::new(&x.product(y), x, &a).expect("projection is supported")
    }

    /// `L_I = ∏ P^{i_j} ⊂ X`.
    pub fn linear_embedding(x: &ModelVariety, index: &[u32]) -> Result<Self> {
        let a: Vec<Option<usize>> = (0..x.num_factors()).map(Some).collect();
        Morphism::new(&ModelVariety::new(index), x, &a)
    }

    pub fn source(&self) -> &ModelVariety {
        &self.source
    }

    pub fn target(&self) -> &ModelVariety {
        &self.target
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    fn dropped(&self) -> Vec<usize> {
        (0..self.source.num_factors()).filter(|s| !self.assignment.contains(&Some(*s))).collect()
    }

    fn pull_images(&self, field: crate::exactnum::Field) -> Vec<NilPoly> {
        let dims = self.source.factors();
        self.assignment
            .iter()
            .map(|a| match a {
                Some(s) => NilPoly::var(dims, field, *s),
                None => NilPoly::zero(dims, field),
            })
            .collect()
    }

    /// `f^*` on Chow rings: `h_k ↦ h_{s(k)}`, or 0 for constant factors.
    pub fn pullback_chow(&self, x: &ChowElt) -> Result<ChowElt> {
        self.check_target(x.variety())?;
        let poly = x.poly().substitute(&self.pull_images(x.field()), self.source.factors())?;
        Ok(ChowElt::from_poly(&self.source, poly))
    }

    /// `f^*` on `K_0`: `t_k ↦ t_{s(k)}`, or 1 for constant factors.
    pub fn pullback_kcoh(&self, x: &KCohElt) -> Result<KCohElt> {
        self.check_target(x.variety())?;
        let poly = x.poly().substitute(&self.pull_images(x.poly().field()), self.source.factors())?;
        Ok(KCohElt::from_poly(&self.source, poly))
    }

    /// `f^*` on `K'_0` of smooth models, through `K_0`.
    pub fn pullback_khom(&self, x: &KHomElt) -> Result<KHomElt> {
        Ok(KHomElt::from_coh(&self.pullback_kcoh(&x.to_coh())?))
    }

    pub fn pullback_bundle(&self, u: &VirtualBundle) -> Result<VirtualBundle> {
        self.check_target(u.variety())?;
        let terms: Vec<(Vec<i64>, i64)> = u
            .terms()
            .map(|(a, m)| {
                let mut b = vec![0; self.source.num_factors()];
                for (k, s) in self.assignment.iter().enumerate() {
                    if let Some(s) = s {
                        b[*s] = a[k];
                    }
                }
                (b, m)
            })
            .collect();
        VirtualBundle::from_terms(&self.source, &terms)
    }

    /// `T_f = T_Y - f^* T_X`.
    pub fn virtual_tangent(&self) -> Result<VirtualBundle> {
        VirtualBundle::tangent(&self.source).sub(&self.pullback_bundle(&VirtualBundle::tangent(&self.target))?)
    }

    /// Image index of the cycle `L_I` of the source, or `None` when the
    /// pushforward vanishes (positive-dimensional fibres).
    fn push_index(&self, index: &[u32]) -> Option<Vec<u32>> {
        if self.dropped().iter().any(|&s| index[s] != 0) {
            return None;
        }
        Some(self.assignment.iter().map(|a| a.map_or(0, |s| index[s])).collect())
    }

    /// `f_*` on Chow groups: `[L_I] ↦ [L_{f(I)}]`.
    pub fn pushforward_chow(&self, x: &ChowElt) -> Result<ChowElt> {
        self.check_source(x.variety())?;
        let m = self.source.factors().to_vec();
        let n = self.target.factors().to_vec();
        let poly = x.poly().remap(&n, |e| {
            let index: Vec<u32> = m.iter().zip(e).map(|(a, b)| a - b).collect();
            let image = self.push_index(&index)?;
            Some(n.iter().zip(&image).map(|(a, b)| a - b).collect())
        });
        Ok(ChowElt::from_poly(&self.target, poly))
    }

    /// `f_*` on `K'_0`: `⟦I⟧ ↦ ⟦f(I)⟧`; projections off `P^m` contribute
    /// `χ(O_{P^m}) = 1`.
    pub fn pushforward_khom(&self, x: &KHomElt) -> Result<KHomElt> {
        self.check_source(x.variety())?;
        let mut out = KHomElt::zero(&self.target);
        for (index, c) in x.terms() {
            let image: Vec<u32> = self.assignment.iter().map(|a| a.map_or(0, |s| index[s])).collect();
            out = out.add(&KHomElt::basis(&self.target, &image)?.scale(c)?)?;
        }
        Ok(out)
    }

    fn check_source(&self, v: &ModelVariety) -> Result<()> {
        if v != &self.source {
            return Err(Error::VarietyMismatch(self.source.to_string(), v.to_string()));
        }
        Ok(())
    }

    fn check_target(&self, v: &ModelVariety) -> Result<()> {
        if v != &self.target {
            return Err(Error::VarietyMismatch(self.target.to_string(), v.to_string()));
        }
        Ok(())
    }

    /// Every supported morphism from a model of dimension at most `max_dim`
    /// into `target`, plus the projections `target × P^1 → target`.
    pub fn corpus_into(target: &ModelVariety, max_dim: u32) -> Vec<Morphism> {
        let mut out = vec![Morphism::identity(target)];
        for index in target.basis() {
            if index.as_slice() != target.factors() && index.iter().sum::<u32>() <= max_dim {
                out.push(Morphism::linear_embedding(target, &index).expect("index within bounds"));
            }
        }
        if target.dim() < max_dim {
            out.push(Morphism::projection(target, &ModelVariety::projective(1)));
        }
        out
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|a| a.map_or("pt".to_string(), |s| (s + 1).to_string()))
            .collect();
        write!(f, "{} -> {} [{}]", self.source, self.target, parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Field};

    #[test]
    fn point_into_plane() {
        let p2 = ModelVariety::projective(2);
        let f = Morphism::new(&ModelVariety::point(), &p2, &[None]).unwrap();
        let pt = ChowElt::one(&ModelVariety::point(), Field::Rational);
        assert_eq!(f.pushforward_chow(&pt).unwrap(), ChowElt::h(&p2, Field::Rational, 0).pow(2).unwrap());
        let g = Morphism::linear_embedding(&p2, &[0]).unwrap();
        let pt0 = ChowElt::one(&ModelVariety::projective(0), Field::Rational);
        assert_eq!(g.pushforward_chow(&pt0).unwrap().degree(), rat(1));
    }

    #[test]
    fn projection_pullback() {
        let p2 = ModelVariety::projective(2);
        let f = Morphism::projection(&p2, &ModelVariety::projective(1));
        let h = ChowElt::h(&p2, Field::Rational, 0);
        assert_eq!(f.pullback_chow(&h).unwrap(), ChowElt::h(f.source(), Field::Rational, 0));
    }

    #[test]
    fn projection_pushforward_kills_positive_fibres() {
        let p2 = ModelVariety::projective(2);
        let f = Morphism::projection(&p2, &ModelVariety::projective(1));
        let y = f.source().clone();
        let fund = ChowElt::one(&y, Field::Rational);
        assert!(f.pushforward_chow(&fund).unwrap().is_zero());
        let section = ChowElt::h(&y, Field::Rational, 1);
        assert_eq!(f.pushforward_chow(&section).unwrap(), ChowElt::one(&p2, Field::Rational));
        let o = KHomElt::structure_sheaf(&y);
        assert_eq!(f.pushforward_khom(&o).unwrap(), KHomElt::structure_sheaf(&p2));
    }

    #[test]
    fn normal_bundle_of_a_line() {
        let p2 = ModelVariety::projective(2);
        let f = Morphism::linear_embedding(&p2, &[1]).unwrap();
        let tf = f.virtual_tangent().unwrap();
        assert_eq!(tf, VirtualBundle::line(f.source(), &[1]).unwrap().neg());
    }

    #[test]
    fn relative_tangent_of_projection() {
        let p2 = ModelVariety::projective(2);
        let p1 = ModelVariety::projective(1);
        let f = Morphism::projection(&p2, &p1);
        let expected = VirtualBundle::from_terms(f.source(), &[(vec![0, 1], 2), (vec![0, 0], -1)]).unwrap();
        assert_eq!(f.virtual_tangent().unwrap(), expected);
    }

    #[test]
    fn rejects_unsupported_shapes() {
        let p1 = ModelVariety::projective(1);
        let p2 = ModelVariety::projective(2);
        assert!(Morphism::new(&p2, &p1, &[Some(0)]).is_err());
        assert!(Morphism::new(&ModelVariety::new(&[1, 1]), &ModelVariety::new(&[2, 2]), &[Some(0), Some(0)]).is_err());
        assert!(Morphism::new(&p1, &p2, &[]).is_err());
    }

    #[test]
    fn chern_character_commutes_with_pushforward() {
        let x = ModelVariety::new(&[3, 1]);
        for f in Morphism::corpus_into(&x, 5) {
            for index in f.source().basis() {
                let e = KHomElt::basis(f.source(), &index).unwrap();
                let lhs = f.pushforward_khom(&e).unwrap().ch_total().unwrap();
                let rhs = f.pushforward_chow(&e.ch_total().unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{f} on {index:?}");
            }
        }
    }

    #[test]
    fn chern_character_and_pullback() {
        use crate::kchow::genus::todd_class;
        let x = ModelVariety::new(&[2, 2]);
        for f in Morphism::corpus_into(&x, 5) {
            let td_f = todd_class(&f.virtual_tangent().unwrap()).unwrap();
            for index in x.basis() {
                let e = KHomElt::basis(&x, &index).unwrap();
                let lhs = f.pullback_khom(&e).unwrap().ch_total().unwrap();
                let rhs = td_f.mul(&f.pullback_chow(&e.ch_total().unwrap()).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{f} on {index:?}");
            }
        }
    }
}
