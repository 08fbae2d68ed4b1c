//! Čech double complexes over stars.
//!
//! `C^{p,q}` (de Rham side) and `D^{p,q}` (Sullivan side) consist of
//! antisymmetric families `(ω_u)` indexed by vertex tuples `u` of length
//! `p + 1`, with `ω_u` a `q`-form on `St u`. Only increasing tuples are
//! stored. Rows are certified exact by the homotopy
//! `(Kω)_w = Σ_v ρ_v [ω_{v*w}]|_{St w}` (`t_v` instead of `ρ_v` on the
//! Sullivan side), which satisfies `δK + Kδ = ι` into the truncation of
//! weight `D + N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exactla::{rank, RationalMatrix};
use crate::kaehler::{self, ExtensionRule, OmegaTruncation};
use crate::polyalg::PolyForm;
use crate::simplicial::{Subcomplex, VertexTuple};
use crate::sullivan::{self, ATruncation};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Omega,
    Sullivan,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Omega, Side::Sullivan];

    pub fn name(self) -> &'static str {
        match self {
            Side::Omega => "omega",
            Side::Sullivan => "sullivan",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A truncated form space on one subcomplex, from either side.
#[derive(Clone, Debug)]
pub enum FormSpace {
    Omega(Arc<OmegaTruncation>),
    Sullivan(Arc<ATruncation>),
    /// The space over an empty star.
    Zero,
}

impl FormSpace {
    pub fn build(engine: &Engine, side: Side, y: &Subcomplex, q: usize, bound: usize) -> Result<Self> {
        if y.is_empty() {
            return Ok(FormSpace::Zero);
        }
        Ok(match side {
            Side::Omega => FormSpace::Omega(engine.omega(y, q, bound)?),
            Side::Sullivan => FormSpace::Sullivan(engine.sullivan(y, q, bound)?),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            FormSpace::Omega(t) => t.dim(),
            FormSpace::Sullivan(t) => t.dim(),
            FormSpace::Zero => 0,
        }
    }

    pub fn complex(&self) -> Option<&Subcomplex> {
        match self {
            FormSpace::Omega(t) => Some(t.complex()),
            FormSpace::Sullivan(t) => Some(t.complex()),
            FormSpace::Zero => None,
        }
    }

    pub fn bound(&self) -> Option<usize> {
        match self {
            FormSpace::Omega(t) => Some(t.bound()),
            FormSpace::Sullivan(t) => Some(t.bound()),
            FormSpace::Zero => None,
        }
    }
}

fn pairwise(
    src: &FormSpace,
    dst: &FormSpace,
    omega: impl FnOnce(&OmegaTruncation, &OmegaTruncation) -> Result<RationalMatrix>,
    sullivan: impl FnOnce(&ATruncation, &ATruncation) -> Result<RationalMatrix>,
) -> Result<RationalMatrix> {
    match (src, dst) {
        (FormSpace::Zero, _) | (_, FormSpace::Zero) => Ok(RationalMatrix::zeros(dst.dim(), src.dim())),
        (FormSpace::Omega(a), FormSpace::Omega(b)) => omega(a, b),
        (FormSpace::Sullivan(a), FormSpace::Sullivan(b)) => sullivan(a, b),
        _ => Err(Error::AssertionFailure("form spaces from different sides".into())),
    }
}

/// Restriction to a subcomplex, same `q` and bound.
pub fn restrict(src: &FormSpace, dst: &FormSpace) -> Result<RationalMatrix> {
    pairwise(src, dst, kaehler::restriction_matrix, sullivan::a_restrict)
}

/// The distinguished extension from a subcomplex.
pub fn extend(small: &FormSpace, big: &FormSpace, rule: ExtensionRule) -> Result<RationalMatrix> {
    pairwise(small, big, |a, b| kaehler::extension_matrix(a, b, rule), sullivan::a_extend)
}

/// Exterior derivative `q → q + 1`.
pub fn differential(src: &FormSpace, dst: &FormSpace) -> Result<RationalMatrix> {
    pairwise(src, dst, kaehler::omega_d, sullivan::a_d)
}

/// Inclusion into a larger truncation.
pub fn embed(src: &FormSpace, dst: &FormSpace) -> Result<RationalMatrix> {
    pairwise(src, dst, kaehler::embedding_matrix, sullivan::a_embed)
}

/// Multiplication by a function given in the ambient variables.
pub fn multiply(src: &FormSpace, dst: &FormSpace, f: &PolyForm) -> Result<RationalMatrix> {
    pairwise(src, dst, |a, b| kaehler::multiplication_matrix(a, b, f), |a, b| sullivan::a_multiply(a, b, f))
}

/// The weight shift `N` of the homotopy: `|V| + 1` for `ρ_v`, `1` for `t_v`.
pub fn homotopy_shift(engine: &Engine, side: Side) -> Result<usize> {
    Ok(match side {
        Side::Omega => engine.partition()?.exponent() as usize,
        Side::Sullivan => 1,
    })
}

fn weight_function(engine: &Engine, side: Side, v: usize) -> Result<PolyForm> {
    Ok(match side {
        Side::Omega => engine.partition()?.rho(v),
        Side::Sullivan => PolyForm::var(v),
    })
}

/// `C^{p,q}` or `D^{p,q}` truncated at weight `D`.
#[derive(Clone, Debug)]
pub struct CechSpace {
    side: Side,
    p: isize,
    q: usize,
    bound: usize,
    tuples: Vec<VertexTuple>,
    stars: Vec<Subcomplex>,
    components: Vec<FormSpace>,
    offsets: Vec<usize>,
    dim: usize,
    index: HashMap<VertexTuple, usize>,
}

impl CechSpace {
    pub fn new(engine: &Engine, side: Side, p: isize, q: usize, bound: usize) -> Result<Self> {
        let tuples = engine.complex().increasing_tuples(p);
        let stars: Vec<Subcomplex> = tuples.iter().map(|u| engine.whole().star(u)).collect();
        let components =
            stars.par_iter().map(|s| FormSpace::build(engine, side, s, q, bound)).collect::<Result<Vec<_>>>()?;
        let mut offsets = Vec::with_capacity(components.len());
        let mut dim = 0;
        for c in &components {
            offsets.push(dim);
            dim += c.dim();
        }
        let index = tuples.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
        Ok(CechSpace { side, p, q, bound, tuples, stars, components, offsets, dim, index })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn p(&self) -> isize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tuples(&self) -> &[VertexTuple] {
        &self.tuples
    }

    pub fn star(&self, i: usize) -> &Subcomplex {
        &self.stars[i]
    }

    pub fn component(&self, i: usize) -> &FormSpace {
        &self.components[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn position(&self, u: &VertexTuple) -> Option<usize> {
        self.index.get(u).copied()
    }

    fn check_compatible(&self, other: &CechSpace) -> Result<()> {
        if self.side != other.side {
            return Err(Error::AssertionFailure("Čech spaces from different sides".into()));
        }
        Ok(())
    }
}

/// Assembles a block matrix from `(row component, column component, block)` triples.
fn assemble(dst: &CechSpace, src: &CechSpace, blocks: Vec<(usize, usize, RationalMatrix)>) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(dst.dim, src.dim);
    for (i, j, b) in blocks {
        m.add_block(dst.offsets[i], src.offsets[j], &b);
    }
    m
}

/// `δ: (p, q) → (p + 1, q)`, `(δω)_s = Σ_i (−1)^i ω_{∂_i s}|_{St s}`.
pub fn cech_delta(src: &CechSpace, dst: &CechSpace) -> Result<RationalMatrix> {
    src.check_compatible(dst)?;
    if dst.p != src.p + 1 || dst.q != src.q || dst.bound != src.bound {
        return Err(Error::AssertionFailure("δ needs spaces at (p, q) and (p + 1, q)".into()));
    }
    let jobs: Vec<(usize, usize, i64)> = (0..dst.tuples.len())
        .filter(|&i| dst.components[i].dim() > 0)
        .flat_map(|i| {
            let s = &dst.tuples[i];
            (0..s.len()).filter_map(move |k| {
                let j = src.position(&s.face(k))?;
                Some((i, j, if k % 2 == 0 { 1 } else { -1 }))
            })
        })
        .filter(|&(_, j, _)| src.components[j].dim() > 0)
        .collect();
    let blocks = jobs
        .into_par_iter()
        .map(|(i, j, sign)| {
            let r = restrict(&src.components[j], &dst.components[i])?;
            Ok((i, j, if sign == 1 { r } else { r.scale(&-crate::exactla::Rational::ONE) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dst, src, blocks))
}

/// The exterior derivative `(p, q) → (p, q + 1)`, componentwise.
pub fn cech_d(src: &CechSpace, dst: &CechSpace) -> Result<RationalMatrix> {
    src.check_compatible(dst)?;
    if dst.p != src.p || dst.q != src.q + 1 || dst.bound != src.bound {
        return Err(Error::AssertionFailure("d needs spaces at (p, q) and (p, q + 1)".into()));
    }
    let blocks = (0..src.tuples.len())
        .into_par_iter()
        .map(|i| Ok((i, i, differential(&src.components[i], &dst.components[i])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dst, src, blocks))
}

/// The inclusion of truncations `F_D → F_D'`, componentwise.
pub fn cech_embed(src: &CechSpace, dst: &CechSpace) -> Result<RationalMatrix> {
    src.check_compatible(dst)?;
    if dst.p != src.p || dst.q != src.q || dst.bound < src.bound {
        return Err(Error::AssertionFailure("embedding needs equal (p, q) and a larger bound".into()));
    }
    let blocks = (0..src.tuples.len())
        .into_par_iter()
        .map(|i| Ok((i, i, embed(&src.components[i], &dst.components[i])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dst, src, blocks))
}

/// The homotopy `K: (p, q)_D → (p − 1, q)_{D+N}`. `dst` must have bound
/// `src.bound() + homotopy_shift(side)`.
pub fn homotopy_k(engine: &Engine, src: &CechSpace, dst: &CechSpace, rule: ExtensionRule) -> Result<RationalMatrix> {
    src.check_compatible(dst)?;
    let shift = homotopy_shift(engine, src.side)?;
    if src.p < 0 || dst.p != src.p - 1 || dst.q != src.q || dst.bound != src.bound + shift {
        return Err(Error::AssertionFailure("K needs spaces at (p, q, D) and (p − 1, q, D + N)".into()));
    }
    let vertices: Vec<usize> = engine.whole().vertices();
    let jobs: Vec<(usize, usize, usize, i64)> = (0..dst.tuples.len())
        .filter(|&i| dst.components[i].dim() > 0)
        .flat_map(|i| {
            let w = &dst.tuples[i];
            vertices.iter().filter_map(move |&v| {
                let (sign, u) = w.cone(v).sorted_with_sign()?;
                let j = src.position(&u)?;
                Some((i, j, v, sign))
            })
        })
        .filter(|&(_, j, _, _)| src.components[j].dim() > 0)
        .collect();
    let blocks = jobs
        .into_par_iter()
        .map(|(i, j, v, sign)| {
            let star_w = &dst.stars[i];
            let low = FormSpace::build(engine, src.side, star_w, src.q, src.bound)?;
            let ext = extend(&src.components[j], &low, rule)?;
            let mult = multiply(&low, &dst.components[i], &weight_function(engine, src.side, v)?)?;
            let block = mult.mul(&ext);
            Ok((i, j, if sign == 1 { block } else { block.scale(&-crate::exactla::Rational::ONE) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dst, src, blocks))
}

/// Outcome of the homotopy identity at one column index `p`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub p: isize,
    pub dim: usize,
    pub holds: bool,
    /// First basis index at which `δK + Kδ` and `ι` differ.
    pub offending_basis_index: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RowExactnessReport {
    pub side: Side,
    pub q: usize,
    pub bound: usize,
    pub shift: usize,
    pub p_max: usize,
    pub identities: Vec<IdentityCheck>,
    pub delta_squared_zero: bool,
    pub augmentation_injective: bool,
}

impl RowExactnessReport {
    pub fn passed(&self) -> bool {
        self.delta_squared_zero && self.augmentation_injective && self.identities.iter().all(|c| c.holds)
    }
}

fn first_differing_column(a: &RationalMatrix, b: &RationalMatrix) -> Option<usize> {
    (0..a.cols()).find(|&j| (0..a.rows()).any(|i| a[(i, j)] != b[(i, j)]))
}

/// Checks `δK + Kδ = ι` for `-1 ≤ p ≤ p_max` (only `Kδ = ι` at `p = -1`),
/// `δ² = 0`, and injectivity of `δ` out of the `p = -1` column.
pub fn row_exactness_report(
    engine: &Engine,
    side: Side,
    q: usize,
    bound: usize,
    p_max: usize,
    rule: ExtensionRule,
) -> Result<RowExactnessReport> {
    let shift = homotopy_shift(engine, side)?;
    let top = p_max as isize + 1;
    let low: Vec<CechSpace> = (-1..=top).map(|p| CechSpace::new(engine, side, p, q, bound)).collect::<Result<_>>()?;
    let high: Vec<CechSpace> =
        (-1..=top).map(|p| CechSpace::new(engine, side, p, q, bound + shift)).collect::<Result<_>>()?;
    let at = |p: isize| (p + 1) as usize;
    // δ at both bounds, from column p to p + 1
    let delta_low: Vec<RationalMatrix> =
        (-1..top).map(|p| cech_delta(&low[at(p)], &low[at(p + 1)])).collect::<Result<_>>()?;
    let delta_high: Vec<RationalMatrix> =
        (-1..top).map(|p| cech_delta(&high[at(p)], &high[at(p + 1)])).collect::<Result<_>>()?;
    // K from column p to p - 1
    let k: Vec<RationalMatrix> =
        (0..=top).map(|p| homotopy_k(engine, &low[at(p)], &high[at(p - 1)], rule)).collect::<Result<_>>()?;
    let delta_squared_zero = delta_low.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
        && delta_high.windows(2).all(|w| w[1].mul(&w[0]).is_zero());
    let augmentation_injective = rank(&delta_low[0]) == low[0].dim();
    let mut identities = Vec::new();
    for p in -1..=p_max as isize {
        let iota = cech_embed(&low[at(p)], &high[at(p)])?;
        // Kδ: K on column p + 1 after δ out of column p
        let mut lhs = k[at(p)].mul(&delta_low[at(p)]);
        if p >= 0 {
            lhs = lhs.add(&delta_high[at(p - 1)].mul(&k[at(p) - 1]));
        }
        let offending = first_differing_column(&lhs, &iota);
        identities.push(IdentityCheck { p, dim: low[at(p)].dim(), holds: offending.is_none(), offending_basis_index: offending });
    }
    Ok(RowExactnessReport { side, q, bound, shift, p_max, identities, delta_squared_zero, augmentation_injective })
}

/// Like [`row_exactness_report`], failing with the first offending `(p, basis index)`.
pub fn certify_row_exactness(
    engine: &Engine,
    side: Side,
    q: usize,
    bound: usize,
    p_max: usize,
) -> Result<RowExactnessReport> {
    let report = row_exactness_report(engine, side, q, bound, p_max, ExtensionRule::default())?;
    if let Some(c) = report.identities.iter().find(|c| !c.holds) {
        return Err(Error::AssertionFailure(format!(
            "δK + Kδ ≠ ι at p = {}, basis index {}",
            c.p,
            c.offending_basis_index.unwrap_or(0)
        )));
    }
    if !report.delta_squared_zero {
        return Err(Error::AssertionFailure("δ² ≠ 0".into()));
    }
    if !report.augmentation_injective {
        return Err(Error::AssertionFailure("δ out of the p = -1 column is not injective".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn bd2() -> Engine {
        Engine::new(SimplicialComplex::from_index_lists("bd2", 3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap())
    }

    #[test]
    fn spaces_of_boundary_triangle() {
        let e = bd2();
        let c = CechSpace::new(&e, Side::Omega, -1, 0, 2).unwrap();
        assert_eq!(c.tuples().len(), 1);
        assert_eq!(c.star(0), e.whole());
        let c = CechSpace::new(&e, Side::Omega, 1, 0, 2).unwrap();
        assert_eq!(c.tuples().len(), 3);
        let edge12 = Subcomplex::closure([e.complex().simplex(&["1", "2"]).unwrap()]);
        assert_eq!(c.star(0), &edge12);
        let c = CechSpace::new(&e, Side::Omega, 2, 0, 2).unwrap();
        assert_eq!(c.dim(), 0);
        assert!(CechSpace::new(&e, Side::Omega, -2, 0, 2).unwrap().tuples().is_empty());
    }

    #[test]
    fn point_homotopy_inverts_delta() {
        let e = Engine::new(SimplicialComplex::from_index_lists("pt", 1, &[&[1]]).unwrap());
        for side in Side::BOTH {
            for q in 0..2 {
                let r = certify_row_exactness(&e, side, q, 2, 1).unwrap();
                assert!(r.passed());
            }
        }
    }

    #[test]
    fn boundary_triangle_rows() {
        let e = bd2();
        assert!(certify_row_exactness(&e, Side::Omega, 0, 3, 1).unwrap().passed());
        assert!(certify_row_exactness(&e, Side::Sullivan, 1, 3, 1).unwrap().passed());
    }

    #[test]
    fn delta_commutes_with_d() {
        let e = bd2();
        for side in Side::BOTH {
            for p in -1..1 {
                let a = CechSpace::new(&e, side, p, 0, 3).unwrap();
                let b = CechSpace::new(&e, side, p + 1, 0, 3).unwrap();
                let a1 = CechSpace::new(&e, side, p, 1, 3).unwrap();
                let b1 = CechSpace::new(&e, side, p + 1, 1, 3).unwrap();
                let lhs = cech_d(&b, &b1).unwrap().mul(&cech_delta(&a, &b).unwrap());
                let rhs = cech_delta(&a1, &b1).unwrap().mul(&cech_d(&a, &a1).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn homotopy_independent_of_extension_rule() {
        let e = bd2();
        let shift = homotopy_shift(&e, Side::Omega).unwrap();
        for p in 0..2 {
            let src = CechSpace::new(&e, Side::Omega, p, 1, 2).unwrap();
            let dst = CechSpace::new(&e, Side::Omega, p - 1, 1, 2 + shift).unwrap();
            let a = homotopy_k(&e, &src, &dst, ExtensionRule::Reinterpret).unwrap();
            let b = homotopy_k(&e, &src, &dst, ExtensionRule::Solve).unwrap();
            assert_eq!(a, b);
        }
    }
}
