//! The algebraic de Rham algebra `Ω•(Y)` of the polynomial-function algebra
//! of a complex `Y`.
//!
//! `A⁰(Y)` is presented as `ℚ[t_v : v ∈ V(Y)]` modulo `Σ t_v − 1` and the
//! monomials of the minimal non-faces of `Y`. `Ω�q(Y)` is the free module on
//! the `dt_S`, `|S| = q`, modulo the submodule generated by `r·dt_S` and
//! `dr ∧ dt_T` for the ring relations `r`. Both quotients are handled by
//! Gröbner normal forms under a degree-compatible order, so the weight
//! filtration pieces `F_D Ωᵠ(Y)` have the standard terms of weight `≤ D` as
//! an exact basis.

mod lemmas;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

pub use lemmas::{
    verify_extres, verify_presentation_deg0, verify_tv_annihilation, LemmaReport, PresentationReport,
};

use crate::error::{Error, Result};
use crate::exactla::{rank, right_inverse, Rational, RationalMatrix};
use crate::polyalg::{groebner, groebner_extending, weight_basis, DtSet, GroebnerBasis, GroebnerConfig, Monomial, PolyForm, Term};
use crate::simplicial::{combinations, Simplex, Subcomplex};

/// Finite presentation of `A⁰(Y)` and `Ω•(Y)` with lazily computed module
/// Gröbner bases.
#[derive(Debug)]
pub struct OmegaPresentation {
    complex: Subcomplex,
    vertices: Simplex,
    ring_relations: Vec<PolyForm>,
    ring_gb: Arc<GroebnerBasis>,
    module_gbs: Mutex<BTreeMap<usize, Arc<GroebnerBasis>>>,
    cfg: GroebnerConfig,
}

/// `Σ_{v ∈ vs} t_v − 1`.
pub fn affine_relation(vs: Simplex) -> PolyForm {
    let mut f = PolyForm::constant(-Rational::ONE);
    for v in vs.vertices() {
        f.add_assign(&PolyForm::var(v));
    }
    f
}

/// The square-free monomial `∏_{v ∈ s} t_v`.
pub fn face_monomial(s: Simplex) -> PolyForm {
    s.vertices().fold(PolyForm::one(), |acc, v| acc.wedge(&PolyForm::var(v)))
}

impl OmegaPresentation {
    pub fn new(complex: &Subcomplex, cfg: GroebnerConfig) -> Result<Self> {
        let vertices = complex.vertex_set();
        let mut ring_relations = vec![affine_relation(vertices)];
        ring_relations.extend(complex.minimal_nonfaces().into_iter().map(face_monomial));
        let ring_gb = Arc::new(groebner(ring_relations.clone(), &cfg)?);
        let mut module_gbs = BTreeMap::new();
        module_gbs.insert(0, ring_gb.clone());
        Ok(OmegaPresentation {
            complex: complex.clone(),
            vertices,
            ring_relations,
            ring_gb,
            module_gbs: Mutex::new(module_gbs),
            cfg,
        })
    }

    pub fn complex(&self) -> &Subcomplex {
        &self.complex
    }

    /// The vertex set, i.e. the variables of the presentation.
    pub fn vertices(&self) -> Simplex {
        self.vertices
    }

    pub fn ring_relations(&self) -> &[PolyForm] {
        &self.ring_relations
    }

    pub fn ring_gb(&self) -> &GroebnerBasis {
        &self.ring_gb
    }

    /// Gröbner basis of the relation submodule in form degree `q`.
    pub fn module_gb(&self, q: usize) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.module_gbs.lock().expect("poisoned").get(&q) {
            return Ok(gb.clone());
        }
        let verts: Vec<usize> = self.vertices.vertices().collect();
        let positions: Vec<DtSet> =
            combinations(&verts, q).into_iter().map(DtSet::from_vertices).collect();
        let known: Vec<PolyForm> = positions
            .iter()
            .flat_map(|&s| {
                self.ring_gb.elements().iter().map(move |g| g.wedge(&PolyForm::term(Term::new(Monomial::one(), s), Rational::ONE)))
            })
            .collect();
        let mut extra = Vec::new();
        for r in &self.ring_relations {
            let dr = r.d();
            for t in combinations(&verts, q - 1) {
                let dt = PolyForm::term(Term::new(Monomial::one(), DtSet::from_vertices(t)), Rational::ONE);
                extra.push(dr.wedge(&dt));
            }
        }
        let gb = Arc::new(groebner_extending(known, extra, &self.cfg)?);
        Ok(self.module_gbs.lock().expect("poisoned").entry(q).or_insert(gb).clone())
    }

    /// Normal form of a form whose variables are vertices of the complex.
    pub fn normal_form(&self, f: &PolyForm) -> Result<PolyForm> {
        debug_assert_eq!(f.support() & !self.vertices.mask(), 0, "form involves foreign variables");
        let mut out = PolyForm::zero();
        for (q, part) in f.by_form_degree() {
            out.add_assign(&self.module_gb(q)?.normal_form(&part));
        }
        Ok(out)
    }

    /// Restricts a form on a larger complex to this one (`t_v, dt_v ↦ 0` for
    /// foreign `v`) and normalizes it.
    pub fn pull(&self, f: &PolyForm) -> Result<PolyForm> {
        self.normal_form(&f.restrict_vars(self.vertices.mask()))
    }
}

/// The weight-`≤ D` filtration piece of `Ωᵠ(Y)` with its standard-term basis.
#[derive(Debug)]
pub struct OmegaTruncation {
    pres: Arc<OmegaPresentation>,
    q: usize,
    bound: usize,
    gb: Arc<GroebnerBasis>,
    basis: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl OmegaTruncation {
    pub fn new(pres: Arc<OmegaPresentation>, q: usize, bound: usize) -> Result<Self> {
        let gb = pres.module_gb(q)?;
        let verts: Vec<usize> = pres.vertices.vertices().collect();
        let basis: Vec<Term> = weight_basis(&verts, q, bound).into_iter().filter(|t| gb.is_standard(t)).collect();
        let index = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(OmegaTruncation { pres, q, bound, gb, basis, index })
    }

    pub fn presentation(&self) -> &Arc<OmegaPresentation> {
        &self.pres
    }

    pub fn complex(&self) -> &Subcomplex {
        &self.pres.complex
    }

    pub fn form_degree(&self) -> usize {
        self.q
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Term] {
        &self.basis
    }

    pub fn basis_form(&self, i: usize) -> PolyForm {
        PolyForm::term(self.basis[i].clone(), Rational::ONE)
    }

    /// Coordinates of the class of `f` (a degree-`q` form on the vertices of
    /// the complex).
    pub fn coords(&self, f: &PolyForm) -> Result<Vec<Rational>> {
        let nf = self.pres.normal_form(f)?;
        self.coords_of_normal_form(&nf)
    }

    fn coords_of_normal_form(&self, nf: &PolyForm) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::ZERO; self.dim()];
        for (t, c) in nf.terms() {
            match self.index.get(t) {
                Some(&i) => v[i] = c.clone(),
                None if t.form_degree() != self.q => {
                    return Err(Error::AssertionFailure(format!("term {t:?} has form degree other than {}", self.q)))
                }
                None => return Err(Error::WeightOverflow { bound: self.bound }),
            }
        }
        Ok(v)
    }

    /// Coordinates after restricting `f` to this complex.
    pub fn pull_coords(&self, f: &PolyForm) -> Result<Vec<Rational>> {
        self.coords_of_normal_form(&self.gb_pull(f)?)
    }

    fn gb_pull(&self, f: &PolyForm) -> Result<PolyForm> {
        let g = f.restrict_vars(self.pres.vertices.mask());
        Ok(self.gb.normal_form(&g))
    }

    /// The normal-form representative with the given coordinates.
    pub fn form(&self, coords: &[Rational]) -> PolyForm {
        assert_eq!(coords.len(), self.dim());
        PolyForm::from_terms(self.basis.iter().cloned().zip(coords.iter().cloned()))
    }

    /// Builds the matrix whose `j`-th column is `coords(f(basis_j))` in `target`.
    pub(crate) fn map_matrix(
        &self,
        target: &OmegaTruncation,
        f: impl Fn(&PolyForm) -> PolyForm,
    ) -> Result<RationalMatrix> {
        let columns = (0..self.dim())
            .map(|j| target.pull_coords(&f(&self.basis_form(j))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(target.dim(), &columns))
    }
}

/// Matrix of `d: F_D Ωᵠ → F_D Ωᵠ⁺¹` on one complex.
pub fn omega_d(src: &OmegaTruncation, dst: &OmegaTruncation) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    src.map_matrix(dst, PolyForm::d)
}

fn check_same_complex(a: &OmegaTruncation, b: &OmegaTruncation) -> Result<()> {
    if a.complex() != b.complex() {
        return Err(Error::AssertionFailure("truncations live on different complexes".into()));
    }
    Ok(())
}

/// Restriction `F_D Ωᵠ(X) → F_D Ωᵠ(Y)` for `Y ⊆ X`, without the rank check.
pub fn restriction_matrix(src: &OmegaTruncation, dst: &OmegaTruncation) -> Result<RationalMatrix> {
    if !dst.complex().is_subcomplex_of(src.complex()) {
        return Err(Error::AssertionFailure("restriction target is not a subcomplex".into()));
    }
    src.map_matrix(dst, PolyForm::clone)
}

/// Restriction matrix, asserting that it is surjective.
pub fn omega_restrict(src: &OmegaTruncation, dst: &OmegaTruncation) -> Result<RationalMatrix> {
    let m = restriction_matrix(src, dst)?;
    let r = rank(&m);
    if r != dst.dim() {
        return Err(Error::RankDeficient { context: "Ω restriction".into(), expected: dst.dim(), found: r });
    }
    Ok(m)
}

/// How the distinguished extension `[−]` is chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum ExtensionRule {
    /// Read the normal-form representative on `Y` as a form on `X`.
    #[default]
    Reinterpret,
    /// Solve the restriction system with free variables set to zero.
    Solve,
}

/// Matrix of the distinguished extension `F_D Ωᵠ(Y) → F_D Ωᵠ(X)`, a right
/// inverse of the restriction. `small` lives on `Y`, `big` on `X ⊇ Y`.
pub fn extension_matrix(small: &OmegaTruncation, big: &OmegaTruncation, rule: ExtensionRule) -> Result<RationalMatrix> {
    match rule {
        ExtensionRule::Reinterpret => small.map_matrix(big, PolyForm::clone),
        ExtensionRule::Solve => {
            let r = omega_restrict(big, small)?;
            right_inverse(&r)
        }
    }
}

/// `[ω]` for one element given by coordinates.
pub fn omega_extend(small: &OmegaTruncation, big: &OmegaTruncation, coords: &[Rational], rule: ExtensionRule) -> Result<Vec<Rational>> {
    match rule {
        ExtensionRule::Reinterpret => big.pull_coords(&small.form(coords)),
        ExtensionRule::Solve => Ok(extension_matrix(small, big, rule)?.mul_vec(coords)),
    }
}

/// Multiplication by a function `f ∈ A⁰(X)` (given in the ambient
/// variables), from `src` into `dst` on the same complex; `dst` usually has
/// a larger bound.
pub fn multiplication_matrix(src: &OmegaTruncation, dst: &OmegaTruncation, f: &PolyForm) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    let f = f.restrict_vars(src.pres.vertices.mask());
    src.map_matrix(dst, |w| f.wedge(w))
}

/// The inclusion `F_D → F_D'` for `D ≤ D'`.
pub fn embedding_matrix(src: &OmegaTruncation, dst: &OmegaTruncation) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    src.map_matrix(dst, PolyForm::clone)
}

/// Elements `p_v`, `ρ_v = p_v t_v²` with `Σ ρ_v = 1` in `A⁰(X)`.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    exponent: u32,
    p: BTreeMap<usize, PolyForm>,
    rho: BTreeMap<usize, PolyForm>,
}

impl PartitionOfUnity {
    /// Expands `(Σ t_v)^N`, `N = |V| + 1`, and files every monomial under the
    /// first vertex whose exponent is at least two.
    pub fn new(pres: &OmegaPresentation) -> Result<Self> {
        let verts: Vec<usize> = pres.vertices().vertices().collect();
        let exponent = verts.len() as u32 + 1;
        let sum = verts.iter().fold(PolyForm::zero(), |acc, &v| acc.add(&PolyForm::var(v)));
        let mut p: BTreeMap<usize, PolyForm> = verts.iter().map(|&v| (v, PolyForm::zero())).collect();
        for (t, c) in sum.pow(exponent).terms() {
            let (v, _) = t
                .mono
                .powers()
                .find(|&(_, e)| e >= 2)
                .expect("pigeonhole: some exponent is at least two");
            let rest = Monomial::var_pow(v, 2).quotient_of(&t.mono).expect("divisible");
            p.get_mut(&v).expect("vertex").add_term(Term::new(rest, DtSet::EMPTY), c.clone());
        }
        let rho: BTreeMap<usize, PolyForm> =
            p.iter().map(|(&v, pv)| (v, pv.wedge(&PolyForm::var(v).pow(2)))).collect();
        let total = rho.values().fold(PolyForm::constant(-Rational::ONE), |acc, r| acc.add(r));
        if !pres.normal_form(&total)?.is_zero() {
            return Err(Error::AssertionFailure("partition of unity does not sum to one".into()));
        }
        Ok(PartitionOfUnity { exponent, p, rho })
    }

    /// The exponent `N`; multiplying by `ρ_v` raises weights by `N`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn p(&self, v: usize) -> PolyForm {
        self.p.get(&v).cloned().unwrap_or_default()
    }

    pub fn rho(&self, v: usize) -> PolyForm {
        self.rho.get(&v).cloned().unwrap_or_default()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.rho.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn pres(x: &SimplicialComplex) -> Arc<OmegaPresentation> {
        Arc::new(OmegaPresentation::new(x.as_subcomplex(), GroebnerConfig::default()).unwrap())
    }

    fn bd2() -> SimplicialComplex {
        SimplicialComplex::from_index_lists("bd2", 3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap()
    }

    fn t(i: usize) -> PolyForm {
        PolyForm::var(i)
    }

    #[test]
    fn presentation_relations() {
        let p = pres(&bd2());
        assert_eq!(p.ring_relations().len(), 2);
        assert_eq!(p.ring_relations()[0], t(0).add(&t(1)).add(&t(2)).sub(&PolyForm::one()));
        assert_eq!(p.ring_relations()[1], t(0).wedge(&t(1)).wedge(&t(2)));
        let two = SimplicialComplex::from_index_lists("two", 2, &[]).unwrap();
        let p = pres(&two);
        assert_eq!(p.ring_relations()[1], t(0).wedge(&t(1)));
    }

    #[test]
    fn point_has_no_positive_forms() {
        let pt = SimplicialComplex::from_index_lists("pt", 1, &[&[1]]).unwrap();
        let p = pres(&pt);
        assert_eq!(p.ring_relations(), &[t(0).sub(&PolyForm::one())]);
        for d in 1..5 {
            assert_eq!(OmegaTruncation::new(p.clone(), 1, d).unwrap().dim(), 0);
        }
        let z = OmegaTruncation::new(p.clone(), 0, 3).unwrap();
        assert_eq!(z.dim(), 1);
        let z1 = OmegaTruncation::new(p, 1, 3).unwrap();
        assert!(omega_d(&z, &z1).unwrap().is_zero());
    }

    #[test]
    fn edge_truncation() {
        let e = SimplicialComplex::from_index_lists("edge", 2, &[&[1, 2]]).unwrap();
        let p = pres(&e);
        let tr = OmegaTruncation::new(p.clone(), 0, 2).unwrap();
        assert_eq!(tr.dim(), 3);
        assert!(tr.basis().iter().all(|t| t.mono.exponent(1) == 0));
        let tr1 = OmegaTruncation::new(p, 1, 2).unwrap();
        let d = omega_d(&tr, &tr1).unwrap();
        // d(t1^2) = 2 t1 dt1
        let img = tr1.form(&d.column(2));
        assert_eq!(img, t(0).wedge(&PolyForm::dvar(0)).scale(&Rational::from_int(2)));
    }

    #[test]
    fn gomez_form_vanishes() {
        let p = pres(&bd2());
        let form = t(0).pow(2).wedge(&t(1).pow(2)).wedge(&PolyForm::dvar(2));
        assert!(p.normal_form(&form).unwrap().is_zero());
        let dcube = t(0).wedge(&t(1)).wedge(&t(2)).d();
        assert!(p.normal_form(&dcube).unwrap().is_zero());
    }

    #[test]
    fn empty_complex_is_zero() {
        let p = Arc::new(OmegaPresentation::new(&Subcomplex::empty(), GroebnerConfig::default()).unwrap());
        assert_eq!(OmegaTruncation::new(p.clone(), 0, 4).unwrap().dim(), 0);
        assert!(p.normal_form(&PolyForm::one()).unwrap().is_zero());
    }

    #[test]
    fn partition_of_unity_examples() {
        let pt = SimplicialComplex::from_index_lists("pt", 1, &[&[1]]).unwrap();
        let pu = PartitionOfUnity::new(&pres(&pt)).unwrap();
        assert_eq!(pu.exponent(), 2);
        assert_eq!(pu.p(0), PolyForm::one());
        let e = SimplicialComplex::from_index_lists("edge", 2, &[&[1, 2]]).unwrap();
        let pu = PartitionOfUnity::new(&pres(&e)).unwrap();
        assert_eq!(pu.exponent(), 3);
        assert_eq!(pu.p(0), t(0).add(&t(1).scale(&Rational::from_int(3))));
        assert_eq!(pu.p(1), t(0).scale(&Rational::from_int(3)).add(&t(1)));
        let two = SimplicialComplex::from_index_lists("two", 2, &[]).unwrap();
        assert!(PartitionOfUnity::new(&pres(&two)).is_ok());
    }

    #[test]
    fn restriction_and_extension_on_boundary_triangle() {
        let x = bd2();
        let px = pres(&x);
        let edge = Subcomplex::closure([x.simplex(&["1", "2"]).unwrap()]);
        let py = Arc::new(OmegaPresentation::new(&edge, GroebnerConfig::default()).unwrap());
        for q in 0..2 {
            let big = OmegaTruncation::new(px.clone(), q, 3).unwrap();
            let small = OmegaTruncation::new(py.clone(), q, 3).unwrap();
            let r = omega_restrict(&big, &small).unwrap();
            for rule in [ExtensionRule::Reinterpret, ExtensionRule::Solve] {
                let e = extension_matrix(&small, &big, rule).unwrap();
                assert_eq!(r.mul(&e), RationalMatrix::identity(small.dim()));
            }
        }
        let small1 = OmegaTruncation::new(py, 1, 1).unwrap();
        let big1 = OmegaTruncation::new(px, 1, 1).unwrap();
        let dt1 = small1.coords(&PolyForm::dvar(0)).unwrap();
        let lifted = omega_extend(&small1, &big1, &dt1, ExtensionRule::Solve).unwrap();
        assert_eq!(omega_restrict(&big1, &small1).unwrap().mul_vec(&lifted), dt1);
    }
}
