//! Sullivan's simplicial polynomial forms `A•(Y)`: compatible families of
//! polynomial forms on the simplices of `Y`.
//!
//! A form on a simplex `a` is written in reduced coordinates: the largest
//! vertex `m` of `a` is eliminated by `t_m = 1 − Σ t_v` and `dt_m = −Σ dt_v`
//! over the other vertices of `a`. A family is stored by its members on the
//! maximal simplices; it is compatible when any two members restrict to the
//! same form on the intersection of their simplices. Since every simplex
//! lies in some maximal one, pairwise agreement of maximal members is the
//! whole compatibility condition.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{echelon, Echelon, Rational, RationalMatrix};
use crate::kaehler::OmegaTruncation;
use crate::polyalg::{weight_basis, PolyForm, Substitution, Term};
use crate::simplicial::{Simplex, Subcomplex};

/// `F_D Aᵠ(Δ_a)` for one simplex, in reduced coordinates.
#[derive(Clone, Debug)]
pub struct SimplexFormSpace {
    simplex: Simplex,
    q: usize,
    bound: usize,
    substitution: Substitution,
    basis: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl SimplexFormSpace {
    pub fn new(simplex: Simplex, q: usize, bound: usize) -> Self {
        let m = simplex.max_vertex().expect("non-empty simplex");
        let free: Vec<usize> = simplex.without(m).vertices().collect();
        let sum = free.iter().fold(PolyForm::zero(), |acc, &v| acc.add(&PolyForm::var(v)));
        let substitution = Substitution::new().set_with_differential(m, PolyForm::one().sub(&sum));
        let basis = weight_basis(&free, q, bound);
        let index = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        SimplexFormSpace { simplex, q, bound, substitution, basis, index }
    }

    pub fn simplex(&self) -> Simplex {
        self.simplex
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

    /// Restricts a form in the ambient variables to the simplex and
    /// eliminates its largest vertex.
    pub fn pull(&self, f: &PolyForm) -> PolyForm {
        f.restrict_vars(self.simplex.mask()).substitute(&self.substitution)
    }

    /// Coordinates of a reduced form.
    pub fn coords(&self, reduced: &PolyForm) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::ZERO; self.dim()];
        for (t, c) in reduced.terms() {
            match self.index.get(t) {
                Some(&i) => v[i] = c.clone(),
                None if t.form_degree() != self.q || t.support() & !self.simplex.mask() != 0 => {
                    return Err(Error::AssertionFailure(format!("{t:?} is not a reduced {}-form on {:?}", self.q, self.simplex)))
                }
                None => return Err(Error::WeightOverflow { bound: self.bound }),
            }
        }
        Ok(v)
    }

    pub fn pull_coords(&self, f: &PolyForm) -> Result<Vec<Rational>> {
        self.coords(&self.pull(f))
    }

    pub fn form(&self, coords: &[Rational]) -> PolyForm {
        PolyForm::from_terms(self.basis.iter().cloned().zip(coords.iter().cloned()))
    }
}

/// Matrix of the face restriction from `a` to `b ⊆ a`.
pub fn simplex_restrict(a: &SimplexFormSpace, b: &SimplexFormSpace) -> Result<RationalMatrix> {
    if !b.simplex.is_subset_of(a.simplex) {
        return Err(Error::AssertionFailure("restriction to a non-face".into()));
    }
    let columns = a.basis.iter().map(|t| b.pull_coords(&PolyForm::term(t.clone(), Rational::ONE))).collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(b.dim(), &columns))
}

/// `F_D Aᵠ(Y)` as the kernel of the face-agreement constraints on the
/// direct sum over maximal simplices.
#[derive(Debug)]
pub struct ATruncation {
    complex: Subcomplex,
    q: usize,
    bound: usize,
    spaces: Vec<SimplexFormSpace>,
    offsets: Vec<usize>,
    ambient_dim: usize,
    constraints: RationalMatrix,
    echelon: Echelon,
    free: Vec<usize>,
    kernel: Vec<Vec<Rational>>,
}

impl ATruncation {
    pub fn new(complex: &Subcomplex, q: usize, bound: usize) -> Result<Self> {
        let maximal = complex.maximal_simplices();
        let spaces: Vec<SimplexFormSpace> = maximal.iter().map(|&a| SimplexFormSpace::new(a, q, bound)).collect();
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut ambient_dim = 0;
        for s in &spaces {
            offsets.push(ambient_dim);
            ambient_dim += s.dim();
        }
        let mut constraints = RationalMatrix::zeros(0, ambient_dim);
        for i in 0..spaces.len() {
            for j in i + 1..spaces.len() {
                let b = maximal[i].intersection(maximal[j]);
                if b.is_empty() {
                    continue;
                }
                let sb = SimplexFormSpace::new(b, q, bound);
                if sb.dim() == 0 {
                    continue;
                }
                let mut block = RationalMatrix::zeros(sb.dim(), ambient_dim);
                block.add_block(0, offsets[i], &simplex_restrict(&spaces[i], &sb)?);
                block.add_block(0, offsets[j], &simplex_restrict(&spaces[j], &sb)?.scale(&-Rational::ONE));
                constraints = constraints.vstack(&block);
            }
        }
        let echelon = echelon(&constraints);
        let free = echelon.free_columns();
        let kernel = echelon.kernel_basis();
        Ok(ATruncation { complex: complex.clone(), q, bound, spaces, offsets, ambient_dim, constraints, echelon, free, kernel })
    }

    pub fn complex(&self) -> &Subcomplex {
        &self.complex
    }

    pub fn form_degree(&self) -> usize {
        self.q
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn spaces(&self) -> &[SimplexFormSpace] {
        &self.spaces
    }

    /// The constraint matrix whose kernel is `F_D Aᵠ(Y)`.
    pub fn constraints(&self) -> &RationalMatrix {
        &self.constraints
    }

    pub fn constraint_rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Ambient coordinates of the `i`-th basis family.
    pub fn basis_ambient(&self, i: usize) -> &[Rational] {
        &self.kernel[i]
    }

    /// Ambient coordinates of the family with the given coordinates.
    pub fn ambient(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Rational::ZERO; self.ambient_dim];
        for (k, c) in self.kernel.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(k) {
                if !x.is_zero() {
                    *o += &(x * c);
                }
            }
        }
        out
    }

    /// Coordinates of a family given in ambient coordinates; fails when the
    /// family is not compatible.
    pub fn family_coords(&self, ambient: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(ambient.len(), self.ambient_dim);
        if self.constraints.mul_vec(ambient).iter().any(|x| !x.is_zero()) {
            return Err(Error::CompatibilityViolation(format!("{:?}", self.complex)));
        }
        // the kernel basis vector of a free column is 1 there and 0 at the other free columns
        Ok(self.free.iter().map(|&j| ambient[j].clone()).collect())
    }

    /// The member forms on the maximal simplices.
    pub fn family_forms(&self, coords: &[Rational]) -> Vec<PolyForm> {
        let amb = self.ambient(coords);
        self.spaces
            .iter()
            .zip(&self.offsets)
            .map(|(s, &o)| s.form(&amb[o..o + s.dim()]))
            .collect()
    }

    /// Ambient coordinates of a family of forms, one per maximal simplex,
    /// each restricted to its simplex and reduced first.
    pub fn ambient_from_forms(&self, forms: &[PolyForm]) -> Result<Vec<Rational>> {
        assert_eq!(forms.len(), self.spaces.len());
        let mut out = Vec::with_capacity(self.ambient_dim);
        for (s, f) in self.spaces.iter().zip(forms) {
            out.extend(s.pull_coords(f)?);
        }
        Ok(out)
    }

    /// Coordinates of the family obtained by restricting one global form to
    /// every simplex.
    pub fn global_coords(&self, f: &PolyForm) -> Result<Vec<Rational>> {
        let forms = vec![f.clone(); self.spaces.len()];
        self.family_coords(&self.ambient_from_forms(&forms)?)
    }

    fn map_matrix(&self, target: &ATruncation, f: impl Fn(Simplex, &PolyForm) -> PolyForm) -> Result<RationalMatrix> {
        // each maximal simplex of the target reads from the first source simplex containing it
        let sources: Vec<usize> = target
            .spaces
            .iter()
            .map(|t| {
                self.spaces
                    .iter()
                    .position(|s| t.simplex.is_subset_of(s.simplex))
                    .ok_or_else(|| Error::AssertionFailure("target simplex outside the source complex".into()))
            })
            .collect::<Result<_>>()?;
        let columns = (0..self.dim())
            .map(|j| {
                let forms = self.family_forms(&unit(self.dim(), j));
                let images: Vec<PolyForm> =
                    target.spaces.iter().zip(&sources).map(|(t, &i)| f(t.simplex, &forms[i])).collect();
                target.family_coords(&target.ambient_from_forms(&images)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(target.dim(), &columns))
    }
}

pub(crate) fn unit(n: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::ZERO; n];
    v[j] = Rational::ONE;
    v
}

fn check_same_complex(a: &ATruncation, b: &ATruncation) -> Result<()> {
    if a.complex != b.complex {
        return Err(Error::AssertionFailure("truncations live on different complexes".into()));
    }
    Ok(())
}

/// Matrix of `d: F_D Aᵠ(Y) → F_D Aᵠ⁺¹(Y)`.
pub fn a_d(src: &ATruncation, dst: &ATruncation) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    src.map_matrix(dst, |_, f| f.d())
}

/// Restriction `F_D Aᵠ(X) → F_D Aᵠ(Y)` for `Y ⊆ X`.
pub fn a_restrict(src: &ATruncation, dst: &ATruncation) -> Result<RationalMatrix> {
    if !dst.complex.is_subcomplex_of(&src.complex) {
        return Err(Error::AssertionFailure("restriction target is not a subcomplex".into()));
    }
    src.map_matrix(dst, |_, f| f.clone())
}

/// A right inverse of the restriction `F_D Aᵠ(X) → F_D Aᵠ(Y)`, free
/// variables set to zero.
pub fn a_extend(small: &ATruncation, big: &ATruncation) -> Result<RationalMatrix> {
    crate::exactla::right_inverse(&a_restrict(big, small)?)
}

/// Multiplication by a function given in the ambient variables (such as a
/// vertex coordinate `t_v`), from `src` into `dst` on the same complex.
pub fn a_multiply(src: &ATruncation, dst: &ATruncation, f: &PolyForm) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    src.map_matrix(dst, |_, w| f.wedge(w))
}

/// The inclusion `F_D → F_D'` for `D ≤ D'`.
pub fn a_embed(src: &ATruncation, dst: &ATruncation) -> Result<RationalMatrix> {
    check_same_complex(src, dst)?;
    src.map_matrix(dst, |_, w| w.clone())
}

/// Memberwise product of two families, as a family in `dst`.
pub fn a_wedge(
    left: &ATruncation,
    x: &[Rational],
    right: &ATruncation,
    y: &[Rational],
    dst: &ATruncation,
) -> Result<Vec<Rational>> {
    check_same_complex(left, right)?;
    check_same_complex(left, dst)?;
    let products: Vec<PolyForm> =
        left.family_forms(x).iter().zip(right.family_forms(y)).map(|(a, b)| a.wedge(&b)).collect();
    dst.family_coords(&dst.ambient_from_forms(&products)?)
}

/// The comparison morphism `P: F_D Ωᵠ(Y) → F_D Aᵠ(Y)`, restricting a
/// polynomial form to every simplex.
pub fn eval_p(omega: &OmegaTruncation, a: &ATruncation) -> Result<RationalMatrix> {
    if omega.complex() != a.complex() {
        return Err(Error::AssertionFailure("P between different complexes".into()));
    }
    let columns = (0..omega.dim()).map(|j| a.global_coords(&omega.basis_form(j))).collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(a.dim(), &columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn t(i: usize) -> PolyForm {
        PolyForm::var(i)
    }

    #[test]
    fn reduced_coordinates_on_an_edge() {
        let s = SimplexFormSpace::new(Simplex::from_vertices([0, 1]), 0, 2);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.pull(&t(1)), PolyForm::one().sub(&t(0)));
        assert_eq!(s.pull(&PolyForm::dvar(1)), PolyForm::dvar(0).neg());
        assert_eq!(s.pull(&t(2)), PolyForm::zero());
    }

    #[test]
    fn vertex_space() {
        let s = SimplexFormSpace::new(Simplex::vertex(3), 0, 4);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.pull(&t(3).pow(3)), PolyForm::one());
        assert_eq!(SimplexFormSpace::new(Simplex::vertex(3), 1, 4).dim(), 0);
    }

    #[test]
    fn boundary_triangle_dimensions() {
        let x = SimplicialComplex::from_index_lists("bd2", 3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        // three edges, each 0-form of weight <= 1 has dim 2; agreement at three vertices
        let a0 = ATruncation::new(x.as_subcomplex(), 0, 1).unwrap();
        assert_eq!(a0.ambient_dim(), 6);
        assert_eq!(a0.dim(), 3);
        let a1 = ATruncation::new(x.as_subcomplex(), 1, 1).unwrap();
        assert_eq!(a1.dim(), 3);
        let d = a_d(&a0, &a1).unwrap();
        assert_eq!(crate::exactla::rank(&d), 2);
    }

    #[test]
    fn incompatible_family_is_rejected() {
        let x = SimplicialComplex::from_index_lists("two", 3, &[&[1, 2], &[2, 3]]).unwrap();
        let a = ATruncation::new(x.as_subcomplex(), 0, 1).unwrap();
        let forms = vec![PolyForm::one(), PolyForm::zero()];
        let amb = a.ambient_from_forms(&forms).unwrap();
        assert!(matches!(a.family_coords(&amb), Err(Error::CompatibilityViolation(_))));
        let ok = a.ambient_from_forms(&[t(1), t(1)]).unwrap();
        let c = a.family_coords(&ok).unwrap();
        assert_eq!(a.ambient(&c), ok);
    }
}
