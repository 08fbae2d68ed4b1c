//! Polynomial differential forms over ℚ: monomials, exterior terms, the
//! Kähler differential, substitutions, and Gröbner normal forms.

mod form;
mod groebner;
mod monomial;

pub use form::{PolyForm, Substitution};
pub use groebner::{groebner, groebner_extending, GroebnerBasis, GroebnerConfig, TermOrder};
pub use monomial::{DtSet, Monomial, Term};

use crate::simplicial::combinations;

/// Monomials of degree at most `max_degree` in the given variables.
pub fn monomials_up_to(vars: &[usize], max_degree: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, &v) in vars.iter().enumerate().skip(*start) {
                let mm = m.mul(&Monomial::var(v));
                out.push(mm.clone());
                next.push((mm, k));
            }
        }
        frontier = next;
    }
    out
}

/// All terms of form degree `q` and weight at most `max_weight` in the given
/// variables, ordered by weight, then by `dt` index list, then by the
/// monomial's variable list.
pub fn weight_basis(vars: &[usize], q: usize, max_weight: usize) -> Vec<Term> {
    if q > max_weight || q > vars.len() {
        return Vec::new();
    }
    let monos = monomials_up_to(vars, max_weight - q);
    let mut out: Vec<(usize, Vec<usize>, Vec<usize>, Term)> = Vec::new();
    for s in combinations(vars, q) {
        let dt = DtSet::from_vertices(s.iter().copied());
        for m in &monos {
            let t = Term::new(m.clone(), dt);
            out.push((t.weight(), s.clone(), m.variable_list(), t));
        }
    }
    out.sort_by(|a, b| (a.0, &a.1, &a.2).cmp(&(b.0, &b.1, &b.2)));
    out.into_iter().map(|x| x.3).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_basis_examples() {
        let b = weight_basis(&[0], 0, 2);
        assert_eq!(b.len(), 3);
        assert_eq!(b[2].mono, Monomial::var_pow(0, 2));
        let b = weight_basis(&[0, 1], 1, 1);
        assert_eq!(b.iter().map(|t| t.dt).collect::<Vec<_>>(), vec![DtSet::single(0), DtSet::single(1)]);
        let b = weight_basis(&[0, 1], 1, 2);
        let shown: Vec<String> = b.iter().map(|t| format!("{t:?}")).collect();
        assert_eq!(shown, vec!["dt1", "dt2", "t1*dt1", "t2*dt1", "t1*dt2", "t2*dt2"]);
    }
}
