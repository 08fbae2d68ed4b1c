//! Algebraic invariants checked on random forms over the built-in complexes.

use derham::exactla::Rational;
use derham::kaehler::{extension_matrix, restriction_matrix, ExtensionRule};
use derham::polyalg::{DtSet, Monomial, PolyForm, Term};
use derham::simplicial::{permutation_sign, SimplicialComplex, VertexTuple};
use derham::sullivan::{a_d, a_extend, a_restrict};
use derham::{corpus, Engine};
use proptest::prelude::*;

type RawTerm = (Vec<usize>, Vec<usize>, i64);

fn raw_form(n: usize, q: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let q = q.min(n);
    let term = (
        prop::collection::vec(0..n, 0..=3),
        prop::sample::subsequence((0..n).collect::<Vec<_>>(), q),
        -3i64..=3,
    );
    prop::collection::vec(term, 1..5)
}

fn build(raw: &[RawTerm]) -> PolyForm {
    PolyForm::from_terms(raw.iter().map(|(vars, dts, c)| {
        let m = vars.iter().fold(Monomial::one(), |m, &v| m.mul(&Monomial::var(v)));
        (Term::new(m, DtSet::from_vertices(dts.iter().copied())), Rational::from_int(*c))
    }))
}

/// A built-in complex together with two random forms of degrees `q` and `r`.
fn case() -> impl Strategy<Value = (usize, usize, usize, Vec<RawTerm>, Vec<RawTerm>)> {
    (0..corpus::NAMES.len(), 0usize..=2, 0usize..=1).prop_flat_map(|(k, q, r)| {
        let n = corpus::builtin(corpus::NAMES[k]).unwrap().n_vertices();
        (Just(k), Just(q), Just(r), raw_form(n, q), raw_form(n, r))
    })
}

fn engine(k: usize) -> Engine {
    Engine::new(corpus::builtin(corpus::NAMES[k]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_a_linear_projection((k, _q, _r, f, g) in case(), c in -3i64..=3) {
        let e = engine(k);
        let pres = e.presentation(e.whole()).unwrap();
        let (f, g) = (build(&f), build(&g));
        let nf = pres.normal_form(&f).unwrap();
        prop_assert_eq!(pres.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(nf.weight() <= f.weight());
        let c = Rational::from_int(c);
        let mut sum = f.clone();
        sum.add_scaled(&g, &c);
        let mut expected = nf;
        expected.add_scaled(&pres.normal_form(&g).unwrap(), &c);
        prop_assert_eq!(pres.normal_form(&sum).unwrap(), expected);
    }

    #[test]
    fn relations_form_a_dg_ideal((k, _q, _r, f, g) in case()) {
        let e = engine(k);
        let pres = e.presentation(e.whole()).unwrap();
        let (f, g) = (build(&f), build(&g));
        let (nf, ng) = (pres.normal_form(&f).unwrap(), pres.normal_form(&g).unwrap());
        prop_assert_eq!(pres.normal_form(&f.wedge(&g)).unwrap(), pres.normal_form(&nf.wedge(&ng)).unwrap());
        prop_assert_eq!(pres.normal_form(&f.d()).unwrap(), pres.normal_form(&nf.d()).unwrap());
    }

    #[test]
    fn exterior_derivative((_k, q, _r, f, g) in case()) {
        let (f, g) = (build(&f), build(&g));
        prop_assert!(f.d().d().is_zero());
        let sign = if q % 2 == 0 { Rational::ONE } else { Rational::from_int(-1) };
        let mut rhs = f.d().wedge(&g);
        rhs.add_scaled(&f.wedge(&g.d()), &sign);
        prop_assert_eq!(f.wedge(&g).d(), rhs);
    }

    #[test]
    fn graded_commutativity((_k, q, r, f, g) in case()) {
        let (f, g) = (build(&f), build(&g));
        let sign = if q * r % 2 == 0 { Rational::ONE } else { Rational::from_int(-1) };
        prop_assert_eq!(f.wedge(&g), g.wedge(&f).scale(&sign));
    }

    /// Relations vanish on every simplex, and `d` commutes with restriction.
    #[test]
    fn sullivan_side_sees_the_quotient((k, q, _r, f, _g) in case()) {
        let e = engine(k);
        let pres = e.presentation(e.whole()).unwrap();
        let f = build(&f);
        let d = f.weight();
        let a = e.sullivan(e.whole(), q, d).unwrap();
        let coords = a.global_coords(&f).unwrap();
        prop_assert_eq!(&coords, &a.global_coords(&pres.normal_form(&f).unwrap()).unwrap());
        let a1 = e.sullivan(e.whole(), q + 1, d).unwrap();
        prop_assert_eq!(a_d(&a, &a1).unwrap().mul_vec(&coords), a1.global_coords(&f.d()).unwrap());
    }

    #[test]
    fn extension_then_restriction_is_identity(k in 0..corpus::NAMES.len(), v in 0usize..6, q in 0usize..=2, d in 0usize..=4) {
        let e = engine(k);
        let x = e.complex();
        let v = v % x.n_vertices();
        let star = x.as_subcomplex().star(&VertexTuple::new(vec![v]));
        let (small, big) = (e.omega(&star, q, d).unwrap(), e.omega(e.whole(), q, d).unwrap());
        let r = restriction_matrix(&big, &small).unwrap();
        for rule in [ExtensionRule::Reinterpret, ExtensionRule::Solve] {
            let ext = extension_matrix(&small, &big, rule).unwrap();
            prop_assert_eq!(r.mul(&ext), derham::exactla::RationalMatrix::identity(small.dim()));
        }
        let (small, big) = (e.sullivan(&star, q, d).unwrap(), e.sullivan(e.whole(), q, d).unwrap());
        let r = a_restrict(&big, &small).unwrap();
        prop_assert_eq!(r.mul(&a_extend(&small, &big).unwrap()), derham::exactla::RationalMatrix::identity(small.dim()));
    }

    #[test]
    fn sorting_sign_is_the_permutation_sign(entries in prop::sample::subsequence((0..8usize).collect::<Vec<_>>(), 0..6).prop_shuffle()) {
        let (sign, sorted) = VertexTuple::new(entries.clone()).sorted_with_sign().unwrap();
        let mut expected = entries.clone();
        expected.sort();
        prop_assert_eq!(sorted.entries(), &expected[..]);
        let perm: Vec<usize> = entries.iter().map(|x| expected.iter().position(|y| y == x).unwrap()).collect();
        prop_assert_eq!(sign, permutation_sign(&perm));
    }

    #[test]
    fn repeated_entries_have_no_sorted_form(mut entries in prop::collection::vec(0..4usize, 2..5), i in 0usize..4) {
        let i = i % entries.len();
        let j = (i + 1) % entries.len();
        entries[j] = entries[i];
        prop_assert!(VertexTuple::new(entries).sorted_with_sign().is_none());
    }

    #[test]
    fn complexes_survive_a_json_round_trip(facets in prop::collection::vec(prop::sample::subsequence((0..6usize).collect::<Vec<_>>(), 1..4), 1..5)) {
        let used: usize = facets.iter().flatten().max().unwrap() + 1;
        let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.iter().map(|v| v + 1).collect()).collect();
        let lists: Vec<&[usize]> = facets.iter().map(Vec::as_slice).collect();
        let x = SimplicialComplex::from_index_lists("random", used, &lists).unwrap();
        let y = SimplicialComplex::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(x.simplices(), y.simplices());
        prop_assert_eq!(x.maximal_simplices(), y.maximal_simplices());
        for s in x.simplices() {
            for f in s.faces() {
                prop_assert!(x.simplices().contains(&f));
            }
        }
    }
}
