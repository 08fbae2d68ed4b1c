//! Buchberger's algorithm for ideals of `ℚ[t]` and for submodules of the free
//! module `⊕_S ℚ[t]·dt_S` over a fixed set of positions.
//!
//! Ideals are the special case where every element sits at the empty
//! position. The term order is graded reverse lexicographic on monomials
//! with term-over-position tie breaking (see [`Term`]); it is degree
//! compatible, so normal forms never raise the weight.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::form::PolyForm;
use super::monomial::{DtSet, Monomial, Term};
use crate::error::{Error, Result};
use crate::exactla::Rational;

/// The only supported order; kept as a descriptor on every basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum TermOrder {
    #[default]
    GrevlexTermOverPosition,
}

#[derive(Copy, Clone, Debug)]
pub struct GroebnerConfig {
    /// Abort after this many S-pairs have been reduced.
    pub pair_limit: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        Self { pair_limit: 2_000_000 }
    }
}

/// A reduced Gröbner basis. Elements are monic.
#[derive(Clone, Debug, Default)]
pub struct GroebnerBasis {
    elements: Vec<PolyForm>,
    by_position: HashMap<DtSet, Vec<usize>>,
    order: TermOrder,
}

fn leading(f: &PolyForm) -> &Term {
    f.leading().expect("basis elements are non-zero").0
}

fn monic(f: PolyForm) -> PolyForm {
    let lc = f.leading().expect("non-zero").1.clone();
    if lc.is_one() {
        f
    } else {
        f.scale(&lc.recip())
    }
}

fn single_position(f: &PolyForm) -> bool {
    let mut it = f.terms().map(|(t, _)| t.dt);
    match it.next() {
        Some(p) => it.all(|q| q == p),
        None => true,
    }
}

impl GroebnerBasis {
    fn from_elements(elements: Vec<PolyForm>) -> Self {
        let mut gb = GroebnerBasis { elements: Vec::new(), by_position: HashMap::new(), order: TermOrder::default() };
        for e in elements {
            gb.push(e);
        }
        gb
    }

    fn push(&mut self, f: PolyForm) -> usize {
        let i = self.elements.len();
        self.by_position.entry(leading(&f).dt).or_default().push(i);
        self.elements.push(f);
        i
    }

    pub fn elements(&self) -> &[PolyForm] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn leading_terms(&self) -> Vec<Term> {
        self.elements.iter().map(|f| leading(f).clone()).collect()
    }

    fn find_divisor(&self, t: &Term, skip: Option<usize>) -> Option<(usize, Monomial)> {
        let idx = self.by_position.get(&t.dt)?;
        idx.iter().filter(|&&i| Some(i) != skip).find_map(|&i| {
            let lt = leading(&self.elements[i]);
            lt.mono.quotient_of(&t.mono).map(|q| (i, q))
        })
    }

    /// True when no leading term divides `t`.
    pub fn is_standard(&self, t: &Term) -> bool {
        self.find_divisor(t, None).is_none()
    }

    /// The fully reduced normal form.
    pub fn normal_form(&self, f: &PolyForm) -> PolyForm {
        self.reduce(f, None)
    }

    pub fn contains(&self, f: &PolyForm) -> bool {
        self.normal_form(f).is_zero()
    }

    fn reduce(&self, f: &PolyForm, skip: Option<usize>) -> PolyForm {
        let mut work: BTreeMap<Term, Rational> = f.clone().into_terms();
        let mut rest = PolyForm::zero();
        while let Some((t, c)) = work.pop_last() {
            match self.find_divisor(&t, skip) {
                None => rest.add_term(t, c),
                Some((i, q)) => {
                    // the leading term cancels exactly since elements are monic
                    for (s, a) in self.elements[i].terms().rev().skip(1) {
                        let key = Term::new(s.mono.mul(&q), s.dt);
                        let delta = a * &c;
                        match work.entry(key) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(-delta);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                *e.get_mut() -= &delta;
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        rest
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    lcm: Term,
    i: usize,
    j: usize,
}

/// Gröbner basis of the submodule generated by `generators`.
pub fn groebner(generators: Vec<PolyForm>, cfg: &GroebnerConfig) -> Result<GroebnerBasis> {
    groebner_extending(Vec::new(), generators, cfg)
}

/// Gröbner basis of the submodule generated by `known ∪ extra`, where
/// `known` is already a Gröbner basis of the submodule it generates (so
/// S-pairs inside it are skipped).
pub fn groebner_extending(known: Vec<PolyForm>, extra: Vec<PolyForm>, cfg: &GroebnerConfig) -> Result<GroebnerBasis> {
    let mut gb = GroebnerBasis::from_elements(known.into_iter().filter(|f| !f.is_zero()).map(monic).collect());
    let mut queue: BTreeSet<Pair> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |gb: &mut GroebnerBasis, queue: &mut BTreeSet<Pair>, pending: &mut HashSet<(usize, usize)>, h: PolyForm| {
        let h = monic(h);
        let lt = leading(&h).clone();
        let k = gb.push(h);
        for &i in &gb.by_position[&lt.dt] {
            if i == k {
                continue;
            }
            let li = leading(&gb.elements[i]);
            let lcm = Term::new(li.mono.lcm(&lt.mono), lt.dt);
            queue.insert(Pair { lcm, i, j: k });
            pending.insert((i, k));
        }
    };

    for f in extra {
        let h = gb.normal_form(&f);
        if !h.is_zero() {
            add(&mut gb, &mut queue, &mut pending, h);
        }
    }

    let mut reduced = 0usize;
    while let Some(pair) = queue.pop_first() {
        pending.remove(&(pair.i, pair.j));
        let (fi, fj) = (&gb.elements[pair.i], &gb.elements[pair.j]);
        let (li, lj) = (leading(fi), leading(fj));
        if li.mono.is_coprime(&lj.mono) && single_position(fi) && single_position(fj) {
            continue;
        }
        let chain = gb.by_position[&pair.lcm.dt].iter().any(|&k| {
            k != pair.i
                && k != pair.j
                && leading(&gb.elements[k]).mono.divides(&pair.lcm.mono)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }
        reduced += 1;
        if reduced > cfg.pair_limit {
            return Err(Error::PairLimit(cfg.pair_limit));
        }
        let qi = li.mono.quotient_of(&pair.lcm.mono).expect("lcm");
        let qj = lj.mono.quotient_of(&pair.lcm.mono).expect("lcm");
        let s = fi.mul_monomial(&qi).sub(&fj.mul_monomial(&qj));
        let h = gb.normal_form(&s);
        if !h.is_zero() {
            add(&mut gb, &mut queue, &mut pending, h);
        }
    }
    Ok(interreduce(gb))
}

fn interreduce(gb: GroebnerBasis) -> GroebnerBasis {
    let mut elements = gb.elements;
    elements.sort_by(|a, b| leading(a).cmp(leading(b)));
    // drop elements whose leading term is divisible by another leading term
    let mut minimal: Vec<PolyForm> = Vec::new();
    for f in elements {
        let lt = leading(&f);
        let divisible = minimal.iter().any(|g| {
            let lg = leading(g);
            lg.dt == lt.dt && lg.mono.divides(&lt.mono)
        });
        if !divisible {
            minimal.push(f);
        }
    }
    let tmp = GroebnerBasis::from_elements(minimal);
    let reduced: Vec<PolyForm> = (0..tmp.elements.len())
        .map(|i| {
            let f = &tmp.elements[i];
            let (lt, lc) = f.leading().expect("non-zero");
            let mut tail = f.clone();
            tail.add_term(lt.clone(), -lc.clone());
            let mut g = tmp.reduce(&tail, Some(i));
            g.add_term(lt.clone(), lc.clone());
            g
        })
        .collect();
    GroebnerBasis::from_elements(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> PolyForm {
        PolyForm::var(i)
    }
    fn dt(i: usize) -> PolyForm {
        PolyForm::dvar(i)
    }
    fn one() -> PolyForm {
        PolyForm::one()
    }

    #[test]
    fn linear_relation_eliminates_the_larger_variable() {
        let gb = groebner(vec![t(0).add(&t(1)).sub(&one())], &GroebnerConfig::default()).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb.normal_form(&t(1)), one().sub(&t(0)));
    }

    #[test]
    fn boundary_triangle_ring() {
        let lin = t(0).add(&t(1)).add(&t(2)).sub(&one());
        let cube = t(0).wedge(&t(1)).wedge(&t(2));
        let gb = groebner(vec![lin, cube.clone()], &GroebnerConfig::default()).unwrap();
        assert!(gb.contains(&cube));
        let lhs = t(0).pow(2).wedge(&t(1).pow(2)).wedge(&t(2));
        let rhs = t(0).pow(2).wedge(&t(1).pow(2)).wedge(&one().sub(&t(0)).sub(&t(1)));
        assert_eq!(gb.normal_form(&lhs), gb.normal_form(&rhs));
        // t1^2 t2^2 t3 is a multiple of t1 t2 t3
        assert!(gb.contains(&lhs));
        assert!(!gb.contains(&t(0).pow(2).wedge(&t(1).pow(2))));
    }

    #[test]
    fn module_single_generator() {
        let gen = dt(0).add(&dt(1));
        let gb = groebner(vec![gen.clone()], &GroebnerConfig::default()).unwrap();
        assert!(gb.contains(&gen));
        let nf = gb.normal_form(&t(0).wedge(&dt(1)));
        assert_eq!(nf, t(0).wedge(&dt(0)).neg());
    }
}
