use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::monomial::{DtSet, Monomial, Term};
use crate::exactla::Rational;

/// A ℚ-linear combination of terms `t^α dt_S`: an element of the free
/// graded-commutative algebra `ℚ[t_v] ⊗ Λ(dt_v)`.
///
/// Terms are kept in the term-over-position order, so the leading term is
/// the last entry.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyForm {
    terms: BTreeMap<Term, Rational>,
}

impl PolyForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Term::one(), c)
    }

    pub fn term(t: Term, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(t, c);
        f
    }

    /// `t_i`.
    pub fn var(i: usize) -> Self {
        Self::term(Term::new(Monomial::var(i), DtSet::EMPTY), Rational::ONE)
    }

    /// `dt_i`.
    pub fn dvar(i: usize) -> Self {
        Self::term(Term::new(Monomial::one(), DtSet::single(i)), Rational::ONE)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Term::new(m, DtSet::EMPTY), Rational::ONE)
    }

    pub fn from_terms<I: IntoIterator<Item = (Term, Rational)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (t, c) in terms {
            f.add_term(t, c);
        }
        f
    }

    pub fn add_term(&mut self, t: Term, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Term, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Term, Rational> {
        self.terms
    }

    pub fn coefficient(&self, t: &Term) -> Rational {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Term, &Rational)> {
        self.terms.last_key_value()
    }

    /// Largest term weight; zero for the zero form.
    pub fn weight(&self) -> usize {
        self.terms.keys().map(Term::weight).max().unwrap_or(0)
    }

    /// The common form degree, or `None` for zero or mixed forms.
    pub fn form_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Term::form_degree);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    /// Splits into homogeneous components by form degree.
    pub fn by_form_degree(&self) -> BTreeMap<usize, PolyForm> {
        let mut out: BTreeMap<usize, PolyForm> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.form_degree()).or_default().terms.insert(t.clone(), c.clone());
        }
        out
    }

    /// Bitmask of the variables that occur as `t_v` or `dt_v`.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0, |m, t| m | t.support())
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut f = self.clone();
        f.add_assign(other);
        f
    }

    pub fn add_assign(&mut self, other: &PolyForm) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        let mut f = self.clone();
        f.add_scaled(other, &-Rational::ONE);
        f
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &PolyForm, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (t, a) in &other.terms {
            self.add_term(t.clone(), a * c);
        }
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&-Rational::ONE)
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero();
        }
        PolyForm { terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect() }
    }

    /// Multiplies by a monomial (no `dt` part; no signs arise).
    pub fn mul_monomial(&self, m: &Monomial) -> PolyForm {
        PolyForm { terms: self.terms.iter().map(|(t, a)| (Term::new(t.mono.mul(m), t.dt), a.clone())).collect() }
    }

    /// Graded-commutative product `self ∧ other`.
    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let Some((sign, dt)) = s.dt.wedge(t.dt) else {
                    continue;
                };
                let c = a * b;
                let c = if sign < 0 { -c } else { c };
                out.add_term(Term::new(s.mono.mul(&t.mono), dt), c);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> PolyForm {
        let mut acc = PolyForm::one();
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }

    /// The Kähler differential with `d t_v = dt_v`.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero();
        for (t, c) in &self.terms {
            for (v, e) in t.mono.powers() {
                if t.dt.contains(v) {
                    continue;
                }
                let Some((sign, dt)) = DtSet::single(v).wedge(t.dt) else { continue };
                let k = c * &Rational::from_int(e as i64 * sign);
                out.add_term(Term::new(t.mono.lower(v).expect("variable occurs"), dt), k);
            }
        }
        out
    }

    /// Keeps the terms that only involve variables in `mask`; this is the
    /// substitution `t_v ↦ 0, dt_v ↦ 0` for `v ∉ mask`.
    pub fn restrict_vars(&self, mask: u64) -> PolyForm {
        PolyForm {
            terms: self.terms.iter().filter(|(t, _)| t.support() & !mask == 0).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    /// Applies the algebra homomorphism given by `sub`.
    pub fn substitute(&self, sub: &Substitution) -> PolyForm {
        let mut powers: HashMap<(usize, u32), PolyForm> = HashMap::new();
        let mut out = PolyForm::zero();
        for (t, c) in &self.terms {
            let mut acc = PolyForm::constant(c.clone());
            for (v, e) in t.mono.powers() {
                let p = powers.entry((v, e)).or_insert_with(|| sub.t_image(v).pow(e));
                acc = acc.wedge(p);
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            for v in t.dt.vertices() {
                acc = acc.wedge(&sub.dt_image(v));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Renders with the given vertex labels (`t<label>`, `dt<label>`).
    pub fn display<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        LabelledForm { form: self, labels }
    }
}

/// A substitution `t_v ↦ f_v`, `dt_v ↦ ω_v`; unlisted variables are fixed.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    t: BTreeMap<usize, PolyForm>,
    dt: BTreeMap<usize, PolyForm>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_t(mut self, v: usize, f: PolyForm) -> Self {
        self.t.insert(v, f);
        self
    }

    pub fn set_dt(mut self, v: usize, f: PolyForm) -> Self {
        self.dt.insert(v, f);
        self
    }

    /// Sends `t_v ↦ f` and `dt_v ↦ d f`.
    pub fn set_with_differential(self, v: usize, f: PolyForm) -> Self {
        let df = f.d();
        self.set_t(v, f).set_dt(v, df)
    }

    fn t_image(&self, v: usize) -> PolyForm {
        self.t.get(&v).cloned().unwrap_or_else(|| PolyForm::var(v))
    }

    fn dt_image(&self, v: usize) -> PolyForm {
        self.dt.get(&v).cloned().unwrap_or_else(|| PolyForm::dvar(v))
    }
}

struct LabelledForm<'a> {
    form: &'a PolyForm,
    labels: &'a [String],
}

impl fmt::Display for LabelledForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        let label = |v: usize| self.labels.get(v).cloned().unwrap_or_else(|| format!("#{v}"));
        for (k, (t, c)) in self.form.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = t
                .mono
                .powers()
                .map(|(v, e)| if e == 1 { format!("t{}", label(v)) } else { format!("t{}^{}", label(v), e) })
                .collect();
            factors.extend(t.dt.vertices().map(|v| format!("dt{}", label(v))));
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(t, c)| format!("{c}*{t:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
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
    fn c(n: i64) -> PolyForm {
        PolyForm::constant(Rational::from_int(n))
    }

    #[test]
    fn ring_arithmetic() {
        let s = t(0).add(&t(1));
        let sq = s.wedge(&s);
        let expected = t(0).wedge(&t(0)).add(&t(0).wedge(&t(1)).scale(&Rational::from_int(2))).add(&t(1).wedge(&t(1)));
        assert_eq!(sq, expected);
        assert!(t(0).wedge(&PolyForm::zero()).is_zero());
        assert!(t(0).sub(&t(0)).is_zero());
        assert_eq!(t(0).sub(&t(0)).len(), 0);
    }

    #[test]
    fn wedge_examples() {
        let d12 = dt(0).wedge(&dt(1));
        assert_eq!(d12.coefficient(&Term::new(Monomial::one(), DtSet::from_vertices([0, 1]))), Rational::ONE);
        assert_eq!(dt(1).wedge(&dt(0)), d12.neg());
        assert!(dt(0).wedge(&dt(0)).is_zero());
    }

    #[test]
    fn differential_examples() {
        let t1sq = t(0).wedge(&t(0));
        assert_eq!(t1sq.d(), t(0).wedge(&dt(0)).scale(&Rational::from_int(2)));
        assert_eq!(t(0).wedge(&t(1)).d(), t(1).wedge(&dt(0)).add(&t(0).wedge(&dt(1))));
        let f = t(0).wedge(&t(1)).wedge(&t(2)).add(&t(2).pow(3)).add(&t(0).wedge(&dt(1)));
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn substitution_examples() {
        let elim = c(1).sub(&t(0)).sub(&t(1));
        let sub = Substitution::new().set_t(2, elim.clone());
        let got = t(2).pow(2).substitute(&sub);
        let expected = c(1)
            .sub(&t(0).scale(&Rational::from_int(2)))
            .sub(&t(1).scale(&Rational::from_int(2)))
            .add(&t(0).pow(2))
            .add(&t(0).wedge(&t(1)).scale(&Rational::from_int(2)))
            .add(&t(1).pow(2));
        assert_eq!(got, expected);
        let kill = Substitution::new().set_t(0, PolyForm::zero());
        assert!(t(0).wedge(&dt(1)).substitute(&kill).is_zero());
        let dsub = Substitution::new().set_dt(2, dt(0).neg().sub(&dt(1)));
        assert_eq!(dt(2).substitute(&dsub), dt(0).neg().sub(&dt(1)));
    }

    #[test]
    fn restriction_drops_foreign_variables() {
        let f = t(0).wedge(&dt(1)).add(&t(1));
        assert_eq!(f.restrict_vars(0b10), t(1));
    }

    #[test]
    fn labelled_display() {
        let labels: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
        let f = t(0).pow(2).wedge(&t(1).pow(2)).wedge(&dt(2)).sub(&c(3));
        assert_eq!(f.display(&labels).to_string(), "t1^2*t2^2*dt3 - 3");
    }
}
