use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A monomial `∏ t_v^{α_v}` in commuting variables indexed by vertex
/// position. Exponents are stored up to the last non-zero one, so equal
/// monomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u8; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v: SmallVec<[u8; 8]> = SmallVec::from_elem(0, i + 1);
        v[i] = exponent_u8(e);
        Monomial(v)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v: SmallVec<[u8; 8]> = exps.iter().map(|&e| exponent_u8(e)).collect();
        trim(&mut v);
        Monomial(v)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0) as u32
    }

    /// `(variable, exponent)` for every variable that occurs.
    pub fn powers(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as u32))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Bitmask of the variables that occur.
    pub fn support(&self) -> u64 {
        self.powers().fold(0, |m, (i, _)| m | (1u64 << i))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut v = long.0.clone();
        for (a, b) in v.iter_mut().zip(short.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut v = other.0.clone();
        for (a, b) in v.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        trim(&mut v);
        Some(Monomial(v))
    }

    /// Divides by `t_i`; `None` if `t_i` does not occur.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        if self.exponent(i) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        trim(&mut v);
        Some(Monomial(v))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v: SmallVec<[u8; 8]> = SmallVec::from_elem(0, n);
        for (i, e) in v.iter_mut().enumerate() {
            *e = (self.exponent(i).max(other.exponent(i))) as u8;
        }
        Monomial(v)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.support() & other.support() == 0
    }

    /// Multiset of variable indices in increasing order (`t_0² t_2` → `[0, 0, 2]`).
    pub fn variable_list(&self) -> Vec<usize> {
        self.powers().flat_map(|(i, e)| std::iter::repeat_n(i, e as usize)).collect()
    }
}

fn exponent_u8(e: u32) -> u8 {
    u8::try_from(e).expect("exponent overflow")
}

fn trim(v: &mut SmallVec<[u8; 8]>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Graded reverse lexicographic order in which later vertices are larger
/// variables: degrees are compared first, then the monomial with the smaller
/// exponent at the first differing (smallest) variable is larger.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers()
            .map(|(i, e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A set of `dt_v` symbols, i.e. a position in the free exterior module.
/// The order is by size, then colexicographic.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DtSet {
    len: u32,
    mask: u64,
}

impl DtSet {
    pub const EMPTY: DtSet = DtSet { len: 0, mask: 0 };

    pub fn from_mask(mask: u64) -> Self {
        DtSet { len: mask.count_ones(), mask }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        Self::from_mask(vs.into_iter().fold(0, |m, v| m | (1u64 << v)))
    }

    pub fn single(v: usize) -> Self {
        Self::from_mask(1u64 << v)
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, v: usize) -> bool {
        self.mask & (1u64 << v) != 0
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        crate::simplicial::Simplex::from_mask(self.mask).vertices()
    }

    /// `dt_S ∧ dt_T = sign · dt_{S∪T}`, or `None` when `S` and `T` meet.
    pub fn wedge(self, other: DtSet) -> Option<(i64, DtSet)> {
        if self.mask & other.mask != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut m = other.mask;
        while m != 0 {
            let t = m.trailing_zeros();
            m &= m - 1;
            // elements of self above t
            let above = if t == 63 { 0 } else { self.mask >> (t + 1) };
            inversions += above.count_ones();
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, DtSet::from_mask(self.mask | other.mask)))
    }
}

impl fmt::Debug for DtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| format!("dt{}", v + 1)).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// A basis element `t^α dt_S` of the free exterior algebra.
///
/// The order is term-over-position: monomials by [`Monomial`]'s graded
/// reverse lexicographic order, ties broken by the [`DtSet`] order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub mono: Monomial,
    pub dt: DtSet,
}

impl Term {
    pub fn new(mono: Monomial, dt: DtSet) -> Self {
        Term { mono, dt }
    }

    pub fn one() -> Self {
        Term { mono: Monomial::one(), dt: DtSet::EMPTY }
    }

    /// Monomial degree plus form degree.
    pub fn weight(&self) -> usize {
        self.mono.degree() as usize + self.dt.len()
    }

    pub fn form_degree(&self) -> usize {
        self.dt.len()
    }

    pub fn support(&self) -> u64 {
        self.mono.support() | self.dt.mask()
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mono.is_one(), self.dt.is_empty()) {
            (_, true) => write!(f, "{:?}", self.mono),
            (true, false) => write!(f, "{:?}", self.dt),
            (false, false) => write!(f, "{:?}*{:?}", self.mono, self.dt),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_makes_later_vertices_larger() {
        assert!(Monomial::var(1) > Monomial::var(0));
        assert!(Monomial::var_pow(0, 2) > Monomial::var(2));
        // same degree: t1*t3 vs t2^2 (indices 0,2 vs 1,1): smaller exponent of t1 wins
        let a = Monomial::from_exponents(&[1, 0, 1]);
        let b = Monomial::from_exponents(&[0, 2]);
        assert!(b > a);
    }

    #[test]
    fn divisibility_and_quotients() {
        let a = Monomial::from_exponents(&[1, 2]);
        let b = Monomial::from_exponents(&[2, 3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), Some(Monomial::from_exponents(&[1, 1, 1])));
        assert_eq!(b.quotient_of(&a), None);
        assert_eq!(a.lcm(&Monomial::var(2)), Monomial::from_exponents(&[1, 2, 1]));
        assert_eq!(Monomial::var(3).lower(3), Some(Monomial::one()));
    }

    #[test]
    fn dt_wedge_signs() {
        let (d1, d2) = (DtSet::single(0), DtSet::single(1));
        assert_eq!(d1.wedge(d2), Some((1, DtSet::from_vertices([0, 1]))));
        assert_eq!(d2.wedge(d1), Some((-1, DtSet::from_vertices([0, 1]))));
        assert_eq!(d1.wedge(d1), None);
        let d13 = DtSet::from_vertices([0, 2]);
        assert_eq!(d2.wedge(d13).map(|x| x.0), Some(-1));
        assert_eq!(d13.wedge(d2).map(|x| x.0), Some(-1));
    }
}
