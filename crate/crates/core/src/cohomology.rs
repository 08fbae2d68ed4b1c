//! Cohomology of weight-truncated form complexes, its stabilization in the
//! weight bound, and the map induced by `P`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cech::{differential, embed, FormSpace, Side};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exactla::{rank, rank_kernel_image, solve_many, QuotientSpace, Rational, RationalMatrix};
use crate::polyalg::PolyForm;
use crate::simplicial::{simplicial_betti, Subcomplex, VertexTuple};
use crate::sullivan::eval_p;

/// Form spaces of degrees `0..=q_max + 1` at one weight bound, with their
/// differentials.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    side: Side,
    bound: usize,
    spaces: Vec<FormSpace>,
    differentials: Vec<RationalMatrix>,
    augmentation: Vec<Rational>,
}

impl TruncatedComplex {
    pub fn new(engine: &Engine, side: Side, y: &Subcomplex, q_max: usize, bound: usize) -> Result<Self> {
        let spaces: Vec<FormSpace> =
            (0..=q_max + 1).map(|q| FormSpace::build(engine, side, y, q, bound)).collect::<Result<_>>()?;
        let differentials: Vec<RationalMatrix> =
            spaces.windows(2).map(|w| differential(&w[0], &w[1])).collect::<Result<_>>()?;
        let augmentation = match &spaces[0] {
            FormSpace::Omega(t) => t.coords(&PolyForm::one())?,
            FormSpace::Sullivan(t) => t.global_coords(&PolyForm::one())?,
            FormSpace::Zero => Vec::new(),
        };
        Ok(TruncatedComplex { side, bound, spaces, differentials, augmentation })
    }

    /// A complex given directly by its differentials `d_q: C^q → C^{q+1}`.
    pub fn from_differentials(side: Side, bound: usize, differentials: Vec<RationalMatrix>) -> Self {
        let spaces = vec![FormSpace::Zero; differentials.len() + 1];
        TruncatedComplex { side, bound, spaces, differentials, augmentation: Vec::new() }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Highest degree whose cohomology is determined.
    pub fn q_max(&self) -> usize {
        self.differentials.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.differentials.iter().map(|m| m.cols()).collect();
        d.push(self.differentials.last().map_or(0, |m| m.rows()));
        d
    }

    pub fn space(&self, q: usize) -> &FormSpace {
        &self.spaces[q]
    }

    pub fn differential(&self, q: usize) -> &RationalMatrix {
        &self.differentials[q]
    }

    /// Coordinates of the constant function `1` in degree 0.
    pub fn augmentation(&self) -> &[Rational] {
        &self.augmentation
    }

    /// `d_{q+1} d_q = 0` for all stored degrees.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// `h^q = dim ker d_q − rank d_{q−1}` for `q = 0..=q_max`.
pub fn truncated_betti(tc: &TruncatedComplex) -> Vec<usize> {
    let dims = tc.dims();
    let ranks: Vec<usize> = tc.differentials.iter().map(rank).collect();
    (0..ranks.len()).map(|q| dims[q] - ranks[q] - if q == 0 { 0 } else { ranks[q - 1] }).collect()
}

/// Truncated Betti numbers over a range of weight bounds.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BettiReport {
    pub side: Side,
    pub q_max: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub window: usize,
    /// `(D, [h^0, …, h^{q_max}])` for every `D` in range.
    pub per_bound: Vec<(usize, Vec<usize>)>,
    /// Whether `h^q` is constant over the last `window` bounds.
    pub stabilized: Vec<bool>,
    /// The values at `d_max`.
    pub betti: Vec<usize>,
    /// Smallest `D` from which `h^q` is constant up to `d_max`.
    pub stable_from: Vec<usize>,
}

impl BettiReport {
    pub fn all_stabilized(&self) -> bool {
        self.stabilized.iter().all(|&s| s)
    }
}

pub fn stabilized_betti(
    engine: &Engine,
    side: Side,
    y: &Subcomplex,
    q_max: usize,
    d_min: usize,
    d_max: usize,
    window: usize,
) -> Result<BettiReport> {
    if d_min > d_max || window < 1 || window > d_max - d_min + 1 {
        return Err(Error::AssertionFailure(format!(
            "invalid stabilization range D = {d_min}..={d_max} with window {window}"
        )));
    }
    let per_bound: Vec<(usize, Vec<usize>)> = (d_min..=d_max)
        .into_par_iter()
        .map(|d| Ok((d, truncated_betti(&TruncatedComplex::new(engine, side, y, q_max, d)?))))
        .collect::<Result<_>>()?;
    let betti = per_bound.last().expect("non-empty range").1.clone();
    let stabilized = (0..=q_max)
        .map(|q| per_bound[per_bound.len() - window..].iter().all(|(_, h)| h[q] == betti[q]))
        .collect();
    let stable_from = (0..=q_max)
        .map(|q| {
            let mut from = d_max;
            for (d, h) in per_bound.iter().rev() {
                if h[q] != betti[q] {
                    break;
                }
                from = *d;
            }
            from
        })
        .collect();
    Ok(BettiReport { side, q_max, d_min, d_max, window, per_bound, stabilized, betti, stable_from })
}

/// Simplicial Betti numbers of `y` in degrees `0..=q_max`.
pub fn simplicial_oracle(y: &Subcomplex, q_max: usize) -> Vec<usize> {
    simplicial_betti(y, q_max)
}

/// The map induced by `P` on `H^q` at one weight bound.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InducedMap {
    pub q: usize,
    pub h_omega: usize,
    pub h_sullivan: usize,
    /// `h_sullivan × h_omega` matrix in the chosen cohomology bases.
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    /// `P d = d P` and `P` maps coboundaries into coboundaries.
    pub well_defined: bool,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.well_defined && self.h_omega == self.h_sullivan && self.rank == self.h_omega
    }
}

struct CohomologyBasis {
    /// Cocycle basis as columns.
    cocycles: RationalMatrix,
    quotient: QuotientSpace,
}

impl CohomologyBasis {
    fn new(d_out: &RationalMatrix, d_in: &RationalMatrix) -> Result<Self> {
        let z = rank_kernel_image(d_out).kernel;
        let cocycles = RationalMatrix::from_columns(d_out.cols(), &z);
        // coboundaries in cocycle coordinates, as relation rows
        let relations = solve_many(&cocycles, d_in)?.transpose();
        let quotient = QuotientSpace::new(z.len(), &relations);
        Ok(CohomologyBasis { cocycles, quotient })
    }

    fn dim(&self) -> usize {
        self.quotient.dim()
    }

    fn representative(&self, i: usize) -> Vec<Rational> {
        self.cocycles.column(self.quotient.coset_basis()[i])
    }

    fn class_of(&self, cocycle: &[Rational]) -> Result<Vec<Rational>> {
        let x = solve_many(&self.cocycles, &RationalMatrix::from_columns(cocycle.len(), &[cocycle.to_vec()]))?;
        Ok(self.quotient.coords(&x.column(0)))
    }
}

fn incoming(tc: &TruncatedComplex, q: usize) -> RationalMatrix {
    if q == 0 {
        RationalMatrix::zeros(tc.dims()[0], 0)
    } else {
        tc.differentials[q - 1].clone()
    }
}

/// `P_*: H^q(F_D Ω•(Y)) → H^q(F_D A•(Y))` for `q = 0..=q_max`.
pub fn induced_p_on_h(engine: &Engine, y: &Subcomplex, q_max: usize, bound: usize) -> Result<Vec<InducedMap>> {
    let om = TruncatedComplex::new(engine, Side::Omega, y, q_max, bound)?;
    let sl = TruncatedComplex::new(engine, Side::Sullivan, y, q_max, bound)?;
    let p: Vec<RationalMatrix> = (0..=q_max + 1)
        .map(|q| match (om.space(q), sl.space(q)) {
            (FormSpace::Omega(a), FormSpace::Sullivan(b)) => eval_p(a, b),
            _ => Ok(RationalMatrix::zeros(sl.dims()[q], om.dims()[q])),
        })
        .collect::<Result<_>>()?;
    (0..=q_max)
        .map(|q| {
            let ho = CohomologyBasis::new(om.differential(q), &incoming(&om, q))?;
            let hs = CohomologyBasis::new(sl.differential(q), &incoming(&sl, q))?;
            let commutes = sl.differential(q).mul(&p[q]) == p[q + 1].mul(om.differential(q));
            let b_in = incoming(&sl, q);
            let pb = p[q].mul(&incoming(&om, q));
            let boundaries_preserved = rank(&b_in.hstack(&pb)) == rank(&b_in);
            let columns = (0..ho.dim())
                .map(|i| hs.class_of(&p[q].mul_vec(&ho.representative(i))))
                .collect::<Result<Vec<_>>>()?;
            let m = RationalMatrix::from_columns(hs.dim(), &columns);
            Ok(InducedMap {
                q,
                h_omega: ho.dim(),
                h_sullivan: hs.dim(),
                matrix: m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
                rank: rank(&m),
                well_defined: commutes && boundaries_preserved,
            })
        })
        .collect()
}

/// Sanity of the augmentations `ε: ℚ → Ω⁰` and `ε̄ = P∘ε: ℚ → A⁰`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AugmentationReport {
    pub omega_cocycle: bool,
    pub sullivan_cocycle: bool,
    pub omega_nonzero_class: bool,
    pub sullivan_nonzero_class: bool,
    /// `ε̄ = P∘ε` exactly.
    pub commutes_with_p: bool,
}

impl AugmentationReport {
    pub fn passed(&self) -> bool {
        self.omega_cocycle
            && self.sullivan_cocycle
            && self.omega_nonzero_class
            && self.sullivan_nonzero_class
            && self.commutes_with_p
    }
}

pub fn augmentation_report(engine: &Engine, y: &Subcomplex, bound: usize) -> Result<AugmentationReport> {
    let om = TruncatedComplex::new(engine, Side::Omega, y, 0, bound)?;
    let sl = TruncatedComplex::new(engine, Side::Sullivan, y, 0, bound)?;
    let nonempty = !y.is_empty();
    let is_cocycle = |tc: &TruncatedComplex| tc.differential(0).mul_vec(tc.augmentation()).iter().all(Rational::is_zero);
    let commutes_with_p = match (om.space(0), sl.space(0)) {
        (FormSpace::Omega(a), FormSpace::Sullivan(b)) => eval_p(a, b)?.mul_vec(om.augmentation()) == sl.augmentation(),
        _ => !nonempty,
    };
    // there are no degree -1 coboundaries, so the class is non-zero iff the vector is
    let nonzero = |tc: &TruncatedComplex| tc.augmentation().iter().any(|x| !x.is_zero()) || !nonempty;
    Ok(AugmentationReport {
        omega_cocycle: is_cocycle(&om),
        sullivan_cocycle: is_cocycle(&sl),
        omega_nonzero_class: nonzero(&om),
        sullivan_nonzero_class: nonzero(&sl),
        commutes_with_p,
    })
}

/// Cohomology of the stars `St u`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StarReport {
    pub tuple: Vec<usize>,
    pub omega: Vec<usize>,
    pub sullivan: Vec<usize>,
    pub stabilized: bool,
}

impl StarReport {
    pub fn acyclic(&self) -> bool {
        let point = |h: &[usize]| h.first() == Some(&1) && h[1..].iter().all(|&x| x == 0);
        point(&self.omega) && point(&self.sullivan)
    }
}

/// Stabilized cohomology of every non-empty `St u` with `0 ≤ p ≤ p_max`.
pub fn star_acyclicity_report(
    engine: &Engine,
    q_max: usize,
    p_max: usize,
    d_min: usize,
    d_max: usize,
    window: usize,
) -> Result<Vec<StarReport>> {
    let mut jobs: Vec<(VertexTuple, Subcomplex)> = Vec::new();
    for p in 0..=p_max as isize {
        for u in engine.complex().increasing_tuples(p) {
            let star = engine.whole().star(&u);
            if !star.is_empty() {
                jobs.push((u, star));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(u, star)| {
            let om = stabilized_betti(engine, Side::Omega, &star, q_max, d_min, d_max, window)?;
            let sl = stabilized_betti(engine, Side::Sullivan, &star, q_max, d_min, d_max, window)?;
            Ok(StarReport {
                tuple: u.entries().to_vec(),
                stabilized: om.all_stabilized() && sl.all_stabilized(),
                omega: om.betti,
                sullivan: sl.betti,
            })
        })
        .collect()
}

/// Checks that the inclusion `F_D → F_D'` commutes with `d` in degrees
/// `0..=q_max`, so it carries cocycles to cocycles and coboundaries to
/// coboundaries.
pub fn inclusion_is_chain_map(engine: &Engine, side: Side, y: &Subcomplex, q_max: usize, d: usize, d_prime: usize) -> Result<bool> {
    let a = TruncatedComplex::new(engine, side, y, q_max, d)?;
    let b = TruncatedComplex::new(engine, side, y, q_max, d_prime)?;
    let e: Vec<RationalMatrix> = (0..=q_max + 1).map(|q| embed(a.space(q), b.space(q))).collect::<Result<_>>()?;
    Ok((0..=q_max).all(|q| b.differential(q).mul(&e[q]) == e[q + 1].mul(a.differential(q))))
}
