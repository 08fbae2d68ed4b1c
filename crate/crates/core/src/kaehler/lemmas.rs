//! Randomized and exhaustive checks of the local identities behind the
//! homotopy on the de Rham side.

use rand::Rng;
use serde::Serialize;

use super::{embedding_matrix, extension_matrix, multiplication_matrix, restriction_matrix, ExtensionRule};
use crate::engine::Engine;
use crate::error::Result;
use crate::exactla::{random_vector, rank, rank_kernel_image, Rational, RationalMatrix};
use crate::polyalg::PolyForm;
use crate::simplicial::{Subcomplex, VertexTuple};
use crate::sullivan::SimplexFormSpace;

/// Outcome of checking a linear identity on random vectors.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LemmaReport {
    /// Dimension of the space the identity is tested on.
    pub dimension: usize,
    pub trials: usize,
    pub failures: usize,
    /// Whether the identity also holds as a matrix identity.
    pub holds_identically: bool,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn run<R: Rng + ?Sized>(lhs: &RationalMatrix, rhs: &RationalMatrix, trials: usize, rng: &mut R) -> Self {
        let dimension = lhs.cols();
        let mut failures = 0;
        for _ in 0..trials {
            let c = random_vector(rng, dimension);
            if lhs.mul_vec(&c) != rhs.mul_vec(&c) {
                failures += 1;
            }
        }
        LemmaReport { dimension, trials, failures, holds_identically: lhs == rhs }
    }
}

fn basis_matrix(rows: usize, vectors: &[Vec<Rational>]) -> RationalMatrix {
    RationalMatrix::from_columns(rows, vectors)
}

/// Checks that `t_v² ω = 0` on `Y` whenever `ω` restricts to zero on
/// `St_Y v`. Trials draw random elements of that kernel in `F_D Ωᵠ(Y)`.
pub fn verify_tv_annihilation<R: Rng + ?Sized>(
    engine: &Engine,
    y: &Subcomplex,
    v: usize,
    q: usize,
    bound: usize,
    trials: usize,
    rng: &mut R,
) -> Result<LemmaReport> {
    let src = engine.omega(y, q, bound)?;
    let star = y.star(&VertexTuple::new(vec![v]));
    let restr = restriction_matrix(&src, &*engine.omega(&star, q, bound)?)?;
    let kernel = basis_matrix(src.dim(), &rank_kernel_image(&restr).kernel);
    let dst = engine.omega(y, q, bound + 2)?;
    let mult = multiplication_matrix(&src, &dst, &PolyForm::var(v).pow(2))?;
    let lhs = mult.mul(&kernel);
    Ok(LemmaReport::run(&lhs, &RationalMatrix::zeros(lhs.rows(), lhs.cols()), trials, rng))
}

/// Checks `Σ_v ρ_v·[ω|_{St_Y v}]|_Y = ω` on `F_D Ωᵠ(Y)`, with the brackets
/// the distinguished extension from `St_Y v` to the whole complex.
pub fn verify_extres<R: Rng + ?Sized>(
    engine: &Engine,
    y: &Subcomplex,
    q: usize,
    bound: usize,
    rule: ExtensionRule,
    trials: usize,
    rng: &mut R,
) -> Result<LemmaReport> {
    let pu = engine.partition()?;
    let shift = pu.exponent() as usize;
    let src = engine.omega(y, q, bound)?;
    let dst = engine.omega(y, q, bound + shift)?;
    let whole = engine.omega(engine.whole(), q, bound)?;
    let to_y = restriction_matrix(&whole, &src)?;
    let mut lhs = RationalMatrix::zeros(dst.dim(), src.dim());
    for v in pu.vertices() {
        let star = y.star(&VertexTuple::new(vec![v]));
        if star.is_empty() {
            continue;
        }
        let st = engine.omega(&star, q, bound)?;
        let res = restriction_matrix(&src, &st)?;
        let ext = extension_matrix(&st, &whole, rule)?;
        let mult = multiplication_matrix(&src, &dst, &pu.rho(v))?;
        lhs = lhs.add(&mult.mul(&to_y).mul(&ext).mul(&res));
    }
    let rhs = embedding_matrix(&src, &dst)?;
    Ok(LemmaReport::run(&lhs, &rhs, trials, rng))
}

/// Injectivity of `P` on `F_D A⁰(Y)` against the product over the maximal
/// simplices.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PresentationReport {
    pub dimension: usize,
    pub rank: usize,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.dimension == self.rank
    }
}

/// Checks that the presented ring of functions embeds into the product of
/// polynomial rings of the maximal simplices in weights `≤ D`.
pub fn verify_presentation_deg0(engine: &Engine, y: &Subcomplex, bound: usize) -> Result<PresentationReport> {
    let src = engine.omega(y, 0, bound)?;
    let mut stacked = RationalMatrix::zeros(0, src.dim());
    for a in y.maximal_simplices() {
        let space = SimplexFormSpace::new(a, 0, bound);
        let columns = (0..src.dim()).map(|j| space.pull_coords(&src.basis_form(j))).collect::<Result<Vec<_>>>()?;
        stacked = stacked.vstack(&RationalMatrix::from_columns(space.dim(), &columns));
    }
    Ok(PresentationReport { dimension: src.dim(), rank: rank(&stacked) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bd2() -> Engine {
        Engine::new(SimplicialComplex::from_index_lists("bd2", 3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap())
    }

    #[test]
    fn annihilation_on_boundary_triangle() {
        let e = bd2();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for q in 0..2 {
            for v in 0..3 {
                let r = verify_tv_annihilation(&e, e.whole(), v, q, 3, 20, &mut rng).unwrap();
                assert!(r.passed() && r.holds_identically, "{q} {v} {r:?}");
                assert!(r.dimension > 0);
            }
        }
    }

    #[test]
    fn extres_on_boundary_triangle_and_an_edge() {
        let e = bd2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let edge = Subcomplex::closure([e.complex().simplex(&["1", "2"]).unwrap()]);
        for y in [e.whole().clone(), edge] {
            for rule in [ExtensionRule::Reinterpret, ExtensionRule::Solve] {
                let r = verify_extres(&e, &y, 1, 2, rule, 10, &mut rng).unwrap();
                assert!(r.passed() && r.holds_identically, "{r:?}");
            }
        }
    }

    #[test]
    fn presentation_embeds() {
        let e = bd2();
        for d in 0..5 {
            assert!(verify_presentation_deg0(&e, e.whole(), d).unwrap().passed());
        }
    }
}
