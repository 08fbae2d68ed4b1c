//! Exact Gauss–Jordan elimination.
//!
//! Pivots are chosen deterministically: columns are scanned left to right and
//! the first row (in current order) with a non-zero entry becomes the pivot
//! row. Rows whose entry in the pivot column is zero are not touched, which
//! keeps the cost proportional to the fill of the matrix.

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// The non-zero rows of the reduced form; row `i` has a leading one in
    /// column `pivots[i]`.
    pub rref: RationalMatrix,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&j| !is_pivot[j]).collect()
    }

    /// Kernel basis: one vector per free column `f`, with a one at `f`, zeros
    /// at the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![Rational::ZERO; self.cols];
                v[f] = Rational::ONE;
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = -&self.rref[(i, f)];
                }
                v
            })
            .collect()
    }
}

/// Gauss–Jordan on `rows`, choosing pivots only among the first `pivot_cols`
/// columns. Returns the pivot columns; `rows` is left in reduced form with the
/// pivot rows first.
fn reduce_in_place(rows: &mut [Vec<Rational>], pivot_cols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        let width = rows[r].len();
        let nz: Vec<usize> = (c..width).filter(|&j| !rows[r][j].is_zero()).collect();
        if !inv.is_one() {
            for &j in &nz {
                rows[r][j] = &rows[r][j] * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                row[j] -= &delta;
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn echelon(m: &RationalMatrix) -> Echelon {
    let mut rows = m.to_rows();
    let pivots = reduce_in_place(&mut rows, m.cols());
    rows.truncate(pivots.len());
    Echelon { rref: RationalMatrix::from_rows_with_cols(rows, m.cols()), pivots, cols: m.cols() }
}

pub fn rank(m: &RationalMatrix) -> usize {
    let mut rows = m.to_rows();
    reduce_in_place(&mut rows, m.cols()).len()
}

/// Rank, kernel basis and image basis of a matrix acting on column vectors.
#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<Vec<Rational>>,
    /// The pivot columns of the input.
    pub image: Vec<Vec<Rational>>,
}

pub fn rank_kernel_image(m: &RationalMatrix) -> RankKernelImage {
    let e = echelon(m);
    RankKernelImage { rank: e.rank(), kernel: e.kernel_basis(), image: e.pivots.iter().map(|&p| m.column(p)).collect() }
}

/// One solution of `m x = b`, with free variables set to zero.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let rhs = RationalMatrix::from_columns(m.rows(), &[b.to_vec()]);
    let x = solve_many(m, &rhs)?;
    Ok(x.column(0))
}

/// Solves `m X = rhs` column by column with the free-variables-zero rule.
pub fn solve_many(m: &RationalMatrix, rhs: &RationalMatrix) -> Result<RationalMatrix> {
    assert_eq!(m.rows(), rhs.rows(), "right-hand side has the wrong length");
    let n = m.cols();
    let mut rows = m.hstack(rhs).to_rows();
    let pivots = reduce_in_place(&mut rows, n);
    for row in &rows[pivots.len()..] {
        if row[n..].iter().any(|x| !x.is_zero()) {
            return Err(Error::NoSolution);
        }
    }
    let mut x = RationalMatrix::zeros(n, rhs.cols());
    for (i, &p) in pivots.iter().enumerate() {
        for k in 0..rhs.cols() {
            x[(p, k)] = rows[i][n + k].clone();
        }
    }
    Ok(x)
}

/// A deterministic right inverse of a surjective matrix.
pub fn right_inverse(m: &RationalMatrix) -> Result<RationalMatrix> {
    solve_many(m, &RationalMatrix::identity(m.rows()))
}

/// The quotient of ℚ^ambient_dim by the row space of a relation matrix.
///
/// Cosets are represented on the free (non-pivot) columns of the reduced
/// relation matrix.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient_dim: usize,
    relations: Echelon,
    coset_basis: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(ambient_dim: usize, relations: &RationalMatrix) -> Self {
        assert_eq!(relations.cols(), ambient_dim, "relations have the wrong width");
        let relations = echelon(relations);
        let coset_basis = relations.free_columns();
        Self { ambient_dim, relations, coset_basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.coset_basis.len()
    }

    /// Ambient columns whose unit vectors represent a basis of the quotient.
    pub fn coset_basis(&self) -> &[usize] {
        &self.coset_basis
    }

    pub fn relation_basis(&self) -> &RationalMatrix {
        &self.relations.rref
    }

    /// Coordinates of the class of `x` in the coset basis.
    pub fn coords(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.ambient_dim);
        let mut y: Vec<Rational> = x.to_vec();
        for (i, &p) in self.relations.pivots.iter().enumerate() {
            if y[p].is_zero() {
                continue;
            }
            let f = y[p].clone();
            for j in 0..self.ambient_dim {
                let r = &self.relations.rref[(i, j)];
                if !r.is_zero() {
                    y[j] -= &f * r;
                }
            }
        }
        self.coset_basis.iter().map(|&f| y[f].clone()).collect()
    }

    /// The projection onto the span of the coset basis along the relations,
    /// as an ambient_dim × ambient_dim matrix.
    pub fn reduce_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for j in 0..self.ambient_dim {
            let mut e = vec![Rational::ZERO; self.ambient_dim];
            e[j] = Rational::ONE;
            for (k, c) in self.coset_basis.iter().zip(self.coords(&e)) {
                m[(*k, j)] = c;
            }
        }
        m
    }
}

pub fn quotient_space(ambient_dim: usize, relations: &RationalMatrix) -> QuotientSpace {
    QuotientSpace::new(ambient_dim, relations)
}
