use derham::exactla::{
    rank, rank_kernel_image, right_inverse, solve, QuotientSpace, Rational, RationalMatrix,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

/// Fraction-free Bareiss elimination on integer entries.
fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..nr {
            for j in c + 1..nc {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> RationalMatrix {
    RationalMatrix::from_rows_with_cols(
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect(),
        cols,
    )
}

fn small_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        // sparse entries so that rank deficiency is common
        let entry = prop_oneof![3 => Just(0i64), 2 => -4i64..=4];
        (Just(c), prop::collection::vec(prop::collection::vec(entry, c), r))
    })
}

#[test]
fn bareiss_oracle_on_fixed_cases() {
    assert_eq!(bareiss_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(bareiss_rank(&[vec![0, 1], vec![1, 0]]), 2);
    assert_eq!(bareiss_rank(&[vec![0, 0, 0]]), 0);
}

proptest! {
    #[test]
    fn rank_agrees_with_bareiss((cols, rows) in small_matrix()) {
        let m = to_matrix(&rows, cols);
        prop_assert_eq!(rank(&m), bareiss_rank(&rows));
        prop_assert_eq!(rank(&m.transpose()), rank(&m));
    }

    #[test]
    fn kernel_and_image((cols, rows) in small_matrix()) {
        let m = to_matrix(&rows, cols);
        let rki = rank_kernel_image(&m);
        prop_assert_eq!(rki.kernel.len() + rki.rank, cols);
        for k in &rki.kernel {
            prop_assert!(m.mul_vec(k).iter().all(Rational::is_zero));
        }
        let image = RationalMatrix::from_columns(m.rows(), &rki.image);
        prop_assert_eq!(rank(&image), rki.rank);
    }

    #[test]
    fn solve_recovers_consistent_systems((cols, rows) in small_matrix(), seed in prop::collection::vec(-3i64..=3, 6)) {
        let m = to_matrix(&rows, cols);
        let x: Vec<Rational> = seed.iter().take(cols).map(|&v| Rational::from_int(v)).chain(std::iter::repeat(Rational::ZERO)).take(cols).collect();
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn right_inverse_of_full_row_rank((cols, rows) in small_matrix()) {
        let m = to_matrix(&rows, cols);
        if rank(&m) == m.rows() {
            let r = right_inverse(&m).unwrap();
            prop_assert_eq!(m.mul(&r), RationalMatrix::identity(m.rows()));
        } else {
            prop_assert!(right_inverse(&m).is_err());
        }
    }

    #[test]
    fn quotient_kills_relations((cols, rows) in small_matrix(), v in prop::collection::vec(-3i64..=3, 6)) {
        let rel = to_matrix(&rows, cols);
        let q = QuotientSpace::new(cols, &rel);
        prop_assert_eq!(q.dim(), cols - rank(&rel));
        for r in rel.to_rows() {
            prop_assert!(q.coords(&r).iter().all(Rational::is_zero));
        }
        let x: Vec<Rational> = v.iter().cycle().take(cols).map(|&a| Rational::from_int(a)).collect();
        let shifted: Vec<Rational> = x.iter().zip(rel.row(0)).map(|(a, b)| a + b).collect();
        prop_assert_eq!(q.coords(&x), q.coords(&shifted));
    }
}
