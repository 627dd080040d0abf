//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::Rat;

/// Solve `a * x = b` for square nonsingular `a`. Returns `None` when `a` is
/// singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rat::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                if a[col][j].is_zero() {
                    continue;
                }
                let delta = &factor * &a[col][j];
                a[r][j] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn solves_small_system() {
        // x + 2y = 5, 3x - y = 1  =>  x = 1, y = 2
        let a = vec![vec![r(1, 1), r(2, 1)], vec![r(3, 1), r(-1, 1)]];
        let x = solve(a, vec![r(5, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(1, 1), r(2, 1)]);
    }

    #[test]
    fn needs_row_swap() {
        let a = vec![vec![r(0, 1), r(1, 1)], vec![r(2, 1), r(0, 1)]];
        let x = solve(a, vec![r(3, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(1, 2), r(3, 1)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]];
        assert!(solve(a, vec![r(1, 1), r(2, 1)]).is_none());
    }
}
