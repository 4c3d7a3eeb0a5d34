//! Small named tensors that recur in tests, examples and constructions.

use crate::scalar::{int, ratio, Rational};
use crate::tensor::Tensor;

/// The 3-dimensional vertex of order 3 with one entry 1 and sixteen
/// entries 1/2; the smallest vertex that is not a permutation.
pub fn v() -> Tensor<Rational> {
    const HALVES: [[[i64; 3]; 3]; 3] = [
        [[2, 0, 0], [0, 1, 1], [0, 1, 1]],
        [[0, 1, 1], [1, 1, 0], [1, 0, 1]],
        [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
    ];
    Tensor::from_fn(3, 3, |c| ratio(HALVES[c[0]][c[1]][c[2]], 2))
}

/// The `d`-dimensional permutation of order `n` given by the Cayley table
/// of `Z_n`: `a_α = 1` iff the last coordinate is the sum of the others mod `n`.
pub fn cayley_permutation(dim: usize, order: usize) -> Tensor<Rational> {
    assert!(dim >= 2, "a permutation tensor needs d >= 2");
    Tensor::from_fn(dim, order, |c| {
        let head: usize = c[..dim - 1].iter().sum();
        int(i64::from(head % order == c[dim - 1]))
    })
}

/// The `n x n` identity matrix.
pub fn identity(order: usize) -> Tensor<Rational> {
    Tensor::from_fn(2, order, |c| int(i64::from(c[0] == c[1])))
}

/// Permutation matrix with ones at `(i, perm[i])`.
pub fn permutation_matrix(perm: &[usize]) -> Tensor<Rational> {
    Tensor::from_fn(2, perm.len(), |c| int(i64::from(perm[c[0]] == c[1])))
}

/// The 4-dimensional vertex of order 3 with 49 nonzero entries, two of its
/// (0,1) planes meeting in a single one. Entries doubled, indexed
/// `[a1][a2][a3][a4]`.
pub fn two_plane_vertex() -> Tensor<Rational> {
    const DOUBLED: [[[[i64; 3]; 3]; 3]; 3] = [
        [
            [[2, 0, 0], [0, 1, 1], [0, 1, 1]],
            [[0, 2, 0], [1, 0, 1], [1, 0, 1]],
            [[0, 0, 2], [1, 1, 0], [1, 1, 0]],
        ],
        [
            [[0, 1, 1], [2, 0, 0], [0, 1, 1]],
            [[1, 0, 1], [0, 1, 1], [1, 1, 0]],
            [[1, 1, 0], [0, 1, 1], [1, 0, 1]],
        ],
        [
            [[0, 1, 1], [0, 1, 1], [2, 0, 0]],
            [[1, 0, 1], [1, 1, 0], [0, 1, 1]],
            [[1, 1, 0], [1, 0, 1], [0, 1, 1]],
        ],
    ];
    Tensor::from_fn(4, 3, |c| ratio(DOUBLED[c[0]][c[1]][c[2]][c[3]], 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{is_permutation_tensor, is_polystochastic, support};

    #[test]
    fn v_shape() {
        let v = v();
        assert!(is_polystochastic(&v));
        assert_eq!(support(&v).len(), 17);
        assert_eq!(v.get(&[0, 0, 0]), &int(1));
        assert_eq!(v.get(&[1, 1, 1]), &ratio(1, 2));
        let plane = v.hyperplane(0, 1).unwrap();
        assert_eq!(&plane.entries()[..3], &[int(0), ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn cayley_tables_are_permutations() {
        for (d, n) in [(2, 4), (3, 2), (3, 3), (4, 3), (5, 2)] {
            let p = cayley_permutation(d, n);
            assert!(is_permutation_tensor(&p));
            assert_eq!(support(&p).len(), n.pow(d as u32 - 1));
        }
    }

    #[test]
    fn two_plane_vertex_shape() {
        let a = two_plane_vertex();
        assert!(is_polystochastic(&a));
        assert_eq!(support(&a).len(), 49);
    }
}
