//! The group `S_n^d ⋊ S_d` acting on tensors, and canonical forms.
//!
//! A transform `g` has an axis permutation `σ` and one permutation `π_j` of
//! `0..n` per axis. It moves index `α` to `g(α)` with
//! `g(α)_j = π_j(α_{σ⁻¹(j)})`, and acts on tensors by `(g·t)[g(α)] = t[α]`:
//! first the axes are permuted, then the hyperplanes along each resulting
//! axis. This is a left action, `(g∘h)·t = g·(h·t)`.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tensor::{cell_count, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("{0:?} is not a permutation")]
    NotPermutation(Vec<usize>),
    #[error("transform acts on dimension {transform} and order {transform_order}, tensor has {dim} and {order}")]
    ShapeMismatch {
        transform: usize,
        transform_order: usize,
        dim: usize,
        order: usize,
    },
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Element of `S_n^d ⋊ S_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceTransform {
    axis_perm: Vec<usize>,
    hyperplane_perms: Vec<Vec<usize>>,
}

impl EquivalenceTransform {
    pub fn new(axis_perm: Vec<usize>, hyperplane_perms: Vec<Vec<usize>>) -> Result<Self, EquivalenceError> {
        if !is_permutation(&axis_perm) {
            return Err(EquivalenceError::NotPermutation(axis_perm));
        }
        let order = hyperplane_perms.first().map_or(0, Vec::len);
        if hyperplane_perms.len() != axis_perm.len() {
            return Err(EquivalenceError::NotPermutation(axis_perm));
        }
        if let Some(bad) = hyperplane_perms
            .iter()
            .find(|p| p.len() != order || !is_permutation(p))
        {
            return Err(EquivalenceError::NotPermutation(bad.clone()));
        }
        Ok(EquivalenceTransform {
            axis_perm,
            hyperplane_perms,
        })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        EquivalenceTransform {
            axis_perm: (0..dim).collect(),
            hyperplane_perms: vec![(0..order).collect(); dim],
        }
    }

    /// Pure axis permutation.
    pub fn axes(axis_perm: Vec<usize>, order: usize) -> Result<Self, EquivalenceError> {
        let d = axis_perm.len();
        Self::new(axis_perm, vec![(0..order).collect(); d])
    }

    /// Permutes the hyperplanes along one axis only.
    pub fn hyperplanes(dim: usize, axis: usize, perm: Vec<usize>) -> Result<Self, EquivalenceError> {
        let order = perm.len();
        let mut perms = vec![(0..order).collect::<Vec<_>>(); dim];
        perms[axis] = perm;
        Self::new((0..dim).collect(), perms)
    }

    pub fn dim(&self) -> usize {
        self.axis_perm.len()
    }

    pub fn order(&self) -> usize {
        self.hyperplane_perms.first().map_or(0, Vec::len)
    }

    pub fn axis_perm(&self) -> &[usize] {
        &self.axis_perm
    }

    pub fn hyperplane_perms(&self) -> &[Vec<usize>] {
        &self.hyperplane_perms
    }

    /// Image `g(α)` of an index.
    pub fn map_index(&self, alpha: &[usize]) -> Vec<usize> {
        let inv = invert(&self.axis_perm);
        (0..self.dim())
            .map(|j| self.hyperplane_perms[j][alpha[inv[j]]])
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &EquivalenceTransform) -> EquivalenceTransform {
        let inv = invert(&self.axis_perm);
        let axis_perm = other
            .axis_perm
            .iter()
            .map(|&x| self.axis_perm[x])
            .collect();
        let hyperplane_perms = (0..self.dim())
            .map(|j| {
                let inner = &other.hyperplane_perms[inv[j]];
                inner.iter().map(|&x| self.hyperplane_perms[j][x]).collect()
            })
            .collect();
        EquivalenceTransform {
            axis_perm,
            hyperplane_perms,
        }
    }

    pub fn inverse(&self) -> EquivalenceTransform {
        let axis_perm = invert(&self.axis_perm);
        let hyperplane_perms = (0..self.dim())
            .map(|i| invert(&self.hyperplane_perms[self.axis_perm[i]]))
            .collect();
        EquivalenceTransform {
            axis_perm,
            hyperplane_perms,
        }
    }

    pub fn apply<T: Scalar>(&self, t: &Tensor<T>) -> Result<Tensor<T>, EquivalenceError> {
        if t.dim() != self.dim() || t.order() != self.order() {
            return Err(EquivalenceError::ShapeMismatch {
                transform: self.dim(),
                transform_order: self.order(),
                dim: t.dim(),
                order: t.order(),
            });
        }
        let mut out = Tensor::zeros(t.dim(), t.order());
        for (off, v) in t.entries().iter().enumerate() {
            let target = self.map_index(&t.coords(off));
            out.set(&target, v.clone());
        }
        Ok(out)
    }

    /// Every element of the group, `n!^d · d!` of them.
    pub fn all(dim: usize, order: usize) -> impl Iterator<Item = EquivalenceTransform> {
        let value_perms: Vec<Vec<usize>> = (0..order).permutations(order).collect();
        let axis_perms: Vec<Vec<usize>> = (0..dim).permutations(dim).collect();
        axis_perms.into_iter().flat_map(move |sigma| {
            let choices = vec![value_perms.clone(); dim];
            choices
                .into_iter()
                .multi_cartesian_product()
                .map(move |perms| EquivalenceTransform {
                    axis_perm: sigma.clone(),
                    hyperplane_perms: perms,
                })
        })
    }
}

/// `n!^d · d!`.
pub fn group_order(dim: usize, order: usize) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    fact(order).pow(dim as u32) * fact(dim)
}

/// Result of canonicalization.
#[derive(Clone, Debug)]
pub struct Canonical<T> {
    /// Least image of the tensor in row-major lexicographic order of values.
    pub tensor: Tensor<T>,
    /// A transform taking the input to `tensor`.
    pub transform: EquivalenceTransform,
    /// Order of the automorphism group of the input.
    pub automorphisms: usize,
}

/// A partial relabeling: result axis `j` reads source axis `src[j]`, and
/// result coordinate `v` on axis `j` reads source coordinate `map[j][v]`.
#[derive(Clone)]
struct Partial {
    src: Vec<u8>,
    map: Vec<Vec<u8>>,
    used: Vec<u32>,
}

/// Canonical form by breadth-first branch and bound over the group.
///
/// Positions of the result are filled in row-major order. A state fixes the
/// axis correspondence and the coordinate maps for values seen so far; at
/// each position every state is extended in all admissible ways and only
/// the extensions realizing the smallest entry survive. States that survive
/// to the end all produce the minimum, and there is one per automorphism.
pub fn canonicalize<T: Scalar>(t: &Tensor<T>) -> Canonical<T> {
    let d = t.dim();
    let n = t.order();
    assert!(n <= 32, "orders above 32 are not supported");
    // compare by rank of value to avoid repeated scalar comparisons
    let mut distinct: Vec<&T> = t.entries().iter().collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("entries must be totally ordered"));
    distinct.dedup_by(|a, b| a == b);
    let rank_of = |v: &T| {
        distinct
            .binary_search_by(|p| (*p).partial_cmp(v).expect("entries must be totally ordered"))
            .expect("value present")
    };
    let ranks: Vec<u32> = t.entries().iter().map(|v| rank_of(v) as u32).collect();
    let strides: Vec<usize> = (0..d).map(|a| n.pow((d - 1 - a) as u32)).collect();

    let mut frontier: Vec<Partial> = (0..d)
        .permutations(d)
        .map(|src| Partial {
            src: src.into_iter().map(|a| a as u8).collect(),
            map: vec![Vec::with_capacity(n); d],
            used: vec![0; d],
        })
        .collect();
    let total = cell_count(d, n).expect("tensor too large");
    let mut best: Vec<u32> = Vec::with_capacity(total);
    let mut coords = vec![0usize; d];
    let mut next: Vec<Partial> = Vec::new();
    for pos in 0..total {
        if pos > 0 {
            for j in (0..d).rev() {
                coords[j] += 1;
                if coords[j] < n {
                    break;
                }
                coords[j] = 0;
            }
        }
        let mut min = u32::MAX;
        next.clear();
        for state in &frontier {
            let fresh: Vec<usize> = (0..d).filter(|&j| coords[j] == state.map[j].len()).collect();
            let mut base = 0;
            for j in 0..d {
                if coords[j] < state.map[j].len() {
                    base += state.map[j][coords[j]] as usize * strides[state.src[j] as usize];
                }
            }
            if fresh.is_empty() {
                let r = ranks[base];
                if r < min {
                    min = r;
                    next.clear();
                }
                if r == min {
                    next.push(state.clone());
                }
                continue;
            }
            let options: Vec<Vec<usize>> = fresh
                .iter()
                .map(|&j| (0..n).filter(|&v| state.used[j] >> v & 1 == 0).collect())
                .collect();
            for choice in options.iter().map(|o| o.iter()).multi_cartesian_product() {
                let off = base
                    + fresh
                        .iter()
                        .zip(&choice)
                        .map(|(&j, &&v)| v * strides[state.src[j] as usize])
                        .sum::<usize>();
                let r = ranks[off];
                if r > min {
                    continue;
                }
                if r < min {
                    min = r;
                    next.clear();
                }
                let mut s = state.clone();
                for (&j, &&v) in fresh.iter().zip(&choice) {
                    s.map[j].push(v as u8);
                    s.used[j] |= 1 << v;
                }
                next.push(s);
            }
        }
        best.push(min);
        std::mem::swap(&mut frontier, &mut next);
    }

    let witness = &frontier[0];
    // result[α'] = t[β] with β_{src[j]} = map[j][α'_j]; as a transform
    // sending β to α' this is σ = src⁻¹ and π_j = map[j]⁻¹.
    let src: Vec<usize> = witness.src.iter().map(|&a| a as usize).collect();
    let axis_perm = invert(&src);
    let hyperplane_perms = witness
        .map
        .iter()
        .map(|m| invert(&m.iter().map(|&v| v as usize).collect::<Vec<_>>()))
        .collect();
    let transform = EquivalenceTransform {
        axis_perm,
        hyperplane_perms,
    };
    let entries = best.iter().map(|&r| distinct[r as usize].clone()).collect();
    Canonical {
        tensor: Tensor::new(d, n, entries).expect("length matches"),
        transform,
        automorphisms: frontier.len(),
    }
}

pub fn canonical_form<T: Scalar>(t: &Tensor<T>) -> Tensor<T> {
    canonicalize(t).tensor
}

pub fn automorphism_order<T: Scalar>(t: &Tensor<T>) -> usize {
    canonicalize(t).automorphisms
}

pub fn are_equivalent<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<bool, EquivalenceError> {
    if a.dim() != b.dim() || a.order() != b.order() {
        return Err(EquivalenceError::ShapeMismatch {
            transform: a.dim(),
            transform_order: a.order(),
            dim: b.dim(),
            order: b.order(),
        });
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// Whether some tensor equivalent to `t` is symmetric.
///
/// Axis permutations preserve symmetry, and so does applying one value
/// permutation to every axis at once, so it suffices to try hyperplane
/// permutations with the first axis left fixed.
pub fn has_symmetric_representative<T: Scalar>(t: &Tensor<T>) -> bool {
    let d = t.dim();
    let n = t.order();
    if d <= 1 {
        return true;
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let identity: Vec<usize> = (0..n).collect();
    let rest = vec![perms.iter(); d - 1];
    rest.into_iter().multi_cartesian_product().any(|chosen| {
        let mut all = vec![identity.clone()];
        all.extend(chosen.into_iter().cloned());
        let g = EquivalenceTransform {
            axis_perm: (0..d).collect(),
            hyperplane_perms: all,
        };
        g.apply(t).expect("shape matches").is_symmetric()
    })
}

/// Histogram helper shared by reports: counts per key, ascending.
pub fn count_by<K: Ord, I: IntoIterator<Item = K>>(keys: I) -> BTreeMap<K, usize> {
    let mut out = BTreeMap::new();
    for k in keys {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;
    use crate::scalar::{int, Rational};
    use crate::stochastic::{is_polystochastic, permanent};

    #[test]
    fn identity_and_transpose() {
        let t = Tensor::from_fn(2, 3, |c| (c[0] * 3 + c[1]) as i64);
        let id = EquivalenceTransform::identity(2, 3);
        assert_eq!(id.apply(&t).unwrap(), t);
        let swap = EquivalenceTransform::axes(vec![1, 0], 3).unwrap();
        let tt = swap.apply(&t).unwrap();
        assert_eq!(tt, t.permute_axes(&[1, 0]));
        assert_eq!(tt.get(&[0, 1]), t.get(&[1, 0]));
    }

    #[test]
    fn hyperplane_swap_preserves_v() {
        let v = known::v();
        let g = EquivalenceTransform::hyperplanes(3, 0, vec![1, 0, 2]).unwrap();
        let w = g.apply(&v).unwrap();
        assert!(is_polystochastic(&w));
        assert_eq!(permanent(&w), permanent(&v));
        assert_ne!(w, v);
    }

    #[test]
    fn composition_is_a_left_action() {
        let t = Tensor::from_fn(3, 3, |c| (c[0] * 9 + c[1] * 3 + c[2]) as i64);
        let g = EquivalenceTransform::new(vec![2, 0, 1], vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]]).unwrap();
        let h = EquivalenceTransform::new(vec![1, 0, 2], vec![vec![2, 0, 1], vec![1, 0, 2], vec![0, 1, 2]]).unwrap();
        let lhs = g.compose(&h).apply(&t).unwrap();
        let rhs = g.apply(&h.apply(&t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let back = g.inverse().apply(&g.apply(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(g.compose(&g.inverse()), EquivalenceTransform::identity(3, 3));
    }

    #[test]
    fn group_sizes() {
        assert_eq!(group_order(3, 3), 1296);
        assert_eq!(group_order(4, 3), 31104);
        assert_eq!(group_order(3, 4), 82944);
        assert_eq!(EquivalenceTransform::all(2, 3).count(), 72);
    }

    #[test]
    fn uniform_is_fixed_by_everything() {
        let u = Tensor::<Rational>::uniform(3, 3);
        assert_eq!(automorphism_order(&u), 1296);
    }

    #[test]
    fn canonical_transform_reaches_canonical_form() {
        let v = known::v();
        let c = canonicalize(&v);
        assert_eq!(c.transform.apply(&v).unwrap(), c.tensor);
        assert_eq!(canonical_form(&c.tensor), c.tensor);
    }

    #[test]
    fn brute_force_agrees_on_small_tensor() {
        let t = Tensor::from_fn(2, 3, |c| int([5, 1, 4, 1, 0, 2, 9, 2, 6][c[0] * 3 + c[1]]));
        let images: Vec<Tensor<Rational>> = EquivalenceTransform::all(2, 3).map(|g| g.apply(&t).unwrap()).collect();
        let min = images
            .iter()
            .min_by(|a, b| a.entries().partial_cmp(b.entries()).unwrap())
            .unwrap();
        assert_eq!(&canonical_form(&t), min);
        let stab = images.iter().filter(|x| **x == t).count();
        assert_eq!(automorphism_order(&t), stab);
    }

    #[test]
    fn symmetric_representatives() {
        assert!(has_symmetric_representative(&known::cayley_permutation(3, 3)));
        let skew = Tensor::from_fn(3, 3, |c| i64::from(c[0] == 0 && c[1] == 1));
        assert!(!has_symmetric_representative(&skew));
    }
}
