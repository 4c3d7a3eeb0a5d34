//! Bitmask view of lines and planes for index sets of at most 128 cells.

use crate::tensor::{all_indices, cell_count, offset_of, Lines, PlaneSpec};

#[derive(Clone, Debug)]
pub(crate) struct Geometry {
    pub lines: Vec<u128>,
    /// Line ids through each cell.
    pub through: Vec<Vec<usize>>,
    /// 2-dimensional planes with their free axes.
    pub planes: Vec<(u128, [usize; 2])>,
    pub hyperplanes: Vec<u128>,
    /// Cells of each hyperplane in row-major order of its free axes.
    pub hyper_cells: Vec<Vec<usize>>,
    /// Plane ids contained in each hyperplane.
    pub planes_in: Vec<Vec<usize>>,
    /// Cells at Hamming distance `dim - 1` from each cell.
    pub far: Vec<u128>,
}

fn mask(offsets: impl IntoIterator<Item = usize>) -> u128 {
    offsets.into_iter().fold(0u128, |m, o| m | 1 << o)
}

impl Geometry {
    pub fn new(dim: usize, order: usize) -> Self {
        let cells = cell_count(dim, order).filter(|&c| c <= 128).expect("at most 128 cells");
        let l = Lines::new(dim, order);
        let lines: Vec<u128> = l.iter().map(|c| mask(c.iter().copied())).collect();
        let through = (0..cells).map(|c| l.through(c).to_vec()).collect();

        let mut planes = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let others: Vec<usize> = (0..dim).filter(|&a| a != i && a != j).collect();
                for base in all_indices(others.len(), order) {
                    let fixed: Vec<(usize, usize)> = others.iter().copied().zip(base).collect();
                    let spec = PlaneSpec::new(dim, order, &fixed).expect("valid plane");
                    planes.push((mask(spec.offsets(order)), [i, j]));
                }
            }
        }
        let hyper_cells: Vec<Vec<usize>> = (0..dim)
            .flat_map(|a| (0..order).map(move |v| (a, v)))
            .map(|(a, v)| PlaneSpec::new(dim, order, &[(a, v)]).expect("valid").offsets(order))
            .collect();
        let hyperplanes: Vec<u128> = hyper_cells.iter().map(|c| mask(c.iter().copied())).collect();
        let planes_in = hyperplanes
            .iter()
            .map(|&h| (0..planes.len()).filter(|&p| planes[p].0 & !h == 0).collect())
            .collect();
        let idx: Vec<Vec<usize>> = all_indices(dim, order).collect();
        let far = idx
            .iter()
            .map(|a| {
                mask(idx.iter().filter(|b| a.iter().zip(b.iter()).filter(|(x, y)| x != y).count() + 1 == dim).map(|b| offset_of(b, order)))
            })
            .collect();
        Geometry {
            lines,
            through,
            planes,
            hyperplanes,
            hyper_cells,
            planes_in,
            far,
        }
    }

    /// Members known to be alone on some fully decided line, and members
    /// sharing some line with another member. `None` when a decided line
    /// is empty or the two sets meet.
    pub fn line_status(&self, s: u128, decided: u128) -> Option<(u128, u128)> {
        let mut iso = 0u128;
        let mut non = 0u128;
        for &l in &self.lines {
            let hit = s & l;
            match hit.count_ones() {
                0 if l & !decided == 0 => return None,
                1 if l & !decided == 0 => iso |= hit,
                0 | 1 => {}
                _ => non |= hit,
            }
        }
        (iso & non == 0).then_some((iso, non))
    }
}

/// The bits of `s` at `cells`, packed in that order.
pub(crate) fn gather(s: u128, cells: &[usize]) -> u128 {
    cells
        .iter()
        .enumerate()
        .fold(0u128, |m, (i, &c)| m | (s >> c & 1) << i)
}

/// Iterator over set bits.
pub(crate) fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}
