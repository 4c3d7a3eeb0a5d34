//! Vertices of the 4-dimensional polytope of order 3.
//!
//! A candidate support is split into nine parallel planes `P1..P9` with
//! free axes 2 and 3, placed in row-major order of the first two
//! coordinates. `P1` has the fewest ones and is one of four fixed
//! patterns; the others come from the classes with at least five ones.
//! Line conditions, the support-level claims and incremental rank are
//! checked after every placement. The permutation and the 49-support
//! vertex fall outside the claims' hypotheses and are seeded.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::known::{cayley_permutation, two_plane_vertex};
use crate::linalg::IncrementalRank;
use crate::stochastic::SupportSet;
use crate::vertexcert::{certify_with, support_bound, Route};

use super::catalog::{planes_order3, transform_pattern, PlaneCatalog};
use super::generic::{algorithm1, HyperplaneStack};
use super::geometry::{bits, gather, Geometry};
use super::query::SupportQuery;
use super::VertexSet;

const DIM: usize = 4;
const ORDER: usize = 3;
const PLANE_CELLS: usize = 9;

/// Which claims prune the search. Each is a necessary condition on the
/// support of a vertex other than the two seeded ones; a `1` entry is a
/// member alone on one (hence every) line through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claims {
    /// No hyperplane consists of `1` entries.
    pub hyperplane: bool,
    /// No two `1` entries agree in exactly one coordinate.
    pub distance_three: bool,
    /// No hyperplane holds two all-`1` planes of different directions.
    pub two_planes: bool,
    /// A plane with two `1` entries has no other kind of member.
    pub two_ones: bool,
    /// Two all-`1` planes of complementary directions never meet outside
    /// the support.
    pub crossing: bool,
}

impl Claims {
    pub const ALL: Claims = Claims {
        hyperplane: true,
        distance_three: true,
        two_planes: true,
        two_ones: true,
        crossing: true,
    };
    pub const NONE: Claims = Claims {
        hyperplane: false,
        distance_three: false,
        two_planes: false,
        two_ones: false,
        crossing: false,
    };
}

impl Default for Claims {
    fn default() -> Self {
        Claims::ALL
    }
}

#[derive(Clone, Debug)]
pub struct Omega34Options {
    pub claims: Claims,
    /// Drop branches whose partial incidence columns are dependent.
    pub rank_pruning: bool,
    /// Drop branches with a completed hyperplane that is not the support
    /// of a polystochastic tensor of dimension 3.
    pub hyperplane_pruning: bool,
    /// Keep only supports whose plane sequence is least among its images
    /// under the symmetries fixing the first plane: swapping the last two
    /// values of either grid coordinate, transposing the grid, and the
    /// relabelings of the last two axes that fix `P1`.
    pub symmetry_breaking: bool,
    /// Which of the four first planes to explore (indices into
    /// [`planes_order3`]).
    pub first_planes: Vec<usize>,
    /// Add the permutation and the 49-support vertex.
    pub seeds: bool,
}

impl Default for Omega34Options {
    fn default() -> Self {
        Omega34Options {
            claims: Claims::ALL,
            rank_pruning: true,
            hyperplane_pruning: true,
            symmetry_breaking: true,
            first_planes: vec![0, 1, 2, 3],
            seeds: true,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Omega34Report {
    pub vertices: VertexSet,
    /// Partial supports visited.
    pub nodes: u64,
    /// Complete supports that reached certification.
    pub leaves: u64,
}

/// `false` when the partial support `s`, with cells `decided` fixed, cannot
/// extend to the support of a vertex other than the seeded two. Also
/// `false` when a decided line is empty or (C1) already fails.
pub fn claims_filter_3_4(s: u128, decided: u128, claims: Claims) -> bool {
    let geo = Geometry::new(DIM, ORDER);
    match geo.line_status(s, decided) {
        Some((iso, non)) => claims_hold(&geo, claims, s, decided, iso, non),
        None => false,
    }
}

fn claims_hold(geo: &Geometry, claims: Claims, s: u128, decided: u128, iso: u128, non: u128) -> bool {
    if claims.distance_three && bits(iso).any(|c| geo.far[c] & iso != 0) {
        return false;
    }
    if claims.two_ones
        && geo
            .planes
            .iter()
            .any(|&(p, _)| (p & iso).count_ones() >= 2 && p & non != 0)
    {
        return false;
    }
    let all_ones = |m: u128| m & !decided == 0 && m & s != 0 && m & s & !iso == 0;
    if claims.hyperplane && geo.hyperplanes.iter().any(|&h| all_ones(h)) {
        return false;
    }
    if !(claims.two_planes || claims.crossing) {
        return true;
    }
    let ones: Vec<usize> = (0..geo.planes.len()).filter(|&p| all_ones(geo.planes[p].0)).collect();
    if claims.two_planes {
        for inside in &geo.planes_in {
            let dirs: Vec<[usize; 2]> = inside.iter().filter(|p| ones.contains(p)).map(|&p| geo.planes[p].1).collect();
            if dirs.iter().any(|d| *d != dirs[0]) {
                return false;
            }
        }
    }
    if claims.crossing {
        for (i, &a) in ones.iter().enumerate() {
            for &b in &ones[i + 1..] {
                let (pa, da) = geo.planes[a];
                let (pb, db) = geo.planes[b];
                let disjoint = da.iter().all(|x| !db.contains(x));
                if disjoint && pa & pb & s == 0 {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'a> {
    geo: &'a Geometry,
    opts: &'a Omega34Options,
    /// Admissible patterns per position, given the first plane.
    allowed: Vec<Vec<u32>>,
    min_rest: usize,
    bound: usize,
    rank: IncrementalRank,
    cubes: &'a SupportQuery,
    symmetries: Vec<Symmetry>,
    placed: [u32; PLANE_CELLS],
    seen: HashSet<u128>,
    report: Omega34Report,
}

impl Search<'_> {
    fn place(&mut self, pos: usize, s: u128, size: usize) {
        self.report.nodes += 1;
        if pos == PLANE_CELLS {
            self.leaf(s);
            return;
        }
        let shift = pos * PLANE_CELLS;
        let decided = (1u128 << (shift + PLANE_CELLS)) - 1;
        let remaining = PLANE_CELLS - 1 - pos;
        for i in 0..self.allowed[pos].len() {
            let pattern = self.allowed[pos][i];
            let add = pattern.count_ones() as usize;
            if size + add + remaining * self.min_rest > self.bound {
                continue;
            }
            self.placed[pos] = pattern;
            if !self.is_least(pos) {
                continue;
            }
            let t = s | u128::from(pattern) << shift;
            let Some((iso, non)) = self.geo.line_status(t, decided) else {
                continue;
            };
            if !claims_hold(self.geo, self.opts.claims, t, decided, iso, non) {
                continue;
            }
            if self.opts.hyperplane_pruning && !self.hyperplanes_ok(t, decided, shift) {
                continue;
            }
            let mark = self.rank.checkpoint();
            if self.opts.rank_pruning {
                let geo = self.geo;
                let independent = bits(u128::from(pattern) << shift).all(|c| self.rank.push_indicator(&geo.through[c]));
                if !independent {
                    self.rank.rollback(mark);
                    continue;
                }
            }
            self.place(pos + 1, t, size + add);
            self.rank.rollback(mark);
        }
    }

    /// No symmetry maps the decided prefix below itself.
    fn is_least(&self, pos: usize) -> bool {
        for g in &self.symmetries {
            for q in 0..=pos {
                let from = g.source[q];
                if from > pos {
                    break;
                }
                let image = u32::from(g.table[self.placed[from] as usize]);
                match image.cmp(&self.placed[q]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// Hyperplanes completed by the plane at `shift` are admissible.
    fn hyperplanes_ok(&self, s: u128, decided: u128, shift: usize) -> bool {
        let before = (1u128 << shift) - 1;
        self.geo.hyperplanes.iter().zip(&self.geo.hyper_cells).all(|(&h, cells)| {
            let fresh = h & !decided == 0 && h & !before != 0;
            !fresh || self.cubes.admits(gather(s, cells))
        })
    }

    fn leaf(&mut self, s: u128) {
        if !self.seen.insert(s) {
            return;
        }
        self.report.leaves += 1;
        let support = SupportSet::from_mask(DIM, ORDER, s);
        if let Some(t) = certify_with(&support, Route::Corner).tensor {
            self.report.vertices.insert(&t);
        }
    }
}

/// A symmetry of the search: the image sequence has at position `q` the
/// pattern from position `source[q]`, relabeled through `table`.
struct Symmetry {
    source: [usize; PLANE_CELLS],
    table: Vec<u16>,
}

/// Non-identity symmetries fixing the first plane.
fn symmetries(first: u32) -> Vec<Symmetry> {
    let swaps = [[0, 1, 2], [0, 2, 1]];
    let perms: Vec<Vec<usize>> = itertools::Itertools::permutations(0..ORDER, ORDER).collect();
    let mut out = Vec::new();
    for rows in &perms {
        for cols in &perms {
            for transpose in [false, true] {
                if transform_pattern(first, ORDER, rows, cols, transpose) != first {
                    continue;
                }
                let table: Vec<u16> = (0u32..1 << PLANE_CELLS)
                    .map(|m| transform_pattern(m, ORDER, rows, cols, transpose) as u16)
                    .collect();
                for grid_rows in &swaps {
                    for grid_cols in &swaps {
                        for grid_transpose in [false, true] {
                            let trivial = table.iter().enumerate().all(|(m, &t)| m == t as usize)
                                && grid_rows == &swaps[0]
                                && grid_cols == &swaps[0]
                                && !grid_transpose;
                            if trivial {
                                continue;
                            }
                            let mut source = [0; PLANE_CELLS];
                            for pos in 0..PLANE_CELLS {
                                let (r, c) = (grid_rows[pos / ORDER], grid_cols[pos % ORDER]);
                                let (r, c) = if grid_transpose { (c, r) } else { (r, c) };
                                source[r * ORDER + c] = pos;
                            }
                            out.push(Symmetry {
                                source,
                                table: table.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Admissible patterns at each position for the given first plane.
fn allowed_patterns(first: usize, catalog: &PlaneCatalog) -> Vec<Vec<u32>> {
    let types = planes_order3();
    let perm_class = catalog.orbit(types[0]);
    let block_class = catalog.orbit(types[1]);
    let n1 = types[first].count_ones();
    let rest: Vec<u32> = catalog
        .patterns()
        .iter()
        .copied()
        .filter(|p| !perm_class.contains(p) && p.count_ones() >= n1)
        .collect();
    let without_block: Vec<u32> = rest.iter().copied().filter(|p| !block_class.contains(p)).collect();
    (0..PLANE_CELLS)
        .map(|pos| match (first, pos) {
            (_, 0) => vec![types[first]],
            (0, _) => without_block.clone(),
            // positions sharing a row or column of the 3x3 grid with P1
            (1, 1 | 2 | 3 | 6) => without_block.clone(),
            _ => rest.clone(),
        })
        .collect()
}

fn search_first(
    first: usize,
    geo: &Geometry,
    catalog: &PlaneCatalog,
    cubes: &SupportQuery,
    opts: &Omega34Options,
) -> Omega34Report {
    let allowed = allowed_patterns(first, catalog);
    let min_rest = allowed[1..]
        .iter()
        .flat_map(|v| v.iter().map(|p| p.count_ones() as usize))
        .min()
        .unwrap_or(0);
    let mut search = Search {
        geo,
        opts,
        allowed,
        min_rest,
        bound: support_bound(DIM, ORDER),
        rank: IncrementalRank::new(geo.lines.len()),
        cubes,
        symmetries: if opts.symmetry_breaking {
            symmetries(planes_order3()[first])
        } else {
            Vec::new()
        },
        placed: [0; PLANE_CELLS],
        seen: HashSet::new(),
        report: Omega34Report::default(),
    };
    search.place(0, 0, 0);
    search.report
}

/// Runs the plane search with the given options.
pub fn search_omega_3_4(opts: &Omega34Options) -> Omega34Report {
    let geo = Geometry::new(DIM, ORDER);
    let catalog = PlaneCatalog::total_support(ORDER).expect("order 3 is cataloged");
    let cube_classes = algorithm1(&HyperplaneStack::polystochastic(DIM - 1, ORDER).expect("supported")).vertices;
    let cubes = SupportQuery::from_classes(DIM - 1, ORDER, cube_classes.sorted().iter().map(|c| &c.tensor))
        .expect("27 cells");
    let parts: Vec<Omega34Report> = opts
        .first_planes
        .par_iter()
        .map(|&first| search_first(first, &geo, &catalog, &cubes, opts))
        .collect();
    let mut total = Omega34Report::default();
    if opts.seeds {
        total.vertices.insert(&cayley_permutation(DIM, ORDER));
        total.vertices.insert(&two_plane_vertex());
    }
    for p in parts {
        total.nodes += p.nodes;
        total.leaves += p.leaves;
        total.vertices.merge(p.vertices);
    }
    total
}

/// All vertex classes of the 4-dimensional polytope of order 3.
pub fn enumerate_omega_3_4() -> VertexSet {
    search_omega_3_4(&Omega34Options::default()).vertices
}
