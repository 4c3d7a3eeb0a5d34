//! Vertices of the 3-dimensional polytope of order 4.
//!
//! A candidate support is split into four planes `P1..P4` along the first
//! axis with nondecreasing support sizes. `P1` is one of nine fixed
//! patterns, the rest range over all 7443 total-support patterns. After
//! each placement the partial support must satisfy (C1), stay within the
//! size budget and have independent incidence columns. Complete supports
//! must have total support in every other plane before certification.
//!
//! Each `(P1, P2)` pair is an independent work unit. With a checkpoint
//! directory, finished units are appended to `omega43-n<max>-p1-<i>.log`,
//! one line per unit: the `P2` mask in hex followed by the hex masks of
//! the vertex supports found. A rerun skips units already logged.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use itertools::Itertools;
use rayon::prelude::*;

use crate::linalg::IncrementalRank;
use crate::stochastic::SupportSet;
use crate::vertexcert::{certify_with, support_bound, Route};

use super::catalog::{first_planes_order4, transform_pattern, PlaneCatalog};
use super::geometry::{bits, gather, Geometry};
use super::{EnumerateError, VertexSet};

const DIM: usize = 3;
const ORDER: usize = 4;
const PLANE_CELLS: usize = 16;

#[derive(Clone, Debug)]
pub struct Omega43Options {
    /// Largest support size searched; the bound 37 gives the full
    /// enumeration.
    pub max_support: usize,
    /// Indices into [`first_planes_order4`].
    pub first_planes: Vec<usize>,
    /// Keep only supports whose plane sequence is least, comparing planes
    /// by size and then mask, among its images under permutations of the
    /// last three planes combined with relabelings of the last two axes
    /// fixing `P1`.
    pub symmetry_breaking: bool,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for Omega43Options {
    fn default() -> Self {
        Omega43Options {
            max_support: support_bound(DIM, ORDER),
            first_planes: (0..9).collect(),
            symmetry_breaking: true,
            checkpoint_dir: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Omega43Report {
    pub vertices: VertexSet,
    /// Work units run in this call (excluding those resumed from logs).
    pub units_run: usize,
    pub units_resumed: usize,
    pub nodes: u64,
    pub leaves: u64,
}

fn key(p: u32) -> (u32, u32) {
    (p.count_ones(), p)
}

struct Symmetry {
    /// Image position `q` holds the plane from position `source[q]`.
    source: [usize; ORDER],
    rows: [usize; ORDER],
    cols: [usize; ORDER],
    transpose: bool,
}

fn symmetries(first: u32) -> Vec<Symmetry> {
    let perms: Vec<Vec<usize>> = (0..ORDER).permutations(ORDER).collect();
    let mut out = Vec::new();
    for rows in &perms {
        for cols in &perms {
            for transpose in [false, true] {
                if transform_pattern(first, ORDER, rows, cols, transpose) != first {
                    continue;
                }
                for tail in (1..ORDER).permutations(ORDER - 1) {
                    let mut source = [0; ORDER];
                    source[1..].copy_from_slice(&tail);
                    let identity = source.iter().enumerate().all(|(i, &s)| i == s)
                        && rows.iter().enumerate().all(|(i, &r)| i == r)
                        && cols.iter().enumerate().all(|(i, &c)| i == c)
                        && !transpose;
                    if identity {
                        continue;
                    }
                    out.push(Symmetry {
                        source,
                        rows: rows.as_slice().try_into().expect("order 4"),
                        cols: cols.as_slice().try_into().expect("order 4"),
                        transpose,
                    });
                }
            }
        }
    }
    out
}

struct Search<'a> {
    geo: &'a Geometry,
    catalog: &'a PlaneCatalog,
    /// Catalog patterns sorted by size, then mask.
    by_size: &'a [u32],
    symmetries: &'a [Symmetry],
    max_support: usize,
    rank: IncrementalRank,
    placed: [u32; ORDER],
    found: BTreeSet<u128>,
    nodes: u64,
    leaves: u64,
}

impl Search<'_> {
    fn is_least(&self, pos: usize) -> bool {
        for g in self.symmetries {
            for q in 0..=pos {
                let from = g.source[q];
                if from > pos {
                    break;
                }
                let image = transform_pattern(self.placed[from], ORDER, &g.rows, &g.cols, g.transpose);
                match key(image).cmp(&key(self.placed[q])) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// Places `pattern` at `pos`; `None` if the result is pruned.
    fn try_place(&mut self, pos: usize, s: u128, size: usize, pattern: u32) -> Option<(u128, usize, usize)> {
        let add = pattern.count_ones() as usize;
        let remaining = ORDER - 1 - pos;
        if size + add * (1 + remaining) > self.max_support {
            return None;
        }
        self.placed[pos] = pattern;
        if !self.is_least(pos) {
            return None;
        }
        let shift = pos * PLANE_CELLS;
        let t = s | u128::from(pattern) << shift;
        let decided = (1u128 << (shift + PLANE_CELLS)) - 1;
        self.geo.line_status(t, decided)?;
        let mark = self.rank.checkpoint();
        let geo = self.geo;
        if !bits(u128::from(pattern) << shift).all(|c| self.rank.push_indicator(&geo.through[c])) {
            self.rank.rollback(mark);
            return None;
        }
        Some((t, size + add, mark))
    }

    fn descend(&mut self, pos: usize, s: u128, size: usize) {
        self.nodes += 1;
        if pos == ORDER {
            self.leaf(s);
            return;
        }
        let low = self.placed[pos - 1].count_ones();
        let start = self.by_size.partition_point(|p| p.count_ones() < low);
        for i in start..self.by_size.len() {
            let pattern = self.by_size[i];
            let add = pattern.count_ones() as usize;
            if size + add * (ORDER - pos) > self.max_support {
                break;
            }
            if let Some((t, n, mark)) = self.try_place(pos, s, size, pattern) {
                self.descend(pos + 1, t, n);
                self.rank.rollback(mark);
            }
        }
    }

    fn leaf(&mut self, s: u128) {
        self.leaves += 1;
        let planes_ok = self
            .geo
            .hyper_cells
            .iter()
            .all(|cells| self.catalog.contains(gather(s, cells) as u32));
        if !planes_ok {
            return;
        }
        let support = SupportSet::from_mask(DIM, ORDER, s);
        if certify_with(&support, Route::Corner).is_vertex() {
            self.found.insert(s);
        }
    }
}

struct Shared {
    geo: Geometry,
    catalog: PlaneCatalog,
    by_size: Vec<u32>,
}

impl Shared {
    fn new() -> Self {
        let catalog = PlaneCatalog::total_support(ORDER).expect("order 4 is cataloged");
        let mut by_size = catalog.patterns().to_vec();
        by_size.sort_by_key(|&p| key(p));
        Shared {
            geo: Geometry::new(DIM, ORDER),
            catalog,
            by_size,
        }
    }

    fn search<'a>(&'a self, symmetries: &'a [Symmetry], max_support: usize) -> Search<'a> {
        Search {
            geo: &self.geo,
            catalog: &self.catalog,
            by_size: &self.by_size,
            symmetries,
            max_support,
            rank: IncrementalRank::new(self.geo.lines.len()),
            placed: [0; ORDER],
            found: BTreeSet::new(),
            nodes: 0,
            leaves: 0,
        }
    }
}

struct UnitResult {
    p2: u32,
    found: BTreeSet<u128>,
    nodes: u64,
    leaves: u64,
}

fn run_unit(shared: &Shared, symmetries: &[Symmetry], max_support: usize, p1: u32, p2: u32) -> UnitResult {
    let mut search = shared.search(symmetries, max_support);
    let mut result = UnitResult {
        p2,
        found: BTreeSet::new(),
        nodes: 0,
        leaves: 0,
    };
    if let Some((s, n, _)) = search.try_place(0, 0, 0, p1) {
        if let Some((t, m, _)) = search.try_place(1, s, n, p2) {
            search.descend(2, t, m);
        }
    }
    result.found = search.found;
    result.nodes = search.nodes;
    result.leaves = search.leaves;
    result
}

/// Logs are keyed by the options that change what a unit finds.
fn log_path(dir: &Path, opts: &Omega43Options, first: usize) -> PathBuf {
    let sym = if opts.symmetry_breaking { "" } else { "-nosym" };
    dir.join(format!("omega43-n{}{sym}-p1-{first}.log", opts.max_support))
}

/// Units already logged: `P2` mask to found supports. Lines that do not
/// parse (a unit interrupted mid-write) are ignored and rerun.
fn read_log(path: &Path) -> Result<BTreeMap<u32, Vec<u128>>, EnumerateError> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(source) => {
            return Err(EnumerateError::Checkpoint {
                path: path.display().to_string(),
                source,
            })
        }
    };
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|source| EnumerateError::Checkpoint {
            path: path.display().to_string(),
            source,
        })?;
        let Some(body) = line.strip_suffix(" .") else {
            continue;
        };
        let mut fields = body.split(' ');
        let Some(Ok(p2)) = fields.next().map(|f| u32::from_str_radix(f, 16)) else {
            continue;
        };
        let masks: Result<Vec<u128>, _> = fields.map(|f| u128::from_str_radix(f, 16)).collect();
        if let Ok(masks) = masks {
            done.insert(p2, masks);
        }
    }
    Ok(done)
}

fn unit_line(r: &UnitResult) -> String {
    let mut line = format!("{:x}", r.p2);
    for m in &r.found {
        line.push_str(&format!(" {m:x}"));
    }
    line.push_str(" .\n");
    line
}

/// Runs the plane search for the chosen first planes.
pub fn search_omega_4_3(opts: &Omega43Options) -> Result<Omega43Report, EnumerateError> {
    let shared = Shared::new();
    let firsts = first_planes_order4();
    let mut report = Omega43Report::default();
    let mut supports: BTreeSet<u128> = BTreeSet::new();
    for &fi in &opts.first_planes {
        let p1 = *firsts.get(fi).ok_or(EnumerateError::Unsupported {
            order: ORDER,
            dim: DIM,
        })?;
        let syms = if opts.symmetry_breaking {
            symmetries(p1)
        } else {
            Vec::new()
        };
        let mut done = match &opts.checkpoint_dir {
            Some(dir) => read_log(&log_path(dir, opts, fi))?,
            None => BTreeMap::new(),
        };
        let low = p1.count_ones();
        let todo: Vec<u32> = shared
            .by_size
            .iter()
            .copied()
            .filter(|p| p.count_ones() >= low && !done.contains_key(p))
            .collect();
        report.units_resumed += done.len();
        let log = match &opts.checkpoint_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|source| EnumerateError::Checkpoint {
                    path: dir.display().to_string(),
                    source,
                })?;
                let path = log_path(dir, opts, fi);
                let f = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(|source| EnumerateError::Checkpoint {
                        path: path.display().to_string(),
                        source,
                    })?;
                Some((Mutex::new(f), path))
            }
            None => None,
        };
        let results: Result<Vec<UnitResult>, EnumerateError> = todo
            .par_iter()
            .map(|&p2| {
                let r = run_unit(&shared, &syms, opts.max_support, p1, p2);
                if let Some((f, path)) = &log {
                    let mut f = f.lock().expect("log writer poisoned");
                    f.write_all(unit_line(&r).as_bytes())
                        .and_then(|_| f.flush())
                        .map_err(|source| EnumerateError::Checkpoint {
                            path: path.display().to_string(),
                            source,
                        })?;
                }
                Ok(r)
            })
            .collect();
        for r in results? {
            report.units_run += 1;
            report.nodes += r.nodes;
            report.leaves += r.leaves;
            done.insert(r.p2, r.found.into_iter().collect());
        }
        for masks in done.into_values() {
            supports.extend(masks.into_iter().filter(|m| m.count_ones() as usize <= opts.max_support));
        }
    }
    let tensors: Vec<_> = supports
        .into_par_iter()
        .filter_map(|m| certify_with(&SupportSet::from_mask(DIM, ORDER, m), Route::Corner).tensor)
        .collect();
    for t in &tensors {
        report.vertices.insert(t);
    }
    Ok(report)
}

/// All vertex classes of the 3-dimensional polytope of order 4.
pub fn enumerate_omega_4_3() -> Result<VertexSet, EnumerateError> {
    Ok(search_omega_4_3(&Omega43Options::default())?.vertices)
}
