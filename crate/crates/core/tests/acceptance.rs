//! Acceptance checks, one PASS/FAIL line each.
//!
//! Every comparison is exact. Runtime limits are in the table below. Set
//! `BIRKHOFF_FULL_4_3=1` to run the complete 3-dimensional order-4
//! enumeration for check 5 instead of the bounded one; with
//! `BIRKHOFF_CHECKPOINT=<dir>` it resumes from earlier logs.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use birkhoff::constructions::{
    construction1, construction1_support, dot_product, dot_vertex, kronecker, kronecker_vertex, zero_sum_extend,
};
use birkhoff::enumerate::omega43::search_omega_4_3;
use birkhoff::enumerate::{algorithm1, distribution, enumerate_omega_3_4, HyperplaneStack, Key, Omega43Options};
use birkhoff::equivalence::{automorphism_order, canonical_form, group_order};
use birkhoff::known::{cayley_permutation, v};
use birkhoff::linalg::integer_rank;
use birkhoff::scalar::{int, ratio};
use birkhoff::stochastic::{is_permutation_tensor, is_polystochastic, SupportSet};
use birkhoff::vertexcert::{build_incidence, certify_with, find_zero_sum, Route, Verdict};
use birkhoff::{are_equivalent, certify, permanent, support, EquivalenceTransform, Index, Rational, Tensor};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{
    golden_classes, random_transform, SYMMETRIC_3_4, DELTA_COUNTS_3_4, DELTA_COUNTS_4_3, SUPPORT_COUNTS_3_4, SUPPORT_COUNTS_4_3,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_suite() -> Outcome {
    for g in golden_classes() {
        let s = support(&g.tensor);
        let cert = certify(&s);
        ensure(cert.is_vertex(), || format!("A{} is not certified", g.number))?;
        ensure(s.len() == g.support_size, || format!("N(A{}) = {}", g.number, s.len()))?;
        let per = permanent(&g.tensor);
        ensure(per == g.permanent, || format!("per(A{}) = {per}", g.number))?;
    }
    Ok("21 certified, N and per exact".into())
}

fn omega_3_4() -> Outcome {
    let classes = enumerate_omega_3_4().sorted();
    ensure(classes.len() == 21, || format!("{} classes", classes.len()))?;
    let sizes = distribution(&classes, Key::SupportSize);
    ensure(sizes == BTreeMap::from(SUPPORT_COUNTS_3_4), || format!("support sizes {sizes:?}"))?;
    let deltas = distribution(&classes, Key::DenominatorLcm);
    ensure(deltas == BTreeMap::from(DELTA_COUNTS_3_4), || format!("denominators {deltas:?}"))?;
    let golden = golden_classes();
    let found: BTreeSet<Vec<Rational>> = classes.iter().map(|c| c.tensor.entries().to_vec()).collect();
    let printed: BTreeSet<Vec<Rational>> = golden.iter().map(|g| canonical_form(&g.tensor).into_entries()).collect();
    ensure(found == printed, || "classes differ from the transcribed ones".into())?;
    let symmetric: BTreeSet<Vec<Rational>> = classes
        .iter()
        .filter(|c| c.symmetric)
        .map(|c| c.tensor.entries().to_vec())
        .collect();
    let expected: BTreeSet<Vec<Rational>> = SYMMETRIC_3_4
        .iter()
        .map(|&i| canonical_form(&golden[i - 1].tensor).into_entries())
        .collect();
    ensure(symmetric == expected, || format!("{} symmetric classes differ", symmetric.len()))?;
    Ok("21 classes, both tables, 6 symmetric".into())
}

fn omega_3_3() -> Outcome {
    let classes = algorithm1(&HyperplaneStack::polystochastic(3, 3).map_err(|e| e.to_string())?).vertices;
    ensure(classes.len() == 2, || format!("{} classes", classes.len()))?;
    ensure(classes.contains(&cayley_permutation(3, 3)) && classes.contains(&v()), || {
        "classes are not the permutation and V".into()
    })?;
    Ok("permutation and V".into())
}

fn omega_2_d() -> Outcome {
    let mut counts = Vec::new();
    for d in 3..=5 {
        let r = algorithm1(&HyperplaneStack::polystochastic(d, 2).map_err(|e| e.to_string())?);
        ensure(!r.vertices.is_empty(), || format!("no vertices for d={d}"))?;
        for c in r.vertices.sorted() {
            ensure(is_permutation_tensor(&c.tensor), || format!("non-permutation vertex for d={d}"))?;
        }
        counts.push(format!("d={}: {}", d, r.vertices.len()));
    }
    Ok(format!("all permutations ({})", counts.join(", ")))
}

fn omega_4_3() -> Outcome {
    let full = std::env::var("BIRKHOFF_FULL_4_3").is_ok_and(|v| v == "1");
    let opts = Omega43Options {
        max_support: if full { 37 } else { 29 },
        checkpoint_dir: std::env::var_os("BIRKHOFF_CHECKPOINT").map(Into::into),
        ..Default::default()
    };
    let classes = search_omega_4_3(&opts).map_err(|e| e.to_string())?.vertices.sorted();
    let sizes = distribution(&classes, Key::SupportSize);
    if full {
        let deltas = distribution(&classes, Key::DenominatorLcm);
        let symmetric = classes.iter().filter(|c| c.symmetric).count();
        let mut wrong = Vec::new();
        if classes.len() != 533 {
            wrong.push(format!("{} classes", classes.len()));
        }
        let printed = BTreeMap::from(SUPPORT_COUNTS_4_3);
        if sizes != printed {
            let diff: Vec<String> = printed
                .iter()
                .filter(|(n, c)| sizes.get(n) != Some(c))
                .map(|(n, c)| format!("N={n}: {} found, {c} printed", sizes.get(n).copied().unwrap_or(0)))
                .collect();
            wrong.push(format!("support sizes differ ({})", diff.join(", ")));
        }
        if deltas != BTreeMap::from(DELTA_COUNTS_4_3) {
            wrong.push(format!("denominators {deltas:?}"));
        }
        if symmetric != 11 {
            wrong.push(format!("{symmetric} symmetric classes"));
        }
        ensure(wrong.is_empty(), || {
            format!("{}; {} classes, {symmetric} symmetric", wrong.join("; "), classes.len())
        })?;
        Ok("533 classes, both tables, 11 symmetric".into())
    } else {
        let expected: BTreeMap<u64, usize> = SUPPORT_COUNTS_4_3.iter().copied().filter(|&(n, _)| n <= 29).collect();
        ensure(sizes == expected, || format!("support sizes {sizes:?}"))?;
        Ok(format!("bounded run N <= 29: {sizes:?}"))
    }
}

fn constructions() -> Outcome {
    let r = kronecker_vertex(&cayley_permutation(3, 2), &v()).map_err(|e| e.to_string())?;
    ensure(r.is_vertex() && r.tensor.order() == 6, || "P (x) V is not a vertex".into())?;
    let vv = kronecker(&v(), &v()).map_err(|e| e.to_string())?;
    ensure(!certify(&support(&vv)).is_vertex(), || "V (x) V certified".into())?;
    let dot = dot_product(&v(), &v()).map_err(|e| e.to_string())?;
    ensure(!certify(&support(&dot)).is_vertex(), || "V . V certified".into())?;
    let r = dot_vertex(&cayley_permutation(3, 3), &v()).map_err(|e| e.to_string())?;
    ensure(r.is_vertex() && r.tensor.dim() == 4, || "P . V is not a vertex".into())?;
    let matches = golden_classes()
        .iter()
        .filter(|g| are_equivalent(&g.tensor, &r.tensor).unwrap_or(false))
        .count();
    ensure(matches == 1, || format!("P . V matches {matches} classes"))?;
    Ok("P(x)V vertex, V(x)V and V.V not, P.V a known class".into())
}

fn construction_1() -> Outcome {
    let allowed = [Rational::zero(), ratio(1, 3), ratio(2, 3), Rational::one()];
    for d in 2..=8 {
        let r = construction1(d).map_err(|e| e.to_string())?;
        let t = &r.tensor;
        ensure(t.is_symmetric() && is_polystochastic(t), || format!("d={d} not symmetric polystochastic"))?;
        ensure(t.entries().iter().all(|x| allowed.contains(x)), || format!("d={d} entries"))?;
        ensure(r.support_size == construction1_support(d), || format!("d={d} N = {}", r.support_size))?;
        ensure(r.is_vertex() == (d >= 4), || format!("d={d} verdict {:?}", r.certified.verdict))?;
    }
    let a7 = &golden_classes()[6].tensor;
    ensure(are_equivalent(&construction1(4).map_err(|e| e.to_string())?.tensor, a7).unwrap_or(false), || {
        "d=4 is not A7".into()
    })?;
    Ok("d=4..8 vertices, d=2,3 not, d=4 ~ A7".into())
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let golden = golden_classes();
    for g in &golden {
        for _ in 0..100 {
            let h = random_transform(&mut rng, 4, 3).apply(&g.tensor).map_err(|e| e.to_string())?;
            ensure(permanent(&h) == g.permanent, || format!("permanent of A{} moved", g.number))?;
            ensure(certify(&support(&h)).tensor.as_ref() == Some(&h), || format!("A{} image", g.number))?;
        }
    }
    // orbit-stabilizer, orbit by brute force
    let group = group_order(3, 3) as usize;
    let mut samples = vec![v(), cayley_permutation(3, 3)];
    for _ in 0..6 {
        samples.push(Tensor::from_fn(3, 3, |_| int(rng.gen_range(0..3))));
    }
    for t in &samples {
        let orbit: BTreeSet<Vec<Rational>> = EquivalenceTransform::all(3, 3)
            .map(|g| g.apply(t).expect("shape").into_entries())
            .collect();
        ensure(orbit.len() * automorphism_order(t) == group, || "orbit-stabilizer".into())?;
    }
    for _ in 0..200 {
        let mask: u128 = rng.gen_range(1..1u128 << 27);
        let s = SupportSet::from_mask(3, 3, mask);
        let m = build_incidence(&s).map_err(|e| e.to_string())?;
        let m = m.matrix();
        let kernel = m.kernel_basis();
        ensure(m.rank() + kernel.len() == m.cols(), || "rank + nullity".into())?;
        let columns: Vec<Vec<i64>> = (0..m.cols())
            .map(|c| m.column(c).iter().map(|x| i64::from(!x.is_zero())).collect())
            .collect();
        ensure(integer_rank(&columns) == m.rank(), || "integer and field rank differ".into())?;
    }
    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let n = if d == 4 { 3 } else { rng.gen_range(2..=4) };
        let sub = Tensor::from_fn(d, n - 1, |_| int(rng.gen_range(-5..=5)));
        let anchor = Index::new((0..d).map(|_| rng.gen_range(0..n)).collect());
        let t = zero_sum_extend(&sub, &anchor, d, n).map_err(|e| e.to_string())?;
        ensure(t.line_sums().iter().all(Zero::is_zero), || "extension is not zero-sum".into())?;
        ensure(t.delete_hyperplanes(&anchor).map_err(|e| e.to_string())? == sub, || "round trip".into())?;
    }
    for g in &golden {
        let s = support(&g.tensor);
        let cert = certify_with(&s, Route::Incidence);
        ensure(cert.is_vertex() && find_zero_sum(&s).is_none(), || format!("A{} witness", g.number))?;
        for extra in (0..81).filter(|o| !s.contains(*o)).take(3) {
            let mut cells = s.offsets().to_vec();
            cells.push(extra);
            let t = SupportSet::from_offsets(4, 3, cells).map_err(|e| e.to_string())?;
            let rank_deficient = certify_with(&t, Route::Incidence).verdict == Verdict::RankDeficient;
            ensure(rank_deficient == find_zero_sum(&t).is_some(), || format!("A{} + {extra}", g.number))?;
        }
    }
    Ok("invariance x2100, orbit-stabilizer, rank x200, extend x100, witnesses".into())
}

fn uniqueness() -> Outcome {
    for g in golden_classes() {
        let s = support(&g.tensor);
        for route in [Route::Incidence, Route::Corner] {
            let cert = certify_with(&s, route);
            ensure(cert.tensor.as_ref() == Some(&g.tensor), || format!("A{} via {route:?}", g.number))?;
        }
    }
    Ok("both routes reproduce all 21".into())
}

struct Check {
    id: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let checks = [
        Check { id: "1 golden suite", limit: Duration::from_secs(10), run: golden_suite },
        Check { id: "2 order 3 dim 4 enumeration", limit: Duration::from_secs(1800), run: omega_3_4 },
        Check { id: "3 order 3 dim 3 enumeration", limit: Duration::from_secs(60), run: omega_3_3 },
        Check { id: "4 order 2 dims 3..5", limit: Duration::from_secs(60), run: omega_2_d },
        Check { id: "5 order 4 dim 3 enumeration", limit: Duration::from_secs(4 * 3600), run: omega_4_3 },
        Check { id: "6 product constructions", limit: Duration::from_secs(60), run: constructions },
        Check { id: "7 symmetric construction", limit: Duration::from_secs(600), run: construction_1 },
        Check { id: "8 property suites", limit: Duration::from_secs(600), run: properties },
        Check { id: "9 uniqueness from support", limit: Duration::from_secs(60), run: uniqueness },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &checks {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.starts_with(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {:?}", c.limit)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {} ({:.1}s): {detail}", c.id, took.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
