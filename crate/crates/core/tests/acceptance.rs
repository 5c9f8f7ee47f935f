//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line straight to stdout, so the lines appear even when
//! output capture is on.

mod common;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::sync::Arc;

use common::exprgen::{arb_expr, interpret, same, DOMAIN_ERRORS, GOLDEN};
use common::spec_path;
use heatgraph::covering::{
    cyclic_cover, diag_sheet_check, fiber_sum, fiber_sum_residual, lambda0_compare, line_over_cycle,
    mass_deficit_compare, product_cover, CoverFactor, CoveringMap, Sheets,
};
use heatgraph::curvature::{bakry_emery_bound, build_exact_kappa, build_feller_counterexample, gamma};
use heatgraph::expr::parse;
use heatgraph::feller::{certificate_v, comparison_w, series_inner_degree, series_nonfeller, SeriesVerdict};
use heatgraph::graph::{
    ball, sphere_profile, BirthDeath, Cycle, DirichletDomain, FiniteGraph, Graph, GraphOracle, Lattice, Line,
    ProductWeights, Sequence, VertexId,
};
use heatgraph::heat::{
    capacity, dirichlet_heat_kernel, green, heat_kernel, semigroup_residual, RadiusSchedule,
};
use heatgraph::metric::{davies_table, degree_metric, jump_size};
use nalgebra::DMatrix;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!("{} criterion {id:>2} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn v(x: i64) -> VertexId {
    VertexId::scalar(x)
}

/// Heat kernel of the standard cycle `C_n` by its Fourier series.
fn cycle_kernel(n: usize, t: f64, d: i64) -> f64 {
    (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            (-t * (2.0 - 2.0 * theta.cos())).exp() * (theta * d as f64).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// `e^{-x} I_n(x)` by its power series.
fn scaled_bessel(n: u32, x: f64) -> f64 {
    let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = 0.0;
    for k in 0..200u32 {
        sum += term;
        term *= (x / 2.0).powi(2) / (f64::from(k + 1) * f64::from(k + 1 + n));
    }
    sum * (-x).exp()
}

fn base_vertices(c: &CoveringMap) -> Vec<VertexId> {
    c.base.finite_vertices().expect("finite base")
}

#[test]
fn criterion_01_closed_form_kernels() {
    let k2 = FiniteGraph::from_edges(&[1.0, 1.0], &[(0, 1, 1.0)]).unwrap();
    let c3 = Cycle::standard(3).unwrap();
    let sched = RadiusSchedule::up_to(4);
    let mut worst: f64 = 0.0;
    for t in [0.1f64, 1.0, 10.0] {
        let cases: [(&dyn Graph, i64, f64); 4] = [
            (&k2, 0, (1.0 + (-2.0 * t).exp()) / 2.0),
            (&k2, 1, (1.0 - (-2.0 * t).exp()) / 2.0),
            (&c3, 0, (1.0 + 2.0 * (-3.0 * t).exp()) / 3.0),
            (&c3, 1, (1.0 - (-3.0 * t).exp()) / 3.0),
        ];
        for (g, y, exact) in cases {
            let p = heat_kernel(g, &v(0), &v(y), t, 1e-12, &sched).unwrap();
            assert!(p.estimate.exact);
            worst = worst.max((p.estimate.last().unwrap() - exact).abs());
        }
    }
    report(1, "closed-form kernels", worst < 1e-10, format!("max error {worst:.3e}"));
}

/// Uniform on `(0, 2]`.
fn weight(rng: &mut ChaCha8Rng) -> f64 {
    2.0 - 2.0 * rng.gen::<f64>()
}

/// Connected graph on at most 12 vertices with `b, m` in `(0, 2]`: a random
/// spanning tree plus random chords.
fn random_graph(rng: &mut ChaCha8Rng) -> FiniteGraph {
    let n = rng.gen_range(2..=12);
    let measure: Vec<f64> = (0..n).map(|_| weight(rng)).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i, weight(rng)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) && rng.gen_bool(0.25) {
                edges.push((i, j, weight(rng)));
            }
        }
    }
    FiniteGraph::from_edges(&measure, &edges).unwrap()
}

/// `p_t(x, y) = exp(-tL)[x, y]/m(y)` with `L = M^{-1}(D - B)`, via Padé.
fn oracle_kernel(g: &FiniteGraph, t: f64) -> DMatrix<f64> {
    let n = g.len();
    let mut lap = DMatrix::zeros(n, n);
    for i in 0..n {
        for &(j, b) in g.arcs(i) {
            if i != j {
                lap[(i, i)] += b / g.measure_at(i);
                lap[(i, j)] -= b / g.measure_at(i);
            }
        }
    }
    let e = (lap * -t).exp();
    DMatrix::from_fn(n, n, |i, j| e[(i, j)] / g.measure_at(j))
}

#[test]
fn criterion_02_semigroup_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut oracle_gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let g = random_graph(&mut rng);
        let d = DirichletDomain::whole(&g).unwrap();
        let (s, t) = (rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0));
        worst = worst.max(semigroup_residual(&d, s, t).unwrap());
        let k = dirichlet_heat_kernel(&d, t).unwrap();
        let o = oracle_kernel(&g, t);
        for (i, x) in g.ids().iter().enumerate() {
            for (j, y) in g.ids().iter().enumerate() {
                oracle_gap = oracle_gap.max((k.get(x, y) - o[(i, j)]).abs() / (1.0 + o[(i, j)].abs()));
            }
        }
    }
    let pass = worst < 1e-8 && oracle_gap < 1e-9;
    report(2, "semigroup property", pass, format!("max residual {worst:.3e}, max gap to Pade exponential {oracle_gap:.3e}"));
}

#[test]
fn criterion_03_fiber_sum_finite_sheets() {
    let covers = [
        cyclic_cover(9, 3).unwrap(),
        cyclic_cover(12, 3).unwrap(),
        product_cover(
            vec![CoverFactor::Cover(cyclic_cover(9, 3).unwrap()), CoverFactor::Cover(cyclic_cover(9, 3).unwrap())],
            ProductWeights::Laplacian,
        )
        .unwrap(),
    ];
    let sched = RadiusSchedule::up_to(24);
    let (mut worst, mut oracle_gap): (f64, f64) = (0.0, 0.0);
    let mut pairs = 0;
    for c in &covers {
        let verts = base_vertices(c);
        for t in [0.1, 1.0] {
            for x in &verts {
                for y in &verts {
                    let f = fiber_sum_residual(c, x, y, t, 1e-12, &sched).unwrap();
                    worst = worst.max(f.last_residual().abs());
                    let diff = |i: usize| (x.coords()[i] - y.coords()[i]).rem_euclid(3);
                    let closed: f64 = (0..x.arity()).map(|i| cycle_kernel(3, t, diff(i))).product();
                    oracle_gap = oracle_gap.max((f.sums.last().unwrap() - closed).abs());
                    pairs += 1;
                }
            }
        }
    }
    let pass = worst < 1e-9 && oracle_gap < 1e-9;
    report(3, "fiber sums, finite sheets", pass, format!("{pairs} cases, max residual {worst:.3e}, max gap to Fourier series {oracle_gap:.3e}"));
}

#[test]
fn criterion_04_fiber_sum_infinite_sheets() {
    let c = line_over_cycle(3).unwrap();
    let f = fiber_sum_residual(&c, &v(0), &v(0), 1.0, 1e-14, &RadiusSchedule::up_to(20)).unwrap();
    let closed = (1.0 + 2.0 * (-3f64).exp()) / 3.0;
    let at20 = f.sums.radii.iter().position(|&r| r == 20).map(|i| f.sums.values[i]);
    let bessel: f64 = scaled_bessel(0, 2.0) + 2.0 * (1..20).map(|k| scaled_bessel(3 * k, 2.0)).sum::<f64>();
    let increasing = f.sums.values.windows(2).all(|w| w[1] >= w[0]);
    let err = at20.map_or(f64::INFINITY, |s| (s - closed).abs());
    let pass = err < 1e-6 && increasing && (bessel - closed).abs() < 1e-14;
    report(
        4,
        "fiber sums, infinite sheets",
        pass,
        format!("partial sums {:?}, error at R=20 {err:.3e}, increasing {increasing}", f.sums.values),
    );
}

#[test]
fn criterion_05_sheet_inequality() {
    let c = cyclic_cover(9, 3).unwrap();
    let sched = RadiusSchedule::up_to(8);
    let mut lowest = f64::INFINITY;
    let mut oracle_gap: f64 = 0.0;
    for t in [0.25, 1.0, 4.0] {
        let s = diag_sheet_check(&c, &v(0), t, 1e-12, &sched).unwrap();
        lowest = lowest.min(s.residual);
        oracle_gap = oracle_gap.max((s.residual - (3.0 * cycle_kernel(9, t, 0) - cycle_kernel(3, t, 0))).abs());
    }
    let pass = lowest >= -1e-10 && oracle_gap < 1e-12;
    report(5, "sheet inequality", pass, format!("min 3p~ - p = {lowest:.6e}, gap to Fourier series {oracle_gap:.3e}"));
}

#[test]
fn criterion_06_lambda0_comparison() {
    let covers = vec![
        cyclic_cover(9, 3).unwrap(),
        cyclic_cover(12, 3).unwrap(),
        cyclic_cover(12, 4).unwrap(),
        line_over_cycle(3).unwrap(),
        line_over_cycle(4).unwrap(),
        product_cover(
            vec![CoverFactor::Cover(cyclic_cover(9, 3).unwrap()), CoverFactor::Cover(cyclic_cover(9, 3).unwrap())],
            ProductWeights::Laplacian,
        )
        .unwrap(),
        product_cover(
            vec![CoverFactor::Cover(line_over_cycle(3).unwrap()), CoverFactor::Cover(cyclic_cover(9, 3).unwrap())],
            ProductWeights::Laplacian,
        )
        .unwrap(),
    ];
    let sched = RadiusSchedule::up_to(24);
    let mut pass = true;
    let mut details = Vec::new();
    for c in &covers {
        let cmp = lambda0_compare(c, 1e-8, &sched).unwrap();
        let base = cmp.base.best().unwrap();
        let cover = cmp.cover.best().unwrap();
        let ok = cover >= base - 1e-8 && (c.sheets() == Sheets::Infinite || (cover - base).abs() < 1e-8);
        pass &= ok && cmp.holds == ok;
        details.push(format!("{} gap {:.2e}", c.name(), cmp.gap));
    }
    // Dirichlet path eigenvalues on the cover Z.
    let z = lambda0_compare(&covers[3], 1e-8, &sched).unwrap();
    let path_gap = z
        .cover
        .radii
        .iter()
        .zip(&z.cover.values)
        .map(|(&r, &l)| (l - 2.0 * (1.0 - (PI / (2.0 * r as f64 + 2.0)).cos())).abs())
        .fold(0.0, f64::max);
    pass &= path_gap < 1e-12;
    report(6, "lambda0 comparison", pass, format!("{}; Z vs path eigenvalues {path_gap:.2e}", details.join(", ")));
}

#[test]
fn criterion_07_stochastic_incompleteness_probe() {
    let chain: GraphOracle = Arc::new(BirthDeath::new(Sequence::parse("4^r").unwrap(), 1.0));
    let c = product_cover(
        vec![CoverFactor::Identity(chain), CoverFactor::Cover(line_over_cycle(3).unwrap())],
        ProductWeights::Laplacian,
    )
    .unwrap();
    let cmp = mass_deficit_compare(&c, &c.cover.root(), 1.0, 1e-8, &RadiusSchedule::up_to(20)).unwrap();
    let (db, dc) = (cmp.base.deficit(), cmp.cover.deficit());
    // 40-digit eigendecomposition of the base truncation at R = 20.
    let base_at20 = *cmp.base.estimate.values.last().unwrap();
    let oracle_gap = (base_at20 - 0.636_583_523_773_457_6).abs();
    let pass = cmp.difference < 1e-3 && db > 1e-3 && dc > 1e-3 && oracle_gap < 1e-10;
    report(
        7,
        "stochastic incompleteness on base and cover",
        pass,
        format!("deficits {db:.6e} ({}) and {dc:.6e} ({}), difference {:.3e}, base mass gap to oracle {oracle_gap:.2e}", cmp.base.verdict, cmp.cover.verdict, cmp.difference),
    );
}

#[test]
fn criterion_08_feller_criteria() {
    let linear = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
    let factorial = {
        let m = Sequence::parse("1/fact(r)^2").unwrap();
        BirthDeath::new(m.clone(), m)
    };
    let inner = series_inner_degree(&linear, &v(0), 100).unwrap();
    let terms_exact = inner.radii.iter().zip(&inner.terms).all(|(&r, &t)| (t - 1.0 / r as f64).abs() < 1e-15);
    let nonfeller = series_nonfeller(&factorial, &v(0), 60).unwrap();

    let profile = |g: &BirthDeath, r: usize| sphere_profile(g, &v(0), r).unwrap();
    let cert = certificate_v(|r| profile(&linear, r).inner_max, -1.0, 99).unwrap();
    let cert_exact = cert.values.iter().enumerate().all(|(r, &x)| (x - 1.0 / (r as f64 + 1.0)).abs() < 1e-15);
    let v99 = cert.values[99];
    let w = comparison_w(|r| profile(&factorial, r).degree_max, |r| profile(&factorial, r).inner_min, -1.0, 1.0, 50).unwrap();
    let w_min = w.values.iter().copied().fold(f64::INFINITY, f64::min);

    let checks = [
        inner.verdict == SeriesVerdict::DivergesSuspected && terms_exact,
        nonfeller.verdict == SeriesVerdict::ConvergesSuspected,
        v99 < 0.01 && cert_exact,
        w_min > 0.5,
    ];
    report(
        8,
        "Feller criteria separation",
        checks.iter().all(|&c| c),
        format!(
            "sum 1/D_- {}, nonfeller series {}, v(99) = {v99:?} (< 0.01: {}), min w on r <= 50 = {w_min:.6} (> 0.5: {})",
            inner.verdict, nonfeller.verdict, checks[2], checks[3]
        ),
    );
}

#[test]
fn criterion_09_heat_kernel_upper_bound() {
    let metric = degree_metric();
    let z = Line::standard();
    let c9 = Cycle::standard(9).unwrap();
    let chain = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
    let graphs: [(&dyn Graph, usize); 3] = [(&z, 30), (&c9, 30), (&chain, 30)];
    let mut worst = f64::NEG_INFINITY;
    let mut pairs = 0;
    for (g, domain) in graphs {
        let jump = jump_size(g, &metric, &v(0), domain).unwrap();
        for row in davies_table(g, &metric, jump, &v(0), 8, &[0.5, 1.0, 2.0], domain).unwrap() {
            worst = worst.max(row.max_residual);
            pairs += row.pairs;
        }
    }
    let z_jump = jump_size(&z, &metric, &v(0), 8).unwrap();
    let pass = worst <= 1e-10 && (z_jump - 0.5f64.sqrt()).abs() < 1e-15;
    report(9, "heat kernel upper bound", pass, format!("{pairs} pair-times, max residual {worst:.3e}, jump on Z {z_jump}"));
}

/// Smallest sampled `Γ_2(f)/Γ_1(f)` at `x` over random `f` on `B_2(x)`.
fn sampled_ratio(g: &dyn Graph, x: &VertexId, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let b = ball(g, x, 2).unwrap();
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let vals: HashMap<VertexId, f64> = b.vertices().map(|y| (y.clone(), rng.gen_range(-1.0..1.0))).collect();
        let f = |y: &VertexId| vals.get(y).copied();
        let g1 = gamma(g, 1, &f, &f, x).unwrap();
        let g2 = gamma(g, 2, &f, &f, x).unwrap();
        best = best.min(g2 / g1);
    }
    best
}

#[test]
fn criterion_10_curvature_cross_validation() {
    let families = ["0", "1", "r"];
    let (mut rows, mut disagreements, mut undercut) = (0, 0, f64::NEG_INFINITY);
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = families[rng.gen_range(0..families.len())];
        let n = rng.gen_range(4..=10);
        let ex = build_feller_counterexample(&Sequence::parse(k).unwrap(), n).unwrap();
        for row in &ex.rows {
            rows += 1;
            let holds = row.bakry_emery.normalized >= row.target - 1e-6;
            if holds != row.w.ok {
                disagreements += 1;
            }
            let x = v(row.r as i64);
            let eig = bakry_emery_bound(&ex.chain, &x).unwrap().literal;
            let sampled = sampled_ratio(&ex.chain, &x, 400, &mut rng);
            undercut = undercut.max(eig - sampled);
        }
    }
    let pass = disagreements == 0 && undercut <= 1e-6;
    report(
        10,
        "curvature cross-validation",
        pass,
        format!("{rows} rows, {disagreements} verdict disagreements, max undercut of K by sampling {undercut:.3e}"),
    );
}

#[test]
fn criterion_11_exact_kappa() {
    let mut pass = true;
    let mut details = Vec::new();
    for src in ["0", "(-1)^r"] {
        let k = Sequence::parse(src).unwrap();
        let ex = build_exact_kappa(&k, 30).unwrap();
        // C_0 = Deg(0) and C_r = C_{r-1} - k_r; curvature must equal k_r.
        let mut c = ex.chain.edge_weight(0).unwrap() / ex.chain.vertex_measure(0).unwrap();
        let mut kappa_err: f64 = 0.0;
        let mut c_err: f64 = 0.0;
        for row in &ex.rows {
            let kr = k.at(row.r as i64, "k").unwrap();
            c -= kr;
            kappa_err = kappa_err.max((row.kappa - kr).abs());
            c_err = c_err.max((row.c - c).abs());
        }
        let b = |r: i64| ex.chain.edge_weight(r).unwrap();
        let in_range = (0..=30).all(|r| (1.0..=3.0).contains(&b(r)));
        let steps = (1..=30).all(|r| (b(r) - b(r - 1)).abs() <= 0.5f64.powi(r as i32));
        pass &= kappa_err <= 1e-12 && c_err == 0.0 && in_range && steps;
        details.push(format!("k = {src}: max |kappa - k| {kappa_err:.2e}, b in [1,3] {in_range}, steps <= 2^-r {steps}"));
    }
    report(11, "exact curvature construction", pass, details.join("; "));
}

#[test]
fn criterion_12_potential_theory() {
    let z = Line::standard();
    let mut green_err: f64 = 0.0;
    let mut cap_err: f64 = 0.0;
    for r in [4usize, 9, 19] {
        let sched = RadiusSchedule::explicit(vec![r]);
        let g = green(&z, &v(0), &v(0), 1e-12, &sched).unwrap().last().unwrap();
        green_err = green_err.max((g - (r as f64 + 1.0) / 2.0).abs());
        let cap = capacity(&z, &v(0), 1e-12, &sched).unwrap().capacity.last().unwrap();
        cap_err = cap_err.max((cap - 2.0 / (r as f64 + 1.0)).abs());
    }
    let z3 = Lattice::new(3).unwrap();
    let rep = capacity(&z3, &z3.root(), 1e-3, &RadiusSchedule::explicit(vec![12, 13, 14, 15])).unwrap();
    let increment = rep.capacity.last_increment().unwrap().abs();
    let reciprocity = (rep.reciprocity() - 1.0).abs();
    let checks = [green_err < 1e-9, cap_err < 1e-9, increment < 1e-3, reciprocity < 1e-6];
    report(
        12,
        "potential theory",
        checks.iter().all(|&c| c),
        format!(
            "Z green error {green_err:.2e}, Z capacity error {cap_err:.2e}, Z^3 capacity {:?} with last increment {increment:.3e}, |cap*g - 1| {reciprocity:.2e}",
            rep.capacity.values
        ),
    );
}

#[test]
fn criterion_13_deck_invariance() {
    let c = line_over_cycle(3).unwrap();
    let sched = RadiusSchedule::up_to(20);
    let shift = c.deck_generators().into_iter().next().expect("deck generator");
    let mut worst: f64 = 0.0;
    for y in base_vertices(&c) {
        let a = fiber_sum(&c, &v(0), &y, 1.0, 1e-12, &sched).unwrap();
        let shifted = shift.apply(&v(0));
        let b = fiber_sum(&c, &shifted, &y, 1.0, 1e-12, &sched).unwrap();
        worst = worst.max((a.sums.last().unwrap() - b.sums.last().unwrap()).abs());
        assert_eq!(shifted, v(3));
    }
    report(13, "deck invariance of fiber sums", worst < 1e-10, format!("shift 0 -> 3, max difference {worst:.3e}"));
}

#[test]
fn criterion_14_expression_language() {
    let mut runner = TestRunner::new(Config { cases: 1000, ..Config::default() });
    let round_trips = runner.run(&arb_expr(), |e| {
        let src = e.to_string();
        let parsed = parse(&src).map_err(|err| proptest::test_runner::TestCaseError::fail(err.to_string()))?;
        proptest::prop_assert_eq!(&parsed, &e);
        for r in -3..6 {
            let agree = match (e.eval(r), interpret(&src, r as f64)) {
                (Ok(a), Some(b)) => same(a, b),
                (Err(_), None) => true,
                _ => false,
            };
            proptest::prop_assert!(agree, "{} at r={}", src, r);
        }
        Ok(())
    });
    let golden = GOLDEN.iter().all(|&(src, r, want)| {
        let got = parse(src).unwrap().eval(r).unwrap();
        (got - want).abs() <= 1e-15 * want.abs().max(1.0)
    });
    let errors = DOMAIN_ERRORS.iter().all(|&(src, r)| parse(src).unwrap().eval(r).is_err());
    let pass = round_trips.is_ok() && golden && errors;
    report(
        14,
        "expression language",
        pass,
        format!("1000 random trees: {:?}, {} golden vectors: {golden}", round_trips.err(), GOLDEN.len()),
    );
}

#[test]
fn criterion_15_cli_determinism() {
    let spec = |name: &str| spec_path(name).to_str().unwrap().to_owned();
    let commands: Vec<Vec<String>> = vec![
        vec!["cover".into(), "fiber-sum".into(), "--spec".into(), spec("cyclic_9_over_3.hg"), "--t".into(), "1".into(), "--x".into(), "0".into(), "--y".into(), "0".into()],
        vec!["validate".into(), "--spec".into(), spec("bad.hg")],
        vec!["curvature".into(), "exact-kappa".into(), "--k".into(), "0".into(), "--N".into(), "10".into()],
        vec!["curvature".into(), "exact-kappa".into(), "--k".into(), "(-1)^r".into(), "--N".into(), "30".into()],
        vec!["curvature".into(), "counterexample".into(), "--k".into(), "r".into(), "--N".into(), "10".into()],
        vec!["heat".into(), "--spec".into(), spec("c3.hg"), "--t".into(), "0.1,1,10".into()],
        vec!["green".into(), "--spec".into(), spec("line.hg"), "--R".into(), "9".into()],
        vec!["feller".into(), "--spec".into(), spec("chain_linear.hg"), "--Rmax".into(), "30".into()],
        vec!["metric".into(), "--spec".into(), spec("line.hg"), "--t".into(), "0.5,1,2".into()],
        vec!["cover".into(), "fiber-sum".into(), "--spec".into(), spec("line_over_c3.hg"), "--t".into(), "1".into(), "--Rmax".into(), "20".into()],
        vec!["cover".into(), "sheet-check".into(), "--spec".into(), spec("cyclic_9_over_3.hg"), "--t".into(), "0.25,1,4".into()],
        vec!["cover".into(), "lambda0-compare".into(), "--spec".into(), spec("cyclic_9_over_3.hg")],
        vec!["cover".into(), "mass-compare".into(), "--spec".into(), spec("chain4_times_line_over_c3.hg"), "--t".into(), "1".into(), "--Rmax".into(), "20".into()],
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{i}_{run}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_heatgraph"))
                .args(args)
                .arg("--out")
                .arg(&path)
                .output()
                .unwrap()
                .status;
            outputs.push((status.code(), std::fs::read(&path).unwrap()));
        }
        if outputs[0] != outputs[1] || outputs[0].1.is_empty() {
            mismatched.push(args.join(" "));
        }
    }
    report(
        15,
        "CLI determinism",
        mismatched.is_empty(),
        format!("{} commands run twice, mismatches: {mismatched:?}", commands.len()),
    );
}
