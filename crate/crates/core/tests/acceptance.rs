//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swgraph::map::{compose_closure, MapSpec};
use swgraph::metrics::{coverage, reachable_from, MetricValue, Target};
use swgraph::query::Query;
use swgraph::{
    class_diagram, eval_query, parse_graph_text, serialize_graph, view, view_stats, Direction,
    SoftwareGraph, TypeDictionary, ViewSpec,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn fixture_class_view() -> Outcome {
    let start = Instant::now();
    let g = sample();
    let spec = ViewSpec::class_view();

    let golden_vertices: BTreeSet<String> =
        ["C1", "C2", "F1", "I1", "ME1", "ME2"].iter().map(|s| s.to_string()).collect();
    let golden_edges: BTreeSet<EdgeTriple> = [
        ("C1", "contain", "F1"),
        ("C1", "contain", "ME1"),
        ("C1", "implement", "I1"),
        ("C2", "contain", "ME2"),
        ("ME1", "return", "C2"),
    ]
    .iter()
    .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
    .collect();

    let (ov, _, oe) = view_oracle(&g, &spec);
    ensure!(ov == golden_vertices && oe == golden_edges, "oracle disagrees with golden sets");
    let v = view(&g, &spec).map_err(|e| e.to_string())?;
    ensure!(vertex_set(&v) == golden_vertices, "vertices {:?}", vertex_set(&v));
    ensure!(edge_triples(&v) == golden_edges, "edges {:?}", edge_triples(&v));
    ensure!(view_stats(&g, &spec) == Ok((6, 5)), "view_stats {:?}", view_stats(&g, &spec));
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("6 vertices, 5 edges in {:?}", start.elapsed()))
}

fn fixture_class_diagram() -> Outcome {
    let start = Instant::now();
    let g = sample();
    let cd = class_diagram(&g).map_err(|e| e.to_string())?;
    let (ov, oe) = class_diagram_oracle(&g);
    let want_v: BTreeSet<String> = ["C1", "C2"].iter().map(|s| s.to_string()).collect();
    let want_e: BTreeSet<EdgeTriple> =
        [("C1".to_string(), "depend".to_string(), "C2".to_string())].into_iter().collect();
    ensure!(ov == want_v && oe == want_e, "oracle gave {ov:?} {oe:?}");
    ensure!(vertex_set(&cd) == want_v, "vertices {:?}", vertex_set(&cd));
    ensure!(edge_triples(&cd) == want_e, "edges {:?}", edge_triples(&cd));
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("{{C1, C2}} with C1 depend C2 in {:?}", start.elapsed()))
}

fn view_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    for trial in 0..200 {
        let g = random_graph(&mut rng, 30, 90);
        ensure!(g.vertex_count() <= 30 && g.edge_count() <= 90, "generator bounds");
        let s1 = random_view_spec(&mut rng);
        let s2 = random_view_spec(&mut rng);
        let v = |g: &SoftwareGraph, s: &ViewSpec| view(g, s).map_err(|e| format!("trial {trial}: {e}"));
        let v1 = v(&g, &s1)?;
        ensure!(v(&v1, &s1)? == v1, "trial {trial}: idempotence");
        let meet = s1.intersection(&s2);
        ensure!(
            v(&v1, &meet)? == v(&g, &meet)?,
            "trial {trial}: view(view(g, s1), s2) != view(g, s1 ∩ s2)"
        );
        let small = v(&g, &meet)?;
        let big = v(&g, &s1)?;
        ensure!(
            vertex_set(&small).is_subset(&vertex_set(&big))
                && edge_triples(&small).is_subset(&edge_triples(&big))
                && label_pairs(&small).is_subset(&label_pairs(&big)),
            "trial {trial}: monotonicity"
        );
        let (ov, ol, oe) = view_oracle(&g, &s1);
        ensure!(
            vertex_set(&v1) == ov && label_pairs(&v1) == ol && edge_triples(&v1) == oe,
            "trial {trial}: set-builder oracle"
        );
    }
    Ok("200 graphs, 0 failures".into())
}

fn closure_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0002);
    let single = MapSpec::class_diagram().compositions;
    for trial in 0..100 {
        let g = random_graph_over(&mut rng, 25, 60, ARTIFACTS, &["depend", "call", "contain"]);
        let mut rules = single.clone();
        if rng.gen_bool(0.5) {
            rules.insert((t("call"), t("contain")), t("depend"));
        }
        let c = compose_closure(&g, &rules).map_err(|e| e.to_string())?;
        ensure!(edge_triples(&g).is_subset(&edge_triples(&c)), "trial {trial}: extensive");
        ensure!(compose_closure(&c, &rules).as_ref() == Ok(&c), "trial {trial}: idempotent");
        let (d, l, e) = g.clone().into_parts();
        let smaller = SoftwareGraph::from_parts(d, l, e.into_iter().filter(|_| rng.gen_bool(0.6)).collect());
        let cs = compose_closure(&smaller, &rules).map_err(|e| e.to_string())?;
        ensure!(edge_triples(&cs).is_subset(&edge_triples(&c)), "trial {trial}: monotone");
        ensure!(
            edge_triples(&c) == closure_oracle(&edge_triples(&g), &rules),
            "trial {trial}: naive fixpoint"
        );

        let tc = compose_closure(&g, &single).map_err(|e| e.to_string())?;
        let got: BTreeSet<(String, String)> = edge_triples(&tc)
            .into_iter()
            .filter(|(_, tr, _)| tr == "depend")
            .map(|(s, _, d)| (s, d))
            .collect();
        ensure!(
            got == transitive_closure_oracle(&g, "depend"),
            "trial {trial}: transitive closure oracle"
        );
    }
    Ok("100 graphs, 0 failures".into())
}

fn reachability_and_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
    for trial in 0..100 {
        let g = random_graph(&mut rng, 50, 150);
        let sources: BTreeSet<String> =
            g.vertex_ids().filter(|_| rng.gen_bool(0.1)).map(|v| v.to_string()).collect();
        let filter = rng.gen_bool(0.5).then(|| random_subset(&mut rng, TRACES));
        let got = reachable_from(&g, &sources, filter.as_ref()).map_err(|e| e.to_string())?;
        ensure!(
            strings(&got) == reach_oracle(&g, &sources, filter.as_ref()),
            "trial {trial}: reachability"
        );

        let source = ARTIFACTS[rng.gen_range(0..ARTIFACTS.len())];
        let target = rng.gen_bool(0.8).then(|| ARTIFACTS[rng.gen_range(0..ARTIFACTS.len())]);
        let sel = target.map_or(Target::AllOthers, |t| Target::parse(t).unwrap());
        let r = coverage(&g, source, &sel, filter.as_ref()).map_err(|e| e.to_string())?;
        let MetricValue::Ratio(value) = r.value else {
            return Err("coverage must be a ratio".into());
        };
        let ids: Vec<String> = r.details.as_ref().map_or(vec![], |w| w.ids.iter().map(|v| v.to_string()).collect());
        let (ov, ou, ovac) = coverage_oracle(&g, source, target, filter.as_ref());
        ensure!((0.0..=1.0).contains(&value), "trial {trial}: value {value} out of range");
        ensure!((value == 1.0) == ids.is_empty(), "trial {trial}: full coverage iff no witnesses");
        ensure!(value == ov && ids == ou && r.vacuous == ovac, "trial {trial}: coverage oracle");
    }
    Ok("100 graphs, 0 failures".into())
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0004);
    for trial in 0..200 {
        let g = random_graph_any_dict(&mut rng, 30, 90);
        let text = serialize_graph(&g);
        let back = parse_graph_text(&text).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure!(back == g, "trial {trial}: parse(serialize(g)) != g");
        ensure!(serialize_graph(&back) == text, "trial {trial}: not byte-deterministic");
    }
    Ok("200 graphs, 0 failures".into())
}

fn query_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0005);
    for trial in 0..200 {
        let g = random_graph(&mut rng, 20, 60);
        let a = random_query(&mut rng, 3);
        let b = random_query(&mut rng, 3);
        let ev = |q: &Query| eval_query(&g, q).map_err(|e| format!("trial {trial}: {e}"));
        let (ea, eb) = (ev(&a)?, ev(&b)?);
        let all: BTreeSet<_> = g.vertex_ids().cloned().collect();
        ensure!(ev(&Query::and(a.clone(), b.clone()))? == &ea & &eb, "trial {trial}: and");
        ensure!(ev(&Query::or(a.clone(), b.clone()))? == &ea | &eb, "trial {trial}: or");
        ensure!(ev(&Query::not(a.clone()))? == &all - &ea, "trial {trial}: not");

        let dir = [Direction::Out, Direction::In, Direction::Both][rng.gen_range(0..3)];
        let traces = rng.gen_bool(0.5).then(|| random_subset(&mut rng, TRACES));
        let step = ev(&Query::step(dir, traces.clone(), a.clone()))?;
        for v in &all {
            let nb = g.neighbors(v.as_str(), dir, traces.as_ref(), None).map_err(|e| e.to_string())?;
            ensure!(
                step.contains(v) == !nb.is_disjoint(&ea),
                "trial {trial}: step/neighbors identity at {v}"
            );
        }
        ensure!(strings(&ea) == query_oracle(&g, &a), "trial {trial}: per-vertex oracle");
    }
    Ok("200 trials, 0 failures".into())
}

/// 10,000 vertices and exactly 50,000 edges shaped like a mid-size code base:
/// modules contain classes, classes contain methods and fields, methods call
/// and return, tests verify methods, requirements define modules.
fn synthetic_graph(seed: u64) -> SoftwareGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dict = TypeDictionary::default();
    dict.add_trace_type(t("depend"));
    let mut g = SoftwareGraph::new(dict);
    let groups = [
        ("R", "requirement", 200),
        ("M", "module", 300),
        ("C", "class", 2000),
        ("I", "interface", 300),
        ("ME", "method", 5000),
        ("F", "field", 1400),
        ("U", "unit_test", 800),
    ];
    for (prefix, ty, n) in groups {
        for i in 0..n {
            g.add_vertex(&format!("{prefix}{i}"), [ty]).unwrap();
        }
    }
    let id = |p: &str, i: usize| format!("{p}{i}");
    for i in 0..2000 {
        g.add_edge(&id("M", rng.gen_range(0..300)), "contain", &id("C", i)).unwrap();
    }
    for i in 0..5000 {
        g.add_edge(&id("C", rng.gen_range(0..2000)), "contain", &id("ME", i)).unwrap();
    }
    for i in 0..1400 {
        g.add_edge(&id("C", rng.gen_range(0..2000)), "contain", &id("F", i)).unwrap();
    }
    for i in 0..300 {
        g.add_edge(&id("R", rng.gen_range(0..200)), "define", &id("M", i)).unwrap();
    }
    while g.edge_count() < 50_000 {
        let roll = rng.gen_range(0..100);
        let (a, tr, b) = match roll {
            0..=59 => (id("ME", rng.gen_range(0..5000)), "call", id("ME", rng.gen_range(0..5000))),
            60..=69 => (id("ME", rng.gen_range(0..5000)), "return", id("C", rng.gen_range(0..2000))),
            70..=84 => (id("U", rng.gen_range(0..800)), "verify", id("ME", rng.gen_range(0..5000))),
            85..=92 => (id("C", rng.gen_range(0..2000)), "implement", id("I", rng.gen_range(0..300))),
            _ => (id("M", rng.gen_range(0..300)), "depend_on", id("M", rng.gen_range(0..300))),
        };
        g.add_edge(&a, tr, &b).unwrap();
    }
    g
}

fn scale() -> Outcome {
    let g = synthetic_graph(0x5EED_0006);
    ensure!(
        g.vertex_count() == 10_000 && g.edge_count() == 50_000,
        "synthetic graph has {} vertices, {} edges",
        g.vertex_count(),
        g.edge_count()
    );
    let text = serialize_graph(&g);
    let limit = Duration::from_secs(5);

    let start = Instant::now();
    let doc = swgraph::GraphDocument::parse(&text).map_err(|e| e.to_string())?;
    ensure!(doc.violations().is_empty(), "synthetic document has violations");
    let loaded = doc.into_graph().map_err(|e| e.to_string())?;
    ensure!(loaded.validate().is_empty(), "synthetic graph invalid");
    let t_validate = start.elapsed();
    within(limit, t_validate).map_err(|e| format!("validate: {e}"))?;

    let start = Instant::now();
    let cov = coverage(&loaded, "unit_test", &Target::parse("method").unwrap(), None)
        .map_err(|e| e.to_string())?;
    let t_cov = start.elapsed();
    within(limit, t_cov).map_err(|e| format!("coverage: {e}"))?;

    let start = Instant::now();
    let cd = class_diagram(&loaded).map_err(|e| e.to_string())?;
    let t_cd = start.elapsed();
    within(limit, t_cd).map_err(|e| format!("class diagram: {e}"))?;

    Ok(format!(
        "validate {t_validate:?}, coverage {} in {t_cov:?}, class diagram ({} edges) {t_cd:?}",
        cov.value,
        cd.edge_count()
    ))
}

fn main() -> ExitCode {
    let criteria: &[Criterion] = &[
        ("fixture class view", fixture_class_view),
        ("class-diagram pipeline", fixture_class_diagram),
        ("view laws", view_laws),
        ("closure laws", closure_laws),
        ("reachability/coverage oracle", reachability_and_coverage),
        ("round-trip and determinism", round_trip),
        ("query algebra", query_algebra),
        ("scale/efficiency", scale),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
