//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use petgraph::graph::{NodeIndex, UnGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cgd_core::engine::composed_radius;
use cgd_core::rules::{identity_rule, mutants, xor_ca_rule};
use cgd_core::verify::{
    check_causality, check_dynamics_axioms, check_invertibility, check_local_rule, check_reversibility, GraphSpace,
    SpaceOptions,
};
use cgd_core::{
    compose, compose_at_radius, generate, isomorphic, lift_radius_one, parse_document, parse_graph, Dynamics,
    Family, Graph, Port, Property, Renaming, RuleSpec, Suite, Symbol, VertexName,
};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn FnOnce() -> Check + 'a>);

fn cgd(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cgd"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "cgd {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn read(path: &Path) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    parse_graph(&text).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s).unwrap()
}

/// Vertices of an open line from its free end.
fn line_order(g: &Graph) -> Vec<VertexName> {
    let Some(start) = g.vertices().find(|v| g.attachment(&Port::new((*v).clone(), 1)).is_none()) else {
        return Vec::new();
    };
    let mut out = vec![start.clone()];
    while let Some(a) = g.attachment(&Port::new(out.last().unwrap().clone(), 2)) {
        out.push(a.partner.vertex.clone());
    }
    out
}

/// Renames a line to `v0 … vk` in reading order.
fn normalize_line(g: &Graph) -> Result<Graph, String> {
    let order = line_order(g);
    let r = Renaming::from_pairs(
        order
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), VertexName::new(&format!("v{i}")).unwrap())),
    )
    .map_err(|e| format!("{e:?}"))?;
    g.rename(&r).map_err(|e| e.to_string())
}

fn states_of(cells: &str) -> Vec<Symbol> {
    cells.chars().map(|c| sym(&c.to_string())).collect()
}

fn random_line(rng: &mut ChaCha8Rng, max: usize) -> Graph {
    let n = rng.gen_range(1..=max);
    let states: Vec<Symbol> = (0..n).map(|_| sym(if rng.gen_bool(0.5) { "1" } else { "0" })).collect();
    let family = if rng.gen_bool(0.2) { Family::Cycle } else { Family::Line };
    generate(family, n, &states).unwrap()
}

fn c1_golden_trace(dir: &Path) -> Check {
    let input = dir.join("c1.cgd");
    let out = dir.join("c1");
    cgd(&["gen", "--family", "line", "--n", "5", "--states", "1,0,0,1,1", "--out", input.to_str().unwrap()])?;
    cgd(&["run", "--rule", "xor-ca", "--input", input.to_str().unwrap(), "--steps", "1", "--out", out.to_str().unwrap()])?;
    let result = read(&out.join("step_1.cgd"))?;
    let expected = generate(Family::Line, 6, &states_of("110101")).unwrap();
    let normalized = normalize_line(&result)?;
    ensure(normalized == expected, || format!("normalized output differs: {normalized:?}"))?;
    ensure(isomorphic(&result, &expected).map_err(|e| e.to_string())?, || "not isomorphic".into())?;
    Ok("10011 -> 110101, exact after normalization".into())
}

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut pg = UnGraph::new_undirected();
    let index: HashMap<&VertexName, NodeIndex> = g.vertices().map(|v| (v, pg.add_node(()))).collect();
    for e in g.edges() {
        pg.add_edge(index[&e.source.vertex], index[&e.target.vertex], ());
    }
    pg
}

fn grid(n: usize) -> UnGraph<(), ()> {
    let mut pg = UnGraph::new_undirected();
    let nodes: Vec<NodeIndex> = (0..n * n).map(|_| pg.add_node(())).collect();
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n {
                pg.add_edge(nodes[y * n + x], nodes[y * n + x + 1], ());
            }
            if y + 1 < n {
                pg.add_edge(nodes[y * n + x], nodes[(y + 1) * n + x], ());
            }
        }
    }
    pg
}

fn c2_grid_growth(dir: &Path) -> Check {
    let input = dir.join("c2.cgd");
    let out = dir.join("c2");
    cgd(&["gen", "--family", "single", "--n", "1", "--out", input.to_str().unwrap()])?;
    cgd(&["run", "--rule", "grid", "--input", input.to_str().unwrap(), "--steps", "6", "--out", out.to_str().unwrap()])?;
    let mut sizes = Vec::new();
    for k in 0..=6u32 {
        let g = read(&out.join(format!("step_{k}.cgd")))?;
        g.check_invariants().map_err(|e| format!("step {k}: {e}"))?;
        ensure(g.len() == 4usize.pow(k), || format!("step {k} has {} vertices", g.len()))?;
        sizes.push(g.len().to_string());
        if k == 3 {
            ensure(petgraph::algo::is_isomorphic(&to_petgraph(&g), &grid(8)), || {
                "step 3 is not an 8x8 grid".into()
            })?;
        }
    }
    Ok(format!("sizes {}, step 3 isomorphic to 8x8 grid", sizes.join(",")))
}

fn c3_colored_grid(dir: &Path) -> Check {
    let input = dir.join("c3.cgd");
    let out = dir.join("c3");
    cgd(&["gen", "--family", "single", "--n", "1", "--states", "grey", "--out", input.to_str().unwrap()])?;
    cgd(&[
        "run", "--rule", "grid-grey-black", "--input", input.to_str().unwrap(), "--steps", "1", "--out",
        out.to_str().unwrap(),
    ])?;
    let g = read(&out.join("step_1.cgd"))?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (_, s) in g.states() {
        *counts.entry(s.to_string()).or_default() += 1;
    }
    let expected = BTreeMap::from([("black".to_string(), 1), ("grey".to_string(), 3)]);
    ensure(counts == expected, || format!("states {counts:?}"))?;
    Ok("{grey:3, black:1}".into())
}

fn c4_composability(dir: &Path) -> Check {
    let id = identity_rule(xor_ca_rule().signature().clone());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pairs = [("xor-ca;xor-ca", xor_ca_rule(), xor_ca_rule()), ("xor-ca;identity", xor_ca_rule(), id)];
    let mut radii = Vec::new();
    for (label, f1, f2) in pairs {
        let composed = Dynamics::new(compose(f1.clone(), f2.clone()).map_err(|e| e.to_string())?);
        radii.push(format!("{label} r={}", composed.radius()));
        let (d1, d2) = (Dynamics::new(f1), Dynamics::new(f2));
        for i in 0..200 {
            let g = random_line(&mut rng, 50);
            let sequential = d2.step(&d1.step(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let direct = composed.step(&g).map_err(|e| e.to_string())?;
            ensure(direct == sequential, || format!("{label}: sample {i} differs"))?;
        }
    }
    ensure(composed_radius(1, 1) == 4, || "composed radius formula".into())?;
    let input = dir.join("c4.cgd");
    cgd(&["gen", "--family", "line", "--n", "7", "--states", "1,0,1,1,0,0,1", "--out", input.to_str().unwrap()])?;
    let out = cgd(&[
        "compose", "--rule1", "xor-ca", "--rule2", "xor-ca", "--input", input.to_str().unwrap(),
        "--check-extensional",
    ])?;
    ensure(out.contains("PASS"), || out.clone())?;
    Ok(format!("2x200 samples exact; {}", radii.join(", ")))
}

fn c5_lift(dir: &Path) -> Check {
    let xor = xor_ca_rule();
    let id = identity_rule(xor.signature().clone());
    let widened = compose_at_radius(id, xor.clone(), 2).map_err(|e| e.to_string())?;
    let lift = lift_radius_one(widened).map_err(|e| e.to_string())?;
    ensure(lift.levels() == 1 && lift.steps() == 2, || "expected l=1".into())?;
    let f = Dynamics::new(xor);
    let lf = Dynamics::new(lift.rule());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let g = random_line(&mut rng, 20);
        let encoded = lift.encode(&g).map_err(|e| e.to_string())?;
        let run = lf.run(&encoded, 2).map_err(|e| e.to_string())?;
        let decoded = lift.decode(run.last().unwrap()).map_err(|e| e.to_string())?;
        ensure(decoded == f.step(&g).map_err(|e| e.to_string())?, || format!("sample {i} differs"))?;
    }
    let input = dir.join("c5.cgd");
    cgd(&["gen", "--family", "line", "--n", "6", "--states", "1,1,0,1,0,0", "--out", input.to_str().unwrap()])?;
    let out = cgd(&["lift", "--rule", "xor-ca", "--l", "1", "--input", input.to_str().unwrap(), "--check"])?;
    ensure(out.contains("PASS"), || out.clone())?;
    Ok(format!("100 samples exact, lifted degree {}", lift.degree()))
}

fn c6_axioms() -> Check {
    let space: SpaceOptions = "n=3,sigma=2,pi=2".parse().unwrap();
    let suite = Suite {
        samples: 200,
        seed: 6,
        space,
        r_max: 2,
        ..Suite::default()
    };
    let props = [Property::Dynamics, Property::Local, Property::Causality, Property::Limits];
    let builtins = RuleSpec::builtins();
    for spec in &builtins {
        let rule = spec.build(None).map_err(|e| e.to_string())?;
        for r in suite.run(&Dynamics::new(rule), &props).map_err(|e| e.to_string())? {
            ensure(r.passed(), || format!("{spec}: {}", r.to_text()))?;
        }
    }

    let rule = mutants::constant_name_rule();
    let reports = check_dynamics_axioms(&rule, 200, 6).map_err(|e| e.to_string())?;
    let fresh = reports.iter().find(|r| r.property == "freshness-2").unwrap();
    ensure(fresh.failed(), || "constant-name passed freshness".into())?;
    let disks: Vec<_> = fresh
        .counterexample()
        .iter()
        .filter(|w| w.label.starts_with("disk"))
        .map(|w| {
            let doc = parse_document(&w.graph).unwrap();
            doc.graph.disk(&doc.pointers, rule.radius())
        })
        .collect();
    let (a, b) = (rule.apply(&disks[0]).unwrap(), rule.apply(&disks[1]).unwrap());
    ensure(!a.vertex_set().is_disjoint(b.vertex_set()), || "freshness witness does not replay".into())?;

    let rule = mutants::boundary_conflict_rule();
    let graphs = GraphSpace::for_rule(rule.as_ref(), space)
        .and_then(|s| s.enumerate())
        .map_err(|e| e.to_string())?;
    let local = check_local_rule(&rule, &graphs);
    ensure(local.failed(), || "boundary-conflict passed the local check".into())?;
    let input = parse_graph(&local.counterexample()[0].graph).map_err(|e| e.to_string())?;
    ensure(Dynamics::new(rule).evaluate(&input).is_err(), || "consistency witness does not replay".into())?;

    let cheat = Dynamics::new(mutants::radius_cheat_rule());
    let reports = check_causality(&cheat, 200, 6).map_err(|e| e.to_string())?;
    ensure(reports[0].failed(), || "radius-cheat passed continuity".into())?;
    let w = reports[0].counterexample();
    let (g, h) = (parse_graph(&w[0].graph).unwrap(), parse_graph(&w[1].graph).unwrap());
    ensure(cheat.step(&g).unwrap() != cheat.step(&h).unwrap(), || "continuity witness does not replay".into())?;

    Ok(format!(
        "{} built-ins pass; constant-name fails freshness, boundary-conflict fails consistency, radius-cheat fails continuity",
        builtins.len()
    ))
}

fn c7_invertibility() -> Check {
    let xor = Dynamics::new(xor_ca_rule());
    let lines = GraphSpace::lines(4, xor.rule().signature()).enumerate().map_err(|e| e.to_string())?;
    let (report, table) = check_invertibility(&xor, &lines);
    ensure(report.failed() && table.is_none(), || "xor-ca reported injective".into())?;
    let w = report.counterexample();
    let (a, b) = (parse_graph(&w[0].graph).unwrap(), parse_graph(&w[1].graph).unwrap());
    ensure(a != b && xor.step(&a).unwrap() == xor.step(&b).unwrap(), || "witness does not replay".into())?;

    let spec: RuleSpec = "state-perm/map=0:1,1:0".parse().map_err(|e| format!("{e}"))?;
    let perm = Dynamics::new(spec.build(None).map_err(|e| e.to_string())?);
    let space = GraphSpace::for_rule(perm.rule().as_ref(), SpaceOptions::default())
        .and_then(|s| s.enumerate())
        .map_err(|e| e.to_string())?;
    let (report, table) = check_invertibility(&perm, &space);
    ensure(report.passed(), || report.to_text())?;
    let table = table.unwrap();
    let rev = check_reversibility(&table, 3);
    ensure(rev.passed() && rev.metrics.get("radius") == Some(&0), || rev.to_text())?;
    Ok(format!(
        "xor-ca two-preimage witness on {} lines; state-perm invertible on {} graphs, inverse causal at radius 0",
        lines.len(),
        table.len()
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("CA golden trace", Duration::from_secs(1), Box::new(|| c1_golden_trace(d))),
        ("inflating grid growth", Duration::from_secs(5), Box::new(|| c2_grid_growth(d))),
        ("colored grid", Duration::from_secs(5), Box::new(|| c3_colored_grid(d))),
        ("composability", Duration::from_secs(30), Box::new(|| c4_composability(d))),
        ("radius-one lift", Duration::from_secs(60), Box::new(|| c5_lift(d))),
        ("axiom suite", Duration::from_secs(120), Box::new(c6_axioms)),
        ("invertibility and reversibility", Duration::from_secs(120), Box::new(c7_invertibility)),
    ];
    let mut failures = 0;
    for (i, (title, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {} {title}: {} ({:.2}s, limit {}s) {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
