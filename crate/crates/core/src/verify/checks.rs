use std::collections::{BTreeSet, HashMap};

use crate::engine::{Dynamics, Evaluation, Provenance};
use crate::graph::{Disk, Graph};
use crate::name::VertexName;
use crate::rules::Rule;
use crate::verify::report::{Report, Witness};
use crate::verify::sample::Sampler;
use crate::verify::VerifyError;

fn names_of(g: &Graph) -> BTreeSet<VertexName> {
    g.vertex_set().clone()
}

/// Conjugacy and freshness for families of size 2 and 3, on sampled disks.
pub fn check_dynamics_axioms(rule: &Rule, samples: usize, seed: u64) -> Result<Vec<Report>, VerifyError> {
    Ok(vec![
        check_conjugacy(rule, samples, seed)?,
        check_freshness(rule, 2, samples, seed)?,
        check_freshness(rule, 3, samples, seed)?,
    ])
}

/// `f(R(D)) = R'(f(D))` for fresh injective renamings `R`.
pub fn check_conjugacy(rule: &Rule, samples: usize, seed: u64) -> Result<Report, VerifyError> {
    let mut report = Report::new("conjugacy", Some(seed));
    let mut sampler = Sampler::for_rule(rule.as_ref(), seed)?;
    let radius = rule.evaluation_radius();
    let mut skipped = 0;
    for _ in 0..samples {
        let g = sampler.graph();
        let v = sampler.vertex(&g);
        let disk = g.disk_at(&v, radius);
        let renaming = sampler.fresh_renaming(disk.graph().vertices());
        let renamed = disk.rename(&renaming).expect("fresh renaming is injective");
        report.samples += 1;
        let (Ok(direct), Ok(moved)) = (rule.apply(&disk), rule.apply(&renamed)) else {
            skipped += 1;
            continue;
        };
        let expected = direct.map_names(|n| renaming.apply_conjugate(n));
        if moved != expected {
            let pairs: Vec<String> = renaming.pairs().map(|(a, b)| format!("{a}->{b}")).collect();
            report.fail(
                format!("image of renamed disk differs under {}", pairs.join(",")),
                vec![
                    Witness::disk("disk", &disk),
                    Witness::disk("renamed disk", &renamed),
                    Witness::new("image of renamed disk", &moved),
                    Witness::new("renamed image", &expected),
                ],
            );
            return Ok(report);
        }
    }
    if skipped > 0 {
        report.note(format!("{skipped} disks rejected by the rule"));
    }
    if skipped == report.samples && samples > 0 {
        report.inconclusive("the rule rejected every sampled disk");
    }
    Ok(report)
}

/// Disks with no common name must have images with no common name. Names
/// come from a small shared pool so that families often overlap in part.
pub fn check_freshness(rule: &Rule, family: usize, samples: usize, seed: u64) -> Result<Report, VerifyError> {
    let mut report = Report::new(format!("freshness-{family}"), Some(seed));
    let mut sampler = Sampler::for_rule(rule.as_ref(), seed.wrapping_add(family as u64))?
        .with_max_vertices(4)
        .with_pool(4 * family);
    let radius = rule.evaluation_radius();
    let mut tested = 0;
    for _ in 0..samples {
        report.samples += 1;
        let disks: Vec<Disk> = (0..family)
            .map(|_| {
                let g = sampler.graph();
                let v = sampler.vertex(&g);
                g.disk_at(&v, radius)
            })
            .collect();
        let inputs: Vec<BTreeSet<VertexName>> = disks.iter().map(|d| names_of(d.graph())).collect();
        if !intersection(&inputs).is_empty() {
            continue;
        }
        let Ok(images) = disks.iter().map(|d| rule.apply(d)).collect::<Result<Vec<_>, _>>() else {
            continue;
        };
        tested += 1;
        let outputs: Vec<BTreeSet<VertexName>> = images.iter().map(names_of).collect();
        let shared = intersection(&outputs);
        if let Some(x) = shared.first() {
            let mut witnesses = Vec::new();
            for (i, (d, img)) in disks.iter().zip(&images).enumerate() {
                witnesses.push(Witness::disk(format!("disk {}", i + 1), d));
                witnesses.push(Witness::new(format!("image {}", i + 1), img));
            }
            report.fail(format!("images of name-disjoint disks share {x}"), witnesses);
            return Ok(report);
        }
    }
    report.metric("families_tested", tested);
    if tested == 0 && samples > 0 {
        report.inconclusive("no sampled family was name-disjoint and accepted");
    }
    Ok(report)
}

fn intersection(sets: &[BTreeSet<VertexName>]) -> BTreeSet<VertexName> {
    let mut it = sets.iter();
    let Some(first) = it.next() else {
        return BTreeSet::new();
    };
    it.fold(first.clone(), |acc, s| acc.intersection(s).cloned().collect())
}

/// Bound, naming discipline and pairwise consistency of images, over every
/// graph of a space the rule accepts.
pub fn check_local_rule(rule: &Rule, space: &[Graph]) -> Report {
    let mut report = Report::new("local-rule", None);
    let dynamics = Dynamics::new(rule.clone());
    let radius = rule.evaluation_radius();
    let depth = rule.suffix_depth();
    let mut rejected = 0;
    for g in space {
        report.samples += 1;
        if dynamics.validate(g).is_err() {
            rejected += 1;
            continue;
        }
        let mut images: Vec<(VertexName, Disk, Graph)> = Vec::with_capacity(g.len());
        let mut failed = false;
        for v in g.vertices() {
            let disk = g.disk_at(v, radius);
            match rule.apply(&disk) {
                Ok(img) => images.push((v.clone(), disk, img)),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            rejected += 1;
            continue;
        }
        for (v, disk, img) in &images {
            if img.len() > rule.bound() {
                report.fail(
                    format!("image at {v} has {} vertices, bound is {}", img.len(), rule.bound()),
                    vec![Witness::new("input", g), Witness::new("image", img)],
                );
                return report;
            }
            let stray = img.vertices().find(|y| {
                !disk
                    .graph()
                    .vertices()
                    .any(|x| x.depth_to(y).is_some_and(|d| d <= depth))
            });
            if let Some(y) = stray {
                report.fail(
                    format!("image at {v} names {y}, not within {depth} suffixes of its disk"),
                    vec![Witness::new("input", g), Witness::new("image", img)],
                );
                return report;
            }
        }
        for (i, (u, _, a)) in images.iter().enumerate() {
            for (w, _, b) in &images[i + 1..] {
                if let Err(conflict) = a.consistent(b) {
                    report.fail(
                        format!("images at {u} and {w} disagree: {conflict}"),
                        vec![
                            Witness::new("input", g),
                            Witness::new(format!("image at {u}"), a),
                            Witness::new(format!("image at {w}"), b),
                        ],
                    );
                    return report;
                }
            }
        }
    }
    report.metric("rejected", rejected);
    if rejected as usize == report.samples && !space.is_empty() {
        report.inconclusive("the rule accepted no graph of the space");
    }
    report
}

/// Continuity and boundedness of the causal structure.
///
/// Continuity: for a vertex `v` of `G`, a graph `H` keeping the disk of
/// radius `r` around `v`, with fresh states at distance `r + 1` and nothing
/// beyond, must give the same output around the descendants of `v`.
/// Boundedness: no input has more than `b` outputs and every output has an
/// antecedent.
pub fn check_causality(dynamics: &Dynamics, samples: usize, seed: u64) -> Result<Vec<Report>, VerifyError> {
    let rule = dynamics.rule();
    let r = dynamics.radius();
    let mut sampler = Sampler::for_rule(rule.as_ref(), seed)?;
    let mut continuity = Report::new("causality-continuity", Some(seed));
    let mut bounded = Report::new("causality-boundedness", Some(seed));
    let mut skipped = 0;
    for _ in 0..samples {
        let g = sampler.graph();
        let Ok(fg) = dynamics.evaluate(&g) else {
            skipped += 1;
            continue;
        };
        if bounded.passed() {
            bounded.samples += 1;
            check_bounded(dynamics, &g, &fg, &mut bounded);
        }
        if !continuity.passed() {
            continue;
        }
        let v = sampler.vertex(&g);
        let dist = g.distances(std::iter::once(&v), Some(r + 1));
        let keep: BTreeSet<VertexName> = dist.keys().cloned().collect();
        let mut h = g.restrict_to(&keep);
        for (w, d) in &dist {
            if *d == r + 1 {
                let s = sampler.state();
                h.set_state(w, s).expect("kept vertex");
            }
        }
        debug_assert_eq!(g.disk_at(&v, r), h.disk_at(&v, r));
        let Ok(fh) = dynamics.evaluate(&h) else {
            skipped += 1;
            continue;
        };
        continuity.samples += 1;
        let out_g = fg.graph.induced_subgraph(&fg.provenance.descendants(&v));
        let out_h = fh.graph.induced_subgraph(&fh.provenance.descendants(&v));
        if out_g != out_h {
            continuity.fail(
                format!("output around {v} changed outside the radius-{r} disk"),
                vec![
                    Witness::new("G", &g),
                    Witness::new("H", &h),
                    Witness::new("output of G", &out_g),
                    Witness::new("output of H", &out_h),
                ],
            );
        }
    }
    if skipped > 0 {
        continuity.note(format!("{skipped} graphs rejected by the dynamics"));
    }
    for report in [&mut continuity, &mut bounded] {
        if report.passed() && report.samples == 0 && samples > 0 {
            report.inconclusive("no sampled graph could be evaluated");
        }
    }
    Ok(vec![continuity, bounded])
}

fn check_bounded(dynamics: &Dynamics, g: &Graph, fg: &Evaluation, report: &mut Report) {
    let bound = dynamics.bound();
    if let Some((v, n)) = fg.provenance.fan_out().into_iter().find(|(_, n)| *n > bound) {
        report.fail(
            format!("{v} has {n} outputs, bound is {bound}"),
            vec![Witness::new("G", g), Witness::new("F(G)", &fg.graph)],
        );
    } else if let Some(o) = fg.provenance.orphans().next() {
        report.fail(
            format!("output {o} has no antecedent"),
            vec![Witness::new("G", g), Witness::new("F(G)", &fg.graph)],
        );
    }
}

/// Compares disks of `F(G)` around the descendants of `A` with the same disks
/// computed from truncations `G^s_A`, for radii `0..=r_max`. The metric
/// `stabilizes_at_r{k}` is the smallest `s` from which every truncation
/// agrees at radius `k`.
pub fn check_limit_preservation(dynamics: &Dynamics, g: &Graph, a: &BTreeSet<VertexName>, r_max: usize) -> Report {
    let mut report = Report::new("limit-preservation", None);
    let full = match dynamics.evaluate(g) {
        Ok(e) => e,
        Err(e) => {
            report.inconclusive(format!("input rejected: {e}"));
            return report;
        }
    };
    let descendants = |e: &Evaluation| -> BTreeSet<VertexName> {
        a.iter().flat_map(|v| e.provenance.descendants(v)).collect()
    };
    let a_full = descendants(&full);
    let targets: Vec<Disk> = (0..=r_max).map(|r| full.graph.disk(&a_full, r)).collect();
    let depth = g.len();
    let mut by_depth: Vec<Vec<bool>> = Vec::with_capacity(depth + 1);
    for s in 0..=depth {
        report.samples += 1;
        let truncated = g.restrict_to(&g.neighbors(a, s));
        let row = match dynamics.evaluate(&truncated) {
            Ok(e) => {
                let a_s = descendants(&e);
                (0..=r_max).map(|r| e.graph.disk(&a_s, r) == targets[r]).collect()
            }
            Err(_) => vec![false; r_max + 1],
        };
        by_depth.push(row);
    }
    for r in 0..=r_max {
        let row: Vec<bool> = by_depth.iter().map(|d| d[r]).collect();
        if !row[depth] {
            let truncated = g.restrict_to(&g.neighbors(a, depth));
            report.fail(
                format!("disk of radius {r} differs even for the full truncation"),
                vec![Witness::new("G", g), Witness::new("truncation", &truncated)],
            );
            return report;
        }
        let from = (0..=depth).rev().take_while(|&s| row[s]).last().unwrap_or(depth);
        report.metric(format!("stabilizes_at_r{r}"), from as u64);
    }
    report
}

/// Limit preservation on sampled graphs with `A` a single random vertex.
pub fn check_limit_preservation_sampled(
    dynamics: &Dynamics,
    samples: usize,
    seed: u64,
    r_max: usize,
) -> Result<Report, VerifyError> {
    let mut sampler = Sampler::for_rule(dynamics.rule().as_ref(), seed)?.with_max_vertices(6);
    let mut report = Report::new("limit-preservation", Some(seed));
    let mut worst: std::collections::BTreeMap<String, u64> = Default::default();
    for _ in 0..samples {
        let g = sampler.graph();
        let a = BTreeSet::from([sampler.vertex(&g)]);
        let single = check_limit_preservation(dynamics, &g, &a, r_max);
        report.samples += 1;
        if single.failed() {
            report.verdict = single.verdict;
            return Ok(report);
        }
        for (k, v) in single.metrics {
            let e = worst.entry(k).or_default();
            *e = (*e).max(v);
        }
    }
    report.metrics = worst;
    Ok(report)
}

/// One evaluated graph of a finite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseEntry {
    pub preimage: Graph,
    pub image: Graph,
    pub provenance: Provenance,
}

/// The inverse of a dynamics over a finite space: images back to preimages.
#[derive(Clone, Debug, Default)]
pub struct InverseTable {
    entries: Vec<InverseEntry>,
    index: HashMap<Graph, usize>,
}

impl InverseTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `F†(image)`, when `image` is the image of a graph of the space.
    pub fn inverse(&self, image: &Graph) -> Option<&Graph> {
        self.index.get(image).map(|&i| &self.entries[i].preimage)
    }

    pub fn entries(&self) -> &[InverseEntry] {
        &self.entries
    }
}

/// Checks that `F` is injective on the space and builds its inverse table.
/// Graphs the dynamics rejects are left out. Images are compared as named
/// graphs.
pub fn check_invertibility(dynamics: &Dynamics, space: &[Graph]) -> (Report, Option<InverseTable>) {
    let mut report = Report::new("invertibility", None);
    let mut table = InverseTable::default();
    let mut rejected = 0u64;
    for g in space {
        report.samples += 1;
        let Ok(e) = dynamics.evaluate(g) else {
            rejected += 1;
            continue;
        };
        if let Some(&i) = table.index.get(&e.graph) {
            let other = &table.entries[i].preimage;
            report.fail(
                "two graphs share an image",
                vec![
                    Witness::new("first", other),
                    Witness::new("second", g),
                    Witness::new("image", &e.graph),
                ],
            );
            return (report, None);
        }
        table.index.insert(e.graph.clone(), table.entries.len());
        table.entries.push(InverseEntry {
            preimage: g.clone(),
            image: e.graph,
            provenance: e.provenance,
        });
    }
    report.metric("rejected", rejected);
    report.metric("images", table.len() as u64);
    if table.is_empty() && !space.is_empty() {
        report.inconclusive("the dynamics accepted no graph of the space");
        return (report, None);
    }
    (report, Some(table))
}

/// Searches the smallest radius `r <= r_max` such that the inverse is
/// causal on the table: the disk of radius `r` around an output vertex
/// determines the input it came from. The metric `radius` holds it.
pub fn check_reversibility(table: &InverseTable, r_max: usize) -> Report {
    let mut report = Report::new("reversibility", None);
    report.samples = table.len();
    let mut last = None;
    for r in 0..=r_max {
        match inverse_conflict(table, r) {
            None => {
                report.metric("radius", r as u64);
                return report;
            }
            Some(w) => last = Some(w),
        }
    }
    let witnesses = last.unwrap_or_default();
    report.fail(format!("no inverse radius up to {r_max}"), witnesses);
    report
}

fn inverse_conflict(table: &InverseTable, r: usize) -> Option<Vec<Witness>> {
    let mut seen: HashMap<(VertexName, Disk), (Graph, &InverseEntry)> = HashMap::new();
    for entry in &table.entries {
        for v in entry.image.vertices() {
            let Ok(ante) = entry.provenance.antecedents(v) else {
                continue;
            };
            let origin = entry.preimage.induced_subgraph(ante);
            let key = (v.clone(), entry.image.disk_at(v, r));
            match seen.get(&key) {
                Some((prev, other)) if *prev != origin => {
                    return Some(vec![
                        Witness::new(format!("image around {v}"), key.1.graph()),
                        Witness::new("first preimage", &other.preimage),
                        Witness::new("second preimage", &entry.preimage),
                    ]);
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (origin, entry));
                }
            }
        }
    }
    None
}

/// The default radius an inverse is searched up to.
pub const DEFAULT_INVERSE_RADIUS: usize = 3;

