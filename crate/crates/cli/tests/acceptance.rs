//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.
//!
//! Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;

use cascade_cli::checks::{self, DEFAULT_SEED};
use cascade_cli::format::{parse_document, Document};
use cascade_core::cascade::wreath_generators;
use cascade_core::flg::{fl_cascade_group, FlDecomposition};
use cascade_core::holonomy::{HolonomyDecomposition, Skeleton};
use cascade_core::{
    viz, Cascade, CascadeProduct, ComponentList, Limits, PermGroup, Transformation, TransformationSemigroup,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A failed criterion's explanation; any displayable error converts into it.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<String, Fail>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> Document {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_document(&text, &Limits::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn spec(name: &str) -> (Arc<ComponentList>, Vec<Cascade>) {
    match fixture(name) {
        Document::CascadeSpec { components, cascades } => {
            (components, cascades.into_iter().map(|c| c.cascade).collect())
        }
        other => panic!("{name} is a {} document", other.kind()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), Fail> {
    if ok {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

fn t(images: &[usize]) -> Transformation {
    Transformation::new(images).unwrap()
}

fn perm(n: usize, cycles: &[&[usize]]) -> Transformation {
    Transformation::from_cycles(n, cycles).unwrap()
}

fn z2s(k: usize) -> Arc<ComponentList> {
    let z2 = TransformationSemigroup::new(vec![t(&[2, 1])]).unwrap();
    Arc::new(ComponentList::new(vec![z2; k]).unwrap())
}

/// Independent oracle: closure of flat generators by repeated pairwise
/// products until nothing new appears.
fn flat_closure_order(gens: &[Transformation]) -> usize {
    let mut set: std::collections::BTreeSet<Transformation> = gens.iter().cloned().collect();
    loop {
        let snapshot: Vec<_> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &snapshot {
                set.insert(a.compose(b).unwrap());
            }
        }
        if set.len() == before {
            return before;
        }
    }
}

fn flat_gens(product: &CascadeProduct, limits: &Limits) -> Vec<Transformation> {
    product
        .generators()
        .iter()
        .map(|g| g.flatten(limits).unwrap())
        .collect()
}

fn histogram(product: &CascadeProduct) -> BTreeMap<usize, usize> {
    product.order_histogram()
}

fn criterion_1() -> Outcome {
    let limits = Limits::default();
    let (components, gens) = spec("counter.json");
    let g = &gens[0];
    ensure(g.dependency(2).evaluate(&[1])?.is_identity(), || {
        "c(1) is not the identity".into()
    })?;
    ensure(g.dependency(2).evaluate(&[2])? == t(&[2, 1]), || {
        "c(2) is not the swap".into()
    })?;
    let product = CascadeProduct::generate(&components, gens.clone(), &limits)?;
    let flat = g.flatten(&limits)?;
    let cycles = flat.cycles().unwrap_or_default();
    ensure(product.order() == 4, || format!("order {}", product.order()))?;
    ensure(cycles.len() == 1 && cycles[0].len() == 4, || {
        format!("flattening {flat} is not a 4-cycle")
    })?;
    ensure(flat_closure_order(std::slice::from_ref(&flat)) == 4, || {
        "flat closure oracle disagrees".into()
    })?;
    Ok(format!("order 4, generator flattens to {flat} on 4 points"))
}

fn criterion_2() -> Outcome {
    let limits = Limits::default();
    let comps = z2s(2);
    let (s, id) = (t(&[2, 1]), Transformation::identity(2));
    let gens = vec![
        Cascade::constant(&comps, &[s.clone(), id.clone()])?,
        Cascade::constant(&comps, &[id, s])?,
    ];
    let product = CascadeProduct::generate(&comps, gens, &limits)?;
    let hist = histogram(&product);
    ensure(product.order() == 4, || format!("order {}", product.order()))?;
    ensure(!hist.contains_key(&4), || format!("element orders {hist:?}"))?;
    ensure(flat_closure_order(&flat_gens(&product, &limits)) == 4, || {
        "flat closure oracle disagrees".into()
    })?;
    Ok(format!("order 4, element orders {hist:?}"))
}

fn criterion_3() -> Outcome {
    let limits = Limits::default();
    let c2 = z2s(2);
    let w2 = CascadeProduct::generate(&c2, wreath_generators(&c2, &limits)?, &limits)?;
    let hist = histogram(&w2);
    let want: BTreeMap<usize, usize> = [(1, 1), (2, 5), (4, 2)].into();
    ensure(w2.order() == 8 && hist == want, || {
        format!("Z2 wr Z2: order {}, orders {hist:?}", w2.order())
    })?;
    ensure(flat_closure_order(&flat_gens(&w2, &limits)) == 8, || {
        "flat closure oracle disagrees".into()
    })?;
    let c3 = z2s(3);
    let w3 = CascadeProduct::generate(&c3, wreath_generators(&c3, &limits)?, &limits)?;
    ensure(w3.order() == 128, || format!("Z2 wr Z2 wr Z2: order {}", w3.order()))?;
    ensure(flat_closure_order(&flat_gens(&w3, &limits)) == 128, || {
        "flat closure oracle disagrees".into()
    })?;
    Ok(format!("orders 8 ({hist:?}) and 128"))
}

fn criterion_4() -> Outcome {
    let limits = Limits::default();
    let (components, gens) = spec("q8.json");
    let counts: Vec<usize> = gens.iter().map(Cascade::dependency_count).collect();
    ensure(counts == [4, 3], || format!("dependency counts {counts:?}"))?;
    ensure(
        gens[0].to_string() == "perm cascade with 3 levels with (2, 2, 2) pts, 4 dependencies"
            && gens[1].to_string() == "perm cascade with 3 levels with (2, 2, 2) pts, 3 dependencies",
        || format!("summaries {} / {}", gens[0], gens[1]),
    )?;
    let product = CascadeProduct::generate(&components, gens, &limits)?;
    let hist = histogram(&product);
    ensure(product.order() == 8, || format!("order {}", product.order()))?;
    ensure(hist.get(&2) == Some(&1), || format!("element orders {hist:?}"))?;
    ensure(flat_closure_order(&flat_gens(&product, &limits)) == 8, || {
        "flat closure oracle disagrees".into()
    })?;
    Ok(format!("dependencies 4 and 3, order 8, element orders {hist:?}"))
}

fn criterion_5() -> Outcome {
    let limits = Limits::default();
    let Document::Group(q8) = fixture("q8-group.json") else {
        return Err("q8-group.json".into());
    };
    let Document::Chain(chain) = fixture("q8-chain.json") else {
        return Err("q8-chain.json".into());
    };
    let (fl, product) = fl_cascade_group(&q8, Some(chain), &limits)?;
    let line = product.to_string();
    ensure(
        line == "cascade group with 2 generators, 3 levels with (2, 2, 2) pts",
        || line.clone(),
    )?;
    ensure(product.order() == 8, || format!("order {}", product.order()))?;
    for u in q8.elements() {
        let back = fl.decode(&fl.coordinates(u)?)?;
        ensure(&back == u, || format!("decode(coordinates({u})) = {back}"))?;
    }
    Ok(format!("{line}; order 8; decode∘coordinates = id on 8 elements"))
}

fn criterion_6() -> Outcome {
    let limits = Limits::default();
    let Document::Semigroup(s) = fixture("semigroup-t.json") else {
        return Err("semigroup-t.json".into());
    };
    let hd = HolonomyDecomposition::new(&s, &limits)?;
    ensure(hd.elements().len() == 13, || format!("|T| = {}", hd.elements().len()))?;
    ensure(hd.components().points() == [2, 2, 4], || {
        format!("points {:?}", hd.components().points())
    })?;
    ensure(hd.components_display() == "1: 2\n2: 2\n3: (2,C2) 2", || {
        hd.components_display()
    })?;
    let summary = "cascade semigroup with 2 generators, 3 levels with (2, 2, 4) pts";
    ensure(hd.summary() == summary, || hd.summary())?;
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/semigroup-t.json");
    let out = Command::new(env!("CARGO_BIN_EXE_cascade"))
        .args(["decompose", "holonomy"])
        .arg(&fixture)
        .output()?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let want = format!("{summary}\n1: 2\n2: 2\n3: (2,C2) 2\nsemigroup order: 13\n");
    ensure(out.status.success() && stdout == want, || {
        format!("cli printed {stdout:?}")
    })?;
    Ok("|T| = 13, 3 levels with (2, 2, 4) pts, display 1: 2 / 2: 2 / 3: (2,C2) 2".into())
}

/// The semigroups of the emulation criterion: T, the full transformation
/// monoid on 3 points, and 20 seeded random semigroups.
fn emulation_semigroups() -> Vec<TransformationSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut out = vec![
        TransformationSemigroup::new(vec![t(&[3, 2, 4, 4]), t(&[3, 3, 1, 3])]).unwrap(),
        TransformationSemigroup::new(vec![t(&[2, 3, 1]), t(&[2, 1, 3]), t(&[1, 1, 3])]).unwrap(),
    ];
    out.extend((0..20).map(|_| checks::random_semigroup(&mut rng, 5, 3)));
    out
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let semigroups = emulation_semigroups();
    let full = semigroups[1].enumerate(&limits)?.len();
    ensure(full == 27, || format!("full transformation monoid has {full} elements"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x77);
    let (mut cases, mut violations) = (0, Vec::new());
    for (i, s) in semigroups.iter().enumerate() {
        let hd = HolonomyDecomposition::new(s, &limits)?;
        let words = checks::random_words(&mut rng, s.generators().len(), 50, 12);
        let o = checks::holonomy_emulation(&hd, &words);
        cases += o.cases;
        violations.extend(o.violations.into_iter().map(|v| format!("semigroup {i}: {v}")));
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    Ok(format!(
        "{} semigroups × 50 words, {cases} (word, tuple) cases, 0 violations",
        semigroups.len()
    ))
}

fn criterion_8() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut outcomes = Vec::new();

    let (components, gens) = spec("q8.json");
    let q8 = CascadeProduct::generate(&components, gens, &limits)?;
    outcomes.push(checks::flatten_homomorphism(q8.elements(), &limits));
    let c3 = z2s(3);
    let w3 = CascadeProduct::generate(&c3, wreath_generators(&c3, &limits)?, &limits)?;
    outcomes.push(checks::flatten_injectivity(w3.elements(), &limits));

    for s in emulation_semigroups() {
        let sk = Skeleton::new(&s, &limits)?;
        let e = s.enumerate(&limits)?;
        outcomes.extend(checks::skeleton(&sk, &e).into_iter().take(2));
    }

    let groups = [
        PermGroup::new(4, vec![perm(4, &[&[1, 2, 3, 4]])], &limits)?,
        PermGroup::new(3, vec![perm(3, &[&[1, 2, 3]]), perm(3, &[&[1, 2]])], &limits)?,
        PermGroup::new(4, vec![perm(4, &[&[1, 2, 3, 4]]), perm(4, &[&[1, 3]])], &limits)?,
        PermGroup::new(
            8,
            vec![
                perm(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]]),
                perm(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]),
            ],
            &limits,
        )?,
    ];
    for g in &groups {
        let fl = FlDecomposition::with_default_chain(g, &limits)?;
        outcomes.extend(checks::frobenius_lagrange(&fl, &limits, &mut rng));
    }

    let cases: usize = outcomes.iter().map(|o| o.cases).sum();
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| format!("{}: {}", o.name, o.violations[0]))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} checks over {cases} cases, 0 violations", outcomes.len()))
}

fn criterion_9() -> Outcome {
    let limits = Limits::default();
    let (_, gens) = spec("q8.json");
    let d = &gens[0];
    let tree = viz::dot_dependency_tree(d);
    let stats = viz::check_dot(&tree)?;
    let action_nodes = tree.lines().filter(|l| l.contains(" [label=\"(")).count();
    ensure(tree == viz::dot_dependency_tree(d), || {
        "tree output is not stable".into()
    })?;
    ensure(action_nodes == d.dependency_count() && action_nodes == 4, || {
        format!("{action_nodes} action nodes")
    })?;
    ensure(stats.nodes == 1 + 2 + 4, || format!("{} tree nodes", stats.nodes))?;

    let Document::Semigroup(s) = fixture("semigroup-t.json") else {
        return Err("semigroup-t.json".into());
    };
    let sk = Skeleton::new(&s, &limits)?;
    let tiling = viz::dot_tiling(&sk);
    let tstats = viz::check_dot(&tiling)?;
    let pairs: usize = (0..sk.members().len()).map(|p| sk.tiles(p).len()).sum();
    ensure(tiling == viz::dot_tiling(&sk), || "tiling output is not stable".into())?;
    ensure(tstats.edges == pairs, || {
        format!("{} edges for {pairs} (member, tile) pairs", tstats.edges)
    })?;
    ensure(tstats.clusters == sk.classes().len(), || {
        format!("{} clusters", tstats.clusters)
    })?;
    Ok(format!(
        "tree: {} nodes, {action_nodes} action nodes; tiling: {} edges = {pairs} pairs, {} clusters",
        stats.nodes, tstats.edges, tstats.clusters
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("mod-4 counter", criterion_1),
        ("direct product", criterion_2),
        ("wreath products", criterion_3),
        ("Q8 composition", criterion_4),
        ("Frobenius-Lagrange Q8", criterion_5),
        ("holonomy golden output", criterion_6),
        ("emulation suite", criterion_7),
        ("structural properties", criterion_8),
        ("DOT emitters", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {} {name} (exact): {detail}", i + 1),
            Err(Fail(why)) => {
                failures += 1;
                println!("[FAIL] {} {name} (exact): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
