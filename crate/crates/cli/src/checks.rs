//! The property suite behind `cascade check`.
//!
//! Each check returns an [`Outcome`]: how many cases it looked at and the
//! violations it found. Randomized checks draw from a ChaCha stream seeded by
//! the caller, so a given seed always tests the same cases.

use std::collections::BTreeSet;
use std::io::Write;

use cascade_core::flg::FlDecomposition;
use cascade_core::holonomy::{HolonomyDecomposition, Skeleton};
use cascade_core::{
    viz, Cascade, CascadeProduct, Enumeration, Limits, PermGroup, StateSet, Transformation, TransformationSemigroup,
    Word,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::format::Document;
use crate::{CliError, Result};

/// Default seed for `check` and the randomized acceptance criteria.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub cases: usize,
    pub violations: Vec<String>,
}

impl Outcome {
    fn new(name: impl Into<String>) -> Self {
        Outcome {
            name: name.into(),
            cases: 0,
            violations: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A random transformation of degree `n`.
pub fn random_transformation(rng: &mut ChaCha8Rng, n: usize) -> Transformation {
    let images: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=n)).collect();
    Transformation::new(&images).expect("images are in range")
}

/// A random semigroup of degree `2..=max_degree` with `1..=max_gens` generators.
pub fn random_semigroup(rng: &mut ChaCha8Rng, max_degree: usize, max_gens: usize) -> TransformationSemigroup {
    let n = rng.gen_range(2..=max_degree);
    let k = rng.gen_range(1..=max_gens);
    let gens = (0..k).map(|_| random_transformation(rng, n)).collect();
    TransformationSemigroup::new(gens).expect("generators share a degree")
}

/// Random nonempty words over `generators` letters, lengths `1..=max_len`.
pub fn random_words(rng: &mut ChaCha8Rng, generators: usize, count: usize, max_len: usize) -> Vec<Word> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Word::new((0..len).map(|_| rng.gen_range(1..=generators)).collect())
        })
        .collect()
}

/// Witness words evaluate to their elements, generators are included and
/// the element set is closed under composition.
pub fn enumeration(s: &TransformationSemigroup, e: &Enumeration) -> Outcome {
    let mut out = Outcome::new("enumeration is sound and closed");
    for (t, w) in e.iter() {
        out.case(s.evaluate(w).as_ref() == Ok(t), || {
            format!("word {w} does not evaluate to {t}")
        });
    }
    for g in s.generators() {
        out.case(e.contains(g), || format!("generator {g} missing"));
    }
    for a in e.elements() {
        for b in e.elements() {
            out.case(e.contains(&a.compose(b).expect("same degree")), || {
                format!("{a}·{b} missing")
            });
        }
    }
    out
}

/// Associativity and the right-action law on sampled elements.
pub fn composition_laws(e: &Enumeration, rng: &mut ChaCha8Rng, samples: usize) -> Outcome {
    let mut out = Outcome::new("composition is an associative right action");
    let elems = e.elements();
    for _ in 0..samples {
        let a = &elems[rng.gen_range(0..elems.len())];
        let b = &elems[rng.gen_range(0..elems.len())];
        let c = &elems[rng.gen_range(0..elems.len())];
        let ab = a.compose(b).expect("same degree");
        let lhs = ab.compose(c).expect("same degree");
        let rhs = a.compose(&b.compose(c).expect("same degree")).expect("same degree");
        out.case(lhs == rhs, || format!("({a}·{b})·{c} ≠ {a}·({b}·{c})"));
        for x in 1..=a.degree() {
            let direct = ab.apply(x).expect("in range");
            let stepwise = b.apply(a.apply(x).expect("in range")).expect("in range");
            out.case(direct == stepwise, || format!("x^({a}{b}) ≠ (x^{a})^{b} at {x}"));
        }
    }
    out
}

/// Tile covering, the Zeiger property, height monotonicity and the in/out
/// word round trip on every skeleton member.
pub fn skeleton(sk: &Skeleton, e: &Enumeration) -> Vec<Outcome> {
    let s = sk.semigroup();
    let mut covering = Outcome::new("tiles cover their member");
    let mut zeiger = Outcome::new("stabilizing elements permute tiles");
    let mut heights = Outcome::new("heights respect subduction");
    let mut roundtrip = Outcome::new("in/out words round trip");
    let members = sk.members().len();
    for p in 0..members {
        let member = sk.member(p);
        if member.len() > 1 {
            let union = sk
                .tiles(p)
                .iter()
                .fold(StateSet::empty(sk.degree()), |acc, &q| acc.union(sk.member(q)));
            covering.case(&union == member, || format!("tiles of {member} cover only {union}"));
        }
        let tiles: BTreeSet<&StateSet> = sk.tiles(p).iter().map(|&q| sk.member(q)).collect();
        for t in e.elements() {
            if &t.image_set(member).expect("same degree") != member {
                continue;
            }
            let moved: BTreeSet<StateSet> = tiles.iter().map(|q| t.image_set(q).expect("same degree")).collect();
            let ok = moved.len() == tiles.len() && moved.iter().all(|q| tiles.contains(q));
            zeiger.case(ok, || format!("{t} fixes {member} but does not permute its tiles"));
        }
        for q in 0..members {
            if !sk.subduces(q, p) {
                continue;
            }
            if sk.subduces(p, q) {
                heights.case(sk.height(p) == sk.height(q), || {
                    format!(
                        "{} and {} are equivalent with different heights",
                        sk.member(p),
                        sk.member(q)
                    )
                });
            } else if member.len() > 1 {
                heights.case(sk.height(q) < sk.height(p), || {
                    format!("{} ⊏ {} without a drop in height", sk.member(q), member)
                });
            }
        }
        let out_w = s.evaluate(sk.out_word(p)).expect("stored words are valid");
        let in_w = s.evaluate(sk.in_word(p)).expect("stored words are valid");
        let back = in_w
            .image_set(&out_w.image_set(member).expect("same degree"))
            .expect("same degree");
        roundtrip.case(&back == member, || format!("{member} · w_out · w_in = {back}"));
        let at_rep = out_w.image_set(member).expect("same degree");
        roundtrip.case(&at_rep == sk.member(sk.rep(p)), || {
            format!("{member} · w_out = {at_rep}, not its representative")
        });
    }
    vec![covering, zeiger, heights, roundtrip]
}

/// `decode(act(lift(w), c)) = decode(c)^w` for every word and every tuple.
pub fn holonomy_emulation(hd: &HolonomyDecomposition, words: &[Word]) -> Outcome {
    let mut out = Outcome::new("lifted words emulate the semigroup");
    let s = hd.semigroup();
    let lifted = match hd.lifted_generators() {
        Ok(l) => l,
        Err(e) => {
            out.case(false, || format!("lifting failed: {e}"));
            return out;
        }
    };
    let tuples: Vec<Vec<usize>> = hd.components().radix().tuples().collect();
    let decoded: Vec<usize> = tuples
        .iter()
        .map(|c| hd.decode_tuple(c).expect("tuples are in range"))
        .collect();
    for w in words {
        let flat = s.evaluate(w).expect("words use valid generators");
        let idx = w.indices();
        let mut c = lifted[idx[0] - 1].clone();
        for &g in &idx[1..] {
            c = c.compose(&lifted[g - 1]).expect("same components");
        }
        for (tuple, &x) in tuples.iter().zip(&decoded) {
            let moved = c.act(tuple).expect("tuples are in range");
            let got = hd.decode_tuple(&moved).expect("images are in range");
            let want = flat.apply(x).expect("in range");
            out.case(got == want, || {
                format!("word {w} on {tuple:?}: decoded {got}, expected {want}")
            });
        }
    }
    out
}

/// `decode(encode_state(x)) = x` for every state.
pub fn holonomy_coordinates(hd: &HolonomyDecomposition) -> Outcome {
    let mut out = Outcome::new("state encoding round trips");
    for x in 1..=hd.semigroup().degree() {
        let back = hd.encode_state(x).and_then(|c| hd.decode_tuple(&c));
        out.case(back == Ok(x), || format!("state {x} decodes to {back:?}"));
    }
    out.case(hd.levels().len() == hd.skeleton().top_height(), || {
        "level count differs from height(X)".into()
    });
    out
}

/// `flatten(a·b) = flatten(a)·flatten(b)` for all given pairs.
pub fn flatten_homomorphism(cascades: &[Cascade], limits: &Limits) -> Outcome {
    let mut out = Outcome::new("flatten is a homomorphism");
    for a in cascades {
        for b in cascades {
            let ok = match (a.compose(b), a.flatten(limits), b.flatten(limits)) {
                (Ok(ab), Ok(fa), Ok(fb)) => ab.flatten(limits).ok() == fa.compose(&fb).ok(),
                _ => false,
            };
            out.case(ok, || format!("flatten({a:?}·{b:?}) differs from the flat product"));
        }
    }
    out
}

/// Distinct canonical cascades flatten to distinct transformations, and no
/// stored value is the identity.
pub fn flatten_injectivity(cascades: &[Cascade], limits: &Limits) -> Outcome {
    let mut out = Outcome::new("flatten is injective on canonical cascades");
    let mut seen: BTreeSet<Transformation> = BTreeSet::new();
    let distinct: BTreeSet<&Cascade> = cascades.iter().collect();
    for c in &distinct {
        let canonical = c
            .dependencies()
            .iter()
            .all(|d| d.entries().all(|(_, v)| !v.is_identity()));
        out.case(canonical, || format!("{c:?} stores an identity value"));
        match c.flatten(limits) {
            Ok(f) => out.case(seen.insert(f), || format!("{c:?} collides with another cascade")),
            Err(e) => out.case(false, || format!("flatten failed: {e}")),
        }
    }
    out
}

/// `encode(act(c, x)) = encode(x)^flatten(c)` on every tuple.
pub fn act_matches_flatten(cascades: &[Cascade], limits: &Limits) -> Outcome {
    let mut out = Outcome::new("action agrees with the flattening");
    for c in cascades {
        let Ok(flat) = c.flatten(limits) else {
            out.case(false, || "flatten failed".into());
            continue;
        };
        let radix = c.components().radix();
        for x in radix.tuples() {
            let lhs = c.act(&x).ok().and_then(|y| radix.encode(&y).ok());
            let rhs = radix.encode(&x).ok().and_then(|i| flat.apply(i).ok());
            out.case(lhs.is_some() && lhs == rhs, || format!("{c:?} on {x:?}"));
        }
    }
    out
}

/// The cascade product and the closure of its flattened generators agree in size.
pub fn product_matches_flat_closure(product: &CascadeProduct, limits: &Limits) -> Outcome {
    let mut out = Outcome::new("cascade closure matches flat closure");
    let flat: Result<Vec<Transformation>> = product
        .generators()
        .iter()
        .map(|g| g.flatten(limits).map_err(CliError::from))
        .collect();
    let order = flat
        .ok()
        .and_then(|gens| TransformationSemigroup::new(gens).ok())
        .and_then(|s| s.enumerate(limits).ok())
        .map(|e| e.len());
    out.case(order == Some(product.order()), || {
        format!("cascade order {} but flat closure {order:?}", product.order())
    });
    out
}

/// Lagrange bijection, right-multiplication emulation, homomorphism and
/// order preservation for a Frobenius-Lagrange decomposition.
pub fn frobenius_lagrange(fl: &FlDecomposition, limits: &Limits, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    let g: &PermGroup = fl.group();
    let mut bijection = Outcome::new("coordinates biject with the group");
    let radix = fl.components().radix();
    bijection.case(radix.size() == g.order(), || {
        format!("{} tuples for a group of order {}", radix.size(), g.order())
    });
    let decoded: BTreeSet<Transformation> = radix.tuples().filter_map(|x| fl.decode(&x).ok()).collect();
    bijection.case(decoded.len() == g.order(), || {
        format!("decode hits {} elements", decoded.len())
    });
    for u in g.elements() {
        let back = fl.coordinates(u).and_then(|c| fl.decode(&c));
        bijection.case(back.as_ref() == Ok(u), || {
            format!("decode(coordinates({u})) = {back:?}")
        });
    }

    // exhaustive up to 64 elements, sampled beyond
    let pairs: Vec<(usize, usize)> = if g.order() <= 64 {
        (0..g.order())
            .flat_map(|i| (0..g.order()).map(move |j| (i, j)))
            .collect()
    } else {
        (0..4096)
            .map(|_| (rng.gen_range(0..g.order()), rng.gen_range(0..g.order())))
            .collect()
    };
    let elems = g.elements();
    let encoded: Vec<Option<Cascade>> = elems.iter().map(|h| fl.encode(h).ok()).collect();
    let mut emulation = Outcome::new("encoded elements emulate right multiplication");
    let mut homomorphism = Outcome::new("encoding is a homomorphism");
    for (i, j) in pairs {
        let (u, h) = (&elems[i], &elems[j]);
        let Some(c) = &encoded[j] else {
            emulation.case(false, || format!("encode({h}) failed"));
            continue;
        };
        let lhs = fl.coordinates(u).and_then(|x| c.act(&x));
        let rhs = fl.coordinates(&u.compose(h).expect("same degree"));
        emulation.case(lhs.is_ok() && lhs == rhs, || {
            format!("coordinates({u}) under encode({h})")
        });
        let prod = c.compose(encoded[i].as_ref().expect("checked above"));
        let direct = fl.encode(&h.compose(u).expect("same degree"));
        let ok = match (prod, direct) {
            (Ok(p), Ok(d)) => p.flatten(limits).ok() == d.flatten(limits).ok(),
            _ => false,
        };
        homomorphism.case(ok, || format!("encode({h})·encode({u}) ≠ encode({h}{u})"));
    }
    let mut order = Outcome::new("cascade group order equals group order");
    let got = fl.cascade_group(limits).map(|p| p.order());
    order.case(got.as_ref() == Ok(&g.order()), || {
        format!("cascade group order {got:?}, group order {}", g.order())
    });
    vec![bijection, emulation, homomorphism, order]
}

/// DOT output passes the grammar check and is stable across runs.
pub fn dot_document(name: &str, first: &str, second: &str) -> Outcome {
    let mut out = Outcome::new(format!("{name} is valid, stable DOT"));
    let parsed = viz::check_dot(first);
    out.case(parsed.is_ok(), || format!("grammar check failed: {parsed:?}"));
    out.case(first == second, || "output differs between runs".into());
    out
}

fn semigroup_suite(s: &TransformationSemigroup, limits: &Limits, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let e = s.enumerate(limits)?;
    let mut outcomes = vec![enumeration(s, &e), composition_laws(&e, rng, 200)];
    if s.degree() >= 2 {
        let hd = HolonomyDecomposition::new(s, limits)?;
        outcomes.extend(skeleton(hd.skeleton(), hd.elements()));
        outcomes.push(holonomy_coordinates(&hd));
        let words = random_words(rng, s.generators().len(), 50, 12);
        outcomes.push(holonomy_emulation(&hd, &words));
        outcomes.push(dot_document(
            "tiling",
            &viz::dot_tiling(hd.skeleton()),
            &viz::dot_tiling(hd.skeleton()),
        ));
    }
    Ok(outcomes)
}

/// Runs every check that applies to the document.
pub fn run(doc: &Document, limits: &Limits, seed: u64) -> Result<Vec<Outcome>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match doc {
        Document::Semigroup(s) => semigroup_suite(s, limits, &mut rng),
        Document::Group(g) => {
            let mut outcomes = semigroup_suite(&g.as_semigroup(), limits, &mut rng)?;
            if !g.is_trivial() {
                let fl = FlDecomposition::with_default_chain(g, limits)?;
                outcomes.extend(frobenius_lagrange(&fl, limits, &mut rng));
            }
            Ok(outcomes)
        }
        Document::Chain(chain) => {
            let fl = FlDecomposition::new(chain.clone())?;
            Ok(frobenius_lagrange(&fl, limits, &mut rng))
        }
        Document::CascadeSpec { components, cascades } => {
            let gens: Vec<Cascade> = cascades.iter().map(|c| c.cascade.clone()).collect();
            let product = CascadeProduct::generate(components, gens.clone(), limits)?;
            let mut outcomes = vec![
                flatten_homomorphism(&gens, limits),
                act_matches_flatten(&gens, limits),
                product_matches_flat_closure(&product, limits),
                flatten_injectivity(product.elements(), limits),
            ];
            let sample: Vec<Cascade> = (0..16.min(product.order()))
                .map(|_| product.elements()[rng.gen_range(0..product.order())].clone())
                .collect();
            let mut sampled = flatten_homomorphism(&sample, limits);
            sampled.name = "flatten is a homomorphism on sampled elements".into();
            outcomes.push(sampled);
            for c in cascades {
                outcomes.push(dot_document(
                    &format!("dependency tree of {}", c.name),
                    &viz::dot_dependency_tree(&c.cascade),
                    &viz::dot_dependency_tree(&c.cascade),
                ));
            }
            Ok(outcomes)
        }
    }
}

/// Runs the suite, prints one line per check and fails with the number of
/// violations, if any.
pub fn check(doc: &Document, limits: &Limits, seed: u64, out: &mut dyn Write) -> Result<()> {
    report(&run(doc, limits, seed)?, seed, out)
}

fn report(outcomes: &[Outcome], seed: u64, out: &mut dyn Write) -> Result<()> {
    let mut violations = 0;
    for o in outcomes {
        if o.passed() {
            writeln!(out, "ok    {} ({} cases)", o.name, o.cases)?;
        } else {
            writeln!(out, "FAIL  {} ({} of {} cases)", o.name, o.violations.len(), o.cases)?;
            for v in o.violations.iter().take(5) {
                writeln!(out, "      {v}")?;
            }
            violations += o.violations.len();
        }
    }
    writeln!(out, "seed {seed}: {} checks, {violations} violations", outcomes.len())?;
    if violations > 0 {
        return Err(CliError::Violation(violations));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cascade_core::ComponentList;
    use rand::SeedableRng;
    use std::sync::Arc;

    fn z2_pair() -> Arc<ComponentList> {
        let z2 = TransformationSemigroup::new(vec![Transformation::new(&[2, 1]).unwrap()]).unwrap();
        Arc::new(ComponentList::new(vec![z2.clone(), z2]).unwrap())
    }

    #[test]
    fn violations_are_reported_and_map_to_exit_code_3() {
        let mut bad = Outcome::new("always fails");
        bad.case(false, || "broken".into());
        let mut good = Outcome::new("always holds");
        good.case(true, String::new);
        let mut out = Vec::new();
        let err = report(&[good, bad], 9, &mut out).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "ok    always holds (1 cases)\nFAIL  always fails (1 of 1 cases)\n      broken\nseed 9: 2 checks, 1 violations\n"
        );
    }

    #[test]
    fn dot_check_catches_unstable_or_broken_output() {
        assert!(dot_document("x", "digraph g { a; }", "digraph g { a; }").passed());
        assert_eq!(
            dot_document("x", "digraph g { a; }", "digraph g { b; }")
                .violations
                .len(),
            1
        );
        assert_eq!(
            dot_document("x", "digraph g { a -> }", "digraph g { a -> }")
                .violations
                .len(),
            1
        );
    }

    #[test]
    fn injectivity_treats_equal_cascades_as_one() {
        let comps = z2_pair();
        let id = Transformation::identity(2);
        // constant() drops identity values, so this equals the identity cascade
        let c = Cascade::constant(&comps, &[id.clone(), id]).unwrap();
        assert!(flatten_injectivity(&[c.clone(), Cascade::identity(&comps)], &Limits::default()).passed());
        assert!(c.is_identity());
    }

    #[test]
    fn random_inputs_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let mut b = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let s = random_semigroup(&mut a, 5, 3);
        assert_eq!(s.generators(), random_semigroup(&mut b, 5, 3).generators());
        assert!((2..=5).contains(&s.degree()));
        let words = random_words(&mut a, 3, 20, 12);
        assert!(words
            .iter()
            .all(|w| (1..=12).contains(&w.len()) && w.indices().iter().all(|&i| (1..=3).contains(&i))));
    }
}
