//! The subcommands, writing their reports to any `Write` sink.

use std::fs;
use std::io::Write;
use std::path::Path;

use cascade_core::flg::fl_cascade_group;
use cascade_core::holonomy::{HolonomyDecomposition, Skeleton};
use cascade_core::{viz, CascadeProduct, Limits, Transformation, TransformationSemigroup};

use crate::format::{self, Document, NamedCascade, RawDocument};
use crate::{CliError, Result};

/// Reads and validates a document from a file.
pub fn load(path: &Path, limits: &Limits) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    format::parse_document(&text, limits).map_err(|e| {
        let e = CliError::from(e);
        match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        }
    })
}

fn wrong_kind(doc: &Document, expected: &str) -> CliError {
    CliError::Input(format!("expected a {expected} document, got {}", doc.kind()))
}

fn cascades_of(doc: &Document) -> Result<(&std::sync::Arc<cascade_core::ComponentList>, &[NamedCascade])> {
    match doc {
        Document::CascadeSpec { components, cascades } => Ok((components, cascades)),
        other => Err(wrong_kind(other, "cascade-spec")),
    }
}

/// Semigroup and group documents both describe a transformation semigroup.
pub fn semigroup_of(doc: &Document) -> Result<TransformationSemigroup> {
    match doc {
        Document::Semigroup(s) => Ok(s.clone()),
        Document::Group(g) => Ok(g.as_semigroup()),
        other => Err(wrong_kind(other, "semigroup or group")),
    }
}

/// `[1,2,3,4]`
pub fn image_array(t: &Transformation) -> String {
    let items: Vec<String> = t.images().iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

/// Generates the cascade semigroup of a spec and reports it.
pub fn compose(doc: &Document, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    let (components, cascades) = cascades_of(doc)?;
    let gens = cascades.iter().map(|c| c.cascade.clone()).collect();
    let product = CascadeProduct::generate(components, gens, limits)?;
    writeln!(out, "{product}")?;
    writeln!(out, "order: {}", product.order())?;
    for c in cascades {
        writeln!(out, "{}: {}", c.name, c.cascade)?;
    }
    Ok(())
}

/// Prints each cascade of a spec as a flat image array.
pub fn flatten(doc: &Document, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    let (_, cascades) = cascades_of(doc)?;
    for c in cascades {
        writeln!(out, "{}", image_array(&c.cascade.flatten(limits)?))?;
    }
    Ok(())
}

/// Holonomy decomposition with optional DOT and cascade-spec side outputs.
pub fn decompose_holonomy(
    doc: &Document,
    limits: &Limits,
    dot_tiling: Option<&Path>,
    emit_cascade: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let s = semigroup_of(doc)?;
    let hd = HolonomyDecomposition::new(&s, limits)?;
    writeln!(out, "{}", hd.summary())?;
    writeln!(out, "{}", hd.components_display())?;
    writeln!(out, "semigroup order: {}", hd.elements().len())?;
    if let Some(path) = dot_tiling {
        fs::write(path, viz::dot_tiling(hd.skeleton()))?;
    }
    if let Some(path) = emit_cascade {
        let cascades = hd
            .lifted_generators()?
            .iter()
            .enumerate()
            .map(|(i, c)| format::raw_cascade(Some(&format!("t{}", i + 1)), c))
            .collect();
        let raw = RawDocument::CascadeSpec {
            components: format::raw_components(hd.components()),
            cascades,
        };
        fs::write(path, format::to_json(&raw))?;
    }
    Ok(())
}

/// Frobenius-Lagrange decomposition along a supplied or default chain.
pub fn decompose_flg(doc: &Document, chain: Option<&Document>, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    let (group, chain) = match (doc, chain) {
        (Document::Group(g), None) => (g.clone(), None),
        (Document::Group(g), Some(Document::Chain(c))) => (g.clone(), Some(c.clone())),
        (Document::Chain(c), None) => (c.groups()[0].clone(), Some(c.clone())),
        (Document::Group(_), Some(other)) => return Err(wrong_kind(other, "chain")),
        (other, _) => return Err(wrong_kind(other, "group")),
    };
    let label = if chain.is_some() {
        "supplied"
    } else {
        "point stabilizers"
    };
    let (fl, product) = fl_cascade_group(&group, chain, limits)?;
    let indices: Vec<String> = fl.chain().indices().iter().map(usize::to_string).collect();
    writeln!(out, "chain: {label}, indices ({})", indices.join(", "))?;
    writeln!(out, "{product}")?;
    writeln!(out, "order: {}", product.order())?;
    Ok(())
}

/// DOT dependency tree of one cascade, chosen by name or 1-based index.
pub fn dot_tree(doc: &Document, which: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let (_, cascades) = cascades_of(doc)?;
    let chosen = match which {
        None => &cascades[0],
        Some(key) => cascades
            .iter()
            .find(|c| c.name == key)
            .or_else(|| {
                key.parse::<usize>()
                    .ok()
                    .and_then(|i| i.checked_sub(1))
                    .and_then(|i| cascades.get(i))
            })
            .ok_or_else(|| CliError::Input(format!("no cascade named or numbered {key:?}")))?,
    };
    out.write_all(viz::dot_dependency_tree(&chosen.cascade).as_bytes())?;
    Ok(())
}

/// DOT tiling picture of a semigroup's skeleton.
pub fn dot_tiling(doc: &Document, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    let s = semigroup_of(doc)?;
    let sk = Skeleton::new(&s, limits)?;
    out.write_all(viz::dot_tiling(&sk).as_bytes())?;
    Ok(())
}
