//! JSON input documents.
//!
//! Every document is an object tagged by `"kind"`:
//!
//! ```json
//! {"kind": "semigroup", "generators": [[3,2,4,4], [3,3,1,3]]}
//! {"kind": "group", "degree": 8, "generators": ["(1,5,3,7)(2,8,4,6)", "(1,2,3,4)(5,6,7,8)"]}
//! {"kind": "cascade-spec", "components": ["Z2", "Z2"],
//!  "cascades": [{"name": "g", "dependencies": [[[], "(1,2)"], [[2], "(1,2)"]]}]}
//! {"kind": "chain", "degree": 8, "groups": [["(1,5,3,7)(2,8,4,6)"], ["(1,3)(2,4)(5,7)(6,8)"], []]}
//! ```
//!
//! Transformations are 1-based image arrays or, for permutations, cycle
//! strings. A component is `"Z<n>"` (the cyclic group on `n` points) or an
//! object `{"degree": n, "generators": [...]}`. A dependency is a
//! `[prefix, value]` pair; a prefix of length `L` belongs to level `L + 1`.

use std::fmt;
use std::sync::Arc;

use cascade_core::flg::SubgroupChain;
use cascade_core::{Cascade, ComponentList, Limits, PermGroup, Transformation, TransformationSemigroup};
use serde::{Deserialize, Serialize};

/// A parse or validation failure, located by line (syntax) or field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub location: String,
    pub message: String,
    /// Validation stopped at a size cap rather than at bad input.
    pub resource: bool,
}

/// What went wrong at a location.
pub struct Cause {
    message: String,
    resource: bool,
}

impl From<cascade_core::Error> for Cause {
    fn from(e: cascade_core::Error) -> Self {
        Cause {
            resource: e.is_resource(),
            message: e.to_string(),
        }
    }
}

impl From<String> for Cause {
    fn from(message: String) -> Self {
        Cause {
            message,
            resource: false,
        }
    }
}

impl From<&str> for Cause {
    fn from(message: &str) -> Self {
        message.to_string().into()
    }
}

impl From<serde_json::Error> for Cause {
    fn from(e: serde_json::Error) -> Self {
        e.to_string().into()
    }
}

impl FormatError {
    fn at(location: impl Into<String>, cause: impl Into<Cause>) -> Self {
        let cause = cause.into();
        FormatError {
            location: location.into(),
            message: cause.message,
            resource: cause.resource,
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.location.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.location, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

type Result<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawTransformation {
    Images(Vec<usize>),
    Cycles(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawComponent {
    Named(String),
    Explicit {
        degree: usize,
        generators: Vec<RawTransformation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCascade {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dependencies: Vec<(Vec<usize>, RawTransformation)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawDocument {
    Semigroup {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        generators: Vec<RawTransformation>,
    },
    Group {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        generators: Vec<RawTransformation>,
    },
    CascadeSpec {
        components: Vec<RawComponent>,
        cascades: Vec<RawCascade>,
    },
    Chain {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        groups: Vec<Vec<RawTransformation>>,
    },
}

/// A named cascade from a cascade spec.
#[derive(Debug, Clone)]
pub struct NamedCascade {
    pub name: String,
    pub cascade: Cascade,
}

/// A validated document.
#[derive(Debug, Clone)]
pub enum Document {
    Semigroup(TransformationSemigroup),
    Group(PermGroup),
    CascadeSpec {
        components: Arc<ComponentList>,
        cascades: Vec<NamedCascade>,
    },
    Chain(SubgroupChain),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Semigroup(_) => "semigroup",
            Document::Group(_) => "group",
            Document::CascadeSpec { .. } => "cascade-spec",
            Document::Chain(_) => "chain",
        }
    }
}

/// Parses `(1,2,3)(4,5)` on `degree` points; `()` is the identity.
pub fn parse_cycles(text: &str, degree: usize) -> std::result::Result<Transformation, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = compact.as_str();
    if rest.is_empty() {
        return Err("empty cycle string".into());
    }
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("malformed cycle notation {text:?}"))?;
        let (inner, tail) = body;
        if !inner.is_empty() {
            let cycle = inner
                .split(',')
                .map(|p| p.parse::<usize>().map_err(|_| format!("bad point {p:?} in {text:?}")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            cycles.push(cycle);
        }
        rest = tail;
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Transformation::from_cycles(degree, &refs).map_err(|e| e.to_string())
}

fn transformation(raw: &RawTransformation, degree: Option<usize>, at: &str) -> Result<Transformation> {
    match raw {
        RawTransformation::Images(images) => {
            let t = Transformation::new(images).map_err(|e| FormatError::at(at, e))?;
            if let Some(n) = degree {
                if t.degree() != n {
                    return Err(FormatError::at(
                        at,
                        format!("expected degree {n}, found {}", t.degree()),
                    ));
                }
            }
            Ok(t)
        }
        RawTransformation::Cycles(text) => {
            let n = degree
                .ok_or_else(|| FormatError::at(at, "a degree is required when transformations use cycle notation"))?;
            parse_cycles(text, n).map_err(|e| FormatError::at(at, e))
        }
    }
}

/// Degree given explicitly or by the first image array.
fn infer_degree(explicit: Option<usize>, gens: &[RawTransformation]) -> Option<usize> {
    explicit.or_else(|| {
        gens.iter().find_map(|g| match g {
            RawTransformation::Images(v) => Some(v.len()),
            RawTransformation::Cycles(_) => None,
        })
    })
}

fn generators(raw: &[RawTransformation], degree: Option<usize>, field: &str) -> Result<Vec<Transformation>> {
    if raw.is_empty() {
        return Err(FormatError::at(field, "the generator list is empty"));
    }
    raw.iter()
        .enumerate()
        .map(|(i, g)| transformation(g, degree, &format!("{field}[{i}]")))
        .collect()
}

fn permutations(raw: &[RawTransformation], degree: Option<usize>, field: &str) -> Result<Vec<Transformation>> {
    let gens = generators(raw, degree, field)?;
    for (i, g) in gens.iter().enumerate() {
        if !g.is_permutation() {
            return Err(FormatError::at(
                format!("{field}[{i}]"),
                format!("{g} is not a permutation"),
            ));
        }
    }
    Ok(gens)
}

fn component(raw: &RawComponent, at: &str) -> Result<TransformationSemigroup> {
    match raw {
        RawComponent::Named(name) => {
            let n: usize = name
                .strip_prefix('Z')
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| FormatError::at(at, format!("unknown component {name:?}; expected Z<n>")))?;
            let cycle: Vec<usize> = (1..=n).collect();
            let g = Transformation::from_cycles(n, &[&cycle]).map_err(|e| FormatError::at(at, e))?;
            TransformationSemigroup::new(vec![g]).map_err(|e| FormatError::at(at, e))
        }
        RawComponent::Explicit {
            degree,
            generators: gens,
        } => {
            if *degree == 0 {
                return Err(FormatError::at(at, "a component needs at least one point"));
            }
            let gens = generators(gens, Some(*degree), &format!("{at}.generators"))?;
            TransformationSemigroup::new(gens).map_err(|e| FormatError::at(at, e))
        }
    }
}

impl RawDocument {
    /// Validates the document against the schema and the algebra.
    pub fn validate(&self, limits: &Limits) -> Result<Document> {
        match self {
            RawDocument::Semigroup {
                degree,
                generators: gens,
            } => {
                let gens = generators(gens, infer_degree(*degree, gens), "generators")?;
                Ok(Document::Semigroup(
                    TransformationSemigroup::new(gens).map_err(|e| FormatError::at("generators", e))?,
                ))
            }
            RawDocument::Group {
                degree,
                generators: gens,
            } => {
                let n = infer_degree(*degree, gens);
                let gens = permutations(gens, n, "generators")?;
                let n = gens[0].degree();
                Ok(Document::Group(
                    PermGroup::new(n, gens, limits).map_err(|e| FormatError::at("generators", e))?,
                ))
            }
            RawDocument::CascadeSpec { components, cascades } => {
                if components.is_empty() {
                    return Err(FormatError::at("components", "the component list is empty"));
                }
                let levels = components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| component(c, &format!("components[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let list = Arc::new(ComponentList::new(levels).map_err(|e| FormatError::at("components", e))?);
                if cascades.is_empty() {
                    return Err(FormatError::at("cascades", "the cascade list is empty"));
                }
                let mut named = Vec::with_capacity(cascades.len());
                for (i, raw) in cascades.iter().enumerate() {
                    let at = format!("cascades[{i}]");
                    let mut deps = Vec::with_capacity(raw.dependencies.len());
                    for (j, (prefix, value)) in raw.dependencies.iter().enumerate() {
                        let dep_at = format!("{at}.dependencies[{j}]");
                        let level = prefix.len() + 1;
                        if level > list.len() {
                            return Err(FormatError::at(
                                dep_at,
                                format!(
                                    "a prefix of length {} addresses level {level}, but there are only {} levels",
                                    prefix.len(),
                                    list.len()
                                ),
                            ));
                        }
                        let points = list.points()[level - 1];
                        let value = transformation(value, Some(points), &dep_at)?;
                        deps.push((prefix.clone(), value));
                    }
                    let cascade = Cascade::from_dependencies(&list, &deps).map_err(|e| FormatError::at(&at, e))?;
                    named.push(NamedCascade {
                        name: raw.name.clone().unwrap_or_else(|| format!("c{}", i + 1)),
                        cascade,
                    });
                }
                Ok(Document::CascadeSpec {
                    components: list,
                    cascades: named,
                })
            }
            RawDocument::Chain { degree, groups } => {
                let n = degree
                    .or_else(|| groups.iter().find_map(|g| infer_degree(None, g)))
                    .ok_or_else(|| FormatError::at("degree", "a degree is required when no image array fixes it"))?;
                if groups.is_empty() {
                    return Err(FormatError::at("groups", "the chain is empty"));
                }
                let groups = groups
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let at = format!("groups[{i}]");
                        let gens = if g.is_empty() {
                            Vec::new()
                        } else {
                            permutations(g, Some(n), &at)?
                        };
                        PermGroup::new(n, gens, limits).map_err(|e| FormatError::at(at, e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Document::Chain(
                    SubgroupChain::new(groups).map_err(|e| FormatError::at("groups", e))?,
                ))
            }
        }
    }
}

/// Parses JSON text into the raw schema; syntax errors carry line and column.
pub fn parse_raw(text: &str) -> Result<RawDocument> {
    serde_json::from_str(text).map_err(|e| {
        let location = if e.line() > 0 {
            format!("line {} column {}", e.line(), e.column())
        } else {
            String::new()
        };
        FormatError::at(location, e)
    })
}

/// Parses and validates a document.
pub fn parse_document(text: &str, limits: &Limits) -> Result<Document> {
    parse_raw(text)?.validate(limits)
}

fn raw_images(t: &Transformation) -> RawTransformation {
    RawTransformation::Images(t.images())
}

fn raw_cycles(t: &Transformation) -> RawTransformation {
    RawTransformation::Cycles(t.to_string())
}

fn raw_generators(gens: &[Transformation]) -> Vec<RawTransformation> {
    gens.iter().map(raw_images).collect()
}

/// Raw component list: each level explicit, with its degree.
pub fn raw_components(list: &ComponentList) -> Vec<RawComponent> {
    list.semigroups()
        .iter()
        .map(|s| RawComponent::Explicit {
            degree: s.degree(),
            generators: raw_generators(s.generators()),
        })
        .collect()
}

/// Raw cascade with dependencies in level then prefix order. Permutation
/// values are written in cycle notation, others as image arrays.
pub fn raw_cascade(name: Option<&str>, c: &Cascade) -> RawCascade {
    let dependencies = c
        .dependencies()
        .iter()
        .flat_map(|d| d.entries())
        .map(|(p, v)| {
            (
                p.to_vec(),
                if v.is_permutation() {
                    raw_cycles(v)
                } else {
                    raw_images(v)
                },
            )
        })
        .collect();
    RawCascade {
        name: name.map(str::to_string),
        dependencies,
    }
}

impl Document {
    /// Normal form: explicit degrees and components, image arrays for
    /// generators, canonical dependency order.
    pub fn to_raw(&self) -> RawDocument {
        match self {
            Document::Semigroup(s) => RawDocument::Semigroup {
                degree: Some(s.degree()),
                generators: raw_generators(s.generators()),
            },
            Document::Group(g) => RawDocument::Group {
                degree: Some(g.degree()),
                generators: raw_generators(g.generators()),
            },
            Document::CascadeSpec { components, cascades } => RawDocument::CascadeSpec {
                components: raw_components(components),
                cascades: cascades
                    .iter()
                    .map(|c| raw_cascade(Some(&c.name), &c.cascade))
                    .collect(),
            },
            Document::Chain(chain) => RawDocument::Chain {
                degree: Some(chain.groups()[0].degree()),
                groups: chain.groups().iter().map(|g| raw_generators(g.generators())).collect(),
            },
        }
    }
}

/// JSON for a raw document: objects one field per line, arrays without
/// objects inside kept on one line, and a trailing newline.
pub fn to_json(raw: &RawDocument) -> String {
    let value = serde_json::to_value(raw).expect("raw documents always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn has_object(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(_) => true,
        serde_json::Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if has_object(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q8_SPEC: &str = r#"{
        "kind": "cascade-spec",
        "components": ["Z2", "Z2", "Z2"],
        "cascades": [
            {"name": "d", "dependencies": [[[1], "(1,2)"], [[2], "(1,2)"], [[1,1], "(1,2)"], [[2,2], "(1,2)"]]},
            {"name": "dprime", "dependencies": [[[], "(1,2)"], [[1,1], [2,1]], [[1,2], "(1,2)"]]}
        ]
    }"#;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn parses_q8_spec() {
        let Document::CascadeSpec { components, cascades } = parse_document(Q8_SPEC, &limits()).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(components.points(), &[2, 2, 2]);
        assert_eq!(cascades[0].cascade.dependency_count(), 4);
        assert_eq!(cascades[1].cascade.dependency_count(), 3);
        let d3 = cascades[1].cascade.dependency(3).evaluate(&[1, 1]).unwrap();
        assert_eq!(d3.images(), vec![2, 1]);
    }

    #[test]
    fn cycle_strings() {
        assert_eq!(parse_cycles("(1,2)(3,4)", 4).unwrap().images(), vec![2, 1, 4, 3]);
        assert_eq!(parse_cycles(" ( 1 , 3 ) ", 3).unwrap().images(), vec![3, 2, 1]);
        assert!(parse_cycles("()", 2).unwrap().is_identity());
        assert!(parse_cycles("(1,2", 2).is_err());
        assert!(parse_cycles("(1,5)", 4).is_err());
        assert!(parse_cycles("(a)", 4).is_err());
    }

    #[test]
    fn rejects_empty_generators() {
        let err = parse_document(r#"{"kind":"semigroup","generators":[]}"#, &limits()).unwrap_err();
        assert_eq!(err.location, "generators");
    }

    #[test]
    fn rejects_prefix_beyond_levels() {
        let text = r#"{"kind":"cascade-spec","components":["Z2","Z2"],
            "cascades":[{"dependencies":[[[1,1],"(1,2)"]]}]}"#;
        let err = parse_document(text, &limits()).unwrap_err();
        assert_eq!(err.location, "cascades[0].dependencies[0]");
        assert!(err.message.contains("level 3"));
    }

    #[test]
    fn rejects_out_of_range_prefix() {
        let text = r#"{"kind":"cascade-spec","components":["Z2","Z2"],
            "cascades":[{"dependencies":[[[3],"(1,2)"]]}]}"#;
        assert!(parse_document(text, &limits()).is_err());
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = parse_document("{\n\"kind\": \"semigroup\",\n\"generators\": [[1,2],]\n}", &limits()).unwrap_err();
        assert!(err.location.starts_with("line 3"), "{err}");
        let err = parse_document(r#"{"kind":"monoid","generators":[[1]]}"#, &limits()).unwrap_err();
        assert!(err.message.contains("monoid"));
    }

    #[test]
    fn group_generators_must_be_permutations() {
        let err = parse_document(r#"{"kind":"group","generators":[[1,1]]}"#, &limits()).unwrap_err();
        assert_eq!(err.location, "generators[0]");
        let err = parse_document(r#"{"kind":"group","generators":["(1,2)"]}"#, &limits()).unwrap_err();
        assert!(err.message.contains("degree is required"));
    }

    #[test]
    fn chain_documents() {
        let text = r#"{"kind":"chain","degree":4,"groups":[["(1,2,3,4)"],["(1,3)(2,4)"],[]]}"#;
        let Document::Chain(chain) = parse_document(text, &limits()).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(chain.indices(), vec![2, 2]);
        let bad = r#"{"kind":"chain","degree":4,"groups":[["(1,3)(2,4)"],["(1,2,3,4)"]]}"#;
        assert!(parse_document(bad, &limits()).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        for text in [
            Q8_SPEC,
            r#"{"kind":"semigroup","generators":[[3,2,4,4],[3,3,1,3]]}"#,
            r#"{"kind":"group","degree":3,"generators":["(1,2,3)","(1,2)"]}"#,
            r#"{"kind":"chain","degree":4,"groups":[["(1,2,3,4)"],["(1,3)(2,4)"]]}"#,
        ] {
            let once = to_json(&parse_document(text, &limits()).unwrap().to_raw());
            let twice = to_json(&parse_document(&once, &limits()).unwrap().to_raw());
            assert_eq!(once, twice);
        }
    }
}
