//! DOT emitters.
//!
//! Both emitters are pure and deterministic: nodes and edges come out in a
//! fixed order, so equal inputs give byte-identical documents.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::holonomy::Skeleton;
use crate::{Cascade, Error, Result, StateSet};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn prefix_id(prefix: &[usize]) -> String {
    let mut id = String::from("n");
    for x in prefix {
        let _ = write!(id, "_{x}");
    }
    id
}

/// The dependency functions of a cascade drawn as a tree over prefixes.
///
/// The root is the empty prefix; a node at depth `i` carries the value of
/// `d_{i+1}` at its prefix (empty label for the identity) and each edge is
/// labelled with the state extending the prefix. Levels below the deepest
/// stored entry are left out. Nodes whose whole subtree stores nothing are
/// drawn gray.
pub fn dot_dependency_tree(cascade: &Cascade) -> String {
    let deepest = cascade
        .dependencies()
        .iter()
        .rposition(|d| !d.is_empty())
        .map_or(1, |i| i + 1);
    let mut live: BTreeSet<Vec<usize>> = BTreeSet::new();
    for d in cascade.dependencies() {
        for (key, _) in d.entries() {
            for k in 0..=key.len() {
                live.insert(key[..k].to_vec());
            }
        }
    }
    let points = cascade.components().points();

    let mut out = String::from("digraph dependencies {\n  node [shape=box];\n");
    let mut stack: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let level = prefix.len() + 1;
        let value = cascade
            .dependency(level)
            .evaluate(&prefix)
            .expect("prefixes are generated in range");
        let label = if value.is_identity() {
            String::new()
        } else {
            value.to_string()
        };
        let id = prefix_id(&prefix);
        let gray = !live.contains(&prefix);
        let style = if gray { ", color=gray, fontcolor=gray" } else { "" };
        let _ = writeln!(out, "  {id} [label={}{style}];", quote(&label));
        if level == deepest {
            continue;
        }
        for x in 1..=points[level - 1] {
            let mut child = prefix.clone();
            child.push(x);
            let edge_style = if live.contains(&child) {
                ""
            } else {
                ", color=gray, fontcolor=gray"
            };
            let _ = writeln!(
                out,
                "  {id} -> {} [label={}{edge_style}];",
                prefix_id(&child),
                quote(&x.to_string())
            );
        }
        for x in (1..=points[level - 1]).rev() {
            let mut child = prefix.clone();
            child.push(x);
            stack.push(child);
        }
    }
    out.push_str("}\n");
    out
}

fn set_id(set: &StateSet) -> String {
    let mut id = String::from("s");
    for x in set.iter() {
        let _ = write!(id, "_{x}");
    }
    id
}

/// The skeleton drawn as its tiling: one cluster per class, an edge from
/// every member to each of its tiles, and depth labels ranked with the
/// members they annotate.
///
/// Edge labels are words mapping the member exactly onto the tile when such
/// a word exists. Edges into tiles that are not images of `X` are dotted.
pub fn dot_tiling(skeleton: &Skeleton) -> String {
    let mut out = String::from("digraph tiling {\n  node [shape=box];\n");
    let mut classes: Vec<(usize, &crate::holonomy::Class)> = skeleton.classes().iter().enumerate().collect();
    classes.sort_by_key(|(_, class)| (class.depth, class.rep));
    for (c, class) in classes {
        let _ = writeln!(out, "  subgraph cluster_{c} {{");
        let _ = writeln!(out, "    label={};", quote(&format!("depth {}", class.depth)));
        for &p in &class.members {
            let set = skeleton.member(p);
            let _ = writeln!(out, "    {} [label={}];", set_id(set), quote(&set.to_string()));
        }
        out.push_str("  }\n");
    }

    let mut by_depth: Vec<(usize, Vec<usize>)> = Vec::new();
    for p in 0..skeleton.members().len() {
        let d = skeleton.depth(p);
        match by_depth.iter_mut().find(|(depth, _)| *depth == d) {
            Some((_, ps)) => ps.push(p),
            None => by_depth.push((d, alloc::vec![p])),
        }
    }
    by_depth.sort();
    for (d, ps) in &by_depth {
        let _ = writeln!(out, "  depth_{d} [label={}, shape=plaintext];", quote(&d.to_string()));
        let _ = write!(out, "  {{ rank=same; depth_{d};");
        for &p in ps {
            let _ = write!(out, " {};", set_id(skeleton.member(p)));
        }
        out.push_str(" }\n");
    }

    for p in 0..skeleton.members().len() {
        let from = set_id(skeleton.member(p));
        for &q in skeleton.tiles(p) {
            let mut attrs = Vec::new();
            if let Some(w) = skeleton.path_word(p, q) {
                attrs.push(format!("label={}", quote(&w.to_string())));
            }
            if !skeleton.is_image(q) {
                attrs.push("style=dotted".to_string());
            }
            let attrs = if attrs.is_empty() {
                String::new()
            } else {
                format!(" [{}]", attrs.join(", "))
            };
            let _ = writeln!(out, "  {from} -> {}{attrs};", set_id(skeleton.member(q)));
        }
    }
    out.push_str("}\n");
    out
}

/// Counts reported by [`check_dot`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DotStats {
    /// Distinct declared nodes.
    pub nodes: usize,
    pub edges: usize,
    pub clusters: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Id(String),
    Quoted(String),
    Arrow,
    Punct(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                chars.next();
                tokens.push(Token::Punct(c));
            }
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(Error::invalid("dot: expected '->'"));
                }
                tokens.push(Token::Arrow);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(e) => {
                                s.push('\\');
                                s.push(e);
                            }
                            None => return Err(Error::invalid("dot: unterminated string")),
                        },
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(Error::invalid("dot: unterminated string")),
                    }
                }
                tokens.push(Token::Quoted(s));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' || ch == '.' {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Id(s));
            }
            _ => return Err(Error::invalid(format!("dot: unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

struct DotParser {
    tokens: Vec<Token>,
    pos: usize,
    declared: BTreeSet<String>,
    referenced: BTreeSet<String>,
    stats: DotStats,
}

impl DotParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Token::Punct(p)) if p == c => Ok(()),
            other => Err(Error::invalid(format!("dot: expected {c:?}, found {other:?}"))),
        }
    }

    fn id(&mut self) -> Result<String> {
        match self.next() {
            Some(Token::Id(s)) | Some(Token::Quoted(s)) => Ok(s),
            other => Err(Error::invalid(format!("dot: expected an identifier, found {other:?}"))),
        }
    }

    fn attr_lists(&mut self) -> Result<()> {
        while self.peek() == Some(&Token::Punct('[')) {
            self.next();
            loop {
                match self.peek() {
                    Some(Token::Punct(']')) => {
                        self.next();
                        break;
                    }
                    Some(Token::Punct(',' | ';')) => {
                        self.next();
                    }
                    _ => {
                        self.id()?;
                        self.expect('=')?;
                        self.id()?;
                    }
                }
            }
        }
        Ok(())
    }

    fn block(&mut self) -> Result<()> {
        self.expect('{')?;
        loop {
            match self.peek() {
                Some(Token::Punct('}')) => {
                    self.next();
                    return Ok(());
                }
                Some(Token::Punct(';')) => {
                    self.next();
                }
                Some(Token::Punct('{')) => self.block()?,
                None => return Err(Error::invalid("dot: unbalanced braces")),
                _ => self.statement()?,
            }
        }
    }

    fn statement(&mut self) -> Result<()> {
        let head = self.id()?;
        match head.as_str() {
            "graph" | "node" | "edge" if self.peek() == Some(&Token::Punct('[')) => return self.attr_lists(),
            "subgraph" => {
                if let Some(Token::Id(_) | Token::Quoted(_)) = self.peek() {
                    if self.id()?.starts_with("cluster") {
                        self.stats.clusters += 1;
                    }
                }
                return self.block();
            }
            _ => {}
        }
        match self.peek() {
            Some(Token::Punct('=')) => {
                self.next();
                self.id()?;
            }
            Some(Token::Arrow) => {
                self.referenced.insert(head);
                while self.peek() == Some(&Token::Arrow) {
                    self.next();
                    let to = self.id()?;
                    self.referenced.insert(to);
                    self.stats.edges += 1;
                }
                self.attr_lists()?;
            }
            _ => {
                self.declared.insert(head);
                self.attr_lists()?;
            }
        }
        Ok(())
    }
}

/// A minimal DOT grammar check: one `digraph` with balanced braces, well
/// formed statements and attribute lists, and every node used by an edge
/// declared explicitly.
pub fn check_dot(text: &str) -> Result<DotStats> {
    let mut p = DotParser {
        tokens: tokenize(text)?,
        pos: 0,
        declared: BTreeSet::new(),
        referenced: BTreeSet::new(),
        stats: DotStats::default(),
    };
    match p.next() {
        Some(Token::Id(s)) if s == "digraph" => {}
        other => return Err(Error::invalid(format!("dot: expected 'digraph', found {other:?}"))),
    }
    if let Some(Token::Id(_) | Token::Quoted(_)) = p.peek() {
        p.next();
    }
    p.block()?;
    if p.pos != p.tokens.len() {
        return Err(Error::invalid("dot: trailing input after the graph"));
    }
    if let Some(missing) = p.referenced.difference(&p.declared).next() {
        return Err(Error::invalid(format!(
            "dot: node {missing} is used but never declared"
        )));
    }
    p.stats.nodes = p.declared.len();
    Ok(p.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::ComponentList;
    use crate::{Limits, Transformation, TransformationSemigroup};
    use alloc::sync::Arc;
    use alloc::vec;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images).unwrap()
    }

    fn z2s(k: usize) -> Arc<ComponentList> {
        let z2 = TransformationSemigroup::new(vec![t(&[2, 1])]).unwrap();
        Arc::new(ComponentList::new(vec![z2; k]).unwrap())
    }

    fn q8_d() -> Cascade {
        let s = t(&[2, 1]);
        Cascade::from_dependencies(
            &z2s(3),
            &[
                (vec![1], s.clone()),
                (vec![2], s.clone()),
                (vec![1, 1], s.clone()),
                (vec![2, 2], s),
            ],
        )
        .unwrap()
    }

    fn action_nodes(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("[label=\"(")).count()
    }

    #[test]
    fn q8_generator_tree() {
        let dot = dot_dependency_tree(&q8_d());
        let stats = check_dot(&dot).unwrap();
        assert_eq!(stats.nodes, 1 + 2 + 4);
        assert_eq!(stats.edges, 6);
        assert_eq!(action_nodes(&dot), 4);
        assert_eq!(dot, dot_dependency_tree(&q8_d()));
    }

    #[test]
    fn counter_tree() {
        let s = t(&[2, 1]);
        let c = Cascade::from_dependencies(&z2s(2), &[(vec![], s.clone()), (vec![2], s)]).unwrap();
        let dot = dot_dependency_tree(&c);
        assert!(dot.contains("  n [label=\"(1,2)\"];"));
        assert!(dot.contains("  n_1 [label=\"\", color=gray, fontcolor=gray];"));
        assert!(dot.contains("  n_2 [label=\"(1,2)\"];"));
        assert_eq!(check_dot(&dot).unwrap().nodes, 3);
    }

    #[test]
    fn identity_tree_is_a_gray_root() {
        let dot = dot_dependency_tree(&Cascade::identity(&z2s(2)));
        let stats = check_dot(&dot).unwrap();
        assert_eq!((stats.nodes, stats.edges), (1, 0));
        assert!(dot.contains("n [label=\"\", color=gray"));
    }

    #[test]
    fn tiling_of_semigroup_t() {
        let s = TransformationSemigroup::new(vec![t(&[3, 2, 4, 4]), t(&[3, 3, 1, 3])]).unwrap();
        let sk = Skeleton::new(&s, &Limits::default()).unwrap();
        let dot = dot_tiling(&sk);
        let stats = check_dot(&dot).unwrap();
        let pairs: usize = (0..sk.members().len()).map(|p| sk.tiles(p).len()).sum();
        assert_eq!(stats.edges, pairs);
        assert_eq!(stats.clusters, sk.classes().len());
        // members plus one label node per depth (1..=4)
        assert_eq!(stats.nodes, sk.members().len() + 4);
        assert!(dot.contains("s_1_2_3_4 -> s_2_3_4 [label=\"[1]\"];"));
        assert!(dot.contains("s_2_4 -> s_2 [style=dotted];"));
        assert_eq!(dot, dot_tiling(&sk));
    }

    #[test]
    fn tiling_of_trivial_monoid() {
        let s = TransformationSemigroup::new(vec![Transformation::identity(2)]).unwrap();
        let sk = Skeleton::new(&s, &Limits::default()).unwrap();
        let dot = dot_tiling(&sk);
        assert!(dot.contains("s_1_2 -> s_1 [style=dotted];"));
        assert!(dot.contains("s_1_2 -> s_2 [style=dotted];"));
        assert_eq!(check_dot(&dot).unwrap().edges, 2);
    }

    #[test]
    fn grammar_check_rejects_broken_documents() {
        assert!(check_dot("digraph { a -> b; }").is_err());
        assert!(check_dot("digraph { a; b; a -> b; ").is_err());
        assert!(check_dot("graph { a; }").is_err());
        assert!(check_dot("digraph { a [label=\"x]; }").is_err());
        assert!(check_dot("digraph { a [label=]; }").is_err());
        let ok = check_dot("digraph g { node [shape=box]; a; b [label=\"\\\"q\\\"\"]; a -> b -> a; }").unwrap();
        assert_eq!((ok.nodes, ok.edges), (2, 2));
    }
}
