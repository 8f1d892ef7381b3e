//! Finite pieces of a groupoid as a graph: units are nodes, arrows are edges
//! from source to range.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::germ::{enumerate_germs, Germ};
use crate::index::ExtendedIndex;
use crate::sheu::SheuTriple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub label: String,
    pub source: String,
    pub range: String,
    pub unit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidExport {
    pub ell: usize,
    pub nodes: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl GroupoidExport {
    fn build(ell: usize, arrows: Vec<(String, ExtendedIndex, ExtendedIndex, bool)>) -> GroupoidExport {
        let mut nodes = BTreeSet::new();
        for (_, s, r, _) in &arrows {
            nodes.insert(s.clone());
            nodes.insert(r.clone());
        }
        GroupoidExport {
            ell,
            nodes: nodes.iter().map(ToString::to_string).collect(),
            arrows: arrows
                .into_iter()
                .map(|(label, s, r, unit)| Arrow {
                    label,
                    source: s.to_string(),
                    range: r.to_string(),
                    unit,
                })
                .collect(),
        }
    }

    pub fn from_germs(ell: usize, germs: &[Germ]) -> GroupoidExport {
        Self::build(
            ell,
            germs
                .iter()
                .map(|g| (g.elem().to_string(), g.source(), g.range().clone(), g.is_unit()))
                .collect(),
        )
    }

    pub fn from_triples(ell: usize, triples: &[SheuTriple]) -> GroupoidExport {
        Self::build(
            ell,
            triples
                .iter()
                .map(|t| (t.to_string(), t.source(), t.range().clone(), t.is_unit()))
                .collect(),
        )
    }

    /// The germ groupoid restricted to [`enumerate_germs`]`(ell, bound)`,
    /// with non-unit arrows between units of the enumeration.
    pub fn germs(ell: usize, bound: u64) -> GroupoidExport {
        let all = enumerate_germs(ell, bound);
        let units: BTreeSet<ExtendedIndex> = all.iter().filter(|g| g.is_unit()).map(|g| g.base().clone()).collect();
        let kept: Vec<Germ> = all.into_iter().filter(|g| units.contains(&g.source())).collect();
        Self::from_germs(ell, &kept)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph groupoid {\n");
        for n in &self.nodes {
            writeln!(out, "  \"{n}\";").unwrap();
        }
        for a in &self.arrows {
            if a.unit {
                continue;
            }
            writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", a.source, a.range, a.label).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_germs() {
        let ex = GroupoidExport::germs(1, 1);
        assert!(ex.nodes.contains(&"(inf)".to_string()));
        assert!(ex.nodes.contains(&"(0)".to_string()));
        let unit_edges = ex.arrows.iter().filter(|a| a.unit).count();
        assert_eq!(unit_edges, ex.nodes.len());
        let dot = ex.to_dot();
        assert!(dot.starts_with("digraph groupoid {"));
        assert!(!dot.contains("B[1;0;0;0]") && !dot.contains("B[2;0;0;0]"));
        // isotropy at a finite point is the rotation group
        assert!(dot.contains("\"(0)\" -> \"(0)\" [label=\"B[2;1;0;0]\"];"));
        assert!(dot.contains("\"(1)\" -> \"(0)\""));
        let json: serde_json::Value = serde_json::from_str(&ex.to_json()).unwrap();
        assert_eq!(json["arrows"].as_array().unwrap().len(), ex.arrows.len());
    }

    #[test]
    fn triples_share_the_layout() {
        let ts = SheuTriple::enumerate(1, 1, 1, 1);
        let ex = GroupoidExport::from_triples(1, &ts);
        assert_eq!(ex.arrows.len(), ts.len());
        assert!(ex.to_dot().contains("\"(1)\" -> \"(0)\" [label=\"(0; 1; 0)\"];"));
    }
}
