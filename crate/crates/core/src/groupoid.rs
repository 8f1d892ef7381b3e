//! Axiom checks shared by the germ groupoid and Sheu's groupoid.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;

use serde::Serialize;

use crate::error::Result;

pub trait Arrow: Clone + PartialEq + Display + Sized {
    type Unit: Ord + Clone + Display;

    fn range(&self) -> Self::Unit;
    fn source(&self) -> Self::Unit;
    fn unit(at: Self::Unit) -> Self;
    fn compose(&self, other: &Self) -> Result<Self>;
    fn inverse(&self) -> Self;
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub arrows: usize,
    pub pairs: usize,
    pub triples: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Units, inverses, and range/source of products over `arrows` and every
/// composable pair among them; associativity on every composable triple when
/// `associativity` is set.
pub fn check_axioms<A: Arrow>(arrows: &[A], associativity: bool) -> AxiomReport {
    let mut rep = AxiomReport {
        arrows: arrows.len(),
        ..Default::default()
    };
    let sources: Vec<A::Unit> = arrows.iter().map(A::source).collect();
    let mut by_range: BTreeMap<A::Unit, Vec<usize>> = BTreeMap::new();
    for (i, g) in arrows.iter().enumerate() {
        by_range.entry(g.range()).or_default().push(i);
    }
    let mut products: HashMap<(usize, usize), A> = HashMap::new();
    for (i, g) in arrows.iter().enumerate() {
        let inv = g.inverse();
        let src = &sources[i];
        if inv.inverse() != *g {
            rep.failures.push(format!("inverse of the inverse of {g}"));
        }
        if g.compose(&inv).ok() != Some(A::unit(g.range())) {
            rep.failures.push(format!("{g} times its inverse"));
        }
        if inv.compose(g).ok() != Some(A::unit(src.clone())) {
            rep.failures.push(format!("inverse of {g} times {g}"));
        }
        if A::unit(g.range()).compose(g).ok().as_ref() != Some(g)
            || g.compose(&A::unit(src.clone())).ok().as_ref() != Some(g)
        {
            rep.failures.push(format!("units around {g}"));
        }
        for &j in by_range.get(src).into_iter().flatten() {
            let h = &arrows[j];
            rep.pairs += 1;
            let gh = match g.compose(h) {
                Ok(gh) => gh,
                Err(e) => {
                    rep.failures.push(format!("{g} * {h}: {e}"));
                    continue;
                }
            };
            if gh.range() != g.range() || gh.source() != sources[j] {
                rep.failures.push(format!("{g} * {h}: range or source"));
            }
            if h.inverse().compose(&inv).ok() != Some(gh.inverse()) {
                rep.failures.push(format!("inverse of {g} * {h}"));
            }
            if associativity {
                products.insert((i, j), gh);
            }
        }
    }
    for (&(i, j), gh) in &products {
        for &k in by_range.get(&sources[j]).into_iter().flatten() {
            rep.triples += 1;
            let lhs = gh.compose(&arrows[k]);
            let rhs = products.get(&(j, k)).map(|hk| arrows[i].compose(hk));
            match (lhs, rhs) {
                (Ok(a), Some(Ok(b))) if a == b => {}
                _ => rep
                    .failures
                    .push(format!("({} * {}) * {}", arrows[i], arrows[j], arrows[k])),
            }
        }
    }
    rep.failures.sort();
    rep
}
