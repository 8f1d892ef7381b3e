//! Audit of the closed-form multiplication rules for `B_i(r, m, n)` against
//! [`TElement::mul`].
//!
//! Each rule is checked literally over every pair of enumerated elements it
//! applies to. Where a stated rule admits more than one reading (an unbound
//! output subscript, or a pair of overlapping side conditions) every reading is
//! evaluated and the report says which ones hold.

use serde::Serialize;

use super::{BElement, TElement};

const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct ReadingResult {
    pub reading: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
}

impl ReadingResult {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub name: String,
    pub statement: String,
    pub readings: Vec<ReadingResult>,
    pub notes: Vec<String>,
}

impl RelationReport {
    pub fn reading(&self, label: &str) -> Option<&ReadingResult> {
        self.readings.iter().find(|r| r.reading == label)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationAudit {
    pub ell: usize,
    pub bound: u64,
    pub elements: usize,
    pub relations: Vec<RelationReport>,
    /// Pairs `B_i·B_i` (`i <= ℓ`) satisfying both stated side conditions.
    pub overlap_cases: usize,
    /// Readings of the two same-level rules that hold with zero counterexamples
    /// and together cover every same-level product.
    pub consistent_same_level_readings: Vec<String>,
}

pub const LOWER_TIMES_HIGHER: &str = "B_i B_j, i<j";
pub const SAME_LEVEL: &str = "B_i B_i, i<=l";
pub const TOP_LEVEL: &str = "B_{l+1} B_{l+1}";
pub const INVOLUTION: &str = "B_i(r,m,n)^*";

/// Inequality between `n_i` and `m'_i` guarding a same-level rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Guard {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Guard {
    fn holds(self, n_i: u64, mp_i: u64) -> bool {
        match self {
            Guard::Le => n_i <= mp_i,
            Guard::Lt => n_i < mp_i,
            Guard::Ge => n_i >= mp_i,
            Guard::Gt => n_i > mp_i,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Guard::Le => "<=",
            Guard::Lt => "<",
            Guard::Ge => ">=",
            Guard::Gt => ">",
        }
    }

    fn mirrored(self) -> Guard {
        match self {
            Guard::Le => Guard::Ge,
            Guard::Lt => Guard::Gt,
            Guard::Ge => Guard::Le,
            Guard::Gt => Guard::Lt,
        }
    }
}

struct Tally {
    reading: String,
    cases: usize,
    failures: usize,
    counterexamples: Vec<String>,
}

impl Tally {
    fn new(reading: impl Into<String>) -> Self {
        Tally {
            reading: reading.into(),
            cases: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, lhs: (&TElement, &TElement), predicted: &TElement, actual: &TElement) {
        self.cases += 1;
        if predicted != actual {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(format!(
                    "{} * {}: rule gives {}, product is {}",
                    lhs.0, lhs.1, predicted, actual
                ));
            }
        }
    }

    fn finish(self) -> ReadingResult {
        ReadingResult {
            reading: self.reading,
            cases: self.cases,
            failures: self.failures,
            counterexamples: self.counterexamples,
        }
    }
}

fn prefix_eq(a: &[u64], b: &[u64], len: usize) -> bool {
    a[..len] == b[..len]
}

fn make(level: usize, r: i64, m: &[u64], n: &[u64]) -> TElement {
    TElement::new(level, r, m, n).expect("rule output in range")
}

/// `B_i(r,m,n) B_j(r',m',n') = δ 1_{[n_i,∞)}(m'_i) B_k(r', m'', n')` with
/// `m'' = (m_1..m_{i-1}, m_i+m'_i-n_i, m'_{i+1}..m'_ℓ)`.
fn lower_times_higher(a: &BElement, b: &BElement, out_level: usize) -> TElement {
    let i = a.level;
    if !prefix_eq(&a.n, &b.m, i - 1) || b.m[i - 1] < a.n[i - 1] {
        return TElement::Zero;
    }
    let mut m2: Vec<u64> = b.m.to_vec();
    m2[..i - 1].copy_from_slice(&a.m[..i - 1]);
    m2[i - 1] = a.m[i - 1] + b.m[i - 1] - a.n[i - 1];
    make(out_level, b.r, &m2, &b.n)
}

/// Same level, first stated form: `δ B_i(r', m'', n')`,
/// `m'' = (m_1..m_{i-1}, m_i+m'_i-n_i, m'_{i+1}..)`.
fn same_level_grow_m(a: &BElement, b: &BElement) -> TElement {
    let i = a.level;
    if !prefix_eq(&a.n, &b.m, i - 1) {
        return TElement::Zero;
    }
    let grown = a.m[i - 1] as i64 + b.m[i - 1] as i64 - a.n[i - 1] as i64;
    if grown < 0 {
        return TElement::Zero;
    }
    let mut m2: Vec<u64> = b.m.to_vec();
    m2[..i - 1].copy_from_slice(&a.m[..i - 1]);
    m2[i - 1] = grown as u64;
    make(i, b.r, &m2, &b.n)
}

/// Same level, second stated form: `δ B_i(r', m, n'')`,
/// `n'' = (n'_1..n'_{i-1}, n'_i+n_i-m'_i, n'_{i+1}..)`.
fn same_level_grow_n(a: &BElement, b: &BElement) -> TElement {
    let i = a.level;
    if !prefix_eq(&a.n, &b.m, i - 1) {
        return TElement::Zero;
    }
    let grown = b.n[i - 1] as i64 + a.n[i - 1] as i64 - b.m[i - 1] as i64;
    if grown < 0 {
        return TElement::Zero;
    }
    let mut n2: Vec<u64> = b.n.to_vec();
    n2[i - 1] = grown as u64;
    make(i, b.r, &a.m, &n2)
}

/// `B_{ℓ+1}(r,m,n) B_{ℓ+1}(r',m',n') = δ_{n,m'} B_{ℓ+1}(r+r', m, n')`.
fn top_level(a: &BElement, b: &BElement) -> TElement {
    if a.n != b.m {
        return TElement::Zero;
    }
    make(a.level, a.r + b.r, &a.m, &b.n)
}

pub fn check_product_rules(ell: usize, bound: u64) -> RelationAudit {
    let elements: Vec<TElement> = TElement::enumerate(ell, bound, bound as i64)
        .into_iter()
        .filter(|e| !e.is_zero())
        .collect();
    let top = ell + 1;

    let mut lower_j = Tally::new("output level k = j");
    let mut lower_i = Tally::new("output level k = i");
    let mut top_rule = Tally::new("as stated");
    let mut involution = Tally::new("as stated");

    // Same-level rules under each orientation of their guards.
    let first_guards = [Guard::Le, Guard::Ge];
    let second_guards = [Guard::Lt, Guard::Gt, Guard::Ge];
    let mut first: Vec<Tally> = first_guards
        .iter()
        .map(|g| Tally::new(format!("n_i {} m'_i", g.symbol())))
        .collect();
    let mut second: Vec<Tally> = second_guards
        .iter()
        .map(|g| Tally::new(format!("n_i {} m'_i", g.symbol())))
        .collect();
    let mut overlap_cases = 0;

    for s in &elements {
        let a = s.as_b().expect("non-zero");
        let via_adjoint = TElement::from_monomial(&s.to_monomial().adjoint()).expect("T-shaped");
        involution.record((s, s), &make(a.level, -a.r, &a.n, &a.m), &via_adjoint);
        for u in &elements {
            let b = u.as_b().expect("non-zero");
            let actual = s.mul(u).expect("same ell");
            if a.level < b.level {
                lower_j.record((s, u), &lower_times_higher(a, b, b.level), &actual);
                lower_i.record((s, u), &lower_times_higher(a, b, a.level), &actual);
            } else if a.level == b.level && a.level < top {
                let (n_i, mp_i) = (a.n[a.level - 1], b.m[a.level - 1]);
                if Guard::Le.holds(n_i, mp_i) && Guard::Lt.holds(n_i, mp_i) {
                    overlap_cases += 1;
                }
                for (g, t) in first_guards.iter().zip(first.iter_mut()) {
                    if g.holds(n_i, mp_i) {
                        t.record((s, u), &same_level_grow_m(a, b), &actual);
                    }
                }
                for (g, t) in second_guards.iter().zip(second.iter_mut()) {
                    if g.holds(n_i, mp_i) {
                        t.record((s, u), &same_level_grow_n(a, b), &actual);
                    }
                }
            } else if a.level == top && b.level == top {
                top_rule.record((s, u), &top_level(a, b), &actual);
            }
        }
    }

    let first: Vec<ReadingResult> = first.into_iter().map(Tally::finish).collect();
    let second: Vec<ReadingResult> = second.into_iter().map(Tally::finish).collect();

    // Candidate readings of the pair: flip the orientation of neither, one or
    // both stated guards. A reading is consistent when both rules hold and the
    // guards jointly cover every same-level pair.
    let mut consistent = Vec::new();
    for (flip_first, flip_second) in [(false, false), (true, false), (false, true), (true, true)] {
        let g1 = if flip_first { Guard::Le.mirrored() } else { Guard::Le };
        let g2 = if flip_second { Guard::Lt.mirrored() } else { Guard::Lt };
        let r1 = &first[first_guards.iter().position(|g| *g == g1).expect("listed")];
        let r2 = &second[second_guards.iter().position(|g| *g == g2).expect("listed")];
        let covers = (0..=2u64).all(|x| (0..=2u64).all(|y| g1.holds(x, y) || g2.holds(x, y)));
        if r1.holds() && r2.holds() && covers {
            consistent.push(format!(
                "first rule when n_i {} m'_i, second rule when n_i {} m'_i",
                g1.symbol(),
                g2.symbol()
            ));
        }
    }

    let mut same_level_readings = first;
    same_level_readings.extend(second.into_iter().map(|mut r| {
        r.reading = format!("second rule, {}", r.reading);
        r
    }));
    for r in same_level_readings.iter_mut().take(2) {
        r.reading = format!("first rule, {}", r.reading);
    }

    let relations = vec![
        RelationReport {
            name: LOWER_TIMES_HIGHER.into(),
            statement: "δ_{(n_1..n_{i-1}),(m'_1..m'_{i-1})} 1_{[n_i,∞)}(m'_i) B_k(r',m'',n'), \
                        m''=(m_1..m_{i-1},m_i+m'_i-n_i,m'_{i+1}..m'_l)"
                .into(),
            readings: vec![lower_j.finish(), lower_i.finish()],
            notes: vec!["the output subscript k is not bound by the statement; both k=j and k=i are checked".into()],
        },
        RelationReport {
            name: SAME_LEVEL.into(),
            statement: "n_i <= m'_i: δ B_i(r',m'',n') with m''_i=m_i+m'_i-n_i; \
                        n_i < m'_i: δ B_i(r',m,n'') with n''_i=n'_i+n_i-m'_i"
                .into(),
            readings: same_level_readings,
            notes: vec![format!(
                "{overlap_cases} pairs satisfy both stated guards n_i <= m'_i and n_i < m'_i"
            )],
        },
        RelationReport {
            name: TOP_LEVEL.into(),
            statement: "δ_{n,m'} B_{l+1}(r+r',m,n')".into(),
            readings: vec![top_rule.finish()],
            notes: vec![],
        },
        RelationReport {
            name: INVOLUTION.into(),
            statement: "B_i(-r,n,m), compared with the leg-wise adjoint of the word".into(),
            readings: vec![involution.finish()],
            notes: vec![],
        },
    ];

    RelationAudit {
        ell,
        bound,
        elements: elements.len(),
        relations,
        overlap_cases,
        consistent_same_level_readings: consistent,
    }
}
