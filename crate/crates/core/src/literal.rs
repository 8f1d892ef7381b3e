//! Text and JSON forms of the engine's values.
//!
//! ```text
//! factor   := "P(" u "," u ")" | "F(" u "," u ")" | "I"
//! monomial := "ZERO" | "[" factor ("|" factor)* "]" ( "*t^" i )?
//! element  := "0" | "B[" level ";" i ";" u,..,u ";" u,..,u "]" | letter+
//! letter   := "Z[" k "]" | "Z*[" k "]"
//! idem     := "p_" level "(" u,..,u ")"
//! index    := "(" entry ("," entry)* ")"        entry := u | "inf"
//! triple   := "(" i ";" i,..,i ";" entry,..,entry ")"
//! germ     := index "@" element
//! ```
//!
//! Whitespace is ignored. Positions in errors are byte offsets into the
//! whitespace-free input.

use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::germ::Germ;
use crate::index::{Entry, ExtendedIndex};
use crate::monomial::{Monomial, PrimitiveFactor};
use crate::semigroup::{eval_word, Idempotent, Letter, TElement};
use crate::sheu::SheuTriple;

struct Cursor {
    text: Vec<u8>,
    pos: usize,
}

impl Cursor {
    fn new(s: &str) -> Cursor {
        Cursor {
            text: s.bytes().filter(|b| !b.is_ascii_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn rest(&self) -> &[u8] {
        &self.text[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn end(&self) -> Result<()> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits"))
    }

    fn unsigned(&mut self) -> Result<u64> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn signed(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = self.eat("-");
        let d = self.digits()?;
        let v: std::result::Result<i64, _> = if neg { format!("-{d}").parse() } else { d.parse() };
        v.or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn list<T>(&mut self, sep: &str, close: &str, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(sep) {
            out.push(item(self)?);
        }
        if !self.rest().starts_with(close.as_bytes()) {
            return self.err(format!("expected `{sep}` or `{close}`"));
        }
        Ok(out)
    }

    fn entry(&mut self) -> Result<Entry> {
        if self.eat("inf") {
            Ok(Entry::Inf)
        } else {
            Ok(Entry::Fin(self.unsigned()?))
        }
    }

    fn factor(&mut self) -> Result<PrimitiveFactor> {
        if self.eat("I") {
            return Ok(PrimitiveFactor::Identity);
        }
        let pinched = if self.eat("P(") {
            true
        } else if self.eat("F(") {
            false
        } else {
            return self.err("expected `P(`, `F(` or `I`");
        };
        let a = self.unsigned()?;
        self.expect(",")?;
        let b = self.unsigned()?;
        self.expect(")")?;
        Ok(if pinched {
            PrimitiveFactor::Pinched(a, b)
        } else {
            PrimitiveFactor::free(a, b)
        })
    }

    fn monomial(&mut self) -> Result<Monomial> {
        if self.eat("ZERO") {
            return Ok(Monomial::Zero);
        }
        self.expect("[")?;
        let factors = self.list("|", "]", Self::factor)?;
        self.expect("]")?;
        let z = if self.eat("*t^") { self.signed()? } else { 0 };
        Ok(Monomial::new(factors, z))
    }

    fn index(&mut self) -> Result<ExtendedIndex> {
        self.expect("(")?;
        let entries = self.list(",", ")", Self::entry)?;
        self.expect(")")?;
        Ok(ExtendedIndex::new(entries))
    }

    fn letter(&mut self) -> Result<Letter> {
        let star = if self.eat("Z*[") {
            true
        } else if self.eat("Z[") {
            false
        } else {
            return self.err("expected `Z[` or `Z*[`");
        };
        let start = self.pos;
        let k = self.unsigned()?;
        if k == 0 {
            self.pos = start;
            return self.err("generator indices start at 1");
        }
        self.expect("]")?;
        Ok(Letter {
            index: k as usize,
            star,
        })
    }

    fn element(&mut self) -> Result<ElementLiteral> {
        if self.eat("0") {
            return Ok(ElementLiteral::Zero);
        }
        if self.eat("B[") {
            let start = self.pos;
            let level = self.unsigned()? as usize;
            self.expect(";")?;
            let r = self.signed()?;
            self.expect(";")?;
            let m = self.list(",", ";", Self::unsigned)?;
            self.expect(";")?;
            let n_pos = self.pos;
            let n = self.list(",", "]", Self::unsigned)?;
            self.expect("]")?;
            if m.len() != n.len() {
                self.pos = n_pos;
                return self.err(format!("m has {} entries but n has {}", m.len(), n.len()));
            }
            return match TElement::new(level, r, &m, &n) {
                Ok(t) => Ok(ElementLiteral::Explicit(t)),
                Err(e) => {
                    self.pos = start;
                    self.err(e.to_string())
                }
            };
        }
        if self.peek() == Some(b'Z') {
            let mut word = vec![self.letter()?];
            while self.peek() == Some(b'Z') {
                word.push(self.letter()?);
            }
            return Ok(ElementLiteral::Word(word));
        }
        self.err("expected `0`, `B[` or `Z`")
    }

    fn idempotent(&mut self) -> Result<Idempotent> {
        self.expect("p_")?;
        let start = self.pos;
        let level = self.unsigned()? as usize;
        self.expect("(")?;
        let m = self.list(",", ")", Self::unsigned)?;
        self.expect(")")?;
        Idempotent::new(level, &m).or_else(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }

    fn triple(&mut self) -> Result<(i64, Vec<i64>, ExtendedIndex)> {
        self.expect("(")?;
        let z = self.signed()?;
        self.expect(";")?;
        let x = self.list(",", ";", Self::signed)?;
        self.expect(";")?;
        let w = self.list(",", ")", Self::entry)?;
        self.expect(")")?;
        Ok((z, x, ExtendedIndex::new(w)))
    }
}

fn parse_all<T>(s: &str, f: impl FnOnce(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut c = Cursor::new(s);
    let v = f(&mut c)?;
    c.end()?;
    Ok(v)
}

/// An element as written; generator words need `ℓ` to become a [`TElement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementLiteral {
    Zero,
    Explicit(TElement),
    Word(Vec<Letter>),
}

impl ElementLiteral {
    /// `ℓ` fixed by the literal itself.
    pub fn ell(&self) -> Option<usize> {
        match self {
            ElementLiteral::Explicit(t) => t.ell(),
            _ => None,
        }
    }

    pub fn resolve(&self, ell: usize) -> Result<TElement> {
        match self {
            ElementLiteral::Zero => Ok(TElement::Zero),
            ElementLiteral::Explicit(t) => match t.ell() {
                Some(e) if e != ell => Err(Error::DimensionMismatch {
                    expected: ell,
                    found: e,
                }),
                _ => Ok(t.clone()),
            },
            ElementLiteral::Word(w) => eval_word(ell, w),
        }
    }
}

impl FromStr for ElementLiteral {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, Cursor::element)
    }
}

/// A `B[..]` literal or `0`; generator words are rejected since they carry no `ℓ`.
impl FromStr for TElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<ElementLiteral>()? {
            ElementLiteral::Zero => Ok(TElement::Zero),
            ElementLiteral::Explicit(t) => Ok(t),
            ElementLiteral::Word(_) => Err(Error::Parse {
                position: 0,
                message: "generator words need ell; use ElementLiteral::resolve".into(),
            }),
        }
    }
}

pub fn parse_element(s: &str, ell: usize) -> Result<TElement> {
    s.parse::<ElementLiteral>()?.resolve(ell)
}

impl FromStr for PrimitiveFactor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, Cursor::factor)
    }
}

impl FromStr for Monomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, Cursor::monomial)
    }
}

impl FromStr for ExtendedIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, Cursor::index)
    }
}

impl FromStr for Idempotent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_all(s, Cursor::idempotent)
    }
}

impl FromStr for SheuTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (z, x, w) = parse_all(s, Cursor::triple)?;
        SheuTriple::new(z, &x, w).map_err(|e| Error::Parse {
            position: 0,
            message: e.to_string(),
        })
    }
}

/// A germ written as `index@element`, kept in the form given.
pub fn parse_germ_representative(s: &str) -> Result<Germ> {
    let (base, elem, at) = parse_all(s, |c| {
        let base = c.index()?;
        c.expect("@")?;
        let at = c.pos;
        let elem = c.element()?;
        Ok((base, elem, at))
    })?;
    let relocate = |e: Error| Error::Parse {
        position: at,
        message: e.to_string(),
    };
    let elem = elem.resolve(base.ell()).map_err(relocate)?;
    Germ::representative(base, elem).map_err(relocate)
}

impl FromStr for Germ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_germ_representative(s)?.canonical())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ElementJson {
    Zero {
        zero: bool,
    },
    B {
        level: usize,
        r: i64,
        m: Vec<u64>,
        n: Vec<u64>,
    },
}

impl Serialize for TElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TElement::Zero => ElementJson::Zero { zero: true },
            TElement::B(b) => ElementJson::B {
                level: b.level(),
                r: b.r(),
                m: b.m().to_vec(),
                n: b.n().to_vec(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ElementJson::deserialize(d)? {
            ElementJson::Zero { zero: true } => Ok(TElement::Zero),
            ElementJson::Zero { zero: false } => Err(D::Error::custom("`zero` must be true")),
            ElementJson::B { level, r, m, n } => TElement::new(level, r, &m, &n).map_err(D::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GermJson {
    base: String,
    elem: String,
}

impl Serialize for Germ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GermJson {
            base: self.base().to_string(),
            elem: self.elem().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Germ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GermJson::deserialize(d)?;
        format!("{}@{}", g.base, g.elem).parse().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    z: i64,
    x: Vec<i64>,
    w: ExtendedIndex,
}

impl Serialize for SheuTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TripleJson {
            z: self.z(),
            x: self.x().to_vec(),
            w: self.w().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SheuTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = TripleJson::deserialize(d)?;
        SheuTriple::new(t.z, &t.x, t.w).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn position(e: Error) -> usize {
        match e {
            Error::Parse { position, .. } => position,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn element_examples() {
        let t: TElement = "B[3;1;0,0;1,0]".parse().unwrap();
        assert_eq!(t, TElement::new(3, 1, &[0, 0], &[1, 0]).unwrap());
        assert_eq!(
            " B[ 3 ; -2 ; 1 , 0 ; 2 , 2 ] ".parse::<TElement>().unwrap().to_string(),
            "B[3;-2;1,0;2,2]"
        );
        assert_eq!("0".parse::<TElement>().unwrap(), TElement::Zero);
        assert_eq!(
            parse_element("Z*[1]", 2).unwrap(),
            TElement::generator(2, 1).unwrap().star()
        );
        assert_eq!(parse_element("Z*[1]Z[2]", 2).unwrap(), TElement::Zero);
        assert!(parse_element("Z[4]", 2).is_err());
        assert!(matches!(
            parse_element("B[3;1;0,0;1,0]", 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn error_positions() {
        assert_eq!(position("B[3;1;0,0;1,0".parse::<TElement>().unwrap_err()), 13);
        assert_eq!(position("B[3;1;0,0;1]".parse::<TElement>().unwrap_err()), 10);
        assert_eq!(position("B[3;x;0;0]".parse::<TElement>().unwrap_err()), 4);
        assert_eq!(position("(1,inf)x".parse::<ExtendedIndex>().unwrap_err()), 7);
        assert_eq!(position("Z[0]".parse::<ElementLiteral>().unwrap_err()), 2);
        assert_eq!(position("(0,0)@B[2;0;7,1;0,2]".parse::<Germ>().unwrap_err()), 6);
    }

    #[test]
    fn other_literals() {
        let k: ExtendedIndex = "(3,inf)".parse().unwrap();
        assert_eq!(k, ExtendedIndex::new([Entry::Fin(3), Entry::Inf]));
        let p: Idempotent = "p_2(1,0)".parse().unwrap();
        assert_eq!(p.to_string(), "p_2(1,0)");
        let m: Monomial = "[P(1,0)|F(2,1)]*t^-3".parse().unwrap();
        assert_eq!(m.to_string(), "[P(1,0)|F(2,1)]*t^-3");
        assert_eq!("[I|F(0,0)]".parse::<Monomial>().unwrap(), Monomial::identity(2));
        let t: SheuTriple = "(-1; -2,3; 5,inf)".parse().unwrap();
        assert_eq!(t.to_string(), "(-1; -2,3; 5,inf)");
        assert!("(1; 0,0; inf,inf)".parse::<SheuTriple>().is_err());
        let g: Germ = "(5,inf)@B[2;0;5,3;3,6]".parse().unwrap();
        assert_eq!(g.to_string(), "(5,inf)@B[2;0;5,0;3,3]");
        let unit: Germ = "(inf,inf)@Z[1]Z*[1]".parse().unwrap();
        assert_eq!(unit, Germ::unit(ExtendedIndex::infinite(2)));
    }

    #[test]
    fn json_forms() {
        let t = TElement::new(3, 1, &[0, 0], &[1, 0]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"level":3,"r":1,"m":[0,0],"n":[1,0]}"#);
        assert_eq!(serde_json::from_str::<TElement>(&s).unwrap(), t);
        assert_eq!(serde_json::to_string(&TElement::Zero).unwrap(), r#"{"zero":true}"#);
        assert_eq!(
            serde_json::from_str::<TElement>(r#"{"zero":true}"#).unwrap(),
            TElement::Zero
        );
        let g: Germ = "(5,inf)@B[2;0;5,0;3,3]".parse().unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"base":"(5,inf)","elem":"B[2;0;5,0;3,3]"}"#);
        assert_eq!(serde_json::from_str::<Germ>(&s).unwrap(), g);
        let tr: SheuTriple = "(-1; -2,3; 5,inf)".parse().unwrap();
        let s = serde_json::to_string(&tr).unwrap();
        assert_eq!(s, r#"{"z":-1,"x":[-2,3],"w":[5,"inf"]}"#);
        assert_eq!(serde_json::from_str::<SheuTriple>(&s).unwrap(), tr);
    }

    fn element() -> impl Strategy<Value = TElement> {
        (
            1usize..=3,
            1usize..=4,
            -5i64..=5,
            prop::collection::vec((0u64..6, 0u64..6), 3),
        )
            .prop_filter_map("level within ell + 1", |(ell, level, r, mn)| {
                let m: Vec<u64> = mn.iter().take(ell).map(|p| p.0).collect();
                let n: Vec<u64> = mn.iter().take(ell).map(|p| p.1).collect();
                TElement::new(level, r, &m, &n).ok()
            })
    }

    fn index() -> impl Strategy<Value = ExtendedIndex> {
        prop::collection::vec(prop_oneof![(0u64..9).prop_map(Entry::Fin), Just(Entry::Inf)], 1..4)
            .prop_map(ExtendedIndex::new)
    }

    proptest! {
        #[test]
        fn element_text_round_trip(t in element()) {
            prop_assert_eq!(t.to_string().parse::<TElement>().unwrap(), t.clone());
            let json = serde_json::to_string(&t).unwrap();
            prop_assert_eq!(serde_json::from_str::<TElement>(&json).unwrap(), t);
        }

        #[test]
        fn index_round_trip(k in index()) {
            prop_assert_eq!(k.to_string().parse::<ExtendedIndex>().unwrap(), k);
        }

        #[test]
        fn monomial_round_trip(t in element()) {
            let m = t.to_monomial();
            prop_assert_eq!(m.to_string().parse::<Monomial>().unwrap(), m);
        }

        #[test]
        fn germ_round_trip(k in index(), t in element()) {
            if let Ok(g) = Germ::new(k, t) {
                prop_assert_eq!(g.to_string().parse::<Germ>().unwrap(), g.clone());
                let json = serde_json::to_string(&g).unwrap();
                prop_assert_eq!(serde_json::from_str::<Germ>(&json).unwrap(), g);
            }
        }

        #[test]
        fn triple_round_trip(z in -4i64..=4, x in prop::collection::vec(-4i64..=4, 2), w in prop::collection::vec(prop_oneof![(0u64..5).prop_map(Entry::Fin), Just(Entry::Inf)], 2)) {
            if let Ok(t) = SheuTriple::new(z, &x, ExtendedIndex::new(w)) {
                prop_assert_eq!(t.to_string().parse::<SheuTriple>().unwrap(), t.clone());
                let json = serde_json::to_string(&t).unwrap();
                prop_assert_eq!(serde_json::from_str::<SheuTriple>(&json).unwrap(), t);
            }
        }
    }
}
