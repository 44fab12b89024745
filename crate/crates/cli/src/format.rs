//! Line-oriented text blocks: FCAT v1 categories, GPD v1 groupoids (a
//! category block carrying a `groupoid` line), FMAP v1 functors and FAMILY v1
//! groupoid families.
//!
//! ```text
//! category C
//! object a
//! morphism f : a -> b
//! identity a = id_a
//! compose g . f = h
//!
//! functor F : C -> D
//! obj a => x
//! mor f => u
//!
//! family G
//! member Z2
//! terminal T
//! product A B = P proj p1 p2
//!
//! fibration F
//! ```
//!
//! Identifiers are any run of non-whitespace characters. `#` starts a comment
//! when it begins a token. Comment lines before the first block are kept as
//! the document header.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use eqfib_core::fincat::RawCategory;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("line {line}: {what} {name} is not declared")]
    DanglingReference {
        line: usize,
        what: &'static str,
        name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryBlock {
    pub raw: RawCategory,
    pub groupoid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorBlock {
    pub name: String,
    pub source: String,
    pub target: String,
    pub objs: Vec<(String, String)>,
    pub mors: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLine {
    pub left: String,
    pub right: String,
    pub vertex: String,
    pub proj1: String,
    pub proj2: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyBlock {
    pub name: String,
    pub members: Vec<String>,
    pub terminal: Option<String>,
    pub products: Vec<ProductLine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Category(CategoryBlock),
    Functor(FunctorBlock),
    Family(FamilyBlock),
    /// Names the functor to treat as the projection of a fibration.
    Fibration(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub header: Vec<String>,
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn categories(&self) -> impl Iterator<Item = &CategoryBlock> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Category(c) => Some(c),
            _ => None,
        })
    }
    pub fn functors(&self) -> impl Iterator<Item = &FunctorBlock> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Functor(f) => Some(f),
            _ => None,
        })
    }
    pub fn families(&self) -> impl Iterator<Item = &FamilyBlock> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Family(f) => Some(f),
            _ => None,
        })
    }
    pub fn category(&self, name: &str) -> Option<&CategoryBlock> {
        self.categories().find(|c| c.raw.name == name)
    }
    pub fn functor(&self, name: &str) -> Option<&FunctorBlock> {
        self.functors().find(|f| f.name == name)
    }
    /// The designated projection, or the only functor in the document.
    pub fn fibration(&self) -> Option<&FunctorBlock> {
        let named = self.blocks.iter().find_map(|b| match b {
            Block::Fibration(n) => Some(n.as_str()),
            _ => None,
        });
        match named {
            Some(n) => self.functor(n),
            None if self.functors().count() == 1 => self.functors().next(),
            None => None,
        }
    }
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((s, c))) => {
                out.push(Tok {
                    text: &line[s..i],
                    col: c,
                });
                start = None;
            }
            (false, None) => {
                if ch == '#' {
                    return out;
                }
                start = Some((i, col + 1));
            }
            _ => {}
        }
    }
    if let Some((s, c)) = start {
        out.push(Tok {
            text: &line[s..],
            col: c,
        });
    }
    out
}

struct Line<'a> {
    no: usize,
    end_col: usize,
    toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, i: usize, expected: impl Into<String>) -> ParseError {
        let col = self.toks.get(i).map_or(self.end_col, |t| t.col);
        ParseError::Syntax {
            line: self.no,
            col,
            expected: expected.into(),
        }
    }

    fn ident(&self, i: usize, what: &str) -> Result<String, ParseError> {
        self.toks
            .get(i)
            .map(|t| t.text.to_string())
            .ok_or_else(|| self.err(i, what))
    }

    fn lit(&self, i: usize, lit: &str) -> Result<(), ParseError> {
        match self.toks.get(i) {
            Some(t) if t.text == lit => Ok(()),
            _ => Err(self.err(i, format!("`{lit}`"))),
        }
    }

    fn done(&self, n: usize) -> Result<(), ParseError> {
        if self.toks.len() > n {
            Err(self.err(n, "end of line"))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy)]
enum RefKind {
    Object,
    Morphism,
    Category,
    Functor,
}

struct Ref {
    line: usize,
    kind: RefKind,
    /// Category the name lives in, for objects and morphisms.
    scope: String,
    name: String,
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut doc = Document::default();
    let mut refs: Vec<Ref> = Vec::new();
    let mut seen_block = false;
    let push_ref = |refs: &mut Vec<Ref>, line: usize, kind, scope: &str, name: &str| {
        refs.push(Ref {
            line,
            kind,
            scope: scope.to_string(),
            name: name.to_string(),
        })
    };

    for (i, raw) in text.lines().enumerate() {
        let l = Line {
            no: i + 1,
            end_col: raw.chars().count() + 1,
            toks: tokenize(raw),
        };
        if l.toks.is_empty() {
            if !seen_block && raw.trim_start().starts_with('#') {
                doc.header.push(raw.trim_end().to_string());
            }
            continue;
        }
        let kw = l.toks[0].text;
        match kw {
            "category" => {
                seen_block = true;
                let name = l.ident(1, "category name")?;
                l.done(2)?;
                doc.blocks.push(Block::Category(CategoryBlock { raw: RawCategory::new(name), groupoid: false }));
            }
            "functor" => {
                seen_block = true;
                let name = l.ident(1, "functor name")?;
                l.lit(2, ":")?;
                let source = l.ident(3, "source category")?;
                l.lit(4, "->")?;
                let target = l.ident(5, "target category")?;
                l.done(6)?;
                push_ref(&mut refs, l.no, RefKind::Category, "", &source);
                push_ref(&mut refs, l.no, RefKind::Category, "", &target);
                doc.blocks.push(Block::Functor(FunctorBlock { name, source, target, objs: vec![], mors: vec![] }));
            }
            "family" => {
                seen_block = true;
                let name = l.ident(1, "family name")?;
                l.done(2)?;
                doc.blocks.push(Block::Family(FamilyBlock { name, members: vec![], terminal: None, products: vec![] }));
            }
            "fibration" => {
                seen_block = true;
                let name = l.ident(1, "functor name")?;
                l.done(2)?;
                push_ref(&mut refs, l.no, RefKind::Functor, "", &name);
                doc.blocks.push(Block::Fibration(name));
            }
            "groupoid" | "object" | "morphism" | "identity" | "compose" => {
                let Some(Block::Category(c)) = doc.blocks.last_mut() else {
                    return Err(l.err(0, "a `category` line before this one"));
                };
                let scope = c.raw.name.clone();
                match kw {
                    "groupoid" => {
                        l.done(1)?;
                        c.groupoid = true;
                    }
                    "object" => {
                        c.raw.objects.push(l.ident(1, "object name")?);
                        l.done(2)?;
                    }
                    "morphism" => {
                        let name = l.ident(1, "morphism name")?;
                        l.lit(2, ":")?;
                        let src = l.ident(3, "source object")?;
                        l.lit(4, "->")?;
                        let tgt = l.ident(5, "target object")?;
                        l.done(6)?;
                        push_ref(&mut refs, l.no, RefKind::Object, &scope, &src);
                        push_ref(&mut refs, l.no, RefKind::Object, &scope, &tgt);
                        c.raw.morphisms.push((name, src, tgt));
                    }
                    "identity" => {
                        let obj = l.ident(1, "object name")?;
                        l.lit(2, "=")?;
                        let mor = l.ident(3, "morphism name")?;
                        l.done(4)?;
                        push_ref(&mut refs, l.no, RefKind::Object, &scope, &obj);
                        push_ref(&mut refs, l.no, RefKind::Morphism, &scope, &mor);
                        c.raw.identities.push((obj, mor));
                    }
                    _ => {
                        let g = l.ident(1, "morphism name")?;
                        l.lit(2, ".")?;
                        let f = l.ident(3, "morphism name")?;
                        l.lit(4, "=")?;
                        let h = l.ident(5, "morphism name")?;
                        l.done(6)?;
                        for m in [&g, &f, &h] {
                            push_ref(&mut refs, l.no, RefKind::Morphism, &scope, m);
                        }
                        c.raw.compositions.push((g, f, h));
                    }
                }
            }
            "obj" | "mor" => {
                let Some(Block::Functor(f)) = doc.blocks.last_mut() else {
                    return Err(l.err(0, "a `functor` line before this one"));
                };
                let a = l.ident(1, "source name")?;
                l.lit(2, "=>")?;
                let b = l.ident(3, "target name")?;
                l.done(4)?;
                let kind = if kw == "obj" { RefKind::Object } else { RefKind::Morphism };
                push_ref(&mut refs, l.no, kind, &f.source, &a);
                push_ref(&mut refs, l.no, kind, &f.target, &b);
                if kw == "obj" {
                    f.objs.push((a, b));
                } else {
                    f.mors.push((a, b));
                }
            }
            "member" | "terminal" | "product" => {
                let Some(Block::Family(fam)) = doc.blocks.last_mut() else {
                    return Err(l.err(0, "a `family` line before this one"));
                };
                match kw {
                    "member" => {
                        let m = l.ident(1, "member name")?;
                        l.done(2)?;
                        push_ref(&mut refs, l.no, RefKind::Category, "", &m);
                        fam.members.push(m);
                    }
                    "terminal" => {
                        let m = l.ident(1, "member name")?;
                        l.done(2)?;
                        push_ref(&mut refs, l.no, RefKind::Category, "", &m);
                        fam.terminal = Some(m);
                    }
                    _ => {
                        let left = l.ident(1, "member name")?;
                        let right = l.ident(2, "member name")?;
                        l.lit(3, "=")?;
                        let vertex = l.ident(4, "member name")?;
                        l.lit(5, "proj")?;
                        let proj1 = l.ident(6, "projection functor")?;
                        let proj2 = l.ident(7, "projection functor")?;
                        l.done(8)?;
                        for m in [&left, &right, &vertex] {
                            push_ref(&mut refs, l.no, RefKind::Category, "", m);
                        }
                        for p in [&proj1, &proj2] {
                            push_ref(&mut refs, l.no, RefKind::Functor, "", p);
                        }
                        fam.products.push(ProductLine { left, right, vertex, proj1, proj2 });
                    }
                }
            }
            _ => {
                return Err(l.err(
                    0,
                    "one of category, groupoid, object, morphism, identity, compose, functor, obj, mor, family, member, terminal, product, fibration",
                ))
            }
        }
    }
    resolve(&doc, &refs)?;
    Ok(doc)
}

fn resolve(doc: &Document, refs: &[Ref]) -> Result<(), ParseError> {
    let mut objects: HashMap<&str, HashSet<&str>> = HashMap::new();
    let mut morphisms: HashMap<&str, HashSet<&str>> = HashMap::new();
    for c in doc.categories() {
        objects
            .entry(&c.raw.name)
            .or_default()
            .extend(c.raw.objects.iter().map(String::as_str));
        morphisms
            .entry(&c.raw.name)
            .or_default()
            .extend(c.raw.morphisms.iter().map(|m| m.0.as_str()));
    }
    let functors: HashSet<&str> = doc.functors().map(|f| f.name.as_str()).collect();
    for r in refs {
        let (what, known) = match r.kind {
            RefKind::Category => ("category", objects.contains_key(r.name.as_str())),
            RefKind::Functor => ("functor", functors.contains(r.name.as_str())),
            RefKind::Object => (
                "object",
                objects
                    .get(r.scope.as_str())
                    .is_some_and(|s| s.contains(r.name.as_str())),
            ),
            RefKind::Morphism => (
                "morphism",
                morphisms
                    .get(r.scope.as_str())
                    .is_some_and(|s| s.contains(r.name.as_str())),
            ),
        };
        // A reference into an undeclared category is reported once, at the
        // functor header.
        let scoped = matches!(r.kind, RefKind::Object | RefKind::Morphism);
        if !known && !(scoped && !objects.contains_key(r.scope.as_str())) {
            return Err(ParseError::DanglingReference {
                line: r.line,
                what,
                name: r.name.clone(),
            });
        }
    }
    Ok(())
}

pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    for h in &doc.header {
        let _ = writeln!(out, "{h}");
    }
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 || !doc.header.is_empty() {
            out.push('\n');
        }
        print_block(&mut out, b);
    }
    out
}

pub fn print_block(out: &mut String, b: &Block) {
    match b {
        Block::Category(c) => {
            let r = &c.raw;
            let _ = writeln!(out, "category {}", r.name);
            if c.groupoid {
                out.push_str("groupoid\n");
            }
            for o in &r.objects {
                let _ = writeln!(out, "object {o}");
            }
            for (m, s, t) in &r.morphisms {
                let _ = writeln!(out, "morphism {m} : {s} -> {t}");
            }
            for (o, m) in &r.identities {
                let _ = writeln!(out, "identity {o} = {m}");
            }
            for (g, f, h) in &r.compositions {
                let _ = writeln!(out, "compose {g} . {f} = {h}");
            }
        }
        Block::Functor(f) => {
            let _ = writeln!(out, "functor {} : {} -> {}", f.name, f.source, f.target);
            for (a, b) in &f.objs {
                let _ = writeln!(out, "obj {a} => {b}");
            }
            for (a, b) in &f.mors {
                let _ = writeln!(out, "mor {a} => {b}");
            }
        }
        Block::Family(fam) => {
            let _ = writeln!(out, "family {}", fam.name);
            for m in &fam.members {
                let _ = writeln!(out, "member {m}");
            }
            if let Some(t) = &fam.terminal {
                let _ = writeln!(out, "terminal {t}");
            }
            for p in &fam.products {
                let _ = writeln!(
                    out,
                    "product {} {} = {} proj {} {}",
                    p.left, p.right, p.vertex, p.proj1, p.proj2
                );
            }
        }
        Block::Fibration(n) => {
            let _ = writeln!(out, "fibration {n}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_point_at_the_offending_token() {
        let err = parse("category C\nobject a\nmorphism f a -> a\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 3,
                col: 12,
                expected: "`:`".into()
            }
        );
        let err = parse("category C\nobject\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                col: 7,
                expected: "object name".into()
            }
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = parse("# hello\n\ncategory C  # trailing\nobject a\n\n").unwrap();
        assert_eq!(doc.header, vec!["# hello".to_string()]);
        assert_eq!(
            doc.category("C").unwrap().raw.objects,
            vec!["a".to_string()]
        );
    }

    #[test]
    fn lines_outside_their_block() {
        let err = parse("object a\n").unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::Syntax {
                    line: 1,
                    col: 1,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse("category C\nobj a => b\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");
    }
}
