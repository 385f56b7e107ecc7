//! Formula syntax: abstract trees, concrete syntax, and subformula tables.
//!
//! The surface grammar:
//!
//! ```text
//! formula ::= fusion ('->' formula)?          right-associative, loosest
//! fusion  ::= primary ('o' primary)*          left-associative, tighter
//! primary ::= atom | 'T' | '(' formula ')'
//! atom    ::= [a-zA-Z0-9_]+ other than the reserved tokens 'T' and 'o'
//! ```
//!
//! Identifiers are maximal runs of atom characters, so `oo` and `Tx` are
//! atoms while bare `o` is always the fusion operator and bare `T` is the
//! truth constant. Whitespace is insignificant.

use crate::Error;
use std::fmt;
use std::sync::Arc;

/// A formula of the implicational language, optionally extended with the
/// fusion connective and the truth constant. Subterms are reference-counted,
/// making clones cheap; all comparisons are structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Truth,
    Atom(Arc<str>),
    Imp(Arc<Formula>, Arc<Formula>),
    Fusion(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    /// Builds an atom after validating the identifier: nonempty, over
    /// `[a-zA-Z0-9_]`, and not a reserved token.
    pub fn atom(name: &str) -> Result<Formula, Error> {
        if name.is_empty() || !name.bytes().all(is_atom_byte) {
            return Err(Error::Syntax {
                position: 0,
                expected: format!("an identifier over [a-zA-Z0-9_], got {name:?}"),
            });
        }
        if name == "T" || name == "o" {
            return Err(Error::ReservedName(name.to_string()));
        }
        Ok(Formula::Atom(Arc::from(name)))
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Arc::new(left), Arc::new(right))
    }

    pub fn fusion(left: Formula, right: Formula) -> Formula {
        Formula::Fusion(Arc::new(left), Arc::new(right))
    }

    /// Number of atom/truth occurrences plus connective occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Truth | Formula::Atom(_) => 1,
            Formula::Imp(a, b) | Formula::Fusion(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// True when the formula uses only atoms and implication.
    pub fn is_pure_implicational(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Truth | Formula::Fusion(_, _) => false,
            Formula::Imp(a, b) => a.is_pure_implicational() && b.is_pure_implicational(),
        }
    }

    /// Splits `A_n -> ... -> A_1 -> h` into the argument list
    /// `[A_n, ..., A_1]` and the head `h` (the first non-implication).
    pub fn uncurry(&self) -> (Vec<Formula>, Formula) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Formula::Imp(a, b) = cur {
            args.push((**a).clone());
            cur = b;
        }
        (args, cur.clone())
    }

    /// The head of [`Formula::uncurry`].
    pub fn head(&self) -> &Formula {
        let mut cur = self;
        while let Formula::Imp(_, b) = cur {
            cur = b;
        }
        cur
    }

    /// Rebuilds `args[0] -> ... -> args[last] -> head`.
    pub fn curry(args: &[Formula], head: Formula) -> Formula {
        let mut out = head;
        for a in args.iter().rev() {
            out = Formula::imp(a.clone(), out);
        }
        out
    }
}

fn is_atom_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Parses the concrete syntax described in the module docs.
pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("end of input"));
    }
    Ok(f)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, expected: &str) -> Error {
        Error::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        let left = self.fusion()?;
        self.skip_ws();
        if self.peek() == Some(b'-') {
            if self.bytes.get(self.pos + 1) == Some(&b'>') {
                self.pos += 2;
                self.skip_ws();
                let right = self.formula()?;
                return Ok(Formula::imp(left, right));
            }
            return Err(self.err("'->'"));
        }
        Ok(left)
    }

    fn fusion(&mut self) -> Result<Formula, Error> {
        let mut left = self.primary()?;
        loop {
            self.skip_ws();
            // A bare identifier `o` is the fusion operator.
            if self.peek() == Some(b'o') && !self.ident_continues(self.pos + 1) {
                self.pos += 1;
                self.skip_ws();
                let right = self.primary()?;
                left = Formula::fusion(left, right);
            } else {
                return Ok(left);
            }
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.bytes.get(at).is_some_and(|&b| is_atom_byte(b))
    }

    fn primary(&mut self) -> Result<Formula, Error> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(f)
                } else {
                    Err(self.err("')'"))
                }
            }
            Some(b) if is_atom_byte(b) => {
                let start = self.pos;
                while self.ident_continues(self.pos) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match name {
                    "T" => Ok(Formula::Truth),
                    "o" => {
                        self.pos = start;
                        Err(self.err("a formula, found the fusion operator"))
                    }
                    _ => Ok(Formula::Atom(Arc::from(name))),
                }
            }
            _ => Err(self.err("an atom, 'T', or '('")),
        }
    }
}

/// Renders with minimal parentheses; inverse of [`parse_formula`].
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_at(f, 1, &mut out);
    out
}

// Precedence levels: 1 = implication position, 2 = fusion position,
// 3 = primary position. A subterm is parenthesized when its own level is
// below the position it is printed in.
fn render_at(f: &Formula, level: u8, out: &mut String) {
    match f {
        Formula::Truth => out.push('T'),
        Formula::Atom(a) => out.push_str(a),
        Formula::Imp(a, b) => {
            let parens = level > 1;
            if parens {
                out.push('(');
            }
            render_at(a, 2, out);
            out.push_str("->");
            render_at(b, 1, out);
            if parens {
                out.push(')');
            }
        }
        Formula::Fusion(a, b) => {
            let parens = level > 2;
            if parens {
                out.push('(');
            }
            render_at(a, 2, out);
            out.push_str(" o ");
            render_at(b, 3, out);
            if parens {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

/// The distinct subformulas of a root formula, in post-order of first
/// occurrence, with 1-based coordinates. The entry order fixes the coordinate
/// assignment used by the counter-system translations, so it must be stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaTable {
    entries: Vec<Formula>,
    index: std::collections::BTreeMap<Formula, usize>,
}

impl SubformulaTable {
    pub fn entries(&self) -> &[Formula] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based coordinate of a subformula.
    pub fn coord(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Entry for a 1-based coordinate.
    pub fn get(&self, coord: usize) -> Option<&Formula> {
        self.entries.get(coord.checked_sub(1)?)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }
}

/// Collects the subformula table of `f`.
pub fn subformulas(f: &Formula) -> SubformulaTable {
    let mut table = SubformulaTable { entries: Vec::new(), index: Default::default() };
    collect(f, &mut table);
    table
}

fn collect(f: &Formula, table: &mut SubformulaTable) {
    if table.index.contains_key(f) {
        return;
    }
    match f {
        Formula::Truth | Formula::Atom(_) => {}
        Formula::Imp(a, b) | Formula::Fusion(a, b) => {
            collect(a, table);
            collect(b, table);
        }
    }
    if !table.index.contains_key(f) {
        table.entries.push(f.clone());
        table.index.insert(f.clone(), table.entries.len());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(p("a->b->c"), p("a->(b->c)"));
        assert_ne!(p("a->b->c"), p("(a->b)->c"));
    }

    #[test]
    fn single_atom_and_reserved_tokens() {
        assert_eq!(p("a"), Formula::atom("a").unwrap());
        assert_eq!(p("T"), Formula::Truth);
        // Maximal-munch identifiers: these are atoms, not operator/constant.
        assert_eq!(p("oo"), Formula::atom("oo").unwrap());
        assert_eq!(p("Tx"), Formula::atom("Tx").unwrap());
        assert!(matches!(Formula::atom("T"), Err(Error::ReservedName(_))));
        assert!(matches!(Formula::atom("o"), Err(Error::ReservedName(_))));
        assert!(matches!(Formula::atom(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn fusion_binds_tighter_than_implication() {
        assert_eq!(p("a o b -> c"), Formula::imp(p("a o b"), p("c")));
        assert_eq!(p("a o b o c"), Formula::fusion(p("a o b"), p("c")));
    }

    #[test]
    fn rendering_uses_minimal_parentheses() {
        assert_eq!(render_formula(&p("a->(b->c)")), "a->b->c");
        assert_eq!(render_formula(&p("(a->b)->c")), "(a->b)->c");
        assert_eq!(render_formula(&p("a o b")), "a o b");
        assert_eq!(render_formula(&p("(a->b) o c->d")), "(a->b) o c->d");
        assert_eq!(render_formula(&p("a o (b o c)")), "a o (b o c)");
        assert_eq!(render_formula(&p("T->a o T")), "T->a o T");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_formula("a->") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_formula("(a->b").is_err());
        assert!(parse_formula("a b").is_err());
        assert!(parse_formula("->a").is_err());
        assert!(parse_formula("a -> o").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn subformula_tables_close_under_subterms() {
        let t = subformulas(&p("(a->b)->a"));
        assert_eq!(t.len(), 4);
        let entries: Vec<String> = t.entries().iter().map(render_formula).collect();
        assert_eq!(entries, vec!["a", "b", "a->b", "(a->b)->a"]);
        for e in t.entries() {
            if let Formula::Imp(x, y) = e {
                assert!(t.contains(x));
                assert!(t.contains(y));
            }
        }
        assert_eq!(t.coord(&p("a")), Some(1));
        assert_eq!(t.coord(&p("(a->b)->a")), Some(4));

        assert_eq!(subformulas(&p("a")).len(), 1);
        assert_eq!(subformulas(&p("a->a")).len(), 2);
    }

    #[test]
    fn uncurry_splits_spines() {
        let (args, head) = p("a->b->c").uncurry();
        assert_eq!(args, vec![p("a"), p("b")]);
        assert_eq!(head, p("c"));
        assert_eq!(Formula::curry(&args, head), p("a->b->c"));
        let (args, head) = p("a").uncurry();
        assert!(args.is_empty());
        assert_eq!(head, p("a"));
        // Heads stop at the first non-implication.
        assert_eq!(p("a->b o c").head(), &p("b o c"));
    }
}
