//! Line-oriented text formats for every artifact that crosses a file
//! boundary: sequents, proof trees, counter systems, instances, derivation
//! witnesses, rename maps and formula corpora.
//!
//! Conventions shared by all formats:
//!
//! * a line whose first non-blank character is `#` is a comment; inline
//!   comments are not recognized, so state names may contain `#`;
//! * tree-shaped data is written one node per line, children indented two
//!   spaces below their parent, first premise first;
//! * proof trees also have an s-expression form `(Rule "sequent" child…)`,
//!   recognized on parsing by a leading `(`;
//! * vectors are comma-separated integers, `-` for dimension zero.  Where a
//!   signed vector is expected and the dimension is at least two, a single
//!   signed integer `+i`/`-i` abbreviates the unit vector at 1-based
//!   coordinate `i`.

use std::collections::BTreeMap;

use crate::bvass::{
    Bvas, BvasInstance, BvasTree, Bvass, Config, CoverInstance, DeductionTree, Mode,
    ReachInstance, SplitRule, Step, UnaryRule,
};
use crate::formula::{parse_formula, render_formula, Formula};
use crate::fr::{FocusSequent, FrProof, FrRule};
use crate::lr::{LrProof, LrRule, Sequent};
use crate::multiset::Multiset;
use crate::reductions::SideMap;
use crate::Error;

fn fmt_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

// ---------------------------------------------------------------------------
// Sequents

pub fn render_sequent(seq: &Sequent) -> String {
    let mut out = String::new();
    let mut first = true;
    for f in seq.antecedent.occurrences() {
        if !first {
            out.push_str(", ");
        }
        out.push_str(&render_formula(f));
        first = false;
    }
    if !first {
        out.push(' ');
    }
    out.push_str("|- ");
    out.push_str(&render_formula(&seq.succedent));
    out
}

pub fn render_focus_sequent(seq: &FocusSequent) -> String {
    let mut out = String::new();
    let mut first = true;
    for f in seq.antecedent.occurrences() {
        if !first {
            out.push_str(", ");
        }
        out.push_str(&render_formula(f));
        first = false;
    }
    if let Some(d) = &seq.focus {
        if !first {
            out.push_str(", ");
        }
        out.push('[');
        out.push_str(&render_formula(d));
        out.push(']');
        first = false;
    }
    if !first {
        out.push(' ');
    }
    out.push_str("|- ");
    out.push_str(&render_formula(&seq.succedent));
    out
}

fn split_sequent(text: &str, line: usize) -> Result<(Vec<&str>, &str), Error> {
    let idx = text.find("|-").ok_or_else(|| fmt_err(line, "missing |- separator"))?;
    let left = text[..idx].trim();
    let right = text[idx + 2..].trim();
    if right.is_empty() {
        return Err(fmt_err(line, "missing succedent"));
    }
    let items = if left.is_empty() {
        Vec::new()
    } else {
        left.split(',').map(str::trim).collect()
    };
    Ok((items, right))
}

fn parse_sequent_at(text: &str, line: usize) -> Result<Sequent, Error> {
    let (items, succ) = split_sequent(text, line)?;
    let mut antecedent = Multiset::new();
    for item in items {
        if item.is_empty() {
            return Err(fmt_err(line, "empty antecedent item"));
        }
        if item.starts_with('[') {
            return Err(fmt_err(line, "focus brackets do not belong in a plain sequent"));
        }
        antecedent.insert(parse_formula(item)?);
    }
    Ok(Sequent::new(antecedent, parse_formula(succ)?))
}

pub fn parse_sequent(text: &str) -> Result<Sequent, Error> {
    parse_sequent_at(text.trim(), 1)
}

fn parse_focus_sequent_at(text: &str, line: usize) -> Result<FocusSequent, Error> {
    let (items, succ) = split_sequent(text, line)?;
    let mut antecedent = Multiset::new();
    let mut focus = None;
    for item in items {
        if let Some(open) = item.strip_prefix('[') {
            let inner = open
                .strip_suffix(']')
                .ok_or_else(|| fmt_err(line, "unterminated focus bracket"))?;
            if focus.replace(parse_formula(inner.trim())?).is_some() {
                return Err(fmt_err(line, "more than one focused formula"));
            }
        } else {
            if item.is_empty() {
                return Err(fmt_err(line, "empty antecedent item"));
            }
            antecedent.insert(parse_formula(item)?);
        }
    }
    Ok(FocusSequent { antecedent, focus, succedent: parse_formula(succ)? })
}

pub fn parse_focus_sequent(text: &str) -> Result<FocusSequent, Error> {
    parse_focus_sequent_at(text.trim(), 1)
}

// ---------------------------------------------------------------------------
// Generic indented / s-expression tree reading

struct RawTree<'a> {
    line: usize,
    head: &'a str,
    rest: String,
    children: Vec<RawTree<'a>>,
}

fn parse_indented(text: &str) -> Result<RawTree<'_>, Error> {
    fn attach<'a>(
        stack: &mut Vec<(usize, RawTree<'a>)>,
        root: &mut Option<RawTree<'a>>,
        floor: usize,
    ) -> Result<(), ()> {
        while stack.last().map_or(false, |(d, _)| *d >= floor) {
            let (_, done) = stack.pop().expect("checked non-empty");
            if let Some((_, parent)) = stack.last_mut() {
                parent.children.push(done);
            } else if root.replace(done).is_some() {
                return Err(());
            }
        }
        Ok(())
    }
    let mut stack: Vec<(usize, RawTree)> = Vec::new();
    let mut root: Option<RawTree> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let stripped = raw.trim_start_matches(' ');
        let indent = raw.len() - stripped.len();
        if indent % 2 != 0 {
            return Err(fmt_err(line, "indentation must be a multiple of two spaces"));
        }
        let depth = indent / 2;
        let stripped = stripped.trim_end();
        let (head, rest) = match stripped.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim().to_string()),
            None => (stripped, String::new()),
        };
        attach(&mut stack, &mut root, depth)
            .map_err(|()| fmt_err(line, "more than one root node"))?;
        if depth > 0 && stack.last().map_or(true, |(d, _)| *d != depth - 1) {
            return Err(fmt_err(line, "indentation jumps past its parent"));
        }
        if depth == 0 && (root.is_some() || !stack.is_empty()) {
            return Err(fmt_err(line, "more than one root node"));
        }
        stack.push((depth, RawTree { line, head, rest, children: Vec::new() }));
    }
    attach(&mut stack, &mut root, 0).map_err(|()| fmt_err(1, "more than one root node"))?;
    root.ok_or_else(|| fmt_err(1, "empty input"))
}

enum SexprTok<'a> {
    Open,
    Close,
    Atom(&'a str),
    Str(&'a str),
}

fn tokenize_sexpr(text: &str) -> Result<Vec<SexprTok<'_>>, Error> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                toks.push(SexprTok::Open);
                i += 1;
            }
            b')' => {
                toks.push(SexprTok::Close);
                i += 1;
            }
            b'"' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] != b'"' {
                    j += 1;
                }
                if j == bytes.len() {
                    return Err(fmt_err(1, "unterminated quoted sequent"));
                }
                toks.push(SexprTok::Str(&text[start..j]));
                i = j + 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && !matches!(bytes[i], b'(' | b')' | b'"')
                {
                    i += 1;
                }
                toks.push(SexprTok::Atom(&text[start..i]));
            }
        }
    }
    Ok(toks)
}

fn parse_sexpr(text: &str) -> Result<RawTree<'_>, Error> {
    let toks = tokenize_sexpr(text)?;
    let mut stack: Vec<RawTree> = Vec::new();
    let mut root: Option<RawTree> = None;
    let mut i = 0;
    while i < toks.len() {
        match toks[i] {
            SexprTok::Open => {
                let head = match toks.get(i + 1) {
                    Some(SexprTok::Atom(a)) => *a,
                    _ => return Err(fmt_err(1, "expected a rule name after (")),
                };
                let rest = match toks.get(i + 2) {
                    Some(SexprTok::Str(s)) => (*s).to_string(),
                    _ => return Err(fmt_err(1, "expected a quoted sequent after the rule name")),
                };
                stack.push(RawTree { line: 1, head, rest, children: Vec::new() });
                i += 3;
            }
            SexprTok::Close => {
                let done = stack.pop().ok_or_else(|| fmt_err(1, "unbalanced )"))?;
                if let Some(top) = stack.last_mut() {
                    top.children.push(done);
                } else if root.replace(done).is_some() {
                    return Err(fmt_err(1, "more than one top-level form"));
                }
                i += 1;
            }
            _ => return Err(fmt_err(1, "unexpected token between forms")),
        }
    }
    if !stack.is_empty() {
        return Err(fmt_err(1, "unbalanced ("));
    }
    root.ok_or_else(|| fmt_err(1, "empty input"))
}

fn parse_tree_text(text: &str) -> Result<RawTree<'_>, Error> {
    if text.trim_start().starts_with('(') {
        parse_sexpr(text)
    } else {
        parse_indented(text)
    }
}

/// Preorder index of a raw tree with the child lists materialized, so proof
/// construction can run bottom-up without recursion.
fn flatten<'a, 'b>(root: &'b RawTree<'a>) -> (Vec<&'b RawTree<'a>>, Vec<Vec<usize>>) {
    let mut order: Vec<&RawTree> = Vec::new();
    let mut kids: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(&RawTree, Option<usize>)> = vec![(root, None)];
    while let Some((t, parent)) = stack.pop() {
        let idx = order.len();
        order.push(t);
        kids.push(Vec::new());
        if let Some(p) = parent {
            kids[p].push(idx);
        }
        for c in t.children.iter().rev() {
            stack.push((c, Some(idx)));
        }
    }
    (order, kids)
}

// ---------------------------------------------------------------------------
// Proof trees

fn infer_lr_principal(rule: LrRule, concl: &Sequent, premises: &[LrProof]) -> Option<Formula> {
    match rule {
        LrRule::Id => Some(concl.succedent.clone()),
        LrRule::TruthL => Some(Formula::Truth),
        LrRule::ImpR | LrRule::TruthR | LrRule::FusR => None,
        LrRule::C => {
            let premise = premises.first()?;
            let extra = premise.conclusion.antecedent.checked_sub(&concl.antecedent)?;
            if extra.total() == 1 {
                extra.support().next().cloned()
            } else {
                None
            }
        }
        LrRule::FusL => {
            let premise = premises.first()?;
            let extra = concl.antecedent.saturating_sub(&premise.conclusion.antecedent);
            if extra.total() == 1 {
                extra.support().next().cloned()
            } else {
                None
            }
        }
        LrRule::ImpL => {
            if premises.len() != 2 {
                return None;
            }
            let p1 = &premises[0].conclusion;
            let p2 = &premises[1].conclusion;
            for b in p2.antecedent.support() {
                let d = Formula::imp(p1.succedent.clone(), b.clone());
                if let Some(delta) = p2.antecedent.minus_item(b) {
                    if p1.antecedent.plus(&delta).plus_item(&d) == concl.antecedent {
                        return Some(d);
                    }
                }
            }
            None
        }
    }
}

pub fn render_lr_proof(proof: &LrProof) -> String {
    let mut out = String::new();
    let mut stack = vec![(proof, 0usize)];
    while let Some((p, depth)) = stack.pop() {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(p.rule.name());
        out.push(' ');
        out.push_str(&render_sequent(&p.conclusion));
        out.push('\n');
        for q in p.premises.iter().rev() {
            stack.push((q, depth + 1));
        }
    }
    out
}

pub fn render_lr_proof_sexpr(proof: &LrProof) -> String {
    let mut out = String::new();
    // `None` on the stack marks a pending closing parenthesis.
    let mut stack: Vec<Option<&LrProof>> = vec![Some(proof)];
    while let Some(ev) = stack.pop() {
        match ev {
            Some(p) => {
                if out.ends_with('"') || out.ends_with(')') {
                    out.push(' ');
                }
                out.push('(');
                out.push_str(p.rule.name());
                out.push_str(" \"");
                out.push_str(&render_sequent(&p.conclusion));
                out.push('"');
                stack.push(None);
                for q in p.premises.iter().rev() {
                    stack.push(Some(q));
                }
            }
            None => out.push(')'),
        }
    }
    out.push('\n');
    out
}

pub fn parse_lr_proof(text: &str) -> Result<LrProof, Error> {
    let raw = parse_tree_text(text)?;
    let (order, kids) = flatten(&raw);
    let mut built: Vec<Option<LrProof>> = (0..order.len()).map(|_| None).collect();
    for i in (0..order.len()).rev() {
        let t = order[i];
        let rule = LrRule::from_name(t.head)
            .ok_or_else(|| fmt_err(t.line, format!("unknown rule {:?}", t.head)))?;
        let conclusion = parse_sequent_at(&t.rest, t.line)?;
        let mut premises = Vec::with_capacity(kids[i].len());
        for &k in &kids[i] {
            premises.push(built[k].take().expect("children are built first"));
        }
        let principal = infer_lr_principal(rule, &conclusion, &premises);
        built[i] = Some(LrProof { rule, conclusion, principal, premises });
    }
    Ok(built[0].take().expect("root is built last"))
}

pub fn render_fr_proof(proof: &FrProof) -> String {
    let mut out = String::new();
    let mut stack = vec![(proof, 0usize)];
    while let Some((p, depth)) = stack.pop() {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(p.rule.name());
        out.push(' ');
        out.push_str(&render_focus_sequent(&p.conclusion));
        out.push('\n');
        for q in p.premises.iter().rev() {
            stack.push((q, depth + 1));
        }
    }
    out
}

pub fn render_fr_proof_sexpr(proof: &FrProof) -> String {
    let mut out = String::new();
    let mut stack: Vec<Option<&FrProof>> = vec![Some(proof)];
    while let Some(ev) = stack.pop() {
        match ev {
            Some(p) => {
                if out.ends_with('"') || out.ends_with(')') {
                    out.push(' ');
                }
                out.push('(');
                out.push_str(p.rule.name());
                out.push_str(" \"");
                out.push_str(&render_focus_sequent(&p.conclusion));
                out.push('"');
                stack.push(None);
                for q in p.premises.iter().rev() {
                    stack.push(Some(q));
                }
            }
            None => out.push(')'),
        }
    }
    out.push('\n');
    out
}

pub fn parse_fr_proof(text: &str) -> Result<FrProof, Error> {
    let raw = parse_tree_text(text)?;
    let (order, kids) = flatten(&raw);
    let mut built: Vec<Option<FrProof>> = (0..order.len()).map(|_| None).collect();
    for i in (0..order.len()).rev() {
        let t = order[i];
        let rule = FrRule::from_name(t.head)
            .ok_or_else(|| fmt_err(t.line, format!("unknown rule {:?}", t.head)))?;
        let conclusion = parse_focus_sequent_at(&t.rest, t.line)?;
        let mut premises = Vec::with_capacity(kids[i].len());
        for &k in &kids[i] {
            premises.push(built[k].take().expect("children are built first"));
        }
        built[i] = Some(FrProof { rule, conclusion, premises });
    }
    Ok(built[0].take().expect("root is built last"))
}

// ---------------------------------------------------------------------------
// Vectors

fn render_u64_vector(v: &[u64]) -> String {
    if v.is_empty() {
        return "-".to_string();
    }
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn render_i64_vector(v: &[i64]) -> String {
    if v.is_empty() {
        return "-".to_string();
    }
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_u64_vector(token: &str, line: usize) -> Result<Vec<u64>, Error> {
    if token == "-" {
        return Ok(Vec::new());
    }
    token
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| fmt_err(line, format!("bad vector entry {p:?}")))
        })
        .collect()
}

/// Signed vectors admit the unit shorthand `+i`/`-i` when the dimension is at
/// least two; for dimension one a single signed integer is the vector itself.
fn parse_i64_vector(token: &str, dim: usize, line: usize) -> Result<Vec<i64>, Error> {
    if token == "-" {
        return if dim == 0 {
            Ok(Vec::new())
        } else {
            Err(fmt_err(line, format!("expected a vector of length {dim}")))
        };
    }
    if dim == 0 {
        return Err(fmt_err(line, "dimension is zero; the only vector is -"));
    }
    if !token.contains(',') && dim > 1 {
        let (sign, digits) = match token.as_bytes().first() {
            Some(b'+') => (1i64, &token[1..]),
            Some(b'-') => (-1i64, &token[1..]),
            _ => {
                return Err(fmt_err(
                    line,
                    format!("expected {dim} comma-separated entries or a signed unit shorthand"),
                ))
            }
        };
        let coord: usize = digits
            .parse()
            .map_err(|_| fmt_err(line, format!("bad coordinate {digits:?}")))?;
        if coord == 0 || coord > dim {
            return Err(fmt_err(line, format!("coordinate {coord} is out of range 1..={dim}")));
        }
        let mut v = vec![0i64; dim];
        v[coord - 1] = sign;
        return Ok(v);
    }
    let v: Vec<i64> = token
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| fmt_err(line, format!("bad vector entry {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != dim {
        return Err(fmt_err(line, format!("expected {dim} entries, found {}", v.len())));
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Counter systems and instances

fn intern(states: &mut Vec<String>, index: &mut BTreeMap<String, usize>, name: &str) -> usize {
    if let Some(i) = index.get(name) {
        return *i;
    }
    let i = states.len();
    states.push(name.to_string());
    index.insert(name.to_string(), i);
    i
}

/// States are indexed in order of first mention (root, leaf, then rule
/// operands in file order).
fn parse_system_file(text: &str) -> Result<(Bvass, String, String, Option<Mode>), Error> {
    let mut dim: Option<usize> = None;
    let mut root: Option<String> = None;
    let mut leaf: Option<String> = None;
    let mut mode: Option<Mode> = None;
    let mut states: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut unary: Vec<UnaryRule> = Vec::new();
    let mut split: Vec<SplitRule> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        match tokens.as_slice() {
            ["dim", n] => {
                if dim.is_some() {
                    return Err(fmt_err(line, "duplicate dim line"));
                }
                dim = Some(
                    n.parse()
                        .map_err(|_| fmt_err(line, format!("bad dimension {n:?}")))?,
                );
            }
            ["root", name] => {
                if root.is_some() {
                    return Err(fmt_err(line, "duplicate root line"));
                }
                intern(&mut states, &mut index, name);
                root = Some((*name).to_string());
            }
            ["leaf", name] => {
                if leaf.is_some() {
                    return Err(fmt_err(line, "duplicate leaf line"));
                }
                intern(&mut states, &mut index, name);
                leaf = Some((*name).to_string());
            }
            ["mode", m] => {
                if mode.is_some() {
                    return Err(fmt_err(line, "duplicate mode line"));
                }
                mode = Some(
                    Mode::from_name(m)
                        .ok_or_else(|| fmt_err(line, format!("unknown mode {m:?}")))?,
                );
            }
            ["unary", source, vector, target] => {
                let d = dim.ok_or_else(|| fmt_err(line, "dim must come before rules"))?;
                let source = intern(&mut states, &mut index, source);
                let v = parse_i64_vector(vector, d, line)?;
                let target = intern(&mut states, &mut index, target);
                unary.push(UnaryRule { source, vector: v, target });
            }
            ["split", source, left, right] => {
                let source = intern(&mut states, &mut index, source);
                let left = intern(&mut states, &mut index, left);
                let right = intern(&mut states, &mut index, right);
                split.push(SplitRule { source, left, right });
            }
            _ => return Err(fmt_err(line, format!("unrecognized line {t:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| fmt_err(1, "missing dim line"))?;
    let root = root.ok_or_else(|| fmt_err(1, "missing root line"))?;
    let leaf = leaf.ok_or_else(|| fmt_err(1, "missing leaf line"))?;
    let system = Bvass::new(states, dim, unary, split)?;
    Ok((system, root, leaf, mode))
}

fn render_system_lines(sys: &Bvass, root: &str, leaf: &str, mode: Option<Mode>) -> String {
    let mut out = String::new();
    out.push_str(&format!("dim {}\n", sys.dimension));
    out.push_str(&format!("root {root}\n"));
    out.push_str(&format!("leaf {leaf}\n"));
    if let Some(m) = mode {
        out.push_str(&format!("mode {}\n", m.name()));
    }
    for r in &sys.unary_rules {
        out.push_str(&format!(
            "unary {} {} {}\n",
            sys.states[r.source],
            render_i64_vector(&r.vector),
            sys.states[r.target]
        ));
    }
    for r in &sys.split_rules {
        out.push_str(&format!(
            "split {} {} {}\n",
            sys.states[r.source], sys.states[r.left], sys.states[r.right]
        ));
    }
    out
}

pub fn render_cover_instance(inst: &CoverInstance) -> String {
    render_system_lines(&inst.system, &inst.root_state, &inst.leaf_state, None)
}

pub fn parse_cover_instance(text: &str) -> Result<CoverInstance, Error> {
    let (system, root_state, leaf_state, mode) = parse_system_file(text)?;
    match mode {
        None | Some(Mode::Plain) => Ok(CoverInstance { system, root_state, leaf_state }),
        Some(_) => Err(fmt_err(1, "coverability always uses the plain reading; drop the mode line")),
    }
}

pub fn render_reach_instance(inst: &ReachInstance) -> String {
    render_system_lines(&inst.system, &inst.root_state, &inst.leaf_state, Some(inst.mode))
}

pub fn parse_reach_instance(text: &str) -> Result<ReachInstance, Error> {
    let (system, root_state, leaf_state, mode) = parse_system_file(text)?;
    Ok(ReachInstance { system, root_state, leaf_state, mode: mode.unwrap_or(Mode::Plain) })
}

pub fn render_bvas_instance(inst: &BvasInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("dim {}\n", inst.system.dimension));
    out.push_str(&format!("root {}\n", render_u64_vector(&inst.root)));
    out.push_str(&format!("leaf {}\n", render_u64_vector(&inst.leaf)));
    for u in &inst.system.unary_rules {
        out.push_str(&format!("unary {}\n", render_i64_vector(u)));
    }
    for s in &inst.system.split_rules {
        out.push_str(&format!("split {}\n", render_i64_vector(s)));
    }
    out
}

pub fn parse_bvas_instance(text: &str) -> Result<BvasInstance, Error> {
    let mut dim: Option<usize> = None;
    let mut root: Option<Vec<u64>> = None;
    let mut leaf: Option<Vec<u64>> = None;
    let mut unary: Vec<Vec<i64>> = Vec::new();
    let mut split: Vec<Vec<i64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        match tokens.as_slice() {
            ["dim", n] => {
                if dim.is_some() {
                    return Err(fmt_err(line, "duplicate dim line"));
                }
                dim = Some(
                    n.parse()
                        .map_err(|_| fmt_err(line, format!("bad dimension {n:?}")))?,
                );
            }
            ["root", v] => {
                let d = dim.ok_or_else(|| fmt_err(line, "dim must come first"))?;
                let v = parse_u64_vector(v, line)?;
                if v.len() != d {
                    return Err(fmt_err(line, format!("expected {d} entries, found {}", v.len())));
                }
                if root.replace(v).is_some() {
                    return Err(fmt_err(line, "duplicate root line"));
                }
            }
            ["leaf", v] => {
                let d = dim.ok_or_else(|| fmt_err(line, "dim must come first"))?;
                let v = parse_u64_vector(v, line)?;
                if v.len() != d {
                    return Err(fmt_err(line, format!("expected {d} entries, found {}", v.len())));
                }
                if leaf.replace(v).is_some() {
                    return Err(fmt_err(line, "duplicate leaf line"));
                }
            }
            ["unary", v] => {
                let d = dim.ok_or_else(|| fmt_err(line, "dim must come first"))?;
                unary.push(parse_i64_vector(v, d, line)?);
            }
            ["split", v] => {
                let d = dim.ok_or_else(|| fmt_err(line, "dim must come first"))?;
                split.push(parse_i64_vector(v, d, line)?);
            }
            _ => return Err(fmt_err(line, format!("unrecognized line {t:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| fmt_err(1, "missing dim line"))?;
    let root = root.ok_or_else(|| fmt_err(1, "missing root line"))?;
    let leaf = leaf.ok_or_else(|| fmt_err(1, "missing leaf line"))?;
    let system = Bvas::new(dim, unary, split)?;
    Ok(BvasInstance { system, root, leaf })
}

// ---------------------------------------------------------------------------
// Derivation witnesses

pub fn render_deduction_tree(sys: &Bvass, tree: &DeductionTree) -> String {
    let mut out = String::new();
    let mut stack = vec![(tree, 0usize)];
    while let Some((t, depth)) = stack.pop() {
        for _ in 0..depth {
            out.push_str("  ");
        }
        match t.step {
            Step::Leaf => out.push_str("leaf"),
            Step::Unary(i) => {
                out.push_str("unary ");
                out.push_str(&i.to_string());
            }
            Step::Split(i) => {
                out.push_str("split ");
                out.push_str(&i.to_string());
            }
            Step::Expansion(c) => {
                out.push_str("expand ");
                out.push_str(&(c + 1).to_string());
            }
        }
        out.push(' ');
        out.push_str(sys.states.get(t.node.state).map_or("?", String::as_str));
        out.push(' ');
        out.push_str(&render_u64_vector(&t.node.vector));
        out.push('\n');
        for c in t.children.iter().rev() {
            stack.push((c, depth + 1));
        }
    }
    out
}

pub fn parse_deduction_tree(sys: &Bvass, text: &str) -> Result<DeductionTree, Error> {
    let raw = parse_indented(text)?;
    let (order, kids) = flatten(&raw);
    let mut built: Vec<Option<DeductionTree>> = (0..order.len()).map(|_| None).collect();
    for i in (0..order.len()).rev() {
        let t = order[i];
        let tokens: Vec<&str> = t.rest.split_whitespace().collect();
        let (step, state_tok, vec_tok) = match (t.head, tokens.as_slice()) {
            ("leaf", [state, vector]) => (Step::Leaf, *state, *vector),
            ("unary", [num, state, vector]) => {
                let k = num
                    .parse()
                    .map_err(|_| fmt_err(t.line, format!("bad rule index {num:?}")))?;
                (Step::Unary(k), *state, *vector)
            }
            ("split", [num, state, vector]) => {
                let k = num
                    .parse()
                    .map_err(|_| fmt_err(t.line, format!("bad rule index {num:?}")))?;
                (Step::Split(k), *state, *vector)
            }
            ("expand", [num, state, vector]) => {
                let k: usize = num
                    .parse()
                    .map_err(|_| fmt_err(t.line, format!("bad coordinate {num:?}")))?;
                if k == 0 {
                    return Err(fmt_err(t.line, "coordinates are 1-based"));
                }
                (Step::Expansion(k - 1), *state, *vector)
            }
            _ => {
                return Err(fmt_err(
                    t.line,
                    format!("expected leaf/unary/split/expand, found {:?}", t.head),
                ))
            }
        };
        let state = sys
            .state_index(state_tok)
            .ok_or_else(|| fmt_err(t.line, format!("unknown state {state_tok:?}")))?;
        let vector = parse_u64_vector(vec_tok, t.line)?;
        let mut children = Vec::with_capacity(kids[i].len());
        for &k in &kids[i] {
            children.push(built[k].take().expect("children are built first"));
        }
        built[i] = Some(DeductionTree { node: Config { state, vector }, step, children });
    }
    Ok(built[0].take().expect("root is built last"))
}

pub fn render_bvas_tree(tree: &BvasTree) -> String {
    let mut out = String::new();
    let mut stack = vec![(tree, 0usize)];
    while let Some((t, depth)) = stack.pop() {
        for _ in 0..depth {
            out.push_str("  ");
        }
        match t.step {
            Step::Leaf => out.push_str("leaf"),
            Step::Unary(i) => {
                out.push_str("unary ");
                out.push_str(&i.to_string());
            }
            Step::Split(i) => {
                out.push_str("split ");
                out.push_str(&i.to_string());
            }
            Step::Expansion(_) => out.push_str("expand ?"),
        }
        out.push(' ');
        out.push_str(&render_u64_vector(&t.vector));
        out.push('\n');
        for c in t.children.iter().rev() {
            stack.push((c, depth + 1));
        }
    }
    out
}

pub fn parse_bvas_tree(text: &str) -> Result<BvasTree, Error> {
    let raw = parse_indented(text)?;
    let (order, kids) = flatten(&raw);
    let mut built: Vec<Option<BvasTree>> = (0..order.len()).map(|_| None).collect();
    for i in (0..order.len()).rev() {
        let t = order[i];
        let tokens: Vec<&str> = t.rest.split_whitespace().collect();
        let (step, vec_tok) = match (t.head, tokens.as_slice()) {
            ("leaf", [vector]) => (Step::Leaf, *vector),
            ("unary", [num, vector]) => {
                let k = num
                    .parse()
                    .map_err(|_| fmt_err(t.line, format!("bad rule index {num:?}")))?;
                (Step::Unary(k), *vector)
            }
            ("split", [num, vector]) => {
                let k = num
                    .parse()
                    .map_err(|_| fmt_err(t.line, format!("bad rule index {num:?}")))?;
                (Step::Split(k), *vector)
            }
            _ => {
                return Err(fmt_err(
                    t.line,
                    format!("expected leaf/unary/split, found {:?}", t.head),
                ))
            }
        };
        let vector = parse_u64_vector(vec_tok, t.line)?;
        let mut children = Vec::with_capacity(kids[i].len());
        for &k in &kids[i] {
            children.push(built[k].take().expect("children are built first"));
        }
        built[i] = Some(BvasTree { vector, step, children });
    }
    Ok(built[0].take().expect("root is built last"))
}

// ---------------------------------------------------------------------------
// Side maps and corpora

pub fn render_side_map(map: &SideMap) -> String {
    let mut out = String::new();
    for (k, v) in &map.pairs {
        out.push_str(k);
        out.push('\t');
        out.push_str(v);
        out.push('\n');
    }
    out
}

pub fn parse_side_map(text: &str) -> Result<SideMap, Error> {
    let mut map = SideMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let (k, v) = raw
            .split_once('\t')
            .ok_or_else(|| fmt_err(line, "expected key TAB value"))?;
        map.push(k, v);
    }
    Ok(map)
}

/// One formula per line; blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, Error> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_formula(t).map_err(|e| fmt_err(i + 1, e.to_string()))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lr::lr_prove;
    use crate::solvers::solve_coverability;

    #[test]
    fn sequents_round_trip() {
        for text in ["|- a", "a |- a", "a, a->b |- b", "T, a o b |- (a->b)->c"] {
            let seq = parse_sequent(text).unwrap();
            assert_eq!(render_sequent(&seq), text);
        }
    }

    #[test]
    fn focus_sequents_round_trip() {
        for text in ["[a] |- a", "a, [a->b] |- b", "a |- a->b"] {
            let seq = parse_focus_sequent(text).unwrap();
            assert_eq!(render_focus_sequent(&seq), text);
        }
        assert!(parse_focus_sequent("[a], [b] |- c").is_err());
        assert!(parse_sequent("[a] |- a").is_err());
    }

    #[test]
    fn proof_text_round_trips_both_ways() {
        let goal = Sequent::goal(crate::formula::parse_formula("(a->b)->a->b").unwrap());
        let proof = lr_prove(&goal).unwrap().into_proof().unwrap();
        let indented = render_lr_proof(&proof);
        assert_eq!(parse_lr_proof(&indented).unwrap(), proof);
        let sexpr = render_lr_proof_sexpr(&proof);
        assert_eq!(parse_lr_proof(&sexpr).unwrap(), proof);
    }

    #[test]
    fn focused_proof_text_round_trips() {
        let goal = FocusSequent::goal(crate::formula::parse_formula("(a->a->b)->a->b").unwrap());
        let proof = crate::fr::fr_prove(&goal).unwrap().into_proof().unwrap();
        let indented = render_fr_proof(&proof);
        assert_eq!(parse_fr_proof(&indented).unwrap(), proof);
        let sexpr = render_fr_proof_sexpr(&proof);
        assert_eq!(parse_fr_proof(&sexpr).unwrap(), proof);
    }

    #[test]
    fn malformed_trees_are_rejected() {
        assert!(parse_lr_proof("Nope |- a").is_err());
        assert!(parse_lr_proof(" Id a |- a").is_err());
        assert!(parse_lr_proof("Id a |- a\nId b |- b").is_err());
        assert!(parse_lr_proof("ImpR |- a->a\n    Id a |- a").is_err());
        assert!(parse_lr_proof("(ImpR \"|- a->a\" (Id \"a |- a\")").is_err());
    }

    fn chain_instance() -> CoverInstance {
        let system = Bvass::new(
            vec!["r".to_string(), "q".to_string(), "l".to_string()],
            2,
            vec![
                UnaryRule { source: 0, vector: vec![0, 1], target: 1 },
                UnaryRule { source: 1, vector: vec![0, -1], target: 2 },
            ],
            vec![],
        )
        .unwrap();
        CoverInstance { system, root_state: "r".to_string(), leaf_state: "l".to_string() }
    }

    #[test]
    fn system_files_round_trip() {
        let inst = chain_instance();
        let text = render_cover_instance(&inst);
        let back = parse_cover_instance(&text).unwrap();
        assert_eq!(render_cover_instance(&back), text);
        assert_eq!(back.system.states, ["r", "l", "q"]);
        assert_eq!(back.system.unary_rules.len(), 2);
    }

    #[test]
    fn unit_shorthand_expands() {
        let text = "dim 2\nroot r\nleaf l\nunary r +2 q\nunary q -2 l\n";
        let inst = parse_cover_instance(text).unwrap();
        assert_eq!(inst.system.unary_rules[0].vector, vec![0, 1]);
        assert_eq!(inst.system.unary_rules[1].vector, vec![0, -1]);
        let rendered = render_cover_instance(&inst);
        assert!(rendered.contains("unary r 0,1 q"));
    }

    #[test]
    fn reach_files_carry_their_mode() {
        let text = "dim 1\nroot r\nleaf l\nmode expansive\nunary r -1 l\n";
        let inst = parse_reach_instance(text).unwrap();
        assert_eq!(inst.mode, Mode::Expansive);
        assert_eq!(render_reach_instance(&inst), text);
        assert!(parse_cover_instance(text).is_err());
    }

    #[test]
    fn witness_files_round_trip() {
        let inst = chain_instance();
        let solved = solve_coverability(&inst, 2, 100_000).unwrap();
        let tree = solved.witness().expect("chain is coverable");
        let text = render_deduction_tree(&inst.system, tree);
        let back = parse_deduction_tree(&inst.system, &text).unwrap();
        assert_eq!(&back, tree);
    }

    #[test]
    fn stateless_artifacts_round_trip() {
        let system = Bvas::new(2, vec![vec![1, -1]], vec![vec![0, 0]]).unwrap();
        let inst = BvasInstance { system, root: vec![2, 0], leaf: vec![0, 1] };
        let text = render_bvas_instance(&inst);
        assert_eq!(parse_bvas_instance(&text).unwrap(), inst);

        let tree = BvasTree {
            vector: vec![1, 0],
            step: Step::Unary(0),
            children: vec![BvasTree { vector: vec![0, 1], step: Step::Leaf, children: vec![] }],
        };
        let rendered = render_bvas_tree(&tree);
        assert_eq!(parse_bvas_tree(&rendered).unwrap(), tree);
    }

    #[test]
    fn side_maps_and_corpora_parse() {
        let mut map = SideMap::new();
        map.push("e1", "gate token");
        map.push("q#1,2", "product state");
        let text = render_side_map(&map);
        let back = parse_side_map(&text).unwrap();
        assert_eq!(back.pairs, map.pairs);

        let formulas = parse_corpus("# corpus\n\na->a\nT o a\n").unwrap();
        assert_eq!(formulas.len(), 2);
        assert!(parse_corpus("a->\n").is_err());
    }
}
