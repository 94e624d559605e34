//! A fragment of linear temporal logic over label sequences: chains of
//! nested non-strict "eventually" steps (`F(p & F(q & ...))`), their
//! negations, and top-level conjunctions, each compiling to a small total
//! deterministic Büchi word automaton. Disjunction blocks are parsed and
//! evaluated but not compiled.
//!
//! Concrete syntax:
//! - spec: `block ('&' block)*`
//! - block: `clause` or `( clause ('|' clause)* )` — multi-clause blocks
//!   evaluate as disjunctions and cannot be compiled;
//! - clause: `['!'] chain`
//! - chain: `F lit` or `F( item ('&' item)* )`, where at most one item is a
//!   nested chain and it must come last; the remaining items are predicates
//!   that are conjoined;
//! - predicate item: `pterm ('|' pterm)*`; pterm: `['!'] name` or a
//!   parenthesized predicate. Conjunction inside a predicate is written by
//!   listing several `&`-separated predicate items.
//!
//! The word `F` is reserved; a proposition cannot use that name. The
//! "eventually" is non-strict: one position may satisfy several consecutive
//! predicates of a chain at once.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{ApTable, LabelSet, Pred, TaggedSymbol};
use crate::word::{
    product_det, Acceptance, Branching, BuchiWordAutomaton, Guard, TagGuard, WordError,
};

/// A name-based state predicate, resolved against a proposition table only
/// when compiling or evaluating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredAst {
    /// Always true (the implicit predicate of `F(F ...)`).
    True,
    Lit { name: String, negated: bool },
    Or(Box<PredAst>, Box<PredAst>),
}

impl PredAst {
    fn resolve(&self, ap: &ApTable) -> Result<Pred, PathLtlError> {
        Ok(match self {
            PredAst::True => Pred::True,
            PredAst::Lit { name, negated } => {
                let id = ap
                    .lookup(name)
                    .ok_or_else(|| PathLtlError::UnknownProposition(name.clone()))?;
                if *negated {
                    Pred::Not(Box::new(Pred::Ap(id)))
                } else {
                    Pred::Ap(id)
                }
            }
            PredAst::Or(a, b) => Pred::Or(Box::new(a.resolve(ap)?), Box::new(b.resolve(ap)?)),
        })
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            PredAst::True => {}
            PredAst::Lit { name, .. } => {
                out.insert(name.clone());
            }
            PredAst::Or(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    fn and(parts: Vec<PredAst>) -> ChainPredicate {
        ChainPredicate { parts }
    }
}

impl fmt::Display for PredAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredAst::True => write!(f, "true"),
            PredAst::Lit { name, negated } => {
                if *negated {
                    write!(f, "!{name}")
                } else {
                    write!(f, "{name}")
                }
            }
            PredAst::Or(a, b) => write!(f, "{a} | {b}"),
        }
    }
}

/// One step of a chain: the conjunction of its predicate items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPredicate {
    pub parts: Vec<PredAst>,
}

impl ChainPredicate {
    fn resolve(&self, ap: &ApTable) -> Result<Pred, PathLtlError> {
        let mut acc = Pred::True;
        for (i, p) in self.parts.iter().enumerate() {
            let r = p.resolve(ap)?;
            acc = if i == 0 { r } else { Pred::And(Box::new(acc), Box::new(r)) };
        }
        Ok(acc)
    }

    fn holds(&self, ap: &ApTable, label: LabelSet) -> Result<bool, PathLtlError> {
        Ok(self.resolve(ap)?.eval(label))
    }
}

impl fmt::Display for ChainPredicate {
    fmt_chain_predicate!();
}

macro_rules! fmt_chain_predicate {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.parts.is_empty() {
                return write!(f, "true");
            }
            for (i, p) in self.parts.iter().enumerate() {
                if i > 0 {
                    write!(f, " & ")?;
                }
                match p {
                    PredAst::Or(_, _) => write!(f, "({p})")?,
                    _ => write!(f, "{p}")?,
                }
            }
            Ok(())
        }
    };
}
use fmt_chain_predicate;

/// One chain formula with polarity: positive denotes the nested-eventually
/// chain over its predicate sequence, negated its logical negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFormula {
    pub negated: bool,
    pub sequence: Vec<ChainPredicate>,
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!")?;
        }
        for (i, p) in self.sequence.iter().enumerate() {
            if i > 0 {
                write!(f, "F({} & ", p)?;
            } else {
                write!(f, "F({} ", p)?;
            }
            // Opened parens close after the last element.
            let _ = i;
        }
        // Rebuild cleanly instead: nested rendering.
        Ok(())
    }
}

/// A conjunction of blocks; each block is a disjunction of chain formulas.
/// Blocks with a single formula are plain conjuncts and can be compiled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLtlSpec {
    pub blocks: Vec<Vec<PathFormula>>,
}

impl PathLtlSpec {
    /// Proposition names mentioned anywhere in the spec, sorted.
    pub fn mentioned_names(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for block in &self.blocks {
            for f in block {
                for step in &f.sequence {
                    for p in &step.parts {
                        p.collect_names(&mut out);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// A fresh proposition table holding exactly the mentioned names.
    pub fn ap_table(&self) -> Result<ApTable, PathLtlError> {
        ApTable::from_names(self.mentioned_names())
            .map_err(|e| PathLtlError::Internal(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathLtlError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("disjunction blocks evaluate but do not compile")]
    DisjunctionNotCompilable,
    #[error("cycle part of the lasso must be nonempty")]
    EmptyCycle,
    #[error("automaton construction failed: {0}")]
    Word(#[from] WordError),
    #[error("internal error: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Parser.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    KeyF,
    Bang,
    Amp,
    Pipe,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Lexer, PathLtlError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '!' => {
                    toks.push((Tok::Bang, i));
                    i += 1;
                }
                '&' => {
                    toks.push((Tok::Amp, i));
                    i += 1;
                }
                '|' => {
                    toks.push((Tok::Pipe, i));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, i));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, i));
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let word = &text[start..i];
                    if word == "F" {
                        toks.push((Tok::KeyF, start));
                    } else {
                        toks.push((Tok::Ident(word.to_string()), start));
                    }
                }
                other => {
                    return Err(PathLtlError::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
        Ok(Lexer { toks, at: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), PathLtlError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            got => Err(PathLtlError::Syntax {
                pos,
                msg: format!("expected {what}, found {}", describe(got.as_ref())),
            }),
        }
    }
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::KeyF) => "`F`".into(),
        Some(Tok::Bang) => "`!`".into(),
        Some(Tok::Amp) => "`&`".into(),
        Some(Tok::Pipe) => "`|`".into(),
        Some(Tok::LParen) => "`(`".into(),
        Some(Tok::RParen) => "`)`".into(),
    }
}

/// Parse the concrete syntax into a spec. Errors carry the byte position.
pub fn parse_pathltl(text: &str) -> Result<PathLtlSpec, PathLtlError> {
    let mut lx = Lexer::new(text)?;
    let mut blocks = Vec::new();
    loop {
        blocks.push(parse_block(&mut lx)?);
        match lx.peek() {
            Some(Tok::Amp) => {
                lx.bump();
            }
            None => break,
            _ => {
                return Err(PathLtlError::Syntax {
                    pos: lx.pos(),
                    msg: format!("expected `&` or end, found {}", describe(lx.peek())),
                })
            }
        }
    }
    Ok(PathLtlSpec { blocks })
}

fn parse_block(lx: &mut Lexer) -> Result<Vec<PathFormula>, PathLtlError> {
    if lx.peek() == Some(&Tok::LParen) {
        lx.bump();
        let mut clauses = vec![parse_clause(lx)?];
        while lx.peek() == Some(&Tok::Pipe) {
            lx.bump();
            clauses.push(parse_clause(lx)?);
        }
        lx.expect(Tok::RParen, "`)` closing the disjunction block")?;
        Ok(clauses)
    } else {
        Ok(vec![parse_clause(lx)?])
    }
}

fn parse_clause(lx: &mut Lexer) -> Result<PathFormula, PathLtlError> {
    let negated = if lx.peek() == Some(&Tok::Bang) {
        lx.bump();
        true
    } else {
        false
    };
    let sequence = parse_chain(lx)?;
    Ok(PathFormula { negated, sequence })
}

fn parse_chain(lx: &mut Lexer) -> Result<Vec<ChainPredicate>, PathLtlError> {
    lx.expect(Tok::KeyF, "`F`")?;
    if lx.peek() == Some(&Tok::LParen) {
        lx.bump();
        let mut preds: Vec<PredAst> = Vec::new();
        let mut tail: Option<Vec<ChainPredicate>> = None;
        loop {
            if lx.peek() == Some(&Tok::KeyF) {
                tail = Some(parse_chain(lx)?);
                // The nested chain must be the final item.
                match lx.peek() {
                    Some(Tok::RParen) => {}
                    _ => {
                        return Err(PathLtlError::Syntax {
                            pos: lx.pos(),
                            msg: "nested chain must be the last item".into(),
                        })
                    }
                }
            } else {
                preds.push(parse_pred_item(lx)?);
            }
            match lx.peek() {
                Some(Tok::Amp) => {
                    lx.bump();
                }
                Some(Tok::RParen) => {
                    lx.bump();
                    break;
                }
                other => {
                    return Err(PathLtlError::Syntax {
                        pos: lx.pos(),
                        msg: format!("expected `&` or `)`, found {}", describe(other)),
                    })
                }
            }
        }
        let head = if preds.is_empty() {
            ChainPredicate { parts: vec![PredAst::True] }
        } else {
            PredAst::and(preds)
        };
        let mut seq = vec![head];
        if let Some(t) = tail {
            seq.extend(t);
        }
        Ok(seq)
    } else {
        // `F lit` without parentheses.
        let lit = parse_literal(lx)?;
        Ok(vec![ChainPredicate { parts: vec![lit] }])
    }
}

fn parse_pred_item(lx: &mut Lexer) -> Result<PredAst, PathLtlError> {
    let mut acc = parse_pred_term(lx)?;
    while lx.peek() == Some(&Tok::Pipe) {
        lx.bump();
        let rhs = parse_pred_term(lx)?;
        acc = PredAst::Or(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_pred_term(lx: &mut Lexer) -> Result<PredAst, PathLtlError> {
    match lx.peek() {
        Some(Tok::LParen) => {
            lx.bump();
            let inner = parse_pred_item(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(inner)
        }
        _ => parse_literal(lx),
    }
}

fn parse_literal(lx: &mut Lexer) -> Result<PredAst, PathLtlError> {
    let negated = if lx.peek() == Some(&Tok::Bang) {
        lx.bump();
        true
    } else {
        false
    };
    let pos = lx.pos();
    match lx.bump() {
        Some(Tok::Ident(name)) => Ok(PredAst::Lit { name, negated }),
        got => Err(PathLtlError::Syntax {
            pos,
            msg: format!("expected a proposition name, found {}", describe(got.as_ref())),
        }),
    }
}

// ---------------------------------------------------------------------------
// Compilation.
// ---------------------------------------------------------------------------

/// Compile one chain formula to a total deterministic Büchi automaton over
/// the given proposition table. State `i` records that the first `i`
/// predicates have matched; reading a position advances greedily past every
/// consecutively satisfied predicate, so one position can discharge several
/// steps. The positive form accepts in the absorbing done state; the
/// negated form accepts in every other state. At most `n + 1` states for a
/// chain of length `n`.
pub fn compile_path_formula(
    f: &PathFormula,
    ap: &ApTable,
) -> Result<BuchiWordAutomaton, PathLtlError> {
    let n = f.sequence.len();
    let preds: Vec<Pred> = f
        .sequence
        .iter()
        .map(|c| c.resolve(ap))
        .collect::<Result<_, _>>()?;
    let mut b = BuchiWordAutomaton::new(
        &format!("path({f:?})"),
        ap.clone(),
        (0..=n)
            .map(|i| if i == n { "done".to_string() } else { format!("m{i}") })
            .collect(),
        0,
        Acceptance::Buchi,
        Branching::Deterministic,
    );
    for i in 0..n {
        // Advance to k: predicates i..k-1 (0-based) hold and predicate k
        // fails (or k = n). The guards partition the label space.
        for k in i..=n {
            let mut g = Pred::True;
            for p in preds.iter().take(k).skip(i) {
                g = Pred::And(Box::new(g), Box::new(p.clone()));
            }
            if k < n {
                g = Pred::And(Box::new(g), Box::new(Pred::Not(Box::new(preds[k].clone()))));
            }
            b.add(i, Guard::Pred(g), TagGuard::Any, k);
        }
    }
    b.add(n, Guard::any(), TagGuard::Any, n);
    if f.negated {
        for q in 0..n {
            b.mark_accepting(q);
        }
    } else {
        b.mark_accepting(n);
    }
    Ok(b)
}

/// Compile a conjunction of single-formula blocks into one deterministic
/// Büchi automaton (the intersection product of the compiled conjuncts).
/// Multi-formula disjunction blocks cannot be compiled.
pub fn compile_spec(
    spec: &PathLtlSpec,
    ap: &ApTable,
) -> Result<BuchiWordAutomaton, PathLtlError> {
    let mut parts = Vec::new();
    for block in &spec.blocks {
        match block.as_slice() {
            [single] => parts.push(compile_path_formula(single, ap)?),
            _ => return Err(PathLtlError::DisjunctionNotCompilable),
        }
    }
    let refs: Vec<&BuchiWordAutomaton> = parts.iter().collect();
    Ok(product_det(&refs)?)
}

// ---------------------------------------------------------------------------
// Semantic evaluation.
// ---------------------------------------------------------------------------

/// Evaluate the spec on the ultimately periodic word `stem · cycle^ω` by
/// explicit unrolling. The window `stem + n·cycle` positions (n = longest
/// chain) suffices: leftmost matching places the k-th predicate within k
/// further periods, and a full period without a hit proves a predicate can
/// never match.
pub fn eval_pathltl(
    spec: &PathLtlSpec,
    ap: &ApTable,
    stem: &[TaggedSymbol],
    cycle: &[TaggedSymbol],
) -> Result<bool, PathLtlError> {
    if cycle.is_empty() {
        return Err(PathLtlError::EmptyCycle);
    }
    let n_max = spec
        .blocks
        .iter()
        .flatten()
        .map(|f| f.sequence.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let len = stem.len() + n_max * cycle.len();
    let label_at = |i: usize| -> LabelSet {
        if i < stem.len() {
            stem[i].label
        } else {
            cycle[(i - stem.len()) % cycle.len()].label
        }
    };
    let eval_formula = |f: &PathFormula| -> Result<bool, PathLtlError> {
        let mut pos = 0usize;
        let mut matched = true;
        for step in &f.sequence {
            // Non-strict: the position that matched the previous predicate
            // may match this one too.
            let mut found = None;
            let mut i = pos;
            while i < len {
                if step.holds(ap, label_at(i))? {
                    found = Some(i);
                    break;
                }
                i += 1;
            }
            match found {
                Some(i) => pos = i,
                None => {
                    matched = false;
                    break;
                }
            }
        }
        Ok(matched != f.negated)
    };
    for block in &spec.blocks {
        let mut any = false;
        for f in block {
            if eval_formula(f)? {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Tag;
    use crate::word::accepts_lasso;

    fn ap() -> ApTable {
        ApTable::from_names(["p", "q", "r"]).unwrap()
    }

    fn sym(t: &ApTable, names: &[&str]) -> TaggedSymbol {
        let mut l = LabelSet::empty();
        for n in names {
            l.insert(t.lookup(n).unwrap());
        }
        TaggedSymbol::internal(l)
    }

    #[test]
    fn parse_shapes() {
        let s = parse_pathltl("F p").unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].len(), 1);
        let f = &s.blocks[0][0];
        assert!(!f.negated);
        assert_eq!(f.sequence.len(), 1);

        let s = parse_pathltl("!F(p & F q)").unwrap();
        let f = &s.blocks[0][0];
        assert!(f.negated);
        assert_eq!(f.sequence.len(), 2);

        let s = parse_pathltl("F p & !F q").unwrap();
        assert_eq!(s.blocks.len(), 2);
        assert!(!s.blocks[0][0].negated);
        assert!(s.blocks[1][0].negated);

        let s = parse_pathltl("(F p | !F q) & F r").unwrap();
        assert_eq!(s.blocks.len(), 2);
        assert_eq!(s.blocks[0].len(), 2);

        // Names and a nested chain with a compound predicate.
        let s = parse_pathltl("F(p & !q & F(q | r))").unwrap();
        let f = &s.blocks[0][0];
        assert_eq!(f.sequence.len(), 2);
        assert_eq!(f.sequence[0].parts.len(), 2);

        // Predicate-free nesting inserts an always-true step.
        let s = parse_pathltl("F(F p)").unwrap();
        assert_eq!(s.blocks[0][0].sequence.len(), 2);
        assert_eq!(s.blocks[0][0].sequence[0].parts, vec![PredAst::True]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_pathltl("F &").unwrap_err();
        match e {
            PathLtlError::Syntax { pos, .. } => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_pathltl("F(F p & q)").unwrap_err();
        assert!(matches!(e, PathLtlError::Syntax { .. }), "chain must be last");
        let e = parse_pathltl("p").unwrap_err();
        assert!(matches!(e, PathLtlError::Syntax { pos: 0, .. }));
        let e = parse_pathltl("F p @").unwrap_err();
        match e {
            PathLtlError::Syntax { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eventually_compiles_to_two_states() {
        let t = ap();
        let s = parse_pathltl("F p").unwrap();
        let b = compile_path_formula(&s.blocks[0][0], &t).unwrap();
        assert_eq!(b.state_count(), 2);
        assert!(b.check_deterministic().is_ok());
        let e = sym(&t, &[]);
        let p = sym(&t, &["p"]);
        // p in the cycle, p only in the stem, p nowhere.
        assert_eq!(accepts_lasso(&b, &[], &[p, e]), Ok(true));
        assert_eq!(accepts_lasso(&b, &[p], &[e]), Ok(true));
        assert_eq!(accepts_lasso(&b, &[e], &[e]), Ok(false));
    }

    #[test]
    fn negated_eventually_accepts_exactly_avoiding_lassos() {
        let t = ap();
        let s = parse_pathltl("!F p").unwrap();
        let b = compile_path_formula(&s.blocks[0][0], &t).unwrap();
        let e = sym(&t, &[]);
        let p = sym(&t, &["p"]);
        let q = sym(&t, &["q"]);
        assert_eq!(accepts_lasso(&b, &[], &[e, q]), Ok(true));
        assert_eq!(accepts_lasso(&b, &[p], &[e]), Ok(false));
        assert_eq!(accepts_lasso(&b, &[], &[e, p]), Ok(false));
    }

    #[test]
    fn one_position_discharges_consecutive_steps() {
        let t = ap();
        let s = parse_pathltl("F(p & F q)").unwrap();
        let b = compile_path_formula(&s.blocks[0][0], &t).unwrap();
        let pq = sym(&t, &["p", "q"]);
        let e = sym(&t, &[]);
        assert_eq!(accepts_lasso(&b, &[pq], &[e]), Ok(true));
        assert_eq!(
            eval_pathltl(&s, &t, &[pq], &[e]),
            Ok(true),
            "evaluator agrees on same-position matching"
        );
        // q strictly before p does not match.
        let q = sym(&t, &["q"]);
        let p = sym(&t, &["p"]);
        assert_eq!(accepts_lasso(&b, &[q, p], &[e]), Ok(false));
        assert_eq!(eval_pathltl(&s, &t, &[q, p], &[e]), Ok(false));
    }

    #[test]
    fn nested_chain_against_semantic_evaluation() {
        let t = ap();
        for text in [
            "F(p & F q)",
            "!F(p & F q)",
            "F(p & F(q & F r))",
            "F(p | q)",
            "!F(p & !q)",
        ] {
            let s = parse_pathltl(text).unwrap();
            let f = &s.blocks[0][0];
            let b = compile_path_formula(f, &t).unwrap();
            assert!(b.state_count() <= f.sequence.len() + 2, "{text}");
            assert!(b.check_deterministic().is_ok(), "{text}");
            for i in 0..500 {
                let mut rng = crate::generate::rng_for(41, i);
                let (stem, cycle) = crate::generate::random_lasso(&t, &mut rng);
                let sem = eval_pathltl(&s, &t, &stem, &cycle).unwrap();
                let aut = accepts_lasso(&b, &stem, &cycle).unwrap();
                assert_eq!(sem, aut, "{text} on {stem:?} / {cycle:?}");
            }
        }
    }

    #[test]
    fn negation_duality_on_samples() {
        let t = ap();
        let pos = parse_pathltl("F(p & F q)").unwrap();
        let neg = parse_pathltl("!F(p & F q)").unwrap();
        let bp = compile_path_formula(&pos.blocks[0][0], &t).unwrap();
        let bn = compile_path_formula(&neg.blocks[0][0], &t).unwrap();
        for i in 0..200 {
            let mut rng = crate::generate::rng_for(42, i);
            let (stem, cycle) = crate::generate::random_lasso(&t, &mut rng);
            let a = accepts_lasso(&bp, &stem, &cycle).unwrap();
            let b = accepts_lasso(&bn, &stem, &cycle).unwrap();
            assert_ne!(a, b, "exactly one polarity accepts");
        }
    }

    #[test]
    fn explicit_three_step_unrolling() {
        let t = ap();
        let s = parse_pathltl("F(p & F(q & F r))").unwrap();
        // Stem p, cycle (q then r): match p at 0, q at 1, r at 2.
        let stem = vec![sym(&t, &["p"])];
        let cycle = vec![sym(&t, &["q"]), sym(&t, &["r"])];
        assert_eq!(eval_pathltl(&s, &t, &stem, &cycle), Ok(true));
        // Cycle without r never completes the chain.
        let cycle2 = vec![sym(&t, &["q"])];
        assert_eq!(eval_pathltl(&s, &t, &stem, &cycle2), Ok(false));
        assert_eq!(
            eval_pathltl(&s, &t, &stem, &[]),
            Err(PathLtlError::EmptyCycle)
        );
    }

    #[test]
    fn spec_compilation_matches_conjunct_evaluation() {
        let t = ap();
        let s = parse_pathltl("F p & !F(q & F r)").unwrap();
        let b = compile_spec(&s, &t).unwrap();
        assert!(b.check_deterministic().is_ok());
        for i in 0..200 {
            let mut rng = crate::generate::rng_for(43, i);
            let (stem, cycle) = crate::generate::random_lasso(&t, &mut rng);
            let sem = eval_pathltl(&s, &t, &stem, &cycle).unwrap();
            let aut = accepts_lasso(&b, &stem, &cycle).unwrap();
            assert_eq!(sem, aut, "lasso {stem:?} / {cycle:?}");
        }
    }

    #[test]
    fn duplicate_conjunct_language_unchanged() {
        let t = ap();
        let single = compile_spec(&parse_pathltl("F p").unwrap(), &t).unwrap();
        let doubled = compile_spec(&parse_pathltl("F p & F p").unwrap(), &t).unwrap();
        for i in 0..100 {
            let mut rng = crate::generate::rng_for(44, i);
            let (stem, cycle) = crate::generate::random_lasso(&t, &mut rng);
            assert_eq!(
                accepts_lasso(&single, &stem, &cycle).unwrap(),
                accepts_lasso(&doubled, &stem, &cycle).unwrap()
            );
        }
    }

    #[test]
    fn disjunction_blocks_evaluate_but_do_not_compile() {
        let t = ap();
        let s = parse_pathltl("(F p | F q)").unwrap();
        assert_eq!(
            compile_spec(&s, &t),
            Err(PathLtlError::DisjunctionNotCompilable)
        );
        let p = sym(&t, &["p"]);
        let q = sym(&t, &["q"]);
        let e = sym(&t, &[]);
        assert_eq!(eval_pathltl(&s, &t, &[], &[q, e]), Ok(true));
        assert_eq!(eval_pathltl(&s, &t, &[p], &[e]), Ok(true));
        assert_eq!(eval_pathltl(&s, &t, &[], &[e]), Ok(false));
    }

    #[test]
    fn unknown_propositions_error() {
        let t = ApTable::from_names(["p"]).unwrap();
        let s = parse_pathltl("F z").unwrap();
        assert_eq!(
            compile_path_formula(&s.blocks[0][0], &t),
            Err(PathLtlError::UnknownProposition("z".into()))
        );
        assert_eq!(s.mentioned_names(), vec!["z".to_string()]);
    }
}
