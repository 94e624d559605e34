//! ω-word acceptors over tagged label alphabets: finite-state automata with
//! Büchi or co-Büchi acceptance (deterministic, nondeterministic, or
//! universal branching), guard predicates over label sets, ultimately
//! periodic word checking, and deterministic products.

use crate::alphabet::{ApTable, LabelSet, Pred, Tag, TaggedSymbol};

mod vpa;

pub use vpa::{run_prefix, vpa_step, StackSym, Vpa, VpaConfig};

/// Which structural tags a transition fires on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagGuard {
    Any,
    Only(Tag),
}

impl TagGuard {
    pub fn matches(self, t: Tag) -> bool {
        match self {
            TagGuard::Any => true,
            TagGuard::Only(x) => x == t,
        }
    }
}

/// A predicate over a position's label set.
///
/// `Exact { set, mask }` matches a label iff the label agrees with `set` on
/// exactly the propositions in `mask` (`label ∩ mask == set`); automata built
/// from files use `mask` = the automaton's mentioned-proposition universe, so
/// they can run over games with extra propositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    Exact { set: LabelSet, mask: LabelSet },
    Pred(Pred),
    And(Box<Guard>, Box<Guard>),
}

impl Guard {
    /// Exact match over the given universe.
    pub fn exact(set: LabelSet, mask: LabelSet) -> Guard {
        Guard::Exact { set, mask }
    }

    /// Matches every label.
    pub fn any() -> Guard {
        Guard::Exact { set: LabelSet::empty(), mask: LabelSet::empty() }
    }

    pub fn and(a: Guard, b: Guard) -> Guard {
        Guard::And(Box::new(a), Box::new(b))
    }

    pub fn matches(&self, label: LabelSet) -> bool {
        match self {
            Guard::Exact { set, mask } => label.intersect(*mask) == *set,
            Guard::Pred(p) => p.eval(label),
            Guard::And(a, b) => a.matches(label) && b.matches(label),
        }
    }

    /// Propositions whose presence or absence the guard can observe.
    pub fn mentioned(&self) -> LabelSet {
        match self {
            Guard::Exact { mask, .. } => *mask,
            Guard::Pred(p) => p.mentioned(),
            Guard::And(a, b) => a.mentioned().union(b.mentioned()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Acceptance {
    /// Accept iff accepting states are visited infinitely often.
    Buchi,
    /// Accept iff accepting states are visited only finitely often.
    CoBuchi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branching {
    Deterministic,
    Nondeterministic,
    /// Every infinite run must satisfy the acceptance condition; stuck
    /// branches are vacuously fine.
    Universal,
}

/// A finite-state ω-word automaton over tagged label symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiWordAutomaton {
    pub name: String,
    pub ap: ApTable,
    /// Union of all guards' mentioned propositions.
    pub universe: LabelSet,
    pub state_names: Vec<String>,
    pub initial: usize,
    /// Outgoing transitions per state.
    pub transitions: Vec<Vec<(Guard, TagGuard, usize)>>,
    pub accepting: Vec<bool>,
    pub acceptance: Acceptance,
    pub mode: Branching,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("symbol mentions propositions outside the automaton's table")]
    SymbolOutsideAlphabet,
    #[error("cycle word must be nonempty")]
    EmptyCycle,
    #[error("product of zero automata")]
    EmptyProduct,
    #[error("operation requires deterministic automata, `{0}` is not marked deterministic")]
    NotDeterministic(String),
    #[error("operation requires Büchi acceptance, `{0}` is co-Büchi")]
    NotBuchi(String),
    #[error("automata must share one proposition table (`{0}` vs `{1}`)")]
    AlphabetMismatch(String, String),
    #[error("automaton `{name}` breaks determinism: state `{state}` has overlapping transitions")]
    DeterminismViolated { name: String, state: String },
}

impl BuchiWordAutomaton {
    pub fn new(
        name: &str,
        ap: ApTable,
        state_names: Vec<String>,
        initial: usize,
        acceptance: Acceptance,
        mode: Branching,
    ) -> Self {
        let n = state_names.len();
        BuchiWordAutomaton {
            name: name.to_string(),
            ap,
            universe: LabelSet::empty(),
            state_names,
            initial,
            transitions: vec![Vec::new(); n],
            accepting: vec![false; n],
            acceptance,
            mode,
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn mark_accepting(&mut self, q: usize) {
        self.accepting[q] = true;
    }

    pub fn add(&mut self, q: usize, guard: Guard, tag: TagGuard, to: usize) {
        self.universe = self.universe.union(guard.mentioned());
        self.transitions[q].push((guard, tag, to));
    }

    /// All successors of `q` on a symbol.
    pub fn successors(&self, q: usize, sym: TaggedSymbol) -> Vec<usize> {
        self.transitions[q]
            .iter()
            .filter(|(g, t, _)| t.matches(sym.tag) && g.matches(sym.label))
            .map(|&(_, _, to)| to)
            .collect()
    }

    /// The unique successor for deterministic automata (None = stuck).
    pub fn det_successor(&self, q: usize, sym: TaggedSymbol) -> Option<usize> {
        self.successors(q, sym).first().copied()
    }

    /// Verify the claimed determinism by enumerating every (mentioned-subset,
    /// tag) symbol class and checking at most one transition fires.
    pub fn check_deterministic(&self) -> Result<(), WordError> {
        if self.mode != Branching::Deterministic {
            return Err(WordError::NotDeterministic(self.name.clone()));
        }
        for q in 0..self.state_count() {
            for sym in symbol_classes(self.universe) {
                let n = self
                    .transitions[q]
                    .iter()
                    .filter(|(g, t, _)| t.matches(sym.tag) && g.matches(sym.label))
                    .count();
                if n > 1 {
                    return Err(WordError::DeterminismViolated {
                        name: self.name.clone(),
                        state: self.state_names[q].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Totalize: route every undefined (state, symbol-class) into a sink that
    /// decides rejection by itself — a non-accepting absorbing state under
    /// Büchi, an accepting absorbing state under co-Büchi (visited forever, it
    /// breaks the finitely-often requirement).
    pub fn totalized(&self) -> BuchiWordAutomaton {
        let mut out = self.clone();
        let sink = out.state_count();
        let mut sink_needed = false;
        let classes: Vec<TaggedSymbol> = symbol_classes(out.universe).collect();
        let mut patches: Vec<(usize, Guard, TagGuard)> = Vec::new();
        for q in 0..out.state_count() {
            for &sym in &classes {
                let covered = out.transitions[q]
                    .iter()
                    .any(|(g, t, _)| t.matches(sym.tag) && g.matches(sym.label));
                if !covered {
                    sink_needed = true;
                    patches.push((
                        q,
                        Guard::exact(sym.label, out.universe),
                        TagGuard::Only(sym.tag),
                    ));
                }
            }
        }
        if sink_needed {
            out.state_names.push("sink".into());
            out.transitions.push(vec![(Guard::any(), TagGuard::Any, sink)]);
            out.accepting.push(out.acceptance == Acceptance::CoBuchi);
            for (q, g, t) in patches {
                out.transitions[q].push((g, t, sink));
            }
        }
        out
    }
}

/// Iterate one representative symbol per equivalence class w.r.t. a mentioned
/// universe: all subsets of the universe, each with all three tags.
pub fn symbol_classes(universe: LabelSet) -> impl Iterator<Item = TaggedSymbol> {
    let ids: Vec<_> = universe.iter().collect();
    let n = ids.len();
    (0..(1u64 << n)).flat_map(move |bits| {
        let mut label = LabelSet::empty();
        for (i, &id) in ids.iter().enumerate() {
            if bits & (1 << i) != 0 {
                label.insert(id);
            }
        }
        [Tag::Internal, Tag::Call, Tag::Return]
            .into_iter()
            .map(move |t| TaggedSymbol::new(label, t))
    })
}

/// Decide acceptance of the ultimately periodic word `stem · cycle^ω`.
///
/// All mode/acceptance combinations reduce to cycle analysis on the product
/// of the automaton with the `stem.len() + cycle.len()` word positions:
/// - nondeterministic (and deterministic) Büchi: some reachable cycle touches
///   an accepting state;
/// - nondeterministic co-Büchi: some reachable cycle avoids accepting states;
/// - universal Büchi: no reachable cycle avoids accepting states;
/// - universal co-Büchi: no reachable cycle touches an accepting state.
pub fn accepts_lasso(
    b: &BuchiWordAutomaton,
    stem: &[TaggedSymbol],
    cycle: &[TaggedSymbol],
) -> Result<bool, WordError> {
    if cycle.is_empty() {
        return Err(WordError::EmptyCycle);
    }
    let table_universe = b.ap.universe();
    for sym in stem.iter().chain(cycle.iter()) {
        if !sym.label.is_subset_of(table_universe) {
            return Err(WordError::SymbolOutsideAlphabet);
        }
    }

    let l = stem.len() + cycle.len();
    let word_at = |i: usize| -> TaggedSymbol {
        if i < stem.len() {
            stem[i]
        } else {
            cycle[i - stem.len()]
        }
    };
    let next_pos = |i: usize| -> usize {
        if i + 1 < l {
            i + 1
        } else {
            stem.len()
        }
    };

    // Explicit reachable product graph over (position, state).
    let n = b.state_count();
    let id = |i: usize, q: usize| i * n + q;
    let mut seen = vec![false; l * n];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); l * n];
    let mut queue = std::collections::VecDeque::new();
    let start = id(0, b.initial);
    seen[start] = true;
    queue.push_back((0usize, b.initial));
    while let Some((i, q)) = queue.pop_front() {
        for to in b.successors(q, word_at(i)) {
            let j = next_pos(i);
            edges[id(i, q)].push(id(j, to));
            if !seen[id(j, to)] {
                seen[id(j, to)] = true;
                queue.push_back((j, to));
            }
        }
    }

    let is_acc = |node: usize| b.accepting[node % n];
    let cycle_with_acc = crate::graph::reachable_cycle_through(&edges, &[start], &is_acc);
    let cycle_without_acc =
        crate::graph::reachable_cycle_within(&edges, &[start], &|v| !is_acc(v));

    Ok(match (b.mode, b.acceptance) {
        (Branching::Deterministic | Branching::Nondeterministic, Acceptance::Buchi) => {
            cycle_with_acc
        }
        (Branching::Deterministic | Branching::Nondeterministic, Acceptance::CoBuchi) => {
            cycle_without_acc
        }
        (Branching::Universal, Acceptance::Buchi) => !cycle_without_acc,
        (Branching::Universal, Acceptance::CoBuchi) => !cycle_with_acc,
    })
}

/// Deterministic Büchi intersection with round-robin acceptance counting.
/// States are tuples of component states plus a counter pointing at the
/// component whose acceptance is awaited; the result accepts exactly the
/// intersection of the input languages.
pub fn product_det(parts: &[&BuchiWordAutomaton]) -> Result<BuchiWordAutomaton, WordError> {
    if parts.is_empty() {
        return Err(WordError::EmptyProduct);
    }
    for p in parts {
        if p.mode != Branching::Deterministic {
            return Err(WordError::NotDeterministic(p.name.clone()));
        }
        if p.acceptance != Acceptance::Buchi {
            return Err(WordError::NotBuchi(p.name.clone()));
        }
        if p.ap != parts[0].ap {
            return Err(WordError::AlphabetMismatch(
                parts[0].name.clone(),
                p.name.clone(),
            ));
        }
    }
    let k = parts.len();
    let universe = parts.iter().fold(LabelSet::empty(), |u, p| u.union(p.universe));
    let classes: Vec<TaggedSymbol> = symbol_classes(universe).collect();

    // Lazily explore reachable (tuple, counter) states.
    type Key = (Vec<usize>, usize);
    let mut ids: std::collections::BTreeMap<Key, usize> = std::collections::BTreeMap::new();
    let mut order: Vec<Key> = Vec::new();
    let start: Key = (parts.iter().map(|p| p.initial).collect(), 0);
    ids.insert(start.clone(), 0);
    order.push(start);
    let mut transitions: Vec<Vec<(Guard, TagGuard, usize)>> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut at = 0usize;
    while at < order.len() {
        let (tuple, counter) = order[at].clone();
        let mut row = Vec::new();
        for &sym in &classes {
            let mut next = Vec::with_capacity(k);
            let mut stuck = false;
            for (p, &q) in parts.iter().zip(tuple.iter()) {
                match p.det_successor(q, sym) {
                    Some(s) => next.push(s),
                    None => {
                        stuck = true;
                        break;
                    }
                }
            }
            if stuck {
                continue; // partial product: stuck symbol classes rejected implicitly
            }
            let next_counter = if parts[counter].accepting[tuple[counter]] {
                (counter + 1) % k
            } else {
                counter
            };
            let key: Key = (next, next_counter);
            let id = match ids.get(&key) {
                Some(&i) => i,
                None => {
                    let i = order.len();
                    ids.insert(key.clone(), i);
                    order.push(key);
                    i
                }
            };
            row.push((Guard::exact(sym.label, universe), TagGuard::Only(sym.tag), id));
        }
        transitions.push(row);
        let (tuple, counter) = &order[at];
        accepting.push(*counter == 0 && parts[0].accepting[tuple[0]]);
        names.push(format!(
            "{}@{}",
            tuple
                .iter()
                .zip(parts.iter())
                .map(|(&q, p)| p.state_names[q].clone())
                .collect::<Vec<_>>()
                .join("*"),
            counter
        ));
        at += 1;
    }

    Ok(BuchiWordAutomaton {
        name: format!(
            "product({})",
            parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(",")
        ),
        ap: parts[0].ap.clone(),
        universe,
        state_names: names,
        initial: 0,
        transitions,
        accepting,
        acceptance: Acceptance::Buchi,
        mode: Branching::Deterministic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::ApTable;

    use crate::generate::infinitely_often as inf_often;

    fn table(names: &[&str]) -> ApTable {
        ApTable::from_names(names.iter().copied()).expect("small table")
    }

    fn sym(ap: &ApTable, names: &[&str]) -> TaggedSymbol {
        let mut l = LabelSet::empty();
        for n in names {
            l.insert(ap.lookup(n).unwrap());
        }
        TaggedSymbol::internal(l)
    }

    #[test]
    fn lasso_detects_infinitely_often() {
        let ap = table(&["p"]);
        let b = inf_often(&ap, "p");
        let empty = sym(&ap, &[]);
        let p = sym(&ap, &["p"]);
        assert_eq!(accepts_lasso(&b, &[empty], &[p]), Ok(true));
        assert_eq!(accepts_lasso(&b, &[p], &[empty]), Ok(false));
        assert_eq!(accepts_lasso(&b, &[], &[p, empty]), Ok(true));
    }

    #[test]
    fn lasso_rejects_unknown_propositions() {
        let ap = table(&["p"]);
        let b = inf_often(&ap, "p");
        let bigger = table(&["p", "q"]);
        let q = sym(&bigger, &["q"]);
        assert_eq!(accepts_lasso(&b, &[], &[q]), Err(WordError::SymbolOutsideAlphabet));
    }

    #[test]
    fn empty_cycle_is_an_error() {
        let ap = table(&["p"]);
        let b = inf_often(&ap, "p");
        assert_eq!(accepts_lasso(&b, &[], &[]), Err(WordError::EmptyCycle));
    }

    #[test]
    fn universal_branching_requires_every_run() {
        // From the initial state two copies split unconditionally: one loops
        // in an accepting state, the other in a rejecting state — so some run
        // starves the accepting set and universal Büchi rejects.
        let ap = table(&["p"]);
        let mut b = BuchiWordAutomaton::new(
            "two-copies",
            ap.clone(),
            vec!["s".into(), "good".into(), "bad".into()],
            0,
            Acceptance::Buchi,
            Branching::Universal,
        );
        b.add(0, Guard::any(), TagGuard::Any, 1);
        b.add(0, Guard::any(), TagGuard::Any, 2);
        b.add(1, Guard::any(), TagGuard::Any, 1);
        b.add(2, Guard::any(), TagGuard::Any, 2);
        b.mark_accepting(1);
        let x = sym(&ap, &[]);
        assert_eq!(accepts_lasso(&b, &[], &[x]), Ok(false));
        // Making the second copy accepting too flips the verdict.
        b.mark_accepting(2);
        assert_eq!(accepts_lasso(&b, &[], &[x]), Ok(true));
    }

    #[test]
    fn lasso_invariant_under_rotation() {
        let ap = table(&["p", "q"]);
        let b = inf_often(&ap, "p");
        let syms = [sym(&ap, &[]), sym(&ap, &["p"]), sym(&ap, &["q"]), sym(&ap, &["p", "q"])];
        for stem_len in 0..3usize {
            for cyc in [[0usize, 1, 2].as_slice(), [3, 0].as_slice(), [2].as_slice()] {
                let stem: Vec<_> = (0..stem_len).map(|i| syms[i % 4]).collect();
                let cycle: Vec<_> = cyc.iter().map(|&i| syms[i]).collect();
                let base = accepts_lasso(&b, &stem, &cycle).unwrap();
                for r in 1..cycle.len() {
                    let mut rot = cycle.clone();
                    rot.rotate_left(r);
                    let mut stem2 = stem.clone();
                    stem2.extend_from_slice(&cycle[..r]);
                    assert_eq!(accepts_lasso(&b, &stem2, &rot).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn det_agrees_with_explicit_simulation() {
        use rand::Rng;
        let ap = table(&["p", "q"]);
        let b = inf_often(&ap, "p");
        let mut rng = crate::generate::rng_for(11, 0);
        for _ in 0..200 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut l = LabelSet::empty();
                if rng.random_bool(0.5) {
                    l.insert(ap.lookup("p").unwrap());
                }
                if rng.random_bool(0.5) {
                    l.insert(ap.lookup("q").unwrap());
                }
                TaggedSymbol::internal(l)
            };
            let stem: Vec<_> = (0..rng.random_range(0..4)).map(|_| mk(&mut rng)).collect();
            let cycle: Vec<_> = (0..rng.random_range(1..4)).map(|_| mk(&mut rng)).collect();
            // Explicit simulation: run the stem plus enough periods, then
            // check whether an accepting state recurs with the same phase.
            let mut q = b.initial;
            let mut ok = true;
            for s in &stem {
                match b.det_successor(q, *s) {
                    Some(n) => q = n,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            let expected = ok && {
                // After the stem: iterate the cycle |Q| times to stabilize,
                // then once more recording accepting visits.
                let mut cur = q;
                let mut alive = true;
                for _ in 0..b.state_count() {
                    for s in &cycle {
                        match b.det_successor(cur, *s) {
                            Some(n) => cur = n,
                            None => {
                                alive = false;
                                break;
                            }
                        }
                    }
                    if !alive {
                        break;
                    }
                }
                alive && {
                    let mut hit = false;
                    let mut c = cur;
                    for s in &cycle {
                        hit |= b.accepting[c];
                        match b.det_successor(c, *s) {
                            Some(n) => c = n,
                            None => {
                                alive = false;
                                break;
                            }
                        }
                    }
                    hit |= b.accepting[c];
                    alive && hit
                }
            };
            assert_eq!(accepts_lasso(&b, &stem, &cycle).unwrap(), expected);
        }
    }

    #[test]
    fn product_intersects_languages() {
        let ap = table(&["p", "q"]);
        let bp = inf_often(&ap, "p");
        let bq = inf_often(&ap, "q");
        let prod = product_det(&[&bp, &bq]).unwrap();
        assert!(prod.check_deterministic().is_ok());
        let mut rng = crate::generate::rng_for(13, 0);
        use rand::Rng;
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut l = LabelSet::empty();
                if rng.random_bool(0.5) {
                    l.insert(ap.lookup("p").unwrap());
                }
                if rng.random_bool(0.5) {
                    l.insert(ap.lookup("q").unwrap());
                }
                TaggedSymbol::internal(l)
            };
            let stem: Vec<_> = (0..rng.random_range(0..3)).map(|_| mk(&mut rng)).collect();
            let cycle: Vec<_> = (0..rng.random_range(1..4)).map(|_| mk(&mut rng)).collect();
            let both = accepts_lasso(&bp, &stem, &cycle).unwrap()
                && accepts_lasso(&bq, &stem, &cycle).unwrap();
            assert_eq!(accepts_lasso(&prod, &stem, &cycle).unwrap(), both);
        }
    }

    #[test]
    fn product_of_one_and_with_itself() {
        let ap = table(&["p"]);
        let b = inf_often(&ap, "p");
        let single = product_det(&[&b]).unwrap();
        let twice = product_det(&[&b, &b]).unwrap();
        let p = sym(&ap, &["p"]);
        let e = sym(&ap, &[]);
        for (stem, cycle) in [
            (vec![], vec![p]),
            (vec![p], vec![e]),
            (vec![e, p], vec![p, e]),
        ] {
            let base = accepts_lasso(&b, &stem, &cycle).unwrap();
            assert_eq!(accepts_lasso(&single, &stem, &cycle).unwrap(), base);
            assert_eq!(accepts_lasso(&twice, &stem, &cycle).unwrap(), base);
        }
    }

    #[test]
    fn totalization_fills_stuck_classes() {
        let ap = table(&["p"]);
        let id = ap.lookup("p").unwrap();
        let mask = LabelSet::singleton(id);
        let mut b = BuchiWordAutomaton::new(
            "partial",
            ap,
            vec!["s".into()],
            0,
            Acceptance::Buchi,
            Branching::Deterministic,
        );
        // Only defined on labels containing p.
        b.add(0, Guard::exact(mask, mask), TagGuard::Any, 0);
        b.mark_accepting(0);
        let t = b.totalized();
        assert_eq!(t.state_count(), 2);
        let p = TaggedSymbol::internal(mask);
        let e = TaggedSymbol::internal(LabelSet::empty());
        assert_eq!(accepts_lasso(&t, &[], &[p]), Ok(true));
        assert_eq!(accepts_lasso(&t, &[], &[e]), Ok(false));
        assert_eq!(accepts_lasso(&b, &[], &[e]), Ok(false));
    }
}
