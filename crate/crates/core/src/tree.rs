//! Automata on infinite `k`-ary labeled trees, with regular trees as the
//! finite inputs and witnesses: nondeterministic Büchi tree automata (NBT),
//! their universal duals (UBT), the breakpoint construction turning a UBT
//! into an equivalent deterministic NBT, products, emptiness with certified
//! regular witnesses, and the underlying two-player Büchi games.
//!
//! Transition conventions: an NBT entry maps (state, label) to a set of
//! `k`-tuples of successor states; a missing entry means no run continues
//! (that branch of the run tree dies and the run fails). A UBT entry maps
//! (state, label) to a conjunction of (direction, state) obligations; a
//! missing entry is the empty conjunction, which is vacuously satisfied.
//! Rejection in a UBT is therefore always expressed through explicit
//! non-accepting sink states.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::game::Player;
use crate::graph;

/// A finitely presented infinite `k`-ary tree: finitely many node classes,
/// each with a label and `k` ordered children (indices into the same node
/// list). Unfolding from `root` yields the infinite tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegularTree<L> {
    pub arity: usize,
    pub labels: Vec<L>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("tree arity must be at least one")]
    ArityZero,
    #[error("malformed regular tree: {0}")]
    BadTree(String),
    #[error("automata disagree on arity ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("automata disagree on label alphabet")]
    AlphabetMismatch,
    #[error("tree label {0} is not in the automaton alphabet")]
    LabelOutsideAlphabet(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl<L: Clone + Ord + Debug> RegularTree<L> {
    pub fn new(
        arity: usize,
        labels: Vec<L>,
        children: Vec<Vec<usize>>,
        root: usize,
    ) -> Result<Self, TreeError> {
        if arity == 0 {
            return Err(TreeError::ArityZero);
        }
        if labels.len() != children.len() || labels.is_empty() {
            return Err(TreeError::BadTree(format!(
                "{} labels for {} child rows",
                labels.len(),
                children.len()
            )));
        }
        if root >= labels.len() {
            return Err(TreeError::BadTree(format!("root {root} out of range")));
        }
        for (i, row) in children.iter().enumerate() {
            if row.len() != arity {
                return Err(TreeError::BadTree(format!(
                    "node {i} has {} children, arity is {arity}",
                    row.len()
                )));
            }
            if let Some(&c) = row.iter().find(|&&c| c >= labels.len()) {
                return Err(TreeError::BadTree(format!(
                    "node {i} points at missing node {c}"
                )));
            }
        }
        Ok(RegularTree { arity, labels, children, root })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// GraphViz rendering of the tree's finite presentation.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::from("digraph tree {\n  rankdir=TB;\n");
        for (i, l) in self.labels.iter().enumerate() {
            let shape = if i == self.root { "doubleoctagon" } else { "box" };
            let _ = writeln!(s, "  n{i} [shape={shape}, label=\"{l:?}\"];");
        }
        for (i, row) in self.children.iter().enumerate() {
            for (d, &c) in row.iter().enumerate() {
                let _ = writeln!(s, "  n{i} -> n{c} [label=\"{d}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Nondeterministic Büchi tree automaton: accepts a tree iff some run tree
/// exists in which every infinite path visits accepting states infinitely
/// often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nbt<L> {
    pub name: String,
    pub arity: usize,
    pub alphabet: Vec<L>,
    pub state_names: Vec<String>,
    pub initial: usize,
    /// (state, label index) -> choice of successor-state tuples.
    pub delta: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
    pub accepting: Vec<bool>,
}

impl<L: Clone + Ord + Debug> Nbt<L> {
    pub fn new(
        name: &str,
        arity: usize,
        alphabet: Vec<L>,
        state_names: Vec<String>,
        initial: usize,
    ) -> Self {
        let n = state_names.len();
        Nbt {
            name: name.to_string(),
            arity,
            alphabet,
            state_names,
            initial,
            delta: BTreeMap::new(),
            accepting: vec![false; n],
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn mark_accepting(&mut self, q: usize) {
        self.accepting[q] = true;
    }

    pub fn add_transition(&mut self, q: usize, label: usize, tuple: Vec<usize>) {
        assert_eq!(tuple.len(), self.arity, "tuple length must equal arity");
        assert!(label < self.alphabet.len(), "label index out of range");
        self.delta.entry((q, label)).or_default().push(tuple);
    }

    pub fn label_index(&self, l: &L) -> Result<usize, TreeError> {
        self.alphabet
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| TreeError::LabelOutsideAlphabet(format!("{l:?}")))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.values().map(|v| v.len()).sum()
    }
}

/// Universal Büchi tree automaton: accepts a tree iff in the unique
/// obligation unfolding every infinite copy path visits accepting states
/// infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ubt<L> {
    pub name: String,
    pub arity: usize,
    pub alphabet: Vec<L>,
    pub state_names: Vec<String>,
    pub initial: usize,
    /// (state, label index) -> conjunction of (direction, state) obligations.
    /// Missing entries are empty conjunctions (vacuously satisfied).
    pub delta: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    pub accepting: Vec<bool>,
}

impl<L: Clone + Ord + Debug> Ubt<L> {
    pub fn new(
        name: &str,
        arity: usize,
        alphabet: Vec<L>,
        state_names: Vec<String>,
        initial: usize,
    ) -> Self {
        let n = state_names.len();
        Ubt {
            name: name.to_string(),
            arity,
            alphabet,
            state_names,
            initial,
            delta: BTreeMap::new(),
            accepting: vec![false; n],
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn mark_accepting(&mut self, q: usize) {
        self.accepting[q] = true;
    }

    pub fn add_obligation(&mut self, q: usize, label: usize, dir: usize, to: usize) {
        assert!(dir < self.arity, "direction out of range");
        assert!(label < self.alphabet.len(), "label index out of range");
        self.delta.entry((q, label)).or_default().push((dir, to));
    }

    pub fn label_index(&self, l: &L) -> Result<usize, TreeError> {
        self.alphabet
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| TreeError::LabelOutsideAlphabet(format!("{l:?}")))
    }

    pub fn obligations(&self, q: usize, label: usize) -> &[(usize, usize)] {
        self.delta.get(&(q, label)).map(Vec::as_slice).unwrap_or(&[])
    }
}

// ---------------------------------------------------------------------------
// Two-player Büchi games.
// ---------------------------------------------------------------------------

/// A finite game arena. Every vertex must have at least one successor
/// (totalize with sinks before solving).
#[derive(Debug, Clone, Default)]
pub struct GameArena {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<usize>>,
}

impl GameArena {
    pub fn add_vertex(&mut self, owner: Player) -> usize {
        self.owner.push(owner);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }
}

/// Result of solving a Büchi game for the protagonist (`Player::Zero`):
/// the winning set and a positional strategy defined on the protagonist's
/// winning vertices (chosen successor).
#[derive(Debug, Clone)]
pub struct BuchiSolution {
    pub win: Vec<bool>,
    pub strategy: Vec<Option<usize>>,
}

/// Player `player` attractor of `target` within the `alive` subarena.
/// Returns membership plus BFS ranks (target vertices have rank 0).
fn attractor(
    arena: &GameArena,
    pred: &[Vec<usize>],
    alive: &[bool],
    target: &[bool],
    player: Player,
) -> (Vec<bool>, Vec<usize>) {
    let n = arena.len();
    let mut inset = vec![false; n];
    let mut rank = vec![usize::MAX; n];
    // For opponent vertices, count how many alive successors still escape.
    let mut escapes = vec![0usize; n];
    for v in 0..n {
        if alive[v] && arena.owner[v] != player {
            escapes[v] = arena.succ[v].iter().filter(|&&u| alive[u]).count();
        }
    }
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n {
        if alive[v] && target[v] {
            inset[v] = true;
            rank[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if !alive[u] || inset[u] {
                continue;
            }
            let pulled = if arena.owner[u] == player {
                true
            } else {
                escapes[u] -= 1;
                escapes[u] == 0
            };
            if pulled {
                inset[u] = true;
                rank[u] = rank[v] + 1;
                queue.push_back(u);
            }
        }
    }
    (inset, rank)
}

fn predecessors(arena: &GameArena) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); arena.len()];
    for (v, row) in arena.succ.iter().enumerate() {
        for &u in row {
            pred[u].push(v);
        }
    }
    pred
}

/// Solve the Büchi game "visit `target` infinitely often" for the
/// protagonist by repeated attractor elimination, and extract a positional
/// winning strategy on the winning region.
pub fn buchi_win(arena: &GameArena, target: &[bool]) -> BuchiSolution {
    let n = arena.len();
    debug_assert!(
        arena.succ.iter().all(|s| !s.is_empty()),
        "arena must be total"
    );
    let pred = predecessors(arena);
    let mut alive = vec![true; n];
    loop {
        let live_target: Vec<bool> =
            (0..n).map(|v| alive[v] && target[v]).collect();
        let (reach_f, _) = attractor(arena, &pred, &alive, &live_target, Player::Zero);
        let trap: Vec<bool> = (0..n).map(|v| alive[v] && !reach_f[v]).collect();
        if !trap.iter().any(|&b| b) {
            break;
        }
        let (lost, _) = attractor(arena, &pred, &alive, &trap, Player::One);
        let mut removed = false;
        for v in 0..n {
            if alive[v] && (lost[v] || trap[v]) {
                alive[v] = false;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }

    // Strategy on the final winning region: head down the attractor ranks
    // toward the target, and from target vertices step anywhere that stays
    // inside the region.
    let win = alive;
    let live_target: Vec<bool> = (0..n).map(|v| win[v] && target[v]).collect();
    let (_, rank) = attractor(arena, &pred, &win, &live_target, Player::Zero);
    let mut strategy = vec![None; n];
    for v in 0..n {
        if !win[v] || arena.owner[v] != Player::Zero {
            continue;
        }
        let choice = if live_target[v] {
            arena.succ[v].iter().copied().find(|&u| win[u])
        } else {
            arena.succ[v]
                .iter()
                .copied()
                .filter(|&u| win[u])
                .min_by_key(|&u| rank[u])
        };
        strategy[v] = choice;
        debug_assert!(strategy[v].is_some(), "winning vertex without a move");
    }
    BuchiSolution { win, strategy }
}

/// Independent slow solver for cross-checking: the greatest fixpoint of
/// Y ↦ Attr₀(target ∩ CPre₀(Y)), starting from the full vertex set.
pub fn buchi_win_naive(arena: &GameArena, target: &[bool]) -> Vec<bool> {
    let n = arena.len();
    let pred = predecessors(arena);
    let all = vec![true; n];
    let mut y = vec![true; n];
    loop {
        let cpre: Vec<bool> = (0..n)
            .map(|v| {
                if arena.owner[v] == Player::Zero {
                    arena.succ[v].iter().any(|&u| y[u])
                } else {
                    arena.succ[v].iter().all(|&u| y[u])
                }
            })
            .collect();
        let t: Vec<bool> = (0..n).map(|v| target[v] && cpre[v]).collect();
        let (next, _) = attractor(arena, &pred, &all, &t, Player::Zero);
        if next == y {
            return y;
        }
        y = next;
    }
}

// ---------------------------------------------------------------------------
// Membership.
// ---------------------------------------------------------------------------

/// Does the UBT accept the regular tree? Equivalent to: the obligation
/// product graph over (tree node, state) has no reachable cycle that avoids
/// accepting states.
pub fn ubt_membership<L: Clone + Ord + Debug>(
    a: &Ubt<L>,
    t: &RegularTree<L>,
) -> Result<bool, TreeError> {
    if t.arity != a.arity {
        return Err(TreeError::ArityMismatch(a.arity, t.arity));
    }
    let li: Vec<usize> = t
        .labels
        .iter()
        .map(|l| a.label_index(l))
        .collect::<Result<_, _>>()?;
    let ns = a.state_count();
    let id = |x: usize, q: usize| x * ns + q;
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); t.node_count() * ns];
    for x in 0..t.node_count() {
        for q in 0..ns {
            for &(dir, to) in a.obligations(q, li[x]) {
                succ[id(x, q)].push(id(t.children[x][dir], to));
            }
        }
    }
    let start = id(t.root, a.initial);
    Ok(!graph::reachable_cycle_within(&succ, &[start], &|v| {
        !a.accepting[v % ns]
    }))
}

/// Does the NBT accept the regular tree? Solved as a Büchi game where the
/// automaton picks transitions and the pathfinder picks directions.
pub fn nbt_membership<L: Clone + Ord + Debug>(
    a: &Nbt<L>,
    t: &RegularTree<L>,
) -> Result<bool, TreeError> {
    if t.arity != a.arity {
        return Err(TreeError::ArityMismatch(a.arity, t.arity));
    }
    let li: Vec<usize> = t
        .labels
        .iter()
        .map(|l| a.label_index(l))
        .collect::<Result<_, _>>()?;

    let mut arena = GameArena::default();
    let mut target: Vec<bool> = Vec::new();
    // Choice vertices (tree node, state) are the automaton's; branch
    // vertices (tree node, state, tuple index) are the pathfinder's.
    let mut choice_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();
    let mut get_choice = |x: usize,
                          q: usize,
                          arena: &mut GameArena,
                          target: &mut Vec<bool>,
                          queue: &mut Vec<(usize, usize)>|
     -> usize {
        match choice_ids.get(&(x, q)) {
            Some(&v) => v,
            None => {
                let v = arena.add_vertex(Player::Zero);
                target.push(a.accepting[q]);
                choice_ids.insert((x, q), v);
                queue.push((x, q));
                v
            }
        }
    };
    let start = get_choice(t.root, a.initial, &mut arena, &mut target, &mut queue);
    let mut sink: Option<usize> = None;
    let mut at = 0;
    while at < queue.len() {
        let (x, q) = queue[at];
        at += 1;
        let v = get_choice(x, q, &mut arena, &mut target, &mut queue);
        let tuples = a.delta.get(&(q, li[x])).cloned().unwrap_or_default();
        if tuples.is_empty() {
            let s = *sink.get_or_insert_with(|| {
                let s = arena.add_vertex(Player::Zero);
                target.push(false);
                s
            });
            arena.add_edge(v, s);
            continue;
        }
        for tuple in tuples {
            let b = arena.add_vertex(Player::One);
            target.push(false);
            arena.add_edge(v, b);
            for d in 0..a.arity {
                let c = get_choice(
                    t.children[x][d],
                    tuple[d],
                    &mut arena,
                    &mut target,
                    &mut queue,
                );
                arena.add_edge(b, c);
            }
        }
    }
    if let Some(s) = sink {
        arena.add_edge(s, s);
    }
    let sol = buchi_win(&arena, &target);
    Ok(sol.win[start])
}

// ---------------------------------------------------------------------------
// Breakpoint construction.
// ---------------------------------------------------------------------------

/// Convert a UBT into an equivalent deterministic NBT by the breakpoint
/// (subset + owing-subset) construction. A state is a pair (S, O): S holds
/// the automaton states alive on the current path, O ⊆ S those that still
/// owe an accepting visit since the last breakpoint; O = ∅ is the accepting
/// breakpoint and refills from the fresh S. The result has at most 3^|Q|
/// reachable states and exactly one transition per (state, label).
pub fn ubt_to_nbt<L: Clone + Ord + Debug>(a: &Ubt<L>) -> Nbt<L> {
    use std::collections::BTreeSet;
    type So = (BTreeSet<usize>, BTreeSet<usize>);

    let init: So = {
        let s: BTreeSet<usize> = [a.initial].into();
        let o: BTreeSet<usize> =
            s.iter().copied().filter(|&q| !a.accepting[q]).collect();
        (s, o)
    };
    let mut ids: BTreeMap<So, usize> = BTreeMap::new();
    let mut order: Vec<So> = Vec::new();
    ids.insert(init.clone(), 0);
    order.push(init);
    let mut rows: Vec<Vec<Vec<usize>>> = Vec::new(); // per state, per label: tuple
    let mut at = 0;
    while at < order.len() {
        let (s, o) = order[at].clone();
        let mut per_label = Vec::with_capacity(a.alphabet.len());
        for label in 0..a.alphabet.len() {
            let mut tuple = Vec::with_capacity(a.arity);
            for d in 0..a.arity {
                let mut s_d: BTreeSet<usize> = BTreeSet::new();
                for &q in &s {
                    for &(dir, to) in a.obligations(q, label) {
                        if dir == d {
                            s_d.insert(to);
                        }
                    }
                }
                let mut o_d: BTreeSet<usize> = if o.is_empty() {
                    s_d.clone()
                } else {
                    let mut set = BTreeSet::new();
                    for &q in &o {
                        for &(dir, to) in a.obligations(q, label) {
                            if dir == d {
                                set.insert(to);
                            }
                        }
                    }
                    set
                };
                o_d.retain(|&q| !a.accepting[q]);
                let key: So = (s_d, o_d);
                let id = match ids.get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = order.len();
                        ids.insert(key.clone(), i);
                        order.push(key);
                        i
                    }
                };
                tuple.push(id);
            }
            per_label.push(tuple);
        }
        rows.push(per_label);
        at += 1;
    }

    let names: Vec<String> = order
        .iter()
        .map(|(s, o)| {
            format!(
                "S{{{}}}O{{{}}}",
                s.iter().map(|q| a.state_names[*q].clone()).collect::<Vec<_>>().join(","),
                o.iter().map(|q| a.state_names[*q].clone()).collect::<Vec<_>>().join(","),
            )
        })
        .collect();
    let mut out = Nbt::new(
        &format!("breakpoint({})", a.name),
        a.arity,
        a.alphabet.clone(),
        names,
        0,
    );
    for (i, per_label) in rows.into_iter().enumerate() {
        for (label, tuple) in per_label.into_iter().enumerate() {
            out.add_transition(i, label, tuple);
        }
    }
    for (i, (_, o)) in order.iter().enumerate() {
        if o.is_empty() {
            out.mark_accepting(i);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Product.
// ---------------------------------------------------------------------------

/// Büchi intersection of two NBTs over the same alphabet and arity, via the
/// usual two-phase acceptance flag.
pub fn nbt_product<L: Clone + Ord + Debug>(
    a: &Nbt<L>,
    b: &Nbt<L>,
) -> Result<Nbt<L>, TreeError> {
    if a.arity != b.arity {
        return Err(TreeError::ArityMismatch(a.arity, b.arity));
    }
    if a.alphabet != b.alphabet {
        return Err(TreeError::AlphabetMismatch);
    }
    type Key = (usize, usize, u8);
    let start: Key = (a.initial, b.initial, 0);
    let mut ids: BTreeMap<Key, usize> = BTreeMap::new();
    let mut order: Vec<Key> = Vec::new();
    ids.insert(start, 0);
    order.push(start);
    let mut transitions: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut at = 0;
    while at < order.len() {
        let (qa, qb, j) = order[at];
        let j_next = if j == 0 && a.accepting[qa] {
            1
        } else if j == 1 && b.accepting[qb] {
            0
        } else {
            j
        };
        for label in 0..a.alphabet.len() {
            let (Some(ta), Some(tb)) =
                (a.delta.get(&(qa, label)), b.delta.get(&(qb, label)))
            else {
                continue;
            };
            for va in ta {
                for vb in tb {
                    let mut tuple = Vec::with_capacity(a.arity);
                    for d in 0..a.arity {
                        let key: Key = (va[d], vb[d], j_next);
                        let id = match ids.get(&key) {
                            Some(&i) => i,
                            None => {
                                let i = order.len();
                                ids.insert(key, i);
                                order.push(key);
                                i
                            }
                        };
                        tuple.push(id);
                    }
                    transitions.push((at, label, tuple));
                }
            }
        }
        at += 1;
    }
    let names: Vec<String> = order
        .iter()
        .map(|&(qa, qb, j)| {
            format!("{}*{}@{}", a.state_names[qa], b.state_names[qb], j)
        })
        .collect();
    let mut out = Nbt::new(
        &format!("product({},{})", a.name, b.name),
        a.arity,
        a.alphabet.clone(),
        names,
        0,
    );
    for (q, label, tuple) in transitions {
        out.add_transition(q, label, tuple);
    }
    for (i, &(qa, _, j)) in order.iter().enumerate() {
        if j == 0 && a.accepting[qa] {
            out.mark_accepting(i);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Emptiness.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness<L> {
    Empty,
    NonEmpty(RegularTree<L>),
}

/// Decide emptiness of an NBT. A nonempty verdict always carries a regular
/// witness tree with at most one node per automaton state, and the witness
/// is re-checked by [`nbt_membership`] before being returned; a witness that
/// fails that check is an internal error, never a silent success.
pub fn nbt_emptiness<L: Clone + Ord + Debug>(
    a: &Nbt<L>,
) -> Result<Emptiness<L>, TreeError> {
    // Arena: state vertices are the automaton's (pick a label and tuple);
    // (label, tuple) vertices are the pathfinder's (pick a direction).
    let ns = a.state_count();
    let mut arena = GameArena::default();
    let mut target = Vec::new();
    for q in 0..ns {
        let v = arena.add_vertex(Player::Zero);
        debug_assert_eq!(v, q);
        target.push(a.accepting[q]);
    }
    let sink = arena.add_vertex(Player::Zero);
    target.push(false);
    arena.add_edge(sink, sink);
    // Remember each branch vertex's provenance for strategy decoding.
    let mut branch_info: Vec<(usize, usize, usize)> = Vec::new(); // (q, label, tuple idx)
    for (&(q, label), tuples) in &a.delta {
        for (ti, tuple) in tuples.iter().enumerate() {
            let b = arena.add_vertex(Player::One);
            target.push(false);
            branch_info.push((q, label, ti));
            arena.add_edge(q, b);
            for d in 0..a.arity {
                arena.add_edge(b, tuple[d]);
            }
        }
    }
    for q in 0..ns {
        if arena.succ[q].is_empty() {
            arena.add_edge(q, sink);
        }
    }
    let sol = buchi_win(&arena, &target);
    if !sol.win[a.initial] {
        return Ok(Emptiness::Empty);
    }

    // Decode the positional strategy into a regular tree over the winning
    // states reachable under it.
    let branch_base = ns + 1;
    let mut node_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    node_of.insert(a.initial, 0);
    order.push(a.initial);
    let mut labels: Vec<L> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut at = 0;
    while at < order.len() {
        let q = order[at];
        let choice = sol.strategy[q].ok_or_else(|| {
            TreeError::Internal(format!("winning state {q} lacks a strategy move"))
        })?;
        if choice == sink || choice < branch_base {
            return Err(TreeError::Internal(format!(
                "strategy at state {q} does not pick a transition"
            )));
        }
        let (q2, label, ti) = branch_info[choice - branch_base];
        debug_assert_eq!(q2, q);
        let tuple = &a.delta[&(q, label)][ti];
        labels.push(a.alphabet[label].clone());
        let mut row = Vec::with_capacity(a.arity);
        for d in 0..a.arity {
            let to = tuple[d];
            let id = match node_of.get(&to) {
                Some(&i) => i,
                None => {
                    let i = order.len();
                    node_of.insert(to, i);
                    order.push(to);
                    i
                }
            };
            row.push(id);
        }
        children.push(row);
        at += 1;
    }
    let tree = RegularTree::new(a.arity, labels, children, 0)?;
    match nbt_membership(a, &tree)? {
        true => Ok(Emptiness::NonEmpty(tree)),
        false => Err(TreeError::Internal(
            "extracted witness failed its membership certification".into(),
        )),
    }
}

/// Enumerate every regular tree with at most `max_nodes` node classes over
/// the given labels and arity (including presentations with unreachable
/// nodes). Intended for exhaustive checks on tiny parameters — the count
/// grows as (|labels| · n^arity)^n.
pub fn all_small_trees<L: Clone + Ord + Debug>(
    arity: usize,
    labels: &[L],
    max_nodes: usize,
) -> Vec<RegularTree<L>> {
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        // Mixed-radix counter: per node, a label choice and `arity` child
        // choices.
        let digits = n * (1 + arity);
        let radix = |d: usize| -> usize {
            if d % (1 + arity) == 0 {
                labels.len()
            } else {
                n
            }
        };
        let mut counter = vec![0usize; digits];
        loop {
            let mut lbls = Vec::with_capacity(n);
            let mut kids = Vec::with_capacity(n);
            for i in 0..n {
                let base = i * (1 + arity);
                lbls.push(labels[counter[base]].clone());
                kids.push(counter[base + 1..base + 1 + arity].to_vec());
            }
            out.push(
                RegularTree::new(arity, lbls, kids, 0).expect("enumerated tree is well formed"),
            );
            // Increment.
            let mut d = 0;
            loop {
                if d == digits {
                    break;
                }
                counter[d] += 1;
                if counter[d] < radix(d) {
                    break;
                }
                counter[d] = 0;
                d += 1;
            }
            if d == digits {
                break;
            }
        }
    }
    out
}
