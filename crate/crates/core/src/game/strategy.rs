//! Modular strategies: one finite-memory local strategy per module. A local
//! strategy is a Mealy machine over the module's vertices: it observes the
//! local-memory chain of the current activation (starting with the entry),
//! outputs a successor choice at protagonist-owned vertices, and updates its
//! memory as each observation is consumed.
//!
//! Convention: at a vertex `v` with memory `mem` (the state reached after
//! consuming every earlier chain element), the move is `moves[(mem, v)]`; when
//! the play leaves `v`, the memory becomes `update[(mem, v)]`. Missing
//! `update` entries mean "stay"; a missing `moves` entry at a reachable
//! protagonist vertex makes the strategy ill-formed there (walkers treat it
//! as non-conforming).

use std::collections::BTreeMap;

use super::{Game, ModuleId, Play, Player, Vertex};

pub type MemId = usize;

/// The per-module Mealy machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalStrategy {
    pub memory_count: usize,
    pub initial: MemId,
    /// Memory transition on consuming an observed vertex; absent = stay.
    pub update: BTreeMap<(MemId, Vertex), MemId>,
    /// Successor-index outputs at protagonist vertices.
    pub moves: BTreeMap<(MemId, Vertex), usize>,
}

impl LocalStrategy {
    /// Single-memory strategy from a plain vertex → successor-index map.
    pub fn memoryless(moves: BTreeMap<Vertex, usize>) -> LocalStrategy {
        LocalStrategy {
            memory_count: 1,
            initial: 0,
            update: BTreeMap::new(),
            moves: moves.into_iter().map(|(v, i)| ((0, v), i)).collect(),
        }
    }

    pub fn next_mem(&self, mem: MemId, v: Vertex) -> MemId {
        self.update.get(&(mem, v)).copied().unwrap_or(mem)
    }

    pub fn move_at(&self, mem: MemId, v: Vertex) -> Option<usize> {
        self.moves.get(&(mem, v)).copied()
    }
}

/// A strategy for the whole game: one local strategy per module, indexed by
/// `ModuleId`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularStrategy {
    pub locals: Vec<LocalStrategy>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("strategy has {got} local machines but the game has {want} modules")]
    ModuleCountMismatch { got: usize, want: usize },
    #[error("module `{module}`: move index {index} out of range at `{vertex}`")]
    MoveOutOfRange { module: String, vertex: String, index: usize },
    #[error("module `{module}`: memory id {mem} out of range")]
    MemOutOfRange { module: String, mem: usize },
}

impl ModularStrategy {
    pub fn local(&self, m: ModuleId) -> &LocalStrategy {
        &self.locals[m]
    }

    /// Static sanity checks: counts line up, indices are in range.
    pub fn well_formed(&self, g: &Game) -> Result<(), StrategyError> {
        if self.locals.len() != g.modules.len() {
            return Err(StrategyError::ModuleCountMismatch {
                got: self.locals.len(),
                want: g.modules.len(),
            });
        }
        for (mi, ls) in self.locals.iter().enumerate() {
            let md = &g.modules[mi];
            if ls.initial >= ls.memory_count {
                return Err(StrategyError::MemOutOfRange { module: md.name.clone(), mem: ls.initial });
            }
            for (&(mem, v), &idx) in &ls.moves {
                if mem >= ls.memory_count {
                    return Err(StrategyError::MemOutOfRange { module: md.name.clone(), mem });
                }
                let deg = md.successors(v).len();
                if idx >= deg {
                    return Err(StrategyError::MoveOutOfRange {
                        module: md.name.clone(),
                        vertex: md.display_vertex(v),
                        index: idx,
                    });
                }
            }
            for (&(mem, _), &to) in &ls.update {
                if mem >= ls.memory_count || to >= ls.memory_count {
                    return Err(StrategyError::MemOutOfRange {
                        module: md.name.clone(),
                        mem: mem.max(to),
                    });
                }
            }
        }
        Ok(())
    }
}

/// One activation frame while walking a play against a strategy: the module,
/// the memory state *before* consuming the current chain element, and that
/// current (not yet consumed) chain element.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Frame {
    module: ModuleId,
    mem: MemId,
    cur: Vertex,
}

/// Does the play conform to the strategy? True iff at every position owned by
/// player 0 the move actually taken equals the strategy's chosen successor
/// (by vertex identity). Calls, exits and antagonist vertices are
/// unconstrained.
pub fn conforms(g: &Game, play: &Play, f: &ModularStrategy) -> bool {
    if f.locals.len() != g.modules.len() {
        return false;
    }
    let mut frames = vec![Frame {
        module: g.main,
        mem: f.local(g.main).initial,
        cur: Vertex::Node(g.modules[g.main].entry),
    }];
    for win in play.states().windows(2) {
        let (prev, next) = (&win[0], &win[1]);
        let md = &g.modules[prev.module];
        match prev.vertex {
            Vertex::Call(_) => {
                let callee = next.module;
                frames.push(Frame {
                    module: callee,
                    mem: f.local(callee).initial,
                    cur: next.vertex,
                });
            }
            Vertex::Node(n) if md.exit_index(n).is_some() => {
                frames.pop();
                let fr = frames.last_mut().expect("caller frame present");
                let ls = f.local(fr.module);
                fr.mem = ls.next_mem(fr.mem, fr.cur);
                fr.cur = next.vertex;
            }
            v => {
                let fr = frames.last_mut().expect("nonempty");
                debug_assert_eq!(fr.cur, v);
                if md.player.get(&v) == Some(&Player::Zero) {
                    let ls = f.local(fr.module);
                    match ls.move_at(fr.mem, v) {
                        Some(idx) => {
                            let succs = md.successors(v);
                            if idx >= succs.len() || succs[idx] != next.vertex {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
                let ls = f.local(fr.module);
                fr.mem = ls.next_mem(fr.mem, fr.cur);
                fr.cur = next.vertex;
            }
        }
    }
    true
}

/// Chain-successor vertices of `v` inside module `m`: where the *local* view
/// of a play can go next. Protagonist vertices follow only the strategy's
/// chosen successor; antagonist vertices follow all; calls jump to each of
/// their return vertices; exits end the chain.
fn chain_successors(
    g: &Game,
    m: ModuleId,
    v: Vertex,
    mem: MemId,
    ls: &LocalStrategy,
) -> Vec<Vertex> {
    let md = &g.modules[m];
    match v {
        Vertex::Call(b) => {
            let callee = md.boxes[b].callee;
            (0..g.modules[callee].exits.len()).map(|h| Vertex::Ret(b, h)).collect()
        }
        Vertex::Node(n) if md.exit_index(n).is_some() => Vec::new(),
        _ => {
            let succs = md.successors(v);
            if md.player.get(&v) == Some(&Player::Zero) {
                match ls.move_at(mem, v) {
                    Some(i) if i < succs.len() => vec![succs[i]],
                    _ => Vec::new(),
                }
            } else {
                succs.to_vec()
            }
        }
    }
}

/// Canonical, minimized representation of a local strategy's observable
/// behavior inside its module. Two local strategies are behaviorally
/// equivalent iff their canonical forms are equal. Node 0 is the initial
/// observation (the module entry).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalBehavior {
    pub nodes: Vec<CanonNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonNode {
    pub vertex: Vertex,
    /// Chosen successor index if the vertex is protagonist-owned (None when
    /// missing or not owned).
    pub output: Option<usize>,
    /// Canonical ids of the chain-successor observations, in chain order.
    pub children: Vec<usize>,
}

/// Compute the canonical behavior of `f`'s local strategy for module `m`:
/// unfold the reachable (memory, vertex) observation graph, minimize it by
/// partition refinement, and number the quotient breadth-first.
pub fn canonical_behavior(g: &Game, f: &ModularStrategy, m: ModuleId) -> CanonicalBehavior {
    let ls = f.local(m);
    let md = &g.modules[m];
    let entry = Vertex::Node(md.entry);

    // Reachable pair graph.
    let mut ids: BTreeMap<(MemId, Vertex), usize> = BTreeMap::new();
    let mut verts: Vec<Vertex> = Vec::new();
    let mut outs: Vec<Option<usize>> = Vec::new();
    let mut kids: Vec<Vec<usize>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let start = (ls.initial, entry);
    ids.insert(start, 0);
    queue.push_back(start);
    while let Some((mem, v)) = queue.pop_front() {
        let my_id = ids[&(mem, v)];
        while verts.len() <= my_id {
            verts.push(v);
            outs.push(None);
            kids.push(Vec::new());
        }
        verts[my_id] = v;
        outs[my_id] = if md.player.get(&v) == Some(&Player::Zero) {
            ls.move_at(mem, v)
        } else {
            None
        };
        let next_mem = ls.next_mem(mem, v);
        let mut cs = Vec::new();
        for u in chain_successors(g, m, v, mem, ls) {
            let key = (next_mem, u);
            let next_id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = ids.len();
                    ids.insert(key, id);
                    queue.push_back(key);
                    id
                }
            };
            cs.push(next_id);
        }
        kids[my_id] = cs;
    }
    // Ensure vectors are sized even if discovery order raced ahead.
    let n = ids.len();
    while verts.len() < n {
        verts.push(entry);
        outs.push(None);
        kids.push(Vec::new());
    }

    // Partition refinement: initial classes by (vertex, output, arity);
    // refine on children classes until stable.
    let mut class: Vec<usize> = {
        let mut table: BTreeMap<(Vertex, Option<usize>, usize), usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let s = (verts[i], outs[i], kids[i].len());
            let next = table.len();
            out.push(*table.entry(s).or_insert(next));
        }
        out
    };
    loop {
        let mut table: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next_class = Vec::with_capacity(n);
        for i in 0..n {
            let s = (class[i], kids[i].iter().map(|&k| class[k]).collect::<Vec<_>>());
            let fresh = table.len();
            next_class.push(*table.entry(s).or_insert(fresh));
        }
        if next_class == class {
            break;
        }
        class = next_class;
    }

    // Quotient + BFS canonical numbering from the initial node's class.
    let mut canon_of_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rep_of_canon: Vec<usize> = Vec::new();
    let mut order = std::collections::VecDeque::new();
    canon_of_class.insert(class[0], 0);
    rep_of_canon.push(0);
    order.push_back(0usize);
    let mut nodes: Vec<CanonNode> = Vec::new();
    while let Some(ci) = order.pop_front() {
        let rep = rep_of_canon[ci];
        let mut children = Vec::new();
        for &k in &kids[rep] {
            let kc = class[k];
            let id = match canon_of_class.get(&kc) {
                Some(&id) => id,
                None => {
                    let id = rep_of_canon.len();
                    canon_of_class.insert(kc, id);
                    rep_of_canon.push(k);
                    order.push_back(id);
                    id
                }
            };
            children.push(id);
        }
        while nodes.len() <= ci {
            nodes.push(CanonNode { vertex: verts[rep], output: None, children: Vec::new() });
        }
        nodes[ci] = CanonNode { vertex: verts[rep], output: outs[rep], children };
    }
    CanonicalBehavior { nodes }
}

/// Canonical form of the whole modular strategy (one entry per module).
pub fn canonical_strategy(g: &Game, f: &ModularStrategy) -> Vec<CanonicalBehavior> {
    (0..g.modules.len()).map(|m| canonical_behavior(g, f, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::play::Play;
    use crate::generate::call_and_respond;

    /// The alternating strategy: first reply with the first option, then the
    /// second, and so on, flipping on every consumed return observation.
    pub fn alternating(g: &Game) -> ModularStrategy {
        let main = g.module_by_name("main").unwrap();
        let responder = g.module_by_name("responder").unwrap();
        let ret = Vertex::Ret(0, 0);
        let e_in = Vertex::Node(0);
        let u2 = Vertex::Node(2);
        let mut moves = BTreeMap::new();
        moves.insert((0usize, ret), 0usize);
        moves.insert((1usize, ret), 1usize);
        moves.insert((0usize, e_in), 0usize);
        moves.insert((1usize, e_in), 0usize);
        moves.insert((0usize, u2), 0usize);
        moves.insert((1usize, u2), 0usize);
        let mut update = BTreeMap::new();
        update.insert((0usize, ret), 1usize);
        update.insert((1usize, ret), 0usize);
        let main_ls = LocalStrategy { memory_count: 2, initial: 0, update, moves };

        let mut rmoves = BTreeMap::new();
        rmoves.insert(Vertex::Node(1), 0usize); // the pa vertex has one successor
        let resp_ls = LocalStrategy::memoryless(rmoves);

        let mut locals = vec![resp_ls.clone(), resp_ls];
        locals[main] = main_ls;
        let _ = responder;
        let f = ModularStrategy { locals };
        assert!(f.well_formed(g).is_ok());
        f
    }

    /// Choices for one full round of the fixture: reach the responder, let it
    /// pick its first branch, return, and reply with successor index `reply`.
    fn round(reply: usize) -> [usize; 6] {
        // e_in/u -> call, call -> e1, e1 -> u3, u3 -> ex1, ex1 -> ret, ret -> u{1,2}
        [0, 0, 0, 0, 0, reply]
    }

    #[test]
    fn alternating_strategy_accepts_alternation() {
        let g = call_and_respond();
        let f = alternating(&g);
        let mut choices = Vec::new();
        choices.extend_from_slice(&round(0));
        choices.extend_from_slice(&round(1));
        choices.extend_from_slice(&round(0));
        // After the last reply vertex the play moves back to the call.
        let play = Play::from_choices(&g, &choices).expect("legal");
        assert!(conforms(&g, &play, &f));
    }

    #[test]
    fn alternating_strategy_rejects_repeat() {
        let g = call_and_respond();
        let f = alternating(&g);
        let mut choices = Vec::new();
        choices.extend_from_slice(&round(0));
        choices.extend_from_slice(&round(0)); // repeat the first reply: breaks alternation
        let play = Play::from_choices(&g, &choices).expect("legal");
        assert!(!conforms(&g, &play, &f));
    }

    #[test]
    fn vacuous_conformance_without_protagonist_vertices() {
        use crate::game::{GameBuilder, Player};
        let mut gb = GameBuilder::new("p1only");
        {
            let m = gb.module("main");
            m.node("a", Player::One, &[]);
            m.entry("a");
            m.node("b", Player::One, &[]);
            m.edge("a", "b");
            m.edge("b", "a");
        }
        gb.main("main");
        let g = gb.finish().unwrap();
        let f = ModularStrategy { locals: vec![LocalStrategy::memoryless(BTreeMap::new())] };
        let play = Play::from_choices(&g, &[0, 0, 0]).unwrap();
        assert!(conforms(&g, &play, &f));
    }

    #[test]
    fn canonical_form_identifies_equivalent_machines() {
        let g = call_and_respond();
        let f1 = alternating(&g);
        // Same behavior with redundant extra memory state that is never
        // reached: canonical forms must coincide.
        let mut f2 = f1.clone();
        let main = g.module_by_name("main").unwrap();
        f2.locals[main].memory_count = 3;
        assert_eq!(canonical_strategy(&g, &f1), canonical_strategy(&g, &f2));
        // A genuinely different strategy (always first reply) differs.
        let mut always = f1.clone();
        always.locals[main].update.clear();
        assert_ne!(canonical_strategy(&g, &f1), canonical_strategy(&g, &always));
    }
}
