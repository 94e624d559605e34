//! Play semantics: global states with a call stack, the three move rules
//! (internal, call, return), play prefixes, the local-memory view, and the
//! tagged word a play spells out.

use crate::alphabet::{TaggedSymbol, TaggedWord};

use super::{BoxId, Game, ModuleId, Vertex};

/// A global state: the call stack (pairs of owning module and box, outermost
/// first) plus the current module and vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GameState {
    pub stack: Vec<(ModuleId, BoxId)>,
    pub module: ModuleId,
    pub vertex: Vertex,
}

impl GameState {
    /// The initial state: empty stack at the main module's entry.
    pub fn initial(g: &Game) -> GameState {
        GameState {
            stack: Vec::new(),
            module: g.main,
            vertex: Vertex::Node(g.modules[g.main].entry),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    /// The current vertex has no outgoing move: an exit of main, or an
    /// internal vertex with an empty successor list. The play ends here and
    /// player 0 loses it.
    #[error("dead end: no move from the current vertex")]
    DeadEnd,
    /// The successor choice index is out of range for the current vertex.
    #[error("choice {got} out of range (vertex has {available} moves)")]
    BadChoice { got: usize, available: usize },
}

/// Perform one move. `choice` selects among the successor list for internal
/// vertices and returns; calls and exits have exactly one outcome and require
/// `choice == 0`.
pub fn step(g: &Game, s: &GameState, choice: usize) -> Result<GameState, StepError> {
    let md = &g.modules[s.module];
    match s.vertex {
        // Call: push the box, descend to the callee entry.
        Vertex::Call(b) => {
            if choice != 0 {
                return Err(StepError::BadChoice { got: choice, available: 1 });
            }
            let callee = md.boxes[b].callee;
            let mut stack = s.stack.clone();
            stack.push((s.module, b));
            Ok(GameState {
                stack,
                module: callee,
                vertex: Vertex::Node(g.modules[callee].entry),
            })
        }
        // Exit: pop the box, resume at the matching return vertex.
        Vertex::Node(n) if md.exit_index(n).is_some() => {
            if s.stack.is_empty() {
                return Err(StepError::DeadEnd);
            }
            if choice != 0 {
                return Err(StepError::BadChoice { got: choice, available: 1 });
            }
            let h = md.exit_index(n).expect("checked above");
            let mut stack = s.stack.clone();
            let (pm, pb) = stack.pop().expect("nonempty");
            Ok(GameState { stack, module: pm, vertex: Vertex::Ret(pb, h) })
        }
        // Internal vertex or return: follow the chosen successor.
        v => {
            let succs = md.successors(v);
            if succs.is_empty() {
                return Err(StepError::DeadEnd);
            }
            if choice >= succs.len() {
                return Err(StepError::BadChoice { got: choice, available: succs.len() });
            }
            Ok(GameState { stack: s.stack.clone(), module: s.module, vertex: succs[choice] })
        }
    }
}

/// A play prefix: the sequence of states from the initial one.
#[derive(Debug, Clone)]
pub struct Play {
    states: Vec<GameState>,
}

impl Play {
    pub fn new(g: &Game) -> Play {
        Play { states: vec![GameState::initial(g)] }
    }

    pub fn states(&self) -> &[GameState] {
        &self.states
    }

    pub fn last(&self) -> &GameState {
        self.states.last().expect("never empty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Extend by one move; on success the new state is appended.
    pub fn step(&mut self, g: &Game, choice: usize) -> Result<(), StepError> {
        let next = step(g, self.last(), choice)?;
        self.states.push(next);
        Ok(())
    }

    /// Rebuild a play from successor choices, failing on any illegal one.
    pub fn from_choices(g: &Game, choices: &[usize]) -> Result<Play, StepError> {
        let mut p = Play::new(g);
        for &c in choices {
            p.step(g, c)?;
        }
        Ok(p)
    }
}

/// The local memory of a play prefix: the module of the current activation
/// and the maximal chain of same-activation vertices ending at the current
/// position. Matched call/return excursions collapse to a call → return step;
/// entering a callee starts a fresh chain at its entry.
pub fn local_memory(g: &Game, play: &Play) -> (ModuleId, Vec<Vertex>) {
    let mut chains: Vec<(ModuleId, Vec<Vertex>)> =
        vec![(g.main, vec![Vertex::Node(g.modules[g.main].entry)])];
    for win in play.states.windows(2) {
        let (prev, next) = (&win[0], &win[1]);
        match prev.vertex {
            Vertex::Call(_) => {
                // Descend: new activation chain starting at the callee entry.
                chains.push((next.module, vec![next.vertex]));
            }
            Vertex::Node(n) if g.modules[prev.module].exit_index(n).is_some() => {
                // Return: the callee chain ends; the caller chain gains the
                // return vertex.
                chains.pop();
                chains
                    .last_mut()
                    .expect("stack discipline: caller chain present")
                    .1
                    .push(next.vertex);
            }
            _ => {
                chains.last_mut().expect("nonempty").1.push(next.vertex);
            }
        }
    }
    chains.pop().expect("nonempty")
}

/// The tagged word a play prefix spells: position `i` carries the label of
/// the `i`-th vertex and a tag determined by its class (call vertices are
/// `call`, return vertices are `ret`, nodes — exits included — are `int`).
pub fn tagged_word(g: &Game, play: &Play) -> TaggedWord {
    play.states
        .iter()
        .map(|s| TaggedSymbol::new(g.modules[s.module].label(s.vertex), s.vertex.tag()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameBuilder, Player, SketchVertex};

    /// Two modules: main loops `start -> call -> ret -> reply -> call`; the
    /// callee forks to one of two labeled vertices before its exit.
    fn two_module_game() -> Game {
        let mut gb = GameBuilder::new("t");
        gb.aps(&["pa", "pb", "pc"]);
        {
            let m = gb.module("main");
            m.node("start", Player::Zero, &[]);
            m.entry("start");
            m.boxx("b", "sub", &[]);
            m.ret_info("end", &[], Player::Zero);
            m.node("reply", Player::Zero, &["pc"]);
            m.edge("start", SketchVertex::call("b"));
            m.edge(SketchVertex::ret("b", "end"), "reply");
            m.edge("reply", SketchVertex::call("b"));
        }
        {
            let m = gb.module("sub");
            m.node("in", Player::One, &[]);
            m.entry("in");
            m.node("a", Player::Zero, &["pa"]);
            m.node("bb", Player::Zero, &["pb"]);
            m.exit("end", &[]);
            m.edge("in", "a");
            m.edge("in", "bb");
            m.edge("a", "end");
            m.edge("bb", "end");
        }
        gb.main("main");
        gb.finish().expect("builds")
    }

    #[test]
    fn call_and_return_walk() {
        let g = two_module_game();
        // start -> call -> in -> a -> end(exit) -> ret -> reply
        let p = Play::from_choices(&g, &[0, 0, 0, 0, 0, 0]).expect("legal");
        let vs: Vec<String> = p
            .states()
            .iter()
            .map(|s| g.display_vertex(s.module, s.vertex))
            .collect();
        assert_eq!(
            vs,
            vec!["start", "call b", "in", "a", "end", "ret b #0", "reply"],
        );
        assert_eq!(p.states()[2].stack.len(), 1);
        assert_eq!(p.last().stack.len(), 0);
    }

    #[test]
    fn local_memory_collapses_inner_segment() {
        let g = two_module_game();
        let p = Play::from_choices(&g, &[0, 0, 0, 0, 0]).expect("legal");
        // At the return vertex: the inner excursion collapsed away.
        let (m, chain) = local_memory(&g, &p);
        assert_eq!(m, 0);
        let names: Vec<String> = chain.iter().map(|&v| g.display_vertex(0, v)).collect();
        assert_eq!(names, vec!["start", "call b", "ret b #0"]);
    }

    #[test]
    fn local_memory_inside_callee() {
        let g = two_module_game();
        // Position the play at the callee's exit.
        let p = Play::from_choices(&g, &[0, 0, 1, 0]).expect("legal");
        let (m, chain) = local_memory(&g, &p);
        assert_eq!(m, 1);
        let names: Vec<String> = chain.iter().map(|&v| g.display_vertex(1, v)).collect();
        assert_eq!(names, vec!["in", "bb", "end"]);
    }

    #[test]
    fn tagged_word_tags_by_class() {
        let g = two_module_game();
        let p = Play::from_choices(&g, &[0, 0, 0, 0, 0]).expect("legal");
        let w = tagged_word(&g, &p);
        use crate::alphabet::Tag::*;
        let tags: Vec<_> = w.iter().map(|s| s.tag).collect();
        // start, call, in, a, end(exit: int), ret
        assert_eq!(tags, vec![Internal, Call, Internal, Internal, Internal, Return]);
        let pa = g.ap.lookup("pa").unwrap();
        assert!(w[3].label.contains(pa));
    }

    #[test]
    fn main_exit_is_dead_end() {
        let mut gb = GameBuilder::new("d");
        {
            let m = gb.module("main");
            m.node("s", Player::Zero, &[]);
            m.entry("s");
            m.exit("x", &[]);
            m.edge("s", "x");
        }
        gb.main("main");
        let g = gb.finish().unwrap();
        let mut p = Play::new(&g);
        p.step(&g, 0).unwrap();
        assert_eq!(p.step(&g, 0), Err(StepError::DeadEnd));
    }
}
