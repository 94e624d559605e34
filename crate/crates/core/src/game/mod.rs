//! Recursive game graphs: a finite set of modules whose vertices are shared
//! between two players, where special *box* placeholders invoke other modules
//! like procedure calls.
//!
//! A module owns plain nodes (among them one entry and an ordered list of
//! exits) and boxes. Each box determines two kinds of derived vertices: a
//! *call* vertex (the box paired with the callee's entry) and one *return*
//! vertex per callee exit. Transitions go from internal nodes and returns to
//! nodes or calls of the same module; calls and exits have no explicit
//! transitions because their behaviour (descend into the callee, resp. pop
//! back to the matching return) is fixed by the play rules in [`play`].

use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::{ApTable, LabelSet, Tag};

mod build;
mod play;
mod strategy;
mod validate;

pub use build::{GameBuilder, ModuleSketch, SketchVertex};
pub use play::{local_memory, step, tagged_word, Play, StepError};
pub use strategy::{
    canonical_behavior, canonical_strategy, conforms, CanonNode, CanonicalBehavior, LocalStrategy,
    MemId, ModularStrategy, StrategyError,
};
pub use validate::{is_well_formed, validate, Severity, Violation, ViolationRule};

/// Index of a module within [`Game::modules`].
pub type ModuleId = usize;
/// Index of a node within its module's `node_names`.
pub type NodeId = usize;
/// Index of a box within its module's `boxes`.
pub type BoxId = usize;

/// Which of the two players controls a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    /// The protagonist: tries to make every play satisfy the specification.
    Zero,
    /// The antagonist.
    One,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }
}

/// A vertex of a module: a plain node, a call of a box, or a return of a box.
///
/// `Ret(b, h)` refers to the `h`-th exit (in declaration order) of the module
/// invoked by box `b`. Using the exit *index* keeps the identity local: it does
/// not depend on the callee's node numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Node(NodeId),
    Call(BoxId),
    Ret(BoxId, usize),
}

impl Vertex {
    /// Structural tag of the vertex class, used to build tagged words: call
    /// vertices are `call`, return vertices are `ret`, everything else
    /// (including exits) is `int`.
    pub fn tag(self) -> Tag {
        match self {
            Vertex::Node(_) => Tag::Internal,
            Vertex::Call(_) => Tag::Call,
            Vertex::Ret(_, _) => Tag::Return,
        }
    }
}

/// A box declaration: a named placeholder that invokes another module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxDecl {
    pub name: String,
    pub callee: ModuleId,
}

/// One component graph of a recursive game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameModule {
    pub name: String,
    /// Names of the plain nodes; `NodeId` indexes into this list.
    pub node_names: Vec<String>,
    pub entry: NodeId,
    /// Ordered exits; the order fixes return-vertex indices and the order of
    /// return children in tree encodings.
    pub exits: Vec<NodeId>,
    pub boxes: Vec<BoxDecl>,
    /// Ordered successor lists for internal nodes and returns. The order is
    /// the declaration order of the edges and is what choice indices refer to.
    pub transitions: BTreeMap<Vertex, Vec<Vertex>>,
    /// Atomic-proposition labels, defined for every vertex (defaulting to the
    /// empty set).
    pub labels: BTreeMap<Vertex, LabelSet>,
    /// Ownership for exactly the internal nodes and returns that are not
    /// exits. Calls and exits belong to neither player: their moves are
    /// forced.
    pub player: BTreeMap<Vertex, Player>,
}

impl GameModule {
    pub fn is_exit(&self, v: Vertex) -> bool {
        matches!(v, Vertex::Node(n) if self.exits.contains(&n))
    }

    /// Position of `node` in the exit list, if it is an exit.
    pub fn exit_index(&self, node: NodeId) -> Option<usize> {
        self.exits.iter().position(|&x| x == node)
    }

    pub fn label(&self, v: Vertex) -> LabelSet {
        self.labels.get(&v).copied().unwrap_or(LabelSet::empty())
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        self.transitions.get(&v).map(|s| s.as_slice()).unwrap_or(&[])
    }

    /// All vertices of the module in a fixed order: nodes, then per box its
    /// call and returns.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..self.node_names.len()).map(Vertex::Node).collect();
        for (b, _) in self.boxes.iter().enumerate() {
            out.push(Vertex::Call(b));
        }
        out.extend(self.ret_vertices());
        out
    }

    /// Return vertices only; needs the game to know each callee's exit count,
    /// so this lists the pairs stored in `labels`/`player` maps plus all
    /// indices seen in transitions. Prefer [`Game::ret_vertices_of`] when a
    /// game is at hand.
    fn ret_vertices(&self) -> Vec<Vertex> {
        let mut rets: Vec<Vertex> = self
            .labels
            .keys()
            .chain(self.player.keys())
            .chain(self.transitions.keys())
            .copied()
            .filter(|v| matches!(v, Vertex::Ret(_, _)))
            .collect();
        rets.sort();
        rets.dedup();
        rets
    }

    pub fn display_vertex(&self, v: Vertex) -> String {
        match v {
            Vertex::Node(n) => self.node_names[n].clone(),
            Vertex::Call(b) => format!("call {}", self.boxes[b].name),
            Vertex::Ret(b, h) => format!("ret {} #{}", self.boxes[b].name, h),
        }
    }
}

/// A recursive game graph: modules, a designated main module, and the
/// proposition table labels draw from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub name: String,
    pub modules: Vec<GameModule>,
    pub main: ModuleId,
    pub ap: ApTable,
}

impl Game {
    pub fn module(&self, m: ModuleId) -> &GameModule {
        &self.modules[m]
    }

    pub fn module_by_name(&self, name: &str) -> Option<ModuleId> {
        self.modules.iter().position(|m| m.name == name)
    }

    /// The module a box of module `m` invokes.
    pub fn callee(&self, m: ModuleId, b: BoxId) -> ModuleId {
        self.modules[m].boxes[b].callee
    }

    /// All vertices of module `m`: nodes, then per box its call followed by
    /// one return per callee exit, in exit order.
    pub fn vertices_of(&self, m: ModuleId) -> Vec<Vertex> {
        let md = &self.modules[m];
        let mut out: Vec<Vertex> = (0..md.node_names.len()).map(Vertex::Node).collect();
        for (b, decl) in md.boxes.iter().enumerate() {
            out.push(Vertex::Call(b));
            for h in 0..self.modules[decl.callee].exits.len() {
                out.push(Vertex::Ret(b, h));
            }
        }
        out
    }

    /// The return vertices of module `m`, derived from callee exit counts.
    pub fn ret_vertices_of(&self, m: ModuleId) -> Vec<Vertex> {
        let md = &self.modules[m];
        let mut out = Vec::new();
        for (b, decl) in md.boxes.iter().enumerate() {
            for h in 0..self.modules[decl.callee].exits.len() {
                out.push(Vertex::Ret(b, h));
            }
        }
        out
    }

    /// Owner of a vertex, if it has one (exits and calls do not).
    pub fn owner(&self, m: ModuleId, v: Vertex) -> Option<Player> {
        self.modules[m].player.get(&v).copied()
    }

    /// Tree arity used by strategy encodings: the maximum over all vertex
    /// out-degrees, all module exit counts, and the number of modules (the
    /// root of a strategy tree has one child per module), and at least 1.
    pub fn arity(&self) -> usize {
        let mut k = 1;
        k = k.max(self.modules.len());
        for md in &self.modules {
            k = k.max(md.exits.len());
            for succs in md.transitions.values() {
                k = k.max(succs.len());
            }
        }
        k
    }

    /// Distinct caller/callee module pairs realized by some box.
    pub fn call_edges(&self) -> Vec<(ModuleId, ModuleId)> {
        let mut out: Vec<(ModuleId, ModuleId)> = self
            .modules
            .iter()
            .enumerate()
            .flat_map(|(m, md)| md.boxes.iter().map(move |b| (m, b.callee)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// A size measure counting vertices, edges, and boxes; used for the
    /// logged size-bound telemetry.
    pub fn size_estimate(&self) -> usize {
        let mut n = 0;
        for (m, md) in self.modules.iter().enumerate() {
            n += self.vertices_of(m).len();
            n += md.transitions.values().map(|s| s.len()).sum::<usize>();
            n += md.boxes.len();
        }
        n
    }

    /// Successors of a vertex in module `m` (empty for calls and exits).
    pub fn successors(&self, m: ModuleId, v: Vertex) -> &[Vertex] {
        self.modules[m].successors(v)
    }

    pub fn display_vertex(&self, m: ModuleId, v: Vertex) -> String {
        self.modules[m].display_vertex(v)
    }
}

/// Errors raised while assembling a game from a sketch or file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("duplicate module name `{0}`")]
    DuplicateModule(String),
    #[error("module `{module}`: duplicate node name `{node}`")]
    DuplicateNode { module: String, node: String },
    #[error("module `{module}`: duplicate box name `{name}`")]
    DuplicateBox { module: String, name: String },
    #[error("module `{module}`: unknown node `{node}`")]
    UnknownNode { module: String, node: String },
    #[error("module `{module}`: unknown box `{name}`")]
    UnknownBox { module: String, name: String },
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("module `{module}`: box `{name}` targets module `{callee}` which has no exit `{exit}`")]
    UnknownExit {
        module: String,
        name: String,
        callee: String,
        exit: String,
    },
    #[error("module `{0}` declares no entry")]
    NoEntry(String),
    #[error("no module is marked main")]
    NoMain,
    #[error("more than one module is marked main")]
    MultipleMain,
    #[error("module `{module}`: box `{name}` invokes the main module")]
    BoxCallsMain { module: String, name: String },
    #[error("module `{module}`: node `{node}` is declared both exit and given a player")]
    PlayerOnExit { module: String, node: String },
    #[error(transparent)]
    Alphabet(#[from] crate::alphabet::AlphabetError),
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "game {} ({} modules)", self.name, self.modules.len())
    }
}
