//! Deciding modular-strategy existence in recursive two-player games.
//!
//! This crate models games played on recursive graphs — modules that invoke
//! one another through boxes, with vertices split between a protagonist
//! (player 0) and an antagonist (player 1) — together with ω-word
//! specifications given as finite-state or visibly pushdown automata. Its
//! centerpiece answers: does player 0 have a *modular* winning strategy, one
//! local finite-memory strategy per module that observes only the current
//! activation's local history? On a positive answer it extracts such a
//! strategy and certifies it against an independent checker.
//!
//! Module map:
//! - [`alphabet`]: atomic propositions, label sets, tagged symbols.
//! - [`game`]: recursive game graphs, play semantics, modular strategies.
//! - [`word`]: Büchi/co-Büchi word automata and visibly pushdown automata.
//! - [`tree`]: regular trees, Büchi tree automata, games, emptiness.
//! - [`pathltl`]: the nested-eventually temporal fragment and its compiler.
//! - [`reduction`]: rewriting pushdown-spec games into finite-spec games.
//! - [`solver`]: the strategy-tree automata pipeline and the main decision
//!   procedure.
//! - [`oracle`]: independent brute-force checking and enumeration.
//! - [`format`]: text formats for games, automata, and strategies.
//! - [`generate`]: fixtures and seeded random families for tests.

pub mod alphabet;
pub mod game;
pub mod generate;
pub(crate) mod graph;
pub mod tree;
pub mod word;

pub use alphabet::{ApId, ApTable, LabelSet, Tag, TaggedSymbol, TaggedWord};
pub use game::{Game, GameError, GameModule, ModularStrategy, Player, Vertex};
pub use tree::{
    all_small_trees, buchi_win, buchi_win_naive, nbt_emptiness, nbt_membership,
    nbt_product, ubt_membership, ubt_to_nbt, BuchiSolution, Emptiness, GameArena,
    Nbt, RegularTree, TreeError, Ubt,
};
pub use word::{
    accepts_lasso, product_det, run_prefix, vpa_step, Acceptance, Branching,
    BuchiWordAutomaton, Guard, StackSym, TagGuard, Vpa, VpaConfig, WordError,
};
