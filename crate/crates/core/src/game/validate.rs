//! Structural well-formedness checks. Violations are reports, not failures:
//! callers decide what to do with them. `Error`-severity reports mark rule
//! breaches; `Warning` reports mark tolerated oddities (dead ends).

use super::{Game, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationRule {
    /// A transition targets a module's entry.
    TransitionToEntry,
    /// A transition leaves an exit.
    TransitionFromExit,
    /// A transition leaves a call vertex (calls move by the call rule only).
    TransitionFromCall,
    /// A return's successor is a call vertex.
    CallAfterReturn,
    /// A transition target is a return vertex (returns are reached by the
    /// return rule only).
    TransitionToReturn,
    /// The player map misses a vertex it must cover.
    MissingPlayer,
    /// The player map covers a vertex it must not (exit or call).
    SpuriousPlayer,
    /// A non-exit vertex has no successors; plays reaching it end and are
    /// lost by the protagonist. Tolerated.
    DeadEnd,
    /// A box invokes the main module.
    MainInvoked,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub module: String,
    pub vertex: String,
    pub rule: ViolationRule,
    pub severity: Severity,
    pub message: String,
}

/// Check every structural rule; returns all findings. A game is well-formed
/// iff no finding has `Severity::Error`.
pub fn validate(g: &Game) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |m: &str, v: String, rule: ViolationRule, sev: Severity, msg: String| {
        out.push(Violation { module: m.to_string(), vertex: v, rule, severity: sev, message: msg });
    };

    for (mi, md) in g.modules.iter().enumerate() {
        let vname = |v: Vertex| md.display_vertex(v);

        for b in &md.boxes {
            if b.callee == g.main {
                push(
                    &md.name,
                    format!("box {}", b.name),
                    ViolationRule::MainInvoked,
                    Severity::Error,
                    "the main module cannot be invoked".into(),
                );
            }
        }

        for (&src, succs) in &md.transitions {
            match src {
                Vertex::Node(n) if md.exit_index(n).is_some() => {
                    push(
                        &md.name,
                        vname(src),
                        ViolationRule::TransitionFromExit,
                        Severity::Error,
                        "transitions must not leave an exit".into(),
                    );
                }
                Vertex::Call(_) => {
                    push(
                        &md.name,
                        vname(src),
                        ViolationRule::TransitionFromCall,
                        Severity::Error,
                        "calls move by descending into the callee, not by explicit edges".into(),
                    );
                }
                _ => {}
            }
            for &dst in succs {
                match dst {
                    Vertex::Node(n) if n == md.entry => {
                        push(
                            &md.name,
                            vname(src),
                            ViolationRule::TransitionToEntry,
                            Severity::Error,
                            format!("edge into the entry `{}`", md.node_names[n]),
                        );
                    }
                    Vertex::Ret(_, _) => {
                        push(
                            &md.name,
                            vname(src),
                            ViolationRule::TransitionToReturn,
                            Severity::Error,
                            format!("edge into return vertex `{}`", vname(dst)),
                        );
                    }
                    Vertex::Call(_) if matches!(src, Vertex::Ret(_, _)) => {
                        push(
                            &md.name,
                            vname(src),
                            ViolationRule::CallAfterReturn,
                            Severity::Error,
                            format!("return `{}` moves directly to call `{}`", vname(src), vname(dst)),
                        );
                    }
                    _ => {}
                }
            }
        }

        // Player partition: exactly the non-exit nodes and the returns.
        for v in g.vertices_of(mi) {
            let must_have = match v {
                Vertex::Node(n) => md.exit_index(n).is_none(),
                Vertex::Ret(_, _) => true,
                Vertex::Call(_) => false,
            };
            let has = md.player.contains_key(&v);
            if must_have && !has {
                push(
                    &md.name,
                    vname(v),
                    ViolationRule::MissingPlayer,
                    Severity::Error,
                    "vertex must be assigned to a player".into(),
                );
            }
            if !must_have && has {
                push(
                    &md.name,
                    vname(v),
                    ViolationRule::SpuriousPlayer,
                    Severity::Error,
                    "exits and calls belong to neither player".into(),
                );
            }

            // Dead ends: non-exit vertices with no outgoing moves.
            let is_exit = matches!(v, Vertex::Node(n) if md.exit_index(n).is_some());
            let is_call = matches!(v, Vertex::Call(_));
            if !is_exit && !is_call && md.successors(v).is_empty() {
                push(
                    &md.name,
                    vname(v),
                    ViolationRule::DeadEnd,
                    Severity::Warning,
                    "vertex has no successors; plays reaching it are finite and lost by player 0"
                        .into(),
                );
            }
        }
    }
    out
}

/// True iff [`validate`] reports no `Error`-severity violation.
pub fn is_well_formed(g: &Game) -> bool {
    validate(g).iter().all(|v| v.severity != Severity::Error)
}
