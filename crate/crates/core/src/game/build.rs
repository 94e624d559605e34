//! Programmatic construction of games. The builder accepts name-based
//! references, checks them, and produces an immutable [`Game`]. The text-file
//! parser and the random generators both go through it.

use std::collections::BTreeMap;

use crate::alphabet::{ApTable, LabelSet};

use super::{BoxDecl, Game, GameError, GameModule, Player, Vertex};

/// A vertex reference by name, before resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SketchVertex {
    Node(String),
    /// `Call(box)` — the call vertex of a box.
    Call(String),
    /// `Ret(box, exit)` — the return vertex of a box for a named callee exit.
    Ret(String, String),
}

impl SketchVertex {
    pub fn node(n: impl Into<String>) -> Self {
        SketchVertex::Node(n.into())
    }
    pub fn call(b: impl Into<String>) -> Self {
        SketchVertex::Call(b.into())
    }
    pub fn ret(b: impl Into<String>, x: impl Into<String>) -> Self {
        SketchVertex::Ret(b.into(), x.into())
    }
}

impl From<&str> for SketchVertex {
    fn from(s: &str) -> Self {
        SketchVertex::Node(s.to_string())
    }
}

#[derive(Debug, Clone)]
struct NodeSketch {
    name: String,
    player: Option<Player>,
    labels: Vec<String>,
    is_exit: bool,
}

#[derive(Debug, Clone)]
struct BoxSketch {
    name: String,
    callee: String,
    call_labels: Vec<String>,
    /// Per callee exit name: labels and owner of the return vertex.
    rets: Vec<(String, Vec<String>, Option<Player>)>,
}

/// One module under construction.
#[derive(Debug, Clone)]
pub struct ModuleSketch {
    name: String,
    entry: Option<String>,
    nodes: Vec<NodeSketch>,
    boxes: Vec<BoxSketch>,
    edges: Vec<(SketchVertex, SketchVertex)>,
}

impl ModuleSketch {
    fn new(name: String) -> Self {
        ModuleSketch {
            name,
            entry: None,
            nodes: Vec::new(),
            boxes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Declare an internal node owned by `player`.
    pub fn node(&mut self, name: &str, player: Player, labels: &[&str]) -> &mut Self {
        self.nodes.push(NodeSketch {
            name: name.to_string(),
            player: Some(player),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            is_exit: false,
        });
        self
    }

    /// Declare an exit node. Exits have no owner.
    pub fn exit(&mut self, name: &str, labels: &[&str]) -> &mut Self {
        self.nodes.push(NodeSketch {
            name: name.to_string(),
            player: None,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            is_exit: true,
        });
        self
    }

    /// Mark an already-declared node as this module's entry.
    pub fn entry(&mut self, name: &str) -> &mut Self {
        self.entry = Some(name.to_string());
        self
    }

    /// Declare a box invoking `callee`, with the call vertex's labels.
    pub fn boxx(&mut self, name: &str, callee: &str, call_labels: &[&str]) -> &mut Self {
        self.boxes.push(BoxSketch {
            name: name.to_string(),
            callee: callee.to_string(),
            call_labels: call_labels.iter().map(|s| s.to_string()).collect(),
            rets: Vec::new(),
        });
        self
    }

    /// Attach labels and an owner to the return vertex of the most recently
    /// declared box for callee exit `exit`.
    pub fn ret_info(&mut self, exit: &str, labels: &[&str], player: Player) -> &mut Self {
        if let Some(b) = self.boxes.last_mut() {
            b.rets.push((
                exit.to_string(),
                labels.iter().map(|s| s.to_string()).collect(),
                Some(player),
            ));
        }
        self
    }

    /// Same as [`ModuleSketch::ret_info`] on a box chosen by name.
    pub fn ret_info_for(
        &mut self,
        boxname: &str,
        exit: &str,
        labels: &[&str],
        player: Option<Player>,
    ) -> &mut Self {
        if let Some(b) = self.boxes.iter_mut().find(|b| b.name == boxname) {
            b.rets
                .push((exit.to_string(), labels.iter().map(|s| s.to_string()).collect(), player));
        }
        self
    }

    /// Add a transition. Sources must be internal nodes or returns; targets
    /// must be nodes or calls. Order of insertion fixes choice indices.
    pub fn edge(&mut self, src: impl Into<SketchVertex>, dst: impl Into<SketchVertex>) -> &mut Self {
        self.edges.push((src.into(), dst.into()));
        self
    }
}

/// Builder for a whole game.
#[derive(Debug, Clone)]
pub struct GameBuilder {
    name: String,
    aps: Vec<String>,
    modules: Vec<ModuleSketch>,
    main: Option<String>,
}

impl GameBuilder {
    pub fn new(name: &str) -> Self {
        GameBuilder {
            name: name.to_string(),
            aps: Vec::new(),
            modules: Vec::new(),
            main: None,
        }
    }

    /// Pre-declare atomic propositions (labels mention them by name; unknown
    /// names used in labels are interned on the fly in declaration order).
    pub fn aps(&mut self, names: &[&str]) -> &mut Self {
        for n in names {
            if !self.aps.iter().any(|a| a == n) {
                self.aps.push(n.to_string());
            }
        }
        self
    }

    /// Start a module; returns a sketch to populate. The first module whose
    /// name is later passed to [`GameBuilder::main`] becomes the main module.
    pub fn module(&mut self, name: &str) -> &mut ModuleSketch {
        self.modules.push(ModuleSketch::new(name.to_string()));
        self.modules.last_mut().unwrap()
    }

    pub fn main(&mut self, name: &str) -> &mut Self {
        self.main = Some(name.to_string());
        self
    }

    /// Resolve all names and produce the immutable game.
    pub fn finish(&self) -> Result<Game, GameError> {
        // Module name table.
        let mut module_ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, m) in self.modules.iter().enumerate() {
            if module_ids.insert(m.name.as_str(), i).is_some() {
                return Err(GameError::DuplicateModule(m.name.clone()));
            }
        }
        let main_name = self.main.as_ref().ok_or(GameError::NoMain)?;
        let main = *module_ids
            .get(main_name.as_str())
            .ok_or_else(|| GameError::UnknownModule(main_name.clone()))?;

        // Intern propositions: declared ones first, then any label mention.
        let mut ap = ApTable::new();
        for a in &self.aps {
            ap.intern(a)?;
        }
        for m in &self.modules {
            for n in &m.nodes {
                for l in &n.labels {
                    ap.intern(l)?;
                }
            }
            for b in &m.boxes {
                for l in &b.call_labels {
                    ap.intern(l)?;
                }
                for (_, ls, _) in &b.rets {
                    for l in ls {
                        ap.intern(l)?;
                    }
                }
            }
        }
        let mk_labels = |names: &[String], ap: &ApTable| -> LabelSet {
            let mut s = LabelSet::empty();
            for n in names {
                s.insert(ap.lookup(n).expect("interned above"));
            }
            s
        };

        // First pass: per-module node tables and box tables (callee ids).
        struct Resolved {
            node_ids: BTreeMap<String, usize>,
            box_ids: BTreeMap<String, usize>,
        }
        let mut resolved: Vec<Resolved> = Vec::new();
        for m in &self.modules {
            let mut node_ids = BTreeMap::new();
            for (i, n) in m.nodes.iter().enumerate() {
                if node_ids.insert(n.name.clone(), i).is_some() {
                    return Err(GameError::DuplicateNode {
                        module: m.name.clone(),
                        node: n.name.clone(),
                    });
                }
            }
            let mut box_ids = BTreeMap::new();
            for (i, b) in m.boxes.iter().enumerate() {
                if box_ids.insert(b.name.clone(), i).is_some() {
                    return Err(GameError::DuplicateBox {
                        module: m.name.clone(),
                        name: b.name.clone(),
                    });
                }
            }
            resolved.push(Resolved { node_ids, box_ids });
        }

        // Second pass: build each module.
        let mut modules = Vec::new();
        for (mi, m) in self.modules.iter().enumerate() {
            let r = &resolved[mi];
            let entry_name = m.entry.as_ref().ok_or_else(|| GameError::NoEntry(m.name.clone()))?;
            let entry = *r.node_ids.get(entry_name).ok_or_else(|| GameError::UnknownNode {
                module: m.name.clone(),
                node: entry_name.clone(),
            })?;

            let exits: Vec<usize> = m
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.is_exit)
                .map(|(i, _)| i)
                .collect();

            let mut boxes = Vec::new();
            for b in &m.boxes {
                let callee = *module_ids
                    .get(b.callee.as_str())
                    .ok_or_else(|| GameError::UnknownModule(b.callee.clone()))?;
                if callee == main {
                    return Err(GameError::BoxCallsMain {
                        module: m.name.clone(),
                        name: b.name.clone(),
                    });
                }
                boxes.push(BoxDecl { name: b.name.clone(), callee });
            }

            let mut labels: BTreeMap<Vertex, LabelSet> = BTreeMap::new();
            let mut player: BTreeMap<Vertex, Player> = BTreeMap::new();
            for (i, n) in m.nodes.iter().enumerate() {
                labels.insert(Vertex::Node(i), mk_labels(&n.labels, &ap));
                if n.is_exit {
                    if n.player.is_some() {
                        return Err(GameError::PlayerOnExit {
                            module: m.name.clone(),
                            node: n.name.clone(),
                        });
                    }
                } else {
                    player.insert(Vertex::Node(i), n.player.unwrap_or(Player::One));
                }
            }

            // Box-derived vertices: call labels, and return labels/owners.
            for (bi, b) in m.boxes.iter().enumerate() {
                labels.insert(Vertex::Call(bi), mk_labels(&b.call_labels, &ap));
                let callee = boxes[bi].callee;
                let callee_sketch = &self.modules[callee];
                let callee_res = &resolved[callee];
                let callee_exits: Vec<usize> = callee_sketch
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| n.is_exit)
                    .map(|(i, _)| i)
                    .collect();
                // Default every return vertex: empty labels, antagonist-owned.
                for h in 0..callee_exits.len() {
                    labels.insert(Vertex::Ret(bi, h), LabelSet::empty());
                    player.insert(Vertex::Ret(bi, h), Player::One);
                }
                for (exit_name, ls, pl) in &b.rets {
                    let exit_node =
                        *callee_res.node_ids.get(exit_name).ok_or_else(|| GameError::UnknownExit {
                            module: m.name.clone(),
                            name: b.name.clone(),
                            callee: callee_sketch.name.clone(),
                            exit: exit_name.clone(),
                        })?;
                    let h = callee_exits.iter().position(|&x| x == exit_node).ok_or_else(|| {
                        GameError::UnknownExit {
                            module: m.name.clone(),
                            name: b.name.clone(),
                            callee: callee_sketch.name.clone(),
                            exit: exit_name.clone(),
                        }
                    })?;
                    labels.insert(Vertex::Ret(bi, h), mk_labels(ls, &ap));
                    if let Some(p) = pl {
                        player.insert(Vertex::Ret(bi, h), *p);
                    }
                }
            }

            // Returns of exits: the player map must not cover exits (handled
            // above) but must cover returns (defaulted above).

            let resolve = |v: &SketchVertex| -> Result<Vertex, GameError> {
                match v {
                    SketchVertex::Node(n) => {
                        let id = *r.node_ids.get(n).ok_or_else(|| GameError::UnknownNode {
                            module: m.name.clone(),
                            node: n.clone(),
                        })?;
                        Ok(Vertex::Node(id))
                    }
                    SketchVertex::Call(b) => {
                        let id = *r.box_ids.get(b).ok_or_else(|| GameError::UnknownBox {
                            module: m.name.clone(),
                            name: b.clone(),
                        })?;
                        Ok(Vertex::Call(id))
                    }
                    SketchVertex::Ret(b, x) => {
                        let bid = *r.box_ids.get(b).ok_or_else(|| GameError::UnknownBox {
                            module: m.name.clone(),
                            name: b.clone(),
                        })?;
                        let callee = boxes[bid].callee;
                        let callee_sketch = &self.modules[callee];
                        let callee_res = &resolved[callee];
                        let exit_node =
                            *callee_res.node_ids.get(x).ok_or_else(|| GameError::UnknownExit {
                                module: m.name.clone(),
                                name: b.clone(),
                                callee: callee_sketch.name.clone(),
                                exit: x.clone(),
                            })?;
                        let callee_exits: Vec<usize> = callee_sketch
                            .nodes
                            .iter()
                            .enumerate()
                            .filter(|(_, n)| n.is_exit)
                            .map(|(i, _)| i)
                            .collect();
                        let h =
                            callee_exits.iter().position(|&e| e == exit_node).ok_or_else(|| {
                                GameError::UnknownExit {
                                    module: m.name.clone(),
                                    name: b.clone(),
                                    callee: callee_sketch.name.clone(),
                                    exit: x.clone(),
                                }
                            })?;
                        Ok(Vertex::Ret(bid, h))
                    }
                }
            };

            let mut transitions: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
            for (src, dst) in &m.edges {
                let s = resolve(src)?;
                let d = resolve(dst)?;
                transitions.entry(s).or_default().push(d);
            }

            modules.push(GameModule {
                name: m.name.clone(),
                node_names: m.nodes.iter().map(|n| n.name.clone()).collect(),
                entry,
                exits,
                boxes,
                transitions,
                labels,
                player,
            });
        }

        Ok(Game { name: self.name.clone(), modules, main, ap })
    }
}
