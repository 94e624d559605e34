//! Named fixtures and seeded random families of games, specifications, and
//! automata, used by the test suites and benchmarks. Everything here is
//! deterministic given the seed.

use rand::Rng;

use crate::alphabet::{ApTable, LabelSet, TaggedSymbol};
use crate::game::{Game, GameBuilder, Player, SketchVertex};
use crate::word::{
    Acceptance, Branching, BuchiWordAutomaton, Guard, StackSym, TagGuard, Vpa,
};

/// The standard two-module fixture: a requester module repeatedly invokes a
/// responder. Inside the responder the antagonist commits to one of two
/// signals (`pa` or `pb`); after each return the requester picks one of two
/// replies (`pc`, emitted by `u1`, or `pd`, emitted by `u2`) and calls again.
///
/// Layout (module `main`): `e_in -> call b`; `ret(b, ex1) -> u1 | u2`;
/// `u1 -> call b`; `u2 -> call b`. Module `responder`: `e1 -> u3 | u4`;
/// `u3 -> ex1`; `u4 -> ex1`.
///
/// Ownership: `e_in`, the return vertex, `u2`, and `u3` belong to player 0;
/// `u1`, `e1`, and `u4` belong to player 1. The protagonist's only real
/// choice is at the return vertex; the antagonist's only real choice is at
/// the responder entry.
pub fn call_and_respond() -> Game {
    let mut gb = GameBuilder::new("call-and-respond");
    gb.aps(&["pa", "pb", "pc", "pd"]);
    {
        let m = gb.module("main");
        m.node("e_in", Player::Zero, &[]);
        m.entry("e_in");
        m.node("u1", Player::One, &["pc"]);
        m.node("u2", Player::Zero, &["pd"]);
        m.boxx("b", "responder", &[]);
        m.ret_info("ex1", &[], Player::Zero);
        m.edge("e_in", SketchVertex::call("b"));
        m.edge(SketchVertex::ret("b", "ex1"), "u1");
        m.edge(SketchVertex::ret("b", "ex1"), "u2");
        m.edge("u1", SketchVertex::call("b"));
        m.edge("u2", SketchVertex::call("b"));
    }
    {
        let m = gb.module("responder");
        m.node("e1", Player::One, &[]);
        m.entry("e1");
        m.node("u3", Player::Zero, &["pa"]);
        m.node("u4", Player::One, &["pb"]);
        m.exit("ex1", &[]);
        m.edge("e1", "u3");
        m.edge("e1", "u4");
        m.edge("u3", "ex1");
        m.edge("u4", "ex1");
    }
    gb.main("main");
    gb.finish().expect("fixture builds")
}

/// Configuration for the random small-game family.
#[derive(Debug, Clone)]
pub struct GameFamily {
    /// Probability that the game has a callee module besides main.
    pub two_modules: f64,
    /// Probability that the callee additionally calls itself (recursion).
    pub recursive: f64,
    /// Probability that a module gets a second middle node.
    pub extra_node: f64,
    /// Probability of allowing a dead-end vertex.
    pub dead_ends: f64,
    /// Atomic propositions to draw labels from.
    pub aps: Vec<String>,
}

impl Default for GameFamily {
    fn default() -> Self {
        GameFamily {
            two_modules: 0.8,
            recursive: 0.25,
            extra_node: 0.5,
            dead_ends: 0.1,
            aps: vec!["p".into(), "q".into()],
        }
    }
}

impl GameFamily {
    /// Sample one game. Guarantees: well-formed (validates with no errors),
    /// main has no exits, every box target exists, and unless `dead_ends`
    /// fired, every non-exit vertex has a successor.
    pub fn sample(&self, rng: &mut impl Rng) -> Game {
        let two = rng.random_bool(self.two_modules);
        let recursive = two && rng.random_bool(self.recursive);

        let mut gb = GameBuilder::new("random");
        let ap_refs: Vec<&str> = self.aps.iter().map(|s| s.as_str()).collect();
        gb.aps(&ap_refs);

        // Pre-decide callee shape so main can reference its exit.
        let sub_extra = two && rng.random_bool(self.extra_node);

        // -------- main --------
        {
            let mut label_pool = LabelPool { aps: &ap_refs };
            let m = gb.module("main");
            let main_extra = rng.random_bool(self.extra_node);
            m.node("n0", random_player(rng), &[]);
            m.entry("n0");
            let p1 = label_pool.pick(rng);
            m.node("n1", random_player(rng), &p1);
            let mut middles = vec!["n1".to_string()];
            if main_extra {
                let p2 = label_pool.pick(rng);
                m.node("n2", random_player(rng), &p2);
                middles.push("n2".to_string());
            }
            if two {
                let cl = label_pool.pick(rng);
                m.boxx("b", "sub", &cl);
                let rl = label_pool.pick(rng);
                m.ret_info_for("b", "x0", &rl, Some(random_player(rng)));
            }

            // Targets: middles, plus the call when present. Sources: entry,
            // middles, and the return vertex when present.
            let mut targets: Vec<SketchVertex> =
                middles.iter().map(|n| SketchVertex::node(n.clone())).collect();
            if two {
                targets.push(SketchVertex::call("b"));
            }
            let mut sources: Vec<SketchVertex> = vec![SketchVertex::node("n0")];
            sources.extend(middles.iter().map(|n| SketchVertex::node(n.clone())));
            if two {
                sources.push(SketchVertex::ret("b", "x0"));
            }
            for src in sources {
                // Returns may not move straight to a call.
                let legal: Vec<&SketchVertex> = targets
                    .iter()
                    .filter(|t| {
                        !(matches!(src, SketchVertex::Ret(_, _))
                            && matches!(t, SketchVertex::Call(_)))
                    })
                    .collect();
                let want_dead = rng.random_bool(self.dead_ends);
                if legal.is_empty() || want_dead {
                    continue;
                }
                let count = 1 + usize::from(rng.random_bool(0.5) && legal.len() > 1);
                let mut chosen = pick_distinct(rng, &legal, count);
                chosen.sort_by_key(|t| format!("{t:?}"));
                for t in chosen {
                    m.edge(src.clone(), t.clone());
                }
            }
        }

        // -------- sub --------
        if two {
            let mut label_pool = LabelPool { aps: &ap_refs };
            let m = gb.module("sub");
            m.node("n0", random_player(rng), &[]);
            m.entry("n0");
            let p1 = label_pool.pick(rng);
            m.node("n1", random_player(rng), &p1);
            let mut middles = vec!["n1".to_string()];
            if sub_extra {
                let p2 = label_pool.pick(rng);
                m.node("n2", random_player(rng), &p2);
                middles.push("n2".to_string());
            }
            let xl = label_pool.pick(rng);
            m.exit("x0", &xl);
            if recursive {
                let cl = label_pool.pick(rng);
                m.boxx("r", "sub", &cl);
                let rl = label_pool.pick(rng);
                m.ret_info_for("r", "x0", &rl, Some(random_player(rng)));
            }

            let mut targets: Vec<SketchVertex> =
                middles.iter().map(|n| SketchVertex::node(n.clone())).collect();
            targets.push(SketchVertex::node("x0"));
            if recursive {
                targets.push(SketchVertex::call("r"));
            }
            let mut sources: Vec<SketchVertex> = vec![SketchVertex::node("n0")];
            sources.extend(middles.iter().map(|n| SketchVertex::node(n.clone())));
            if recursive {
                sources.push(SketchVertex::ret("r", "x0"));
            }
            for src in sources {
                let legal: Vec<&SketchVertex> = targets
                    .iter()
                    .filter(|t| {
                        !(matches!(src, SketchVertex::Ret(_, _))
                            && matches!(t, SketchVertex::Call(_)))
                    })
                    .collect();
                let want_dead = rng.random_bool(self.dead_ends);
                if legal.is_empty() || want_dead {
                    continue;
                }
                let count = 1 + usize::from(rng.random_bool(0.5) && legal.len() > 1);
                let mut chosen = pick_distinct(rng, &legal, count);
                chosen.sort_by_key(|t| format!("{t:?}"));
                for t in chosen {
                    m.edge(src.clone(), t.clone());
                }
            }
        }

        gb.main("main");
        gb.finish().expect("generated games always build")
    }
}

struct LabelPool<'a> {
    aps: &'a [&'a str],
}

impl LabelPool<'_> {
    fn pick(&mut self, rng: &mut impl Rng) -> Vec<&str> {
        self.aps.iter().copied().filter(|_| rng.random_bool(0.4)).collect()
    }
}

fn random_player(rng: &mut impl Rng) -> Player {
    if rng.random_bool(0.5) {
        Player::Zero
    } else {
        Player::One
    }
}

fn pick_distinct<'a, T>(rng: &mut impl Rng, pool: &[&'a T], count: usize) -> Vec<&'a T> {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    // Partial Fisher-Yates.
    for i in 0..count.min(idx.len()) {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    idx.truncate(count.min(pool.len()));
    idx.into_iter().map(|i| pool[i]).collect()
}

/// Deterministic rng for a given instance index.
pub fn rng_for(seed: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index))
}

/// Total deterministic Büchi automaton for "the named proposition holds
/// infinitely often". Two states; accepting exactly after reading it.
pub fn infinitely_often(ap: &ApTable, name: &str) -> BuchiWordAutomaton {
    let id = ap.lookup(name).expect("proposition must be in the table");
    let mask = LabelSet::singleton(id);
    let mut b = BuchiWordAutomaton::new(
        &format!("inf-often-{name}"),
        ap.clone(),
        vec!["wait".into(), "hit".into()],
        0,
        Acceptance::Buchi,
        Branching::Deterministic,
    );
    for q in 0..2 {
        b.add(q, Guard::exact(mask, mask), TagGuard::Any, 1);
        b.add(q, Guard::exact(LabelSet::empty(), mask), TagGuard::Any, 0);
    }
    b.mark_accepting(1);
    b
}

/// Total deterministic Büchi automaton demanding that every `pa` signal is
/// echoed by `pc` before the next signal, every `pb` by `pd`, and that the
/// idle state recurs forever. Mis-echoes, double signals, and unsolicited
/// replies fall into a rejecting sink. Matching the signal requires seeing
/// which one was emitted — information a per-module strategy of the standard
/// fixture never observes.
pub fn echo_matching_spec(ap: &ApTable) -> BuchiWordAutomaton {
    let get = |n: &str| ap.lookup(n).expect("fixture proposition");
    let pa = LabelSet::singleton(get("pa"));
    let pb = LabelSet::singleton(get("pb"));
    let pc = LabelSet::singleton(get("pc"));
    let pd = LabelSet::singleton(get("pd"));
    let mask = pa.union(pb).union(pc).union(pd);
    let mut b = BuchiWordAutomaton::new(
        "echo-matching",
        ap.clone(),
        vec!["idle".into(), "owes_pc".into(), "owes_pd".into(), "sink".into()],
        0,
        Acceptance::Buchi,
        Branching::Deterministic,
    );
    let (idle, owes_pc, owes_pd, sink) = (0, 1, 2, 3);
    // Enumerate every subset of the observed mask per state, so the
    // automaton is total by construction.
    let subsets: Vec<LabelSet> = {
        let ids: Vec<_> = mask.iter().collect();
        (0..(1u64 << ids.len()))
            .map(|bits| {
                let mut l = LabelSet::empty();
                for (i, &id) in ids.iter().enumerate() {
                    if bits & (1 << i) != 0 {
                        l.insert(id);
                    }
                }
                l
            })
            .collect()
    };
    for &s in &subsets {
        let from_idle = if s == LabelSet::empty() {
            idle
        } else if s == pa {
            owes_pc
        } else if s == pb {
            owes_pd
        } else {
            sink
        };
        b.add(idle, Guard::exact(s, mask), TagGuard::Any, from_idle);
        let from_owes_pc = if s == LabelSet::empty() {
            owes_pc
        } else if s == pc {
            idle
        } else {
            sink
        };
        b.add(owes_pc, Guard::exact(s, mask), TagGuard::Any, from_owes_pc);
        let from_owes_pd = if s == LabelSet::empty() {
            owes_pd
        } else if s == pd {
            idle
        } else {
            sink
        };
        b.add(owes_pd, Guard::exact(s, mask), TagGuard::Any, from_owes_pd);
        b.add(sink, Guard::exact(s, mask), TagGuard::Any, sink);
    }
    b.mark_accepting(idle);
    b
}

/// Random total deterministic Büchi automaton over the given proposition
/// table, with one to three states. Every (state, label-subset) pair gets
/// exactly one transition.
pub fn random_small_spec(ap: &ApTable, rng: &mut impl Rng) -> BuchiWordAutomaton {
    let mask = ap.universe();
    let n = rng.random_range(1..=3usize);
    let mut b = BuchiWordAutomaton::new(
        "random-spec",
        ap.clone(),
        (0..n).map(|i| format!("s{i}")).collect(),
        0,
        Acceptance::Buchi,
        Branching::Deterministic,
    );
    let subsets: Vec<LabelSet> = {
        let ids: Vec<_> = mask.iter().collect();
        (0..(1u64 << ids.len()))
            .map(|bits| {
                let mut l = LabelSet::empty();
                for (i, &id) in ids.iter().enumerate() {
                    if bits & (1 << i) != 0 {
                        l.insert(id);
                    }
                }
                l
            })
            .collect()
    };
    for q in 0..n {
        for &s in &subsets {
            let to = rng.random_range(0..n);
            b.add(q, Guard::exact(s, mask), TagGuard::Any, to);
        }
    }
    for q in 0..n {
        if rng.random_bool(0.5) {
            b.mark_accepting(q);
        }
    }
    b
}

/// Random ultimately periodic word over the table's propositions: a stem of
/// up to four positions and a cycle of one to four, all internal-tagged.
pub fn random_lasso(
    ap: &ApTable,
    rng: &mut impl Rng,
) -> (Vec<TaggedSymbol>, Vec<TaggedSymbol>) {
    let ids: Vec<_> = ap.universe().iter().collect();
    let mk = |rng: &mut dyn rand::RngCore| {
        let mut l = LabelSet::empty();
        for &id in &ids {
            if rng.next_u32() % 2 == 0 {
                l.insert(id);
            }
        }
        TaggedSymbol::internal(l)
    };
    let stem = (0..rng.random_range(0..=4usize)).map(|_| mk(rng)).collect();
    let cycle = (0..rng.random_range(1..=4usize)).map(|_| mk(rng)).collect();
    (stem, cycle)
}

/// Random deterministic visibly pushdown Büchi automaton over the table:
/// two to four states, one or two stack symbols. Deterministic by
/// construction (at most one transition per state, label subset, and —
/// for pops — stack top); some slots are left undefined so runs can get
/// stuck.
pub fn random_det_vpa(ap: &ApTable, rng: &mut impl Rng) -> Vpa {
    let mask = ap.universe();
    let n = rng.random_range(2..=4usize);
    let g = rng.random_range(1..=2usize);
    let mut v = Vpa::new(
        "random-vpa",
        ap.clone(),
        (0..n).map(|i| format!("s{i}")).collect(),
        vec![0],
        (0..g).map(|i| format!("g{i}")).collect(),
        Acceptance::Buchi,
        Branching::Deterministic,
    );
    let subsets: Vec<LabelSet> = {
        let ids: Vec<_> = mask.iter().collect();
        (0..(1u64 << ids.len()))
            .map(|bits| {
                let mut l = LabelSet::empty();
                for (i, &id) in ids.iter().enumerate() {
                    if bits & (1 << i) != 0 {
                        l.insert(id);
                    }
                }
                l
            })
            .collect()
    };
    for q in 0..n {
        for &s in &subsets {
            if rng.random_bool(0.85) {
                v.add_int(q, Guard::exact(s, mask), rng.random_range(0..n));
            }
            if rng.random_bool(0.85) {
                v.add_push(
                    q,
                    Guard::exact(s, mask),
                    rng.random_range(0..n),
                    rng.random_range(0..g),
                );
            }
            for sym in 0..g {
                if rng.random_bool(0.85) {
                    v.add_pop(
                        q,
                        Guard::exact(s, mask),
                        StackSym::Sym(sym),
                        rng.random_range(0..n),
                    );
                }
            }
        }
    }
    for q in 0..n {
        if rng.random_bool(0.5) {
            v.mark_accepting(q);
        }
    }
    debug_assert!(v.check_deterministic().is_ok());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_well_formed, validate, Severity};

    #[test]
    fn fixture_validates_cleanly() {
        let g = call_and_respond();
        let reports = validate(&g);
        assert!(
            reports.iter().all(|r| r.severity != Severity::Error),
            "unexpected violations: {reports:?}"
        );
        // No dead ends either: every vertex has a move.
        assert!(reports.is_empty(), "unexpected warnings: {reports:?}");
        assert_eq!(g.arity(), 2);
        assert_eq!(g.call_edges(), vec![(0, 1)]);
    }

    #[test]
    fn random_family_is_well_formed() {
        let fam = GameFamily::default();
        for i in 0..200 {
            let mut rng = rng_for(7, i);
            let g = fam.sample(&mut rng);
            assert!(is_well_formed(&g), "instance {i} failed validation");
            assert!(g.modules[g.main].exits.is_empty(), "main must be exit-free");
        }
    }

    #[test]
    fn family_is_deterministic_per_seed() {
        let fam = GameFamily::default();
        let a = fam.sample(&mut rng_for(3, 9));
        let b = fam.sample(&mut rng_for(3, 9));
        assert_eq!(a, b);
    }

    #[test]
    fn echo_spec_is_total_deterministic_and_judges_plays() {
        use crate::word::accepts_lasso;
        let g = call_and_respond();
        let spec = echo_matching_spec(&g.ap);
        assert!(spec.check_deterministic().is_ok());
        // Totality: every (state, subset) has a successor.
        for q in 0..spec.state_count() {
            for sym in crate::word::symbol_classes(spec.universe) {
                assert!(
                    spec.det_successor(q, sym).is_some(),
                    "stuck at {q} on {sym:?}"
                );
            }
        }
        let label = |names: &[&str]| {
            let mut l = LabelSet::empty();
            for n in names {
                l.insert(g.ap.lookup(n).unwrap());
            }
            l
        };
        use crate::alphabet::Tag;
        let sy = |names: &[&str], t: Tag| TaggedSymbol::new(label(names), t);
        // One fixture round, correctly echoed: e_in, call, e1, u3(pa), ex1,
        // ret, u1(pc), call … — the cycle starts at the call position.
        let good_cycle = vec![
            sy(&[], Tag::Call),
            sy(&[], Tag::Internal),
            sy(&["pa"], Tag::Internal),
            sy(&[], Tag::Internal),
            sy(&[], Tag::Return),
            sy(&["pc"], Tag::Internal),
        ];
        let stem = vec![sy(&[], Tag::Internal)];
        assert_eq!(accepts_lasso(&spec, &stem, &good_cycle), Ok(true));
        // Mis-echo: pa answered by pd.
        let bad_cycle = vec![
            sy(&[], Tag::Call),
            sy(&[], Tag::Internal),
            sy(&["pa"], Tag::Internal),
            sy(&[], Tag::Internal),
            sy(&[], Tag::Return),
            sy(&["pd"], Tag::Internal),
        ];
        assert_eq!(accepts_lasso(&spec, &stem, &bad_cycle), Ok(false));
    }

    #[test]
    fn random_specs_are_total_and_deterministic() {
        let g = GameFamily::default().sample(&mut rng_for(21, 0));
        for i in 0..50 {
            let mut rng = rng_for(22, i);
            let spec = random_small_spec(&g.ap, &mut rng);
            assert!(spec.check_deterministic().is_ok());
            for q in 0..spec.state_count() {
                for sym in crate::word::symbol_classes(spec.universe) {
                    assert!(spec.det_successor(q, sym).is_some());
                }
            }
        }
    }

    #[test]
    fn random_vpas_are_deterministic() {
        let g = GameFamily::default().sample(&mut rng_for(23, 0));
        for i in 0..50 {
            let mut rng = rng_for(24, i);
            let v = random_det_vpa(&g.ap, &mut rng);
            assert!(v.check_deterministic().is_ok());
            assert!(v.state_count() <= 4 && v.stack_names.len() <= 2);
        }
    }

    #[test]
    fn random_lassos_have_nonempty_cycles() {
        let ap = ApTable::from_names(["p", "q"]).unwrap();
        for i in 0..50 {
            let mut rng = rng_for(25, i);
            let (stem, cycle) = random_lasso(&ap, &mut rng);
            assert!(!cycle.is_empty());
            assert!(stem.len() <= 4 && cycle.len() <= 4);
        }
    }
}
