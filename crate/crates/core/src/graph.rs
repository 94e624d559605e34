//! Internal graph utilities shared by the word-automaton, tree-automaton,
//! and strategy-checking layers: reachability, strongly connected
//! components, and reachable-cycle queries.

/// Vertices reachable from `starts` following `succ` edges.
pub(crate) fn reachable(succ: &[Vec<usize>], starts: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut queue: Vec<usize> = Vec::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push(s);
        }
    }
    while let Some(v) = queue.pop() {
        for &u in &succ[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    seen
}

/// Is there a cycle reachable from `starts` all of whose vertices satisfy
/// `keep`? The approach path may pass through vertices that do not.
pub(crate) fn reachable_cycle_within(
    succ: &[Vec<usize>],
    starts: &[usize],
    keep: &dyn Fn(usize) -> bool,
) -> bool {
    let seen = reachable(succ, starts);
    let admit = |v: usize| seen[v] && keep(v);
    cyclic_component_exists(succ, &admit, &|_| true)
}

/// Is there a reachable cycle containing at least one vertex satisfying
/// `mark`?
pub(crate) fn reachable_cycle_through(
    succ: &[Vec<usize>],
    starts: &[usize],
    mark: &dyn Fn(usize) -> bool,
) -> bool {
    let seen = reachable(succ, starts);
    let admit = |v: usize| seen[v];
    cyclic_component_exists(succ, &admit, mark)
}

/// Does some nontrivial strongly connected component of the `admit`-induced
/// subgraph contain a vertex satisfying `want`? Nontrivial means it carries
/// a cycle: more than one vertex, or a self-loop.
fn cyclic_component_exists(
    succ: &[Vec<usize>],
    admit: &dyn Fn(usize) -> bool,
    want: &dyn Fn(usize) -> bool,
) -> bool {
    for comp in sccs(succ.len(), admit, succ) {
        let nontrivial =
            comp.len() > 1 || succ[comp[0]].iter().any(|&u| u == comp[0] && admit(u));
        if nontrivial && comp.iter().any(|&v| want(v)) {
            return true;
        }
    }
    false
}

/// Tarjan's strongly connected components over the subgraph induced by
/// `admit`. Iterative, so deep graphs cannot overflow the call stack.
/// Components are returned with sorted vertex lists.
pub(crate) fn sccs(
    n: usize,
    admit: &dyn Fn(usize) -> bool,
    succ: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy)]
    struct NodeInfo {
        index: i64,
        low: i64,
        on_stack: bool,
    }
    let mut info = vec![NodeInfo { index: -1, low: -1, on_stack: false }; n];
    let mut counter: i64 = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();

    for root in 0..n {
        if !admit(root) || info[root].index >= 0 {
            continue;
        }
        // Iterative DFS: frames of (vertex, admitted successors, cursor).
        let kids = |v: usize| -> Vec<usize> {
            succ[v].iter().copied().filter(|&u| admit(u)).collect()
        };
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        info[root].index = counter;
        info[root].low = counter;
        counter += 1;
        info[root].on_stack = true;
        stack.push(root);
        call.push((root, kids(root), 0));
        while let Some(frame) = call.last_mut() {
            let (v, children, pos) = (frame.0, &frame.1, &mut frame.2);
            if *pos < children.len() {
                let w = children[*pos];
                *pos += 1;
                if info[w].index < 0 {
                    info[w].index = counter;
                    info[w].low = counter;
                    counter += 1;
                    info[w].on_stack = true;
                    stack.push(w);
                    call.push((w, kids(w), 0));
                } else if info[w].on_stack {
                    let lw = info[w].index;
                    if lw < info[v].low {
                        info[v].low = lw;
                    }
                }
            } else {
                let v_low = info[v].low;
                let v_index = info[v].index;
                if v_low == v_index {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("component stack");
                        info[w].on_stack = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
                call.pop();
                if let Some(parent) = call.last_mut() {
                    let p = parent.0;
                    if v_low < info[p].low {
                        info[p].low = v_low;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_splits_chain_and_cycle() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3 (self-loop on 3)
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        let comps = sccs(4, &|_| true, &succ);
        let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        assert!(comps.contains(&vec![1, 2]));
    }

    #[test]
    fn cycle_queries_respect_filters() {
        // 0 -> 1 <-> 2, and 2 -> 3 -> 3.
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        assert!(reachable_cycle_through(&succ, &[0], &|v| v == 1));
        assert!(!reachable_cycle_through(&succ, &[3], &|v| v == 1));
        assert!(reachable_cycle_within(&succ, &[0], &|v| v != 1)); // 3's loop
        assert!(!reachable_cycle_within(&succ, &[0], &|v| v == 1)); // 1 alone is no cycle
        assert!(reachable_cycle_within(&succ, &[0], &|v| v >= 1));
    }

    #[test]
    fn unreachable_cycles_do_not_count() {
        // 0 -> 1; isolated cycle 2 <-> 3.
        let succ = vec![vec![1], vec![], vec![3], vec![2]];
        assert!(!reachable_cycle_within(&succ, &[0], &|_| true));
        assert!(reachable_cycle_within(&succ, &[2], &|_| true));
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let mut succ: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n]).collect();
        succ[n - 1] = vec![0];
        assert!(reachable_cycle_within(&succ, &[0], &|_| true));
        assert_eq!(sccs(n, &|_| true, &succ).len(), 1);
    }
}
