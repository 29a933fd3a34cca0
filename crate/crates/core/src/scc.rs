//! Strongly connected components (iterative Tarjan) and topological order.

/// Components of the graph given as adjacency lists, in reverse topological
/// order (a component appears before every component that reaches it).
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;
    // (node, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            if let Some(&w) = adj[v].get(pos) {
                call.last_mut().expect("frame present").1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components
}

/// True iff the component contains an edge (more than one node, or a self-loop).
pub fn is_nontrivial(component: &[usize], adj: &[Vec<usize>]) -> bool {
    component.len() > 1 || component.iter().any(|&v| adj[v].contains(&v))
}

/// Kahn's algorithm restricted to `members`; `None` if the induced subgraph has a cycle.
/// Ties are broken by smallest node id.
pub fn topological_order(adj: &[Vec<usize>], members: &[bool]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indegree = vec![0usize; n];
    for v in (0..n).filter(|&v| members[v]) {
        for &w in &adj[v] {
            if members[w] {
                indegree[w] += 1;
            }
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| members[v] && indegree[v] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::new();
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &adj[v] {
            if members[w] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
    }
    let total = members.iter().filter(|&&m| m).count();
    (order.len() == total).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reach(adj: &[Vec<usize>], from: usize) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut todo = vec![from];
        seen[from] = true;
        while let Some(v) = todo.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    }

    #[test]
    fn two_cycles_and_a_bridge() {
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps, vec![vec![2, 3], vec![0, 1]]);
    }

    #[test]
    fn self_loop_is_nontrivial() {
        let adj = vec![vec![0], vec![0]];
        assert!(is_nontrivial(&[0], &adj));
        assert!(!is_nontrivial(&[1], &adj));
    }

    #[test]
    fn topo_order_detects_cycles() {
        let adj = vec![vec![1], vec![2], vec![0]];
        assert!(topological_order(&adj, &[true, true, true]).is_none());
        assert_eq!(topological_order(&adj, &[true, true, false]), Some(vec![0, 1]));
    }

    proptest! {
        #[test]
        fn components_match_mutual_reachability(
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..20)
        ) {
            let mut adj = vec![Vec::new(); 8];
            for (a, b) in edges {
                adj[a].push(b);
            }
            let comps = strongly_connected_components(&adj);
            let mut comp_of = [usize::MAX; 8];
            for (i, c) in comps.iter().enumerate() {
                for &v in c {
                    comp_of[v] = i;
                }
            }
            let reach_from: Vec<Vec<bool>> = (0..8).map(|v| reach(&adj, v)).collect();
            for a in 0..8 {
                for b in 0..8 {
                    let mutual = reach_from[a][b] && reach_from[b][a];
                    prop_assert_eq!(mutual, comp_of[a] == comp_of[b]);
                }
            }
        }
    }
}
