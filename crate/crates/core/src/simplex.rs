//! Exact transportation simplex (u-v / spanning-tree form) for dense
//! discrete optimal transport at desk scale.  Dantzig pricing with a switch
//! to Bland's rule after a run of degenerate pivots, which guarantees
//! termination.

/// Solves min Σ c(i,j)·x(i,j) s.t. row sums = supply, column sums =
/// demand, x ≥ 0.  Supplies and demands must balance.  Returns the basic
/// optimal flows as (i, j, flow).
pub fn transportation_simplex(
    supply: &[f64],
    demand: &[f64],
    cost: &dyn Fn(usize, usize) -> f64,
) -> Vec<(usize, usize, f64)> {
    let m = supply.len();
    let n = demand.len();
    assert!(m > 0 && n > 0);

    // Northwest-corner initial basis: m+n−1 cells forming a spanning tree.
    let mut flow = vec![0.0f64; m * n];
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);
    {
        let mut a = supply.to_vec();
        let mut b = demand.to_vec();
        let (mut i, mut j) = (0usize, 0usize);
        while i < m && j < n {
            let t = a[i].min(b[j]);
            flow[i * n + j] = t;
            basis.push((i, j));
            a[i] -= t;
            b[j] -= t;
            if basis.len() == m + n - 1 {
                break;
            }
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    let mut in_basis = vec![false; m * n];
    for &(i, j) in &basis {
        in_basis[i * n + j] = true;
    }

    let max_iters = 200 * (m + n) * (m + n).max(16);
    let mut degenerate_run = 0usize;
    for _iter in 0..max_iters {
        // Potentials from the basis tree: u_i + v_j = c_ij on basic cells.
        let (u, v) = potentials(m, n, &basis, cost);

        // Entering arc: most negative reduced cost (Dantzig), or the first
        // one in row-major order once degeneracy persists (Bland).
        let bland = degenerate_run > m + n;
        let mut enter: Option<(usize, usize, f64)> = None;
        'scan: for i in 0..m {
            for j in 0..n {
                if in_basis[i * n + j] {
                    continue;
                }
                let red = cost(i, j) - u[i] - v[j];
                if red < -1e-11 {
                    match enter {
                        Some((_, _, best)) if !bland && red >= best => {}
                        _ => {
                            enter = Some((i, j, red));
                            if bland {
                                break 'scan;
                            }
                        }
                    }
                }
            }
        }
        let Some((ei, ej, _)) = enter else {
            break; // optimal
        };

        // Unique cycle: path from row-node ei to col-node ej in the basis
        // tree, alternating +/− starting with + at the entering cell.
        let cycle = find_cycle(m, n, &basis, ei, ej);
        let mut theta = f64::INFINITY;
        let mut leave_pos = usize::MAX;
        for (k, &(i, j)) in cycle.iter().enumerate() {
            if k % 2 == 1 {
                let f = flow[i * n + j];
                if f < theta - 1e-18 {
                    theta = f;
                    leave_pos = k;
                }
            }
        }
        if theta <= 1e-15 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        for (k, &(i, j)) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                flow[i * n + j] += theta;
            } else {
                flow[i * n + j] -= theta;
            }
        }
        let (li, lj) = cycle[leave_pos];
        flow[li * n + lj] = flow[li * n + lj].max(0.0);
        in_basis[li * n + lj] = false;
        in_basis[ei * n + ej] = true;
        let pos = basis.iter().position(|&c| c == (li, lj)).unwrap();
        basis[pos] = (ei, ej);
    }

    let mut out = Vec::new();
    for &(i, j) in &basis {
        if flow[i * n + j] > 0.0 {
            out.push((i, j, flow[i * n + j]));
        }
    }
    out
}

/// Dual potentials on the spanning tree defined by the basis.
fn potentials(
    m: usize,
    n: usize,
    basis: &[(usize, usize)],
    cost: &dyn Fn(usize, usize) -> f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut row_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut col_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(i, j)) in basis.iter().enumerate() {
        row_adj[i].push(k);
        col_adj[j].push(k);
    }
    let mut u = vec![f64::NAN; m];
    let mut v = vec![f64::NAN; n];
    u[0] = 0.0;
    let mut stack: Vec<(bool, usize)> = vec![(true, 0)]; // (is_row, node)
    while let Some((is_row, node)) = stack.pop() {
        let edges = if is_row { &row_adj[node] } else { &col_adj[node] };
        for &k in edges {
            let (i, j) = basis[k];
            if is_row && v[j].is_nan() {
                v[j] = cost(i, j) - u[i];
                stack.push((false, j));
            } else if !is_row && u[i].is_nan() {
                u[i] = cost(i, j) - v[j];
                stack.push((true, i));
            }
        }
    }
    // Disconnected components can only appear through degenerate bases on
    // zero-mass atoms; pin them to zero potential.
    for ui in &mut u {
        if ui.is_nan() {
            *ui = 0.0;
        }
    }
    for vj in &mut v {
        if vj.is_nan() {
            *vj = 0.0;
        }
    }
    (u, v)
}

/// Cells of the unique cycle created by adding (ei, ej) to the basis tree,
/// listed from the entering cell with alternating orientation.
fn find_cycle(
    m: usize,
    n: usize,
    basis: &[(usize, usize)],
    ei: usize,
    ej: usize,
) -> Vec<(usize, usize)> {
    // Path in the bipartite tree from row ei to column ej.
    // Nodes: rows 0..m, columns m..m+n.
    let total = m + n;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total]; // (neighbor, basis idx)
    for (k, &(i, j)) in basis.iter().enumerate() {
        adj[i].push((m + j, k));
        adj[m + j].push((i, k));
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; total];
    let mut seen = vec![false; total];
    seen[ei] = true;
    let mut queue = std::collections::VecDeque::from([ei]);
    while let Some(node) = queue.pop_front() {
        if node == m + ej {
            break;
        }
        for &(next, k) in &adj[node] {
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some((node, k));
                queue.push_back(next);
            }
        }
    }
    let mut path_cells = Vec::new();
    let mut node = m + ej;
    while let Some((parent, k)) = prev[node] {
        path_cells.push(basis[k]);
        node = parent;
    }
    path_cells.reverse();
    // Cycle: entering cell, then the path cells from ej's side back to ei.
    let mut cycle = Vec::with_capacity(path_cells.len() + 1);
    cycle.push((ei, ej));
    for cell in path_cells.into_iter().rev() {
        cycle.push(cell);
    }
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_cost(plan: &[(usize, usize, f64)], cost: &dyn Fn(usize, usize) -> f64) -> f64 {
        plan.iter().map(|&(i, j, f)| f * cost(i, j)).sum()
    }

    #[test]
    fn tiny_instance_matches_hand_optimum() {
        // 2×2 with an obvious diagonal optimum.
        let supply = [0.5, 0.5];
        let demand = [0.5, 0.5];
        let c = |i: usize, j: usize| if i == j { 0.0 } else { 1.0 };
        let plan = transportation_simplex(&supply, &demand, &c);
        assert!(total_cost(&plan, &c) < 1e-12);
    }

    #[test]
    fn three_by_three_against_enumeration() {
        // Uniform marginals: the optimal plan of a permutation-cost matrix
        // is the cheapest assignment; enumerate all 6 permutations.
        let supply = [1.0 / 3.0; 3];
        let demand = [1.0 / 3.0; 3];
        let costs = [[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]];
        let c = |i: usize, j: usize| costs[i][j];
        let plan = transportation_simplex(&supply, &demand, &c);
        let mut best = f64::INFINITY;
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for p in perms {
            let cst: f64 = (0..3).map(|i| costs[i][p[i]] / 3.0).sum();
            best = best.min(cst);
        }
        assert!((total_cost(&plan, &c) - best).abs() < 1e-12);
    }

    #[test]
    fn marginals_are_exact() {
        let supply = [0.1, 0.4, 0.25, 0.25];
        let demand = [0.3, 0.3, 0.4];
        let c = |i: usize, j: usize| ((i as f64) - 1.3 * (j as f64)).powi(2);
        let plan = transportation_simplex(&supply, &demand, &c);
        let mut row = vec![0.0; 4];
        let mut col = vec![0.0; 3];
        for &(i, j, f) in &plan {
            assert!(f >= 0.0);
            row[i] += f;
            col[j] += f;
        }
        for (r, s) in row.iter().zip(&supply) {
            assert!((r - s).abs() < 1e-12);
        }
        for (csum, d) in col.iter().zip(&demand) {
            assert!((csum - d).abs() < 1e-12);
        }
    }
}
