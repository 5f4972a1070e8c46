//! Bottleneck assignment over small square cost matrices.

/// Whether rows `rows` can be matched to distinct free columns using only
/// allowed pairs (Kuhn's augmenting paths).
fn has_perfect_matching<F>(rows: &[usize], free: &[bool], allowed: &F) -> bool
where
    F: Fn(usize, usize) -> bool,
{
    let n = free.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment<F: Fn(usize, usize) -> bool>(
        row: usize,
        free: &[bool],
        allowed: &F,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for col in 0..free.len() {
            if !free[col] || seen[col] || !allowed(row, col) {
                continue;
            }
            seen[col] = true;
            let ok = match owner[col] {
                None => true,
                Some(other) => augment(other, free, allowed, seen, owner),
            };
            if ok {
                owner[col] = Some(row);
                return true;
            }
        }
        false
    }

    rows.iter().all(|&r| {
        let mut seen = vec![false; n];
        augment(r, free, allowed, &mut seen, &mut owner)
    })
}

/// Lexicographically smallest perfect matching (row `i` gets the smallest
/// feasible column given rows `0..i`), or `None` if none exists.
pub fn lexicographic_matching<F>(n: usize, allowed: F) -> Option<Vec<usize>>
where
    F: Fn(usize, usize) -> bool,
{
    let mut free = vec![true; n];
    let mut assignment = Vec::with_capacity(n);
    for row in 0..n {
        let rest: Vec<usize> = (row + 1..n).collect();
        let col = (0..n).find(|&col| {
            if !free[col] || !allowed(row, col) {
                return false;
            }
            free[col] = false;
            let ok = has_perfect_matching(&rest, &free, &allowed);
            free[col] = true;
            ok
        })?;
        free[col] = false;
        assignment.push(col);
    }
    Some(assignment)
}

/// Permutation minimizing the largest selected cost; among optimal
/// permutations the lexicographically smallest is returned.
pub fn bottleneck_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let all_rows: Vec<usize> = (0..n).collect();
    let feasible = |t: f64| has_perfect_matching(&all_rows, &vec![true; n], &|i, j| cost[i][j] <= t);
    // the largest level always admits every permutation
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(levels[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let t = levels[lo];
    lexicographic_matching(n, |i, j| cost[i][j] <= t).expect("threshold admits a matching")
}
