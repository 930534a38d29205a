//! All simple graphs on `n <= 6` vertices up to isomorphism.
//!
//! Labeled graphs are bitmasks over the vertex pairs. Masks are visited in increasing
//! order and each unvisited mask marks its whole orbit under vertex permutations, so
//! every class is represented by its smallest mask.

pub const MAX_ISO_N: usize = 6;

#[allow(clippy::needless_range_loop)]
fn pair_table(n: usize) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let mut pairs = Vec::new();
    let mut index = vec![vec![usize::MAX; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            index[u][v] = pairs.len();
            index[v][u] = pairs.len();
            pairs.push((u, v));
        }
    }
    (pairs, index)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Edge lists (sorted pairs) of one representative per isomorphism class.
///
/// Panics if `n > MAX_ISO_N`.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n <= MAX_ISO_N, "isomorphism classes only enumerated up to n = {MAX_ISO_N}");
    let (pairs, index) = pair_table(n);
    let perms = permutations(n);
    // mapped[p][i]: where pair i goes under permutation p
    let mapped: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index[p[u]][p[v]]).collect())
        .collect();
    let total = 1usize << pairs.len();
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for m in &mapped {
            let mut image = 0usize;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                image |= 1 << m[i];
            }
            seen[image] = true;
        }
        reps.push((0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect());
    }
    reps
}
