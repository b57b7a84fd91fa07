//! Finite relations coded by reals with the diagonal pairing.

pub fn pair(n: usize, k: usize) -> usize {
    (n + k) * (n + k + 1) / 2 + k
}

/// `rel[n][k]` means n is related to k.
pub fn code(rel: &[Vec<bool>]) -> Vec<bool> {
    let m = rel.len();
    let mut bits = vec![false; if m == 0 { 0 } else { pair(m - 1, m - 1) + 1 }];
    for n in 0..m {
        for k in 0..m {
            if rel[n][k] {
                bits[pair(n, k)] = true;
            }
        }
    }
    bits
}

/// Reflexive linear order on its field with no infinite descent. On a
/// finite field the descent check is the search for a least element,
/// repeated until the field is used up.
pub fn is_well_order(rel: &[Vec<bool>]) -> bool {
    let m = rel.len();
    let field: Vec<usize> = (0..m).filter(|&i| rel[i][i]).collect();
    for n in 0..m {
        for k in 0..m {
            if rel[n][k] && !(rel[n][n] && rel[k][k]) {
                return false;
            }
        }
    }
    for &a in &field {
        for &b in &field {
            if a != b && rel[a][b] && rel[b][a] {
                return false;
            }
            if !rel[a][b] && !rel[b][a] {
                return false;
            }
            for &c in &field {
                if rel[a][b] && rel[b][c] && !rel[a][c] {
                    return false;
                }
            }
        }
    }
    let mut left = field;
    while !left.is_empty() {
        let least = left.iter().position(|&a| left.iter().all(|&b| b == a || !rel[b][a]));
        match least {
            Some(i) => {
                left.remove(i);
            }
            None => return false,
        }
    }
    true
}
