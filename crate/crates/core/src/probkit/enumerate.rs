//! Deterministic combinatorial enumerations: permutations, compositions
//! (types), and type classes.

/// Advances `v` to its next lexicographic permutation; false when `v` was the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers,
/// in lexicographic order of the count vector.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=rem {
            cur.push(k);
            rec(rem - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Sequences over `0..counts.len()` with letter `s` appearing `counts[s]` times,
/// in lexicographic order (the type class of `counts`).
pub fn type_class(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = counts.iter().enumerate().flat_map(|(s, &c)| std::iter::repeat_n(s, c)).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Multinomial coefficient `(Σc)! / Π c!`, exact.
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut seen = 0u128;
    for &c in counts {
        for k in 1..=c as u128 {
            seen += 1;
            acc = acc * seen / k;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn compositions_are_lexicographic() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(4, 3).len(), 15);
    }

    #[test]
    fn type_class_size_matches_multinomial() {
        for counts in [vec![1, 1], vec![2, 2], vec![3, 0], vec![2, 1, 2]] {
            assert_eq!(type_class(&counts).len() as u128, multinomial(&counts));
        }
        assert_eq!(type_class(&[1, 1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(multinomial(&[10, 10]), 184_756);
    }
}
