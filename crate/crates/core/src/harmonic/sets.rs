//! Exact integer arithmetic behind harmonic frame divisibility.

use serde::Serialize;

/// The sets `D`, `P` and `S` for a harmonic frame of `m` vectors in dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorSets {
    /// Divisors of `m` in `[n, m − n]`.
    #[serde(rename = "D")]
    pub d_set: Vec<usize>,
    /// Elements of `D` with no proper divisor in `D`.
    #[serde(rename = "P")]
    pub p_set: Vec<usize>,
    /// Sizes `s ∈ [n, m − n]` with `s` and `m − s` both sums of `P`-elements.
    #[serde(rename = "S")]
    pub s_set: Vec<usize>,
    #[serde(rename = "prime_factorization")]
    pub prime_factors_of_m: Vec<(usize, u32)>,
}

/// Prime factorization `m = Π p^α`, primes ascending.
pub fn factorize(mut m: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut alpha = 0;
            while m % p == 0 {
                m /= p;
                alpha += 1;
            }
            out.push((p, alpha));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `reach[v]` is true iff `v` is a nonnegative integer combination of `parts`.
pub(crate) fn representable_table(parts: &[usize], limit: usize) -> Vec<bool> {
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    for v in 1..=limit {
        reach[v] = parts.iter().any(|&p| p > 0 && p <= v && reach[v - p]);
    }
    reach
}

pub fn divisor_sets(n: usize, m: usize) -> DivisorSets {
    let d_set: Vec<usize> = if m >= 2 * n && n >= 1 {
        (n..=m - n).filter(|d| m % d == 0).collect()
    } else {
        Vec::new()
    };
    let p_set: Vec<usize> = d_set
        .iter()
        .copied()
        .filter(|&d| !d_set.iter().any(|&c| c < d && d % c == 0))
        .collect();
    let s_set = if p_set.is_empty() {
        Vec::new()
    } else {
        let reach = representable_table(&p_set, m);
        (n..=m - n).filter(|&s| reach[s] && reach[m - s]).collect()
    };
    DivisorSets {
        d_set,
        p_set,
        s_set,
        prime_factors_of_m: if m >= 1 { factorize(m) } else { Vec::new() },
    }
}

/// Whether `k` and `m − k` are both sums of the distinct primes dividing `m`.
pub fn is_balancing(m: usize, k: usize) -> bool {
    if k > m {
        return false;
    }
    let primes: Vec<usize> = factorize(m).into_iter().map(|(p, _)| p).collect();
    let reach = representable_table(&primes, m);
    reach[k] && reach[m - k]
}

/// Every representation `size = Σ a_k q_k` over `parts`, ordered by number
/// of parts and then by weight on larger parts. Each is a list of `(q, a)`
/// pairs with `a > 0`, largest `q` first.
pub(crate) fn representations(parts: &[usize], size: usize) -> Vec<Vec<(usize, usize)>> {
    let mut sorted: Vec<usize> = parts.iter().copied().filter(|&q| q > 0).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.dedup();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut counts = vec![0; sorted.len()];
    collect_counts(&sorted, 0, size, &mut counts, &mut found);
    // Fewest parts first; ties prefer the lexicographically larger count
    // vector over descending q.
    found.sort_by(|a, b| {
        let (ta, tb): (usize, usize) = (a.iter().sum(), b.iter().sum());
        ta.cmp(&tb).then_with(|| b.cmp(a))
    });
    found
        .into_iter()
        .map(|c| {
            sorted
                .iter()
                .zip(c)
                .filter(|(_, a)| *a > 0)
                .map(|(&q, a)| (q, a))
                .collect()
        })
        .collect()
}

fn collect_counts(
    parts: &[usize],
    idx: usize,
    rest: usize,
    counts: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if idx == parts.len() {
        if rest == 0 {
            out.push(counts.clone());
        }
        return;
    }
    for a in (0..=rest / parts[idx]).rev() {
        counts[idx] = a;
        collect_counts(parts, idx + 1, rest - a * parts[idx], counts, out);
    }
    counts[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(24), vec![(2, 3), (3, 1)]);
        assert_eq!(factorize(13), vec![(13, 1)]);
        assert_eq!(factorize(1), vec![]);
    }

    #[test]
    fn sets_for_nine_by_two() {
        let s = divisor_sets(2, 9);
        assert_eq!(s.d_set, vec![3]);
        assert_eq!(s.p_set, vec![3]);
        assert_eq!(s.s_set, vec![3, 6]);
    }

    #[test]
    fn sets_for_twenty_four_by_three() {
        let s = divisor_sets(3, 24);
        assert_eq!(s.d_set, vec![3, 4, 6, 8, 12]);
        assert_eq!(s.p_set, vec![3, 4]);
        let expected: Vec<usize> = (3..=21).filter(|&v| v != 5 && v != 19).collect();
        assert_eq!(s.s_set, expected);
    }

    #[test]
    fn sets_for_ten_by_four() {
        let s = divisor_sets(4, 10);
        assert_eq!((s.d_set.clone(), s.p_set.clone(), s.s_set.clone()), (vec![5], vec![5], vec![5]));
        assert_eq!(s.prime_factors_of_m, vec![(2, 1), (5, 1)]);
    }

    #[test]
    fn balancing_examples() {
        assert!(is_balancing(9, 3));
        assert!(!is_balancing(9, 4));
        assert!(!is_balancing(10, 7));
        for m in 2..30 {
            assert!(is_balancing(m, 0));
            assert!(is_balancing(m, m));
        }
        assert!(!is_balancing(1, 0));
    }

    fn fewest_parts(parts: &[usize], size: usize) -> Option<Vec<(usize, usize)>> {
        representations(parts, size).into_iter().next()
    }

    #[test]
    fn fewest_parts_prefers_large() {
        assert_eq!(fewest_parts(&[3, 4], 7), Some(vec![(4, 1), (3, 1)]));
        assert_eq!(fewest_parts(&[2, 3], 12), Some(vec![(3, 4)]));
        assert_eq!(fewest_parts(&[2, 3], 5), Some(vec![(3, 1), (2, 1)]));
        assert_eq!(fewest_parts(&[2], 8), Some(vec![(2, 4)]));
        assert_eq!(fewest_parts(&[3, 4], 5), None);
    }

    #[test]
    fn all_representations_in_preference_order() {
        assert_eq!(
            representations(&[2, 3], 12),
            vec![vec![(3, 4)], vec![(3, 2), (2, 3)], vec![(2, 6)]]
        );
        assert!(representations(&[4, 6], 7).is_empty());
    }
}
