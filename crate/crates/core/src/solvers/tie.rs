use std::cmp::Ordering;

pub(crate) const EXACT_TIE_EPS: f64 = 1e-12;

/// Compares two spreads, treating values within a relative `eps` as equal.
pub(crate) fn cmp_values(a: f64, b: f64, eps: f64) -> Ordering {
    let scale = 1f64.max(a.abs()).max(b.abs());
    if (a - b).abs() <= eps * scale {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Lexicographic order on sorted index lists; a proper prefix is smaller.
pub(crate) fn lex_less(a: &[usize], b: &[usize]) -> bool {
    a < b
}

/// Position of the largest key; the earliest position wins ties.
pub(crate) fn argmax_by<T>(items: &[T], eps: f64, mut key: impl FnMut(&T) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, it) in items.iter().enumerate() {
        let k = key(it);
        match best {
            Some((_, bk)) if cmp_values(k, bk, eps) != Ordering::Greater => {}
            _ => best = Some((i, k)),
        }
    }
    best.map(|(i, _)| i)
}
