//! Bit-selection rules over a metric vector. Ties always go to the lowest
//! index.

use std::cmp::Ordering;

/// Index of the largest value, lowest index on ties. `None` for an empty
/// slice.
pub fn argmax(metrics: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &e) in metrics.iter().enumerate() {
        match best {
            Some(b) if metrics[b] >= e => {}
            _ => best = Some(i),
        }
    }
    best
}

/// The `lambda` largest entries, ordered by decreasing value then
/// increasing index. Returns fewer than `lambda` only when the slice is
/// shorter.
pub fn top_lambda(metrics: &[f64], lambda: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..metrics.len()).collect();
    let by_rank =
        |a: &usize, b: &usize| -> Ordering { metrics[*b].total_cmp(&metrics[*a]).then(a.cmp(b)) };
    let take = lambda.min(order.len());
    if take == 0 {
        return Vec::new();
    }
    if take < order.len() {
        order.select_nth_unstable_by(take - 1, by_rank);
        order.truncate(take);
    }
    order.sort_unstable_by(by_rank);
    order
}

/// Per-block argmax over contiguous `p`-length blocks starting at index 0.
///
/// When `p` does not divide the length the final block is implicitly padded
/// with null metrics, which never win; so every block yields exactly one
/// index drawn from real positions.
pub fn block_argmaxes(metrics: &[f64], p: usize) -> Vec<usize> {
    assert!(p >= 1, "block length must be positive");
    metrics
        .chunks(p)
        .enumerate()
        .map(|(b, chunk)| b * p + argmax(chunk).expect("chunks are non-empty"))
        .collect()
}

/// Length after padding up to a multiple of `p`.
pub fn padded_len(n: usize, p: usize) -> usize {
    n.div_ceil(p) * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn argmax_ties_take_lowest() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax(&[0.0; 5]), Some(0));
        assert_eq!(argmax(&[]), None);
        assert_eq!(argmax(&[f64::NEG_INFINITY, -1.0]), Some(1));
    }

    #[test]
    fn top_lambda_orders_by_value_then_index() {
        let e = [0.5, 2.0, -1.0, 2.0, 0.5];
        assert_eq!(top_lambda(&e, 3), vec![1, 3, 0]);
        assert_eq!(top_lambda(&e, 10), vec![1, 3, 0, 4, 2]);
        assert!(top_lambda(&e, 0).is_empty());
    }

    #[test]
    fn blocks_with_tail_padding() {
        let e = [1.0, 4.0, 2.0, 9.0, 0.0, -3.0, 5.0];
        assert_eq!(block_argmaxes(&e, 3), vec![1, 3, 6]);
        assert_eq!(block_argmaxes(&e, 7), vec![3]);
        assert_eq!(padded_len(1023, 31), 1023);
        assert_eq!(padded_len(255, 16), 256);
        assert_eq!(padded_len(7, 3), 9);
    }

    proptest! {
        #[test]
        fn top_lambda_matches_repeated_argmax(
            e in prop::collection::vec(prop::sample::select(vec![-2.0, -1.0, 0.0, 0.5, 1.0, 3.0]), 1..60),
            lambda in 1usize..20,
        ) {
            let mut work = e.clone();
            let mut expected = Vec::new();
            for _ in 0..lambda.min(e.len()) {
                let i = argmax(&work).unwrap();
                expected.push(i);
                work[i] = f64::NEG_INFINITY;
            }
            prop_assert_eq!(top_lambda(&e, lambda), expected);
        }
    }
}
