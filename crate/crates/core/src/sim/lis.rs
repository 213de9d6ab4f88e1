use super::points::PointSet;

/// Longest directed path through the points, ending at `(0, t)`.
///
/// A point can follow another when it lies in its forward light cone, i.e.
/// `y+` increases and `y-` decreases; only points whose cone contains
/// `(0, t)` (`y+ <= 0 <= y-`) count. Patience sorting, `O(N log N)`.
pub fn lis_length(points: &PointSet) -> usize {
    // Points are sorted by y+, so this is a longest strictly increasing
    // subsequence of -y-.
    let mut tails: Vec<f64> = Vec::new();
    for &(p, q) in points.points() {
        if p > 0.0 || q < 0.0 {
            continue;
        }
        let v = -q;
        let k = tails.partition_point(|&x| x < v);
        if k == tails.len() {
            tails.push(v);
        } else {
            tails[k] = v;
        }
    }
    tails.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_configurations() {
        assert_eq!(lis_length(&PointSet::new(vec![], 1.0).unwrap()), 0);
        assert_eq!(
            lis_length(&PointSet::new(vec![(-0.1, 0.2)], 1.0).unwrap()),
            1
        );
        // nested chain
        let chain: Vec<_> = (1..=5)
            .map(|k| (-1.0 + 0.1 * k as f64, 1.0 - 0.1 * k as f64))
            .collect();
        assert_eq!(lis_length(&PointSet::new(chain, 1.0).unwrap()), 5);
        // outside the backward cone of the origin
        assert_eq!(
            lis_length(&PointSet::new(vec![(0.1, 0.2)], 1.0).unwrap()),
            0
        );
    }
}
