//! Sparse-table range-minimum queries: O(n log n) build, O(1) query.

#[derive(Debug, Clone)]
pub struct RangeMin {
    // table[j][i] = min of values[i .. i + 2^j]
    table: Vec<Vec<f64>>,
}

impl RangeMin {
    pub fn build(values: &[f64]) -> Self {
        let n = values.len();
        let levels = if n <= 1 {
            1
        } else {
            (usize::BITS - (n - 1).leading_zeros()) as usize + 1
        };
        let mut table = Vec::with_capacity(levels);
        table.push(values.to_vec());
        let mut len = 1usize;
        for _ in 1..levels {
            let prev = table.last().unwrap();
            let next_len = n.saturating_sub(2 * len).saturating_add(1);
            if next_len == 0 || 2 * len > n {
                break;
            }
            let mut row = Vec::with_capacity(next_len);
            for i in 0..next_len {
                row.push(prev[i].min(prev[i + len]));
            }
            table.push(row);
            len *= 2;
        }
        RangeMin { table }
    }

    /// Minimum over the inclusive index range [lo, hi].
    pub fn query(&self, lo: usize, hi: usize) -> f64 {
        assert!(lo <= hi && hi < self.table[0].len());
        let span = hi - lo + 1;
        let j = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let j = j.min(self.table.len() - 1);
        let len = 1usize << j;
        self.table[j][lo].min(self.table[j][hi + 1 - len])
    }
}

/// Integer variant used for contour label minima.
#[derive(Debug, Clone)]
pub struct RangeMinI64 {
    table: Vec<Vec<i64>>,
}

impl RangeMinI64 {
    pub fn build(values: &[i64]) -> Self {
        let n = values.len();
        let levels = if n <= 1 {
            1
        } else {
            (usize::BITS - (n - 1).leading_zeros()) as usize + 1
        };
        let mut table = Vec::with_capacity(levels);
        table.push(values.to_vec());
        let mut len = 1usize;
        for _ in 1..levels {
            let prev = table.last().unwrap();
            if 2 * len > n {
                break;
            }
            let next_len = n - 2 * len + 1;
            let mut row = Vec::with_capacity(next_len);
            for i in 0..next_len {
                row.push(prev[i].min(prev[i + len]));
            }
            table.push(row);
            len *= 2;
        }
        RangeMinI64 { table }
    }

    pub fn query(&self, lo: usize, hi: usize) -> i64 {
        assert!(lo <= hi && hi < self.table[0].len());
        let span = hi - lo + 1;
        let j = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let j = j.min(self.table.len() - 1);
        let len = 1usize << j;
        self.table[j][lo].min(self.table[j][hi + 1 - len])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn matches_naive_scan() {
        let mut rng = crate::rng::stream_rng(3, 0);
        for n in [1usize, 2, 3, 17, 100] {
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let rmq = RangeMin::build(&values);
            for lo in 0..n {
                for hi in lo..n {
                    let naive = values[lo..=hi].iter().cloned().fold(f64::MAX, f64::min);
                    assert_eq!(rmq.query(lo, hi), naive);
                }
            }
        }
    }

    #[test]
    fn integer_variant_matches_naive() {
        let mut rng = crate::rng::stream_rng(4, 0);
        let values: Vec<i64> = (0..137).map(|_| rng.random_range(-50..50)).collect();
        let rmq = RangeMinI64::build(&values);
        for lo in (0..137).step_by(7) {
            for hi in lo..137 {
                let naive = *values[lo..=hi].iter().min().unwrap();
                assert_eq!(rmq.query(lo, hi), naive);
            }
        }
    }
}
