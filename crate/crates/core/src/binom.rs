//! Exact binomial coefficients over any primitive integer type.

use num_traits::PrimInt;

/// `C(n, k)` with `C(n, k) = 0` for `k > n`. Returns `None` when an
/// intermediate value does not fit in `T`.
///
/// Uses the multiplicative recurrence `C(n, i+1) = C(n, i) * (n - i) / (i + 1)`,
/// which stays integral at every step. The product is reduced by a gcd first
/// so the only overflow reported is a genuine one.
pub fn binomial<T: PrimInt>(n: u64, k: u64) -> Option<T> {
    if k > n {
        return Some(T::zero());
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        // d divides a * num and gcd(a, d) = 1, so d divides num.
        debug_assert_eq!(num % d, 0);
        acc = a.checked_mul(num / d)?;
    }
    T::from(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![1u64]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u64; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn matches_pascal_triangle() {
        let rows = pascal(40);
        for (n, row) in rows.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binomial::<u64>(n as u64, k as u64), Some(c));
            }
            assert_eq!(binomial::<u64>(n as u64, n as u64 + 1), Some(0));
        }
    }

    #[test]
    fn small_types_report_overflow() {
        assert_eq!(binomial::<u8>(10, 5), Some(252));
        assert_eq!(binomial::<u8>(10, 4), Some(210));
        assert_eq!(binomial::<u8>(12, 6), None);
        assert_eq!(binomial::<i32>(16, 10), Some(8008));
        assert_eq!(binomial::<u64>(0, 1), Some(0));
        assert_eq!(binomial::<u64>(0, 0), Some(1));
    }
}
