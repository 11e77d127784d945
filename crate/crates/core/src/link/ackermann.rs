//! Ackermann's function tabulated up to a cap, with its inverses.

use crate::numeric::ceil_log2;

/// `A_i(j)` for `i, j ∈ 1..=K`, `K = max(⌈log n⌉, 4)`. Entries above the cap
/// read as `None`.
#[derive(Debug, Clone)]
pub struct AckermannTable {
    cap: u64,
    k: u32,
    /// Row-major, `(i−1)·K + (j−1)`.
    cells: Vec<Option<u64>>,
}

impl AckermannTable {
    pub fn new(cap: u64) -> Self {
        let cap = cap.max(2);
        let k = ceil_log2(cap).max(4);
        let ku = k as usize;
        let mut cells: Vec<Option<u64>> = vec![None; ku * ku];
        for j in 1..=k {
            cells[(j - 1) as usize] = (j < 64).then(|| 1u64 << j).filter(|&v| v <= cap);
        }
        for i in 2..=k as usize {
            cells[(i - 1) * ku] = Some(2);
            for j in 2..=ku {
                let inner = cells[(i - 1) * ku + j - 2];
                // An argument beyond K already gives A_{i−1} ≥ 2^arg > cap.
                cells[(i - 1) * ku + j - 1] = inner
                    .filter(|&t| t >= 1 && t <= k as u64)
                    .and_then(|t| cells[(i - 2) * ku + t as usize - 1]);
            }
        }
        AckermannTable { cap, k, cells }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Largest tabulated index.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `A_i(j)`, or `None` when it exceeds the cap. Any `j > K` exceeds it.
    pub fn a(&self, i: u32, j: u32) -> Option<u64> {
        assert!(i >= 1 && j >= 1, "Ackermann indices start at 1");
        if j > self.k {
            return None;
        }
        let i = i.min(self.k);
        self.cells[((i - 1) * self.k + j - 1) as usize]
    }

    /// `A_i(j) ≥ n`. An entry above the cap is at least every `n ≤ cap`.
    fn reaches(&self, i: u32, j: u32, n: u64) -> bool {
        self.a(i, j).is_none_or(|v| v >= n)
    }

    /// `a_i(n) = min{j : A_i(j) ≥ n}`.
    pub fn a_inv(&self, i: u32, n: u64) -> u32 {
        debug_assert!(n <= self.cap);
        (1..=self.k + 1).find(|&j| self.reaches(i, j, n)).unwrap()
    }

    /// `α(m, n) = min{i : A_i(4⌈m/n⌉) ≥ n}`.
    pub fn alpha(&self, m: u64, n: u64) -> u32 {
        assert!(m >= 1 && n >= 1);
        debug_assert!(n <= self.cap);
        let j = m.div_ceil(n).saturating_mul(4);
        if j > self.k as u64 {
            return 1;
        }
        (1..=self.k).find(|&i| self.reaches(i, j as u32, n)).unwrap_or(self.k)
    }

    /// Smallest size of an `ℓ`-tree in stage `σ ≥ 1`: `2A_ℓ(σ)`, `None` past the cap.
    pub fn stage_floor(&self, l: u32, sigma: u32) -> Option<u64> {
        self.a(l, sigma).map(|v| 2 * v)
    }

    /// The stage of an `ℓ`-tree with `s` nodes.
    pub fn stage_of(&self, l: u32, s: u64) -> u32 {
        if s < 4 {
            return 0;
        }
        let mut sigma = 1;
        while self.stage_floor(l, sigma + 1).is_some_and(|f| f <= s) {
            sigma += 1;
        }
        sigma
    }

    /// Checks the growth inequalities over the whole table, and the
    /// doubling bound on `α` at every breakpoint of `n`.
    pub fn check_inequalities(&self) -> Result<(), String> {
        let inf = |v: Option<u64>| v.unwrap_or(u64::MAX);
        let k = self.k;
        for i in 1..=k {
            for j in 1..k {
                let (lo, hi) = (self.a(i, j), self.a(i, j + 1));
                if lo.is_some() && inf(hi) < 2 * inf(lo) {
                    return Err(format!("A_{i}({}) < 2A_{i}({j})", j + 1));
                }
            }
        }
        for i in 1..k {
            for j in 4..=k {
                let rhs = if 2 * j <= k { self.a(i, 2 * j) } else { None };
                if rhs.is_none() && self.a(i + 1, j).is_some() || inf(self.a(i + 1, j)) < inf(rhs) {
                    return Err(format!("A_{}({j}) < A_{i}({})", i + 1, 2 * j));
                }
            }
        }
        let mut ns: Vec<u64> = vec![1, 2, self.cap];
        for &v in self.cells.iter().flatten() {
            ns.extend([v, v + 1].into_iter().filter(|&x| x <= self.cap));
        }
        ns.sort_unstable();
        ns.dedup();
        for &n in &ns {
            for q in 1..=(k as u64 + 2) {
                let (m, base) = (q * n, self.alpha(q * n, n));
                if self.alpha(2 * m, n) + 1 < base || self.alpha(2 * m - n, n) + 1 < base {
                    return Err(format!("alpha drops by two when doubling m at n={n}"));
                }
                if self.alpha(m + n, n) > base || (n < self.cap && self.alpha(m, n + 1) < base) {
                    return Err(format!("alpha is not monotone at n={n}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = AckermannTable::new(1 << 20);
        assert_eq!(t.a(1, 3), Some(8));
        assert_eq!(t.a(2, 3), Some(16));
        assert_eq!(t.a(2, 4), Some(65536));
        assert_eq!(t.a(3, 3), Some(65536));
        assert_eq!(t.a(3, 4), None);
        assert_eq!(t.a(1, 21), None);
        for i in 1..=t.k() {
            assert_eq!(t.a(i, 1), Some(2));
            assert_eq!(t.a(i, 2), Some(4));
        }
    }

    #[test]
    fn alpha_examples() {
        let t = AckermannTable::new(1 << 20);
        assert_eq!(t.alpha(10, 10), 1);
        // A₂(4) = 65536 sits between the two.
        assert_eq!(t.alpha(60_000, 60_000), 2);
        assert_eq!(t.alpha(100_000, 100_000), 3);
        assert_eq!(t.alpha(1, 2), 1);
        assert_eq!(t.alpha(1, 1), 1);
        assert!(t.alpha(1, 1 << 20) <= 20);
    }

    #[test]
    fn inverse_examples() {
        let t = AckermannTable::new(1 << 20);
        assert_eq!(t.a_inv(1, 1000), 10);
        assert_eq!(t.a_inv(2, 17), 4);
        assert_eq!(t.a_inv(2, 16), 3);
        assert_eq!(t.a_inv(3, 4), 2);
    }

    #[test]
    fn stages() {
        let t = AckermannTable::new(1 << 20);
        assert_eq!(t.stage_of(3, 3), 0);
        assert_eq!(t.stage_of(3, 5), 1);
        assert_eq!(t.stage_of(1, 8), 2);
        assert_eq!(t.stage_of(1, 15), 2);
        assert_eq!(t.stage_of(1, 16), 3);
        assert_eq!(t.stage_of(2, 31), 2);
        assert_eq!(t.stage_of(2, 32), 3);
    }

    #[test]
    fn inequalities_hold() {
        for cap in [16, 1000, 1 << 20] {
            AckermannTable::new(cap).check_inequalities().unwrap();
        }
    }

    #[test]
    fn table_matches_direct_recursion() {
        fn direct(i: u32, j: u32, cap: u64) -> Option<u64> {
            if i == 1 {
                return (j < 64).then(|| 1u64 << j).filter(|&v| v <= cap);
            }
            if j == 1 {
                return Some(2);
            }
            let inner = direct(i, j - 1, cap)?;
            if inner > 64 {
                return None;
            }
            direct(i - 1, inner as u32, cap)
        }
        let t = AckermannTable::new(1 << 20);
        for i in 1..=t.k() {
            for j in 1..=t.k() {
                assert_eq!(t.a(i, j), direct(i, j, 1 << 20), "A_{i}({j})");
            }
        }
    }
}
