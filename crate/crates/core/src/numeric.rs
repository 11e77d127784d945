//! Wide ordinals, exact rationals, power thresholds for `⌊log_β r⌋`, and bit scans.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::error::{NcaError, Result};

/// Fat preorder numbers.
pub type Ordinal = u128;

/// A positive rational `num/den`, compared by cross multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(NcaError::ZeroDenominator);
        }
        Ok(Rational { num, den })
    }

    pub const fn from_int(v: u64) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn to_big(self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.num.into(), self.den.into())
    }

    /// `self · j ≤ k`.
    pub fn mul_le(self, j: u64, k: u64) -> bool {
        (self.num as u128) * (j as u128) <= (self.den as u128) * (k as u128)
    }
}

pub fn cmp_rational(a: Rational, b: Rational) -> Result<Ordering> {
    if a.den == 0 || b.den == 0 {
        return Err(NcaError::ZeroDenominator);
    }
    Ok(((a.num as u128) * (b.den as u128)).cmp(&((b.num as u128) * (a.den as u128))))
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_rational(*self, *other).expect("Rational is constructed with a nonzero denominator")
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `thresholds[i] = ⌈β^i⌉`, so for integer `r`, `β^i ≤ r` iff `thresholds[i] ≤ r`.
///
/// Thresholds are nondecreasing; consecutive entries can coincide while `β^i` is small.
#[derive(Debug, Clone)]
pub struct LogTable {
    base: Rational,
    thresholds: Vec<Ordinal>,
    base_two: bool,
}

impl LogTable {
    /// Table covering every `r ≤ max`.
    pub fn new(base: Rational, max: Ordinal) -> Result<Self> {
        if base.den == 0 {
            return Err(NcaError::ZeroDenominator);
        }
        if base.num <= base.den {
            return Err(NcaError::Config(format!("log base {base} must exceed 1")));
        }
        let num = BigUint::from(base.num);
        let den = BigUint::from(base.den);
        let mut pn = BigUint::from(1u32);
        let mut pd = BigUint::from(1u32);
        let mut thresholds = Vec::new();
        loop {
            let ceil: BigUint = (&pn + &pd - 1u32) / &pd;
            let t = u128::try_from(&ceil).unwrap_or(u128::MAX);
            thresholds.push(t);
            if t > max || t == u128::MAX {
                break;
            }
            pn *= &num;
            pd *= &den;
        }
        let base_two = base.num == 2 * base.den;
        Ok(LogTable { base, thresholds, base_two })
    }

    pub fn base(&self) -> Rational {
        self.base
    }

    pub fn thresholds(&self) -> &[Ordinal] {
        &self.thresholds
    }

    /// `⌈β^i⌉`; keys compare against it as `key < β^i` iff `key < threshold(i)`.
    #[inline]
    pub fn threshold(&self, i: usize) -> Ordinal {
        self.thresholds.get(i).copied().unwrap_or(u128::MAX)
    }

    /// Largest `i` with `β^i ≤ r`.
    #[inline]
    pub fn floor_log(&self, r: Ordinal) -> Result<u32> {
        if r == 0 {
            return Err(NcaError::ZeroArgument);
        }
        if self.base_two {
            return Ok(127 - r.leading_zeros());
        }
        let k = self.thresholds.partition_point(|&t| t <= r);
        if k == self.thresholds.len() {
            return Err(NcaError::Capacity(format!("{r} beyond log table range")));
        }
        Ok(k as u32 - 1)
    }
}

/// Index of the highest set bit, 0-based.
#[inline]
pub fn msb(b: u64) -> Result<u32> {
    if b == 0 {
        return Err(NcaError::ZeroArgument);
    }
    Ok(63 - b.leading_zeros())
}

/// Index of the lowest set bit, 0-based.
#[inline]
pub fn lsb(b: u64) -> Result<u32> {
    if b == 0 {
        return Err(NcaError::ZeroArgument);
    }
    Ok(b.trailing_zeros())
}

/// Table-driven msb/lsb over 16-bit chunks.
#[derive(Debug)]
pub struct BitTables {
    msb: Vec<u8>,
    lsb: Vec<u8>,
}

impl BitTables {
    fn build() -> Self {
        let mut msb = vec![0u8; 1 << 16];
        let mut lsb = vec![0u8; 1 << 16];
        for b in 1usize..(1 << 16) {
            msb[b] = if b == 1 { 0 } else { msb[b >> 1] + 1 };
            lsb[b] = if b & 1 == 1 { 0 } else { lsb[b >> 1] + 1 };
        }
        BitTables { msb, lsb }
    }

    pub fn get() -> &'static BitTables {
        static T: OnceLock<BitTables> = OnceLock::new();
        T.get_or_init(BitTables::build)
    }

    pub fn msb(&self, b: u64) -> Result<u32> {
        if b == 0 {
            return Err(NcaError::ZeroArgument);
        }
        for k in (0..4).rev() {
            let chunk = ((b >> (16 * k)) & 0xffff) as usize;
            if chunk != 0 {
                return Ok(16 * k + self.msb[chunk] as u32);
            }
        }
        unreachable!()
    }

    pub fn lsb(&self, b: u64) -> Result<u32> {
        if b == 0 {
            return Err(NcaError::ZeroArgument);
        }
        for k in 0..4 {
            let chunk = ((b >> (16 * k)) & 0xffff) as usize;
            if chunk != 0 {
                return Ok(16 * k + self.lsb[chunk] as u32);
            }
        }
        unreachable!()
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u32 {
    63 - n.max(1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive};

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(cmp_rational(r(10, 7), r(3, 2)).unwrap(), Ordering::Less);
        assert_eq!(cmp_rational(r(6, 5), r(12, 10)).unwrap(), Ordering::Equal);
        assert_eq!(cmp_rational(r(2, 1), r(10, 7)).unwrap(), Ordering::Greater);
        assert!(Rational::new(1, 0).is_err());
        assert_eq!(
            cmp_rational(Rational { num: 1, den: 0 }, r(1, 1)),
            Err(NcaError::ZeroDenominator)
        );
    }

    #[test]
    fn floor_log_examples() {
        let two = LogTable::new(r(2, 1), 1 << 40).unwrap();
        assert_eq!(two.floor_log(8).unwrap(), 3);
        assert_eq!(two.floor_log(0), Err(NcaError::ZeroArgument));
        let b = LogTable::new(r(10, 7), 1 << 40).unwrap();
        assert_eq!(b.floor_log(1).unwrap(), 0);
        assert_eq!(b.floor_log(2).unwrap(), 1);
        assert!(b.thresholds().windows(2).all(|w| w[0] <= w[1]));
    }

    fn exact_check(beta: Rational, rmax: u64) {
        let t = LogTable::new(beta, rmax as u128).unwrap();
        let b = beta.to_big();
        // Powers of β computed independently by repeated rational multiplication.
        let mut pows = vec![BigRational::one()];
        while pows.last().unwrap() <= &BigRational::from_integer(rmax.into()) {
            let next = pows.last().unwrap() * &b;
            pows.push(next);
        }
        let mut i = 0usize;
        for v in 1..=rmax {
            let rv = BigRational::from_integer(v.into());
            while pows[i + 1] <= rv {
                i += 1;
            }
            assert!(pows[i] <= rv && rv < pows[i + 1]);
            assert_eq!(t.floor_log(v as u128).unwrap() as usize, i, "r={v} beta={beta}");
        }
    }

    #[test]
    fn floor_log_exact_sweep() {
        for beta in [r(2, 1), r(10, 7), r(3, 2)] {
            exact_check(beta, 1_000_000);
        }
    }

    #[test]
    fn thresholds_are_ceilings() {
        let t = LogTable::new(r(10, 7), 1u128 << 100).unwrap();
        let b = r(10, 7).to_big();
        let mut p = BigRational::one();
        for &th in t.thresholds() {
            assert_eq!(p.ceil().to_integer().to_u128(), Some(th));
            p *= &b;
        }
        assert!(*t.thresholds().last().unwrap() > 1u128 << 100);
    }

    #[test]
    fn bit_examples() {
        let bt = BitTables::get();
        let hw: &dyn Fn(u64) -> Result<u32> = &msb;
        let tb: &dyn Fn(u64) -> Result<u32> = &|b| bt.msb(b);
        for f in [hw, tb] {
            assert_eq!(f(0b0110).unwrap(), 2);
            assert_eq!(f(1).unwrap(), 0);
            assert_eq!(f(1 << 40).unwrap(), 40);
            assert!(f(0).is_err());
        }
        let hw: &dyn Fn(u64) -> Result<u32> = &lsb;
        let tb: &dyn Fn(u64) -> Result<u32> = &|b| bt.lsb(b);
        for f in [hw, tb] {
            assert_eq!(f(0b0110).unwrap(), 1);
            assert_eq!(f(1).unwrap(), 0);
            assert!(f(0).is_err());
        }
    }

    #[test]
    fn bits_agree_with_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let bt = BitTables::get();
        for _ in 0..100_000 {
            let shift = rng.gen_range(0..64);
            let w: u64 = rng.gen::<u64>() >> shift;
            if w == 0 {
                continue;
            }
            let hi = (0..64).rev().find(|&i| w >> i & 1 == 1).unwrap();
            let lo = (0..64).find(|&i| w >> i & 1 == 1).unwrap();
            assert_eq!(msb(w).unwrap(), hi);
            assert_eq!(bt.msb(w).unwrap(), hi);
            assert_eq!(lsb(w).unwrap(), lo);
            assert_eq!(bt.lsb(w).unwrap(), lo);
        }
    }

    #[test]
    fn log2_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1 << 20), 20);
        assert_eq!(floor_log2(5), 2);
        assert_eq!(floor_log2(1 << 20), 20);
    }
}
