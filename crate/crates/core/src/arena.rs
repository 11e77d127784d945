//! One backing store holding many growing arrays, with doubling relocation.

/// Handle to one array inside an [`Arena`]. Stable across relocations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArrayHandle(u32);

#[derive(Debug, Clone, Copy)]
struct Desc {
    offset: usize,
    half: usize,
    len: usize,
}

/// Growing arrays packed into one flat store of at most `4 · total_live` cells.
///
/// A new array owns 2 cells, both counted as live. A push into an array with
/// `len == 2s` moves it to a fresh region of `4s` cells at the end of the store.
/// Old regions are abandoned; only [`Arena::reset`] reclaims space.
#[derive(Debug, Clone, Default)]
pub struct Arena<T> {
    cells: Vec<T>,
    arrays: Vec<Desc>,
    live: usize,
    copied: usize,
    pushes: usize,
}

impl<T: Copy + Default> Arena<T> {
    pub fn new() -> Self {
        Arena { cells: Vec::new(), arrays: Vec::new(), live: 0, copied: 0, pushes: 0 }
    }

    pub fn new_array(&mut self) -> ArrayHandle {
        let offset = self.cells.len();
        self.cells.resize(offset + 2, T::default());
        self.arrays.push(Desc { offset, half: 1, len: 2 });
        self.live += 2;
        self.check();
        ArrayHandle(self.arrays.len() as u32 - 1)
    }

    /// Appends `v` and returns its index.
    pub fn push(&mut self, h: ArrayHandle, v: T) -> usize {
        let d = self.arrays[h.0 as usize];
        let mut d2 = d;
        if d.len == 2 * d.half {
            let offset = self.cells.len();
            self.cells.resize(offset + 4 * d.half, T::default());
            self.cells.copy_within(d.offset..d.offset + d.len, offset);
            self.copied += d.len;
            d2.offset = offset;
            d2.half = 2 * d.half;
        }
        self.cells[d2.offset + d2.len] = v;
        d2.len += 1;
        self.arrays[h.0 as usize] = d2;
        self.live += 1;
        self.pushes += 1;
        self.check();
        d2.len - 1
    }

    #[inline]
    pub fn get(&self, h: ArrayHandle, i: usize) -> T {
        let d = &self.arrays[h.0 as usize];
        debug_assert!(i < d.len);
        self.cells[d.offset + i]
    }

    #[inline]
    pub fn set(&mut self, h: ArrayHandle, i: usize, v: T) {
        let d = self.arrays[h.0 as usize];
        assert!(i < d.len, "arena index {i} out of bounds for length {}", d.len);
        self.cells[d.offset + i] = v;
    }

    pub fn len(&self, h: ArrayHandle) -> usize {
        self.arrays[h.0 as usize].len
    }

    pub fn capacity(&self, h: ArrayHandle) -> usize {
        2 * self.arrays[h.0 as usize].half
    }

    pub fn as_slice(&self, h: ArrayHandle) -> &[T] {
        let d = &self.arrays[h.0 as usize];
        &self.cells[d.offset..d.offset + d.len]
    }

    /// Cells consumed by the backing store, abandoned regions included.
    pub fn used(&self) -> usize {
        self.cells.len()
    }

    /// `Σ nᵢ` over all arrays.
    pub fn total_live(&self) -> usize {
        self.live
    }

    /// Cells moved by relocations so far.
    pub fn copied(&self) -> usize {
        self.copied
    }

    pub fn pushes(&self) -> usize {
        self.pushes
    }

    pub fn arrays(&self) -> usize {
        self.arrays.len()
    }

    pub fn invariant_holds(&self) -> bool {
        self.cells.len() <= 4 * self.live && self.copied <= 2 * self.pushes
    }

    #[inline]
    fn check(&self) {
        debug_assert!(self.invariant_holds(), "arena used {} > 4 * {}", self.cells.len(), self.live);
    }

    pub fn reset(&mut self) {
        self.cells.clear();
        self.arrays.clear();
        self.live = 0;
        self.copied = 0;
        self.pushes = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_array_usage() {
        let mut a: Arena<u32> = Arena::new();
        let h = a.new_array();
        assert_eq!((a.capacity(h), a.used(), a.total_live()), (2, 2, 2));
        a.new_array();
        assert_eq!(a.used(), 4);
        for _ in 2..1000 {
            a.new_array();
        }
        assert_eq!(a.used(), 2000);
        assert!(a.used() <= 4 * a.total_live());
    }

    #[test]
    fn push_relocates_when_full() {
        let mut a: Arena<u32> = Arena::new();
        let h = a.new_array();
        a.set(h, 0, 7);
        a.set(h, 1, 8);
        let other = a.new_array();
        a.set(other, 0, 1);
        assert_eq!(a.push(h, 9), 2);
        assert_eq!(a.capacity(h), 4);
        assert_eq!(a.as_slice(h), &[7, 8, 9]);
        assert_eq!(a.as_slice(other), &[1, 0]);
        let used = a.used();
        a.push(h, 10);
        assert_eq!(a.used(), used);
        assert_eq!(a.as_slice(h), &[7, 8, 9, 10]);
    }

    #[test]
    fn many_pushes_amortize() {
        let mut a: Arena<u64> = Arena::new();
        let h = a.new_array();
        let k = 100_000usize;
        for i in 0..k {
            a.push(h, i as u64);
            assert!(a.invariant_holds());
        }
        assert!(a.copied() <= 2 * k);
        assert!(a.copied() <= 2 * a.pushes());
        assert!(a.used() <= 4 * k);
        assert!(a.as_slice(h)[2..].iter().enumerate().all(|(i, &v)| v == i as u64));
    }

    #[test]
    fn reset_clears() {
        let mut a: Arena<u8> = Arena::new();
        let h = a.new_array();
        a.push(h, 1);
        a.reset();
        assert_eq!((a.used(), a.total_live(), a.arrays()), (0, 0, 0));
    }
}
