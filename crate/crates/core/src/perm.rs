//! Permutations on up to six points and precomputed symmetric-group tables.
//!
//! Groups of degree 3..=6 are small enough that the whole symmetric group is
//! materialized once, with multiplication and inversion tables indexed by the
//! position of each element in a sorted list. Subgroups are then just sorted
//! index lists plus a fixed-size bitset, which keeps closure and conjugacy
//! tests cheap.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Maximum supported degree of a permutation action.
pub const MAX_DEGREE: usize = 6;

/// Maximum order of a materialized symmetric group (6!).
pub const MAX_ORDER: usize = 720;

/// A permutation of `{0, .., degree-1}`, padded with fixed points up to
/// [`MAX_DEGREE`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Perm {
    map: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity() -> Self {
        Perm { map: [0, 1, 2, 3, 4, 5] }
    }

    /// Builds a permutation from images of `0..degree`; points beyond the
    /// slice are fixed.
    pub fn from_images(images: &[u8]) -> Self {
        let mut map = [0u8, 1, 2, 3, 4, 5];
        map[..images.len()].copy_from_slice(images);
        debug_assert!(is_bijection(&map));
        Perm { map }
    }

    #[inline]
    pub fn apply(&self, point: u8) -> u8 {
        self.map[point as usize]
    }

    /// `self` after `other`: `(self * other)(x) = self(other(x))`.
    #[inline]
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut map = [0u8; MAX_DEGREE];
        for (i, m) in map.iter_mut().enumerate() {
            *m = self.map[other.map[i] as usize];
        }
        Perm { map }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = [0u8; MAX_DEGREE];
        for (i, &im) in self.map.iter().enumerate() {
            map[im as usize] = i as u8;
        }
        Perm { map }
    }

    /// Number of fixed points among the first `degree` points.
    pub fn fixed_points(&self, degree: usize) -> u32 {
        self.map[..degree]
            .iter()
            .enumerate()
            .filter(|(i, &im)| im as usize == *i)
            .count() as u32
    }

    /// Multiplicative order of the permutation.
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut n = 1;
        while acc != Perm::identity() {
            acc = acc.compose(self);
            n += 1;
        }
        n
    }

    /// True if the permutation is even.
    pub fn is_even(&self, degree: usize) -> bool {
        let mut seen = [false; MAX_DEGREE];
        let mut transpositions = 0usize;
        for start in 0..degree {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.map[cur] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }
}

fn is_bijection(map: &[u8; MAX_DEGREE]) -> bool {
    let mut seen = [false; MAX_DEGREE];
    for &im in map {
        if (im as usize) >= MAX_DEGREE || seen[im as usize] {
            return false;
        }
        seen[im as usize] = true;
    }
    true
}

/// Bitset over element indices of a materialized symmetric group.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct ElemSet {
    words: [u64; (MAX_ORDER + 63) / 64],
}

impl ElemSet {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn insert(&mut self, idx: u16) {
        self.words[(idx / 64) as usize] |= 1u64 << (idx % 64);
    }

    #[inline]
    pub fn contains(&self, idx: u16) -> bool {
        self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Materialized symmetric group of a given degree with lookup tables.
pub struct SymmetricGroup {
    pub degree: usize,
    /// All `degree!` elements in sorted order.
    pub elems: Vec<Perm>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    index: BTreeMap<Perm, u16>,
}

impl SymmetricGroup {
    pub fn new(degree: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&degree));
        let mut elems = Vec::new();
        let mut images: Vec<u8> = (0..degree as u8).collect();
        permute_all(&mut images, 0, &mut elems);
        elems.sort();
        let index: BTreeMap<Perm, u16> =
            elems.iter().enumerate().map(|(i, &p)| (p, i as u16)).collect();
        let n = elems.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                mul.push(index[&a.compose(b)]);
            }
        }
        let inv = elems.iter().map(|p| index[&p.inverse()]).collect();
        SymmetricGroup { degree, elems, mul, inv, index }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.elems.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u16> {
        self.index.get(p).copied()
    }

    /// `s a s^{-1}` by table lookups.
    #[inline]
    pub fn conj(&self, s: u16, a: u16) -> u16 {
        self.mul(self.mul(s, a), self.inv(s))
    }

    /// Closure of a set of generators as a sorted index list.
    pub fn closure(&self, generators: &[u16]) -> Vec<u16> {
        let id = self.index[&Perm::identity()];
        let mut set = ElemSet::new();
        set.insert(id);
        let mut elems = alloc::vec![id];
        let mut frontier = alloc::vec![id];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// True if the subgroup given by element indices acts transitively.
    pub fn is_transitive(&self, elems: &[u16]) -> bool {
        let mut reached = [false; MAX_DEGREE];
        reached[0] = true;
        let mut count = 1;
        for &e in elems {
            let im = self.elems[e as usize].apply(0) as usize;
            if !reached[im] {
                reached[im] = true;
                count += 1;
            }
        }
        // A group orbit is closed, so the orbit of point 0 is exactly the
        // set of images of 0 under all elements.
        count == self.degree
    }
}

fn permute_all(images: &mut Vec<u8>, k: usize, out: &mut Vec<Perm>) {
    if k == images.len() {
        out.push(Perm::from_images(images));
        return;
    }
    for i in k..images.len() {
        images.swap(k, i);
        permute_all(images, k + 1, out);
        images.swap(k, i);
    }
}
