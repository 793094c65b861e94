//! Small helpers over `FixedBitSet`, which backs every point and arrow set.

use fixedbitset::FixedBitSet;

pub type Bits = FixedBitSet;

pub fn empty(len: usize) -> Bits {
    FixedBitSet::with_capacity(len)
}

pub fn full(len: usize) -> Bits {
    let mut b = FixedBitSet::with_capacity(len);
    b.insert_range(..);
    b
}

pub fn from_iter<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Bits {
    let mut b = FixedBitSet::with_capacity(len);
    for i in items {
        b.insert(i);
    }
    b
}

pub fn singleton(len: usize, i: usize) -> Bits {
    from_iter(len, [i])
}

pub fn union(a: &Bits, b: &Bits) -> Bits {
    let mut out = a.clone();
    out.union_with(b);
    out
}

pub fn intersection(a: &Bits, b: &Bits) -> Bits {
    let mut out = a.clone();
    out.intersect_with(b);
    out
}

pub fn difference(a: &Bits, b: &Bits) -> Bits {
    let mut out = a.clone();
    out.difference_with(b);
    out
}

pub fn to_vec(b: &Bits) -> Vec<usize> {
    b.ones().collect()
}

/// Low 64 members of `b` as a mask. Callers guard the universe size.
pub fn to_mask(b: &Bits) -> u64 {
    b.ones().filter(|&i| i < 64).fold(0u64, |m, i| m | (1 << i))
}

pub fn from_mask(len: usize, mask: u64) -> Bits {
    from_iter(len, (0..len.min(64)).filter(|i| mask >> i & 1 == 1))
}

/// Renders `{a, b, c}` using the given names, in index order.
pub fn fmt_named(b: &Bits, names: &[String]) -> String {
    let parts: Vec<&str> = b.ones().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", parts.join(", "))
}
