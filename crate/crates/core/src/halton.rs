//! Halton low-discrepancy points in the unit cube.

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// Deterministic 3-D Halton stream. `offset` skips the leading points, which
/// doubles as the seed.
#[derive(Debug, Clone)]
pub struct Halton3 {
    next: u64,
    bases: [u64; 3],
}

impl Halton3 {
    pub fn new(offset: u64) -> Self {
        Halton3 { next: offset + 1, bases: [PRIMES[0], PRIMES[1], PRIMES[2]] }
    }

    /// Uses the primes starting at position `first` (0 → bases 2, 3, 5).
    pub fn with_bases(offset: u64, first: usize) -> Self {
        let first = first.min(PRIMES.len() - 3);
        Halton3 { next: offset + 1, bases: [PRIMES[first], PRIMES[first + 1], PRIMES[first + 2]] }
    }
}

impl Iterator for Halton3 {
    type Item = [f64; 3];

    fn next(&mut self) -> Option<[f64; 3]> {
        let i = self.next;
        self.next += 1;
        Some([
            radical_inverse(i, self.bases[0]),
            radical_inverse(i, self.bases[1]),
            radical_inverse(i, self.bases[2]),
        ])
    }
}
