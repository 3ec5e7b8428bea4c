//! Directed triad census (Batagelj–Mrvar subquadratic algorithm).

use crate::graph::{BitAdjacency, Graph};

/// Triad class labels in census order.
pub const TRIAD_CLASSES: [&str; 16] = [
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D",
    "120U", "120C", "210", "300",
];

// Class index for each 6-bit tricode of an ordered triple (v, u, w):
// bit0 v→u, bit1 u→v, bit2 v→w, bit3 w→v, bit4 u→w, bit5 w→u.
const TRICODE_CLASS: [u8; 64] = [
    0, 1, 1, 2, 1, 3, 5, 7, 1, 5, 4, 6, 2, 7, 6, 10, 1, 5, 3, 7, 4, 8, 8, 12, 5, 9, 8, 13, 6, 13,
    11, 14, 1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12, 13, 14, 2, 6, 7, 10, 6, 11, 13, 14, 7,
    13, 12, 14, 10, 14, 14, 15,
];

#[inline]
fn tricode(d: &BitAdjacency, v: usize, u: usize, w: usize) -> usize {
    usize::from(d.get(v, u))
        | usize::from(d.get(u, v)) << 1
        | usize::from(d.get(v, w)) << 2
        | usize::from(d.get(w, v)) << 3
        | usize::from(d.get(u, w)) << 4
        | usize::from(d.get(w, u)) << 5
}

/// Counts of the 16 directed triad classes, in [`TRIAD_CLASSES`] order.
/// Self-loops are ignored. Sums to `C(n, 3)`.
pub fn triad_census(g: &Graph) -> [u64; 16] {
    let n = g.n();
    let directed = g.directed_bits();
    let und = g.undirected();
    let mut census = [0u64; 16];
    let words = und.row(0).len();
    let mut s = vec![0u64; words];

    for v in 0..n {
        for u in und.neighbors(v).filter(|&u| u > v) {
            for (k, word) in s.iter_mut().enumerate() {
                *word = und.row(u)[k] | und.row(v)[k];
            }
            s[u / 64] &= !(1 << (u % 64));
            s[v / 64] &= !(1 << (v % 64));
            let size: usize = s.iter().map(|w| w.count_ones() as usize).sum();
            let dyad = if directed.get(v, u) && directed.get(u, v) { 2 } else { 1 };
            census[dyad] += (n - size - 2) as u64;
            for (k, &word) in s.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let w = k * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if u < w || (v < w && w < u && !und.get(v, w)) {
                        census[TRICODE_CLASS[tricode(&directed, v, u, w)] as usize] += 1;
                    }
                }
            }
        }
    }
    let total = binomial(n as u64, 3);
    let counted: u64 = census[1..].iter().sum();
    census[0] = total - counted;
    census
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_all_003() {
        let g = Graph::new(5).unwrap();
        let mut expect = [0u64; 16];
        expect[0] = 10;
        assert_eq!(triad_census(&g), expect);
    }

    #[test]
    fn complete_mutual_triad_is_300() {
        let g = Graph::from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        let mut expect = [0u64; 16];
        expect[15] = 1;
        assert_eq!(triad_census(&g), expect);
    }

    #[test]
    fn directed_cycle_is_030c() {
        let g = Graph::from_pairs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(triad_census(&g)[9], 1);
        assert_eq!(triad_census(&g).iter().sum::<u64>(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(50, 4), 230_300);
        assert_eq!(binomial(2, 3), 0);
    }
}
