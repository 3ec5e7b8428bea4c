/// Bins used for real-valued strengths.
pub const ENTROPY_BINS: usize = 16;

/// Shannon entropy (bits) of the empirical distribution over distinct values.
pub fn degree_entropy(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut counts = Vec::new();
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            counts.push(run);
            run = 1;
        }
    }
    counts.push(run);
    entropy_of_counts(&counts, values.len())
}

/// Entropy after sorting values into `bins` equal-width bins over [min, max].
pub fn binned_entropy(values: &[f64], bins: usize) -> f64 {
    if values.is_empty() || bins == 0 {
        return 0.0;
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let span = hi - lo;
    if !(span > 1e-12 * hi.abs().max(1.0)) {
        return 0.0;
    }
    let mut counts = vec![0usize; bins];
    for &x in values {
        let b = (((x - lo) / span) * bins as f64).floor() as usize;
        counts[b.min(bins - 1)] += 1;
    }
    entropy_of_counts(&counts, values.len())
}

/// Distinct-value entropy for integral data, binned entropy otherwise.
pub fn strength_entropy(values: &[f64]) -> f64 {
    if values.iter().all(|x| x.fract() == 0.0) {
        degree_entropy(values)
    } else {
        binned_entropy(values, ENTROPY_BINS)
    }
}

fn entropy_of_counts(counts: &[usize], total: usize) -> f64 {
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}
