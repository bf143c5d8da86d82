/// Largest n accepted by the partition routines.
pub const MAX_PARTITION_N: usize = 60;

fn visit(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if rest == 0 {
        out(current);
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        current.push(part);
        visit(rest - part, part, current, out);
        current.pop();
    }
}

/// All partitions of n as nonincreasing part lists, in reverse lexicographic
/// order (n itself first).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    assert!(n <= MAX_PARTITION_N, "n = {n} is above {MAX_PARTITION_N}");
    let mut out = Vec::new();
    visit(n, n, &mut Vec::new(), &mut |p| out.push(p.to_vec()));
    out
}

/// Number of partitions of n, including the trivial one, by enumeration.
pub fn partition_count(n: usize) -> u64 {
    assert!(n <= MAX_PARTITION_N, "n = {n} is above {MAX_PARTITION_N}");
    let mut count = 0u64;
    visit(n, n, &mut Vec::new(), &mut |_| count += 1);
    count
}

/// Hardy–Ramanujan asymptotic `exp(π√(2n/3)) / (4n√3)`.
pub fn hr_estimate(n: usize) -> f64 {
    let n = n as f64;
    (std::f64::consts::PI * (2.0 * n / 3.0).sqrt()).exp() / (4.0 * n * 3f64.sqrt())
}
