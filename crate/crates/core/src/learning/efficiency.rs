use serde::Serialize;

use super::generalization::GeneralizationTable;
use super::proxy::Proxy;
use crate::set_core::Language;

/// The sample-efficiency sum, with the mismatch counts behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Efficiency {
    /// `Σ |g - a| - |g - b|` over ordered statement pairs; negative favours `a`.
    pub value: i64,
    /// Pairs where `a` disagrees with `<_g`.
    pub mismatches_a: u64,
    /// Pairs where `b` disagrees with `<_g`.
    pub mismatches_b: u64,
    pub pairs: u64,
}

/// Compares two proxies against `<_g` over every ordered pair of statements.
pub fn sample_efficiency_with(
    lang: &Language,
    table: &GeneralizationTable,
    a: &Proxy,
    b: &Proxy,
) -> Efficiency {
    let ma = a.matrix(lang);
    let mb = b.matrix(lang);
    sample_efficiency_matrices(lang.len(), table, &ma, &mb)
}

/// As [`sample_efficiency_with`] for precomputed relation matrices.
pub fn sample_efficiency_matrices(
    n: usize,
    table: &GeneralizationTable,
    ma: &[u64],
    mb: &[u64],
) -> Efficiency {
    let mut mismatches_a = 0u64;
    let mut mismatches_b = 0u64;
    for i in 0..n {
        let g_row = (0..n).fold(0u64, |row, j| row | u64::from(table.less_index(i, j)) << j);
        mismatches_a += u64::from((g_row ^ ma[i]).count_ones());
        mismatches_b += u64::from((g_row ^ mb[i]).count_ones());
    }
    Efficiency {
        value: mismatches_a as i64 - mismatches_b as i64,
        mismatches_a,
        mismatches_b,
        pairs: (n * n) as u64,
    }
}

/// The sample-efficiency sum of `a` against `b`; negative means `a` is more
/// sample efficient.
pub fn sample_efficiency(lang: &Language, a: &Proxy, b: &Proxy) -> i64 {
    let table = GeneralizationTable::counted(lang);
    sample_efficiency_with(lang, &table, a, b).value
}
