//! Exact intersection numbers `σ(k, n)` of the complex Grassmannians
//! `Gr_k(Cⁿ)` inside the oriented real Grassmannian, and the tables built
//! from them.

use serde::{Deserialize, Serialize};

/// Largest `n` for which every `σ(k, n)` is guaranteed to fit in an `i64`.
pub const MAX_N: usize = 120;

fn binomial(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    i64::try_from(acc).expect("binomial overflows i64")
}

/// `σ(k, n)`: zero when `k` is odd and `n` even, `C(⌊n/2⌋, ⌊k/2⌋)` otherwise,
/// and zero outside `0 ≤ k ≤ n`.
pub fn sigma(k: i64, n: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    assert!(n as usize <= MAX_N, "n = {n} is outside the supported range");
    if k % 2 == 1 && n % 2 == 0 {
        0
    } else {
        binomial((n / 2) as u64, (k / 2) as u64)
    }
}

/// `s(k, n)` from the localisation recursion
/// `s(k, n) = (-1)^k s(k, n-1) + s(k-1, n-1)`, `s(0, n) = 1`,
/// `s(k, n) = 0` for `k > n` or `k < 0`. Filled iteratively row by row in `n`.
pub fn s_recursive(k: i64, n: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let (k, n) = (k as usize, n as usize);
    assert!(n <= MAX_N, "n = {n} is outside the supported range");
    // row[j] holds s(j, m) for the current m.
    let mut row = vec![0i64; k + 1];
    row[0] = 1;
    for _m in 1..=n {
        let prev = row.clone();
        for j in 1..=k {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            row[j] = sign * prev[j] + prev[j - 1];
        }
    }
    row[k]
}

/// Intersection numbers predicted for a pair, split by relative orientation
/// of the common planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub same: i64,
    pub opposite: i64,
}

/// Homological counts `([Gr^{J₀}]·[Gr^{J₁}], [Gr^{J₀}]·τ[Gr^{J₁}])` as stated:
/// `(σ(k,n), 0)` for a same-orientation pair and `(σ(k,n-1), σ(k-1,n-1))`
/// otherwise. For generic orthogonal pairs these are also the exact numbers
/// of common planes in each orientation class.
pub fn expected_counts(same_orientation: bool, n: i64, k: i64) -> ExpectedCounts {
    if same_orientation {
        ExpectedCounts { same: sigma(k, n), opposite: 0 }
    } else {
        ExpectedCounts { same: sigma(k, n - 1), opposite: sigma(k - 1, n - 1) }
    }
}

/// Sign that a transverse common plane contributes to the signed count, for a
/// generic orthogonal pair.
///
/// This is `+1` except on same-oriented planes of an opposite-orientation
/// pair with `n` even, where the tangent space of `Gr^{J₁}` picks up the
/// conjugate orientation on the `k`-dimensional summand along the `C̄` line,
/// giving `(-1)^k`.
pub fn orthogonal_local_sign(same_orientation_pair: bool, same_oriented_plane: bool, n: i64, k: i64) -> i64 {
    if !same_orientation_pair && same_oriented_plane && n % 2 == 0 && k % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Signed counts obtained by summing local signs over a transverse
/// intersection. Equal to [`expected_counts`] except for opposite-orientation
/// pairs with `n` even and `k` odd, where the same-orientation entry is
/// `-σ(k, n-1)`.
pub fn expected_signed_counts(same_orientation: bool, n: i64, k: i64) -> ExpectedCounts {
    let raw = expected_counts(same_orientation, n, k);
    ExpectedCounts {
        same: raw.same * orthogonal_local_sign(same_orientation, true, n, k),
        opposite: raw.opposite * orthogonal_local_sign(same_orientation, false, n, k),
    }
}

/// Grid of `σ(k, n)` for `0 ≤ k ≤ kmax`, `0 ≤ n ≤ nmax`; cells with `k > n`
/// are blank (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub kmax: usize,
    pub nmax: usize,
    pub rows: Vec<Vec<Option<i64>>>,
}

pub fn sigma_table(kmax: usize, nmax: usize) -> CountTable {
    assert!(kmax <= nmax, "kmax must not exceed nmax");
    let rows = (0..=kmax)
        .map(|k| (0..=nmax).map(|n| (k <= n).then(|| sigma(k as i64, n as i64))).collect())
        .collect();
    CountTable { kmax, nmax, rows }
}

impl CountTable {
    /// Plain-text grid with a `k \ n` header row, right-aligned columns.
    pub fn render_text(&self) -> String {
        let cell = |v: &Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut width = self.nmax.to_string().len();
        for row in &self.rows {
            for v in row {
                width = width.max(cell(v).len());
            }
        }
        let label = "k \\ n";
        let lw = label.len().max(self.kmax.to_string().len());
        let mut out = String::new();
        out.push_str(&format!("{label:>lw$} |"));
        for n in 0..=self.nmax {
            out.push_str(&format!(" {n:>width$}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(lw + 2 + (width + 1) * (self.nmax + 1)));
        out.push('\n');
        for (k, row) in self.rows.iter().enumerate() {
            let mut line = format!("{k:>lw$} |");
            for v in row {
                line.push_str(&format!(" {:>width$}", cell(v)));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Array of rows, blanks as `null`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.rows).expect("table serialises")
    }

    pub fn get(&self, k: usize, n: usize) -> Option<i64> {
        self.rows.get(k).and_then(|r| r.get(n)).copied().flatten()
    }
}
