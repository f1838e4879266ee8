//! Series diagnostics: rank correlation and discrete power spectra.

use std::f64::consts::PI;

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut k = i;
        while k + 1 < idx.len() && values[idx[k + 1]] == values[idx[i]] {
            k += 1;
        }
        let r = (i + k) as f64 / 2.0 + 1.0;
        for &pos in &idx[i..=k] {
            out[pos] = r;
        }
        i = k + 1;
    }
    out
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len().min(b.len());
    if n < 2 {
        return None;
    }
    let ma = a[..n].iter().sum::<f64>() / n as f64;
    let mb = b[..n].iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (da, db) = (a[i] - ma, b[i] - mb);
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len().min(b.len());
    pearson(&ranks(&a[..n]), &ranks(&b[..n]))
}

/// One-sided periodogram of the mean-removed series, bins `1..=n/2`.
///
/// `power[k - 1]` is `|sum_t x_t e^{-2 pi i k t / n}|^2` for frequency
/// `k / n` cycles per kick.
pub fn ac_power_spectrum(series: &[f64]) -> Vec<f64> {
    let n = series.len();
    if n < 2 {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    (1..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &x) in series.iter().enumerate() {
                let arg = -2.0 * PI * (k * t % n) as f64 / n as f64;
                re += (x - mean) * arg.cos();
                im += (x - mean) * arg.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// Spectral concentration summary of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConcentration {
    /// Fewest bins whose combined power reaches half of the AC power.
    pub bins_for_half_power: usize,
    /// Largest single-bin share of the AC power.
    pub max_bin_fraction: f64,
    /// Share of AC power in the five strongest bins.
    pub top5_fraction: f64,
}

pub fn spectral_concentration(series: &[f64]) -> SpectralConcentration {
    let mut power = ac_power_spectrum(series);
    let total: f64 = power.iter().sum();
    power.sort_by(|a, b| b.total_cmp(a));
    if total <= 0.0 {
        return SpectralConcentration {
            bins_for_half_power: 0,
            max_bin_fraction: 0.0,
            top5_fraction: 0.0,
        };
    }
    let mut acc = 0.0;
    let mut bins = power.len();
    for (i, p) in power.iter().enumerate() {
        acc += p;
        if acc >= 0.5 * total {
            bins = i + 1;
            break;
        }
    }
    SpectralConcentration {
        bins_for_half_power: bins,
        max_bin_fraction: power[0] / total,
        top5_fraction: power.iter().take(5).sum::<f64>() / total,
    }
}
