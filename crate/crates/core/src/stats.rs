//! Coverage, entropy and frequency rankings of PIN distributions.

use serde::Serialize;
use thiserror::Error;

use crate::mapping::Pin;
use crate::pingen::PinDistribution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("entropy of an empty distribution is undefined")]
    EmptyDistribution,
    #[error("external PIN `{pin}` has length {got}, expected {expected}")]
    LengthMismatch {
        pin: String,
        got: usize,
        expected: usize,
    },
    #[error("top-k needs k >= 1")]
    ZeroK,
    #[error("line {line}: `{text}` is not a PIN")]
    BadListEntry { line: usize, text: String },
}

/// Size of the full PIN space, 10^n.
pub fn pin_space(n: usize) -> f64 {
    10f64.powi(n as i32)
}

/// Fraction of the PIN space that the distribution reaches.
pub fn coverage(dist: &PinDistribution) -> f64 {
    dist.distinct() as f64 / pin_space(dist.pin_length())
}

/// Shannon entropy in bits of the PIN frequencies.
pub fn entropy(dist: &PinDistribution) -> Result<f64, StatsError> {
    entropy_of_counts(dist.counts().values().copied())
}

pub fn entropy_of_counts(counts: impl IntoIterator<Item = u64> + Clone) -> Result<f64, StatsError> {
    let total: u64 = counts.clone().into_iter().sum();
    if total == 0 {
        return Err(StatsError::EmptyDistribution);
    }
    let total = total as f64;
    let h: f64 = counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    Ok(h.max(0.0))
}

/// Entropy of the uniform distribution over `size` outcomes.
pub fn uniform_entropy(size: u64) -> f64 {
    (size as f64).log2()
}

/// Most frequent PINs, descending by count, ties in ascending PIN order.
pub fn top_k(dist: &PinDistribution, k: usize) -> Result<Vec<(Pin, u64)>, StatsError> {
    if k == 0 {
        return Err(StatsError::ZeroK);
    }
    let mut all: Vec<(Pin, u64)> = dist.counts().iter().map(|(p, &c)| (p.clone(), c)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    all.truncate(k);
    Ok(all)
}

/// External PINs that also occur in the distribution, in list order.
pub fn overlapping_pins(
    dist: &PinDistribution,
    external: &[Pin],
) -> Result<Vec<Pin>, StatsError> {
    for pin in external {
        if pin.len() != dist.pin_length() {
            return Err(StatsError::LengthMismatch {
                pin: pin.to_string(),
                got: pin.len(),
                expected: dist.pin_length(),
            });
        }
    }
    Ok(external.iter().filter(|p| dist.contains(p)).cloned().collect())
}

pub fn overlap_with_list(dist: &PinDistribution, external: &[Pin]) -> Result<usize, StatsError> {
    overlapping_pins(dist, external).map(|v| v.len())
}

/// Reads a frequency list: one PIN per line, most frequent first. Blank
/// lines and `#` comments are skipped.
pub fn parse_pin_list(text: &str) -> Result<Vec<Pin>, StatsError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let pin = Pin::new(t).map_err(|_| StatsError::BadListEntry {
            line: i + 1,
            text: t.to_string(),
        })?;
        out.push(pin);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopEntry {
    pub pin: Pin,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub pin_length: usize,
    pub pin_word_total: u64,
    pub distinct_pins: usize,
    pub coverage_fraction: f64,
    /// `None` for an empty distribution.
    pub entropy_bits: Option<f64>,
    pub top_k: Vec<TopEntry>,
}

impl StatsReport {
    pub fn from_distribution(dist: &PinDistribution, k: usize) -> Self {
        let top = if k == 0 {
            Vec::new()
        } else {
            top_k(dist, k).expect("k >= 1")
        };
        StatsReport {
            pin_length: dist.pin_length(),
            pin_word_total: dist.total(),
            distinct_pins: dist.distinct(),
            coverage_fraction: coverage(dist),
            entropy_bits: entropy(dist).ok(),
            top_k: top
                .into_iter()
                .map(|(pin, count)| TopEntry { pin, count })
                .collect(),
        }
    }

    /// Coverage as a whole percentage.
    pub fn coverage_percent(&self) -> u32 {
        (self.coverage_fraction * 100.0).round() as u32
    }
}

/// Renders reports side by side: one column per `(label, report)`, rows
/// `#PIN words`, `#PINs`, `Covering`, `Entropy`.
pub fn render_table(columns: &[(String, &StatsReport)]) -> String {
    let mut rows: Vec<(String, Vec<String>)> = vec![
        ("".into(), Vec::new()),
        ("PIN length".into(), Vec::new()),
        ("#PIN words".into(), Vec::new()),
        ("#PINs".into(), Vec::new()),
        ("Covering".into(), Vec::new()),
        ("Entropy".into(), Vec::new()),
    ];
    for (label, r) in columns {
        rows[0].1.push(label.clone());
        rows[1].1.push(r.pin_length.to_string());
        rows[2].1.push(group_thousands(r.pin_word_total));
        rows[3].1.push(group_thousands(r.distinct_pins as u64));
        rows[4].1.push(format!("{}%", r.coverage_percent()));
        rows[5].1.push(match r.entropy_bits {
            Some(h) => format!("{h:.2}"),
            None => "-".into(),
        });
    }
    let head_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let col_w: Vec<usize> = (0..columns.len())
        .map(|c| rows.iter().map(|r| r.1[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (head, cells) in &rows {
        let mut line = format!("{head:<head_w$}");
        for (cell, w) in cells.iter().zip(&col_w) {
            line.push_str(&format!("  {cell:>w$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn group_thousands(v: u64) -> String {
    let s = v.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(' ');
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(n: usize, entries: &[(&str, u64)]) -> PinDistribution {
        let mut d = PinDistribution::new(n);
        for (p, c) in entries {
            d.add(Pin::new(*p).unwrap(), *c).unwrap();
        }
        d
    }

    #[test]
    fn uniform_maxima() {
        assert_eq!(format!("{:.2}", uniform_entropy(10_000)), "13.29");
        assert_eq!(uniform_entropy(4096), 12.0);
        assert_eq!(format!("{:.2}", uniform_entropy(100_000)), "16.61");
        assert_eq!(uniform_entropy(32_768), 15.0);
    }

    #[test]
    fn entropy_small_cases() {
        assert_eq!(entropy(&dist(4, &[("1234", 7)])).unwrap(), 0.0);
        assert_eq!(entropy(&dist(4, &[("1234", 1), ("0000", 1)])).unwrap(), 1.0);
        assert_eq!(
            entropy(&PinDistribution::new(4)),
            Err(StatsError::EmptyDistribution)
        );
    }

    #[test]
    fn entropy_of_full_uniform_distribution() {
        let mut d = PinDistribution::new(4);
        for i in 0..10_000 {
            d.add(Pin::new(format!("{i:04}")).unwrap(), 1).unwrap();
        }
        let h = entropy(&d).unwrap();
        assert!((h - 10_000f64.log2()).abs() < 1e-9);
        assert_eq!(coverage(&d), 1.0);
    }

    #[test]
    fn coverage_cases() {
        assert_eq!(coverage(&dist(4, &[("0000", 1), ("1234", 5)])), 0.0002);
        assert_eq!(coverage(&PinDistribution::new(4)), 0.0);
    }

    #[test]
    fn top_k_order() {
        let d = dist(4, &[("7377", 15), ("2667", 15), ("5277", 15), ("1111", 2)]);
        let top = top_k(&d, 2).unwrap();
        assert_eq!(top[0], (Pin::new("2667").unwrap(), 15));
        assert_eq!(top[1], (Pin::new("5277").unwrap(), 15));
        assert_eq!(top_k(&dist(4, &[("1234", 1)]), 5).unwrap().len(), 1);
        assert_eq!(top_k(&d, 0), Err(StatsError::ZeroK));
    }

    #[test]
    fn overlap() {
        let d = dist(4, &[("4444", 1), ("2222", 3), ("1234", 1)]);
        let ext: Vec<Pin> = ["1234", "1111", "0000", "2222"]
            .iter()
            .map(|s| Pin::new(*s).unwrap())
            .collect();
        assert_eq!(overlap_with_list(&d, &ext).unwrap(), 2);
        assert_eq!(
            overlapping_pins(&d, &ext).unwrap(),
            [Pin::new("1234").unwrap(), Pin::new("2222").unwrap()]
        );
        assert_eq!(overlap_with_list(&d, &[]).unwrap(), 0);
        assert_eq!(overlap_with_list(&d, &[Pin::new("9999").unwrap()]).unwrap(), 0);
        assert!(matches!(
            overlap_with_list(&d, &[Pin::new("12345").unwrap()]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pin_list_parsing() {
        let list = parse_pin_list("1234\n# comment\n\n1111  # second\n").unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(
            parse_pin_list("1234\nabcd"),
            Err(StatsError::BadListEntry {
                line: 2,
                text: "abcd".into()
            })
        );
    }

    #[test]
    fn table_layout() {
        let d = dist(4, &[("2667", 3), ("7377", 1)]);
        let r = StatsReport::from_distribution(&d, 1);
        assert_eq!(r.coverage_percent(), 0);
        let t = render_table(&[("English".into(), &r)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[2], "#PIN words        4");
        assert_eq!(lines[5], "Entropy        0.81");
        assert_eq!(group_thousands(10484), "10 484");
        assert_eq!(group_thousands(999), "999");
    }
}
