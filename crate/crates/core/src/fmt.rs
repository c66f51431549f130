//! Number formatting shared by annotations, answers, and file writers.

/// Formats with at most `decimals` places, trimming trailing zeros and a
/// trailing dot: `(1.0, 2) -> "1"`, `(1.27, 2) -> "1.27"`, `(5.40, 2) -> "5.4"`.
pub fn trimmed(v: f64, decimals: usize) -> String {
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Formats with up to 6 decimals, trimming trailing zeros but always keeping
/// one digit after the point: `1.0 -> "1.0"`, `-2.0 -> "-2.0"`, `1.27 -> "1.27"`.
pub fn keep_one_decimal(v: f64) -> String {
    let mut s = format!("{v:.6}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    if s == "-0.0" {
        s = "0.0".to_string();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimmed_matches_label_convention() {
        assert_eq!(trimmed(1.27, 2), "1.27");
        assert_eq!(trimmed(0.6, 2), "0.6");
        assert_eq!(trimmed(5.4, 2), "5.4");
        assert_eq!(trimmed(1.0, 2), "1");
        assert_eq!(trimmed(2.0, 2), "2");
        assert_eq!(trimmed(-0.0, 2), "0");
        assert_eq!(trimmed(1.905, 4), "1.905");
    }

    #[test]
    fn keep_one_decimal_matches_export_convention() {
        assert_eq!(keep_one_decimal(1.0), "1.0");
        assert_eq!(keep_one_decimal(-2.0), "-2.0");
        assert_eq!(keep_one_decimal(1.27), "1.27");
        assert_eq!(keep_one_decimal(1.905), "1.905");
        assert_eq!(keep_one_decimal(0.0), "0.0");
    }
}
