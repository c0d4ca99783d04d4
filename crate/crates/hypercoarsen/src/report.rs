//! Flat key/value run reports.
//!
//! Every CLI action emits one of these: insertion-ordered `key = value`
//! lines, so reports are diffable and deterministic. Wall-clock timing
//! keys are printed to stdout only, never written into output files.

use std::fmt::Display;

#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Append or overwrite `key`.
    pub fn set(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    /// Floats are recorded with six decimals so equal runs emit equal bytes.
    pub fn set_float(&mut self, key: &str, value: f64) {
        self.set(key, format!("{value:.6}"));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Render as `key = value` lines in insertion order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_insertion_order_and_overwrites() {
        let mut r = Report::new();
        r.set("n", 12);
        r.set_float("phi_avg", 0.5);
        r.set("n", 13);
        assert_eq!(r.to_text(), "n = 13\nphi_avg = 0.500000\n");
        assert_eq!(r.get("phi_avg"), Some("0.500000"));
    }
}
