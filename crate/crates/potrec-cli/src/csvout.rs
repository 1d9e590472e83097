//! Deterministic CSV output: `#`-prefixed comment lines, a header row, UNIX
//! newlines, and shortest round-trip float formatting (empty cell for masked
//! values).

use std::fmt::Write as _;

pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new() -> Self {
        CsvDoc { buf: String::new() }
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.buf, "# {text}");
    }

    pub fn header(&mut self, cols: &[String]) {
        let _ = writeln!(self.buf, "{}", cols.join(","));
    }

    pub fn row(&mut self, cells: &[Option<f64>]) {
        let mut first = true;
        for cell in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            if let Some(v) = cell {
                let _ = write!(self.buf, "{v}");
            }
        }
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

impl Default for CsvDoc {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip_cells() {
        let mut doc = CsvDoc::new();
        doc.comment("meta");
        doc.header(&["x".into(), "v".into()]);
        doc.row(&[Some(0.1), None]);
        doc.row(&[Some(1.0 / 3.0), Some(-2.5e-11)]);
        let text = doc.into_string();
        assert_eq!(
            text,
            "# meta\nx,v\n0.1,\n0.3333333333333333,-0.000000000025\n"
        );
        // Every emitted number re-parses to the identical f64.
        for line in text.lines().skip(2) {
            for cell in line.split(',').filter(|c| !c.is_empty()) {
                let v: f64 = cell.parse().unwrap();
                assert_eq!(format!("{v}"), cell);
            }
        }
    }
}
