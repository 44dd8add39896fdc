//! CSV emission: fixed 6-significant-digit numbers and `#` provenance lines
//! ahead of the header row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Format with 6 significant digits.
///
/// Plain decimal notation for exponents in `[-5, 5]`, scientific otherwise;
/// trailing zeros are trimmed. Rounding is done once, by the `{:e}`
/// formatter, so the output only depends on the IEEE-754 value.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-5..=5).contains(&exponent) {
        let trimmed = trim_fraction(mantissa);
        return format!("{sign}{trimmed}e{exponent}");
    }
    let body = if exponent >= 0 {
        let split = exponent as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exponent - 1) as usize), digits)
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `sig6` or an empty field.
pub fn sig6_opt(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// A CSV file with leading `# key=value` provenance lines.
pub struct CsvOutput {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvOutput {
    pub fn create(path: &Path, provenance: &[(String, String)]) -> Result<Self> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut buf = BufWriter::new(file);
        for (key, value) in provenance {
            writeln!(buf, "# {key}={value}").map_err(|e| Error::io(path, e))?;
        }
        Ok(Self {
            path: path.to_path_buf(),
            writer: csv::WriterBuilder::new().from_writer(buf),
        })
    }

    pub fn record<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|source| Error::Csv {
            path: self.path.clone(),
            source,
        })
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.418_938_533), "1.41894");
        assert_eq!(sig6(2.0), "2");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-0.0), "0");
        assert_eq!(sig6(123_456.7), "123457");
        assert_eq!(sig6(999_999.6), "1e6");
        assert_eq!(sig6(1.234_567e-7), "1.23457e-7");
        assert_eq!(sig6(0.000_012_345_67), "0.0000123457");
        assert_eq!(sig6(1e10), "1e10");
        assert_eq!(sig6(0.1), "0.1");
        assert_eq!(sig6(86_400.0), "86400");
        assert_eq!(sig6(f64::NAN), "NaN");
    }

    #[test]
    fn parses_back_within_half_ulp_of_sixth_digit() {
        for x in [3.251_592_653, -2.718_281_828e-3, 6.022e23, 1.602e-19, 0.999_999_7] {
            let y: f64 = sig6(x).parse().unwrap();
            assert!(((y - x) / x).abs() <= 5e-6, "{x} -> {y}");
        }
    }
}
