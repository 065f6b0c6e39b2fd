use std::borrow::Cow;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{write_file, SweepError, SweepResult};

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}

/// Quotes a CSV field when it contains a delimiter, quote or line break.
pub fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

/// CSV text: `# key=value` metadata lines, a header row, then data rows.
pub fn to_csv_string(res: &SweepResult) -> Result<String, SweepError> {
    res.check()?;
    let mut out = String::new();
    for (k, v) in &res.metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    let header: Vec<_> = res.columns.iter().map(|c| csv_field(c)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &res.rows {
        let fields: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes `<prefix>.csv` and returns its path.
pub fn emit_csv(res: &SweepResult, prefix: &Path) -> Result<PathBuf, SweepError> {
    let text = to_csv_string(res)?;
    let path = with_suffix(prefix, "csv");
    write_file(&path, text.as_bytes())?;
    Ok(path)
}

pub(crate) fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepResult {
        SweepResult {
            columns: vec!["x".into(), "y".into()],
            rows: vec![vec![0.1, 1.0], vec![0.2, 4.276269580508672e-13]],
            metadata: vec![("seed".into(), "42".into())],
        }
    }

    #[test]
    fn layout() {
        let text = to_csv_string(&tiny()).unwrap();
        assert_eq!(text, "# seed=42\nx,y\n0.1,1.0\n0.2,4.276269580508672e-13\n");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5e17] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn malformed_rows_rejected() {
        let mut bad = tiny();
        bad.rows[1].pop();
        assert!(to_csv_string(&bad).is_err());
        let mut nan = tiny();
        nan.rows[0][1] = f64::NAN;
        assert!(to_csv_string(&nan).is_err());
    }

    #[test]
    fn writes_prefixed_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = emit_csv(&tiny(), &dir.path().join("out/fig")).unwrap();
        assert_eq!(path, dir.path().join("out/fig.csv"));
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().count(), 4);
    }
}
