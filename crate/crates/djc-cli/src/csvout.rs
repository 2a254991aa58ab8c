//! Deterministic CSV output: fixed float formatting (17 significant
//! digits), `\n` line endings, `#` comment lines before the header.

use std::io::Write;
use std::path::Path;

/// Render a float with 17 significant digits, so repeated runs are
/// byte-identical and round-trip exactly.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write comment lines, a header, and pre-rendered data rows.
pub fn write_csv(
    path: &Path,
    comments: &[String],
    header: &str,
    rows: &[String],
) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    let file = std::fs::File::create(path)
        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    let mut emit = |line: &str| -> Result<(), String> {
        w.write_all(line.as_bytes())
            .and_then(|_| w.write_all(b"\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    };
    for comment in comments {
        emit(&format!("# {comment}"))?;
    }
    emit(header)?;
    for row in rows {
        emit(row)?;
    }
    w.flush()
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Join already-rendered cells into one CSV row.
pub fn row<I: IntoIterator<Item = String>>(cells: I) -> String {
    cells.into_iter().collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(0.2), "2.0000000000000001e-1");
        let third: f64 = 1.0 / 3.0;
        assert_eq!(num(third).parse::<f64>().unwrap(), third);
    }

    #[test]
    fn files_are_byte_identical_across_writes() {
        let dir = std::env::temp_dir().join("djc-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        let rows = vec![row([num(0.0), num(1.0)]), row([num(0.5), num(-2.0)])];
        write_csv(&path, &["context".into()], "t,v", &rows).unwrap();
        let first = std::fs::read(&path).unwrap();
        write_csv(&path, &["context".into()], "t,v", &rows).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with("# context\nt,v\n"));
        assert!(!text.contains('\r'));
    }
}
