//! Input-file parsing with line-accurate error messages.
//!
//! All reported positions are one-based line numbers in the named file, so
//! a failing batch job points straight at the offending row.

use std::path::Path;

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads a plain-text numeric matrix: one whitespace-separated row per
/// line; blank lines and `#` comments are ignored.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>, String> {
    let text = read_file(path)?;
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, String> = body
            .split_whitespace()
            .map(|token| {
                token.parse::<f64>().map_err(|_| {
                    format!(
                        "{}:{}: could not parse '{token}' as a number",
                        path.display(),
                        index + 1
                    )
                })
            })
            .collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(format!("{}: no numeric rows found", path.display()));
    }
    Ok(rows)
}

/// Reads a population vector: every number in the file, in reading order,
/// regardless of line layout.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, String> {
    Ok(read_matrix(path)?.into_iter().flatten().collect())
}

/// Reads `phi,psi` angle pairs (degrees) from a two-column CSV file. A
/// non-numeric first record is treated as a header and skipped.
pub fn read_angle_pairs(path: &Path) -> Result<Vec<(f64, f64)>, String> {
    let text = read_file(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut pairs = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("{}: {e}", path.display()))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.len() != 2 {
            return Err(format!(
                "{}:{line}: expected two fields (phi,psi), got {}",
                path.display(),
                record.len()
            ));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(phi), Ok(psi)) => pairs.push((phi, psi)),
            // A textual first record is a header.
            _ if index == 0 => continue,
            _ => {
                return Err(format!(
                    "{}:{line}: could not parse '{},{}' as angles",
                    path.display(),
                    &record[0],
                    &record[1]
                ));
            }
        }
    }
    if pairs.is_empty() {
        return Err(format!("{}: no angle rows found", path.display()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_with(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn matrices_parse_with_comments_and_blanks() {
        let file = temp_with("# coupling matrix\n0.5 0.5\n\n0.5 0.5  # trailing note\n");
        let rows = read_matrix(file.path()).unwrap();
        assert_eq!(rows, vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
    }

    #[test]
    fn parse_failures_cite_the_line() {
        let file = temp_with("1 0\n0 oops\n");
        let err = read_matrix(file.path()).unwrap_err();
        assert!(err.contains(":2:"), "message {err:?} should cite line 2");
        assert!(err.contains("oops"));
    }

    #[test]
    fn vectors_flatten_any_layout() {
        let file = temp_with("0.2 0.3\n0.5\n");
        assert_eq!(read_vector(file.path()).unwrap(), vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn angle_pairs_accept_an_optional_header() {
        let with_header = temp_with("phi,psi\n-57.0,-47.0\n120,0\n");
        assert_eq!(
            read_angle_pairs(with_header.path()).unwrap(),
            vec![(-57.0, -47.0), (120.0, 0.0)]
        );
        let without = temp_with("-57.0,-47.0\n");
        assert_eq!(
            read_angle_pairs(without.path()).unwrap(),
            vec![(-57.0, -47.0)]
        );
    }

    #[test]
    fn bad_angle_rows_cite_the_line() {
        let file = temp_with("phi,psi\n10,20\nnope,30\n");
        let err = read_angle_pairs(file.path()).unwrap_err();
        assert!(err.contains(":3:"), "message {err:?} should cite line 3");
    }
}
