//! Tab-separated table files: one record per line, `#` comments and blank
//! lines ignored.

use std::path::Path;

use crate::error::{Error, Result};

/// A parsed TSV row with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

/// Splits `content` into rows of exactly `columns` fields. The last column
/// takes the rest of the line, so it may itself contain tabs.
pub fn rows<'a>(source: &Path, content: &'a str, columns: usize) -> Result<Vec<Row<'a>>> {
    let mut out = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.splitn(columns, '\t').collect();
        if fields.len() != columns {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: i + 1,
                message: format!("expected {} tab-separated fields, found {}", columns, fields.len()),
            });
        }
        out.push(Row { line: i + 1, fields });
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_keeps_tabs_in_last_column() {
        let got = rows(Path::new("t"), "# c\n\na\tb\tc\td\n", 3).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].line, 3);
        assert_eq!(got[0].fields, ["a", "b", "c\td"]);
    }

    #[test]
    fn short_row_is_an_error() {
        assert!(rows(Path::new("t"), "a\tb\n", 3).is_err());
    }
}
