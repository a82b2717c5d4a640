use crate::catalog::{Cip, PartRole};

use super::{BoundPart, PartsBinding, PatternInstance};

/// One instance per `key=value` (or `key:value`) line of a properties file.
/// Comments, blank lines and continuation lines are skipped; the value keeps
/// everything after the first separator.
pub fn match_properties_file(path: &str, content: &str) -> Vec<PatternInstance> {
    let mut out = Vec::new();
    let mut continued = false;
    for (i, raw_line) in content.lines().enumerate() {
        let was_continued = continued;
        let trailing = raw_line.len() - raw_line.trim_end_matches('\\').len();
        continued = trailing % 2 == 1;
        if was_continued {
            continue;
        }
        let line = raw_line.trim_start();
        if line.is_empty() || line.starts_with('#') || line.starts_with('!') {
            continue;
        }
        let Some(sep) = separator(line) else { continue };
        let key = line[..sep].trim();
        if key.is_empty() {
            continue;
        }
        let value = line[sep + 1..].trim().to_string();
        let column = (raw_line.len() - line.len()) as u32 + 1;
        out.push(PatternInstance {
            pattern: Cip::PropertiesFile,
            path: path.to_string(),
            line: i as u32 + 1,
            column,
            binding: PartsBinding(vec![BoundPart {
                role: PartRole::Constant,
                text: key.to_string(),
                node: None,
            }]),
            statement_text: raw_line.trim().to_string(),
            value: Some(value),
            site: None,
        });
    }
    out
}

/// Byte index of the first unescaped `=` or `:`.
fn separator(line: &str) -> Option<usize> {
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            '\\' if !escaped => escaped = true,
            '=' | ':' if !escaped => return Some(i),
            _ => escaped = false,
        }
    }
    None
}

/// Properties-file instances for every `.properties` file under `roots`,
/// with paths shown relative to their root.
pub fn match_properties_roots<P: AsRef<std::path::Path>>(roots: &[P]) -> Result<Vec<PatternInstance>, crate::Error> {
    let mut found = Vec::new();
    for root in roots {
        let root = root.as_ref();
        for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| crate::Error::Io {
                path: root.display().to_string(),
                source: e.into(),
            })?;
            let p = entry.path();
            if !entry.file_type().is_file() || p.extension().is_none_or(|e| e != "properties") {
                continue;
            }
            let rel = p.strip_prefix(root).ok().filter(|r| !r.as_os_str().is_empty());
            let display = match rel {
                Some(r) => r.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"),
                None => p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            };
            let content = std::fs::read_to_string(p).map_err(|e| crate::Error::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            found.push((display, content));
        }
    }
    found.sort();
    Ok(found.iter().flat_map(|(d, c)| match_properties_file(d, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_line() {
        let found = match_properties_file("app.properties", "backups=1\n");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].binding.texts(), vec!["backups"]);
        assert_eq!(found[0].value.as_deref(), Some("1"));
        assert_eq!(found[0].line, 1);
    }

    #[test]
    fn value_keeps_later_separators() {
        let found = match_properties_file("p", "a=b=c");
        assert_eq!(found[0].binding.texts(), vec!["a"]);
        assert_eq!(found[0].value.as_deref(), Some("b=c"));
    }

    #[test]
    fn skips_comments_blanks_and_continuations() {
        let src = "# note\n\n! other\nlong=one \\\n  two=2\nshort: 3\n";
        let found = match_properties_file("p", src);
        let keys: Vec<_> = found.iter().map(|f| f.binding.texts()[0].to_string()).collect();
        assert_eq!(keys, vec!["long", "short"]);
        assert_eq!(found[1].line, 6);
    }

    #[test]
    fn escaped_separator_belongs_to_key() {
        let found = match_properties_file("p", "a\\=b=c");
        assert_eq!(found[0].binding.texts(), vec!["a\\=b"]);
        assert_eq!(found[0].value.as_deref(), Some("c"));
    }
}
