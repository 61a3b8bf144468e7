//! Plain-text group files.
//!
//! ```text
//! # comment
//! order 2
//! elements e t
//! e t
//! t e
//! ```

use std::fmt::Write as _;

use super::{FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unexpected end of file after line {line}: {message}")]
    Truncated { line: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn format_err(line: usize, message: impl Into<String>) -> GroupFileError {
    GroupFileError::Format {
        line,
        message: message.into(),
    }
}

pub fn parse_group_file(text: &str) -> Result<FiniteGroup, GroupFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last_line = 0;

    let (n, header) = lines.next().ok_or(GroupFileError::Truncated {
        line: 0,
        message: "missing `order` line".into(),
    })?;
    last_line = last_line.max(n);
    let order: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["order", k] => k
            .parse()
            .map_err(|_| format_err(n, format!("bad order {k:?}")))?,
        _ => return Err(format_err(n, "expected `order K`")),
    };
    if order == 0 {
        return Err(format_err(n, "order must be positive"));
    }

    let (n, elems) = lines.next().ok_or(GroupFileError::Truncated {
        line: last_line,
        message: "missing `elements` line".into(),
    })?;
    last_line = n;
    let mut words = elems.split_whitespace();
    if words.next() != Some("elements") {
        return Err(format_err(n, "expected `elements L0 L1 ...`"));
    }
    let labels: Vec<String> = words.map(str::to_string).collect();
    if labels.len() != order {
        return Err(format_err(
            n,
            format!("{} labels listed, order is {order}", labels.len()),
        ));
    }

    let mut table = Vec::with_capacity(order);
    for r in 0..order {
        let (n, row) = lines.next().ok_or(GroupFileError::Truncated {
            line: last_line,
            message: format!("table has {r} of {order} rows"),
        })?;
        last_line = n;
        let cells: Vec<&str> = row.split_whitespace().collect();
        if cells.len() != order {
            return Err(format_err(
                n,
                format!("row {r} has {} entries, expected {order}", cells.len()),
            ));
        }
        let row = cells
            .iter()
            .map(|c| {
                labels
                    .iter()
                    .position(|l| l == c)
                    .ok_or_else(|| format_err(n, format!("unknown label {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    if let Some((n, _)) = lines.next() {
        return Err(format_err(n, "trailing content after the table"));
    }
    Ok(FiniteGroup::from_table(labels, table)?)
}

pub fn render_group_file(group: &FiniteGroup) -> String {
    let mut out = String::new();
    writeln!(out, "order {}", group.order()).unwrap();
    writeln!(out, "elements {}", group.labels().join(" ")).unwrap();
    for row in group.table_rows() {
        let cells: Vec<&str> = row.iter().map(|&v| group.label(v)).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;

    #[test]
    fn round_trips_catalog() {
        for name in crate::fingroup::BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            let parsed = parse_group_file(&render_group_file(&g)).unwrap();
            assert_eq!(parsed.labels(), g.labels());
            assert!(parsed.table_rows().eq(g.table_rows()));
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# Z/2\n\norder 2\nelements e t\n# table\ne t\nt e\n";
        assert_eq!(parse_group_file(text).unwrap().order(), 2);
    }

    #[test]
    fn truncated_reports_line() {
        let text = "order 2\nelements e t\ne t\n";
        match parse_group_file(text).unwrap_err() {
            GroupFileError::Truncated { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_label_reports_line() {
        let text = "order 2\nelements e t\ne t\nt u\n";
        assert_eq!(
            parse_group_file(text).unwrap_err(),
            format_err(4, "unknown label \"u\"")
        );
    }

    #[test]
    fn validation_errors_pass_through() {
        let text = "order 2\nelements e t\ne t\nt t\n";
        assert!(matches!(
            parse_group_file(text).unwrap_err(),
            GroupFileError::Group(GroupError::NotLatinSquare { .. })
        ));
    }
}
