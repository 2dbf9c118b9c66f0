//! Burmeister `.cxt` cross tables.
//!
//! ```text
//! B
//! <context name, usually empty>
//! |G|
//! |M|
//!
//! object names, one per line
//! attribute names, one per line
//! one row of X/. per object
//! ```

use lakefca_core::{BitSet, FormalContext};

use crate::error::IngestError;

pub fn parse_cxt(text: &str) -> Result<FormalContext, IngestError> {
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .peekable();

    match lines.next() {
        Some((_, "B")) => {}
        Some((_, other)) => return Err(IngestError::MalformedHeader(format!("expected \"B\", found {other:?}"))),
        None => return Err(IngestError::MalformedHeader("empty input".into())),
    }
    // context name line, ignored
    lines.next();
    let mut count = |what: &str| -> Result<usize, IngestError> {
        let (_, line) = lines
            .next()
            .ok_or_else(|| IngestError::MalformedHeader(format!("missing {what} count")))?;
        line.trim()
            .parse()
            .map_err(|_| IngestError::MalformedHeader(format!("bad {what} count {line:?}")))
    };
    let n_objects = count("object")?;
    let n_attributes = count("attribute")?;
    while matches!(lines.peek(), Some((_, l)) if l.is_empty()) && n_objects + n_attributes > 0 {
        lines.next();
    }

    let mut take_names = |n: usize, what: &'static str| -> Result<Vec<String>, IngestError> {
        let names: Vec<String> = lines.by_ref().take(n).map(|(_, l)| l.to_string()).collect();
        if names.len() != n {
            return Err(IngestError::CountMismatch {
                what,
                expected: n,
                found: names.len(),
            });
        }
        Ok(names)
    };
    let objects = take_names(n_objects, "object names")?;
    let attributes = take_names(n_attributes, "attribute names")?;

    let mut rows = Vec::with_capacity(n_objects);
    for _ in 0..n_objects {
        let Some((i, line)) = lines.next() else {
            return Err(IngestError::CountMismatch {
                what: "incidence rows",
                expected: n_objects,
                found: rows.len(),
            });
        };
        let cells: Vec<char> = line.chars().collect();
        if cells.len() != n_attributes {
            return Err(IngestError::CountMismatch {
                what: "row cells",
                expected: n_attributes,
                found: cells.len(),
            });
        }
        let mut row = BitSet::empty(n_attributes);
        for (m, c) in cells.into_iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(m),
                '.' => {}
                other => {
                    return Err(IngestError::BadCell {
                        line: i + 1,
                        cell: other.to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    let trailing = lines.filter(|(_, l)| !l.trim().is_empty()).count();
    if trailing > 0 {
        return Err(IngestError::CountMismatch {
            what: "incidence rows",
            expected: n_objects,
            found: n_objects + trailing,
        });
    }
    Ok(FormalContext::from_rows(objects, attributes, rows)?)
}

pub fn write_cxt(ctx: &FormalContext) -> Result<String, IngestError> {
    let mut out = String::new();
    out.push_str(&format!("B\n\n{}\n{}\n\n", ctx.object_count(), ctx.attribute_count()));
    for name in ctx.objects().iter().chain(ctx.attributes()) {
        if name.contains(['\n', '\r']) {
            return Err(IngestError::UnrepresentableName(name.clone()));
        }
        out.push_str(name);
        out.push('\n');
    }
    for row in ctx.rows() {
        out.extend((0..ctx.attribute_count()).map(|m| if row.contains(m) { 'X' } else { '.' }));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lakefca_core::fixtures::toy;

    pub(crate) const TOY_CXT: &str = "B\n\n3\n8\n\nStorage\nDBTablespace\nServiceCall\n\
time\ntimestamp\nused\nmax\npath\nname\nserviceName\nduration\n\
X.XXX...\nX.XX.X..\n.X...XXX\n";

    #[test]
    fn toy_round_trip() {
        let ctx = parse_cxt(TOY_CXT).unwrap();
        assert_eq!(ctx, toy());
        assert_eq!(ctx.incidence_count(), 12);
        assert_eq!(write_cxt(&ctx).unwrap(), TOY_CXT);
    }

    #[test]
    fn empty_context() {
        let ctx = parse_cxt("B\n\n0\n0\n\n").unwrap();
        assert_eq!((ctx.object_count(), ctx.attribute_count()), (0, 0));
        assert_eq!(write_cxt(&ctx).unwrap(), "B\n\n0\n0\n\n");
    }

    #[test]
    fn object_without_attributes() {
        let ctx = FormalContext::build(["Solo"], Vec::<String>::new(), Vec::<(&str, &str)>::new()).unwrap();
        let text = write_cxt(&ctx).unwrap();
        assert_eq!(text, "B\n\n1\n0\n\nSolo\n\n");
        assert_eq!(parse_cxt(&text).unwrap(), ctx);
    }

    #[test]
    fn short_row_is_count_mismatch() {
        let text = "B\n\n1\n4\n\ng\na\nb\nc\nd\nX.X\n";
        assert!(matches!(
            parse_cxt(text),
            Err(IngestError::CountMismatch {
                expected: 4,
                found: 3,
                ..
            })
        ));
    }

    #[test]
    fn lowercase_x_and_crlf_accepted() {
        let ctx = parse_cxt("B\r\n\r\n1\r\n2\r\n\r\ng\r\na\r\nb\r\nx.\r\n").unwrap();
        assert!(ctx.incident(0, 0) && !ctx.incident(0, 1));
    }

    #[test]
    fn bad_cell_and_header() {
        assert!(matches!(
            parse_cxt("B\n\n1\n1\n\ng\na\n?\n"),
            Err(IngestError::BadCell { line: 8, .. })
        ));
        assert!(matches!(parse_cxt("A\n"), Err(IngestError::MalformedHeader(_))));
        assert!(matches!(
            parse_cxt("B\n\nthree\n1\n"),
            Err(IngestError::MalformedHeader(_))
        ));
        assert!(matches!(parse_cxt(""), Err(IngestError::MalformedHeader(_))));
    }

    #[test]
    fn extra_rows_rejected() {
        assert!(matches!(
            parse_cxt("B\n\n1\n1\n\ng\na\nX\nX\n"),
            Err(IngestError::CountMismatch { .. })
        ));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(matches!(
            parse_cxt("B\n\n2\n1\n\ng\ng\na\nX\nX\n"),
            Err(IngestError::Context(_))
        ));
    }

    #[test]
    fn newline_in_name_unwritable() {
        let ctx = FormalContext::build(["a\nb"], ["m"], [("a\nb", "m")]).unwrap();
        assert!(matches!(write_cxt(&ctx), Err(IngestError::UnrepresentableName(_))));
    }
}
