//! CSV cross tables: a header row of attribute names after a corner cell,
//! then one row per object starting with its name.

use lakefca_core::{BitSet, FormalContext};

use crate::error::IngestError;

fn cell_value(cell: &str, line: usize) -> Result<bool, IngestError> {
    match cell.trim() {
        "" | "0" => Ok(false),
        "X" | "x" | "1" => Ok(true),
        other => Err(IngestError::BadCell {
            line,
            cell: other.to_string(),
        }),
    }
}

pub fn parse_csv_crosstable(text: &str) -> Result<FormalContext, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let Some(header) = records.next().transpose()? else {
        return Ok(FormalContext::empty());
    };
    let attributes: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let width = attributes.len();

    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width + 1 {
            return Err(IngestError::RaggedRow {
                line,
                expected: width + 1,
                found: record.len(),
            });
        }
        let mut row = BitSet::empty(width);
        for (m, cell) in record.iter().skip(1).enumerate() {
            if cell_value(cell, line)? {
                row.insert(m);
            }
        }
        objects.push(record[0].to_string());
        rows.push(row);
    }
    Ok(FormalContext::from_rows(objects, attributes, rows)?)
}

pub fn write_csv_crosstable(ctx: &FormalContext) -> Result<String, IngestError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(std::iter::once("").chain(ctx.attributes().iter().map(String::as_str)))?;
    for (name, row) in ctx.objects().iter().zip(ctx.rows()) {
        let cells = (0..ctx.attribute_count()).map(|m| if row.contains(m) { "X" } else { "" });
        writer.write_record(std::iter::once(name.as_str()).chain(cells))?;
    }
    let bytes = writer.into_inner().map_err(|e| IngestError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer only emits the UTF-8 it was given"))
}
