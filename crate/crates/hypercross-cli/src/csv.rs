//! CSV emission: header plus preformatted rows, written in one shot so a
//! partially written file never looks complete.

use std::fs;
use std::io;
use std::path::Path;

pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> io::Result<()> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text)
}

pub fn write_lines(path: &Path, rows: &[String]) -> io::Result<()> {
    let mut text = String::with_capacity(rows.len() * 32);
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text)
}
