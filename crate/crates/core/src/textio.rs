//! Line-oriented UTF-8 reading shared by every file format in the crate.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Reads `reader` line by line, yielding `(1-based line number, line)` with
/// the line terminator (`\n` or `\r\n`) removed. Invalid UTF-8 is reported
/// with its line number.
pub(crate) fn read_lines<R: BufRead>(
    mut reader: R,
    source_name: &str,
) -> Result<Vec<(usize, String)>> {
    let mut lines = Vec::new();
    let mut buf = Vec::new();
    let mut lineno = 0;
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(source_name, e))?;
        if n == 0 {
            break;
        }
        lineno += 1;
        if buf.last() == Some(&b'\n') {
            buf.pop();
            if buf.last() == Some(&b'\r') {
                buf.pop();
            }
        }
        let line = std::str::from_utf8(&buf).map_err(|_| Error::Encoding {
            source_name: source_name.to_owned(),
            line: lineno,
        })?;
        lines.push((lineno, line.to_owned()));
    }
    Ok(lines)
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn source_name(path: &Path) -> String {
    path.display().to_string()
}
