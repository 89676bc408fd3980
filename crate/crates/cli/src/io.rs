use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::Failure;

pub fn parse_seed(s: &str) -> Result<[u8; 32], Failure> {
    let bytes = hex::decode(s.trim()).map_err(|e| Failure::usage(format!("seed: {e}")))?;
    bytes
        .try_into()
        .map_err(|b: Vec<u8>| Failure::usage(format!("seed must be 32 bytes, got {}", b.len())))
}

fn is_stdio(path: Option<&Path>) -> bool {
    path.is_none_or(|p| p.as_os_str() == "-")
}

pub fn read_message(path: Option<&Path>) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) if !is_stdio(Some(p)) => {
            fs::read(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

/// A key or signature file, raw or hex text.
pub fn read_blob(path: &Path, hex_text: bool) -> Result<Vec<u8>, Failure> {
    let raw = fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if hex_text {
        let text = String::from_utf8(raw).map_err(|_| Failure::usage(format!("{}: not hex text", path.display())))?;
        hex::decode(text.trim()).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    } else {
        Ok(raw)
    }
}

fn encode(bytes: &[u8], hex_text: bool) -> Vec<u8> {
    if hex_text {
        let mut s = hex::encode(bytes).into_bytes();
        s.push(b'\n');
        s
    } else {
        bytes.to_vec()
    }
}

pub fn write_output(path: Option<&Path>, bytes: &[u8], hex_text: bool) -> Result<(), Failure> {
    let data = encode(bytes, hex_text);
    match path {
        Some(p) if !is_stdio(Some(p)) => write_files(&[(p, bytes)], hex_text),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(&data)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Writes all files or none: every target directory is checked first, and
/// files already written are removed if a later write fails.
pub fn write_files(files: &[(&Path, &[u8])], hex_text: bool) -> Result<(), Failure> {
    for (path, _) in files {
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(Failure::usage(format!("{}: directory does not exist", parent.display())));
        }
    }
    let mut written: Vec<&Path> = Vec::new();
    for (path, bytes) in files {
        if let Err(e) = fs::write(path, encode(bytes, hex_text)) {
            for w in written {
                let _ = fs::remove_file(w);
            }
            return Err(Failure::usage(format!("{}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(())
}
