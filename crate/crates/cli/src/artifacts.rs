//! Deterministic artifact encoding: every float is printed with 17
//! significant digits and no file carries a timestamp, so identical
//! runs produce byte-identical output.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::Failure;

/// 17 significant digits in scientific notation, valid as a JSON number.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

pub fn to_json(value: &impl Serialize) -> Result<String, Failure> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17);
    value
        .serialize(&mut ser)
        .map_err(|e| Failure::Runtime(format!("serialize: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Failure::Runtime(format!("serialize: {e}")))
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, Failure> {
        std::fs::create_dir_all(root)
            .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> Result<PathBuf, Failure> {
        let path = self.root.join(name);
        let text = to_json(value)?;
        std::fs::write(&path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    /// CSV with a header row; all cells arrive preformatted.
    pub fn write_csv(
        &self,
        name: &str,
        header: &[String],
        rows: impl Iterator<Item = Vec<String>>,
    ) -> Result<PathBuf, Failure> {
        let path = self.root.join(name);
        let err = |e: csv::Error| Failure::Runtime(format!("cannot write {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(&row).map_err(err)?;
        }
        w.flush()
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}
