//! Reading and writing corpus directories.
//!
//! A corpus is a directory of `NAME.tml` files. `NAME.conll` holds the
//! sidecar annotation layer and `NAME.sim` an optional similarity table.
//! Files are visited in name order.

use std::fs;
use std::path::{Path, PathBuf};

use crate::annotation::{
    attach_annotations, AlignmentError, AnnotatedDocument, AnnotationError, AnnotationLayer, SimilarityTable,
};
use crate::timeml::{parse_timeml, serialize_timeml, Document, TimeMlError};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", .path.display())]
    TimeMl { path: PathBuf, source: TimeMlError },
    #[error("{}: {source}", .path.display())]
    Sidecar { path: PathBuf, source: AnnotationError },
    #[error("{}: {source}", .path.display())]
    Alignment { path: PathBuf, source: AlignmentError },
    #[error("{}: no sidecar annotation file", .path.display())]
    MissingSidecar { path: PathBuf },
}

/// One document of a corpus directory.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub doc: Document,
    pub layer: Option<AnnotationLayer>,
}

impl CorpusEntry {
    /// Attaches the sidecar layer; fails when there is none.
    pub fn annotated(&self) -> Result<AnnotatedDocument, CorpusError> {
        let layer = self.layer.clone().ok_or_else(|| CorpusError::MissingSidecar { path: self.path.clone() })?;
        attach_annotations(self.doc.clone(), layer)
            .map_err(|source| CorpusError::Alignment { path: self.path.clone(), source })
    }

    /// File name without directory.
    pub fn file_name(&self) -> String {
        self.path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    }
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Reads one TimeML file and its sidecar files, if present.
pub fn load_file(path: &Path) -> Result<CorpusEntry, CorpusError> {
    let doc = parse_timeml(&read(path)?).map_err(|source| CorpusError::TimeMl { path: path.to_path_buf(), source })?;
    let conll = path.with_extension("conll");
    let layer = if conll.is_file() {
        let mut layer = AnnotationLayer::parse(&read(&conll)?)
            .map_err(|source| CorpusError::Sidecar { path: conll.clone(), source })?;
        let sim = path.with_extension("sim");
        if sim.is_file() {
            let table =
                SimilarityTable::parse(&read(&sim)?).map_err(|source| CorpusError::Sidecar { path: sim, source })?;
            layer.similarity = Some(table);
        }
        Some(layer)
    } else {
        None
    };
    Ok(CorpusEntry { path: path.to_path_buf(), doc, layer })
}

/// `.tml` files directly inside `dir`, sorted by name.
pub fn list_timeml(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let io = |source| CorpusError::Io { path: dir.to_path_buf(), source };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "tml") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

/// Reads a corpus directory, or a single `.tml` file.
pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    if path.is_file() {
        return Ok(vec![load_file(path)?]);
    }
    list_timeml(path)?.iter().map(|p| load_file(p)).collect()
}

/// Writes `doc` as `dir/NAME`, creating `dir` if needed.
pub fn write_document(dir: &Path, name: &str, doc: &Document) -> Result<PathBuf, CorpusError> {
    fs::create_dir_all(dir).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    fs::write(&path, serialize_timeml(doc)).map_err(|source| CorpusError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Writes the annotation layer of `ad` next to a document written by
/// [`write_document`].
pub fn write_sidecar(dir: &Path, name: &str, layer: &AnnotationLayer) -> Result<(), CorpusError> {
    let stem = Path::new(name).with_extension("");
    let conll = dir.join(stem.with_extension("conll"));
    fs::write(&conll, layer.render()).map_err(|source| CorpusError::Io { path: conll, source })?;
    if let Some(sim) = &layer.similarity {
        let path = dir.join(stem.with_extension("sim"));
        fs::write(&path, sim.render()).map_err(|source| CorpusError::Io { path, source })?;
    }
    Ok(())
}
