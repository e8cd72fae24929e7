//! Text corpus format.
//!
//! One document per line, tab separated:
//!
//! ```text
//! doc_id<TAB>label,label,...<TAB>lang0: tok tok ...<TAB>lang1: tok ...
//! ```
//!
//! In the *raw* form labels are label names, language blocks are prefixed
//! by a language name and tokens are terms. In the *encoded* form written
//! by [`save_corpus`] labels are label ids, block prefixes are language
//! indices and tokens are term ids. Encoded corpora carry sidecar files
//! next to the main file: `<path>.vocab<l>` (one term per line, line
//! number = term id) and `<path>.labels` (one label name per line).

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Corpus, Document, LabelId, RawDocument, TermId, Vocabulary};
use crate::error::{Error, Result};

pub fn corpus_sidecar_paths(path: &Path, num_languages: usize) -> (Vec<PathBuf>, PathBuf) {
    let vocab = (0..num_languages).map(|l| suffixed(path, &format!("vocab{l}"))).collect();
    (vocab, suffixed(path, "labels"))
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn check_field(value: &str, what: &str, forbidden: &[char]) -> Result<()> {
    if value.is_empty() || value.contains(forbidden) {
        return Err(Error::Config(format!(
            "{what} `{}` cannot be written: empty or contains a separator",
            value.escape_debug()
        )));
    }
    Ok(())
}

pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    corpus.validate()?;
    let (vocab_paths, labels_path) = corpus_sidecar_paths(path, corpus.num_languages());
    let write_err = |p: &Path, e| Error::io(format!("writing {}", p.display()), e);

    let mut out = BufWriter::new(File::create(path).map_err(|e| write_err(path, e))?);
    for doc in &corpus.documents {
        check_field(&doc.doc_id, "document id", &['\t', '\n', '\r'])?;
        let labels: Vec<String> = doc.labels.iter().map(u32::to_string).collect();
        let mut line = format!("{}\t{}", doc.doc_id, labels.join(","));
        for l in 0..corpus.num_languages() {
            line.push_str(&format!("\t{l}:"));
            for t in doc.tokens.get(l).into_iter().flatten() {
                line.push_str(&format!(" {t}"));
            }
        }
        writeln!(out, "{line}").map_err(|e| write_err(path, e))?;
    }
    out.flush().map_err(|e| write_err(path, e))?;

    for (vocab, vpath) in corpus.vocabularies.iter().zip(&vocab_paths) {
        let mut body = String::new();
        for term in vocab.terms() {
            check_field(term, "term", &['\n', '\r', '\t', ' '])?;
            body.push_str(term);
            body.push('\n');
        }
        fs::write(vpath, body).map_err(|e| write_err(vpath, e))?;
    }
    let mut body = String::new();
    for name in &corpus.label_names {
        check_field(name, "label name", &['\n', '\r'])?;
        body.push_str(name);
        body.push('\n');
    }
    fs::write(&labels_path, body).map_err(|e| write_err(&labels_path, e))?;
    Ok(())
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let mut vocabularies = Vec::new();
    loop {
        let (vpaths, _) = corpus_sidecar_paths(path, vocabularies.len() + 1);
        let vpath = vpaths.last().expect("one path per language");
        if !vpath.exists() {
            break;
        }
        let terms: Vec<String> = read_lines(vpath)?.into_iter().filter(|t| !t.is_empty()).collect();
        vocabularies.push(Vocabulary::new(vocabularies.len(), terms)?);
    }
    if vocabularies.is_empty() {
        return Err(Error::Config(format!(
            "no vocabulary sidecar found for {} (expected {}.vocab0)",
            path.display(),
            path.display()
        )));
    }
    let (_, labels_path) = corpus_sidecar_paths(path, 0);
    let label_names: Vec<String> = if labels_path.exists() {
        read_lines(&labels_path)?.into_iter().filter(|t| !t.is_empty()).collect()
    } else {
        Vec::new()
    };

    let num_languages = vocabularies.len();
    let mut documents = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let doc_id = fields.next().unwrap_or_default();
        if doc_id.is_empty() {
            return Err(parse_err(path, lineno, "missing document id"));
        }
        let labels_field = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing label field"))?;
        let mut labels = Vec::new();
        for item in labels_field.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id: LabelId = item
                .parse()
                .map_err(|_| parse_err(path, lineno, format!("label `{item}` is not an id")))?;
            labels.push(id);
        }
        let mut tokens: Vec<Option<Vec<TermId>>> = vec![None; num_languages];
        for block in fields {
            let (lang, body) = block
                .split_once(':')
                .ok_or_else(|| parse_err(path, lineno, format!("language block without `:` in `{block}`")))?;
            let lang: usize = lang
                .trim()
                .parse()
                .map_err(|_| parse_err(path, lineno, format!("language `{lang}` is not an index")))?;
            if lang >= num_languages {
                return Err(Error::LanguageOutOfRange {
                    doc_id: doc_id.to_owned(),
                    language: lang,
                    num_languages,
                });
            }
            if tokens[lang].is_some() {
                return Err(parse_err(path, lineno, format!("language {lang} appears twice")));
            }
            let ids = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<TermId>()
                        .map_err(|_| parse_err(path, lineno, format!("token `{t}` is not an id")))
                })
                .collect::<Result<Vec<_>>>()?;
            tokens[lang] = Some(ids);
        }
        documents.push(Document::new(
            doc_id,
            tokens.into_iter().map(Option::unwrap_or_default).collect(),
            labels,
        ));
    }
    if documents.is_empty() {
        return Err(Error::NoDocuments);
    }
    Corpus::new(documents, vocabularies, label_names)
}

#[derive(Debug, Clone)]
pub struct RawCorpus {
    pub documents: Vec<RawDocument>,
    /// Language names; `documents[_].tokens[l]` belongs to `languages[l]`.
    pub languages: Vec<String>,
}

/// Reads the raw form. Languages are ordered as in `language_order` when
/// given, otherwise by first appearance in the file.
pub fn read_raw_documents(path: &Path, language_order: Option<&[String]>) -> Result<RawCorpus> {
    let mut languages: Vec<String> = language_order.map(<[String]>::to_vec).unwrap_or_default();
    let fixed = language_order.is_some();
    let mut documents = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let doc_id = fields.next().unwrap_or_default().to_owned();
        if doc_id.is_empty() {
            return Err(parse_err(path, lineno, "missing document id"));
        }
        let labels: Vec<String> = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "missing label field"))?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        let mut tokens: Vec<Vec<String>> = vec![Vec::new(); languages.len()];
        let mut seen = HashSet::new();
        for block in fields {
            let (lang, body) = block
                .split_once(':')
                .ok_or_else(|| parse_err(path, lineno, format!("language block without `:` in `{block}`")))?;
            let lang = lang.trim();
            let l = match languages.iter().position(|x| x == lang) {
                Some(l) => l,
                None if fixed => {
                    return Err(parse_err(path, lineno, format!("unknown language `{lang}`")));
                }
                None => {
                    languages.push(lang.to_owned());
                    tokens.push(Vec::new());
                    languages.len() - 1
                }
            };
            if !seen.insert(l) {
                return Err(parse_err(path, lineno, format!("language `{lang}` appears twice")));
            }
            tokens[l] = body.split_whitespace().map(str::to_owned).collect();
        }
        documents.push(RawDocument {
            doc_id,
            labels,
            tokens,
        });
    }
    if documents.is_empty() {
        return Err(Error::NoDocuments);
    }
    for doc in &mut documents {
        doc.tokens.resize(languages.len(), Vec::new());
    }
    Ok(RawCorpus {
        documents,
        languages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_doc_corpus() -> Corpus {
        Corpus::new(
            vec![
                Document::new("a", vec![vec![0, 1, 0], vec![2]], vec![1]),
                Document::new("b", vec![vec![], vec![0, 1]], vec![0, 1]),
            ],
            vec![
                Vocabulary::new(0, vec!["x".into(), "y".into()]).unwrap(),
                Vocabulary::new(1, vec!["p".into(), "q".into(), "r".into()]).unwrap(),
            ],
            vec!["Population Studies".into(), "Developmental Psychology".into()],
        )
        .unwrap()
    }

    #[test]
    fn save_then_load_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        let corpus = two_doc_corpus();
        save_corpus(&corpus, &path).unwrap();
        assert_eq!(load_corpus(&path).unwrap(), corpus);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a\t1\t0: 0 1 0\t1: 2\nb\t0,1\t0:\t1: 0 1\n");
    }

    #[test]
    fn label_out_of_range_names_document() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        save_corpus(&two_doc_corpus(), &path).unwrap();
        fs::write(&path, "a\t0\t0: 0\nbad-doc\t2\t0: 1\n").unwrap();
        let err = load_corpus(&path).unwrap_err();
        assert!(matches!(err, Error::LabelOutOfRange { ref doc_id, label: 2, .. } if doc_id == "bad-doc"));
    }

    #[test]
    fn token_out_of_range_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        save_corpus(&two_doc_corpus(), &path).unwrap();
        fs::write(&path, "a\t0\t1: 3\n").unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::TokenOutOfRange { token: 3, .. })));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        save_corpus(&two_doc_corpus(), &path).unwrap();
        fs::write(&path, "a\t0\t0: 0\nb\t0\t0 1 1\n").unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::Parse { line: 2, .. })));
        fs::write(&path, "a\t0\t0: 0 z\n").unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_file_has_no_documents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        save_corpus(&two_doc_corpus(), &path).unwrap();
        fs::write(&path, "").unwrap();
        let err = load_corpus(&path).unwrap_err();
        assert_eq!(err.to_string(), "no documents");
    }

    #[test]
    fn raw_reader_orders_languages_by_first_appearance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.tsv");
        fs::write(
            &path,
            "d1\tA,B\tthesoz: child adolescent\tabstract: kinder entwicklung\nd2\t\tabstract: wandel\n",
        )
        .unwrap();
        let raw = read_raw_documents(&path, None).unwrap();
        assert_eq!(raw.languages, vec!["thesoz", "abstract"]);
        assert_eq!(raw.documents[1].tokens, vec![Vec::<String>::new(), vec!["wandel".to_string()]]);
        assert_eq!(raw.documents[0].labels, vec!["A", "B"]);

        let order = vec!["abstract".to_string(), "thesoz".to_string()];
        let raw = read_raw_documents(&path, Some(&order)).unwrap();
        assert_eq!(raw.documents[0].tokens[0], vec!["kinder", "entwicklung"]);
        let only = vec!["abstract".to_string()];
        assert!(read_raw_documents(&path, Some(&only)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trip_random_corpora(
            docs in prop::collection::vec(
                (prop::collection::vec(0u32..4, 0..3),
                 prop::collection::vec(0u32..5, 0..12),
                 prop::collection::vec(0u32..3, 0..12)),
                1..10),
        ) {
            let documents = docs
                .into_iter()
                .enumerate()
                .map(|(i, (labels, t0, t1))| Document::new(format!("doc {i}"), vec![t0, t1], labels))
                .collect();
            let corpus = Corpus::new(
                documents,
                vec![
                    Vocabulary::new(0, (0..5).map(|i| format!("a{i}")).collect()).unwrap(),
                    Vocabulary::new(1, (0..3).map(|i| format!("b{i}")).collect()).unwrap(),
                ],
                (0..4).map(|i| format!("label {i}")).collect(),
            ).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("c.tsv");
            save_corpus(&corpus, &path).unwrap();
            prop_assert_eq!(load_corpus(&path).unwrap(), corpus);
        }
    }
}
