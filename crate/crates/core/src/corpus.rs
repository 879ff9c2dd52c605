//! Corpus ingestion: Blog Authorship Corpus files in, indexed bag-of-words
//! corpus out.
//!
//! Post text is pulled out of `<post>` spans leniently rather than with an XML
//! parser; the corpus has malformed markup and mixed encodings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;
use crate::stoplist::Stoplist;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBlogFile {
    pub author_id: String,
    pub post_texts: Vec<String>,
}

/// Extracts every `<post>…</post>` span from a blog file.
///
/// Bytes are decoded lossily. Residual tags inside a post are dropped and the
/// result is trimmed. The author id is the filename up to its first dot.
pub fn parse_blog_file(file_bytes: &[u8], filename: &str) -> RawBlogFile {
    let text = String::from_utf8_lossy(file_bytes);
    // ASCII lowercasing keeps byte offsets aligned with `text`.
    let lower = text.to_ascii_lowercase();
    const OPEN: &str = "<post>";
    const CLOSE: &str = "</post>";

    let mut post_texts = Vec::new();
    let mut cursor = 0;
    while let Some(rel) = lower[cursor..].find(OPEN) {
        let start = cursor + rel + OPEN.len();
        let end = lower[start..].find(CLOSE).map_or(text.len(), |e| start + e);
        let cleaned = strip_tags(&text[start..end]);
        post_texts.push(cleaned.trim().to_string());
        cursor = (end + CLOSE.len()).min(text.len());
    }
    if post_texts.is_empty() {
        log::warn!("{filename}: no <post> elements");
    }

    let base = Path::new(filename)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| filename.to_string());
    let author_id = match base.split('.').next() {
        Some(stem) if !stem.is_empty() => stem.to_string(),
        _ => base.clone(),
    };
    RawBlogFile {
        author_id: sanitize_field(&author_id),
        post_texts,
    }
}

fn strip_tags(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(open) = rest.find('<') {
        out.push_str(&rest[..open]);
        match rest[open..].find('>') {
            Some(close) => rest = &rest[open + close + 1..],
            None => {
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

fn sanitize_field(s: &str) -> String {
    s.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect()
}

/// Lowercases and splits on every non-alphabetic character, dropping tokens
/// shorter than two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| t.chars().nth(1).is_some())
        .map(str::to_lowercase)
        .collect()
}

pub fn remove_stopwords(tokens: Vec<String>, stoplist: &Stoplist) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}

/// Dense bijection between words and indices `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `word`, inserting it if unseen.
    pub fn intern(&mut self, word: &str) -> u32 {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let i = u32::try_from(self.words.len()).expect("vocabulary exceeds u32");
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), i);
        i
    }

    pub fn index(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, index: usize) -> Option<&str> {
        self.words.get(index).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorDocument {
    pub doc_id: usize,
    pub author_id: String,
    pub tokens: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub vocabulary: Vocabulary,
    pub documents: Vec<AuthorDocument>,
}

impl Corpus {
    /// Builds a corpus from already-filtered token lists, dropping empty ones.
    pub fn from_token_lists<I, S>(docs: I) -> Self
    where
        I: IntoIterator<Item = (String, Vec<S>)>,
        S: AsRef<str>,
    {
        let mut vocabulary = Vocabulary::new();
        let mut documents = Vec::new();
        for (author_id, words) in docs {
            if words.is_empty() {
                continue;
            }
            let tokens = words.iter().map(|w| vocabulary.intern(w.as_ref())).collect();
            documents.push(AuthorDocument {
                doc_id: documents.len(),
                author_id,
                tokens,
            });
        }
        Corpus { vocabulary, documents }
    }

    pub fn num_documents(&self) -> usize {
        self.documents.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn num_tokens(&self) -> usize {
        self.documents.iter().map(|d| d.tokens.len()).sum()
    }

    /// Text serialization: `D V`, the vocabulary one word per line, then
    /// `doc_id<TAB>author_id<TAB>indices` per document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_documents(), self.vocab_size());
        for w in self.vocabulary.words() {
            out.push_str(w);
            out.push('\n');
        }
        for doc in &self.documents {
            let _ = write!(out, "{}\t{}\t", doc.doc_id, doc.author_id);
            for (n, t) in doc.tokens.iter().enumerate() {
                if n > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{t}");
            }
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the serialized corpus; every downstream artifact carries it.
    pub fn fingerprint(&self) -> String {
        io::fingerprint(self.to_text().as_bytes())
    }

    pub fn parse(text: &str) -> Result<Corpus> {
        const CTX: &str = "corpus";
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| Error::parse(CTX, 1, "missing header"))?;
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| -> Result<usize> {
            parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(CTX, 1, format!("header needs `D V`, bad {name}")))
        };
        let d = field("D")?;
        let v = field("V")?;

        let mut vocabulary = Vocabulary::new();
        for _ in 0..v {
            let (n, word) = lines
                .next()
                .ok_or_else(|| Error::parse(CTX, 0, "truncated vocabulary"))?;
            if word.is_empty() || vocabulary.index(word).is_some() {
                return Err(Error::parse(CTX, n, format!("empty or duplicate word {word:?}")));
            }
            vocabulary.intern(word);
        }

        let mut documents = Vec::with_capacity(d);
        for expected in 0..d {
            let (n, line) = lines
                .next()
                .ok_or_else(|| Error::parse(CTX, 0, "truncated document list"))?;
            let mut cols = line.splitn(3, '\t');
            let doc_id: usize = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(CTX, n, "bad doc_id"))?;
            if doc_id != expected {
                return Err(Error::parse(CTX, n, format!("expected doc_id {expected}, got {doc_id}")));
            }
            let author_id = cols
                .next()
                .ok_or_else(|| Error::parse(CTX, n, "missing author_id"))?
                .to_string();
            let tokens = cols
                .next()
                .unwrap_or("")
                .split_whitespace()
                .map(|t| match t.parse::<u32>() {
                    Ok(i) if (i as usize) < v => Ok(i),
                    _ => Err(Error::parse(CTX, n, format!("bad token index {t:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if tokens.is_empty() {
                return Err(Error::parse(CTX, n, "document has no tokens"));
            }
            documents.push(AuthorDocument { doc_id, author_id, tokens });
        }
        if let Some((n, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(Error::parse(CTX, n, format!("trailing content {extra:?}")));
        }
        Ok(Corpus { vocabulary, documents })
    }

    pub fn load(path: &Path) -> Result<Corpus> {
        Corpus::parse(&io::read_to_string(path)?)
    }
}

/// Ingested corpus plus each retained document's aggregated text.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub texts: Vec<String>,
}

/// Reads every `.xml` file in `dir` in lexicographic filename order and
/// builds one document per author.
pub fn ingest_directory(dir: &Path, stoplist: &Stoplist) -> Result<Ingested> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|ext| ext.eq_ignore_ascii_case("xml"))
        })
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(Error::EmptyCorpus(format!("{} contains no .xml files", dir.display())));
    }

    let mut raw_docs = Vec::new();
    let mut texts = Vec::new();
    for path in &files {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                continue;
            }
        };
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        let raw = parse_blog_file(&bytes, &name);
        let text = raw.post_texts.join(" ");
        let tokens = remove_stopwords(tokenize(&text), stoplist);
        if tokens.is_empty() {
            log::warn!("dropping {}: no tokens after filtering", path.display());
            continue;
        }
        raw_docs.push((raw.author_id, tokens));
        texts.push(text);
    }
    let corpus = Corpus::from_token_lists(raw_docs);
    if corpus.documents.is_empty() {
        return Err(Error::EmptyCorpus(format!(
            "every file in {} was empty after filtering",
            dir.display()
        )));
    }
    Ok(Ingested { corpus, texts })
}

pub fn build_corpus(dir: &Path, stoplist: &Stoplist) -> Result<Corpus> {
    ingest_directory(dir, stoplist).map(|i| i.corpus)
}

/// Byte range of one document inside a text store file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TextSpan {
    pub offset: u64,
    pub len: u64,
}

/// Serializes document texts as `doc_id<TAB>byte_len\n<bytes>\n` records.
pub fn texts_to_bytes(texts: &[String]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, t) in texts.iter().enumerate() {
        out.extend_from_slice(format!("{i}\t{}\n", t.len()).as_bytes());
        out.extend_from_slice(t.as_bytes());
        out.push(b'\n');
    }
    out
}

/// Locates each record of a text store, validating ids are `0..n` in order.
pub fn parse_text_spans(bytes: &[u8]) -> Result<Vec<TextSpan>> {
    const CTX: &str = "text store";
    let mut spans = Vec::new();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let record = spans.len() + 1;
        let nl = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::parse(CTX, record, "unterminated record header"))?;
        let header = std::str::from_utf8(&bytes[pos..pos + nl])
            .map_err(|_| Error::parse(CTX, record, "non-utf8 record header"))?;
        let (id, len) = header
            .split_once('\t')
            .ok_or_else(|| Error::parse(CTX, record, "record header needs `id<TAB>len`"))?;
        let id: usize = id.parse().map_err(|_| Error::parse(CTX, record, "bad doc id"))?;
        let len: usize = len.parse().map_err(|_| Error::parse(CTX, record, "bad length"))?;
        if id != spans.len() {
            return Err(Error::parse(CTX, record, format!("expected doc {}, got {id}", spans.len())));
        }
        let start = pos + nl + 1;
        let end = start + len;
        if end > bytes.len() || bytes.get(end) != Some(&b'\n') {
            return Err(Error::parse(CTX, record, "record body truncated"));
        }
        spans.push(TextSpan { offset: start as u64, len: len as u64 });
        pos = end + 1;
    }
    Ok(spans)
}

/// Conventional location of the text store written next to a corpus file.
pub fn text_store_path(corpus_path: &Path) -> std::path::PathBuf {
    let mut s = corpus_path.as_os_str().to_owned();
    s.push(".text");
    s.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoplist;

    #[test]
    fn parses_minimal_blog() {
        let raw = parse_blog_file(
            b"<Blog><date>01,May,2004</date><post> hello world </post></Blog>",
            "123.male.24.Arts.Aries.xml",
        );
        assert_eq!(raw.author_id, "123");
        assert_eq!(raw.post_texts, vec!["hello world"]);
    }

    #[test]
    fn empty_blog_has_no_posts() {
        assert!(parse_blog_file(b"<Blog></Blog>", "9.xml").post_texts.is_empty());
    }

    #[test]
    fn posts_keep_document_order() {
        let raw = parse_blog_file(b"<Blog><post>a b</post>\n<date>x</date><post>\nc\n</post></Blog>", "1.xml");
        assert_eq!(raw.post_texts, vec!["a b", "c"]);
    }

    #[test]
    fn residual_tags_and_bad_bytes_are_tolerated() {
        let raw = parse_blog_file(b"<post>keep <b>bold</b> \xff text</post><post>open", "x.y.xml");
        assert_eq!(raw.post_texts[0], "keep bold \u{fffd} text");
        assert_eq!(raw.post_texts[1], "open");
        assert_eq!(raw.author_id, "x");
    }

    #[test]
    fn tokenizer_rules() {
        assert_eq!(tokenize("Hello, World!"), vec!["hello", "world"]);
        assert!(tokenize("I a").is_empty());
        assert_eq!(tokenize("don't stop"), vec!["don", "stop"]);
        assert_eq!(tokenize("abc123def x9yz"), vec!["abc", "def", "yz"]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn stopword_removal() {
        let stop = stoplist::parse("the a an");
        let words = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(remove_stopwords(words(&["the", "cat", "sat"]), &stop), words(&["cat", "sat"]));
        assert!(remove_stopwords(vec![], &stop).is_empty());
        assert!(remove_stopwords(words(&["the", "the"]), &stoplist::parse("the")).is_empty());
    }

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn build_counts_documents_and_vocabulary() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "1.xml", "<Blog><post>cat dog</post></Blog>");
        write(dir.path(), "2.xml", "<Blog><post>dog bird</post></Blog>");
        let c = build_corpus(dir.path(), &Stoplist::new()).unwrap();
        assert_eq!(c.num_documents(), 2);
        assert_eq!(c.vocab_size(), 3);
    }

    #[test]
    fn all_stopword_file_is_excluded() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "1.xml", "<Blog><post>cat dog</post></Blog>");
        write(dir.path(), "2.xml", "<Blog><post>the the an</post></Blog>");
        write(dir.path(), "3.xml", "<Blog></Blog>");
        let c = build_corpus(dir.path(), &stoplist::english()).unwrap();
        assert_eq!(c.num_documents(), 1);
    }

    #[test]
    fn doc_ids_follow_filename_order() {
        let dir = tempfile::tempdir().unwrap();
        for n in ["c", "a", "b"] {
            write(dir.path(), &format!("{n}.xml"), &format!("<post>word{n} zz</post>"));
        }
        write(dir.path(), "ignored.txt", "<post>nope</post>");
        let c = build_corpus(dir.path(), &Stoplist::new()).unwrap();
        let authors: Vec<_> = c.documents.iter().map(|d| d.author_id.as_str()).collect();
        assert_eq!(authors, ["a", "b", "c"]);
        assert_eq!(c.documents.iter().map(|d| d.doc_id).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn empty_directory_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(build_corpus(dir.path(), &Stoplist::new()), Err(Error::EmptyCorpus(_))));
    }

    #[test]
    fn token_count_matches_post_sum() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "1.xml", "<post>the red fox</post><post>jumps the fence</post>");
        let stop = stoplist::parse("the");
        let c = build_corpus(dir.path(), &stop).unwrap();
        assert_eq!(c.documents[0].tokens.len(), 4);
    }

    #[test]
    fn serialization_round_trips() {
        let c = Corpus::from_token_lists(vec![
            ("a".to_string(), vec!["x", "y", "x"]),
            ("b".to_string(), vec!["z"]),
        ]);
        let text = c.to_text();
        assert_eq!(text, "2 3\nx\ny\nz\n0\ta\t0 1 0\n1\tb\t2\n");
        assert_eq!(Corpus::parse(&text).unwrap(), c);
    }

    #[test]
    fn parse_rejects_out_of_range_token() {
        let err = Corpus::parse("1 1\nx\n0\ta\t0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn text_store_round_trips() {
        let texts = vec!["hello\nworld".to_string(), String::new(), "ünï".to_string()];
        let bytes = texts_to_bytes(&texts);
        let spans = parse_text_spans(&bytes).unwrap();
        for (t, s) in texts.iter().zip(&spans) {
            let slice = &bytes[s.offset as usize..(s.offset + s.len) as usize];
            assert_eq!(slice, t.as_bytes());
        }
        assert!(parse_text_spans(&bytes[..bytes.len() - 2]).is_err());
    }
}
