//! Record parsing (JSONL, CSV, delicious-style RSS), tag normalization and
//! per-URL aggregation.
//!
//! Parsing keeps only the URL, the submission time and the tag list; any
//! other fields in the input are dropped. Aggregation unions tag sets per
//! distinct URL, so memory scales with distinct URLs and tags rather than
//! input size.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use serde::Deserialize;

use crate::error::{Error, Result};

/// One tagged bookmark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostRecord {
    pub url: String,
    /// Submission time as given in the input (ISO-8601 / RFC-822 text).
    pub time: Option<String>,
    pub tags: Vec<String>,
}

/// How raw tags are canonicalized before entering the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizationPolicy {
    pub case_fold: bool,
    pub trim_whitespace: bool,
    pub drop_empty: bool,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        Self { case_fold: true, trim_whitespace: true, drop_empty: true }
    }
}

/// Distinct URL -> set of normalized tags. Ordered so that downstream id
/// assignment is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemTagSets {
    map: BTreeMap<String, BTreeSet<String>>,
}

impl ItemTagSets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, url: &str, tags: impl IntoIterator<Item = String>) {
        self.map.entry(url.to_owned()).or_default().extend(tags);
    }

    /// Unions another aggregate into this one. Commutative.
    pub fn merge(&mut self, other: ItemTagSets) {
        for (url, tags) in other.map {
            self.map.entry(url).or_default().extend(tags);
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, url: &str) -> Option<&BTreeSet<String>> {
        self.map.get(url)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.map.iter().map(|(u, t)| (u.as_str(), t))
    }

    pub fn distinct_tag_count(&self) -> usize {
        let mut all = BTreeSet::new();
        for tags in self.map.values() {
            all.extend(tags.iter().map(|t| t.as_str()));
        }
        all.len()
    }
}

#[derive(Deserialize)]
struct JsonlRecord {
    url: Option<String>,
    #[serde(default)]
    time: Option<String>,
    tags: Option<serde_json::Value>,
}

/// Parses one JSON-lines record. `line_no` is 1-based and only used for
/// error messages.
pub fn parse_jsonl_record(line: &str, line_no: usize) -> Result<PostRecord> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let raw: JsonlRecord =
        serde_json::from_str(line).map_err(|e| err(format!("malformed JSON: {e}")))?;
    let url = raw
        .url
        .ok_or_else(|| err("missing `url` field".into()))?;
    let url = url.trim().to_owned();
    if url.is_empty() {
        return Err(err("`url` is empty".into()));
    }
    let tags = match raw.tags {
        None => return Err(err("missing `tags` field".into())),
        Some(serde_json::Value::Array(items)) => items
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s),
                other => Err(err(format!("non-string tag: {other}"))),
            })
            .collect::<Result<Vec<_>>>()?,
        Some(other) => return Err(err(format!("`tags` is not an array: {other}"))),
    };
    Ok(PostRecord { url, time: raw.time, tags })
}

/// Reads a whole JSONL stream, skipping blank lines.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<PostRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_jsonl_record(&line, i + 1)?);
    }
    Ok(out)
}

/// Reads CSV with a required `url,time,tags` header; `tags` is a
/// space-separated list.
pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<PostRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, msg: format!("bad CSV header: {e}") })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (url_ix, tags_ix) = match (col("url"), col("tags")) {
        (Some(u), Some(t)) => (u, t),
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "CSV header must contain `url` and `tags` columns".into(),
            })
        }
    };
    let time_ix = col("time");

    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Parse { line, msg: format!("bad CSV record: {e}") }
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let url = rec
            .get(url_ix)
            .map(str::trim)
            .filter(|u| !u.is_empty())
            .ok_or_else(|| Error::Parse { line, msg: "missing url".into() })?;
        let time = time_ix
            .and_then(|i| rec.get(i))
            .filter(|t| !t.is_empty())
            .map(str::to_owned);
        let tags = rec
            .get(tags_ix)
            .unwrap_or("")
            .split_whitespace()
            .map(str::to_owned)
            .collect();
        out.push(PostRecord { url: url.to_owned(), time, tags });
    }
    Ok(out)
}

/// Result of parsing an RSS document: records in item order plus the number
/// of items skipped for lacking a link.
#[derive(Debug, Clone, Default)]
pub struct RssParse {
    pub records: Vec<PostRecord>,
    pub skipped_items: usize,
}

/// Parses the delicious-style RSS subset: each `<item>` carries a `<link>`
/// and a subject element whose text is a space-separated tag list.
pub fn parse_delicious_rss(document: &str) -> Result<RssParse> {
    use quick_xml::events::Event;

    let mut reader = quick_xml::Reader::from_str(document);
    reader.config_mut().trim_text(true);

    let mut out = RssParse::default();
    let mut in_item = false;
    let mut field: Option<&'static str> = None;
    let mut link: Option<String> = None;
    let mut subject: Option<String> = None;
    let mut date: Option<String> = None;

    loop {
        match reader.read_event() {
            Err(e) => return Err(Error::Xml(e.to_string())),
            Ok(Event::Eof) => break,
            Ok(Event::Start(e)) => {
                let name = e.name();
                let local = name.local_name();
                let local = std::str::from_utf8(local.as_ref()).unwrap_or("");
                if local == "item" {
                    in_item = true;
                    link = None;
                    subject = None;
                    date = None;
                } else if in_item {
                    field = match local {
                        "link" => Some("link"),
                        "subject" => Some("subject"),
                        "date" | "pubDate" => Some("date"),
                        _ => None,
                    };
                }
            }
            Ok(Event::Text(t)) => {
                if let Some(f) = field {
                    let text = t
                        .unescape()
                        .map_err(|e| Error::Xml(e.to_string()))?
                        .into_owned();
                    match f {
                        "link" => link = Some(text),
                        "subject" => subject = Some(text),
                        _ => date = Some(text),
                    }
                }
            }
            Ok(Event::End(e)) => {
                let name = e.name();
                let local = name.local_name();
                let local = std::str::from_utf8(local.as_ref()).unwrap_or("");
                if local == "item" {
                    in_item = false;
                    match link.take().map(|l| l.trim().to_owned()).filter(|l| !l.is_empty()) {
                        Some(url) => out.records.push(PostRecord {
                            url,
                            time: date.take(),
                            tags: subject
                                .take()
                                .map(|s| s.split_whitespace().map(str::to_owned).collect())
                                .unwrap_or_default(),
                        }),
                        None => out.skipped_items += 1,
                    }
                } else {
                    field = None;
                }
            }
            Ok(_) => {}
        }
    }
    Ok(out)
}

/// Applies the policy: trim, case-fold, drop empties, dedup keeping first
/// occurrence order. Idempotent.
pub fn normalize_tags(tags: &[String], policy: &NormalizationPolicy) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for tag in tags {
        let mut t: String = if policy.trim_whitespace { tag.trim().to_owned() } else { tag.clone() };
        if policy.case_fold {
            t = t.to_lowercase();
        }
        if t.is_empty() && policy.drop_empty {
            continue;
        }
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

/// Folds records into per-URL tag sets. Order-insensitive: the result is a
/// commutative union keyed by the trimmed URL string.
pub fn aggregate_by_url(
    records: impl IntoIterator<Item = PostRecord>,
    policy: &NormalizationPolicy,
) -> ItemTagSets {
    let mut out = ItemTagSets::new();
    for rec in records {
        let url = rec.url.trim();
        if url.is_empty() {
            continue;
        }
        out.insert(url, normalize_tags(&rec.tags, policy).into_iter());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn jsonl_basic() {
        let r = parse_jsonl_record(r#"{"url":"http://a","tags":["web","blog"]}"#, 1).unwrap();
        assert_eq!(r.url, "http://a");
        assert_eq!(r.tags, strs(&["web", "blog"]));
        assert_eq!(r.time, None);
    }

    #[test]
    fn jsonl_empty_tags() {
        let r = parse_jsonl_record(r#"{"url":"http://a","tags":[]}"#, 1).unwrap();
        assert!(r.tags.is_empty());
    }

    #[test]
    fn jsonl_missing_url() {
        let e = parse_jsonl_record(r#"{"tags":["x"]}"#, 7).unwrap_err();
        assert!(e.to_string().contains("line 7"));
        assert!(e.to_string().contains("url"));
    }

    #[test]
    fn jsonl_bad_tags_and_json() {
        assert!(parse_jsonl_record(r#"{"url":"u","tags":"web"}"#, 1).is_err());
        assert!(parse_jsonl_record("{not json", 1).is_err());
    }

    #[test]
    fn jsonl_ignores_unknown_fields() {
        let r = parse_jsonl_record(
            r#"{"url":"u","tags":["a"],"creator":"bob","title":"T","time":"2005-03-26T12:00:00Z"}"#,
            1,
        )
        .unwrap();
        assert_eq!(r.time.as_deref(), Some("2005-03-26T12:00:00Z"));
    }

    #[test]
    fn rss_single_item() {
        let doc = r#"<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:dc="http://purl.org/dc/elements/1.1/" xmlns="http://purl.org/rss/1.0/">
<item><title>ignored</title><link>http://a</link><dc:subject>web design</dc:subject></item>
</rdf:RDF>"#;
        let parsed = parse_delicious_rss(doc).unwrap();
        assert_eq!(parsed.skipped_items, 0);
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].url, "http://a");
        assert_eq!(parsed.records[0].tags, strs(&["web", "design"]));
    }

    #[test]
    fn rss_whitespace_subject_and_missing_link() {
        let doc = r#"<rss><channel>
<item><link>http://a</link><subject>  web </subject></item>
<item><subject>orphan</subject></item>
</channel></rss>"#;
        let parsed = parse_delicious_rss(doc).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].tags, strs(&["web"]));
        assert_eq!(parsed.skipped_items, 1);
    }

    #[test]
    fn rss_empty_document() {
        let parsed = parse_delicious_rss("<rss><channel></channel></rss>").unwrap();
        assert!(parsed.records.is_empty());
    }

    #[test]
    fn rss_malformed() {
        assert!(parse_delicious_rss("<rss><item>").is_err() || {
            // quick-xml tolerates unclosed tags at EOF in some configs;
            // mismatched closers must error
            parse_delicious_rss("<rss></item></wrong>").is_err()
        });
    }

    #[test]
    fn csv_basic() {
        let data = "url,time,tags\nhttp://a,2005-03-26,web blog\nhttp://b,,design\n";
        let recs = read_csv(data.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].tags, strs(&["web", "blog"]));
        assert_eq!(recs[1].time, None);
    }

    #[test]
    fn normalize_fold_and_dedup() {
        let p = NormalizationPolicy::default();
        assert_eq!(normalize_tags(&strs(&[" Web", "web", "BLOG"]), &p), strs(&["web", "blog"]));
        assert_eq!(normalize_tags(&strs(&["", "  "]), &p), Vec::<String>::new());
        let no_fold = NormalizationPolicy { case_fold: false, ..p };
        assert_eq!(normalize_tags(&strs(&["Web"]), &no_fold), strs(&["Web"]));
    }

    #[test]
    fn aggregate_unions_by_url() {
        let p = NormalizationPolicy::default();
        let rec = |u: &str, tags: &[&str]| PostRecord {
            url: u.into(),
            time: None,
            tags: strs(tags),
        };
        let agg = aggregate_by_url([rec("u1", &["a", "b"]), rec("u1", &["b", "c"])], &p);
        assert_eq!(agg.len(), 1);
        assert_eq!(
            agg.get("u1").unwrap().iter().cloned().collect::<Vec<_>>(),
            strs(&["a", "b", "c"])
        );

        let agg = aggregate_by_url([rec("u1", &["a"]), rec("u2", &["a"])], &p);
        assert_eq!(agg.len(), 2);

        assert!(aggregate_by_url([], &p).is_empty());
    }

    #[test]
    fn normalize_is_idempotent() {
        let p = NormalizationPolicy::default();
        let once = normalize_tags(&strs(&["  A", "a", "B  b", ""]), &p);
        assert_eq!(normalize_tags(&once, &p), once);
    }
}
