//! URL extraction and list-based labeling.
//!
//! Hosts are checked against a suffix whitelist first, then against a
//! category blacklist laid out like a Shalla list directory
//! (`<dir>/<category>/domains`). Anything left over is benign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::ingest::PostThread;

#[derive(Debug, Error)]
pub enum UrlError {
    #[error("url `{0}` has an empty host")]
    EmptyHost(String),
    #[error("url `{0}` does not start with http:// or https://")]
    NotHttp(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown label class `{0}`")]
    UnknownClass(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Light,
    Critical,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Light => "light",
            Severity::Critical => "critical",
        }
    }
}

/// Blacklist categories that carry a severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Advertising,
    Shopping,
    Gamble,
    Porn,
    Download,
    Hacking,
    Spyware,
    Aggressive,
    Drugs,
    Weapons,
    Violence,
}

impl Category {
    pub const ALL: [Category; 11] = [
        Category::Advertising,
        Category::Shopping,
        Category::Gamble,
        Category::Porn,
        Category::Download,
        Category::Hacking,
        Category::Spyware,
        Category::Aggressive,
        Category::Drugs,
        Category::Weapons,
        Category::Violence,
    ];

    pub fn severity(self) -> Severity {
        use Category::*;
        match self {
            Advertising | Shopping | Gamble | Porn => Severity::Light,
            Download | Hacking | Spyware | Aggressive | Drugs | Weapons | Violence => Severity::Critical,
        }
    }

    pub fn as_str(self) -> &'static str {
        use Category::*;
        match self {
            Advertising => "advertising",
            Shopping => "shopping",
            Gamble => "gamble",
            Porn => "porn",
            Download => "download",
            Hacking => "hacking",
            Spyware => "spyware",
            Aggressive => "aggressive",
            Drugs => "drugs",
            Weapons => "weapons",
            Violence => "violence",
        }
    }
}

impl FromStr for Category {
    type Err = UrlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == lower)
            .ok_or_else(|| UrlError::UnknownCategory(s.to_string()))
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Label assigned to a single URL. Light and Critical labels always carry
/// their category; the severity is implied by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UrlLabel {
    Whitelist,
    Benign,
    Blacklisted(Category),
}

impl UrlLabel {
    pub fn class_str(self) -> &'static str {
        match self {
            UrlLabel::Whitelist => "whitelist",
            UrlLabel::Benign => "benign",
            UrlLabel::Blacklisted(c) => c.severity().as_str(),
        }
    }

    pub fn category(self) -> Option<Category> {
        match self {
            UrlLabel::Blacklisted(c) => Some(c),
            _ => None,
        }
    }

    pub fn severity(self) -> Option<Severity> {
        self.category().map(Category::severity)
    }

    /// Ordering used when several URLs share a comment: whitelist < benign
    /// < light < critical.
    pub fn rank(self) -> u8 {
        match self {
            UrlLabel::Whitelist => 0,
            UrlLabel::Benign => 1,
            UrlLabel::Blacklisted(c) => match c.severity() {
                Severity::Light => 2,
                Severity::Critical => 3,
            },
        }
    }

    /// Parses the `(label_class, label_category)` pair used in CSV files.
    pub fn from_parts(class: &str, category: &str) -> Result<Self, UrlError> {
        match class {
            "whitelist" => Ok(UrlLabel::Whitelist),
            "benign" => Ok(UrlLabel::Benign),
            "light" | "critical" => {
                let c: Category = category.parse()?;
                if c.severity().as_str() != class {
                    return Err(UrlError::UnknownCategory(format!("{class}/{category}")));
                }
                Ok(UrlLabel::Blacklisted(c))
            }
            other => Err(UrlError::UnknownClass(other.to_string())),
        }
    }
}

impl fmt::Display for UrlLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.category() {
            Some(c) => write!(f, "{}({})", self.class_str(), c),
            None => f.write_str(self.class_str()),
        }
    }
}

const CLOSING: &[char] = &['"', '\'', '<', '>', ')', ']', '}'];

fn ends_url(c: char) -> bool {
    c.is_whitespace() || CLOSING.contains(&c)
}

/// Every substring starting with `http://` or `https://` and running to the
/// next whitespace or closing delimiter, in order of appearance.
pub fn extract_urls(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let Some(start) = find_scheme(rest) else { break };
        let url_start = pos + start;
        let tail = &text[url_start..];
        let len = tail.find(ends_url).unwrap_or(tail.len());
        out.push(&text[url_start..url_start + len]);
        pos = url_start + len;
    }
    out
}

fn find_scheme(s: &str) -> Option<usize> {
    match (s.find("http://"), s.find("https://")) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Lowercased host of an http(s) URL, with port and a leading `www.`
/// removed.
pub fn normalize_host(url: &str) -> Result<String, UrlError> {
    let has_prefix = |p: &str| url.len() >= p.len() && url.as_bytes()[..p.len()].eq_ignore_ascii_case(p.as_bytes());
    let rest = if has_prefix("http://") {
        &url[7..]
    } else if has_prefix("https://") {
        &url[8..]
    } else {
        return Err(UrlError::NotHttp(url.to_string()));
    };
    let authority = rest.split(['/', '?', '#']).next().unwrap_or("");
    let host_port = authority.rsplit('@').next().unwrap_or("");
    let host = if let Some(stripped) = host_port.strip_prefix('[') {
        // bracketed IPv6 literal
        stripped.split(']').next().unwrap_or("")
    } else {
        match host_port.rfind(':') {
            Some(i) => &host_port[..i],
            None => host_port,
        }
    };
    let mut host = host.trim_end_matches('.').to_ascii_lowercase();
    if let Some(s) = host.strip_prefix("www.") {
        host = s.to_string();
    }
    if host.is_empty() {
        return Err(UrlError::EmptyHost(url.to_string()));
    }
    Ok(host)
}

/// Suffix whitelist: an entry matches itself and every subdomain of itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Whitelist {
    entries: Vec<String>,
}

/// A built-in whitelist of well-known platform and news domains.
pub const DEFAULT_WHITELIST: &[&str] = &[
    "facebook.com",
    "youtube.com",
    "twitter.com",
    "on.fb.me",
    "en.wikipedia.org",
    "huffingtonpost.com",
    "foxnews.com",
    "cnn.com",
    "google.com",
    "bbc.co.uk",
    "nytimes.com",
    "washingtonpost.com",
];

impl Whitelist {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries: Vec<String> = entries
            .into_iter()
            .map(|s| s.as_ref().trim().trim_start_matches('.').to_ascii_lowercase())
            .filter(|s| !s.is_empty())
            .collect();
        entries.sort();
        entries.dedup();
        Whitelist { entries }
    }

    pub fn default_list() -> Self {
        Whitelist::new(DEFAULT_WHITELIST)
    }

    /// One suffix per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        Whitelist::new(list_lines(text))
    }

    pub fn load(path: &Path) -> Result<Self, UrlError> {
        let text = fs::read_to_string(path).map_err(|source| UrlError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Whitelist::parse(&text))
    }

    pub fn contains(&self, host: &str) -> bool {
        self.entries.iter().any(|e| is_dot_suffix(host, e))
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }
}

fn is_dot_suffix(host: &str, suffix: &str) -> bool {
    host == suffix
        || (host.len() > suffix.len()
            && host.ends_with(suffix)
            && host.as_bytes()[host.len() - suffix.len() - 1] == b'.')
}

fn list_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

/// Host → category map for the Light and Critical categories.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlacklistIndex {
    hosts: HashMap<String, Category>,
}

impl BlacklistIndex {
    /// Adds a host. A host listed under several categories keeps the most
    /// severe one (ties go to the category listed first in [`Category::ALL`]).
    pub fn insert(&mut self, host: &str, category: Category) {
        let host = host.trim().trim_end_matches('.').to_ascii_lowercase();
        let host = host.strip_prefix("www.").unwrap_or(&host).to_string();
        if host.is_empty() {
            return;
        }
        self.hosts
            .entry(host)
            .and_modify(|c| {
                if (category.severity(), std::cmp::Reverse(category)) > (c.severity(), std::cmp::Reverse(*c)) {
                    *c = category;
                }
            })
            .or_insert(category);
    }

    /// Loads `<dir>/<category>/domains` for every recognised category
    /// subdirectory. Unrecognised categories are skipped.
    pub fn load_dir(dir: &Path) -> Result<Self, UrlError> {
        let io_err = |path: &Path| {
            let path = path.display().to_string();
            move |source| UrlError::Io { path, source }
        };
        let mut index = BlacklistIndex::default();
        let mut entries: Vec<_> = fs::read_dir(dir)
            .map_err(io_err(dir))?
            .collect::<Result<_, _>>()
            .map_err(io_err(dir))?;
        entries.sort_by_key(|e| e.file_name());
        for entry in entries {
            let name = entry.file_name().to_string_lossy().to_string();
            let Ok(category) = name.parse::<Category>() else {
                continue;
            };
            let domains = entry.path().join("domains");
            if !domains.is_file() {
                continue;
            }
            let text = fs::read_to_string(&domains).map_err(io_err(&domains))?;
            for host in list_lines(&text) {
                index.insert(host, category);
            }
        }
        Ok(index)
    }

    /// Exact host first, then each parent domain obtained by dropping the
    /// left-most label.
    pub fn lookup(&self, host: &str) -> Option<Category> {
        let mut candidate = host;
        loop {
            if let Some(c) = self.hosts.get(candidate) {
                return Some(*c);
            }
            let i = candidate.find('.')?;
            candidate = &candidate[i + 1..];
        }
    }

    pub fn len(&self) -> usize {
        self.hosts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hosts.is_empty()
    }

    /// Hosts grouped by category, sorted, for writing list directories.
    pub fn by_category(&self) -> BTreeMap<Category, Vec<&str>> {
        let mut out: BTreeMap<Category, Vec<&str>> = BTreeMap::new();
        for (h, c) in &self.hosts {
            out.entry(*c).or_default().push(h);
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    /// Writes the Shalla-style directory layout read by [`load_dir`](Self::load_dir).
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        for (category, hosts) in self.by_category() {
            let sub = dir.join(category.as_str());
            fs::create_dir_all(&sub)?;
            let mut text = String::new();
            for h in hosts {
                text.push_str(h);
                text.push('\n');
            }
            fs::write(sub.join("domains"), text)?;
        }
        Ok(())
    }
}

pub fn classify_url(host: &str, whitelist: &Whitelist, index: &BlacklistIndex) -> UrlLabel {
    if whitelist.contains(host) {
        return UrlLabel::Whitelist;
    }
    match index.lookup(host) {
        Some(c) => UrlLabel::Blacklisted(c),
        None => UrlLabel::Benign,
    }
}

/// Worst label among the URLs in `text`, or `None` when it has no
/// parseable URL.
pub fn classify_text(text: &str, whitelist: &Whitelist, index: &BlacklistIndex) -> Option<UrlLabel> {
    let mut worst: Option<UrlLabel> = None;
    for url in extract_urls(text) {
        let Ok(host) = normalize_host(url) else { continue };
        let label = classify_url(&host, whitelist, index);
        if worst.is_none_or(|w| label.rank() > w.rank()) {
            worst = Some(label);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFlag {
    Target,
    NonTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreadLabel {
    pub worst: Option<Severity>,
}

impl ThreadLabel {
    pub fn value(&self) -> TargetFlag {
        if self.worst.is_some() {
            TargetFlag::Target
        } else {
            TargetFlag::NonTarget
        }
    }

    pub fn is_target(&self) -> bool {
        self.worst.is_some()
    }

    pub fn worst_str(&self) -> &'static str {
        self.worst.map_or("none", Severity::as_str)
    }
}

pub fn label_thread(thread: &PostThread, whitelist: &Whitelist, index: &BlacklistIndex) -> ThreadLabel {
    let worst = thread
        .text_activities()
        .filter_map(|a| a.text.as_deref())
        .filter_map(|t| classify_text(t, whitelist, index))
        .filter_map(UrlLabel::severity)
        .max();
    ThreadLabel { worst }
}
