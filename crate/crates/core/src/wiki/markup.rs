//! Minimal wikitext handling: link extraction, redirect detection and
//! markup stripping. Templates, references, comments and non-article
//! namespace links are dropped; article links render as their label.

use crate::text::normalize_title;

/// Plain text and outgoing link targets of one page.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rendered {
    pub body: String,
    /// Normalized link targets in document order, duplicates kept.
    pub links: Vec<String>,
}

const NAMESPACES: &[&str] = &[
    "book", "category", "commons", "draft", "file", "help", "image", "media", "mediawiki",
    "module", "portal", "special", "talk", "template", "timedtext", "user", "user talk", "wikipedia",
    "wikt", "wiktionary", "wp",
];

/// Returns the normalized redirect target if `text` is a redirect page body.
pub fn redirect_target(text: &str) -> Option<String> {
    let trimmed = text.trim_start();
    let head = trimmed.get(..9)?;
    if !head.eq_ignore_ascii_case("#redirect") {
        return None;
    }
    let rest = &trimmed[9..];
    let open = rest.find("[[")?;
    let close = rest[open..].find("]]")? + open;
    let inner = &rest[open + 2..close];
    let target = inner.split('|').next().unwrap_or("");
    let target = strip_fragment(target);
    let norm = normalize_title(target.trim_start_matches(':'));
    (!norm.is_empty()).then_some(norm)
}

pub fn render(text: &str) -> Rendered {
    let mut out = Rendered::default();
    render_into(text, &mut out);
    out
}

fn render_into(src: &str, out: &mut Rendered) {
    let mut i = 0;
    while i < src.len() {
        let rest = &src[i..];
        if rest.starts_with("<!--") {
            i += rest.find("-->").map_or(rest.len(), |p| p + 3);
        } else if rest.starts_with("{{") {
            i += matching_close(rest, "{{", "}}").unwrap_or(rest.len());
        } else if rest.starts_with("{|") {
            // table markers only; cell text is kept
            i += 2;
        } else if rest.starts_with("[[") {
            match matching_close(rest, "[[", "]]") {
                Some(end) => {
                    render_link(&rest[2..end - 2], out);
                    i += end;
                }
                None => {
                    out.body.push_str("[[");
                    i += 2;
                }
            }
        } else if starts_with_ci(rest, "<ref") {
            i += skip_ref(rest);
        } else if rest.starts_with('<') && looks_like_tag(rest) {
            i += rest.find('>').map_or(rest.len(), |p| p + 1);
        } else if rest.starts_with("''") {
            i += rest.bytes().take_while(|b| *b == b'\'').count();
        } else if rest.starts_with('[') && is_external(&rest[1..]) {
            let end = rest.find(']').unwrap_or(rest.len());
            if let Some((_, label)) = rest[1..end].split_once(' ') {
                out.body.push_str(label);
            }
            i += (end + 1).min(rest.len());
        } else {
            let ch = rest.chars().next().unwrap();
            out.body.push(ch);
            i += ch.len_utf8();
        }
    }
}

fn render_link(inner: &str, out: &mut Rendered) {
    let (target, label) = match top_level_pipe(inner) {
        Some(p) => (&inner[..p], Some(&inner[p + 1..])),
        None => (inner, None),
    };
    if is_namespaced(target) {
        return;
    }
    let norm = normalize_title(strip_fragment(target));
    if !norm.is_empty() {
        out.links.push(norm);
    }
    match label {
        Some(l) if !l.is_empty() => render_into(l, out),
        _ => out.body.push_str(target.trim_start_matches(':')),
    }
}

fn strip_fragment(target: &str) -> &str {
    target.split('#').next().unwrap_or("")
}

fn is_namespaced(target: &str) -> bool {
    let t = target.trim().trim_start_matches(':');
    let Some((prefix, _)) = t.split_once(':') else {
        return false;
    };
    let prefix = normalize_title(prefix);
    if NAMESPACES.contains(&prefix.as_str()) {
        return true;
    }
    // interlanguage links such as [[fr:Oiseau]]
    (2..=3).contains(&prefix.len()) && prefix.bytes().all(|b| b.is_ascii_lowercase())
}

/// Byte length up to and including the delimiter that closes the opener at
/// the start of `s`, honoring nesting.
fn matching_close(s: &str, open: &str, close: &str) -> Option<usize> {
    let mut depth = 0usize;
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        if rest.starts_with(open) {
            depth += 1;
            i += open.len();
        } else if rest.starts_with(close) {
            depth -= 1;
            i += close.len();
            if depth == 0 {
                return Some(i);
            }
        } else {
            i += rest.chars().next().map_or(1, char::len_utf8);
        }
    }
    None
}

fn top_level_pipe(inner: &str) -> Option<usize> {
    let mut depth = 0i32;
    let bytes = inner.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' if bytes.get(i + 1) == Some(&b'[') => {
                depth += 1;
                i += 1;
            }
            b']' if bytes.get(i + 1) == Some(&b']') => {
                depth -= 1;
                i += 1;
            }
            b'|' if depth == 0 => return Some(i),
            _ => {}
        }
        i += 1;
    }
    None
}

fn starts_with_ci(s: &str, prefix: &str) -> bool {
    s.get(..prefix.len()).is_some_and(|h| h.eq_ignore_ascii_case(prefix))
}

fn skip_ref(rest: &str) -> usize {
    let tag_end = match rest.find('>') {
        Some(p) => p,
        None => return rest.len(),
    };
    if rest[..tag_end].ends_with('/') {
        return tag_end + 1;
    }
    let lower = rest.to_ascii_lowercase();
    lower.find("</ref>").map_or(rest.len(), |p| p + 6)
}

fn looks_like_tag(rest: &str) -> bool {
    let mut chars = rest[1..].chars();
    match chars.next() {
        Some('/') => chars.next().is_some_and(|c| c.is_ascii_alphabetic()),
        Some(c) => c.is_ascii_alphabetic(),
        None => false,
    }
}

fn is_external(s: &str) -> bool {
    s.starts_with("http://") || s.starts_with("https://") || s.starts_with("//")
}
