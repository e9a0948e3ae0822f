//! Tokenization and normalization shared by every module.
//!
//! All term statistics (Wikipedia tf/df, retrieval postings) go through
//! [`tokens`] so that counts computed by different modules agree.

/// Splits `text` on any non-alphanumeric character, preserving order and case.
pub fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
}

/// Case-folded tokens of `text`.
pub fn tokens(text: &str) -> Vec<String> {
    words(text).map(str::to_lowercase).collect()
}

/// Normalizes a Wikipedia title: case-fold, underscores become spaces,
/// runs of whitespace collapse to one space, ends trimmed.
pub fn normalize_title(title: &str) -> String {
    collapse(&title.replace('_', " ").to_lowercase())
}

/// Normalizes a WordNet lemma or lookup unit to the space-joined lowercase form.
pub fn normalize_lemma(lemma: &str) -> String {
    normalize_title(lemma)
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Number of positions where `needle` occurs as a contiguous run in `haystack`.
pub fn count_sequence<T: PartialEq>(haystack: &[T], needle: &[T]) -> usize {
    match needle.len() {
        0 => 0,
        1 => haystack.iter().filter(|t| **t == needle[0]).count(),
        n if n > haystack.len() => 0,
        n => haystack.windows(n).filter(|w| *w == needle).count(),
    }
}
