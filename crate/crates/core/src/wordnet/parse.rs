//! Reader for the standard WordNet database files (`data.*`, `index.*`).

use std::fs;
use std::path::Path;

use super::{LexicalStore, Pos, Synset, SynsetId, WordNetError};

const HYPONYM_POINTER: &str = "~";

pub(super) fn load_dir(dir: &Path) -> Result<LexicalStore, WordNetError> {
    for pos in Pos::ALL {
        for kind in ["index", "data"] {
            let path = dir.join(format!("{kind}.{}", pos.file_suffix()));
            if !path.is_file() {
                return Err(WordNetError::Missing { file: path.display().to_string() });
            }
        }
    }

    let mut synsets = Vec::new();
    for pos in Pos::ALL {
        let path = dir.join(format!("data.{}", pos.file_suffix()));
        let text = read(&path)?;
        synsets.extend(parse_data(&text, pos, &path.display().to_string())?);
    }
    let known: std::collections::HashSet<SynsetId> = synsets.iter().map(|s| s.id).collect();
    for s in &synsets {
        for h in &s.hyponyms {
            if !known.contains(h) {
                return Err(WordNetError::Corrupt {
                    file: dir.join(format!("data.{}", s.id.pos.file_suffix())).display().to_string(),
                    line: 0,
                    message: format!("synset {} points to missing hyponym {h}", s.id),
                });
            }
        }
    }

    let mut senses = Vec::new();
    for pos in Pos::ALL {
        let path = dir.join(format!("index.{}", pos.file_suffix()));
        let text = read(&path)?;
        let file = path.display().to_string();
        for (lineno, lemma, ids) in parse_index(&text, pos, &file)? {
            if let Some(missing) = ids.iter().find(|id| !known.contains(id)) {
                return Err(WordNetError::Corrupt {
                    file,
                    line: lineno,
                    message: format!("lemma {lemma:?} references unknown synset {missing}"),
                });
            }
            senses.push((lemma, ids));
        }
    }
    Ok(LexicalStore::with_index(synsets, senses))
}

fn read(path: &Path) -> Result<String, WordNetError> {
    let bytes = fs::read(path)?;
    String::from_utf8(bytes).map_err(|e| WordNetError::Corrupt {
        file: path.display().to_string(),
        line: 0,
        message: format!("not valid UTF-8: {e}"),
    })
}

/// License header lines in the distributed files start with two spaces.
fn is_header(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

fn parse_data(text: &str, pos: Pos, file: &str) -> Result<Vec<Synset>, WordNetError> {
    let mut out = Vec::new();
    let mut offset = 0u64;
    for (i, raw) in text.split_inclusive('\n').enumerate() {
        let line_offset = offset;
        offset += raw.len() as u64;
        let line = raw.trim_end_matches(['\n', '\r']);
        if is_header(line) {
            continue;
        }
        let corrupt = |message: String| WordNetError::Corrupt { file: file.to_string(), line: i + 1, message };
        let (fields, gloss) = match line.split_once(" | ") {
            Some((f, g)) => (f, g.trim()),
            None => (line.trim_end_matches(" |"), ""),
        };
        let mut it = fields.split_ascii_whitespace();
        let mut next = |what: &str| it.next().ok_or_else(|| corrupt(format!("missing {what}")));

        let stated: u64 = next("synset offset")?.parse().map_err(|_| corrupt("bad synset offset".into()))?;
        if stated != line_offset {
            return Err(corrupt(format!("synset offset {stated} does not match byte position {line_offset}")));
        }
        next("lexicographer file number")?;
        let ss_type = next("synset type")?;
        if Pos::from_symbol(ss_type) != Some(pos) {
            return Err(corrupt(format!("synset type {ss_type:?} in {} file", pos.file_suffix())));
        }
        let w_cnt = usize::from_str_radix(next("word count")?, 16).map_err(|_| corrupt("bad word count".into()))?;
        let mut lemmas = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            let word = next("word")?;
            next("lex id")?;
            lemmas.push(strip_marker(word).to_string());
        }
        if lemmas.is_empty() {
            return Err(corrupt("synset without lemmas".into()));
        }
        let p_cnt: usize = next("pointer count")?.parse().map_err(|_| corrupt("bad pointer count".into()))?;
        let mut hyponyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target: u64 = next("pointer offset")?.parse().map_err(|_| corrupt("bad pointer offset".into()))?;
            let tpos = next("pointer pos")?;
            next("pointer source/target")?;
            let tpos = Pos::from_symbol(tpos).ok_or_else(|| corrupt(format!("bad pointer pos {tpos:?}")))?;
            if symbol == HYPONYM_POINTER && tpos == pos {
                hyponyms.push(SynsetId { pos, offset: target });
            }
        }
        out.push(Synset { id: SynsetId { pos, offset: line_offset }, lemmas, gloss: gloss.to_string(), hyponyms });
    }
    Ok(out)
}

/// Adjective lemmas may carry a syntactic marker such as `(a)` or `(ip)`.
fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(p) if word.ends_with(')') => &word[..p],
        _ => word,
    }
}

type IndexEntry = (usize, String, Vec<SynsetId>);

fn parse_index(text: &str, pos: Pos, file: &str) -> Result<Vec<IndexEntry>, WordNetError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if is_header(line) {
            continue;
        }
        let corrupt = |message: &str| WordNetError::Corrupt { file: file.to_string(), line: i + 1, message: message.to_string() };
        let f: Vec<&str> = line.split_ascii_whitespace().collect();
        if f.len() < 6 {
            return Err(corrupt("too few fields"));
        }
        let lemma = f[0].to_string();
        if Pos::from_symbol(f[1]) != Some(pos) {
            return Err(corrupt("part of speech does not match file"));
        }
        let synset_cnt: usize = f[2].parse().map_err(|_| corrupt("bad synset count"))?;
        let p_cnt: usize = f[3].parse().map_err(|_| corrupt("bad pointer count"))?;
        let first = 4 + p_cnt + 2;
        if f.len() != first + synset_cnt {
            return Err(corrupt("field count does not match synset count"));
        }
        let ids = f[first..]
            .iter()
            .map(|o| o.parse::<u64>().map(|offset| SynsetId { pos, offset }))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| corrupt("bad synset offset"))?;
        out.push((i + 1, lemma, ids));
    }
    Ok(out)
}
