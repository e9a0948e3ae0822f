//! TREC SGML corpus reader (`<DOC>`, `<DOCNO>`, `<TEXT>`).

use std::collections::HashSet;

use super::RetrievalError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrecDoc {
    pub docno: String,
    /// Contents of every `<TEXT>` section, newline-joined.
    pub text: String,
}

fn between<'a>(hay: &'a str, open: &str, close: &str) -> Result<Option<(&'a str, &'a str)>, String> {
    let Some(s) = hay.find(open) else { return Ok(None) };
    let rest = &hay[s + open.len()..];
    let e = rest.find(close).ok_or_else(|| format!("{open} without {close}"))?;
    Ok(Some((&rest[..e], &rest[e + close.len()..])))
}

/// Parses every document. Tags are matched case-sensitively, as in TREC data.
pub fn parse_corpus(text: &str) -> Result<Vec<TrecDoc>, RetrievalError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    let mut rest = text;
    loop {
        let ordinal = docs.len() + 1;
        let ctx_err = |context: String, message: String| RetrievalError::Corpus { context, message };
        let block = match between(rest, "<DOC>", "</DOC>") {
            Ok(Some((block, tail))) => {
                rest = tail;
                block
            }
            Ok(None) => break,
            Err(m) => {
                let docno = between(rest, "<DOCNO>", "</DOCNO>").ok().flatten().map(|(d, _)| d.trim().to_string());
                return Err(ctx_err(docno.unwrap_or_else(|| format!("#{ordinal}")), m));
            }
        };
        let docno = match between(block, "<DOCNO>", "</DOCNO>") {
            Ok(Some((d, _))) if !d.trim().is_empty() => d.trim().to_string(),
            Ok(_) => return Err(ctx_err(format!("#{ordinal}"), "missing DOCNO".into())),
            Err(m) => return Err(ctx_err(format!("#{ordinal}"), m)),
        };
        let mut body = Vec::new();
        let mut tail = block;
        loop {
            match between(tail, "<TEXT>", "</TEXT>") {
                Ok(Some((t, after))) => {
                    body.push(t.trim());
                    tail = after;
                }
                Ok(None) => break,
                Err(m) => return Err(ctx_err(docno, m)),
            }
        }
        if block.contains("<DOC>") {
            return Err(ctx_err(docno, "nested <DOC>".into()));
        }
        if !seen.insert(docno.clone()) {
            return Err(RetrievalError::DuplicateDocno(docno));
        }
        docs.push(TrecDoc { docno, text: body.join("\n") });
    }
    if docs.is_empty() {
        return Err(RetrievalError::EmptyCorpus);
    }
    Ok(docs)
}
