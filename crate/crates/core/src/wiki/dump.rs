//! Streaming reader for MediaWiki `pages-articles` XML dumps.

use std::io::BufRead;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::WikiError;

/// One `<page>` element as it appears in the dump.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawPage {
    pub title: String,
    pub ns: i64,
    /// Target of a `<redirect title="..."/>` element, unnormalized.
    pub redirect: Option<String>,
    pub text: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    None,
    Title,
    Ns,
    Text,
}

/// Reads every page from a dump stream.
pub fn read_pages<R: BufRead>(input: R) -> Result<Vec<RawPage>, WikiError> {
    let mut reader = Reader::from_reader(input);
    reader.check_end_names(true);
    let mut buf = Vec::new();
    let mut pages = Vec::new();
    let mut page: Option<RawPage> = None;
    let mut field = Field::None;
    let mut ns_text = String::new();
    let mut depth = 0usize;

    loop {
        let offset = reader.buffer_position();
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| WikiError::Xml { offset: reader.buffer_position(), message: e.to_string() })?;
        match event {
            Event::Start(e) => {
                depth += 1;
                match e.local_name().as_ref() {
                    b"page" => page = Some(RawPage::default()),
                    b"title" if page.is_some() => field = Field::Title,
                    b"ns" if page.is_some() => {
                        field = Field::Ns;
                        ns_text.clear();
                    }
                    b"text" if page.is_some() => field = Field::Text,
                    b"redirect" => set_redirect(&e, page.as_mut(), offset)?,
                    _ => {}
                }
            }
            Event::Empty(e) => {
                if e.local_name().as_ref() == b"redirect" {
                    set_redirect(&e, page.as_mut(), offset)?;
                }
            }
            Event::End(e) => {
                depth = depth.saturating_sub(1);
                match e.local_name().as_ref() {
                    b"page" => {
                        if let Some(p) = page.take() {
                            pages.push(p);
                        }
                    }
                    b"ns" => {
                        if let Some(p) = page.as_mut() {
                            p.ns = ns_text.trim().parse().map_err(|_| WikiError::Xml {
                                offset,
                                message: format!("invalid namespace number {:?}", ns_text.trim()),
                            })?;
                        }
                        field = Field::None;
                    }
                    b"title" | b"text" => field = Field::None,
                    _ => {}
                }
            }
            Event::Text(t) => {
                if field != Field::None {
                    let s = t.unescape().map_err(|e| WikiError::Xml { offset, message: e.to_string() })?;
                    push_field(page.as_mut(), field, &s, &mut ns_text);
                }
            }
            Event::CData(c) => {
                if field != Field::None {
                    let s = String::from_utf8_lossy(&c);
                    push_field(page.as_mut(), field, &s, &mut ns_text);
                }
            }
            Event::Eof => {
                if depth != 0 {
                    return Err(WikiError::Xml {
                        offset: reader.buffer_position(),
                        message: "unexpected end of input inside an open element".into(),
                    });
                }
                break;
            }
            _ => {}
        }
        buf.clear();
    }
    Ok(pages)
}

fn push_field(page: Option<&mut RawPage>, field: Field, s: &str, ns_text: &mut String) {
    let Some(p) = page else { return };
    match field {
        Field::Title => p.title.push_str(s),
        Field::Text => p.text.push_str(s),
        Field::Ns => ns_text.push_str(s),
        Field::None => {}
    }
}

fn set_redirect(e: &BytesStart<'_>, page: Option<&mut RawPage>, offset: usize) -> Result<(), WikiError> {
    let Some(p) = page else { return Ok(()) };
    let attr = e
        .try_get_attribute("title")
        .map_err(|err| WikiError::Xml { offset, message: err.to_string() })?;
    if let Some(a) = attr {
        let v = a
            .unescape_value()
            .map_err(|err| WikiError::Xml { offset, message: err.to_string() })?;
        p.redirect = Some(v.into_owned());
    }
    Ok(())
}
