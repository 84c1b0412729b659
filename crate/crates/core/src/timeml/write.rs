//! TimeML writer.

use std::fmt::Write as _;

use quick_xml::escape::escape;

use super::*;

fn attr(out: &mut String, key: &str, value: &str) {
    let _ = write!(out, " {}=\"{}\"", key, escape(value));
}

fn attrs(out: &mut String, list: &[(String, String)]) {
    for (k, v) in list {
        attr(out, k, v);
    }
}

struct Tag {
    span: Span,
    open: String,
    name: String,
}

/// Writes a document as TimeML with a fixed attribute order.
///
/// Links produced by the reasoner carry `deduced="true"`; any link not from
/// the source annotation carries a `provenance` attribute.
pub fn serialize_timeml(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" ?>\n<TimeML>\n");
    let _ = writeln!(out, "<DOCID>{}</DOCID>\n", escape(&doc.doc_id));
    if doc.dct.span.is_none() {
        out.push_str("<DCT>");
        out.push_str(&timex_open(&doc.dct));
        out.push_str(&escape(&doc.dct_text));
        out.push_str("</TIMEX3></DCT>\n\n");
    }

    let mut tags: Vec<Tag> = Vec::new();
    let mut seen_eids = std::collections::HashSet::new();
    for e in &doc.events {
        if !seen_eids.insert(e.eid.as_str()) {
            continue;
        }
        let mut open = String::from("<EVENT");
        attr(&mut open, "eid", &e.eid);
        attr(&mut open, "class", e.class.as_str());
        attrs(&mut open, &e.event_attrs);
        open.push('>');
        tags.push(Tag { span: e.span, open, name: "EVENT".into() });
    }
    for t in doc.timexes.iter().chain(std::iter::once(&doc.dct)) {
        if let Some(span) = t.span {
            tags.push(Tag { span, open: timex_open(t), name: "TIMEX3".into() });
        }
    }
    for s in &doc.signals {
        let mut open = String::from("<SIGNAL");
        attr(&mut open, "sid", &s.sid);
        open.push('>');
        tags.push(Tag { span: s.span, open, name: "SIGNAL".into() });
    }
    for s in &doc.csignals {
        let mut open = String::from("<CSIGNAL");
        attr(&mut open, "id", &s.id);
        open.push('>');
        tags.push(Tag { span: s.span, open, name: "CSIGNAL".into() });
    }
    for t in &doc.inline_other {
        let open = if t.attrs.is_empty() { format!("<{}>", t.name) } else { format!("<{} {}>", t.name, t.attrs) };
        tags.push(Tag { span: t.span, open, name: t.name.clone() });
    }
    // Outer tags open first and close last.
    tags.sort_by(|a, b| a.span.start.cmp(&b.span.start).then(b.span.end.cmp(&a.span.end)));

    out.push_str("<TEXT>");
    let text = &doc.text;
    let mut pos = 0;
    let mut open_stack: Vec<&Tag> = Vec::new();
    let mut next = 0;
    loop {
        let next_start = tags.get(next).map(|t| t.span.start);
        let next_end = open_stack.last().map(|t| t.span.end);
        let target = match (next_start, next_end) {
            (Some(s), Some(e)) => s.min(e),
            (Some(s), None) => s,
            (None, Some(e)) => e,
            (None, None) => break,
        };
        out.push_str(&escape(&text[pos..target]));
        pos = target;
        if next_end == Some(target) && next_start.is_none_or(|s| s > target || tags[next].span.end > target) {
            let t = open_stack.pop().expect("open tag");
            let _ = write!(out, "</{}>", t.name);
            continue;
        }
        let t = &tags[next];
        next += 1;
        out.push_str(&t.open);
        if t.span.is_empty() {
            let _ = write!(out, "</{}>", t.name);
        } else {
            open_stack.push(t);
        }
    }
    out.push_str(&escape(&text[pos..]));
    out.push_str("</TEXT>\n\n");

    for e in &doc.events {
        out.push_str("<MAKEINSTANCE");
        attr(&mut out, "eventID", &e.eid);
        attr(&mut out, "eiid", &e.eiid);
        attr(&mut out, "tense", e.tense.as_str());
        attr(&mut out, "aspect", e.aspect.as_str());
        attr(&mut out, "polarity", &e.polarity);
        attr(&mut out, "pos", &e.pos);
        if let Some(m) = &e.modality {
            attr(&mut out, "modality", m);
        }
        attrs(&mut out, &e.instance_attrs);
        out.push_str("/>\n");
    }
    out.push('\n');

    for l in &doc.tlinks {
        out.push_str("<TLINK");
        attr(&mut out, "lid", &l.lid);
        attr(&mut out, "relType", l.rel_type.as_str());
        let source_key = if doc.event(&l.source).is_some() { "eventInstanceID" } else { "timeID" };
        let target_key = if doc.event(&l.target).is_some() { "relatedToEventInstance" } else { "relatedToTime" };
        attr(&mut out, source_key, &l.source);
        attr(&mut out, target_key, &l.target);
        if let Some(s) = &l.signal_id {
            attr(&mut out, "signalID", s);
        }
        if l.deduced() {
            attr(&mut out, "deduced", "true");
        }
        if l.provenance != Provenance::Annotated {
            attr(&mut out, "provenance", l.provenance.as_str());
        }
        if let Some(o) = l.overwritten {
            attr(&mut out, "overwritten", o.as_str());
        }
        out.push_str("/>\n");
    }
    for l in &doc.clinks {
        out.push_str("<CLINK");
        attr(&mut out, "id", &l.id);
        attr(&mut out, "source", &l.source);
        attr(&mut out, "target", &l.target);
        if let Some(s) = &l.csignal_id {
            attr(&mut out, "csignalID", s);
        }
        if l.provenance != Provenance::Annotated {
            attr(&mut out, "provenance", l.provenance.as_str());
        }
        if let Some(c) = l.confidence {
            attr(&mut out, "confidence", &c.to_string());
        }
        out.push_str("/>\n");
    }
    for r in &doc.other_links {
        out.push_str(&r.xml);
        out.push('\n');
    }
    out.push_str("</TimeML>\n");
    out
}

fn timex_open(t: &Timex) -> String {
    let mut open = String::from("<TIMEX3");
    attr(&mut open, "tid", &t.tid);
    attr(&mut open, "type", t.timex_type.as_str());
    attr(&mut open, "value", &t.value);
    if let Some(tf) = &t.temporal_function {
        attr(&mut open, "temporalFunction", tf);
    }
    attr(&mut open, "functionInDocument", &t.function_in_document);
    if let Some(a) = &t.anchor_time_id {
        attr(&mut open, "anchorTimeID", a);
    }
    attrs(&mut open, &t.extra_attrs);
    open.push('>');
    open
}
