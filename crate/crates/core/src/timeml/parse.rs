//! TimeML reader.

use std::collections::HashMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::*;

type Attrs = Vec<(String, String)>;

struct Open {
    name: String,
    attrs: Attrs,
    raw_attrs: String,
    start: usize,
}

struct EventTag {
    eid: String,
    span: Span,
    attrs: Attrs,
}

fn xml_err(offset: u64, e: impl fmt::Display) -> TimeMlError {
    TimeMlError::Xml { offset, message: e.to_string() }
}

fn read_attrs(e: &BytesStart<'_>, offset: u64) -> Result<Attrs, TimeMlError> {
    let mut out = Vec::new();
    for a in e.attributes() {
        let a = a.map_err(|err| xml_err(offset, err))?;
        let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
        let value = a.unescape_value().map_err(|err| xml_err(offset, err))?.into_owned();
        out.push((key, value));
    }
    Ok(out)
}

fn take(attrs: &mut Attrs, keys: &[&str]) -> Option<String> {
    for key in keys {
        if let Some(pos) = attrs.iter().position(|(k, _)| k == key) {
            return Some(attrs.remove(pos).1);
        }
    }
    None
}

fn take_nonempty(attrs: &mut Attrs, keys: &[&str]) -> Option<String> {
    take(attrs, keys).filter(|v| !v.trim().is_empty())
}

fn required(attrs: &mut Attrs, keys: &[&str], element: &str) -> Result<String, TimeMlError> {
    take_nonempty(attrs, keys)
        .ok_or_else(|| TimeMlError::MissingAttribute { element: element.to_string(), attribute: keys[0].to_string() })
}

fn parse_attr<T: FromStr>(value: &str, element: &str, attribute: &str) -> Result<T, TimeMlError> {
    value.parse().map_err(|_| TimeMlError::Attribute {
        element: element.to_string(),
        attribute: attribute.to_string(),
        value: value.to_string(),
    })
}

fn build_timex(mut attrs: Attrs, span: Option<Span>) -> Result<Timex, TimeMlError> {
    let tid = required(&mut attrs, &["tid"], "TIMEX3")?;
    let ctx = format!("TIMEX3 {tid}");
    let ty = required(&mut attrs, &["type"], &ctx)?;
    let timex_type = parse_attr(&ty, &ctx, "type")?;
    let value = required(&mut attrs, &["value"], &ctx)?;
    let function_in_document = take_nonempty(&mut attrs, &["functionInDocument"]).unwrap_or_else(|| "NONE".into());
    let anchor_time_id = take_nonempty(&mut attrs, &["anchorTimeID"]);
    let temporal_function = take_nonempty(&mut attrs, &["temporalFunction"]);
    Ok(Timex {
        tid,
        span,
        timex_type,
        value,
        function_in_document,
        anchor_time_id,
        temporal_function,
        extra_attrs: attrs,
    })
}

/// Parses a TimeML document and checks its invariants.
///
/// Unrecognized top-level elements (SLINK, ALINK, anything else) are kept
/// verbatim; unrecognized tags inside TEXT are kept with their spans.
pub fn parse_timeml(raw: &str) -> Result<Document, TimeMlError> {
    let mut reader = Reader::from_str(raw);
    reader.config_mut().trim_text(false);

    let mut doc_id = String::new();
    let mut text = String::new();
    let mut in_text = false;
    let mut in_docid = false;
    let mut in_dct = false;
    let mut stack: Vec<Open> = Vec::new();
    let mut depth = 0usize;

    let mut event_tags: Vec<EventTag> = Vec::new();
    let mut instances: Vec<Attrs> = Vec::new();
    let mut timexes: Vec<Timex> = Vec::new();
    let mut dct_text = String::new();
    let mut signals = Vec::new();
    let mut csignals = Vec::new();
    let mut tlink_attrs: Vec<Attrs> = Vec::new();
    let mut clink_attrs: Vec<Attrs> = Vec::new();
    let mut other_links = Vec::new();
    let mut inline_other = Vec::new();

    loop {
        let before = reader.buffer_position();
        let ev = reader.read_event().map_err(|e| xml_err(reader.error_position(), e))?;
        match ev {
            Event::Eof => break,
            Event::Start(e) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                if in_text || (in_dct && name == "TIMEX3") {
                    let attrs = read_attrs(&e, before)?;
                    let raw_attrs = String::from_utf8_lossy(e.attributes_raw()).trim().to_string();
                    stack.push(Open { name, attrs, raw_attrs, start: text.len() });
                    continue;
                }
                depth += 1;
                match (depth, name.as_str()) {
                    (1, _) => {}
                    (2, "DOCID") => in_docid = true,
                    (2, "DCT") => in_dct = true,
                    (2, "TEXT") => in_text = true,
                    (2, "MAKEINSTANCE") => {
                        instances.push(read_attrs(&e, before)?);
                        reader.read_to_end(e.name()).map_err(|err| xml_err(reader.error_position(), err))?;
                        depth -= 1;
                    }
                    (2, "TLINK") | (2, "CLINK") => {
                        let a = read_attrs(&e, before)?;
                        if name == "TLINK" {
                            tlink_attrs.push(a)
                        } else {
                            clink_attrs.push(a)
                        }
                        reader.read_to_end(e.name()).map_err(|err| xml_err(reader.error_position(), err))?;
                        depth -= 1;
                    }
                    _ => {
                        reader.read_to_end(e.name()).map_err(|err| xml_err(reader.error_position(), err))?;
                        let end = reader.buffer_position() as usize;
                        if depth == 2 {
                            other_links.push(RawElement { name, xml: raw[before as usize..end].to_string() });
                        }
                        depth -= 1;
                    }
                }
            }
            Event::Empty(e) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                if in_text || (in_dct && name == "TIMEX3") {
                    let attrs = read_attrs(&e, before)?;
                    let raw_attrs = String::from_utf8_lossy(e.attributes_raw()).trim().to_string();
                    let open = Open { name, attrs, raw_attrs, start: text.len() };
                    close_inline(
                        open,
                        text.len(),
                        in_dct,
                        &mut event_tags,
                        &mut timexes,
                        &mut signals,
                        &mut csignals,
                        &mut inline_other,
                    )?;
                    continue;
                }
                match (depth + 1, name.as_str()) {
                    (2, "MAKEINSTANCE") => instances.push(read_attrs(&e, before)?),
                    (2, "TLINK") => tlink_attrs.push(read_attrs(&e, before)?),
                    (2, "CLINK") => clink_attrs.push(read_attrs(&e, before)?),
                    (2, _) => {
                        let end = reader.buffer_position() as usize;
                        other_links.push(RawElement { name, xml: raw[before as usize..end].to_string() });
                    }
                    _ => {}
                }
            }
            Event::End(e) => {
                let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
                if let Some(open) = stack.pop() {
                    debug_assert_eq!(open.name, name);
                    let end = text.len();
                    if in_dct && !in_text {
                        dct_text = text[open.start..].to_string();
                        text.truncate(open.start);
                        let attrs = open.attrs;
                        timexes.push(build_timex(attrs, None)?);
                        continue;
                    }
                    close_inline(
                        open,
                        end,
                        false,
                        &mut event_tags,
                        &mut timexes,
                        &mut signals,
                        &mut csignals,
                        &mut inline_other,
                    )?;
                    continue;
                }
                match name.as_str() {
                    "DOCID" if depth == 2 => in_docid = false,
                    "DCT" if depth == 2 => in_dct = false,
                    "TEXT" if depth == 2 => in_text = false,
                    _ => {}
                }
                depth = depth.saturating_sub(1);
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(|err| xml_err(before, err))?;
                if in_text || !stack.is_empty() {
                    text.push_str(&s);
                } else if in_docid {
                    doc_id.push_str(s.trim());
                }
            }
            Event::CData(t) if in_text => {
                text.push_str(&String::from_utf8_lossy(&t));
            }
            _ => {}
        }
    }
    if !stack.is_empty() || depth != 0 {
        return Err(xml_err(raw.len() as u64, "unexpected end of input"));
    }

    // Events: one instance per MAKEINSTANCE, or a synthesized one.
    let mut by_eid: HashMap<String, Vec<Attrs>> = HashMap::new();
    for inst in instances {
        let eid = inst.iter().find(|(k, _)| k == "eventID").map(|(_, v)| v.clone()).ok_or_else(|| {
            TimeMlError::MissingAttribute { element: "MAKEINSTANCE".into(), attribute: "eventID".into() }
        })?;
        if !event_tags.iter().any(|t| t.eid == eid) {
            return Err(TimeMlError::Reference { id: eid, context: "MAKEINSTANCE eventID".into() });
        }
        by_eid.entry(eid).or_default().push(inst);
    }
    let mut events = Vec::new();
    for tag in event_tags {
        let ctx = format!("EVENT {}", tag.eid);
        let mut tag_attrs = tag.attrs;
        let class_s = required(&mut tag_attrs, &["class"], &ctx)?;
        let class: EventClass = parse_attr(&class_s, &ctx, "class")?;
        match by_eid.remove(&tag.eid) {
            Some(list) => {
                for mut inst in list {
                    take(&mut inst, &["eventID"]);
                    let eiid = required(&mut inst, &["eiid"], "MAKEINSTANCE")?;
                    let ictx = format!("MAKEINSTANCE {eiid}");
                    events.push(
                        instance_from(eiid, &tag.eid, tag.span, class, &mut inst, &ictx)?
                            .with_attrs(tag_attrs.clone(), inst),
                    );
                }
            }
            None => {
                let digits: String = tag.eid.chars().filter(|c| c.is_ascii_digit()).collect();
                let eiid = format!("ei{digits}");
                let mut attrs = tag_attrs;
                let ev = instance_from(eiid, &tag.eid, tag.span, class, &mut attrs, &ctx)?;
                events.push(ev.with_attrs(attrs, Vec::new()));
            }
        }
    }

    let mut dcts: Vec<Timex> = Vec::new();
    let mut rest = Vec::new();
    for t in timexes {
        if t.is_creation_time() {
            dcts.push(t);
        } else {
            rest.push(t);
        }
    }
    if dcts.len() != 1 {
        return Err(TimeMlError::Dct(dcts.len()));
    }
    let dct = dcts.pop().expect("one dct");
    if let Some(s) = dct.span {
        dct_text = text[s.start..s.end].to_string();
    }

    let mut tlinks = Vec::new();
    for mut a in tlink_attrs {
        let lid = required(&mut a, &["lid"], "TLINK")?;
        let ctx = format!("TLINK {lid}");
        let rel = required(&mut a, &["relType"], &ctx)?;
        let rel_type: TLinkLabel = parse_attr(&rel, &ctx, "relType")?;
        let source = required(&mut a, &["eventInstanceID", "timeID"], &ctx)?;
        let target = required(&mut a, &["relatedToEventInstance", "relatedToTime"], &ctx)?;
        let signal_id = take_nonempty(&mut a, &["signalID"]);
        let deduced = take(&mut a, &["deduced"]).is_some_and(|v| v == "true");
        let provenance = match take_nonempty(&mut a, &["provenance"]) {
            Some(p) => parse_attr(&p, &ctx, "provenance")?,
            None if deduced => Provenance::Reasoner,
            None => Provenance::Annotated,
        };
        let overwritten = match take_nonempty(&mut a, &["overwritten"]) {
            Some(v) => Some(parse_attr(&v, &ctx, "overwritten")?),
            None => None,
        };
        tlinks.push(TLink { lid, source, target, rel_type, signal_id, provenance, overwritten });
    }
    let mut clinks = Vec::new();
    for mut a in clink_attrs {
        let id = required(&mut a, &["id", "lid"], "CLINK")?;
        let ctx = format!("CLINK {id}");
        let source = required(&mut a, &["source", "eventInstanceID"], &ctx)?;
        let target = required(&mut a, &["target", "relatedToEventInstance"], &ctx)?;
        let csignal_id = take_nonempty(&mut a, &["csignalID", "c-signalID"]);
        let provenance = match take_nonempty(&mut a, &["provenance"]) {
            Some(p) => parse_attr(&p, &ctx, "provenance")?,
            None => Provenance::Annotated,
        };
        let confidence = match take_nonempty(&mut a, &["confidence"]) {
            Some(v) => Some(parse_attr::<f64>(&v, &ctx, "confidence")?),
            None => None,
        };
        clinks.push(CLink { id, source, target, csignal_id, provenance, confidence });
    }

    let doc = Document {
        doc_id,
        dct,
        dct_text,
        text,
        events,
        timexes: rest,
        signals,
        csignals,
        tlinks,
        clinks,
        other_links,
        inline_other,
    };
    doc.validate()?;
    Ok(doc)
}

impl EventInstance {
    fn with_attrs(mut self, event_attrs: Attrs, instance_attrs: Attrs) -> EventInstance {
        self.event_attrs = event_attrs;
        self.instance_attrs = instance_attrs;
        self
    }
}

fn instance_from(
    eiid: String,
    eid: &str,
    span: Span,
    class: EventClass,
    attrs: &mut Attrs,
    ctx: &str,
) -> Result<EventInstance, TimeMlError> {
    let tense = match take_nonempty(attrs, &["tense"]) {
        Some(v) => parse_attr(&v, ctx, "tense")?,
        None => Tense::None,
    };
    let aspect = match take_nonempty(attrs, &["aspect"]) {
        Some(v) => parse_attr(&v, ctx, "aspect")?,
        None => Aspect::None,
    };
    let pos = take_nonempty(attrs, &["pos"]).unwrap_or_else(|| "OTHER".into());
    let polarity = take_nonempty(attrs, &["polarity"]).unwrap_or_else(|| "POS".into());
    let modality = take_nonempty(attrs, &["modality"]);
    Ok(EventInstance {
        eiid,
        eid: eid.to_string(),
        span,
        class,
        tense,
        aspect,
        pos,
        polarity,
        modality,
        event_attrs: Vec::new(),
        instance_attrs: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn close_inline(
    open: Open,
    end: usize,
    in_dct: bool,
    event_tags: &mut Vec<EventTag>,
    timexes: &mut Vec<Timex>,
    signals: &mut Vec<Signal>,
    csignals: &mut Vec<CausalSignal>,
    inline_other: &mut Vec<InlineTag>,
) -> Result<(), TimeMlError> {
    let span = Span::new(open.start, end);
    let mut attrs = open.attrs;
    match open.name.as_str() {
        "TIMEX3" => timexes.push(build_timex(attrs, if in_dct { None } else { Some(span) })?),
        "EVENT" => {
            let eid = required(&mut attrs, &["eid"], "EVENT")?;
            event_tags.push(EventTag { eid, span, attrs });
        }
        "SIGNAL" => {
            let sid = required(&mut attrs, &["sid"], "SIGNAL")?;
            signals.push(Signal { sid, span });
        }
        "CSIGNAL" | "C-SIGNAL" => {
            let id = required(&mut attrs, &["id", "cid"], "CSIGNAL")?;
            csignals.push(CausalSignal { id, span });
        }
        _ => inline_other.push(InlineTag { name: open.name, attrs: open.raw_attrs, span }),
    }
    Ok(())
}
