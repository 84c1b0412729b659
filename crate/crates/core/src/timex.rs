//! Normalized TIMEX3 values: parsing, rendering, interval covers, and the
//! timex-timex rules.

use std::fmt;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Weekday};

use crate::labels::TLinkLabel;
use crate::timeml::{Timex, TimexType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartOfDay {
    Morning,
    MidDay,
    Afternoon,
    Evening,
    Night,
}

impl PartOfDay {
    const ALL: [(PartOfDay, &'static str, u32, u32); 5] = [
        (PartOfDay::Morning, "MO", 6, 12),
        (PartOfDay::MidDay, "MI", 12, 13),
        (PartOfDay::Afternoon, "AF", 13, 18),
        (PartOfDay::Evening, "EV", 18, 21),
        (PartOfDay::Night, "NI", 21, 24),
    ];

    fn code(self) -> &'static str {
        PartOfDay::ALL.iter().find(|x| x.0 == self).expect("listed").1
    }

    /// Hours covered, `[start, end)`.
    pub fn hours(self) -> (u32, u32) {
        let x = PartOfDay::ALL.iter().find(|x| x.0 == self).expect("listed");
        (x.2, x.3)
    }

    fn from_code(s: &str) -> Option<PartOfDay> {
        PartOfDay::ALL.iter().find(|x| x.1 == s).map(|x| x.0)
    }
}

/// Calendar part of a point value, from coarsest to finest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DatePart {
    /// `19` covers 1900–1999.
    Century(i32),
    /// `199` covers 1990–1999.
    Decade(i32),
    Year(i32),
    Half(i32, u32),
    Quarter(i32, u32),
    Month(i32, u32),
    Week(i32, u32),
    Day(i32, u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimePart {
    PartOfDay(PartOfDay),
    Clock { hour: u32, minute: Option<u32>, second: Option<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CalendarPoint {
    pub date: DatePart,
    /// Only present with day granularity.
    pub time: Option<TimePart>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DurationUnit {
    Century,
    Decade,
    Year,
    Quarter,
    Month,
    Week,
    Day,
    Hour,
    Minute,
    Second,
}

impl DurationUnit {
    fn code(self) -> &'static str {
        match self {
            DurationUnit::Century => "CE",
            DurationUnit::Decade => "DE",
            DurationUnit::Year => "Y",
            DurationUnit::Quarter => "Q",
            DurationUnit::Month | DurationUnit::Minute => "M",
            DurationUnit::Week => "W",
            DurationUnit::Day => "D",
            DurationUnit::Hour => "H",
            DurationUnit::Second => "S",
        }
    }

    fn is_time(self) -> bool {
        matches!(self, DurationUnit::Hour | DurationUnit::Minute | DurationUnit::Second)
    }
}

/// One `<amount><unit>` component of a duration; `None` amount is the
/// unspecified `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DurationPart {
    pub amount: Option<u32>,
    pub unit: DurationUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefToken {
    Past,
    Present,
    Future,
}

/// A parsed TIMEX3 value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IsoValue {
    Point(CalendarPoint),
    Duration(Vec<DurationPart>),
    Ref(RefToken),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimexError {
    #[error("unrecognized timex value `{0}`")]
    Format(String),
    #[error("timex value `{0}` is not a calendar point")]
    NotAnchorable(String),
}

/// Half-open interval `[start, end)` at minute resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
}

fn digits(s: &str, n: usize) -> Option<u32> {
    if s.len() == n && s.bytes().all(|b| b.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

fn parse_time(s: &str) -> Option<TimePart> {
    if let Some(p) = PartOfDay::from_code(s) {
        return Some(TimePart::PartOfDay(p));
    }
    let mut it = s.split(':');
    let hour = digits(it.next()?, 2)?;
    let minute = match it.next() {
        Some(m) => Some(digits(m, 2)?),
        None => None,
    };
    let second = match it.next() {
        Some(x) => Some(digits(x, 2)?),
        None => None,
    };
    if it.next().is_some() || hour > 24 || minute.is_some_and(|m| m > 59) || second.is_some_and(|x| x > 59) {
        return None;
    }
    if hour == 24 && (minute.unwrap_or(0) != 0 || second.unwrap_or(0) != 0) {
        return None;
    }
    Some(TimePart::Clock { hour, minute, second })
}

fn parse_date(s: &str) -> Option<DatePart> {
    match s.len() {
        2 => return digits(s, 2).map(|c| DatePart::Century(c as i32)),
        3 => return digits(s, 3).map(|d| DatePart::Decade(d as i32)),
        4 => return digits(s, 4).map(|y| DatePart::Year(y as i32)),
        _ => {}
    }
    let (y, rest) = s.split_once('-')?;
    let year = digits(y, 4)? as i32;
    if let Some(q) = rest.strip_prefix('Q') {
        let q = digits(q, 1)?;
        return (1..=4).contains(&q).then_some(DatePart::Quarter(year, q));
    }
    if let Some(h) = rest.strip_prefix('H') {
        let h = digits(h, 1)?;
        return (1..=2).contains(&h).then_some(DatePart::Half(year, h));
    }
    if let Some(w) = rest.strip_prefix('W') {
        let w = digits(w, 2)?;
        NaiveDate::from_isoywd_opt(year, w, Weekday::Mon)?;
        return Some(DatePart::Week(year, w));
    }
    match rest.split_once('-') {
        None => {
            let m = digits(rest, 2)?;
            (1..=12).contains(&m).then_some(DatePart::Month(year, m))
        }
        Some((m, d)) => {
            let (m, d) = (digits(m, 2)?, digits(d, 2)?);
            NaiveDate::from_ymd_opt(year, m, d)?;
            Some(DatePart::Day(year, m, d))
        }
    }
}

fn parse_duration(body: &str) -> Option<Vec<DurationPart>> {
    let (date, time) = match body.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (body, None),
    };
    let mut parts = Vec::new();
    fn scan(s: &str, time: bool, parts: &mut Vec<DurationPart>) -> Option<()> {
        let mut rest = s;
        while !rest.is_empty() {
            let n = if rest.starts_with('X') { 1 } else { rest.bytes().take_while(|b| b.is_ascii_digit()).count() };
            if n == 0 {
                return None;
            }
            let amount = if &rest[..n] == "X" { None } else { Some(rest[..n].parse::<u32>().ok()?) };
            if amount == Some(0) {
                return None;
            }
            rest = &rest[n..];
            let units: &[(&str, DurationUnit)] = if time {
                &[("H", DurationUnit::Hour), ("M", DurationUnit::Minute), ("S", DurationUnit::Second)]
            } else {
                &[
                    ("CE", DurationUnit::Century),
                    ("DE", DurationUnit::Decade),
                    ("Y", DurationUnit::Year),
                    ("Q", DurationUnit::Quarter),
                    ("M", DurationUnit::Month),
                    ("W", DurationUnit::Week),
                    ("D", DurationUnit::Day),
                ]
            };
            let (code, unit) = units.iter().find(|(c, _)| rest.starts_with(c))?;
            rest = &rest[code.len()..];
            parts.push(DurationPart { amount, unit: *unit });
        }
        Some(())
    }
    scan(date, false, &mut parts)?;
    if let Some(t) = time {
        let before = parts.len();
        scan(t, true, &mut parts)?;
        if parts.len() == before {
            return None;
        }
    }
    (!parts.is_empty()).then_some(parts)
}

/// Parses a normalized value: calendar points down to seconds, weeks,
/// quarters, halves, decades, centuries, part-of-day suffixes, `PnX`
/// durations and the REF tokens.
pub fn parse_value(s: &str) -> Result<IsoValue, TimexError> {
    let err = || TimexError::Format(s.to_string());
    match s {
        "PAST_REF" => return Ok(IsoValue::Ref(RefToken::Past)),
        "PRESENT_REF" => return Ok(IsoValue::Ref(RefToken::Present)),
        "FUTURE_REF" => return Ok(IsoValue::Ref(RefToken::Future)),
        _ => {}
    }
    if let Some(body) = s.strip_prefix('P') {
        return parse_duration(body).map(IsoValue::Duration).ok_or_else(err);
    }
    let (date, time) = match s.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (s, None),
    };
    let date = parse_date(date).ok_or_else(err)?;
    let time = match time {
        None => None,
        Some(t) => {
            if !matches!(date, DatePart::Day(..)) {
                return Err(err());
            }
            Some(parse_time(t).ok_or_else(err)?)
        }
    };
    Ok(IsoValue::Point(CalendarPoint { date, time }))
}

/// Inverse of [`parse_value`].
pub fn render(v: &IsoValue) -> String {
    match v {
        IsoValue::Ref(RefToken::Past) => "PAST_REF".into(),
        IsoValue::Ref(RefToken::Present) => "PRESENT_REF".into(),
        IsoValue::Ref(RefToken::Future) => "FUTURE_REF".into(),
        IsoValue::Duration(parts) => {
            let mut out = String::from("P");
            let mut in_time = false;
            for p in parts {
                if p.unit.is_time() && !in_time {
                    out.push('T');
                    in_time = true;
                }
                match p.amount {
                    Some(n) => out.push_str(&n.to_string()),
                    None => out.push('X'),
                }
                out.push_str(p.unit.code());
            }
            out
        }
        IsoValue::Point(p) => {
            let mut out = match p.date {
                DatePart::Century(c) => format!("{c:02}"),
                DatePart::Decade(d) => format!("{d:03}"),
                DatePart::Year(y) => format!("{y:04}"),
                DatePart::Half(y, h) => format!("{y:04}-H{h}"),
                DatePart::Quarter(y, q) => format!("{y:04}-Q{q}"),
                DatePart::Month(y, m) => format!("{y:04}-{m:02}"),
                DatePart::Week(y, w) => format!("{y:04}-W{w:02}"),
                DatePart::Day(y, m, d) => format!("{y:04}-{m:02}-{d:02}"),
            };
            match p.time {
                None => {}
                Some(TimePart::PartOfDay(pd)) => {
                    out.push('T');
                    out.push_str(pd.code());
                }
                Some(TimePart::Clock { hour, minute, second }) => {
                    out.push_str(&format!("T{hour:02}"));
                    if let Some(m) = minute {
                        out.push_str(&format!(":{m:02}"));
                    }
                    if let Some(x) = second {
                        out.push_str(&format!(":{x:02}"));
                    }
                }
            }
            out
        }
    }
}

impl fmt::Display for IsoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

fn midnight(d: NaiveDate) -> NaiveDateTime {
    d.and_time(NaiveTime::MIN)
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDateTime {
    midnight(NaiveDate::from_ymd_opt(y, m, d).expect("valid date"))
}

fn month_start(y: i32, m: u32) -> NaiveDateTime {
    let (y, m) = (y + (m as i32 - 1).div_euclid(12), (m as i32 - 1).rem_euclid(12) as u32 + 1);
    ymd(y, m, 1)
}

/// Half-open cover of a calendar point. Sub-day values cover one minute
/// at the finest, so seconds are ignored.
pub fn interval_of(v: &IsoValue) -> Result<Interval, TimexError> {
    let p = match v {
        IsoValue::Point(p) => p,
        other => return Err(TimexError::NotAnchorable(render(other))),
    };
    let (start, end) = match p.date {
        DatePart::Century(c) => (ymd(c * 100, 1, 1), ymd(c * 100 + 100, 1, 1)),
        DatePart::Decade(d) => (ymd(d * 10, 1, 1), ymd(d * 10 + 10, 1, 1)),
        DatePart::Year(y) => (ymd(y, 1, 1), ymd(y + 1, 1, 1)),
        DatePart::Half(y, h) => (month_start(y, 6 * h - 5), month_start(y, 6 * h + 1)),
        DatePart::Quarter(y, q) => (month_start(y, 3 * q - 2), month_start(y, 3 * q + 1)),
        DatePart::Month(y, m) => (month_start(y, m), month_start(y, m + 1)),
        DatePart::Week(y, w) => {
            let mon = NaiveDate::from_isoywd_opt(y, w, Weekday::Mon).expect("validated week");
            (midnight(mon), midnight(mon) + Duration::days(7))
        }
        DatePart::Day(y, m, d) => {
            let day = ymd(y, m, d);
            match p.time {
                None => (day, day + Duration::days(1)),
                Some(TimePart::PartOfDay(pd)) => {
                    let (a, b) = pd.hours();
                    (day + Duration::hours(a as i64), day + Duration::hours(b as i64))
                }
                Some(TimePart::Clock { hour, minute: None, .. }) => {
                    let s = day + Duration::hours(hour as i64);
                    (s, s + Duration::hours(1))
                }
                Some(TimePart::Clock { hour, minute: Some(m), .. }) => {
                    let s = day + Duration::hours(hour as i64) + Duration::minutes(m as i64);
                    (s, s + Duration::minutes(1))
                }
            }
        }
    };
    debug_assert!(start < end && start.second() == 0);
    Ok(Interval { start, end })
}

use chrono::Timelike as _;

/// Compares two intervals: disjoint gives BEFORE/AFTER, equal gives
/// SIMULTANEOUS, containment gives INCLUDES/IS_INCLUDED, partial overlap
/// gives nothing.
pub fn compare_intervals(a: &Interval, b: &Interval) -> Option<TLinkLabel> {
    if a.end <= b.start {
        Some(TLinkLabel::Before)
    } else if b.end <= a.start {
        Some(TLinkLabel::After)
    } else if a == b {
        Some(TLinkLabel::Simultaneous)
    } else if b.start <= a.start && a.end <= b.end {
        Some(TLinkLabel::IsIncluded)
    } else if a.start <= b.start && b.end <= a.end {
        Some(TLinkLabel::Includes)
    } else {
        None
    }
}

/// Timex-timex rule. Only DATE and TIME timexes with calendar-point values
/// take part.
pub fn tt_rule(t1: &Timex, t2: &Timex) -> Option<TLinkLabel> {
    let ok = |t: &Timex| matches!(t.timex_type, TimexType::Date | TimexType::Time);
    if !ok(t1) || !ok(t2) {
        return None;
    }
    let a = interval_of(&parse_value(&t1.value).ok()?).ok()?;
    let b = interval_of(&parse_value(&t2.value).ok()?).ok()?;
    compare_intervals(&a, &b)
}

/// Weekday of a day-granularity value, for diagnostics and tests.
pub fn weekday_of(v: &IsoValue) -> Option<Weekday> {
    match v {
        IsoValue::Point(CalendarPoint { date: DatePart::Day(y, m, d), .. }) => {
            NaiveDate::from_ymd_opt(*y, *m, *d).map(|x| x.weekday())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn timex(ty: TimexType, value: &str) -> Timex {
        Timex {
            tid: "t".into(),
            span: None,
            timex_type: ty,
            value: value.into(),
            function_in_document: "NONE".into(),
            anchor_time_id: None,
            temporal_function: None,
            extra_attrs: vec![],
        }
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_value("P18M").unwrap(),
            IsoValue::Duration(vec![DurationPart { amount: Some(18), unit: DurationUnit::Month }])
        );
        assert_eq!(
            parse_value("1988-08-10").unwrap(),
            IsoValue::Point(CalendarPoint { date: DatePart::Day(1988, 8, 10), time: None })
        );
        assert_eq!(parse_value("PRESENT_REF").unwrap(), IsoValue::Ref(RefToken::Present));
        assert!(matches!(parse_value("next tuesday"), Err(TimexError::Format(s)) if s == "next tuesday"));
        assert!(parse_value("1988-13").is_err());
        assert!(parse_value("1988-02-30").is_err());
        assert!(parse_value("P0D").is_err());
        assert!(parse_value("P").is_err());
    }

    #[test]
    fn render_roundtrip() {
        for s in [
            "19",
            "199",
            "1999",
            "1999-H2",
            "1999-Q3",
            "1999-07",
            "2015-W10",
            "2015-12-12",
            "2015-12-12TEV",
            "2015-12-12T19",
            "2015-12-12T19:00",
            "2015-12-12T19:00:30",
            "P18M",
            "PXY",
            "P1DT2H",
            "PT30M",
            "P2DE",
            "FUTURE_REF",
        ] {
            assert_eq!(render(&parse_value(s).unwrap()), s);
        }
    }

    #[test]
    fn covers() {
        let day = interval_of(&parse_value("2015-12-12").unwrap()).unwrap();
        assert_eq!(day.start, ymd(2015, 12, 12));
        assert_eq!(day.end, ymd(2015, 12, 13));
        let minute = interval_of(&parse_value("2015-12-12T19:00").unwrap()).unwrap();
        assert_eq!(minute.end - minute.start, Duration::minutes(1));
        let q4 = interval_of(&parse_value("1999-Q4").unwrap()).unwrap();
        assert_eq!((q4.start, q4.end), (ymd(1999, 10, 1), ymd(2000, 1, 1)));
        assert!(interval_of(&parse_value("P18M").unwrap()).is_err());
    }

    #[test]
    fn timex_rules() {
        let d = |v: &str| timex(TimexType::Date, v);
        let t = |v: &str| timex(TimexType::Time, v);
        assert_eq!(tt_rule(&t("2015-12-12T19:00"), &d("2015-12-12")), Some(TLinkLabel::IsIncluded));
        assert_eq!(tt_rule(&d("2014"), &d("2015")), Some(TLinkLabel::Before));
        assert_eq!(tt_rule(&d("1988-08-10"), &d("1988-08-10")), Some(TLinkLabel::Simultaneous));
        assert_eq!(tt_rule(&d("1989-10-30"), &d("1988-08-10")), Some(TLinkLabel::After));
        assert_eq!(tt_rule(&d("PRESENT_REF"), &d("2015")), None);
        assert_eq!(tt_rule(&timex(TimexType::Duration, "P18M"), &d("2015")), None);
        assert_eq!(tt_rule(&timex(TimexType::Set, "2015"), &d("2015")), None);
        // ISO week 2015-W01 straddles December and January.
        assert_eq!(tt_rule(&d("2015-W01"), &d("2015-01")), None);
    }
}
