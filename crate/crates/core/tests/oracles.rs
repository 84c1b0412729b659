//! Independent re-derivations checked against the library.

mod common;

use chrono::{Datelike, NaiveDate};
use chronorel::allen::{base_composition, BaseRelation};
use chronorel::timex::{interval_of, parse_value};
use chronorel::RelationSet;

#[test]
fn composition_table_matches_endpoint_enumeration() {
    let oracle = common::oracle_composition();
    for a in BaseRelation::ALL {
        for b in BaseRelation::ALL {
            assert_eq!(base_composition(a, b), oracle[a as usize][b as usize], "{a:?} ∘ {b:?}");
        }
    }
}

#[test]
fn converse_matches_swapped_endpoints() {
    for x in common::intervals(4) {
        for y in common::intervals(4) {
            assert_eq!(common::allen_of(y, x), common::allen_of(x, y).converse());
        }
    }
}

#[test]
fn set_composition_is_union_of_cells() {
    let oracle = common::oracle_composition();
    let a = RelationSet::of(&[BaseRelation::Before, BaseRelation::During]);
    let b = RelationSet::of(&[BaseRelation::Meets, BaseRelation::Finishes]);
    let mut want = RelationSet::EMPTY;
    for x in a.iter() {
        for y in b.iter() {
            want = want | oracle[x as usize][y as usize];
        }
    }
    assert_eq!(a.compose(b), want);
}

#[test]
fn iso_weeks_match_chrono_calendar() {
    let mut day = NaiveDate::from_ymd_opt(1999, 12, 20).unwrap();
    let end = NaiveDate::from_ymd_opt(2031, 1, 10).unwrap();
    while day < end {
        let w = day.iso_week();
        let v = parse_value(&format!("{}-W{:02}", w.year(), w.week())).unwrap();
        let iv = interval_of(&v).unwrap();
        let date = day.and_hms_opt(0, 0, 0).unwrap();
        assert!(iv.start <= date && date < iv.end, "{day}");
        assert_eq!(iv.start.weekday(), chrono::Weekday::Mon);
        assert_eq!((iv.end - iv.start).num_days(), 7);
        day += chrono::Duration::days(1);
    }
}

#[test]
fn months_and_quarters_cover_their_days() {
    for y in [1988, 2000, 2015, 2024] {
        for m in 1..=12u32 {
            let iv = interval_of(&parse_value(&format!("{y}-{m:02}")).unwrap()).unwrap();
            let first = NaiveDate::from_ymd_opt(y, m, 1).unwrap();
            let next = first.checked_add_months(chrono::Months::new(1)).unwrap();
            assert_eq!(iv.start.date(), first);
            assert_eq!(iv.end.date(), next);
            let q = (m - 1) / 3 + 1;
            let qiv = interval_of(&parse_value(&format!("{y}-Q{q}")).unwrap()).unwrap();
            assert!(qiv.start <= iv.start && iv.end <= qiv.end);
        }
    }
}
