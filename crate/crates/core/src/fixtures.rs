//! Two small hand-built instances.
//!
//! `example1`: three students, two unit-capacity schools; school `s` has the
//! non-transitive priority `{(i1, i2), (i2, i0)}` and `s'` the total order
//! `i2 i1 i0`. A stable, student-optimal matching exists that no extension
//! profile supports.
//!
//! `example2`: four students, three unit-capacity schools with empty
//! priorities at `s1`, `s2` and `{(i4, i1)}` at `s3`. Its student-optimal
//! matching `i1-s1, i2-s2, i3-s3` is reachable by deferred acceptance only
//! through a multiple tiebreak.

use crate::model::{Matching, PreferenceOrder, Problem, SchoolId};
use crate::relations::{PriorityRelation, StudentId, TotalOrder};

fn build(
    students: &[&str],
    schools: &[&str],
    prefs: &[&[&str]],
    priorities: &[&[(&str, &str)]],
) -> Problem {
    let sid = |x: &str| {
        StudentId(
            students
                .iter()
                .position(|y| *y == x)
                .expect("fixture student"),
        )
    };
    let cid = |x: &str| {
        SchoolId(
            schools
                .iter()
                .position(|y| *y == x)
                .expect("fixture school"),
        )
    };
    let preferences = prefs
        .iter()
        .map(|p| {
            PreferenceOrder::new(p.iter().map(|s| cid(s)).collect()).expect("fixture preference")
        })
        .collect();
    let priorities = priorities
        .iter()
        .map(|pairs| {
            PriorityRelation::new(students.len(), pairs.iter().map(|&(i, j)| (sid(i), sid(j))))
                .expect("fixture priority")
        })
        .collect();
    Problem::new(
        students.iter().map(|s| s.to_string()).collect(),
        schools.iter().map(|s| s.to_string()).collect(),
        vec![1; schools.len()],
        preferences,
        priorities,
    )
    .expect("fixture problem")
}

pub fn example1() -> Problem {
    build(
        &["i0", "i1", "i2"],
        &["s", "s'"],
        &[&["s", "s'"], &["s", "s'"], &["s'", "s"]],
        &[
            &[("i1", "i2"), ("i2", "i0")],
            &[("i2", "i1"), ("i2", "i0"), ("i1", "i0")],
        ],
    )
}

/// `i0 -> s`, `i2 -> s'`, `i1` unmatched.
pub fn example1_mu(prob: &Problem) -> Matching {
    named(prob, &[("i0", "s"), ("i2", "s'")])
}

pub fn example2() -> Problem {
    build(
        &["i1", "i2", "i3", "i4"],
        &["s1", "s2", "s3"],
        &[&["s3", "s1"], &["s1", "s2"], &["s2", "s3"], &["s3"]],
        &[&[], &[], &[("i4", "i1")]],
    )
}

/// `i1 -> s1`, `i2 -> s2`, `i3 -> s3`, `i4` unmatched.
pub fn example2_mu(prob: &Problem) -> Matching {
    named(prob, &[("i1", "s1"), ("i2", "s2"), ("i3", "s3")])
}

/// The pair conditions an extension profile of `example2` must meet for
/// deferred acceptance to return [`example2_mu`]:
/// `(i1, i2)` at `s1`, `(i2, i3)` at `s2`, `(i3, i1)` and `(i3, i4)` at `s3`.
pub fn example2_target_conditions(prob: &Problem, orders: &[TotalOrder]) -> bool {
    let i = |x: &str| prob.student_id(x).expect("example2 student");
    let s = |x: &str| prob.school_id(x).expect("example2 school").0;
    orders[s("s1")].prefers(i("i1"), i("i2"))
        && orders[s("s2")].prefers(i("i2"), i("i3"))
        && orders[s("s3")].prefers(i("i3"), i("i1"))
        && orders[s("s3")].prefers(i("i3"), i("i4"))
}

/// Builds a matching from `(student, school)` name pairs; everyone else is
/// unmatched. Panics on unknown names.
pub fn named(prob: &Problem, pairs: &[(&str, &str)]) -> Matching {
    let mut a = vec![None; prob.num_students()];
    for (i, s) in pairs {
        a[prob.student_id(i).expect("student name").0] =
            Some(prob.school_id(s).expect("school name"));
    }
    Matching::new(prob, a).expect("fixture matching")
}
