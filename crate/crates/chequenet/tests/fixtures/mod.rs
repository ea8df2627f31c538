//! Shared test networks written as cheque CSV text.

#![allow(dead_code)]

pub const SIX_NODE: &str = "\
cheque_id,issuer_id,recipient_id,value_cents,issue_date,maturity_date
q1,1,2,20,2009-03-31,2010-03-31
q2,5,2,12,,
q3,1,4,20,,
q4,2,4,30,,
q5,5,6,10,,
q6,3,6,8,,
";

/// V = 1,000,000 cents, so 100 cents is 0.01 % of value.
///
/// * 1005 fails alone (5.11 %), then takes 1011 (7.15 %) with it.
/// * 1011 fails alone (7.15 %).
/// * 1029 fails alone (4.41 %), then 2001 (4.27 %), then 2002 (0.21 %).
///
/// Everything else pays into the sink 9000, which never fails, through
/// fillers of at most 3 % each.
pub fn staged_losses() -> String {
    let mut rows = vec![
        ("1005", "1011", 51_100),
        ("1011", "9000", 71_500),
        ("1029", "2001", 44_100),
        ("2001", "2002", 42_700),
        ("2002", "9000", 2_100),
    ];
    let fillers: Vec<String> = (1..=27).map(|k| format!("30{k:02}")).collect();
    for (k, f) in fillers.iter().enumerate() {
        rows.push((f.as_str(), "9000", if k < 26 { 30_000 } else { 8_500 }));
    }
    let mut out =
        String::from("cheque_id,issuer_id,recipient_id,value_cents,issue_date,maturity_date\n");
    for (k, (i, j, v)) in rows.iter().enumerate() {
        out.push_str(&format!("t{k:02},{i},{j},{v},,\n"));
    }
    out
}
