//! Trace and summary CSV serialization. The column order is fixed, numeric
//! fields carry six decimal places, and absent values are empty fields, so
//! written files diff cleanly and re-serializing a parsed file reproduces
//! it byte for byte.

use std::fmt::Write as _;

use crate::engine::TraceRecord;
use crate::error::Error;
use crate::geometry::Vec2;
use crate::harness::grid::SummaryRow;
use crate::layer::BehaviouralAlternative;
use crate::world::ButtonId;

pub const TRACE_HEADER: &str = "trial_id,tick,time_s,human_x,human_y,human_goal,asst_x,asst_y,asst_goal,asst_pointing,enforced,q1,q2,q3,q4,q5";

pub const SUMMARY_HEADER: &str = "policy,human_choice,replication,human_final_button,asst_final_button,human_score,asst_score,duration_s";

fn button_field(button: Option<ButtonId>) -> &'static str {
    button.map(ButtonId::label).unwrap_or("")
}

/// Renders one trial's trace as CSV text, header included.
pub fn trace_to_csv(trial_id: &str, trace: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 + trace.len() * 96);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in trace {
        let _ = writeln!(
            out,
            "{trial_id},{},{:.6},{:.6},{:.6},{},{:.6},{:.6},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.tick,
            r.time_s,
            r.human_pos.x,
            r.human_pos.y,
            button_field(r.human_goal),
            r.assistant_pos.x,
            r.assistant_pos.y,
            button_field(r.assistant_goal),
            button_field(r.assistant_pointing),
            r.enforced.map(BehaviouralAlternative::token).unwrap_or(""),
            r.q[0],
            r.q[1],
            r.q[2],
            r.q[3],
            r.q[4],
        );
    }
    out
}

/// Parses trace CSV text back into `(trial_id, record)` rows.
pub fn parse_trace_csv(text: &str) -> Result<Vec<(String, TraceRecord)>, Error> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRACE_HEADER => {}
        other => {
            return Err(Error::TraceParse(format!(
                "bad or missing trace header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (number, line) in lines.enumerate() {
        let row = parse_trace_row(line)
            .map_err(|detail| Error::TraceParse(format!("line {}: {detail}", number + 2)))?;
        rows.push(row);
    }
    Ok(rows)
}

fn parse_trace_row(line: &str) -> Result<(String, TraceRecord), String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 16 {
        return Err(format!("expected 16 fields, got {}", fields.len()));
    }
    let float = |i: usize| -> Result<f64, String> {
        fields[i]
            .parse::<f64>()
            .map_err(|_| format!("field {}: bad number {:?}", i + 1, fields[i]))
    };
    let button = |i: usize| -> Result<Option<ButtonId>, String> {
        if fields[i].is_empty() {
            Ok(None)
        } else {
            fields[i]
                .parse::<ButtonId>()
                .map(Some)
                .map_err(|_| format!("field {}: bad button {:?}", i + 1, fields[i]))
        }
    };
    let enforced = if fields[10].is_empty() {
        None
    } else {
        Some(
            BehaviouralAlternative::from_token(fields[10])
                .ok_or_else(|| format!("field 11: bad alternative {:?}", fields[10]))?,
        )
    };
    let record = TraceRecord {
        tick: fields[1]
            .parse::<u64>()
            .map_err(|_| format!("field 2: bad tick {:?}", fields[1]))?,
        time_s: float(2)?,
        human_pos: Vec2::new(float(3)?, float(4)?),
        human_goal: button(5)?,
        assistant_pos: Vec2::new(float(6)?, float(7)?),
        assistant_goal: button(8)?,
        assistant_pointing: button(9)?,
        enforced,
        q: [float(11)?, float(12)?, float(13)?, float(14)?, float(15)?],
    };
    Ok((fields[0].to_string(), record))
}

/// Groups parsed rows by trial id, preserving first-appearance order.
pub fn group_by_trial(rows: Vec<(String, TraceRecord)>) -> Vec<(String, Vec<TraceRecord>)> {
    let mut groups: Vec<(String, Vec<TraceRecord>)> = Vec::new();
    for (id, record) in rows {
        match groups.iter_mut().find(|(existing, _)| *existing == id) {
            Some((_, records)) => records.push(record),
            None => groups.push((id, vec![record])),
        }
    }
    groups
}

/// Renders grid summary rows as CSV text, header included.
pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6}",
            row.policy,
            row.human_choice,
            row.replication,
            button_field(row.human_final_button),
            button_field(row.assistant_final_button),
            row.human_score,
            row.assistant_score,
            row.duration_s,
        );
    }
    out
}
