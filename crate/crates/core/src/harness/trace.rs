//! CSV persistence: per-step traces, per-episode summaries, and training
//! metrics. Formatting uses Rust's shortest-roundtrip float display, which
//! is deterministic across runs and platforms.

use crate::fusion::ControllerBreakdown;
use crate::sensors::{Observation, TerminationCause, OPPONENT_SECTORS};
use crate::sim::VehicleState;
use std::fmt::Write as _;

/// Fixed trace column order. The observation is written one column per
/// field with rangefinders as opp00..opp35, followed by the full controller
/// breakdown, the reward, and the termination cause (blank until the final
/// row).
pub fn trace_header() -> String {
    let mut h = String::from("step,time,x,y,heading,speed_long,speed_raw,angle,track_pos");
    for k in 0..OPPONENT_SECTORS {
        let _ = write!(h, ",opp{k:02}");
    }
    h.push_str(",delta_l,tau_l,delta_f,tau_f,delta_p,tau_p,delta,tau,reward,termination");
    h
}

/// One executed step of an evaluation episode.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub step: usize,
    pub time: f64,
    pub ego: VehicleState,
    pub obs: Observation,
    pub breakdown: ControllerBreakdown,
    pub reward: f64,
    pub termination: Option<TerminationCause>,
}

impl TraceRow {
    fn to_csv(&self) -> String {
        let mut s = String::with_capacity(512);
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            self.step,
            self.time,
            self.ego.position.x,
            self.ego.position.y,
            self.ego.heading,
            self.obs.speed_long,
            self.obs.speed_raw,
            self.obs.angle,
            self.obs.track_pos,
        );
        for d in &self.obs.opponents {
            let _ = write!(s, ",{d}");
        }
        let b = &self.breakdown;
        let _ = write!(
            s,
            ",{},{},{},{},{},{},{},{},{},{}",
            b.delta_l,
            b.tau_l,
            b.delta_f,
            b.tau_f,
            b.delta_p,
            b.tau_p,
            b.delta,
            b.tau,
            self.reward,
            self.termination.map(|t| t.as_str()).unwrap_or(""),
        );
        s
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = trace_header();
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Per-episode outcome summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub total_return: f64,
    pub steps: usize,
    pub termination: TerminationCause,
    /// Minimum center-to-center distance to any opponent over the episode;
    /// infinity when the scenario has none.
    pub min_opp_distance: f64,
    pub mean_abs_track_pos: f64,
}

pub const SUMMARY_HEADER: &str =
    "episode,return,steps,termination,min_opp_distance,mean_abs_e_norm";

pub fn summary_csv(records: &[EpisodeRecord]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.episode,
            r.total_return,
            r.steps,
            r.termination.as_str(),
            r.min_opp_distance,
            r.mean_abs_track_pos,
        );
    }
    out
}

/// One training episode's metrics row. Loss and value means are blank for
/// episodes that ran no updates (warmup).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainEpisodeMetric {
    pub episode: usize,
    pub total_return: f64,
    pub critic_loss: Option<f64>,
    pub mean_q: Option<f64>,
}

pub const METRICS_HEADER: &str = "episode,return,critic_loss,mean_q";

pub fn metrics_csv(metrics: &[TrainEpisodeMetric]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for m in metrics {
        let loss = m.critic_loss.map(|v| v.to_string()).unwrap_or_default();
        let q = m.mean_q.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", m.episode, m.total_return, loss, q);
    }
    out
}

/// Column selection from a CSV produced by this module.
pub fn extract_columns(csv: &str, columns: &[&str]) -> crate::Result<String> {
    let mut lines = csv.lines();
    let header = lines
        .next()
        .ok_or_else(|| crate::Error::Config("empty trace file".into()))?;
    let names: Vec<&str> = header.split(',').collect();
    let indices: Vec<usize> = columns
        .iter()
        .map(|c| {
            names
                .iter()
                .position(|n| n == c)
                .ok_or_else(|| crate::Error::Config(format!("unknown column '{c}'")))
        })
        .collect::<crate::Result<_>>()?;
    let mut out = columns.join(",");
    out.push('\n');
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let row: Vec<&str> = indices
            .iter()
            .map(|&i| fields.get(i).copied().unwrap_or(""))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
