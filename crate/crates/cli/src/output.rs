//! CSV writers. Floats are printed with 17 significant digits so that a
//! value read back is bit-identical.

use std::io::Write;

use lembas::dynamics::Trajectory;

pub const TRAJECTORY_HEADER: [&str; 10] = ["t", "U_A", "dU_dt", "dW_dt", "dQ_dt", "W_cum", "Q_cum", "S_A", "dS_dt", "T_star"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_trajectory(out: impl Write, traj: &Trajectory<f64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for r in &traj.records {
        w.write_record([
            num(r.t),
            num(r.u_a),
            num(r.du_dt),
            num(r.dw_dt),
            num(r.dq_dt),
            num(r.w_cum),
            num(r.q_cum),
            num(r.s_a),
            opt(r.ds_dt),
            opt(r.t_star),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub w_total: f64,
    pub q_total: f64,
    pub eta: Option<f64>,
}

pub fn write_sweep(out: impl Write, param: &str, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([param, "W_total", "Q_total", "eta"])?;
    for r in rows {
        w.write_record([num(r.value), num(r.w_total), num(r.q_total), opt(r.eta)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for &x in &[0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(opt(None), "");
    }
}
