use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Two-sided Student-t tail probability `P(|T| >= |t|)` with `dof` degrees
/// of freedom.
///
/// Uses the identity `P(|T| >= |t|) = I_x(dof/2, 1/2)` with
/// `x = dof / (dof + t^2)`, where `I` is the regularized incomplete beta.
pub fn student_t_pvalue(t: f64, dof: u64) -> Result<f64> {
    if dof < 1 {
        return Err(Error::InvalidDof(dof));
    }
    if t.is_nan() {
        return Err(Error::InvalidProbability(f64::NAN));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let v = dof as f64;
    let x = v / (v + t * t);
    Ok(beta_reg(v / 2.0, 0.5, x).clamp(0.0, 1.0))
}
