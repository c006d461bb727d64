use crate::arith::{DirichletCharacter, SPoint};
use crate::error::{domain, Result};
use crate::gammaphase::{mixed_second_derivative, prefactor_dphase_dt, PrefactorParams, Route, DEFAULT_GW_TERMS};
use crate::scalar::Real;

/// Both odd-case inequalities at `(t, ε = 0)`:
/// `½ln(q/π) + ∂∠Γ/∂t > 0` and `∂²∠Γ/∂ε∂t > 0`, by the GW route.
pub fn sufficient_condition_check<T: Real>(chi: &DirichletCharacter, t: T) -> Result<bool> {
    if chi.parity() != 1 || !chi.is_primitive() {
        return domain("sufficient condition applies to odd primitive characters");
    }
    let first = prefactor_dphase_dt(
        SPoint::on_line(t),
        PrefactorParams::odd(chi.modulus()),
        DEFAULT_GW_TERMS,
    )?;
    if !(first.extrapolated > T::zero()) {
        return Ok(false);
    }
    Ok(mixed_second_derivative(t.abs(), 1, Route::Gw, DEFAULT_GW_TERMS)? > T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    #[test]
    fn table_rows() {
        let q3 = &enumerate_characters(3).unwrap()[1];
        assert!(!sufficient_condition_check(q3, 1.0f64).unwrap());
        assert!(sufficient_condition_check(q3, 8.04f64).unwrap());
        let q11 = enumerate_characters(11)
            .unwrap()
            .into_iter()
            .find(|c| c.parity() == 1)
            .unwrap();
        for t in [0.05f64, 1.0, 10.0, 100.0] {
            assert!(sufficient_condition_check(&q11, t).unwrap());
        }
        assert!(sufficient_condition_check(&enumerate_characters(5).unwrap()[2], 3.0f64).is_err());
    }
}
