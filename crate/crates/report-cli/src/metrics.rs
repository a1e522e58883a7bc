use dsp_core::{signal_power, DbValue, Waveform};

use crate::sweep::ReportError;

/// `10 log10(power(e) / power(d))`; zero disturbance power is undefined and
/// a zero-error signal reports the display floor with its flag set.
pub fn nmse_db(e: &Waveform, d: &Waveform) -> Result<DbValue, ReportError> {
    if e.len() != d.len() {
        return Err(ReportError::Config(format!(
            "e and d must be aligned: {} vs {} samples",
            e.len(),
            d.len()
        )));
    }
    let pd = signal_power(d)?;
    if !(pd > 0.0) {
        return Err(ReportError::UndefinedMetric(
            "disturbance power is zero; NMSE undefined",
        ));
    }
    let pe = signal_power(e)?;
    Ok(DbValue::from_ratio(pe / pd))
}

/// The unified lower bound: the larger (binding) of the information and
/// support bounds.
pub fn unified_bound_db(info_db: DbValue, support_db: DbValue) -> DbValue {
    info_db.max(support_db)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: u32 = 16000;

    fn wf(samples: Vec<f64>) -> Waveform {
        Waveform::new(samples, FS).unwrap()
    }

    #[test]
    fn equal_signals_give_zero_db() {
        let d = wf(vec![0.5, -0.5, 0.25, 0.1]);
        let v = nmse_db(&d.clone(), &d).unwrap();
        assert!(v.db.abs() < 1e-12);
        assert!(!v.floored);
    }

    #[test]
    fn zero_error_reports_floor_with_flag() {
        let d = wf(vec![1.0, -1.0]);
        let e = wf(vec![0.0, 0.0]);
        let v = nmse_db(&e, &d).unwrap();
        assert_eq!(v.db, dsp_core::DB_FLOOR_DB);
        assert!(v.floored);
    }

    #[test]
    fn quarter_power_is_minus_six_db() {
        let d = wf(vec![1.0, -1.0, 1.0, -1.0]);
        let e = wf(vec![0.5, -0.5, 0.5, -0.5]);
        let v = nmse_db(&e, &d).unwrap();
        assert!((v.db + 6.0206).abs() < 1e-3, "{}", v.db);
    }

    #[test]
    fn zero_disturbance_is_undefined() {
        let d = wf(vec![0.0, 0.0]);
        let e = wf(vec![0.1, 0.1]);
        assert!(matches!(
            nmse_db(&e, &d),
            Err(ReportError::UndefinedMetric(_))
        ));
    }

    #[test]
    fn unified_is_commutative_max() {
        let a = DbValue::from_db(-10.0);
        let b = DbValue::from_db(-20.0);
        assert_eq!(unified_bound_db(a, b).db, -10.0);
        assert_eq!(unified_bound_db(b, a).db, -10.0);
        assert_eq!(unified_bound_db(a, a).db, -10.0);
    }
}
