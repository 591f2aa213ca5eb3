//! OLS with heteroskedasticity-consistent inference, and the event-study
//! and sentiment model builders on top of it.

mod models;
mod ols;
mod tdist;

pub use models::{
    conditional_event_regression, event_dummy_regression, flag_range, sentiment_regression, EventRegression, EVENT,
};
pub use ols::{hc_standard_errors, ols_fit, DesignMatrix, RegressionResult, Term, INTERCEPT, RCOND_THRESHOLD};
pub use tdist::student_t_pvalue;
