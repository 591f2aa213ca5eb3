//! Event-dummy regression: abnormal returns on a constant and an indicator
//! for the flagged days, with HC1 standard errors.

use eventstudy::frame::frame;
use eventstudy::inference::{event_dummy_regression, flag_range, EVENT};
use eventstudy::synth::{generate_panel, SynthScenario};

fn main() -> eventstudy::Result<()> {
    let mut scenario = SynthScenario::new(9, 200, 0.0005, 1.3);
    scenario.noise_sd = 0.004;
    scenario.injected_effect = -0.01;
    let synth = generate_panel(&scenario)?;
    let framed = frame(synth.returns, synth.spec.event_date(), false)?;

    for flagged in [flag_range(0, 0), flag_range(1, 5)] {
        let r = event_dummy_regression(&framed, "asset", "benchmark", &synth.spec, &flagged)?;
        let t = r.regression.term(EVENT).expect("event term");
        println!(
            "flagged {:?}: coefficient {:+.6}, robust se {:.6}, t {:+.3}, p {:.4}",
            flagged, t.coefficient, t.robust_se, t.t_stat, t.p_value
        );
        println!(
            "  implied CAR {:+.5}, realised CAR {:+.5}, n = {}, adjusted R² {:.4}",
            r.implied_car(),
            r.flagged_car(),
            r.regression.n,
            r.regression.adj_r2
        );
    }
    Ok(())
}
