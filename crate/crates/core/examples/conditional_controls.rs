//! Conditional event regression: the event dummy plus commodity and crypto
//! controls, all as log returns.

use eventstudy::frame::frame;
use eventstudy::inference::{conditional_event_regression, flag_range};
use eventstudy::synth::{generate_panel, ControlSpec, SynthScenario};

fn main() -> eventstudy::Result<()> {
    let mut scenario = SynthScenario::new(30, 180, 0.0002, 1.1);
    scenario.noise_sd = 0.008;
    scenario.injected_effect = -0.02;
    scenario.controls = vec![
        ControlSpec { name: "WTI".into(), loading: 0.2, sd: 0.02 },
        ControlSpec { name: "GOLD".into(), loading: -0.1, sd: 0.01 },
        ControlSpec { name: "Silver".into(), loading: 0.0, sd: 0.015 },
        ControlSpec { name: "Bitcoin".into(), loading: 0.05, sd: 0.04 },
    ];
    let synth = generate_panel(&scenario)?;
    let framed = frame(synth.returns, synth.spec.event_date(), false)?;
    let controls = ["WTI", "GOLD", "Silver", "Bitcoin"];

    let r = conditional_event_regression(&framed, "asset", "benchmark", &synth.spec, &flag_range(1, 5), &controls)?;
    let reg = &r.regression;
    println!("{:<10} {:>10} {:>10} {:>8}", "term", "coef", "robust se", "p");
    for (i, name) in reg.names.iter().enumerate() {
        println!("{name:<10} {:>+10.5} {:>10.5} {:>8.4}", reg.coefficients[i], reg.robust_se[i], reg.p_values[i]);
    }
    println!("n = {}, k = {}, adjusted R² {:.4}", reg.n, reg.k, reg.adj_r2);
    Ok(())
}
