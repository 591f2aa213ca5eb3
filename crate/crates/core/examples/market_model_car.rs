//! Fit the market model over the estimation window, then read abnormal
//! returns and cumulative abnormal returns over the event window.

use eventstudy::frame::frame;
use eventstudy::market_model::{abnormal_returns, fit_market_model, CarSeries};
use eventstudy::synth::{generate_panel, SynthScenario};

fn main() -> eventstudy::Result<()> {
    let mut scenario = SynthScenario::new(21, 160, 0.0003, 0.9);
    scenario.noise_sd = 0.004;
    scenario.injected_effect = -0.012;
    let synth = generate_panel(&scenario)?;
    let spec = synth.spec;
    let framed = frame(synth.returns, spec.event_date(), false)?;

    let (est, evt) = (spec.estimation(), spec.event());
    let fit = fit_market_model(
        framed.column_window("asset", est.start, est.end)?,
        framed.column_window("benchmark", est.start, est.end)?,
    )?;
    println!(
        "estimation {est}: alpha {:.6}, beta {:.4}, residual variance {:.3e}, n = {}",
        fit.alpha_hat, fit.beta_hat, fit.residual_variance, fit.n_obs
    );

    let ars = abnormal_returns(
        &fit,
        framed.column_window("asset", evt.start, evt.end)?,
        framed.column_window("benchmark", evt.start, evt.end)?,
    )?;
    let car = CarSeries::new(evt, ars)?;
    println!("\noffset        AR       CAR");
    for ((offset, ar), running) in evt.offsets().zip(car.abnormal()).zip(car.cumulative()) {
        println!("{offset:>+6} {ar:>+9.5} {running:>+9.5}");
    }
    println!("\nCAR[0; 0]   = {:+.5}", car.car(0, 0)?);
    println!("CAR[+1; +5] = {:+.5}  (injected {:+.5})", car.car(1, 5)?, 5.0 * scenario.injected_effect);
    Ok(())
}
