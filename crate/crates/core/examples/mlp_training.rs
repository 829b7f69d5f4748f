//! MLP training curve and a finite-difference check of backpropagation.
//!
//! cargo run --example mlp_training

use biosustain::data::{synth_generate, ColumnStats};
use biosustain::models::mlp::{mlp_fit, Network};
use biosustain::models::{Activation, MlpParams};
use biosustain::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = Network::new(2, &[3], Activation::Tanh, 5, false);
    let x = Matrix::from_rows(&[[0.1, -0.4], [0.7, 0.2], [-0.3, 0.9], [0.5, -0.8], [0.0, 0.3]]);
    let y = [0.2, -0.1, 0.4, 0.9, -0.5];
    let (_, grad) = net.loss_and_gradient(&x, &y);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for (i, g) in grad.iter().enumerate() {
        let mut p = net.parameters();
        let mut probe = net.clone();
        p[i] += h;
        probe.set_parameters(&p);
        let up = probe.loss_and_gradient(&x, &y).0;
        p[i] -= 2.0 * h;
        probe.set_parameters(&p);
        let down = probe.loss_and_gradient(&x, &y).0;
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - g).abs() / fd.abs().max(g.abs()).max(1e-8));
    }
    println!("gradient check over {} parameters: max relative error {worst:.2e}", grad.len());

    let table = synth_generate(800, 0.1, 9)?;
    let names = table.schema().feature_names();
    let x = table.matrix_of(&names)?;
    let x = ColumnStats::fit(&x)?.apply(&x)?;
    let y = table.column("SCI")?;
    let model = mlp_fit(&x, &y, &MlpParams { epochs: 100, ..Default::default() })?;
    println!("initial loss {:.5}", model.initial_loss);
    for (e, l) in model.epoch_losses.iter().enumerate().step_by(20) {
        println!("epoch {:>3}  mean batch loss {l:.5}", e + 1);
    }
    println!("final loss {:.5}", model.final_loss);
    Ok(())
}
