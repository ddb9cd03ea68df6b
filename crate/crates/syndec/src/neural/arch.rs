//! Reference network architectures for the two benchmark codes, their
//! ablations, and a configurable small variant.

use crate::error::{Error, Result};
use crate::gf2::LinearCode;
use crate::neural::layer::{Activation, LayerSpec};
use crate::neural::mlp::Mlp;

/// Which network to build for a given code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArchVariant {
    /// For the (63,45) code: six ReLU hidden layers of 300 units.
    Bch6345,
    /// For the (63,36) code: seven hidden blocks of 504 units with batch
    /// norm and sigmoid activations, plus a concatenation skip from hidden
    /// block 1 onto the input of hidden block 4.
    Bch6336,
    /// The (63,36) network without batch normalization.
    Bch6336NoBn,
    /// The (63,36) network without batch normalization and with ReLU hidden
    /// activations.
    Bch6336ReluNoBn,
    /// Arbitrary hidden widths for any code; used for small-scale runs.
    Custom {
        hidden: Vec<usize>,
        activation: Activation,
        batch_norm: bool,
    },
}

fn require_code(code: &LinearCode, n: usize, k: usize, variant: &str) -> Result<()> {
    if code.n() != n || code.k() != k {
        return Err(Error::Config(format!(
            "architecture {variant} expects an ({n},{k}) code, got ({},{})",
            code.n(),
            code.k()
        )));
    }
    Ok(())
}

fn stack_6345() -> Vec<LayerSpec> {
    let mut specs = Vec::new();
    let mut current = 81;
    for _ in 0..6 {
        specs.push(LayerSpec::Dense { inputs: current, outputs: 300 });
        specs.push(LayerSpec::Activation { which: Activation::Relu });
        current = 300;
    }
    specs.push(LayerSpec::Dense { inputs: 300, outputs: 63 });
    specs.push(LayerSpec::Activation { which: Activation::Sigmoid });
    specs
}

fn stack_6336(batch_norm: bool, hidden_act: Activation) -> Vec<LayerSpec> {
    let width = 504; // 8n for n = 63
    let mut specs = Vec::new();
    let mut current = 90;
    let mut block1_output_layer = 0;
    for block in 1..=7 {
        if block == 4 {
            // Skip concatenation: hidden block 1's activations join the
            // stream here, widening this block's dense input to 1008.
            specs.push(LayerSpec::ConcatSkip { source: block1_output_layer });
            current += width;
        }
        specs.push(LayerSpec::Dense { inputs: current, outputs: width });
        if batch_norm {
            specs.push(LayerSpec::BatchNorm { width });
        }
        specs.push(LayerSpec::Activation { which: hidden_act });
        if block == 1 {
            block1_output_layer = specs.len() - 1;
        }
        current = width;
    }
    specs.push(LayerSpec::Dense { inputs: width, outputs: 63 });
    specs.push(LayerSpec::Activation { which: Activation::Sigmoid });
    specs
}

fn stack_custom(code: &LinearCode, hidden: &[usize], activation: Activation, batch_norm: bool) -> Vec<LayerSpec> {
    let mut specs = Vec::new();
    let mut current = (code.n() - code.k()) + code.n();
    for &w in hidden {
        specs.push(LayerSpec::Dense { inputs: current, outputs: w });
        if batch_norm {
            specs.push(LayerSpec::BatchNorm { width: w });
        }
        specs.push(LayerSpec::Activation { which: activation });
        current = w;
    }
    specs.push(LayerSpec::Dense { inputs: current, outputs: code.n() });
    specs.push(LayerSpec::Activation { which: Activation::Sigmoid });
    specs
}

/// Build and initialize the network for `code` per the chosen variant.
/// The input width is always `(n−k) + n` (syndrome bits then reliabilities)
/// and the output is a dense layer of width `n` under a sigmoid.
pub fn build_architecture(code: &LinearCode, variant: &ArchVariant, seed: u64) -> Result<Mlp> {
    let specs = match variant {
        ArchVariant::Bch6345 => {
            require_code(code, 63, 45, "bch6345")?;
            stack_6345()
        }
        ArchVariant::Bch6336 => {
            require_code(code, 63, 36, "bch6336")?;
            stack_6336(true, Activation::Sigmoid)
        }
        ArchVariant::Bch6336NoBn => {
            require_code(code, 63, 36, "bch6336_no_bn")?;
            stack_6336(false, Activation::Sigmoid)
        }
        ArchVariant::Bch6336ReluNoBn => {
            require_code(code, 63, 36, "bch6336_relu_no_bn")?;
            stack_6336(false, Activation::Relu)
        }
        ArchVariant::Custom { hidden, activation, batch_norm } => {
            if hidden.contains(&0) {
                return Err(Error::Config("custom architecture has a zero-width layer".into()));
            }
            stack_custom(code, hidden, *activation, *batch_norm)
        }
    };
    let input = (code.n() - code.k()) + code.n();
    Mlp::from_specs(input, &specs, seed)
}
