#pragma once

#include <utility>
#include <vector>

#include "nnconcolic/layers.hpp"
#include "nnconcolic/tensor.hpp"

namespace nnc {

// Instrumented activation primitives. Each records its branch decisions
// on the given trace whenever the argument is symbolic.

// if (x < 0) return 0 else return x; the false arm keeps the symbolic
// expression of x.
ConcolicValue relu_act(const ConcolicValue& x, BranchTrace& rec);

// Branch cascade x == 0, x >= T, x <= -T, then (e^x - e^-x)/(e^x + e^-x)
// with both exponentials instrumented. The result is constant-only: exp
// downgrades its output.
ConcolicValue tanh_act(const ConcolicValue& x, BranchTrace& rec,
                       const ActivationThresholds& thresholds);

// Branch cascade x == 0, x >= T, x <= -T, then 1/(1 + e^-x).
ConcolicValue sigmoid_act(const ConcolicValue& x, BranchTrace& rec,
                          const ActivationThresholds& thresholds);

// Piecewise exponential: x < 0 -> 1/exp(-x); x > 1 -> exp(x/2)^2 with the
// halved call evaluated once; otherwise records the bracketing branch
// c >= 1+x && c <= 1+2x (non-strict, so it holds at x = 0) and returns
// the concrete exp(x) as a constant, ending symbolic propagation.
ConcolicValue exp_c(const ConcolicValue& x, BranchTrace& rec);

// Plain softmax over a rank-1 tensor. Computed on concrete values with
// raw exponentials; records nothing and returns constant-only entries.
Tensor softmax(const Tensor& logits);

Tensor dense(const Tensor& input, const DenseLayer& layer, BranchTrace& rec,
             const ActivationThresholds& thresholds);
Tensor conv2d(const Tensor& input, const Conv2DLayer& layer, BranchTrace& rec,
              const ActivationThresholds& thresholds);
Tensor maxpool2d(const Tensor& input, const MaxPool2DLayer& layer,
                 BranchTrace& rec);
Tensor simple_rnn(const Tensor& seq, const SimpleRNNLayer& layer,
                  BranchTrace& rec, const ActivationThresholds& thresholds);
Tensor lstm(const Tensor& seq, const LSTMLayer& layer, BranchTrace& rec,
            const ActivationThresholds& thresholds);

Tensor apply_layer(const Tensor& input, const LayerSpec& layer,
                   BranchTrace& rec, const ActivationThresholds& thresholds);

// (flat input index, attack variable id)
using SymVars = std::vector<std::pair<int, int>>;

struct ForwardResult {
  int cls = 0;
  std::vector<double> probs;
  BranchTrace trace;
};

struct Prediction {
  int cls = 0;
  std::vector<double> probs;
};

// Seeds symbolic variables at the selected flat positions and runs every
// layer in order. The trace holds all recorded predicates in encounter
// order; class is the argmax of the final outputs with lowest-index ties.
ForwardResult forward_concolic(const ModelSpec& model, const Tensor& input,
                               const SymVars& sym_vars,
                               const ActivationThresholds& thresholds = {});

// Independent plain-double forward pass with identical numerics and no
// instrumentation. Used as the adversarial oracle and as the reference
// implementation the concolic path is checked against.
Prediction forward_concrete(const ModelSpec& model,
                            const std::vector<double>& flat_input,
                            const ActivationThresholds& thresholds = {});
Prediction forward_concrete(const ModelSpec& model, const Tensor& input,
                            const ActivationThresholds& thresholds = {});

int argmax_lowest(const std::vector<double>& values);

}  // namespace nnc
