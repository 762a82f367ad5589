#include <cmath>

#include "nnconcolic/errors.hpp"
#include "nnconcolic/nn.hpp"

namespace nnc {

namespace {

const ConcolicValue kZero = ConcolicValue::constant(0.0);
const ConcolicValue kOne = ConcolicValue::constant(1.0);
const ConcolicValue kTwo = ConcolicValue::constant(2.0);

ConcolicValue add(const ConcolicValue& a, const ConcolicValue& b) {
  return arith(a, b, ArithKind::Add);
}
ConcolicValue sub(const ConcolicValue& a, const ConcolicValue& b) {
  return arith(a, b, ArithKind::Sub);
}
ConcolicValue mul(const ConcolicValue& a, const ConcolicValue& b) {
  return arith(a, b, ArithKind::Mul);
}
ConcolicValue div(const ConcolicValue& a, const ConcolicValue& b) {
  return arith(a, b, ArithKind::Div);
}

ConcolicValue apply_scalar_activation(Activation act, const ConcolicValue& x,
                                      BranchTrace& rec,
                                      const ActivationThresholds& thr) {
  switch (act) {
    case Activation::Relu: return relu_act(x, rec);
    case Activation::Tanh: return tanh_act(x, rec, thr);
    case Activation::Sigmoid: return sigmoid_act(x, rec, thr);
    case Activation::Linear: return x;
    case Activation::Softmax:
      throw EngineError(ErrorKind::ShapeError,
                        "softmax is not an element-wise activation");
  }
  throw EngineError(ErrorKind::ShapeError, "unknown activation");
}

// Element-wise activation over a vector of cells in index order;
// softmax is handled tensor-wise by the caller.
void activate_in_place(std::vector<ConcolicValue>& cells, Activation act,
                       BranchTrace& rec, const ActivationThresholds& thr) {
  if (act == Activation::Linear) return;
  for (auto& cell : cells) cell = apply_scalar_activation(act, cell, rec, thr);
}

Tensor finish_with_activation(Tensor t, Activation act, BranchTrace& rec,
                              const ActivationThresholds& thr) {
  if (act == Activation::Softmax) return softmax(t);
  activate_in_place(t.data, act, rec, thr);
  return t;
}

}  // namespace

ConcolicValue relu_act(const ConcolicValue& x, BranchTrace& rec) {
  if (compare(x, kZero, Relation::Lt, rec)) return ConcolicValue::constant(0.0);
  return x;
}

ConcolicValue exp_c(const ConcolicValue& x, BranchTrace& rec) {
  if (compare(x, kZero, Relation::Lt, rec)) {
    return div(kOne, exp_c(neg(x), rec));
  }
  if (compare(x, kOne, Relation::Gt, rec)) {
    // exp(x/2) is evaluated once and squared; evaluating it twice would
    // record the same branch sequence twice.
    ConcolicValue half = exp_c(div(x, kTwo), rec);
    return mul(half, half);
  }
  double value = std::exp(x.val);
  if (!std::isfinite(value))
    throw EngineError(ErrorKind::NumericOverflow, "exp overflow");
  if (x.symbolic()) {
    // Last constraint before the downgrade: value >= 1+x && value <= 1+2x,
    // non-strict so it also holds at x = 0.
    BranchPredicate bracket;
    ExprPtr c = make_const(value);
    bracket.atoms.push_back(
        {c, Relation::Ge, make_add(make_const(1.0), x.exp)});
    bracket.atoms.push_back(
        {c, Relation::Le,
         make_add(make_const(1.0), make_mul(make_const(2.0), x.exp))});
    bracket.taken =
        value >= 1.0 + x.val && value <= 1.0 + 2.0 * x.val;
    rec.record(std::move(bracket));
  }
  return ConcolicValue::constant(value);
}

ConcolicValue tanh_act(const ConcolicValue& x, BranchTrace& rec,
                       const ActivationThresholds& thr) {
  const ConcolicValue upper = ConcolicValue::constant(thr.tanh_threshold);
  const ConcolicValue lower = ConcolicValue::constant(-thr.tanh_threshold);
  if (!compare(x, kZero, Relation::Eq, rec)) {
    if (!compare(x, upper, Relation::Ge, rec)) {
      compare(x, lower, Relation::Le, rec);
    }
  }
  ConcolicValue e_pos = exp_c(x, rec);
  ConcolicValue e_neg = exp_c(neg(x), rec);
  return div(sub(e_pos, e_neg), add(e_pos, e_neg));
}

ConcolicValue sigmoid_act(const ConcolicValue& x, BranchTrace& rec,
                          const ActivationThresholds& thr) {
  const ConcolicValue upper = ConcolicValue::constant(thr.sigmoid_threshold);
  const ConcolicValue lower = ConcolicValue::constant(-thr.sigmoid_threshold);
  if (!compare(x, kZero, Relation::Eq, rec)) {
    if (!compare(x, upper, Relation::Ge, rec)) {
      compare(x, lower, Relation::Le, rec);
    }
  }
  ConcolicValue e_neg = exp_c(neg(x), rec);
  return div(kOne, add(kOne, e_neg));
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1)
    throw EngineError(ErrorKind::ShapeError, "softmax expects rank-1 input");
  double sum = 0.0;
  std::vector<double> exps(logits.numel());
  for (std::size_t i = 0; i < logits.numel(); ++i) {
    exps[i] = std::exp(logits.data[i].val);
    sum += exps[i];
  }
  if (!std::isfinite(sum) || sum == 0.0)
    throw EngineError(ErrorKind::NumericOverflow, "softmax overflow");
  Tensor out = Tensor::zeros(logits.shape);
  for (std::size_t i = 0; i < logits.numel(); ++i) {
    double p = exps[i] / sum;
    if (!std::isfinite(p))
      throw EngineError(ErrorKind::NumericOverflow, "softmax overflow");
    out.data[i] = ConcolicValue::constant(p);
  }
  return out;
}

Tensor dense(const Tensor& input, const DenseLayer& layer, BranchTrace& rec,
             const ActivationThresholds& thr) {
  std::vector<int> out_shape = layer_output_shape(LayerSpec{layer}, input.shape);
  std::size_t in_dim = layer.weights.size();
  std::size_t out_dim = layer.bias.size();

  Tensor out = Tensor::zeros(out_shape);
  for (std::size_t j = 0; j < out_dim; ++j) {
    ConcolicValue acc = kZero;
    for (std::size_t i = 0; i < in_dim; ++i) {
      acc = add(acc, mul(input.data[i],
                         ConcolicValue::constant(layer.weights[i][j])));
    }
    acc = add(acc, ConcolicValue::constant(layer.bias[j]));
    out.data[j] = acc;
  }
  return finish_with_activation(std::move(out), layer.activation, rec, thr);
}

Tensor conv2d(const Tensor& input, const Conv2DLayer& layer, BranchTrace& rec,
              const ActivationThresholds& thr) {
  std::vector<int> out_shape = layer_output_shape(LayerSpec{layer}, input.shape);
  int m = static_cast<int>(layer.kernel[0].size());
  int n = static_cast<int>(layer.kernel[0][0].size());
  int l = static_cast<int>(layer.kernel[0][0][0].size());
  int S = layer.stride;

  Tensor out = Tensor::zeros(out_shape);
  for (int k = 0; k < out_shape[2]; ++k) {
    for (int i = 0; i < out_shape[0]; ++i) {
      for (int j = 0; j < out_shape[1]; ++j) {
        ConcolicValue acc = kZero;
        for (int row = i * S; row < i * S + m; ++row) {
          for (int col = j * S; col < j * S + n; ++col) {
            for (int dep = 0; dep < l; ++dep) {
              const double w = layer.kernel[k][row - i * S][col - j * S][dep];
              acc = add(acc, mul(input.at3(row, col, dep),
                                 ConcolicValue::constant(w)));
            }
          }
        }
        acc = add(acc, ConcolicValue::constant(layer.bias[k]));
        out.data[out.index3(i, j, k)] = acc;
      }
    }
  }
  return finish_with_activation(std::move(out), layer.activation, rec, thr);
}

Tensor maxpool2d(const Tensor& input, const MaxPool2DLayer& layer,
                 BranchTrace& rec) {
  std::vector<int> out_shape = layer_output_shape(LayerSpec{layer}, input.shape);
  int S = layer.stride;

  Tensor out = Tensor::zeros(out_shape);
  for (int i = 0; i < out_shape[0]; ++i) {
    for (int j = 0; j < out_shape[1]; ++j) {
      for (int k = 0; k < out_shape[2]; ++k) {
        // Left fold of pairwise compares over the window in row-major
        // order; the larger value survives with its expression.
        ConcolicValue best = input.at3(i * S, j * S, k);
        bool first = true;
        for (int row = i * S; row < i * S + layer.pool_rows; ++row) {
          for (int col = j * S; col < j * S + layer.pool_cols; ++col) {
            if (first) {
              first = false;
              continue;
            }
            const ConcolicValue& candidate = input.at3(row, col, k);
            if (compare(best, candidate, Relation::Lt, rec)) best = candidate;
          }
        }
        out.data[out.index3(i, j, k)] = best;
      }
    }
  }
  return out;
}

Tensor simple_rnn(const Tensor& seq, const SimpleRNNLayer& layer,
                  BranchTrace& rec, const ActivationThresholds& thr) {
  std::vector<int> out_shape = layer_output_shape(LayerSpec{layer}, seq.shape);
  int steps = seq.shape[0];
  int features = seq.shape[1];
  int units = out_shape[0];

  std::vector<ConcolicValue> h_prev(units, kZero);
  for (int t = 0; t < steps; ++t) {
    std::vector<ConcolicValue> h_next(units, kZero);
    for (int i = 0; i < units; ++i) {
      ConcolicValue h = kZero;
      for (int j = 0; j < units; ++j)
        h = add(h, mul(h_prev[j], ConcolicValue::constant(layer.w_hh[j][i])));
      for (int j = 0; j < features; ++j)
        h = add(h, mul(seq.at2(t, j), ConcolicValue::constant(layer.w_xh[j][i])));
      h = add(h, ConcolicValue::constant(layer.b_h[i]));
      h_next[i] = layer.activation == Activation::Tanh
                      ? tanh_act(h, rec, thr)
                      : h;
    }
    h_prev = std::move(h_next);
  }

  Tensor out = Tensor::zeros(out_shape);
  out.data = std::move(h_prev);
  return out;
}

Tensor lstm(const Tensor& seq, const LSTMLayer& layer, BranchTrace& rec,
            const ActivationThresholds& thr) {
  std::vector<int> out_shape = layer_output_shape(LayerSpec{layer}, seq.shape);
  int steps = seq.shape[0];
  int features = seq.shape[1];
  int units = out_shape[0];

  std::vector<ConcolicValue> h(units, kZero);
  std::vector<ConcolicValue> c(units, kZero);
  for (int t = 0; t < steps; ++t) {
    std::vector<ConcolicValue> gi(units, kZero), gf(units, kZero),
        go(units, kZero), gc(units, kZero);
    for (int j = 0; j < units; ++j) {
      for (int k = 0; k < features; ++k) {
        const ConcolicValue& x = seq.at2(t, k);
        gi[j] = add(gi[j], mul(x, ConcolicValue::constant(layer.w_i[k][j])));
        gf[j] = add(gf[j], mul(x, ConcolicValue::constant(layer.w_f[k][j])));
        go[j] = add(go[j], mul(x, ConcolicValue::constant(layer.w_o[k][j])));
        gc[j] = add(gc[j], mul(x, ConcolicValue::constant(layer.w_c[k][j])));
      }
      for (int u = 0; u < units; ++u) {
        gi[j] = add(gi[j], mul(h[u], ConcolicValue::constant(layer.u_i[u][j])));
        gf[j] = add(gf[j], mul(h[u], ConcolicValue::constant(layer.u_f[u][j])));
        go[j] = add(go[j], mul(h[u], ConcolicValue::constant(layer.u_o[u][j])));
        gc[j] = add(gc[j], mul(h[u], ConcolicValue::constant(layer.u_c[u][j])));
      }
      gi[j] = add(gi[j], ConcolicValue::constant(layer.b_i[j]));
      gf[j] = add(gf[j], ConcolicValue::constant(layer.b_f[j]));
      go[j] = add(go[j], ConcolicValue::constant(layer.b_o[j]));
      gc[j] = add(gc[j], ConcolicValue::constant(layer.b_c[j]));
    }
    // Gate sigmoids are applied here, at the update step, not during
    // accumulation: c = sigm(f)*c_prev + sigm(i)*tanh(cc); h = sigm(o)*tanh(c).
    std::vector<ConcolicValue> h_next(units, kZero), c_next(units, kZero);
    for (int j = 0; j < units; ++j) {
      ConcolicValue forget_term = mul(sigmoid_act(gf[j], rec, thr), c[j]);
      ConcolicValue input_term =
          mul(sigmoid_act(gi[j], rec, thr), tanh_act(gc[j], rec, thr));
      c_next[j] = add(forget_term, input_term);
      h_next[j] = mul(sigmoid_act(go[j], rec, thr), tanh_act(c_next[j], rec, thr));
    }
    h = std::move(h_next);
    c = std::move(c_next);
  }

  Tensor out = Tensor::zeros(out_shape);
  out.data = std::move(h);
  return out;
}

Tensor apply_layer(const Tensor& input, const LayerSpec& layer,
                   BranchTrace& rec, const ActivationThresholds& thr) {
  struct Visitor {
    const Tensor& input;
    BranchTrace& rec;
    const ActivationThresholds& thr;

    Tensor operator()(const DenseLayer& l) { return dense(input, l, rec, thr); }
    Tensor operator()(const Conv2DLayer& l) { return conv2d(input, l, rec, thr); }
    Tensor operator()(const MaxPool2DLayer& l) {
      return maxpool2d(input, l, rec);
    }
    Tensor operator()(const FlattenLayer&) {
      Tensor out;
      out.shape = {static_cast<int>(input.numel())};
      out.data = input.data;
      return out;
    }
    Tensor operator()(const SimpleRNNLayer& l) {
      return simple_rnn(input, l, rec, thr);
    }
    Tensor operator()(const LSTMLayer& l) { return lstm(input, l, rec, thr); }
    Tensor operator()(const ActivationLayer& l) {
      if (l.kind == Activation::Softmax) return softmax(input);
      Tensor out = input;
      activate_in_place(out.data, l.kind, rec, thr);
      return out;
    }
  };
  layer_output_shape(layer, input.shape);  // shape check before compute
  return std::visit(Visitor{input, rec, thr}, layer);
}

int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

ForwardResult forward_concolic(const ModelSpec& model, const Tensor& input,
                               const SymVars& sym_vars,
                               const ActivationThresholds& thresholds) {
  thresholds.validate();
  if (input.shape != model.input_shape)
    throw EngineError(ErrorKind::ShapeError,
                      "input shape does not match model input shape");

  Tensor current = input;
  for (const auto& [flat, var_id] : sym_vars) {
    if (flat < 0 || static_cast<std::size_t>(flat) >= current.numel())
      throw EngineError(ErrorKind::ShapeError,
                        "symbolic index out of range");
    current.data[flat] =
        ConcolicValue::variable(current.data[flat].val, var_id);
  }

  ForwardResult result;
  for (const auto& layer : model.layers)
    current = apply_layer(current, layer, result.trace, thresholds);

  result.probs = current.concrete();
  result.cls = argmax_lowest(result.probs);
  return result;
}

}  // namespace nnc
