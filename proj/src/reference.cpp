// Plain-double forward pass with the same operation order and the same
// piecewise exponential as the instrumented path. Kept free of
// ConcolicValue on purpose: it is the reference the concolic
// implementation is checked against, and the oracle used for the
// adversarial class test.

#include <cmath>

#include "nnconcolic/errors.hpp"
#include "nnconcolic/nn.hpp"

namespace nnc {

namespace {

struct RefTensor {
  std::vector<int> shape;
  std::vector<double> data;

  std::size_t index3(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
  }
  std::size_t index2(int i, int j) const {
    return static_cast<std::size_t>(i) * shape[1] + j;
  }
};

double exp_ref(double x) {
  if (x < 0.0) return 1.0 / exp_ref(-x);
  if (x > 1.0) {
    double half = exp_ref(x / 2.0);
    double v = half * half;
    if (!std::isfinite(v))
      throw EngineError(ErrorKind::NumericOverflow, "exp overflow");
    return v;
  }
  double v = std::exp(x);
  if (!std::isfinite(v))
    throw EngineError(ErrorKind::NumericOverflow, "exp overflow");
  return v;
}

double tanh_ref(double x) {
  double ep = exp_ref(x);
  double en = exp_ref(-x);
  return (ep - en) / (ep + en);
}

double sigmoid_ref(double x) { return 1.0 / (1.0 + exp_ref(-x)); }

double activate_ref(Activation act, double x) {
  switch (act) {
    case Activation::Relu: return x < 0.0 ? 0.0 : x;
    case Activation::Tanh: return tanh_ref(x);
    case Activation::Sigmoid: return sigmoid_ref(x);
    case Activation::Linear: return x;
    case Activation::Softmax: break;
  }
  throw EngineError(ErrorKind::ShapeError, "softmax is not element-wise");
}

std::vector<double> softmax_ref(const std::vector<double>& logits) {
  double sum = 0.0;
  std::vector<double> exps(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    exps[i] = std::exp(logits[i]);
    sum += exps[i];
  }
  if (!std::isfinite(sum) || sum == 0.0)
    throw EngineError(ErrorKind::NumericOverflow, "softmax overflow");
  for (auto& e : exps) e /= sum;
  return exps;
}

void check_finite(const std::vector<double>& values) {
  for (double v : values)
    if (!std::isfinite(v))
      throw EngineError(ErrorKind::NumericOverflow,
                        "non-finite layer output");
}

RefTensor apply_ref(const RefTensor& in, const LayerSpec& layer) {
  std::vector<int> out_shape = layer_output_shape(layer, in.shape);
  RefTensor out;
  out.shape = out_shape;

  if (const auto* d = std::get_if<DenseLayer>(&layer)) {
    std::size_t in_dim = d->weights.size();
    std::size_t out_dim = d->bias.size();
    out.data.assign(out_dim, 0.0);
    for (std::size_t j = 0; j < out_dim; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < in_dim; ++i)
        acc = acc + in.data[i] * d->weights[i][j];
      out.data[j] = acc + d->bias[j];
    }
    if (d->activation == Activation::Softmax) {
      out.data = softmax_ref(out.data);
    } else {
      for (auto& v : out.data) v = activate_ref(d->activation, v);
    }
  } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
    int m = static_cast<int>(c->kernel[0].size());
    int n = static_cast<int>(c->kernel[0][0].size());
    int l = static_cast<int>(c->kernel[0][0][0].size());
    int S = c->stride;
    out.data.assign(shape_numel(out_shape), 0.0);
    for (int k = 0; k < out_shape[2]; ++k) {
      for (int i = 0; i < out_shape[0]; ++i) {
        for (int j = 0; j < out_shape[1]; ++j) {
          double acc = 0.0;
          for (int row = i * S; row < i * S + m; ++row)
            for (int col = j * S; col < j * S + n; ++col)
              for (int dep = 0; dep < l; ++dep)
                acc = acc + in.data[in.index3(row, col, dep)] *
                                c->kernel[k][row - i * S][col - j * S][dep];
          out.data[out.index3(i, j, k)] = acc + c->bias[k];
        }
      }
    }
    if (c->activation == Activation::Softmax)
      throw EngineError(ErrorKind::ShapeError, "softmax after conv2d");
    for (auto& v : out.data) v = activate_ref(c->activation, v);
  } else if (const auto* p = std::get_if<MaxPool2DLayer>(&layer)) {
    int S = p->stride;
    out.data.assign(shape_numel(out_shape), 0.0);
    for (int i = 0; i < out_shape[0]; ++i) {
      for (int j = 0; j < out_shape[1]; ++j) {
        for (int k = 0; k < out_shape[2]; ++k) {
          double best = in.data[in.index3(i * S, j * S, k)];
          for (int row = i * S; row < i * S + p->pool_rows; ++row)
            for (int col = j * S; col < j * S + p->pool_cols; ++col) {
              double cand = in.data[in.index3(row, col, k)];
              if (best < cand) best = cand;
            }
          out.data[out.index3(i, j, k)] = best;
        }
      }
    }
  } else if (std::get_if<FlattenLayer>(&layer)) {
    out.data = in.data;
  } else if (const auto* r = std::get_if<SimpleRNNLayer>(&layer)) {
    int steps = in.shape[0];
    int features = in.shape[1];
    int units = out_shape[0];
    std::vector<double> h_prev(units, 0.0);
    for (int t = 0; t < steps; ++t) {
      std::vector<double> h_next(units, 0.0);
      for (int i = 0; i < units; ++i) {
        double h = 0.0;
        for (int j = 0; j < units; ++j) h = h + h_prev[j] * r->w_hh[j][i];
        for (int j = 0; j < features; ++j)
          h = h + in.data[in.index2(t, j)] * r->w_xh[j][i];
        h = h + r->b_h[i];
        h_next[i] = r->activation == Activation::Tanh ? tanh_ref(h) : h;
      }
      h_prev = std::move(h_next);
    }
    out.data = std::move(h_prev);
  } else if (const auto* l = std::get_if<LSTMLayer>(&layer)) {
    int steps = in.shape[0];
    int features = in.shape[1];
    int units = out_shape[0];
    std::vector<double> h(units, 0.0), c(units, 0.0);
    for (int t = 0; t < steps; ++t) {
      std::vector<double> gi(units, 0.0), gf(units, 0.0), go(units, 0.0),
          gc(units, 0.0);
      for (int j = 0; j < units; ++j) {
        for (int k = 0; k < features; ++k) {
          double x = in.data[in.index2(t, k)];
          gi[j] = gi[j] + x * l->w_i[k][j];
          gf[j] = gf[j] + x * l->w_f[k][j];
          go[j] = go[j] + x * l->w_o[k][j];
          gc[j] = gc[j] + x * l->w_c[k][j];
        }
        for (int u = 0; u < units; ++u) {
          gi[j] = gi[j] + h[u] * l->u_i[u][j];
          gf[j] = gf[j] + h[u] * l->u_f[u][j];
          go[j] = go[j] + h[u] * l->u_o[u][j];
          gc[j] = gc[j] + h[u] * l->u_c[u][j];
        }
        gi[j] = gi[j] + l->b_i[j];
        gf[j] = gf[j] + l->b_f[j];
        go[j] = go[j] + l->b_o[j];
        gc[j] = gc[j] + l->b_c[j];
      }
      std::vector<double> h_next(units, 0.0), c_next(units, 0.0);
      for (int j = 0; j < units; ++j) {
        c_next[j] = sigmoid_ref(gf[j]) * c[j] +
                    sigmoid_ref(gi[j]) * tanh_ref(gc[j]);
        h_next[j] = sigmoid_ref(go[j]) * tanh_ref(c_next[j]);
      }
      h = std::move(h_next);
      c = std::move(c_next);
    }
    out.data = std::move(h);
  } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
    if (a->kind == Activation::Softmax) {
      out.data = softmax_ref(in.data);
    } else {
      out.data = in.data;
      for (auto& v : out.data) v = activate_ref(a->kind, v);
    }
  } else {
    throw EngineError(ErrorKind::ShapeError, "unknown layer");
  }

  check_finite(out.data);
  return out;
}

}  // namespace

Prediction forward_concrete(const ModelSpec& model,
                            const std::vector<double>& flat_input,
                            const ActivationThresholds& thresholds) {
  thresholds.validate();
  if (flat_input.size() != shape_numel(model.input_shape))
    throw EngineError(ErrorKind::ShapeError,
                      "input length does not match model input shape");
  RefTensor current{model.input_shape, flat_input};
  for (const auto& layer : model.layers) current = apply_ref(current, layer);

  Prediction p;
  p.probs = std::move(current.data);
  p.cls = argmax_lowest(p.probs);
  return p;
}

Prediction forward_concrete(const ModelSpec& model, const Tensor& input,
                            const ActivationThresholds& thresholds) {
  if (input.shape != model.input_shape)
    throw EngineError(ErrorKind::ShapeError,
                      "input shape does not match model input shape");
  return forward_concrete(model, input.concrete(), thresholds);
}

}  // namespace nnc
