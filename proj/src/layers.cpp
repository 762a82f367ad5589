#include "nnconcolic/layers.hpp"

#include <stdexcept>

#include "nnconcolic/errors.hpp"
#include "nnconcolic/tensor.hpp"

namespace nnc {

namespace {

[[noreturn]] void shape_error(const std::string& what) {
  throw EngineError(ErrorKind::ShapeError, what);
}

void check_matrix(const Mat& m, std::size_t rows, std::size_t cols,
                  const char* name) {
  if (m.size() != rows) shape_error(std::string(name) + ": wrong row count");
  for (const auto& row : m)
    if (row.size() != cols) shape_error(std::string(name) + ": ragged matrix");
}

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "linear") return Activation::Linear;
  if (name == "softmax") return Activation::Softmax;
  throw EngineError(ErrorKind::ParseError, "unknown activation '" + name + "'");
}

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Linear: return "linear";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

const char* layer_type_name(const LayerSpec& layer) {
  struct Visitor {
    const char* operator()(const DenseLayer&) const { return "dense"; }
    const char* operator()(const Conv2DLayer&) const { return "conv2d"; }
    const char* operator()(const MaxPool2DLayer&) const { return "maxpool2d"; }
    const char* operator()(const FlattenLayer&) const { return "flatten"; }
    const char* operator()(const SimpleRNNLayer&) const { return "simple_rnn"; }
    const char* operator()(const LSTMLayer&) const { return "lstm"; }
    const char* operator()(const ActivationLayer&) const { return "activation"; }
  };
  return std::visit(Visitor{}, layer);
}

std::vector<int> layer_output_shape(const LayerSpec& layer,
                                    const std::vector<int>& in) {
  if (const auto* d = std::get_if<DenseLayer>(&layer)) {
    if (in.size() != 1) shape_error("dense expects a rank-1 input");
    std::size_t in_dim = d->weights.size();
    if (in_dim == 0) shape_error("dense: empty weight matrix");
    std::size_t out_dim = d->weights[0].size();
    check_matrix(d->weights, in_dim, out_dim, "dense weights");
    if (d->bias.size() != out_dim) shape_error("dense: bias length mismatch");
    if (static_cast<std::size_t>(in[0]) != in_dim)
      shape_error("dense: input length does not match weight rows");
    return {static_cast<int>(out_dim)};
  }
  if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
    if (in.size() != 3) shape_error("conv2d expects a rank-3 input");
    if (c->stride < 1) shape_error("conv2d: stride must be >= 1");
    std::size_t filters = c->kernel.size();
    if (filters == 0) shape_error("conv2d: no filters");
    std::size_t m = c->kernel[0].size();
    if (m == 0) shape_error("conv2d: empty kernel");
    std::size_t n = c->kernel[0][0].size();
    std::size_t l = n ? c->kernel[0][0][0].size() : 0;
    for (const auto& f : c->kernel) {
      if (f.size() != m) shape_error("conv2d: ragged kernel rows");
      for (const auto& row : f) {
        if (row.size() != n) shape_error("conv2d: ragged kernel cols");
        for (const auto& col : row)
          if (col.size() != l) shape_error("conv2d: ragged kernel depth");
      }
    }
    if (c->bias.size() != filters) shape_error("conv2d: bias length mismatch");
    int H = in[0], W = in[1], D = in[2];
    if (H < static_cast<int>(m) || W < static_cast<int>(n))
      shape_error("conv2d: kernel larger than input");
    if (D != static_cast<int>(l)) shape_error("conv2d: depth mismatch");
    int oh = (H - static_cast<int>(m)) / c->stride + 1;
    int ow = (W - static_cast<int>(n)) / c->stride + 1;
    return {oh, ow, static_cast<int>(filters)};
  }
  if (const auto* p = std::get_if<MaxPool2DLayer>(&layer)) {
    if (in.size() != 3) shape_error("maxpool2d expects a rank-3 input");
    if (p->pool_rows < 1 || p->pool_cols < 1 || p->stride < 1)
      shape_error("maxpool2d: non-positive pool or stride");
    if (in[0] < p->pool_rows || in[1] < p->pool_cols)
      shape_error("maxpool2d: pool larger than input");
    int oh = (in[0] - p->pool_rows) / p->stride + 1;
    int ow = (in[1] - p->pool_cols) / p->stride + 1;
    return {oh, ow, in[2]};
  }
  if (std::get_if<FlattenLayer>(&layer)) {
    return {static_cast<int>(shape_numel(in))};
  }
  if (const auto* r = std::get_if<SimpleRNNLayer>(&layer)) {
    if (in.size() != 2) shape_error("simple_rnn expects a rank-2 input");
    std::size_t features = static_cast<std::size_t>(in[1]);
    std::size_t units = r->b_h.size();
    if (units == 0) shape_error("simple_rnn: no units");
    check_matrix(r->w_xh, features, units, "simple_rnn w_xh");
    check_matrix(r->w_hh, units, units, "simple_rnn w_hh");
    if (r->activation != Activation::Tanh && r->activation != Activation::Linear)
      shape_error("simple_rnn: internal activation must be tanh or linear");
    return {static_cast<int>(units)};
  }
  if (const auto* l = std::get_if<LSTMLayer>(&layer)) {
    if (in.size() != 2) shape_error("lstm expects a rank-2 input");
    std::size_t features = static_cast<std::size_t>(in[1]);
    std::size_t units = l->b_i.size();
    if (units == 0) shape_error("lstm: no units");
    check_matrix(l->w_i, features, units, "lstm w_i");
    check_matrix(l->w_f, features, units, "lstm w_f");
    check_matrix(l->w_c, features, units, "lstm w_c");
    check_matrix(l->w_o, features, units, "lstm w_o");
    check_matrix(l->u_i, units, units, "lstm u_i");
    check_matrix(l->u_f, units, units, "lstm u_f");
    check_matrix(l->u_c, units, units, "lstm u_c");
    check_matrix(l->u_o, units, units, "lstm u_o");
    if (l->b_f.size() != units || l->b_c.size() != units || l->b_o.size() != units)
      shape_error("lstm: bias length mismatch");
    return {static_cast<int>(units)};
  }
  if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
    if (a->kind == Activation::Linear)
      shape_error("activation layer: linear is not a valid kind");
    if (a->kind == Activation::Softmax && in.size() != 1)
      shape_error("softmax expects a rank-1 input");
    return in;
  }
  shape_error("unknown layer");
}

void ModelSpec::validate() {
  if (input_shape.empty())
    throw EngineError(ErrorKind::ShapeError, "empty input shape");
  shape_numel(input_shape);  // checks positivity
  if (layers.empty())
    throw EngineError(ErrorKind::ShapeError, "model has no layers");
  std::vector<int> shape = input_shape;
  for (const auto& layer : layers) shape = layer_output_shape(layer, shape);
  if (shape.size() != 1)
    throw EngineError(ErrorKind::ShapeError,
                      "final layer output must be rank 1");
  class_count = shape[0];
}

void ActivationThresholds::validate() const {
  if (tanh_threshold <= 0.0 || sigmoid_threshold <= 0.0)
    throw EngineError(ErrorKind::ShapeError,
                      "activation thresholds must be positive");
}

}  // namespace nnc
