#include "nnconcolic/tensor.hpp"

#include "nnconcolic/errors.hpp"

namespace nnc {

std::size_t shape_numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0)
      throw EngineError(ErrorKind::ShapeError, "non-positive dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor Tensor::from_values(std::vector<int> shape,
                           const std::vector<double>& values) {
  if (shape_numel(shape) != values.size())
    throw EngineError(ErrorKind::ShapeError,
                      "data length does not match shape");
  Tensor t;
  t.shape = std::move(shape);
  t.data.reserve(values.size());
  for (double v : values) t.data.push_back(ConcolicValue::constant(v));
  return t;
}

Tensor Tensor::zeros(std::vector<int> shape) {
  std::size_t n = shape_numel(shape);
  Tensor t;
  t.shape = std::move(shape);
  t.data.assign(n, ConcolicValue::constant(0.0));
  return t;
}

std::size_t Tensor::index2(int i, int j) const {
  return static_cast<std::size_t>(i) * shape[1] + j;
}

std::size_t Tensor::index3(int i, int j, int k) const {
  return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
}

std::vector<double> Tensor::concrete() const {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& v : data) out.push_back(v.val);
  return out;
}

}  // namespace nnc
