#pragma once

#include <vector>

#include "nnconcolic/concolic.hpp"

namespace nnc {

// Row-major tensor of concolic values (last axis fastest). Concrete-only
// tensors carry null expressions throughout.
struct Tensor {
  std::vector<int> shape;
  std::vector<ConcolicValue> data;

  static Tensor from_values(std::vector<int> shape,
                            const std::vector<double>& values);
  static Tensor zeros(std::vector<int> shape);

  std::size_t numel() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }

  // Flat index for a rank-2 [i][j] or rank-3 [i][j][k] tensor.
  std::size_t index2(int i, int j) const;
  std::size_t index3(int i, int j, int k) const;

  const ConcolicValue& at2(int i, int j) const { return data[index2(i, j)]; }
  const ConcolicValue& at3(int i, int j, int k) const {
    return data[index3(i, j, k)];
  }

  std::vector<double> concrete() const;
};

std::size_t shape_numel(const std::vector<int>& shape);

}  // namespace nnc
