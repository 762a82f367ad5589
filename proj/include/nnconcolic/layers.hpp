#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nnc {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;          // [rows][cols]
using Kernel4 = std::vector<std::vector<std::vector<std::vector<double>>>>;

enum class Activation { Relu, Tanh, Sigmoid, Linear, Softmax };

Activation activation_from_string(const std::string& name);
const char* to_string(Activation a);

struct DenseLayer {
  Mat weights;  // [in][out]
  Vec bias;     // [out]
  Activation activation = Activation::Linear;
};

struct Conv2DLayer {
  Kernel4 kernel;  // [filter][row][col][depth]
  Vec bias;        // [filter]
  int stride = 1;
  Activation activation = Activation::Linear;
};

struct MaxPool2DLayer {
  int pool_rows = 2;
  int pool_cols = 2;
  int stride = 2;  // defaults to the pool height when absent from JSON
};

struct FlattenLayer {};

struct SimpleRNNLayer {
  Mat w_xh;  // [in][units]
  Mat w_hh;  // [units][units]
  Vec b_h;   // [units]
  Activation activation = Activation::Tanh;  // tanh or linear
};

struct LSTMLayer {
  Mat w_i, w_f, w_c, w_o;  // [in][units]
  Mat u_i, u_f, u_c, u_o;  // [units][units]
  Vec b_i, b_f, b_c, b_o;  // [units]
};

struct ActivationLayer {
  Activation kind = Activation::Relu;  // relu, tanh, sigmoid or softmax
};

using LayerSpec = std::variant<DenseLayer, Conv2DLayer, MaxPool2DLayer,
                               FlattenLayer, SimpleRNNLayer, LSTMLayer,
                               ActivationLayer>;

const char* layer_type_name(const LayerSpec& layer);

// Validates the layer's internal weight dimensions against the incoming
// shape and returns the outgoing shape. Throws ShapeError.
std::vector<int> layer_output_shape(const LayerSpec& layer,
                                    const std::vector<int>& input_shape);

struct ModelSpec {
  std::vector<int> input_shape;
  std::vector<LayerSpec> layers;
  int class_count = 0;  // filled by validate()

  // Runs shape inference over all layers; the final output must be
  // rank 1 and defines class_count.
  void validate();
};

// Saturation thresholds for the tanh/sigmoid branch cascades.
struct ActivationThresholds {
  double tanh_threshold = 3.0;
  double sigmoid_threshold = 6.0;

  void validate() const;
};

}  // namespace nnc
