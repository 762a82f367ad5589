#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nnconcolic/layers.hpp"
#include "nnconcolic/tensor.hpp"

namespace nnc {

// On-disk input: {"shape": [...], "data": [flat row-major], "label": int?}
struct InputData {
  std::vector<int> shape;
  std::vector<double> data;
  std::optional<int> label;
};

// Strict parsers: unknown fields are rejected with ParseError.
ModelSpec parse_model_json(const std::string& text);
InputData parse_input_json(const std::string& text);
std::vector<double> parse_scores_json(const std::string& text);

std::string model_to_json(const ModelSpec& model, int indent = 2);
std::string input_to_json(const InputData& input, int indent = 2);

ModelSpec load_model(const std::string& path);
InputData load_input(const std::string& path);
std::vector<double> load_scores(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Tensor to_tensor(const InputData& input);

}  // namespace nnc
