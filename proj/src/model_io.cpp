#include "nnconcolic/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nnconcolic/errors.hpp"

namespace nnc {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
  throw EngineError(ErrorKind::ParseError, what);
}

void require_keys(const json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional,
                  const std::string& context) {
  if (!obj.is_object()) parse_error(context + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!required.count(item.key()) && !optional.count(item.key()))
      parse_error(context + ": unknown field '" + item.key() + "'");
  }
  for (const auto& key : required)
    if (!obj.contains(key))
      parse_error(context + ": missing field '" + key + "'");
}

double as_number(const json& v, const std::string& context) {
  if (!v.is_number()) parse_error(context + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& context) {
  if (!v.is_number_integer()) parse_error(context + ": expected an integer");
  return v.get<int>();
}

std::vector<int> as_int_list(const json& v, const std::string& context) {
  if (!v.is_array()) parse_error(context + ": expected an array");
  std::vector<int> out;
  for (const auto& e : v) out.push_back(as_int(e, context));
  return out;
}

Vec as_vec(const json& v, const std::string& context) {
  if (!v.is_array()) parse_error(context + ": expected an array");
  Vec out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, context));
  return out;
}

Mat as_mat(const json& v, const std::string& context) {
  if (!v.is_array()) parse_error(context + ": expected a 2-d array");
  Mat out;
  out.reserve(v.size());
  for (const auto& row : v) out.push_back(as_vec(row, context));
  return out;
}

Kernel4 as_kernel(const json& v, const std::string& context) {
  if (!v.is_array()) parse_error(context + ": expected a 4-d array");
  Kernel4 out;
  for (const auto& f : v) {
    if (!f.is_array()) parse_error(context + ": expected a 4-d array");
    std::vector<std::vector<std::vector<double>>> filter;
    for (const auto& row : f) {
      if (!row.is_array()) parse_error(context + ": expected a 4-d array");
      std::vector<std::vector<double>> rows;
      for (const auto& col : row) rows.push_back(as_vec(col, context));
      filter.push_back(std::move(rows));
    }
    out.push_back(std::move(filter));
  }
  return out;
}

Activation parse_activation(const json& v, const std::string& context) {
  if (!v.is_string()) parse_error(context + ": activation must be a string");
  return activation_from_string(v.get<std::string>());
}

LayerSpec parse_layer(const json& obj, std::size_t index) {
  std::string context = "layers[" + std::to_string(index) + "]";
  if (!obj.is_object() || !obj.contains("type"))
    parse_error(context + ": missing 'type'");
  std::string type = obj.at("type").get<std::string>();

  if (type == "dense") {
    require_keys(obj, {"type", "weights", "bias"}, {"activation"}, context);
    DenseLayer l;
    l.weights = as_mat(obj.at("weights"), context + ".weights");
    l.bias = as_vec(obj.at("bias"), context + ".bias");
    if (obj.contains("activation"))
      l.activation = parse_activation(obj.at("activation"), context);
    return l;
  }
  if (type == "conv2d") {
    require_keys(obj, {"type", "kernel", "bias"}, {"stride", "activation"},
                 context);
    Conv2DLayer l;
    l.kernel = as_kernel(obj.at("kernel"), context + ".kernel");
    l.bias = as_vec(obj.at("bias"), context + ".bias");
    if (obj.contains("stride")) l.stride = as_int(obj.at("stride"), context);
    if (obj.contains("activation"))
      l.activation = parse_activation(obj.at("activation"), context);
    return l;
  }
  if (type == "maxpool2d") {
    require_keys(obj, {"type", "pool"}, {"stride"}, context);
    auto pool = as_int_list(obj.at("pool"), context + ".pool");
    if (pool.size() != 2) parse_error(context + ": pool must be [rows, cols]");
    MaxPool2DLayer l;
    l.pool_rows = pool[0];
    l.pool_cols = pool[1];
    l.stride = obj.contains("stride") ? as_int(obj.at("stride"), context)
                                      : pool[0];
    return l;
  }
  if (type == "flatten") {
    require_keys(obj, {"type"}, {}, context);
    return FlattenLayer{};
  }
  if (type == "simple_rnn") {
    require_keys(obj, {"type", "w_xh", "w_hh", "b_h"}, {"activation"}, context);
    SimpleRNNLayer l;
    l.w_xh = as_mat(obj.at("w_xh"), context + ".w_xh");
    l.w_hh = as_mat(obj.at("w_hh"), context + ".w_hh");
    l.b_h = as_vec(obj.at("b_h"), context + ".b_h");
    if (obj.contains("activation"))
      l.activation = parse_activation(obj.at("activation"), context);
    return l;
  }
  if (type == "lstm") {
    require_keys(obj,
                 {"type", "w_i", "w_f", "w_c", "w_o", "u_i", "u_f", "u_c",
                  "u_o", "b_i", "b_f", "b_c", "b_o"},
                 {}, context);
    LSTMLayer l;
    l.w_i = as_mat(obj.at("w_i"), context);
    l.w_f = as_mat(obj.at("w_f"), context);
    l.w_c = as_mat(obj.at("w_c"), context);
    l.w_o = as_mat(obj.at("w_o"), context);
    l.u_i = as_mat(obj.at("u_i"), context);
    l.u_f = as_mat(obj.at("u_f"), context);
    l.u_c = as_mat(obj.at("u_c"), context);
    l.u_o = as_mat(obj.at("u_o"), context);
    l.b_i = as_vec(obj.at("b_i"), context);
    l.b_f = as_vec(obj.at("b_f"), context);
    l.b_c = as_vec(obj.at("b_c"), context);
    l.b_o = as_vec(obj.at("b_o"), context);
    return l;
  }
  if (type == "activation") {
    require_keys(obj, {"type", "kind"}, {}, context);
    ActivationLayer l;
    l.kind = parse_activation(obj.at("kind"), context);
    if (l.kind == Activation::Linear)
      parse_error(context + ": 'linear' is not a valid activation layer kind");
    return l;
  }
  parse_error(context + ": unknown layer type '" + type + "'");
}

json layer_to_json(const LayerSpec& layer) {
  json j;
  j["type"] = layer_type_name(layer);
  if (const auto* d = std::get_if<DenseLayer>(&layer)) {
    j["weights"] = d->weights;
    j["bias"] = d->bias;
    j["activation"] = to_string(d->activation);
  } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
    j["kernel"] = c->kernel;
    j["bias"] = c->bias;
    j["stride"] = c->stride;
    j["activation"] = to_string(c->activation);
  } else if (const auto* p = std::get_if<MaxPool2DLayer>(&layer)) {
    j["pool"] = {p->pool_rows, p->pool_cols};
    j["stride"] = p->stride;
  } else if (const auto* r = std::get_if<SimpleRNNLayer>(&layer)) {
    j["w_xh"] = r->w_xh;
    j["w_hh"] = r->w_hh;
    j["b_h"] = r->b_h;
    j["activation"] = to_string(r->activation);
  } else if (const auto* l = std::get_if<LSTMLayer>(&layer)) {
    j["w_i"] = l->w_i;
    j["w_f"] = l->w_f;
    j["w_c"] = l->w_c;
    j["w_o"] = l->w_o;
    j["u_i"] = l->u_i;
    j["u_f"] = l->u_f;
    j["u_c"] = l->u_c;
    j["u_o"] = l->u_o;
    j["b_i"] = l->b_i;
    j["b_f"] = l->b_f;
    j["b_c"] = l->b_c;
    j["b_o"] = l->b_o;
  } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
    j["kind"] = to_string(a->kind);
  }
  return j;
}

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) parse_error(std::string(what) + ": invalid JSON");
  return j;
}

}  // namespace

ModelSpec parse_model_json(const std::string& text) {
  json j = parse_text(text, "model");
  require_keys(j, {"input_shape", "layers"}, {}, "model");
  ModelSpec model;
  model.input_shape = as_int_list(j.at("input_shape"), "model.input_shape");
  if (!j.at("layers").is_array()) parse_error("model.layers: expected array");
  std::size_t index = 0;
  for (const auto& layer : j.at("layers"))
    model.layers.push_back(parse_layer(layer, index++));
  try {
    model.validate();
  } catch (const EngineError& e) {
    parse_error(std::string("model validation failed: ") + e.what());
  }
  return model;
}

InputData parse_input_json(const std::string& text) {
  json j = parse_text(text, "input");
  require_keys(j, {"shape", "data"}, {"label"}, "input");
  InputData input;
  input.shape = as_int_list(j.at("shape"), "input.shape");
  input.data = as_vec(j.at("data"), "input.data");
  if (j.contains("label")) input.label = as_int(j.at("label"), "input.label");
  if (shape_numel(input.shape) != input.data.size())
    parse_error("input: data length does not match shape");
  return input;
}

std::vector<double> parse_scores_json(const std::string& text) {
  json j = parse_text(text, "scores");
  if (!j.is_array()) parse_error("scores: expected a JSON array of numbers");
  return as_vec(j, "scores");
}

std::string model_to_json(const ModelSpec& model, int indent) {
  json j;
  j["input_shape"] = model.input_shape;
  j["layers"] = json::array();
  for (const auto& layer : model.layers)
    j["layers"].push_back(layer_to_json(layer));
  return j.dump(indent);
}

std::string input_to_json(const InputData& input, int indent) {
  json j;
  j["shape"] = input.shape;
  j["data"] = input.data;
  if (input.label) j["label"] = *input.label;
  return j.dump(indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EngineError(ErrorKind::IoError, "cannot write " + path);
  out << contents;
}

ModelSpec load_model(const std::string& path) {
  return parse_model_json(read_file(path));
}

InputData load_input(const std::string& path) {
  return parse_input_json(read_file(path));
}

std::vector<double> load_scores(const std::string& path) {
  return parse_scores_json(read_file(path));
}

Tensor to_tensor(const InputData& input) {
  return Tensor::from_values(input.shape, input.data);
}

}  // namespace nnc
