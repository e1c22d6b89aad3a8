#pragma once

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "webly/common.hpp"

namespace webly {

enum class ModelKind { kLinear, kMlp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

// Per-class binary probabilistic classifier over one modality. Parameters
// live in a single flat vector:
//   linear: per class c, [weights (dim), bias]
//   mlp:    [hidden weights (H x dim, row-major), hidden biases (H)],
//           then per class c, [output weights (H), output bias]
// The MLP hidden layer is shared across classes; output heads are per class.
struct ClassifierParams {
  ModelKind kind = ModelKind::kLinear;
  std::string modality;
  size_t dim = 0;
  size_t n_classes = 0;
  size_t hidden_units = 0;  // 0 for linear
  std::vector<double> values;

  size_t size() const { return values.size(); }

  // Flat-layout offsets.
  size_t linear_class_offset(size_t c) const { return c * (dim + 1); }
  size_t hidden_row_offset(size_t j) const { return j * dim; }
  size_t hidden_bias_offset() const { return hidden_units * dim; }
  size_t output_class_offset(size_t c) const {
    return hidden_units * dim + hidden_units + c * (hidden_units + 1);
  }

  std::span<const double> linear_weights(size_t c) const {
    return {values.data() + linear_class_offset(c), dim};
  }
  double linear_bias(size_t c) const { return values[linear_class_offset(c) + dim]; }
  std::span<const double> output_weights(size_t c) const {
    return {values.data() + output_class_offset(c), hidden_units};
  }
  double output_bias(size_t c) const { return values[output_class_offset(c) + hidden_units]; }

  bool operator==(const ClassifierParams&) const = default;
};

// linear -> all zeros (untrained confidence is exactly 0.5); mlp -> hidden
// block uniform(-a, a) with a = sqrt(6 / (dim + hidden)), output heads zero.
ClassifierParams init_params(ModelKind kind, std::string modality, size_t dim,
                             size_t n_classes, size_t hidden_units, uint64_t seed);

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// -(y ln s + (1-y) ln(1-s)); callers clamp s beforehand.
inline double binary_cross_entropy(double s, int y) {
  return y ? -std::log(s) : -std::log(1.0 - s);
}

// Clamped sigmoid of the class-c logit.
double predict(const ClassifierParams& params, std::span<const double> x, size_t c);

// Exact gradient of sum_{n,c} v(n,c) * bce(y(n,c), score(n,c)) with respect to
// the flat parameter vector. Entries with v = 0 contribute nothing.
std::vector<double> weighted_gradient(const ClassifierParams& params, const Mat<double>& X,
                                      const Mat<uint8_t>& y, const Mat<double>& v);

// The scalar the gradient differentiates.
double weighted_loss(const ClassifierParams& params, const Mat<double>& X,
                     const Mat<uint8_t>& y, const Mat<double>& v);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<double> m;  // first moments
  std::vector<double> v;  // second moments
  int64_t step = 0;

  static AdamState init(size_t n_params, AdamConfig cfg = {});
};

// Standard bias-corrected Adam, in place.
void adam_step(std::vector<double>& params, std::span<const double> grad, AdamState& state);

// Central finite differences against weighted_gradient on up to max_coords
// coordinates (deterministic subsample). Returns the max relative error with
// denominator max(1, |fd|, |analytic|).
double finite_difference_check(const ClassifierParams& params, const Mat<double>& X,
                               const Mat<uint8_t>& y, const Mat<double>& v, double h,
                               size_t max_coords = 512, uint64_t seed = 0);

// Versioned single-file container; parameters stored as float64 LE, bit-exact
// across save/load.
void save_model(const ClassifierParams& params, const std::vector<std::string>& class_names,
                const std::filesystem::path& file);
struct LoadedModel {
  ClassifierParams params;
  std::vector<std::string> class_names;
};
LoadedModel load_model(const std::filesystem::path& file);

}  // namespace webly
