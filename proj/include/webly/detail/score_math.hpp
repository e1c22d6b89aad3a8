#pragma once

#include <span>

#include "webly/models.hpp"

// Shared per-sample scoring math. Every path (single-sample predict, serial
// reference, OpenMP kernels) runs these exact operations in the same order,
// so scores agree bitwise across paths.

namespace webly::detail {

inline double linear_logit(const ClassifierParams& p, std::span<const double> x, size_t c) {
  const double* w = p.values.data() + p.linear_class_offset(c);
  double z = 0.0;
  for (size_t k = 0; k < p.dim; ++k) z += w[k] * x[k];
  return z + w[p.dim];
}

inline void mlp_hidden(const ClassifierParams& p, std::span<const double> x,
                       std::span<double> h) {
  const double* bias = p.values.data() + p.hidden_bias_offset();
  for (size_t j = 0; j < p.hidden_units; ++j) {
    const double* w = p.values.data() + p.hidden_row_offset(j);
    double a = 0.0;
    for (size_t k = 0; k < p.dim; ++k) a += w[k] * x[k];
    a += bias[j];
    h[j] = a > 0.0 ? a : 0.0;  // ReLU
  }
}

inline double head_logit(const ClassifierParams& p, std::span<const double> h, size_t c) {
  const double* w = p.values.data() + p.output_class_offset(c);
  double z = 0.0;
  for (size_t j = 0; j < p.hidden_units; ++j) z += w[j] * h[j];
  return z + w[p.hidden_units];
}

}  // namespace webly::detail
