#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace webly {

// Probabilities produced by any classifier are clamped to [kProbEps, 1 - kProbEps]
// so cross-entropy stays finite.
inline constexpr double kProbEps = 1e-7;

// Error taxonomy. The CLI maps these onto distinct exit codes:
// ArgumentError -> config error, DataError -> data error, anything else -> internal.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArgumentError : Error {
  using Error::Error;
};
struct StateError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct NotFoundError : DataError {
  using DataError::DataError;
};
struct FormatError : DataError {
  using DataError::DataError;
};
struct UndefinedMetricError : Error {
  using Error::Error;
};

// Dense row-major matrix. Value semantics, no views into foreign storage.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(size_t rows, size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  const std::vector<T>& values() const { return data_; }

  void fill(T v) { data_.assign(data_.size(), v); }

  bool operator==(const Mat&) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

inline double clamp_prob(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

template <typename T>
bool all_finite(const Mat<T>& m) {
  for (const T& v : m.values()) {
    if (!std::isfinite(static_cast<double>(v))) return false;
  }
  return true;
}

}  // namespace webly
