#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "webly/common.hpp"

namespace webly {

struct MultimodalDataset;

// Pseudo labels y and prior confidences v0 inferred from metadata text.
// Invariants: labels in {0,1}; confidence in (0,1]; negatives carry
// confidence 1; y == 1 exactly when the match count is >= 1.
struct PseudoLabelMatrix {
  Mat<uint8_t> labels;       // N x C
  Mat<double> confidence;    // N x C
  Mat<int32_t> match_counts; // N x C

  size_t num_samples() const { return labels.rows(); }
  size_t num_classes() const { return labels.cols(); }
  void validate() const;  // throws FormatError on any broken invariant

  bool operator==(const PseudoLabelMatrix&) const = default;
};

// Lowercases and splits on any non-alphanumeric character.
std::vector<std::string> tokenize(std::string_view text);

// Number of non-overlapping occurrences of the concept's token sequence in
// the tokenized text. Multi-word concepts must match contiguously.
int match_count(std::string_view concept_name, std::string_view text);

// v0 = count / (count + 1); monotone in count, range [1/2, 1).
double confidence_from_count(int count);

// Applies match_count/confidence_from_count per (sample, class). All samples
// must carry metadata; missing records raise ArgumentError listing indices.
PseudoLabelMatrix label_dataset(const MultimodalDataset& d,
                                const std::vector<std::string>& concepts);

// labels.jsonl: one record per sample; positive classes carry
// {class, count, v0}, negatives are covered by the default marker.
void save_labels(const PseudoLabelMatrix& labels,
                 const std::vector<std::string>& class_names,
                 const std::filesystem::path& file);
PseudoLabelMatrix load_labels(const std::vector<std::string>& class_names,
                              const std::filesystem::path& file);

}  // namespace webly
