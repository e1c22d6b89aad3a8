#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "webly/common.hpp"
#include "webly/pseudolabel.hpp"

namespace webly {

// On-disk dataset directory layout:
//   manifest.json      version "webly-mmco/1", sample count, class names,
//                      modality descriptors, presence flags
//   features_<name>.f32  N x dim row-major float32, little-endian
//   metadata.jsonl     one JSON string per sample (optional)
//   labels.jsonl       pseudo-label records (written via save_labels)
//   ground_truth.u8    N x C bytes in {0,1} (optional, evaluation only)
//
// Features are held as doubles in memory but quantized to float32 at
// generation/ingest time, so save/load round-trips are bit-exact.

enum class ModalityRole { kTrainOnly, kTrainAndTest };

std::string to_string(ModalityRole role);
ModalityRole modality_role_from_string(std::string_view s);

struct ModalityDescriptor {
  std::string name;
  size_t dim = 0;
  ModalityRole role = ModalityRole::kTrainAndTest;

  bool operator==(const ModalityDescriptor&) const = default;
};

struct MultimodalDataset {
  std::vector<ModalityDescriptor> meta;
  std::vector<Mat<double>> features;  // parallel to meta; each N x dim
  // Absent section vs. per-sample absent record are both representable.
  std::optional<std::vector<std::optional<std::string>>> metadata;
  std::optional<Mat<uint8_t>> ground_truth;  // N x C, eval-only
  std::vector<std::string> class_names;

  size_t num_samples() const { return features.empty() ? 0 : features.front().rows(); }
  size_t num_classes() const { return class_names.size(); }

  int modality_index(std::string_view name) const;      // -1 when absent
  const Mat<double>& features_of(std::string_view name) const;  // ArgumentError when absent
  const ModalityDescriptor& descriptor_of(std::string_view name) const;

  // Checks every structural invariant (row counts, finiteness, ground-truth
  // shape and range, name uniqueness). Throws FormatError/ArgumentError.
  void validate() const;

  bool operator==(const MultimodalDataset&) const = default;
};

MultimodalDataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const MultimodalDataset& d, const std::filesystem::path& dir);

// Appends a "concat" modality whose rows are the member rows concatenated in
// the given order.
MultimodalDataset make_concat_modality(const MultimodalDataset& d,
                                       const std::vector<std::string>& members);

// Synthetic multimodal noisy-data generator.
//
// Per class: n_per_class positive-labeled samples of which
// floor(noise_level * n_per_class) are false positives drawn from the
// background cluster in every modality; the rest are true positives drawn
// from a class-specific unit-variance Gaussian whose mean sits at distance
// class_separation from the background cluster (origin), independently per
// modality. A fraction hard_fraction of the true positives has exactly one
// uniformly chosen modality replaced by a background draw. n_background
// negative-labeled background samples follow. Pure function of seed.
struct SynthConfig {
  int n_classes = 0;
  int n_per_class = 0;
  int n_background = 0;
  std::vector<int> modality_dims;
  double noise_level = 0.0;    // n_FP / (n_TP + n_FP), in [0, 1)
  double hard_fraction = 0.0;  // in [0, 1]
  double class_separation = 3.0;
  uint64_t seed = 0;

  void validate() const;  // throws ArgumentError
};

struct SynthOutput {
  MultimodalDataset data;
  PseudoLabelMatrix labels;  // generator-written counts (1 per pseudo-positive)
  // Bookkeeping for generator tests; not part of the on-disk format.
  std::vector<int> true_class;     // per sample: class index, -1 for background/FP
  std::vector<int> hard_modality;  // per sample: corrupted modality index, -1 otherwise
};

SynthOutput synth_generate(const SynthConfig& cfg);

// Companion split sharing the class geometry of `cfg.seed` but drawing
// disjoint samples; used to produce clean held-out test data for a training
// config. The split name salts the draw stream only.
SynthOutput synth_generate_split(const SynthConfig& cfg, std::string_view split);

// Clean test-split convention for a training config: no noise, no hard
// corruption, per-class count max(20, n_per_class / 5), background count
// n_classes * that.
SynthConfig make_test_split_config(const SynthConfig& train_cfg);

// Shuffled index batches covering 0..n-1 exactly once; the permutation is a
// pure function of (seed, epoch).
std::vector<std::vector<size_t>> minibatch_iterator(size_t n, size_t batch_size,
                                                    uint64_t seed, int epoch);

}  // namespace webly
