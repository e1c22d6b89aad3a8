#include "webly/dataset.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "webly/rng.hpp"

namespace webly {

using nlohmann::json;
namespace fs = std::filesystem;

static constexpr const char* kManifestVersion = "webly-mmco/1";

std::string to_string(ModalityRole role) {
  return role == ModalityRole::kTrainOnly ? "train-only" : "train-and-test";
}

ModalityRole modality_role_from_string(std::string_view s) {
  if (s == "train-only") return ModalityRole::kTrainOnly;
  if (s == "train-and-test") return ModalityRole::kTrainAndTest;
  throw FormatError("unknown modality role: " + std::string(s));
}

int MultimodalDataset::modality_index(std::string_view name) const {
  for (size_t i = 0; i < meta.size(); ++i) {
    if (meta[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Mat<double>& MultimodalDataset::features_of(std::string_view name) const {
  const int i = modality_index(name);
  if (i < 0) throw ArgumentError("unknown modality: " + std::string(name));
  return features[static_cast<size_t>(i)];
}

const ModalityDescriptor& MultimodalDataset::descriptor_of(std::string_view name) const {
  const int i = modality_index(name);
  if (i < 0) throw ArgumentError("unknown modality: " + std::string(name));
  return meta[static_cast<size_t>(i)];
}

void MultimodalDataset::validate() const {
  if (meta.empty()) throw ArgumentError("dataset declares no modalities");
  if (meta.size() != features.size()) {
    throw FormatError("modality descriptor count does not match feature matrix count");
  }
  std::set<std::string> names;
  bool any_testable = false;
  for (const auto& m : meta) {
    if (m.dim < 1) throw ArgumentError("modality " + m.name + " has dim 0");
    if (!names.insert(m.name).second) {
      throw ArgumentError("duplicate modality name: " + m.name);
    }
    any_testable = any_testable || m.role == ModalityRole::kTrainAndTest;
  }
  if (!any_testable) throw ArgumentError("no modality has role train-and-test");

  const size_t n = features.front().rows();
  for (size_t i = 0; i < meta.size(); ++i) {
    if (features[i].cols() != meta[i].dim) {
      throw FormatError("modality " + meta[i].name + ": descriptor dim " +
                        std::to_string(meta[i].dim) + " but matrix has " +
                        std::to_string(features[i].cols()) + " columns");
    }
    if (features[i].rows() != n) {
      throw FormatError("modality " + meta[i].name + ": expected " + std::to_string(n) +
                        " rows, found " + std::to_string(features[i].rows()));
    }
    for (size_t r = 0; r < features[i].rows(); ++r) {
      for (size_t c = 0; c < features[i].cols(); ++c) {
        if (!std::isfinite(features[i](r, c))) {
          throw FormatError("modality " + meta[i].name + ": non-finite value at sample " +
                            std::to_string(r));
        }
      }
    }
  }
  if (metadata && metadata->size() != n) {
    throw FormatError("metadata has " + std::to_string(metadata->size()) +
                      " records, expected " + std::to_string(n));
  }
  if (ground_truth) {
    if (ground_truth->rows() != n || ground_truth->cols() != class_names.size()) {
      throw FormatError("ground truth shape " + std::to_string(ground_truth->rows()) + "x" +
                        std::to_string(ground_truth->cols()) + " does not match " +
                        std::to_string(n) + "x" + std::to_string(class_names.size()));
    }
    for (size_t r = 0; r < ground_truth->rows(); ++r) {
      for (size_t c = 0; c < ground_truth->cols(); ++c) {
        if ((*ground_truth)(r, c) > 1) {
          throw FormatError("ground truth entry not in {0,1} at sample " + std::to_string(r));
        }
      }
    }
  }
  std::set<std::string> cls(class_names.begin(), class_names.end());
  if (cls.size() != class_names.size()) throw ArgumentError("duplicate class names");
}

// ---------------------------------------------------------------------------
// Directory I/O
// ---------------------------------------------------------------------------

static void write_file_or_throw(const fs::path& path, const void* data, size_t bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw DataError("write failed: " + path.string());
}

static std::vector<char> read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw NotFoundError("missing file: " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<char> buf(static_cast<size_t>(size));
  if (size > 0) in.read(buf.data(), size);
  if (!in) throw DataError("read failed: " + path.string());
  return buf;
}

void save_dataset(const MultimodalDataset& d, const fs::path& dir) {
  d.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory: " + dir.string());

  json manifest;
  manifest["version"] = kManifestVersion;
  manifest["n_samples"] = d.num_samples();
  manifest["class_names"] = d.class_names;
  json mods = json::array();
  for (const auto& m : d.meta) {
    mods.push_back({{"name", m.name}, {"dim", m.dim}, {"role", to_string(m.role)}});
  }
  manifest["modalities"] = mods;
  manifest["has_metadata"] = d.metadata.has_value();
  manifest["has_ground_truth"] = d.ground_truth.has_value();
  const std::string text = manifest.dump(2) + "\n";
  write_file_or_throw(dir / "manifest.json", text.data(), text.size());

  for (size_t i = 0; i < d.meta.size(); ++i) {
    std::vector<float> buf(d.features[i].size());
    for (size_t k = 0; k < buf.size(); ++k) {
      buf[k] = static_cast<float>(d.features[i].data()[k]);
    }
    write_file_or_throw(dir / ("features_" + d.meta[i].name + ".f32"), buf.data(),
                        buf.size() * sizeof(float));
  }

  if (d.metadata) {
    std::ostringstream out;
    for (const auto& rec : *d.metadata) {
      out << (rec ? json(*rec).dump() : "null") << "\n";
    }
    const std::string s = out.str();
    write_file_or_throw(dir / "metadata.jsonl", s.data(), s.size());
  }
  if (d.ground_truth) {
    write_file_or_throw(dir / "ground_truth.u8", d.ground_truth->data(),
                        d.ground_truth->size());
  }
}

MultimodalDataset load_dataset(const fs::path& dir) {
  const auto manifest_raw = read_file_or_throw(dir / "manifest.json");
  json manifest;
  try {
    manifest = json::parse(manifest_raw.begin(), manifest_raw.end());
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest.json: " + std::string(e.what()));
  }
  if (!manifest.contains("version") || manifest["version"] != kManifestVersion) {
    throw FormatError("manifest version is not " + std::string(kManifestVersion));
  }

  MultimodalDataset d;
  try {
    d.class_names = manifest.at("class_names").get<std::vector<std::string>>();
    const size_t n = manifest.at("n_samples").get<size_t>();
    for (const auto& m : manifest.at("modalities")) {
      ModalityDescriptor md;
      md.name = m.at("name").get<std::string>();
      md.dim = m.at("dim").get<size_t>();
      md.role = modality_role_from_string(m.at("role").get<std::string>());
      d.meta.push_back(md);
    }

    for (const auto& md : d.meta) {
      const fs::path file = dir / ("features_" + md.name + ".f32");
      const auto raw = read_file_or_throw(file);
      const size_t row_bytes = md.dim * sizeof(float);
      if (row_bytes == 0 || raw.size() % row_bytes != 0) {
        throw FormatError(file.string() + ": size " + std::to_string(raw.size()) +
                          " bytes is not a multiple of row size " + std::to_string(row_bytes));
      }
      const size_t rows = raw.size() / row_bytes;
      if (rows != n) {
        throw FormatError(file.string() + ": holds " + std::to_string(rows) +
                          " rows but manifest declares " + std::to_string(n));
      }
      Mat<double> feat(rows, md.dim);
      const float* src = reinterpret_cast<const float*>(raw.data());
      for (size_t k = 0; k < feat.size(); ++k) {
        const float v = src[k];
        if (!std::isfinite(v)) {
          throw FormatError(file.string() + ": non-finite value at sample " +
                            std::to_string(k / md.dim));
        }
        feat.data()[k] = static_cast<double>(v);
      }
      d.features.push_back(std::move(feat));
    }

    if (manifest.at("has_metadata").get<bool>()) {
      const fs::path file = dir / "metadata.jsonl";
      const auto raw = read_file_or_throw(file);
      std::vector<std::optional<std::string>> records;
      std::istringstream in(std::string(raw.begin(), raw.end()));
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        if (rec.is_null()) {
          records.emplace_back(std::nullopt);
        } else {
          records.emplace_back(rec.get<std::string>());
        }
      }
      if (records.size() != n) {
        throw FormatError(file.string() + ": " + std::to_string(records.size()) +
                          " records but manifest declares " + std::to_string(n));
      }
      d.metadata = std::move(records);
    }

    if (manifest.at("has_ground_truth").get<bool>()) {
      const fs::path file = dir / "ground_truth.u8";
      const auto raw = read_file_or_throw(file);
      const size_t expected = n * d.class_names.size();
      if (raw.size() != expected) {
        throw FormatError(file.string() + ": " + std::to_string(raw.size()) +
                          " bytes but expected " + std::to_string(expected));
      }
      Mat<uint8_t> gt(n, d.class_names.size());
      std::memcpy(gt.data(), raw.data(), raw.size());
      for (size_t r = 0; r < gt.rows(); ++r) {
        for (size_t c = 0; c < gt.cols(); ++c) {
          if (gt(r, c) > 1) {
            throw FormatError(file.string() + ": entry not in {0,1} at sample " +
                              std::to_string(r));
          }
        }
      }
      d.ground_truth = std::move(gt);
    }
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest.json: " + std::string(e.what()));
  }

  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Concat modality
// ---------------------------------------------------------------------------

MultimodalDataset make_concat_modality(const MultimodalDataset& d,
                                       const std::vector<std::string>& members) {
  if (members.empty()) throw ArgumentError("concat member list is empty");
  if (d.modality_index("concat") >= 0) {
    throw ArgumentError("dataset already has a modality named concat");
  }
  std::vector<size_t> idx;
  size_t total_dim = 0;
  for (const auto& name : members) {
    const int i = d.modality_index(name);
    if (i < 0) throw ArgumentError("unknown concat member: " + name);
    idx.push_back(static_cast<size_t>(i));
    total_dim += d.meta[static_cast<size_t>(i)].dim;
  }

  MultimodalDataset out = d;
  const size_t n = d.num_samples();
  Mat<double> cat(n, total_dim);
  for (size_t r = 0; r < n; ++r) {
    size_t off = 0;
    for (size_t i : idx) {
      const auto src = d.features[i].row(r);
      std::copy(src.begin(), src.end(), cat.row(r).begin() + off);
      off += src.size();
    }
  }
  out.meta.push_back({"concat", total_dim, ModalityRole::kTrainAndTest});
  out.features.push_back(std::move(cat));
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic generator
// ---------------------------------------------------------------------------

void SynthConfig::validate() const {
  if (n_classes < 1) throw ArgumentError("n_classes must be >= 1");
  if (n_per_class < 1) throw ArgumentError("n_per_class must be >= 1");
  if (n_background < 0) throw ArgumentError("n_background must be >= 0");
  if (modality_dims.empty()) throw ArgumentError("modality_dims must be nonempty");
  for (int dim : modality_dims) {
    if (dim < 1) throw ArgumentError("all modality dims must be >= 1");
  }
  if (noise_level < 0.0 || noise_level >= 1.0) {
    throw ArgumentError("noise_level must be in [0, 1)");
  }
  if (hard_fraction < 0.0 || hard_fraction > 1.0) {
    throw ArgumentError("hard_fraction must be in [0, 1]");
  }
  if (!(class_separation > 0.0)) throw ArgumentError("class_separation must be > 0");
}

// Cluster means depend only on (seed, class count, dims, separation), never on
// the draw stream, so companion splits share the geometry.
static std::vector<std::vector<std::vector<double>>> class_means(const SynthConfig& cfg) {
  rng::Rng geo(rng::derive(cfg.seed, "synth-geometry"));
  std::vector<std::vector<std::vector<double>>> means(static_cast<size_t>(cfg.n_classes));
  for (auto& per_mod : means) {
    per_mod.resize(cfg.modality_dims.size());
    for (size_t m = 0; m < cfg.modality_dims.size(); ++m) {
      std::vector<double> v(static_cast<size_t>(cfg.modality_dims[m]));
      double norm_sq = 0.0;
      for (double& x : v) {
        x = geo.normal();
        norm_sq += x * x;
      }
      double norm = std::sqrt(norm_sq);
      if (norm < 1e-12) {
        v.assign(v.size(), 0.0);
        v[0] = 1.0;
        norm = 1.0;
      }
      for (double& x : v) x *= cfg.class_separation / norm;
      per_mod[m] = std::move(v);
    }
  }
  return means;
}

static double snap_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

SynthOutput synth_generate_split(const SynthConfig& cfg, std::string_view split) {
  cfg.validate();
  const size_t n_classes = static_cast<size_t>(cfg.n_classes);
  const size_t per_class = static_cast<size_t>(cfg.n_per_class);
  const size_t n_modalities = cfg.modality_dims.size();
  const size_t n_fp = static_cast<size_t>(std::floor(cfg.noise_level * cfg.n_per_class));
  const size_t n_tp = per_class - n_fp;
  const size_t n = n_classes * per_class + static_cast<size_t>(cfg.n_background);

  const auto means = class_means(cfg);
  rng::Rng structure(rng::derive(cfg.seed, split, 0x5157));
  rng::Rng draws(rng::derive(cfg.seed, split, 0xD4A7));

  SynthOutput out;
  auto& d = out.data;
  for (size_t m = 0; m < n_modalities; ++m) {
    d.meta.push_back({"m" + std::to_string(m), static_cast<size_t>(cfg.modality_dims[m]),
                      ModalityRole::kTrainAndTest});
    d.features.emplace_back(n, static_cast<size_t>(cfg.modality_dims[m]));
  }
  for (size_t c = 0; c < n_classes; ++c) {
    d.class_names.push_back("class_" + std::to_string(c));
  }
  d.ground_truth = Mat<uint8_t>(n, n_classes);
  out.true_class.assign(n, -1);
  out.hard_modality.assign(n, -1);
  out.labels.labels = Mat<uint8_t>(n, n_classes);
  out.labels.confidence = Mat<double>(n, n_classes, 1.0);
  out.labels.match_counts = Mat<int32_t>(n, n_classes);

  // Per class: pick which true positives get one modality corrupted.
  std::vector<std::vector<int>> hard_mod_of(n_classes);  // per TP slot: modality or -1
  const size_t n_hard = static_cast<size_t>(std::floor(cfg.hard_fraction * double(n_tp)));
  for (size_t c = 0; c < n_classes; ++c) {
    std::vector<size_t> order(n_tp);
    for (size_t i = 0; i < n_tp; ++i) order[i] = i;
    for (size_t i = n_tp; i > 1; --i) {
      std::swap(order[i - 1], order[structure.uniform_int(i)]);
    }
    hard_mod_of[c].assign(n_tp, -1);
    for (size_t k = 0; k < n_hard; ++k) {
      hard_mod_of[c][order[k]] = static_cast<int>(structure.uniform_int(n_modalities));
    }
  }

  size_t row = 0;
  auto emit = [&](int true_cls, int pseudo_cls, int hard_mod) {
    for (size_t m = 0; m < n_modalities; ++m) {
      const bool background =
          true_cls < 0 || static_cast<int>(m) == hard_mod;
      const std::vector<double>* mean =
          background ? nullptr : &means[static_cast<size_t>(true_cls)][m];
      auto dst = d.features[m].row(row);
      for (size_t j = 0; j < dst.size(); ++j) {
        const double base = mean ? (*mean)[j] : 0.0;
        dst[j] = snap_f32(base + draws.normal());
      }
    }
    if (true_cls >= 0) (*d.ground_truth)(row, static_cast<size_t>(true_cls)) = 1;
    if (pseudo_cls >= 0) {
      out.labels.labels(row, static_cast<size_t>(pseudo_cls)) = 1;
      out.labels.match_counts(row, static_cast<size_t>(pseudo_cls)) = 1;
      out.labels.confidence(row, static_cast<size_t>(pseudo_cls)) = confidence_from_count(1);
    }
    out.true_class[row] = true_cls;
    out.hard_modality[row] = hard_mod;
    ++row;
  };

  for (size_t c = 0; c < n_classes; ++c) {
    for (size_t i = 0; i < n_tp; ++i) {
      emit(static_cast<int>(c), static_cast<int>(c), hard_mod_of[c][i]);
    }
    for (size_t i = 0; i < n_fp; ++i) {
      emit(-1, static_cast<int>(c), -1);  // false positive: background everywhere
    }
  }
  for (int i = 0; i < cfg.n_background; ++i) emit(-1, -1, -1);

  d.validate();
  out.labels.validate();
  return out;
}

SynthOutput synth_generate(const SynthConfig& cfg) {
  return synth_generate_split(cfg, "train");
}

SynthConfig make_test_split_config(const SynthConfig& train_cfg) {
  SynthConfig t = train_cfg;
  t.noise_level = 0.0;
  t.hard_fraction = 0.0;
  t.n_per_class = std::max(20, train_cfg.n_per_class / 5);
  t.n_background = t.n_per_class * t.n_classes;
  return t;
}

// ---------------------------------------------------------------------------
// Minibatch iterator
// ---------------------------------------------------------------------------

std::vector<std::vector<size_t>> minibatch_iterator(size_t n, size_t batch_size,
                                                    uint64_t seed, int epoch) {
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  rng::Rng r(rng::derive(seed, "minibatch", static_cast<uint64_t>(epoch)));
  for (size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[r.uniform_int(i)]);
  }
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < n; start += batch_size) {
    const size_t end = std::min(n, start + batch_size);
    batches.emplace_back(perm.begin() + static_cast<ptrdiff_t>(start),
                         perm.begin() + static_cast<ptrdiff_t>(end));
  }
  return batches;
}

}  // namespace webly
