#include "webly/pseudolabel.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "webly/dataset.hpp"

namespace webly {

using nlohmann::json;

void PseudoLabelMatrix::validate() const {
  if (labels.rows() != confidence.rows() || labels.rows() != match_counts.rows() ||
      labels.cols() != confidence.cols() || labels.cols() != match_counts.cols()) {
    throw FormatError("pseudo-label matrices have mismatched shapes");
  }
  for (size_t n = 0; n < labels.rows(); ++n) {
    for (size_t c = 0; c < labels.cols(); ++c) {
      const uint8_t y = labels(n, c);
      const double v0 = confidence(n, c);
      const int32_t count = match_counts(n, c);
      if (y > 1) throw FormatError("pseudo label not in {0,1}");
      if (!(v0 > 0.0 && v0 <= 1.0)) {
        throw FormatError("confidence out of (0,1] at sample " + std::to_string(n));
      }
      if (y == 0 && v0 != 1.0) {
        throw FormatError("negative-labeled entry must have confidence 1 (sample " +
                          std::to_string(n) + ")");
      }
      if ((y == 1) != (count >= 1)) {
        throw FormatError("label/match-count mismatch at sample " + std::to_string(n));
      }
    }
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

int match_count(std::string_view concept_name, std::string_view text) {
  const auto needle = tokenize(concept_name);
  if (needle.empty()) throw ArgumentError("concept name has no tokens");
  const auto hay = tokenize(text);
  if (hay.size() < needle.size()) return 0;

  int count = 0;
  size_t i = 0;
  while (i + needle.size() <= hay.size()) {
    bool hit = true;
    for (size_t k = 0; k < needle.size(); ++k) {
      if (hay[i + k] != needle[k]) {
        hit = false;
        break;
      }
    }
    if (hit) {
      ++count;
      i += needle.size();  // non-overlapping
    } else {
      ++i;
    }
  }
  return count;
}

double confidence_from_count(int count) {
  if (count < 1) throw ArgumentError("confidence_from_count requires count >= 1");
  return static_cast<double>(count) / (static_cast<double>(count) + 1.0);
}

PseudoLabelMatrix label_dataset(const MultimodalDataset& d,
                                const std::vector<std::string>& concepts) {
  if (!d.metadata) {
    throw ArgumentError("dataset has no metadata; cannot infer pseudo labels");
  }
  const size_t n = d.num_samples();
  {
    // Empty text is a valid record that matches nothing; absent records are not.
    std::string missing;
    for (size_t i = 0; i < n; ++i) {
      if (!(*d.metadata)[i]) missing += (missing.empty() ? "" : ", ") + std::to_string(i);
    }
    if (!missing.empty()) throw ArgumentError("metadata missing for samples: " + missing);
  }

  PseudoLabelMatrix out;
  out.labels = Mat<uint8_t>(n, concepts.size());
  out.confidence = Mat<double>(n, concepts.size(), 1.0);
  out.match_counts = Mat<int32_t>(n, concepts.size());
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < concepts.size(); ++c) {
      const int count = match_count(concepts[c], *(*d.metadata)[i]);
      out.match_counts(i, c) = count;
      if (count >= 1) {
        out.labels(i, c) = 1;
        out.confidence(i, c) = confidence_from_count(count);
      }
    }
  }
  out.validate();
  return out;
}

void save_labels(const PseudoLabelMatrix& labels,
                 const std::vector<std::string>& class_names,
                 const std::filesystem::path& file) {
  labels.validate();
  if (class_names.size() != labels.num_classes()) {
    throw ArgumentError("class name count does not match label matrix");
  }
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + file.string());
  for (size_t n = 0; n < labels.num_samples(); ++n) {
    json rec;
    json pos = json::array();
    for (size_t c = 0; c < labels.num_classes(); ++c) {
      if (labels.labels(n, c)) {
        pos.push_back({{"class", class_names[c]},
                       {"count", labels.match_counts(n, c)},
                       {"v0", labels.confidence(n, c)}});
      }
    }
    rec["pos"] = pos;
    rec["neg_v0"] = 1.0;
    out << rec.dump() << "\n";
  }
  if (!out) throw DataError("write failed: " + file.string());
}

PseudoLabelMatrix load_labels(const std::vector<std::string>& class_names,
                              const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("missing file: " + file.string());

  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw FormatError(file.string() + ": bad record at line " +
                        std::to_string(records.size() + 1) + ": " + e.what());
    }
  }

  PseudoLabelMatrix out;
  out.labels = Mat<uint8_t>(records.size(), class_names.size());
  out.confidence = Mat<double>(records.size(), class_names.size(), 1.0);
  out.match_counts = Mat<int32_t>(records.size(), class_names.size());
  for (size_t n = 0; n < records.size(); ++n) {
    try {
      for (const auto& p : records[n].at("pos")) {
        const std::string cls = p.at("class").get<std::string>();
        const auto it = std::find(class_names.begin(), class_names.end(), cls);
        if (it == class_names.end()) {
          throw FormatError(file.string() + ": unknown class " + cls + " at sample " +
                            std::to_string(n));
        }
        const size_t c = static_cast<size_t>(it - class_names.begin());
        out.labels(n, c) = 1;
        out.match_counts(n, c) = p.at("count").get<int32_t>();
        out.confidence(n, c) = p.at("v0").get<double>();
      }
    } catch (const json::exception& e) {
      throw FormatError(file.string() + ": bad record for sample " + std::to_string(n) +
                        ": " + e.what());
    }
  }
  out.validate();
  return out;
}

}  // namespace webly
