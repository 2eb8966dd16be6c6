#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vax {

using RowIndex = std::uint32_t;

struct Range {
  double min = 0.0;
  double max = 0.0;
};

// Column-major table of N instances over M real-valued variables with one
// class label per row. Immutable once built; construction validates:
//   N >= 2, M >= 1, J >= 2, every label < J, no NaN/inf values, and no two
//   rows with equal variable vectors but different labels.
class Dataset {
 public:
  struct Columns {
    std::vector<std::string> variable_names;
    std::vector<std::vector<double>> values;  // values[var][row]
    std::vector<int> labels;
    std::vector<std::string> classes;
    std::vector<std::string> instance_ids;      // empty: "0", "1", ...
    std::vector<std::vector<std::string>> categories;  // per variable, empty when numeric
    std::string label_name = "class";
    std::string id_name = "instance_id";
  };

  explicit Dataset(Columns columns);

  std::size_t n_rows() const { return labels_.size(); }
  std::size_t n_vars() const { return values_.size(); }
  std::size_t n_classes() const { return classes_.size(); }

  double value(std::size_t row, std::size_t var) const { return values_[var][row]; }
  std::span<const double> column(std::size_t var) const { return values_[var]; }
  int label(std::size_t row) const { return labels_[row]; }
  std::span<const int> labels() const { return labels_; }

  const std::vector<std::string>& variable_names() const { return variable_names_; }
  const std::vector<Range>& variable_ranges() const { return ranges_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& instance_ids() const { return instance_ids_; }
  const std::vector<std::string>& categories(std::size_t var) const { return categories_[var]; }
  bool is_categorical(std::size_t var) const { return !categories_[var].empty(); }
  const std::string& label_name() const { return label_name_; }
  const std::string& id_name() const { return id_name_; }

  std::size_t class_size(int class_id) const { return class_sizes_.at(static_cast<std::size_t>(class_id)); }
  std::optional<int> class_index(std::string_view name) const;
  std::optional<RowIndex> row_of(std::string_view instance_id) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<std::string> variable_names_;
  std::vector<std::vector<double>> values_;
  std::vector<int> labels_;
  std::vector<std::string> classes_;
  std::vector<std::string> instance_ids_;
  std::vector<std::vector<std::string>> categories_;
  std::string label_name_;
  std::string id_name_;
  std::vector<Range> ranges_;
  std::vector<std::size_t> class_sizes_;
};

// One-vs-all split of the rows: members of one class against the rest.
struct ClassPartition {
  int class_id = 0;
  std::vector<RowIndex> members;
  std::vector<RowIndex> complement;
};

ClassPartition partition(const Dataset& dataset, int class_id);

struct IngestConfig {
  std::string label_column;
  std::optional<std::string> id_column;
  std::optional<int> discretize_bins;
  bool drop_ambiguous = true;
  // Explicit class order (by name). Empty: first appearance in the file, or
  // bin order when discretizing.
  std::vector<std::string> class_order;
  std::vector<std::string> missing_tokens = {"", "NA", "N/A", "NaN", "nan", "null", "?"};
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t dropped_missing = 0;
  std::size_t dropped_ambiguous = 0;
  std::vector<double> bin_edges;  // set when the target was discretized
};

struct Ingested {
  Dataset dataset;
  IngestReport report;
};

Ingested ingest_csv(const std::filesystem::path& path, const IngestConfig& config);
Ingested ingest_csv_text(std::string_view text, const IngestConfig& config);

struct Discretized {
  std::vector<int> labels;
  std::vector<double> edges;  // bins + 1 values, edges.front() = min, edges.back() = max
};

// Equal-width binning over [min, max]. Row i lands in bin j when
// edges[j] <= v < edges[j+1]; the maximum lands in the last bin.
Discretized discretize_target(std::span<const double> values, int bins);

// Header: id column, variables, label column. Categorical variables are
// written with their category strings so re-ingestion reproduces the codes.
std::string to_canonical_csv(const Dataset& dataset);

// Removes every row whose variable vector also occurs with another label.
// Returns kept row indices (ascending).
std::vector<RowIndex> unambiguous_rows(const std::vector<std::vector<double>>& values,
                                       std::span<const int> labels);

// FNV-1a over the canonical CSV; identifies the dataset in run manifests.
std::uint64_t fingerprint(const Dataset& dataset);

}  // namespace vax
