#include "vax/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "vax/csv.hpp"
#include "vax/error.hpp"

namespace vax {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.starts_with('+')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string bin_name(double lo, double hi, bool last) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%.4g, %.4g%c", lo, hi, last ? ']' : ')');
  return buf;
}

}  // namespace

Dataset::Dataset(Columns c)
    : variable_names_(std::move(c.variable_names)),
      values_(std::move(c.values)),
      labels_(std::move(c.labels)),
      classes_(std::move(c.classes)),
      instance_ids_(std::move(c.instance_ids)),
      categories_(std::move(c.categories)),
      label_name_(std::move(c.label_name)),
      id_name_(std::move(c.id_name)) {
  const std::size_t n = labels_.size();
  const std::size_t m = values_.size();
  if (n < 2) throw InputError("dataset: need at least 2 rows, got " + std::to_string(n));
  if (m < 1) throw InputError("dataset: need at least 1 variable");
  if (classes_.size() < 2) throw InputError("dataset: need at least 2 classes, got " + std::to_string(classes_.size()));
  if (variable_names_.size() != m) throw InputError("dataset: variable name count does not match column count");
  if (categories_.empty()) categories_.resize(m);
  if (categories_.size() != m) throw InputError("dataset: category table size does not match column count");
  if (instance_ids_.empty()) {
    instance_ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) instance_ids_.push_back(std::to_string(i));
  }
  if (instance_ids_.size() != n) throw InputError("dataset: instance id count does not match row count");

  class_sizes_.assign(classes_.size(), 0);
  for (int y : labels_) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes_.size())
      throw InputError("dataset: label " + std::to_string(y) + " references no declared class");
    ++class_sizes_[static_cast<std::size_t>(y)];
  }
  for (std::size_t j = 0; j < classes_.size(); ++j)
    if (class_sizes_[j] == 0) throw InputError("dataset: class '" + classes_[j] + "' has no rows");

  ranges_.resize(m);
  for (std::size_t v = 0; v < m; ++v) {
    const auto& col = values_[v];
    if (col.size() != n) throw InputError("dataset: column '" + variable_names_[v] + "' has wrong length");
    for (double x : col)
      if (!std::isfinite(x)) throw InputError("dataset: non-finite value in '" + variable_names_[v] + "'");
    auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    ranges_[v] = {*lo, *hi};
  }

  std::unordered_set<std::string_view> seen;
  for (const auto& id : instance_ids_)
    if (!seen.insert(id).second) throw InputError("dataset: duplicate instance id '" + id + "'");

  if (unambiguous_rows(values_, labels_).size() != n)
    throw InputError("dataset: equal variable vectors carry different labels");
}

std::optional<int> Dataset::class_index(std::string_view name) const {
  for (std::size_t j = 0; j < classes_.size(); ++j)
    if (classes_[j] == name) return static_cast<int>(j);
  return std::nullopt;
}

std::optional<RowIndex> Dataset::row_of(std::string_view instance_id) const {
  for (std::size_t i = 0; i < instance_ids_.size(); ++i)
    if (instance_ids_[i] == instance_id) return static_cast<RowIndex>(i);
  return std::nullopt;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.variable_names_ == b.variable_names_ && a.values_ == b.values_ && a.labels_ == b.labels_ &&
         a.classes_ == b.classes_ && a.instance_ids_ == b.instance_ids_ && a.categories_ == b.categories_ &&
         a.label_name_ == b.label_name_ && a.id_name_ == b.id_name_;
}

ClassPartition partition(const Dataset& dataset, int class_id) {
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= dataset.n_classes())
    throw InputError("partition: unknown class id " + std::to_string(class_id));
  ClassPartition p;
  p.class_id = class_id;
  p.members.reserve(dataset.class_size(class_id));
  for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
    (dataset.label(i) == class_id ? p.members : p.complement).push_back(static_cast<RowIndex>(i));
  }
  return p;
}

std::vector<RowIndex> unambiguous_rows(const std::vector<std::vector<double>>& values,
                                       std::span<const int> labels) {
  const std::size_t n = labels.size();
  // Row vector -> first label seen, or -1 once a conflict is found.
  std::map<std::vector<double>, int> label_of;
  std::vector<double> key(values.size());
  auto fill_key = [&](std::size_t row) {
    for (std::size_t v = 0; v < values.size(); ++v) key[v] = values[v][row];
  };
  for (std::size_t i = 0; i < n; ++i) {
    fill_key(i);
    auto [it, inserted] = label_of.emplace(key, labels[i]);
    if (!inserted && it->second != labels[i]) it->second = -1;
  }
  std::vector<RowIndex> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    fill_key(i);
    if (label_of.at(key) != -1) kept.push_back(static_cast<RowIndex>(i));
  }
  return kept;
}

Discretized discretize_target(std::span<const double> values, int bins) {
  if (bins < 2) throw InputError("discretize: need at least 2 bins");
  if (values.empty()) throw InputError("discretize: no values");
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw InputError("discretize: target is constant");

  Discretized out;
  out.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) out.edges[static_cast<std::size_t>(i)] = lo + i * width;
  out.edges.back() = hi;

  out.labels.reserve(values.size());
  // Interior edges only: the count of interior edges <= v is the bin index.
  const auto first = out.edges.begin() + 1, last = out.edges.end() - 1;
  for (double v : values) {
    out.labels.push_back(static_cast<int>(std::upper_bound(first, last, v) - first));
  }
  return out;
}

Ingested ingest_csv(const std::filesystem::path& path, const IngestConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("ingest: cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_csv_text(buf.str(), config);
}

Ingested ingest_csv_text(std::string_view text, const IngestConfig& config) {
  auto table = csv::parse(text);
  if (table.empty()) throw InputError("ingest: no header row");
  const csv::Row header = [&] {
    csv::Row h;
    for (const auto& f : table.front()) h.emplace_back(trim(f));
    return h;
  }();
  {
    std::set<std::string> names(header.begin(), header.end());
    if (names.size() != header.size()) throw InputError("ingest: duplicate column names in header");
  }

  auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto label_col = column_of(config.label_column);
  if (!label_col) throw InputError("ingest: label column '" + config.label_column + "' not found");
  std::optional<std::size_t> id_col;
  if (config.id_column) {
    id_col = column_of(*config.id_column);
    if (!id_col) throw InputError("ingest: id column '" + *config.id_column + "' not found");
    if (*id_col == *label_col) throw InputError("ingest: id column and label column are the same");
  }
  std::vector<std::size_t> var_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != *label_col && (!id_col || c != *id_col)) var_cols.push_back(c);
  if (var_cols.empty()) throw InputError("ingest: no variable columns");

  const std::set<std::string, std::less<>> missing(config.missing_tokens.begin(), config.missing_tokens.end());
  auto is_missing = [&](std::string_view cell) { return missing.contains(trim(cell)); };

  IngestReport report;
  report.rows_read = table.size() - 1;

  // Rows surviving the missing-value filter, still as strings.
  std::vector<std::size_t> kept;
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& row = table[r];
    if (row.size() != header.size())
      throw InputError("ingest: data row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                       " fields, header has " + std::to_string(header.size()));
    bool has_missing = is_missing(row[*label_col]);
    for (std::size_t c : var_cols) has_missing = has_missing || is_missing(row[c]);
    if (has_missing) {
      ++report.dropped_missing;
      continue;
    }
    kept.push_back(r);
  }
  if (kept.empty()) throw InputError("ingest: zero rows after removing missing values");

  auto cell = [&](std::size_t r, std::size_t c) { return trim(table[r][c]); };

  // Labels, either as raw class names or discretized bins.
  std::vector<std::string> label_text(kept.size());
  std::vector<std::string> bin_names;
  if (config.discretize_bins) {
    std::vector<double> target;
    target.reserve(kept.size());
    for (std::size_t r : kept) {
      auto v = parse_number(cell(r, *label_col));
      if (!v) throw InputError("ingest: label column is not numeric, cannot discretize");
      target.push_back(*v);
    }
    auto disc = discretize_target(target, *config.discretize_bins);
    for (int b = 0; b < *config.discretize_bins; ++b)
      bin_names.push_back(bin_name(disc.edges[b], disc.edges[b + 1], b + 1 == *config.discretize_bins));
    for (std::size_t i = 0; i < kept.size(); ++i) label_text[i] = bin_names[static_cast<std::size_t>(disc.labels[i])];
    report.bin_edges = std::move(disc.edges);
  } else {
    for (std::size_t i = 0; i < kept.size(); ++i) label_text[i] = std::string(cell(kept[i], *label_col));
  }

  // Column typing: numeric when every kept cell parses as a finite number.
  const std::size_t m = var_cols.size();
  std::vector<bool> numeric(m, true);
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t r : kept)
      if (!parse_number(cell(r, var_cols[v]))) {
        numeric[v] = false;
        break;
      }

  auto encode = [&](std::span<const std::size_t> rows, std::vector<std::vector<double>>& values,
                    std::vector<std::vector<std::string>>& categories) {
    values.assign(m, {});
    categories.assign(m, {});
    for (std::size_t v = 0; v < m; ++v) {
      auto& col = values[v];
      col.reserve(rows.size());
      if (numeric[v]) {
        for (std::size_t r : rows) col.push_back(*parse_number(cell(r, var_cols[v])));
        continue;
      }
      std::set<std::string, std::less<>> distinct;
      for (std::size_t r : rows) distinct.emplace(cell(r, var_cols[v]));
      categories[v].assign(distinct.begin(), distinct.end());
      for (std::size_t r : rows) {
        auto it = std::lower_bound(categories[v].begin(), categories[v].end(), cell(r, var_cols[v]));
        col.push_back(static_cast<double>(it - categories[v].begin()));
      }
    }
  };

  // Ambiguity check on the encoded vectors of all kept rows.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<std::string>> categories;
  encode(kept, values, categories);
  std::vector<int> provisional(kept.size());
  {
    std::unordered_map<std::string, int> ids;
    for (std::size_t i = 0; i < kept.size(); ++i)
      provisional[i] = ids.emplace(label_text[i], static_cast<int>(ids.size())).first->second;
  }
  const auto clean = unambiguous_rows(values, provisional);
  const std::size_t ambiguous = kept.size() - clean.size();
  if (ambiguous > 0 && !config.drop_ambiguous)
    throw InputError("ingest: " + std::to_string(ambiguous) +
                     " rows share variable values with rows of another class");
  report.dropped_ambiguous = ambiguous;

  std::vector<std::size_t> final_rows;
  std::vector<std::string> final_labels;
  for (RowIndex i : clean) {
    final_rows.push_back(kept[i]);
    final_labels.push_back(std::move(label_text[i]));
  }
  if (final_rows.empty()) throw InputError("ingest: zero rows after removing ambiguous instances");

  Dataset::Columns cols;
  for (std::size_t c : var_cols) cols.variable_names.push_back(header[c]);
  encode(final_rows, cols.values, cols.categories);

  // Class order.
  std::vector<std::string> order;
  if (!config.class_order.empty()) {
    order = config.class_order;
  } else if (config.discretize_bins) {
    order = bin_names;
  } else {
    for (const auto& name : final_labels)
      if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  }
  std::unordered_map<std::string, int> class_id;
  for (const auto& name : order) {
    if (std::find(final_labels.begin(), final_labels.end(), name) == final_labels.end()) continue;
    class_id.emplace(name, static_cast<int>(cols.classes.size()));
    cols.classes.push_back(name);
  }
  for (const auto& name : final_labels) {
    auto it = class_id.find(name);
    if (it == class_id.end()) throw InputError("ingest: class '" + name + "' missing from the declared class order");
    cols.labels.push_back(it->second);
  }
  if (cols.classes.size() < 2)
    throw InputError("ingest: fewer than 2 classes after cleaning (" + std::to_string(cols.classes.size()) + ")");

  for (std::size_t r : final_rows)
    cols.instance_ids.push_back(id_col ? std::string(cell(r, *id_col)) : std::to_string(r - 1));
  cols.label_name = header[*label_col];
  cols.id_name = id_col ? header[*id_col] : "instance_id";

  return Ingested{Dataset(std::move(cols)), std::move(report)};
}

std::string to_canonical_csv(const Dataset& d) {
  std::string out;
  csv::Row row;
  row.push_back(d.id_name());
  for (const auto& name : d.variable_names()) row.push_back(name);
  row.push_back(d.label_name());
  out += csv::format_row(row);
  out += '\n';
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    row.clear();
    row.push_back(d.instance_ids()[i]);
    for (std::size_t v = 0; v < d.n_vars(); ++v) {
      const double x = d.value(i, v);
      row.push_back(d.is_categorical(v) ? d.categories(v)[static_cast<std::size_t>(x)] : csv::format_number(x));
    }
    row.push_back(d.classes()[static_cast<std::size_t>(d.label(i))]);
    out += csv::format_row(row);
    out += '\n';
  }
  return out;
}

std::uint64_t fingerprint(const Dataset& dataset) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : to_canonical_csv(dataset)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace vax
