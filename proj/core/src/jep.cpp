#include "vax/jep.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "vax/error.hpp"

namespace vax {
namespace {

void require_disjoint(std::span<const RowIndex> a, std::span<const RowIndex> b) {
  std::vector<RowIndex> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<RowIndex> both;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
  if (!both.empty()) throw InputError("partitions overlap on " + std::to_string(both.size()) + " rows");
}

std::size_t count_in_class(const Dataset& d, std::span<const RowIndex> rows, int class_id) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](RowIndex r) { return d.label(r) == class_id; }));
}

std::uint64_t hash_rows(std::span<const RowIndex> rows) {
  std::uint64_t h = 14695981039346656037ull ^ rows.size();
  for (RowIndex r : rows) {
    h ^= r;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

double support(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> partition) {
  if (partition.empty()) throw InputError("support: empty partition");
  return static_cast<double>(count_matching(dataset, selectors, partition)) / static_cast<double>(partition.size());
}

double growth_rate(double target_support, double complement_support) {
  if (complement_support == 0.0) return target_support == 0.0 ? 0.0 : kInfiniteGrowth;
  return target_support / complement_support;
}

double growth_rate(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> target,
                   std::span<const RowIndex> complement) {
  require_disjoint(target, complement);
  return growth_rate(support(dataset, selectors, target), support(dataset, selectors, complement));
}

double confidence(std::size_t target_count, std::size_t complement_count) {
  const std::size_t total = target_count + complement_count;
  if (total == 0) throw InputError("confidence: pattern supports no rows");
  return static_cast<double>(target_count) / static_cast<double>(total);
}

double confidence(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> target,
                  std::span<const RowIndex> complement) {
  require_disjoint(target, complement);
  return confidence(count_matching(dataset, selectors, target), count_matching(dataset, selectors, complement));
}

void compute_metrics(Pattern& p, const Dataset& d) {
  const std::size_t class_size = d.class_size(p.class_id);
  const std::size_t others = d.n_rows() - class_size;
  const std::size_t in_class = count_in_class(d, p.rows, p.class_id);
  const std::size_t outside = p.rows.size() - in_class;
  p.support = static_cast<double>(in_class) / static_cast<double>(class_size);
  p.growth_rate = growth_rate(p.support, static_cast<double>(outside) / static_cast<double>(others));
  p.confidence = confidence(in_class, outside);
  p.fet_p = fisher_exact(contingency(in_class, p.rows.size(), class_size, d.n_rows()));
}

void refresh_coverage(JepSet& jeps) {
  jeps.cumulative_coverage.clear();
  std::size_t covered = 0;
  for (const auto& p : jeps.patterns) {
    covered += p.rows.size();
    jeps.cumulative_coverage.push_back(jeps.n_rows ? static_cast<double>(covered) / static_cast<double>(jeps.n_rows)
                                                   : 0.0);
  }
  jeps.coverage = jeps.cumulative_coverage.empty() ? 0.0 : jeps.cumulative_coverage.back();
}

RawPattern as_raw(const Pattern& p) { return RawPattern{p.id, p.selectors, p.class_id, p.rows}; }

Pattern aggregate_selectors(const Pattern& pivot, const Pattern& other, const Dataset& dataset) {
  if (pivot.rows != other.rows) throw ConsistencyError("aggregate: patterns support different rows");
  if (pivot.class_id != other.class_id) throw ConsistencyError("aggregate: patterns predict different classes");
  Pattern out = pivot;
  out.selectors = intersect(pivot.selectors, other.selectors, dataset);
  out.aggregated_from = pivot.aggregated_from + other.aggregated_from;
  return out;
}

Selection select_and_aggregate(std::span<const RawPattern> raw, const Dataset& dataset) {
  const std::size_t n = raw.size();
  Selection result;
  result.stats.raw = n;
  result.jeps.n_rows = dataset.n_rows();

  struct Candidate {
    double support;
    std::size_t count;
    std::size_t in_class;
  };
  std::vector<Candidate> cand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = raw[i];
    if (p.class_id < 0 || static_cast<std::size_t>(p.class_id) >= dataset.n_classes())
      throw InputError("select: pattern " + std::to_string(p.id) + " has an unknown class");
    const std::size_t in_class = count_in_class(dataset, p.rows, p.class_id);
    cand[i] = {static_cast<double>(in_class) / static_cast<double>(dataset.class_size(p.class_id)), p.rows.size(),
               in_class};
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cand[a].support != cand[b].support) return cand[a].support > cand[b].support;
    if (cand[a].count != cand[b].count) return cand[a].count > cand[b].count;
    if (raw[a].class_id != raw[b].class_id) return raw[a].class_id < raw[b].class_id;
    if (raw[a].id != raw[b].id) return raw[a].id < raw[b].id;
    return a < b;
  });

  // Patterns sharing a row set, listed in visiting order.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  std::vector<std::size_t> group_head(n);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    auto& bucket = buckets[hash_rows(raw[idx].rows)];
    auto same = std::find_if(bucket.begin(), bucket.end(),
                             [&](std::size_t head) { return raw[groups[head].front()].rows == raw[idx].rows; });
    if (same == bucket.end()) {
      bucket.push_back(groups.size());
      group_head[idx] = groups.size();
      groups.push_back({idx});
    } else {
      group_head[idx] = *same;
      groups[*same].push_back(idx);
    }
  }

  std::vector<char> removed(n, 0);
  std::vector<char> claimed(dataset.n_rows(), 0);
  for (std::size_t idx : order) {
    if (removed[idx]) continue;
    removed[idx] = 1;
    const RawPattern& r = raw[idx];
    const bool pure = cand[idx].count > 0 && cand[idx].in_class == cand[idx].count;
    const bool fresh = std::none_of(r.rows.begin(), r.rows.end(), [&](RowIndex row) { return claimed[row]; });
    if (!pure || !fresh) {
      ++result.stats.discarded;
      continue;
    }
    for (RowIndex row : r.rows) claimed[row] = 1;
    ++result.stats.selected;
    result.stats.pivot_supports.push_back(cand[idx].support);

    Pattern pivot;
    pivot.id = r.id;
    pivot.selectors = r.selectors;
    pivot.class_id = r.class_id;
    pivot.rows = r.rows;
    for (std::size_t other : groups[group_head[idx]]) {
      if (removed[other]) continue;
      removed[other] = 1;
      // Same row set by construction of the group; see aggregate_selectors.
      pivot.selectors = intersect(pivot.selectors, raw[other].selectors, dataset);
      ++pivot.aggregated_from;
      ++result.stats.aggregated;
    }
    compute_metrics(pivot, dataset);
    result.jeps.patterns.push_back(std::move(pivot));
  }
  refresh_coverage(result.jeps);
  return result;
}

}  // namespace vax
