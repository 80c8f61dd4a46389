#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "netcent/centrality.hpp"
#include "netcent/error.hpp"
#include "netcent/format.hpp"

namespace netcent::stats {

/**
 * Kendall tau-b with tie correction, O(n log n) (Knight's method).
 *
 * tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2)) where n0 = n(n-1)/2, n1 and n2
 * count pairs tied in x and in y. Points are sorted by (x, y); D is then the
 * number of strict inversions of the y sequence, counted by merge sort, and
 * C - D = n0 - n1 - n2 + n3 - 2D with n3 the pairs tied in both.
 *
 * Degenerate rankings: both vectors constant gives 1, exactly one constant 0.
 */
inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("kendall_tau_b: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw ContractError("kendall_tau_b: requires at least two observations");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]); });

  auto tied_pairs = [](std::int64_t run) { return run * (run - 1) / 2; };
  const std::int64_t n0 = tied_pairs(static_cast<std::int64_t>(n));
  std::int64_t n1 = 0, n3 = 0;
  {
    std::int64_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const bool same_x = x[idx[i]] == x[idx[i - 1]];
      const bool same_xy = same_x && y[idx[i]] == y[idx[i - 1]];
      run_x = same_x ? run_x + 1 : (n1 += tied_pairs(run_x), 1);
      run_xy = same_xy ? run_xy + 1 : (n3 += tied_pairs(run_xy), 1);
    }
    n1 += tied_pairs(run_x);
    n3 += tied_pairs(run_xy);
  }

  std::vector<double> ys(n), buffer(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  std::int64_t discordant = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          discordant += static_cast<std::int64_t>(mid - i);
          buffer[k++] = ys[j++];
        } else {
          buffer[k++] = ys[i++];
        }
      }
      while (i < mid) buffer[k++] = ys[i++];
      while (j < hi) buffer[k++] = ys[j++];
    }
    ys.swap(buffer);
  }

  std::int64_t n2 = 0;
  {
    std::int64_t run = 1;
    for (std::size_t i = 1; i < n; ++i) run = ys[i] == ys[i - 1] ? run + 1 : (n2 += tied_pairs(run), 1);
    n2 += tied_pairs(run);
  }

  const bool x_constant = n1 == n0;
  const bool y_constant = n2 == n0;
  if (x_constant && y_constant) return 1.0;
  if (x_constant || y_constant) return 0.0;

  const auto numerator = static_cast<double>(n0 - n1 - n2 + n3 - 2 * discordant);
  return numerator / std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
}

/// Number of distinct values after rounding to six decimals.
inline std::size_t distinct_count(std::span<const double> values) {
  std::set<std::string> seen;
  for (double v : values) seen.insert(fixed_decimal(v, 6));
  return seen.size();
}

/// Percentage of distinct six-decimal values.
inline double granularity(std::span<const double> values) {
  if (values.empty()) throw ContractError("granularity: empty vector");
  return 100.0 * static_cast<double>(distinct_count(values)) / static_cast<double>(values.size());
}

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Two-sided normal quantile, e.g. 2.5758 for 0.99.
inline double z_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ContractError("confidence must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
}

/// Mean and normal-approximation half-width z * s / sqrt(n), summed in input order.
inline MeanCi mean_ci(std::span<const double> samples, double confidence) {
  if (samples.size() < 2) throw ContractError("mean_ci: requires at least two samples");
  const double z = z_value(confidence);
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, z * sd / std::sqrt(n)};
}

/// Mean with an optional half-width (absent for a single sample).
struct Summary {
  double mean = 0.0;
  std::optional<double> half_width;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> samples, double confidence) {
  if (samples.empty()) throw ContractError("summarize: no samples");
  if (samples.size() == 1) return {samples[0], std::nullopt, 1};
  const auto ci = mean_ci(samples, confidence);
  return {ci.mean, ci.half_width, samples.size()};
}

/**
 * Per-metric share of networks on which the metric reaches the largest
 * distinct-value count among all metrics. Ties credit every maximal metric,
 * so the shares can add up to more than 100%.
 *
 * counts[network][metric]; returns percentages per metric.
 */
inline std::vector<double> best_granularity_tally(std::span<const std::vector<std::size_t>> counts) {
  if (counts.empty()) return {};
  const std::size_t metrics = counts.front().size();
  std::vector<std::size_t> wins(metrics, 0);
  for (const auto& row : counts) {
    if (row.size() != metrics) throw ContractError("best_granularity_tally: ragged metric counts");
    const auto top = *std::max_element(row.begin(), row.end());
    for (std::size_t k = 0; k < metrics; ++k)
      if (row[k] == top) ++wins[k];
  }
  std::vector<double> out(metrics);
  for (std::size_t k = 0; k < metrics; ++k)
    out[k] = 100.0 * static_cast<double>(wins[k]) / static_cast<double>(counts.size());
  return out;
}

// ---------------------------------------------------------------------------
// Aggregates
// ---------------------------------------------------------------------------

/// Index of an unordered metric pair, i != j, in a flat upper-triangle layout.
inline std::size_t pair_slot(std::size_t i, std::size_t j, std::size_t m) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}

/// Mean tau-b per metric pair. Metric order follows `metrics`.
struct RankCorrelationMatrix {
  std::vector<Measure> metrics;
  std::vector<Summary> pairs;  // indexed by pair_slot

  std::size_t size() const { return metrics.size(); }

  std::optional<std::size_t> index_of(Measure m) const {
    auto it = std::find(metrics.begin(), metrics.end(), m);
    if (it == metrics.end()) return std::nullopt;
    return static_cast<std::size_t>(it - metrics.begin());
  }

  Summary at(Measure a, Measure b) const {
    const auto i = index_of(a), j = index_of(b);
    if (!i || !j) throw ContractError("correlation matrix: metric not present");
    if (*i == *j) return {1.0, 0.0, pairs.empty() ? 0 : pairs.front().count};
    return pairs[pair_slot(*i, *j, metrics.size())];
  }

  double mean(Measure a, Measure b) const { return at(a, b).mean; }
};

/// taus[network][pair_slot] are per-network tau-b values over `metrics`.
inline RankCorrelationMatrix correlation_matrix(std::vector<Measure> metrics,
                                                std::span<const std::vector<double>> taus, double confidence) {
  const std::size_t m = metrics.size();
  const std::size_t npairs = m * (m - 1) / 2;
  if (taus.empty()) throw ContractError("correlation_matrix: no networks");
  RankCorrelationMatrix out{std::move(metrics), {}};
  std::vector<double> column(taus.size());
  for (std::size_t slot = 0; slot < npairs; ++slot) {
    for (std::size_t net = 0; net < taus.size(); ++net) {
      if (taus[net].size() != npairs) throw ContractError("correlation_matrix: ragged pair vector");
      column[net] = taus[net][slot];
    }
    out.pairs.push_back(summarize(column, confidence));
  }
  return out;
}

struct GranularityRow {
  Measure metric;
  Summary percent;
  double best_share = 0.0;  // % of networks where this metric is (co-)best
};

struct GranularityReport {
  std::size_t networks = 0;
  std::vector<GranularityRow> rows;
};

/// percents[network][metric], distinct[network][metric] over `metrics`.
inline GranularityReport granularity_report(std::span<const Measure> metrics,
                                            std::span<const std::vector<double>> percents,
                                            std::span<const std::vector<std::size_t>> distinct, double confidence) {
  if (percents.empty() || percents.size() != distinct.size()) {
    throw ContractError("granularity_report: need matching non-empty inputs");
  }
  const auto best = best_granularity_tally(distinct);
  GranularityReport out{percents.size(), {}};
  std::vector<double> column(percents.size());
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    for (std::size_t net = 0; net < percents.size(); ++net) column[net] = percents[net].at(k);
    out.rows.push_back({metrics[k], summarize(column, confidence), best[k]});
  }
  return out;
}

}  // namespace netcent::stats
