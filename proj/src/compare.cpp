#include "prodrank/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "prodrank/errors.hpp"

namespace prodrank {

Ranking make_ranking(const std::vector<std::pair<std::string, double>>& items) {
  for (const auto& [id, value] : items) {
    if (!std::isfinite(value)) {
      fail(ErrorKind::Comparison, "ranking value for '" + id + "' is not finite");
    }
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].second != items[b].second) {
      return items[a].second > items[b].second;
    }
    return items[a].first < items[b].first;
  });

  Ranking r;
  r.ids.reserve(items.size());
  r.values.reserve(items.size());
  r.display_rank.reserve(items.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.ids.push_back(items[order[k]].first);
    r.values.push_back(items[order[k]].second);
    r.display_rank.push_back(static_cast<int>(k) + 1);
  }
  r.avg_rank = average_ranks(r.values);
  return r;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank =
        (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::Comparison, "rank correlation needs paired values");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    fail(ErrorKind::Comparison,
         "rank correlation needs at least two paired values");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
      fail(ErrorKind::Comparison, "rank correlation input is not finite");
    }
  }

  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);

  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = rx[k] - mean;
    const double dy = ry[k] - mean;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fail(ErrorKind::Comparison,
         "rank correlation is undefined for a constant side");
  }
  return sxy / std::sqrt(sxx * syy);
}

int quartile_of(int rank, int n) {
  if (n < 1 || rank < 1 || rank > n) {
    fail(ErrorKind::Comparison, "rank out of range");
  }
  for (int q = 1; q <= 4; ++q) {
    const int capacity = (q * n + 3) / 4;  // ceil(q*n/4)
    if (rank <= capacity) return q;
  }
  return 4;  // unreachable: q=4 capacity is n
}

std::vector<int> assign_quartiles(const Ranking& ranking) {
  const int n = static_cast<int>(ranking.ids.size());
  std::vector<int> out;
  out.reserve(ranking.ids.size());
  for (int rank : ranking.display_rank) {
    out.push_back(quartile_of(rank, n));
  }
  return out;
}

QuartileShiftStats quartile_shift_stats(const std::vector<int>& a,
                                        const std::vector<int>& b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Comparison, "quartile assignments are not aligned");
  }
  QuartileShiftStats s;
  s.n = static_cast<int>(a.size());
  if (s.n == 0) return s;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int d = std::abs(a[k] - b[k]);
    if (d > 0) ++s.shifted;
    if (d >= 2) ++s.shifted_two_or_more;
    s.total_abs_shift += d;
    s.max_abs_shift = std::max(s.max_abs_shift, d);
  }
  s.pct_shifted = 100.0 * s.shifted / s.n;
  s.avg_abs_shift = static_cast<double>(s.total_abs_shift) / s.n;
  return s;
}

double top_quartile_churn(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Comparison, "quartile assignments are not aligned");
  }
  int top = 0, left = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 1) continue;
    ++top;
    if (b[k] != 1) ++left;
  }
  if (top == 0) {
    fail(ErrorKind::Comparison, "no first-quartile ids to compare");
  }
  return 100.0 * left / top;
}

CorrelationSummary correlation_summary(
    const std::map<std::string, std::vector<std::pair<double, double>>>&
        by_scope,
    const std::map<std::string, std::string>& scope_group,
    const std::vector<double>& thresholds) {
  CorrelationSummary summary;
  summary.above.reserve(thresholds.size());
  for (double t : thresholds) summary.above.emplace_back(t, 0);
  std::map<std::string, std::pair<double, int>> group_acc;

  for (const auto& [scope, pairs] : by_scope) {
    if (pairs.size() < 2) {
      summary.skipped.push_back({scope, "fewer than two universities"});
      continue;
    }
    std::vector<double> x, y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
      x.push_back(a);
      y.push_back(b);
    }
    bool const_x = std::all_of(x.begin(), x.end(),
                               [&](double v) { return v == x.front(); });
    bool const_y = std::all_of(y.begin(), y.end(),
                               [&](double v) { return v == y.front(); });
    if (const_x || const_y) {
      summary.skipped.push_back(
          {scope, std::string("no variance on the ") +
                      (const_x ? "first" : "second") + " side"});
      continue;
    }
    ScopeRho entry;
    entry.scope = scope;
    entry.n = static_cast<int>(pairs.size());
    entry.rho = spearman_rho(x, y);
    summary.scopes.push_back(entry);

    auto git = scope_group.find(scope);
    if (git != scope_group.end()) {
      auto& acc = group_acc[git->second];
      acc.first += entry.rho;
      acc.second += 1;
    }
  }

  if (!summary.scopes.empty()) {
    double total = 0.0;
    const ScopeRho* worst = &summary.scopes.front();
    for (const auto& entry : summary.scopes) {
      total += entry.rho;
      if (entry.rho < worst->rho) worst = &entry;
      for (auto& [threshold, count] : summary.above) {
        if (entry.rho > threshold) ++count;
      }
    }
    summary.mean_rho = total / static_cast<double>(summary.scopes.size());
    summary.min_rho = worst->rho;
    summary.min_scope = worst->scope;
  }
  for (const auto& [group, acc] : group_acc) {
    summary.group_means[group] = acc.first / acc.second;
  }
  return summary;
}

}  // namespace prodrank
