#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prodrank {

// A scored list of ids, ordered best first. display_rank breaks ties by id
// so the listing is stable; avg_rank carries the tie-averaged rank used for
// rank statistics.
struct Ranking {
  std::vector<std::string> ids;  // best first, ties by id
  std::vector<double> values;    // aligned with ids
  std::vector<int> display_rank;
  std::vector<double> avg_rank;
};

Ranking make_ranking(const std::vector<std::pair<std::string, double>>& items);

// Tie-averaged ranks, rank 1 for the largest value.
std::vector<double> average_ranks(const std::vector<double>& values);

// Rank correlation: Pearson correlation of the tie-averaged ranks. Throws
// Comparison on mismatched lengths, fewer than two points, or a constant
// side.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Smallest quartile whose cumulative capacity ceil(q*n/4) covers the rank.
int quartile_of(int rank, int n);

std::vector<int> assign_quartiles(const Ranking& ranking);

struct QuartileShiftStats {
  int n = 0;
  int shifted = 0;            // ids whose quartile changed
  double pct_shifted = 0.0;
  double avg_abs_shift = 0.0; // mean |shift| over all ids, movers or not
  int max_abs_shift = 0;
  int total_abs_shift = 0;
  int shifted_two_or_more = 0;
};

// Quartile movement between two assignments aligned by index.
QuartileShiftStats quartile_shift_stats(const std::vector<int>& a,
                                        const std::vector<int>& b);

// Share of first-quartile ids under `a` that leave the first quartile
// under `b`.
double top_quartile_churn(const std::vector<int>& a, const std::vector<int>& b);

struct ScopeRho {
  std::string scope;
  int n = 0;
  double rho = 0.0;
};

struct SkippedScope {
  std::string scope;
  std::string reason;
};

struct CorrelationSummary {
  std::vector<ScopeRho> scopes;  // sorted by scope code
  std::vector<SkippedScope> skipped;
  std::optional<double> mean_rho;
  std::optional<double> min_rho;
  std::string min_scope;
  // Count of scopes whose rho strictly exceeds each threshold.
  std::vector<std::pair<double, int>> above;
  // Mean rho per group (e.g. per discipline) when a grouping is supplied.
  std::map<std::string, double> group_means;
};

inline const std::vector<double> kDefaultRhoThresholds = {0.80, 0.90, 0.95};

// Runs spearman_rho per scope over paired values; scopes with fewer than
// two points or a constant side are skipped with a reason instead of
// failing the whole battery. Thresholds must be sorted ascending.
CorrelationSummary correlation_summary(
    const std::map<std::string, std::vector<std::pair<double, double>>>&
        by_scope,
    const std::map<std::string, std::string>& scope_group = {},
    const std::vector<double>& thresholds = kDefaultRhoThresholds);

}  // namespace prodrank
