#include "netref/leader_value.hpp"

#include "netref/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netref {

namespace {

constexpr double kNegativeValueSlack = 1e-12;

bool is_uniform(const Vector& v) {
  return v.size() == 0 || (v.array() == v(0)).all();
}

}  // namespace

LeaderValueReport leading_values(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                 const MarketParams& params) {
  const Index k = seq.part_count();
  LeaderValueReport report;
  report.outcomes.reserve(static_cast<std::size_t>(k + 1));
  report.outcomes.push_back(solve_simultaneous(g, params));
  for (Index j = 1; j <= k; ++j) {
    report.outcomes.push_back(solve_sequential(g, merge_tail(seq, j), params));
  }

  report.sequential_profit = solve_sequential(g, seq, params).profit;
  report.merged_profit = report.outcomes.front().profit;

  double total = 0.0;
  for (Index j = 1; j <= k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const double v = report.outcomes[idx].profit - report.outcomes[idx - 1].profit;
    report.values.push_back({j - 1, seq.part(j - 1), v});
    total += v;
    if (v < -kNegativeValueSlack) {
      std::ostringstream os;
      os << "part " << j << " has negative leading value " << v;
      report.warnings.push_back(os.str());
    }
  }
  report.telescoping_residual =
      std::abs(total - (report.sequential_profit - report.merged_profit));
  return report;
}

NewcomerAnalysis newcomer_deltas(const ReferralNetwork& referral, const CustomerSequence& seq,
                                 const MarketParams& params, Index referrer,
                                 std::optional<NewcomerPreferences> newcomer) {
  require_structurally_valid(params);
  const Index n = referral.size();
  if (params.size() != n) {
    throw ValidationError("market parameters cover " + std::to_string(params.size()) +
                          " customers but the referral network has " + std::to_string(n));
  }
  NewcomerExtension ext = extend_with_newcomer(referral, seq, referrer, params.eta);

  const NewcomerPreferences prefs =
      newcomer.value_or(NewcomerPreferences{params.alpha(referrer), params.beta(referrer)});
  MarketParams grown = params;
  grown.alpha.conservativeResize(n + 1);
  grown.beta.conservativeResize(n + 1);
  grown.alpha(n) = prefs.alpha;
  grown.beta(n) = prefs.beta;

  NewcomerAnalysis a{std::move(ext), grown, {}, {}, {}, 0.0, {}, {}};
  a.before = leading_values(build_comprehensive(referral, params.eta), seq, params);
  a.after = leading_values(a.extension.network, a.extension.sequence, grown);
  a.profit_increase = a.after.sequential_profit - a.before.sequential_profit;

  for (Index j = 0; j < seq.part_count(); ++j) {
    const double before = a.before.value(j);
    const double after = a.after.value(j);
    a.deltas.push_back({j, before, after, after - before});
  }

  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  for (Index cur = referrer;;) {
    if (visited[static_cast<std::size_t>(cur)]) {
      a.line_defect = "referral path loops back to customer " + std::to_string(cur + 1);
      break;
    }
    visited[static_cast<std::size_t>(cur)] = true;
    a.referral_line.push_back(cur);
    const IndexSet refs = referral.referrers_of(cur);
    if (refs.size() > 1) {
      a.line_defect = "customer " + std::to_string(cur + 1) + " has " +
                      std::to_string(refs.size()) + " referrers";
      break;
    }
    if (refs.empty()) break;
    cur = refs.front();
  }
  return a;
}

RewardAllocation allocate_rewards(const NewcomerAnalysis& analysis,
                                  std::optional<double> budget_override) {
  if (!analysis.line_defect.empty()) {
    throw ValidationError("branching referral path: " + analysis.line_defect);
  }
  if (budget_override && !(*budget_override >= 0.0)) {
    throw ValidationError("reward budget must be nonnegative");
  }
  RewardAllocation out;
  out.budget = budget_override.value_or(analysis.profit_increase);

  double positive_total = 0.0;
  for (const auto& d : analysis.deltas) positive_total += std::max(d.delta, 0.0);
  out.distributed = std::clamp(out.budget, 0.0, positive_total);

  for (const auto& d : analysis.deltas) {
    const double amount =
        positive_total > 0.0 ? out.distributed * std::max(d.delta, 0.0) / positive_total : 0.0;
    out.shares.push_back({d.part, analysis.before.values[static_cast<std::size_t>(d.part)].customers,
                          amount});
  }
  return out;
}

std::vector<EtaSweepPoint> eta_sweep(const ReferralNetwork& referral, const CustomerSequence& seq,
                                     const MarketParams& params, const std::vector<double>& eta_grid) {
  if (eta_grid.empty()) throw ValidationError("eta grid is empty");
  for (double eta : eta_grid) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
      std::ostringstream os;
      os << "eta grid contains invalid value " << eta;
      throw ValidationError(os.str());
    }
  }
  require_structurally_valid(params);
  if (params.size() != referral.size() || seq.customer_count() != referral.size()) {
    throw ValidationError("referral network, sequence and parameters disagree on customer count");
  }

  std::vector<EtaSweepPoint> out;
  out.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    MarketParams at = params;
    at.eta = eta;
    EtaSweepPoint point{eta, std::nullopt, {}};
    try {
      point.report = leading_values(build_comprehensive(referral, eta), seq, at);
    } catch (const AssumptionError& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

DecayRatioReport decay_ratio_check(Index n, const MarketParams& params) {
  if (n < 2) throw ValidationError("decay ratio check needs at least two customers");
  require_structurally_valid(params);
  if (params.size() != n) {
    throw ValidationError("market parameters cover " + std::to_string(params.size()) +
                          " customers, expected " + std::to_string(n));
  }
  if (!is_uniform(params.alpha) || !is_uniform(params.beta)) {
    throw ValidationError("decay ratio check requires identical alpha and beta for every customer");
  }

  std::vector<std::pair<Index, Index>> edges;
  for (Index j = 0; j + 1 < n; ++j) edges.emplace_back(j, j + 1);
  const ReferralNetwork line = ReferralNetwork::from_edges(n, edges);
  const NewcomerAnalysis a =
      newcomer_deltas(line, CustomerSequence::singletons(n), params, n - 1);

  DecayRatioReport r;
  for (const auto& d : a.deltas) r.deltas.push_back(d.delta);

  double sum = 0.0;
  int defined = 0;
  for (Index j = 1; j < n; ++j) {
    const double num = r.deltas[static_cast<std::size_t>(j)];
    const double den = r.deltas[static_cast<std::size_t>(j - 1)];
    if (std::abs(num) < kNegligibleDelta || std::abs(den) < kNegligibleDelta) {
      r.ratios.push_back(std::nullopt);
      r.notes.push_back("ratio for customer " + std::to_string(j + 1) +
                        " undefined: delta below 1e-14");
      continue;
    }
    r.ratios.push_back(num / den);
    sum += num / den;
    ++defined;
  }
  if (defined > 0) {
    r.mean_ratio = sum / defined;
    for (const auto& q : r.ratios) {
      if (q) r.dispersion = std::max(r.dispersion, std::abs(*q / r.mean_ratio - 1.0));
    }
  }
  r.increasing_toward_referrer = true;
  for (std::size_t j = 1; j < r.deltas.size(); ++j) {
    if (!(r.deltas[j] > r.deltas[j - 1])) r.increasing_toward_referrer = false;
  }
  return r;
}

}  // namespace netref
