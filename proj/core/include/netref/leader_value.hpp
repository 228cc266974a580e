#pragma once

// Value of buying early: how much the monopolist's profit rises when a part of
// the sequence is split out ahead of everyone after it, and how a newcomer at
// the end of a referral line changes those values.

#include "netref/equilibrium.hpp"
#include "netref/network_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace netref {

struct PartValue {
  Index part;          // 0-based part index
  IndexSet customers;  // members of the part
  double value;
};

struct LeaderValueReport {
  // value(t_j) = profit(T(j)) - profit(T(j-1)), where T(j) keeps the first j
  // parts and merges the rest; T(0) is the fully simultaneous game.
  std::vector<PartValue> values;
  double sequential_profit = 0.0;  // solved directly on the full sequence
  double merged_profit = 0.0;      // solved directly as a simultaneous game
  // |sum of values - (sequential_profit - merged_profit)|
  double telescoping_residual = 0.0;
  // Outcomes for T(0) .. T(k), in that order.
  std::vector<EquilibriumOutcome> outcomes;
  // Negative values (beyond round-off) are reported here, not thrown.
  std::vector<std::string> warnings;

  double value(Index part) const { return values.at(static_cast<std::size_t>(part)).value; }
};

LeaderValueReport leading_values(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                 const MarketParams& params);

struct ValueDelta {
  Index part;
  double value_before;
  double value_after;
  double delta;
};

// Satiation parameters of the appended customer. Defaults to the referrer's.
struct NewcomerPreferences {
  double alpha;
  double beta;
};

struct NewcomerAnalysis {
  NewcomerExtension extension;
  MarketParams extended_params;
  LeaderValueReport before;
  LeaderValueReport after;
  std::vector<ValueDelta> deltas;  // one per original part
  double profit_increase = 0.0;   // sequential profit after minus before
  // Referrer, its referrer, ... back to a customer nobody recommended.
  IndexSet referral_line;
  // Empty when every customer on the line has at most one referrer.
  std::string line_defect;
};

NewcomerAnalysis newcomer_deltas(const ReferralNetwork& referral, const CustomerSequence& seq,
                                 const MarketParams& params, Index referrer,
                                 std::optional<NewcomerPreferences> newcomer = std::nullopt);

struct RewardShare {
  Index part;
  IndexSet customers;
  double amount;
};

struct RewardAllocation {
  double budget = 0.0;       // profit increase available, or the override
  double distributed = 0.0;  // min(budget, sum of positive deltas)
  std::vector<RewardShare> shares;
  std::string policy = "proportional-to-delta";
};

// Splits min(budget, sum of deltas) across the original parts in proportion to
// their value deltas. Throws ValidationError when the newcomer's referral line
// branches.
RewardAllocation allocate_rewards(const NewcomerAnalysis& analysis,
                                  std::optional<double> budget_override = std::nullopt);

struct EtaSweepPoint {
  double eta;
  std::optional<LeaderValueReport> report;
  std::string error;  // set when the instance fails at this eta
};

// Rebuilds g for each eta and recomputes the leading values. Per-point
// failures are recorded, not thrown; an empty or negative grid throws.
std::vector<EtaSweepPoint> eta_sweep(const ReferralNetwork& referral, const CustomerSequence& seq,
                                     const MarketParams& params, const std::vector<double>& eta_grid);

// Deltas below this are treated as zero when forming ratios.
inline constexpr double kNegligibleDelta = 1e-14;

struct DecayRatioReport {
  std::vector<double> deltas;                // per original customer 1..n
  std::vector<std::optional<double>> ratios;  // delta_j / delta_{j-1}, j = 2..n
  double mean_ratio = 0.0;                  // over defined ratios
  double dispersion = 0.0;                  // max |ratio / mean - 1|
  bool increasing_toward_referrer = false;  // delta_1 < delta_2 < ... < delta_n
  std::vector<std::string> notes;
};

// n-customer referral line (customer j+1 recommended by j) with singleton
// parts, one newcomer recommended by customer n. `params` must be uniform.
DecayRatioReport decay_ratio_check(Index n, const MarketParams& params);

}  // namespace netref
