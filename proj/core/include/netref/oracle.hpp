#pragma once

// Numeric solver for the same pricing game, used to validate the closed forms.
//
// Nothing here relies on the block-matrix results. Followers reach their
// best-response fixed point by iteration, each leader maximizes its utility
// with the followers' reaction recomputed for every candidate, and the
// monopolist searches over prices without derivatives.

#include "netref/equilibrium.hpp"
#include "netref/network_model.hpp"

#include <string>
#include <vector>

namespace netref {

struct OracleConfig {
  double fixed_point_tol = 1e-12;      // sup-norm change that ends a follower sweep
  int fixed_point_max_iter = 10000;
  double price_search_tol = 1e-7;      // profit improvement that ends the price search
  int price_search_max_evals = 200000;  // profit evaluations
  double reaction_fd_step = 1e-6;      // step for differentiating follower reactions
  double leader_tol = 1e-8;            // sup-norm change that ends a leader cycle
  int leader_max_cycles = 1000;
};

void validate(const OracleConfig& cfg);

// Largest instance the price search accepts.
inline constexpr Index kOracleMaxCustomers = 6;

// Iterated best responses of `followers` to prices `p` with the leaders'
// consumption fixed at `leader_x` (ordered like `leaders`). Returns follower
// consumption ordered like `followers`. Throws ConvergenceError when the
// iteration diverges or exhausts its budget.
Vector follower_fixed_point(const Vector& p, const Vector& leader_x, const ComprehensiveNetwork& g,
                            const MarketParams& params, const IndexSet& leaders,
                            const IndexSet& followers, const OracleConfig& cfg = {});

// Leaders' joint best response to prices `p` in a two-part sequence, ordered
// like the first part. Throws ConvergenceError if a leader's reduced problem
// is not concave or the leader cycle does not settle.
Vector leader_numeric_response(const Vector& p, const ComprehensiveNetwork& g,
                               const CustomerSequence& seq, const MarketParams& params,
                               const OracleConfig& cfg = {});

// Full consumption profile induced by prices `p` (one- or two-part sequence).
Vector numeric_consumption(const Vector& p, const ComprehensiveNetwork& g,
                           const CustomerSequence& seq, const MarketParams& params,
                           const OracleConfig& cfg = {});

struct OracleReport {
  Vector x_oracle;
  Vector p_oracle;
  double profit_oracle = 0.0;
  EquilibriumOutcome closed_form;
  double max_abs_gap_x = 0.0;
  double max_abs_gap_p = 0.0;
  double profit_gap = 0.0;  // |profit_oracle - closed_form.profit|
  // Profit of the closed-form prices pushed through the numeric response
  // chain; set by oracle_compare, NaN otherwise.
  double profit_at_closed_form_prices;
  bool converged = false;
  int evaluations = 0;
  std::vector<std::string> warnings;
};

// Thresholds used by oracle-check and the acceptance suite.
inline constexpr double kOracleProfitRelTol = 1e-4;  // relative to max(1, profit)
inline constexpr double kOracleConsumptionTol = 1e-3;
inline constexpr double kOraclePriceTol = 1e-3;

bool within_thresholds(const OracleReport& report);

// Coordinate-wise 1-D searches over prices, each sweep followed by one search
// along the sweep's net displacement, until a sweep improves profit by less
// than price_search_tol. Requires n <= 6 and at most two parts.
OracleReport numeric_price_search(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                  const MarketParams& params, const OracleConfig& cfg = {});

OracleReport oracle_compare(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                            const MarketParams& params, const OracleConfig& cfg = {});

}  // namespace netref
