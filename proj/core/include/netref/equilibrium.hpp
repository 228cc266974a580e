#pragma once

// Closed-form consumption, price and profit for the monopolist's game.
//
// Customer i's utility is
//   u_i = alpha_i x_i - beta_i x_i^2 / 2 + (sum_j g_ij x_j) x_i - p_i x_i
// and the monopolist earns sum_i (p_i - c) x_i. With all customers moving at
// once the optimum is
//   x = (diag(beta) - (g + g^T)/2)^-1 (alpha - c)/2,
//   p = (alpha + c)/2 + (g - g^T)/2 x.
// Purchase order enters only through extra self-weight on the diagonal of
// earlier parts (sequential_transform), after which the same formulas apply.

#include "netref/linalg.hpp"
#include "netref/network_model.hpp"

#include <string>
#include <string_view>

namespace netref {

enum class GameMode { simultaneous, sequential_basic, sequential_extended };

std::string_view to_string(GameMode mode);

struct EquilibriumOutcome {
  Vector x;       // consumption per customer
  Vector p;       // price per customer; may be below cost or negative
  double profit;  // monopolist profit
  GameMode mode;
};

struct AssumptionReport {
  bool assumption1_ok = false;
  std::string assumption1_failure;  // which matrix failed, empty when ok
  bool assumption2_ok = false;
  IndexSet assumption2_violations;  // customers with alpha_i <= cost
  bool inverse_nonnegative = false;
  bool positive_definite = false;

  bool passes() const {
    return assumption1_ok && assumption2_ok && inverse_nonnegative && positive_definite;
  }
  std::string describe() const;
};

// Checks diag(beta) - g and diag(beta) - (g + g^T)/2 for invertibility, the
// latter for positive definiteness and an elementwise-nonnegative inverse, and
// alpha_i > cost. Never throws on a failed check; `g` may carry a diagonal.
AssumptionReport check_assumptions(const Matrix& g, const MarketParams& params);

// Influence matrix whose simultaneous game reproduces a sequential one.
struct TransformedNetwork {
  Matrix matrix;              // g with increments added on the diagonal
  Vector increments;          // matrix(i, i) - g(i, i), zero on the last part
  CustomerSequence sequence;  // sequence that produced it
};

// Backward recursion over the parts: each part receives
// diag(g_{part,tail} (diag(beta_tail) - gT_tail)^-1 g_{tail,part}) where the
// tail is everything after it, already transformed. Throws AssumptionError at
// the first level whose tail system is singular or whose leaders would face a
// non-concave problem (beta_i <= 2 * increment_i).
TransformedNetwork sequential_transform(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                        const MarketParams& params);

EquilibriumOutcome solve_simultaneous(const ComprehensiveNetwork& g, const MarketParams& params);
// Same formulas on an already-transformed matrix; mode is sequential_extended.
EquilibriumOutcome solve_simultaneous(const TransformedNetwork& gT, const MarketParams& params);

EquilibriumOutcome solve_sequential(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                    const MarketParams& params);

// Two-part game solved through the explicit response matrix of the block
// decomposition, without the diagonal transform. Used to cross-check it.
EquilibriumOutcome solve_basic_direct(const ComprehensiveNetwork& g, const IndexSet& leaders,
                                      const IndexSet& followers, const MarketParams& params);

// p_se - p_si = asymmetry * leading_effect * preference.
struct PriceGapDecomposition {
  Matrix asymmetry_factor;       // (g - g^T)/2
  Matrix leading_effect_factor;  // S_T^-1 - S^-1 with S = diag(beta) - sym(g)
  Vector preference_vector;      // (alpha - c)/2
  Vector gap;                    // p_se - p_si from the two solved games

  Vector product() const { return asymmetry_factor * leading_effect_factor * preference_vector; }
};

PriceGapDecomposition price_gap_decomposition(const ComprehensiveNetwork& g,
                                              const CustomerSequence& seq,
                                              const MarketParams& params);

// beta_i minus the transform increment: the satiation rate a customer would
// need in the simultaneous game to get the same outcome.
Vector effective_preferences(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                             const MarketParams& params);

double utility(Index i, const Vector& x, double price_i, const Matrix& g, const MarketParams& params);

double profit_from_primitives(const Vector& x, const Vector& p, double cost);

}  // namespace netref
