#include "netref/equilibrium.hpp"

#include "netref/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace netref {

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kProfitConsistencyTol = 1e-9;
constexpr double kNonnegativeSlack = 1e-14;

void require_compatible(const Matrix& g, const MarketParams& params) {
  require_structurally_valid(params);
  if (g.rows() != g.cols() || g.rows() != params.size()) {
    std::ostringstream os;
    os << "influence matrix is " << g.rows() << "x" << g.cols() << " but there are "
       << params.size() << " customers";
    throw ValidationError(os.str());
  }
}

void require_profit_consistency(const EquilibriumOutcome& out, double cost) {
  const double direct = profit_from_primitives(out.x, out.p, cost);
  const double scale = std::max(std::abs(direct), std::abs(out.profit));
  if (std::abs(direct - out.profit) > kProfitConsistencyTol * scale + 1e-15) {
    std::ostringstream os;
    os << "profit " << out.profit << " disagrees with sum (p - c) x = " << direct;
    throw std::logic_error(os.str());
  }
}

EquilibriumOutcome solve_on_matrix(const Matrix& g, const MarketParams& params, GameMode mode) {
  require_compatible(g, params);
  const AssumptionReport report = check_assumptions(g, params);
  if (!report.passes()) throw AssumptionError(report.describe());

  const Matrix beta = params.beta.asDiagonal();
  const Vector margin = params.alpha.array() - params.cost;
  const Vector half_margin = margin / 2.0;

  const Matrix system = beta - symmetric_part(g);
  EquilibriumOutcome out;
  out.mode = mode;
  out.x = checked_solve(system, half_margin, "symmetrized system");
  out.p = (params.alpha.array() + params.cost).matrix() / 2.0 + skew_part(g) * out.x;
  out.profit = half_margin.dot(out.x);

  // Same optimum through A = (diag(beta) - g)^-1: x = (A^-1 + A^-T)^-1 (alpha - c).
  const Matrix a_inverse = beta - g;
  const Vector x_alt =
      checked_solve(a_inverse + a_inverse.transpose(), margin, "A^-1 + A^-T");
  const Vector p_alt = params.alpha - a_inverse * x_alt;
  if (scaled_difference(out.x, x_alt) > kIdentityTol ||
      scaled_difference(out.p, p_alt) > kIdentityTol) {
    throw std::logic_error("closed-form and A-form solutions disagree");
  }
  require_profit_consistency(out, params.cost);
  return out;
}

}  // namespace

std::string_view to_string(GameMode mode) {
  switch (mode) {
    case GameMode::simultaneous:
      return "simultaneous";
    case GameMode::sequential_basic:
      return "sequential-basic";
    case GameMode::sequential_extended:
      return "sequential-extended";
  }
  return "unknown";
}

std::string AssumptionReport::describe() const {
  if (passes()) return "all assumptions hold";
  std::ostringstream os;
  const char* sep = "";
  if (!assumption1_ok) {
    os << sep << "system not safely invertible: " << assumption1_failure;
    sep = "; ";
  }
  if (!positive_definite) {
    os << sep << "diag(beta) - (g + g^T)/2 is not positive definite";
    sep = "; ";
  }
  if (!inverse_nonnegative) {
    os << sep << "(diag(beta) - (g + g^T)/2)^-1 has negative entries";
    sep = "; ";
  }
  if (!assumption2_ok) {
    os << sep << "alpha does not exceed cost for customers";
    for (Index i : assumption2_violations) os << " " << i + 1;
  }
  return os.str();
}

AssumptionReport check_assumptions(const Matrix& g, const MarketParams& params) {
  AssumptionReport r;
  if (g.rows() != g.cols() || g.rows() != params.beta.size() ||
      params.alpha.size() != params.beta.size()) {
    r.assumption1_failure = "dimension mismatch between influence matrix and parameters";
    return r;
  }
  const Matrix beta = params.beta.asDiagonal();
  const Matrix system = beta - symmetric_part(g);

  r.assumption1_ok = true;
  if (is_singular(beta - g)) {
    r.assumption1_ok = false;
    r.assumption1_failure = "diag(beta) - g is singular";
  } else if (is_singular(system)) {
    r.assumption1_ok = false;
    r.assumption1_failure = "diag(beta) - (g + g^T)/2 is singular";
  }

  Eigen::LLT<Matrix> llt(system);
  r.positive_definite = llt.info() == Eigen::Success;

  if (r.assumption1_ok) {
    const Matrix inv = checked_inverse(system, "symmetrized system");
    r.inverse_nonnegative = inv.minCoeff() >= -kNonnegativeSlack;
  }

  r.assumption2_ok = true;
  for (Index i = 0; i < params.alpha.size(); ++i) {
    if (!(params.alpha(i) > params.cost)) {
      r.assumption2_ok = false;
      r.assumption2_violations.push_back(i);
    }
  }
  return r;
}

TransformedNetwork sequential_transform(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                        const MarketParams& params) {
  const Matrix& base = g.matrix();
  require_compatible(base, params);
  if (seq.customer_count() != g.size()) {
    throw ValidationError("sequence covers " + std::to_string(seq.customer_count()) +
                          " customers but the network has " + std::to_string(g.size()));
  }

  TransformedNetwork t{base, Vector::Zero(g.size()), seq};
  const Index k = seq.part_count();
  for (Index j = k - 2; j >= 0; --j) {
    const IndexSet& part = seq.part(j);
    const IndexSet tail = seq.tail_from(j + 1);
    const Matrix tail_system =
        Matrix(subvector(params.beta, tail).asDiagonal()) - submatrix(t.matrix, tail, tail);
    const std::string level = "tail system after part " + std::to_string(j + 1);
    const Matrix tail_inverse = checked_inverse(tail_system, level);
    const Matrix gain = submatrix(base, part, tail) * tail_inverse * submatrix(base, tail, part);
    for (std::size_t a = 0; a < part.size(); ++a) {
      const Index i = part[a];
      const double d = gain(static_cast<Index>(a), static_cast<Index>(a));
      if (!(params.beta(i) > 2.0 * d)) {
        std::ostringstream os;
        os << "leader problem of customer " << i + 1 << " in part " << j + 1
           << " is not concave (beta " << params.beta(i) << " <= 2 * increment " << d << ")";
        throw AssumptionError(os.str());
      }
      t.increments(i) = d;
      t.matrix(i, i) = base(i, i) + d;
    }
  }
  return t;
}

EquilibriumOutcome solve_simultaneous(const ComprehensiveNetwork& g, const MarketParams& params) {
  return solve_on_matrix(g.matrix(), params, GameMode::simultaneous);
}

EquilibriumOutcome solve_simultaneous(const TransformedNetwork& gT, const MarketParams& params) {
  return solve_on_matrix(gT.matrix, params, GameMode::sequential_extended);
}

EquilibriumOutcome solve_sequential(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                    const MarketParams& params) {
  return solve_simultaneous(sequential_transform(g, seq, params), params);
}

EquilibriumOutcome solve_basic_direct(const ComprehensiveNetwork& g, const IndexSet& leaders,
                                      const IndexSet& followers, const MarketParams& params) {
  require_compatible(g.matrix(), params);
  const AssumptionReport report = check_assumptions(g.matrix(), params);
  if (!report.assumption2_ok) throw AssumptionError(report.describe());

  const BlockDecomposition d = block_partition(g, params, leaders, followers);
  const IndexSet order = d.local_order();
  const Matrix response_inverse = checked_inverse(d.response, "sequential response matrix M");
  const Matrix hessian = response_inverse + response_inverse.transpose();
  if (Eigen::LLT<Matrix>(hessian).info() != Eigen::Success) {
    throw AssumptionError("M^-1 + M^-T is not positive definite");
  }

  const Vector alpha_local = subvector(params.alpha, order);
  const Vector margin = alpha_local.array() - params.cost;
  const Vector x_local = checked_solve(hessian, margin, "M^-1 + M^-T");
  const Vector p_local = alpha_local - response_inverse * x_local;

  EquilibriumOutcome out;
  out.mode = GameMode::sequential_basic;
  out.x.resize(g.size());
  out.p.resize(g.size());
  for (std::size_t a = 0; a < order.size(); ++a) {
    out.x(order[a]) = x_local(static_cast<Index>(a));
    out.p(order[a]) = p_local(static_cast<Index>(a));
  }
  out.profit = margin.dot(x_local) / 2.0;
  require_profit_consistency(out, params.cost);
  return out;
}

PriceGapDecomposition price_gap_decomposition(const ComprehensiveNetwork& g,
                                              const CustomerSequence& seq,
                                              const MarketParams& params) {
  const TransformedNetwork gT = sequential_transform(g, seq, params);
  const EquilibriumOutcome se = solve_simultaneous(gT, params);
  const EquilibriumOutcome si = solve_simultaneous(g, params);

  const Matrix beta = params.beta.asDiagonal();
  PriceGapDecomposition d;
  d.asymmetry_factor = skew_part(g.matrix());
  d.leading_effect_factor =
      checked_inverse(beta - symmetric_part(gT.matrix), "transformed symmetrized system") -
      checked_inverse(beta - symmetric_part(g.matrix()), "symmetrized system");
  d.preference_vector = (params.alpha.array() - params.cost).matrix() / 2.0;
  d.gap = se.p - si.p;
  return d;
}

Vector effective_preferences(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                             const MarketParams& params) {
  return params.beta - sequential_transform(g, seq, params).increments;
}

double utility(Index i, const Vector& x, double price_i, const Matrix& g, const MarketParams& params) {
  const double xi = x(i);
  return params.alpha(i) * xi - 0.5 * params.beta(i) * xi * xi + g.row(i).dot(x) * xi - price_i * xi;
}

double profit_from_primitives(const Vector& x, const Vector& p, double cost) {
  if (x.size() != p.size()) {
    throw ValidationError("consumption has " + std::to_string(x.size()) + " entries but prices have " +
                          std::to_string(p.size()));
  }
  return ((p.array() - cost) * x.array()).sum();
}

}  // namespace netref
