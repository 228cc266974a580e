#include "netref/oracle.hpp"

#include "netref/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace netref {

namespace {

constexpr int kSearchBits = std::numeric_limits<double>::digits / 2;
constexpr int kMaxBracketExpansions = 40;

// Maximizes f on [center - half_width, center + half_width], re-centering and
// widening while the optimum sits near an end of the bracket.
template <class F>
double maximize_1d(F&& f, double center, double half_width) {
  for (int attempt = 0; attempt < kMaxBracketExpansions; ++attempt) {
    const double lo = center - half_width;
    const double hi = center + half_width;
    std::uintmax_t iters = 500;
    const auto best = boost::math::tools::brent_find_minima(
        [&](double y) { return -f(y); }, lo, hi, kSearchBits, iters);
    const double y = best.first;
    const double margin = 0.05 * (hi - lo);
    if (y - lo > margin && hi - y > margin) return y;
    center = y;
    half_width *= 4.0;
  }
  throw ConvergenceError("one-dimensional search found no interior maximum");
}

class ResponseChain {
 public:
  ResponseChain(const Matrix& g, const MarketParams& params, IndexSet leaders, IndexSet followers,
                const OracleConfig& cfg)
      : g_(g), params_(params), leaders_(std::move(leaders)), followers_(std::move(followers)),
        cfg_(cfg), warm_(Vector::Zero(g.rows())) {}

  // Gauss-Seidel best responses of the followers, in place, warm-started from x.
  void solve_followers(const Vector& p, Vector& x) const {
    for (int it = 0; it < cfg_.fixed_point_max_iter; ++it) {
      double change = 0.0;
      for (Index j : followers_) {
        const double influence = g_.row(j).dot(x) - g_(j, j) * x(j);
        const double next = (params_.alpha(j) - p(j) + influence) / params_.beta(j);
        if (!std::isfinite(next)) {
          throw ConvergenceError("follower best responses diverge");
        }
        change = std::max(change, std::abs(next - x(j)));
        x(j) = next;
      }
      if (change < cfg_.fixed_point_tol) return;
    }
    throw ConvergenceError("follower best responses did not converge within " +
                           std::to_string(cfg_.fixed_point_max_iter) + " iterations");
  }

  // Curvature of leader i's utility in its own consumption, from the
  // numerically differentiated follower reaction.
  double leader_curvature(Index i, const Vector& p, const Vector& x) const {
    const double h = cfg_.reaction_fd_step * std::max(1.0, std::abs(x(i)));
    Vector up = x;
    Vector down = x;
    up(i) += h;
    down(i) -= h;
    solve_followers(p, up);
    solve_followers(p, down);
    double slope_term = 0.0;
    for (Index j : followers_) slope_term += g_(i, j) * (up(j) - down(j)) / (2.0 * h);
    return -params_.beta(i) + 2.0 * g_(i, i) + 2.0 * slope_term;
  }

  void solve_leaders(const Vector& p, Vector& x) const {
    solve_followers(p, x);
    if (leaders_.empty()) return;
    for (int cycle = 0; cycle < cfg_.leader_max_cycles; ++cycle) {
      double change = 0.0;
      for (Index i : leaders_) {
        auto reduced_utility = [&](double y) {
          Vector trial = x;
          trial(i) = y;
          solve_followers(p, trial);
          return utility(i, trial, p(i), g_, params_);
        };
        const double scale = std::max(0.5, std::abs(x(i)));
        const double best = maximize_1d(reduced_utility, x(i), scale);
        change = std::max(change, std::abs(best - x(i)));
        x(i) = best;
        solve_followers(p, x);
        if (!(leader_curvature(i, p, x) < 0.0)) {
          std::ostringstream os;
          os << "reduced utility of leader " << i + 1 << " is not concave";
          throw ConvergenceError(os.str());
        }
      }
      // Brent resolves an argmax only to about 2^(1-bits) (1 + |x|); a tighter
      // tolerance would chase that noise forever.
      const double resolution = 4.0 * std::ldexp(1.0, 1 - kSearchBits) * (1.0 + x.cwiseAbs().maxCoeff());
      if (change < std::max(cfg_.leader_tol, resolution)) return;
    }
    throw ConvergenceError("leader best responses did not settle within " +
                           std::to_string(cfg_.leader_max_cycles) + " cycles");
  }

  Vector consumption(const Vector& p) {
    Vector x = warm_;
    solve_leaders(p, x);
    warm_ = x;
    return x;
  }

  double profit(const Vector& p) {
    ++evaluations_;
    if (evaluations_ > cfg_.price_search_max_evals) {
      throw ConvergenceError("price search exhausted its budget of " +
                             std::to_string(cfg_.price_search_max_evals) + " evaluations");
    }
    return ((p.array() - params_.cost) * consumption(p).array()).sum();
  }

  int evaluations() const { return evaluations_; }
  const IndexSet& leaders() const { return leaders_; }

 private:
  const Matrix& g_;
  const MarketParams& params_;
  IndexSet leaders_;
  IndexSet followers_;
  OracleConfig cfg_;
  Vector warm_;
  int evaluations_ = 0;
};

void require_inputs(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                    const MarketParams& params) {
  require_structurally_valid(params);
  if (params.size() != g.size() || seq.customer_count() != g.size()) {
    throw ValidationError("network, sequence and parameters disagree on customer count");
  }
  if (seq.part_count() > 2) {
    throw ValidationError("the numeric oracle handles at most two parts, got " +
                          std::to_string(seq.part_count()));
  }
}

ResponseChain make_chain(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                         const MarketParams& params, const OracleConfig& cfg) {
  if (seq.part_count() == 1) return ResponseChain(g.matrix(), params, {}, seq.part(0), cfg);
  return ResponseChain(g.matrix(), params, seq.part(0), seq.part(1), cfg);
}

Vector scatter(Index n, const IndexSet& idx, const Vector& values) {
  Vector out = Vector::Zero(n);
  for (std::size_t a = 0; a < idx.size(); ++a) out(idx[a]) = values(static_cast<Index>(a));
  return out;
}

}  // namespace

void validate(const OracleConfig& cfg) {
  std::vector<std::string> issues;
  if (!(cfg.fixed_point_tol > 0.0)) issues.emplace_back("fixed_point_tol must be positive");
  if (cfg.fixed_point_max_iter <= 0) issues.emplace_back("fixed_point_max_iter must be positive");
  if (!(cfg.price_search_tol > 0.0)) issues.emplace_back("price_search_tol must be positive");
  if (cfg.price_search_max_evals <= 0) issues.emplace_back("price_search_max_evals must be positive");
  if (!(cfg.reaction_fd_step > 0.0)) issues.emplace_back("reaction_fd_step must be positive");
  if (!(cfg.leader_tol > 0.0)) issues.emplace_back("leader_tol must be positive");
  if (cfg.leader_max_cycles <= 0) issues.emplace_back("leader_max_cycles must be positive");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Vector follower_fixed_point(const Vector& p, const Vector& leader_x, const ComprehensiveNetwork& g,
                            const MarketParams& params, const IndexSet& leaders,
                            const IndexSet& followers, const OracleConfig& cfg) {
  validate(cfg);
  require_structurally_valid(params);
  const Index n = g.size();
  if (params.size() != n || p.size() != n) {
    throw ValidationError("prices, parameters and network disagree on customer count");
  }
  if (leader_x.size() != static_cast<Index>(leaders.size())) {
    throw ValidationError("leader consumption does not match the leader set");
  }
  if (!leaders.empty()) (void)CustomerSequence({leaders, followers}, n);
  else (void)CustomerSequence({followers}, n);

  Vector x = scatter(n, leaders, leader_x);
  ResponseChain chain(g.matrix(), params, leaders, followers, cfg);
  chain.solve_followers(p, x);
  return subvector(x, followers);
}

Vector numeric_consumption(const Vector& p, const ComprehensiveNetwork& g,
                           const CustomerSequence& seq, const MarketParams& params,
                           const OracleConfig& cfg) {
  validate(cfg);
  require_inputs(g, seq, params);
  if (p.size() != g.size()) throw ValidationError("price vector has the wrong length");
  return make_chain(g, seq, params, cfg).consumption(p);
}

Vector leader_numeric_response(const Vector& p, const ComprehensiveNetwork& g,
                               const CustomerSequence& seq, const MarketParams& params,
                               const OracleConfig& cfg) {
  if (seq.part_count() != 2) {
    throw ValidationError("leader response needs a two-part sequence");
  }
  return subvector(numeric_consumption(p, g, seq, params, cfg), seq.part(0));
}

bool within_thresholds(const OracleReport& r) {
  return r.converged &&
         r.profit_gap <= kOracleProfitRelTol * std::max(1.0, std::abs(r.closed_form.profit)) &&
         r.max_abs_gap_x <= kOracleConsumptionTol && r.max_abs_gap_p <= kOraclePriceTol;
}

OracleReport numeric_price_search(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                                  const MarketParams& params, const OracleConfig& cfg) {
  validate(cfg);
  require_inputs(g, seq, params);
  const Index n = g.size();
  if (n > kOracleMaxCustomers) {
    throw ValidationError("the numeric oracle handles at most " +
                          std::to_string(kOracleMaxCustomers) + " customers, got " +
                          std::to_string(n));
  }

  ResponseChain chain = make_chain(g, seq, params, cfg);
  Vector p = (params.alpha.array() + params.cost).matrix() / 2.0;
  double best = chain.profit(p);

  for (;;) {
    const Vector sweep_start = p;
    const double profit_start = best;
    for (Index i = 0; i < n; ++i) {
      auto along = [&](double value) {
        Vector trial = p;
        trial(i) = value;
        return chain.profit(trial);
      };
      const double width = std::max(0.25, 0.5 * std::abs(params.alpha(i) - params.cost));
      const double candidate = maximize_1d(along, p(i), width);
      const double value = along(candidate);
      if (value >= best) {
        p(i) = candidate;
        best = value;
      }
    }
    const Vector direction = p - sweep_start;
    if (direction.cwiseAbs().maxCoeff() > 0.0) {
      auto along = [&](double t) { return chain.profit(p + t * direction); };
      const double t = maximize_1d(along, 0.0, 1.0);
      const double value = along(t);
      if (value >= best) {
        p += t * direction;
        best = value;
      }
    }
    if (best - profit_start < cfg.price_search_tol) break;
  }

  OracleReport r;
  r.p_oracle = p;
  r.x_oracle = chain.consumption(p);
  r.profit_oracle = ((p.array() - params.cost) * r.x_oracle.array()).sum();
  r.closed_form = seq.part_count() == 1 ? solve_simultaneous(g, params)
                                        : solve_sequential(g, seq, params);
  r.max_abs_gap_x = (r.x_oracle - r.closed_form.x).cwiseAbs().maxCoeff();
  r.max_abs_gap_p = (r.p_oracle - r.closed_form.p).cwiseAbs().maxCoeff();
  r.profit_gap = std::abs(r.profit_oracle - r.closed_form.profit);
  r.profit_at_closed_form_prices = std::numeric_limits<double>::quiet_NaN();
  r.evaluations = chain.evaluations();
  r.converged = std::isfinite(r.max_abs_gap_x) && std::isfinite(r.max_abs_gap_p) &&
                std::isfinite(r.profit_gap);
  if (r.x_oracle.minCoeff() < 0.0) {
    r.warnings.emplace_back(
        "numeric optimum has negative consumption; instance is outside the interior regime");
  }
  return r;
}

OracleReport oracle_compare(const ComprehensiveNetwork& g, const CustomerSequence& seq,
                            const MarketParams& params, const OracleConfig& cfg) {
  OracleReport r = numeric_price_search(g, seq, params, cfg);
  ResponseChain chain = make_chain(g, seq, params, cfg);
  r.profit_at_closed_form_prices = chain.profit(r.closed_form.p);
  return r;
}

}  // namespace netref
