#include "netref/network_model.hpp"

#include "netref/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netref {

namespace {

std::string customer_label(Index i) { return "customer " + std::to_string(i + 1); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

void require_binary_zero_diagonal(const Matrix& m, const char* what,
                                  std::vector<std::string>& issues) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) issues.push_back(std::string(what) + ": nonzero diagonal at " + customer_label(i));
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0 && m(i, j) != 1.0) {
        std::ostringstream os;
        os << what << ": entry (" << i + 1 << "," << j + 1 << ") = " << m(i, j) << " is not 0 or 1";
        issues.push_back(os.str());
      }
    }
  }
}

Matrix adjacency_from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges,
                            bool symmetric, const char* what) {
  if (n < 0) throw ValidationError(std::string(what) + ": negative size");
  Matrix m = Matrix::Zero(n, n);
  std::vector<std::string> issues;
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      std::ostringstream os;
      os << what << ": edge (" << from + 1 << "," << to + 1 << ") out of range 1.." << n;
      issues.push_back(os.str());
      continue;
    }
    if (from == to) {
      issues.push_back(std::string(what) + ": self edge at " + customer_label(from));
      continue;
    }
    // Referral edges are (referrer, recommended) and set r(recommended, referrer).
    m(to, from) = 1.0;
    if (symmetric) m(from, to) = 1.0;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return m;
}

}  // namespace

MarketParams MarketParams::uniform(Index n, double alpha, double beta, double cost, double eta) {
  MarketParams p;
  p.alpha = Vector::Constant(n, alpha);
  p.beta = Vector::Constant(n, beta);
  p.cost = cost;
  p.eta = eta;
  return p;
}

std::vector<std::string> validate(const MarketParams& params) {
  std::vector<std::string> issues;
  if (params.alpha.size() < 1) issues.emplace_back("alpha must have at least one customer");
  if (params.alpha.size() != params.beta.size()) {
    std::ostringstream os;
    os << "alpha has " << params.alpha.size() << " entries but beta has " << params.beta.size();
    issues.push_back(os.str());
  }
  for (Index i = 0; i < params.beta.size(); ++i) {
    if (!(params.beta(i) > 0.0)) issues.push_back("beta must be positive for " + customer_label(i));
  }
  for (Index i = 0; i < params.alpha.size(); ++i) {
    if (!(params.alpha(i) > params.cost)) {
      issues.push_back("alpha must exceed cost for " + customer_label(i));
    }
  }
  if (!(params.eta >= 0.0)) issues.emplace_back("eta must be nonnegative");
  if (!std::isfinite(params.cost)) issues.emplace_back("cost must be finite");
  return issues;
}

void require_structurally_valid(const MarketParams& params) {
  std::vector<std::string> issues;
  for (auto& s : validate(params)) {
    if (s.rfind("alpha must exceed cost", 0) != 0) issues.push_back(std::move(s));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ReferralNetwork::ReferralNetwork(Matrix r) : r_(std::move(r)) {
  require_square(r_, "referral matrix");
  std::vector<std::string> issues;
  require_binary_zero_diagonal(r_, "referral matrix", issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ReferralNetwork ReferralNetwork::from_edges(Index n,
                                            const std::vector<std::pair<Index, Index>>& edges) {
  return ReferralNetwork(adjacency_from_edges(n, edges, false, "referral edge"));
}

IndexSet ReferralNetwork::referrers_of(Index customer) const {
  IndexSet out;
  for (Index j = 0; j < size(); ++j) {
    if (r_(customer, j) != 0.0) out.push_back(j);
  }
  return out;
}

InformationNetwork::InformationNetwork(Matrix in) : in_(std::move(in)) {
  require_square(in_, "information matrix");
  std::vector<std::string> issues;
  require_binary_zero_diagonal(in_, "information matrix", issues);
  if (!is_symmetric(in_)) issues.emplace_back("information matrix must be symmetric");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

InformationNetwork InformationNetwork::from_edges(
    Index n, const std::vector<std::pair<Index, Index>>& edges) {
  return InformationNetwork(adjacency_from_edges(n, edges, true, "information edge"));
}

ComprehensiveNetwork::ComprehensiveNetwork(Matrix g) : g_(std::move(g)) {
  require_square(g_, "influence matrix");
  std::vector<std::string> issues;
  for (Index i = 0; i < g_.rows(); ++i) {
    if (g_(i, i) != 0.0) issues.push_back("influence matrix: nonzero diagonal at " + customer_label(i));
    for (Index j = 0; j < g_.cols(); ++j) {
      if (!(g_(i, j) >= 0.0) || !std::isfinite(g_(i, j))) {
        std::ostringstream os;
        os << "influence matrix: entry (" << i + 1 << "," << j + 1 << ") = " << g_(i, j)
           << " must be finite and nonnegative";
        issues.push_back(os.str());
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

CustomerSequence::CustomerSequence(std::vector<IndexSet> parts, Index n)
    : parts_(std::move(parts)), n_(n) {
  std::vector<std::string> issues;
  if (parts_.empty()) issues.emplace_back("sequence must have at least one part");
  std::vector<int> seen(static_cast<std::size_t>(std::max<Index>(n, 0)), 0);
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (parts_[j].empty()) issues.push_back("sequence part " + std::to_string(j + 1) + " is empty");
    for (Index c : parts_[j]) {
      if (c < 0 || c >= n) {
        issues.push_back("sequence part " + std::to_string(j + 1) + " names " + customer_label(c) +
                         " outside 1.." + std::to_string(n));
        continue;
      }
      if (seen[static_cast<std::size_t>(c)]++ == 1) {
        issues.push_back("sequence lists " + customer_label(c) + " more than once");
      }
    }
  }
  for (Index c = 0; c < n; ++c) {
    if (seen[static_cast<std::size_t>(c)] == 0) {
      issues.push_back("sequence omits " + customer_label(c));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

CustomerSequence CustomerSequence::simultaneous(Index n) {
  IndexSet all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return CustomerSequence({all}, n);
}

CustomerSequence CustomerSequence::singletons(Index n) {
  std::vector<IndexSet> parts;
  for (Index i = 0; i < n; ++i) parts.push_back({i});
  return CustomerSequence(std::move(parts), n);
}

IndexSet CustomerSequence::tail_from(Index first) const {
  IndexSet out;
  for (std::size_t j = static_cast<std::size_t>(std::max<Index>(first, 0)); j < parts_.size(); ++j) {
    out.insert(out.end(), parts_[j].begin(), parts_[j].end());
  }
  return out;
}

ComprehensiveNetwork build_comprehensive(const ReferralNetwork& referral, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be finite and nonnegative");
  const Matrix& r = referral.matrix();
  return ComprehensiveNetwork(r + eta * r.transpose());
}

std::vector<InformationViolation> validate_against_information(const ReferralNetwork& referral,
                                                               const InformationNetwork& info) {
  if (referral.size() != info.size()) {
    std::ostringstream os;
    os << "referral network has " << referral.size() << " customers but information network has "
       << info.size();
    throw ValidationError(os.str());
  }
  std::vector<InformationViolation> out;
  const Matrix& r = referral.matrix();
  const Matrix& in = info.matrix();
  for (Index i = 0; i < r.rows(); ++i) {
    for (Index j = 0; j < r.cols(); ++j) {
      if (r(i, j) != 0.0 && in(i, j) == 0.0 && in(j, i) == 0.0) out.push_back({i, j});
    }
  }
  return out;
}

CustomerSequence merge_tail(const CustomerSequence& seq, Index j) {
  const Index k = seq.part_count();
  if (j < 0 || j > k) {
    throw ValidationError("merge index " + std::to_string(j) + " outside 0.." + std::to_string(k));
  }
  if (j >= k - 1) return seq;
  std::vector<IndexSet> parts(seq.parts().begin(), seq.parts().begin() + j);
  parts.push_back(seq.tail_from(j));
  return CustomerSequence(std::move(parts), seq.customer_count());
}

NewcomerExtension extend_with_newcomer(const ReferralNetwork& referral, const CustomerSequence& seq,
                                       Index referrer, double eta) {
  const Index n = referral.size();
  if (seq.customer_count() != n) {
    throw ValidationError("sequence covers " + std::to_string(seq.customer_count()) +
                          " customers but the referral network has " + std::to_string(n));
  }
  if (referrer < 0 || referrer >= n) {
    throw ValidationError("referrer " + std::to_string(referrer + 1) + " outside 1.." +
                          std::to_string(n));
  }
  Matrix r = Matrix::Zero(n + 1, n + 1);
  r.topLeftCorner(n, n) = referral.matrix();
  r(n, referrer) = 1.0;
  ReferralNetwork grown(std::move(r));

  std::vector<IndexSet> parts = seq.parts();
  parts.push_back({n});
  CustomerSequence extended(std::move(parts), n + 1);
  ComprehensiveNetwork g = build_comprehensive(grown, eta);
  return NewcomerExtension{std::move(grown), std::move(extended), std::move(g), n};
}

IndexSet BlockDecomposition::local_order() const {
  IndexSet out = leaders;
  out.insert(out.end(), followers.begin(), followers.end());
  return out;
}

BlockDecomposition block_partition(const Matrix& g, const MarketParams& params,
                                   const IndexSet& leaders, const IndexSet& followers) {
  const Index n = g.rows();
  if (g.cols() != n || params.size() != n || params.beta.size() != n) {
    throw ValidationError("influence matrix and market parameters disagree on customer count");
  }
  if (leaders.empty() || followers.empty()) {
    throw ValidationError("block partition needs nonempty leader and follower sets");
  }
  // Reuses the partition validation: the two sets must cover 0..n-1 exactly.
  CustomerSequence check({leaders, followers}, n);
  (void)check;

  BlockDecomposition d;
  d.leaders = leaders;
  d.followers = followers;
  d.g_aa = submatrix(g, leaders, leaders);
  d.g_ab = submatrix(g, leaders, followers);
  d.g_ba = submatrix(g, followers, leaders);
  d.g_bb = submatrix(g, followers, followers);

  const Matrix beta_a = subvector(params.beta, leaders).asDiagonal();
  const Matrix beta_b = subvector(params.beta, followers).asDiagonal();

  d.follower_inverse = checked_inverse(beta_b - d.g_bb, "follower system diag(beta_b) - g_bb");
  d.leader_gain = d.g_ab * d.follower_inverse * d.g_ba;
  const Matrix gain_diag = d.leader_gain.diagonal().asDiagonal();

  d.sequential_leader_inverse = checked_inverse(beta_a - d.g_aa - d.leader_gain - gain_diag,
                                                "sequential leader system");
  d.simultaneous_leader_inverse =
      checked_inverse(beta_a - d.g_aa - d.leader_gain, "simultaneous leader system");

  const Index m = static_cast<Index>(leaders.size());
  const Index f = static_cast<Index>(followers.size());

  auto assemble = [&](const Matrix& leader_block) {
    Matrix out(n, n);
    out.topLeftCorner(m, m) = leader_block;
    out.topRightCorner(m, f) = leader_block * d.g_ab * d.follower_inverse;
    out.bottomLeftCorner(f, m) = d.follower_inverse * d.g_ba * leader_block;
    out.bottomRightCorner(f, f) =
        d.follower_inverse + d.follower_inverse * d.g_ba * leader_block * d.g_ab * d.follower_inverse;
    return out;
  };
  d.response = assemble(d.sequential_leader_inverse);

  const IndexSet order = d.local_order();
  const Matrix g_local = submatrix(g, order, order);
  const Matrix beta_local = subvector(params.beta, order).asDiagonal();
  d.system_inverse = checked_inverse(beta_local - g_local, "system diag(beta) - g");
  d.block_identity_residual = scaled_difference(assemble(d.simultaneous_leader_inverse),
                                                d.system_inverse);
  return d;
}

}  // namespace netref
