#pragma once

// Customer networks, market parameters and purchase-order partitions.
//
// Customers are 0-based here; every external format (scenario files, CLI
// output) is 1-based and converts at the boundary.

#include "netref/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace netref {

struct MarketParams {
  Vector alpha;       // intrinsic valuation per customer
  Vector beta;        // satiation rate per customer, > 0
  double cost = 0.0;  // unit production cost
  double eta = 1.0;   // strength of the influence a referrer receives back

  Index size() const { return alpha.size(); }

  static MarketParams uniform(Index n, double alpha, double beta, double cost = 0.0,
                              double eta = 1.0);
};

// Every invariant violation, including alpha_i <= cost. Empty means valid.
std::vector<std::string> validate(const MarketParams& params);
// Structural checks only (sizes, beta > 0, eta >= 0); throws ValidationError.
void require_structurally_valid(const MarketParams& params);

// r(i, j) == 1 means customer j successfully recommended customer i.
class ReferralNetwork {
 public:
  explicit ReferralNetwork(Matrix r);
  // Edges are (referrer, recommended) pairs, 0-based.
  static ReferralNetwork from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges);

  Index size() const { return r_.rows(); }
  const Matrix& matrix() const { return r_; }
  bool recommended(Index referrer, Index customer) const { return r_(customer, referrer) != 0.0; }
  IndexSet referrers_of(Index customer) const;

 private:
  Matrix r_;
};

// Symmetric 0/1 matrix of who can share information with whom.
class InformationNetwork {
 public:
  explicit InformationNetwork(Matrix in);
  static InformationNetwork from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges);

  Index size() const { return in_.rows(); }
  const Matrix& matrix() const { return in_; }

 private:
  Matrix in_;
};

// Nonnegative influence weights g with zero diagonal; g(i, j) scales how much
// customer j's consumption raises customer i's marginal utility.
class ComprehensiveNetwork {
 public:
  explicit ComprehensiveNetwork(Matrix g);

  Index size() const { return g_.rows(); }
  const Matrix& matrix() const { return g_; }

 private:
  Matrix g_;
};

// Ordered partition of the customers by purchase time. Part 0 buys first.
class CustomerSequence {
 public:
  // Over zero customers, with no parts.
  CustomerSequence() = default;
  CustomerSequence(std::vector<IndexSet> parts, Index n);

  static CustomerSequence simultaneous(Index n);
  static CustomerSequence singletons(Index n);

  Index customer_count() const { return n_; }
  Index part_count() const { return static_cast<Index>(parts_.size()); }
  const std::vector<IndexSet>& parts() const { return parts_; }
  const IndexSet& part(Index j) const { return parts_[static_cast<std::size_t>(j)]; }
  // Union of parts first..end in order.
  IndexSet tail_from(Index first) const;

  friend bool operator==(const CustomerSequence&, const CustomerSequence&) = default;

 private:
  std::vector<IndexSet> parts_;
  Index n_ = 0;
};

// g_ij = r_ij + eta * r_ji.
ComprehensiveNetwork build_comprehensive(const ReferralNetwork& referral, double eta);

// A referral (recommended, referrer) with no information link behind it.
struct InformationViolation {
  Index recommended;
  Index referrer;
  friend bool operator==(const InformationViolation&, const InformationViolation&) = default;
};

std::vector<InformationViolation> validate_against_information(const ReferralNetwork& referral,
                                                               const InformationNetwork& info);

// Keeps the first j parts and merges the rest into one trailing part.
// j == 0 yields the fully merged (simultaneous) sequence; j >= k - 1 yields seq.
CustomerSequence merge_tail(const CustomerSequence& seq, Index j);

struct NewcomerExtension {
  ReferralNetwork referral;
  CustomerSequence sequence;
  ComprehensiveNetwork network;
  Index newcomer;
};

// Appends customer n, recommended by `referrer`, as a new last part.
NewcomerExtension extend_with_newcomer(const ReferralNetwork& referral, const CustomerSequence& seq,
                                       Index referrer, double eta);

// Leader/follower blocks of g and the matrices of the two-stage game.
// Block matrices use local order: leaders first (in the given order), then
// followers.
struct BlockDecomposition {
  IndexSet leaders;
  IndexSet followers;
  Matrix g_aa, g_ab, g_ba, g_bb;
  Matrix follower_inverse;             // (diag(beta_b) - g_bb)^-1
  Matrix leader_gain;                  // g_ab * follower_inverse * g_ba
  Matrix sequential_leader_inverse;    // [diag(beta_a) - g_aa - gain - diag(gain)]^-1
  Matrix simultaneous_leader_inverse;  // [diag(beta_a) - g_aa - gain]^-1
  Matrix response;                     // x = response * (alpha - p), local order
  Matrix system_inverse;               // (diag(beta) - g)^-1, local order
  // Max-norm relative mismatch between system_inverse and its block assembly
  // from simultaneous_leader_inverse.
  double block_identity_residual = 0.0;

  IndexSet local_order() const;
};

BlockDecomposition block_partition(const Matrix& g, const MarketParams& params,
                                   const IndexSet& leaders, const IndexSet& followers);
inline BlockDecomposition block_partition(const ComprehensiveNetwork& g, const MarketParams& params,
                                          const IndexSet& leaders, const IndexSet& followers) {
  return block_partition(g.matrix(), params, leaders, followers);
}

}  // namespace netref
