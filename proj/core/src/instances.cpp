#include "netref/instances.hpp"

#include "netref/equilibrium.hpp"
#include "netref/errors.hpp"

#include <algorithm>
#include <numeric>

namespace netref {

namespace {

constexpr int kMaxDraws = 1000;

ComprehensiveNetwork undirected(Index n, const std::vector<std::pair<Index, Index>>& edges) {
  Matrix g = Matrix::Zero(n, n);
  for (auto [a, b] : edges) g(a, b) = g(b, a) = 1.0;
  return ComprehensiveNetwork(std::move(g));
}

CustomerSequence random_partition(std::mt19937_64& rng, Index n, Index parts) {
  IndexSet order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  // parts - 1 distinct cut positions in 1..n-1.
  IndexSet cuts(static_cast<std::size_t>(n - 1));
  std::iota(cuts.begin(), cuts.end(), Index{1});
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(parts - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);

  std::vector<IndexSet> out;
  Index begin = 0;
  for (Index end : cuts) {
    IndexSet part(order.begin() + begin, order.begin() + end);
    std::sort(part.begin(), part.end());
    out.push_back(std::move(part));
    begin = end;
  }
  return CustomerSequence(std::move(out), n);
}

}  // namespace

ComprehensiveNetwork star5_network() { return undirected(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

ComprehensiveNetwork hierarchical5_network() {
  return undirected(5, {{0, 1}, {0, 2}, {1, 3}, {1, 4}});
}

ReferralNetwork referral_line(Index n) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index j = 0; j + 1 < n; ++j) edges.emplace_back(j, j + 1);
  return ReferralNetwork::from_edges(n, edges);
}

ReferralNetwork referral_star(Index n) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index j = 1; j < n; ++j) edges.emplace_back(0, j);
  return ReferralNetwork::from_edges(n, edges);
}

RandomInstance random_instance(std::mt19937_64& rng, const InstanceSpec& spec) {
  if (spec.min_customers < 1 || spec.max_customers < spec.min_customers) {
    throw ValidationError("invalid customer count range");
  }
  if (spec.parts < 0 || spec.parts > spec.min_customers) {
    throw ValidationError("part count exceeds the smallest customer count");
  }
  std::uniform_int_distribution<Index> size_dist(spec.min_customers, spec.max_customers);
  std::bernoulli_distribution edge(spec.edge_probability);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const Index n = size_dist(rng);
    // One referral per linked pair. Triangular instances only let a customer
    // recommend higher-indexed customers.
    Matrix r = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (!edge(rng)) continue;
        const bool forward = spec.topology == Topology::triangular || unit(rng) < 0.5;
        if (forward) r(j, i) = 1.0;
        else r(i, j) = 1.0;
      }
    }

    double eta = 1.0;
    if (spec.topology == Topology::random) eta = 2.0 * unit(rng);
    if (spec.topology == Topology::triangular) eta = 0.0;

    ReferralNetwork referral(r);
    ComprehensiveNetwork g = build_comprehensive(referral, eta);

    MarketParams params;
    params.eta = eta;
    params.cost = 0.5 * unit(rng);
    params.alpha.resize(n);
    params.beta.resize(n);
    const Vector rows = g.matrix().rowwise().sum();
    const Vector cols = g.matrix().colwise().sum().transpose();
    for (Index i = 0; i < n; ++i) {
      params.alpha(i) = params.cost + 0.5 + unit(rng);
      params.beta(i) = (1.5 + 1.5 * unit(rng)) * (1.0 + std::max(rows(i), cols(i)));
    }

    Index parts = spec.parts;
    if (parts == 0) parts = std::uniform_int_distribution<Index>(2, std::max<Index>(2, n))(rng);
    parts = std::min(parts, n);
    CustomerSequence seq = random_partition(rng, n, parts);

    try {
      if (!check_assumptions(g.matrix(), params).passes()) continue;
      const TransformedNetwork t = sequential_transform(g, seq, params);
      if (!check_assumptions(t.matrix, params).passes()) continue;
    } catch (const AssumptionError&) {
      continue;
    }
    return RandomInstance{std::move(referral), std::move(g), std::move(params), std::move(seq)};
  }
  throw ConvergenceError("no random instance passed the assumptions");
}

}  // namespace netref
