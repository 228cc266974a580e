#pragma once

// Built-in example networks and seeded random instances.

#include "netref/network_model.hpp"

#include <optional>
#include <random>

namespace netref {

// Undirected unit-weight star with hub 0 and leaves 1..4.
ComprehensiveNetwork star5_network();
// Undirected unit-weight tree: 0-1, 0-2, 1-3, 1-4.
ComprehensiveNetwork hierarchical5_network();
// Customer j recommends customer j+1 for j = 0..n-2.
ReferralNetwork referral_line(Index n);
// Hub 0 recommends every other customer.
ReferralNetwork referral_star(Index n);

enum class Topology {
  random,      // random referral edges, random eta
  symmetric,   // random referral edges, eta = 1, so g = g^T
  triangular,  // only higher-indexed customers are recommended, eta = 0
};

struct InstanceSpec {
  Index min_customers = 2;
  Index max_customers = 8;
  Topology topology = Topology::random;
  // Number of parts; 0 draws uniformly from 2..n.
  Index parts = 2;
  double edge_probability = 0.4;
};

struct RandomInstance {
  ReferralNetwork referral;
  ComprehensiveNetwork network;
  MarketParams params;
  CustomerSequence sequence;
};

// Draws until the instance passes every assumption of the sequential solver.
// beta_i is a random multiple in [1.5, 3] of 1 + max(row sum, column sum) of g,
// which keeps every system diagonally dominant.
RandomInstance random_instance(std::mt19937_64& rng, const InstanceSpec& spec = {});

}  // namespace netref
