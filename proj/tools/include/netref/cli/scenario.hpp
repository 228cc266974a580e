#pragma once

// Scenario files: JSON, UTF-8, 1-based customer indices.
//
//   {
//     "name": "chain4",
//     "params": {"alpha": [1, 1, 1, 1], "beta": [5, 5, 5, 5], "cost": 0, "eta": 1},
//     "network_mode": "referral",
//     "referral_edges": [[1, 2], [2, 3], [3, 4]],
//     "information_edges": [[1, 2]],
//     "sequence": [[1], [2], [3], [4]]
//   }
//
// A referral pair is [referrer, recommended]. Direct mode replaces
// referral_edges with "direct_g", an n x n row-major matrix used verbatim.

#include "netref/network_model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netref::cli {

enum class NetworkMode { direct, referral };

std::string_view to_string(NetworkMode mode);

using EdgeList = std::vector<std::pair<Index, Index>>;  // 0-based

struct Scenario {
  std::string name;
  MarketParams params;
  NetworkMode network_mode = NetworkMode::direct;
  std::optional<Matrix> direct_g;
  std::optional<EdgeList> referral_edges;     // (referrer, recommended)
  std::optional<EdgeList> information_edges;  // undirected
  CustomerSequence sequence;

  Index size() const { return params.size(); }
  // Direct mode returns direct_g; referral mode builds g = R + eta R^T.
  ComprehensiveNetwork network() const;
  // Referral mode only.
  ReferralNetwork referral() const;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

// Throws ValidationError listing every problem found, with JSON parse
// errors located by line and column.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

std::string dump_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// star5, hier5, chain4.
Scenario builtin_scenario(std::string_view name);
std::vector<std::string> builtin_names();

// "1|2,3,4,5" -> {{0}, {1, 2, 3, 4}}.
CustomerSequence parse_sequence(std::string_view text, Index n);
// {{0}, {1, 2}} -> "{1}|{2,3}".
std::string format_sequence(const CustomerSequence& seq);
std::string format_part(const IndexSet& part);

}  // namespace netref::cli
