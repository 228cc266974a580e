#include "netref/cli/scenario.hpp"

#include "netref/errors.hpp"
#include "netref/instances.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace netref::cli {

namespace {

using nlohmann::json;

std::string index_path(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

// Appends a problem with `where` prefixed.
struct Issues {
  std::vector<std::string> list;
  void add(std::string_view where, std::string_view what) {
    list.push_back(std::string(where) + ": " + std::string(what));
  }
  void absorb(std::string_view where, const ValidationError& e) {
    for (const auto& s : e.issues()) add(where, s);
  }
};

std::optional<Vector> read_vector(std::string_view field, const json* node, Issues& issues) {
  if (node == nullptr) {
    issues.add(field, "missing");
    return std::nullopt;
  }
  if (!node->is_array()) {
    issues.add(field, "must be an array of numbers");
    return std::nullopt;
  }
  Vector v(static_cast<Index>(node->size()));
  bool ok = true;
  for (std::size_t i = 0; i < node->size(); ++i) {
    const json& e = (*node)[i];
    if (!e.is_number()) {
      issues.add(index_path(field, i), "must be a number");
      ok = false;
      continue;
    }
    v(static_cast<Index>(i)) = e.get<double>();
  }
  return ok ? std::optional<Vector>(v) : std::nullopt;
}

std::optional<Index> read_customer(const json& e, std::string_view where, Index n, Issues& issues) {
  if (!e.is_number_integer()) {
    issues.add(where, "customer index must be an integer");
    return std::nullopt;
  }
  const auto k = e.get<long long>();
  if (n > 0 && (k < 1 || k > n)) {
    issues.add(where, "customer " + std::to_string(k) + " is outside 1.." + std::to_string(n));
    return std::nullopt;
  }
  return static_cast<Index>(k - 1);
}

std::optional<EdgeList> read_edges(const json& node, std::string_view field, Index n,
                                   Issues& issues) {
  if (!node.is_array()) {
    issues.add(field, "must be an array of [a, b] pairs");
    return std::nullopt;
  }
  EdgeList edges;
  bool ok = true;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& pair = node[i];
    const std::string where = index_path(field, i);
    if (!pair.is_array() || pair.size() != 2) {
      issues.add(where, "must be a pair [a, b]");
      ok = false;
      continue;
    }
    const auto a = read_customer(pair[0], where, n, issues);
    const auto b = read_customer(pair[1], where, n, issues);
    if (!a || !b) {
      ok = false;
      continue;
    }
    if (*a == *b) {
      issues.add(where, "self-loop on customer " + std::to_string(*a + 1));
      ok = false;
      continue;
    }
    edges.emplace_back(*a, *b);
  }
  return ok ? std::optional<EdgeList>(edges) : std::nullopt;
}

json edges_to_json(const EdgeList& edges) {
  json out = json::array();
  for (auto [a, b] : edges) out.push_back({a + 1, b + 1});
  return out;
}

bool same_matrix(const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->rows() == b->rows() && a->cols() == b->cols() && *a == *b;
}

bool same_vector(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

}  // namespace

std::string_view to_string(NetworkMode mode) {
  return mode == NetworkMode::direct ? "direct" : "referral";
}

ComprehensiveNetwork Scenario::network() const {
  if (network_mode == NetworkMode::direct) return ComprehensiveNetwork(*direct_g);
  return build_comprehensive(referral(), params.eta);
}

ReferralNetwork Scenario::referral() const {
  if (network_mode != NetworkMode::referral) {
    throw ValidationError("scenario '" + name + "' is in direct mode; this needs a referral network");
  }
  return ReferralNetwork::from_edges(size(), *referral_edges);
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && same_vector(a.params.alpha, b.params.alpha) &&
         same_vector(a.params.beta, b.params.beta) && a.params.cost == b.params.cost &&
         a.params.eta == b.params.eta && a.network_mode == b.network_mode &&
         same_matrix(a.direct_g, b.direct_g) && a.referral_edges == b.referral_edges &&
         a.information_edges == b.information_edges && a.sequence == b.sequence;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("scenario must be a JSON object");

  Issues issues;
  Scenario s;
  if (root.contains("name")) {
    if (root["name"].is_string()) s.name = root["name"].get<std::string>();
    else issues.add("name", "must be a string");
  }

  // Parameters first: n comes from alpha.
  const json* params = root.contains("params") ? &root["params"] : nullptr;
  if (params == nullptr || !params->is_object()) {
    issues.add("params", params == nullptr ? "missing" : "must be an object");
    throw ValidationError(std::move(issues.list));
  }
  auto field = [&](const char* key) { return params->contains(key) ? &(*params)[key] : nullptr; };
  const auto alpha = read_vector("params.alpha", field("alpha"), issues);
  const auto beta = read_vector("params.beta", field("beta"), issues);
  if (alpha) s.params.alpha = *alpha;
  if (beta) s.params.beta = *beta;
  for (const char* key : {"cost", "eta"}) {
    if (const json* v = field(key)) {
      if (!v->is_number()) {
        issues.add(std::string("params.") + key, "must be a number");
        continue;
      }
      (key[0] == 'c' ? s.params.cost : s.params.eta) = v->get<double>();
    }
  }
  if (alpha && beta) {
    for (const auto& problem : validate(s.params)) issues.add("params", problem);
  } else if (beta) {
    for (Index i = 0; i < beta->size(); ++i) {
      if (!((*beta)(i) > 0.0)) issues.add("params", "beta must be positive for customer " + std::to_string(i + 1));
    }
  }
  // A malformed alpha still fixes the customer count for the checks below.
  const json* alpha_node = field("alpha");
  const Index n = alpha ? s.params.alpha.size()
                        : (alpha_node != nullptr && alpha_node->is_array() ? static_cast<Index>(alpha_node->size()) : 0);

  bool mode_known = false;
  if (!root.contains("network_mode") || !root["network_mode"].is_string()) {
    issues.add("network_mode", "must be \"direct\" or \"referral\"");
  } else {
    const auto mode = root["network_mode"].get<std::string>();
    mode_known = mode == "direct" || mode == "referral";
    if (mode == "direct") s.network_mode = NetworkMode::direct;
    else if (mode == "referral") s.network_mode = NetworkMode::referral;
    else issues.add("network_mode", "must be \"direct\" or \"referral\", got \"" + mode + "\"");
  }

  const bool has_g = root.contains("direct_g");
  const bool has_edges = root.contains("referral_edges");
  if (!mode_known) {
    // Nothing to check the network fields against.
  } else if (s.network_mode == NetworkMode::direct) {
    if (has_edges) issues.add("referral_edges", "not allowed in direct mode");
    if (!has_g) {
      issues.add("direct_g", "required in direct mode");
    } else {
      const json& g = root["direct_g"];
      if (!g.is_array() || static_cast<Index>(g.size()) != n) {
        issues.add("direct_g", "must be an array of " + std::to_string(n) + " rows");
      } else {
        Matrix m(n, n);
        bool ok = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto row = read_vector(index_path("direct_g", i), &g[i], issues);
          if (!row) ok = false;
          else if (row->size() != n) {
            issues.add(index_path("direct_g", i), "must have " + std::to_string(n) + " entries");
            ok = false;
          } else {
            m.row(static_cast<Index>(i)) = row->transpose();
          }
        }
        if (ok) {
          try {
            ComprehensiveNetwork check(m);
            s.direct_g = m;
          } catch (const ValidationError& e) {
            issues.absorb("direct_g", e);
          }
        }
      }
    }
  } else {
    if (has_g) issues.add("direct_g", "not allowed in referral mode");
    if (!has_edges) {
      issues.add("referral_edges", "required in referral mode");
    } else if (auto edges = read_edges(root["referral_edges"], "referral_edges", n, issues)) {
      try {
        (void)ReferralNetwork::from_edges(n, *edges);
        s.referral_edges = std::move(edges);
      } catch (const ValidationError& e) {
        issues.absorb("referral_edges", e);
      }
    }
  }

  if (root.contains("information_edges")) {
    if (auto edges = read_edges(root["information_edges"], "information_edges", n, issues)) {
      s.information_edges = std::move(edges);
      if (s.referral_edges) {
        try {
          const auto info = InformationNetwork::from_edges(n, *s.information_edges);
          const auto bad =
              validate_against_information(ReferralNetwork::from_edges(n, *s.referral_edges), info);
          for (const auto& v : bad) {
            issues.add("referral_edges", "customer " + std::to_string(v.referrer + 1) +
                                             " recommended customer " +
                                             std::to_string(v.recommended + 1) +
                                             " without an information link");
          }
        } catch (const ValidationError& e) {
          issues.absorb("information_edges", e);
        }
      }
    }
  }

  if (!root.contains("sequence") || !root["sequence"].is_array()) {
    issues.add("sequence", "must be an array of customer lists");
  } else {
    std::vector<IndexSet> parts;
    bool ok = true;
    const json& seq = root["sequence"];
    for (std::size_t j = 0; j < seq.size(); ++j) {
      const std::string where = index_path("sequence", j);
      if (!seq[j].is_array()) {
        issues.add(where, "must be an array of customer indices");
        ok = false;
        continue;
      }
      IndexSet part;
      for (const json& e : seq[j]) {
        if (auto c = read_customer(e, where, n, issues)) part.push_back(*c);
        else ok = false;
      }
      parts.push_back(std::move(part));
    }
    if (ok && n > 0) {
      try {
        s.sequence = CustomerSequence(std::move(parts), n);
      } catch (const ValidationError& e) {
        issues.absorb("sequence", e);
      }
    }
  }

  if (!issues.list.empty()) throw ValidationError(std::move(issues.list));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ValidationError& e) {
    std::vector<std::string> issues;
    for (const auto& s : e.issues()) issues.push_back(path.string() + ": " + s);
    throw ValidationError(std::move(issues));
  }
}

std::string dump_scenario(const Scenario& s) {
  json root;
  root["name"] = s.name;
  root["params"] = {{"alpha", std::vector<double>(s.params.alpha.begin(), s.params.alpha.end())},
                    {"beta", std::vector<double>(s.params.beta.begin(), s.params.beta.end())},
                    {"cost", s.params.cost},
                    {"eta", s.params.eta}};
  root["network_mode"] = std::string(to_string(s.network_mode));
  if (s.direct_g) {
    json rows = json::array();
    for (Index i = 0; i < s.direct_g->rows(); ++i) {
      const Vector row = s.direct_g->row(i).transpose();
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    root["direct_g"] = rows;
  }
  if (s.referral_edges) root["referral_edges"] = edges_to_json(*s.referral_edges);
  if (s.information_edges) root["information_edges"] = edges_to_json(*s.information_edges);
  json seq = json::array();
  for (const auto& part : s.sequence.parts()) {
    json p = json::array();
    for (Index c : part) p.push_back(c + 1);
    seq.push_back(p);
  }
  root["sequence"] = seq;
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write scenario file " + path.string());
  out << dump_scenario(s);
}

Scenario builtin_scenario(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  if (name == "star5" || name == "hier5") {
    s.params = MarketParams::uniform(5, 1.0, 5.0);
    s.network_mode = NetworkMode::direct;
    s.direct_g = (name == "star5" ? star5_network() : hierarchical5_network()).matrix();
    s.sequence = CustomerSequence({{0}, {1, 2, 3, 4}}, 5);
    return s;
  }
  if (name == "chain4") {
    s.params = MarketParams::uniform(4, 1.0, 5.0, 0.0, 1.0);
    s.network_mode = NetworkMode::referral;
    s.referral_edges = EdgeList{{0, 1}, {1, 2}, {2, 3}};
    s.sequence = CustomerSequence::singletons(4);
    return s;
  }
  throw ValidationError("unknown builtin scenario '" + std::string(name) +
                        "' (expected star5, hier5 or chain4)");
}

std::vector<std::string> builtin_names() { return {"star5", "hier5", "chain4"}; }

CustomerSequence parse_sequence(std::string_view text, Index n) {
  std::vector<IndexSet> parts;
  std::vector<std::string> issues;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t bar = std::min(text.find('|', start), text.size());
    std::string_view chunk = text.substr(start, bar - start);
    IndexSet part;
    std::size_t pos = 0;
    while (pos <= chunk.size()) {
      const std::size_t comma = std::min(chunk.find(',', pos), chunk.size());
      std::string_view tok = chunk.substr(pos, comma - pos);
      while (!tok.empty() && (tok.front() == ' ' || tok.front() == '{')) tok.remove_prefix(1);
      while (!tok.empty() && (tok.back() == ' ' || tok.back() == '}')) tok.remove_suffix(1);
      long long k = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), k);
      if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        issues.push_back("sequence token '" + std::string(tok) + "' is not a customer index");
      } else if (k < 1 || k > n) {
        issues.push_back("customer " + std::to_string(k) + " is outside 1.." + std::to_string(n));
      } else {
        part.push_back(static_cast<Index>(k - 1));
      }
      pos = comma + 1;
    }
    parts.push_back(std::move(part));
    start = bar + 1;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return CustomerSequence(std::move(parts), n);
}

std::string format_part(const IndexSet& part) {
  std::string out = "{";
  for (std::size_t a = 0; a < part.size(); ++a) {
    if (a) out += ",";
    out += std::to_string(part[a] + 1);
  }
  return out + "}";
}

std::string format_sequence(const CustomerSequence& seq) {
  std::string out;
  for (Index j = 0; j < seq.part_count(); ++j) {
    if (j) out += "|";
    out += format_part(seq.part(j));
  }
  return out;
}

}  // namespace netref::cli
