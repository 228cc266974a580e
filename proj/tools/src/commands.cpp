#include "netref/cli/commands.hpp"

#include "netref/equilibrium.hpp"
#include "netref/errors.hpp"
#include "netref/instances.hpp"
#include "netref/leader_value.hpp"
#include "netref/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace netref::cli {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid "-0.0000" for values that round to zero.
  std::string s = buf;
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string signed_fixed(double v, int digits) {
  std::string s = fixed(v, digits);
  return s[0] == '-' ? s : "+" + s;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

json to_json(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

json part_json(const IndexSet& part) {
  json out = json::array();
  for (Index c : part) out.push_back(c + 1);
  return out;
}

json sequence_json(const CustomerSequence& seq) {
  json out = json::array();
  for (const auto& p : seq.parts()) out.push_back(part_json(p));
  return out;
}

// Space-aligned text table; the first column is left-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        const std::string pad(width[c] - r[c].size(), ' ');
        if (c == 0) line += r[c] + pad;
        else line += "  " + pad + r[c];
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

int fail(int code, std::string_view kind, const std::vector<std::string>& issues, OutputFormat fmt,
         std::ostream& err) {
  if (fmt == OutputFormat::json) {
    err << json{{"error", kind}, {"issues", issues}}.dump() << "\n";
  } else {
    for (const auto& s : issues) err << kind << " error: " << s << "\n";
  }
  return code;
}

template <class F>
int guarded(OutputFormat fmt, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    return fail(kExitValidation, "validation", e.issues(), fmt, err);
  } catch (const AssumptionError& e) {
    return fail(kExitAssumption, "assumption", {e.what()}, fmt, err);
  } catch (const ConvergenceError& e) {
    return fail(kExitGap, "convergence", {e.what()}, fmt, err);
  }
}

void render_outcome(const Scenario& s, const EquilibriumOutcome& o, const CustomerSequence& seq,
                    OutputFormat fmt, std::ostream& out) {
  const Index n = o.x.size();
  switch (fmt) {
    case OutputFormat::table: {
      out << "scenario " << s.name << "  mode " << to_string(o.mode) << "  sequence "
          << format_sequence(seq) << "\n";
      TextTable t({"customer", "x", "p"});
      for (Index i = 0; i < n; ++i) t.add({std::to_string(i + 1), fixed(o.x(i), 6), fixed(o.p(i), 6)});
      t.add({"profit", fixed(o.profit, 6), ""});
      t.print(out);
      break;
    }
    case OutputFormat::json:
      out << json{{"scenario", s.name},
                  {"mode", to_string(o.mode)},
                  {"sequence", sequence_json(seq)},
                  {"x", to_json(o.x)},
                  {"p", to_json(o.p)},
                  {"profit", o.profit}}
                 .dump(2)
          << "\n";
      break;
    case OutputFormat::csv:
      out << "quantity,customer,value\n";
      for (Index i = 0; i < n; ++i) out << "x," << i + 1 << "," << full(o.x(i)) << "\n";
      for (Index i = 0; i < n; ++i) out << "p," << i + 1 << "," << full(o.p(i)) << "\n";
      out << "profit,," << full(o.profit) << "\n";
      break;
  }
}

void render_values(const Scenario& s, const LeaderValueReport& r, const CustomerSequence& seq,
                   OutputFormat fmt, std::ostream& out) {
  switch (fmt) {
    case OutputFormat::table: {
      out << "scenario " << s.name << "  sequence " << format_sequence(seq) << "\n";
      TextTable t({"part", "customers", "value"});
      for (const auto& v : r.values) {
        t.add({std::to_string(v.part + 1), format_part(v.customers), fixed(v.value, 4)});
      }
      t.print(out);
      out << "sequential profit     " << fixed(r.sequential_profit, 4) << "\n"
          << "simultaneous profit   " << fixed(r.merged_profit, 4) << "\n"
          << "telescoping residual  " << sci(r.telescoping_residual) << "\n";
      break;
    }
    case OutputFormat::json: {
      json values = json::array();
      for (const auto& v : r.values) {
        values.push_back({{"part", v.part + 1}, {"customers", part_json(v.customers)}, {"value", v.value}});
      }
      out << json{{"scenario", s.name},
                  {"sequence", sequence_json(seq)},
                  {"values", values},
                  {"sequential_profit", r.sequential_profit},
                  {"simultaneous_profit", r.merged_profit},
                  {"telescoping_residual", r.telescoping_residual},
                  {"warnings", r.warnings}}
                 .dump(2)
          << "\n";
      break;
    }
    case OutputFormat::csv:
      out << "quantity,part_index,customers,value\n";
      for (const auto& v : r.values) {
        out << "value," << v.part + 1 << ",\"" << format_part(v.customers) << "\"," << full(v.value)
            << "\n";
      }
      out << "sequential_profit,,," << full(r.sequential_profit) << "\n"
          << "simultaneous_profit,,," << full(r.merged_profit) << "\n"
          << "telescoping_residual,,," << full(r.telescoping_residual) << "\n";
      break;
  }
  for (const auto& w : r.warnings) {
    if (fmt != OutputFormat::json) out << "warning: " << w << "\n";
  }
}

ReferralNetwork require_referral(const Scenario& s, std::string_view command) {
  if (s.network_mode != NetworkMode::referral) {
    throw ValidationError(std::string(command) + " needs a referral-mode scenario; '" + s.name +
                          "' is in direct mode");
  }
  return s.referral();
}

struct Table1Case {
  const char* sequence;
  double star_profit;
  std::vector<double> star_values;
  double hier_profit;
  std::vector<double> hier_values;
};

const std::vector<Table1Case>& table1_reference() {
  static const std::vector<Table1Case> cases = {
      {"1,2,3,4,5", 0.3929, {}, 0.3800, {}},
      {"1|2,3,4,5", 0.4382, {0.0453}, 0.3924, {0.0124}},
      {"2|1,3,4,5", 0.3977, {0.0048}, 0.4049, {0.0249}},
      {"2|1,3|4,5", 0.4189, {0.0048, 0.0212}, 0.4049, {0.0249, 0.0}},
      {"2|4,5|1,3", 0.4067, {0.0048, 0.0090}, 0.4049, {0.0249, 0.0}},
      {"1,2|3,4,5", 0.4250, {0.0321}, 0.4014, {0.0214}},
  };
  return cases;
}

std::vector<ReproductionCell> reproduce_table1() {
  std::vector<ReproductionCell> cells;
  for (const char* name : {"star5", "hier5"}) {
    const Scenario s = builtin_scenario(name);
    const ComprehensiveNetwork g = s.network();
    const bool star = std::string_view(name) == "star5";
    int case_no = 0;
    for (const auto& c : table1_reference()) {
      ++case_no;
      const CustomerSequence seq = parse_sequence(c.sequence, 5);
      const LeaderValueReport r = leading_values(g, seq, s.params);
      const auto& ref_values = star ? c.star_values : c.hier_values;
      const std::string row = std::to_string(case_no);
      for (std::size_t j = 0; j < ref_values.size(); ++j) {
        const auto& v = r.values[j];
        cells.push_back({name, row, "value(" + format_part(v.customers) + ")", v.value, ref_values[j]});
      }
      cells.push_back({name, row, "profit", r.sequential_profit, star ? c.star_profit : c.hier_profit});
    }
  }
  return cells;
}

std::vector<ReproductionCell> reproduce_table2() {
  const Scenario s = builtin_scenario("chain4");
  const NewcomerAnalysis a = newcomer_deltas(s.referral(), s.sequence, s.params, 3);
  const std::vector<double> before = {0.0038, 0.0057, 0.0056, 0.0};
  const std::vector<double> after = {0.0038, 0.0058, 0.0063, 0.0057, 0.0};
  const std::vector<double> increase = {0.0000, 0.0001, 0.0007, 0.0057};

  std::vector<ReproductionCell> cells;
  for (std::size_t j = 0; j < before.size(); ++j) {
    cells.push_back({"chain4", "A", "value({" + std::to_string(j + 1) + "})",
                     a.before.values[j].value, before[j]});
  }
  for (std::size_t j = 0; j < after.size(); ++j) {
    cells.push_back({"chain4", "B", "value({" + std::to_string(j + 1) + "})",
                     a.after.values[j].value, after[j]});
  }
  for (std::size_t j = 0; j < increase.size(); ++j) {
    cells.push_back({"chain4", "increase", "delta({" + std::to_string(j + 1) + "})",
                     a.deltas[j].delta, increase[j]});
  }
  return cells;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "table") return OutputFormat::table;
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw ValidationError("unknown format '" + std::string(name) + "' (expected table, json or csv)");
}

SolveMode parse_solve_mode(std::string_view name) {
  if (name == "simultaneous") return SolveMode::simultaneous;
  if (name == "sequential") return SolveMode::sequential;
  if (name == "basic") return SolveMode::basic;
  throw ValidationError("unknown mode '" + std::string(name) +
                        "' (expected simultaneous, sequential or basic)");
}

double ReproductionCell::gap() const { return std::abs(computed - reference); }

int cmd_solve(const Scenario& s, SolveMode mode, OutputFormat fmt, std::ostream& out,
              std::ostream& err) {
  return guarded(fmt, err, [&] {
    const ComprehensiveNetwork g = s.network();
    EquilibriumOutcome o;
    CustomerSequence seq = s.sequence;
    switch (mode) {
      case SolveMode::simultaneous:
        seq = CustomerSequence::simultaneous(s.size());
        o = solve_simultaneous(g, s.params);
        break;
      case SolveMode::sequential:
        o = solve_sequential(g, s.sequence, s.params);
        break;
      case SolveMode::basic:
        if (s.sequence.part_count() != 2) {
          throw ValidationError("basic mode needs a two-part sequence, got " +
                                std::to_string(s.sequence.part_count()) + " parts");
        }
        o = solve_basic_direct(g, s.sequence.part(0), s.sequence.part(1), s.params);
        break;
    }
    render_outcome(s, o, seq, fmt, out);
    return kExitOk;
  });
}

int cmd_values(const Scenario& s, OutputFormat fmt, std::ostream& out, std::ostream& err) {
  return guarded(fmt, err, [&] {
    const LeaderValueReport r = leading_values(s.network(), s.sequence, s.params);
    render_values(s, r, s.sequence, fmt, out);
    return kExitOk;
  });
}

int cmd_newcomer(const Scenario& s, long long referrer, OutputFormat fmt, std::ostream& out,
                 std::ostream& err) {
  return guarded(fmt, err, [&] {
    const ReferralNetwork referral = require_referral(s, "newcomer");
    if (referrer < 1 || referrer > s.size()) {
      throw ValidationError("referrer " + std::to_string(referrer) + " is outside 1.." +
                            std::to_string(s.size()));
    }
    const NewcomerAnalysis a =
        newcomer_deltas(referral, s.sequence, s.params, static_cast<Index>(referrer - 1));
    const RewardAllocation rewards = allocate_rewards(a);

    switch (fmt) {
      case OutputFormat::table: {
        out << "scenario " << s.name << "  newcomer " << a.extension.newcomer + 1
            << " recommended by " << referrer << "\n";
        TextTable t({"part", "customers", "before", "after", "delta", "reward"});
        for (std::size_t j = 0; j < a.deltas.size(); ++j) {
          const auto& d = a.deltas[j];
          t.add({std::to_string(d.part + 1), format_part(s.sequence.part(d.part)),
                 fixed(d.value_before, 4), fixed(d.value_after, 4), signed_fixed(d.delta, 4),
                 fixed(rewards.shares[j].amount, 4)});
        }
        t.print(out);
        out << "profit increase  " << fixed(a.profit_increase, 4) << "\n"
            << "distributed      " << fixed(rewards.distributed, 4) << " (" << rewards.policy
            << ")\n";
        break;
      }
      case OutputFormat::json: {
        json parts = json::array();
        for (std::size_t j = 0; j < a.deltas.size(); ++j) {
          const auto& d = a.deltas[j];
          parts.push_back({{"part", d.part + 1},
                           {"customers", part_json(s.sequence.part(d.part))},
                           {"value_before", d.value_before},
                           {"value_after", d.value_after},
                           {"delta", d.delta},
                           {"reward", rewards.shares[j].amount}});
        }
        out << json{{"scenario", s.name},
                    {"referrer", referrer},
                    {"newcomer", a.extension.newcomer + 1},
                    {"parts", parts},
                    {"profit_increase", a.profit_increase},
                    {"budget", rewards.budget},
                    {"distributed", rewards.distributed},
                    {"policy", rewards.policy}}
                   .dump(2)
            << "\n";
        break;
      }
      case OutputFormat::csv:
        out << "quantity,part_index,value\n";
        for (std::size_t j = 0; j < a.deltas.size(); ++j) {
          const auto& d = a.deltas[j];
          out << "value_before," << d.part + 1 << "," << full(d.value_before) << "\n"
              << "value_after," << d.part + 1 << "," << full(d.value_after) << "\n"
              << "delta," << d.part + 1 << "," << full(d.delta) << "\n"
              << "reward," << d.part + 1 << "," << full(rewards.shares[j].amount) << "\n";
        }
        out << "profit_increase,," << full(a.profit_increase) << "\n"
            << "distributed,," << full(rewards.distributed) << "\n";
        break;
    }
    return kExitOk;
  });
}

std::vector<double> parse_eta_grid(std::string_view spec) {
  std::vector<double> fields;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t colon = std::min(spec.find(':', start), spec.size());
    const std::string tok(spec.substr(start, colon - start));
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() ||
        !std::isfinite(v)) {
      throw ValidationError("eta grid '" + std::string(spec) + "': '" + tok + "' is not a number");
    }
    fields.push_back(v);
    start = colon + 1;
  }
  if (fields.size() == 1) fields = {fields[0], fields[0], 1.0};
  if (fields.size() != 3) {
    throw ValidationError("eta grid '" + std::string(spec) + "' must be a:b:step");
  }
  const double a = fields[0], b = fields[1], step = fields[2];
  if (!(step > 0.0)) throw ValidationError("eta grid step must be positive");
  if (a > b) throw ValidationError("eta grid '" + std::string(spec) + "' is empty");
  if (a < 0.0) throw ValidationError("eta grid '" + std::string(spec) + "' contains negative eta");
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("eta grid has more than 100000 points");
  std::vector<double> grid;
  for (long long i = 0; i < count; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

int cmd_sweep_eta(const Scenario& s, std::string_view grid_spec, OutputFormat fmt,
                  std::ostream& out, std::ostream& err) {
  return guarded(fmt, err, [&] {
    const ReferralNetwork referral = require_referral(s, "sweep-eta");
    const std::vector<double> grid = parse_eta_grid(grid_spec);
    const auto points = eta_sweep(referral, s.sequence, s.params, grid);

    for (const auto& pt : points) {
      if (!pt.report) fail(0, "assumption", {"eta " + full(pt.eta) + ": " + pt.error}, fmt, err);
    }
    switch (fmt) {
      case OutputFormat::table: {
        TextTable t({"eta", "part_index", "value"});
        for (const auto& pt : points) {
          if (!pt.report) continue;
          for (const auto& v : pt.report->values) {
            t.add({fixed(pt.eta, 4), std::to_string(v.part + 1), fixed(v.value, 6)});
          }
        }
        t.print(out);
        break;
      }
      case OutputFormat::json: {
        json rows = json::array();
        for (const auto& pt : points) {
          json row = {{"eta", pt.eta}};
          if (pt.report) {
            json values = json::array();
            for (const auto& v : pt.report->values) values.push_back(v.value);
            row["values"] = values;
          } else {
            row["error"] = pt.error;
          }
          rows.push_back(row);
        }
        out << json{{"scenario", s.name}, {"points", rows}}.dump(2) << "\n";
        break;
      }
      case OutputFormat::csv:
        out << "eta,part_index,value\n";
        for (const auto& pt : points) {
          if (!pt.report) continue;
          for (const auto& v : pt.report->values) {
            out << full(pt.eta) << "," << v.part + 1 << "," << full(v.value) << "\n";
          }
        }
        break;
    }
    return kExitOk;
  });
}

std::vector<ReproductionCell> reproduce_table(int table) {
  if (table == 1) return reproduce_table1();
  if (table == 2) return reproduce_table2();
  throw ValidationError("unknown table " + std::to_string(table) + " (expected 1 or 2)");
}

int cmd_reproduce(int table, OutputFormat fmt, std::ostream& out, std::ostream& err) {
  return guarded(fmt, err, [&] {
    const auto cells = reproduce_table(table);
    bool ok = true;
    for (const auto& c : cells) ok = ok && c.gap() <= kReproduceTol;

    switch (fmt) {
      case OutputFormat::table: {
        TextTable t({"network", table == 1 ? "case" : "panel", "cell", "computed", "reference", "|gap|"});
        for (const auto& c : cells) {
          t.add({c.network, c.row, c.cell, fixed(c.computed, 6), fixed(c.reference, 4), sci(c.gap())});
        }
        t.print(out);
        out << (ok ? "all cells within " : "some cells exceed ") << sci(kReproduceTol) << "\n";
        break;
      }
      case OutputFormat::json: {
        json rows = json::array();
        for (const auto& c : cells) {
          rows.push_back({{"network", c.network},
                          {"row", c.row},
                          {"cell", c.cell},
                          {"computed", c.computed},
                          {"reference", c.reference},
                          {"gap", c.gap()}});
        }
        out << json{{"table", table}, {"cells", rows}, {"pass", ok}}.dump(2) << "\n";
        break;
      }
      case OutputFormat::csv:
        out << "network,row,cell,computed,reference,gap\n";
        for (const auto& c : cells) {
          out << c.network << "," << c.row << ",\"" << c.cell << "\"," << full(c.computed) << ","
              << full(c.reference) << "," << full(c.gap()) << "\n";
        }
        break;
    }
    if (!ok) err << "reproduction gap exceeds " << sci(kReproduceTol) << "\n";
    return ok ? kExitOk : kExitGap;
  });
}

int cmd_oracle_check(const std::optional<Scenario>& scenario, std::optional<std::uint64_t> seed,
                     OutputFormat fmt, std::ostream& out, std::ostream& err) {
  return guarded(fmt, err, [&] {
    std::string name;
    std::optional<ComprehensiveNetwork> g;
    std::optional<CustomerSequence> seq;
    MarketParams params;
    if (scenario) {
      name = scenario->name;
      if (scenario->size() > kOracleMaxCustomers) {
        throw ValidationError("oracle-check handles at most " + std::to_string(kOracleMaxCustomers) +
                              " customers; scenario '" + name + "' has " +
                              std::to_string(scenario->size()));
      }
      if (scenario->sequence.part_count() > 2) {
        throw ValidationError("oracle-check handles at most two parts; scenario '" + name +
                              "' has " + std::to_string(scenario->sequence.part_count()));
      }
      g = scenario->network();
      seq = scenario->sequence;
      params = scenario->params;
    } else {
      if (!seed) throw ValidationError("oracle-check needs a scenario or --seed");
      std::mt19937_64 rng(*seed);
      InstanceSpec spec;
      spec.min_customers = spec.max_customers = 4;
      spec.parts = 2;
      RandomInstance inst = random_instance(rng, spec);
      name = "random(seed=" + std::to_string(*seed) + ")";
      g = std::move(inst.network);
      seq = std::move(inst.sequence);
      params = std::move(inst.params);
    }

    const OracleReport r = oracle_compare(*g, *seq, params);
    const bool pass = within_thresholds(r);
    const Index n = r.x_oracle.size();
    switch (fmt) {
      case OutputFormat::table: {
        out << "oracle check " << name << "  sequence " << format_sequence(*seq) << "\n";
        TextTable t({"customer", "x_oracle", "x_closed", "p_oracle", "p_closed"});
        for (Index i = 0; i < n; ++i) {
          t.add({std::to_string(i + 1), fixed(r.x_oracle(i), 6), fixed(r.closed_form.x(i), 6),
                 fixed(r.p_oracle(i), 6), fixed(r.closed_form.p(i), 6)});
        }
        t.print(out);
        out << "profit oracle          " << fixed(r.profit_oracle, 6) << "\n"
            << "profit closed form     " << fixed(r.closed_form.profit, 6) << "\n"
            << "profit gap             " << sci(r.profit_gap) << "\n"
            << "max gap x              " << sci(r.max_abs_gap_x) << "\n"
            << "max gap p              " << sci(r.max_abs_gap_p) << "\n"
            << "closed-form prices gap "
            << sci(std::abs(r.profit_at_closed_form_prices - r.closed_form.profit)) << "\n"
            << "evaluations            " << r.evaluations << "\n"
            << "result                 " << (pass ? "pass" : "FAIL") << "\n";
        for (const auto& w : r.warnings) out << "warning: " << w << "\n";
        break;
      }
      case OutputFormat::json:
        out << json{{"instance", name},
                    {"sequence", sequence_json(*seq)},
                    {"x_oracle", to_json(r.x_oracle)},
                    {"x_closed", to_json(r.closed_form.x)},
                    {"p_oracle", to_json(r.p_oracle)},
                    {"p_closed", to_json(r.closed_form.p)},
                    {"profit_oracle", r.profit_oracle},
                    {"profit_closed", r.closed_form.profit},
                    {"profit_gap", r.profit_gap},
                    {"max_abs_gap_x", r.max_abs_gap_x},
                    {"max_abs_gap_p", r.max_abs_gap_p},
                    {"profit_at_closed_form_prices", r.profit_at_closed_form_prices},
                    {"evaluations", r.evaluations},
                    {"converged", r.converged},
                    {"pass", pass},
                    {"warnings", r.warnings}}
                   .dump(2)
            << "\n";
        break;
      case OutputFormat::csv:
        out << "quantity,customer,value\n";
        for (Index i = 0; i < n; ++i) {
          out << "x_oracle," << i + 1 << "," << full(r.x_oracle(i)) << "\n"
              << "x_closed," << i + 1 << "," << full(r.closed_form.x(i)) << "\n"
              << "p_oracle," << i + 1 << "," << full(r.p_oracle(i)) << "\n"
              << "p_closed," << i + 1 << "," << full(r.closed_form.p(i)) << "\n";
        }
        out << "profit_oracle,," << full(r.profit_oracle) << "\n"
            << "profit_closed,," << full(r.closed_form.profit) << "\n"
            << "profit_gap,," << full(r.profit_gap) << "\n"
            << "max_abs_gap_x,," << full(r.max_abs_gap_x) << "\n"
            << "max_abs_gap_p,," << full(r.max_abs_gap_p) << "\n"
            << "pass,," << (pass ? 1 : 0) << "\n";
        break;
    }
    if (!pass) err << "oracle gap exceeds thresholds\n";
    return pass ? kExitOk : kExitGap;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal pricing and leading-customer values on referral networks", "netref"};
  app.require_subcommand(1);

  struct Source {
    std::string scenario;
    std::string builtin;
    std::string sequence;
    std::optional<double> eta;
  };
  Source src;
  std::string format = "table";
  std::string mode = "sequential";
  long long referrer = 0;
  std::string grid = "0:2:0.25";
  std::optional<std::uint64_t> seed;
  int table = 0;

  const std::vector<std::string> formats = {"table", "json", "csv"};
  auto add_source = [&](CLI::App* sub) {
    auto* file = sub->add_option("--scenario", src.scenario, "Scenario JSON file");
    auto* builtin = sub->add_option("--builtin", src.builtin, "Built-in scenario")
                        ->check(CLI::IsMember(builtin_names()));
    file->excludes(builtin);
    sub->add_option("--sequence", src.sequence, "Override the sequence, e.g. \"1|2,3,4,5\"");
    sub->add_option("--eta", src.eta, "Override eta (referral mode)")->check(CLI::NonNegativeNumber);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  };

  auto* solve = app.add_subcommand("solve", "Equilibrium consumption, prices and profit");
  add_source(solve);
  add_format(solve);
  solve->add_option("--mode", mode, "simultaneous, sequential or basic")
      ->check(CLI::IsMember({"simultaneous", "sequential", "basic"}));

  auto* values = app.add_subcommand("values", "Leading values of every part");
  add_source(values);
  add_format(values);

  auto* newcomer = app.add_subcommand("newcomer", "Value changes and rewards for a newcomer");
  add_source(newcomer);
  add_format(newcomer);
  newcomer->add_option("--referrer", referrer, "Customer recommending the newcomer (1-based)")
      ->required();

  auto* sweep = app.add_subcommand("sweep-eta", "Leading values over a grid of eta");
  add_source(sweep);
  add_format(sweep);
  sweep->add_option("--eta-grid", grid, "Grid a:b:step");

  auto* reproduce = app.add_subcommand("reproduce", "Recompute a reference table");
  add_format(reproduce);
  reproduce->add_option("--table", table, "Table number (1 or 2)")->required();

  auto* oracle = app.add_subcommand("oracle-check", "Compare closed forms with the numeric oracle");
  add_source(oracle);
  add_format(oracle);
  oracle->add_option("--seed", seed, "Seed for a random 4-customer instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const OutputFormat fmt = parse_format(format);
  auto load = [&](bool required) -> std::optional<Scenario> {
    if (src.scenario.empty() && src.builtin.empty()) {
      if (required) throw ValidationError("one of --scenario or --builtin is required");
      return std::nullopt;
    }
    Scenario s = src.scenario.empty() ? builtin_scenario(src.builtin) : load_scenario(src.scenario);
    if (!src.sequence.empty()) s.sequence = parse_sequence(src.sequence, s.size());
    if (src.eta) {
      if (s.network_mode != NetworkMode::referral) {
        throw ValidationError("--eta applies to referral-mode scenarios only");
      }
      s.params.eta = *src.eta;
    }
    return s;
  };

  return guarded(fmt, err, [&] {
    if (solve->parsed()) return cmd_solve(*load(true), parse_solve_mode(mode), fmt, out, err);
    if (values->parsed()) return cmd_values(*load(true), fmt, out, err);
    if (newcomer->parsed()) return cmd_newcomer(*load(true), referrer, fmt, out, err);
    if (sweep->parsed()) return cmd_sweep_eta(*load(true), grid, fmt, out, err);
    if (reproduce->parsed()) return cmd_reproduce(table, fmt, out, err);
    return cmd_oracle_check(load(false), seed, fmt, out, err);
  });
}

}  // namespace netref::cli
