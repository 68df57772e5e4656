#include "chameleon/workbench.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "chameleon/random_maps.hpp"

namespace chameleon {

namespace {

constexpr long kDefaultEvalDepth = 2;
constexpr long kDefaultStatusDepth = 4;

Json strings(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

// Runs body, turning library errors into the report's error record.
void guarded(RunReport& r, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    r.error = error_to_json(e);
    r.exit_code = exit_code_for(e);
    r.passed = false;
  }
}

Json validate(const MarkovMap& mm) {
  const auto& P = mm.partition();
  const PLCircleMap& g = mm.g();
  std::vector<Rational> slopes;
  for (std::int64_t i = 0; i < P.size(); ++i) slopes.push_back(P.slope(i));
  std::vector<Rational> endpoints;
  for (std::int64_t i = 0; i < P.size(); ++i) endpoints.push_back(P.endpoint(i));
  Json breaks = Json::array();
  for (const auto& b : g.breakpoints()) {
    breaks.push_back({{"point", b.str()}, {"value", break_value(g, b, mm.base())}});
  }
  Json out{{"base", mm.base()},
           {"intervals", P.size()},
           {"endpoints", strings(endpoints)},
           {"slopes", strings(slopes)},
           {"breaks", breaks},
           {"sum_of_breaks", sum_of_breaks(g, mm.base())},
           {"classification", to_json(mm.report())},
           {"g", to_json(g)}};
  if (auto m = P.power_exponent()) {
    out["power_exponent"] = *m;
    out["stable_level"] = mm.stable_level();
  } else {
    out["power_exponent"] = nullptr;
    out["stable_level"] = nullptr;
  }
  return out;
}

Json sigma_report(const MarkovMap& mm) {
  if (mm.partition().power_exponent()) return to_json(sigma_table(mm));
  Json rows = Json::array();
  for (std::int64_t i = 0; i < mm.partition().size(); ++i) {
    const Rational& x = mm.partition().endpoint(i);
    const long value = sigma(mm.g(), x);
    rows.push_back({{"index", i}, {"point", x.str()}, {"value", value}});
  }
  return {{"base", mm.base()}, {"endpoints", rows}};
}

Json conjugator_eval(const MarkovMap& mm, long depth) {
  Conjugator c(mm);
  auto tables = c.level_tables(depth);
  Json rows = Json::array();
  const auto& top = tables.back();
  for (std::size_t j = 0; j < top.size(); ++j) {
    rows.push_back({{"q", mm.q_vertex(depth, static_cast<std::int64_t>(j)).str()},
                    {"h", top[j].str()}});
  }
  Json check = to_json(check_level_tables(mm.g(), tables));
  return {{"depth", depth}, {"vertices", rows}, {"conjugacy", check}};
}

Json equal_pairs_report(const MarkovMap& mm) {
  const bool eq = equal_pairs(mm.partition());
  Json out{{"equal_pairs", eq}};
  if (eq) out["h"] = to_json(extract_pl_h(Conjugator(mm)));
  return out;
}

// Checks of expected that are objects compare key by key.
bool matches(const Json& expected, const Json& actual) {
  if (!expected.is_object()) return expected == actual;
  for (auto it = expected.begin(); it != expected.end(); ++it) {
    if (!actual.contains(it.key()) || actual.at(it.key()) != it.value()) return false;
  }
  return true;
}

Json map_values(const Json& keys, const std::function<Rational(const Rational&)>& f) {
  Json out = Json::object();
  for (auto it = keys.begin(); it != keys.end(); ++it) {
    out[it.key()] = f(Rational::parse(it.key())).str();
  }
  return out;
}

std::string error_kind(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return std::string(to_string(e.kind()));
  }
  return "none";
}

std::pair<Json, bool> run_check(const std::string& kind, const Json& expected,
                                const MarkovMap& mm) {
  const PLCircleMap& g = mm.g();
  const auto& P = mm.partition();
  Conjugator c(mm);
  Json actual;
  if (kind == "slopes") {
    std::vector<Rational> s;
    for (std::int64_t i = 0; i < P.size(); ++i) s.push_back(P.slope(i));
    actual = strings(s);
  } else if (kind == "breaks") {
    actual = Json::object();
    for (const auto& b : g.breakpoints()) actual[b.str()] = break_value(g, b, 2);
  } else if (kind == "stable_level") {
    actual = mm.stable_level();
  } else if (kind == "sigma_table") {
    actual = sigma_table(mm).values();
  } else if (kind == "h_eval") {
    actual = map_values(expected, [&](const Rational& q) { return c.h_eval(q); });
  } else if (kind == "h_inverse") {
    actual = map_values(expected, [&](const Rational& x) { return c.h_inverse_eval(x); });
  } else if (kind == "extract_h") {
    PLCircleMap h = extract_pl_h(c);
    actual = map_values(expected, [&](const Rational& q) { return h(q); });
  } else if (kind == "check_conjugacy") {
    long d = expected.at("depth").get<long>();
    const bool holds = c.check_conjugacy(d).holds;
    actual = {{"depth", d}, {"holds", holds}};
  } else if (kind == "equal_pairs") {
    actual = equal_pairs(P);
  } else if (kind == "pl_criterion") {
    std::string outcome;
    std::string err = error_kind([&] { outcome = pl_criterion(mm).is_pl ? "PL" : "NotPL"; });
    actual = err == "none" ? outcome : err;
  } else if (kind == "dyadic_status") {
    long d = expected.at("depth").get<long>();
    auto s = c.dyadic_image_status(d);
    actual = {{"depth", d},
              {"subset_holds", s.subset_holds},
              {"counterexample", s.counterexample.has_value()}};
    if (s.counterexample) {
      actual["detector"] = to_string(s.counterexample->detector);
      actual["point"] = s.counterexample->point.str();
    }
  } else if (kind == "periodic_points") {
    const bool on_g = expected.at("map") == "g";
    const int q = expected.at("period").get<int>();
    auto pts = periodic_points(on_g ? g : PLCircleMap::nu(2), q);
    actual = {{"map", expected.at("map")}, {"period", q}, {"points", strings(pts)}};
    if (expected.contains("equals")) return {actual, actual["points"] == expected["equals"]};
    for (const auto& want : expected.at("contains")) {
      if (!std::binary_search(pts.begin(), pts.end(), Rational::parse(want.get<std::string>()))) {
        return {actual, false};
      }
    }
    return {actual, true};
  } else if (kind == "sigma_table_error") {
    actual = error_kind([&] { sigma_table(mm); });
  } else if (kind == "fixed_point_break") {
    actual = break_value(g, Rational(0), 2);
    return {actual, actual != 0};
  } else if (kind == "sum_of_breaks") {
    actual = sum_of_breaks(g, 2);
  } else if (kind == "cycle") {
    Rational start = Rational::parse(expected.at("start").get<std::string>());
    Orbit o = orbit(g, start, 1 << 16);
    std::vector<long> breaks;
    for (const auto& x : o.cycle) breaks.push_back(break_value(g, x, 2));
    actual = {{"start", start.str()}, {"cycle", strings(o.cycle)}, {"breaks", breaks}};
  } else if (kind == "break_value") {
    Rational x = Rational::parse(expected.at("point").get<std::string>());
    actual = {{"point", x.str()}, {"value", break_value(g, x, 2)}};
  } else if (kind == "sigma_error") {
    Rational x = Rational::parse(expected.at("point").get<std::string>());
    actual = {{"point", x.str()}, {"kind", error_kind([&] { sigma(g, x); })}};
  } else {
    throw Error(ErrorKind::ParseError, "unknown check '" + kind + "'");
  }
  return {actual, matches(expected, actual)};
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ParseError, path + " is not valid JSON");
  return j;
}

void text_lines(const Json& j, const std::string& prefix, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      const Json& v = it.value();
      bool flat = v.is_primitive() ||
                  (v.is_array() && std::all_of(v.begin(), v.end(),
                                               [](const Json& e) { return e.is_primitive(); }));
      if (flat) {
        out.push_back(key + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
      } else {
        text_lines(v, key, out);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      text_lines(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.push_back(prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()));
  }
}

}  // namespace

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::ParseError ? 1 : 2; }

Json RunReport::to_json() const {
  Json out{{"command", command}, {"inputs", inputs}, {"outputs", outputs},
           {"passed", passed}, {"exit_code", exit_code}};
  if (error) out["error"] = *error;
  return out;
}

std::string RunReport::to_text() const {
  std::vector<std::string> lines{command};
  text_lines(inputs, "input", lines);
  if (!outputs.empty()) text_lines(outputs, "", lines);
  if (error) {
    lines.push_back("error: " + error->at("kind").get<std::string>() + ": " +
                    error->at("message").get<std::string>());
  }
  lines.push_back(std::string("result: ") + (passed ? "ok" : "failed"));
  std::ostringstream os;
  for (const auto& l : lines) os << l << '\n';
  return os.str();
}

RunReport cmd_partition(const std::string& sub, const std::string& file,
                        std::optional<long> depth) {
  RunReport r;
  r.command = "partition " + sub;
  r.inputs = {{"file", file}};
  if (depth) r.inputs["depth"] = *depth;
  guarded(r, [&] {
    if (std::find(std::begin(kPartitionSubcommands), std::end(kPartitionSubcommands), sub) ==
        std::end(kPartitionSubcommands)) {
      throw Error(ErrorKind::ParseError, "unknown partition subcommand '" + sub + "'");
    }
    if (depth && *depth < 0) throw Error(ErrorKind::ParseError, "depth must be >= 0");
    AffineMarkovPartition P = load_partition(file);
    r.inputs["partition"] = chameleon::to_json(P);
    MarkovMap mm = MarkovMap::build(P);
    if (sub == "validate") {
      r.outputs = validate(mm);
    } else if (sub == "sigma") {
      r.outputs = sigma_report(mm);
    } else if (sub == "conjugator-eval") {
      r.outputs = conjugator_eval(mm, depth.value_or(kDefaultEvalDepth));
      r.passed = r.outputs["conjugacy"]["status"] == "holds";
      if (!r.passed) r.exit_code = 2;
    } else if (sub == "equal-pairs") {
      r.outputs = equal_pairs_report(mm);
    } else if (sub == "pl-criterion") {
      r.outputs = chameleon::to_json(pl_criterion(mm));
    } else {
      Conjugator c(mm);
      r.outputs = chameleon::to_json(c.dyadic_image_status(depth.value_or(kDefaultStatusDepth)));
    }
  });
  return r;
}

std::string default_examples_path() {
  return std::string(CHAMELEON_DATA_DIR) + "/paper_examples.json";
}

RunReport cmd_paper_examples(const std::vector<int>& ids, const std::string& data_path) {
  RunReport r;
  r.command = "paper-examples";
  r.inputs = {{"ids", ids}};
  guarded(r, [&] {
    Json data = load_json(data_path);
    if (!data.contains("examples") || !data["examples"].is_array()) {
      throw Error(ErrorKind::ParseError, data_path + " has no examples array");
    }
    std::vector<int> want = ids;
    if (want.empty()) {
      for (const auto& ex : data["examples"]) want.push_back(ex.at("id").get<int>());
    }
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    Json results = Json::array();
    long total = 0, good = 0;
    for (int id : want) {
      auto it = std::find_if(data["examples"].begin(), data["examples"].end(),
                             [&](const Json& ex) { return ex.at("id") == id; });
      if (it == data["examples"].end()) {
        throw Error(ErrorKind::ParseError, "no example with id " + std::to_string(id));
      }
      const Json& ex = *it;
      MarkovMap mm = MarkovMap::build(partition_from_json(ex.at("partition")));
      Json checks = Json::array();
      bool all = true;
      for (const auto& chk : ex.at("checks")) {
        const std::string kind = chk.at("check").get<std::string>();
        Json actual;
        bool ok = false;
        try {
          std::tie(actual, ok) = run_check(kind, chk.at("expected"), mm);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::ParseError) throw;
          actual = error_to_json(e);
        }
        ++total;
        if (ok) ++good;
        all = all && ok;
        const std::string cite = chk.value("cite", "");
        checks.push_back({{"check", kind},
                          {"cite", cite},
                          {"expected", chk.at("expected")},
                          {"actual", actual},
                          {"pass", ok}});
      }
      const std::string name = ex.value("name", "");
      results.push_back({{"id", id}, {"name", name}, {"passed", all},
                         {"checks", checks}});
    }
    r.outputs = {{"examples", results}, {"checks_passed", good}, {"checks_total", total}};
    r.passed = good == total;
    if (!r.passed) r.exit_code = 2;
  });
  return r;
}

RunReport cmd_roundtrip(std::uint64_t seed, long count) {
  RunReport r;
  r.command = "roundtrip";
  r.inputs = {{"seed", seed}, {"count", count}};
  guarded(r, [&] {
    if (count < 1) throw Error(ErrorKind::ParseError, "count must be >= 1");
    std::mt19937_64 rng(seed);
    long recovered = 0;
    std::size_t max_breaks = 0;
    long max_depth = 0;
    Json failures = Json::array();
    for (long i = 0; i < count; ++i) {
      PLCircleMap h = random_t21(rng);
      max_breaks = std::max(max_breaks, h.breakpoints().size());
      std::string reason;
      try {
        MarkovMap mm = MarkovMap::build(partition_from_conjugator(h));
        max_depth = std::max(max_depth, mm.power_exponent());
        CriterionVerdict v = pl_criterion(mm);
        if (!v.is_pl) {
          reason = "criterion returned NotPL";
        } else if (*v.h_bar != h) {
          reason = "rebuilt conjugator differs";
        } else if (!exact_log(*v.initial_slope, 2)) {
          reason = "initial slope " + v.initial_slope->str();
        }
      } catch (const Error& e) {
        reason = e.what();
      }
      if (reason.empty()) {
        ++recovered;
      } else {
        failures.push_back({{"trial", i}, {"h", chameleon::to_json(h)}, {"reason", reason}});
      }
    }
    r.outputs = {{"recovered", recovered},
                 {"max_break_count", max_breaks},
                 {"max_depth", max_depth},
                 {"failures", failures}};
    r.passed = recovered == count;
    if (!r.passed) r.exit_code = 2;
  });
  return r;
}

}  // namespace chameleon
