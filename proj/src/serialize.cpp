#include "chameleon/serialize.hpp"

#include <fstream>
#include <sstream>

namespace chameleon {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

long integer_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

Json pieces_json(const std::vector<AffinePiece>& pieces) {
  Json out = Json::array();
  for (const auto& p : pieces) {
    out.push_back({{"slope", to_json(p.slope)}, {"intercept", to_json(p.intercept)}});
  }
  return out;
}

std::vector<AffinePiece> pieces_from(const Json& j) {
  if (!j.is_array()) bad("pieces must be an array");
  std::vector<AffinePiece> out;
  for (const auto& p : j) {
    out.push_back({rational_from_json(field(p, "slope")),
                   rational_from_json(field(p, "intercept"))});
  }
  return out;
}

std::vector<Rational> rationals_from(const Json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

Json rationals_json(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

Json entry_json(const SigmaEntry& e) {
  return {{"index", e.vertex.index}, {"level", e.vertex.level},
          {"point", to_json(e.point)}, {"value", e.value}};
}

}  // namespace

Json to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) bad("rationals are written as strings such as \"3/8\"");
  return Rational::parse(j.get<std::string>());
}

Json to_json(const PLCircleMap& m) {
  return {{"space", "circle"},
          {"r", m.circumference()},
          {"degree", m.degree()},
          {"breakpoints", rationals_json(m.breakpoints())},
          {"pieces", pieces_json(m.pieces())}};
}

Json to_json(const PLLineMap& m) {
  return {{"space", "line"},
          {"orientation", m.reversing() ? "reversing" : "preserving"},
          {"breakpoints", rationals_json(m.breakpoints())},
          {"pieces", pieces_json(m.pieces())}};
}

PLCircleMap circle_map_from_json(const Json& j) {
  if (field(j, "space") != "circle") bad("expected a circle map");
  return PLCircleMap::from_normal_form(integer_field(j, "r"), integer_field(j, "degree"),
                                       rationals_from(field(j, "breakpoints")),
                                       pieces_from(field(j, "pieces")));
}

PLLineMap line_map_from_json(const Json& j) {
  if (field(j, "space") != "line") bad("expected a line map");
  const Json& o = field(j, "orientation");
  if (o != "preserving" && o != "reversing") bad("orientation must be preserving or reversing");
  return PLLineMap::from_normal_form(o == "reversing", rationals_from(field(j, "breakpoints")),
                                     pieces_from(field(j, "pieces")));
}

Json to_json(const AffineMarkovPartition& p) {
  return {{"base", p.base()}, {"lengths", p.lengths()}};
}

AffineMarkovPartition partition_from_json(const Json& j) {
  const long n = integer_field(j, "base");
  const Json& L = field(j, "lengths");
  if (!L.is_array()) bad("lengths must be an array");
  std::vector<long> lengths;
  for (const auto& x : L) {
    if (!x.is_number_integer()) bad("lengths must be integers");
    lengths.push_back(x.get<long>());
  }
  try {
    return AffineMarkovPartition(n, std::move(lengths));
  } catch (const Error& e) {
    bad(e.what());
  }
}

AffineMarkovPartition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) bad(path + " is not valid JSON");
  return partition_from_json(j);
}

Json to_json(const MembershipReport& r) {
  static const char* names[] = {"piecewise_linear", "orientation_preserving",
                                "slopes_powers_of_n", "breaks_nadic", "preserves_nadics"};
  Json conds = Json::object();
  for (std::size_t i = 0; i < r.conditions.size(); ++i) conds[names[i]] = r.conditions[i];
  Json tags = Json::array();
  for (Family f : r.tags) tags.push_back(to_string(f));
  Json out{{"conditions", conds}, {"families", tags}};
  if (r.end_translations) {
    out["end_translations"] = {{"right", r.end_translations->first},
                               {"left", r.end_translations->second}};
  }
  if (r.d_n_value) out["d_n"] = *r.d_n_value;
  return out;
}

Json to_json(const SigmaTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) entries.push_back(entry_json(e));
  return {{"base", t.base}, {"stable_level", t.stable_level}, {"entries", entries}};
}

Json to_json(const CriterionVerdict& v) {
  Json out{{"outcome", v.is_pl ? "PL" : "NotPL"}};
  if (v.is_pl) {
    out["initial_slope"] = to_json(*v.initial_slope);
    out["h_bar"] = to_json(*v.h_bar);
  } else if (v.witness) {
    out["witness"] = {entry_json(v.witness->first), entry_json(v.witness->second)};
  }
  return out;
}

Json to_json(const ConjugacyCheck& c) {
  Json out{{"status", c.holds ? "holds" : "fails"}, {"depth", c.depth}};
  if (c.witness) {
    out["witness"] = {{"depth", c.witness->depth},
                      {"index", c.witness->index},
                      {"value", to_json(c.witness->value)},
                      {"image", to_json(c.witness->image)},
                      {"expected", to_json(c.witness->expected)}};
  }
  return out;
}

Json to_json(const DyadicImageStatus& s) {
  Json out{{"depth", s.depth}, {"subset_holds", s.subset_holds}};
  if (s.subset_witness) out["subset_witness"] = to_json(*s.subset_witness);
  if (s.counterexample) {
    const auto& c = *s.counterexample;
    Json ce{{"detector", to_string(c.detector)}, {"point", to_json(c.point)}};
    if (c.preimage) ce["preimage"] = to_json(*c.preimage);
    if (c.period) ce["period"] = *c.period;
    out["equality_counterexample"] = ce;
  } else {
    out["equality_counterexample"] = nullptr;
  }
  return out;
}

Json to_json(const Enclosure& e) { return {{"lo", to_json(e.lo)}, {"hi", to_json(e.hi)}}; }

Json error_to_json(const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  Json out{{"kind", std::string(to_string(e.kind()))}, {"message", msg}};
  if (auto* d = dynamic_cast<const DivergenceError*>(&e)) {
    out["cycle"] = rationals_json(d->cycle());
    out["cycle_breaks"] = d->cycle_breaks();
  }
  if (auto* b = dynamic_cast<const EnclosureBudgetExceeded*>(&e)) {
    out["best"] = to_json(b->best());
  }
  return out;
}

}  // namespace chameleon
