#pragma once

#include <string>

#include <json.hpp>

#include "chameleon/break_calculus.hpp"
#include "chameleon/conjugacy.hpp"
#include "chameleon/markov.hpp"
#include "chameleon/pl_map.hpp"

namespace chameleon {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const PLCircleMap& m);
Json to_json(const PLLineMap& m);
/// Throws ParseError on malformed records.
PLCircleMap circle_map_from_json(const Json& j);
PLLineMap line_map_from_json(const Json& j);

/// {"base": n, "lengths": [...]}
Json to_json(const AffineMarkovPartition& p);
AffineMarkovPartition partition_from_json(const Json& j);
/// Throws ParseError when the file is missing or malformed.
AffineMarkovPartition load_partition(const std::string& path);

Json to_json(const MembershipReport& r);
Json to_json(const SigmaTable& t);
Json to_json(const CriterionVerdict& v);
Json to_json(const ConjugacyCheck& c);
Json to_json(const DyadicImageStatus& s);
Json to_json(const Enclosure& e);

/// {"kind": ..., "message": ...} plus any data the error carries.
Json error_to_json(const Error& e);

}  // namespace chameleon
