#pragma once

// JSON encodings of the library's values, as emitted by the CLI.

#include <set>
#include <string>

#include <json.hpp>

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"
#include "clatter/peaks.hpp"
#include "clatter/rewriting.hpp"

namespace clatter {

using Json = nlohmann::ordered_json;

/// Array of position strings in canonical order.
Json to_json(const PositionSet& s);
PositionSet position_set_from_json(const Json& j);

/// {"skeleton": "...", "assignment": {"X1": "..."}}
Json to_json(const InductiveCluster& c);
InductiveCluster cluster_from_json(const Json& j,
                                   const std::set<std::string>& vars,
                                   Signature& sig);

/// {"source": "...", "redexes": [{"rule": "r1", "pos": "1.2"}]}
Json to_json(const MultiStep& m);
/// The redex list alone, as accepted for peak specifications.
Json redexes_to_json(const MultiStep& m);
MultiStep multistep_from_json(const Json& j, const TRS& trs,
                              const std::set<std::string>& vars);
/// Builds a step out of `source` from a redex list.
MultiStep multistep_from_redexes(const Term& source, const Json& redexes,
                                 const TRS& trs);

Json to_json(const Peak& p);
Json to_json(const CriticalityReport& r);
Json to_json(const CriticalPair& cp);
Json to_json(const JoinResult& r);

}  // namespace clatter
