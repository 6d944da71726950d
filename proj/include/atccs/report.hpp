#pragma once

// JSON and DOT renderings of terms, graphs and verdicts, and replay of
// serialized bisimulation witnesses.

#include <string>
#include <string_view>

#include <json.hpp>

#include "atccs/atomic.hpp"
#include "atccs/encodings.hpp"
#include "atccs/laws.hpp"
#include "atccs/lts.hpp"
#include "atccs/reduction.hpp"
#include "atccs/testing.hpp"

namespace atccs {

using Json = nlohmann::ordered_json;

Json toJson(const Expr& e);  // AST
Json toJson(const Proc& p);  // AST
Json toJson(const Configuration& c);
Json toJson(const Step& s);
Json toJson(const ReachGraph& g);
Json toJson(const Bounds& b);
Json toJson(const StateUniverse& u);
Json toJson(const Trace& s);
Json toJson(const Attack& a);
Json toJson(const BisimVerdict& v);
Json toJson(const EquivVerdict& v, const StateUniverse& u);
Json toJson(const MayVerdict& v);
Json toJson(const AltVerdict& v);
Json toJson(const LawResult& r);
Json toJson(const EncodingCheck& c);
// Every expanded state and edge of `lts`.
Json ltsToJson(const Lts& lts);

std::string toDot(const ReachGraph& g);
std::string ltsToDot(const Lts& lts);

// `tau`, `a!`, `{a,b}`.
Label parseLabel(std::string_view text);

struct ReplayResult {
    bool ok = false;
    std::string detail;
};
// Checks a serialized attack against `lts`: every attacker move exists and
// every defender answer available in `lts` is listed and, where a refutation
// is given, refuted in turn.  Terms are matched by their printed form.
ReplayResult replayAttack(const Json& attack, const Proc& p, const Proc& q, Lts& lts, GameMode mode);

}  // namespace atccs
