#pragma once

// Traces, the trace preorder, observers and may testing, the alternative
// trace-based preorder, and the translation of normal forms to choices.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "atccs/lts.hpp"

namespace atccs {

// Output and nonempty block labels only.
using Trace = std::vector<Label>;

// The success name reserved for observers.
inline const Name kSuccess = "w";

std::string print(const Trace& s);  // "eps" for the empty trace
// Space separated: `a!` output, `{a,b}` block, bare `a` the singleton block;
// `eps` or an empty string is the empty trace.
Trace parseTrace(std::string_view text);

Trace cotrace(const Trace& s);

// Blocks replaced by singleton blocks in name order.
Trace expandBlocks(const Trace& s);

// Every trace below s, in expanded form.  Throws ResourceExhausted past `cap`.
std::set<Trace> traceDownSet(const Trace& s, std::size_t cap = 1000000);
bool tracePreorderRewrite(const Trace& smaller, const Trace& s, std::size_t cap = 1000000);

Proc observer(const Trace& s);

// True when the states reachable from `root` by weak transitions labelled
// `labels` include one that can output the success name.
bool weakTraceThenSuccess(Lts& lts, int root, const Trace& labels);
bool tracePreorderObserver(const Trace& smaller, const Trace& s, const Bounds& b = {});

struct MayVerdict {
    bool passes = false;
    bool truncated = false;  // only meaningful when !passes
    std::size_t configurations = 0;
};
MayVerdict mayPasses(const Proc& p, const Proc& o, const Bounds& b = {});

// Unguarded output on the success name, or success name in the state.
bool successEnabled(const Configuration& c);

struct TraceBounds {
    int maxLength = 6;
    Bounds lts = defaultGameBounds();
};

struct AltVerdict {
    enum class Kind { Holds, Fails, Unknown };
    Kind kind = Kind::Holds;
    std::optional<Trace> witness;  // Fails: a trace of p with nothing below it in q
    std::string reason;
    std::size_t tracesChecked = 0;
};
std::string kindName(AltVerdict::Kind k);

// Weak traces of p from the root of `lts`, grouped, up to `maxLength`
// actions.  `complete` is false when some trace of that length extends.
struct TraceSet {
    std::set<Trace> traces;
    bool complete = true;
    bool truncated = false;  // some state on a trace was cut off by bounds
};
TraceSet weakTraces(Lts& lts, int root, int maxLength);

AltVerdict altPreorder(const Proc& p, const Proc& q, const StateUniverse& env, const TraceBounds& b = {});

// A normal form as a guarded choice without transactions.
Proc ccsTranslation(const Expr& m);

}  // namespace atccs
