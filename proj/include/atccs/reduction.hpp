#pragma once

// Configuration semantics (P ; σ) and the small-step semantics of ongoing
// atomic blocks, plus bounded exhaustive exploration and a seeded scheduler.

#include <cstdint>
#include <string>
#include <vector>

#include "atccs/term.hpp"

namespace atccs {

struct Configuration {
    Proc proc;
    State state;
};

bool operator==(const Configuration& a, const Configuration& b);
int compare(const Configuration& a, const Configuration& b);
std::size_t hashConfig(const Configuration& c);

struct ConfigHash {
    std::size_t operator()(const Configuration& c) const { return hashConfig(c); }
};

// One derivation.  `rule` is the last rule applied (the root of the proof
// tree); `derivation` lists the rules from the root down to the axiom,
// including the ongoing-expression rules under atPass.
struct Step {
    std::string rule;
    std::vector<std::string> derivation;
    Configuration next;
};

struct OngoingStep {
    std::string rule;
    std::vector<std::string> derivation;
    Ongoing next;
};

// Successors of an ongoing block.  Terminal Running(end/retry) blocks have no
// successors here; the process rules atOk/atFail/atRe deal with them.
std::vector<OngoingStep> stepOngoing(const Ongoing& a);

std::vector<Step> stepConfig(const Configuration& c);

// Identification of configurations up to behaviour-preserving rewriting.
struct CanonOptions {
    bool flattenPar = true;      // Par is flattened, sorted, Nil dropped
    bool compactBlocks = true;   // captured states restricted to names the block reads
    bool resetReplCounters = false;
};
Proc canonicalize(const Proc& p, const CanonOptions& opts = {});

// Negative caps mean "unbounded".
struct Bounds {
    int maxMultiplicity = 4;   // per-name count in states and hide annotations
    int maxReplUnfold = 4;     // firings per replicated input
    int maxSteps = 10000;      // BFS depth
    std::size_t maxNodes = 2000000;  // hard cap, ResourceExhausted beyond it
    std::size_t maxSaturation = 20000000;  // cached tau-closure and weak-step entries
    int maxComponents = -1;    // parallel components of one state, -1 for no cap
    bool canonical = true;
    int jobs = 1;
};

struct GraphEdge {
    int from;
    std::string rule;
    std::vector<std::string> derivation;
    int to;
};

struct ReachGraph {
    std::vector<Configuration> nodes;  // nodes[0] is the initial configuration
    std::vector<GraphEdge> edges;
    bool truncated = false;
    std::vector<std::string> truncationReasons;
    std::vector<int> deadlocks;
    std::vector<int> depth;
};

ReachGraph explore(const Configuration& c0, const Bounds& b = {});

// Uniform random choice among the successors at each step.
std::vector<Step> runScheduler(const Configuration& c0, std::uint64_t seed, int maxSteps);

std::string print(const Configuration& c);

}  // namespace atccs
