#pragma once

// The algebraic laws of transactions as executable checks: atomic laws via
// atomicEquiv on random instances, process laws via weakAsyncBisim.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atccs/atomic.hpp"
#include "atccs/lts.hpp"

namespace atccs {

struct LawOptions {
    std::vector<Name> names{"a", "b", "c"};
    int k = 2;
    int instances = 50;
    int depth = 3;
    std::uint64_t seed = 1;
    BisimBudget budget{};
};

struct LawFailure {
    std::string left, right;
    std::string detail;
};

struct LawResult {
    std::string name;
    bool atomic = true;
    int instances = 0;
    int passed = 0;
    int unknown = 0;
    std::optional<LawFailure> failure;  // first failing instance
    bool ok() const { return passed == instances; }
};

// Seven atomic laws, then three process laws.
const std::vector<std::string>& lawNames();
// `perturbed` (end against retry) is accepted too; it is expected to fail.
LawResult checkLaw(const std::string& name, const LawOptions& opts = {});

}  // namespace atccs
