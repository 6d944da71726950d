#pragma once

// Source-to-source generators: choice and join patterns as atomic blocks,
// and the example systems (leader election, dining philosophers).

#include <map>
#include <set>
#include <string>
#include <vector>

#include "atccs/lts.hpp"
#include "atccs/term.hpp"

namespace atccs {

// Hands out `$k1`, `$k2`, `$r1`, ... ; every name is issued at most once.
class FreshSupply {
public:
    FreshSupply() = default;
    Name next(const std::string& stem);
    const std::set<Name>& issued() const { return issued_; }

private:
    std::map<std::string, int> counters_;
    std::set<Name> issued_;
};

struct JoinSpec {
    std::vector<std::pair<Polarity, Name>> pattern;
    Proc cont;
    bool replicated = false;
};

// Replaces every Choice node of p by its encoding.
Proc encodeChoices(const Proc& p, FreshSupply& fresh);

Proc encodeChoice(const std::vector<Branch>& branches, FreshSupply& fresh);
Proc encodeJoin(const JoinSpec& spec, FreshSupply& fresh);
// Linear patterns tried left to right; patterns with equal continuations
// share one trigger name.
Proc encodeJoinDefinition(const std::vector<JoinSpec>& patterns, FreshSupply& fresh);

Proc leaderElection(int n);
// The same protocol written with the choice operator.
Proc leaderElectionChoice(int n);
Name winName(int i);
Name looseName(int i);

// Four philosophers around four hidden chopsticks.
Proc diningPhilosophers();
Name chopstickName(int i);
Name eatName(int i);
Name thinkName(int i);

// Operational correspondence of an encoding against a reference step, from
// one start state.  `rule` names the reference rule (c-inp, c-out, c-pass,
// j-inp) or `stuck` when no reference step exists.
struct EncodingCheck {
    std::string rule;
    State start;
    bool ok = false;
    std::string detail;
};

// For every start state over the branch channels with counts <= k: the native
// step of the choice is matched by an encoding reduct that is weakly
// asynchronously bisimilar to the continuation, and every commit of the
// encoding selects the branch the native rules select.
std::vector<EncodingCheck> checkChoiceEncoding(const std::vector<Branch>& branches, int k = 1,
                                               const BisimBudget& budget = {});
// From σ ⊎ ReadL(δ) the encoding reaches a term bisimilar to the
// continuation over σ ⊎ WriteL(δ); from σ alone (when δ reads) it never
// commits.  δ is the pattern read as a log.
std::vector<EncodingCheck> checkJoinEncoding(const JoinSpec& spec, const State& sigma, const BisimBudget& budget = {});

}  // namespace atccs
