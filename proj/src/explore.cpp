#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

#include "atccs/reduction.hpp"
#include "parallel.hpp"

namespace atccs {

namespace {

// Name of the first cap a configuration exceeds, or empty.
std::string exceededCap(const Configuration& c, const Bounds& b) {
    if (b.maxMultiplicity >= 0)
        for (const auto& [n, k] : c.state.entries())
            if (k > b.maxMultiplicity) return "state multiplicity of " + n + " above " + std::to_string(b.maxMultiplicity);
    std::vector<Proc> stack{c.proc};
    while (!stack.empty()) {
        Proc p = stack.back();
        stack.pop_back();
        if (p->kind == ProcKind::Hide && b.maxMultiplicity >= 0 && p->count > b.maxMultiplicity)
            return "hidden multiplicity of " + p->name + " above " + std::to_string(b.maxMultiplicity);
        if (p->kind == ProcKind::Repl && b.maxReplUnfold >= 0 && p->count > b.maxReplUnfold)
            return "replication of " + p->name + " unfolded more than " + std::to_string(b.maxReplUnfold) + " times";
        if (p->left) stack.push_back(p->left);
        if (p->right) stack.push_back(p->right);
        for (const auto& br : p->branches) stack.push_back(br.cont);
    }
    return {};
}

}  // namespace

ReachGraph explore(const Configuration& c0, const Bounds& b) {
    CanonOptions co;
    co.flattenPar = b.canonical;
    co.compactBlocks = b.canonical;
    co.resetReplCounters = b.maxReplUnfold < 0;
    auto canon = [&](const Configuration& c) { return Configuration{canonicalize(c.proc, co), c.state}; };

    ReachGraph g;
    std::unordered_map<Configuration, int, ConfigHash> index;
    std::set<std::string> reasons;
    auto intern = [&](const Configuration& c, int depth) {
        auto [it, fresh] = index.emplace(c, static_cast<int>(g.nodes.size()));
        if (fresh) {
            if (g.nodes.size() >= b.maxNodes)
                throw ResourceExhausted("exploration exceeded " + std::to_string(b.maxNodes) + " configurations");
            g.nodes.push_back(c);
            g.depth.push_back(depth);
        }
        return std::pair<int, bool>{it->second, fresh};
    };

    intern(canon(c0), 0);
    std::vector<int> frontier{0};
    int depth = 0;
    while (!frontier.empty()) {
        std::vector<std::vector<Step>> succ(frontier.size());
        detail::parallelFor(frontier.size(), b.jobs, [&](std::size_t i) {
            succ[i] = stepConfig(g.nodes[static_cast<std::size_t>(frontier[i])]);
            for (auto& st : succ[i]) st.next = canon(st.next);
        });
        std::vector<int> nextFrontier;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            int from = frontier[i];
            if (succ[i].empty()) {
                g.deadlocks.push_back(from);
                continue;
            }
            if (b.maxSteps >= 0 && depth >= b.maxSteps) {
                g.truncated = true;
                reasons.insert("depth cap " + std::to_string(b.maxSteps) + " reached");
                continue;
            }
            std::set<std::pair<std::string, int>> seen;
            for (auto& st : succ[i]) {
                std::string why = exceededCap(st.next, b);
                if (!why.empty()) {
                    g.truncated = true;
                    reasons.insert(why);
                    continue;
                }
                auto [to, fresh] = intern(st.next, depth + 1);
                if (fresh) nextFrontier.push_back(to);
                if (seen.insert({st.rule, to}).second)
                    g.edges.push_back({from, st.rule, std::move(st.derivation), to});
            }
        }
        frontier = std::move(nextFrontier);
        ++depth;
    }
    std::sort(g.deadlocks.begin(), g.deadlocks.end());
    g.truncationReasons.assign(reasons.begin(), reasons.end());
    return g;
}

std::vector<Step> runScheduler(const Configuration& c0, std::uint64_t seed, int maxSteps) {
    std::mt19937_64 rng(seed);
    std::vector<Step> trace;
    Configuration cur = c0;
    for (int i = 0; i < maxSteps; ++i) {
        auto succ = stepConfig(cur);
        if (succ.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
        Step chosen = succ[pick(rng)];
        cur = chosen.next;
        trace.push_back(std::move(chosen));
    }
    return trace;
}

}  // namespace atccs
