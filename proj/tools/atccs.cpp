// Command-line front end.  Exit codes: 0 pass or equivalent, 1 violated or
// inequivalent (with a witness), 2 unknown or bounds hit, 3 parse or usage
// error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "atccs/atomic.hpp"
#include "atccs/encodings.hpp"
#include "atccs/laws.hpp"
#include "atccs/lts.hpp"
#include "atccs/parser.hpp"
#include "atccs/reduction.hpp"
#include "atccs/report.hpp"
#include "atccs/testing.hpp"

using namespace atccs;

namespace {

constexpr int kPass = 0, kViolated = 1, kUnknown = 2, kUsage = 3;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::vector<std::string> inputs;
    std::vector<std::string> files;
    std::vector<std::string> names;
    std::optional<int> mult;
    std::optional<int> depth;
    std::optional<int> replBound;
    std::optional<int> compBound;
    std::optional<int> traceLen;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> maxNodes;
    std::string format = "text";
    int jobs = 1;
    std::string state;
    std::string replay;
    std::string law;
    int instances = 50;
    int steps = 100;
    int n = 2;
    bool expr = false;
    bool canonical = false;
    bool choice = false;
    bool replicated = false;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Positional terms first, then the contents of each -f file.
std::vector<std::string> termTexts(const Options& o, std::size_t want) {
    std::vector<std::string> out = o.inputs;
    for (const auto& f : o.files) out.push_back(readFile(f));
    if (out.size() != want)
        throw UsageError("expected " + std::to_string(want) + " term(s), got " + std::to_string(out.size()));
    return out;
}

State parseState(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t.front() == '{') {
        if (t.back() != '}') throw UsageError("unterminated state '" + text + "'");
        t = t.substr(1, t.size() - 2);
    }
    State s;
    std::istringstream parts(t);
    std::string n;
    while (std::getline(parts, n, ',')) {
        if (n.empty()) continue;
        if (!isValidName(n)) throw UsageError("invalid name '" + n + "' in state");
        s.add(n);
    }
    return s;
}

Bounds exploreBounds(const Options& o) {
    Bounds b;
    if (o.mult) b.maxMultiplicity = *o.mult;
    if (o.depth) b.maxSteps = *o.depth;
    if (o.replBound) b.maxReplUnfold = *o.replBound;
    if (o.maxNodes) b.maxNodes = *o.maxNodes;
    b.jobs = o.jobs;
    return b;
}

Bounds gameBounds(const Options& o) {
    Bounds b = defaultGameBounds();
    if (o.replBound) b.maxReplUnfold = *o.replBound;
    if (o.maxNodes) b.maxNodes = *o.maxNodes;
    if (o.mult) b.maxMultiplicity = std::max(b.maxMultiplicity, *o.mult);
    return b;
}

BisimBudget budget(const Options& o) {
    BisimBudget bb;
    bb.lts = gameBounds(o);
    if (o.compBound) bb.compensationCap = *o.compBound;
    return bb;
}

StateUniverse envFor(const Options& o, const std::vector<Proc>& terms) {
    if (!o.names.empty()) return StateUniverse({o.names.begin(), o.names.end()}, o.mult.value_or(2));
    return defaultEnv(terms, o.mult.value_or(2));
}

StateUniverse universeFor(const Options& o, const Expr& m, const Expr& n) {
    if (!o.names.empty() || o.mult) {
        std::set<Name> names(o.names.begin(), o.names.end());
        if (names.empty()) {
            names = exprNames(m);
            for (const auto& x : exprNames(n)) names.insert(x);
        }
        return StateUniverse(names, o.mult.value_or(2));
    }
    return autoUniverse(m, n);
}

bool json(const Options& o) { return o.format == "json"; }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::uint64_t requireSeed(const Options& o) {
    if (!o.seed) throw UsageError("this command is randomized; pass --seed");
    return *o.seed;
}

// ------------------------------------------------------------------- verbs

int cmdParse(const Options& o) {
    std::string text = termTexts(o, 1)[0];
    if (o.expr) {
        Expr e = parseExpr(text);
        if (json(o)) emit({{"ast", toJson(e)}, {"text", print(e)}});
        else std::cout << print(e) << "\n";
        return kPass;
    }
    Proc p = parse(text);
    if (json(o)) emit({{"ast", toJson(p)}, {"text", print(p)}});
    else std::cout << print(p) << "\n";
    return kPass;
}

int cmdPrint(const Options& o) {
    std::string text = termTexts(o, 1)[0];
    if (o.expr) {
        std::cout << print(parseExpr(text)) << "\n";
        return kPass;
    }
    Proc p = parse(text);
    std::cout << print(o.canonical ? canonicalize(p) : p) << "\n";
    return kPass;
}

int cmdStep(const Options& o) {
    std::vector<Configuration> history{{parse(termTexts(o, 1)[0]), parseState(o.state)}};
    std::string line;
    for (;;) {
        const Configuration& cur = history.back();
        std::cout << print(cur) << "\n";
        std::vector<Step> succ = stepConfig(cur);
        if (succ.empty()) std::cout << "  stuck\n";
        for (std::size_t i = 0; i < succ.size(); ++i) {
            std::cout << "  [" << i << "] " << succ[i].rule;
            if (succ[i].derivation.size() > 1) {
                std::cout << " (";
                for (std::size_t d = 0; d < succ[i].derivation.size(); ++d)
                    std::cout << (d ? " > " : "") << succ[i].derivation[d];
                std::cout << ")";
            }
            std::cout << "  " << print(succ[i].next) << "\n";
        }
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line) || line == "q") {
            std::cout << "\n";
            return kPass;
        }
        if (line == "u") {
            if (history.size() > 1) history.pop_back();
            else std::cout << "nothing to undo\n";
            continue;
        }
        try {
            std::size_t used = 0;
            long k = std::stol(line, &used);
            if (used != line.size() || k < 0 || static_cast<std::size_t>(k) >= succ.size()) throw std::out_of_range("");
            history.push_back(succ[static_cast<std::size_t>(k)].next);
        } catch (const std::exception&) {
            std::cout << "no step '" << line << "'; enter an index, u or q\n";
        }
    }
}

int cmdExplore(const Options& o) {
    Bounds b = exploreBounds(o);
    Configuration c0{parse(termTexts(o, 1)[0]), parseState(o.state)};
    ReachGraph g = explore(c0, b);
    if (o.format == "dot") {
        std::cout << toDot(g);
    } else if (json(o)) {
        Json j = toJson(g);
        j["bounds"] = toJson(b);
        emit(j);
    } else {
        std::cout << g.nodes.size() << " configurations, " << g.edges.size() << " steps\n";
        for (int d : g.deadlocks) std::cout << "terminal: " << print(g.nodes[static_cast<std::size_t>(d)]) << "\n";
        for (const auto& r : g.truncationReasons) std::cout << "truncated: " << r << "\n";
    }
    return g.truncated ? kUnknown : kPass;
}

int cmdRun(const Options& o) {
    std::uint64_t seed = requireSeed(o);
    Configuration c0{parse(termTexts(o, 1)[0]), parseState(o.state)};
    std::vector<Step> trace = runScheduler(c0, seed, o.steps);
    if (json(o)) {
        Json steps = Json::array();
        for (const auto& s : trace) steps.push_back(toJson(s));
        emit({{"initial", toJson(c0)}, {"seed", seed}, {"steps", steps}});
    } else {
        std::cout << print(c0) << "\n";
        for (const auto& s : trace) std::cout << "  -" << s.rule << "-> " << print(s.next) << "\n";
    }
    return kPass;
}

int cmdLts(const Options& o) {
    Proc p = parse(termTexts(o, 1)[0]);
    StateUniverse env = envFor(o, {p});
    Bounds b = gameBounds(o);
    std::unique_ptr<Lts> lts = buildLts(p, env, b);
    if (o.format == "dot") {
        std::cout << ltsToDot(*lts);
    } else if (json(o)) {
        Json j = ltsToJson(*lts);
        j["bounds"] = toJson(b);
        emit(j);
    } else {
        for (const auto& e : lts->edges())
            std::cout << print(lts->term(e.from)) << "  -" << e.label.str() << "->  " << print(lts->term(e.to)) << "\n";
        for (const auto& r : lts->truncationReasons()) std::cout << "truncated: " << r << "\n";
    }
    return lts->truncated() ? kUnknown : kPass;
}

int cmdBisim(const Options& o, GameMode mode) {
    auto texts = termTexts(o, 2);
    Proc p = parse(texts[0]), q = parse(texts[1]);
    StateUniverse env = envFor(o, {p, q});
    BisimBudget bb = budget(o);
    if (!o.replay.empty()) {
        Json report = Json::parse(readFile(o.replay));
        const Json& w = report.contains("witness") ? report.at("witness") : report;
        Lts lts(env, bb.lts);
        ReplayResult r = replayAttack(w, p, q, lts, mode);
        if (json(o)) emit({{"replayed", r.ok}, {"detail", r.detail}});
        else std::cout << (r.ok ? "witness replays" : "witness does not replay: " + r.detail) << "\n";
        return r.ok ? kViolated : kUnknown;
    }
    BisimVerdict v = mode == GameMode::WeakAsync ? weakAsyncBisim(p, q, env, bb) : weakBisim(p, q, env, bb);
    if (json(o)) {
        Json j = toJson(v);
        j["env"] = toJson(env);
        j["bounds"] = toJson(bb.lts);
        j["compensationCap"] = bb.compensationCap;
        emit(j);
    } else {
        std::cout << kindName(v.kind);
        if (v.witness) std::cout << ": " << (v.witness->onLeft ? "left" : "right") << " side moves " << v.witness->label.str()
                                 << " to " << print(v.witness->target);
        if (!v.reason.empty()) std::cout << ": " << v.reason;
        std::cout << "\n";
    }
    if (v.bisimilar()) return kPass;
    return v.distinguished() ? kViolated : kUnknown;
}

int cmdAequiv(const Options& o) {
    auto texts = termTexts(o, 2);
    Expr m = parseExpr(texts[0]), n = parseExpr(texts[1]);
    StateUniverse u = universeFor(o, m, n);
    if (!o.replay.empty()) {
        Json report = Json::parse(readFile(o.replay));
        if (report.at("witnessState").is_null()) throw UsageError("the report carries no witness state");
        State s = parseState(report.at("witnessState").get<std::string>());
        Outcome a = evalAtomic(m, s), b = evalAtomic(n, s);
        bool differs = a.committed != b.committed || (a.committed && !logEffectEq(a.log, b.log, s).equal);
        std::cout << (differs ? "witness replays" : "witness does not replay") << " at " << s.str() << "\n";
        return differs ? kViolated : kUnknown;
    }
    EquivVerdict v = atomicEquiv(m, n, u);
    if (json(o)) emit(toJson(v, u));
    else std::cout << (v.equivalent ? "equivalent" : "not equivalent" + (v.witness ? " at " + v.witness->str() : "")) << "\n";
    return v.equivalent ? kPass : kViolated;
}

int cmdApre(const Options& o) {
    auto texts = termTexts(o, 2);
    Expr m = parseExpr(texts[0]), n = parseExpr(texts[1]);
    StateUniverse u = universeFor(o, m, n);
    bool holds = atomicPreorder(m, n, u);
    if (json(o)) emit({{"holds", holds}, {"universe", toJson(u)}});
    else std::cout << (holds ? "holds" : "does not hold") << "\n";
    return holds ? kPass : kViolated;
}

int cmdNormalize(const Options& o) {
    Expr m = parseExpr(termTexts(o, 1)[0]);
    Expr nf = normalize(m);
    if (json(o)) emit({{"input", print(m)}, {"normalForm", print(nf)}, {"ast", toJson(nf)}});
    else std::cout << print(nf) << "\n";
    return kPass;
}

int cmdLaws(const Options& o) {
    LawOptions lo;
    if (!o.names.empty()) lo.names = o.names;
    if (o.mult) lo.k = *o.mult;
    if (o.depth) lo.depth = *o.depth;
    if (o.seed) lo.seed = *o.seed;
    lo.instances = o.instances;
    lo.budget = budget(o);
    std::vector<std::string> which = o.law.empty() ? lawNames() : std::vector<std::string>{o.law};
    bool failed = false, unknown = false;
    Json results = Json::array();
    for (const auto& name : which) {
        LawResult r = checkLaw(name, lo);
        failed = failed || r.passed + r.unknown < r.instances;
        unknown = unknown || r.unknown > 0;
        if (json(o)) {
            results.push_back(toJson(r));
            continue;
        }
        std::cout << name << ": " << r.passed << "/" << r.instances << (r.ok() ? " pass" : " FAIL") << "\n";
        if (r.failure) std::cout << "  " << r.failure->left << "  vs  " << r.failure->right << ": " << r.failure->detail << "\n";
    }
    if (json(o)) emit({{"laws", results}, {"names", lo.names}, {"k", lo.k}, {"seed", lo.seed}, {"bounds", toJson(lo.budget.lts)}});
    if (failed) return kViolated;
    return unknown ? kUnknown : kPass;
}

// `a` or `a?` reads, `a!` writes.
std::vector<std::pair<Polarity, Name>> parsePattern(const std::string& text) {
    std::vector<std::pair<Polarity, Name>> out;
    std::istringstream parts(text);
    std::string el;
    while (std::getline(parts, el, ',')) {
        Polarity pol = Polarity::In;
        if (!el.empty() && (el.back() == '!' || el.back() == '?')) {
            pol = el.back() == '!' ? Polarity::Out : Polarity::In;
            el.pop_back();
        }
        if (!isValidName(el)) throw UsageError("invalid pattern element '" + el + "'");
        out.emplace_back(pol, el);
    }
    if (out.empty()) throw UsageError("empty join pattern");
    return out;
}

int cmdEncode(const Options& o, const std::string& what) {
    FreshSupply fresh;
    Proc out;
    std::vector<std::string> texts = o.inputs;
    for (const auto& f : o.files) texts.push_back(readFile(f));
    if (what == "choice") {
        if (texts.size() != 1) throw UsageError("encode choice takes one term");
        out = encodeChoices(parse(texts[0]), fresh);
    } else if (what == "join") {
        if (texts.size() != 2) throw UsageError("encode join takes a pattern and a continuation");
        out = encodeJoin({parsePattern(texts[0]), parse(texts[1]), o.replicated}, fresh);
    } else if (what == "joindef") {
        if (texts.size() < 4 || texts.size() % 2) throw UsageError("encode joindef takes pattern/continuation pairs");
        std::vector<JoinSpec> specs;
        for (std::size_t i = 0; i < texts.size(); i += 2) specs.push_back({parsePattern(texts[i]), parse(texts[i + 1]), false});
        out = encodeJoinDefinition(specs, fresh);
    } else if (what == "leader") {
        out = o.choice ? leaderElectionChoice(o.n) : leaderElection(o.n);
    } else if (what == "philosophers") {
        out = diningPhilosophers();
    } else {
        throw UsageError("unknown encoding '" + what + "'");
    }
    if (json(o)) emit({{"text", print(out)}, {"ast", toJson(out)}});
    else std::cout << print(out) << "\n";
    return kPass;
}

int cmdMay(const Options& o) {
    auto texts = termTexts(o, 2);
    Proc p = parse(texts[0]), obs = parse(texts[1]);
    Bounds b = gameBounds(o);
    MayVerdict v = mayPasses(p, obs, b);
    if (json(o)) {
        Json j = toJson(v);
        j["bounds"] = toJson(b);
        emit(j);
    } else {
        std::cout << (v.passes ? "passes" : v.truncated ? "unknown: exploration truncated" : "fails") << "\n";
    }
    if (v.passes) return kPass;
    return v.truncated ? kUnknown : kViolated;
}

int cmdAlt(const Options& o) {
    auto texts = termTexts(o, 2);
    Proc p = parse(texts[0]), q = parse(texts[1]);
    TraceBounds tb;
    tb.lts = gameBounds(o);
    if (o.traceLen) tb.maxLength = *o.traceLen;
    StateUniverse env = envFor(o, {p, q});
    AltVerdict v = altPreorder(p, q, env, tb);
    if (json(o)) {
        Json j = toJson(v);
        j["env"] = toJson(env);
        j["traceLength"] = tb.maxLength;
        j["bounds"] = toJson(tb.lts);
        emit(j);
    } else {
        std::cout << kindName(v.kind);
        if (v.witness) std::cout << ": no trace of the second term below " << print(*v.witness);
        if (!v.reason.empty()) std::cout << ": " << v.reason;
        std::cout << "\n";
    }
    if (v.kind == AltVerdict::Kind::Holds) return kPass;
    return v.kind == AltVerdict::Kind::Fails ? kViolated : kUnknown;
}

int cmdTracePre(const Options& o) {
    auto texts = termTexts(o, 2);
    Trace smaller = parseTrace(texts[0]), larger = parseTrace(texts[1]);
    bool byRewrite = tracePreorderRewrite(smaller, larger);
    bool byObserver = tracePreorderObserver(smaller, larger);
    if (json(o)) emit({{"holds", byRewrite}, {"rewriting", byRewrite}, {"observer", byObserver}});
    else std::cout << (byRewrite ? "holds" : "does not hold") << (byRewrite == byObserver ? "" : " (observer check disagrees)") << "\n";
    if (byRewrite != byObserver) return kUnknown;
    return byRewrite ? kPass : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tools for processes with atomic transactions"};
    app.require_subcommand(1);
    Options o;
    std::string encodeWhat;

    auto common = [&](CLI::App* sub, const std::string& terms) {
        sub->add_option("terms", o.inputs, terms);
        sub->add_option("-f,--file", o.files, "read a term from a file (repeatable)");
        sub->add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--names", o.names, "environment names")->delimiter(',');
        sub->add_option("--mult", o.mult, "environment multiplicity");
        sub->add_option("--depth", o.depth, "exploration depth or expression depth");
        sub->add_option("--repl-bound", o.replBound, "firings per replicated input");
        sub->add_option("--comp-bound", o.compBound, "pending compensation outputs per name");
        sub->add_option("--trace-len", o.traceLen, "longest trace examined");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--max-nodes", o.maxNodes, "node cap");
        sub->add_option("--jobs", o.jobs, "worker threads for exploration");
    };

    struct Verb {
        const char* name;
        const char* help;
        const char* terms;
    };
    const std::vector<Verb> verbs{
        {"parse", "parse a process (or --expr expression) and print it", "term"},
        {"print", "print a term in canonical syntax", "term"},
        {"step", "step through reductions interactively", "term"},
        {"explore", "exhaustive bounded exploration", "term"},
        {"run", "random scheduler run", "term"},
        {"lts", "labelled transition system over an environment", "term"},
        {"bisim", "weak asynchronous bisimilarity", "two processes"},
        {"wbisim", "weak bisimilarity", "two processes"},
        {"aequiv", "atomic equivalence", "two expressions"},
        {"apre", "atomic preorder: the first is above the second", "two expressions"},
        {"normalize", "normal form of an expression", "expression"},
        {"laws", "check the algebraic laws", ""},
        {"encode", "choice, join, joindef, leader or philosophers", "kind followed by its inputs"},
        {"may", "does the process may-pass the observer", "process and observer"},
        {"alt", "trace-based preorder between two processes", "two processes"},
        {"trace-pre", "trace preorder: the first below the second", "two traces"},
    };
    for (const auto& v : verbs) {
        CLI::App* sub = app.add_subcommand(v.name, v.help);
        if (std::string(v.name) == "encode") {
            sub->add_option("kind", encodeWhat, "choice, join, joindef, leader or philosophers")->required();
            sub->add_option("--n", o.n, "leader election participants");
            sub->add_flag("--choice", o.choice, "leader election written with choice");
            sub->add_flag("--replicated", o.replicated, "replicated join");
        }
        common(sub, v.terms);
        if (std::string(v.name) == "parse" || std::string(v.name) == "print") sub->add_flag("--expr", o.expr, "the term is an expression");
        if (std::string(v.name) == "print") sub->add_flag("--canonical", o.canonical, "canonicalize first");
        if (std::string(v.name) == "step" || std::string(v.name) == "explore" || std::string(v.name) == "run")
            sub->add_option("--state", o.state, "initial state, e.g. {a,a,b}");
        if (std::string(v.name) == "run") sub->add_option("--steps", o.steps, "maximal number of steps");
        if (std::string(v.name) == "bisim" || std::string(v.name) == "wbisim" || std::string(v.name) == "aequiv")
            sub->add_option("--replay", o.replay, "replay the witness of a JSON report");
        if (std::string(v.name) == "laws") {
            sub->add_option("--law", o.law, "a single law");
            sub->add_option("--instances", o.instances, "random instances per atomic law");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        if (verb == "parse") return cmdParse(o);
        if (verb == "print") return cmdPrint(o);
        if (verb == "step") return cmdStep(o);
        if (verb == "explore") return cmdExplore(o);
        if (verb == "run") return cmdRun(o);
        if (verb == "lts") return cmdLts(o);
        if (verb == "bisim") return cmdBisim(o, GameMode::WeakAsync);
        if (verb == "wbisim") return cmdBisim(o, GameMode::Weak);
        if (verb == "aequiv") return cmdAequiv(o);
        if (verb == "apre") return cmdApre(o);
        if (verb == "normalize") return cmdNormalize(o);
        if (verb == "laws") return cmdLaws(o);
        if (verb == "encode") return cmdEncode(o, encodeWhat);
        if (verb == "may") return cmdMay(o);
        if (verb == "alt") return cmdAlt(o);
        if (verb == "trace-pre") return cmdTracePre(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceExhausted& e) {
        std::cerr << "bounds hit: " << e.what() << "\n";
        return kUnknown;
    } catch (const Json::exception& e) {
        std::cerr << "bad JSON: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
