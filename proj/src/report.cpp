#include "atccs/report.hpp"

#include <algorithm>
#include <sstream>

namespace atccs {

Json toJson(const Expr& e) {
    switch (e->kind) {
        case ExprKind::End:
            return {{"kind", "end"}};
        case ExprKind::Retry:
            return {{"kind", "retry"}};
        case ExprKind::Prefix:
            return {{"kind", e->act.isRead() ? "read" : "write"}, {"name", e->act.chan}, {"next", toJson(e->left)}};
        case ExprKind::OrElse:
            return {{"kind", "orElse"}, {"left", toJson(e->left)}, {"right", toJson(e->right)}};
    }
    return {};
}

Json toJson(const Proc& p) {
    auto shown = [](const Name& n) { return isFreshName(n) ? n.substr(1) : n; };
    switch (p->kind) {
        case ProcKind::Nil:
            return {{"kind", "nil"}};
        case ProcKind::Output:
            return {{"kind", "output"}, {"name", shown(p->name)}};
        case ProcKind::Input:
            return {{"kind", "input"}, {"name", shown(p->name)}, {"body", toJson(p->left)}};
        case ProcKind::Repl:
            return {{"kind", "replicated"}, {"name", shown(p->name)}, {"fired", p->count}, {"body", toJson(p->left)}};
        case ProcKind::Par:
            return {{"kind", "par"}, {"left", toJson(p->left)}, {"right", toJson(p->right)}};
        case ProcKind::Hide:
            return {{"kind", "hide"}, {"name", shown(p->name)}, {"count", p->count}, {"body", toJson(p->left)}};
        case ProcKind::Atomic:
            return {{"kind", "atomic"}, {"expr", toJson(p->expr)}};
        case ProcKind::Ongoing:
            return {{"kind", "ongoing"}, {"text", print(p)}, {"expr", toJson(p->expr)}};
        case ProcKind::Choice: {
            Json bs = Json::array();
            for (const auto& b : p->branches)
                bs.push_back({{"polarity", b.pol == Polarity::In ? "in" : "out"}, {"name", shown(b.chan)}, {"body", toJson(b.cont)}});
            return {{"kind", "choice"}, {"branches", bs}};
        }
    }
    return {};
}

Json toJson(const Configuration& c) { return {{"proc", print(c.proc)}, {"state", c.state.str()}}; }

Json toJson(const Step& s) {
    return {{"rule", s.rule}, {"derivation", s.derivation}, {"proc", print(s.next.proc)}, {"state", s.next.state.str()}};
}

Json toJson(const ReachGraph& g) {
    Json nodes = Json::array(), edges = Json::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        nodes.push_back({{"id", i}, {"proc", print(g.nodes[i].proc)}, {"state", g.nodes[i].state.str()}});
    for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"rule", e.rule}, {"to", e.to}});
    return {{"nodes", nodes},
            {"edges", edges},
            {"truncated", g.truncated},
            {"truncationReasons", g.truncationReasons},
            {"deadlocks", g.deadlocks}};
}

Json toJson(const Bounds& b) {
    return {{"maxMultiplicity", b.maxMultiplicity},
            {"maxReplUnfold", b.maxReplUnfold},
            {"maxSteps", b.maxSteps},
            {"maxNodes", b.maxNodes},
            {"maxSaturation", b.maxSaturation},
            {"maxComponents", b.maxComponents},
            {"canonical", b.canonical}};
}

Json toJson(const StateUniverse& u) { return {{"names", u.names()}, {"k", u.maxMultiplicity()}}; }

Json toJson(const Trace& s) {
    Json out = Json::array();
    for (const auto& l : s) out.push_back(l.str());
    return out;
}

Json toJson(const Attack& a) {
    Json defenses = Json::array();
    for (const auto& d : a.defenses) {
        Json j = {{"label", d.label.str()},
                  {"target", print(d.target)},
                  {"nextLeft", print(d.nextLeft)},
                  {"nextRight", print(d.nextRight)}};
        j["refutation"] = d.refutation ? toJson(*d.refutation) : Json();
        defenses.push_back(std::move(j));
    }
    return {{"left", print(a.left)},
            {"right", print(a.right)},
            {"side", a.onLeft ? "left" : "right"},
            {"label", a.label.str()},
            {"target", print(a.target)},
            {"defenses", defenses}};
}

Json toJson(const BisimVerdict& v) {
    Json j = {{"verdict", kindName(v.kind)}, {"pairsExplored", v.pairsExplored}};
    if (v.kind == BisimVerdict::Kind::Bisimilar) j["relationSize"] = v.relation.size();
    if (v.witness) j["witness"] = toJson(*v.witness);
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

Json toJson(const EquivVerdict& v, const StateUniverse& u) {
    Json j = {{"equivalent", v.equivalent}};
    j["witnessState"] = v.witness ? Json(v.witness->str()) : Json();
    if (!v.reason.empty()) j["reason"] = v.reason;
    j["universe"] = toJson(u);
    return j;
}

Json toJson(const MayVerdict& v) {
    return {{"passes", v.passes}, {"truncated", v.truncated}, {"configurations", v.configurations}};
}

Json toJson(const AltVerdict& v) {
    Json j = {{"verdict", kindName(v.kind)}, {"tracesChecked", v.tracesChecked}};
    j["witness"] = v.witness ? toJson(*v.witness) : Json();
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

Json toJson(const LawResult& r) {
    Json j = {{"law", r.name},
              {"kind", r.atomic ? "atomic" : "process"},
              {"instances", r.instances},
              {"passed", r.passed},
              {"unknown", r.unknown}};
    if (r.failure) j["failure"] = {{"left", r.failure->left}, {"right", r.failure->right}, {"detail", r.failure->detail}};
    return j;
}

Json toJson(const EncodingCheck& c) {
    return {{"rule", c.rule}, {"start", c.start.str()}, {"ok", c.ok}, {"detail", c.detail}};
}

Json ltsToJson(const Lts& lts) {
    Json states = Json::array(), edges = Json::array();
    for (std::size_t i = 0; i < lts.size(); ++i) states.push_back({{"id", i}, {"term", print(lts.term(static_cast<int>(i)))}});
    for (const auto& e : lts.edges()) edges.push_back({{"from", e.from}, {"label", e.label.str()}, {"to", e.to}});
    return {{"states", states},
            {"edges", edges},
            {"env", toJson(lts.env())},
            {"truncated", lts.truncated()},
            {"truncationReasons", lts.truncationReasons()}};
}

namespace {

std::string dotEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string toDot(const ReachGraph& g) {
    std::ostringstream out;
    out << "digraph reach {\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        out << "  n" << i << " [label=\"" << dotEscape(print(g.nodes[i])) << "\"];\n";
    for (const auto& e : g.edges) out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.rule << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string ltsToDot(const Lts& lts) {
    std::ostringstream out;
    out << "digraph lts {\n";
    for (std::size_t i = 0; i < lts.size(); ++i)
        out << "  s" << i << " [label=\"" << dotEscape(print(lts.term(static_cast<int>(i)))) << "\"];\n";
    for (const auto& e : lts.edges())
        out << "  s" << e.from << " -> s" << e.to << " [label=\"" << dotEscape(e.label.str()) << "\"];\n";
    out << "}\n";
    return out.str();
}

Label parseLabel(std::string_view text) {
    std::string t(text);
    if (t == "tau") return Label::tau();
    if (t.size() >= 2 && t.back() == '!' && isValidName(t.substr(0, t.size() - 1))) return Label::out(t.substr(0, t.size() - 1));
    if (t.size() >= 2 && t.front() == '{' && t.back() == '}') {
        std::string body = t.substr(1, t.size() - 2);
        // getline drops a trailing empty field; a block is never empty.
        if (body.empty() || body.back() == ',') throw Error("empty name in label " + t);
        Multiset m;
        std::istringstream parts(body);
        std::string n;
        while (std::getline(parts, n, ',')) {
            if (!isValidName(n)) throw Error("invalid name '" + n + "' in label " + t);
            m.add(n);
        }
        return Label::block(m);
    }
    throw Error("invalid label '" + t + "'");
}

namespace {

class Replayer {
public:
    Replayer(Lts& lts, GameMode mode) : lts_(lts), mode_(mode) {}

    ReplayResult run(const Json& a, int l, int r, int depth) {
        if (print(lts_.term(l)) != a.at("left").get<std::string>() || print(lts_.term(r)) != a.at("right").get<std::string>())
            return fail(depth, "the witness is for " + a.at("left").get<std::string>() + " against " +
                                   a.at("right").get<std::string>() + ", not " + print(lts_.term(l)) + " against " +
                                   print(lts_.term(r)));
        bool onLeft = a.at("side").get<std::string>() == "left";
        int att = onLeft ? l : r, def = onLeft ? r : l;
        Label lbl = parseLabel(a.at("label").get<std::string>());
        const std::string& target = a.at("target").get_ref<const std::string&>();
        int t = -1;
        for (const auto& [ml, mt] : lts_.successors(att))
            if (ml == lbl && print(lts_.term(mt)) == target) t = mt;
        if (t < 0) return fail(depth, "attacker move " + lbl.str() + " to " + target + " is not available");

        for (const auto& [gamma, d] : answers(lbl, def)) {
            const Json* found = nullptr;
            for (const auto& dj : a.at("defenses"))
                if (parseLabel(dj.at("label").get<std::string>()) == gamma && dj.at("target").get<std::string>() == print(lts_.term(d)))
                    found = &dj;
            if (!found) return fail(depth, "defender answer " + gamma.str() + " to " + print(lts_.term(d)) + " is not covered");
            if (found->at("refutation").is_null()) continue;
            int na = t, nd = d;
            if (mode_ == GameMode::WeakAsync && !lbl.isOut()) {
                na = withOutputs(t, gamma.names - lbl.names);
                nd = withOutputs(d, lbl.names - gamma.names);
            }
            ReplayResult sub = onLeft ? run(found->at("refutation"), na, nd, depth + 1)
                                      : run(found->at("refutation"), nd, na, depth + 1);
            if (!sub.ok) return sub;
        }
        return {true, ""};
    }

private:
    Lts& lts_;
    GameMode mode_;

    static ReplayResult fail(int depth, const std::string& why) { return {false, "depth " + std::to_string(depth) + ": " + why}; }

    int withOutputs(int id, const Multiset& extra) {
        if (extra.empty()) return id;
        return lts_.intern(mkPar(lts_.term(id), mkOutputs(extra)));
    }

    std::vector<std::pair<Label, int>> answers(const Label& lbl, int def) {
        std::vector<std::pair<Label, int>> out;
        if (mode_ == GameMode::Strong) {
            for (const auto& [g, d] : lts_.successors(def))
                if (g == lbl) out.emplace_back(g, d);
            return out;
        }
        for (const auto& [g, d] : lts_.weakSuccessors(def)) {
            bool ok = (mode_ == GameMode::Weak || lbl.isOut()) ? g == lbl : !g.isOut();
            if (ok) out.emplace_back(g, d);
        }
        return out;
    }
};

}  // namespace

ReplayResult replayAttack(const Json& attack, const Proc& p, const Proc& q, Lts& lts, GameMode mode) {
    try {
        Replayer r(lts, mode);
        return r.run(attack, lts.intern(p), lts.intern(q), 0);
    } catch (const std::exception& e) {
        return {false, std::string("malformed witness: ") + e.what()};
    }
}

}  // namespace atccs
