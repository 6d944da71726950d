#pragma once

// Names, multisets, logs and the two-level term syntax (processes over
// atomic expressions).  All term nodes are immutable and shared.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atccs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionViolated : Error {
    using Error::Error;
};
struct ResourceExhausted : Error {
    using Error::Error;
};
struct NotNormalForm : Error {
    using Error::Error;
};
struct FreshNameClash : Error {
    using Error::Error;
};

using Name = std::string;

// [a-z][a-zA-Z0-9_]*
bool isValidName(std::string_view s);
// Generated names start with '$' so they can never clash with parsed ones.
inline bool isFreshName(std::string_view s) { return !s.empty() && s[0] == '$'; }

class Multiset {
public:
    using Entry = std::pair<Name, int>;

    Multiset() = default;
    Multiset(std::initializer_list<Name> names);
    static Multiset fromEntries(const std::vector<Entry>& es);

    int count(const Name& n) const;
    void add(const Name& n, int k = 1);
    // Removes k copies; returns false (and leaves *this untouched) if fewer are present.
    bool remove(const Name& n, int k = 1);
    void set(const Name& n, int k);

    bool empty() const { return entries_.empty(); }
    int size() const;
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Name> elements() const;  // sorted, with repetition
    std::set<Name> support() const;

    bool subsetOf(const Multiset& o) const;
    Multiset operator+(const Multiset& o) const;
    // Truncated difference: the smallest d with *this ⊆ o ⊎ d.
    Multiset operator-(const Multiset& o) const;
    Multiset restrictedTo(const std::set<Name>& keep) const;

    std::size_t hash() const;
    std::string str() const;  // {a,a,b}

    friend bool operator==(const Multiset&, const Multiset&) = default;
    friend auto operator<=>(const Multiset&, const Multiset&) = default;

private:
    std::vector<Entry> entries_;  // sorted by name, counts >= 1
};

using State = Multiset;

struct Action {
    enum class Kind : std::uint8_t { Read, Write };
    Kind kind;
    Name chan;

    static Action rd(Name a) { return {Kind::Read, std::move(a)}; }
    static Action wr(Name a) { return {Kind::Write, std::move(a)}; }
    bool isRead() const { return kind == Kind::Read; }

    friend bool operator==(const Action&, const Action&) = default;
    friend auto operator<=>(const Action&, const Action&) = default;
};

using Log = std::vector<Action>;

Multiset readSet(const Log& log);
Multiset writeSet(const Log& log);
// σ \ readSet(δ) ⊎ writeSet(δ); throws PreconditionViolated unless readSet(δ) ⊆ σ.
State applyEffect(const State& s, const Log& log);

struct EffectVerdict {
    bool equal;
    std::string reason;  // empty when equal
};
EffectVerdict logEffectEq(const Log& d1, const Log& d2, const State& s);

// ---------------------------------------------------------------- expressions

enum class ExprKind : std::uint8_t { End, Retry, Prefix, OrElse };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Action act;   // Prefix
    Expr left;    // Prefix continuation, OrElse left
    Expr right;   // OrElse right
    std::size_t hash;
};

Expr mkEnd();
Expr mkRetry();
Expr mkPrefix(Action a, Expr rest);
Expr mkRead(const Name& a, Expr rest);
Expr mkWrite(const Name& a, Expr rest);
Expr mkOrElse(Expr l, Expr r);
// Right-nested orElse over a nonempty list.
Expr mkOrElseChain(const std::vector<Expr>& branches);

int compare(const Expr& a, const Expr& b);
bool equal(const Expr& a, const Expr& b);
std::size_t exprSize(const Expr& e);   // number of nodes
int exprDepth(const Expr& e);          // leaves have depth 0
Multiset exprReads(const Expr& e);     // every read occurrence
Multiset exprWrites(const Expr& e);
std::set<Name> exprNames(const Expr& e);
// Largest number of reads of a single name along one root-to-leaf path.
int maxReadMultiplicity(const Expr& e);

// ------------------------------------------------------------ ongoing blocks

enum class OngoingKind : std::uint8_t { Running, OrElse };

struct OngoingNode;
using Ongoing = std::shared_ptr<const OngoingNode>;

struct OngoingNode {
    OngoingKind kind;
    Expr expr;      // Running: remaining expression
    State init;     // Running: state captured when the block started
    Log log;        // Running
    Ongoing left;   // OrElse
    Ongoing right;  // OrElse
    std::size_t hash;

    bool isTerminal() const {
        return kind == OngoingKind::Running &&
               (expr->kind == ExprKind::End || expr->kind == ExprKind::Retry);
    }
};

Ongoing mkRunning(Expr e, State init, Log log);
Ongoing mkOngoingOrElse(Ongoing l, Ongoing r);
int compare(const Ongoing& a, const Ongoing& b);

// ------------------------------------------------------------------ processes

enum class ProcKind : std::uint8_t { Nil, Output, Input, Repl, Par, Hide, Atomic, Ongoing, Choice };
enum class Polarity : std::uint8_t { In, Out };

struct ProcNode;
using Proc = std::shared_ptr<const ProcNode>;

struct Branch {
    Polarity pol;
    Name chan;
    Proc cont;
};

struct ProcNode {
    ProcKind kind;
    Name name;        // Output, Input, Repl, Hide
    int count = 0;    // Hide annotation; Repl firing counter
    Proc left;        // Input/Repl/Hide body; Par left
    Proc right;       // Par right
    Expr expr;        // Atomic body; Ongoing original expression
    Ongoing ongoing;  // Ongoing
    std::vector<Branch> branches;  // Choice
    std::size_t hash;
};

Proc mkNil();
Proc mkOutput(const Name& a);
Proc mkInput(const Name& a, Proc body);
Proc mkRepl(const Name& a, Proc body, int fired = 0);
Proc mkPar(Proc l, Proc r);
Proc mkHide(Proc body, const Name& a, int n = 0);
Proc mkAtomic(Expr m);
Proc mkOngoing(Ongoing a, Expr original);
Proc mkChoice(std::vector<Branch> branches);

// Left-nested Par of the list; Nil for an empty list.
Proc mkParList(const std::vector<Proc>& ps);
// One Output per element (with multiplicity), sorted; Nil for ∅.
Proc mkOutputs(const Multiset& names);

int compare(const Proc& a, const Proc& b);
bool equal(const Proc& a, const Proc& b);

struct ProcHash {
    std::size_t operator()(const Proc& p) const { return p->hash; }
};
struct ProcEq {
    bool operator()(const Proc& a, const Proc& b) const { return equal(a, b); }
};

// Components of nested Par nodes, left to right.
std::vector<Proc> parComponents(const Proc& p);
std::set<Name> freeNames(const Proc& p);
std::set<Name> hiddenNames(const Proc& p);
int procDepth(const Proc& p);
bool containsChoice(const Proc& p);
bool containsAtomic(const Proc& p);  // Atomic or Ongoing
bool containsRepl(const Proc& p);

// ------------------------------------------------------------------- printing

std::string print(const Expr& e);
std::string print(const Ongoing& a);
std::string print(const Proc& p);
std::string print(const Log& log);
std::string print(const Action& a);

}  // namespace atccs
