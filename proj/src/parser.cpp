#include "atccs/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace atccs {

ParseError::ParseError(const std::string& msg, int l, int c)
    : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

enum class Tok { Name, Int, Sym, Eof };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Name, std::string(src.substr(i, j - i)), line, col});
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), line, col});
            advance(j - i);
        } else if (std::string_view("!?.*|+()\\:{}[]-$,").find(c) != std::string_view::npos) {
            out.push_back({Tok::Sym, std::string(1, c), line, col});
            advance(1);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({Tok::Eof, "", line, col});
    return out;
}

bool isKeyword(const std::string& s) {
    return s == "atomic" || s == "end" || s == "retry" || s == "orElse" || s == "ongoing";
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Proc parseProcess() {
        Proc p = parsePar();
        expectEof();
        return p;
    }

    Expr parseExpression() {
        Expr e = parseExprOr();
        expectEof();
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool isSym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    bool isWord(const char* s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Name && peek(k).text == s;
    }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.col); }

    std::string describe(const Token& t) const {
        if (t.kind == Tok::Eof) return "end of input";
        return "'" + t.text + "'";
    }

    void expectSym(const char* s) {
        if (!isSym(s)) fail(std::string("expected '") + s + "' but found " + describe(peek()), peek());
        next();
    }

    void expectEof() {
        if (peek().kind != Tok::Eof) fail("unexpected " + describe(peek()), peek());
    }

    Name expectName(const char* what) {
        const Token& t = peek();
        if (isSym("$")) fail("generated names (starting with '$') cannot appear in source", t);
        if (t.kind != Tok::Name) fail(std::string("expected ") + what + " but found " + describe(t), t);
        if (isKeyword(t.text)) fail("keyword '" + t.text + "' cannot be used as a name", t);
        if (!isValidName(t.text)) fail("invalid name '" + t.text + "' (names match [a-z][a-zA-Z0-9_]*)", t);
        next();
        return t.text;
    }

    // After 'a?' or 'a!' a '.' must follow in prefix position; an identifier
    // there means a value-passing term, which the calculus does not have.
    void rejectValuePassing() {
        if (peek().kind == Tok::Name || peek().kind == Tok::Int)
            fail("value-passing terms are not supported", peek());
    }

    Proc parsePar() {
        Proc p = parseChoice();
        while (isSym("|")) {
            next();
            p = mkPar(p, parseChoice());
        }
        return p;
    }

    static bool asBranch(const Proc& p, Branch& out) {
        if (p->kind == ProcKind::Input) {
            out = {Polarity::In, p->name, p->left};
            return true;
        }
        if (p->kind == ProcKind::Choice && p->branches.size() == 1) {
            out = p->branches[0];
            return true;
        }
        return false;
    }

    Proc parseChoice() {
        const Token& start = peek();
        Proc first = parsePrefix();
        if (!isSym("+")) return first;
        std::vector<Branch> branches;
        Branch b;
        if (!asBranch(first, b)) fail("choice operands must be guarded by a?. or a!.", start);
        branches.push_back(b);
        while (isSym("+")) {
            next();
            const Token& t = peek();
            Proc q = parsePrefix();
            if (!asBranch(q, b)) fail("choice operands must be guarded by a?. or a!.", t);
            branches.push_back(b);
        }
        return mkChoice(std::move(branches));
    }

    Proc parsePrefix() {
        Proc p = parsePrimary();
        while (isSym("\\")) {
            const Token& hideTok = next();
            Name a = expectName("hidden name");
            int n = 0;
            if (isSym(":")) {
                next();
                if (isSym("-")) fail("hide annotation must be a nonnegative integer", peek());
                if (peek().kind != Tok::Int) fail("expected hide annotation but found " + describe(peek()), peek());
                n = std::stoi(next().text);
            }
            if (hiddenNames(p).count(a))
                fail("name '" + a + "' is already hidden inside this scope (shadowed hiding is not allowed)",
                     hideTok);
            p = mkHide(p, a, n);
        }
        return p;
    }

    Proc parsePrimary() {
        const Token& t = peek();
        if (t.kind == Tok::Int) {
            if (t.text != "0") fail("unexpected number " + describe(t), t);
            next();
            return mkNil();
        }
        if (isSym("(")) {
            next();
            Proc p = parsePar();
            expectSym(")");
            return p;
        }
        if (isSym("*")) {
            next();
            Name a = expectName("channel name after '*'");
            expectSym("?");
            rejectValuePassing();
            expectSym(".");
            return mkRepl(a, parsePrefix());
        }
        if (isWord("atomic")) {
            next();
            if (isSym("{") || isSym("[") || isSym("<"))
                fail("ongoing atomic blocks are internal and cannot be written in source", t);
            expectSym("(");
            Expr m = parseExprOr();
            expectSym(")");
            return mkAtomic(m);
        }
        if (isWord("ongoing")) fail("ongoing atomic blocks are internal and cannot be written in source", t);
        if (t.kind == Tok::Name || isSym("$")) {
            Name a = expectName("channel name");
            if (isSym("?")) {
                next();
                rejectValuePassing();
                expectSym(".");
                return mkInput(a, parsePrefix());
            }
            if (isSym("!")) {
                next();
                rejectValuePassing();
                if (isSym(".")) {
                    next();
                    return mkChoice({Branch{Polarity::Out, a, parsePrefix()}});
                }
                return mkOutput(a);
            }
            fail("expected '?' or '!' after channel name '" + a + "'", peek());
        }
        fail("expected a process but found " + describe(t), t);
    }

    Expr parseExprOr() {
        Expr l = parseExprSeq();
        if (isWord("orElse")) {
            next();
            return mkOrElse(l, parseExprOr());
        }
        return l;
    }

    Expr parseExprSeq() {
        const Token& t = peek();
        if (isWord("end")) {
            next();
            return mkEnd();
        }
        if (isWord("retry")) {
            next();
            return mkRetry();
        }
        if (isSym("(")) {
            next();
            Expr e = parseExprOr();
            expectSym(")");
            return e;
        }
        if (t.kind == Tok::Name || isSym("$")) {
            Name a = expectName("channel name");
            bool read;
            if (isSym("?")) {
                read = true;
            } else if (isSym("!")) {
                read = false;
            } else {
                fail("expected '?' or '!' after '" + a + "' in atomic expression", peek());
            }
            next();
            rejectValuePassing();
            if (!isSym("."))
                fail("atomic actions must be followed by '.' and a continuation (end, retry, ...)", peek());
            next();
            Expr rest = parseExprSeq();
            return read ? mkRead(a, rest) : mkWrite(a, rest);
        }
        fail("expected an atomic expression but found " + describe(t), t);
    }
};

}  // namespace

Proc parse(std::string_view text) { return Parser(text).parseProcess(); }

Expr parseExpr(std::string_view text) { return Parser(text).parseExpression(); }

}  // namespace atccs
