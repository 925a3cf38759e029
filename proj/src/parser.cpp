#include "qistk/parser.hpp"

#include <cctype>
#include <vector>

namespace qistk {

namespace {

enum class Tok { Ident, Nat, LParen, RParen, Comma, Dot, Tilde, Arrow, Amp, Bar, DArrow, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
                ++i;
            out.push_back({Tok::Ident, s.substr(start, i - start), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Nat, s.substr(start, i - start), start});
            continue;
        }
        if (s.compare(i, 3, "<->") == 0) { out.push_back({Tok::DArrow, "<->", i}); i += 3; continue; }
        if (s.compare(i, 2, "->") == 0) { out.push_back({Tok::Arrow, "->", i}); i += 2; continue; }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", i}); break;
            case ')': out.push_back({Tok::RParen, ")", i}); break;
            case ',': out.push_back({Tok::Comma, ",", i}); break;
            case '.': out.push_back({Tok::Dot, ".", i}); break;
            case '~': out.push_back({Tok::Tilde, "~", i}); break;
            case '&': out.push_back({Tok::Amp, "&", i}); break;
            case '|': out.push_back({Tok::Bar, "|", i}); break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "X" || s == "F" || s == "G" || s == "E" || s == "C" || s == "U" || s == "K" ||
           s == "Kd" || s == "forall" || s == "exists";
}

// "K12" / "Kd3" written without a space
bool split_agent(const std::string& s, const std::string& head, int& agent) {
    if (s.size() <= head.size() || s.compare(0, head.size(), head) != 0) return false;
    for (std::size_t i = head.size(); i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    agent = std::stoi(s.substr(head.size()));
    return true;
}

class Parser {
public:
    Parser(const std::string& text, Signature& sig, bool infer)
        : toks_(lex(text)), sig_(sig), infer_(infer) {}

    Formula run() {
        Formula f = formula();
        if (peek().kind != Tok::End) fail("trailing input");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;
    Signature& sig_;
    bool infer_;

    const Token& peek() const { return toks_[at_]; }
    const Token& take() { return toks_[at_++]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++at_;
    }

    int agent_number() {
        if (peek().kind != Tok::Nat) fail("expected agent number");
        std::size_t pos = peek().pos;
        int a = std::stoi(take().text);
        check_agent(a, pos);
        return a;
    }

    void check_agent(int a, std::size_t pos) const {
        if (a < 1 || a > sig_.agents)
            throw ParseError("unknown agent index " + std::to_string(a), pos);
    }

    std::string variable() {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected variable");
        if (sig_.is_constant(peek().text)) fail("cannot bind constant " + peek().text);
        return take().text;
    }

    Formula formula() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Tilde: take(); return neg(formula());
            case Tok::LParen: return parenthesised();
            case Tok::Ident: break;
            default: fail("expected formula");
        }
        std::string w = t.text;
        std::size_t pos = t.pos;
        int ag = 0;
        if (w == "X") { take(); return next(formula()); }
        if (w == "F") { take(); return eventually(formula()); }
        if (w == "G") { take(); return always(formula()); }
        if (w == "E") { take(); return everybody(sig_.agents, formula()); }
        if (w == "C") { take(); return common(formula()); }
        if (w == "K") { take(); int a = agent_number(); return know(a, formula()); }
        if (w == "Kd") { take(); int a = agent_number(); return know_dual(a, formula()); }
        if (split_agent(w, "Kd", ag)) { take(); check_agent(ag, pos); return know_dual(ag, formula()); }
        if (split_agent(w, "K", ag)) { take(); check_agent(ag, pos); return know(ag, formula()); }
        if (w == "forall" || w == "exists") {
            take();
            std::string v = variable();
            expect(Tok::Dot, "'.'");
            Formula body = formula();
            return w == "forall" ? forall(v, body) : exists(v, body);
        }
        if (w == "U") fail("unexpected 'U'");
        return atomic();
    }

    Formula atomic() {
        std::size_t pos = peek().pos;
        std::string name = take().text;
        std::vector<Term> args;
        if (peek().kind == Tok::LParen) {
            take();
            if (peek().kind != Tok::RParen) {
                for (;;) {
                    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected term");
                    std::string n = take().text;
                    args.push_back(sig_.is_constant(n) ? Term::cst(n) : Term::var(n));
                    if (peek().kind == Tok::Comma) { take(); continue; }
                    break;
                }
            }
            expect(Tok::RParen, "')'");
        }
        if (sig_.is_constant(name)) throw ParseError("constant used as predicate: " + name, pos);
        auto it = sig_.predicates.find(name);
        if (it == sig_.predicates.end()) {
            if (!infer_) throw ParseError("undeclared predicate " + name, pos);
            sig_.predicates[name] = static_cast<int>(args.size());
        } else if (it->second != static_cast<int>(args.size())) {
            throw ParseError("arity mismatch for " + name + ": expected " + std::to_string(it->second) +
                                 ", got " + std::to_string(args.size()),
                             pos);
        }
        return atom(name, std::move(args));
    }

    Formula parenthesised() {
        expect(Tok::LParen, "'('");
        Formula left = formula();
        Formula result;
        const Token& t = peek();
        if (t.kind == Tok::RParen) {
            result = left;
        } else {
            Tok k = t.kind;
            bool until_op = k == Tok::Ident && t.text == "U";
            if (!(until_op || k == Tok::Arrow || k == Tok::Amp || k == Tok::Bar || k == Tok::DArrow))
                fail("expected binary operator");
            take();
            Formula right = formula();
            if (until_op) result = until(left, right);
            else if (k == Tok::Arrow) result = implies(left, right);
            else if (k == Tok::Amp) result = conj(left, right);
            else if (k == Tok::Bar) result = disj(left, right);
            else result = iff(left, right);
        }
        expect(Tok::RParen, "')'");
        return result;
    }
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
    Signature copy = sig;
    return Parser(text, copy, false).run();
}

Formula parse_formula_infer(const std::string& text, Signature& sig) {
    return Parser(text, sig, true).run();
}

}  // namespace qistk
