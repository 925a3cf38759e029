#include "qistk/sexpr.hpp"

#include <cctype>

namespace qistk {

const std::string& SExpr::head() const {
    static const std::string empty;
    if (!is_list || items.empty() || !items[0].is_atom()) return empty;
    return items[0].atom;
}

const SExpr* SExpr::find(const std::string& key) const {
    for (const auto& it : items)
        if (it.is_list && it.head() == key) return &it;
    return nullptr;
}

std::vector<const SExpr*> SExpr::find_all(const std::string& key) const {
    std::vector<const SExpr*> out;
    for (const auto& it : items)
        if (it.is_list && it.head() == key) out.push_back(&it);
    return out;
}

namespace {

struct Reader {
    const std::string& s;
    std::size_t i = 0;
    std::size_t line = 1;

    void skip() {
        while (i < s.size()) {
            if (s[i] == '\n') { ++line; ++i; }
            else if (std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            else if (s[i] == ';') { while (i < s.size() && s[i] != '\n') ++i; }
            else break;
        }
    }

    SExpr read() {
        skip();
        if (i >= s.size()) throw SExprError("unexpected end of input", line);
        SExpr e;
        e.line = line;
        if (s[i] == '(') {
            ++i;
            e.is_list = true;
            for (;;) {
                skip();
                if (i >= s.size()) throw SExprError("unclosed '('", e.line);
                if (s[i] == ')') { ++i; break; }
                e.items.push_back(read());
            }
            return e;
        }
        if (s[i] == ')') throw SExprError("unexpected ')'", line);
        if (s[i] == '"') {
            ++i;
            e.quoted = true;
            while (i < s.size() && s[i] != '"') {
                if (s[i] == '\\' && i + 1 < s.size()) ++i;
                if (s[i] == '\n') ++line;
                e.atom += s[i++];
            }
            if (i >= s.size()) throw SExprError("unterminated string", e.line);
            ++i;
            return e;
        }
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
               s[i] != ')' && s[i] != ';' && s[i] != '"')
            e.atom += s[i++];
        return e;
    }
};

}  // namespace

SExpr parse_sexpr(const std::string& text) {
    Reader r{text};
    SExpr e = r.read();
    r.skip();
    if (r.i != text.size()) throw SExprError("trailing input", r.line);
    return e;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace qistk
