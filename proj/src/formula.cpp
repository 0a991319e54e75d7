#include "qnsem/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace qnsem {

const char* connective_name(Connective c) {
    switch (c) {
        case Connective::Atom: return "atom";
        case Connective::Not: return "not";
        case Connective::And: return "and";
        case Connective::Or: return "or";
    }
    return "?";
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    const auto head = static_cast<unsigned char>(s.front());
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

Formula Formula::atom(std::string name) {
    if (!is_identifier(name)) throw Error("invalid atom name '" + name + "'");
    return Formula(std::make_shared<const Node>(Node{Connective::Atom, std::move(name), {}}));
}

Formula Formula::negation(Formula child) {
    return Formula(std::make_shared<const Node>(Node{Connective::Not, {}, {std::move(child)}}));
}

Formula Formula::conjunction(Formula left, Formula right) {
    return Formula(std::make_shared<const Node>(Node{Connective::And, {}, {std::move(left), std::move(right)}}));
}

Formula Formula::disjunction(Formula left, Formula right) {
    return Formula(std::make_shared<const Node>(Node{Connective::Or, {}, {std::move(left), std::move(right)}}));
}

const Formula& Formula::left() const {
    if (node_->kids.empty()) throw Error("atom has no operands");
    return node_->kids[0];
}

const Formula& Formula::right() const {
    if (node_->kids.size() < 2) throw Error(std::string(connective_name(kind())) + " has no right operand");
    return node_->kids[1];
}

std::vector<Formula> Formula::children() const { return node_->kids; }

std::size_t Formula::depth() const {
    std::size_t d = 0;
    for (const auto& k : node_->kids) d = std::max(d, k.depth() + 1);
    return d;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->kind != b.node_->kind || a.node_->name != b.node_->name) return false;
    return a.node_->kids == b.node_->kids;
}

Formula operator!(const Formula& f) { return Formula::negation(f); }
Formula operator&(const Formula& a, const Formula& b) { return Formula::conjunction(a, b); }
Formula operator|(const Formula& a, const Formula& b) { return Formula::disjunction(a, b); }

namespace {

std::string describe_expected(const std::set<std::string>& expected) {
    std::string s;
    for (const auto& e : expected) {
        if (!s.empty()) s += ", ";
        s += e;
    }
    return s;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::set<std::string> expected, const std::string& found)
    : Error("syntax error at byte " + std::to_string(offset) + ": expected one of {" +
            describe_expected(expected) + "}, found " + found),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Not, And, Or, LParen, RParen, Ident, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) { advance(); }

    Formula parse_all() {
        Formula f = parse_or();
        if (tok_.kind != Tok::End) fail({"'&'", "'|'", "end of input"});
        return f;
    }

private:
    Formula parse_or() {
        Formula f = parse_and();
        while (tok_.kind == Tok::Or) {
            advance();
            f = Formula::disjunction(f, parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (tok_.kind == Tok::And) {
            advance();
            f = Formula::conjunction(f, parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        switch (tok_.kind) {
            case Tok::Not: {
                advance();
                return Formula::negation(parse_unary());
            }
            case Tok::Ident: {
                Formula f = Formula::atom(tok_.text);
                advance();
                return f;
            }
            case Tok::LParen: {
                advance();
                Formula f = parse_or();
                if (tok_.kind != Tok::RParen) fail({"')'", "'&'", "'|'"});
                advance();
                return f;
            }
            default: fail({"'!'", "'('", "atom"});
        }
    }

    [[noreturn]] void fail(std::set<std::string> expected) const {
        std::string found = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
        throw ParseError(tok_.offset, std::move(expected), found);
    }

    bool match(std::string_view lit) {
        if (text_.substr(pos_, lit.size()) != lit) return false;
        pos_ += lit.size();
        return true;
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        auto make = [&](Tok k) { tok_ = Token{k, start, std::string(text_.substr(start, pos_ - start))}; };
        if (pos_ >= text_.size()) return make(Tok::End);
        const char c = text_[pos_];
        if (c == '!') { ++pos_; return make(Tok::Not); }
        if (c == '&') { ++pos_; return make(Tok::And); }
        if (c == '|') { ++pos_; return make(Tok::Or); }
        if (c == '(') { ++pos_; return make(Tok::LParen); }
        if (c == ')') { ++pos_; return make(Tok::RParen); }
        if (match("\xC2\xAC")) return make(Tok::Not);      // U+00AC
        if (match("\xE2\x88\xA7")) return make(Tok::And);  // U+2227
        if (match("\xE2\x88\xA8")) return make(Tok::Or);   // U+2228
        const auto u = static_cast<unsigned char>(c);
        if (std::isalpha(u) || c == '_') {
            while (pos_ < text_.size()) {
                const auto v = static_cast<unsigned char>(text_[pos_]);
                if (!(std::isalnum(v) || v == '_')) break;
                ++pos_;
            }
            return make(Tok::Ident);
        }
        throw ParseError(start, {"'!'", "'&'", "'|'", "'('", "')'", "atom"}, "'" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, 0, {}};
};

int precedence(Connective c) {
    switch (c) {
        case Connective::Or: return 1;
        case Connective::And: return 2;
        case Connective::Not: return 3;
        case Connective::Atom: return 4;
    }
    return 0;
}

void render_into(const Formula& f, std::string& out) {
    auto child = [&out](const Formula& c, bool parens) {
        if (parens) out += '(';
        render_into(c, out);
        if (parens) out += ')';
    };
    const int p = precedence(f.kind());
    switch (f.kind()) {
        case Connective::Atom: out += f.name(); break;
        case Connective::Not:
            out += '!';
            child(f.left(), precedence(f.left().kind()) < p);
            break;
        case Connective::And:
        case Connective::Or:
            child(f.left(), precedence(f.left().kind()) < p);
            out += f.kind() == Connective::And ? " & " : " | ";
            child(f.right(), precedence(f.right().kind()) <= p);
            break;
    }
}

void tree_into(const Formula& f, int indent, std::ostringstream& os) {
    os << std::string(static_cast<std::size_t>(indent) * 2, ' ');
    if (f.is_atom()) {
        os << "Atom(" << f.name() << ")\n";
        return;
    }
    os << (f.kind() == Connective::Not ? "Not" : f.kind() == Connective::And ? "And" : "Or") << "\n";
    for (const auto& k : f.children()) tree_into(k, indent + 1, os);
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (f.is_atom()) {
        out.insert(f.name());
        return;
    }
    for (const auto& k : f.children()) collect_atoms(k, out);
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

std::string render_tree(const Formula& f) {
    std::ostringstream os;
    tree_into(f, 0, os);
    return os.str();
}

std::vector<Formula> subformula_closure(const std::vector<Formula>& fs) {
    std::vector<Formula> out;
    std::unordered_set<std::string> seen;
    auto visit = [&](auto&& self, const Formula& f) -> void {
        const std::string key = render(f);
        if (seen.count(key)) return;
        for (const auto& k : f.children()) self(self, k);
        seen.insert(key);
        out.push_back(f);
    };
    for (const auto& f : fs) visit(visit, f);
    return out;
}

std::vector<std::string> atoms_of(const std::vector<Formula>& fs) {
    std::set<std::string> names;
    for (const auto& f : fs) collect_atoms(f, names);
    return {names.begin(), names.end()};
}

}  // namespace qnsem
