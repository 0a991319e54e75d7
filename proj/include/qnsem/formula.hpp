#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qnsem/error.hpp"

namespace qnsem {

enum class Connective { Atom, Not, And, Or };

const char* connective_name(Connective c);  // "atom", "not", "and", "or"

/// Immutable propositional formula over ! & |. Identity is syntactic:
/// P & Q and Q & P are different formulas.
class Formula {
public:
    static Formula atom(std::string name);
    static Formula negation(Formula child);
    static Formula conjunction(Formula left, Formula right);
    static Formula disjunction(Formula left, Formula right);

    Connective kind() const;
    bool is_atom() const { return kind() == Connective::Atom; }
    const std::string& name() const;
    /// Child for Not, left operand for And/Or.
    const Formula& left() const;
    const Formula& right() const;
    std::vector<Formula> children() const;
    std::size_t depth() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Connective kind = Connective::Atom;
    std::string name;
    std::vector<Formula> kids;
};

inline Connective Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }

Formula operator!(const Formula& f);
Formula operator&(const Formula& a, const Formula& b);
Formula operator|(const Formula& a, const Formula& b);

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::set<std::string> expected, const std::string& found);
    std::size_t offset() const { return offset_; }
    const std::set<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::set<std::string> expected_;
};

bool is_identifier(std::string_view s);

/// or := and ('|' and)* ; and := unary ('&' unary)* ;
/// unary := '!' unary | atom | '(' or ')'.
/// Also accepts the Unicode connectives as aliases.
Formula parse(std::string_view text);

/// ASCII text with the fewest parentheses that parse back to the same tree.
std::string render(const Formula& f);

/// Indented tree dump used by the CLI.
std::string render_tree(const Formula& f);

/// Every subformula of every input, deduplicated, children before parents.
std::vector<Formula> subformula_closure(const std::vector<Formula>& fs);

/// Atom names in lexicographic order.
std::vector<std::string> atoms_of(const std::vector<Formula>& fs);

}  // namespace qnsem
