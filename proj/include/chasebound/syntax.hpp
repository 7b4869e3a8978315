#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chasebound/instance.hpp"
#include "chasebound/query.hpp"
#include "chasebound/rule.hpp"

namespace chasebound {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

// Everything one file may declare, in order of appearance.
struct SourceFile {
    std::vector<Atom> facts;
    std::vector<Rule> rules;
    std::vector<ConjunctiveQuery> queries;
    std::vector<SourceSpan> fact_spans;
    std::vector<SourceSpan> rule_spans;
    std::vector<SourceSpan> query_spans;
};

// Grammar (one statement per '.'):
//   rule   ::= ['[' label ']'] [atoms] '->' atoms '.'
//   fact   ::= atom '.'
//   query  ::= '?' ['(' terms ')'] ':-' atoms '.'
// Variables start with an uppercase letter or '_'; constants and predicates
// with a lowercase letter or digit. '%' comments run to end of line.
// Rules without a label get r1, r2, ... by position.
SourceFile parse_source(std::string_view text);

// Each throws ParseError when the text declares something of another kind.
Ruleset parse_ruleset(std::string_view text);
Instance parse_instance(std::string_view text);
ConjunctiveQuery parse_query(std::string_view text);

std::string read_file(const std::string& path);

// Gives chase-generated terms stable display names _n1, _n2, ... in order of
// first request. Constants and variables print as themselves.
class TermPrinter {
public:
    std::string operator()(Term t);
    std::string atom(const Atom& a);
    // Generated terms named so far, in naming order.
    const std::vector<Term>& named() const { return order_; }

private:
    std::unordered_map<Term, std::string> names_;
    std::vector<Term> order_;
};

std::string print_atom(const Atom& a);
std::string print_rule(const Rule& r);
std::string print_ruleset(const Ruleset& rules);
// Facts one per line; generated terms renamed via `printer` (a fresh one when null).
std::string print_instance(const Instance& instance, TermPrinter* printer = nullptr);
std::string print_query(const ConjunctiveQuery& q);
std::string print_ucq(const UnionOfQueries& ucq);

}  // namespace chasebound
