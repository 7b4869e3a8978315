#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chasebound {

enum class TermKind : std::uint8_t { Constant = 0, Variable = 1, Null = 2, Function = 3 };

// A term is a tagged index into the process-wide TermStore. Equal ids mean
// structurally equal terms, so nulls compare by provenance.
class Term {
public:
    constexpr Term() = default;
    constexpr Term(TermKind kind, std::uint32_t index)
        : bits_((static_cast<std::uint32_t>(kind) << 30) | (index & kIndexMask)) {}

    constexpr TermKind kind() const { return static_cast<TermKind>(bits_ >> 30); }
    constexpr std::uint32_t index() const { return bits_ & kIndexMask; }
    constexpr std::uint32_t raw() const { return bits_; }

    constexpr bool is_constant() const { return kind() == TermKind::Constant; }
    constexpr bool is_variable() const { return kind() == TermKind::Variable; }
    constexpr bool is_null() const { return kind() == TermKind::Null; }
    constexpr bool is_function() const { return kind() == TermKind::Function; }
    // Homomorphisms may move every term except constants.
    constexpr bool is_rigid() const { return is_constant(); }

    friend constexpr bool operator==(Term, Term) = default;
    friend constexpr auto operator<=>(Term a, Term b) { return a.bits_ <=> b.bits_; }

private:
    static constexpr std::uint32_t kIndexMask = (1u << 30) - 1;
    std::uint32_t bits_ = 0;
};

using RuleId = std::uint32_t;

enum class NullScheme : std::uint8_t { Oblivious, SemiOblivious };

using Binding = std::vector<std::pair<Term, Term>>;

// Provenance of a chase null: existential variable, rule and the (full or
// frontier-restricted) trigger homomorphism as a sorted binding list.
struct NullProvenance {
    NullScheme scheme = NullScheme::Oblivious;
    RuleId rule = 0;
    Term variable;
    Binding binding;

    friend bool operator==(const NullProvenance&, const NullProvenance&) = default;
};

// Skolem function symbol f^rule_var.
struct FunctionSymbol {
    RuleId rule = 0;
    Term variable;
    friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

struct FunctionTerm {
    FunctionSymbol symbol;
    std::vector<Term> args;
    friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;
};

Term constant(std::string_view name);
Term variable(std::string_view name);
Term null_term(const NullProvenance& provenance);
Term function_term(const FunctionSymbol& symbol, std::span<const Term> args);

// Returns the interned null if it already exists, without creating one.
bool find_null(const NullProvenance& provenance, Term& out);

const std::string& term_name(Term t);               // constants and variables only
const NullProvenance& null_provenance(Term t);      // nulls only
const FunctionTerm& function_info(Term t);          // function terms only

// Unique id for a freshly constructed rule; nulls and Skolem symbols key on it.
RuleId next_rule_id();

// Display name registered for a rule id (used by printers).
void set_rule_label(RuleId id, std::string label);
std::string rule_label(RuleId id);

// Plain rendering: constants/variables by name, nulls as z#index,
// function terms as f_<rule>_<var>(args).
std::string to_string(Term t);

// Number of interned nulls/functions; diagnostic only.
std::size_t interned_term_count();

}  // namespace chasebound

template <>
struct std::hash<chasebound::Term> {
    std::size_t operator()(chasebound::Term t) const noexcept {
        return std::hash<std::uint32_t>{}(t.raw());
    }
};
