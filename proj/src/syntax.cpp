#include "chasebound/syntax.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace chasebound {
namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Arrow, Neck, Question, Label, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, column = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        std::size_t l = line, col = column;
        if (ident_char(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, col});
            advance(j - i);
            continue;
        }
        if (c == '[') {
            std::size_t j = text.find(']', i);
            if (j == std::string_view::npos) throw ParseError(l, col, "unterminated rule label");
            std::string label(text.substr(i + 1, j - i - 1));
            if (label.empty()) throw ParseError(l, col, "empty rule label");
            for (char ch : label)
                if (!ident_char(ch)) throw ParseError(l, col, "rule label must be an identifier");
            out.push_back({Tok::Label, label, l, col});
            advance(j - i + 1);
            continue;
        }
        if (text.substr(i, 2) == "->") {
            out.push_back({Tok::Arrow, "->", l, col});
            advance(2);
            continue;
        }
        if (text.substr(i, 2) == ":-") {
            out.push_back({Tok::Neck, ":-", l, col});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            case '.': kind = Tok::Dot; break;
            case '?': kind = Tok::Question; break;
            default: throw ParseError(l, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), l, col});
        advance(1);
    }
    out.push_back({Tok::End, "", line, column});
    return out;
}

const char* describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Arrow: return "'->'";
        case Tok::Neck: return "':-'";
        case Tok::Question: return "'?'";
        case Tok::Label: return "rule label";
        case Tok::End: return "end of input";
    }
    return "token";
}

bool is_variable_name(const std::string& s) {
    return std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    SourceFile parse() {
        SourceFile file;
        std::size_t rule_count = 0;
        while (peek().kind != Tok::End) {
            const Token& start = peek();
            SourceSpan span{start.line, start.column};
            if (start.kind == Tok::Question) {
                file.queries.push_back(query());
                file.query_spans.push_back(span);
                continue;
            }
            std::string label;
            bool labeled = false;
            if (start.kind == Tok::Label) {
                label = take().text;
                labeled = true;
            }
            std::vector<Atom> body;
            if (peek().kind != Tok::Arrow) body = atoms();
            if (peek().kind == Tok::Arrow || labeled) {
                expect(Tok::Arrow);
                auto head = atoms();
                expect(Tok::Dot);
                ++rule_count;
                if (!labeled) label = "r" + std::to_string(rule_count);
                file.rules.emplace_back(label, std::move(body), std::move(head));
                file.rule_spans.push_back(span);
                continue;
            }
            expect(Tok::Dot);
            for (auto& a : body) {
                file.facts.push_back(std::move(a));
                file.fact_spans.push_back(span);
            }
        }
        return file;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    const Token& expect(Tok kind) {
        const Token& t = peek();
        if (t.kind != kind)
            throw ParseError(t.line, t.column,
                             std::string("expected ") + describe(kind) + ", found " + describe(t.kind));
        return take();
    }

    Term term() {
        const Token& t = expect(Tok::Ident);
        return is_variable_name(t.text) ? variable(t.text) : constant(t.text);
    }

    Atom atom() {
        const Token& name = expect(Tok::Ident);
        if (is_variable_name(name.text))
            throw ParseError(name.line, name.column,
                             "predicate '" + name.text + "' must start with a lowercase letter");
        std::vector<Term> args;
        if (peek().kind == Tok::LParen) {
            take();
            if (peek().kind != Tok::RParen) {
                args.push_back(term());
                while (peek().kind == Tok::Comma) {
                    take();
                    args.push_back(term());
                }
            }
            expect(Tok::RParen);
        }
        auto [it, fresh] = arities_.emplace(name.text, args.size());
        if (!fresh && it->second != args.size())
            throw ParseError(name.line, name.column,
                             "predicate '" + name.text + "' used with arity " + std::to_string(args.size()) +
                                 ", earlier with " + std::to_string(it->second));
        Predicate pred = predicate(name.text, args.size());
        return Atom(pred, std::move(args));
    }

    std::vector<Atom> atoms() {
        std::vector<Atom> out;
        out.push_back(atom());
        while (peek().kind == Tok::Comma) {
            take();
            out.push_back(atom());
        }
        return out;
    }

    ConjunctiveQuery query() {
        expect(Tok::Question);
        ConjunctiveQuery q;
        std::vector<const Token*> answer_tokens;
        if (peek().kind == Tok::LParen) {
            take();
            if (peek().kind != Tok::RParen) {
                while (true) {
                    const Token& t = expect(Tok::Ident);
                    if (!is_variable_name(t.text))
                        throw ParseError(t.line, t.column,
                                         "answer term '" + t.text + "' must be a variable");
                    answer_tokens.push_back(&t);
                    q.answers.push_back(variable(t.text));
                    if (peek().kind != Tok::Comma) break;
                    take();
                }
            }
            expect(Tok::RParen);
        }
        expect(Tok::Neck);
        q.atoms = atoms();
        expect(Tok::Dot);
        std::unordered_set<Term> body_terms;
        for (const auto& a : q.atoms)
            for (auto t : a.args) body_terms.insert(t);
        for (std::size_t i = 0; i < q.answers.size(); ++i)
            if (!body_terms.count(q.answers[i]))
                throw ParseError(answer_tokens[i]->line, answer_tokens[i]->column,
                                 "answer variable '" + answer_tokens[i]->text +
                                     "' does not occur in the query body");
        return q;
    }

    std::vector<Token> tokens_;
    std::unordered_map<std::string, std::size_t> arities_;
    std::size_t pos_ = 0;
};

void reject(bool present, const std::vector<SourceSpan>& spans, const char* what) {
    if (present) throw ParseError(spans.front().line, spans.front().column, what);
}

}  // namespace

SourceFile parse_source(std::string_view text) { return Parser(text).parse(); }

Ruleset parse_ruleset(std::string_view text) {
    auto file = parse_source(text);
    reject(!file.facts.empty(), file.fact_spans, "facts are not allowed in a ruleset");
    reject(!file.queries.empty(), file.query_spans, "queries are not allowed in a ruleset");
    return Ruleset{std::move(file.rules)};
}

Instance parse_instance(std::string_view text) {
    auto file = parse_source(text);
    reject(!file.rules.empty(), file.rule_spans, "rules are not allowed in an instance");
    reject(!file.queries.empty(), file.query_spans, "queries are not allowed in an instance");
    return Instance(std::span<const Atom>(file.facts));
}

ConjunctiveQuery parse_query(std::string_view text) {
    auto file = parse_source(text);
    reject(!file.rules.empty(), file.rule_spans, "rules are not allowed in a query file");
    reject(!file.facts.empty(), file.fact_spans, "facts are not allowed in a query file");
    if (file.queries.size() != 1)
        throw ParseError(1, 1, "expected exactly one query, found " + std::to_string(file.queries.size()));
    return std::move(file.queries.front());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string TermPrinter::operator()(Term t) {
    if (t.is_constant() || t.is_variable()) return term_name(t);
    if (t.is_function()) {
        const auto& f = function_info(t);
        std::string out = "f_" + rule_label(f.symbol.rule) + "_" + term_name(f.symbol.variable) + "(";
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (i) out += ",";
            out += (*this)(f.args[i]);
        }
        return out + ")";
    }
    auto it = names_.find(t);
    if (it != names_.end()) return it->second;
    order_.push_back(t);
    std::string name = "_n" + std::to_string(order_.size());
    names_.emplace(t, name);
    return name;
}

std::string TermPrinter::atom(const Atom& a) {
    std::string out = a.pred.name() + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += (*this)(a.args[i]);
    }
    return out + ")";
}

std::string print_atom(const Atom& a) {
    TermPrinter p;
    return p.atom(a);
}

namespace {

std::string join_atoms(const std::vector<Atom>& atoms, TermPrinter& p) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ", ";
        out += p.atom(atoms[i]);
    }
    return out;
}

}  // namespace

std::string print_rule(const Rule& r) {
    TermPrinter p;
    std::string out = "[" + r.label() + "] ";
    if (!r.body().empty()) out += join_atoms(r.body(), p) + " ";
    return out + "-> " + join_atoms(r.head(), p) + ".";
}

std::string print_ruleset(const Ruleset& rules) {
    std::string out;
    for (const auto& r : rules) out += print_rule(r) + "\n";
    return out;
}

std::string print_instance(const Instance& instance, TermPrinter* printer) {
    TermPrinter local;
    TermPrinter& p = printer ? *printer : local;
    std::string out;
    for (const auto& a : instance) out += p.atom(a) + ".\n";
    return out;
}

std::string print_query(const ConjunctiveQuery& q) {
    TermPrinter p;
    std::string out = "?";
    if (!q.answers.empty()) {
        out += "(";
        for (std::size_t i = 0; i < q.answers.size(); ++i) {
            if (i) out += ",";
            out += p(q.answers[i]);
        }
        out += ")";
    }
    return out + " :- " + join_atoms(q.atoms, p) + ".";
}

std::string print_ucq(const UnionOfQueries& ucq) {
    std::string out;
    for (const auto& q : ucq) out += print_query(q) + "\n";
    return out;
}

}  // namespace chasebound
