#include "gradkernel/script.hpp"

#include "gradkernel/atlas.hpp"
#include "gradkernel/bigrading.hpp"
#include "gradkernel/diophantine.hpp"
#include "gradkernel/error.hpp"
#include "gradkernel/normal_form.hpp"

#include <json.hpp>

#include <cctype>
#include <climits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gradkernel::script {

ScriptError::ScriptError(Kind kind, SourcePos pos, const std::string& message)
    : std::runtime_error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " +
                         (kind == Kind::Syntax ? "syntax error: " : "error: ") + message),
      kind_(kind), pos_(pos), message_(message) {}

namespace {

[[noreturn]] void syntax_error(SourcePos pos, const std::string& message) {
    throw ScriptError(ScriptError::Kind::Syntax, pos, message);
}

[[noreturn]] void semantic_error(SourcePos pos, const std::string& message) {
    throw ScriptError(ScriptError::Kind::Semantic, pos, message);
}

// Lexer

enum class Tok { Name, Int, Semi, Comma, LParen, RParen, LBrace, RBrace, Plus, Minus, Star, Slash, Caret, Equals, Arrow, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::Name: return "'" + t.text + "'";
    case Tok::Int: return "number " + t.text;
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
    }
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, column = 1, depth = 0;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        i += n;
        column += static_cast<int>(n);
    };
    while (i < src.size()) {
        const char ch = src[i];
        const SourcePos pos{line, column};
        if (ch == '\n') {
            if (depth == 0) out.push_back({Tok::Newline, "\\n", pos});
            ++i;
            ++line;
            column = 1;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Name, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", pos});
            advance(2);
            continue;
        }
        Tok kind;
        switch (ch) {
        case ';': kind = Tok::Semi; break;
        case ',': kind = Tok::Comma; break;
        case '(': kind = Tok::LParen; ++depth; break;
        case ')': kind = Tok::RParen; depth = depth > 0 ? depth - 1 : 0; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '=': kind = Tok::Equals; break;
        default: {
            std::string shown(1, ch);
            if (static_cast<unsigned char>(ch) < 0x20 || static_cast<unsigned char>(ch) >= 0x7f) shown = "non-ASCII byte";
            syntax_error(pos, "unexpected character " + (shown.size() == 1 ? "'" + shown + "'" : shown));
        }
        }
        out.push_back({kind, std::string(1, ch), pos});
        advance(1);
    }
    out.push_back({Tok::End, "", {line, column}});
    return out;
}

// Parser

const std::set<std::string, std::less<>> kCommands = {"print",      "mul",    "apply",    "compose",     "truncate",
                                                      "normalform", "hilbert", "bigrade", "cocycle",     "coboundary",
                                                      "obstruction", "quotient"};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Script parse_script() {
        Script script;
        for (;;) {
            skip_separators();
            if (peek().kind == Tok::End) break;
            script.statements.push_back(parse_statement());
            const Token& t = peek();
            if (t.kind != Tok::Semi && t.kind != Tok::Newline && t.kind != Tok::End)
                syntax_error(t.pos, "expected ';' or end of line, found " + describe(t));
        }
        return script;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
    }
    Token take() {
        Token t = peek();
        if (index_ < tokens_.size() - 1) ++index_;
        return t;
    }
    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        take();
        return true;
    }
    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) syntax_error(peek().pos, "expected " + what + ", found " + describe(peek()));
        return take();
    }
    void expect_keyword(const std::string& word) {
        if (peek().kind != Tok::Name || peek().text != word)
            syntax_error(peek().pos, "expected '" + word + "', found " + describe(peek()));
        take();
    }
    void skip_separators() {
        while (peek().kind == Tok::Semi || peek().kind == Tok::Newline) take();
    }

    static int to_int(const Token& t, bool negative) {
        if (t.text.size() > 9) syntax_error(t.pos, "integer " + t.text + " is too large");
        const int v = std::stoi(t.text);
        return negative ? -v : v;
    }
    int parse_signed_int(const std::string& what) {
        const bool negative = accept(Tok::Minus);
        return to_int(expect(Tok::Int, what), negative);
    }

    Statement parse_statement() {
        const Token head = expect(Tok::Name, "a declaration or command");
        Statement st;
        st.pos = head.pos;
        const std::string& w = head.text;
        if (w == "order") {
            st.node = OrderDecl{to_int(expect(Tok::Int, "truncation order"), false)};
        } else if (w == "base") {
            st.node = parse_base_rest();
        } else if (w == "var") {
            st.node = parse_var_rest();
        } else if (w == "let") {
            LetDecl d;
            d.name = expect(Tok::Name, "a name").text;
            expect(Tok::Equals, "'='");
            d.expr = parse_expr();
            st.node = std::move(d);
        } else if (w == "morphism") {
            MorphismDecl d;
            d.name = expect(Tok::Name, "a morphism name").text;
            d.mappings = parse_mappings();
            st.node = std::move(d);
        } else if (w == "chart") {
            st.node = parse_chart_rest();
        } else if (w == "transition") {
            TransitionDecl d;
            d.from = expect(Tok::Name, "a chart name").text;
            expect(Tok::Arrow, "'->'");
            d.to = expect(Tok::Name, "a chart name").text;
            d.mappings = parse_mappings();
            st.node = std::move(d);
        } else if (kCommands.count(w)) {
            st.node = parse_command_rest(w);
        } else {
            syntax_error(head.pos, "unknown statement '" + w + "'");
        }
        return st;
    }

    BaseDecl parse_base_rest() {
        BaseDecl d;
        d.name = expect(Tok::Name, "a symbol name").text;
        if (peek().kind == Tok::Name && peek().text == "laurent") {
            take();
            d.laurent = true;
        }
        return d;
    }

    VarDecl parse_var_rest() {
        VarDecl d;
        d.name = expect(Tok::Name, "a symbol name").text;
        expect_keyword("deg");
        d.degree = parse_signed_int("a degree");
        return d;
    }

    ChartDecl parse_chart_rest() {
        ChartDecl d;
        d.name = expect(Tok::Name, "a chart name").text;
        expect(Tok::LBrace, "'{'");
        for (;;) {
            skip_separators();
            if (accept(Tok::RBrace)) break;
            const Token kw = expect(Tok::Name, "'base', 'var' or '}'");
            if (kw.text == "base") {
                d.symbols.emplace_back(parse_base_rest());
            } else if (kw.text == "var") {
                d.symbols.emplace_back(parse_var_rest());
            } else {
                syntax_error(kw.pos, "expected 'base', 'var' or '}', found " + describe(kw));
            }
            require_entry_end();
        }
        return d;
    }

    void require_entry_end() {
        const Token& t = peek();
        if (t.kind != Tok::Semi && t.kind != Tok::Newline && t.kind != Tok::RBrace)
            syntax_error(t.pos, "expected ';', end of line or '}', found " + describe(t));
    }

    std::vector<Mapping> parse_mappings() {
        expect(Tok::LBrace, "'{'");
        std::vector<Mapping> out;
        for (;;) {
            skip_separators();
            if (accept(Tok::RBrace)) break;
            Mapping m;
            const Token sym = expect(Tok::Name, "a symbol or '}'");
            m.symbol = sym.text;
            m.pos = sym.pos;
            expect(Tok::Arrow, "'->'");
            m.expr = parse_expr();
            out.push_back(std::move(m));
            require_entry_end();
        }
        return out;
    }

    Command parse_command_rest(const std::string& name) {
        Command c;
        c.name = name;
        bool need_item = false;
        for (;;) {
            const Tok k = peek().kind;
            if (k == Tok::Semi || k == Tok::Newline || k == Tok::End) {
                if (need_item) syntax_error(peek().pos, "expected an argument after ','");
                break;
            }
            CommandArg arg;
            arg.pos = peek().pos;
            if (k == Tok::Name && peek(1).kind == Tok::Equals) {
                arg.key = take().text;
                take();
                arg.value = parse_value();
            } else {
                arg.expr = parse_expr();
            }
            c.args.push_back(std::move(arg));
            need_item = accept(Tok::Comma);
        }
        return c;
    }

    Value parse_value() {
        Value v;
        v.pos = peek().pos;
        if (accept(Tok::LParen)) {
            v.kind = Value::Kind::Tuple;
            if (!accept(Tok::RParen)) {
                do {
                    v.items.push_back(parse_value());
                } while (accept(Tok::Comma));
                expect(Tok::RParen, "',' or ')'");
            }
            return v;
        }
        if (peek().kind == Tok::Name) {
            v.kind = Value::Kind::Name;
            v.name = take().text;
            return v;
        }
        const bool negative = accept(Tok::Minus);
        const Token num = expect(Tok::Int, "a number, name or tuple");
        Integer n(num.text);
        Integer d = 1;
        if (accept(Tok::Slash)) {
            const Token den = expect(Tok::Int, "a denominator");
            d = Integer(den.text);
            if (d == 0) syntax_error(den.pos, "zero denominator");
        }
        v.kind = Value::Kind::Number;
        v.number = Rational(negative ? Integer(-n) : n, d);
        v.number.canonicalize();
        return v;
    }

    static Expr binary(Expr::Kind kind, Expr lhs, Expr rhs, SourcePos pos) {
        Expr e;
        e.kind = kind;
        e.pos = pos;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            const Token& t = peek();
            if (t.kind != Tok::Plus && t.kind != Tok::Minus) return lhs;
            const Token op = take();
            lhs = binary(op.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub, std::move(lhs), parse_term(), op.pos);
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            const Token& t = peek();
            if (t.kind != Tok::Star && t.kind != Tok::Slash) return lhs;
            const Token op = take();
            lhs = binary(op.kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div, std::move(lhs), parse_unary(), op.pos);
        }
    }

    Expr parse_unary() {
        if (peek().kind == Tok::Minus) {
            const Token op = take();
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.pos = op.pos;
            e.operands.push_back(parse_unary());
            return e;
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek().kind != Tok::Caret) return base;
        const Token op = take();
        const bool negative = accept(Tok::Minus);
        Expr e;
        e.kind = Expr::Kind::Pow;
        e.pos = op.pos;
        e.exponent = to_int(expect(Tok::Int, "an integer exponent"), negative);
        e.operands.push_back(std::move(base));
        return e;
    }

    Expr parse_atom() {
        const Token t = peek();
        Expr e;
        e.pos = t.pos;
        if (t.kind == Tok::Int) {
            take();
            e.kind = Expr::Kind::Number;
            e.number = Integer(t.text);
            return e;
        }
        if (t.kind == Tok::Name) {
            take();
            e.kind = Expr::Kind::Name;
            e.name = t.text;
            return e;
        }
        if (t.kind == Tok::LParen) {
            take();
            e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        syntax_error(t.pos, "expected an expression, found " + describe(t));
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

// Semantic checks

struct SymbolInfo {
    enum class Kind { Base, Var, Let, Morphism };
    Kind kind;
    int degree = 0;
};

using Scope = std::map<std::string, SymbolInfo, std::less<>>;

void check_expr(const Expr& e, const Scope& scope, bool allow_lets);

bool odd_generator(const Expr& e, const Scope& scope, std::string& name) {
    const Expr* atom = &e;
    if (e.kind == Expr::Kind::Pow) atom = &e.operands[0];
    if (atom->kind != Expr::Kind::Name) return false;
    auto it = scope.find(atom->name);
    if (it == scope.end() || it->second.kind != SymbolInfo::Kind::Var || !is_odd(it->second.degree)) return false;
    name = atom->name;
    return true;
}

void collect_factors(const Expr& e, std::vector<const Expr*>& out) {
    if (e.kind == Expr::Kind::Mul) {
        collect_factors(e.operands[0], out);
        collect_factors(e.operands[1], out);
    } else if (e.kind == Expr::Kind::Div) {
        collect_factors(e.operands[0], out);
    } else if (e.kind == Expr::Kind::Neg) {
        collect_factors(e.operands[0], out);
    } else {
        out.push_back(&e);
    }
}

void check_expr(const Expr& e, const Scope& scope, bool allow_lets) {
    switch (e.kind) {
    case Expr::Kind::Number: return;
    case Expr::Kind::Name: {
        auto it = scope.find(e.name);
        if (it == scope.end() || (!allow_lets && it->second.kind == SymbolInfo::Kind::Let))
            semantic_error(e.pos, "unknown symbol '" + e.name + "'");
        if (it->second.kind == SymbolInfo::Kind::Morphism)
            semantic_error(e.pos, "'" + e.name + "' is a morphism, not a series");
        return;
    }
    case Expr::Kind::Pow: {
        const Expr& base = e.operands[0];
        check_expr(base, scope, allow_lets);
        if (base.kind == Expr::Kind::Name) {
            const SymbolInfo& info = scope.find(base.name)->second;
            if (info.kind == SymbolInfo::Kind::Var && e.exponent < 0)
                semantic_error(e.pos, "negative power of graded generator '" + base.name + "'");
            if (info.kind == SymbolInfo::Kind::Var && is_odd(info.degree) && e.exponent >= 2)
                semantic_error(e.pos, "odd generator '" + base.name + "' raised to power " +
                                          std::to_string(e.exponent) + "; odd generators square to zero");
        }
        return;
    }
    case Expr::Kind::Div:
        check_expr(e.operands[0], scope, allow_lets);
        if (e.operands[1].kind != Expr::Kind::Number || e.operands[1].number == 0)
            semantic_error(e.operands[1].pos, "division is only by nonzero integer literals");
        break;
    case Expr::Kind::Mul: {
        for (const auto& op : e.operands) check_expr(op, scope, allow_lets);
        std::vector<const Expr*> factors;
        collect_factors(e, factors);
        std::set<std::string> seen;
        for (const Expr* f : factors) {
            std::string name;
            if (odd_generator(*f, scope, name) && !seen.insert(name).second)
                semantic_error(f->pos, "odd generator '" + name + "' appears twice in a product; odd generators square to zero");
        }
        return;
    }
    default:
        for (const auto& op : e.operands) check_expr(op, scope, allow_lets);
    }
}

class Analyzer {
public:
    void run(const Script& script) {
        for (const auto& st : script.statements) std::visit([&](const auto& node) { check(node, st.pos); }, st.node);
    }

private:
    void declare(Scope& scope, const std::string& name, SymbolInfo info, SourcePos pos) {
        if (!scope.emplace(name, info).second) semantic_error(pos, "'" + name + "' is already defined");
    }

    void check(const OrderDecl& d, SourcePos pos) {
        if (order_seen_) semantic_error(pos, "truncation order declared twice");
        if (d.order < 1) semantic_error(pos, "truncation order must be positive");
        order_seen_ = true;
    }
    void check(const BaseDecl& d, SourcePos pos) { declare(scope_, d.name, {SymbolInfo::Kind::Base, 0}, pos); }
    void check(const VarDecl& d, SourcePos pos) {
        if (d.degree == 0) semantic_error(pos, "generator '" + d.name + "' has degree 0; use 'base' for degree-0 symbols");
        declare(scope_, d.name, {SymbolInfo::Kind::Var, d.degree}, pos);
    }
    void check(const LetDecl& d, SourcePos pos) {
        check_expr(d.expr, scope_, true);
        declare(scope_, d.name, {SymbolInfo::Kind::Let, 0}, pos);
    }
    void check_mappings(const std::vector<Mapping>& mappings, const Scope& target, const Scope& source, bool lets) {
        std::set<std::string> seen;
        for (const auto& m : mappings) {
            auto it = target.find(m.symbol);
            if (it == target.end() || it->second.kind == SymbolInfo::Kind::Let ||
                it->second.kind == SymbolInfo::Kind::Morphism)
                semantic_error(m.pos, "unknown symbol '" + m.symbol + "'");
            if (!seen.insert(m.symbol).second) semantic_error(m.pos, "symbol '" + m.symbol + "' mapped twice");
            check_expr(m.expr, source, lets);
        }
    }
    void check(const MorphismDecl& d, SourcePos pos) {
        check_mappings(d.mappings, scope_, scope_, true);
        declare(scope_, d.name, {SymbolInfo::Kind::Morphism, 0}, pos);
    }
    void check(const ChartDecl& d, SourcePos pos) {
        if (charts_.count(d.name)) semantic_error(pos, "chart '" + d.name + "' is already defined");
        Scope scope;
        for (const auto& s : d.symbols) {
            if (const auto* b = std::get_if<BaseDecl>(&s)) {
                declare(scope, b->name, {SymbolInfo::Kind::Base, 0}, pos);
            } else {
                const auto& v = std::get<VarDecl>(s);
                if (v.degree == 0) semantic_error(pos, "generator '" + v.name + "' has degree 0");
                declare(scope, v.name, {SymbolInfo::Kind::Var, v.degree}, pos);
            }
        }
        charts_.emplace(d.name, std::move(scope));
    }
    void check(const TransitionDecl& d, SourcePos pos) {
        for (const auto* id : {&d.from, &d.to})
            if (!charts_.count(*id)) semantic_error(pos, "unknown chart '" + *id + "'");
        if (d.from == d.to) semantic_error(pos, "transition from a chart to itself");
        if (!transitions_.insert({d.from, d.to}).second)
            semantic_error(pos, "transition " + d.from + " -> " + d.to + " declared twice");
        check_mappings(d.mappings, charts_.at(d.to), charts_.at(d.from), false);
    }

    // Command arguments.
    struct Args {
        std::vector<const CommandArg*> positional;
        std::map<std::string, const CommandArg*> keyed;
    };

    static Args split(const Command& c, SourcePos pos, const std::set<std::string>& keys) {
        Args a;
        for (const auto& arg : c.args) {
            if (!arg.key) {
                a.positional.push_back(&arg);
                continue;
            }
            if (!keys.count(*arg.key)) semantic_error(arg.pos, c.name + ": unknown argument '" + *arg.key + "'");
            if (!a.keyed.emplace(*arg.key, &arg).second)
                semantic_error(arg.pos, c.name + ": argument '" + *arg.key + "' given twice");
        }
        (void)pos;
        return a;
    }
    static void require_keys(const Command& c, const Args& a, SourcePos pos, const std::vector<std::string>& keys) {
        for (const auto& k : keys)
            if (!a.keyed.count(k)) semantic_error(pos, c.name + ": missing argument '" + k + "'");
    }
    static void require_positional(const Command& c, const Args& a, SourcePos pos, std::size_t n) {
        if (a.positional.size() != n)
            semantic_error(a.positional.size() > n ? a.positional[n]->pos : pos,
                           c.name + ": expected " + std::to_string(n) + " positional argument" + (n == 1 ? "" : "s") +
                               ", found " + std::to_string(a.positional.size()));
    }
    static bool is_word(const CommandArg& arg, const std::string& word) {
        return arg.expr.kind == Expr::Kind::Name && arg.expr.name == word;
    }
    static void require_int(const Command& c, const CommandArg& arg, bool positive) {
        const Value& v = arg.value;
        if (v.kind != Value::Kind::Number || v.number.get_den() != 1 || !v.number.get_num().fits_sint_p() ||
            (positive && v.number <= 0))
            semantic_error(arg.pos, c.name + ": '" + *arg.key + "' must be " + (positive ? "a positive" : "an") + " integer");
    }
    static void require_int_tuple(const Command& c, const CommandArg& arg, bool positive, std::optional<std::size_t> len) {
        const Value& v = arg.value;
        bool ok = v.kind == Value::Kind::Tuple && (!len || v.items.size() == *len);
        if (ok)
            for (const auto& item : v.items)
                ok = ok && item.kind == Value::Kind::Number && item.number.get_den() == 1 &&
                     item.number.get_num().fits_sint_p() && (!positive || item.number > 0);
        if (!ok)
            semantic_error(arg.pos, c.name + ": '" + *arg.key + "' must be a tuple of " +
                                        (len ? std::to_string(*len) + " " : std::string()) +
                                        (positive ? "positive " : "") + "integers");
    }
    void require_morphism(const Command& c, const CommandArg& arg) const {
        auto it = arg.expr.kind == Expr::Kind::Name ? scope_.find(arg.expr.name) : scope_.end();
        if (it == scope_.end() || it->second.kind != SymbolInfo::Kind::Morphism)
            semantic_error(arg.pos, c.name + ": expected a morphism name");
    }
    void require_series(const CommandArg& arg) const { check_expr(arg.expr, scope_, true); }
    static void require_bundle_case(const Command& c, const CommandArg& arg) {
        if (!is_word(arg, "N") && !is_word(arg, "Z")) semantic_error(arg.pos, c.name + ": expected bundle case N or Z");
    }
    static void check_cp1(const Command& c, const Args& a, SourcePos pos) {
        require_positional(c, a, pos, 2);
        require_bundle_case(c, *a.positional[1]);
        require_keys(c, a, pos, {"k", "l", "section"});
        require_int(c, *a.keyed.at("k"), false);
        require_int(c, *a.keyed.at("l"), false);
        const CommandArg& section = *a.keyed.at("section");
        bool ok = section.value.kind == Value::Kind::Tuple;
        if (ok)
            for (const auto& item : section.value.items) ok = ok && item.kind == Value::Kind::Number;
        if (!ok) semantic_error(section.pos, c.name + ": 'section' must be a tuple of rationals");
    }

    void check(const Command& c, SourcePos pos) {
        const std::string& n = c.name;
        if (n == "print" || n == "normalform" || n == "bigrade") {
            const Args a = split(c, pos, {});
            require_positional(c, a, pos, 1);
            require_series(*a.positional[0]);
        } else if (n == "mul") {
            const Args a = split(c, pos, {});
            require_positional(c, a, pos, 2);
            for (const auto* arg : a.positional) require_series(*arg);
        } else if (n == "apply") {
            const Args a = split(c, pos, {});
            require_positional(c, a, pos, 2);
            require_morphism(c, *a.positional[0]);
            require_series(*a.positional[1]);
        } else if (n == "compose") {
            const Args a = split(c, pos, {});
            require_positional(c, a, pos, 2);
            for (const auto* arg : a.positional) require_morphism(c, *arg);
        } else if (n == "truncate") {
            const Args a = split(c, pos, {"p"});
            require_positional(c, a, pos, 1);
            require_series(*a.positional[0]);
            require_keys(c, a, pos, {"p"});
            require_int(c, *a.keyed.at("p"), true);
        } else if (n == "hilbert") {
            const Args a = split(c, pos, {"a", "b", "c"});
            require_positional(c, a, pos, 0);
            require_keys(c, a, pos, {"a", "b", "c"});
            require_int_tuple(c, *a.keyed.at("a"), true, std::nullopt);
            require_int_tuple(c, *a.keyed.at("b"), true, std::nullopt);
            require_int(c, *a.keyed.at("c"), false);
        } else if (n == "obstruction") {
            const Args a = split(c, pos, {"k", "l"});
            require_positional(c, a, pos, 1);
            require_bundle_case(c, *a.positional[0]);
            require_keys(c, a, pos, {"k", "l"});
            require_int(c, *a.keyed.at("k"), false);
            require_int(c, *a.keyed.at("l"), false);
        } else if (n == "quotient") {
            const Args a = split(c, pos, {"p", "i"});
            require_positional(c, a, pos, 0);
            require_keys(c, a, pos, {"p", "i"});
            require_int(c, *a.keyed.at("p"), true);
            require_int(c, *a.keyed.at("i"), false);
        } else if (n == "cocycle") {
            const bool cp1 = !c.args.empty() && !c.args.front().key && is_word(c.args.front(), "cp1");
            if (cp1) {
                check_cp1(c, split(c, pos, {"k", "l", "section"}), pos);
                return;
            }
            const Args a = split(c, pos, {"triples"});
            require_positional(c, a, pos, 0);
            if (charts_.empty()) semantic_error(pos, "cocycle: no charts declared");
            if (a.keyed.count("triples")) {
                const CommandArg& arg = *a.keyed.at("triples");
                bool ok = arg.value.kind == Value::Kind::Tuple;
                for (const auto& t : arg.value.items) {
                    ok = ok && t.kind == Value::Kind::Tuple && t.items.size() == 3;
                    if (!ok) break;
                    for (const auto& id : t.items) {
                        if (id.kind != Value::Kind::Name) ok = false;
                        else if (!charts_.count(id.name)) semantic_error(id.pos, "unknown chart '" + id.name + "'");
                    }
                }
                if (!ok) semantic_error(arg.pos, "cocycle: 'triples' must be a tuple of chart-name triples");
            }
        } else if (n == "coboundary") {
            const Args a = split(c, pos, {"k", "l", "section", "window"});
            if (a.positional.empty() || !is_word(*a.positional[0], "cp1"))
                semantic_error(pos, "coboundary: only 'coboundary cp1 N|Z k=.. l=.. section=(..)' is supported");
            check_cp1(c, a, pos);
            if (a.keyed.count("window")) {
                const CommandArg& w = *a.keyed.at("window");
                require_int_tuple(c, w, false, 2);
                if (w.value.items[0].number > w.value.items[1].number)
                    semantic_error(w.pos, "coboundary: empty window");
            }
        }
    }

    Scope scope_;
    std::map<std::string, Scope> charts_;
    std::set<std::pair<std::string, std::string>> transitions_;
    bool order_seen_ = false;
};

// Printer

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
    }
}

void print_expr(const Expr& e, std::string& out);

void print_operand(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print_expr(e, out);
    if (wrap) out += ')';
}

void print_expr(const Expr& e, std::string& out) {
    const int p = precedence(e);
    switch (e.kind) {
    case Expr::Kind::Number: out += e.number.get_str(); break;
    case Expr::Kind::Name: out += e.name; break;
    case Expr::Kind::Neg:
        out += '-';
        print_operand(e.operands[0], precedence(e.operands[0]) < 3, out);
        break;
    case Expr::Kind::Pow:
        print_operand(e.operands[0], precedence(e.operands[0]) < 5, out);
        out += '^' + std::to_string(e.exponent);
        break;
    default: {
        const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - " : e.kind == Expr::Kind::Mul ? "*" : "/";
        print_operand(e.operands[0], precedence(e.operands[0]) < p, out);
        out += op;
        print_operand(e.operands[1], precedence(e.operands[1]) <= p, out);
    }
    }
}

std::string print_value(const Value& v) {
    switch (v.kind) {
    case Value::Kind::Number: return v.number.get_str();
    case Value::Kind::Name: return v.name;
    case Value::Kind::Tuple: break;
    }
    std::string out = "(";
    for (std::size_t i = 0; i < v.items.size(); ++i) out += (i ? "," : "") + print_value(v.items[i]);
    return out + ")";
}

std::string print_mappings(const std::vector<Mapping>& mappings) {
    std::string out = " {\n";
    for (const auto& m : mappings) out += "  " + m.symbol + " -> " + print(m.expr) + ";\n";
    return out + "}";
}

struct StatementPrinter {
    std::string operator()(const OrderDecl& d) const { return "order " + std::to_string(d.order); }
    std::string operator()(const BaseDecl& d) const { return "base " + d.name + (d.laurent ? " laurent" : ""); }
    std::string operator()(const VarDecl& d) const { return "var " + d.name + " deg " + std::to_string(d.degree); }
    std::string operator()(const LetDecl& d) const { return "let " + d.name + " = " + print(d.expr); }
    std::string operator()(const MorphismDecl& d) const { return "morphism " + d.name + print_mappings(d.mappings); }
    std::string operator()(const ChartDecl& d) const {
        std::string out = "chart " + d.name + " {\n";
        for (const auto& s : d.symbols) out += "  " + std::visit(*this, std::variant<BaseDecl, VarDecl>(s)) + ";\n";
        return out + "}";
    }
    std::string operator()(const std::variant<BaseDecl, VarDecl>& s) const {
        return std::visit([this](const auto& d) { return (*this)(d); }, s);
    }
    std::string operator()(const TransitionDecl& d) const {
        return "transition " + d.from + " -> " + d.to + print_mappings(d.mappings);
    }
    std::string operator()(const Command& c) const {
        std::string out = c.name;
        bool previous_expr = false;
        for (const auto& arg : c.args) {
            if (arg.key) {
                out += " " + *arg.key + "=" + print_value(arg.value);
                previous_expr = false;
            } else {
                out += (previous_expr ? ", " : " ") + print(arg.expr);
                previous_expr = true;
            }
        }
        return out;
    }
};

} // namespace

Script parse(std::string_view source) {
    Parser parser(tokenize(source));
    Script script = parser.parse_script();
    Analyzer().run(script);
    return script;
}

std::string print(const Expr& expr) {
    std::string out;
    print_expr(expr, out);
    return out;
}

std::string print(const Script& script) {
    std::string out;
    for (const auto& st : script.statements) out += std::visit(StatementPrinter{}, st.node) + ";\n";
    return out;
}

// Execution

namespace {

using nlohmann::ordered_json;

constexpr int kDefaultOrder = 4;

struct CommandFailure {
    SourcePos pos;
    std::string message;
};

struct Result {
    std::string text;
    std::optional<bool> passed;
    ordered_json data = ordered_json::object();
};

int int_of(const Value& v) { return static_cast<int>(v.number.get_num().get_si()); }

std::vector<int> ints_of(const Value& v) {
    std::vector<int> out;
    for (const auto& item : v.items) out.push_back(int_of(item));
    return out;
}

std::string format_solutions(const std::vector<Solution>& sols) {
    std::string out = "{";
    for (std::size_t i = 0; i < sols.size(); ++i) out += (i ? ", " : "") + to_string(sols[i]);
    return out + "}";
}

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

class Runner {
public:
    Runner(const Script& script, const RunOptions& options) : script_(script) {
        order_ = kDefaultOrder;
        VariableTable table;
        for (const auto& st : script.statements) {
            if (const auto* d = std::get_if<OrderDecl>(&st.node)) order_ = d->order;
            if (const auto* d = std::get_if<BaseDecl>(&st.node)) table.add_base(d->name);
            if (const auto* d = std::get_if<VarDecl>(&st.node)) table.add_graded(d->name, d->degree);
        }
        if (options.order) order_ = *options.order;
        table_ = make_table(std::move(table));
    }

    int order() const { return order_; }

    // Executes statements, reporting each command result through `emit`.
    template <typename Emit>
    void execute(Emit&& emit) {
        for (const auto& st : script_.statements) {
            current_ = st.pos;
            try {
                std::visit([&](const auto& node) { this->step(node, st.pos, emit); }, st.node);
            } catch (const Error& e) {
                throw CommandFailure{current_, e.what()};
            }
        }
    }

private:
    template <typename Emit>
    void step(const OrderDecl&, SourcePos, Emit&) {}
    template <typename Emit>
    void step(const BaseDecl&, SourcePos, Emit&) {}
    template <typename Emit>
    void step(const VarDecl&, SourcePos, Emit&) {}

    template <typename Emit>
    void step(const LetDecl& d, SourcePos, Emit&) {
        lets_.insert_or_assign(d.name, eval(d.expr, table_, true));
    }

    GradedMorphism build_morphism(const TablePtr& source, const TablePtr& target, const std::vector<Mapping>& mappings,
                                  bool lets, const std::string& what) {
        std::map<std::string, const Mapping*> by_symbol;
        for (const auto& m : mappings) by_symbol.emplace(m.symbol, &m);
        auto image = [&](const std::string& symbol, GradedSeries fallback) {
            auto it = by_symbol.find(symbol);
            if (it == by_symbol.end()) return fallback;
            current_ = it->second->pos;
            return eval(it->second->expr, source, lets);
        };
        std::vector<GradedSeries> base, graded;
        const bool endo = source == target;
        for (std::size_t j = 0; j < target->base_arity(); ++j) {
            const auto& name = target->base_symbols()[j];
            if (!endo && !by_symbol.count(name)) fail(what + ": no image for '" + name + "'");
            base.push_back(image(name, GradedSeries::base_symbol(source, order_, j)));
        }
        for (std::size_t i = 0; i < target->graded_count(); ++i) {
            const auto& name = target->graded_symbols()[i].name;
            if (!endo && !by_symbol.count(name)) fail(what + ": no image for '" + name + "'");
            graded.push_back(image(name, GradedSeries::generator(source, order_, i)));
        }
        GradedMorphism phi(source, target, std::move(base), std::move(graded));
        const auto report = check_degree_preserving(phi);
        if (!report.passed) fail(what + ": degree mismatch: " + report.failures.front());
        return phi;
    }

    template <typename Emit>
    void step(const MorphismDecl& d, SourcePos pos, Emit&) {
        auto phi = build_morphism(table_, table_, d.mappings, true, "morphism " + d.name);
        current_ = pos;
        morphisms_.insert_or_assign(d.name, std::move(phi));
    }

    Atlas& atlas() {
        if (!atlas_) atlas_.emplace(order_);
        return *atlas_;
    }

    template <typename Emit>
    void step(const ChartDecl& d, SourcePos, Emit&) {
        VariableTable table;
        std::vector<bool> laurent;
        for (const auto& s : d.symbols) {
            if (const auto* b = std::get_if<BaseDecl>(&s)) {
                table.add_base(b->name);
                laurent.push_back(b->laurent);
            } else {
                const auto& v = std::get<VarDecl>(s);
                table.add_graded(v.name, v.degree);
            }
        }
        atlas().add_chart({d.name, make_table(std::move(table)), std::move(laurent)});
    }

    template <typename Emit>
    void step(const TransitionDecl& d, SourcePos pos, Emit&) {
        const std::string what = "transition " + d.from + " -> " + d.to;
        auto phi = build_morphism(atlas().chart(d.from).table, atlas().chart(d.to).table, d.mappings, false, what);
        current_ = pos;
        atlas().add_transition(d.from, d.to, std::move(phi));
    }

    template <typename Emit>
    void step(const Command& c, SourcePos pos, Emit& emit) {
        std::vector<const CommandArg*> positional;
        std::map<std::string, const Value*> keyed;
        for (const auto& arg : c.args) {
            if (arg.key) keyed.emplace(*arg.key, &arg.value);
            else positional.push_back(&arg);
        }
        auto series = [&](std::size_t i) {
            current_ = positional[i]->pos;
            return eval(positional[i]->expr, table_, true);
        };
        auto morphism = [&](std::size_t i) { return morphisms_.at(positional[i]->expr.name); };

        Result r;
        const std::string& n = c.name;
        if (n == "print") {
            r.text = to_string(series(0)) + "\n";
        } else if (n == "mul") {
            const auto f = series(0);
            const auto g = series(1);
            current_ = pos;
            r.text = to_string(f * g) + "\n";
        } else if (n == "apply") {
            const auto f = series(1);
            current_ = pos;
            r.text = to_string(pullback(morphism(0), f)) + "\n";
        } else if (n == "compose") {
            r.text = to_string(compose(morphism(0), morphism(1))) + "\n";
        } else if (n == "truncate") {
            const auto f = series(0);
            current_ = pos;
            r.text = to_string(truncate(f, int_of(*keyed.at("p")))) + "\n";
        } else if (n == "normalform") {
            const auto f = series(0);
            current_ = pos;
            if (f.is_zero()) r.text = "0\n";
            for (const auto& [d, comp] : f.components()) r.text += to_string(to_normal_form(comp));
        } else if (n == "bigrade") {
            const auto f = series(0);
            current_ = pos;
            const auto report = check_gr_idempotence(f, f.order());
            r.text = to_string(associated_graded(f));
            r.text += "gr idempotence: " + pass_fail(report.passed) + "\n";
            for (const auto& failure : report.failures) r.text += "  " + failure + "\n";
            r.passed = report.passed;
        } else if (n == "hilbert") {
            const DegreeEquation eq(ints_of(*keyed.at("a")), ints_of(*keyed.at("b")), int_of(*keyed.at("c")));
            const auto h = hilbert_data(eq);
            // No solutions at all prints as the empty set.
            if (eq.c == 0)
                r.text = format_solutions(h.homogeneous_basis);
            else if (h.inhomogeneous_minimal.empty())
                r.text = "{}";
            else
                r.text = format_solutions(h.inhomogeneous_minimal) + " + N" + format_solutions(h.homogeneous_basis);
            r.text += "\n";
            auto list = [](const std::vector<Solution>& sols) {
                ordered_json arr = ordered_json::array();
                for (const auto& s : sols) arr.push_back({{"p", s.p}, {"q", s.q}});
                return arr;
            };
            r.data["homogeneous"] = list(h.homogeneous_basis);
            if (eq.c != 0) r.data["minimal"] = list(h.inhomogeneous_minimal);
        } else if (n == "obstruction") {
            const bool z = positional[0]->expr.name == "Z";
            const int k = int_of(*keyed.at("k")), l = int_of(*keyed.at("l"));
            const auto spec = z ? LineBundleSpec::z_case(k, l) : LineBundleSpec::n_case(k, l);
            const long dim = obstruction_dimension(spec);
            const int value = z ? k + l : 2 * k - l;
            const int threshold = z ? 4 : 2;
            const std::string label = z ? "k+l" : "2k-l";
            const bool nontrivial = dim > 0;
            r.text = "dim = " + std::to_string(dim) + ", " + (nontrivial ? "nontrivial (" : "trivial (") + label + "=" +
                     std::to_string(value) + (nontrivial ? " >= " : " < ") + std::to_string(threshold) + ")\n";
            r.data["dimension"] = dim;
            r.data["nontrivial"] = nontrivial;
        } else if (n == "quotient") {
            const int p = int_of(*keyed.at("p")), i = int_of(*keyed.at("i"));
            const long dim = quotient_graded_dimension(table_->graded_dimension(), p, i, 2 * p + std::abs(i));
            r.text = "dim = " + std::to_string(dim) + "\n";
            r.data["dimension"] = dim;
        } else if (n == "cocycle") {
            cocycle(c, positional, keyed, r);
        } else if (n == "coboundary") {
            coboundary(positional, keyed, r);
        }
        emit(c, pos, r);
    }

    static LineBundleSpec cp1_spec(const std::vector<const CommandArg*>& positional,
                                   const std::map<std::string, const Value*>& keyed) {
        const int k = int_of(*keyed.at("k")), l = int_of(*keyed.at("l"));
        return positional[1]->expr.name == "Z" ? LineBundleSpec::z_case(k, l) : LineBundleSpec::n_case(k, l);
    }

    Atlas cp1_atlas(const LineBundleSpec& spec, const std::map<std::string, const Value*>& keyed) const {
        std::vector<Rational> section;
        for (const auto& item : keyed.at("section")->items) section.push_back(item.number);
        return build_cp1_example(spec, section, order_);
    }

    void cocycle(const Command&, const std::vector<const CommandArg*>& positional,
                 const std::map<std::string, const Value*>& keyed, Result& r) {
        const bool cp1 = !positional.empty();
        const Atlas a = cp1 ? cp1_atlas(cp1_spec(positional, keyed), keyed) : atlas();
        bool ok = true;
        ordered_json items = ordered_json::array();
        auto report_item = [&](const std::string& label, const CheckReport& rep) {
            r.text += label + ": " + pass_fail(rep.passed) + "\n";
            for (const auto& f : rep.failures) r.text += "  " + f + "\n";
            items.push_back({{"check", label}, {"passed", rep.passed}});
            ok = ok && rep.passed;
        };
        for (const auto& [key, t] : a.transitions()) {
            CheckReport rep;
            const auto& [from, to] = key;
            if (!a.has_transition(to, from)) rep.fail("no transition " + to + " -> " + from);
            else if (!is_inverse_pair(t, a.transition(to, from)))
                rep.fail("composite with " + to + " -> " + from + " is not the identity modulo F^" + std::to_string(a.order()));
            report_item("inverse " + from + " -> " + to, rep);
        }
        std::vector<ChartTriple> triples;
        if (keyed.count("triples")) {
            for (const auto& t : keyed.at("triples")->items) triples.push_back({t.items[0].name, t.items[1].name, t.items[2].name});
        } else {
            triples = default_triples(a);
        }
        for (const auto& t : triples)
            report_item("triple (" + t.i + "," + t.j + "," + t.k + ")", check_cocycle(a, std::vector<ChartTriple>{t}));
        r.text += "cocycle: " + pass_fail(ok) + "\n";
        r.passed = ok;
        r.data["checks"] = std::move(items);
    }

    void coboundary(const std::vector<const CommandArg*>& positional, const std::map<std::string, const Value*>& keyed,
                    Result& r) {
        const auto spec = cp1_spec(positional, keyed);
        const Atlas twisted = cp1_atlas(spec, keyed);
        ExponentWindow window = ExponentWindow::default_for(spec);
        if (keyed.count("window")) {
            const auto w = ints_of(*keyed.at("window"));
            window = {w[0], w[1]};
        }
        const auto search = search_cp1_splitting(spec, twisted, window);
        r.text = "unknowns: " + std::to_string(search.unknowns) + "\n";
        r.text += search.summary + "\n";
        if (search.found) {
            const std::vector<std::string> x{"x"}, y{"y"};
            r.text += "gamma0 = " + search.gamma0.to_string(x) + "\n";
            r.text += "gamma1 = " + search.gamma1.to_string(y) + "\n";
            r.data["gamma0"] = search.gamma0.to_string(x);
            r.data["gamma1"] = search.gamma1.to_string(y);
        }
        r.text += "coboundary: " + pass_fail(search.found) + "\n";
        r.data["unknowns"] = search.unknowns;
        r.passed = search.found;
    }

    [[noreturn]] void fail(const std::string& message) { throw CommandFailure{current_, message}; }

    GradedSeries eval(const Expr& e, const TablePtr& table, bool lets) {
        const SourcePos saved = current_;
        current_ = e.pos;
        GradedSeries out = eval_node(e, table, lets);
        current_ = saved;
        return out;
    }

    GradedSeries eval_node(const Expr& e, const TablePtr& table, bool lets) {
        switch (e.kind) {
        case Expr::Kind::Number: return GradedSeries::constant(table, order_, Rational(e.number));
        case Expr::Kind::Name: {
            if (auto j = table->find_base(e.name)) return GradedSeries::base_symbol(table, order_, *j);
            if (auto i = table->find_graded(e.name)) return GradedSeries::generator(table, order_, *i);
            if (lets) {
                auto it = lets_.find(e.name);
                if (it != lets_.end()) return it->second;
            }
            fail("unknown symbol '" + e.name + "'");
        }
        case Expr::Kind::Neg: return -eval(e.operands[0], table, lets);
        case Expr::Kind::Add: return eval(e.operands[0], table, lets) + eval(e.operands[1], table, lets);
        case Expr::Kind::Sub: return eval(e.operands[0], table, lets) - eval(e.operands[1], table, lets);
        case Expr::Kind::Mul: return eval(e.operands[0], table, lets) * eval(e.operands[1], table, lets);
        case Expr::Kind::Div:
            return eval(e.operands[0], table, lets) * Rational(Integer(1), e.operands[1].number);
        case Expr::Kind::Pow: {
            const GradedSeries base = eval(e.operands[0], table, lets);
            if (e.exponent >= 0) return power(base, e.exponent);
            const LaurentCoefficient c = base.base_part();
            if (base.term_count() != (c.is_zero() ? 0u : 1u) || !c.is_unit())
                fail("negative power of a non-invertible expression");
            return GradedSeries::constant(table, order_, c.pow(e.exponent));
        }
        }
        fail("unsupported expression");
    }

    const Script& script_;
    int order_;
    TablePtr table_;
    std::map<std::string, GradedSeries> lets_;
    std::map<std::string, GradedMorphism> morphisms_;
    std::optional<Atlas> atlas_;
    SourcePos current_;
};

} // namespace

int run(std::string_view source, const RunOptions& options, std::ostream& out, std::ostream& err) {
    ordered_json doc;
    ordered_json results = ordered_json::array();
    int code = kExitPass;
    auto finish = [&](int exit_code) {
        if (options.json) {
            doc["exit_code"] = exit_code;
            doc["results"] = std::move(results);
            out << doc.dump(2) << "\n";
        }
        return exit_code;
    };
    auto report_error = [&](SourcePos pos, bool with_column, const std::string& message) {
        if (options.json) {
            ordered_json e{{"line", pos.line}};
            if (with_column) e["column"] = pos.column;
            e["message"] = message;
            doc["error"] = std::move(e);
        } else {
            err << "line " << pos.line;
            if (with_column) err << ", column " << pos.column;
            err << ": " << message << "\n";
        }
    };

    if (options.order && *options.order < 1) {
        report_error({0, 0}, false, "error: truncation order must be positive");
        return finish(kExitError);
    }
    Script script;
    try {
        script = parse(source);
    } catch (const ScriptError& e) {
        report_error(e.pos(), true, std::string(e.kind() == ScriptError::Kind::Syntax ? "syntax error: " : "error: ") +
                                        e.message());
        return finish(kExitError);
    }

    Runner runner(script, options);
    if (options.json) doc["order"] = runner.order();
    try {
        runner.execute([&](const Command& c, SourcePos pos, const Result& r) {
            if (r.passed && !*r.passed) code = kExitCheckFailed;
            if (options.json) {
                ordered_json item{{"line", pos.line}, {"command", c.name}};
                if (r.passed) item["passed"] = *r.passed;
                for (const auto& [k, v] : r.data.items()) item[k] = v;
                item["output"] = r.text;
                results.push_back(std::move(item));
            } else {
                out << r.text;
            }
        });
    } catch (const CommandFailure& f) {
        report_error(f.pos, true, "error: " + f.message);
        return finish(kExitError);
    } catch (const Error& e) {
        report_error({0, 0}, false, std::string("error: ") + e.what());
        return finish(kExitError);
    }
    return finish(code);
}

} // namespace gradkernel::script
