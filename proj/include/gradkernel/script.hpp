#pragma once

#include "gradkernel/rational.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gradkernel::script {

/// Position in the source text, 1-based. Positions never take part in
/// equality, so a re-parsed script compares equal to the original.
struct SourcePos {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

struct Expr {
    enum class Kind { Number, Name, Neg, Add, Sub, Mul, Div, Pow };

    Kind kind = Kind::Number;
    Integer number;          // Number
    std::string name;        // Name
    int exponent = 0;        // Pow
    std::vector<Expr> operands;
    SourcePos pos;

    friend bool operator==(const Expr&, const Expr&) = default;
};

/// Right-hand side of `key=value` command arguments.
struct Value {
    enum class Kind { Number, Name, Tuple };

    Kind kind = Kind::Number;
    Rational number;
    std::string name;
    std::vector<Value> items;
    SourcePos pos;

    friend bool operator==(const Value&, const Value&) = default;
};

struct OrderDecl {
    int order = 0;
    friend bool operator==(const OrderDecl&, const OrderDecl&) = default;
};

struct BaseDecl {
    std::string name;
    bool laurent = false;
    friend bool operator==(const BaseDecl&, const BaseDecl&) = default;
};

struct VarDecl {
    std::string name;
    int degree = 0;
    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct LetDecl {
    std::string name;
    Expr expr;
    friend bool operator==(const LetDecl&, const LetDecl&) = default;
};

struct Mapping {
    std::string symbol;
    Expr expr;
    SourcePos pos;
    friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct MorphismDecl {
    std::string name;
    std::vector<Mapping> mappings;
    friend bool operator==(const MorphismDecl&, const MorphismDecl&) = default;
};

struct ChartDecl {
    std::string name;
    std::vector<std::variant<BaseDecl, VarDecl>> symbols;
    friend bool operator==(const ChartDecl&, const ChartDecl&) = default;
};

struct TransitionDecl {
    std::string from;
    std::string to;
    std::vector<Mapping> mappings;
    friend bool operator==(const TransitionDecl&, const TransitionDecl&) = default;
};

struct CommandArg {
    std::optional<std::string> key; // set for key=value arguments
    Expr expr;                      // positional arguments
    Value value;                    // key=value arguments
    SourcePos pos;
    friend bool operator==(const CommandArg&, const CommandArg&) = default;
};

struct Command {
    std::string name;
    std::vector<CommandArg> args;
    friend bool operator==(const Command&, const Command&) = default;
};

using StatementNode =
    std::variant<OrderDecl, BaseDecl, VarDecl, LetDecl, MorphismDecl, ChartDecl, TransitionDecl, Command>;

struct Statement {
    StatementNode node;
    SourcePos pos;
    friend bool operator==(const Statement&, const Statement&) = default;
};

struct Script {
    std::vector<Statement> statements;
    friend bool operator==(const Script&, const Script&) = default;
};

class ScriptError : public std::runtime_error {
public:
    enum class Kind { Syntax, Semantic };

    ScriptError(Kind kind, SourcePos pos, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    SourcePos pos() const noexcept { return pos_; }
    const std::string& message() const noexcept { return message_; }

private:
    Kind kind_;
    SourcePos pos_;
    std::string message_;
};

/// Syntax followed by scope checks: names bound before use, no literal
/// odd squares, well-formed command arguments.
Script parse(std::string_view source);

/// Canonical source text; parse(print(s)) == s.
std::string print(const Script& script);
std::string print(const Expr& expr);

struct RunOptions {
    std::optional<int> order;
    bool json = false;
};

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

/// Parses and executes a script. Results go to `out`, diagnostics to `err`
/// (in JSON mode everything goes to `out`). Returns the exit code.
int run(std::string_view source, const RunOptions& options, std::ostream& out, std::ostream& err);

} // namespace gradkernel::script
