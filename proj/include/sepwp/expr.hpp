#pragma once

// Arithmetic expressions over indexed variables in five namespaces:
//   p  parameter point
//   z  first argument of the bifunction on E1, x  second argument on E1
//   w  first argument of the bifunction on E2, y  second argument on E2
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' exponent)?          right-associative
//   atom    := number | variable | call | '(' sum ')'
//   call    := ('abs' | 'sqrt') '(' sum ')' | ('min2' | 'max2') '(' sum ',' sum ')'
// Exponents must fold to an integer constant; variables are a namespace
// letter followed by a 1-based index ("z1", "p2").

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sepwp::expr {

enum class Namespace : char { P = 'p', Z = 'z', X = 'x', W = 'w', Y = 'y' };

struct VarRef {
    Namespace ns;
    int index; // 1-based

    auto operator<=>(const VarRef&) const = default;
    std::string name() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string message, std::string token);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t offset_;
    std::string message_;
    std::string token_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One vector per namespace. Unused namespaces may stay empty.
struct Bindings {
    std::span<const double> p;
    std::span<const double> z;
    std::span<const double> x;
    std::span<const double> w;
    std::span<const double> y;

    std::span<const double> get(Namespace ns) const;
};

enum class Function { Abs, Sqrt, Min2, Max2 };

struct Node {
    enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

    Kind kind = Kind::Constant;
    double value = 0.0;     // Constant
    VarRef var{Namespace::P, 1};
    Function fn = Function::Abs;
    int exponent = 0;       // Pow: folded value of children[1]
    std::vector<std::unique_ptr<Node>> children;
};

/// Immutable parsed expression. Copies share the tree.
class Expression {
public:
    Expression() = default;
    explicit Expression(std::unique_ptr<Node> root);

    double evaluate(const Bindings& b) const;
    std::set<VarRef> free_vars() const;

    /// Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;

    const Node* root() const noexcept { return root_.get(); }
    bool empty() const noexcept { return !root_; }

    /// Structural equality of the trees.
    friend bool operator==(const Expression& a, const Expression& b);

private:
    std::shared_ptr<const Node> root_;
};

Expression parse(std::string_view text);

} // namespace sepwp::expr
