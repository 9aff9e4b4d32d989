#include "sepwp/expr.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

namespace sepwp::expr {

std::string VarRef::name() const
{
    return std::string(1, static_cast<char>(ns)) + std::to_string(index);
}

ParseError::ParseError(std::size_t offset, std::string message, std::string token)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message +
                         (token.empty() ? std::string() : " ('" + token + "')")),
      offset_(offset), message_(std::move(message)), token_(std::move(token))
{
}

std::span<const double> Bindings::get(Namespace ns) const
{
    switch (ns) {
    case Namespace::P: return p;
    case Namespace::Z: return z;
    case Namespace::X: return x;
    case Namespace::W: return w;
    case Namespace::Y: return y;
    }
    return {};
}

// ============================================================================
// Lexer
// ============================================================================

namespace {

enum class Tok { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const noexcept { return cur_; }

    Token take()
    {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance()
    {
        while (pos_ < src_.size() && is_space(src_[pos_]))
            ++pos_;
        cur_ = Token{};
        cur_.offset = pos_;
        if (pos_ >= src_.size())
            return;

        const char c = src_[pos_];
        const std::size_t start = pos_;
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
            lex_number();
            return;
        }
        if (is_alpha(c)) {
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_])))
                ++pos_;
            cur_.kind = Tok::Ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        ++pos_;
        cur_.text = src_.substr(start, 1);
        switch (c) {
        case '+': cur_.kind = Tok::Plus; break;
        case '-': cur_.kind = Tok::Minus; break;
        case '*': cur_.kind = Tok::Star; break;
        case '/': cur_.kind = Tok::Slash; break;
        case '^': cur_.kind = Tok::Caret; break;
        case '(': cur_.kind = Tok::LParen; break;
        case ')': cur_.kind = Tok::RParen; break;
        case ',': cur_.kind = Tok::Comma; break;
        default:
            throw ParseError(start, "unexpected character", std::string(cur_.text));
        }
    }

    void lex_number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_]))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_]))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-'))
                ++q;
            if (q < src_.size() && is_digit(src_[q])) {
                pos_ = q;
                while (pos_ < src_.size() && is_digit(src_[pos_]))
                    ++pos_;
            }
        }
        cur_.kind = Tok::Number;
        cur_.text = src_.substr(start, pos_ - start);
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, cur_.number);
        if (ec != std::errc() || ptr != last || !std::isfinite(cur_.number))
            throw ParseError(start, "invalid number", std::string(cur_.text));
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token cur_;
};

// ============================================================================
// Parser
// ============================================================================

std::unique_ptr<Node> make(Node::Kind kind)
{
    auto n = std::make_unique<Node>();
    n->kind = kind;
    return n;
}

std::unique_ptr<Node> make_binary(Node::Kind kind, std::unique_ptr<Node> a, std::unique_ptr<Node> b)
{
    auto n = make(kind);
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return n;
}

bool has_variables(const Node& n)
{
    if (n.kind == Node::Kind::Variable)
        return true;
    for (const auto& c : n.children)
        if (has_variables(*c))
            return true;
    return false;
}

double eval_node(const Node& n, const Bindings& b);

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src), size_(src.size()) {}

    std::unique_ptr<Node> parse_all()
    {
        auto root = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) {
            if (t.kind == Tok::RParen)
                throw ParseError(t.offset, "unbalanced parentheses", std::string(t.text));
            throw ParseError(t.offset, "unexpected token", std::string(t.text));
        }
        return root;
    }

private:
    std::unique_ptr<Node> parse_sum()
    {
        auto lhs = parse_product();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k != Tok::Plus && k != Tok::Minus)
                return lhs;
            lex_.take();
            auto rhs = parse_product();
            lhs = make_binary(k == Tok::Plus ? Node::Kind::Add : Node::Kind::Sub, std::move(lhs), std::move(rhs));
        }
    }

    std::unique_ptr<Node> parse_product()
    {
        auto lhs = parse_unary();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k != Tok::Star && k != Tok::Slash)
                return lhs;
            lex_.take();
            auto rhs = parse_unary();
            lhs = make_binary(k == Tok::Star ? Node::Kind::Mul : Node::Kind::Div, std::move(lhs), std::move(rhs));
        }
    }

    std::unique_ptr<Node> parse_unary()
    {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            auto n = make(Node::Kind::Negate);
            n->children.push_back(parse_unary());
            return n;
        }
        return parse_power();
    }

    std::unique_ptr<Node> parse_power()
    {
        auto base = parse_atom();
        if (lex_.peek().kind != Tok::Caret)
            return base;
        lex_.take();
        const std::size_t exp_offset = lex_.peek().offset;
        auto exponent = parse_unary();
        if (has_variables(*exponent))
            throw ParseError(exp_offset, "exponent must be an integer constant", "");
        double v = 0.0;
        try {
            v = eval_node(*exponent, Bindings{});
        } catch (const EvalError& e) {
            throw ParseError(exp_offset, std::string("invalid exponent: ") + e.what(), "");
        }
        if (!std::isfinite(v) || v != std::trunc(v) || std::fabs(v) > 1024.0)
            throw ParseError(exp_offset, "non-integer exponent", "");
        auto n = make_binary(Node::Kind::Pow, std::move(base), std::move(exponent));
        n->exponent = static_cast<int>(v);
        return n;
    }

    std::unique_ptr<Node> parse_atom()
    {
        Token t = lex_.take();
        switch (t.kind) {
        case Tok::Number: {
            auto n = make(Node::Kind::Constant);
            n->value = t.number;
            return n;
        }
        case Tok::LParen: {
            auto inner = parse_sum();
            expect_close(t.offset);
            return inner;
        }
        case Tok::Ident:
            return parse_identifier(t);
        case Tok::End:
            throw ParseError(size_, "expected operand", "");
        case Tok::RParen:
            throw ParseError(t.offset, "unbalanced parentheses", std::string(t.text));
        default:
            throw ParseError(t.offset, "expected operand", std::string(t.text));
        }
    }

    std::unique_ptr<Node> parse_identifier(const Token& t)
    {
        if (auto var = as_variable(t.text)) {
            auto n = make(Node::Kind::Variable);
            n->var = *var;
            return n;
        }

        int arity = 0;
        Function fn{};
        if (t.text == "abs") { fn = Function::Abs; arity = 1; }
        else if (t.text == "sqrt") { fn = Function::Sqrt; arity = 1; }
        else if (t.text == "min2") { fn = Function::Min2; arity = 2; }
        else if (t.text == "max2") { fn = Function::Max2; arity = 2; }
        else
            throw ParseError(t.offset, "unknown identifier", std::string(t.text));

        const Token open = lex_.take();
        if (open.kind != Tok::LParen)
            throw ParseError(open.offset, "expected '(' after function name", std::string(open.text));

        auto n = make(Node::Kind::Call);
        n->fn = fn;
        n->children.push_back(parse_sum());
        while (lex_.peek().kind == Tok::Comma) {
            const Token comma = lex_.take();
            if (static_cast<int>(n->children.size()) >= arity)
                throw ParseError(comma.offset, "arity mismatch: " + std::string(t.text) + " takes " +
                                                   std::to_string(arity) + " argument(s)",
                                 std::string(t.text));
            n->children.push_back(parse_sum());
        }
        if (static_cast<int>(n->children.size()) != arity)
            throw ParseError(lex_.peek().offset, "arity mismatch: " + std::string(t.text) + " takes " +
                                                     std::to_string(arity) + " argument(s)",
                             std::string(t.text));
        expect_close(open.offset);
        return n;
    }

    void expect_close(std::size_t open_offset)
    {
        const Token& t = lex_.peek();
        if (t.kind != Tok::RParen) {
            const std::size_t at = t.kind == Tok::End ? size_ : t.offset;
            throw ParseError(at, "unbalanced parentheses: '(' at offset " + std::to_string(open_offset) +
                                     " is not closed",
                             std::string(t.text));
        }
        lex_.take();
    }

    static std::optional<VarRef> as_variable(std::string_view s)
    {
        if (s.size() < 2)
            return std::nullopt;
        const char c = s[0];
        if (c != 'p' && c != 'z' && c != 'x' && c != 'w' && c != 'y')
            return std::nullopt;
        if (s[1] < '1' || s[1] > '9')
            return std::nullopt;
        int index = 0;
        auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), index);
        if (ec != std::errc() || ptr != s.data() + s.size())
            return std::nullopt;
        return VarRef{static_cast<Namespace>(c), index};
    }

    Lexer lex_;
    std::size_t size_;
};

// ============================================================================
// Evaluation
// ============================================================================

double int_pow(double base, int e)
{
    if (e < 0) {
        if (base == 0.0)
            throw EvalError("division by zero in negative power");
        return 1.0 / int_pow(base, -e);
    }
    double result = 1.0;
    while (e > 0) {
        if (e & 1)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

double eval_node(const Node& n, const Bindings& b)
{
    switch (n.kind) {
    case Node::Kind::Constant:
        return n.value;
    case Node::Kind::Variable: {
        const auto v = b.get(n.var.ns);
        if (n.var.index < 1 || static_cast<std::size_t>(n.var.index) > v.size())
            throw EvalError("unbound variable " + n.var.name());
        return v[static_cast<std::size_t>(n.var.index - 1)];
    }
    case Node::Kind::Negate:
        return -eval_node(*n.children[0], b);
    case Node::Kind::Add:
        return eval_node(*n.children[0], b) + eval_node(*n.children[1], b);
    case Node::Kind::Sub:
        return eval_node(*n.children[0], b) - eval_node(*n.children[1], b);
    case Node::Kind::Mul:
        return eval_node(*n.children[0], b) * eval_node(*n.children[1], b);
    case Node::Kind::Div: {
        const double num = eval_node(*n.children[0], b);
        const double den = eval_node(*n.children[1], b);
        if (den == 0.0)
            throw EvalError("division by zero");
        return num / den;
    }
    case Node::Kind::Pow:
        return int_pow(eval_node(*n.children[0], b), n.exponent);
    case Node::Kind::Call: {
        const double a = eval_node(*n.children[0], b);
        switch (n.fn) {
        case Function::Abs: return std::fabs(a);
        case Function::Sqrt:
            if (a < 0.0)
                throw EvalError("sqrt of negative value");
            return std::sqrt(a);
        case Function::Min2: return std::min(a, eval_node(*n.children[1], b));
        case Function::Max2: return std::max(a, eval_node(*n.children[1], b));
        }
        break;
    }
    }
    throw EvalError("malformed expression node");
}

void collect_vars(const Node& n, std::set<VarRef>& out)
{
    if (n.kind == Node::Kind::Variable)
        out.insert(n.var);
    for (const auto& c : n.children)
        collect_vars(*c, out);
}

std::string format_constant(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

const char* function_name(Function fn)
{
    switch (fn) {
    case Function::Abs: return "abs";
    case Function::Sqrt: return "sqrt";
    case Function::Min2: return "min2";
    case Function::Max2: return "max2";
    }
    return "?";
}

void print(const Node& n, std::string& out)
{
    auto binary = [&](const char* op) {
        out += '(';
        print(*n.children[0], out);
        out += op;
        print(*n.children[1], out);
        out += ')';
    };
    switch (n.kind) {
    case Node::Kind::Constant: out += format_constant(n.value); break;
    case Node::Kind::Variable: out += n.var.name(); break;
    case Node::Kind::Negate:
        out += "(-";
        print(*n.children[0], out);
        out += ')';
        break;
    case Node::Kind::Add: binary(" + "); break;
    case Node::Kind::Sub: binary(" - "); break;
    case Node::Kind::Mul: binary(" * "); break;
    case Node::Kind::Div: binary(" / "); break;
    case Node::Kind::Pow: binary("^"); break;
    case Node::Kind::Call:
        out += function_name(n.fn);
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i)
                out += ", ";
            print(*n.children[i], out);
        }
        out += ')';
        break;
    }
}

bool same_tree(const Node& a, const Node& b)
{
    if (a.kind != b.kind || a.children.size() != b.children.size())
        return false;
    switch (a.kind) {
    case Node::Kind::Constant:
        if (a.value != b.value)
            return false;
        break;
    case Node::Kind::Variable:
        if (a.var != b.var)
            return false;
        break;
    case Node::Kind::Pow:
        if (a.exponent != b.exponent)
            return false;
        break;
    case Node::Kind::Call:
        if (a.fn != b.fn)
            return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_tree(*a.children[i], *b.children[i]))
            return false;
    return true;
}

} // namespace

// ============================================================================
// Expression
// ============================================================================

Expression::Expression(std::unique_ptr<Node> root) : root_(std::move(root)) {}

double Expression::evaluate(const Bindings& b) const
{
    if (!root_)
        throw EvalError("empty expression");
    return eval_node(*root_, b);
}

std::set<VarRef> Expression::free_vars() const
{
    std::set<VarRef> out;
    if (root_)
        collect_vars(*root_, out);
    return out;
}

std::string Expression::to_string() const
{
    std::string out;
    if (root_)
        print(*root_, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b)
{
    if (!a.root_ || !b.root_)
        return !a.root_ && !b.root_;
    return same_tree(*a.root_, *b.root_);
}

Expression parse(std::string_view text)
{
    Parser parser(text);
    return Expression(parser.parse_all());
}

} // namespace sepwp::expr
