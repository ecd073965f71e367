#include "paraflat/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace paraflat {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

struct Expr::Node {
    enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, PowInt, Exp, Sin, Cos };
    Kind kind;
    double number = 0.0;
    int exponent = 0;
    std::shared_ptr<const Node> a, b;
    // Number nodes remember their source spelling so that a loaded problem
    // serializes back to bit-identical text.
    std::string spelling;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run()
    {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("expr: " + what + " at position " + std::to_string(pos_) +
                                    " in \"" + s_ + "\"");
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+'))
                lhs = make(Kind::Add, lhs, term());
            else if (consume('-'))
                lhs = make(Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (consume('*'))
                lhs = make(Kind::Mul, lhs, factor());
            else if (consume('/'))
                lhs = make(Kind::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor()
    {
        NodePtr base = unary();
        if (consume('^')) {
            skip_ws();
            // Exponents are literal non-negative integers.
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start) fail("expected integer exponent after '^'");
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::PowInt;
            n->exponent = std::stoi(s_.substr(start, pos_ - start));
            n->a = base;
            return n;
        }
        return base;
    }

    NodePtr unary()
    {
        if (consume('-')) return make(Kind::Neg, unary());
        if (consume('+')) return unary();
        return primary();
    }

    NodePtr primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return name();
        if (consume('(')) {
            NodePtr e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        fail("unexpected character");
    }

    NodePtr number()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else
            }
        }
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::Number;
        n->spelling = s_.substr(start, pos_ - start);
        try {
            n->number = std::stod(n->spelling);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        return n;
    }

    NodePtr name()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string id = s_.substr(start, pos_ - start);
        if (id == "x") return make(Kind::Var);
        if (id == "pi") {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::Number;
            n->number = kPi;
            n->spelling = "pi";
            return n;
        }
        Kind k;
        if (id == "exp")
            k = Kind::Exp;
        else if (id == "sin")
            k = Kind::Sin;
        else if (id == "cos")
            k = Kind::Cos;
        else
            fail("unknown identifier '" + id + "'");
        if (!consume('(')) fail("expected '(' after function name");
        NodePtr arg = expr();
        if (!consume(')')) fail("expected ')'");
        return make(k, arg);
    }
};

TaylorJet eval_node(const Expr::Node& n, double x, int order)
{
    switch (n.kind) {
        case Kind::Number:
            return TaylorJet::constant(n.number, x, order);
        case Kind::Var:
            return TaylorJet::variable(x, order);
        case Kind::Add:
            return jet_add(eval_node(*n.a, x, order), eval_node(*n.b, x, order));
        case Kind::Sub:
            return jet_sub(eval_node(*n.a, x, order), eval_node(*n.b, x, order));
        case Kind::Mul:
            return jet_mul(eval_node(*n.a, x, order), eval_node(*n.b, x, order));
        case Kind::Div:
            return jet_div(eval_node(*n.a, x, order), eval_node(*n.b, x, order));
        case Kind::Neg:
            return jet_scale(eval_node(*n.a, x, order), -1.0);
        case Kind::PowInt:
            return jet_pow_int(eval_node(*n.a, x, order), n.exponent);
        case Kind::Exp:
            return jet_exp(eval_node(*n.a, x, order));
        case Kind::Sin: {
            TaylorJet s, c;
            jet_sin_cos(eval_node(*n.a, x, order), s, c);
            return s;
        }
        case Kind::Cos: {
            TaylorJet s, c;
            jet_sin_cos(eval_node(*n.a, x, order), s, c);
            return c;
        }
    }
    throw std::logic_error("expr: bad node");
}

void print_node(const Expr::Node& n, std::ostream& os)
{
    switch (n.kind) {
        case Kind::Number:
            os << n.spelling;
            return;
        case Kind::Var:
            os << 'x';
            return;
        case Kind::Add:
            os << '(';
            print_node(*n.a, os);
            os << " + ";
            print_node(*n.b, os);
            os << ')';
            return;
        case Kind::Sub:
            os << '(';
            print_node(*n.a, os);
            os << " - ";
            print_node(*n.b, os);
            os << ')';
            return;
        case Kind::Mul:
            os << '(';
            print_node(*n.a, os);
            os << " * ";
            print_node(*n.b, os);
            os << ')';
            return;
        case Kind::Div:
            os << '(';
            print_node(*n.a, os);
            os << " / ";
            print_node(*n.b, os);
            os << ')';
            return;
        case Kind::Neg:
            os << "(-";
            print_node(*n.a, os);
            os << ')';
            return;
        case Kind::PowInt:
            os << '(';
            print_node(*n.a, os);
            os << ")^" << n.exponent;
            return;
        case Kind::Exp:
        case Kind::Sin:
        case Kind::Cos:
            os << (n.kind == Kind::Exp ? "exp" : n.kind == Kind::Sin ? "sin" : "cos") << '(';
            print_node(*n.a, os);
            os << ')';
            return;
    }
}

}  // namespace

Expr Expr::parse(const std::string& text)
{
    Expr e;
    e.root_ = Parser(text).run();
    return e;
}

double Expr::eval(double x) const
{
    return eval_node(*root_, x, 0).value();
}

double Expr::eval_deriv(double x) const
{
    return eval_node(*root_, x, 1).deriv(1);
}

TaylorJet Expr::eval_jet(double x, int order) const
{
    return eval_node(*root_, x, order);
}

std::string Expr::to_string() const
{
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

}  // namespace paraflat
