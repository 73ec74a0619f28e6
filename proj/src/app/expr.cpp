#include "flexo/app/expr.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <vector>

namespace flexo::app {

struct Expr::Node {
    enum Kind { Num, X1, X2, Add, Sub, Mul, Div, Pow, Neg, Fun } kind = Num;
    double value = 0;
    double (*fun)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(double x1, double x2) const {
        switch (kind) {
            case Num: return value;
            case X1: return x1;
            case X2: return x2;
            case Add: return a->eval(x1, x2) + b->eval(x1, x2);
            case Sub: return a->eval(x1, x2) - b->eval(x1, x2);
            case Mul: return a->eval(x1, x2) * b->eval(x1, x2);
            case Div: return a->eval(x1, x2) / b->eval(x1, x2);
            case Pow: return std::pow(a->eval(x1, x2), b->eval(x1, x2));
            case Neg: return -a->eval(x1, x2);
            case Fun: return fun(a->eval(x1, x2));
        }
        return 0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const char* s;
    const char* end;

    void skip() {
        while (s < end && std::isspace(static_cast<unsigned char>(*s))) ++s;
    }
    bool consume(char c) {
        skip();
        if (s < end && *s == c) {
            ++s;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("expression: " + msg); }

    NodePtr make(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip();
            if (consume('+')) {
                lhs = make({Expr::Node::Add, 0, nullptr, lhs, term()});
            } else if (consume('-')) {
                lhs = make({Expr::Node::Sub, 0, nullptr, lhs, term()});
            } else {
                return lhs;
            }
        }
    }
    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip();
            if (consume('*')) {
                lhs = make({Expr::Node::Mul, 0, nullptr, lhs, factor()});
            } else if (consume('/')) {
                lhs = make({Expr::Node::Div, 0, nullptr, lhs, factor()});
            } else {
                return lhs;
            }
        }
    }
    NodePtr factor() {
        NodePtr base = unary();
        skip();
        if (consume('^')) return make({Expr::Node::Pow, 0, nullptr, base, factor()});
        return base;
    }
    NodePtr unary() {
        skip();
        if (consume('-')) return make({Expr::Node::Neg, 0, nullptr, unary(), nullptr});
        if (consume('+')) return unary();
        return primary();
    }
    NodePtr primary() {
        skip();
        if (s >= end) fail("unexpected end");
        if (*s == '(') {
            ++s;
            NodePtr e = expr();
            if (!consume(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(*s)) || *s == '.') {
            char* out = nullptr;
            const double v = std::strtod(s, &out);
            if (out == s) fail("bad number");
            s = out;
            return make({Expr::Node::Num, v, nullptr, nullptr, nullptr});
        }
        // Identifier.
        const char* b = s;
        while (s < end && (std::isalnum(static_cast<unsigned char>(*s)) || *s == '_')) ++s;
        const std::string id(b, s);
        if (id == "x1") return make({Expr::Node::X1, 0, nullptr, nullptr, nullptr});
        if (id == "x2") return make({Expr::Node::X2, 0, nullptr, nullptr, nullptr});
        if (id == "pi") return make({Expr::Node::Num, M_PI, nullptr, nullptr, nullptr});
        static const std::pair<const char*, double (*)(double)> funs[] = {
            {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},  {"exp", std::exp},
            {"log", std::log},   {"sqrt", std::sqrt}, {"abs", std::fabs}, {"sinh", std::sinh},
            {"cosh", std::cosh}, {"tanh", std::tanh}};
        for (const auto& [name, fn] : funs) {
            if (id == name) {
                if (!consume('(')) fail("expected '(' after " + id);
                NodePtr arg = expr();
                if (!consume(')')) fail("missing ')' after " + id);
                return make({Expr::Node::Fun, 0, fn, arg, nullptr});
            }
        }
        fail("unknown identifier '" + id + "'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& text) {
    Parser p{text.data(), text.data() + text.size()};
    Expr e;
    e.node_ = p.expr();
    p.skip();
    if (p.s != p.end) p.fail("trailing characters");
    e.text_ = text;
    return e;
}

double Expr::eval(double x1, double x2) const {
    if (!node_) throw std::runtime_error("expression: empty");
    return node_->eval(x1, x2);
}

}  // namespace flexo::app
