#pragma once

#include <memory>
#include <string>

namespace flexo::app {

/// Small arithmetic expression over the coordinates x1 and x2, used for
/// prescribed boundary data and bulk sources in configuration files.
/// Grammar: + - * / ^ (right-assoc), parentheses, unary minus, numbers,
/// x1, x2, pi, and the functions sin cos tan exp log sqrt abs sinh cosh tanh.
class Expr {
public:
    Expr() = default;
    static Expr parse(const std::string& text);

    double eval(double x1, double x2) const;
    const std::string& text() const { return text_; }
    bool empty() const { return node_ == nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> node_;
    std::string text_;
};

}  // namespace flexo::app
