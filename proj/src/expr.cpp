#include "bsr/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace bsr {

struct Expr::Node {
    enum Kind { Num, Var, Unary, Binary, Call } kind;
    double value = 0.0;
    std::string name;
    char op = 0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) { throw ExprError(why, i); }

    NodePtr make(Expr::Node n) {
        return std::make_shared<Expr::Node>(std::move(n));
    }

    NodePtr sum() {
        NodePtr x = product();
        for (;;) {
            skip();
            if (eat('+'))
                x = make({Expr::Node::Binary, 0, "", '+', x, product()});
            else if (eat('-'))
                x = make({Expr::Node::Binary, 0, "", '-', x, product()});
            else
                return x;
        }
    }
    NodePtr product() {
        NodePtr x = power();
        for (;;) {
            skip();
            if (eat('*'))
                x = make({Expr::Node::Binary, 0, "", '*', x, power()});
            else if (eat('/'))
                x = make({Expr::Node::Binary, 0, "", '/', x, power()});
            else
                return x;
        }
    }
    NodePtr power() {
        NodePtr base = atom();
        skip();
        if (eat('^'))
            return make({Expr::Node::Binary, 0, "", '^', base, power()});
        return base;
    }
    NodePtr atom() {
        skip();
        if (i >= s.size()) fail("unexpected end of expression");
        // unary minus binds looser than ^ so that -x^2 means -(x^2)
        if (eat('-')) return make({Expr::Node::Unary, 0, "", '-', power(), {}});
        if (eat('+')) return power();
        if (eat('(')) {
            NodePtr x = sum();
            if (!eat(')')) fail("expected ')'");
            return x;
        }
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = 0;
            double v;
            try {
                v = std::stod(s.substr(i), &end);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            i += end;
            return make({Expr::Node::Num, v, "", 0, {}, {}});
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            skip();
            if (eat('(')) {
                NodePtr arg = sum();
                if (!eat(')')) fail("expected ')' after function argument");
                return make({Expr::Node::Call, 0, name, 0, arg, {}});
            }
            return make({Expr::Node::Var, 0, name, 0, {}, {}});
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse() {
        NodePtr x = sum();
        skip();
        if (i != s.size()) fail("trailing input");
        return x;
    }
};

double eval_node(const Expr::Node& n, const std::map<std::string, double>& vars) {
    switch (n.kind) {
        case Expr::Node::Num:
            return n.value;
        case Expr::Node::Var: {
            if (n.name == "pi") return M_PI;
            if (n.name == "e") return M_E;
            auto it = vars.find(n.name);
            if (it == vars.end())
                throw ExprError("unknown variable '" + n.name + "'", 0);
            return it->second;
        }
        case Expr::Node::Unary:
            return -eval_node(*n.a, vars);
        case Expr::Node::Binary: {
            const double a = eval_node(*n.a, vars);
            const double b = eval_node(*n.b, vars);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            throw ExprError("bad operator", 0);
        }
        case Expr::Node::Call: {
            const double a = eval_node(*n.a, vars);
            if (n.name == "sin") return std::sin(a);
            if (n.name == "cos") return std::cos(a);
            if (n.name == "tan") return std::tan(a);
            if (n.name == "exp") return std::exp(a);
            if (n.name == "log") return std::log(a);
            if (n.name == "sqrt") return std::sqrt(a);
            if (n.name == "abs") return std::abs(a);
            if (n.name == "tanh") return std::tanh(a);
            throw ExprError("unknown function '" + n.name + "'", 0);
        }
    }
    throw ExprError("corrupt expression tree", 0);
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root = p.parse();
    return e;
}

double Expr::eval(const std::map<std::string, double>& vars) const {
    if (!root) throw ExprError("empty expression", 0);
    return eval_node(*root, vars);
}

} // namespace bsr
