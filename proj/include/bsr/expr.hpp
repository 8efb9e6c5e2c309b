#ifndef BSR_EXPR_HPP
#define BSR_EXPR_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace bsr {

class ExprError : public std::runtime_error {
  public:
    ExprError(const std::string& why, size_t pos)
        : std::runtime_error("expression error at position " +
                             std::to_string(pos) + ": " + why),
          position(pos) {}
    size_t position;
};

/// Small arithmetic expression over named variables, for inline initial
/// data. Supports + - * / ^ (right-assoc), parentheses, unary minus,
/// the functions sin cos tan exp log sqrt abs tanh, and the constants
/// pi and e. Variables are resolved at evaluation time; unknown names
/// raise ExprError.
class Expr {
  public:
    static Expr parse(const std::string& text);
    double eval(const std::map<std::string, double>& vars) const;

    struct Node; // implementation detail, defined in the source file

  private:
    std::shared_ptr<const Node> root;
};

} // namespace bsr

#endif
