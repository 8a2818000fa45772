// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_CLI_EXPRESSION_HPP
#define HYDROSEM_CLI_EXPRESSION_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hydrosem::cli
{

// Scalar expression in the position (x, y, z) and unit normal (nx, ny, nz)
// of a surface point, e.g. "cos(pi/5*(y - 2.2))". Operators + - * / ^,
// parentheses, constants pi and e, and the functions sin cos tan asin acos
// atan sinh cosh tanh exp log sqrt abs. Parsing throws ConfigError.
class Expression
{
public:
  Expression() = default;
  static Expression Parse(const std::string &text);

  double operator()(const Eigen::Vector3d &x, const Eigen::Vector3d &n) const;
  const std::string &text() const { return text_; }

  struct Op
  {
    enum Kind
    {
      Const,
      Var,
      Neg,
      Add,
      Sub,
      Mul,
      Div,
      Pow,
      Call
    } kind;
    double value = 0.0;
    int index = 0;  // variable slot or function id
  };

private:
  std::string text_;
  std::vector<Op> program_;  // postfix
};

}  // namespace hydrosem::cli

#endif  // HYDROSEM_CLI_EXPRESSION_HPP
