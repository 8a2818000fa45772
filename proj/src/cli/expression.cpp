// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/cli/expression.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numbers>

#include <boost/fusion/include/adapt_struct.hpp>
#include <boost/spirit/home/x3.hpp>
#include <boost/spirit/home/x3/support/ast/variant.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::cli::ast
{

namespace x3 = boost::spirit::x3;

struct Signed;
struct Chain;
struct Call;

struct Operand : x3::variant<double, std::string, x3::forward_ast<Signed>, x3::forward_ast<Chain>,
                             x3::forward_ast<Call>>
{
  using base_type::base_type;
  using base_type::operator=;
};

struct Signed
{
  char sign;
  Operand operand;
};

struct Operation
{
  char op;
  Operand operand;
};

// first op1 operand1 op2 operand2 ...
struct Chain
{
  Operand first;
  std::list<Operation> rest;
};

struct Call
{
  std::string name;
  Chain arg;
};

}  // namespace hydrosem::cli::ast

BOOST_FUSION_ADAPT_STRUCT(hydrosem::cli::ast::Signed, sign, operand)
BOOST_FUSION_ADAPT_STRUCT(hydrosem::cli::ast::Operation, op, operand)
BOOST_FUSION_ADAPT_STRUCT(hydrosem::cli::ast::Chain, first, rest)
BOOST_FUSION_ADAPT_STRUCT(hydrosem::cli::ast::Call, name, arg)

namespace hydrosem::cli
{
namespace
{

namespace x3 = boost::spirit::x3;

namespace grammar
{

x3::rule<class sum, ast::Chain> const sum = "sum";
x3::rule<class product, ast::Chain> const product = "product";
x3::rule<class power, ast::Chain> const power = "power";
x3::rule<class unary, ast::Operand> const unary = "unary";
x3::rule<class primary, ast::Operand> const primary = "primary";
x3::rule<class call, ast::Call> const call = "call";
x3::rule<class name, std::string> const name = "name";
x3::rule<class negation, ast::Signed> const negation = "negation";

auto const name_def = x3::lexeme[(x3::alpha | x3::char_('_')) >> *(x3::alnum | x3::char_('_'))];
auto const sum_def = product >> *(x3::char_("+-") >> product);
auto const product_def = unary >> *(x3::char_("*/") >> unary);
auto const negation_def = x3::char_("+-") >> unary;
auto const unary_def = negation | power;
// The exponent may carry a sign; evaluated right to left.
auto const power_def = primary >> *(x3::char_('^') >> unary);
auto const call_def = name >> '(' >> sum >> ')';
auto const primary_def = x3::double_ | call | name | ('(' >> sum >> ')');

BOOST_SPIRIT_DEFINE(sum, product, power, unary, primary, call, name, negation)

}  // namespace grammar

const char *const kVariables[] = {"x", "y", "z", "nx", "ny", "nz"};
const char *const kFunctions[] = {"sin",  "cos",  "tan",  "asin", "acos", "atan", "sinh",
                                  "cosh", "tanh", "exp",  "log",  "sqrt", "abs"};

double ApplyFunction(int id, double v)
{
  switch (id)
  {
    case 0: return std::sin(v);
    case 1: return std::cos(v);
    case 2: return std::tan(v);
    case 3: return std::asin(v);
    case 4: return std::acos(v);
    case 5: return std::atan(v);
    case 6: return std::sinh(v);
    case 7: return std::cosh(v);
    case 8: return std::tanh(v);
    case 9: return std::exp(v);
    case 10: return std::log(v);
    case 11: return std::sqrt(v);
    default: return std::abs(v);
  }
}

using Op = Expression::Op;

class Compiler
{
public:
  explicit Compiler(const std::string &text) : text_(text) {}

  std::vector<Op> program;

  void operator()(double v) { program.push_back({Op::Const, v, 0}); }

  void operator()(const std::string &n)
  {
    if (n == "pi")
    {
      program.push_back({Op::Const, std::numbers::pi, 0});
      return;
    }
    if (n == "e")
    {
      program.push_back({Op::Const, std::numbers::e, 0});
      return;
    }
    for (int i = 0; i < 6; ++i)
    {
      if (n == kVariables[i])
      {
        program.push_back({Op::Var, 0.0, i});
        return;
      }
    }
    throw ConfigError({fmt::format("expression '{}': unknown variable '{}'", text_, n)});
  }

  void operator()(const ast::Signed &s)
  {
    boost::apply_visitor(*this, s.operand);
    if (s.sign == '-')
    {
      program.push_back({Op::Neg, 0.0, 0});
    }
  }

  void operator()(const ast::Call &c)
  {
    int id = -1;
    for (int i = 0; i < 13; ++i)
    {
      if (c.name == kFunctions[i])
      {
        id = i;
      }
    }
    if (id < 0)
    {
      throw ConfigError({fmt::format("expression '{}': unknown function '{}'", text_, c.name)});
    }
    (*this)(c.arg);
    program.push_back({Op::Call, 0.0, id});
  }

  void operator()(const ast::Chain &c)
  {
    if (!c.rest.empty() && c.rest.front().op == '^')
    {
      // a ^ b ^ c = a ^ (b ^ c): push every operand, then fold.
      boost::apply_visitor(*this, c.first);
      for (const auto &o : c.rest)
      {
        boost::apply_visitor(*this, o.operand);
      }
      for (std::size_t i = 0; i < c.rest.size(); ++i)
      {
        program.push_back({Op::Pow, 0.0, 0});
      }
      return;
    }
    boost::apply_visitor(*this, c.first);
    for (const auto &o : c.rest)
    {
      boost::apply_visitor(*this, o.operand);
      switch (o.op)
      {
        case '+': program.push_back({Op::Add, 0.0, 0}); break;
        case '-': program.push_back({Op::Sub, 0.0, 0}); break;
        case '*': program.push_back({Op::Mul, 0.0, 0}); break;
        default: program.push_back({Op::Div, 0.0, 0}); break;
      }
    }
  }

private:
  const std::string &text_;
};

}  // namespace

Expression Expression::Parse(const std::string &text)
{
  ast::Chain tree;
  auto first = text.begin();
  const bool ok = x3::phrase_parse(first, text.end(), grammar::sum, x3::space, tree);
  if (!ok || first != text.end())
  {
    throw ConfigError({fmt::format("expression '{}': syntax error at column {}", text,
                                   static_cast<int>(first - text.begin()) + 1)});
  }
  Compiler c(text);
  c(tree);
  int depth = 0, deepest = 0;
  for (const auto &op : c.program)
  {
    depth += op.kind == Op::Const || op.kind == Op::Var ? 1 : (op.kind == Op::Neg || op.kind == Op::Call ? 0 : -1);
    deepest = std::max(deepest, depth);
  }
  if (deepest > 64)
  {
    throw ConfigError({fmt::format("expression '{}' nests too deeply", text)});
  }
  Expression e;
  e.text_ = text;
  e.program_ = std::move(c.program);
  return e;
}

double Expression::operator()(const Eigen::Vector3d &x, const Eigen::Vector3d &n) const
{
  const double vars[6] = {x(0), x(1), x(2), n(0), n(1), n(2)};
  double stack[64];
  int top = 0;
  for (const auto &op : program_)
  {
    switch (op.kind)
    {
      case Op::Const: stack[top++] = op.value; break;
      case Op::Var: stack[top++] = vars[op.index]; break;
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::Call: stack[top - 1] = ApplyFunction(op.index, stack[top - 1]); break;
      default:
      {
        const double b = stack[--top];
        double &a = stack[top - 1];
        switch (op.kind)
        {
          case Op::Add: a += b; break;
          case Op::Sub: a -= b; break;
          case Op::Mul: a *= b; break;
          case Op::Div: a /= b; break;
          default: a = std::pow(a, b); break;
        }
      }
    }
  }
  return top == 1 ? stack[0] : 0.0;
}

}  // namespace hydrosem::cli
