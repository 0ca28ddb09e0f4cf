#pragma once

// Plain-text serialization of expressions, round-trippable.
//
//   expr     := number | complex | var | list
//   number   := C double literal (printed with %.17g)
//   complex  := '(' 'c' number number ')'          ; re im
//   var      := 'q' index
//   list     := '(' head expr... ')'
//   head     := '+' | '*' | '^' | 'sinh' | 'coth' | 'csch'
//             | 'sin' | 'cot' | 'csc'
//   '^' takes a base expression and a rational exponent 'p' or 'p/q'.

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/expr.hpp"

namespace rootops {

namespace detail {

inline std::string format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace detail

inline void print_expr(const Expr& e, std::string& out) {
  const ExprNode& n = e.node();
  switch (n.tag) {
    case ExprNode::Tag::Const:
      if (n.value.imag() == 0.0) {
        out += detail::format_double(n.value.real());
      } else {
        out += "(c ";
        out += detail::format_double(n.value.real());
        out += ' ';
        out += detail::format_double(n.value.imag());
        out += ')';
      }
      return;
    case ExprNode::Tag::Var:
      out += 'q';
      out += std::to_string(n.var);
      return;
    case ExprNode::Tag::Sum:
    case ExprNode::Tag::Prod:
      out += n.tag == ExprNode::Tag::Sum ? "(+" : "(*";
      for (const Expr& k : n.kids) {
        out += ' ';
        print_expr(k, out);
      }
      out += ')';
      return;
    case ExprNode::Tag::Pow:
      out += "(^ ";
      print_expr(n.kids[0], out);
      out += ' ';
      out += to_string(n.exponent);
      out += ')';
      return;
    case ExprNode::Tag::Prim:
      out += '(';
      out += prim_name(n.prim);
      out += ' ';
      print_expr(n.kids[0], out);
      out += ')';
      return;
  }
}

inline std::string to_text(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw FormatError("expr parse error at offset " + std::to_string(pos_) +
                      ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  std::string_view token() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    if (pos_ == start) fail("expected token");
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek_close() {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == ')';
  }

  double parse_number(std::string_view t) {
    std::string tmp(t);
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) fail("bad number '" + tmp + "'");
    return v;
  }

  Expr parse_expr() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (s_[pos_] == '(') {
      ++pos_;
      std::string_view head = token();
      Expr out = parse_form(head);
      expect(')');
      return out;
    }
    std::string_view t = token();
    if (t.size() >= 2 && t[0] == 'q' &&
        std::isdigit(static_cast<unsigned char>(t[1]))) {
      int idx = std::stoi(std::string(t.substr(1)));
      return Expr::variable(idx);
    }
    return Expr::constant(parse_number(t));
  }

  Expr parse_form(std::string_view head) {
    if (head == "+" || head == "*") {
      std::vector<Expr> kids;
      while (!peek_close()) kids.push_back(parse_expr());
      if (kids.empty()) fail("empty sum/product");
      return head == "+" ? Expr::sum(std::move(kids))
                         : Expr::product(std::move(kids));
    }
    if (head == "^") {
      Expr base = parse_expr();
      std::string_view t = token();
      return Expr::power(std::move(base), parse_rational(t));
    }
    if (head == "c") {
      double re = parse_number(token());
      double im = parse_number(token());
      return Expr::constant(Complex(re, im));
    }
    for (PrimKind k : {PrimKind::Sinh, PrimKind::Coth, PrimKind::Csch,
                       PrimKind::Sin, PrimKind::Cot, PrimKind::Csc}) {
      if (head == prim_name(k)) return Expr::prim(k, parse_expr());
    }
    fail("unknown head '" + std::string(head) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr_text(std::string_view text) {
  return detail::ExprParser(text).parse();
}

}  // namespace rootops
