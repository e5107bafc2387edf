#include "xpadic/dsl.hpp"

#include <cctype>
#include <map>

#include "xpadic/errors.hpp"

namespace xpadic {

namespace {

// Dense coefficients; an empty slot is a precise zero that has no node.
struct Value {
  std::vector<std::optional<ExactElement>> c;
  bool poly = false;
};

using Slot = std::optional<ExactElement>;

Slot add(const Slot& a, const Slot& b) {
  if (!a) return b;
  if (!b) return a;
  return *a + *b;
}

Slot sub(const Slot& a, const Slot& b) {
  if (!b) return a;
  if (!a) return -*b;
  return *a - *b;
}

class Parser {
 public:
  Parser(const std::string& text, const ExactStructure& s) : text_(text), s_(s) {}

  Parsed run() {
    while (peek_word("let")) {
      pos_ += 3;
      const std::string name = identifier();
      if (name == "x" || name == "let") fail("cannot bind '" + name + "'");
      expect('=');
      env_.insert_or_assign(name, expr());
      expect(';');
    }
    Value v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    Parsed out;
    out.literals = literals_;
    if (!v.poly) {
      out.element = *v.c[0];
      return out;
    }
    while (v.c.size() > 1 && !v.c.back()) v.c.pop_back();
    std::vector<ExactElement> coeffs;
    for (auto& slot : v.c) coeffs.push_back(slot ? *slot : ExactElement::zero(s_));
    out.poly = ExactPoly::from_coeffs(s_.polynomials(), coeffs);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_word(const std::string& w) {
    skip();
    if (text_.compare(pos_, w.size(), w) != 0) return false;
    const std::size_t end = pos_ + w.size();
    return end < text_.size() && std::isspace(static_cast<unsigned char>(text_[end]));
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  bool at_digit() {
    skip();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  mpz_class integer() {
    if (!at_digit()) fail("expected an integer");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(text_.substr(start, pos_ - start));
  }

  Value literal(const mpq_class& q) {
    ExactElement e = ExactElement::from_rational(s_, q);
    literals_.push_back(e.node());
    return {{e}, false};
  }

  Value expr() {
    Value v = term();
    for (;;) {
      if (accept('+')) {
        v = combine(v, term(), add);
      } else if (accept('-')) {
        v = combine(v, term(), sub);
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      if (accept('*')) {
        v = multiply(v, unary());
      } else if (accept('/')) {
        v = divide(v, unary());
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept('-')) {
      Value v = unary();
      for (auto& slot : v.c) {
        if (slot) slot = -*slot;
      }
      return v;
    }
    return power();
  }

  Value power() {
    Value base = atom();
    if (!accept('^')) return base;
    const bool negative = accept('-');
    const mpz_class e = integer();
    if (!e.fits_slong_p()) fail("exponent too large");
    const long n = negative ? -e.get_si() : e.get_si();
    if (!base.poly) return {{base.c[0]->pow(n)}, false};
    if (n < 0) fail("negative power of a polynomial");
    Value acc{{one()}, false};
    for (long i = 0; i < n; ++i) acc = multiply(acc, base);
    return acc;
  }

  Value atom() {
    if (accept('(')) {
      Value v = expr();
      expect(')');
      return v;
    }
    if (at_digit()) {
      const mpz_class num = integer();
      const std::size_t save = pos_;
      if (accept('/') && at_digit()) {
        const mpz_class den = integer();
        if (den == 0) fail("zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return literal(q);
      }
      pos_ = save;
      return literal(mpq_class(num));
    }
    const std::string name = identifier();
    if (name == "x") return {{std::nullopt, one()}, true};
    auto it = env_.find(name);
    if (it == env_.end()) fail("unknown name '" + name + "'");
    return it->second;
  }

  ExactElement one() {
    if (!one_) {
      one_ = ExactElement::from_integer(s_, 1);
      literals_.push_back(one_->node());
    }
    return *one_;
  }

  template <class Op>
  static Value combine(const Value& a, const Value& b, Op op) {
    Value out;
    out.poly = a.poly || b.poly;
    const std::size_t n = std::max(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i) {
      const Slot x = i < a.c.size() ? a.c[i] : Slot{};
      const Slot y = i < b.c.size() ? b.c[i] : Slot{};
      out.c.push_back(op(x, y));
    }
    return out;
  }

  static Value multiply(const Value& a, const Value& b) {
    Value out;
    out.poly = a.poly || b.poly;
    out.c.assign(a.c.size() + b.c.size() - 1, Slot{});
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (!a.c[i]) continue;
      for (std::size_t j = 0; j < b.c.size(); ++j) {
        if (b.c[j]) out.c[i + j] = add(out.c[i + j], *a.c[i] * *b.c[j]);
      }
    }
    return out;
  }

  Value divide(const Value& a, const Value& b) {
    if (b.poly) fail("division by a polynomial");
    Value out = a;
    const ExactElement d = *b.c[0];
    for (auto& slot : out.c) {
      if (slot) slot = *slot / d;
    }
    return out;
  }

  const std::string& text_;
  ExactStructure s_;
  std::size_t pos_ = 0;
  std::map<std::string, Value> env_;
  std::vector<lazy::NodePtr> literals_;
  std::optional<ExactElement> one_;
};

}  // namespace

Parsed parse_expression(const std::string& text, const ExactStructure& s) { return Parser(text, s).run(); }

ExactElement parse_element(const std::string& text, const ExactStructure& s) {
  Parsed p = parse_expression(text, s);
  if (!p.element) throw ParseError("expected an element, got a polynomial in x");
  return *p.element;
}

ExactPoly parse_polynomial(const std::string& text, const ExactStructure& s) {
  Parsed p = parse_expression(text, s);
  if (p.poly) return *p.poly;
  return ExactPoly::from_coeffs(s.polynomials(), {*p.element});
}

}  // namespace xpadic
