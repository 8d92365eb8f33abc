#include "mtra/rational.hpp"

#include "mtra/error.hpp"

#include <cctype>

namespace mtra {

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_num().get_str() + "/" + canonical.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-') {
    throw Error(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num));
  mpz_class d(std::string(den[0] == '+' ? den.substr(1) : den));
  if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace mtra
