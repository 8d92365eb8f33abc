#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>

namespace mtra {

// Every share, clock value and LP coefficient is an exact GMP rational.
using Rational = mpq_class;

// Always "num/den", including integers ("1/1", "0/1").
std::string to_string(const Rational& value);

// Accepts "num/den" or a bare integer; throws Error(ErrorKind::Parse) otherwise.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

Rational sum(std::span<const Rational> values);

}  // namespace mtra
