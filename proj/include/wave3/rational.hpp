#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace wave3 {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p", "-p" or "p/q" with q > 0. Returns false on malformed input.
bool parse_rational(const std::string& text, Rational& out);

}  // namespace wave3
