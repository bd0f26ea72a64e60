#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace lcx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// One exception type for the whole library; `kind` lets callers branch.
enum class ErrorKind {
  structural,
  undefined_sparsity,
  path_explosion,
  non_convergence,
  precondition,
  internal,
  level_ceiling,
  width_ceiling,
  not_routable,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::undefined_sparsity: return "undefined sparsity";
    case ErrorKind::path_explosion: return "path explosion";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::internal: return "internal";
    case ErrorKind::level_ceiling: return "level ceiling";
    case ErrorKind::width_ceiling: return "width ceiling";
    case ErrorKind::not_routable: return "not routable";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

// Exact value of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::precondition, "non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(m);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

inline std::string format_rational(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Rational parse_rational(std::string_view s) {
  auto bad = [&] { return Error(ErrorKind::io, "malformed rational '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto parse_int = [&](std::string_view t) {
    if (t.empty()) throw bad();
    bool neg = t[0] == '-';
    if (t[0] == '-' || t[0] == '+') t.remove_prefix(1);
    if (t.empty()) throw bad();
    for (char ch : t)
      if (ch < '0' || ch > '9') throw bad();
    BigInt x{std::string(t)};
    return neg ? BigInt(-x) : x;
  };
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  BigInt num = parse_int(s.substr(0, slash));
  BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw bad();
  return Rational(num, den);
}

}  // namespace lcx
