#ifndef LIEJET_RATIONAL_HPP
#define LIEJET_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace liejet {

// Exact rational coefficient type used by every series operation.
using Rat = mpq_class;
using Int = mpz_class;

inline Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

// base^e for integer e; e < 0 inverts (base must be nonzero then).
inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  bool invert = e < 0;
  unsigned long n = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  if (invert && base == 0) throw std::domain_error("rat_pow: zero base with negative exponent");
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), n);
  if (invert) return Rat(1) / r;
  return r;
}

inline double rat_to_double(const Rat& r) { return r.get_d(); }

// Canonical emission: "n" when the denominator is 1, "n/d" otherwise.
inline std::string rat_to_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Accepts "3", "-7/2", "0.75", "1.5e2"; always exact.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_from_string: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash), 10);
    Int den(s.substr(slash + 1), 10);
    if (den == 0) throw std::invalid_argument("rat_from_string: zero denominator in '" + s + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  long exponent = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exponent = std::stol(s.substr(i + 1));
      break;
    } else {
      throw std::invalid_argument("rat_from_string: bad literal '" + s + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("rat_from_string: bad literal '" + s + "'");
  Int num(digits.empty() ? "0" : digits, 10);
  if (neg) num = -num;
  long shift = exponent - frac_digits;
  Int pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rat r = shift >= 0 ? Rat(num * pow10) : Rat(num, pow10);
  r.canonicalize();
  return r;
}

}  // namespace liejet

#endif
