#ifndef PGACT_SCALAR_HPP
#define PGACT_SCALAR_HPP

// Exact field scalars: arbitrary-precision rationals and prime fields Z/p.
// All elimination code in linalg.hpp pivots on exact zero tests, never on
// magnitude, so both types plug into the same templated routines.

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace pgact {

class Rational {
 public:
  using rep = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(int v) : v_(v) {}
  Rational(long long v) : v_(v) {}
  explicit Rational(rep v) : v_(std::move(v)) {}
  // Accepts "a", "-a", "a/b".
  explicit Rational(const std::string& s) : v_(s) {}

  const rep& value() const { return v_; }
  bool is_zero() const { return v_.is_zero(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

 private:
  rep v_;
};

inline std::string to_string(const Rational& r) { return r.value().str(); }

// Element of Z/p with the modulus carried in the value.  A default or
// integer-constructed Fp has modulus 0 and behaves as a plain integer until
// it meets a value with a modulus, which it then adopts.  Generic code only
// ever creates such detached values as 0 or +-1, so adoption is lossless.
class Fp {
 public:
  Fp() = default;
  Fp(int v) : v_(v) {}
  Fp(long long v) : v_(v) {}
  Fp(long long v, long long p) : v_(v), p_(p) {
    if (p < 2) throw std::domain_error("modulus must be at least 2");
    reduce();
  }

  long long value() const { return p_ ? v_ : raw(); }
  long long modulus() const { return p_; }
  bool is_zero() const { return p_ ? v_ == 0 : v_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) { return make(a.v_ + b.v_, join(a, b)); }
  friend Fp operator-(const Fp& a, const Fp& b) { return make(a.v_ - b.v_, join(a, b)); }
  friend Fp operator*(const Fp& a, const Fp& b) {
    const long long p = join(a, b);
    if (p == 0) return make(a.v_ * b.v_, 0);
    return make(static_cast<long long>(static_cast<__int128>(a.v_) * b.v_ % p), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
  Fp operator-() const { return make(-v_, p_); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    const long long p = join(a, b);
    if (p == 0) return a.v_ == b.v_;
    return mod(a.v_, p) == mod(b.v_, p);
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  Fp inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in Z/p");
    if (p_ == 0) {
      if (v_ == 1 || v_ == -1) return *this;
      throw std::domain_error("inverse of detached Z/p value");
    }
    // Extended Euclid on (v_, p_); v_ is already reduced into [1, p).
    long long t = 0, nt = 1, r = p_, nr = v_;
    while (nr != 0) {
      const long long q = r / nr;
      t = std::exchange(nt, t - q * nt);
      r = std::exchange(nr, r - q * nr);
    }
    if (r != 1) throw std::domain_error("modulus is not prime");
    return make(t, p_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.value(); }

 private:
  long long v_ = 0;
  long long p_ = 0;

  long long raw() const { return v_; }
  static long long mod(long long v, long long p) {
    v %= p;
    return v < 0 ? v + p : v;
  }
  void reduce() {
    if (p_) v_ = mod(v_, p_);
  }
  static Fp make(long long v, long long p) {
    Fp x;
    x.v_ = v;
    x.p_ = p;
    x.reduce();
    return x;
  }
  static long long join(const Fp& a, const Fp& b) {
    if (a.p_ && b.p_ && a.p_ != b.p_) throw std::domain_error("mixed moduli in Z/p arithmetic");
    return a.p_ ? a.p_ : b.p_;
  }
};

inline std::string to_string(const Fp& x) { return std::to_string(x.value()); }

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Parsing.  Both field types accept "a" and "a/b"; in Z/p the quotient is
// taken through the field inverse.
inline Rational parse_scalar(const std::string& s, const Rational&) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::domain_error("cannot parse rational '" + s + "'");
  }
}

inline Fp parse_scalar(const std::string& s, const Fp& exemplar) {
  const long long p = exemplar.modulus();
  if (p == 0) throw std::domain_error("Z/p parse needs a modulus");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Fp(std::stoll(s), p);
    const Fp num(std::stoll(s.substr(0, slash)), p);
    const Fp den(std::stoll(s.substr(slash + 1)), p);
    return num / den;
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::domain_error("cannot parse Z/p value '" + s + "'");
  }
}

template <typename K>
bool scalar_is_zero(const K& x) {
  return x.is_zero();
}

}  // namespace pgact

namespace Eigen {

template <typename T>
struct NumTraits;

template <>
struct NumTraits<pgact::Rational> {
  using Real = pgact::Rational;
  using NonInteger = pgact::Rational;
  using Literal = pgact::Rational;
  using Nested = pgact::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 30
  };
  static int digits10() { return 0; }
};

template <>
struct NumTraits<pgact::Fp> {
  using Real = pgact::Fp;
  using NonInteger = pgact::Fp;
  using Literal = pgact::Fp;
  using Nested = pgact::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
  static int digits10() { return 0; }
};

}  // namespace Eigen

#endif
