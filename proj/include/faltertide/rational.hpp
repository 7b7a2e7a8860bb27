#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace faltertide {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(int n) : v_(n) {}   // NOLINT(google-explicit-constructor)
  Rat(long n, long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "p/q" or "-p/q".
  static Rat parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& x) {
      auto b = x.find_first_not_of(" \t");
      auto e = x.find_last_not_of(" \t");
      x = (b == std::string::npos) ? std::string() : x.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
      std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
      if (i >= part.size()) throw std::invalid_argument("malformed rational literal '" + s + "'");
      for (; i < part.size(); ++i) {
        if (part[i] < '0' || part[i] > '9')
          throw std::invalid_argument("malformed rational literal '" + s + "'");
      }
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    check_int(num);
    check_int(den);
    if (den.find('-') != std::string::npos)
      throw std::invalid_argument("malformed rational literal '" + s + "'");
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw std::domain_error("rational with zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    return Rat(std::move(q));
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// Largest integer not exceeding this value.
  Rat floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Rat(mpq_class(q));
  }

  double to_double() const { return v_.get_d(); }

  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// x mod m for m > 0, result in [0, m).
inline Rat mod(const Rat& x, const Rat& m) { return x - m * (x / m).floor(); }

/// Least common multiple of two positive rationals: lcm(a/b, c/d) = lcm(a,c)/gcd(b,d).
inline Rat lcm(const Rat& x, const Rat& y) {
  if (x.sign() <= 0 || y.sign() <= 0) throw std::domain_error("lcm of non-positive rationals");
  mpz_class n, d;
  mpz_lcm(n.get_mpz_t(), x.num().get_mpz_t(), y.num().get_mpz_t());
  mpz_gcd(d.get_mpz_t(), x.den().get_mpz_t(), y.den().get_mpz_t());
  return Rat(mpq_class(n, d));
}

/// Ratio a / b as an integer; throws unless exact.
inline std::size_t exact_multiple(const Rat& a, const Rat& b) {
  Rat q = a / b;
  if (!q.is_integer() || q.sign() < 0) throw std::logic_error("period is not an integer multiple");
  return q.num().get_ui();
}

}  // namespace faltertide

template <>
struct std::hash<faltertide::Rat> {
  std::size_t operator()(const faltertide::Rat& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
