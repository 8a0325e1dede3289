#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>

namespace nlbc {

/// Exact arithmetic in Q(sqrt 2): a + b sqrt(2) with rational a, b.
class QSqrt2 {
 public:
  using Rational = boost::rational<std::int64_t>;

  QSqrt2(std::int64_t a = 0) : a_(a), b_(0) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a, Rational b) : a_(a), b_(b) {}

  static QSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& root_part() const { return b_; }

  double to_double() const {
    return boost::rational_cast<double>(a_) + boost::rational_cast<double>(b_) * 1.4142135623730951;
  }

  friend QSqrt2 operator+(const QSqrt2& x, const QSqrt2& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend QSqrt2 operator-(const QSqrt2& x, const QSqrt2& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend QSqrt2 operator*(const QSqrt2& x, const QSqrt2& y) {
    return {x.a_ * y.a_ + 2 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
  }
  friend QSqrt2 operator/(const QSqrt2& x, const QSqrt2& y) {
    const Rational norm = y.a_ * y.a_ - 2 * y.b_ * y.b_;
    if (norm == Rational(0)) throw std::domain_error("division by zero in Q(sqrt 2)");
    const QSqrt2 conj{y.a_ / norm, -y.b_ / norm};
    return x * conj;
  }
  friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const QSqrt2& x, const QSqrt2& y) { return !(x == y); }

 private:
  Rational a_, b_;
};

}  // namespace nlbc
