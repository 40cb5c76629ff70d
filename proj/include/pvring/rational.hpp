#ifndef PVRING_RATIONAL_HPP
#define PVRING_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace pvring {

/// Exact rational number (arbitrary-precision numerator/denominator,
/// always in lowest terms with positive denominator).
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(long n, long d) : v_(static_cast<signed long>(n), static_cast<signed long>(d)) {
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit Rat(const mpz_class& n) : v_(n) {}

    /// Parses a decimal integer of arbitrary size.
    static Rat from_decimal(const std::string& digits) { return Rat(mpz_class(digits, 10)); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_minus_one() const { return v_ == -1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator/(const Rat& o) const { return Rat(mpq_class(v_ / o.v_)); }
    Rat operator-() const { return Rat(mpq_class(-v_)); }

    Rat& operator+=(const Rat& o) {
        v_ += o.v_;
        return *this;
    }
    Rat& operator-=(const Rat& o) {
        v_ -= o.v_;
        return *this;
    }
    Rat& operator*=(const Rat& o) {
        v_ *= o.v_;
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        v_ /= o.v_;
        return *this;
    }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    bool operator<(const Rat& o) const { return v_ < o.v_; }

    Rat inv() const { return Rat(mpq_class(1) / v_); }
    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    /// Used by the generic polynomial printer to render "a - b" instead of
    /// "a + -b": returns |x| when x < 0.
    std::optional<Rat> negated_if_negative() const {
        if (sgn(v_) < 0) return -*this;
        return std::nullopt;
    }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    /// Canonical form: "n" or "n/d".
    std::string str() const { return v_.get_str(); }
    /// Same text is valid inside a product ("3/2*x" parses as (3/2)*x).
    std::string str_factor() const { return str(); }

    static Rat gcd(const Rat& a, const Rat& b) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
        return Rat(g);
    }

  private:
    mpq_class v_;
};

} // namespace pvring

#endif
