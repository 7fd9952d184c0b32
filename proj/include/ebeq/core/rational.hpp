#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace ebeq {

/// Exact rational coefficient.
using Q = mpq_class;

std::string to_string(const Q& q);
std::size_t hash_value(const Q& q);
std::size_t hash_value(const mpz_class& z);

/// Small exact rational used for exponents. Always reduced, denominator > 0.
class Frac {
public:
    constexpr Frac() = default;
    Frac(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    std::int64_t floor() const;
    std::int64_t ceil() const;
    /// this - floor(this), in [0, 1).
    Frac fractional() const;

    Frac operator-() const { return Frac(-num_, den_); }
    friend Frac operator+(Frac a, Frac b);
    friend Frac operator-(Frac a, Frac b);
    friend Frac operator*(Frac a, Frac b);
    friend Frac operator/(Frac a, Frac b);
    Frac& operator+=(Frac b) { return *this = *this + b; }

    friend bool operator==(Frac a, Frac b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(Frac a, Frac b);

    std::string str() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::size_t hash_value(Frac f);

inline void hash_combine(std::size_t& seed, std::size_t v)
{
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_string(const std::string& s);

/// q^e for integer e (e may be negative; q must be nonzero then).
Q pow_int(const Q& q, std::int64_t e);

}  // namespace ebeq
