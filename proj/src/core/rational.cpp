#include "ebeq/core/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace ebeq {

std::string to_string(const Q& q)
{
    return q.get_str();
}

std::size_t hash_value(const mpz_class& z)
{
    std::size_t h = mpz_get_ui(z.get_mpz_t());
    hash_combine(h, static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1));
    hash_combine(h, mpz_size(z.get_mpz_t()));
    return h;
}

std::size_t hash_value(const Q& q)
{
    std::size_t h = hash_value(mpz_class(q.get_num()));
    hash_combine(h, hash_value(mpz_class(q.get_den())));
    return h;
}

Frac::Frac(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw std::domain_error("Frac: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g == 0 ? 0 : num / g;
    den_ = g == 0 ? 1 : den / g;
}

std::int64_t Frac::floor() const
{
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Frac::ceil() const
{
    return -(-*this).floor();
}

Frac Frac::fractional() const
{
    return *this - Frac(floor());
}

Frac operator+(Frac a, Frac b)
{
    return Frac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Frac operator-(Frac a, Frac b)
{
    return a + (-b);
}

Frac operator*(Frac a, Frac b)
{
    return Frac(a.num_ * b.num_, a.den_ * b.den_);
}

Frac operator/(Frac a, Frac b)
{
    return Frac(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(Frac a, Frac b)
{
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
}

std::string Frac::str() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t hash_value(Frac f)
{
    std::size_t h = static_cast<std::size_t>(f.num());
    hash_combine(h, static_cast<std::size_t>(f.den()));
    return h;
}

std::size_t hash_string(const std::string& s)
{
    // FNV-1a; std::hash is not required to be stable across runs.
    std::size_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Q pow_int(const Q& q, std::int64_t e)
{
    if (e < 0) {
        if (q == 0) throw std::domain_error("pow_int: zero to a negative power");
        return pow_int(Q(1) / q, -e);
    }
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
    Q r(n, d);
    r.canonicalize();
    return r;
}

}  // namespace ebeq
