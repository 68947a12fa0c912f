#include "arrlie/ring.hpp"

#include <charconv>

namespace arrlie {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

int moebius(std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        n /= d;
        if (n % d == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

Ring Ring::prime_field(std::uint32_t p) {
    if (p >= (1u << 31) || !is_prime(p))
        throw InputError("modulus " + std::to_string(p) + " is not a prime below 2^31");
    return Ring(Kind::PrimeField, p);
}

Ring Ring::parse(std::string_view text) {
    if (text == "z" || text == "Z") return integers();
    if (text == "q" || text == "Q") return rationals();
    if (text.starts_with("fp:")) {
        auto digits = text.substr(3);
        std::uint64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || p >= (1ull << 31))
            throw InputError("bad prime in ring selector '" + std::string(text) + "'");
        return prime_field(static_cast<std::uint32_t>(p));
    }
    throw InputError("unknown ring '" + std::string(text) + "' (expected z, q or fp:<p>)");
}

mpz_class Ring::reduce(const mpz_class& x) const {
    if (kind_ != Kind::PrimeField) return x;
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p_);
    return r;
}

mpq_class Ring::normalize(const mpq_class& x) const {
    switch (kind_) {
    case Kind::Integers:
        if (x.get_den() != 1) throw InputError("non-integral coefficient over Z");
        return x;
    case Kind::Rationals:
        return x;
    case Kind::PrimeField: {
        mpz_class p = p_;
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), p.get_mpz_t()) == 0)
            throw InputError("denominator not invertible mod " + std::to_string(p_));
        mpz_class r = x.get_num() * inv;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
        return mpq_class(r);
    }
    }
    return x;
}

std::string Ring::name() const {
    switch (kind_) {
    case Kind::Integers: return "z";
    case Kind::Rationals: return "q";
    case Kind::PrimeField: return "fp:" + std::to_string(p_);
    }
    return "?";
}

}  // namespace arrlie
