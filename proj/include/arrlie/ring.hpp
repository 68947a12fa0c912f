#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arrlie {

/// Raised for malformed inputs and violated preconditions. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficient ring selector: the integers, the rationals, or a prime field F_p (p < 2^31).
class Ring {
public:
    enum class Kind { Integers, Rationals, PrimeField };

    static Ring integers() { return Ring(Kind::Integers, 0); }
    static Ring rationals() { return Ring(Kind::Rationals, 0); }
    static Ring prime_field(std::uint32_t p);

    /// Parses "z", "q" or "fp:<p>".
    static Ring parse(std::string_view text);

    Kind kind() const { return kind_; }
    std::uint32_t modulus() const { return p_; }
    bool is_field() const { return kind_ != Kind::Integers; }
    bool is_integers() const { return kind_ == Kind::Integers; }
    bool is_prime_field() const { return kind_ == Kind::PrimeField; }

    /// Canonical representative of x in this ring. For Z, x must be integral; for F_p the
    /// denominator must be invertible mod p. Residues are in [0, p).
    mpq_class normalize(const mpq_class& x) const;
    mpz_class reduce(const mpz_class& x) const;

    std::string name() const;

    bool operator==(const Ring&) const = default;

private:
    Ring(Kind k, std::uint32_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Classical number-theoretic Moebius function.
int moebius(std::uint64_t n);

}  // namespace arrlie
