#pragma once

#include "arrlie/ring.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arrlie {

/// Dense exact integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const mpz_class> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<mpz_class> column(std::size_t c) const;

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix operator+(const IntMatrix& rhs) const;
    IntMatrix operator-(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix& rhs) const = default;

    /// Entries reduced into the ring's canonical residues (identity for Z and Q).
    IntMatrix reduced(const Ring& ring) const;

    void append_row(std::span<const mpz_class> values);
    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const IntMatrix& b);

    bool is_zero() const;
    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<mpz_class> data_;
};

/// Smith form D = U * A * V of an integer matrix. Only the column transform V (and its
/// inverse) is tracked, which is all a quotient Z^n / rowspace(A) needs.
struct SmithForm {
    std::size_t rank = 0;
    /// Positive diagonal entries in pivot order (not necessarily a divisibility chain).
    std::vector<mpz_class> diagonal;
    std::optional<IntMatrix> col_transform;
    std::optional<IntMatrix> col_transform_inv;

    /// Elementary divisors as a divisibility chain, units included.
    std::vector<mpz_class> invariant_factors() const;
    /// Invariant factors greater than one.
    std::vector<mpz_class> torsion() const;
};

SmithForm smith_normal_form(const IntMatrix& a, bool with_transforms = false);

/// Normalises a multiset of positive integers into a divisibility chain.
std::vector<mpz_class> divisibility_chain(std::vector<mpz_class> values);

std::size_t rank_mod_p(const IntMatrix& a, std::uint32_t p);

/// Rank over Q, F_p, or (same as Q) over Z.
std::size_t rank_over(const IntMatrix& a, const Ring& ring);

/// Two fixed pseudo-random primes in [2^30, 2^31) used to cross-check exact ranks.
std::span<const std::uint32_t> cross_check_primes();

/// Throws std::logic_error unless rank mod p equals rank minus the number of diagonal
/// entries divisible by p, for each cross-check prime.
void cross_check_smith(const IntMatrix& a, const SmithForm& snf);

/// Solves sum_j x_j * columns(b)_j = v exactly over Q. Empty if inconsistent.
std::optional<std::vector<mpq_class>> solve_rational(const IntMatrix& b, std::span<const mpz_class> v);

/// Integer solution of the same system, empty if none is integral.
std::optional<std::vector<mpz_class>> solve_integer(const IntMatrix& b, std::span<const mpz_class> v);

/// Z^n modulo the row space of a relation matrix, presented through its Smith form.
/// Coordinates: free part first, then one coordinate per diagonal entry d > 1 (mod d).
class LatticeQuotient {
public:
    LatticeQuotient() = default;
    explicit LatticeQuotient(const IntMatrix& relations, std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t free_rank() const { return free_rank_; }
    const std::vector<mpz_class>& torsion_moduli() const { return moduli_; }
    /// Invariant factors of the torsion part, units dropped.
    std::vector<mpz_class> torsion() const;
    std::size_t coordinate_count() const { return free_rank_ + moduli_.size(); }

    /// Image of an ambient vector, torsion coordinates reduced into [0, d).
    std::vector<mpz_class> project(std::span<const mpz_class> x) const;
    /// A representative in the ambient lattice of the k-th quotient coordinate vector.
    std::vector<mpz_class> lift(std::size_t k) const;
    /// Ambient representative of an integer combination of quotient coordinates.
    std::vector<mpz_class> lift(std::span<const mpz_class> coords) const;

    /// Matrix (coordinate_count x ambient) whose columns are projections of unit vectors.
    IntMatrix projection_matrix() const;

private:
    std::size_t ambient_ = 0;
    std::size_t rank_ = 0;
    std::size_t free_rank_ = 0;
    std::vector<std::size_t> torsion_index_;  // diagonal positions with d > 1
    std::vector<mpz_class> moduli_;
    IntMatrix v_;
    IntMatrix v_inv_;
};

}  // namespace arrlie
