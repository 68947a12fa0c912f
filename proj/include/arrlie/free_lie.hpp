#pragma once

#include "arrlie/ring.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arrlie {

/// Words over {0,...,k-1} are encoded base k, first letter most significant, so for a fixed
/// length numeric order is lexicographic order.
using WordCode = std::uint64_t;
using Word = std::vector<std::uint32_t>;

WordCode encode(const Word& w, std::size_t k);
Word decode(WordCode code, std::size_t k, std::size_t n);
bool is_lyndon(const Word& w);

/// Refuses alphabet^degree above this many words unless raised.
inline constexpr double kDefaultWordLimit = 1e7;

struct LyndonBasis {
    std::size_t alphabet = 0;
    std::size_t degree = 0;
    std::vector<WordCode> codes;        // increasing
    std::vector<std::uint32_t> split;   // |u| in the standard factorization w = uv; 0 for letters

    std::size_t size() const { return codes.size(); }
    Word word(std::size_t i) const { return decode(codes[i], alphabet, degree); }
    std::optional<std::size_t> index_of(WordCode code) const;
    /// "112" style with 1-based letters; letters are dot-separated once the alphabet exceeds 9.
    std::string label(std::size_t i) const;
    /// Standard bracketing, e.g. "[1,[1,2]]".
    std::string bracketing(std::size_t i) const;
};

/// Memoised, thread-safe. Throws InputError when k^n exceeds the word limit.
std::shared_ptr<const LyndonBasis> lyndon_basis(std::size_t k, std::size_t n,
                                                double word_limit = kDefaultWordLimit);

mpz_class witt_rank(std::size_t k, std::size_t n);

/// Sparse element of the free associative algebra in one degree.
using AssocPoly = std::map<WordCode, mpq_class>;

/// Associative expansion of the standard bracketing of basis word i, as (code, coefficient)
/// pairs in increasing code order. The first pair is the word itself with coefficient 1.
const std::vector<std::pair<WordCode, long>>& lie_expansion(std::size_t k, std::size_t n, std::size_t i);

/// Coordinates of a Lie polynomial in the Lyndon basis. Throws std::logic_error if the
/// polynomial is not a Lie element.
std::map<std::size_t, mpq_class> to_lyndon(std::size_t k, std::size_t n, AssocPoly poly);

class LieElement {
public:
    LieElement(std::size_t alphabet, std::size_t degree, Ring ring = Ring::integers());

    static LieElement generator(std::size_t alphabet, std::size_t letter, Ring ring = Ring::integers());
    static LieElement basis_element(std::size_t alphabet, std::size_t degree, std::size_t index,
                                    Ring ring = Ring::integers());

    std::size_t alphabet() const { return alphabet_; }
    std::size_t degree() const { return degree_; }
    const Ring& ring() const { return ring_; }
    const std::map<std::size_t, mpq_class>& coeffs() const { return coeffs_; }

    mpq_class coeff(std::size_t index) const;
    void add_term(std::size_t index, const mpq_class& c);
    bool is_zero() const { return coeffs_.empty(); }

    LieElement operator+(const LieElement& other) const;
    LieElement operator-(const LieElement& other) const;
    LieElement operator-() const;
    LieElement scaled(const mpq_class& c) const;
    bool operator==(const LieElement& other) const;

    /// Dense integer coordinates over the Lyndon basis (ring Z or reduced F_p residues).
    std::vector<mpz_class> dense() const;
    static LieElement from_dense(std::size_t alphabet, std::size_t degree,
                                 const std::vector<mpz_class>& coords, Ring ring = Ring::integers());

    /// The element in the free associative algebra.
    AssocPoly expand() const;
    std::string to_string() const;

private:
    void check_compatible(const LieElement& other) const;

    std::size_t alphabet_;
    std::size_t degree_;
    Ring ring_;
    std::map<std::size_t, mpq_class> coeffs_;
};

LieElement bracket(const LieElement& a, const LieElement& b);

/// Marks a letter that relabel sends to zero.
inline constexpr std::size_t kDropLetter = static_cast<std::size_t>(-1);

/// Image under the letter substitution x_i -> x_{map[i]} into an alphabet of size k
/// (x_i -> 0 where map[i] == kDropLetter).
LieElement relabel(const LieElement& a, const std::vector<std::size_t>& map, std::size_t k);

/// Coordinates of [x_j, P(w)] for every letter j and every basis word w of degree n, as a
/// table indexed [j * basis_size + w]. Integer entries.
using SparseRow = std::vector<std::pair<std::size_t, mpz_class>>;
const std::vector<SparseRow>& letter_bracket_table(std::size_t k, std::size_t n);

}  // namespace arrlie
