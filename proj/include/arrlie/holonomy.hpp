#pragma once

#include "arrlie/arrangement.hpp"
#include "arrlie/free_lie.hpp"
#include "arrlie/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arrlie {

struct GradedAbelian {
    mpz_class rank = 0;
    std::vector<mpz_class> torsion;  // invariant factors > 1, divisibility chain
    bool operator==(const GradedAbelian&) const = default;
};

struct RelationSet {
    std::size_t alphabet = 0;
    std::vector<LieElement> degree2;

    /// One row per relation, columns indexed by the wedge basis x_i^x_j (i < j).
    IntMatrix matrix() const;
};

/// Index of x_i^x_j (i < j) in the wedge basis, which is also the degree-2 Lyndon order.
std::size_t wedge_index(std::size_t i, std::size_t j, std::size_t k);

RelationSet relation_set(const Arrangement& arr);

struct Presentation {
    std::size_t generators = 0;
    std::vector<std::string> relators;
    /// One lowercase letter per generator; the uppercase letter is its inverse.
    std::vector<char> names;

    static std::vector<char> default_names(std::size_t generators);
    /// Letters as (generator, +-1).
    std::vector<std::pair<std::size_t, int>> parse_word(const std::string& word) const;
};

/// Validates names and relators (every relator must have zero exponent sums).
void validate(const Presentation& p);

/// C(k,2) x |relators| matrix whose columns are degree-2 Magnus coefficients of the relators.
IntMatrix holonomy_map_from_presentation(const Presentation& p);
RelationSet relation_set(const Presentation& p);

struct HolonomyOptions {
    std::size_t threads = 1;
    /// Overrides the per-degree alphabet cap.
    std::optional<std::size_t> guard;
};

/// Throws InputError when (alphabet, degree) is beyond the configured size guard.
void check_holonomy_guard(std::size_t alphabet, std::size_t degree, const HolonomyOptions& opts);

/// Rows spanning the degree-n piece of the ideal generated by the relations, in Lyndon
/// coordinates. Duplicate and zero rows are dropped.
IntMatrix ideal_matrix(const RelationSet& rels, std::size_t n, const HolonomyOptions& opts = {});

GradedAbelian holonomy_graded(const RelationSet& rels, std::size_t n, const Ring& ring,
                              const HolonomyOptions& opts = {});

std::size_t falk_invariant(const Arrangement& arr);

/// Basis of I^2 inside the wedge basis: one column per (flat, pair of non-minimal members).
IntMatrix i2_inclusion(const Arrangement& arr);

/// The holonomy Lie algebra over Z in degrees 1..top, each degree presented as a quotient of
/// the Lyndon lattice.
class HolonomyAlgebra {
public:
    HolonomyAlgebra(RelationSet rels, std::size_t top, const HolonomyOptions& opts = {});

    std::size_t alphabet() const { return rels_.alphabet; }
    std::size_t top() const { return pieces_.size(); }
    const RelationSet& relations() const { return rels_; }
    const LatticeQuotient& piece(std::size_t d) const { return pieces_.at(d - 1); }
    GradedAbelian graded(std::size_t d) const;
    bool torsion_free() const;

    /// Quotient coordinates of a free Lie element of degree d.
    std::vector<mpz_class> project(const LieElement& x) const;
    LieElement lift(std::size_t d, const std::vector<mpz_class>& coords) const;

private:
    RelationSet rels_;
    std::vector<LatticeQuotient> pieces_;
};

}  // namespace arrlie
