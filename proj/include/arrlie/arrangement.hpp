#pragma once

#include "arrlie/ring.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace arrlie {

using RationalVector = std::vector<mpq_class>;
using Pencil = std::vector<std::size_t>;

/// A central arrangement known through its rank <= 2 flats. Pencils are stored with sorted
/// members, and the pencil list itself is sorted, so equal lattices compare equal.
class Arrangement {
public:
    Arrangement() = default;

    /// Validates and canonicalises. At least one of normals/pencils must be given; when only
    /// normals are present the pencils are derived, when both are present they must agree.
    Arrangement(std::vector<std::string> atoms, std::optional<std::vector<RationalVector>> normals,
                std::optional<std::vector<Pencil>> pencils);

    static Arrangement from_pencils(std::vector<std::string> atoms, std::vector<Pencil> pencils);
    static Arrangement from_normals(std::vector<std::string> atoms, std::vector<RationalVector> normals);

    std::size_t size() const { return atoms_.size(); }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::optional<std::vector<RationalVector>>& normals() const { return normals_; }
    const std::vector<Pencil>& pencils() const { return pencils_; }

    /// Index of the pencil containing atoms i != j.
    std::size_t pencil_of(std::size_t i, std::size_t j) const { return pair_pencil_[i * size() + j]; }
    /// Atom index for a name, or nullopt.
    std::optional<std::size_t> atom_index(const std::string& name) const;

    bool operator==(const Arrangement& other) const {
        return atoms_ == other.atoms_ && pencils_ == other.pencils_ && normals_ == other.normals_;
    }

private:
    void build_pair_table();

    std::vector<std::string> atoms_;
    std::optional<std::vector<RationalVector>> normals_;
    std::vector<Pencil> pencils_;
    std::vector<std::size_t> pair_pencil_;
};

struct Flat2 {
    std::size_t pencil_index = 0;
    std::vector<std::size_t> members;
    long mu = 0;
};

struct BettiData {
    std::size_t b1 = 0;
    std::size_t b2 = 0;
    bool operator==(const BettiData&) const = default;
};

/// Groups atom pairs by the rank-2 subspace their normals span. Atom names, when given,
/// are used in diagnostics.
std::vector<Pencil> pencils_from_normals(const std::vector<RationalVector>& normals,
                                         const std::vector<std::string>& names = {});

/// Rank over Q of a list of rational vectors.
std::size_t rational_rank(const std::vector<RationalVector>& vectors);

std::vector<Flat2> mobius_l2(const Arrangement& arr);
BettiData betti(const Arrangement& arr);
Arrangement localize(const Arrangement& arr, std::size_t pencil_index);
inline Arrangement localize(const Arrangement& arr, const Flat2& flat) {
    return localize(arr, flat.pencil_index);
}

/// Relabels atom i of arr as atom perm[i]; names move with their atoms.
Arrangement permute_atoms(const Arrangement& arr, const std::vector<std::size_t>& perm);

namespace catalog {
/// Diagonal hyperplanes x_i = x_j in C^n, with normals.
Arrangement braid(std::size_t n);
/// k lines through one point.
Arrangement pencil(std::size_t k);
/// k atoms, every pair its own pencil.
Arrangement generic(std::size_t k);
/// Atoms 1..k-1 form one pencil; atom k meets each of them in a double point.
Arrangement near_pencil(std::size_t k);
/// Dispatch by name: braid, pencil, generic, near_pencil.
Arrangement by_name(const std::string& name, std::size_t param);
}  // namespace catalog

}  // namespace arrlie
