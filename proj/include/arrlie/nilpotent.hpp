#pragma once

#include "arrlie/holonomy.hpp"

#include <map>
#include <string>
#include <vector>

namespace arrlie {

struct Class2Element {
    std::vector<mpz_class> exps;
    std::vector<mpz_class> tail;
    bool operator==(const Class2Element&) const = default;
};

/// G/Gamma_3 of an arrangement group (or of a commutator-relator group) as the central
/// extension of Z^k by gr_2, gr_2 being the wedge lattice modulo the relation span.
class Class2Group {
public:
    explicit Class2Group(const Arrangement& arr);
    Class2Group(RelationSet rels, std::vector<std::string> names);

    std::size_t rank() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const LatticeQuotient& gr2() const { return gr2_; }
    /// Class of [x_i, x_j] in gr_2, for i > j.
    const std::vector<mpz_class>& cocycle(std::size_t i, std::size_t j) const;

    Class2Element identity() const;
    Class2Element generator(std::size_t i) const;
    Class2Element mul(const Class2Element& g, const Class2Element& h) const;
    Class2Element inverse(const Class2Element& g) const;
    Class2Element power(const Class2Element& g, long e) const;
    Class2Element commutator(const Class2Element& g, const Class2Element& h) const;
    bool is_identity(const Class2Element& g) const { return g == identity(); }

    /// Parses "H1.H2^-1.H3" over the atom names; "" and "1" denote the identity.
    Class2Element evaluate(const std::string& word) const;

    /// One word [x_H, prod_{K in Y} x_K] for every flat Y and every H in Y.
    std::vector<std::string> relation_words(const Arrangement& arr) const;

private:
    void check(const Class2Element& g) const;
    std::vector<mpz_class> add_tails(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const;
    std::vector<mpz_class> beta(const std::vector<mpz_class>& v, const std::vector<mpz_class>& w) const;

    std::vector<std::string> names_;
    LatticeQuotient gr2_;
    std::vector<std::vector<mpz_class>> cocycle_;  // indexed i * k + j, i > j
};

/// chi_2: rows indexed by the I^2 basis, columns by the wedge basis.
IntMatrix k_invariant_matrix(const Arrangement& arr);
/// A section of chi_2: wedge basis coordinates of e_{ya yb} for each I^2 basis element.
IntMatrix k_invariant_section(const Arrangement& arr);

struct SplittingData {
    IntMatrix lambda;     // gr_n <- H_2(X)
    IntMatrix sigma;      // gr_n <- H_2(N) = gr_n (+) H_2(X)
    IntMatrix h;          // H_2(N) <- H_2(X)
    IntMatrix inclusion;  // H_2(N) <- gr_n
    IntMatrix projection; // H_2(X) <- H_2(N)
};

/// sigma(x, c) = x - lambda(c), h(c) = (lambda(c), c). Throws std::logic_error if any of the
/// splitting identities fails.
SplittingData splitting_from_hom(const IntMatrix& lambda);

/// A finitely generated graded Lie ring, truncated: degrees 1..top(), free Z-bases per degree.
class GradedLie {
public:
    /// Free part of h/Gamma_{top+1}; marked heuristic when some degree has torsion.
    static GradedLie from_holonomy(const HolonomyAlgebra& h, std::size_t top);
    static GradedLie abelian(std::size_t k);
    static GradedLie free_truncated(std::size_t k, std::size_t top);

    /// Validates antisymmetry, Jacobi and degrees; throws InputError otherwise.
    GradedLie(std::vector<std::size_t> dims, std::map<std::pair<std::size_t, std::size_t>, SparseRow> brackets,
              bool heuristic = false);

    std::size_t top() const { return dims_.size(); }
    std::size_t dim(std::size_t d) const { return dims_.at(d - 1); }
    std::size_t total_dim() const { return degree_of_.size(); }
    std::size_t degree_of(std::size_t g) const { return degree_of_[g]; }
    /// Global index of the i-th basis element in degree d.
    std::size_t global(std::size_t d, std::size_t i) const { return offset_[d - 1] + i; }
    bool heuristic() const { return heuristic_; }

    /// [e_a, e_b] in global coordinates.
    SparseRow bracket(std::size_t a, std::size_t b) const;

    /// Permutes basis elements within each degree. perm[d-1][i] is the new position.
    GradedLie permuted(const std::vector<std::vector<std::size_t>>& perm) const;
    /// Changes basis in degree d by the unimodular matrix u (new e_i = sum_j u(i,j) e_j).
    GradedLie rebased(std::size_t d, const IntMatrix& u) const;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offset_;
    std::vector<std::size_t> degree_of_;
    std::map<std::pair<std::size_t, std::size_t>, SparseRow> brackets_;  // a < b, nonzero
    bool heuristic_ = false;
};

struct CeComplex {
    IntMatrix d2;  // rows Lambda^2 basis, columns L
    IntMatrix d3;  // rows Lambda^3 basis, columns Lambda^2
};

/// The Chevalley-Eilenberg differentials restricted to one weight.
CeComplex ce_complex(const GradedLie& L, std::size_t weight, std::size_t threads = 1);

GradedAbelian ce_h2(const GradedLie& L, const Ring& ring, std::size_t threads = 1);

struct H2Report {
    std::size_t degree = 0;
    mpz_class ce_rank;
    std::vector<mpz_class> ce_torsion;
    mpz_class holonomy_rank;
    std::size_t b2 = 0;
    bool pass = false;
    bool heuristic = false;
};

H2Report h2_rank_check(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts = {});

}  // namespace arrlie
