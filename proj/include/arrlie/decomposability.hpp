#pragma once

#include "arrlie/holonomy.hpp"
#include "arrlie/nilpotent.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arrlie {

enum class DecompVerdict { Decomposable, NotDecomposable, IndeterminateOverZ };
std::string to_string(DecompVerdict v);

struct DecompReport {
    DecompVerdict verdict = DecompVerdict::NotDecomposable;
    mpz_class r_global;
    mpz_class r_local;
    std::vector<mpz_class> torsion;
};

DecompReport is_decomposable(const Arrangement& arr, const HolonomyOptions& opts = {});

/// phi_1..phi_N from the product formula. Refuses non-decomposable input.
std::vector<mpz_class> lcs_ranks_decomposable(const Arrangement& arr, std::size_t max_degree,
                                              const HolonomyOptions& opts = {});
/// The same numbers without the decomposability check.
std::vector<mpz_class> lcs_product_formula(const Arrangement& arr, std::size_t max_degree);

/// Restriction h_n(A) -> (+)_Y h_n(A_Y) sending generators outside Y to zero. Columns are
/// global quotient coordinates, rows the concatenated local ones (flats in pencil order).
IntMatrix restriction_matrix(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts = {});

/// Per-degree data shared by the lift computations at level n.
struct LiftContext {
    Arrangement arr;
    std::size_t n = 0;
    std::shared_ptr<const HolonomyAlgebra> holonomy;  // degrees 1..n
    /// H_2(X) basis: relation of atom H in flat Y, for every H other than the smallest atom of Y.
    std::vector<std::pair<std::size_t, std::size_t>> h2_basis;  // (flat, atom)
    IntMatrix h2_wedge;  // wedge coordinates of the basis, one column each
    std::vector<std::unique_ptr<LiftContext>> locals;  // one per flat; empty for local contexts

    std::size_t gr_dim() const { return holonomy->piece(n).coordinate_count(); }
    std::size_t h2_dim() const { return h2_basis.size(); }
    /// Coordinates in the H_2(X) basis of a wedge vector lying in the relation span.
    std::vector<mpz_class> h2_coordinates(const std::vector<mpz_class>& wedge) const;
};

std::unique_ptr<LiftContext> make_lift_context(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts = {},
                                               bool with_locals = true);

/// Corrections keyed by (atom, degree i in 2..n-1); values are quotient coordinates in h_i.
using Corrections = std::map<std::pair<std::size_t, std::size_t>, std::vector<mpz_class>>;

struct LocalLift {
    std::size_t flat = 0;
    Corrections corrections;  // atoms are global indices of members of the flat
};

struct GlobalLift {
    Corrections corrections;
};

/// Embedding h_i(A_Y) -> h_i(A) on quotient coordinates.
std::vector<mpz_class> embed_local(const LiftContext& ctx, std::size_t flat, std::size_t degree,
                                   const std::vector<mpz_class>& local);

GlobalLift assemble_global_lift(const std::vector<LocalLift>& locals, const LiftContext& ctx);

struct LiftCheck {
    bool ok = true;
    std::string detail;
};

/// The map H_2(X) -> H_2(N) = h_n (+) H_2(X) induced by a lift, as an integer matrix.
/// Throws InputError if the corrections do not define a lift (the relation images fail to be
/// cycles below degree n).
IntMatrix induced_h2(const LiftContext& ctx, const Corrections& corrections);

/// Compares the restriction of the assembled global map with the local maps flat by flat.
LiftCheck check_assembly(const LiftContext& ctx, const std::vector<LocalLift>& locals, const GlobalLift& global);

struct DiagramInstance {
    IntMatrix g2;       // H_2(X_b) <- H_2(X_a)
    IntMatrix la_star;  // H_2(N) <- H_2(X_a)
    IntMatrix lb_star;  // H_2(N) <- H_2(X_b)
    IntMatrix sigma;    // gr_n(N) <- H_2(N)
    Ring ring = Ring::integers();
};

struct DiagramVerdict {
    bool pass = false;
    std::string failed;  // empty on pass
    std::optional<std::size_t> witness_column;
    std::vector<mpz_class> lhs, rhs;  // the offending columns
};

DiagramVerdict check_diagram(const DiagramInstance& d);

/// Atom map A -> B: target index per source atom.
using LatticeIso = std::vector<std::size_t>;

/// Throws InputError unless iso is a bijection carrying pencils to pencils of equal size.
void validate_iso(const Arrangement& a, const Arrangement& b, const LatticeIso& iso);

struct CandidateResult {
    std::string name;
    DiagramVerdict verdict;
    LiftCheck assembly_a, assembly_b;
};

struct VerifyResult {
    bool pass = false;
    std::vector<CandidateResult> candidates;
    std::optional<DiagramVerdict> negative_control;  // empty when gr_n or H_2 vanishes
    std::vector<std::pair<std::string, IntMatrix>> audit;
    std::vector<std::pair<std::string, std::vector<std::string>>> bases;
};

VerifyResult verify_decomposable_iso(const Arrangement& a, const Arrangement& b, const LatticeIso& iso,
                                     std::size_t n, const Ring& ring, const HolonomyOptions& opts = {});

}  // namespace arrlie
