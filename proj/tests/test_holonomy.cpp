#include "arrlie/holonomy.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace arrlie;

namespace {

std::vector<oracle::Poly> relation_polys(const RelationSet& rels) {
    std::vector<oracle::Poly> out;
    for (auto& r : rels.degree2) out.push_back(oracle::expand(r));
    return out;
}

std::vector<Arrangement> small_catalog() {
    return {catalog::braid(3),       catalog::braid(4),       catalog::pencil(3),
            catalog::pencil(4),      catalog::generic(3),     catalog::generic(4),
            catalog::near_pencil(4), catalog::near_pencil(5)};
}

}  // namespace

TEST_CASE("wedge index is the degree two lyndon order") {
    for (std::size_t k = 2; k <= 6; ++k) {
        auto b = lyndon_basis(k, 2);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                CHECK(*b->index_of(encode(Word{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}, k)) ==
                      wedge_index(i, j, k));
    }
}

TEST_CASE("holonomy ranks agree with the associative oracle") {
    for (auto& arr : small_catalog()) {
        auto rels = relation_set(arr);
        const int k = static_cast<int>(arr.size());
        for (int n = 2; n <= (k <= 5 ? 4 : 3); ++n) {
            auto g = holonomy_graded(rels, static_cast<std::size_t>(n), Ring::rationals());
            CHECK(g.rank == oracle::holonomy_rank_q(k, relation_polys(rels), n));
        }
    }
}

TEST_CASE("braid arrangement ranks") {
    auto rels = relation_set(catalog::braid(4));
    CHECK(holonomy_graded(rels, 1, Ring::integers()).rank == 6);
    CHECK(holonomy_graded(rels, 2, Ring::integers()).rank == 4);
    CHECK(holonomy_graded(rels, 3, Ring::integers()).rank == 10);
    CHECK(holonomy_graded(rels, 4, Ring::integers()).rank == 21);
    CHECK(holonomy_graded(rels, 4, Ring::prime_field(2)).rank == 21);
}

TEST_CASE("falk invariant equals rank of the third piece") {
    for (auto& arr : small_catalog())
        CHECK(mpz_class(static_cast<unsigned long>(falk_invariant(arr))) ==
              holonomy_graded(relation_set(arr), 3, Ring::rationals()).rank);
}

TEST_CASE("presentation holonomy map") {
    Presentation p;
    p.generators = 2;
    p.relators = {"xxyXXY"};
    p.names = Presentation::default_names(2);
    validate(p);
    auto m = holonomy_map_from_presentation(p);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 1);
    CHECK(m(0, 0) == 2);
    auto g2 = holonomy_graded(relation_set(p), 2, Ring::integers());
    CHECK(g2.rank == 0);
    CHECK(g2.torsion == std::vector<mpz_class>{2});
    CHECK(holonomy_graded(relation_set(p), 2, Ring::prime_field(2)).rank == 1);
    CHECK(holonomy_graded(relation_set(p), 2, Ring::prime_field(3)).rank == 0);
}

TEST_CASE("presentations must have zero exponent sums") {
    Presentation p;
    p.generators = 2;
    p.relators = {"xxy"};
    p.names = Presentation::default_names(2);
    CHECK_THROWS_AS(validate(p), InputError);
    p.relators = {"xqX"};
    CHECK_THROWS_AS(validate(p), InputError);
}

TEST_CASE("arrangement presentation matches the arrangement") {
    // pencil of 3 through the commutator relators [x, xyz], [y, xyz]
    Presentation p;
    p.generators = 3;
    p.relators = {"xxyzXZYX", "yxyzYZYX"};
    p.names = Presentation::default_names(3);
    validate(p);
    for (std::size_t n = 2; n <= 4; ++n)
        CHECK(holonomy_graded(relation_set(p), n, Ring::integers()) ==
              holonomy_graded(relation_set(catalog::pencil(3)), n, Ring::integers()));
}

TEST_CASE("ideal rows are thread independent") {
    auto rels = relation_set(catalog::braid(4));
    HolonomyOptions one, four;
    four.threads = 4;
    CHECK(ideal_matrix(rels, 4, one) == ideal_matrix(rels, 4, four));
}

TEST_CASE("size guard") {
    auto rels = relation_set(catalog::generic(9));
    CHECK_THROWS_AS(holonomy_graded(rels, 4, Ring::integers()), InputError);
    HolonomyOptions loose;
    loose.guard = 9;
    CHECK_NOTHROW(check_holonomy_guard(9, 4, loose));
}

TEST_CASE("holonomy algebra project and lift") {
    HolonomyAlgebra h(relation_set(catalog::braid(4)), 3);
    CHECK(h.torsion_free());
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto& q = h.piece(d);
        for (std::size_t t = 0; t < q.coordinate_count(); ++t) {
            std::vector<mpz_class> unit(q.coordinate_count());
            unit[t] = 1;
            CHECK(h.project(h.lift(d, unit)) == unit);
        }
    }
    // relations vanish
    for (auto& r : h.relations().degree2)
        for (auto& x : h.project(r)) CHECK(x == 0);
}
