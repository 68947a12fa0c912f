#include "arrlie/decomposability.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace arrlie;

namespace {

std::vector<Arrangement> decomposable_catalog() {
    std::vector<Arrangement> out{catalog::braid(3)};
    for (std::size_t k = 2; k <= 6; ++k) out.push_back(catalog::pencil(k));
    for (std::size_t k = 1; k <= 6; ++k) out.push_back(catalog::generic(k));
    for (std::size_t k = 3; k <= 6; ++k) out.push_back(catalog::near_pencil(k));
    return out;
}

mpz_class witt_sum(const Arrangement& arr, std::size_t n) {
    if (n == 1) return static_cast<unsigned long>(arr.size());
    mpz_class s = 0;
    for (auto& f : mobius_l2(arr)) s += oracle::lyndon_count(static_cast<int>(f.mu), static_cast<int>(n));
    return s;
}

IntMatrix top_block(const IntMatrix& m, std::size_t rows) { return m.block(0, 0, rows, m.cols()); }

}  // namespace

TEST_CASE("decomposability verdicts") {
    auto b4 = is_decomposable(catalog::braid(4));
    CHECK(b4.verdict == DecompVerdict::NotDecomposable);
    CHECK(b4.r_global == 10);
    CHECK(b4.r_local == 8);
    for (auto& arr : decomposable_catalog()) {
        auto r = is_decomposable(arr);
        CHECK(r.verdict == DecompVerdict::Decomposable);
        CHECK(r.torsion.empty());
    }
}

TEST_CASE("product formula against witt sums and holonomy") {
    for (auto& arr : decomposable_catalog()) {
        auto phi = lcs_ranks_decomposable(arr, 5);
        for (std::size_t n = 1; n <= 5; ++n) CHECK(phi[n - 1] == witt_sum(arr, n));
        for (std::size_t n = 2; n <= 3; ++n)
            CHECK(phi[n - 1] == holonomy_graded(relation_set(arr), n, Ring::integers()).rank);
    }
    CHECK_THROWS_AS(lcs_ranks_decomposable(catalog::braid(4), 3), InputError);
}

TEST_CASE("restriction to the flats is onto in degree three") {
    for (auto arr : {catalog::braid(4), catalog::braid(3), catalog::near_pencil(5), catalog::generic(4)}) {
        IntMatrix r = restriction_matrix(arr, 3);
        CHECK(oracle::rank_q(r) == r.rows());
        CHECK(mpz_class(static_cast<unsigned long>(r.rows())) == is_decomposable(arr).r_local);
    }
}

TEST_CASE("h2 splits over the flats in the decomposable case") {
    for (auto arr : {catalog::near_pencil(4), catalog::pencil(3), catalog::generic(3)}) {
        for (std::size_t n = 3; n <= 4; ++n) {
            auto global = h2_rank_check(arr, n);
            CHECK(global.pass);
            CHECK(global.ce_rank == witt_sum(arr, n) + betti(arr).b2);
            mpz_class local_sum = 0;
            std::size_t b2_sum = 0;
            for (std::size_t p = 0; p < arr.pencils().size(); ++p) {
                auto loc = localize(arr, p);
                local_sum += h2_rank_check(loc, n).ce_rank;
                b2_sum += betti(loc).b2;
            }
            CHECK(global.ce_rank == local_sum);
            CHECK(betti(arr).b2 == b2_sum);
        }
    }
}

TEST_CASE("check_diagram basics") {
    IntMatrix g2 = IntMatrix::from_rows({{0, 1}, {1, 0}}, 2);
    IntMatrix lb = IntMatrix::from_rows({{1, 2}, {1, 0}, {0, 1}}, 2);
    IntMatrix sigma = IntMatrix::from_rows({{1, 0, 0}}, 3);
    auto ok = check_diagram({g2, lb * g2, lb, sigma, Ring::integers()});
    CHECK(ok.pass);
    auto bad = check_diagram({IntMatrix::identity(2), lb * g2, lb, sigma, Ring::integers()});
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.witness_column);
    CHECK(*bad.witness_column == 0);
    CHECK(bad.lhs != bad.rhs);
    CHECK_THROWS_AS(check_diagram({IntMatrix(2, 3), lb, lb, sigma, Ring::integers()}), InputError);
    // not invertible over Z, invertible over Q
    IntMatrix two = IntMatrix::from_rows({{2, 0}, {0, 1}}, 2);
    CHECK_FALSE(check_diagram({two, lb * two, lb, sigma, Ring::integers()}).pass);
    CHECK(check_diagram({two, lb * two, lb, sigma, Ring::rationals()}).pass);
    CHECK_FALSE(check_diagram({two, lb * two, lb, sigma, Ring::prime_field(2)}).pass);
}

TEST_CASE("check_diagram is invariant under a change of basis of H2(N)") {
    IntMatrix g2 = IntMatrix::from_rows({{1, 1}, {0, 1}}, 2);
    IntMatrix lb = IntMatrix::from_rows({{1, 2}, {1, 0}, {0, 1}}, 2);
    IntMatrix sigma = IntMatrix::from_rows({{1, -1, 0}}, 3);
    IntMatrix p = IntMatrix::from_rows({{1, 0, 2}, {0, 1, 0}, {0, 0, 1}}, 3);
    IntMatrix pinv = IntMatrix::from_rows({{1, 0, -2}, {0, 1, 0}, {0, 0, 1}}, 3);
    REQUIRE(p * pinv == IntMatrix::identity(3));
    for (const IntMatrix& la : {lb * g2, lb}) {
        auto before = check_diagram({g2, la, lb, sigma, Ring::integers()});
        auto after = check_diagram({g2, p * la, p * lb, sigma * pinv, Ring::integers()});
        CHECK(before.pass == after.pass);
        CHECK(before.failed == after.failed);
    }
}

TEST_CASE("zero corrections give the canonical map") {
    auto ctx = make_lift_context(catalog::near_pencil(4), 4);
    IntMatrix m = induced_h2(*ctx, {});
    CHECK(top_block(m, ctx->gr_dim()).is_zero());
    CHECK(m.block(ctx->gr_dim(), 0, ctx->h2_dim(), ctx->h2_dim()) == IntMatrix::identity(ctx->h2_dim()));
    std::vector<LocalLift> zero;
    for (std::size_t f = 0; f < ctx->arr.pencils().size(); ++f) zero.push_back({f, {}});
    CHECK(assemble_global_lift(zero, *ctx).corrections.empty());
}

TEST_CASE("assembly on a single flat is the local lift") {
    auto ctx = make_lift_context(catalog::pencil(3), 4);
    LocalLift l{0, {}};
    std::vector<mpz_class> c(ctx->locals[0]->holonomy->piece(3).coordinate_count());
    c[0] = 1;
    l.corrections[{1, 3}] = c;
    auto g = assemble_global_lift({l}, *ctx);
    REQUIRE(g.corrections.size() == 1);
    CHECK(g.corrections.at({1, 3}) == c);
}

TEST_CASE("assembled lifts restrict to the local lifts") {
    // corrections concentrated on the big flat of near_pencil(4)
    auto arr = catalog::near_pencil(4);
    auto ctx = make_lift_context(arr, 4);
    std::size_t big = 0;
    while (arr.pencils()[big].size() != 3) ++big;
    std::vector<LocalLift> locals;
    for (std::size_t f = 0; f < arr.pencils().size(); ++f) locals.push_back({f, {}});
    const auto& q3 = ctx->locals[big]->holonomy->piece(3);
    std::vector<mpz_class> c(q3.coordinate_count());
    c[0] = 1;
    if (c.size() > 1) c[1] = -2;
    locals[big].corrections[{arr.pencils()[big][0], 3}] = c;
    locals[big].corrections[{arr.pencils()[big][2], 3}] = std::vector<mpz_class>(c.size(), 1);
    auto global = assemble_global_lift(locals, *ctx);
    CHECK(check_assembly(*ctx, locals, global).ok);

    // independent route: restriction matrix times the global lambda block equals the block sum of
    // the local lambda blocks
    IntMatrix big_m = induced_h2(*ctx, global.corrections);
    IntMatrix lhs = restriction_matrix(arr, 4) * top_block(big_m, ctx->gr_dim());
    std::size_t row = 0;
    for (std::size_t f = 0; f < arr.pencils().size(); ++f) {
        const auto& lc = *ctx->locals[f];
        Corrections local;
        for (auto& [key, v] : locals[f].corrections) {
            auto& members = arr.pencils()[f];
            local[{static_cast<std::size_t>(std::find(members.begin(), members.end(), key.first) - members.begin()),
                   key.second}] = v;
        }
        IntMatrix small = top_block(induced_h2(lc, local), lc.gr_dim());
        for (std::size_t col = 0; col < ctx->h2_dim(); ++col) {
            auto [flat, atom] = ctx->h2_basis[col];
            for (std::size_t r = 0; r < lc.gr_dim(); ++r) {
                mpz_class expected = 0;
                if (flat == f) {
                    auto& members = arr.pencils()[f];
                    const std::size_t la = static_cast<std::size_t>(
                        std::find(members.begin(), members.end(), atom) - members.begin());
                    for (std::size_t lcol = 0; lcol < lc.h2_dim(); ++lcol)
                        if (lc.h2_basis[lcol].second == la) expected = small(r, lcol);
                }
                CHECK(lhs(row + r, col) == expected);
            }
        }
        row += lc.gr_dim();
    }
    CHECK(row == lhs.rows());
}

TEST_CASE("assembly is additive") {
    auto arr = catalog::near_pencil(4);
    auto ctx = make_lift_context(arr, 4);
    std::size_t big = 0;
    while (arr.pencils()[big].size() != 3) ++big;
    const std::size_t h = arr.pencils()[big][1];
    const std::size_t dim = ctx->locals[big]->holonomy->piece(3).coordinate_count();
    auto make = [&](long a) {
        std::vector<LocalLift> locals;
        for (std::size_t f = 0; f < arr.pencils().size(); ++f) locals.push_back({f, {}});
        std::vector<mpz_class> c(dim, a);
        locals[big].corrections[{h, 3}] = c;
        return assemble_global_lift(locals, *ctx).corrections.at({h, 3});
    };
    auto one = make(1), two = make(2), three = make(3);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] + two[i] == three[i]);
}

TEST_CASE("assembly rejects malformed local lifts") {
    auto ctx = make_lift_context(catalog::near_pencil(4), 3);
    CHECK_THROWS_AS(assemble_global_lift({}, *ctx), InputError);
    std::vector<LocalLift> locals;
    for (std::size_t f = 0; f < ctx->arr.pencils().size(); ++f) locals.push_back({f, {}});
    locals[0].corrections[{ctx->arr.pencils()[0][0], 2}] = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(assemble_global_lift(locals, *ctx), InputError);
}

TEST_CASE("verify decomposable isomorphisms") {
    auto p3 = catalog::pencil(3);
    for (Ring ring : {Ring::integers(), Ring::prime_field(2)}) {
        auto res = verify_decomposable_iso(p3, p3, {1, 2, 0}, 4, ring);
        CHECK(res.pass);
        REQUIRE(res.negative_control);
        CHECK_FALSE(res.negative_control->pass);
        CHECK(res.negative_control->witness_column);
    }
    auto g4 = catalog::generic(4);
    auto res = verify_decomposable_iso(g4, g4, {3, 1, 0, 2}, 4, Ring::integers());
    CHECK(res.pass);
    CHECK_FALSE(res.negative_control);
    auto np = catalog::near_pencil(5);
    CHECK(verify_decomposable_iso(np, np, {1, 0, 3, 2, 4}, 4, Ring::integers()).pass);
}

TEST_CASE("verify rejects bad input") {
    auto p3 = catalog::pencil(3);
    CHECK_THROWS_AS(verify_decomposable_iso(p3, p3, {0, 0, 1}, 4, Ring::integers()), InputError);
    auto np = catalog::near_pencil(4);
    CHECK_THROWS_AS(verify_decomposable_iso(np, np, {3, 1, 2, 0}, 4, Ring::integers()), InputError);
    auto b4 = catalog::braid(4);
    CHECK_THROWS_AS(verify_decomposable_iso(b4, b4, {0, 1, 2, 3, 4, 5}, 4, Ring::integers()), InputError);
    CHECK_THROWS_AS(verify_decomposable_iso(p3, p3, {0, 1, 2}, 2, Ring::integers()), InputError);
}
