#include "arrlie/free_lie.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

using namespace arrlie;

namespace {

LieElement random_element(std::mt19937_64& rng, std::size_t k, std::size_t n) {
    auto basis = lyndon_basis(k, n);
    LieElement x(k, n);
    const std::size_t terms = 1 + rng() % 3;
    for (std::size_t t = 0; t < terms && basis->size() > 0; ++t)
        x.add_term(rng() % basis->size(), static_cast<long>(rng() % 7) - 3);
    return x;
}

}  // namespace

TEST_CASE("witt numbers count lyndon words") {
    for (int k = 1; k <= 4; ++k)
        for (int n = 1; n <= 6; ++n) {
            CHECK(witt_rank(static_cast<std::size_t>(k), static_cast<std::size_t>(n)) == oracle::lyndon_count(k, n));
            CHECK(lyndon_basis(static_cast<std::size_t>(k), static_cast<std::size_t>(n))->size() ==
                  static_cast<std::size_t>(oracle::lyndon_count(k, n)));
        }
    CHECK(witt_rank(1, 1) == 1);
    CHECK(witt_rank(1, 2) == 0);
    CHECK(witt_rank(2, 3) == 2);
    CHECK(witt_rank(3, 3) == 8);
}

TEST_CASE("lyndon test matches rotations") {
    for (auto& w : oracle::all_words(3, 5)) {
        Word v(w.begin(), w.end());
        CHECK(is_lyndon(v) == oracle::lyndon_by_rotation(w));
    }
}

TEST_CASE("word codes round trip") {
    Word w{2, 0, 1, 1};
    CHECK(decode(encode(w, 3), 3, 4) == w);
}

TEST_CASE("basis labels") {
    auto b = lyndon_basis(2, 3);
    CHECK(b->label(0) == "112");
    CHECK(b->bracketing(0) == "[1,[1,2]]");
}

TEST_CASE("basis expansion matches the standard bracketing") {
    for (std::size_t k = 2; k <= 3; ++k)
        for (std::size_t n = 1; n <= 5; ++n) {
            auto basis = lyndon_basis(k, n);
            for (std::size_t i = 0; i < basis->size(); ++i) {
                auto w = basis->word(i);
                oracle::Poly expected = oracle::standard_bracket(oracle::Word(w.begin(), w.end()));
                oracle::Poly got;
                for (auto& [code, c] : lie_expansion(k, n, i)) {
                    auto u = decode(code, k, n);
                    oracle::add(got, oracle::Word(u.begin(), u.end()), c);
                }
                CHECK(got == expected);
            }
        }
}

TEST_CASE("bracket against the associative embedding") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t) {
        const std::size_t k = 2 + rng() % 3;
        const std::size_t p = 1 + rng() % 2, q = 1 + rng() % 2;
        auto a = random_element(rng, k, p), b = random_element(rng, k, q);
        auto c = bracket(a, b);
        CHECK(oracle::expand(c) == oracle::comm(oracle::expand(a), oracle::expand(b)));
        CHECK(bracket(b, a) == -c);
    }
}

TEST_CASE("jacobi") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 2 + rng() % 2;
        auto a = random_element(rng, k, 1), b = random_element(rng, k, 1), c = random_element(rng, k, 2);
        auto j = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        CHECK(j.is_zero());
    }
}

TEST_CASE("to_lyndon rejects non-Lie polynomials") {
    AssocPoly p{{encode(Word{0, 1}, 2), 1}};
    CHECK_THROWS_AS(to_lyndon(2, 2, p), std::logic_error);
}

TEST_CASE("relabel drops killed letters") {
    auto x = bracket(LieElement::generator(3, 0), LieElement::generator(3, 2));
    auto y = relabel(x, {1, kDropLetter, 0}, 2);
    CHECK(y == bracket(LieElement::generator(2, 1), LieElement::generator(2, 0)));
    auto z = relabel(x, {kDropLetter, 0, 1}, 2);
    CHECK(z.is_zero());
}

TEST_CASE("dense round trip and guard") {
    std::mt19937_64 rng(4);
    auto a = random_element(rng, 3, 4);
    CHECK(LieElement::from_dense(3, 4, a.dense()) == a);
    CHECK_THROWS_AS(lyndon_basis(30, 8), InputError);
}

TEST_CASE("basis cache files") {
    const char* dir = std::getenv("ARRLIE_CACHE");
    if (dir == nullptr) return;
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream(fs::path(dir) / "lyndon-4-7.txt") << "1\n2\n";  // corrupt entries are recomputed
    CHECK(lyndon_basis(4, 7)->size() == static_cast<std::size_t>(oracle::lyndon_count(4, 7)));
    CHECK(lyndon_basis(3, 7)->size() == static_cast<std::size_t>(oracle::lyndon_count(3, 7)));
    CHECK(fs::exists(fs::path(dir) / "lyndon-3-7.txt"));
}
