// One line per acceptance criterion; exit status is nonzero if any line fails.

#include "arrlie/cli.hpp"
#include "arrlie/decomposability.hpp"
#include "arrlie/nilpotent.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

using namespace arrlie;

namespace {

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<std::string()> body;  // empty string on success, else the first failure
};

struct Entry {
    std::string label;
    Arrangement arr;
    bool decomposable;
};

std::vector<Entry> catalog_entries() {
    std::vector<Entry> out;
    for (std::size_t n = 3; n <= 5; ++n) out.push_back({"braid(" + std::to_string(n) + ")", catalog::braid(n), n == 3});
    for (std::size_t k = 2; k <= 6; ++k) out.push_back({"pencil(" + std::to_string(k) + ")", catalog::pencil(k), true});
    for (std::size_t k = 1; k <= 6; ++k) out.push_back({"generic(" + std::to_string(k) + ")", catalog::generic(k), true});
    for (std::size_t k = 3; k <= 6; ++k)
        out.push_back({"near_pencil(" + std::to_string(k) + ")", catalog::near_pencil(k), true});
    return out;
}

std::string c1() {
    for (int k = 1; k <= 4; ++k)
        for (int n = 1; n <= 8; ++n)
            if (witt_rank(static_cast<std::size_t>(k), static_cast<std::size_t>(n)) != oracle::lyndon_count(k, n))
                return "witt(" + std::to_string(k) + "," + std::to_string(n) + ")";
    return "";
}

LieElement random_lie(std::mt19937_64& rng, std::size_t k, std::size_t n) {
    auto basis = lyndon_basis(k, n);
    LieElement x(k, n);
    for (int t = 0; t < 3 && basis->size(); ++t) x.add_term(rng() % basis->size(), static_cast<long>(rng() % 9) - 4);
    return x;
}

std::string c2() {
    std::mt19937_64 rng(0xb7ac);
    for (int t = 0; t < 500; ++t) {
        const std::size_t k = 1 + rng() % 4;
        if (t % 2 == 0) {
            const std::size_t p = 1 + rng() % 3, q = 1 + rng() % (4 - p);
            auto a = random_lie(rng, k, p), b = random_lie(rng, k, q);
            auto ab = bracket(a, b);
            if (!(bracket(b, a) == -ab)) return "antisymmetry, pair " + std::to_string(t);
            if (oracle::expand(ab) != oracle::comm(oracle::expand(a), oracle::expand(b)))
                return "associative embedding, pair " + std::to_string(t);
        } else {
            const std::size_t p = 1, q = 1, r = 1 + rng() % 2;
            auto a = random_lie(rng, k, p), b = random_lie(rng, k, q), c = random_lie(rng, k, r);
            auto j = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
            if (!j.is_zero()) return "jacobi, triple " + std::to_string(t);
        }
    }
    return "";
}

std::string c3() {
    for (auto& e : catalog_entries()) {
        long expected = 0;
        if (e.label == "braid(3)") expected = 2;
        if (e.label == "braid(4)") expected = 10;
        if (e.label == "braid(5)") expected = 30;
        if (e.label.rfind("pencil", 0) == 0) expected = oracle::lyndon_count(static_cast<int>(e.arr.size() - 1), 3);
        if (e.label.rfind("near_pencil", 0) == 0)
            expected = oracle::lyndon_count(static_cast<int>(e.arr.size() - 2), 3);
        const auto falk = static_cast<long>(falk_invariant(e.arr));
        const auto rank = holonomy_graded(relation_set(e.arr), 3, Ring::rationals()).rank;
        if (falk != expected || rank != expected)
            return e.label + ": falk " + std::to_string(falk) + ", rank " + rank.get_str() + ", expected " +
                   std::to_string(expected);
    }
    return "";
}

std::string c4() {
    auto b4 = is_decomposable(catalog::braid(4));
    if (b4.verdict != DecompVerdict::NotDecomposable || b4.r_global != 10 || b4.r_local != 8)
        return "braid(4): " + to_string(b4.verdict);
    for (auto& e : catalog_entries()) {
        auto rep = is_decomposable(e.arr);
        auto q = holonomy_graded(relation_set(e.arr), 3, Ring::rationals());
        if ((rep.verdict == DecompVerdict::Decomposable) != e.decomposable) return e.label + ": " + to_string(rep.verdict);
        if (q.rank != rep.r_global) return e.label + ": rank over Q differs";
        if (!rep.torsion.empty() && rep.verdict != DecompVerdict::IndeterminateOverZ)
            return e.label + ": torsion not reflected in the verdict";
    }
    return "";
}

std::string c5() {
    for (auto& [label, arr, decomposable] : catalog_entries()) {
        if (!decomposable) continue;
        auto phi = lcs_ranks_decomposable(arr, 5);
        for (std::size_t n = 2; n <= 3; ++n)
            if (phi[n - 1] != holonomy_graded(relation_set(arr), n, Ring::integers()).rank)
                return label + ": holonomy degree " + std::to_string(n);
        for (std::size_t n = 1; n <= 5; ++n) {
            mpz_class expected = 0;
            if (n == 1) {
                expected = static_cast<unsigned long>(arr.size());
            } else {
                for (auto& f : mobius_l2(arr))
                    expected += oracle::lyndon_count(static_cast<int>(f.mu), static_cast<int>(n));
            }
            if (phi[n - 1] != expected) return label + ": witt sum degree " + std::to_string(n);
        }
    }
    return "";
}

std::string c6() {
    auto p3 = h2_rank_check(catalog::pencil(3), 3);
    if (p3.ce_rank != 4 || p3.holonomy_rank != 2 || p3.b2 != 2) return "pencil(3)";
    auto b4 = h2_rank_check(catalog::braid(4), 3);
    if (b4.ce_rank != 21 || b4.holonomy_rank != 10 || b4.b2 != 11) return "braid(4)";
    for (auto& [label, arr, decomposable] : catalog_entries()) {
        if (!holonomy_graded(relation_set(arr), 2, Ring::integers()).torsion.empty()) continue;
        auto rep = h2_rank_check(arr, 3);
        if (!rep.pass || rep.ce_rank != rep.holonomy_rank + rep.b2) return label;
    }
    return "";
}

std::string c7() {
    std::mt19937_64 rng(0xc1a552);
    int checks = 0;
    for (auto& [label, arr, decomposable] : catalog_entries()) {
        Class2Group g(arr);
        for (auto& w : g.relation_words(arr))
            if (!g.is_identity(g.evaluate(w))) return label + ": relation word " + w;
        IntMatrix chi = k_invariant_matrix(arr);
        if (!(chi * k_invariant_section(arr) == IntMatrix::identity(chi.rows()))) return label + ": chi o section";
        if (chi.cols() - oracle::rank_q(chi) != betti(arr).b2) return label + ": kernel rank";
    }
    auto entries = catalog_entries();
    while (checks < 200) {
        const auto& [label, arr, decomposable] = entries[rng() % entries.size()];
        Class2Group g(arr);
        auto pick = [&] {
            Class2Element x = g.identity();
            for (int i = 0; i < 5; ++i)
                x = g.mul(x, g.power(g.generator(rng() % g.rank()), static_cast<long>(rng() % 5) - 2));
            return x;
        };
        auto a = pick(), b = pick(), c = pick();
        if (!g.is_identity(g.commutator(g.commutator(a, b), c))) return label + ": not class two";
        ++checks;
    }
    return "";
}

std::string c8() {
    Presentation p;
    p.generators = 2;
    p.relators = {"xxyXXY"};
    p.names = Presentation::default_names(2);
    validate(p);
    auto m = holonomy_map_from_presentation(p);
    if (m.rows() != 1 || m.cols() != 1 || m(0, 0) != 2) return "holonomy map " + m.to_string();
    return "";
}

std::string c9() {
    struct Case {
        std::string label;
        Arrangement arr;
        LatticeIso iso;
        bool control;
    };
    std::vector<Case> cases{{"pencil(3)", catalog::pencil(3), {1, 2, 0}, true}};
    std::vector<std::size_t> perm{0, 1, 2, 3};
    do cases.push_back({"generic(4)", catalog::generic(4), perm, false});
    while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& c : cases)
        for (Ring ring : {Ring::integers(), Ring::prime_field(2)}) {
            auto res = verify_decomposable_iso(c.arr, c.arr, c.iso, 4, ring);
            if (!res.pass) return c.label + " over " + ring.name();
            if (c.control) {
                if (!res.negative_control || res.negative_control->pass || !res.negative_control->witness_column)
                    return c.label + ": negative control did not fail with a witness";
            }
        }
    return "";
}

std::string c10() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "arrlie-acceptance";
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const Arrangement& arr) {
        auto p = dir / name;
        std::ofstream(p) << io::emit_arrangement(arr);
        return p.string();
    };
    const std::string b4 = put("braid4.json", catalog::braid(4)), p3 = put("pencil3.json", catalog::pencil(3)),
                      np = put("near_pencil5.json", catalog::near_pencil(5));
    std::vector<cli::RunConfig> configs;
    auto add = [&](std::string cmd, std::vector<std::string> files) {
        cli::RunConfig c;
        c.command = std::move(cmd);
        c.files = std::move(files);
        configs.push_back(c);
        return &configs.back();
    };
    add("lattice", {b4});
    add("betti", {p3});
    add("witt", {})->alphabet = 3;
    add("holonomy", {b4})->max_degree = 4;
    add("falk", {b4});
    add("nq2", {b4});
    add("kinv", {b4});
    add("h2check", {b4});
    add("decomp", {b4});
    add("lcs", {np})->max_degree = 6;
    {
        auto* v = add("verify-iso", {p3, p3});
        v->iso = "[1,2,0]";
    }
    {
        auto* c = add("catalog", {});
        c->catalog_name = "braid";
        c->catalog_param = 5;
    }
    for (auto& c : configs) {
        std::string first;
        for (std::size_t threads : {1, 1, 8, 8}) {
            c.threads = threads;
            auto rep = cli::run(c);
            const std::string bytes = rep.payload.dump(1) + "\n" + rep.text;
            if (first.empty())
                first = bytes;
            else if (bytes != first)
                return c.command + " differs at " + std::to_string(threads) + " threads";
        }
    }
    return "";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "witt ranks equal brute-force lyndon counts", 5, c1},
        {2, "bracket antisymmetry, jacobi and associative embedding", 30, c2},
        {3, "falk invariant equals rank of h_3", 120, c3},
        {4, "decomposability verdicts", 60, c4},
        {5, "LCS product formula consistency", 60, c5},
        {6, "H_2 of h/Gamma_3 has rank h_3 + b_2", 120, c6},
        {7, "class two quotient and k-invariant", 30, c7},
        {8, "holonomy map of x^2 y x^-2 y^-1 is multiplication by 2", 5, c8},
        {9, "constructive isomorphism verifier", 60, c9},
        {10, "reports byte identical across runs and thread counts", 120, c10},
    };
    int failures = 0;
    for (auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string why;
        try {
            why = c.body();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (why.empty() && s > c.limit_seconds) why = "over the time limit";
        std::printf("criterion %2d: %s  %-55s %7.2fs%s%s\n", c.id, why.empty() ? "PASS" : "FAIL", c.title, s,
                    why.empty() ? "" : "  ", why.c_str());
        std::fflush(stdout);
        failures += !why.empty();
    }
    return failures == 0 ? 0 : 1;
}
