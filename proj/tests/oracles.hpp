#pragma once

// Slow, independent reference computations used to check the library. Nothing here calls
// into the code under test except for plain data accessors.

#include "arrlie/free_lie.hpp"
#include "arrlie/matrix.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using Word = std::vector<int>;
using Poly = std::map<Word, mpq_class>;

inline bool lyndon_by_rotation(const Word& w) {
    for (std::size_t s = 1; s < w.size(); ++s) {
        Word r(w.begin() + static_cast<long>(s), w.end());
        r.insert(r.end(), w.begin(), w.begin() + static_cast<long>(s));
        if (!(w < r)) return false;
    }
    return !w.empty();
}

inline std::vector<Word> all_words(int k, int n) {
    std::vector<Word> out;
    Word w(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(w);
        int i = n - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == k - 1) w[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    return out;
}

inline long lyndon_count(int k, int n) {
    long c = 0;
    for (auto& w : all_words(k, n)) c += lyndon_by_rotation(w);
    return c;
}

inline void add(Poly& p, const Word& w, const mpq_class& c) {
    auto& x = p[w];
    x += c;
    if (x == 0) p.erase(w);
}

inline Poly mul(const Poly& a, const Poly& b) {
    Poly out;
    for (auto& [u, cu] : a)
        for (auto& [v, cv] : b) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            add(out, w, cu * cv);
        }
    return out;
}

inline Poly comm(const Poly& a, const Poly& b) {
    Poly out = mul(a, b);
    for (auto& [w, c] : mul(b, a)) add(out, w, -c);
    return out;
}

inline Poly letter(int i) { return Poly{{Word{i}, 1}}; }

/// Bracketing by the longest proper Lyndon suffix, expanded in the associative algebra.
inline Poly standard_bracket(const Word& w) {
    if (w.size() == 1) return letter(w[0]);
    for (std::size_t s = 1; s < w.size(); ++s) {
        Word v(w.begin() + static_cast<long>(s), w.end());
        if (lyndon_by_rotation(v)) {
            Word u(w.begin(), w.begin() + static_cast<long>(s));
            return comm(standard_bracket(u), standard_bracket(v));
        }
    }
    return {};
}

inline Poly expand(const arrlie::LieElement& x) {
    auto basis = arrlie::lyndon_basis(x.alphabet(), x.degree());
    Poly out;
    for (auto& [i, c] : x.coeffs()) {
        auto w = basis->word(i);
        for (auto& [u, cu] : standard_bracket(Word(w.begin(), w.end()))) add(out, u, c * cu);
    }
    return out;
}

/// Rank over Q by plain fraction-based row reduction.
inline std::size_t rank_q(std::vector<std::vector<mpq_class>> m) {
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t p = rank;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline std::size_t rank_q(const arrlie::IntMatrix& a) {
    std::vector<std::vector<mpq_class>> m(a.rows(), std::vector<mpq_class>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c);
    return rank_q(std::move(m));
}

inline std::size_t rank_polys(const std::vector<Poly>& polys) {
    std::map<Word, std::size_t> col;
    for (auto& p : polys)
        for (auto& [w, c] : p) col.emplace(w, 0);
    std::size_t n = 0;
    for (auto& [w, i] : col) i = n++;
    std::vector<std::vector<mpq_class>> m(polys.size(), std::vector<mpq_class>(n));
    for (std::size_t r = 0; r < polys.size(); ++r)
        for (auto& [w, c] : polys[r]) m[r][col[w]] = c;
    return rank_q(std::move(m));
}

/// rank of the degree-n holonomy piece over Q: Witt number minus the dimension of the ideal,
/// the ideal being spanned by left-normed brackets of letters with relations.
inline long holonomy_rank_q(int k, const std::vector<Poly>& relations, int n) {
    std::vector<Poly> layer = relations;
    for (int d = 3; d <= n; ++d) {
        std::vector<Poly> next;
        for (auto& r : layer)
            for (int i = 0; i < k; ++i) next.push_back(comm(letter(i), r));
        layer = std::move(next);
    }
    long witt = 0;
    if (n >= 1) witt = lyndon_count(k, n);
    return witt - static_cast<long>(rank_polys(layer));
}

/// Determinantal divisors: d_i = gcd of all i x i minors. Returns invariant factors > 0.
inline mpz_class det(std::vector<std::vector<mpz_class>> m) {
    // Bareiss fraction-free elimination.
    const std::size_t n = m.size();
    mpz_class sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline std::vector<mpz_class> invariant_factors(const arrlie::IntMatrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    std::vector<mpz_class> dd{1};
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
        mpz_class g = 0;
        std::vector<bool> rsel(r), csel(c);
        std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
        do {
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
            do {
                std::vector<std::vector<mpz_class>> m;
                for (std::size_t i = 0; i < r; ++i) {
                    if (!rsel[i]) continue;
                    std::vector<mpz_class> row;
                    for (std::size_t j = 0; j < c; ++j)
                        if (csel[j]) row.push_back(a(i, j));
                    m.push_back(row);
                }
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(abs(det(m))).get_mpz_t());
            } while (std::prev_permutation(csel.begin(), csel.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
        if (g == 0) break;
        dd.push_back(g);
    }
    std::vector<mpz_class> out;
    for (std::size_t i = 1; i < dd.size(); ++i) out.push_back(dd[i] / dd[i - 1]);
    return out;
}

}  // namespace oracle
