#include "arrlie/nilpotent.hpp"

#include "arrlie/decomposability.hpp"
#include "arrlie/parallel.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>

namespace arrlie {

Class2Group::Class2Group(const Arrangement& arr) : Class2Group(relation_set(arr), arr.atoms()) {}

Class2Group::Class2Group(RelationSet rels, std::vector<std::string> names) : names_(std::move(names)) {
    const std::size_t k = names_.size();
    if (rels.alphabet != k) throw InputError("need one name per generator");
    const std::size_t dim = k * (k - 1) / 2;
    gr2_ = LatticeQuotient(rels.degree2.empty() ? IntMatrix(0, dim) : rels.matrix(), dim);
    cocycle_.assign(k * k, {});
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            // [x_i, x_j] = -(x_j ^ x_i) in the wedge basis
            std::vector<mpz_class> e(dim);
            e[wedge_index(j, i, k)] = -1;
            cocycle_[i * k + j] = gr2_.project(e);
        }
}

const std::vector<mpz_class>& Class2Group::cocycle(std::size_t i, std::size_t j) const {
    if (i <= j || i >= rank()) throw InputError("cocycle is indexed by i > j");
    return cocycle_[i * rank() + j];
}

Class2Element Class2Group::identity() const {
    return {std::vector<mpz_class>(rank()), std::vector<mpz_class>(gr2_.coordinate_count())};
}

Class2Element Class2Group::generator(std::size_t i) const {
    if (i >= rank()) throw InputError("generator index out of range");
    auto g = identity();
    g.exps[i] = 1;
    return g;
}

void Class2Group::check(const Class2Element& g) const {
    if (g.exps.size() != rank() || g.tail.size() != gr2_.coordinate_count())
        throw InputError("element does not belong to this class-2 group");
}

std::vector<mpz_class> Class2Group::add_tails(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
    std::vector<mpz_class> out(a.size());
    const auto& moduli = gr2_.torsion_moduli();
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
        if (i >= gr2_.free_rank()) {
            const mpz_class& d = moduli[i - gr2_.free_rank()];
            mpz_fdiv_r(out[i].get_mpz_t(), out[i].get_mpz_t(), d.get_mpz_t());
        }
    }
    return out;
}

std::vector<mpz_class> Class2Group::beta(const std::vector<mpz_class>& v, const std::vector<mpz_class>& w) const {
    std::vector<mpz_class> out(gr2_.coordinate_count());
    const std::size_t k = rank();
    for (std::size_t i = 0; i < k; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < i; ++j) {
            if (w[j] == 0) continue;
            mpz_class f = v[i] * w[j];
            const auto& c = cocycle_[i * k + j];
            for (std::size_t t = 0; t < out.size(); ++t)
                if (c[t] != 0) out[t] += f * c[t];
        }
    }
    return add_tails(out, std::vector<mpz_class>(out.size()));
}

Class2Element Class2Group::mul(const Class2Element& g, const Class2Element& h) const {
    check(g);
    check(h);
    Class2Element out;
    out.exps.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) out.exps[i] = g.exps[i] + h.exps[i];
    out.tail = add_tails(add_tails(g.tail, h.tail), beta(g.exps, h.exps));
    return out;
}

Class2Element Class2Group::inverse(const Class2Element& g) const {
    check(g);
    Class2Element out;
    for (auto& x : g.exps) out.exps.push_back(-x);
    std::vector<mpz_class> neg;
    for (auto& x : g.tail) neg.push_back(-x);
    out.tail = add_tails(neg, beta(g.exps, g.exps));
    return out;
}

Class2Element Class2Group::power(const Class2Element& g, long e) const {
    Class2Element base = e < 0 ? inverse(g) : g;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
    Class2Element acc = identity();
    while (n > 0) {
        if (n & 1) acc = mul(acc, base);
        n >>= 1;
        if (n > 0) base = mul(base, base);
    }
    return acc;
}

Class2Element Class2Group::commutator(const Class2Element& g, const Class2Element& h) const {
    return mul(mul(g, h), mul(inverse(g), inverse(h)));
}

Class2Element Class2Group::evaluate(const std::string& word) const {
    Class2Element acc = identity();
    if (word.empty() || word == "1") return acc;
    std::stringstream ss(word);
    std::string token;
    std::size_t pos = 0;
    while (std::getline(ss, token, '.')) {
        ++pos;
        std::string name = token;
        long e = 1;
        auto caret = token.find('^');
        if (caret != std::string::npos) {
            name = token.substr(0, caret);
            try {
                std::size_t used = 0;
                e = std::stol(token.substr(caret + 1), &used);
                if (used != token.size() - caret - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw InputError("bad exponent in token " + std::to_string(pos) + " ('" + token + "')");
            }
        }
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end())
            throw InputError("unknown generator '" + name + "' in token " + std::to_string(pos));
        acc = mul(acc, power(generator(static_cast<std::size_t>(it - names_.begin())), e));
    }
    return acc;
}

std::vector<std::string> Class2Group::relation_words(const Arrangement& arr) const {
    std::vector<std::string> out;
    for (auto& pencil : arr.pencils())
        for (std::size_t h : pencil) {
            std::string p, pinv;
            for (std::size_t i = 0; i < pencil.size(); ++i) {
                p += (i ? "." : "") + arr.atoms()[pencil[i]];
                pinv += (i ? "." : "") + arr.atoms()[pencil[pencil.size() - 1 - i]] + "^-1";
            }
            const std::string& hn = arr.atoms()[h];
            out.push_back(hn + "." + p + "." + hn + "^-1." + pinv);
        }
    return out;
}

IntMatrix k_invariant_matrix(const Arrangement& arr) {
    return i2_inclusion(arr).transpose();
}

IntMatrix k_invariant_section(const Arrangement& arr) {
    const std::size_t k = arr.size();
    std::vector<std::size_t> rows;
    for (auto& pencil : arr.pencils())
        for (std::size_t a = 1; a < pencil.size(); ++a)
            for (std::size_t b = a + 1; b < pencil.size(); ++b) rows.push_back(wedge_index(pencil[a], pencil[b], k));
    IntMatrix s(k * (k - 1) / 2, rows.size());
    for (std::size_t c = 0; c < rows.size(); ++c) s(rows[c], c) = 1;
    return s;
}

SplittingData splitting_from_hom(const IntMatrix& lambda) {
    const std::size_t m = lambda.rows(), c = lambda.cols();
    SplittingData s;
    s.lambda = lambda;
    s.sigma = IntMatrix(m, m + c);
    s.sigma.set_block(0, 0, IntMatrix::identity(m));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < c; ++j) s.sigma(r, m + j) = -lambda(r, j);
    s.h = IntMatrix(m + c, c);
    s.h.set_block(0, 0, lambda);
    s.h.set_block(m, 0, IntMatrix::identity(c));
    s.inclusion = IntMatrix(m + c, m);
    s.inclusion.set_block(0, 0, IntMatrix::identity(m));
    s.projection = IntMatrix(c, m + c);
    s.projection.set_block(0, m, IntMatrix::identity(c));

    if (!(s.sigma * s.inclusion == IntMatrix::identity(m))) throw std::logic_error("sigma o i is not the identity");
    if (!(s.projection * s.h == IntMatrix::identity(c))) throw std::logic_error("pi o h is not the identity");
    if (!(s.sigma * s.h).is_zero()) throw std::logic_error("sigma o h is not zero");
    // ker sigma = im h: ranks add up and im h is saturated.
    auto snf_h = smith_normal_form(s.h);
    if (smith_normal_form(s.sigma).rank + snf_h.rank != m + c || !snf_h.torsion().empty())
        throw std::logic_error("ker sigma differs from im h");
    return s;
}

GradedLie::GradedLie(std::vector<std::size_t> dims, std::map<std::pair<std::size_t, std::size_t>, SparseRow> brackets,
                     bool heuristic)
    : dims_(std::move(dims)), heuristic_(heuristic) {
    std::size_t total = 0;
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        offset_.push_back(total);
        for (std::size_t i = 0; i < dims_[d]; ++i) degree_of_.push_back(d + 1);
        total += dims_[d];
    }
    for (auto& [key, row] : brackets) {
        auto [a, b] = key;
        if (a >= total || b >= total) throw InputError("structure constant refers to an unknown basis element");
        SparseRow clean;
        for (auto& [t, v] : row) {
            if (v == 0) continue;
            if (t >= total || degree_of_[t] != degree_of_[a] + degree_of_[b])
                throw InputError("bracket lands in the wrong degree");
            clean.emplace_back(t, v);
        }
        std::sort(clean.begin(), clean.end());
        if (a == b) {
            if (!clean.empty()) throw InputError("antisymmetry fails: [e,e] != 0");
            continue;
        }
        if (clean.empty()) continue;
        if (a < b) {
            auto rev = brackets.find({b, a});
            if (rev != brackets.end()) {
                std::map<std::size_t, mpz_class> sum;
                for (auto& [t, v] : clean) sum[t] += v;
                for (auto& [t, v] : rev->second) sum[t] += v;
                for (auto& [t, v] : sum)
                    if (v != 0) throw InputError("antisymmetry fails on a stored pair");
            }
            brackets_[{a, b}] = std::move(clean);
        } else if (brackets.find({b, a}) == brackets.end()) {
            for (auto& [t, v] : clean) v = -v;
            brackets_[{b, a}] = std::move(clean);
        }
    }
    // Jacobi on all triples whose total degree stays inside the truncation.
    auto apply = [&](std::size_t a, const SparseRow& x) {
        std::map<std::size_t, mpz_class> out;
        for (auto& [t, v] : x)
            for (auto& [u, w] : bracket(a, t)) out[u] += v * w;
        return out;
    };
    for (std::size_t a = 0; a < total; ++a)
        for (std::size_t b = a + 1; b < total; ++b)
            for (std::size_t c = b + 1; c < total; ++c) {
                if (degree_of_[a] + degree_of_[b] + degree_of_[c] > top()) continue;
                std::map<std::size_t, mpz_class> sum;
                for (auto& [u, w] : apply(a, bracket(b, c))) sum[u] += w;
                for (auto& [u, w] : apply(b, bracket(c, a))) sum[u] += w;
                for (auto& [u, w] : apply(c, bracket(a, b))) sum[u] += w;
                for (auto& [u, w] : sum)
                    if (w != 0) throw InputError("Jacobi identity fails on basis triple");
            }
}

SparseRow GradedLie::bracket(std::size_t a, std::size_t b) const {
    if (a == b) return {};
    bool swap = a > b;
    auto it = brackets_.find(swap ? std::make_pair(b, a) : std::make_pair(a, b));
    if (it == brackets_.end()) return {};
    SparseRow out = it->second;
    if (swap)
        for (auto& [t, v] : out) v = -v;
    return out;
}

GradedLie GradedLie::from_holonomy(const HolonomyAlgebra& h, std::size_t top) {
    if (top == 0 || top > h.top()) throw InputError("truncation outside the computed holonomy degrees");
    std::vector<std::size_t> dims;
    std::vector<LieElement> lifts;
    std::vector<std::size_t> deg;
    bool heuristic = false;
    for (std::size_t d = 1; d <= top; ++d) {
        const auto& q = h.piece(d);
        if (!q.torsion_moduli().empty()) heuristic = true;
        dims.push_back(q.free_rank());
        for (std::size_t t = 0; t < q.free_rank(); ++t) {
            std::vector<mpz_class> unit(q.coordinate_count());
            unit[t] = 1;
            lifts.push_back(h.lift(d, unit));
            deg.push_back(d);
        }
    }
    std::vector<std::size_t> offset{0};
    for (auto d : dims) offset.push_back(offset.back() + d);
    std::map<std::pair<std::size_t, std::size_t>, SparseRow> brackets;
    for (std::size_t a = 0; a < lifts.size(); ++a)
        for (std::size_t b = a + 1; b < lifts.size(); ++b) {
            const std::size_t d = deg[a] + deg[b];
            if (d > top) continue;
            auto coords = h.project(arrlie::bracket(lifts[a], lifts[b]));
            SparseRow row;
            for (std::size_t t = 0; t < dims[d - 1]; ++t)
                if (coords[t] != 0) row.emplace_back(offset[d - 1] + t, coords[t]);
            if (!row.empty()) brackets[{a, b}] = std::move(row);
        }
    return GradedLie(std::move(dims), std::move(brackets), heuristic);
}

GradedLie GradedLie::abelian(std::size_t k) {
    return GradedLie({k}, {});
}

GradedLie GradedLie::free_truncated(std::size_t k, std::size_t top) {
    RelationSet empty;
    empty.alphabet = k;
    return from_holonomy(HolonomyAlgebra(empty, top), top);
}

GradedLie GradedLie::permuted(const std::vector<std::vector<std::size_t>>& perm) const {
    if (perm.size() != top()) throw InputError("one permutation per degree is required");
    std::vector<std::size_t> to(total_dim());
    for (std::size_t d = 1; d <= top(); ++d) {
        if (perm[d - 1].size() != dim(d)) throw InputError("permutation length mismatch");
        for (std::size_t i = 0; i < dim(d); ++i) to[global(d, i)] = global(d, perm[d - 1][i]);
    }
    std::map<std::pair<std::size_t, std::size_t>, SparseRow> out;
    for (auto& [key, row] : brackets_) {
        SparseRow r;
        for (auto& [t, v] : row) r.emplace_back(to[t], v);
        out[{to[key.first], to[key.second]}] = std::move(r);
    }
    return GradedLie(dims_, std::move(out), heuristic_);
}

GradedLie GradedLie::rebased(std::size_t d, const IntMatrix& u) const {
    const std::size_t n = dim(d);
    if (u.rows() != n || u.cols() != n) throw InputError("basis change has the wrong shape");
    // old e_j = sum_i uinv(j, i) f_i
    IntMatrix ut = u.transpose(), uinv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<mpz_class> unit(n);
        unit[j] = 1;
        auto y = solve_integer(ut, unit);
        if (!y) throw InputError("basis change is not unimodular");
        for (std::size_t i = 0; i < n; ++i) uinv(j, i) = (*y)[i];
    }
    const std::size_t off = global(d, 0);
    auto in_old = [&](std::size_t g) {
        std::map<std::size_t, mpz_class> v;
        if (degree_of_[g] != d) {
            v[g] = 1;
        } else {
            for (std::size_t j = 0; j < n; ++j)
                if (u(g - off, j) != 0) v[off + j] = u(g - off, j);
        }
        return v;
    };
    auto to_new = [&](const std::map<std::size_t, mpz_class>& x) {
        std::map<std::size_t, mpz_class> out;
        for (auto& [t, v] : x) {
            if (v == 0) continue;
            if (degree_of_[t] != d) {
                out[t] += v;
                continue;
            }
            for (std::size_t i = 0; i < n; ++i)
                if (uinv(t - off, i) != 0) out[off + i] += v * uinv(t - off, i);
        }
        return out;
    };
    std::map<std::pair<std::size_t, std::size_t>, SparseRow> out;
    for (std::size_t a = 0; a < total_dim(); ++a)
        for (std::size_t b = a + 1; b < total_dim(); ++b) {
            if (degree_of_[a] + degree_of_[b] > top()) continue;
            std::map<std::size_t, mpz_class> acc;
            for (auto& [s, vs] : in_old(a))
                for (auto& [t, vt] : in_old(b))
                    for (auto& [w, c] : bracket(s, t)) acc[w] += vs * vt * c;
            SparseRow row;
            for (auto& [w, c] : to_new(acc))
                if (c != 0) row.emplace_back(w, c);
            if (!row.empty()) out[{a, b}] = std::move(row);
        }
    return GradedLie(dims_, std::move(out), heuristic_);
}

CeComplex ce_complex(const GradedLie& L, std::size_t weight, std::size_t threads) {
    const std::size_t n = L.total_dim();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::unordered_map<std::size_t, std::size_t> pair_index;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (L.degree_of(a) + L.degree_of(b) == weight) {
                pair_index.emplace(a * n + b, pairs.size());
                pairs.emplace_back(a, b);
            }
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                if (L.degree_of(a) + L.degree_of(b) + L.degree_of(c) == weight) triples.push_back({a, b, c});

    const std::size_t ldim = weight <= L.top() ? L.dim(weight) : 0;
    const std::size_t loff = weight <= L.top() ? L.global(weight, 0) : 0;
    CeComplex out{IntMatrix(pairs.size(), ldim), IntMatrix(triples.size(), pairs.size())};
    if (ldim > 0)
        for (std::size_t p = 0; p < pairs.size(); ++p)
            for (auto& [t, v] : L.bracket(pairs[p].first, pairs[p].second)) out.d2(p, t - loff) -= v;

    parallel_for(triples.size(), threads, [&](std::size_t r) {
        auto [a, b, c] = triples[r];
        // a^[b,c] - b^[a,c] + c^[a,b]
        auto wedge = [&](std::size_t x, const SparseRow& y, int sign) {
            for (auto& [t, v] : y) {
                if (t == x) continue;
                std::size_t lo = std::min(x, t), hi = std::max(x, t);
                int s = x < t ? sign : -sign;
                out.d3(r, pair_index.at(lo * n + hi)) += s * v;
            }
        };
        wedge(a, L.bracket(b, c), 1);
        wedge(b, L.bracket(a, c), -1);
        wedge(c, L.bracket(a, b), 1);
    });
    return out;
}

GradedAbelian ce_h2(const GradedLie& L, const Ring& ring, std::size_t threads) {
    GradedAbelian out;
    std::vector<mpz_class> torsion;
    for (std::size_t w = 2; w <= 2 * L.top(); ++w) {
        CeComplex c = ce_complex(L, w, threads);
        const std::size_t n2 = c.d2.rows();
        if (n2 == 0) continue;
        if (c.d3.rows() > 0 && c.d2.cols() > 0 && !(c.d3 * c.d2).is_zero())
            throw std::logic_error("Chevalley-Eilenberg differentials do not compose to zero");
        std::size_t r2 = 0, r3 = 0;
        if (ring.is_prime_field()) {
            r2 = rank_mod_p(c.d2, ring.modulus());
            r3 = rank_mod_p(c.d3, ring.modulus());
        } else {
            r2 = smith_normal_form(c.d2).rank;
            auto snf = smith_normal_form(c.d3);
            cross_check_smith(c.d3, snf);
            r3 = snf.rank;
            if (ring.is_integers())
                for (auto& d : snf.diagonal)
                    if (d > 1) torsion.push_back(d);
        }
        out.rank += static_cast<unsigned long>(n2 - r2 - r3);
    }
    for (auto& d : divisibility_chain(torsion))
        if (d > 1) out.torsion.push_back(d);
    return out;
}

H2Report h2_rank_check(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts) {
    if (n < 2) throw InputError("degree must be at least 2");
    if (n > 3) {
        auto verdict = is_decomposable(arr, opts);
        if (verdict.verdict != DecompVerdict::Decomposable)
            throw InputError("the rank identity beyond degree 3 is only established for decomposable "
                             "arrangements; this one is " + to_string(verdict.verdict));
    }
    HolonomyAlgebra h(relation_set(arr), n, opts);
    GradedLie L = GradedLie::from_holonomy(h, n - 1);
    GradedAbelian ce = ce_h2(L, Ring::integers(), opts.threads);
    H2Report rep;
    rep.degree = n;
    rep.ce_rank = ce.rank;
    rep.ce_torsion = ce.torsion;
    rep.holonomy_rank = h.graded(n).rank;
    rep.b2 = betti(arr).b2;
    rep.heuristic = L.heuristic();
    rep.pass = rep.ce_rank == rep.holonomy_rank + static_cast<unsigned long>(rep.b2);
    return rep;
}

}  // namespace arrlie
