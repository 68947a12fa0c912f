#include "arrlie/holonomy.hpp"

#include "arrlie/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

namespace arrlie {

std::size_t wedge_index(std::size_t i, std::size_t j, std::size_t k) {
    if (i > j) std::swap(i, j);
    return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

IntMatrix RelationSet::matrix() const {
    const std::size_t cols = alphabet * (alphabet - 1) / 2;
    IntMatrix m(degree2.size(), cols);
    for (std::size_t r = 0; r < degree2.size(); ++r) {
        if (degree2[r].degree() != 2) throw InputError("relation is not of degree 2");
        auto d = degree2[r].dense();
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = d[c];
    }
    return m;
}

RelationSet relation_set(const Arrangement& arr) {
    RelationSet rs;
    rs.alphabet = arr.size();
    if (rs.alphabet < 2) return rs;
    for (auto& flat : mobius_l2(arr))
        for (std::size_t h : flat.members) {
            LieElement r(rs.alphabet, 2);
            for (std::size_t k : flat.members) {
                if (k == h) continue;
                r.add_term(wedge_index(h, k, rs.alphabet), h < k ? 1 : -1);
            }
            if (!r.is_zero()) rs.degree2.push_back(std::move(r));
        }
    return rs;
}

std::vector<char> Presentation::default_names(std::size_t generators) {
    std::vector<char> out;
    if (generators <= 3) {
        for (std::size_t i = 0; i < generators; ++i) out.push_back(static_cast<char>('x' + i));
    } else {
        if (generators > 26) throw InputError("at most 26 generators are supported");
        for (std::size_t i = 0; i < generators; ++i) out.push_back(static_cast<char>('a' + i));
    }
    return out;
}

std::vector<std::pair<std::size_t, int>> Presentation::parse_word(const std::string& word) const {
    std::vector<std::pair<std::size_t, int>> out;
    for (std::size_t pos = 0; pos < word.size(); ++pos) {
        char c = word[pos];
        int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
        char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto it = std::find(names.begin(), names.end(), lower);
        if (it == names.end())
            throw InputError("unknown letter '" + std::string(1, c) + "' at position " + std::to_string(pos) +
                             " of relator \"" + word + "\"");
        out.emplace_back(static_cast<std::size_t>(it - names.begin()), sign);
    }
    return out;
}

void validate(const Presentation& p) {
    if (p.generators == 0) throw InputError("presentation needs at least one generator");
    if (p.names.size() != p.generators) throw InputError("need one name per generator");
    std::set<char> seen;
    for (char c : p.names) {
        if (!std::islower(static_cast<unsigned char>(c)))
            throw InputError("generator names must be lowercase letters");
        if (!seen.insert(c).second) throw InputError("duplicate generator name '" + std::string(1, c) + "'");
    }
    for (std::size_t r = 0; r < p.relators.size(); ++r) {
        std::vector<long> sums(p.generators, 0);
        for (auto [g, e] : p.parse_word(p.relators[r])) sums[g] += e;
        for (std::size_t g = 0; g < p.generators; ++g)
            if (sums[g] != 0)
                throw InputError("relator " + std::to_string(r) + " (\"" + p.relators[r] +
                                 "\") has exponent sum " + std::to_string(sums[g]) + " in generator '" +
                                 std::string(1, p.names[g]) + "'");
    }
}

IntMatrix holonomy_map_from_presentation(const Presentation& p) {
    validate(p);
    const std::size_t k = p.generators;
    IntMatrix m(k * (k - 1) / 2, p.relators.size());
    for (std::size_t r = 0; r < p.relators.size(); ++r) {
        auto letters = p.parse_word(p.relators[r]);
        // Running exponent sums of each generator over the prefix.
        std::vector<long> prefix(k, 0);
        for (auto [g, e] : letters) {
            for (std::size_t i = 0; i < g; ++i)
                if (prefix[i] != 0) m(wedge_index(i, g, k), r) += prefix[i] * e;
            prefix[g] += e;
        }
    }
    return m;
}

RelationSet relation_set(const Presentation& p) {
    IntMatrix m = holonomy_map_from_presentation(p);
    RelationSet rs;
    rs.alphabet = p.generators;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        auto col = m.column(c);
        if (std::all_of(col.begin(), col.end(), [](const mpz_class& x) { return x == 0; })) continue;
        rs.degree2.push_back(LieElement::from_dense(p.generators, 2, col));
    }
    return rs;
}

void check_holonomy_guard(std::size_t alphabet, std::size_t degree, const HolonomyOptions& opts) {
    if (degree <= 2) return;
    auto refuse = [&](const std::string& limit) {
        throw InputError("holonomy in degree " + std::to_string(degree) + " on " + std::to_string(alphabet) +
                         " generators exceeds the size guard (" + limit + "); pass --guard to override");
    };
    if (opts.guard) {
        if (alphabet > *opts.guard) refuse("alphabet <= " + std::to_string(*opts.guard));
        return;
    }
    if (degree == 3 && alphabet > 15) refuse("alphabet <= 15 at degree 3");
    if (degree == 4 && alphabet > 8) refuse("alphabet <= 8 at degree 4");
    if (degree >= 5 && std::pow(static_cast<double>(alphabet), static_cast<double>(degree)) > 4096)
        refuse("alphabet^degree <= 4096 beyond degree 4");
}

namespace {

using DenseRow = std::vector<mpz_class>;

void normalize_sign(DenseRow& row) {
    for (auto& x : row) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : row) y = -y;
        return;
    }
}

std::vector<DenseRow> unique_rows(std::vector<DenseRow> rows) {
    std::vector<DenseRow> out;
    std::set<DenseRow> seen;
    for (auto& r : rows) {
        normalize_sign(r);
        if (std::all_of(r.begin(), r.end(), [](const mpz_class& x) { return x == 0; })) continue;
        if (seen.insert(r).second) out.push_back(std::move(r));
    }
    return out;
}

std::vector<DenseRow> ideal_rows(const RelationSet& rels, std::size_t n, const HolonomyOptions& opts) {
    const std::size_t k = rels.alphabet;
    if (n == 2) {
        std::vector<DenseRow> rows;
        for (auto& r : rels.degree2) rows.push_back(r.dense());
        return unique_rows(std::move(rows));
    }
    auto prev = ideal_rows(rels, n - 1, opts);
    const auto& table = letter_bracket_table(k, n - 1);
    const std::size_t width_prev = lyndon_basis(k, n - 1)->size();
    const std::size_t width = lyndon_basis(k, n)->size();
    std::vector<DenseRow> rows(prev.size() * k);
    // Row (s, j) is ad(x_j) applied to the s-th row of the previous degree.
    parallel_for(rows.size(), opts.threads, [&](std::size_t idx) {
        const std::size_t s = idx / k, j = idx % k;
        DenseRow out(width);
        for (std::size_t w = 0; w < width_prev; ++w) {
            const mpz_class& c = prev[s][w];
            if (c == 0) continue;
            for (auto& [t, v] : table[j * width_prev + w]) out[t] += c * v;
        }
        rows[idx] = std::move(out);
    });
    return unique_rows(std::move(rows));
}

IntMatrix to_matrix(const std::vector<DenseRow>& rows, std::size_t width) {
    IntMatrix m(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) m(r, c) = rows[r][c];
    return m;
}

}  // namespace

IntMatrix ideal_matrix(const RelationSet& rels, std::size_t n, const HolonomyOptions& opts) {
    if (n < 2) throw InputError("ideal degree must be at least 2");
    if (rels.alphabet < 2) return IntMatrix(0, 0);
    check_holonomy_guard(rels.alphabet, n, opts);
    const std::size_t width = lyndon_basis(rels.alphabet, n)->size();
    if (rels.degree2.empty()) return IntMatrix(0, width);
    return to_matrix(ideal_rows(rels, n, opts), width);
}

GradedAbelian holonomy_graded(const RelationSet& rels, std::size_t n, const Ring& ring, const HolonomyOptions& opts) {
    if (n == 0) throw InputError("degree must be positive");
    const std::size_t k = rels.alphabet;
    if (k == 0) return {};
    if (n == 1) return {mpz_class(static_cast<unsigned long>(k)), {}};
    check_holonomy_guard(k, n, opts);
    const std::size_t width = lyndon_basis(k, n)->size();
    IntMatrix m = ideal_matrix(rels, n, opts);
    GradedAbelian g;
    if (ring.is_prime_field()) {
        g.rank = static_cast<unsigned long>(width - rank_mod_p(m, ring.modulus()));
        return g;
    }
    SmithForm snf = smith_normal_form(m);
    cross_check_smith(m, snf);
    g.rank = static_cast<unsigned long>(width - snf.rank);
    if (ring.is_integers()) g.torsion = snf.torsion();
    return g;
}

IntMatrix i2_inclusion(const Arrangement& arr) {
    const std::size_t k = arr.size();
    const std::size_t dim = k * (k - 1) / 2;
    std::vector<std::vector<mpz_class>> cols;
    for (auto& pencil : arr.pencils()) {
        const std::size_t y0 = pencil[0];
        for (std::size_t a = 1; a < pencil.size(); ++a)
            for (std::size_t b = a + 1; b < pencil.size(); ++b) {
                // boundary of e_{y0} e_{ya} e_{yb}
                std::vector<mpz_class> v(dim);
                v[wedge_index(pencil[a], pencil[b], k)] += 1;
                v[wedge_index(y0, pencil[b], k)] -= 1;
                v[wedge_index(y0, pencil[a], k)] += 1;
                cols.push_back(std::move(v));
            }
    }
    IntMatrix m(dim, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < dim; ++r) m(r, c) = cols[c][r];
    return m;
}

std::size_t falk_invariant(const Arrangement& arr) {
    const std::size_t k = arr.size();
    IntMatrix inc = i2_inclusion(arr);
    const std::size_t dim_i2 = inc.cols();
    if (dim_i2 == 0) return 0;
    std::unordered_map<std::uint64_t, std::size_t> triple;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            for (std::size_t c = b + 1; c < k; ++c) triple.emplace((a * k + b) * k + c, triple.size());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) pairs.emplace_back(a, b);

    IntMatrix m(k * dim_i2, triple.size());
    for (std::size_t h = 0; h < k; ++h)
        for (std::size_t col = 0; col < dim_i2; ++col) {
            const std::size_t row = h * dim_i2 + col;
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const mpz_class& c = inc(p, col);
                if (c == 0) continue;
                auto [i, j] = pairs[p];
                if (h == i || h == j) continue;
                // e_h e_i e_j with i < j, sorted with sign
                std::size_t s[3] = {h, i, j};
                int sign = 1;
                if (s[0] > s[1]) std::swap(s[0], s[1]), sign = -sign;
                if (s[1] > s[2]) std::swap(s[1], s[2]), sign = -sign;
                if (s[0] > s[1]) std::swap(s[0], s[1]), sign = -sign;
                m(row, triple.at((s[0] * k + s[1]) * k + s[2])) += sign * c;
            }
        }
    return k * dim_i2 - smith_normal_form(m).rank;
}

HolonomyAlgebra::HolonomyAlgebra(RelationSet rels, std::size_t top, const HolonomyOptions& opts)
    : rels_(std::move(rels)) {
    if (top == 0) throw InputError("truncation degree must be positive");
    const std::size_t k = rels_.alphabet;
    pieces_.emplace_back(IntMatrix(0, k), k);
    for (std::size_t d = 2; d <= top; ++d) {
        check_holonomy_guard(k, d, opts);
        const std::size_t width = lyndon_basis(k, d)->size();
        IntMatrix m = k < 2 ? IntMatrix(0, width) : ideal_matrix(rels_, d, opts);
        pieces_.emplace_back(m, width);
    }
}

GradedAbelian HolonomyAlgebra::graded(std::size_t d) const {
    const auto& q = piece(d);
    return {mpz_class(static_cast<unsigned long>(q.free_rank())), q.torsion()};
}

bool HolonomyAlgebra::torsion_free() const {
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](const LatticeQuotient& q) { return q.torsion_moduli().empty(); });
}

std::vector<mpz_class> HolonomyAlgebra::project(const LieElement& x) const {
    if (x.alphabet() != alphabet()) throw InputError("alphabet mismatch");
    return piece(x.degree()).project(x.dense());
}

LieElement HolonomyAlgebra::lift(std::size_t d, const std::vector<mpz_class>& coords) const {
    return LieElement::from_dense(alphabet(), d, piece(d).lift(coords));
}

}  // namespace arrlie
