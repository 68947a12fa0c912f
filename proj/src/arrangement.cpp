#include "arrlie/arrangement.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace arrlie {

namespace {

std::string atom_label(const std::vector<std::string>& names, std::size_t i) {
    if (i < names.size()) return "'" + names[i] + "'";
    return "#" + std::to_string(i);
}

// Row-reduces in place and returns the rank.
std::size_t reduce_rank(std::vector<RationalVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            mpq_class f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::size_t rational_rank(const std::vector<RationalVector>& vectors) {
    return reduce_rank(vectors);
}

std::vector<Pencil> pencils_from_normals(const std::vector<RationalVector>& normals,
                                         const std::vector<std::string>& names) {
    const std::size_t n = normals.size();
    if (n == 0) return {};
    const std::size_t dim = normals[0].size();
    if (dim < 2) throw InputError("normals must have dimension at least 2");
    for (std::size_t i = 0; i < n; ++i) {
        if (normals[i].size() != dim)
            throw InputError("normal of atom " + atom_label(names, i) + " has dimension " +
                             std::to_string(normals[i].size()) + ", expected " + std::to_string(dim));
        if (std::all_of(normals[i].begin(), normals[i].end(), [](const mpq_class& x) { return x == 0; }))
            throw InputError("normal of atom " + atom_label(names, i) + " is zero");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (reduce_rank({normals[i], normals[j]}) < 2)
                throw InputError("atoms " + atom_label(names, i) + " and " + atom_label(names, j) +
                                 " have proportional normals");

    std::vector<Pencil> out;
    std::vector<char> covered(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (covered[i * n + j]) continue;
            Pencil p{i, j};
            for (std::size_t k = 0; k < n; ++k)
                if (k != i && k != j && reduce_rank({normals[i], normals[j], normals[k]}) == 2)
                    p.push_back(k);
            std::sort(p.begin(), p.end());
            for (std::size_t a : p)
                for (std::size_t b : p) covered[a * n + b] = 1;
            out.push_back(std::move(p));
        }
    std::sort(out.begin(), out.end());
    return out;
}

Arrangement::Arrangement(std::vector<std::string> atoms, std::optional<std::vector<RationalVector>> normals,
                         std::optional<std::vector<Pencil>> pencils)
    : atoms_(std::move(atoms)), normals_(std::move(normals)) {
    if (!normals_ && !pencils) throw InputError("arrangement needs normals or pencils");
    std::set<std::string> seen;
    for (auto& a : atoms_) {
        if (a.empty()) throw InputError("empty atom name");
        if (!seen.insert(a).second) throw InputError("duplicate atom name '" + a + "'");
    }
    if (normals_ && normals_->size() != atoms_.size())
        throw InputError("got " + std::to_string(normals_->size()) + " normals for " +
                         std::to_string(atoms_.size()) + " atoms");

    if (pencils) {
        for (std::size_t p = 0; p < pencils->size(); ++p) {
            auto& pen = (*pencils)[p];
            std::sort(pen.begin(), pen.end());
            if (pen.size() < 2)
                throw InputError("pencil " + std::to_string(p) + " has fewer than 2 atoms");
            if (std::adjacent_find(pen.begin(), pen.end()) != pen.end())
                throw InputError("pencil " + std::to_string(p) + " repeats an atom");
            if (pen.back() >= atoms_.size())
                throw InputError("pencil " + std::to_string(p) + " refers to atom index " +
                                 std::to_string(pen.back()) + " but there are only " +
                                 std::to_string(atoms_.size()) + " atoms");
        }
        pencils_ = std::move(*pencils);
        std::sort(pencils_.begin(), pencils_.end());
    }
    if (normals_) {
        auto derived = pencils_from_normals(*normals_, atoms_);
        if (pencils && derived != pencils_)
            throw InputError("pencils do not match the pencils derived from the normals");
        pencils_ = std::move(derived);
    }
    build_pair_table();
}

void Arrangement::build_pair_table() {
    const std::size_t n = atoms_.size();
    const std::size_t none = static_cast<std::size_t>(-1);
    pair_pencil_.assign(n * n, none);
    for (std::size_t p = 0; p < pencils_.size(); ++p)
        for (std::size_t a : pencils_[p])
            for (std::size_t b : pencils_[p]) {
                if (a == b) continue;
                if (pair_pencil_[a * n + b] != none)
                    throw InputError("atoms " + atoms_[a] + " and " + atoms_[b] +
                                     " lie in more than one pencil");
                pair_pencil_[a * n + b] = p;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (pair_pencil_[a * n + b] == none)
                throw InputError("atoms " + atoms_[a] + " and " + atoms_[b] + " lie in no pencil");
}

Arrangement Arrangement::from_pencils(std::vector<std::string> atoms, std::vector<Pencil> pencils) {
    return Arrangement(std::move(atoms), std::nullopt, std::move(pencils));
}

Arrangement Arrangement::from_normals(std::vector<std::string> atoms, std::vector<RationalVector> normals) {
    return Arrangement(std::move(atoms), std::move(normals), std::nullopt);
}

std::optional<std::size_t> Arrangement::atom_index(const std::string& name) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), name);
    if (it == atoms_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - atoms_.begin());
}

std::vector<Flat2> mobius_l2(const Arrangement& arr) {
    std::vector<Flat2> out;
    out.reserve(arr.pencils().size());
    for (std::size_t p = 0; p < arr.pencils().size(); ++p) {
        const auto& members = arr.pencils()[p];
        // mu(top) = 1, mu(H) = -1 for each atom above Y.
        long mu = -(1 - static_cast<long>(members.size()));
        out.push_back({p, members, mu});
    }
    return out;
}

BettiData betti(const Arrangement& arr) {
    BettiData b;
    b.b1 = arr.size();
    for (auto& f : mobius_l2(arr)) b.b2 += static_cast<std::size_t>(f.mu);
    return b;
}

Arrangement localize(const Arrangement& arr, std::size_t pencil_index) {
    if (pencil_index >= arr.pencils().size())
        throw InputError("unknown flat index " + std::to_string(pencil_index));
    const auto& members = arr.pencils()[pencil_index];
    std::vector<std::string> atoms;
    for (auto m : members) atoms.push_back(arr.atoms()[m]);
    Pencil all(members.size());
    std::iota(all.begin(), all.end(), 0);
    std::optional<std::vector<RationalVector>> normals;
    if (arr.normals()) {
        normals.emplace();
        for (auto m : members) normals->push_back((*arr.normals())[m]);
    }
    return Arrangement(std::move(atoms), std::move(normals), std::vector<Pencil>{all});
}

Arrangement permute_atoms(const Arrangement& arr, const std::vector<std::size_t>& perm) {
    const std::size_t n = arr.size();
    if (perm.size() != n) throw InputError("permutation length mismatch");
    std::vector<std::string> atoms(n);
    std::vector<char> hit(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || hit[perm[i]]) throw InputError("not a permutation");
        hit[perm[i]] = 1;
        atoms[perm[i]] = arr.atoms()[i];
    }
    std::vector<Pencil> pencils;
    for (auto& p : arr.pencils()) {
        Pencil q;
        for (auto a : p) q.push_back(perm[a]);
        pencils.push_back(std::move(q));
    }
    std::optional<std::vector<RationalVector>> normals;
    if (arr.normals()) {
        normals.emplace(n);
        for (std::size_t i = 0; i < n; ++i) (*normals)[perm[i]] = (*arr.normals())[i];
    }
    return Arrangement(std::move(atoms), std::move(normals), std::move(pencils));
}

namespace catalog {

namespace {
std::vector<std::string> numbered(std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back("H" + std::to_string(i));
    return out;
}
}  // namespace

Arrangement braid(std::size_t n) {
    if (n < 2) throw InputError("braid(n) needs n >= 2");
    std::vector<std::string> atoms;
    std::vector<RationalVector> normals;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            atoms.push_back(n < 10 ? "H" + std::to_string(i) + std::to_string(j)
                                   : "H" + std::to_string(i) + "_" + std::to_string(j));
            RationalVector v(n, 0);
            v[i - 1] = 1;
            v[j - 1] = -1;
            normals.push_back(std::move(v));
        }
    return Arrangement::from_normals(std::move(atoms), std::move(normals));
}

Arrangement pencil(std::size_t k) {
    if (k < 2) throw InputError("pencil(k) needs k >= 2");
    Pencil all(k);
    std::iota(all.begin(), all.end(), 0);
    return Arrangement::from_pencils(numbered(k), {all});
}

Arrangement generic(std::size_t k) {
    if (k < 1) throw InputError("generic(k) needs k >= 1");
    std::vector<Pencil> pencils;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) pencils.push_back({i, j});
    return Arrangement::from_pencils(numbered(k), std::move(pencils));
}

Arrangement near_pencil(std::size_t k) {
    if (k < 3) throw InputError("near_pencil(k) needs k >= 3");
    Pencil big(k - 1);
    std::iota(big.begin(), big.end(), 0);
    std::vector<Pencil> pencils{big};
    for (std::size_t i = 0; i + 1 < k; ++i) pencils.push_back({i, k - 1});
    return Arrangement::from_pencils(numbered(k), std::move(pencils));
}

Arrangement by_name(const std::string& name, std::size_t param) {
    if (name == "braid") return braid(param);
    if (name == "pencil") return pencil(param);
    if (name == "generic") return generic(param);
    if (name == "near_pencil") return near_pencil(param);
    throw InputError("unknown catalog entry '" + name + "' (braid, pencil, generic, near_pencil)");
}

}  // namespace catalog

}  // namespace arrlie
