#include "arrlie/free_lie.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace arrlie {

WordCode encode(const Word& w, std::size_t k) {
    WordCode c = 0;
    for (auto letter : w) c = c * k + letter;
    return c;
}

Word decode(WordCode code, std::size_t k, std::size_t n) {
    Word w(n);
    for (std::size_t i = n; i-- > 0;) {
        w[i] = static_cast<std::uint32_t>(code % k);
        code /= k;
    }
    return w;
}

bool is_lyndon(const Word& w) {
    const std::size_t n = w.size();
    if (n == 0) return false;
    std::size_t k = 0, j = 1;
    while (j < n && w[k] <= w[j]) {
        k = w[k] < w[j] ? 0 : k + 1;
        ++j;
    }
    return j == n && k == 0;
}

std::optional<std::size_t> LyndonBasis::index_of(WordCode code) const {
    auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it == codes.end() || *it != code) return std::nullopt;
    return static_cast<std::size_t>(it - codes.begin());
}

std::string LyndonBasis::label(std::size_t i) const {
    std::string out;
    auto w = word(i);
    for (std::size_t p = 0; p < w.size(); ++p) {
        if (alphabet > 9 && p > 0) out += '.';
        out += std::to_string(w[p] + 1);
    }
    return out;
}

namespace {

std::string bracketing_of(const Word& w) {
    if (w.size() == 1) return std::to_string(w[0] + 1);
    for (std::size_t s = 1; s < w.size(); ++s) {
        Word v(w.begin() + static_cast<long>(s), w.end());
        if (is_lyndon(v))
            return "[" + bracketing_of(Word(w.begin(), w.begin() + static_cast<long>(s))) + "," +
                   bracketing_of(v) + "]";
    }
    return "?";
}

std::vector<WordCode> generate_lyndon(std::size_t k, std::size_t n) {
    std::vector<WordCode> out;
    if (k == 0 || n == 0) return out;
    std::vector<long> w{-1};
    while (!w.empty()) {
        ++w.back();
        const std::size_t m = w.size();
        if (m == n) {
            WordCode c = 0;
            for (long l : w) c = c * k + static_cast<WordCode>(l);
            out.push_back(c);
        }
        while (w.size() < n) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == static_cast<long>(k) - 1) w.pop_back();
    }
    return out;
}

std::uint32_t standard_split(const Word& w) {
    for (std::size_t s = 1; s < w.size(); ++s)
        if (is_lyndon(Word(w.begin() + static_cast<long>(s), w.end()))) return static_cast<std::uint32_t>(s);
    return 0;
}

std::filesystem::path cache_file(std::size_t k, std::size_t n) {
    const char* dir = std::getenv("ARRLIE_CACHE");
    if (dir == nullptr || *dir == 0) return {};
    return std::filesystem::path(dir) / ("lyndon-" + std::to_string(k) + "-" + std::to_string(n) + ".txt");
}

bool load_cached(const std::filesystem::path& file, std::size_t k, std::size_t n, std::vector<WordCode>& codes) {
    std::ifstream in(file);
    if (!in) return false;
    std::vector<WordCode> read;
    WordCode c;
    while (in >> c) read.push_back(c);
    if (mpz_class(static_cast<unsigned long>(read.size())) != witt_rank(k, n)) return false;
    for (std::size_t i = 0; i < read.size(); ++i)
        if ((i > 0 && read[i] <= read[i - 1]) || !is_lyndon(decode(read[i], k, n))) return false;
    codes = std::move(read);
    return true;
}

void store_cached(const std::filesystem::path& file, const std::vector<WordCode>& codes) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    auto tmp = file;
    tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&codes));
    {
        std::ofstream out(tmp);
        if (!out) return;
        for (auto c : codes) out << c << '\n';
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

std::mutex basis_mutex;
std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const LyndonBasis>> basis_cache;

using Expansion = std::vector<std::pair<WordCode, long>>;
std::mutex expansion_mutex;
std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const std::vector<Expansion>>> expansion_cache;

std::mutex table_mutex;
std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const std::vector<SparseRow>>> table_cache;

WordCode power(std::size_t k, std::size_t n) {
    WordCode p = 1;
    for (std::size_t i = 0; i < n; ++i) p *= k;
    return p;
}

std::shared_ptr<const std::vector<Expansion>> expansions(std::size_t k, std::size_t n) {
    {
        std::lock_guard lock(expansion_mutex);
        auto it = expansion_cache.find({k, n});
        if (it != expansion_cache.end()) return it->second;
    }
    auto basis = lyndon_basis(k, n);
    auto table = std::make_shared<std::vector<Expansion>>(basis->size());
    for (std::size_t i = 0; i < basis->size(); ++i) {
        if (n == 1) {
            (*table)[i] = {{basis->codes[i], 1}};
            continue;
        }
        const std::size_t su = basis->split[i], sv = n - su;
        const WordCode code = basis->codes[i];
        const WordCode pv = power(k, sv), pu = power(k, su);
        const WordCode cu = code / pv, cv = code % pv;
        auto eu = expansions(k, su);
        auto ev = expansions(k, sv);
        const auto& xu = (*eu)[*lyndon_basis(k, su)->index_of(cu)];
        const auto& xv = (*ev)[*lyndon_basis(k, sv)->index_of(cv)];
        std::map<WordCode, long> acc;
        for (auto& [a, ca] : xu)
            for (auto& [b, cb] : xv) {
                acc[a * pv + b] += ca * cb;
                acc[b * pu + a] -= ca * cb;
            }
        Expansion e;
        for (auto& [c, v] : acc)
            if (v != 0) e.emplace_back(c, v);
        if (e.empty() || e.front().first != code || e.front().second != 1)
            throw std::logic_error("standard bracketing lost its leading word");
        (*table)[i] = std::move(e);
    }
    std::lock_guard lock(expansion_mutex);
    auto [it, inserted] = expansion_cache.emplace(std::make_pair(k, n), table);
    return it->second;
}

}  // namespace

std::string LyndonBasis::bracketing(std::size_t i) const {
    return bracketing_of(word(i));
}

std::shared_ptr<const LyndonBasis> lyndon_basis(std::size_t k, std::size_t n, double word_limit) {
    if (k == 0 || n == 0) throw InputError("alphabet size and degree must be positive");
    if (std::pow(static_cast<double>(k), static_cast<double>(n)) > word_limit)
        throw InputError("Lyndon basis for alphabet " + std::to_string(k) + " in degree " +
                         std::to_string(n) + " exceeds the size guard (" + std::to_string(k) + "^" +
                         std::to_string(n) + " words); lower the degree or raise --guard");
    {
        std::lock_guard lock(basis_mutex);
        auto it = basis_cache.find({k, n});
        if (it != basis_cache.end()) return it->second;
    }
    auto basis = std::make_shared<LyndonBasis>();
    basis->alphabet = k;
    basis->degree = n;
    auto file = cache_file(k, n);
    if (file.empty() || !load_cached(file, k, n, basis->codes)) {
        basis->codes = generate_lyndon(k, n);
        if (!file.empty()) store_cached(file, basis->codes);
    }
    basis->split.reserve(basis->codes.size());
    for (auto c : basis->codes) basis->split.push_back(n == 1 ? 0 : standard_split(decode(c, k, n)));
    std::lock_guard lock(basis_mutex);
    auto [it, inserted] = basis_cache.emplace(std::make_pair(k, n), basis);
    return it->second;
}

mpz_class witt_rank(std::size_t k, std::size_t n) {
    if (k == 0 || n == 0) throw InputError("alphabet size and degree must be positive");
    mpz_class sum = 0;
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        int mu = moebius(d);
        if (mu == 0) continue;
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), k, n / d);
        sum += mu * p;
    }
    return sum / static_cast<unsigned long>(n);
}

const std::vector<std::pair<WordCode, long>>& lie_expansion(std::size_t k, std::size_t n, std::size_t i) {
    return expansions(k, n)->at(i);
}

std::map<std::size_t, mpq_class> to_lyndon(std::size_t k, std::size_t n, AssocPoly poly) {
    auto basis = lyndon_basis(k, n);
    auto table = expansions(k, n);
    std::map<std::size_t, mpq_class> out;
    while (!poly.empty()) {
        auto it = poly.begin();
        if (it->second == 0) {
            poly.erase(it);
            continue;
        }
        auto idx = basis->index_of(it->first);
        if (!idx) throw std::logic_error("polynomial is not a Lie element");
        mpq_class c = it->second;
        out[*idx] = c;
        for (auto& [code, v] : (*table)[*idx]) {
            auto& slot = poly[code];
            slot -= c * v;
            if (slot == 0) poly.erase(code);
        }
    }
    return out;
}

LieElement::LieElement(std::size_t alphabet, std::size_t degree, Ring ring)
    : alphabet_(alphabet), degree_(degree), ring_(ring) {
    if (alphabet == 0 || degree == 0) throw InputError("alphabet size and degree must be positive");
}

LieElement LieElement::generator(std::size_t alphabet, std::size_t letter, Ring ring) {
    if (letter >= alphabet) throw InputError("generator index out of range");
    LieElement e(alphabet, 1, ring);
    e.add_term(letter, 1);
    return e;
}

LieElement LieElement::basis_element(std::size_t alphabet, std::size_t degree, std::size_t index, Ring ring) {
    if (index >= lyndon_basis(alphabet, degree)->size()) throw InputError("basis index out of range");
    LieElement e(alphabet, degree, ring);
    e.add_term(index, 1);
    return e;
}

mpq_class LieElement::coeff(std::size_t index) const {
    auto it = coeffs_.find(index);
    return it == coeffs_.end() ? mpq_class(0) : it->second;
}

void LieElement::add_term(std::size_t index, const mpq_class& c) {
    mpq_class v = ring_.normalize(coeff(index) + c);
    if (v == 0)
        coeffs_.erase(index);
    else
        coeffs_[index] = v;
}

void LieElement::check_compatible(const LieElement& other) const {
    if (!(ring_ == other.ring_))
        throw InputError("ring mismatch: " + ring_.name() + " vs " + other.ring_.name());
    if (alphabet_ != other.alphabet_) throw InputError("alphabet mismatch");
}

LieElement LieElement::operator+(const LieElement& other) const {
    check_compatible(other);
    if (degree_ != other.degree_) throw InputError("cannot add Lie elements of different degrees");
    LieElement out = *this;
    for (auto& [i, c] : other.coeffs_) out.add_term(i, c);
    return out;
}

LieElement LieElement::operator-(const LieElement& other) const {
    return *this + (-other);
}

LieElement LieElement::operator-() const {
    return scaled(-1);
}

LieElement LieElement::scaled(const mpq_class& c) const {
    LieElement out(alphabet_, degree_, ring_);
    for (auto& [i, v] : coeffs_) out.add_term(i, v * c);
    return out;
}

bool LieElement::operator==(const LieElement& other) const {
    return alphabet_ == other.alphabet_ && degree_ == other.degree_ && ring_ == other.ring_ &&
           coeffs_ == other.coeffs_;
}

std::vector<mpz_class> LieElement::dense() const {
    std::vector<mpz_class> out(lyndon_basis(alphabet_, degree_)->size());
    for (auto& [i, c] : coeffs_) {
        if (c.get_den() != 1) throw InputError("non-integral Lie coefficient");
        out[i] = c.get_num();
    }
    return out;
}

LieElement LieElement::from_dense(std::size_t alphabet, std::size_t degree, const std::vector<mpz_class>& coords,
                                  Ring ring) {
    LieElement e(alphabet, degree, ring);
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i] != 0) e.add_term(i, mpq_class(coords[i]));
    return e;
}

AssocPoly LieElement::expand() const {
    AssocPoly out;
    auto table = expansions(alphabet_, degree_);
    for (auto& [i, c] : coeffs_)
        for (auto& [code, v] : (*table)[i]) out[code] += c * v;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

std::string LieElement::to_string() const {
    if (coeffs_.empty()) return "0";
    auto basis = lyndon_basis(alphabet_, degree_);
    std::ostringstream os;
    bool first = true;
    for (auto& [i, c] : coeffs_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        mpq_class a = abs(c);
        if (a != 1) os << a.get_str() << "*";
        os << basis->bracketing(i);
    }
    return os.str();
}

LieElement bracket(const LieElement& a, const LieElement& b) {
    if (!(a.ring() == b.ring())) throw InputError("ring mismatch: " + a.ring().name() + " vs " + b.ring().name());
    if (a.alphabet() != b.alphabet()) throw InputError("alphabet mismatch");
    const std::size_t k = a.alphabet(), n = a.degree() + b.degree();
    LieElement out(k, n, a.ring());
    if (a.is_zero() || b.is_zero()) return out;
    lyndon_basis(k, n);  // size guard
    AssocPoly ea = a.expand(), eb = b.expand();
    const WordCode pa = power(k, a.degree()), pb = power(k, b.degree());
    AssocPoly prod;
    for (auto& [u, cu] : ea)
        for (auto& [v, cv] : eb) {
            mpq_class t = cu * cv;
            prod[u * pb + v] += t;
            prod[v * pa + u] -= t;
        }
    for (auto& [i, c] : to_lyndon(k, n, std::move(prod))) out.add_term(i, c);
    return out;
}

LieElement relabel(const LieElement& a, const std::vector<std::size_t>& map, std::size_t k) {
    if (map.size() != a.alphabet()) throw InputError("relabel map has wrong length");
    for (auto m : map)
        if (m >= k && m != kDropLetter) throw InputError("relabel target out of range");
    AssocPoly poly;
    for (auto& [code, c] : a.expand()) {
        Word w = decode(code, a.alphabet(), a.degree());
        bool dropped = false;
        for (auto& l : w) {
            if (map[l] == kDropLetter) dropped = true;
            l = static_cast<std::uint32_t>(map[l]);
        }
        if (!dropped) poly[encode(w, k)] += c;
    }
    LieElement out(k, a.degree(), a.ring());
    for (auto& [i, c] : to_lyndon(k, a.degree(), std::move(poly))) out.add_term(i, c);
    return out;
}

const std::vector<SparseRow>& letter_bracket_table(std::size_t k, std::size_t n) {
    {
        std::lock_guard lock(table_mutex);
        auto it = table_cache.find({k, n});
        if (it != table_cache.end()) return *it->second;
    }
    auto basis = lyndon_basis(k, n);
    lyndon_basis(k, n + 1);
    auto table = std::make_shared<std::vector<SparseRow>>(k * basis->size());
    const WordCode pn = power(k, n);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t w = 0; w < basis->size(); ++w) {
            AssocPoly prod;
            for (auto& [code, v] : lie_expansion(k, n, w)) {
                prod[j * pn + code] += v;
                prod[code * k + j] -= v;
            }
            SparseRow row;
            for (auto& [i, c] : to_lyndon(k, n + 1, std::move(prod))) row.emplace_back(i, c.get_num());
            (*table)[j * basis->size() + w] = std::move(row);
        }
    std::lock_guard lock(table_mutex);
    auto [it, inserted] = table_cache.emplace(std::make_pair(k, n), table);
    return *it->second;
}

}  // namespace arrlie
