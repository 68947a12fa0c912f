#include "arrlie/matrix.hpp"

#include "arrlie/kernels.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace arrlie {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

std::vector<mpz_class> IntMatrix::column(std::size_t c) const {
    std::vector<mpz_class> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw InputError("matrix shape mismatch: " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " times " + std::to_string(rhs.rows_) + "x" +
                         std::to_string(rhs.cols_));
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const mpz_class& a = (*this)(r, k);
            if (a == 0) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c)
                if (rhs(k, c) != 0) out(r, c) += a * rhs(k, c);
        }
    return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix shape mismatch in sum");
    IntMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw InputError("matrix shape mismatch in difference");
    IntMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

IntMatrix IntMatrix::reduced(const Ring& ring) const {
    if (!ring.is_prime_field()) return *this;
    IntMatrix out = *this;
    for (auto& x : out.data_) x = ring.reduce(x);
    return out;
}

void IntMatrix::append_row(std::span<const mpz_class> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    IntMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& b) {
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const mpz_class& x) { return x == 0; });
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        os << '[';
        for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c).get_str();
        os << "]\n";
    }
    return os.str();
}

namespace {

struct Overflow {};

template <class T>
struct Arith;

template <>
struct Arith<std::int64_t> {
    static std::int64_t from(const mpz_class& x) {
        if (!x.fits_slong_p()) throw Overflow{};
        return x.get_si();
    }
    static mpz_class to_mpz(std::int64_t x) { return mpz_class(static_cast<long>(x)); }
    static bool zero(std::int64_t x) { return x == 0; }
    static bool unit(std::int64_t x) { return x == 1 || x == -1; }
    static bool abs_less(std::int64_t a, std::int64_t b) {
        // Magnitudes never reach INT64_MIN: every result goes through the checked ops below.
        return (a < 0 ? -a : a) < (b < 0 ? -b : b);
    }
    static std::int64_t quot(std::int64_t a, std::int64_t b) {
        if (b == -1 && a == INT64_MIN) throw Overflow{};
        return a / b;
    }
    // a -= q * b
    static void submul(std::int64_t& a, std::int64_t q, std::int64_t b) {
        std::int64_t t;
        if (__builtin_mul_overflow(q, b, &t) || __builtin_sub_overflow(a, t, &a) || a == INT64_MIN)
            throw Overflow{};
    }
    static void addmul(std::int64_t& a, std::int64_t q, std::int64_t b) {
        std::int64_t t;
        if (__builtin_mul_overflow(q, b, &t) || __builtin_add_overflow(a, t, &a) || a == INT64_MIN)
            throw Overflow{};
    }
    static std::int64_t negate(std::int64_t a) { return -a; }
};

template <>
struct Arith<mpz_class> {
    static mpz_class from(const mpz_class& x) { return x; }
    static mpz_class to_mpz(const mpz_class& x) { return x; }
    static bool zero(const mpz_class& x) { return x == 0; }
    static bool unit(const mpz_class& x) { return x == 1 || x == -1; }
    static bool abs_less(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
    static mpz_class quot(const mpz_class& a, const mpz_class& b) {
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
    static void submul(mpz_class& a, const mpz_class& q, const mpz_class& b) {
        mpz_submul(a.get_mpz_t(), q.get_mpz_t(), b.get_mpz_t());
    }
    static void addmul(mpz_class& a, const mpz_class& q, const mpz_class& b) {
        mpz_addmul(a.get_mpz_t(), q.get_mpz_t(), b.get_mpz_t());
    }
    static mpz_class negate(const mpz_class& a) { return -a; }
};

template <class T>
class SmithEngine {
    using A = Arith<T>;

public:
    SmithEngine(const IntMatrix& m, bool track)
        : rows_(m.rows()), cols_(m.cols()), track_(track), a_(rows_ * cols_) {
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) a_[r * cols_ + c] = A::from(m(r, c));
        if (track_) {
            v_.assign(cols_ * cols_, T(0));
            vinv_.assign(cols_ * cols_, T(0));
            for (std::size_t i = 0; i < cols_; ++i) v_[i * cols_ + i] = vinv_[i * cols_ + i] = T(1);
        }
    }

    SmithForm run() {
        SmithForm out;
        std::size_t t = 0;
        const std::size_t limit = std::min(rows_, cols_);
        for (; t < limit; ++t) {
            if (!choose_pivot(t)) break;
            clear_cross(t);
            T d = at(t, t);
            out.diagonal.push_back(A::to_mpz(d < T(0) ? A::negate(d) : d));
        }
        out.rank = out.diagonal.size();
        if (track_) {
            IntMatrix v(cols_, cols_), vinv(cols_, cols_);
            for (std::size_t r = 0; r < cols_; ++r)
                for (std::size_t c = 0; c < cols_; ++c) {
                    v(r, c) = A::to_mpz(v_[r * cols_ + c]);
                    vinv(r, c) = A::to_mpz(vinv_[r * cols_ + c]);
                }
            // Make diagonal entries positive by flipping the sign of the pivot columns.
            for (std::size_t i = 0; i < out.rank; ++i) {
                if (sign_[i] > 0) continue;
                for (std::size_t r = 0; r < cols_; ++r) v(r, i) = -v(r, i);
                for (std::size_t c = 0; c < cols_; ++c) vinv(i, c) = -vinv(i, c);
            }
            out.col_transform = std::move(v);
            out.col_transform_inv = std::move(vinv);
        }
        return out;
    }

private:
    T& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

    bool choose_pivot(std::size_t t) {
        std::size_t br = rows_, bc = cols_;
        for (std::size_t c = t; c < cols_; ++c) {
            for (std::size_t r = t; r < rows_; ++r) {
                const T& x = at(r, c);
                if (A::zero(x)) continue;
                if (br == rows_ || A::abs_less(x, at(br, bc))) {
                    br = r;
                    bc = c;
                    if (A::unit(x)) goto found;
                }
            }
        }
        if (br == rows_) return false;
    found:
        swap_rows(t, br);
        swap_cols(t, bc);
        return true;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap_ranges(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_, a_.begin() + j * cols_);
    }

    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
        if (track_) {
            for (std::size_t r = 0; r < cols_; ++r) std::swap(v_[r * cols_ + i], v_[r * cols_ + j]);
            std::swap_ranges(vinv_.begin() + i * cols_, vinv_.begin() + (i + 1) * cols_,
                             vinv_.begin() + j * cols_);
        }
    }

    // row i -= q * row t (only columns >= t can be nonzero in row t)
    void row_submul(std::size_t i, const T& q, std::size_t t) {
        for (std::size_t c = t; c < cols_; ++c)
            if (!A::zero(at(t, c))) A::submul(at(i, c), q, at(t, c));
    }

    // col j -= q * col t, with V tracking
    void col_submul(std::size_t j, const T& q, std::size_t t) {
        for (std::size_t r = t; r < rows_; ++r)
            if (!A::zero(at(r, t))) A::submul(at(r, j), q, at(r, t));
        if (track_) {
            for (std::size_t r = 0; r < cols_; ++r)
                if (!A::zero(v_[r * cols_ + t])) A::submul(v_[r * cols_ + j], q, v_[r * cols_ + t]);
            for (std::size_t c = 0; c < cols_; ++c)
                if (!A::zero(vinv_[j * cols_ + c]))
                    A::addmul(vinv_[t * cols_ + c], q, vinv_[j * cols_ + c]);
        }
    }

    // Clear row t and column t outside the pivot, moving smaller remainders into the pivot.
    void clear_cross(std::size_t t) {
        for (;;) {
            bool restart = false;
            for (std::size_t r = t + 1; r < rows_ && !restart; ++r) {
                if (A::zero(at(r, t))) continue;
                T q = A::quot(at(r, t), at(t, t));
                row_submul(r, q, t);
                if (!A::zero(at(r, t))) {
                    swap_rows(t, r);
                    restart = true;
                }
            }
            if (restart) continue;
            for (std::size_t c = t + 1; c < cols_ && !restart; ++c) {
                if (A::zero(at(t, c))) continue;
                T q = A::quot(at(t, c), at(t, t));
                col_submul(c, q, t);
                if (!A::zero(at(t, c))) {
                    swap_cols(t, c);
                    restart = true;
                }
            }
            if (!restart) break;
        }
        sign_.push_back(at(t, t) < T(0) ? -1 : 1);
    }

    std::size_t rows_, cols_;
    bool track_;
    std::vector<T> a_;
    std::vector<T> v_, vinv_;
    std::vector<int> sign_;
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a, bool with_transforms) {
    try {
        return SmithEngine<std::int64_t>(a, with_transforms).run();
    } catch (const Overflow&) {
        return SmithEngine<mpz_class>(a, with_transforms).run();
    }
}

std::vector<mpz_class> divisibility_chain(std::vector<mpz_class> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            mpz_class g, l;
            mpz_gcd(g.get_mpz_t(), values[i].get_mpz_t(), values[j].get_mpz_t());
            mpz_lcm(l.get_mpz_t(), values[i].get_mpz_t(), values[j].get_mpz_t());
            values[i] = g;
            values[j] = l;
        }
    return values;
}

std::vector<mpz_class> SmithForm::invariant_factors() const {
    return divisibility_chain(diagonal);
}

std::vector<mpz_class> SmithForm::torsion() const {
    std::vector<mpz_class> out;
    for (auto& d : invariant_factors())
        if (d > 1) out.push_back(d);
    return out;
}

std::vector<mpz_class> LatticeQuotient::torsion() const {
    std::vector<mpz_class> out;
    for (auto& d : divisibility_chain(moduli_))
        if (d > 1) out.push_back(d);
    return out;
}

std::size_t rank_mod_p(const IntMatrix& a, std::uint32_t p) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0 || n == 0) return 0;
    const auto& k = kernels::active();
    std::vector<std::uint32_t> w(m * n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            mpz_class x;
            mpz_fdiv_r_ui(x.get_mpz_t(), a(r, c).get_mpz_t(), p);
            w[r * n + c] = static_cast<std::uint32_t>(x.get_ui());
        }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t piv = rank;
        while (piv < m && w[piv * n + c] == 0) ++piv;
        if (piv == m) continue;
        if (piv != rank)
            std::swap_ranges(w.begin() + piv * n, w.begin() + (piv + 1) * n, w.begin() + rank * n);
        std::uint32_t* prow = w.data() + rank * n;
        mpz_class inv, pv = prow[c], pm = p;
        mpz_invert(inv.get_mpz_t(), pv.get_mpz_t(), pm.get_mpz_t());
        k.scale(prow + c, n - c, static_cast<std::uint32_t>(inv.get_ui()), p);
        for (std::size_t r = rank + 1; r < m; ++r) {
            std::uint32_t* row = w.data() + r * n;
            if (row[c] == 0) continue;
            k.axpy(row + c, prow + c, n - c, p - row[c], p);
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_over(const IntMatrix& a, const Ring& ring) {
    if (ring.is_prime_field()) return rank_mod_p(a, ring.modulus());
    return smith_normal_form(a).rank;
}

std::span<const std::uint32_t> cross_check_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::mt19937_64 gen(0x5eed0f1a7715ULL);
        std::uniform_int_distribution<std::uint32_t> dist(1u << 30, (1u << 31) - 1);
        std::vector<std::uint32_t> out;
        while (out.size() < 2) {
            std::uint32_t c = dist(gen) | 1u;
            if (is_prime(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
        return out;
    }();
    return primes;
}

void cross_check_smith(const IntMatrix& a, const SmithForm& snf) {
    for (std::uint32_t p : cross_check_primes()) {
        std::size_t expected = 0;
        for (auto& d : snf.diagonal)
            if (mpz_divisible_ui_p(d.get_mpz_t(), p) == 0) ++expected;
        if (rank_mod_p(a, p) != expected)
            throw std::logic_error("Smith form disagrees with rank mod " + std::to_string(p));
    }
}

std::optional<std::vector<mpq_class>> solve_rational(const IntMatrix& b, std::span<const mpz_class> v) {
    const std::size_t m = b.rows(), n = b.cols();
    if (v.size() != m) throw InputError("right-hand side length mismatch");
    std::vector<std::vector<mpq_class>> aug(m, std::vector<mpq_class>(n + 1));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = b(r, c);
        aug[r][n] = v[r];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t p = row;
        while (p < m && aug[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(aug[p], aug[row]);
        mpq_class inv = 1 / aug[row][c];
        for (std::size_t k = c; k <= n; ++k) aug[row][k] *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || aug[r][c] == 0) continue;
            mpq_class f = aug[r][c];
            for (std::size_t k = c; k <= n; ++k) aug[r][k] -= f * aug[row][k];
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (std::size_t r = row; r < m; ++r)
        if (aug[r][n] != 0) return std::nullopt;
    std::vector<mpq_class> x(n);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = aug[i][n];
    return x;
}

std::optional<std::vector<mpz_class>> solve_integer(const IntMatrix& b, std::span<const mpz_class> v) {
    auto q = solve_rational(b, v);
    if (!q) return std::nullopt;
    std::vector<mpz_class> out;
    out.reserve(q->size());
    for (auto& x : *q) {
        if (x.get_den() != 1) return std::nullopt;
        out.push_back(x.get_num());
    }
    return out;
}

LatticeQuotient::LatticeQuotient(const IntMatrix& relations, std::size_t ambient_dim)
    : ambient_(ambient_dim) {
    if (!relations.empty() && relations.cols() != ambient_dim)
        throw InputError("relation matrix width does not match ambient dimension");
    if (relations.rows() == 0 || ambient_dim == 0) {
        v_ = v_inv_ = IntMatrix::identity(ambient_dim);
        free_rank_ = ambient_dim;
        return;
    }
    SmithForm snf = smith_normal_form(relations, true);
    cross_check_smith(relations, snf);
    rank_ = snf.rank;
    free_rank_ = ambient_dim - rank_;
    for (std::size_t i = 0; i < rank_; ++i)
        if (snf.diagonal[i] > 1) {
            torsion_index_.push_back(i);
            moduli_.push_back(snf.diagonal[i]);
        }
    v_ = std::move(*snf.col_transform);
    v_inv_ = std::move(*snf.col_transform_inv);
}

std::vector<mpz_class> LatticeQuotient::project(std::span<const mpz_class> x) const {
    if (x.size() != ambient_) throw InputError("vector length does not match ambient dimension");
    auto coord = [&](std::size_t j) {
        mpz_class s = 0;
        for (std::size_t i = 0; i < ambient_; ++i)
            if (x[i] != 0) s += x[i] * v_(i, j);
        return s;
    };
    std::vector<mpz_class> out;
    out.reserve(coordinate_count());
    for (std::size_t j = rank_; j < ambient_; ++j) out.push_back(coord(j));
    for (std::size_t k = 0; k < torsion_index_.size(); ++k) {
        mpz_class y = coord(torsion_index_[k]);
        mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), moduli_[k].get_mpz_t());
        out.push_back(y);
    }
    return out;
}

std::vector<mpz_class> LatticeQuotient::lift(std::size_t k) const {
    std::size_t row = k < free_rank_ ? rank_ + k : torsion_index_.at(k - free_rank_);
    auto r = v_inv_.row(row);
    return {r.begin(), r.end()};
}

std::vector<mpz_class> LatticeQuotient::lift(std::span<const mpz_class> coords) const {
    if (coords.size() != coordinate_count()) throw InputError("quotient coordinate length mismatch");
    std::vector<mpz_class> out(ambient_);
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] == 0) continue;
        auto l = lift(k);
        for (std::size_t i = 0; i < ambient_; ++i) out[i] += coords[k] * l[i];
    }
    return out;
}

IntMatrix LatticeQuotient::projection_matrix() const {
    IntMatrix p(coordinate_count(), ambient_);
    std::vector<mpz_class> e(ambient_);
    for (std::size_t i = 0; i < ambient_; ++i) {
        e[i] = 1;
        auto y = project(e);
        for (std::size_t k = 0; k < y.size(); ++k) p(k, i) = y[k];
        e[i] = 0;
    }
    return p;
}

}  // namespace arrlie
