#include "arrlie/decomposability.hpp"

#include <algorithm>
#include <set>

namespace arrlie {

std::string to_string(DecompVerdict v) {
    switch (v) {
    case DecompVerdict::Decomposable: return "decomposable";
    case DecompVerdict::NotDecomposable: return "not decomposable";
    case DecompVerdict::IndeterminateOverZ: return "indeterminate over Z, decomposable over Q";
    }
    return "?";
}

DecompReport is_decomposable(const Arrangement& arr, const HolonomyOptions& opts) {
    DecompReport rep;
    auto h3 = holonomy_graded(relation_set(arr), 3, Ring::integers(), opts);
    rep.r_global = h3.rank;
    rep.torsion = h3.torsion;
    for (auto& f : mobius_l2(arr)) rep.r_local += witt_rank(static_cast<std::size_t>(f.mu), 3);
    if (rep.r_global != rep.r_local)
        rep.verdict = DecompVerdict::NotDecomposable;
    else if (!rep.torsion.empty())
        rep.verdict = DecompVerdict::IndeterminateOverZ;
    else
        rep.verdict = DecompVerdict::Decomposable;
    return rep;
}

std::vector<mpz_class> lcs_product_formula(const Arrangement& arr, std::size_t max_degree) {
    auto flats = mobius_l2(arr);
    mpz_class a = static_cast<unsigned long>(arr.size());
    for (auto& f : flats) a -= f.mu;
    // m * phi_m = sum_{d | m} moebius(m/d) * (a + sum_Y mu_Y^d)
    std::vector<mpz_class> out;
    for (std::size_t m = 1; m <= max_degree; ++m) {
        mpz_class sum = 0;
        for (std::size_t d = 1; d <= m; ++d) {
            if (m % d != 0) continue;
            int mu = moebius(m / d);
            if (mu == 0) continue;
            mpz_class c = a;
            for (auto& f : flats) {
                mpz_class p;
                mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(f.mu), d);
                c += p;
            }
            sum += mu * c;
        }
        out.push_back(sum / static_cast<unsigned long>(m));
    }
    return out;
}

std::vector<mpz_class> lcs_ranks_decomposable(const Arrangement& arr, std::size_t max_degree,
                                              const HolonomyOptions& opts) {
    if (max_degree == 0) throw InputError("max degree must be positive");
    auto rep = is_decomposable(arr, opts);
    if (rep.verdict != DecompVerdict::Decomposable)
        throw InputError("the product formula for LCS ranks needs a decomposable arrangement; this one is " +
                         to_string(rep.verdict));
    return lcs_product_formula(arr, max_degree);
}

namespace {

std::vector<mpz_class> relation_wedge(const Arrangement& arr, std::size_t flat, std::size_t h) {
    const std::size_t k = arr.size();
    std::vector<mpz_class> v(k * (k - 1) / 2);
    for (std::size_t other : arr.pencils()[flat]) {
        if (other == h) continue;
        v[wedge_index(h, other, k)] += h < other ? 1 : -1;
    }
    return v;
}

std::size_t position(const Pencil& p, std::size_t atom) {
    auto it = std::find(p.begin(), p.end(), atom);
    if (it == p.end()) throw InputError("atom is not a member of the flat");
    return static_cast<std::size_t>(it - p.begin());
}

std::vector<std::size_t> global_to_local(const Arrangement& arr, std::size_t flat) {
    std::vector<std::size_t> map(arr.size(), kDropLetter);
    const auto& p = arr.pencils()[flat];
    for (std::size_t i = 0; i < p.size(); ++i) map[p[i]] = i;
    return map;
}

std::vector<mpz_class> restrict_to_flat(const LiftContext& ctx, std::size_t flat, std::size_t degree,
                                        const std::vector<mpz_class>& coords) {
    const auto& local = *ctx.locals.at(flat);
    LieElement x = ctx.holonomy->lift(degree, coords);
    LieElement y = relabel(x, global_to_local(ctx.arr, flat), local.arr.size());
    return local.holonomy->project(y);
}

std::vector<mpz_class> add_coords(const LatticeQuotient& q, std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += b[i];
        if (i >= q.free_rank()) {
            const auto& d = q.torsion_moduli()[i - q.free_rank()];
            mpz_fdiv_r(a[i].get_mpz_t(), a[i].get_mpz_t(), d.get_mpz_t());
        }
    }
    return a;
}

bool all_zero(const std::vector<mpz_class>& v) {
    return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

}  // namespace

std::vector<mpz_class> LiftContext::h2_coordinates(const std::vector<mpz_class>& wedge) const {
    auto x = solve_integer(h2_wedge, wedge);
    if (!x) throw std::logic_error("vector is not an integral combination of the H_2 basis");
    return *x;
}

std::unique_ptr<LiftContext> make_lift_context(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts,
                                               bool with_locals) {
    if (n < 2) throw InputError("lift level must be at least 2");
    auto ctx = std::make_unique<LiftContext>();
    ctx->arr = arr;
    ctx->n = n;
    ctx->holonomy = std::make_shared<HolonomyAlgebra>(relation_set(arr), n, opts);
    const std::size_t k = arr.size();
    for (std::size_t p = 0; p < arr.pencils().size(); ++p)
        for (std::size_t i = 1; i < arr.pencils()[p].size(); ++i) ctx->h2_basis.emplace_back(p, arr.pencils()[p][i]);
    ctx->h2_wedge = IntMatrix(k * (k - 1) / 2, ctx->h2_basis.size());
    for (std::size_t c = 0; c < ctx->h2_basis.size(); ++c) {
        auto v = relation_wedge(arr, ctx->h2_basis[c].first, ctx->h2_basis[c].second);
        for (std::size_t r = 0; r < v.size(); ++r) ctx->h2_wedge(r, c) = v[r];
    }
    if (with_locals)
        for (std::size_t p = 0; p < arr.pencils().size(); ++p)
            ctx->locals.push_back(make_lift_context(localize(arr, p), n, opts, false));
    return ctx;
}

IntMatrix restriction_matrix(const Arrangement& arr, std::size_t n, const HolonomyOptions& opts) {
    auto ctx = make_lift_context(arr, n, opts);
    const std::size_t cols = ctx->gr_dim();
    std::size_t rows = 0;
    for (auto& l : ctx->locals) rows += l->gr_dim();
    IntMatrix r(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::vector<mpz_class> unit(cols);
        unit[c] = 1;
        std::size_t off = 0;
        for (std::size_t f = 0; f < ctx->locals.size(); ++f) {
            auto y = restrict_to_flat(*ctx, f, n, unit);
            for (std::size_t i = 0; i < y.size(); ++i) r(off + i, c) = y[i];
            off += y.size();
        }
    }
    return r;
}

std::vector<mpz_class> embed_local(const LiftContext& ctx, std::size_t flat, std::size_t degree,
                                   const std::vector<mpz_class>& local) {
    const auto& lc = *ctx.locals.at(flat);
    LieElement x = lc.holonomy->lift(degree, local);
    std::vector<std::size_t> map(ctx.arr.pencils()[flat].begin(), ctx.arr.pencils()[flat].end());
    return ctx.holonomy->project(relabel(x, map, ctx.arr.size()));
}

GlobalLift assemble_global_lift(const std::vector<LocalLift>& locals, const LiftContext& ctx) {
    const std::size_t flats = ctx.arr.pencils().size();
    std::vector<char> seen(flats, 0);
    for (auto& l : locals) {
        if (l.flat >= flats) throw InputError("local lift refers to unknown flat " + std::to_string(l.flat));
        if (seen[l.flat]) throw InputError("two local lifts for flat " + std::to_string(l.flat));
        seen[l.flat] = 1;
    }
    for (std::size_t f = 0; f < flats; ++f)
        if (!seen[f]) throw InputError("missing local lift for flat " + std::to_string(f));

    GlobalLift g;
    for (auto& l : locals) {
        const auto& members = ctx.arr.pencils()[l.flat];
        const auto& lc = *ctx.locals[l.flat];
        for (auto& [key, coords] : l.corrections) {
            auto [atom, degree] = key;
            if (std::find(members.begin(), members.end(), atom) == members.end())
                throw InputError("correction for atom " + std::to_string(atom) + " outside flat " +
                                 std::to_string(l.flat));
            if (degree < 2 || degree >= ctx.n)
                throw InputError("correction degree " + std::to_string(degree) + " outside 2.." +
                                 std::to_string(ctx.n - 1));
            if (coords.size() != lc.holonomy->piece(degree).coordinate_count())
                throw InputError("correction is not a vector of the local Lie piece");
            auto e = embed_local(ctx, l.flat, degree, coords);
            auto it = g.corrections.find(key);
            if (it == g.corrections.end())
                g.corrections.emplace(key, e);
            else
                it->second = add_coords(ctx.holonomy->piece(degree), it->second, e);
        }
    }
    return g;
}

IntMatrix induced_h2(const LiftContext& ctx, const Corrections& corrections) {
    const std::size_t k = ctx.arr.size(), n = ctx.n;
    const auto& h = *ctx.holonomy;
    // psi[a][i] is the degree-i part of the image of x_a.
    std::vector<std::vector<std::optional<LieElement>>> psi(k, std::vector<std::optional<LieElement>>(n));
    for (std::size_t a = 0; a < k; ++a) psi[a][1] = LieElement::generator(k, a);
    for (auto& [key, coords] : corrections) {
        auto [atom, degree] = key;
        if (atom >= k || degree < 2 || degree >= n) throw InputError("correction outside the truncation");
        if (!all_zero(coords)) psi[atom][degree] = h.lift(degree, coords);
    }
    const std::size_t m = ctx.gr_dim(), c = ctx.h2_dim();
    IntMatrix out(m + c, c);
    for (std::size_t col = 0; col < c; ++col) {
        auto [flat, atom] = ctx.h2_basis[col];
        for (std::size_t w = 3; w <= n; ++w) {
            LieElement acc(k, w);
            for (std::size_t other : ctx.arr.pencils()[flat]) {
                if (other == atom) continue;
                for (std::size_t i = 1; i < w; ++i) {
                    const std::size_t j = w - i;
                    if (i >= n || j >= n || !psi[atom][i] || !psi[other][j]) continue;
                    acc = acc + bracket(*psi[atom][i], *psi[other][j]);
                }
            }
            auto coords = h.project(acc);
            if (w < n) {
                if (!all_zero(coords))
                    throw InputError("corrections do not define a lift: the relation of atom " +
                                     ctx.arr.atoms()[atom] + " survives in degree " + std::to_string(w));
                continue;
            }
            for (std::size_t r = 0; r < m; ++r) out(r, col) = coords[r];
        }
        out(m + col, col) = 1;
    }
    return out;
}

LiftCheck check_assembly(const LiftContext& ctx, const std::vector<LocalLift>& locals, const GlobalLift& global) {
    LiftCheck res;
    IntMatrix big = induced_h2(ctx, global.corrections);
    const std::size_t m = ctx.gr_dim();
    for (auto& l : locals) {
        const auto& lc = *ctx.locals.at(l.flat);
        Corrections local;
        for (auto& [key, coords] : l.corrections)
            local[{position(ctx.arr.pencils()[l.flat], key.first), key.second}] = coords;
        IntMatrix small = induced_h2(lc, local);
        const std::size_t lm = lc.gr_dim();
        for (std::size_t col = 0; col < ctx.h2_dim(); ++col) {
            auto [flat, atom] = ctx.h2_basis[col];
            std::vector<mpz_class> top(m);
            for (std::size_t r = 0; r < m; ++r) top[r] = big(r, col);
            auto restricted = restrict_to_flat(ctx, l.flat, ctx.n, top);
            std::vector<mpz_class> expected(lm);
            if (flat == l.flat) {
                const std::size_t local_atom = position(ctx.arr.pencils()[flat], atom);
                std::size_t lcol = 0;
                while (lc.h2_basis[lcol].second != local_atom) ++lcol;
                for (std::size_t r = 0; r < lm; ++r) expected[r] = small(r, lcol);
            }
            if (restricted != expected) {
                res.ok = false;
                res.detail = "flat " + std::to_string(l.flat) + " disagrees on the H_2 basis element of atom " +
                             ctx.arr.atoms()[atom] + " in flat " + std::to_string(flat);
                return res;
            }
        }
    }
    return res;
}

DiagramVerdict check_diagram(const DiagramInstance& d) {
    const auto& ring = d.ring;
    if (d.g2.rows() != d.g2.cols()) throw InputError("g2 must be square");
    if (d.la_star.cols() != d.g2.cols() || d.lb_star.cols() != d.g2.rows())
        throw InputError("shape mismatch between g2 and the lift maps");
    if (d.la_star.rows() != d.lb_star.rows() || d.sigma.cols() != d.la_star.rows())
        throw InputError("shape mismatch between sigma and the lift maps");
    DiagramVerdict v;
    const std::size_t c = d.g2.cols();
    bool invertible = false;
    if (ring.is_prime_field()) {
        invertible = rank_mod_p(d.g2, ring.modulus()) == c;
    } else {
        auto snf = smith_normal_form(d.g2);
        invertible = snf.rank == c && (ring.is_field() || snf.torsion().empty());
    }
    if (!invertible) {
        v.failed = "g2 is not invertible over " + ring.name();
        return v;
    }
    auto compare = [&](const IntMatrix& lhs, const IntMatrix& rhs, const std::string& name) {
        IntMatrix a = lhs.reduced(ring), b = rhs.reduced(ring);
        for (std::size_t col = 0; col < a.cols(); ++col) {
            auto ca = a.column(col), cb = b.column(col);
            if (ca != cb) {
                v.failed = name;
                v.witness_column = col;
                v.lhs = ca;
                v.rhs = cb;
                return false;
            }
        }
        return true;
    };
    if (!compare(d.lb_star * d.g2, d.la_star, "lb_star o g2 = la_star")) return v;
    if (!compare(d.sigma * d.la_star, (d.sigma * d.lb_star) * d.g2, "sigma o la_star = (sigma o lb_star) o g2"))
        return v;
    v.pass = true;
    return v;
}

void validate_iso(const Arrangement& a, const Arrangement& b, const LatticeIso& iso) {
    if (a.size() != b.size()) throw InputError("arrangements have different numbers of atoms");
    if (iso.size() != a.size()) throw InputError("iso must map every atom");
    std::vector<char> hit(b.size(), 0);
    for (std::size_t i = 0; i < iso.size(); ++i) {
        if (iso[i] >= b.size()) throw InputError("iso target out of range for atom " + a.atoms()[i]);
        if (hit[iso[i]]) throw InputError("iso is not injective (atom " + b.atoms()[iso[i]] + " hit twice)");
        hit[iso[i]] = 1;
    }
    if (a.pencils().size() != b.pencils().size()) throw InputError("arrangements have different numbers of flats");
    std::set<Pencil> targets(b.pencils().begin(), b.pencils().end());
    for (auto& p : a.pencils()) {
        Pencil q;
        for (auto x : p) q.push_back(iso[x]);
        std::sort(q.begin(), q.end());
        if (!targets.count(q)) {
            std::string names;
            for (auto x : p) names += (names.empty() ? "" : ",") + a.atoms()[x];
            throw InputError("iso does not carry the pencil {" + names + "} to a pencil");
        }
    }
}

namespace {

IntMatrix transport_matrix(const LiftContext& a, const LiftContext& b, const LatticeIso& iso, std::size_t d) {
    const std::size_t cols = a.holonomy->piece(d).coordinate_count();
    const std::size_t rows = b.holonomy->piece(d).coordinate_count();
    IntMatrix t(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::vector<mpz_class> unit(cols);
        unit[c] = 1;
        auto y = b.holonomy->project(relabel(a.holonomy->lift(d, unit), iso, b.arr.size()));
        for (std::size_t r = 0; r < rows; ++r) t(r, c) = y[r];
    }
    return t;
}

IntMatrix block_diag(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix out(x.rows() + y.rows(), x.cols() + y.cols());
    out.set_block(0, 0, x);
    out.set_block(x.rows(), x.cols(), y);
    return out;
}

std::vector<std::string> h2_labels(const LiftContext& ctx) {
    std::vector<std::string> out;
    for (auto [flat, atom] : ctx.h2_basis) {
        std::string members;
        for (auto x : ctx.arr.pencils()[flat]) members += (members.empty() ? "" : ",") + ctx.arr.atoms()[x];
        out.push_back("relation of " + ctx.arr.atoms()[atom] + " in {" + members + "}");
    }
    return out;
}

std::vector<std::string> gr_labels(const LiftContext& ctx) {
    std::vector<std::string> out;
    const auto& q = ctx.holonomy->piece(ctx.n);
    for (std::size_t t = 0; t < q.coordinate_count(); ++t) {
        std::vector<mpz_class> unit(q.coordinate_count());
        unit[t] = 1;
        out.push_back(ctx.holonomy->lift(ctx.n, unit).to_string());
    }
    return out;
}

}  // namespace

VerifyResult verify_decomposable_iso(const Arrangement& a, const Arrangement& b, const LatticeIso& iso,
                                     std::size_t n, const Ring& ring, const HolonomyOptions& opts) {
    if (n < 3) throw InputError("verification level must be at least 3");
    validate_iso(a, b, iso);
    for (auto* arr : {&a, &b}) {
        auto rep = is_decomposable(*arr, opts);
        if (rep.verdict != DecompVerdict::Decomposable)
            throw InputError("both arrangements must be decomposable; one is " + to_string(rep.verdict));
    }
    VerifyResult res;
    auto ca = make_lift_context(a, n, opts);
    auto cb = make_lift_context(b, n, opts);
    const std::size_t m = cb->gr_dim(), c = cb->h2_dim();

    IntMatrix g2(c, ca->h2_dim());
    for (std::size_t col = 0; col < ca->h2_dim(); ++col) {
        auto [flat, atom] = ca->h2_basis[col];
        LieElement r = LieElement::from_dense(a.size(), 2, relation_wedge(a, flat, atom));
        auto coords = cb->h2_coordinates(relabel(r, iso, b.size()).dense());
        for (std::size_t i = 0; i < c; ++i) g2(i, col) = coords[i];
    }
    IntMatrix fn = transport_matrix(*ca, *cb, iso, n);
    IntMatrix transport = block_diag(fn, g2);
    IntMatrix sigma = splitting_from_hom(IntMatrix(m, c)).sigma;

    bool ok = true;
    for (auto* ctx : {ca.get(), cb.get()}) {
        IntMatrix r = restriction_matrix(ctx->arr, n, opts);
        res.audit.emplace_back(std::string(ctx == ca.get() ? "restriction_a" : "restriction_b"), r);
        // sigma assembled from the local projections through the inverse of the restriction
        const std::size_t mm = ctx->gr_dim(), cc = ctx->h2_dim();
        IntMatrix local_sigma(r.rows(), mm + cc);
        local_sigma.set_block(0, 0, r);
        IntMatrix assembled(mm, mm + cc);
        bool invertible = r.rows() == r.cols();
        for (std::size_t col = 0; invertible && col < mm + cc; ++col) {
            auto x = solve_integer(r, local_sigma.column(col));
            if (!x) {
                invertible = false;
                break;
            }
            for (std::size_t i = 0; i < mm; ++i) assembled(i, col) = (*x)[i];
        }
        if (!invertible || !(assembled == splitting_from_hom(IntMatrix(mm, cc)).sigma)) ok = false;
    }

    auto run = [&](const std::string& name, const Corrections& corr_a, const Corrections& corr_b) {
        IntMatrix la = transport * induced_h2(*ca, corr_a);
        IntMatrix lb = induced_h2(*cb, corr_b);
        res.audit.emplace_back("la_star_" + name, la);
        res.audit.emplace_back("lb_star_" + name, lb);
        CandidateResult cr;
        cr.name = name;
        cr.verdict = check_diagram({g2, la, lb, sigma, ring});
        return std::make_pair(cr, la);
    };

    std::vector<LocalLift> zero_a, zero_b;
    for (std::size_t f = 0; f < a.pencils().size(); ++f) zero_a.push_back({f, {}});
    for (std::size_t f = 0; f < b.pencils().size(); ++f) zero_b.push_back({f, {}});
    auto [zero, la_zero] = run("zero", assemble_global_lift(zero_a, *ca).corrections,
                               assemble_global_lift(zero_b, *cb).corrections);
    zero.assembly_a = check_assembly(*ca, zero_a, {});
    zero.assembly_b = check_assembly(*cb, zero_b, {});
    res.candidates.push_back(zero);

    // A nonzero top-degree correction at the smallest atom of every flat of B, and its
    // transport to A through the iso.
    std::vector<LocalLift> loc_b, loc_a;
    std::vector<std::size_t> inverse(iso.size());
    for (std::size_t i = 0; i < iso.size(); ++i) inverse[iso[i]] = i;
    for (std::size_t z = 0; z < b.pencils().size(); ++z) {
        LocalLift l{z, {}};
        const auto& q = cb->locals[z]->holonomy->piece(n - 1);
        if (n - 1 >= 2 && q.free_rank() > 0) {
            std::vector<mpz_class> unit(q.coordinate_count());
            unit[0] = 1;
            l.corrections[{b.pencils()[z][0], n - 1}] = unit;
        }
        loc_b.push_back(l);
    }
    for (std::size_t y = 0; y < a.pencils().size(); ++y) {
        Pencil image;
        for (auto x : a.pencils()[y]) image.push_back(iso[x]);
        std::sort(image.begin(), image.end());
        const std::size_t z = static_cast<std::size_t>(
            std::find(b.pencils().begin(), b.pencils().end(), image) - b.pencils().begin());
        LocalLift l{y, {}};
        const auto& local_b = *cb->locals[z];
        const auto& local_a = *ca->locals[y];
        // local letter of B_Z -> local letter of A_Y
        std::vector<std::size_t> letters;
        for (auto bz : b.pencils()[z]) letters.push_back(position(a.pencils()[y], inverse[bz]));
        for (auto& [key, coords] : loc_b[z].corrections) {
            LieElement x = local_b.holonomy->lift(key.second, coords);
            l.corrections[{inverse[key.first], key.second}] =
                local_a.holonomy->project(relabel(x, letters, local_a.arr.size()));
        }
        loc_a.push_back(l);
    }
    GlobalLift ga = assemble_global_lift(loc_a, *ca), gb = assemble_global_lift(loc_b, *cb);
    auto [moved, la_moved] = run("transported", ga.corrections, gb.corrections);
    moved.assembly_a = check_assembly(*ca, loc_a, ga);
    moved.assembly_b = check_assembly(*cb, loc_b, gb);
    res.candidates.push_back(moved);

    if (m > 0 && c > 0) {
        IntMatrix lambda(m, c);
        lambda(0, 0) = 1;
        IntMatrix change = IntMatrix::identity(m + c);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < c; ++j) change(r, m + j) = -lambda(r, j);
        IntMatrix perturbed = change * la_moved;
        res.audit.emplace_back("lambda_perturbation", lambda);
        res.audit.emplace_back("la_star_perturbed", perturbed);
        res.negative_control = check_diagram({g2, perturbed, induced_h2(*cb, gb.corrections), sigma, ring});
    }

    res.audit.emplace_back("g2", g2);
    res.audit.emplace_back("transport_gr" + std::to_string(n), fn);
    res.audit.emplace_back("sigma", sigma);
    res.bases.emplace_back("h2_a", h2_labels(*ca));
    res.bases.emplace_back("h2_b", h2_labels(*cb));
    res.bases.emplace_back("gr" + std::to_string(n) + "_b", gr_labels(*cb));

    for (auto& cand : res.candidates)
        ok = ok && cand.verdict.pass && cand.assembly_a.ok && cand.assembly_b.ok;
    if (res.negative_control && res.negative_control->pass) ok = false;
    res.pass = ok;
    return res;
}

}  // namespace arrlie
