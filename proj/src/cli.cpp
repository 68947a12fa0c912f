#include "arrlie/cli.hpp"

#include "arrlie/decomposability.hpp"
#include "arrlie/nilpotent.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace arrlie::cli {

namespace {

using io::Json;

struct Input {
    std::string path;
    std::string bytes;
    Json json;
};

Input load(const std::string& path) {
    Input in{path, io::read_file(path), {}};
    in.json = io::parse_json_text(in.bytes, path);
    return in;
}

Arrangement arrangement_of(const Input& in) {
    try {
        return io::arrangement_from_json(in.json);
    } catch (const InputError& e) {
        throw InputError(in.path + ": " + e.what());
    }
}

std::size_t need_files(const RunConfig& c, std::size_t n) {
    if (c.files.size() != n)
        throw InputError(c.command + " expects " + std::to_string(n) + " input file" + (n == 1 ? "" : "s"));
    return n;
}

HolonomyOptions options_of(const RunConfig& c) {
    HolonomyOptions o;
    o.threads = std::max<std::size_t>(1, c.threads);
    o.guard = c.guard;
    return o;
}

std::size_t degree_at_least(std::optional<std::size_t> v, std::size_t fallback, std::size_t min, const char* flag) {
    std::size_t d = v.value_or(fallback);
    if (d < min) throw InputError(std::string(flag) + " must be at least " + std::to_string(min));
    return d;
}

std::string cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (auto& e : v) s += (s.empty() ? "" : " ") + cell(e);
        return v.empty() ? "-" : s;
    }
    if (v.is_null()) return "-";
    return v.dump();
}

// Aligned text: objects become key/value lines, an object of objects becomes a table with
// one row per key, arrays of scalars are indexed from 1.
std::string render_table(const Json& r) {
    std::ostringstream os;
    if (r.is_object() && !r.empty() && r.begin()->is_object()) {
        std::vector<std::string> cols{""};
        for (auto it = r.begin()->begin(); it != r.begin()->end(); ++it) cols.push_back(it.key());
        std::vector<std::vector<std::string>> rows{cols};
        for (auto it = r.begin(); it != r.end(); ++it) {
            std::vector<std::string> row{it.key()};
            for (std::size_t c = 1; c < cols.size(); ++c) row.push_back(cell(it.value().value(cols[c], Json())));
            rows.push_back(row);
        }
        std::vector<std::size_t> width(cols.size(), 0);
        for (auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
        for (auto& row : rows) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c)
                line += (c ? "  " : "") + std::string(width[c] - row[c].size(), ' ') + row[c];
            os << line << "\n";
        }
        return os.str();
    }
    if (r.is_object()) {
        std::size_t w = 0;
        for (auto it = r.begin(); it != r.end(); ++it) w = std::max(w, it.key().size());
        for (auto it = r.begin(); it != r.end(); ++it)
            os << std::left << std::setw(static_cast<int>(w)) << it.key() << "  " << cell(it.value()) << "\n";
        return os.str();
    }
    if (r.is_array()) {
        for (std::size_t i = 0; i < r.size(); ++i) os << std::setw(3) << i + 1 << "  " << cell(r[i]) << "\n";
        return os.str();
    }
    return cell(r) + "\n";
}

Json verdict_json(const DiagramVerdict& v) {
    Json j;
    j["pass"] = v.pass;
    j["failed"] = v.failed.empty() ? Json() : Json(v.failed);
    j["witness_column"] = v.witness_column ? Json(*v.witness_column) : Json();
    j["lhs"] = io::to_json(v.lhs);
    j["rhs"] = io::to_json(v.rhs);
    return j;
}

struct Outcome {
    Json result;
    int exit_code = 0;
    std::vector<Input> inputs;
    std::vector<std::pair<std::string, std::string>> files;  // written under --out
};

Outcome cmd_lattice(const RunConfig& c, bool betti_only) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    Arrangement arr = arrangement_of(o.inputs[0]);
    auto b = betti(arr);
    Json r;
    if (!betti_only) {
        r["atoms"] = arr.atoms();
        Json pencils = Json::array(), mu = Json::array();
        for (auto& f : mobius_l2(arr)) {
            Json names = Json::array();
            for (auto m : f.members) names.push_back(arr.atoms()[m]);
            pencils.push_back(names);
            mu.push_back(f.mu);
        }
        r["pencils"] = pencils;
        r["mu"] = mu;
    }
    r["b1"] = b.b1;
    r["b2"] = b.b2;
    o.result = r;
    return o;
}

Outcome cmd_witt(const RunConfig& c) {
    if (!c.files.empty()) throw InputError("witt takes no input file");
    if (!c.alphabet) throw InputError("witt needs --alphabet");
    const std::size_t n = degree_at_least(c.max_degree, 6, 1, "--max-degree");
    Outcome o;
    o.result = Json::array();
    for (std::size_t d = 1; d <= n; ++d) o.result.push_back(io::to_json(witt_rank(*c.alphabet, d)));
    return o;
}

Outcome cmd_holonomy(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    const auto& in = o.inputs[0];
    RelationSet rels;
    try {
        rels = io::is_presentation(in.json) ? relation_set(io::presentation_from_json(in.json))
                                            : relation_set(io::arrangement_from_json(in.json));
    } catch (const InputError& e) {
        throw InputError(in.path + ": " + e.what());
    }
    const Ring ring = Ring::parse(c.ring);
    const std::size_t n = degree_at_least(c.max_degree, 3, 1, "--max-degree");
    for (std::size_t d = 1; d <= n; ++d) check_holonomy_guard(rels.alphabet, d, options_of(c));
    Json r;
    for (std::size_t d = 1; d <= n; ++d)
        r[std::to_string(d)] = io::to_json(holonomy_graded(rels, d, ring, options_of(c)));
    if (io::is_presentation(in.json)) r["holonomy_map"] = io::to_json(holonomy_map_from_presentation(
                                           io::presentation_from_json(in.json)));
    o.result = r;
    return o;
}

Outcome cmd_falk(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    o.result = falk_invariant(arrangement_of(o.inputs[0]));
    return o;
}

Outcome cmd_nq2(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    Arrangement arr = arrangement_of(o.inputs[0]);
    Class2Group g(arr);
    Json r;
    Json gr2;
    gr2["rank"] = g.gr2().free_rank();
    gr2["torsion"] = io::to_json(g.gr2().torsion());
    r["gr2"] = gr2;
    if (c.words.empty()) {
        auto words = g.relation_words(arr);
        bool all = true;
        for (auto& w : words) all = all && g.is_identity(g.evaluate(w));
        r["relation_words"] = words.size();
        r["all_identity"] = all;
        o.exit_code = all ? 0 : 1;
    } else {
        Json list = Json::array();
        for (auto& w : c.words) {
            Class2Element e;
            try {
                e = g.evaluate(w);
            } catch (const InputError& err) {
                throw InputError("--word \"" + w + "\": " + err.what());
            }
            Json item;
            item["word"] = w;
            item["exps"] = io::to_json(e.exps);
            item["tail"] = io::to_json(e.tail);
            item["identity"] = g.is_identity(e);
            list.push_back(item);
        }
        r["words"] = list;
    }
    o.result = r;
    return o;
}

Outcome cmd_kinv(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    Arrangement arr = arrangement_of(o.inputs[0]);
    IntMatrix chi = k_invariant_matrix(arr);
    const bool retract = chi * k_invariant_section(arr) == IntMatrix::identity(chi.rows());
    const std::size_t kernel = chi.cols() - smith_normal_form(chi).rank;
    Json r;
    r["matrix"] = io::to_json(chi);
    r["kernel_rank"] = kernel;
    r["b2"] = betti(arr).b2;
    r["pass"] = retract && kernel == betti(arr).b2;
    o.exit_code = r["pass"].get<bool>() ? 0 : 1;
    o.result = r;
    return o;
}

Outcome cmd_h2check(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    Arrangement arr = arrangement_of(o.inputs[0]);
    const std::size_t n = degree_at_least(c.degree ? c.degree : c.max_degree, 3, 2, "--degree");
    auto rep = h2_rank_check(arr, n, options_of(c));
    Json r;
    r["degree"] = rep.degree;
    r["ce_rank"] = io::to_json(rep.ce_rank);
    r["ce_torsion"] = io::to_json(rep.ce_torsion);
    r["holonomy_rank"] = io::to_json(rep.holonomy_rank);
    r["b2"] = rep.b2;
    r["heuristic"] = rep.heuristic;
    r["pass"] = rep.pass;
    o.exit_code = rep.pass ? 0 : 1;
    o.result = r;
    return o;
}

Outcome cmd_decomp(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    auto rep = is_decomposable(arrangement_of(o.inputs[0]), options_of(c));
    Json r;
    r["decomposable"] = rep.verdict == DecompVerdict::Decomposable;
    r["verdict"] = to_string(rep.verdict);
    r["r_global"] = io::to_json(rep.r_global);
    r["r_local"] = io::to_json(rep.r_local);
    r["torsion"] = io::to_json(rep.torsion);
    o.exit_code = rep.verdict == DecompVerdict::Decomposable ? 0 : 1;
    o.result = r;
    return o;
}

Outcome cmd_lcs(const RunConfig& c) {
    need_files(c, 1);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    const std::size_t n = degree_at_least(c.max_degree, 5, 1, "--max-degree");
    o.result = io::to_json(lcs_ranks_decomposable(arrangement_of(o.inputs[0]), n, options_of(c)));
    return o;
}

Outcome cmd_verify(const RunConfig& c) {
    need_files(c, 2);
    Outcome o;
    o.inputs.push_back(load(c.files[0]));
    o.inputs.push_back(load(c.files[1]));
    Arrangement a = arrangement_of(o.inputs[0]), b = arrangement_of(o.inputs[1]);
    if (c.iso.empty()) throw InputError("verify-iso needs --iso");
    Json iso_json;
    const auto first = c.iso.find_first_not_of(" \t\n");
    if (first != std::string::npos && (c.iso[first] == '{' || c.iso[first] == '[')) {
        iso_json = io::parse_json_text(c.iso, "--iso");
    } else {
        o.inputs.push_back(load(c.iso));
        iso_json = o.inputs.back().json;
    }
    LatticeIso iso;
    try {
        iso = io::iso_from_json(iso_json, a, b);
    } catch (const InputError& e) {
        throw InputError(std::string("--iso: ") + e.what());
    }
    const std::size_t n = degree_at_least(c.degree ? c.degree : c.max_degree, 4, 3, "--degree");
    const Ring ring = Ring::parse(c.ring);
    auto res = verify_decomposable_iso(a, b, iso, n, ring, options_of(c));

    Json r;
    r["pass"] = res.pass;
    r["degree"] = n;
    r["ring"] = ring.name();
    Json cands = Json::array();
    for (auto& cand : res.candidates) {
        Json j = verdict_json(cand.verdict);
        j["name"] = cand.name;
        j["assembly_a"] = cand.assembly_a.ok ? Json("ok") : Json(cand.assembly_a.detail);
        j["assembly_b"] = cand.assembly_b.ok ? Json("ok") : Json(cand.assembly_b.detail);
        cands.push_back(j);
    }
    r["candidates"] = cands;
    r["negative_control"] = res.negative_control ? verdict_json(*res.negative_control) : Json();

    Json audit, mats, bases;
    for (auto& [name, m] : res.audit) mats[name] = io::to_json(m);
    for (auto& [name, labels] : res.bases) bases[name] = labels;
    audit["iso"] = iso;
    audit["matrices"] = mats;
    audit["bases"] = bases;
    const std::string audit_text = audit.dump(1) + "\n";
    r["audit_sha256"] = io::sha256_hex(audit_text);
    o.files.emplace_back("audit.json", audit_text);
    o.exit_code = res.pass ? 0 : 1;
    o.result = r;
    return o;
}

Outcome cmd_catalog(const RunConfig& c) {
    if (!c.files.empty()) throw InputError("catalog takes a name and a parameter, not a file");
    Arrangement arr = catalog::by_name(c.catalog_name, c.catalog_param);
    Outcome o;
    o.result = io::arrangement_to_json(arr);
    o.files.emplace_back(c.catalog_name + std::to_string(c.catalog_param) + ".json", io::emit_arrangement(arr));
    return o;
}

Json command_echo(const RunConfig& c) {
    Json e = Json::array();
    e.push_back(c.command);
    if (c.command == "catalog") {
        e.push_back(c.catalog_name);
        e.push_back(c.catalog_param);
    }
    for (auto& f : c.files) e.push_back(f);
    e.push_back("--ring=" + c.ring);
    if (c.max_degree) e.push_back("--max-degree=" + std::to_string(*c.max_degree));
    if (c.degree) e.push_back("--degree=" + std::to_string(*c.degree));
    if (c.alphabet) e.push_back("--alphabet=" + std::to_string(*c.alphabet));
    if (c.guard) e.push_back("--guard=" + std::to_string(*c.guard));
    for (auto& w : c.words) e.push_back("--word=" + w);
    if (!c.iso.empty()) e.push_back("--iso=" + c.iso);
    return e;
}

}  // namespace

Report run(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    Ring::parse(c.ring);
    if (c.threads == 0) throw InputError("--threads must be positive");
    Outcome o;
    if (c.command == "lattice") o = cmd_lattice(c, false);
    else if (c.command == "betti") o = cmd_lattice(c, true);
    else if (c.command == "witt") o = cmd_witt(c);
    else if (c.command == "holonomy") o = cmd_holonomy(c);
    else if (c.command == "falk") o = cmd_falk(c);
    else if (c.command == "nq2") o = cmd_nq2(c);
    else if (c.command == "kinv") o = cmd_kinv(c);
    else if (c.command == "h2check") o = cmd_h2check(c);
    else if (c.command == "decomp") o = cmd_decomp(c);
    else if (c.command == "lcs") o = cmd_lcs(c);
    else if (c.command == "verify-iso") o = cmd_verify(c);
    else if (c.command == "catalog") o = cmd_catalog(c);
    else throw InputError("unknown command \"" + c.command + "\"");

    Report rep;
    Json inputs = Json::array();
    for (auto& in : o.inputs) {
        Json j;
        j["path"] = in.path;
        j["sha256"] = io::sha256_hex(in.bytes);
        inputs.push_back(j);
    }
    rep.payload["command"] = command_echo(c);
    rep.payload["inputs"] = inputs;
    rep.payload["result"] = o.result;
    rep.payload["exit_code"] = o.exit_code;
    rep.exit_code = o.exit_code;
    if (c.command == "catalog" && c.format == Format::Json)
        rep.text = o.files[0].second;
    else
        rep.text = c.format == Format::Json ? o.result.dump() + "\n" : render_table(o.result);

    if (c.out_dir) {
        std::filesystem::create_directories(*c.out_dir);
        for (auto& [name, text] : o.files) {
            std::ofstream f(std::filesystem::path(*c.out_dir) / name, std::ios::binary);
            if (!f) throw InputError(*c.out_dir + ": cannot write " + name);
            f << text;
        }
        if (c.command == "verify-iso") {
            std::ofstream f(std::filesystem::path(*c.out_dir) / "report.json", std::ios::binary);
            f << rep.payload.dump(1) << "\n";
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"holonomy Lie algebras and nilpotent quotients of arrangements", "arrlie"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "arrlie 1.0");

    RunConfig c;
    std::size_t max_degree = 0, degree = 0, alphabet = 0, guard = 0;
    std::string out_dir, report_path;
    bool table = false, json = false;

    struct Sub {
        const char* name;
        const char* help;
        int files;  // -1: none
    };
    const Sub subs[] = {
        {"lattice", "atoms, pencils, Moebius values and Betti numbers", 1},
        {"betti", "b1 and b2", 1},
        {"witt", "ranks of the free Lie algebra", -1},
        {"holonomy", "graded pieces of the holonomy Lie algebra (arrangement or presentation)", 1},
        {"falk", "rank of gr_3 through the Falk invariant", 1},
        {"nq2", "evaluate words in G/Gamma_3", 1},
        {"kinv", "the level-2 k-invariant matrix", 1},
        {"h2check", "rank of H_2 of the truncated holonomy Lie algebra", 1},
        {"decomp", "decomposability verdict", 1},
        {"lcs", "LCS ranks of a decomposable arrangement", 1},
        {"verify-iso", "certify the level-n diagram for a lattice isomorphism", 2},
        {"catalog", "emit a catalog arrangement", -1},
    };
    for (auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        if (s.files > 0) sub->add_option("files", c.files, "input JSON")->required()->expected(s.files);
        sub->add_option("--ring", c.ring, "z, q or fp:<p>");
        sub->add_option("--max-degree", max_degree, "top degree");
        sub->add_option("--guard", guard, "alphabet cap for Lie computations");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", c.threads, "worker threads");
        sub->add_option("--report", report_path, "write the full report here");
        sub->add_flag("--timing", c.timing, "add wall time to the report");
        auto* tj = sub->add_flag("--json", json, "JSON output (default)");
        auto* tt = sub->add_flag("--table", table, "aligned text output");
        tj->excludes(tt);
        if (std::string(s.name) == "witt") sub->add_option("--alphabet", alphabet, "alphabet size")->required();
        if (std::string(s.name) == "nq2") sub->add_option("--word", c.words, "word such as H1.H2^-1");
        if (std::string(s.name) == "h2check" || std::string(s.name) == "verify-iso")
            sub->add_option("--degree", degree, "level n");
        if (std::string(s.name) == "verify-iso") sub->add_option("--iso", c.iso, "JSON atom map or file")->required();
        if (std::string(s.name) == "catalog") {
            sub->add_option("name", c.catalog_name, "braid, pencil, generic or near_pencil")->required();
            sub->add_option("param", c.catalog_param, "size parameter")->required();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    auto given = [&](const char* name) {
        auto* opt = sub->get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (given("--max-degree")) c.max_degree = max_degree;
    if (given("--alphabet")) c.alphabet = alphabet;
    if (given("--degree")) c.degree = degree;
    if (given("--guard")) c.guard = guard;
    if (given("--out")) c.out_dir = out_dir;
    if (given("--report")) c.report_path = report_path;
    c.format = table ? Format::Table : Format::Json;

    try {
        Report rep = run(c);
        out << rep.text;
        if (c.report_path) {
            Json full = rep.payload;
            if (c.timing) full["timing_seconds"] = rep.seconds;
            std::ofstream f(*c.report_path, std::ios::binary);
            if (!f) throw InputError(*c.report_path + ": cannot write report");
            f << full.dump(1) << "\n";
        } else if (c.timing) {
            err << "time: " << std::fixed << std::setprecision(3) << rep.seconds << " s\n";
        }
        return rep.exit_code;
    } catch (const InputError& e) {
        err << "arrlie: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "arrlie: internal check failed: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace arrlie::cli
