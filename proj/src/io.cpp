#include "arrlie/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace arrlie::io {

namespace {

const mpz_class kSafe("9007199254740991");

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

std::size_t index_from_json(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace

Json to_json(const mpz_class& x) {
    if (abs(x) <= kSafe) return Json(x.get_si());
    return Json(x.get_str());
}

Json to_json(const mpq_class& x) {
    if (x.get_den() == 1) return to_json(mpz_class(x.get_num()));
    return Json(x.get_str());
}

Json to_json(const std::vector<mpz_class>& v) {
    Json out = Json::array();
    for (auto& x : v) out.push_back(to_json(x));
    return out;
}

Json to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (auto& x : m.row(r)) row.push_back(to_json(x));
        rows.push_back(std::move(row));
    }
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["entries"] = std::move(rows);
    return out;
}

Json to_json(const GradedAbelian& g) {
    Json out;
    out["rank"] = to_json(g.rank);
    out["torsion"] = to_json(g.torsion);
    return out;
}

mpq_class rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return mpq_class(mpz_class(j.dump()));
    if (j.is_number()) fail(where, "non-integral JSON numbers are not accepted; write \"p/q\"");
    if (j.is_string()) {
        static const std::regex re(R"(\s*(-?\d+)(?:\s*/\s*(\d+))?\s*)");
        std::smatch m;
        const std::string s = j.get<std::string>();
        if (!std::regex_match(s, m, re)) fail(where, "cannot read \"" + s + "\" as a rational");
        mpz_class num(m[1].str()), den(m[2].matched ? m[2].str() : "1");
        if (den == 0) fail(where, "zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    if (j.is_array() && j.size() == 2) {
        mpz_class num = integer_from_json(j[0], where + "/0");
        mpz_class den = integer_from_json(j[1], where + "/1");
        if (den == 0) fail(where, "zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    fail(where, "expected an integer, a string \"p/q\" or a pair [p, q]");
}

mpz_class integer_from_json(const Json& j, const std::string& where) {
    if (j.is_array()) fail(where, "expected an integer");
    mpq_class q = rational_from_json(j, where);
    if (q.get_den() != 1) fail(where, "expected an integer");
    return q.get_num();
}

Json arrangement_to_json(const Arrangement& arr) {
    Json out;
    out["atoms"] = arr.atoms();
    if (arr.normals()) {
        Json normals = Json::array();
        for (auto& v : *arr.normals()) {
            Json row = Json::array();
            for (auto& x : v) row.push_back(to_json(x));
            normals.push_back(std::move(row));
        }
        out["normals"] = std::move(normals);
    }
    Json pencils = Json::array();
    for (auto& p : arr.pencils()) pencils.push_back(p);
    out["pencils"] = std::move(pencils);
    return out;
}

Arrangement arrangement_from_json(const Json& j) {
    if (!j.is_object()) fail("/", "an arrangement must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "atoms" && it.key() != "normals" && it.key() != "pencils")
            fail("/" + it.key(), "unknown key");
    if (!j.contains("atoms") || !j["atoms"].is_array()) fail("/atoms", "missing array of atom names");
    std::vector<std::string> atoms;
    for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
        const auto& a = j["atoms"][i];
        if (!a.is_string() || a.get<std::string>().empty())
            fail("/atoms/" + std::to_string(i), "atom names must be non-empty strings");
        atoms.push_back(a.get<std::string>());
    }
    std::optional<std::vector<RationalVector>> normals;
    if (j.contains("normals")) {
        const auto& n = j["normals"];
        if (!n.is_array()) fail("/normals", "expected an array");
        normals.emplace();
        for (std::size_t i = 0; i < n.size(); ++i) {
            const std::string where = "/normals/" + std::to_string(i);
            if (!n[i].is_array()) fail(where, "expected an array of coordinates");
            RationalVector v;
            for (std::size_t c = 0; c < n[i].size(); ++c)
                v.push_back(rational_from_json(n[i][c], where + "/" + std::to_string(c)));
            normals->push_back(std::move(v));
        }
    }
    std::optional<std::vector<Pencil>> pencils;
    if (j.contains("pencils")) {
        const auto& p = j["pencils"];
        if (!p.is_array()) fail("/pencils", "expected an array");
        pencils.emplace();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string where = "/pencils/" + std::to_string(i);
            if (!p[i].is_array()) fail(where, "expected an array of atom indices");
            Pencil q;
            for (std::size_t c = 0; c < p[i].size(); ++c) {
                const auto& e = p[i][c];
                const std::string w = where + "/" + std::to_string(c);
                if (e.is_string()) {
                    auto it = std::find(atoms.begin(), atoms.end(), e.get<std::string>());
                    if (it == atoms.end()) fail(w, "unknown atom \"" + e.get<std::string>() + "\"");
                    q.push_back(static_cast<std::size_t>(it - atoms.begin()));
                } else {
                    q.push_back(index_from_json(e, w));
                }
            }
            pencils->push_back(std::move(q));
        }
    }
    return Arrangement(std::move(atoms), std::move(normals), std::move(pencils));
}

std::string emit_arrangement(const Arrangement& arr) {
    Json j = arrangement_to_json(arr);
    std::ostringstream os;
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << "  " << Json(it.key()).dump() << ": ";
        const Json& v = it.value();
        if (v.is_array() && !v.empty() && v[0].is_array()) {
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) os << "    " << v[i].dump() << (i + 1 < v.size() ? ",\n" : "\n");
            os << "  ]";
        } else {
            os << v.dump();
        }
    }
    os << "\n}\n";
    return os.str();
}

bool is_presentation(const Json& j) { return j.is_object() && j.contains("generators"); }

Presentation presentation_from_json(const Json& j) {
    if (!j.is_object()) fail("/", "a presentation must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "generators" && it.key() != "relators" && it.key() != "names")
            fail("/" + it.key(), "unknown key");
    Presentation p;
    p.generators = index_from_json(j.value("generators", Json()), "/generators");
    if (!j.contains("relators") || !j["relators"].is_array()) fail("/relators", "missing array of relators");
    for (std::size_t i = 0; i < j["relators"].size(); ++i) {
        const auto& r = j["relators"][i];
        if (!r.is_string()) fail("/relators/" + std::to_string(i), "relators are strings");
        p.relators.push_back(r.get<std::string>());
    }
    if (j.contains("names")) {
        const auto& n = j["names"];
        std::string letters;
        if (n.is_string()) {
            letters = n.get<std::string>();
        } else if (n.is_array()) {
            for (std::size_t i = 0; i < n.size(); ++i) {
                if (!n[i].is_string() || n[i].get<std::string>().size() != 1)
                    fail("/names/" + std::to_string(i), "names are single letters");
                letters += n[i].get<std::string>();
            }
        } else {
            fail("/names", "expected a string or an array of letters");
        }
        p.names.assign(letters.begin(), letters.end());
    } else {
        p.names = Presentation::default_names(p.generators);
    }
    validate(p);
    return p;
}

LatticeIso iso_from_json(const Json& j, const Arrangement& a, const Arrangement& b) {
    auto target = [&](const Json& e, const std::string& where) -> std::size_t {
        if (e.is_string()) {
            auto idx = b.atom_index(e.get<std::string>());
            if (!idx) fail(where, "unknown atom \"" + e.get<std::string>() + "\" of the second arrangement");
            return *idx;
        }
        return index_from_json(e, where);
    };
    LatticeIso iso(a.size(), static_cast<std::size_t>(-1));
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto idx = a.atom_index(it.key());
            if (!idx) fail("/" + it.key(), "unknown atom of the first arrangement");
            iso[*idx] = target(it.value(), "/" + it.key());
        }
        for (std::size_t i = 0; i < iso.size(); ++i)
            if (iso[i] == static_cast<std::size_t>(-1)) fail("/", "atom " + a.atoms()[i] + " has no image");
    } else if (j.is_array()) {
        if (j.size() != a.size()) fail("/", "expected one image per atom");
        for (std::size_t i = 0; i < j.size(); ++i) iso[i] = target(j[i], "/" + std::to_string(i));
    } else {
        fail("/", "expected an object or an array");
    }
    validate_iso(a, b, iso);
    return iso;
}

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + " (" + e.what() + ")");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace arrlie::io
