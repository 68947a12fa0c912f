#include "arrlie/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace arrlie;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run arrlie_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "arrlie");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "arrlie-cli-test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string catalog_file(const std::string& name, int k) {
    auto r = arrlie_cli({"catalog", name, std::to_string(k)});
    REQUIRE(r.code == 0);
    return write(name + std::to_string(k) + ".json", r.out);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("documented examples") {
    auto p3 = catalog_file("pencil", 3);
    CHECK(arrlie_cli({"betti", p3}).out == "{\"b1\":3,\"b2\":2}\n");
    CHECK(arrlie_cli({"witt", "--alphabet", "1", "--max-degree", "3"}).out == "[1,0,0]\n");
    auto b4 = catalog_file("braid", 4);
    auto d = arrlie_cli({"decomp", b4});
    CHECK(d.code == 1);
    CHECK(d.out.find("\"r_global\":10,\"r_local\":8") != std::string::npos);
    CHECK(d.out.find("\"decomposable\":false") != std::string::npos);
    CHECK(arrlie_cli({"falk", b4}).out == "10\n");
}

TEST_CASE("catalog files round trip through the parser") {
    auto path = catalog_file("braid", 5);
    auto r = arrlie_cli({"lattice", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"b2\"") != std::string::npos);
    auto out = scratch() / "cat";
    CHECK(arrlie_cli({"catalog", "near_pencil", "5", "--out", out.string()}).code == 0);
    CHECK(fs::exists(out / "near_pencil5.json"));
}

TEST_CASE("exit codes") {
    auto bad = write("bad.json", "{\"atoms\": [\"a\", ");
    auto r = arrlie_cli({"betti", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.json") != std::string::npos);
    auto inv = write("inv.json", R"({"atoms":["a","b","c"],"pencils":[[0,1],[0,7]]})");
    CHECK(arrlie_cli({"betti", inv}).code == 2);
    CHECK(arrlie_cli({"frobnicate"}).code == 2);
    CHECK(arrlie_cli({"holonomy", inv, "--ring", "fp:4"}).code == 2);
    CHECK(arrlie_cli({"betti", (scratch() / "missing.json").string()}).code == 2);
    auto b4 = catalog_file("braid", 4);
    CHECK(arrlie_cli({"lcs", b4}).code == 2);
    CHECK(arrlie_cli({"h2check", b4}).code == 0);
    CHECK(arrlie_cli({"nq2", b4}).code == 0);
    CHECK(arrlie_cli({"kinv", b4}).code == 0);
}

TEST_CASE("holonomy from a presentation") {
    auto p = write("pres.json", R"({"generators":2,"relators":["xxyXXY"]})");
    auto r = arrlie_cli({"holonomy", p, "--max-degree", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"2\":{\"rank\":0,\"torsion\":[2]}") != std::string::npos);
    CHECK(r.out.find("\"entries\":[[2]]") != std::string::npos);
}

TEST_CASE("table output") {
    auto b4 = catalog_file("braid", 4);
    auto r = arrlie_cli({"holonomy", b4, "--max-degree", "3", "--table"});
    CHECK(r.code == 0);
    CHECK(r.out.find("rank") != std::string::npos);
    CHECK(r.out.find("10") != std::string::npos);
}

TEST_CASE("nq2 words") {
    auto g3 = catalog_file("pencil", 3);
    auto r = arrlie_cli({"nq2", g3, "--word", "H1.H2.H1^-1.H2^-1", "--word", "H1^2.H1^-2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"identity\":false") != std::string::npos);
    CHECK(r.out.find("\"identity\":true") != std::string::npos);
    CHECK(arrlie_cli({"nq2", g3, "--word", "H7"}).code == 2);
}

TEST_CASE("verify-iso writes an audit bundle") {
    auto p3 = catalog_file("pencil", 3);
    auto dir = scratch() / "audit";
    fs::remove_all(dir);
    auto r = arrlie_cli({"verify-iso", p3, p3, "--iso", R"({"H1":"H2","H2":"H3","H3":"H1"})", "--degree", "4",
                         "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "audit.json"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(slurp((dir / "audit.json").string()).find("\"g2\"") != std::string::npos);
    auto iso_file = write("iso.json", "[1,2,0]");
    CHECK(arrlie_cli({"verify-iso", p3, p3, "--iso", iso_file, "--ring", "fp:2"}).code == 0);
    CHECK(arrlie_cli({"verify-iso", p3, p3, "--iso", "[0,0,1]"}).code == 2);
}

TEST_CASE("reports are reproducible across runs and thread counts") {
    auto b4 = catalog_file("braid", 4);
    auto a = scratch() / "r1.json", b = scratch() / "r8.json";
    CHECK(arrlie_cli({"holonomy", b4, "--max-degree", "4", "--threads", "1", "--report", a.string()}).code == 0);
    CHECK(arrlie_cli({"holonomy", b4, "--max-degree", "4", "--threads", "8", "--report", b.string()}).code == 0);
    CHECK(slurp(a.string()) == slurp(b.string()));
    CHECK(slurp(a.string()).find("sha256") != std::string::npos);
}
