#pragma once

#include "arrlie/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arrlie::cli {

enum class Format { Json, Table };

struct RunConfig {
    std::string command;
    std::vector<std::string> files;
    std::string ring = "z";
    std::optional<std::size_t> max_degree;
    std::optional<std::size_t> degree;
    std::optional<std::size_t> alphabet;
    Format format = Format::Json;
    std::optional<std::size_t> guard;
    std::optional<std::string> out_dir;
    std::optional<std::string> report_path;
    std::size_t threads = 1;
    bool timing = false;
    std::vector<std::string> words;  // nq2
    std::string iso;                 // verify-iso: inline JSON or a path
    std::string catalog_name;
    std::size_t catalog_param = 0;
};

struct Report {
    /// Reproducible part: command echo, input digests, result, verdict.
    io::Json payload;
    /// What goes to stdout.
    std::string text;
    int exit_code = 0;
    double seconds = 0;
};

/// Throws InputError for bad configurations or inputs.
Report run(const RunConfig& config);

/// Full process behaviour: parse argv, run, print, write --report and --out files.
/// Returns the exit code (0 success, 1 verdict failed, 2 input error).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arrlie::cli
