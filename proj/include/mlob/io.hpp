#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mlob/branching.hpp"
#include "mlob/decomposition.hpp"
#include "mlob/digraph.hpp"

namespace mlob {

/// Malformed input text. `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// A file could not be opened, read or written.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edge list: header "n m", then m lines "u v". Blank lines and lines
/// starting with '#' are ignored.
Digraph parse_edge_list(std::string_view text);
/// Canonical edge list: arcs in lexicographic order, one per line.
std::string to_edge_list(const Digraph& d);

/// {"n": 3, "arcs": [[0,1],[1,2]]}
Digraph parse_digraph_json(std::string_view text);
std::string to_json(const Digraph& d);

/// Edge list or JSON, chosen by the first non-blank character.
Digraph parse_digraph(std::string_view text);

std::string to_dot(const Digraph& d);

/// {"root": r, "parent": {"v": p, ...}} over a host of n vertices.
OutBranching parse_branching_json(std::string_view text, int n);
std::string to_json(const OutBranching& t);
/// The digraph with tree arcs bold and leaves drawn as double circles.
std::string to_dot(const Digraph& d, const OutBranching& t);

/// {"bags": [[0,1],[1,2]]}
PathDecomposition parse_pd_json(std::string_view text);
std::string to_json(const PathDecomposition& p);
/// One bag per line, vertices separated by spaces; '#' lines are comments.
PathDecomposition parse_pd_text(std::string_view text);
std::string to_pd_text(const PathDecomposition& p);
/// JSON or .pd text, chosen by the first non-blank character.
PathDecomposition parse_pd(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace mlob
