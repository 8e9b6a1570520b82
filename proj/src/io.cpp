#include "mlob/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace mlob {

using nlohmann::json;

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Line {
    int number;
    std::string_view text;
};

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<Line> split_lines(std::string_view text, bool keep_blank) {
    std::vector<Line> out;
    int number = 0;
    while (!text.empty()) {
        ++number;
        std::size_t end = text.find('\n');
        std::string_view line = trim(text.substr(0, end));
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (!line.empty() && line.front() == '#') continue;
        if (line.empty() && !keep_blank) continue;
        out.push_back({number, line});
    }
    return out;
}

// Whitespace-separated integers; nullopt on any other token.
std::optional<std::vector<long long>> integers(std::string_view s) {
    std::vector<long long> out;
    while (true) {
        s = trim(s);
        if (s.empty()) return out;
        std::size_t end = s.find_first_of(" \t");
        std::string_view token = s.substr(0, end);
        long long value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
        out.push_back(value);
        s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
    }
}

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
    }
}

// Line of the index-th element of the array stored under "key" (best effort).
int element_line(std::string_view text, std::string_view key, std::size_t index) {
    std::string quoted = "\"" + std::string(key) + "\"";
    std::size_t at = text.find(quoted);
    if (at == std::string_view::npos) return 1;
    at = text.find('[', at);
    if (at == std::string_view::npos) return line_of_offset(text, text.size());
    int depth = 0;
    std::size_t seen = 0;
    bool in_string = false;
    for (std::size_t i = at; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        if (c == '[' || c == '{') {
            if (depth == 1 && seen++ == index) return line_of_offset(text, i);
            ++depth;
        } else if (c == ']' || c == '}') {
            if (--depth == 0) break;
        } else if (depth == 1 && c != ',' && c != ' ' && c != '\n' && c != '\t' && c != '\r') {
            if (seen++ == index) return line_of_offset(text, i);
            while (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != ']') ++i;
        }
    }
    return line_of_offset(text, at);
}

// Builds a digraph, reporting the first offending arc by its line.
template <class LineOf>
Digraph checked_digraph(long long n, const std::vector<std::pair<long long, long long>>& raw, LineOf line_of) {
    std::set<Arc> seen;
    std::vector<Arc> arcs;
    arcs.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [u, v] = raw[i];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(line_of(i), "arc (" + std::to_string(u) + "," + std::to_string(v) + ") has an endpoint outside 0.." +
                                             std::to_string(n - 1));
        if (u == v) throw ParseError(line_of(i), "self-loop at vertex " + std::to_string(u));
        Arc a{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (!seen.insert(a).second)
            throw ParseError(line_of(i), "duplicate arc (" + std::to_string(u) + "," + std::to_string(v) + ")");
        arcs.push_back(a);
    }
    return Digraph(static_cast<int>(n), std::move(arcs));
}

constexpr long long kMaxVertices = 100'000'000;

std::string_view first_token(std::string_view text) {
    for (const Line& l : split_lines(text, false)) return l.text;
    return {};
}

}  // namespace

Digraph parse_edge_list(std::string_view text) {
    std::vector<Line> lines = split_lines(text, false);
    if (lines.empty()) throw ParseError(1, "missing header \"n m\"");
    auto header = integers(lines[0].text);
    if (!header || header->size() != 2 || (*header)[0] < 0 || (*header)[1] < 0 || (*header)[0] > kMaxVertices)
        throw ParseError(lines[0].number, "malformed header, expected \"n m\" with non-negative integers");
    const long long n = (*header)[0], m = (*header)[1];
    std::vector<std::pair<long long, long long>> raw;
    std::vector<int> line_numbers;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (static_cast<long long>(raw.size()) == m)
            throw ParseError(lines[i].number, "more arc lines than the header's m = " + std::to_string(m));
        auto pair = integers(lines[i].text);
        if (!pair || pair->size() != 2) throw ParseError(lines[i].number, "malformed arc line, expected \"u v\"");
        raw.emplace_back((*pair)[0], (*pair)[1]);
        line_numbers.push_back(lines[i].number);
    }
    if (static_cast<long long>(raw.size()) < m) {
        int last = lines.back().number;
        throw ParseError(last, "expected " + std::to_string(m) + " arcs, found " + std::to_string(raw.size()));
    }
    return checked_digraph(n, raw, [&](std::size_t i) { return line_numbers[i]; });
}

std::string to_edge_list(const Digraph& d) {
    std::string out = std::to_string(d.n()) + " " + std::to_string(d.m()) + "\n";
    for (auto [u, v] : d.arcs()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

Digraph parse_digraph_json(std::string_view text) {
    json j = parse_json_text(text);
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ParseError(1, "expected an object with integer field \"n\"");
    long long n = j["n"].get<long long>();
    if (n < 0 || n > kMaxVertices) throw ParseError(element_line(text, "n", 0), "\"n\" out of range");
    std::vector<std::pair<long long, long long>> raw;
    if (j.contains("arcs")) {
        const json& arcs = j["arcs"];
        if (!arcs.is_array()) throw ParseError(element_line(text, "arcs", 0), "\"arcs\" must be an array");
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const json& a = arcs[i];
            if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
                throw ParseError(element_line(text, "arcs", i), "arc must be a pair of integers");
            raw.emplace_back(a[0].get<long long>(), a[1].get<long long>());
        }
    }
    return checked_digraph(n, raw, [&](std::size_t i) { return element_line(text, "arcs", i); });
}

std::string to_json(const Digraph& d) {
    json arcs = json::array();
    for (auto [u, v] : d.arcs()) arcs.push_back({u, v});
    return json{{"n", d.n()}, {"arcs", arcs}}.dump() + "\n";
}

Digraph parse_digraph(std::string_view text) {
    std::string_view first = first_token(text);
    if (!first.empty() && first.front() == '{') return parse_digraph_json(text);
    return parse_edge_list(text);
}

std::string to_dot(const Digraph& d) {
    std::ostringstream out;
    out << "digraph D {\n";
    for (Vertex v = 0; v < d.n(); ++v) out << "  " << v << ";\n";
    for (auto [u, v] : d.arcs()) out << "  " << u << " -> " << v << ";\n";
    out << "}\n";
    return out.str();
}

OutBranching parse_branching_json(std::string_view text, int n) {
    json j = parse_json_text(text);
    if (!j.is_object() || !j.contains("root") || !j["root"].is_number_integer() || !j.contains("parent") ||
        !j["parent"].is_object())
        throw ParseError(1, "expected {\"root\": r, \"parent\": {\"v\": p, ...}}");
    long long root = j["root"].get<long long>();
    if (root < 0 || root >= n) throw ParseError(element_line(text, "root", 0), "root outside 0.." + std::to_string(n - 1));
    std::vector<Vertex> parent(n, kAbsent);
    parent[root] = kNoVertex;
    for (auto it = j["parent"].begin(); it != j["parent"].end(); ++it) {
        long long v = -1;
        const std::string& key = it.key();
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
        int line = line_of_offset(text, text.find("\"" + key + "\""));
        if (ec != std::errc() || ptr != key.data() + key.size() || v < 0 || v >= n)
            throw ParseError(line, "parent key \"" + key + "\" is not a vertex");
        if (!it.value().is_number_integer()) throw ParseError(line, "parent of " + key + " must be an integer");
        long long p = it.value().get<long long>();
        if (p < 0 || p >= n) throw ParseError(line, "parent of " + key + " is not a vertex");
        if (v == root) throw ParseError(line, "the root cannot have a parent");
        parent[v] = static_cast<Vertex>(p);
    }
    return OutBranching(static_cast<Vertex>(root), std::move(parent));
}

std::string to_json(const OutBranching& t) {
    json parent = json::object();
    for (Vertex v : t.vertices())
        if (v != t.root()) parent[std::to_string(v)] = t.parent(v);
    return json{{"root", t.root()}, {"parent", parent}}.dump() + "\n";
}

std::string to_dot(const Digraph& d, const OutBranching& t) {
    std::ostringstream out;
    out << "digraph D {\n";
    for (Vertex v = 0; v < d.n(); ++v) {
        out << "  " << v;
        if (v == t.root()) out << " [shape=box]";
        else if (t.is_leaf(v)) out << " [shape=doublecircle, style=filled, fillcolor=lightgreen]";
        out << ";\n";
    }
    for (auto [u, v] : d.arcs()) {
        bool tree = t.contains(v) && t.parent(v) == u;
        out << "  " << u << " -> " << v << (tree ? " [penwidth=2.5]" : " [style=dashed, color=gray]") << ";\n";
    }
    out << "}\n";
    return out.str();
}

PathDecomposition parse_pd_json(std::string_view text) {
    json j = parse_json_text(text);
    if (!j.is_object() || !j.contains("bags") || !j["bags"].is_array())
        throw ParseError(1, "expected {\"bags\": [[...], ...]}");
    PathDecomposition p;
    for (std::size_t i = 0; i < j["bags"].size(); ++i) {
        const json& bag = j["bags"][i];
        if (!bag.is_array()) throw ParseError(element_line(text, "bags", i), "bag must be an array");
        std::vector<Vertex> b;
        for (const json& v : bag) {
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > kMaxVertices)
                throw ParseError(element_line(text, "bags", i), "bag entries must be non-negative integers");
            b.push_back(v.get<Vertex>());
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        p.bags.push_back(std::move(b));
    }
    return p;
}

std::string to_json(const PathDecomposition& p) { return json{{"bags", p.bags}}.dump() + "\n"; }

PathDecomposition parse_pd_text(std::string_view text) {
    PathDecomposition p;
    for (const Line& l : split_lines(text, true)) {
        auto values = integers(l.text);
        if (!values) throw ParseError(l.number, "bag line must hold vertex ids separated by spaces");
        std::vector<Vertex> b;
        for (long long v : *values) {
            if (v < 0 || v > kMaxVertices) throw ParseError(l.number, "vertex id out of range");
            b.push_back(static_cast<Vertex>(v));
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        p.bags.push_back(std::move(b));
    }
    return p;
}

std::string to_pd_text(const PathDecomposition& p) {
    std::string out;
    for (const auto& bag : p.bags) {
        for (std::size_t i = 0; i < bag.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(bag[i]);
        }
        out += '\n';
    }
    return out;
}

PathDecomposition parse_pd(std::string_view text) {
    std::string_view first = first_token(text);
    if (!first.empty() && first.front() == '{') return parse_pd_json(text);
    return parse_pd_text(text);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << content;
    if (!out) throw FileError("write failed for " + path.string());
}

}  // namespace mlob
