// Copyright 2026 PermSync Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permsync/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace permsync {

using nlohmann::json;

namespace {

constexpr const char* kQuboMagic = "c permsync-qubo v1";

// 17 significant digits: enough for an exact double round trip, and
// locale-independent through to_chars.
std::string format_coefficient(double value) {
    char buffer[40];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, ptr);
}

int require_positive_int(const json& object, const char* field) {
    if (!object.contains(field) || !object[field].is_number_integer()) {
        throw Error(ErrorCode::ParseError, std::string("missing integer field \"") + field + "\"");
    }
    const int value = object[field].get<int>();
    if (value < 1) throw Error(ErrorCode::ParseError, std::string("field \"") + field + "\" must be positive");
    return value;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

}  // namespace

std::string problem_to_json(const ObservationGraph& g) {
    json edges = json::array();
    // One direction per undirected pair, in sorted order.
    for (const auto& [key, label] : g.edges()) {
        const auto [i, j] = key;
        if (i > j && g.has_edge(j, i)) continue;  // transpose of an exported edge
        json mapping = json::array();
        for (int r = 0; r < label.size(); ++r) mapping.push_back(label.apply(r) + 1);
        edges.push_back({{"i", i + 1}, {"j", j + 1}, {"map", mapping}});
    }
    json root = {{"n", g.points_per_view()}, {"m", g.num_views()}, {"edges", edges}};
    return root.dump(2) + "\n";
}

ObservationGraph problem_from_json(const std::string& text) {
    const json root = parse_json(text);
    if (!root.is_object()) throw Error(ErrorCode::ParseError, "top-level JSON value must be an object");
    const int n = require_positive_int(root, "n");
    const int m = require_positive_int(root, "m");
    if (!root.contains("edges") || !root["edges"].is_array()) {
        throw Error(ErrorCode::ParseError, "missing array field \"edges\"");
    }
    ObservationGraph graph(n, m);
    int index = 0;
    for (const json& edge : root["edges"]) {
        const std::string where = "edge #" + std::to_string(index++);
        if (!edge.is_object()) throw Error(ErrorCode::ParseError, where + ": not an object");
        const int i = require_positive_int(edge, "i");
        const int j = require_positive_int(edge, "j");
        if (i > m || j > m) throw Error(ErrorCode::ParseError, where + ": view index out of range");
        if (i == j) throw Error(ErrorCode::ParseError, where + ": self loop");
        if (!edge.contains("map") || !edge["map"].is_array() || edge["map"].size() != static_cast<std::size_t>(n)) {
            throw Error(ErrorCode::ParseError, where + ": \"map\" must be an array of length n");
        }
        std::vector<int> mapping;
        mapping.reserve(n);
        for (const json& value : edge["map"]) {
            if (!value.is_number_integer()) throw Error(ErrorCode::ParseError, where + ": map entries must be integers");
            mapping.push_back(value.get<int>() - 1);
        }
        try {
            graph.add_edge(i - 1, j - 1, Permutation(std::move(mapping)));
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, where + ": " + e.what());
        }
    }
    return validate_graph(std::move(graph));
}

std::string qubo_to_text(const QuboProblem& q) {
    std::string out;
    out += kQuboMagic;
    out += '\n';
    out += "vars " + std::to_string(q.num_vars) + '\n';
    out += "offset " + format_coefficient(q.offset) + '\n';
    // One pass in (a, b) order; the diagonal line of variable a carries
    // Q_aa + s_a and off-diagonal coefficients are doubled, matching the
    // sum_{a<=b} q_ab x_a x_b convention.
    std::size_t t = 0;
    for (int a = 0; a < q.num_vars; ++a) {
        const double d = q.linear[a] + q.diagonal[a];
        if (d != 0.0) {
            out += std::to_string(a + 1) + ' ' + std::to_string(a + 1) + ' ' + format_coefficient(d) + '\n';
        }
        while (t < q.quadratic.size() && q.quadratic[t].a == a) {
            const QuadTerm& term = q.quadratic[t];
            out += std::to_string(a + 1) + ' ' + std::to_string(term.b + 1) + ' ' +
                   format_coefficient(2.0 * term.value) + '\n';
            ++t;
        }
    }
    return out;
}

QuboProblem qubo_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_number = 0;

    auto fail = [&](const std::string& what) -> Error {
        return Error(ErrorCode::ParseError, "line " + std::to_string(line_number) + ": " + what);
    };

    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty input");
    ++line_number;
    if (line != kQuboMagic) throw fail(std::string("expected header \"") + kQuboMagic + "\"");

    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_number;
            if (line.empty()) continue;
            if (line[0] == 'c' && (line.size() == 1 || line[1] == ' ')) continue;
            return true;
        }
        return false;
    };

    if (!next_content_line() || line.rfind("vars ", 0) != 0) throw fail("expected \"vars <count>\"");
    int num_vars = 0;
    {
        const char* begin = line.c_str() + 5;
        const char* end = line.c_str() + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, num_vars);
        if (ec != std::errc{} || ptr != end || num_vars < 0) throw fail("bad variable count");
    }
    if (!next_content_line() || line.rfind("offset ", 0) != 0) throw fail("expected \"offset <decimal>\"");
    double offset = 0.0;
    {
        const char* begin = line.c_str() + 7;
        const char* end = line.c_str() + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, offset);
        if (ec != std::errc{} || ptr != end) throw fail("bad offset value");
    }

    QuboAccumulator acc(num_vars);
    acc.add_offset(offset);
    while (next_content_line()) {
        const char* cursor = line.c_str();
        const char* end = line.c_str() + line.size();
        int a = 0;
        int b = 0;
        double value = 0.0;
        auto r1 = std::from_chars(cursor, end, a);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') throw fail("expected \"<a> <b> <coeff>\"");
        auto r2 = std::from_chars(r1.ptr + 1, end, b);
        if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ' ') throw fail("expected \"<a> <b> <coeff>\"");
        auto r3 = std::from_chars(r2.ptr + 1, end, value);
        if (r3.ec != std::errc{} || r3.ptr != end) throw fail("bad coefficient");
        if (a < 1 || b < a || b > num_vars) throw fail("indices must satisfy 1 <= a <= b <= vars");
        if (a == b) {
            acc.add_linear(a - 1, value);
        } else {
            acc.add_quadratic(a - 1, b - 1, value / 2.0);
        }
    }
    return acc.build();
}

std::string sparsity_to_pbm(const QuboProblem& q) {
    const int n = q.num_vars;
    std::vector<std::vector<char>> mask(n, std::vector<char>(n, '0'));
    for (int a = 0; a < n; ++a) {
        if (q.diagonal[a] != 0.0) mask[a][a] = '1';
    }
    for (const QuadTerm& term : q.quadratic) {
        mask[term.a][term.b] = '1';
        mask[term.b][term.a] = '1';
    }
    std::string out = "P1\n" + std::to_string(n) + ' ' + std::to_string(n) + '\n';
    for (int r = 0; r < n; ++r) {
        int width = 0;
        for (int c = 0; c < n; ++c) {
            out += mask[r][c];
            if (++width == 64) {  // PBM lines should stay short
                out += '\n';
                width = 0;
            }
        }
        if (width != 0) out += '\n';
    }
    return out;
}

std::string ground_truth_to_json(const GroundTruth& gt) {
    json views = json::array();
    for (const Permutation& x : gt.absolutes) {
        json mapping = json::array();
        for (int r = 0; r < x.size(); ++r) mapping.push_back(x.apply(r) + 1);
        views.push_back(mapping);
    }
    const int n = gt.absolutes.empty() ? 0 : gt.absolutes[0].size();
    json root = {{"n", n}, {"m", static_cast<int>(gt.absolutes.size())}, {"views", views}};
    return root.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(const std::string& text) {
    const json root = parse_json(text);
    const int n = require_positive_int(root, "n");
    const int m = require_positive_int(root, "m");
    if (!root.contains("views") || !root["views"].is_array() || root["views"].size() != static_cast<std::size_t>(m)) {
        throw Error(ErrorCode::ParseError, "\"views\" must be an array of m mappings");
    }
    GroundTruth gt;
    for (const json& view : root["views"]) {
        if (!view.is_array() || view.size() != static_cast<std::size_t>(n)) {
            throw Error(ErrorCode::ParseError, "each view mapping must have length n");
        }
        std::vector<int> mapping;
        for (const json& value : view) mapping.push_back(value.get<int>() - 1);
        try {
            gt.absolutes.emplace_back(std::move(mapping));
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, std::string("bad view mapping: ") + e.what());
        }
    }
    return gt;
}

std::string format_double(double value) {
    char buffer[40];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "failed while reading " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "failed while writing " + path);
}

ObservationGraph import_problem(const std::string& path) { return problem_from_json(read_text_file(path)); }
void export_problem(const ObservationGraph& g, const std::string& path) { write_text_file(path, problem_to_json(g)); }
void export_qubo(const QuboProblem& q, const std::string& path) { write_text_file(path, qubo_to_text(q)); }
QuboProblem import_qubo(const std::string& path) { return qubo_from_text(read_text_file(path)); }
void export_sparsity_pbm(const QuboProblem& q, const std::string& path) { write_text_file(path, sparsity_to_pbm(q)); }
void export_ground_truth(const GroundTruth& gt, const std::string& path) {
    write_text_file(path, ground_truth_to_json(gt));
}
GroundTruth import_ground_truth(const std::string& path) { return ground_truth_from_json(read_text_file(path)); }

}  // namespace permsync
