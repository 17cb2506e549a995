#include "kaccess/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "kaccess/error.hpp"

namespace kaccess::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) return true;
    }
    return false;
}

std::string_view after_key(std::string_view field, std::string_view key, std::size_t lineno) {
    field = trim(field);
    if (field.substr(0, key.size()) != key || field.size() <= key.size() || field[key.size()] != '=') {
        throw ParseError(fmt::format("line {}: expected '{}=<value>', got '{}'", lineno, key, field));
    }
    return field.substr(key.size() + 1);
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.16e}", v); }

double parse_real(std::string_view text) {
    text = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("not a real number: '{}'", text));
    }
    return v;
}

std::size_t parse_index(std::string_view text) {
    text = trim(text);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("not a non-negative integer: '{}'", text));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void write_matrix_csv(std::ostream& out, const AccessibilityMatrix& a) {
    out << "n=" << a.size() << ",floor=" << format_real(a.floor()) << '\n';
    std::string row;
    for (std::size_t i = 0; i < a.size(); ++i) {
        row.clear();
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j) row += ',';
            row += format_real(a(i, j));
        }
        out << row << '\n';
    }
}

AccessibilityMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno)) throw ParseError("empty matrix file");
    auto header = split(trim(line));
    if (header.size() != 2) {
        throw ParseError(fmt::format("line {}: expected header 'n=<n>,floor=<floor>'", lineno));
    }
    const std::size_t n = parse_index(after_key(header[0], "n", lineno));
    const double floor = parse_real(after_key(header[1], "floor", lineno));
    if (n == 0) throw ParseError("matrix header declares n=0");

    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_line(in, line, lineno)) {
            throw ParseError(fmt::format("expected {} matrix rows, found {}", n, i));
        }
        auto fields = split(trim(line));
        if (fields.size() != n) {
            throw ParseError(fmt::format("line {}: expected {} values, found {}", lineno, n, fields.size()));
        }
        for (auto f : fields) {
            try {
                entries.push_back(parse_real(f));
            } catch (const ParseError& e) {
                throw ParseError(fmt::format("line {}: {}", lineno, e.what()));
            }
        }
    }
    if (next_line(in, line, lineno)) {
        throw ParseError(fmt::format("line {}: trailing data after {} rows", lineno, n));
    }
    AccessibilityMatrix a(n, std::move(entries), floor);
    require_valid(a);
    return a;
}

nlohmann::json matrix_to_json(const AccessibilityMatrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto r = a.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"n", a.size()}, {"floor", a.floor()}, {"entries", std::move(rows)}};
}

AccessibilityMatrix matrix_from_json(const nlohmann::json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const auto floor = j.at("floor").get<double>();
        const auto& rows = j.at("entries");
        if (n == 0 || rows.size() != n) {
            throw ParseError(fmt::format("matrix JSON: n={} but {} rows", n, rows.size()));
        }
        std::vector<double> entries;
        entries.reserve(n * n);
        for (const auto& r : rows) {
            if (r.size() != n) throw ParseError(fmt::format("matrix JSON: row of length {}, expected {}", r.size(), n));
            for (const auto& v : r) entries.push_back(v.get<double>());
        }
        AccessibilityMatrix a(n, std::move(entries), floor);
        require_valid(a);
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("matrix JSON: ") + e.what());
    }
}

void save_matrix(const std::filesystem::path& path, const AccessibilityMatrix& a) {
    if (path.extension() == ".json") {
        write_file(path, dump_json(matrix_to_json(a)));
        return;
    }
    std::ostringstream out;
    write_matrix_csv(out, a);
    write_file(path, out.str());
}

AccessibilityMatrix load_matrix(const std::filesystem::path& path) {
    if (path.extension() == ".json") return matrix_from_json(load_json(path));
    std::istringstream in(read_file(path));
    return read_matrix_csv(in);
}

void write_states_csv(std::ostream& out, const std::vector<StateVector>& states) {
    const std::size_t dim = states.empty() ? 0 : states.front().values.size();
    out << "id";
    if (dim == 2) {
        out << ",x,u";
    } else {
        for (std::size_t f = 0; f < dim; ++f) out << ",f" << f;
    }
    out << '\n';
    for (const auto& s : states) {
        out << s.id;
        for (double v : s.values) out << ',' << format_real(v);
        out << '\n';
    }
}

std::vector<StateVector> read_states_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno)) throw ParseError("empty states file");
    auto header = split(trim(line));
    if (header.size() < 2 || trim(header[0]) != "id") {
        throw ParseError("states CSV must start with header 'id,...'");
    }
    const std::size_t dim = header.size() - 1;
    std::vector<StateVector> states;
    while (next_line(in, line, lineno)) {
        auto fields = split(trim(line));
        if (fields.size() != dim + 1) {
            throw ParseError(fmt::format("line {}: expected {} fields, found {}", lineno, dim + 1, fields.size()));
        }
        StateVector s;
        s.id = parse_index(fields[0]);
        for (std::size_t f = 1; f < fields.size(); ++f) s.values.push_back(parse_real(fields[f]));
        states.push_back(std::move(s));
    }
    auto report = validate_states(states);
    if (!report.ok()) throw InvariantError("invalid states: " + report.summary());
    return states;
}

void write_labels_csv(std::ostream& out, const std::vector<std::size_t>& labels) {
    out << "index,group\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<std::size_t> read_labels_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno) || trim(line) != "index,group") {
        throw ParseError("labels CSV must start with header 'index,group'");
    }
    std::vector<std::size_t> labels;
    while (next_line(in, line, lineno)) {
        auto fields = split(trim(line));
        if (fields.size() != 2) throw ParseError(fmt::format("line {}: expected 2 fields", lineno));
        if (parse_index(fields[0]) != labels.size()) {
            throw ParseError(fmt::format("line {}: indices must be consecutive from 0", lineno));
        }
        labels.push_back(parse_index(fields[1]));
    }
    return labels;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

nlohmann::json load_json(const std::filesystem::path& path) {
    auto text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace kaccess::io
