#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "kaccess/access.hpp"

namespace kaccess::io {

/// Fixed 17-significant-digit scientific notation; parses back bit-exactly.
std::string format_real(double v);
double parse_real(std::string_view text);
std::size_t parse_index(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Matrix CSV: header line `n=<n>,floor=<floor>` followed by n rows of n values.
void write_matrix_csv(std::ostream& out, const AccessibilityMatrix& a);
/// Throws ParseError on malformed text and InvariantError when the parsed
/// matrix fails validate_matrix.
AccessibilityMatrix read_matrix_csv(std::istream& in);

nlohmann::json matrix_to_json(const AccessibilityMatrix& a);
AccessibilityMatrix matrix_from_json(const nlohmann::json& j);

/// Dispatches on extension: `.json` uses the JSON variant, anything else CSV.
void save_matrix(const std::filesystem::path& path, const AccessibilityMatrix& a);
AccessibilityMatrix load_matrix(const std::filesystem::path& path);

// States CSV: `id,x,u` for two-feature states, `id,f0,f1,...` otherwise.
void write_states_csv(std::ostream& out, const std::vector<StateVector>& states);
std::vector<StateVector> read_states_csv(std::istream& in);

// Labels sidecar: `index,group`.
void write_labels_csv(std::ostream& out, const std::vector<std::size_t>& labels);
std::vector<std::size_t> read_labels_csv(std::istream& in);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

nlohmann::json load_json(const std::filesystem::path& path);
/// Two-space indented dump with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace kaccess::io
