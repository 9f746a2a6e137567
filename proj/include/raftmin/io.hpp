#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "raftmin/energy.hpp"
#include "raftmin/grid.hpp"

namespace raftmin {

/// RAFTFIELD v1: header line "RAFTFIELD v1 d n1 [n2 [n3]] boundary" followed
/// by row-major IEEE-754 little-endian 64-bit values. Extents are not part of
/// the format; the reader takes them from the run configuration.
void write_raftfield(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_raftfield(const std::filesystem::path& path, const std::vector<double>& extents);
/// Reads onto an existing grid, validating dims/counts/boundary.
ScalarField read_raftfield(const std::filesystem::path& path, GridPtr grid);

/// Index-column CSV for d <= 2 fields ("i,value" / "i,j,value").
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

/// Deterministic CSV writing: doubles via %.17g.
std::string format_double(double v);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string breakdown_kv(const EnergyBreakdown& b);
std::string breakdown_csv_header();
std::string breakdown_csv_row(const EnergyBreakdown& b);

/// Flat key-value config with [section] headers and '#' comments. Keys are
/// flattened to "section.key"; writing emits sections in sorted key order.
using KeyValueMap = std::map<std::string, std::string>;
KeyValueMap parse_key_value_file(const std::filesystem::path& path);
KeyValueMap parse_key_value_text(const std::string& text);
void write_key_value_file(const std::filesystem::path& path, const KeyValueMap& map);
std::string render_key_value(const KeyValueMap& map);

}  // namespace raftmin
