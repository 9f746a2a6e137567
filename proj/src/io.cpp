#include "raftmin/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace raftmin {

namespace {

void require_io(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

static_assert(std::endian::native == std::endian::little,
              "RAFTFIELD writer assumes a little-endian host");

}  // namespace

void write_raftfield(const std::filesystem::path& path, const ScalarField& field) {
    const Grid& grid = *field.grid();
    std::ofstream out(path, std::ios::binary);
    require_io(out.good(), "cannot open " + path.string());

    out << "RAFTFIELD v1 " << grid.dims();
    for (int a = 0; a < grid.dims(); ++a) out << ' ' << grid.axis(a).n;
    out << ' ' << to_string(grid.boundary()) << '\n';
    out.write(reinterpret_cast<const char*>(field.values().data()),
              static_cast<std::streamsize>(field.size() * sizeof(double)));
    require_io(out.good(), "write failed for " + path.string());
}

namespace {

ScalarField read_raftfield_impl(const std::filesystem::path& path,
                                const std::function<GridPtr(int, const std::vector<int>&,
                                                            BoundaryKind)>& make_grid) {
    std::ifstream in(path, std::ios::binary);
    require_io(in.good(), "cannot open " + path.string());

    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, version;
    int dims = 0;
    hs >> magic >> version >> dims;
    require_io(magic == "RAFTFIELD" && version == "v1", "bad RAFTFIELD header in " + path.string());
    require_io(dims >= 1 && dims <= 3, "bad dimension in " + path.string());
    std::vector<int> n(static_cast<std::size_t>(dims));
    for (int a = 0; a < dims; ++a) hs >> n[static_cast<std::size_t>(a)];
    std::string boundary_name;
    hs >> boundary_name;
    require_io(!hs.fail(), "truncated RAFTFIELD header in " + path.string());

    GridPtr grid = make_grid(dims, n, boundary_from_string(boundary_name));
    std::vector<double> values(grid->size());
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    require_io(in.gcount() == static_cast<std::streamsize>(values.size() * sizeof(double)),
               "truncated RAFTFIELD payload in " + path.string());
    return ScalarField(std::move(grid), std::move(values));
}

}  // namespace

ScalarField read_raftfield(const std::filesystem::path& path, const std::vector<double>& extents) {
    return read_raftfield_impl(path, [&](int dims, const std::vector<int>& n, BoundaryKind b) {
        require_io(static_cast<int>(extents.size()) == dims,
                   "extent count does not match field dimension in " + path.string());
        return Grid::make(extents, n, b);
    });
}

ScalarField read_raftfield(const std::filesystem::path& path, GridPtr grid) {
    return read_raftfield_impl(path, [&](int dims, const std::vector<int>& n, BoundaryKind b) {
        require_io(dims == grid->dims(), "field dimension mismatch in " + path.string());
        for (int a = 0; a < dims; ++a) {
            require_io(n[static_cast<std::size_t>(a)] == grid->axis(a).n,
                       "field size mismatch in " + path.string());
            require_io(b == grid->axis(a).boundary, "boundary mismatch in " + path.string());
        }
        return grid;
    });
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
    const Grid& grid = *field.grid();
    require_io(grid.dims() <= 2, "CSV field dumps cover d <= 2 only");
    std::ofstream out(path);
    require_io(out.good(), "cannot open " + path.string());
    if (grid.dims() == 1) {
        out << "i,value\n";
        for (std::size_t i = 0; i < field.size(); ++i) {
            out << i << ',' << format_double(field[i]) << '\n';
        }
    } else {
        out << "i,j,value\n";
        const int n1 = grid.axis(1).n;
        for (std::size_t i = 0; i < field.size(); ++i) {
            out << i / static_cast<std::size_t>(n1) << ',' << i % static_cast<std::size_t>(n1)
                << ',' << format_double(field[i]) << '\n';
        }
    }
    require_io(out.good(), "write failed for " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    require_io(out.good(), "cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << format_double(row[i]) << (i + 1 < row.size() ? ',' : '\n');
        }
    }
    require_io(out.good(), "write failed for " + path.string());
}

std::string breakdown_kv(const EnergyBreakdown& b) {
    std::ostringstream out;
    out << "total = " << format_double(b.total) << '\n';
    for (const auto& [name, value] : b.terms()) {
        out << name << " = " << format_double(value) << '\n';
    }
    out << "flux_violation = " << (b.flux_violation ? "true" : "false") << '\n';
    out << "flux_score = " << format_double(b.flux_score) << '\n';
    return out.str();
}

std::string breakdown_csv_header() {
    std::string h = "total";
    EnergyBreakdown b{};
    for (const auto& [name, value] : b.terms()) {
        h += ',';
        h += name;
    }
    return h + "\n";
}

std::string breakdown_csv_row(const EnergyBreakdown& b) {
    std::string r = format_double(b.total);
    for (const auto& [name, value] : b.terms()) {
        r += ',';
        r += format_double(value);
    }
    return r + "\n";
}

KeyValueMap parse_key_value_text(const std::string& text) {
    KeyValueMap map;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require_io(line.back() == ']', "bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        require_io(eq != std::string::npos, "expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require_io(!key.empty(), "empty key at line " + std::to_string(lineno));
        map[section.empty() ? key : section + "." + key] = value;
    }
    return map;
}

KeyValueMap parse_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require_io(in.good(), "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_value_text(buf.str());
}

std::string render_key_value(const KeyValueMap& map) {
    std::ostringstream out;
    std::string section;
    bool first = true;
    for (const auto& [key, value] : map) {
        const auto dot = key.find('.');
        const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
        const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (sec != section || first) {
            if (!first) out << '\n';
            if (!sec.empty()) out << '[' << sec << "]\n";
            section = sec;
        }
        out << name << " = " << value << '\n';
        first = false;
    }
    return out.str();
}

void write_key_value_file(const std::filesystem::path& path, const KeyValueMap& map) {
    std::ofstream out(path);
    require_io(out.good(), "cannot open " + path.string());
    out << render_key_value(map);
    require_io(out.good(), "write failed for " + path.string());
}

}  // namespace raftmin
