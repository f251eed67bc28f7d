#include "axeuler/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace axeuler::io {

std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

struct Row {
  std::size_t line;
  std::vector<double> fields;
};

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
  return s.substr(k);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(strip(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + cols[k];
  return s;
}

double parse_number(const std::string& cell, std::size_t line) {
  double x = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (cell.empty() || res.ec != std::errc() || res.ptr != last)
    throw SchemaError("line " + std::to_string(line) + ": '" + cell + "' is not a number");
  if (!std::isfinite(x)) throw SchemaError("line " + std::to_string(line) + ": non-finite value '" + cell + "'");
  return x;
}

std::vector<Row> read_table(std::istream& is, const std::vector<std::string>& header) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!strip(line).empty()) break;
  }
  if (strip(line).empty()) throw SchemaError("empty input: expected header '" + join(header) + "'");
  if (split(strip(line)) != header)
    throw SchemaError("line " + std::to_string(line_no) + ": expected header '" + join(header) + "', got '" +
                      strip(line) + "'");
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    ++line_no;
    const auto s = strip(line);
    if (s.empty()) continue;
    const auto cells = split(s);
    if (cells.size() != header.size())
      throw SchemaError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " columns, got " + std::to_string(cells.size()));
    Row row{line_no, {}};
    for (const auto& c : cells) row.fields.push_back(parse_number(c, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

// Grid for the rows, with every row checked against its node.
CylGrid grid_of(const std::vector<Row>& rows) {
  std::vector<Point> nodes;
  nodes.reserve(rows.size());
  for (const auto& row : rows) nodes.push_back({row.fields[0], row.fields[1]});
  try {
    return infer_grid(nodes);
  } catch (const SchemaError& e) {
    // infer_grid reports a node index; translate it to a file line.
    const std::string msg = e.what();
    const auto at = msg.find("node ");
    if (at != std::string::npos) {
      const std::size_t idx = std::stoul(msg.substr(at + 5));
      if (idx < rows.size()) throw SchemaError("line " + std::to_string(rows[idx].line) + ": " + msg.substr(msg.find(':') + 2));
    }
    throw;
  }
}

}  // namespace

CylGrid infer_grid(const std::vector<Point>& nodes) {
  if (nodes.size() < 4) throw SchemaError("grid needs at least 2 x 2 nodes, got " + std::to_string(nodes.size()));
  std::size_t nz = 1;
  while (nz < nodes.size() && nodes[nz].r == nodes[0].r) ++nz;
  if (nz < 2 || nodes.size() % nz != 0)
    throw SchemaError("node " + std::to_string(nz) + ": rows are not a rectangular z-fastest grid");
  const std::size_t nr = nodes.size() / nz;
  if (nr < 2) throw SchemaError("node 0: grid needs at least 2 radial nodes");

  const double hr = nodes[nz].r - nodes[0].r;
  const double hz = nodes[1].z - nodes[0].z;
  if (!(hr > 0.0) || !(hz > 0.0)) throw SchemaError("node 1: coordinates must increase");
  if (!close(nodes[0].r, 0.5 * hr, hr)) throw SchemaError("node 0: first radius is not a cell center (h_r / 2)");
  // Checked against the spacing of the first nodes, so an error points at the first bad row.
  const CylGrid grid(hr * static_cast<double>(nr), nodes[0].z - 0.5 * hz, nodes[nz - 1].z + 0.5 * hz, nr, nz);

  const double scale_r = grid.hr();
  const double scale_z = grid.hz();
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      const std::size_t k = grid.index(i, j);
      if (!close(nodes[k].r, grid.r(i), scale_r) || !close(nodes[k].z, grid.z(j), scale_z))
        throw SchemaError("node " + std::to_string(k) + ": (" + format_exact(nodes[k].r) + ", " +
                          format_exact(nodes[k].z) + ") is off the uniform grid");
    }
  }
  // Extents from the outermost nodes, which round better: r_0 + r_last = nr h_r.
  const double half_z = 0.5 * (nodes[nz - 1].z - nodes[0].z) / static_cast<double>(nz - 1);
  return CylGrid(nodes[0].r + nodes.back().r, nodes[0].z - half_z, nodes[nz - 1].z + half_z, nr, nz);
}

void write_scalar_field(std::ostream& os, const ScalarField& f) {
  const auto& g = f.grid;
  os << "r,z,value\n";
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j)
      os << format_exact(g.r(i)) << ',' << format_exact(g.z(j)) << ',' << format_exact(f.at(i, j)) << '\n';
}

void write_vector_field(std::ostream& os, const VectorFieldRZ& u) {
  const auto& g = u.grid;
  os << "r,z,ur,uz\n";
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const std::size_t k = g.index(i, j);
      os << format_exact(g.r(i)) << ',' << format_exact(g.z(j)) << ',' << format_exact(u.ur[k]) << ','
         << format_exact(u.uz[k]) << '\n';
    }
  }
}

void write_velocity_samples(std::ostream& os, const biot_savart::VelocitySamples& v) {
  os << "r,z,ur,uz\n";
  for (std::size_t k = 0; k < v.points.size(); ++k)
    os << format_exact(v.points[k].r) << ',' << format_exact(v.points[k].z) << ',' << format_exact(v.ur[k]) << ','
       << format_exact(v.uz[k]) << '\n';
}

void write_particles(std::ostream& os, const simulator::ParticleSet& p) {
  os << "r,z,eta,volume\n";
  for (std::size_t k = 0; k < p.size(); ++k)
    os << format_exact(p.positions()[k].r) << ',' << format_exact(p.positions()[k].z) << ','
       << format_exact(p.eta()[k]) << ',' << format_exact(p.volume()[k]) << '\n';
}

void write_diagnostics_header(std::ostream& os) {
  os << "t,omega_sup,l21,ur_over_r_sup,envelope,kinetic,axis_reflections\n";
}

void write_diagnostics_row(std::ostream& os, const simulator::DiagnosticsRecord& r) {
  os << format_exact(r.t) << ',' << format_exact(r.omega_sup) << ',' << format_exact(r.l21) << ','
     << format_exact(r.ur_over_r_sup) << ',' << format_exact(r.envelope) << ',' << format_exact(r.kinetic) << ','
     << r.axis_reflections << '\n';
}

ScalarField read_scalar_field(std::istream& is) {
  const auto rows = read_table(is, {"r", "z", "value"});
  const CylGrid grid = grid_of(rows);
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& row : rows) values.push_back(row.fields[2]);
  return ScalarField(grid, std::move(values));
}

VectorFieldRZ read_vector_field(std::istream& is) {
  const auto rows = read_table(is, {"r", "z", "ur", "uz"});
  const CylGrid grid = grid_of(rows);
  std::vector<double> ur;
  std::vector<double> uz;
  for (const auto& row : rows) {
    ur.push_back(row.fields[2]);
    uz.push_back(row.fields[3]);
  }
  return VectorFieldRZ(grid, std::move(ur), std::move(uz));
}

std::vector<Point> read_targets(std::istream& is) {
  const auto rows = read_table(is, {"r", "z"});
  std::vector<Point> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back({row.fields[0], row.fields[1]});
  return out;
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_scalar_field(in);
}

std::vector<Point> read_targets(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_targets(in);
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

}  // namespace axeuler::io
