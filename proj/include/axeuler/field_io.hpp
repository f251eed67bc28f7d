#pragma once

// CSV files for fields, targets, particles and diagnostics.
//
// Numbers are written with 17 significant digits, so a write/read round trip
// reproduces every double bit for bit. Field rows follow the storage order
// (z fastest); the grid is recovered from the node coordinates.

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "axeuler/core_fields.hpp"
#include "axeuler/simulator.hpp"

namespace axeuler::io {

/// Malformed input. The message names the offending line.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g.
std::string format_exact(double x);

/// Shortest decimal that reads back to x, with ".0" on integral values
/// (2 -> "2.0", 0.1 -> "0.1").
std::string format_shortest(double x);

void write_scalar_field(std::ostream& os, const ScalarField& f);
void write_vector_field(std::ostream& os, const VectorFieldRZ& u);
void write_velocity_samples(std::ostream& os, const biot_savart::VelocitySamples& v);
void write_particles(std::ostream& os, const simulator::ParticleSet& p);
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const simulator::DiagnosticsRecord& r);

ScalarField read_scalar_field(std::istream& is);
VectorFieldRZ read_vector_field(std::istream& is);
std::vector<Point> read_targets(std::istream& is);

ScalarField read_scalar_field(const std::filesystem::path& path);
std::vector<Point> read_targets(const std::filesystem::path& path);

/// Grid with the given cell-center coordinates (row-major, z fastest).
/// Throws SchemaError when the nodes are not a uniform cell-centered grid.
CylGrid infer_grid(const std::vector<Point>& nodes);

/// Writes via a temporary file in the same directory and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace axeuler::io
