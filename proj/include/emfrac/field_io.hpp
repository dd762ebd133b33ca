#ifndef EMFRAC_FIELD_IO_HPP
#define EMFRAC_FIELD_IO_HPP

#include <iosfwd>
#include <string>

#include "emfrac/grid.hpp"

namespace emfrac {

/// CSV layout: line 1 is the header "nx,ny,h", line 2 the three values,
/// then one row of nx comma-separated values per j (row-major, j ascending).
/// Floats are printed with 17 significant digits so files diff bit-stably.
void write_field_csv(std::ostream& os, const ScalarField& field);
void write_field_csv(const std::string& path, const ScalarField& field);
void write_field_csv(const std::string& path, const DamageField& field);

/// Reads a field CSV written by write_field_csv. The physical extents are
/// reconstructed from nx, ny and h.
ScalarField read_field_csv(std::istream& is);
ScalarField read_field_csv(const std::string& path);

/// VTK legacy STRUCTURED_POINTS writer for visualization.
void write_field_vtk(const std::string& path, const ScalarField& field,
                     const std::string& name);
void write_field_vtk(const std::string& path, const DamageField& field,
                     const std::string& name);

/// 17-significant-digit formatting used by every emitter.
std::string format_double(double v);

}  // namespace emfrac

#endif
