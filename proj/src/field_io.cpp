#include "emfrac/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace emfrac {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_values_csv(std::ostream& os, const Grid2& g,
                      const std::vector<double>& values) {
    os << "nx,ny,h\n";
    os << g.nx << "," << g.ny << "," << format_double(g.h) << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) os << ",";
            os << format_double(values[g.node_id(i, j)]);
        }
        os << "\n";
    }
}

void write_values_vtk(const std::string& path, const Grid2& g,
                      const std::vector<double>& values, const std::string& name) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "# vtk DataFile Version 3.0\n"
       << name << "\n"
       << "ASCII\n"
       << "DATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << g.nx << " " << g.ny << " 1\n"
       << "ORIGIN 0 0 0\n"
       << "SPACING " << format_double(g.h) << " " << format_double(g.h) << " 1\n"
       << "POINT_DATA " << g.node_count() << "\n"
       << "SCALARS " << name << " double 1\n"
       << "LOOKUP_TABLE default\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            os << format_double(values[g.node_id(i, j)]) << "\n";
}

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& field) {
    write_values_csv(os, field.grid(), field.values());
}

void write_field_csv(const std::string& path, const ScalarField& field) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_values_csv(os, field.grid(), field.values());
}

void write_field_csv(const std::string& path, const DamageField& field) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_values_csv(os, field.grid(), field.values());
}

ScalarField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("field CSV: empty stream");
    if (!std::getline(is, line)) throw IoError("field CSV: missing size line");
    int nx = 0, ny = 0;
    double h = 0.0;
    {
        std::istringstream ss(line);
        char c;
        if (!(ss >> nx >> c >> ny >> c >> h))
            throw IoError("field CSV: cannot parse nx,ny,h from '" + line + "'");
    }
    Grid2 g = build_grid(nx, ny, (nx - 1) * h, (ny - 1) * h);
    std::vector<double> values(static_cast<size_t>(g.node_count()), 0.0);
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(is, line))
            throw IoError("field CSV: missing row " + std::to_string(j));
        std::istringstream ss(line);
        std::string cell;
        for (int i = 0; i < nx; ++i) {
            if (!std::getline(ss, cell, ','))
                throw IoError("field CSV: short row " + std::to_string(j));
            values[g.node_id(i, j)] = std::stod(cell);
        }
    }
    return ScalarField(g, std::move(values));
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_field_csv(is);
}

void write_field_vtk(const std::string& path, const ScalarField& field,
                     const std::string& name) {
    write_values_vtk(path, field.grid(), field.values(), name);
}

void write_field_vtk(const std::string& path, const DamageField& field,
                     const std::string& name) {
    write_values_vtk(path, field.grid(), field.values(), name);
}

}  // namespace emfrac
