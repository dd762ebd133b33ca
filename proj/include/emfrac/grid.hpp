#ifndef EMFRAC_GRID_HPP
#define EMFRAC_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "emfrac/errors.hpp"

namespace emfrac {

/// Structured rectangular grid with uniform square cells.
/// Node (i,j) sits at (i*h, j*h); i runs along x (0..nx-1), j along y.
/// Cells are indexed (i,j) with i in 0..nx-2, j in 0..ny-2.
struct Grid2 {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double h = 0.0;

    int node_count() const { return nx * ny; }
    int cell_nx() const { return nx - 1; }
    int cell_ny() const { return ny - 1; }
    int cell_count() const { return (nx - 1) * (ny - 1); }

    int node_id(int i, int j) const { return j * nx + i; }
    int cell_id(int i, int j) const { return j * (nx - 1) + i; }

    double x(int i) const { return i * h; }
    double y(int j) const { return j * h; }

    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }

    bool same_as(const Grid2& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

/// Builds a grid and checks the square-cell requirement h_x == h_y.
Grid2 build_grid(int nx, int ny, double lx, double ly);

enum class Label : unsigned char { Interior = 0, GammaU1, GammaU2, GammaF };

enum class Edge { Bottom, Top, Left, Right };

/// Edge-to-label assignment for the four rectangle edges.
struct EdgeSpec {
    Label bottom = Label::Interior;
    Label top = Label::Interior;
    Label left = Label::Interior;
    Label right = Label::Interior;
};

/// Complete labeling of the boundary nodes. Corner nodes adjacent to a
/// Dirichlet edge take the Dirichlet label (GammaU1 beats GammaU2 beats
/// GammaF) so the discrete Dirichlet problem stays well posed.
struct BoundaryPartition {
    std::vector<Label> label;  // per node; Interior for non-boundary nodes
    int count_u1 = 0;
    int count_u2 = 0;
    int count_f = 0;

    Label at(int node) const { return label[node]; }
    bool is_dirichlet(int node) const {
        return label[node] == Label::GammaU1 || label[node] == Label::GammaU2;
    }
    int boundary_count() const { return count_u1 + count_u2 + count_f; }
};

BoundaryPartition partition_boundary(const Grid2& grid, const EdgeSpec& spec);

/// Nodal scalar field (anti-plane displacement). Values are row-major,
/// index j*nx + i. All entries must be finite.
class ScalarField {
  public:
    explicit ScalarField(const Grid2& grid, double fill = 0.0);
    ScalarField(const Grid2& grid, std::vector<double> values);

    const Grid2& grid() const { return grid_; }
    double& operator()(int i, int j) { return values_[grid_.node_id(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.node_id(i, j)]; }
    double& operator[](int node) { return values_[node]; }
    double operator[](int node) const { return values_[node]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max_abs() const;
    void check_finite() const;

  private:
    Grid2 grid_;
    std::vector<double> values_;
};

enum class RangePolicy { Reject, Clamp };

/// Nodal damage field v in [0,1]; v = 1 intact, v = 0 fully cracked.
class DamageField {
  public:
    explicit DamageField(const Grid2& grid, double fill = 1.0);
    DamageField(const Grid2& grid, std::vector<double> values,
                RangePolicy policy = RangePolicy::Reject);

    const Grid2& grid() const { return grid_; }
    double& operator()(int i, int j) { return values_[grid_.node_id(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.node_id(i, j)]; }
    double& operator[](int node) { return values_[node]; }
    double operator[](int node) const { return values_[node]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Mean of the four corner values of cell (ci,cj).
    double cell_mean(int ci, int cj) const;

  private:
    Grid2 grid_;
    std::vector<double> values_;
};

/// Per-cell 2-vector field (gradients, stresses). Row-major over cells.
struct CellVectorField {
    Grid2 grid;
    std::vector<double> x;  // component along x, size (nx-1)*(ny-1)
    std::vector<double> y;

    explicit CellVectorField(const Grid2& g)
        : grid(g), x(g.cell_count(), 0.0), y(g.cell_count(), 0.0) {}
};

/// Cell-centered bilinear gradient of a nodal field; exact for linear fields.
CellVectorField cell_gradient(const ScalarField& u);

void require_same_grid(const Grid2& a, const Grid2& b, const char* what);

}  // namespace emfrac

#endif
