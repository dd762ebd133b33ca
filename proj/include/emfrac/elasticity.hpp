#ifndef EMFRAC_ELASTICITY_HPP
#define EMFRAC_ELASTICITY_HPP

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "emfrac/grid.hpp"
#include "emfrac/material.hpp"

namespace emfrac {

/// Discrete operator of the degraded anti-plane problem, reduced to the free
/// (non-Dirichlet) nodes. The underlying discrete energy is
///   E(u) = sum_cells (v_c^2 + k_eps) * mu * |grad u|_c^2 * h^2
/// with v_c the cell-average damage and the cell-centered bilinear gradient.
struct SparseOperator {
    Eigen::SparseMatrix<double> matrix;  // free x free, symmetric PSD
    std::vector<int> free_index;         // node id -> free index, -1 if fixed
    std::vector<int> free_nodes;         // free index -> node id
    std::uint64_t damage_hash = 0;       // FNV-1a over the damage field bytes
};

std::uint64_t hash_damage(const DamageField& v);

/// Full pure-Neumann stiffness over all nodes (row sums vanish); used by the
/// reduced assembly and exposed for operator-level checks.
Eigen::SparseMatrix<double> assemble_neumann_matrix(const Grid2& grid,
                                                    const DamageField& v,
                                                    const Material& mat);

SparseOperator assemble_operator(const Grid2& grid, const BoundaryPartition& part,
                                 const DamageField& v, const Material& mat);

/// Minimizes the discrete energy subject to u = bc on GammaU1/GammaU2 nodes.
/// Jacobi-preconditioned CG with relative residual `tol` and iteration cap
/// 50*(nx*ny). `guess` (optional) warm-starts the iteration.
ScalarField solve_equilibrium(const Grid2& grid, const BoundaryPartition& part,
                              const DirichletData& bc, const DamageField& v,
                              const Material& mat, double tol = 1e-10,
                              const ScalarField* guess = nullptr);

/// sum_cells (v_c^2 + k_eps) * mu * |grad u|_c^2 * h^2
double elastic_energy(const ScalarField& u, const DamageField& v,
                      const Material& mat);

/// Cell-centered stress mu * grad u (undegraded).
CellVectorField stress_field(const ScalarField& u, const Material& mat);

/// Discrete boundary pairing <T(K) a, w> = sum_cells 2 (v_c^2+k_eps) mu
/// (grad u_a . grad w) h^2 for an admissible extension w of the boundary
/// data b. Equilibrium of u_a makes the value extension-independent.
double volume_pairing(const ScalarField& u_a, const ScalarField& w,
                      const DamageField& v, const Material& mat);

/// Pairing computed with w = u(b); symmetric by construction.
double dtn_pairing(const Grid2& grid, const BoundaryPartition& part,
                   const DirichletData& bc_a, const DirichletData& bc_b,
                   const DamageField& v, const Material& mat, double tol = 1e-10);

}  // namespace emfrac

#endif
